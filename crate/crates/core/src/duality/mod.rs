//! Fenchel conjugates, penalty functions and numerical certification of the
//! dual representation
//!
//! `ρ(X) = esssup { E[X·Z | F] - ρ*(Z) : Z <= 0, E[Z_i | F] = -1 }`.
//!
//! Everything is solved block by block. Built-in measures have closed-form
//! conjugates and maximizing densities (Gibbs, tail, point mass); custom
//! measures go through [`crate::optim`].
//!
//! On a finite space every module here is finite-dimensional, so weak and
//! weak-* closedness coincide with norm closedness and the corresponding
//! characterizations hold trivially; only lower semicontinuity along
//! sequences ([`fatou_check`]) is tested.

mod fatou;

pub use fatou::{fatou_check, FatouBucket, FatouOptions, FatouReport};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lpmod::{pair, DualElement, Position};
use crate::optim::{maximize_concave, MaximizeOptions, Supremum};
use crate::prob::SubAlgebra;
use crate::randvar::{ExtRandVar, RandVar};
use crate::risk::{worst_first, RiskKind, RiskMeasure};

/// Coordinates of a dual element count as common when they agree to this.
const COMMON_TOL: f64 = 1e-10;
/// Relative slack on the density box `q <= 1/λ`.
const BOX_TOL: f64 = 1e-12;
/// Weak duality slack.
pub const WEAK_DUALITY_TOL: f64 = 1e-8;
/// Relative accuracy demanded of the cash shift that puts a position on the
/// boundary of the acceptance set.
const CASH_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Gap accepted as a certificate of strong duality.
    pub tol: f64,
    pub maximize: MaximizeOptions,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            maximize: MaximizeOptions::default(),
        }
    }
}

/// Numerical certificate for `ρ(x) = sup_Z E[x·Z | F] - ρ*(Z)`.
#[derive(Clone, Debug)]
pub struct DualityReport {
    pub x: Position,
    pub rho_value: RandVar,
    /// `E[x·Z* | F] - ρ*(Z*)` at the returned maximizer.
    pub dual_value: RandVar,
    /// `rho_value - dual_value`.
    pub gap: RandVar,
    pub argmax_z: DualElement,
    pub iterations: usize,
    pub tolerance: f64,
}

impl DualityReport {
    pub fn max_gap(&self) -> f64 {
        self.gap.values().iter().fold(0.0, |m, g| m.max(g.abs()))
    }

    /// Gap within tolerance on every block and never below the weak duality slack.
    pub fn certified(&self) -> bool {
        self.gap.values().iter().all(|&g| g >= -WEAK_DUALITY_TOL && g <= self.tolerance)
    }
}

fn ensure_dual(rho: &RiskMeasure, z: &DualElement) -> Result<()> {
    rho.ensure_input(z.position())
}

/// Per block: the density `q = -Z_1` when every coordinate of `z` agrees.
fn common_density(z: &DualElement, f: &SubAlgebra, b: usize) -> Option<Vec<f64>> {
    let pos = z.position();
    f.block(b)
        .iter()
        .map(|&a| {
            let row = pos.row(a);
            let first = row[0];
            row.iter()
                .all(|v| (v - first).abs() <= COMMON_TOL * (1.0 + first.abs()))
                .then_some(-first)
        })
        .collect()
}

fn builtin_conjugate_block(rho: &RiskMeasure, z: &DualElement, b: usize) -> f64 {
    let f = rho.algebra();
    let Some(q) = common_density(z, f, b) else {
        return f64::INFINITY;
    };
    let probs = f.cond_probs(b);
    match rho.kind() {
        RiskKind::Entropic { gamma } => {
            let g = gamma.block_value(f, b);
            let entropy: f64 = probs
                .iter()
                .zip(&q)
                .filter(|(_, &q)| q > 0.0)
                .map(|(p, q)| p * q * q.ln())
                .sum();
            entropy / g
        }
        RiskKind::AverageValueAtRisk { lambda } => {
            let cap = 1.0 / lambda.block_value(f, b);
            if q.iter().all(|&q| q <= cap * (1.0 + BOX_TOL)) {
                0.0
            } else {
                f64::INFINITY
            }
        }
        RiskKind::WorstCase => 0.0,
        RiskKind::Custom(_) => unreachable!(),
    }
}

/// Candidate escape directions on block `b`: single entries and differences
/// of coordinates at one atom, both signs.
fn block_rays(f: &SubAlgebra, b: usize, d: usize) -> Vec<Vec<f64>> {
    let n = f.block(b).len() * d;
    let mut rays = Vec::new();
    for a in 0..f.block(b).len() {
        for i in 0..d {
            for sign in [1.0, -1.0] {
                let mut r = vec![0.0; n];
                r[a * d + i] = sign;
                rays.push(r);
            }
            for j in i + 1..d {
                for sign in [1.0, -1.0] {
                    let mut r = vec![0.0; n];
                    r[a * d + i] = sign;
                    r[a * d + j] = -sign;
                    rays.push(r);
                }
            }
        }
    }
    rays
}

/// Embeds block values into an otherwise zero position.
fn embed(template: &Position, f: &SubAlgebra, b: usize, v: &[f64]) -> Position {
    let mut x = template.clone();
    x.set_block_vector(f, b, v);
    x
}

fn block_pair(x: &Position, z: &DualElement, f: &SubAlgebra, b: usize) -> f64 {
    let probs = f.cond_probs(b);
    f.block(b)
        .iter()
        .zip(&probs)
        .map(|(&a, p)| p * x.row(a).iter().zip(z.position().row(a)).map(|(x, z)| x * z).sum::<f64>())
        .sum()
}

/// `sup_v objective(v)` over positions supported on block `b`.
fn block_supremum(
    rho: &RiskMeasure,
    b: usize,
    objective: impl Fn(&Position) -> Result<f64>,
    opts: &MaximizeOptions,
) -> Result<(f64, usize)> {
    let f = rho.algebra();
    let d = rho.dim();
    let template = Position::zeros(f.space(), d);
    let n = f.block(b).len() * d;
    let obj = |v: &[f64]| objective(&embed(&template, f, b, v));
    Ok(match maximize_concave(obj, n, &block_rays(f, b, d), opts)? {
        Supremum::Finite { value, iterations, .. } => (value, iterations),
        Supremum::Unbounded { .. } => (f64::INFINITY, 0),
    })
}

/// `ρ*(z) = esssup_X E[X·z | F] - ρ(X)`, blockwise. `+inf` on every block
/// where `z` is not admissible.
pub fn conjugate(rho: &RiskMeasure, z: &DualElement) -> Result<ExtRandVar> {
    conjugate_with(rho, z, &MaximizeOptions::default()).map(|(v, _)| v)
}

fn conjugate_with(rho: &RiskMeasure, z: &DualElement, opts: &MaximizeOptions) -> Result<(ExtRandVar, usize)> {
    ensure_dual(rho, z)?;
    let f = rho.algebra();
    let admissible = z.admissible_blocks(f)?;
    let per_block = (0..f.num_blocks())
        .into_par_iter()
        .map(|b| {
            if !admissible[b] {
                return Ok((f64::INFINITY, 0));
            }
            if rho.is_builtin() {
                return Ok((builtin_conjugate_block(rho, z, b), 0));
            }
            block_supremum(
                rho,
                b,
                |x| Ok(block_pair(x, z, f, b) - rho.eval(x)?.block_value(f, b)),
                opts,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let iterations = per_block.iter().map(|(_, it)| it).sum();
    let values: Vec<f64> = per_block.into_iter().map(|(v, _)| v).collect();
    Ok((ExtRandVar::from_blocks(f, &values)?, iterations))
}

/// Cash `c` per coordinate with `ρ(x + c·𝟙) = 0` on block `b`.
fn boundary_shift(rho: &RiskMeasure, x: &Position, b: usize) -> Result<f64> {
    let f = rho.algebra();
    let d = rho.dim() as f64;
    let at = |c: f64| -> Result<f64> {
        let shifted = x.add_cash_all(&RandVar::constant(f.space(), c))?;
        Ok(rho.eval(&shifted)?.block_value(f, b))
    };
    let c = rho.eval(x)?.block_value(f, b) / d;
    let residual = at(c)?;
    if residual.abs() <= CASH_TOL * (1.0 + c.abs()) {
        return Ok(c);
    }
    // ρ(x + c𝟙) is nonincreasing in c: bracket the root and bisect.
    let mut step = 1.0 + c.abs();
    let (mut lo, mut hi) = (c, c);
    if residual > 0.0 {
        while at(hi)? > 0.0 {
            hi += step;
            step *= 2.0;
            if step > 1e12 {
                return Err(Error::OptimizerFailure("cash shift does not reach the acceptance boundary".into()));
            }
        }
    } else {
        while at(lo)? < 0.0 {
            lo -= step;
            step *= 2.0;
            if step > 1e12 {
                return Err(Error::OptimizerFailure("cash shift does not reach the acceptance boundary".into()));
            }
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if at(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * (1.0 + mid.abs()) {
            break;
        }
    }
    Ok(hi)
}

/// `esssup { E[X·z | F] : ρ(X) <= 0 }` computed on the acceptance boundary:
/// each candidate `X` is shifted by cash until `ρ = 0` and the pairing is
/// maximized over the unshifted `X`. Requires admissible `z`.
pub fn penalty_from_acceptance(rho: &RiskMeasure, z: &DualElement) -> Result<ExtRandVar> {
    penalty_from_acceptance_with(rho, z, &MaximizeOptions::default())
}

pub fn penalty_from_acceptance_with(rho: &RiskMeasure, z: &DualElement, opts: &MaximizeOptions) -> Result<ExtRandVar> {
    ensure_dual(rho, z)?;
    let f = rho.algebra();
    if let Some(block) = z.admissible_blocks(f)?.iter().position(|ok| !ok) {
        return Err(Error::NotAdmissible { block });
    }
    let values = (0..f.num_blocks())
        .into_par_iter()
        .map(|b| {
            let objective = |x: &Position| -> Result<f64> {
                let c = boundary_shift(rho, x, b)?;
                let shifted = x.add_cash_all(&RandVar::constant(f.space(), c))?;
                Ok(block_pair(&shifted, z, f, b))
            };
            block_supremum(rho, b, objective, opts).map(|(v, _)| v)
        })
        .collect::<Result<Vec<_>>>()?;
    ExtRandVar::from_blocks(f, &values)
}

/// Maximizing density of the dual problem for a built-in measure on block `b`.
fn builtin_density(rho: &RiskMeasure, b: usize, agg: &[f64], probs: &[f64]) -> Vec<f64> {
    let f = rho.algebra();
    match rho.kind() {
        RiskKind::Entropic { gamma } => {
            let g = gamma.block_value(f, b);
            let top = agg.iter().map(|s| -g * s).fold(f64::NEG_INFINITY, f64::max);
            let w: Vec<f64> = agg.iter().map(|s| (-g * s - top).exp()).collect();
            let norm: f64 = probs.iter().zip(&w).map(|(p, w)| p * w).sum();
            w.iter().map(|w| w / norm).collect()
        }
        RiskKind::AverageValueAtRisk { lambda } => {
            let l = lambda.block_value(f, b);
            let mut q = vec![0.0; agg.len()];
            let mut remaining = l;
            for i in worst_first(agg) {
                if remaining <= 0.0 {
                    break;
                }
                let take = probs[i].min(remaining);
                q[i] = take / (probs[i] * l);
                remaining -= take;
            }
            q
        }
        RiskKind::WorstCase => {
            let mut q = vec![0.0; agg.len()];
            let worst = worst_first(agg)[0];
            q[worst] = 1.0 / probs[worst];
            q
        }
        RiskKind::Custom(_) => unreachable!(),
    }
}

/// Dual candidate for a custom measure: the finite-difference gradient of
/// `ρ` at `x`, rescaled by the conditional atom weights and projected onto
/// the admissible set.
fn gradient_candidate(rho: &RiskMeasure, x: &Position, step: f64) -> Result<DualElement> {
    let f = rho.algebra();
    let d = rho.dim();
    let mut z = Position::zeros(x.space(), d);
    for b in 0..f.num_blocks() {
        let probs = f.cond_probs(b);
        for (k, &a) in f.block(b).iter().enumerate() {
            for i in 0..d {
                let h = step * (1.0 + x.get(a, i).abs());
                let mut up = x.clone();
                up.set(a, i, x.get(a, i) + h);
                let mut down = x.clone();
                down.set(a, i, x.get(a, i) - h);
                let slope = (rho.eval(&up)?.block_value(f, b) - rho.eval(&down)?.block_value(f, b)) / (2.0 * h);
                z.set(a, i, (slope / probs[k]).min(0.0));
            }
        }
        for i in 0..d {
            let mass: f64 = f.block(b).iter().zip(&probs).map(|(&a, p)| p * z.get(a, i)).sum();
            for &a in f.block(b) {
                let v = if mass < 0.0 { -z.get(a, i) / mass } else { -1.0 };
                z.set(a, i, v);
            }
        }
    }
    Ok(DualElement::new(z))
}

/// Solves the dual problem at `x` and certifies the gap.
pub fn represent(rho: &RiskMeasure, x: &Position, opts: &SolverOptions) -> Result<DualityReport> {
    let f = rho.algebra();
    let rho_value = rho.eval(x)?;
    let (z, iterations) = if rho.is_builtin() {
        let s = x.aggregate();
        let mut q = vec![0.0; x.space().len()];
        for b in 0..f.num_blocks() {
            let probs = f.cond_probs(b);
            let agg: Vec<f64> = f.block(b).iter().map(|&a| s.get(a)).collect();
            for (&a, v) in f.block(b).iter().zip(builtin_density(rho, b, &agg, &probs)) {
                q[a] = v;
            }
        }
        (DualElement::from_density(&RandVar::new(x.space(), q)?, rho.dim()), 0)
    } else {
        (gradient_candidate(rho, x, opts.maximize.fd_step)?, 0)
    };
    let (penalty, inner) = conjugate_with(rho, &z, &opts.maximize)?;
    let dual = pair(x, &z, f)?.to_ext().sub(&penalty)?;
    let dual_value = dual
        .to_finite()
        .ok_or_else(|| Error::OptimizerFailure("dual candidate has infinite penalty".into()))?;
    let gap = rho_value.sub(&dual_value)?;
    Ok(DualityReport {
        x: x.clone(),
        rho_value,
        dual_value,
        gap,
        argmax_z: z,
        iterations: iterations + inner,
        tolerance: opts.tol,
    })
}

#[derive(Clone, Debug)]
pub struct BiconjugateReport {
    /// `|ρ(x) - ρ**(x)|` per probe.
    pub gaps: Vec<RandVar>,
    pub max_gap: f64,
    pub tolerance: f64,
}

impl BiconjugateReport {
    pub fn passed(&self) -> bool {
        self.max_gap <= self.tolerance
    }
}

/// Checks `ρ = ρ**` at each probe through the dual problem.
pub fn biconjugate_check(rho: &RiskMeasure, probes: &[Position], opts: &SolverOptions) -> Result<BiconjugateReport> {
    if probes.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let gaps = probes
        .iter()
        .map(|x| represent(rho, x, opts).map(|r| r.gap.abs()))
        .collect::<Result<Vec<_>>>()?;
    let max_gap = gaps
        .iter()
        .flat_map(|g| g.values().iter().copied())
        .fold(0.0, f64::max);
    Ok(BiconjugateReport {
        gaps,
        max_gap,
        tolerance: opts.tol,
    })
}

/// Convenience check of `E[x·z | F] - ρ*(z) <= ρ(x) + tol` on every block.
pub fn weak_duality_holds(rho: &RiskMeasure, x: &Position, z: &DualElement) -> Result<bool> {
    let f = rho.algebra();
    let lhs = pair(x, z, f)?;
    let penalty = conjugate(rho, z)?;
    let rhs = rho.eval(x)?;
    Ok((0..f.num_blocks()).all(|b| {
        let a = f.block(b)[0];
        lhs.get(a) - penalty.get(a) <= rhs.get(a) + WEAK_DUALITY_TOL
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpmod::Cone;
    use crate::prob::ProbSpace;
    use crate::randvar::cond_expect;
    use std::sync::Arc;

    fn two_atoms() -> (ProbSpace, SubAlgebra) {
        let s = ProbSpace::uniform(2).unwrap();
        let f = SubAlgebra::trivial(&s);
        (s, f)
    }

    fn pos(s: &ProbSpace, v: &[f64]) -> Position {
        Position::new(s, v.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    fn density(s: &ProbSpace, q: &[f64], d: usize) -> DualElement {
        DualElement::from_density(&RandVar::new(s, q.to_vec()).unwrap(), d)
    }

    #[test]
    fn conjugate_closed_forms() {
        let (s, f) = two_atoms();
        let ent = RiskMeasure::entropic(&f, Cone::orthant(1), RandVar::constant(&s, 1.0)).unwrap();
        assert_eq!(conjugate(&ent, &density(&s, &[1.0, 1.0], 1)).unwrap().get(0), 0.0);
        let v = conjugate(&ent, &density(&s, &[1.5, 0.5], 1)).unwrap().get(0);
        assert!((v - 0.5 * (1.5 * 1.5f64.ln() + 0.5 * 0.5f64.ln())).abs() < 1e-15);

        let avar = RiskMeasure::avar(&f, Cone::orthant(1), RandVar::constant(&s, 0.5)).unwrap();
        assert_eq!(conjugate(&avar, &density(&s, &[2.0, 0.0], 1)).unwrap().get(0), 0.0);
        let wc = RiskMeasure::worst_case(&f, Cone::orthant(1)).unwrap();
        assert_eq!(conjugate(&wc, &density(&s, &[2.0, 0.0], 1)).unwrap().get(0), 0.0);
        // Wrong mass: not admissible.
        assert_eq!(conjugate(&wc, &density(&s, &[1.0, 0.5], 1)).unwrap().get(0), f64::INFINITY);
    }

    #[test]
    fn avar_box_is_enforced() {
        let s = ProbSpace::uniform(4).unwrap();
        let f = SubAlgebra::trivial(&s);
        let avar = RiskMeasure::avar(&f, Cone::orthant(1), RandVar::constant(&s, 0.5)).unwrap();
        let z = density(&s, &[2.5, 1.5, 0.0, 0.0], 1);
        assert_eq!(conjugate(&avar, &z).unwrap().get(0), f64::INFINITY);
        assert_eq!(penalty_from_acceptance(&avar, &z).unwrap().get(0), f64::INFINITY);
    }

    #[test]
    fn non_common_coordinates_are_infinite() {
        let (s, f) = two_atoms();
        let wc = RiskMeasure::worst_case(&f, Cone::orthant(2)).unwrap();
        let z = DualElement::new(Position::new(&s, vec![vec![-1.5, -0.5], vec![-0.5, -1.5]]).unwrap());
        assert!(z.is_admissible(&f).unwrap());
        assert_eq!(conjugate(&wc, &z).unwrap().get(0), f64::INFINITY);
        assert_eq!(penalty_from_acceptance(&wc, &z).unwrap().get(0), f64::INFINITY);
    }

    #[test]
    fn penalty_matches_conjugate() {
        let s = ProbSpace::from_weights(&[0.2, 0.3, 0.1, 0.4]).unwrap();
        let f = SubAlgebra::new(&s, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let gamma = RandVar::from_blocks(&f, &[1.0, 0.5]).unwrap();
        let ent = RiskMeasure::entropic(&f, Cone::orthant(2), gamma).unwrap();
        let q = RandVar::new(&s, vec![1.4, 0.733_333_333_333_333_3, 0.6, 1.1]).unwrap();
        let z = DualElement::from_density(&q, 2);
        assert!(z.is_admissible(&f).unwrap());
        let exact = conjugate(&ent, &z).unwrap();
        let numeric = penalty_from_acceptance(&ent, &z).unwrap();
        for a in 0..4 {
            assert!((exact.get(a) - numeric.get(a)).abs() < 1e-6, "{exact:?} vs {numeric:?}");
        }
        let wc = RiskMeasure::worst_case(&f, Cone::orthant(2)).unwrap();
        assert!(penalty_from_acceptance(&wc, &z).unwrap().values().iter().all(|v| v.abs() < 1e-9));
        assert_eq!(
            penalty_from_acceptance(&wc, &density(&s, &[1.0, 1.0, 1.0, 2.0], 2)).unwrap_err(),
            Error::NotAdmissible { block: 1 }
        );
    }

    #[test]
    fn represent_examples() {
        let (s, f) = two_atoms();
        let opts = SolverOptions::default();
        let ent = RiskMeasure::entropic(&f, Cone::orthant(1), RandVar::constant(&s, 1.0)).unwrap();
        let r = represent(&ent, &pos(&s, &[0.0, 1.0]), &opts).unwrap();
        assert!(r.max_gap() <= 1e-8);
        assert!((r.dual_value.get(0) + 0.379_89).abs() < 1e-5);

        let avar = RiskMeasure::avar(&f, Cone::orthant(1), RandVar::constant(&s, 0.5)).unwrap();
        let r = represent(&avar, &pos(&s, &[-2.0, 4.0]), &opts).unwrap();
        assert!((r.dual_value.get(0) - 2.0).abs() <= 1e-10 && r.max_gap() <= 1e-10);
        assert_eq!(r.argmax_z.position().values(), &[-2.0, -0.0]);
    }

    #[test]
    fn represent_cash_positions() {
        let s = ProbSpace::uniform(3).unwrap();
        let f = SubAlgebra::new(&s, vec![vec![0], vec![1, 2]]).unwrap();
        let x = Position::constant(&s, &[0.5, 0.5, 0.5]);
        for rho in [
            RiskMeasure::entropic(&f, Cone::orthant(3), RandVar::constant(&s, 2.0)).unwrap(),
            RiskMeasure::avar(&f, Cone::orthant(3), RandVar::constant(&s, 0.25)).unwrap(),
            RiskMeasure::worst_case(&f, Cone::orthant(3)).unwrap(),
        ] {
            let r = represent(&rho, &x, &SolverOptions::default()).unwrap();
            assert!(r.dual_value.values().iter().all(|v| (v + 1.5).abs() < 1e-12));
            assert!(r.max_gap() < 1e-12);
        }
    }

    #[test]
    fn custom_measure_dual() {
        let s = ProbSpace::from_weights(&[0.25, 0.25, 0.5]).unwrap();
        let f = SubAlgebra::new(&s, vec![vec![0, 1], vec![2]]).unwrap();
        let g = f.clone();
        let evaluator: crate::risk::Evaluator = Arc::new(move |x: &Position| {
            Ok(cond_expect(&x.aggregate(), &g)?.scale(-1.0))
        });
        let rho = RiskMeasure::custom_unchecked(&f, Cone::orthant(1), evaluator).unwrap();
        let x = pos(&s, &[1.0, -2.0, 0.5]);
        let r = represent(&rho, &x, &SolverOptions::default()).unwrap();
        assert!(r.max_gap() < 1e-6, "{:?}", r.gap);
        let z = density(&s, &[1.0, 1.0, 1.0], 1);
        assert!(conjugate(&rho, &z).unwrap().values().iter().all(|v| v.abs() < 1e-9));
        let z = density(&s, &[1.5, 0.5, 1.0], 1);
        assert_eq!(conjugate(&rho, &z).unwrap().get(0), f64::INFINITY);
    }

    #[test]
    fn biconjugate_at_zero() {
        let (s, f) = two_atoms();
        let wc = RiskMeasure::worst_case(&f, Cone::orthant(1)).unwrap();
        let report = biconjugate_check(&wc, &[Position::zeros(&s, 1), pos(&s, &[3.0, -1.0])], &SolverOptions::default()).unwrap();
        assert_eq!(report.max_gap, 0.0);
        assert!(report.passed());
    }
}
