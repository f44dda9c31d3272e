//! Portfolio positions in the conditional `L^p` module, conditional norms,
//! the duality pairing `E[X·Z | F]`, polyhedral cones and the cone order.

use std::fmt;

use crate::error::{Error, Result};
use crate::linprog::{Cmp, LinearProgram, LpOutcome, Sense};
use crate::prob::{ProbSpace, SubAlgebra};
use crate::randvar::{AtomSet, RandVar};

/// Tolerance for membership of a difference in a cone.
pub const CONE_TOL: f64 = 1e-12;
/// Tolerance for admissibility of dual elements.
pub const ADMISSIBILITY_TOL: f64 = 1e-10;

/// An atoms × d matrix of finite reals (row-major, one row per atom).
#[derive(Clone, PartialEq)]
pub struct Position {
    space: ProbSpace,
    d: usize,
    values: Vec<f64>,
}

impl Position {
    /// One row of `d` values per atom.
    pub fn new(space: &ProbSpace, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                got: rows.len(),
            });
        }
        let d = rows.first().map_or(0, Vec::len);
        if d == 0 {
            return Err(Error::ShapeMismatch("positions need at least one coordinate".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::ShapeMismatch(format!(
                "row of length {} in a {d}-coordinate position",
                bad.len()
            )));
        }
        Self::from_flat(space, d, rows.concat())
    }

    pub fn from_flat(space: &ProbSpace, d: usize, values: Vec<f64>) -> Result<Self> {
        if d == 0 || values.len() != space.len() * d {
            return Err(Error::ShapeMismatch(format!(
                "{} values for {} atoms x {d} coordinates",
                values.len(),
                space.len()
            )));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self {
            space: space.clone(),
            d,
            values,
        })
    }

    pub fn zeros(space: &ProbSpace, d: usize) -> Self {
        Self {
            space: space.clone(),
            d,
            values: vec![0.0; space.len() * d],
        }
    }

    /// Stacks `d` random variables as coordinates.
    pub fn from_coords(coords: &[RandVar]) -> Result<Self> {
        let first = coords.first().ok_or(Error::EmptyFamily)?;
        let space = first.space().clone();
        let d = coords.len();
        let mut values = vec![0.0; space.len() * d];
        for (i, c) in coords.iter().enumerate() {
            space.ensure_same(c.space())?;
            for (a, &v) in c.values().iter().enumerate() {
                values[a * d + i] = v;
            }
        }
        Ok(Self { space, d, values })
    }

    /// The deterministic position `Σ_i c_i e_i`.
    pub fn constant(space: &ProbSpace, c: &[f64]) -> Self {
        Self {
            space: space.clone(),
            d: c.len(),
            values: (0..space.len()).flat_map(|_| c.iter().copied()).collect(),
        }
    }

    pub fn space(&self) -> &ProbSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, atom: usize, i: usize) -> f64 {
        self.values[atom * self.d + i]
    }

    pub fn set(&mut self, atom: usize, i: usize, v: f64) {
        self.values[atom * self.d + i] = v;
    }

    pub fn row(&self, atom: usize) -> &[f64] {
        &self.values[atom * self.d..(atom + 1) * self.d]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.values.chunks(self.d).map(<[f64]>::to_vec).collect()
    }

    pub fn coord(&self, i: usize) -> RandVar {
        RandVar::from_vec_unchecked(&self.space, self.values.iter().skip(i).step_by(self.d).copied().collect())
    }

    /// The sum aggregate `Σ_i X_i`.
    pub fn aggregate(&self) -> RandVar {
        RandVar::from_vec_unchecked(&self.space, self.values.chunks(self.d).map(|r| r.iter().sum()).collect())
    }

    pub fn ensure_shape(&self, other: &Position) -> Result<()> {
        self.space.ensure_same(&other.space)?;
        if self.d != other.d {
            return Err(Error::ShapeMismatch(format!("d = {} vs d = {}", self.d, other.d)));
        }
        Ok(())
    }

    fn zip(&self, other: &Position, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.ensure_shape(other)?;
        Ok(Self {
            space: self.space.clone(),
            d: self.d,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Position) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Position) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            space: self.space.clone(),
            d: self.d,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    /// Pointwise product with a scalar random variable: `Y·X`.
    pub fn mul_rv(&self, y: &RandVar) -> Result<Self> {
        self.space.ensure_same(y.space())?;
        let mut out = self.clone();
        for (a, row) in out.values.chunks_mut(self.d).enumerate() {
            row.iter_mut().for_each(|v| *v *= y.get(a));
        }
        Ok(out)
    }

    /// `X + Y e_i`.
    pub fn add_cash(&self, y: &RandVar, i: usize) -> Result<Self> {
        self.space.ensure_same(y.space())?;
        if i >= self.d {
            return Err(Error::ShapeMismatch(format!("coordinate {i} out of range")));
        }
        let mut out = self.clone();
        for a in 0..self.space.len() {
            out.values[a * self.d + i] += y.get(a);
        }
        Ok(out)
    }

    /// `X + Y·Σ_i e_i`.
    pub fn add_cash_all(&self, y: &RandVar) -> Result<Self> {
        self.space.ensure_same(y.space())?;
        let mut out = self.clone();
        for (a, row) in out.values.chunks_mut(self.d).enumerate() {
            row.iter_mut().for_each(|v| *v += y.get(a));
        }
        Ok(out)
    }

    /// `1_A X`.
    pub fn mask(&self, set: &AtomSet) -> Self {
        let mut out = Self::zeros(&self.space, self.d);
        for &a in set.atoms() {
            out.values[a * self.d..(a + 1) * self.d].copy_from_slice(self.row(a));
        }
        out
    }

    /// Values on block `b`, atom-major.
    pub fn block_vector(&self, f: &SubAlgebra, b: usize) -> Vec<f64> {
        f.block(b).iter().flat_map(|&a| self.row(a).iter().copied()).collect()
    }

    /// Overwrites the values on block `b` from an atom-major vector.
    pub fn set_block_vector(&mut self, f: &SubAlgebra, b: usize, v: &[f64]) {
        for (k, &a) in f.block(b).iter().enumerate() {
            self.values[a * self.d..(a + 1) * self.d].copy_from_slice(&v[k * self.d..(k + 1) * self.d]);
        }
    }

    pub fn max_abs_diff(&self, other: &Position) -> Result<f64> {
        self.ensure_shape(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.values.chunks(self.d)).finish()
    }
}

/// An element of `L^1_F(E)^d` used through the pairing `E[X·Z | F]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualElement(Position);

impl DualElement {
    pub fn new(z: Position) -> Self {
        Self(z)
    }

    pub fn position(&self) -> &Position {
        &self.0
    }

    pub fn into_position(self) -> Position {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.d
    }

    /// Per block: `Z <= 0` and `E[Z_i | F] = -1` for every coordinate.
    pub fn admissible_blocks(&self, f: &SubAlgebra) -> Result<Vec<bool>> {
        self.0.space.ensure_same(f.space())?;
        let d = self.0.d;
        Ok((0..f.num_blocks())
            .map(|b| {
                let probs = f.cond_probs(b);
                let atoms = f.block(b);
                let nonpositive = atoms.iter().all(|&a| self.0.row(a).iter().all(|&v| v <= 0.0));
                nonpositive
                    && (0..d).all(|i| {
                        let mean: f64 = atoms.iter().zip(&probs).map(|(&a, p)| p * self.0.get(a, i)).sum();
                        (mean + 1.0).abs() <= ADMISSIBILITY_TOL
                    })
            })
            .collect())
    }

    pub fn is_admissible(&self, f: &SubAlgebra) -> Result<bool> {
        Ok(self.admissible_blocks(f)?.into_iter().all(|ok| ok))
    }

    /// The admissible element `-q·(1,...,1)` for a density `q` with `E[q|F] = 1`.
    pub fn from_density(q: &RandVar, d: usize) -> Self {
        let values = q.values().iter().flat_map(|&v| std::iter::repeat_n(-v, d)).collect();
        Self(Position {
            space: q.space().clone(),
            d,
            values,
        })
    }
}

/// A polyhedral cone `K = {x : n_j·x >= 0 for all j}` with nonnegative normals.
#[derive(Clone, Debug, PartialEq)]
pub struct Cone {
    d: usize,
    inequalities: Vec<Vec<f64>>,
}

impl Cone {
    /// Validates the normals and certifies that `Σ_i k_i >= 0` on `K`.
    pub fn new(d: usize, inequalities: Vec<Vec<f64>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidCone("dimension must be positive".into()));
        }
        for (j, n) in inequalities.iter().enumerate() {
            if n.len() != d {
                return Err(Error::InvalidCone(format!("normal {j} has length {}, expected {d}", n.len())));
            }
            if n.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::InvalidCone(format!(
                    "normal {j} has a negative or non-finite entry; K must contain the positive orthant"
                )));
            }
        }
        let cone = Self { d, inequalities };
        cone.certify_aggregate()?;
        Ok(cone)
    }

    /// The positive orthant `R^d_+`.
    pub fn orthant(d: usize) -> Self {
        let inequalities = (0..d)
            .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self { d, inequalities }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn inequalities(&self) -> &[Vec<f64>] {
        &self.inequalities
    }

    pub fn contains(&self, v: &[f64]) -> bool {
        self.inequalities
            .iter()
            .all(|n| n.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() >= -CONE_TOL)
    }

    /// Checks `min Σ x_i  s.t. x ∈ K, ‖x‖_1 <= 1` is nonnegative.
    pub fn certify_aggregate(&self) -> Result<()> {
        let d = self.d;
        // x = u - v with u, v >= 0.
        let mut objective = vec![1.0; d];
        objective.extend(std::iter::repeat_n(-1.0, d));
        let mut lp = LinearProgram::new(Sense::Minimize, objective);
        for n in &self.inequalities {
            let mut row = n.clone();
            row.extend(n.iter().map(|v| -v));
            lp.constraint(row, Cmp::Ge, 0.0);
        }
        lp.constraint(vec![1.0; 2 * d], Cmp::Le, 1.0);
        match lp.solve()? {
            LpOutcome::Optimal { value, .. } if value >= -CONE_TOL => Ok(()),
            LpOutcome::Optimal { value, .. } => Err(Error::InvalidCone(format!(
                "aggregate direction is not nonnegative on K (min Σx = {value})"
            ))),
            other => Err(Error::LpFailure(format!("aggregate certificate: {other:?}"))),
        }
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::BadExponent(p))
    }
}

/// Conjugate exponent `q` with `1/p + 1/q = 1`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    })
}

/// Blockwise `‖·|F‖_p` of a flat block vector with matching conditional weights.
fn block_norm(values: impl Iterator<Item = (f64, f64)>, p: f64) -> f64 {
    if p.is_infinite() {
        values.map(|(_, v)| v.abs()).fold(0.0, f64::max)
    } else if p == 1.0 {
        values.map(|(w, v)| w * v.abs()).sum()
    } else if p == 2.0 {
        values.map(|(w, v)| w * v * v).sum::<f64>().sqrt()
    } else {
        values.map(|(w, v)| w * v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Conditional norm `‖x | F‖_p`; `p = f64::INFINITY` is the blockwise maximum of `|x|`.
pub fn cond_norm(x: &RandVar, f: &SubAlgebra, p: f64) -> Result<RandVar> {
    check_exponent(p)?;
    x.space().ensure_same(f.space())?;
    let per_block: Vec<f64> = (0..f.num_blocks())
        .map(|b| {
            let probs = f.cond_probs(b);
            block_norm(probs.into_iter().zip(f.block(b).iter().map(|&a| x.get(a))), p)
        })
        .collect();
    RandVar::from_blocks(f, &per_block)
}

/// How the coordinate norms are combined for finite `p`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NormConvention {
    /// `(Σ_i ‖X_i|F‖_p^p)^{1/p}`, a genuine `L^0`-norm.
    #[default]
    Corrected,
    /// `(Σ_i ‖X_i|F‖_p)^{1/p}`, kept for comparison; homogeneous of degree `1/p` only.
    Literal,
}

/// `|||X | F|||_p` with the corrected convention.
pub fn portfolio_norm(x: &Position, f: &SubAlgebra, p: f64) -> Result<RandVar> {
    portfolio_norm_with(x, f, p, NormConvention::Corrected)
}

pub fn portfolio_norm_with(x: &Position, f: &SubAlgebra, p: f64, convention: NormConvention) -> Result<RandVar> {
    check_exponent(p)?;
    x.space().ensure_same(f.space())?;
    let coord_norms = (0..x.dim())
        .map(|i| cond_norm(&x.coord(i), f, p))
        .collect::<Result<Vec<_>>>()?;
    if let [single] = coord_norms.as_slice() {
        return Ok(single.clone());
    }
    let per_block: Vec<f64> = (0..f.num_blocks())
        .map(|b| {
            let norms = coord_norms.iter().map(|n| n.block_value(f, b));
            if p.is_infinite() {
                norms.fold(0.0, f64::max)
            } else {
                match convention {
                    NormConvention::Corrected => norms.map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p),
                    NormConvention::Literal => norms.sum::<f64>().powf(1.0 / p),
                }
            }
        })
        .collect();
    RandVar::from_blocks(f, &per_block)
}

/// The pairing `E[X·Z | F]`.
pub fn pair(x: &Position, z: &DualElement, f: &SubAlgebra) -> Result<RandVar> {
    let z = z.position();
    x.ensure_shape(z)?;
    x.space().ensure_same(f.space())?;
    let dot = RandVar::from_vec_unchecked(
        x.space(),
        (0..x.space().len())
            .map(|a| x.row(a).iter().zip(z.row(a)).map(|(u, v)| u * v).sum())
            .collect(),
    );
    crate::randvar::cond_expect(&dot, f)
}

/// Atoms where `x(ω) - y(ω) ∈ K`.
pub fn cone_geq(x: &Position, y: &Position, k: &Cone) -> Result<AtomSet> {
    x.ensure_shape(y)?;
    if k.d != x.d {
        return Err(Error::ShapeMismatch(format!("cone of dimension {} for d = {}", k.d, x.d)));
    }
    Ok(AtomSet::from_mask((0..x.space().len()).map(|a| {
        let diff: Vec<f64> = x.row(a).iter().zip(y.row(a)).map(|(u, v)| u - v).collect();
        k.contains(&diff)
    })))
}

/// Dual norm of the functional `X ↦ E[X·Z | F]` on `(L^p_F)^d`: the
/// conjugate-exponent norm `|||Z | F|||_q`.
pub fn dual_norm(z: &DualElement, f: &SubAlgebra, p: f64) -> Result<RandVar> {
    let q = conjugate_exponent(p)?;
    portfolio_norm(z.position(), f, q)
}
