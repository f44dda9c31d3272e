use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::lpmod::{portfolio_norm, Position};
use crate::randvar::{AtomSet, RandVar};

use super::RiskMeasure;

/// Slack for monotonicity, cash invariance, convexity and Lipschitz checks.
pub const AXIOM_TOL: f64 = 1e-9;
/// Slack for the local property.
pub const LOCALITY_TOL: f64 = 1e-12;

const SAMPLE_RANGE: f64 = 2.0;
const CONE_REJECTION_TRIES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Monotonicity,
    CashInvariance,
    Convexity,
    L0Convexity,
    LocalProperty,
    Lipschitz,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::Monotonicity,
        Axiom::CashInvariance,
        Axiom::Convexity,
        Axiom::L0Convexity,
        Axiom::LocalProperty,
        Axiom::Lipschitz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Monotonicity => "monotonicity",
            Axiom::CashInvariance => "cash_invariance",
            Axiom::Convexity => "convexity",
            Axiom::L0Convexity => "l0_convexity",
            Axiom::LocalProperty => "local_property",
            Axiom::Lipschitz => "lipschitz",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One failed check: the inequality missed by `excess` on `block`.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub axiom: Axiom,
    pub trial: usize,
    pub block: usize,
    pub excess: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub trials: usize,
    pub seed: u64,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, axiom: Axiom) -> usize {
        self.violations.iter().filter(|v| v.axiom == axiom).count()
    }
}

fn uniform_position(rng: &mut ChaCha8Rng, x: &Position) -> Position {
    let values = (0..x.values().len()).map(|_| rng.gen_range(-SAMPLE_RANGE..=SAMPLE_RANGE)).collect();
    Position::from_flat(x.space(), x.dim(), values).expect("finite samples")
}

fn block_scalars(rho: &RiskMeasure, rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> RandVar {
    let f = rho.algebra();
    let per_block: Vec<f64> = (0..f.num_blocks()).map(|_| rng.gen_range(lo..=hi)).collect();
    RandVar::from_blocks(f, &per_block).expect("finite samples")
}

/// A random element of `K` per atom: rejection from the box, falling back to
/// the nonnegative orthant, which `K` always contains.
fn cone_position(rho: &RiskMeasure, rng: &mut ChaCha8Rng, template: &Position) -> Position {
    let cone = rho.cone();
    let d = template.dim();
    let mut out = Position::zeros(template.space(), d);
    for atom in 0..template.space().len() {
        let scale = rng.gen_range(0.0..=SAMPLE_RANGE);
        let mut v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let mut tries = 0;
        while !cone.contains(&v) && tries < CONE_REJECTION_TRIES {
            v.iter_mut().for_each(|c| *c = rng.gen_range(-1.0..=1.0));
            tries += 1;
        }
        if !cone.contains(&v) {
            v.iter_mut().for_each(|c| *c = c.abs());
        }
        for (i, c) in v.into_iter().enumerate() {
            out.set(atom, i, scale * c);
        }
    }
    out
}

fn run_trial(rho: &RiskMeasure, seed: u64, trial: usize) -> Result<Vec<Violation>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let f = rho.algebra();
    let space = f.space();
    let d = rho.dim();
    let template = Position::zeros(space, d);

    let x = uniform_position(&mut rng, &template);
    let z = uniform_position(&mut rng, &template);
    let k = cone_position(rho, &mut rng, &template);
    let y = block_scalars(rho, &mut rng, -SAMPLE_RANGE, SAMPLE_RANGE);
    let lambda = block_scalars(rho, &mut rng, 0.0, 1.0);
    let alpha: f64 = rng.gen_range(0.0..=1.0);
    let chosen: Vec<bool> = (0..f.num_blocks()).map(|_| rng.gen_bool(0.5)).collect();
    let a = AtomSet::from_mask((0..space.len()).map(|atom| chosen[f.block_of(atom)]));

    let rx = rho.eval(&x)?;
    let rz = rho.eval(&z)?;
    let mut out = Vec::new();
    let mut record = |axiom: Axiom, lhs: &RandVar, rhs: &RandVar, tol: f64, two_sided: bool, only: Option<&AtomSet>| {
        for b in 0..f.num_blocks() {
            if let Some(set) = only {
                if !set.contains(f.block(b)[0]) {
                    continue;
                }
            }
            let gap = lhs.block_value(f, b) - rhs.block_value(f, b);
            let excess = if two_sided { gap.abs() } else { gap };
            if !(excess <= tol) {
                out.push(Violation {
                    axiom,
                    trial,
                    block: b,
                    excess,
                });
            }
        }
    };

    // X + k >= X in the cone order.
    let rk = rho.eval(&x.add(&k)?)?;
    record(Axiom::Monotonicity, &rk, &rx, AXIOM_TOL, false, None);

    let expected = rx.sub(&y)?;
    for i in 0..d {
        let shifted = rho.eval(&x.add_cash(&y, i)?)?;
        record(Axiom::CashInvariance, &shifted, &expected, AXIOM_TOL, true, None);
    }

    let mix = rho.eval(&x.scale(alpha).add(&z.scale(1.0 - alpha))?)?;
    let bound = rx.scale(alpha).add(&rz.scale(1.0 - alpha))?;
    record(Axiom::Convexity, &mix, &bound, AXIOM_TOL, false, None);

    let one_minus = lambda.map(|l| 1.0 - l);
    let mix = rho.eval(&x.mul_rv(&lambda)?.add(&z.mul_rv(&one_minus)?)?)?;
    let bound = lambda.mul(&rx)?.add(&one_minus.mul(&rz)?)?;
    record(Axiom::L0Convexity, &mix, &bound, AXIOM_TOL, false, None);

    let local = rho.eval(&x.mask(&a))?;
    let tol = LOCALITY_TOL * (1.0 + rx.values().iter().fold(0.0f64, |m, v| m.max(v.abs())));
    record(Axiom::LocalProperty, &local, &rx, tol, true, Some(&a));

    let dist = portfolio_norm(&x.sub(&z)?, f, f64::INFINITY)?.scale(d as f64);
    let diff = rx.sub(&rz)?.abs();
    record(Axiom::Lipschitz, &diff, &dist, AXIOM_TOL, false, None);

    Ok(out)
}

/// Randomized check of the defining axioms plus the Lipschitz bound with
/// constant `d`. Trial `t` draws from a ChaCha8 stream `t` seeded with `seed`,
/// so reports are reproducible regardless of thread count.
pub fn check_axioms(rho: &RiskMeasure, trials: usize, seed: u64) -> Result<AxiomReport> {
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(rho, seed, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(AxiomReport {
        trials,
        seed,
        violations: per_trial.into_iter().flatten().collect(),
    })
}
