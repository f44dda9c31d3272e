use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linprog::{Cmp, LinearProgram, LpOutcome, Sense};
use crate::lpmod::{pair, DualElement, Position};
use crate::randvar::ExtRandVar;

use super::{block_weights, GeneratedSet};

/// Slack allowed when comparing a support value against 1.
pub const BIPOLAR_TOL: f64 = 1e-9;

/// Support function of the polar of `d_set` evaluated at `x`:
/// `sup { E[x·z | F] : z ∈ D° }`, blockwise, where `D°` is cut out by
/// `|E[g·z | F]| <= 1` (absolute) or `E[g·z | F] <= 1` (one-sided) for every
/// generator `g`. `+inf` where the polar is unbounded in the direction of `x`.
pub fn polar_support(d_set: &GeneratedSet, x: &Position, one_sided: bool) -> Result<ExtRandVar> {
    d_set.ensure_compatible(x)?;
    let f = d_set.algebra();
    let d = x.dim();
    let values = (0..f.num_blocks())
        .into_par_iter()
        .map(|b| {
            let w = block_weights(f, b, d);
            let target = x.block_vector(f, b);
            let objective: Vec<f64> = w.iter().zip(&target).map(|(w, x)| w * x).collect();
            let mut lp = LinearProgram::new(Sense::Maximize, objective).all_free();
            for (_, _, g) in d_set.block_points(b) {
                let row: Vec<f64> = w.iter().zip(&g).map(|(w, g)| w * g).collect();
                if !one_sided {
                    lp.constraint(row.clone(), Cmp::Ge, -1.0);
                }
                lp.constraint(row, Cmp::Le, 1.0);
            }
            match lp.solve()? {
                LpOutcome::Optimal { value, .. } => Ok(value.max(0.0)),
                LpOutcome::Unbounded => Ok(f64::INFINITY),
                LpOutcome::Infeasible => Err(Error::LpFailure("polar program reported infeasible at z = 0".into())),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ExtRandVar::from_blocks(f, &values)
}

/// Blockwise membership of `x` in the bipolar `D°°`.
pub fn bipolar_member(d_set: &GeneratedSet, x: &Position, one_sided: bool) -> Result<Vec<bool>> {
    let support = polar_support(d_set, x, one_sided)?;
    Ok(support
        .block_values(d_set.algebra())
        .into_iter()
        .map(|v| v <= 1.0 + BIPOLAR_TOL)
        .collect())
}

/// Blockwise membership of `z` in the polar `D°`.
pub fn polar_contains(d_set: &GeneratedSet, z: &DualElement, one_sided: bool) -> Result<Vec<bool>> {
    let f = d_set.algebra();
    let mut inside = vec![true; f.num_blocks()];
    for g in d_set.generators() {
        let v = pair(g, z, f)?;
        for (b, ok) in inside.iter_mut().enumerate() {
            let val = v.block_value(f, b);
            let val = if one_sided && !d_set.flags().balanced { val } else { val.abs() };
            *ok &= val <= 1.0 + BIPOLAR_TOL;
        }
    }
    Ok(inside)
}
