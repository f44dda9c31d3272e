use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lpmod::{pair, DualElement, Position};
use crate::randvar::RandVar;

use super::projection::{project_block, ProjectionMethod};
use super::{block_weights, per_block, GeneratedSet};

/// Below this conditional `L^2` distance a target counts as inside the hull.
const SEPARATION_TOL: f64 = 1e-10;

/// A continuous `L^0`-linear functional `μ = E[· Z | F]` and `eps > 0` with
/// `μ(y) + eps <= μ(x)` for every `y` in the set.
#[derive(Clone, Debug)]
pub struct SeparationCertificate {
    pub z: DualElement,
    pub eps: RandVar,
    /// `μ(x) - sup_y μ(y)`, blockwise.
    pub margin: RandVar,
    /// `sup_y μ(y)` over the set, blockwise.
    pub support: RandVar,
}

impl SeparationCertificate {
    /// Re-checks the defining inequality against every generator (and its
    /// negative for balanced sets), block by block.
    pub fn verify(&self, k: &GeneratedSet, x: &Position) -> Result<bool> {
        let f = k.algebra();
        let at_x = pair(x, &self.z, f)?;
        for g in k.generators() {
            let mut candidates = vec![pair(g, &self.z, f)?];
            if k.flags().balanced {
                candidates.push(pair(&g.scale(-1.0), &self.z, f)?);
            }
            for at_g in candidates {
                let ok = (0..f.num_blocks())
                    .all(|b| at_g.block_value(f, b) + self.eps.block_value(f, b) <= at_x.block_value(f, b));
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(self.eps.values().iter().all(|&e| e > 0.0))
    }
}

/// Strictly separates `x` from the cc-convex hull `k`, which must miss `x`
/// on every block. The functional points from the projection of `x` onto
/// the hull towards `x`, normalized to unit conditional `L^2` norm.
pub fn separate(k: &GeneratedSet, x: &Position) -> Result<SeparationCertificate> {
    k.require_convex()?;
    k.ensure_compatible(x)?;
    let f = k.algebra();
    let d = x.dim();
    let directions = (0..f.num_blocks())
        .into_par_iter()
        .map(|b| {
            let points: Vec<Vec<f64>> = k.block_points(b).into_iter().map(|(_, _, v)| v).collect();
            let proj = project_block(&points, &x.block_vector(f, b), &block_weights(f, b, d), ProjectionMethod::ActiveSet)?;
            if proj.l2_distance <= SEPARATION_TOL {
                return Err(Error::NotSeparable { block: b });
            }
            let target = x.block_vector(f, b);
            Ok(target
                .iter()
                .zip(&proj.projection)
                .map(|(t, p)| (t - p) / proj.l2_distance)
                .collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<_>>>()?;

    let mut z = Position::zeros(x.space(), d);
    for (b, dir) in directions.iter().enumerate() {
        z.set_block_vector(f, b, dir);
    }
    let z = DualElement::new(z);
    let at_x = pair(x, &z, f)?;
    let mut support = vec![f64::NEG_INFINITY; f.num_blocks()];
    for g in k.generators() {
        let at_g = pair(g, &z, f)?;
        for (b, s) in support.iter_mut().enumerate() {
            let v = at_g.block_value(f, b);
            *s = s.max(if k.flags().balanced { v.abs() } else { v });
        }
    }
    let margins: Vec<f64> = support
        .iter()
        .enumerate()
        .map(|(b, s)| at_x.block_value(f, b) - s)
        .collect();
    if let Some(b) = margins.iter().position(|&m| !(m > 0.0)) {
        return Err(Error::NotSeparable { block: b });
    }
    let eps: Vec<f64> = margins.iter().map(|m| m / 2.0).collect();
    Ok(SeparationCertificate {
        z,
        eps: per_block(f, &eps)?,
        margin: per_block(f, &margins)?,
        support: per_block(f, &support)?,
    })
}
