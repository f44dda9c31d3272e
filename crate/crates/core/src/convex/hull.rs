use crate::error::Result;
use crate::linprog::{Cmp, LinearProgram, LpOutcome, Sense};
use crate::lpmod::Position;
use crate::randvar::ExtRandVar;

use super::GeneratedSet;

const SELECT_TOL: f64 = 1e-12;

/// Membership of one block restriction.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMembership {
    pub member: bool,
    /// Signed coefficient per generator reconstructing the target on the
    /// block (`-` entries only for balanced sets). Empty when not a member.
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HullMembership {
    pub blocks: Vec<BlockMembership>,
}

impl HullMembership {
    /// Member of the set itself (every block).
    pub fn is_member(&self) -> bool {
        self.blocks.iter().all(|b| b.member)
    }

    pub fn member_blocks(&self) -> Vec<usize> {
        (0..self.blocks.len()).filter(|&b| self.blocks[b].member).collect()
    }
}

/// Convex weights `λ >= 0, Σλ = 1` with `Σ λ_k p_k = x`, if any.
pub(crate) fn convex_weights(points: &[&[f64]], x: &[f64]) -> Result<Option<Vec<f64>>> {
    let n = points.len();
    let mut lp = LinearProgram::feasibility(n);
    for (j, &xj) in x.iter().enumerate() {
        lp.constraint(points.iter().map(|p| p[j]).collect(), Cmp::Eq, xj);
    }
    lp.constraint(vec![1.0; n], Cmp::Eq, 1.0);
    Ok(match lp.solve()? {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    })
}

/// Weights over the shortest feasible prefix of `points`: the
/// lexicographically smallest generator index set that reconstructs `x`.
fn prefix_weights(points: &[&[f64]], x: &[f64]) -> Result<Option<Vec<f64>>> {
    if convex_weights(points, x)?.is_none() {
        return Ok(None);
    }
    let (mut lo, mut hi) = (1, points.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if convex_weights(&points[..mid], x)?.is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let mut w = convex_weights(&points[..lo], x)?.expect("feasible prefix");
    w.resize(points.len(), 0.0);
    Ok(Some(w))
}

fn scalar_multiple(g: &[f64], x: &[f64], balanced: bool) -> Option<f64> {
    let scale = 1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = SELECT_TOL * scale;
    if !balanced {
        return g.iter().zip(x).all(|(a, b)| (a - b).abs() <= tol).then_some(1.0);
    }
    let gg: f64 = g.iter().map(|v| v * v).sum();
    let y = if gg > 0.0 {
        g.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() / gg
    } else {
        0.0
    };
    (y.abs() <= 1.0 + SELECT_TOL && g.iter().zip(x).all(|(a, b)| (y * a - b).abs() <= tol))
        .then_some(y.clamp(-1.0, 1.0))
}

/// Decides, block by block, whether `x` lies in the generated set and
/// returns a witness combination of the generators.
pub fn hull_member(k: &GeneratedSet, x: &Position) -> Result<HullMembership> {
    k.ensure_compatible(x)?;
    let f = k.algebra();
    let m = k.generators().len();
    let targets: Vec<Vec<f64>> = (0..f.num_blocks()).map(|b| x.block_vector(f, b)).collect();

    if k.flags().l0_convex {
        let blocks = (0..f.num_blocks())
            .map(|b| {
                let pts = k.block_points(b);
                let refs: Vec<&[f64]> = pts.iter().map(|(_, _, v)| v.as_slice()).collect();
                Ok(match prefix_weights(&refs, &targets[b])? {
                    Some(w) => {
                        let mut weights = vec![0.0; m];
                        for ((g, sign, _), lambda) in pts.iter().zip(w) {
                            weights[*g] += sign * lambda;
                        }
                        BlockMembership { member: true, weights }
                    }
                    None => BlockMembership {
                        member: false,
                        weights: Vec::new(),
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(HullMembership { blocks });
    }

    let balanced = k.flags().balanced;
    let select = |g: usize, b: usize| scalar_multiple(&k.generators()[g].block_vector(f, b), &targets[b], balanced);
    let unit = |g: usize, y: f64| {
        let mut w = vec![0.0; m];
        w[g] = y;
        w
    };
    let miss = || BlockMembership {
        member: false,
        weights: Vec::new(),
    };

    if k.flags().concatenation {
        let blocks = (0..f.num_blocks())
            .map(|b| {
                (0..m)
                    .find_map(|g| select(g, b).map(|y| BlockMembership { member: true, weights: unit(g, y) }))
                    .unwrap_or_else(miss)
            })
            .collect();
        return Ok(HullMembership { blocks });
    }

    // No closure: one generator (scaled blockwise when balanced) must match everywhere.
    for g in 0..m {
        let scalars: Option<Vec<f64>> = (0..f.num_blocks()).map(|b| select(g, b)).collect();
        if let Some(scalars) = scalars {
            let blocks = scalars
                .into_iter()
                .map(|y| BlockMembership { member: true, weights: unit(g, y) })
                .collect();
            return Ok(HullMembership { blocks });
        }
    }
    Ok(HullMembership {
        blocks: (0..f.num_blocks()).map(|_| miss()).collect(),
    })
}

/// Gauge `p_K(x) = essinf{Y >= 0 : x ∈ Y K}`, blockwise; `+inf` where no
/// multiple of the set reaches `x`.
pub fn gauge(k: &GeneratedSet, x: &Position) -> Result<ExtRandVar> {
    k.require_convex()?;
    k.ensure_compatible(x)?;
    let f = k.algebra();
    let values = (0..f.num_blocks())
        .map(|b| {
            let pts = k.block_points(b);
            let target = x.block_vector(f, b);
            // x = Σ μ_k p_k with μ >= 0 and t = Σ μ_k minimal.
            let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0; pts.len()]);
            for (j, &xj) in target.iter().enumerate() {
                lp.constraint(pts.iter().map(|(_, _, v)| v[j]).collect(), Cmp::Eq, xj);
            }
            Ok(match lp.solve()? {
                LpOutcome::Optimal { value, .. } => value.max(0.0),
                _ => f64::INFINITY,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ExtRandVar::from_blocks(f, &values)
}
