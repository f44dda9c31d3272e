use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lpmod::{portfolio_norm, Position};
use crate::randvar::{AtomSet, RandVar, MEASURABILITY_TOL};
use crate::risk::{RiskMeasure, LOCALITY_TOL};

use super::WEAK_DUALITY_TOL;

#[derive(Clone, Debug, PartialEq)]
pub struct FatouOptions {
    /// Largest deviation `|x_N - x|` of the last term tolerated on any atom.
    pub conv_tol: f64,
    /// `F`-measurable bound `|x_n^i| <= Y`; computed from the sequence if absent.
    pub bound: Option<RandVar>,
}

impl Default for FatouOptions {
    fn default() -> Self {
        Self {
            conv_tol: 1e-2,
            bound: None,
        }
    }
}

/// The localization set `{k - 1 <= Y < k}` and the blocks it covers.
#[derive(Clone, Debug, PartialEq)]
pub struct FatouBucket {
    pub k: u64,
    pub blocks: Vec<usize>,
    /// `1_A ρ(x_n) = 1_A ρ(1_A x_n)` held for every term and the limit.
    pub localized: bool,
}

#[derive(Clone, Debug)]
pub struct FatouReport {
    pub rho_limit: RandVar,
    /// Blockwise minimum of `ρ(x_n)` over the tail.
    pub tail_inf: RandVar,
    /// `min_n ρ(x_n) + d·|||x_n - x|||_∞ - ρ(x)` over the tail: the lower
    /// semicontinuity slack with the distance to the limit accounted for.
    pub margin: RandVar,
    pub bound: RandVar,
    pub buckets: Vec<FatouBucket>,
}

impl FatouReport {
    pub fn passed(&self) -> bool {
        self.margin.values().iter().all(|&m| m >= -WEAK_DUALITY_TOL) && self.buckets.iter().all(|b| b.localized)
    }
}

fn localized(rho: &RiskMeasure, x: &Position, a: &AtomSet) -> Result<bool> {
    let whole = rho.eval(x)?;
    let local = rho.eval(&x.mask(a))?;
    let scale = 1.0 + whole.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(a
        .atoms()
        .iter()
        .all(|&atom| (whole.get(atom) - local.get(atom)).abs() <= LOCALITY_TOL * scale))
}

/// Lower semicontinuity of `ρ` along a bounded sequence converging to
/// `limit`. The tail is the second half of the sequence. The bound `Y` splits
/// the space into `{k - 1 <= Y < k}`, and the local property is checked on
/// each piece separately.
pub fn fatou_check(rho: &RiskMeasure, sequence: &[Position], limit: &Position, opts: &FatouOptions) -> Result<FatouReport> {
    let f = rho.algebra();
    let d = rho.dim();
    if sequence.is_empty() {
        return Err(Error::EmptyFamily);
    }
    rho.ensure_input(limit)?;
    for x in sequence {
        limit.ensure_shape(x)?;
    }

    let last = sequence.last().expect("nonempty");
    for atom in 0..limit.space().len() {
        let deviation = (0..d).fold(0.0f64, |m, i| m.max((last.get(atom, i) - limit.get(atom, i)).abs()));
        if !(deviation <= opts.conv_tol) {
            return Err(Error::NotConvergent {
                atom: limit.space().label(atom).to_string(),
                deviation,
            });
        }
    }

    let bound = match &opts.bound {
        Some(y) => {
            y.ensure_measurable(f, "bound")?;
            for x in sequence.iter().chain([limit]) {
                for atom in 0..x.space().len() {
                    if x.row(atom).iter().any(|v| v.abs() > y.get(atom)) {
                        return Err(Error::NotBounded {
                            atom: x.space().label(atom).to_string(),
                        });
                    }
                }
            }
            y.clone()
        }
        None => {
            let per_block: Vec<f64> = (0..f.num_blocks())
                .map(|b| {
                    sequence
                        .iter()
                        .chain([limit])
                        .flat_map(|x| x.block_vector(f, b))
                        .fold(0.0f64, |m, v| m.max(v.abs()))
                })
                .collect();
            RandVar::from_blocks(f, &per_block)?
        }
    };
    debug_assert!(bound.is_measurable(f, MEASURABILITY_TOL));

    let tail = &sequence[sequence.len() / 2..];
    let rho_limit = rho.eval(limit)?;
    let mut tail_inf = vec![f64::INFINITY; f.num_blocks()];
    let mut margin = vec![f64::INFINITY; f.num_blocks()];
    for x in tail {
        let value = rho.eval(x)?;
        let dist = portfolio_norm(&x.sub(limit)?, f, f64::INFINITY)?;
        for b in 0..f.num_blocks() {
            let v = value.block_value(f, b);
            tail_inf[b] = tail_inf[b].min(v);
            margin[b] = margin[b].min(v + d as f64 * dist.block_value(f, b) - rho_limit.block_value(f, b));
        }
    }

    let mut grouped: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for b in 0..f.num_blocks() {
        let k = bound.block_value(f, b).floor() as u64 + 1;
        grouped.entry(k).or_default().push(b);
    }
    let buckets = grouped
        .into_iter()
        .map(|(k, blocks)| {
            let a = AtomSet::from_mask((0..f.space().len()).map(|atom| blocks.contains(&f.block_of(atom))));
            let mut ok = true;
            for x in sequence.iter().chain([limit]) {
                ok &= localized(rho, x, &a)?;
            }
            Ok(FatouBucket { k, blocks, localized: ok })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(FatouReport {
        rho_limit,
        tail_inf: RandVar::from_blocks(f, &tail_inf)?,
        margin: RandVar::from_blocks(f, &margin)?,
        bound,
        buckets,
    })
}
