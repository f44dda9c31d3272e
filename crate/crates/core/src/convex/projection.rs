//! Projection onto the cc-convex hull of a finite family.
//!
//! On each block the hull is a polytope and the projection in the
//! conditional `L^2` metric is a minimum-norm-point problem. Wolfe's
//! active-set method solves it exactly (finite termination); away-step
//! Frank–Wolfe is available as an iterative alternative.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lpmod::{portfolio_norm, Position};
use crate::prob::SubAlgebra;
use crate::randvar::RandVar;

use super::{block_weights, per_block, weighted_dot};

const WOLFE_MAX_MAJOR: usize = 10_000;
const WOLFE_OPT_TOL: f64 = 1e-14;
const WOLFE_ACTIVE_TOL: f64 = 1e-13;
const AFW_MAX_ITER: usize = 10_000;
const AFW_GAP_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ProjectionMethod {
    /// Wolfe's minimum-norm-point active-set algorithm.
    #[default]
    ActiveSet,
    /// Frank–Wolfe with away steps and exact line search.
    AwayStepFrankWolfe,
}

/// Minimum-norm point of the convex hull of `points`.
#[derive(Clone, Debug)]
pub struct MinNormPoint {
    pub weights: Vec<f64>,
    pub point: Vec<f64>,
    pub sq_norm: f64,
    pub iterations: usize,
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn combine(points: &[Vec<f64>], idx: &[usize], lambda: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; points[0].len()];
    for (&i, &l) in idx.iter().zip(lambda) {
        for (xj, pj) in x.iter_mut().zip(&points[i]) {
            *xj += l * pj;
        }
    }
    x
}

/// Affine weights of the minimum-norm point of the affine hull of `points[idx]`.
fn affine_min(points: &[Vec<f64>], idx: &[usize]) -> Vec<f64> {
    if idx.len() == 1 {
        return vec![1.0];
    }
    let base = &points[idx[0]];
    let dim = base.len();
    let q = DMatrix::from_fn(dim, idx.len() - 1, |r, c| points[idx[c + 1]][r] - base[r]);
    let rhs = DVector::from_fn(dim, |r, _| -base[r]);
    let beta = q
        .svd(true, true)
        .solve(&rhs, 1e-13)
        .unwrap_or_else(|_| DVector::zeros(idx.len() - 1));
    let mut alpha = Vec::with_capacity(idx.len());
    alpha.push(1.0 - beta.sum());
    alpha.extend(beta.iter().copied());
    alpha
}

fn wolfe(points: &[Vec<f64>]) -> Result<MinNormPoint> {
    let sq: Vec<f64> = points.iter().map(|p| dot(p, p)).collect();
    let max_sq = sq.iter().copied().fold(0.0, f64::max);
    let start = (0..points.len())
        .min_by(|&i, &j| sq[i].total_cmp(&sq[j]).then(i.cmp(&j)))
        .expect("nonempty");
    let mut active = vec![start];
    let mut lambda = vec![1.0];
    let mut x = points[start].clone();
    for iteration in 0..WOLFE_MAX_MAJOR {
        let (j, xpj) = (0..points.len())
            .map(|k| (k, dot(&x, &points[k])))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
            .expect("nonempty");
        let xx = dot(&x, &x);
        if xx - xpj <= WOLFE_OPT_TOL * max_sq.max(1e-300) || active.contains(&j) {
            return Ok(finish(points, &active, &lambda, iteration));
        }
        active.push(j);
        lambda.push(0.0);
        loop {
            let alpha = affine_min(points, &active);
            if alpha.iter().all(|&a| a > WOLFE_ACTIVE_TOL) {
                lambda = alpha;
                break;
            }
            let theta = active
                .iter()
                .enumerate()
                .filter(|&(i, _)| alpha[i] <= WOLFE_ACTIVE_TOL && lambda[i] - alpha[i] > 0.0)
                .map(|(i, _)| lambda[i] / (lambda[i] - alpha[i]))
                .fold(1.0, f64::min);
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l += theta * (a - *l);
            }
            let keep: Vec<bool> = lambda.iter().map(|&l| l > WOLFE_ACTIVE_TOL).collect();
            if keep.iter().all(|&k| !k) {
                // Degenerate corral; fall back to the best single vertex.
                let best = (0..lambda.len())
                    .max_by(|&a, &b| lambda[a].total_cmp(&lambda[b]))
                    .expect("nonempty");
                active = vec![active[best]];
                lambda = vec![1.0];
                break;
            }
            let mut next_active = Vec::new();
            let mut next_lambda = Vec::new();
            for ((&i, &l), k) in active.iter().zip(&lambda).zip(&keep) {
                if *k {
                    next_active.push(i);
                    next_lambda.push(l);
                }
            }
            let total: f64 = next_lambda.iter().sum();
            next_lambda.iter_mut().for_each(|l| *l /= total);
            active = next_active;
            lambda = next_lambda;
            if active.len() == 1 {
                break;
            }
        }
        x = combine(points, &active, &lambda);
    }
    Err(Error::OptimizerFailure("min-norm point: iteration limit".into()))
}

fn finish(points: &[Vec<f64>], active: &[usize], lambda: &[f64], iterations: usize) -> MinNormPoint {
    let mut weights = vec![0.0; points.len()];
    for (&i, &l) in active.iter().zip(lambda) {
        weights[i] = l;
    }
    let point = combine(points, active, lambda);
    MinNormPoint {
        sq_norm: dot(&point, &point),
        weights,
        point,
        iterations,
    }
}

fn away_step_frank_wolfe(points: &[Vec<f64>]) -> MinNormPoint {
    let n = points.len();
    let sq: Vec<f64> = points.iter().map(|p| dot(p, p)).collect();
    let start = (0..n)
        .min_by(|&i, &j| sq[i].total_cmp(&sq[j]).then(i.cmp(&j)))
        .expect("nonempty");
    let mut lambda = vec![0.0; n];
    lambda[start] = 1.0;
    let mut x = points[start].clone();
    let mut iterations = 0;
    while iterations < AFW_MAX_ITER {
        iterations += 1;
        let grad: Vec<f64> = points.iter().map(|p| dot(&x, p)).collect();
        let xx = dot(&x, &x);
        let s = (0..n).min_by(|&a, &b| grad[a].total_cmp(&grad[b])).expect("nonempty");
        let fw_gap = xx - grad[s];
        if fw_gap <= AFW_GAP_TOL {
            break;
        }
        let v = (0..n)
            .filter(|&k| lambda[k] > 0.0)
            .max_by(|&a, &b| grad[a].total_cmp(&grad[b]))
            .expect("nonempty support");
        let away_gap = grad[v] - xx;
        let (dir, gamma_max, toward) = if fw_gap >= away_gap {
            let d: Vec<f64> = points[s].iter().zip(&x).map(|(p, q)| p - q).collect();
            (d, 1.0, true)
        } else {
            let d: Vec<f64> = x.iter().zip(&points[v]).map(|(q, p)| q - p).collect();
            (d, lambda[v] / (1.0 - lambda[v]), false)
        };
        let dd = dot(&dir, &dir);
        if dd <= 0.0 {
            break;
        }
        let gamma = (-dot(&x, &dir) / dd).clamp(0.0, gamma_max);
        if toward {
            lambda.iter_mut().for_each(|l| *l *= 1.0 - gamma);
            lambda[s] += gamma;
        } else {
            lambda.iter_mut().for_each(|l| *l *= 1.0 + gamma);
            lambda[v] -= gamma;
            if gamma >= gamma_max {
                lambda[v] = 0.0;
            }
        }
        for (xj, dj) in x.iter_mut().zip(&dir) {
            *xj += gamma * dj;
        }
    }
    let idx: Vec<usize> = (0..n).collect();
    let point = combine(points, &idx, &lambda);
    MinNormPoint {
        sq_norm: dot(&point, &point),
        weights: lambda,
        point,
        iterations,
    }
}

/// Minimum-norm point of `conv(points)` in the Euclidean metric.
pub fn min_norm_point(points: &[Vec<f64>], method: ProjectionMethod) -> Result<MinNormPoint> {
    if points.is_empty() {
        return Err(Error::EmptyFamily);
    }
    match method {
        ProjectionMethod::ActiveSet => wolfe(points),
        ProjectionMethod::AwayStepFrankWolfe => Ok(away_step_frank_wolfe(points)),
    }
}

/// A block on which no element of the hull comes within `eps` of the target.
#[derive(Clone, Debug, PartialEq)]
pub struct NoApproximant {
    pub block: usize,
    pub distance: f64,
    /// Rigorous lower bound on the conditional `L^2` distance to the hull.
    pub certified_lower_bound: f64,
}

#[derive(Clone, Debug)]
pub struct MazurReport {
    /// The projection of the target onto the hull, block by block.
    pub z: Position,
    /// Convex weights over the family, one vector per block.
    pub weights: Vec<Vec<f64>>,
    /// `|||x - z | F|||_p`.
    pub distance: RandVar,
    /// `|||x - z | F|||_2`, the metric the projection minimizes.
    pub l2_distance: RandVar,
    pub certified_lower_bound: RandVar,
    pub no_approximant: Vec<NoApproximant>,
    pub iterations: usize,
}

impl MazurReport {
    /// `dist <= eps` on every block.
    pub fn certified(&self) -> bool {
        self.no_approximant.is_empty()
    }
}

pub(crate) struct BlockProjection {
    pub weights: Vec<f64>,
    pub projection: Vec<f64>,
    pub l2_distance: f64,
    pub lower_bound: f64,
    pub iterations: usize,
}

/// Projects a block target onto `conv(points)` in the weighted metric `w`.
pub(crate) fn project_block(
    points: &[Vec<f64>],
    target: &[f64],
    w: &[f64],
    method: ProjectionMethod,
) -> Result<BlockProjection> {
    let sqrt_w: Vec<f64> = w.iter().map(|v| v.sqrt()).collect();
    let shifted: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.iter().zip(target).zip(&sqrt_w).map(|((g, x), s)| s * (g - x)).collect())
        .collect();
    let mnp = min_norm_point(&shifted, method)?;
    let projection = points
        .iter()
        .zip(&mnp.weights)
        .fold(vec![0.0; target.len()], |mut acc, (p, &l)| {
            for (a, v) in acc.iter_mut().zip(p) {
                *a += l * v;
            }
            acc
        });
    let residual: Vec<f64> = target.iter().zip(&projection).map(|(x, p)| x - p).collect();
    let l2_distance = weighted_dot(w, &residual, &residual).sqrt();
    let lower_bound = if l2_distance > 0.0 {
        points
            .iter()
            .map(|g| {
                let gap: Vec<f64> = target.iter().zip(g).map(|(x, g)| x - g).collect();
                weighted_dot(w, &gap, &residual) / l2_distance
            })
            .fold(f64::INFINITY, f64::min)
            .max(0.0)
    } else {
        0.0
    };
    Ok(BlockProjection {
        weights: mnp.weights,
        projection,
        l2_distance,
        lower_bound,
        iterations: mnp.iterations,
    })
}

/// Best approximation of `x` from the cc-convex hull of `family`, with a
/// per-block certificate that the distance is at most `eps` (measured in
/// `|||·|F|||_p`) or a [`NoApproximant`] entry where it is not.
pub fn mazur_project(
    family: &[Position],
    x: &Position,
    f: &SubAlgebra,
    eps: &RandVar,
    p: f64,
    method: ProjectionMethod,
) -> Result<MazurReport> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if eps.values().iter().any(|&e| !(e > 0.0)) {
        return Err(Error::NonPositiveEps);
    }
    for g in family {
        g.ensure_shape(x)?;
    }
    x.space().ensure_same(f.space())?;
    eps.space().ensure_same(f.space())?;

    let d = x.dim();
    let blocks = (0..f.num_blocks())
        .into_par_iter()
        .map(|b| {
            let points: Vec<Vec<f64>> = family.iter().map(|g| g.block_vector(f, b)).collect();
            project_block(&points, &x.block_vector(f, b), &block_weights(f, b, d), method)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut z = x.clone();
    for (b, proj) in blocks.iter().enumerate() {
        z.set_block_vector(f, b, &proj.projection);
    }
    let distance = portfolio_norm(&x.sub(&z)?, f, p)?;
    let l2: Vec<f64> = blocks.iter().map(|p| p.l2_distance).collect();
    let lower: Vec<f64> = blocks.iter().map(|p| p.lower_bound).collect();
    let no_approximant = (0..f.num_blocks())
        .filter_map(|b| {
            let tol = f.block(b).iter().map(|&a| eps.get(a)).fold(f64::INFINITY, f64::min);
            let dist = distance.block_value(f, b);
            (dist > tol).then_some(NoApproximant {
                block: b,
                distance: dist,
                certified_lower_bound: lower[b],
            })
        })
        .collect();
    Ok(MazurReport {
        z,
        weights: blocks.iter().map(|p| p.weights.clone()).collect(),
        distance,
        l2_distance: per_block(f, &l2)?,
        certified_lower_bound: per_block(f, &lower)?,
        no_approximant,
        iterations: blocks.iter().map(|p| p.iterations).sum(),
    })
}
