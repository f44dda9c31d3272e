//! Unconstrained maximization of concave objectives on `R^n`: a ray test for
//! unboundedness followed by BFGS with central finite-difference gradients.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaximizeOptions {
    pub max_iter: usize,
    /// Stop once the gradient sup-norm falls below this.
    pub grad_tol: f64,
    /// Relative finite-difference step.
    pub fd_step: f64,
    /// Ray probe distances are `ray_scale` and `2 * ray_scale`.
    pub ray_scale: f64,
    /// A ray whose slope exceeds this is treated as an ascent direction to infinity.
    pub ray_slope_tol: f64,
    /// Iterates beyond this norm are reported as divergent.
    pub divergence_radius: f64,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        Self {
            max_iter: 400,
            grad_tol: 1e-9,
            fd_step: 1e-5,
            ray_scale: 1e3,
            ray_slope_tol: 1e-7,
            divergence_radius: 1e7,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Supremum {
    Finite {
        value: f64,
        argmax: Vec<f64>,
        iterations: usize,
    },
    Unbounded {
        direction: Vec<f64>,
    },
}

fn checked(v: f64) -> Result<f64> {
    if v.is_nan() {
        Err(Error::OptimizerFailure("objective returned NaN".into()))
    } else {
        Ok(v)
    }
}

/// Slope of `obj` along `r` between `t` and `2t` from the origin.
pub fn ray_slope(obj: &impl Fn(&[f64]) -> Result<f64>, r: &[f64], t: f64) -> Result<f64> {
    let at = |s: f64| -> Result<f64> {
        let p: Vec<f64> = r.iter().map(|v| s * v).collect();
        checked(obj(&p)?)
    };
    let near = at(t)?;
    let far = at(2.0 * t)?;
    if near == f64::INFINITY || far == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok((far - near) / t)
}

fn gradient(obj: &impl Fn(&[f64]) -> Result<f64>, x: &[f64], step: f64) -> Result<Vec<f64>> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|j| {
            let h = step * (1.0 + x[j].abs());
            probe[j] = x[j] + h;
            let up = checked(obj(&probe)?)?;
            probe[j] = x[j] - h;
            let down = checked(obj(&probe)?)?;
            probe[j] = x[j];
            Ok((up - down) / (2.0 * h))
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sup_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Supremum of a concave `obj` over `R^n`. Each candidate ray is probed
/// first; a strictly increasing one proves the supremum infinite. Otherwise
/// BFGS ascends from the origin.
pub fn maximize_concave(
    obj: impl Fn(&[f64]) -> Result<f64>,
    n: usize,
    rays: &[Vec<f64>],
    opts: &MaximizeOptions,
) -> Result<Supremum> {
    for r in rays {
        if ray_slope(&obj, r, opts.ray_scale)? > opts.ray_slope_tol {
            return Ok(Supremum::Unbounded { direction: r.clone() });
        }
    }

    let mut x = vec![0.0; n];
    let mut fx = checked(obj(&x)?)?;
    if n == 0 {
        return Ok(Supremum::Finite {
            value: fx,
            argmax: x,
            iterations: 0,
        });
    }
    let mut g = gradient(&obj, &x, opts.fd_step)?;
    let identity = |h: &mut Vec<f64>| {
        h.iter_mut().for_each(|v| *v = 0.0);
        (0..n).for_each(|i| h[i * n + i] = 1.0);
    };
    // Inverse of the negated Hessian, row-major.
    let mut h = vec![0.0; n * n];
    identity(&mut h);
    let mut fresh = true;
    let mut iterations = 0;

    while iterations < opts.max_iter && sup_norm(&g) > opts.grad_tol {
        iterations += 1;
        let mut p: Vec<f64> = (0..n).map(|i| dot(&h[i * n..(i + 1) * n], &g)).collect();
        let mut slope = dot(&p, &g);
        if !(slope > 0.0) {
            identity(&mut h);
            fresh = true;
            p = g.clone();
            slope = dot(&p, &g);
        }
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&p).map(|(x, p)| x + alpha * p).collect();
            let ft = checked(obj(&trial)?)?;
            if ft >= fx + 1e-4 * alpha * slope {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
        }
        let Some((next, fnext)) = accepted else {
            if fresh {
                break;
            }
            identity(&mut h);
            fresh = true;
            continue;
        };
        if sup_norm(&next) > opts.divergence_radius {
            return Ok(Supremum::Unbounded { direction: p });
        }
        let gnext = gradient(&obj, &next, opts.fd_step)?;
        let s: Vec<f64> = next.iter().zip(&x).map(|(a, b)| a - b).collect();
        // Ascent on f is descent on -f: y = ∇(-f)(next) - ∇(-f)(x).
        let y: Vec<f64> = g.iter().zip(&gnext).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        let improvement = fnext - fx;
        x = next;
        fx = fnext;
        g = gnext;
        if sy > 1e-14 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..n).map(|i| dot(&h[i * n..(i + 1) * n], &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..n {
                for j in 0..n {
                    h[i * n + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
            fresh = false;
        }
        if improvement <= 1e-15 * (1.0 + fx.abs()) && fresh {
            break;
        }
    }
    Ok(Supremum::Finite {
        value: fx,
        argmax: x,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concave_quadratic() {
        let obj = |x: &[f64]| Ok(-(x[0] - 1.0).powi(2) - 2.0 * (x[1] + 0.5).powi(2) + 3.0);
        match maximize_concave(obj, 2, &[], &MaximizeOptions::default()).unwrap() {
            Supremum::Finite { value, argmax, .. } => {
                assert!((value - 3.0).abs() < 1e-10);
                assert!((argmax[0] - 1.0).abs() < 1e-5 && (argmax[1] + 0.5).abs() < 1e-5);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn smooth_nonquadratic() {
        // Stationary where 1 / (1 + e^x) = x and y = 1/8.
        let obj = |x: &[f64]| Ok(-(1.0 + (-x[0]).exp()).ln() - x[0] * x[0] / 2.0 + 0.25 * x[1] - x[1] * x[1]);
        let Supremum::Finite { argmax, .. } = maximize_concave(obj, 2, &[], &MaximizeOptions::default()).unwrap()
        else {
            panic!()
        };
        let gx = 1.0 / (1.0 + argmax[0].exp()) - argmax[0];
        assert!(gx.abs() < 1e-6, "{gx}");
        assert!((argmax[1] - 0.125).abs() < 1e-6);
    }

    #[test]
    fn detects_increasing_rays() {
        let obj = |x: &[f64]| Ok(x[0] - x[1].abs());
        let rays = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert_eq!(
            maximize_concave(obj, 2, &rays, &MaximizeOptions::default()).unwrap(),
            Supremum::Unbounded { direction: vec![1.0, 0.0] }
        );
    }

    #[test]
    fn kinked_objective_stops() {
        let obj = |x: &[f64]| Ok(-(x[0] - 0.3).abs());
        let Supremum::Finite { value, .. } = maximize_concave(obj, 1, &[], &MaximizeOptions::default()).unwrap() else {
            panic!()
        };
        assert!(value > -1e-6, "{value}");
    }
}
