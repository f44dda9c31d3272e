//! Dense two-phase simplex for the small linear programs the convex-analysis
//! routines generate (hull membership, gauges, polar support, cone checks).
//!
//! Bland's rule is used throughout so the pivot sequence, and therefore every
//! returned vertex, is deterministic.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-11;
const MAX_PIVOTS: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// `optimize c·x  s.t.  rows,  x_j >= 0 unless free`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    sense: Sense,
    objective: Vec<f64>,
    free: Vec<bool>,
    rows: Vec<(Vec<f64>, Cmp, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            free: vec![false; n],
            rows: Vec::new(),
        }
    }

    /// A pure feasibility problem in `n` nonnegative variables.
    pub fn feasibility(n: usize) -> Self {
        Self::new(Sense::Minimize, vec![0.0; n])
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_free(&mut self, j: usize) -> &mut Self {
        self.free[j] = true;
        self
    }

    pub fn all_free(mut self) -> Self {
        self.free.iter_mut().for_each(|f| *f = true);
        self
    }

    pub fn constraint(&mut self, coeffs: Vec<f64>, cmp: Cmp, rhs: f64) -> &mut Self {
        assert_eq!(coeffs.len(), self.objective.len(), "constraint width");
        self.rows.push((coeffs, cmp, rhs));
        self
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        // Column map: each original variable becomes one or two columns.
        let mut cols: Vec<(usize, f64)> = Vec::new();
        for (j, &free) in self.free.iter().enumerate() {
            cols.push((j, 1.0));
            if free {
                cols.push((j, -1.0));
            }
        }
        let sign = match self.sense {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        };
        let cost: Vec<f64> = cols.iter().map(|&(j, s)| sign * s * self.objective[j]).collect();
        let rows: Vec<(Vec<f64>, Cmp, f64)> = self
            .rows
            .iter()
            .map(|(a, cmp, b)| {
                let expanded: Vec<f64> = cols.iter().map(|&(j, s)| s * a[j]).collect();
                if *b < 0.0 {
                    let flipped = match cmp {
                        Cmp::Le => Cmp::Ge,
                        Cmp::Ge => Cmp::Le,
                        Cmp::Eq => Cmp::Eq,
                    };
                    (expanded.iter().map(|v| -v).collect(), flipped, -b)
                } else {
                    (expanded, *cmp, *b)
                }
            })
            .collect();

        let mut tab = Tableau::build(&cost, &rows);
        match tab.run()? {
            Status::Infeasible => Ok(LpOutcome::Infeasible),
            Status::Unbounded => Ok(LpOutcome::Unbounded),
            Status::Optimal => {
                let expanded = tab.primal(cols.len());
                let mut x = vec![0.0; self.objective.len()];
                for (k, &(j, s)) in cols.iter().enumerate() {
                    x[j] += s * expanded[k];
                }
                let value = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                Ok(LpOutcome::Optimal { x, value })
            }
        }
    }
}

enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Row-major tableau; the last column is the right-hand side.
struct Tableau {
    m: usize,
    width: usize,
    data: Vec<f64>,
    basis: Vec<usize>,
    n_struct: usize,
    first_artificial: usize,
    cost: Vec<f64>,
    scale: f64,
}

impl Tableau {
    fn build(cost: &[f64], rows: &[(Vec<f64>, Cmp, f64)]) -> Self {
        let n = cost.len();
        let m = rows.len();
        let n_slack = rows.iter().filter(|(_, c, _)| *c != Cmp::Eq).count();
        let n_art = rows.iter().filter(|(_, c, _)| *c != Cmp::Le).count();
        let first_artificial = n + n_slack;
        let width = n + n_slack + n_art + 1;
        let mut data = vec![0.0; m * width];
        let mut basis = vec![0; m];
        let (mut slack, mut art) = (n, first_artificial);
        let mut scale: f64 = 1.0;
        for (i, (a, cmp, b)) in rows.iter().enumerate() {
            let row = &mut data[i * width..(i + 1) * width];
            row[..n].copy_from_slice(a);
            row[width - 1] = *b;
            scale = scale.max(b.abs());
            match cmp {
                Cmp::Le => {
                    row[slack] = 1.0;
                    basis[i] = slack;
                    slack += 1;
                }
                Cmp::Ge => {
                    row[slack] = -1.0;
                    slack += 1;
                    row[art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
                Cmp::Eq => {
                    row[art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
            }
        }
        Self {
            m,
            width,
            data,
            basis,
            n_struct: n,
            first_artificial,
            cost: cost.to_vec(),
            scale,
        }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width - 1)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.data[r * w + c];
        for j in 0..w {
            self.data[r * w + j] /= p;
        }
        self.data[r * w + c] = 1.0;
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let factor = self.data[i * w + c];
            if factor != 0.0 {
                for j in 0..w {
                    self.data[i * w + j] -= factor * self.data[r * w + j];
                }
                self.data[i * w + c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj · x` over the current basis restricted to `allowed` columns.
    fn optimize(&mut self, obj: &[f64], allowed: usize) -> Result<bool> {
        for _ in 0..MAX_PIVOTS {
            // Reduced costs r_j = obj_j - sum_i obj_{basis_i} a_ij.
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = obj[j]
                    - (0..self.m)
                        .map(|i| obj[self.basis[i]] * self.at(i, j))
                        .sum::<f64>();
                reduced > 1e-10
            });
            let Some(c) = entering else {
                return Ok(true);
            };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, c);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i) / a;
                    let better = match best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < br - 1e-12 || (ratio <= br + 1e-12 && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, c),
            }
        }
        Err(Error::LpFailure("pivot limit reached".into()))
    }

    fn run(&mut self) -> Result<Status> {
        let total = self.width - 1;
        if self.first_artificial < total {
            let phase1: Vec<f64> = (0..total)
                .map(|j| if j >= self.first_artificial { -1.0 } else { 0.0 })
                .collect();
            self.optimize(&phase1, total)?;
            let infeasibility: f64 = (0..self.m)
                .filter(|&i| self.basis[i] >= self.first_artificial)
                .map(|i| self.rhs(i))
                .sum();
            if infeasibility > 1e-9 * self.scale {
                return Ok(Status::Infeasible);
            }
            // Drive artificials out of the basis; drop redundant rows.
            let mut i = 0;
            while i < self.m {
                if self.basis[i] >= self.first_artificial {
                    let col = (0..self.first_artificial).find(|&j| self.at(i, j).abs() > 1e-9);
                    match col {
                        Some(c) => {
                            self.pivot(i, c);
                            i += 1;
                        }
                        None => {
                            self.remove_row(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }
        let mut obj = vec![0.0; total];
        obj[..self.n_struct].copy_from_slice(&self.cost);
        let bounded = self.optimize(&obj, self.first_artificial)?;
        Ok(if bounded { Status::Optimal } else { Status::Unbounded })
    }

    fn remove_row(&mut self, i: usize) {
        let w = self.width;
        self.data.drain(i * w..(i + 1) * w);
        self.basis.remove(i);
        self.m -= 1;
    }

    fn primal(&self, n: usize) -> Vec<f64> {
        let mut x = vec![0.0; n];
        for i in 0..self.m {
            if self.basis[i] < n {
                x[self.basis[i]] = self.rhs(i).max(0.0);
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn optimal(outcome: LpOutcome) -> (Vec<f64>, f64) {
        match outcome {
            LpOutcome::Optimal { x, value } => (x, value),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
        let mut lp = LinearProgram::new(Sense::Maximize, vec![3.0, 5.0]);
        lp.constraint(vec![1.0, 0.0], Cmp::Le, 4.0)
            .constraint(vec![0.0, 2.0], Cmp::Le, 12.0)
            .constraint(vec![3.0, 2.0], Cmp::Le, 18.0);
        let (x, v) = optimal(lp.solve().unwrap());
        assert!((v - 36.0).abs() < 1e-12);
        assert!((x[0] - 2.0).abs() < 1e-12 && (x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn equality_and_ge_rows() {
        // min x + y  s.t. x + 2y = 4, x >= 1 -> x=1, y=1.5
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.constraint(vec![1.0, 2.0], Cmp::Eq, 4.0)
            .constraint(vec![1.0, 0.0], Cmp::Ge, 1.0);
        let (x, v) = optimal(lp.solve().unwrap());
        assert!((v - 2.5).abs() < 1e-12, "{x:?}");
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::feasibility(1);
        lp.constraint(vec![1.0], Cmp::Ge, 2.0).constraint(vec![1.0], Cmp::Le, 1.0);
        assert_eq!(lp.solve().unwrap(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(Sense::Maximize, vec![-1.0]).all_free();
        lp.constraint(vec![1.0], Cmp::Le, 1.0);
        assert_eq!(lp.solve().unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variables_and_negative_rhs() {
        // max -x  s.t. x >= -3 (free x) -> x = -3
        let mut lp = LinearProgram::new(Sense::Maximize, vec![-1.0]).all_free();
        lp.constraint(vec![1.0], Cmp::Ge, -3.0);
        let (x, v) = optimal(lp.solve().unwrap());
        assert!((x[0] + 3.0).abs() < 1e-12 && (v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 0.0]);
        lp.constraint(vec![1.0, 1.0], Cmp::Eq, 1.0)
            .constraint(vec![2.0, 2.0], Cmp::Eq, 2.0);
        let (_, v) = optimal(lp.solve().unwrap());
        assert!(v.abs() < 1e-12);
    }
}
