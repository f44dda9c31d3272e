//! Conditional convex risk measures for portfolio vectors.
//!
//! Built-in measures act on the sum aggregate `ΛX = Σ_i X_i`, block by block,
//! with the conditional probabilities of the block:
//!
//! * entropic: `(1/γ) log E[exp(-γ ΛX) | F]`
//! * average value at risk at level `λ`: the conditional mean of the worst
//!   `λ`-fraction of the loss `-ΛX`, splitting the boundary atom
//! * worst case: the blockwise maximum of `-ΛX`
//!
//! Parameters are `F`-measurable, one value per block. All three satisfy
//! `ρ(0) = 0`.

mod axioms;

pub use axioms::{check_axioms, Axiom, AxiomReport, Violation, AXIOM_TOL, LOCALITY_TOL};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lpmod::{Cone, Position};
use crate::prob::SubAlgebra;
use crate::randvar::RandVar;

/// Threshold below which a risk value counts as acceptable.
pub const ACCEPT_TOL: f64 = 1e-12;

/// User-supplied evaluator for a custom measure.
pub type Evaluator = Arc<dyn Fn(&Position) -> Result<RandVar> + Send + Sync>;

#[derive(Clone)]
pub enum RiskKind {
    Entropic { gamma: RandVar },
    AverageValueAtRisk { lambda: RandVar },
    WorstCase,
    Custom(Evaluator),
}

impl RiskKind {
    pub fn name(&self) -> &'static str {
        match self {
            RiskKind::Entropic { .. } => "entropic",
            RiskKind::AverageValueAtRisk { .. } => "avar",
            RiskKind::WorstCase => "worst_case",
            RiskKind::Custom(_) => "custom",
        }
    }
}

impl fmt::Debug for RiskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RiskKind::Entropic { gamma } => f.debug_struct("Entropic").field("gamma", gamma).finish(),
            RiskKind::AverageValueAtRisk { lambda } => f.debug_struct("AverageValueAtRisk").field("lambda", lambda).finish(),
            RiskKind::WorstCase => f.write_str("WorstCase"),
            RiskKind::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A conditional convex risk measure `ρ : L^∞_F(E)^d → L^0(F)`.
#[derive(Clone, Debug)]
pub struct RiskMeasure {
    kind: RiskKind,
    f: SubAlgebra,
    cone: Cone,
}

impl RiskMeasure {
    fn build(kind: RiskKind, f: &SubAlgebra, cone: Cone) -> Result<Self> {
        cone.certify_aggregate()?;
        Ok(Self {
            kind,
            f: f.clone(),
            cone,
        })
    }

    /// Entropic measure with `F`-measurable risk aversion `γ > 0`.
    pub fn entropic(f: &SubAlgebra, cone: Cone, gamma: RandVar) -> Result<Self> {
        gamma.ensure_measurable(f, "gamma")?;
        if gamma.values().iter().any(|&g| !(g > 0.0)) {
            return Err(Error::BadParameter("gamma must be strictly positive".into()));
        }
        Self::build(RiskKind::Entropic { gamma }, f, cone)
    }

    /// Average value at risk with `F`-measurable tail level `λ ∈ (0, 1)`.
    pub fn avar(f: &SubAlgebra, cone: Cone, lambda: RandVar) -> Result<Self> {
        lambda.ensure_measurable(f, "lambda")?;
        if lambda.values().iter().any(|&l| !(l > 0.0 && l < 1.0)) {
            return Err(Error::BadParameter("lambda must lie in (0, 1)".into()));
        }
        Self::build(RiskKind::AverageValueAtRisk { lambda }, f, cone)
    }

    pub fn worst_case(f: &SubAlgebra, cone: Cone) -> Result<Self> {
        Self::build(RiskKind::WorstCase, f, cone)
    }

    /// A custom measure taken on trust; see [`RiskMeasure::custom`].
    pub fn custom_unchecked(f: &SubAlgebra, cone: Cone, evaluator: Evaluator) -> Result<Self> {
        Self::build(RiskKind::Custom(evaluator), f, cone)
    }

    /// Registers a custom measure after a randomized axiom check.
    pub fn custom(f: &SubAlgebra, cone: Cone, evaluator: Evaluator, trials: usize, seed: u64) -> Result<Self> {
        let rho = Self::custom_unchecked(f, cone, evaluator)?;
        let report = check_axioms(&rho, trials, seed)?;
        if report.violations.is_empty() {
            Ok(rho)
        } else {
            Err(Error::AxiomViolation {
                violations: report.violations.len(),
            })
        }
    }

    pub fn kind(&self) -> &RiskKind {
        &self.kind
    }

    pub fn algebra(&self) -> &SubAlgebra {
        &self.f
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self.kind, RiskKind::Custom(_))
    }

    pub(crate) fn ensure_input(&self, x: &Position) -> Result<()> {
        x.space().ensure_same(self.f.space())?;
        if x.dim() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "position has d = {}, risk measure expects d = {}",
                x.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// `ρ(x)`, an `F`-measurable variable.
    pub fn eval(&self, x: &Position) -> Result<RandVar> {
        self.ensure_input(x)?;
        if let RiskKind::Custom(evaluator) = &self.kind {
            let out = evaluator(x)?;
            out.space().ensure_same(self.f.space())?;
            if !out.is_measurable(&self.f, crate::randvar::MEASURABILITY_TOL) {
                return Err(Error::NotMeasurable("custom risk value"));
            }
            return Ok(out);
        }
        let s = x.aggregate();
        let per_block: Vec<f64> = (0..self.f.num_blocks())
            .map(|b| {
                let probs = self.f.cond_probs(b);
                let agg: Vec<f64> = self.f.block(b).iter().map(|&a| s.get(a)).collect();
                self.eval_block(b, &probs, &agg)
            })
            .collect();
        RandVar::from_blocks(&self.f, &per_block)
    }

    /// Built-in value on one block from the aggregate restricted to it.
    pub(crate) fn eval_block(&self, b: usize, probs: &[f64], agg: &[f64]) -> f64 {
        match &self.kind {
            RiskKind::Entropic { gamma } => {
                let g = gamma.block_value(&self.f, b);
                entropic_block(g, probs, agg)
            }
            RiskKind::AverageValueAtRisk { lambda } => {
                let l = lambda.block_value(&self.f, b);
                avar_block(l, probs, agg)
            }
            RiskKind::WorstCase => agg.iter().map(|s| -s).fold(f64::NEG_INFINITY, f64::max),
            RiskKind::Custom(_) => unreachable!("custom measures are evaluated whole"),
        }
    }

    /// Blocks on which `x` is acceptable, i.e. `ρ(x) <= 0`.
    pub fn accept(&self, x: &Position) -> Result<Vec<usize>> {
        let value = self.eval(x)?;
        Ok((0..self.f.num_blocks())
            .filter(|&b| value.block_value(&self.f, b) <= ACCEPT_TOL)
            .collect())
    }

    pub fn acceptance_set(&self) -> AcceptanceSet<'_> {
        AcceptanceSet { rho: self }
    }
}

/// `(1/γ) log Σ p_k exp(-γ s_k)`, evaluated without overflow.
pub(crate) fn entropic_block(gamma: f64, probs: &[f64], agg: &[f64]) -> f64 {
    let top = agg.iter().map(|s| -gamma * s).fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = probs.iter().zip(agg).map(|(p, s)| p * (-gamma * s - top).exp()).sum();
    (top + sum.ln()) / gamma
}

/// Loss indices sorted worst first; ties keep atom order.
pub(crate) fn worst_first(agg: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..agg.len()).collect();
    order.sort_by(|&i, &j| agg[i].total_cmp(&agg[j]).then(i.cmp(&j)));
    order
}

/// Conditional tail mean of the worst `λ` mass of `-s`.
pub(crate) fn avar_block(lambda: f64, probs: &[f64], agg: &[f64]) -> f64 {
    let mut remaining = lambda;
    let mut acc = 0.0;
    for i in worst_first(agg) {
        if remaining <= 0.0 {
            break;
        }
        let take = probs[i].min(remaining);
        acc += take * -agg[i];
        remaining -= take;
    }
    acc / lambda
}

/// `{X : ρ(X) <= 0}`.
#[derive(Clone, Copy, Debug)]
pub struct AcceptanceSet<'a> {
    rho: &'a RiskMeasure,
}

impl AcceptanceSet<'_> {
    pub fn risk(&self) -> &RiskMeasure {
        self.rho
    }

    /// Blockwise membership.
    pub fn contains(&self, x: &Position) -> Result<Vec<bool>> {
        let accepted = self.rho.accept(x)?;
        Ok((0..self.rho.f.num_blocks()).map(|b| accepted.contains(&b)).collect())
    }
}
