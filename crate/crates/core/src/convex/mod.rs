//! `L^0`-convex analysis on finite spaces.
//!
//! Sets are finitely generated and closed under `L^0`-convex combinations,
//! concatenation along conditioning blocks, and optionally multiplication by
//! `|Y| <= 1`. Coefficients are `F`-measurable, so every hull, gauge,
//! projection and polar computation splits into independent finite-dimensional
//! problems, one per block of `F`. On block `B` positions are flattened
//! atom-major and paired through `⟨u, v⟩ = Σ_ω P(ω | B) u(ω)·v(ω)`.

mod hull;
mod polar;
mod projection;
mod separation;

pub use hull::{gauge, hull_member, BlockMembership, HullMembership};
pub use polar::{bipolar_member, polar_contains, polar_support, BIPOLAR_TOL};
pub use projection::{
    mazur_project, min_norm_point, MazurReport, MinNormPoint, NoApproximant, ProjectionMethod,
};
pub use separation::{separate, SeparationCertificate};

use crate::error::{Error, Result};
use crate::lpmod::{portfolio_norm, Position};
use crate::prob::SubAlgebra;
use crate::randvar::{ExtRandVar, RandVar};

/// Closure operations applied to the generators of a [`GeneratedSet`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClosureFlags {
    pub l0_convex: bool,
    pub concatenation: bool,
    pub balanced: bool,
}

impl ClosureFlags {
    /// `L^0`-convex and closed under concatenation: the cc-convex hull.
    pub const CC_CONVEX: Self = Self {
        l0_convex: true,
        concatenation: true,
        balanced: false,
    };

    pub fn balanced(self) -> Self {
        Self { balanced: true, ..self }
    }
}

/// The smallest set containing the generators and closed under the flagged
/// operations. With `l0_convex` set the result is, block by block, the convex
/// hull of the generators' restrictions (of `±g` when `balanced`); finite
/// concatenations add nothing beyond that.
#[derive(Clone, Debug)]
pub struct GeneratedSet {
    generators: Vec<Position>,
    flags: ClosureFlags,
    f: SubAlgebra,
}

impl GeneratedSet {
    pub fn new(generators: Vec<Position>, flags: ClosureFlags, f: &SubAlgebra) -> Result<Self> {
        let first = generators.first().ok_or(Error::EmptyGenerators)?;
        first.space().ensure_same(f.space())?;
        for g in &generators[1..] {
            first.ensure_shape(g)?;
        }
        Ok(Self {
            generators,
            flags,
            f: f.clone(),
        })
    }

    /// The cc-convex hull of the generators.
    pub fn cc_hull(generators: Vec<Position>, f: &SubAlgebra) -> Result<Self> {
        Self::new(generators, ClosureFlags::CC_CONVEX, f)
    }

    /// Same generators plus the origin.
    pub fn with_origin(&self) -> Self {
        let mut generators = self.generators.clone();
        generators.push(Position::zeros(self.generators[0].space(), self.dim()));
        Self {
            generators,
            flags: self.flags,
            f: self.f.clone(),
        }
    }

    pub fn with_flags(&self, flags: ClosureFlags) -> Self {
        Self { flags, ..self.clone() }
    }

    pub fn generators(&self) -> &[Position] {
        &self.generators
    }

    pub fn flags(&self) -> ClosureFlags {
        self.flags
    }

    pub fn algebra(&self) -> &SubAlgebra {
        &self.f
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub(crate) fn ensure_compatible(&self, x: &Position) -> Result<()> {
        self.generators[0].ensure_shape(x)
    }

    pub(crate) fn require_convex(&self) -> Result<()> {
        if self.flags.l0_convex {
            Ok(())
        } else {
            Err(Error::MissingClosure("l0_convex"))
        }
    }

    /// Generator restrictions to block `b` with their signed origin:
    /// `(generator index, sign, vector)`. Balanced sets list `+g` then `-g`.
    pub(crate) fn block_points(&self, b: usize) -> Vec<(usize, f64, Vec<f64>)> {
        let mut pts = Vec::new();
        for (k, g) in self.generators.iter().enumerate() {
            let v = g.block_vector(&self.f, b);
            let negated = self.flags.balanced.then(|| v.iter().map(|c| -c).collect());
            pts.push((k, 1.0, v));
            if let Some(neg) = negated {
                pts.push((k, -1.0, neg));
            }
        }
        pts
    }
}

/// Conditional weights of the flattened coordinates of block `b`.
pub(crate) fn block_weights(f: &SubAlgebra, b: usize, d: usize) -> Vec<f64> {
    f.cond_probs(b)
        .into_iter()
        .flat_map(|p| std::iter::repeat_n(p, d))
        .collect()
}

pub(crate) fn weighted_dot(w: &[f64], u: &[f64], v: &[f64]) -> f64 {
    w.iter().zip(u).zip(v).map(|((w, a), b)| w * a * b).sum()
}

/// The ball `{X : |||X | F|||_p <= radius}`, handled analytically.
#[derive(Clone, Debug, PartialEq)]
pub struct NormBall {
    pub p: f64,
    pub radius: f64,
    pub f: SubAlgebra,
}

impl NormBall {
    pub fn unit(f: &SubAlgebra, p: f64) -> Self {
        Self {
            p,
            radius: 1.0,
            f: f.clone(),
        }
    }

    pub fn gauge(&self, x: &Position) -> Result<ExtRandVar> {
        Ok(portfolio_norm(x, &self.f, self.p)?.scale(1.0 / self.radius).into())
    }

    /// Blocks on which `x` lies in the ball.
    pub fn contains(&self, x: &Position) -> Result<Vec<bool>> {
        let norm = portfolio_norm(x, &self.f, self.p)?;
        Ok(norm
            .block_values(&self.f)
            .into_iter()
            .map(|n| n <= self.radius * (1.0 + 1e-12))
            .collect())
    }
}

/// Either a finitely generated set or a built-in norm ball.
#[derive(Clone, Debug)]
pub enum ConvexSet {
    Generated(GeneratedSet),
    Ball(NormBall),
}

impl ConvexSet {
    pub fn gauge(&self, x: &Position) -> Result<ExtRandVar> {
        match self {
            ConvexSet::Generated(k) => gauge(k, x),
            ConvexSet::Ball(ball) => ball.gauge(x),
        }
    }

    pub fn contains(&self, x: &Position) -> Result<Vec<bool>> {
        match self {
            ConvexSet::Generated(k) => Ok(hull_member(k, x)?.blocks.iter().map(|m| m.member).collect()),
            ConvexSet::Ball(ball) => ball.contains(x),
        }
    }
}

/// Blockwise value helper: `RandVar` from one value per block.
pub(crate) fn per_block(f: &SubAlgebra, values: &[f64]) -> Result<RandVar> {
    RandVar::from_blocks(f, values)
}
