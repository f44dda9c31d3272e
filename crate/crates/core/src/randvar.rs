//! Random variables on a finite space: one value per atom.
//!
//! Measurability with respect to a [`SubAlgebra`] is the predicate "constant
//! on every block". Because atoms carry positive mass, almost-sure statements
//! are pointwise statements and every equivalence class has exactly one
//! representative.

use std::fmt;

use crate::error::{Error, Result};
use crate::prob::{ProbSpace, SubAlgebra};

/// Tolerance used when testing measurability of computed quantities.
pub const MEASURABILITY_TOL: f64 = 1e-12;

/// A finite real value per atom.
#[derive(Clone, PartialEq)]
pub struct RandVar {
    space: ProbSpace,
    values: Vec<f64>,
}

/// An extended-real value per atom (`±inf` allowed, NaN never).
#[derive(Clone, PartialEq)]
pub struct ExtRandVar {
    space: ProbSpace,
    values: Vec<f64>,
}

/// A set of atoms, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomSet(Vec<usize>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Geq,
    Gt,
}

impl AtomSet {
    pub fn from_mask(mask: impl IntoIterator<Item = bool>) -> Self {
        Self(
            mask.into_iter()
                .enumerate()
                .filter_map(|(i, keep)| keep.then_some(i))
                .collect(),
        )
    }

    pub fn atoms(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.0.binary_search(&atom).is_ok()
    }

    pub fn is_all(&self, space: &ProbSpace) -> bool {
        self.0.len() == space.len()
    }

    pub fn labels<'a>(&self, space: &'a ProbSpace) -> Vec<&'a str> {
        self.0.iter().map(|&a| space.label(a)).collect()
    }
}

fn check_len(space: &ProbSpace, got: usize) -> Result<()> {
    if got == space.len() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            expected: space.len(),
            got,
        })
    }
}

impl RandVar {
    pub fn new(space: &ProbSpace, values: Vec<f64>) -> Result<Self> {
        check_len(space, values.len())?;
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self {
            space: space.clone(),
            values,
        })
    }

    pub fn constant(space: &ProbSpace, c: f64) -> Self {
        Self {
            space: space.clone(),
            values: vec![c; space.len()],
        }
    }

    pub fn zeros(space: &ProbSpace) -> Self {
        Self::constant(space, 0.0)
    }

    /// The indicator of an atom set.
    pub fn indicator(space: &ProbSpace, set: &AtomSet) -> Self {
        let mut values = vec![0.0; space.len()];
        for &a in set.atoms() {
            values[a] = 1.0;
        }
        Self {
            space: space.clone(),
            values,
        }
    }

    /// An `f`-measurable variable from one value per block.
    pub fn from_blocks(f: &SubAlgebra, per_block: &[f64]) -> Result<Self> {
        if per_block.len() != f.num_blocks() {
            return Err(Error::LengthMismatch {
                expected: f.num_blocks(),
                got: per_block.len(),
            });
        }
        let values = (0..f.space().len()).map(|a| per_block[f.block_of(a)]).collect();
        Self::new(f.space(), values)
    }

    pub(crate) fn from_vec_unchecked(space: &ProbSpace, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), space.len());
        Self {
            space: space.clone(),
            values,
        }
    }

    pub fn space(&self) -> &ProbSpace {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, atom: usize) -> f64 {
        self.values[atom]
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn to_ext(&self) -> ExtRandVar {
        ExtRandVar {
            space: self.space.clone(),
            values: self.values.clone(),
        }
    }

    /// Value on block `b` of an `f`-measurable variable (the first atom's).
    pub fn block_value(&self, f: &SubAlgebra, b: usize) -> f64 {
        self.values[f.block(b)[0]]
    }

    /// One value per block; assumes measurability.
    pub fn block_values(&self, f: &SubAlgebra) -> Vec<f64> {
        (0..f.num_blocks()).map(|b| self.block_value(f, b)).collect()
    }

    pub fn is_measurable(&self, f: &SubAlgebra, tol: f64) -> bool {
        f.blocks().iter().all(|block| {
            let v0 = self.values[block[0]];
            block.iter().all(|&a| (self.values[a] - v0).abs() <= tol * (1.0 + v0.abs()))
        })
    }

    pub fn ensure_measurable(&self, f: &SubAlgebra, what: &'static str) -> Result<()> {
        self.space.ensure_same(f.space())?;
        if self.is_measurable(f, 0.0) {
            Ok(())
        } else {
            Err(Error::NotMeasurable(what))
        }
    }

    pub fn map(&self, op: impl Fn(f64) -> f64) -> Self {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(|&v| op(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &RandVar, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.space.ensure_same(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &RandVar) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RandVar) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &RandVar) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    /// Largest absolute pointwise difference.
    pub fn max_abs_diff(&self, other: &RandVar) -> Result<f64> {
        self.space.ensure_same(&other.space)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

impl fmt::Debug for RandVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.values).finish()
    }
}

impl ExtRandVar {
    pub fn new(space: &ProbSpace, values: Vec<f64>) -> Result<Self> {
        check_len(space, values.len())?;
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::NotANumber);
        }
        Ok(Self {
            space: space.clone(),
            values,
        })
    }

    pub fn from_blocks(f: &SubAlgebra, per_block: &[f64]) -> Result<Self> {
        if per_block.len() != f.num_blocks() {
            return Err(Error::LengthMismatch {
                expected: f.num_blocks(),
                got: per_block.len(),
            });
        }
        let values = (0..f.space().len()).map(|a| per_block[f.block_of(a)]).collect();
        Self::new(f.space(), values)
    }

    pub fn space(&self) -> &ProbSpace {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, atom: usize) -> f64 {
        self.values[atom]
    }

    pub fn block_value(&self, f: &SubAlgebra, b: usize) -> f64 {
        self.values[f.block(b)[0]]
    }

    pub fn block_values(&self, f: &SubAlgebra) -> Vec<f64> {
        (0..f.num_blocks()).map(|b| self.block_value(f, b)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// The finite version, if every entry is finite.
    pub fn to_finite(&self) -> Option<RandVar> {
        self.is_finite().then(|| RandVar {
            space: self.space.clone(),
            values: self.values.clone(),
        })
    }

    /// Pointwise `self + other`; `(+inf) + (-inf)` is rejected.
    pub fn add(&self, other: &ExtRandVar) -> Result<Self> {
        self.space.ensure_same(&other.space)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| {
                if a.is_infinite() && b.is_infinite() && a.signum() != b.signum() {
                    Err(Error::InfMinusInf)
                } else {
                    Ok(a + b)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            space: self.space.clone(),
            values,
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// Pointwise `self - other`; `(+inf) - (+inf)` is rejected.
    pub fn sub(&self, other: &ExtRandVar) -> Result<Self> {
        self.add(&other.neg())
    }
}

impl fmt::Debug for ExtRandVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.values).finish()
    }
}

impl From<RandVar> for ExtRandVar {
    fn from(x: RandVar) -> Self {
        Self {
            space: x.space,
            values: x.values,
        }
    }
}

/// Atoms where `x rel y` holds.
pub fn compare(x: &RandVar, y: &RandVar, rel: Relation) -> Result<AtomSet> {
    x.space.ensure_same(&y.space)?;
    Ok(AtomSet::from_mask(x.values.iter().zip(&y.values).map(|(a, b)| match rel {
        Relation::Geq => a >= b,
        Relation::Gt => a > b,
    })))
}

fn fold_family(family: &[RandVar], pick: impl Fn(f64, f64) -> f64) -> Result<ExtRandVar> {
    let (first, rest) = family.split_first().ok_or(Error::EmptyFamily)?;
    let mut values = first.values.clone();
    for x in rest {
        first.space.ensure_same(&x.space)?;
        for (v, &w) in values.iter_mut().zip(&x.values) {
            *v = pick(*v, w);
        }
    }
    Ok(ExtRandVar {
        space: first.space.clone(),
        values,
    })
}

/// Essential infimum of a finite family: the pointwise minimum.
pub fn ess_inf(family: &[RandVar]) -> Result<ExtRandVar> {
    fold_family(family, f64::min)
}

/// Essential supremum of a finite family: the pointwise maximum.
pub fn ess_sup(family: &[RandVar]) -> Result<ExtRandVar> {
    fold_family(family, f64::max)
}

/// `E[x | f]`.
pub fn cond_expect(x: &RandVar, f: &SubAlgebra) -> Result<RandVar> {
    x.space.ensure_same(f.space())?;
    let mut values = vec![0.0; x.values.len()];
    for (b, block) in f.blocks().iter().enumerate() {
        let mass = f.block_prob(b);
        let mean = block
            .iter()
            .map(|&a| x.space.prob(a) * x.values[a])
            .sum::<f64>()
            / mass;
        for &a in block {
            values[a] = mean;
        }
    }
    Ok(RandVar {
        space: x.space.clone(),
        values,
    })
}

/// Glues `parts[n]` on block `n` of `partition`, whose blocks must be
/// `f`-events. Pure selection: no arithmetic touches the values.
pub fn concatenate(partition: &SubAlgebra, parts: &[RandVar], f: &SubAlgebra) -> Result<RandVar> {
    partition.space().ensure_same(f.space())?;
    if parts.len() != partition.num_blocks() {
        return Err(Error::ArityMismatch {
            expected: partition.num_blocks(),
            got: parts.len(),
        });
    }
    for (n, block) in partition.blocks().iter().enumerate() {
        let covered = block.iter().all(|&a| f.block(f.block_of(a)).iter().all(|c| block.contains(c)));
        if !covered {
            return Err(Error::PartitionNotInF(n));
        }
    }
    let space = partition.space();
    let mut values = vec![0.0; space.len()];
    for (block, part) in partition.blocks().iter().zip(parts) {
        space.ensure_same(&part.space)?;
        for &a in block {
            values[a] = part.values[a];
        }
    }
    Ok(RandVar {
        space: space.clone(),
        values,
    })
}

/// Returns an element of the concatenation closure of `generators` whose
/// value lies within `eps` of the essential infimum of that closure.
///
/// Generators must be `f`-measurable. On a finite space the infimum is
/// attained, so the result is the exact blockwise minimizer (lowest generator
/// index on ties) and `eps` only has to be strictly positive.
pub fn eps_attain_inf(generators: &[RandVar], f: &SubAlgebra, eps: &RandVar) -> Result<RandVar> {
    if generators.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if eps.values.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::NonPositiveEps);
    }
    for g in generators {
        g.ensure_measurable(f, "generator")?;
    }
    let parts = (0..f.num_blocks())
        .map(|b| {
            let best = generators
                .iter()
                .enumerate()
                .min_by(|(i, x), (j, y)| {
                    x.block_value(f, b)
                        .total_cmp(&y.block_value(f, b))
                        .then(i.cmp(j))
                })
                .map(|(_, g)| g.clone())
                .expect("nonempty");
            best
        })
        .collect::<Vec<_>>();
    concatenate(f, &parts, f)
}
