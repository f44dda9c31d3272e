//! Finite probability spaces and their sub-algebras.
//!
//! A [`ProbSpace`] is a finite list of labelled atoms with strictly positive
//! probabilities; its power set is the ambient algebra. A [`SubAlgebra`] is a
//! partition of the atoms, each block being an atom of the coarser algebra.
//! Countable partitions of the conditioning algebra are finite here, so the
//! same type also describes the partitions used for concatenation.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Tolerance on the total mass of a space.
pub const PROB_SUM_TOL: f64 = 1e-12;

#[derive(Debug, PartialEq)]
struct SpaceInner {
    labels: Vec<String>,
    probs: Vec<f64>,
}

/// A finite probability space. Cloning is cheap; clones compare equal.
#[derive(Clone)]
pub struct ProbSpace {
    inner: Arc<SpaceInner>,
}

impl ProbSpace {
    /// Builds a space from `(label, probability)` pairs. Atom order is kept.
    pub fn new<S: Into<String>>(atoms: impl IntoIterator<Item = (S, f64)>) -> Result<Self> {
        let mut labels = Vec::new();
        let mut probs = Vec::new();
        let mut seen = HashMap::new();
        for (label, prob) in atoms {
            let label = label.into();
            if !(prob > 0.0) || !prob.is_finite() {
                return Err(Error::ZeroProbabilityAtom { label, prob });
            }
            if seen.insert(label.clone(), labels.len()).is_some() {
                return Err(Error::DuplicateLabel(label));
            }
            labels.push(label);
            probs.push(prob);
        }
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::ProbSum { sum });
        }
        Ok(Self {
            inner: Arc::new(SpaceInner { labels, probs }),
        })
    }

    /// `n` equally likely atoms labelled `w0, w1, ...`.
    pub fn uniform(n: usize) -> Result<Self> {
        let p = 1.0 / n as f64;
        Self::new((0..n).map(|i| (format!("w{i}"), p)))
    }

    /// Atoms labelled `w0, w1, ...` with the given weights normalized to sum to one.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        Self::new(weights.iter().enumerate().map(|(i, w)| (format!("w{i}"), w / total)))
    }

    pub fn len(&self) -> usize {
        self.inner.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.inner.probs
    }

    pub fn prob(&self, atom: usize) -> f64 {
        self.inner.probs[atom]
    }

    pub fn labels(&self) -> &[String] {
        &self.inner.labels
    }

    pub fn label(&self, atom: usize) -> &str {
        &self.inner.labels[atom]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.inner
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownAtom(label.to_string()))
    }

    pub fn ensure_same(&self, other: &ProbSpace) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

impl PartialEq for ProbSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}

impl fmt::Debug for ProbSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.inner.labels.iter().zip(&self.inner.probs))
            .finish()
    }
}

/// A partition of the atoms of a [`ProbSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct SubAlgebra {
    space: ProbSpace,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl SubAlgebra {
    /// Builds the algebra generated by `blocks` (atom indices). Within a block
    /// atoms are sorted; block order is kept as given.
    pub fn new(space: &ProbSpace, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = space.len();
        let mut block_of = vec![usize::MAX; n];
        let mut sorted = Vec::with_capacity(blocks.len());
        for (b, block) in blocks.into_iter().enumerate() {
            if block.is_empty() {
                return Err(Error::EmptyBlock(b));
            }
            let mut block = block;
            block.sort_unstable();
            for &atom in &block {
                if atom >= n {
                    return Err(Error::NotAPartition(format!("atom index {atom} out of range")));
                }
                if block_of[atom] != usize::MAX {
                    return Err(Error::NotAPartition(format!(
                        "atom `{}` appears in more than one block",
                        space.label(atom)
                    )));
                }
                block_of[atom] = b;
            }
            sorted.push(block);
        }
        if let Some(atom) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::NotAPartition(format!(
                "atom `{}` is not covered",
                space.label(atom)
            )));
        }
        Ok(Self {
            space: space.clone(),
            blocks: sorted,
            block_of,
        })
    }

    /// Same as [`SubAlgebra::new`] with blocks given by atom label.
    pub fn from_labels<S: AsRef<str>>(space: &ProbSpace, blocks: &[Vec<S>]) -> Result<Self> {
        let blocks = blocks
            .iter()
            .map(|b| b.iter().map(|l| space.index_of(l.as_ref())).collect())
            .collect::<Result<Vec<Vec<usize>>>>()?;
        Self::new(space, blocks)
    }

    /// The finest algebra: every atom is its own block.
    pub fn finest(space: &ProbSpace) -> Self {
        Self::new(space, (0..space.len()).map(|i| vec![i]).collect()).expect("singletons partition")
    }

    /// The trivial algebra `{∅, Ω}`.
    pub fn trivial(space: &ProbSpace) -> Self {
        Self::new(space, vec![(0..space.len()).collect()]).expect("one block partitions")
    }

    pub fn space(&self) -> &ProbSpace {
        &self.space
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &[usize] {
        &self.blocks[b]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, atom: usize) -> usize {
        self.block_of[atom]
    }

    pub fn block_prob(&self, b: usize) -> f64 {
        self.blocks[b].iter().map(|&a| self.space.prob(a)).sum()
    }

    /// Conditional probabilities of the atoms of block `b`, in block order.
    pub fn cond_probs(&self, b: usize) -> Vec<f64> {
        let total = self.block_prob(b);
        self.blocks[b]
            .iter()
            .map(|&a| self.space.prob(a) / total)
            .collect()
    }

    /// True iff every block of `finer` is contained in a block of `self`.
    pub fn is_coarser(&self, finer: &SubAlgebra) -> Result<bool> {
        self.space.ensure_same(&finer.space)?;
        Ok(finer.blocks.iter().all(|block| {
            let target = self.block_of[block[0]];
            block.iter().all(|&a| self.block_of[a] == target)
        }))
    }

    pub fn ensure_same(&self, other: &SubAlgebra) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Atom indices of the union of the given blocks, sorted.
    pub fn atoms_of_blocks(&self, blocks: &[usize]) -> Vec<usize> {
        let mut atoms: Vec<usize> = blocks.iter().flat_map(|&b| self.blocks[b].iter().copied()).collect();
        atoms.sort_unstable();
        atoms
    }
}
