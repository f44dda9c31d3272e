#![allow(dead_code)]

use condrisk::lpmod::{Cone, DualElement, Position};
use condrisk::prob::{ProbSpace, SubAlgebra};
use condrisk::randvar::RandVar;
use condrisk::risk::RiskMeasure;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random weights and a random partition into at most `max_blocks` blocks.
pub fn space(rng: &mut ChaCha8Rng, atoms: std::ops::RangeInclusive<usize>, max_blocks: usize) -> SubAlgebra {
    let n = rng.gen_range(atoms);
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..1.0)).collect();
    let s = ProbSpace::from_weights(&weights).unwrap();
    let k = rng.gen_range(1..=max_blocks.min(n));
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    let mut blocks = Vec::new();
    let mut start = 0;
    for c in cuts.into_iter().chain([n]) {
        blocks.push(order[start..c].to_vec());
        start = c;
    }
    SubAlgebra::new(&s, blocks).unwrap()
}

pub fn position(rng: &mut ChaCha8Rng, s: &ProbSpace, d: usize, range: f64) -> Position {
    let values = (0..s.len() * d).map(|_| rng.gen_range(-range..=range)).collect();
    Position::from_flat(s, d, values).unwrap()
}

/// The orthant, or a random certified cone with nonnegative normals.
pub fn cone(rng: &mut ChaCha8Rng, d: usize) -> Cone {
    if d == 1 || rng.gen_bool(0.4) {
        return Cone::orthant(d);
    }
    for _ in 0..16 {
        let rows: Vec<Vec<f64>> = (0..d)
            .map(|_| (0..d).map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..1.0) }).collect())
            .collect();
        if let Ok(c) = Cone::new(d, rows) {
            return c;
        }
    }
    Cone::orthant(d)
}

pub fn per_block(rng: &mut ChaCha8Rng, f: &SubAlgebra, lo: f64, hi: f64) -> RandVar {
    let v: Vec<f64> = (0..f.num_blocks()).map(|_| rng.gen_range(lo..hi)).collect();
    RandVar::from_blocks(f, &v).unwrap()
}

/// Entropic, average value at risk and worst case with random parameters.
pub fn builtins(rng: &mut ChaCha8Rng, f: &SubAlgebra, cone: &Cone) -> Vec<RiskMeasure> {
    let gamma = per_block(rng, f, 0.2, 3.0);
    let lambda = per_block(rng, f, 0.1, 0.9);
    vec![
        RiskMeasure::entropic(f, cone.clone(), gamma).unwrap(),
        RiskMeasure::avar(f, cone.clone(), lambda).unwrap(),
        RiskMeasure::worst_case(f, cone.clone()).unwrap(),
    ]
}

/// Positive density with `E[q | F] = 1`.
pub fn density(rng: &mut ChaCha8Rng, f: &SubAlgebra, lo: f64, hi: f64) -> RandVar {
    let s = f.space();
    let mut q: Vec<f64> = (0..s.len()).map(|_| rng.gen_range(lo..hi)).collect();
    for b in 0..f.num_blocks() {
        let mass: f64 = f.block(b).iter().zip(f.cond_probs(b)).map(|(&a, p)| p * q[a]).sum();
        for &a in f.block(b) {
            q[a] /= mass;
        }
    }
    RandVar::new(s, q).unwrap()
}

/// Random nonpositive matrix rescaled blockwise so that `E[z_i | F] = -1`.
pub fn admissible(rng: &mut ChaCha8Rng, f: &SubAlgebra, d: usize) -> DualElement {
    let s = f.space();
    let mut z = Position::zeros(s, d);
    for i in 0..d {
        let q = density(rng, f, 0.0, 1.0);
        for a in 0..s.len() {
            z.set(a, i, -q.get(a));
        }
    }
    DualElement::new(z)
}

/// Blockwise convex combination of `family` with random `F`-measurable weights.
pub fn blockwise_combination(rng: &mut ChaCha8Rng, f: &SubAlgebra, family: &[Position]) -> Position {
    let mut out = Position::zeros(f.space(), family[0].dim());
    for b in 0..f.num_blocks() {
        let mut w: Vec<f64> = family.iter().map(|_| rng.gen_range(0.0..1.0)).collect();
        // Sometimes a vertex: a pure concatenation of generators.
        if rng.gen_bool(0.3) {
            let k = rng.gen_range(0..family.len());
            w.iter_mut().enumerate().for_each(|(j, v)| *v = if j == k { 1.0 } else { 0.0 });
        }
        let total: f64 = w.iter().sum();
        let n = family[0].block_vector(f, b).len();
        let mut v = vec![0.0; n];
        for (g, wk) in family.iter().zip(&w) {
            for (acc, x) in v.iter_mut().zip(g.block_vector(f, b)) {
                *acc += wk / total * x;
            }
        }
        out.set_block_vector(f, b, &v);
    }
    out
}
