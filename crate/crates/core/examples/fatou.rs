//! The Fatou property along a bounded convergent sequence.

use condrisk::duality::{fatou_check, FatouOptions};
use condrisk::{Cone, Position, ProbSpace, RandVar, RiskMeasure, SubAlgebra};

fn main() -> condrisk::Result<()> {
    let space = ProbSpace::uniform(4)?;
    let f = SubAlgebra::new(&space, vec![vec![0, 1], vec![2, 3]])?;
    let rho = RiskMeasure::avar(&f, Cone::orthant(2), RandVar::constant(&space, 0.5))?;

    let limit = Position::new(&space, vec![vec![1.0, 0.0], vec![-1.0, 2.0], vec![0.5, 0.5], vec![3.0, -4.0]])?;
    let sequence: Vec<Position> = (1..=200)
        .map(|n| {
            let wiggle = if n % 2 == 0 { 1.0 } else { -1.0 } / n as f64;
            limit.add(&Position::constant(&space, &[wiggle, -wiggle])).unwrap()
        })
        .collect();

    let report = fatou_check(&rho, &sequence, &limit, &FatouOptions::default())?;
    println!("rho(limit)  {:?}", report.rho_limit.block_values(&f));
    println!("tail inf    {:?}", report.tail_inf.block_values(&f));
    println!("margin      {:?}", report.margin.block_values(&f));
    for b in &report.buckets {
        println!("bucket k = {} blocks {:?} localized = {}", b.k, b.blocks, b.localized);
    }
    println!("passed = {}", report.passed());
    Ok(())
}
