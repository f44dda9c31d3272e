//! Evaluating the built-in conditional risk measures on a two-period tree.

use condrisk::{Cone, Position, ProbSpace, RandVar, RiskMeasure, SubAlgebra};

fn main() -> condrisk::Result<()> {
    // Four scenarios; the conditioning information tells "up" from "down".
    let space = ProbSpace::new([("uu", 0.3), ("ud", 0.2), ("du", 0.25), ("dd", 0.25)])?;
    let f = SubAlgebra::from_labels(&space, &[vec!["uu", "ud"], vec!["du", "dd"]])?;

    // Two assets, payoff per scenario.
    let x = Position::new(&space, vec![vec![3.0, 1.0], vec![-1.0, 0.5], vec![0.5, 0.5], vec![-2.0, 1.0]])?;

    let gamma = RandVar::from_blocks(&f, &[1.0, 2.0])?;
    let lambda = RandVar::from_blocks(&f, &[0.5, 0.25])?;
    let measures = [
        RiskMeasure::entropic(&f, Cone::orthant(2), gamma)?,
        RiskMeasure::avar(&f, Cone::orthant(2), lambda)?,
        RiskMeasure::worst_case(&f, Cone::orthant(2))?,
    ];

    for rho in &measures {
        let v = rho.eval(&x)?;
        println!("{:<11} {:?}", rho.kind().name(), v.block_values(&f));
    }
    Ok(())
}
