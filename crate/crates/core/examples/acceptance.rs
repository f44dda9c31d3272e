//! Acceptance sets: a position is acceptable on a block when its risk there is
//! nonpositive, and adding the risk as cash makes any position acceptable.

use condrisk::{Cone, Position, ProbSpace, RandVar, RiskMeasure, SubAlgebra};

fn main() -> condrisk::Result<()> {
    let space = ProbSpace::uniform(4)?;
    let f = SubAlgebra::new(&space, vec![vec![0, 1], vec![2, 3]])?;
    let rho = RiskMeasure::avar(&f, Cone::orthant(1), RandVar::constant(&space, 0.5))?;

    let x = Position::new(&space, vec![vec![1.0], vec![2.0], vec![-1.0], vec![3.0]])?;
    let set = rho.acceptance_set();
    println!("rho(x)            = {:?}", rho.eval(&x)?.block_values(&f));
    println!("accepted blocks   = {:?}", set.contains(&x)?);

    let hedged = x.add_cash_all(&rho.eval(&x)?)?;
    println!("rho(x + rho(x))   = {:?}", rho.eval(&hedged)?.block_values(&f));
    println!("accepted blocks   = {:?}", set.contains(&hedged)?);
    Ok(())
}
