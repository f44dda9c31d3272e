//! The closed-form penalty against the supremum over the acceptance set,
//! and +inf for dual elements outside the admissible set.

use condrisk::duality::{conjugate, penalty_from_acceptance};
use condrisk::{Cone, DualElement, Position, ProbSpace, RandVar, RiskMeasure, SubAlgebra};

fn main() -> condrisk::Result<()> {
    let space = ProbSpace::uniform(4)?;
    let f = SubAlgebra::new(&space, vec![vec![0, 1], vec![2, 3]])?;
    let rho = RiskMeasure::entropic(&f, Cone::orthant(1), RandVar::constant(&space, 1.0))?;

    let z = DualElement::new(Position::new(&space, vec![vec![-1.5], vec![-0.5], vec![-0.2], vec![-1.8]])?);
    println!("closed form     {:?}", conjugate(&rho, &z)?.block_values(&f));
    println!("from acceptance {:?}", penalty_from_acceptance(&rho, &z)?.block_values(&f));

    let outside = DualElement::new(Position::new(&space, vec![vec![-1.0], vec![-1.0], vec![1.0], vec![-3.0]])?);
    println!("admissible      {:?}", outside.admissible_blocks(&f)?);
    println!("penalty         {:?}", conjugate(&rho, &outside)?.block_values(&f));
    Ok(())
}
