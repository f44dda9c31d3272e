//! The robust representation rho(X) = max_Z { E[X·Z | F] - alpha(Z) }, with
//! the maximizer and the duality gap.

use condrisk::duality::{represent, SolverOptions};
use condrisk::{Cone, Position, ProbSpace, RandVar, RiskMeasure, SubAlgebra};

fn main() -> condrisk::Result<()> {
    let space = ProbSpace::uniform(2)?;
    let f = SubAlgebra::trivial(&space);
    let x = Position::new(&space, vec![vec![-2.0], vec![4.0]])?;

    let measures = [
        RiskMeasure::entropic(&f, Cone::orthant(1), RandVar::constant(&space, 1.0))?,
        RiskMeasure::avar(&f, Cone::orthant(1), RandVar::constant(&space, 0.5))?,
        RiskMeasure::worst_case(&f, Cone::orthant(1))?,
    ];
    for rho in &measures {
        let r = represent(rho, &x, &SolverOptions::default())?;
        println!(
            "{:<11} rho = {:>9.6}  dual = {:>9.6}  gap = {:.1e}  z* = {:?}",
            rho.kind().name(),
            r.rho_value.get(0),
            r.dual_value.get(0),
            r.max_gap(),
            r.argmax_z.position().rows()
        );
    }
    Ok(())
}
