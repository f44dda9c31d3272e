//! Best approximation from the blockwise convex hull of a family, with
//! certified distances.

use condrisk::convex::{mazur_project, ProjectionMethod};
use condrisk::{Position, ProbSpace, RandVar, SubAlgebra};

fn main() -> condrisk::Result<()> {
    let space = ProbSpace::uniform(4)?;
    let f = SubAlgebra::new(&space, vec![vec![0, 1], vec![2, 3]])?;
    let family: Vec<Position> = (1..=8)
        .map(|n| {
            let t = 1.0 / n as f64;
            Position::new(&space, vec![vec![t], vec![-t], vec![1.0 + t], vec![t * t]]).unwrap()
        })
        .collect();
    let target = Position::zeros(&space, 1);
    let eps = RandVar::constant(&space, 0.2);

    for method in [ProjectionMethod::ActiveSet, ProjectionMethod::AwayStepFrankWolfe] {
        let r = mazur_project(&family, &target, &f, &eps, 2.0, method)?;
        println!("{method:?}");
        println!("  distance     {:?}", r.distance.block_values(&f));
        println!("  lower bound  {:?}", r.certified_lower_bound.block_values(&f));
        println!("  weights      {:?}", r.weights);
        println!("  no approximant on {:?}", r.no_approximant.iter().map(|n| n.block).collect::<Vec<_>>());
    }
    Ok(())
}
