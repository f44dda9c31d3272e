//! Membership in a concatenation-closed convex hull, its gauge, and
//! near-minimizers of a concatenation family.

use condrisk::convex::{gauge, hull_member, ClosureFlags, GeneratedSet};
use condrisk::randvar::eps_attain_inf;
use condrisk::{Position, ProbSpace, RandVar, SubAlgebra};

fn main() -> condrisk::Result<()> {
    let space = ProbSpace::uniform(4)?;
    let f = SubAlgebra::new(&space, vec![vec![0, 1], vec![2, 3]])?;
    let g1 = Position::new(&space, vec![vec![1.0], vec![0.0], vec![1.0], vec![1.0]])?;
    let g2 = Position::new(&space, vec![vec![0.0], vec![1.0], vec![-1.0], vec![1.0]])?;
    let k = GeneratedSet::cc_hull(vec![g1.clone(), g2.clone()], &f)?;

    let x = Position::new(&space, vec![vec![0.5], vec![0.5], vec![3.0], vec![0.0]])?;
    let m = hull_member(&k, &x)?;
    for (b, block) in m.blocks.iter().enumerate() {
        println!("block {b}: member = {} weights = {:?}", block.member, block.weights);
    }
    println!("gauge of the hull  {:?}", gauge(&k, &x)?.block_values(&f));
    let balanced = GeneratedSet::new(vec![g1, g2], ClosureFlags::CC_CONVEX.balanced(), &f)?;
    println!("gauge, balanced    {:?}", gauge(&balanced, &x)?.block_values(&f));

    let costs = [
        RandVar::from_blocks(&f, &[3.0, 1.0])?,
        RandVar::from_blocks(&f, &[2.0, 5.0])?,
    ];
    let best = eps_attain_inf(&costs, &f, &RandVar::constant(&space, 1e-6))?;
    println!("near-infimum       {:?}", best.block_values(&f));
    Ok(())
}
