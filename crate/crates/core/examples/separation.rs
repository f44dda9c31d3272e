//! Strict separation of a point from a concatenation-closed convex hull by a
//! conditional linear functional.

use condrisk::convex::{separate, GeneratedSet};
use condrisk::{Error, Position, ProbSpace, SubAlgebra};

fn main() -> condrisk::Result<()> {
    let space = ProbSpace::uniform(4)?;
    let f = SubAlgebra::new(&space, vec![vec![0, 1], vec![2, 3]])?;
    let k = GeneratedSet::cc_hull(
        vec![
            Position::new(&space, vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0], vec![1.0, 1.0]])?,
            Position::new(&space, vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 0.0]])?,
        ],
        &f,
    )?;

    let outside = Position::constant(&space, &[2.0, 2.0]);
    let cert = separate(&k, &outside)?;
    println!("eps      {:?}", cert.eps.block_values(&f));
    println!("margin   {:?}", cert.margin.block_values(&f));
    println!("support  {:?}", cert.support.block_values(&f));
    println!("verified {}", cert.verify(&k, &outside)?);

    let inside = Position::constant(&space, &[0.5, 0.5]);
    match separate(&k, &inside) {
        Err(Error::NotSeparable { block }) => println!("inside on block {block}: not separable"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
