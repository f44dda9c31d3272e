//! Polars and the bipolar theorem for a finitely generated set.

use condrisk::convex::{bipolar_member, polar_contains, polar_support, ClosureFlags, GeneratedSet};
use condrisk::{DualElement, Position, ProbSpace, SubAlgebra};

fn main() -> condrisk::Result<()> {
    let space = ProbSpace::uniform(2)?;
    let f = SubAlgebra::trivial(&space);
    let g1 = Position::new(&space, vec![vec![1.0], vec![0.0]])?;
    let g2 = Position::new(&space, vec![vec![0.0], vec![1.0]])?;
    let d = GeneratedSet::cc_hull(vec![g1.clone(), g2.clone()], &f)?.with_origin();
    let balanced = GeneratedSet::new(vec![g1, g2], ClosureFlags::CC_CONVEX.balanced(), &f)?;

    let z = DualElement::new(Position::new(&space, vec![vec![1.0], vec![-3.0]])?);
    println!("z in one-sided polar: {:?}", polar_contains(&d, &z, true)?);
    println!("z in absolute polar:  {:?}", polar_contains(&d, &z, false)?);

    for (name, rows) in [("inside", [[0.3], [0.4]]), ("outside", [[1.0], [1.0]]), ("below", [[-2.0], [0.0]])] {
        let x = Position::new(&space, rows.iter().map(|r| r.to_vec()).collect())?;
        println!(
            "{name:<8} support = {:?}  one-sided bipolar = {:?}  balanced bipolar = {:?}",
            polar_support(&d, &x, true)?.block_values(&f),
            bipolar_member(&d, &x, true)?,
            bipolar_member(&balanced, &x, false)?,
        );
    }
    Ok(())
}
