//! Conditional L^p norms, portfolio norms, the pairing and its dual norm.

use condrisk::lpmod::{cond_norm, dual_norm, pair, portfolio_norm, portfolio_norm_with, NormConvention};
use condrisk::{DualElement, Position, ProbSpace, SubAlgebra};

fn main() -> condrisk::Result<()> {
    let space = ProbSpace::uniform(4)?;
    let f = SubAlgebra::new(&space, vec![vec![0, 1], vec![2, 3]])?;
    let x = Position::new(&space, vec![vec![1.0, -2.0], vec![-3.0, 0.0], vec![2.0, 2.0], vec![6.0, -1.0]])?;

    for p in [1.0, 2.0, 3.0, f64::INFINITY] {
        println!(
            "p = {:<3} |x_1|F| = {:?}  |||x|F||| = {:?}  literal = {:?}",
            p,
            cond_norm(&x.coord(0), &f, p)?.block_values(&f),
            portfolio_norm(&x, &f, p)?.block_values(&f),
            portfolio_norm_with(&x, &f, p, NormConvention::Literal)?.block_values(&f),
        );
    }

    let z = DualElement::new(Position::new(&space, vec![vec![-1.0, 0.5], vec![0.0, -1.0], vec![2.0, 1.0], vec![-1.0, 0.0]])?);
    println!("E[x·z|F]        = {:?}", pair(&x, &z, &f)?.block_values(&f));
    println!("dual norm (p=2) = {:?}", dual_norm(&z, &f, 2.0)?.block_values(&f));
    Ok(())
}
