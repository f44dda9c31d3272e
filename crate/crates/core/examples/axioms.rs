//! Randomized axiom checks, and a custom measure that fails them.

use std::sync::Arc;

use condrisk::randvar::cond_expect;
use condrisk::risk::{check_axioms, Axiom, Evaluator};
use condrisk::{Cone, ProbSpace, RandVar, RiskMeasure, SubAlgebra};

fn main() -> condrisk::Result<()> {
    let space = ProbSpace::from_weights(&[1.0, 2.0, 3.0, 4.0])?;
    let f = SubAlgebra::new(&space, vec![vec![0, 3], vec![1, 2]])?;

    let rho = RiskMeasure::entropic(&f, Cone::orthant(2), RandVar::constant(&space, 1.5))?;
    let report = check_axioms(&rho, 300, 42)?;
    println!("entropic: passed = {}", report.passed());

    // The negated conditional mean scaled by two is not cash invariant.
    let f2 = f.clone();
    let doubled: Evaluator = Arc::new(move |x| Ok(cond_expect(&x.aggregate(), &f2)?.scale(-2.0)));
    let bad = RiskMeasure::custom_unchecked(&f, Cone::orthant(2), doubled.clone())?;
    let report = check_axioms(&bad, 100, 42)?;
    for axiom in Axiom::ALL {
        println!("{:<16} {} violations", axiom.name(), report.count(axiom));
    }

    // The checked constructor refuses it.
    match RiskMeasure::custom(&f, Cone::orthant(2), doubled, 100, 42) {
        Err(e) => println!("custom(): {e}"),
        Ok(_) => println!("custom(): accepted"),
    }
    Ok(())
}
