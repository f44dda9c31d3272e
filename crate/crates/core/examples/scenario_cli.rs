//! Loading a JSON scenario and running the command-line front end in-process.

use condrisk::cli::run;
use condrisk::scenario::Scenario;

fn main() -> condrisk::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/two_blocks.json");
    let sc = Scenario::load(path)?;
    println!("atoms {:?}, positions {:?}, risks {:?}", sc.space.labels(), sc.positions.keys().collect::<Vec<_>>(), sc.risks.keys().collect::<Vec<_>>());

    for args in [
        vec!["eval", "avar", "X"],
        vec!["penalty", "avar", "Z"],
        vec!["eval", "avar", "missing"],
    ] {
        let out = run(["condrisk", "--scenario", path].into_iter().chain(args.iter().copied()));
        println!("$ condrisk {} -> exit {}", args.join(" "), out.code);
        print!("{}", out.stdout);
    }
    Ok(())
}
