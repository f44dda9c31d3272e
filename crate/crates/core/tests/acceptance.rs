//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use condrisk::convex::{
    bipolar_member, gauge, hull_member, mazur_project, separate, ClosureFlags, GeneratedSet, ProjectionMethod,
};
use condrisk::duality::{
    conjugate, fatou_check, penalty_from_acceptance, represent, FatouOptions, SolverOptions,
};
use condrisk::lpmod::{cond_norm, dual_norm, pair, portfolio_norm, DualElement, Position};
use condrisk::prob::{ProbSpace, SubAlgebra};
use condrisk::randvar::RandVar;
use condrisk::risk::{check_axioms, RiskKind};
use rand::Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(elapsed: Duration, budget: Duration) -> Result<(), String> {
    ensure(elapsed < budget, || format!("runtime {elapsed:.2?} exceeds {budget:?}"))
}

// 1. Axioms of the built-in measures.
fn axiom_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(0);
    let mut runs = 0;
    for d in 1..=3 {
        for _ in 0..3 {
            let f = common::space(&mut rng, 2..=16, 4);
            let cone = common::cone(&mut rng, d);
            for rho in common::builtins(&mut rng, &f, &cone) {
                let report = check_axioms(&rho, 500, 0).map_err(|e| e.to_string())?;
                ensure(report.passed(), || {
                    format!("{} on {} atoms, d = {d}: {:?}", rho.kind().name(), f.space().len(), report.violations.first())
                })?;
                runs += 1;
            }
        }
    }
    within_budget(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("{runs} measure/space pairs x 500 trials, 0 violations"))
}

// 2. Strong and weak duality.
fn representation() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(2);
    let opts = SolverOptions::default();
    let mut worst_gap = 0.0f64;
    let mut finite_weak = 0;
    for instance in 0..50 {
        let d = rng.gen_range(1..=3);
        let f = common::space(&mut rng, 2..=16, 4);
        let cone = common::cone(&mut rng, d);
        let x = common::position(&mut rng, f.space(), d, 3.0);
        for rho in common::builtins(&mut rng, &f, &cone) {
            let r = represent(&rho, &x, &opts).map_err(|e| e.to_string())?;
            for &g in r.gap.values() {
                ensure(g.abs() <= 1e-6, || format!("instance {instance}, {}: gap {g}", rho.kind().name()))?;
                worst_gap = worst_gap.max(g.abs());
            }
            let rx = rho.eval(&x).map_err(|e| e.to_string())?;
            for k in 0..100 {
                let z = if k % 2 == 0 {
                    let q = common::density(&mut rng, &f, 0.3, 1.7);
                    DualElement::from_density(&q, d)
                } else {
                    common::admissible(&mut rng, &f, d)
                };
                let lhs = pair(&x, &z, &f).map_err(|e| e.to_string())?;
                let penalty = conjugate(&rho, &z).map_err(|e| e.to_string())?;
                for a in 0..f.space().len() {
                    if penalty.get(a).is_finite() {
                        finite_weak += 1;
                    }
                    let value = lhs.get(a) - penalty.get(a);
                    ensure(value <= rx.get(a) + 1e-8, || {
                        format!("instance {instance}, {}: weak duality {value} > {}", rho.kind().name(), rx.get(a))
                    })?;
                }
            }
        }
    }
    within_budget(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "150 gaps, max {worst_gap:.2e}; 15000 weak-duality duals ({finite_weak} atom checks with finite penalty)"
    ))
}

fn inf_blocks(v: &condrisk::ExtRandVar, f: &SubAlgebra) -> Vec<usize> {
    (0..f.num_blocks()).filter(|&b| v.block_value(f, b) == f64::INFINITY).collect()
}

// 3. Penalty via the acceptance set against the closed-form conjugate.
fn penalty_consistency() -> Outcome {
    let mut rng = common::rng(3);
    let mut compared = 0;
    let mut infinite = 0;
    let mut worst = 0.0f64;
    for instance in 0..50 {
        let d = rng.gen_range(1..=3);
        let f = common::space(&mut rng, 2..=6, 3);
        let cone = common::cone(&mut rng, d);
        let measures = common::builtins(&mut rng, &f, &cone);
        let mut duals = vec![
            DualElement::from_density(&common::density(&mut rng, &f, 0.5, 1.5), d),
            DualElement::from_density(&common::density(&mut rng, &f, 0.05, 3.0), d),
        ];
        if d > 1 {
            duals.push(common::admissible(&mut rng, &f, d));
        }
        for rho in &measures {
            for z in &duals {
                let exact = conjugate(rho, z).map_err(|e| e.to_string())?;
                let numeric = penalty_from_acceptance(rho, z).map_err(|e| e.to_string())?;
                let (ie, inum) = (inf_blocks(&exact, &f), inf_blocks(&numeric, &f));
                ensure(ie == inum, || {
                    format!("instance {instance}, {}: +inf blocks {ie:?} vs {inum:?}", rho.kind().name())
                })?;
                infinite += ie.len();
                for b in 0..f.num_blocks() {
                    let (a, n) = (exact.block_value(&f, b), numeric.block_value(&f, b));
                    if a.is_finite() {
                        ensure((a - n).abs() <= 1e-6, || {
                            format!("instance {instance}, {} block {b}: {a} vs {n}", rho.kind().name())
                        })?;
                        worst = worst.max((a - n).abs());
                        compared += 1;
                    }
                }
            }
        }

        // Break admissibility on a random set of blocks.
        let base = DualElement::from_density(&common::density(&mut rng, &f, 0.5, 1.5), d);
        let mut z = base.position().clone();
        let mut broken = Vec::new();
        for b in 0..f.num_blocks() {
            if rng.gen_bool(0.5) {
                let atom = f.block(b)[rng.gen_range(0..f.block(b).len())];
                if rng.gen_bool(0.5) {
                    z.set(atom, 0, 0.25);
                } else {
                    for &a in f.block(b) {
                        for i in 0..d {
                            z.set(a, i, 1.5 * z.get(a, i));
                        }
                    }
                }
                broken.push(b);
            }
        }
        let z = DualElement::new(z);
        let flags = z.admissible_blocks(&f).map_err(|e| e.to_string())?;
        let inadmissible: Vec<usize> = (0..f.num_blocks()).filter(|&b| !flags[b]).collect();
        ensure(inadmissible == broken, || format!("instance {instance}: admissibility flags {inadmissible:?} vs {broken:?}"))?;
        for rho in &measures {
            let got = inf_blocks(&conjugate(rho, &z).map_err(|e| e.to_string())?, &f);
            let expected: Vec<usize> = match rho.kind() {
                RiskKind::AverageValueAtRisk { lambda } => (0..f.num_blocks())
                    .filter(|&b| {
                        !flags[b]
                            || f.block(b).iter().any(|&a| -z.position().get(a, 0) > 1.0 / lambda.block_value(&f, b) * (1.0 + 1e-12))
                    })
                    .collect(),
                _ => inadmissible.clone(),
            };
            ensure(got == expected, || {
                format!("instance {instance}, {}: +inf blocks {got:?}, expected {expected:?}", rho.kind().name())
            })?;
        }
    }
    Ok(format!("{compared} finite blocks agree (max diff {worst:.2e}), {infinite} +inf blocks match; admissibility flags exact"))
}

/// A target outside the hull of `family` on every block.
fn outside_target(rng: &mut rand_chacha::ChaCha8Rng, f: &SubAlgebra, family: &[Position]) -> Position {
    let d = family[0].dim();
    let mut x = Position::zeros(f.space(), d);
    for b in 0..f.num_blocks() {
        let probs = f.cond_probs(b);
        let w: Vec<f64> = probs.iter().flat_map(|&p| std::iter::repeat_n(p, d)).collect();
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).zip(&w).map(|((a, b), w)| a * b * w).sum::<f64>();
        let n = w.len();
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let h = family.iter().map(|g| dot(&g.block_vector(f, b), &u)).fold(f64::NEG_INFINITY, f64::max);
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let delta = rng.gen_range(0.1..1.0);
        let shift = (h - dot(&y, &u) + delta) / dot(&u, &u);
        let v: Vec<f64> = y.iter().zip(&u).map(|(y, u)| y + shift * u).collect();
        x.set_block_vector(f, b, &v);
    }
    x
}

// 4. Mazur approximation and separation.
fn mazur() -> Outcome {
    let mut rng = common::rng(4);
    let mut max_inside = 0.0f64;
    let mut min_bound = f64::INFINITY;
    for trial in 0..200 {
        let d = rng.gen_range(1..=3);
        let f = common::space(&mut rng, 2..=8, 4);
        let m = rng.gen_range(1..=5);
        let family: Vec<Position> = (0..m).map(|_| common::position(&mut rng, f.space(), d, 2.0)).collect();
        let eps = RandVar::constant(f.space(), 1e-8);
        if trial < 100 {
            let x = common::blockwise_combination(&mut rng, &f, &family);
            let r = mazur_project(&family, &x, &f, &eps, 2.0, ProjectionMethod::ActiveSet).map_err(|e| e.to_string())?;
            let dist = r.distance.values().iter().fold(0.0f64, |a, &b| a.max(b));
            ensure(dist <= 1e-8 && r.certified(), || format!("inside target {trial}: distance {dist:e}"))?;
            max_inside = max_inside.max(dist);
        } else {
            let x = outside_target(&mut rng, &f, &family);
            let r = mazur_project(&family, &x, &f, &eps, 2.0, ProjectionMethod::ActiveSet).map_err(|e| e.to_string())?;
            ensure(r.no_approximant.len() == f.num_blocks(), || {
                format!("outside target {trial}: {} of {} blocks flagged", r.no_approximant.len(), f.num_blocks())
            })?;
            for na in &r.no_approximant {
                ensure(na.certified_lower_bound > 0.0, || format!("outside target {trial}: bound {}", na.certified_lower_bound))?;
                min_bound = min_bound.min(na.certified_lower_bound);
            }
            let k = GeneratedSet::cc_hull(family.clone(), &f).map_err(|e| e.to_string())?;
            let cert = separate(&k, &x).map_err(|e| format!("outside target {trial}: {e}"))?;
            ensure(cert.verify(&k, &x).map_err(|e| e.to_string())?, || format!("outside target {trial}: certificate fails re-check"))?;
        }
    }
    Ok(format!(
        "100 inside (max distance {max_inside:.1e}), 100 outside (min certified bound {min_bound:.3}), all separated"
    ))
}

// 5. Gauge sublevel set against hull membership.
fn gauge_closure() -> Outcome {
    let mut rng = common::rng(5);
    let mut counts = [0usize; 2];
    for set in 0..50 {
        let d = rng.gen_range(1..=2);
        let f = common::space(&mut rng, 2..=5, 3);
        let s = f.space().clone();
        let mut gens = Vec::new();
        for a in 0..s.len() {
            for i in 0..d {
                let r = rng.gen_range(0.3..1.0);
                for sign in [1.0, -1.0] {
                    let mut g = Position::zeros(&s, d);
                    g.set(a, i, sign * r);
                    gens.push(g);
                }
            }
        }
        for _ in 0..rng.gen_range(1..=4) {
            gens.push(common::position(&mut rng, &s, d, 2.0));
        }
        let k = GeneratedSet::cc_hull(gens, &f).map_err(|e| e.to_string())?;
        for probe in 0..200 {
            let x = common::position(&mut rng, &s, d, 1.5);
            let member = hull_member(&k, &x).map_err(|e| e.to_string())?;
            let p = gauge(&k, &x).map_err(|e| e.to_string())?;
            for b in 0..f.num_blocks() {
                let by_gauge = p.block_value(&f, b) <= 1.0 + 1e-8;
                ensure(member.blocks[b].member == by_gauge, || {
                    format!("set {set}, probe {probe}, block {b}: hull {} vs gauge {}", member.blocks[b].member, p.block_value(&f, b))
                })?;
                counts[usize::from(by_gauge)] += 1;
            }
        }
    }
    Ok(format!("50 sets x 200 probes agree ({} inside, {} outside block checks)", counts[1], counts[0]))
}

// 6. Bipolar against hulls.
fn bipolar() -> Outcome {
    let mut rng = common::rng(6);
    let mut counts = [0usize; 2];
    for instance in 0..30 {
        let d = rng.gen_range(1..=2);
        let f = common::space(&mut rng, 1..=4, 2);
        let s = f.space().clone();
        let m = rng.gen_range(1..=4);
        let gens: Vec<Position> = (0..m).map(|_| common::position(&mut rng, &s, d, 2.0)).collect();
        let dset = GeneratedSet::cc_hull(gens.clone(), &f).map_err(|e| e.to_string())?;
        let with_origin = dset.with_origin();
        let balanced = GeneratedSet::new(gens.clone(), ClosureFlags::CC_CONVEX.balanced(), &f).map_err(|e| e.to_string())?;
        let mut pool = gens.clone();
        pool.push(Position::zeros(&s, d));
        pool.extend(gens.iter().map(|g| g.scale(-1.0)));
        for probe in 0..200 {
            let x = if probe % 2 == 0 {
                common::position(&mut rng, &s, d, 2.0)
            } else {
                common::blockwise_combination(&mut rng, &f, &pool).scale(rng.gen_range(0.0..1.3))
            };
            for (one_sided, hull) in [(true, &with_origin), (false, &balanced)] {
                let bip = bipolar_member(&dset, &x, one_sided).map_err(|e| e.to_string())?;
                let mem = hull_member(hull, &x).map_err(|e| e.to_string())?;
                for b in 0..f.num_blocks() {
                    ensure(bip[b] == mem.blocks[b].member, || {
                        format!("instance {instance}, probe {probe}, block {b}, one_sided {one_sided}: bipolar {} vs hull {}", bip[b], mem.blocks[b].member)
                    })?;
                    counts[usize::from(bip[b])] += 1;
                }
            }
        }
    }
    // D = {1} on one atom: one-sided gives [0, 1], absolute gives [-1, 1].
    let s = ProbSpace::new([("w", 1.0)]).unwrap();
    let f = SubAlgebra::trivial(&s);
    let dset = GeneratedSet::cc_hull(vec![Position::constant(&s, &[1.0])], &f).unwrap();
    let grid: Vec<f64> = (-6..=6).map(|k| k as f64 * 0.25).collect();
    for &v in &grid {
        let x = Position::constant(&s, &[v]);
        let one = bipolar_member(&dset, &x, true).unwrap()[0];
        let abs = bipolar_member(&dset, &x, false).unwrap()[0];
        ensure(one == (0.0..=1.0).contains(&v), || format!("D={{1}}: one-sided at {v} gives {one}"))?;
        ensure(abs == (-1.0..=1.0).contains(&v), || format!("D={{1}}: absolute at {v} gives {abs}"))?;
    }
    Ok(format!(
        "30 instances x 200 probes agree ({} member, {} non-member block checks); D={{1}} gives [0,1] vs [-1,1]",
        counts[1], counts[0]
    ))
}

// 7. Fatou property along bounded convergent sequences.
fn fatou() -> Outcome {
    let mut rng = common::rng(7);
    let mut multi_bucket = 0;
    for k in 0..100 {
        let d = rng.gen_range(1..=3);
        let f = common::space(&mut rng, 2..=10, 4);
        let cone = common::cone(&mut rng, d);
        let rho = common::builtins(&mut rng, &f, &cone).swap_remove(k % 3);
        let limit = common::position(&mut rng, f.space(), d, 2.0);
        let r: f64 = rng.gen_range(0.3..0.7);
        let sequence: Vec<Position> = (1..=30)
            .map(|n| {
                let noise = common::position(&mut rng, f.space(), d, 1.0);
                limit.add(&noise.scale(r.powi(n))).unwrap()
            })
            .collect();
        let per_block: Vec<f64> = (0..f.num_blocks())
            .map(|b| {
                let top = sequence
                    .iter()
                    .chain([&limit])
                    .flat_map(|x| x.block_vector(&f, b))
                    .fold(0.0f64, |m, v| m.max(v.abs()));
                top + rng.gen_range(0.0..3.0)
            })
            .collect();
        let opts = FatouOptions {
            bound: Some(RandVar::from_blocks(&f, &per_block).unwrap()),
            ..FatouOptions::default()
        };
        let report = fatou_check(&rho, &sequence, &limit, &opts).map_err(|e| format!("sequence {k}: {e}"))?;
        ensure(report.passed(), || format!("sequence {k}: margin {:?}", report.margin.values()))?;
        if report.buckets.len() > 1 {
            multi_bucket += 1;
        }
    }
    ensure(multi_bucket >= 20, || format!("only {multi_bucket} sequences had a non-constant bound partition"))?;
    Ok(format!("100 sequences pass; {multi_bucket} with bounds spanning several {{k-1 <= Y < k}} pieces"))
}

/// `sup { |E[x·z | F]| : |||x|F|||_p <= 1 }` on one block, without the
/// conjugate-norm formula: vertex enumeration for `p ∈ {1, ∞}`, compass
/// search over directions otherwise.
fn dual_norm_oracle(z: &[f64], w: &[f64], p: f64) -> f64 {
    let n = z.len();
    let pairing = |x: &[f64]| x.iter().zip(z).zip(w).map(|((x, z), w)| x * z * w).sum::<f64>();
    if p == 1.0 {
        // Vertices ±e_k / w_k of the weighted l1 ball.
        return (0..n).map(|k| (z[k] * w[k] / w[k]).abs()).fold(0.0, f64::max);
    }
    if p.is_infinite() {
        let mut best = 0.0f64;
        for mask in 0..(1u32 << n) {
            let x: Vec<f64> = (0..n).map(|k| if mask & (1 << k) != 0 { 1.0 } else { -1.0 }).collect();
            best = best.max(pairing(&x).abs());
        }
        return best;
    }
    let norm = |x: &[f64]| x.iter().zip(w).map(|(x, w)| w * x.abs().powf(p)).sum::<f64>().powf(1.0 / p);
    let score = |x: &[f64]| {
        let nx = norm(x);
        if nx == 0.0 {
            0.0
        } else {
            pairing(x) / nx
        }
    };
    if z.iter().all(|&v| v == 0.0) {
        return 0.0;
    }
    let mut x = z.to_vec();
    let mut best = score(&x);
    let mut step = 0.5 * z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    while step > 1e-12 {
        let mut improved = false;
        for k in 0..n {
            for sign in [1.0, -1.0] {
                let mut y = x.clone();
                y[k] += sign * step;
                let s = score(&y);
                if s > best {
                    best = s;
                    x = y;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

// 8. Conditional norm calculus.
fn norm_calculus() -> Outcome {
    let mut rng = common::rng(8);
    let exponents = [1.0, 1.5, 2.0, 3.0, 4.0, f64::INFINITY];
    let mut worst_dual = 0.0f64;
    for trial in 0..500 {
        let d = rng.gen_range(1..=2);
        let f = common::space(&mut rng, 1..=4, 2);
        let s = f.space().clone();
        let x = common::position(&mut rng, &s, d, 3.0);
        let z = DualElement::new(common::position(&mut rng, &s, d, 3.0));
        let p = exponents[rng.gen_range(0..exponents.len())];
        let p2 = exponents[rng.gen_range(0..exponents.len())];
        let (lo, hi) = if p <= p2 { (p, p2) } else { (p2, p) };
        let err = |e: condrisk::Error| e.to_string();

        for i in 0..d {
            let a = cond_norm(&x.coord(i), &f, lo).map_err(err)?;
            let b = cond_norm(&x.coord(i), &f, hi).map_err(err)?;
            for atom in 0..s.len() {
                ensure(a.get(atom) <= b.get(atom) * (1.0 + 1e-12) + 1e-15, || {
                    format!("trial {trial}: ‖x|F‖_{lo} = {} > ‖x|F‖_{hi} = {}", a.get(atom), b.get(atom))
                })?;
            }
        }

        let y = common::per_block(&mut rng, &f, -3.0, 3.0);
        let scaled = portfolio_norm(&x.mul_rv(&y).map_err(err)?, &f, p).map_err(err)?;
        let base = portfolio_norm(&x, &f, p).map_err(err)?;
        for atom in 0..s.len() {
            let expected = y.get(atom).abs() * base.get(atom);
            ensure((scaled.get(atom) - expected).abs() <= 1e-12 * (1.0 + expected), || {
                format!("trial {trial}: homogeneity {} vs {expected}", scaled.get(atom))
            })?;
        }

        let q = condrisk::lpmod::conjugate_exponent(p).map_err(err)?;
        let lhs = pair(&x, &z, &f).map_err(err)?;
        let xn = portfolio_norm(&x, &f, p).map_err(err)?;
        let zn = portfolio_norm(z.position(), &f, q).map_err(err)?;
        for atom in 0..s.len() {
            ensure(lhs.get(atom).abs() <= xn.get(atom) * zn.get(atom) * (1.0 + 1e-12) + 1e-12, || {
                format!("trial {trial}: Hölder |{}| > {} * {}", lhs.get(atom), xn.get(atom), zn.get(atom))
            })?;
        }

        let dn = dual_norm(&z, &f, p).map_err(err)?;
        for b in 0..f.num_blocks() {
            let w: Vec<f64> = f.cond_probs(b).into_iter().flat_map(|p| std::iter::repeat_n(p, d)).collect();
            let oracle = dual_norm_oracle(&z.position().block_vector(&f, b), &w, p);
            let got = dn.block_value(&f, b);
            ensure((got - oracle).abs() <= 1e-6, || format!("trial {trial}, p = {p}: dual norm {got} vs sup {oracle}"))?;
            worst_dual = worst_dual.max((got - oracle).abs());
        }
    }
    Ok(format!("500 trials: monotonicity, homogeneity, Hölder hold; dual norm vs sup max diff {worst_dual:.1e}"))
}

fn cli(args: &[&str]) -> (i32, String) {
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/two_atom.json");
    let out = Command::new(env!("CARGO_BIN_EXE_condrisk"))
        .arg("--scenario")
        .arg(fixture)
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8"))
}

// 9. Documented CLI invocations.
fn cli_examples() -> Outcome {
    let cases: [(&[&str], i32); 3] = [
        (&["eval", "entropic", "X1"], 0),
        (&["dual-verify", "entropic", "X1", "--tol", "1e-6"], 0),
        (&["eval", "entropic", "missing_position"], 1),
    ];
    let mut outputs = Vec::new();
    for (args, code) in cases {
        let first = cli(args);
        let second = cli(args);
        ensure(first == second, || format!("`{}` is not byte-deterministic", args.join(" ")))?;
        ensure(first.0 == code, || format!("`{}` exited {} (expected {code})", args.join(" "), first.0))?;
        outputs.push(serde_json::from_str::<Value>(&first.1).map_err(|e| e.to_string())?);
    }
    let value = outputs[0]["blocks"][0]["value"].as_f64().ok_or("eval report has no value")?;
    ensure((value + 0.37989).abs() < 1e-5, || format!("eval value {value}"))?;
    let gap = outputs[1]["blocks"][0]["gap"].as_f64().ok_or("dual-verify report has no gap")?;
    ensure(gap.abs() <= 1e-6, || format!("dual-verify gap {gap}"))?;
    let err = &outputs[2]["error"];
    ensure(
        err["kind"] == "SchemaError" && err["pointer"].as_str().is_some_and(|p| p.contains("missing_position")),
        || format!("missing position error: {err}"),
    )?;
    Ok(format!("eval = {value:.5}, gap = {gap:e}, missing position -> SchemaError; reruns identical"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("axiom suite", axiom_suite),
        ("representation theorem", representation),
        ("penalty consistency", penalty_consistency),
        ("mazur approximation", mazur),
        ("gauge / closure", gauge_closure),
        ("bipolar", bipolar),
        ("fatou", fatou),
        ("conditional-norm calculus", norm_calculus),
        ("cli", cli_examples),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({detail}; {elapsed:.2?})", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({why}; {elapsed:.2?})", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
