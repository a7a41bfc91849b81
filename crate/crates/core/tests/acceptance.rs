//! End-to-end acceptance suite. Runs without the libtest harness so that each
//! criterion prints exactly one PASS or FAIL line.

mod common;

use std::fs;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use adahaar::embedding::{
    chain_to_intervals, graph_frame_bounds, prune_redundant, restrict_system,
    signal_values_to_function, PruneScope,
};
use adahaar::framelets::{build_matrix_a, build_system, FrameletSystem, PwcFunction};
use adahaar::graphs::{coarse_grain, Clustering, Graph};
use adahaar::hierarchy::{
    make_dyadic_partition, ratio, rational_to_f64, HierarchicalPartition, Interval,
    PartitionBuilder, Rational,
};
use common::*;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:.2?}, limit {limit:.0?}")
    })
}

fn matrix_identity() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let m = r.gen_range(2..=20);
        let raw: Vec<f64> = (0..m).map(|_| r.gen_range(1e-3..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let b: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let a = build_matrix_a(&b).map_err(|e| e.to_string())?;
        let err = (a.transpose() * &a - DMatrix::<f64>::identity(m, m))
            .abs()
            .max();
        worst = worst.max(err);
    }
    let elapsed = start.elapsed();
    ensure(worst <= 1e-12, || format!("max |AᵀA - I| = {worst:e}"))?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "1000 vectors, max |AᵀA - I| = {worst:.1e}, {elapsed:.2?}"
    ))
}

/// Leaf value of the generator on each of its two children, from exact
/// rationals: `+sqrt(b2/|B1|)` and `-sqrt(b1/|B2|)`.
fn generator_values_squared(
    p: &HierarchicalPartition,
    parent: adahaar::hierarchy::BlockId,
) -> (Rational, Rational) {
    let kids = p.children(parent);
    let whole = p.block(parent).measure();
    let m1 = p.block(kids[0]).measure();
    let m2 = p.block(kids[1]).measure();
    (m2 / whole / m1, m1 / whole / m2)
}

fn undirected_example() -> Outcome {
    let chain = load_chain("example1_chain_x.json");
    let e = chain_to_intervals(&chain).map_err(|e| e.to_string())?;
    let ends = [(0, 1), (1, 6), (1, 4), (7, 12), (3, 4), (11, 12), (1, 1)];
    for v in 0..6 {
        let want = Interval::from_ratios(ends[v], ends[v + 1]).unwrap();
        ensure(e.interval_of(3, v) == &want, || {
            format!("vertex {v}: {}", e.interval_of(3, v))
        })?;
    }
    let p = Arc::new(e.into_partition());
    let sys = build_system(p.clone(), 3).map_err(|e| e.to_string())?;
    ensure(sys.len() == 7, || format!("{} functions", sys.len()))?;

    let s3 = 3f64.sqrt();
    let mut psi0 = PwcFunction::indicator(p.clone(), p.level(1)[0]).scaled(3.0 / s3);
    psi0.add_scaled(-1.0 / s3, &PwcFunction::indicator(p.clone(), p.level(1)[1]))
        .unwrap();
    let d0 = sys.atoms()[0].function().distance(&psi0).unwrap();
    ensure(d0 <= 1e-12, || format!("psi0 off by {d0:e}"))?;

    let parent = p.level(1)[1];
    let psi1 = sys
        .atoms()
        .iter()
        .find(|a| a.parent() == parent)
        .ok_or("no atom below [1/4,1]")?;
    let (v1, v2) = generator_values_squared(&p, parent);
    let kids = p.children(parent);
    let on1 = psi1.function().value(p.leaves_below(kids[0])[0]);
    let on2 = psi1.function().value(p.leaves_below(kids[1])[0]);
    let d1 = (on1 - rational_to_f64(&v1).sqrt())
        .abs()
        .max((on2 + rational_to_f64(&v2).sqrt()).abs());
    ensure(d1 <= 1e-12, || {
        format!("psi1 off the rational oracle by {d1:e}")
    })?;
    // the closed form (χ2 - 8χ3)/sqrt 6 has squares 1/6 and 64/6
    let agrees = v1 == ratio(1, 6) && v2 == ratio(64, 6);

    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let f =
            PwcFunction::from_dense(p.clone(), &random_values(&mut r, p.leaves().len())).unwrap();
        let c = sys.analyze(&f).unwrap();
        worst = worst.max((c.energy() - f.norm_squared()).abs() / f.norm_squared());
    }
    ensure(worst <= 1e-10, || format!("Parseval error {worst:e}"))?;
    Ok(format!(
        "intervals exact, 7 functions, psi0 within {d0:.1e}, psi1 oracle within {d1:.1e} (closed form {}), Parseval {worst:.1e}",
        if agrees { "agrees" } else { "differs" }
    ))
}

fn digraph_example() -> Outcome {
    let start = Instant::now();
    let (gx, gy) = load_digraph().symmetrize();
    for i in 0..6 {
        for j in 0..6 {
            ensure(gx.weight(i, j) == EXAMPLE1_W[i][j], || {
                format!("W^x({i},{j}) = {}", gx.weight(i, j))
            })?;
            ensure(gy.weight(i, j) == EXAMPLE2_WY[i][j], || {
                format!("W^y({i},{j}) = {}", gy.weight(i, j))
            })?;
        }
    }
    let cy = load_chain("example2_chain_y.json");
    let ey = chain_to_intervals(&cy).map_err(|e| e.to_string())?;
    let ends_y = [
        ((0, 1), (2, 9)),
        ((2, 9), (5, 18)),
        ((1, 2), (13, 18)),
        ((5, 18), (1, 2)),
        ((13, 18), (5, 6)),
        ((5, 6), (1, 1)),
    ];
    for (v, &(lo, hi)) in ends_y.iter().enumerate() {
        let want = Interval::from_ratios(lo, hi).unwrap();
        ensure(ey.interval_of(3, v) == &want, || {
            format!("y interval of vertex {v}: {}", ey.interval_of(3, v))
        })?;
    }
    let e = example2_embedding();
    let ends_x = [(0, 1), (1, 6), (1, 4), (7, 12), (3, 4), (11, 12), (1, 1)];
    for (v, (_, b)) in e.vertex_blocks.iter().enumerate() {
        let x = Interval::from_ratios(ends_x[v], ends_x[v + 1]).unwrap();
        let y = Interval::from_ratios(ends_y[v].0, ends_y[v].1).unwrap();
        ensure(e.partition.block(b).sides() == [x, y], || {
            format!("vertex block {v}")
        })?;
    }
    let full = build_system(e.partition.clone(), 3).map_err(|e| e.to_string())?;
    let restricted = restrict_system(&full, &e.vertex_blocks);
    let pruned = prune_redundant(&restricted, &e.vertex_blocks, PruneScope::FinestLevel)
        .map_err(|e| e.to_string())?;
    let levels = full.counts_by_level();
    ensure(levels == [6, 8, 80] && full.len() == 95, || {
        format!("full {levels:?}, {}", full.len())
    })?;
    ensure(restricted.len() == 39, || {
        format!("restricted {}", restricted.len())
    })?;
    ensure(pruned.system.len() == 20, || {
        format!("pruned {}", pruned.system.len())
    })?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "W^x, W^y, intervals and blocks exact; counts 6+8+80 (95), 39, 20; {elapsed:.2?}"
    ))
}

fn relative_errors(sys: &FrameletSystem, signals: &[PwcFunction]) -> (f64, f64) {
    let mut parseval: f64 = 0.0;
    let mut recon: f64 = 0.0;
    for f in signals {
        let n2 = f.norm_squared();
        let c = sys.analyze(f).unwrap();
        parseval = parseval.max((c.energy() - n2).abs() / n2);
        recon = recon.max(sys.synthesize(&c).unwrap().distance(f).unwrap() / n2.sqrt());
    }
    (parseval, recon)
}

fn leaf_signals(p: &Arc<HierarchicalPartition>, r: &mut ChaCha8Rng, n: usize) -> Vec<PwcFunction> {
    (0..n)
        .map(|_| PwcFunction::from_dense(p.clone(), &random_values(r, p.leaves().len())).unwrap())
        .collect()
}

fn tightness() -> Outcome {
    let start = Instant::now();
    let mut r = rng(4);
    let mut parts = Vec::new();
    for (name, d, j) in [("dyadic(1,4)", 1, 4), ("dyadic(2,3)", 2, 3)] {
        let p = Arc::new(make_dyadic_partition(d, j).unwrap());
        let sys = build_system(p.clone(), j).unwrap();
        parts.push((name, relative_errors(&sys, &leaf_signals(&p, &mut r, 100))));
    }
    let e = example2_embedding();
    let full = build_system(e.partition.clone(), 3).unwrap();
    parts.push((
        "digraph tensor",
        relative_errors(&full, &leaf_signals(&e.partition, &mut r, 100)),
    ));
    let restricted = restrict_system(&full, &e.vertex_blocks);
    let graph_signals: Vec<PwcFunction> = (0..100)
        .map(|_| {
            signal_values_to_function(&random_values(&mut r, 6), &e.vertex_blocks, &e.partition)
                .unwrap()
        })
        .collect();
    parts.push((
        "digraph restricted",
        relative_errors(&restricted, &graph_signals),
    ));
    let elapsed = start.elapsed();
    for (name, (p, q)) in &parts {
        ensure(*p <= 1e-10 && *q <= 1e-10, || {
            format!("{name}: Parseval {p:e}, reconstruction {q:e}")
        })?;
    }
    within(elapsed, Duration::from_secs(10))?;
    let worst = parts
        .iter()
        .map(|(_, (p, q))| p.max(*q))
        .fold(0.0, f64::max);
    Ok(format!(
        "4 settings x 100 signals, worst relative error {worst:.1e}, {elapsed:.2?}"
    ))
}

/// 1-D partition where every block splits in two at a random rational point.
fn binary_partition(r: &mut ChaCha8Rng, depth: usize) -> HierarchicalPartition {
    let mut builder = PartitionBuilder::new(vec![Interval::unit()]);
    let mut current = vec![(adahaar::hierarchy::BlockId(0), Interval::unit())];
    for _ in 0..depth {
        builder.start_level();
        let mut next = Vec::new();
        for (id, iv) in &current {
            let t = ratio(r.gen_range(1..64), 64);
            let cut = iv.lo() + (iv.hi() - iv.lo()) * t;
            for child in [
                Interval::new(iv.lo().clone(), cut.clone()).unwrap(),
                Interval::new(cut.clone(), iv.hi().clone()).unwrap(),
            ] {
                next.push((builder.add(*id, vec![child.clone()]), child));
            }
        }
        current = next;
    }
    builder.build().unwrap()
}

fn orthonormal_basis() -> Outcome {
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let depth = r.gen_range(1..=5);
        let p = Arc::new(binary_partition(&mut r, depth));
        let sys = build_system(p.clone(), depth).unwrap();
        ensure(sys.len() == p.leaves().len(), || {
            format!("{} functions for {} leaves", sys.len(), p.leaves().len())
        })?;
        let g = sys.gram_matrix();
        worst = worst.max(
            (g.clone() - DMatrix::<f64>::identity(g.nrows(), g.ncols()))
                .abs()
                .max(),
        );
    }
    ensure(worst <= 1e-12, || format!("max |G - I| = {worst:e}"))?;
    Ok(format!("50 partitions, max |G - I| = {worst:.1e}"))
}

fn structural_invariants() -> Outcome {
    let mut r = rng(6);
    let mut systems = vec![
        build_system(Arc::new(make_dyadic_partition(2, 3).unwrap()), 3).unwrap(),
        build_system(example1_partition(), 3).unwrap(),
        build_system(example2_embedding().partition, 3).unwrap(),
    ];
    for _ in 0..5 {
        let p = Arc::new(random_partition(&mut r, 2, 3, 3));
        systems.push(build_system(p, 3).unwrap());
    }
    let (mut integral, mut cross, mut atoms): (f64, f64, usize) = (0.0, 0.0, 0);
    for sys in &systems {
        let p = sys.partition();
        for a in sys.atoms() {
            atoms += 1;
            integral = integral.max(a.function().integral().abs());
            let (c1, c2) = a.support_blocks(p);
            let siblings = p.children(a.parent());
            ensure(
                siblings.contains(&c1) && siblings.contains(&c2) && c1 != c2,
                || format!("{} support blocks", a.key()),
            )?;
            let allowed: Vec<_> = p
                .leaves_below(c1)
                .iter()
                .chain(p.leaves_below(c2))
                .copied()
                .collect();
            ensure(a.function().support().all(|l| allowed.contains(&l)), || {
                format!("{} leaks", a.key())
            })?;
        }
        let list = sys.atoms();
        for (i, a) in list.iter().enumerate() {
            for b in &list[i + 1..] {
                if a.level() != b.level() {
                    cross = cross.max(a.function().inner(b.function()).unwrap().abs());
                }
            }
        }
    }
    ensure(integral <= 1e-12, || format!("integral {integral:e}"))?;
    ensure(cross <= 1e-12, || {
        format!("cross-level inner product {cross:e}")
    })?;
    Ok(format!(
        "{atoms} atoms in {} systems, max |∫ψ| {integral:.1e}, max cross-level {cross:.1e}",
        systems.len()
    ))
}

fn coarse_graining() -> Outcome {
    let mut r = rng(7);
    for trial in 0..100 {
        let n = r.gen_range(1..=30);
        let mut w = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                if r.gen_bool(0.3) {
                    let x = r.gen_range(1..10) as f64;
                    w[(i, j)] = x;
                    w[(j, i)] = x;
                }
            }
        }
        let g = Graph::new((0..n).map(|i| format!("v{i}")).collect(), w.clone()).unwrap();
        let k = r.gen_range(1..=n);
        let mut assignment: Vec<usize> = (0..n)
            .map(|v| if v < k { v } else { r.gen_range(0..k) })
            .collect();
        for i in (1..n).rev() {
            assignment.swap(i, r.gen_range(0..=i));
        }
        let c = Clustering::from_assignment(assignment.clone()).unwrap();
        let cg = coarse_grain(&g, &c).map_err(|e| e.to_string())?;
        for a in 0..k {
            for b in 0..k {
                let mut brute = 0.0;
                for u in 0..n {
                    for v in 0..n {
                        if assignment[u] == a && assignment[v] == b {
                            brute += w[(u, v)];
                        }
                    }
                }
                ensure(cg.weight(a, b) == brute, || {
                    format!("trial {trial}: W({a},{b})")
                })?;
            }
        }
        ensure(cg.weights().sum() == w.sum(), || {
            format!("trial {trial}: total weight")
        })?;
    }
    Ok("100 random graphs match the double sum exactly, totals conserved".into())
}

fn pruned_spanning() -> Outcome {
    let e = example2_embedding();
    let full = build_system(e.partition.clone(), 3).unwrap();
    let restricted = restrict_system(&full, &e.vertex_blocks);
    let pruned = prune_redundant(&restricted, &e.vertex_blocks, PruneScope::FinestLevel)
        .map_err(|e| e.to_string())?;
    ensure(pruned.system.len() == 20, || {
        format!("{} functions", pruned.system.len())
    })?;
    let (bounds, rank) =
        graph_frame_bounds(&pruned.system, &e.vertex_blocks).map_err(|e| e.to_string())?;
    ensure(rank == 6, || format!("rank {rank}"))?;
    let funcs: Vec<&PwcFunction> = pruned.system.functions().collect();
    let basis = e.vertex_blocks.space_basis(&e.partition);
    let m = DMatrix::from_fn(funcs.len(), 6, |i, k| funcs[i].inner(&basis[k]).unwrap());
    let svd = m.clone().svd(true, true);
    let mut r = rng(8);
    let mut residual: f64 = 0.0;
    for _ in 0..100 {
        let x = DVector::from_vec(random_values(&mut r, 6));
        let mut f = PwcFunction::zero(e.partition.clone());
        for k in 0..6 {
            f.add_scaled(x[k], &basis[k]).unwrap();
        }
        let c = DVector::from_iterator(funcs.len(), funcs.iter().map(|h| h.inner(&f).unwrap()));
        let solved = svd.solve(&c, 1e-12).map_err(|e| e.to_string())?;
        residual = residual.max((solved - x).norm());
    }
    ensure(residual <= 1e-9, || format!("residual {residual:e}"))?;
    Ok(format!(
        "rank 6, least-squares residual {residual:.1e}, frame bounds [{:.6}, {:.6}]",
        bounds.lower, bounds.upper
    ))
}

fn run_cli(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_adahaar"))
        .args(args)
        .env("ADAHAAR_SEED", "0")
        .output()
        .expect("binary runs")
        .status
        .code()
        .expect("exit code")
}

fn pipeline(dir: &Path) -> Result<(), String> {
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let f = |name: &str| s(&fixture(name));
    let d = |name: &str| s(&dir.join(name));
    let steps: Vec<Vec<String>> = vec![
        vec![
            "symmetrize".into(),
            f("example2_digraph.json"),
            "--out".into(),
            s(dir),
        ],
        vec![
            "chain".into(),
            d("gx.json"),
            "--clusters".into(),
            f("gx_clusters.json"),
            "--out".into(),
            d("cx.json"),
        ],
        vec![
            "chain".into(),
            d("gy.json"),
            "--clusters".into(),
            f("gy_clusters.json"),
            "--out".into(),
            d("cy.json"),
        ],
        vec![
            "build".into(),
            "--chain-x".into(),
            d("cx.json"),
            "--chain-y".into(),
            d("cy.json"),
            "--out".into(),
            d("build"),
        ],
        vec![
            "verify".into(),
            d("build/system_restricted.json"),
            "--out".into(),
            d("verify.json"),
        ],
    ];
    for step in &steps {
        let args: Vec<&str> = step.iter().map(String::as_str).collect();
        let code = run_cli(&args);
        ensure(code == 0, || format!("{} exited {code}", step[0]))?;
    }
    fs::write(dir.join("signal.csv"), "a,1\nb,2\nc,3\nd,4\ne,5\nf,6\n").unwrap();
    let code = run_cli(&[
        "analyze",
        &d("signal.csv"),
        "--system",
        &d("build/system_pruned.json"),
        "--out",
        &d("coeffs.csv"),
    ]);
    ensure(code == 0, || format!("analyze exited {code}"))
}

fn files_under(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            out.extend(files_under(&path));
        } else {
            out.push(path);
        }
    }
    out.sort();
    out
}

fn cli_determinism() -> Outcome {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    pipeline(a.path())?;
    pipeline(b.path())?;
    let fa = files_under(a.path());
    let fb = files_under(b.path());
    ensure(fa.len() == fb.len(), || "different file sets".into())?;
    for (x, y) in fa.iter().zip(&fb) {
        ensure(x.strip_prefix(a.path()) == y.strip_prefix(b.path()), || {
            "different file names".into()
        })?;
        ensure(fs::read(x).unwrap() == fs::read(y).unwrap(), || {
            format!("{} differs", x.display())
        })?;
    }

    let dir = a.path();
    let s = |p: &Path| p.to_str().unwrap().to_string();
    ensure(
        run_cli(&[
            "build",
            "--chain-x",
            &s(&fixture("example1_chain_x.json")),
            "--out",
            &s(&dir.join("one_d")),
        ]) == 0,
        || "1-D build".into(),
    )?;
    ensure(
        run_cli(&[
            "build",
            "--dyadic",
            "2",
            "--depth",
            "3",
            "--out",
            &s(&dir.join("dyadic")),
        ]) == 0,
        || "dyadic build".into(),
    )?;
    let golden = [
        dir.join("build/system_full.json"),
        dir.join("build/system_restricted.json"),
        dir.join("one_d/system_full.json"),
        dir.join("one_d/system_restricted.json"),
        dir.join("dyadic/system_full.json"),
    ];
    for path in &golden {
        let code = run_cli(&["verify", &s(path)]);
        ensure(code == 0, || {
            format!("verify {} exited {code}", path.display())
        })?;
    }
    let mut file: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("build/system_full.json")).unwrap())
            .unwrap();
    file["atoms"].as_array_mut().unwrap().remove(0);
    fs::write(
        dir.join("deleted.json"),
        serde_json::to_string(&file).unwrap(),
    )
    .unwrap();
    let code = run_cli(&["verify", &s(&dir.join("deleted.json"))]);
    ensure(code == 1, || format!("verify after deletion exited {code}"))?;
    Ok(format!(
        "{} pipeline files byte-identical; verify 0 on {} golden systems, 1 after deletion",
        fa.len(),
        golden.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("matrix identity", matrix_identity),
        ("undirected example", undirected_example),
        ("digraph example", digraph_example),
        ("tightness", tightness),
        ("orthonormal basis", orthonormal_basis),
        ("structural invariants", structural_invariants),
        ("coarse graining", coarse_graining),
        ("pruned spanning", pruned_spanning),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(run) {
            Ok(Ok(detail)) => println!("PASS {}. {name}: {detail}", i + 1),
            Ok(Err(detail)) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", i + 1);
            }
            Err(_) => {
                failed += 1;
                println!("FAIL {}. {name}: panicked", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
