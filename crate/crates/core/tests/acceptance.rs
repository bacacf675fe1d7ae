//! One pass/fail line per acceptance criterion. Runs as a plain binary so
//! the lines are always printed; exits nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use regfree::bounds::{self, Density, StepKind};
use regfree::construction::{build, explicit_params, LayeredGraph};
use regfree::density::{
    max_density_subgraph, prefix_certificate_3reg_bipartite, prefix_certificate_4reg, Verdict,
};
use regfree::experiment::{self, Check, SweepConfig};
use regfree::fractional::{chi_f_exact, chi_f_lower_bound, mwis};
use regfree::graph::{Graph, GraphFile};
use regfree::hiprec::{Hp, SizeExpr};
use regfree::rational;
use regfree::regular::{find_k_regular, verify_witness, Detection};
use regfree::rng::SplitMix64;
use regfree::subsample::{self, claim_probability_bounds, SubsampleParams};
use regfree::weighting::Weighting;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

const LADDER: [usize; 4] = [256, 64, 16, 4];

fn within(limit_s: u64, start: Instant) -> std::result::Result<(), String> {
    let t = start.elapsed();
    if t > Duration::from_secs(limit_s) {
        Err(format!("took {:.1}s, limit {limit_s}s", t.as_secs_f64()))
    } else {
        Ok(())
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for n in 1..=8 {
        let v = chi_f_exact(&Graph::complete(n))
            .map_err(|e| e.to_string())?
            .value;
        ensure!(v == rational::int(n as i64), "K_{n}: got {v}");
    }
    let mut rng = SplitMix64::new(11);
    let mut bipartite = vec![
        Graph::cube(),
        Graph::path(2),
        Graph::path(7),
        Graph::cycle(6),
        Graph::cycle(8),
    ];
    for _ in 0..20 {
        let (a, b) = (1 + rng.below(4) as usize, 1 + rng.below(4) as usize);
        let mut edges = vec![(0, a)];
        for u in 0..a {
            for v in a..a + b {
                if rng.below(2) == 1 {
                    edges.push((u, v));
                }
            }
        }
        edges.sort();
        edges.dedup();
        bipartite.push(Graph::new(a + b, edges).unwrap());
    }
    for g in &bipartite {
        let v = chi_f_exact(g).map_err(|e| e.to_string())?.value;
        ensure!(
            v == rational::int(2),
            "bipartite graph with {} vertices: got {v}",
            g.vertex_count()
        );
    }
    for (name, g) in [("C5", Graph::cycle(5)), ("Petersen", Graph::petersen())] {
        let v = chi_f_exact(&g).map_err(|e| e.to_string())?.value;
        ensure!(v == rational::ratio(5, 2), "{name}: got {v}");
    }
    let mut rng = SplitMix64::new(1);
    for i in 0..100 {
        let n = 1 + rng.below(9) as usize;
        let g = {
            let q = 1 + rng.below(7);
            common::random_graph(&mut rng, n, q, 8)
        };
        let r = chi_f_exact(&g).map_err(|e| e.to_string())?;
        let oracle = common::brute_chi_f(&g);
        ensure!(
            r.value == oracle,
            "random graph {i}: solver {} vs LP {}",
            r.value,
            oracle
        );
        ensure!(
            r.primal.validate(&g) && r.dual.validate(&g),
            "random graph {i}: invalid witnesses"
        );
    }
    within(60, start)?;
    Ok(format!(
        "K_1..K_8, {} bipartite graphs, C5, Petersen, 100 random graphs vs full LP in {:.2}s",
        bipartite.len(),
        start.elapsed().as_secs_f64()
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = SplitMix64::new(2);
    for i in 0..200 {
        let n = 1 + rng.below(14) as usize;
        let g = {
            let q = 1 + rng.below(7);
            common::random_graph(&mut rng, n, q, 8)
        };
        let w = common::random_weights(&mut rng, n);
        let (s, weight) = mwis(&g, &w);
        let (bs, bw) = common::brute_mwis(&g, &w);
        ensure!(
            g.is_independent(&s),
            "graph {i}: mwis output not independent"
        );
        ensure!(
            weight == bw && s.as_slice() == bs.as_slice(),
            "graph {i}: mwis {weight} vs {bw}"
        );
        let d = max_density_subgraph(&g).map_err(|e| e.to_string())?;
        let oracle = common::brute_max_density(&g);
        ensure!(
            d.density == oracle,
            "graph {i}: density {} vs {}",
            d.density,
            oracle
        );
        let recomputed = rational::ratio(
            g.induced_edge_count(&d.subgraph) as i64,
            d.subgraph.len() as i64,
        );
        ensure!(
            recomputed == d.density,
            "graph {i}: reported set has density {recomputed}"
        );
    }
    within(120, start)?;
    Ok(format!(
        "200 random graphs on <= 14 vertices in {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

fn random_tree(rng: &mut SplitMix64, n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.below(v as u64) as usize, v)).collect();
    Graph::new(n, edges).unwrap()
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let detect = |g: &Graph, k: usize| find_k_regular(g, k, 10_000_000).outcome;
    let mut rng = SplitMix64::new(3);
    let (mut graphs, mut found) = (0, 0);
    while graphs < 200 {
        let n = 1 + rng.below(8) as usize;
        let g = {
            let q = 2 + rng.below(5);
            common::random_graph(&mut rng, n, q, 8)
        };
        if g.edge_count() > 20 {
            continue;
        }
        graphs += 1;
        for k in [3, 4] {
            let expected = common::brute_has_k_regular(&g, k);
            match detect(&g, k) {
                Detection::Found(w) => {
                    ensure!(
                        expected && verify_witness(&g, &w),
                        "graph {graphs}, k={k}: spurious witness"
                    );
                    found += 1;
                }
                Detection::NotFound => ensure!(
                    !expected,
                    "graph {graphs}, k={k}: missed a regular subgraph"
                ),
                Detection::BudgetExceeded => {
                    return Err(format!("graph {graphs}, k={k}: budget exceeded"))
                }
            }
        }
    }
    for (name, g, k) in [
        ("K5", Graph::complete(5), 4),
        ("Petersen", Graph::petersen(), 3),
        ("Q3", Graph::cube(), 3),
    ] {
        ensure!(detect(&g, k).is_found(), "{name}, k={k}: expected Found");
    }
    for n in 1..=30 {
        let t = random_tree(&mut rng, n);
        for k in [3, 4] {
            ensure!(
                detect(&t, k) == Detection::NotFound,
                "tree on {n} vertices, k={k}: expected NotFound"
            );
        }
    }
    for n in 3..=30 {
        ensure!(
            detect(&Graph::cycle(n), 3) == Detection::NotFound,
            "C_{n}: expected NotFound"
        );
    }
    within(120, start)?;
    Ok(format!(
        "200 random graphs ({found} Found among 400 queries), named graphs, trees, cycles in {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

fn ladder(seed: u64) -> LayeredGraph {
    build(&explicit_params(&LADDER, seed).unwrap()).unwrap()
}

fn criterion_4() -> Outcome {
    for seed in 0..100 {
        let lg = ladder(seed);
        let g = lg.graph();
        for i in 0..lg.num_layers() {
            ensure!(
                g.is_independent(&lg.layer(i)),
                "seed {seed}: layer {i} not independent"
            );
        }
        for v in 0..g.vertex_count() {
            let li = lg.layer_of(v);
            for j in li + 1..lg.num_layers() {
                let into_j = g
                    .neighbors(v)
                    .iter()
                    .filter(|&&u| lg.layer_of(u) == j)
                    .count();
                // Later-layer neighbors of v can only come from v's own draw.
                ensure!(
                    into_j == 1,
                    "seed {seed}: vertex {v} has {into_j} neighbors in layer {j}"
                );
            }
        }
        ensure!(
            g.edge_count() == 912,
            "seed {seed}: {} edges",
            g.edge_count()
        );
        ensure!(
            lg.check_construction_invariants().is_ok(),
            "seed {seed}: construction invariants"
        );
        let (d, _) = g.degeneracy();
        ensure!(d <= 3, "seed {seed}: degeneracy {d}");
        ensure!(
            ladder(seed).to_file().to_json() == lg.to_file().to_json(),
            "seed {seed}: rebuild differs"
        );
    }
    Ok("100 seeds of [256,64,16,4]: 912 edges, independent layers, degeneracy <= 3, byte-identical rebuilds".into())
}

fn criterion_5() -> Outcome {
    let t = rational::ratio(11, 10);
    let (mut c4, mut c3, mut excluded) = (0, 0, Vec::new());
    for seed in 0..100 {
        let lg = ladder(seed);
        if prefix_certificate_4reg(&lg, &t).verdict == Verdict::Certified {
            c4 += 1;
            match find_k_regular(lg.graph(), 4, 10_000_000).outcome {
                Detection::Found(_) => {
                    return Err(format!(
                        "seed {seed}: certified yet 4-regular subgraph found"
                    ))
                }
                Detection::BudgetExceeded => excluded.push((seed, 4)),
                Detection::NotFound => {}
            }
        }
        let b = lg.bipartite_variant();
        if prefix_certificate_3reg_bipartite(&b, &t).verdict == Verdict::Certified {
            c3 += 1;
            match find_k_regular(b.graph(), 3, 10_000_000).outcome {
                Detection::Found(_) => {
                    return Err(format!(
                        "seed {seed}: certified yet 3-regular subgraph found"
                    ))
                }
                Detection::BudgetExceeded => excluded.push((seed, 3)),
                Detection::NotFound => {}
            }
        }
    }
    // The chain is also exercised on a ladder where certificates are issued.
    let mut small = 0;
    for seed in 0..100 {
        let lg = build(&explicit_params(&[32, 8, 2], seed).unwrap()).unwrap();
        if prefix_certificate_4reg(&lg, &t).verdict == Verdict::Certified {
            small += 1;
            ensure!(
                !find_k_regular(lg.graph(), 4, 10_000_000).outcome.is_found(),
                "[32,8,2] seed {seed}: certified yet 4-regular subgraph found"
            );
        }
    }
    Ok(format!(
        "0 violations; [256,64,16,4]: {c4}/100 certified (k=4), {c3}/100 certified (k=3, bipartite), excluded for budget: {excluded:?}; [32,8,2]: {small}/100 certified (k=4)"
    ))
}

fn criterion_6() -> Outcome {
    for seed in 0..50 {
        let lg = build(&explicit_params(&[32, 8, 2], seed).unwrap()).unwrap();
        let w = lg.paper_weighting();
        ensure!(
            w.total() == rational::int(3),
            "seed {seed}: total weight {}",
            w.total()
        );
        let lb = chi_f_lower_bound(lg.graph(), &w).map_err(|e| e.to_string())?;
        let exact = chi_f_exact(lg.graph()).map_err(|e| e.to_string())?.value;
        ensure!(
            lb <= exact,
            "seed {seed}: lower bound {lb} above chi_f {exact}"
        );
    }
    Ok("50 seeds of [32,8,2]: total weight 3, lower bound <= chi_f".into())
}

fn criterion_7() -> Outcome {
    let lg = ladder(0);
    let g = lg.graph();
    let (degen, ord) = g.degeneracy();
    let p = rational::ratio(1, 4);
    let params = SubsampleParams::new(p.clone(), degen, 0).map_err(|e| e.to_string())?;
    let w = Weighting::uniform(g.vertex_count());
    let trials = 1000u64;
    let mut counts = vec![0u64; g.vertex_count()];
    let pos = ord.positions();
    for t in 0..trials {
        let r = subsample::harris_subsample(
            g,
            &ord,
            &SubsampleParams {
                seed: t,
                ..params.clone()
            },
            &w,
        );
        // Independent re-verification.
        ensure!(
            r.x.iter().all(|v| r.y.contains(v)),
            "run {t}: X not inside Y"
        );
        for v in r.x.iter() {
            let back: Vec<usize> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&u| pos[u] < pos[v] && r.x.contains(u))
                .collect();
            ensure!(
                back.len() <= degen,
                "run {t}: vertex {v} has {} earlier neighbors in X",
                back.len()
            );
            for (a, &x) in back.iter().enumerate() {
                ensure!(
                    back[a + 1..].iter().all(|&y| !g.has_edge(x, y)),
                    "run {t}: triangle at {v}"
                );
            }
            counts[v] += 1;
        }
    }
    let summary = subsample::run_trials(g, &ord, &params, &w, trials).map_err(|e| e.to_string())?;
    ensure!(
        summary.membership_counts == counts,
        "run_trials disagrees with the individual runs"
    );
    let mut worst = f64::INFINITY;
    for v in 0..g.vertex_count() {
        let (markov, indep) = claim_probability_bounds(g, &ord, &params, v);
        let bound = rational::to_f64(&(&p * (rational::int(1) - markov - indep)));
        let sigma = (0.25 / trials as f64).sqrt();
        let empirical = counts[v] as f64 / trials as f64;
        ensure!(
            empirical >= bound - 3.0 * sigma,
            "vertex {v}: empirical {empirical:.4} below {bound:.4} - 3 sigma"
        );
        worst = worst.min(empirical - bound);
    }
    Ok(format!(
        "1000 runs, every X triangle-free within back-degree {degen}; smallest margin over the bound {worst:.4}"
    ))
}

fn criterion_8() -> Outcome {
    let mut hp = Hp::new(50);
    let text = "e^e^40";
    let n = SizeExpr::parse(text).map_err(|e| e.to_string())?;
    for i in [2, 3] {
        for x in [1, 10, 100] {
            let r = bounds::reg_chain(&n, text, i, x, &mut hp).map_err(|e| e.to_string())?;
            let r = bounds::with_reverification(r, |hp| bounds::reg_chain(&n, text, i, x, hp))
                .map_err(|e| e.to_string())?;
            ensure!(
                r.all_hold && r.endpoints_ordered,
                "i={i}, x={x}: first failure {:?}",
                r.first_failure
            );
            ensure!(
                r.stable_at_double_precision == Some(true),
                "i={i}, x={x}: unstable at 100 digits"
            );
            let ids: Vec<_> = r
                .steps
                .iter()
                .filter(|s| s.kind == StepKind::Identity)
                .collect();
            ensure!(
                !ids.is_empty() && ids.iter().all(|s| s.holds),
                "i={i}, x={x}: identity step"
            );
            for s in ids {
                let mut hp2 = Hp::new(60);
                let (l, rr) = (
                    hp2.decimal(&s.left).unwrap(),
                    hp2.decimal(&s.right).unwrap(),
                );
                ensure!(
                    hp2.approx_eq(&l, &rr, 50),
                    "i={i}, x={x}: {} != {}",
                    s.left,
                    s.right
                );
            }
        }
    }
    let u = bounds::union_bounds(&n, text, &mut hp).map_err(|e| e.to_string())?;
    let geo = &u.steps[0];
    ensure!(
        geo.kind == StepKind::Identity && geo.holds,
        "geometric closure step failed"
    );
    let mut hp2 = Hp::new(60);
    let (l, r) = (
        hp2.decimal(&geo.left).unwrap(),
        hp2.decimal(&geo.right).unwrap(),
    );
    ensure!(
        hp2.approx_eq(&l, &r, 50),
        "geometric closure {} vs {}",
        geo.left,
        geo.right
    );
    ensure!(
        u.all_hold,
        "union bounds: first failure {:?}",
        u.first_failure
    );
    let f =
        bounds::frac_chain(&n, text, 2, &Density::Minimal, &mut hp).map_err(|e| e.to_string())?;
    ensure!(
        f.all_hold,
        "frac chain: first failure {:?}",
        f.first_failure
    );
    Ok("reg chain at e^e^40 for i in {2,3}, x in {1,10,100}; identities to 50 digits; union closure".into())
}

fn criterion_9() -> Outcome {
    let mut count = 0;
    let mut check = |file: GraphFile| -> Result<(), String> {
        let text = file.to_json();
        let back = GraphFile::from_json(&text).map_err(|e| e.to_string())?;
        ensure!(
            back == file && back.to_json() == text,
            "round trip changed a graph"
        );
        count += 1;
        Ok(())
    };
    for seed in 0..100 {
        let lg = ladder(seed);
        check(lg.to_file())?;
        check(lg.bipartite_variant().to_file())?;
        check(
            build(&explicit_params(&[32, 8, 2], seed).unwrap())
                .unwrap()
                .to_file(),
        )?;
    }
    let mut rng = SplitMix64::new(9);
    for _ in 0..200 {
        let n = 1 + rng.below(20) as usize;
        check(
            {
                let q = rng.below(9);
                common::random_graph(&mut rng, n, q, 8)
            }
            .to_file(None),
        )?;
    }
    let cfg = SweepConfig::new(
        vec![32, 8, 2],
        0..20,
        vec![
            Check::Certify4,
            Check::Certify3,
            Check::Detect4,
            Check::Detect3,
            Check::ChifLb,
            Check::ChifExact,
            Check::Degeneracy,
            Check::Subsample,
        ],
    );
    let a = experiment::sweep(&cfg).map_err(|e| e.to_string())?;
    let b = experiment::sweep(&cfg).map_err(|e| e.to_string())?;
    ensure!(
        a.len() == 20 && a.len() == b.len(),
        "sweep produced {} and {} records",
        a.len(),
        b.len()
    );
    for (x, y) in a.iter().zip(&b) {
        ensure!(
            x.deterministic_json() == y.deterministic_json(),
            "seed {}: re-run differs",
            x.seed
        );
    }
    let parsed = experiment::parse_ndjson(&experiment::to_ndjson(&a)).map_err(|e| e.to_string())?;
    let mismatched = experiment::replay(&parsed).map_err(|e| e.to_string())?;
    ensure!(
        mismatched.is_empty(),
        "replay mismatches at seeds {mismatched:?}"
    );
    Ok(format!(
        "{count} graph files round-trip; 20-seed sweep with all checks reproduces byte-exactly"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("chi_f exactness", criterion_1),
        ("MWIS and densest-subgraph oracles", criterion_2),
        ("regular-subgraph detector", criterion_3),
        ("construction invariants", criterion_4),
        ("certificate soundness chain", criterion_5),
        ("paper-weighting lower bound", criterion_6),
        ("subsample invariants", criterion_7),
        ("bounds replay", criterion_8),
        ("round trip and determinism", criterion_9),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|x| x == &id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {id} ({name}): PASS [{secs:.2}s] {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id} ({name}): FAIL [{secs:.2}s] {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
