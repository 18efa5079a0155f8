//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::HashSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::{gf, oracle_is_circuit, subsets};
use gfmatroid::generators::{clique, from_id, named_graph, graphic, projective_geometry, random_matroid, uniform};
use gfmatroid::matroid::{Girth, RepMatroid};
use gfmatroid::pipeline::{find_short_circuit, verify_dichotomy, BasisMode, MinorStatus};
use gfmatroid::setsystem::SetSystem;
use gfmatroid::{FieldElem, GFMatrix};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field_axioms() -> Outcome {
    let mut failures = 0usize;
    let mut checks = 0usize;
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        let f = gf(q);
        let all: Vec<FieldElem> = f.elements().collect();
        for &a in &all {
            if !a.is_zero() {
                checks += 1;
                if f.inv(a).map(|i| f.mul(a, i)) != Ok(FieldElem::ONE) {
                    failures += 1;
                }
            }
            for &b in &all {
                for &c in &all {
                    checks += 3;
                    failures += (f.add(f.add(a, b), c) != f.add(a, f.add(b, c))) as usize;
                    failures += (f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c))) as usize;
                    failures += (f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c))) as usize;
                }
            }
        }
    }
    ensure(failures == 0, || format!("{failures} failures"))?;
    Ok(format!("{checks} checks, 0 failures"))
}

fn duality_suite() -> Outcome {
    let fields = [2u32, 3, 4];
    let mut subsets_checked = 0usize;
    for i in 0..50u64 {
        let q = fields[i as usize % 3];
        let r = 1 + (i as usize / 3) % 5;
        let n = (r + 1 + (i as usize * 7) % 6).min(10);
        let m = random_matroid(r, n, &gf(q), 500 + i).map_err(|e| e.to_string())?;
        let d = m.dual();
        let dd = d.dual();
        ensure(m.rank() + d.rank() == m.len(), || format!("instance {i}: rank sum"))?;
        for s in subsets(m.len()) {
            subsets_checked += 1;
            ensure(dd.rank_of_indices(&s) == m.rank_of_indices(&s), || {
                format!("instance {i}: M** rank differs on {s:?}")
            })?;
        }
    }
    Ok(format!("50 instances, {subsets_checked} subsets"))
}

fn girth_goldens() -> Outcome {
    let f2 = gf(2);
    let graph = |name: &str| graphic(&named_graph(name).unwrap().graph, &f2);
    let cases: Vec<(&str, RepMatroid, usize)> = vec![
        ("M(K4)", clique(4, &f2, false).unwrap(), 3),
        ("M(K4)*", clique(4, &f2, true).unwrap(), 3),
        ("M(K5)*", clique(5, &f2, true).unwrap(), 4),
        ("Petersen", graph("petersen"), 5),
        ("Heawood", graph("heawood"), 6),
        ("U(2,4)@GF5", uniform(2, 4, &gf(5)).unwrap(), 3),
    ];
    let mut seen = Vec::new();
    for (name, m, want) in cases {
        let g = m.girth(None).map_err(|e| e.to_string())?;
        ensure(g == Girth::Finite(want), || format!("{name}: got {g}, want {want}"))?;
        seen.push(format!("{name}={want}"));
    }
    Ok(seen.join(" "))
}

/// The 200 instances shared by criteria 4, 5 and 6.
fn chain_instances() -> Vec<RepMatroid> {
    let fields = [2u32, 3, 4, 5];
    (0..200u64)
        .map(|i| {
            let q = fields[i as usize % 4];
            let r = 2 + (i as usize / 4) % 4;
            let n = (r + 2 + (i as usize / 16) % 7).min(12);
            random_matroid(r, n, &gf(q), 10_000 + i).unwrap()
        })
        .collect()
}

fn greedy_system(m: &RepMatroid) -> (gfmatroid::gfmatrix::StandardForm, SetSystem) {
    let basis: Vec<&str> = m.greedy_basis().into_iter().map(|i| m.label(i)).collect();
    let sf = m.standard_form(&basis).unwrap();
    let ss = SetSystem::build(&sf);
    (sf, ss)
}

fn chain_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut cases, mut equality_cases) = (0usize, 0usize);
    for (i, m) in chain_instances().iter().enumerate() {
        let (sf, ss) = greedy_system(m);
        let v = ss.ground_len();
        for _ in 0..50 {
            let size = rng.gen_range(0..=v);
            let w = ss.subset(sample(&mut rng, v, size)).unwrap();
            let c = ss.claim_chain_check(&sf, &w).map_err(|e| e.to_string())?;
            ensure(c.ok, || format!("instance {i}: chain fails {c:?}"))?;
            cases += 1;
            let rows: HashSet<&String> = ss.projection(&w).into_iter().map(|b| &sf.basis_order[b]).collect();
            let full = ss.subset((0..v).filter(|&g| rows.contains(&ss.ground()[g].0))).unwrap();
            let c = ss.claim_chain_check(&sf, &full).map_err(|e| e.to_string())?;
            ensure(c.ok && c.traces == c.distinct_restricted_cols, || {
                format!("instance {i}: full-block equality fails {c:?}")
            })?;
            equality_cases += 1;
        }
    }
    Ok(format!("{cases} subsets ok, {equality_cases} full-block equalities"))
}

fn sandwich() -> Outcome {
    let mut pairs = 0usize;
    for (i, m) in chain_instances().iter().enumerate() {
        let (_, ss) = greedy_system(m);
        for a in 0..ss.family_len() {
            for b in a + 1..ss.family_len() {
                let (h, d) = (ss.hamming(a, b), ss.sym_diff(a, b));
                ensure(h <= d && d <= 2 * h, || format!("instance {i}: pair ({a},{b}) h={h} d={d}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs, 0 violations"))
}

fn short_circuits() -> Outcome {
    let mut checked = 0usize;
    for (i, m) in chain_instances().iter().enumerate() {
        let bases = if m.len() <= 10 {
            m.all_bases(10).map_err(|e| e.to_string())?
        } else {
            m.sample_bases(20, 77 + i as u64)
        };
        for b in bases {
            let labels: Vec<&str> = b.iter().map(|&x| m.label(x)).collect();
            let (c, stats) = find_short_circuit(m, &labels).map_err(|e| format!("instance {i}: {e}"))?;
            let idx = m.indices(c.elements()).unwrap();
            let outside = idx.iter().filter(|x| !b.contains(x)).count();
            ensure(oracle_is_circuit(m, &idx), || format!("instance {i}: {c} is not a circuit"))?;
            ensure(outside <= 2, || format!("instance {i}: |C \\ B| = {outside}"))?;
            if let Some(h) = stats.min_pair_hamming {
                ensure(c.len() <= h + 2, || format!("instance {i}: |C| = {} > {h} + 2", c.len()))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (instance, basis) pairs, 0 violations"))
}

fn minor_goldens() -> Outcome {
    let f2 = gf(2);
    let k3 = clique(3, &f2, false).unwrap();
    let k4 = clique(4, &f2, false).unwrap();
    let k5 = clique(5, &f2, false).unwrap();
    let fano = projective_geometry(3, &f2).unwrap();
    let u24 = uniform(2, 4, &gf(3)).unwrap();
    let petersen = graphic(&named_graph("petersen").unwrap().graph, &f2);
    let cases = [
        ("M(K4) > M(K3)", &k4, &k3, true),
        ("PG(2,2) > M(K4)", &fano, &k4, true),
        ("PG(2,2) > U(2,4)", &fano, &u24, false),
        ("Petersen > M(K5)", &petersen, &k5, true),
    ];
    let mut seen = Vec::new();
    for (name, host, target, expect) in cases {
        let w = host.has_minor(target).map_err(|e| e.to_string())?;
        ensure(w.is_some() == expect, || format!("{name}: expected {}", if expect { "witness" } else { "absent" }))?;
        if let Some(w) = w {
            let minor = host.minor(&w.delete, &w.contract).map_err(|e| e.to_string())?;
            ensure(minor.is_isomorphic(target).unwrap(), || format!("{name}: witness does not check"))?;
        }
        seen.push(format!("{name}: {}", if expect { "witness" } else { "absent" }));
    }
    Ok(seen.join(", "))
}

fn dichotomy() -> Outcome {
    let f2 = gf(2);
    let k5d = clique(5, &f2, true).unwrap();
    ensure(k5d.is_cosimple() && k5d.girth(None).unwrap() == Girth::Finite(4), || {
        "M(K5)* should be cosimple with girth 4".into()
    })?;
    let r = verify_dichotomy(&k5d, "mk5_dual", 5, BasisMode::All, 0).map_err(|e| e.to_string())?;
    ensure(r.minors[1].status == MinorStatus::Found, || "M(K5)* minor not reported".into())?;

    let petersen = from_id("petersen@gf2", &f2, 0).unwrap();
    let r = verify_dichotomy(&petersen, "petersen@gf2", 5, BasisMode::All, 0).map_err(|e| e.to_string())?;
    ensure(r.minors[0].status == MinorStatus::Found, || "M(K5) minor not reported for Petersen".into())?;

    // first seed giving a simple, cosimple binary matroid (girth 3 at this size)
    let (seed, m) = (0u64..500)
        .map(|s| (s, random_matroid(4, 10, &f2, s).unwrap()))
        .find(|(_, m)| m.is_cosimple() && m.is_simple() && m.girth(None).unwrap().value() <= Some(3))
        .ok_or("no cosimple girth-3 instance among 500 seeds")?;
    let r = verify_dichotomy(&m, "random", 5, BasisMode::All, 0).map_err(|e| e.to_string())?;
    ensure(r.circuit_size <= 3 && r.nonbasis_count <= 2, || {
        format!("random seed {seed}: circuit size {} with {} outside B", r.circuit_size, r.nonbasis_count)
    })?;
    Ok(format!(
        "M(K5)* found; Petersen M(K5) found; random_4_10 seed {seed}: |C|={} |C\\B|={}",
        r.circuit_size, r.nonbasis_count
    ))
}

/// Distinct projective points among the columns, without the library.
fn point_count(m: &RepMatroid) -> usize {
    let f = m.field();
    let mut points: HashSet<Vec<u32>> = HashSet::new();
    for c in 0..m.len() {
        let col = m.matrix().column(c);
        if let Some(&lead) = col.iter().find(|x| !x.is_zero()) {
            let inv = f.inv(lead).unwrap();
            points.insert(col.iter().map(|&x| f.mul(x, inv).code()).collect());
        }
    }
    points.len()
}

fn density() -> Outcome {
    let mut instances: Vec<(String, RepMatroid, bool)> = Vec::new();
    for (r, q) in [(2usize, 2u32), (3, 2), (4, 2), (2, 3), (3, 3), (2, 4), (3, 4), (2, 5)] {
        instances.push((format!("PG({},{q})", r - 1), projective_geometry(r, &gf(q)).unwrap(), true));
    }
    let fields = [2u32, 3, 4, 5];
    for i in 0..60u64 {
        let q = fields[i as usize % 4];
        let r = 2 + (i as usize / 4) % 3;
        let n = 3 + (i as usize * 5) % 16;
        let m = random_matroid(r.min(n), n, &gf(q), 900 + i).unwrap();
        instances.push((format!("random#{i}"), m, false));
    }
    for t in 3..=6 {
        instances.push((format!("M(K{t})"), clique(t, &gf(2), false).unwrap(), t == 3));
        instances.push((format!("M(K{t})*"), clique(t, &gf(3), true).unwrap(), false));
    }
    // every point of PG(2,2) twice, plus zero columns
    let mut codes = Vec::new();
    for row in 0..3 {
        for v in 0u32..8 {
            codes.extend([v >> row & 1, v >> row & 1]);
        }
    }
    let padded = RepMatroid::from_matrix(GFMatrix::from_codes(&gf(2), 3, 16, &codes).unwrap());
    instances.push(("PG(2,2) padded".into(), padded, true));

    let mut equalities = 0;
    for (name, m, is_pg) in &instances {
        let q = m.field().order() as u64;
        let bound = (0..m.rank()).fold(0u64, |a, _| a * q + 1);
        let s = m.simplify();
        ensure(s.len() == point_count(m), || format!("{name}: simplify disagrees with point count"))?;
        ensure(s.len() as u64 <= bound, || format!("{name}: {} > {bound}", s.len()))?;
        // a full-rank column set reaches the bound only if every point occurs
        let all_points = m.rank() == m.matrix().rows() && point_count(m) as u64 == bound;
        let pg_like = *is_pg || all_points;
        ensure((s.len() as u64 == bound) == pg_like, || format!("{name}: equality mismatch"))?;
        equalities += (s.len() as u64 == bound) as usize;
    }
    let fano = projective_geometry(3, &gf(2)).unwrap();
    ensure(fano.len() == 7 && fano.simplify().len() == 7, || "PG(2,2) must have 7 elements".into())?;
    Ok(format!("{} instances, {equalities} at the bound, PG(2,2) = 7", instances.len()))
}

fn packing() -> Outcome {
    let fields = [2u32, 3, 4, 5];
    let mut rows = Vec::new();
    let mut summary = [(0.0f64, 0.0f64); 4];
    for i in 0..50u64 {
        let q = fields[i as usize % 4];
        let r = 3 + (i as usize / 4) % 4;
        let n = r + 4 + (i as usize % 7);
        let m = random_matroid(r, n, &gf(q), 3_000 + i).unwrap();
        let (_, ss) = greedy_system(&m);
        for (k, delta) in (1..=4).enumerate() {
            let chosen = ss.greedy_packing_indices(delta).map_err(|e| e.to_string())?;
            ensure(ss.is_delta_separated(&chosen, delta), || format!("instance {i}: delta {delta} packing not separated"))?;
            let meas = ss.packing_measurement(delta).map_err(|e| e.to_string())?;
            summary[k].0 += meas.ratio / 50.0;
            summary[k].1 = summary[k].1.max(meas.ratio);
            rows.push(json!({
                "instance": format!("random_{r}_{n}@gf{q} seed={}", 3_000 + i),
                "ground_size": ss.ground_len(),
                "delta": delta,
                "packing_size": meas.size,
                "ratio": meas.ratio,
            }));
        }
    }
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("packing_ratios.json");
    std::fs::write(&path, serde_json::to_string_pretty(&rows).unwrap()).map_err(|e| e.to_string())?;
    let trend: Vec<String> = summary
        .iter()
        .enumerate()
        .map(|(k, (mean, max))| format!("d={} mean={mean:.3} max={max:.3}", k + 1))
        .collect();
    Ok(format!("200 packings separated; {}; report {}", trend.join(", "), path.display()))
}

fn reproducibility() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_gfmatroid");
    let configs: [&[&str]; 5] = [
        &["verify", "gen:petersen@gf2", "--t", "5", "--seed", "21"],
        &["verify", "gen:random_5_12@gf2", "--t", "4", "--basis", "sample:8", "--seed", "15"],
        &["separation", "gen:random_4_11@gf4", "--seed", "9"],
        &["shatter", "gen:random_4_9@gf3", "--m", "4", "--trials", "200", "--seed", "5"],
        &["minor", "gen:petersen@gf2", "gen:mk5"],
    ];
    for args in configs {
        let run = || Command::new(bin).args(args).output().map_err(|e| e.to_string());
        let (a, b) = (run()?, run()?);
        ensure(a.status.code() == b.status.code() && a.stdout == b.stdout, || {
            format!("`{}` differs between runs", args.join(" "))
        })?;
        ensure(a.status.success(), || format!("`{}` failed", args.join(" ")))?;
    }
    Ok(format!("{} configs byte-identical across two runs", configs.len()))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, title: "field axioms", budget: Some(Duration::from_secs(1)), run: field_axioms },
        Criterion { id: 2, title: "duality suite", budget: Some(Duration::from_secs(30)), run: duality_suite },
        Criterion { id: 3, title: "girth golden values", budget: Some(Duration::from_secs(10)), run: girth_goldens },
        Criterion { id: 4, title: "trace chain check", budget: Some(Duration::from_secs(60)), run: chain_check },
        Criterion { id: 5, title: "symmetric-difference sandwich", budget: Some(Duration::from_secs(10)), run: sandwich },
        Criterion { id: 6, title: "short circuit per basis", budget: Some(Duration::from_secs(120)), run: short_circuits },
        Criterion { id: 7, title: "minor detection goldens", budget: Some(Duration::from_secs(600)), run: minor_goldens },
        Criterion { id: 8, title: "dichotomy smoke test", budget: Some(Duration::from_secs(600)), run: dichotomy },
        Criterion { id: 9, title: "density extremals", budget: Some(Duration::from_secs(10)), run: density },
        Criterion { id: 10, title: "packing measurement", budget: Some(Duration::from_secs(60)), run: packing },
        Criterion { id: 11, title: "reproducibility", budget: None, run: reproducibility },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let result = match (result, c.budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.2?}, budget {b:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {} ({elapsed:.2?}): {detail}", c.id, c.title),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {} ({elapsed:.2?}): {why}", c.id, c.title);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
