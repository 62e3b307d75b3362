//! Acceptance suite: one check per acceptance criterion, each printing a
//! single PASS/FAIL line. Runs without the libtest harness so the lines are
//! always shown; the process fails if any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use ksep_core::search::{bound_grid, brute_force_search, shifted_core, GridSpec};
use ksep_core::{
    binomial, build_decomposition, compatibility_graph, count_k_separated, enumerate_k_separated,
    for_each_clique, is_intersecting, max_clique, max_intersecting_with, replay_induction,
    sample_intersecting, star, star_bound, verify_bound_sweep, CompatGraph, Family, Method, Params,
    SampleMode, SearchOptions,
};

type Outcome = Result<String, String>;

fn params(n: u32, k: u32, r: u32) -> Params {
    Params::new(n, k, r).expect("valid parameters")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1_grid() -> Vec<Params> {
    bound_grid(GridSpec {
        n_min: 1,
        n_max: 14,
        k_min: 1,
        k_max: 4,
        r_min: 2,
        r_max: 5,
    })
    .expect("grid")
}

/// Bound sweep for k >= 1; returns the witnesses for the replay criterion.
fn bound_sweep(witnesses: &mut Vec<Family>) -> Outcome {
    let grid = criterion_1_grid();
    let report = verify_bound_sweep(&grid, Method::Clique, &SearchOptions::default());
    for row in &report.rows {
        let p = row.params;
        let res = row.outcome.as_ref().map_err(|e| format!("{p}: {e}"))?;
        let expected = binomial(p.n as i64 - (p.k * p.r) as i64 - 1, p.r as i64 - 1).unwrap();
        ensure(res.optimum as u64 == expected, || {
            format!("{p}: optimum {} != {expected}", res.optimum)
        })?;
        ensure(
            is_intersecting(&res.witness).holds() && res.witness.len() == res.optimum,
            || format!("{p}: witness is not an intersecting family of the reported size"),
        )?;
        witnesses.push(res.witness.clone());
    }
    Ok(format!("{} instances match", report.rows.len()))
}

fn ekr_sweep() -> Outcome {
    let grid = bound_grid(GridSpec {
        n_min: 1,
        n_max: 12,
        k_min: 0,
        k_max: 0,
        r_min: 1,
        r_max: 5,
    })
    .expect("grid");
    let mut count = 0;
    for p in grid {
        let res = max_intersecting_with(p, Method::Clique, &SearchOptions::default())
            .map_err(|e| format!("{p}: {e}"))?;
        let expected = binomial(p.n as i64 - 1, p.r as i64 - 1).unwrap();
        ensure(res.optimum as u64 == expected, || {
            format!("{p}: optimum {} != {expected}", res.optimum)
        })?;
        ensure(
            is_intersecting(&res.witness).holds() && res.witness.len() == res.optimum,
            || format!("{p}: bad witness"),
        )?;
        count += 1;
    }
    Ok(format!("{count} instances match binom(n-1, r-1)"))
}

fn degenerate_bases() -> Outcome {
    let mut count = 0;
    for k in 1..=4 {
        for r in 2..=5 {
            let n = (k + 1) * r;
            if n > 20 {
                continue;
            }
            let p = params(n, k, r);
            let sets = enumerate_k_separated(p);
            ensure(sets.len() == (k + 1) as usize, || {
                format!("{p}: {} sets instead of {}", sets.len(), k + 1)
            })?;
            for (i, a) in sets.iter().enumerate() {
                for b in &sets[i + 1..] {
                    ensure(!a.intersects(b), || format!("{p}: {a} meets {b}"))?;
                }
            }
            let best = max_clique(&compatibility_graph(p), 0).size;
            ensure(best == 1, || format!("{p}: maximum {best} instead of 1"))?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} base instances: k+1 pairwise disjoint sets, maximum 1"
    ))
}

/// Every instance with k in [1,3], r >= 2, n >= (k+1)r + 1 and at most 24 sets.
fn small_proof_instances() -> Vec<Params> {
    let mut out = Vec::new();
    for k in 1..=3u32 {
        for r in 2u32.. {
            let n0 = (k + 1) * r + 1;
            if count_k_separated(params(n0, k, r)).unwrap() > 24 {
                break;
            }
            for n in n0.. {
                if count_k_separated(params(n, k, r)).unwrap() > 24 {
                    break;
                }
                out.push(params(n, k, r));
            }
        }
    }
    out
}

fn proof_invariants_exhaustive() -> Outcome {
    let instances = small_proof_instances();
    let mut families = 0u64;
    let mut failure = None;
    for &p in &instances {
        let g = compatibility_graph(p);
        for_each_clique(&g, |vs| {
            if failure.is_some() {
                return;
            }
            let a = g.family_of(vs.iter().copied());
            match build_decomposition(&a) {
                Ok(t) if t.all_passed() => families += 1,
                Ok(t) => {
                    let failed: Vec<_> = t
                        .verdicts
                        .iter()
                        .filter(|v| !v.passed)
                        .map(|v| v.name)
                        .collect();
                    failure = Some(format!("{p}: {:?} fails {failed:?}", a.to_json().sets));
                }
                Err(e) => failure = Some(format!("{p}: {e}")),
            }
        });
    }
    match failure {
        Some(msg) => Err(msg),
        None => Ok(format!(
            "{families} families over {} instances",
            instances.len()
        )),
    }
}

const SAMPLES_PER_POINT: u64 = 1000;

fn proof_invariants_sampled() -> Outcome {
    let modes = [
        SampleMode::Greedy,
        SampleMode::StarSeeded,
        SampleMode::ShiftActive,
    ];
    let densities = [0.25, 0.5, 0.75, 1.0];
    let mut points = 0;
    let mut families = 0u64;
    for k in 1..=4u32 {
        for r in 2..=5u32 {
            for n in (k + 1) * r + 1..=14 {
                let p = params(n, k, r);
                for i in 0..SAMPLES_PER_POINT {
                    let mode = modes[(i % 3) as usize];
                    let density = densities[(i / 3 % 4) as usize];
                    let seed =
                        (u64::from(n) << 40) ^ (u64::from(k) << 32) ^ (u64::from(r) << 24) ^ i;
                    let sample = sample_intersecting(p, seed, density, mode)
                        .map_err(|e| format!("{p} seed {seed}: {e}"))?;
                    let t = build_decomposition(&sample.family)
                        .map_err(|e| format!("{p} seed {seed}: {e}"))?;
                    ensure(t.all_passed(), || {
                        format!("{p} seed {seed} {mode}: {:?}", sample.family.to_json().sets)
                    })?;
                    families += 1;
                }
                points += 1;
            }
        }
    }
    Ok(format!("{families} samples over {points} grid points"))
}

fn oracle_equivalence() -> Outcome {
    let mut instances = 0;
    for k in 0..=4u32 {
        for r in 1..=5u32 {
            for n in 1..=64u32 {
                let p = params(n, k, r);
                let m = count_k_separated(p).unwrap();
                if m > 24 {
                    if n >= (k + 1) * r {
                        break;
                    }
                    continue;
                }
                let oracle = brute_force_search(p, 24).map_err(|e| format!("{p}: {e}"))?;
                let bnb = max_clique(&compatibility_graph(p), 0).size;
                let via_api = max_intersecting_with(p, Method::Clique, &SearchOptions::default())
                    .map_err(|e| format!("{p}: {e}"))?
                    .optimum;
                ensure(bnb == oracle.optimum && via_api == oracle.optimum, || {
                    format!(
                        "{p}: branch and bound {bnb}/{via_api}, brute force {}",
                        oracle.optimum
                    )
                })?;
                if k == 0 && p.is_nonempty() {
                    let core = CompatGraph::from_sets(p, shifted_core(p));
                    let c = max_clique(&core, 0).size;
                    ensure(c == oracle.optimum, || {
                        format!("{p}: shifted core gives {c}")
                    })?;
                }
                instances += 1;
            }
        }
    }
    Ok(format!("{instances} instances agree"))
}

fn structural_counts() -> Outcome {
    let mut counted = 0;
    for n in 1..=20 {
        for k in 0..=4 {
            for r in 1..=5 {
                let p = params(n, k, r);
                let (closed, listed) = (
                    count_k_separated(p).unwrap(),
                    enumerate_k_separated(p).len(),
                );
                ensure(closed as usize == listed, || {
                    format!("{p}: count {closed}, enumeration {listed}")
                })?;
                counted += 1;
            }
        }
    }
    let mut stars = 0;
    for n in 1..=40 {
        for k in 0..=4 {
            for r in 1..=5 {
                let p = params(n, k, r);
                if !p.is_nonempty() {
                    continue;
                }
                let expected = star_bound(n, k, r).unwrap();
                for x in [1, n.div_ceil(2), n] {
                    let s = star(p, x).map_err(|e| format!("{p}: {e}"))?;
                    ensure(s.len() as u64 == expected, || {
                        format!("{p} x={x}: star has {} sets, bound {expected}", s.len())
                    })?;
                    stars += 1;
                }
            }
        }
    }
    Ok(format!("{counted} counts, {stars} stars"))
}

fn induction_replay(witnesses: &[Family]) -> Outcome {
    let mut families: Vec<Family> = criterion_1_grid()
        .into_iter()
        .flat_map(|p| [1, p.n.div_ceil(2)].map(|x| star(p, x).expect("nonempty instance")))
        .collect();
    let star_count = families.len();
    families.extend(witnesses.iter().cloned());
    for a in &families {
        let p = a.params();
        let cert = replay_induction(a).map_err(|e| format!("{p}: {e}"))?;
        ensure(cert.certified(), || {
            format!("{p}: certificate does not hold")
        })?;
        let expected = binomial(p.n as i64 - (p.k * p.r) as i64 - 1, p.r as i64 - 1).unwrap();
        ensure(cert.bound == expected, || {
            format!("{p}: root bound {} != {expected}", cert.bound)
        })?;
    }
    Ok(format!(
        "{star_count} stars and {} witnesses certified",
        witnesses.len()
    ))
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ksep").chain(args.iter().copied());
    let code = ksep_cli::run(argv, &mut out, &mut err);
    (code, out)
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("ksep-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let fixture: PathBuf = dir.join("family.json");
    let (_, star_json) = run_cli(&[
        "star", "--n", "11", "--k", "1", "--r", "3", "--x", "4", "--format", "json",
    ]);
    std::fs::write(&fixture, &star_json).map_err(|e| e.to_string())?;
    let fixture = fixture.to_str().expect("UTF-8 temp path").to_string();

    let invocations: Vec<Vec<&str>> = vec![
        vec![
            "enumerate",
            "--n",
            "7",
            "--k",
            "1",
            "--r",
            "2",
            "--format",
            "lines",
        ],
        vec![
            "enumerate",
            "--n",
            "12",
            "--k",
            "2",
            "--r",
            "3",
            "--format",
            "json",
        ],
        vec![
            "count", "--n-min", "4", "--n-max", "20", "--k", "2", "--r", "3", "--format", "csv",
        ],
        vec!["star", "--n", "13", "--k", "1", "--r", "4", "--x", "7"],
        vec![
            "max",
            "--n",
            "12",
            "--k",
            "1",
            "--r",
            "3",
            "--witness",
            "--format",
            "json",
        ],
        vec![
            "max",
            "--n",
            "8",
            "--k",
            "1",
            "--r",
            "2",
            "--method",
            "bruteforce",
            "--witness",
        ],
        vec![
            "max",
            "--n",
            "10",
            "--k",
            "0",
            "--r",
            "4",
            "--witness",
            "--format",
            "csv",
        ],
        vec![
            "verify-bound",
            "--n-max",
            "11",
            "--k-max",
            "3",
            "--r-max",
            "3",
            "--include-ekr",
            "--format",
            "csv",
        ],
        vec!["verify-bound", "--n-max", "10", "--format", "json"],
        vec![
            "compress",
            "--input",
            &fixture,
            "--members",
            "--format",
            "json",
        ],
        vec!["compress", "--input", &fixture],
        vec![
            "check-proof",
            "--n",
            "10",
            "--k",
            "1",
            "--r",
            "3",
            "--samples",
            "300",
            "--seed",
            "7",
        ],
        vec![
            "check-proof",
            "--n",
            "12",
            "--k",
            "2",
            "--r",
            "3",
            "--samples",
            "200",
            "--seed",
            "99",
            "--mode",
            "shift-active",
            "--format",
            "json",
        ],
        vec![
            "check-proof",
            "--n",
            "8",
            "--k",
            "1",
            "--r",
            "2",
            "--exhaustive",
            "--format",
            "csv",
        ],
        vec!["replay", "--input", &fixture],
        vec!["replay", "--input", &fixture, "--format", "json"],
    ];
    for args in &invocations {
        let first = run_cli(args);
        let second = run_cli(args);
        ensure(first.0 == 0, || format!("{args:?}: exit {}", first.0))?;
        ensure(!first.1.is_empty(), || format!("{args:?}: no output"))?;
        ensure(first == second, || format!("{args:?}: outputs differ"))?;
    }

    // The installed binary, run as separate processes.
    let exe = env!("CARGO_BIN_EXE_ksep");
    let args = [
        "check-proof",
        "--n",
        "11",
        "--k",
        "2",
        "--r",
        "2",
        "--samples",
        "500",
        "--seed",
        "3",
    ];
    let a = std::process::Command::new(exe)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let b = std::process::Command::new(exe)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(a.status.success() && a.stdout == b.stdout, || {
        "binary outputs differ".into()
    })?;
    ensure(a.stdout == run_cli(&args).1, || {
        "binary and library outputs differ".into()
    })?;

    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!(
        "{} invocations byte-identical across repeats",
        invocations.len() + 1
    ))
}

fn main() -> ExitCode {
    let mut witnesses = Vec::new();
    let mut all_passed = true;
    let mut report = |id: &str, name: &str, check: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id} ({name}): PASS - {detail} [{secs:.1}s]"),
            Err(detail) => {
                all_passed = false;
                println!("criterion {id} ({name}): FAIL - {detail} [{secs:.1}s]");
            }
        }
    };
    report("1", "bound sweep", &mut || bound_sweep(&mut witnesses));
    report("2", "k = 0 sweep", &mut ekr_sweep);
    report("3", "degenerate bases", &mut degenerate_bases);
    report(
        "4a",
        "proof invariants, exhaustive",
        &mut proof_invariants_exhaustive,
    );
    report(
        "4b",
        "proof invariants, sampled",
        &mut proof_invariants_sampled,
    );
    report("5", "oracle equivalence", &mut oracle_equivalence);
    report("6", "structural counts", &mut structural_counts);
    report("7", "induction replay", &mut || {
        induction_replay(&witnesses)
    });
    report("8", "determinism", &mut determinism);
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
