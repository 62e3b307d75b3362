//! The `ksep` command-line tool.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code: 0 on success, 1 when a verification fails, 2 for usage,
//! input and precondition errors, 3 when an instance exceeds a capacity
//! limit. Output is assembled in memory and written once, so a failing
//! command never leaves half a report behind. Nothing time-dependent is
//! printed unless `--timings` is given, which keeps repeated runs
//! byte-identical.

mod args;

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use ksep_core::compression::VERDICT_NAMES;
use ksep_core::replay::Step;
use ksep_core::search::{bound_grid, GridSpec};
use ksep_core::{
    build_decomposition, compatibility_graph, count_k_separated, enumerate_k_separated,
    for_each_clique, max_intersecting_with, replay_induction, sample_intersecting, star,
    verify_bound_sweep, Certificate, Family, Params, SearchOptions, SearchResult,
};

use args::{
    CheckProofArgs, CompressArgs, CountArgs, InstanceArgs, MaxArgs, ReplayArgs, SolverArgs,
    StarArgs, VerifyArgs,
};
pub use args::{Cli, Command, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

/// Failures that end a run, each with its exit code.
#[derive(Debug)]
enum Failure {
    Core(ksep_core::Error),
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(ksep_core::Error::Capacity { .. } | ksep_core::Error::Overflow(..)) => {
                EXIT_CAPACITY
            }
            Failure::Core(_) | Failure::Io(_) => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(msg) => f.write_str(msg),
        }
    }
}

impl From<ksep_core::Error> for Failure {
    fn from(e: ksep_core::Error) -> Self {
        Failure::Core(e)
    }
}

/// A finished report and the exit code it calls for.
struct Report {
    text: String,
    exit: i32,
}

impl Report {
    fn ok(text: String) -> Self {
        Report {
            text,
            exit: EXIT_OK,
        }
    }

    fn verified(text: String, passed: bool) -> Self {
        Report {
            text,
            exit: if passed { EXIT_OK } else { EXIT_VERIFICATION },
        }
    }
}

/// Runs the tool on `argv` (including the program name), writing the report
/// to `out` (or to `--output`) and diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let report = match execute(&cli) {
        Ok(report) => report,
        Err(failure) => {
            let _ = writeln!(err, "error: {failure}");
            return failure.exit_code();
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &report.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => out
            .write_all(report.text.as_bytes())
            .and_then(|()| out.flush())
            .map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(msg) = written {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    report.exit
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    let format = cli.format;
    match &cli.command {
        Command::Enumerate(a) => enumerate(a, format),
        Command::Count(a) => count(a, format),
        Command::Star(a) => star_cmd(a, format),
        Command::Max(a) => max(a, format),
        Command::VerifyBound(a) => verify_bound(a, format),
        Command::Compress(a) => compress(a, format),
        Command::CheckProof(a) => check_proof(a, format),
        Command::Replay(a) => replay(a, format),
    }
}

fn params(a: &InstanceArgs) -> Result<Params, Failure> {
    Ok(Params::new(a.n, a.k, a.r)?)
}

fn read_family(path: &Path) -> Result<Family, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(Family::from_json_str(&text)?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string(value).expect("report types serialize");
    text.push('\n');
    text
}

fn to_csv<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| Failure::Io(format!("csv: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Io(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Renders a family in the requested format.
fn family_text(f: &Family, format: Format) -> Result<String, Failure> {
    match format {
        Format::Lines => Ok(f.to_lines()),
        Format::Json => Ok(to_json(&f.to_json())),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                elements: String,
            }
            let rows: Vec<Row> = f
                .iter()
                .map(|s| Row {
                    elements: s.to_string(),
                })
                .collect();
            if rows.is_empty() {
                return Ok("elements\n".into());
            }
            to_csv(rows)
        }
    }
}

fn enumerate(a: &InstanceArgs, format: Format) -> Result<Report, Failure> {
    let p = params(a)?;
    let f = Family::new(p, enumerate_k_separated(p))?;
    Ok(Report::ok(family_text(&f, format)?))
}

fn count(a: &CountArgs, format: Format) -> Result<Report, Failure> {
    let (lo, hi) = match (a.n, a.n_min, a.n_max) {
        (Some(n), _, _) => (n, n),
        (None, Some(lo), Some(hi)) => (lo, hi),
        _ => unreachable!("clap enforces --n or --n-min/--n-max"),
    };
    if lo > hi {
        return Err(
            ksep_core::Error::InvalidParams(format!("--n-min {lo} exceeds --n-max {hi}")).into(),
        );
    }
    #[derive(Serialize)]
    struct Row {
        n: u32,
        k: u32,
        r: u32,
        count: u64,
    }
    let rows = (lo..=hi)
        .map(|n| {
            let p = Params::new(n, a.k, a.r)?;
            Ok(Row {
                n,
                k: a.k,
                r: a.r,
                count: count_k_separated(p)?,
            })
        })
        .collect::<Result<Vec<_>, ksep_core::Error>>()?;
    let text = match format {
        Format::Lines => rows.iter().fold(String::new(), |mut s, row| {
            let _ = writeln!(s, "n={} k={} r={} count={}", row.n, row.k, row.r, row.count);
            s
        }),
        Format::Json => to_json(&rows),
        Format::Csv => to_csv(&rows)?,
    };
    Ok(Report::ok(text))
}

fn star_cmd(a: &StarArgs, format: Format) -> Result<Report, Failure> {
    let p = params(&a.instance)?;
    Ok(Report::ok(family_text(&star(p, a.x)?, format)?))
}

fn options(s: &SolverArgs) -> SearchOptions {
    SearchOptions {
        vertex_cap: s.vertex_cap,
        brute_cap: s.brute_cap,
        shifted_core: !s.no_shifted_core,
    }
}

/// One row of the sweep CSV schema. `millis` stays empty without `--timings`.
#[derive(Debug, Serialize)]
struct SearchRow {
    n: u32,
    k: u32,
    r: u32,
    family_size: usize,
    optimum: usize,
    predicted: u64,
    #[serde(rename = "match")]
    matches: bool,
    nodes: u64,
    millis: Option<u128>,
}

impl SearchRow {
    fn new(res: &SearchResult, timings: bool) -> Self {
        SearchRow {
            n: res.params.n,
            k: res.params.k,
            r: res.params.r,
            family_size: res.family_size,
            optimum: res.optimum,
            predicted: res.predicted,
            matches: res.matches,
            nodes: res.nodes_explored,
            millis: timings.then_some(res.elapsed.as_millis()),
        }
    }

    fn line(&self) -> String {
        let mut s = format!(
            "n={} k={} r={} family_size={} optimum={} predicted={} match={} nodes={}",
            self.n,
            self.k,
            self.r,
            self.family_size,
            self.optimum,
            self.predicted,
            self.matches,
            self.nodes
        );
        if let Some(ms) = self.millis {
            let _ = write!(s, " millis={ms}");
        }
        s
    }
}

fn max(a: &MaxArgs, format: Format) -> Result<Report, Failure> {
    let p = params(&a.instance)?;
    let res = max_intersecting_with(p, a.solver.method.into(), &options(&a.solver))?;
    let row = SearchRow::new(&res, a.solver.timings);
    let text = match format {
        Format::Lines => {
            let mut s = row.line();
            s.push('\n');
            if a.witness {
                s.push_str(&res.witness.to_lines());
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct MaxJson<'a> {
                #[serde(flatten)]
                row: &'a SearchRow,
                #[serde(skip_serializing_if = "Option::is_none")]
                witness: Option<ksep_core::FamilyJson>,
            }
            to_json(&MaxJson {
                row: &row,
                witness: a.witness.then(|| res.witness.to_json()),
            })
        }
        Format::Csv => to_csv([&row])?,
    };
    Ok(Report::verified(text, res.matches))
}

fn verify_bound(a: &VerifyArgs, format: Format) -> Result<Report, Failure> {
    let spec = GridSpec {
        n_min: a.n_min,
        n_max: a.n_max,
        k_min: a.k_min.max(1),
        k_max: a.k_max,
        r_min: a.r_min,
        r_max: a.r_max,
    };
    let mut grid = Vec::new();
    if a.include_ekr {
        grid.extend(bound_grid(GridSpec {
            k_min: 0,
            k_max: 0,
            ..spec
        })?);
    }
    if a.k_max >= 1 {
        grid.extend(bound_grid(spec)?);
    }
    let report = verify_bound_sweep(&grid, a.solver.method.into(), &options(&a.solver));

    #[derive(Serialize)]
    struct ErrorRow {
        n: u32,
        k: u32,
        r: u32,
        error: String,
    }
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for row in &report.rows {
        match &row.outcome {
            Ok(res) => rows.push(SearchRow::new(res, a.solver.timings)),
            Err(e) => errors.push(ErrorRow {
                n: row.params.n,
                k: row.params.k,
                r: row.params.r,
                error: e.to_string(),
            }),
        }
    }
    let mismatches = rows.iter().filter(|r| !r.matches).count();
    let summary = format!(
        "rows={} matched={} mismatched={} errors={}",
        report.rows.len(),
        rows.len() - mismatches,
        mismatches,
        errors.len()
    );
    let text = match format {
        Format::Lines => {
            let mut s = String::new();
            for row in &report.rows {
                match &row.outcome {
                    Ok(res) => s.push_str(&SearchRow::new(res, a.solver.timings).line()),
                    Err(e) => {
                        let p = row.params;
                        let _ = write!(s, "n={} k={} r={} error={e}", p.n, p.k, p.r);
                    }
                }
                s.push('\n');
            }
            s.push_str(&summary);
            s.push('\n');
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct SweepJson<'a> {
                all_match: bool,
                rows: &'a [SearchRow],
                errors: &'a [ErrorRow],
            }
            to_json(&SweepJson {
                all_match: report.all_match(),
                rows: &rows,
                errors: &errors,
            })
        }
        Format::Csv => {
            if rows.is_empty() {
                "n,k,r,family_size,optimum,predicted,match,nodes,millis\n".into()
            } else {
                to_csv(&rows)?
            }
        }
    };
    // Mismatches are verification failures; rows that could not be solved
    // at all are reported through the exit code of their error.
    let exit = if mismatches > 0 {
        EXIT_VERIFICATION
    } else {
        report
            .rows
            .iter()
            .filter_map(|r| r.outcome.as_ref().err())
            .map(|e| Failure::Core(e.clone()).exit_code())
            .max()
            .unwrap_or(EXIT_OK)
    };
    Ok(Report { text, exit })
}

/// Per-check tallies, shared by `compress` and `check-proof`.
#[derive(Debug, Clone, Serialize)]
struct VerdictTally {
    id: u8,
    name: &'static str,
    passed: u64,
    failed: u64,
    not_applicable: u64,
}

fn empty_tallies() -> Vec<VerdictTally> {
    VERDICT_NAMES
        .iter()
        .zip(1u8..)
        .map(|(&name, id)| VerdictTally {
            id,
            name,
            passed: 0,
            failed: 0,
            not_applicable: 0,
        })
        .collect()
}

fn tally(tallies: &mut [VerdictTally], verdicts: &[ksep_core::Verdict]) {
    for (t, v) in tallies.iter_mut().zip(verdicts) {
        if !v.applicable {
            t.not_applicable += 1;
        }
        if v.passed {
            t.passed += 1;
        } else {
            t.failed += 1;
        }
    }
}

fn tally_lines(tallies: &[VerdictTally]) -> String {
    tallies.iter().fold(String::new(), |mut s, t| {
        let _ = writeln!(
            s,
            "{} {} passed={} failed={} not_applicable={}",
            t.id, t.name, t.passed, t.failed, t.not_applicable
        );
        s
    })
}

fn compress(a: &CompressArgs, format: Format) -> Result<Report, Failure> {
    let family = read_family(&a.input)?;
    let trace = build_decomposition(&family)?;
    let json = trace.to_json(a.members);
    let mut tallies = empty_tallies();
    tally(&mut tallies, &trace.verdicts);
    let text = match format {
        Format::Lines => {
            let z = &json.sizes;
            let mut s = format!(
                "instance={} a={} a_star={} a_star_n={} pair_parts={:?} c={} c_star={} d={}\n",
                trace.params, z.a, z.a_star, z.a_star_n, z.pair_parts, z.c, z.c_star, z.d
            );
            for v in &trace.verdicts {
                let outcome = match (v.applicable, v.passed) {
                    (false, _) => "n/a",
                    (true, true) => "pass",
                    (true, false) => "FAIL",
                };
                let _ = writeln!(s, "{} {} {outcome}", v.id, v.name);
            }
            let _ = writeln!(s, "a_star_intersecting={}", json.a_star_intersecting);
            let _ = writeln!(
                s,
                "result={}",
                if json.all_passed { "pass" } else { "fail" }
            );
            s
        }
        Format::Json => to_json(&json),
        Format::Csv => to_csv(&tallies)?,
    };
    Ok(Report::verified(text, trace.all_passed()))
}

fn check_proof(a: &CheckProofArgs, format: Format) -> Result<Report, Failure> {
    let p = params(&a.instance)?;
    ksep_core::compression::check_preconditions(&Family::empty(p))?;
    if !(0.0..=1.0).contains(&a.density) {
        return Err(
            ksep_core::Error::Input(format!("--density {} outside [0, 1]", a.density)).into(),
        );
    }

    let mut tallies = empty_tallies();
    let mut families = 0u64;
    let mut failed_families = 0u64;
    let mut a_star_intersecting = 0u64;
    let mut shift_eligible = 0u64;
    let mut first_failure: Option<ksep_core::FamilyJson> = None;
    let mut check = |family: &Family, eligible: bool| -> Result<(), Failure> {
        let trace = build_decomposition(family)?;
        families += 1;
        a_star_intersecting += u64::from(trace.a_star_intersecting);
        shift_eligible += u64::from(eligible);
        tally(&mut tallies, &trace.verdicts);
        if !trace.all_passed() {
            failed_families += 1;
            first_failure.get_or_insert_with(|| family.to_json());
        }
        Ok(())
    };

    let source = if a.exhaustive {
        let vertices = count_k_separated(p)? as usize;
        if vertices > a.vertex_cap {
            return Err(ksep_core::Error::Capacity {
                vertices,
                cap: a.vertex_cap,
            }
            .into());
        }
        let g = compatibility_graph(p);
        let mut outcome = Ok(());
        for_each_clique(&g, |vs| {
            if outcome.is_ok() {
                let family = g.family_of(vs.iter().copied());
                let eligible = family.iter().any(ksep_core::sample::is_shift_eligible);
                outcome = check(&family, eligible);
            }
        });
        outcome?;
        "exhaustive".to_string()
    } else {
        for i in 0..a.samples {
            let mode = a.mode.for_sample(i);
            let sample = sample_intersecting(p, a.seed.wrapping_add(i), a.density, mode)?;
            check(&sample.family, sample.shift_eligible)?;
        }
        let mode = a.mode.to_possible_value().expect("no skipped variants");
        format!(
            "samples seed={} density={} mode={}",
            a.seed,
            a.density,
            mode.get_name()
        )
    };

    let passed = failed_families == 0;
    let text = match format {
        Format::Lines => {
            let mut s = format!("instance={p} source={source} families={families}\n");
            s.push_str(&tally_lines(&tallies));
            let _ = writeln!(s, "shift_eligible={shift_eligible}/{families}");
            let _ = writeln!(s, "a_star_intersecting={a_star_intersecting}/{families}");
            if let Some(f) = &first_failure {
                let _ = writeln!(
                    s,
                    "first_failure={}",
                    serde_json::to_string(f).expect("serializes")
                );
            }
            let _ = writeln!(
                s,
                "result={} failed_families={failed_families}",
                if passed { "pass" } else { "fail" }
            );
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct CheckJson<'a> {
                n: u32,
                k: u32,
                r: u32,
                source: &'a str,
                families: u64,
                failed_families: u64,
                shift_eligible: u64,
                a_star_intersecting: u64,
                verdicts: &'a [VerdictTally],
                #[serde(skip_serializing_if = "Option::is_none")]
                first_failure: Option<&'a ksep_core::FamilyJson>,
                all_passed: bool,
            }
            to_json(&CheckJson {
                n: p.n,
                k: p.k,
                r: p.r,
                source: &source,
                families,
                failed_families,
                shift_eligible,
                a_star_intersecting,
                verdicts: &tallies,
                first_failure: first_failure.as_ref(),
                all_passed: passed,
            })
        }
        Format::Csv => to_csv(&tallies)?,
    };
    Ok(Report::verified(text, passed))
}

fn replay(a: &ReplayArgs, format: Format) -> Result<Report, Failure> {
    let family = read_family(&a.input)?;
    let cert = replay_induction(&family)?;
    let text = match format {
        Format::Lines => {
            let mut s = String::new();
            render_tree(&cert, "", &mut s);
            let _ = writeln!(
                s,
                "nodes={} depth={} certified={}",
                cert.node_count(),
                cert.depth(),
                cert.certified()
            );
            s
        }
        Format::Json => to_json(&cert),
        Format::Csv => {
            let mut rows = Vec::new();
            flatten_tree(&cert, 0, &mut rows);
            to_csv(&rows)?
        }
    };
    Ok(Report::verified(text, cert.certified()))
}

fn leaf_name(reason: &ksep_core::replay::LeafReason) -> String {
    match serde_json::to_value(reason) {
        Ok(serde_json::Value::String(name)) => name,
        _ => format!("{reason:?}"),
    }
}

fn node_label(c: &Certificate) -> String {
    let what = match &c.step {
        Step::Leaf { reason } => format!("leaf:{}", leaf_name(reason)),
        Step::Split {
            pascal,
            sizes_add_up,
            contained,
            ..
        } => {
            format!("split pascal={pascal} sizes_add_up={sizes_add_up} contained={contained}")
        }
    };
    format!(
        "(n={}, k={}, r={}) size={} bound={} intersecting={} holds={} {what}",
        c.n, c.k, c.r, c.size, c.bound, c.intersecting, c.holds
    )
}

fn render_tree(c: &Certificate, indent: &str, out: &mut String) {
    let _ = writeln!(out, "{indent}{}", node_label(c));
    if let Step::Split {
        c: left, d: right, ..
    } = &c.step
    {
        let child = format!("{indent}  ");
        render_tree(left, &child, out);
        render_tree(right, &child, out);
    }
}

#[derive(Serialize)]
struct NodeRow {
    depth: usize,
    n: u32,
    k: u32,
    r: u32,
    size: usize,
    bound: u64,
    intersecting: bool,
    holds: bool,
    step: String,
}

fn flatten_tree(c: &Certificate, depth: usize, rows: &mut Vec<NodeRow>) {
    let step = match &c.step {
        Step::Leaf { reason } => leaf_name(reason),
        Step::Split { .. } => "split".to_string(),
    };
    rows.push(NodeRow {
        depth,
        n: c.n,
        k: c.k,
        r: c.r,
        size: c.size,
        bound: c.bound,
        intersecting: c.intersecting,
        holds: c.holds,
        step,
    });
    if let Step::Split {
        c: left, d: right, ..
    } = &c.step
    {
        flatten_tree(left, depth + 1, rows);
        flatten_tree(right, depth + 1, rows);
    }
}
