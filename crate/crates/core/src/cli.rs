//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure or internal error,
//! 2 unsupported or malformed input, 3 resource cap exhausted.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::engine::{self, right_factor, telescope, TelescopeOptions, TelescoperResult};
use crate::error::{Error, Result};
use crate::reduction::ReductionContext;
use crate::term::{parse_document, parse_term, HTerm, KRange, TermSpec};
use crate::verify::{
    check_annihilates, check_certificate, check_certificate_with_residual, guess_recurrence, required_window,
    sum_sequence, CheckEntry, VerificationReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "subtele", version, about = "Creative telescoping with factored telescopers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Compute the telescoper and the minimal recurrence of the sum.
    Telescope(Common),
    /// Compute the telescoper and check it against exact sums.
    Verify(Common),
    /// Show the reduction data: kernel, basis of N, S_n matrix and right factor.
    Reduce(Common),
    /// Guess a recurrence from exact sums alone.
    Guess(GuessArgs),
    /// Sizes, orders and timings for one term or a built-in suite.
    Bench(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Term such as "binomial(n,k)^2/(n+k+1)".
    #[arg(long, conflicts_with = "input")]
    expr: Option<String>,
    /// TOML term document.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Print component operators and R (default).
    #[arg(long, conflicts_with = "expanded")]
    factored: bool,
    /// Print the expanded telescoper L_left * R.
    #[arg(long)]
    expanded: bool,
    /// Print the minimal recurrence of the sum.
    #[arg(long)]
    minimal: bool,
    /// Do not split N along automorphisms.
    #[arg(long)]
    no_symmetry: bool,
    /// Compute and check rational certificates.
    #[arg(long)]
    certificate: bool,
    /// Check the recurrences against exact sums at n = 1..N.
    #[arg(long, value_name = "N")]
    verify: Option<i64>,
    /// Summation range such as "0..n"; default is the natural support.
    #[arg(long, value_name = "RANGE")]
    k_range: Option<String>,
    /// Degree cap for the polynomial reduction.
    #[arg(long, value_name = "N")]
    degree_cap: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Report per-stage timings.
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug)]
struct GuessArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 6)]
    max_order: usize,
    #[arg(long, default_value_t = 12)]
    max_degree: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

/// Settings after merging flags with an input document.
struct Job {
    expr: String,
    spec: TermSpec,
    k_range: KRange,
    opts: TelescopeOptions,
    expanded: bool,
    minimal: bool,
    verify: Option<i64>,
    timings: bool,
}

struct Output {
    text: String,
    json: Value,
    ok: bool,
}

fn load(c: &Common) -> Result<Job> {
    let (expr, spec, mut k_range, doc) = match (&c.expr, &c.input) {
        (Some(e), None) => (e.clone(), parse_term(e)?, KRange::Natural, Default::default()),
        (None, Some(path)) => {
            let src = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
            let d = parse_document(&src)?;
            (d.expr, d.spec, d.k_range, d.options)
        }
        _ => return Err(Error::InvalidInput("give exactly one of --expr or --input".into())),
    };
    if let Some(r) = &c.k_range {
        k_range = KRange::parse(r)?;
    }
    let verify = c.verify.or(doc.verify);
    if verify.is_some_and(|n| n < 1) {
        return Err(Error::InvalidInput("--verify needs N >= 1".into()));
    }
    let degree_cap = c.degree_cap.or(doc.degree_cap);
    if degree_cap == Some(0) {
        return Err(Error::InvalidInput("--degree-cap needs N >= 1".into()));
    }
    Ok(Job {
        expr,
        spec,
        k_range,
        opts: TelescopeOptions {
            symmetry: !c.no_symmetry && doc.symmetry.unwrap_or(true),
            degree_cap,
            parallel: true,
            certificate: c.certificate || doc.certificate.unwrap_or(false),
        },
        expanded: c.expanded || doc.expanded.unwrap_or(false),
        minimal: c.minimal || doc.minimal.unwrap_or(false),
        verify,
        timings: c.timings || doc.timings.unwrap_or(false),
    })
}

/// Annihilation of exact sums at `n = 1..n_max`, plus certificate identities when present.
pub fn verification(
    spec: &TermSpec,
    k_range: &KRange,
    t: &TelescoperResult,
    n_max: i64,
) -> Result<VerificationReport> {
    let need = t.l_expanded.high_exp().max(t.l_min.high_exp());
    let sums = sum_sequence(spec, k_range, 1, n_max + need)?;
    let mut rep = VerificationReport::default();
    for (name, op) in [("minimal recurrence", &t.l_min), ("telescoper L_left*R", &t.l_expanded)] {
        rep.push(check_annihilates(name, op, &sums.slice(1, n_max + op.high_exp()))?);
    }
    if let Some(c) = &t.certificates {
        let h = HTerm::new(spec);
        rep.push(CheckEntry::symbolic(
            "R(H) = p*H + Delta_k(c*H)",
            check_certificate_with_residual(t.r(), &c.r_cert, &h, &c.r_residual),
        ));
        rep.push(CheckEntry::symbolic(
            "L(H) = Delta_k(c*H)",
            check_certificate(&t.l_expanded, &c.telescoper, &h),
        ));
    }
    Ok(rep)
}

fn factored_text(t: &TelescoperResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "R = {}", t.r());
    let names: Vec<String> = (1..=t.components.len()).map(|i| format!("L_{i}")).collect();
    for (name, c) in names.iter().zip(&t.components) {
        let tag = if c.zero_sum { ", sums to zero" } else { "" };
        let _ = writeln!(s, "{name} [{}, dim {}, order {}{tag}] = {}", c.label, c.dim(), c.l.order(), c.l);
    }
    for d in &t.dropped {
        let _ = writeln!(s, "dropped component {} (dim {}): zero projection", d.label, d.dim);
    }
    let nonzero: Vec<&str> = names
        .iter()
        .zip(&t.components)
        .filter(|(_, c)| !c.zero_sum)
        .map(|(n, _)| n.as_str())
        .collect();
    let lclm = |xs: &[&str]| match xs {
        [] => "1".to_string(),
        [one] => one.to_string(),
        _ => format!("LCLM({})", xs.join(", ")),
    };
    let all: Vec<&str> = names.iter().map(String::as_str).collect();
    let _ = writeln!(s, "telescoper = {} * R  (order {})", lclm(&all), t.l_expanded.order());
    let _ = writeln!(s, "minimal recurrence = {} * R  (order {})", lclm(&nonzero), t.l_min.order());
    s
}

fn timing_text(t: &TelescoperResult) -> String {
    let mut s = String::new();
    for (stage, d) in &t.timings {
        let _ = writeln!(s, "time {stage:<14} {:.3}s", d.as_secs_f64());
    }
    s
}

fn cmd_telescope(job: &Job, force_verify: bool) -> Result<Output> {
    let t = telescope(&job.spec, &job.opts)?;
    let mut text = factored_text(&t);
    if job.minimal {
        let _ = writeln!(text, "L_min = {}", t.l_min);
    }
    if job.expanded {
        let _ = writeln!(text, "L_expanded = {}", t.l_expanded);
    }
    if let Some(c) = &t.certificates {
        let _ = writeln!(text, "certificate = {}", c.telescoper);
    }
    let mut json = t.to_json(job.expanded, job.timings);
    json["term"] = json!(job.expr);
    let n = job.verify.or(force_verify.then_some(20));
    let mut ok = true;
    if let Some(n) = n {
        let rep = verification(&job.spec, &job.k_range, &t, n)?;
        text.push_str(&rep.table());
        ok = rep.passed();
        json["verification"] = rep.to_json();
        json["verified"] = json!(ok);
    }
    if job.timings {
        text.push_str(&timing_text(&t));
    }
    Ok(Output { text, json, ok })
}

fn cmd_reduce(job: &Job) -> Result<Output> {
    let t0 = Instant::now();
    let (red, ctx) = ReductionContext::for_term(&job.spec, job.opts.degree_cap)?;
    let right = right_factor(&red, &ctx)?;
    let sn = ctx.sn_matrix()?;
    let auts = if job.opts.symmetry {
        engine::automorphisms_on(&ctx)?
    } else {
        Vec::new()
    };
    let basis = ctx.basis();
    let mut text = String::new();
    let _ = writeln!(text, "H0 = {}", red.h0.spec.to_text());
    let _ = writeln!(text, "R0 = {}", red.r0);
    let _ = writeln!(text, "dim N = {}  basis k^d*H0 for d in {:?}", basis.dim, basis.degrees);
    let _ = writeln!(text, "R = {}  ({} path)", right.r, if right.fast_path { "pole matching" } else { "general" });
    for c in &right.class_data {
        let _ = writeln!(text, "  class {}: S_n^{} S_k^{} fixes it, r = {}", c.factor, c.t, c.s, c.r);
    }
    let _ = writeln!(text, "R(m) = ({}) * H0 mod Delta_k", right.residual);
    for (j, row) in sn.a.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(text, "A[{j}] = [{}]", cells.join(", "));
    }
    let names: Vec<String> = auts.iter().map(|(a, _)| a.kind.name()).collect();
    let _ = writeln!(text, "automorphisms: {}", if names.is_empty() { "none".into() } else { names.join(", ") });
    let mut json = json!({
        "term": job.expr,
        "H0": red.h0.spec.to_text(),
        "R0": red.r0.to_text(),
        "dim": basis.dim,
        "basis_degrees": basis.degrees,
        "right_factor": right.to_json(),
        "residual": right.residual.to_string(),
        "sn_matrix": sn.a.iter().map(|r| r.iter().map(|x| x.to_text()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "automorphisms": names,
    });
    let mut ok = true;
    if job.opts.certificate {
        let (residual, cert) = engine::r_certificate(&red, &ctx, &right.r)?;
        let pass = check_certificate_with_residual(&right.r, &cert, &HTerm::new(&job.spec), &residual);
        let _ = writeln!(text, "R certificate = {cert}  ({})", if pass { "checked" } else { "FAILED" });
        json["R_certificate"] = json!(cert.to_text());
        json["R_residual"] = json!(residual.to_text());
        json["R_certificate_ok"] = json!(pass);
        ok = pass;
    }
    if job.timings {
        let secs = t0.elapsed().as_secs_f64();
        let _ = writeln!(text, "time total {secs:.3}s");
        json["seconds"] = json!(secs);
    }
    Ok(Output { text, json, ok })
}

fn cmd_guess(job: &Job, max_order: usize, max_degree: usize) -> Result<Output> {
    let len = required_window(max_order, max_degree) as i64;
    let sums = sum_sequence(&job.spec, &job.k_range, 1, len)?;
    let g = guess_recurrence(&sums, max_order, max_degree)?;
    let mut json = json!({
        "term": job.expr,
        "window": [1, len],
        "max_order": max_order,
        "max_degree": max_degree,
    });
    let text = match &g {
        Some(op) => {
            json["operator"] = json!(op.to_text());
            json["order"] = json!(op.order());
            json["degree"] = json!(op.degree_in_n());
            format!("guess = {op}\norder {}  degree {}  window n=1..{len}\n", op.order(), op.degree_in_n())
        }
        None => {
            json["operator"] = Value::Null;
            format!("no recurrence of order <= {max_order} and degree <= {max_degree} on n=1..{len}\n")
        }
    };
    Ok(Output { text, json, ok: true })
}

const SUITE: &[&str] = &[
    "binomial(n,k)^7/(2*n+3*k)",
    "binomial(3*n,3*k)^2*binomial(3*n,3*k+1)",
    "binomial(n,k)",
    "binomial(n,k)^2",
    "binomial(n,k)^3",
    "binomial(n,k)^4",
    "binomial(n,k)^5",
    "binomial(n,k)^6",
];

fn bench_one(expr: &str, spec: &TermSpec, opts: &TelescopeOptions, timings: bool) -> Result<(String, Value)> {
    let t0 = Instant::now();
    let t = telescope(spec, opts)?;
    let secs = t0.elapsed().as_secs_f64();
    let (fb, eb) = (t.factored_bytes(), t.expanded_bytes());
    let ratio = fb as f64 / eb.max(1) as f64;
    let mut text = format!(
        "{expr}\n  dim {}  R {}  components {:?}  L_left {}  telescoper {}  L_min {}\n  bytes factored {fb}  expanded {eb}  ratio {ratio:.3}  time {secs:.3}s\n",
        t.dim,
        t.r().order(),
        t.component_orders(),
        t.l_left.order(),
        t.l_expanded.order(),
        t.l_min.order(),
    );
    if timings {
        for line in timing_text(&t).lines() {
            let _ = writeln!(text, "  {line}");
        }
    }
    let mut v = t.to_json(false, timings);
    v["term"] = json!(expr);
    v["seconds"] = json!(secs);
    v["size_ratio"] = json!(ratio);
    // Operators are available from `telescope`; keep the bench record small.
    for key in ["R", "R0", "L_left", "L_min"] {
        v.as_object_mut().unwrap().remove(key);
    }
    if let Some(cs) = v["components"].as_array_mut() {
        for c in cs {
            c.as_object_mut().unwrap().remove("L");
        }
    }
    Ok((text, v))
}

fn cmd_bench(c: &Common) -> Result<Output> {
    let jobs: Vec<Job> = if c.expr.is_some() || c.input.is_some() {
        vec![load(c)?]
    } else {
        SUITE
            .iter()
            .map(|e| load(&Common { expr: Some(e.to_string()), ..c.clone() }))
            .collect::<Result<_>>()?
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for j in &jobs {
        let (t, v) = bench_one(&j.expr, &j.spec, &j.opts, j.timings)?;
        text.push_str(&t);
        rows.push(v);
    }
    Ok(Output {
        text,
        json: json!({ "runs": rows }),
        ok: true,
    })
}

fn dispatch(cmd: &Cmd) -> Result<Output> {
    match cmd {
        Cmd::Telescope(c) => cmd_telescope(&load(c)?, false),
        Cmd::Verify(c) => cmd_telescope(&load(c)?, true),
        Cmd::Reduce(c) => cmd_reduce(&load(c)?),
        Cmd::Guess(g) => cmd_guess(&load(&g.common)?, g.max_order, g.max_degree),
        Cmd::Bench(c) => cmd_bench(c),
    }
}

fn common(cmd: &Cmd) -> &Common {
    match cmd {
        Cmd::Telescope(c) | Cmd::Verify(c) | Cmd::Reduce(c) | Cmd::Bench(c) => c,
        Cmd::Guess(g) => &g.common,
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_unsupported() || matches!(e.root(), Error::PoleAtPoint { .. } | Error::InsufficientWindow { .. }) {
        EXIT_UNSUPPORTED
    } else if e.is_cap() {
        EXIT_CAP
    } else {
        EXIT_VERIFY
    }
}

pub fn error_json(e: &Error) -> Value {
    let mut v = json!({
        "kind": e.kind(),
        "message": e.root().to_string(),
        "exit_code": exit_code(e),
    });
    if let Some(s) = e.stage() {
        v["stage"] = json!(s);
    }
    if let Error::Parse { pos, .. } = e.root() {
        v["position"] = json!(pos);
    }
    json!({ "error": v })
}

fn wants_json(argv: &[OsString]) -> bool {
    argv.windows(2).any(|w| w[0] == "--format" && w[1] == "json") || argv.iter().any(|a| a == "--format=json")
}

fn emit(s: &str, out: Option<&PathBuf>) -> i32 {
    match out {
        Some(p) => match std::fs::write(p, s) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", p.display());
                EXIT_UNSUPPORTED
            }
        },
        None => {
            print!("{s}");
            EXIT_OK
        }
    }
}

/// Run the command line `argv` (program name first) and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            if wants_json(&argv) {
                let v = json!({"error": {"kind": "usage", "message": e.to_string(), "exit_code": EXIT_UNSUPPORTED}});
                println!("{v}");
            } else {
                eprint!("{e}");
            }
            return EXIT_UNSUPPORTED;
        }
    };
    let c = common(&cli.cmd);
    let json_out = c.format == Format::Json;
    match dispatch(&cli.cmd) {
        Ok(o) => {
            let body = if json_out {
                format!("{}\n", serde_json::to_string_pretty(&o.json).expect("json"))
            } else {
                o.text
            };
            let code = emit(&body, c.out.as_ref());
            if code != EXIT_OK {
                code
            } else if o.ok {
                EXIT_OK
            } else {
                EXIT_VERIFY
            }
        }
        Err(e) => {
            if json_out {
                println!("{}", error_json(&e));
            } else {
                eprintln!("error: {e}");
            }
            exit_code(&e)
        }
    }
}
