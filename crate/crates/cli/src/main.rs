//! `schubert`: minimality analysis of real matrix Schubert varieties.

mod report;

use std::io::{ErrorKind, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use schubert_core::linalg::{format_rational, parse_rational};
use schubert_core::selfcheck::{self, SelfcheckConfig};
use schubert_core::{PartialPermutation, Rational};

use report::{Evidence, Failure, Options, Report, TOOL_VERSION};

#[derive(Parser)]
#[command(
    name = "schubert",
    version,
    about = "Decide and certify minimality of real matrix Schubert varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Diagram, vexillarity, classification and verdict.
    Analyze(InputArgs),
    /// Non-minimality certificate for a non-vexillary input.
    Witness(InputArgs),
    /// Stationarity at seeded regular points plus the applicable suites.
    Verify(InputArgs),
    /// Product decomposition of a vexillary input with (1,1) in its diagram.
    Decompose(InputArgs),
    /// Exhaustive sweeps over all inputs up to a size bound.
    Selfcheck(SelfcheckArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Matrix file: rows of 0/1 entries separated by spaces; `-` reads stdin.
    file: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    /// Emit the JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Regular points to sample.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Witness parameters y1,y2,y3 as p/q.
    #[arg(long, default_value = "1/2,1/3,2", allow_hyphen_values = true)]
    y: String,
}

#[derive(Args)]
struct SelfcheckArgs {
    /// Largest m, n and permutation size swept.
    #[arg(long, default_value_t = 3)]
    max_size: usize,
    #[arg(long)]
    json: bool,
    /// Regular points per Gr2 shape.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Selfcheck(args) => selfcheck(args),
        Command::Analyze(args) => emit(&args, report::analyze),
        Command::Witness(args) => emit(&args, |w, _, y| report::witness(w, y)),
        Command::Verify(args) => emit(&args, report::verify),
        Command::Decompose(args) => emit(&args, |w, o, _| report::decomposition(w, o)),
    }
}

fn emit(
    args: &InputArgs,
    build: impl FnOnce(&PartialPermutation, Options, &[Rational; 3]) -> Result<Report, Failure>,
) -> Result<u8, Failure> {
    let w = read_input(&args.file)?;
    let y = parse_y(&args.common.y)?;
    let opts = Options { samples: args.common.samples, seed: args.common.seed };
    let report = build(&w, opts, &y)?;
    if args.common.json {
        print_json(&report)?;
    } else {
        write_stdout(&render(&report))?;
    }
    Ok(0)
}

fn read_input(path: &Path) -> Result<PartialPermutation, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    PartialPermutation::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_y(text: &str) -> Result<[Rational; 3], Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(Failure::Input(format!("--y expects three comma-separated values, got {text:?}")));
    };
    let parse = |s: &str| parse_rational(s).map_err(|e| Failure::Input(format!("--y: {e}")));
    let y = [parse(a)?, parse(b)?, parse(c)?];
    if y.iter().any(|v| *v == Rational::from_integer(0.into())) {
        return Err(Failure::Input("--y: witness parameters must be nonzero".into()));
    }
    Ok(y)
}

fn print_json(value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    write_stdout(&format!("{text}\n"))
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn write_stdout(text: &str) -> Result<(), Failure> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(Failure::Internal(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render(r: &Report) -> String {
    let c = &r.classification;
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("input: {}x{}  {}", r.input.rows(), r.input.cols(), r.input.to_inline()));
    let cells: Vec<String> = r.diagram.cells.iter().map(ToString::to_string).collect();
    if cells.is_empty() {
        line("diagram: empty".to_string());
    } else {
        line(format!(
            "diagram: {} cells in {} components: {}",
            cells.len(),
            r.diagram.components.len(),
            cells.join(" ")
        ));
    }
    line(format!(
        "vexillary: {} (pattern {}, restriction {})",
        yes_no(c.vexillary),
        yes_no(c.vexillary_pattern),
        yes_no(c.vexillary_restriction)
    ));
    line(format!(
        "classes: Gr2 {}, ~Gr2 {}, decomposable {}",
        yes_no(c.in_gr2),
        yes_no(c.in_gr2_tilde),
        yes_no(c.decomposable)
    ));
    line(format!("verdict: {}", r.verdict));
    match &r.evidence {
        Evidence::Witness { certificate } => render_certificate(&mut line, certificate),
        Evidence::Sampling(s) => {
            if let Some(p) = &s.proof_path {
                line(format!("proof path: {p}"));
            }
            line(format!("stationary at {}/{} sampled points (seed {})", s.stationary, s.samples, s.seed));
            if let Some(note) = &s.note {
                line(format!("note: {note}"));
            }
            if let Some(g) = &s.gr2 {
                line(format!(
                    "Gr2 suites: {} ({} points, stationary {})",
                    if g.passed() { "pass" } else { "FAIL" },
                    g.samples,
                    g.stationary
                ));
            }
            if let Some(d) = &s.decomposition {
                render_decomposition(&mut line, d);
            }
            if let Some(cert) = &s.certificate {
                render_certificate(&mut line, cert);
            }
        }
        Evidence::Decomposition(d) => render_decomposition(&mut line, d),
    }
    out
}

fn render_certificate(line: &mut impl FnMut(String), cert: &schubert_core::witness::WitnessCertificate) {
    let y: Vec<String> = cert.y.iter().map(format_rational).collect();
    line(format!(
        "witness: cell {}, restriction {}, L = {}, partner {}, y = ({})",
        cert.cell,
        cert.restricted_perm,
        cert.descent,
        cert.partner,
        y.join(", ")
    ));
    line(format!(
        "trace: {}  (det G1 = {}, checks {})",
        format_rational(&cert.numeric_trace),
        format_rational(&cert.gram_block_det),
        if cert.checks.all() { "pass" } else { "FAIL" }
    ));
}

fn render_decomposition(line: &mut impl FnMut(String), d: &report::DecompositionEvidence) {
    let dec = &d.decomposition;
    line(format!("decomposition: zero block of {} cells, R^{}", dec.zero_cells.len(), dec.free_count()));
    for (f, c) in dec.factors.iter().zip(&d.factors) {
        line(format!(
            "  factor rows {:?} cols {:?}: {}  (~Gr2 {})",
            f.rows,
            f.cols,
            f.w.to_inline(),
            yes_no(c.in_gr2_tilde)
        ));
    }
    line(format!(
        "composite: stationary at {}/{} assembled points, concatenation {}",
        d.composite.stationary,
        d.composite.samples.len(),
        if d.composite.passed() { "holds" } else { "FAILS" }
    ));
}

fn selfcheck(args: SelfcheckArgs) -> Result<u8, Failure> {
    let config = SelfcheckConfig { max_size: args.max_size, seed: args.seed, gr2_samples: args.samples };
    let report = selfcheck::run(&config);
    if args.json {
        #[derive(Serialize)]
        struct Wire<'a> {
            #[serde(flatten)]
            report: &'a selfcheck::SelfcheckReport,
            passed: bool,
            tool_version: &'static str,
        }
        print_json(&Wire { report: &report, passed: report.passed(), tool_version: TOOL_VERSION })?;
    } else {
        let mut text = String::new();
        for s in &report.suites {
            let status = if s.passed() { "PASS" } else { "FAIL" };
            text.push_str(&format!("{status} {} ({} cases)\n", s.name, s.cases));
            for f in &s.failures {
                text.push_str(&format!("  {f}\n"));
            }
        }
        text.push_str(if report.passed() { "all suites pass\n" } else { "some suites FAIL\n" });
        write_stdout(&text)?;
    }
    Ok(if report.passed() { 0 } else { 3 })
}
