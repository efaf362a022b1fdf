//! Command-line front end.
//!
//! Exit codes: 0 success (and `above` for `decide`), 3 `below`, 4 `abstain`,
//! 1 usage error, 2 data error (unreadable or invalid input files, dimension
//! mismatches, failed numerical checks).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::array::{expectation, Estimation};
use crate::decision::{decide_threshold, DecisionParams, Verdict};
use crate::domain::{domain_sum_circuit, tilted_line_sum_via_cat_map, PhaseDomain, Sign};
use crate::error::Error;
use crate::io::{self, InputDigest, RunReport, REPORT_FORMAT_VERSION};
use crate::program::{compile_program, hermitian_split};
use crate::scattering::{trace_oracle, Mode};
use crate::tolerance::Tolerances;
use crate::wigner::{general_line_sum, line_class, line_family, translation_probabilities, wigner, wigner_circuit};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_BELOW: i32 = 3;
pub const EXIT_ABSTAIN: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "qpga", version, about = "Programmable quantum gate array simulator")]
pub struct Cli {
    /// Override construction and circuit tolerances.
    #[arg(long, global = true, value_name = "TOL")]
    pub tol: Option<f64>,

    /// Append the run report as one JSON line to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,

    /// Print the run report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate Tr(ρO) with the programmable array.
    Expect(ExpectArgs),
    /// Emit the discrete Wigner function on the 2N×2N grid.
    Wigner(WignerArgs),
    /// Sum the Wigner function along the line a·p − b·q ≡ c (mod 2N).
    Linesum(LinesumArgs),
    /// Decide whether a domain sum exceeds a threshold.
    Decide(DecideArgs),
    /// Compile an operator into a program state file.
    CompileProgram(CompileArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Debug, Args)]
pub struct ExpectArgs {
    pub state: PathBuf,
    pub operator: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    /// Required in sampled mode.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WignerMethod {
    Direct,
    Circuit,
    Both,
}

#[derive(Debug, Args)]
pub struct WignerArgs {
    pub state: PathBuf,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "direct")]
    pub method: WignerMethod,
}

#[derive(Debug, Args)]
pub struct LinesumArgs {
    pub state: PathBuf,
    #[arg(long)]
    pub b: i64,
    #[arg(long)]
    pub c: i64,
    #[arg(long, default_value_t = 1)]
    pub a: i64,
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    pub state: PathBuf,
    pub domain: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub threshold: f64,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Part {
    Hermitian,
    AntiHermitian,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    pub operator: PathBuf,
    #[arg(long, value_enum, default_value = "hermitian")]
    pub part: Part,
    /// Program file destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(Error::Io(e))
    }
}

struct Outcome {
    report: RunReport,
    text: String,
    code: i32,
}

pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    run(cli)
}

pub fn run(cli: Cli) -> i32 {
    let command_line: Vec<String> = std::env::args().collect();
    let tol = match cli.tol {
        Some(t) if !(t.is_finite() && t > 0.0) => {
            eprintln!("error: --tol must be positive, got {t}");
            return EXIT_USAGE;
        }
        Some(t) => Tolerances::with_override(t),
        None => Tolerances::DEFAULT,
    };
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Expect(args) => cmd_expect(args, &tol),
        Command::Wigner(args) => cmd_wigner(args, &tol),
        Command::Linesum(args) => cmd_linesum(args, &tol),
        Command::Decide(args) => cmd_decide(args, &tol),
        Command::CompileProgram(args) => cmd_compile(args, &tol),
    };
    let mut outcome = match outcome {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            return EXIT_DATA;
        }
    };
    outcome.report.command = command_line;
    outcome.report.duration_ms = start.elapsed().as_secs_f64() * 1e3;
    if let Some(path) = &cli.report {
        if let Err(e) = outcome.report.append_to(path) {
            eprintln!("error: cannot append report: {e}");
            return EXIT_DATA;
        }
    }
    let mut stdout = std::io::stdout().lock();
    let printed = if cli.json {
        writeln!(stdout, "{}", outcome.report.to_json())
    } else {
        write!(stdout, "{}", outcome.text)
    };
    if printed.is_err() {
        return EXIT_DATA;
    }
    outcome.code
}

fn report(
    inputs: &[&Path],
    mode: Option<Mode>,
    seed: Option<u64>,
    shots: Option<u64>,
    results: serde_json::Value,
) -> Result<RunReport, Failure> {
    let inputs = inputs
        .iter()
        .map(|p| InputDigest::of_file(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RunReport {
        format_version: REPORT_FORMAT_VERSION,
        command: Vec::new(),
        inputs,
        mode,
        seed,
        shots,
        results,
        duration_ms: 0.0,
    })
}

fn cmd_expect(args: &ExpectArgs, tol: &Tolerances) -> Result<Outcome, Failure> {
    let estimation = match (args.mode, args.seed) {
        (ModeArg::Exact, _) => Estimation::Exact,
        (ModeArg::Sampled, None) => return Err(Failure::Usage("sampled mode requires --seed".into())),
        (ModeArg::Sampled, Some(_)) if args.shots == 0 => {
            return Err(Failure::Usage("--shots must be at least 1".into()))
        }
        (ModeArg::Sampled, Some(seed)) => Estimation::Sampled {
            shots: args.shots,
            seed,
        },
    };
    let rho = io::read_state(&args.state, tol)?;
    let o = io::read_operator(&args.operator)?;
    let e = expectation(&rho, &o, estimation, tol)?;
    let oracle = trace_oracle(&rho, &o.to_matrix())?;

    let mut text = format!("re        {}\nim        {}\n", e.re, e.im);
    if e.mode == Mode::Sampled {
        text += &format!(
            "stderr_re {}\nstderr_im {}\nshots     {} per part\n",
            e.stderr_re, e.stderr_im, e.shots
        );
    }
    text += &format!("S_h       {}\nS_k       {}\n", e.scale_h(), e.scale_k());
    if e.degenerate {
        text += "note: operator has no nonzero expansion coefficients; value is exactly 0\n";
    }
    text += &format!("trace     {} {}  (direct Tr(rho O))\n", oracle.re, oracle.im);

    let results = json!({
        "re": e.re,
        "im": e.im,
        "stderr_re": e.stderr_re,
        "stderr_im": e.stderr_im,
        "scale_h": e.scale_h(),
        "scale_k": e.scale_k(),
        "degenerate": e.degenerate,
        "hermitian": e.hermitian,
        "anti_hermitian": e.anti_hermitian,
        "oracle": {"re": oracle.re, "im": oracle.im},
    });
    let shots = (e.mode == Mode::Sampled).then_some(e.shots);
    Ok(Outcome {
        report: report(&[&args.state, &args.operator], Some(e.mode), e.seed, shots, results)?,
        text,
        code: EXIT_OK,
    })
}

fn cmd_wigner(args: &WignerArgs, tol: &Tolerances) -> Result<Outcome, Failure> {
    let rho = io::read_state(&args.state, tol)?;
    let n = rho.dim();
    let (grid, discrepancy) = match args.method {
        WignerMethod::Direct => (wigner(&rho), None),
        WignerMethod::Circuit => (wigner_circuit(&rho)?, None),
        WignerMethod::Both => {
            let direct = wigner(&rho);
            let circuit = wigner_circuit(&rho)?;
            let d = direct.max_abs_diff(&circuit);
            (direct, Some(d))
        }
    };

    let side = 2 * n as i64;
    let mut families = Vec::new();
    let mut text = String::new();
    let mut push_family = |a: i64, b: i64| {
        let lines = line_family(&grid, a, b);
        let total: f64 = lines.iter().sum();
        text += &format!("family a={a} b={b}: sum {total}\n");
        families.push(json!({"a": a, "b": b, "sum": total, "lines": lines}));
    };
    push_family(0, 1);
    for b in 0..side {
        push_family(1, b);
    }

    match &args.out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| {
                Error::Io(std::io::Error::new(
                    e.kind(),
                    format!("cannot write {}: {e}", path.display()),
                ))
            })?;
            io::write_wigner_csv(&grid, std::io::BufWriter::new(file))?;
        }
        None => {
            let mut buf = Vec::new();
            io::write_wigner_csv(&grid, &mut buf)?;
            text = String::from_utf8(buf).expect("csv is utf-8") + &text;
        }
    }
    if let Some(d) = discrepancy {
        text += &format!("max |direct - circuit| {d:e}\n");
    }

    let results = json!({
        "n": n,
        "method": format!("{:?}", args.method).to_lowercase(),
        "convention": io::WIGNER_CONVENTION,
        "total": grid.total(),
        "max_imaginary": grid.max_imaginary(),
        "max_method_discrepancy": discrepancy,
        "line_families": families,
        "out": args.out.as_ref().map(|p| p.display().to_string()),
    });
    Ok(Outcome {
        report: report(&[&args.state], Some(Mode::Exact), None, None, results)?,
        text,
        code: EXIT_OK,
    })
}

fn cmd_linesum(args: &LinesumArgs, tol: &Tolerances) -> Result<Outcome, Failure> {
    let rho = io::read_state(&args.state, tol)?;
    let n = rho.dim();
    let side = 2 * n as i64;
    let (a, b, c) = (
        args.a.rem_euclid(side),
        args.b.rem_euclid(side),
        args.c.rem_euclid(side),
    );
    if a % n as i64 == 0 && b % n as i64 == 0 {
        return Err(Failure::Usage(format!(
            "(a, b) = ({a}, {b}) does not define a line family for N={n}"
        )));
    }

    let direct = general_line_sum(&wigner(&rho), a, b, c);
    let projector = translation_probabilities(&rho, b, a, tol)?[line_class(n, c)];
    let points: Vec<(usize, usize, Sign)> = (0..side)
        .flat_map(|q| (0..side).map(move |p| (q, p)))
        .filter(|&(q, p)| (a * p - b * q - c).rem_euclid(side) == 0)
        .map(|(q, p)| (q as usize, p as usize, Sign::Plus))
        .collect();
    let circuit = if points.is_empty() {
        0.0
    } else {
        domain_sum_circuit(&rho, &PhaseDomain::custom(n, points)?)?.raw
    };
    let cat_map = if a == 1 {
        Some(tilted_line_sum_via_cat_map(&rho, b, c, tol)?)
    } else {
        None
    };

    let mut text = format!(
        "line {a}*p - {b}*q = {c} (mod {side})\ndirect    {direct}\nprojector {projector}\ncircuit   {circuit}\n"
    );
    if let Some(v) = cat_map {
        text += &format!("cat-map   {v}\n");
    }
    let results = json!({
        "a": a,
        "b": b,
        "c": c,
        "direct": direct,
        "projector": projector,
        "circuit": circuit,
        "cat_map": cat_map,
        "eigenvalue_class": line_class(n, c),
    });
    Ok(Outcome {
        report: report(&[&args.state], Some(Mode::Exact), None, None, results)?,
        text,
        code: EXIT_OK,
    })
}

fn cmd_decide(args: &DecideArgs, tol: &Tolerances) -> Result<Outcome, Failure> {
    let seed = args
        .seed
        .ok_or_else(|| Failure::Usage("decide samples shots and requires --seed".into()))?;
    let params = DecisionParams {
        threshold: args.threshold,
        epsilon: args.epsilon,
        delta: args.delta,
    };
    params.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let rho = io::read_state(&args.state, tol)?;
    let domain = io::read_domain(&args.domain)?;
    if domain.n() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: domain.n(),
        }
        .into());
    }
    let d = decide_threshold(&rho, &domain, &params, seed)?;
    let verdict = match d.verdict {
        Verdict::Above => "above",
        Verdict::Below => "below",
        Verdict::Abstain => "abstain",
    };
    let text = format!(
        "verdict   {verdict}\nestimate  {}  (2N * sum of sign*W over the domain)\ninterval  [{}, {}]\nshots     {}\nscale     {}\n",
        d.estimate, d.interval.0, d.interval.1, d.shots, d.scale
    );
    let results = json!({
        "verdict": verdict,
        "estimate": d.estimate,
        "raw_domain_sum": d.estimate / (2 * rho.dim()) as f64,
        "interval": [d.interval.0, d.interval.1],
        "stderr": d.stderr,
        "scale": d.scale,
        "threshold": params.threshold,
        "epsilon": params.epsilon,
        "delta": params.delta,
        "domain": domain.descriptor().to_string(),
        "domain_size": domain.len(),
    });
    let code = match d.verdict {
        Verdict::Above => EXIT_OK,
        Verdict::Below => EXIT_BELOW,
        Verdict::Abstain => EXIT_ABSTAIN,
    };
    Ok(Outcome {
        report: report(
            &[&args.state, &args.domain],
            Some(Mode::Sampled),
            Some(seed),
            Some(d.shots),
            results,
        )?,
        text,
        code,
    })
}

fn cmd_compile(args: &CompileArgs, tol: &Tolerances) -> Result<Outcome, Failure> {
    let o = io::read_operator(&args.operator)?;
    let (h, k) = hermitian_split(&o)?;
    let coeffs = match args.part {
        Part::Hermitian => h,
        Part::AntiHermitian => k,
    };
    let ps = compile_program(&coeffs, tol)?;
    let program = io::format_program(&ps);
    let text = match &args.out {
        Some(path) => {
            std::fs::write(path, &program)?;
            format!(
                "wrote {} terms, scale {}, to {}\n",
                ps.terms().len(),
                ps.scale(),
                path.display()
            )
        }
        None => program,
    };
    let results = json!({
        "part": match args.part {
            Part::Hermitian => "hermitian",
            Part::AntiHermitian => "anti-hermitian",
        },
        "scale": ps.scale(),
        "terms": ps.terms(),
        "out": args.out.as_ref().map(|p| p.display().to_string()),
    });
    Ok(Outcome {
        report: report(&[&args.operator], None, None, None, results)?,
        text,
        code: EXIT_OK,
    })
}
