//! `wtower`: batch front end for the exact operator engine.
//!
//! Exit codes: 0 on success, 1 when a verification suite reports a failed
//! check, 2 on usage or parameter errors.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wtower::basis::{matrix_in_basis, Basis};
use wtower::beta_ensemble::{verify_virasoro, verify_w0_constraint, verify_ward_cubic, Ensemble, MomentEngine};
use wtower::class_algebra::{verify_cutjoin_intertwining, verify_hurwitz, verify_jm, verify_ladder};
use wtower::hilb::{rimhook_graph, verify_heisenberg, EquivParams};
use wtower::jack::verify_jack_diagonality;
use wtower::ops::{self, equal_up_to};
use wtower::rational::{parse_q, Q};
use wtower::report::{Check, Report};
use wtower::{Error, Operator, SymFun};

use output::{Format, Meta};

fn rational(s: &str) -> Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "wtower", version, about = "Exact cut-and-join, Virasoro and fixed-point operator computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OpName {
    #[value(name = "W2")]
    W2,
    #[value(name = "C")]
    C,
    #[value(name = "J")]
    J,
    #[value(name = "D")]
    D,
    #[value(name = "E")]
    E,
    #[value(name = "E1")]
    E1,
    #[value(name = "W0beta")]
    W0beta,
    #[value(name = "W0ward")]
    W0ward,
    #[value(name = "Ln")]
    Ln,
    #[value(name = "Wn")]
    Wn,
}

/// Parameters shared by operator-building subcommands.
#[derive(clap::Args, Debug, Clone)]
struct OpArgs {
    #[arg(long, value_enum, ignore_case = true)]
    op: OpName,
    #[arg(long, value_parser = rational, default_value = "1")]
    beta: Q,
    #[arg(long = "N", value_parser = rational, default_value = "0")]
    big_n: Q,
    /// Mode index for `Ln`, level for `Wn`.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    index: i64,
    /// Append the Gaussian shift (`W0beta`, `W0ward`, `Ln`).
    #[arg(long)]
    shifted: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Coords {
    P,
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Cutjoin,
    Ladder,
    Jm,
    Virasoro,
    W0constraint,
    Jack,
    Heisenberg,
    Hurwitz,
    Hierarchy,
}

/// Suite parameters; each suite reads the ones it needs.
#[derive(clap::Args, Debug, Clone)]
struct SuiteArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, value_parser = rational)]
    beta: Option<Q>,
    #[arg(long = "N")]
    big_n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, value_parser = rational)]
    e1: Option<Q>,
    #[arg(long, value_parser = rational)]
    e2: Option<Q>,
    #[arg(long)]
    window: Option<usize>,
    /// Use the unshifted constraints, or the unnormalized map for cutjoin.
    #[arg(long)]
    raw: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply an operator to a symmetric function such as "3/2*p[2,1] + p[4]".
    Apply {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        input: String,
        /// Print the image in power sums (p) or in v = p/z coordinates.
        #[arg(long, value_enum, default_value = "p")]
        coords: Coords,
        /// Degree window for `Wn` (defaults to the input degree).
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Matrix of a homogeneous operator on degree n, rows = source.
    Matrix {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        n: usize,
        /// p, v, jack:<alpha> or fixed:<e1>,<e2>.
        #[arg(long, default_value = "p")]
        basis: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite; exit 1 if any check fails.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        params: SuiteArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Rim-hook cut/join graph of W2 on degree n.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Term list of the hierarchy operator W(n), exact on inputs up to the window.
    Hierarchy {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        window: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Moment table of the Gaussian beta-ensemble up to weight d.
    Moments {
        #[arg(long = "N")]
        big_n: usize,
        #[arg(long, value_parser = rational)]
        beta: Q,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Failures that map to exit code 2.
#[derive(Debug)]
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

impl From<std::io::Error> for Usage {
    fn from(e: std::io::Error) -> Self {
        Usage(format!("cannot write output: {e}"))
    }
}

fn build_operator(args: &OpArgs, window: usize) -> Result<Operator, Usage> {
    Ok(match args.op {
        OpName::W2 => ops::cut_and_join(),
        OpName::C => ops::cut(),
        OpName::J => ops::join(),
        OpName::D => ops::diag_d(),
        OpName::E => ops::grading(),
        OpName::E1 => ops::ladder(),
        OpName::W0beta => ops::w0_beta(&args.beta, &args.big_n, args.shifted),
        OpName::W0ward => ops::w0_from_ward(&args.beta, &args.big_n, args.shifted),
        OpName::Ln => ops::virasoro(args.index, &args.beta, &args.big_n, args.shifted)?,
        OpName::Wn => {
            let level = usize::try_from(args.index)
                .map_err(|_| Usage(format!("Wn needs a level >= 1, got {}", args.index)))?;
            ops::hierarchy(level, window)?
        }
    })
}

fn op_meta(meta: Meta, args: &OpArgs) -> Meta {
    let meta = meta.with("op", format!("{:?}", args.op));
    match args.op {
        OpName::W0beta | OpName::W0ward => meta
            .with("beta", &args.beta)
            .with("N", &args.big_n)
            .with("shifted", args.shifted),
        OpName::Ln => meta
            .with("index", args.index)
            .with("beta", &args.beta)
            .with("N", &args.big_n)
            .with("shifted", args.shifted),
        OpName::Wn => meta.with("index", args.index),
        _ => meta,
    }
}

fn need<T>(value: Option<T>, name: &str, suite: Suite) -> Result<T, Usage> {
    value.ok_or_else(|| Usage(format!("suite {suite:?} needs --{name}")))
}

fn hierarchy_report(n: usize, window: usize) -> Result<Report, Usage> {
    let mut report = Report::new("hierarchy").param("n", n).param("window", window);
    let w1 = ops::hierarchy_base(window)?;
    report.push(Check::compare(
        "[W2, E1] equals the closed form of W(1)",
        &true,
        &equal_up_to(&w1, &ops::hierarchy_base_closed_form(), window),
    ));
    for k in 1..=n {
        let w = ops::hierarchy(k, window)?;
        let shifts: Vec<i64> = w.instantiate(window).iter().map(|t| t.degree_shift()).collect();
        let ok = !shifts.is_empty() && shifts.iter().all(|&s| s == k as i64);
        report.push(Check::compare(format!("deg W({k}) = {k}"), &true, &ok));
    }
    Ok(report)
}

fn suite_meta(mut meta: Meta, a: &SuiteArgs) -> Meta {
    let optional = [
        ("n", a.n.map(|x| x.to_string())),
        ("r", a.r.map(|x| x.to_string())),
        ("beta", a.beta.as_ref().map(ToString::to_string)),
        ("N", a.big_n.map(|x| x.to_string())),
        ("d", a.d.map(|x| x.to_string())),
        ("e1", a.e1.as_ref().map(ToString::to_string)),
        ("e2", a.e2.as_ref().map(ToString::to_string)),
        ("window", a.window.map(|x| x.to_string())),
    ];
    for (key, value) in optional {
        if let Some(v) = value {
            meta = meta.with(key, v);
        }
    }
    meta.with("raw", a.raw)
}

fn ensemble(a: &SuiteArgs, suite: Suite) -> Result<Ensemble, Usage> {
    let beta = need(a.beta.clone(), "beta", suite)?;
    Ok(Ensemble::from_rational(need(a.big_n, "N", suite)?, &beta)?)
}

fn run_suite(suite: Suite, a: &SuiteArgs) -> Result<Report, Usage> {
    Ok(match suite {
        Suite::Cutjoin => verify_cutjoin_intertwining(need(a.n, "n", suite)?, !a.raw)?,
        Suite::Ladder => verify_ladder(need(a.n, "n", suite)?)?,
        Suite::Jm => verify_jm(need(a.n, "n", suite)?)?,
        Suite::Virasoro => {
            verify_virasoro(ensemble(a, suite)?, a.d.unwrap_or(8), -1..=4, !a.raw)?.into_report("virasoro")
        }
        Suite::W0constraint => {
            let e = ensemble(a, suite)?;
            let d = a.d.unwrap_or(8);
            let mut report = verify_w0_constraint(e, d, !a.raw)?.into_report("w0constraint");
            let ward = verify_ward_cubic(e, d, !a.raw)?.into_report("w0constraint");
            report.data = Some(serde_json::json!({
                "diagnostic_closed_form_of_half_sum_pn_Ln": ward.to_json()["checks"],
            }));
            report
        }
        Suite::Jack => {
            let beta = need(a.beta.clone(), "beta", suite)?;
            verify_jack_diagonality(need(a.n, "n", suite)?, &beta)?
        }
        Suite::Heisenberg => {
            let params = EquivParams::new(
                need(a.e1.clone(), "e1", suite)?,
                need(a.e2.clone(), "e2", suite)?,
            )?;
            verify_heisenberg(&params, a.n.unwrap_or(4))?
        }
        Suite::Hurwitz => verify_hurwitz(need(a.n, "n", suite)?, need(a.r, "r", suite)?)?,
        Suite::Hierarchy => hierarchy_report(a.n.unwrap_or(4), a.window.unwrap_or(6))?,
    })
}

fn execute(cli: Cli) -> Result<bool, Usage> {
    match cli.command {
        Command::Apply {
            op,
            input,
            coords,
            window,
            format,
            output,
        } => {
            let f: SymFun = input.parse()?;
            let window = window.unwrap_or_else(|| f.degrees().last().copied().unwrap_or(0));
            let operator = build_operator(&op, window)?;
            let image = operator.apply(&f)?;
            let text = match coords {
                Coords::P => image.to_string(),
                Coords::V => image.display_v(),
            };
            let meta = op_meta(Meta::new("apply"), &op)
                .with("input", &input)
                .with("coords", format!("{coords:?}").to_lowercase());
            let body = match format {
                Format::Json => output::json(&meta, serde_json::json!({"text": text, "terms": image.to_json()})),
                Format::Text => output::text(&meta, &text),
                other => return Err(Usage(format!("apply does not support format {other:?}"))),
            };
            output::emit(output.as_deref(), &body)?;
            Ok(true)
        }
        Command::Matrix {
            op,
            n,
            basis,
            format,
            output,
        } => {
            let b: Basis = basis.parse()?;
            let operator = build_operator(&op, n)?;
            let m = matrix_in_basis(&operator, n, &b)?;
            let meta = op_meta(Meta::new("matrix"), &op)
                .with("n", n)
                .with("basis", &b)
                .with("orientation", "rows=source");
            let body = match format {
                Format::Json => output::json(&meta, m.to_json()),
                Format::Csv => output::text(&meta, m.to_csv().trim_end()),
                other => return Err(Usage(format!("matrix does not support format {other:?}"))),
            };
            output::emit(output.as_deref(), &body)?;
            Ok(true)
        }
        Command::Verify {
            suite,
            params,
            output,
        } => {
            let report = run_suite(suite, &params)?;
            let meta = suite_meta(Meta::new("verify").with("suite", format!("{suite:?}").to_lowercase()), &params);
            let passed = report.passed();
            let mut value = report.to_json();
            value["passed"] = serde_json::json!(passed);
            output::emit(output.as_deref(), &output::json(&meta, value))?;
            if !passed {
                for c in report.failures() {
                    eprintln!(
                        "FAILED {}: expected {} got {}",
                        c.label,
                        c.expected.as_deref().unwrap_or("?"),
                        c.actual.as_deref().unwrap_or("?")
                    );
                }
            }
            Ok(passed)
        }
        Command::Graph { n, format, output } => {
            let g = rimhook_graph(n)?;
            let meta = Meta::new("graph").with("n", n);
            let body = match format {
                Format::Dot => output::dot(&meta, &g.to_dot()),
                Format::Json => output::json(&meta, g.to_json()),
                other => return Err(Usage(format!("graph does not support format {other:?}"))),
            };
            output::emit(output.as_deref(), &body)?;
            Ok(true)
        }
        Command::Hierarchy { n, window, output } => {
            let w = ops::hierarchy(n, window)?;
            let shifts: Vec<i64> = w.instantiate(window).iter().map(|t| t.degree_shift()).collect();
            let uniform = shifts.first().copied().filter(|s| shifts.iter().all(|x| x == s));
            let meta = Meta::new("hierarchy").with("n", n).with("window", window);
            let value = serde_json::json!({
                "operator": w.name(),
                "valid_up_to": window,
                "degree_shift": uniform,
                "terms": w.to_json(window),
            });
            output::emit(output.as_deref(), &output::json(&meta, value))?;
            Ok(true)
        }
        Command::Moments {
            big_n,
            beta,
            d,
            output,
        } => {
            let e = Ensemble::from_rational(big_n, &beta)?;
            let table = MomentEngine::new(e).table(d)?;
            let meta = Meta::new("moments").with("N", big_n).with("beta", &beta).with("d", d);
            output::emit(output.as_deref(), &output::json(&meta, table.to_json()))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
