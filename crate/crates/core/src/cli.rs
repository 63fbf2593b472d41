//! The `jacobi` command-line tool.
//!
//! ```text
//! jacobi matrix analyze <file> [--convention strong|weak] [--oracle] [--trace]
//! jacobi system analyze <file> [--check-jacobian] [--oracle] [--trace]
//! jacobi resolvent <file> --variable <name|index>
//! jacobi reduction <file>
//! jacobi bounds <file>
//! ```
//!
//! `--json` selects JSON output. Exit status: 0 success, 1 usage or input
//! error, 2 degenerate input, 3 oracle disagreement.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{bounds_report, BoundsReport};
use crate::canon::{CanonResult, StepKind};
use crate::diffpoly::{shortest_reduction_plan, DiffSystem};
use crate::error::Error;
use crate::order_matrix::{OrderMatrix, OrderValue};
use crate::report::{
    AnalysisOptions, AnalysisReport, Convention, JacobianReport, ProlongedEquation,
    SolvedDerivative,
};
use crate::resolvent::{forma_elegans_orders, resolvent_orders};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_ORACLE_MISMATCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "jacobi",
    version,
    about = "Order matrices, minimal canons and Jacobi's bound for ODE systems"
)]
struct Cli {
    /// Print JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyse an order matrix (JSON or `2 1 - ; - 2 0 ; - 0 1`).
    Matrix {
        #[command(subcommand)]
        action: MatrixAction,
    },
    /// Analyse a system of differential equations.
    System {
        #[command(subcommand)]
        action: SystemAction,
    },
    /// Differentiation orders for a resolvent in one variable.
    Resolvent {
        file: PathBuf,
        /// Variable name (systems) or 1-based column index.
        #[arg(long)]
        variable: String,
    },
    /// Shortest-reduction plan of a system.
    Reduction { file: PathBuf },
    /// Jacobi, Lando, Greenspan and Bézout-dual bounds.
    Bounds { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum MatrixAction {
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ConventionArg::Strong)]
        convention: ConventionArg,
        #[command(flatten)]
        common: CommonFlags,
    },
}

#[derive(Subcommand, Debug)]
enum SystemAction {
    Analyze {
        file: PathBuf,
        /// Test whether the truncated Jacobian determinant vanishes.
        #[arg(long)]
        check_jacobian: bool,
        #[command(flatten)]
        common: CommonFlags,
    },
}

#[derive(Args, Debug)]
struct CommonFlags {
    /// Cross-check against brute-force enumeration.
    #[arg(long)]
    oracle: bool,
    /// Show every step of the canon algorithm.
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    Strong,
    Weak,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn at(path: &Path, e: Error) -> Self {
        let code = if e.is_degenerate() {
            EXIT_DEGENERATE
        } else {
            EXIT_USAGE
        };
        Failure {
            code,
            message: format!("{}: {e}", path.display()),
        }
    }

    fn usage(message: String) -> Self {
        Failure {
            code: EXIT_USAGE,
            message,
        }
    }
}

enum Input {
    Matrix(OrderMatrix),
    System(DiffSystem),
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn looks_like_matrix(path: &Path, text: &str) -> bool {
    path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{')
}

fn parse_input(path: &Path, bytes: &[u8]) -> Result<Input, Failure> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| Failure::usage(format!("{}: not UTF-8: {e}", path.display())))?;
    if looks_like_matrix(path, text) {
        OrderMatrix::from_json_str(text)
            .map(Input::Matrix)
            .map_err(|e| Failure::at(path, e))
    } else {
        DiffSystem::parse(text)
            .map(Input::System)
            .map_err(|e| Failure::at(path, e))
    }
}

fn parse_matrix(path: &Path, bytes: &[u8]) -> Result<OrderMatrix, Failure> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| Failure::usage(format!("{}: not UTF-8: {e}", path.display())))?;
    let parsed = if looks_like_matrix(path, text) {
        OrderMatrix::from_json_str(text)
    } else {
        text.parse()
    };
    parsed.map_err(|e| Failure::at(path, e))
}

fn parse_system(path: &Path, bytes: &[u8]) -> Result<DiffSystem, Failure> {
    match parse_input(path, bytes)? {
        Input::System(sys) => Ok(sys),
        Input::Matrix(_) => Err(Failure::usage(format!(
            "{}: expected a system of equations, found a matrix",
            path.display()
        ))),
    }
}

/// Run the tool on `args` (program name first), writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            if code == EXIT_ORACLE_MISMATCH {
                let _ = writeln!(err, "error: brute-force oracle disagrees with the canon algorithm");
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Run on the process arguments with standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(cli: &Cli) -> Result<(String, i32), Failure> {
    match &cli.command {
        Command::Matrix {
            action:
                MatrixAction::Analyze {
                    file,
                    convention,
                    common,
                },
        } => {
            let bytes = read(file)?;
            let a = parse_matrix(file, &bytes)?;
            let options = AnalysisOptions {
                convention: match convention {
                    ConventionArg::Strong => Convention::Strong,
                    ConventionArg::Weak => Convention::Weak,
                },
                oracle: common.oracle,
                trace: common.trace,
                check_jacobian: false,
            };
            let report =
                AnalysisReport::for_matrix(&bytes, &a, options).map_err(|e| Failure::at(file, e))?;
            Ok(finish(cli.json, &report, None))
        }
        Command::System {
            action:
                SystemAction::Analyze {
                    file,
                    check_jacobian,
                    common,
                },
        } => {
            let bytes = read(file)?;
            let sys = parse_system(file, &bytes)?;
            let options = AnalysisOptions {
                convention: Convention::Strong,
                oracle: common.oracle,
                trace: common.trace,
                check_jacobian: *check_jacobian,
            };
            let report = AnalysisReport::for_system(&bytes, &sys, options)
                .map_err(|e| Failure::at(file, e))?;
            Ok(finish(cli.json, &report, Some(&sys)))
        }
        Command::Resolvent { file, variable } => {
            let bytes = read(file)?;
            let input = parse_input(file, &bytes)?;
            let (mut report, sys) = match input {
                Input::Matrix(a) => (
                    AnalysisReport::for_matrix(&bytes, &a, AnalysisOptions::default())
                        .map_err(|e| Failure::at(file, e))?,
                    None,
                ),
                Input::System(sys) => (
                    AnalysisReport::for_system(&bytes, &sys, AnalysisOptions::default())
                        .map_err(|e| Failure::at(file, e))?,
                    Some(sys),
                ),
            };
            let n = report.analysed_matrix().n();
            let j0 = match &sys {
                Some(s) => s.variable_index(variable),
                None => variable
                    .trim_start_matches(['x', 'c'])
                    .parse::<usize>()
                    .ok()
                    .filter(|k| (1..=n).contains(k))
                    .map(|k| k - 1),
            }
            .ok_or_else(|| Failure::usage(format!("unknown variable `{variable}`")))?;
            let a = report.analysed_matrix().clone();
            let plan =
                resolvent_orders(&a, report.canon(), j0).map_err(|e| Failure::at(file, e))?;
            let elegans = forma_elegans_orders(&a, j0).map_err(|e| Failure::at(file, e))?;
            report.forma_elegans = Some(elegans.iter().map(|v| v.finite()).collect());
            report.resolvent_plan = Some(plan);
            Ok(finish(cli.json, &report, sys.as_ref()))
        }
        Command::Reduction { file } => {
            let bytes = read(file)?;
            let sys = parse_system(file, &bytes)?;
            let mut report = AnalysisReport::for_system(&bytes, &sys, AnalysisOptions::default())
                .map_err(|e| Failure::at(file, e))?;
            let plan =
                shortest_reduction_plan(&sys, report.canon()).map_err(|e| Failure::at(file, e))?;
            report.prolonged_equations = Some(
                plan.prolonged_equations(&sys)
                    .into_iter()
                    .map(|(i, k, p)| ProlongedEquation {
                        equation: sys.equation_names()[i].clone(),
                        order: k,
                        text: p.display_with(sys.names()).to_string(),
                    })
                    .collect(),
            );
            report.normal_form = plan.explicit_normal_form(&sys).ok().map(|nf| {
                nf.into_iter()
                    .map(|(d, p)| SolvedDerivative {
                        derivative: sys.display_var(d),
                        value: p.display_with(sys.names()).to_string(),
                    })
                    .collect()
            });
            report.reduction_plan = Some(plan);
            Ok(finish(cli.json, &report, Some(&sys)))
        }
        Command::Bounds { file } => {
            let bytes = read(file)?;
            let a = match parse_input(file, &bytes)? {
                Input::Matrix(a) => a,
                Input::System(sys) => sys.order_matrix(),
            };
            let b = bounds_report(&a);
            let text = if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&b).expect("serializable"))
            } else {
                render_bounds(&b)
            };
            Ok((text, EXIT_OK))
        }
    }
}

fn finish(json: bool, report: &AnalysisReport, sys: Option<&DiffSystem>) -> (String, i32) {
    let code = match &report.oracle {
        Some(o) if !o.agrees => EXIT_ORACLE_MISMATCH,
        _ => EXIT_OK,
    };
    let text = if json {
        format!("{}\n", report.to_json())
    } else {
        render(report, sys)
    };
    (text, code)
}

fn value(v: OrderValue) -> String {
    match v {
        OrderValue::NegInfinity => "-inf".into(),
        OrderValue::Finite(k) => k.to_string(),
    }
}

fn tuple<T: ToString>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn labels(sys: Option<&DiffSystem>, n: usize) -> (Vec<String>, Vec<String>) {
    match sys {
        Some(s) => (s.equation_names().to_vec(), s.names().to_vec()),
        None => {
            let idx: Vec<String> = (1..=n).map(|k| k.to_string()).collect();
            (idx.clone(), idx)
        }
    }
}

/// Matrix with starred entries marked `*` and, when `underline` is set,
/// entries tying their column's star marked `_`.
fn render_matrix(
    m: &OrderMatrix,
    starred: &[(usize, usize)],
    underline: bool,
    rows: &[String],
    cols: &[String],
) -> String {
    let n = m.n();
    let cell = |i: usize, j: usize| -> String {
        let v = m.get(i, j);
        let text = match v {
            OrderValue::NegInfinity => "-".to_string(),
            OrderValue::Finite(k) => k.to_string(),
        };
        let star_row = starred.iter().find(|&&(_, c)| c == j).map(|&(r, _)| r);
        let mark = if starred.contains(&(i, j)) {
            "*"
        } else if underline && v.is_finite() && star_row.is_some_and(|r| m.get(r, j) == v) {
            "_"
        } else {
            ""
        };
        format!("{text}{mark}")
    };
    let width = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| cell(i, j).len())
        .chain(cols.iter().map(|c| c.chars().count()))
        .max()
        .unwrap_or(1)
        + 2;
    let label_width = rows.iter().map(|r| r.chars().count()).max().unwrap_or(1) + 2;
    let mut s = String::new();
    let _ = write!(s, "{:label_width$}", "");
    for c in cols {
        let _ = write!(s, "{c:>width$}");
    }
    s.push('\n');
    for (i, label) in rows.iter().enumerate().take(n) {
        let _ = write!(s, "{label:<label_width$}");
        for j in 0..n {
            let _ = write!(s, "{:>width$}", cell(i, j));
        }
        s.push('\n');
    }
    s
}

fn render_canon(s: &mut String, a: &OrderMatrix, c: &CanonResult, rows: &[String], cols: &[String]) {
    let _ = writeln!(s, "canon A + ell, transversal maxima starred:");
    s.push_str(&render_matrix(&c.raised_matrix(a), &c.starred, false, rows, cols));
    let _ = writeln!(s, "ell    = {}", tuple(&c.ell));
    let _ = writeln!(s, "Lambda = {}", c.lambda);
    let _ = writeln!(s, "alpha  = {}", tuple(&c.alpha));
    let _ = writeln!(s, "beta   = {}", tuple(&c.beta));
    let _ = writeln!(s, "J      = {}", value(c.jacobi_number));
}

fn render_trace(s: &mut String, a: &OrderMatrix, c: &CanonResult, rows: &[String], cols: &[String]) {
    let n = a.n();
    let mut total = vec![0u64; n];
    for (k, step) in c.trace.iter().enumerate() {
        for (t, d) in total.iter_mut().zip(&step.row_increments) {
            *t += d;
        }
        let kind = match step.kind {
            StepKind::Preparation => "preparation",
            StepKind::Augment => "augment",
            StepKind::RaiseThirdClass => "raise third class",
        };
        let _ = writeln!(s, "step {}: {kind}, increments {}", k + 1, tuple(&step.row_increments));
        if let Some(classes) = &step.classes {
            let one = |v: &[usize]| tuple(&v.iter().map(|r| r + 1).collect::<Vec<_>>());
            let _ = writeln!(
                s,
                "  classes: first {} second {} third {} lower {}",
                one(&classes.first),
                one(&classes.second),
                one(&classes.third),
                one(&classes.lower)
            );
        }
        let m = a.raised(&total).expect("same size");
        s.push_str(&render_matrix(&m, &step.starred, true, rows, cols));
    }
}

fn render_bounds(b: &BoundsReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "bounds:");
    let _ = writeln!(s, "  Jacobi (strong)  {}", value(b.jacobi_strong));
    let _ = writeln!(s, "  Jacobi (weak)    {}", value(b.jacobi_weak));
    let g = b.greenspan.map_or("unavailable".to_string(), value);
    let _ = writeln!(s, "  Greenspan        {g}");
    let _ = writeln!(s, "  Bezout dual      {}", value(b.bezout_dual));
    for r in &b.relations {
        let _ = writeln!(s, "  {r}");
    }
    for note in &b.notes {
        let _ = writeln!(s, "note: {note}");
    }
    s
}

fn render_jacobian(s: &mut String, j: &JacobianReport) {
    let status = match j.status {
        "nonzeroWitnessed" => "nonzero (witnessed)",
        "zeroSymbolic" => "zero (symbolic)",
        "probablyZero" => "probably zero",
        _ => "not computed",
    };
    let _ = write!(s, "truncated Jacobian: {status}");
    if let Some(v) = &j.value {
        let _ = write!(s, ", determinant {v}");
    }
    if let Some(point) = j.point.as_ref().filter(|p| !p.is_empty()) {
        let parts: Vec<String> = point
            .iter()
            .map(|p| format!("{} = {}", p.derivative, p.value))
            .collect();
        let _ = write!(s, " at {}", parts.join(", "));
    }
    if let Some(t) = j.trials {
        let _ = write!(s, " after {t} trials");
    }
    s.push('\n');
}

fn render(r: &AnalysisReport, sys: Option<&DiffSystem>) -> String {
    let a = r.analysed_matrix();
    let c = r.canon();
    let (rows, cols) = labels(sys, a.n());
    let mut s = String::new();
    let convention = match r.convention {
        Convention::Strong => "strong",
        Convention::Weak => "weak",
    };
    let _ = writeln!(s, "input  {}", r.input_digest);
    let _ = writeln!(
        s,
        "{} with n = {}, {convention} convention",
        r.input_kind,
        a.n()
    );
    let _ = writeln!(s, "order matrix A:");
    s.push_str(&render_matrix(a, &[], false, &rows, &cols));
    if let Some(trace) = &r.trace {
        if !trace.is_empty() {
            render_trace(&mut s, a, c, &rows, &cols);
        }
    }
    render_canon(&mut s, a, c, &rows, &cols);
    s.push_str(&render_bounds(&r.bounds));
    if let Some(order) = r.linear_system_order {
        let v = order.map_or("-inf".to_string(), |k| k.to_string());
        let _ = writeln!(s, "linear system order deg det P = {v}");
    }
    if r.truncated_jacobian.status != "notComputed" {
        render_jacobian(&mut s, &r.truncated_jacobian);
    }
    if let Some(plan) = &r.resolvent_plan {
        let _ = writeln!(
            s,
            "resolvent in {} (column {}), anchored at row {}:",
            cols[plan.j0],
            plan.j0 + 1,
            rows[plan.i0]
        );
        let _ = writeln!(s, "A'' after attachment:");
        s.push_str(&render_matrix(&plan.a_double_prime, &plan.starred, true, &rows, &cols));
        let _ = writeln!(s, "A''' = A + h:");
        s.push_str(&render_matrix(&plan.a_triple_prime, &plan.starred, true, &rows, &cols));
        for (i, h) in plan.h.iter().enumerate() {
            let _ = writeln!(s, "differentiate {} {h} time{}", rows[i], if *h == 1 { "" } else { "s" });
        }
        let _ = writeln!(s, "resolvent order {}", value(plan.resolvent_order));
        if let Some(e) = &r.forma_elegans {
            let matches = e.iter().zip(&plan.h).all(|(x, h)| *x == Some(*h));
            let shown: Vec<String> = e
                .iter()
                .map(|x| x.map_or("-inf".to_string(), |k| k.to_string()))
                .collect();
            let _ = writeln!(
                s,
                "minor transversal sums ({}) {}",
                shown.join(", "),
                if matches { "agree" } else { "differ" }
            );
        }
    }
    if let Some(plan) = &r.reduction_plan {
        let _ = writeln!(s, "shortest reduction:");
        for p in &plan.prolongations {
            let top = p.orders.last().copied().unwrap_or(0);
            let _ = writeln!(s, "  {} up to derivative {top}", rows[p.equation]);
        }
        let names: Vec<String> = plan
            .solved_set
            .iter()
            .map(|d| d.display_with(&cols))
            .collect();
        let _ = writeln!(s, "  solved for {}", names.join(", "));
        let _ = writeln!(s, "  order {}", plan.order_total);
        if let Some(eqs) = &r.prolonged_equations {
            let _ = writeln!(s, "prolonged equations:");
            for e in eqs {
                let _ = writeln!(s, "  {} (derivative {}): {} = 0", e.equation, e.order, e.text);
            }
        }
        if let Some(nf) = &r.normal_form {
            let _ = writeln!(s, "normal form:");
            for e in nf {
                let _ = writeln!(s, "  {} = {}", e.derivative, e.value);
            }
        }
    }
    if let Some(o) = &r.oracle {
        let j = match o.brute_force_jacobi_number {
            Some(Some(k)) => k.to_string(),
            Some(None) => "-inf".into(),
            None => "skipped".into(),
        };
        let l = o
            .brute_force_canon
            .as_ref()
            .map_or("skipped".to_string(), |l| tuple(l));
        let _ = writeln!(
            s,
            "oracle: permutations J = {j}, exhaustive canon {l}: {}",
            if o.agrees { "agrees" } else { "DISAGREES" }
        );
    }
    s
}
