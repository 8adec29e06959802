//! `qbd` — evaluate genuine q-Bernstein-Durrmeyer operators, inspect moment
//! polynomials, compute `L_q`, run the experiment suites, and verify the
//! exact identities.
//!
//! Exit codes: 0 success, 1 domain/hypothesis error (the message names the
//! violated precondition), 2 usage error.

use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qbd_core::error::{Error, Result};
use qbd_core::harness::{
    convergence_experiment, identity_suite, lower_bound_experiment, parse_series_spec,
    saturation_diagnostic, voronovskaja_experiment, ExperimentConfig, IdentityGrid,
};
use qbd_core::operator::u_monomial_recurrence;
use qbd_core::report::{OutFormat, Report};
use qbd_core::scalar::{Mpf, Rat, Scalar};
use qbd_core::voronovskaja::{l1_eval, lq_direct, lq_series};
use qbd_core::{Cx, QContext};

#[derive(Parser)]
#[command(name = "qbd", version, about = "genuine q-Bernstein-Durrmeyer operators on complex disks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate U_{n,q}(f; z) by the moment-recurrence path.
    Eval(EvalArgs),
    /// Print the coefficients of the moment polynomial U_{n,q}(e_m; z).
    Moment(MomentArgs),
    /// Evaluate L_q(f; z) by both the series and the q-derivative path.
    Lq(LqArgs),
    /// Convergence experiment: sup error vs the first-order bound per n.
    Converge(ExperimentArgs),
    /// Voronovskaja experiment: asymptotic residual vs the second-order bound.
    Voronovskaja(ExperimentArgs),
    /// Lower-bound experiment: err * [n+1]_q against the ||L_q f||_r floor.
    Lowerbound(ExperimentArgs),
    /// Saturation diagnostic: linear functions reproduce exactly; others floor.
    Saturate(ExperimentArgs),
    /// Run the exact-rational identity suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ModeArg {
    /// Numeric mode: `rational` or `float:BITS` (BITS >= 53).
    #[arg(long, default_value = "float:53")]
    mode: String,
}

#[derive(Args)]
struct EvalArgs {
    /// Deformation parameter (decimal or fraction P/Q).
    #[arg(long)]
    q: String,
    /// Operator degree, n >= 1.
    #[arg(long)]
    n: usize,
    /// Test function: exp | monomial:M | geometric:A | poly:c0,c1,...
    #[arg(long = "fn")]
    function: String,
    /// Evaluation point as RE,IM.
    #[arg(long)]
    z: String,
    /// Stored series coefficients.
    #[arg(long, default_value_t = qbd_core::series::DEFAULT_TRUNCATION)]
    truncation: usize,
    #[command(flatten)]
    mode: ModeArg,
}

#[derive(Args)]
struct MomentArgs {
    #[arg(long)]
    q: String,
    #[arg(long)]
    n: usize,
    /// Monomial exponent m of e_m.
    #[arg(long)]
    m: usize,
    #[command(flatten)]
    mode: ModeArg,
}

#[derive(Args)]
struct LqArgs {
    #[arg(long)]
    q: String,
    #[arg(long = "fn")]
    function: String,
    #[arg(long)]
    z: String,
    #[arg(long, default_value_t = qbd_core::series::DEFAULT_TRUNCATION)]
    truncation: usize,
    #[command(flatten)]
    mode: ModeArg,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long = "fn")]
    function: String,
    #[arg(long)]
    q: String,
    /// Disk radius r >= 1 for the sup-norm.
    #[arg(long, default_value = "1")]
    r: String,
    #[arg(long = "n-min", default_value_t = 2)]
    n_min: usize,
    #[arg(long = "n-max", default_value_t = 16)]
    n_max: usize,
    /// Circle sample count.
    #[arg(long, default_value_t = qbd_core::series::DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = qbd_core::series::DEFAULT_TRUNCATION)]
    truncation: usize,
    /// Output format: csv | json | md.
    #[arg(long, default_value = "csv")]
    out: String,
    /// Write the report here instead of stdout.
    #[arg(long = "out-file")]
    out_file: Option<std::path::PathBuf>,
    #[command(flatten)]
    mode: ModeArg,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "n-max", default_value_t = 8)]
    n_max: usize,
    #[arg(long = "m-max", default_value_t = 8)]
    m_max: usize,
    /// Comma-separated rational q grid.
    #[arg(long = "q-list", default_value = "1/2,2/3,1,3/2,2")]
    q_list: String,
}

enum ModeSel {
    Rational,
    F64,
    Big(u32),
}

fn parse_mode(s: &str) -> Result<ModeSel> {
    if s == "rational" {
        return Ok(ModeSel::Rational);
    }
    if s == "float" {
        return Ok(ModeSel::F64);
    }
    if let Some(bits) = s.strip_prefix("float:") {
        let bits: u32 = bits
            .parse()
            .map_err(|_| Error::config(format!("invalid precision in mode {s:?}")))?;
        if bits < 53 {
            return Err(Error::config("float precision must be >= 53 bits"));
        }
        return Ok(if bits == 53 { ModeSel::F64 } else { ModeSel::Big(bits) });
    }
    Err(Error::config(format!(
        "unknown mode {s:?} (expected rational or float:BITS)"
    )))
}

fn parse_complex<S: Scalar>(s: &str, parse: &dyn Fn(&str) -> Result<S>) -> Result<Cx<S>> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| Error::config(format!("complex value must be RE,IM, got {s:?}")))?;
    Ok(Cx::new(parse(re.trim())?, parse(im.trim())?))
}

fn cx_string<S: Scalar>(v: &Cx<S>) -> String {
    if v.im.is_zero() {
        v.re.report_str()
    } else {
        format!("{},{}", v.re.report_str(), v.im.report_str())
    }
}

fn eval_cmd<S: Scalar>(a: &EvalArgs, parse: &dyn Fn(&str) -> Result<S>) -> Result<()> {
    let q = parse(&a.q)?;
    let z = parse_complex(&a.z, parse)?;
    let f = parse_series_spec::<S>(&a.function, a.truncation)?;
    let ctx = QContext::new(q)?;
    let table = u_monomial_recurrence(a.n, f.truncation(), &ctx)?;
    let v = table.apply_series(&f, &z)?;
    println!("{}", cx_string(&v));
    Ok(())
}

fn moment_cmd<S: Scalar>(a: &MomentArgs, parse: &dyn Fn(&str) -> Result<S>) -> Result<()> {
    let q = parse(&a.q)?;
    let ctx = QContext::new(q)?;
    let table = u_monomial_recurrence(a.n, a.m, &ctx)?;
    let row = table.row(a.m)?;
    let coeffs: Vec<String> = (0..=row.degree().unwrap_or(0))
        .map(|j| cx_string(&row.coeff(j)))
        .collect();
    println!("{}", coeffs.join(", "));
    Ok(())
}

fn lq_cmd<S: Scalar>(a: &LqArgs, parse: &dyn Fn(&str) -> Result<S>) -> Result<()> {
    let q = parse(&a.q)?;
    let z = parse_complex(&a.z, parse)?;
    let f = parse_series_spec::<S>(&a.function, a.truncation)?;
    let ctx = QContext::new(q)?;
    if ctx.is_q_one() {
        let v = l1_eval(&f, &z)?;
        println!("l1: {}", cx_string(&v));
        return Ok(());
    }
    let series = lq_series(&f, &ctx, &z)?;
    let direct = lq_direct(&f, &ctx, &z)?;
    println!("series: {}", cx_string(&series));
    println!("direct: {}", cx_string(&direct));
    Ok(())
}

fn experiment_cmd<S: Scalar>(
    a: &ExperimentArgs,
    parse: &dyn Fn(&str) -> Result<S>,
    run: fn(&ExperimentConfig<S>) -> Result<Report<S>>,
) -> Result<()> {
    let cfg = ExperimentConfig::new(a.function.clone(), parse(&a.q)?, parse(&a.r)?)
        .with_n_range(a.n_min, a.n_max)
        .with_samples(a.samples)
        .with_truncation(a.truncation);
    let format: OutFormat = a.out.parse()?;
    let report = run(&cfg)?;
    let text = report.write(format);
    match &a.out_file {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .map_err(|e| Error::config(format!("cannot create {}: {e}", path.display())))?;
            file.write_all(text.as_bytes())
                .map_err(|e| Error::config(format!("write failed: {e}")))?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn experiment_dispatch(
    a: &ExperimentArgs,
    kind: fn(&ExperimentConfig<Rat>) -> Result<Report<Rat>>,
    kind_f64: fn(&ExperimentConfig<f64>) -> Result<Report<f64>>,
    kind_big: fn(&ExperimentConfig<Mpf>) -> Result<Report<Mpf>>,
) -> Result<()> {
    match parse_mode(&a.mode.mode)? {
        ModeSel::Rational => experiment_cmd::<Rat>(a, &|s| Rat::parse(s), kind),
        ModeSel::F64 => experiment_cmd::<f64>(a, &|s| <f64 as Scalar>::parse(s), kind_f64),
        ModeSel::Big(bits) => {
            experiment_cmd::<Mpf>(a, &move |s| Mpf::parse_with_prec(s, bits), kind_big)
        }
    }
}

fn verify_cmd(a: &VerifyArgs) -> Result<()> {
    let q_values = a
        .q_list
        .split(',')
        .map(|s| Rat::parse(s.trim()))
        .collect::<Result<Vec<_>>>()?;
    let grid = IdentityGrid { q_values, n_max: a.n_max, m_max: a.m_max };
    let report = identity_suite(&grid)?;
    print!("{}", report.to_text());
    if report.passed() {
        println!("all identities hold exactly");
        Ok(())
    } else {
        Err(Error::Invariant("identity suite failed".to_string()))
    }
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Eval(a) => match parse_mode(&a.mode.mode)? {
            ModeSel::Rational => eval_cmd::<Rat>(a, &|s| Rat::parse(s)),
            ModeSel::F64 => eval_cmd::<f64>(a, &|s| <f64 as Scalar>::parse(s)),
            ModeSel::Big(bits) => eval_cmd::<Mpf>(a, &move |s| Mpf::parse_with_prec(s, bits)),
        },
        Command::Moment(a) => match parse_mode(&a.mode.mode)? {
            ModeSel::Rational => moment_cmd::<Rat>(a, &|s| Rat::parse(s)),
            ModeSel::F64 => moment_cmd::<f64>(a, &|s| <f64 as Scalar>::parse(s)),
            ModeSel::Big(bits) => moment_cmd::<Mpf>(a, &move |s| Mpf::parse_with_prec(s, bits)),
        },
        Command::Lq(a) => match parse_mode(&a.mode.mode)? {
            ModeSel::Rational => lq_cmd::<Rat>(a, &|s| Rat::parse(s)),
            ModeSel::F64 => lq_cmd::<f64>(a, &|s| <f64 as Scalar>::parse(s)),
            ModeSel::Big(bits) => lq_cmd::<Mpf>(a, &move |s| Mpf::parse_with_prec(s, bits)),
        },
        Command::Converge(a) => experiment_dispatch(
            a,
            convergence_experiment::<Rat>,
            convergence_experiment::<f64>,
            convergence_experiment::<Mpf>,
        ),
        Command::Voronovskaja(a) => experiment_dispatch(
            a,
            voronovskaja_experiment::<Rat>,
            voronovskaja_experiment::<f64>,
            voronovskaja_experiment::<Mpf>,
        ),
        Command::Lowerbound(a) => experiment_dispatch(
            a,
            lower_bound_experiment::<Rat>,
            lower_bound_experiment::<f64>,
            lower_bound_experiment::<Mpf>,
        ),
        Command::Saturate(a) => experiment_dispatch(
            a,
            saturation_diagnostic::<Rat>,
            saturation_diagnostic::<f64>,
            saturation_diagnostic::<Mpf>,
        ),
        Command::Verify(a) => verify_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
