//! Command-line surface: argument definitions and the six subcommand
//! implementations.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use spinlab_core::moments::{mixture_spin_moments, number_state_moments, spin_moments};
use spinlab_core::{
    collective_spin, mle_estimate, qfi_diagonal_mixture, qfi_number_state, qfi_pure,
    qfi_spectral, run_oracle_suite, toth_check, xi_parameters, Direction, MomentReport,
    OrthogonalTriplet, QfiReport, XiValue,
};

use crate::axes;
use crate::error::CliError;
use crate::record::{self, RunRecord};
use crate::spec::{self, BuiltState, SpecKind, StateSpec};

#[derive(Parser)]
#[command(
    name = "spinlab",
    version,
    about = "Collective-spin analysis of two-mode bosonic states: moments, entanglement inequalities, squeezing, Fisher information, and phase estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spin moments along a direction: closed form (when available), matrix
    /// oracle, and their difference
    Moments(MomentsArgs),
    /// The four entanglement inequalities and the squeezing parameters on a
    /// frame
    Squeeze(SqueezeArgs),
    /// Quantum Fisher information of a rotation generator: closed form and
    /// spectral route
    Qfi(QfiArgs),
    /// Sweep one parameter and emit a CSV table
    Scan(ScanArgs),
    /// Monte-Carlo maximum-likelihood phase estimation
    Estimate(EstimateArgs),
    /// Brute-force distinguishable-qubit oracle suite
    Oracle(OracleArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct StateArgs {
    /// Inline state: fock:N:K | gauss:N:L:SIGMA | flatpeak:N:P |
    /// mixture:P0,P1,... | amplitudes:RE,IM;RE,IM;...
    #[arg(long, value_name = "SPEC")]
    state: Option<String>,

    /// JSON state file, e.g. {"v":1,"kind":"fock","n":4,"k":2}
    #[arg(long, value_name = "PATH")]
    state_file: Option<PathBuf>,
}

impl StateArgs {
    fn resolve(&self) -> Result<StateSpec, CliError> {
        spec::resolve(&self.state, &self.state_file)
    }
}

#[derive(Args)]
struct MomentsArgs {
    #[command(flatten)]
    state: StateArgs,

    /// Direction components X,Y,Z (normalized on parse)
    #[arg(long, default_value = "0,0,1", value_name = "X,Y,Z")]
    dir: String,
}

#[derive(Args)]
struct SqueezeArgs {
    #[command(flatten)]
    state: StateArgs,

    /// Frame: auto-z | axis names N1,N2,N3 (e.g. z,y,x) | numeric
    /// X,Y,Z;X,Y,Z;X,Y,Z
    #[arg(long, default_value = "auto-z", value_name = "FRAME")]
    triplet: String,
}

#[derive(Args)]
struct QfiArgs {
    #[command(flatten)]
    state: StateArgs,

    /// Rotation-generator direction components X,Y,Z
    #[arg(long, default_value = "0,1,0", value_name = "X,Y,Z")]
    dir: String,
}

#[derive(Args)]
struct ScanArgs {
    /// Sweep parameter: n | n3z2 | sigma | p
    #[arg(long, value_name = "NAME")]
    param: String,

    /// First parameter value (inclusive)
    #[arg(long)]
    from: f64,

    /// Last parameter value (inclusive)
    #[arg(long)]
    to: f64,

    /// Positive step size (scans are ascending)
    #[arg(long)]
    step: f64,

    /// Quantity computed per row: moments | squeeze | qfi
    #[arg(long, value_name = "WHAT")]
    quantity: String,

    #[command(flatten)]
    state: StateArgs,

    /// Direction for moments/qfi rows
    #[arg(long, default_value = "0,0,1", value_name = "X,Y,Z")]
    dir: String,

    /// Frame for squeeze rows (ignored when --param n3z2 builds its own)
    #[arg(long, default_value = "auto-z", value_name = "FRAME")]
    triplet: String,

    /// Also write the CSV (same bytes as standard output) to this file
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    state: StateArgs,

    /// Rotation-axis components X,Y,Z
    #[arg(long, default_value = "0,1,0", value_name = "X,Y,Z")]
    rot_dir: String,

    /// True phase in (0, π/2), exclusive
    #[arg(long)]
    theta: f64,

    /// Measurement shots per estimate (≥ 1)
    #[arg(long)]
    shots: usize,

    /// Independent repetitions of the estimate (≥ 1)
    #[arg(long, default_value_t = 1)]
    reps: usize,

    /// Seed for the deterministic sampler (default: drawn from entropy and
    /// echoed)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct OracleArgs {
    /// Qubit count for the randomized bound trials (2..=8)
    #[arg(long, default_value_t = 4)]
    n: usize,

    /// Trials per randomized check (≥ 1)
    #[arg(long, default_value_t = 200)]
    trials: usize,

    /// Seed for the deterministic generator (default: drawn from entropy
    /// and echoed)
    #[arg(long)]
    seed: Option<u64>,
}

/// Dispatch a parsed invocation.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Moments(args) => moments(args),
        Command::Squeeze(args) => squeeze(args),
        Command::Qfi(args) => qfi(args),
        Command::Scan(args) => scan(args),
        Command::Estimate(args) => estimate(args),
        Command::Oracle(args) => oracle(args),
    }
}

fn dir_json(dir: &Direction) -> serde_json::Value {
    json!(dir.components())
}

fn triplet_json(t: &OrthogonalTriplet) -> serde_json::Value {
    json!({
        "n1": t.n1().components(),
        "n2": t.n2().components(),
        "n3": t.n3().components(),
    })
}

fn moment_gap(a: &MomentReport, b: &MomentReport) -> f64 {
    (a.mean - b.mean)
        .abs()
        .max((a.second_moment - b.second_moment).abs())
        .max((a.variance - b.variance).abs())
}

/// Closed-form moments exist for number states (any direction) and for
/// diagonal mixtures (via occupation statistics).
fn closed_moments(
    spec: &StateSpec,
    built: &BuiltState,
    dir: &Direction,
) -> Result<Option<MomentReport>, CliError> {
    Ok(match (&spec.kind, built) {
        (SpecKind::Fock { n, k }, _) => Some(number_state_moments(*n, *k, dir)?),
        (_, BuiltState::Mixture(mix)) => Some(mixture_spin_moments(mix, dir)),
        _ => None,
    })
}

/// Every buildable spec admits a closed-form Fisher information: the
/// number-state formula, the diagonal-mixture formula, or the pure-state
/// four-times-variance identity.
fn closed_qfi(
    spec: &StateSpec,
    built: &BuiltState,
    dir: &Direction,
) -> Result<QfiReport, CliError> {
    Ok(match (&spec.kind, built) {
        (SpecKind::Fock { n, k }, _) => qfi_number_state(*n, *k, dir)?,
        (_, BuiltState::Mixture(mix)) => qfi_diagonal_mixture(mix, dir),
        (_, BuiltState::Pure(pure)) => qfi_pure(pure, &collective_spin(pure.n(), *dir))?,
    })
}

fn moments(args: MomentsArgs) -> Result<(), CliError> {
    let max_n = spec::max_n_from_env()?;
    let parsed = args.state.resolve()?;
    let (built, canonical) = spec::build(&parsed, max_n)?;
    let dir = axes::parse_direction("--dir", &args.dir)?;

    let matrix = spin_moments(&built.to_state(), &collective_spin(built.n(), dir))?;
    let closed = closed_moments(&canonical, &built, &dir)?;
    let max_difference = closed.as_ref().map(|c| moment_gap(c, &matrix));

    record::emit(&RunRecord {
        command: "moments".into(),
        inputs: json!({
            "state": canonical,
            "n": built.n(),
            "dir": dir_json(&dir),
        }),
        outputs: json!({
            "closed_form": closed,
            "matrix_oracle": matrix,
            "max_difference": max_difference,
        }),
        versions: record::version_string(),
        seed: None,
    })
}

fn squeeze(args: SqueezeArgs) -> Result<(), CliError> {
    let max_n = spec::max_n_from_env()?;
    let parsed = args.state.resolve()?;
    let (built, canonical) = spec::build(&parsed, max_n)?;
    let triplet = axes::parse_triplet("--triplet", &args.triplet)?;

    let state = built.to_state();
    let toth = toth_check(&state, &triplet)?;
    let xi = xi_parameters(&state, &triplet)?;

    record::emit(&RunRecord {
        command: "squeeze".into(),
        inputs: json!({
            "state": canonical,
            "n": built.n(),
            "triplet": triplet_json(&triplet),
        }),
        outputs: json!({
            "toth": toth,
            "xi": xi,
        }),
        versions: record::version_string(),
        seed: None,
    })
}

fn qfi(args: QfiArgs) -> Result<(), CliError> {
    let max_n = spec::max_n_from_env()?;
    let parsed = args.state.resolve()?;
    let (built, canonical) = spec::build(&parsed, max_n)?;
    let dir = axes::parse_direction("--dir", &args.dir)?;

    let closed = closed_qfi(&canonical, &built, &dir)?;
    let spectral = qfi_spectral(&built.to_state().to_density(), &collective_spin(built.n(), dir))?;

    record::emit(&RunRecord {
        command: "qfi".into(),
        inputs: json!({
            "state": canonical,
            "n": built.n(),
            "dir": dir_json(&dir),
        }),
        outputs: json!({
            "closed_form": closed,
            "spectral": spectral,
        }),
        versions: record::version_string(),
        seed: None,
    })
}

fn estimate(args: EstimateArgs) -> Result<(), CliError> {
    let max_n = spec::max_n_from_env()?;
    let parsed = args.state.resolve()?;
    let (built, canonical) = spec::build(&parsed, max_n)?;
    let rot_dir = axes::parse_direction("--rot-dir", &args.rot_dir)?;
    let seed = args.seed.unwrap_or_else(record::entropy_seed);

    let result = mle_estimate(
        &built.to_state(),
        rot_dir,
        args.theta,
        args.shots,
        args.reps,
        seed,
    )?;

    record::emit(&RunRecord {
        command: "estimate".into(),
        inputs: json!({
            "state": canonical,
            "n": built.n(),
            "rot_dir": dir_json(&rot_dir),
            "theta": args.theta,
            "shots": args.shots,
            "reps": args.reps,
            "seed": seed,
        }),
        outputs: serde_json::to_value(&result)
            .map_err(|e| CliError::numeric(format!("cannot serialize the result: {e}")))?,
        versions: record::version_string(),
        seed: Some(seed),
    })
}

fn oracle(args: OracleArgs) -> Result<(), CliError> {
    let seed = args.seed.unwrap_or_else(record::entropy_seed);
    let summary = run_oracle_suite(args.n, args.trials, seed)?;

    record::emit(&RunRecord {
        command: "oracle".into(),
        inputs: json!({
            "n": args.n,
            "trials": args.trials,
            "seed": seed,
        }),
        outputs: serde_json::to_value(summary)
            .map_err(|e| CliError::numeric(format!("cannot serialize the summary: {e}")))?,
        versions: record::version_string(),
        seed: Some(seed),
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Quantity {
    Moments,
    Squeeze,
    Qfi,
}

impl Quantity {
    fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "moments" => Ok(Quantity::Moments),
            "squeeze" => Ok(Quantity::Squeeze),
            "qfi" => Ok(Quantity::Qfi),
            other => Err(CliError::usage(format!(
                "--quantity must be moments, squeeze, or qfi, got '{other}'"
            ))),
        }
    }

    fn columns(self) -> &'static [&'static str] {
        match self {
            Quantity::Moments => &["mean", "second_moment", "variance"],
            Quantity::Squeeze => &["lhs1", "lhs2", "lhs3", "lhs4", "xi_w_squared", "xi_s_squared"],
            Quantity::Qfi => &["f_closed", "f_spectral"],
        }
    }
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn fmt_xi(v: &XiValue) -> String {
    match v.value() {
        Some(x) => fmt(x),
        None => "undefined".into(),
    }
}

fn compute_row(
    quantity: Quantity,
    spec: &StateSpec,
    built: &BuiltState,
    dir: &Direction,
    triplet: &OrthogonalTriplet,
) -> Result<Vec<String>, CliError> {
    match quantity {
        Quantity::Moments => {
            let report = spin_moments(&built.to_state(), &collective_spin(built.n(), *dir))?;
            Ok(vec![
                fmt(report.mean),
                fmt(report.second_moment),
                fmt(report.variance),
            ])
        }
        Quantity::Squeeze => {
            let state = built.to_state();
            let toth = toth_check(&state, triplet)?;
            let xi = xi_parameters(&state, triplet)?;
            Ok(vec![
                fmt(toth.lhs1),
                fmt(toth.lhs2),
                fmt(toth.lhs3),
                fmt(toth.lhs4),
                fmt_xi(&xi.xi_w_squared),
                fmt_xi(&xi.xi_s_squared),
            ])
        }
        Quantity::Qfi => {
            let closed = closed_qfi(spec, built, dir)?;
            let spectral =
                qfi_spectral(&built.to_state().to_density(), &collective_spin(built.n(), *dir))?;
            Ok(vec![fmt(closed.value), fmt(spectral.value)])
        }
    }
}

fn with_row_context(param: &str, value: f64, err: CliError) -> CliError {
    match err {
        CliError::Usage(msg) => CliError::Usage(format!("at {param} = {value}: {msg}")),
        CliError::Numeric(msg) => CliError::Numeric(format!("at {param} = {value}: {msg}")),
    }
}

fn scan(args: ScanArgs) -> Result<(), CliError> {
    let max_n = spec::max_n_from_env()?;
    let quantity = Quantity::parse(&args.quantity)?;

    if !args.from.is_finite() || !args.to.is_finite() {
        return Err(CliError::usage("--from and --to must be finite numbers"));
    }
    if !(args.step.is_finite() && args.step > 0.0) {
        return Err(CliError::usage(
            "--step must be a positive number (scans are ascending)",
        ));
    }
    if args.to < args.from {
        return Err(CliError::usage(format!(
            "empty range: --to {} lies below --from {}",
            args.to, args.from
        )));
    }
    let mut values = Vec::new();
    for i in 0.. {
        let v = args.from + (i as f64) * args.step;
        if v > args.to + args.step * 1e-9 {
            break;
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(CliError::usage("empty range: no parameter values to scan"));
    }

    let dir = axes::parse_direction("--dir", &args.dir)?;
    let flag_triplet = axes::parse_triplet("--triplet", &args.triplet)?;

    // Fixed-state parameters reuse one built state; template parameters
    // rebuild per row from the inline template.
    enum Sweep {
        Template(String),
        FrameTilt(Box<(StateSpec, BuiltState)>),
    }
    let sweep = match args.param.as_str() {
        "n" | "sigma" | "p" => {
            let template = args.state.state.clone().ok_or_else(|| {
                CliError::usage(format!(
                    "scans over {} need an inline --state template containing '@'",
                    args.param
                ))
            })?;
            if !template.contains('@') {
                return Err(CliError::usage(format!(
                    "--state template '{template}' has no '@' placeholder for {}",
                    args.param
                )));
            }
            Sweep::Template(template)
        }
        "n3z2" => {
            if quantity != Quantity::Squeeze {
                return Err(CliError::usage(
                    "--param n3z2 tilts the frame and applies to --quantity squeeze only",
                ));
            }
            let parsed = args.state.resolve()?;
            let (built, canonical) = spec::build(&parsed, max_n)?;
            Sweep::FrameTilt(Box::new((canonical, built)))
        }
        other => {
            return Err(CliError::usage(format!(
                "--param must be one of n, n3z2, sigma, p, got '{other}'"
            )))
        }
    };

    let mut csv = String::new();
    csv.push_str(&args.param);
    for col in quantity.columns() {
        csv.push(',');
        csv.push_str(col);
    }
    csv.push('\n');

    for &v in &values {
        let row = match &sweep {
            Sweep::Template(template) => {
                let text = match args.param.as_str() {
                    "n" => {
                        let rounded = v.round();
                        if (v - rounded).abs() > 1e-9 || rounded < 0.0 {
                            return Err(CliError::usage(format!(
                                "scans over n need integer values, got {v}"
                            )));
                        }
                        let n = rounded as usize;
                        template
                            .replace("@/2", &(n / 2).to_string())
                            .replace('@', &n.to_string())
                    }
                    _ => template.replace('@', &fmt(v)),
                };
                let parsed = spec::parse_inline("--state", &text)
                    .map_err(|e| with_row_context(&args.param, v, e))?;
                let (built, canonical) = spec::build(&parsed, max_n)
                    .map_err(|e| with_row_context(&args.param, v, e))?;
                compute_row(quantity, &canonical, &built, &dir, &flag_triplet)
                    .map_err(|e| with_row_context(&args.param, v, e))?
            }
            Sweep::FrameTilt(boxed) => {
                let (canonical, built) = boxed.as_ref();
                if !(0.0..=1.0).contains(&v) {
                    return Err(CliError::usage(format!(
                        "n3z2 values must lie in [0, 1], got {v}"
                    )));
                }
                let (n3, _) = Direction::normalized((1.0 - v).sqrt(), 0.0, v.sqrt())
                    .map_err(CliError::from)?;
                let tilted = OrthogonalTriplet::completing_n3(n3);
                compute_row(quantity, canonical, built, &dir, &tilted)
                    .map_err(|e| with_row_context(&args.param, v, e))?
            }
        };
        csv.push_str(&fmt(v));
        for cell in row {
            csv.push(',');
            csv.push_str(&cell);
        }
        csv.push('\n');
    }

    print!("{csv}");
    if let Some(path) = &args.out {
        std::fs::write(path, csv.as_bytes()).map_err(|e| {
            CliError::usage(format!("--out: cannot write {}: {e}", path.display()))
        })?;
    }
    Ok(())
}
