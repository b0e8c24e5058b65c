//! `pfconflict`: conflict analysis over Pythagorean fuzzy information
//! systems from the command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 invalid configuration,
//! 4 failed reproduction check. `PFCONFLICT_EPS` overrides the comparison
//! tolerance (default 1e-9).

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pfconflict_core::alliance::partition_aggregates;
use pfconflict_core::reproduce::{self, ReferenceData};
use pfconflict_core::risk::{classify_losses, loss_modes};
use pfconflict_core::system::read_system;
use pfconflict_core::{
    aggregate_all, expected_loss_matrix, group_matrices, AlliancePartition, Error, LossFunction,
    LossPanel, Pfis, Pfn, RegimeKind, RegimeRegistry, SystemFormat, Thresholds, EPS_CMP,
};

use render::{num, Entry, Matrix, OutFormat, Output};

const EPS_VAR: &str = "PFCONFLICT_EPS";

#[derive(Parser, Debug)]
#[command(
    name = "pfconflict",
    version,
    about = "Conflict analysis with Pythagorean fuzzy attitudes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a system file and print its shape and weights.
    Validate {
        #[command(flatten)]
        input: SystemArgs,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u16).range(1..))]
        precision: u16,
    },
    /// Aggregate, then partition by thresholds or classify by expected loss.
    Analyze(AnalyzeArgs),
    /// Recompute the reference tables and compare them with published values.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug)]
struct SystemArgs {
    #[arg(long)]
    system: PathBuf,
    /// Defaults to the file extension, csv otherwise.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: SystemArgs,
    /// Regime of a threshold run.
    #[arg(long, value_enum)]
    regime: Option<RuleArg>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, value_parser = parse_pair, value_name = "MU,NU")]
    gamma_upper: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_pair, value_name = "MU,NU")]
    gamma_lower: Option<(f64, f64)>,
    /// Loss function file (json).
    #[arg(long)]
    loss: Option<PathBuf>,
    /// Expert panel file (json).
    #[arg(long)]
    panel: Option<PathBuf>,
    /// Decision rule of a loss or panel run.
    #[arg(long, value_enum)]
    rule: Option<RuleArg>,
    #[arg(long, value_enum, default_value = "markdown")]
    out: OutFormat,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u16).range(1..))]
    precision: u16,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    /// Replace the bundled agent table.
    #[arg(long)]
    system: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Replace the bundled loss function.
    #[arg(long)]
    loss: Option<PathBuf>,
    /// Replace the bundled expert panel.
    #[arg(long)]
    panel: Option<PathBuf>,
    /// Also print the recomputed tables.
    #[arg(long)]
    tables: bool,
    #[arg(long, value_enum, default_value = "markdown")]
    out: OutFormat,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u16).range(1..))]
    precision: u16,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Pfn,
    Score,
    Closeness,
}

impl From<RuleArg> for RegimeKind {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Pfn => RegimeKind::PfnOrder,
            RuleArg::Score => RegimeKind::Score,
            RuleArg::Closeness => RegimeKind::Closeness,
        }
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (mu, nu) = s
        .split_once(',')
        .ok_or_else(|| format!("expected mu,nu, found {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(mu)?, parse(nu)?))
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Threshold(_) | Error::LossOrder(_) | Error::UnknownRegime(_) => {
                Failure::config(e.to_string())
            }
            _ => Failure::input(e.to_string()),
        }
    }
}

type CmdResult = Result<(String, u8), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    let result = tolerance().and_then(|eps| match cli.command {
        Command::Validate { input, precision } => validate(&input, precision as usize),
        Command::Analyze(args) => analyze(&args, eps),
        Command::Reproduce(args) => reproduce_cmd(&args, eps),
    });
    match result {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn tolerance() -> Result<f64, Failure> {
    match std::env::var(EPS_VAR) {
        Err(_) => Ok(EPS_CMP),
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(eps) if eps >= 0.0 && eps.is_finite() => Ok(eps),
            _ => Err(Failure::config(format!(
                "{EPS_VAR}={v:?} is not a non-negative number"
            ))),
        },
    }
}

fn system_format(path: &Path, flag: Option<FormatArg>) -> SystemFormat {
    match flag {
        Some(FormatArg::Csv) => SystemFormat::Csv,
        Some(FormatArg::Json) => SystemFormat::Json,
        None => match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => SystemFormat::Json,
            _ => SystemFormat::Csv,
        },
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load(path: &Path, flag: Option<FormatArg>) -> Result<(Pfis, bool), Failure> {
    let text = read_text(path)?;
    let loaded = read_system(text.as_bytes(), system_format(path, flag))
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok((loaded.system, loaded.weights_defaulted))
}

fn load_loss(path: &Path) -> Result<LossFunction, Failure> {
    LossFunction::from_json(&read_text(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_panel(path: &Path) -> Result<LossPanel, Failure> {
    LossPanel::from_json(&read_text(path)?).map_err(|e| {
        let f = Failure::from(e);
        Failure {
            message: format!("{}: {}", path.display(), f.message),
            ..f
        }
    })
}

fn validate(input: &SystemArgs, precision: usize) -> CmdResult {
    let (s, defaulted) = match load(&input.system, input.format) {
        Ok(v) => v,
        Err(f) => return Ok((format!("invalid: {}\n", f.message), f.code)),
    };
    let mut text = format!("{} agents, {} issues, valid\n", s.n_agents(), s.n_issues());
    let weights: Vec<String> = s.weights().iter().map(|&w| num(w, precision)).collect();
    text.push_str(&format!("weights: {}\n", weights.join(", ")));
    if defaulted {
        text.push_str("uniform weights assumed\n");
    }
    Ok((text, 0))
}

fn threshold_config(args: &AnalyzeArgs) -> Result<Option<Thresholds>, Failure> {
    let scalar = args.alpha.is_some() || args.beta.is_some();
    let order = args.gamma_upper.is_some() || args.gamma_lower.is_some();
    if !scalar && !order {
        return Ok(None);
    }
    if scalar && order {
        return Err(Failure::config(
            "--alpha/--beta and --gamma-upper/--gamma-lower cannot be combined",
        ));
    }
    let regime = args
        .regime
        .unwrap_or(if order { RuleArg::Pfn } else { RuleArg::Score });
    let t = match regime {
        RuleArg::Pfn => {
            let (Some(u), Some(l)) = (args.gamma_upper, args.gamma_lower) else {
                return Err(Failure::config(
                    "the pfn regime needs --gamma-upper and --gamma-lower",
                ));
            };
            let pfn = |(mu, nu): (f64, f64), flag: &str| {
                Pfn::new(mu, nu).map_err(|e| Failure::config(format!("{flag}: {e}")))
            };
            Thresholds::Pfn {
                upper: pfn(u, "--gamma-upper")?,
                lower: pfn(l, "--gamma-lower")?,
            }
        }
        scalar_regime => {
            let (Some(alpha), Some(beta)) = (args.alpha, args.beta) else {
                return Err(Failure::config(
                    "score and closeness regimes need --alpha and --beta",
                ));
            };
            if scalar_regime == RuleArg::Score {
                Thresholds::Score { alpha, beta }
            } else {
                Thresholds::Closeness { alpha, beta }
            }
        }
    };
    Ok(Some(t))
}

fn warn_modes(modes: &std::collections::BTreeSet<RegimeKind>, rule: RegimeKind, what: &str) {
    if !modes.contains(&rule) {
        let held: Vec<&str> = modes.iter().map(|m| m.name()).collect();
        eprintln!(
            "warning: {what} is monotone under [{}] but not under the {} rule",
            held.join(", "),
            rule.name()
        );
    }
}

fn pfn_rows(
    rows: impl IntoIterator<Item = (String, [Pfn; 3])>,
    rule: RegimeKind,
) -> Vec<(String, [Entry; 3])> {
    rows.into_iter()
        .map(|(agent, ls)| {
            let es = match rule {
                RegimeKind::PfnOrder => ls.map(Entry::Pfn),
                RegimeKind::Score => ls.map(|g| Entry::Real(g.score())),
                RegimeKind::Closeness => ls.map(|g| Entry::Real(g.closeness())),
            };
            (agent, es)
        })
        .collect()
}

fn matrix_title(rule: RegimeKind, group: bool) -> String {
    let base = match rule {
        RegimeKind::PfnOrder => "expected loss matrix",
        RegimeKind::Score => "score matrix",
        RegimeKind::Closeness => "closeness matrix",
    };
    if group {
        format!("group {base}")
    } else {
        base.to_string()
    }
}

fn analyze(args: &AnalyzeArgs, eps: f64) -> CmdResult {
    let thresholds = threshold_config(args)?;
    let drivers = [
        thresholds.is_some(),
        args.loss.is_some(),
        args.panel.is_some(),
    ];
    if drivers.iter().filter(|d| **d).count() != 1 {
        return Err(Failure::config(
            "give exactly one of thresholds (--alpha/--beta or --gamma-upper/--gamma-lower), --loss, --panel",
        ));
    }
    if thresholds.is_some() && args.rule.is_some() {
        return Err(Failure::config(
            "--rule applies to --loss and --panel runs; use --regime with thresholds",
        ));
    }
    let (s, _) = load(&args.input.system, args.input.format)?;
    let registry = RegimeRegistry::with_tolerance(eps);
    let mut output = Output {
        aggregates: aggregate_all(&s),
        ..Output::default()
    };

    if let Some(t) = thresholds {
        let regime = registry.get(t.kind().name())?;
        output.partition = Some(partition_aggregates(&output.aggregates, &*regime, &t)?);
    } else {
        let rule: RegimeKind = args.rule.or(args.regime).unwrap_or(RuleArg::Pfn).into();
        let regime = registry.get(rule.name())?;
        let (rows, group): (Vec<(String, [Pfn; 3])>, bool) = if let Some(path) = &args.loss {
            let l = load_loss(path)?;
            let modes = loss_modes(&l, EPS_CMP);
            if modes.is_empty() {
                return Err(Error::LossOrder(format!("{}", path.display())).into());
            }
            warn_modes(&modes, rule, "the loss function");
            let rows = expected_loss_matrix(&s, &l)?;
            (
                rows.into_iter()
                    .map(|r| (r.agent.clone(), r.losses()))
                    .collect(),
                false,
            )
        } else {
            let panel = load_panel(args.panel.as_deref().expect("one driver is set"))?;
            warn_modes(&panel.common_modes(), rule, "the expert panel");
            let g = group_matrices(&s, &panel)?;
            (
                g.pfn
                    .into_iter()
                    .map(|r| (r.agent.clone(), r.losses()))
                    .collect(),
                true,
            )
        };
        let classes: Vec<_> = rows
            .iter()
            .map(|(a, ls)| classify_losses(a, ls, &*regime))
            .collect();
        output.partition = Some(AlliancePartition::from_regions(
            rule,
            classes.iter().map(|c| (c.agent.as_str(), c.region)),
        ));
        output.matrix = Some(Matrix {
            title: matrix_title(rule, group),
            rows: pfn_rows(rows, rule),
        });
    }
    Ok((output.render(args.out, args.precision as usize), 0))
}

fn reproduce_cmd(args: &ReproduceArgs, eps: f64) -> CmdResult {
    let mut data = ReferenceData::default();
    if let Some(path) = &args.system {
        data.system = load(path, args.format)?.0;
    }
    if let Some(path) = &args.loss {
        data.loss = load_loss(path)?;
    }
    if let Some(path) = &args.panel {
        data.panel = load_panel(path)?;
    }
    let registry = RegimeRegistry::with_tolerance(eps);
    let report = reproduce::run_with(&data, &registry)?;

    let mut text = String::new();
    if args.tables {
        text.push_str(&recomputed_tables(
            &data,
            args.out,
            args.precision as usize,
        )?);
        text.push('\n');
    }
    for check in &report.checks {
        text.push_str(&format!("{check}\n"));
    }
    let failed = report.failures().count();
    text.push_str(&format!(
        "{} checks, {} passed, {} failed\n",
        report.checks.len(),
        report.checks.len() - failed,
        failed
    ));
    Ok((text, if failed == 0 { 0 } else { 4 }))
}

fn recomputed_tables(
    data: &ReferenceData,
    out: OutFormat,
    precision: usize,
) -> Result<String, Failure> {
    let single = expected_loss_matrix(&data.system, &data.loss)?;
    let group = group_matrices(&data.system, &data.panel)?;
    let mut parts = vec![Output {
        aggregates: aggregate_all(&data.system),
        ..Output::default()
    }];
    let single_rows: Vec<_> = single
        .iter()
        .map(|r| (r.agent.clone(), r.losses()))
        .collect();
    let group_rows: Vec<_> = group
        .pfn
        .iter()
        .map(|r| (r.agent.clone(), r.losses()))
        .collect();
    for (rows, is_group) in [(&single_rows, false), (&group_rows, true)] {
        for rule in RegimeKind::ALL {
            parts.push(Output {
                matrix: Some(Matrix {
                    title: matrix_title(rule, is_group),
                    rows: pfn_rows(rows.clone(), rule),
                }),
                ..Output::default()
            });
        }
    }
    if out == OutFormat::Json {
        let docs: Vec<_> = parts.iter().map(|p| p.json(precision)).collect();
        let mut text = serde_json::to_string_pretty(&docs).expect("serializable");
        text.push('\n');
        return Ok(text);
    }
    Ok(parts
        .iter()
        .map(|p| p.render(out, precision))
        .collect::<Vec<_>>()
        .join("\n"))
}
