//! The `repfuse` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::Config;
use crate::error::Error;
use crate::fusion::{
    fuse_components, generated_algebra, ideal_check, min_power_to_regular, span_of_products, GroupTag, Relation,
    RuleSet,
};
use crate::labels::{Component, GroupKind};
use crate::report::{run_suites, to_json, Suite};
use crate::spectrum::{spectrum_layers, SpectrumGroup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ENGINE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GroupArg {
    Heisenberg,
    Sl2r,
    Moore,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl From<Switch> for bool {
    fn from(s: Switch) -> bool {
        s == Switch::On
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "repfuse",
    version,
    about = "Fusion rules for Heisenberg and SL(2,R) coefficient spaces, and grid checks of the Schrödinger formulas",
    after_help = "Any config key can be overridden as --key=value, e.g. --grid.N=64 --tol.intertwiner=1e-7 --seed=7."
)]
struct Cli {
    /// Config file of `key = value` lines.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Where `verify` writes its JSON report.
    #[arg(long, global = true, value_name = "PATH", default_value = "report.json")]
    out: PathBuf,
    /// Group whose rules apply; inferred from the components when omitted.
    #[arg(long, global = true, value_enum)]
    group: Option<GroupArg>,
    /// Dimension parameter of the Heisenberg group H_n.
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,
    #[arg(long, global = true, value_enum, value_name = "on|off")]
    trivial_identity: Option<Switch>,
    #[arg(long, global = true, value_enum, value_name = "on|off")]
    regular_absorbs: Option<Switch>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fuse components left to right, e.g. `fuse 'rho(1)' 'rho(-1)'`.
    Fuse {
        #[arg(required = true, num_args = 1..)]
        components: Vec<String>,
    },
    /// Closed subalgebra generated by the given components.
    Generate {
        /// Seed with every pure atom of the group.
        #[arg(long, conflicts_with = "components")]
        all_atoms: bool,
        components: Vec<String>,
    },
    /// Span of pairwise products of the generated algebra.
    Span2,
    /// Smallest power of an SL(2,R) component inside the regular part.
    Minpower { component: String },
    /// Whether I is an ideal in A (default: the algebra generated by all atoms).
    Ideal { ideal: String, algebra: Option<String> },
    /// Layers of the spectrum of a(G).
    Spectrum,
    /// Run verification suites and write the JSON report.
    Verify {
        /// Comma-separated suite names, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

enum Failure {
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Config(_) => Failure::Usage(e.to_string()),
            other => Failure::Engine(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Split `--section.key=value` and `--seed=value` style config overrides from the rest.
fn split_overrides(args: Vec<OsString>) -> CliResult<(Vec<OsString>, Vec<(String, String)>)> {
    let mut rest = Vec::new();
    let mut overrides = Vec::new();
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        let Some(text) = arg.to_str() else {
            rest.push(arg);
            continue;
        };
        if text == "--" {
            rest.push(arg);
            rest.extend(iter);
            break;
        }
        let Some(body) = text.strip_prefix("--") else {
            rest.push(arg);
            continue;
        };
        let (key, inline) = match body.split_once('=') {
            Some((k, v)) => (k, Some(v.to_string())),
            None => (body, None),
        };
        if !(key.contains('.') || key == "seed") {
            rest.push(arg);
            continue;
        }
        let value = match inline {
            Some(v) => v,
            None => iter
                .next()
                .and_then(|v| v.into_string().ok())
                .ok_or_else(|| Failure::Usage(format!("--{key} needs a value")))?,
        };
        overrides.push((key.to_string(), value));
    }
    Ok((rest, overrides))
}

fn load_config(cli: &Cli, overrides: &[(String, String)]) -> CliResult<Config> {
    let mut config = match &cli.config {
        Some(path) => Config::load(path, true)?,
        None => Config::load(&PathBuf::from("repfuse.conf"), false)?,
    };
    for (key, value) in overrides {
        config.set(key, value)?;
    }
    if let Some(s) = cli.trivial_identity {
        config.rules.trivial_identity = s.into();
    }
    if let Some(s) = cli.regular_absorbs {
        config.rules.regular_absorbs = s.into();
    }
    config.validate()?;
    Ok(config)
}

fn parse_components(specs: &[String]) -> CliResult<Vec<Component>> {
    specs.iter().map(|s| s.parse::<Component>().map_err(|e| Failure::Usage(e.to_string()))).collect()
}

fn group_tag(cli: &Cli, seen: &[Component]) -> CliResult<GroupTag> {
    let tag = |kind| match kind {
        GroupKind::Heisenberg => GroupTag::Heisenberg(cli.n),
        GroupKind::Sl2r => GroupTag::Sl2r,
    };
    match cli.group {
        Some(GroupArg::Heisenberg) => Ok(GroupTag::Heisenberg(cli.n)),
        Some(GroupArg::Sl2r) => Ok(GroupTag::Sl2r),
        Some(GroupArg::Moore) => Err(Failure::Usage("--group=moore is only meaningful for `spectrum`".into())),
        None => {
            let mut kind = None;
            for c in seen {
                match (kind, c.group()?) {
                    (_, None) => {}
                    (None, k) => kind = k,
                    (Some(a), Some(b)) if a != b => {
                        return Err(Failure::Usage(format!("components mix {a} and {b} atoms")));
                    }
                    _ => {}
                }
            }
            kind.map(tag).ok_or_else(|| Failure::Usage("cannot infer the group; pass --group".into()))
        }
    }
}

fn rules_for(tag: GroupTag, config: &Config) -> RuleSet {
    RuleSet::new(tag)
        .with_trivial_identity(config.rules.trivial_identity)
        .with_regular_absorbs(config.rules.regular_absorbs)
}

fn all_atoms(tag: GroupTag) -> Component {
    match tag {
        GroupTag::Heisenberg(_) => Component::heisenberg_pure(),
        GroupTag::Sl2r => Component::sl2_pure(),
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, json: bool, value: &T, text: &str) -> CliResult<()> {
    let rendered = if json {
        serde_json::to_string_pretty(value).map_err(|e| Failure::Engine(Error::Config(e.to_string())))?
    } else {
        text.to_string()
    };
    writeln!(out, "{rendered}").map_err(|e| Failure::Engine(e.into()))
}

fn execute(cli: &Cli, config: &Config, out: &mut dyn Write) -> CliResult<i32> {
    let json = cli.json;
    match &cli.command {
        Command::Fuse { components } => {
            let comps = parse_components(components)?;
            if comps.len() < 2 {
                return Err(Failure::Usage("fuse needs at least two components".into()));
            }
            let rules = rules_for(group_tag(cli, &comps)?, config);
            let mut result = fuse_components(&comps[0], &comps[1], &rules)?;
            for c in &comps[2..] {
                let next = fuse_components(&result.result, c, &rules)?;
                if next.relation == Relation::QuasiContainment {
                    result.relation = Relation::QuasiContainment;
                }
                result.rules.extend(next.rules);
                result.result = next.result;
            }
            emit(out, json, &result, &format!("{result}\nflags: {}", result.flags))?;
        }
        Command::Generate { all_atoms: all, components } => {
            let mut seeds = parse_components(components)?;
            let tag = group_tag(cli, &seeds)?;
            if *all {
                seeds.push(all_atoms(tag));
            }
            if seeds.is_empty() {
                return Err(Failure::Usage("generate needs components or --all-atoms".into()));
            }
            let rules = rules_for(tag, config);
            let algebra = generated_algebra(&seeds, &rules)?;
            emit(out, json, &algebra, &algebra.to_string())?;
        }
        Command::Span2 => {
            let tag = group_tag(cli, &[])?;
            let rules = rules_for(tag, config);
            let algebra = generated_algebra(&[all_atoms(tag)], &rules)?;
            let span = span_of_products(&algebra, &algebra, &rules)?;
            emit(out, json, &span, &format!("{span}\nflags: {}", rules.flags))?;
        }
        Command::Minpower { component } => {
            let comps = parse_components(std::slice::from_ref(component))?;
            let rules = rules_for(group_tag(cli, &comps)?, config);
            let mp = min_power_to_regular(&comps[0], &rules)?;
            let power = mp.power.map_or_else(|| "none".to_string(), |p| p.to_string());
            let text = match mp.squaring_bound {
                Some(b) => format!("{power}\nsquaring bound: {b:.6}"),
                None => power,
            };
            emit(out, json, &mp, &text)?;
        }
        Command::Ideal { ideal, algebra } => {
            let candidate = parse_components(std::slice::from_ref(ideal))?.remove(0);
            let given = parse_components(algebra.as_slice())?.pop();
            let mut seen = vec![candidate.clone()];
            seen.extend(given.clone());
            let tag = group_tag(cli, &seen)?;
            let rules = rules_for(tag, config);
            let algebra = match given {
                Some(a) => a,
                None => generated_algebra(&[all_atoms(tag)], &rules)?,
            };
            let verdict = ideal_check(&candidate, &algebra, &rules)?;
            let value = serde_json::json!({ "ideal": candidate, "algebra": algebra, "is_ideal": verdict });
            emit(out, json, &value, &verdict.to_string())?;
        }
        Command::Spectrum => {
            let groups = match cli.group {
                Some(GroupArg::Heisenberg) => vec![SpectrumGroup::Heisenberg(cli.n)],
                Some(GroupArg::Sl2r) => vec![SpectrumGroup::Sl2r],
                Some(GroupArg::Moore) => vec![SpectrumGroup::Moore],
                None => vec![SpectrumGroup::Heisenberg(cli.n), SpectrumGroup::Sl2r, SpectrumGroup::Moore],
            };
            let layers: Vec<_> = groups.iter().map(|g| (*g, spectrum_layers(*g))).collect();
            let text = layers
                .iter()
                .map(|(g, ls)| {
                    let body: Vec<String> = ls.iter().map(|l| format!("  {l}")).collect();
                    format!("{}:\n{}", spectrum_name(*g), body.join("\n"))
                })
                .collect::<Vec<_>>()
                .join("\n");
            let value: Vec<_> = layers.iter().map(|(g, ls)| serde_json::json!({ "group": g, "layers": ls })).collect();
            emit(out, json, &value, &text)?;
        }
        Command::Verify { suite } => {
            let suites = Suite::parse_list(suite).map_err(|e| Failure::Usage(e.to_string()))?;
            let reports = run_suites(&suites, config);
            let body = to_json(&reports)?;
            std::fs::write(&cli.out, body + "\n")
                .map_err(|e| Failure::Engine(Error::Config(format!("{}: {e}", cli.out.display()))))?;
            if json {
                emit(out, true, &reports, "")?;
            } else {
                for r in &reports {
                    writeln!(out, "{r}").map_err(|e| Failure::Engine(e.into()))?;
                }
            }
            let failed = reports.iter().filter(|r| !r.pass).count();
            if !json {
                writeln!(out, "{} checks, {} failed; report written to {}", reports.len(), failed, cli.out.display())
                    .map_err(|e| Failure::Engine(e.into()))?;
            }
            return Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED });
        }
    }
    Ok(EXIT_OK)
}

fn spectrum_name(g: SpectrumGroup) -> String {
    match g {
        SpectrumGroup::Heisenberg(n) => format!("H_{n}"),
        SpectrumGroup::Sl2r => "SL2(R)".into(),
        SpectrumGroup::Moore => "Moore group".into(),
    }
}

/// Run the command line `args` (program name first) and return the exit code.
pub fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let outcome = split_overrides(args.into_iter().collect()).and_then(|(rest, overrides)| {
        let cli = match Cli::try_parse_from(rest) {
            Ok(cli) => cli,
            Err(e) => {
                let code = match e.kind() {
                    ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                    _ => EXIT_USAGE,
                };
                let _ = e.print();
                return Ok(code);
            }
        };
        let config = load_config(&cli, &overrides)?;
        execute(&cli, &config, &mut out)
    });
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            EXIT_ENGINE
        }
    }
}
