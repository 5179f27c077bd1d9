//! The `yy` command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on bad flags or
//! inputs.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::curves::{CurveSpec, Family};
use crate::error::{Error, Result};
use crate::geometry::CirclePoint;
use crate::render::{self, RenderConfig, EVOLUTION};
use crate::verify::{self, Axiom, VerifyOptions};

#[derive(Debug, Parser)]
#[command(
    name = "yy",
    version,
    about = "Fermat-spiral yin-yang curves: verify, render, cross-check"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write an SVG symbol.
    Render(RenderArgs),
    /// Check the axioms for a curve and emit a JSON report.
    Verify(VerifyArgs),
    /// Monte-Carlo estimate of the reflection overlap at one g.
    Oracle(OracleArgs),
    /// List built-in curve and render presets.
    Presets {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct CurveArgs {
    /// Built-in curve preset; explicit flags override its fields.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    turns: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    parts: Option<u32>,
    /// JSON table of (u, v) samples for the custom family.
    #[arg(long)]
    samples: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    curve: CurveArgs,
    #[arg(long, default_value_t = 512)]
    g_grid: usize,
    #[arg(long, default_value_t = 100_000)]
    v_quad: usize,
    #[arg(long, default_value_t = 6)]
    q_max: u32,
    /// Flatness tolerance; defaults to 1e-6, or 1e-4 for sample tables.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Monte-Carlo samples for the cross-check at the worst g; 0 disables it.
    #[arg(long, default_value_t = 100_000)]
    oracle_samples: u64,
    /// Comma-separated axioms deciding the exit code, e.g. A1,A2,A3'',A4.
    #[arg(long, value_delimiter = ',')]
    axioms: Option<Vec<String>>,
    /// Report path; without it the report goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also print the report to stdout when writing to --out.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    curve: CurveArgs,
    #[arg(long, default_value_t = 0.25)]
    g: f64,
    #[arg(long, default_value_t = 1_000_000)]
    n: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct RenderArgs {
    /// Render preset: classic, britannica, chosun or korea1882.
    #[arg(long)]
    preset: Option<String>,
    /// JSON file with RenderConfig fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    turn: Option<f64>,
    /// Extra rotation in degrees.
    #[arg(long, allow_hyphen_values = true)]
    rotate: Option<f64>,
    #[arg(long, action = clap::ArgAction::Set)]
    clockwise: Option<bool>,
    #[arg(long)]
    interpol: Option<f64>,
    #[arg(long)]
    parts: Option<u32>,
    #[arg(long)]
    radius_px: Option<f64>,
    /// SVG path; without it the SVG goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the four evolution phases into this directory.
    #[arg(long)]
    evolution: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match cli.command {
        Command::Render(args) => run_render(args),
        Command::Verify(args) => run_verify(args),
        Command::Oracle(args) => run_oracle(args),
        Command::Presets { json } => run_presets(json),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::Verification) => 1,
        Err(Failure::Usage(msg)) => {
            eprintln!("yy: {msg}");
            2
        }
    }
}

/// A sample table file: either a bare list of pairs or `{"samples": [...]}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum SampleFile {
    Pairs(Vec<[f64; 2]>),
    Wrapped { samples: Vec<[f64; 2]> },
}

fn read_samples(path: &Path) -> Result<Vec<[f64; 2]>> {
    let text = fs::read_to_string(path)?;
    Ok(match serde_json::from_str(&text)? {
        SampleFile::Pairs(p) => p,
        SampleFile::Wrapped { samples } => samples,
    })
}

#[derive(Debug, Clone, Serialize)]
struct CurvePreset {
    name: &'static str,
    description: &'static str,
    spec: CurveSpec,
}

fn curve_presets() -> Vec<CurvePreset> {
    vec![
        CurvePreset {
            name: "fermat",
            description: "one-turn Fermat spiral, the perfect yin-yang line",
            spec: CurveSpec::fermat(1.0),
        },
        CurvePreset {
            name: "fermat2",
            description: "two-turn Fermat spiral, perfect with two radial crossings",
            spec: CurveSpec::fermat(2.0),
        },
        CurvePreset {
            name: "sine",
            description: "perfect sine perturbation 2u + (lambda/pi) sin 8 pi u, lambda = 0.1",
            spec: CurveSpec::sine(0.1),
        },
        CurvePreset {
            name: "ck",
            description: "perfect C^1 polynomial perturbation, lambda = 4, k = 1",
            spec: CurveSpec::ck(4.0, 1),
        },
    ]
}

fn curve_spec(args: &CurveArgs) -> Result<CurveSpec> {
    let mut spec = match &args.preset {
        Some(name) => curve_presets()
            .into_iter()
            .find(|p| p.name == name)
            .map(|p| p.spec)
            .ok_or_else(|| Error::UnknownPreset(name.clone()))?,
        None => CurveSpec::fermat(1.0),
    };
    let missing = |name: &'static str| Error::InvalidParameter {
        name,
        value: f64::NAN,
        reason: "required for this family".into(),
    };
    if let Some(family) = args.family {
        spec = match family {
            Family::Fermat => CurveSpec::fermat(1.0),
            Family::Sine => CurveSpec::sine(args.lambda.ok_or_else(|| missing("lambda"))?),
            Family::Ck => CurveSpec::ck(
                args.lambda.ok_or_else(|| missing("lambda"))?,
                args.k.ok_or_else(|| missing("k"))?,
            ),
            Family::Custom => {
                let path = args.samples.as_ref().ok_or_else(|| {
                    Error::InvalidTable("the custom family needs --samples <path.json>".into())
                })?;
                CurveSpec::custom(read_samples(path)?)
            }
        };
    } else if let Some(path) = &args.samples {
        spec = CurveSpec::custom(read_samples(path)?);
    }
    if let Some(turns) = args.turns {
        spec.turns = turns;
    }
    if let Some(lambda) = args.lambda {
        if spec.lambda.is_some() {
            spec.lambda = Some(lambda);
        }
    }
    if let Some(k) = args.k {
        if spec.k.is_some() {
            spec.k = Some(k);
        }
    }
    if let Some(parts) = args.parts {
        spec.parts = parts;
    }
    spec.build()?;
    Ok(spec)
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => Ok(fs::write(path, text)?),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run_verify(args: VerifyArgs) -> std::result::Result<(), Failure> {
    let spec = curve_spec(&args.curve)?;
    let axioms = args
        .axioms
        .as_ref()
        .map(|list| {
            list.iter()
                .map(|s| {
                    Axiom::parse(s.trim())
                        .ok_or_else(|| Failure::Usage(format!("unknown axiom {s:?}")))
                })
                .collect::<std::result::Result<Vec<_>, _>>()
        })
        .transpose()?;
    if args.tolerance.is_some_and(|t| t.is_nan() || t < 0.0) {
        return Err(Failure::Usage("--tolerance must be non-negative".into()));
    }
    let opts = VerifyOptions {
        g_grid: args.g_grid,
        v_quad: args.v_quad,
        q_max: args.q_max,
        tolerance: args.tolerance,
        seed: args.seed,
        oracle_samples: args.oracle_samples,
        axioms,
    };
    let report = verify::check_axioms(&spec, &opts)?;
    let json = report.to_json();
    match &args.out {
        Some(path) => {
            fs::write(path, &json).map_err(Error::from)?;
            if args.json {
                println!("{json}");
            } else {
                let verdicts: Vec<String> = report
                    .requested
                    .iter()
                    .map(|a| {
                        let v = report.verdict(*a);
                        format!("{} {}", a.id(), if v.pass { "pass" } else { "FAIL" })
                    })
                    .collect();
                println!(
                    "{}; max_dev {:.3e}; {}",
                    verdicts.join(", "),
                    report.profile.max_dev,
                    if report.pass { "PASS" } else { "FAIL" }
                );
            }
        }
        None => println!("{json}"),
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run_oracle(args: OracleArgs) -> std::result::Result<(), Failure> {
    let spec = curve_spec(&args.curve)?;
    if !args.g.is_finite() {
        return Err(Failure::Usage("--g must be finite".into()));
    }
    let curve = spec.build()?;
    let estimate = verify::monte_carlo_overlap(&curve, CirclePoint::new(args.g), args.n, args.seed);
    let json = serde_json::to_string_pretty(&estimate).map_err(Error::from)?;
    write_or_print(args.out.as_deref(), &json)?;
    if args.out.is_some() && args.json {
        println!("{json}");
    }
    Ok(())
}

fn render_config(args: &RenderArgs) -> Result<RenderConfig> {
    let mut config = match (&args.config, &args.preset) {
        (Some(path), _) => serde_json::from_str(&fs::read_to_string(path)?)?,
        (None, Some(name)) => render::preset(name)?,
        (None, None) => RenderConfig::default(),
    };
    if let Some(turn) = args.turn {
        config.turn = turn;
    }
    if let Some(rotate) = args.rotate {
        config.rotate_deg = rotate;
    }
    if let Some(clockwise) = args.clockwise {
        config.clockwise = clockwise;
    }
    if let Some(step) = args.interpol {
        config.interpol = Some(step);
    }
    if let Some(parts) = args.parts {
        config.parts = parts;
    }
    if let Some(radius) = args.radius_px {
        config.radius_px = radius;
    }
    config.validate()?;
    Ok(config)
}

fn run_render(args: RenderArgs) -> std::result::Result<(), Failure> {
    let config = render_config(&args)?;
    if let Some(dir) = &args.evolution {
        fs::create_dir_all(dir).map_err(Error::from)?;
        for (label, turn) in EVOLUTION {
            let phase = RenderConfig {
                turn,
                interpol: args.interpol,
                ..config.clone()
            };
            let svg = render::render(&phase)?.to_string();
            fs::write(dir.join(format!("evolution-{label}.svg")), svg).map_err(Error::from)?;
        }
        return Ok(());
    }
    let svg = render::render(&config)?.to_string();
    match &args.out {
        Some(path) => fs::write(path, svg).map_err(Error::from)?,
        None => print!("{svg}"),
    }
    Ok(())
}

fn run_presets(json: bool) -> std::result::Result<(), Failure> {
    let curves = curve_presets();
    let renders = render::presets();
    if json {
        let value = serde_json::json!({ "curves": curves, "render": renders });
        println!(
            "{}",
            serde_json::to_string_pretty(&value).map_err(Error::from)?
        );
        return Ok(());
    }
    println!("curve presets (verify, oracle):");
    for p in &curves {
        println!("  {:<11} {}", p.name, p.description);
    }
    println!("render presets (render):");
    for p in &renders {
        println!("  {:<11} {}", p.name, p.description);
    }
    Ok(())
}
