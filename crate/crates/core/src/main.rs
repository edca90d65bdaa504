use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use covq::einstein::EPhasePoint;
use covq::galilei::GPhasePoint;
use covq::harness::{
    emit_report, integrate_einstein, integrate_galilei, load_model, run_suite_on, HarnessError, LoadedModel,
    OrbitError, OrbitReport, ReportFormat, RunConfig,
};
use covq::modelspec::Framework;

#[derive(Parser)]
#[command(name = "covq", version, about = "Numerical certification of covariant classical and quantum brackets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named check suite on a model.
    Verify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Tolerance override, `name=value`; repeatable.
        #[arg(long = "tol", value_name = "NAME=VALUE")]
        tol: Vec<String>,
        #[arg(long, default_value = "text")]
        report: ReportFormat,
    },
    /// Integrate the dynamical connection from an initial phase point.
    Orbit {
        #[arg(long)]
        model: PathBuf,
        /// `g` (galilei) or `e` (einstein).
        #[arg(long)]
        framework: Framework,
        /// Initial spacetime point `x0,x1,x2,x3`.
        #[arg(long, value_parser = parse_list::<4>, allow_hyphen_values = true)]
        x0: [f64; 4],
        /// Initial velocity `v1,v2,v3`.
        #[arg(long, value_parser = parse_list::<3>, allow_hyphen_values = true)]
        v: [f64; 3],
        /// Flow parameter span: coordinate time (galilei) or proper time (einstein).
        #[arg(long, allow_hyphen_values = true)]
        duration: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Number of evenly spaced samples to print.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value = "text")]
        report: ReportFormat,
    },
}

fn parse_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let values = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    values.try_into().map_err(|v: Vec<f64>| format!("expected {N} comma-separated values, got {}", v.len()))
}

#[derive(Serialize)]
struct OrbitSummary<'a> {
    model: &'a str,
    framework: String,
    steps: usize,
    max_law_residual: f64,
    samples: Vec<(f64, Vec<f64>)>,
}

fn summarize<'a>(model: &'a str, r: &OrbitReport, samples: usize) -> OrbitSummary<'a> {
    let tr = &r.trajectory;
    let last = tr.states.len() - 1;
    let picks = samples.clamp(2, tr.states.len());
    let mut idx: Vec<usize> = (0..picks).map(|k| k * last / (picks - 1)).collect();
    idx.dedup();
    OrbitSummary {
        model,
        framework: r.framework.to_string(),
        steps: last,
        max_law_residual: r.max_law_residual(),
        samples: idx.into_iter().map(|k| (tr.params[k], tr.states[k].to_vec())).collect(),
    }
}

fn print_orbit(s: &OrbitSummary, format: ReportFormat) {
    let mut out = std::io::stdout().lock();
    match format {
        ReportFormat::Json => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(s).expect("plain data"));
        }
        ReportFormat::Text => {
            let _ = writeln!(out, "orbit on {} ({}), {} steps", s.model, s.framework, s.steps);
            let _ = writeln!(out, "{:>10}  x0 x1 x2 x3 | v1 v2 v3", "param");
            for (t, st) in &s.samples {
                let cells: Vec<String> = st.iter().map(|c| format!("{c:.9}")).collect();
                let _ = writeln!(out, "{t:>10.5}  {} | {}", cells[..4].join(" "), cells[4..].join(" "));
            }
            let _ = writeln!(out, "max law-of-motion residual {:.3e}", s.max_law_residual);
        }
    }
}

fn run(cli: Cli) -> Result<u8, HarnessError> {
    match cli.command {
        Command::Verify { model, suite, points, seed, tol, report } => {
            let mut cfg = RunConfig::new(points, seed);
            for spec in &tol {
                cfg = cfg.with_override(spec)?;
            }
            let loaded = load_model(&model)?;
            let r = run_suite_on(&loaded, &suite, &cfg)?;
            std::io::stdout().write_all(&emit_report(&r, report)).expect("stdout");
            Ok(r.exit_code() as u8)
        }
        Command::Orbit { model, framework, x0, v, duration, step, samples, report } => {
            let loaded = load_model(&model)?;
            let result = match (&loaded, framework) {
                (LoadedModel::Galilei(m), Framework::Galilei) => {
                    integrate_galilei(m, &GPhasePoint::new(x0, v), duration, step)
                }
                (LoadedModel::Einstein(m), Framework::Einstein) => {
                    integrate_einstein(m, &EPhasePoint::new(x0, v), duration, step)
                }
                (m, expected) => {
                    return Err(HarnessError::Model(covq::modelspec::ModelError::FrameworkMismatch {
                        name: m.name().into(),
                        expected,
                        found: m.framework(),
                    }))
                }
            };
            match result {
                Ok(r) => {
                    print_orbit(&summarize(loaded.name(), &r, samples), report);
                    Ok(0)
                }
                Err(e @ (OrbitError::BoxExit { .. } | OrbitError::LightconeExit { .. })) => {
                    eprintln!("covq: {e}");
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("covq: {e}");
            ExitCode::from(2)
        }
    }
}
