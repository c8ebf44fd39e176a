use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use wgamp_cli::output::{write_outputs, write_plot_script};
use wgamp_cli::run::run;
use wgamp_cli::scenario::{bundled, bundled_names, Scenario};

const DEFAULT_OUT_DIR: &str = "wgamp-out";

#[derive(Parser)]
#[command(name = "wgamp", version, about = "Waveguide three-level emitter scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a bundled scenario by name.
    Run {
        scenario: String,
        /// Output directory; results go to DIR/<scenario name>/.
        #[arg(long, env = "WGAMP_OUT_DIR", default_value = DEFAULT_OUT_DIR)]
        out: PathBuf,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Also write a matplotlib script next to the CSV files.
        #[arg(long)]
        emit_plots: bool,
    },
    /// Print the bundled scenario names.
    List,
}

fn fail(code: u8, kind: &str, message: String) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "message": message }));
    ExitCode::from(code)
}

fn load(spec: &str) -> Result<Scenario, String> {
    let path = Path::new(spec);
    if path.exists() {
        return Scenario::from_path(path).map_err(|e| e.to_string());
    }
    match bundled(spec) {
        Some(s) => s.map_err(|e| e.to_string()),
        None => Err(format!("no scenario file or bundled scenario named `{spec}`")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for name in bundled_names() {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        Command::Run {
            scenario,
            out,
            jobs,
            emit_plots,
        } => {
            let scenario = match load(&scenario) {
                Ok(s) => s,
                Err(e) => return fail(2, "invalid_scenario", e),
            };
            if jobs == Some(0) {
                return fail(2, "invalid_arguments", "--jobs must be at least 1".into());
            }
            let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.unwrap_or(0)).build();
            let output = match pool {
                Ok(pool) => pool.install(|| run(&scenario)),
                Err(e) => return fail(1, "thread_pool", e.to_string()),
            };
            let dir = out.join(&scenario.name);
            let mut written = match write_outputs(&dir, &scenario, &output) {
                Ok(w) => w,
                Err(e) => return fail(1, "io", e.to_string()),
            };
            if emit_plots {
                match write_plot_script(&dir, &scenario) {
                    Ok(p) => written.push(p),
                    Err(e) => return fail(1, "io", e.to_string()),
                }
            }
            for p in &written {
                println!("{}", p.display());
            }
            if output.errors.is_empty() {
                ExitCode::SUCCESS
            } else {
                eprintln!(
                    "{}",
                    json!({ "error": "point_failures", "count": output.errors.len(), "sidecar": dir.join("errors.csv") })
                );
                ExitCode::from(3)
            }
        }
    }
}
