use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use khoxotic_cli::cache::{default_dir, Cache, CACHE_ENV};
use khoxotic_cli::guard::{parse_window, DEFAULT_BUDGET};
use khoxotic_cli::*;
use serde_json::Value;

#[derive(Parser)]
#[command(name = "khoxotic", version, about = "Khovanov homology, ribbon-disk functionals and CP2 surface maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Grading window, e.g. `i=0,j=-1` or `i=-1..1`.
    #[arg(long, global = true)]
    window: Option<String>,
    /// Cache directory (default ~/.cache/khoxotic).
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    /// Do not read or write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Run even when the generator estimate exceeds the budget.
    #[arg(long, global = true)]
    force: bool,
    /// R-move certificates for band presentations the simplifier cannot finish.
    #[arg(long, global = true)]
    certificate: Option<PathBuf>,
    /// Generator budget for the size guard.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Directory holding the shipped knot and band assets.
    #[arg(long, global = true, env = "KHOXOTIC_DATA_DIR", default_value = "data")]
    data_dir: PathBuf,
    /// Add wall-clock timings to the report (makes it non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Bigraded Khovanov homology over the integers of a PD file.
    Homology { file: PathBuf },
    /// Distinguish two ribbon disks by their maps on Kh^{0,-1}.
    VerifyHs {
        k: Option<u32>,
        #[arg(long)]
        sigma: Option<PathBuf>,
        #[arg(long)]
        sigma_prime: Option<PathBuf>,
        /// Compare the first disk with itself.
        #[arg(long)]
        self_test: bool,
    },
    /// Blow the disks up into the punctured CP2, compare and distinguish.
    Theorem1 {
        k: Option<u32>,
        #[arg(long)]
        sigma: Option<PathBuf>,
        #[arg(long)]
        sigma_prime: Option<PathBuf>,
        /// Use this CP2 presentation instead of the blow-up of the first disk.
        #[arg(long)]
        cp2: Option<PathBuf>,
        #[arg(long)]
        cp2_prime: Option<PathBuf>,
        /// Blow up the trivial disk of the unknot instead.
        #[arg(long)]
        self_test: bool,
    },
    /// Kh^{0,j} of T(p+q,p+q)_{p,q} up to gr_q for every p+q <= max_n.
    TorusTable { max_n: usize },
    /// Validate a movie file frame by frame.
    MovieCheck { file: PathBuf },
    /// Functional of a surface in the punctured CP2.
    Cp2Map { file: PathBuf },
    /// Planar-diagram code of a link for hyperbolic-geometry tools.
    ExportLink { file: PathBuf },
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let window = cli.window.as_deref().map(parse_window).transpose().map_err(CliError::Input)?;
    let dir = cli.cache_dir.clone().unwrap_or_else(default_dir);
    let cache = Cache::open((!cli.no_cache).then_some(dir.as_path()))?;
    let opts = Options {
        cache,
        window,
        budget: cli.budget,
        force: cli.force,
        certificate: cli.certificate.clone(),
        data_dir: cli.data_dir.clone(),
        timings: cli.timings,
    };
    match &cli.command {
        Command::Homology { file } => cmd_homology(file, &opts),
        Command::VerifyHs { k, sigma, sigma_prime, self_test } => cmd_verify_hs(
            &DiskArgs { k: *k, sigma: sigma.as_deref(), sigma_prime: sigma_prime.as_deref(), self_test: *self_test },
            &opts,
        ),
        Command::Theorem1 { k, sigma, sigma_prime, cp2, cp2_prime, self_test } => cmd_theorem1(
            &Theorem1Args {
                disks: DiskArgs {
                    k: *k,
                    sigma: sigma.as_deref(),
                    sigma_prime: sigma_prime.as_deref(),
                    self_test: *self_test,
                },
                cp2: cp2.as_deref(),
                cp2_prime: cp2_prime.as_deref(),
            },
            &opts,
        ),
        Command::TorusTable { max_n } => cmd_torus_table(*max_n, &opts),
        Command::MovieCheck { file } => cmd_movie_check(file, &opts),
        Command::Cp2Map { file } => cmd_cp2_map(file, &opts),
        Command::ExportLink { file } => cmd_export_link(file, &opts),
    }
}

/// Plain-text rendering: the homology groups as a table, everything else as
/// indented key/value lines.
fn render(report: &Report) -> String {
    let mut out = format!("{} ({:?})\n", report.command, report.outcome);
    if let Some(groups) = report.results.get("groups").and_then(Value::as_array) {
        out.push_str("   i    j  group\n");
        for g in groups {
            let mut parts = Vec::new();
            match g["rank"].as_u64() {
                Some(0) => {}
                Some(1) => parts.push("Z".to_string()),
                Some(r) => parts.push(format!("Z^{r}")),
                None => {}
            }
            for t in g["torsion"].as_array().into_iter().flatten() {
                parts.push(format!("Z/{t}"));
            }
            let (i, j) = (g["i"].as_i64().unwrap_or(0), g["j"].as_i64().unwrap_or(0));
            out.push_str(&format!("{i:>4} {j:>4}  {}\n", parts.join(" + ")));
        }
        return out;
    }
    fn walk(v: &Value, indent: usize, out: &mut String) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    if x.is_object() || x.as_array().is_some_and(|a| a.iter().any(|e| e.is_object())) {
                        out.push_str(&format!("{:indent$}{k}:\n", ""));
                        walk(x, indent + 2, out);
                    } else {
                        out.push_str(&format!("{:indent$}{k}: {x}\n", ""));
                    }
                }
            }
            Value::Array(a) => {
                for x in a {
                    out.push_str(&format!("{:indent$}-\n", ""));
                    walk(x, indent + 2, out);
                }
            }
            other => out.push_str(&format!("{:indent$}{other}\n", "")),
        }
    }
    walk(&report.results, 2, &mut out);
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: --jobs ignored: {e}");
        }
    }
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                print!("{}", report.to_json());
            } else {
                print!("{}", render(&report));
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("khoxotic: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
