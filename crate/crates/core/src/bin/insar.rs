use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use insar::config::Config;
use insar::pipeline::{self, CAPTURE_FILE, CLOUD_FILE, MAP_FILE, STACK_FILE};
use insar::{InsarError, Result};

#[derive(Parser)]
#[command(name = "insar", version, about = "Automotive InSAR elevation mapping")]
struct Cli {
    /// Key-value configuration file; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Noise seed, overriding the config's `seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for outputs given as relative paths.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a raw capture from a scene and a trajectory.
    Simulate {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        trajectory: PathBuf,
        #[arg(long, default_value = CAPTURE_FILE)]
        out: PathBuf,
    },
    /// Form one SAR image per virtual element.
    Image {
        #[arg(long)]
        capture: PathBuf,
        #[arg(long, default_value = STACK_FILE)]
        out: PathBuf,
        /// Also write per-VX log-magnitude PGMs here.
        #[arg(long)]
        pgm_dir: Option<PathBuf>,
    },
    /// Compute the elevation map from an image stack.
    Elevate {
        #[arg(long)]
        stack: PathBuf,
        #[arg(long, default_value = MAP_FILE)]
        out: PathBuf,
    },
    /// Filter an elevation map into a point cloud.
    Pointcloud {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value = CLOUD_FILE)]
        out: PathBuf,
        /// Also write a CSV export.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run every stage, keeping all intermediate files in the output directory.
    Pipeline {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        trajectory: PathBuf,
    },
    /// Describe artifact files.
    Report {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

fn output(out_dir: &Path, p: &Path) -> Result<PathBuf> {
    let path = out_dir.join(p);
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    Ok(path)
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| InsarError::InvalidConfig(format!("thread pool: {e}")))?;
    }
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let dir = cli.out_dir.as_path();
    match cli.command {
        Command::Simulate { scene, trajectory, out } => {
            let out = output(dir, &out)?;
            let s = pipeline::simulate(&cfg, &scene, &trajectory, &out)?;
            println!("{s}\nwrote {}", out.display());
        }
        Command::Image { capture, out, pgm_dir } => {
            let out = output(dir, &out)?;
            let pgm = pgm_dir.map(|p| dir.join(p));
            let s = pipeline::image(&cfg, &capture, &out, pgm.as_deref())?;
            println!("{s}\nwrote {}", out.display());
        }
        Command::Elevate { stack, out } => {
            let out = output(dir, &out)?;
            let s = pipeline::elevate(&stack, &out)?;
            println!("{s}\nwrote {}", out.display());
        }
        Command::Pointcloud { map, out, csv } => {
            let out = output(dir, &out)?;
            let csv = csv.map(|c| output(dir, &c)).transpose()?;
            let s = pipeline::pointcloud(&cfg, &map, &out, csv.as_deref())?;
            println!("{s}\nwrote {}", out.display());
        }
        Command::Pipeline { scene, trajectory } => {
            let run = pipeline::run_pipeline(&cfg, &scene, &trajectory, dir)?;
            print!("{run}");
        }
        Command::Report { files } => {
            for f in files {
                println!("{}:\n{}", f.display(), pipeline::describe(&f)?);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
