use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use finsub::groupcoh::CoefficientAction;
use finsub::homology::cache::MatrixCache;
use finsub::homology::Coefficients;
use finsub::simplicial::save_space;
use finsub::subsetspace::{TowerVariant, DEFAULT_LEVEL_CEILING};
use finsub_cli::workbench::DEFAULT_MAX_ND;
use finsub_cli::{
    cache_clear, cache_stats, cmd_groupcoh, cmd_homology, cmd_page, cmd_space, exit_code, verify,
    verify_exit_code, Claim, Construction, Limits, SpaceSpec, EXIT_OK, EXIT_USAGE,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "finsub",
    version,
    about = "Exact homology of finite subset spaces of spheres"
)]
struct Cli {
    /// Worker threads for the linear algebra (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Directory of the boundary-matrix cache.
    #[arg(long, global = true, env = "FINSUB_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SpaceArgs {
    /// sphere, torus or file:PATH
    #[arg(long, default_value = "sphere")]
    space: SpaceSpec,
    /// Sphere dimension.
    #[arg(long)]
    d: Option<usize>,
    /// Number of points.
    #[arg(long)]
    n: Option<usize>,
    /// Highest simplicial level built (defaults to n * dim + 1).
    #[arg(long)]
    trunc: Option<usize>,
    /// Bound on n * dim for the built-in spaces.
    #[arg(long, default_value_t = DEFAULT_MAX_ND)]
    max_nd: usize,
    /// Bound on the number of simplices in one level.
    #[arg(long, default_value_t = DEFAULT_LEVEL_CEILING)]
    ceiling: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoeffArg {
    #[value(name = "Z")]
    Z,
    #[value(name = "Q")]
    Q,
}

#[derive(Clone, Copy, ValueEnum)]
enum ActionArg {
    Trivial,
    Sign,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Exp,
    Based,
    Bar,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of a construction on a base space.
    Homology {
        #[command(flatten)]
        space: SpaceArgs,
        /// expn, based, bar, conf or conf-based
        #[arg(long, default_value = "expn")]
        construction: Construction,
        #[arg(long, value_enum, default_value = "Z")]
        coeffs: CoeffArg,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check published statements against exact computations.
    Verify {
        #[command(flatten)]
        space: SpaceArgs,
        /// Claim identifier, or `all`.
        #[arg(long)]
        claim: String,
        /// Write the reports as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print JSON instead of one line per report.
        #[arg(long)]
        json: bool,
    },
    /// Cohomology of a symmetric group with trivial or sign coefficients.
    Groupcoh {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "trivial")]
        action: ActionArg,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[arg(long, default_value_t = DEFAULT_LEVEL_CEILING)]
        ceiling: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rational spectral sequence of the filtration by number of points.
    Page {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value = "bar")]
        variant: VariantArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a construction and write it in the space file format.
    Space {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value = "expn")]
        construction: Construction,
        #[arg(long)]
        out: PathBuf,
    },
    /// Inspect or empty the boundary-matrix cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    Stats,
    Clear,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<finsub::Error> for Failure {
    fn from(e: finsub::Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

impl SpaceArgs {
    fn limits(&self, cache: Option<MatrixCache>) -> Limits {
        Limits {
            trunc: self.trunc,
            ceiling: self.ceiling,
            max_nd: self.max_nd,
            cache,
        }
    }

    fn n(&self) -> Result<usize, Failure> {
        self.n.ok_or_else(|| usage("--n is required"))
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&PathBuf>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, Failure> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| usage(e.to_string()))?;
    }
    let cache = cli.cache_dir.clone().map(MatrixCache::new);
    match cli.command {
        Command::Homology {
            space,
            construction,
            coeffs,
            max_degree,
            out,
        } => {
            let coeffs = match coeffs {
                CoeffArg::Z => Coefficients::Integer,
                CoeffArg::Q => Coefficients::Rational,
            };
            let report = cmd_homology(
                space.space.clone(),
                space.d,
                space.n()?,
                construction,
                coeffs,
                max_degree,
                space.limits(cache),
            )?;
            emit(&report, out.as_ref())?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            space,
            claim,
            out,
            json,
        } => {
            let claims: Vec<Claim> = if claim == "all" {
                Claim::ALL.to_vec()
            } else {
                vec![claim.parse().map_err(usage)?]
            };
            let limits = space.limits(cache);
            let mut reports = Vec::new();
            for c in claims {
                let case = match (space.n, space.d) {
                    (None, None) if space.space == SpaceSpec::Sphere => None,
                    _ => {
                        let (_, n0, d0) = c.default_cases()[0].clone();
                        Some((
                            space.space.clone(),
                            space.n.unwrap_or(n0),
                            space.d.unwrap_or(d0),
                        ))
                    }
                };
                for r in verify(c, case, &limits)? {
                    if !json {
                        println!("{r}");
                    }
                    reports.push(r);
                }
            }
            if json {
                emit(&reports, None)?;
            }
            if let Some(path) = out {
                emit(&reports, Some(&path))?;
            }
            Ok(verify_exit_code(&reports))
        }
        Command::Groupcoh {
            n,
            action,
            max_degree,
            ceiling,
            out,
        } => {
            let action = match action {
                ActionArg::Trivial => CoefficientAction::Trivial,
                ActionArg::Sign => CoefficientAction::Sign,
            };
            emit(&cmd_groupcoh(n, action, max_degree, ceiling)?, out.as_ref())?;
            Ok(EXIT_OK)
        }
        Command::Page {
            space,
            variant,
            out,
        } => {
            let variant = match variant {
                VariantArg::Exp => TowerVariant::Exp,
                VariantArg::Based => TowerVariant::Based,
                VariantArg::Bar => TowerVariant::Bar,
            };
            let report = cmd_page(
                space.space.clone(),
                space.d,
                space.n()?,
                variant,
                space.limits(cache),
            )?;
            emit(&report, out.as_ref())?;
            Ok(EXIT_OK)
        }
        Command::Space {
            space,
            construction,
            out,
        } => {
            let x = cmd_space(
                space.space.clone(),
                space.d,
                space.n()?,
                construction,
                space.limits(cache),
            )?;
            save_space(&x, &out)?;
            Ok(EXIT_OK)
        }
        Command::Cache { action } => {
            let cache =
                cache.ok_or_else(|| usage("--cache-dir or FINSUB_CACHE_DIR is required"))?;
            match action {
                CacheAction::Stats => emit(&cache_stats(&cache)?, None)?,
                CacheAction::Clear => emit(
                    &serde_json::json!({ "removed": cache_clear(&cache)? }),
                    None,
                )?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_USAGE as u8
            } else {
                EXIT_OK as u8
            });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
