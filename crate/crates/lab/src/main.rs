use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bst_lab::pi::{pi_demo, BUNDLED_DIGITS};
use bst_lab::render::{silhouette_profile, silhouette_svg, tree_drawing, tree_svg, Series};
use bst_lab::{execute, ExperimentConfig, LabError, Result};
use bst_limit::chains::{bst_step, dst_step, tilted_step, ConstSplit};
use bst_limit::functionals::{
    ipl, ipl_centered, ipl_projection, jabbour_martingale, limits, psi_z, wiener, wiener_centered,
    wiener_projection,
};
use bst_limit::limit::{constants, rho_norm, EULER_GAMMA};
use bst_limit::oracles::{enumerate_shapes, harmonic_gap, lemma41_integral, wiener_bruteforce};
use bst_limit::scalar::Scalar;
use bst_limit::{BinaryTree, LimitTree, NodeId, RngStream, SplitField, Truncation};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bstlab", version, about = "Random binary search trees and their limit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChainKind {
    Bst,
    Dst,
    Tilted,
}

#[derive(Subcommand)]
enum Cmd {
    /// Grow a tree and print its insertion order, one node per line.
    Simulate {
        #[arg(value_enum)]
        chain: ChainKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        #[arg(long = "split-const", default_value_t = 0.5)]
        split_const: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tree functionals of a stored trajectory.
    Functionals {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also print projections and generating functions.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 0.5)]
        z: f64,
    },
    /// The limit tree.
    Limit {
        #[command(subcommand)]
        what: LimitCmd,
    },
    /// Brute-force references.
    Oracle {
        #[command(subcommand)]
        what: OracleCmd,
    },
    /// Run a configured experiment; exits with 1 if a criterion fails.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Override the configured worker count.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// SVG output.
    Render {
        #[command(subcommand)]
        what: RenderCmd,
    },
}

#[derive(Subcommand)]
enum LimitCmd {
    Mass {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Node word, `e` for the root.
        #[arg(long)]
        node: NodeId,
    },
    Norm {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 40)]
        depth: u32,
    },
    Series {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        depth: u32,
        #[arg(long, default_value_t = 1e-7)]
        cutoff: f64,
    },
    Constants,
}

#[derive(Subcommand)]
enum OracleCmd {
    Shapes {
        #[arg(long)]
        n: usize,
    },
    Wiener {
        #[arg(long = "in")]
        input: PathBuf,
    },
    Lemma41 {
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
    },
}

#[derive(Subcommand)]
enum RenderCmd {
    Tree {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long)]
        out: PathBuf,
    },
    Silhouette {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    PiDemo {
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
        /// Digit file; defaults to the bundled digits.
        #[arg(long)]
        digits: Option<PathBuf>,
    },
}

fn read_tree(path: &PathBuf) -> Result<BinaryTree> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    Ok(BinaryTree::from_trajectory_str(&text)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => bst_lab::output::write_file(p, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| LabError::io("<stdout>", e)),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Simulate { chain, n, seed, z, split_const, out } => {
            let mut rng = RngStream::new(seed, 0);
            let mut x = BinaryTree::singleton();
            let mu = ConstSplit::new(split_const)?;
            while x.len() < n {
                match chain {
                    ChainKind::Bst => bst_step(&mut x, &mut rng)?,
                    ChainKind::Dst => dst_step(&mut x, &mu, &mut rng)?,
                    ChainKind::Tilted => tilted_step(&mut x, z, &mut rng)?,
                };
            }
            emit(&out, &x.to_trajectory_string())?;
        }
        Cmd::Functionals { input, all, z } => {
            let x = read_tree(&input)?;
            let mut lines = vec![
                format!("n\t{}", x.len()),
                format!("height\t{}", x.height()),
                format!("fill_level\t{}", x.fill_level()),
                format!("ipl\t{}", ipl(&x)),
                format!("wiener\t{}", wiener(&x)),
            ];
            if all {
                lines.extend([
                    format!("ipl_centered\t{}", ipl_centered(&x)),
                    format!("ipl_projection\t{}", ipl_projection::<f64>(&x)),
                    format!("wiener_centered\t{}", wiener_centered(&x)),
                    format!("wiener_projection\t{}", wiener_projection::<f64>(&x)),
                    format!("jabbour_martingale(z={z})\t{}", jabbour_martingale(&x, &z)?),
                    format!("psi(z={z})\t{}", psi_z(&x, &z)?),
                ]);
                let p = x.profiles();
                for k in 0..=x.height() as usize + 1 {
                    lines.push(format!("profile[{k}]\t{}\t{}", p.internal_at(k), p.external_at(k)));
                }
            }
            println!("{}", lines.join("\n"));
        }
        Cmd::Limit { what } => match what {
            LimitCmd::Mass { seed, node } => {
                let lt = LimitTree::new(seed);
                println!("mass\t{}\nxi\t{}", lt.mass(node), lt.xi(node));
            }
            LimitCmd::Norm { seed, rho, depth } => {
                println!("{}", rho_norm(&LimitTree::new(seed), rho, depth)?);
            }
            LimitCmd::Series { seed, depth, cutoff } => {
                let l = limits(&LimitTree::new(seed), Truncation::new(depth, cutoff)?);
                for (name, s) in [("Y", l.y), ("Z", l.z), ("W", l.w)] {
                    println!("{name}\t{}\t{}", s.value, s.tail_bound);
                }
                println!("ipl_limit\t{}", 2.0 * EULER_GAMMA - 4.0 + l.y.value);
            }
            LimitCmd::Constants => {
                let c = constants();
                println!(
                    "rho0\t{}\nalpha_minus\t{}\nalpha_plus\t{}\nalpha0\t{}\neuler_gamma\t{}",
                    c.rho0, c.alpha_minus, c.alpha_plus, c.alpha0, c.euler_gamma
                );
            }
        },
        Cmd::Oracle { what } => match what {
            OracleCmd::Shapes { n } => {
                for (x, p) in enumerate_shapes(n)?.iter() {
                    println!("{}\t{}\t{}", x.shape_key(), p, p.to_f64());
                }
            }
            OracleCmd::Wiener { input } => {
                let x = read_tree(&input)?;
                println!("{}\t{}", wiener_bruteforce(&x)?, wiener(&x));
            }
            OracleCmd::Lemma41 { i, j } => {
                println!("{}\t{}", lemma41_integral(i, j)?, harmonic_gap(i, j));
            }
        },
        Cmd::Experiment { config, workers } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(w) = workers {
                cfg.workers = w;
            }
            let (out, _) = execute(&cfg)?;
            for c in &out.criteria {
                println!(
                    "{}\t{}\t{}\t{}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.statistic,
                    c.threshold
                );
            }
            if !out.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Render { what } => match what {
            RenderCmd::Tree { input, rho, out } => {
                let x = read_tree(&input)?;
                let svg = tree_svg(&tree_drawing(&x, rho)?, &format!("n = {}, rho = {rho}", x.len()));
                emit(&Some(out), &svg)?;
            }
            RenderCmd::Silhouette { input, grid, out } => {
                let x = read_tree(&input)?;
                let points = silhouette_profile(&x, grid)?;
                let label = format!("n = {}", x.len());
                let series = [Series { label: &label, color: "black", points: &points }];
                emit(&Some(out), &silhouette_svg(&series, "metric silhouette"))?;
            }
            RenderCmd::PiDemo { out_dir, digits } => {
                let text = match digits {
                    Some(p) => std::fs::read_to_string(&p).map_err(|e| LabError::io(p, e))?,
                    None => BUNDLED_DIGITS.to_string(),
                };
                for p in pi_demo(&out_dir, &text)? {
                    println!("{}", p.display());
                }
            }
        },
    }
    Ok(ExitCode::SUCCESS)
}
