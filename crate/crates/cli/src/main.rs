//! `treegrid`: draw a tree, verify it, write TSV/SVG, or run a benchmark sweep.
//!
//! Exit codes: 0 ok, 1 usage, 2 verification failure, 3 internal error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, ValueEnum};
use treegrid::bench::{run_benchmark, Algorithm, BenchConfig, Params};
use treegrid::{generate_tree, verify_drawing, Error, Tree, TreeModel};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Algo {
    Standard,
    UpwardGeneral,
    General,
    Orthogonal,
    Order,
    OrthOrder,
}

impl From<Algo> for Algorithm {
    fn from(a: Algo) -> Algorithm {
        match a {
            Algo::Standard => Algorithm::Standard,
            Algo::UpwardGeneral => Algorithm::UpwardGeneral,
            Algo::General => Algorithm::General,
            Algo::Orthogonal => Algorithm::Orthogonal,
            Algo::Order => Algorithm::Order,
            Algo::OrthOrder => Algorithm::OrthOrder,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Debug, Parser)]
#[command(name = "treegrid", version, about = "Small-area grid drawings of rooted trees")]
struct Cli {
    /// Optional `draw` verb; drawing is the default action.
    #[arg(value_parser = ["draw"])]
    command: Option<String>,
    #[arg(long, value_enum, default_value = "standard")]
    algo: Algo,
    /// Width budget A (upward-general and general).
    #[arg(long = "width-budget", value_name = "A")]
    width_budget: Option<usize>,
    /// Bootstrap level j (general).
    #[arg(long = "boot-level", value_name = "J")]
    boot_level: Option<usize>,
    /// Generated input, `model:n:seed`.
    #[arg(long, value_name = "MODEL:N:SEED", conflicts_with = "input")]
    generate: Option<String>,
    /// Tree file in parenthesized form.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Node coordinates; parent-child pairs go to a sibling `.edges` file.
    #[arg(long = "out-tsv", value_name = "FILE")]
    out_tsv: Option<PathBuf>,
    #[arg(long = "out-svg", value_name = "FILE")]
    out_svg: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "on")]
    verify: OnOff,
    /// Benchmark config; the record table goes to `--out-tsv` or stdout.
    #[arg(long, value_name = "CONFIG", conflicts_with_all = ["generate", "input", "out_svg"])]
    bench: Option<PathBuf>,
}

enum Failure {
    Usage(anyhow::Error),
    Verify(String),
    Internal(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Internal(_) | Error::Drawing(_) => Failure::Internal(e.into()),
            _ => Failure::Usage(e.into()),
        }
    }
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display())).map_err(Failure::Internal)
}

fn parse_generate(arg: &str) -> anyhow::Result<Tree> {
    let parts: Vec<&str> = arg.split(':').collect();
    let [model, n, seed] = parts.as_slice() else {
        return Err(anyhow!("--generate expects model:n:seed, got {arg:?}"));
    };
    let model: TreeModel = model.parse()?;
    let n: usize = n.parse().with_context(|| format!("bad tree size {n:?}"))?;
    let seed: u64 = seed.parse().with_context(|| format!("bad seed {seed:?}"))?;
    if n == 0 {
        return Err(anyhow!("tree size must be positive"));
    }
    Ok(generate_tree(n, model, seed))
}

fn draw(cli: &Cli) -> Result<(), Failure> {
    let algo: Algorithm = cli.algo.into();
    if cli.width_budget.is_some() && !matches!(algo, Algorithm::UpwardGeneral | Algorithm::General) {
        return Err(usage(anyhow!("--width-budget applies to upward-general and general only")));
    }
    if cli.boot_level.is_some() && algo != Algorithm::General {
        return Err(usage(anyhow!("--boot-level applies to general only")));
    }
    let tree = match (&cli.generate, &cli.input) {
        (Some(g), None) => parse_generate(g).map_err(usage)?,
        (None, Some(p)) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display())).map_err(usage)?;
            Tree::parse(text.trim())?
        }
        _ => return Err(usage(anyhow!("give exactly one of --in and --generate"))),
    };
    let tree = algo.prepare(&tree);
    let params = Params { width_budget: cli.width_budget, boot_level: cli.boot_level };
    let d = algo.draw(&tree, params)?;
    if let Some(p) = &cli.out_tsv {
        write(p, &d.to_tsv())?;
        write(&p.with_extension("edges"), &treegrid::GridDrawing::edges_tsv(&tree))?;
    }
    if let Some(p) = &cli.out_svg {
        write(p, &d.to_svg(&tree))?;
    }
    println!("algorithm={}\nn={}", algo.name(), tree.len());
    for (k, v) in &d.meta {
        println!("{k}={v}");
    }
    if cli.verify == OnOff::On {
        let report = verify_drawing(&tree, &d, algo.criteria())?;
        print!("{}", report.to_kv());
        if !report.passes(algo.criteria()) {
            return Err(Failure::Verify(format!("{:?}", report.first_violation)));
        }
    } else {
        println!("width={}\nheight={}\narea={}", d.width, d.height, d.area());
    }
    Ok(())
}

fn bench(cli: &Cli, cfg_path: &Path) -> Result<(), Failure> {
    let text =
        fs::read_to_string(cfg_path).with_context(|| format!("reading {}", cfg_path.display())).map_err(usage)?;
    let cfg: BenchConfig = text.parse()?;
    let table = run_benchmark(&cfg);
    let tsv = table.to_tsv(false);
    match &cli.out_tsv {
        Some(p) => write(p, &tsv)?,
        None => print!("{tsv}"),
    }
    print!("{}", table.summary_text());
    let failed: Vec<_> = table
        .records
        .iter()
        .filter_map(|r| r.error.as_deref().filter(|e| e.starts_with("verification failed")))
        .collect();
    if let Some(e) = failed.first() {
        return Err(Failure::Verify(format!("{} cells failed verification, first: {e}", failed.len())));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let res = match &cli.bench {
        Some(p) => bench(&cli, p),
        None => draw(&cli),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Verify(e)) => {
            eprintln!("verification failed: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(3)
        }
    }
}
