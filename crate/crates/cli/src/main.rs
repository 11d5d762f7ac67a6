use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;
use curvquad_cli::spec::{parse_hrange, BenchmarkSpec, Command, ElementChoice, KernelChoice, LayerChoice, NearChoice};

#[derive(Clone, Debug)]
struct Sweep(Vec<f64>);

#[derive(Parser, Debug)]
#[command(name = "curvquad", version = curvquad_cli::BUILD_ID, about = "Verification suites and benchmarks for curved-element layer potentials")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    #[arg(long, value_enum)]
    element: Option<ElementChoice>,
    #[arg(long, value_enum)]
    kernel: Option<KernelChoice>,
    /// Helmholtz wavenumber; element benchmarks default to k d = 1.
    #[arg(long)]
    wavenumber: Option<f64>,
    #[arg(long, value_enum)]
    layer: Option<LayerChoice>,
    /// Comma-separated quadrature orders.
    #[arg(long, value_delimiter = ',')]
    orders: Option<Vec<usize>>,
    /// Log-spaced h/d sweep as `lo,hi,n`.
    #[arg(long, value_parser = |s: &str| parse_hrange(s).map(Sweep))]
    hrange: Option<Sweep>,
    /// Icosphere subdivisions for the cavity benchmark.
    #[arg(long)]
    subdiv: Option<usize>,
    #[arg(long, value_enum)]
    near_method: Option<NearChoice>,
    /// CSV output path; the JSON summary goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// JSON file with any subset of the benchmark fields; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<bool> {
    let file = match &cli.config {
        Some(path) => BenchmarkSpec::from_file(path)?,
        None => BenchmarkSpec::default(),
    };
    let flags = BenchmarkSpec {
        command: Some(cli.command),
        element: cli.element,
        kernel: cli.kernel,
        k: cli.wavenumber,
        layer: cli.layer,
        h_over_d: cli.hrange.map(|s| s.0),
        orders: cli.orders,
        output_path: cli.out,
        seed: cli.seed,
        subdivisions: cli.subdiv,
        near_method: cli.near_method,
        normals_into_domain: None,
    };
    let spec = file.overridden_by(flags).resolve()?;
    curvquad_cli::execute(&spec)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
