//! Command-line front end: verification suites and benchmarks for the
//! `curvquad` layer-potential library.

pub mod bench;
pub mod spec;
pub mod verify;

use std::fs::File;
use std::io::{BufWriter, Write};

use anyhow::{Context, Result};
use curvquad::kernels::decomposition_fields;

use crate::spec::{Command, Resolved};

/// `git describe` of the source tree at build time.
pub const BUILD_ID: &str = env!("CURVQUAD_BUILD_ID");

/// Runs a validated spec. Returns whether the run succeeded; only `verify`
/// can fail without an error.
pub fn execute(spec: &Resolved) -> Result<bool> {
    let output = match spec.command {
        Command::Verify => return verify::run_verify(spec.seed, decomposition_fields, std::io::stdout().lock()),
        Command::ElementBench => bench::element_bench(spec)?,
        Command::SingularBench => bench::singular_bench(spec)?,
        Command::CavityBench => bench::cavity_bench(spec)?,
    };
    match &spec.output_path {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
            output.table.write_csv(&mut w)?;
            w.flush()?;
            let json_path = path.with_extension("json");
            let text = serde_json::to_string_pretty(&output.summary)?;
            std::fs::write(&json_path, text + "\n").with_context(|| format!("writing {}", json_path.display()))?;
        }
        None => {
            output.table.write_csv(std::io::stdout().lock())?;
            eprintln!("{}", serde_json::to_string_pretty(&output.summary)?);
        }
    }
    Ok(true)
}
