use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Buffered writer to a file, or to stdout when no path is given.
pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Twelve significant digits; NaN stays `NaN`.
pub fn number(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn complex(z: Complex64) -> String {
    format!("{:.6e}{:+.6e}i", z.re, z.im)
}

/// `# curvspp <version> <command> <json>`, the first line of every CSV.
pub fn header_comment<T: Serialize>(out: &mut dyn Write, command: &str, config: &T) -> Result<(), crate::Failure> {
    let json = serde_json::to_string(config)?;
    writeln!(out, "# curvspp {VERSION} {command} {json}")?;
    Ok(())
}
