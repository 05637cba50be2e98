//! Document emission: exact JSON/CSV, byte-stable for identical inputs.

use std::io::Write;
use std::path::Path;

use num_traits::One;

use psi_point::algebra::Rational;
use psi_point::Error;

/// A result document in both formats; entry order is fixed by the caller
/// (lexicographic by (g, d)) so repeated runs emit identical bytes.
pub struct Document {
    pub json: serde_json::Value,
    pub csv: Vec<String>,
}

/// "p/q" in lowest terms, "p" alone when q = 1. Never floating point.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn write_document(doc: &Document, csv: bool, out: Option<&Path>) -> psi_point::Result<()> {
    let body = if csv {
        let mut text = doc.csv.join("\n");
        text.push('\n');
        text
    } else {
        let mut text = serde_json::to_string_pretty(&doc.json)
            .map_err(|e| Error::InvalidInput(format!("cannot serialize document: {e}")))?;
        text.push('\n');
        text
    };
    match out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(body.as_bytes())
                .map_err(|e| Error::InvalidInput(format!("cannot write to stdout: {e}")))
        }
    }
}
