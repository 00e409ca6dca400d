//! Deterministic machine-readable output: floats printed to 9 significant
//! digits (so the 8-figure reference constants survive a round-trip), flat
//! JSON objects, and the N,observable,value series CSV.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;

/// Format with 9 significant digits, plain decimal inside a reasonable
/// exponent window and scientific outside it.
pub fn fmt_sig(x: f64) -> String {
    const SIG: usize = 9;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..(SIG as i32 + 3)).contains(&mag) {
        format!("{:.*e}", SIG - 1, x)
    } else {
        let decimals = (SIG as i32 - 1 - mag).max(0) as usize;
        format!("{:.*}", decimals, x)
    }
}

/// One scalar field of a JSON result object.
pub enum Value {
    Number(f64),
    Integer(i64),
    Bool(bool),
    Text(String),
    NumberList(Vec<f64>),
    /// Numbers that may be absent (printed as null).
    MaybeNumberList(Vec<Option<f64>>),
}

/// Render a flat JSON object with the fields in the given order. Keys are
/// snake_case identifiers, so no escaping is needed.
pub fn json_object(fields: &[(&str, Value)]) -> String {
    let mut out = String::from("{");
    for (i, (key, value)) in fields.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "\"{key}\":");
        match value {
            Value::Number(x) => out.push_str(&fmt_sig(*x)),
            Value::Integer(n) => {
                let _ = write!(out, "{n}");
            }
            Value::Bool(b) => {
                let _ = write!(out, "{b}");
            }
            Value::Text(s) => {
                let _ = write!(out, "\"{s}\"");
            }
            Value::NumberList(xs) => {
                out.push('[');
                for (j, x) in xs.iter().enumerate() {
                    if j > 0 {
                        out.push(',');
                    }
                    out.push_str(&fmt_sig(*x));
                }
                out.push(']');
            }
            Value::MaybeNumberList(xs) => {
                out.push('[');
                for (j, x) in xs.iter().enumerate() {
                    if j > 0 {
                        out.push(',');
                    }
                    match x {
                        Some(x) => out.push_str(&fmt_sig(*x)),
                        None => out.push_str("null"),
                    }
                }
                out.push(']');
            }
        }
    }
    out.push('}');
    out
}

/// The fixed observable order of series rows.
pub const OBSERVABLE_ORDER: [&str; 4] = ["e_per_n", "e_q", "delta_oe", "delta_c"];

/// One sweep point: particle number plus the four observables (absent ones
/// are skipped).
pub struct SeriesRow {
    pub n: usize,
    pub e_per_n: Option<f64>,
    pub e_q: Option<f64>,
    pub delta_oe: Option<f64>,
    pub delta_c: Option<f64>,
}

impl SeriesRow {
    fn get(&self, observable: &str) -> Option<f64> {
        match observable {
            "e_per_n" => self.e_per_n,
            "e_q" => self.e_q,
            "delta_oe" => self.delta_oe,
            "delta_c" => self.delta_c,
            _ => None,
        }
    }
}

/// Render the series CSV: header `N,observable,value`, rows in ascending N
/// with the fixed observable order within each N.
pub fn series_csv(rows: &[SeriesRow]) -> String {
    let mut sorted: Vec<&SeriesRow> = rows.iter().collect();
    sorted.sort_by_key(|r| r.n);
    let mut out = String::from("N,observable,value\n");
    for row in sorted {
        for obs in OBSERVABLE_ORDER {
            if let Some(x) = row.get(obs) {
                let _ = writeln!(out, "{},{},{}", row.n, obs, fmt_sig(x));
            }
        }
    }
    out
}

/// Parse a series CSV back into (n, value) points for one observable.
pub fn parse_series_csv(text: &str, observable: &str) -> Result<Vec<(f64, f64)>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header.trim() == "N,observable,value" => {}
        Some(other) => return Err(format!("bad CSV header `{other}`")),
        None => return Err("empty CSV".into()),
    }
    let mut points = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.splitn(3, ',');
        let (Some(n), Some(obs), Some(value)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(format!("row {}: expected 3 columns", idx + 2));
        };
        if obs != observable {
            continue;
        }
        let n: f64 = n
            .trim()
            .parse()
            .map_err(|_| format!("row {}: bad N `{n}`", idx + 2))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("row {}: bad value `{value}`", idx + 2))?;
        points.push((n, value));
    }
    if points.is_empty() {
        return Err(format!("no rows with observable `{observable}`"));
    }
    Ok(points)
}

/// Write to a file or stdout ("-"), surfacing the path on failure.
pub fn write_artifact(path: &str, contents: &str) -> Result<(), String> {
    if path == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout
            .write_all(contents.as_bytes())
            .map_err(|e| format!("writing stdout: {e}"))?;
        if !contents.ends_with('\n') {
            let _ = stdout.write_all(b"\n");
        }
        Ok(())
    } else {
        fs::write(path, contents).map_err(|e| format!("writing {path}: {e}"))
    }
}
