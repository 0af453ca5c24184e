//! File formats: the `n,loc,value` field CSV, pair CSV, and scatter SVG.

use std::collections::BTreeMap;
use std::path::Path;

use pmax::fields::FieldSample;

use crate::error::{CliError, CliResult};

/// Format a value with 13 significant digits, locale-independent.
pub fn fmt_value(v: f64) -> String {
    format!("{v:.12e}")
}

/// Write a simulated panel as `n,loc,value` rows, sorted by (n, loc id).
pub fn write_field_csv(sample: &FieldSample, path: &Path) -> CliResult<()> {
    let mut ids: Vec<(usize, &str)> = sample
        .spec()
        .locations
        .iter()
        .enumerate()
        .map(|(i, l)| (i, l.id.as_str()))
        .collect();
    ids.sort_by_key(|&(_, id)| id);
    let mut out = String::from("n,loc,value\n");
    for t in 0..sample.n_time() {
        for &(i, id) in &ids {
            out.push_str(&format!("{t},{id},{}\n", fmt_value(sample.value(t, i))));
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Parsed field CSV: per-location value columns in time order.
#[derive(Debug, Clone)]
pub struct SampleTable {
    pub columns: BTreeMap<String, Vec<f64>>,
    pub n_time: usize,
}

impl SampleTable {
    pub fn column(&self, id: &str) -> CliResult<&[f64]> {
        self.columns
            .get(id)
            .map(|v| v.as_slice())
            .ok_or_else(|| CliError::Compute(format!("location '{id}' not present in the input")))
    }
}

/// Read a `n,loc,value` CSV back into per-location columns. Rows must be
/// complete: every location observed at every time index.
pub fn read_field_csv(path: &Path) -> CliResult<SampleTable> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some("n,loc,value") => {}
        other => {
            return Err(CliError::Compute(format!(
                "{}: expected header 'n,loc,value', got {other:?}",
                path.display()
            )))
        }
    }
    let mut columns: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut n_rows = 0usize;
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut parts = line.splitn(3, ',');
        let err = |what: &str| {
            CliError::Compute(format!("{}:{}: {what}", path.display(), lineno + 2))
        };
        let n: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err("bad time index"))?;
        let loc = parts.next().ok_or_else(|| err("missing location"))?.to_string();
        let value: f64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err("bad value"))?;
        if !(value.is_finite() && value > 0.0) {
            return Err(err("values must be positive and finite"));
        }
        let col = columns.entry(loc).or_default();
        if col.len() != n {
            return Err(err(&format!("time index {n} out of order (expected {})", col.len())));
        }
        col.push(value);
        n_rows += 1;
    }
    if columns.is_empty() {
        return Err(CliError::Compute(format!("{}: no data rows", path.display())));
    }
    let n_time = columns.values().next().map(|v| v.len()).unwrap_or(0);
    if columns.values().any(|v| v.len() != n_time) || n_time * columns.len() != n_rows {
        return Err(CliError::Compute(format!(
            "{}: ragged panel (locations observed unequally)",
            path.display()
        )));
    }
    Ok(SampleTable { columns, n_time })
}

/// Write `u,v` pair rows.
pub fn write_pair_csv(pairs: &[(f64, f64)], path: &Path) -> CliResult<()> {
    let mut out = String::from("u,v\n");
    for &(u, v) in pairs {
        out.push_str(&format!("{},{}\n", fmt_value(u), fmt_value(v)));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Generator tag embedded as the SVG's only run-variable-free comment.
pub const SVG_GENERATOR: &str = concat!("pmax figures ", env!("CARGO_PKG_VERSION"));

/// Self-contained scatter plot of points in the unit square.
pub fn write_scatter_svg(points: &[(f64, f64)], title: &str, path: &Path) -> CliResult<()> {
    const SIZE: f64 = 600.0;
    const MARGIN: f64 = 40.0;
    let span = SIZE - 2.0 * MARGIN;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    out.push_str(&format!("<!-- generator: {SVG_GENERATOR} -->\n"));
    out.push_str(&format!(
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{span}\" height=\"{span}\" fill=\"white\" stroke=\"black\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{title}</text>\n",
        SIZE / 2.0,
        MARGIN / 2.0 + 5.0
    ));
    for &(u, v) in points {
        let x = MARGIN + u.clamp(0.0, 1.0) * span;
        let y = SIZE - MARGIN - v.clamp(0.0, 1.0) * span;
        out.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"1.5\" fill=\"black\" fill-opacity=\"0.55\"/>\n"
        ));
    }
    out.push_str("</svg>\n");
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pmax::fields::{simulate_pmax, AlphaMap, Location, ModelSpec};
    use pmax::stats::RngStream;

    fn sample() -> FieldSample {
        let locs = vec![Location::new("b", 1.0, 0.0), Location::new("a", 0.0, 0.0)];
        let mut alpha = AlphaMap::new();
        alpha.insert("a", 1.0).unwrap();
        alpha.insert("b", 2.0).unwrap();
        let spec = ModelSpec::independent(locs, alpha);
        simulate_pmax(&spec, 25, RngStream::new(5, 0)).unwrap()
    }

    #[test]
    fn field_csv_round_trips_and_sorts() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        let s = sample();
        write_field_csv(&s, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        // Sorted by (n, loc id): a before b even though the spec lists b first.
        assert!(text.starts_with("n,loc,value\n0,a,"));
        let table = read_field_csv(&path).unwrap();
        assert_eq!(table.n_time, 25);
        for (j, id) in [("a", 1usize), ("b", 0usize)].iter().map(|&(a, b)| (b, a)) {
            let col = table.column(id).unwrap();
            for (t, &v) in col.iter().enumerate() {
                let orig = s.value(t, j);
                assert!((v - orig).abs() <= orig.abs() * 1e-12);
            }
        }
        assert!(table.column("zzz").is_err());
    }

    #[test]
    fn malformed_csv_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "wrong,header\n").unwrap();
        assert!(read_field_csv(&path).is_err());
        std::fs::write(&path, "n,loc,value\n0,a,1.0\n0,b,2.0\n1,a,3.0\n").unwrap();
        assert!(read_field_csv(&path).is_err(), "ragged panel accepted");
        std::fs::write(&path, "n,loc,value\n0,a,-1.0\n").unwrap();
        assert!(read_field_csv(&path).is_err());
    }

    #[test]
    fn svg_contains_generator_and_points() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.svg");
        write_scatter_svg(&[(0.1, 0.2), (0.9, 0.8)], "test", &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains(SVG_GENERATOR));
        assert_eq!(text.matches("<circle").count(), 2);
    }
}
