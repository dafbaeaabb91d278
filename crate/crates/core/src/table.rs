//! Delimited numeric text: uniform time series in, CSV numbers out.

use crate::error::{Error, Result};

/// Format a number for CSV output: shortest round-trip decimal in
/// `[1e-4, 1e15)`, scientific notation otherwise.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Join formatted numbers with commas.
pub fn csv_row(values: &[f64]) -> String {
    values.iter().map(|&v| format_number(v)).collect::<Vec<_>>().join(",")
}

/// Parse a time column followed by one or more value columns.
///
/// Fields may be separated by commas, semicolons, tabs or spaces. Blank
/// lines, `#` comments and a leading non-numeric header are skipped. Times
/// must start at 0 and be uniformly spaced. Returns the step and the value
/// columns.
pub fn parse_uniform_columns(text: &str) -> Result<(f64, Vec<Vec<f64>>)> {
    let mut times = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = line
            .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .map(str::parse::<f64>)
            .collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if times.is_empty() => continue,
            Err(e) => return Err(Error::Config(format!("line {}: {e}", lineno + 1))),
        };
        if values.len() < 2 {
            return Err(Error::Config(format!(
                "line {}: expected a time column and at least one value column",
                lineno + 1
            )));
        }
        if columns.is_empty() {
            columns = vec![Vec::new(); values.len() - 1];
        } else if values.len() - 1 != columns.len() {
            return Err(Error::Config(format!(
                "line {}: expected {} value columns, found {}",
                lineno + 1,
                columns.len(),
                values.len() - 1
            )));
        }
        times.push(values[0]);
        for (col, v) in columns.iter_mut().zip(&values[1..]) {
            col.push(*v);
        }
    }
    if times.len() < 2 {
        return Err(Error::Config("series needs at least two time samples".into()));
    }
    if times[0].abs() > 1e-12 {
        return Err(Error::Config(format!("series must start at t = 0, starts at {}", times[0])));
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) {
        return Err(Error::Config(format!("time step must be positive, got {dt}")));
    }
    for (k, t) in times.iter().enumerate() {
        if (t - k as f64 * dt).abs() > 1e-9 * dt.max(t.abs()) {
            return Err(Error::Config(format!("time samples are not uniform at row {k} (t = {t})")));
        }
    }
    Ok((dt, columns))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(2.404825557695773), "2.404825557695773");
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(3.79182676948489e-5), "3.79182676948489e-5");
        assert_eq!(format_number(-1e20), "-1e20");
        assert_eq!(csv_row(&[1.0, 0.5]), "1,0.5");
    }

    #[test]
    fn uniform_columns() {
        let (dt, cols) = parse_uniform_columns("t;a;b\n0;1;2\n0.5;1;3\n# note\n1.0 1 4\n").unwrap();
        assert_eq!(dt, 0.5);
        assert_eq!(cols, vec![vec![1.0, 1.0, 1.0], vec![2.0, 3.0, 4.0]]);
        assert!(parse_uniform_columns("0 1\n0.5 1\n1.2 1\n").is_err());
        assert!(parse_uniform_columns("0.1 1\n0.2 1\n").is_err());
        assert!(parse_uniform_columns("0 1\n0.1 x\n").is_err());
        assert!(parse_uniform_columns("0 1 2\n0.1 1\n").is_err());
    }
}
