use std::io::{self, Write};

/// Column-oriented simulation record on the uniform grid `t_k = k dt decimation`.
///
/// Column 0 is always `t`. Every other column is named; `primary` names the
/// tracking-error column that metrics are computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    primary: String,
    control: Option<String>,
}

impl SimTrace {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>, primary: &str) -> Self {
        let mut all = vec!["t".to_string()];
        all.extend(names.into_iter().map(Into::into));
        assert!(all.iter().any(|n| n == primary), "primary column `{primary}` missing");
        let columns = vec![Vec::new(); all.len()];
        Self {
            names: all,
            columns,
            primary: primary.to_string(),
            control: None,
        }
    }

    /// Name the control-signal column used for noise statistics.
    pub fn with_control(mut self, name: &str) -> Self {
        assert!(self.names.iter().any(|n| n == name), "control column `{name}` missing");
        self.control = Some(name.to_string());
        self
    }

    pub fn control(&self) -> Option<&[f64]> {
        self.control.as_deref().and_then(|c| self.column(c))
    }

    /// Append one row; `values` excludes the time column.
    pub fn push(&mut self, t: f64, values: &[f64]) {
        assert_eq!(values.len() + 1, self.names.len(), "row width mismatch");
        self.columns[0].push(t);
        for (col, &v) in self.columns[1..].iter_mut().zip(values) {
            col.push(v);
        }
    }

    pub fn len(&self) -> usize {
        self.columns[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn t(&self) -> &[f64] {
        &self.columns[0]
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn primary_name(&self) -> &str {
        &self.primary
    }

    pub fn primary(&self) -> &[f64] {
        self.column(&self.primary).expect("primary column exists")
    }

    pub fn row(&self, k: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[k]).collect()
    }

    /// Index of the first row whose time is `>= t0`.
    pub fn index_at(&self, t0: f64) -> usize {
        self.t().partition_point(|&t| t < t0)
    }

    /// Header plus one line per row, floats with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.names.join(","))?;
        let mut line = String::new();
        for k in 0..self.len() {
            line.clear();
            for (i, c) in self.columns.iter().enumerate() {
                if i > 0 {
                    line.push(',');
                }
                line.push_str(&fmt_f64(c[k]));
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        // normalise -0
        return "0.0000000000000000e0".into();
    }
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_precision() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(fmt_f64(-0.0), fmt_f64(0.0));
    }

    #[test]
    fn csv_layout() {
        let mut tr = SimTrace::new(["x0", "u"], "x0");
        tr.push(0.0, &[1.0, 2.0]);
        tr.push(0.5, &[0.5, -1.0]);
        let csv = tr.to_csv_string();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,x0,u");
        assert_eq!(lines.len(), 3);
        assert_eq!(tr.column("u").unwrap(), &[2.0, -1.0]);
        assert_eq!(tr.primary(), &[1.0, 0.5]);
        assert_eq!(tr.index_at(0.25), 1);
    }
}
