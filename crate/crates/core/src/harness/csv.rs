//! CSV output: comma separated, `.` decimal point, 17 significant digits.

use std::io::Write;

use super::HarnessError;

/// A header plus rows of already formatted fields.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Writes the table, preceded by a `# generated …` line when `timestamp` is set.
    pub fn write<W: Write>(&self, mut out: W, timestamp: bool) -> Result<(), HarnessError> {
        if timestamp {
            writeln!(out, "# generated {}", chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true))?;
        }
        let mut w = ::csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_string(&self, timestamp: bool) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf, timestamp).expect("writing to memory");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }
}

/// `v` with 17 significant digits; non-finite values as `nan`, `inf`, `-inf`.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

/// Empty field for a missing value.
pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 123456789.12345679, 0.0] {
            let s = num(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
            assert_eq!(mantissa.len(), 17, "{s}");
        }
        assert_eq!(opt(None), "");
    }

    #[test]
    fn header_line_is_optional() {
        let mut t = Table::new(&["x", "y"]);
        t.push(vec![num(1.0), "D".into()]);
        let plain = t.to_string(false);
        assert_eq!(plain, "x,y\n1.0000000000000000e0,D\n");
        let stamped = t.to_string(true);
        assert!(stamped.starts_with("# generated "));
        assert!(stamped.ends_with(&plain));
    }
}
