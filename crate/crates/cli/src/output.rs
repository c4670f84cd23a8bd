use std::io::{self, Write};

/// Column-labelled numeric table; `None` cells are written empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// At most 9 significant digits, `.` as decimal separator. Plain notation
/// between `1e-6` and `1e15`, exponent notation outside.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "NaN".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{v:.8e}").parse().expect("formatted float parses");
    let mag = rounded.abs();
    if (1e-6..1e15).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub fn write_csv(table: &Table, out: &mut dyn Write) -> io::Result<()> {
    let mut buf = String::new();
    buf.push_str(&table.header.join(","));
    buf.push('\n');
    for row in &table.rows {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                buf.push(',');
            }
            if let Some(v) = cell {
                buf.push_str(&format_number(*v));
            }
        }
        buf.push('\n');
    }
    out.write_all(buf.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_numbers() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(3010000.0), "3010000");
        assert_eq!(format_number(0.1), "0.1");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333");
        assert_eq!(format_number(2.0 / 3.0 * 1e-9), "6.66666667e-10");
        assert_eq!(format_number(123456789012.0), "123456789000");
        assert_eq!(format_number(-12.5), "-12.5");
        assert_eq!(format_number(1e300), "1e300");
    }

    #[test]
    fn writes_table() {
        let t = Table {
            header: vec!["time".into(), "A@c".into(), "ratio".into()],
            rows: vec![vec![Some(0.0), Some(5.0), None], vec![Some(0.5), Some(4.0), Some(0.25)]],
        };
        let mut out = Vec::new();
        write_csv(&t, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "time,A@c,ratio\n0,5,\n0.5,4,0.25\n");
        assert_eq!(t.column("A@c").unwrap(), vec![Some(5.0), Some(4.0)]);
    }
}
