//! Byte-stable CSV output: `#key=value` metadata, one header line, then
//! rows with every float in C-style `%.8e` form (nine significant digits).

use std::fmt::Write;

/// `%.8e` as C prints it: `-1.23456789e-05`.
pub fn sci(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    // fold −0 into +0 so symmetric grids print symmetric bytes
    let x = if x == 0.0 { 0.0 } else { x };
    let s = format!("{x:.8e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    format!(
        "{mantissa}e{}{:02}",
        if exp < 0 { '-' } else { '+' },
        exp.abs()
    )
}

pub struct CsvWriter {
    buf: String,
}

impl CsvWriter {
    pub fn new<'a>(metadata: impl IntoIterator<Item = (&'a str, String)>, header: &[&str]) -> Self {
        let mut buf = String::new();
        for (k, v) in metadata {
            writeln!(buf, "#{k}={v}").unwrap();
        }
        buf.push_str(&header.join(","));
        buf.push('\n');
        Self { buf }
    }

    pub fn row(&mut self, fields: &[f64]) {
        let line: Vec<String> = fields.iter().map(|&x| sci(x)).collect();
        self.buf.push_str(&line.join(","));
        self.buf.push('\n');
    }

    /// A row whose leading fields are text labels.
    pub fn labelled_row(&mut self, labels: &[&str], fields: &[f64]) {
        let mut line: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        line.extend(fields.iter().map(|&x| sci(x)));
        self.buf.push_str(&line.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_style_exponents() {
        assert_eq!(sci(1.0), "1.00000000e+00");
        assert_eq!(sci(-1.234567891e-5), "-1.23456789e-05");
        assert_eq!(sci(2000.0), "2.00000000e+03");
        assert_eq!(sci(1e100), "1.00000000e+100");
        assert_eq!(sci(-0.0), "0.00000000e+00");
        assert_eq!(sci(0.17791267958950552), "1.77912680e-01");
    }

    #[test]
    fn writer_layout() {
        let mut w = CsvWriter::new([("theta", "0".to_string())], &["a", "b"]);
        w.row(&[1.0, 2.0]);
        w.labelled_row(&["x"], &[3.0]);
        assert_eq!(
            w.finish(),
            "#theta=0\na,b\n1.00000000e+00,2.00000000e+00\nx,3.00000000e+00\n"
        );
    }
}
