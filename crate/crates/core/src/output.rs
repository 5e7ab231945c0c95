//! Fixed-precision number formatting for CSV output.

/// 17 significant digits in scientific notation, `.` decimal separator.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// One CSV line (with trailing `\n`) of formatted numbers.
pub fn csv_line(values: &[f64]) -> String {
    let mut s = values.iter().map(|&v| fmt_num(v)).collect::<Vec<_>>().join(",");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_num(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_num(-2.0), "-2.0000000000000000e0");
        assert_eq!(csv_line(&[1.0, 0.5]), "1.0000000000000000e0,5.0000000000000000e-1\n");
        let x = std::f64::consts::PI;
        assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
    }
}
