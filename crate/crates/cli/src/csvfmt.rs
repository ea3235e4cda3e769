//! CSV serialization: comma-separated, header row, LF endings,
//! 17-significant-digit floats, NaN spelled `nan`.

/// Formats one float with 17 significant digits; `nan` for NaN.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Joins a header and float-only rows into a CSV document.
pub fn table(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(fmt_float(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_float(f64::NAN), "nan");
        assert_eq!(fmt_float(-3.5), "-3.5000000000000000e0");
        // 17 significant digits survive a round trip.
        let v = std::f64::consts::PI * 1e-7;
        assert_eq!(fmt_float(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn lf_endings_only() {
        let doc = table("a,b", vec![vec!["1".into(), "2".into()]]);
        assert_eq!(doc, "a,b\n1,2\n");
        assert!(!doc.contains('\r'));
    }
}
