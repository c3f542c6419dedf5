//! CSV assembly and small statistics helpers.
//!
//! Floats are written with the shortest round-trip representation, which is
//! deterministic for a given bit pattern; identical runs therefore produce
//! byte-identical files.

/// Build a CSV document from a header and rows of ready-formatted cells.
pub fn csv_document(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn fmt(value: f64) -> String {
    format!("{value}")
}

/// Linear-interpolation percentile of unsorted data, q in [0, 1].
pub fn percentile(values: &[f64], q: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    if lo + 1 < n {
        sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac
    } else {
        sorted[n - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let doc = csv_document(
            &["a", "b"],
            vec![vec!["1".to_string(), "2".to_string()]],
        );
        assert_eq!(doc, "a,b\n1,2\n");
    }

    #[test]
    fn percentiles_interpolate() {
        let v = [4.0, 1.0, 3.0, 2.0];
        assert_eq!(percentile(&v, 0.0), 1.0);
        assert_eq!(percentile(&v, 1.0), 4.0);
        assert_eq!(percentile(&v, 0.5), 2.5);
        assert_eq!(percentile(&[7.0], 0.9), 7.0);
    }

    #[test]
    fn float_formatting_round_trips() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 31.689f64] {
            assert_eq!(fmt(x).parse::<f64>().unwrap(), x);
        }
    }
}
