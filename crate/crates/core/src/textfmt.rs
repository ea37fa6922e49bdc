//! Small number and label formatting helpers for the text reports.

/// Rounds to `decimals` places and drops trailing zeros (and a bare point):
/// `0.810` prints as `0.81`, `722.0` as `722`.
pub fn num(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

/// Spreadsheet-style tag for class index `i`: a..z, then aa, ab, ...
pub fn class_tag(i: usize) -> String {
    let mut n = i;
    let mut out = Vec::new();
    loop {
        out.push(b'a' + (n % 26) as u8);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}
