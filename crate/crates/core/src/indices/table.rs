use std::fmt::Write;

use super::{ExponentRecord, Q};
use crate::error::{Error, Result};

/// Parses `a/b`, an integer, or a terminating decimal into an exact rational.
pub fn parse_ratio(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(Q::new(a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || frac.len() > 15 {
        return Err(bad());
    }
    let digits = |t: &str| t.is_empty() || t.bytes().all(|c| c.is_ascii_digit());
    if !digits(int) || !digits(frac) {
        return Err(bad());
    }
    let scale = 10i64.pow(frac.len() as u32);
    let i: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let f: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    let v = Q::new(
        i.checked_mul(scale).and_then(|x| x.checked_add(f)).ok_or_else(bad)?,
        scale,
    );
    Ok(if neg { -v } else { v })
}

fn opt(v: Option<Q>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

pub(crate) fn fields(r: &ExponentRecord) -> Vec<(&'static str, String)> {
    vec![
        ("n", r.n.to_string()),
        ("p0", r.p0.to_string()),
        ("q0", r.q0.to_string()),
        ("p", r.p.to_string()),
        ("q", r.q.to_string()),
        ("delta", r.delta.to_string()),
        ("delta_p", r.delta_p.to_string()),
        ("p1", r.p1.to_string()),
        ("theta", r.theta.to_string()),
        ("rho", r.rho.to_string()),
        ("delta_bar", r.delta_bar.to_string()),
        ("nu2", r.nu2.to_string()),
        ("delta_bar2", opt(r.delta_bar2)),
        ("alpha_below", opt(r.alpha_below)),
        ("alpha_above", opt(r.alpha_above)),
        ("admissible_pair", r.admissible_pair.to_string()),
        ("admissible_vv", r.admissible_vv.to_string()),
        ("provider", r.provider.to_string()),
        ("conjectural", r.conjectural.to_string()),
        ("below_critical", r.below_critical().to_string()),
    ]
}

/// Two aligned columns, one index per line.
pub fn record_text(r: &ExponentRecord) -> String {
    let rows = fields(r);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        writeln!(out, "{k:<width$}  {v}").unwrap();
    }
    out
}

/// Header line and one data line.
pub fn record_csv(r: &ExponentRecord) -> String {
    let rows = fields(r);
    let head: Vec<&str> = rows.iter().map(|(k, _)| *k).collect();
    let vals: Vec<&str> = rows.iter().map(|(_, v)| v.as_str()).collect();
    format!("{}\n{}\n", head.join(","), vals.join(","))
}

impl serde::Serialize for ExponentRecord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let rows = fields(self);
        let mut m = s.serialize_map(Some(rows.len()))?;
        for (k, v) in rows {
            m.serialize_entry(k, &v)?;
        }
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indices::Dim2Solved;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_ratio("6/5").unwrap(), Q::new(6, 5));
        assert_eq!(parse_ratio("0.2").unwrap(), Q::new(1, 5));
        assert_eq!(parse_ratio("2").unwrap(), Q::new(2, 1));
        assert_eq!(parse_ratio("-.5").unwrap(), Q::new(-1, 2));
        assert_eq!(parse_ratio("1.25").unwrap(), Q::new(5, 4));
        for bad in ["", "x", "1/0", "1.2.3", "."] {
            assert!(parse_ratio(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn text_and_csv_agree() {
        let r = ExponentRecord::new(
            2,
            Q::new(6, 5),
            Q::new(2, 1),
            Q::new(8, 5),
            Q::new(5, 2),
            Q::new(1, 5),
            &Dim2Solved,
        )
        .unwrap();
        let csv = record_csv(&r);
        let mut lines = csv.lines();
        let head: Vec<&str> = lines.next().unwrap().split(',').collect();
        let vals: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(head.len(), vals.len());
        let text = record_text(&r);
        for (k, v) in head.iter().zip(&vals) {
            let line = text.lines().find(|l| l.split_whitespace().next() == Some(k)).unwrap();
            assert_eq!(line.split_whitespace().nth(1), Some(*v));
        }
        assert!(text.contains("delta_bar2"));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["alpha_below"], "5/2");
    }
}
