//! Plain-text field files: a header `field n=<n> N=<N> L=<L>` followed by
//! `N^n` lines `re,im` in row-major order.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::{GridSpec, SampledField};
use crate::error::{Error, Result};

pub fn write_field<W: Write>(mut out: W, f: &SampledField) -> Result<()> {
    let spec = f.spec();
    writeln!(out, "field n={} N={} L={}", spec.dim(), spec.points(), spec.side())?;
    for v in f.values() {
        writeln!(out, "{},{}", v.re, v.im)?;
    }
    Ok(())
}

fn header_value<'a>(token: Option<&'a str>, key: &str) -> Result<&'a str> {
    token
        .and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("field header is missing `{key}=`")))
}

pub fn read_field<R: BufRead>(input: R) -> Result<SampledField> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty field file".into()))??;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("field") {
        return Err(Error::Parse("field header must start with `field`".into()));
    }
    let parse_err = |what: &str| Error::Parse(format!("bad {what} in field header"));
    let dim: usize = header_value(tokens.next(), "n")?
        .parse()
        .map_err(|_| parse_err("n"))?;
    let points: usize = header_value(tokens.next(), "N")?
        .parse()
        .map_err(|_| parse_err("N"))?;
    let side: f64 = header_value(tokens.next(), "L")?
        .parse()
        .map_err(|_| parse_err("L"))?;
    let spec = GridSpec::new(dim, side, points)?;
    let mut values = Vec::with_capacity(spec.len());
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let (re, im) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `re,im`", lineno + 2)))?;
        let re: f64 = re
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad real part", lineno + 2)))?;
        let im: f64 = im
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad imaginary part", lineno + 2)))?;
        values.push(Complex64::new(re, im));
    }
    SampledField::new(spec, values)
}
