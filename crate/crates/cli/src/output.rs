use std::io::Write;

use anyhow::Result;
use resumkit::scalar::format_rational;
use resumkit::{BigRational, Scalar};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct ResultDocument<P> {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub config: RunConfig,
    pub payload: P,
}

/// Float written with 17 significant digits so it parses back to the same bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Float(pub f64);

impl Serialize for Float {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_str(&self.0.to_string());
        }
        let raw = RawValue::from_string(format_float(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Exact value as `"num/den"`.
#[derive(Debug, Clone, PartialEq)]
pub struct Exact(pub BigRational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

/// A scalar of whichever type the command ran in.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Number {
    Exact(Exact),
    Float(Float),
}

impl std::fmt::Display for Number {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Number::Exact(q) => f.write_str(&format_rational(&q.0)),
            Number::Float(x) => f.write_str(&format_float(x.0)),
        }
    }
}

/// Scalars the CLI can read from arguments and write into documents.
pub trait CliScalar: Scalar {
    const NAME: &'static str;
    fn parse_arg(s: &str) -> Result<Self>;
    fn emit(&self) -> Number;
}

impl CliScalar for BigRational {
    const NAME: &'static str = "rational";
    fn parse_arg(s: &str) -> Result<Self> {
        Ok(resumkit::scalar::parse_rational(s)?)
    }
    fn emit(&self) -> Number {
        Number::Exact(Exact(self.clone()))
    }
}

impl CliScalar for f64 {
    const NAME: &'static str = "f64";
    fn parse_arg(s: &str) -> Result<Self> {
        Ok(match s.split_once('/') {
            Some(_) => resumkit::scalar::parse_rational(s)?.to_f64_lossy(),
            None => s.trim().parse()?,
        })
    }
    fn emit(&self) -> Number {
        Number::Float(Float(*self))
    }
}

impl CliScalar for f32 {
    const NAME: &'static str = "f32";
    fn parse_arg(s: &str) -> Result<Self> {
        Ok(f64::parse_arg(s)? as f32)
    }
    fn emit(&self) -> Number {
        Number::Float(Float(f64::from(*self)))
    }
}

/// Rows for the `csv` output format.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }
}

pub struct Rendered<P> {
    pub payload: P,
    pub table: Table,
}

pub fn write_json<P: Serialize>(out: &mut impl Write, doc: &ResultDocument<P>) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, doc)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_csv(out: &mut impl Write, table: &Table) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}
