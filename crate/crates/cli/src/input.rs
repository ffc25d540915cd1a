use iotacurve::iota::{build_standard, parse_standard, validate, AlmostIotaComplex, StandardParams};
use iotacurve::{Error, Result};

/// A command-line input: either standard-complex notation or a JSON complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Standard(StandardParams),
    Complex(AlmostIotaComplex),
}

impl Parsed {
    pub fn complex(&self) -> AlmostIotaComplex {
        match self {
            Parsed::Standard(p) => build_standard(p),
            Parsed::Complex(c) => c.clone(),
        }
    }

    /// Canonical text form; parsing it again gives back the same value.
    pub fn print(&self) -> String {
        match self {
            Parsed::Standard(p) => p.to_string(),
            Parsed::Complex(c) => c.to_json_string(),
        }
    }
}

pub fn parse_complex(text: &str) -> Result<Parsed> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let c = AlmostIotaComplex::from_json_str(text)?;
        let report = validate(&c);
        if !report.passed() {
            return Err(Error::Invalid(report.failures().join("; ")));
        }
        Ok(Parsed::Complex(c))
    } else {
        // Positions reported by the grammar are relative to the trimmed text.
        let offset = text.len() - trimmed.len();
        parse_standard(trimmed.trim_end()).map(Parsed::Standard).map_err(|e| match e {
            Error::Syntax { pos, msg } => Error::Syntax { pos: pos + offset, msg },
            other => other,
        })
    }
}
