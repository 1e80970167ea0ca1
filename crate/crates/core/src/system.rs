//! Polynomial system files: one polynomial per line, `#` starts a comment,
//! and the first non-comment line may be `vars: n` to fix the ambient count.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::monomial::MAX_VARS;
use crate::parse::{max_variable_index, parse_line};
use crate::poly::Polynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    pub field: PrimeField,
    pub nvars: usize,
    pub polys: Vec<Polynomial>,
}

impl PolySystem {
    pub fn new(field: PrimeField, nvars: usize, polys: Vec<Polynomial>) -> Result<Self> {
        if polys.iter().any(|p| p.nvars() != nvars || p.field() != field) {
            return Err(Error::structural("system polynomials disagree on ring"));
        }
        Ok(PolySystem { field, nvars, polys })
    }

    pub fn parse(text: &str, field: PrimeField) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut lines: Vec<(usize, &str)> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if lines.is_empty() && declared.is_none() {
                if let Some(rest) = body.strip_prefix("vars:") {
                    let n = rest.trim().parse::<usize>().map_err(|_| Error::Parse {
                        line: k + 1,
                        column: raw.find("vars:").unwrap_or(0) + 6,
                        message: format!("invalid variable count '{}'", rest.trim()),
                    })?;
                    if n == 0 || n > MAX_VARS {
                        return Err(Error::Input(format!(
                            "variable count {n} outside 1..={MAX_VARS}"
                        )));
                    }
                    declared = Some(n);
                    continue;
                }
            }
            lines.push((k, raw));
        }
        let nvars = match declared {
            Some(n) => n,
            None => {
                if lines.is_empty() {
                    return Err(Error::Input("system file contains no polynomials".into()));
                }
                let n = lines
                    .iter()
                    .map(|(_, l)| max_variable_index(l.split('#').next().unwrap_or("")))
                    .max()
                    .unwrap_or(0)
                    .max(1);
                if n > MAX_VARS {
                    return Err(Error::Input(format!(
                        "variable x{n} exceeds the supported maximum of {MAX_VARS}"
                    )));
                }
                n
            }
        };
        let polys = lines
            .iter()
            .map(|(k, raw)| {
                // keep columns relative to the raw line
                let body = raw.split('#').next().unwrap_or("");
                parse_line(body, field, nvars, k + 1)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PolySystem { field, nvars, polys })
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }
}

impl fmt::Display for PolySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.nvars)?;
        for p in &self.polys {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}
