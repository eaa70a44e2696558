use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{ApproxConfig, ExpSum, ExpTerm};
use crate::error::{Error, Result};
use crate::polyrat::{format_real, PrecisionContext};

#[derive(Serialize, Deserialize)]
struct TermJson {
    c_re: String,
    c_im: String,
    l_re: String,
    l_im: String,
}

#[derive(Serialize, Deserialize)]
struct ExpSumJson {
    #[serde(rename = "M")]
    m: usize,
    digits: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    config: Option<ApproxConfig>,
    terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    manifest: Option<Value>,
}

impl ExpSum {
    /// Coefficient file contents. Every number is a decimal string that
    /// parses back to the identical binary value.
    pub fn to_json(&self, manifest: Option<&Value>) -> Result<String> {
        let file = ExpSumJson {
            m: self.config.map_or(self.terms.len(), |c| c.m),
            digits: self.digits,
            config: self.config,
            terms: self
                .terms
                .iter()
                .map(|t| TermJson {
                    c_re: format_real(t.c.real()),
                    c_im: format_real(t.c.imag()),
                    l_re: format_real(t.lambda.real()),
                    l_im: format_real(t.lambda.imag()),
                })
                .collect(),
            manifest: manifest.cloned(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Inverse of [`ExpSum::to_json`]; also returns the embedded manifest.
    pub fn from_json(s: &str) -> Result<(ExpSum, Option<Value>)> {
        let file: ExpSumJson = serde_json::from_str(s)?;
        let ctx = PrecisionContext::new(file.digits)?;
        let terms = file
            .terms
            .iter()
            .map(|t| {
                Ok(ExpTerm {
                    c: ctx.from_parts(&ctx.parse_real(&t.c_re)?, &ctx.parse_real(&t.c_im)?),
                    lambda: ctx.from_parts(&ctx.parse_real(&t.l_re)?, &ctx.parse_real(&t.l_im)?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if terms.is_empty() {
            return Err(Error::Parse("coefficient file has no terms".into()));
        }
        let mut sum = ExpSum::new(terms, file.digits);
        sum.config = file.config.map(|c| c.with_digits(file.digits));
        Ok((sum, file.manifest))
    }
}
