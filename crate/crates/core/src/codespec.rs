//! JSON description of a QPP code: `{name, lambda, rho, n, k_expected?, N, f1, f2}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::SparseBitMatrix;
use crate::qpp::{is_permutation_poly, Qpp};
use crate::tanner::{CodeProfile, TannerGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpecFile {
    pub name: String,
    pub lambda: usize,
    pub rho: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_expected: Option<usize>,
    #[serde(rename = "N")]
    pub edges: u64,
    pub f1: u64,
    pub f2: u64,
}

fn field(name: &str, msg: impl std::fmt::Display) -> Error {
    Error::RejectedInput(format!("field `{name}`: {msg}"))
}

impl CodeSpecFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: CodeSpecFile = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Json(j) => Error::RejectedInput(format!("{}: {j}", path.display())),
            Error::RejectedInput(m) => Error::RejectedInput(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda == 0 {
            return Err(field("lambda", "must be positive"));
        }
        if self.rho == 0 {
            return Err(field("rho", "must be positive"));
        }
        if self.edges < 2 || self.edges > 1 << 32 {
            return Err(field("N", format!("{} is outside [2, 2^32]", self.edges)));
        }
        if self.n as u64 * self.lambda as u64 != self.edges {
            return Err(field("N", format!("{} differs from n*lambda = {}", self.edges, self.n * self.lambda)));
        }
        if self.edges % self.rho as u64 != 0 {
            return Err(field("rho", format!("{} does not divide N = {}", self.rho, self.edges)));
        }
        if let Some(k) = self.k_expected {
            if k > self.n {
                return Err(field("k_expected", format!("{k} exceeds n = {}", self.n)));
            }
        }
        if self.f1 >= self.edges {
            return Err(field("f1", format!("{} is not reduced mod N", self.f1)));
        }
        if self.f2 >= self.edges {
            return Err(field("f2", format!("{} is not reduced mod N", self.f2)));
        }
        if !is_permutation_poly(self.edges, self.f1, self.f2)? {
            return Err(field("f1", format!("{}x+{}x^2 is not a permutation mod {}", self.f1, self.f2, self.edges)));
        }
        Ok(())
    }

    pub fn profile(&self) -> Result<CodeProfile> {
        CodeProfile::from_edges(self.lambda, self.rho, self.edges as usize)
    }

    pub fn qpp(&self) -> Result<Qpp> {
        Qpp::new(self.edges, self.f1, self.f2)
    }

    pub fn graph(&self) -> Result<TannerGraph> {
        TannerGraph::build(self.profile()?, self.qpp()?)
    }

    pub fn parity_check(&self) -> Result<SparseBitMatrix> {
        SparseBitMatrix::from_graph(&self.graph()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CODE_ONE: &str = r#"{"name":"I","lambda":3,"rho":6,"n":504,"k_expected":252,"N":1512,"f1":5,"f2":210}"#;

    #[test]
    fn parses_and_builds() {
        let s = CodeSpecFile::from_json(CODE_ONE).unwrap();
        assert_eq!(s.k_expected, Some(252));
        let h = s.parity_check().unwrap();
        assert_eq!((h.rows(), h.cols()), (252, 504));
        let back: CodeSpecFile = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            (CODE_ONE.replace("\"N\":1512", "\"N\":1510"), "`N`"),
            (CODE_ONE.replace("\"f1\":5", "\"f1\":6"), "`f1`"),
            (CODE_ONE.replace("\"f2\":210", "\"f2\":2000"), "`f2`"),
            (CODE_ONE.replace("\"rho\":6", "\"rho\":0"), "`rho`"),
            (CODE_ONE.replace("\"k_expected\":252", "\"k_expected\":600"), "`k_expected`"),
            (CODE_ONE.replace("\"rho\":6,", ""), "`rho`"),
            (CODE_ONE.replace("\"f1\":5", "\"f1\":\"5\""), "line"),
            (CODE_ONE.replace("\"f1\":5", "\"f1\":5,\"f3\":1"), "`f3`"),
        ];
        for (text, needle) in cases {
            let err = CodeSpecFile::from_json(&text).unwrap_err().to_string();
            assert!(err.contains(needle), "{err} should mention {needle}");
        }
    }
}
