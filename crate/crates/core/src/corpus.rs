//! Built-in plane-curve examples: monomial divisors with their stratum
//! data, plus the cusp for oracle-only experiments.

use crate::jet::{IntegerPolynomial, JetError};
use crate::resolution::{ResolutionData, ZetaError};

#[derive(Debug, Clone, Copy)]
pub struct BuiltinExample {
    pub name: &'static str,
    pub f_text: &'static str,
    pub dimension: usize,
    /// Stratum data; `None` for examples only reachable through the
    /// counting oracles.
    pub resolution_json: Option<&'static str>,
}

pub const BUILTINS: &[BuiltinExample] = &[
    BuiltinExample {
        name: "x",
        f_text: "x",
        dimension: 2,
        resolution_json: Some(include_str!("../data/x.json")),
    },
    BuiltinExample {
        name: "x2",
        f_text: "x^2",
        dimension: 2,
        resolution_json: Some(include_str!("../data/x2.json")),
    },
    BuiltinExample {
        name: "xy",
        f_text: "x*y",
        dimension: 2,
        resolution_json: Some(include_str!("../data/xy.json")),
    },
    BuiltinExample {
        name: "x2y",
        f_text: "x^2*y",
        dimension: 2,
        resolution_json: Some(include_str!("../data/x2y.json")),
    },
    BuiltinExample {
        name: "x2y3",
        f_text: "x^2*y^3",
        dimension: 2,
        resolution_json: Some(include_str!("../data/x2y3.json")),
    },
    BuiltinExample {
        name: "cusp",
        f_text: "x^2 + y^3",
        dimension: 2,
        resolution_json: None,
    },
];

pub fn builtin(name: &str) -> Option<&'static BuiltinExample> {
    BUILTINS.iter().find(|b| b.name == name)
}

impl BuiltinExample {
    pub fn polynomial(&self) -> Result<IntegerPolynomial, JetError> {
        IntegerPolynomial::parse_in_dimension(self.f_text, self.dimension)
    }

    pub fn resolution(&self) -> Option<Result<ResolutionData, ZetaError>> {
        self.resolution_json.map(ResolutionData::from_json)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_load() {
        for b in BUILTINS {
            let f = b.polynomial().unwrap();
            assert_eq!(f.dimension(), b.dimension);
            if let Some(res) = b.resolution() {
                let res = res.unwrap();
                assert_eq!(res.dimension, b.dimension);
            }
        }
        assert!(builtin("xy").is_some());
        assert!(builtin("nope").is_none());
    }
}
