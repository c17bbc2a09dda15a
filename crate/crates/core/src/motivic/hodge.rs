//! Bivariate Hodge-Deligne polynomials in `u`, `v`.
//!
//! Exponents are stored as signed integers so that intermediate images of
//! localized classes (`L^-k -> (uv)^-k`) can be represented; a final result
//! must clear those denominators, which `is_polynomial` checks.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct HodgePolynomial {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl HodgePolynomial {
    pub fn zero() -> Self {
        HodgePolynomial::default()
    }

    pub fn one() -> Self {
        HodgePolynomial::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = HodgePolynomial::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn u() -> Self {
        let mut p = HodgePolynomial::zero();
        p.add_term(1, 0, BigInt::one());
        p
    }

    pub fn v() -> Self {
        let mut p = HodgePolynomial::zero();
        p.add_term(0, 1, BigInt::one());
        p
    }

    /// `(uv)^k`, `k` possibly negative.
    pub fn uv_pow(k: i64) -> Self {
        let mut p = HodgePolynomial::zero();
        p.add_term(k, k, BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|&(a, b)| a >= 0 && b >= 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, up: i64, vp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry((up, vp)) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &HodgePolynomial) -> HodgePolynomial {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }

    pub fn neg(&self) -> HodgePolynomial {
        HodgePolynomial {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }

    pub fn sub(&self, other: &HodgePolynomial) -> HodgePolynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &HodgePolynomial) -> HodgePolynomial {
        let mut out = HodgePolynomial::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> HodgePolynomial {
        let mut out = HodgePolynomial::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

impl fmt::Display for HodgePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(up, vp), coeff) in self.terms.iter().rev() {
            let neg = coeff.is_negative();
            let abs = coeff.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || (up == 0 && vp == 0) {
                factors.push(abs.to_string());
            }
            match up {
                0 => {}
                1 => factors.push("u".to_string()),
                k => factors.push(format!("u^{}", k)),
            }
            match vp {
                0 => {}
                1 => factors.push("v".to_string()),
                k => factors.push(format!("v^{}", k)),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_arith() {
        let p = HodgePolynomial::uv_pow(2).sub(&HodgePolynomial::uv_pow(1));
        assert_eq!(p.to_string(), "u^2*v^2 - u*v");
        let q = HodgePolynomial::u().add(&HodgePolynomial::v());
        assert_eq!(q.mul(&HodgePolynomial::one()), q);
        assert!(HodgePolynomial::uv_pow(-1).mul(&HodgePolynomial::uv_pow(1)).is_polynomial());
        assert!(!HodgePolynomial::uv_pow(-1).is_polynomial());
    }
}
