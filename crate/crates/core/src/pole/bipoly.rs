//! Exact bivariate polynomials in `Z[x, t]`, where `x` stands for the class
//! of the affine line. The cofactor bookkeeping of the pole analysis happens
//! here before classes re-enter the picture.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::motivic::MotivicClass;

/// Sparse polynomial in `Z[x, t]`, keyed `(t-degree, x-degree)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct IntBiPoly {
    terms: BTreeMap<(u64, u64), BigInt>,
}

impl IntBiPoly {
    pub fn zero() -> Self {
        IntBiPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, BigInt::one())
    }

    pub fn monomial(xdeg: u64, tdeg: u64, coeff: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(xdeg, tdeg, coeff);
        p
    }

    /// `1 - x^a t^n`.
    pub fn one_minus(a: u64, n: u64) -> Self {
        let mut p = Self::one();
        p.add_term(a, n, -BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, xdeg: u64, tdeg: u64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry((tdeg, xdeg)) {
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

    pub fn add(&self, other: &IntBiPoly) -> IntBiPoly {
        let mut out = self.clone();
        for (&(t, x), c) in &other.terms {
            out.add_term(x, t, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &IntBiPoly) -> IntBiPoly {
        let mut out = self.clone();
        for (&(t, x), c) in &other.terms {
            out.add_term(x, t, -c);
        }
        out
    }

    pub fn mul(&self, other: &IntBiPoly) -> IntBiPoly {
        let mut out = IntBiPoly::zero();
        for (&(ta, xa), ca) in &self.terms {
            for (&(tb, xb), cb) in &other.terms {
                out.add_term(xa + xb, ta + tb, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u64) -> IntBiPoly {
        let mut out = IntBiPoly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn tdeg(&self) -> u64 {
        self.terms.keys().map(|&(t, _)| t).max().unwrap_or(0)
    }

    /// Exact division by a polynomial whose `t^0` slice is the constant 1,
    /// working upward through `t`-degrees. Returns `None` when the division
    /// leaves a remainder.
    pub fn div_exact(&self, divisor: &IntBiPoly) -> Option<IntBiPoly> {
        if self.is_zero() {
            return Some(IntBiPoly::zero());
        }
        debug_assert_eq!(
            divisor.terms.get(&(0, 0)),
            Some(&BigInt::one()),
            "divisor must have constant term 1"
        );
        let mut rem = self.clone();
        let mut quot = IntBiPoly::zero();
        let max_t = self.tdeg();
        for t in 0..=max_t {
            // current t-slice of the remainder becomes a quotient slice,
            // because the divisor's t^0 slice is 1.
            let slice: Vec<(u64, BigInt)> = rem
                .terms
                .range((t, 0)..=(t, u64::MAX))
                .map(|(&(_, x), c)| (x, c.clone()))
                .collect();
            if slice.is_empty() {
                continue;
            }
            for (x, c) in &slice {
                quot.add_term(*x, t, c.clone());
            }
            for (&(td, xd), cd) in &divisor.terms {
                for (x, c) in &slice {
                    rem.add_term(x + xd, t + td, -(c * cd));
                }
            }
        }
        if rem.is_zero() {
            Some(quot)
        } else {
            None
        }
    }

    /// Substitute `x -> L`, giving a `t`-polynomial with class coefficients.
    pub fn to_tpoly(&self) -> Vec<MotivicClass> {
        let len = self.tdeg() as usize + 1;
        let mut out = crate::tpoly::zero(len);
        for (&(t, x), c) in &self.terms {
            out[t as usize] = out[t as usize].clone()
                + MotivicClass::l_pow(x as i64).mul(&MotivicClass::from_bigint(c.clone()));
        }
        crate::tpoly::trim(&mut out);
        out
    }

    /// The `t`-free part as a class (errors if `t` occurs).
    pub fn to_class(&self) -> MotivicClass {
        debug_assert_eq!(self.tdeg(), 0);
        let mut acc = MotivicClass::zero();
        for (&(_, x), c) in &self.terms {
            acc = acc + MotivicClass::l_pow(x as i64).mul(&MotivicClass::from_bigint(c.clone()));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_exact_division() {
        let f = IntBiPoly::one_minus(3, 2);
        let g = IntBiPoly::one_minus(1, 1);
        let p = f.mul(&g);
        assert_eq!(p.div_exact(&g), Some(f.clone()));
        assert_eq!(p.div_exact(&f), Some(g.clone()));
        // non-divisor leaves a remainder
        let h = IntBiPoly::one_minus(2, 1);
        assert_eq!(p.div_exact(&h), None);
    }

    #[test]
    fn geometric_lift() {
        // (1 - x t)(1 + x t + x^2 t^2) = 1 - x^3 t^3
        let f = IntBiPoly::one_minus(1, 1);
        let mut s = IntBiPoly::one();
        s.add_term(1, 1, BigInt::one());
        s.add_term(2, 2, BigInt::one());
        assert_eq!(f.mul(&s), IntBiPoly::one_minus(3, 3));
    }

    #[test]
    fn class_conversion() {
        let p = IntBiPoly::one_minus(2, 1);
        let tp = p.to_tpoly();
        assert_eq!(tp.len(), 2);
        assert_eq!(tp[0], MotivicClass::one());
        assert_eq!(tp[1], MotivicClass::zero() - MotivicClass::l_pow(2));
    }
}
