//! Effective model of the localized Grothendieck ring.
//!
//! Classes are integer-coefficient Laurent polynomials in `L` (the class of
//! the affine line) over a free commutative monoid of declared stratum
//! symbols. All arithmetic is exact.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::hodge::HodgePolynomial;
use super::MotivicError;

/// Multiset of stratum symbols, e.g. `s^2 * w`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default, Hash)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn symbol(name: &str) -> Self {
        let mut m = BTreeMap::new();
        m.insert(name.to_string(), 1);
        Monomial(m)
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (k, v) in &other.0 {
            *out.entry(k.clone()).or_insert(0) += v;
        }
        Monomial(out)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, u32)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }
}

/// Key of one stored term: power of `L` times a symbol monomial.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct TermKey {
    pub lexp: i64,
    pub monomial: Monomial,
}

/// An element of the effective (localized) Grothendieck ring model.
///
/// Invariant: no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MotivicClass {
    terms: BTreeMap<TermKey, BigInt>,
}

impl MotivicClass {
    pub fn zero() -> Self {
        MotivicClass::default()
    }

    pub fn one() -> Self {
        MotivicClass::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        let mut c = MotivicClass::zero();
        c.add_term(0, Monomial::unit(), n);
        c
    }

    /// The class `L` of the affine line.
    pub fn lefschetz() -> Self {
        Self::l_pow(1)
    }

    /// `L^k`, with `k` possibly negative (localization).
    pub fn l_pow(k: i64) -> Self {
        let mut c = MotivicClass::zero();
        c.add_term(k, Monomial::unit(), BigInt::one());
        c
    }

    pub fn symbol(name: &str) -> Self {
        let mut c = MotivicClass::zero();
        c.add_term(0, Monomial::symbol(name), BigInt::one());
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self == &MotivicClass::one()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, lexp: i64, monomial: Monomial, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let key = TermKey { lexp, monomial };
        match self.terms.entry(key) {
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

    pub fn add(&self, other: &MotivicClass) -> MotivicClass {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.lexp, k.monomial.clone(), v.clone());
        }
        out
    }

    pub fn neg(&self) -> MotivicClass {
        MotivicClass {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn sub(&self, other: &MotivicClass) -> MotivicClass {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MotivicClass) -> MotivicClass {
        let mut out = MotivicClass::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                out.add_term(ka.lexp + kb.lexp, ka.monomial.mul(&kb.monomial), va * vb);
            }
        }
        out
    }

    pub fn mul_int(&self, n: i64) -> MotivicClass {
        self.mul(&MotivicClass::from_int(n))
    }

    /// Multiply by `L^k` (shift every term).
    pub fn mul_l_pow(&self, k: i64) -> MotivicClass {
        MotivicClass {
            terms: self
                .terms
                .iter()
                .map(|(key, v)| {
                    (
                        TermKey {
                            lexp: key.lexp + k,
                            monomial: key.monomial.clone(),
                        },
                        v.clone(),
                    )
                })
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MotivicClass {
        let mut out = MotivicClass::one();
        for _ in 0..e {
            out = MotivicClass::mul(&out, self);
        }
        out
    }

    /// Minimum `L`-exponent over all stored terms; `None` for the zero class
    /// (the valuation is +infinity there).
    pub fn l_valuation(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.lexp).min()
    }

    /// True iff every term has nonnegative `L`-exponent.
    pub fn is_effective_representable(&self) -> bool {
        self.l_valuation().map_or(true, |v| v >= 0)
    }

    /// Divisibility by `L^k` in the effective model. Rejects classes with
    /// negative `L`-exponents, where the question is vacuous.
    pub fn l_divisible(&self, k: u64) -> Result<bool, MotivicError> {
        if !self.is_effective_representable() {
            return Err(MotivicError::NotEffective);
        }
        Ok(self.l_valuation().map_or(true, |v| v >= k as i64))
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for key in self.terms.keys() {
            for (name, _) in key.monomial.iter() {
                out.insert(name.clone());
            }
        }
        out
    }

    /// Ring homomorphism `L -> q`, symbols via `table`. Computed exactly as a
    /// rational (negative `L`-exponents give `1/q` powers); the result must be
    /// an integer.
    pub fn specialize_point_count(
        &self,
        q: u64,
        table: &BTreeMap<String, BigInt>,
    ) -> Result<BigInt, MotivicError> {
        let mut acc = BigRational::zero();
        let qq = BigInt::from(q);
        for (key, coeff) in &self.terms {
            let mut term = BigRational::from_integer(coeff.clone());
            let lpow = qq.pow(key.lexp.unsigned_abs() as u32);
            if key.lexp >= 0 {
                term *= BigRational::from_integer(lpow);
            } else {
                term /= BigRational::from_integer(lpow);
            }
            for (name, mult) in key.monomial.iter() {
                let value = table
                    .get(name)
                    .ok_or_else(|| MotivicError::MissingSymbol(name.clone()))?;
                term *= BigRational::from_integer(value.pow(mult));
            }
            acc += term;
        }
        if !acc.is_integer() {
            return Err(MotivicError::NonIntegralPointCount);
        }
        Ok(acc.to_integer())
    }

    /// Ring homomorphism `L -> uv`, symbols via `table`. Negative
    /// `L`-exponents are allowed only when the final result clears its
    /// `(uv)`-denominators.
    pub fn specialize_hodge(
        &self,
        table: &BTreeMap<String, HodgePolynomial>,
    ) -> Result<HodgePolynomial, MotivicError> {
        let mut acc = HodgePolynomial::zero();
        for (key, coeff) in &self.terms {
            let mut term = HodgePolynomial::constant(coeff.clone()).mul(&HodgePolynomial::uv_pow(key.lexp));
            for (name, mult) in key.monomial.iter() {
                let value = table
                    .get(name)
                    .ok_or_else(|| MotivicError::MissingSymbol(name.clone()))?;
                term = term.mul(&value.pow(mult));
            }
            acc = acc.add(&term);
        }
        if !acc.is_polynomial() {
            return Err(MotivicError::NonPolynomialHodge);
        }
        Ok(acc)
    }

    /// Euler characteristic specialization: `L -> 1`, symbols via `table`.
    pub fn specialize_euler(
        &self,
        table: &BTreeMap<String, BigInt>,
    ) -> Result<BigInt, MotivicError> {
        let mut acc = BigInt::zero();
        for (key, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (name, mult) in key.monomial.iter() {
                let value = table
                    .get(name)
                    .ok_or_else(|| MotivicError::MissingSymbol(name.clone()))?;
                term *= value.pow(mult);
            }
            acc += term;
        }
        Ok(acc)
    }
}

impl fmt::Display for MotivicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Canonical order: descending (lexp, monomial).
        let mut first = true;
        for (key, coeff) in self.terms.iter().rev() {
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
            if !abs.is_one() || (key.lexp == 0 && key.monomial.is_unit()) {
                factors.push(abs.to_string());
            }
            match key.lexp {
                0 => {}
                1 => factors.push("L".to_string()),
                k => factors.push(format!("L^{}", k)),
            }
            for (name, mult) in key.monomial.iter() {
                if mult == 1 {
                    factors.push(name.clone());
                } else {
                    factors.push(format!("{}^{}", name, mult));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &MotivicClass {
            type Output = MotivicClass;
            fn $method(self, rhs: &MotivicClass) -> MotivicClass {
                MotivicClass::$method(self, rhs)
            }
        }
        impl $trait for MotivicClass {
            type Output = MotivicClass;
            fn $method(self, rhs: MotivicClass) -> MotivicClass {
                MotivicClass::$method(&self, &rhs)
            }
        }
        impl $trait<&MotivicClass> for MotivicClass {
            type Output = MotivicClass;
            fn $method(self, rhs: &MotivicClass) -> MotivicClass {
                MotivicClass::$method(&self, rhs)
            }
        }
        impl $trait<MotivicClass> for &MotivicClass {
            type Output = MotivicClass;
            fn $method(self, rhs: MotivicClass) -> MotivicClass {
                MotivicClass::$method(self, &rhs)
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);

impl Neg for &MotivicClass {
    type Output = MotivicClass;
    fn neg(self) -> MotivicClass {
        MotivicClass::neg(self)
    }
}

impl Neg for MotivicClass {
    type Output = MotivicClass;
    fn neg(self) -> MotivicClass {
        MotivicClass::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l() -> MotivicClass {
        MotivicClass::lefschetz()
    }

    #[test]
    fn product_of_conjugates() {
        let a = l().sub(&MotivicClass::one());
        let b = l().add(&MotivicClass::one());
        let expect = l().mul(&l()).sub(&MotivicClass::one());
        assert_eq!(a.mul(&b), expect);
    }

    #[test]
    fn add_cancels_to_l() {
        let a = l().sub(&MotivicClass::one());
        assert_eq!(a.add(&MotivicClass::one()), l());
    }

    #[test]
    fn symbol_distributes() {
        let s = MotivicClass::symbol("s");
        let got = MotivicClass::mul(&s, &l().sub(&MotivicClass::one()));
        let expect = l().mul(&s).sub(&s);
        assert_eq!(got, expect);
    }

    #[test]
    fn valuation_examples() {
        let a = MotivicClass::l_pow(3).sub(&MotivicClass::l_pow(2));
        assert_eq!(a.l_valuation(), Some(2));
        assert_eq!(MotivicClass::zero().l_valuation(), None);
        let b = MotivicClass::l_pow(2)
            .mul(&MotivicClass::symbol("s"))
            .add(&MotivicClass::l_pow(5));
        assert_eq!(b.l_valuation(), Some(2));
    }

    #[test]
    fn divisibility_examples() {
        let a = l().sub(&MotivicClass::one()).mul(&MotivicClass::l_pow(3));
        assert!(a.l_divisible(3).unwrap());
        assert!(!a.l_divisible(4).unwrap());
        assert!(MotivicClass::zero().l_divisible(17).unwrap());
        let bad = MotivicClass::l_pow(-1);
        assert!(bad.l_divisible(0).is_err());
    }

    #[test]
    fn point_count_examples() {
        let table = BTreeMap::new();
        assert_eq!(l().specialize_point_count(5, &table).unwrap(), BigInt::from(5));
        let a = l().sub(&MotivicClass::one()).mul(&MotivicClass::l_pow(3));
        assert_eq!(a.specialize_point_count(5, &table).unwrap(), BigInt::from(500));
        let b = l().sub(&MotivicClass::one()).pow(2);
        assert_eq!(b.specialize_point_count(3, &table).unwrap(), BigInt::from(4));
    }

    #[test]
    fn point_count_rejects_fractional() {
        let table = BTreeMap::new();
        let a = MotivicClass::l_pow(-1);
        assert!(matches!(
            a.specialize_point_count(5, &table),
            Err(MotivicError::NonIntegralPointCount)
        ));
        // L^-1 * L^2 + 1 is fine: integral after clearing.
        let b = MotivicClass::l_pow(-1)
            .mul(&MotivicClass::l_pow(2))
            .add(&MotivicClass::one());
        assert_eq!(b.specialize_point_count(5, &table).unwrap(), BigInt::from(6));
    }

    #[test]
    fn euler_examples() {
        let table: BTreeMap<String, BigInt> = [("s".to_string(), BigInt::from(7))].into();
        let a = l().sub(&MotivicClass::one());
        assert_eq!(a.specialize_euler(&table).unwrap(), BigInt::zero());
        let b = l().pow(2).add(&l()).add(&MotivicClass::one());
        assert_eq!(b.specialize_euler(&table).unwrap(), BigInt::from(3));
        let c = a.mul(&MotivicClass::symbol("s"));
        assert_eq!(c.specialize_euler(&table).unwrap(), BigInt::zero());
    }

    #[test]
    fn euler_missing_symbol() {
        let table = BTreeMap::new();
        let c = MotivicClass::symbol("s");
        assert!(matches!(
            c.specialize_euler(&table),
            Err(MotivicError::MissingSymbol(_))
        ));
    }

    #[test]
    fn hodge_examples() {
        let table = BTreeMap::new();
        let a = l().pow(2).sub(&l());
        let h = a.specialize_hodge(&table).unwrap();
        assert_eq!(h.to_string(), "u^2*v^2 - u*v");
        assert_eq!(
            MotivicClass::zero().specialize_hodge(&table).unwrap(),
            HodgePolynomial::zero()
        );
        let mut table = BTreeMap::new();
        table.insert(
            "s".to_string(),
            HodgePolynomial::u().add(&HodgePolynomial::v()),
        );
        let b = MotivicClass::symbol("s").mul(&l());
        let h = b.specialize_hodge(&table).unwrap();
        let expect = HodgePolynomial::u()
            .add(&HodgePolynomial::v())
            .mul(&HodgePolynomial::uv_pow(1));
        assert_eq!(h, expect);
    }

    #[test]
    fn hodge_rejects_uncleared_denominator() {
        let table = BTreeMap::new();
        assert!(matches!(
            MotivicClass::l_pow(-1).specialize_hodge(&table),
            Err(MotivicError::NonPolynomialHodge)
        ));
    }
}
