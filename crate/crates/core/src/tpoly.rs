//! Polynomials in `t` with motivic-class coefficients, represented as
//! coefficient vectors indexed by the `t`-degree.

use crate::motivic::MotivicClass;

pub fn zero(len: usize) -> Vec<MotivicClass> {
    vec![MotivicClass::zero(); len]
}

pub fn add(a: &[MotivicClass], b: &[MotivicClass]) -> Vec<MotivicClass> {
    let len = a.len().max(b.len());
    let mut out = zero(len);
    for (i, c) in a.iter().enumerate() {
        out[i] = out[i].clone() + c.clone();
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = out[i].clone() + c.clone();
    }
    trim(&mut out);
    out
}

pub fn sub(a: &[MotivicClass], b: &[MotivicClass]) -> Vec<MotivicClass> {
    let len = a.len().max(b.len());
    let mut out = zero(len);
    for (i, c) in a.iter().enumerate() {
        out[i] = out[i].clone() + c.clone();
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = out[i].clone() - c.clone();
    }
    trim(&mut out);
    out
}

pub fn mul(a: &[MotivicClass], b: &[MotivicClass]) -> Vec<MotivicClass> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = zero(a.len() + b.len() - 1);
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].clone() + ca.clone() * cb.clone();
        }
    }
    trim(&mut out);
    out
}

/// `1 - L^a t^n` as a coefficient vector of length `n + 1`.
pub fn one_minus_l_t(a: u64, n: u64) -> Vec<MotivicClass> {
    let mut out = zero(n as usize + 1);
    out[0] = MotivicClass::one();
    out[n as usize] = out[n as usize].clone() - MotivicClass::l_pow(a as i64);
    out
}

pub fn trim(v: &mut Vec<MotivicClass>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

pub fn is_zero(v: &[MotivicClass]) -> bool {
    v.iter().all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_trim() {
        // (1 - Lt)(1 + Lt) = 1 - L^2 t^2
        let a = one_minus_l_t(1, 1);
        let mut b = zero(2);
        b[0] = MotivicClass::one();
        b[1] = MotivicClass::l_pow(1);
        let p = mul(&a, &b);
        assert_eq!(p.len(), 3);
        assert!(p[1].is_zero());
        assert_eq!(p[2], MotivicClass::zero() - MotivicClass::l_pow(2));
        let d = sub(&p, &p);
        assert!(d.is_empty());
    }
}
