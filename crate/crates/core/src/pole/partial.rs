//! Exact partial fractions of a rational zeta function with respect to its
//! largest-exponent-ratio denominator factors, and the smallest-pole report
//! built on top of it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::motivic::MotivicClass;
use crate::resolution::{Factor, RationalZeta};
use crate::tpoly;

use super::bipoly::IntBiPoly;
use super::{bezout_pair, factor_divides, PoleError};

/// `w * Z = sum_j principal[j-1] / F^j + residual_num / prod(residual_den)`
/// with `F = 1 - L^A t^N` the combined largest-ratio factor of order `m`
/// and every `principal[j]` of `t`-degree `< N`.
#[derive(Debug, Clone)]
pub struct PartialFractionForm {
    pub scale: MotivicClass,
    pub pole_factor: Factor,
    pub order: usize,
    pub principal: Vec<Vec<MotivicClass>>,
    pub residual_numerator: Vec<MotivicClass>,
    pub residual_denominator: Vec<Factor>,
    /// The pole candidate `-nu/N` of `F`, as `(nu, N)`.
    pub min_nu_ratio: (i64, u64),
    /// Numerator after cancelling factors that divide it exactly.
    pub lifted_numerator: Vec<MotivicClass>,
}

/// Division with remainder by `1 - L^A t^N` over the localized ring,
/// without clearing denominators.
fn laurent_divrem(d: &[MotivicClass], f: &Factor) -> (Vec<MotivicClass>, Vec<MotivicClass>) {
    let n = f.tdeg as usize;
    let mut cur = d.to_vec();
    let mut quot = tpoly::zero(cur.len().saturating_sub(n));
    for i in (n..cur.len()).rev() {
        if cur[i].is_zero() {
            continue;
        }
        let qc = cur[i].mul_l_pow(-(f.lexp as i64)).neg();
        cur[i] = MotivicClass::zero();
        cur[i - n] = cur[i - n].clone() - qc.clone();
        quot[i - n] = qc;
    }
    cur.truncate(n.max(1).min(cur.len()));
    tpoly::trim(&mut cur);
    tpoly::trim(&mut quot);
    (quot, cur)
}

/// Remove denominator factors that divide the numerator exactly. Returns
/// the reduced numerator, the surviving factors, and the cancelled ones.
fn cancel_factors(
    numerator: &[MotivicClass],
    factors: &[Factor],
) -> (Vec<MotivicClass>, Vec<Factor>, Vec<Factor>) {
    let mut num = numerator.to_vec();
    let mut remaining = factors.to_vec();
    let mut cancelled = Vec::new();
    loop {
        let mut progressed = false;
        for i in 0..remaining.len() {
            if let Some(q) = factor_divides(&num, &remaining[i]) {
                num = q;
                cancelled.push(remaining.remove(i));
                progressed = true;
                break;
            }
        }
        if !progressed {
            break;
        }
    }
    (num, remaining, cancelled)
}

fn ratio_cmp(a: &Factor, b: &Factor) -> std::cmp::Ordering {
    // compare A1/N1 with A2/N2
    (a.lexp as u128 * b.tdeg as u128).cmp(&(b.lexp as u128 * a.tdeg as u128))
}

pub fn partial_fractions(z: &RationalZeta, d: usize) -> Result<PartialFractionForm, PoleError> {
    let (num, remaining, _) = cancel_factors(&z.numerator, &z.denominator);
    if remaining.is_empty() {
        return Err(PoleError::NoPoles);
    }

    let top = remaining
        .iter()
        .copied()
        .max_by(|a, b| ratio_cmp(a, b))
        .unwrap();
    let (group, rest): (Vec<Factor>, Vec<Factor>) = remaining
        .iter()
        .copied()
        .partition(|f| ratio_cmp(f, &top) == std::cmp::Ordering::Equal);

    let n_big = group
        .iter()
        .fold(1u64, |acc, f| acc.lcm(&f.tdeg));
    let a_big = top.lexp * (n_big / top.tdeg);
    let m = group.len();
    let f_big = Factor {
        lexp: a_big,
        tdeg: n_big,
    };
    let f_tpoly = tpoly::one_minus_l_t(a_big, n_big);
    let f_bip = IntBiPoly::one_minus(a_big, n_big);

    // Lift every group factor to F with a geometric cofactor.
    let mut lifted = num.clone();
    for f in &group {
        let reps = n_big / f.tdeg;
        let mut geom = tpoly::zero(((reps - 1) * f.tdeg) as usize + 1);
        for s in 0..reps {
            let pos = (s * f.tdeg) as usize;
            geom[pos] = MotivicClass::l_pow((s * f.lexp) as i64);
        }
        lifted = tpoly::mul(&lifted, &geom);
    }

    // Bezout cofactors for each distinct low-ratio factor.
    let mut distinct: Vec<(Factor, u64)> = Vec::new();
    for f in &rest {
        match distinct.iter_mut().find(|(g, _)| g == f) {
            Some((_, e)) => *e += 1,
            None => distinct.push((*f, 1)),
        }
    }

    let mut w_bip = IntBiPoly::one();
    let mut b2 = IntBiPoly::one();
    let mut qprod = IntBiPoly::one();
    for (qf, e) in &distinct {
        let bz = bezout_pair(&f_big, qf)?;
        let q_bip = IntBiPoly::one_minus(qf.lexp, qf.tdeg);
        let big_m = m as u64 + e - 1;
        let gf = bz.g.mul(&f_bip);
        // (gF + hQ)^M splits at j = m: high part carries F^m, low part Q^e.
        let mut beta = IntBiPoly::zero();
        for j in 0..m as u64 {
            let c = binomial_big(big_m, j);
            let term = gf
                .pow(j)
                .mul(&bz.h.pow(big_m - j))
                .mul(&q_bip.pow(big_m - j - e))
                .mul(&IntBiPoly::monomial(0, 0, c));
            beta = beta.add(&term);
        }
        w_bip = w_bip.mul(&IntBiPoly::one_minus(bz.k, 0).pow(big_m));
        b2 = b2.mul(&beta);
        qprod = qprod.mul(&q_bip.pow(*e));
    }
    let a_cof = w_bip
        .sub(&qprod.mul(&b2))
        .div_exact(&f_bip.pow(m as u64))
        .ok_or_else(|| PoleError::Internal("cofactor not divisible by F^m".to_string()))?;

    // F-adic expansion of D * B2: remainders give the principal blocks.
    let mut cur = tpoly::mul(&lifted, &b2.to_tpoly());
    let mut rems: Vec<Vec<MotivicClass>> = Vec::with_capacity(m);
    for _ in 0..m {
        let (q, r) = laurent_divrem(&cur, &f_big);
        rems.push(r);
        cur = q;
    }
    let leftover = cur;
    // mu_j = c_{m-j}
    let mut principal: Vec<Vec<MotivicClass>> = rems.into_iter().rev().collect();

    let qprod_tpoly = qprod.to_tpoly();
    let mut residual = tpoly::add(
        &tpoly::mul(&lifted, &a_cof.to_tpoly()),
        &tpoly::mul(&leftover, &qprod_tpoly),
    );

    let min_val = principal
        .iter()
        .flatten()
        .chain(residual.iter())
        .filter_map(|c| c.l_valuation())
        .min()
        .unwrap_or(0);
    let shift = (-min_val).max(0);
    if shift > 0 {
        for block in principal.iter_mut() {
            for c in block.iter_mut() {
                *c = c.mul_l_pow(shift);
            }
        }
        for c in residual.iter_mut() {
            *c = c.mul_l_pow(shift);
        }
    }
    let scale = w_bip.to_class().mul_l_pow(shift);

    // Exact recombination check: w D = sum_j mu_j F^{m-j} Qprod + E F^m.
    let lhs = tpoly::mul(&[scale.clone()], &lifted);
    let mut rhs = tpoly::mul(&residual, &power(&f_tpoly, m));
    for (j, mu) in principal.iter().enumerate() {
        // j index 0 -> mu_1 -> F^{m-1}
        let t = tpoly::mul(&tpoly::mul(mu, &power(&f_tpoly, m - 1 - j)), &qprod_tpoly);
        rhs = tpoly::add(&rhs, &t);
    }
    if !tpoly::is_zero(&tpoly::sub(&lhs, &rhs)) {
        return Err(PoleError::Internal(
            "partial fraction recombination mismatch".to_string(),
        ));
    }

    let nu = d as i64 * n_big as i64 - a_big as i64;
    Ok(PartialFractionForm {
        scale,
        pole_factor: f_big,
        order: m,
        principal,
        residual_numerator: residual,
        residual_denominator: rest,
        min_nu_ratio: (nu, n_big),
        lifted_numerator: lifted,
    })
}

fn power(base: &[MotivicClass], e: usize) -> Vec<MotivicClass> {
    let mut acc = vec![MotivicClass::one()];
    for _ in 0..e {
        acc = tpoly::mul(&acc, base);
    }
    acc
}

fn binomial_big(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Which denominator factors survive cancellation against the numerator,
/// their candidate pole ratios `nu/N`, and whether every survivor stays
/// within the bound `nu/N <= d/2`.
#[derive(Debug, Clone)]
pub struct SmallestPoleReport {
    pub surviving: Vec<(Factor, (i64, u64))>,
    pub cancelled: Vec<Factor>,
    pub max_ratio: Option<(i64, u64)>,
    pub bound: (u64, u64),
    pub within_bound: bool,
}

pub fn smallest_pole_report(z: &RationalZeta, d: usize) -> SmallestPoleReport {
    let (_, remaining, cancelled) = cancel_factors(&z.numerator, &z.denominator);
    let surviving: Vec<(Factor, (i64, u64))> = remaining
        .iter()
        .map(|f| {
            let nu = d as i64 * f.tdeg as i64 - f.lexp as i64;
            (*f, (nu, f.tdeg))
        })
        .collect();
    let max_ratio = surviving
        .iter()
        .map(|&(_, r)| r)
        .max_by(|a, b| (a.0 as i128 * b.1 as i128).cmp(&(b.0 as i128 * a.1 as i128)));
    let within_bound = surviving
        .iter()
        .all(|&(_, (nu, n))| 2 * nu as i128 <= d as i128 * n as i128);
    SmallestPoleReport {
        surviving,
        cancelled,
        max_ratio,
        bound: (d as u64, 2),
        within_bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::resolution::denef_loeser;

    fn expand_form(pf: &PartialFractionForm, rest: &[Factor], nmax: usize) -> Vec<MotivicClass> {
        let mut acc = tpoly::zero(nmax + 1);
        for (j, mu) in pf.principal.iter().enumerate() {
            let rz = RationalZeta {
                numerator: mu.clone(),
                denominator: vec![pf.pole_factor; j + 1],
            };
            acc = tpoly::add(&acc, &rz.expand(nmax));
        }
        let rz = RationalZeta {
            numerator: pf.residual_numerator.clone(),
            denominator: rest.to_vec(),
        };
        tpoly::add(&acc, &rz.expand(nmax))
    }

    fn check_builtin(name: &str, m_expected: usize) {
        let b = corpus::builtin(name).unwrap();
        let res = b.resolution().unwrap().unwrap();
        let z = denef_loeser(&res).unwrap();
        let pf = partial_fractions(&z, res.dimension).unwrap();
        assert_eq!(pf.order, m_expected, "order for {}", name);
        for mu in &pf.principal {
            assert!(mu.len() <= pf.pole_factor.tdeg as usize);
        }
        // w * Z must match the recombined expansion.
        let nmax = 10;
        let zexp = z.expand(nmax);
        let scaled: Vec<MotivicClass> = zexp
            .iter()
            .map(|c| c.mul(&pf.scale))
            .collect();
        let mut got = expand_form(&pf, &pf.residual_denominator, nmax);
        got.resize(nmax + 1, MotivicClass::zero());
        assert_eq!(scaled, got, "expansion mismatch for {}", name);
    }

    #[test]
    fn double_pole_normal_crossing() {
        check_builtin("xy", 2);
    }

    #[test]
    fn simple_top_pole_cases() {
        check_builtin("x", 1);
        check_builtin("x2", 1);
        check_builtin("x2y", 1);
        check_builtin("x2y3", 1);
    }

    #[test]
    fn mixed_ratio_selects_largest() {
        let b = corpus::builtin("x2y3").unwrap();
        let res = b.resolution().unwrap().unwrap();
        let z = denef_loeser(&res).unwrap();
        let pf = partial_fractions(&z, 2).unwrap();
        // factors (3,2) and (5,3): ratios 3/2 < 5/3, so F = 1 - L^5 t^3.
        assert_eq!(pf.pole_factor, Factor { lexp: 5, tdeg: 3 });
        assert_eq!(pf.min_nu_ratio, (1, 3));
        assert_eq!(pf.residual_denominator, vec![Factor { lexp: 3, tdeg: 2 }]);
    }

    #[test]
    fn fully_cancelling_function_has_no_poles() {
        let z = RationalZeta {
            numerator: tpoly::one_minus_l_t(1, 1),
            denominator: vec![Factor { lexp: 1, tdeg: 1 }],
        };
        assert!(matches!(partial_fractions(&z, 2), Err(PoleError::NoPoles)));
    }

    #[test]
    fn pole_bound_on_builtins() {
        for name in ["x", "x2", "xy", "x2y", "x2y3"] {
            let b = corpus::builtin(name).unwrap();
            let res = b.resolution().unwrap().unwrap();
            let z = denef_loeser(&res).unwrap();
            let rep = smallest_pole_report(&z, res.dimension);
            assert!(rep.within_bound, "bound violated for {}", name);
            assert!(!rep.surviving.is_empty(), "no surviving poles for {}", name);
        }
    }

    #[test]
    fn report_ratios() {
        let b = corpus::builtin("x2").unwrap();
        let res = b.resolution().unwrap().unwrap();
        let z = denef_loeser(&res).unwrap();
        let rep = smallest_pole_report(&z, 2);
        assert_eq!(rep.max_ratio, Some((1, 2)));
    }
}
