//! Resolution data and the rational zeta functions it determines: the
//! change-of-variables formula over the exceptional strata, its effective
//! variant at a chosen level, series expansion, and the jet-side series.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::motivic::{parse_class_with_symbols, MotivicClass, MotivicError};
use crate::tpoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZetaError {
    #[error("resolution data does not match the schema: {0}")]
    Schema(String),
    #[error("resolution data failed validation:\n{}", .0.join("\n"))]
    Validation(Vec<String>),
    #[error("component '{id}' gives denominator exponent {exponent} < 0")]
    NegativeExponent { id: String, exponent: i64 },
    #[error("level must be >= 1")]
    BadLevel,
    #[error("level {c} is too small for component '{id}': need (nu-1)/N <= c")]
    LevelTooSmall { c: u64, id: String },
    #[error(transparent)]
    Motivic(#[from] MotivicError),
}

/// One exceptional component with its multiplicities: `N` for the pullback
/// of `f`, `nu - 1` for the relative canonical divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub id: String,
    pub n_mult: u64,
    pub nu: u64,
}

/// Validated resolution input: components and the classes of the locally
/// closed strata `E_I^o`, keyed by sorted component index sets.
#[derive(Debug, Clone)]
pub struct ResolutionData {
    pub dimension: usize,
    pub symbols: BTreeSet<String>,
    pub components: Vec<Component>,
    pub strata: BTreeMap<Vec<usize>, MotivicClass>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawResolution {
    dimension: usize,
    #[serde(default)]
    symbols: Vec<String>,
    components: Vec<RawComponent>,
    strata: Vec<RawStratum>,
    #[serde(default)]
    ambient: Option<String>,
    #[serde(default)]
    divisor: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComponent {
    id: String,
    #[serde(rename = "N")]
    n_mult: u64,
    nu: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStratum {
    subset: Vec<String>,
    class: String,
}

impl ResolutionData {
    pub fn from_json(text: &str) -> Result<ResolutionData, ZetaError> {
        let raw: RawResolution =
            serde_json::from_str(text).map_err(|e| ZetaError::Schema(e.to_string()))?;
        let mut diagnostics = Vec::new();

        if raw.dimension == 0 {
            diagnostics.push("dimension must be >= 1".to_string());
        }
        let symbols: BTreeSet<String> = raw.symbols.iter().cloned().collect();
        if symbols.len() != raw.symbols.len() {
            diagnostics.push("duplicate declared symbol".to_string());
        }

        let mut ids = BTreeMap::new();
        let mut components = Vec::new();
        for (i, c) in raw.components.iter().enumerate() {
            if c.n_mult == 0 {
                diagnostics.push(format!("component '{}': N must be >= 1", c.id));
            }
            if c.nu == 0 {
                diagnostics.push(format!("component '{}': nu must be >= 1", c.id));
            }
            if ids.insert(c.id.clone(), i).is_some() {
                diagnostics.push(format!("duplicate component id '{}'", c.id));
            }
            components.push(Component {
                id: c.id.clone(),
                n_mult: c.n_mult,
                nu: c.nu,
            });
        }

        let mut strata: BTreeMap<Vec<usize>, MotivicClass> = BTreeMap::new();
        for (si, s) in raw.strata.iter().enumerate() {
            let mut subset = Vec::new();
            let mut ok = true;
            for id in &s.subset {
                match ids.get(id) {
                    Some(&i) => subset.push(i),
                    None => {
                        diagnostics.push(format!("stratum {}: unknown component '{}'", si, id));
                        ok = false;
                    }
                }
            }
            subset.sort_unstable();
            let before = subset.len();
            subset.dedup();
            if subset.len() != before {
                diagnostics.push(format!("stratum {}: repeated component in subset", si));
                ok = false;
            }
            let class = match parse_class_with_symbols(&s.class, &symbols) {
                Ok(c) => c,
                Err(e) => {
                    diagnostics.push(format!("stratum {}: {}", si, e));
                    ok = false;
                    MotivicClass::zero()
                }
            };
            if ok && strata.insert(subset.clone(), class).is_some() {
                diagnostics.push(format!("stratum {}: duplicate subset", si));
            }
        }

        let data = ResolutionData {
            dimension: raw.dimension,
            symbols: symbols.clone(),
            components,
            strata,
        };

        if let Some(text) = &raw.ambient {
            match parse_class_with_symbols(text, &symbols) {
                Ok(c) if diagnostics.is_empty() && c != data.ambient_class() => {
                    diagnostics.push(format!(
                        "ambient class {} does not equal the sum {} of all strata",
                        c,
                        data.ambient_class()
                    ));
                }
                Err(e) => diagnostics.push(format!("ambient: {}", e)),
                _ => {}
            }
        }
        if let Some(text) = &raw.divisor {
            match parse_class_with_symbols(text, &symbols) {
                Ok(c) if diagnostics.is_empty() && c != data.divisor_class() => {
                    diagnostics.push(format!(
                        "divisor class {} does not equal the sum {} of the nonempty strata",
                        c,
                        data.divisor_class()
                    ));
                }
                Err(e) => diagnostics.push(format!("divisor: {}", e)),
                _ => {}
            }
        }

        if !diagnostics.is_empty() {
            return Err(ZetaError::Validation(diagnostics));
        }
        Ok(data)
    }

    /// `[X]`: the whole ambient space is the disjoint union of all strata.
    pub fn ambient_class(&self) -> MotivicClass {
        let mut acc = MotivicClass::zero();
        for c in self.strata.values() {
            acc = acc + c.clone();
        }
        acc
    }

    /// `[V]`: the zero locus is the union of the nonempty strata.
    pub fn divisor_class(&self) -> MotivicClass {
        let mut acc = MotivicClass::zero();
        for (subset, c) in &self.strata {
            if !subset.is_empty() {
                acc = acc + c.clone();
            }
        }
        acc
    }

    /// Indices of components that actually appear in a nonempty stratum with
    /// nonzero class; only these contribute denominator factors.
    fn active_components(&self) -> Vec<usize> {
        let mut active = BTreeSet::new();
        for (subset, class) in &self.strata {
            if !class.is_zero() {
                active.extend(subset.iter().copied());
            }
        }
        active.into_iter().collect()
    }
}

/// One denominator factor `1 - L^lexp t^tdeg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Factor {
    pub lexp: u64,
    pub tdeg: u64,
}

/// A rational function `num(t) / prod_i (1 - L^{A_i} t^{N_i})` with
/// motivic-class coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalZeta {
    pub numerator: Vec<MotivicClass>,
    pub denominator: Vec<Factor>,
}

impl RationalZeta {
    /// Series coefficients of `t^0..t^nmax`.
    pub fn expand(&self, nmax: usize) -> Vec<MotivicClass> {
        let mut coeffs: Vec<MotivicClass> = self
            .numerator
            .iter()
            .take(nmax + 1)
            .cloned()
            .chain(std::iter::repeat(MotivicClass::zero()))
            .take(nmax + 1)
            .collect();
        for f in &self.denominator {
            // multiply by sum_s L^{A s} t^{N s}
            let mut out = tpoly::zero(nmax + 1);
            let mut s = 0u64;
            while (s * f.tdeg) as usize <= nmax {
                let shift = (s * f.tdeg) as usize;
                let lp = (f.lexp * s) as i64;
                for (i, c) in coeffs.iter().enumerate().take(nmax + 1 - shift) {
                    if !c.is_zero() {
                        out[i + shift] = out[i + shift].clone() + c.mul_l_pow(lp);
                    }
                }
                s += 1;
            }
            coeffs = out;
        }
        coeffs
    }

    /// Clear the denominators: `num(t) * prod (1 - L^A t^N)` is dropped and
    /// the full denominator product is returned as a plain polynomial.
    pub fn denominator_poly(&self) -> Vec<MotivicClass> {
        let mut acc = vec![MotivicClass::one()];
        for f in &self.denominator {
            acc = tpoly::mul(&acc, &tpoly::one_minus_l_t(f.lexp, f.tdeg));
        }
        acc
    }

    /// Substitute `t -> L^e t`. Fails if a denominator exponent goes
    /// negative.
    pub fn scale_t(&self, e: i64) -> Result<RationalZeta, ZetaError> {
        let numerator = self
            .numerator
            .iter()
            .enumerate()
            .map(|(i, c)| c.mul_l_pow(e * i as i64))
            .collect();
        let mut denominator = Vec::with_capacity(self.denominator.len());
        for f in &self.denominator {
            let lexp = f.lexp as i64 + e * f.tdeg as i64;
            if lexp < 0 {
                return Err(ZetaError::NegativeExponent {
                    id: format!("t^{}", f.tdeg),
                    exponent: lexp,
                });
            }
            denominator.push(Factor {
                lexp: lexp as u64,
                tdeg: f.tdeg,
            });
        }
        Ok(RationalZeta {
            numerator,
            denominator,
        })
    }

    /// Equality as rational functions: cross-multiplied polynomial identity.
    pub fn equivalent(&self, other: &RationalZeta) -> bool {
        let lhs = tpoly::mul(&self.numerator, &other.denominator_poly());
        let rhs = tpoly::mul(&other.numerator, &self.denominator_poly());
        tpoly::is_zero(&tpoly::sub(&lhs, &rhs))
    }
}

impl fmt::Display for RationalZeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let mut first = true;
        for (i, c) in self.numerator.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})*t", c)?,
                _ => write!(f, "({})*t^{}", c, i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")?;
        for fac in &self.denominator {
            write!(f, " / (1 - ")?;
            match fac.lexp {
                0 => {}
                1 => write!(f, "L*")?,
                a => write!(f, "L^{}*", a)?,
            }
            match fac.tdeg {
                1 => write!(f, "t)")?,
                n => write!(f, "t^{})", n)?,
            }
        }
        Ok(())
    }
}

/// The Hodge-Deligne specialization of a rational zeta function: `L` maps
/// to `uv`, so each denominator factor becomes `1 - (uv)^A t^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeZeta {
    pub numerator: Vec<crate::motivic::HodgePolynomial>,
    pub denominator: Vec<Factor>,
}

pub fn hodge_zeta(
    z: &RationalZeta,
    table: &BTreeMap<String, crate::motivic::HodgePolynomial>,
) -> Result<HodgeZeta, MotivicError> {
    let numerator = z
        .numerator
        .iter()
        .map(|c| c.specialize_hodge(table))
        .collect::<Result<_, _>>()?;
    Ok(HodgeZeta {
        numerator,
        denominator: z.denominator.clone(),
    })
}

impl HodgeZeta {
    pub fn expand(&self, nmax: usize) -> Vec<crate::motivic::HodgePolynomial> {
        use crate::motivic::HodgePolynomial;
        let mut coeffs: Vec<HodgePolynomial> = (0..=nmax)
            .map(|i| {
                self.numerator
                    .get(i)
                    .cloned()
                    .unwrap_or_else(HodgePolynomial::zero)
            })
            .collect();
        for f in &self.denominator {
            let mut out: Vec<HodgePolynomial> =
                (0..=nmax).map(|_| HodgePolynomial::zero()).collect();
            let mut s = 0u64;
            while (s * f.tdeg) as usize <= nmax {
                let shift = (s * f.tdeg) as usize;
                let lp = HodgePolynomial::uv_pow((f.lexp * s) as i64);
                for (i, c) in coeffs.iter().enumerate().take(nmax + 1 - shift) {
                    out[i + shift] = out[i + shift].add(&c.mul(&lp));
                }
                s += 1;
            }
            coeffs = out;
        }
        coeffs
    }
}

/// Build the zeta function from resolution data by putting every stratum
/// contribution over the common denominator of the active components.
/// Exponents are `d N_i - nu_i`.
pub fn denef_loeser(res: &ResolutionData) -> Result<RationalZeta, ZetaError> {
    build_zeta(res, |d, c| {
        d as i64 * c.n_mult as i64 - c.nu as i64
    })
}

/// The effective variant at level `c >= 1`: exponents `(2cd + c) N_i - nu_i`,
/// which stay nonnegative because `(nu_i - 1)/N_i <= c` is required.
pub fn k0_series(res: &ResolutionData, c: u64) -> Result<RationalZeta, ZetaError> {
    if c == 0 {
        return Err(ZetaError::BadLevel);
    }
    for i in res.active_components() {
        let comp = &res.components[i];
        if comp.nu - 1 > c * comp.n_mult {
            return Err(ZetaError::LevelTooSmall {
                c,
                id: comp.id.clone(),
            });
        }
    }
    build_zeta(res, move |dd, comp| {
        ((2 * c * dd as u64 + c) * comp.n_mult) as i64 - comp.nu as i64
    })
}

fn build_zeta(
    res: &ResolutionData,
    exponent: impl Fn(usize, &Component) -> i64,
) -> Result<RationalZeta, ZetaError> {
    let d = res.dimension;
    let active = res.active_components();
    let mut exps = BTreeMap::new();
    for &i in &active {
        let comp = &res.components[i];
        let e = exponent(d, comp);
        if e < 0 {
            return Err(ZetaError::NegativeExponent {
                id: comp.id.clone(),
                exponent: e,
            });
        }
        exps.insert(i, e as u64);
    }

    let lm1 = MotivicClass::lefschetz() - MotivicClass::one();
    let mut numerator: Vec<MotivicClass> = Vec::new();
    for (subset, class) in &res.strata {
        if subset.is_empty() || class.is_zero() {
            continue;
        }
        // class * prod_{i in I} (L-1) L^{A_i} t^{N_i}
        //       * prod_{j active \ I} (1 - L^{A_j} t^{N_j})
        let mut term = vec![class.clone()];
        for &i in subset {
            let comp = &res.components[i];
            let a = exps[&i];
            let mut factor = tpoly::zero(comp.n_mult as usize + 1);
            factor[comp.n_mult as usize] = lm1.mul_l_pow(a as i64);
            term = tpoly::mul(&term, &factor);
        }
        for &j in &active {
            if subset.contains(&j) {
                continue;
            }
            let comp = &res.components[j];
            term = tpoly::mul(&term, &tpoly::one_minus_l_t(exps[&j], comp.n_mult));
        }
        numerator = tpoly::add(&numerator, &term);
    }

    let denominator = active
        .iter()
        .map(|&i| Factor {
            lexp: exps[&i],
            tdeg: res.components[i].n_mult,
        })
        .collect();
    Ok(RationalZeta {
        numerator,
        denominator,
    })
}

/// The coefficient `[X_n]` of the zeta series, computed directly as a sum
/// over contact multiplicity tuples instead of by series division.
pub fn contact_coefficient(res: &ResolutionData, n: usize) -> Result<MotivicClass, ZetaError> {
    let d = res.dimension;
    let active = res.active_components();
    let lm1 = MotivicClass::lefschetz() - MotivicClass::one();
    let mut exps = BTreeMap::new();
    for &i in &active {
        let comp = &res.components[i];
        let e = d as i64 * comp.n_mult as i64 - comp.nu as i64;
        exps.insert(i, e);
    }

    let mut acc = MotivicClass::zero();
    // DFS over tuples a: supp(a) = I, sum a_i N_i = n, a_i >= 1 on I.
    fn rec(
        res: &ResolutionData,
        active: &[usize],
        exps: &BTreeMap<usize, i64>,
        lm1: &MotivicClass,
        pos: usize,
        remaining: usize,
        subset: &mut Vec<usize>,
        weight: &MotivicClass,
        acc: &mut MotivicClass,
    ) {
        if pos == active.len() {
            if remaining == 0 {
                if let Some(class) = res.strata.get(subset) {
                    *acc = acc.clone() + class.clone() * weight.clone();
                }
            }
            return;
        }
        let i = active[pos];
        // a_i = 0
        rec(res, active, exps, lm1, pos + 1, remaining, subset, weight, acc);
        let n_i = res.components[i].n_mult as usize;
        let mut a = 1usize;
        subset.push(i);
        while a * n_i <= remaining {
            let w = weight.clone() * lm1.mul_l_pow(exps[&i] * a as i64);
            rec(
                res,
                active,
                exps,
                lm1,
                pos + 1,
                remaining - a * n_i,
                subset,
                &w,
                acc,
            );
            a += 1;
        }
        subset.pop();
    }

    if n == 0 {
        return Ok(res
            .strata
            .get(&Vec::new())
            .cloned()
            .unwrap_or_else(MotivicClass::zero));
    }
    let mut subset = Vec::new();
    rec(
        res,
        &active,
        &exps,
        &lm1,
        0,
        n,
        &mut subset,
        &MotivicClass::one(),
        &mut acc,
    );
    Ok(acc)
}

/// Convert the contact-order series to the jet-scheme series via
/// `[L_n] = L^d [L_{n-1}] - [X_n]`: as rational functions,
/// `J(t) = ([X] - Z(t)) / (1 - L^d t)`.
pub fn z_to_j(res: &ResolutionData) -> Result<RationalZeta, ZetaError> {
    let z = denef_loeser(res)?;
    // The contact series from the strata starts at t^1, so the constant
    // term [X_0] = [X] - [V] is accounted for here: J (1 - L^d t) = [V] - Z.
    let divisor = res.divisor_class();
    let numerator = tpoly::sub(&tpoly::mul(&[divisor], &z.denominator_poly()), &z.numerator);
    let mut denominator = z.denominator.clone();
    denominator.push(Factor {
        lexp: res.dimension as u64,
        tdeg: 1,
    });
    Ok(RationalZeta {
        numerator,
        denominator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res_x() -> ResolutionData {
        ResolutionData::from_json(
            r#"{
              "dimension": 2,
              "components": [{"id": "E1", "N": 1, "nu": 1}],
              "strata": [
                {"subset": [], "class": "L^2 - L"},
                {"subset": ["E1"], "class": "L"}
              ]
            }"#,
        )
        .unwrap()
    }

    fn res_xy() -> ResolutionData {
        ResolutionData::from_json(
            r#"{
              "dimension": 2,
              "components": [
                {"id": "E1", "N": 1, "nu": 1},
                {"id": "E2", "N": 1, "nu": 1}
              ],
              "strata": [
                {"subset": [], "class": "(L-1)^2"},
                {"subset": ["E1"], "class": "L - 1"},
                {"subset": ["E2"], "class": "L - 1"},
                {"subset": ["E1", "E2"], "class": "1"}
              ]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn zeta_of_smooth_divisor() {
        let z = denef_loeser(&res_x()).unwrap();
        // Z(t) = L(L-1)t / (1 - Lt)
        assert_eq!(z.denominator, vec![Factor { lexp: 1, tdeg: 1 }]);
        let coeffs = z.expand(3);
        assert!(coeffs[0].is_zero());
        let lm1 = MotivicClass::lefschetz() - MotivicClass::one();
        for n in 1..=3i64 {
            // contact order n pins the first n coefficients of one
            // coordinate: [X_n] = (L-1) L^{n+1} on the plane.
            assert_eq!(coeffs[n as usize], lm1.mul_l_pow(n + 1), "n = {}", n);
        }
    }

    #[test]
    fn zeta_matches_contact_coefficients() {
        for res in [res_x(), res_xy()] {
            let z = denef_loeser(&res).unwrap();
            let coeffs = z.expand(8);
            for n in 0..=8usize {
                let direct = contact_coefficient(&res, n).unwrap();
                // Z starts at t^1; [X_0] = [X] - [V] is the empty stratum.
                if n == 0 {
                    assert_eq!(
                        direct,
                        res.ambient_class() - res.divisor_class()
                    );
                } else {
                    assert_eq!(coeffs[n], direct, "n = {}", n);
                }
            }
        }
    }

    #[test]
    fn jet_series_of_smooth_divisor() {
        let j = z_to_j(&res_x()).unwrap();
        let coeffs = j.expand(3);
        // [L_n] = L^{n+1} for f = x on the plane.
        for n in 0..=3i64 {
            assert_eq!(coeffs[n as usize], MotivicClass::l_pow(n + 1), "n = {}", n);
        }
    }

    #[test]
    fn jet_series_of_normal_crossing() {
        let j = z_to_j(&res_xy()).unwrap();
        let coeffs = j.expand(1);
        // [L_0] = [V] = 2L - 1, [L_1] = 3L^2 - 2L.
        assert_eq!(
            coeffs[0],
            MotivicClass::lefschetz().mul_int(2) - MotivicClass::one()
        );
        assert_eq!(
            coeffs[1],
            MotivicClass::l_pow(2).mul_int(3) - MotivicClass::lefschetz().mul_int(2)
        );
    }

    #[test]
    fn level_series_recovers_zeta() {
        let res = res_x();
        let d = res.dimension as i64;
        for c in [1i64, 2] {
            let zc = k0_series(&res, c as u64).unwrap();
            let shift = -(2 * c * d + c - d);
            let back = zc.scale_t(shift).unwrap();
            assert!(back.equivalent(&denef_loeser(&res).unwrap()));
        }
    }

    #[test]
    fn level_zero_rejected() {
        assert!(matches!(k0_series(&res_x(), 0), Err(ZetaError::BadLevel)));
    }

    #[test]
    fn schema_and_validation_errors() {
        assert!(matches!(
            ResolutionData::from_json("{"),
            Err(ZetaError::Schema(_))
        ));
        let err = ResolutionData::from_json(
            r#"{
              "dimension": 2,
              "components": [{"id": "E1", "N": 0, "nu": 1}],
              "strata": [{"subset": ["E1", "E9"], "class": "L +"}]
            }"#,
        )
        .unwrap_err();
        match err {
            ZetaError::Validation(msgs) => {
                assert!(msgs.iter().any(|m| m.contains("N must be >= 1")));
                assert!(msgs.iter().any(|m| m.contains("unknown component 'E9'")));
                assert!(msgs.iter().any(|m| m.contains("parse")));
            }
            other => panic!("expected validation error, got {:?}", other),
        }
    }

    #[test]
    fn ambient_divisor_cross_checks() {
        let err = ResolutionData::from_json(
            r#"{
              "dimension": 2,
              "components": [{"id": "E1", "N": 1, "nu": 1}],
              "strata": [
                {"subset": [], "class": "L^2 - L"},
                {"subset": ["E1"], "class": "L"}
              ],
              "ambient": "L^2 + 1"
            }"#,
        )
        .unwrap_err();
        assert!(matches!(err, ZetaError::Validation(_)));
    }
}
