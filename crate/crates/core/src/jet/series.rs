//! Truncated power series in `t`: a fast mod-q evaluator for the counting
//! loops, and a symbolic variant with polynomial coefficients for building
//! jet equations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::poly::MultiPoly;

/// `out = a * b` truncated at `len` coefficients, mod `q`.
/// `q < 2^31` so products fit in `u64`.
fn series_mul(a: &[u64], b: &[u64], out: &mut [u64], q: u64, len: usize) {
    for o in out[..len].iter_mut() {
        *o = 0;
    }
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            let o = &mut out[i + j];
            *o = (*o + ai * bj) % q;
        }
    }
}

fn reduce_coeff(c: &BigInt, q: u64) -> u64 {
    let m = c.mod_floor(&BigInt::from(q));
    m.to_u64().unwrap()
}

/// A polynomial compiled for repeated evaluation on mod-q jets.
#[derive(Clone)]
pub struct CompiledPoly {
    terms: Vec<(Vec<u32>, u64)>,
    max_exp: Vec<u32>,
    nvars: usize,
}

impl CompiledPoly {
    pub fn new(poly: &MultiPoly, q: u64) -> Self {
        let terms: Vec<(Vec<u32>, u64)> = poly
            .terms()
            .map(|(e, c)| (e.clone(), reduce_coeff(c, q)))
            .filter(|(_, c)| *c != 0)
            .collect();
        let nvars = poly.nvars;
        let mut max_exp = vec![0u32; nvars];
        for (e, _) in &terms {
            for i in 0..nvars {
                max_exp[i] = max_exp[i].max(e[i]);
            }
        }
        CompiledPoly {
            terms,
            max_exp,
            nvars,
        }
    }
}

/// Per-thread scratch for evaluating compiled polynomials on jets.
pub struct SeriesScratch {
    q: u64,
    len: usize,
    /// pows[i][e] = series of variable i to the e-th power.
    pows: Vec<Vec<Vec<u64>>>,
    tmp: Vec<u64>,
    acc: Vec<u64>,
}

impl SeriesScratch {
    pub fn new(q: u64, len: usize, nvars: usize, max_exps: &[&CompiledPoly]) -> Self {
        let mut max_exp = vec![0u32; nvars];
        for cp in max_exps {
            for i in 0..nvars {
                max_exp[i] = max_exp[i].max(cp.max_exp[i]);
            }
        }
        let pows = (0..nvars)
            .map(|i| vec![vec![0u64; len]; max_exp[i] as usize + 1])
            .collect();
        SeriesScratch {
            q,
            len,
            pows,
            tmp: vec![0; len],
            acc: vec![0; len],
        }
    }

    /// Fill the power tables for the current jet point.
    pub fn load_jets(&mut self, jets: &[Vec<u64>]) {
        for (i, jet) in jets.iter().enumerate() {
            let table = &mut self.pows[i];
            if table.is_empty() {
                continue;
            }
            for c in table[0].iter_mut() {
                *c = 0;
            }
            table[0][0] = 1 % self.q;
            for e in 1..table.len() {
                let (lo, hi) = table.split_at_mut(e);
                let prev = if e == 1 {
                    &jet[..]
                } else {
                    // multiply prev power by the jet itself below
                    &lo[e - 1][..]
                };
                if e == 1 {
                    hi[0][..self.len.min(jet.len())]
                        .copy_from_slice(&jet[..self.len.min(jet.len())]);
                    for c in hi[0][self.len.min(jet.len())..].iter_mut() {
                        *c = 0;
                    }
                } else {
                    let mut out = std::mem::take(&mut hi[0]);
                    series_mul(prev, &lo[1], &mut out, self.q, self.len);
                    hi[0] = out;
                }
            }
        }
    }

    /// Evaluate `cp` on the loaded jets, writing `len` coefficients to `out`.
    pub fn eval(&mut self, cp: &CompiledPoly, out: &mut [u64]) {
        let len = self.len;
        for o in out[..len].iter_mut() {
            *o = 0;
        }
        for (exps, coeff) in &cp.terms {
            // acc starts as the constant coefficient series.
            for c in self.acc[..len].iter_mut() {
                *c = 0;
            }
            self.acc[0] = *coeff;
            for i in 0..cp.nvars {
                let e = exps[i] as usize;
                if e == 0 {
                    continue;
                }
                series_mul(&self.acc, &self.pows[i][e], &mut self.tmp, self.q, len);
                self.acc[..len].copy_from_slice(&self.tmp[..len]);
            }
            for k in 0..len {
                out[k] = (out[k] + self.acc[k]) % self.q;
            }
        }
    }
}

/// Order of the first nonzero coefficient among the first `cap` entries;
/// `cap` if none.
pub fn series_order(s: &[u64], cap: usize) -> usize {
    for (i, &c) in s.iter().enumerate().take(cap) {
        if c != 0 {
            return i;
        }
    }
    cap
}

/// Truncated series with `MultiPoly` coefficients: used to build jet
/// equations symbolically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySeries {
    pub coeffs: Vec<MultiPoly>,
}

impl PolySeries {
    pub fn zero(nvars: usize, len: usize) -> Self {
        PolySeries {
            coeffs: vec![MultiPoly::zero(nvars); len],
        }
    }

    pub fn constant(nvars: usize, len: usize, c: MultiPoly) -> Self {
        let mut s = Self::zero(nvars, len);
        s.coeffs[0] = c;
        s
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, other: &PolySeries) -> PolySeries {
        PolySeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &PolySeries) -> PolySeries {
        let len = self.coeffs.len();
        let nvars = self.coeffs[0].nvars;
        let mut out = Self::zero(nvars, len);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].add(&a.mul(b));
            }
        }
        out
    }

    /// Shift by `t^k` (drops overflow past the truncation).
    pub fn shift(&self, k: usize) -> PolySeries {
        let len = self.coeffs.len();
        let nvars = self.coeffs[0].nvars;
        let mut out = Self::zero(nvars, len);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + k < len {
                out.coeffs[i + k] = c.clone();
            }
        }
        out
    }
}

/// Evaluate `f` (a polynomial in `d` ambient variables) on the jet series
/// `jets` (one `PolySeries` per ambient variable, coefficients in a common
/// target variable space), truncated to the series length.
pub fn eval_poly_on_series(f: &MultiPoly, jets: &[PolySeries]) -> PolySeries {
    let len = jets[0].len();
    let nvars = jets[0].coeffs[0].nvars;
    let mut acc = PolySeries::zero(nvars, len);
    for (exps, coeff) in f.terms() {
        let mut term = PolySeries::constant(nvars, len, MultiPoly::constant(nvars, coeff.clone()));
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                term = term.mul(&jets[i]);
            }
        }
        acc = acc.add(&term);
    }
    acc
}
