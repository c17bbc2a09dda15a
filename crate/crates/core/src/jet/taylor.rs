//! The Taylor-shift identity: substituting `x = b + t^l z` into `f` agrees,
//! mod `t^{n+1}`, with the divided-power Taylor expansion around `b`.

use num_bigint::BigInt;

use super::count::{decode_point, par_fold, space_size};
use super::poly::{IntegerPolynomial, MultiPoly};
use super::series::{eval_poly_on_series, PolySeries};
use super::{CountConfig, JetError};

#[derive(Debug, Clone)]
pub struct TaylorShiftCheck {
    pub n: usize,
    pub l: usize,
    pub equal: bool,
    /// First `t`-order where the two sides differ, if any.
    pub mismatch_order: Option<usize>,
}

/// Compare `f(b + t^l z)` with `sum_alpha D^alpha f(b) t^{|alpha| l} z^alpha`
/// symbolically, as exact polynomial identities in the `b_i, z_i`.
pub fn taylor_shift_check(f: &IntegerPolynomial, n: usize, l: usize) -> TaylorShiftCheck {
    assert!(l >= 1, "shift order must be positive");
    let d = f.dimension();
    let nvars = 2 * d; // b_0..b_{d-1}, z_0..z_{d-1}

    let jets: Vec<PolySeries> = (0..d)
        .map(|i| {
            let mut s = PolySeries::zero(nvars, n + 1);
            s.coeffs[0] = MultiPoly::var(nvars, i);
            if l <= n {
                s.coeffs[l] = MultiPoly::var(nvars, d + i);
            }
            s
        })
        .collect();
    let lhs = eval_poly_on_series(&f.poly, &jets);

    let mut rhs = PolySeries::zero(nvars, n + 1);
    let bound = n / l;
    let mut alpha = vec![0u32; d];
    expand_around(f, &mut alpha, 0, bound as u32, d, nvars, l, &mut rhs);

    let mut mismatch = None;
    for k in 0..=n {
        if lhs.coeffs[k] != rhs.coeffs[k] {
            mismatch = Some(k);
            break;
        }
    }
    TaylorShiftCheck {
        n,
        l,
        equal: mismatch.is_none(),
        mismatch_order: mismatch,
    }
}

fn expand_around(
    f: &IntegerPolynomial,
    alpha: &mut Vec<u32>,
    i: usize,
    remaining: u32,
    d: usize,
    nvars: usize,
    l: usize,
    rhs: &mut PolySeries,
) {
    if i == d {
        let df = f.poly.divided_partial(alpha);
        if df.is_zero() {
            return;
        }
        let weight: u32 = alpha.iter().sum();
        let pos = weight as usize * l;
        // Embed D^alpha f into the (b, z) space and attach z^alpha.
        let mut term = MultiPoly::zero(nvars);
        for (exps, coeff) in df.terms() {
            let mut e = vec![0u32; nvars];
            e[..d].copy_from_slice(exps);
            for j in 0..d {
                e[d + j] = alpha[j];
            }
            let mut m = MultiPoly::zero(nvars);
            m = m.add(&monomial(nvars, e, coeff.clone()));
            term = term.add(&m);
        }
        rhs.coeffs[pos] = rhs.coeffs[pos].add(&term);
        return;
    }
    for a in 0..=remaining {
        alpha[i] = a;
        expand_around(f, alpha, i + 1, remaining - a, d, nvars, l, rhs);
    }
    alpha[i] = 0;
}

fn monomial(nvars: usize, exps: Vec<u32>, coeff: BigInt) -> MultiPoly {
    let mut m = MultiPoly::zero(nvars);
    let mut unit = MultiPoly::one(nvars);
    for (i, &e) in exps.iter().enumerate() {
        for _ in 0..e {
            unit = unit.mul(&MultiPoly::var(nvars, i));
        }
    }
    m = m.add(&unit.mul(&MultiPoly::constant(nvars, coeff)));
    m
}

/// Exhaustively verify the shift identity over `F_q`: every pair of points
/// `(b, z)` in `F_q^{2d}` must give matching series mod `t^{n+1}`.
pub fn taylor_shift_check_mod_q(
    f: &IntegerPolynomial,
    n: usize,
    l: usize,
    q: u64,
    cfg: &CountConfig,
) -> Result<bool, JetError> {
    assert!(l >= 1, "shift order must be positive");
    let d = f.dimension();
    let total = space_size(q, 2 * d, cfg.budget)?;

    // Divided partials up to the truncation bound, with their t-positions.
    let bound = (n / l) as u32;
    let mut parts: Vec<(Vec<u32>, MultiPoly, usize)> = Vec::new();
    let mut alpha = vec![0u32; d];
    collect_partials(f, &mut alpha, 0, bound, d, l, &mut parts);

    let ok = par_fold(
        total,
        cfg.jobs,
        || (true, vec![vec![0u64; 1]; 2 * d]),
        |s, idx| {
            if !s.0 {
                return;
            }
            decode_point(idx, q, &mut s.1);
            let b: Vec<u64> = (0..d).map(|i| s.1[i][0]).collect();
            let z: Vec<u64> = (0..d).map(|i| s.1[d + i][0]).collect();

            // LHS: f at x_i = b_i + z_i t^l, coefficients mod t^{n+1}.
            let mut lhs = vec![0u64; n + 1];
            eval_shifted(&f.poly, &b, &z, l, q, &mut lhs);

            let mut rhs = vec![0u64; n + 1];
            for (alpha, df, pos) in &parts {
                let mut v = eval_scalar(df, &b, q);
                for (j, &a) in alpha.iter().enumerate() {
                    for _ in 0..a {
                        v = v * z[j] % q;
                    }
                }
                rhs[*pos] = (rhs[*pos] + v) % q;
            }
            if lhs != rhs {
                s.0 = false;
            }
        },
        |a, b| (a.0 && b.0, a.1),
    );
    Ok(ok.0)
}

fn collect_partials(
    f: &IntegerPolynomial,
    alpha: &mut Vec<u32>,
    i: usize,
    remaining: u32,
    d: usize,
    l: usize,
    out: &mut Vec<(Vec<u32>, MultiPoly, usize)>,
) {
    if i == d {
        let df = f.poly.divided_partial(alpha);
        if !df.is_zero() {
            let weight: u32 = alpha.iter().sum();
            out.push((alpha.clone(), df, weight as usize * l));
        }
        return;
    }
    for a in 0..=remaining {
        alpha[i] = a;
        collect_partials(f, alpha, i + 1, remaining - a, d, l, out);
    }
    alpha[i] = 0;
}

fn eval_scalar(p: &MultiPoly, point: &[u64], q: u64) -> u64 {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let mut acc = 0u64;
    for (exps, coeff) in p.terms() {
        let mut v = coeff.mod_floor(&BigInt::from(q)).to_u64().unwrap();
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                v = v * point[i] % q;
            }
        }
        acc = (acc + v) % q;
    }
    acc
}

/// Evaluate `f(b + z t^l)` mod `t^{n+1}` directly, term by term.
fn eval_shifted(p: &MultiPoly, b: &[u64], z: &[u64], l: usize, q: u64, out: &mut [u64]) {
    let len = out.len();
    for o in out.iter_mut() {
        *o = 0;
    }
    let mut acc = vec![0u64; len];
    let mut tmp = vec![0u64; len];
    for (exps, coeff) in p.terms() {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        for a in acc.iter_mut() {
            *a = 0;
        }
        acc[0] = coeff.mod_floor(&BigInt::from(q)).to_u64().unwrap();
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                // multiply acc by (b_i + z_i t^l)
                for t in tmp.iter_mut() {
                    *t = 0;
                }
                for (k, &c) in acc.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    tmp[k] = (tmp[k] + c * b[i]) % q;
                    if k + l < len {
                        tmp[k + l] = (tmp[k + l] + c * z[i]) % q;
                    }
                }
                acc.copy_from_slice(&tmp);
            }
        }
        for k in 0..len {
            out[k] = (out[k] + acc[k]) % q;
        }
    }
}
