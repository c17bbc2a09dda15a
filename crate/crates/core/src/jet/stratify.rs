//! Gradient-order stratification of jet schemes and the counting-level
//! fibration checks behind the `L^{ceil(dn/2)}` divisibility statement.

use std::collections::HashSet;

use serde::Serialize;

use super::count::{decode_point, par_fold, space_size};
use super::poly::IntegerPolynomial;
use super::series::{series_order, CompiledPoly, SeriesScratch};
use super::{CountConfig, JetError};

/// One gradient-order stratum `L_{n,k}(V)` with its claimed affine factor.
#[derive(Debug, Clone, Serialize)]
pub struct StratumCount {
    pub k: usize,
    pub count: u64,
    /// `(d-1)(n-2k)+dk` for `k < r`, `dr` for `k = r`.
    pub claimed_exponent: usize,
    pub divisible: bool,
}

/// Refined count for the first-nonvanishing-partial chain (least `p`).
#[derive(Debug, Clone, Serialize)]
pub struct RefinedCount {
    pub k: usize,
    /// 1-based coordinate index of the first partial of order exactly `k`.
    pub p: usize,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StratificationReport {
    pub n: usize,
    pub q: u64,
    pub d: usize,
    pub r: usize,
    pub total: u64,
    pub strata: Vec<StratumCount>,
    pub refined: Vec<RefinedCount>,
    /// Exponent `ceil(dn/2)` of the global divisibility statement.
    pub dn2_exponent: usize,
    pub all_divisible: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FibrationVerdict {
    pub identity: String,
    pub lhs: u64,
    pub rhs: u64,
    pub pass: bool,
}

struct ClassifyResult {
    counts_k: Vec<u64>,
    refined: Vec<u64>,
    lnkp: Vec<u64>,
    image_size: u64,
    total_in_jet_scheme: u64,
}

struct ClassifyState {
    counts_k: Vec<u64>,
    refined: Vec<u64>,
    lnkp: Vec<u64>,
    image: HashSet<Vec<u64>>,
    in_scheme: u64,
    jets: Vec<Vec<u64>>,
    f_out: Vec<u64>,
    p_out: Vec<u64>,
    orders: Vec<usize>,
    scratch: SeriesScratch,
    pscratch: Option<SeriesScratch>,
}

fn classify(
    f: &IntegerPolynomial,
    n: usize,
    q: u64,
    cfg: &CountConfig,
    collect_image: bool,
    extra_budget_used: u64,
) -> Result<ClassifyResult, JetError> {
    let d = f.dimension();
    let r = n.div_ceil(2);
    let total = space_size(q, d * (n + 1), cfg.budget.saturating_sub(extra_budget_used))?;
    let cp = CompiledPoly::new(&f.poly, q);
    let partials: Vec<CompiledPoly> = (0..d)
        .map(|i| CompiledPoly::new(&f.poly.partial(i), q))
        .collect();
    let proj_len = n - r + 1;

    let state = par_fold(
        total,
        cfg.jobs,
        || {
            let mut refs: Vec<&CompiledPoly> = vec![&cp];
            refs.extend(partials.iter());
            ClassifyState {
                counts_k: vec![0; r + 1],
                refined: vec![0; r * d],
                lnkp: vec![0; r * d],
                image: HashSet::new(),
                in_scheme: 0,
                jets: vec![vec![0u64; n + 1]; d],
                f_out: vec![0u64; n + 1],
                p_out: vec![0u64; r.max(1)],
                orders: vec![0; d],
                scratch: SeriesScratch::new(q, n + 1, d, &refs),
                pscratch: if r > 0 {
                    let prefs: Vec<&CompiledPoly> = partials.iter().collect();
                    Some(SeriesScratch::new(q, r, d, &prefs))
                } else {
                    None
                },
            }
        },
        |s, idx| {
            decode_point(idx, q, &mut s.jets);
            s.scratch.load_jets(&s.jets);
            let mut f_out = std::mem::take(&mut s.f_out);
            s.scratch.eval(&cp, &mut f_out);
            let in_scheme = f_out.iter().all(|&c| c == 0);
            s.f_out = f_out;
            if !in_scheme {
                return;
            }
            s.in_scheme += 1;
            let k = if r == 0 {
                0
            } else {
                let ps = s.pscratch.as_mut().unwrap();
                ps.load_jets(&s.jets);
                let mut p_out = std::mem::take(&mut s.p_out);
                for (j, pcp) in partials.iter().enumerate() {
                    ps.eval(pcp, &mut p_out);
                    s.orders[j] = series_order(&p_out, r);
                }
                s.p_out = p_out;
                *s.orders.iter().min().unwrap()
            };
            s.counts_k[k] += 1;
            if k < r {
                let least_p = s.orders.iter().position(|&o| o == k).unwrap();
                s.refined[k * d + least_p] += 1;
                for (p, &o) in s.orders.iter().enumerate() {
                    if o == k {
                        s.lnkp[k * d + p] += 1;
                    }
                }
            } else if collect_image {
                let mut key = Vec::with_capacity(d * proj_len);
                for jet in &s.jets {
                    key.extend_from_slice(&jet[..proj_len]);
                }
                s.image.insert(key);
            }
        },
        |mut a, b| {
            for (x, y) in a.counts_k.iter_mut().zip(&b.counts_k) {
                *x += y;
            }
            for (x, y) in a.refined.iter_mut().zip(&b.refined) {
                *x += y;
            }
            for (x, y) in a.lnkp.iter_mut().zip(&b.lnkp) {
                *x += y;
            }
            a.in_scheme += b.in_scheme;
            a.image.extend(b.image);
            a
        },
    );

    Ok(ClassifyResult {
        counts_k: state.counts_k,
        refined: state.refined,
        lnkp: state.lnkp,
        image_size: state.image.len() as u64,
        total_in_jet_scheme: state.in_scheme,
    })
}

/// Partition `L_n(V)(F_q)` by the minimal `t`-order of the gradient and
/// report per-stratum counts with their divisibility verdicts.
pub fn stratify_jets(
    f: &IntegerPolynomial,
    n: usize,
    q: u64,
    cfg: &CountConfig,
) -> Result<StratificationReport, JetError> {
    let d = f.dimension();
    let r = n.div_ceil(2);
    let res = classify(f, n, q, cfg, false, 0)?;
    let dn2 = (d * n).div_ceil(2);
    let mut strata = Vec::new();
    let mut all_divisible = true;
    for (k, &count) in res.counts_k.iter().enumerate() {
        let claimed = if k < r { (d - 1) * (n - 2 * k) + d * k } else { d * r };
        let divisible = count % pow_u64(q, claimed.min(63)) == 0;
        all_divisible &= divisible;
        strata.push(StratumCount {
            k,
            count,
            claimed_exponent: claimed,
            divisible,
        });
    }
    let mut refined = Vec::new();
    for k in 0..r {
        for p in 0..d {
            let count = res.refined[k * d + p];
            if count > 0 {
                refined.push(RefinedCount { k, p: p + 1, count });
            }
        }
    }
    Ok(StratificationReport {
        n,
        q,
        d,
        r,
        total: res.total_in_jet_scheme,
        strata,
        refined,
        dn2_exponent: dn2,
        all_divisible,
    })
}

fn pow_u64(q: u64, e: usize) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(q);
    }
    acc
}

/// Count `O_{l,k,p}(V)(F_q)` for all valid `k <= kmax(l)` and `p` in one
/// pass over `F_q^{d(l+1)}`. Returns `counts[k][p]`.
fn o_counts(
    f: &IntegerPolynomial,
    n: usize,
    l: usize,
    q: u64,
    cfg: &CountConfig,
    budget_used: u64,
) -> Result<Vec<Vec<u64>>, JetError> {
    let d = f.dimension();
    let r = n.div_ceil(2);
    let kmax = l.min(n - l).min(r.saturating_sub(1));
    let total = space_size(q, d * (l + 1), cfg.budget.saturating_sub(budget_used))?;
    let f_len = kmax + l + 1;
    let p_len = kmax + 1;
    let cp = CompiledPoly::new(&f.poly, q);
    let partials: Vec<CompiledPoly> = (0..d)
        .map(|i| CompiledPoly::new(&f.poly.partial(i), q))
        .collect();

    struct OState {
        counts: Vec<Vec<u64>>,
        jets: Vec<Vec<u64>>,
        f_out: Vec<u64>,
        p_out: Vec<u64>,
        orders: Vec<usize>,
        fscratch: SeriesScratch,
        pscratch: SeriesScratch,
    }

    let state = par_fold(
        total,
        cfg.jobs,
        || OState {
            counts: vec![vec![0u64; d]; kmax + 1],
            jets: vec![vec![0u64; l + 1]; d],
            f_out: vec![0u64; f_len],
            p_out: vec![0u64; p_len],
            orders: vec![0; d],
            fscratch: SeriesScratch::new(q, f_len, d, &[&cp]),
            pscratch: {
                let prefs: Vec<&CompiledPoly> = partials.iter().collect();
                SeriesScratch::new(q, p_len, d, &prefs)
            },
        },
        |s, idx| {
            decode_point(idx, q, &mut s.jets);
            s.pscratch.load_jets(&s.jets);
            let mut p_out = std::mem::take(&mut s.p_out);
            for (j, pcp) in partials.iter().enumerate() {
                s.pscratch.eval(pcp, &mut p_out);
                s.orders[j] = series_order(&p_out, p_len);
            }
            s.p_out = p_out;
            let k = *s.orders.iter().min().unwrap();
            if k > kmax {
                return;
            }
            s.fscratch.load_jets(&s.jets);
            let mut f_out = std::mem::take(&mut s.f_out);
            s.fscratch.eval(&cp, &mut f_out);
            let ford = series_order(&f_out, f_len);
            s.f_out = f_out;
            if ford < k + l + 1 {
                return;
            }
            for (p, &o) in s.orders.iter().enumerate() {
                if o == k {
                    s.counts[k][p] += 1;
                }
            }
        },
        |mut a, b| {
            for (ra, rb) in a.counts.iter_mut().zip(&b.counts) {
                for (x, y) in ra.iter_mut().zip(rb) {
                    *x += y;
                }
            }
            a
        },
    );
    Ok(state.counts)
}

/// Verify, at the counting level, the three fibration identities behind the
/// stratification: the top stratum is `image x A^{dr}`, each `O`-level adds
/// an `A^{d-1}`, and `L_{n,k,p} = O_{n-k,k,p} x A^{dk}`.
pub fn fibration_check(
    f: &IntegerPolynomial,
    n: usize,
    q: u64,
    cfg: &CountConfig,
) -> Result<Vec<FibrationVerdict>, JetError> {
    let d = f.dimension();
    if d < 2 {
        return Err(JetError::DimensionTooSmall);
    }
    let r = n.div_ceil(2);

    // Budget: the classify pass plus one pass per jet length l.
    let full = space_size(q, d * (n + 1), cfg.budget)?;
    let mut budget_needed: u128 = full as u128;
    for l in 0..=n.saturating_sub(if r == 0 { n + 1 } else { 0 }) {
        if r > 0 && l <= n {
            budget_needed += space_size(q, d * (l + 1), u64::MAX).unwrap_or(u64::MAX) as u128;
        }
    }
    if budget_needed > cfg.budget as u128 {
        return Err(JetError::BudgetExceeded {
            required: budget_needed.min(u64::MAX as u128) as u64,
            budget: cfg.budget,
        });
    }

    let res = classify(f, n, q, cfg, true, 0)?;
    let mut verdicts = Vec::new();

    // (a) |L_{n,r}| = q^{dr} * |pi^n_{n-r}(L_{n,r})|
    let lhs = res.counts_k[r];
    let rhs = pow_u64(q, d * r).saturating_mul(res.image_size);
    verdicts.push(FibrationVerdict {
        identity: format!(
            "|L_{{{n},{r}}}| = q^{}*|pi^{n}_{}(L_{{{n},{r}}})|",
            d * r,
            n - r
        ),
        lhs,
        rhs,
        pass: lhs == rhs,
    });

    if r > 0 {
        let all_o: Vec<Vec<Vec<u64>>> = (0..=n)
            .map(|l| o_counts(f, n, l, q, cfg, 0))
            .collect::<Result<_, _>>()?;

        // (b) |O_{l+1,k,p}| = q^{d-1} * |O_{l,k,p}| for k <= l < n-k.
        for k in 0..r {
            for p in 0..d {
                for l in k..(n - k) {
                    let lhs = all_o[l + 1].get(k).map_or(0, |row| row[p]);
                    let rhs = pow_u64(q, d - 1)
                        .saturating_mul(all_o[l].get(k).map_or(0, |row| row[p]));
                    verdicts.push(FibrationVerdict {
                        identity: format!(
                            "|O_{{{},{k},{}}}| = q^{}*|O_{{{l},{k},{}}}|",
                            l + 1,
                            p + 1,
                            d - 1,
                            p + 1
                        ),
                        lhs,
                        rhs,
                        pass: lhs == rhs,
                    });
                }
            }
        }

        // (c) |L_{n,k,p}| = q^{dk} * |O_{n-k,k,p}|.
        for k in 0..r {
            for p in 0..d {
                let lhs = res.lnkp[k * d + p];
                let rhs =
                    pow_u64(q, d * k).saturating_mul(all_o[n - k].get(k).map_or(0, |row| row[p]));
                verdicts.push(FibrationVerdict {
                    identity: format!(
                        "|L_{{{n},{k},{}}}| = q^{}*|O_{{{},{k},{}}}|",
                        p + 1,
                        d * k,
                        n - k,
                        p + 1
                    ),
                    lhs,
                    rhs,
                    pass: lhs == rhs,
                });
            }
        }
    }

    Ok(verdicts)
}
