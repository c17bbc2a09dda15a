//! Exhaustive jet counting over prime fields.
//!
//! The oracle deliberately stays dumb: enumerate every point of
//! `F_q^{d(len)}`, evaluate `f` on the truncated series, classify. Workers
//! partition the odometer space and combine results by addition, so counts
//! are independent of the parallelism degree.

use rayon::prelude::*;

use super::poly::IntegerPolynomial;
use super::series::{series_order, CompiledPoly, SeriesScratch};
use super::{CountConfig, JetError};

/// `q^vars` as a budget-checked evaluation count.
pub(crate) fn space_size(q: u64, vars: usize, budget: u64) -> Result<u64, JetError> {
    let mut acc: u128 = 1;
    for _ in 0..vars {
        acc = acc.checked_mul(q as u128).unwrap_or(u128::MAX);
    }
    if acc > budget as u128 {
        return Err(JetError::BudgetExceeded {
            required: acc.min(u64::MAX as u128) as u64,
            budget,
        });
    }
    Ok(acc as u64)
}

/// Fold over all points of `F_q^{nvars}` (indices `0..total`).
/// `step` must be insensitive to visiting order up to the commutative,
/// associative `merge`.
pub(crate) fn par_fold<S, I, F, M>(total: u64, jobs: usize, init: I, step: F, merge: M) -> S
where
    S: Send,
    I: Fn() -> S + Sync,
    F: Fn(&mut S, u64) + Sync,
    M: Fn(S, S) -> S + Sync,
{
    let run_serial = |a: u64, b: u64| {
        let mut s = init();
        for i in a..b {
            step(&mut s, i);
        }
        s
    };
    if jobs == 1 || total < 4096 {
        return run_serial(0, total);
    }
    let nchunks = 256u64.min(total.max(1));
    let chunk = total.div_ceil(nchunks);
    let ranges: Vec<(u64, u64)> = (0..nchunks)
        .map(|i| (i * chunk, ((i + 1) * chunk).min(total)))
        .filter(|(a, b)| a < b)
        .collect();
    let work = || {
        ranges
            .par_iter()
            .map(|&(a, b)| run_serial(a, b))
            .reduce_with(&merge)
            .unwrap_or_else(&init)
    };
    if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(work)
    } else {
        work()
    }
}

/// Decode point index `idx` into jet coefficient vectors, variable-major:
/// `jets[i][j]` is the `t^j` coefficient of the i-th coordinate.
pub(crate) fn decode_point(mut idx: u64, q: u64, jets: &mut [Vec<u64>]) {
    for jet in jets.iter_mut() {
        for c in jet.iter_mut() {
            *c = idx % q;
            idx /= q;
        }
    }
}

struct CountState {
    count: u64,
    jets: Vec<Vec<u64>>,
    out: Vec<u64>,
    scratch: SeriesScratch,
}

fn count_where(
    f: &IntegerPolynomial,
    jet_len: usize,
    eval_len: usize,
    q: u64,
    cfg: &CountConfig,
    accept: impl Fn(&[u64]) -> bool + Sync,
) -> Result<u64, JetError> {
    let d = f.dimension();
    let total = space_size(q, d * jet_len, cfg.budget)?;
    let cp = CompiledPoly::new(&f.poly, q);
    let state = par_fold(
        total,
        cfg.jobs,
        || CountState {
            count: 0,
            jets: vec![vec![0u64; jet_len]; d],
            out: vec![0u64; eval_len],
            scratch: SeriesScratch::new(q, eval_len, d, &[&cp]),
        },
        |s, idx| {
            decode_point(idx, q, &mut s.jets);
            s.scratch.load_jets(&s.jets);
            let mut out = std::mem::take(&mut s.out);
            s.scratch.eval(&cp, &mut out);
            if accept(&out) {
                s.count += 1;
            }
            s.out = out;
        },
        |mut a, b| {
            a.count += b.count;
            a
        },
    );
    Ok(state.count)
}

/// `|L_n(V)(F_q)|`: jets of length `n+1` with `f = 0 mod t^{n+1}`.
pub fn count_jets(
    f: &IntegerPolynomial,
    n: usize,
    q: u64,
    cfg: &CountConfig,
) -> Result<u64, JetError> {
    count_where(f, n + 1, n + 1, q, cfg, |out| out.iter().all(|&c| c == 0))
}

/// `|X_n(F_q)|`: jets of length `n+1` with contact order exactly `n`.
pub fn count_contact(
    f: &IntegerPolynomial,
    n: usize,
    q: u64,
    cfg: &CountConfig,
) -> Result<u64, JetError> {
    count_where(f, n + 1, n + 1, q, cfg, move |out| {
        series_order(out, n + 1) == n
    })
}

/// `|X_{n,m}(F_q)|`: jets of length `m+1` with contact order exactly `n`.
pub fn count_contact_extended(
    f: &IntegerPolynomial,
    n: usize,
    m: usize,
    q: u64,
    cfg: &CountConfig,
) -> Result<u64, JetError> {
    assert!(m >= n, "extended jet length must be at least the contact order");
    count_where(f, m + 1, n + 1, q, cfg, move |out| {
        series_order(out, n + 1) == n
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> CountConfig {
        CountConfig {
            budget: 1_000_000_000,
            jobs: 1,
        }
    }

    #[test]
    fn jets_examples() {
        let xy = IntegerPolynomial::parse("x*y").unwrap();
        assert_eq!(count_jets(&xy, 1, 3, &cfg()).unwrap(), 21);
        assert_eq!(count_jets(&xy, 0, 3, &cfg()).unwrap(), 5);
        let x = IntegerPolynomial::parse_in_dimension("x", 2).unwrap();
        assert_eq!(count_jets(&x, 2, 5, &cfg()).unwrap(), 125);
    }

    #[test]
    fn contact_examples() {
        let x = IntegerPolynomial::parse_in_dimension("x", 2).unwrap();
        assert_eq!(count_contact(&x, 1, 3, &cfg()).unwrap(), 18);
        let xy = IntegerPolynomial::parse("x*y").unwrap();
        assert_eq!(count_contact(&xy, 2, 3, &cfg()).unwrap(), 108);
        let x2 = IntegerPolynomial::parse_in_dimension("x^2", 2).unwrap();
        assert_eq!(count_contact(&x2, 1, 3, &cfg()).unwrap(), 0);
        assert_eq!(count_contact(&x2, 1, 5, &cfg()).unwrap(), 0);
    }

    #[test]
    fn contact_extended_examples() {
        let x = IntegerPolynomial::parse_in_dimension("x", 2).unwrap();
        assert_eq!(count_contact_extended(&x, 1, 2, 3, &cfg()).unwrap(), 162);
        // m = n degenerates to plain contact.
        let xy = IntegerPolynomial::parse("x*y").unwrap();
        assert_eq!(
            count_contact_extended(&xy, 2, 2, 3, &cfg()).unwrap(),
            count_contact(&xy, 2, 3, &cfg()).unwrap()
        );
        // one extra jet level leaves the truncated value untouched: q^d copies
        assert_eq!(
            count_contact_extended(&xy, 1, 2, 3, &cfg()).unwrap(),
            count_contact(&xy, 1, 3, &cfg()).unwrap() * 9
        );
    }

    #[test]
    fn recursion_identity() {
        // |X_n| = q^d |L_{n-1}| - |L_n| for n >= 1.
        let f = IntegerPolynomial::parse("x^2 + y^3").unwrap();
        for n in 1..=3usize {
            let lhs = count_contact(&f, n, 3, &cfg()).unwrap();
            let rhs = 9 * count_jets(&f, n - 1, 3, &cfg()).unwrap() - count_jets(&f, n, 3, &cfg()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn budget_guard() {
        let xy = IntegerPolynomial::parse("x*y").unwrap();
        let tight = CountConfig {
            budget: 100,
            jobs: 1,
        };
        match count_jets(&xy, 3, 3, &tight) {
            Err(JetError::BudgetExceeded { required, budget }) => {
                assert_eq!(required, 6561);
                assert_eq!(budget, 100);
            }
            other => panic!("expected budget error, got {:?}", other),
        }
    }

    #[test]
    fn parallel_matches_serial() {
        let f = IntegerPolynomial::parse("x^2*y").unwrap();
        let serial = count_jets(&f, 2, 3, &cfg()).unwrap();
        let par = count_jets(
            &f,
            2,
            3,
            &CountConfig {
                budget: 1_000_000_000,
                jobs: 4,
            },
        )
        .unwrap();
        assert_eq!(serial, par);
    }
}
