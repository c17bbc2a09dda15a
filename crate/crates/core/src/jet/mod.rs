//! Jet spaces over prime fields: symbolic truncation, exhaustive counting
//! oracles, gradient-order stratification, and the Taylor-shift identity.

mod count;
mod poly;
mod series;
mod stratify;
mod taylor;

pub use count::{count_contact, count_contact_extended, count_jets};
pub use poly::{parse_poly, IntegerPolynomial, MultiPoly};
pub use series::{eval_poly_on_series, series_order, CompiledPoly, PolySeries, SeriesScratch};
pub use stratify::{
    fibration_check, stratify_jets, FibrationVerdict, RefinedCount, StratificationReport,
    StratumCount,
};
pub use taylor::{taylor_shift_check, taylor_shift_check_mod_q, TaylorShiftCheck};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JetError {
    #[error("evaluation budget exceeded: need {required} points, budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
    #[error("polynomial parse error at byte {pos}: {message}")]
    PolyParse { pos: usize, message: String },
    #[error("polynomial is constant; its jet schemes are trivial")]
    ConstantPolynomial,
    #[error("operation needs ambient dimension >= 2")]
    DimensionTooSmall,
}

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Limits for the exhaustive counting loops.
#[derive(Debug, Clone)]
pub struct CountConfig {
    /// Maximum number of point evaluations an operation may spend, summed
    /// over all of its enumeration passes.
    pub budget: u64,
    /// Worker threads; 0 lets the thread pool decide, 1 forces serial.
    pub jobs: usize,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig {
            budget: DEFAULT_BUDGET,
            jobs: 0,
        }
    }
}

/// The jet equations of `f` to order `n`: substitute the generic jet
/// `x_i = a_{i,0} + a_{i,1} t + ... + a_{i,n} t^n` and collect the
/// coefficients of `t^0..t^n` as polynomials in the `a_{i,j}`.
#[derive(Debug, Clone)]
pub struct JetSystem {
    pub d: usize,
    pub n: usize,
    /// Names `a{i}_{j}`, flat index `i*(n+1)+j`.
    pub var_names: Vec<String>,
    pub equations: Vec<MultiPoly>,
}

pub fn jet_truncate(f: &IntegerPolynomial, n: usize) -> JetSystem {
    let d = f.dimension();
    let nvars = d * (n + 1);
    let var_names: Vec<String> = (0..d)
        .flat_map(|i| (0..=n).map(move |j| format!("a{}_{}", i, j)))
        .collect();
    let jets: Vec<PolySeries> = (0..d)
        .map(|i| {
            let mut s = PolySeries::zero(nvars, n + 1);
            for j in 0..=n {
                s.coeffs[j] = MultiPoly::var(nvars, i * (n + 1) + j);
            }
            s
        })
        .collect();
    let series = eval_poly_on_series(&f.poly, &jets);
    JetSystem {
        d,
        n,
        var_names,
        equations: series.coeffs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_equations_of_xy() {
        let f = IntegerPolynomial::parse("x*y").unwrap();
        let sys = jet_truncate(&f, 1);
        assert_eq!(sys.equations.len(), 2);
        assert_eq!(sys.equations[0].render(&sys.var_names), "a0_0*a1_0");
        assert_eq!(
            sys.equations[1].render(&sys.var_names),
            "a0_0*a1_1 + a0_1*a1_0"
        );
    }

    #[test]
    fn jet_equations_of_x2() {
        let f = IntegerPolynomial::parse("x^2").unwrap();
        let sys = jet_truncate(&f, 2);
        assert_eq!(sys.equations[0].render(&sys.var_names), "a0_0^2");
        assert_eq!(sys.equations[1].render(&sys.var_names), "2*a0_0*a0_1");
        assert_eq!(
            sys.equations[2].render(&sys.var_names),
            "2*a0_0*a0_2 + a0_1^2"
        );
    }
}
