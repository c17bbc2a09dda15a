//! Exact-arithmetic workbench for motivic zeta functions of hypersurfaces:
//! an effective Grothendieck-ring model, rational zeta functions from
//! resolution data, exhaustive jet-counting oracles over prime fields, and
//! pole analysis via exact partial fractions.

pub mod corpus;
pub mod jet;
pub mod motivic;
pub mod pole;
pub mod resolution;
pub mod tpoly;

pub use corpus::{builtin, BuiltinExample, BUILTINS};
pub use jet::{
    count_contact, count_contact_extended, count_jets, fibration_check, jet_truncate,
    stratify_jets, taylor_shift_check, taylor_shift_check_mod_q, CountConfig, IntegerPolynomial,
    JetError, JetSystem, StratificationReport, DEFAULT_BUDGET,
};
pub use motivic::{
    parse_class, parse_class_with_symbols, HodgePolynomial, MotivicClass, MotivicError,
};
pub use resolution::{
    contact_coefficient, denef_loeser, hodge_zeta, k0_series, z_to_j, Component, Factor,
    HodgeZeta, RationalZeta, ResolutionData, ZetaError,
};
