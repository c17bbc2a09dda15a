//! Command-line workbench: rational zeta functions from resolution data,
//! exhaustive jet counts, and pole analysis.
//!
//! Exit codes: 0 success, 2 unreadable input (I/O, JSON, expression syntax),
//! 3 semantic validation failure, 4 evaluation budget exceeded, 5 oracle
//! verification mismatch.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use motzeta_core::pole::{partial_fractions, smallest_pole_report, PoleError};
use motzeta_core::{
    count_contact, count_contact_extended, count_jets, denef_loeser,
    fibration_check, hodge_zeta, k0_series, stratify_jets, taylor_shift_check,
    taylor_shift_check_mod_q, z_to_j, CountConfig, IntegerPolynomial, JetError, RationalZeta,
    ResolutionData, ZetaError, DEFAULT_BUDGET,
};

const BUDGET_ENV: &str = "MOTZETA_BUDGET";

struct Fail {
    code: u8,
    msg: String,
}

type R<T> = Result<T, Fail>;

fn fail<T>(code: u8, msg: impl Into<String>) -> R<T> {
    Err(Fail {
        code,
        msg: msg.into(),
    })
}

fn from_zeta(e: ZetaError) -> Fail {
    let code = match &e {
        ZetaError::Schema(_) => 2,
        _ => 3,
    };
    Fail {
        code,
        msg: e.to_string(),
    }
}

fn from_jet(e: JetError) -> Fail {
    let code = match &e {
        JetError::BudgetExceeded { .. } => 4,
        JetError::PolyParse { .. } => 2,
        _ => 3,
    };
    Fail {
        code,
        msg: e.to_string(),
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(name = "motzeta", version, about = "Exact workbench for motivic zeta functions")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rational zeta functions from resolution data
    Zeta {
        #[command(subcommand)]
        cmd: ZetaCmd,
    },
    /// Exhaustive jet-space counts over prime fields
    Jets {
        #[command(subcommand)]
        cmd: JetsCmd,
    },
    /// Compare the symbolic series against the counting oracles
    Verify(VerifyArgs),
    /// Pole structure of the zeta function
    Poles(PolesArgs),
}

#[derive(Args)]
struct ResInput {
    /// Resolution data file (JSON)
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Name of a built-in example instead of a file
    #[arg(long)]
    builtin: Option<String>,
}

impl ResInput {
    fn load(&self) -> R<ResolutionData> {
        let text = match (&self.input, &self.builtin) {
            (Some(path), None) => std::fs::read_to_string(path)
                .map_err(|e| Fail {
                    code: 2,
                    msg: format!("cannot read {}: {}", path.display(), e),
                })?,
            (None, Some(name)) => {
                let b = motzeta_core::builtin(name).ok_or_else(|| Fail {
                    code: 2,
                    msg: format!("unknown built-in example '{}'", name),
                })?;
                match b.resolution_json {
                    Some(s) => s.to_string(),
                    None => {
                        return fail(
                            2,
                            format!("built-in '{}' has no stratum data; use the jet commands", name),
                        )
                    }
                }
            }
            _ => return fail(2, "exactly one of --in or --builtin is required"),
        };
        ResolutionData::from_json(&text).map_err(from_zeta)
    }
}

#[derive(Subcommand)]
enum ZetaCmd {
    /// Build Z(t) and optionally expand it or its effective variant
    Compute {
        #[command(flatten)]
        res: ResInput,
        /// Also print series coefficients up to this order
        #[arg(long)]
        expand: Option<usize>,
        /// Also print the effective variant at this level
        #[arg(long)]
        k0: Option<u64>,
    },
    /// Series coefficients of Z(t)
    Expand {
        #[command(flatten)]
        res: ResInput,
        #[arg(long)]
        nmax: usize,
        /// Expand the jet-scheme series J(t) instead
        #[arg(long, default_value_t = false)]
        jets: bool,
    },
    /// The effective series at a level c >= 1
    K0 {
        #[command(flatten)]
        res: ResInput,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Hodge-Deligne specialization of the series
    Hodge {
        #[command(flatten)]
        res: ResInput,
        #[arg(long)]
        nmax: usize,
    },
}

#[derive(Args)]
struct JetCommon {
    /// Polynomial, e.g. "x^2 + y^3"
    #[arg(long)]
    f: Option<String>,
    /// Take f and the ambient dimension from a built-in example
    #[arg(long)]
    builtin: Option<String>,
    /// Ambient dimension override (for f not using all coordinates)
    #[arg(long)]
    dim: Option<usize>,
    /// Maximum number of point evaluations
    #[arg(long)]
    budget: Option<u64>,
    /// Worker threads (0 = automatic)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

impl JetCommon {
    fn polynomial(&self) -> R<IntegerPolynomial> {
        match (&self.f, &self.builtin) {
            (Some(text), None) => match self.dim {
                Some(d) => IntegerPolynomial::parse_in_dimension(text, d).map_err(from_jet),
                None => IntegerPolynomial::parse(text).map_err(from_jet),
            },
            (None, Some(name)) => {
                let b = motzeta_core::builtin(name).ok_or_else(|| Fail {
                    code: 2,
                    msg: format!("unknown built-in example '{}'", name),
                })?;
                b.polynomial().map_err(from_jet)
            }
            _ => fail(2, "exactly one of --f or --builtin is required"),
        }
    }

    fn config(&self) -> CountConfig {
        let env_budget = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.parse::<u64>().ok());
        CountConfig {
            budget: self.budget.or(env_budget).unwrap_or(DEFAULT_BUDGET),
            jobs: self.jobs,
        }
    }
}

#[derive(Subcommand)]
enum JetsCmd {
    /// |L_n(V)(F_q)|
    Count {
        #[command(flatten)]
        common: JetCommon,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
    },
    /// |X_n(F_q)|: jets of contact order exactly n
    Contact {
        #[command(flatten)]
        common: JetCommon,
        #[arg(long)]
        n: usize,
        /// Jet length m >= n (defaults to n)
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        q: u64,
    },
    /// Partition L_n(V)(F_q) by minimal gradient order
    Stratify {
        #[command(flatten)]
        common: JetCommon,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
    },
    /// Verify the counting-level fibration identities
    Fibcheck {
        #[command(flatten)]
        common: JetCommon,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
    },
    /// Check the Taylor-shift identity (symbolically, or mod q if given)
    Taylor {
        #[command(flatten)]
        common: JetCommon,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        q: Option<u64>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    res: ResInput,
    /// Polynomial override (defaults to the built-in's)
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    nmax: usize,
    #[arg(long, default_value_t = 3)]
    q: u64,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct PolesArgs {
    #[command(flatten)]
    res: ResInput,
    /// Also print the exact partial-fraction decomposition
    #[arg(long, default_value_t = false)]
    partial: bool,
}

fn tpoly_strings(coeffs: &[motzeta_core::MotivicClass]) -> Vec<String> {
    coeffs.iter().map(|c| c.to_string()).collect()
}

fn print_output(format: Format, json_value: Value, text: String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&json_value).unwrap()),
        Format::Text => println!("{}", text),
    }
}

fn cmd_zeta(format: Format, cmd: ZetaCmd) -> R<()> {
    match cmd {
        ZetaCmd::Compute { res, expand, k0 } => {
            let res = res.load()?;
            let z = denef_loeser(&res).map_err(from_zeta)?;
            let mut text = format!("Z(t) = {}", z);
            let mut out = json!({ "zeta": z.to_string() });
            if let Some(nmax) = expand {
                let mut coeffs = z.expand(nmax);
                // Z carries only contact orders >= 1; order 0 is everything
                // off the divisor.
                coeffs[0] = res.ambient_class() - res.divisor_class();
                for (n, c) in coeffs.iter().enumerate() {
                    text.push_str(&format!("\n[X_{}] = {}", n, c));
                }
                out["coefficients"] = json!(tpoly_strings(&coeffs));
            }
            if let Some(c) = k0 {
                let zc = k0_series(&res, c).map_err(from_zeta)?;
                text.push_str(&format!("\nZ_{}(t) = {}", c, zc));
                out["k0"] = json!({ "level": c, "series": zc.to_string() });
            }
            print_output(format, out, text);
        }
        ZetaCmd::Expand { res, nmax, jets } => {
            let res = res.load()?;
            let (label, z) = if jets {
                ("L", z_to_j(&res).map_err(from_zeta)?)
            } else {
                ("X", denef_loeser(&res).map_err(from_zeta)?)
            };
            let mut coeffs = z.expand(nmax);
            if !jets {
                coeffs[0] = res.ambient_class() - res.divisor_class();
            }
            let text = coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| format!("[{}_{}] = {}", label, n, c))
                .collect::<Vec<_>>()
                .join("\n");
            print_output(
                format,
                json!({ "series": label, "coefficients": tpoly_strings(&coeffs) }),
                text,
            );
        }
        ZetaCmd::K0 { res, c, nmax } => {
            let res = res.load()?;
            let zc = k0_series(&res, c).map_err(from_zeta)?;
            let mut text = format!("Z_{}(t) = {}", c, zc);
            let mut out = json!({ "level": c, "series": zc.to_string() });
            if let Some(nmax) = nmax {
                let coeffs = zc.expand(nmax);
                for (n, cf) in coeffs.iter().enumerate() {
                    text.push_str(&format!("\nt^{}: {}", n, cf));
                }
                out["coefficients"] = json!(tpoly_strings(&coeffs));
            }
            print_output(format, out, text);
        }
        ZetaCmd::Hodge { res, nmax } => {
            let res = res.load()?;
            if !res.symbols.is_empty() {
                return fail(
                    3,
                    "resolution declares stratum symbols; the Hodge specialization needs numeric strata",
                );
            }
            let z = denef_loeser(&res).map_err(from_zeta)?;
            let table = BTreeMap::new();
            let hz = hodge_zeta(&z, &table).map_err(|e| Fail {
                code: 3,
                msg: e.to_string(),
            })?;
            let coeffs = hz.expand(nmax);
            let text = coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| format!("t^{}: {}", n, c))
                .collect::<Vec<_>>()
                .join("\n");
            let strings: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
            print_output(format, json!({ "hodge_coefficients": strings }), text);
        }
    }
    Ok(())
}

fn cmd_jets(format: Format, cmd: JetsCmd) -> R<()> {
    match cmd {
        JetsCmd::Count { common, n, q } => {
            let f = common.polynomial()?;
            let count = count_jets(&f, n, q, &common.config()).map_err(from_jet)?;
            print_output(
                format,
                json!({ "f": f.to_string(), "n": n, "q": q, "count": count }),
                format!("|L_{}({})(F_{})| = {}", n, f, q, count),
            );
        }
        JetsCmd::Contact { common, n, m, q } => {
            let f = common.polynomial()?;
            let cfg = common.config();
            let count = match m {
                Some(m) if m != n => {
                    if m < n {
                        return fail(3, "--m must be at least --n");
                    }
                    count_contact_extended(&f, n, m, q, &cfg).map_err(from_jet)?
                }
                _ => count_contact(&f, n, q, &cfg).map_err(from_jet)?,
            };
            print_output(
                format,
                json!({ "f": f.to_string(), "n": n, "m": m.unwrap_or(n), "q": q, "count": count }),
                format!("|X_{}({})(F_{})| = {}", n, f, q, count),
            );
        }
        JetsCmd::Stratify { common, n, q } => {
            let f = common.polynomial()?;
            let rep = stratify_jets(&f, n, q, &common.config()).map_err(from_jet)?;
            let mut text = format!(
                "|L_{}({})(F_{})| = {} (divisibility exponent {})",
                n, f, q, rep.total, rep.dn2_exponent
            );
            for s in &rep.strata {
                text.push_str(&format!(
                    "\nk = {}: {} jets, claimed q-exponent {}, divisible: {}",
                    s.k, s.count, s.claimed_exponent, s.divisible
                ));
            }
            for r in &rep.refined {
                text.push_str(&format!(
                    "\nk = {}, first partial {}: {} jets",
                    r.k, r.p, r.count
                ));
            }
            text.push_str(&format!("\nall divisible: {}", rep.all_divisible));
            print_output(format, serde_json::to_value(&rep).unwrap(), text);
        }
        JetsCmd::Fibcheck { common, n, q } => {
            let f = common.polynomial()?;
            let verdicts = fibration_check(&f, n, q, &common.config()).map_err(from_jet)?;
            let all = verdicts.iter().all(|v| v.pass);
            let mut text = String::new();
            for v in &verdicts {
                text.push_str(&format!(
                    "{}: {} vs {} -> {}\n",
                    v.identity,
                    v.lhs,
                    v.rhs,
                    if v.pass { "ok" } else { "MISMATCH" }
                ));
            }
            text.push_str(&format!("all identities hold: {}", all));
            print_output(
                format,
                json!({ "verdicts": serde_json::to_value(&verdicts).unwrap(), "all_pass": all }),
                text,
            );
            if !all {
                return fail(5, "fibration identity mismatch");
            }
        }
        JetsCmd::Taylor { common, n, l, q } => {
            let f = common.polynomial()?;
            if l == 0 {
                return fail(3, "--l must be >= 1");
            }
            match q {
                Some(q) => {
                    let ok = taylor_shift_check_mod_q(&f, n, l, q, &common.config())
                        .map_err(from_jet)?;
                    print_output(
                        format,
                        json!({ "mode": "mod-q", "q": q, "equal": ok }),
                        format!("shift identity mod {}: {}", q, if ok { "holds" } else { "FAILS" }),
                    );
                    if !ok {
                        return fail(5, "Taylor-shift identity failed");
                    }
                }
                None => {
                    let chk = taylor_shift_check(&f, n, l);
                    print_output(
                        format,
                        json!({ "mode": "symbolic", "equal": chk.equal, "mismatch_order": chk.mismatch_order }),
                        format!(
                            "shift identity: {}",
                            if chk.equal {
                                "holds".to_string()
                            } else {
                                format!("fails at t^{}", chk.mismatch_order.unwrap())
                            }
                        ),
                    );
                    if !chk.equal {
                        return fail(5, "Taylor-shift identity failed");
                    }
                }
            }
        }
    }
    Ok(())
}

fn cmd_verify(format: Format, args: VerifyArgs) -> R<()> {
    let res = args.res.load()?;
    if !res.symbols.is_empty() {
        return fail(3, "verification needs numeric strata (no declared symbols)");
    }
    let f = match (&args.f, &args.res.builtin) {
        (Some(text), _) => {
            IntegerPolynomial::parse_in_dimension(text, res.dimension).map_err(from_jet)?
        }
        (None, Some(name)) => motzeta_core::builtin(name)
            .unwrap()
            .polynomial()
            .map_err(from_jet)?,
        (None, None) => return fail(2, "--f is required when reading resolution data from a file"),
    };
    if f.dimension() != res.dimension {
        return fail(3, "polynomial dimension does not match the resolution data");
    }
    let cfg = CountConfig {
        budget: args
            .budget
            .or_else(|| {
                std::env::var(BUDGET_ENV)
                    .ok()
                    .and_then(|s| s.parse::<u64>().ok())
            })
            .unwrap_or(DEFAULT_BUDGET),
        jobs: args.jobs,
    };
    let table = BTreeMap::new();
    let j = z_to_j(&res).map_err(from_zeta)?;
    let jc = j.expand(args.nmax);
    let z = denef_loeser(&res).map_err(from_zeta)?;
    let zc = z.expand(args.nmax);

    let mut rows = Vec::new();
    let mut text = String::new();
    let mut ok = true;
    for n in 0..=args.nmax {
        let pred_j = jc[n]
            .specialize_point_count(args.q, &table)
            .map_err(|e| Fail { code: 3, msg: e.to_string() })?;
        let got_j = BigInt::from(count_jets(&f, n, args.q, &cfg).map_err(from_jet)?);
        let pred_x = if n == 0 {
            (res.ambient_class() - res.divisor_class())
                .specialize_point_count(args.q, &table)
                .map_err(|e| Fail { code: 3, msg: e.to_string() })?
        } else {
            zc[n].specialize_point_count(args.q, &table)
                .map_err(|e| Fail { code: 3, msg: e.to_string() })?
        };
        let got_x = BigInt::from(count_contact(&f, n, args.q, &cfg).map_err(from_jet)?);
        let row_ok = pred_j == got_j && pred_x == got_x;
        ok &= row_ok;
        text.push_str(&format!(
            "n = {}: jets {} vs {}, contact {} vs {} -> {}\n",
            n,
            pred_j,
            got_j,
            pred_x,
            got_x,
            if row_ok { "ok" } else { "MISMATCH" }
        ));
        rows.push(json!({
            "n": n,
            "jets_predicted": pred_j.to_string(),
            "jets_counted": got_j.to_string(),
            "contact_predicted": pred_x.to_string(),
            "contact_counted": got_x.to_string(),
            "ok": row_ok,
        }));
    }
    text.push_str(&format!("verification: {}", if ok { "PASS" } else { "FAIL" }));
    print_output(format, json!({ "q": args.q, "rows": rows, "pass": ok }), text);
    if !ok {
        return fail(5, "series and oracle counts disagree");
    }
    Ok(())
}

fn cmd_poles(format: Format, args: PolesArgs) -> R<()> {
    let res = args.res.load()?;
    let z = denef_loeser(&res).map_err(from_zeta)?;
    let d = res.dimension;
    let rep = smallest_pole_report(&z, d);
    let mut text = String::new();
    for (f, (nu, nn)) in &rep.surviving {
        text.push_str(&format!(
            "factor 1 - L^{} t^{}: candidate pole -{}/{}\n",
            f.lexp, f.tdeg, nu, nn
        ));
    }
    for f in &rep.cancelled {
        text.push_str(&format!("factor 1 - L^{} t^{}: cancels\n", f.lexp, f.tdeg));
    }
    match rep.max_ratio {
        Some((nu, nn)) => text.push_str(&format!("largest ratio: {}/{}\n", nu, nn)),
        None => text.push_str("no surviving factors\n"),
    }
    text.push_str(&format!(
        "all candidate poles within -{}/{}: {}",
        rep.bound.0, rep.bound.1, rep.within_bound
    ));
    let mut out = json!({
        "surviving": rep
            .surviving
            .iter()
            .map(|(f, (nu, nn))| json!({ "lexp": f.lexp, "tdeg": f.tdeg, "nu": nu, "n": nn }))
            .collect::<Vec<_>>(),
        "cancelled": rep
            .cancelled
            .iter()
            .map(|f| json!({ "lexp": f.lexp, "tdeg": f.tdeg }))
            .collect::<Vec<_>>(),
        "within_bound": rep.within_bound,
    });

    if args.partial {
        match partial_fractions(&z, d) {
            Ok(pf) => {
                text.push_str(&format!(
                    "\nscale w = {}\npole factor 1 - L^{} t^{}, order {}",
                    pf.scale, pf.pole_factor.lexp, pf.pole_factor.tdeg, pf.order
                ));
                for (j, mu) in pf.principal.iter().enumerate() {
                    let rz = RationalZeta {
                        numerator: mu.clone(),
                        denominator: Vec::new(),
                    };
                    text.push_str(&format!("\nmu_{} = {}", j + 1, rz));
                }
                out["partial"] = json!({
                    "scale": pf.scale.to_string(),
                    "order": pf.order,
                    "pole_factor": { "lexp": pf.pole_factor.lexp, "tdeg": pf.pole_factor.tdeg },
                    "principal": pf.principal.iter().map(|mu| tpoly_strings(mu)).collect::<Vec<_>>(),
                    "residual_numerator": tpoly_strings(&pf.residual_numerator),
                });
            }
            Err(PoleError::NoPoles) => {
                text.push_str("\nthe function is a polynomial; nothing to decompose");
                out["partial"] = json!("no poles");
            }
            Err(e) => return fail(3, e.to_string()),
        }
    }
    print_output(format, out, text);
    Ok(())
}

fn run() -> R<()> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Zeta { cmd } => cmd_zeta(cli.format, cmd),
        Cmd::Jets { cmd } => cmd_jets(cli.format, cmd),
        Cmd::Verify(args) => cmd_verify(cli.format, args),
        Cmd::Poles(args) => cmd_poles(cli.format, args),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
