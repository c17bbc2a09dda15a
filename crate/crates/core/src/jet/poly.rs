//! Exact multivariate polynomials over the integers, plus the polynomial
//! input mini-language (`x^2 + y^3`, variables `x y z w` or `x1..xd`).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::JetError;

/// Sparse multivariate polynomial over `Z` in `nvars` anonymous variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    pub nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(exps, BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        debug_assert_eq!(exps.len(), self.nvars);
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::one(self.nvars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (exps, coeff) in &self.terms {
            if exps[i] == 0 {
                continue;
            }
            let mut e = exps.clone();
            e[i] -= 1;
            out.add_term(e, coeff * BigInt::from(exps[i]));
        }
        out
    }

    /// Divided-power derivative `(d^|alpha| / alpha!) f`: exact over `Z`,
    /// with binomial coefficients in place of falling factorials.
    pub fn divided_partial(&self, alpha: &[u32]) -> MultiPoly {
        debug_assert_eq!(alpha.len(), self.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        'term: for (exps, coeff) in &self.terms {
            let mut c = coeff.clone();
            let mut e = exps.clone();
            for i in 0..self.nvars {
                if exps[i] < alpha[i] {
                    continue 'term;
                }
                c *= binomial(exps[i], alpha[i]);
                e[i] = exps[i] - alpha[i];
            }
            out.add_term(e, c);
        }
        out
    }

    /// Maximum exponent of variable `i` over all terms.
    pub fn max_exp(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Render with the given variable names.
    pub fn render(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (exps, coeff) in self.terms.iter().rev() {
            let neg = coeff.is_negative();
            let abs = coeff.abs();
            if first {
                if neg {
                    out.push('-');
                }
                first = false;
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || exps.iter().all(|&e| e == 0) {
                factors.push(abs.to_string());
            }
            for (i, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(vars[i].clone()),
                    e => factors.push(format!("{}^{}", vars[i], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// A named-variable polynomial: the regular function `f` on affine `d`-space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegerPolynomial {
    pub vars: Vec<String>,
    pub poly: MultiPoly,
}

impl IntegerPolynomial {
    pub fn dimension(&self) -> usize {
        self.vars.len()
    }

    /// Parse `text` over variables `x y z w` or `x1..xd`. The ambient
    /// dimension is the highest variable used; `f` must be nonzero and
    /// non-constant.
    pub fn parse(text: &str) -> Result<IntegerPolynomial, JetError> {
        let idents = collect_idents(text)?;
        let vars = resolve_vars(&idents)?;
        let poly = parse_poly(text, &vars)?;
        if poly.is_zero() || poly.is_constant() {
            return Err(JetError::ConstantPolynomial);
        }
        Ok(IntegerPolynomial { vars, poly })
    }

    /// Parse `text` on affine `d`-space, whether or not every coordinate
    /// actually occurs (e.g. `x` as a function on the plane).
    pub fn parse_in_dimension(text: &str, d: usize) -> Result<IntegerPolynomial, JetError> {
        let parsed = Self::parse(text)?;
        if parsed.vars.len() > d {
            return Err(JetError::PolyParse {
                pos: 0,
                message: format!(
                    "polynomial uses {} variables but ambient dimension is {}",
                    parsed.vars.len(),
                    d
                ),
            });
        }
        if parsed.vars.len() == d {
            return Ok(parsed);
        }
        const LETTERS: [&str; 4] = ["x", "y", "z", "w"];
        let indexed = parsed.vars[0].len() > 1 || d > LETTERS.len();
        let vars: Vec<String> = if indexed {
            (1..=d).map(|i| format!("x{}", i)).collect()
        } else {
            LETTERS[..d].iter().map(|s| s.to_string()).collect()
        };
        let poly = parse_poly(text, &vars)?;
        Ok(IntegerPolynomial { vars, poly })
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly.render(&self.vars))
    }
}

fn collect_idents(text: &str) -> Result<Vec<String>, JetError> {
    let bytes = text.as_bytes();
    let mut idents = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let name = &text[start..i];
            if !idents.iter().any(|s| s == name) {
                idents.push(name.to_string());
            }
        } else {
            i += 1;
        }
    }
    Ok(idents)
}

/// Map used identifiers to the ordered variable list x..w or x1..xd.
fn resolve_vars(idents: &[String]) -> Result<Vec<String>, JetError> {
    const LETTERS: [&str; 4] = ["x", "y", "z", "w"];
    let all_letters = idents.iter().all(|s| LETTERS.contains(&s.as_str()));
    let all_indexed = idents
        .iter()
        .all(|s| s.starts_with('x') && s.len() > 1 && s[1..].chars().all(|c| c.is_ascii_digit()));
    if all_letters {
        let d = idents
            .iter()
            .map(|s| LETTERS.iter().position(|l| l == s).unwrap() + 1)
            .max()
            .unwrap_or(0);
        if d == 0 {
            return Err(JetError::ConstantPolynomial);
        }
        Ok(LETTERS[..d].iter().map(|s| s.to_string()).collect())
    } else if all_indexed && !idents.is_empty() {
        let d = idents
            .iter()
            .map(|s| s[1..].parse::<usize>().unwrap_or(0))
            .max()
            .unwrap();
        if d == 0 {
            return Err(JetError::PolyParse {
                pos: 0,
                message: "variable index must be >= 1".to_string(),
            });
        }
        Ok((1..=d).map(|i| format!("x{}", i)).collect())
    } else {
        Err(JetError::PolyParse {
            pos: 0,
            message: format!(
                "variables must be among x,y,z,w or x1..xd; got {:?}",
                idents
            ),
        })
    }
}

/// Recursive-descent parser over a fixed variable list.
pub fn parse_poly(text: &str, vars: &[String]) -> Result<MultiPoly, JetError> {
    struct P<'a> {
        src: &'a [u8],
        pos: usize,
        vars: &'a [String],
        text: &'a str,
    }
    impl<'a> P<'a> {
        fn err<T>(&self, pos: usize, message: impl Into<String>) -> Result<T, JetError> {
            Err(JetError::PolyParse {
                pos,
                message: message.into(),
            })
        }
        fn skip_ws(&mut self) {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }
        fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.src.get(self.pos).copied()
        }
        fn expr(&mut self) -> Result<MultiPoly, JetError> {
            let mut acc = self.term()?;
            loop {
                match self.peek() {
                    Some(b'+') => {
                        self.pos += 1;
                        acc = acc.add(&self.term()?);
                    }
                    Some(b'-') => {
                        self.pos += 1;
                        acc = acc.sub(&self.term()?);
                    }
                    _ => return Ok(acc),
                }
            }
        }
        fn term(&mut self) -> Result<MultiPoly, JetError> {
            let mut acc = self.unary()?;
            while let Some(b'*') = self.peek() {
                self.pos += 1;
                acc = acc.mul(&self.unary()?);
            }
            Ok(acc)
        }
        fn unary(&mut self) -> Result<MultiPoly, JetError> {
            if let Some(b'-') = self.peek() {
                self.pos += 1;
                return Ok(self.unary()?.neg());
            }
            self.power()
        }
        fn power(&mut self) -> Result<MultiPoly, JetError> {
            let base = self.atom()?;
            if let Some(b'^') = self.peek() {
                self.pos += 1;
                self.skip_ws();
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return self.err(start, "expected nonnegative integer exponent");
                }
                let e: u32 = self.text[start..self.pos]
                    .parse()
                    .map_err(|_| JetError::PolyParse {
                        pos: start,
                        message: "exponent out of range".to_string(),
                    })?;
                return Ok(base.pow(e));
            }
            Ok(base)
        }
        fn atom(&mut self) -> Result<MultiPoly, JetError> {
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    let inner = self.expr()?;
                    if self.peek() != Some(b')') {
                        return self.err(self.pos, "expected ')'");
                    }
                    self.pos += 1;
                    Ok(inner)
                }
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let n: BigInt = self.text[start..self.pos].parse().unwrap();
                    Ok(MultiPoly::constant(self.vars.len(), n))
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let name = &self.text[start..self.pos];
                    match self.vars.iter().position(|v| v == name) {
                        Some(i) => Ok(MultiPoly::var(self.vars.len(), i)),
                        None => self.err(start, format!("unknown variable '{}'", name)),
                    }
                }
                Some(c) => self.err(self.pos, format!("unexpected character {:?}", c as char)),
                None => self.err(self.src.len(), "unexpected end of input"),
            }
        }
    }
    let mut p = P {
        src: text.as_bytes(),
        pos: 0,
        vars,
        text,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(JetError::PolyParse {
            pos: p.pos,
            message: "trailing input".to_string(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_monomials() {
        let f = IntegerPolynomial::parse("x^2 + y^3").unwrap();
        assert_eq!(f.dimension(), 2);
        assert_eq!(f.to_string(), "x^2 + y^3");
        let g = IntegerPolynomial::parse("x*y").unwrap();
        assert_eq!(g.dimension(), 2);
        // y alone still lives on the plane.
        let h = IntegerPolynomial::parse("y").unwrap();
        assert_eq!(h.dimension(), 2);
    }

    #[test]
    fn parse_indexed_vars() {
        let f = IntegerPolynomial::parse("x1*x3 + 2*x2").unwrap();
        assert_eq!(f.dimension(), 3);
    }

    #[test]
    fn rejects_constant_and_bad_vars() {
        assert!(IntegerPolynomial::parse("7").is_err());
        assert!(IntegerPolynomial::parse("x - x").is_err());
        assert!(IntegerPolynomial::parse("foo + x").is_err());
    }

    #[test]
    fn partials() {
        let f = IntegerPolynomial::parse("x^2*y^3").unwrap();
        let fx = f.poly.partial(0);
        assert_eq!(fx.render(&f.vars), "2*x*y^3");
        let fy = f.poly.partial(1);
        assert_eq!(fy.render(&f.vars), "3*x^2*y^2");
    }

    #[test]
    fn divided_partials_are_exact() {
        let f = IntegerPolynomial::parse_in_dimension("x^4", 2).unwrap();
        // (1/2!) d^2/dx^2 x^4 = 6 x^2 = C(4,2) x^2.
        let g = f.poly.divided_partial(&[2, 0]);
        assert_eq!(g.render(&f.vars), "6*x^2");
    }
}
