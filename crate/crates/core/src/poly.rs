//! Sparse exact-rational multivariate polynomials over an open-ended indexed
//! variable universe.
//!
//! Three kinds of variables occur: arrow classes `x_a`, flat Chern roots
//! `xi_i#r` (one block of `d_i` slots per vertex), and character-indexed
//! Chern roots `xi_i@chi#s` living on torus-fixed components. Polynomials
//! are stored expanded in these variables; symmetric-generator inputs are
//! expanded through [`elementary_symmetric`] on entry. Canonical form is
//! unique: equal polynomials serialize identically.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::quiver::Quiver;

/// An integer character of the arrow torus, stored densely over the
/// canonical arrow order. Comparison is lexicographic over the reversed
/// component order, so unit characters sort by arrow position:
/// `x_a0 < x_a1 < ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character(pub Vec<i64>);

impl Character {
    pub fn zero(n_arrows: usize) -> Self {
        Character(vec![0; n_arrows])
    }

    pub fn unit(arrow: usize, n_arrows: usize) -> Self {
        let mut v = vec![0; n_arrows];
        v[arrow] = 1;
        Character(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Character) -> Character {
        Character(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Character) -> Character {
        Character(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Character {
        Character(self.0.iter().map(|a| -a).collect())
    }

    /// The character as a linear polynomial `sum_a c_a * x_a`.
    pub fn as_poly(&self) -> Poly {
        let mut p = Poly::zero();
        for (a, &c) in self.0.iter().enumerate() {
            if c != 0 {
                p = p.add(&Poly::var(Var::Arrow(a)).scale(&BigRational::from_integer(c.into())));
            }
        }
        p
    }

    /// Human-readable signed combination, e.g. `a-2*b`, or `0`.
    pub fn combo_string(&self, arrow_names: &[String]) -> String {
        let mut out = String::new();
        for (a, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push(if c > 0 { '+' } else { '-' });
            }
            if c.abs() != 1 {
                let _ = write!(out, "{}*", c.abs());
            }
            out.push_str(&arrow_names[a]);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl Ord for Character {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            match a.cmp(b) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Character {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A variable of the ambient rings. The derived order (arrow variables,
/// then flat roots, then character-indexed roots) is the canonical total
/// order used by monomial comparison and serialization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// `x_a` for an arrow index.
    Arrow(usize),
    /// `xi_i#r`: the r-th Chern root at a vertex, slots 1-based.
    Flat { vertex: usize, slot: usize },
    /// `xi_i@chi#s`: a Chern root in the fiber of a character.
    Chern {
        vertex: usize,
        chi: Character,
        slot: usize,
    },
}

/// Exponent multiset of a monomial; zero exponents are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub BTreeMap<Var, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(v: Var) -> Self {
        let mut m = BTreeMap::new();
        m.insert(v, 1);
        Monomial(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (v, e) in &other.0 {
            *m.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for Monomial {
    /// Graded order: by total degree, then by exponents compared at
    /// successive variables in canonical order, larger exponent first.
    /// `x_a` thus precedes `x_b`, and `x_a^2` precedes `x_a*x_b`.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match self.degree().cmp(&other.degree()) {
            std::cmp::Ordering::Equal => {}
            ord => return ord,
        }
        let mut it_a = self.0.iter();
        let mut it_b = other.0.iter();
        loop {
            match (it_a.next(), it_b.next()) {
                (None, None) => return std::cmp::Ordering::Equal,
                // Exhausted side has exponent 0 at the other's variable:
                // the side still holding exponents is lex-larger, i.e. earlier.
                (None, Some(_)) => return std::cmp::Ordering::Greater,
                (Some(_), None) => return std::cmp::Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    // Smaller variable with positive exponent wins (comes first).
                    std::cmp::Ordering::Less => return std::cmp::Ordering::Less,
                    std::cmp::Ordering::Greater => return std::cmp::Ordering::Greater,
                    std::cmp::Ordering::Equal => match eb.cmp(ea) {
                        std::cmp::Ordering::Equal => continue,
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial with exact rational coefficients in canonical form:
/// no zero coefficients, terms keyed by [`Monomial`] in graded order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: Var) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), BigRational::one());
        Poly { terms }
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Total degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.0.keys().cloned())
            .collect()
    }

    /// The homogeneous part of the given total degree.
    pub fn homogeneous_part(&self, n: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == n)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Simultaneous substitution; variables missing from the assignment
    /// pass through unchanged.
    pub fn substitute(&self, assignment: &BTreeMap<Var, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for (v, &e) in &m.0 {
                match assignment.get(v) {
                    Some(p) => term = term.mul(&p.pow(e)),
                    None => {
                        let mut mono = Monomial::one();
                        mono.0.insert(v.clone(), e);
                        term = term.mul(&Poly::monomial(mono, BigRational::one()));
                    }
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Exchanges two variables.
    pub fn swap_vars(&self, a: &Var, b: &Var) -> Poly {
        let mut assignment = BTreeMap::new();
        assignment.insert(a.clone(), Poly::var(b.clone()));
        assignment.insert(b.clone(), Poly::var(a.clone()));
        self.substitute(&assignment)
    }

    /// True iff the polynomial is invariant under every transposition within
    /// each block. Adjacent transpositions are checked; they generate the
    /// full symmetric group of the block.
    pub fn is_symmetric_under_blocks(&self, blocks: &[Vec<Var>]) -> bool {
        for block in blocks {
            for w in block.windows(2) {
                if self.swap_vars(&w[0], &w[1]) != *self {
                    return false;
                }
            }
        }
        true
    }

    /// Exact division by `(x - y)` for distinct variables, by synthetic
    /// division in `x`. Returns None when the remainder is nonzero.
    pub fn div_exact_linear_diff(&self, x: &Var, y: &Var) -> Option<Poly> {
        // Collect coefficients of x^k.
        let mut by_deg: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.0.get(x).copied().unwrap_or(0);
            let mut rest = m.clone();
            rest.0.remove(x);
            by_deg
                .entry(k)
                .or_insert_with(Poly::zero)
                .add_term(rest, c.clone());
        }
        let max_deg = match by_deg.keys().next_back() {
            Some(&k) => k,
            None => return Some(Poly::zero()),
        };
        let y_poly = Poly::var(y.clone());
        // p = sum c_k x^k; quotient coefficients b_{k-1} = c_k + y*b_k.
        let mut quotient = Poly::zero();
        let mut carry = Poly::zero();
        for k in (1..=max_deg).rev() {
            let c_k = by_deg.get(&k).cloned().unwrap_or_else(Poly::zero);
            let b = c_k.add(&carry.mul(&y_poly));
            let mut xk = Monomial::one();
            if k - 1 > 0 {
                xk.0.insert(x.clone(), k - 1);
            }
            quotient = quotient.add(&b.mul(&Poly::monomial(xk, BigRational::one())));
            carry = b;
        }
        let c_0 = by_deg.get(&0).cloned().unwrap_or_else(Poly::zero);
        let remainder = c_0.add(&carry.mul(&y_poly));
        if remainder.is_zero() {
            Some(quotient)
        } else {
            None
        }
    }
}

/// The r-th elementary symmetric polynomial of the given variables;
/// `e_0 = 1`.
pub fn elementary_symmetric(k: usize, vars: &[Var]) -> Result<Poly, PolyError> {
    if k > vars.len() {
        return Err(PolyError::ElementaryRange {
            k,
            n_vars: vars.len(),
        });
    }
    // DP over prefixes: e[j] after v ranges over e_j(prefix).
    let mut e: Vec<Poly> = (0..=k)
        .map(|j| if j == 0 { Poly::one() } else { Poly::zero() })
        .collect();
    for v in vars {
        let vp = Poly::var(v.clone());
        for j in (1..=k).rev() {
            let bump = e[j - 1].mul(&vp);
            e[j] = e[j].add(&bump);
        }
    }
    Ok(e.swap_remove(k))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("elementary symmetric index {k} exceeds variable count {n_vars}")]
    ElementaryRange { k: usize, n_vars: usize },
    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),
}

/// Naming context tying variable indices to vertex and arrow ids.
#[derive(Debug, Clone)]
pub struct Symbols {
    pub vertices: Vec<String>,
    pub arrows: Vec<String>,
}

impl Symbols {
    pub fn from_quiver(q: &Quiver) -> Self {
        Symbols {
            vertices: q.vertex_names().to_vec(),
            arrows: q.arrows().iter().map(|a| a.id.clone()).collect(),
        }
    }

    fn var_string(&self, v: &Var) -> String {
        match v {
            Var::Arrow(a) => format!("x_{}", self.arrows[*a]),
            Var::Flat { vertex, slot } => format!("xi_{}#{}", self.vertices[*vertex], slot),
            Var::Chern { vertex, chi, slot } => {
                let coeffs = chi
                    .0
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                format!("xi_{}@{}#{}", self.vertices[*vertex], coeffs, slot)
            }
        }
    }

    /// Deterministic textual form: monomials in canonical graded order,
    /// coefficients in lowest terms, e.g. `2*x_a + x_b - 1/3*x_c^2`.
    pub fn poly_string(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (m, c) in p.terms() {
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (v, &e) in &m.0 {
                if e == 1 {
                    factors.push(self.var_string(v));
                } else {
                    factors.push(format!("{}^{}", self.var_string(v), e));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// A bare monomial in canonical form, e.g. `x_a^2*x_b` or `1`.
    pub fn monomial_string(&self, m: &Monomial) -> String {
        self.poly_string(&Poly::monomial(m.clone(), BigRational::one()))
    }

    /// Parses the canonical grammar emitted by [`Symbols::poly_string`].
    pub fn parse_poly(&self, input: &str) -> Result<Poly, PolyError> {
        Parser {
            symbols: self,
            bytes: input.as_bytes(),
            pos: 0,
        }
        .parse()
    }
}

struct Parser<'a> {
    symbols: &'a Symbols,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T, PolyError> {
        Err(PolyError::Parse {
            at: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Poly, PolyError> {
        let mut out = Poly::zero();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty input");
        }
        let mut sign = BigRational::one();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -sign;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let term = self.parse_term()?;
            out = out.add(&term.scale(&sign));
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => {
                    self.pos += 1;
                    sign = BigRational::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -BigRational::one();
                }
                Some(_) => return self.err("expected `+` or `-` between terms"),
            }
            self.skip_ws();
        }
    }

    fn parse_term(&mut self) -> Result<Poly, PolyError> {
        self.skip_ws();
        let mut coeff = BigRational::one();
        let mut mono = Monomial::one();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coeff *= self.parse_rational()?,
                Some(b'x') => {
                    let (v, e) = self.parse_var_power()?;
                    *mono.0.entry(v).or_insert(0) += e;
                }
                _ => return self.err("expected coefficient or variable"),
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(Poly::monomial(mono, coeff))
    }

    fn parse_nat(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .unwrap())
    }

    fn parse_rational(&mut self) -> Result<BigRational, PolyError> {
        let numer = self.parse_nat()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let denom = self.parse_nat()?;
            if denom.is_zero() {
                return self.err("zero denominator");
            }
            Ok(BigRational::new(numer, denom))
        } else {
            Ok(BigRational::from_integer(numer))
        }
    }

    fn parse_ident(&mut self) -> Result<String, PolyError> {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected identifier");
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .to_string())
    }

    fn parse_signed_int(&mut self) -> Result<i64, PolyError> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let n = self.parse_nat()?;
        let v: i64 = n.try_into().map_err(|_| PolyError::Parse {
            at: self.pos,
            msg: "integer out of range".into(),
        })?;
        Ok(if neg { -v } else { v })
    }

    // `x_<arrow>` | `xi_<vertex>#<slot>` | `xi_<vertex>@<c,...,c>#<slot>`,
    // optionally followed by `^<exp>`.
    fn parse_var_power(&mut self) -> Result<(Var, u32), PolyError> {
        if self.peek() != Some(b'x') {
            return self.err("expected variable");
        }
        self.pos += 1;
        let is_xi = self.peek() == Some(b'i');
        if is_xi {
            self.pos += 1;
        }
        if self.peek() != Some(b'_') {
            return self.err("expected `_` in variable");
        }
        self.pos += 1;
        let var = if !is_xi {
            let id = self.parse_ident()?;
            let a = self
                .symbols
                .arrows
                .iter()
                .position(|x| *x == id)
                .ok_or(PolyError::UnknownIdent(id))?;
            Var::Arrow(a)
        } else {
            let id = self.parse_ident()?;
            let vertex = self
                .symbols
                .vertices
                .iter()
                .position(|x| *x == id)
                .ok_or(PolyError::UnknownIdent(id))?;
            if self.peek() == Some(b'@') {
                self.pos += 1;
                let mut coeffs = Vec::new();
                loop {
                    coeffs.push(self.parse_signed_int()?);
                    if self.peek() == Some(b',') {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                if coeffs.len() != self.symbols.arrows.len() {
                    return self.err("character length does not match arrow count");
                }
                if self.peek() != Some(b'#') {
                    return self.err("expected `#slot`");
                }
                self.pos += 1;
                let slot: u32 = self.parse_nat()?.try_into().map_err(|_| PolyError::Parse {
                    at: self.pos,
                    msg: "slot out of range".into(),
                })?;
                Var::Chern {
                    vertex,
                    chi: Character(coeffs),
                    slot: slot as usize,
                }
            } else {
                if self.peek() != Some(b'#') {
                    return self.err("expected `#slot`");
                }
                self.pos += 1;
                let slot: u32 = self.parse_nat()?.try_into().map_err(|_| PolyError::Parse {
                    at: self.pos,
                    msg: "slot out of range".into(),
                })?;
                Var::Flat {
                    vertex,
                    slot: slot as usize,
                }
            }
        };
        let mut exp = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            exp = self.parse_nat()?.try_into().map_err(|_| PolyError::Parse {
                at: self.pos,
                msg: "exponent out of range".into(),
            })?;
        }
        Ok((var, exp))
    }
}
