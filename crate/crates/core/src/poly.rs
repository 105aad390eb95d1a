//! Sparse multivariate polynomials in `beta` and a roster of alphabet
//! variables, with exact coefficients and a fixed canonical term order.
//!
//! Variable 0 of every roster is `beta`. The remaining variables are either
//! finite alphabet variables (`x1`, `x2`, ..., weight 1) or formal power sums
//! (`p1`, `p2`, ..., weight k). Truncations act on the beta exponent and on
//! the weighted alphabet degree.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{CommutativeRing, Scalar};

/// Ordered list of variable names; index 0 is always `beta`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Roster {
    names: Vec<String>,
    weights: Vec<u32>,
}

fn infer_weight(name: &str) -> u32 {
    if name == "beta" {
        return 0;
    }
    if let Some(k) = name.strip_prefix('p').and_then(|k| k.parse::<u32>().ok()) {
        return k;
    }
    1
}

impl Roster {
    /// Builds a roster from names. Weights are inferred: `beta` has weight 0,
    /// `p<k>` has weight `k`, everything else weight 1.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Arc<Roster>> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        if names.first().map(String::as_str) != Some("beta") {
            return Err(Error::Roster("first variable must be beta".into()));
        }
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() || !a.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Roster(format!("invalid variable name {a:?}")));
            }
            if names[..i].contains(a) {
                return Err(Error::Roster(format!("duplicate variable {a}")));
            }
        }
        let weights = names.iter().map(|n| infer_weight(n)).collect();
        Ok(Arc::new(Roster { names, weights }))
    }

    pub fn beta_only() -> Arc<Roster> {
        Self::from_names(&["beta"]).unwrap()
    }

    /// `beta, x1, ..., xn`.
    pub fn variables(n: usize) -> Arc<Roster> {
        Self::prefixed("x", n)
    }

    /// `beta, <prefix>1, ..., <prefix>n`.
    pub fn prefixed(prefix: &str, n: usize) -> Arc<Roster> {
        let mut names = vec!["beta".to_string()];
        names.extend((1..=n).map(|i| format!("{prefix}{i}")));
        Self::from_names(&names).unwrap()
    }

    /// `beta, p1, ..., pm`.
    pub fn power_sums(m: usize) -> Arc<Roster> {
        Self::prefixed("p", m)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Roster containing `self` followed by the new names of `other`.
    pub fn union(&self, other: &Roster) -> Arc<Roster> {
        let mut names = self.names.clone();
        for n in &other.names {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
        Roster::from_names(&names).unwrap()
    }

    /// Number of alphabet (non-beta) variables.
    pub fn alphabet_len(&self) -> usize {
        self.names.len() - 1
    }
}

/// Exponent vector, ordered so that the canonical first term compares least:
/// higher total degree first, then lexicographic over the alphabet variables,
/// then beta last.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn beta(&self) -> u32 {
        self.0[0]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weight(&self, roster: &Roster) -> u32 {
        self.0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, e)| e * roster.weight(i))
            .sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0[1..].cmp(&self.0[1..]))
            .then_with(|| other.0[0].cmp(&self.0[0]))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Truncation applied after every multiplication.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Truncation {
    /// Keep beta exponents `<= beta_max`.
    pub beta_max: Option<u32>,
    /// Keep weighted alphabet degree `<= weight_max`.
    pub weight_max: Option<u32>,
}

impl Truncation {
    pub const NONE: Truncation = Truncation { beta_max: None, weight_max: None };

    pub fn beta(k: u32) -> Self {
        Truncation { beta_max: Some(k), weight_max: None }
    }

    pub fn weight(d: u32) -> Self {
        Truncation { beta_max: None, weight_max: Some(d) }
    }

    pub fn both(k: u32, d: u32) -> Self {
        Truncation { beta_max: Some(k), weight_max: Some(d) }
    }

    fn keeps(&self, m: &Monomial, roster: &Roster) -> bool {
        if let Some(k) = self.beta_max {
            if m.beta() > k {
                return false;
            }
        }
        if let Some(d) = self.weight_max {
            if m.weight(roster) > d {
                return false;
            }
        }
        true
    }
}

/// Sparse polynomial over an exact scalar field.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial<C> {
    roster: Arc<Roster>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero(roster: &Arc<Roster>) -> Self {
        Polynomial { roster: roster.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(c: C, roster: &Arc<Roster>) -> Self {
        let mut p = Self::zero(roster);
        p.add_term(Monomial::new(vec![0; roster.len()]), c);
        p
    }

    pub fn one(roster: &Arc<Roster>) -> Self {
        Self::constant(C::one(), roster)
    }

    pub fn from_i64(n: i64, roster: &Arc<Roster>) -> Self {
        Self::constant(C::from_i64(n), roster)
    }

    /// The variable at roster index `i` (0 is beta).
    pub fn var_index(i: usize, roster: &Arc<Roster>) -> Self {
        let mut e = vec![0; roster.len()];
        e[i] = 1;
        Self::monomial(e, C::one(), roster)
    }

    pub fn var(name: &str, roster: &Arc<Roster>) -> Result<Self> {
        let i = roster
            .index_of(name)
            .ok_or_else(|| Error::Roster(format!("unknown variable {name}")))?;
        Ok(Self::var_index(i, roster))
    }

    pub fn beta(roster: &Arc<Roster>) -> Self {
        Self::var_index(0, roster)
    }

    pub fn monomial(exps: Vec<u32>, c: C, roster: &Arc<Roster>) -> Self {
        assert_eq!(exps.len(), roster.len(), "exponent vector arity mismatch");
        let mut p = Self::zero(roster);
        p.add_term(Monomial::new(exps), c);
        p
    }

    /// Builds from `(exponents, coefficient)` pairs; wrong arity is an error.
    pub fn from_terms<I>(roster: &Arc<Roster>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut p = Self::zero(roster);
        for (e, c) in terms {
            if e.len() != roster.len() {
                return Err(Error::Roster(format!(
                    "exponent vector of length {} for roster of length {}",
                    e.len(),
                    roster.len()
                )));
            }
            p.add_term(Monomial::new(e), c);
        }
        Ok(p)
    }

    /// Univariate polynomial in beta from ascending coefficients.
    pub fn beta_poly(coeffs: &[C], roster: &Arc<Roster>) -> Self {
        let mut p = Self::zero(roster);
        for (k, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; roster.len()];
            e[0] = k as u32;
            p.add_term(Monomial::new(e), c.clone());
        }
        p
    }

    pub fn roster(&self) -> &Arc<Roster> {
        &self.roster
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> C {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Constant term (all exponents zero).
    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.roster.len()])
    }

    /// `Some(c)` when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn same_roster(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.roster, &other.roster) || self.roster == other.roster
    }

    /// Brings both operands onto a common roster.
    fn unify(&self, other: &Self) -> Result<(Self, Self)> {
        let roster = self.roster.union(&other.roster);
        Ok((self.embed(&roster)?, other.embed(&roster)?))
    }

    /// Re-expresses the polynomial over a roster containing all its variables.
    pub fn embed(&self, roster: &Arc<Roster>) -> Result<Self> {
        if self.roster == *roster {
            return Ok(Polynomial { roster: roster.clone(), terms: self.terms.clone() });
        }
        let map: Vec<usize> = self
            .roster
            .names()
            .iter()
            .map(|n| {
                roster
                    .index_of(n)
                    .ok_or_else(|| Error::Roster(format!("variable {n} missing from target roster")))
            })
            .collect::<Result<_>>()?;
        let mut out = Self::zero(roster);
        for (m, c) in &self.terms {
            let mut e = vec![0; roster.len()];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[map[i]] = x;
            }
            out.add_term(Monomial::new(e), c.clone());
        }
        Ok(out)
    }

    /// Renames variables positionally onto a roster of the same length.
    pub fn relabel(&self, roster: &Arc<Roster>) -> Result<Self> {
        if roster.len() != self.roster.len() {
            return Err(Error::Roster("relabel requires rosters of equal length".into()));
        }
        let mut out = Self::zero(roster);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if !self.same_roster(other) {
            let (a, b) = self.unify(other)?;
            return a.try_add(&b);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.try_mul_truncated(other, &Truncation::NONE)
    }

    pub fn try_mul_truncated(&self, other: &Self, trunc: &Truncation) -> Result<Self> {
        if !self.same_roster(other) {
            let (a, b) = self.unify(other)?;
            return a.try_mul_truncated(&b, trunc);
        }
        Ok(self.mul_truncated(other, trunc))
    }

    /// Product keeping only monomials allowed by `trunc`. Panics on roster
    /// mismatch; use [`Polynomial::try_mul_truncated`] for mixed rosters.
    pub fn mul_truncated(&self, other: &Self, trunc: &Truncation) -> Self {
        assert!(self.same_roster(other), "roster mismatch");
        let mut out = Self::zero(&self.roster);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if trunc.keeps(&m, &self.roster) {
                    out.add_term(m, ca.clone() * cb.clone());
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.roster);
        }
        Polynomial {
            roster: self.roster.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn truncate(&self, trunc: &Truncation) -> Self {
        Polynomial {
            roster: self.roster.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| trunc.keeps(m, &self.roster))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn pow_truncated(&self, k: u32, trunc: &Truncation) -> Self {
        let mut acc = Self::one(&self.roster).truncate(trunc);
        for _ in 0..k {
            acc = acc.mul_truncated(self, trunc);
        }
        acc
    }

    /// Largest beta exponent, `None` for zero.
    pub fn beta_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::beta).max()
    }

    /// Largest weighted alphabet degree, `None` for zero.
    pub fn weight_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.weight(&self.roster)).max()
    }

    /// Homogeneous component of the given weighted alphabet degree.
    pub fn weight_component(&self, d: u32) -> Self {
        Polynomial {
            roster: self.roster.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight(&self.roster) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sets variable `i` to zero.
    pub fn set_zero(&self, i: usize) -> Self {
        Polynomial {
            roster: self.roster.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponents()[i] == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Specialization beta = 0.
    pub fn at_beta_zero(&self) -> Self {
        self.set_zero(0)
    }

    /// Exchanges two variables.
    pub fn swap_vars(&self, i: usize, j: usize) -> Self {
        let mut out = Self::zero(&self.roster);
        for (m, c) in &self.terms {
            let mut e = m.exponents().to_vec();
            e.swap(i, j);
            out.add_term(Monomial::new(e), c.clone());
        }
        out
    }

    /// Symmetric under all permutations of the alphabet variables `x1..`.
    pub fn is_symmetric(&self) -> bool {
        let n = self.roster.len();
        (1..n.saturating_sub(1)).all(|i| self.swap_vars(i, i + 1) == *self)
    }

    /// Ring homomorphism fixing beta and sending alphabet variable `i` (roster
    /// index `i + 1`) to `images[i]`. All images share the target roster.
    pub fn substitute(&self, images: &[Polynomial<C>], target: &Arc<Roster>, trunc: &Truncation) -> Result<Self> {
        if images.len() != self.roster.alphabet_len() {
            return Err(Error::Roster("substitution needs one image per alphabet variable".into()));
        }
        let images: Vec<Polynomial<C>> =
            images.iter().map(|p| p.embed(target)).collect::<Result<_>>()?;
        let beta = Polynomial::beta(target);
        // cache of powers per variable
        let mut powers: Vec<Vec<Polynomial<C>>> = vec![vec![Polynomial::one(target)]; self.roster.len()];
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone(), target).truncate(trunc);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = if i == 0 { &beta } else { &images[i - 1] };
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul_truncated(base, trunc);
                    powers[i].push(next);
                }
                term = term.mul_truncated(&powers[i][e as usize], trunc);
                if term.is_zero() {
                    break;
                }
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Multiplicative inverse as a power series, for polynomials whose
    /// constant term is a nonzero scalar and whose other terms have positive
    /// weight or positive beta degree bounded by the truncation.
    pub fn inverse_truncated(&self, trunc: &Truncation) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::ExpansionOrder("constant term is zero".into()));
        }
        for m in self.terms.keys() {
            if m.degree() == 0 {
                continue;
            }
            let w = m.weight(&self.roster);
            let beta_bounded = trunc.beta_max.is_some() && m.beta() > 0;
            let weight_bounded = trunc.weight_max.is_some() && w > 0;
            if !beta_bounded && !weight_bounded {
                return Err(Error::ExpansionOrder(
                    "inverse would not terminate under the given truncation".into(),
                ));
            }
        }
        let inv0 = C::one() / c0.clone();
        // 1/(c0 (1 + e)) with e = (self - c0)/c0
        let e = self.try_sub(&Self::constant(c0, &self.roster))?.scale(&inv0);
        let minus_e = e.neg();
        let mut acc = Self::one(&self.roster).truncate(trunc);
        let mut power = acc.clone();
        loop {
            power = power.mul_truncated(&minus_e, trunc);
            if power.is_zero() {
                break;
            }
            acc = acc.try_add(&power)?;
        }
        Ok(acc.scale(&inv0))
    }

    /// Canonical JSON value.
    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            vars: self.roster.names().to_vec(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson { coeff: c.to_string(), exp: m.exponents().to_vec() })
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("polynomial serialization")
    }

    pub fn from_json(j: &PolynomialJson) -> Result<Self> {
        let roster = Roster::from_names(&j.vars)?;
        let terms = j
            .terms
            .iter()
            .map(|t| {
                C::parse_exact(&t.coeff)
                    .map(|c| (t.exp.clone(), c))
                    .ok_or_else(|| Error::Parse(format!("bad coefficient {:?}", t.coeff)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(&roster, terms)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: PolynomialJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&j)
    }

    /// Parses the plain-text rendering, e.g. `4*x1^2*x2 - 3/2*beta*x1 + 1`.
    pub fn parse(text: &str, roster: &Arc<Roster>) -> Result<Self> {
        let mut out = Self::zero(roster);
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() || s == "0" {
            return Ok(out);
        }
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut negative = false;
        for (i, ch) in s.chars().enumerate() {
            if ch == '+' || ch == '-' {
                if !cur.is_empty() {
                    chunks.push((negative, std::mem::take(&mut cur)));
                } else if i != 0 {
                    return Err(Error::Parse(format!("dangling sign in {text:?}")));
                }
                negative = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("trailing sign in {text:?}")));
        }
        chunks.push((negative, cur));
        for (neg, chunk) in chunks {
            let mut coeff = C::one();
            let mut e = vec![0u32; roster.len()];
            let factors: Vec<&str> = chunk.split('*').collect();
            let mut i = 0;
            while i < factors.len() {
                let f = factors[i];
                if f.is_empty() {
                    return Err(Error::Parse(format!("empty factor in {chunk:?}")));
                }
                if f.chars().next().unwrap().is_ascii_digit() {
                    coeff = coeff
                        * C::parse_exact(f).ok_or_else(|| Error::Parse(format!("bad number {f:?}")))?;
                } else {
                    let (name, pow) = match f.split_once('^') {
                        Some((n, p)) => (
                            n,
                            p.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in {f:?}")))?,
                        ),
                        None => (f, 1),
                    };
                    let idx = roster
                        .index_of(name)
                        .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
                    e[idx] += pow;
                }
                i += 1;
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(Monomial::new(e), coeff);
        }
        Ok(out)
    }
}

impl<C: Scalar> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let n = &self.roster.names()[i];
                    if e == 1 { n.clone() } else { format!("{n}^{e}") }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<C: Scalar> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.roster.names().join(","), self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $call:ident) => {
        impl<C: Scalar> std::ops::$tr<&Polynomial<C>> for &Polynomial<C> {
            type Output = Polynomial<C>;
            fn $m(self, rhs: &Polynomial<C>) -> Polynomial<C> {
                self.$call(rhs).expect("incompatible polynomial rosters")
            }
        }
        impl<C: Scalar> std::ops::$tr<Polynomial<C>> for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $m(self, rhs: Polynomial<C>) -> Polynomial<C> {
                (&self).$call(&rhs).expect("incompatible polynomial rosters")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<C: Scalar> std::ops::Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial::neg(&self)
    }
}

impl<C: Scalar> CommutativeRing for Polynomial<C> {
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_neg(&self) -> Self {
        Polynomial::neg(self)
    }
    fn ring_zero_like(&self) -> Self {
        Polynomial::zero(&self.roster)
    }
    fn ring_one_like(&self) -> Self {
        Polynomial::one(&self.roster)
    }
    fn ring_is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub exp: Vec<u32>,
}

/// Canonical wire format: `{"vars": [...], "terms": [{"coeff", "exp"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

/// Checked binary arithmetic over possibly different rosters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    Scale,
}

/// `add` and `mul` combine `a` and `b`; `scale` multiplies `a` by the
/// constant polynomial `b` and rejects non-constant `b`.
pub fn poly_arith<C: Scalar>(a: &Polynomial<C>, b: &Polynomial<C>, op: PolyOp) -> Result<Polynomial<C>> {
    match op {
        PolyOp::Add => a.try_add(b),
        PolyOp::Mul => a.try_mul(b),
        PolyOp::Scale => {
            let c = b
                .as_constant()
                .ok_or_else(|| Error::Roster("scale factor must be a constant".into()))?;
            Ok(a.scale(&c))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type P = Polynomial<Rational>;

    fn xy() -> Arc<Roster> {
        Roster::from_names(&["beta", "x", "y"]).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = xy();
        let x = P::var("x", &r).unwrap();
        let y = P::var("y", &r).unwrap();
        let got = &(&x + &y) * &(&x - &y);
        assert_eq!(got, P::parse("x^2 - y^2", &r).unwrap());
    }

    #[test]
    fn zero_absorbs() {
        let r = xy();
        let p = P::parse("3*x*y - beta + 7", &r).unwrap();
        assert!((&p * &P::zero(&r)).is_zero());
    }

    #[test]
    fn square_with_beta() {
        let r = xy();
        let p = P::parse("2*x + beta", &r).unwrap();
        let sq = &p * &p;
        assert_eq!(sq, P::parse("4*x^2 + 4*beta*x + beta^2", &r).unwrap());
    }

    #[test]
    fn mixed_rosters_embed() {
        let a = P::var("x1", &Roster::variables(1)).unwrap();
        let b = P::var("y1", &Roster::prefixed("y", 1)).unwrap();
        let s = poly_arith(&a, &b, PolyOp::Mul).unwrap();
        assert_eq!(s.roster().names(), &["beta", "x1", "y1"]);
        assert_eq!(s.to_string(), "x1*y1");
    }

    #[test]
    fn wrong_arity_rejected() {
        let r = xy();
        assert!(P::from_terms(&r, vec![(vec![1, 0], Rational::from_i64(1))]).is_err());
    }

    #[test]
    fn conflicting_first_variable_rejected() {
        assert!(Roster::from_names(&["x", "beta"]).is_err());
    }

    #[test]
    fn scale_requires_constant() {
        let r = xy();
        let a = P::parse("x + y", &r).unwrap();
        let b = P::parse("x", &r).unwrap();
        assert!(poly_arith(&a, &b, PolyOp::Scale).is_err());
        let half = P::constant(Rational::from_frac(1, 2), &r);
        assert_eq!(poly_arith(&a, &half, PolyOp::Scale).unwrap().to_string(), "1/2*x + 1/2*y");
    }

    #[test]
    fn canonical_order_and_text() {
        let r = Roster::variables(2);
        let p = P::parse("-4*beta*x2^2 + 4*x1^2*x2 - 4*beta*x1^2 + 4*x1*x2^2 - 4*beta*x1*x2", &r).unwrap();
        assert_eq!(
            p.to_string(),
            "4*x1^2*x2 - 4*beta*x1^2 + 4*x1*x2^2 - 4*beta*x1*x2 - 4*beta*x2^2"
        );
        let json = p.to_json_string();
        assert!(json.starts_with("{\"vars\":[\"beta\",\"x1\",\"x2\"],\"terms\":[{\"coeff\":\"4\",\"exp\":[0,2,1]}"));
        assert_eq!(P::from_json_str(&json).unwrap(), p);
    }

    #[test]
    fn inverse_of_one_plus_beta_x() {
        let r = Roster::variables(1);
        let p = P::parse("1 + beta*x1", &r).unwrap();
        let inv = p.inverse_truncated(&Truncation::weight(3)).unwrap();
        assert_eq!(inv, P::parse("1 - beta*x1 + beta^2*x1^2 - beta^3*x1^3", &r).unwrap());
        assert!(P::parse("1 + beta", &r).unwrap().inverse_truncated(&Truncation::weight(3)).is_err());
    }

    #[test]
    fn power_sum_weights() {
        let r = Roster::power_sums(3);
        let p = P::parse("p1*p2 + p3 + beta*p1", &r).unwrap();
        assert_eq!(p.weight_degree(), Some(3));
        assert_eq!(p.truncate(&Truncation::weight(2)).to_string(), "beta*p1");
    }
}
