//! Truncated Laurent series in auxiliary variables with polynomial
//! coefficients, expanded in an iterated field with a declared smallness
//! order.
//!
//! Auxiliary variables are listed from largest to smallest; alphabet
//! variables and beta are smaller than all of them. An inverted variable `v`
//! is one whose small quantity is `v^-1`. Exponents are always stored as
//! exponents of `v` itself.
//!
//! A [`SeriesContext`] carries the truncation: a box window per auxiliary
//! variable, optional linear caps mixing auxiliary exponents with the
//! weighted alphabet degree of the coefficient, and a coefficient truncation.
//! Products are truncated eagerly, which is exact whenever every factor only
//! moves terms upward in the capped coordinates. Callers confirm that with
//! [`window_stability_check`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Roster, Truncation};
use crate::scalar::{CommutativeRing, Scalar};

const MAX_GEOMETRIC_TERMS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AuxVar {
    pub name: String,
    pub inverted: bool,
}

impl AuxVar {
    pub fn new(name: &str) -> Self {
        AuxVar { name: name.to_string(), inverted: false }
    }

    pub fn inverted(name: &str) -> Self {
        AuxVar { name: name.to_string(), inverted: true }
    }
}

/// Keeps terms with `aux_weights . e + coeff_weight * wdeg <= max`, where
/// `wdeg` is the weighted alphabet degree of a coefficient monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearCap {
    pub aux_weights: Vec<i64>,
    pub coeff_weight: i64,
    pub max: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesContext {
    coeff_roster: Arc<Roster>,
    aux: Vec<AuxVar>,
    windows: Vec<(i64, i64)>,
    caps: Vec<LinearCap>,
    trunc: Truncation,
}

impl SeriesContext {
    pub fn new(coeff_roster: &Arc<Roster>, aux: Vec<AuxVar>, windows: Vec<(i64, i64)>) -> Result<Self> {
        if aux.len() != windows.len() {
            return Err(Error::Window("one window per auxiliary variable required".into()));
        }
        if let Some((lo, hi)) = windows.iter().find(|(lo, hi)| lo > hi) {
            return Err(Error::Window(format!("empty window [{lo}, {hi}]")));
        }
        for (i, a) in aux.iter().enumerate() {
            if coeff_roster.index_of(&a.name).is_some() || aux[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::Roster(format!("auxiliary name {} clashes", a.name)));
            }
        }
        Ok(SeriesContext { coeff_roster: coeff_roster.clone(), aux, windows, caps: Vec::new(), trunc: Truncation::NONE })
    }

    pub fn with_cap(mut self, cap: LinearCap) -> Result<Self> {
        if cap.aux_weights.len() != self.aux.len() || cap.coeff_weight < 0 {
            return Err(Error::Window("malformed linear cap".into()));
        }
        self.caps.push(cap);
        Ok(self)
    }

    pub fn with_truncation(mut self, trunc: Truncation) -> Self {
        self.trunc = trunc;
        self
    }

    pub fn into_arc(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn coeff_roster(&self) -> &Arc<Roster> {
        &self.coeff_roster
    }

    pub fn aux(&self) -> &[AuxVar] {
        &self.aux
    }

    pub fn aux_len(&self) -> usize {
        self.aux.len()
    }

    pub fn aux_index(&self, name: &str) -> Option<usize> {
        self.aux.iter().position(|a| a.name == name)
    }

    pub fn windows(&self) -> &[(i64, i64)] {
        &self.windows
    }

    pub fn caps(&self) -> &[LinearCap] {
        &self.caps
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    /// Every window, cap and coefficient bound loosened by `pad`.
    pub fn widened(&self, pad: u32) -> Self {
        let p = pad as i64;
        SeriesContext {
            coeff_roster: self.coeff_roster.clone(),
            aux: self.aux.clone(),
            windows: self.windows.iter().map(|(lo, hi)| (lo - p, hi + p)).collect(),
            caps: self
                .caps
                .iter()
                .map(|c| LinearCap { max: c.max + p, ..c.clone() })
                .collect(),
            trunc: Truncation {
                beta_max: self.trunc.beta_max.map(|k| k + pad),
                weight_max: self.trunc.weight_max.map(|d| d + pad),
            },
        }
    }

    /// Common refinement of two contexts over the same auxiliary variables.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if self.aux != other.aux {
            return Err(Error::Window("series over different auxiliary variables".into()));
        }
        let windows = self
            .windows
            .iter()
            .zip(&other.windows)
            .map(|(a, b)| (a.0.max(b.0), a.1.min(b.1)))
            .collect();
        let mut caps = self.caps.clone();
        for c in &other.caps {
            if !caps.contains(c) {
                caps.push(c.clone());
            }
        }
        let min = |a: Option<u32>, b: Option<u32>| match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        Ok(SeriesContext {
            coeff_roster: self.coeff_roster.union(&other.coeff_roster),
            aux: self.aux.clone(),
            windows,
            caps,
            trunc: Truncation {
                beta_max: min(self.trunc.beta_max, other.trunc.beta_max),
                weight_max: min(self.trunc.weight_max, other.trunc.weight_max),
            },
        })
    }

    pub fn in_window(&self, e: &[i64]) -> bool {
        e.len() == self.windows.len() && e.iter().zip(&self.windows).all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// Coefficient truncation admissible at exponent `e`, or `None` when no
    /// coefficient survives there.
    fn admissible(&self, e: &[i64]) -> Option<Truncation> {
        if !self.in_window(e) {
            return None;
        }
        let mut weight_max = self.trunc.weight_max.map(|d| d as i64);
        for cap in &self.caps {
            let used: i64 = cap.aux_weights.iter().zip(e).map(|(w, x)| w * x).sum();
            let room = cap.max - used;
            if room < 0 {
                return None;
            }
            if cap.coeff_weight > 0 {
                let lim = room / cap.coeff_weight;
                weight_max = Some(weight_max.map_or(lim, |d| d.min(lim)));
            }
        }
        Some(Truncation { beta_max: self.trunc.beta_max, weight_max: weight_max.map(|d| d as u32) })
    }

    pub fn zero<C: Scalar>(self: &Arc<Self>) -> NestedLaurentSeries<C> {
        NestedLaurentSeries { ctx: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one<C: Scalar>(self: &Arc<Self>) -> NestedLaurentSeries<C> {
        let mut s = self.zero();
        s.insert(vec![0; self.aux_len()], Polynomial::one(&self.coeff_roster));
        s
    }

    /// Exact Laurent monomial `v_i^k` in this context's variables.
    pub fn aux_monomial<C: Scalar>(&self, i: usize, k: i64) -> LaurentPolynomial<C> {
        let mut e = vec![0; self.aux_len()];
        e[i] = k;
        LaurentPolynomial::monomial(self.aux_len(), &self.coeff_roster, e, Polynomial::one(&self.coeff_roster))
    }

    /// A coefficient polynomial as a Laurent polynomial of auxiliary degree 0.
    pub fn lift<C: Scalar>(&self, p: &Polynomial<C>) -> LaurentPolynomial<C> {
        LaurentPolynomial::monomial(self.aux_len(), &self.coeff_roster, vec![0; self.aux_len()], p.clone())
    }

    pub fn constant<C: Scalar>(&self, c: C) -> LaurentPolynomial<C> {
        self.lift(&Polynomial::constant(c, &self.coeff_roster))
    }
}

/// Finite Laurent polynomial in auxiliary variables; no truncation applied.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPolynomial<C> {
    aux_len: usize,
    roster: Arc<Roster>,
    terms: BTreeMap<Vec<i64>, Polynomial<C>>,
}

impl<C: Scalar> LaurentPolynomial<C> {
    pub fn zero(aux_len: usize, roster: &Arc<Roster>) -> Self {
        LaurentPolynomial { aux_len, roster: roster.clone(), terms: BTreeMap::new() }
    }

    pub fn monomial(aux_len: usize, roster: &Arc<Roster>, e: Vec<i64>, coeff: Polynomial<C>) -> Self {
        assert_eq!(e.len(), aux_len, "auxiliary exponent arity mismatch");
        let mut out = Self::zero(aux_len, roster);
        out.add_term(e, coeff);
        out
    }

    /// Polynomial with no auxiliary variables.
    pub fn from_poly(p: &Polynomial<C>) -> Self {
        Self::monomial(0, p.roster(), Vec::new(), p.clone())
    }

    pub fn aux_len(&self) -> usize {
        self.aux_len
    }

    pub fn roster(&self) -> &Arc<Roster> {
        &self.roster
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Polynomial<C>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[i64]) -> Polynomial<C> {
        self.terms.get(e).cloned().unwrap_or_else(|| Polynomial::zero(&self.roster))
    }

    /// Single-term value with no auxiliary dependence, if any.
    pub fn as_poly(&self) -> Option<Polynomial<C>> {
        match self.terms.len() {
            0 => Some(Polynomial::zero(&self.roster)),
            1 => {
                let (e, p) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| p.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, e: Vec<i64>, p: Polynomial<C>) {
        if p.is_zero() {
            return;
        }
        let p = if p.roster() == &self.roster {
            p
        } else {
            self.rebase(&self.roster.union(p.roster()));
            p.embed(&self.roster).expect("union roster contains every variable")
        };
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = &*v + &p;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, p);
            }
        }
    }

    fn rebase(&mut self, roster: &Arc<Roster>) {
        if &self.roster == roster {
            return;
        }
        self.terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(e, p)| (e, p.embed(roster).expect("union roster contains every variable")))
            .collect();
        self.roster = roster.clone();
    }

    fn check_arity(&self, other: &Self) {
        assert_eq!(self.aux_len, other.aux_len, "auxiliary arity mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_arity(other);
        let mut out = self.clone();
        for (e, p) in &other.terms {
            out.add_term(e.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.aux_len, &self.roster);
        for (e, p) in &self.terms {
            out.add_term(e.clone(), p.scale(c));
        }
        out
    }

    pub fn mul_poly(&self, q: &Polynomial<C>) -> Self {
        let mut out = Self::zero(self.aux_len, &self.roster);
        for (e, p) in &self.terms {
            out.add_term(e.clone(), p * q);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_arity(other);
        let mut out = Self::zero(self.aux_len, &self.roster.union(&other.roster));
        for (ea, pa) in &self.terms {
            for (eb, pb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, pa * pb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::monomial(self.aux_len, &self.roster, vec![0; self.aux_len], Polynomial::one(&self.roster));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by the monomial `v^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        LaurentPolynomial {
            aux_len: self.aux_len,
            roster: self.roster.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, p)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), p.clone()))
                .collect(),
        }
    }

    /// Leading term under the smallness order of `aux`: returns the exponent
    /// and the rational coefficient, which must be a nonzero constant.
    pub fn leading_term(&self, aux: &[AuxVar]) -> Result<(Vec<i64>, C)> {
        type Key = (u32, u32, Vec<i64>);
        let mut best: Option<(Key, Vec<i64>, crate::poly::Monomial, C)> = None;
        for (e, p) in &self.terms {
            for (m, c) in p.terms() {
                let aux_key: Vec<i64> = (0..self.aux_len)
                    .rev()
                    .map(|i| if aux[i].inverted { -e[i] } else { e[i] })
                    .collect();
                let key = (m.weight(&self.roster), m.beta(), aux_key);
                if best.as_ref().is_none_or(|b| key < b.0) {
                    best = Some((key, e.clone(), m.clone(), c.clone()));
                }
            }
        }
        let (_, e, m, c) = best.ok_or_else(|| Error::ExpansionOrder("cannot invert zero".into()))?;
        if m.degree() != 0 {
            return Err(Error::ExpansionOrder(format!(
                "leading term has non-constant coefficient ({})",
                Polynomial::monomial(m.exponents().to_vec(), c, &self.roster)
            )));
        }
        Ok((e, c))
    }

    /// Reads `2*z^-2*w + beta*w^3 - 1/2`, with auxiliary names taken from
    /// `aux` and coefficient variables from `roster`.
    pub fn parse(text: &str, aux: &[AuxVar], roster: &Arc<Roster>) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = Self::zero(aux.len(), roster);
        if s.is_empty() || s == "0" {
            return Ok(out);
        }
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut negative = false;
        let mut prev = '\0';
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && prev != '^' {
                if !cur.is_empty() {
                    chunks.push((negative, std::mem::take(&mut cur)));
                } else if !chunks.is_empty() || prev != '\0' {
                    return Err(Error::Parse(format!("dangling sign in {text:?}")));
                }
                negative = ch == '-';
            } else {
                cur.push(ch);
            }
            prev = ch;
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("trailing sign in {text:?}")));
        }
        chunks.push((negative, cur));
        for (neg, chunk) in chunks {
            let mut coeff = C::one();
            let mut e = vec![0i64; aux.len()];
            let mut m = vec![0u32; roster.len()];
            for f in chunk.split('*') {
                if f.is_empty() {
                    return Err(Error::Parse(format!("empty factor in {chunk:?}")));
                }
                if f.starts_with(|c: char| c.is_ascii_digit()) {
                    coeff = coeff * C::parse_exact(f).ok_or_else(|| Error::Parse(format!("bad number {f:?}")))?;
                    continue;
                }
                let (name, pow) = match f.split_once('^') {
                    Some((n, p)) => (n, p.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in {f:?}")))?),
                    None => (f, 1),
                };
                if let Some(i) = aux.iter().position(|a| a.name == name) {
                    e[i] += pow;
                } else if let Some(i) = roster.index_of(name) {
                    if pow < 0 {
                        return Err(Error::Parse(format!("negative power of coefficient variable {name}")));
                    }
                    m[i] += pow as u32;
                } else {
                    return Err(Error::Parse(format!("unknown variable {name:?}")));
                }
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(e, Polynomial::monomial(m, coeff, roster));
        }
        Ok(out)
    }

    /// Renders with auxiliary names from `aux`.
    pub fn display_with(&self, aux: &[AuxVar]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, p) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| if k == 1 { aux[i].name.clone() } else { format!("{}^{}", aux[i].name, k) })
                .collect();
            let coeff = if p.len() > 1 { format!("({p})") } else { p.to_string() };
            parts.push(if mono.is_empty() {
                coeff
            } else if coeff == "1" {
                mono.join("*")
            } else if coeff == "-1" {
                format!("-{}", mono.join("*"))
            } else {
                format!("{coeff}*{}", mono.join("*"))
            });
        }
        parts.join(" + ")
    }
}

impl<C: Scalar> fmt::Debug for LaurentPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let aux: Vec<AuxVar> = (1..=self.aux_len).map(|i| AuxVar::new(&format!("v{i}"))).collect();
        write!(f, "LaurentPolynomial({})", self.display_with(&aux))
    }
}

impl<C: Scalar> CommutativeRing for LaurentPolynomial<C> {
    fn ring_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    fn ring_zero_like(&self) -> Self {
        Self::zero(self.aux_len, &self.roster)
    }
    fn ring_one_like(&self) -> Self {
        Self::monomial(self.aux_len, &self.roster, vec![0; self.aux_len], Polynomial::one(&self.roster))
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
}

/// Truncated series living in a fixed [`SeriesContext`].
#[derive(Clone)]
pub struct NestedLaurentSeries<C> {
    ctx: Arc<SeriesContext>,
    terms: BTreeMap<Vec<i64>, Polynomial<C>>,
}

impl<C: Scalar> PartialEq for NestedLaurentSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<C: Scalar> NestedLaurentSeries<C> {
    pub fn context(&self) -> &Arc<SeriesContext> {
        &self.ctx
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

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Polynomial<C>)> {
        self.terms.iter()
    }

    fn insert(&mut self, e: Vec<i64>, p: Polynomial<C>) {
        let Some(tr) = self.ctx.admissible(&e) else { return };
        let p = p.truncate(&tr);
        if p.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = &*v + &p;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, p);
            }
        }
    }

    /// Truncates an exact Laurent polynomial into the context.
    pub fn from_laurent(lp: &LaurentPolynomial<C>, ctx: &Arc<SeriesContext>) -> Result<Self> {
        if lp.aux_len() != ctx.aux_len() {
            return Err(Error::Window("auxiliary arity mismatch".into()));
        }
        let mut s = ctx.zero();
        for (e, p) in lp.terms() {
            s.insert(e.clone(), p.embed(&ctx.coeff_roster)?);
        }
        Ok(s)
    }

    pub fn to_laurent(&self) -> LaurentPolynomial<C> {
        let mut out = LaurentPolynomial::zero(self.ctx.aux_len(), &self.ctx.coeff_roster);
        for (e, p) in &self.terms {
            out.add_term(e.clone(), p.clone());
        }
        out
    }

    fn unify(&self, other: &Self) -> Result<(Self, Self)> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            return Ok((self.clone(), other.clone()));
        }
        let ctx = Arc::new(self.ctx.intersect(&other.ctx)?);
        Ok((Self::from_laurent(&self.to_laurent(), &ctx)?, Self::from_laurent(&other.to_laurent(), &ctx)?))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (mut a, b) = self.unify(other)?;
        for (e, p) in b.terms {
            a.insert(e, p);
        }
        Ok(a)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.unify(other)?;
        let mut out = a.ctx.zero();
        for (ea, pa) in &a.terms {
            for (eb, pb) in &b.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let Some(tr) = a.ctx.admissible(&e) else { continue };
                let prod = pa.mul_truncated(pb, &tr);
                if !prod.is_zero() {
                    out.insert(e, prod);
                }
            }
        }
        Ok(out)
    }

    /// Sum; panics if the contexts have different auxiliary variables.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("incompatible series contexts")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product; panics if the contexts have different auxiliary variables.
    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("incompatible series contexts")
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = self.ctx.zero();
        for (e, p) in &self.terms {
            out.insert(e.clone(), p.scale(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn mul_laurent(&self, lp: &LaurentPolynomial<C>) -> Result<Self> {
        self.try_mul(&Self::from_laurent(lp, &self.ctx)?)
    }

    /// `exp(self)`; the series must have no constant term.
    pub fn exp(&self) -> Result<Self> {
        let origin = vec![0; self.ctx.aux_len()];
        if let Some(p) = self.terms.get(&origin) {
            if !p.constant_term().is_zero() {
                return Err(Error::ExpansionOrder("exp of a series with nonzero constant term".into()));
            }
        }
        let mut acc = self.ctx.one();
        let mut term = acc.clone();
        for n in 1..=MAX_GEOMETRIC_TERMS {
            term = term.mul(self).scale(&(C::one() / C::from_i64(n as i64)));
            if term.is_zero() {
                return Ok(acc);
            }
            acc = acc.add(&term);
        }
        Err(Error::ExpansionOrder("exponential does not terminate in the window".into()))
    }

    /// Exact coefficient at `e`; exponents outside the window are an error.
    pub fn coefficient(&self, e: &[i64]) -> Result<Polynomial<C>> {
        if !self.ctx.in_window(e) {
            return Err(Error::Window(format!("exponent {e:?} outside window {:?}", self.ctx.windows)));
        }
        Ok(self.terms.get(e).cloned().unwrap_or_else(|| Polynomial::zero(&self.ctx.coeff_roster)))
    }

    /// All terms whose exponent of variable `var` equals `k`.
    pub fn slice(&self, var: usize, k: i64) -> Result<LaurentPolynomial<C>> {
        let (lo, hi) = self.ctx.windows[var];
        if k < lo || k > hi {
            return Err(Error::Window(format!("exponent {k} outside window [{lo}, {hi}]")));
        }
        let mut out = LaurentPolynomial::zero(self.ctx.aux_len(), &self.ctx.coeff_roster);
        for (e, p) in self.terms.iter().filter(|(e, _)| e[var] == k) {
            out.add_term(e.clone(), p.clone());
        }
        Ok(out)
    }

    /// Terms of total auxiliary degree `|e|_1 <= d`.
    pub fn up_to_total_degree(&self, d: i64) -> LaurentPolynomial<C> {
        let mut out = LaurentPolynomial::zero(self.ctx.aux_len(), &self.ctx.coeff_roster);
        for (e, p) in self.terms.iter().filter(|(e, _)| e.iter().map(|x| x.abs()).sum::<i64>() <= d) {
            out.add_term(e.clone(), p.clone());
        }
        out
    }
}

impl<C: Scalar> fmt::Debug for NestedLaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NestedLaurentSeries({})", self.to_laurent().display_with(&self.ctx.aux))
    }
}

impl<C: Scalar> fmt::Display for NestedLaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_laurent().display_with(&self.ctx.aux))
    }
}

impl<C: Scalar> CommutativeRing for NestedLaurentSeries<C> {
    fn ring_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    fn ring_zero_like(&self) -> Self {
        self.ctx.zero()
    }
    fn ring_one_like(&self) -> Self {
        self.ctx.one()
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
}

/// Expands `num / den` in the context: `den` is split as `L (1 + eps)` with
/// `L` its leading monomial, and the result is `num L^-1 sum (-eps)^k`.
pub fn expand_ratio<C: Scalar>(
    num: &LaurentPolynomial<C>,
    den: &LaurentPolynomial<C>,
    ctx: &Arc<SeriesContext>,
) -> Result<NestedLaurentSeries<C>> {
    let (e0, c0) = den.leading_term(&ctx.aux)?;
    let neg_shift: Vec<i64> = e0.iter().map(|x| -x).collect();
    let inv = C::one() / c0;
    let head = NestedLaurentSeries::from_laurent(&num.shift(&neg_shift).scale(&inv), ctx)?;
    let one = ctx.constant(C::one());
    let eps = den.shift(&neg_shift).scale(&inv).sub(&one);
    for (e, p) in eps.terms() {
        if e.iter().any(|&x| x != 0) {
            continue;
        }
        for (m, _) in p.terms() {
            let weighted = m.weight(p.roster()) > 0;
            if !weighted && ctx.trunc.beta_max.is_none() {
                return Err(Error::ExpansionOrder(format!("pure beta correction {p} in denominator")));
            }
            if weighted && ctx.trunc.weight_max.is_none() && !ctx.caps.iter().any(|c| c.coeff_weight > 0) {
                return Err(Error::ExpansionOrder(format!("unbounded alphabet correction {p} in denominator")));
            }
        }
    }
    let step = NestedLaurentSeries::from_laurent(&eps.neg(), ctx)?;
    let mut acc = head.clone();
    let mut power = head;
    for _ in 0..MAX_GEOMETRIC_TERMS {
        power = power.mul(&step);
        if power.is_zero() {
            return Ok(acc);
        }
        acc = acc.add(&power);
    }
    Err(Error::ExpansionOrder("geometric series does not terminate in the window".into()))
}

/// Expansion of `1/f`.
pub fn expand_inverse_factor<C: Scalar>(
    f: &LaurentPolynomial<C>,
    ctx: &Arc<SeriesContext>,
) -> Result<NestedLaurentSeries<C>> {
    expand_ratio(&ctx.constant(C::one()), f, ctx)
}

/// Rebuilds with every bound widened by `pad` and reports whether the
/// coefficient at `e` is unchanged (after truncating back to the original
/// coefficient bound).
pub fn window_stability_check<C, F>(build: F, ctx: &SeriesContext, e: &[i64], pad: u32) -> Result<bool>
where
    C: Scalar,
    F: Fn(&Arc<SeriesContext>) -> Result<NestedLaurentSeries<C>>,
{
    let narrow = build(&Arc::new(ctx.clone()))?.coefficient(e)?;
    let wide = build(&Arc::new(ctx.widened(pad)))?.coefficient(e)?;
    Ok(wide.truncate(&ctx.trunc) == narrow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_group::{ominus, oplus};
    use crate::Rational;

    type Q = Rational;

    fn zw_ctx(inverted: bool, lo: i64, hi: i64) -> Arc<SeriesContext> {
        let aux = if inverted {
            vec![AuxVar::inverted("w"), AuxVar::inverted("z")]
        } else {
            vec![AuxVar::new("z"), AuxVar::new("w")]
        };
        let r = Roster::beta_only();
        SeriesContext::new(&r, aux, vec![(lo, hi), (lo, hi)]).unwrap().into_arc()
    }

    #[test]
    fn one_over_two_plus_beta_z() {
        let r = Roster::beta_only();
        let ctx = SeriesContext::new(&r, vec![AuxVar::new("z")], vec![(0, 3)]).unwrap().into_arc();
        let den = ctx.constant(Q::from_i64(2)).add(&ctx.aux_monomial(0, 1).mul_poly(&Polynomial::beta(&r)));
        let s = expand_inverse_factor(&den, &ctx).unwrap();
        let want = LaurentPolynomial::parse("1/2 - 1/4*beta*z + 1/8*beta^2*z^2 - 1/16*beta^3*z^3", ctx.aux(), &r).unwrap();
        assert_eq!(s.to_laurent(), want);
    }

    #[test]
    fn two_point_ratio_w_below_z() {
        let ctx = zw_ctx(false, -2, 2);
        let z = ctx.aux_monomial::<Q>(0, 1);
        let w = ctx.aux_monomial::<Q>(1, 1);
        let s = expand_ratio(&z.sub(&w), &oplus(&z, &w), &ctx).unwrap();
        let want = LaurentPolynomial::parse(
            "1 - 2*z^-1*w - beta*w + 2*z^-2*w^2 + 3*beta*z^-1*w^2 + beta^2*w^2",
            ctx.aux(),
            ctx.coeff_roster(),
        )
        .unwrap();
        assert_eq!(s.slice(1, 0).unwrap().add(&s.slice(1, 1).unwrap()).add(&s.slice(1, 2).unwrap()), want);
    }

    #[test]
    fn two_point_ratio_inverted() {
        let ctx = zw_ctx(true, -2, 2);
        let wi = ctx.aux_monomial::<Q>(0, -1);
        let zi = ctx.aux_monomial::<Q>(1, -1);
        let s = expand_ratio(&wi.sub(&zi), &oplus(&wi, &zi), &ctx).unwrap();
        let got = s.slice(1, 0).unwrap().add(&s.slice(1, -1).unwrap()).add(&s.slice(1, -2).unwrap());
        let want = LaurentPolynomial::parse(
            "1 - 2*w*z^-1 - beta*z^-1 + 2*w^2*z^-2 + 3*beta*w*z^-2 + beta^2*z^-2",
            ctx.aux(),
            ctx.coeff_roster(),
        )
        .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn out_of_window_coefficient_is_error() {
        let ctx = zw_ctx(false, 0, 2);
        let s: NestedLaurentSeries<Q> = ctx.one();
        assert!(s.coefficient(&[0, 3]).is_err());
        assert_eq!(s.coefficient(&[0, 0]).unwrap().to_string(), "1");
    }

    #[test]
    fn pure_beta_denominator_rejected() {
        let ctx = zw_ctx(false, 0, 2);
        let den = ctx.constant(Q::from_i64(1)).add(&ctx.lift(&Polynomial::beta(ctx.coeff_roster())));
        assert!(matches!(expand_inverse_factor(&den, &ctx), Err(Error::ExpansionOrder(_))));
    }

    #[test]
    fn ominus_of_equal_is_zero() {
        let ctx = zw_ctx(false, 0, 2);
        let z = ctx.aux_monomial::<Q>(0, 1);
        assert!(ominus(&z, &z).num.is_zero());
    }
}
