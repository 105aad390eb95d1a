//! Current operators `b_m = (1/4) sum_i (-1)^i phi_{-i-m} phi_i`, their
//! beta-deformations, and the exponentials of `theta` and `Theta`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::vector::{mode_on_basis, FockVector, Side};
use crate::error::{Error, Result};
use crate::poly::{Polynomial, Roster};
use crate::scalar::{binomial, Scalar};
use crate::symfun::Flavor;

/// `sum c_{m,k} beta^k b_m`, with every `k <= beta_max`.
#[derive(Clone, PartialEq)]
pub struct QuadraticOperator<C> {
    entries: BTreeMap<(i64, u32), C>,
    beta_max: u32,
    tag: String,
}

impl<C: Scalar> QuadraticOperator<C> {
    pub fn zero(beta_max: u32, tag: impl Into<String>) -> Self {
        QuadraticOperator { entries: BTreeMap::new(), beta_max, tag: tag.into() }
    }

    /// The plain current `b_m`.
    pub fn current(m: i64, beta_max: u32) -> Self {
        let mut q = Self::zero(beta_max, format!("b_{m}"));
        q.add_term(m, 0, C::one());
        q
    }

    /// `b^(beta)_m` (flavor Big) or `b^[beta]_m = (b^(beta)_{-m})*` (flavor
    /// Small): `((X - beta/2)^m - (-X - beta/2)^m) / 2` with `X^k -> b_k`,
    /// a polynomial for `m > 0` and a series in `1/X` for `m < 0`.
    pub fn beta_current(flavor: Flavor, m: i64, beta_max: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Index("currents are indexed by nonzero integers".into()));
        }
        if flavor == Flavor::Small {
            let tag = format!("b^[beta]_{m}");
            return Ok(Self::beta_current(Flavor::Big, -m, beta_max)?.star().with_tag(tag));
        }
        let mut q = Self::zero(beta_max, format!("b^(beta)_{m}"));
        // surviving terms: odd k <= m, coefficient binom(m, m-k) (-beta/2)^{m-k}
        let mut j = if m.rem_euclid(2) == 0 { 1 } else { 0 };
        while j <= beta_max as i64 && (m < 0 || j < m) {
            let c = binomial::<C>(m, j as u32) * C::from_frac(-1, 2).powi(j as u32);
            q.add_term(m - j, j as u32, c);
            j += 2;
        }
        Ok(q)
    }

    /// `theta = 2 sum_{n odd} (beta/2)^n b_n / n`.
    pub fn theta(beta_max: u32) -> Self {
        let mut q = Self::zero(beta_max, "theta");
        for n in (1..=beta_max).step_by(2) {
            q.add_term(n as i64, n, C::from_frac(2, n as i64) * C::from_frac(1, 2).powi(n));
        }
        q
    }

    /// `Theta = 2 sum_{n odd} (beta/2)^n b_{-n} / n = theta*`.
    pub fn big_theta(beta_max: u32) -> Self {
        Self::theta(beta_max).star().with_tag("Theta")
    }

    pub fn entries(&self) -> &BTreeMap<(i64, u32), C> {
        &self.entries
    }

    pub fn beta_max(&self) -> u32 {
        self.beta_max
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn coefficient(&self, m: i64, k: u32) -> C {
        self.entries.get(&(m, k)).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, m: i64, k: u32, c: C) {
        if c.is_zero() || k > self.beta_max {
            return;
        }
        let sum = self.entries.remove(&(m, k)).map_or(c.clone(), |old| old + c);
        if !sum.is_zero() {
            self.entries.insert((m, k), sum);
        }
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }

    /// `Q*`, from `b_m* = b_{-m}`.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(self.beta_max, format!("({})*", self.tag));
        for (&(m, k), c) in &self.entries {
            out.add_term(-m, k, c.clone());
        }
        out
    }

    fn current_coefficients(&self, roster: &std::sync::Arc<Roster>) -> BTreeMap<i64, Polynomial<C>> {
        let mut out: BTreeMap<i64, Polynomial<C>> = BTreeMap::new();
        for (&(m, k), c) in &self.entries {
            let mut exps = vec![0; roster.len()];
            exps[0] = k;
            let term = Polynomial::monomial(exps, c.clone(), roster);
            let slot = out.entry(m).or_insert_with(|| Polynomial::zero(roster));
            *slot = &*slot + &term;
        }
        out
    }
}

impl<C: Scalar> fmt::Display for QuadraticOperator<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let roster = Roster::beta_only();
        let parts: Vec<String> =
            self.current_coefficients(&roster).iter().rev().map(|(m, c)| format!("({c})*b[{m}]")).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl<C: Scalar> fmt::Debug for QuadraticOperator<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.tag, self)
    }
}

/// Indices `i` for which `phi_{-i-m} phi_i` can act nontrivially on the
/// basis ket `modes`.
fn contributing_indices(m: i64, modes: &[i64]) -> BTreeSet<i64> {
    let mut out: BTreeSet<i64> = modes.iter().flat_map(|&n| [-n, n - m]).collect();
    out.insert(0);
    if m < 0 {
        out.extend(0..=-m);
    }
    out
}

fn current_on_ket<C: Scalar>(m: i64, v: &FockVector<C>) -> FockVector<C> {
    let quarter = C::from_frac(1, 4);
    let mut out = v.zero_like();
    for (modes, c) in v.terms() {
        for i in contributing_indices(m, modes) {
            let Some((s1, mid)) = mode_on_basis(i, modes) else { continue };
            let Some((s2, image)) = mode_on_basis(-i - m, &mid) else { continue };
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            out.accumulate(image, c.scale(&(quarter.clone() * C::from_i64(sign * s1 * s2))));
        }
    }
    out
}

/// `b_m |v>` for kets, `<v| b_m` for bras.
pub fn apply_current<C: Scalar>(m: i64, v: &FockVector<C>) -> FockVector<C> {
    match v.side() {
        Side::Ket => current_on_ket(m, v),
        // <w*| b_m = (b_{-m} |w>)*
        Side::Bra => current_on_ket(-m, &v.star()).star(),
    }
}

/// `Q |v>` for kets, `<v| Q` for bras.
pub fn apply_quadratic<C: Scalar>(q: &QuadraticOperator<C>, v: &FockVector<C>) -> FockVector<C> {
    let mut out = v.zero_like();
    for (m, c) in q.current_coefficients(v.roster()) {
        let image = apply_current(m, v).scale(&c).expect("coefficient roster");
        for (modes, p) in image.terms() {
            out.accumulate(modes.clone(), p.clone());
        }
    }
    out
}

/// `e^{+-Q}` applied through the exponential series. Every term of `Q` must
/// carry a positive power of beta, so the series stops once the vector's
/// beta truncation is exceeded.
pub fn apply_exp<C: Scalar>(q: &QuadraticOperator<C>, negative: bool, v: &FockVector<C>) -> Result<FockVector<C>> {
    if q.entries.keys().any(|&(_, k)| k == 0) {
        return Err(Error::Operator(format!("{} has a beta-free term; its exponential does not terminate", q.tag)));
    }
    if v.beta_order().is_none() {
        return Err(Error::Operator("exponentials need a beta-truncated vector".into()));
    }
    let mut acc = v.clone();
    let mut term = v.clone();
    let mut j = 1i64;
    loop {
        term = apply_quadratic(q, &term).scale_scalar(&C::from_frac(if negative { -1 } else { 1 }, j));
        if term.is_zero() {
            return Ok(acc);
        }
        acc = acc.try_add(&term)?;
        j += 1;
    }
}

/// `e^{+-theta} |v>` (or `<v| e^{+-theta}`), theta truncated at the vector's order.
pub fn apply_exp_theta<C: Scalar>(negative: bool, v: &FockVector<C>) -> Result<FockVector<C>> {
    let k = v.beta_order().ok_or_else(|| Error::Operator("exponentials need a beta-truncated vector".into()))?;
    apply_exp(&QuadraticOperator::theta(k), negative, v)
}

/// `e^{+-Theta} |v>` (or `<v| e^{+-Theta}`).
pub fn apply_exp_big_theta<C: Scalar>(negative: bool, v: &FockVector<C>) -> Result<FockVector<C>> {
    let k = v.beta_order().ok_or_else(|| Error::Operator("exponentials need a beta-truncated vector".into()))?;
    apply_exp(&QuadraticOperator::big_theta(k), negative, v)
}
