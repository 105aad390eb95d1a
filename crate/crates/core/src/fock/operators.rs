//! Linear combinations of fermion modes with beta-polynomial coefficients:
//! the plain modes and the four beta-deformed families.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::vector::{mode_on_basis, FockVector, Side};
use crate::error::{Error, Result};
use crate::poly::{Polynomial, Roster};
use crate::scalar::{binomial, Scalar};

/// `<v| phi_n` for bras, `phi_n |v>` for kets.
pub fn apply_mode<C: Scalar>(n: i64, v: &FockVector<C>) -> FockVector<C> {
    // <w*| phi_n = ((-1)^n phi_{-n} |w>)*
    let (m, sign) = match v.side() {
        Side::Ket => (n, 1),
        Side::Bra => (-n, if n.rem_euclid(2) == 0 { 1 } else { -1 }),
    };
    let mut out = v.zero_like();
    for (modes, c) in v.terms() {
        if let Some((s, image)) = mode_on_basis(m, modes) {
            out.accumulate(image, c.scale(&C::from_i64(s * sign)));
        }
    }
    out
}

/// The four beta-deformed fermion families: `phi^(beta)`, `phi^[beta]`,
/// `Phi^(beta)`, `Phi^[beta]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeformedKind {
    #[serde(rename = "phiG")]
    PhiRound,
    #[serde(rename = "phig")]
    PhiSquare,
    #[serde(rename = "PhiG")]
    CapPhiRound,
    #[serde(rename = "Phig")]
    CapPhiSquare,
}

impl DeformedKind {
    pub const ALL: [DeformedKind; 4] =
        [DeformedKind::PhiRound, DeformedKind::PhiSquare, DeformedKind::CapPhiRound, DeformedKind::CapPhiSquare];

    pub fn symbol(self) -> &'static str {
        match self {
            DeformedKind::PhiRound => "phi^(beta)",
            DeformedKind::PhiSquare => "phi^[beta]",
            DeformedKind::CapPhiRound => "Phi^(beta)",
            DeformedKind::CapPhiSquare => "Phi^[beta]",
        }
    }
}

impl FromStr for DeformedKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phiG" => Ok(DeformedKind::PhiRound),
            "phig" => Ok(DeformedKind::PhiSquare),
            "PhiG" => Ok(DeformedKind::CapPhiRound),
            "Phig" => Ok(DeformedKind::CapPhiSquare),
            _ => Err(Error::Parse(format!("unknown fermion kind {s:?} (expected phiG, phig, PhiG or Phig)"))),
        }
    }
}

/// `sum c_{n,k} beta^k phi_n`, with every `k <= beta_max`.
#[derive(Clone, PartialEq)]
pub struct OperatorExpansion<C> {
    entries: BTreeMap<(i64, u32), C>,
    beta_max: u32,
    exact: bool,
    tag: String,
}

impl<C: Scalar> OperatorExpansion<C> {
    pub fn zero(beta_max: u32, tag: impl Into<String>) -> Self {
        OperatorExpansion { entries: BTreeMap::new(), beta_max, exact: true, tag: tag.into() }
    }

    /// The plain mode `phi_n`.
    pub fn mode(n: i64, beta_max: u32) -> Self {
        let mut op = Self::zero(beta_max, format!("phi_{n}"));
        op.add_term(n, 0, C::one());
        op
    }

    pub fn entries(&self) -> &BTreeMap<(i64, u32), C> {
        &self.entries
    }

    pub fn beta_max(&self) -> u32 {
        self.beta_max
    }

    /// True when no term was dropped by the beta truncation.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn coefficient(&self, n: i64, k: u32) -> C {
        self.entries.get(&(n, k)).cloned().unwrap_or_else(C::zero)
    }

    /// Adds `c beta^k phi_n`; terms beyond the truncation are dropped.
    pub fn add_term(&mut self, n: i64, k: u32, c: C) {
        if c.is_zero() {
            return;
        }
        if k > self.beta_max {
            self.exact = false;
            return;
        }
        let sum = self.entries.remove(&(n, k)).map_or(c.clone(), |old| old + c);
        if !sum.is_zero() {
            self.entries.insert((n, k), sum);
        }
    }

    /// Adds `c beta^shift * other`.
    pub fn add_scaled(&mut self, other: &Self, shift: u32, c: &C) {
        self.exact &= other.exact;
        for (&(n, k), a) in &other.entries {
            self.add_term(n, k + shift, a.clone() * c.clone());
        }
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }

    /// `A*`, from `phi_n* = (-1)^n phi_{-n}`.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(self.beta_max, format!("({})*", self.tag));
        out.exact = self.exact;
        for (&(n, k), c) in &self.entries {
            let c = if n.rem_euclid(2) == 0 { c.clone() } else { -c.clone() };
            out.add_term(-n, k, c);
        }
        out
    }

    /// The `beta = 0` slice as mode coefficients.
    pub fn at_beta_zero(&self) -> BTreeMap<i64, C> {
        self.entries.iter().filter(|((_, k), _)| *k == 0).map(|(&(n, _), c)| (n, c.clone())).collect()
    }

    /// Mode coefficients as beta-polynomials over `roster`.
    pub fn mode_coefficients(&self, roster: &std::sync::Arc<Roster>) -> BTreeMap<i64, Polynomial<C>> {
        let mut out: BTreeMap<i64, Polynomial<C>> = BTreeMap::new();
        for (&(n, k), c) in &self.entries {
            let mut exps = vec![0; roster.len()];
            exps[0] = k;
            let term = Polynomial::monomial(exps, c.clone(), roster);
            let slot = out.entry(n).or_insert_with(|| Polynomial::zero(roster));
            *slot = &*slot + &term;
        }
        out
    }

    fn max_abs_mode(&self) -> i64 {
        self.entries.keys().map(|(n, _)| n.abs()).max().unwrap_or(0)
    }
}

impl<C: Scalar> fmt::Display for OperatorExpansion<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let roster = Roster::beta_only();
        let parts: Vec<String> =
            self.mode_coefficients(&roster).iter().rev().map(|(n, c)| format!("({c})*phi[{n}]")).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl<C: Scalar> fmt::Debug for OperatorExpansion<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.tag, self)
    }
}

fn half_power<C: Scalar>(j: u32, sign: i64) -> C {
    C::from_frac(sign, 2).powi(j)
}

/// `(1/2)(-1/2)^i`, the coefficients of `1/(2 + beta z)`.
fn cap_weight<C: Scalar>(i: u32) -> C {
    half_power::<C>(i, -1) * C::from_frac(1, 2)
}

/// The mode `n` of a deformed family, truncated at `beta^k`. The expansions
/// of `phi^(beta)_{-n}`, `phi^[beta]_n` (`n > 0`) and of `Phi^(beta)_{-n}`,
/// `Phi^[beta]_n` (`n >= 0`, tail summed into a `phi_0` term) are finite.
pub fn deformed_mode<C: Scalar>(kind: DeformedKind, n: i64, k: u32) -> OperatorExpansion<C> {
    let mut op = OperatorExpansion::zero(k, format!("{}_{n}", kind.symbol()));
    match kind {
        DeformedKind::PhiRound if n >= 0 => {
            // sum_m phi_m (z + beta/2)^m
            for j in 0..=k {
                op.add_term(n + j as i64, j, binomial::<C>(n + j as i64, j) * half_power(j, 1));
            }
            op.exact = false;
        }
        DeformedKind::PhiRound => {
            // sum_m phi_{-m} (w / (1 + beta w / 2))^m, w = 1/z
            let a = -n;
            for m in 1..=a {
                let j = (a - m) as u32;
                op.add_term(-m, j, binomial::<C>(-m, j) * half_power(j, 1));
            }
        }
        DeformedKind::PhiSquare if n > 0 => {
            for m in 1..=n {
                let j = (n - m) as u32;
                op.add_term(m, j, binomial::<C>(-m, j) * half_power(j, 1));
            }
        }
        DeformedKind::PhiSquare => {
            let a = -n;
            for j in 0..=k {
                op.add_term(-(a + j as i64), j, binomial::<C>(a + j as i64, j) * half_power(j, 1));
            }
            op.exact = false;
        }
        DeformedKind::CapPhiRound if n <= 0 => {
            let a = (-n) as u32;
            for i in 0..a {
                op.add_scaled(&deformed_mode(DeformedKind::PhiRound, n + i as i64, k), i, &cap_weight::<C>(i));
            }
            op.add_term(0, a, cap_weight::<C>(a));
        }
        DeformedKind::CapPhiRound => {
            for i in 0..=k {
                op.add_scaled(&deformed_mode(DeformedKind::PhiRound, n + i as i64, k), i, &cap_weight::<C>(i));
            }
            op.exact = false;
        }
        DeformedKind::CapPhiSquare if n >= 0 => {
            let a = n as u32;
            for i in 0..a {
                op.add_scaled(&deformed_mode(DeformedKind::PhiSquare, n - i as i64, k), i, &cap_weight::<C>(i));
            }
            op.add_term(0, a, cap_weight::<C>(a));
        }
        DeformedKind::CapPhiSquare => {
            for i in 0..=k {
                op.add_scaled(&deformed_mode(DeformedKind::PhiSquare, n - i as i64, k), i, &cap_weight::<C>(i));
            }
            op.exact = false;
        }
    }
    op
}

/// The defining series `sum_i (1/2)(-beta/2)^i phi^(beta)_{n+i}` (resp.
/// `phi^[beta]_{n-i}`) of the capital families, truncated at `beta^k`
/// without the closed-form tail.
pub fn capital_series<C: Scalar>(kind: DeformedKind, n: i64, k: u32) -> Result<OperatorExpansion<C>> {
    let (base, step) = match kind {
        DeformedKind::CapPhiRound => (DeformedKind::PhiRound, 1),
        DeformedKind::CapPhiSquare => (DeformedKind::PhiSquare, -1),
        _ => return Err(Error::Operator(format!("{} is not a capital family", kind.symbol()))),
    };
    let mut op = OperatorExpansion::zero(k, format!("{}_{n}", kind.symbol()));
    for i in 0..=k {
        op.add_scaled(&deformed_mode(base, n + step * i as i64, k), i, &cap_weight::<C>(i));
    }
    op.exact = false;
    Ok(op)
}

/// `A |v>` for kets, `<v| A` for bras.
pub fn apply_operator<C: Scalar>(a: &OperatorExpansion<C>, v: &FockVector<C>) -> FockVector<C> {
    let mut out = v.zero_like();
    for (n, c) in a.mode_coefficients(v.roster()) {
        let image = apply_mode(n, v).scale(&c).expect("coefficient roster");
        for (m, p) in image.terms() {
            out.accumulate(m.clone(), p.clone());
        }
    }
    out
}

/// Kets on which anti-commutators are tested by default: `|0>`, `phi_0|0>`,
/// `phi_a|0>`, `phi_a phi_0|0>` and `phi_a phi_b|0>` for `L >= a > b >= 1`.
pub fn default_test_kets<C: Scalar>(max_mode: i64, k: u32) -> Vec<FockVector<C>> {
    let mut kets = vec![FockVector::vacuum(k), FockVector::word(&[0], k)];
    for a in 1..=max_mode {
        kets.push(FockVector::word(&[a], k));
        kets.push(FockVector::word(&[a, 0], k));
        for b in 1..a {
            kets.push(FockVector::word(&[a, b], k));
        }
    }
    kets
}

/// The scalar `c` with `[A*, B]_+ = c` on every given ket. The first ket is
/// used to read off `c` and must have a nonzero vacuum coefficient.
pub fn anticommutator_on<C: Scalar>(
    a: &OperatorExpansion<C>,
    b: &OperatorExpansion<C>,
    kets: &[FockVector<C>],
) -> Result<Polynomial<C>> {
    let a_star = a.star();
    let act = |v: &FockVector<C>| -> Result<FockVector<C>> {
        apply_operator(&a_star, &apply_operator(b, v)).try_add(&apply_operator(b, &apply_operator(&a_star, v)))
    };
    let first = kets.first().ok_or_else(|| Error::Operator("no test kets".into()))?;
    let c = act(first)?.coefficient(&[]);
    if first.coefficient(&[]) != Polynomial::one(first.roster()) {
        return Err(Error::Operator("first test ket must be the vacuum".into()));
    }
    for v in kets {
        if act(v)? != v.scale(&c)? {
            return Err(Error::Operator(format!("[({})*, {}]_+ is not scalar", a.tag, b.tag)));
        }
    }
    Ok(c)
}

/// `[A*, B]_+` as a scalar mod `beta^{K+1}`, tested on [`default_test_kets`].
pub fn anticommutator_check<C: Scalar>(a: &OperatorExpansion<C>, b: &OperatorExpansion<C>) -> Result<Polynomial<C>> {
    if a.beta_max != b.beta_max {
        return Err(Error::Operator("operands are truncated at different beta orders".into()));
    }
    let reach = a.max_abs_mode().max(b.max_abs_mode()) + 1;
    anticommutator_on(a, b, &default_test_kets(reach, a.beta_max))
}
