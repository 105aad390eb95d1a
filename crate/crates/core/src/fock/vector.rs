//! Vectors in the normal-form basis `phi_{n1} ... phi_{nk} |0>` with
//! `n1 > ... > nk >= 0`, coefficients polynomial in beta (and optionally an
//! alphabet), truncated after every product.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{PolynomialJson, Polynomial, Roster, Truncation};
use crate::scalar::Scalar;

/// Whether a vector lives in the Fock space or its dual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Ket,
    Bra,
}

impl Side {
    fn flipped(self) -> Side {
        match self {
            Side::Ket => Side::Bra,
            Side::Bra => Side::Ket,
        }
    }
}

fn parity_sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Left action of `phi_n` on one normal-form basis ket. The image is at most
/// one basis ket times an integer (`+-1` from reordering, `+-2` from a
/// contraction).
pub fn mode_on_basis(n: i64, modes: &[i64]) -> Option<(i64, Vec<i64>)> {
    if n > 0 {
        let pos = modes.iter().position(|&m| m <= n).unwrap_or(modes.len());
        if modes.get(pos) == Some(&n) {
            return None;
        }
        let mut out = modes.to_vec();
        out.insert(pos, n);
        Some((parity_sign(pos as i64), out))
    } else if n == 0 {
        let mut out = modes.to_vec();
        if modes.last() == Some(&0) {
            out.pop();
            Some((parity_sign(out.len() as i64), out))
        } else {
            out.push(0);
            Some((parity_sign(modes.len() as i64), out))
        }
    } else {
        let pos = modes.iter().position(|&m| m == -n)?;
        let mut out = modes.to_vec();
        out.remove(pos);
        Some((2 * parity_sign(n + pos as i64), out))
    }
}

/// `<S*| T>` for basis kets `S`, `T`, by successive reduction.
fn basis_pairing(bra_modes: &[i64], ket_modes: &[i64]) -> i64 {
    let mut coeff = 1;
    let mut state = ket_modes.to_vec();
    for &s in bra_modes {
        match mode_on_basis(-s, &state) {
            Some((c, next)) => {
                coeff *= c * parity_sign(s);
                state = next;
            }
            None => return 0,
        }
    }
    if state.is_empty() {
        coeff
    } else {
        0
    }
}

/// A finite combination of normal-form basis vectors. A bra is stored as the
/// ket it is the `*`-image of.
#[derive(Clone, PartialEq)]
pub struct FockVector<C> {
    roster: Arc<Roster>,
    trunc: Truncation,
    side: Side,
    terms: BTreeMap<Vec<i64>, Polynomial<C>>,
}

impl<C: Scalar> FockVector<C> {
    pub fn zero_in(roster: &Arc<Roster>, trunc: Truncation, side: Side) -> Self {
        FockVector { roster: roster.clone(), trunc, side, terms: BTreeMap::new() }
    }

    pub fn vacuum_in(roster: &Arc<Roster>, trunc: Truncation) -> Self {
        let mut v = Self::zero_in(roster, trunc, Side::Ket);
        v.terms.insert(Vec::new(), Polynomial::one(roster));
        v
    }

    /// `|0>` with coefficients in `Q[beta]/(beta^{k+1})`.
    pub fn vacuum(k: u32) -> Self {
        Self::vacuum_in(&Roster::beta_only(), Truncation::beta(k))
    }

    /// `<0|`.
    pub fn vacuum_bra(k: u32) -> Self {
        Self::vacuum(k).star()
    }

    /// `phi_{w1} ... phi_{wm} |0>` for an arbitrary word of modes.
    pub fn word(word: &[i64], k: u32) -> Self {
        let mut v = Self::vacuum(k);
        for &n in word.iter().rev() {
            v = super::apply_mode(n, &v);
        }
        v
    }

    /// Builds a vector from normal-form terms; sequences that are not
    /// strictly decreasing and non-negative are rejected.
    pub fn from_terms<I>(roster: &Arc<Roster>, trunc: Truncation, side: Side, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Polynomial<C>)>,
    {
        let mut v = Self::zero_in(roster, trunc, side);
        for (modes, c) in terms {
            if !modes.windows(2).all(|w| w[0] > w[1]) || modes.iter().any(|&m| m < 0) {
                return Err(Error::Index(format!("modes {modes:?} are not in normal form")));
            }
            v.accumulate(modes, c.embed(roster)?);
        }
        Ok(v)
    }

    pub fn roster(&self) -> &Arc<Roster> {
        &self.roster
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    /// The beta truncation order `K`, if any.
    pub fn beta_order(&self) -> Option<u32> {
        self.trunc.beta_max
    }

    pub fn side(&self) -> Side {
        self.side
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

    pub fn coefficient(&self, modes: &[i64]) -> Polynomial<C> {
        self.terms.get(modes).cloned().unwrap_or_else(|| Polynomial::zero(&self.roster))
    }

    /// Zero vector on the same side, roster and truncation.
    pub fn zero_like(&self) -> Self {
        Self::zero_in(&self.roster, self.trunc, self.side)
    }

    pub(crate) fn accumulate(&mut self, modes: Vec<i64>, c: Polynomial<C>) {
        let c = c.truncate(&self.trunc);
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&modes) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(modes, sum);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.side != other.side {
            return Err(Error::Shape("cannot combine a bra with a ket".into()));
        }
        if self.roster != other.roster || self.trunc != other.trunc {
            return Err(Error::Roster("vectors use different coefficient rings".into()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale_scalar(&-C::one()))
    }

    pub fn scale_scalar(&self, c: &C) -> Self {
        let mut out = self.zero_like();
        for (m, p) in &self.terms {
            out.accumulate(m.clone(), p.scale(c));
        }
        out
    }

    /// Multiplies every coefficient by `p`, truncating.
    pub fn scale(&self, p: &Polynomial<C>) -> Result<Self> {
        let p = p.embed(&self.roster)?;
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            out.accumulate(m.clone(), c.mul_truncated(&p, &self.trunc));
        }
        Ok(out)
    }

    /// The same vector over a larger coefficient ring.
    pub fn with_ring(&self, roster: &Arc<Roster>, trunc: Truncation) -> Result<Self> {
        let mut out = Self::zero_in(roster, trunc, self.side);
        for (m, c) in &self.terms {
            out.accumulate(m.clone(), c.embed(roster)?);
        }
        Ok(out)
    }

    /// Components with an even number of modes.
    pub fn even_part(&self) -> Self {
        self.filter(|m| m.len() % 2 == 0)
    }

    pub fn odd_part(&self) -> Self {
        self.filter(|m| m.len() % 2 == 1)
    }

    fn filter<F: Fn(&[i64]) -> bool>(&self, keep: F) -> Self {
        let mut out = self.zero_like();
        out.terms = self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect();
        out
    }

    /// The `*` involution; kets and bras are exchanged.
    pub fn star(&self) -> Self {
        FockVector { side: self.side.flipped(), ..self.clone() }
    }

    pub fn to_json(&self) -> FockVectorJson {
        FockVectorJson {
            k: self.trunc.beta_max,
            side: self.side,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| FockTermJson { modes: m.clone(), coeff: c.to_json() })
                .collect(),
        }
    }

    pub fn from_json(j: &FockVectorJson) -> Result<Self> {
        let coeffs = j
            .terms
            .iter()
            .map(|t| Ok((t.modes.clone(), Polynomial::from_json(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        let roster = coeffs.iter().fold(Roster::beta_only(), |r, (_, c)| r.union(c.roster()));
        let trunc = Truncation { beta_max: j.k, weight_max: None };
        Self::from_terms(&roster, trunc, j.side, coeffs)
    }
}

/// `<b|k>`, the vacuum expectation value of a bra against a ket.
pub fn vev<C: Scalar>(bra: &FockVector<C>, ket: &FockVector<C>) -> Result<Polynomial<C>> {
    if bra.side != Side::Bra || ket.side != Side::Ket {
        return Err(Error::Shape("vev expects a bra and a ket".into()));
    }
    let roster = bra.roster.union(&ket.roster);
    let trunc = match (bra.trunc.beta_max, ket.trunc.beta_max) {
        (Some(a), Some(b)) => Truncation { beta_max: Some(a.min(b)), ..ket.trunc },
        (a, b) => Truncation { beta_max: a.or(b), ..ket.trunc },
    };
    let mut acc = Polynomial::zero(&roster);
    for (s, cs) in &bra.terms {
        for (t, ct) in &ket.terms {
            let pairing = basis_pairing(s, t);
            if pairing != 0 {
                let term = cs.embed(&roster)?.mul_truncated(&ct.embed(&roster)?, &trunc);
                acc = &acc + &term.scale(&C::from_i64(pairing));
            }
        }
    }
    Ok(acc)
}

/// Serialized form: `{"K": k, "side": "ket", "terms": [{"modes", "coeff"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockVectorJson {
    #[serde(rename = "K")]
    pub k: Option<u32>,
    #[serde(default = "default_side")]
    pub side: Side,
    pub terms: Vec<FockTermJson>,
}

fn default_side() -> Side {
    Side::Ket
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockTermJson {
    pub modes: Vec<i64>,
    pub coeff: PolynomialJson,
}

fn render_modes(modes: &[i64]) -> String {
    modes.iter().map(|m| format!("phi[{m}]")).collect::<Vec<_>>().join(" ")
}

impl<C: Scalar> fmt::Display for FockVector<C> {
    /// Kets render as `(c) phi[3] phi[1] |0>`; bras are written in plain
    /// modes, `(c) <0| phi[-1] phi[-3]`, with the `*` signs folded in.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| match self.side {
                Side::Ket if m.is_empty() => format!("({c}) |0>"),
                Side::Ket => format!("({c}) {} |0>", render_modes(m)),
                Side::Bra => {
                    let sign: i64 = m.iter().map(|&n| parity_sign(n)).product();
                    let shown: Vec<i64> = m.iter().rev().map(|&n| -n).collect();
                    let c = c.scale(&C::from_i64(sign));
                    let body = render_modes(&shown);
                    if body.is_empty() {
                        format!("({c}) <0|")
                    } else {
                        format!("({c}) <0| {body}")
                    }
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

impl<C: Scalar> fmt::Debug for FockVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FockVector[{:?}]({})", self.side, self)
    }
}
