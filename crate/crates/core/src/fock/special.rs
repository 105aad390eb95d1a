//! The special vectors realizing `GQ`, `GP`, `gq`, `gp`, the dual pairings
//! used to prove their duality, and the evaluation maps to symmetric
//! functions.

use std::collections::HashMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::currents::{apply_exp_big_theta, apply_exp_theta};
use super::operators::{apply_mode, apply_operator, deformed_mode, DeformedKind};
use super::vector::{vev, FockVector};
use crate::error::{Error, Result};
use crate::genfun::Alphabet;
use crate::partition::{IndexVector, StrictPartition};
use crate::poly::{Polynomial, Truncation};
use crate::scalar::Scalar;
use crate::symfun::{q_beta, Flavor};

/// Which family a special ket realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpecialKind {
    #[serde(rename = "Q")]
    BigQ,
    #[serde(rename = "P")]
    BigP,
    #[serde(rename = "q")]
    SmallQ,
    #[serde(rename = "p")]
    SmallP,
}

impl FromStr for SpecialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Q" | "GQ" => Ok(SpecialKind::BigQ),
            "P" | "GP" => Ok(SpecialKind::BigP),
            "q" | "gq" => Ok(SpecialKind::SmallQ),
            "p" | "gp" => Ok(SpecialKind::SmallP),
            _ => Err(Error::Parse(format!("unknown ket kind {s:?} (expected Q, P, q or p)"))),
        }
    }
}

/// `c * beta^j` over the vector's roster.
fn beta_monomial<C: Scalar>(v: &FockVector<C>, j: u32, c: C) -> Polynomial<C> {
    let mut exps = vec![0; v.roster().len()];
    exps[0] = j;
    Polynomial::monomial(exps, c, v.roster())
}

/// `Phi^[beta]_n - (1/2)(-beta/2)^n` applied to `v`.
fn shifted_cap_phi<C: Scalar>(n: i64, v: &FockVector<C>, k: u32) -> Result<FockVector<C>> {
    let shift = beta_monomial(v, n as u32, C::from_frac(1, 2) * C::from_frac(-1, 2).powi(n as u32));
    apply_operator(&deformed_mode(DeformedKind::CapPhiSquare, n, k), v).try_sub(&v.scale(&shift)?)
}

/// `X_1 E X_2 E ... X_r E v`, where `X_i` is the deformed mode chosen by
/// `factor(i)` and `E` is the exponential after each factor.
fn interleave<C: Scalar>(
    v: FockVector<C>,
    factors: &[(DeformedKind, i64)],
    k: u32,
    exp: impl Fn(&FockVector<C>) -> Result<FockVector<C>>,
) -> Result<FockVector<C>> {
    let mut v = v;
    for &(kind, n) in factors.iter().rev() {
        v = apply_operator(&deformed_mode(kind, n, k), &exp(&v)?);
    }
    Ok(v)
}

/// `|lambda>_Q`, `|lambda>_P`, `|lambda>_q` or `|lambda>_p`, modulo `beta^{k+1}`.
/// Odd lengths are padded by `phi^(beta)_0` (kinds Q, P) or `phi^[beta]_0`
/// (kind q); kind p ends in `(phi_0 + 1)|0>`.
pub fn build_special_ket<C: Scalar>(kind: SpecialKind, lambda: &StrictPartition, k: u32) -> Result<FockVector<C>> {
    let parts: Vec<i64> = lambda.parts().iter().map(|&p| p as i64).collect();
    let odd = parts.len() % 2 == 1;
    let vacuum = FockVector::vacuum(k);
    let with_pad = |family: DeformedKind, pad: DeformedKind| {
        let mut f: Vec<(DeformedKind, i64)> = parts.iter().map(|&p| (family, p)).collect();
        if odd {
            f.push((pad, 0));
        }
        f
    };
    match kind {
        SpecialKind::BigQ => interleave(vacuum, &with_pad(DeformedKind::PhiRound, DeformedKind::PhiRound), k, |v| {
            apply_exp_big_theta(false, v)
        }),
        SpecialKind::BigP => interleave(vacuum, &with_pad(DeformedKind::CapPhiRound, DeformedKind::PhiRound), k, |v| {
            apply_exp_big_theta(false, v)
        }),
        SpecialKind::SmallQ => interleave(vacuum, &with_pad(DeformedKind::PhiSquare, DeformedKind::PhiSquare), k, |v| {
            apply_exp_theta(true, v)
        }),
        SpecialKind::SmallP => {
            let mut v = vacuum.try_add(&apply_mode(0, &vacuum))?;
            for (i, &p) in parts.iter().enumerate().rev() {
                if i + 1 < parts.len() {
                    v = apply_exp_theta(true, &v)?;
                }
                v = shifted_cap_phi(p, &v, k)?;
            }
            Ok(v)
        }
    }
}

/// The plain basis ket `phi_{l1} ... phi_{lr} |0>`, with `phi_0` appended
/// when `r` is odd.
pub fn basis_ket<C: Scalar>(lambda: &StrictPartition, k: u32) -> FockVector<C> {
    let mut word: Vec<i64> = lambda.parts().iter().map(|&p| p as i64).collect();
    if word.len() % 2 == 1 {
        word.push(0);
    }
    FockVector::word(&word, k)
}

fn check_index(v: &IndexVector) -> Result<Vec<i64>> {
    if v.is_strictly_decreasing() && v.entries().iter().all(|&x| x >= 0) {
        Ok(v.entries().to_vec())
    } else {
        Err(Error::Index(format!("{v} must be strictly decreasing and non-negative")))
    }
}

/// `(mu| = <0| e^theta X_s* ... e^theta X_1*` with `X_i = Phi^(beta)_{mu_i}`,
/// except that a trailing zero part uses `X_s = phi^(beta)_0`.
pub fn round_bra<C: Scalar>(mu: &IndexVector, k: u32) -> Result<FockVector<C>> {
    let parts = check_index(mu)?;
    let factors: Vec<(DeformedKind, i64)> = parts
        .iter()
        .map(|&p| (if p == 0 { DeformedKind::PhiRound } else { DeformedKind::CapPhiRound }, p))
        .collect();
    Ok(interleave(FockVector::vacuum(k), &factors, k, |v| apply_exp_big_theta(false, v))?.star())
}

/// `|lambda) = phi^[beta]_{l1} e^{-theta} ... phi^[beta]_{lr} e^{-theta} |0>`.
pub fn round_ket<C: Scalar>(lambda: &IndexVector, k: u32) -> Result<FockVector<C>> {
    let parts = check_index(lambda)?;
    let factors: Vec<(DeformedKind, i64)> = parts.iter().map(|&p| (DeformedKind::PhiSquare, p)).collect();
    interleave(FockVector::vacuum(k), &factors, k, |v| apply_exp_theta(true, v))
}

/// `<<mu| = <0| (phi_0 + 1) e^theta (phi^(beta)_{mu_s})* ... e^theta (phi^(beta)_{mu_1})*`.
pub fn double_bra<C: Scalar>(mu: &IndexVector, k: u32) -> Result<FockVector<C>> {
    let parts = check_index(mu)?;
    let vacuum = FockVector::vacuum(k);
    let start = vacuum.try_add(&apply_mode(0, &vacuum))?;
    let factors: Vec<(DeformedKind, i64)> = parts.iter().map(|&p| (DeformedKind::PhiRound, p)).collect();
    Ok(interleave(start, &factors, k, |v| apply_exp_big_theta(false, v))?.star())
}

/// `|lambda>> = (Phi^[beta]_{l1} - c_{l1}) e^{-theta} ... (Phi^[beta]_{lr} - c_{lr}) |0>`
/// with `c_n = (1/2)(-beta/2)^n`.
pub fn double_ket<C: Scalar>(lambda: &IndexVector, k: u32) -> Result<FockVector<C>> {
    let parts = check_index(lambda)?;
    let mut v = FockVector::vacuum(k);
    for (i, &p) in parts.iter().enumerate().rev() {
        if i + 1 < parts.len() {
            v = apply_exp_theta(true, &v)?;
        }
        v = shifted_cap_phi(p, &v, k)?;
    }
    Ok(v)
}

/// Which pair of dual families is paired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingKind {
    Round,
    Double,
}

/// `(mu|lambda)` or `<<mu|lambda>>`, expected to be `delta_{lambda,mu}`.
pub fn duality_pairing_check<C: Scalar>(kind: PairingKind, lambda: &IndexVector, mu: &IndexVector, k: u32) -> Result<Polynomial<C>> {
    match kind {
        PairingKind::Round => vev(&round_bra(mu, k)?, &round_ket(lambda, k)?),
        PairingKind::Double => vev(&double_bra(mu, k)?, &double_ket(lambda, k)?),
    }
}

/// `<e^theta (phi^(beta)_0)* Phi^[beta]_n e^{-theta}>`, the pairing of `GQ_()`
/// with the naive fermionic candidate for `gp_n`.
pub fn gp_prime_eval<C: Scalar>(n: u32, k: u32) -> Result<Polynomial<C>> {
    if n == 0 {
        return Err(Error::Index("gp' is indexed by positive integers".into()));
    }
    let bra = round_bra::<C>(&IndexVector::new(vec![0]), k)?;
    let ket = apply_exp_theta(true, &FockVector::vacuum(k))?;
    let ket = apply_operator(&deformed_mode(DeformedKind::CapPhiSquare, n as i64, k), &ket);
    vev(&bra, &ket)
}

/// Vacuum expectation values against `e^H`, applied to each basis ket as
/// `|mu> -> Q^[beta]_mu` (`chi`) or `Q^(beta)_mu` (`Omega`). Odd components
/// vanish. The normalization constant of the basis evaluation is 1.
fn evaluate_on_basis<C: Scalar>(v: &FockVector<C>, alphabet: &Alphabet, flavor: Flavor, d: u32) -> Result<Polynomial<C>> {
    let roster = alphabet.roster();
    let trunc = Truncation {
        beta_max: v.beta_order(),
        weight_max: if flavor == Flavor::Big { Some(d) } else { None },
    };
    let mut cache: HashMap<Vec<i64>, Polynomial<C>> = HashMap::new();
    let mut acc = Polynomial::zero(roster);
    for (modes, c) in v.even_part().terms() {
        let parts: Vec<u32> = modes.iter().filter(|&&m| m > 0).map(|&m| m as u32).collect();
        if flavor == Flavor::Big && parts.iter().sum::<u32>() > d {
            continue;
        }
        let image = match cache.get(modes) {
            Some(p) => p.clone(),
            None => {
                let p = q_beta::<C>(&StrictPartition::new(parts)?, flavor, alphabet, d)?;
                cache.insert(modes.clone(), p.clone());
                p
            }
        };
        acc = &acc + &c.embed(roster)?.mul_truncated(&image, &trunc);
    }
    Ok(acc)
}

/// `chi(|v>) = <0| e^{H^[beta]} |v>`.
pub fn chi_eval<C: Scalar>(v: &FockVector<C>, alphabet: &Alphabet) -> Result<Polynomial<C>> {
    evaluate_on_basis(v, alphabet, Flavor::Small, 0)
}

/// `Omega(|v>) = <0| e^{H^(beta)} |v>`, truncated at alphabet degree `d`.
pub fn omega_eval<C: Scalar>(v: &FockVector<C>, alphabet: &Alphabet, d: u32) -> Result<Polynomial<C>> {
    evaluate_on_basis(v, alphabet, Flavor::Big, d)
}
