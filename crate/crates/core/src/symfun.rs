//! Power sums, classical Schur P/Q functions, the beta-deformed power-sum
//! bases, their rebasing maps, the bilinear pairing and the Cauchy kernel.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal_group::Fraction;
use crate::genfun::{Alphabet, AlphabetKind};
use crate::partition::{partitions_of, OddPartition, StrictPartition};
use crate::pfaffian::{pfaffian, AntisymmetricMatrix};
use crate::poly::{Polynomial, PolynomialJson, Roster, Truncation};
use crate::scalar::{binomial, Scalar};

/// `p_n` in the alphabet.
pub fn power_sum<C: Scalar>(n: u32, alphabet: &Alphabet) -> Result<Polynomial<C>> {
    if n == 0 {
        return Err(Error::Index("power sums start at p1".into()));
    }
    let roster = alphabet.roster();
    match alphabet.kind() {
        AlphabetKind::Variables { count, .. } => {
            let mut acc = Polynomial::zero(roster);
            for j in 0..*count {
                let mut e = vec![0; roster.len()];
                e[j + 1] = n;
                acc = &acc + &Polynomial::monomial(e, C::one(), roster);
            }
            Ok(acc)
        }
        AlphabetKind::PowerSums(m) => {
            if n as usize > *m {
                // beyond the represented weight
                Ok(Polynomial::zero(roster))
            } else {
                Ok(Polynomial::var_index(n as usize, roster))
            }
        }
    }
}

fn beta_half_power<C: Scalar>(k: u32, sign: i64, roster: &Arc<Roster>) -> Polynomial<C> {
    let mut e = vec![0; roster.len()];
    e[0] = k;
    Polynomial::monomial(e, C::from_frac(sign, 2).powi(k), roster)
}

/// `sum_i binom(-n, i) (sign beta/2)^i p_{n+i}`, truncated at weight `d`.
fn shifted_power_sum<C: Scalar>(n: u32, sign: i64, alphabet: &Alphabet, d: u32) -> Result<Polynomial<C>> {
    let roster = alphabet.roster();
    let mut acc = Polynomial::zero(roster);
    for i in 0..=d.saturating_sub(n) {
        let c = binomial::<C>(-(n as i64), i);
        let term = power_sum::<C>(n + i, alphabet)?.try_mul(&beta_half_power(i, sign, roster))?.scale(&c);
        acc = &acc + &term;
    }
    Ok(acc.truncate(&Truncation::weight(d)))
}

/// `p^(beta)_n = sum_i binom(-n, i) (beta/2)^i p_{n+i}`, truncated at weight `d`.
pub fn beta_power_sum_big<C: Scalar>(n: u32, alphabet: &Alphabet, d: u32) -> Result<Polynomial<C>> {
    shifted_power_sum(n, 1, alphabet, d)
}

/// `sum_{i=1}^n binom(n, i) (sign beta/2)^{n-i} p_i`.
fn translated_power_sum<C: Scalar>(n: u32, sign: i64, alphabet: &Alphabet) -> Result<Polynomial<C>> {
    let roster = alphabet.roster();
    let mut acc = Polynomial::zero(roster);
    for i in 1..=n {
        let term = power_sum::<C>(i, alphabet)?
            .try_mul(&beta_half_power(n - i, sign, roster))?
            .scale(&binomial::<C>(n as i64, i));
        acc = &acc + &term;
    }
    Ok(acc)
}

/// `p^[beta]_n = sum_{i=1}^n binom(n, i) (beta/2)^{n-i} p_i`.
pub fn beta_power_sum_small<C: Scalar>(n: u32, alphabet: &Alphabet) -> Result<Polynomial<C>> {
    translated_power_sum(n, 1, alphabet)
}

/// One-row classical Schur Q functions `q_0, ..., q_n` from
/// `k q_k = sum_{j odd} 2 p_j q_{k-j}`.
fn schur_q_rows<C: Scalar>(n: u32, alphabet: &Alphabet) -> Result<Vec<Polynomial<C>>> {
    let roster = alphabet.roster();
    let mut q = vec![Polynomial::one(roster)];
    let p: Vec<Polynomial<C>> =
        (1..=n).map(|j| power_sum::<C>(j, alphabet)).collect::<Result<_>>()?;
    for k in 1..=n {
        let mut acc = Polynomial::zero(roster);
        for j in (1..=k).step_by(2) {
            acc = &acc + &(&p[j as usize - 1] * &q[(k - j) as usize]);
        }
        q.push(acc.scale(&(C::from_i64(2) / C::from_i64(k as i64))));
    }
    Ok(q)
}

/// Classical Schur Q function, assembled as a Pfaffian of two-row pieces.
pub fn schur_q<C: Scalar>(lambda: &StrictPartition, alphabet: &Alphabet) -> Result<Polynomial<C>> {
    let roster = alphabet.roster();
    let parts: Vec<u32> = lambda.parts().to_vec();
    let top = parts.first().copied().unwrap_or(0) * 2;
    let q = schur_q_rows::<C>(top, alphabet)?;
    let two_row = |a: u32, b: u32| -> Polynomial<C> {
        let mut acc = &q[a as usize] * &q[b as usize];
        for i in 1..=b {
            let t = (&q[(a + i) as usize] * &q[(b - i) as usize]).scale(&C::from_i64(if i % 2 == 1 { -2 } else { 2 }));
            acc = &acc + &t;
        }
        acc
    };
    let mut padded = parts.clone();
    if padded.len() % 2 == 1 {
        padded.push(0);
    }
    let m = AntisymmetricMatrix::from_fn(padded.len(), Polynomial::one(roster), |i, j| {
        if padded[j] == 0 {
            q[padded[i] as usize].clone()
        } else {
            two_row(padded[i], padded[j])
        }
    });
    pfaffian(&m)
}

/// Classical Schur P function `2^{-len} Q`.
pub fn schur_p<C: Scalar>(lambda: &StrictPartition, alphabet: &Alphabet) -> Result<Polynomial<C>> {
    let q = schur_q::<C>(lambda, alphabet)?;
    Ok(q.scale(&(C::one() / C::from_i64(2).powi(lambda.len() as u32))))
}

/// Which power-sum basis a [`PBasisExpansion`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PBasis {
    #[serde(rename = "p")]
    Plain,
    #[serde(rename = "pG")]
    BigBeta,
    #[serde(rename = "pg")]
    SmallBeta,
}

/// Flavor of the beta-deformation: the completed ring of `GQ` or the ring of
/// the dual functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Big,
    Small,
}

/// Finite expansion over odd partitions with coefficients in `Q[beta]`.
#[derive(Clone, PartialEq, Eq)]
pub struct PBasisExpansion<C> {
    pub basis: PBasis,
    pub terms: BTreeMap<OddPartition, Polynomial<C>>,
}

impl<C: Scalar> PBasisExpansion<C> {
    pub fn coefficient(&self, rho: &OddPartition) -> Polynomial<C> {
        self.terms.get(rho).cloned().unwrap_or_else(|| Polynomial::zero(&Roster::beta_only()))
    }

    pub fn to_json(&self) -> PBasisJson {
        PBasisJson {
            basis: self.basis,
            terms: self
                .terms
                .iter()
                .map(|(rho, c)| PBasisTermJson { partition: rho.parts().to_vec(), coeff: c.to_json() })
                .collect(),
        }
    }
}

impl<C: Scalar> fmt::Debug for PBasisExpansion<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(r, c)| format!("({c})*p{r}")).collect();
        write!(f, "{:?}[{}]", self.basis, parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PBasisTermJson {
    pub partition: Vec<u32>,
    pub coeff: PolynomialJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PBasisJson {
    pub basis: PBasis,
    pub terms: Vec<PBasisTermJson>,
}

/// Reads a polynomial in the power-sum roster as an odd-partition expansion.
fn read_power_sum_form<C: Scalar>(f: &Polynomial<C>, basis: PBasis) -> Result<PBasisExpansion<C>> {
    let roster = f.roster();
    let beta_roster = Roster::beta_only();
    let mut terms: BTreeMap<OddPartition, Polynomial<C>> = BTreeMap::new();
    for (m, c) in f.terms() {
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate().skip(1) {
            let k = roster.weight(i);
            if e > 0 && k.is_multiple_of(2) {
                return Err(Error::Basis(format!("even power sum p{k} in the expansion")));
            }
            parts.extend(std::iter::repeat_n(k, e as usize));
        }
        let rho = OddPartition::new(parts)?;
        let coeff = Polynomial::monomial(vec![m.beta()], c.clone(), &beta_roster);
        let slot = terms.entry(rho).or_insert_with(|| Polynomial::zero(&beta_roster));
        *slot = &*slot + &coeff;
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(PBasisExpansion { basis, terms })
}

/// Ring map on power-sum polynomials given by images of each `p_n`.
fn map_power_sums<C: Scalar>(
    f: &Polynomial<C>,
    alphabet: &Alphabet,
    image: impl Fn(u32) -> Result<Polynomial<C>>,
    trunc: &Truncation,
) -> Result<Polynomial<C>> {
    let roster = f.roster();
    let images = (1..roster.len())
        .map(|i| image(roster.weight(i)))
        .collect::<Result<Vec<_>>>()?;
    f.substitute(&images, alphabet.roster(), trunc)
}

/// Expands a symmetric function in plain power sums of a finite alphabet by
/// an exact linear solve, degree by degree. Needs at least as many variables
/// as the top degree.
fn solve_plain_power_sums<C: Scalar>(f: &Polynomial<C>, alphabet: &Alphabet) -> Result<Polynomial<C>> {
    let AlphabetKind::Variables { count, .. } = alphabet.kind() else {
        return Err(Error::Roster("linear solve needs a finite alphabet".into()));
    };
    if !f.is_symmetric() {
        return Err(Error::Basis("input is not symmetric".into()));
    }
    let top = f.weight_degree().unwrap_or(0);
    if (top as usize) > *count {
        return Err(Error::Basis(format!("{count} variables cannot separate degree {top}")));
    }
    let ps_alphabet = Alphabet::power_sums(top as usize);
    let ps_roster = ps_alphabet.roster();
    let mut out = Polynomial::zero(ps_roster);
    for d in 1..=top {
        let fd = f.weight_component(d);
        if fd.is_zero() {
            continue;
        }
        let parts = partitions_of(d);
        // column nu: p_nu evaluated in the alphabet
        let columns: Vec<Polynomial<C>> = parts
            .iter()
            .map(|nu| {
                nu.iter().try_fold(Polynomial::one(alphabet.roster()), |acc, &k| {
                    Ok::<_, Error>(&acc * &power_sum::<C>(k, alphabet)?)
                })
            })
            .collect::<Result<_>>()?;
        // rows: the dominant monomials x^mu for mu a partition of d
        let row_exp = |mu: &Vec<u32>| {
            let mut e = vec![0; alphabet.roster().len()];
            for (i, &k) in mu.iter().enumerate() {
                e[i + 1] = k;
            }
            e
        };
        let n = parts.len();
        let mut mat: Vec<Vec<C>> = parts
            .iter()
            .map(|mu| columns.iter().map(|col| col.coeff(&row_exp(mu))).collect())
            .collect();
        let mut rhs: Vec<Polynomial<C>> = parts
            .iter()
            .map(|mu| {
                let beta_roster = Roster::beta_only();
                let target = row_exp(mu);
                fd.terms()
                    .filter(|(m, _)| m.exponents()[1..] == target[1..])
                    .fold(Polynomial::zero(&beta_roster), |acc, (m, c)| {
                        &acc + &Polynomial::monomial(vec![m.beta()], c.clone(), &beta_roster)
                    })
            })
            .collect();
        // Gauss-Jordan elimination over Q with polynomial right-hand sides
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !mat[r][col].is_zero())
                .ok_or_else(|| Error::Basis("singular power-sum system".into()))?;
            mat.swap(col, piv);
            rhs.swap(col, piv);
            let inv = C::one() / mat[col][col].clone();
            for k in 0..n {
                mat[col][k] = mat[col][k].clone() * inv.clone();
            }
            rhs[col] = rhs[col].scale(&inv);
            for r in 0..n {
                if r != col && !mat[r][col].is_zero() {
                    let factor = mat[r][col].clone();
                    for k in 0..n {
                        mat[r][k] = mat[r][k].clone() - factor.clone() * mat[col][k].clone();
                    }
                    rhs[r] = &rhs[r] - &rhs[col].scale(&factor);
                }
            }
        }
        for (nu, c) in parts.iter().zip(rhs) {
            if c.is_zero() {
                continue;
            }
            let mut term = Polynomial::one(ps_roster);
            for &k in nu {
                term = &term * &Polynomial::var_index(k as usize, ps_roster);
            }
            out = &out + &(&term * &c.embed(ps_roster)?);
        }
        // residual check
        let rebuilt = map_power_sums(&out.weight_component(d), alphabet, |k| power_sum(k, alphabet), &Truncation::NONE)?;
        if rebuilt != fd {
            return Err(Error::Basis(format!("degree {d} part is not a combination of power sums")));
        }
    }
    let constant = f.constant_term();
    Ok(&out + &Polynomial::constant(constant, ps_roster))
}

/// `iota^(beta)`: the ring map `p_n -> p^(beta)_n`, i.e. the substitution
/// `x -> x/(1 + beta x/2)`, truncated at weight `d`. Input must be symmetric.
pub fn iota_big<C: Scalar>(f: &Polynomial<C>, alphabet: &Alphabet, d: u32) -> Result<Polynomial<C>> {
    let trunc = Truncation::weight(d);
    match alphabet.kind() {
        AlphabetKind::Variables { count, .. } => {
            if !f.is_symmetric() {
                return Err(Error::Symmetry("iota needs a symmetric function".into()));
            }
            let roster = alphabet.roster();
            let beta = Polynomial::<C>::beta(roster);
            let images = (0..*count)
                .map(|j| {
                    let x = Polynomial::var_index(j + 1, roster);
                    let den = &Polynomial::one(roster) + &(&beta * &x).scale(&C::from_frac(1, 2));
                    Fraction { num: x, den }.expand_truncated(&trunc)
                })
                .collect::<Result<Vec<_>>>()?;
            f.substitute(&images, roster, &trunc)
        }
        AlphabetKind::PowerSums(_) => map_power_sums(f, alphabet, |n| beta_power_sum_big(n, alphabet, d), &trunc),
    }
}

/// `iota^[beta]` on a plain power-sum expansion: `p_rho -> p^[beta]_rho`.
pub fn iota_small<C: Scalar>(f: &PBasisExpansion<C>, alphabet: &Alphabet) -> Result<Polynomial<C>> {
    if f.basis != PBasis::Plain {
        return Err(Error::Basis("iota expects a plain power-sum expansion".into()));
    }
    let roster = alphabet.roster();
    let mut acc = Polynomial::zero(roster);
    for (rho, c) in &f.terms {
        let mut term = c.embed(roster)?;
        for &k in rho.parts() {
            term = &term * &beta_power_sum_small::<C>(k, alphabet)?;
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Plain power-sum expansion of the classical Schur Q function.
pub fn schur_q_plain_expansion<C: Scalar>(lambda: &StrictPartition) -> Result<PBasisExpansion<C>> {
    let ps = Alphabet::power_sums(lambda.weight().max(1) as usize);
    read_power_sum_form(&schur_q::<C>(lambda, &ps)?, PBasis::Plain)
}

/// `Q^(beta)_lambda` (weight-truncated at `d`) or `Q^[beta]_lambda`.
pub fn q_beta<C: Scalar>(lambda: &StrictPartition, flavor: Flavor, alphabet: &Alphabet, d: u32) -> Result<Polynomial<C>> {
    let plain = schur_q_plain_expansion::<C>(lambda)?;
    match flavor {
        Flavor::Small => iota_small(&plain, alphabet),
        Flavor::Big => {
            let roster = alphabet.roster();
            let mut acc = Polynomial::zero(roster);
            for (rho, c) in &plain.terms {
                let mut term = c.embed(roster)?;
                for &k in rho.parts() {
                    term = term.try_mul_truncated(&beta_power_sum_big::<C>(k, alphabet, d)?, &Truncation::weight(d))?;
                }
                acc = &acc + &term;
            }
            Ok(acc)
        }
    }
}

/// Expansion of `f` in `p^(beta)` (flavor Big), `p^[beta]` (flavor Small)
/// over odd partitions. For finite alphabets at least `d` variables are
/// needed; non-symmetric input or even power sums are basis errors.
pub fn to_p_basis<C: Scalar>(f: &Polynomial<C>, flavor: Flavor, alphabet: &Alphabet, d: u32) -> Result<PBasisExpansion<C>> {
    let f = f.embed(alphabet.roster())?;
    let plain_form = |g: &Polynomial<C>| -> Result<(Polynomial<C>, Alphabet)> {
        match alphabet.kind() {
            AlphabetKind::PowerSums(_) => Ok((g.clone(), alphabet.clone())),
            AlphabetKind::Variables { .. } => {
                let solved = solve_plain_power_sums(g, alphabet)?;
                let m = solved.roster().alphabet_len();
                Ok((solved, Alphabet::power_sums(m)))
            }
        }
    };
    match flavor {
        Flavor::Big => {
            let trunc = Truncation::weight(d);
            let undone = match alphabet.kind() {
                AlphabetKind::Variables { count, .. } => {
                    if !f.is_symmetric() {
                        return Err(Error::Basis("input is not symmetric".into()));
                    }
                    let roster = alphabet.roster();
                    let beta = Polynomial::<C>::beta(roster);
                    let images = (0..*count)
                        .map(|j| {
                            let x = Polynomial::var_index(j + 1, roster);
                            let den = &Polynomial::one(roster) - &(&beta * &x).scale(&C::from_frac(1, 2));
                            Fraction { num: x, den }.expand_truncated(&trunc)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    f.substitute(&images, roster, &trunc)?
                }
                AlphabetKind::PowerSums(_) => {
                    map_power_sums(&f, alphabet, |n| shifted_power_sum(n, -1, alphabet, d), &trunc)?
                }
            };
            let (plain, _) = plain_form(&undone.truncate(&trunc))?;
            read_power_sum_form(&plain, PBasis::BigBeta)
        }
        Flavor::Small => {
            let (plain, ps) = plain_form(&f)?;
            let back = map_power_sums(&plain, &ps, |n| translated_power_sum(n, -1, &ps), &Truncation::NONE)?;
            read_power_sum_form(&back, PBasis::SmallBeta)
        }
    }
}

/// `<F, g>` with `<p^(beta)_rho, p^[beta]_sigma> = 2^{-len} z_rho delta`.
pub fn pairing<C: Scalar>(big: &PBasisExpansion<C>, small: &PBasisExpansion<C>) -> Result<Polynomial<C>> {
    if big.basis != PBasis::BigBeta || small.basis != PBasis::SmallBeta {
        return Err(Error::Basis("pairing takes a p^(beta) and a p^[beta] expansion".into()));
    }
    let roster = Roster::beta_only();
    let mut acc = Polynomial::zero(&roster);
    for (rho, a) in &big.terms {
        if let Some(b) = small.terms.get(rho) {
            let w = C::from_bigint(&rho.z()) / C::from_i64(2).powi(rho.len() as u32);
            acc = &acc + &(a * b).scale(&w);
        }
    }
    Ok(acc)
}

/// `prod_{i,j} (1 - bar(x_i) y_j)/(1 - x_i y_j)` truncated at joint degree `d`,
/// over the roster `beta, x1.., y1..`.
pub fn cauchy_kernel<C: Scalar>(nx: usize, ny: usize, d: u32) -> Result<Polynomial<C>> {
    let mut names = vec!["beta".to_string()];
    names.extend((1..=nx).map(|i| format!("x{i}")));
    names.extend((1..=ny).map(|j| format!("y{j}")));
    let roster = Roster::from_names(&names)?;
    let trunc = Truncation::weight(d);
    let beta = Polynomial::<C>::beta(&roster);
    let one = Polynomial::<C>::one(&roster);
    let mut num = one.clone();
    let mut den = one.clone();
    for i in 0..nx {
        let x = Polynomial::var_index(1 + i, &roster);
        let bx = &one + &(&beta * &x);
        for j in 0..ny {
            let xy = &x * &Polynomial::var_index(1 + nx + j, &roster);
            num = num.mul_truncated(&(&bx + &xy), &trunc);
            den = den.mul_truncated(&bx.mul_truncated(&(&one - &xy), &trunc), &trunc);
        }
    }
    Fraction { num, den }.expand_truncated(&trunc)
}

/// `z_rho` as a scalar.
pub fn z_scalar<C: Scalar>(rho: &OddPartition) -> C {
    C::from_bigint(&rho.z())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type P = Polynomial<Rational>;

    #[test]
    fn power_sums_small_cases() {
        let a = Alphabet::variables(2);
        assert_eq!(power_sum::<Rational>(1, &a).unwrap(), P::parse("x1 + x2", a.roster()).unwrap());
        let b = Alphabet::variables(1);
        assert_eq!(beta_power_sum_big::<Rational>(2, &b, 3).unwrap(), P::parse("x1^2 - beta*x1^3", b.roster()).unwrap());
        assert_eq!(
            beta_power_sum_small::<Rational>(3, &b).unwrap(),
            P::parse("x1^3 + 3/2*beta*x1^2 + 3/4*beta^2*x1", b.roster()).unwrap()
        );
    }

    #[test]
    fn schur_q_two_one() {
        let a = Alphabet::variables(2);
        let lam = StrictPartition::parse("2,1").unwrap();
        assert_eq!(schur_q::<Rational>(&lam, &a).unwrap(), P::parse("4*x1^2*x2 + 4*x1*x2^2", a.roster()).unwrap());
        assert_eq!(schur_p::<Rational>(&lam, &a).unwrap(), P::parse("x1^2*x2 + x1*x2^2", a.roster()).unwrap());
    }
}
