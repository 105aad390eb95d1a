//! Coefficient extraction from generating functions: the exact route to
//! `gq`, `gp`, `GQ` and `GP`.
//!
//! Truncations are derived from the shape of the extraction. For the dual
//! functions every factor raises the suffix sums `e_i + ... + e_r` of the
//! auxiliary exponents, so capping each suffix sum at its target value is
//! exact. For `GQ`/`GP` the same holds for the prefix sums of the exponents
//! plus the alphabet degree.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formal_group::{oplus, pair_ratio};
use crate::partition::{IndexVector, StrictPartition};
use crate::poly::{Polynomial, Roster, Truncation};
use crate::scalar::{binomial, Scalar};
use crate::series::{
    expand_inverse_factor, expand_ratio, window_stability_check, AuxVar, LaurentPolynomial, LinearCap,
    NestedLaurentSeries, SeriesContext,
};

/// The variables a symmetric function is evaluated in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    kind: AlphabetKind,
    roster: Arc<Roster>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphabetKind {
    /// Finitely many variables `<prefix>1, ..., <prefix>n`.
    Variables { prefix: String, count: usize },
    /// Formal power sums `p1, ..., pm` of infinitely many variables; exact
    /// up to weight `m`.
    PowerSums(usize),
}

impl Alphabet {
    pub fn variables(n: usize) -> Self {
        Self::prefixed("x", n)
    }

    pub fn prefixed(prefix: &str, n: usize) -> Self {
        Alphabet {
            kind: AlphabetKind::Variables { prefix: prefix.to_string(), count: n },
            roster: Roster::prefixed(prefix, n),
        }
    }

    pub fn power_sums(m: usize) -> Self {
        Alphabet { kind: AlphabetKind::PowerSums(m), roster: Roster::power_sums(m) }
    }

    pub fn kind(&self) -> &AlphabetKind {
        &self.kind
    }

    pub fn roster(&self) -> &Arc<Roster> {
        &self.roster
    }

    pub fn is_power_sums(&self) -> bool {
        matches!(self.kind, AlphabetKind::PowerSums(_))
    }

    /// Number of alphabet variables in the roster.
    pub fn len(&self) -> usize {
        self.roster.alphabet_len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check_weight(&self, w: i64) -> Result<()> {
        match self.kind {
            AlphabetKind::PowerSums(m) if w > m as i64 => Err(Error::Roster(format!(
                "power-sum alphabet of size {m} cannot represent weight {w}"
            ))),
            _ => Ok(()),
        }
    }

    fn var<C: Scalar>(&self, j: usize) -> Polynomial<C> {
        Polynomial::var_index(j + 1, &self.roster)
    }
}

type Builder<C> = Box<dyn Fn(&Arc<SeriesContext>) -> Result<NestedLaurentSeries<C>> + Send + Sync>;

/// A generating function together with the truncation and exponent at which
/// its coefficient is read.
pub struct Extraction<C> {
    ctx: SeriesContext,
    exponent: Vec<i64>,
    build: Builder<C>,
}

impl<C: Scalar> Extraction<C> {
    pub fn context(&self) -> &SeriesContext {
        &self.ctx
    }

    pub fn exponent(&self) -> &[i64] {
        &self.exponent
    }

    /// Replaces the truncation, e.g. to probe an under-sized window.
    pub fn with_context(mut self, ctx: SeriesContext) -> Self {
        self.ctx = ctx;
        self
    }

    pub fn series(&self) -> Result<NestedLaurentSeries<C>> {
        (self.build)(&Arc::new(self.ctx.clone()))
    }

    pub fn evaluate(&self) -> Result<Polynomial<C>> {
        self.series()?.coefficient(&self.exponent)
    }

    /// Whether the coefficient is unchanged when every bound grows by `pad`.
    pub fn is_window_stable(&self, pad: u32) -> Result<bool> {
        window_stability_check(|c| (self.build)(c), &self.ctx, &self.exponent, pad)
    }
}

fn zero_or<C: Scalar>(ex: Option<Extraction<C>>, roster: &Arc<Roster>) -> Result<Polynomial<C>> {
    match ex {
        Some(ex) => ex.evaluate(),
        None => Ok(Polynomial::zero(roster)),
    }
}

/// Context for extraction at `z_1^{e_1} ... z_r^{e_r}` with `z_r` smallest;
/// `None` when some suffix sum is negative, which forces the coefficient to
/// vanish.
fn z_context(exponent: &[i64], roster: &Arc<Roster>) -> Result<Option<SeriesContext>> {
    let r = exponent.len();
    let suffix: Vec<i64> = (0..=r).map(|i| exponent[i..].iter().sum()).collect();
    if suffix.iter().any(|&t| t < 0) {
        return Ok(None);
    }
    let aux = (1..=r).map(|i| AuxVar::new(&format!("z{i}"))).collect();
    let windows = (0..r).map(|i| (-suffix[i + 1], suffix[i])).collect();
    let mut ctx = SeriesContext::new(roster, aux, windows)?;
    for i in 0..r {
        let w = (0..r).map(|l| i64::from(l >= i)).collect();
        ctx = ctx.with_cap(LinearCap { aux_weights: w, coeff_weight: 0, max: suffix[i] })?;
    }
    Ok(Some(ctx))
}

/// `gq(z_i)` as a series in the context.
fn gq_factor<C: Scalar>(alphabet: &Alphabet, ctx: &Arc<SeriesContext>, i: usize) -> Result<NestedLaurentSeries<C>> {
    let roster = ctx.coeff_roster();
    let z = ctx.aux_monomial::<C>(i, 1);
    let one = ctx.constant(C::one());
    let beta = Polynomial::<C>::beta(roster);
    let one_plus_bz = one.add(&z.mul_poly(&beta));
    match alphabet.kind() {
        AlphabetKind::Variables { count, .. } => {
            let mut acc = ctx.one();
            for j in 0..*count {
                let xz = z.mul_poly(&alphabet.var::<C>(j).embed(roster)?);
                // (1 - x zbar) / (1 - x z) with zbar = -z/(1 + beta z)
                let num = one_plus_bz.add(&xz);
                let den = one_plus_bz.mul(&one.sub(&xz));
                acc = acc.try_mul(&expand_ratio(&num, &den, ctx)?)?;
            }
            Ok(acc)
        }
        AlphabetKind::PowerSums(m) => {
            let mut log = ctx.zero();
            let mut zk = one.clone();
            let mut bar_k = one.clone();
            let minus_z = z.neg();
            for k in 1..=*m {
                zk = zk.mul(&z);
                bar_k = bar_k.mul(&minus_z);
                let bar_series = expand_ratio(&bar_k, &one_plus_bz.pow(k as u32), ctx)?;
                let diff = NestedLaurentSeries::from_laurent(&zk, ctx)?.sub(&bar_series);
                let pk = Polynomial::<C>::var_index(k, roster).scale(&(C::one() / C::from_i64(k as i64)));
                log = log.add(&diff.mul_laurent(&ctx.lift(&pk))?);
            }
            log.exp()
        }
    }
}

/// `(z_i (-) z_j) / (z_i (+) z_j)` expanded with `z_j` smaller.
fn z_pair_factor<C: Scalar>(ctx: &Arc<SeriesContext>, i: usize, j: usize) -> Result<NestedLaurentSeries<C>> {
    pair_ratio(&ctx.aux_monomial::<C>(i, 1), &ctx.aux_monomial::<C>(j, 1)).expand(ctx)
}

/// `1 / ((2 + beta z_i) (1 + beta z_i)^s)`.
fn z_damping<C: Scalar>(ctx: &Arc<SeriesContext>, i: usize, s: u32) -> Result<NestedLaurentSeries<C>> {
    let beta = Polynomial::<C>::beta(ctx.coeff_roster());
    let bz = ctx.aux_monomial::<C>(i, 1).mul_poly(&beta);
    let two = ctx.constant(C::from_i64(2)).add(&bz);
    let one = ctx.constant(C::one()).add(&bz);
    expand_inverse_factor(&two.mul(&one.pow(s)), ctx)
}

/// `sum_n gq_n z^n` up to `z^order`.
pub fn gq_onerow_series<C: Scalar>(alphabet: &Alphabet, order: u32) -> Result<NestedLaurentSeries<C>> {
    alphabet.check_weight(order as i64)?;
    let ctx = SeriesContext::new(alphabet.roster(), vec![AuxVar::new("z")], vec![(0, order as i64)])?.into_arc();
    gq_factor(alphabet, &ctx, 0)
}

/// Extraction of `gq` at an arbitrary integer vector.
pub fn gq_extraction<C: Scalar>(lambda: &IndexVector, alphabet: &Alphabet) -> Result<Option<Extraction<C>>> {
    let e = lambda.entries().to_vec();
    alphabet.check_weight(e.iter().sum::<i64>().max(0))?;
    let Some(ctx) = z_context(&e, alphabet.roster())? else { return Ok(None) };
    let alphabet = alphabet.clone();
    let r = e.len();
    let build: Builder<C> = Box::new(move |ctx: &Arc<SeriesContext>| {
        let mut acc = ctx.one();
        for i in 0..r {
            for j in i + 1..r {
                acc = acc.try_mul(&z_pair_factor(ctx, i, j)?)?;
            }
        }
        for i in 0..r {
            acc = acc.try_mul(&gq_factor(&alphabet, ctx, i)?)?;
        }
        Ok(acc)
    });
    Ok(Some(Extraction { ctx, exponent: e, build }))
}

/// `gq` at any integer index vector (generalized indices included).
pub fn compute_gq<C: Scalar>(lambda: &IndexVector, alphabet: &Alphabet) -> Result<Polynomial<C>> {
    zero_or(gq_extraction(lambda, alphabet)?, alphabet.roster())
}

fn require_strict(lambda: &IndexVector) -> Result<()> {
    if lambda.is_strict_positive() || lambda.is_padded_strict() {
        Ok(())
    } else {
        Err(Error::Index(format!("{lambda} is not a strict partition (optionally followed by 0)")))
    }
}

/// Extraction of `gp` by the subset-sum generating function.
pub fn gp_extraction<C: Scalar>(lambda: &IndexVector, alphabet: &Alphabet) -> Result<Option<Extraction<C>>> {
    require_strict(lambda)?;
    let e = lambda.entries().to_vec();
    alphabet.check_weight(e.iter().sum())?;
    let Some(ctx) = z_context(&e, alphabet.roster())? else { return Ok(None) };
    let alphabet = alphabet.clone();
    let r = e.len();
    let build: Builder<C> = Box::new(move |ctx: &Arc<SeriesContext>| {
        let gq: Vec<_> = (0..r).map(|i| gq_factor::<C>(&alphabet, ctx, i)).collect::<Result<_>>()?;
        let mut pairs = vec![vec![None; r]; r];
        for i in 0..r {
            for j in i + 1..r {
                pairs[i][j] = Some(z_pair_factor::<C>(ctx, i, j)?);
            }
        }
        let mut total = ctx.zero();
        for mask in 0u32..(1 << r) {
            let members: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
            let mut term = ctx.one();
            for i in 0..r {
                let s = members.iter().position(|&m| m == i).map_or(0, |kappa| (i - kappa) as u32);
                term = term.try_mul(&z_damping(ctx, i, s)?)?;
            }
            for (a, &i) in members.iter().enumerate() {
                term = term.try_mul(&gq[i])?;
                for &j in &members[a + 1..] {
                    term = term.try_mul(pairs[i][j].as_ref().unwrap())?;
                }
            }
            if (r - members.len()) % 2 == 1 {
                term = term.neg();
            }
            total = total.try_add(&term)?;
        }
        Ok(total)
    });
    Ok(Some(Extraction { ctx, exponent: e, build }))
}

/// `gp` for a strict partition, optionally followed by a single zero.
pub fn compute_gp<C: Scalar>(lambda: &IndexVector, alphabet: &Alphabet) -> Result<Polynomial<C>> {
    zero_or(gp_extraction(lambda, alphabet)?, alphabet.roster())
}

/// `gp_n` from the one-row series `(gq(z) - 1) / (2 + beta z)`.
pub fn gp_onerow<C: Scalar>(n: u32, alphabet: &Alphabet) -> Result<Polynomial<C>> {
    if n == 0 {
        return Err(Error::Index("one-row gp needs n >= 1".into()));
    }
    let gq = gq_onerow_series::<C>(alphabet, n)?;
    let ctx = gq.context().clone();
    let minus_one = NestedLaurentSeries::from_laurent(&ctx.constant(-C::one()), &ctx)?;
    let damping = z_damping::<C>(&ctx, 0, 0)?;
    gq.add(&minus_one).mul(&damping).coefficient(&[n as i64])
}

/// `gq_n` over several variables assembled from single-variable pieces.
pub fn gq_product_rule<C: Scalar>(n: u32, alphabet: &Alphabet) -> Result<Polynomial<C>> {
    let AlphabetKind::Variables { count, .. } = alphabet.kind() else {
        return Err(Error::Roster("product rule needs a finite alphabet".into()));
    };
    let single = Alphabet::variables(1);
    let pieces = gq_onerow_series::<C>(&single, n)?;
    // gq_i(x_k) for every variable k
    let mut per_var: Vec<Vec<Polynomial<C>>> = Vec::new();
    for k in 0..*count {
        let target = alphabet.roster();
        let row = (0..=n as i64)
            .map(|i| {
                pieces.coefficient(&[i])?.substitute(&[alphabet.var::<C>(k)], target, &Truncation::NONE)
            })
            .collect::<Result<Vec<_>>>()?;
        per_var.push(row);
    }
    fn go<C: Scalar>(k: usize, left: usize, per_var: &[Vec<Polynomial<C>>], acc: &Polynomial<C>) -> Polynomial<C> {
        if k == per_var.len() {
            return if left == 0 { acc.clone() } else { Polynomial::zero(acc.roster()) };
        }
        let mut total = Polynomial::zero(acc.roster());
        for i in 0..=left {
            let next = acc * &per_var[k][i];
            total = &total + &go(k + 1, left - i, per_var, &next);
        }
        total
    }
    if *count == 0 {
        let one = Polynomial::one(alphabet.roster());
        return Ok(if n == 0 { one } else { Polynomial::zero(alphabet.roster()) });
    }
    Ok(go(0, n as usize, &per_var, &Polynomial::one(alphabet.roster())))
}

/// `[z^j] 1 / ((2 + beta z)(1 + beta z)^s)` as a polynomial in beta.
fn damping_coefficient<C: Scalar>(s: u32, j: u32, roster: &Arc<Roster>) -> Polynomial<C> {
    // sum over a + b = j of (1/2)(-1/2)^a beta^a * binom(-s, b) beta^b
    let mut c = C::zero();
    for a in 0..=j {
        let half = C::from_frac(1, 2) * C::from_frac(-1, 2).powi(a);
        c = c + half * binomial::<C>(-(s as i64), j - a);
    }
    let mut e = vec![0; roster.len()];
    e[0] = j;
    Polynomial::monomial(e, c, roster)
}

/// `gp` assembled as a finite combination of generalized `gq` values, the
/// expansion of the subset-sum generating function in one-row dampings.
pub fn gp_from_gq_sums<C: Scalar>(lambda: &IndexVector, alphabet: &Alphabet) -> Result<Polynomial<C>> {
    require_strict(lambda)?;
    let lam = lambda.entries();
    let r = lam.len();
    let roster = alphabet.roster();
    let mut total = Polynomial::zero(roster);
    for mask in 0u32..(1 << r) {
        let members: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
        let mut outside = Polynomial::<C>::one(roster);
        for i in (0..r).filter(|i| mask >> i & 1 == 0) {
            outside = &outside * &damping_coefficient::<C>(0, lam[i] as u32, roster);
        }
        if (r - members.len()) % 2 == 1 {
            outside = outside.neg();
        }
        let shifts: Vec<u32> = members.iter().enumerate().map(|(kappa, &i)| (i - kappa) as u32).collect();
        let budget: i64 = members.iter().map(|&i| lam[i]).sum();
        let mut inner = Polynomial::zero(roster);
        for j in bounded_vectors(members.len(), budget.max(0) as u32) {
            let idx = IndexVector::new(members.iter().zip(&j).map(|(&i, &x)| lam[i] - x as i64).collect());
            let g = compute_gq::<C>(&idx, alphabet)?;
            if g.is_zero() {
                continue;
            }
            let mut coeff = Polynomial::one(roster);
            for (&s, &x) in shifts.iter().zip(&j) {
                coeff = &coeff * &damping_coefficient::<C>(s, x, roster);
            }
            inner = &inner + &(&coeff * &g);
        }
        total = &total + &(&outside * &inner);
    }
    Ok(total)
}

/// All vectors of nonnegative integers of length `n` with sum at most `budget`.
fn bounded_vectors(n: usize, budget: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=budget {
        for mut rest in bounded_vectors(n - 1, budget - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Which K-theoretic function to extract in the `u` variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KFlavor {
    Q,
    P,
}

/// Extraction of `GQ`/`GP` truncated at alphabet degree `d`. Entries of
/// `lambda` must be a strict partition, optionally followed by 0.
pub fn k_extraction<C: Scalar>(
    flavor: KFlavor,
    lambda: &IndexVector,
    alphabet: &Alphabet,
    d: u32,
) -> Result<Option<Extraction<C>>> {
    if !lambda.is_empty() {
        require_strict(lambda)?;
    }
    alphabet.check_weight(d as i64)?;
    let lam = lambda.entries().to_vec();
    let r = lam.len();
    let d = d as i64;
    // caps[l] bounds the alphabet degree plus the first l exponents
    let caps: Vec<i64> = (0..=r).map(|l| d - lam[..l].iter().sum::<i64>()).collect();
    if caps.iter().any(|&c| c < 0) {
        return Ok(None);
    }
    // u_r is the largest variable, so it is listed first
    let pos = move |i: usize| r - 1 - i;
    let aux = (0..r).map(|p| AuxVar::new(&format!("u{}", r - p))).collect();
    let mut windows = vec![(0, 0); r];
    for i in 0..r {
        windows[pos(i)] = (-caps[i], caps[i + 1]);
    }
    let mut ctx = SeriesContext::new(alphabet.roster(), aux, windows)?.with_truncation(Truncation::weight(d as u32));
    for l in 1..=r {
        let mut w = vec![0; r];
        for i in 0..l {
            w[pos(i)] = 1;
        }
        ctx = ctx.with_cap(LinearCap { aux_weights: w, coeff_weight: 1, max: caps[l] })?;
    }
    let mut exponent = vec![0; r];
    for i in 0..r {
        exponent[pos(i)] = -lam[i];
    }
    let alphabet = alphabet.clone();
    let build: Builder<C> = Box::new(move |ctx: &Arc<SeriesContext>| {
        let roster = ctx.coeff_roster().clone();
        let beta = Polynomial::<C>::beta(&roster);
        let one = ctx.constant(C::one());
        let u = |i: usize| ctx.aux_monomial::<C>(pos(i), 1);
        let mut acc = ctx.one();
        for i in 0..r {
            let bu = u(i).mul_poly(&beta);
            let mut den = one.add(&bu);
            if flavor == KFlavor::P {
                den = den.mul(&ctx.constant(C::from_i64(2)).add(&bu));
            }
            acc = acc.try_mul(&expand_inverse_factor(&den, ctx)?)?;
        }
        for j in 0..r {
            for i in 0..j {
                // (u_j (-) u_i) / (u_j (+) u_i), u_i smaller
                acc = acc.try_mul(&pair_ratio(&u(j), &u(i)).expand(ctx)?)?;
            }
        }
        for i in 0..r {
            acc = acc.try_mul(&u_alphabet_factor(&alphabet, ctx, pos(i))?)?;
        }
        Ok(acc)
    });
    Ok(Some(Extraction { ctx, exponent, build }))
}

/// `prod_j (u (+) x_j) / (u (-) x_j)` for the auxiliary variable at `p`.
fn u_alphabet_factor<C: Scalar>(alphabet: &Alphabet, ctx: &Arc<SeriesContext>, p: usize) -> Result<NestedLaurentSeries<C>> {
    let roster = ctx.coeff_roster();
    let beta = Polynomial::<C>::beta(roster);
    let u = ctx.aux_monomial::<C>(p, 1);
    let one = ctx.constant(C::one());
    match alphabet.kind() {
        AlphabetKind::Variables { count, .. } => {
            let mut acc = ctx.one();
            for j in 0..*count {
                let x = ctx.lift(&alphabet.var::<C>(j).embed(roster)?);
                let num = oplus(&u, &x).mul(&one.add(&x.mul_poly(&beta)));
                let den = u.sub(&x);
                acc = acc.try_mul(&expand_ratio(&num, &den, ctx)?)?;
            }
            Ok(acc)
        }
        AlphabetKind::PowerSums(m) => {
            let uinv_plus_beta = ctx.aux_monomial::<C>(p, -1).add(&ctx.lift(&beta));
            let mut log = LaurentPolynomial::zero(ctx.aux_len(), roster);
            for k in 1..=*m {
                let sign = if k % 2 == 1 { C::one() } else { -C::one() };
                let bk = ctx.lift(&beta.pow_truncated(k as u32, &Truncation::NONE));
                let c = uinv_plus_beta
                    .pow(k as u32)
                    .add(&bk)
                    .scale(&sign)
                    .add(&ctx.aux_monomial(p, -(k as i64)));
                let pk = Polynomial::<C>::var_index(k, roster).scale(&(C::one() / C::from_i64(k as i64)));
                log = log.add(&c.mul_poly(&pk));
            }
            NestedLaurentSeries::from_laurent(&log, ctx)?.exp()
        }
    }
}

/// `GQ_lambda` truncated at alphabet degree `d`.
pub fn compute_big_gq<C: Scalar>(lambda: &IndexVector, alphabet: &Alphabet, d: u32) -> Result<Polynomial<C>> {
    zero_or(k_extraction(KFlavor::Q, lambda, alphabet, d)?, alphabet.roster())
}

/// `GP_lambda` truncated at alphabet degree `d`.
pub fn compute_big_gp<C: Scalar>(lambda: &IndexVector, alphabet: &Alphabet, d: u32) -> Result<Polynomial<C>> {
    zero_or(k_extraction(KFlavor::P, lambda, alphabet, d)?, alphabet.roster())
}

/// Convenience wrappers over strict partitions.
pub fn gq<C: Scalar>(lambda: &StrictPartition, alphabet: &Alphabet) -> Result<Polynomial<C>> {
    compute_gq(&lambda.into(), alphabet)
}

pub fn gp<C: Scalar>(lambda: &StrictPartition, alphabet: &Alphabet) -> Result<Polynomial<C>> {
    compute_gp(&lambda.into(), alphabet)
}

pub fn big_gq<C: Scalar>(lambda: &StrictPartition, alphabet: &Alphabet, d: u32) -> Result<Polynomial<C>> {
    compute_big_gq(&lambda.into(), alphabet, d)
}

pub fn big_gp<C: Scalar>(lambda: &StrictPartition, alphabet: &Alphabet, d: u32) -> Result<Polynomial<C>> {
    compute_big_gp(&lambda.into(), alphabet, d)
}
