//! Named verification suites shared by the command line and the test
//! harness. A suite runs every check it owns and reports each one; a
//! computation error fails its check instead of aborting the suite.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    anticommutator_check, apply_exp_theta, apply_mode, apply_operator, basis_ket, build_special_ket, chi_eval,
    deformed_mode, double_bra, double_ket, gp_prime_eval, omega_eval, round_bra, round_ket, vev, DeformedKind,
    FockVector, OperatorExpansion, Side, SpecialKind,
};
use crate::formal_group::{oplus, pair_ratio};
use crate::genfun::{big_gp, big_gq, compute_big_gq, compute_gp, compute_gq, gp, gp_from_gq_sums, gq, Alphabet};
use crate::partition::{strict_partitions_of, IndexVector, StrictPartition};
use crate::pfaffian::{schur_pfaffian_identity_check, wick_vev};
use crate::poly::{Polynomial, Roster, Truncation};
use crate::scalar::Scalar;
use crate::series::{expand_ratio, AuxVar, LaurentPolynomial, SeriesContext};
use crate::symfun::{cauchy_kernel, pairing, schur_p, schur_q, to_p_basis, Flavor};
use crate::Rational;

type P = Polynomial<Rational>;
type V = FockVector<Rational>;
type L = LaurentPolynomial<Rational>;

/// Two-variable `gq` table, `x = x1`, `y = x2`, with misprints corrected.
pub const GQ_TABLE: &[(&str, &str)] = &[
    ("1", "2*x1 + 2*x2"),
    ("2", "2*x1^2 + 4*x1*x2 + 2*x2^2 - beta*x1 - beta*x2"),
    ("3", "2*x1^3 + 4*x1^2*x2 + 4*x1*x2^2 + 2*x2^3 - beta*x1^2 - 4*beta*x1*x2 - beta*x2^2 + beta^2*x1 + beta^2*x2"),
    ("2,1", "4*x1^2*x2 + 4*x1*x2^2 - 4*beta*x1^2 - 4*beta*x1*x2 - 4*beta*x2^2"),
    (
        "3,1",
        "4*x1^3*x2 + 8*x1^2*x2^2 + 4*x1*x2^3 - 4*beta*x1^3 - 10*beta*x1^2*x2 - 10*beta*x1*x2^2 - 4*beta*x2^3 \
         + 2*beta^2*x1^2 + 2*beta^2*x1*x2 + 2*beta^2*x2^2",
    ),
    (
        "3,2",
        "4*x1^2*x2^3 + 4*x1^3*x2^2 - 10*beta*x1^3*x2 - 16*beta*x1^2*x2^2 - 10*beta*x1*x2^3 + 6*beta^2*x1^3 \
         + 9*beta^2*x1^2*x2 + 9*beta^2*x1*x2^2 + 6*beta^2*x2^3 - beta^3*x1^2 - beta^3*x1*x2 - beta^3*x2^2",
    ),
    (
        "3,2,1",
        "-16*beta*x1^2*x2^3 - 16*beta*x1^3*x2^2 + 16*beta^2*x1^3*x2 + 16*beta^2*x1^2*x2^2 + 16*beta^2*x1*x2^3 \
         - 8*beta^3*x1^3 - 8*beta^3*x1^2*x2 - 8*beta^3*x1*x2^2 - 8*beta^3*x2^3",
    ),
    ("-1,1", "-2"),
    ("0,1", "-2*x1 - 2*x2 - 2*beta"),
    ("1,1", "-2*beta*x1 - 2*beta*x2"),
];

/// Two-variable `gp` table, misprints corrected.
pub const GP_TABLE: &[(&str, &str)] = &[
    ("1", "x1 + x2"),
    ("2", "x1^2 + 2*x1*x2 + x2^2 - beta*x1 - beta*x2"),
    ("3", "x1^3 + 2*x1^2*x2 + 2*x1*x2^2 + x2^3 - beta*x1^2 - 3*beta*x1*x2 - beta*x2^2 + beta^2*x1 + beta^2*x2"),
    ("2,1", "x1^2*x2 + x1*x2^2 - beta*x1^2 - beta*x1*x2 - beta*x2^2"),
    (
        "3,1",
        "x1^3*x2 + 2*x1^2*x2^2 + x1*x2^3 - beta*x1^3 - 3*beta*x1^2*x2 - 3*beta*x1*x2^2 - beta*x2^3 \
         + beta^2*x1^2 + beta^2*x1*x2 + beta^2*x2^2",
    ),
    (
        "3,2",
        "x1^3*x2^2 + x1^2*x2^3 - 3*beta*x1^3*x2 - 5*beta*x1^2*x2^2 - 3*beta*x1*x2^3 + 2*beta^2*x1^3 \
         + 4*beta^2*x1^2*x2 + 4*beta^2*x1*x2^2 + 2*beta^2*x2^3 - beta^3*x1^2 - beta^3*x1*x2 - beta^3*x2^2",
    ),
    (
        "3,2,1",
        "-2*beta*x1^3*x2^2 - 2*beta*x1^2*x2^3 + 2*beta^2*x1^3*x2 + 2*beta^2*x1^2*x2^2 + 2*beta^2*x1*x2^3 \
         - beta^3*x1^3 - beta^3*x1^2*x2 - beta^3*x1*x2^2 - beta^3*x2^3",
    ),
];

/// A family of checks runnable as a unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Appendix,
    Cauchy,
    Duality,
    Fermion,
    Series,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Appendix, Suite::Cauchy, Suite::Duality, Suite::Fermion, Suite::Series];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Appendix => "appendix",
            Suite::Cauchy => "cauchy",
            Suite::Duality => "duality",
            Suite::Fermion => "fermion",
            Suite::Series => "series",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?} (expected appendix, cauchy, duality, fermion or series)")))
    }
}

/// Parameters shared by the suites: alphabet size `vars`, alphabet degree
/// `degree` (the joint degree for the Cauchy suite), beta order `beta_order`
/// and the largest partition `max` of the grids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub vars: usize,
    pub degree: u32,
    pub beta_order: u32,
    pub max: StrictPartition,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            vars: 2,
            degree: 6,
            beta_order: 6,
            max: StrictPartition::new(vec![3, 2, 1]).expect("strict"),
        }
    }
}

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Outcome of a suite, in the order the checks ran.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match (&c.detail, c.passed) {
                (_, true) => writeln!(f, "PASS {}", c.name)?,
                (Some(d), false) => writeln!(f, "FAIL {}: {d}", c.name)?,
                (None, false) => writeln!(f, "FAIL {}", c.name)?,
            }
        }
        let ok = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "{}: {ok}/{} checks passed", self.suite, self.checks.len())
    }
}

/// `None` when a check passes, otherwise a description of the first failure.
type Outcome = Result<Option<String>>;

#[derive(Default)]
struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn check(&mut self, name: impl Into<String>, run: impl FnOnce() -> Outcome) {
        let (passed, detail) = match run() {
            Ok(None) => (true, None),
            Ok(Some(d)) => (false, Some(d)),
            Err(e) => (false, Some(e.to_string())),
        };
        self.checks.push(Check { name: name.into(), passed, detail });
    }
}

fn compare(label: &str, got: &P, want: &P) -> Option<String> {
    (got != want).then(|| format!("{label}: got {got}, expected {want}"))
}

/// Runs one suite.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Report> {
    if cfg.vars == 0 {
        return Err(Error::Index("at least one variable is needed".into()));
    }
    if suite == Suite::Fermion && cfg.beta_order == 0 {
        return Err(Error::Index("fermionic checks need beta order at least 1".into()));
    }
    let mut r = Recorder::default();
    match suite {
        Suite::Appendix => appendix(cfg, &mut r),
        Suite::Cauchy => cauchy(cfg, &mut r),
        Suite::Duality => duality(cfg, &mut r),
        Suite::Fermion => fermion(cfg, &mut r),
        Suite::Series => series(&mut r),
    }
    let passed = r.checks.iter().all(|c| c.passed);
    Ok(Report { suite, passed, checks: r.checks })
}

fn appendix(cfg: &VerifyConfig, r: &mut Recorder) {
    let two = Alphabet::variables(2);
    for (lam, text) in GQ_TABLE {
        r.check(format!("gq({lam}) matches the two-variable table"), || {
            let want = P::parse(text, two.roster())?;
            let got = compute_gq::<Rational>(&IndexVector::parse(lam)?, &two)?;
            Ok((got.to_string() != want.to_string()).then(|| format!("got {got}, expected {want}")))
        });
    }
    for (lam, text) in GP_TABLE {
        r.check(format!("gp({lam}) matches the two-variable table"), || {
            let want = P::parse(text, two.roster())?;
            let got = compute_gp::<Rational>(&IndexVector::parse(lam)?, &two)?;
            Ok((got.to_string() != want.to_string()).then(|| format!("got {got}, expected {want}")))
        });
    }
    r.check("one-row gq_n and gp_n closed forms, n <= 8, one variable", || {
        let one = Alphabet::variables(1);
        for n in 1..=8u32 {
            let lam = StrictPartition::new(vec![n])?;
            let closed = |lead: i64| {
                (1..n).fold(P::monomial(vec![0, n], Rational::from_i64(lead), one.roster()), |acc, k| {
                    &acc + &P::monomial(vec![k, n - k], Rational::from_i64(-1).powi(k), one.roster())
                })
            };
            if let Some(d) = compare(&format!("gq_{n}"), &gq(&lam, &one)?, &closed(2)) {
                return Ok(Some(d));
            }
            if let Some(d) = compare(&format!("gp_{n}"), &gp(&lam, &one)?, &closed(1)) {
                return Ok(Some(d));
            }
        }
        Ok(None)
    });
    let x = Alphabet::variables(cfg.vars);
    let subs = cfg.max.subpartitions();
    r.check("gq with a trailing zero equals gq", || {
        for lam in &subs {
            let v = IndexVector::from(lam);
            if let Some(d) = compare(&lam.to_string(), &compute_gq(&v.with_trailing_zero(), &x)?, &compute_gq(&v, &x)?) {
                return Ok(Some(d));
            }
        }
        Ok(None)
    });
    r.check("gp with a trailing zero vanishes", || {
        for lam in &subs {
            let p = compute_gp::<Rational>(&IndexVector::from(lam).with_trailing_zero(), &x)?;
            if !p.is_zero() {
                return Ok(Some(format!("{lam}: got {p}")));
            }
        }
        Ok(None)
    });
    r.check("GQ with a trailing zero equals GQ, lambda in (2,1)", || {
        for lam in StrictPartition::new(vec![2, 1])?.subpartitions() {
            let v = IndexVector::from(&lam);
            let padded = compute_big_gq(&v.with_trailing_zero(), &x, cfg.degree)?;
            if let Some(d) = compare(&lam.to_string(), &padded, &compute_big_gq(&v, &x, cfg.degree)?) {
                return Ok(Some(d));
            }
        }
        Ok(None)
    });
    r.check("gp from sums of gq agrees with extraction", || {
        for lam in &subs {
            let v = IndexVector::from(lam);
            if let Some(d) = compare(&lam.to_string(), &gp_from_gq_sums(&v, &x)?, &compute_gp(&v, &x)?) {
                return Ok(Some(d));
            }
        }
        Ok(None)
    });
    r.check("beta = 0 recovers Schur Q and P", || {
        let t = Truncation::weight(cfg.degree);
        for lam in &subs {
            let q = schur_q::<Rational>(lam, &x)?;
            let p = schur_p::<Rational>(lam, &x)?;
            let pairs = [
                ("gq", gq(lam, &x)?, q.clone()),
                ("gp", gp(lam, &x)?, p.clone()),
                ("GQ", big_gq(lam, &x, cfg.degree)?, q.truncate(&t)),
                ("GP", big_gp(lam, &x, cfg.degree)?, p.truncate(&t)),
            ];
            for (family, f, classical) in pairs {
                if let Some(d) = compare(&format!("{family}{lam}"), &f.at_beta_zero(), &classical) {
                    return Ok(Some(d));
                }
            }
        }
        Ok(None)
    });
}

/// Partial Cauchy sums `sum_{|lambda| = n} F_lambda(x) g_lambda(y)` over the
/// kernel roster, for `n = 0..=top`.
fn cauchy_layers(
    cfg: &VerifyConfig,
    top: u32,
    big: fn(&StrictPartition, &Alphabet, u32) -> Result<P>,
    small: fn(&StrictPartition, &Alphabet) -> Result<P>,
) -> Result<Vec<P>> {
    let roster = cauchy_kernel::<Rational>(cfg.vars, cfg.vars, 0)?.roster().clone();
    let x = Alphabet::variables(cfg.vars);
    let y = Alphabet::prefixed("y", cfg.vars);
    let t = Truncation::weight(cfg.degree);
    (0..=top)
        .map(|n| {
            let mut acc = P::zero(&roster);
            for lam in strict_partitions_of(n) {
                let f = big(&lam, &x, cfg.degree)?.embed(&roster)?;
                let g = small(&lam, &y)?.embed(&roster)?;
                acc = &acc + &f.mul_truncated(&g, &t);
            }
            Ok(acc)
        })
        .collect()
}

fn cauchy(cfg: &VerifyConfig, r: &mut Recorder) {
    // the identity is checked with |lambda| <= d + 3 and again one step further
    let top = cfg.degree + 3;
    type Family = (&'static str, fn(&StrictPartition, &Alphabet, u32) -> Result<P>, fn(&StrictPartition, &Alphabet) -> Result<P>);
    let families: [Family; 2] = [("GQ(x) gp(y)", big_gq, gp), ("GP(x) gq(y)", big_gp, gq)];
    for (label, big, small) in families {
        let layers = cauchy_layers(cfg, top + 1, big, small);
        r.check(format!("sum of {label} over |lambda| <= {top} equals the kernel mod degree {}", cfg.degree + 1), || {
            let kernel = cauchy_kernel::<Rational>(cfg.vars, cfg.vars, cfg.degree)?;
            let layers = layers.as_ref().map_err(Clone::clone)?;
            let sum = layers[..=top as usize].iter().fold(P::zero(kernel.roster()), |acc, l| &acc + l);
            Ok(compare("sum", &sum, &kernel))
        });
        r.check(format!("sum of {label} is unchanged at |lambda| = {}", top + 1), || {
            let layers = layers.as_ref().map_err(Clone::clone)?;
            let last = &layers[top as usize + 1];
            Ok((!last.is_zero()).then(|| format!("layer contributes {last}")))
        });
    }
}

fn duality(cfg: &VerifyConfig, r: &mut Recorder) {
    let d = cfg.degree.max(cfg.max.weight()).max(1);
    let ps = Alphabet::power_sums(d as usize);
    let subs = cfg.max.subpartitions();
    let beta = Roster::beta_only();
    let expand_small = |f: fn(&StrictPartition, &Alphabet) -> Result<P>| -> Result<Vec<_>> {
        subs.iter().map(|m| to_p_basis(&f(m, &ps)?, Flavor::Small, &ps, d)).collect()
    };
    let gps = expand_small(gp);
    let gqs = expand_small(gq);
    type Big = fn(&StrictPartition, &Alphabet, u32) -> Result<P>;
    let families: [(&str, &str, Big, &Result<Vec<_>>); 2] = [("GQ", "gp", big_gq, &gps), ("GP", "gq", big_gp, &gqs)];
    for (big_name, small_name, big, smalls) in families {
        for (i, lam) in subs.iter().enumerate() {
            r.check(format!("<{big_name}{lam}, {small_name}_mu> = delta for mu in {}", cfg.max), || {
                let smalls = smalls.as_ref().map_err(Clone::clone)?;
                let f = to_p_basis(&big(lam, &ps, d)?, Flavor::Big, &ps, d)?;
                for (j, mu) in subs.iter().enumerate() {
                    let want = P::from_i64((i == j) as i64, &beta);
                    if let Some(e) = compare(&format!("mu = {mu}"), &pairing(&f, &smalls[j])?, &want) {
                        return Ok(Some(e));
                    }
                }
                Ok(None)
            });
        }
    }
}

/// Strictly decreasing subsets of `lo..=hi`.
fn index_subsets(lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let width = (hi - lo + 1) as u32;
    (0u32..1 << width).map(|mask| (lo..=hi).rev().filter(|i| mask & (1 << (i - lo)) != 0).collect()).collect()
}

/// All words of the given length over `lo..=hi`.
fn words(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|w| (lo..=hi).map(move |m| [w.clone(), vec![m]].concat())).collect();
    }
    out
}

fn beta_monomial(j: u32, c: Rational) -> P {
    P::monomial(vec![j], c, &Roster::beta_only())
}

/// `(1/2)(-beta/2)^n`.
fn cap_shift(n: u32) -> P {
    beta_monomial(n, Rational::from_frac(1, 2) * Rational::from_frac(-1, 2).powi(n))
}

fn fermion(cfg: &VerifyConfig, r: &mut Recorder) {
    let k = cfg.beta_order;
    let op = |kind: DeformedKind, n: i64| deformed_mode::<Rational>(kind, n, k);
    let iv = |v: &[i64]| IndexVector::new(v.to_vec());
    let bp = |n: i64| P::from_i64(n, &Roster::beta_only());

    r.check("normal ordering agrees with Wick's theorem, length <= 6, modes in [-4,4]", || {
        let vacuum = V::vacuum_bra(k);
        for len in 0..=6 {
            for w in words(len, -4, 4) {
                let got = vev(&vacuum, &V::word(&w, k))?.constant_term();
                let want = wick_vev::<Rational>(&w);
                if got != want {
                    return Ok(Some(format!("{w:?}: got {got}, expected {want}")));
                }
            }
        }
        Ok(None)
    });
    r.check("basis pairing is diagonal with entries 2^length", || {
        let subs = cfg.max.subpartitions();
        for lam in &subs {
            for mu in &subs {
                let got = vev(&basis_ket::<Rational>(lam, k).star(), &basis_ket(mu, k))?;
                let want = if lam == mu { bp(1 << lam.len()) } else { bp(0) };
                if let Some(d) = compare(&format!("<{lam}|{mu}>"), &got, &want) {
                    return Ok(Some(d));
                }
            }
        }
        Ok(None)
    });
    r.check("{phi^(beta)_m, phi^[beta]_n} table, m, n in [-3,5]", || {
        for m in -3i64..=5 {
            for n in -3i64..=5 {
                let want = if m == n {
                    bp(2)
                } else if m == n - 1 {
                    P::beta(&Roster::beta_only())
                } else {
                    bp(0)
                };
                let got = anticommutator_check(&op(DeformedKind::PhiRound, m), &op(DeformedKind::PhiSquare, n))?;
                if let Some(d) = compare(&format!("m={m} n={n}"), &got, &want) {
                    return Ok(Some(d));
                }
            }
        }
        Ok(None)
    });
    r.check("capital modes are dual to the small modes, m, n in [-3,5]", || {
        let pairs = [
            (DeformedKind::CapPhiRound, DeformedKind::PhiSquare),
            (DeformedKind::CapPhiSquare, DeformedKind::PhiRound),
        ];
        for m in -3i64..=5 {
            for n in -3i64..=5 {
                for (a, b) in pairs {
                    let got = anticommutator_check(&op(a, m), &op(b, n))?;
                    if let Some(d) = compare(&format!("{} {m}, {} {n}", a.symbol(), b.symbol()), &got, &bp((m == n) as i64)) {
                        return Ok(Some(d));
                    }
                }
            }
        }
        Ok(None)
    });
    r.check("deformed modes annihilate the vacua", || {
        let (ket, bra) = (V::vacuum(k), V::vacuum_bra(k));
        for n in 1..=6 {
            let cases = [
                (DeformedKind::PhiRound, n, &bra),
                (DeformedKind::PhiSquare, n, &bra),
                (DeformedKind::PhiRound, -n, &ket),
                (DeformedKind::PhiSquare, -n, &ket),
                (DeformedKind::CapPhiRound, n, &bra),
                (DeformedKind::CapPhiSquare, -n, &ket),
            ];
            for (kind, m, v) in cases {
                if !apply_operator(&op(kind, m), v).is_zero() {
                    return Ok(Some(format!("{}_{m}", kind.symbol())));
                }
            }
        }
        Ok(None)
    });
    r.check("zero modes and capital modes on the vacua", || {
        let (ket, bra) = (V::vacuum(k), V::vacuum_bra(k));
        let (phi0_ket, phi0_bra) = (apply_mode(0, &ket), apply_mode(0, &bra));
        let zero_cases = [
            (DeformedKind::PhiRound, &bra, &phi0_bra),
            (DeformedKind::PhiRound, &phi0_bra, &bra),
            (DeformedKind::PhiSquare, &ket, &phi0_ket),
            (DeformedKind::PhiSquare, &phi0_ket, &ket),
        ];
        for (kind, v, want) in zero_cases {
            if &apply_operator(&op(kind, 0), v) != want {
                return Ok(Some(format!("{}_0", kind.symbol())));
            }
        }
        for n in 0..=k.min(6) {
            let c = cap_shift(n);
            if apply_operator(&op(DeformedKind::CapPhiSquare, n as i64), &bra) != phi0_bra.scale(&c)?
                || apply_operator(&op(DeformedKind::CapPhiRound, -(n as i64)), &ket) != phi0_ket.scale(&c)?
            {
                return Ok(Some(format!("capital mode {n}")));
            }
        }
        Ok(None)
    });
    fermion_conjugation(k, r);
    fermion_pairings(k, r);
    r.check("round and double pairings are dual", || {
        let indices = index_subsets(0, 3);
        for mu in &indices {
            let round = round_bra::<Rational>(&iv(mu), k)?;
            let double = double_bra::<Rational>(&iv(mu), k)?;
            // a trailing zero part is absorbed by phi_0 + 1 in the double pairing
            let stripped: Vec<i64> = mu.iter().copied().filter(|&m| m > 0).collect();
            for lam in &indices {
                let want = bp((mu == lam) as i64);
                if let Some(d) = compare(&format!("({mu:?}|{lam:?})"), &vev(&round, &round_ket(&iv(lam), k)?)?, &want) {
                    return Ok(Some(d));
                }
                if lam.contains(&0) {
                    continue;
                }
                let want = bp((&stripped == lam) as i64);
                if let Some(d) = compare(&format!("<<{mu:?}|{lam:?}>>"), &vev(&double, &double_ket(&iv(lam), k)?)?, &want) {
                    return Ok(Some(d));
                }
            }
        }
        Ok(None)
    });
    r.check("naive one-row candidate pairs to (-beta)^n / 2^(n+1)", || {
        for n in 1..=5u32.min(k) {
            let want = beta_monomial(n, Rational::from_i64(-1).powi(n) / Rational::from_i64(1 << (n + 1)));
            if let Some(d) = compare(&format!("n={n}"), &gp_prime_eval(n, k)?, &want) {
                return Ok(Some(d));
            }
        }
        Ok(None)
    });
    fermion_routes(cfg, r);
}

/// Conjugation of the square modes by `e^{+-theta}`, on every basis ket with
/// modes in `0..=4`.
fn fermion_conjugation(k: u32, r: &mut Recorder) {
    let op = |kind: DeformedKind, n: i64| deformed_mode::<Rational>(kind, n, k);
    let kets: Vec<V> = index_subsets(0, 4)
        .into_iter()
        .map(|m| V::from_terms(&Roster::beta_only(), Truncation::beta(k), Side::Ket, [(m, P::one(&Roster::beta_only()))]))
        .collect::<Result<_>>()
        .unwrap_or_default();
    let conj = |a: &OperatorExpansion<Rational>, plus_first: bool, v: &V| -> Result<V> {
        apply_exp_theta(!plus_first, &apply_operator(a, &apply_exp_theta(plus_first, v)?))
    };
    // e^theta phi^[beta]_n e^{-theta} = phi^[beta]_n + beta phi^[beta]_{n-1}
    r.check("theta conjugation of phi^[beta]_n, first form", || {
        for n in -2i64..=4 {
            let mut rhs = op(DeformedKind::PhiSquare, n);
            rhs.add_scaled(&op(DeformedKind::PhiSquare, n - 1), 1, &Rational::from_i64(1));
            for v in &kets {
                if conj(&op(DeformedKind::PhiSquare, n), true, v)? != apply_operator(&rhs, v) {
                    return Ok(Some(format!("n={n} on {v}")));
                }
            }
        }
        Ok(None)
    });
    // e^{-theta} phi^[beta]_n e^theta = sum_j (-beta)^j phi^[beta]_{n-j}
    r.check("theta conjugation of phi^[beta]_n, inverse form", || {
        for n in -2i64..=4 {
            let mut rhs = OperatorExpansion::zero(k, "rhs");
            for j in 0..=k {
                rhs.add_scaled(&op(DeformedKind::PhiSquare, n - j as i64), j, &Rational::from_i64(-1).powi(j));
            }
            for v in &kets {
                if conj(&op(DeformedKind::PhiSquare, n), false, v)? != apply_operator(&rhs, v) {
                    return Ok(Some(format!("n={n} on {v}")));
                }
            }
        }
        Ok(None)
    });
    // e^theta (phi^(beta)_n)* e^{-theta} = (sum_j (-beta)^j phi^(beta)_{n+j})*
    r.check("theta conjugation of (phi^(beta)_n)*", || {
        for n in -2i64..=4 {
            let mut rhs = OperatorExpansion::zero(k, "rhs");
            for j in 0..=k {
                rhs.add_scaled(&op(DeformedKind::PhiRound, n + j as i64), j, &Rational::from_i64(-1).powi(j));
            }
            let rhs = rhs.star();
            for v in &kets {
                if conj(&op(DeformedKind::PhiRound, n).star(), true, v)? != apply_operator(&rhs, v) {
                    return Ok(Some(format!("n={n} on {v}")));
                }
            }
        }
        Ok(None)
    });
}

/// Annihilation properties of the round and double pairing vectors.
fn fermion_pairings(k: u32, r: &mut Recorder) {
    let op = |kind: DeformedKind, n: i64| deformed_mode::<Rational>(kind, n, k);
    let iv = |v: &[i64]| IndexVector::new(v.to_vec());
    let nonempty: Vec<Vec<i64>> = index_subsets(0, 4).into_iter().filter(|p| !p.is_empty()).collect();
    let shifted = |n: i64, v: &V| -> Result<V> {
        apply_operator(&op(DeformedKind::CapPhiSquare, n), v).try_sub(&v.scale(&cap_shift(n as u32))?)
    };
    r.check("round pairing: (0)| is killed by phi^[beta]_n, n > 0", || {
        let bra = round_bra::<Rational>(&iv(&[0]), k)?;
        Ok((1..=6).find(|&n| !apply_operator(&op(DeformedKind::PhiSquare, n), &bra).is_zero()).map(|n| format!("n={n}")))
    });
    r.check("round pairing: (mu| is killed by phi^[beta]_n, n > mu_1", || {
        for parts in &nonempty {
            let bra = round_bra::<Rational>(&iv(parts), k)?;
            if let Some(n) = (parts[0] + 1..=parts[0] + 3).find(|&n| !apply_operator(&op(DeformedKind::PhiSquare, n), &bra).is_zero()) {
                return Ok(Some(format!("{parts:?} n={n}")));
            }
        }
        Ok(None)
    });
    r.check("round pairing: |lambda) is killed by (Phi^(beta)_m)*, m > lambda_1", || {
        for parts in &nonempty {
            let ket = round_ket::<Rational>(&iv(parts), k)?;
            if let Some(m) = (parts[0] + 1..=parts[0] + 3).find(|&m| !apply_operator(&op(DeformedKind::CapPhiRound, m).star(), &ket).is_zero()) {
                return Ok(Some(format!("{parts:?} m={m}")));
            }
        }
        Ok(None)
    });
    r.check("double pairing: <<()| is killed by Phi^[beta]_n - c_n, n >= 0", || {
        let bra = double_bra::<Rational>(&iv(&[]), k)?;
        for n in 0..=6 {
            if !shifted(n, &bra)?.is_zero() {
                return Ok(Some(format!("n={n}")));
            }
        }
        Ok(None)
    });
    r.check("double pairing: <<mu| is killed by Phi^[beta]_n - c_n, n > mu_1", || {
        for parts in &nonempty {
            let bra = double_bra::<Rational>(&iv(parts), k)?;
            for n in parts[0] + 1..=parts[0] + 3 {
                if !shifted(n, &bra)?.is_zero() {
                    return Ok(Some(format!("{parts:?} n={n}")));
                }
            }
        }
        Ok(None)
    });
    r.check("double pairing: |lambda>> is killed by (phi^(beta)_m)*, m > lambda_1", || {
        for parts in &nonempty {
            let ket = double_ket::<Rational>(&iv(parts), k)?;
            if let Some(m) = (parts[0] + 1..=parts[0] + 3).find(|&m| !apply_operator(&op(DeformedKind::PhiRound, m).star(), &ket).is_zero()) {
                return Ok(Some(format!("{parts:?} m={m}")));
            }
        }
        Ok(None)
    });
}

/// Vacuum expectations of the special kets against the extraction route.
fn fermion_routes(cfg: &VerifyConfig, r: &mut Recorder) {
    let k = cfg.beta_order;
    let x = Alphabet::variables(cfg.vars);
    let subs = cfg.max.subpartitions();
    type Family = (SpecialKind, &'static str, Flavor);
    let families: [Family; 4] = [
        (SpecialKind::BigQ, "GQ", Flavor::Big),
        (SpecialKind::BigP, "GP", Flavor::Big),
        (SpecialKind::SmallQ, "gq", Flavor::Small),
        (SpecialKind::SmallP, "gp", Flavor::Small),
    ];
    for (kind, name, flavor) in families {
        r.check(format!("fermionic {name} agrees with extraction for lambda in {}", cfg.max), || {
            for lam in &subs {
                let ket = build_special_ket::<Rational>(kind, lam, k)?;
                let (fermionic, extracted, trunc) = match flavor {
                    Flavor::Big => {
                        let direct = if kind == SpecialKind::BigQ { big_gq(lam, &x, cfg.degree)? } else { big_gp(lam, &x, cfg.degree)? };
                        (omega_eval(&ket, &x, cfg.degree)?, direct, Truncation::both(k, cfg.degree))
                    }
                    Flavor::Small => {
                        let direct = if kind == SpecialKind::SmallQ { gq(lam, &x)? } else { gp(lam, &x)? };
                        (chi_eval(&ket, &x)?, direct, Truncation::beta(k))
                    }
                };
                if let Some(d) = compare(&lam.to_string(), &fermionic.truncate(&trunc), &extracted.truncate(&trunc)) {
                    return Ok(Some(d));
                }
            }
            Ok(None)
        });
    }
}

/// Terms of total auxiliary degree at most `d`.
fn low_degree(l: &L, d: i64) -> L {
    l.terms()
        .filter(|(e, _)| e.iter().map(|x| x.abs()).sum::<i64>() <= d)
        .fold(L::zero(l.aux_len(), l.roster()), |acc, (e, p)| acc.add(&L::monomial(l.aux_len(), l.roster(), e.clone(), p.clone())))
}

/// Terms whose exponent of aux variable `var` lies in `range`.
fn slice(l: &L, var: usize, range: std::ops::RangeInclusive<i64>) -> L {
    l.terms()
        .filter(|(e, _)| range.contains(&e[var]))
        .fold(L::zero(l.aux_len(), l.roster()), |acc, (e, p)| acc.add(&L::monomial(l.aux_len(), l.roster(), e.clone(), p.clone())))
}

fn context(aux: Vec<AuxVar>, windows: Vec<(i64, i64)>) -> Result<Arc<SeriesContext>> {
    Ok(SeriesContext::new(&Roster::beta_only(), aux, windows)?.into_arc())
}

fn series(r: &mut Recorder) {
    r.check("(z - w)/(z (+) w) expanded in w, through w^2", || {
        let c = context(vec![AuxVar::new("z"), AuxVar::new("w")], vec![(-8, 0), (0, 8)])?;
        let (z, w) = (c.aux_monomial::<Rational>(0, 1), c.aux_monomial::<Rational>(1, 1));
        let got = slice(&expand_ratio(&z.sub(&w), &oplus(&z, &w), &c)?.to_laurent(), 1, 0..=2);
        let want = L::parse("1 - 2*z^-1*w - beta*w + 2*z^-2*w^2 + 3*beta*z^-1*w^2 + beta^2*w^2", c.aux(), c.coeff_roster())?;
        Ok((got != want).then(|| format!("got {}", got.display_with(c.aux()))))
    });
    r.check("(w^-1 - z^-1)/(w^-1 (+) z^-1) expanded in z^-1, through z^-2", || {
        let c = context(vec![AuxVar::inverted("w"), AuxVar::inverted("z")], vec![(0, 8), (-8, 0)])?;
        let (wi, zi) = (c.aux_monomial::<Rational>(0, -1), c.aux_monomial::<Rational>(1, -1));
        let got = slice(&expand_ratio(&wi.sub(&zi), &oplus(&wi, &zi), &c)?.to_laurent(), 1, -2..=0);
        let want = L::parse("1 - 2*w*z^-1 - beta*z^-1 + 2*w^2*z^-2 + 3*beta*w*z^-2 + beta^2*z^-2", c.aux(), c.coeff_roster())?;
        Ok((got != want).then(|| format!("got {}", got.display_with(c.aux()))))
    });
    let triple = || -> Result<(Arc<SeriesContext>, L, L, L)> {
        let c = context(vec![AuxVar::new("z"), AuxVar::new("w"), AuxVar::new("t")], vec![(-16, 0), (-8, 12), (0, 8)])?;
        let (z, w, t) = (c.aux_monomial::<Rational>(0, 1), c.aux_monomial::<Rational>(1, 1), c.aux_monomial::<Rational>(2, 1));
        let whole = pair_ratio(&z, &w).mul(&pair_ratio(&z, &t)).mul(&pair_ratio(&w, &t)).expand(&c)?;
        let factors = pair_ratio(&z, &w)
            .expand(&c)?
            .try_mul(&pair_ratio(&z, &t).expand(&c)?)?
            .try_mul(&pair_ratio(&w, &t).expand(&c)?)?;
        Ok((c, whole.to_laurent(), whole.up_to_total_degree(4), factors.up_to_total_degree(4)))
    };
    let triple = triple();
    r.check("triple pair product: displayed coefficients", || {
        let (c, got, _, _) = triple.as_ref().map_err(Clone::clone)?;
        let shown: [([i64; 3], &str); 13] = [
            ([0, 0, 0], "1"),
            ([-1, 1, 0], "-2"),
            ([0, 1, 0], "-2*beta"),
            ([-2, 2, 0], "2"),
            ([-1, 2, 0], "5*beta"),
            ([0, 2, 0], "3*beta^2"),
            ([0, -1, 1], "-2"),
            ([-1, 0, 1], "2"),
            ([-1, 1, 1], "2*beta"),
            ([0, 1, 1], "2*beta^2"),
            ([-2, 2, 1], "-4*beta"),
            ([-1, 2, 1], "-8*beta^2"),
            ([0, 2, 1], "-4*beta^3"),
        ];
        for (e, want) in shown {
            let coeff = got.coefficient(&e);
            if coeff.to_string() != want {
                return Ok(Some(format!("{}: got {coeff}, expected {want}", L::monomial(3, c.coeff_roster(), e.to_vec(), P::one(c.coeff_roster())).display_with(c.aux()))));
            }
        }
        Ok(None)
    });
    r.check("triple pair product equals the product of its factors through total degree 4", || {
        let (_, _, whole, factors) = triple.as_ref().map_err(Clone::clone)?;
        Ok((low_degree(whole, 4) != low_degree(factors, 4)).then(|| "expansions differ".to_string()))
    });
    for size in [2usize, 4] {
        r.check(format!("Pfaffian of pair factors equals their product, {size} variables"), || {
            let aux: Vec<AuxVar> = (1..=size).rev().map(|i| AuxVar::new(&format!("t{i}"))).collect();
            let c = context(aux, vec![(-1, 1); size])?;
            let t: Vec<L> = (0..size).map(|i| c.aux_monomial(i, 1)).collect();
            Ok((!schur_pfaffian_identity_check(&t, &c)?).then(|| "identity fails".to_string()))
        });
    }
}
