use kpq::fock::*;
use kpq::partition::{IndexVector, StrictPartition};
use kpq::{Polynomial, Rational, Roster, Scalar, Truncation};

type P = Polynomial<Rational>;
type V = FockVector<Rational>;

const K: u32 = 6;

fn q(n: i64, d: i64) -> Rational {
    Rational::from_frac(n, d)
}

fn bp(s: &str) -> P {
    P::parse(s, &Roster::beta_only()).unwrap()
}

fn beta_pow(j: u32, c: Rational) -> P {
    P::monomial(vec![j], c, &Roster::beta_only())
}

fn op(kind: DeformedKind, n: i64) -> OperatorExpansion<Rational> {
    deformed_mode(kind, n, K)
}

fn iv(v: &[i64]) -> IndexVector {
    IndexVector::new(v.to_vec())
}

/// Strictly decreasing subsets of `0..=max`.
fn subsets(max: i64) -> Vec<Vec<i64>> {
    (0u32..1 << (max + 1))
        .map(|mask| (0..=max).rev().filter(|i| mask & (1 << i) != 0).collect())
        .collect()
}

/// All normal-form basis kets with modes in `0..=max`.
fn spanning_kets(max: i64) -> Vec<V> {
    subsets(max)
        .into_iter()
        .map(|m| V::from_terms(&Roster::beta_only(), Truncation::beta(K), Side::Ket, [(m, bp("1"))]).unwrap())
        .collect()
}

/// `A - c` applied to `v`.
fn shifted(a: &OperatorExpansion<Rational>, c: &P, v: &V) -> V {
    apply_operator(a, v).try_sub(&v.scale(c).unwrap()).unwrap()
}

/// `(1/2)(-beta/2)^n`.
fn cap_shift(n: u32) -> P {
    beta_pow(n, q(1, 2) * q(-1, 2).powi(n))
}

#[test]
fn annihilation_rules() {
    let (ket, bra) = (V::vacuum(K), V::vacuum_bra(K));
    for n in 1..=6 {
        assert!(apply_operator(&op(DeformedKind::PhiRound, n), &bra).is_zero());
        assert!(apply_operator(&op(DeformedKind::PhiSquare, n), &bra).is_zero());
        assert!(apply_operator(&op(DeformedKind::PhiRound, -n), &ket).is_zero());
        assert!(apply_operator(&op(DeformedKind::PhiSquare, -n), &ket).is_zero());
        assert!(apply_operator(&op(DeformedKind::CapPhiRound, n), &bra).is_zero());
        assert!(apply_operator(&op(DeformedKind::CapPhiSquare, -n), &ket).is_zero());
    }
}

#[test]
fn zero_modes_on_vacua() {
    let (ket, bra) = (V::vacuum(K), V::vacuum_bra(K));
    let phi0_ket = apply_mode(0, &ket);
    let phi0_bra = apply_mode(0, &bra);
    assert_eq!(apply_operator(&op(DeformedKind::PhiRound, 0), &bra), phi0_bra);
    assert_eq!(apply_operator(&op(DeformedKind::PhiRound, 0), &phi0_bra), bra);
    assert_eq!(apply_operator(&op(DeformedKind::PhiSquare, 0), &ket), phi0_ket);
    assert_eq!(apply_operator(&op(DeformedKind::PhiSquare, 0), &phi0_ket), ket);
}

#[test]
fn capital_modes_fail_to_annihilate() {
    let (ket, bra) = (V::vacuum(K), V::vacuum_bra(K));
    for n in 0..=6u32 {
        let c = beta_pow(n, q(1, 2) * q(-1, 2).powi(n));
        assert_eq!(c, beta_pow(n, q(-1, 1).powi(n) / q(1 << (n + 1), 1)));
        let expected_bra = apply_mode(0, &bra).scale(&c).unwrap();
        assert_eq!(apply_operator(&op(DeformedKind::CapPhiSquare, n as i64), &bra), expected_bra);
        let expected_ket = apply_mode(0, &ket).scale(&c).unwrap();
        assert_eq!(apply_operator(&op(DeformedKind::CapPhiRound, -(n as i64)), &ket), expected_ket);
    }
}

#[test]
fn theta_conjugation_identities() {
    let kets = spanning_kets(4);
    for n in -2i64..=4 {
        // e^theta phi^[beta]_n e^{-theta} = phi^[beta]_n + beta phi^[beta]_{n-1}
        let mut rhs1 = op(DeformedKind::PhiSquare, n);
        rhs1.add_scaled(&op(DeformedKind::PhiSquare, n - 1), 1, &q(1, 1));
        // e^{-theta} phi^[beta]_n e^theta = sum_k (-beta)^k phi^[beta]_{n-k}
        let mut rhs2 = OperatorExpansion::zero(K, "rhs2");
        for k in 0..=K {
            rhs2.add_scaled(&op(DeformedKind::PhiSquare, n - k as i64), k, &q(-1, 1).powi(k));
        }
        // e^theta (phi^(beta)_n)* e^{-theta} = (sum_k (-beta)^k phi^(beta)_{n+k})*
        let mut rhs3 = OperatorExpansion::zero(K, "rhs3");
        for k in 0..=K {
            rhs3.add_scaled(&op(DeformedKind::PhiRound, n + k as i64), k, &q(-1, 1).powi(k));
        }
        let round_star = op(DeformedKind::PhiRound, n).star();
        for v in &kets {
            let conj = |a: &OperatorExpansion<Rational>, first: bool| {
                let inner = apply_exp_theta(first, v).unwrap();
                apply_exp_theta(!first, &apply_operator(a, &inner)).unwrap()
            };
            assert_eq!(conj(&op(DeformedKind::PhiSquare, n), true), apply_operator(&rhs1, v), "(1) n={n}");
            assert_eq!(conj(&op(DeformedKind::PhiSquare, n), false), apply_operator(&rhs2, v), "(2) n={n}");
            assert_eq!(conj(&round_star, true), apply_operator(&rhs3.star(), v), "(3) n={n}");
        }
    }
}

#[test]
fn round_pairing_lemmas() {
    // (A): <0| e^theta (phi^(beta)_0)* phi^[beta]_n = 0 for n > 0
    let zero_bra = round_bra::<Rational>(&iv(&[0]), K).unwrap();
    for n in 1..=6 {
        assert!(apply_operator(&op(DeformedKind::PhiSquare, n), &zero_bra).is_zero(), "(A) n={n}");
    }
    for parts in subsets(4).into_iter().filter(|p| !p.is_empty()) {
        let top = parts[0];
        // (B): (mu| phi^[beta]_n = 0 for n > mu_1
        let bra = round_bra::<Rational>(&iv(&parts), K).unwrap();
        for n in top + 1..=top + 3 {
            assert!(apply_operator(&op(DeformedKind::PhiSquare, n), &bra).is_zero(), "(B) {parts:?} n={n}");
        }
        // (C): (Phi^(beta)_m)* |lambda) = 0 for m > lambda_1; the unstarred
        // operator creates and cannot annihilate
        let ket = round_ket::<Rational>(&iv(&parts), K).unwrap();
        for m in top + 1..=top + 3 {
            assert!(apply_operator(&op(DeformedKind::CapPhiRound, m).star(), &ket).is_zero(), "(C) {parts:?} m={m}");
            assert!(!apply_operator(&op(DeformedKind::CapPhiRound, m), &ket).is_zero());
        }
    }
}

#[test]
fn double_pairing_lemmas() {
    // (A): <<()| (Phi^[beta]_n - c_n) = 0 for n >= 0
    let empty = double_bra::<Rational>(&iv(&[]), K).unwrap();
    for n in 0..=6u32 {
        assert!(shifted(&op(DeformedKind::CapPhiSquare, n as i64), &cap_shift(n), &empty).is_zero(), "(A) n={n}");
    }
    for parts in subsets(4).into_iter().filter(|p| !p.is_empty()) {
        let top = parts[0];
        // (B): <<mu| (Phi^[beta]_n - c_n) = 0 for n > mu_1
        let bra = double_bra::<Rational>(&iv(&parts), K).unwrap();
        for n in top + 1..=top + 3 {
            let image = shifted(&op(DeformedKind::CapPhiSquare, n), &cap_shift(n as u32), &bra);
            assert!(image.is_zero(), "(B) {parts:?} n={n}");
        }
        // (C): (phi^(beta)_m)* |lambda>> = 0 for m > lambda_1
        let ket = double_ket::<Rational>(&iv(&parts), K).unwrap();
        for m in top + 1..=top + 3 {
            assert!(apply_operator(&op(DeformedKind::PhiRound, m).star(), &ket).is_zero(), "(C) {parts:?} m={m}");
        }
    }
}

#[test]
fn round_pairing_is_dual() {
    let indices = subsets(3);
    let bras: Vec<V> = indices.iter().map(|m| round_bra(&iv(m), K).unwrap()).collect();
    let kets: Vec<V> = indices.iter().map(|l| round_ket(&iv(l), K).unwrap()).collect();
    for (i, mu) in indices.iter().enumerate() {
        for (j, lam) in indices.iter().enumerate() {
            let delta = if i == j { bp("1") } else { bp("0") };
            assert_eq!(vev(&bras[i], &kets[j]).unwrap(), delta, "mu={mu:?} lambda={lam:?}");
        }
    }
}

#[test]
fn double_pairing_is_dual_on_strict_partitions() {
    // mu may end in 0; lambda is a strict partition
    let mus = subsets(3);
    let lams: Vec<Vec<i64>> = mus.iter().filter(|l| !l.contains(&0)).cloned().collect();
    let bras: Vec<V> = mus.iter().map(|m| double_bra(&iv(m), K).unwrap()).collect();
    let kets: Vec<V> = lams.iter().map(|l| double_ket(&iv(l), K).unwrap()).collect();
    for (mu, bra) in mus.iter().zip(&bras) {
        for (lam, ket) in lams.iter().zip(&kets) {
            let value = vev(bra, ket).unwrap();
            // a trailing zero part of mu is absorbed by phi_0 + 1
            let stripped: Vec<i64> = mu.iter().copied().filter(|&m| m > 0).collect();
            let delta = if &stripped == lam { bp("1") } else { bp("0") };
            assert_eq!(value, delta, "mu={mu:?} lambda={lam:?}");
        }
    }
}

#[test]
fn pairing_check_examples() {
    let check = |kind, l: &[i64], m: &[i64]| duality_pairing_check::<Rational>(kind, &iv(l), &iv(m), K).unwrap();
    assert_eq!(check(PairingKind::Round, &[0], &[0]), bp("1"));
    assert_eq!(check(PairingKind::Double, &[], &[]), bp("1"));
    assert_eq!(check(PairingKind::Round, &[2, 1], &[3, 1]), bp("0"));
    assert!(duality_pairing_check::<Rational>(PairingKind::Round, &iv(&[1, 2]), &iv(&[]), K).is_err());
    assert!(duality_pairing_check::<Rational>(PairingKind::Double, &iv(&[1, -1]), &iv(&[]), K).is_err());
}

#[test]
fn naive_gp_candidate_fails_duality() {
    for n in 1..=5u32 {
        let expected = beta_pow(n, q(-1, 1).powi(n) / q(1 << (n + 1), 1));
        assert_eq!(gp_prime_eval::<Rational>(n, K).unwrap(), expected, "n={n}");
        assert_eq!(gp_prime_eval::<Rational>(n, K).unwrap().at_beta_zero(), bp("0"));
    }
    assert_eq!(gp_prime_eval::<Rational>(1, K).unwrap(), bp("-1/4*beta"));
    assert_eq!(gp_prime_eval::<Rational>(2, K).unwrap(), bp("1/8*beta^2"));
    assert!(gp_prime_eval::<Rational>(0, K).is_err());
}

#[test]
fn special_ket_examples() {
    let sp = |s: &str| StrictPartition::parse(s).unwrap();
    let ket = |kind, s: &str| build_special_ket::<Rational>(kind, &sp(s), K).unwrap();
    assert_eq!(ket(SpecialKind::SmallQ, "1"), V::word(&[1, 0], K));
    let vac = V::vacuum(K);
    assert_eq!(ket(SpecialKind::SmallP, ""), vac.try_add(&apply_mode(0, &vac)).unwrap());
    for kind in [SpecialKind::BigQ, SpecialKind::BigP, SpecialKind::SmallQ] {
        assert_eq!(ket(kind, ""), vac);
    }
    let at_zero = ket(SpecialKind::BigQ, "1").with_ring(&Roster::beta_only(), Truncation::beta(0)).unwrap();
    assert_eq!(at_zero, V::word(&[1, 0], 0));
    // at beta = 0 the P-ket is 2^{-r} times the Q-ket
    let p_zero = ket(SpecialKind::BigP, "3,1").with_ring(&Roster::beta_only(), Truncation::beta(0)).unwrap();
    assert_eq!(p_zero, V::word(&[3, 1], 0).scale_scalar(&q(1, 4)));
    // q- and p-kets are finite: doubling K changes nothing
    for s in ["2,1", "3,2", "3,2,1"] {
        for kind in [SpecialKind::SmallQ, SpecialKind::SmallP] {
            let wide = build_special_ket::<Rational>(kind, &sp(s), 2 * K).unwrap();
            assert_eq!(wide.with_ring(&Roster::beta_only(), Truncation::beta(K)).unwrap(), ket(kind, s));
            assert!(wide.terms().all(|(_, c)| c.beta_degree().unwrap_or(0) <= 6));
        }
    }
}
