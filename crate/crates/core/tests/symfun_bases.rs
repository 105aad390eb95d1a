use kpq::genfun::{big_gp, big_gq, gp, gq, Alphabet};
use kpq::partition::{odd_partitions_up_to, StrictPartition};
use kpq::symfun::*;
use kpq::{Polynomial, Rational, Roster, Scalar, Truncation};

type P = Polynomial<Rational>;

fn q(n: i64, d: i64) -> Rational {
    Rational::from_frac(n, d)
}

fn sp(s: &str) -> StrictPartition {
    StrictPartition::parse(s).unwrap()
}

fn parse(s: &str, a: &Alphabet) -> P {
    P::parse(s, a.roster()).unwrap()
}

/// `x / (1 + c beta x)` per variable as an explicit geometric series.
fn geometric_image(a: &Alphabet, var: usize, c: Rational, d: u32) -> P {
    let r = a.roster();
    let x = P::var_index(var, r);
    let step = (&P::beta(r) * &x).scale(&-c);
    let mut term = x.clone();
    let mut acc = P::zero(r);
    for _ in 0..d {
        acc = &acc + &term;
        term = &term * &step;
    }
    acc.truncate(&Truncation::weight(d))
}

#[test]
fn power_sum_examples() {
    let a = Alphabet::variables(3);
    assert_eq!(power_sum::<Rational>(2, &a).unwrap(), parse("x1^2 + x2^2 + x3^2", &a));
    let b = Alphabet::variables(1);
    assert_eq!(power_sum::<Rational>(3, &b).unwrap(), parse("x1^3", &b));
    assert!(power_sum::<Rational>(0, &b).is_err());
}

#[test]
fn big_beta_power_sums_match_substitution() {
    for n in 1..=6u32 {
        for vars in 1..=3usize {
            let a = Alphabet::variables(vars);
            for d in n..=8 {
                let images: Vec<P> = (1..=vars).map(|j| geometric_image(&a, j, q(1, 2), d)).collect();
                let oracle = power_sum::<Rational>(n, &a)
                    .unwrap()
                    .substitute(&images, a.roster(), &Truncation::weight(d))
                    .unwrap();
                assert_eq!(beta_power_sum_big::<Rational>(n, &a, d).unwrap(), oracle, "n={n} N={vars} D={d}");
            }
        }
    }
    let one = Alphabet::variables(1);
    assert_eq!(
        beta_power_sum_big::<Rational>(1, &one, 3).unwrap(),
        parse("x1 - 1/2*beta*x1^2 + 1/4*beta^2*x1^3", &one)
    );
}

#[test]
fn small_beta_power_sums_match_translation() {
    for n in 1..=6u32 {
        for vars in 1..=3usize {
            let a = Alphabet::variables(vars);
            let r = a.roster();
            let half_beta = P::beta(r).scale(&q(1, 2));
            let mut oracle = P::zero(r);
            for j in 1..=vars {
                let shifted = &P::var_index(j, r) + &half_beta;
                let mut pw = P::one(r);
                let mut base = P::one(r);
                for _ in 0..n {
                    pw = &pw * &shifted;
                    base = &base * &half_beta;
                }
                oracle = &oracle + &(&pw - &base);
            }
            assert_eq!(beta_power_sum_small::<Rational>(n, &a).unwrap(), oracle, "n={n} N={vars}");
        }
    }
    let two = Alphabet::variables(2);
    assert_eq!(beta_power_sum_small::<Rational>(2, &two).unwrap(), parse("x1^2 + x2^2 + beta*x1 + beta*x2", &two));
}

#[test]
fn beta_power_sums_reduce_at_beta_zero() {
    let a = Alphabet::variables(2);
    for n in 1..=5 {
        let p = power_sum::<Rational>(n, &a).unwrap();
        assert_eq!(beta_power_sum_big::<Rational>(n, &a, 7).unwrap().at_beta_zero(), p);
        assert_eq!(beta_power_sum_small::<Rational>(n, &a).unwrap().at_beta_zero(), p);
    }
}

#[test]
fn one_row_schur_q_matches_product_oracle() {
    // (1 + x z)/(1 - x z) = 1 + 2 sum_k x^k z^k, multiplied over two variables
    let a = Alphabet::variables(2);
    let r = a.roster();
    let c = |j: usize, k: u32| {
        if k == 0 {
            P::one(r)
        } else {
            let mut e = vec![0; 3];
            e[j] = k;
            P::monomial(e, q(2, 1), r)
        }
    };
    for n in 1..=7u32 {
        let oracle = (0..=n).fold(P::zero(r), |acc, i| &acc + &(&c(1, i) * &c(2, n - i)));
        let lam = StrictPartition::new(vec![n]).unwrap();
        assert_eq!(schur_q::<Rational>(&lam, &a).unwrap(), oracle, "n={n}");
    }
}

#[test]
fn schur_examples() {
    let a = Alphabet::variables(2);
    assert_eq!(schur_q::<Rational>(&sp("1"), &a).unwrap(), parse("2*x1 + 2*x2", &a));
    assert_eq!(schur_q::<Rational>(&sp("2,1"), &a).unwrap(), parse("4*x1^2*x2 + 4*x1*x2^2", &a));
    assert_eq!(schur_p::<Rational>(&sp("2,1"), &a).unwrap(), parse("x1^2*x2 + x1*x2^2", &a));
    assert_eq!(schur_q::<Rational>(&StrictPartition::empty(), &a).unwrap(), P::one(a.roster()));
    // three parts vanish in two variables
    assert!(schur_q::<Rational>(&sp("3,2,1"), &a).unwrap().is_zero());
}

#[test]
fn schur_q_in_three_variables_matches_power_sum_form() {
    let x = Alphabet::variables(3);
    let ps = Alphabet::power_sums(6);
    for lam in sp("3,2,1").subpartitions() {
        let direct = schur_q::<Rational>(&lam, &x).unwrap();
        let pform = schur_q::<Rational>(&lam, &ps).unwrap();
        let images: Vec<P> = (1..=6).map(|k| power_sum::<Rational>(k, &x).unwrap()).collect();
        let evaluated = pform.substitute(&images, x.roster(), &Truncation::NONE).unwrap();
        assert_eq!(direct, evaluated, "{lam}");
        assert!(direct.is_symmetric());
    }
}

#[test]
fn iota_examples() {
    let one = Alphabet::variables(1);
    let p1 = power_sum::<Rational>(1, &one).unwrap();
    assert_eq!(iota_big(&p1, &one, 2).unwrap(), parse("x1 - 1/2*beta*x1^2", &one));
    assert_eq!(iota_big(&P::one(one.roster()), &one, 4).unwrap(), P::one(one.roster()));
    let two = Alphabet::variables(2);
    let err = iota_big(&parse("x1 - x2", &two), &two, 3).unwrap_err();
    assert!(matches!(err, kpq::Error::Symmetry(_)));
    let plain = to_p_basis(&power_sum::<Rational>(1, &two).unwrap(), Flavor::Small, &two, 2).unwrap();
    assert_eq!(iota_small(&schur_q_plain_expansion::<Rational>(&sp("1")).unwrap(), &two).unwrap(), parse("2*x1 + 2*x2", &two));
    assert_eq!(plain.terms.len(), 1);
}

#[test]
fn iota_on_power_sums_agrees_with_substitution() {
    let x = Alphabet::variables(2);
    let ps = Alphabet::power_sums(5);
    for lam in sp("3,2").subpartitions() {
        let via_ps = q_beta::<Rational>(&lam, Flavor::Big, &x, 5).unwrap();
        let via_sub = iota_big(&schur_q::<Rational>(&lam, &x).unwrap(), &x, 5).unwrap();
        assert_eq!(via_ps, via_sub, "{lam}");
        // the power-sum alphabet route evaluated in variables
        let pform = q_beta::<Rational>(&lam, Flavor::Big, &ps, 5).unwrap();
        let images: Vec<P> = (1..=5).map(|k| power_sum::<Rational>(k, &x).unwrap()).collect();
        assert_eq!(pform.substitute(&images, x.roster(), &Truncation::weight(5)).unwrap(), via_ps);
    }
}

#[test]
fn q_beta_examples() {
    let a = Alphabet::variables(2);
    assert_eq!(q_beta::<Rational>(&sp("1"), Flavor::Small, &a, 0).unwrap(), parse("2*x1 + 2*x2", &a));
    let small = q_beta::<Rational>(&sp("2,1"), Flavor::Small, &a, 0).unwrap();
    assert_eq!(small.at_beta_zero(), parse("4*x1^2*x2 + 4*x1*x2^2", &a));
    for lam in sp("3,2,1").subpartitions() {
        let classical = schur_q::<Rational>(&lam, &a).unwrap();
        assert_eq!(q_beta::<Rational>(&lam, Flavor::Small, &a, 0).unwrap().at_beta_zero(), classical);
        assert_eq!(
            q_beta::<Rational>(&lam, Flavor::Big, &a, 6).unwrap().at_beta_zero(),
            classical.truncate(&Truncation::weight(6))
        );
    }
}

#[test]
fn to_p_basis_examples() {
    let a = Alphabet::variables(2);
    let gq1 = parse("2*x1 + 2*x2", &a);
    let e = to_p_basis(&gq1, Flavor::Small, &a, 1).unwrap();
    let rho = kpq::partition::OddPartition::new(vec![1]).unwrap();
    assert_eq!(e.basis, PBasis::SmallBeta);
    assert_eq!(e.terms.len(), 1);
    assert_eq!(e.coefficient(&rho), P::from_i64(2, &Roster::beta_only()));

    let c = to_p_basis(&P::one(a.roster()), Flavor::Big, &a, 2).unwrap();
    let empty = kpq::partition::OddPartition::new(vec![]).unwrap();
    assert_eq!(c.terms.len(), 1);
    assert_eq!(c.coefficient(&empty), P::one(&Roster::beta_only()));

    assert!(matches!(to_p_basis(&parse("x1 - x2", &a), Flavor::Small, &a, 1), Err(kpq::Error::Basis(_))));
    // p2 is symmetric but outside the odd power-sum ring
    assert!(matches!(to_p_basis(&parse("x1^2 + x2^2", &a), Flavor::Small, &a, 2), Err(kpq::Error::Basis(_))));
    // too few variables to separate degree 3
    assert!(matches!(to_p_basis(&parse("x1^3 + x2^3", &a), Flavor::Small, &a, 3), Err(kpq::Error::Basis(_))));
}

#[test]
fn to_p_basis_roundtrips_q_beta() {
    let x = Alphabet::variables(4);
    for lam in sp("3,1").subpartitions() {
        let expected = schur_q_plain_expansion::<Rational>(&lam).unwrap();
        let small = to_p_basis(&q_beta::<Rational>(&lam, Flavor::Small, &x, 0).unwrap(), Flavor::Small, &x, 4).unwrap();
        assert_eq!(small.terms, expected.terms, "{lam}");
        let big = to_p_basis(&q_beta::<Rational>(&lam, Flavor::Big, &x, 4).unwrap(), Flavor::Big, &x, 4).unwrap();
        assert_eq!(big.terms, expected.terms, "{lam}");
    }
}

#[test]
fn pairing_examples_and_q_beta_duality() {
    let ps = Alphabet::power_sums(6);
    let r1 = kpq::partition::OddPartition::new(vec![1]).unwrap();
    let beta = Roster::beta_only();
    let one_term = |basis| PBasisExpansion::<Rational> { basis, terms: [(r1.clone(), P::one(&beta))].into() };
    assert_eq!(pairing(&one_term(PBasis::BigBeta), &one_term(PBasis::SmallBeta)).unwrap(), P::constant(q(1, 2), &beta));
    assert!(pairing(&one_term(PBasis::SmallBeta), &one_term(PBasis::BigBeta)).is_err());

    let subs = sp("3,2,1").subpartitions();
    for lam in &subs {
        let big = to_p_basis(&q_beta::<Rational>(lam, Flavor::Big, &ps, 6).unwrap(), Flavor::Big, &ps, 6).unwrap();
        for mu in &subs {
            let small = to_p_basis(&q_beta::<Rational>(mu, Flavor::Small, &ps, 6).unwrap(), Flavor::Small, &ps, 6).unwrap();
            let expected = if lam == mu { 1i64 << lam.len() } else { 0 };
            assert_eq!(pairing(&big, &small).unwrap(), P::from_i64(expected, &beta), "{lam} {mu}");
        }
    }
}

#[test]
fn genfun_duality_via_power_sums() {
    let ps = Alphabet::power_sums(6);
    let beta = Roster::beta_only();
    let subs = sp("3,2,1").subpartitions();
    let gps: Vec<_> = subs.iter().map(|m| to_p_basis(&gp::<Rational>(m, &ps).unwrap(), Flavor::Small, &ps, 6).unwrap()).collect();
    let gqs: Vec<_> = subs.iter().map(|m| to_p_basis(&gq::<Rational>(m, &ps).unwrap(), Flavor::Small, &ps, 6).unwrap()).collect();
    for (i, lam) in subs.iter().enumerate() {
        let gq_big = to_p_basis(&big_gq::<Rational>(lam, &ps, 6).unwrap(), Flavor::Big, &ps, 6).unwrap();
        let gp_big = to_p_basis(&big_gp::<Rational>(lam, &ps, 6).unwrap(), Flavor::Big, &ps, 6).unwrap();
        for j in 0..subs.len() {
            let expected = P::from_i64((i == j) as i64, &beta);
            assert_eq!(pairing(&gq_big, &gps[j]).unwrap(), expected, "<GQ{lam}, gp{}>", subs[j]);
            assert_eq!(pairing(&gp_big, &gqs[j]).unwrap(), expected, "<GP{lam}, gq{}>", subs[j]);
        }
    }
}

#[test]
fn cauchy_kernel_examples() {
    let k = cauchy_kernel::<Rational>(1, 1, 2).unwrap();
    assert_eq!(k, P::parse("1 + 2*x1*y1", k.roster()).unwrap());
    let k0 = cauchy_kernel::<Rational>(1, 1, 4).unwrap().at_beta_zero();
    assert_eq!(k0, P::parse("1 + 2*x1*y1 + 2*x1^2*y1^2", k0.roster()).unwrap());
}

#[test]
fn cauchy_kernel_power_sum_form() {
    let d = 6;
    let k = cauchy_kernel::<Rational>(2, 2, d).unwrap();
    let r = k.roster().clone();
    let xa = Alphabet::variables(2);
    let ya = Alphabet::prefixed("y", 2);
    let trunc = Truncation::weight(d);
    let mut acc = P::zero(&r);
    for rho in odd_partitions_up_to(d) {
        let mut term = P::constant(Rational::from_i64(1 << rho.len()) / z_scalar::<Rational>(&rho), &r);
        for &k in rho.parts() {
            let px = beta_power_sum_big::<Rational>(k, &xa, d).unwrap().embed(&r).unwrap();
            let py = beta_power_sum_small::<Rational>(k, &ya).unwrap().embed(&r).unwrap();
            term = term.mul_truncated(&px, &trunc).mul_truncated(&py, &trunc);
        }
        acc = &acc + &term;
    }
    assert_eq!(acc, k);
}

#[test]
fn outputs_are_symmetric_in_x() {
    let a = Alphabet::variables(3);
    for lam in sp("3,1").subpartitions() {
        assert!(schur_q::<Rational>(&lam, &a).unwrap().is_symmetric());
        assert!(q_beta::<Rational>(&lam, Flavor::Small, &a, 0).unwrap().is_symmetric());
        assert!(q_beta::<Rational>(&lam, Flavor::Big, &a, 5).unwrap().is_symmetric());
    }
}

#[test]
fn expansion_json_shape() {
    let a = Alphabet::variables(2);
    let e = to_p_basis(&parse("2*x1 + 2*x2", &a), Flavor::Small, &a, 1).unwrap();
    let j = serde_json::to_value(e.to_json()).unwrap();
    assert_eq!(j["basis"], "pg");
    assert_eq!(j["terms"][0]["partition"], serde_json::json!([1]));
}
