use kpq::genfun::*;
use kpq::partition::{IndexVector, StrictPartition};
use kpq::symfun::{cauchy_kernel, schur_p, schur_q};
use kpq::{Polynomial, Rational, SeriesContext, Truncation};

type P = Polynomial<Rational>;

fn sp(s: &str) -> StrictPartition {
    StrictPartition::parse(s).unwrap()
}

fn iv(s: &str) -> IndexVector {
    IndexVector::parse(s).unwrap()
}

fn two() -> Alphabet {
    Alphabet::variables(2)
}

// Two-variable tables with x = x1, y = x2. Three entries carry corrected
// misprints: gq_3 (y^3 term), gq_(3,2) (symmetric beta^2 terms) and gp_(3,1)
// (beta^2 terms).
const GQ_TABLE: &[(&str, &str)] = &[
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

const GP_TABLE: &[(&str, &str)] = &[
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

#[test]
fn gq_table_is_reproduced_in_canonical_form() {
    let a = two();
    for (lam, text) in GQ_TABLE {
        let want = P::parse(text, a.roster()).unwrap();
        let got = compute_gq::<Rational>(&iv(lam), &a).unwrap();
        assert_eq!(got.to_string(), want.to_string(), "gq({lam})");
        assert_eq!(got.to_json_string(), want.to_json_string());
    }
}

#[test]
fn gp_table_is_reproduced_in_canonical_form() {
    let a = two();
    for (lam, text) in GP_TABLE {
        let want = P::parse(text, a.roster()).unwrap();
        let got = compute_gp::<Rational>(&iv(lam), &a).unwrap();
        assert_eq!(got.to_string(), want.to_string(), "gp({lam})");
    }
}

#[test]
fn canonical_rendering_golden() {
    let a = two();
    assert_eq!(
        compute_gq::<Rational>(&iv("2"), &a).unwrap().to_string(),
        "2*x1^2 + 4*x1*x2 - beta*x1 + 2*x2^2 - beta*x2"
    );
}

/// `c x^n - beta x^{n-1} + ... + (-beta)^{n-1} x` in one variable.
fn one_row_oracle(n: u32, lead: i64) -> P {
    let a = Alphabet::variables(1);
    let r = a.roster();
    let mut acc = P::monomial(vec![0, n], Rational::from_integer(lead.into()), r);
    for k in 1..n {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        acc = &acc + &P::monomial(vec![k, n - k], Rational::from_integer(sign.into()), r);
    }
    acc
}

#[test]
fn one_row_closed_forms() {
    let a = Alphabet::variables(1);
    for n in 1..=8u32 {
        let lam = StrictPartition::new(vec![n]).unwrap();
        assert_eq!(gq::<Rational>(&lam, &a).unwrap(), one_row_oracle(n, 2), "gq_{n}");
        assert_eq!(gp::<Rational>(&lam, &a).unwrap(), one_row_oracle(n, 1), "gp_{n}");
        assert_eq!(gp_onerow::<Rational>(n, &a).unwrap(), one_row_oracle(n, 1));
    }
}

#[test]
fn one_row_product_rule_and_series() {
    for vars in 1..=3 {
        let a = Alphabet::variables(vars);
        for n in 0..=5u32 {
            let direct = compute_gq::<Rational>(&IndexVector::new(vec![n as i64]), &a).unwrap();
            assert_eq!(gq_product_rule::<Rational>(n, &a).unwrap(), direct, "n={n} N={vars}");
        }
    }
}

#[test]
fn stability_identities() {
    let a = two();
    for lam in sp("3,2,1").subpartitions() {
        let v = IndexVector::from(&lam);
        let padded = v.with_trailing_zero();
        assert_eq!(compute_gq::<Rational>(&padded, &a).unwrap(), compute_gq(&v, &a).unwrap(), "gq {lam}");
        assert!(compute_gp::<Rational>(&padded, &a).unwrap().is_zero(), "gp {lam}");
    }
    for lam in sp("2,1").subpartitions() {
        let v = IndexVector::from(&lam);
        assert_eq!(
            compute_big_gq::<Rational>(&v.with_trailing_zero(), &a, 6).unwrap(),
            compute_big_gq(&v, &a, 6).unwrap(),
            "GQ {lam}"
        );
    }
}

fn check_homogeneous(p: &P, weight: i64, dual: bool, label: &str) {
    for (m, _) in p.terms() {
        let x: i64 = m.exponents()[1..].iter().map(|&e| e as i64).sum();
        let k = m.beta() as i64;
        let ok = if dual { k + x == weight } else { x - k == weight };
        assert!(ok, "{label}: monomial {m:?} breaks homogeneity");
    }
}

#[test]
fn homogeneity() {
    let a = two();
    for lam in sp("3,2,1").subpartitions() {
        let w = lam.weight() as i64;
        check_homogeneous(&gq::<Rational>(&lam, &a).unwrap(), w, true, "gq");
        check_homogeneous(&gp::<Rational>(&lam, &a).unwrap(), w, true, "gp");
        check_homogeneous(&big_gq::<Rational>(&lam, &a, 6).unwrap(), w, false, "GQ");
        check_homogeneous(&big_gp::<Rational>(&lam, &a, 6).unwrap(), w, false, "GP");
    }
}

#[test]
fn variable_stability() {
    let three = Alphabet::variables(3);
    let a = two();
    let drop = |p: &P| p.set_zero(3);
    let up = |p: P| p.embed(three.roster()).unwrap();
    for lam in sp("3,2,1").subpartitions() {
        assert_eq!(drop(&gq::<Rational>(&lam, &three).unwrap()), up(gq(&lam, &a).unwrap()), "gq {lam}");
        assert_eq!(drop(&gp::<Rational>(&lam, &three).unwrap()), up(gp(&lam, &a).unwrap()), "gp {lam}");
    }
    for lam in sp("2,1").subpartitions() {
        assert_eq!(drop(&big_gq::<Rational>(&lam, &three, 5).unwrap()), up(big_gq(&lam, &a, 5).unwrap()), "GQ {lam}");
        assert_eq!(drop(&big_gp::<Rational>(&lam, &three, 5).unwrap()), up(big_gp(&lam, &a, 5).unwrap()), "GP {lam}");
    }
}

#[test]
fn negative_total_index_vanishes() {
    let a = two();
    for l in -3..=2i64 {
        for m in -3..=2i64 {
            for n in -3..=2i64 {
                if l + m + n < 0 {
                    let v = IndexVector::new(vec![l, m, n]);
                    assert!(compute_gq::<Rational>(&v, &a).unwrap().is_zero(), "{v}");
                }
            }
        }
    }
}

#[test]
fn gp_routes_agree() {
    let a = two();
    for lam in sp("3,2,1").subpartitions() {
        let v = IndexVector::from(&lam);
        assert_eq!(gp_from_gq_sums::<Rational>(&v, &a).unwrap(), compute_gp(&v, &a).unwrap(), "{lam}");
    }
}

#[test]
fn beta_zero_reduction() {
    let a = two();
    let d = 6;
    for lam in sp("3,2,1").subpartitions() {
        let q = schur_q::<Rational>(&lam, &a).unwrap();
        let p = schur_p::<Rational>(&lam, &a).unwrap();
        let t = Truncation::weight(d);
        assert_eq!(gq::<Rational>(&lam, &a).unwrap().at_beta_zero(), q, "gq {lam}");
        assert_eq!(gp::<Rational>(&lam, &a).unwrap().at_beta_zero(), p, "gp {lam}");
        assert_eq!(big_gq::<Rational>(&lam, &a, d).unwrap().at_beta_zero(), q.truncate(&t), "GQ {lam}");
        assert_eq!(big_gp::<Rational>(&lam, &a, d).unwrap().at_beta_zero(), p.truncate(&t), "GP {lam}");
    }
}

/// `sum_{|lambda| <= l} F_lambda(x) g_lambda(y)` over the kernel roster.
fn cauchy_sum(l: u32, d: u32, big: fn(&StrictPartition, &Alphabet, u32) -> kpq::Result<P>, small: fn(&StrictPartition, &Alphabet) -> kpq::Result<P>) -> P {
    let kernel_roster = cauchy_kernel::<Rational>(2, 2, 0).unwrap().roster().clone();
    let x = Alphabet::variables(2);
    let y = Alphabet::prefixed("y", 2);
    let t = Truncation::weight(d);
    let mut acc = P::zero(&kernel_roster);
    for lam in kpq::partition::strict_partitions_up_to(l) {
        let f = big(&lam, &x, d).unwrap().embed(&kernel_roster).unwrap();
        let g = small(&lam, &y).unwrap().embed(&kernel_roster).unwrap();
        acc = &acc + &f.mul_truncated(&g, &t);
    }
    acc
}

#[test]
fn cauchy_identities() {
    let d = 5;
    let kernel = cauchy_kernel::<Rational>(2, 2, d).unwrap();
    let q8 = cauchy_sum(8, d, big_gq, gp);
    let p8 = cauchy_sum(8, d, big_gp, gq);
    assert_eq!(q8, kernel);
    assert_eq!(p8, kernel);
    assert_eq!(cauchy_sum(9, d, big_gq, gp), q8);
    assert_eq!(cauchy_sum(9, d, big_gp, gq), p8);
}

#[test]
fn window_stability() {
    let a = two();
    let big = k_extraction::<Rational>(KFlavor::Q, &iv("1"), &a, 4).unwrap().unwrap();
    assert!(big.is_window_stable(5).unwrap());
    let small = gq_extraction::<Rational>(&iv("2,1"), &a).unwrap().unwrap();
    assert!(small.is_window_stable(3).unwrap());

    // pinning each window to the target exponent drops the pair corrections
    let e = small.exponent().to_vec();
    let pinned = SeriesContext::new(
        small.context().coeff_roster(),
        small.context().aux().to_vec(),
        e.iter().map(|&k| (k, k)).collect(),
    )
    .unwrap();
    let under = gq_extraction::<Rational>(&iv("2,1"), &a).unwrap().unwrap().with_context(pinned);
    assert!(!under.is_window_stable(3).unwrap());
}

#[test]
fn power_sum_alphabet_matches_variables() {
    let x = two();
    let ps = Alphabet::power_sums(6);
    let images: Vec<P> = (1..=6).map(|k| kpq::symfun::power_sum::<Rational>(k, &x).unwrap()).collect();
    let eval = |p: P, t: &Truncation| p.substitute(&images, x.roster(), t).unwrap();
    for lam in sp("3,2,1").subpartitions() {
        assert_eq!(eval(gq::<Rational>(&lam, &ps).unwrap(), &Truncation::NONE), gq(&lam, &x).unwrap(), "gq {lam}");
        assert_eq!(eval(gp::<Rational>(&lam, &ps).unwrap(), &Truncation::NONE), gp(&lam, &x).unwrap(), "gp {lam}");
        let t = Truncation::weight(6);
        assert_eq!(eval(big_gq::<Rational>(&lam, &ps, 6).unwrap(), &t), big_gq(&lam, &x, 6).unwrap(), "GQ {lam}");
        assert_eq!(eval(big_gp::<Rational>(&lam, &ps, 6).unwrap(), &t), big_gp(&lam, &x, 6).unwrap(), "GP {lam}");
    }
    assert!(big_gq::<Rational>(&sp("1"), &ps, 7).is_err());
}
