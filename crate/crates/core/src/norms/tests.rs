use num_traits::One;
use proptest::prelude::*;

use super::*;
use crate::gen::{self, instance_rng};
use crate::interval::IntervalSet;
use crate::rational::{int, ratio};

fn indicator(a: Rational, b: Rational) -> StepFunction {
    StepFunction::indicator(&IntervalSet::interval(a, b).unwrap())
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

#[test]
fn counterexample_norm_of_one_is_one() {
    let v = norm(&StepFunction::one(), &NormDescriptor::Counterexample).unwrap();
    assert_eq!(v.exact, Some(int(1)));
}

#[test]
fn counterexample_terms_of_small_indicator() {
    let x = indicator(int(0), ratio(1, 4));
    // oracle: term(n) = n 2^n min(s_n, 1/4), with s_n = 1/(2^n n!)
    let mut fact = 1i64;
    for n in 1..=10u32 {
        fact *= n as i64;
        let s = ratio(1, (1i64 << n) * fact);
        let want = Rational::from_integer((n as i64 * (1i64 << n)).into()) * s.min(ratio(1, 4));
        assert_eq!(counterexample_term(&x.decreasing_rearrangement(), n), want, "n = {n}");
    }
    assert_eq!(norm(&x, &NormDescriptor::Counterexample).unwrap().exact, Some(int(1)));
    let p = norm_term_profile(&x, 3);
    assert_eq!(p.terms, vec![(1, ratio(1, 2)), (2, int(1)), (3, ratio(1, 2))]);
    assert_eq!(p.cutoff, 2);
}

#[test]
fn term_profiles_of_constants() {
    let p = norm_term_profile(&StepFunction::one(), 5);
    let want: Vec<(u32, Rational)> =
        vec![(1, int(1)), (2, int(1)), (3, ratio(1, 2)), (4, ratio(1, 6)), (5, ratio(1, 24))];
    assert_eq!(p.terms, want);
    assert_eq!(p.cutoff, 1);
    let z = norm_term_profile(&StepFunction::zero(), 6);
    assert!(z.terms.iter().all(|(_, t)| t.is_zero()));
    assert!(p.to_csv().starts_with("n,term_exact,term_decimal\n1,1/1,1.0000"));
}

#[test]
fn lorentz_of_indicator_matches_closed_form() {
    for &(p, q) in &[(2.0f64, 1.0f64), (3.0, 2.0), (1.5, 4.0), (2.0, 2.0), (4.0, 1.0)] {
        for &(n, d) in &[(1i64, 4i64), (3, 7), (1, 1), (1, 1000)] {
            let a = n as f64 / d as f64;
            let x = indicator(int(0), ratio(n, d));
            // ∫_0^a t^{q/p-1} dt = (p/q) a^{q/p}
            let want = (p / q).powf(1.0 / q) * a.powf(1.0 / p);
            let got = norm(&x, &NormDescriptor::lorentz(p, q).unwrap()).unwrap();
            assert!(rel_close(got.approx, want, 1e-13), "p={p} q={q} a={a}: {} vs {want}", got.approx);
            assert!((got.approx - want).abs() <= got.error_bound.max(1e-15));
        }
    }
    let weak = norm(&indicator(int(0), ratio(1, 8)), &NormDescriptor::lorentz(3.0, f64::INFINITY).unwrap()).unwrap();
    assert!(rel_close(weak.approx, 0.5, 1e-15));
}

#[test]
fn lp_exact_roots() {
    let x = indicator(int(0), ratio(1, 4));
    assert_eq!(norm(&x, &NormDescriptor::lp(2.0).unwrap()).unwrap().exact, Some(ratio(1, 2)));
    let y = indicator(int(0), ratio(1, 3));
    let v = norm(&y, &NormDescriptor::lp(2.0).unwrap()).unwrap();
    assert!(v.exact.is_none());
    assert!(rel_close(v.approx, (1.0f64 / 3.0).sqrt(), 1e-15));
    let frac = norm(&x, &NormDescriptor::lp(2.5).unwrap()).unwrap();
    assert!(rel_close(frac.approx, 0.25f64.powf(0.4), 1e-14));
}

#[test]
fn orlicz_norms_of_indicators() {
    // ‖1_A‖_Φ = 1/Φ^{-1}(1/P(A))
    let x = indicator(int(0), ratio(1, 5));
    let exp = norm(&x, &NormDescriptor::Orlicz(YoungFunction::ExpMinusOne)).unwrap();
    assert!(rel_close(exp.approx, 1.0 / 6f64.ln(), 1e-11));
    let sq = norm(&x, &NormDescriptor::orlicz_power(2.0).unwrap()).unwrap();
    assert!(rel_close(sq.approx, 0.2f64.sqrt(), 1e-11));
    assert!(norm(&StepFunction::zero(), &NormDescriptor::Orlicz(YoungFunction::ExpMinusOne)).unwrap().is_zero());
}

#[test]
fn orlicz_bracket_failures_are_reported() {
    let wall = NormDescriptor::Orlicz(YoungFunction::Custom {
        name: "wall".into(),
        phi: std::sync::Arc::new(|u| if u > 0.0 { f64::INFINITY } else { 0.0 }),
    });
    let err = norm(&StepFunction::one(), &wall).unwrap_err();
    assert!(matches!(err, crate::Error::OrliczBracket(_)), "{err}");
    let nan =
        NormDescriptor::Orlicz(YoungFunction::Custom { name: "nan".into(), phi: std::sync::Arc::new(|_| f64::NAN) });
    assert!(matches!(norm(&StepFunction::one(), &nan), Err(crate::Error::OrliczBracket(_))));
    // a jump to ∞ above u = 2: the norm of 1 is 1/2
    let jump = NormDescriptor::Orlicz(YoungFunction::Custom {
        name: "jump".into(),
        phi: std::sync::Arc::new(|u| if u <= 2.0 { u / 4.0 } else { f64::INFINITY }),
    });
    assert!(rel_close(norm(&StepFunction::one(), &jump).unwrap().approx, 0.5, 1e-11));
}

#[test]
fn l1_domination() {
    let (l1, c) = l1_domination_check(&StepFunction::one(), &NormDescriptor::Counterexample).unwrap();
    assert_eq!((l1, c.exact), (int(1), Some(int(1))));
    let (l1, c) = l1_domination_check(&indicator(int(0), ratio(1, 4)), &NormDescriptor::Counterexample).unwrap();
    assert_eq!((l1, c.exact), (ratio(1, 4), Some(int(1))));
    let mut rng = instance_rng(3, "l1-domination", 0);
    for _ in 0..100 {
        let x = gen::random_step(&mut rng, 8, 64, -20, 20, 3);
        for d in NormDescriptor::panel() {
            let (l1, v) = l1_domination_check(&x, &d).unwrap();
            let c = l1_embedding_constant(&d);
            match (&d, &v.exact) {
                (NormDescriptor::Counterexample, Some(e)) => assert!(l1 <= *e),
                _ => assert!(rational::to_f64(&l1) <= c * v.approx * (1.0 + 1e-12), "{}", d.label()),
            }
        }
    }
}

#[test]
fn lorentz_pp_equals_lp_and_orlicz_power_equals_lp() {
    let mut rng = instance_rng(4, "lpp", 0);
    for i in 0..60 {
        let x = gen::random_step(&mut rng, 10, 97, -9, 9, 7);
        let p = 1.0 + (i % 7) as f64 * 0.5;
        let lp = norm(&x, &NormDescriptor::lp(p).unwrap()).unwrap().approx;
        if p > 1.0 {
            let lpp = norm(&x, &NormDescriptor::lorentz(p, p).unwrap()).unwrap().approx;
            assert!(rel_close(lp, lpp, 1e-12), "p={p}: {lp} vs {lpp}");
        }
        let orl = norm(&x, &NormDescriptor::orlicz_power(p).unwrap()).unwrap().approx;
        assert!(rel_close(lp, orl, 1e-11), "p={p}: {lp} vs {orl}");
    }
}

#[test]
fn counterexample_triangle_inequality() {
    let mut rng = instance_rng(5, "triangle", 0);
    for _ in 0..500 {
        let x = gen::random_step(&mut rng, 8, 1 << 10, -50, 50, 1);
        let y = gen::random_step(&mut rng, 8, 3 << 8, -50, 50, 1);
        let lhs = counterexample_norm(&(&x + &y));
        assert!(lhs <= counterexample_norm(&x) + counterexample_norm(&y));
    }
}

#[test]
fn monotone_truncations_increase_the_norm() {
    let mut rng = instance_rng(6, "monotone", 0);
    for _ in 0..30 {
        let x = gen::random_step(&mut rng, 10, 1 << 12, 0, 1000, 1);
        let mut prev = Rational::zero();
        for level in [1, 10, 50, 100, 300, 700, 1000] {
            let cap = int(level);
            let trunc = x.map(|v| v.min(&cap).clone());
            let n = counterexample_norm(&trunc);
            assert!(n >= prev);
            prev = n;
        }
        assert_eq!(prev, counterexample_norm(&x));
    }
}

#[test]
fn descriptor_json() {
    for d in NormDescriptor::panel() {
        let text = serde_json::to_string(&d).unwrap();
        let back: NormDescriptor = serde_json::from_str(&text).unwrap();
        assert_eq!(back.label(), d.label());
    }
    let d = NormDescriptor::from_json(r#"{"kind": "lorentz", "p": 2, "q": "inf"}"#).unwrap();
    assert_eq!(d.label(), "Lorentz(2,inf)");
    for bad in [
        r#"{"kind": "Lp", "p": 0.5}"#,
        r#"{"kind": "Lorentz", "p": 1, "q": 2}"#,
        r#"{"kind": "Lorentz", "p": 2, "q": 0.5}"#,
        r#"{"kind": "Orlicz", "phi": "u^3"}"#,
        r#"{"kind": "Lp"}"#,
        r#"{"kind": "L7"}"#,
        r#"[1, 2]"#,
    ] {
        assert!(NormDescriptor::from_json(bad).is_err(), "{bad}");
    }
}

#[test]
fn norm_value_comparison() {
    assert!(NormValue::exact(ratio(1, 3)).le_within(&NormValue::exact(ratio(1, 3)), 0.0));
    assert!(!NormValue::exact(ratio(1, 2)).le_within(&NormValue::exact(ratio(1, 3)), 0.5));
    assert!(NormValue::approx(1.0 + 1e-12, 0.0).le_within(&NormValue::exact(Rational::one()), 1e-9));
    assert!(!NormValue::approx(1.1, 0.0).le_within(&NormValue::approx(1.0, 0.0), 1e-9));
}

fn small_step() -> impl Strategy<Value = StepFunction> {
    prop::collection::vec((1u32..20, -30i64..30), 1..8).prop_map(|cells| {
        let total: u32 = cells.iter().map(|c| c.0).sum();
        let mut acc = 0u32;
        let mut breaks = vec![Rational::zero()];
        let mut values = Vec::new();
        for (w, v) in cells {
            acc += w;
            breaks.push(ratio(acc as i64, total as i64));
            values.push(int(v));
        }
        StepFunction::new(breaks, values).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn law_invariance(x in small_step(), seed in any::<u64>()) {
        let mut rng = instance_rng(seed, "law", 0);
        let y = gen::shuffle(&mut rng, &x).map(|v| if seed % 2 == 0 { -v } else { v.clone() });
        for d in NormDescriptor::panel() {
            let (a, b) = (norm(&x, &d).unwrap(), norm(&y, &d).unwrap());
            match (&a.exact, &b.exact) {
                (Some(ea), Some(eb)) => prop_assert_eq!(ea, eb),
                _ => prop_assert!((a.approx - b.approx).abs() <= a.error_bound + b.error_bound + 1e-15),
            }
        }
    }

    #[test]
    fn lattice_property(x in small_step(), shrink in prop::collection::vec(0u32..=4, 1..8)) {
        // |Y| <= |X| by scaling each segment by a factor in [0, 1]
        let factors: Vec<Rational> = shrink.iter().map(|&k| ratio(k as i64, 4)).collect();
        let segs = x.to_segments().into_iter().enumerate().map(|(i, mut s)| {
            s.v *= &factors[i % factors.len()];
            s
        }).collect();
        let y = StepFunction::from_segments(segs).unwrap();
        for d in NormDescriptor::panel() {
            let (a, b) = (norm(&y, &d).unwrap(), norm(&x, &d).unwrap());
            prop_assert!(a.le_within(&b, 1e-12), "{}: {} > {}", d.label(), a.approx, b.approx);
        }
    }
}
