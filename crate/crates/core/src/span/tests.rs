use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use rand::Rng;

use super::*;
use crate::gen::{self, instance_rng};
use crate::interval::IntervalSet;
use crate::rational::{int, ratio, to_f64};
use crate::stepfn::common_partition;

fn l2() -> NormDescriptor {
    NormDescriptor::lp(2.0).unwrap()
}

fn random_pairs<R: Rng>(rng: &mut R, count: usize) -> Vec<EquidistributedPair> {
    (0..count)
        .map(|_| {
            let u = gen::random_step(rng, 4, 16, -3, 3, 1);
            let v = gen::shuffle(rng, &u);
            EquidistributedPair::new(u, v).unwrap()
        })
        .collect()
}

/// Least-squares residual `‖X - Σ c_j G_j‖_2` from the normal equations.
fn projection_residual(x: &StepFunction, gens: &[EquidistributedPair]) -> f64 {
    let diffs: Vec<StepFunction> = gens.iter().map(|p| p.difference()).collect();
    let mut all = vec![x];
    all.extend(diffs.iter());
    let (breaks, cols) = common_partition(&all);
    let w: Vec<f64> = breaks.windows(2).map(|b| to_f64(&(&b[1] - &b[0]))).collect();
    let n = w.len();
    let g = DMatrix::from_fn(n, gens.len(), |i, j| to_f64(&cols[j + 1][i]) * w[i].sqrt());
    let xv = DVector::from_fn(n, |i, _| to_f64(&cols[0][i]) * w[i].sqrt());
    let gram = g.transpose() * &g;
    let rhs = g.transpose() * &xv;
    let c = gram.clone().pseudo_inverse(1e-12).unwrap() * rhs;
    (xv - g * c).norm()
}

#[test]
fn pair_requires_equal_distribution() {
    let u = StepFunction::indicator(&IntervalSet::interval(int(0), ratio(1, 2)).unwrap());
    assert!(EquidistributedPair::new(u.clone(), StepFunction::one()).is_err());
    let v = StepFunction::indicator(&IntervalSet::interval(ratio(1, 2), int(1)).unwrap());
    let p = EquidistributedPair::new(u, v).unwrap();
    assert!(p.difference().mean().is_zero());
}

#[test]
fn descent_trivial_cases() {
    let x = StepFunction::indicator(&IntervalSet::interval(int(0), ratio(1, 3)).unwrap());
    let d = l2();
    let base = norm(&x, &d).unwrap();
    assert_eq!(distance_upper_bound(&x, &[], &d, 100).unwrap(), base);
    let mut rng = instance_rng(31, "descent", 0);
    let gens = random_pairs(&mut rng, 3);
    assert_eq!(distance_upper_bound(&x, &gens, &d, 0).unwrap(), base);
}

#[test]
fn descent_recovers_members_of_span() {
    let mut rng = instance_rng(32, "descent", 0);
    for _ in 0..5 {
        let gens = random_pairs(&mut rng, 3);
        let x = gens
            .iter()
            .enumerate()
            .fold(StepFunction::zero(), |acc, (j, p)| &acc + &p.difference().scale(&ratio(j as i64 * 2 - 1, 3)));
        let scale = norm(&x, &l2()).unwrap().value();
        let got = distance_upper_bound(&x, &gens, &l2(), 10_000).unwrap().value();
        assert!(got <= 1e-6 * scale, "{got} vs {scale}");
    }
}

#[test]
fn descent_matches_projection() {
    let mut rng = instance_rng(33, "descent", 0);
    for _ in 0..8 {
        let gens = random_pairs(&mut rng, 4);
        let x = gen::random_step(&mut rng, 6, 24, -4, 4, 1);
        let want = projection_residual(&x, &gens);
        let got = distance_upper_bound(&x, &gens, &l2(), 10_000).unwrap().value();
        assert!((got - want).abs() <= 1e-6 * want.max(1e-12), "{got} vs {want}");
    }
}

#[test]
fn descent_monotone_in_budget_and_generators() {
    let mut rng = instance_rng(34, "descent", 0);
    let gens = random_pairs(&mut rng, 4);
    let x = gen::random_step(&mut rng, 6, 24, -4, 4, 1);
    for d in [NormDescriptor::L1, NormDescriptor::Counterexample, l2()] {
        let mut last = f64::INFINITY;
        for budget in [0, 1, 5, 17, 64, 400] {
            let v = distance_upper_bound(&x, &gens, &d, budget).unwrap().value();
            assert!(v <= last, "{} budget {budget}", d.label());
            last = v;
        }
    }
    let small = distance_upper_bound(&x, &gens[..2], &l2(), 10_000).unwrap().value();
    let large = distance_upper_bound(&x, &gens, &l2(), 10_000).unwrap().value();
    assert!(large <= small * (1.0 + 1e-9));
}

#[test]
fn decomposition_json_export() {
    let d = smallcom_decomposition(&IntervalSet::interval(int(0), ratio(1, 8)).unwrap(), 7).unwrap();
    let v = d.to_json_value().unwrap();
    assert_eq!(v["pairs"].as_array().unwrap().len(), 7);
    assert_eq!(v["pairs"][0]["coefficient"], "1/7");
    assert!(v["residual_norms"]["L1"]["exact"].is_string());
    assert_eq!(v["residual"].as_array().unwrap().len(), 2);
}

#[test]
fn witness_examples() {
    assert!(law_invariance_witness(&RepresentedFunctional::new(StepFunction::constant(ratio(2, 3)))).is_none());

    let f = RepresentedFunctional::new(StepFunction::indicator(&IntervalSet::interval(int(0), ratio(1, 2)).unwrap()));
    let (a, b) = law_invariance_witness(&f).unwrap();
    assert_eq!(a, IntervalSet::interval(int(0), ratio(1, 4)).unwrap());
    assert_eq!(b, IntervalSet::interval(ratio(1, 2), ratio(3, 4)).unwrap());
    assert_eq!(f.apply(&StepFunction::indicator(&a)), ratio(1, 4));
    assert_eq!(f.apply(&StepFunction::indicator(&b)), int(0));

    let stairs =
        StepFunction::new(vec![int(0), ratio(1, 3), ratio(2, 3), int(1)], vec![int(0), int(1), int(2)]).unwrap();
    let f = RepresentedFunctional::new(stairs);
    let (a, b) = law_invariance_witness(&f).unwrap();
    assert_eq!(a.measure(), b.measure());
    assert_ne!(f.apply(&StepFunction::indicator(&a)), f.apply(&StepFunction::indicator(&b)));
}

#[test]
fn collapse_dichotomy() {
    let mut rng = instance_rng(35, "collapse", 0);
    for _ in 0..50 {
        let y = gen::random_nonconstant(&mut rng, 6, 30, -5, 5);
        let f = RepresentedFunctional::new(y);
        assert!(!f.collapses());
        let (a, b) = law_invariance_witness(&f).unwrap();
        assert_eq!(a.measure(), b.measure());
        assert_ne!(f.apply(&StepFunction::indicator(&a)), f.apply(&StepFunction::indicator(&b)));

        let c = RepresentedFunctional::new(StepFunction::constant(gen::random_rational(&mut rng, -5, 5, 7)));
        assert!(c.collapses() && law_invariance_witness(&c).is_none());
        let x = gen::random_step(&mut rng, 6, 30, -5, 5, 3);
        assert!(c.collapses_on(&x));
    }
}

#[test]
fn positive_part_examples() {
    let y = StepFunction::new(vec![int(0), ratio(1, 2), int(1)], vec![int(1), int(-1)]).unwrap();
    let f = RepresentedFunctional::new(y.clone());
    let plus = positive_part_functional(&f);
    assert_eq!(plus.apply(&StepFunction::one()), ratio(1, 2));
    // brute force over 0/1 multipliers of X on a 64-cell grid
    let cells: Vec<(Rational, Rational)> = (0..64).map(|i| (ratio(i, 64), ratio(i + 1, 64))).collect();
    let best = cells
        .iter()
        .map(|(a, b)| {
            let z = StepFunction::from_pieces(vec![(a.clone(), b.clone(), int(1))]).unwrap();
            f.apply(&z).max(Rational::zero())
        })
        .fold(Rational::zero(), |acc, v| acc + v);
    assert_eq!(best, ratio(1, 2));

    let pos = RepresentedFunctional::new(y.abs());
    assert_eq!(positive_part_functional(&pos), pos);
}

#[test]
fn positive_part_matches_sign_rule() {
    let mut rng = instance_rng(36, "positive", 0);
    for _ in 0..50 {
        let y = gen::random_step(&mut rng, 32, 32, -4, 4, 2);
        let x = gen::random_step(&mut rng, 32, 32, 0, 4, 2);
        let f = RepresentedFunctional::new(y.clone());
        let z_star = x.restrict(&y.set_where(|v| *v > Rational::zero()));
        assert!(z_star.le_pointwise(&x) && z_star.is_nonnegative());
        assert_eq!(positive_part_functional(&f).apply(&x), f.apply(&z_star));
    }
}
