//! Structural invariants over seeded random inputs.

use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

use rikit::gen::{self, instance_rng, InstanceRng};
use rikit::lab::{build_witness, c, GrowthInstance, WitnessConfig};
use rikit::majorization::ConvexWeights;
use rikit::norms::{norm, norm_term_profile, NormDescriptor};
use rikit::rational::{factorial, pow2};
use rikit::span::{general_set_decomposition, simple_function_decomposition};
use rikit::{disjoint_sum, rank_coupling, Direction, IntervalSet, Rational, StepFunction};

fn rng(seed: u64) -> InstanceRng {
    instance_rng(seed, "properties", 0)
}

fn canonical(x: &StepFunction) -> bool {
    let b = x.breakpoints();
    b.first() == Some(&Rational::zero())
        && b.last() == Some(&Rational::one())
        && b.windows(2).all(|w| w[0] < w[1])
        && x.values().len() + 1 == b.len()
        && x.values().windows(2).all(|w| w[0] != w[1])
}

fn random(r: &mut InstanceRng) -> StepFunction {
    gen::random_step(r, 7, 24, -5, 5, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arithmetic_stays_canonical(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y) = (random(&mut r), random(&mut r));
        for z in [&x + &y, &x - &y, &x * &y, x.abs(), x.positive_part(), y.decreasing_rearrangement()] {
            prop_assert!(canonical(&z));
        }
    }

    #[test]
    fn distributions_are_probability_laws(seed in any::<u64>()) {
        let x = random(&mut rng(seed));
        let masses = x.distribution().masses().clone();
        prop_assert!(masses.values().all(|m| *m > Rational::zero()));
        prop_assert_eq!(masses.values().fold(Rational::zero(), |a, m| a + m), Rational::one());
    }

    #[test]
    fn rearrangement_is_nonincreasing_and_equidistributed(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random(&mut r);
        let star = x.decreasing_rearrangement();
        prop_assert!(star.is_nonincreasing());
        prop_assert!(star.same_distribution(&x.abs()));
        let shuffled = gen::shuffle(&mut r, &x);
        prop_assert!(shuffled.same_distribution(&x));
        prop_assert_eq!(shuffled.decreasing_rearrangement(), star);
    }

    #[test]
    fn partial_integral_additive_and_monotone(seed in any::<u64>(), a in 0u32..=60, b in 0u32..=60) {
        let x = random(&mut rng(seed)).abs();
        let (s, t) = (Rational::new(a.min(b).into(), 60.into()), Rational::new(a.max(b).into(), 60.into()));
        let (is, it) = (x.partial_integral(&s).unwrap(), x.partial_integral(&t).unwrap());
        prop_assert!(is <= it);
        let between = x.restrict(&IntervalSet::interval(s.clone(), t.clone()).unwrap()).mean();
        prop_assert_eq!(is + between, it);
    }

    #[test]
    fn interval_sets_keep_their_shape(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = gen::random_interval_set(&mut r, 4, 30);
        let b = gen::random_interval_set(&mut r, 4, 30);
        for s in [a.union(&b), a.intersection(&b), a.difference(&b), a.complement()] {
            let parts = s.parts();
            prop_assert!(parts.iter().all(|(x, y)| x < y));
            prop_assert!(parts.windows(2).all(|w| w[0].1 < w[1].0));
            prop_assert!(s.measure() <= Rational::one());
        }
        prop_assert_eq!(a.union(&b).measure() + a.intersection(&b).measure(), a.measure() + b.measure());
        prop_assert_eq!(a.measure() + a.complement().measure(), Rational::one());
    }

    #[test]
    fn rank_coupling_postconditions(seed in any::<u64>(), below in any::<bool>()) {
        let mut r = rng(seed);
        let x1 = random(&mut r);
        let gap = gen::random_step(&mut r, 5, 24, 0, 3, 2);
        let xp = gen::shuffle(&mut r, &x1);
        let (x2, dir) = if below { (&x1 - &gap, Direction::Dominates) } else { (&x1 + &gap, Direction::Dominated) };
        let out = rank_coupling(&xp, &x1, &x2, dir).unwrap();
        prop_assert!(out.same_distribution(&x2));
        let ordered = if below { out.le_pointwise(&xp) } else { xp.le_pointwise(&out) };
        prop_assert!(ordered);
    }

    #[test]
    fn disjoint_sums_commute_with_abs_and_compress(seed in any::<u64>()) {
        let mut r = rng(seed);
        let xs: Vec<StepFunction> = (0..3).map(|_| gen::compress(&random(&mut r), &Rational::new(1.into(), 4.into()))).collect();
        let sum = disjoint_sum(&xs).unwrap();
        let abs: Vec<StepFunction> = xs.iter().map(|x| x.abs()).collect();
        prop_assert!(sum.abs().same_distribution(&disjoint_sum(&abs).unwrap()));

        // (⊕^3 X)*(t) = X*(t/3) below 3·P(X ≠ 0)
        let x = &xs[0];
        let star = x.decreasing_rearrangement();
        let tripled = disjoint_sum(&[x.clone(), x.clone(), x.clone()]).unwrap().decreasing_rearrangement();
        let three = Rational::from_integer(3.into());
        for i in 0..60 {
            let t = Rational::new((2 * i + 1).into(), 120.into());
            if t < &three * x.support_measure() {
                prop_assert_eq!(tripled.value_at(&t).unwrap(), star.value_at(&(&t / &three)).unwrap());
            }
        }
    }

    #[test]
    fn norms_are_law_invariant_and_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random(&mut r);
        let y = gen::shuffle(&mut r, &x);
        let smaller = x.abs().map(|v| v / Rational::from_integer(2.into()));
        for d in NormDescriptor::panel() {
            let (a, b) = (norm(&x, &d).unwrap(), norm(&y, &d).unwrap());
            prop_assert!(a.le_within(&b, 1e-12) && b.le_within(&a, 1e-12), "{}", d.label());
            prop_assert!(norm(&smaller, &d).unwrap().le_within(&a, 1e-12), "{}", d.label());
        }
    }

    #[test]
    fn convex_weights_sum_to_one(seed in any::<u64>(), k in 1usize..8) {
        let w = ConvexWeights::new(gen::random_weights(&mut rng(seed), k)).unwrap();
        prop_assert_eq!(w.as_slice().iter().fold(Rational::zero(), |a, x| a + x), Rational::one());
    }

    #[test]
    fn decompositions_reconstruct_exactly(seed in any::<u64>(), m in 3u64..60) {
        let mut r = rng(seed);
        let a = gen::random_interval_set(&mut r, 3, 47);
        if !a.is_empty() && a.measure() < Rational::one() {
            let d = general_set_decomposition(&a, m).unwrap();
            prop_assert!(d.verify());
            prop_assert!(d.pairs.iter().all(|(_, p)| p.u().same_distribution(p.v())));
        }
        let x = random(&mut r);
        let d = simple_function_decomposition(&x, m).unwrap();
        prop_assert!(d.verify());
        prop_assert_eq!(d.target.mean(), Rational::zero());
    }

    #[test]
    fn witness_terms_are_law_invariant(seed in any::<u64>(), n_max in 4u32..12) {
        let y = build_witness(WitnessConfig::new(n_max).unwrap());
        let shuffled = gen::shuffle(&mut rng(seed), &y);
        prop_assert_eq!(norm_term_profile(&shuffled, n_max + 4).terms, norm_term_profile(&y, n_max + 4).terms);
    }

    #[test]
    fn growth_instances_meet_their_invariants(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(1..=3usize);
        let n = r.gen_range(3..=6u32);
        let inst = GrowthInstance::generate(&mut r, m, n, 1);
        prop_assert!(inst.check_hypotheses(1).is_ok());
        let rhs = inst.pairs.iter().fold(&inst.y - &inst.z, |acc, p| &acc + p.v());
        prop_assert!(rhs.le_pointwise(&inst.u()));
        let cap = Rational::new(1.into(), pow2(n) * factorial(n) * (m as u64 + 1));
        prop_assert!(inst.a.measure() <= cap);
    }
}

#[test]
fn c_sequence_ordering() {
    for n in 4..40 {
        let w = Rational::new(1.into(), pow2(n) * factorial(n));
        assert!(c(n) < c(n - 1));
        assert!(c(n) < w && w < c(n - 1));
    }
}
