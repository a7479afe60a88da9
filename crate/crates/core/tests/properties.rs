//! Property tests for the rearrangement calculus, the norm axioms and the
//! JSON wire format.

use lorentz_seq::certified::{q_int, q_ratio, CertVal, Q};
use lorentz_seq::fixtures;
use lorentz_seq::jsonio;
use lorentz_seq::norms;
use lorentz_seq::seqcore::{
    self, distribution, maximal_at, rearrangement, star_prefix, ExtCount, Sequence, Tail,
};
use lorentz_seq::weights::Space;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn small_q() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| q_ratio(n, d))
}

fn zero_tail_seq() -> impl Strategy<Value = Sequence> {
    proptest::collection::vec(small_q(), 0..8).prop_map(Sequence::finite)
}

fn any_tail_seq() -> impl Strategy<Value = Sequence> {
    (
        proptest::collection::vec(small_q(), 0..6),
        prop_oneof![
            Just(Tail::Zero),
            (1i64..=3).prop_map(|c| Tail::Constant(q_int(c))),
            (1i64..=3, 2i64..=4).prop_map(|(a, r)| Tail::Geometric {
                a: q_int(a),
                r: q_ratio(1, r),
            }),
        ],
    )
        .prop_map(|(head, tail)| Sequence::new(head, tail).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rearrangement_is_nonincreasing_and_nonnegative(x in any_tail_seq()) {
        let p = star_prefix(&x, 30);
        for w in p.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        prop_assert!(p.iter().all(|v| !v.is_negative()));
    }

    #[test]
    fn rearrangement_matches_inf_formula(x in zero_tail_seq()) {
        // Independent oracle: x*(n) = inf over the grid of all head values
        // (and 0) of lambda with d_x(lambda) <= n - 1.
        let mut grid: Vec<Q> = x.head().iter().map(|v| v.abs()).collect();
        grid.push(Q::zero());
        grid.sort();
        grid.dedup();
        let star = star_prefix(&x, 12);
        for n in 1..=12u64 {
            let inf = grid
                .iter()
                .find(|lam| match distribution(&x, lam).unwrap() {
                    ExtCount::Finite(c) => c <= n - 1,
                    ExtCount::Infinite => false,
                })
                .unwrap();
            prop_assert_eq!(&star[n as usize - 1], inf);
        }
    }

    #[test]
    fn constant_tail_inf_formula(head in proptest::collection::vec(small_q(), 0..5), c in 1i64..=3) {
        let x = Sequence::new(head, Tail::Constant(q_int(c))).unwrap();
        let mut grid: Vec<Q> = x.head().iter().map(|v| v.abs()).collect();
        grid.push(Q::zero());
        grid.push(q_int(c));
        grid.sort();
        grid.dedup();
        let star = star_prefix(&x, 10);
        for n in 1..=10u64 {
            let inf = grid
                .iter()
                .find(|lam| match distribution(&x, lam).unwrap() {
                    ExtCount::Finite(count) => count <= n - 1,
                    ExtCount::Infinite => false,
                })
                .unwrap();
            prop_assert_eq!(&star[n as usize - 1], inf);
        }
    }

    #[test]
    fn maximal_dominates_star_and_decreases(x in any_tail_seq()) {
        let star = star_prefix(&x, 16);
        let mut prev: Option<CertVal> = None;
        for n in 1..=16u64 {
            let m = maximal_at(&x, n).unwrap();
            let sv = CertVal::exact(star[n as usize - 1].clone());
            prop_assert!(sv.certainly_le(&m) || sv.eq_exact(&m));
            if let Some(p) = prev {
                prop_assert!(m.certainly_le(&p) || m.eq_exact(&p));
            }
            prev = Some(m);
        }
    }

    #[test]
    fn maximal_is_subadditive(x in zero_tail_seq(), y in zero_tail_seq()) {
        let sum = x.add(&y).unwrap();
        for n in 1..=10u64 {
            let lhs = maximal_at(&sum, n).unwrap();
            let rhs = maximal_at(&x, n).unwrap().add(&maximal_at(&y, n).unwrap());
            prop_assert!(lhs.certainly_le(&rhs) || lhs.eq_exact(&rhs));
        }
    }

    #[test]
    fn equimeasurability_under_permute_flip(x in zero_tail_seq(), seed in 0u64..1000) {
        let mut rng = fixtures::rng(seed, 0);
        let y = fixtures::random_permute_flip(&mut rng, &x);
        prop_assert!(seqcore::equimeasurable(&x, &y));
    }

    #[test]
    fn gamma_norm_homogeneous_and_symmetric(x in zero_tail_seq(), lam in small_q(), seed in 0u64..1000) {
        let s = Space::new(fixtures::w_a());
        let nx = norms::norm_gamma(&s, &x).unwrap();
        let nlx = norms::norm_gamma(&s, &x.scale(&lam)).unwrap();
        let expected = CertVal::exact(lam.abs()).mul(nx.expect_finite());
        prop_assert!(nlx.expect_finite().eq_exact(&expected));
        let mut rng = fixtures::rng(seed, 1);
        let y = fixtures::random_permute_flip(&mut rng, &x);
        let ny = norms::norm_gamma(&s, &y).unwrap();
        prop_assert!(ny.expect_finite().eq_exact(nx.expect_finite()));
    }

    #[test]
    fn gamma_norm_triangle_inequality(x in zero_tail_seq(), y in zero_tail_seq()) {
        let s = Space::new(fixtures::w_a());
        let sum = x.add(&y).unwrap();
        let ns = norms::norm_gamma(&s, &sum).unwrap();
        let bound = norms::norm_gamma(&s, &x)
            .unwrap()
            .expect_finite()
            .add(norms::norm_gamma(&s, &y).unwrap().expect_finite());
        prop_assert!(ns.expect_finite().certainly_le(&bound) || ns.expect_finite().eq_exact(&bound));
    }

    #[test]
    fn duality_bound_on_random_pairs(x in zero_tail_seq(), y in zero_tail_seq()) {
        let s = Space::new(fixtures::w_a());
        let p = norms::pairing(&x, &y).unwrap();
        let bound = norms::norm_gamma(&s, &x)
            .unwrap()
            .expect_finite()
            .mul(&norms::norm_m_psi(&s, &y).unwrap().value);
        prop_assert!(p.abs().certainly_le(&bound) || p.abs().eq_exact(&bound));
    }

    #[test]
    fn sequence_json_round_trips_bit_exactly(x in any_tail_seq()) {
        let v = jsonio::sequence_to_value(&x);
        let back = jsonio::sequence_from_value(&v).unwrap();
        prop_assert_eq!(&back, &x);
        let v2 = jsonio::sequence_to_value(&back);
        prop_assert_eq!(
            serde_json::to_string(&v).unwrap(),
            serde_json::to_string(&v2).unwrap()
        );
    }

    #[test]
    fn weight_json_round_trips(head in proptest::collection::vec((0i64..=9, 1i64..=5), 0..5), p in 1i64..=3) {
        let mut head: Vec<Q> = head.into_iter().map(|(n, d)| q_ratio(n, d)).collect();
        head.push(q_int(1)); // keep the weight nontrivial
        let w = lorentz_seq::weights::WeightSpec::new(head, lorentz_seq::weights::WTail::Zero, q_int(p)).unwrap();
        let v = jsonio::weight_to_value(&w);
        prop_assert_eq!(jsonio::weight_from_value(&v).unwrap(), w);
    }
}

#[test]
fn norming_consistency_on_seeded_battery() {
    // pairing(x, norming_functional(x)) = ||x|| and the functional has unit
    // dual norm, exactly, across a seeded random batch.
    let s = Space::new(fixtures::w_a());
    for t in 0..1000u64 {
        let mut rng = fixtures::rng(41, t);
        let x = fixtures::random_finite(&mut rng, 10, 6);
        if x.is_zero() {
            continue;
        }
        let y = lorentz_seq::geometry::norming_functional(&s, &x).unwrap();
        let p = norms::pairing(&x, &y).unwrap();
        let nx = norms::norm_gamma(&s, &x).unwrap();
        assert!(p.eq_exact(nx.expect_finite()));
        assert!(norms::norm_m_psi(&s, &y)
            .unwrap()
            .value
            .eq_exact(&CertVal::one()));
    }
}

#[test]
fn dual_extreme_points_lie_on_the_sphere() {
    // Whenever the dual-extreme classifier accepts, the m_psi norm is one:
    // the plateau identity sum v(i)/phi(n) = 1.
    let s = Space::new(fixtures::w_a());
    let x = Sequence::finite(vec![q_ratio(5, 2), q_ratio(1, 2)]);
    for t in 0..100u64 {
        let mut rng = fixtures::rng(43, t);
        let y = fixtures::random_permute_flip(&mut rng, &x);
        let verdict = lorentz_seq::geometry::classify_extreme_dual(&s, &y).unwrap();
        assert!(verdict.holds());
        assert!(norms::norm_m_psi(&s, &y)
            .unwrap()
            .value
            .eq_exact(&CertVal::one()));
    }
}
