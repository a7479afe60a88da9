//! Shared weight and sequence fixtures used by the verification batteries,
//! the test suites and the CLI fixture catalog.

use crate::certified::{q_int, q_ratio, Q};
use crate::seqcore::{Sequence, Tail};
use crate::weights::{WTail, WeightSpec};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Head (2, 1), zero tail, p = 1: finite `W(infinity) = 3`.
pub fn w_a() -> WeightSpec {
    WeightSpec::new(vec![q_int(2), q_int(1)], WTail::Zero, Q::one()).expect("valid fixture")
}

/// Pure power-law weight `w(i) = i^(-1/2)`: `W(infinity) = infinity`.
pub fn w_b(p: i64) -> WeightSpec {
    WeightSpec::new(
        vec![],
        WTail::PowerLaw {
            c: Q::one(),
            alpha: q_ratio(1, 2),
        },
        q_int(p),
    )
    .expect("valid fixture")
}

/// Head (0, 1), zero tail: the leading weight vanishes.
pub fn w_c(p: i64) -> WeightSpec {
    WeightSpec::new(vec![q_int(0), q_int(1)], WTail::Zero, q_int(p)).expect("valid fixture")
}

/// Head (0) then the power-law tail: `W(1) = 0` with `W(infinity) = infinity`.
pub fn w_d() -> WeightSpec {
    WeightSpec::new(
        vec![q_int(0)],
        WTail::PowerLaw {
            c: Q::one(),
            alpha: q_ratio(1, 2),
        },
        Q::one(),
    )
    .expect("valid fixture")
}

/// Head (2, 0, 1), zero tail: an interior zero weight at index 2.
pub fn w_zero_mid() -> WeightSpec {
    WeightSpec::new(vec![q_int(2), q_int(0), q_int(1)], WTail::Zero, Q::one())
        .expect("valid fixture")
}

/// Deterministic generator seeded per trial.
pub fn rng(root_seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(root_seed ^ trial.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Random finitely supported sequence with small rational values inside a
/// window of the first `window` indices.
pub fn random_finite(rng: &mut ChaCha8Rng, window: u64, max_support: u64) -> Sequence {
    let support = rng.gen_range(1..=max_support.min(window));
    let mut head = vec![Q::zero(); window as usize];
    let mut placed = 0;
    while placed < support {
        let idx = rng.gen_range(0..window) as usize;
        if head[idx] != Q::zero() {
            continue;
        }
        let num = loop {
            let n = rng.gen_range(-9i64..=9);
            if n != 0 {
                break n;
            }
        };
        let den = rng.gen_range(1i64..=5);
        head[idx] = q_ratio(num, den);
        placed += 1;
    }
    Sequence::finite(head)
}

/// Random nonnegative finitely supported sequence.
pub fn random_finite_nonneg(rng: &mut ChaCha8Rng, window: u64, max_support: u64) -> Sequence {
    let x = random_finite(rng, window, max_support);
    Sequence::new(
        x.head().iter().map(|v| v.abs()).collect(),
        Tail::Zero,
    )
    .expect("abs head is valid")
}

/// Random geometric-tail sequence (infinite support).
pub fn random_geometric(rng: &mut ChaCha8Rng, window: u64) -> Sequence {
    let x = random_finite(rng, window, window.min(4));
    let a = q_ratio(rng.gen_range(1i64..=4), 1);
    let r = q_ratio(1, rng.gen_range(2i64..=5));
    Sequence::new(x.head().to_vec(), Tail::Geometric { a, r }).expect("valid tail")
}

/// Random signed permutation applied to the head of a sequence (tail values
/// are left in place, which preserves equimeasurability).
pub fn random_permute_flip(rng: &mut ChaCha8Rng, x: &Sequence) -> Sequence {
    let mut head: Vec<Q> = x.head().to_vec();
    let n = head.len();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        head.swap(i, j);
    }
    for v in head.iter_mut() {
        if rng.gen_bool(0.5) {
            *v = -v.clone();
        }
    }
    Sequence::new(head, x.tail().clone()).expect("permutation keeps invariants")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::equimeasurable;

    #[test]
    fn generators_are_deterministic() {
        let a = random_finite(&mut rng(7, 3), 10, 5);
        let b = random_finite(&mut rng(7, 3), 10, 5);
        assert_eq!(a, b);
    }

    #[test]
    fn permute_flip_preserves_equimeasurability() {
        let mut r = rng(11, 0);
        let x = random_finite(&mut r, 8, 6);
        for _ in 0..20 {
            let y = random_permute_flip(&mut r, &x);
            assert!(equimeasurable(&x, &y));
        }
    }
}
