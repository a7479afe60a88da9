//! Weight sequences and the scalars they generate.
//!
//! A [`WeightSpec`] fixes a nonnegative weight sequence `w` (finite head plus
//! a zero, power-law or geometric tail) and an exponent `p`. From it the
//! module computes the partial sums `W(n)`, the tail functional
//! `W_p(n) = n^p sum_{i>n} w(i)/i^p`, the fundamental sequence
//! `phi(n) = (W(n) + W_p(n))^(1/p)`, its dual companion `psi(n) = n/phi(n)`,
//! the derived weight `v(i) = sum_{k>=i} w(k)/k`, and the regime flags of the
//! space (order continuity, Fatou, strict monotonicity and convexity, and the
//! duality regime), all of which hinge on whether `W(infinity)` is finite.
//!
//! Infinite tail sums over power-law tails are evaluated with an
//! Euler-Maclaurin expansion whose remainder is bounded by the first omitted
//! term; geometric tails use exact closed forms or geometric remainder
//! bounds. Every inexact value carries its error radius.

use crate::certified::{q_int, q_to_f64, CertVal, Extended, Q};
use crate::{Error, Result};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

/// Truncation target for certified tail sums.
pub const SERIES_TOL: f64 = 1e-12;

/// Tail class of a weight sequence. `PowerLaw { c, alpha }` means
/// `w(i) = c * i^(-alpha)` for `i > M` (global index), `Geometric { a, r }`
/// means `w(M+k) = a * r^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WTail {
    Zero,
    PowerLaw { c: Q, alpha: Q },
    Geometric { a: Q, r: Q },
}

/// A nonnegative weight sequence together with the exponent `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpec {
    head: Vec<Q>,
    tail: WTail,
    p: Q,
}

impl WeightSpec {
    pub fn new(head: Vec<Q>, tail: WTail, p: Q) -> Result<Self> {
        if !p.is_positive() {
            return Err(Error::InvalidWeight("p must be positive".into()));
        }
        if head.iter().any(|v| v.is_negative()) {
            return Err(Error::InvalidWeight(
                "weight values must be nonnegative".into(),
            ));
        }
        match &tail {
            WTail::Zero => {
                if head.iter().all(|v| v.is_zero()) {
                    return Err(Error::InvalidWeight(
                        "weight sequence must be nontrivial".into(),
                    ));
                }
            }
            WTail::PowerLaw { c, alpha } => {
                if !c.is_positive() {
                    return Err(Error::InvalidWeight(
                        "power-law coefficient must be positive".into(),
                    ));
                }
                if alpha.is_negative() {
                    return Err(Error::InvalidWeight(
                        "power-law exponent must be nonnegative".into(),
                    ));
                }
                // Admissibility: W_p(n) finite requires alpha + p > 1.
                if alpha + &p <= Q::one() {
                    return Err(Error::InvalidWeight(
                        "inadmissible power-law tail: alpha + p must exceed 1".into(),
                    ));
                }
            }
            WTail::Geometric { a, r } => {
                if !a.is_positive() {
                    return Err(Error::InvalidWeight(
                        "geometric tail coefficient must be positive".into(),
                    ));
                }
                if !r.is_positive() || *r >= Q::one() {
                    return Err(Error::InvalidWeight(
                        "geometric tail ratio must lie in (0,1)".into(),
                    ));
                }
            }
        }
        Ok(WeightSpec { head, tail, p })
    }

    pub fn head(&self) -> &[Q] {
        &self.head
    }

    pub fn tail(&self) -> &WTail {
        &self.tail
    }

    pub fn p(&self) -> &Q {
        &self.p
    }

    pub fn head_len(&self) -> u64 {
        self.head.len() as u64
    }

    pub fn with_p(&self, p: Q) -> Result<WeightSpec> {
        WeightSpec::new(self.head.clone(), self.tail.clone(), p)
    }

    /// Weight value `w(i)`; exact whenever the tail value is rational.
    pub fn weight_at(&self, i: u64) -> CertVal {
        debug_assert!(i >= 1);
        let m = self.head_len();
        if i <= m {
            return CertVal::exact(self.head[i as usize - 1].clone());
        }
        match &self.tail {
            WTail::Zero => CertVal::zero(),
            WTail::PowerLaw { c, alpha } => pow_neg(c, alpha, i),
            WTail::Geometric { a, r } => CertVal::exact(a * r.pow((i - m) as i32)),
        }
    }

    /// True when `w(i) > 0` for every index.
    pub fn all_positive(&self) -> bool {
        self.head.iter().all(|v| v.is_positive()) && self.tail != WTail::Zero
    }

    /// Exact zero test for `w(i)`.
    pub fn weight_is_zero_at(&self, i: u64) -> bool {
        let m = self.head_len();
        if i <= m {
            self.head[i as usize - 1].is_zero()
        } else {
            self.tail == WTail::Zero
        }
    }
}

/// `c * i^(-alpha)` as a certified value (exact for integer alpha or i = 1).
fn pow_neg(c: &Q, alpha: &Q, i: u64) -> CertVal {
    if i == 1 {
        return CertVal::exact(c.clone());
    }
    if alpha.is_integer() {
        let k = alpha.to_i32().expect("alpha fits i32");
        return CertVal::exact(c / q_int(i as i64).pow(k));
    }
    let v = q_to_f64(c) * (i as f64).powf(-q_to_f64(alpha));
    CertVal::approx(v, v.abs() * 8.0 * f64::EPSILON + 1e-300)
}

/// Certified tail sum `sum_{i>=start} c * i^(-beta)` for `beta > 1`, via an
/// Euler-Maclaurin expansion. For completely monotone integrands the
/// remainder after the first Bernoulli correction is bounded by the next
/// term, which is what the radius carries.
fn power_tail_sum(c: f64, beta: f64, start: u64) -> CertVal {
    debug_assert!(beta > 1.0);
    // Pick the switch point so the Euler-Maclaurin remainder is below target.
    let coeff = beta * (beta + 1.0) * (beta + 2.0) / 720.0;
    let mut switch = start.max(16);
    while coeff * (switch as f64).powf(-(beta + 3.0)) > 0.5 * SERIES_TOL / c.max(1e-12)
        && switch < start + 4_000_000
    {
        switch *= 2;
    }
    let mut explicit = 0.0f64;
    for i in start..switch {
        explicit += (i as f64).powf(-beta);
    }
    let n = switch as f64;
    let tail = n.powf(1.0 - beta) / (beta - 1.0) + 0.5 * n.powf(-beta)
        + beta * n.powf(-beta - 1.0) / 12.0;
    let rem = coeff * n.powf(-(beta + 3.0));
    let value = c * (explicit + tail);
    let rounding = value.abs() * (switch - start + 8) as f64 * f64::EPSILON;
    CertVal::approx(value, c * rem + rounding + 1e-300)
}

/// Exact geometric sum `sum_{k>=k0} a r^k`.
fn geometric_sum_from(a: &Q, r: &Q, k0: u64) -> Q {
    a * r.pow(k0 as i32) / (Q::one() - r)
}

/// `W(n) = sum_{i<=n} w(i)`; `W(0) = 0`.
pub fn w_sum(w: &WeightSpec, n: u64) -> CertVal {
    let m = w.head_len();
    let head_part: Q = w
        .head
        .iter()
        .take(n.min(m) as usize)
        .sum();
    let mut acc = CertVal::exact(head_part);
    if n > m {
        match &w.tail {
            WTail::Zero => {}
            WTail::Geometric { a, r } => {
                // sum_{k=1..n-m} a r^k, exact.
                let full = geometric_sum_from(a, r, 1) - geometric_sum_from(a, r, n - m + 1);
                acc = acc.add(&CertVal::exact(full));
            }
            WTail::PowerLaw { .. } => {
                for i in (m + 1)..=n {
                    acc = acc.add(&w.weight_at(i));
                }
            }
        }
    }
    acc
}

/// Classification of `W(infinity)`.
pub fn w_inf_class(w: &WeightSpec) -> Extended {
    match &w.tail {
        WTail::Zero => Extended::Finite(w_sum(w, w.head_len())),
        WTail::Geometric { a, r } => {
            let head: Q = w.head.iter().sum();
            Extended::Finite(CertVal::exact(head + geometric_sum_from(a, r, 1)))
        }
        WTail::PowerLaw { c, alpha } => {
            if *alpha <= Q::one() {
                Extended::Infinite
            } else {
                let head: Q = w.head.iter().sum();
                let tail = power_tail_sum(q_to_f64(c), q_to_f64(alpha), w.head_len() + 1);
                Extended::Finite(CertVal::exact(head).add(&tail))
            }
        }
    }
}

/// `W_p(n) = n^p sum_{i>n} w(i)/i^p`.
pub fn wp(w: &WeightSpec, n: u64) -> CertVal {
    debug_assert!(n >= 1);
    let p = &w.p;
    let m = w.head_len();
    // Head contribution for indices in (n, m].
    let mut sum = CertVal::zero();
    for i in (n + 1)..=m.max(n) {
        if i > m {
            break;
        }
        let wi = CertVal::exact(w.head[i as usize - 1].clone());
        sum = sum.add(&wi.div(&CertVal::exact_int(i as i64).pow_q(p)));
    }
    let from = m.max(n) + 1;
    match &w.tail {
        WTail::Zero => {}
        WTail::PowerLaw { c, alpha } => {
            // sum_{i>=from} c i^(-alpha-p), beta = alpha + p > 1.
            let beta = q_to_f64(&(alpha + p));
            sum = sum.add(&power_tail_sum(q_to_f64(c), beta, from));
        }
        WTail::Geometric { a, r } => {
            // sum_{i>=from} a r^(i-m) / i^p with geometric remainder bound.
            let mut acc = CertVal::zero();
            let mut i = from;
            loop {
                let k = i - m;
                let term = CertVal::exact(a * r.pow(k as i32))
                    .div(&CertVal::exact_int(i as i64).pow_q(p));
                acc = acc.add(&term);
                // Remaining terms are below a r^(k+1)/(1-r) / (i+1)^p.
                let rem = q_to_f64(&geometric_sum_from(a, r, k + 1))
                    / ((i + 1) as f64).powf(q_to_f64(p));
                if rem <= SERIES_TOL || i > from + 10_000 {
                    acc = acc.add(&CertVal::approx(0.5 * rem, 0.5 * rem));
                    break;
                }
                i += 1;
            }
            sum = sum.add(&acc);
        }
    }
    CertVal::exact_int(n as i64).pow_q(p).mul(&sum)
}

/// Fundamental sequence `phi(n) = (W(n) + W_p(n))^(1/p)`.
pub fn phi(w: &WeightSpec, n: u64) -> CertVal {
    w_sum(w, n).add(&wp(w, n)).root_q(&w.p)
}

/// Dual fundamental sequence `psi(n) = n / phi(n)`; requires `p = 1`.
pub fn psi(w: &WeightSpec, n: u64) -> Result<CertVal> {
    require_p1(w)?;
    let ph = phi(w, n);
    if !ph.certainly_positive() {
        return Err(Error::InvalidArgument(format!(
            "phi({n}) is not positive"
        )));
    }
    Ok(CertVal::exact_int(n as i64).div(&ph))
}

/// Derived weight `v(i) = sum_{k>=i} w(k)/k`; requires `p = 1`.
pub fn derived_v(w: &WeightSpec, i: u64) -> Result<CertVal> {
    require_p1(w)?;
    debug_assert!(i >= 1);
    let m = w.head_len();
    let mut sum = CertVal::zero();
    for k in i..=m.max(i.saturating_sub(1)) {
        if k > m {
            break;
        }
        let wk = CertVal::exact(w.head[k as usize - 1].clone());
        sum = sum.add(&wk.div(&CertVal::exact_int(k as i64)));
    }
    let from = m.max(i - 1) + 1;
    match &w.tail {
        WTail::Zero => {}
        WTail::PowerLaw { c, alpha } => {
            // sum_{k>=from} c k^-(alpha+1); alpha > 0 by admissibility at p=1.
            sum = sum.add(&power_tail_sum(
                q_to_f64(c),
                q_to_f64(alpha) + 1.0,
                from,
            ));
        }
        WTail::Geometric { a, r } => {
            let mut acc = CertVal::zero();
            let mut k = from;
            loop {
                let off = k - m;
                let term =
                    CertVal::exact(a * r.pow(off as i32)).div(&CertVal::exact_int(k as i64));
                acc = acc.add(&term);
                let rem = q_to_f64(&geometric_sum_from(a, r, off + 1)) / (k + 1) as f64;
                if rem <= SERIES_TOL || k > from + 10_000 {
                    acc = acc.add(&CertVal::approx(0.5 * rem, 0.5 * rem));
                    break;
                }
                k += 1;
            }
            sum = sum.add(&acc);
        }
    }
    Ok(sum)
}

fn require_p1(w: &WeightSpec) -> Result<()> {
    if !w.p.is_one() {
        return Err(Error::Regime(format!(
            "operation requires p = 1, got p = {}",
            w.p
        )));
    }
    Ok(())
}

/// Regime flags of the space generated by a weight spec.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegimeReport {
    pub w_infinite: bool,
    pub order_continuous: bool,
    pub strictly_monotone: bool,
    pub strictly_convex: bool,
    pub fatou: bool,
    pub dual_is_m_psi: bool,
    pub predual_is_m_psi0: bool,
    pub all_weights_positive: bool,
}

pub fn regime(w: &WeightSpec) -> RegimeReport {
    let w_infinite = w_inf_class(w).is_infinite();
    let all_weights_positive = w.all_positive();
    RegimeReport {
        w_infinite,
        order_continuous: w_infinite,
        strictly_monotone: w_infinite,
        strictly_convex: w.p > Q::one() && all_weights_positive && w_infinite,
        fatou: true,
        dual_is_m_psi: w_infinite,
        predual_is_m_psi0: w_infinite,
        all_weights_positive,
    }
}

/// The derived weight as a weight spec of its own; only finitely supported
/// weights produce a representable `v`.
pub fn derived_v_spec(w: &WeightSpec) -> Result<Option<WeightSpec>> {
    require_p1(w)?;
    if w.tail != WTail::Zero {
        return Ok(None);
    }
    let m = w.head_len();
    let mut head = Vec::with_capacity(m as usize);
    for i in 1..=m {
        let mut acc = Q::zero();
        for k in i..=m {
            acc += &w.head[k as usize - 1] / q_int(k as i64);
        }
        head.push(acc);
    }
    Ok(Some(WeightSpec::new(head, WTail::Zero, Q::one())?))
}

#[derive(Default)]
struct Memo {
    w_sum: Vec<CertVal>,
    wp: HashMap<u64, CertVal>,
    phi: HashMap<u64, CertVal>,
    psi: HashMap<u64, CertVal>,
    v: HashMap<u64, CertVal>,
    w_inf: Option<Extended>,
}

/// A weight spec with memoized scalar tables. Values are computed on demand
/// under an internal lock, so a shared `Space` is safe across threads; all
/// computations are pure, so a racing recomputation is harmless.
pub struct Space {
    spec: WeightSpec,
    memo: Mutex<Memo>,
}

impl Space {
    pub fn new(spec: WeightSpec) -> Self {
        Space {
            spec,
            memo: Mutex::new(Memo::default()),
        }
    }

    pub fn spec(&self) -> &WeightSpec {
        &self.spec
    }

    pub fn p(&self) -> &Q {
        &self.spec.p
    }

    pub fn is_p1(&self) -> bool {
        self.spec.p.is_one()
    }

    pub fn weight_at(&self, i: u64) -> CertVal {
        self.spec.weight_at(i)
    }

    pub fn w_sum(&self, n: u64) -> CertVal {
        if n == 0 {
            return CertVal::zero();
        }
        let mut memo = self.memo.lock().unwrap();
        while memo.w_sum.len() < n as usize {
            let next = memo.w_sum.len() as u64 + 1;
            let prev = if next == 1 {
                CertVal::zero()
            } else {
                memo.w_sum[next as usize - 2].clone()
            };
            memo.w_sum.push(prev.add(&self.spec.weight_at(next)));
        }
        memo.w_sum[n as usize - 1].clone()
    }

    fn cached<F>(&self, key: u64, pick: fn(&mut Memo) -> &mut HashMap<u64, CertVal>, f: F) -> CertVal
    where
        F: FnOnce() -> CertVal,
    {
        {
            let mut memo = self.memo.lock().unwrap();
            if let Some(v) = pick(&mut memo).get(&key) {
                return v.clone();
            }
        }
        let val = f();
        let mut memo = self.memo.lock().unwrap();
        pick(&mut memo).insert(key, val.clone());
        val
    }

    pub fn wp(&self, n: u64) -> CertVal {
        self.cached(n, |m| &mut m.wp, || wp(&self.spec, n))
    }

    pub fn phi(&self, n: u64) -> CertVal {
        let w = self.w_sum(n);
        self.cached(n, |m| &mut m.phi, || {
            w.add(&self.wp(n)).root_q(&self.spec.p)
        })
    }

    pub fn psi(&self, n: u64) -> Result<CertVal> {
        require_p1(&self.spec)?;
        let ph = self.phi(n);
        if !ph.certainly_positive() {
            return Err(Error::InvalidArgument(format!("phi({n}) is not positive")));
        }
        Ok(self.cached(n, |m| &mut m.psi, || {
            CertVal::exact_int(n as i64).div(&ph)
        }))
    }

    pub fn v(&self, i: u64) -> Result<CertVal> {
        require_p1(&self.spec)?;
        let spec = &self.spec;
        Ok(self.cached(i, |m| &mut m.v, || {
            derived_v(spec, i).expect("p = 1 checked above")
        }))
    }

    pub fn w_inf(&self) -> Extended {
        {
            let memo = self.memo.lock().unwrap();
            if let Some(v) = &memo.w_inf {
                return v.clone();
            }
        }
        let val = w_inf_class(&self.spec);
        let mut memo = self.memo.lock().unwrap();
        memo.w_inf = Some(val.clone());
        val
    }

    pub fn regime(&self) -> RegimeReport {
        regime(&self.spec)
    }

    /// Midpoints of `v(1..=n)` for float-lane hot loops.
    pub fn v_table_f64(&self, n: u64) -> Result<Vec<f64>> {
        (1..=n).map(|i| Ok(self.v(i)?.value())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certified::q_ratio;

    fn wa() -> WeightSpec {
        WeightSpec::new(vec![q_int(2), q_int(1)], WTail::Zero, Q::one()).unwrap()
    }

    fn wb() -> WeightSpec {
        WeightSpec::new(
            vec![],
            WTail::PowerLaw {
                c: Q::one(),
                alpha: q_ratio(1, 2),
            },
            Q::one(),
        )
        .unwrap()
    }

    #[test]
    fn construction_rejects_trivial_and_inadmissible() {
        assert!(WeightSpec::new(vec![Q::zero()], WTail::Zero, Q::one()).is_err());
        // alpha + p <= 1 diverges in W_p.
        assert!(WeightSpec::new(
            vec![],
            WTail::PowerLaw {
                c: Q::one(),
                alpha: Q::zero()
            },
            Q::one()
        )
        .is_err());
        // Constant tail (alpha = 0) is fine for p > 1.
        assert!(WeightSpec::new(
            vec![],
            WTail::PowerLaw {
                c: Q::one(),
                alpha: Q::zero()
            },
            q_int(2)
        )
        .is_ok());
    }

    #[test]
    fn partial_sums() {
        let w = wa();
        assert!(w_sum(&w, 1).eq_exact(&CertVal::exact_int(2)));
        assert!(w_sum(&w, 2).eq_exact(&CertVal::exact_int(3)));
        assert!(w_sum(&w, 5).eq_exact(&CertVal::exact_int(3)));
        let b = wb();
        let w4 = w_sum(&b, 4);
        let expect = 1.0 + 2f64.powf(-0.5) + 3f64.powf(-0.5) + 0.5;
        assert!((w4.value() - expect).abs() < 1e-12);
    }

    #[test]
    fn w_inf_classification() {
        assert!(!w_inf_class(&wa()).is_infinite());
        assert!(
            w_inf_class(&wa()).expect_finite().eq_exact(&CertVal::exact_int(3))
        );
        assert!(w_inf_class(&wb()).is_infinite());
        let conv = WeightSpec::new(
            vec![],
            WTail::PowerLaw {
                c: Q::one(),
                alpha: q_int(2),
            },
            Q::one(),
        )
        .unwrap();
        let fin = w_inf_class(&conv);
        // zeta(2) = pi^2/6.
        let zeta2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert!((fin.expect_finite().value() - zeta2).abs() < 1e-9);
        assert!(fin.expect_finite().error() < 1e-9);
    }

    #[test]
    fn wp_values() {
        let w = wa();
        assert!(wp(&w, 1).eq_exact(&CertVal::exact(q_ratio(1, 2))));
        assert!(wp(&w, 2).eq_exact(&CertVal::zero()));
        // W_1(1) over the power-law tail: sum_{i>=2} i^(-3/2) = zeta(3/2) - 1.
        let b = wb();
        let v = wp(&b, 1);
        assert!((v.value() - 1.612375348685488).abs() < 1e-9);
        assert!(v.error() < 1e-9);
    }

    #[test]
    fn phi_psi_and_v() {
        let w = wa();
        assert!(phi(&w, 1).eq_exact(&CertVal::exact(q_ratio(5, 2))));
        assert!(phi(&w, 2).eq_exact(&CertVal::exact_int(3)));
        assert!(phi(&w, 7).eq_exact(&CertVal::exact_int(3)));
        assert!(psi(&w, 1).unwrap().eq_exact(&CertVal::exact(q_ratio(2, 5))));
        assert!(psi(&w, 2).unwrap().eq_exact(&CertVal::exact(q_ratio(2, 3))));
        assert!(psi(&w, 6).unwrap().eq_exact(&CertVal::exact_int(2)));
        assert!(derived_v(&w, 1)
            .unwrap()
            .eq_exact(&CertVal::exact(q_ratio(5, 2))));
        assert!(derived_v(&w, 2)
            .unwrap()
            .eq_exact(&CertVal::exact(q_ratio(1, 2))));
        assert!(derived_v(&w, 3).unwrap().eq_exact(&CertVal::zero()));
    }

    #[test]
    fn phi_root_for_p2() {
        // Head (0,1), p = 2: phi(2) = (W(2) + W_2(2))^(1/2) = 1 exactly.
        let w = WeightSpec::new(vec![Q::zero(), Q::one()], WTail::Zero, q_int(2)).unwrap();
        assert!(phi(&w, 2).eq_exact(&CertVal::one()));
    }

    #[test]
    fn fundamental_identity_phi_equals_v_partial_sums() {
        for w in [wa(), WeightSpec::new(vec![Q::zero(), Q::one()], WTail::Zero, Q::one()).unwrap()]
        {
            for n in 1..=100u64 {
                let mut sum = CertVal::zero();
                for i in 1..=n {
                    sum = sum.add(&derived_v(&w, i).unwrap());
                }
                assert!(sum.eq_exact(&phi(&w, n)), "n = {n}");
            }
        }
        let b = wb();
        for n in 1..=100u64 {
            let mut sum = CertVal::zero();
            for i in 1..=n {
                sum = sum.add(&derived_v(&b, i).unwrap());
            }
            let ph = phi(&b, n);
            assert!(
                (sum.value() - ph.value()).abs() <= 1e-9,
                "n = {n}: {} vs {}",
                sum.value(),
                ph.value()
            );
        }
    }

    #[test]
    fn psi_identity_and_quasiconcavity() {
        let w = wa();
        for n in 1..=50u64 {
            let prod = psi(&w, n).unwrap().mul(&phi(&w, n));
            assert!(prod.eq_exact(&CertVal::exact_int(n as i64)));
        }
        let s = Space::new(wb());
        let mut prev_psi = 0.0;
        let mut prev_ratio = f64::INFINITY;
        for n in 1..=1000u64 {
            let ps = s.psi(n).unwrap().value();
            let ratio = ps / n as f64;
            assert!(ps >= prev_psi - 1e-9, "psi not nondecreasing at {n}");
            assert!(ratio <= prev_ratio + 1e-12, "psi(n)/n not nonincreasing at {n}");
            prev_psi = ps;
            prev_ratio = ratio;
        }
    }

    #[test]
    fn phi_strict_growth_when_w_infinite() {
        let s = Space::new(wb());
        let mut prev = 0.0;
        for n in 1..=1000u64 {
            let ph = s.phi(n);
            assert!(ph.lo() > prev, "phi not strictly increasing at {n}");
            prev = ph.hi() - 2.0 * ph.error().max(1e-13);
            prev = prev.max(0.0);
        }
    }

    #[test]
    fn v_nonincreasing_and_phi_between_w_and_winf() {
        let w = wa();
        let mut prev = derived_v(&w, 1).unwrap();
        for i in 2..=10u64 {
            let cur = derived_v(&w, i).unwrap();
            assert!(cur.certainly_le(&prev));
            prev = cur;
        }
        let winf = w_inf_class(&w);
        for n in 1..=10u64 {
            assert!(w_sum(&w, n).certainly_le(&phi(&w, n)));
            assert!(phi(&w, n).certainly_le(winf.expect_finite()));
        }
    }

    #[test]
    fn regime_flags() {
        let r = regime(&wa());
        assert!(!r.w_infinite && !r.order_continuous && !r.strictly_monotone);
        assert!(!r.strictly_convex && r.fatou);
        assert!(!r.dual_is_m_psi && !r.predual_is_m_psi0);
        let r2 = regime(&wb());
        assert!(r2.w_infinite && r2.order_continuous && r2.strictly_monotone);
        assert!(!r2.strictly_convex); // p = 1
        assert!(r2.dual_is_m_psi && r2.predual_is_m_psi0);
        let b2 = wb().with_p(q_int(2)).unwrap();
        assert!(regime(&b2).strictly_convex);
    }

    #[test]
    fn derived_v_spec_matches_pointwise() {
        let w = wa();
        let vs = derived_v_spec(&w).unwrap().unwrap();
        assert_eq!(vs.head(), &[q_ratio(5, 2), q_ratio(1, 2)]);
        assert!(derived_v_spec(&wb()).unwrap().is_none());
    }

    #[test]
    fn geometric_weight_tail_sums() {
        let w = WeightSpec::new(
            vec![Q::one()],
            WTail::Geometric {
                a: Q::one(),
                r: q_ratio(1, 2),
            },
            Q::one(),
        )
        .unwrap();
        // W(inf) = 1 + sum_{k>=1} (1/2)^k = 2 exactly.
        assert!(w_inf_class(&w).expect_finite().eq_exact(&CertVal::exact_int(2)));
        // W(3) = 1 + 1/2 + 1/4.
        assert!(w_sum(&w, 3).eq_exact(&CertVal::exact(q_ratio(7, 4))));
        // v(1) = 1/1 + sum_{k>=1} (1/2)^k/(1+k), certified.
        let v1 = derived_v(&w, 1).unwrap();
        let expect: f64 = 1.0 + (1..60).map(|k| 0.5f64.powi(k) / (1 + k) as f64).sum::<f64>();
        assert!((v1.value() - expect).abs() < 1e-10);
    }
}
