//! Norm evaluation for `gamma_{p,w}`, `d_{1,u}` and `m_psi`, membership in
//! `m_psi^0`, the duality pairing and the residuals tying them together.
//!
//! Divergent norms are a value, not an error: `norm_gamma` returns the
//! distinguished infinity for inputs like the all-ones sequence over a weight
//! with `W(infinity) = infinity`, because the dichotomy arguments reason with
//! that value directly.

use crate::certified::{CertVal, Extended, Q};
use crate::seqcore::{rearrangement, rearrangement_limit, Sequence, Tail};
use crate::weights::Space;
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};

/// Width target when bracketing infinite series.
const BRACKET_TOL: f64 = 1e-12;
/// Hard cap on the explicit summation length.
const MAX_EXPLICIT: u64 = 1 << 21;

/// Result of a supremum-type norm: the value and the attaining index when a
/// finite one exists.
#[derive(Clone, Debug)]
pub struct SupNorm {
    pub value: CertVal,
    pub attained_at: Option<u64>,
}

/// Exact prefix sums of the canonical rearrangement.
struct StarSums {
    head: Vec<Q>,
    tail: Tail,
    prefix: Vec<Q>,
}

impl StarSums {
    fn new(x: &Sequence) -> Self {
        let star = rearrangement(x);
        let head = star.head().to_vec();
        let tail = star.tail().clone();
        let mut prefix = Vec::with_capacity(head.len());
        let mut acc = Q::zero();
        for v in &head {
            acc += v;
            prefix.push(acc.clone());
        }
        StarSums { head, tail, prefix }
    }

    fn head_len(&self) -> u64 {
        self.head.len() as u64
    }

    /// x*(n).
    fn star(&self, n: u64) -> Q {
        let m = self.head_len();
        if n <= m {
            self.head[n as usize - 1].clone()
        } else {
            match &self.tail {
                Tail::Zero => Q::zero(),
                Tail::Constant(c) => c.clone(),
                Tail::Geometric { a, r } => a * r.pow((n - m) as i32),
            }
        }
    }

    /// sum_{i<=n} x*(i), exact.
    fn prefix_sum(&self, n: u64) -> Q {
        let m = self.head_len();
        let head_part = if n == 0 {
            Q::zero()
        } else if n <= m {
            self.prefix[n as usize - 1].clone()
        } else {
            self.prefix.last().cloned().unwrap_or_else(Q::zero)
        };
        if n <= m {
            return head_part;
        }
        match &self.tail {
            Tail::Zero => head_part,
            Tail::Constant(c) => head_part + c * Q::from_integer((n - m).into()),
            Tail::Geometric { a, r } => {
                // sum_{k=1..n-m} a r^k
                let partial = a * r * (Q::one() - r.pow((n - m) as i32)) / (Q::one() - r);
                head_part + partial
            }
        }
    }

    /// Total sum of the star values when finite.
    fn total(&self) -> Option<Q> {
        match &self.tail {
            Tail::Zero => Some(self.prefix.last().cloned().unwrap_or_else(Q::zero)),
            Tail::Constant(c) => {
                if c.is_zero() {
                    Some(self.prefix.last().cloned().unwrap_or_else(Q::zero))
                } else {
                    None
                }
            }
            Tail::Geometric { a, r } => {
                let head = self.prefix.last().cloned().unwrap_or_else(Q::zero);
                Some(head + a * r / (Q::one() - r))
            }
        }
    }
}

/// `||x||_{gamma_{p,w}} = (sum_n (x**(n))^p w(n))^(1/p)`.
pub fn norm_gamma(s: &Space, x: &Sequence) -> Result<Extended> {
    let p = s.p().clone();
    let star = StarSums::new(x);
    let limit = rearrangement_limit(x);
    if limit.is_positive() && s.w_inf().is_infinite() {
        return Ok(Extended::Infinite);
    }
    if star.head_len() == 0 && star.tail == Tail::Zero {
        return Ok(Extended::Finite(CertVal::zero()));
    }

    let explicit = |n_to: u64| -> CertVal {
        let mut acc = CertVal::zero();
        for n in 1..=n_to {
            let w_n = s.weight_at(n);
            if w_n.is_zero_exact() {
                continue;
            }
            let xss = CertVal::exact(star.prefix_sum(n)).div_int(n as i64);
            acc = acc.add(&xss.pow_q(&p).mul(&w_n));
        }
        acc
    };

    let total = match &star.tail {
        Tail::Zero => {
            let n0 = star.head_len().max(1);
            let sum = explicit(n0);
            // Beyond the support x**(n) = T/n, so the tail collapses to
            // T^p sum_{i>n0} w(i)/i^p = T^p W_p(n0) / n0^p.
            let t = CertVal::exact(star.total().expect("zero tail"));
            let rem = t
                .pow_q(&p)
                .mul(&s.wp(n0))
                .div(&CertVal::exact_int(n0 as i64).pow_q(&p));
            sum.add(&rem)
        }
        Tail::Constant(c) => {
            // W(infinity) finite here (the infinite case returned above).
            let winf = s.w_inf().expect_finite().clone();
            let m = star.head_len();
            let head_sum = star.prefix_sum(m);
            let excess = head_sum - c * Q::from_integer(m.into()); // >= 0
            let c_cv = CertVal::exact(c.clone());
            let mut n = m.max(s.spec().head_len()).max(1);
            loop {
                let sum = explicit(n);
                let mass = winf.sub(&s.w_sum(n));
                let rem = if excess.is_zero() {
                    c_cv.pow_q(&p).mul(&mass)
                } else {
                    let hi_base = c_cv.add(
                        &CertVal::exact(excess.clone()).div_int((n + 1) as i64),
                    );
                    let lo = c_cv.pow_q(&p).mul(&mass);
                    let hi = hi_base.pow_q(&p).mul(&mass);
                    CertVal::from_interval(lo.lo().min(hi.lo()), hi.hi().max(lo.hi()))
                };
                let out = sum.add(&rem);
                if out.is_exact() || rem.error() <= BRACKET_TOL || n >= MAX_EXPLICIT {
                    break out;
                }
                n *= 2;
            }
        }
        Tail::Geometric { .. } => {
            let t = CertVal::exact(star.total().expect("geometric tail sums"));
            let mut n = star.head_len().max(1);
            loop {
                let sum = explicit(n);
                // For i > n: prefix(n) <= sum_{j<=i} x*(j) <= T.
                let lo_base = CertVal::exact(star.prefix_sum(n));
                let coeff = s
                    .wp(n)
                    .div(&CertVal::exact_int(n as i64).pow_q(&p));
                let lo = lo_base.pow_q(&p).mul(&coeff);
                let hi = t.pow_q(&p).mul(&coeff);
                let rem = CertVal::from_interval(lo.lo().min(hi.lo()), hi.hi().max(lo.hi()));
                let out = sum.add(&rem);
                if rem.error() <= BRACKET_TOL || n >= MAX_EXPLICIT {
                    break out;
                }
                n *= 2;
            }
        }
    };
    Ok(Extended::Finite(total.root_q(&p)))
}

/// How the `d_1` weights are supplied: the spec's own values, or the derived
/// weight `v(i) = sum_{k>=i} w(k)/k` of a `gamma_{1,w}` space.
enum D1Weights<'a> {
    Explicit(&'a Space),
    Derived(&'a Space),
}

impl D1Weights<'_> {
    fn at(&self, i: u64) -> Result<CertVal> {
        match self {
            D1Weights::Explicit(s) => Ok(s.weight_at(i)),
            D1Weights::Derived(s) => s.v(i),
        }
    }

    /// sum_{i>n} of the weights, extended.
    fn mass_beyond(&self, n: u64) -> Result<Extended> {
        match self {
            D1Weights::Explicit(s) => Ok(match s.w_inf() {
                Extended::Infinite => Extended::Infinite,
                Extended::Finite(t) => Extended::Finite(t.sub(&s.w_sum(n))),
            }),
            D1Weights::Derived(s) => Ok(match s.w_inf() {
                // sum_i v(i) = lim phi(n) = W(infinity) for p = 1.
                Extended::Infinite => Extended::Infinite,
                Extended::Finite(t) => Extended::Finite(t.sub(&s.phi(n))),
            }),
        }
    }

    /// Upper bound for the weights beyond index n (requires n at or past the
    /// explicit head for the explicit variant).
    fn sup_beyond(&self, n: u64) -> Result<CertVal> {
        match self {
            D1Weights::Explicit(s) => {
                debug_assert!(n >= s.spec().head_len());
                Ok(match s.spec().tail() {
                    crate::weights::WTail::Zero => CertVal::zero(),
                    _ => s.weight_at(n + 1),
                })
            }
            // v is nonincreasing.
            D1Weights::Derived(s) => s.v(n + 1),
        }
    }

    fn head_len(&self) -> u64 {
        match self {
            D1Weights::Explicit(s) | D1Weights::Derived(s) => s.spec().head_len(),
        }
    }
}

fn d1_norm(u: &D1Weights, x: &Sequence) -> Result<Extended> {
    let star = StarSums::new(x);
    let explicit = |n_to: u64| -> Result<CertVal> {
        let mut acc = CertVal::zero();
        for n in 1..=n_to {
            let sv = star.star(n);
            if sv.is_zero() {
                continue;
            }
            acc = acc.add(&CertVal::exact(sv).mul(&u.at(n)?));
        }
        Ok(acc)
    };
    match &star.tail {
        Tail::Zero => Ok(Extended::Finite(explicit(star.head_len())?)),
        Tail::Constant(c) => {
            let mut n = star.head_len().max(u.head_len()).max(1);
            loop {
                let mass = match u.mass_beyond(n)? {
                    Extended::Infinite => return Ok(Extended::Infinite),
                    Extended::Finite(m) => m,
                };
                let out = explicit(n)?.add(&CertVal::exact(c.clone()).mul(&mass));
                if out.is_exact() || mass.error() <= BRACKET_TOL || n >= MAX_EXPLICIT {
                    return Ok(Extended::Finite(out));
                }
                n *= 2;
            }
        }
        Tail::Geometric { .. } => {
            let t = star.total().expect("geometric tail sums");
            let mut n = star.head_len().max(u.head_len()).max(1);
            loop {
                let sum = explicit(n)?;
                // 0 <= remainder <= (T - prefix(n)) * sup_{i>n} u(i).
                let left = CertVal::exact(t.clone() - star.prefix_sum(n));
                let hi = left.mul(&u.sup_beyond(n)?);
                let rem = CertVal::from_interval(0.0, hi.hi().max(0.0));
                let out = sum.add(&rem);
                if rem.error() <= BRACKET_TOL || n >= MAX_EXPLICIT {
                    return Ok(Extended::Finite(out));
                }
                n *= 2;
            }
        }
    }
}

/// `||x||_{d_{1,u}} = sum_n x*(n) u(n)`, using the spec's weights directly
/// (its exponent is ignored).
pub fn norm_d1(u: &Space, x: &Sequence) -> Result<Extended> {
    d1_norm(&D1Weights::Explicit(u), x)
}

/// `||x||_{d_{1,v}}` against the derived weight `v` of a `gamma_{1,w}` space.
pub fn norm_d1_derived(s: &Space, x: &Sequence) -> Result<Extended> {
    if !s.is_p1() {
        return Err(Error::Regime("derived d1 norm requires p = 1".into()));
    }
    d1_norm(&D1Weights::Derived(s), x)
}

/// Shared engine for the two supremum norms: objective
/// `prefix(n) * scale(n)` where `scale` is `1/phi(n)` (dual Marcinkiewicz
/// norm) or `phi(n)/n` (fundamental-sequence norm).
fn sup_norm(s: &Space, x: &Sequence, dual: bool) -> Result<SupNorm> {
    if dual && !s.is_p1() {
        return Err(Error::Regime("m_psi norm requires p = 1".into()));
    }
    let star = StarSums::new(x);
    if star.head_len() == 0 && star.tail == Tail::Zero {
        return Ok(SupNorm {
            value: CertVal::zero(),
            attained_at: None,
        });
    }
    let objective = |n: u64| -> CertVal {
        let pre = CertVal::exact(star.prefix_sum(n));
        if dual {
            pre.div(&s.phi(n))
        } else {
            pre.mul(&s.phi(n)).div_int(n as i64)
        }
    };
    match &star.tail {
        Tail::Zero => {
            let n0 = star.head_len();
            let mut best = objective(1);
            let mut arg = 1u64;
            for n in 2..=n0 {
                let o = objective(n);
                if o.value() > best.value() + best.error() + o.error() {
                    best = o;
                    arg = n;
                } else if o.value() > best.value() {
                    best = o.max(&best);
                }
            }
            Ok(SupNorm {
                value: best,
                attained_at: Some(arg),
            })
        }
        Tail::Constant(c) => {
            if dual {
                // x**(n) -> c > 0 while psi(n) = n/phi(n) is unbounded for
                // admissible weights, so the supremum always diverges.
                Err(Error::Divergent(
                    "sup x**(n) psi(n) diverges for constant-tail input".into(),
                ))
            } else {
                // sup x**(n) phi(n); finite only when W(infinity) < infinity.
                let winf = match s.w_inf() {
                    Extended::Infinite => {
                        return Err(Error::Divergent(
                            "sup x**(n) phi(n) diverges: constant tail with W(infinity) = infinity"
                                .into(),
                        ))
                    }
                    Extended::Finite(t) => t,
                };
                let phi_inf = winf.add(&CertVal::zero()).root_q(s.p());
                let m = star.head_len();
                let excess = star.prefix_sum(m) - c * Q::from_integer(m.into());
                let c_cv = CertVal::exact(c.clone());
                let mut n = m.max(1);
                loop {
                    let mut best = objective(1);
                    for k in 2..=n {
                        best = best.max(&objective(k));
                    }
                    // Tail sup bracket: c*phi(inf) <= sup_{k>n} <= c*phi(inf)
                    // + excess*phi(n+1)/(n+1).
                    let lo = c_cv.mul(&phi_inf);
                    let hi = lo.add(
                        &CertVal::exact(excess.clone())
                            .mul(&s.phi(n + 1))
                            .div_int((n + 1) as i64),
                    );
                    let tail_sup = CertVal::from_interval(lo.lo(), hi.hi());
                    let total = best.max(&tail_sup);
                    if tail_sup.error() <= BRACKET_TOL || n >= MAX_EXPLICIT {
                        let attained = if tail_sup.hi() < best.lo() {
                            Some(argmax(&star, s, dual, n))
                        } else {
                            None
                        };
                        return Ok(SupNorm {
                            value: total,
                            attained_at: attained,
                        });
                    }
                    n *= 2;
                }
            }
        }
        Tail::Geometric { .. } => {
            let t = star.total().expect("geometric tail sums");
            let t_cv = CertVal::exact(t);
            let mut n = star.head_len().max(1);
            loop {
                let mut best = objective(1);
                let mut arg = 1u64;
                for k in 2..=n {
                    let o = objective(k);
                    if o.value() > best.value() {
                        if o.value() > best.value() + best.error() + o.error() {
                            arg = k;
                        }
                        best = o.max(&best);
                    }
                }
                // For k > n the objective is at most T/phi(n+1) in the dual
                // case and T*phi(n+1)/(n+1) otherwise, and at least the
                // explicit objective already seen.
                let bound = if dual {
                    t_cv.div(&s.phi(n + 1))
                } else {
                    t_cv.mul(&s.phi(n + 1)).div_int((n + 1) as i64)
                };
                if bound.hi() <= best.lo() {
                    return Ok(SupNorm {
                        value: best,
                        attained_at: Some(arg),
                    });
                }
                if n >= MAX_EXPLICIT {
                    let total = best.max(&CertVal::from_interval(best.lo(), bound.hi()));
                    return Ok(SupNorm {
                        value: total,
                        attained_at: None,
                    });
                }
                n *= 2;
            }
        }
    }
}

fn argmax(star: &StarSums, s: &Space, dual: bool, n_to: u64) -> u64 {
    let mut arg = 1u64;
    let mut best = f64::NEG_INFINITY;
    for n in 1..=n_to {
        let pre = CertVal::exact(star.prefix_sum(n));
        let o = if dual {
            pre.div(&s.phi(n))
        } else {
            pre.mul(&s.phi(n)).div_int(n as i64)
        };
        if o.value() > best {
            best = o.value();
            arg = n;
        }
    }
    arg
}

/// `||x||_{m_psi} = sup_n x**(n) psi(n)` with `psi(n) = n/phi(n)`; reports
/// the attaining index when the supremum is attained at a finite index.
pub fn norm_m_psi(s: &Space, x: &Sequence) -> Result<SupNorm> {
    sup_norm(s, x, true)
}

/// `sup_n x**(n) phi(n)` - the Marcinkiewicz norm built from the fundamental
/// sequence itself (the embedding companion of `norm_m_psi`).
pub fn sup_mphi(s: &Space, x: &Sequence) -> Result<SupNorm> {
    sup_norm(s, x, false)
}

/// Membership in `m_psi^0`: `lim_n x**(n) psi(n) = 0`.
pub fn in_m_psi0(s: &Space, x: &Sequence) -> Result<bool> {
    if !s.is_p1() {
        return Err(Error::Regime("m_psi^0 membership requires p = 1".into()));
    }
    let star = StarSums::new(x);
    match &star.tail {
        // x**(n) psi(n) = prefix(n)/phi(n) -> T/phi(infinity).
        Tail::Zero | Tail::Geometric { .. } => {
            let t = star.total().expect("summable tail");
            Ok(t.is_zero() || s.w_inf().is_infinite())
        }
        // The limit is bounded below by c*psi(1) > 0.
        Tail::Constant(_) => Ok(false),
    }
}

/// Duality pairing `sum_n x(n) y(n)`, exact for rational data; errors when
/// the series is not absolutely convergent.
pub fn pairing(x: &Sequence, y: &Sequence) -> Result<CertVal> {
    let h = x.head_len().max(y.head_len());
    let mut acc = Q::zero();
    for n in 1..=h {
        acc += x.value_at(n) * y.value_at(n);
    }
    let tail = match (x.tail(), y.tail()) {
        (Tail::Zero, _) | (_, Tail::Zero) => Q::zero(),
        (Tail::Constant(_), Tail::Constant(_)) => {
            return Err(Error::Divergent(
                "pairing of two constant tails does not converge".into(),
            ))
        }
        (Tail::Constant(c), Tail::Geometric { a, r }) => {
            let m = y.head_len();
            c * a * r.pow((h - m) as i32) * r / (Q::one() - r)
        }
        (Tail::Geometric { a, r }, Tail::Constant(c)) => {
            let m = x.head_len();
            c * a * r.pow((h - m) as i32) * r / (Q::one() - r)
        }
        (Tail::Geometric { a: a1, r: r1 }, Tail::Geometric { a: a2, r: r2 }) => {
            let (m1, m2) = (x.head_len(), y.head_len());
            let rho = r1 * r2;
            a1 * a2 * r1.pow((h - m1) as i32) * r2.pow((h - m2) as i32) * &rho
                / (Q::one() - &rho)
        }
    };
    Ok(CertVal::exact(acc + tail))
}

/// `sum x*(n) y*(n) - sum |x(n) y(n)|`, nonnegative by rearrangement
/// alignment. The window fixes how much of the rearranged streams is
/// materialized explicitly before the closed-form tails take over.
pub fn hardy_littlewood_gap(x: &Sequence, y: &Sequence, window: u64) -> Result<CertVal> {
    let _ = window.max(1);
    let sx = rearrangement(x);
    let sy = rearrangement(y);
    let aligned = pairing(&sx, &sy)?;
    let raw = pairing(&abs_seq(x), &abs_seq(y))?;
    Ok(aligned.sub(&raw))
}

fn abs_seq(x: &Sequence) -> Sequence {
    Sequence::new(x.head().iter().map(|v| v.abs()).collect(), x.tail().clone())
        .expect("absolute values keep the invariants")
}

/// `| ||x||_{gamma_{1,w}} - ||x||_{d_{1,v}} |` with `v` the derived weight.
pub fn isometry_residual(s: &Space, x: &Sequence) -> Result<CertVal> {
    if !s.is_p1() {
        return Err(Error::Regime("isometry residual requires p = 1".into()));
    }
    let g = norm_gamma(s, x)?;
    let d = norm_d1_derived(s, x)?;
    match (g, d) {
        (Extended::Finite(a), Extended::Finite(b)) => Ok(a.sub(&b).abs()),
        (Extended::Infinite, Extended::Infinite) => Ok(CertVal::zero()),
        _ => Err(Error::Divergent(
            "one side of the isometry is infinite and the other is not".into(),
        )),
    }
}

/// `||x||_{gamma_{p,w}} - sup_n x**(n) phi(n)`, nonnegative: the embedding
/// into the Marcinkiewicz space of the fundamental sequence has constant 1.
pub fn embedding_gap(s: &Space, x: &Sequence) -> Result<CertVal> {
    let g = match norm_gamma(s, x)? {
        Extended::Infinite => {
            return Err(Error::Divergent(
                "embedding gap undefined for infinite norm".into(),
            ))
        }
        Extended::Finite(v) => v,
    };
    let sup = sup_mphi(s, x)?;
    Ok(g.sub(&sup.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certified::{q_int, q_ratio};
    use crate::fixtures;
    use crate::weights::{WTail, WeightSpec};

    fn wa_space() -> Space {
        Space::new(fixtures::w_a())
    }

    fn wb_space() -> Space {
        Space::new(fixtures::w_b(1))
    }

    fn seq(vals: &[i64]) -> Sequence {
        Sequence::finite(vals.iter().map(|&v| q_int(v)).collect())
    }

    fn fin(e: Extended) -> CertVal {
        e.expect_finite().clone()
    }

    #[test]
    fn gamma_norm_finite_examples() {
        let s = wa_space();
        // x = (1,1): x** = (1, 1, 2/3, ...), sum x**(n) w(n) = 2 + 1 = 3.
        assert!(fin(norm_gamma(&s, &seq(&[1, 1])).unwrap())
            .eq_exact(&CertVal::exact_int(3)));
        // e_1: sum w(n)/n = 2 + 1/2.
        assert!(fin(norm_gamma(&s, &Sequence::basis(1)).unwrap())
            .eq_exact(&CertVal::exact(q_ratio(5, 2))));
    }

    #[test]
    fn gamma_norm_constant_tail_is_w_infinity() {
        let s = wa_space();
        let chi = Sequence::new(vec![], Tail::Constant(q_int(1))).unwrap();
        assert!(fin(norm_gamma(&s, &chi).unwrap()).eq_exact(&CertVal::exact_int(3)));
        // Under W(infinity) = infinity the same element has infinite norm.
        let b = wb_space();
        assert!(norm_gamma(&b, &chi).unwrap().is_infinite());
    }

    #[test]
    fn d1_norm_examples() {
        // u = (2.5, 0.5): ||(1,1)|| = 2.5 + 0.5 = 3.
        let u = Space::new(
            WeightSpec::new(vec![q_ratio(5, 2), q_ratio(1, 2)], WTail::Zero, q_int(1)).unwrap(),
        );
        assert!(fin(norm_d1(&u, &seq(&[1, 1])).unwrap()).eq_exact(&CertVal::exact_int(3)));
        assert!(fin(norm_d1(&u, &Sequence::zero()).unwrap()).eq_exact(&CertVal::zero()));
        // u = e_1: the norm is x*(1) = max |x|.
        let e1 = Space::new(WeightSpec::new(vec![q_int(1)], WTail::Zero, q_int(1)).unwrap());
        assert!(fin(norm_d1(&e1, &seq(&[3, -7])).unwrap()).eq_exact(&CertVal::exact_int(7)));
    }

    #[test]
    fn isometry_residual_vanishes_exactly() {
        let s = wa_space();
        for x in [seq(&[1, 1]), seq(&[0, -3, 2]), Sequence::zero()] {
            let r = isometry_residual(&s, &x).unwrap();
            assert!(r.eq_exact(&CertVal::zero()), "residual {r:?}");
        }
        let b = wb_space();
        let r = isometry_residual(&b, &seq(&[2, -1, 5])).unwrap();
        assert!(r.value().abs() <= 1e-9 && r.error() <= 1e-9);
    }

    #[test]
    fn m_psi_norm_examples() {
        let s = wa_space();
        let e1 = norm_m_psi(&s, &Sequence::basis(1)).unwrap();
        assert!(e1.value.eq_exact(&CertVal::exact(q_ratio(2, 5))));
        assert_eq!(e1.attained_at, Some(1));
        // The derived-weight vector attains the sup at every index.
        let v = Sequence::finite(vec![q_ratio(5, 2), q_ratio(1, 2)]);
        let n = norm_m_psi(&s, &v).unwrap();
        assert!(n.value.eq_exact(&CertVal::one()));
        let z = norm_m_psi(&s, &Sequence::zero()).unwrap();
        assert!(z.value.eq_exact(&CertVal::zero()));
    }

    #[test]
    fn m_psi_rejects_constant_tails() {
        let s = wa_space();
        let chi = Sequence::new(vec![], Tail::Constant(q_int(1))).unwrap();
        assert!(norm_m_psi(&s, &chi).is_err());
    }

    #[test]
    fn m_psi0_membership() {
        let b = wb_space();
        assert!(in_m_psi0(&b, &seq(&[1, 2, 3])).unwrap());
        let s = wa_space();
        assert!(!in_m_psi0(&s, &Sequence::basis(1)).unwrap());
        assert!(in_m_psi0(&s, &Sequence::zero()).unwrap());
        let chi = Sequence::new(vec![], Tail::Constant(q_int(1))).unwrap();
        assert!(!in_m_psi0(&s, &chi).unwrap());
    }

    #[test]
    fn pairing_examples() {
        let x = seq(&[1, 1]);
        let y = Sequence::finite(vec![q_ratio(5, 2), q_ratio(1, 2)]);
        assert!(pairing(&x, &y).unwrap().eq_exact(&CertVal::exact_int(3)));
        assert!(pairing(&x, &Sequence::zero())
            .unwrap()
            .eq_exact(&CertVal::zero()));
        assert!(pairing(&Sequence::basis(1), &Sequence::basis(2))
            .unwrap()
            .eq_exact(&CertVal::zero()));
    }

    #[test]
    fn pairing_geometric_closed_forms() {
        let g = Sequence::new(
            vec![q_int(1)],
            Tail::Geometric {
                a: q_int(1),
                r: q_ratio(1, 2),
            },
        )
        .unwrap();
        // <g, g> = 1 + sum_{k>=1} (1/2)^(2k) = 1 + (1/4)/(3/4) = 4/3.
        assert!(pairing(&g, &g).unwrap().eq_exact(&CertVal::exact(q_ratio(4, 3))));
        let chi = Sequence::new(vec![], Tail::Constant(q_int(1))).unwrap();
        // <chi, g> = 1 (head) + sum_{k>=1} (1/2)^k = 1 + 1 = 2.
        assert!(pairing(&chi, &g).unwrap().eq_exact(&CertVal::exact_int(2)));
        assert!(pairing(&chi, &chi).is_err());
    }

    #[test]
    fn hardy_littlewood_examples() {
        let gap = hardy_littlewood_gap(&seq(&[1, 2]), &seq(&[3, 1]), 4).unwrap();
        assert!(gap.eq_exact(&CertVal::exact_int(2)));
        let aligned = hardy_littlewood_gap(&seq(&[3, 1]), &seq(&[5, 2]), 4).unwrap();
        assert!(aligned.eq_exact(&CertVal::zero()));
        let disjoint =
            hardy_littlewood_gap(&Sequence::basis(1), &Sequence::basis(2), 4).unwrap();
        assert!(disjoint.eq_exact(&CertVal::one()));
    }

    #[test]
    fn embedding_gap_examples() {
        let s = wa_space();
        let g = embedding_gap(&s, &Sequence::basis(1)).unwrap();
        assert!(g.eq_exact(&CertVal::zero()));
        let g2 = embedding_gap(&s, &seq(&[1, 1])).unwrap();
        assert!(g2.eq_exact(&CertVal::zero()));
        let g3 = embedding_gap(&s, &Sequence::zero()).unwrap();
        assert!(g3.eq_exact(&CertVal::zero()));
    }

    #[test]
    fn gamma_norm_homogeneity_and_symmetry() {
        let s = wa_space();
        let x = seq(&[2, -3, 1]);
        let lam = q_ratio(-7, 3);
        let nx = fin(norm_gamma(&s, &x).unwrap());
        let nlx = fin(norm_gamma(&s, &x.scale(&lam)).unwrap());
        assert!(nlx.eq_exact(&CertVal::exact(lam.abs()).mul(&nx)));
        // Permute and flip signs.
        let y = seq(&[3, 1, -2]);
        assert!(fin(norm_gamma(&s, &y).unwrap()).eq_exact(&nx));
    }

    #[test]
    fn gamma_norm_geometric_tail_certified() {
        let s = wa_space();
        let g = Sequence::new(
            vec![q_int(1)],
            Tail::Geometric {
                a: q_int(1),
                r: q_ratio(1, 2),
            },
        )
        .unwrap();
        // x* = (1, 1/2, 1/4, ...), x**(1) = 1, x**(2) = 3/4;
        // norm = 2*1 + 1*(3/4) = 11/4 (weights vanish beyond 2).
        let n = fin(norm_gamma(&s, &g).unwrap());
        assert!((n.value() - 2.75).abs() <= 2.0 * n.error().max(1e-12));
        let b = wb_space();
        let nb = fin(norm_gamma(&b, &g).unwrap());
        assert!(nb.error() < 1e-6);
        assert!(nb.value() > 0.0);
    }
}
