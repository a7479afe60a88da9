//! Exact-or-certified scalar values.
//!
//! A [`CertVal`] is either an exact rational or a floating-point value with a
//! sound error radius. Exact values combine exactly; as soon as an inexact
//! value enters a computation the result is demoted to a certified interval
//! and error radii propagate through every operation. The radius is a sound
//! bound on the truncation error of the series that produced the value plus a
//! small per-operation rounding cushion.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

/// Per-operation relative rounding cushion for the float lane.
const REL_SLOP: f64 = 4.0 * f64::EPSILON;
const ABS_SLOP: f64 = 1e-300;

fn slop(v: f64) -> f64 {
    v.abs() * REL_SLOP + ABS_SLOP
}

/// Convert a rational to f64, tolerating magnitudes outside the f64 range.
pub fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Exact rational from an f64 (every finite f64 is a rational).
pub fn q_from_f64(f: f64) -> Option<Q> {
    Q::from_float(f)
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exact k-th root of a nonnegative rational, when one exists.
pub fn rational_nth_root(q: &Q, k: u32) -> Option<Q> {
    if q.is_negative() || k == 0 {
        return None;
    }
    let n = q.numer().nth_root(k);
    let d = q.denom().nth_root(k);
    if n.pow(k) == *q.numer() && d.pow(k) == *q.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// A numeric value with a guaranteed error radius.
#[derive(Clone, Debug)]
pub enum CertVal {
    Exact(Q),
    Approx { value: f64, error: f64 },
}

impl CertVal {
    pub fn exact(q: Q) -> Self {
        CertVal::Exact(q)
    }

    pub fn exact_int(n: i64) -> Self {
        CertVal::Exact(q_int(n))
    }

    pub fn zero() -> Self {
        CertVal::exact_int(0)
    }

    pub fn one() -> Self {
        CertVal::exact_int(1)
    }

    pub fn approx(value: f64, error: f64) -> Self {
        debug_assert!(error >= 0.0);
        CertVal::Approx { value, error }
    }

    pub fn from_interval(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        let mid = 0.5 * (lo + hi);
        CertVal::Approx {
            value: mid,
            error: 0.5 * (hi - lo) + slop(mid),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CertVal::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Q> {
        match self {
            CertVal::Exact(q) => Some(q),
            CertVal::Approx { .. } => None,
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            CertVal::Exact(q) => q_to_f64(q),
            CertVal::Approx { value, .. } => *value,
        }
    }

    pub fn error(&self) -> f64 {
        match self {
            CertVal::Exact(_) => 0.0,
            CertVal::Approx { error, .. } => *error,
        }
    }

    /// Lower bound of the enclosure (with a rounding cushion for exact values).
    pub fn lo(&self) -> f64 {
        match self {
            CertVal::Exact(q) => {
                let v = q_to_f64(q);
                v - slop(v)
            }
            CertVal::Approx { value, error } => value - error,
        }
    }

    pub fn hi(&self) -> f64 {
        match self {
            CertVal::Exact(q) => {
                let v = q_to_f64(q);
                v + slop(v)
            }
            CertVal::Approx { value, error } => value + error,
        }
    }

    fn as_interval(&self) -> (f64, f64) {
        (self.lo(), self.hi())
    }

    pub fn is_zero_exact(&self) -> bool {
        matches!(self, CertVal::Exact(q) if q.is_zero())
    }

    pub fn certainly_positive(&self) -> bool {
        match self {
            CertVal::Exact(q) => q.is_positive(),
            CertVal::Approx { value, error } => *value - *error > 0.0,
        }
    }

    pub fn certainly_nonnegative(&self) -> bool {
        match self {
            CertVal::Exact(q) => !q.is_negative(),
            CertVal::Approx { value, error } => *value - *error >= 0.0,
        }
    }

    /// True when `self <= other` holds for every pair of enclosed values.
    pub fn certainly_le(&self, other: &CertVal) -> bool {
        match (self, other) {
            (CertVal::Exact(a), CertVal::Exact(b)) => a <= b,
            _ => self.hi() <= other.lo(),
        }
    }

    /// `|self - other| <= tol` judged on the midpoints plus radii.
    pub fn within(&self, other: &CertVal, tol: f64) -> bool {
        match (self, other) {
            (CertVal::Exact(a), CertVal::Exact(b)) if tol == 0.0 => a == b,
            _ => (self.value() - other.value()).abs() <= tol + self.error() + other.error(),
        }
    }

    pub fn eq_exact(&self, other: &CertVal) -> bool {
        match (self, other) {
            (CertVal::Exact(a), CertVal::Exact(b)) => a == b,
            _ => false,
        }
    }

    pub fn add(&self, rhs: &CertVal) -> CertVal {
        match (self, rhs) {
            (CertVal::Exact(a), CertVal::Exact(b)) => CertVal::Exact(a + b),
            _ => {
                let v = self.value() + rhs.value();
                CertVal::Approx {
                    value: v,
                    error: self.error() + rhs.error() + slop(v),
                }
            }
        }
    }

    pub fn sub(&self, rhs: &CertVal) -> CertVal {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> CertVal {
        match self {
            CertVal::Exact(a) => CertVal::Exact(-a),
            CertVal::Approx { value, error } => CertVal::Approx {
                value: -value,
                error: *error,
            },
        }
    }

    pub fn abs(&self) -> CertVal {
        match self {
            CertVal::Exact(a) => CertVal::Exact(a.abs()),
            CertVal::Approx { value, error } => CertVal::Approx {
                value: value.abs(),
                error: *error,
            },
        }
    }

    pub fn mul(&self, rhs: &CertVal) -> CertVal {
        match (self, rhs) {
            (CertVal::Exact(a), CertVal::Exact(b)) => CertVal::Exact(a * b),
            _ => {
                let (a, ea) = (self.value(), self.error());
                let (b, eb) = (rhs.value(), rhs.error());
                let v = a * b;
                CertVal::Approx {
                    value: v,
                    error: a.abs() * eb + b.abs() * ea + ea * eb + slop(v),
                }
            }
        }
    }

    /// Division; the divisor must be bounded away from zero.
    pub fn div(&self, rhs: &CertVal) -> CertVal {
        match (self, rhs) {
            (CertVal::Exact(a), CertVal::Exact(b)) if !b.is_zero() => CertVal::Exact(a / b),
            _ => {
                let (a, ea) = (self.value(), self.error());
                let (b, eb) = (rhs.value(), rhs.error());
                let denom = b.abs() - eb;
                let v = a / b;
                let error = if denom > 0.0 {
                    (ea + v.abs() * eb) / denom + slop(v)
                } else {
                    f64::INFINITY
                };
                CertVal::Approx { value: v, error }
            }
        }
    }

    pub fn recip(&self) -> CertVal {
        CertVal::one().div(self)
    }

    pub fn mul_int(&self, n: i64) -> CertVal {
        self.mul(&CertVal::exact_int(n))
    }

    pub fn div_int(&self, n: i64) -> CertVal {
        self.div(&CertVal::exact_int(n))
    }

    pub fn powi(&self, k: i32) -> CertVal {
        match self {
            CertVal::Exact(a) => {
                if k >= 0 || !a.is_zero() {
                    CertVal::Exact(a.pow(k))
                } else {
                    CertVal::Approx {
                        value: f64::INFINITY,
                        error: f64::INFINITY,
                    }
                }
            }
            CertVal::Approx { .. } => {
                let (lo, hi) = self.as_interval();
                // Monotone on nonnegative intervals, which is all we need.
                debug_assert!(lo >= -1e-12);
                let l = lo.max(0.0).powi(k);
                let h = hi.max(0.0).powi(k);
                CertVal::from_interval(l.min(h), l.max(h))
            }
        }
    }

    /// `self^p` for rational `p > 0`; the base must be nonnegative.
    pub fn pow_q(&self, p: &Q) -> CertVal {
        if p.is_integer() {
            let k = p.to_i32().expect("exponent fits i32");
            return self.powi(k);
        }
        if let CertVal::Exact(a) = self {
            if let Some(r) = exact_pow(a, p) {
                return CertVal::Exact(r);
            }
        }
        let t = q_to_f64(p);
        let (lo, hi) = self.as_interval();
        let l = lo.max(0.0).powf(t);
        let h = hi.max(0.0).powf(t);
        CertVal::from_interval(l.min(h), l.max(h))
    }

    /// `self^(1/p)` for rational `p > 0`; nonnegative base.
    pub fn root_q(&self, p: &Q) -> CertVal {
        let inv = p.recip();
        self.pow_q(&inv)
    }

    pub fn max(&self, rhs: &CertVal) -> CertVal {
        match (self, rhs) {
            (CertVal::Exact(a), CertVal::Exact(b)) => CertVal::Exact(a.max(b).clone()),
            _ => CertVal::from_interval(self.lo().max(rhs.lo()), self.hi().max(rhs.hi())),
        }
    }

    pub fn min(&self, rhs: &CertVal) -> CertVal {
        match (self, rhs) {
            (CertVal::Exact(a), CertVal::Exact(b)) => CertVal::Exact(a.min(b).clone()),
            _ => CertVal::from_interval(self.lo().min(rhs.lo()), self.hi().min(rhs.hi())),
        }
    }

    /// Best rational representative: the exact value, or the f64 midpoint
    /// converted exactly.
    pub fn to_rational(&self) -> Q {
        match self {
            CertVal::Exact(q) => q.clone(),
            CertVal::Approx { value, .. } => {
                Q::from_f64(*value).unwrap_or_else(|| Q::from_integer(BigInt::from(0)))
            }
        }
    }
}

fn exact_pow(base: &Q, p: &Q) -> Option<Q> {
    // base^(n/d) computed as the d-th root of base^n when that root is rational.
    let n = p.numer().to_i32()?;
    let d = p.denom().to_u32()?;
    if base.is_negative() {
        return None;
    }
    let powed = base.pow(n);
    rational_nth_root(&powed, d)
}

impl PartialEq for CertVal {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (CertVal::Exact(a), CertVal::Exact(b)) => a == b,
            (
                CertVal::Approx { value: a, error: ea },
                CertVal::Approx { value: b, error: eb },
            ) => a == b && ea == eb,
            _ => false,
        }
    }
}

impl std::fmt::Display for CertVal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CertVal::Exact(q) => write!(f, "{q}"),
            CertVal::Approx { value, error } => write!(f, "{value} (+-{error:.3e})"),
        }
    }
}

/// Sum a slice of certified values.
pub fn cert_sum<'a, I: IntoIterator<Item = &'a CertVal>>(vals: I) -> CertVal {
    let mut acc = CertVal::zero();
    for v in vals {
        acc = acc.add(v);
    }
    acc
}

/// A value extended with a distinguished plus-infinity, used for weight sums
/// W(infinity) and for divergent norms.
#[derive(Clone, Debug)]
pub enum Extended {
    Finite(CertVal),
    Infinite,
}

impl Extended {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn finite(&self) -> Option<&CertVal> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn expect_finite(&self) -> &CertVal {
        self.finite().expect("value is infinite")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = CertVal::exact(q_ratio(1, 3));
        let b = CertVal::exact(q_ratio(1, 6));
        let s = a.add(&b);
        assert!(s.eq_exact(&CertVal::exact(q_ratio(1, 2))));
        let p = a.mul(&b);
        assert!(p.eq_exact(&CertVal::exact(q_ratio(1, 18))));
    }

    #[test]
    fn approx_error_radii_propagate() {
        let a = CertVal::approx(1.0, 1e-12);
        let b = CertVal::approx(2.0, 1e-12);
        let s = a.add(&b);
        assert!(s.error() >= 2e-12);
        assert!((s.value() - 3.0).abs() < 1e-15);
        let p = a.mul(&b);
        assert!(p.error() >= 3e-12 - 1e-15);
    }

    #[test]
    fn mixed_mode_demotes_to_certified() {
        let a = CertVal::exact(q_int(2));
        let b = CertVal::approx(0.5, 1e-14);
        assert!(!a.mul(&b).is_exact());
    }

    #[test]
    fn rational_roots() {
        assert_eq!(rational_nth_root(&q_ratio(4, 9), 2), Some(q_ratio(2, 3)));
        assert_eq!(rational_nth_root(&q_int(2), 2), None);
        let v = CertVal::exact(q_int(4)).root_q(&q_int(2));
        assert!(v.eq_exact(&CertVal::exact_int(2)));
        let w = CertVal::exact(q_int(2)).root_q(&q_int(2));
        assert!(!w.is_exact());
        assert!((w.value() - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn interval_comparisons_are_sound() {
        let a = CertVal::approx(1.0, 0.1);
        let b = CertVal::approx(1.5, 0.1);
        assert!(a.certainly_le(&b));
        assert!(!b.certainly_le(&a));
        assert!(a.within(&CertVal::one(), 0.2));
    }
}
