//! Extreme- and smooth-point classifiers for the unit balls of
//! `gamma_{1,w}`, its dual and `m_psi^0`, the norming constructions from the
//! duality pairing, counterexample generators for the failed regimes, and a
//! midpoint-search oracle that independently probes extremality.

use crate::certified::{q_int, CertVal, Q};
use crate::norms::{self, SupNorm};
use crate::seqcore::{rearrangement, Sequence, Tail};
use crate::weights::Space;
use crate::{Error, Extended, Result};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Tolerance for unit-sphere membership in certified mode.
pub const SPHERE_TOL: f64 = 1e-9;
/// Horizon for strict-decrease scans before declaring the check inconclusive.
pub const SMOOTH_HORIZON: u64 = 1000;

/// Three-valued classifier outcome; `Inconclusive` marks an exhausted scan
/// horizon, never a silent guess.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails,
    Inconclusive,
}

impl Outcome {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Outcome::Holds
        } else {
            Outcome::Fails
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, Outcome::Holds)
    }
}

/// Machine-readable witness attached to a verdict.
#[derive(Clone, Debug)]
pub enum Witness {
    AttainingIndex(u64),
    ViolatingIndex { index: u64, condition: String },
    Pair { y: Sequence, z: Sequence },
    Gap(f64),
    Note(String),
}

/// Named condition outcome inside a verdict.
#[derive(Clone, Debug)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
}

/// Boolean classification with a witness and the named conditions checked.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub conditions: Vec<Condition>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.outcome.holds()
    }

    fn build(conditions: Vec<Condition>, witness: Option<Witness>) -> Self {
        let all = conditions.iter().all(|c| c.holds);
        Verdict {
            outcome: Outcome::from_bool(all),
            witness,
            conditions,
        }
    }
}

fn cond(name: &str, holds: bool) -> Condition {
    Condition {
        name: name.into(),
        holds,
    }
}

fn require_p1(s: &Space) -> Result<()> {
    if !s.is_p1() {
        return Err(Error::Regime("classifier requires p = 1".into()));
    }
    Ok(())
}

fn require_w_infinite(s: &Space) -> Result<()> {
    if !s.w_inf().is_infinite() {
        return Err(Error::Regime(
            "classifier requires W(infinity) = infinity".into(),
        ));
    }
    Ok(())
}

fn check_gamma_sphere(s: &Space, x: &Sequence) -> Result<CertVal> {
    match norms::norm_gamma(s, x)? {
        Extended::Infinite => Err(Error::Sphere("norm is infinite".into())),
        Extended::Finite(n) => {
            if n.within(&CertVal::one(), SPHERE_TOL) {
                Ok(n)
            } else {
                Err(Error::Sphere(format!(
                    "||x|| = {} is not 1 within {SPHERE_TOL}",
                    n.value()
                )))
            }
        }
    }
}

fn check_m_psi_sphere(s: &Space, x: &Sequence) -> Result<SupNorm> {
    let n = norms::norm_m_psi(s, x)?;
    if n.value.within(&CertVal::one(), SPHERE_TOL) {
        Ok(n)
    } else {
        Err(Error::Sphere(format!(
            "||x||_m_psi = {} is not 1 within {SPHERE_TOL}",
            n.value.value()
        )))
    }
}

/// Run length of the leading plateau of the star values, and of the next.
fn star_levels(star: &Sequence) -> Vec<(Q, u64)> {
    // Materialize distinct levels with multiplicities for the head region;
    // geometric tails contribute strictly decreasing singleton levels.
    let mut levels: Vec<(Q, u64)> = Vec::new();
    for v in star.head() {
        match levels.last_mut() {
            Some((lv, ct)) if lv == v => *ct += 1,
            _ => levels.push((v.clone(), 1)),
        }
    }
    levels
}

/// Extreme points of the `gamma_{1,w}` ball: `x* = chi_{[1,n0]} / phi(n0)`
/// with `W(n0 - 1) > 0` when `n0 > 1`. Requires `W(infinity) = infinity`.
pub fn classify_extreme_gamma1(s: &Space, x: &Sequence) -> Result<Verdict> {
    require_p1(s)?;
    require_w_infinite(s)?;
    check_gamma_sphere(s, x)?;
    let star = rearrangement(x);

    // Shape: finitely supported with a single flat level.
    let finite = star.tail() == &Tail::Zero;
    let levels = star_levels(&star);
    let flat = finite && levels.len() == 1;
    if !flat {
        let witness = decomposition_pair(s, &star).map(|(y, z)| Witness::Pair { y, z });
        return Ok(Verdict::build(
            vec![
                cond("flat-indicator-shape", false),
                cond("weight-positivity-below-n0", true),
            ],
            witness,
        ));
    }
    let n0 = levels[0].1;
    let height = CertVal::exact(levels[0].0.clone());
    let scale_ok = height.within(&s.phi(n0).recip(), SPHERE_TOL);
    let weight_ok = n0 == 1 || s.w_sum(n0 - 1).certainly_positive();
    let witness = if scale_ok && weight_ok {
        Some(Witness::AttainingIndex(n0))
    } else if !weight_ok {
        swap_pair(&star, n0).map(|(y, z)| Witness::Pair { y, z })
    } else {
        Some(Witness::Note("plateau height does not match 1/phi(n0)".into()))
    };
    Ok(Verdict::build(
        vec![
            cond("flat-indicator-shape", scale_ok),
            cond("weight-positivity-below-n0", weight_ok),
        ],
        witness,
    ))
}

/// The rebalancing decomposition for a star with at least two levels:
/// `y = x* - b chi_[1,n0] + a chi_(n0, n0+n1]` and its mirror, with
/// `b = a (phi(n0+n1) - phi(n0)) / phi(n0)`, both on the unit sphere.
pub fn decomposition_pair(s: &Space, star: &Sequence) -> Option<(Sequence, Sequence)> {
    let levels = star_levels_extended(star, 3);
    if levels.len() < 2 {
        return None;
    }
    let (top, n0) = levels[0].clone();
    let (second, n1) = levels[1].clone();
    let third = levels.get(2).map(|(v, _)| v.clone()).unwrap_or_else(Q::zero);
    let d = (top.clone() - second.clone()).min(second.clone() - third);
    if !d.is_positive() {
        return None;
    }
    let phi_n0 = s.phi(n0);
    let phi_n01 = s.phi(n0 + n1);
    let rho = phi_n01.sub(&phi_n0).div(&phi_n0);
    let rho_q = rho.to_rational();
    if !rho_q.is_positive() {
        return None;
    }
    // a = d / (2 max(1, rho)) keeps both a and b = a*rho inside (0, d).
    let denom = if rho_q > Q::one() {
        rho_q.clone() * q_int(2)
    } else {
        q_int(2)
    };
    let a = d / denom;
    let b = &a * &rho_q;
    let m = (n0 + n1).max(star.head_len());
    let mut y_head = Vec::with_capacity(m as usize);
    let mut z_head = Vec::with_capacity(m as usize);
    for i in 1..=m {
        let base = star_value(star, i);
        if i <= n0 {
            y_head.push(&base - &b);
            z_head.push(&base + &b);
        } else if i <= n0 + n1 {
            y_head.push(&base + &a);
            z_head.push(&base - &a);
        } else {
            y_head.push(base.clone());
            z_head.push(base);
        }
    }
    // Materializing past the old head shifts a geometric tail's phase.
    let shift = m - star.head_len();
    let tail = match star.tail() {
        Tail::Geometric { a: ga, r } => Tail::Geometric {
            a: ga * r.pow(shift as i32),
            r: r.clone(),
        },
        t => t.clone(),
    };
    let y = Sequence::new(y_head, tail.clone()).ok()?;
    let z = Sequence::new(z_head, tail).ok()?;
    Some((y, z))
}

/// Swap decomposition for a flat star over vanishing leading weights:
/// `y = x* + a e_1 - a e_{n0}`, `z` the mirror.
fn swap_pair(star: &Sequence, n0: u64) -> Option<(Sequence, Sequence)> {
    if n0 < 2 {
        return None;
    }
    let a = star_value(star, n0) / q_int(2);
    if !a.is_positive() {
        return None;
    }
    let mut y_head: Vec<Q> = (1..=n0).map(|i| star_value(star, i)).collect();
    let mut z_head = y_head.clone();
    y_head[0] += &a;
    y_head[n0 as usize - 1] -= &a;
    z_head[0] -= &a;
    z_head[n0 as usize - 1] += &a;
    Some((Sequence::finite(y_head), Sequence::finite(z_head)))
}

fn star_value(star: &Sequence, i: u64) -> Q {
    star.value_at(i)
}

/// First index where two sequences differ, scanning past both heads.
fn first_mismatch(a: &Sequence, b: &Sequence) -> Option<u64> {
    let m = a.head_len().max(b.head_len()) + 1;
    (1..=m).find(|&i| a.value_at(i) != b.value_at(i))
}

/// Distinct leading levels of the star values including tail contributions,
/// up to `take` levels.
fn star_levels_extended(star: &Sequence, take: usize) -> Vec<(Q, u64)> {
    let mut levels: Vec<(Q, u64)> = Vec::new();
    let mut i = 1u64;
    // The level structure of a canonical star stabilizes quickly: head
    // plateaus then a strictly decreasing tail; scan until enough levels.
    let hard_stop = star.head_len() + 4;
    while levels.len() < take && i <= hard_stop {
        let v = star_value(star, i);
        match levels.last_mut() {
            Some((lv, ct)) if *lv == v => *ct += 1,
            _ => {
                if v.is_zero() {
                    levels.push((v, 1));
                    break;
                }
                levels.push((v, 1));
            }
        }
        i += 1;
    }
    levels
}

/// Extreme points of the dual ball: `x*` must equal the derived weight `v`
/// termwise. Requires `||x||_{m_psi} = 1`.
pub fn classify_extreme_dual(s: &Space, x: &Sequence) -> Result<Verdict> {
    require_p1(s)?;
    check_m_psi_sphere(s, x)?;
    let star = rearrangement(x);
    if s.spec().tail() == &crate::weights::WTail::Zero {
        // v is finitely supported and exact: structural comparison.
        let m = s.spec().head_len();
        let mut v_head = Vec::new();
        for i in 1..=m {
            v_head.push(s.v(i)?.to_rational());
        }
        while v_head.last().is_some_and(|q| q.is_zero()) {
            v_head.pop();
        }
        let expected = Sequence::finite(v_head);
        let matches = star == expected;
        let witness = if matches {
            None
        } else {
            first_mismatch(&star, &expected).map(|i| Witness::ViolatingIndex {
                index: i,
                condition: "x*(i) != v(i)".into(),
            })
        };
        return Ok(Verdict::build(vec![cond("star-equals-derived-weight", matches)], witness));
    }
    // v has full support and is not representable by the sequence tail
    // classes; a finitely supported or plateaued star can never match it.
    let k = (s.spec().head_len() + 8).max(star.head_len() + 2);
    for i in 1..=k {
        let vi = s.v(i)?;
        let si = CertVal::exact(star_value(&star, i));
        if !si.within(&vi, SPHERE_TOL) {
            return Ok(Verdict::build(
                vec![cond("star-equals-derived-weight", false)],
                Some(Witness::ViolatingIndex {
                    index: i,
                    condition: "x*(i) != v(i)".into(),
                }),
            ));
        }
    }
    Ok(Verdict {
        outcome: Outcome::Inconclusive,
        witness: Some(Witness::Note(
            "window matches v but the tail classes cannot represent it exactly".into(),
        )),
        conditions: vec![cond("star-equals-derived-weight", true)],
    })
}

/// Smooth points of `gamma_{1,w}`: infinite support and strict decrease of
/// `x*` at every index carrying positive weight.
pub fn classify_smooth_gamma1(s: &Space, x: &Sequence) -> Result<Verdict> {
    require_p1(s)?;
    check_gamma_sphere(s, x)?;
    let star = rearrangement(x);
    let infinite_support = match x.tail() {
        Tail::Zero => false,
        Tail::Constant(c) => !c.is_zero(),
        Tail::Geometric { .. } => true,
    };
    if !infinite_support {
        return Ok(Verdict::build(
            vec![cond("infinite-support", false), cond("strict-decrease-on-weighted-indices", true)],
            Some(Witness::Note("finite support".into())),
        ));
    }
    // Indices to check: all n with w(n) > 0. For a zero-tail weight that is
    // a finite set; positive tails require strict decrease everywhere.
    let w_head = s.spec().head_len();
    let w_tail_positive = s.spec().tail() != &crate::weights::WTail::Zero;
    let check_to = if w_tail_positive {
        // Strict decrease must hold for all n; structurally that needs the
        // star to be eventually strictly decreasing, true for geometric
        // tails and false for constant plateaus.
        match star.tail() {
            Tail::Constant(_) => {
                let idx = star.head_len() + 1;
                return Ok(Verdict::build(
                    vec![
                        cond("infinite-support", true),
                        cond("strict-decrease-on-weighted-indices", false),
                    ],
                    Some(Witness::ViolatingIndex {
                        index: idx,
                        condition: "x*(n) = x*(n+1) on the plateau".into(),
                    }),
                ));
            }
            _ => star.head_len() + 1,
        }
    } else {
        w_head
    };
    if check_to > SMOOTH_HORIZON {
        return Ok(Verdict {
            outcome: Outcome::Inconclusive,
            witness: Some(Witness::Note(format!(
                "strict-decrease scan needs {check_to} indices, beyond the horizon {SMOOTH_HORIZON}"
            ))),
            conditions: vec![cond("infinite-support", true)],
        });
    }
    for n in 1..=check_to {
        if s.spec().weight_is_zero_at(n) {
            continue;
        }
        if star_value(&star, n) <= star_value(&star, n + 1) {
            return Ok(Verdict::build(
                vec![
                    cond("infinite-support", true),
                    cond("strict-decrease-on-weighted-indices", false),
                ],
                Some(Witness::ViolatingIndex {
                    index: n,
                    condition: "x*(n) <= x*(n+1) at a positive weight".into(),
                }),
            ));
        }
    }
    Ok(Verdict::build(
        vec![
            cond("infinite-support", true),
            cond("strict-decrease-on-weighted-indices", true),
        ],
        None,
    ))
}

/// Attaining indices of `sup_n x**(n) psi(n) = 1` for an element of the
/// `m_psi` sphere, with their objective values.
fn attaining_indices(s: &Space, x: &Sequence) -> Result<Vec<(u64, CertVal)>> {
    let star = rearrangement(x);
    let n_top = match star.tail() {
        Tail::Zero => star.head_len().max(1) + 1,
        Tail::Constant(_) => {
            return Err(Error::Divergent(
                "objective diverges for constant tails".into(),
            ))
        }
        Tail::Geometric { .. } => {
            // Scan until the tail objective T/phi(n+1) is certainly below 1.
            let total = norms_total(&star).expect("geometric tail sums");
            let mut n = star.head_len().max(1);
            loop {
                let bound = CertVal::exact(total.clone()).div(&s.phi(n + 1));
                if bound.hi() < 1.0 - SPHERE_TOL || n > (1 << 20) {
                    break n;
                }
                n *= 2;
            }
        }
    };
    let mut prefix = Q::zero();
    let mut out = Vec::new();
    for n in 1..=n_top {
        prefix += star_value(&star, n);
        let obj = CertVal::exact(prefix.clone()).div(&s.phi(n));
        if obj.within(&CertVal::one(), SPHERE_TOL) {
            out.push((n, obj));
        }
    }
    Ok(out)
}

fn norms_total(star: &Sequence) -> Option<Q> {
    match star.tail() {
        Tail::Zero => Some(star.head().iter().sum()),
        Tail::Constant(_) => None,
        Tail::Geometric { a, r } => {
            let head: Q = star.head().iter().sum();
            Some(head + a * r / (Q::one() - r))
        }
    }
}

/// Smooth points of the predual `m_psi^0`: exactly one attaining index.
pub fn classify_smooth_predual(s: &Space, x: &Sequence) -> Result<Verdict> {
    require_p1(s)?;
    require_w_infinite(s)?;
    if !norms::in_m_psi0(s, x)? {
        return Err(Error::Regime("element is not in m_psi^0".into()));
    }
    check_m_psi_sphere(s, x)?;
    let att = attaining_indices(s, x)?;
    let unique = att.len() == 1;
    let witness = match att.as_slice() {
        [(n, _)] => Some(Witness::AttainingIndex(*n)),
        [] => Some(Witness::Note("no attaining index found".into())),
        many => Some(Witness::ViolatingIndex {
            index: many[1].0,
            condition: "second attaining index".into(),
        }),
    };
    Ok(Verdict::build(
        vec![cond("unique-attaining-index", unique)],
        witness,
    ))
}

/// Smooth points of the dual ball: a unique attaining index with a strict
/// gap to the rest of the objective.
pub fn classify_smooth_dual(s: &Space, x: &Sequence) -> Result<Verdict> {
    require_p1(s)?;
    require_w_infinite(s)?;
    check_m_psi_sphere(s, x)?;
    let att = attaining_indices(s, x)?;
    if att.len() != 1 {
        let witness = att
            .get(1)
            .map(|(n, _)| Witness::ViolatingIndex {
                index: *n,
                condition: "plateau attainment".into(),
            })
            .or(Some(Witness::Note("no attaining index".into())));
        return Ok(Verdict::build(
            vec![cond("unique-attaining-index", false), cond("strict-gap", false)],
            witness,
        ));
    }
    let n0 = att[0].0;
    // Gap: sup over n != n0 must stay below 1.
    let star = rearrangement(x);
    let mut prefix = Q::zero();
    let mut second = CertVal::zero();
    let scan_to = match star.tail() {
        Tail::Zero => star.head_len().max(1) + 1,
        _ => star.head_len().max(n0) + 64,
    };
    for n in 1..=scan_to {
        prefix += star_value(&star, n);
        if n == n0 {
            continue;
        }
        let obj = CertVal::exact(prefix.clone()).div(&s.phi(n));
        second = second.max(&obj);
    }
    let gap = CertVal::one().sub(&second);
    let strict = gap.certainly_positive();
    Ok(Verdict::build(
        vec![cond("unique-attaining-index", true), cond("strict-gap", strict)],
        Some(if strict {
            Witness::Gap(gap.value())
        } else {
            Witness::ViolatingIndex {
                index: n0,
                condition: "no strict gap".into(),
            }
        }),
    ))
}

/// Ranking permutation: indices of x ordered by decreasing absolute value,
/// ties broken by lowest index first (or highest when `low_first` is false).
fn ranking(x: &Sequence, count: u64, low_first: bool) -> Vec<u64> {
    let m = x.head_len();
    let mut idx: Vec<u64> = (1..=m).collect();
    idx.sort_by(|&i, &j| {
        let vi = x.value_at(i).abs();
        let vj = x.value_at(j).abs();
        vj.cmp(&vi).then(if low_first { i.cmp(&j) } else { j.cmp(&i) })
    });
    idx.truncate(count as usize);
    idx
}

/// Tie-breaking policy for the ranking permutation behind the norming
/// functional.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    LowestIndexFirst,
    HighestIndexFirst,
}

/// Norming functional of a finitely supported `x != 0`:
/// `y(n) = sg(x(n)) v(rank of n)`, so that `<x, y> = ||x||_{gamma_{1,w}}`
/// and `||y||_{m_psi} = 1`.
pub fn norming_functional(s: &Space, x: &Sequence) -> Result<Sequence> {
    norming_functional_with(s, x, TieBreak::LowestIndexFirst)
}

pub fn norming_functional_with(s: &Space, x: &Sequence, tie: TieBreak) -> Result<Sequence> {
    require_p1(s)?;
    if !x.is_finitely_supported() {
        return Err(Error::InvalidArgument(
            "norming functional requires finite support".into(),
        ));
    }
    if x.is_zero() {
        return Err(Error::InvalidArgument("x must be nonzero".into()));
    }
    let support = x.support_size().expect("finite support");
    let order = ranking(x, x.head_len(), tie == TieBreak::LowestIndexFirst);
    let mut head = vec![Q::zero(); x.head_len() as usize];
    for (rank0, &i) in order.iter().enumerate() {
        let rank = rank0 as u64 + 1;
        if rank > support {
            break;
        }
        let xi = x.value_at(i);
        if xi.is_zero() {
            break;
        }
        let sign = if xi.is_positive() { Q::one() } else { -Q::one() };
        head[i as usize - 1] = sign * s.v(rank)?.to_rational();
    }
    Ok(Sequence::finite(head))
}

/// Norming element for `y` in `m_psi`: a unit vector of `gamma_{1,w}` whose
/// pairing with `y` attains (case 1, finite support) or approaches (case 2,
/// explicit `m`) the `m_psi` norm.
pub fn norming_element(s: &Space, y: &Sequence, m: Option<u64>) -> Result<Sequence> {
    require_p1(s)?;
    if y.is_zero() {
        return Err(Error::InvalidArgument("y must be nonzero".into()));
    }
    let rank_count = match m {
        Some(m) => {
            if m == 0 {
                return Err(Error::InvalidArgument("m must be >= 1".into()));
            }
            m
        }
        None => {
            if !y.is_finitely_supported() {
                return Err(Error::InvalidArgument(
                    "attainment case requires finite support; pass m for the approximant case"
                        .into(),
                ));
            }
            let sup = norms::norm_m_psi(s, y)?;
            sup.attained_at.ok_or_else(|| {
                Error::InvalidArgument("supremum not attained at a finite index".into())
            })?
        }
    };
    // sigma([1, rank_count]): indices of the top-ranked values. For tailed
    // sequences materialize enough of the merged order to cover the ranks.
    let order = ranked_indices(y, rank_count)?;
    let scale = s.phi(rank_count).recip().to_rational();
    let top = order.iter().copied().max().unwrap_or(1);
    let mut head = vec![Q::zero(); top as usize];
    for &i in &order {
        let yi = y.value_at(i);
        let sign = if yi.is_negative() { -Q::one() } else { Q::one() };
        head[i as usize - 1] = sign * scale.clone();
    }
    Ok(Sequence::finite(head))
}

/// Indices of the `count` largest absolute values of `y`, lowest index first
/// among ties; supports geometric tails by materializing the merge.
fn ranked_indices(y: &Sequence, count: u64) -> Result<Vec<u64>> {
    let m = y.head_len();
    let mut pool: Vec<(Q, u64)> = (1..=m).map(|i| (y.value_at(i).abs(), i)).collect();
    match y.tail() {
        Tail::Zero => {}
        Tail::Constant(_) => {
            return Err(Error::InvalidArgument(
                "ranking a constant tail is not supported".into(),
            ))
        }
        Tail::Geometric { .. } => {
            for k in 1..=count {
                let i = m + k;
                pool.push((y.value_at(i).abs(), i));
            }
        }
    }
    pool.sort_by(|(va, ia), (vb, ib)| vb.cmp(va).then(ia.cmp(ib)));
    if (pool.len() as u64) < count {
        return Err(Error::InvalidArgument(format!(
            "sequence has fewer than {count} ranked values"
        )));
    }
    let mut out: Vec<u64> = pool.iter().take(count as usize).map(|(_, i)| *i).collect();
    out.sort_unstable();
    // The attainment construction assumes the ranked values are positive.
    for &i in &out {
        if y.value_at(i).is_zero() {
            return Err(Error::InvalidArgument(
                "ranked window contains zero values".into(),
            ));
        }
    }
    Ok(out)
}

/// Counterexample kinds transcribed from the necessity arguments of the
/// regime dichotomies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CounterexampleKind {
    OcFailure,
    SmFailure,
    ScP1,
    ScWinf,
    ScZeroWeightFirst,
    ScZeroWeightLater,
}

impl CounterexampleKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CounterexampleKind::OcFailure => "oc_failure",
            CounterexampleKind::SmFailure => "sm_failure",
            CounterexampleKind::ScP1 => "sc_p1",
            CounterexampleKind::ScWinf => "sc_winf",
            CounterexampleKind::ScZeroWeightFirst => "sc_zero_weight_n0_1",
            CounterexampleKind::ScZeroWeightLater => "sc_zero_weight_n0_gt1",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "oc_failure" => CounterexampleKind::OcFailure,
            "sm_failure" => CounterexampleKind::SmFailure,
            "sc_p1" => CounterexampleKind::ScP1,
            "sc_winf" => CounterexampleKind::ScWinf,
            "sc_zero_weight_n0_1" => CounterexampleKind::ScZeroWeightFirst,
            "sc_zero_weight_n0_gt1" => CounterexampleKind::ScZeroWeightLater,
            _ => return None,
        })
    }
}

/// One verified equality inside a counterexample bundle.
#[derive(Clone, Debug)]
pub struct BundleCheck {
    pub name: String,
    pub passed: bool,
    pub exact: bool,
    pub residual: f64,
}

/// A counterexample fixture with its defining equalities verified through
/// the norms module.
#[derive(Clone, Debug)]
pub struct CounterexampleBundle {
    pub kind: CounterexampleKind,
    pub elements: BTreeMap<String, Sequence>,
    pub checks: Vec<BundleCheck>,
    pub notes: Vec<String>,
}

impl CounterexampleBundle {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn norm_check(name: &str, s: &Space, x: &Sequence, expect: &CertVal) -> Result<BundleCheck> {
    let n = match norms::norm_gamma(s, x)? {
        Extended::Infinite => {
            return Ok(BundleCheck {
                name: name.into(),
                passed: false,
                exact: false,
                residual: f64::INFINITY,
            })
        }
        Extended::Finite(v) => v,
    };
    let diff = n.sub(expect);
    let exact = diff.is_exact();
    let passed = if exact {
        diff.is_zero_exact()
    } else {
        diff.value().abs() <= SPHERE_TOL + diff.error()
    };
    Ok(BundleCheck {
        name: name.into(),
        passed,
        exact,
        residual: diff.value().abs(),
    })
}

/// Build and verify a counterexample bundle for the given kind; errors name
/// the regime the kind needs when the weight does not satisfy it.
pub fn counterexample(
    kind: CounterexampleKind,
    s: &Space,
    eps: Option<&Q>,
) -> Result<CounterexampleBundle> {
    let mut elements = BTreeMap::new();
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    match kind {
        CounterexampleKind::OcFailure | CounterexampleKind::SmFailure => {
            let winf = match s.w_inf() {
                Extended::Infinite => {
                    return Err(Error::Regime(format!(
                        "{} requires W(infinity) < infinity",
                        kind.as_str()
                    )))
                }
                Extended::Finite(v) => v,
            };
            let chi = Sequence::new(vec![], Tail::Constant(Q::one()))?;
            if kind == CounterexampleKind::OcFailure {
                elements.insert("x".into(), chi.clone());
                for m in 1..=4u64 {
                    let xm = Sequence::new(vec![Q::zero(); m as usize - 1], Tail::Constant(Q::one()))?;
                    checks.push(norm_check(
                        &format!("norm(x_{m}) = W(infinity)"),
                        s,
                        &xm,
                        &winf,
                    )?);
                    elements.insert(format!("x_{m}"), xm);
                }
                notes.push(
                    "the shifted indicators decrease to 0 pointwise with constant norm".into(),
                );
            } else {
                let x = Sequence::new(vec![Q::zero()], Tail::Constant(Q::one()))?;
                elements.insert("x".into(), x.clone());
                elements.insert("y".into(), chi.clone());
                let le = (1..=3).all(|i| x.value_at(i) <= chi.value_at(i));
                checks.push(BundleCheck {
                    name: "x <= y, x != y".into(),
                    passed: le && x != chi,
                    exact: true,
                    residual: 0.0,
                });
                checks.push(norm_check("norm(x) = W(infinity)", s, &x, &winf)?);
                checks.push(norm_check("norm(y) = W(infinity)", s, &chi, &winf)?);
            }
        }
        CounterexampleKind::ScP1 => {
            if !s.is_p1() {
                return Err(Error::Regime("sc_p1 requires p = 1".into()));
            }
            let c1 = s.phi(1).recip().to_rational();
            let c2 = s.phi(2).recip().to_rational();
            let x = Sequence::finite(vec![c1]);
            let y = Sequence::finite(vec![c2.clone(), c2]);
            let sum = x.add(&y)?;
            checks.push(norm_check("norm(x) = 1", s, &x, &CertVal::one())?);
            checks.push(norm_check("norm(y) = 1", s, &y, &CertVal::one())?);
            checks.push(norm_check("norm(x+y) = 2", s, &sum, &CertVal::exact_int(2))?);
            elements.insert("x".into(), x);
            elements.insert("y".into(), y);
            elements.insert("x_plus_y".into(), sum);
        }
        CounterexampleKind::ScWinf => {
            let winf = match s.w_inf() {
                Extended::Infinite => {
                    return Err(Error::Regime("sc_winf requires W(infinity) < infinity".into()))
                }
                Extended::Finite(v) => v,
            };
            // Scale c = W(infinity)^(-1/p); the underlying pair is the even
            // indicator against the full indicator, both scaled by c, whose
            // rearrangements are constant plateaus carried directly.
            let c = winf.root_q(s.p()).recip();
            let c_q = c.to_rational();
            if !c.is_exact() {
                notes.push("scale W(infinity)^(-1/p) is irrational; checks are certified".into());
            }
            let x_star = Sequence::new(vec![], Tail::Constant(c_q.clone()))?;
            let sum_star = Sequence::new(vec![], Tail::Constant(&c_q * q_int(2)))?;
            checks.push(norm_check("norm(x) = 1", s, &x_star, &CertVal::one())?);
            checks.push(norm_check("norm(y) = 1", s, &x_star, &CertVal::one())?);
            checks.push(norm_check("norm(x+y) = 2", s, &sum_star, &CertVal::exact_int(2))?);
            notes.push(
                "x is the even-indicator multiple and y the full indicator; the fixture carries their rearrangements".into(),
            );
            elements.insert("x_star".into(), x_star.clone());
            elements.insert("y_star".into(), x_star);
            elements.insert("x_plus_y_star".into(), sum_star);
        }
        CounterexampleKind::ScZeroWeightFirst => {
            if !s.weight_at(1).is_zero_exact() {
                return Err(Error::Regime("sc_zero_weight_n0_1 requires w(1) = 0".into()));
            }
            let phi2 = s.phi(2);
            let c = phi2.recip().to_rational();
            let eps_q = match eps {
                Some(e) => e.clone(),
                None => &c / q_int(2),
            };
            if !eps_q.is_positive() || eps_q >= c {
                return Err(Error::InvalidArgument(
                    "eps must lie in (0, 1/phi(2))".into(),
                ));
            }
            let x = Sequence::finite(vec![c.clone(), c.clone()]);
            let y = Sequence::finite(vec![&c + &eps_q, &c - &eps_q]);
            let sum = x.add(&y)?;
            checks.push(norm_check("norm(x) = 1", s, &x, &CertVal::one())?);
            checks.push(norm_check("norm(y) = 1", s, &y, &CertVal::one())?);
            checks.push(norm_check("norm(x+y) = 2", s, &sum, &CertVal::exact_int(2))?);
            checks.push(BundleCheck {
                name: "x != y".into(),
                passed: x != y,
                exact: true,
                residual: 0.0,
            });
            elements.insert("x".into(), x);
            elements.insert("y".into(), y);
            elements.insert("x_plus_y".into(), sum);
        }
        CounterexampleKind::ScZeroWeightLater => {
            let m = s.spec().head_len();
            let n0 = (2..=m)
                .find(|&i| s.spec().weight_is_zero_at(i))
                .ok_or_else(|| {
                    Error::Regime("sc_zero_weight_n0_gt1 requires w(n0) = 0 for some n0 > 1".into())
                })?;
            let c = s.phi(n0).recip().to_rational();
            let half = &c / q_int(2);
            let x = Sequence::finite(vec![c.clone(); n0 as usize]);
            let mut y_head = vec![c.clone(); n0 as usize - 1];
            y_head.push(half.clone());
            y_head.push(half);
            let y = Sequence::finite(y_head);
            let sum = x.add(&y)?;
            checks.push(norm_check("norm(x) = 1", s, &x, &CertVal::one())?);
            checks.push(norm_check("norm(y) = 1", s, &y, &CertVal::one())?);
            checks.push(norm_check("norm(x+y) = 2", s, &sum, &CertVal::exact_int(2))?);
            elements.insert("x".into(), x);
            elements.insert("y".into(), y);
            elements.insert("x_plus_y".into(), sum);
        }
    }
    Ok(CounterexampleBundle {
        kind,
        elements,
        checks,
        notes,
    })
}

/// Symbolic extreme vertex: signed indicator over `support` scaled by
/// `1/phi(n0)`.
#[derive(Clone, Debug)]
pub struct ExtremeVertex {
    pub support: Vec<u64>,
    pub signs: Vec<i8>,
    pub n0: u64,
}

impl ExtremeVertex {
    /// Materialize as a sequence with rationalized scale.
    pub fn to_sequence(&self, s: &Space) -> Sequence {
        let scale = s.phi(self.n0).recip().to_rational();
        let top = *self.support.iter().max().expect("nonempty support");
        let mut head = vec![Q::zero(); top as usize];
        for (&i, &sg) in self.support.iter().zip(&self.signs) {
            head[i as usize - 1] = if sg >= 0 { scale.clone() } else { -scale.clone() };
        }
        Sequence::finite(head)
    }
}

/// Enumerate the extreme points of the unit ball restricted to the first
/// `n_dim` coordinates: all signed placements of `chi_A / phi(|A|)` with
/// `|A| = n0` admissible (`n0 = 1` or `W(n0-1) > 0`).
pub fn enumerate_extreme_vertices(s: &Space, n_dim: u64) -> Result<Vec<ExtremeVertex>> {
    require_p1(s)?;
    require_w_infinite(s)?;
    if n_dim == 0 || n_dim > 12 {
        return Err(Error::SizeBound("dimension must be in 1..=12".into()));
    }
    let mut out = Vec::new();
    for n0 in 1..=n_dim {
        if n0 > 1 && !s.w_sum(n0 - 1).certainly_positive() {
            continue;
        }
        // Lexicographic subsets of {1..n_dim} of size n0.
        let mut subset: Vec<u64> = (1..=n0).collect();
        loop {
            for mask in 0..(1u32 << n0) {
                let signs: Vec<i8> = (0..n0)
                    .map(|b| if mask & (1 << b) != 0 { -1 } else { 1 })
                    .collect();
                out.push(ExtremeVertex {
                    support: subset.clone(),
                    signs,
                    n0,
                });
            }
            // Advance the subset.
            let k = n0 as usize;
            let mut i = k;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if subset[i] < n_dim - (k - 1 - i) as u64 {
                    subset[i] += 1;
                    for j in i + 1..k {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX {
                break;
            }
        }
    }
    Ok(out)
}

/// Materialized extreme points.
pub fn enumerate_extreme_points(s: &Space, n_dim: u64) -> Result<Vec<Sequence>> {
    Ok(enumerate_extreme_vertices(s, n_dim)?
        .iter()
        .map(|v| v.to_sequence(s))
        .collect())
}

/// Midpoint-search oracle: looks for `(y, z) = (x + d, x - d)` with both on
/// the unit sphere within `tol = 1e-9`. A returned pair disproves
/// extremality; exhausting the budget without a find is evidence only.
pub fn extreme_midpoint_oracle(
    s: &Space,
    x: &Sequence,
    n_dim: u64,
    budget: u64,
    root_seed: u64,
) -> Result<Option<(Sequence, Sequence)>> {
    require_p1(s)?;
    if !x.is_finitely_supported() || x.max_support_index().unwrap_or(0) > n_dim {
        return Err(Error::InvalidArgument(format!(
            "oracle requires support inside [1, {n_dim}]"
        )));
    }
    check_gamma_sphere(s, x)?;
    let n = n_dim as usize;
    let v_table = s.v_table_f64(n_dim + 1)?;
    let xs: Vec<f64> = (1..=n_dim)
        .map(|i| crate::certified::q_to_f64(&x.value_at(i)))
        .collect();
    let norm_f = |z: &[f64]| -> f64 {
        let mut a: Vec<f64> = z.iter().map(|t| t.abs()).collect();
        a.sort_unstable_by(|p, q| q.partial_cmp(p).unwrap());
        a.iter().zip(&v_table).map(|(t, v)| t * v).sum()
    };
    // Largest direction step that keeps the ranking pattern: half the
    // smallest positive gap between distinct |x| levels.
    let mut levels: Vec<f64> = xs.iter().map(|t| t.abs()).collect();
    levels.push(0.0);
    levels.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let min_gap = levels
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let tol = SPHERE_TOL;
    let mut tried = 0u64;
    let test_dir = |u: &[f64]| -> Option<(Sequence, Sequence)> {
        let max_u = u.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        if max_u == 0.0 {
            return None;
        }
        let t = 0.25 * min_gap.min(1.0) / max_u;
        if !(t > 0.0) || !t.is_finite() {
            return None;
        }
        let y: Vec<f64> = xs.iter().zip(u).map(|(a, b)| a + t * b).collect();
        let z: Vec<f64> = xs.iter().zip(u).map(|(a, b)| a - t * b).collect();
        if (norm_f(&y) - 1.0).abs() <= tol && (norm_f(&z) - 1.0).abs() <= tol {
            let dq: Vec<Q> = u
                .iter()
                .map(|&b| Q::from_float(t * b).unwrap_or_else(Q::zero))
                .collect();
            let y_head: Vec<Q> = (0..n).map(|i| x.value_at(i as u64 + 1) + &dq[i]).collect();
            let z_head: Vec<Q> = (0..n).map(|i| x.value_at(i as u64 + 1) - &dq[i]).collect();
            Some((Sequence::finite(y_head), Sequence::finite(z_head)))
        } else {
            None
        }
    };

    // Structured family first: weighted rebalances between blocks of equal
    // |x(i)| (the directions along which a polyhedral sphere can be flat).
    let mut blocks: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, t) in xs.iter().enumerate() {
        blocks.entry(format!("{:.15e}", t.abs())).or_default().push(i);
    }
    let block_list: Vec<Vec<usize>> = blocks.into_values().collect();
    let ranks = rank_of_indices(&xs);
    let kappa = |b: &[usize]| -> f64 { b.iter().map(|&i| v_table[ranks[i] as usize - 1]).sum() };
    let mut structured: Vec<Vec<f64>> = Vec::new();
    // Pairwise single-coordinate rebalances.
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut u = vec![0.0; n];
            let si = if xs[i] < 0.0 { -1.0 } else { 1.0 };
            let sj = if xs[j] < 0.0 { -1.0 } else { 1.0 };
            u[i] = si * v_table[ranks[j] as usize - 1];
            u[j] = -sj * v_table[ranks[i] as usize - 1];
            structured.push(u);
        }
    }
    // Block-level rebalances: raise block 1 in absolute value by kappa2,
    // lower block 2 by kappa1 (sign-aligned so |.| moves as intended).
    for (bi, b1) in block_list.iter().enumerate() {
        for (bj, b2) in block_list.iter().enumerate() {
            if bi == bj {
                continue;
            }
            let (k1, k2) = (kappa(b1), kappa(b2));
            let mut u = vec![0.0; n];
            for &i in b1 {
                u[i] = if xs[i] < 0.0 { -k2 } else { k2 };
            }
            for &i in b2 {
                u[i] = if xs[i] < 0.0 { k1 } else { -k1 };
            }
            structured.push(u);
        }
    }
    for u in &structured {
        if tried >= budget {
            return Ok(None);
        }
        tried += 1;
        if let Some(pair) = test_dir(u) {
            return Ok(Some(pair));
        }
    }
    // Random sparse cloud for the remaining budget.
    let mut rng = ChaCha8Rng::seed_from_u64(root_seed);
    while tried < budget {
        tried += 1;
        let mut u = vec![0.0; n];
        let nnz = rng.gen_range(2..=n.max(2));
        for _ in 0..nnz {
            let i = rng.gen_range(0..n);
            u[i] = rng.gen_range(-2.0..2.0);
        }
        if let Some(pair) = test_dir(&u) {
            return Ok(Some(pair));
        }
    }
    Ok(None)
}

/// 1-based ranks of the coordinates by decreasing |value| (ties by index).
fn rank_of_indices(xs: &[f64]) -> Vec<u64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| {
        xs[b]
            .abs()
            .partial_cmp(&xs[a].abs())
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut ranks = vec![0u64; xs.len()];
    for (rank0, &i) in idx.iter().enumerate() {
        ranks[i] = rank0 as u64 + 1;
    }
    ranks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certified::q_ratio;
    use crate::fixtures;

    fn wa() -> Space {
        Space::new(fixtures::w_a())
    }

    fn wb() -> Space {
        Space::new(fixtures::w_b(1))
    }

    #[test]
    fn extreme_classifier_accepts_flat_indicators() {
        let s = wb();
        let scale = s.phi(1).recip().to_rational();
        let x = Sequence::finite(vec![scale]);
        let v = classify_extreme_gamma1(&s, &x).unwrap();
        assert!(v.holds());
        assert!(matches!(v.witness, Some(Witness::AttainingIndex(1))));
    }

    #[test]
    fn extreme_classifier_rejects_nonflat_with_pair() {
        let s = wb();
        // A strictly decreasing two-level vector scaled onto the sphere.
        let raw = Sequence::finite(vec![q_int(3), q_int(1)]);
        let n = norms::norm_gamma(&s, &raw).unwrap();
        let scale = n.expect_finite().recip().to_rational();
        let x = raw.scale(&scale);
        let v = classify_extreme_gamma1(&s, &x).unwrap();
        assert!(!v.holds());
        let Some(Witness::Pair { y, z }) = &v.witness else {
            panic!("expected a decomposition pair");
        };
        // Midpoint identity is exact; spheres within certification.
        let star = rearrangement(&x);
        let two = q_int(2);
        for i in 1..=4u64 {
            assert_eq!(y.value_at(i) + z.value_at(i), star.value_at(i) * &two);
        }
        for side in [y, z] {
            let n = norms::norm_gamma(&s, side).unwrap();
            assert!(n.expect_finite().within(&CertVal::one(), 1e-9));
        }
    }

    #[test]
    fn extreme_classifier_refuses_finite_w() {
        let s = wa();
        let x = Sequence::basis(1);
        assert!(classify_extreme_gamma1(&s, &x).is_err());
    }

    #[test]
    fn extreme_classifier_rejects_zero_leading_weight_with_swap_pair() {
        let s = Space::new(fixtures::w_d());
        let scale = s.phi(2).recip().to_rational();
        let x = Sequence::finite(vec![scale.clone(), scale]);
        let v = classify_extreme_gamma1(&s, &x).unwrap();
        assert!(!v.holds());
        assert!(v
            .conditions
            .iter()
            .any(|c| c.name == "weight-positivity-below-n0" && !c.holds));
        let Some(Witness::Pair { y, z }) = &v.witness else {
            panic!("expected the swap pair");
        };
        for side in [y, z] {
            let n = norms::norm_gamma(&s, side).unwrap();
            assert!(n.expect_finite().within(&CertVal::one(), 1e-9));
        }
    }

    #[test]
    fn dual_extreme_fixture() {
        let s = wa();
        let x = Sequence::finite(vec![q_ratio(5, 2), q_ratio(1, 2)]);
        let v = classify_extreme_dual(&s, &x).unwrap();
        assert!(v.holds());
        // Rearrangement-invariant: permuted input classifies the same.
        let y = Sequence::finite(vec![q_ratio(1, 2), q_ratio(-5, 2)]);
        assert!(classify_extreme_dual(&s, &y).unwrap().holds());
        // (5/2, 1/3) is still on the m_psi sphere (the sup is attained at
        // n = 1) but its star differs from v at index 2.
        let miss = Sequence::finite(vec![q_ratio(5, 2), q_ratio(1, 3)]);
        let v = classify_extreme_dual(&s, &miss).unwrap();
        assert!(!v.holds());
        assert!(matches!(
            v.witness,
            Some(Witness::ViolatingIndex { index: 2, .. })
        ));
    }

    #[test]
    fn smooth_gamma_classifier() {
        let s = wa();
        // Strictly decreasing geometric element, normalized.
        let g = Sequence::new(
            vec![q_int(1)],
            Tail::Geometric {
                a: q_int(1),
                r: q_ratio(1, 2),
            },
        )
        .unwrap();
        let n = norms::norm_gamma(&s, &g).unwrap();
        let x = g.scale(&n.expect_finite().recip().to_rational());
        let v = classify_smooth_gamma1(&s, &x).unwrap();
        assert!(v.holds(), "{:?}", v);
        // Finite support fails condition (i).
        let e = Sequence::basis(1);
        let n = norms::norm_gamma(&s, &e).unwrap();
        let e = e.scale(&n.expect_finite().recip().to_rational());
        assert!(!classify_smooth_gamma1(&s, &e).unwrap().holds());
        // A plateau at a positive-weight index fails condition (ii).
        let p = Sequence::new(
            vec![q_int(1), q_int(1)],
            Tail::Geometric {
                a: q_ratio(1, 2),
                r: q_ratio(1, 2),
            },
        )
        .unwrap();
        let n = norms::norm_gamma(&s, &p).unwrap();
        let p = p.scale(&n.expect_finite().recip().to_rational());
        let v = classify_smooth_gamma1(&s, &p).unwrap();
        assert!(!v.holds());
        assert!(matches!(
            v.witness,
            Some(Witness::ViolatingIndex { index: 1, .. })
        ));
    }

    #[test]
    fn smooth_predual_classifier() {
        let s = wb();
        // e_1 scaled by phi(1): attains only at n = 1.
        let x = Sequence::finite(vec![s.phi(1).to_rational()]);
        let v = classify_smooth_predual(&s, &x).unwrap();
        assert!(v.holds());
        // Two attaining indices: x* = (phi(1), phi(2)-phi(1)).
        let p1 = s.phi(1).to_rational();
        let p2 = s.phi(2).to_rational();
        let y = Sequence::finite(vec![p1.clone(), p2 - p1]);
        let v = classify_smooth_predual(&s, &y).unwrap();
        assert!(!v.holds());
        // Excluded regime.
        assert!(classify_smooth_predual(&wa(), &Sequence::basis(1)).is_err());
    }

    #[test]
    fn smooth_dual_classifier() {
        let s = wb();
        let x = Sequence::finite(vec![s.phi(1).to_rational()]);
        let v = classify_smooth_dual(&s, &x).unwrap();
        assert!(v.holds());
        assert!(matches!(v.witness, Some(Witness::Gap(g)) if g > 0.0));
        let p1 = s.phi(1).to_rational();
        let p2 = s.phi(2).to_rational();
        let y = Sequence::finite(vec![p1.clone(), p2 - p1]);
        assert!(!classify_smooth_dual(&s, &y).unwrap().holds());
        let off = Sequence::finite(vec![q_int(1), q_int(1)]);
        assert!(classify_smooth_dual(&s, &off).is_err());
    }

    #[test]
    fn norming_functional_examples() {
        let s = wa();
        let x = Sequence::finite(vec![q_int(1), q_int(1)]);
        let y = norming_functional(&s, &x).unwrap();
        assert_eq!(y, Sequence::finite(vec![q_ratio(5, 2), q_ratio(1, 2)]));
        let p = norms::pairing(&x, &y).unwrap();
        assert!(p.eq_exact(&CertVal::exact_int(3)));
        let ny = norms::norm_m_psi(&s, &y).unwrap();
        assert!(ny.value.eq_exact(&CertVal::one()));

        let x2 = Sequence::finite(vec![q_int(0), q_int(-1)]);
        let y2 = norming_functional(&s, &x2).unwrap();
        assert_eq!(y2, Sequence::finite(vec![q_int(0), q_ratio(-5, 2)]));
        assert!(norms::pairing(&x2, &y2)
            .unwrap()
            .eq_exact(&CertVal::exact(q_ratio(5, 2))));
    }

    #[test]
    fn norming_functional_tie_break_policies_agree_on_value() {
        let s = wa();
        let x = Sequence::finite(vec![q_int(2), q_int(-2), q_int(1)]);
        let y1 = norming_functional_with(&s, &x, TieBreak::LowestIndexFirst).unwrap();
        let y2 = norming_functional_with(&s, &x, TieBreak::HighestIndexFirst).unwrap();
        let p1 = norms::pairing(&x, &y1).unwrap();
        let p2 = norms::pairing(&x, &y2).unwrap();
        assert!(p1.eq_exact(&p2));
        let n = norms::norm_gamma(&s, &x).unwrap();
        assert!(p1.eq_exact(n.expect_finite()));
    }

    #[test]
    fn norming_element_cases() {
        let s = wa();
        let y = Sequence::basis(1);
        let x = norming_element(&s, &y, None).unwrap();
        assert_eq!(x, Sequence::finite(vec![q_ratio(2, 5)]));
        let p = norms::pairing(&x, &y).unwrap();
        assert!(p.eq_exact(&CertVal::exact(q_ratio(2, 5))));
        let nx = norms::norm_gamma(&s, &x).unwrap();
        assert!(nx.expect_finite().eq_exact(&CertVal::one()));

        let v = Sequence::finite(vec![q_ratio(5, 2), q_ratio(1, 2)]);
        let x2 = norming_element(&s, &v, None).unwrap();
        assert_eq!(x2, Sequence::finite(vec![q_ratio(2, 5)]));
        assert!(norms::pairing(&x2, &v)
            .unwrap()
            .eq_exact(&CertVal::one()));

        // Case 2: explicit m over a geometric-tail element.
        let g = Sequence::new(
            vec![q_int(2)],
            Tail::Geometric {
                a: q_int(1),
                r: q_ratio(1, 2),
            },
        )
        .unwrap();
        let mut quotients = Vec::new();
        for m in [1u64, 2, 4] {
            let xm = norming_element(&s, &g, Some(m)).unwrap();
            let nx = norms::norm_gamma(&s, &xm).unwrap();
            assert!(nx.expect_finite().eq_exact(&CertVal::one()));
            quotients.push(norms::pairing(&xm, &g).unwrap().value());
        }
        // Reported quotients along the attaining subsequence (m = 1 here
        // attains; the sequence of running maxima is nondecreasing).
        let mut best = f64::NEG_INFINITY;
        for q in quotients {
            best = best.max(q);
            assert!(best >= q - 1e-15);
        }
    }

    #[test]
    fn counterexample_bundles_verify() {
        let sa = wa();
        for kind in [CounterexampleKind::OcFailure, CounterexampleKind::SmFailure] {
            let b = counterexample(kind, &sa, None).unwrap();
            assert!(b.all_passed(), "{kind:?}: {:?}", b.checks);
            assert!(b.checks.iter().all(|c| c.exact));
        }
        let b = counterexample(CounterexampleKind::ScP1, &sa, None).unwrap();
        assert!(b.all_passed());
        let b = counterexample(CounterexampleKind::ScWinf, &sa, None).unwrap();
        assert!(b.all_passed());
        let sc = Space::new(fixtures::w_c(2));
        let b = counterexample(
            CounterexampleKind::ScZeroWeightFirst,
            &sc,
            Some(&q_ratio(1, 2)),
        )
        .unwrap();
        assert!(b.all_passed(), "{:?}", b.checks);
        assert!(b.checks.iter().all(|c| c.exact));
        let sm = Space::new(fixtures::w_zero_mid());
        let b = counterexample(CounterexampleKind::ScZeroWeightLater, &sm, None).unwrap();
        assert!(b.all_passed(), "{:?}", b.checks);
        // Regime mismatches are errors.
        let sb = wb();
        assert!(counterexample(CounterexampleKind::OcFailure, &sb, None).is_err());
        assert!(counterexample(CounterexampleKind::ScWinf, &sb, None).is_err());
        assert!(counterexample(CounterexampleKind::ScZeroWeightFirst, &sa, None).is_err());
    }

    #[test]
    fn enumerate_counts() {
        let s = wb();
        let pts = enumerate_extreme_points(&s, 2).unwrap();
        assert_eq!(pts.len(), 8); // C(2,1)*2 + C(2,2)*4
        let one = enumerate_extreme_points(&s, 1).unwrap();
        assert_eq!(one.len(), 2);
        for x in &pts {
            assert!(classify_extreme_gamma1(&s, x).unwrap().holds());
        }
        // A vanishing leading weight removes the n0 = 2 family.
        let sd = Space::new(fixtures::w_d());
        let pts = enumerate_extreme_vertices(&sd, 3).unwrap();
        assert!(pts.iter().all(|v| v.n0 != 2));
        assert!(pts.iter().any(|v| v.n0 == 3));
    }

    #[test]
    fn oracle_finds_pairs_for_non_extreme_points() {
        let s = wb();
        let raw = Sequence::finite(vec![q_int(3), q_int(1)]);
        let n = norms::norm_gamma(&s, &raw).unwrap();
        let x = raw.scale(&n.expect_finite().recip().to_rational());
        let found = extreme_midpoint_oracle(&s, &x, 4, 10_000, 42).unwrap();
        let (y, z) = found.expect("non-extreme point should decompose");
        assert_ne!(y, z);
        for side in [&y, &z] {
            let n = norms::norm_gamma(&s, side).unwrap();
            assert!((n.expect_finite().value() - 1.0).abs() <= 1e-8);
        }
        let mid_ok = (1..=4u64)
            .all(|i| y.value_at(i) + z.value_at(i) == x.value_at(i) * q_int(2));
        assert!(mid_ok);
    }

    #[test]
    fn oracle_finds_nothing_for_extreme_points() {
        let s = wb();
        let x = enumerate_extreme_points(&s, 3).unwrap().remove(0);
        let found = extreme_midpoint_oracle(&s, &x, 3, 5_000, 7).unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn oracle_rejects_interior_points() {
        let s = wb();
        let x = Sequence::finite(vec![q_ratio(1, 10)]);
        assert!(extreme_midpoint_oracle(&s, &x, 2, 10, 1).is_err());
    }
}
