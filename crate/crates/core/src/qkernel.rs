//! q-Pochhammer symbols and basic hypergeometric series over the `p`
//! substrate, with valuation-guarded truncation of infinite sums.
//!
//! Notation: `(x; base)_n = prod_{j=0}^{n-1} (1 - x*base^j)` with
//! `(x; base)_0 = 1`, and `(x; base)_inf` the infinite product, which is exact
//! at truncation order N because factors with `p`-exponent above N are
//! identically 1.
//!
//! Series terms are built incrementally: the ratio of consecutive terms of an
//! `_r phi_s` is a product of first-order Pochhammer increments and monomials,
//! so each step costs O(r + s) linear-factor passes instead of a from-scratch
//! rebuild.
//!
//! Parameters come in two shapes. `Mono(x)` is an ordinary monomial parameter.
//! `PairSqrt(m)` stands for the pair `+sqrt(m), -sqrt(m)` occurring together,
//! contributing `(sqrt(m), -sqrt(m); base)_n = (m; base^2)_n`; several
//! transformations pair all their radicals this way, which keeps every
//! evaluation rational even when the individual square roots do not exist as
//! monomials (and in some of them no admissible exponent assignment resolves
//! all printed radicals simultaneously, so the paired form is the only exact
//! route).

use crate::error::{EvalError, SeriesError};
use crate::exactnum::GaussianRational;
use crate::series::{MonomialExpr, TruncatedSeries};

// ---------------------------------------------------------------------------
// Bases and linear factors
// ---------------------------------------------------------------------------

/// A Pochhammer base, recorded as the `p`-exponent of the base monomial:
/// 1 for base `sqrt(q)`, 2 for base `q`, 4 for base `q^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PochBase {
    pub step: u32,
}

pub const BASE_SQRT_Q: PochBase = PochBase { step: 1 };
pub const BASE_Q: PochBase = PochBase { step: 2 };
pub const BASE_Q2: PochBase = PochBase { step: 4 };

impl PochBase {
    pub fn monomial(&self) -> MonomialExpr {
        MonomialExpr::p_pow(self.step as i64)
    }

    pub fn squared(&self) -> PochBase {
        PochBase {
            step: 2 * self.step,
        }
    }
}

fn atom_string(c: &GaussianRational, e: i64) -> String {
    MonomialExpr::new(c.clone(), e).to_string()
}

/// Multiply `s` by `(1 - c*p^e)`, any integer `e`. Factors entirely above the
/// truncation order are identity. A factor equal to `1 - 1` yields the zero
/// series (legal: terminating numerators).
pub fn mul_factor(
    s: TruncatedSeries,
    c: &GaussianRational,
    e: i64,
) -> Result<TruncatedSeries, SeriesError> {
    if c.is_zero() || e > s.order() as i64 {
        return Ok(s);
    }
    if e >= 1 {
        let mut s = s;
        s.mul_binomial(c, e);
        Ok(s)
    } else if e == 0 {
        let f = GaussianRational::one().sub(c);
        Ok(s.scale(&f))
    } else {
        let shifted = s.shift_scale(c, e)?;
        s.sub(&shifted)
    }
}

/// Divide `s` by `(1 - c*p^e)`, any integer `e`. A vanishing factor is a pole.
pub fn div_factor(
    s: TruncatedSeries,
    c: &GaussianRational,
    e: i64,
) -> Result<TruncatedSeries, EvalError> {
    if c.is_zero() || e > s.order() as i64 {
        return Ok(s);
    }
    if e >= 1 {
        let mut s = s;
        s.div_binomial(c, e);
        Ok(s)
    } else if e == 0 {
        let f = GaussianRational::one().sub(c);
        if f.is_zero() {
            return Err(EvalError::PoleInDenominator {
                atom: atom_string(c, e),
            });
        }
        Ok(s.scale(&f.inv()?))
    } else {
        // 1 - c*p^e = -c*p^e * (1 - (1/c)*p^{-e}) for e < 0.
        let cinv = c.inv()?;
        let mut t = s.shift_scale(&cinv.neg(), -e)?;
        t.div_binomial(&cinv, -e);
        Ok(t)
    }
}

/// The series `1 - m`.
pub fn binomial_series(m: &MonomialExpr, order: usize) -> TruncatedSeries {
    mul_factor(TruncatedSeries::one(order), &m.coeff, m.exp).expect("multiply into fresh series")
}

// ---------------------------------------------------------------------------
// Pochhammer symbols
// ---------------------------------------------------------------------------

/// Finite or infinite product length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PochLen {
    Finite(u32),
    Infinite,
}

/// `(x; base)_n`, exact at the given order. Returns 1 for `n = 0`.
pub fn poch_finite(
    x: &MonomialExpr,
    base: PochBase,
    n: u32,
    order: usize,
) -> Result<TruncatedSeries, SeriesError> {
    let mut s = TruncatedSeries::one(order);
    if x.is_zero() {
        return Ok(s);
    }
    for j in 0..n as i64 {
        let e = x.exp + j * base.step as i64;
        if e > order as i64 {
            break;
        }
        s = mul_factor(s, &x.coeff, e)?;
    }
    Ok(s)
}

/// `(x; base)_inf`, truncated exactly: factor j is identically 1 once its
/// exponent exceeds the order.
pub fn poch_infinite(
    x: &MonomialExpr,
    base: PochBase,
    order: usize,
) -> Result<TruncatedSeries, SeriesError> {
    let mut s = TruncatedSeries::one(order);
    if x.is_zero() {
        return Ok(s);
    }
    let mut j = 0i64;
    loop {
        let e = x.exp + j * base.step as i64;
        if e > order as i64 {
            return Ok(s);
        }
        s = mul_factor(s, &x.coeff, e)?;
        j += 1;
    }
}

/// `(x1, x2, ..., xk; base)_n` — product over the list; empty list gives 1.
pub fn poch_multi(
    xs: &[MonomialExpr],
    base: PochBase,
    len: PochLen,
    order: usize,
) -> Result<TruncatedSeries, SeriesError> {
    let mut s = TruncatedSeries::one(order);
    for x in xs {
        let f = match len {
            PochLen::Finite(n) => poch_finite(x, base, n, order)?,
            PochLen::Infinite => poch_infinite(x, base, order)?,
        };
        s = s.mul(&f)?;
    }
    Ok(s)
}

/// Ratio of infinite Pochhammer products `(nums; base)_inf / (dens; base)_inf`.
pub fn poch_ratio_infinite(
    nums: &[MonomialExpr],
    dens: &[MonomialExpr],
    base: PochBase,
    order: usize,
) -> Result<TruncatedSeries, EvalError> {
    let mut s = poch_multi(nums, base, PochLen::Infinite, order)?;
    for d in dens {
        if d.is_zero() {
            continue;
        }
        let mut j = 0i64;
        loop {
            let e = d.exp + j * base.step as i64;
            if e > order as i64 {
                break;
            }
            s = div_factor(s, &d.coeff, e)?;
            j += 1;
        }
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// Term generators and guarded summation
// ---------------------------------------------------------------------------

/// An abstract sequence of summands. `None` means the sum has terminated
/// exactly (every remaining term is identically zero).
pub trait TermGenerator {
    fn next_term(&mut self) -> Result<Option<TruncatedSeries>, EvalError>;
}

pub const DEFAULT_WINDOW: u32 = 4;

pub fn default_cap(order: usize) -> u32 {
    (4 * order).max(8) as u32
}

/// Sum `g(0) + g(1) + ...` truncated at `order`. Stops once `window`
/// consecutive terms have valuation above the order (so the tail is
/// invisible), or when the generator terminates exactly. Reaching `cap`
/// before the stopping rule fires means the summand never gains `p`-order:
/// an inadmissible environment, reported as `NonTruncating`.
pub fn sum_series(
    g: &mut dyn TermGenerator,
    order: usize,
    window: u32,
    cap: u32,
) -> Result<TruncatedSeries, EvalError> {
    assert!(window >= 1 && cap >= 1);
    let mut acc = TruncatedSeries::zero(order);
    let mut high_run = 0u32;
    let mut n = 0u32;
    while let Some(term) = g.next_term()? {
        if term.is_zero_through(order as i64) {
            high_run += 1;
        } else {
            high_run = 0;
        }
        acc = acc.add(&term)?;
        if high_run >= window {
            return Ok(acc);
        }
        n += 1;
        if n > cap {
            return Err(EvalError::NonTruncating {
                detail: format!("no valuation gain after {cap} terms"),
            });
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Basic hypergeometric series
// ---------------------------------------------------------------------------

/// One upper or lower parameter of a basic hypergeometric series.
#[derive(Clone, Debug)]
pub enum PhiParam {
    /// A plain monomial parameter `x`, contributing `(x; base)_n`.
    Mono(MonomialExpr),
    /// The pair `+sqrt(m), -sqrt(m)` taken together, contributing
    /// `(m; base^2)_n`. Counts as two parameters of the series.
    PairSqrt(MonomialExpr),
}

impl PhiParam {
    pub fn mono(m: MonomialExpr) -> Self {
        PhiParam::Mono(m)
    }

    pub fn pair_sqrt(m: MonomialExpr) -> Self {
        PhiParam::PairSqrt(m)
    }

    fn effective_count(&self) -> i64 {
        match self {
            PhiParam::Mono(_) => 1,
            PhiParam::PairSqrt(_) => 2,
        }
    }

    /// The linear factor `(1 - c*p^e)` this parameter contributes when moving
    /// from term n to term n+1.
    fn increment_at(&self, n: u32, base: PochBase) -> (GaussianRational, i64) {
        match self {
            PhiParam::Mono(x) => (x.coeff.clone(), x.exp + n as i64 * base.step as i64),
            PhiParam::PairSqrt(m) => (m.coeff.clone(), m.exp + 2 * n as i64 * base.step as i64),
        }
    }

    /// Denominator partner under the very-well-poised head `a1`: each upper
    /// parameter `x` is matched by `a1*base/x` below.
    fn partner_under(&self, head: &MonomialExpr, base: PochBase) -> Result<PhiParam, SeriesError> {
        let ab = head.mul(&base.monomial());
        Ok(match self {
            PhiParam::Mono(x) => PhiParam::Mono(ab.div(x)?),
            PhiParam::PairSqrt(m) => PhiParam::PairSqrt(ab.mul(&ab).div(m)?),
        })
    }

    fn describe(&self) -> String {
        match self {
            PhiParam::Mono(x) => x.to_string(),
            PhiParam::PairSqrt(m) => format!("±sqrt({m})"),
        }
    }
}

/// Incremental term generator for `_r phi_s` (and, with `wp_head` set, for
/// very-well-poised `_{r+1}W_r`) series.
pub struct PhiTermGen {
    nums: Vec<PhiParam>,
    dens: Vec<PhiParam>,
    base: PochBase,
    z: MonomialExpr,
    /// Exponent `s + 1 - r` of the extra factor `((-1)^n base^{n(n-1)/2})`.
    extra: i64,
    /// Very-well-poised head `a1`; adds the factor
    /// `(1 - a1*base^{2n}) / (1 - a1)` to each term.
    wp_head: Option<MonomialExpr>,
    order: usize,
    term: TruncatedSeries,
    n: u32,
    started: bool,
    terminated: bool,
}

impl PhiTermGen {
    pub fn new(
        nums: Vec<PhiParam>,
        dens: Vec<PhiParam>,
        base: PochBase,
        z: MonomialExpr,
        extra: i64,
        wp_head: Option<MonomialExpr>,
        order: usize,
    ) -> Result<Self, EvalError> {
        // Reject environments that would invert a zero constant term. Later
        // steps are guarded at application time (a Laurent denominator can
        // reach exponent zero at n > 0).
        for d in &dens {
            let (c, e) = d.increment_at(0, base);
            if e == 0 && c.is_one() {
                return Err(EvalError::PoleInDenominator { atom: d.describe() });
            }
        }
        if let Some(h) = &wp_head {
            if h.is_one() {
                return Err(EvalError::PoleInDenominator {
                    atom: h.to_string(),
                });
            }
        }
        Ok(PhiTermGen {
            nums,
            dens,
            base,
            z,
            extra,
            wp_head,
            order,
            term: TruncatedSeries::one(order),
            n: 0,
            started: false,
            terminated: false,
        })
    }

    /// Apply the exact ratio term(n) -> term(n+1).
    fn advance(&mut self) -> Result<(), EvalError> {
        let n = self.n;
        let step = self.base.step as i64;
        let mut t = std::mem::replace(&mut self.term, TruncatedSeries::zero(self.order));

        if self.z.is_zero() {
            self.terminated = true;
            return Ok(());
        }

        let mut factors: Vec<(GaussianRational, i64)> = Vec::with_capacity(self.nums.len() + 1);
        for p in &self.nums {
            factors.push(p.increment_at(n, self.base));
        }
        if let Some(h) = &self.wp_head {
            factors.push((h.coeff.clone(), h.exp + 2 * step * (n as i64 + 1)));
        }
        // A numerator factor of exactly (1 - 1) terminates the series.
        if factors
            .iter()
            .any(|(c, e)| *e == 0 && c.is_one())
        {
            self.terminated = true;
            return Ok(());
        }
        // Negative-exponent factors first: under capped storage this order
        // preserves the most precision (the monomial gains below restore it).
        factors.sort_by_key(|&(_, e)| e);
        for (c, e) in &factors {
            t = mul_factor(t, c, *e)?;
        }

        // Monomial gains: argument z and the ((-1)^n base^{n(n-1)/2})^extra ratio.
        t = t.shift_scale(&self.z.coeff, self.z.exp)?;
        if self.extra != 0 {
            let sign = if self.extra % 2 == 0 {
                GaussianRational::one()
            } else {
                GaussianRational::from_int(-1)
            };
            t = t.shift_scale(&sign, self.extra * step * n as i64)?;
        }

        // Denominators: the listed parameters, the implicit (base; base)
        // increment, and the well-poised factor shed at the previous index.
        for p in &self.dens {
            let (c, e) = p.increment_at(n, self.base);
            t = div_factor(t, &c, e)?;
        }
        t = div_factor(t, &GaussianRational::one(), step * (n as i64 + 1))?;
        if let Some(h) = &self.wp_head {
            t = div_factor(t, &h.coeff, h.exp + 2 * step * n as i64)?;
        }

        self.term = t;
        Ok(())
    }
}

impl TermGenerator for PhiTermGen {
    fn next_term(&mut self) -> Result<Option<TruncatedSeries>, EvalError> {
        if !self.started {
            self.started = true;
            return Ok(Some(self.term.clone()));
        }
        if self.terminated {
            return Ok(None);
        }
        self.advance()?;
        if self.terminated {
            return Ok(None);
        }
        self.n += 1;
        Ok(Some(self.term.clone()))
    }
}

/// The basic hypergeometric series
/// `_r phi_s [nums; dens; base, z]`, truncated at `order`.
///
/// Includes the factor `((-1)^n base^{n(n-1)/2})^{s+1-r}` exactly as defined,
/// where r and s count parameters with pairs counting twice.
pub fn phi_series(
    nums: &[PhiParam],
    dens: &[PhiParam],
    base: PochBase,
    z: MonomialExpr,
    order: usize,
) -> Result<TruncatedSeries, EvalError> {
    let r: i64 = nums.iter().map(|p| p.effective_count()).sum();
    let s: i64 = dens.iter().map(|p| p.effective_count()).sum();
    let mut gen = PhiTermGen::new(
        nums.to_vec(),
        dens.to_vec(),
        base,
        z,
        s + 1 - r,
        None,
        order,
    )?;
    sum_series(&mut gen, order, DEFAULT_WINDOW, default_cap(order))
}

/// The very-well-poised series `_{r+1}W_r(a1; rest; base, z)`.
///
/// By definition this is the `_{r+1}phi_r` with `base*sqrt(a1), -base*sqrt(a1)`
/// prepended above, `sqrt(a1), -sqrt(a1)` below, and `a1*base/a_i` matched to
/// each remaining upper parameter. The prepended pairs combine into the
/// rational factor `(1 - a1*base^{2n}) / (1 - a1)` per term, which is how the
/// engine evaluates them; no root of `a1` is ever taken. The two routes agree
/// wherever the roots exist (see tests).
pub fn w_series(
    head: &MonomialExpr,
    rest: &[PhiParam],
    base: PochBase,
    z: MonomialExpr,
    order: usize,
) -> Result<TruncatedSeries, EvalError> {
    let mut nums: Vec<PhiParam> = Vec::with_capacity(rest.len() + 1);
    nums.push(PhiParam::Mono(head.clone()));
    nums.extend_from_slice(rest);
    let mut dens: Vec<PhiParam> = Vec::with_capacity(rest.len());
    for p in rest {
        dens.push(p.partner_under(head, base)?);
    }
    let mut gen = PhiTermGen::new(nums, dens, base, z, 0, Some(head.clone()), order)?;
    sum_series(&mut gen, order, DEFAULT_WINDOW, default_cap(order))
}
