//! Truncated formal power series in the base variable `p`, with `q = p^2`.
//!
//! The substrate is `p` rather than `q` so that `sqrt(q) = p` is exactly
//! representable; fourth roots like `a^{1/4}` are handled by constraining the
//! sampled exponents instead of extending the coefficient field. Coefficients
//! are exact Gaussian rationals.
//!
//! Two refinements beyond a plain dense array:
//!
//! - Coefficients may start at a negative index (`lo < 0`). Several WP-Bailey
//!   pairs (Bressoud's, and the Andrews-Berkovich pair used for one corollary)
//!   carry per-term monomials like `(k/(a*sqrt(q)))^n` whose exponent is
//!   negative for every admissible environment, so intermediate alpha/beta
//!   values are genuinely Laurent even though every identity side is a true
//!   power series.
//! - Each series tracks the index `hi` through which its coefficients are
//!   reliable. Multiplying by a negative power of `p` loses knowledge of the
//!   top coefficients; `hi` accounts for that, and comparisons demand enough
//!   precision or fail loudly with `IncompletePrecision` (callers then retry
//!   at a higher working order). For ordinary power-series work `hi` stays
//!   pinned at the truncation order and the bookkeeping is inert.

use std::fmt;

use crate::error::SeriesError;
use crate::exactnum::GaussianRational;

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

/// A materialized monomial `coeff * p^pexp` with nonnegative exponent.
///
/// The zero monomial is canonicalized to exponent 0. `q` is `(1, 2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMonomial {
    coeff: GaussianRational,
    pexp: u32,
}

/// Root branch selector for even-degree roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootBranch {
    Principal,
    Negated,
}

impl QMonomial {
    pub fn new(coeff: GaussianRational, pexp: u32) -> Self {
        if coeff.is_zero() {
            QMonomial {
                coeff,
                pexp: 0,
            }
        } else {
            QMonomial { coeff, pexp }
        }
    }

    pub fn one() -> Self {
        QMonomial::new(GaussianRational::one(), 0)
    }

    pub fn zero() -> Self {
        QMonomial::new(GaussianRational::zero(), 0)
    }

    /// The distinguished value `q = p^2`.
    pub fn q() -> Self {
        QMonomial::new(GaussianRational::one(), 2)
    }

    pub fn coeff(&self) -> &GaussianRational {
        &self.coeff
    }

    pub fn pexp(&self) -> u32 {
        self.pexp
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.pexp == 0 && self.coeff.is_one()
    }

    pub fn mul(&self, other: &Self) -> Self {
        QMonomial::new(self.coeff.mul(&other.coeff), self.pexp + other.pexp)
    }

    /// `self^k` for any integer `k`, as an unmaterialized expression; negative
    /// `k` is legal only inside a product whose net exponent ends up >= 0.
    pub fn pow(&self, k: i64) -> Result<MonomialExpr, SeriesError> {
        self.expr().powi(k)
    }

    /// Exact k-th root with branch choice for even k.
    pub fn root(&self, k: u32, branch: RootBranch) -> Result<QMonomial, SeriesError> {
        if self.pexp % k != 0 {
            return Err(SeriesError::NotAPerfectRoot {
                value: self.to_string(),
                degree: k,
            });
        }
        let c = self.coeff.nth_root(k)?;
        let c = match branch {
            RootBranch::Principal => c,
            RootBranch::Negated => {
                if k % 2 != 0 {
                    return Err(SeriesError::NotAPerfectRoot {
                        value: self.to_string(),
                        degree: k,
                    });
                }
                c.neg()
            }
        };
        Ok(QMonomial::new(c, self.pexp / k))
    }

    pub fn expr(&self) -> MonomialExpr {
        MonomialExpr {
            coeff: self.coeff.clone(),
            exp: self.pexp as i64,
        }
    }
}

impl fmt::Display for QMonomial {
    /// Renders as `c*p^e`, dropping trivial parts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr().fmt(f)
    }
}

impl fmt::Debug for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// An unmaterialized monomial `coeff * p^exp` whose exponent may be negative
/// while a product is being assembled. Callers combine factors and then
/// [`materialize`](MonomialExpr::materialize) when a true monomial is needed;
/// a net negative exponent at that point is an error.
#[derive(Clone, PartialEq, Eq)]
pub struct MonomialExpr {
    pub coeff: GaussianRational,
    pub exp: i64,
}

impl MonomialExpr {
    pub fn new(coeff: GaussianRational, exp: i64) -> Self {
        if coeff.is_zero() {
            MonomialExpr { coeff, exp: 0 }
        } else {
            MonomialExpr { coeff, exp }
        }
    }

    pub fn one() -> Self {
        MonomialExpr::new(GaussianRational::one(), 0)
    }

    /// `q^j = p^{2j}` for any integer j.
    pub fn q_pow(j: i64) -> Self {
        MonomialExpr::new(GaussianRational::one(), 2 * j)
    }

    /// `p^j` for any integer j.
    pub fn p_pow(j: i64) -> Self {
        MonomialExpr::new(GaussianRational::one(), j)
    }

    pub fn int(n: i64) -> Self {
        MonomialExpr::new(GaussianRational::from_int(n), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0 && self.coeff.is_one()
    }

    pub fn mul(&self, other: &Self) -> Self {
        MonomialExpr::new(self.coeff.mul(&other.coeff), self.exp + other.exp)
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(MonomialExpr::new(
            self.coeff.div(&other.coeff)?,
            self.exp - other.exp,
        ))
    }

    pub fn neg(&self) -> Self {
        MonomialExpr::new(self.coeff.neg(), self.exp)
    }

    pub fn powi(&self, k: i64) -> Result<Self, SeriesError> {
        if self.coeff.is_zero() {
            if k < 0 {
                return Err(SeriesError::DivisionByZero);
            }
            return Ok(if k == 0 {
                Self::one()
            } else {
                Self::new(GaussianRational::zero(), 0)
            });
        }
        Ok(MonomialExpr::new(self.coeff.powi(k)?, self.exp * k))
    }

    /// Exact k-th principal root: exponent divisible by k, coefficient a
    /// perfect k-th power in Q(i).
    pub fn nth_root(&self, k: u32) -> Result<Self, SeriesError> {
        if self.exp.rem_euclid(k as i64) != 0 {
            return Err(SeriesError::NotAPerfectRoot {
                value: self.to_string(),
                degree: k,
            });
        }
        Ok(MonomialExpr::new(
            self.coeff.nth_root(k)?,
            self.exp.div_euclid(k as i64),
        ))
    }

    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        self.nth_root(2)
    }

    pub fn materialize(&self) -> Result<QMonomial, SeriesError> {
        if self.coeff.is_zero() {
            return Ok(QMonomial::zero());
        }
        if self.exp < 0 {
            return Err(SeriesError::NegativeExponent {
                expr: self.to_string(),
            });
        }
        Ok(QMonomial::new(self.coeff.clone(), self.exp as u32))
    }
}

impl fmt::Display for MonomialExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 || self.coeff.is_zero() {
            return write!(f, "{}", self.coeff);
        }
        if !self.coeff.is_one() {
            if self.coeff.is_real() {
                write!(f, "{}*", self.coeff)?;
            } else {
                write!(f, "({})*", self.coeff)?;
            }
        }
        if self.exp == 1 {
            write!(f, "p")
        } else {
            write!(f, "p^{}", self.exp)
        }
    }
}

impl fmt::Debug for MonomialExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

// ---------------------------------------------------------------------------
// Truncated series
// ---------------------------------------------------------------------------

/// A formal series `sum_{i=lo}^{hi} c_i p^i` truncated at a nominal order.
///
/// Invariants: `lo <= 0 <= hi <= order`; `coeffs.len() == hi - lo + 1`.
/// Coefficients below `lo` are exactly zero; coefficients above `hi` are
/// unknown (`hi < order` only after multiplying by a negative power of `p`).
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: usize,
    lo: i64,
    hi: i64,
    coeffs: Vec<GaussianRational>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            order,
            lo: 0,
            hi: order as i64,
            coeffs: vec![GaussianRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::from_term(GaussianRational::one(), 0, order)
    }

    pub fn constant(c: GaussianRational, order: usize) -> Self {
        Self::from_term(c, 0, order)
    }

    /// Series with a single term `c * p^e`; `e` beyond the order gives the
    /// zero series, negative `e` a Laurent monomial.
    pub fn from_term(c: GaussianRational, e: i64, order: usize) -> Self {
        let mut s = Self::zero(order);
        if !c.is_zero() && e <= order as i64 {
            if e < 0 {
                s.grow_lo(e);
            }
            *s.at_mut(e) = c;
        }
        s
    }

    pub fn from_monomial(m: &QMonomial, order: usize) -> Self {
        Self::from_term(m.coeff().clone(), m.pexp() as i64, order)
    }

    pub fn from_expr(m: &MonomialExpr, order: usize) -> Self {
        Self::from_term(m.coeff.clone(), m.exp, order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Highest index through which coefficients are reliable.
    pub fn reliable_through(&self) -> i64 {
        self.hi
    }

    pub fn lowest_index(&self) -> i64 {
        self.lo
    }

    /// Coefficient of `p^i`. Zero below `lo`; `None` above `hi` (unknown).
    pub fn coeff(&self, i: i64) -> Option<&GaussianRational> {
        if i > self.hi {
            return None;
        }
        if i < self.lo {
            return Some(zero_ref());
        }
        Some(&self.coeffs[(i - self.lo) as usize])
    }

    fn at_mut(&mut self, i: i64) -> &mut GaussianRational {
        debug_assert!(i >= self.lo && i <= self.hi);
        &mut self.coeffs[(i - self.lo) as usize]
    }

    fn grow_lo(&mut self, new_lo: i64) {
        if new_lo >= self.lo {
            return;
        }
        let pad = (self.lo - new_lo) as usize;
        let mut v = vec![GaussianRational::zero(); pad];
        v.extend(self.coeffs.drain(..));
        self.coeffs = v;
        self.lo = new_lo;
    }

    /// Index of the first nonzero stored coefficient; `None` if the series is
    /// zero through `hi` (the "infinity" sentinel of the valuation map).
    pub fn valuation(&self) -> Option<i64> {
        (self.lo..=self.hi).find(|&i| !self.coeffs[(i - self.lo) as usize].is_zero())
    }

    fn val_lb(&self) -> i64 {
        self.valuation().unwrap_or(self.hi + 1)
    }

    pub fn is_zero_through(&self, m: i64) -> bool {
        self.valuation().map_or(true, |v| v > m)
    }

    fn check_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order != other.order {
            return Err(SeriesError::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let lo = self.lo.min(other.lo);
        let hi = self.hi.min(other.hi);
        let mut out = TruncatedSeries {
            order: self.order,
            lo,
            hi,
            coeffs: vec![GaussianRational::zero(); (hi - lo + 1) as usize],
        };
        for i in lo..=hi {
            let a = self.coeff(i).expect("within hi");
            let b = other.coeff(i).expect("within hi");
            *out.at_mut(i) = a.add(b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            let mut z = Self::zero(self.order);
            z.hi = self.hi.max(0);
            z.coeffs.truncate((z.hi + 1) as usize);
            return z;
        }
        let mut out = self.clone();
        for x in &mut out.coeffs {
            if !x.is_zero() {
                *x = x.mul(c);
            }
        }
        out
    }

    /// Multiply by the monomial `c * p^e` (any sign of `e`). A negative shift
    /// lowers the reliable order; the top coefficients fall off the truncation.
    pub fn shift_scale(&self, c: &GaussianRational, e: i64) -> Result<Self, SeriesError> {
        if c.is_zero() {
            return Ok(Self::zero(self.order));
        }
        let hi = (self.hi + e).min(self.order as i64);
        if hi < 0 {
            return Err(SeriesError::IncompletePrecision {
                needed: 0,
                have: hi,
            });
        }
        let lo = (self.lo + e).min(0);
        let mut out = TruncatedSeries {
            order: self.order,
            lo,
            hi,
            coeffs: vec![GaussianRational::zero(); (hi - lo + 1) as usize],
        };
        for i in self.lo..=self.hi {
            let j = i + e;
            if j < lo || j > hi {
                continue;
            }
            let x = &self.coeffs[(i - self.lo) as usize];
            if !x.is_zero() {
                *out.at_mut(j) = x.mul(c);
            }
        }
        Ok(out)
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let v1 = self.val_lb();
        let v2 = other.val_lb();
        let hi = (self.hi + v2).min(other.hi + v1).min(self.order as i64);
        if hi < 0 {
            return Err(SeriesError::IncompletePrecision {
                needed: 0,
                have: hi,
            });
        }
        let lo = (v1 + v2).min(0);
        let mut out = TruncatedSeries {
            order: self.order,
            lo,
            hi,
            coeffs: vec![GaussianRational::zero(); (hi - lo + 1) as usize],
        };
        for i in v1..=self.hi {
            let a = &self.coeffs[(i - self.lo) as usize];
            if a.is_zero() {
                continue;
            }
            let jmax = (hi - i).min(other.hi);
            for j in v2..=jmax {
                let b = &other.coeffs[(j - other.lo) as usize];
                if b.is_zero() {
                    continue;
                }
                let t = a.mul(b);
                let slot = out.at_mut(i + j);
                *slot = slot.add(&t);
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse. The series must have some nonzero coefficient;
    /// a nonzero valuation produces a Laurent inverse (valuation negated) at
    /// correspondingly reduced reliable order.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let v = self.valuation().ok_or(SeriesError::NonInvertible)?;
        let lead = self.coeff(v).unwrap().clone();
        let lead_inv = lead.inv()?;
        // Write self = p^v * u with u a unit known through (hi - v); invert u
        // by the standard recurrence, then shift back down by v.
        let rel_hi = self.hi - v;
        let hi = (rel_hi - v).min(self.order as i64);
        if hi < 0 {
            return Err(SeriesError::IncompletePrecision {
                needed: 0,
                have: hi,
            });
        }
        // y[k] coefficients of u^{-1} for k = 0..rel_needed
        let rel_needed = (hi + v) as usize;
        let u = |k: usize| -> &GaussianRational {
            self.coeff(v + k as i64).expect("within hi")
        };
        let mut y: Vec<GaussianRational> = Vec::with_capacity(rel_needed + 1);
        y.push(lead_inv.clone());
        for k in 1..=rel_needed {
            let mut acc = GaussianRational::zero();
            for j in 1..=k {
                let uj = u(j);
                if uj.is_zero() || y[k - j].is_zero() {
                    continue;
                }
                acc = acc.add(&uj.mul(&y[k - j]));
            }
            y.push(acc.neg().mul(&lead_inv));
        }
        let lo = (-v).min(0);
        let mut out = TruncatedSeries {
            order: self.order,
            lo,
            hi,
            coeffs: vec![GaussianRational::zero(); (hi - lo + 1) as usize],
        };
        for (k, c) in y.into_iter().enumerate() {
            let idx = k as i64 - v;
            if idx <= hi && !c.is_zero() {
                *out.at_mut(idx) = c;
            }
        }
        Ok(out)
    }

    /// In-place multiply by `(1 - c*p^e)` for `e >= 1`. Exact; no precision
    /// change. Factors with `e > order` are identically 1 and may be skipped
    /// by the caller.
    pub fn mul_binomial(&mut self, c: &GaussianRational, e: i64) {
        debug_assert!(e >= 1);
        if c.is_zero() || e > self.hi - self.lo {
            if c.is_zero() {
                return;
            }
        }
        let mut i = self.hi;
        while i >= self.lo + e {
            let src = self.coeffs[(i - e - self.lo) as usize].clone();
            if !src.is_zero() {
                let slot = self.at_mut(i);
                *slot = slot.sub(&src.mul(c));
            }
            i -= 1;
        }
    }

    /// In-place divide by `(1 - c*p^e)` for `e >= 1` via the forward
    /// recurrence `y[i] = x[i] + c*y[i-e]`. Exact.
    pub fn div_binomial(&mut self, c: &GaussianRational, e: i64) {
        debug_assert!(e >= 1);
        if c.is_zero() {
            return;
        }
        let mut i = self.lo + e;
        while i <= self.hi {
            let src = self.coeffs[(i - e - self.lo) as usize].clone();
            if !src.is_zero() {
                let slot = self.at_mut(i);
                *slot = slot.add(&src.mul(c));
            }
            i += 1;
        }
    }

    /// First index in `lo..=m` where the two series differ, with both
    /// coefficients. Requires both series reliable through `m`.
    pub fn first_mismatch(
        &self,
        other: &Self,
        m: i64,
    ) -> Result<Option<(i64, GaussianRational, GaussianRational)>, SeriesError> {
        self.check_order(other)?;
        let have = self.hi.min(other.hi);
        if have < m {
            return Err(SeriesError::IncompletePrecision { needed: m, have });
        }
        for i in self.lo.min(other.lo)..=m {
            let a = self.coeff(i).expect("within hi");
            let b = other.coeff(i).expect("within hi");
            if a != b {
                return Ok(Some((i, a.clone(), b.clone())));
            }
        }
        Ok(None)
    }

    /// Coefficient-wise equality through order `m`.
    pub fn eq_to_order(&self, other: &Self, m: i64) -> Result<bool, SeriesError> {
        Ok(self.first_mismatch(other, m)?.is_none())
    }

    /// True if any stored coefficient has a nonzero imaginary part.
    pub fn has_imaginary_part(&self) -> bool {
        self.coeffs.iter().any(|c| !c.is_real())
    }
}

fn zero_ref() -> &'static GaussianRational {
    use std::sync::OnceLock;
    static ZERO: OnceLock<GaussianRational> = OnceLock::new();
    ZERO.get_or_init(GaussianRational::zero)
}

impl fmt::Display for TruncatedSeries {
    /// Debug rendering `c0 + c1*p + ... + cN*p^N` with zero terms elided.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in self.lo..=self.hi {
            let c = &self.coeffs[(i - self.lo) as usize];
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{}", c)?;
            } else {
                if c.is_real() && c.is_one() {
                    write!(f, "")?;
                } else {
                    write!(f, "({})*", c)?;
                }
                if i == 1 {
                    write!(f, "p")?;
                } else {
                    write!(f, "p^{}", i)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(p^{})", self.hi + 1)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(n: i64, d: i64) -> GaussianRational {
        GaussianRational::ratio(n, d)
    }

    #[test]
    fn add_examples() {
        let n = 6;
        let one = TruncatedSeries::one(n);
        let p = TruncatedSeries::from_term(c(1, 1), 1, n);
        let one_minus_p = one.sub(&p).unwrap();
        assert_eq!(one_minus_p.add(&p).unwrap(), one);

        let x = TruncatedSeries::from_term(c(3, 7), 2, n);
        assert_eq!(x.add(&TruncatedSeries::zero(n)).unwrap(), x);

        let a = TruncatedSeries::one(n)
            .add(&TruncatedSeries::from_term(c(1, 1), 2, n))
            .unwrap();
        assert!(a.add(&a.neg()).unwrap().is_zero_through(n as i64));
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = TruncatedSeries::one(4);
        let b = TruncatedSeries::one(5);
        assert!(matches!(
            a.add(&b),
            Err(SeriesError::OrderMismatch { left: 4, right: 5 })
        ));
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn geometric_inverse() {
        let n = 12;
        let mut one_minus_p = TruncatedSeries::one(n);
        one_minus_p.mul_binomial(&c(1, 1), 1);
        let inv = one_minus_p.inv().unwrap();
        for i in 0..=n as i64 {
            assert_eq!(inv.coeff(i).unwrap(), &c(1, 1), "geometric coefficient {i}");
        }
        assert_eq!(
            TruncatedSeries::one(n).inv().unwrap(),
            TruncatedSeries::one(n)
        );
        assert_eq!(
            TruncatedSeries::constant(c(2, 1), n).inv().unwrap(),
            TruncatedSeries::constant(c(1, 2), n)
        );
        assert!(matches!(
            TruncatedSeries::zero(n).inv(),
            Err(SeriesError::NonInvertible)
        ));
    }

    #[test]
    fn valuation_examples() {
        let n = 8;
        let mut s = TruncatedSeries::one(n);
        s.mul_binomial(&c(1, 1), 1);
        assert_eq!(s.valuation(), Some(0));
        let t = TruncatedSeries::from_term(c(1, 1), 3, n)
            .add(&TruncatedSeries::from_term(c(1, 1), 5, n))
            .unwrap();
        assert_eq!(t.valuation(), Some(3));
        assert_eq!(TruncatedSeries::zero(n).valuation(), None);
    }

    #[test]
    fn from_monomial_examples() {
        let m = QMonomial::new(c(3, 2), 0);
        assert_eq!(
            TruncatedSeries::from_monomial(&m, 4),
            TruncatedSeries::constant(c(3, 2), 4)
        );
        let q = QMonomial::q();
        assert_eq!(
            TruncatedSeries::from_monomial(&q, 4),
            TruncatedSeries::from_term(c(1, 1), 2, 4)
        );
        let far = QMonomial::new(c(-1, 3), 7);
        assert!(TruncatedSeries::from_monomial(&far, 4).is_zero_through(4));
    }

    #[test]
    fn monomial_pow_and_root() {
        let m = QMonomial::new(c(2, 1), 2);
        let cube = m.pow(3).unwrap().materialize().unwrap();
        assert_eq!(cube, QMonomial::new(c(8, 1), 6));

        let anything = QMonomial::new(c(5, 7), 4);
        assert_eq!(
            anything.pow(0).unwrap().materialize().unwrap(),
            QMonomial::one()
        );

        let half = QMonomial::new(c(1, 2), 4);
        let inv = half.pow(-1).unwrap();
        assert_eq!(inv.exp, -4);
        assert!(inv.materialize().is_err());
        // Combining before materializing makes the negative power legal.
        let net = inv.mul(&MonomialExpr::p_pow(6));
        assert_eq!(net.materialize().unwrap(), QMonomial::new(c(2, 1), 2));

        let m = QMonomial::new(c(9, 4), 6);
        assert_eq!(
            m.root(2, RootBranch::Principal).unwrap(),
            QMonomial::new(c(3, 2), 3)
        );
        assert_eq!(
            QMonomial::q().root(2, RootBranch::Principal).unwrap(),
            QMonomial::new(c(1, 1), 1)
        );
        assert_eq!(
            QMonomial::new(c(16, 1), 8).root(4, RootBranch::Principal).unwrap(),
            QMonomial::new(c(2, 1), 2)
        );
        assert!(QMonomial::new(c(9, 4), 3).root(2, RootBranch::Principal).is_err());
        assert_eq!(
            QMonomial::new(c(9, 4), 6).root(2, RootBranch::Negated).unwrap(),
            QMonomial::new(c(-3, 2), 3)
        );
    }

    #[test]
    fn root_pow_round_trip() {
        for (num, den, e) in [(9i64, 4i64, 6u32), (4, 1, 2), (16, 81, 4), (1, 1, 0)] {
            let m = QMonomial::new(c(num, den), e);
            let r = m.root(2, RootBranch::Principal).unwrap();
            assert_eq!(r.pow(2).unwrap().materialize().unwrap(), m);
        }
    }

    #[test]
    fn laurent_shift_tracks_precision() {
        let n = 10;
        let mut s = TruncatedSeries::one(n);
        s.mul_binomial(&c(1, 1), 1); // 1 - p
        let shifted = s.shift_scale(&c(1, 1), -3).unwrap();
        assert_eq!(shifted.reliable_through(), 7);
        assert_eq!(shifted.coeff(-3).unwrap(), &c(1, 1));
        assert_eq!(shifted.coeff(-2).unwrap(), &c(-1, 1));
        // Comparing past the reliable order must fail, not lie.
        let z = TruncatedSeries::zero(n);
        assert!(matches!(
            shifted.first_mismatch(&z, 10),
            Err(SeriesError::IncompletePrecision { .. })
        ));
        // Shifting back up restores indices but not lost knowledge.
        let back = shifted.shift_scale(&c(1, 1), 3).unwrap();
        assert_eq!(back.reliable_through(), 10);
        assert_eq!(back.coeff(0).unwrap(), &c(1, 1));
    }

    fn arb_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec((-6i64..=6, 1i64..=4), order + 1).prop_map(move |v| {
            let mut s = TruncatedSeries::zero(order);
            for (i, (n, d)) in v.into_iter().enumerate() {
                *s.at_mut(i as i64) = c(n, d);
            }
            s
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(x in arb_series(10), y in arb_series(10), z in arb_series(10)) {
            let xy = x.mul(&y).unwrap();
            let yx = y.mul(&x).unwrap();
            prop_assert_eq!(&xy, &yx);
            let assoc_l = xy.mul(&z).unwrap();
            let assoc_r = x.mul(&y.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(assoc_l, assoc_r);
            let dist_l = x.mul(&y.add(&z).unwrap()).unwrap();
            let dist_r = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(dist_l, dist_r);
        }

        #[test]
        fn inverse_multiplies_to_one(x in arb_series(10)) {
            prop_assume!(!x.coeff(0).unwrap().is_zero());
            let inv = x.inv().unwrap();
            let prod = x.mul(&inv).unwrap();
            prop_assert!(prod.eq_to_order(&TruncatedSeries::one(10), 10).unwrap());
        }

        #[test]
        fn valuation_is_additive(x in arb_series(10), y in arb_series(10), i in 0i64..=5, j in 0i64..=5) {
            let xs = x.shift_scale(&c(1,1), i).unwrap();
            let ys = y.shift_scale(&c(1,1), j).unwrap();
            let (vx, vy) = (xs.valuation(), ys.valuation());
            prop_assume!(vx.is_some() && vy.is_some());
            let sum = vx.unwrap() + vy.unwrap();
            prop_assume!(sum <= xs.reliable_through().min(ys.reliable_through()));
            let prod = xs.mul(&ys).unwrap();
            if sum <= prod.reliable_through() {
                prop_assert_eq!(prod.valuation(), Some(sum));
            }
        }

        #[test]
        fn binomial_mul_div_round_trip(x in arb_series(10), n in -5i64..=5, d in 1i64..=4, e in 1i64..=4) {
            let k = c(n, d);
            let mut y = x.clone();
            y.mul_binomial(&k, e);
            y.div_binomial(&k, e);
            prop_assert_eq!(y, x);
        }
    }
}
