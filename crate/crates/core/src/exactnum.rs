//! Exact coefficient arithmetic: arbitrary-precision rationals and Gaussian
//! rationals (complex numbers with rational real and imaginary parts).
//!
//! Every series coefficient in this crate is a [`GaussianRational`]. Most
//! identities only ever produce real coefficients, but one of Bressoud's
//! transformations carries parameters with an explicit factor of `i`, so the
//! coefficient field is Q(i) throughout rather than a parallel real-only path.
//!
//! Values are canonical on construction (fractions in lowest terms, positive
//! denominators), immutable afterwards, and safe to share across threads.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

use crate::error::SeriesError;

/// A complex number `re + im*i` with arbitrary-precision rational parts.
///
/// `i*i = -1`. The value is purely real iff `im == 0`. Canonical form is
/// inherited from `BigRational` (lowest terms, denominator > 0), so equality
/// and hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    /// Construct `n/d` as a purely real value. Panics if `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_int(n: i64) -> Self {
        Self::ratio(n, 1)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.im.is_zero() && self.re.is_one()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re^2 + im^2`, the rational norm.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn add(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    pub fn neg(&self) -> Self {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        // Real-by-real is by far the common case; skip the complex cross terms.
        if self.im.is_zero() && other.im.is_zero() {
            return GaussianRational {
                re: &self.re * &other.re,
                im: BigRational::zero(),
            };
        }
        GaussianRational {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    /// Multiplicative inverse: conjugate over norm.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::DivisionByZero);
        }
        if self.im.is_zero() {
            return Ok(GaussianRational {
                re: self.re.recip(),
                im: BigRational::zero(),
            });
        }
        let n = self.norm();
        Ok(GaussianRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inv()?))
    }

    /// `self^k` for any integer `k`; negative powers invert first.
    pub fn powi(&self, k: i64) -> Result<Self, SeriesError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    /// Exact principal k-th root, when one exists in Q(i).
    ///
    /// Handles the cases the parameter sampler produces: positive real values
    /// whose numerator and denominator are perfect k-th powers (root is real
    /// positive), and for k = 2 also negative reals (root is `i*sqrt(|x|)`).
    /// Anything else is reported as not a perfect root.
    pub fn nth_root(&self, k: u32) -> Result<Self, SeriesError> {
        assert!(k >= 1);
        if k == 1 {
            return Ok(self.clone());
        }
        let fail = || SeriesError::NotAPerfectRoot {
            value: self.to_string(),
            degree: k,
        };
        if !self.im.is_zero() {
            return Err(fail());
        }
        if self.re.is_zero() {
            return Ok(Self::zero());
        }
        if self.re.is_negative() {
            if k == 2 {
                let r = Self::from_rational(-self.re.clone()).nth_root(2)?;
                return Ok(Self::i().mul(&r));
            }
            if k == 4 {
                return Err(fail());
            }
            if k % 2 == 1 {
                let r = Self::from_rational(-self.re.clone()).nth_root(k)?;
                return Ok(r.neg());
            }
            return Err(fail());
        }
        let num = rational_int_root(self.re.numer(), k).ok_or_else(fail)?;
        let den = rational_int_root(self.re.denom(), k).ok_or_else(fail)?;
        Ok(Self::from_rational(BigRational::new(num, den)))
    }
}

fn rational_int_root(x: &BigInt, k: u32) -> Option<BigInt> {
    let r = x.nth_root(k);
    if num_traits::pow::pow(r.clone(), k as usize) == *x {
        Some(r)
    } else {
        None
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    /// Renders as `a/b` for reals and `a/b + c/d i` (or `a/b - c/d i`)
    /// otherwise; pure imaginaries render as `c/d i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rational(&self.re, f);
        }
        if self.re.is_zero() {
            fmt_rational(&self.im, f)?;
            return write!(f, " i");
        }
        fmt_rational(&self.re, f)?;
        if self.im.is_negative() {
            write!(f, " - ")?;
            fmt_rational(&-self.im.clone(), f)?;
        } else {
            write!(f, " + ")?;
            fmt_rational(&self.im, f)?;
        }
        write!(f, " i")
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for GaussianRational {
    type Err = String;

    /// Parses the same forms `Display` emits: `a/b`, `a/b + c/d i`,
    /// `a/b - c/d i`, and `c/d i`. Used for CLI parameter overrides.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty coefficient".into());
        }
        let parse_rat = |t: &str| -> Result<BigRational, String> {
            let t = t.trim();
            BigRational::from_str(t).map_err(|e| format!("bad rational '{t}': {e}"))
        };
        if let Some(body) = s.strip_suffix('i') {
            let body = body.trim();
            // Split on the last top-level +/- that separates re and im.
            for (idx, ch) in body.char_indices().rev() {
                if (ch == '+' || ch == '-') && idx > 0 {
                    let (re_s, im_s) = body.split_at(idx);
                    let re_s = re_s.trim();
                    if re_s.is_empty() || re_s.ends_with('/') {
                        continue;
                    }
                    let sign = if ch == '-' { -1 } else { 1 };
                    let im_body = im_s[1..].trim();
                    let im = if im_body.is_empty() {
                        BigRational::one()
                    } else {
                        parse_rat(im_body)?
                    };
                    return Ok(GaussianRational::new(
                        parse_rat(re_s)?,
                        im * BigRational::from_integer(BigInt::from(sign)),
                    ));
                }
            }
            let body = body.trim();
            let im = if body.is_empty() || body == "+" {
                BigRational::one()
            } else if body == "-" {
                -BigRational::one()
            } else {
                parse_rat(body)?
            };
            return Ok(GaussianRational::new(BigRational::zero(), im));
        }
        Ok(Self::from_rational(parse_rat(s)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gr(n: i64, d: i64) -> GaussianRational {
        GaussianRational::ratio(n, d)
    }

    fn gri(rn: i64, rd: i64, in_: i64, id: i64) -> GaussianRational {
        GaussianRational::new(
            BigRational::new(BigInt::from(rn), BigInt::from(rd)),
            BigRational::new(BigInt::from(in_), BigInt::from(id)),
        )
    }

    #[test]
    fn add_examples() {
        assert_eq!(gr(1, 2).add(&gr(1, 3)), gr(5, 6));
        assert_eq!(
            GaussianRational::i().add(&GaussianRational::i().neg()),
            GaussianRational::zero()
        );
        assert_eq!(gri(2, 3, 1, 5).add(&gri(1, 3, 4, 5)), gri(1, 1, 1, 1));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(
            GaussianRational::i().mul(&GaussianRational::i()),
            gr(-1, 1)
        );
        assert_eq!(gr(1, 2).mul(&gr(2, 3)), gr(1, 3));
        assert_eq!(gri(1, 1, 1, 1).mul(&gri(1, 1, -1, 1)), gr(2, 1));
    }

    #[test]
    fn inv_examples() {
        assert_eq!(gr(2, 3).inv().unwrap(), gr(3, 2));
        assert_eq!(
            GaussianRational::i().inv().unwrap(),
            GaussianRational::i().neg()
        );
        assert_eq!(gri(1, 1, 1, 1).inv().unwrap(), gri(1, 2, -1, 2));
        assert!(matches!(
            GaussianRational::zero().inv(),
            Err(SeriesError::DivisionByZero)
        ));
    }

    #[test]
    fn roots() {
        assert_eq!(gr(9, 4).nth_root(2).unwrap(), gr(3, 2));
        assert_eq!(gr(16, 81).nth_root(4).unwrap(), gr(2, 3));
        assert_eq!(
            gr(-4, 9).nth_root(2).unwrap(),
            GaussianRational::i().mul(&gr(2, 3))
        );
        assert!(gr(2, 1).nth_root(2).is_err());
        assert!(gr(9, 4).nth_root(4).is_err());
    }

    #[test]
    fn display_and_parse_round_trip() {
        for v in [
            gr(3, 4),
            gr(-3, 4),
            gr(5, 1),
            gri(1, 2, 3, 4),
            gri(1, 2, -3, 4),
            gri(0, 1, -2, 7),
            GaussianRational::i(),
        ] {
            let s = v.to_string();
            let back: GaussianRational = s.parse().unwrap();
            assert_eq!(back, v, "round trip through '{s}'");
        }
        assert_eq!(
            "1/2 + 3/4 i".parse::<GaussianRational>().unwrap(),
            gri(1, 2, 3, 4)
        );
        assert!("".parse::<GaussianRational>().is_err());
        assert!("x/y".parse::<GaussianRational>().is_err());
    }

    fn arb_gauss() -> impl Strategy<Value = GaussianRational> {
        (-20i64..=20, 1i64..=12, -20i64..=20, 1i64..=12)
            .prop_map(|(a, b, c, d)| gri(a, b, c, d))
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_gauss(), y in arb_gauss(), z in arb_gauss()) {
            prop_assert_eq!(x.add(&y), y.add(&x));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        }

        #[test]
        fn inverse_is_two_sided(x in arb_gauss()) {
            prop_assume!(!x.is_zero());
            let inv = x.inv().unwrap();
            prop_assert_eq!(x.mul(&inv), GaussianRational::one());
            prop_assert_eq!(inv.mul(&x), GaussianRational::one());
        }

        #[test]
        fn canonical_equality(a in -20i64..=20, b in 1i64..=12, m in 1i64..=5) {
            // The same value built from unreduced parts compares equal.
            let x = GaussianRational::from_rational(
                BigRational::new(BigInt::from(a * m), BigInt::from(b * m)));
            let y = gr(a, b);
            prop_assert_eq!(x, y);
        }
    }
}
