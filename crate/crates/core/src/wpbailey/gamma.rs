//! The Bailey-transform machinery behind the main WP-Bailey transformation:
//! the specialized delta sequence, the gamma sequence both as a direct
//! truncated sum and in closed form, and the summation-order-swap check
//! `sum alpha_n gamma_n = sum beta_n delta_n`.
//!
//! All of it runs over the proof variables `lambda, a, b`, with
//!
//! ```text
//! U_r = (ab/lambda; q)_r / (q; q)_r
//! V_r = (lambda; q)_r / (lambda^2 q/(ab); q)_r
//! delta_r = (1 - lambda q^{2r})/(1 - lambda)
//!           * (a, b; q)_r (lambda^2 q/ab; q^2)_r
//!           / [(lambda q/a, lambda q/b; q)_r (qab; q^2)_r]
//!           * (-q lambda/(ab))^r
//! gamma_n = sum_{r=n}^inf delta_r U_{r-n} V_{r+n}
//! ```
//!
//! When the caller works with a WP-Bailey pair at `(a, k)` and a free `b`,
//! the proof variables are `lambda = k`, `a = k^2/(ab)`, `b = b`; see
//! [`proof_env`]. The `lambda sqrt(q/ab)` and `sqrt(qab)` pairs of the
//! printed delta combine into base-`q^2` Pochhammers, so no roots are taken.

use super::{apply_power, wp_ratio, ParamEnv, WpPair};
use crate::error::EvalError;
use crate::qkernel::{
    self, default_cap, div_factor, mul_factor, poch_ratio_infinite, sum_series, TermGenerator,
    BASE_Q, BASE_Q2, DEFAULT_WINDOW,
};
use crate::series::{MonomialExpr, TruncatedSeries};
use crate::wpbailey::{div_poch, poch_ratio_finite, with_working_order};

fn q1() -> MonomialExpr {
    MonomialExpr::q_pow(1)
}

struct ProofSymbols {
    lambda: MonomialExpr,
    a: MonomialExpr,
    b: MonomialExpr,
    ab: MonomialExpr,
    /// -q*lambda/(ab), the per-step argument.
    arg: MonomialExpr,
    /// lambda^2 q/(ab)
    l2q_ab: MonomialExpr,
    /// q*a*b
    qab: MonomialExpr,
}

impl ProofSymbols {
    fn from_env(env: &ParamEnv) -> Result<Self, EvalError> {
        let lambda = env.mon("lambda")?;
        let a = env.mon("a")?;
        let b = env.mon("b")?;
        let ab = a.mul(&b);
        let arg = q1().mul(&lambda).div(&ab)?.neg();
        let l2q_ab = lambda.mul(&lambda).mul(&q1()).div(&ab)?;
        let qab = q1().mul(&ab);
        Ok(ProofSymbols {
            lambda,
            a,
            b,
            ab,
            arg,
            l2q_ab,
            qab,
        })
    }
}

/// `delta_r` at the given order.
pub fn delta_term(r: u32, env: &ParamEnv, order: usize) -> Result<TruncatedSeries, EvalError> {
    let s = ProofSymbols::from_env(env)?;
    let lam_q = s.lambda.mul(&q1());
    let mut t = poch_ratio_finite(
        &[s.a.clone(), s.b.clone()],
        &[lam_q.div(&s.a)?, lam_q.div(&s.b)?],
        BASE_Q,
        r,
        order,
    )?;
    t = t.mul(&qkernel::poch_finite(&s.l2q_ab, BASE_Q2, r, order)?)?;
    t = div_poch(t, &s.qab, BASE_Q2, r)?;
    t = wp_ratio(t, &s.lambda, BASE_Q, r)?;
    apply_power(t, &s.arg, r)
}

/// Generator for the terms `delta_r U_{r-n} V_{r+n}`, r = n, n+1, ...,
/// built incrementally by exact term ratios.
struct GammaTermGen {
    sym: ProofSymbols,
    n: u32,
    r: u32,
    term: TruncatedSeries,
    order: usize,
    started: bool,
}

impl GammaTermGen {
    fn new(n: u32, env: &ParamEnv, order: usize) -> Result<Self, EvalError> {
        let sym = ProofSymbols::from_env(env)?;
        // Initial term: delta_n * U_0 * V_{2n} with U_0 = 1.
        let mut term = delta_term(n, env, order)?;
        term = term.mul(&qkernel::poch_finite(&sym.lambda, BASE_Q, 2 * n, order)?)?;
        term = div_poch(term, &sym.l2q_ab, BASE_Q, 2 * n)?;
        Ok(GammaTermGen {
            sym,
            n,
            r: n,
            term,
            order,
            started: false,
        })
    }

    fn advance(&mut self) -> Result<(), EvalError> {
        let s = &self.sym;
        let r = self.r as i64;
        let step = 2i64; // base q
        let mut t = std::mem::replace(&mut self.term, TruncatedSeries::zero(self.order));

        // delta ratio
        t = mul_factor(t, &s.lambda.coeff, s.lambda.exp + 2 * step * (r + 1))?;
        t = div_factor(t, &s.lambda.coeff, s.lambda.exp + 2 * step * r)?;
        t = mul_factor(t, &s.a.coeff, s.a.exp + step * r)?;
        t = mul_factor(t, &s.b.coeff, s.b.exp + step * r)?;
        t = mul_factor(t, &s.l2q_ab.coeff, s.l2q_ab.exp + 2 * step * r)?;
        let lam_q = s.lambda.mul(&q1());
        let lqa = lam_q.div(&s.a)?;
        let lqb = lam_q.div(&s.b)?;
        t = div_factor(t, &lqa.coeff, lqa.exp + step * r)?;
        t = div_factor(t, &lqb.coeff, lqb.exp + step * r)?;
        t = div_factor(t, &s.qab.coeff, s.qab.exp + 2 * step * r)?;
        t = t.shift_scale(&s.arg.coeff, s.arg.exp)?;

        // U_{r-n} -> U_{r-n+1}
        let m_u = r - self.n as i64;
        let ab_lam = s.ab.div(&s.lambda)?;
        t = mul_factor(t, &ab_lam.coeff, ab_lam.exp + step * m_u)?;
        t = div_factor(t, &crate::exactnum::GaussianRational::one(), step * (m_u + 1))?;

        // V_{r+n} -> V_{r+n+1}
        let m_v = r + self.n as i64;
        t = mul_factor(t, &s.lambda.coeff, s.lambda.exp + step * m_v)?;
        t = div_factor(t, &s.l2q_ab.coeff, s.l2q_ab.exp + step * m_v)?;

        self.term = t;
        self.r += 1;
        Ok(())
    }
}

impl TermGenerator for GammaTermGen {
    fn next_term(&mut self) -> Result<Option<TruncatedSeries>, EvalError> {
        if !self.started {
            self.started = true;
            return Ok(Some(self.term.clone()));
        }
        self.advance()?;
        Ok(Some(self.term.clone()))
    }
}

/// `gamma_n` as the direct truncated sum over r >= n. This is the brute-force
/// oracle; it needs `val(q*lambda/(ab)) >= 1` to truncate and reports
/// `NonTruncating` otherwise.
pub fn gamma_direct(n: u32, env: &ParamEnv, order: usize) -> Result<TruncatedSeries, EvalError> {
    let mut g = GammaTermGen::new(n, env, order)?;
    sum_series(&mut g, order, DEFAULT_WINDOW, default_cap(order))
}

/// `gamma_n` in closed form: the even/odd case split obtained by summing the
/// inner series with the q-analogue of Watson's 3F2 sum.
pub fn gamma_closed(n: u32, env: &ParamEnv, order: usize) -> Result<TruncatedSeries, EvalError> {
    let s = ProofSymbols::from_env(env)?;
    let lam_q = s.lambda.mul(&q1());
    let a2b = s.a.mul(&s.a).mul(&s.b);
    let ab2 = s.a.mul(&s.b).mul(&s.b);
    let l2 = s.lambda.mul(&s.lambda);
    let q2 = MonomialExpr::q_pow(2);
    let q3 = MonomialExpr::q_pow(3);

    let mut t = poch_ratio_infinite(
        &[lam_q.clone(), lam_q.div(&s.ab)?],
        &[lam_q.div(&s.a)?, lam_q.div(&s.b)?],
        BASE_Q,
        order,
    )?;
    t = apply_power(t, &s.arg, n)?;

    let common_den = [
        q1(),
        s.qab.clone(),
        l2.mul(&q2).div(&s.ab)?,
        l2.mul(&q2).div(&s.ab.mul(&s.ab))?,
    ];
    if n % 2 == 0 {
        let m = n / 2;
        let d1 = l2.mul(&q2).div(&a2b)?;
        let d2 = l2.mul(&q2).div(&ab2)?;
        t = t.mul(&poch_ratio_infinite(
            &[s.a.mul(&q1()), s.b.mul(&q1()), d1.clone(), d2.clone()],
            &common_den,
            BASE_Q2,
            order,
        )?)?;
        t = t.mul(&poch_ratio_finite(
            &[s.a.clone(), s.b.clone()],
            &[d1, d2],
            BASE_Q2,
            m,
            order,
        )?)?;
    } else {
        let m = (n - 1) / 2;
        let d1 = l2.mul(&q3).div(&a2b)?;
        let d2 = l2.mul(&q3).div(&ab2)?;
        t = t.mul(&poch_ratio_infinite(
            &[s.a.clone(), s.b.clone(), d1.clone(), d2.clone()],
            &common_den,
            BASE_Q2,
            order,
        )?)?;
        t = t.mul(&poch_ratio_finite(
            &[s.a.mul(&q1()), s.b.mul(&q1())],
            &[d1, d2],
            BASE_Q2,
            m,
            order,
        )?)?;
    }
    Ok(t)
}

/// Proof-variable environment for a pair at `(a, k)` with free `b`:
/// `lambda = k`, proof `a = k^2/(ab)`, proof `b = b`.
pub fn proof_env(env: &ParamEnv) -> Result<ParamEnv, EvalError> {
    let a = env.mon("a")?;
    let k = env.mon("k")?;
    let b = env.mon("b")?;
    let pa = k.mul(&k).div(&a.mul(&b))?;
    let mut out = ParamEnv::new();
    out.set("lambda", k.materialize()?);
    out.set("a", pa.materialize()?);
    out.set("b", b.materialize()?);
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct BaileyLemmaReport {
    pub pair: String,
    pub order: usize,
    pub mismatch: Option<(i64, String, String)>,
}

impl BaileyLemmaReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

struct PairWeightedGen<'a, F>
where
    F: Fn(u32, usize) -> Result<TruncatedSeries, EvalError>,
{
    pair_term: &'a dyn Fn(u32, usize) -> Result<TruncatedSeries, EvalError>,
    weight: F,
    n: u32,
    order: usize,
}

impl<'a, F> TermGenerator for PairWeightedGen<'a, F>
where
    F: Fn(u32, usize) -> Result<TruncatedSeries, EvalError>,
{
    fn next_term(&mut self) -> Result<Option<TruncatedSeries>, EvalError> {
        let n = self.n;
        self.n += 1;
        let a = (self.pair_term)(n, self.order)?;
        if a.is_zero_through(a.reliable_through()) {
            // Exact zero sequence entries still advance the window.
            return Ok(Some(TruncatedSeries::zero(self.order)));
        }
        let w = (self.weight)(n, self.order)?;
        Ok(Some(a.mul(&w)?))
    }
}

/// The double-sum swap at desk scale: verifies
/// `sum_n alpha_n gamma_n = sum_n beta_n delta_n` to the given order, with
/// `gamma` computed by the direct sum. The environment supplies the pair's
/// `(a, k)` (plus any pair-specific symbols) and the free `b`.
pub fn bailey_lemma_check(
    pair: &WpPair,
    env: &ParamEnv,
    order: usize,
) -> Result<BaileyLemmaReport, EvalError> {
    pair.check_constraint(env)?;
    let penv = proof_env(env)?;
    with_working_order(order, 0, |work| {
        let alpha_side = {
            let pair_term = |n: u32, w: usize| pair.alpha(n, env, w);
            let mut g = PairWeightedGen {
                pair_term: &pair_term,
                weight: |n: u32, w: usize| gamma_direct(n, &penv, w),
                n: 0,
                order: work,
            };
            sum_series(&mut g, work, DEFAULT_WINDOW, default_cap(work))?
        };
        let beta_side = {
            let pair_term = |n: u32, w: usize| pair.beta(n, env, w);
            let mut g = PairWeightedGen {
                pair_term: &pair_term,
                weight: |n: u32, w: usize| delta_term(n, &penv, w),
                n: 0,
                order: work,
            };
            sum_series(&mut g, work, DEFAULT_WINDOW, default_cap(work))?
        };
        let mismatch = alpha_side
            .first_mismatch(&beta_side, order as i64)
            .map_err(EvalError::from)?
            .map(|(i, l, r)| (i, l.to_string(), r.to_string()));
        Ok(BaileyLemmaReport {
            pair: pair.name.clone(),
            order,
            mismatch,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::GaussianRational;
    use crate::series::QMonomial;
    use crate::wpbailey::builtin_pairs;

    fn m(n: i64, d: i64, e: u32) -> QMonomial {
        QMonomial::new(GaussianRational::ratio(n, d), e)
    }

    fn proof_env_fixture(idx: u32) -> ParamEnv {
        // lambda ~ k, a ~ k^2/(ab), b: all with val(q*lambda/ab) >= 1.
        let mut env = ParamEnv::new();
        match idx {
            0 => {
                env.set("lambda", m(1, 2, 2));
                env.set("a", m(1, 3, 1));
                env.set("b", m(2, 3, 1));
            }
            1 => {
                env.set("lambda", m(9, 4, 2));
                env.set("a", m(3, 2, 2));
                env.set("b", m(-2, 3, 0));
            }
            _ => {
                env.set("lambda", m(2, 1, 3));
                env.set("a", m(-1, 2, 1));
                env.set("b", m(3, 4, 2));
            }
        }
        env
    }

    #[test]
    fn gamma_closed_matches_direct() {
        for idx in 0..3 {
            let env = proof_env_fixture(idx);
            for n in 0..=6u32 {
                let direct = gamma_direct(n, &env, 40).unwrap();
                let closed = gamma_closed(n, &env, 40).unwrap();
                assert!(
                    direct.eq_to_order(&closed, 40).unwrap(),
                    "gamma mismatch at env {idx}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn gamma_zero_env_is_non_truncating() {
        // val(q*lambda/(ab)) = 0: the r-sum gains no order.
        let mut env = ParamEnv::new();
        env.set("lambda", m(1, 2, 2));
        env.set("a", m(1, 3, 2));
        env.set("b", m(2, 3, 2));
        assert!(matches!(
            gamma_direct(0, &env, 20),
            Err(EvalError::NonTruncating { .. })
        ));
    }

    #[test]
    fn gamma_sign_alternation() {
        // gamma_n carries (-q lambda/(ab))^n: with positive coefficients the
        // leading coefficients of consecutive gammas alternate in sign.
        let env = proof_env_fixture(0);
        let mut signs = Vec::new();
        for n in 0..4u32 {
            let g = gamma_direct(n, &env, 30).unwrap();
            let v = g.valuation().expect("nonzero");
            let lead = g.coeff(v).unwrap();
            signs.push(num_traits::Signed::is_positive(lead.re()));
        }
        for w in signs.windows(2) {
            assert_ne!(w[0], w[1], "consecutive gammas must alternate sign");
        }
    }

    #[test]
    fn gamma_closed_even_branch_at_n0_is_prefactor_only() {
        // n = 0: empty finite Pochhammers, so closed form is just the
        // infinite-product prefactor; cross-checked against direct.
        let env = proof_env_fixture(1);
        let closed = gamma_closed(0, &env, 30).unwrap();
        let direct = gamma_direct(0, &env, 30).unwrap();
        assert!(closed.eq_to_order(&direct, 30).unwrap());
    }

    #[test]
    fn lemma_swap_for_unit_and_trivial() {
        // Unit pair: beta_n = [n = 0], so the beta side is exactly delta_0 = 1.
        for name in ["trivial", "unit", "singh"] {
            let pair = builtin_pairs()
                .into_iter()
                .find(|p| p.name == name)
                .unwrap();
            let mut env = crate::wpbailey::pairs::sample_env_for(name);
            env.set("b", m(2, 3, 1));
            let report = bailey_lemma_check(&pair, &env, 30).unwrap();
            assert!(report.passed(), "{name}: {:?}", report.mismatch);
        }
    }

    #[test]
    fn lemma_swap_for_every_builtin_pair() {
        for pair in builtin_pairs() {
            let mut env = crate::wpbailey::pairs::sample_env_for(&pair.name);
            if env.get("b").is_err() {
                env.set("b", m(2, 3, 1));
            }
            let report = bailey_lemma_check(&pair, &env, 26)
                .unwrap_or_else(|e| panic!("{}: {e}", pair.name));
            assert!(report.passed(), "{}: {:?}", pair.name, report.mismatch);
        }
    }
}
