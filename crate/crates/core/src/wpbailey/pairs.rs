//! The builtin WP-Bailey pair registry.
//!
//! Ten concrete pairs: the trivial and unit pairs, Singh's pair, the two
//! Andrews-Berkovich pairs, Bressoud's second and third pairs (whose
//! Pochhammers run over base `sqrt(q)`), and the three McLaughlin-Zimmer
//! pairs. Bressoud's first pair is omitted: it is a limiting case of Singh's.
//!
//! Pairs whose printed form carries the `(q sqrt(a), -q sqrt(a); q)_n` over
//! `(sqrt(a), -sqrt(a); q)_n` block are evaluated through the equivalent
//! rational factor `(1 - a q^{2n}) / (1 - a)`, and `(x, -x; q)_n` blocks
//! through `(x^2; q^2)_n`, so only radicals that appear unpaired consume a
//! root of the environment.

use std::sync::Arc;

use super::{
    apply_power, neg_one_pow, poch_ratio_finite, wp_ratio, ParamEnv, SequenceFn, WpPair,
};
use crate::error::EvalError;
use crate::exactnum::GaussianRational;
use crate::qkernel::{poch_finite, BASE_Q, BASE_Q2, BASE_SQRT_Q};
use crate::series::{MonomialExpr, TruncatedSeries};
use crate::wpbailey::div_poch;

fn q1() -> MonomialExpr {
    MonomialExpr::q_pow(1)
}

fn delta_n0(n: u32, order: usize) -> TruncatedSeries {
    if n == 0 {
        TruncatedSeries::one(order)
    } else {
        TruncatedSeries::zero(order)
    }
}

/// All ten builtin pairs, in registry order.
pub fn builtin_pairs() -> Vec<Arc<WpPair>> {
    vec![
        trivial_pair(),
        unit_pair(),
        singh_pair(),
        ab1_pair(),
        ab2_pair(),
        bressoud2_pair(),
        bressoud3_pair(),
        mz1_pair(),
        mz2_pair(),
        mz3_pair(),
    ]
}

/// alpha_n = [n = 0], beta_n = (k/a, k; q)_n / (q, aq; q)_n.
fn trivial_pair() -> Arc<WpPair> {
    let alpha: SequenceFn = Arc::new(|n, _env, order| Ok(delta_n0(n, order)));
    let beta: SequenceFn = Arc::new(|n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        poch_ratio_finite(
            &[k.div(&a)?, k.clone()],
            &[q1(), a.mul(&q1())],
            BASE_Q,
            n,
            order,
        )
    });
    Arc::new(WpPair::new("trivial", alpha, beta))
}

/// alpha_n = (1 - a q^{2n})/(1 - a) * (a, a/k; q)_n / (q, kq; q)_n * (k/a)^n,
/// beta_n = [n = 0].
///
/// The printed beta leaves n = 1 formally unstated ("0, n > 1"); the relation
/// with the stated alpha forces beta_1 = 0, which is what this returns and
/// what the relation test confirms.
fn unit_pair() -> Arc<WpPair> {
    let alpha: SequenceFn = Arc::new(|n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let mut t = poch_ratio_finite(
            &[a.clone(), a.div(&k)?],
            &[q1(), k.mul(&q1())],
            BASE_Q,
            n,
            order,
        )?;
        t = wp_ratio(t, &a, BASE_Q, n)?;
        apply_power(t, &k.div(&a)?, n)
    });
    let beta: SequenceFn = Arc::new(|n, _env, order| Ok(delta_n0(n, order)));
    Arc::new(WpPair::new("unit", alpha, beta))
}

/// Singh's pair:
/// alpha_n = (1 - a q^{2n})/(1 - a)
///           * (a, y, z, a^2 q/(kyz); q)_n / (q, aq/y, aq/z, kyz/a; q)_n (k/a)^n,
/// beta_n  = (ky/a, kz/a, k, aq/(yz); q)_n / (aq/y, aq/z, kyz/a, q; q)_n.
fn singh_pair() -> Arc<WpPair> {
    let alpha: SequenceFn = Arc::new(|n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let (y, z) = (env.mon("y")?, env.mon("z")?);
        let aq = a.mul(&q1());
        let kyz_a = k.mul(&y).mul(&z).div(&a)?;
        let mut t = poch_ratio_finite(
            &[
                a.clone(),
                y.clone(),
                z.clone(),
                a.mul(&a).mul(&q1()).div(&k.mul(&y).mul(&z))?,
            ],
            &[q1(), aq.div(&y)?, aq.div(&z)?, kyz_a],
            BASE_Q,
            n,
            order,
        )?;
        t = wp_ratio(t, &a, BASE_Q, n)?;
        apply_power(t, &k.div(&a)?, n)
    });
    let beta: SequenceFn = Arc::new(|n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let (y, z) = (env.mon("y")?, env.mon("z")?);
        let aq = a.mul(&q1());
        poch_ratio_finite(
            &[
                k.mul(&y).div(&a)?,
                k.mul(&z).div(&a)?,
                k.clone(),
                aq.div(&y.mul(&z))?,
            ],
            &[
                aq.div(&y)?,
                aq.div(&z)?,
                k.mul(&y).mul(&z).div(&a)?,
                q1(),
            ],
            BASE_Q,
            n,
            order,
        )
    });
    Arc::new(WpPair::new("singh", alpha, beta).with_extra_symbols(&["y", "z"]))
}

/// Andrews-Berkovich pair behind the first 7phi6 corollary:
/// alpha_n = (1 - a q^{2n})/(1 - a) * (a, k/(aq); q)_n / (q, a^2 q^2/k; q)_n
///           * (qa^2/k; q)_{2n} / (k; q)_{2n} * (k/a)^n,
/// beta_n  = (k^2/(qa^2); q)_n / (q; q)_n.
fn ab1_pair() -> Arc<WpPair> {
    let alpha: SequenceFn = Arc::new(|n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let a2 = a.mul(&a);
        let mut t = poch_ratio_finite(
            &[a.clone(), k.div(&a.mul(&q1()))?],
            &[q1(), a2.mul(&MonomialExpr::q_pow(2)).div(&k)?],
            BASE_Q,
            n,
            order,
        )?;
        t = t.mul(&poch_finite(
            &a2.mul(&q1()).div(&k)?,
            BASE_Q,
            2 * n,
            order,
        )?)?;
        t = div_poch(t, &k, BASE_Q, 2 * n)?;
        t = wp_ratio(t, &a, BASE_Q, n)?;
        apply_power(t, &k.div(&a)?, n)
    });
    let beta: SequenceFn = Arc::new(|n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        poch_ratio_finite(
            &[k.mul(&k).div(&a.mul(&a).mul(&q1()))?],
            &[q1()],
            BASE_Q,
            n,
            order,
        )
    });
    Arc::new(WpPair::new("ab1", alpha, beta))
}

/// Andrews-Berkovich pair behind the 6phi5 corollary. The +/- pairs combine
/// rationally; the unpaired `a/sqrt(k)`, `-aq/sqrt(k)`, `q sqrt(k)`,
/// `-sqrt(k)` entries need sqrt(k).
///
/// alpha_n = (1 - a q^{2n})/(1 - a) * (a; q)_n (a^2 q/k; q^2)_n
///           * (a/sqrt(k), -aq/sqrt(k), k/a; q)_n
///           / [(q, qa^2/k; q)_n (qk; q^2)_n (q sqrt(k), -sqrt(k); q)_n],
/// beta_n  = (sqrt(k), k^2/a^2; q)_n / (q, q sqrt(k); q)_n.
fn ab2_pair() -> Arc<WpPair> {
    let alpha: SequenceFn = Arc::new(|n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let sk = env.root("k", 2)?;
        let a2 = a.mul(&a);
        let mut t = poch_ratio_finite(
            &[
                a.clone(),
                a.div(&sk)?,
                a.mul(&q1()).div(&sk)?.neg(),
                k.div(&a)?,
            ],
            &[
                q1(),
                a2.mul(&q1()).div(&k)?,
                sk.mul(&q1()),
                sk.neg(),
            ],
            BASE_Q,
            n,
            order,
        )?;
        // (a sqrt(q/k), -a sqrt(q/k); q)_n = (a^2 q/k; q^2)_n and
        // (sqrt(qk), -sqrt(qk); q)_n = (qk; q^2)_n
        t = t.mul(&poch_finite(&a2.mul(&q1()).div(&k)?, BASE_Q2, n, order)?)?;
        t = div_poch(t, &k.mul(&q1()), BASE_Q2, n)?;
        t = wp_ratio(t, &a, BASE_Q, n)?;
        apply_power(t, &k.div(&a)?, n)
    });
    let beta: SequenceFn = Arc::new(|n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let sk = env.root("k", 2)?;
        poch_ratio_finite(
            &[sk.clone(), k.mul(&k).div(&a.mul(&a))?],
            &[q1(), sk.mul(&q1())],
            BASE_Q,
            n,
            order,
        )
    });
    Arc::new(WpPair::new("ab2", alpha, beta).with_root_needs(&[("k", 2)]))
}

/// Bressoud's second pair, over base sqrt(q):
/// alpha_n = (1 - sqrt(a) q^n)/(1 - sqrt(a))
///           * (sqrt(a), a sqrt(q)/k; sqrt(q))_n / (sqrt(q), k/sqrt(a); sqrt(q))_n
///           * (k/(a sqrt(q)))^n,
/// beta_n  = (k, aq/k; q)_n / (q, k^2/a; q)_n
///           * (-k/sqrt(a); sqrt(q))_{2n} / (-sqrt(aq); sqrt(q))_{2n}
///           * (k/(a sqrt(q)))^n.
fn bressoud2_pair() -> Arc<WpPair> {
    let alpha: SequenceFn = Arc::new(|n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let sa = env.root("a", 2)?;
        let sq = MonomialExpr::p_pow(1);
        let mut t = poch_ratio_finite(
            &[sa.clone(), a.mul(&sq).div(&k)?],
            &[sq.clone(), k.div(&sa)?],
            BASE_SQRT_Q,
            n,
            order,
        )?;
        t = wp_ratio(t, &sa, BASE_SQRT_Q, n)?;
        apply_power(t, &k.div(&a.mul(&sq))?, n)
    });
    let beta: SequenceFn = Arc::new(|n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let sa = env.root("a", 2)?;
        let sq = MonomialExpr::p_pow(1);
        let mut t = poch_ratio_finite(
            &[k.clone(), a.mul(&q1()).div(&k)?],
            &[q1(), k.mul(&k).div(&a)?],
            BASE_Q,
            n,
            order,
        )?;
        t = t.mul(&poch_finite(&k.div(&sa)?.neg(), BASE_SQRT_Q, 2 * n, order)?)?;
        t = div_poch(t, &sa.mul(&sq).neg(), BASE_SQRT_Q, 2 * n)?;
        apply_power(t, &k.div(&a.mul(&sq))?, n)
    });
    Arc::new(WpPair::new("bressoud2", alpha, beta).with_root_needs(&[("a", 2)]))
}

/// Bressoud's third pair, over base sqrt(q):
/// alpha_n = (1 - a q^{2n})/(1 - a)
///           * (sqrt(a), a/k; sqrt(q))_n / (sqrt(q), k sqrt(q/a); sqrt(q))_n
///           * (k/(a sqrt(q)))^n,
/// beta_n  = (k, a/k, -k sqrt(q/a), -kq/sqrt(a); q)_n
///           / (q, qk^2/a, -sqrt(a), -sqrt(aq); q)_n * (k/(a sqrt(q)))^n.
fn bressoud3_pair() -> Arc<WpPair> {
    let alpha: SequenceFn = Arc::new(|n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let sa = env.root("a", 2)?;
        let sq = MonomialExpr::p_pow(1);
        let mut t = poch_ratio_finite(
            &[sa.clone(), a.div(&k)?],
            &[sq.clone(), k.mul(&sq).div(&sa)?],
            BASE_SQRT_Q,
            n,
            order,
        )?;
        t = wp_ratio(t, &a, BASE_Q, n)?;
        apply_power(t, &k.div(&a.mul(&sq))?, n)
    });
    let beta: SequenceFn = Arc::new(|n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let sa = env.root("a", 2)?;
        let sq = MonomialExpr::p_pow(1);
        let t = poch_ratio_finite(
            &[
                k.clone(),
                a.div(&k)?,
                k.mul(&sq).div(&sa)?.neg(),
                k.mul(&q1()).div(&sa)?.neg(),
            ],
            &[
                q1(),
                k.mul(&k).mul(&q1()).div(&a)?,
                sa.neg(),
                sa.mul(&sq).neg(),
            ],
            BASE_Q,
            n,
            order,
        )?;
        apply_power(t, &k.div(&a.mul(&sq))?, n)
    });
    Arc::new(WpPair::new("bressoud3", alpha, beta).with_root_needs(&[("a", 2)]))
}

/// First McLaughlin-Zimmer pair:
/// alpha_n = (qa^2/k^2; q)_n / (q; q)_n * (k/a)^n,
/// beta_n  = (qa/k, k; q)_n / (k^2/a, q; q)_n * (k^2/a; q)_{2n} / (aq; q)_{2n}.
fn mz1_pair() -> Arc<WpPair> {
    let alpha: SequenceFn = Arc::new(|n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let t = poch_ratio_finite(
            &[a.mul(&a).mul(&q1()).div(&k.mul(&k))?],
            &[q1()],
            BASE_Q,
            n,
            order,
        )?;
        apply_power(t, &k.div(&a)?, n)
    });
    let beta: SequenceFn = Arc::new(|n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let k2a = k.mul(&k).div(&a)?;
        let mut t = poch_ratio_finite(
            &[a.mul(&q1()).div(&k)?, k.clone()],
            &[k2a.clone(), q1()],
            BASE_Q,
            n,
            order,
        )?;
        t = t.mul(&poch_finite(&k2a, BASE_Q, 2 * n, order)?)?;
        t = div_poch(t, &a.mul(&q1()), BASE_Q, 2 * n)?;
        Ok(t)
    });
    Arc::new(WpPair::new("mz1", alpha, beta))
}

/// Second McLaughlin-Zimmer pair:
/// alpha_n = (1 - a q^{2n})/(1 - a) * (a, k/a; q)_n (a^2 q/k; q^2)_n
///           / [(q, qa^2/k; q)_n (qk; q^2)_n] * (-1)^n,
/// beta_n  = (k, k^2/a^2; q^2)_{n/2} / (q^2, q^2 a^2/k; q^2)_{n/2} for even n,
///           0 for odd n.
fn mz2_pair() -> Arc<WpPair> {
    let alpha: SequenceFn = Arc::new(|n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let a2 = a.mul(&a);
        let mut t = poch_ratio_finite(
            &[a.clone(), k.div(&a)?],
            &[q1(), a2.mul(&q1()).div(&k)?],
            BASE_Q,
            n,
            order,
        )?;
        t = t.mul(&poch_finite(&a2.mul(&q1()).div(&k)?, BASE_Q2, n, order)?)?;
        t = div_poch(t, &k.mul(&q1()), BASE_Q2, n)?;
        t = wp_ratio(t, &a, BASE_Q, n)?;
        Ok(neg_one_pow(t, n))
    });
    let beta: SequenceFn = Arc::new(|n, env, order| {
        if n % 2 == 1 {
            return Ok(TruncatedSeries::zero(order));
        }
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let m = n / 2;
        poch_ratio_finite(
            &[k.clone(), k.mul(&k).div(&a.mul(&a))?],
            &[
                MonomialExpr::q_pow(2),
                a.mul(&a).mul(&MonomialExpr::q_pow(2)).div(&k)?,
            ],
            BASE_Q2,
            m,
            order,
        )
    });
    Arc::new(WpPair::new("mz2", alpha, beta))
}

/// Third McLaughlin-Zimmer pair, restricted to k = q:
/// alpha_n = (1 - a q^{2n})/(1 - a) * (a, d, q/d, -a; q)_n
///           / (q, aq/d, ad, -q; q)_n * (-1)^n,
/// beta_n  = (q^2/(ad), dq/a; q^2)_{n/2} / (adq, aq^2/d; q^2)_{n/2}, n even;
///           -a (q/(ad), d/a; q^2)_{(n+1)/2} / (ad, aq/d; q^2)_{(n+1)/2}, n odd.
fn mz3_pair() -> Arc<WpPair> {
    let alpha: SequenceFn = Arc::new(|n, env, order| {
        let (a, d) = (env.mon("a")?, env.mon("d")?);
        let mut t = poch_ratio_finite(
            &[a.clone(), d.clone(), q1().div(&d)?, a.neg()],
            &[q1(), a.mul(&q1()).div(&d)?, a.mul(&d), q1().neg()],
            BASE_Q,
            n,
            order,
        )?;
        t = wp_ratio(t, &a, BASE_Q, n)?;
        Ok(neg_one_pow(t, n))
    });
    let beta: SequenceFn = Arc::new(|n, env, order| {
        let (a, d) = (env.mon("a")?, env.mon("d")?);
        let ad = a.mul(&d);
        if n % 2 == 0 {
            let m = n / 2;
            poch_ratio_finite(
                &[
                    MonomialExpr::q_pow(2).div(&ad)?,
                    d.mul(&q1()).div(&a)?,
                ],
                &[ad.mul(&q1()), a.mul(&MonomialExpr::q_pow(2)).div(&d)?],
                BASE_Q2,
                m,
                order,
            )
        } else {
            let m = (n + 1) / 2;
            let t = poch_ratio_finite(
                &[q1().div(&ad)?, d.div(&a)?],
                &[ad.clone(), a.mul(&q1()).div(&d)?],
                BASE_Q2,
                m,
                order,
            )?;
            Ok(t.shift_scale(&a.coeff.neg(), a.exp)?)
        }
    });
    Arc::new(
        WpPair::new("mz3", alpha, beta)
            .with_constraint(mz3_constraint)
            .with_extra_symbols(&["d"]),
    )
}

fn mz3_constraint(env: &ParamEnv) -> Result<(), EvalError> {
    let k = env.get("k")?;
    if k.coeff() != &GaussianRational::one() || k.pexp() != 2 {
        return Err(EvalError::ConstraintViolation {
            detail: format!("mz3 requires k = q, got k = {k}"),
        });
    }
    Ok(())
}

/// One admissible environment per pair, for fast unit-level relation checks
/// (the acceptance suite runs the full seeded grid).
#[cfg(test)]
pub(crate) fn sample_env_for(name: &str) -> ParamEnv {
    use crate::series::QMonomial;
    let m = |n: i64, d: i64, e: u32| QMonomial::new(GaussianRational::ratio(n, d), e);
    let mut env = ParamEnv::new();
    match name {
        "trivial" | "unit" | "mz1" => {
            env.set("a", m(9, 4, 2));
            env.set("k", m(1, 2, 2));
        }
        "singh" => {
            env.set("a", m(9, 4, 2));
            env.set("k", m(1, 2, 2));
            env.set("y", m(3, 2, 0));
            env.set("z", m(-1, 3, 1));
        }
        "ab1" => {
            env.set("a", m(2, 3, 1));
            env.set("k", m(3, 2, 3));
        }
        "ab2" => {
            env.set("a", m(3, 2, 2));
            env.set("k", m(9, 4, 2));
            env.resolve_root("k", 2).unwrap();
        }
        "bressoud2" | "bressoud3" => {
            env.set("a", m(9, 4, 2));
            env.set("k", m(1, 2, 2));
            env.resolve_root("a", 2).unwrap();
        }
        "mz2" => {
            env.set("a", m(2, 3, 2));
            env.set("k", m(9, 4, 2));
            env.resolve_root("k", 2).unwrap();
        }
        "mz3" => {
            env.set("a", m(9, 4, 2));
            env.set("k", QMonomial::q());
            env.set("d", m(3, 2, 0));
        }
        other => panic!("no sample env for pair '{other}'"),
    }
    env
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::QMonomial;
    use crate::wpbailey::{construct_andrews_1, construct_andrews_2, verify_wp_relation, wp_relation_sum};

    fn g(n: i64, d: i64) -> GaussianRational {
        GaussianRational::ratio(n, d)
    }

    fn m(n: i64, d: i64, e: u32) -> QMonomial {
        QMonomial::new(g(n, d), e)
    }

    #[test]
    fn registry_has_all_pairs() {
        let names: Vec<String> = builtin_pairs().iter().map(|p| p.name.clone()).collect();
        assert_eq!(
            names,
            vec![
                "trivial",
                "unit",
                "singh",
                "ab1",
                "ab2",
                "bressoud2",
                "bressoud3",
                "mz1",
                "mz2",
                "mz3"
            ]
        );
    }

    #[test]
    fn every_builtin_pair_satisfies_the_relation() {
        for pair in builtin_pairs() {
            let env = sample_env_for(&pair.name);
            let report = verify_wp_relation(&pair, &env, 6, 30)
                .unwrap_or_else(|e| panic!("{} relation evaluation failed: {e}", pair.name));
            assert!(
                report.passed(),
                "{} fails WP relation at {:?}",
                pair.name,
                report.first_mismatch()
            );
        }
    }

    #[test]
    fn unit_pair_beta1_is_forced_to_zero() {
        // The relation sum with the unit alpha must vanish at n = 1.
        let pair = unit_pair();
        let env = sample_env_for("unit");
        let alphas: Vec<_> = (0..=1)
            .map(|j| pair.alpha(j, &env, 30).unwrap())
            .collect();
        let s = wp_relation_sum(&alphas, &env, 1, 30).unwrap();
        assert!(s.is_zero_through(30));
    }

    #[test]
    fn mz2_beta_vanishes_at_odd_n() {
        let pair = mz2_pair();
        let env = sample_env_for("mz2");
        for n in [1u32, 3, 5, 7] {
            assert!(pair.beta(n, &env, 20).unwrap().is_zero_through(20));
        }
    }

    #[test]
    fn mz3_rejects_k_not_q() {
        let pair = mz3_pair();
        let mut env = sample_env_for("mz3");
        env.set("k", m(1, 2, 2));
        assert!(matches!(
            verify_wp_relation(&pair, &env, 2, 10),
            Err(EvalError::ConstraintViolation { .. })
        ));
    }

    #[test]
    fn k_zero_reverts_to_classical_bailey_pair() {
        // With k = 0 the relation becomes beta_n = sum alpha_j / [(q)_{n-j} (aq)_{n+j}],
        // the classical pair relative to aq; checked on the trivial pair.
        let pair = trivial_pair();
        let mut env = sample_env_for("trivial");
        env.set("k", QMonomial::zero());
        let report = verify_wp_relation(&pair, &env, 5, 30).unwrap();
        assert!(report.passed());
        // And the k = 0 beta is exactly 1 / [(q)_n (aq)_n].
        let a = env.mon("a").unwrap();
        for n in 0..=4u32 {
            let beta = pair.beta(n, &env, 30).unwrap();
            let mut expect = TruncatedSeries::one(30);
            expect = div_poch(expect, &q1(), BASE_Q, n).unwrap();
            expect = div_poch(expect, &a.mul(&q1()), BASE_Q, n).unwrap();
            assert_eq!(beta, expect);
        }
    }

    #[test]
    fn constructions_preserve_the_relation() {
        // Construction 1 needs rho1, rho2 with c = k*rho1*rho2/(aq) admissible.
        for source in [trivial_pair(), unit_pair()] {
            let derived = construct_andrews_1(&source);
            let mut env = sample_env_for("unit");
            env.set("rho1", m(3, 2, 1));
            env.set("rho2", m(-2, 1, 1));
            let report = verify_wp_relation(&derived, &env, 4, 24).unwrap();
            assert!(report.passed(), "{} fails", derived.name);

            let derived2 = construct_andrews_2(&source);
            let report2 = verify_wp_relation(&derived2, &env, 4, 24).unwrap();
            assert!(report2.passed(), "{} fails", derived2.name);
        }
    }

    #[test]
    fn andrews1_with_c_equal_k_reduces_alpha_to_monomial_ratio() {
        // rho2 = aq/rho1 makes c = k, so alpha'_n / alpha_n is the pure
        // Pochhammer ratio with no k-rebinding; spot check n = 2.
        let source = unit_pair();
        let derived = construct_andrews_1(&source);
        let mut env = sample_env_for("unit");
        let rho1 = m(3, 2, 1);
        env.set("rho1", rho1.clone());
        let aq = env.mon("a").unwrap().mul(&q1());
        env.set(
            "rho2",
            aq.div(&rho1.expr()).unwrap().materialize().unwrap(),
        );
        let order = 24;
        let n = 2;
        let lhs = derived.alpha(n, &env, order).unwrap();
        let r1 = env.mon("rho1").unwrap();
        let r2 = env.mon("rho2").unwrap();
        let mut expect = source.alpha(n, &env, order).unwrap();
        expect = expect
            .mul(&poch_finite(&r1, BASE_Q, n, order).unwrap())
            .unwrap();
        expect = expect
            .mul(&poch_finite(&r2, BASE_Q, n, order).unwrap())
            .unwrap();
        expect = div_poch(expect, &aq.div(&r1).unwrap(), BASE_Q, n).unwrap();
        expect = div_poch(expect, &aq.div(&r2).unwrap(), BASE_Q, n).unwrap();
        assert_eq!(lhs, expect);
    }
}
