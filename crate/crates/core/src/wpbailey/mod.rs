//! WP-Bailey pairs as first-class objects.
//!
//! A pair of sequences `(alpha_n(a,k), beta_n(a,k))` is a WP-Bailey pair when
//!
//! ```text
//! beta_n = sum_{j=0}^{n} (k/a;q)_{n-j} (k;q)_{n+j} / [(q;q)_{n-j} (aq;q)_{n+j}] alpha_j
//! ```
//!
//! At `k = 0` this reverts to the classical Bailey-pair relation relative to
//! `aq`. The relation is the tested contract for every pair in the registry:
//! [`verify_wp_relation`] evaluates both sides exactly and reports the first
//! mismatching coefficient, per n.
//!
//! Alpha and beta generators return series rather than closed-form scalars
//! because several pairs (Bressoud's, with base `sqrt(q)` internally) mix `p`
//! parities; the series level is the uniform contract for all of them.

mod gamma;
mod pairs;

pub use gamma::{bailey_lemma_check, delta_term, gamma_closed, gamma_direct, BaileyLemmaReport};
pub use pairs::builtin_pairs;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{EvalError, SeriesError};
use crate::exactnum::GaussianRational;
use crate::qkernel::{self, PochBase, BASE_Q};
use crate::series::{MonomialExpr, QMonomial, RootBranch, TruncatedSeries};

// ---------------------------------------------------------------------------
// Parameter environments
// ---------------------------------------------------------------------------

/// A substitution of concrete monomials for the free parameters of a pair or
/// identity, plus a cache of resolved radicals. Immutable once built.
#[derive(Clone, Debug, Default)]
pub struct ParamEnv {
    vals: BTreeMap<String, QMonomial>,
    roots: BTreeMap<(String, u32), QMonomial>,
}

impl ParamEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: &str, m: QMonomial) {
        self.vals.insert(name.to_string(), m);
        self.roots.retain(|(sym, _), _| sym != name);
    }

    pub fn with(mut self, name: &str, m: QMonomial) -> Self {
        self.set(name, m);
        self
    }

    pub fn get(&self, name: &str) -> Result<&QMonomial, EvalError> {
        self.vals.get(name).ok_or_else(|| EvalError::MissingSymbol {
            name: name.to_string(),
        })
    }

    /// The symbol's value as an unmaterialized expression, ready to combine.
    pub fn mon(&self, name: &str) -> Result<MonomialExpr, EvalError> {
        Ok(self.get(name)?.expr())
    }

    /// Resolve and cache the principal k-th root of a symbol. Called eagerly
    /// during environment validation so admissibility failures surface before
    /// any series work.
    pub fn resolve_root(&mut self, name: &str, degree: u32) -> Result<(), EvalError> {
        let m = self.get(name)?.clone();
        let r = m.root(degree, RootBranch::Principal)?;
        self.roots.insert((name.to_string(), degree), r);
        Ok(())
    }

    /// Principal k-th root of a symbol, from the cache or computed on demand.
    pub fn root(&self, name: &str, degree: u32) -> Result<MonomialExpr, EvalError> {
        if let Some(r) = self.roots.get(&(name.to_string(), degree)) {
            return Ok(r.expr());
        }
        Ok(self
            .get(name)?
            .root(degree, RootBranch::Principal)?
            .expr())
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&String, &QMonomial)> {
        self.vals.iter()
    }

    /// Symbol -> "c*p^e" rendering for reports, in sorted symbol order.
    pub fn render(&self) -> BTreeMap<String, String> {
        self.vals
            .iter()
            .map(|(k, v)| (k.clone(), v.to_string()))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Pairs
// ---------------------------------------------------------------------------

pub type SequenceFn =
    Arc<dyn Fn(u32, &ParamEnv, usize) -> Result<TruncatedSeries, EvalError> + Send + Sync>;

/// A named WP-Bailey pair: two sequence generators over a parameter
/// environment, an admissibility predicate, and sampling metadata.
pub struct WpPair {
    pub name: String,
    alpha: SequenceFn,
    beta: SequenceFn,
    constraint: Option<fn(&ParamEnv) -> Result<(), EvalError>>,
    /// Symbols (beyond a, k) this pair's generators read.
    pub extra_symbols: &'static [&'static str],
    /// Roots the generators take, as (symbol, degree).
    pub root_needs: &'static [(&'static str, u32)],
}

impl WpPair {
    pub fn new(
        name: impl Into<String>,
        alpha: SequenceFn,
        beta: SequenceFn,
    ) -> Self {
        WpPair {
            name: name.into(),
            alpha,
            beta,
            constraint: None,
            extra_symbols: &[],
            root_needs: &[],
        }
    }

    pub fn with_constraint(mut self, c: fn(&ParamEnv) -> Result<(), EvalError>) -> Self {
        self.constraint = Some(c);
        self
    }

    pub fn with_extra_symbols(mut self, syms: &'static [&'static str]) -> Self {
        self.extra_symbols = syms;
        self
    }

    pub fn with_root_needs(mut self, roots: &'static [(&'static str, u32)]) -> Self {
        self.root_needs = roots;
        self
    }

    pub fn check_constraint(&self, env: &ParamEnv) -> Result<(), EvalError> {
        if let Some(c) = self.constraint {
            c(env)?;
        }
        Ok(())
    }

    pub fn alpha(&self, n: u32, env: &ParamEnv, order: usize) -> Result<TruncatedSeries, EvalError> {
        (self.alpha)(n, env, order)
    }

    pub fn beta(&self, n: u32, env: &ParamEnv, order: usize) -> Result<TruncatedSeries, EvalError> {
        (self.beta)(n, env, order)
    }
}

impl std::fmt::Debug for WpPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WpPair({})", self.name)
    }
}

/// Look up a builtin pair by its registry name.
pub fn pair_by_name(name: &str) -> Option<Arc<WpPair>> {
    builtin_pairs().into_iter().find(|p| p.name == name)
}

// ---------------------------------------------------------------------------
// Adaptive working order
// ---------------------------------------------------------------------------

/// Run `f` at `base + slack`, growing the slack when the computation reports
/// insufficient precision. Laurent intermediates (negative `p`-powers inside
/// pair terms) consume reliable order; everything else passes through on the
/// first attempt.
pub fn with_working_order<T>(
    base: usize,
    init_slack: usize,
    mut f: impl FnMut(usize) -> Result<T, EvalError>,
) -> Result<T, EvalError> {
    let mut slack = init_slack;
    for _ in 0..5 {
        match f(base + slack) {
            Err(EvalError::Series(SeriesError::IncompletePrecision { needed, have })) => {
                let deficit = (needed - have).max(1) as usize;
                slack = slack + deficit + slack.max(8);
            }
            other => return other,
        }
    }
    f(base + slack)
}

// ---------------------------------------------------------------------------
// The defining relation
// ---------------------------------------------------------------------------

/// One row of a relation check: index n and the first mismatch, if any.
#[derive(Clone, Debug)]
pub struct PairCheck {
    pub n: u32,
    pub mismatch: Option<(i64, String, String)>,
}

#[derive(Clone, Debug)]
pub struct PairRelationReport {
    pub pair: String,
    pub order: usize,
    pub checks: Vec<PairCheck>,
}

impl PairRelationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.mismatch.is_none())
    }

    pub fn first_mismatch(&self) -> Option<(u32, i64)> {
        self.checks
            .iter()
            .find_map(|c| c.mismatch.as_ref().map(|(i, _, _)| (c.n, *i)))
    }
}

/// The right side of the WP relation at index n:
/// `sum_j (k/a)_{n-j} (k)_{n+j} / [(q)_{n-j} (aq)_{n+j}] alpha_j`.
pub fn wp_relation_sum(
    alphas: &[TruncatedSeries],
    env: &ParamEnv,
    n: u32,
    order: usize,
) -> Result<TruncatedSeries, EvalError> {
    let a = env.mon("a")?;
    let k = env.mon("k")?;
    let k_over_a = k.div(&a)?;
    let aq = a.mul(&MonomialExpr::q_pow(1));
    let mut acc = TruncatedSeries::zero(order);
    for j in 0..=n {
        let mut t = alphas[j as usize].clone();
        t = t.mul(&qkernel::poch_finite(&k_over_a, BASE_Q, n - j, order)?)?;
        t = t.mul(&qkernel::poch_finite(&k, BASE_Q, n + j, order)?)?;
        t = div_poch(t, &MonomialExpr::q_pow(1), BASE_Q, n - j)?;
        t = div_poch(t, &aq, BASE_Q, n + j)?;
        acc = acc.add(&t)?;
    }
    Ok(acc)
}

/// Divide by `(x; base)_m`, factor by factor.
pub fn div_poch(
    mut s: TruncatedSeries,
    x: &MonomialExpr,
    base: PochBase,
    m: u32,
) -> Result<TruncatedSeries, EvalError> {
    if x.is_zero() {
        return Ok(s);
    }
    for j in 0..m as i64 {
        let e = x.exp + j * base.step as i64;
        if e > s.order() as i64 {
            break;
        }
        s = qkernel::div_factor(s, &x.coeff, e)?;
    }
    Ok(s)
}

/// Verify the defining relation for `n <= n_max` at the given order.
pub fn verify_wp_relation(
    pair: &WpPair,
    env: &ParamEnv,
    n_max: u32,
    order: usize,
) -> Result<PairRelationReport, EvalError> {
    pair.check_constraint(env)?;
    with_working_order(order, 0, |work| {
        let mut alphas = Vec::with_capacity(n_max as usize + 1);
        for j in 0..=n_max {
            alphas.push(pair.alpha(j, env, work)?);
        }
        let mut checks = Vec::with_capacity(n_max as usize + 1);
        for n in 0..=n_max {
            let beta = pair.beta(n, env, work)?;
            let rhs = wp_relation_sum(&alphas, env, n, work)?;
            let mismatch = beta
                .first_mismatch(&rhs, order as i64)
                .map_err(EvalError::from)?
                .map(|(i, l, r)| (i, l.to_string(), r.to_string()));
            checks.push(PairCheck { n, mismatch });
        }
        Ok(PairRelationReport {
            pair: pair.name.clone(),
            order,
            checks,
        })
    })
}

// ---------------------------------------------------------------------------
// Andrews' two constructions
// ---------------------------------------------------------------------------

fn rebind_k(env: &ParamEnv, new_k: &MonomialExpr) -> Result<ParamEnv, EvalError> {
    let mut e2 = env.clone();
    e2.set("k", new_k.materialize()?);
    Ok(e2)
}

/// First construction: from `(alpha, beta)` at `(a, c)` with
/// `c = k*rho1*rho2/(aq)`, build
///
/// ```text
/// alpha'_n = (rho1, rho2)_n / (aq/rho1, aq/rho2)_n (k/c)^n alpha_n(a, c)
/// beta'_n  = (k rho1/a, k rho2/a)_n / (aq/rho1, aq/rho2)_n
///            * sum_j (1 - c q^{2j}) (rho1, rho2)_j (k/c)_{n-j} (k)_{n+j}
///                    / [(1 - c) (k rho1/a, k rho2/a)_n (q)_{n-j} (qc)_{n+j}]
///              * (k/c)^j beta_j(a, c)
/// ```
///
/// The derived pair reads `rho1`, `rho2` from the environment in addition to
/// the source pair's symbols.
pub fn construct_andrews_1(source: &Arc<WpPair>) -> Arc<WpPair> {
    let src_a = Arc::clone(source);
    let src_b = Arc::clone(source);
    let name = format!("andrews1({})", source.name);

    let alpha: SequenceFn = Arc::new(move |n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let (r1, r2) = (env.mon("rho1")?, env.mon("rho2")?);
        let aq = a.mul(&MonomialExpr::q_pow(1));
        let c = k.mul(&r1).mul(&r2).div(&aq)?;
        let inner = rebind_k(env, &c)?;
        let mut t = src_a.alpha(n, &inner, order)?;
        t = t.mul(&qkernel::poch_finite(&r1, BASE_Q, n, order)?)?;
        t = t.mul(&qkernel::poch_finite(&r2, BASE_Q, n, order)?)?;
        t = div_poch(t, &aq.div(&r1)?, BASE_Q, n)?;
        t = div_poch(t, &aq.div(&r2)?, BASE_Q, n)?;
        let w = k.div(&c)?.powi(n as i64)?;
        Ok(t.shift_scale(&w.coeff, w.exp)?)
    });

    let beta: SequenceFn = Arc::new(move |n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let (r1, r2) = (env.mon("rho1")?, env.mon("rho2")?);
        let aq = a.mul(&MonomialExpr::q_pow(1));
        let c = k.mul(&r1).mul(&r2).div(&aq)?;
        let inner = rebind_k(env, &c)?;
        let kr1a = k.mul(&r1).div(&a)?;
        let kr2a = k.mul(&r2).div(&a)?;
        let k_over_c = k.div(&c)?;
        let qc = c.mul(&MonomialExpr::q_pow(1));

        let mut sum = TruncatedSeries::zero(order);
        for j in 0..=n {
            let mut t = src_b.beta(j, &inner, order)?;
            // (1 - c q^{2j}) / (1 - c)
            t = qkernel::mul_factor(t, &c.coeff, c.exp + 4 * j as i64)?;
            t = qkernel::div_factor(t, &c.coeff, c.exp)?;
            t = t.mul(&qkernel::poch_finite(&r1, BASE_Q, j, order)?)?;
            t = t.mul(&qkernel::poch_finite(&r2, BASE_Q, j, order)?)?;
            t = t.mul(&qkernel::poch_finite(&k_over_c, BASE_Q, n - j, order)?)?;
            t = t.mul(&qkernel::poch_finite(&k, BASE_Q, n + j, order)?)?;
            t = div_poch(t, &kr1a, BASE_Q, n)?;
            t = div_poch(t, &kr2a, BASE_Q, n)?;
            t = div_poch(t, &MonomialExpr::q_pow(1), BASE_Q, n - j)?;
            t = div_poch(t, &qc, BASE_Q, n + j)?;
            let w = k_over_c.powi(j as i64)?;
            t = t.shift_scale(&w.coeff, w.exp)?;
            sum = sum.add(&t)?;
        }
        let mut out = sum;
        out = out.mul(&qkernel::poch_finite(&kr1a, BASE_Q, n, order)?)?;
        out = out.mul(&qkernel::poch_finite(&kr2a, BASE_Q, n, order)?)?;
        out = div_poch(out, &aq.div(&r1)?, BASE_Q, n)?;
        out = div_poch(out, &aq.div(&r2)?, BASE_Q, n)?;
        Ok(out)
    });

    Arc::new(WpPair::new(name, alpha, beta))
}

/// Second construction: from `(alpha, beta)` at `(a, qa^2/k)`, build
///
/// ```text
/// alpha~_n = (qa^2/k)_{2n} / (k)_{2n} (k^2/(qa^2))^n alpha_n(a, qa^2/k)
/// beta~_n  = sum_j (k^2/(qa^2))_{n-j} / (q)_{n-j} (k^2/(qa^2))^j beta_j(a, qa^2/k)
/// ```
pub fn construct_andrews_2(source: &Arc<WpPair>) -> Arc<WpPair> {
    let src_a = Arc::clone(source);
    let src_b = Arc::clone(source);
    let name = format!("andrews2({})", source.name);

    let alpha: SequenceFn = Arc::new(move |n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let qa2_k = a.mul(&a).mul(&MonomialExpr::q_pow(1)).div(&k)?;
        let ratio = k.mul(&k).div(&a.mul(&a).mul(&MonomialExpr::q_pow(1)))?;
        let inner = rebind_k(env, &qa2_k)?;
        let mut t = src_a.alpha(n, &inner, order)?;
        t = t.mul(&qkernel::poch_finite(&qa2_k, BASE_Q, 2 * n, order)?)?;
        t = div_poch(t, &k, BASE_Q, 2 * n)?;
        let w = ratio.powi(n as i64)?;
        Ok(t.shift_scale(&w.coeff, w.exp)?)
    });

    let beta: SequenceFn = Arc::new(move |n, env, order| {
        let (a, k) = (env.mon("a")?, env.mon("k")?);
        let qa2_k = a.mul(&a).mul(&MonomialExpr::q_pow(1)).div(&k)?;
        let ratio = k.mul(&k).div(&a.mul(&a).mul(&MonomialExpr::q_pow(1)))?;
        let inner = rebind_k(env, &qa2_k)?;
        let mut sum = TruncatedSeries::zero(order);
        for j in 0..=n {
            let mut t = src_b.beta(j, &inner, order)?;
            t = t.mul(&qkernel::poch_finite(&ratio, BASE_Q, n - j, order)?)?;
            t = div_poch(t, &MonomialExpr::q_pow(1), BASE_Q, n - j)?;
            let w = ratio.powi(j as i64)?;
            t = t.shift_scale(&w.coeff, w.exp)?;
            sum = sum.add(&t)?;
        }
        Ok(sum)
    });

    Arc::new(WpPair::new(name, alpha, beta))
}

// ---------------------------------------------------------------------------
// Shared evaluation helpers for pair formulas
// ---------------------------------------------------------------------------

/// Product `(nums; base)_n / (dens; base)_n`, applied factor-wise.
pub(crate) fn poch_ratio_finite(
    nums: &[MonomialExpr],
    dens: &[MonomialExpr],
    base: PochBase,
    n: u32,
    order: usize,
) -> Result<TruncatedSeries, EvalError> {
    let mut s = TruncatedSeries::one(order);
    for x in nums {
        s = s.mul(&qkernel::poch_finite(x, base, n, order)?)?;
    }
    for d in dens {
        s = div_poch(s, d, base, n)?;
    }
    Ok(s)
}

/// Apply the very-well-poised scalar `(1 - head*base^{2n}) / (1 - head)`.
pub(crate) fn wp_ratio(
    mut s: TruncatedSeries,
    head: &MonomialExpr,
    base: PochBase,
    n: u32,
) -> Result<TruncatedSeries, EvalError> {
    s = qkernel::mul_factor(s, &head.coeff, head.exp + 2 * base.step as i64 * n as i64)?;
    s = qkernel::div_factor(s, &head.coeff, head.exp)?;
    Ok(s)
}

/// Multiply by `m^n`.
pub(crate) fn apply_power(
    s: TruncatedSeries,
    m: &MonomialExpr,
    n: u32,
) -> Result<TruncatedSeries, EvalError> {
    let w = m.powi(n as i64)?;
    Ok(s.shift_scale(&w.coeff, w.exp)?)
}

pub(crate) fn neg_one_pow(s: TruncatedSeries, n: u32) -> TruncatedSeries {
    if n % 2 == 1 {
        s.scale(&GaussianRational::from_int(-1))
    } else {
        s
    }
}
