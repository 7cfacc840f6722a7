//! Closed-form probability bounds, evaluated exactly where the value is
//! rational and with 200-bit floats otherwise.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::pair_count;
use crate::numeric::{
    binomial, factorial, hp_from_int, hp_from_ratio, hp_to_f64, hp_to_string, pow2, ratio, ratio_from_f64, ratio_to_f64,
    Hp,
};

/// Host orders accepted by [`chernoff_l`]; the tail is summed term by term.
pub const MAX_CHERNOFF_N: usize = 200;

/// Values of `N` at which the exact central binomial mass exceeds
/// `1/sqrt(N)`. The central mass is below `sqrt(2/(pi N))` for every `N`,
/// so the table is empty; the acceptance grid checks that claim.
pub const POINT_MASS_EXCEPTIONS: &[u64] = &[];

/// One evaluated bound. `exact_value` is the quantity the bound controls,
/// when there is one; `slack = bound - exact`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub inputs: BTreeMap<String, Value>,
    pub exact_value: Option<String>,
    pub exact: Option<f64>,
    pub bound_value: String,
    pub bound: f64,
    pub slack: Option<String>,
    pub holds: Option<bool>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

fn inputs(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn report(name: &str, inputs: BTreeMap<String, Value>, exact: Option<Hp>, bound: Hp) -> BoundReport {
    let slack = exact.as_ref().map(|e| &bound - e);
    BoundReport {
        name: name.to_string(),
        inputs,
        exact_value: exact.as_ref().map(hp_to_string),
        exact: exact.as_ref().map(hp_to_f64),
        bound_value: hp_to_string(&bound),
        bound: hp_to_f64(&bound),
        holds: slack.as_ref().map(|s| *s >= Hp::ZERO),
        slack: slack.as_ref().map(hp_to_string),
        extra: BTreeMap::new(),
    }
}

fn hp(r: &BigRational) -> Hp {
    hp_from_ratio(r)
}

fn hp_int(x: impl Into<BigInt>) -> Hp {
    hp_from_int(&x.into())
}

fn check_probability_like(name: &str, x: f64) -> Result<()> {
    if !(x.is_finite() && x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!("{name} must lie in (0, 1), got {x}")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct PointMass {
    pub big_n: u64,
    /// `max_t Pr[Bin(N, 1/2) = t] = C(N, floor(N/2)) / 2^N`.
    pub exact: BigRational,
    /// `exact <= 1/sqrt(N)`, decided as `exact^2 * N <= 1`.
    pub holds: bool,
}

pub fn binomial_point_mass_max(big_n: u64) -> Result<PointMass> {
    if big_n == 0 {
        return Err(Error::domain("N must be at least 1"));
    }
    let n = big_n as usize;
    let exact = BigRational::new(binomial(n, n / 2).into(), pow2(n).into());
    let holds = &exact * &exact * BigRational::from_integer(big_n.into()) <= BigRational::one();
    Ok(PointMass { big_n, exact, holds })
}

pub fn point_mass_report(big_n: u64) -> Result<BoundReport> {
    let pm = binomial_point_mass_max(big_n)?;
    let bound = hp_int(1u32) / hp_int(big_n).sqrt();
    let mut r = report(
        "point-mass",
        inputs(&[("N", json!(big_n))]),
        Some(hp(&pm.exact)),
        bound,
    );
    r.holds = Some(pm.holds);
    r.extra.insert("exact_fraction".into(), json!(pm.exact.to_string()));
    Ok(r)
}

// ---------------------------------------------------------------------------

/// `Pr[|e(G) - N/2| >= l * n]` for `G ~ G(n, 1/2)`, `N = n(n-1)/2`.
pub fn chernoff_tail(n: usize, l: u64) -> BigRational {
    let big_n = pair_count(n);
    let tails = CentralTails::new(big_n);
    tails.at(l as u128 * n as u128)
}

struct CentralTails {
    big_n: usize,
    /// `prefix[t] = sum_{s <= t} C(N, s)` for `t <= N/2`.
    prefix: Vec<BigUint>,
}

impl CentralTails {
    fn new(big_n: usize) -> Self {
        let mut prefix = Vec::with_capacity(big_n / 2 + 1);
        let mut c = BigUint::one();
        let mut acc = BigUint::zero();
        for t in 0..=big_n / 2 {
            if t > 0 {
                c = c * BigUint::from(big_n - t + 1) / BigUint::from(t);
            }
            acc += &c;
            prefix.push(acc.clone());
        }
        CentralTails { big_n, prefix }
    }

    /// `Pr[|X - N/2| >= d]` for `X ~ Bin(N, 1/2)`.
    fn at(&self, d: u128) -> BigRational {
        let total = pow2(self.big_n);
        if d == 0 {
            return BigRational::one();
        }
        let twice = 2 * d;
        if twice > self.big_n as u128 {
            return BigRational::zero();
        }
        // lower tail: 2t <= N - 2d; the upper tail mirrors it
        let t_max = (self.big_n as u128 - twice) / 2;
        let lower = &self.prefix[t_max as usize];
        BigRational::new((lower * 2u32).into(), total.into())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChernoffL {
    pub n: usize,
    pub l: u64,
    /// Exact tail at `l`, which is `<= delta/4`.
    pub tail: BigRational,
    /// Exact tail at `l - 1`, which is `> delta/4`.
    pub tail_below: BigRational,
    pub target: BigRational,
}

/// Smallest integer `L` with `Pr[|e(G) - N/2| >= L n] <= delta/4`.
pub fn chernoff_l(delta: f64, n: usize) -> Result<ChernoffL> {
    check_probability_like("delta", delta)?;
    if n == 0 || n > MAX_CHERNOFF_N {
        return Err(Error::domain(format!("chernoff_L supports 1 <= n <= {MAX_CHERNOFF_N}, got {n}")));
    }
    let target = ratio_from_f64(delta) / BigRational::from_integer(4.into());
    let tails = CentralTails::new(pair_count(n));
    let mut below = tails.at(0);
    let mut l = 1u64;
    loop {
        let tail = tails.at(l as u128 * n as u128);
        if tail <= target {
            return Ok(ChernoffL {
                n,
                l,
                tail,
                tail_below: below,
                target,
            });
        }
        below = tail;
        l += 1;
    }
}

pub fn chernoff_report(delta: f64, n: usize) -> Result<BoundReport> {
    let c = chernoff_l(delta, n)?;
    let mut r = report(
        "chernoff-l",
        inputs(&[("delta", json!(delta)), ("n", json!(n))]),
        Some(hp(&c.tail)),
        hp(&c.target),
    );
    r.extra.insert("L".into(), json!(c.l));
    r.extra.insert("tail_exact".into(), json!(c.tail.to_string()));
    r.extra.insert("tail_below".into(), json!(hp_to_string(&hp(&c.tail_below))));
    Ok(r)
}

// ---------------------------------------------------------------------------

/// `exp(-2 t^2 / sum b_i^2)`; `1` at `t = 0` and `0` when every `b_i` is
/// zero and `t > 0`.
pub fn azuma_tail(t: f64, b: &[f64]) -> Result<Hp> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain(format!("t must be a non-negative number, got {t}")));
    }
    if let Some(bad) = b.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::domain(format!("b entries must be non-negative numbers, got {bad}")));
    }
    let sum_sq: BigRational = b.iter().map(|&x| ratio_from_f64(x)).map(|x| &x * &x).sum();
    azuma_tail_exact(&ratio_from_f64(t), &sum_sq)
}

pub fn azuma_tail_exact(t: &BigRational, sum_b_squared: &BigRational) -> Result<Hp> {
    if t.is_negative() || sum_b_squared.is_negative() {
        return Err(Error::domain("t and sum of b^2 must be non-negative"));
    }
    if t.is_zero() {
        return Ok(hp_int(1u32));
    }
    if sum_b_squared.is_zero() {
        return Ok(hp_int(0u32));
    }
    let exponent = -(t * t * BigRational::from_integer(2.into())) / sum_b_squared;
    Ok(hp(&exponent).exp())
}

pub fn azuma_report(t: f64, b: &[f64]) -> Result<BoundReport> {
    let bound = azuma_tail(t, b)?;
    Ok(report("azuma", inputs(&[("t", json!(t)), ("b", json!(b))]), None, bound))
}

// ---------------------------------------------------------------------------

/// Mean number of embeddings of `G ~ G(n, 1/2)` into a host with `e_h`
/// edges: `n! * 2^(e_h - N)`.
pub fn expected_embeddings(n: usize, e_h: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let big_n = pair_count(n);
    if e_h > big_n {
        return Err(Error::domain(format!("e_H = {e_h} exceeds N = {big_n}")));
    }
    Ok(BigRational::new(factorial(n).into(), pow2(big_n - e_h).into()))
}

pub fn expected_embeddings_report(n: usize, e_h: usize) -> Result<BoundReport> {
    let v = expected_embeddings(n, e_h)?;
    let mut r = report("expected-embeddings", inputs(&[("n", json!(n)), ("e_H", json!(e_h))]), None, hp(&v));
    r.extra.insert("value_exact".into(), json!(v.to_string()));
    Ok(r)
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct DensityDecay {
    /// `(e_H / N)^steps`.
    pub coarse: BigRational,
    /// `((e_H - m*) / (N - m*))^steps`.
    pub sharp: BigRational,
}

pub fn density_decay_bound(e_h: usize, big_n: usize, steps: usize, m_star: usize) -> Result<DensityDecay> {
    if big_n == 0 || e_h > big_n {
        return Err(Error::domain(format!("need 0 <= e_H <= N and N >= 1, got e_H = {e_h}, N = {big_n}")));
    }
    if m_star > e_h {
        return Err(Error::domain(format!("m* = {m_star} exceeds e_H = {e_h}")));
    }
    let base = |num: usize, den: usize| if den == 0 { BigRational::one() } else { ratio(num, den) };
    let pow = |r: BigRational| num_traits::pow(r, steps);
    Ok(DensityDecay {
        coarse: pow(ratio(e_h, big_n)),
        sharp: pow(base(e_h - m_star, big_n - m_star)),
    })
}

pub fn density_decay_report(e_h: usize, big_n: usize, steps: usize, m_star: usize) -> Result<BoundReport> {
    let d = density_decay_bound(e_h, big_n, steps, m_star)?;
    let completion = crate::process::supergraph_completion_prob(e_h, big_n, m_star, m_star + steps).ok();
    let mut r = report(
        "density-decay",
        inputs(&[
            ("e_H", json!(e_h)),
            ("N", json!(big_n)),
            ("steps", json!(steps)),
            ("m_star", json!(m_star)),
        ]),
        completion.as_ref().map(hp),
        hp(&d.sharp),
    );
    r.extra.insert("coarse_exact".into(), json!(d.coarse.to_string()));
    r.extra.insert("coarse".into(), json!(ratio_to_f64(&d.coarse)));
    r.extra.insert("sharp_exact".into(), json!(d.sharp.to_string()));
    if let Some(c) = completion {
        r.extra.insert("completion_exact".into(), json!(c.to_string()));
    }
    Ok(r)
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogBase {
    Natural,
    Other(f64),
}

impl LogBase {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "e" {
            return Ok(LogBase::Natural);
        }
        let b: f64 = s
            .parse()
            .map_err(|_| Error::domain(format!("log base must be 'e' or a number > 1, got {s:?}")))?;
        if !(b.is_finite() && b > 1.0) {
            return Err(Error::domain(format!("log base must exceed 1, got {b}")));
        }
        Ok(LogBase::Other(b))
    }

    pub fn label(self) -> String {
        match self {
            LogBase::Natural => "e".into(),
            LogBase::Other(b) => b.to_string(),
        }
    }
}

/// `n! * exp(-n log n)`. With the natural log this is exactly `n!/n^n`.
pub fn union_budget(n: usize, base: LogBase) -> Result<(Hp, Option<BigRational>)> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    match base {
        LogBase::Natural => {
            let exact = BigRational::new(factorial(n).into(), BigInt::from(n).pow(n as u32));
            Ok((hp(&exact), Some(exact)))
        }
        LogBase::Other(b) => {
            let ln_b = hp(&ratio_from_f64(b)).ln();
            let log_term = hp_int(n) * hp_int(n).ln() / ln_b;
            Ok((hp_int(factorial(n)) * (-log_term).exp(), None))
        }
    }
}

pub fn union_budget_report(n: usize, base: LogBase) -> Result<BoundReport> {
    let (v, exact) = union_budget(n, base)?;
    let mut r = report("union-budget", inputs(&[("n", json!(n)), ("base", json!(base.label()))]), None, v);
    if let Some(e) = exact {
        r.extra.insert("value_exact".into(), json!(e.to_string()));
    }
    Ok(r)
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct FinalInequality {
    /// `exp(-C n^2 delta / (17 N))`.
    pub lhs: Hp,
    /// `delta / (48 L)`.
    pub rhs: Hp,
    pub holds: bool,
}

/// Checks `exp(-C n^2 delta / (17 N)) < delta / (48 L)` for a given `C`.
pub fn final_inequality(c: f64, n: usize, delta: f64, l: u64) -> Result<FinalInequality> {
    check_probability_like("delta", delta)?;
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::domain(format!("C must be positive, got {c}")));
    }
    if n < 2 || l == 0 {
        return Err(Error::domain("need n >= 2 and L >= 1"));
    }
    let d = ratio_from_f64(delta);
    let nn = BigRational::from_integer(BigInt::from(n) * BigInt::from(n));
    let exponent = -(ratio_from_f64(c) * nn * &d) / ratio(17 * pair_count(n), 1);
    let lhs = hp(&exponent).exp();
    let rhs = hp(&(d / ratio(48 * l, 1)));
    let holds = lhs < rhs;
    Ok(FinalInequality { lhs, rhs, holds })
}

pub fn final_inequality_report(c: f64, n: usize, delta: f64, l: Option<u64>) -> Result<BoundReport> {
    let l = match l {
        Some(l) => l,
        None => chernoff_l(delta, n)?.l,
    };
    let f = final_inequality(c, n, delta, l)?;
    let mut r = report(
        "final",
        inputs(&[("C", json!(c)), ("n", json!(n)), ("delta", json!(delta)), ("L", json!(l))]),
        Some(f.lhs.clone()),
        f.rhs.clone(),
    );
    // strict inequality
    r.holds = Some(f.holds);
    Ok(r)
}
