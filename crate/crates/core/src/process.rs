//! The random graph process against a fixed host `H`.
//!
//! A trace is a uniformly random ordering of all `N = n(n-1)/2` pairs; `G_m`
//! is the graph formed by the first `m` of them. Adding edges can only
//! destroy embeddings, so the embedding count of `G_m` into `H` is
//! non-increasing in `m` and the times with exactly one embedding form an
//! interval, which is located by two binary searches.

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::embed::{count_embeddings, CountOutcome};
use crate::error::{Error, Result};
use crate::graph::{pair_count, Graph, MAX_VERTICES};
use crate::numeric::{binomial, ratio};
use crate::rng::derive_seed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessTrace {
    n: usize,
    edge_order: Vec<(u8, u8)>,
    seed: Option<u64>,
}

/// All pairs `(u, v)`, `u < v`, ordered by `u` then `v`.
pub fn all_pairs(n: usize) -> Vec<(u8, u8)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u as u8, v as u8)))
        .collect()
}

pub fn sample_trace(n: usize, seed: u64) -> Result<ProcessTrace> {
    if n == 0 || n > MAX_VERTICES {
        return Err(Error::domain(format!("vertex count {n} outside 1..={MAX_VERTICES}")));
    }
    let mut order = all_pairs(n);
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok(ProcessTrace {
        n,
        edge_order: order,
        seed: Some(seed),
    })
}

impl ProcessTrace {
    /// A trace with a prescribed pair order, which must list every pair once.
    pub fn from_order(n: usize, order: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::domain(format!("vertex count {n} outside 1..={MAX_VERTICES}")));
        }
        let mut seen = vec![false; n * n];
        let mut edge_order = Vec::with_capacity(order.len());
        for (u, v) in order {
            let (a, b) = (u.min(v), u.max(v));
            if b >= n || a == b || seen[a * n + b] {
                return Err(Error::domain(format!("pair ({u},{v}) is invalid or repeated")));
            }
            seen[a * n + b] = true;
            edge_order.push((a as u8, b as u8));
        }
        if edge_order.len() != pair_count(n) {
            return Err(Error::domain(format!(
                "order lists {} pairs, expected {}",
                edge_order.len(),
                pair_count(n)
            )));
        }
        Ok(ProcessTrace {
            n,
            edge_order,
            seed: None,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// `N`, the number of steps.
    pub fn steps(&self) -> usize {
        self.edge_order.len()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn edge_order(&self) -> &[(u8, u8)] {
        &self.edge_order
    }

    /// `G_m`: the first `m` pairs of the order.
    pub fn graph_at(&self, m: usize) -> Graph {
        assert!(m <= self.steps(), "m = {m} beyond N = {}", self.steps());
        Graph::from_pair_prefix(self.n, &self.edge_order, m)
    }
}

fn check_host(trace: &ProcessTrace, h: &Graph) -> Result<()> {
    if h.order() != trace.order() {
        return Err(Error::domain(format!(
            "host has {} vertices, trace has {}",
            h.order(),
            trace.order()
        )));
    }
    Ok(())
}

/// Embedding counts of `G_m` into `h` at each probed `m`.
pub fn embedding_trajectory(
    trace: &ProcessTrace,
    h: &Graph,
    probes: &[usize],
    early_exit_at: Option<u64>,
) -> Result<BTreeMap<usize, CountOutcome>> {
    check_host(trace, h)?;
    if let Some(&bad) = probes.iter().find(|&&m| m > trace.steps()) {
        return Err(Error::domain(format!("probe m = {bad} beyond N = {}", trace.steps())));
    }
    Ok(probes
        .iter()
        .map(|&m| (m, count_embeddings(&trace.graph_at(m), h, early_exit_at)))
        .collect())
}

/// True when the probed counts never increase with `m`. Truncated counts
/// compare by their lower bound.
pub fn is_non_increasing(trajectory: &BTreeMap<usize, CountOutcome>) -> bool {
    let bounds: Vec<_> = trajectory.values().map(CountOutcome::lower_bound).collect();
    bounds.windows(2).all(|w| w[0] >= w[1])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum UniquenessInterval {
    Empty,
    Range { lo: usize, hi: usize },
}

impl UniquenessInterval {
    pub fn len(&self) -> usize {
        match *self {
            UniquenessInterval::Empty => 0,
            UniquenessInterval::Range { lo, hi } => hi - lo + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, UniquenessInterval::Empty)
    }

    pub fn contains(&self, m: usize) -> bool {
        matches!(*self, UniquenessInterval::Range { lo, hi } if lo <= m && m <= hi)
    }

    /// Size of the intersection with the integer range `[a, b]`.
    pub fn overlap(&self, a: usize, b: usize) -> usize {
        match *self {
            UniquenessInterval::Range { lo, hi } if lo.max(a) <= hi.min(b) => hi.min(b) - lo.max(a) + 1,
            _ => 0,
        }
    }
}

/// Interval plus the counts that were evaluated to find and check it.
#[derive(Clone, Debug)]
pub struct IntervalSearch {
    pub interval: UniquenessInterval,
    pub probes: BTreeMap<usize, CountOutcome>,
    /// Counts at `lo - 1`, `lo`, `hi`, `hi + 1` agree with the interval.
    pub verified: bool,
}

/// First `m` in `0..=N` where `pred` holds, for a predicate that is false
/// then true; `N + 1` when it never holds.
fn first_true(steps: usize, mut pred: impl FnMut(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0usize, steps + 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

pub fn uniqueness_interval_probed(trace: &ProcessTrace, h: &Graph) -> Result<IntervalSearch> {
    check_host(trace, h)?;
    let steps = trace.steps();
    let mut probes = BTreeMap::new();
    let class_at = |m: usize, probes: &mut BTreeMap<usize, CountOutcome>| -> u8 {
        probes
            .entry(m)
            .or_insert_with(|| count_embeddings(&trace.graph_at(m), h, Some(2)))
            .class()
    };
    // classes run 2..2 1..1 0..0 with any block possibly empty
    let lo = first_true(steps, |m| class_at(m, &mut probes) <= 1);
    let zero_from = first_true(steps, |m| class_at(m, &mut probes) == 0);
    let interval = if lo < zero_from {
        UniquenessInterval::Range { lo, hi: zero_from - 1 }
    } else {
        UniquenessInterval::Empty
    };

    let mut verified = true;
    if let UniquenessInterval::Range { lo, hi } = interval {
        verified &= class_at(lo, &mut probes) == 1 && class_at(hi, &mut probes) == 1;
        if lo > 0 {
            verified &= class_at(lo - 1, &mut probes) == 2;
        }
        if hi < steps {
            verified &= class_at(hi + 1, &mut probes) == 0;
        }
    } else if lo <= steps {
        verified &= class_at(lo, &mut probes) == 0;
        if lo > 0 {
            verified &= class_at(lo - 1, &mut probes) == 2;
        }
    }
    Ok(IntervalSearch {
        interval,
        probes,
        verified,
    })
}

pub fn uniqueness_interval(trace: &ProcessTrace, h: &Graph) -> Result<UniquenessInterval> {
    Ok(uniqueness_interval_probed(trace, h)?.interval)
}

/// Count class (0, 1, or 2 for "two or more") at every `m = 0..=N`.
pub fn scan_classes(trace: &ProcessTrace, h: &Graph) -> Result<Vec<u8>> {
    check_host(trace, h)?;
    Ok((0..=trace.steps())
        .map(|m| count_embeddings(&trace.graph_at(m), h, Some(2)).class())
        .collect())
}

/// Interval read off a full scan; `None` when the `One` times are not
/// contiguous.
pub fn interval_from_scan(classes: &[u8]) -> Option<UniquenessInterval> {
    let ones: Vec<usize> = (0..classes.len()).filter(|&m| classes[m] == 1).collect();
    match (ones.first(), ones.last()) {
        (None, _) => Some(UniquenessInterval::Empty),
        (Some(&lo), Some(&hi)) => (hi - lo + 1 == ones.len()).then_some(UniquenessInterval::Range { lo, hi }),
        _ => unreachable!(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct XStatistic {
    #[serde(rename = "L")]
    pub l: f64,
    /// `I` after clipping to `[0, N]`; `None` when it holds no integer.
    pub window: Option<(usize, usize)>,
    /// Number of `m` in the window with exactly one embedding.
    pub x: usize,
}

/// Integer points of `[N/2 - L n, N/2 + L n]` clipped to `[0, N]`.
pub fn x_window(n: usize, l: f64) -> Result<Option<(usize, usize)>> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::domain(format!("L must be positive and finite, got {l}")));
    }
    let steps = pair_count(n) as f64;
    let lo = (steps / 2.0 - l * n as f64).ceil().max(0.0);
    let hi = (steps / 2.0 + l * n as f64).floor().min(steps);
    Ok((lo <= hi).then_some((lo as usize, hi as usize)))
}

pub fn x_statistic(trace: &ProcessTrace, h: &Graph, l: f64) -> Result<XStatistic> {
    let window = x_window(trace.order(), l)?;
    let interval = uniqueness_interval(trace, h)?;
    let x = window.map_or(0, |(a, b)| interval.overlap(a, b));
    Ok(XStatistic { l, window, x })
}

/// `X` counted directly from a full scan of classes.
pub fn x_statistic_scan(classes: &[u8], n: usize, l: f64) -> Result<usize> {
    Ok(match x_window(n, l)? {
        None => 0,
        Some((a, b)) => (a..=b).filter(|&m| classes[m] == 1).count(),
    })
}

/// `C(e_H - m*, m2 - m*) / C(N - m*, m2 - m*)`: given `G_{m*}`, the chance
/// that the next `m2 - m*` pairs all land in a fixed `e_H`-set containing it.
pub fn supergraph_completion_prob(e_h: usize, total: usize, m_star: usize, m2: usize) -> Result<BigRational> {
    if !(m_star <= m2 && m2 <= total && m_star <= e_h && e_h <= total) {
        return Err(Error::domain(format!(
            "need m* <= m2 <= N and m* <= e_H <= N, got e_H={e_h}, N={total}, m*={m_star}, m2={m2}"
        )));
    }
    let steps = m2 - m_star;
    Ok(ratio(
        binomial(e_h - m_star, steps),
        binomial(total - m_star, steps),
    ))
}

/// Simulated conditional frequency behind [`supergraph_completion_prob`].
#[derive(Clone, Debug, Serialize)]
pub struct CompletionSimulation {
    pub n: usize,
    pub e_h: usize,
    pub m_star: usize,
    pub m2: usize,
    /// Traces with `G_{m*}` equal to the fixed start graph.
    pub conditioned: u64,
    /// Of those, traces with `G_{m2}` inside the host.
    pub completed: u64,
    pub attempts: u64,
    pub seed: u64,
}

impl CompletionSimulation {
    pub fn frequency(&self) -> f64 {
        self.completed as f64 / self.conditioned as f64
    }
}

/// Runs whole traces on `n` vertices and keeps those whose first `m*` pairs
/// are exactly the first `m*` pairs of the host edge set (the first `e_H`
/// pairs in [`all_pairs`] order). Trace `i` is seeded with
/// `derive_seed(seed, i)`; traces are consumed in index order until
/// `conditioned` of them are kept.
pub fn simulate_completion(
    n: usize,
    e_h: usize,
    m_star: usize,
    m2: usize,
    conditioned: u64,
    seed: u64,
) -> Result<CompletionSimulation> {
    let total = pair_count(n);
    supergraph_completion_prob(e_h, total, m_star, m2)?;
    if conditioned == 0 {
        return Err(Error::domain("need at least one conditioned trace"));
    }
    let pairs = all_pairs(n);
    let index_of = |p: (u8, u8)| pairs.iter().position(|&q| q == p).expect("valid pair");

    const BATCH: u64 = 1 << 16;
    let (mut kept, mut completed, mut next) = (0u64, 0u64, 0u64);
    while kept < conditioned {
        // (is the start graph, lands in host)
        let outcomes: Vec<(bool, bool)> = (next..next + BATCH)
            .into_par_iter()
            .map(|i| {
                let trace = sample_trace(n, derive_seed(seed, i)).expect("valid order");
                let order = trace.edge_order();
                let start_ok = order[..m_star].iter().all(|&p| index_of(p) < m_star);
                let lands = start_ok && order[m_star..m2].iter().all(|&p| index_of(p) < e_h);
                (start_ok, lands)
            })
            .collect();
        for (k, (start_ok, lands)) in outcomes.into_iter().enumerate() {
            if start_ok {
                kept += 1;
                completed += lands as u64;
                if kept == conditioned {
                    next += k as u64 + 1;
                    return Ok(CompletionSimulation {
                        n,
                        e_h,
                        m_star,
                        m2,
                        conditioned: kept,
                        completed,
                        attempts: next,
                        seed,
                    });
                }
            }
        }
        next += BATCH;
    }
    unreachable!("loop returns once enough traces are kept")
}
