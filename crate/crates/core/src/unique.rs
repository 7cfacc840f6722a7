//! Unique-subgraph density `f(H)`, its exact maximum over small hosts, and a
//! Monte-Carlo estimate of `Pr[G →* H]` for `G ~ G(n, 1/2)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::embed::{count_embeddings, is_unique_subgraph_with_aut};
use crate::enumerate::{enumerate_levels, polya_estimate, UnlabelledClass, MAX_ENUMERATE_N};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6::emit_graph6;
use crate::numeric::ratio_to_f64;
use crate::rng::{sample_gnp_half, trial_rng};
use crate::stats::clopper_pearson;

/// Largest host order for the all-sizes universe without the override flag.
pub const MAX_F_ALL_SIZES_N: usize = 7;
/// Largest host order scanned by [`f_max_exact`].
pub const MAX_F_MAX_N: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Universe {
    /// Every graph on 1..=n vertices.
    #[default]
    AllSizes,
    /// Graphs on exactly n vertices.
    SpanningOnly,
}

impl Universe {
    pub fn name(self) -> &'static str {
        match self {
            Universe::AllSizes => "all-sizes",
            Universe::SpanningOnly => "spanning-only",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FValue {
    pub h_g6: String,
    pub universe: Universe,
    /// Isomorphism classes `G` in the universe with `G ⊆* H`.
    pub count: u64,
    /// `2^(n choose 2) / n!`, exact.
    pub denominator_exact: String,
    pub denominator: f64,
    pub f_exact: String,
    pub f: f64,
    #[serde(skip)]
    pub f_ratio: BigRational,
}

fn f_value(h: &Graph, universe: Universe, count: u64) -> FValue {
    let denom = polya_estimate(h.order());
    let f = BigRational::from_integer(BigInt::from(count)) / &denom;
    FValue {
        h_g6: emit_graph6(h),
        universe,
        count,
        denominator_exact: denom.to_string(),
        denominator: ratio_to_f64(&denom),
        f_exact: f.to_string(),
        f: ratio_to_f64(&f),
        f_ratio: f,
    }
}

fn count_unique(h: &Graph, universe: Universe, levels: &[Vec<UnlabelledClass>]) -> u64 {
    let n = h.order();
    let sizes = match universe {
        Universe::AllSizes => 1..=n,
        Universe::SpanningOnly => n..=n,
    };
    sizes
        .flat_map(|k| levels[k - 1].iter())
        .filter(|c| is_unique_subgraph_with_aut(&c.graph, c.aut_order, h))
        .count() as u64
}

/// `f(H)` against precomputed class lists (`levels[k-1]` = classes on `k`
/// vertices, at least up to `|V(H)|`).
pub fn f_of_h_with(h: &Graph, universe: Universe, levels: &[Vec<UnlabelledClass>]) -> FValue {
    assert!(levels.len() >= h.order(), "class lists must cover the host order");
    f_value(h, universe, count_unique(h, universe, levels))
}

pub fn f_of_h(h: &Graph, universe: Universe, allow_large: bool) -> Result<FValue> {
    let n = h.order();
    if n > MAX_ENUMERATE_N {
        return Err(Error::Resource {
            what: "f(H) host order",
            limit: MAX_ENUMERATE_N,
            requested: n,
        });
    }
    if universe == Universe::AllSizes && n > MAX_F_ALL_SIZES_N && !allow_large {
        return Err(Error::Resource {
            what: "f(H) all-sizes host order",
            limit: MAX_F_ALL_SIZES_N,
            requested: n,
        });
    }
    let levels = enumerate_levels(n)?;
    Ok(f_of_h_with(h, universe, &levels))
}

/// Every host class on `n` vertices with its `f`, plus the maximiser.
#[derive(Clone, Debug, Serialize)]
pub struct FTable {
    pub n: usize,
    pub universe: Universe,
    pub entries: Vec<FValue>,
    pub max: FValue,
}

/// Maximum of `f` over one host per isomorphism class. Ties go to the host
/// with the smallest canonical encoding; hosts are scanned in that order.
pub fn f_max_exact(n: usize, universe: Universe) -> Result<FTable> {
    if n == 0 || n > MAX_F_MAX_N {
        return Err(Error::domain(format!(
            "f_max_exact supports 1 <= n <= {MAX_F_MAX_N}, got {n}"
        )));
    }
    let levels = enumerate_levels(n)?;
    let hosts = &levels[n - 1];
    let entries: Vec<FValue> = hosts
        .par_iter()
        .map(|c| f_of_h_with(&c.graph, universe, &levels))
        .collect();
    let max = entries
        .iter()
        .fold(None::<&FValue>, |best, e| match best {
            Some(b) if b.count >= e.count => Some(b),
            _ => Some(e),
        })
        .expect("at least one host")
        .clone();
    Ok(FTable {
        n,
        universe,
        entries,
        max,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub h_g6: String,
    pub trials: u64,
    pub successes: u64,
    pub seed: u64,
    pub estimate: f64,
    pub confidence: f64,
    pub ci: (f64, f64),
}

pub const ESTIMATE_CONFIDENCE: f64 = 0.99;

/// Fraction of `G ~ G(n, 1/2)` samples with exactly one embedding into `h`.
/// Trial `i` uses stream `i` of `seed`, so the result is independent of the
/// thread count.
pub fn estimate_unique_prob(h: &Graph, trials: u64, seed: u64) -> Result<EstimateReport> {
    if trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    let n = h.order();
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let g = sample_gnp_half(n, &mut trial_rng(seed, i));
            count_embeddings(&g, h, Some(2)).is_one() as u64
        })
        .sum();
    Ok(EstimateReport {
        h_g6: emit_graph6(h),
        trials,
        successes,
        seed,
        estimate: successes as f64 / trials as f64,
        confidence: ESTIMATE_CONFIDENCE,
        ci: clopper_pearson(successes, trials, ESTIMATE_CONFIDENCE),
    })
}
