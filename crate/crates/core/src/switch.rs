//! Switch analysis for a dense host, phrased through its complement `Hc`.
//!
//! Given a bijection `pi: V(Hc) -> V(G)`, an unordered pair `{u, v}` of
//! `G`-vertices is a switch when `v` is adjacent in `G` to the image of every
//! `Hc`-neighbour of `pi^-1(u)` that is not an `Hc`-neighbour of `pi^-1(v)`,
//! and symmetrically. The preimages themselves are left out of both
//! difference sets: if they are `Hc`-adjacent the edge `uv` is already
//! supplied by the embedding. If `pi` embeds `Hc` into `G`, exchanging the
//! roles of `u` and `v` yields a second embedding.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bit, Bits, Graph, VertexMap};

#[derive(Clone, Debug)]
pub struct SwitchContext {
    hc: Graph,
    g: Graph,
    pi: VertexMap,
}

impl SwitchContext {
    pub fn new(hc: Graph, g: Graph, pi: VertexMap) -> Result<Self> {
        check_bijection(&hc, &pi)?;
        if g.order() != hc.order() {
            return Err(Error::domain(format!(
                "Hc has {} vertices but G has {}",
                hc.order(),
                g.order()
            )));
        }
        Ok(SwitchContext { hc, g, pi })
    }

    pub fn hc(&self) -> &Graph {
        &self.hc
    }

    pub fn g(&self) -> &Graph {
        &self.g
    }

    pub fn pi(&self) -> &VertexMap {
        &self.pi
    }

    pub fn pi_is_embedding(&self) -> bool {
        self.pi.is_embedding(&self.hc, &self.g)
    }
}

fn check_bijection(hc: &Graph, pi: &VertexMap) -> Result<()> {
    if !pi.is_bijection() || pi.n_from() != hc.order() {
        return Err(Error::domain(format!(
            "pi must be a bijection on {} vertices",
            hc.order()
        )));
    }
    Ok(())
}

fn check_pair(n: usize, u: usize, v: usize) -> Result<()> {
    if u == v {
        return Err(Error::domain(format!("switch pair needs distinct vertices, got {u} twice")));
    }
    if u >= n || v >= n {
        return Err(Error::domain(format!("pair ({u},{v}) outside 0..{n}")));
    }
    Ok(())
}

/// `G`-neighbourhoods the pair must have: `(needed at v, needed at u)`.
fn required_sets(hc: &Graph, pi: &VertexMap, u: usize, v: usize) -> (u64, u64) {
    let a = pi.preimage(u).expect("bijection");
    let b = pi.preimage(v).expect("bijection");
    let skip = !(bit(a) | bit(b));
    let at_v = hc.neighbors(a) & !hc.neighbors(b) & skip;
    let at_u = hc.neighbors(b) & !hc.neighbors(a) & skip;
    (pi.apply_set(at_v), pi.apply_set(at_u))
}

/// The `G`-pairs whose presence a switch at `{u, v}` demands, as `(x, y)`
/// with `x < y`.
pub fn required_pairs(hc: &Graph, pi: &VertexMap, u: usize, v: usize) -> Result<Vec<(usize, usize)>> {
    check_bijection(hc, pi)?;
    check_pair(hc.order(), u, v)?;
    let (at_v, at_u) = required_sets(hc, pi, u, v);
    let mut pairs: Vec<(usize, usize)> = Bits(at_v)
        .map(|x| (v.min(x), v.max(x)))
        .chain(Bits(at_u).map(|x| (u.min(x), u.max(x))))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    Ok(pairs)
}

#[inline]
fn switch_holds(hc: &Graph, g: &Graph, pi: &VertexMap, u: usize, v: usize) -> bool {
    let (at_v, at_u) = required_sets(hc, pi, u, v);
    at_v & !g.neighbors(v) == 0 && at_u & !g.neighbors(u) == 0
}

pub fn is_pi_switch(ctx: &SwitchContext, u: usize, v: usize) -> Result<bool> {
    check_pair(ctx.g.order(), u, v)?;
    Ok(switch_holds(&ctx.hc, &ctx.g, &ctx.pi, u, v))
}

/// The bijection with the roles of `u` and `v` exchanged.
pub fn swapped(pi: &VertexMap, u: usize, v: usize) -> VertexMap {
    let a = pi.preimage(u).expect("bijection");
    let b = pi.preimage(v).expect("bijection");
    let mut image = pi.image().to_vec();
    image[a] = v;
    image[b] = u;
    VertexMap::new(pi.n_to(), image).expect("swap keeps a bijection")
}

pub fn apply_switch(ctx: &SwitchContext, u: usize, v: usize) -> Result<VertexMap> {
    if !is_pi_switch(ctx, u, v)? {
        return Err(Error::domain(format!("{{{u},{v}}} is not a pi-switch")));
    }
    if !ctx.pi_is_embedding() {
        return Err(Error::domain("pi is not an embedding of Hc into G"));
    }
    let next = swapped(&ctx.pi, u, v);
    if !next.is_embedding(&ctx.hc, &ctx.g) {
        return Err(Error::domain(format!(
            "switching {{{u},{v}}} did not produce an embedding"
        )));
    }
    Ok(next)
}

/// First switch in lexicographic pair order, optionally among the given
/// candidate pairs only.
pub fn find_switch(ctx: &SwitchContext, candidates: Option<&[(usize, usize)]>) -> Result<Option<(usize, usize)>> {
    let n = ctx.g.order();
    let mut pairs: Vec<(usize, usize)> = match candidates {
        Some(list) => {
            for &(u, v) in list {
                check_pair(n, u, v)?;
            }
            list.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect()
        }
        None => (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect(),
    };
    pairs.sort_unstable();
    Ok(pairs
        .into_iter()
        .find(|&(u, v)| switch_holds(&ctx.hc, &ctx.g, &ctx.pi, u, v)))
}

/// All pairs inside a vertex set, as candidates for [`find_switch`].
pub fn pairs_within(set: &[usize]) -> Vec<(usize, usize)> {
    let mut vs = set.to_vec();
    vs.sort_unstable();
    vs.dedup();
    vs.iter()
        .enumerate()
        .flat_map(|(i, &u)| vs[i + 1..].iter().map(move |&v| (u, v)))
        .collect()
}

/// Probability `2^-k` with `k` = number of demanded `G`-pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DyadicProb {
    pub neg_log2: u32,
}

impl DyadicProb {
    pub fn to_ratio(self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::one() << self.neg_log2)
    }

    pub fn to_f64(self) -> f64 {
        (-(self.neg_log2 as f64)).exp2()
    }
}

/// Probability over `G ~ G(n, 1/2)` that `{u, v}` is a `pi`-switch.
pub fn switch_probability(hc: &Graph, pi: &VertexMap, u: usize, v: usize) -> Result<DyadicProb> {
    Ok(DyadicProb {
        neg_log2: required_pairs(hc, pi, u, v)?.len() as u32,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeClassification {
    #[serde(rename = "C")]
    pub c: f64,
    /// Vertices with `Hc`-degree at least `4C`.
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// Greedy maximal `Hc`-independent subset of `b`, scanned by index.
    pub b_prime: Vec<usize>,
}

pub fn classify_degrees(hc: &Graph, c: f64) -> Result<DegreeClassification> {
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::domain(format!("C must be a non-negative number, got {c}")));
    }
    let (a, b): (Vec<usize>, Vec<usize>) = (0..hc.order()).partition(|&v| hc.degree(v) as f64 >= 4.0 * c);
    let mut chosen = 0u64;
    let mut b_prime = Vec::new();
    for &v in &b {
        if hc.neighbors(v) & chosen == 0 {
            chosen |= bit(v);
            b_prime.push(v);
        }
    }
    Ok(DegreeClassification { c, a, b, b_prime })
}

/// `thresholds[i] = |B'| / 2^(i+1)` for `i = 0..=floor(4C)`.
pub fn default_schedule(b_prime_len: usize, c: f64) -> Vec<f64> {
    let depth = (4.0 * c).floor() as usize + 1;
    (0..depth)
        .map(|i| b_prime_len as f64 / (1u64 << (i + 1).min(63)) as f64)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefineStatus {
    Fixpoint,
    /// Every threshold was used and a further refinement was still possible.
    DepthExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RefineStep {
    pub v: usize,
    pub threshold: f64,
    pub t_size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefinementResult {
    pub t: Vec<usize>,
    pub steps: Vec<RefineStep>,
    /// Number of refinements applied.
    pub depth: usize,
    /// Threshold in force when the fixpoint was reached.
    pub final_threshold: Option<f64>,
    pub status: RefineStatus,
}

/// Step `i` looks for the lowest-numbered `v` outside `T_i` with at least
/// `schedule[i]` neighbours in `T_i` but not all of them, and replaces `T_i`
/// by `N(v) ∩ T_i`; it stops at the first step where no such `v` exists.
pub fn refine_t(hc: &Graph, b_prime: &[usize], schedule: &[f64]) -> Result<RefinementResult> {
    if schedule.is_empty() {
        return Err(Error::domain("threshold schedule is empty"));
    }
    if let Some(bad) = schedule.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::domain(format!("thresholds must be non-negative, got {bad}")));
    }
    let n = hc.order();
    let mut t = 0u64;
    for &v in b_prime {
        if v >= n {
            return Err(Error::domain(format!("vertex {v} outside 0..{n}")));
        }
        t |= bit(v);
    }
    let mut steps = Vec::new();
    for (i, &threshold) in schedule.iter().enumerate() {
        let pick = (0..n).find(|&v| {
            let inside = hc.neighbors(v) & t;
            t & bit(v) == 0 && inside.count_ones() as f64 >= threshold && inside != t
        });
        match pick {
            None => {
                return Ok(RefinementResult {
                    t: Bits(t).collect(),
                    steps,
                    depth: i,
                    final_threshold: Some(threshold),
                    status: RefineStatus::Fixpoint,
                })
            }
            Some(v) => {
                t &= hc.neighbors(v);
                steps.push(RefineStep {
                    v,
                    threshold,
                    t_size: t.count_ones() as usize,
                });
            }
        }
    }
    Ok(RefinementResult {
        t: Bits(t).collect(),
        depth: steps.len(),
        steps,
        final_threshold: None,
        status: RefineStatus::DepthExceeded,
    })
}

/// Every vertex outside `t` sees all of `t` or fewer than `threshold` of it.
pub fn refinement_holds(hc: &Graph, t: &[usize], threshold: f64) -> bool {
    let set = t.iter().fold(0u64, |m, &v| m | bit(v));
    (0..hc.order())
        .filter(|&v| set & bit(v) == 0)
        .all(|v| {
            let inside = hc.neighbors(v) & set;
            inside == set || (inside.count_ones() as f64) < threshold
        })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfluenceBudget {
    /// `b` for every `G`-pair `(y, z)`, `y < z`, with `b > 0`.
    #[serde(serialize_with = "pair_map")]
    pub b: BTreeMap<(usize, usize), u64>,
    pub sum_b_squared: u64,
}

fn pair_map<S: serde::Serializer>(map: &BTreeMap<(usize, usize), u64>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(map.iter().map(|(&(y, z), &b)| (y, z, b)))
}

fn check_independent(hc: &Graph, t: &[usize]) -> Result<u64> {
    let mut set = 0u64;
    for &v in t {
        if v >= hc.order() {
            return Err(Error::domain(format!("vertex {v} outside 0..{}", hc.order())));
        }
        set |= bit(v);
    }
    if let Some(v) = Bits(set).find(|&v| hc.neighbors(v) & set != 0) {
        return Err(Error::domain(format!("T is not independent in Hc (vertex {v})")));
    }
    Ok(set)
}

/// For each `G`-pair, the number of switch indicators `X_{u,v}`
/// (`u, v` in `t`, which lives in `V(Hc)`) that depend on it.
///
/// Only pairs `{pi(u), pi(w)}` with `u` in `T`, `w` outside `T` and `uw` not
/// an `Hc`-edge can matter, and such a pair is demanded by `X_{u,v}` exactly
/// when `v` is an `Hc`-neighbour of `w`, so `b = |N(w) ∩ T|`.
pub fn edge_influence_budget(hc: &Graph, pi: &VertexMap, t: &[usize]) -> Result<InfluenceBudget> {
    check_bijection(hc, pi)?;
    let set = check_independent(hc, t)?;
    let mut b = BTreeMap::new();
    for u in Bits(set) {
        for w in Bits(hc.vertex_mask() & !set & !hc.neighbors(u)) {
            let d_w = (hc.neighbors(w) & set).count_ones() as u64;
            if d_w > 0 {
                let (y, z) = (pi.apply(u), pi.apply(w));
                b.insert((y.min(z), y.max(z)), d_w);
            }
        }
    }
    let sum_b_squared = b.values().map(|x| x * x).sum();
    Ok(InfluenceBudget { b, sum_b_squared })
}

/// Number of switches `{pi(u), pi(v)}` with `u, v` in `t`.
pub fn switch_count(hc: &Graph, g: &Graph, pi: &VertexMap, t: &[usize]) -> usize {
    let ts: Vec<usize> = t.iter().map(|&v| pi.apply(v)).collect();
    pairs_within(&ts)
        .into_iter()
        .filter(|&(u, v)| switch_holds(hc, g, pi, u, v))
        .count()
}

/// `E[S]` over `G ~ G(n, 1/2)` for the switch count on `t`.
pub fn expected_switch_count(hc: &Graph, pi: &VertexMap, t: &[usize]) -> Result<BigRational> {
    check_bijection(hc, pi)?;
    let ts: Vec<usize> = t.iter().map(|&v| pi.apply(v)).collect();
    let mut total = BigRational::zero();
    for (u, v) in pairs_within(&ts) {
        total += switch_probability(hc, pi, u, v)?.to_ratio();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(n: usize) -> VertexMap {
        VertexMap::identity(n)
    }

    #[test]
    fn twins_always_switch() {
        // 0 and 1 have the same Hc-neighbourhood {2}
        let hc = Graph::from_edges(4, [(0, 2), (1, 2)]).unwrap();
        let g = Graph::empty(4).unwrap();
        let ctx = SwitchContext::new(hc.clone(), g, id(4)).unwrap();
        assert!(is_pi_switch(&ctx, 0, 1).unwrap());
        assert_eq!(switch_probability(&hc, &id(4), 0, 1).unwrap().neg_log2, 0);
        assert!(is_pi_switch(&ctx, 0, 0).is_err());
        assert!(switch_probability(&hc, &id(4), 2, 2).is_err());
    }

    #[test]
    fn missing_required_pair_blocks_switch() {
        // Hc: edge 1-2 only. Pair {0,1}: 0 must take over 1's neighbour 2.
        let hc = Graph::from_edges(4, [(1, 2)]).unwrap();
        let g = Graph::complete(4).unwrap().without_edge(0, 2).unwrap();
        let ctx = SwitchContext::new(hc.clone(), g.clone(), id(4)).unwrap();
        assert!(!is_pi_switch(&ctx, 0, 1).unwrap());
        let with = SwitchContext::new(hc, g.with_edge(0, 2).unwrap(), id(4)).unwrap();
        assert!(is_pi_switch(&with, 0, 1).unwrap());
    }

    #[test]
    fn adjacent_preimages_are_not_self_demanded() {
        // Hc is the single edge 0-1; swapping 0 and 1 needs nothing else
        let hc = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(required_pairs(&hc, &id(3), 0, 1).unwrap().is_empty());
        let g = hc.clone();
        let ctx = SwitchContext::new(hc, g, id(3)).unwrap();
        let next = apply_switch(&ctx, 0, 1).unwrap();
        assert_eq!(next.image(), &[1, 0, 2]);
    }

    #[test]
    fn disjoint_neighbourhoods_multiply() {
        // a = 0 with Hc-neighbours {2,3}, b = 1 with {4}: 2^-(2+1)
        let hc = Graph::from_edges(6, [(0, 2), (0, 3), (1, 4)]).unwrap();
        assert_eq!(switch_probability(&hc, &id(6), 0, 1).unwrap().neg_log2, 3);
        assert_eq!(switch_probability(&hc, &id(6), 0, 1).unwrap().to_ratio(), crate::numeric::ratio(1, 8));
    }

    #[test]
    fn complete_g_switches_everywhere() {
        let hc = Graph::cycle(5).unwrap();
        let ctx = SwitchContext::new(hc, Graph::complete(5).unwrap(), VertexMap::new(5, vec![2, 4, 1, 0, 3]).unwrap()).unwrap();
        assert_eq!(find_switch(&ctx, None).unwrap(), Some((0, 1)));
        assert_eq!(find_switch(&ctx, Some(&[(3, 2), (1, 4)])).unwrap(), Some((1, 4)));
    }

    #[test]
    fn apply_switch_preconditions_and_involution() {
        let hc = Graph::path(5).unwrap();
        let g = Graph::complete(5).unwrap();
        let ctx = SwitchContext::new(hc.clone(), g.clone(), id(5)).unwrap();
        let once = apply_switch(&ctx, 1, 3).unwrap();
        assert_ne!(once, id(5));
        let ctx2 = SwitchContext::new(hc.clone(), g, once).unwrap();
        assert_eq!(apply_switch(&ctx2, 1, 3).unwrap(), id(5));

        let bad = SwitchContext::new(hc.clone(), Graph::empty(5).unwrap(), id(5)).unwrap();
        // 0 and 4 are both leaves; needs 4~1 and 0~3 in G
        assert!(apply_switch(&bad, 0, 4).is_err());
        // twins-free pair that is a switch but pi is not an embedding
        let hc2 = Graph::from_edges(5, [(0, 2), (1, 2)]).unwrap();
        let ctx3 = SwitchContext::new(hc2, Graph::empty(5).unwrap(), id(5)).unwrap();
        assert!(is_pi_switch(&ctx3, 0, 1).unwrap());
        assert!(apply_switch(&ctx3, 0, 1).unwrap_err().to_string().contains("not an embedding"));
    }

    #[test]
    fn degree_classes() {
        let empty = classify_degrees(&Graph::empty(6).unwrap(), 1.0).unwrap();
        assert!(empty.a.is_empty());
        assert_eq!(empty.b_prime, vec![0, 1, 2, 3, 4, 5]);
        let matching = Graph::from_edges(8, [(0, 1), (2, 3), (4, 5), (6, 7)]).unwrap();
        let cls = classify_degrees(&matching, 1.0).unwrap();
        assert!(cls.a.is_empty());
        assert_eq!(cls.b_prime, vec![0, 2, 4, 6]);
        let star = Graph::star(5).unwrap();
        let cls = classify_degrees(&star, 1.0).unwrap();
        assert_eq!(cls.a, vec![0]);
        assert_eq!(cls.b_prime, vec![1, 2, 3, 4, 5]);
        assert!(classify_degrees(&star, -1.0).is_err());
    }

    #[test]
    fn refine_examples() {
        let star = Graph::star(5).unwrap();
        let leaves = [1, 2, 3, 4, 5];
        let r = refine_t(&star, &leaves, &[2.0]).unwrap();
        assert_eq!(r.t, leaves);
        assert_eq!((r.depth, r.status), (0, RefineStatus::Fixpoint));
        assert!(refinement_holds(&star, &r.t, 2.0));

        // vertex 0 sees {3,4} of T = {3,4,5}; vertex 1 then sees {3} only
        let hc = Graph::from_edges(6, [(0, 3), (0, 4), (1, 3), (2, 5)]).unwrap();
        let r = refine_t(&hc, &[3, 4, 5], &[2.0, 1.0, 1.0]).unwrap();
        assert_eq!(r.steps[0].v, 0);
        assert_eq!(r.steps[1].v, 1);
        assert_eq!(r.t, vec![3]);
        assert_eq!(r.status, RefineStatus::Fixpoint);
        assert!(refinement_holds(&hc, &r.t, r.final_threshold.unwrap()));

        let cut = refine_t(&hc, &[3, 4, 5], &[2.0]).unwrap();
        assert_eq!(cut.status, RefineStatus::DepthExceeded);
        assert_eq!(cut.t, vec![3, 4]);

        assert!(refine_t(&hc, &[3], &[]).is_err());
        assert!(refine_t(&hc, &[3], &[-1.0]).is_err());
        assert_eq!(refine_t(&hc, &[], &default_schedule(0, 1.0)).unwrap().status, RefineStatus::Fixpoint);
    }

    #[test]
    fn default_schedule_halves() {
        assert_eq!(default_schedule(16, 1.0), vec![8.0, 4.0, 2.0, 1.0, 0.5]);
        assert_eq!(default_schedule(16, 0.0), vec![8.0]);
    }

    #[test]
    fn influence_cases() {
        let hc = Graph::empty(5).unwrap();
        let budget = edge_influence_budget(&hc, &id(5), &[0, 1, 2]).unwrap();
        assert!(budget.b.is_empty() && budget.sum_b_squared == 0);

        // T = {0,1,2}; w = 3 adjacent to 0 and 1; w = 4 adjacent to 2
        let hc = Graph::from_edges(5, [(3, 0), (3, 1), (4, 2)]).unwrap();
        let budget = edge_influence_budget(&hc, &id(5), &[0, 1, 2]).unwrap();
        let expect: BTreeMap<(usize, usize), u64> = [((2, 3), 2), ((0, 4), 1), ((1, 4), 1)].into_iter().collect();
        assert_eq!(budget.b, expect);
        assert_eq!(budget.sum_b_squared, 6);
        assert!(edge_influence_budget(&hc, &id(5), &[0, 3]).is_err());
    }
}
