//! Embedding and subgraph-copy counting.
//!
//! An embedding of `G` into `H` is an injective vertex map sending edges of
//! `G` onto edges of `H` (non-induced). Vertices of `G` are placed in order of
//! descending degree; the candidates for the next vertex are the unused
//! targets adjacent to the images of all already-placed neighbours. Isolated
//! vertices of `G` are never branched on: each completed placement of the
//! rest contributes a falling factorial.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::canon::aut_order;
use crate::error::{Error, Result};
use crate::graph::{bit, Bits, Graph, VertexMap};
use crate::numeric::falling;

/// Result of a (possibly truncated) count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountOutcome {
    Zero,
    /// Exactly one; carries the unique map.
    One(VertexMap),
    /// The count reached the requested early-exit threshold.
    AtLeast(u64),
    /// Exact count, always at least 2.
    Exact(BigUint),
}

impl CountOutcome {
    fn from_total(total: BigUint, witness: Option<VertexMap>) -> Self {
        if total.is_zero() {
            CountOutcome::Zero
        } else if total.is_one() {
            CountOutcome::One(witness.expect("witness recorded for a count of one"))
        } else {
            CountOutcome::Exact(total)
        }
    }

    /// Exact value when known.
    pub fn exact(&self) -> Option<BigUint> {
        match self {
            CountOutcome::Zero => Some(BigUint::zero()),
            CountOutcome::One(_) => Some(BigUint::one()),
            CountOutcome::AtLeast(_) => None,
            CountOutcome::Exact(k) => Some(k.clone()),
        }
    }

    /// Largest value the count is known to be at least.
    pub fn lower_bound(&self) -> BigUint {
        match self {
            CountOutcome::AtLeast(k) => BigUint::from(*k),
            other => other.exact().expect("non-truncated"),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, CountOutcome::One(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CountOutcome::Zero)
    }

    /// Projection onto {0, 1, "2 or more"}.
    pub fn class(&self) -> u8 {
        match self {
            CountOutcome::Zero => 0,
            CountOutcome::One(_) => 1,
            _ => 2,
        }
    }

    /// Textual value: `"0"`, `"1"`, `">=k"` or the exact integer.
    pub fn label(&self) -> String {
        match self {
            CountOutcome::AtLeast(k) => format!(">={k}"),
            other => other.exact().expect("non-truncated").to_string(),
        }
    }
}

struct Plan {
    /// Non-isolated vertices of `G` in placement order.
    order: Vec<usize>,
    /// For position `i`, the earlier positions adjacent to `order[i]`.
    back: Vec<Vec<usize>>,
    isolated: Vec<usize>,
}

fn plan(g: &Graph) -> Plan {
    let mut order: Vec<usize> = (0..g.order()).filter(|&v| g.degree(v) > 0).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let isolated = (0..g.order()).filter(|&v| g.degree(v) == 0).collect();
    let back = order
        .iter()
        .enumerate()
        .map(|(i, &v)| (0..i).filter(|&j| g.has_edge(v, order[j])).collect())
        .collect();
    Plan {
        order,
        back,
        isolated,
    }
}

struct Counter<'a> {
    h: &'a Graph,
    plan: &'a Plan,
    /// Completions contributed by the isolated vertices of each placement.
    multiplier: &'a BigUint,
    multiplier_small: Option<u128>,
    threshold: Option<u64>,
    placements: u128,
    targets: Vec<usize>,
    witness: Option<Vec<usize>>,
    stopped: bool,
}

impl Counter<'_> {
    fn reached_threshold(&self) -> bool {
        let Some(t) = self.threshold else {
            return false;
        };
        match self.multiplier_small {
            Some(m) => self.placements.saturating_mul(m) >= t as u128,
            None => self.placements > 0,
        }
    }

    fn search(&mut self, depth: usize, used: u64) {
        let v_pos = depth;
        let mut cands = self.h.vertex_mask() & !used;
        for &j in &self.plan.back[v_pos] {
            cands &= self.h.neighbors(self.targets[j]);
        }
        if cands == 0 {
            return;
        }
        if depth + 1 == self.plan.order.len() {
            let before = self.placements;
            self.placements += cands.count_ones() as u128;
            if before == 0 && self.placements == 1 {
                let mut w = self.targets[..depth].to_vec();
                w.push(cands.trailing_zeros() as usize);
                self.witness = Some(w);
            }
            self.stopped = self.reached_threshold();
            return;
        }
        for t in Bits(cands) {
            self.targets[depth] = t;
            self.search(depth + 1, used | bit(t));
            if self.stopped {
                return;
            }
        }
    }
}

/// Counts embeddings of `g` into `h`. With `early_exit_at = Some(t)` the
/// search stops as soon as `t` embeddings are known and reports `AtLeast(t)`;
/// thresholds below 2 are raised to 2 so that `One` is always decidable.
/// When `g` has more vertices than `h` the count is `Zero`.
pub fn count_embeddings(g: &Graph, h: &Graph, early_exit_at: Option<u64>) -> CountOutcome {
    let (ng, nh) = (g.order(), h.order());
    if ng > nh {
        return CountOutcome::Zero;
    }
    let threshold = early_exit_at.map(|t| t.max(2));
    let plan = plan(g);
    let k = plan.order.len();
    let multiplier = falling(nh - k, plan.isolated.len());
    let multiplier_small = multiplier.to_u128();

    let complete_witness = |placed: &[usize]| -> VertexMap {
        let mut image = vec![usize::MAX; ng];
        let mut used = 0u64;
        for (&v, &t) in plan.order.iter().zip(placed) {
            image[v] = t;
            used |= bit(t);
        }
        let mut free = Bits(h.vertex_mask() & !used);
        for &v in &plan.isolated {
            image[v] = free.next().expect("enough free targets");
        }
        VertexMap::new(nh, image).expect("embedding is injective")
    };

    if k == 0 {
        // edgeless G: every injection works
        let witness = multiplier.is_one().then(|| complete_witness(&[]));
        return match threshold {
            Some(t) if multiplier >= BigUint::from(t) => CountOutcome::AtLeast(t),
            _ => CountOutcome::from_total(multiplier, witness),
        };
    }

    let mut counter = Counter {
        h,
        plan: &plan,
        multiplier: &multiplier,
        multiplier_small,
        threshold,
        placements: 0,
        targets: vec![0; k],
        witness: None,
        stopped: false,
    };
    counter.search(0, 0);
    if counter.stopped {
        return CountOutcome::AtLeast(threshold.expect("stopped only with a threshold"));
    }
    let total = BigUint::from(counter.placements) * counter.multiplier;
    let witness = counter.witness.as_deref().map(complete_witness);
    CountOutcome::from_total(total, witness)
}

/// Number of subgraphs of `h` (vertex subset plus edge subset) isomorphic to
/// `g`: embeddings divided by `|Aut(g)|`.
pub fn count_subgraph_copies(g: &Graph, h: &Graph) -> CountOutcome {
    let aut = aut_order(g);
    match count_embeddings(g, h, None) {
        CountOutcome::Exact(e) => {
            let copies = e / aut;
            if copies.is_one() {
                // the single copy is realised by |Aut(g)| maps; any of them witnesses it
                let w = first_embedding(g, h).expect("count is positive");
                CountOutcome::One(w)
            } else {
                CountOutcome::Exact(copies)
            }
        }
        other => other,
    }
}

/// Some embedding of `g` into `h`, if one exists.
pub fn first_embedding(g: &Graph, h: &Graph) -> Option<VertexMap> {
    // 2 is the smallest threshold; rerun exactly only when a witness is needed
    match count_embeddings(g, h, Some(2)) {
        CountOutcome::Zero => None,
        CountOutcome::One(w) => Some(w),
        _ => {
            let mut found = None;
            for_each_embedding(g, h, |m| {
                found = Some(m.clone());
                false
            });
            found
        }
    }
}

/// Calls `visit` on every embedding (isolated vertices expanded) until it
/// returns `false`. Intended for small instances.
pub fn for_each_embedding(g: &Graph, h: &Graph, mut visit: impl FnMut(&VertexMap) -> bool) {
    let (ng, nh) = (g.order(), h.order());
    if ng > nh {
        return;
    }
    fn rec(
        g: &Graph,
        h: &Graph,
        v: usize,
        image: &mut Vec<usize>,
        used: u64,
        visit: &mut dyn FnMut(&VertexMap) -> bool,
    ) -> bool {
        if v == g.order() {
            let m = VertexMap::new(h.order(), image.clone()).expect("injective");
            return visit(&m);
        }
        let mut cands = h.vertex_mask() & !used;
        for u in Bits(g.neighbors(v) & crate::graph::low_mask(v)) {
            cands &= h.neighbors(image[u]);
        }
        for t in Bits(cands) {
            image.push(t);
            let go_on = rec(g, h, v + 1, image, used | bit(t), visit);
            image.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    rec(g, h, 0, &mut Vec::with_capacity(ng), 0, &mut visit);
}

/// `G ⊆* H`: `h` contains exactly one subgraph isomorphic to `g`.
pub fn is_unique_subgraph(g: &Graph, h: &Graph) -> bool {
    is_unique_subgraph_with_aut(g, aut_order(g), h)
}

/// As [`is_unique_subgraph`] with `|Aut(g)|` already known.
pub fn is_unique_subgraph_with_aut(g: &Graph, aut: u64, h: &Graph) -> bool {
    match count_embeddings(g, h, Some(aut + 1)) {
        CountOutcome::One(_) => aut == 1,
        CountOutcome::Exact(k) => k == BigUint::from(aut),
        _ => false,
    }
}

/// `G →* H`: exactly one embedding. Both graphs must have the same order.
pub fn has_unique_embedding(g: &Graph, h: &Graph) -> Result<bool> {
    if g.order() != h.order() {
        return Err(Error::domain(format!(
            "unique embedding needs equal orders, got {} and {}",
            g.order(),
            h.order()
        )));
    }
    Ok(count_embeddings(g, h, Some(2)).is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(o: &CountOutcome) -> u64 {
        o.exact().unwrap().to_u64().unwrap()
    }

    /// Brute force over all injections.
    fn injections(g: &Graph, h: &Graph) -> u64 {
        let mut count = 0;
        fn rec(g: &Graph, h: &Graph, img: &mut Vec<usize>, count: &mut u64) {
            if img.len() == g.order() {
                if g.edges().all(|(u, v)| h.has_edge(img[u], img[v])) {
                    *count += 1;
                }
                return;
            }
            for t in 0..h.order() {
                if !img.contains(&t) {
                    img.push(t);
                    rec(g, h, img, count);
                    img.pop();
                }
            }
        }
        rec(g, h, &mut Vec::new(), &mut count);
        count
    }

    #[test]
    fn small_examples() {
        let k2 = Graph::complete(2).unwrap();
        let k3 = Graph::complete(3).unwrap();
        let p3 = Graph::path(3).unwrap();
        let e3 = Graph::empty(3).unwrap();
        assert_eq!(exact(&count_embeddings(&k2, &k3, None)), 6);
        assert_eq!(exact(&count_embeddings(&e3, &p3, None)), 6);
        assert_eq!(exact(&count_embeddings(&p3, &k3, None)), 6);
        assert_eq!(exact(&count_subgraph_copies(&k2, &k3)), 3);
        assert_eq!(exact(&count_subgraph_copies(&k3, &k3)), 1);
        assert_eq!(exact(&count_subgraph_copies(&p3, &k3)), 3);
        assert!(is_unique_subgraph(&k3, &k3));
        assert!(!is_unique_subgraph(&k2, &k3));
        assert!(is_unique_subgraph(&e3, &k3));
        assert!(!has_unique_embedding(&k3, &k3).unwrap());
        assert!(has_unique_embedding(&k2, &k3).is_err());
    }

    #[test]
    fn larger_pattern_is_zero() {
        let k3 = Graph::complete(3).unwrap();
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(count_embeddings(&k3, &k2, None), CountOutcome::Zero);
    }

    #[test]
    fn matches_injection_oracle_on_small_pairs() {
        let graphs: Vec<Graph> = (1..=4)
            .flat_map(|n| {
                let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
                (0u32..1 << pairs.len()).map(move |mask| {
                    Graph::from_edges(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p))
                        .unwrap()
                })
            })
            .collect();
        for g in &graphs {
            for h in graphs.iter().filter(|h| h.order() >= g.order()).step_by(3) {
                let want = injections(g, h);
                let got = count_embeddings(g, h, None);
                assert_eq!(got.exact().unwrap(), BigUint::from(want), "{g:?} -> {h:?}");
                if let CountOutcome::One(w) = &got {
                    assert!(w.is_embedding(g, h));
                }
                let early = count_embeddings(g, h, Some(2));
                assert_eq!(early.class(), got.class());
                let mut n = 0;
                for_each_embedding(g, h, |m| {
                    assert!(m.is_embedding(g, h));
                    n += 1;
                    true
                });
                assert_eq!(n, want);
            }
        }
    }

    #[test]
    fn isolated_vertices_use_falling_factorial() {
        // K2 plus 8 isolated vertices into K10: 10 * 9 * 8!
        let g = Graph::from_edges(10, [(0, 1)]).unwrap();
        let h = Graph::complete(10).unwrap();
        assert_eq!(count_embeddings(&g, &h, None), CountOutcome::Exact(BigUint::from(3_628_800u32)));
        assert_eq!(count_embeddings(&g, &h, Some(5)), CountOutcome::AtLeast(5));
        let e = Graph::empty(20).unwrap();
        let big = count_embeddings(&e, &e, None).exact().unwrap();
        assert_eq!(big, crate::numeric::factorial(20));
    }

    #[test]
    fn unique_witness_for_one_embedding() {
        // a single isolated vertex into a single vertex
        let one = Graph::empty(1).unwrap();
        assert!(matches!(count_embeddings(&one, &one, None), CountOutcome::One(_)));
        // path 0-1-2-3 plus pendant on 1 is rigid? use the star-with-tail: rigid 6-vertex graph
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (1, 5)]).unwrap();
        assert_eq!(aut_order(&g), 1);
        match count_embeddings(&g, &g, Some(2)) {
            CountOutcome::One(w) => assert_eq!(w, VertexMap::identity(6)),
            other => panic!("{other:?}"),
        }
    }
}
