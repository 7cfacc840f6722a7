//! Canonical labelling by equitable refinement and exhaustive individualisation.
//!
//! Every leaf of the search tree is a discrete ordered partition, i.e. a
//! candidate labelling. The canonical labelling is the leaf whose relabelled
//! adjacency matrix is lexicographically smallest (upper triangle, row-major).
//! Refinement and target-cell choice commute with relabelling, so the set of
//! leaves is closed under automorphisms, and the number of leaves achieving
//! the minimum is exactly the order of the automorphism group.

use std::cmp::Ordering;

use crate::graph::{bit, Bits, Graph, VertexMap};

/// Canonical encoding of a graph together with its automorphism-group order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// `n` as one byte, then the canonically relabelled upper triangle,
    /// row-major, packed most significant bit first.
    pub canon_bytes: Vec<u8>,
    pub aut_order: u64,
    /// Sends each vertex of the input to its canonical label.
    pub canon_map: VertexMap,
}

impl CanonicalForm {
    pub fn order(&self) -> usize {
        self.canon_map.n_from()
    }
}

type Cells = Vec<Vec<usize>>;

/// Splits cells by neighbour counts into each splitter cell until stable.
/// Sub-cells are ordered by increasing count, which keeps the result
/// independent of vertex names.
fn refine(g: &Graph, cells: &mut Cells) {
    let mut s = 0;
    while s < cells.len() {
        let splitter = cells[s].iter().fold(0u64, |m, &v| m | bit(v));
        let mut split_any = false;
        let mut next: Cells = Vec::with_capacity(cells.len() + 1);
        for cell in cells.iter() {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(u32, usize)> = cell
                .iter()
                .map(|&v| ((g.neighbors(v) & splitter).count_ones(), v))
                .collect();
            keyed.sort_unstable();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|&(_, v)| v).collect());
                    start = i;
                }
            }
            if keyed[0].0 != keyed[keyed.len() - 1].0 {
                split_any = true;
            }
        }
        *cells = next;
        // any split may unbalance earlier splitters
        s = if split_any { 0 } else { s + 1 };
    }
}

struct Search<'a> {
    g: &'a Graph,
    best_rows: Vec<u64>,
    best_order: Vec<usize>,
    leaves_at_best: u64,
    scratch: Vec<u64>,
    label: Vec<usize>,
}

impl Search<'_> {
    fn leaf(&mut self, order: &[usize]) {
        let n = order.len();
        for (pos, &v) in order.iter().enumerate() {
            self.label[v] = pos;
        }
        // Column j sits at bit 63 - j so that u64 comparison is lexicographic.
        let mut cmp = if self.best_order.is_empty() {
            Ordering::Less
        } else {
            Ordering::Equal
        };
        for (pos, &v) in order.iter().enumerate() {
            let row = Bits(self.g.neighbors(v)).fold(0u64, |r, w| r | 1u64 << (63 - self.label[w]));
            self.scratch[pos] = row;
            if cmp == Ordering::Equal {
                cmp = row.cmp(&self.best_rows[pos]);
                if cmp == Ordering::Greater {
                    return;
                }
            }
        }
        match cmp {
            Ordering::Less => {
                self.best_rows[..n].copy_from_slice(&self.scratch[..n]);
                self.best_order = order.to_vec();
                self.leaves_at_best = 1;
            }
            Ordering::Equal => self.leaves_at_best += 1,
            Ordering::Greater => {}
        }
    }

    fn descend(&mut self, cells: Cells) {
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.into_iter().map(|c| c[0]).collect();
            self.leaf(&order);
            return;
        };
        for &v in &cells[target] {
            let mut child: Cells = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(vec![v]);
            child.push(cells[target].iter().copied().filter(|&w| w != v).collect());
            child.extend_from_slice(&cells[target + 1..]);
            refine(self.g, &mut child);
            self.descend(child);
        }
    }
}

fn pack_upper_triangle(n: usize, rows: &[u64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(1 + (n * n) / 16 + 1);
    out.push(n as u8);
    let mut acc = 0u8;
    let mut filled = 0;
    for (i, &row) in rows.iter().enumerate().take(n) {
        for j in i + 1..n {
            acc = (acc << 1) | ((row >> (63 - j)) & 1) as u8;
            filled += 1;
            if filled == 8 {
                out.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(acc << (8 - filled));
    }
    out
}

pub fn canonicalize(g: &Graph) -> CanonicalForm {
    let n = g.order();
    let mut cells: Cells = vec![(0..n).collect()];
    refine(g, &mut cells);
    let mut search = Search {
        g,
        best_rows: vec![0; n],
        best_order: Vec::new(),
        leaves_at_best: 0,
        scratch: vec![0; n],
        label: vec![0; n],
    };
    search.descend(cells);

    let mut image = vec![0usize; n];
    for (pos, &v) in search.best_order.iter().enumerate() {
        image[v] = pos;
    }
    CanonicalForm {
        canon_bytes: pack_upper_triangle(n, &search.best_rows),
        aut_order: search.leaves_at_best,
        canon_map: VertexMap::new(n, image).expect("leaf order is a permutation"),
    }
}

/// The canonical representative of the isomorphism class of `g`.
pub fn canonical_graph(g: &Graph) -> Graph {
    let form = canonicalize(g);
    g.relabel_unchecked(form.canon_map.image())
}

/// Decodes `canon_bytes` back into the canonical graph.
pub fn graph_from_canon_bytes(bytes: &[u8]) -> Option<Graph> {
    let n = *bytes.first()? as usize;
    let mut edges = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let byte = *bytes.get(1 + k / 8)?;
            if byte >> (7 - k % 8) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, edges).ok()
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.order() != b.order() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da = a.degree_sequence();
    let mut db = b.degree_sequence();
    da.sort_unstable();
    db.sort_unstable();
    da == db && canonicalize(a).canon_bytes == canonicalize(b).canon_bytes
}

pub fn aut_order(g: &Graph) -> u64 {
    canonicalize(g).aut_order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::pair_count;

    fn all_labelled(n: usize) -> impl Iterator<Item = Graph> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        (0u64..1 << pairs.len()).map(move |mask| {
            Graph::from_edges(
                n,
                pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p),
            )
            .unwrap()
        })
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
            if prefix.len() == used.len() {
                out.push(prefix.clone());
                return;
            }
            for v in 0..used.len() {
                if !used[v] {
                    used[v] = true;
                    prefix.push(v);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[v] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }

    fn brute_aut(g: &Graph, perms: &[Vec<usize>]) -> u64 {
        perms.iter().filter(|p| g.relabel_unchecked(p) == *g).count() as u64
    }

    #[test]
    fn small_automorphism_orders() {
        assert_eq!(aut_order(&Graph::complete(3).unwrap()), 6);
        assert_eq!(aut_order(&Graph::path(3).unwrap()), 2);
        assert_eq!(aut_order(&Graph::empty(4).unwrap()), 24);
        assert_eq!(aut_order(&Graph::complete(2).unwrap()), 2);
        assert_eq!(aut_order(&Graph::empty(1).unwrap()), 1);
        assert_eq!(aut_order(&Graph::cycle(5).unwrap()), 10);
        assert_eq!(aut_order(&Graph::cycle(6).unwrap()), 12);
        // Petersen graph
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (i + 5, (i + 2) % 5 + 5));
        let petersen = Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap();
        assert_eq!(aut_order(&petersen), 120);
    }

    #[test]
    fn canon_bytes_invariant_under_every_relabelling() {
        for n in 1..=5 {
            let perms = permutations(n);
            for g in all_labelled(n) {
                let form = canonicalize(&g);
                assert_eq!(form.canon_bytes[0] as usize, n);
                assert_eq!(g.relabel_unchecked(form.canon_map.image()), graph_from_canon_bytes(&form.canon_bytes).unwrap());
                for p in &perms {
                    assert_eq!(canonicalize(&g.relabel_unchecked(p)).canon_bytes, form.canon_bytes);
                }
            }
        }
    }

    #[test]
    fn aut_order_matches_permutation_oracle() {
        for n in 1..=6 {
            let perms = permutations(n);
            // every labelled graph up to n = 5, a stride through n = 6
            let step = if n == 6 { 97 } else { 1 };
            for g in all_labelled(n).step_by(step) {
                assert_eq!(aut_order(&g), brute_aut(&g, &perms), "{g:?}");
            }
        }
    }

    #[test]
    fn isomorphism_matches_permutation_oracle() {
        // classes by brute force: minimum relabelled row vector over all permutations
        for n in 1..=5 {
            let perms = permutations(n);
            let graphs: Vec<Graph> = all_labelled(n).collect();
            let brute_key = |g: &Graph| perms.iter().map(|p| g.relabel_unchecked(p).rows().to_vec()).min().unwrap();
            let keys: Vec<_> = graphs.iter().map(brute_key).collect();
            let canon: Vec<_> = graphs.iter().map(|g| canonicalize(g).canon_bytes).collect();
            for i in (0..graphs.len()).step_by(7) {
                for j in 0..graphs.len() {
                    assert_eq!(keys[i] == keys[j], canon[i] == canon[j]);
                }
            }
        }
    }

    #[test]
    fn orbit_stabilizer_identity() {
        for n in 1..=5usize {
            let mut seen = std::collections::BTreeMap::new();
            for g in all_labelled(n) {
                let f = canonicalize(&g);
                seen.entry(f.canon_bytes).or_insert(f.aut_order);
            }
            let fact: u64 = (1..=n as u64).product();
            let total: u64 = seen.values().map(|a| fact / a).sum();
            assert_eq!(total, 1u64 << pair_count(n));
        }
    }

    #[test]
    fn c5_is_self_complementary() {
        let c5 = Graph::cycle(5).unwrap();
        assert!(are_isomorphic(&c5, &c5.complement()));
        assert!(!are_isomorphic(&Graph::complete(3).unwrap(), &Graph::path(3).unwrap()));
    }
}
