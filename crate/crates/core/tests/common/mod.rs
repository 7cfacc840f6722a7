//! Brute-force reference implementations shared by the integration tests.
//! They deliberately avoid the library's search code and use plain loops.
#![allow(dead_code)]

use uniqsub::graph::Graph;

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
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

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Labelled graph on `n` vertices whose edge set is bit `i` of `mask` for
/// the `i`-th pair in lexicographic order.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let ps = pairs(n);
    Graph::from_edges(n, ps.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p)).unwrap()
}

pub fn labelled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let count = 1u64 << pairs(n).len();
    (0..count).map(move |m| graph_from_mask(n, m))
}

pub fn edge_mask(g: &Graph) -> u64 {
    pairs(g.order())
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| g.has_edge(u, v))
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// Every relabelling of `n` vertices, as a map on pair indices.
pub struct Relabeller {
    pub n: usize,
    pub perms: Vec<Vec<usize>>,
    maps: Vec<Vec<usize>>,
}

impl Relabeller {
    pub fn new(n: usize) -> Self {
        let ps = pairs(n);
        let mut index = vec![vec![0usize; n]; n];
        for (i, &(u, v)) in ps.iter().enumerate() {
            index[u][v] = i;
            index[v][u] = i;
        }
        let perms = permutations(n);
        let maps = perms
            .iter()
            .map(|p| ps.iter().map(|&(u, v)| index[p[u]][p[v]]).collect())
            .collect();
        Relabeller { n, perms, maps }
    }

    fn apply(map: &[usize], mask: u64) -> u64 {
        map.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0, |m, (_, &j)| m | 1 << j)
    }

    /// Isomorphism-invariant key: smallest relabelled edge mask.
    pub fn key_of_mask(&self, mask: u64) -> u64 {
        self.maps.iter().map(|m| Self::apply(m, mask)).min().unwrap()
    }

    pub fn key(&self, g: &Graph) -> (usize, u64) {
        assert_eq!(g.order(), self.n);
        (self.n, self.key_of_mask(edge_mask(g)))
    }

    pub fn aut_of_mask(&self, mask: u64) -> u64 {
        self.maps.iter().filter(|m| Self::apply(m, mask) == mask).count() as u64
    }

    pub fn aut(&self, g: &Graph) -> u64 {
        self.aut_of_mask(edge_mask(g))
    }
}

pub fn is_embedding(from: &Graph, to: &Graph, map: &[usize]) -> bool {
    let n = from.order();
    for u in 0..n {
        for v in u + 1..n {
            if map[u] == map[v] || (from.has_edge(u, v) && !to.has_edge(map[u], map[v])) {
                return false;
            }
        }
    }
    true
}

/// Injections `0..k -> 0..n`.
pub fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if !prefix.contains(&v) {
                prefix.push(v);
                rec(k, n, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(k, n, &mut Vec::new(), &mut out);
    out
}

pub fn brute_embeddings(g: &Graph, h: &Graph) -> u64 {
    injections(g.order(), h.order())
        .iter()
        .filter(|m| is_embedding(g, h, m))
        .count() as u64
}

/// `{u, v}` is a `pi`-switch, straight from the definition.
pub fn brute_is_switch(hc: &Graph, g: &Graph, pi: &[usize], u: usize, v: usize) -> bool {
    let n = hc.order();
    let inv = |w: usize| pi.iter().position(|&x| x == w).unwrap();
    let (a, b) = (inv(u), inv(v));
    for x in 0..n {
        if x == a || x == b {
            continue;
        }
        if hc.has_edge(a, x) && !hc.has_edge(b, x) && !g.has_edge(v, pi[x]) {
            return false;
        }
        if hc.has_edge(b, x) && !hc.has_edge(a, x) && !g.has_edge(u, pi[x]) {
            return false;
        }
    }
    true
}

/// Number of vertex/edge subset pairs of `h` isomorphic to each class,
/// keyed by [`Relabeller::key`]; `relabellers[k]` handles `k` vertices.
pub fn brute_subgraph_copies(h: &Graph, relabellers: &[Relabeller]) -> std::collections::BTreeMap<(usize, u64), u64> {
    let n = h.order();
    let mut copies = std::collections::BTreeMap::new();
    for s in 1u32..(1 << n) {
        let verts: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
        let k = verts.len();
        let induced: Vec<(usize, usize)> = pairs(k)
            .into_iter()
            .filter(|&(i, j)| h.has_edge(verts[i], verts[j]))
            .collect();
        for e in 0u64..(1 << induced.len()) {
            let sub = Graph::from_edges(
                k,
                induced.iter().enumerate().filter(|(i, _)| e >> i & 1 == 1).map(|(_, &p)| p),
            )
            .unwrap();
            *copies.entry(relabellers[k].key(&sub)).or_insert(0) += 1;
        }
    }
    copies
}
