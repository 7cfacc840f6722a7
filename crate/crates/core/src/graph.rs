//! Simple undirected graphs on at most 64 vertices with one `u64` adjacency
//! row per vertex, plus injective vertex maps between them.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// Immutable labelled simple graph. Vertices are `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

#[inline]
pub(crate) fn bit(v: usize) -> u64 {
    1u64 << v
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bits of a word, lowest first.
#[derive(Clone, Copy)]
pub struct Bits(pub u64);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

/// Number of unordered vertex pairs on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 || n > MAX_VERTICES {
        return Err(Error::domain(format!(
            "vertex count {n} outside 1..={MAX_VERTICES}"
        )));
    }
    Ok(())
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        check_order(n)?;
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn complete(n: usize) -> Result<Self> {
        check_order(n)?;
        let full = low_mask(n);
        let adj = (0..n).map(|v| full & !bit(v)).collect();
        Ok(Graph { n, adj })
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n)?;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::domain(format!(
                    "edge ({u},{v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::domain(format!("self-loop at vertex {u}")));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    /// Builds a graph from raw rows, validating symmetry and the zero diagonal.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        check_order(n)?;
        let mask = low_mask(n);
        for (u, &row) in rows.iter().enumerate() {
            if row & !mask != 0 {
                return Err(Error::domain(format!("row {u} has bits beyond n = {n}")));
            }
            if row & bit(u) != 0 {
                return Err(Error::domain(format!("self-loop at vertex {u}")));
            }
            for v in Bits(row) {
                if rows[v] & bit(u) == 0 {
                    return Err(Error::domain(format!("asymmetric pair ({u},{v})")));
                }
            }
        }
        Ok(Graph { n, adj: rows })
    }

    pub fn path(n: usize) -> Result<Self> {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain("a cycle needs at least 3 vertices"));
        }
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Result<Self> {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v)))
    }

    /// Graph on `n` vertices whose edge set is the first `m` pairs of `pairs`.
    pub(crate) fn from_pair_prefix(n: usize, pairs: &[(u8, u8)], m: usize) -> Graph {
        let mut adj = vec![0u64; n];
        for &(u, v) in &pairs[..m] {
            adj[u as usize] |= bit(v as usize);
            adj[v as usize] |= bit(u as usize);
        }
        Graph { n, adj }
    }

    #[inline]
    pub(crate) fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        if present {
            self.adj[u] |= bit(v);
            self.adj[v] |= bit(u);
        } else {
            self.adj[u] &= !bit(v);
            self.adj[v] &= !bit(u);
        }
    }

    /// Copy of `self` with the pair `uv` present.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self> {
        self.check_pair(u, v)?;
        let mut g = self.clone();
        g.set_edge(u, v, true);
        Ok(g)
    }

    /// Copy of `self` with the pair `uv` absent.
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Self> {
        self.check_pair(u, v)?;
        let mut g = self.clone();
        g.set_edge(u, v, false);
        Ok(g)
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n || u == v {
            return Err(Error::domain(format!(
                "({u},{v}) is not a vertex pair of a {}-vertex graph",
                self.n
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & bit(v) != 0
    }

    /// Neighbourhood of `v` as a bitset.
    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    /// All vertices as a bitset.
    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        low_mask(self.n)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| Bits(self.adj[u] & !low_mask(u + 1)).map(move |v| (u, v)))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn complement(&self) -> Graph {
        let full = low_mask(self.n);
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(v, &row)| !row & full & !bit(v))
            .collect();
        Graph { n: self.n, adj }
    }

    /// Subgraph induced on `vertices`, relabelled `0..k` in the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut seen = 0u64;
        for &v in vertices {
            if v >= self.n {
                return Err(Error::domain(format!(
                    "vertex {v} outside 0..{}",
                    self.n
                )));
            }
            if seen & bit(v) != 0 {
                return Err(Error::domain(format!("vertex {v} listed twice")));
            }
            seen |= bit(v);
        }
        let k = vertices.len();
        check_order(k)?;
        let mut adj = vec![0u64; k];
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate() {
                if self.has_edge(u, v) {
                    adj[i] |= bit(j);
                }
            }
        }
        Ok(Graph { n: k, adj })
    }

    /// Relabels vertex `v` to `perm[v]`. `perm` must be a permutation of `0..n`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        let map = VertexMap::new(self.n, perm.to_vec())?;
        if !map.is_bijection() {
            return Err(Error::domain("relabelling must be a permutation"));
        }
        Ok(self.relabel_unchecked(perm))
    }

    pub(crate) fn relabel_unchecked(&self, perm: &[usize]) -> Graph {
        let mut adj = vec![0u64; self.n];
        for (u, &pu) in perm.iter().enumerate() {
            let mut row = 0u64;
            for v in Bits(self.adj[u]) {
                row |= bit(perm[v]);
            }
            adj[pu] = row;
        }
        Graph { n: self.n, adj }
    }

    /// Every pair of `self` is also a pair of `other` (same order, same labels).
    pub fn is_spanning_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.adj.iter().zip(&other.adj).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}; ", self.n)?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

/// Injective map from `0..n_from` into `0..n_to`, with an inverse table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexMap {
    n_to: usize,
    image: Vec<usize>,
    inverse: Vec<Option<usize>>,
}

impl VertexMap {
    pub fn new(n_to: usize, image: Vec<usize>) -> Result<Self> {
        let mut inverse = vec![None; n_to];
        for (v, &w) in image.iter().enumerate() {
            if w >= n_to {
                return Err(Error::domain(format!("image {w} of {v} outside 0..{n_to}")));
            }
            if inverse[w].is_some() {
                return Err(Error::domain(format!("map is not injective at target {w}")));
            }
            inverse[w] = Some(v);
        }
        Ok(VertexMap {
            n_to,
            image,
            inverse,
        })
    }

    pub fn identity(n: usize) -> Self {
        VertexMap {
            n_to: n,
            image: (0..n).collect(),
            inverse: (0..n).map(Some).collect(),
        }
    }

    /// Parses a comma-separated image list such as `"2,0,1"`.
    pub fn parse_bijection(text: &str) -> Result<Self> {
        let image = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::domain(format!("bad permutation entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let n = image.len();
        VertexMap::new(n, image)
    }

    pub fn n_from(&self) -> usize {
        self.image.len()
    }

    pub fn n_to(&self) -> usize {
        self.n_to
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    #[inline]
    pub fn preimage(&self, w: usize) -> Option<usize> {
        self.inverse.get(w).copied().flatten()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_bijection(&self) -> bool {
        self.image.len() == self.n_to
    }

    /// Image of a vertex bitset.
    pub fn apply_set(&self, set: u64) -> u64 {
        Bits(set).fold(0, |acc, v| acc | bit(self.image[v]))
    }

    /// True when every edge `uv` of `from` lands on an edge of `to`.
    pub fn is_embedding(&self, from: &Graph, to: &Graph) -> bool {
        if self.n_from() != from.order() || self.n_to != to.order() {
            return false;
        }
        from.edges()
            .all(|(u, v)| to.has_edge(self.image[u], self.image[v]))
    }

    pub fn to_csv(&self) -> String {
        self.image
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Debug for VertexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexMap[{}]", self.to_csv())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_of_triangle_is_empty() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(k3.complement(), Graph::empty(3).unwrap());
    }

    #[test]
    fn complement_of_path_is_single_edge() {
        // a-b-c: only a-c is missing
        let p3 = Graph::path(3).unwrap();
        let expected = Graph::from_edges(3, [(0, 2)]).unwrap();
        assert_eq!(p3.complement(), expected);
    }

    #[test]
    fn complement_is_involution_and_swaps_edge_counts() {
        for n in 1..=5 {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            for mask in 0u32..(1 << pairs.len()) {
                let g = Graph::from_edges(
                    n,
                    pairs
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &p)| p),
                )
                .unwrap();
                let c = g.complement();
                assert_eq!(c.complement(), g);
                assert_eq!(g.edge_count() + c.edge_count(), pair_count(n));
                assert_eq!(g.degree_sequence().iter().sum::<usize>(), 2 * g.edge_count());
            }
        }
    }

    #[test]
    fn induced_subgraphs() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(k4.induced_subgraph(&[0, 1, 2]).unwrap(), Graph::complete(3).unwrap());

        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(c5.induced_subgraph(&[0, 1, 2, 3, 4]).unwrap(), c5);
        assert_eq!(c5.induced_subgraph(&[0, 1, 2]).unwrap(), Graph::path(3).unwrap());

        assert!(matches!(c5.induced_subgraph(&[0, 5]), Err(Error::Domain(_))));
        assert!(matches!(c5.induced_subgraph(&[1, 1]), Err(Error::Domain(_))));
    }

    #[test]
    fn order_limits() {
        assert!(Graph::empty(0).is_err());
        assert!(Graph::empty(65).is_err());
        let k64 = Graph::complete(64).unwrap();
        assert_eq!(k64.edge_count(), 2016);
        assert_eq!(k64.complement().edge_count(), 0);
    }

    #[test]
    fn from_rows_rejects_asymmetry_and_loops() {
        assert!(Graph::from_rows(vec![0b10, 0b00]).is_err());
        assert!(Graph::from_rows(vec![0b01, 0b00]).is_err());
        assert!(Graph::from_rows(vec![0b10, 0b01]).is_ok());
    }

    #[test]
    fn vertex_map_rejects_collisions() {
        assert!(VertexMap::new(3, vec![0, 0]).is_err());
        assert!(VertexMap::new(3, vec![0, 3]).is_err());
        let m = VertexMap::new(4, vec![2, 0]).unwrap();
        assert_eq!(m.preimage(2), Some(0));
        assert_eq!(m.preimage(1), None);
        assert!(!m.is_bijection());
        for v in 0..m.n_from() {
            assert_eq!(m.preimage(m.apply(v)), Some(v));
        }
    }

    #[test]
    fn permuted_relabels() {
        let p3 = Graph::path(3).unwrap();
        // 0->1, 1->0, 2->2 moves the centre to 0
        let q = p3.permuted(&[1, 0, 2]).unwrap();
        assert!(q.has_edge(1, 0) && q.has_edge(0, 2) && !q.has_edge(1, 2));
        assert!(p3.permuted(&[0, 0, 1]).is_err());
    }
}
