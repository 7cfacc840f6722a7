//! Unlabelled graph generation by canonical augmentation.
//!
//! A child `P + v` of a canonical parent `P` on `k - 1` vertices is kept when
//! deleting the vertex that receives the last canonical label yields a graph
//! isomorphic to `P`. That ties every class on `k` vertices to exactly one
//! parent class; duplicates among siblings are removed per parent.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{canonicalize, graph_from_canon_bytes};
use crate::error::{Error, Result};
use crate::graph::{bit, pair_count, Graph};
use crate::numeric::{factorial, pow2, ratio_to_f64};

/// Largest vertex count accepted by the enumerator.
pub const MAX_ENUMERATE_N: usize = 10;

/// One isomorphism class: its canonical graph plus invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnlabelledClass {
    pub graph: Graph,
    pub canon_bytes: Vec<u8>,
    pub aut_order: u64,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ENUMERATE_N {
        return Err(Error::domain(format!(
            "enumeration supports 1 <= n <= {MAX_ENUMERATE_N}, got {n}"
        )));
    }
    Ok(())
}

fn class_of(g: &Graph) -> UnlabelledClass {
    let form = canonicalize(g);
    UnlabelledClass {
        graph: g.relabel_unchecked(form.canon_map.image()),
        canon_bytes: form.canon_bytes,
        aut_order: form.aut_order,
    }
}

fn children(parent: &UnlabelledClass) -> Vec<UnlabelledClass> {
    let k = parent.graph.order() + 1;
    let new_vertex = k - 1;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for nbhd in 0u64..(1u64 << (k - 1)) {
        let mut rows = parent.graph.rows().to_vec();
        rows.push(nbhd);
        for v in 0..k - 1 {
            if nbhd & bit(v) != 0 {
                rows[v] |= bit(new_vertex);
            }
        }
        let child = Graph::from_rows(rows).expect("augmentation keeps the graph simple");
        let form = canonicalize(&child);
        let last = form
            .canon_map
            .preimage(k - 1)
            .expect("canonical map is a bijection");
        let accepted = last == new_vertex || {
            let keep: Vec<usize> = (0..k).filter(|&v| v != last).collect();
            let reduced = child.induced_subgraph(&keep).expect("k >= 2");
            canonicalize(&reduced).canon_bytes == parent.canon_bytes
        };
        if accepted && seen.insert(form.canon_bytes.clone()) {
            out.push(UnlabelledClass {
                graph: child.relabel_unchecked(form.canon_map.image()),
                canon_bytes: form.canon_bytes,
                aut_order: form.aut_order,
            });
        }
    }
    out
}

fn next_level(parents: &[UnlabelledClass]) -> Vec<UnlabelledClass> {
    let mut level: Vec<UnlabelledClass> = parents.par_iter().flat_map_iter(children).collect();
    level.sort_unstable_by(|a, b| a.canon_bytes.cmp(&b.canon_bytes));
    level
}

/// All levels `1..=n`; entry `k - 1` holds the classes on `k` vertices.
pub fn enumerate_levels(n: usize) -> Result<Vec<Vec<UnlabelledClass>>> {
    check_n(n)?;
    let mut levels = vec![vec![class_of(&Graph::empty(1)?)]];
    while levels.len() < n {
        let next = next_level(levels.last().expect("non-empty"));
        levels.push(next);
    }
    Ok(levels)
}

/// One canonical representative per isomorphism class on `n` vertices,
/// ordered by `canon_bytes`.
pub fn enumerate_classes(n: usize) -> Result<Vec<UnlabelledClass>> {
    Ok(enumerate_levels(n)?.pop().expect("n >= 1"))
}

pub fn enumerate_unlabelled(n: usize) -> Result<impl Iterator<Item = Graph>> {
    Ok(enumerate_classes(n)?.into_iter().map(|c| c.graph))
}

/// Rebuilds a class record from its canonical encoding.
pub fn class_from_canon_bytes(bytes: &[u8]) -> Option<UnlabelledClass> {
    graph_from_canon_bytes(bytes).map(|g| class_of(&g))
}

/// Unlabelled count against `2^(n choose 2) / n!`.
#[derive(Clone, Debug, Serialize)]
pub struct PolyaReport {
    pub n: usize,
    pub unlabelled_count: u64,
    /// `2^(n choose 2) / n!` as an exact fraction.
    pub polya_estimate_exact: String,
    pub polya_estimate: f64,
    /// `unlabelled_count * n! / 2^(n choose 2)`.
    pub ratio_exact: String,
    pub ratio: f64,
    /// Sum of `n!/|Aut|` over the classes; equals `2^(n choose 2)`.
    pub labelled_total: String,
    pub nontrivial_aut_fraction: f64,
}

pub fn polya_estimate(n: usize) -> BigRational {
    BigRational::new(pow2(pair_count(n)).into(), factorial(n).into())
}

pub fn polya_ratio(n: usize, count: u64) -> BigRational {
    BigRational::from_integer(BigUint::from(count).into()) / polya_estimate(n)
}

/// Sum of `n!/|Aut(G)|` over the given classes.
pub fn labelled_total(n: usize, classes: &[UnlabelledClass]) -> BigUint {
    let fact = factorial(n);
    classes.iter().map(|c| &fact / BigUint::from(c.aut_order)).sum()
}

pub fn nontrivial_aut_fraction_of(classes: &[UnlabelledClass]) -> BigRational {
    let nontrivial = classes.iter().filter(|c| c.aut_order >= 2).count();
    BigRational::new(nontrivial.into(), classes.len().into())
}

pub fn nontrivial_aut_fraction(n: usize) -> Result<BigRational> {
    Ok(nontrivial_aut_fraction_of(&enumerate_classes(n)?))
}

pub fn polya_report_from(n: usize, classes: &[UnlabelledClass]) -> PolyaReport {
    let count = classes.len() as u64;
    let estimate = polya_estimate(n);
    let ratio = polya_ratio(n, count);
    let frac = nontrivial_aut_fraction_of(classes);
    PolyaReport {
        n,
        unlabelled_count: count,
        polya_estimate_exact: estimate.to_string(),
        polya_estimate: ratio_to_f64(&estimate),
        ratio_exact: ratio.to_string(),
        ratio: ratio_to_f64(&ratio),
        labelled_total: labelled_total(n, classes).to_string(),
        nontrivial_aut_fraction: frac.to_f64().unwrap_or(f64::NAN),
    }
}

pub fn polya_report(n: usize) -> Result<PolyaReport> {
    Ok(polya_report_from(n, &enumerate_classes(n)?))
}

/// Reports for every `n` in `1..=max_n`, sharing one augmentation run.
pub fn polya_reports(max_n: usize) -> Result<Vec<PolyaReport>> {
    let levels = enumerate_levels(max_n)?;
    Ok(levels
        .iter()
        .enumerate()
        .map(|(i, classes)| polya_report_from(i + 1, classes))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use std::collections::BTreeSet;

    fn bucket_labelled(n: usize) -> usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let mut classes = BTreeSet::new();
        for mask in 0u64..1 << pairs.len() {
            let g = Graph::from_edges(
                n,
                pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p),
            )
            .unwrap();
            classes.insert(canonicalize(&g).canon_bytes);
        }
        classes.len()
    }

    #[test]
    fn counts_match_labelled_bucketing() {
        let levels = enumerate_levels(6).unwrap();
        for (i, level) in levels.iter().enumerate() {
            assert_eq!(level.len(), bucket_labelled(i + 1), "n = {}", i + 1);
        }
        let counts: Vec<usize> = levels.iter().map(Vec::len).collect();
        assert_eq!(counts, [1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn output_is_sorted_and_free_of_duplicates() {
        let classes = enumerate_classes(6).unwrap();
        for w in classes.windows(2) {
            assert!(w[0].canon_bytes < w[1].canon_bytes);
        }
        for c in &classes {
            assert_eq!(canonicalize(&c.graph).canon_bytes, c.canon_bytes);
        }
    }

    #[test]
    fn seven_vertices() {
        assert_eq!(enumerate_classes(7).unwrap().len(), 1044);
    }

    #[test]
    fn out_of_range() {
        assert!(enumerate_classes(0).is_err());
        assert!(enumerate_classes(MAX_ENUMERATE_N + 1).is_err());
    }

    #[test]
    fn polya_ratio_values() {
        let r1 = polya_report(1).unwrap();
        assert_eq!(r1.ratio_exact, "1");
        let r4 = polya_report(4).unwrap();
        // 11 * 24 / 64
        assert_eq!(r4.ratio_exact, "33/8");
        assert_eq!(r4.ratio, 4.125);
        assert_eq!(r4.labelled_total, "64");
    }

    #[test]
    fn rigid_graphs_first_appear_at_six() {
        assert!(nontrivial_aut_fraction(3).unwrap().is_one());
        assert!(nontrivial_aut_fraction(5).unwrap().is_one());
        let six = enumerate_classes(6).unwrap();
        assert_eq!(six.iter().filter(|c| c.aut_order == 1).count(), 8);
    }
}
