//! Graph isomorphism: invariant fingerprints, color refinement and canonical
//! certificates.

mod backtrack;
mod canon;
mod partition;

pub use backtrack::find_isomorphism;
pub use canon::{canonical_form, CanonicalForm, SearchStats, DEFAULT_NODE_BUDGET};
pub use partition::{Partition, Refiner};

use serde::Serialize;

use crate::error::Result;
use crate::graph::Graph;

/// Cheap relabeling invariants. Unequal fingerprints certify
/// non-isomorphism; equal ones prove nothing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub order: usize,
    pub edges: usize,
    pub degrees: Vec<usize>,
    pub eccentricities: Vec<u32>,
    pub class_sizes: Vec<usize>,
}

pub fn fingerprint(g: &Graph) -> Fingerprint {
    let n = g.order();
    let mut degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    degrees.sort_unstable();
    let mut eccentricities: Vec<u32> = (0..n).map(|v| g.eccentricity(v)).collect();
    eccentricities.sort_unstable();
    let mut class_sizes = refine(g, &vec![0; n]).cell_sizes();
    class_sizes.sort_unstable();
    Fingerprint {
        order: n,
        edges: g.edge_count(),
        degrees,
        eccentricities,
        class_sizes,
    }
}

/// Coarsest equitable refinement of an initial coloring. The returned
/// partition's [`Partition::colors`] numbers classes in refinement order.
pub fn refine(g: &Graph, colors: &[u32]) -> Partition {
    partition::refine(g, colors)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CanonicalCertificate(pub String);

impl std::fmt::Display for CanonicalCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn canonical_certificate(g: &Graph, budget: u64) -> Result<CanonicalCertificate> {
    Ok(CanonicalCertificate(
        canonical_form(g, budget)?.certificate(),
    ))
}

/// A witness isomorphism `m` with `m[v]` the image of `v`, or `None`.
pub fn are_isomorphic(g: &Graph, h: &Graph, budget: u64) -> Result<Option<Vec<usize>>> {
    if g.order() != h.order()
        || g.edge_count() != h.edge_count()
        || fingerprint(g) != fingerprint(h)
    {
        return Ok(None);
    }
    let cg = canonical_form(g, budget)?;
    let ch = canonical_form(h, budget)?;
    if cg.graph != ch.graph {
        return Ok(None);
    }
    let mut from_canon = vec![0usize; h.order()];
    for (v, &c) in ch.labeling.iter().enumerate() {
        from_canon[c] = v;
    }
    Ok(Some(cg.labeling.iter().map(|&c| from_canon[c]).collect()))
}

/// True iff `m` is a bijection `V(g) -> V(h)` preserving adjacency and
/// non-adjacency.
pub fn verify_mapping(g: &Graph, h: &Graph, m: &[usize]) -> bool {
    let n = g.order();
    if n != h.order() || m.len() != n || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut hit = vec![false; n];
    for &x in m {
        if x >= n || std::mem::replace(&mut hit[x], true) {
            return false;
        }
    }
    // equal edge counts plus an injective edge map gives a bijection on edges
    g.edges().all(|(u, v)| h.has_edge(m[u], m[v]))
}
