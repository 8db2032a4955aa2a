//! Canonical labeling by individualization-refinement.
//!
//! The search tree has the equitable refinement of the unit partition at its
//! root. A node's children individualize each vertex of its target cell (the
//! first largest non-singleton cell) and refine again. Every leaf is a
//! discrete partition and therefore a labeling; the canonical labeling is the
//! leaf minimizing `(refinement traces along the path, relabeled adjacency)`.
//!
//! Two kinds of pruning keep the tree small, both driven by automorphisms
//! discovered when two leaves yield the same relabeled graph:
//!
//! * at each node, children in the same orbit of the automorphisms found so
//!   far that fix the node's individualized vertices are explored once;
//! * when a leaf matches the first or the best leaf and the automorphism maps
//!   that leaf's path onto the current one, the search jumps back to their
//!   deepest common ancestor.
//!
//! Subtrees whose trace prefix already exceeds the best leaf's are cut.

use std::cmp::Ordering;

use serde::Serialize;

use super::partition::{Partition, Refiner};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
    pub max_depth: usize,
    pub generators: usize,
    /// Non-singleton cells left after refining the unit partition.
    pub root_open_cells: usize,
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// `labeling[v]` is the canonical index of vertex `v`.
    pub labeling: Vec<usize>,
    pub graph: Graph,
    pub stats: SearchStats,
    /// Automorphism generators found during the search.
    pub generators: Vec<Vec<u32>>,
}

impl CanonicalForm {
    pub fn certificate(&self) -> String {
        self.graph.to_graph6()
    }
}

#[derive(Clone)]
struct Leaf {
    traces: Vec<u64>,
    path: Vec<u32>,
    /// `elems[i]` is the vertex placed at canonical index `i`.
    elems: Vec<u32>,
    code: Vec<u32>,
}

impl Leaf {
    fn key_cmp(&self, traces: &[u64], code: &[u32]) -> Ordering {
        self.traces
            .as_slice()
            .cmp(traces)
            .then_with(|| self.code.as_slice().cmp(code))
    }
}

struct Search<'g> {
    g: &'g Graph,
    refiner: Refiner,
    budget: u64,
    stats: SearchStats,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<u32>>,
}

/// Degree-row encoding of `g` relabeled by the discrete partition `p`.
fn relabeled_code(g: &Graph, p: &Partition) -> Vec<u32> {
    let pos = p.positions();
    let mut code = Vec::with_capacity(g.order() + 2 * g.edge_count());
    let mut row = Vec::new();
    for &v in p.elems() {
        row.clear();
        row.extend(g.neighbors(v as usize).iter().map(|&u| pos[u as usize]));
        row.sort_unstable();
        code.push(row.len() as u32);
        code.extend_from_slice(&row);
    }
    code
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

struct Orbits {
    parent: Vec<u32>,
}

impl Orbits {
    fn new(n: usize) -> Self {
        Orbits {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] as usize != v {
            let p = self.parent[v] as usize;
            self.parent[v] = self.parent[p];
            v = p;
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo as u32;
        }
    }
}

impl<'g> Search<'g> {
    fn orbits_fixing(&self, path: &[u32]) -> Orbits {
        let mut orbits = Orbits::new(self.g.order());
        for gen in &self.generators {
            if path.iter().all(|&v| gen[v as usize] == v) {
                for (v, &w) in gen.iter().enumerate() {
                    orbits.union(v, w as usize);
                }
            }
        }
        orbits
    }

    /// Returns `Some(level)` to unwind the recursion up to the node at
    /// `level`.
    fn explore(
        &mut self,
        p: Partition,
        path: &mut Vec<u32>,
        traces: &mut Vec<u64>,
    ) -> Result<Option<usize>> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        self.stats.max_depth = self.stats.max_depth.max(path.len());
        let Some(target) = p.target_cell() else {
            return Ok(self.leaf(&p, path, traces));
        };
        let level = path.len();
        let mut candidates: Vec<u32> = p.cell(target).to_vec();
        candidates.sort_unstable();
        let mut explored: Vec<u32> = Vec::new();
        let mut seen_generators = usize::MAX;
        let mut orbits = Orbits::new(0);
        for v in candidates {
            if !explored.is_empty() {
                if seen_generators != self.generators.len() {
                    orbits = self.orbits_fixing(path);
                    seen_generators = self.generators.len();
                }
                let rv = orbits.find(v as usize);
                if explored.iter().any(|&u| orbits.find(u as usize) == rv) {
                    continue;
                }
            }
            explored.push(v);
            let mut child = p.clone();
            let s = child.individualize(v as usize);
            let t = self.refiner.refine(self.g, &mut child, &[s]);
            path.push(v);
            traces.push(t);
            let pruned = self.best.as_ref().is_some_and(|b| {
                let m = traces.len().min(b.traces.len());
                traces[..m] > b.traces[..m]
            });
            let result = if pruned {
                None
            } else {
                self.explore(child, path, traces)?
            };
            path.pop();
            traces.pop();
            match result {
                Some(to) if to < level => return Ok(Some(to)),
                _ => {}
            }
        }
        Ok(None)
    }

    fn leaf(&mut self, p: &Partition, path: &[u32], traces: &[u64]) -> Option<usize> {
        self.stats.leaves += 1;
        let code = relabeled_code(self.g, p);
        if self.first.is_none() {
            let leaf = Leaf {
                traces: traces.to_vec(),
                path: path.to_vec(),
                elems: p.elems().to_vec(),
                code,
            };
            self.best = Some(leaf.clone());
            self.first = Some(leaf);
            return None;
        }
        for which in [0, 1] {
            let other = if which == 0 {
                self.first.as_ref()
            } else {
                self.best.as_ref()
            }
            .unwrap();
            if other.key_cmp(traces, &code) != Ordering::Equal {
                continue;
            }
            // equal relabeled graphs: other.elems[i] -> elems[i] is an automorphism
            let mut gen = vec![0u32; p.len()];
            for (&a, &b) in other.elems.iter().zip(p.elems()) {
                gen[a as usize] = b;
            }
            let maps_path = other.path.len() == path.len()
                && other
                    .path
                    .iter()
                    .zip(path)
                    .all(|(&a, &b)| gen[a as usize] == b);
            let ancestor = common_prefix(&other.path, path);
            if gen.iter().enumerate().any(|(v, &w)| v as u32 != w) {
                self.generators.push(gen);
            }
            return maps_path.then_some(ancestor);
        }
        let best = self.best.as_ref().unwrap();
        if best.key_cmp(traces, &code) == Ordering::Greater {
            self.best = Some(Leaf {
                traces: traces.to_vec(),
                path: path.to_vec(),
                elems: p.elems().to_vec(),
                code,
            });
        }
        None
    }
}

/// Canonical labeling of `g`; fails if the search visits more than `budget`
/// nodes.
pub fn canonical_form(g: &Graph, budget: u64) -> Result<CanonicalForm> {
    let n = g.order();
    let mut refiner = Refiner::new(n);
    let mut root = Partition::unit(n);
    let t = refiner.refine(
        g,
        &mut root,
        &[0].into_iter().filter(|_| n > 0).collect::<Vec<_>>(),
    );
    let root_open_cells = root.cell_sizes().iter().filter(|&&s| s > 1).count();
    let mut search = Search {
        g,
        refiner,
        budget,
        stats: SearchStats::default(),
        first: None,
        best: None,
        generators: Vec::new(),
    };
    search.stats.root_open_cells = root_open_cells;
    search.explore(root, &mut Vec::new(), &mut vec![t])?;
    let best = search.best.expect("search reaches at least one leaf");
    let mut labeling = vec![0usize; n];
    for (i, &v) in best.elems.iter().enumerate() {
        labeling[v as usize] = i;
    }
    search.stats.generators = search.generators.len();
    Ok(CanonicalForm {
        graph: g.relabel(&labeling),
        labeling,
        stats: search.stats,
        generators: search.generators,
    })
}
