//! Direct isomorphism search by backtracking over color-compatible
//! bijections. Slower than canonical labeling, but shares nothing with it
//! beyond the refinement used to restrict candidates, so it serves to
//! double-check verdicts.

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::partition;

/// Searches for an isomorphism `g -> h`, visiting at most `limit` partial
/// assignments.
pub fn find_isomorphism(g: &Graph, h: &Graph, limit: u64) -> Result<Option<Vec<usize>>> {
    let n = g.order();
    if n != h.order() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    // refine the disjoint union so that colors are comparable across g and h
    let union = Graph::from_edges(
        2 * n,
        g.edges().chain(h.edges().map(|(u, v)| (u + n, v + n))),
    );
    let colors = partition::refine(&union, &vec![0; 2 * n]).colors();
    let (cg, ch) = colors.split_at(n);
    let mut sg = cg.to_vec();
    let mut sh = ch.to_vec();
    sg.sort_unstable();
    sh.sort_unstable();
    if sg != sh {
        return Ok(None);
    }
    let ncolors = colors.iter().max().map_or(0, |&c| c as usize + 1);
    let mut by_color: Vec<Vec<usize>> = vec![Vec::new(); ncolors];
    for (w, &c) in ch.iter().enumerate() {
        by_color[c as usize].push(w);
    }
    let class_size = |v: usize| by_color[cg[v] as usize].len();

    // visit g in BFS order per component, each started from a rarest-color vertex
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let mut roots: Vec<usize> = (0..n).collect();
    roots.sort_by_key(|&v| (class_size(v), v));
    for r in roots {
        if placed[r] {
            continue;
        }
        placed[r] = true;
        let mut head = order.len();
        order.push(r);
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &v in g.neighbors(u) {
                if !std::mem::replace(&mut placed[v as usize], true) {
                    order.push(v as usize);
                }
            }
        }
    }

    let mut state = State {
        g,
        h,
        cg,
        by_color: &by_color,
        order: &order,
        m: vec![usize::MAX; n],
        inv: vec![usize::MAX; n],
        visits: 0,
        limit,
    };
    if state.extend(0)? {
        Ok(Some(state.m))
    } else {
        Ok(None)
    }
}

struct State<'a> {
    g: &'a Graph,
    h: &'a Graph,
    cg: &'a [u32],
    by_color: &'a [Vec<usize>],
    order: &'a [usize],
    m: Vec<usize>,
    inv: Vec<usize>,
    visits: u64,
    limit: u64,
}

impl State<'_> {
    fn extend(&mut self, depth: usize) -> Result<bool> {
        if depth == self.order.len() {
            return Ok(true);
        }
        let v = self.order[depth];
        let mapped_nb: Vec<usize> = self
            .g
            .neighbors(v)
            .iter()
            .map(|&u| u as usize)
            .filter(|&u| self.m[u] != usize::MAX)
            .collect();
        for &w in &self.by_color[self.cg[v] as usize] {
            if self.inv[w] != usize::MAX {
                continue;
            }
            self.visits += 1;
            if self.visits > self.limit {
                return Err(Error::BudgetExceeded(self.limit));
            }
            if !mapped_nb.iter().all(|&u| self.h.has_edge(self.m[u], w)) {
                continue;
            }
            let w_mapped = self
                .h
                .neighbors(w)
                .iter()
                .filter(|&&x| self.inv[x as usize] != usize::MAX)
                .count();
            if w_mapped != mapped_nb.len() {
                continue;
            }
            self.m[v] = w;
            self.inv[w] = v;
            if self.extend(depth + 1)? {
                return Ok(true);
            }
            self.m[v] = usize::MAX;
            self.inv[w] = usize::MAX;
        }
        Ok(false)
    }
}
