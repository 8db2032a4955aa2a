//! Ordered vertex partitions and equitable refinement.
//!
//! Cells are contiguous runs of `elems` and are named by their start
//! position. Everything the refinement decides (which cells split, where
//! fragments land, what gets hashed into the trace) depends only on cell
//! positions and neighbor counts, never on vertex names, so isomorphic inputs
//! produce identical traces and cell layouts.

use std::collections::VecDeque;

use crate::graph::Graph;

#[derive(Clone, Debug)]
pub struct Partition {
    elems: Vec<u32>,
    pos: Vec<u32>,
    cell_of: Vec<u32>,
    /// Length of the cell starting at each position; meaningless elsewhere.
    cell_len: Vec<u32>,
    cells: usize,
}

impl Partition {
    pub fn unit(n: usize) -> Self {
        Partition::from_colors(&vec![0; n])
    }

    /// Cells ordered by color value.
    pub fn from_colors(colors: &[u32]) -> Self {
        let n = colors.len();
        let mut elems: Vec<u32> = (0..n as u32).collect();
        elems.sort_by_key(|&v| (colors[v as usize], v));
        let mut p = Partition {
            elems,
            pos: vec![0; n],
            cell_of: vec![0; n],
            cell_len: vec![0; n],
            cells: 0,
        };
        let mut start = 0;
        while start < n {
            let c = colors[p.elems[start] as usize];
            let mut end = start;
            while end < n && colors[p.elems[end] as usize] == c {
                end += 1;
            }
            p.set_cell(start, end);
            start = end;
        }
        p
    }

    fn set_cell(&mut self, start: usize, end: usize) {
        self.cell_len[start] = (end - start) as u32;
        for i in start..end {
            let v = self.elems[i] as usize;
            self.pos[v] = i as u32;
            self.cell_of[v] = start as u32;
        }
        self.cells += 1;
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn cell_count(&self) -> usize {
        self.cells
    }

    pub fn is_discrete(&self) -> bool {
        self.cells == self.elems.len()
    }

    /// Vertex-to-position map; a labeling once the partition is discrete.
    pub fn positions(&self) -> &[u32] {
        &self.pos
    }

    pub fn elems(&self) -> &[u32] {
        &self.elems
    }

    pub fn cell_starts(&self) -> impl Iterator<Item = usize> + '_ {
        let mut s = 0;
        std::iter::from_fn(move || {
            (s < self.elems.len()).then(|| {
                let here = s;
                s += self.cell_len[here] as usize;
                here
            })
        })
    }

    pub fn cell(&self, start: usize) -> &[u32] {
        &self.elems[start..start + self.cell_len[start] as usize]
    }

    pub fn cell_start_of(&self, v: usize) -> usize {
        self.cell_of[v] as usize
    }

    /// Color of each vertex: the rank of its cell in cell order.
    pub fn colors(&self) -> Vec<u32> {
        let mut rank = vec![0u32; self.elems.len()];
        for (r, s) in self.cell_starts().enumerate() {
            rank[s] = r as u32;
        }
        (0..self.elems.len())
            .map(|v| rank[self.cell_of[v] as usize])
            .collect()
    }

    pub fn cell_sizes(&self) -> Vec<usize> {
        self.cell_starts()
            .map(|s| self.cell_len[s] as usize)
            .collect()
    }

    /// First cell of maximum size among non-singleton cells.
    pub fn target_cell(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in self.cell_starts() {
            let len = self.cell_len[s];
            if len > 1 && best.is_none_or(|b| len > self.cell_len[b]) {
                best = Some(s);
            }
        }
        best
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.elems.swap(i, j);
        self.pos[self.elems[i] as usize] = i as u32;
        self.pos[self.elems[j] as usize] = j as u32;
    }

    /// Splits `v` off the front of its cell and returns the start of the new
    /// singleton cell.
    pub fn individualize(&mut self, v: usize) -> usize {
        let start = self.cell_of[v] as usize;
        let len = self.cell_len[start] as usize;
        debug_assert!(len > 1);
        self.swap(start, self.pos[v] as usize);
        self.cell_len[start] = 1;
        self.cell_len[start + 1] = (len - 1) as u32;
        for i in start + 1..start + len {
            self.cell_of[self.elems[i] as usize] = (start + 1) as u32;
        }
        self.cells += 1;
        start
    }
}

/// Order-dependent 64-bit mixing used for refinement traces.
#[derive(Clone, Copy, Debug)]
pub struct Trace(u64);

impl Trace {
    pub fn new() -> Self {
        Trace(0x243f_6a88_85a3_08d3)
    }

    pub fn push(&mut self, x: u64) {
        let mut z = self.0
            ^ x.wrapping_add(0x9e37_79b9_7f4a_7c15)
                .wrapping_add(self.0 << 6);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        self.0 = z ^ (z >> 31);
    }

    pub fn value(&self) -> u64 {
        self.0
    }
}

impl Default for Trace {
    fn default() -> Self {
        Trace::new()
    }
}

/// Scratch buffers reused across refinements of one graph.
pub struct Refiner {
    count: Vec<u32>,
    touched: Vec<u32>,
    in_queue: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Refiner {
    pub fn new(n: usize) -> Self {
        Refiner {
            count: vec![0; n],
            touched: Vec::new(),
            in_queue: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    /// Refines `p` to the coarsest equitable partition below it, starting
    /// from the given splitter cells. Returns the trace of split events.
    pub fn refine(&mut self, g: &Graph, p: &mut Partition, splitters: &[usize]) -> u64 {
        let mut trace = Trace::new();
        trace.push(p.cells as u64);
        for &s in splitters {
            if !self.in_queue[s] {
                self.in_queue[s] = true;
                self.queue.push_back(s);
            }
        }
        while let Some(s) = self.queue.pop_front() {
            self.in_queue[s] = false;
            if p.is_discrete() {
                continue;
            }
            let len = p.cell_len[s] as usize;
            for i in s..s + len {
                let u = p.elems[i] as usize;
                for &w in g.neighbors(u) {
                    if self.count[w as usize] == 0 {
                        self.touched.push(w);
                    }
                    self.count[w as usize] += 1;
                }
            }
            let mut touched = std::mem::take(&mut self.touched);
            touched.sort_unstable_by_key(|&w| p.cell_of[w as usize]);
            let mut i = 0;
            while i < touched.len() {
                let c = p.cell_of[touched[i] as usize] as usize;
                let mut j = i;
                while j < touched.len() && p.cell_of[touched[j] as usize] as usize == c {
                    j += 1;
                }
                self.split_cell(p, c, &touched[i..j], &mut trace);
                i = j;
            }
            for &w in &touched {
                self.count[w as usize] = 0;
            }
            touched.clear();
            self.touched = touched;
        }
        trace.push(p.cells as u64);
        trace.value()
    }

    fn split_cell(&mut self, p: &mut Partition, start: usize, hit: &[u32], trace: &mut Trace) {
        let len = p.cell_len[start] as usize;
        if len == 1 {
            return;
        }
        let end = start + len;
        let zeros = len - hit.len();
        // move hit vertices to the tail of the cell, ordered by count
        let mut back = end;
        for &v in hit {
            back -= 1;
            p.swap(p.pos[v as usize] as usize, back);
        }
        let count = &self.count;
        p.elems[back..end].sort_unstable_by_key(|&v| (count[v as usize], v));
        for i in back..end {
            p.pos[p.elems[i] as usize] = i as u32;
        }
        // fragment boundaries
        let mut frags: Vec<(usize, usize, u32)> = Vec::new();
        if zeros > 0 {
            frags.push((start, back, 0));
        }
        let mut a = back;
        while a < end {
            let c = count[p.elems[a] as usize];
            let mut b = a;
            while b < end && count[p.elems[b] as usize] == c {
                b += 1;
            }
            frags.push((a, b, c));
            a = b;
        }
        if frags.len() == 1 {
            trace.push(((start as u64) << 32) | frags[0].2 as u64);
            return;
        }
        trace.push(start as u64);
        for &(a, b, c) in &frags {
            trace.push(((c as u64) << 32) | (b - a) as u64);
        }
        p.cells -= 1;
        for &(a, b, _) in &frags {
            p.set_cell(a, b);
        }
        let was_queued = self.in_queue[start];
        let largest = frags.iter().enumerate().fold(0, |best, (i, f)| {
            if f.1 - f.0 > frags[best].1 - frags[best].0 {
                i
            } else {
                best
            }
        });
        for (i, &(a, _, _)) in frags.iter().enumerate() {
            if (was_queued || i != largest) && !self.in_queue[a] {
                self.in_queue[a] = true;
                self.queue.push_back(a);
            }
        }
    }
}

/// Coarsest equitable refinement of `colors`.
pub fn refine(g: &Graph, colors: &[u32]) -> Partition {
    let mut p = Partition::from_colors(colors);
    let starts: Vec<usize> = p.cell_starts().collect();
    Refiner::new(g.order()).refine(g, &mut p, &starts);
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_splits_into_ends_and_middles() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let p = refine(&g, &[0; 4]);
        assert_eq!(p.cell_count(), 2);
        let c = p.colors();
        assert_eq!(c[0], c[3]);
        assert_eq!(c[1], c[2]);
        assert_ne!(c[0], c[1]);
    }

    #[test]
    fn regular_graph_stays_whole() {
        let cycle = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6)));
        assert_eq!(refine(&cycle, &[0; 6]).cell_count(), 1);
    }

    #[test]
    fn respects_initial_colors() {
        let cycle = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6)));
        let mut colors = vec![1; 6];
        colors[0] = 0;
        let p = refine(&cycle, &colors);
        // distance classes from vertex 0
        let mut sizes = p.cell_sizes();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 2, 2]);
        let c = p.colors();
        assert_eq!(c[1], c[5]);
        assert_eq!(c[2], c[4]);
    }

    #[test]
    fn individualize_then_refine_is_discrete_on_path() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let mut p = refine(&g, &[0; 4]);
        let t = p.target_cell().unwrap();
        let v = p.cell(t)[0] as usize;
        let s = p.individualize(v);
        Refiner::new(4).refine(&g, &mut p, &[s]);
        assert!(p.is_discrete());
    }
}
