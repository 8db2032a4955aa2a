//! A compact undirected simple graph in compressed adjacency form, with
//! graph6 interchange.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n`. Neighbor lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    offsets: Vec<u32>,
    adj: Vec<u32>,
}

/// Largest order the short graph6 size forms can express.
pub const GRAPH6_MAX_ORDER: usize = 258_047;

impl Graph {
    /// Builds a graph from an edge list. Loops are dropped and parallel edges
    /// merged.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(
                u < n && v < n,
                "edge ({u}, {v}) out of range for {n} vertices"
            );
            if u != v {
                lists[u].push(v as u32);
                lists[v].push(u as u32);
            }
        }
        Self::from_lists(lists)
    }

    pub(crate) fn from_lists(mut lists: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut adj = Vec::new();
        offsets.push(0);
        for l in &mut lists {
            l.sort_unstable();
            l.dedup();
            adj.extend_from_slice(l);
            offsets.push(adj.len() as u32);
        }
        Graph { offsets, adj }
    }

    pub fn order(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.adj.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn degree(&self, v: usize) -> usize {
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(move |&v| (u, v as usize))
                .filter(|&(u, v)| u < v)
        })
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.order());
        let mut lists = vec![Vec::new(); self.order()];
        for v in 0..self.order() {
            lists[perm[v]] = self
                .neighbors(v)
                .iter()
                .map(|&u| perm[u as usize] as u32)
                .collect();
        }
        Graph::from_lists(lists)
    }

    /// Breadth-first distances from `src`; `None` for unreachable vertices.
    pub fn bfs(&self, src: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.order()];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in self.neighbors(u) {
                let v = v as usize;
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Largest finite distance from `v`, i.e. eccentricity within its
    /// component.
    pub fn eccentricity(&self, v: usize) -> u32 {
        self.bfs(v).into_iter().flatten().max().unwrap_or(0)
    }

    /// Proper 2-coloring if one exists.
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        let mut color = vec![u8::MAX; self.order()];
        let mut queue = VecDeque::new();
        for s in 0..self.order() {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    let v = v as usize;
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    pub fn is_connected(&self) -> bool {
        self.order() == 0 || self.bfs(0).iter().all(Option::is_some)
    }

    pub fn to_graph6(&self) -> String {
        let n = self.order();
        assert!(
            n <= GRAPH6_MAX_ORDER,
            "graph6 short form supports at most {GRAPH6_MAX_ORDER} vertices"
        );
        let mut out = Vec::new();
        if n <= 62 {
            out.push(n as u8 + 63);
        } else {
            out.push(126);
            for shift in [12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        }
        let nbits = n * n.saturating_sub(1) / 2;
        let mut groups = vec![0u8; nbits.div_ceil(6)];
        for j in 1..n {
            let base = j * (j - 1) / 2;
            for &i in self.neighbors(j) {
                let i = i as usize;
                if i >= j {
                    break;
                }
                let pos = base + i;
                groups[pos / 6] |= 1 << (5 - pos % 6);
            }
        }
        out.extend(groups.into_iter().map(|g| g + 63));
        // every byte is in 63..=126
        String::from_utf8(out).unwrap()
    }

    pub fn from_graph6(text: &str) -> Result<Graph> {
        let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
        let bad = |msg: &str| Error::Graph6(msg.to_string());
        if bytes.is_empty() {
            return Err(bad("empty input"));
        }
        if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
            return Err(Error::Graph6(format!("byte {b} outside 63..=126")));
        }
        let (n, body) = if bytes[0] < 126 {
            ((bytes[0] - 63) as usize, &bytes[1..])
        } else {
            if bytes.len() < 4 {
                return Err(bad("truncated size field"));
            }
            if bytes[1] == 126 {
                return Err(bad("orders above 258047 are not supported"));
            }
            let n = bytes[1..4]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &bytes[4..])
        };
        let nbits = n * n.saturating_sub(1) / 2;
        if body.len() != nbits.div_ceil(6) {
            return Err(Error::Graph6(format!(
                "expected {} adjacency bytes for {n} vertices, found {}",
                nbits.div_ceil(6),
                body.len()
            )));
        }
        let mut edges = Vec::new();
        let mut pos = 0;
        for j in 1..n {
            for i in 0..j {
                if (body[pos / 6] - 63) >> (5 - pos % 6) & 1 == 1 {
                    edges.push((i, j));
                }
                pos += 1;
            }
        }
        if nbits % 6 != 0 && (body[body.len() - 1] - 63) & ((1 << (6 - nbits % 6)) - 1) != 0 {
            return Err(bad("nonzero padding bits"));
        }
        Ok(Graph::from_edges(n, edges))
    }
}
