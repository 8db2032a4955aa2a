//! The `d`-cube `Q_d` and its induced subgraphs `Q_d(f)`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::words::{contains_factor, Word};

pub const MAX_GRAPH_DIM: usize = 14;

const ABSENT: u32 = u32::MAX;

/// `Q_d` when `forbidden` is `None`, otherwise `Q_d(f)`.
///
/// Vertices are indexed in increasing numeric order of their labels read as
/// big-endian binary numbers.
#[derive(Clone, Debug)]
pub struct AvoidanceGraph {
    d: usize,
    forbidden: Option<Word>,
    labels: Vec<u32>,
    index: Vec<u32>,
    graph: Graph,
}

impl AvoidanceGraph {
    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn forbidden(&self) -> Option<&Word> {
        self.forbidden.as_ref()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> Word {
        Word::from_code(self.labels[v], self.d).unwrap()
    }

    pub fn labels(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.order()).map(|v| self.label(v))
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        if w.len() != self.d {
            return None;
        }
        match self.index[w.code() as usize] {
            ABSENT => None,
            i => Some(i as usize),
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.index_of(w).is_some()
    }

    fn require(&self, w: &Word) -> Result<usize> {
        self.index_of(w).ok_or_else(|| Error::NotAVertex {
            word: w.to_string(),
        })
    }
}

/// Builds `Q_d(f)`, or the full `Q_d` when `f` is `None`.
pub fn build_graph(d: usize, f: Option<&Word>) -> Result<AvoidanceGraph> {
    if !(1..=MAX_GRAPH_DIM).contains(&d) {
        return Err(Error::DimensionOutOfRange {
            d,
            min: 1,
            max: MAX_GRAPH_DIM,
        });
    }
    let size = 1usize << d;
    let mut labels = Vec::new();
    let mut index = vec![ABSENT; size];
    for code in 0..size as u32 {
        let keep = match f {
            Some(f) => !contains_factor(&Word::from_code(code, d)?, f),
            None => true,
        };
        if keep {
            index[code as usize] = labels.len() as u32;
            labels.push(code);
        }
    }
    let lists = labels
        .iter()
        .map(|&code| {
            let mut nb: Vec<u32> = (0..d)
                .map(|j| index[(code ^ (1 << j)) as usize])
                .filter(|&i| i != ABSENT)
                .collect();
            nb.sort_unstable();
            nb
        })
        .collect();
    Ok(AvoidanceGraph {
        d,
        forbidden: f.copied(),
        labels,
        index,
        graph: Graph::from_lists(lists),
    })
}

/// `w + e_i` modulo 2.
pub fn flip_bit(w: &Word, i: usize) -> Result<Word> {
    w.flip(i)
}

/// Vertices removed from `Q_d` to form `Q_d(f)`, plus the layers
/// `X_i = {u f v : |u| = i, |v| = k-1-i}` when `f` is `0^k 1^k` or
/// `0^{k+1} 1^{k-1}` and `d = 3k - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcludedSets {
    pub excluded: Vec<Word>,
    pub layers: Option<Vec<Vec<Word>>>,
}

pub fn excluded_sets(d: usize, f: &Word) -> Result<ExcludedSets> {
    if f.len() > d || d > MAX_GRAPH_DIM {
        return Err(Error::Precondition(format!(
            "need |f| <= d <= {MAX_GRAPH_DIM}, got |f| = {}, d = {d}",
            f.len()
        )));
    }
    let excluded = (0..1u32 << d)
        .map(|c| Word::from_code(c, d).unwrap())
        .filter(|w| contains_factor(w, f))
        .collect();
    let layers = match split_block_pair(f) {
        Some(k) if d == 3 * k - 1 => Some(
            (0..k)
                .map(|i| {
                    let mut layer: Vec<Word> = (0..1u32 << (k - 1))
                        .map(|free| {
                            let v_len = k - 1 - i;
                            let u = free >> v_len;
                            let v = free & ((1 << v_len) - 1);
                            let code = (u << (2 * k + v_len)) | (f.code() << v_len) | v;
                            Word::from_code(code, d).unwrap()
                        })
                        .collect();
                    layer.sort();
                    layer
                })
                .collect(),
        ),
        _ => None,
    };
    Ok(ExcludedSets { excluded, layers })
}

/// `Some(k)` when `f` is `0^k 1^k` or `0^{k+1} 1^{k-1}` with `k >= 1`.
pub(crate) fn split_block_pair(f: &Word) -> Option<usize> {
    let n = f.len();
    if !n.is_multiple_of(2) || n < 2 {
        return None;
    }
    let k = n / 2;
    let zeros = f.digits().take_while(|&b| b == 0).count();
    let rest_ones = f.digits().skip(zeros).all(|b| b == 1);
    (rest_ones && (zeros == k || zeros == k + 1)).then_some(k)
}

/// Shortest-path length between two vertices of `g`, `None` if they lie in
/// different components.
pub fn graph_distance(g: &AvoidanceGraph, u: &Word, v: &Word) -> Result<Option<usize>> {
    let (a, b) = (g.require(u)?, g.require(v)?);
    Ok(g.graph.bfs(a)[b].map(|x| x as usize))
}

/// Number of 4-cycles of `g` through the edge `uv`.
pub fn count_c4_through_edge(g: &AvoidanceGraph, u: &Word, v: &Word) -> Result<usize> {
    let (a, b) = (g.require(u)?, g.require(v)?);
    if !g.graph.has_edge(a, b) {
        return Err(Error::NotAnEdge {
            u: u.to_string(),
            v: v.to_string(),
        });
    }
    Ok(c4_through(&g.graph, a, b))
}

pub(crate) fn c4_through(g: &Graph, a: usize, b: usize) -> usize {
    let mut n = 0;
    for &x in g.neighbors(b) {
        let x = x as usize;
        if x == a {
            continue;
        }
        n += g
            .neighbors(a)
            .iter()
            .filter(|&&y| y as usize != b && y as usize != x && g.has_edge(x, y as usize))
            .count();
    }
    n
}

/// Path from `b` to `c` that flips the differing positions from left to
/// right.
pub fn left_to_right_path(b: &Word, c: &Word) -> Result<Vec<Word>> {
    if b.len() != c.len() {
        return Err(Error::Precondition(format!(
            "length mismatch: {} vs {}",
            b.len(),
            c.len()
        )));
    }
    let mut path = vec![*b];
    let mut cur = *b;
    for i in 1..=b.len() {
        if b.bit(i) != c.bit(i) {
            cur = cur.flip(i)?;
            path.push(cur);
        }
    }
    Ok(path)
}

pub fn edge_count(g: &AvoidanceGraph) -> usize {
    g.graph.edge_count()
}

/// Edges of `Q_d` with both ends in `words`, as index pairs into `words`.
pub fn induced_cube_edges(words: &[Word]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            if words[i].len() == words[j].len() && words[i].hamming(&words[j]) == 1 {
                out.push((i, j));
            }
        }
    }
    out
}

/// Common neighbors of two vertices.
pub fn common_neighbors(g: &Graph, a: usize, b: usize) -> usize {
    let (na, nb) = (g.neighbors(a), g.neighbors(b));
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < na.len() && j < nb.len() {
        match na[i].cmp(&nb[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Maximum number of internally vertex-disjoint shortest `a,b`-paths.
pub fn disjoint_shortest_paths(g: &Graph, a: usize, b: usize) -> usize {
    if a == b {
        return 0;
    }
    let from_a = g.bfs(a);
    let from_b = g.bfs(b);
    let Some(dist) = from_a[b] else { return 0 };
    // vertex x sits on a geodesic iff d(a,x) + d(x,b) = d(a,b)
    let on_geodesic =
        |x: usize| matches!((from_a[x], from_b[x]), (Some(p), Some(q)) if p + q == dist);
    // split every vertex into in/out nodes joined by a unit arc
    let n = g.order();
    let node_in = |x: usize| 2 * x;
    let node_out = |x: usize| 2 * x + 1;
    let mut cap: std::collections::HashMap<(usize, usize), i32> = std::collections::HashMap::new();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    let mut add = |u: usize, v: usize, c: i32, succ: &mut Vec<Vec<usize>>| {
        *cap.entry((u, v)).or_insert(0) += c;
        cap.entry((v, u)).or_insert(0);
        succ[u].push(v);
        succ[v].push(u);
    };
    for x in (0..n).filter(|&x| on_geodesic(x)) {
        let inner = if x == a || x == b { i32::MAX / 2 } else { 1 };
        add(node_in(x), node_out(x), inner, &mut succ);
        for &y in g.neighbors(x) {
            let y = y as usize;
            if on_geodesic(y) && from_a[y] == from_a[x].map(|p| p + 1) {
                add(node_out(x), node_in(y), 1, &mut succ);
            }
        }
    }
    let (src, dst) = (node_out(a), node_in(b));
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; 2 * n];
        prev[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &succ[u] {
                if prev[v] == usize::MAX && cap[&(u, v)] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[dst] == usize::MAX {
            return flow;
        }
        let mut v = dst;
        while v != src {
            let u = prev[v];
            *cap.get_mut(&(u, v)).unwrap() -= 1;
            *cap.get_mut(&(v, u)).unwrap() += 1;
            v = u;
        }
        flow += 1;
    }
}
