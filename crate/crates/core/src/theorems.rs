//! Explicit isomorphisms between cubes and end-to-end checks of the
//! structural results about them.
//!
//! Both constructions here are hypercube automorphisms of the form "permute
//! coordinates, then complement some of them", captured by
//! [`CoordinateMap`].

use serde::Serialize;

use crate::counting::{count_avoiders, verify_count_chain};
use crate::cube::{build_graph, excluded_sets, AvoidanceGraph};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::harness::{isom_classes, HarnessOptions};
use crate::iso::{are_isomorphic, canonical_certificate, verify_mapping};
use crate::words::{bit_change_indices, bit_changes, Word};

/// Moves bit `i` of the input to position `targets[i - 1]` of the output,
/// then complements the masked output positions. Positions are 1-indexed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoordinateMap {
    targets: Vec<usize>,
    /// `mask[t - 1]` is set when output position `t` is complemented.
    mask: Vec<bool>,
}

impl CoordinateMap {
    pub fn identity(d: usize) -> Self {
        CoordinateMap {
            targets: (1..=d).collect(),
            mask: vec![false; d],
        }
    }

    pub fn new(targets: Vec<usize>, mask: Vec<bool>) -> Result<Self> {
        let d = targets.len();
        if mask.len() != d {
            return Err(Error::Precondition(format!(
                "mask has length {}, expected {d}",
                mask.len()
            )));
        }
        let mut seen = vec![false; d + 1];
        for &p in &targets {
            if p == 0 || p > d || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Precondition(format!(
                    "{targets:?} is not a permutation of 1..={d}"
                )));
            }
        }
        Ok(CoordinateMap { targets, mask })
    }

    pub fn dimension(&self) -> usize {
        self.targets.len()
    }

    /// Output position of input bit `i`.
    pub fn target(&self, i: usize) -> usize {
        self.targets[i - 1]
    }

    pub fn complemented(&self) -> Vec<usize> {
        (1..=self.dimension())
            .filter(|&t| self.mask[t - 1])
            .collect()
    }

    pub fn apply(&self, w: &Word) -> Word {
        let d = self.dimension();
        assert_eq!(w.len(), d, "word length does not match map dimension");
        let mut y = 0u32;
        for i in 1..=d {
            let t = self.targets[i - 1];
            let bit = w.bit(i) ^ self.mask[t - 1] as u8;
            y |= (bit as u32) << (d - t);
        }
        Word::from_code(y, d).unwrap()
    }

    pub fn is_identity(&self) -> bool {
        self.targets.iter().enumerate().all(|(i, &p)| p == i + 1) && self.mask.iter().all(|&m| !m)
    }

    /// Vertex correspondence `V(g) -> V(h)`, or `None` if some vertex of `g`
    /// lands outside `h`.
    pub fn vertex_mapping(&self, g: &AvoidanceGraph, h: &AvoidanceGraph) -> Option<Vec<usize>> {
        g.labels().map(|w| h.index_of(&self.apply(&w))).collect()
    }
}

/// `u_1…u_k ū_{2k} u_{k+1}…u_{2k-1} u_{2k+1}…u_d`, valid for `d >= 2k`.
fn block_pair_map_unchecked(k: usize, d: usize) -> CoordinateMap {
    let mut targets: Vec<usize> = (1..=d).collect();
    // input k+1..2k-1 shifts right by one, input 2k lands at k+1
    for i in k + 1..2 * k {
        targets[i - 1] = i + 1;
    }
    targets[2 * k - 1] = k + 1;
    let mut mask = vec![false; d];
    mask[k] = true;
    CoordinateMap { targets, mask }
}

/// The automorphism of `Q_d` carrying `Q_d(0^k 1^k)` onto
/// `Q_d(0^{k+1} 1^{k-1})`, for `k >= 2` and `2k + 1 <= d <= 3k - 1`.
pub fn block_pair_map(k: usize, d: usize) -> Result<CoordinateMap> {
    if k < 2 || d < 2 * k + 1 || d > 3 * k - 1 {
        return Err(Error::Precondition(format!(
            "alpha needs k >= 2 and 2k+1 <= d <= 3k-1, got k = {k}, d = {d}"
        )));
    }
    Ok(block_pair_map_unchecked(k, d))
}

/// `0^k 1^k` and `0^{k+1} 1^{k-1}`.
pub fn block_pair(k: usize) -> Result<(Word, Word)> {
    let f = Word::zeros(k)?.concat(&Word::ones(k)?)?;
    let g = match k {
        1 => Word::zeros(2)?,
        _ => Word::zeros(k + 1)?.concat(&Word::ones(k - 1)?)?,
    };
    Ok((f, g))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `d < 2k`: both graphs are the whole cube.
    FullCube,
    /// `d = 2k`: each graph is the cube minus one vertex.
    OneVertexRemoved,
    /// `2k + 1 <= d <= 3k - 1`.
    Alpha,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockPairReport {
    pub k: usize,
    pub d: usize,
    pub f: Word,
    pub g: Word,
    pub regime: Regime,
    pub vertices: (usize, usize),
    pub excluded: (usize, usize),
    pub layer_sizes: Option<Vec<usize>>,
    pub map_verified: bool,
    pub certificates_equal: bool,
}

impl BlockPairReport {
    pub fn holds(&self) -> bool {
        self.map_verified && self.certificates_equal
    }

    /// The explicit map and the certificates disagree.
    pub fn inconsistent(&self) -> bool {
        self.map_verified != self.certificates_equal
    }
}

/// Checks `Q_d(0^k 1^k) ≅ Q_d(0^{k+1} 1^{k-1})` both through the explicit map
/// and through canonical certificates.
pub fn verify_block_pair(k: usize, d: usize, budget: u64) -> Result<BlockPairReport> {
    if k < 2 || d > 3 * k - 1 {
        return Err(Error::Precondition(format!(
            "need k >= 2 and d <= 3k-1, got k = {k}, d = {d}"
        )));
    }
    let (f, g) = block_pair(k)?;
    let gf = build_graph(d, Some(&f))?;
    let gg = build_graph(d, Some(&g))?;
    let (regime, map) = if d < 2 * k {
        (Regime::FullCube, CoordinateMap::identity(d))
    } else if d == 2 * k {
        (Regime::OneVertexRemoved, block_pair_map_unchecked(k, d))
    } else {
        (Regime::Alpha, block_pair_map(k, d)?)
    };
    let map_verified = map
        .vertex_mapping(&gf, &gg)
        .is_some_and(|m| verify_mapping(gf.graph(), gg.graph(), &m));
    let certificates_equal =
        canonical_certificate(gf.graph(), budget)? == canonical_certificate(gg.graph(), budget)?;
    let (excluded, layer_sizes) = if d >= 2 * k {
        let xf = excluded_sets(d, &f)?;
        let xg = excluded_sets(d, &g)?;
        (
            (xf.excluded.len(), xg.excluded.len()),
            xf.layers.map(|l| l.iter().map(Vec::len).collect()),
        )
    } else {
        ((0, 0), None)
    };
    Ok(BlockPairReport {
        k,
        d,
        f,
        g,
        regime,
        vertices: (gf.order(), gg.order()),
        excluded,
        layer_sizes,
        map_verified,
        certificates_equal,
    })
}

/// The isomorphism `Q_d(f) -> Q_d(g)` for words of length `d - 1` with the
/// same number of blocks.
///
/// Positions 1 and `d` stay put, the i-th bit-change index of `f` goes to
/// the i-th of `g`, and the remaining positions keep their relative order.
/// Output position `t` is complemented when `c'_t` differs from the bit of
/// `c` that lands there, where `c = f f_{|f|}` and `c' = g g_{|g|}`. For
/// words starting with 0 this compares `f` and `g` directly; complementing
/// either word first yields the same map.
pub fn equal_blocks_map(f: &Word, g: &Word, d: usize) -> Result<CoordinateMap> {
    if d < 2 || f.len() != d - 1 || g.len() != d - 1 {
        return Err(Error::Precondition(format!(
            "need |f| = |g| = d - 1, got {}, {}, d = {d}",
            f.len(),
            g.len()
        )));
    }
    if bit_changes(f) != bit_changes(g) {
        return Err(Error::Precondition(format!(
            "bit_changes({f}) = {} differs from bit_changes({g}) = {}",
            bit_changes(f),
            bit_changes(g)
        )));
    }
    let cf = f.push(f.last())?;
    let cg = g.push(g.last())?;
    let (fi, gi) = (bit_change_indices(f), bit_change_indices(g));
    let mut targets = vec![0usize; d];
    targets[0] = 1;
    targets[d - 1] = d;
    for (&a, &b) in fi.iter().zip(&gi) {
        targets[a - 1] = b;
    }
    let rest_src = (2..d).filter(|i| !fi.contains(i));
    let rest_dst = (2..d).filter(|i| !gi.contains(i));
    for (a, b) in rest_src.zip(rest_dst) {
        targets[a - 1] = b;
    }
    let mut inv = vec![0usize; d + 1];
    for i in 1..=d {
        inv[targets[i - 1]] = i;
    }
    let mask = (1..=d).map(|t| cf.bit(inv[t]) != cg.bit(t)).collect();
    CoordinateMap::new(targets, mask)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BlocksReport {
    pub d: usize,
    pub words: usize,
    pub equal_block_pairs: usize,
    pub unequal_block_pairs: usize,
    /// A pair that broke the equivalence, if any.
    pub counterexample: Option<(Word, Word)>,
}

impl BlocksReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// For all unordered pairs of length-`(d-1)` words: equal block counts must
/// give a verified [`equal_blocks_map`], unequal ones distinct certificates.
pub fn verify_equal_blocks(d: usize, budget: u64, exec: Execution) -> Result<BlocksReport> {
    if !(2..=11).contains(&d) {
        return Err(Error::DimensionOutOfRange { d, min: 2, max: 11 });
    }
    let k = d - 1;
    let words: Vec<Word> = (0..1u32 << k)
        .map(|c| Word::from_code(c, k).unwrap())
        .collect();
    let graphs = exec::try_map(exec, &words, |f| build_graph(d, Some(f)))?;
    let certs = exec::try_map(exec, &graphs, |g| canonical_certificate(g.graph(), budget))?;
    let mut report = BlocksReport {
        d,
        words: words.len(),
        ..Default::default()
    };
    let mut equal_pairs = Vec::new();
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            if bit_changes(&words[i]) == bit_changes(&words[j]) {
                report.equal_block_pairs += 1;
                equal_pairs.push((i, j));
            } else {
                report.unequal_block_pairs += 1;
                if report.counterexample.is_none() && certs[i] == certs[j] {
                    report.counterexample = Some((words[i], words[j]));
                }
            }
        }
    }
    let failures = exec::try_map(
        exec,
        &equal_pairs,
        |&(i, j)| -> Result<Option<(Word, Word)>> {
            let map = equal_blocks_map(&words[i], &words[j], d)?;
            let ok = map
                .vertex_mapping(&graphs[i], &graphs[j])
                .is_some_and(|m| verify_mapping(graphs[i].graph(), graphs[j].graph(), &m));
            Ok((!ok || certs[i] != certs[j]).then_some((words[i], words[j])))
        },
    )?;
    if report.counterexample.is_none() {
        report.counterexample = failures.into_iter().flatten().next();
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct LengthReport {
    pub d: usize,
    pub classes: usize,
    pub mixed_length_class: Option<Vec<Word>>,
    /// First `k` where the counting chain failed.
    pub chain_failure: Option<usize>,
}

impl LengthReport {
    pub fn holds(&self) -> bool {
        self.mixed_length_class.is_none() && self.chain_failure.is_none()
    }
}

/// Classifies every forbidden word of length `1..=d` at dimension `d` and
/// checks that isomorphic cubes come from equally long words, together with
/// the vertex-count chain behind it for every `k < d`.
pub fn verify_equal_length(d: usize, opts: &HarnessOptions) -> Result<LengthReport> {
    if !(1..=11).contains(&d) {
        return Err(Error::DimensionOutOfRange { d, min: 1, max: 11 });
    }
    let table = isom_classes(d, 1, d, opts)?;
    let mixed_length_class = table
        .classes
        .values()
        .find(|ws| ws.iter().any(|w| w.len() != ws[0].len()))
        .cloned();
    let mut chain_failure = None;
    for k in 1..d {
        if !verify_count_chain(d, k)? {
            chain_failure = Some(k);
            break;
        }
    }
    Ok(LengthReport {
        d,
        classes: table.classes.len(),
        mixed_length_class,
        chain_failure,
    })
}

/// `n_d(f) <= n_d(0^{|f|}) < n_d(0^{|f|} 1) <= n_d(g)` for `|f| < |g| <= d`.
pub fn length_chain_holds(d: usize, f: &Word, g: &Word) -> Result<bool> {
    if f.len() >= g.len() || g.len() > d {
        return Err(Error::Precondition(format!(
            "need |f| < |g| <= d, got {}, {}, d = {d}",
            f.len(),
            g.len()
        )));
    }
    let z = Word::zeros(f.len())?;
    let n_f = count_avoiders(d, f)?;
    let n_z = count_avoiders(d, &z)?;
    let n_z1 = count_avoiders(d, &z.push(1)?)?;
    let n_g = count_avoiders(d, g)?;
    Ok(n_f <= n_z && n_z < n_z1 && n_z1 <= n_g)
}

/// Isomorphism `Q_d(f) -> Q_d(g)` decided through canonical labeling, with
/// the witness mapping.
pub fn cube_isomorphism(d: usize, f: &Word, g: &Word, budget: u64) -> Result<Option<Vec<usize>>> {
    let gf = build_graph(d, Some(f))?;
    let gg = build_graph(d, Some(g))?;
    are_isomorphic(gf.graph(), gg.graph(), budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::DEFAULT_NODE_BUDGET;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn alpha_on_five_coordinates() {
        let a = block_pair_map(2, 5).unwrap();
        // u1 u2 ~u4 u3 u5
        assert_eq!(a.apply(&w("10110")), w("10010"));
        assert_eq!(a.apply(&w("00000")), w("00100"));
        assert_eq!(a.complemented(), vec![3]);
        assert_eq!(a.apply(&w("00011")), w("00001"));
        assert!(block_pair_map(2, 4).is_err());
        assert!(block_pair_map(2, 6).is_err());
        assert!(block_pair_map(1, 3).is_err());
    }

    #[test]
    fn alpha_is_a_bijection() {
        let a = block_pair_map(3, 8).unwrap();
        let mut seen = vec![false; 256];
        for c in 0..256 {
            let img = a.apply(&Word::from_code(c, 8).unwrap());
            assert!(!std::mem::replace(&mut seen[img.code() as usize], true));
        }
    }

    #[test]
    fn alpha_preimage_pattern() {
        // alpha(x 0^k 1^k y) = x 0^{k+1} 1^{k-1} y
        let a = block_pair_map(2, 5).unwrap();
        assert_eq!(a.apply(&w("00011")), w("00001"));
        assert_eq!(a.apply(&w("10011")), w("10001"));
    }

    #[test]
    fn block_pair_small_cases() {
        for (k, d) in [(2, 5), (3, 8), (2, 4), (2, 3), (2, 1)] {
            let r = verify_block_pair(k, d, DEFAULT_NODE_BUDGET).unwrap();
            assert!(r.holds(), "k = {k}, d = {d}: {r:?}");
        }
        let r = verify_block_pair(2, 5, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(r.excluded, (4, 4));
        assert_eq!(r.layer_sizes, Some(vec![2, 2]));
        assert_eq!(r.regime, Regime::Alpha);
        assert!(verify_block_pair(2, 6, DEFAULT_NODE_BUDGET).is_err());
    }

    #[test]
    fn psi_examples() {
        assert!(equal_blocks_map(&w("0110"), &w("0110"), 5)
            .unwrap()
            .is_identity());
        let f = w("0011");
        let g = w("0001");
        let psi = equal_blocks_map(&f, &g, 5).unwrap();
        let mut a: Vec<Word> = excluded_sets(5, &f)
            .unwrap()
            .excluded
            .iter()
            .map(|x| psi.apply(x))
            .collect();
        a.sort();
        assert_eq!(a, excluded_sets(5, &g).unwrap().excluded);
        assert!(equal_blocks_map(&w("0011"), &w("0101"), 5).is_err());
        assert!(equal_blocks_map(&w("0011"), &w("001"), 5).is_err());
        // words starting with 1 are handled without normalizing first
        let psi = equal_blocks_map(&w("1101"), &w("0100"), 5).unwrap();
        let gf = build_graph(5, Some(&w("1101"))).unwrap();
        let gg = build_graph(5, Some(&w("0100"))).unwrap();
        let m = psi.vertex_mapping(&gf, &gg).unwrap();
        assert!(verify_mapping(gf.graph(), gg.graph(), &m));
    }

    #[test]
    fn blocks_small_dimensions() {
        for d in 2..=6 {
            let r = verify_equal_blocks(d, DEFAULT_NODE_BUDGET, Execution::Sequential).unwrap();
            assert!(r.holds(), "d = {d}: {r:?}");
        }
        let r = verify_equal_blocks(4, DEFAULT_NODE_BUDGET, Execution::Sequential).unwrap();
        assert_eq!(r.words, 8);
        assert_eq!(r.equal_block_pairs + r.unequal_block_pairs, 28);
    }

    #[test]
    fn zero_one_one_zero_differs_from_zero_one_zero_zero() {
        assert!(
            cube_isomorphism(6, &w("0110"), &w("0100"), DEFAULT_NODE_BUDGET)
                .unwrap()
                .is_none()
        );
        assert!(
            cube_isomorphism(5, &w("0011"), &w("0001"), DEFAULT_NODE_BUDGET)
                .unwrap()
                .is_some()
        );
    }

    #[test]
    fn length_chain() {
        assert!(length_chain_holds(8, &w("010"), &w("00110")).unwrap());
        assert!(length_chain_holds(8, &w("0110"), &w("0110")).is_err());
    }
}
