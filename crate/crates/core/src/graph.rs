//! Multiplex network data model, edge-list ingestion, synthetic correlated
//! layers, and cross-validation splits.
//!
//! The on-disk format is one undirected edge per line:
//!
//! ```text
//! layer src dst [weight]
//! ```
//!
//! Layers are 1-indexed; node labels are arbitrary nonnegative integers that
//! get remapped to `0..N-1` in ascending label order; weights are accepted
//! and ignored (the model is unweighted). Blank lines and `#` comments are
//! skipped. Self-loop lines are dropped and counted rather than rejected.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::rng::{mix, stream_rng};
use crate::Result;

/// An undirected edge with the invariant `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: u32,
    hi: u32,
}

impl Edge {
    /// Normalized edge between two distinct nodes.
    pub fn new(a: u32, b: u32) -> Result<Self> {
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        Ok(Self {
            lo: a.min(b),
            hi: a.max(b),
        })
    }

    pub fn lo(&self) -> u32 {
        self.lo
    }

    pub fn hi(&self) -> u32 {
        self.hi
    }
}

/// A set of undirected edges; ordered so iteration is deterministic.
pub type EdgeSet = BTreeSet<Edge>;

/// Layer/node/edge counts, as reported for a loaded network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetworkStats {
    pub layers: usize,
    pub nodes: usize,
    pub edges: usize,
}

/// A multiplex network: `L ≥ 2` undirected layers over one shared node set
/// `0..N-1`. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplexNetwork {
    num_nodes: usize,
    layers: Vec<EdgeSet>,
}

impl MultiplexNetwork {
    /// Validate and build: at least two layers, every endpoint `< num_nodes`.
    pub fn new(num_nodes: usize, layers: Vec<EdgeSet>) -> Result<Self> {
        if layers.len() < 2 {
            return Err(Error::TooFewLayers(layers.len()));
        }
        for layer in &layers {
            for e in layer {
                if e.hi as usize >= num_nodes {
                    return Err(Error::NodeOutOfRange {
                        node: e.hi,
                        num_nodes,
                    });
                }
            }
        }
        Ok(Self { num_nodes, layers })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, i: usize) -> &EdgeSet {
        &self.layers[i]
    }

    pub fn layers(&self) -> &[EdgeSet] {
        &self.layers
    }

    pub fn stats(&self) -> NetworkStats {
        NetworkStats {
            layers: self.layers.len(),
            nodes: self.num_nodes,
            edges: self.layers.iter().map(BTreeSet::len).sum(),
        }
    }

    /// Serialize in the edge-list format (1-indexed layers, internal node
    /// ids as labels). Nodes without any incident edge are not representable
    /// in the format and silently vanish on a write/load round trip.
    pub fn write_edge_list(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        for (i, layer) in self.layers.iter().enumerate() {
            for e in layer {
                writeln!(out, "{} {} {}", i + 1, e.lo, e.hi).expect("string write");
            }
        }
        fs::write(path, out)?;
        Ok(())
    }
}

/// A loaded network plus ingestion diagnostics.
#[derive(Debug, Clone)]
pub struct LoadReport {
    pub network: MultiplexNetwork,
    /// Self-loop lines dropped.
    pub self_loops_dropped: usize,
    /// Duplicate undirected edges merged within their layer.
    pub duplicates_merged: usize,
}

/// Load an edge list. Layer indices above `declared_layers` (when given) are
/// malformed; layer index 0 always is.
pub fn load_edge_list_declared(path: &Path, declared_layers: Option<u32>) -> Result<LoadReport> {
    let text = fs::read_to_string(path)?;
    let path_str = path.display().to_string();
    let malformed = |line: u64, msg: String| Error::MalformedLine {
        path: path_str.clone(),
        line,
        msg,
    };

    let mut raw_edges: Vec<(u32, u64, u64)> = Vec::new();
    let mut self_loops_dropped = 0usize;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx as u64 + 1;
        let stripped = line.trim();
        if stripped.is_empty() || stripped.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = stripped.split_whitespace().collect();
        if tokens.len() != 3 && tokens.len() != 4 {
            return Err(malformed(
                line_no,
                format!("expected `layer src dst [weight]`, got {} fields", tokens.len()),
            ));
        }
        let layer: u32 = tokens[0]
            .parse()
            .map_err(|_| malformed(line_no, format!("bad layer index {:?}", tokens[0])))?;
        if layer == 0 {
            return Err(malformed(line_no, "layer indices are 1-based".into()));
        }
        if let Some(max) = declared_layers {
            if layer > max {
                return Err(malformed(
                    line_no,
                    format!("layer {layer} exceeds declared maximum {max}"),
                ));
            }
        }
        let src: u64 = tokens[1]
            .parse()
            .map_err(|_| malformed(line_no, format!("bad node label {:?}", tokens[1])))?;
        let dst: u64 = tokens[2]
            .parse()
            .map_err(|_| malformed(line_no, format!("bad node label {:?}", tokens[2])))?;
        if tokens.len() == 4 {
            tokens[3]
                .parse::<f64>()
                .map_err(|_| malformed(line_no, format!("bad weight {:?}", tokens[3])))?;
        }
        if src == dst {
            self_loops_dropped += 1;
            continue;
        }
        raw_edges.push((layer, src, dst));
    }

    // node universe = distinct labels, remapped in ascending label order
    let labels: BTreeSet<u64> = raw_edges
        .iter()
        .flat_map(|(_, s, d)| [*s, *d])
        .collect();
    let index_of = |label: u64| labels.range(..label).count() as u32;

    let num_layers = raw_edges.iter().map(|(l, _, _)| *l).max().unwrap_or(0) as usize;
    if num_layers < 2 {
        return Err(Error::TooFewLayers(num_layers));
    }
    let mut layers = vec![EdgeSet::new(); num_layers];
    let mut duplicates_merged = 0usize;
    for (layer, src, dst) in raw_edges {
        let e = Edge::new(index_of(src), index_of(dst))?;
        if !layers[layer as usize - 1].insert(e) {
            duplicates_merged += 1;
        }
    }

    Ok(LoadReport {
        network: MultiplexNetwork::new(labels.len(), layers)?,
        self_loops_dropped,
        duplicates_merged,
    })
}

/// Load an edge list with no declared layer maximum.
pub fn load_edge_list(path: &Path) -> Result<LoadReport> {
    load_edge_list_declared(path, None)
}

/// All node pairs over `0..num_nodes` that are not in `layer`, in ascending
/// order.
fn non_edges(layer: &EdgeSet, num_nodes: usize) -> Vec<Edge> {
    let mut result = Vec::new();
    for a in 0..num_nodes as u32 {
        for b in (a + 1)..num_nodes as u32 {
            let e = Edge { lo: a, hi: b };
            if !layer.contains(&e) {
                result.push(e);
            }
        }
    }
    result
}

/// Number of retained edges for a similarity in `[0, 1]`: `⌈s·m⌉`, with
/// products within 1e-9 of an integer snapped to it so that e.g.
/// `0.9 × 100` keeps exactly 90 edges.
fn retained_count(similarity: f64, base_size: usize) -> usize {
    let raw = similarity * base_size as f64;
    let snapped = if (raw - raw.round()).abs() < 1e-9 {
        raw.round()
    } else {
        raw.ceil()
    };
    (snapped as usize).min(base_size)
}

/// Generate a layer `similarity`-similar to `base`: exactly `⌈s·|base|⌉`
/// edges kept from `base`, the rest drawn uniformly without replacement from
/// the base layer's non-edges, so the edge count is preserved.
pub fn similar_layer(
    base: &EdgeSet,
    num_nodes: usize,
    similarity: f64,
    seed: u64,
) -> Result<EdgeSet> {
    if base.is_empty() {
        return Err(Error::EmptyBaseLayer);
    }
    if !(0.0..=1.0).contains(&similarity) {
        return Err(Error::InvalidSimilarity(similarity));
    }
    let base_vec: Vec<Edge> = base.iter().copied().collect();
    let keep = retained_count(similarity, base_vec.len());
    let fill = base_vec.len() - keep;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut result = EdgeSet::new();
    for i in index::sample(&mut rng, base_vec.len(), keep) {
        result.insert(base_vec[i]);
    }
    if fill > 0 {
        let pool = non_edges(base, num_nodes);
        if pool.len() < fill {
            return Err(Error::NotEnoughNonEdges {
                needed: fill,
                available: pool.len(),
            });
        }
        for i in index::sample(&mut rng, pool.len(), fill) {
            result.insert(pool[i]);
        }
    }
    debug_assert_eq!(result.len(), base_vec.len());
    Ok(result)
}

/// The two synthetic constructions used by the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticKind {
    /// Six layers: a borrowed base layer plus generated layers of
    /// similarity 0.9, 0.1, 0.1, 0.05, 0.01.
    RandInternship,
    /// Three layers: a borrowed base layer plus 0.9- and 0.1-similar layers.
    Small3Layers,
}

impl SyntheticKind {
    pub fn similarities(&self) -> &'static [f64] {
        match self {
            Self::RandInternship => &[0.9, 0.1, 0.1, 0.05, 0.01],
            Self::Small3Layers => &[0.9, 0.1],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::RandInternship => "rand-internship",
            Self::Small3Layers => "small-3-layers",
        }
    }
}

impl std::str::FromStr for SyntheticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rand-internship" => Ok(Self::RandInternship),
            "small-3-layers" => Ok(Self::Small3Layers),
            other => Err(Error::InvalidConfig(format!(
                "unknown synthetic network {other:?} (expected rand-internship or small-3-layers)"
            ))),
        }
    }
}

/// Build a synthetic multiplex from the first layer of `source`: that layer
/// verbatim, then one generated layer per similarity in the kind's schedule.
///
/// The result is compacted to the nodes that actually appear in its layers
/// (re-indexed in ascending order), so it survives an edge-list round trip.
pub fn build_synthetic(
    kind: SyntheticKind,
    source: &MultiplexNetwork,
    seed: u64,
) -> Result<MultiplexNetwork> {
    let base = source.layer(0);
    let mut layers = vec![base.clone()];
    for (i, &s) in kind.similarities().iter().enumerate() {
        layers.push(similar_layer(
            base,
            source.num_nodes(),
            s,
            mix(seed, i as u64 + 1),
        )?);
    }

    let used: BTreeSet<u32> = layers
        .iter()
        .flat_map(|l| l.iter().flat_map(|e| [e.lo, e.hi]))
        .collect();
    let compact = |n: u32| used.range(..n).count() as u32;
    let layers = layers
        .into_iter()
        .map(|l| {
            l.into_iter()
                .map(|e| Edge {
                    lo: compact(e.lo),
                    hi: compact(e.hi),
                })
                .collect()
        })
        .collect();
    MultiplexNetwork::new(used.len(), layers)
}

/// Per-layer 5-way (or `num_folds`-way) partition of the positive edges plus
/// matched negative samples, for one cross-validation trial.
#[derive(Debug, Clone)]
pub struct EdgeSplit {
    num_folds: usize,
    /// `positives[layer][fold]`
    positives: Vec<Vec<Vec<Edge>>>,
    /// `negatives[layer][fold]`, same sizes as `positives`
    negatives: Vec<Vec<Vec<Edge>>>,
}

impl EdgeSplit {
    pub fn num_folds(&self) -> usize {
        self.num_folds
    }

    pub fn positives(&self, layer: usize, fold: usize) -> &[Edge] {
        &self.positives[layer][fold]
    }

    pub fn negatives(&self, layer: usize, fold: usize) -> &[Edge] {
        &self.negatives[layer][fold]
    }

    /// Positive edges of every fold except `heldout`.
    pub fn train_positives(&self, layer: usize, heldout: usize) -> Vec<Edge> {
        self.fold_union(&self.positives, layer, heldout)
    }

    /// Negative edges of every fold except `heldout`.
    pub fn train_negatives(&self, layer: usize, heldout: usize) -> Vec<Edge> {
        self.fold_union(&self.negatives, layer, heldout)
    }

    fn fold_union(&self, sets: &[Vec<Vec<Edge>>], layer: usize, heldout: usize) -> Vec<Edge> {
        sets[layer]
            .iter()
            .enumerate()
            .filter(|(f, _)| *f != heldout)
            .flat_map(|(_, edges)| edges.iter().copied())
            .collect()
    }
}

/// Stratified-by-layer split.
///
/// Positives are ordered by a trial-keyed hash of the edge itself and cut
/// into `num_folds` near-equal contiguous blocks. Keying the order by edge
/// content (not by layer) means an edge shared by two layers almost always
/// lands in the same fold in both, so the training sets of structurally
/// similar layers overlap as much as the layers themselves do.
///
/// Each fold also gets an equal number of negatives, drawn uniformly without
/// replacement from the layer's non-edges.
pub fn make_split(
    net: &MultiplexNetwork,
    num_folds: usize,
    trial_seed: u64,
) -> Result<EdgeSplit> {
    if num_folds < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 folds, got {num_folds}"
        )));
    }
    let mut positives = Vec::with_capacity(net.num_layers());
    let mut negatives = Vec::with_capacity(net.num_layers());
    for (li, layer) in net.layers().iter().enumerate() {
        let mut edges: Vec<Edge> = layer.iter().copied().collect();
        if edges.len() < num_folds {
            return Err(Error::LayerTooSmall {
                layer: li,
                edges: edges.len(),
                folds: num_folds,
            });
        }
        edges.sort_by_key(|e| (mix(mix(trial_seed, e.lo() as u64), e.hi() as u64), *e));

        let pool = non_edges(layer, net.num_nodes());
        if pool.len() < edges.len() {
            return Err(Error::NotEnoughNonEdges {
                needed: edges.len(),
                available: pool.len(),
            });
        }
        let mut rng = stream_rng(trial_seed, li as u64);
        let neg_order = index::sample(&mut rng, pool.len(), edges.len());

        // fold sizes differ by at most one; earlier folds take the remainder
        let m = edges.len();
        let base_size = m / num_folds;
        let remainder = m % num_folds;
        let mut pos_folds = Vec::with_capacity(num_folds);
        let mut neg_folds = Vec::with_capacity(num_folds);
        let mut cursor = 0usize;
        for f in 0..num_folds {
            let size = base_size + usize::from(f < remainder);
            let pos: Vec<Edge> = edges[cursor..cursor + size].to_vec();
            let neg: Vec<Edge> = neg_order
                .iter()
                .skip(cursor)
                .take(size)
                .map(|i| pool[i])
                .collect();
            cursor += size;
            pos_folds.push(pos);
            neg_folds.push(neg);
        }
        positives.push(pos_folds);
        negatives.push(neg_folds);
    }
    Ok(EdgeSplit {
        num_folds,
        positives,
        negatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn tmp_file(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    fn edge(a: u32, b: u32) -> Edge {
        Edge::new(a, b).unwrap()
    }

    fn small_net() -> MultiplexNetwork {
        let l1: EdgeSet = [edge(0, 1), edge(1, 2), edge(2, 3), edge(3, 4), edge(4, 5)]
            .into_iter()
            .collect();
        let l2: EdgeSet = [edge(5, 6), edge(6, 7), edge(0, 2), edge(1, 3), edge(2, 4)]
            .into_iter()
            .collect();
        MultiplexNetwork::new(8, vec![l1, l2]).unwrap()
    }

    #[test]
    fn edge_normalizes_and_rejects_self_loops() {
        assert_eq!(edge(5, 2), edge(2, 5));
        assert!(matches!(Edge::new(3, 3), Err(Error::SelfLoop(3))));
    }

    #[test]
    fn loader_handles_comments_blanks_duplicates_and_self_loops() {
        let f = tmp_file(
            "# a comment\n\
             \n\
             1 10 20 0.5\n\
             1 20 10\n\
             1 7 7\n\
             2 10 30\n\
             2 20 30\n",
        );
        let report = load_edge_list(f.path()).unwrap();
        let stats = report.network.stats();
        assert_eq!(stats.layers, 2);
        assert_eq!(stats.nodes, 3); // labels 10, 20, 30
        assert_eq!(stats.edges, 3); // duplicate merged, self-loop dropped
        assert_eq!(report.self_loops_dropped, 1);
        assert_eq!(report.duplicates_merged, 1);
        // labels remapped in ascending order: 10→0, 20→1, 30→2
        assert!(report.network.layer(0).contains(&edge(0, 1)));
        assert!(report.network.layer(1).contains(&edge(0, 2)));
        assert!(report.network.layer(1).contains(&edge(1, 2)));
    }

    #[test]
    fn loader_reports_malformed_lines_with_their_number() {
        let f = tmp_file("1 1 2\n1 2\n");
        match load_edge_list(f.path()) {
            Err(Error::MalformedLine { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected malformed line, got {other:?}"),
        }

        let f = tmp_file("1 1 2\n0 2 3\n");
        match load_edge_list(f.path()) {
            Err(Error::MalformedLine { line, msg, .. }) => {
                assert_eq!(line, 2);
                assert!(msg.contains("1-based"));
            }
            other => panic!("expected malformed line, got {other:?}"),
        }

        let f = tmp_file("1 1 2\n3 2 3\n");
        assert!(load_edge_list_declared(f.path(), Some(2)).is_err());
        assert!(load_edge_list_declared(f.path(), Some(3)).is_ok());
    }

    #[test]
    fn loader_rejects_single_layer_files() {
        let f = tmp_file("1 1 2\n1 2 3\n");
        assert!(matches!(
            load_edge_list(f.path()),
            Err(Error::TooFewLayers(1))
        ));
    }

    #[test]
    fn write_then_load_round_trips() {
        let net = small_net();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("net.edges");
        net.write_edge_list(&path).unwrap();
        let back = load_edge_list(&path).unwrap().network;
        assert_eq!(net, back);
    }

    #[test]
    fn similar_layer_at_full_similarity_is_the_base() {
        let net = small_net();
        let out = similar_layer(net.layer(0), 8, 1.0, 9).unwrap();
        assert_eq!(&out, net.layer(0));
    }

    #[test]
    fn similar_layer_at_zero_similarity_is_disjoint() {
        // 6 nodes, sparse base: plenty of non-edges
        let base: EdgeSet = [edge(0, 1), edge(2, 3)].into_iter().collect();
        let out = similar_layer(&base, 6, 0.0, 9).unwrap();
        assert_eq!(out.len(), base.len());
        assert!(out.intersection(&base).count() == 0);
    }

    #[test]
    fn similar_layer_shares_exactly_the_retained_count() {
        // |base| = 100 over 40 nodes, s = 0.9 → overlap exactly 90
        let mut base = EdgeSet::new();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        use rand::Rng as _;
        while base.len() < 100 {
            let a = rng.random_range(0..40u32);
            let b = rng.random_range(0..40u32);
            if a != b {
                base.insert(edge(a, b));
            }
        }
        for (s, want) in [(0.9, 90), (0.5, 50), (0.05, 5), (0.333, 34)] {
            let out = similar_layer(&base, 40, s, 7).unwrap();
            assert_eq!(out.len(), 100);
            assert_eq!(out.intersection(&base).count(), want, "s = {s}");
        }
    }

    #[test]
    fn similar_layer_errors_when_non_edges_run_out() {
        // complete triangle: no non-edges to draw replacements from
        let base: EdgeSet = [edge(0, 1), edge(0, 2), edge(1, 2)].into_iter().collect();
        assert!(matches!(
            similar_layer(&base, 3, 0.0, 1),
            Err(Error::NotEnoughNonEdges { .. })
        ));
    }

    #[test]
    fn similar_layer_rejects_bad_inputs() {
        let net = small_net();
        assert!(matches!(
            similar_layer(net.layer(0), 4, 1.5, 0),
            Err(Error::InvalidSimilarity(_))
        ));
        assert!(matches!(
            similar_layer(&EdgeSet::new(), 4, 0.5, 0),
            Err(Error::EmptyBaseLayer)
        ));
    }

    #[test]
    fn build_synthetic_layer_counts_and_determinism() {
        let net = small_net();
        let a = build_synthetic(SyntheticKind::RandInternship, &net, 3).unwrap();
        assert_eq!(a.num_layers(), 6);
        let b = build_synthetic(SyntheticKind::Small3Layers, &net, 3).unwrap();
        assert_eq!(b.num_layers(), 3);
        let a2 = build_synthetic(SyntheticKind::RandInternship, &net, 3).unwrap();
        assert_eq!(a, a2);
        let a3 = build_synthetic(SyntheticKind::RandInternship, &net, 4).unwrap();
        assert_ne!(a, a3);
        // every layer keeps the base layer's edge count
        let m = net.layer(0).len();
        assert!(a.layers().iter().all(|l| l.len() == m));
    }

    #[test]
    fn synthetic_networks_survive_an_edge_list_round_trip() {
        let net = small_net();
        let synth = build_synthetic(SyntheticKind::Small3Layers, &net, 5).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("synth.edges");
        synth.write_edge_list(&path).unwrap();
        let back = load_edge_list(&path).unwrap().network;
        assert_eq!(synth, back);
    }

    #[test]
    fn split_folds_partition_each_layer() {
        let net = small_net();
        let split = make_split(&net, 5, 42).unwrap();
        for layer in 0..net.num_layers() {
            let mut reassembled = EdgeSet::new();
            let mut total = 0;
            for fold in 0..5 {
                let pos = split.positives(layer, fold);
                assert_eq!(pos.len(), 1); // 5 edges, 5 folds
                total += pos.len();
                reassembled.extend(pos.iter().copied());
                let neg = split.negatives(layer, fold);
                assert_eq!(neg.len(), pos.len());
                for e in neg {
                    assert!(!net.layer(layer).contains(e), "negative {e:?} is an edge");
                }
            }
            assert_eq!(total, net.layer(layer).len());
            assert_eq!(&reassembled, net.layer(layer));
        }
    }

    #[test]
    fn split_fold_sizes_divide_evenly_when_possible() {
        // layer with 10 edges over plenty of nodes, 5 folds of exactly 2
        let mut l1 = EdgeSet::new();
        for i in 0..10 {
            l1.insert(edge(i, i + 10));
        }
        let net = MultiplexNetwork::new(20, vec![l1.clone(), l1]).unwrap();
        let split = make_split(&net, 5, 0).unwrap();
        for fold in 0..5 {
            assert_eq!(split.positives(0, fold).len(), 2);
        }
        assert_eq!(split.train_positives(0, 0).len(), 8);
    }

    #[test]
    fn split_rejects_layers_smaller_than_the_fold_count() {
        let l1: EdgeSet = [edge(0, 1), edge(1, 2)].into_iter().collect();
        let l2: EdgeSet = [edge(0, 2), edge(1, 3), edge(2, 3), edge(0, 3), edge(0, 1)]
            .into_iter()
            .collect();
        let net = MultiplexNetwork::new(4, vec![l1, l2]).unwrap();
        assert!(matches!(
            make_split(&net, 5, 0),
            Err(Error::LayerTooSmall { layer: 0, .. })
        ));
    }

    #[test]
    fn splits_are_deterministic_per_seed() {
        let net = small_net();
        let a = make_split(&net, 5, 1).unwrap();
        let b = make_split(&net, 5, 1).unwrap();
        let c = make_split(&net, 5, 2).unwrap();
        for layer in 0..2 {
            for fold in 0..5 {
                assert_eq!(a.positives(layer, fold), b.positives(layer, fold));
                assert_eq!(a.negatives(layer, fold), b.negatives(layer, fold));
            }
        }
        let differs = (0..2).any(|l| (0..5).any(|f| a.positives(l, f) != c.positives(l, f)));
        assert!(differs);
    }

    #[test]
    fn retained_count_snaps_near_integer_products() {
        assert_eq!(retained_count(0.9, 100), 90);
        assert_eq!(retained_count(1.0, 77), 77);
        assert_eq!(retained_count(0.0, 50), 0);
        assert_eq!(retained_count(0.1, 740), 74);
        assert_eq!(retained_count(0.333, 100), 34); // genuine ceil
        assert_eq!(retained_count(0.01, 517), 6); // ⌈5.17⌉
    }
}
