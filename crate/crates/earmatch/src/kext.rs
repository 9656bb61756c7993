//! Matching extendability of order `k`: verdicts with certificates, the
//! removable edges and minimality for a given `k`, degree-class bounds,
//! essential edge connectivity, and hereditary spot checks.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{BipGraph, EdgeId, Vertex};
use crate::matching::{adjacency_masks, is_matchable, masks_matchable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KextError {
    /// The graph or parameters are outside what the engines handle.
    BadInput(&'static str),
    /// The operation needs a graph that extends matchings of size `k`.
    NotKExtendable,
    /// The operation needs a minimal graph for the given `k`.
    NotMinimal,
}

impl fmt::Display for KextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KextError::BadInput(msg) => write!(f, "{msg}"),
            KextError::NotKExtendable => write!(f, "the graph does not extend matchings of this size"),
            KextError::NotMinimal => write!(f, "the graph is not minimal for this size"),
        }
    }
}

impl core::error::Error for KextError {}

/// Evidence attached to an extendability verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KExtendCertificate {
    /// Every matching of the requested size extends to a perfect matching.
    /// When the exhaustive engine also ran, it reports how many such
    /// matchings it checked.
    Extends { k_matchings: Option<u64> },
    /// The two classes differ in size.
    Unbalanced,
    /// Extending matchings of positive size needs a connected graph.
    Disconnected,
    /// The order is below `2k + 2`.
    TooSmall { n: usize, need: usize },
    /// No perfect matching exists, and the graph is too large for the
    /// subset engine to name a deficient set.
    NoPerfectMatching,
    /// A subset of the first class whose neighborhood is too small: the
    /// neighborhood misses a vertex and has fewer than `|S| + k` members.
    HallViolator {
        subset: BTreeSet<Vertex>,
        neighborhood: BTreeSet<Vertex>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KExtendReport {
    pub k: usize,
    pub verdict: bool,
    pub certificate: KExtendCertificate,
}

const SUBSET_LIMIT: usize = 20;

/// The smallest subset of the first class violating the surplus condition:
/// nonempty `S` with `|S| <= |A| - k` and `|N(S)| < |S| + k`. The caller
/// keeps `a_count` at most [`SUBSET_LIMIT`] and both classes equal.
fn hall_violator(g: &BipGraph, k: usize) -> Option<(BTreeSet<Vertex>, BTreeSet<Vertex>)> {
    let a = g.a_count();
    if a < k {
        return None;
    }
    let mut nbr = vec![0u32; a];
    for &(x, y) in g.edges() {
        nbr[x] |= 1 << y;
    }
    let total = 1usize << a;
    let mut nb = vec![0u32; total];
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        nb[mask] = nb[mask & (mask - 1)] | nbr[low];
    }
    for mask in 1..total {
        let size = mask.count_ones() as usize;
        if size <= a - k && (nb[mask].count_ones() as usize) < size + k {
            let subset = (0..a).filter(|i| mask >> i & 1 == 1).map(Vertex::a).collect();
            let neighborhood = (0..g.b_count())
                .filter(|j| nb[mask] >> j & 1 == 1)
                .map(Vertex::b)
                .collect();
            return Some((subset, neighborhood));
        }
    }
    None
}

struct DirectScan<'g> {
    edges: &'g [(usize, usize)],
    adj: Vec<u64>,
    full_a: u64,
    full_b: u64,
    count: u64,
    any_fail: bool,
}

impl DirectScan<'_> {
    fn rec(&mut self, start: usize, left: usize, used_a: u64, used_b: u64) {
        if self.any_fail {
            return;
        }
        if left == 0 {
            self.count += 1;
            if !masks_matchable(&self.adj, self.full_a & !used_a, self.full_b & !used_b) {
                self.any_fail = true;
            }
            return;
        }
        for i in start..self.edges.len() {
            let (a, b) = self.edges[i];
            let (ma, mb) = (1u64 << a, 1u64 << b);
            if used_a & ma != 0 || used_b & mb != 0 {
                continue;
            }
            self.rec(i + 1, left - 1, used_a | ma, used_b | mb);
        }
    }
}

/// Checks every matching of size `k` for extension directly. Returns how
/// many were found and whether any failed to extend.
fn direct_scan(g: &BipGraph, k: usize) -> (u64, bool) {
    let mut scan = DirectScan {
        edges: g.edges(),
        adj: adjacency_masks(g),
        full_a: (1u64 << g.a_count()) - 1,
        full_b: (1u64 << g.b_count()) - 1,
        count: 0,
        any_fail: false,
    };
    scan.rec(0, k, 0, 0);
    (scan.count, scan.any_fail)
}

/// Whether every matching of size `k` extends to a perfect matching.
///
/// For `k = 0` this is plain matchability, with no connectivity demand.
/// For `k >= 1` the graph must be balanced, connected, and of order at
/// least `2k + 2`; the verdict then comes from the neighborhood surplus
/// condition, cross-checked on small graphs by exhaustive extension.
pub fn is_k_extendable(g: &BipGraph, k: usize) -> Result<KExtendReport, KextError> {
    let report = |verdict, certificate| KExtendReport { k, verdict, certificate };
    if g.a_count() != g.b_count() {
        return Ok(report(false, KExtendCertificate::Unbalanced));
    }
    if k == 0 {
        if g.a_count() <= SUBSET_LIMIT {
            return Ok(match hall_violator(g, 0) {
                None => report(true, KExtendCertificate::Extends { k_matchings: None }),
                Some((subset, neighborhood)) => {
                    report(false, KExtendCertificate::HallViolator { subset, neighborhood })
                }
            });
        }
        return Ok(if is_matchable(g) {
            report(true, KExtendCertificate::Extends { k_matchings: None })
        } else {
            report(false, KExtendCertificate::NoPerfectMatching)
        });
    }
    if !g.is_connected() {
        return Ok(report(false, KExtendCertificate::Disconnected));
    }
    let need = 2 * k + 2;
    if g.n() < need {
        return Ok(report(false, KExtendCertificate::TooSmall { n: g.n(), need }));
    }
    if g.a_count() > SUBSET_LIMIT {
        return Err(KextError::BadInput(
            "the subset engine handles at most twenty vertices per class",
        ));
    }
    let violator = hall_violator(g, k);
    if k <= 3 && g.m() <= 40 {
        let (count, any_fail) = direct_scan(g, k);
        let direct_verdict = count > 0 && !any_fail;
        if direct_verdict != violator.is_none() {
            panic!("fatal invariant violation: extension engines disagree");
        }
        if violator.is_none() {
            return Ok(report(true, KExtendCertificate::Extends { k_matchings: Some(count) }));
        }
    }
    Ok(match violator {
        None => report(true, KExtendCertificate::Extends { k_matchings: None }),
        Some((subset, neighborhood)) => {
            report(false, KExtendCertificate::HallViolator { subset, neighborhood })
        }
    })
}

/// The edges whose deletion leaves the graph extending matchings of size
/// `k`, for a graph that does so itself. Edges with an end of degree
/// `k + 1` are skipped outright, since deleting them dips below the
/// degree floor.
pub fn k_removable_edges(g: &BipGraph, k: usize) -> Result<BTreeSet<EdgeId>, KextError> {
    if k == 0 {
        return Err(KextError::BadInput("removability needs k at least one"));
    }
    if !is_k_extendable(g, k)?.verdict {
        return Err(KextError::NotKExtendable);
    }
    let mut out = BTreeSet::new();
    let no_vertices = BTreeSet::new();
    for id in 0..g.m() {
        let (u, v) = g.endpoints(id).expect("ids below m are present");
        if g.degree(u) == k + 1 || g.degree(v) == k + 1 {
            continue;
        }
        let dropped = [id].into_iter().collect();
        let (smaller, _) = g.remove(&no_vertices, &dropped).expect("edge id is present");
        if is_k_extendable(&smaller, k)?.verdict {
            out.insert(id);
        }
    }
    Ok(out)
}

/// Whether the graph extends matchings of size `k` and loses that property
/// on deleting any single edge.
pub fn is_minimal_k_extendable(g: &BipGraph, k: usize) -> Result<bool, KextError> {
    match k_removable_edges(g, k) {
        Ok(removable) => Ok(removable.is_empty()),
        Err(KextError::NotKExtendable) => Ok(false),
        Err(e) => Err(e),
    }
}

/// The vertex and edge partition by the degree threshold `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeClasses {
    pub k: usize,
    /// Vertices of degree exactly `k + 1`.
    pub low: BTreeSet<Vertex>,
    /// Vertices of degree at least `k + 2`.
    pub high: BTreeSet<Vertex>,
    /// Edges with both ends low.
    pub low_edges: BTreeSet<EdgeId>,
    /// Edges with both ends high.
    pub high_edges: BTreeSet<EdgeId>,
}

/// Splits vertices at degree `k + 1` versus `k + 2` or more, rejecting
/// graphs with a vertex below the floor.
pub fn degree_classes(g: &BipGraph, k: usize) -> Result<DegreeClasses, KextError> {
    let mut low = BTreeSet::new();
    let mut high = BTreeSet::new();
    for v in g.vertices() {
        let d = g.degree(v);
        if d < k + 1 {
            return Err(KextError::BadInput("every vertex must have degree at least k + 1"));
        }
        if d == k + 1 {
            low.insert(v);
        } else {
            high.insert(v);
        }
    }
    let mut low_edges = BTreeSet::new();
    let mut high_edges = BTreeSet::new();
    for (id, &(a, b)) in g.edges().iter().enumerate() {
        let (va, vb) = (Vertex::a(a), Vertex::b(b));
        if low.contains(&va) && low.contains(&vb) {
            low_edges.insert(id);
        } else if high.contains(&va) && high.contains(&vb) {
            high_edges.insert(id);
        }
    }
    Ok(DegreeClasses { k, low, high, low_edges, high_edges })
}

fn high_component_count(g: &BipGraph, classes: &DegreeClasses) -> usize {
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &v in &classes.high {
        adj.entry(v).or_default();
    }
    for &id in &classes.high_edges {
        let (u, v) = g.endpoints(id).expect("profiled edges are present");
        adj.get_mut(&u).expect("a high end").push(v);
        adj.get_mut(&v).expect("a high end").push(u);
    }
    let mut seen: BTreeSet<Vertex> = BTreeSet::new();
    let mut comps = 0;
    for &start in adj.keys() {
        if !seen.insert(start) {
            continue;
        }
        comps += 1;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[&u] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    comps
}

/// One inequality in a [`KextBounds`] report, asserted as `lhs >= rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundLine {
    pub name: &'static str,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
    pub slack: i64,
    /// Whether the inequality is a theorem for this `k`, as opposed to a
    /// conjecture.
    pub proven: bool,
    /// False when an order threshold exempts this graph from the claim.
    pub applies: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KextBounds {
    pub k: usize,
    pub lines: Vec<BoundLine>,
}

impl KextBounds {
    /// Whether every applicable proven line holds.
    pub fn proven_hold(&self) -> bool {
        self.lines.iter().all(|l| !l.proven || !l.applies || l.holds)
    }

    pub fn line(&self, name: &str) -> Option<&BoundLine> {
        self.lines.iter().find(|l| l.name == name)
    }
}

/// Evaluates the degree-class bounds for a graph that is minimal among
/// those extending matchings of size `k >= 1`.
///
/// The first four lines are theorems for every `k`: the high-degree
/// vertices induce a forest, `(2k+1)|low| >= kn+2`, `k|low| >= m-n+1`,
/// and `m <= (k+1)n-1`. The three `-strong` lines sharpen them:
/// `(2k-1)|low| >= 2(m-n+2k)`, `2|low| >= n+4`, and
/// `2m <= (2k+1)(n-2k)`, the last only above an order threshold. They
/// are theorems for `k = 1`, the sharpened size cap also for `k = 2`,
/// and conjectures otherwise.
pub fn bounds_report(g: &BipGraph, k: usize) -> Result<KextBounds, KextError> {
    if k == 0 {
        return Err(KextError::BadInput("the bounds need k at least one"));
    }
    if !is_k_extendable(g, k)?.verdict {
        return Err(KextError::NotKExtendable);
    }
    if !is_minimal_k_extendable(g, k)? {
        return Err(KextError::NotMinimal);
    }
    let classes = degree_classes(g, k)?;
    let comps = high_component_count(g, &classes) as i64;
    let (n, m) = (g.n() as i64, g.m() as i64);
    let low = classes.low.len() as i64;
    let high = classes.high.len() as i64;
    let kk = k as i64;
    let threshold = match k {
        1 => 6,
        2 => 12,
        _ => (4 * kk * kk + 2 * kk) as usize,
    };
    let mut lines = Vec::new();
    let mut push = |name, lhs: i64, rhs: i64, proven, applies| {
        lines.push(BoundLine {
            name,
            lhs,
            rhs,
            holds: lhs >= rhs,
            slack: lhs - rhs,
            proven,
            applies,
        });
    };
    push("high-degree-forest", high - comps, classes.high_edges.len() as i64, true, true);
    push("low-count-vs-order", (2 * kk + 1) * low, kk * n + 2, true, true);
    push("low-count-vs-size", kk * low, m - n + 1, true, true);
    push("size-cap", (kk + 1) * n - 1, m, true, true);
    push("low-count-vs-size-strong", (2 * kk - 1) * low, 2 * (m - n + 2 * kk), k == 1, true);
    push("low-count-vs-order-strong", 2 * low, n + 4, k == 1, true);
    push(
        "size-cap-strong",
        (2 * kk + 1) * (n - 2 * kk),
        2 * m,
        k <= 2,
        g.n() >= threshold,
    );
    Ok(KextBounds { k, lines })
}

/// The outcome of the hereditary spot checks on a graph extending
/// matchings of size `k >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HereditaryChecks {
    pub k: usize,
    /// Cross pairs `(a, b)` whose joint deletion was checked to extend
    /// matchings of size `k - 1`.
    pub vertex_pairs: usize,
    pub vertex_pair_failures: Vec<(Vertex, Vertex)>,
    /// Vertex-disjoint edge pairs with adjacent ends whose joint deletion
    /// was checked likewise.
    pub edge_pairs: usize,
    pub edge_pair_failures: Vec<(EdgeId, EdgeId)>,
}

impl HereditaryChecks {
    pub fn all_pass(&self) -> bool {
        self.vertex_pair_failures.is_empty() && self.edge_pair_failures.is_empty()
    }
}

/// Verifies the two hereditary consequences of extending matchings of
/// size `k`: deleting one vertex from each class, or deleting two
/// vertex-disjoint edges with adjacent ends, leaves a graph extending
/// matchings of size `k - 1`.
pub fn hereditary_checks(g: &BipGraph, k: usize) -> Result<HereditaryChecks, KextError> {
    if k == 0 {
        return Err(KextError::BadInput("the hereditary checks need k at least one"));
    }
    if !is_k_extendable(g, k)?.verdict {
        return Err(KextError::NotKExtendable);
    }
    let mut checks = HereditaryChecks {
        k,
        vertex_pairs: 0,
        vertex_pair_failures: Vec::new(),
        edge_pairs: 0,
        edge_pair_failures: Vec::new(),
    };
    let no_edges = BTreeSet::new();
    for a in 0..g.a_count() {
        for b in 0..g.b_count() {
            let removed = [Vertex::a(a), Vertex::b(b)].into_iter().collect();
            let (sub, _) = g.remove(&removed, &no_edges).expect("vertices are present");
            checks.vertex_pairs += 1;
            if !is_k_extendable(&sub, k - 1)?.verdict {
                checks.vertex_pair_failures.push((Vertex::a(a), Vertex::b(b)));
            }
        }
    }
    let present: BTreeSet<(usize, usize)> = g.edges().iter().copied().collect();
    let no_vertices = BTreeSet::new();
    for e in 0..g.m() {
        let (a1, b1) = g.edge(e).expect("ids below m are present");
        for f in e + 1..g.m() {
            let (a2, b2) = g.edge(f).expect("ids below m are present");
            if a1 == a2 || b1 == b2 {
                continue;
            }
            if !present.contains(&(a1, b2)) && !present.contains(&(a2, b1)) {
                continue;
            }
            let dropped = [e, f].into_iter().collect();
            let (sub, _) = g.remove(&no_vertices, &dropped).expect("edge ids are present");
            checks.edge_pairs += 1;
            if !is_k_extendable(&sub, k - 1)?.verdict {
                checks.edge_pair_failures.push((e, f));
            }
        }
    }
    Ok(checks)
}

fn max_flow_unit(cap: &mut [Vec<i32>], s: usize, t: usize) -> usize {
    let n = cap.len();
    let mut flow = 0i32;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if parent[v] == usize::MAX && cap[u][v] > 0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[t] == usize::MAX {
            return flow as usize;
        }
        let mut bottleneck = i32::MAX;
        let mut v = t;
        while v != s {
            let u = parent[v];
            bottleneck = bottleneck.min(cap[u][v]);
            v = u;
        }
        let mut v = t;
        while v != s {
            let u = parent[v];
            cap[u][v] -= bottleneck;
            cap[v][u] += bottleneck;
            v = u;
        }
        flow += bottleneck;
    }
}

/// The smallest cut over shores holding at least two vertices on each
/// side. Exhaustive up to order twenty; beyond that, the minimum over
/// nonadjacent vertex pairs of degree sums and over flows separating
/// vertex-disjoint edge pairs.
pub fn essential_edge_connectivity(g: &BipGraph) -> Result<usize, KextError> {
    let n = g.n();
    if n < 4 {
        return Err(KextError::BadInput("the cut search needs order at least four"));
    }
    let a = g.a_count();
    let combined: Vec<(usize, usize)> = g.edges().iter().map(|&(x, y)| (x, a + y)).collect();
    if n <= 20 {
        let mut best = usize::MAX;
        for mask in 0u32..1 << (n - 1) {
            let size = mask.count_ones() as usize;
            if size < 2 || n - size < 2 {
                continue;
            }
            let mut cut = 0;
            for &(u, v) in &combined {
                cut += ((mask >> u) ^ (mask >> v)) as usize & 1;
            }
            best = best.min(cut);
        }
        return Ok(best);
    }
    if n > 64 {
        return Err(KextError::BadInput("the cut search handles order at most sixty-four"));
    }

    let degs: Vec<usize> = (0..n)
        .map(|i| {
            let v = if i < a { Vertex::a(i) } else { Vertex::b(i - a) };
            g.degree(v)
        })
        .collect();
    let present: BTreeSet<(usize, usize)> = g.edges().iter().copied().collect();
    let mut best = usize::MAX;
    for side in [0..a, a..n] {
        let mut sorted: Vec<usize> = side.map(|i| degs[i]).collect();
        sorted.sort_unstable();
        if sorted.len() >= 2 {
            best = best.min(sorted[0] + sorted[1]);
        }
    }
    for x in 0..a {
        for y in 0..n - a {
            if !present.contains(&(x, y)) {
                best = best.min(degs[x] + degs[a + y]);
            }
        }
    }
    for e in 0..combined.len() {
        let (u1, u2) = combined[e];
        for f in e + 1..combined.len() {
            let (v1, v2) = combined[f];
            if u1 == v1 || u2 == v2 {
                continue;
            }
            let mut map = vec![usize::MAX; n];
            map[u1] = 0;
            map[u2] = 0;
            map[v1] = 1;
            map[v2] = 1;
            let mut next = 2;
            for slot in map.iter_mut() {
                if *slot == usize::MAX {
                    *slot = next;
                    next += 1;
                }
            }
            let mut cap = vec![vec![0i32; next]; next];
            for &(x, y) in &combined {
                let (mx, my) = (map[x], map[y]);
                if mx != my {
                    cap[mx][my] += 1;
                    cap[my][mx] += 1;
                }
            }
            best = best.min(max_flow_unit(&mut cap, 0, 1));
        }
    }
    Ok(best)
}
