//! Isomorph-free enumeration of small connected bipartite graphs with
//! minimum degree two, streaming one record per isomorphism class with its
//! matching, class, and extendability verdicts. Every proved bound is
//! checked on the way; conjectured bounds are reported as data, never
//! enforced.
//!
//! Generation is by canonical augmentation: a graph is reached only from
//! the graph obtained by deleting its canonical last edge, so each class
//! appears exactly once without a global seen-set. Work splits into shards
//! at a fixed edge depth, and shard zero keeps the shallower graphs.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::canon::{canonical_form, canonical_form_with_orbit_parts};
use crate::classify::{self, ExtremalFlags, ExtremalSlacks};
use crate::graph::{theta_graph, BipGraph};
use crate::kext;
use crate::matching::masks_matchable;
use crate::recognize;

const SHARD_DEPTH: usize = 4;
const MAX_ORDER: usize = 12;
const MAX_K: usize = 3;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CensusError {
    BudgetExceeded { max_n: usize, k_max: usize },
    BadShard { index: usize, count: usize },
    TheoremViolation(String),
}

impl fmt::Display for CensusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CensusError::BudgetExceeded { max_n, k_max } => write!(
                f,
                "the census covers orders 4 through {MAX_ORDER} and k up to {MAX_K}, \
                 not order {max_n} with k {k_max}"
            ),
            CensusError::BadShard { index, count } => {
                write!(f, "shard {index} of {count} is not a valid split")
            }
            CensusError::TheoremViolation(what) => write!(f, "theorem violation: {what}"),
        }
    }
}

impl core::error::Error for CensusError {}

/// Settings for one census run. `max_m` caps the edge count of every
/// enumerated graph, which prunes whole subtrees; sharding splits the
/// generation tree at a fixed edge depth so independent runs partition the
/// output. With `fail_fast` a proved-bound violation aborts the run right
/// after the offending record reaches the sink; otherwise it is collected
/// into the summary.
#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub max_n: usize,
    pub k_max: usize,
    pub max_m: Option<usize>,
    pub shard_index: usize,
    pub shard_count: usize,
    pub check_recognizers: bool,
    pub check_cuts: bool,
    pub fail_fast: bool,
}

impl CensusConfig {
    pub fn new(max_n: usize, k_max: usize) -> Self {
        CensusConfig {
            max_n,
            k_max,
            max_m: None,
            shard_index: 0,
            shard_count: 1,
            check_recognizers: true,
            check_cuts: true,
            fail_fast: true,
        }
    }
}

/// One enumerated graph. Two records are equal exactly when their graphs
/// are isomorphic, since `canonical` determines everything else.
#[derive(Clone, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CensusRecord {
    pub canonical: String,
    pub a_count: usize,
    pub b_count: usize,
    pub n: usize,
    pub m: usize,
    pub matchable: bool,
    pub matching_covered: bool,
    pub minimal: bool,
    pub flags: ExtremalFlags,
    pub slacks: Option<ExtremalSlacks>,
    /// Index `k - 1` holds the k-extendability verdict, up to `k_max`.
    pub extendable: Vec<bool>,
    pub minimal_extendable: Vec<bool>,
    /// Per-class agreement between the structural recognizers and the slack
    /// classifier, on minimal graphs when the run asks for it.
    pub recognizers_agree: Option<ExtremalFlags>,
    /// Essential edge connectivity, computed when some `k` verdict is
    /// positive and the run asks for cut checks.
    pub essential_cut: Option<usize>,
}

/// Per-order tallies of the census classes.
#[derive(Clone, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassCounts {
    pub n: usize,
    pub records: u64,
    pub matching_covered: u64,
    pub minimal: u64,
    /// Members of the five extremal classes, in `h0` through `h4` order.
    pub h: [u64; 5],
    pub extendable: Vec<u64>,
    pub minimal_extendable: Vec<u64>,
}

impl ClassCounts {
    fn new(n: usize, k_max: usize) -> Self {
        ClassCounts {
            n,
            records: 0,
            matching_covered: 0,
            minimal: 0,
            h: [0; 5],
            extendable: alloc::vec![0; k_max],
            minimal_extendable: alloc::vec![0; k_max],
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CensusSummary {
    pub max_n: usize,
    pub k_max: usize,
    pub records: u64,
    /// Generation-tree nodes visited, including graphs the degree and
    /// connectivity filters reject.
    pub nodes: u64,
    pub canonical_calls: u64,
    pub counts: Vec<ClassCounts>,
    /// Failures of proved statements; must stay empty.
    pub violations: Vec<String>,
    /// Conjectured-bound failures and equality cases, reported as data.
    pub conjecture_notes: Vec<String>,
}

impl CensusSummary {
    pub fn counts_total(&self) -> u64 {
        self.counts.iter().map(|c| c.records).sum()
    }
}

/// Streams every connected bipartite simple graph with `4 <= n <= max_n`
/// and minimum degree two, one per isomorphism class, in a deterministic
/// order. `max_m` restricts the edge count. Returns how many graphs were
/// produced.
pub fn enumerate_bipartite<F: FnMut(&BipGraph)>(
    max_n: usize,
    max_m: Option<usize>,
    mut sink: F,
) -> Result<u64, CensusError> {
    let mut cfg = CensusConfig::new(max_n, 0);
    cfg.max_m = max_m;
    cfg.check_recognizers = false;
    cfg.check_cuts = false;
    cfg.fail_fast = false;
    let summary = run_census(&cfg, |_, g| sink(g))?;
    Ok(summary.records)
}

/// Runs the census: enumerates each graph once, hands `(record, graph)`
/// pairs to the sink, tallies classes, and checks every proved bound,
/// identity, containment, and recognizer agreement on the members it
/// applies to. The k-extendability verdicts come from the surplus engine,
/// which on these sizes cross-checks itself against exhaustive extension.
pub fn run_census<F: FnMut(&CensusRecord, &BipGraph)>(
    cfg: &CensusConfig,
    mut sink: F,
) -> Result<CensusSummary, CensusError> {
    if cfg.max_n < 4 || cfg.max_n > MAX_ORDER || cfg.k_max > MAX_K {
        return Err(CensusError::BudgetExceeded { max_n: cfg.max_n, k_max: cfg.k_max });
    }
    if cfg.shard_count == 0 || cfg.shard_index >= cfg.shard_count {
        return Err(CensusError::BadShard { index: cfg.shard_index, count: cfg.shard_count });
    }
    let theta = canonical_form(&theta_graph()).encode();
    let mut acc = Accumulator {
        records: 0,
        nodes: 0,
        canonical_calls: 0,
        counts: (4..=cfg.max_n).map(|n| ClassCounts::new(n, cfg.k_max)).collect(),
        violations: Vec::new(),
        conjecture_notes: Vec::new(),
    };
    for n in 4..=cfg.max_n {
        for a in 2..=n / 2 {
            let b = n - a;
            let mut walker = Walker {
                cfg,
                sink: &mut sink,
                theta: &theta,
                acc: &mut acc,
                a,
                b,
                cap: cfg.max_m.map_or(a * b, |cap| cap.min(a * b)),
                edges: Vec::new(),
                rows: alloc::vec![0u64; a],
                shard_counter: 0,
            };
            walker.acc.canonical_calls += 1;
            let (root, _) = canonical_form_with_orbit_parts(a, b, &[]);
            walker.walk(&root.encode())?;
        }
    }
    Ok(CensusSummary {
        max_n: cfg.max_n,
        k_max: cfg.k_max,
        records: acc.records,
        nodes: acc.nodes,
        canonical_calls: acc.canonical_calls,
        counts: acc.counts,
        violations: acc.violations,
        conjecture_notes: acc.conjecture_notes,
    })
}

struct Accumulator {
    records: u64,
    nodes: u64,
    canonical_calls: u64,
    counts: Vec<ClassCounts>,
    violations: Vec<String>,
    conjecture_notes: Vec<String>,
}

struct Walker<'r, F> {
    cfg: &'r CensusConfig,
    sink: &'r mut F,
    theta: &'r str,
    acc: &'r mut Accumulator,
    a: usize,
    b: usize,
    cap: usize,
    edges: Vec<(usize, usize)>,
    rows: Vec<u64>,
    shard_counter: u64,
}

impl<F: FnMut(&CensusRecord, &BipGraph)> Walker<'_, F> {
    fn walk(&mut self, canonical: &str) -> Result<(), CensusError> {
        self.acc.nodes += 1;
        let m = self.edges.len();
        let mut analyze = true;
        if m == SHARD_DEPTH {
            let slot = self.shard_counter % self.cfg.shard_count as u64;
            self.shard_counter += 1;
            if slot != self.cfg.shard_index as u64 {
                return Ok(());
            }
        } else if m < SHARD_DEPTH {
            analyze = self.cfg.shard_index == 0;
        }
        if analyze {
            self.analyze(canonical)?;
        }
        if m >= self.cap {
            return Ok(());
        }
        let mut children: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for x in 0..self.a {
            for y in 0..self.b {
                if self.rows[x] >> y & 1 == 1 {
                    continue;
                }
                self.edges.push((x, y));
                self.acc.canonical_calls += 1;
                let (form, orbit) = canonical_form_with_orbit_parts(self.a, self.b, &self.edges);
                self.edges.pop();
                if orbit.contains(&(x, y)) {
                    children.entry(form.encode()).or_insert((x, y));
                }
            }
        }
        for (encoded, (x, y)) in children {
            self.edges.push((x, y));
            self.rows[x] |= 1 << y;
            let walked = self.walk(&encoded);
            self.rows[x] &= !(1 << y);
            self.edges.pop();
            walked?;
        }
        Ok(())
    }

    fn analyze(&mut self, canonical: &str) -> Result<(), CensusError> {
        let (a, b) = (self.a, self.b);
        let (n, m) = (a + b, self.edges.len());
        if m < 2 * a.max(b) || self.rows.iter().any(|r| r.count_ones() < 2) {
            return Ok(());
        }
        let mut col = alloc::vec![0u32; b];
        for &(_, y) in &self.edges {
            col[y] += 1;
        }
        if col.iter().any(|&d| d < 2) || !masks_connected(&self.rows, b) {
            return Ok(());
        }

        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        let g = BipGraph::build(a, b, sorted).expect("enumerated edges are in range");
        let mut pending: Vec<String> = Vec::new();
        let tag = format!("{canonical} n={n} m={m}");

        let balanced = a == b;
        let full_a = (1u64 << a) - 1;
        let full_b = (1u64 << b) - 1;
        let matchable = balanced && masks_matchable(&self.rows, full_a, full_b);
        let covered = balanced && mc_masks(&self.rows, b);
        let minimal = covered
            && g.edges().iter().all(|&(x, y)| {
                let mut rem = self.rows.clone();
                rem[x] &= !(1 << y);
                !mc_masks(&rem, b)
            });

        let (flags, slacks) = if minimal {
            match classify::classify_extremal(&g) {
                Ok(report) => (report.flags, Some(report.slacks)),
                Err(err) => {
                    pending.push(format!(
                        "{tag}: the classifier rejects a graph the census finds minimal: {err}"
                    ));
                    (ExtremalFlags::default(), None)
                }
            }
        } else {
            (ExtremalFlags::default(), None)
        };

        if minimal {
            match classify::check_bounds(&g) {
                Ok(report) => {
                    for check in &report.checks {
                        if !check.holds && !check.exempt {
                            pending.push(format!(
                                "{tag}: bound {} fails: {} < {}",
                                check.name, check.lhs, check.rhs
                            ));
                        }
                    }
                    if report.induced_matching.is_empty() && !report.c4_exempt {
                        pending.push(format!(
                            "{tag}: no induced matching of 2-edges of size m - n + 2"
                        ));
                    }
                }
                Err(err) => pending.push(format!("{tag}: the bound checker balks: {err}")),
            }
            let c4 = n == 4;
            let c6 = n == 6 && m == 6;
            if flags.h2 && !c4 {
                match classify::counting_identities(&g) {
                    Ok(report) => {
                        for check in &report.checks {
                            if !check.holds {
                                pending.push(format!(
                                    "{tag}: identity {} fails: {} != {}",
                                    check.name, check.lhs, check.rhs
                                ));
                            }
                        }
                    }
                    Err(err) => pending.push(format!("{tag}: the identity checker balks: {err}")),
                }
                match classify::degree_profile(&g) {
                    Ok(profile) => {
                        if !classify::e2_is_perfect_matching_on_v2(&g, &profile) {
                            pending.push(format!(
                                "{tag}: the 2-edges are not a perfect matching of the \
                                 degree-2 subgraph"
                            ));
                        }
                    }
                    Err(err) => pending.push(format!("{tag}: the degree profile balks: {err}")),
                }
            }
            if flags.h3 && !flags.h2 {
                pending.push(format!("{tag}: two_vertex_vs_order equality outside the \
                     two_vertex_count class"));
            }
            if flags.h4 && !c6 && !flags.h2 {
                pending.push(format!(
                    "{tag}: size_vs_order equality outside the two_vertex_count class"
                ));
            }
            if flags.h2 && !c4 && !flags.h0 {
                pending.push(format!(
                    "{tag}: two_vertex_count equality outside the two_edge_count class"
                ));
            }
            if flags.h1 && !flags.h0 {
                pending.push(format!(
                    "{tag}: two_edge_vs_order equality outside the two_edge_count class"
                ));
            }
            if ((flags.h1 && flags.h2) || (flags.h3 && flags.h4)) && canonical != self.theta {
                pending.push(format!(
                    "{tag}: a second graph sits in one of the two singleton intersections"
                ));
            }
        }

        let recognizers = if minimal && self.cfg.check_recognizers {
            let agree = ExtremalFlags {
                h0: recognize::recognize_h0(&g).verdict == flags.h0,
                h1: recognize::recognize_h1(&g).verdict == flags.h1,
                h2: recognize::recognize_h2(&g).is_some() == flags.h2,
                h3: recognize::recognize_h3(&g).is_some() == flags.h3,
                h4: recognize::recognize_h4(&g).is_some() == flags.h4,
            };
            let labels = [
                (agree.h0, "retract"),
                (agree.h1, "retract star"),
                (agree.h2, "paired tree"),
                (agree.h3, "paired regular tree"),
                (agree.h4, "paired star"),
            ];
            for (ok, label) in labels {
                if !ok {
                    pending.push(format!(
                        "{tag}: the {label} recognizer disagrees with the slack classifier"
                    ));
                }
            }
            Some(agree)
        } else {
            None
        };

        let mut extendable = alloc::vec![false; self.cfg.k_max];
        let mut minimal_extendable = alloc::vec![false; self.cfg.k_max];
        for k in 1..=self.cfg.k_max {
            let verdict = match kext::is_k_extendable(&g, k) {
                Ok(report) => report.verdict,
                Err(err) => {
                    pending.push(format!("{tag}: the k={k} extension engine failed: {err}"));
                    false
                }
            };
            extendable[k - 1] = verdict;
            if verdict {
                minimal_extendable[k - 1] = g.edges().iter().all(|&(x, y)| {
                    let mut rem = self.rows.clone();
                    rem[x] &= !(1 << y);
                    !kext_masks(&rem, b, k)
                });
            }
        }
        if self.cfg.k_max >= 1 {
            if covered != extendable[0] {
                pending.push(format!(
                    "{tag}: matching covered and 1-extendable verdicts disagree"
                ));
            }
            if minimal != minimal_extendable[0] {
                pending.push(format!("{tag}: the two minimality engines disagree"));
            }
            for k in 2..=self.cfg.k_max {
                if extendable[k - 1] && !extendable[k - 2] {
                    pending.push(format!(
                        "{tag}: k={k} extendable without being k={} extendable",
                        k - 1
                    ));
                }
            }
        }
        let top = (1..=self.cfg.k_max).rev().find(|&k| extendable[k - 1]).unwrap_or(0);
        if top >= 1 && g.min_degree() < top + 1 {
            pending.push(format!(
                "{tag}: k={top} extendable with minimum degree {}",
                g.min_degree()
            ));
        }
        let essential = if top >= 1 && self.cfg.check_cuts {
            match kext::essential_edge_connectivity(&g) {
                Ok(cut) => {
                    if cut < 2 * top {
                        pending.push(format!(
                            "{tag}: k={top} extendable with essential edge connectivity {cut}"
                        ));
                    }
                    Some(cut)
                }
                Err(err) => {
                    pending.push(format!("{tag}: the cut engine failed: {err}"));
                    None
                }
            }
        } else {
            None
        };
        for k in 1..=self.cfg.k_max {
            if !minimal_extendable[k - 1] {
                continue;
            }
            match kext::bounds_report(&g, k) {
                Ok(report) => {
                    for line in &report.lines {
                        if !line.applies {
                            continue;
                        }
                        if line.proven {
                            if !line.holds {
                                pending.push(format!(
                                    "{tag}: proved bound {} fails at k={k}: {} < {}",
                                    line.name, line.lhs, line.rhs
                                ));
                            }
                        } else if !line.holds {
                            self.acc.conjecture_notes.push(format!(
                                "{tag}: conjectured bound {} fails at k={k}: {} < {}",
                                line.name, line.lhs, line.rhs
                            ));
                        } else if line.slack == 0 {
                            self.acc.conjecture_notes.push(format!(
                                "{tag}: equality in conjectured bound {} at k={k}",
                                line.name
                            ));
                        }
                    }
                }
                Err(err) => pending.push(format!(
                    "{tag}: the bound engine rejects a minimal k={k} graph: {err}"
                )),
            }
        }

        let slot = &mut self.acc.counts[n - 4];
        slot.records += 1;
        slot.matching_covered += u64::from(covered);
        slot.minimal += u64::from(minimal);
        let h_flags = [flags.h0, flags.h1, flags.h2, flags.h3, flags.h4];
        for (count, on) in slot.h.iter_mut().zip(h_flags) {
            *count += u64::from(on);
        }
        for k in 0..self.cfg.k_max {
            slot.extendable[k] += u64::from(extendable[k]);
            slot.minimal_extendable[k] += u64::from(minimal_extendable[k]);
        }
        self.acc.records += 1;

        let record = CensusRecord {
            canonical: canonical.into(),
            a_count: a,
            b_count: b,
            n,
            m,
            matchable,
            matching_covered: covered,
            minimal,
            flags,
            slacks,
            extendable,
            minimal_extendable,
            recognizers_agree: recognizers,
            essential_cut: essential,
        };
        (self.sink)(&record, &g);
        for message in pending {
            if self.cfg.fail_fast {
                return Err(CensusError::TheoremViolation(message));
            }
            self.acc.violations.push(message);
        }
        Ok(())
    }
}

fn masks_connected(rows: &[u64], b_count: usize) -> bool {
    let a = rows.len();
    if a == 0 {
        return b_count == 0;
    }
    let mut seen_a = 1u64;
    let mut seen_b = 0u64;
    loop {
        let mut reach_b = 0u64;
        let mut live = seen_a;
        while live != 0 {
            reach_b |= rows[live.trailing_zeros() as usize];
            live &= live - 1;
        }
        let mut reach_a = 0u64;
        for (x, &row) in rows.iter().enumerate() {
            if row & reach_b != 0 {
                reach_a |= 1 << x;
            }
        }
        if reach_a & !seen_a == 0 && reach_b & !seen_b == 0 {
            break;
        }
        seen_a |= reach_a;
        seen_b |= reach_b;
    }
    seen_a.count_ones() as usize == a && seen_b.count_ones() as usize == b_count
}

/// Matching covered, on adjacency masks: balanced, of order at least four,
/// connected, with every edge in a perfect matching.
fn mc_masks(rows: &[u64], b_count: usize) -> bool {
    let a = rows.len();
    if a != b_count || a + b_count < 4 || !masks_connected(rows, b_count) {
        return false;
    }
    let full_a = (1u64 << a) - 1;
    let full_b = (1u64 << b_count) - 1;
    for x in 0..a {
        let mut row = rows[x];
        while row != 0 {
            let y = row.trailing_zeros() as usize;
            row &= row - 1;
            if !masks_matchable(rows, full_a & !(1 << x), full_b & !(1 << y)) {
                return false;
            }
        }
    }
    true
}

/// The k-extendability gate and surplus condition on adjacency masks,
/// mirroring the graph-level engine.
fn kext_masks(rows: &[u64], b_count: usize, k: usize) -> bool {
    let a = rows.len();
    a == b_count
        && a + b_count >= 2 * k + 2
        && masks_connected(rows, b_count)
        && hall_surplus_ok(rows, k)
}

fn hall_surplus_ok(rows: &[u64], k: usize) -> bool {
    let a = rows.len();
    let total = 1usize << a;
    let mut nb = alloc::vec![0u64; total];
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        nb[mask] = nb[mask & (mask - 1)] | rows[low];
        let size = mask.count_ones() as usize;
        if size <= a - k && (nb[mask].count_ones() as usize) < size + k {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, cycle4, even_cycle};
    use crate::matching::is_matching_covered;
    use alloc::collections::BTreeSet;

    fn gather(cfg: &CensusConfig) -> (Vec<(CensusRecord, BipGraph)>, CensusSummary) {
        let mut out = Vec::new();
        let summary =
            run_census(cfg, |record, graph| out.push((record.clone(), graph.clone()))).unwrap();
        (out, summary)
    }

    fn encode(g: &BipGraph) -> String {
        canonical_form(g).encode()
    }

    #[test]
    fn the_order_four_census_holds_only_the_square() {
        let (records, summary) = gather(&CensusConfig::new(4, 1));
        assert_eq!(summary.records, 1);
        assert!(summary.violations.is_empty());
        let (record, _) = &records[0];
        assert_eq!(record.canonical, encode(&cycle4()));
        assert_eq!((record.a_count, record.b_count, record.n, record.m), (2, 2, 4, 4));
        assert!(record.matchable && record.matching_covered && record.minimal);
        assert_eq!(
            record.flags,
            ExtremalFlags { h0: false, h1: false, h2: true, h3: true, h4: false }
        );
        let slacks = record.slacks.unwrap();
        assert_eq!((slacks.h0, slacks.h1, slacks.h2, slacks.h3, slacks.h4), (2, 10, 0, 0, -2));
        assert_eq!(record.extendable, alloc::vec![true]);
        assert_eq!(record.minimal_extendable, alloc::vec![true]);
        assert_eq!(record.essential_cut, Some(2));
        let agree = record.recognizers_agree.unwrap();
        assert!(agree.h0 && agree.h1 && agree.h2 && agree.h3 && agree.h4);
    }

    #[test]
    fn the_order_six_census_matches_the_hand_list() {
        let (records, summary) = gather(&CensusConfig::new(6, 2));
        assert_eq!(summary.records, 7);
        assert!(summary.violations.is_empty());
        assert!(summary.conjecture_notes.is_empty());
        let canonicals: BTreeSet<&str> =
            records.iter().map(|(r, _)| r.canonical.as_str()).collect();
        assert_eq!(canonicals.len(), 7);
        for g in [
            cycle4(),
            complete_bipartite(2, 3),
            even_cycle(3),
            complete_bipartite(3, 3),
            complete_bipartite(2, 4),
        ] {
            assert!(canonicals.contains(encode(&g).as_str()));
        }
        let at6 = &summary.counts[2];
        assert_eq!(at6.n, 6);
        assert_eq!(at6.records, 5);
        assert_eq!(at6.matching_covered, 4);
        assert_eq!(at6.minimal, 1);
        assert_eq!(at6.h, [0, 0, 0, 0, 1]);
        assert_eq!(at6.extendable, alloc::vec![4, 1]);
        assert_eq!(at6.minimal_extendable, alloc::vec![1, 1]);
        assert_eq!(summary.counts_total(), 7);
    }

    #[test]
    fn brute_force_agrees_family_by_family() {
        let (records, _) = gather(&CensusConfig::new(8, 0));
        for (a, b) in [(2, 2), (2, 3), (3, 3), (2, 4), (3, 4), (2, 5), (2, 6), (3, 5), (4, 4)] {
            let expected = brute_family(a, b);
            let streamed: BTreeSet<String> = records
                .iter()
                .filter(|(r, _)| (r.a_count, r.b_count) == (a, b))
                .map(|(r, _)| r.canonical.clone())
                .collect();
            let count =
                records.iter().filter(|(r, _)| (r.a_count, r.b_count) == (a, b)).count();
            assert_eq!(streamed.len(), count, "duplicate class in family {a}+{b}");
            assert_eq!(streamed, expected, "family {a}+{b} differs from brute force");
        }
    }

    fn brute_family(a: usize, b: usize) -> BTreeSet<String> {
        let cells = a * b;
        let mut out = BTreeSet::new();
        for bits in 0u64..1 << cells {
            let mut rows = alloc::vec![0u64; a];
            let mut edges = Vec::new();
            for c in 0..cells {
                if bits >> c & 1 == 1 {
                    rows[c / b] |= 1 << (c % b);
                    edges.push((c / b, c % b));
                }
            }
            if rows.iter().any(|r| r.count_ones() < 2) {
                continue;
            }
            let col_ok =
                (0..b).all(|y| rows.iter().filter(|r| *r >> y & 1 == 1).count() >= 2);
            if !col_ok || !masks_connected(&rows, b) {
                continue;
            }
            let g = BipGraph::build(a, b, edges).unwrap();
            out.insert(encode(&g));
        }
        out
    }

    #[test]
    fn shards_partition_the_run_and_runs_repeat() {
        let single: Vec<String> = {
            let (records, summary) = gather(&CensusConfig::new(8, 1));
            assert!(summary.violations.is_empty());
            assert_eq!(summary.counts_total(), summary.records);
            records.into_iter().map(|(r, _)| r.canonical).collect()
        };
        let again: Vec<String> = {
            let (records, _) = gather(&CensusConfig::new(8, 1));
            records.into_iter().map(|(r, _)| r.canonical).collect()
        };
        assert_eq!(single, again);
        assert_eq!(single.iter().collect::<BTreeSet<_>>().len(), single.len());

        let mut union: Vec<String> = Vec::new();
        let mut total = 0;
        for index in 0..3 {
            let mut cfg = CensusConfig::new(8, 1);
            cfg.shard_index = index;
            cfg.shard_count = 3;
            let (records, summary) = gather(&cfg);
            assert!(summary.violations.is_empty());
            total += summary.records;
            union.extend(records.into_iter().map(|(r, _)| r.canonical));
        }
        assert_eq!(total as usize, single.len());
        assert_eq!(union.iter().collect::<BTreeSet<_>>().len(), union.len());
        let mut sorted_union = union;
        sorted_union.sort();
        let mut sorted_single = single;
        sorted_single.sort();
        assert_eq!(sorted_union, sorted_single);
    }

    #[test]
    fn theta_is_the_lone_double_member_through_order_eight() {
        let (records, summary) = gather(&CensusConfig::new(8, 1));
        assert!(summary.violations.is_empty());
        let theta = encode(&theta_graph());
        let in_h3_h4: Vec<&CensusRecord> =
            records.iter().map(|(r, _)| r).filter(|r| r.flags.h3 && r.flags.h4).collect();
        let in_h1_h2: Vec<&CensusRecord> =
            records.iter().map(|(r, _)| r).filter(|r| r.flags.h1 && r.flags.h2).collect();
        assert_eq!(in_h3_h4.len(), 1);
        assert_eq!(in_h1_h2.len(), 1);
        assert_eq!(in_h3_h4[0].canonical, theta);
        assert_eq!(in_h1_h2[0].canonical, theta);
        let record = in_h3_h4[0];
        assert!(record.flags.h0 && record.flags.h1 && record.flags.h2);
        let slacks = record.slacks.unwrap();
        assert_eq!((slacks.h0, slacks.h1, slacks.h2, slacks.h3, slacks.h4), (0, 0, 0, 0, 0));
        assert_eq!(record.essential_cut, Some(2));
    }

    #[test]
    fn records_match_the_reference_engines_one_by_one() {
        let (records, _) = gather(&CensusConfig::new(8, 2));
        assert_eq!(records.len(), 61);
        let mut per_order = [0usize; 5];
        for (record, _) in &records {
            per_order[record.n - 4] += 1;
        }
        assert_eq!(per_order, [1, 1, 5, 9, 45]);
        for (record, g) in &records {
            assert_eq!(record.matching_covered, is_matching_covered(g), "{}", record.canonical);
            let minimal = record.matching_covered
                && classify::is_minimal_mc(g).unwrap_or(false);
            assert_eq!(record.minimal, minimal, "{}", record.canonical);
            for k in 1..=2usize {
                let verdict = kext::is_k_extendable(g, k).map(|r| r.verdict).unwrap_or(false);
                assert_eq!(record.extendable[k - 1], verdict, "{} k={k}", record.canonical);
                let minimal_k = kext::is_minimal_k_extendable(g, k).unwrap_or(false);
                assert_eq!(
                    record.minimal_extendable[k - 1],
                    minimal_k,
                    "{} k={k}",
                    record.canonical
                );
            }
        }
    }

    #[test]
    fn unbalanced_and_odd_orders_record_plainly() {
        let (records, summary) = gather(&CensusConfig::new(5, 3));
        assert_eq!(summary.records, 2);
        let (square, _) = &records[0];
        let (k23, _) = &records[1];
        assert_eq!(square.canonical, encode(&cycle4()));
        assert_eq!(k23.canonical, encode(&complete_bipartite(2, 3)));
        assert_eq!(square.extendable, alloc::vec![true, false, false]);
        assert_eq!(square.essential_cut, Some(2));
        assert!(!k23.matchable && !k23.matching_covered && !k23.minimal);
        assert_eq!(k23.extendable, alloc::vec![false, false, false]);
        assert_eq!(k23.slacks, None);
        assert_eq!(k23.recognizers_agree, None);
        assert_eq!(k23.essential_cut, None);
    }

    #[test]
    fn bad_configurations_are_rejected() {
        for (max_n, k_max) in [(3, 0), (13, 0), (8, 4)] {
            assert_eq!(
                run_census(&CensusConfig::new(max_n, k_max), |_, _| {}),
                Err(CensusError::BudgetExceeded { max_n, k_max })
            );
        }
        let mut cfg = CensusConfig::new(6, 0);
        cfg.shard_index = 2;
        cfg.shard_count = 2;
        assert_eq!(
            run_census(&cfg, |_, _| {}),
            Err(CensusError::BadShard { index: 2, count: 2 })
        );
        cfg.shard_index = 0;
        cfg.shard_count = 0;
        assert_eq!(
            run_census(&cfg, |_, _| {}),
            Err(CensusError::BadShard { index: 0, count: 0 })
        );
        assert!(enumerate_bipartite(13, None, |_| {}).is_err());
    }

    #[test]
    fn the_enumeration_stream_respects_the_edge_cap() {
        let mut count = 0;
        let produced = enumerate_bipartite(6, None, |g| {
            assert!(g.is_connected() && g.min_degree() >= 2);
            count += 1;
        })
        .unwrap();
        assert_eq!((produced, count), (7, 7));
        let mut small = Vec::new();
        let capped = enumerate_bipartite(6, Some(6), |g| small.push(encode(g))).unwrap();
        assert_eq!(capped, 3);
        let expected: BTreeSet<String> =
            [cycle4(), complete_bipartite(2, 3), even_cycle(3)].iter().map(encode).collect();
        assert_eq!(small.into_iter().collect::<BTreeSet<_>>(), expected);
    }
}
