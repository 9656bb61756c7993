//! Matchings and matchability: maximum matching, perfect-matching
//! certificates with Hall violators, matchable edges, the matching covered
//! test, conformal subgraphs, and perfect-matching enumeration.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{BipGraph, EdgeId, GraphError, Matching, Side, Vertex};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MatchingError {
    NotPresent,
    NoSuchCycle,
}

impl fmt::Display for MatchingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingError::NotPresent => write!(f, "referenced vertex or edge is not present"),
            MatchingError::NoSuchCycle => write!(f, "no conformal cycle satisfies the request"),
        }
    }
}

impl core::error::Error for MatchingError {}

impl From<GraphError> for MatchingError {
    fn from(_: GraphError) -> MatchingError {
        MatchingError::NotPresent
    }
}

/// Why a graph fails the matching covered test.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NotMatchingCoveredReason {
    TooSmall { n: usize },
    Disconnected,
    Unbalanced { a: usize, b: usize },
    UnmatchableEdge { edge: EdgeId },
}

impl fmt::Display for NotMatchingCoveredReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotMatchingCoveredReason::TooSmall { n } => write!(f, "order {n} is below 4"),
            NotMatchingCoveredReason::Disconnected => write!(f, "graph is disconnected"),
            NotMatchingCoveredReason::Unbalanced { a, b } => {
                write!(f, "classes have unequal sizes {a} and {b}")
            }
            NotMatchingCoveredReason::UnmatchableEdge { edge } => {
                write!(f, "edge {edge} lies in no perfect matching")
            }
        }
    }
}

/// Either a perfect matching or a one-class witness set `S` with
/// `|N(S)| < |S|`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MatchabilityWitness {
    Perfect(Matching),
    HallViolator { side: Side, members: Vec<usize>, neighborhood: Vec<usize> },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatchabilityCertificate {
    pub matchable: bool,
    pub witness: MatchabilityWitness,
}

/// Maximum matching by Hopcroft-Karp. Free vertices are scanned ascending and
/// adjacency in edge-id order, so the result is deterministic.
pub fn max_matching(g: &BipGraph) -> Matching {
    let (a_adj, _) = g.adjacency();
    let a_count = g.a_count();
    let b_count = g.b_count();
    let mut pair_a: Vec<Option<(usize, EdgeId)>> = alloc::vec![None; a_count];
    let mut pair_b: Vec<Option<(usize, EdgeId)>> = alloc::vec![None; b_count];
    loop {
        let mut dist = alloc::vec![usize::MAX; a_count];
        let mut queue = VecDeque::new();
        for a in 0..a_count {
            if pair_a[a].is_none() {
                dist[a] = 0;
                queue.push_back(a);
            }
        }
        let mut found_free = false;
        while let Some(a) = queue.pop_front() {
            for &(b, _) in &a_adj[a] {
                match pair_b[b] {
                    None => found_free = true,
                    Some((a2, _)) => {
                        if dist[a2] == usize::MAX {
                            dist[a2] = dist[a] + 1;
                            queue.push_back(a2);
                        }
                    }
                }
            }
        }
        if !found_free {
            break;
        }
        fn augment(
            a: usize,
            a_adj: &[Vec<(usize, EdgeId)>],
            dist: &mut [usize],
            pair_a: &mut [Option<(usize, EdgeId)>],
            pair_b: &mut [Option<(usize, EdgeId)>],
        ) -> bool {
            for &(b, id) in &a_adj[a] {
                let ok = match pair_b[b] {
                    None => true,
                    Some((a2, _)) => {
                        dist[a2] == dist[a] + 1
                            && augment(a2, a_adj, dist, pair_a, pair_b)
                    }
                };
                if ok {
                    pair_a[a] = Some((b, id));
                    pair_b[b] = Some((a, id));
                    return true;
                }
            }
            dist[a] = usize::MAX;
            false
        }
        let mut progressed = false;
        for a in 0..a_count {
            if pair_a[a].is_none() && dist[a] == 0 {
                progressed |= augment(a, &a_adj, &mut dist, &mut pair_a, &mut pair_b);
            }
        }
        if !progressed {
            break;
        }
    }
    let ids = pair_a.iter().filter_map(|slot| slot.map(|(_, id)| id));
    Matching::from_edge_ids(g, ids).expect("pairings are disjoint by construction")
}

/// Certificate for "does a perfect matching exist": a perfect matching, or a
/// Hall violator inside one class.
pub fn matchability(g: &BipGraph) -> MatchabilityCertificate {
    let a_count = g.a_count();
    let b_count = g.b_count();
    if a_count != b_count {
        let (side, big, other_adj_len) = if a_count > b_count {
            (Side::A, a_count, b_count)
        } else {
            (Side::B, b_count, a_count)
        };
        let members: Vec<usize> = (0..big).collect();
        let mut hood = BTreeSet::new();
        for &(a, b) in g.edges() {
            hood.insert(match side {
                Side::A => b,
                Side::B => a,
            });
        }
        debug_assert!(hood.len() <= other_adj_len);
        return MatchabilityCertificate {
            matchable: false,
            witness: MatchabilityWitness::HallViolator {
                side,
                members,
                neighborhood: hood.into_iter().collect(),
            },
        };
    }
    let m = max_matching(g);
    if m.len() == a_count {
        return MatchabilityCertificate { matchable: true, witness: MatchabilityWitness::Perfect(m) };
    }
    let (a_adj, _) = g.adjacency();
    let mut partner_of_a = alloc::vec![None; a_count];
    let mut partner_of_b = alloc::vec![None; b_count];
    for &id in m.edge_ids() {
        let (a, b) = g.edge(id).expect("matching ids exist");
        partner_of_a[a] = Some(b);
        partner_of_b[b] = Some(a);
    }
    let mut in_s = alloc::vec![false; a_count];
    let mut seen_b = alloc::vec![false; b_count];
    let mut queue = VecDeque::new();
    for a in 0..a_count {
        if partner_of_a[a].is_none() {
            in_s[a] = true;
            queue.push_back(a);
        }
    }
    while let Some(a) = queue.pop_front() {
        for &(b, _) in &a_adj[a] {
            if !seen_b[b] {
                seen_b[b] = true;
                if let Some(a2) = partner_of_b[b] {
                    if !in_s[a2] {
                        in_s[a2] = true;
                        queue.push_back(a2);
                    }
                }
            }
        }
    }
    let members: Vec<usize> = (0..a_count).filter(|&a| in_s[a]).collect();
    let neighborhood: Vec<usize> = (0..b_count).filter(|&b| seen_b[b]).collect();
    debug_assert!(neighborhood.len() < members.len());
    MatchabilityCertificate {
        matchable: false,
        witness: MatchabilityWitness::HallViolator { side: Side::A, members, neighborhood },
    }
}

pub fn is_matchable(g: &BipGraph) -> bool {
    g.a_count() == g.b_count() && max_matching(g).len() == g.a_count()
}

/// Whether edge `id` lies in some perfect matching, by deleting both its
/// endpoints and testing matchability of the rest.
pub fn is_matchable_edge(g: &BipGraph, id: EdgeId) -> Result<bool, MatchingError> {
    let (u, v) = g.endpoints(id)?;
    let victims: BTreeSet<Vertex> = [u, v].into();
    let (rest, _) = g.remove(&victims, &BTreeSet::new())?;
    Ok(is_matchable(&rest))
}

/// A perfect matching containing edge `id`, if one exists.
pub fn perfect_matching_through_edge(g: &BipGraph, id: EdgeId) -> Result<Option<Matching>, MatchingError> {
    let (u, v) = g.endpoints(id)?;
    let victims: BTreeSet<Vertex> = [u, v].into();
    let (rest, maps) = g.remove(&victims, &BTreeSet::new())?;
    if !is_matchable(&rest) {
        return Ok(None);
    }
    let inner = max_matching(&rest);
    let mut back = alloc::vec![0; rest.m()];
    for (old, slot) in maps.edge_map.iter().enumerate() {
        if let Some(new) = slot {
            back[*new] = old;
        }
    }
    let ids = inner.edge_ids().iter().map(|&e| back[e]).chain([id]);
    Ok(Some(Matching::from_edge_ids(g, ids).expect("lifted matching stays disjoint")))
}

/// Detailed matching covered test: connected, at least 4 vertices, and every
/// edge lies in some perfect matching.
pub fn matching_covered_reason(g: &BipGraph) -> Result<(), NotMatchingCoveredReason> {
    if g.n() < 4 {
        return Err(NotMatchingCoveredReason::TooSmall { n: g.n() });
    }
    if g.a_count() != g.b_count() {
        return Err(NotMatchingCoveredReason::Unbalanced { a: g.a_count(), b: g.b_count() });
    }
    if !g.is_connected() {
        return Err(NotMatchingCoveredReason::Disconnected);
    }
    let mut verdicts: alloc::collections::BTreeMap<(usize, usize), bool> =
        alloc::collections::BTreeMap::new();
    for (id, &pair) in g.edges().iter().enumerate() {
        let ok = match verdicts.get(&pair) {
            Some(&v) => v,
            None => {
                let v = is_matchable_edge(g, id).expect("edge id is in range");
                verdicts.insert(pair, v);
                v
            }
        };
        if !ok {
            return Err(NotMatchingCoveredReason::UnmatchableEdge { edge: id });
        }
    }
    Ok(())
}

pub fn is_matching_covered(g: &BipGraph) -> bool {
    matching_covered_reason(g).is_ok()
}

/// Whether the subgraph spanned by `sub_vertices` is conformal: the rest of
/// the graph has a perfect matching.
pub fn is_conformal(g: &BipGraph, sub_vertices: &BTreeSet<Vertex>) -> Result<bool, MatchingError> {
    let (rest, _) = g.remove(sub_vertices, &BTreeSet::new())?;
    Ok(is_matchable(&rest))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PmEnumeration {
    pub matchings: Vec<Matching>,
    pub truncated: bool,
}

/// All perfect matchings in lexicographic edge-id order, stopping after
/// `limit` and flagging truncation. Exponential oracle, for small graphs.
pub fn enumerate_perfect_matchings(g: &BipGraph, limit: usize) -> PmEnumeration {
    let mut out = PmEnumeration { matchings: Vec::new(), truncated: false };
    if g.a_count() != g.b_count() {
        return out;
    }
    let (a_adj, _) = g.adjacency();
    let mut used_b = alloc::vec![false; g.b_count()];
    let mut chosen: Vec<EdgeId> = Vec::new();
    fn go(
        a: usize,
        g: &BipGraph,
        a_adj: &[Vec<(usize, EdgeId)>],
        used_b: &mut [bool],
        chosen: &mut Vec<EdgeId>,
        out: &mut PmEnumeration,
        limit: usize,
    ) {
        if out.truncated {
            return;
        }
        if a == a_adj.len() {
            if out.matchings.len() == limit {
                out.truncated = true;
                return;
            }
            out.matchings.push(
                Matching::from_edge_ids(g, chosen.iter().copied())
                    .expect("enumeration keeps endpoints disjoint"),
            );
            return;
        }
        for &(b, id) in &a_adj[a] {
            if !used_b[b] {
                used_b[b] = true;
                chosen.push(id);
                go(a + 1, g, a_adj, used_b, chosen, out, limit);
                chosen.pop();
                used_b[b] = false;
            }
        }
    }
    go(0, g, &a_adj, &mut used_b, &mut chosen, &mut out, limit);
    out
}

/// A conformal cycle through `u` that does not use the edge `avoid`, returned
/// as its vertex sequence starting at `u`. Exists whenever the graph is
/// matching covered, `avoid` is incident to `u`, and `u` has degree at least
/// three; built from the symmetric difference of two perfect matchings forced
/// through different edges at `u`.
pub fn conformal_cycle_through_vertex_avoiding_edge(
    g: &BipGraph,
    u: Vertex,
    avoid: EdgeId,
) -> Result<Vec<Vertex>, MatchingError> {
    if !g.contains_vertex(u) {
        return Err(MatchingError::NotPresent);
    }
    g.other_end(avoid, u)?;
    let candidates: Vec<EdgeId> =
        g.incident_edges(u).into_iter().filter(|&id| id != avoid).collect();
    if candidates.len() < 2 {
        return Err(MatchingError::NoSuchCycle);
    }
    for (i, &f1) in candidates.iter().enumerate() {
        for &f2 in &candidates[i + 1..] {
            let x = g.other_end(f1, u)?;
            let y = g.other_end(f2, u)?;
            if x == y {
                continue;
            }
            let (Some(m1), Some(m2)) =
                (perfect_matching_through_edge(g, f1)?, perfect_matching_through_edge(g, f2)?)
            else {
                continue;
            };
            let mut cycle = alloc::vec![u];
            let mut cur = x;
            let mut use_first = false;
            while cur != u {
                cycle.push(cur);
                let m = if use_first { &m1 } else { &m2 };
                let (next, _) = m.partner(g, cur).expect("perfect matchings cover every vertex");
                cur = next;
                use_first = !use_first;
            }
            return Ok(cycle);
        }
    }
    for (i, &f1) in candidates.iter().enumerate() {
        for &f2 in &candidates[i + 1..] {
            let x = g.other_end(f1, u)?;
            if x == g.other_end(f2, u)? && perfect_matching_through_edge(g, f1)?.is_some() {
                return Ok(alloc::vec![u, x]);
            }
        }
    }
    Err(MatchingError::NoSuchCycle)
}

/// Maximum matching size over neighborhood bitmasks, one mask per A-vertex.
/// Shared fast path for the census and extendability engines.
pub(crate) fn max_matching_masks(adj: &[u64], b_count: usize) -> usize {
    debug_assert!(b_count <= 64);
    let mut pair_b: Vec<usize> = alloc::vec![usize::MAX; b_count];
    let mut size = 0;
    fn try_augment(a: usize, adj: &[u64], visited: &mut u64, pair_b: &mut [usize]) -> bool {
        let mut open = adj[a] & !*visited;
        while open != 0 {
            let b = open.trailing_zeros() as usize;
            open &= open - 1;
            *visited |= 1 << b;
            if pair_b[b] == usize::MAX || try_augment(pair_b[b], adj, visited, pair_b) {
                pair_b[b] = a;
                return true;
            }
        }
        false
    }
    for a in 0..adj.len() {
        let mut visited: u64 = 0;
        if try_augment(a, adj, &mut visited, &mut pair_b) {
            size += 1;
        }
    }
    size
}

/// Whether the mask-encoded graph restricted to `alive_a`/`alive_b` has a
/// perfect matching on those vertices.
pub(crate) fn masks_matchable(adj: &[u64], alive_a: u64, alive_b: u64) -> bool {
    let need = alive_a.count_ones();
    if need != alive_b.count_ones() {
        return false;
    }
    let mut rows: Vec<u64> = Vec::with_capacity(need as usize);
    let mut live = alive_a;
    while live != 0 {
        let a = live.trailing_zeros() as usize;
        live &= live - 1;
        rows.push(adj[a] & alive_b);
    }
    let b_count = if alive_b == 0 { 0 } else { 64 - alive_b.leading_zeros() as usize };
    max_matching_masks(&rows, b_count) == need as usize
}

/// Neighborhood masks of a graph with both sides at most 64, collapsing
/// parallel edges.
pub(crate) fn adjacency_masks(g: &BipGraph) -> Vec<u64> {
    debug_assert!(g.a_count() <= 64 && g.b_count() <= 64);
    let mut adj = alloc::vec![0u64; g.a_count()];
    for &(a, b) in g.edges() {
        adj[a] |= 1 << b;
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, cycle4, even_cycle};

    #[test]
    fn max_matching_on_cycle4_is_perfect() {
        let g = cycle4();
        let m = max_matching(&g);
        assert!(m.is_perfect(&g));
    }

    #[test]
    fn matchability_reports_hall_violator() {
        let g = BipGraph::build(3, 3, [(0, 0), (1, 0), (2, 0), (0, 1), (0, 2)]).unwrap();
        let cert = matchability(&g);
        assert!(!cert.matchable);
        match cert.witness {
            MatchabilityWitness::HallViolator { side, members, neighborhood } => {
                assert_eq!(side, Side::A);
                assert!(neighborhood.len() < members.len());
                let mut hood = BTreeSet::new();
                for &a in &members {
                    for (v, _) in g.neighbors(Vertex::a(a)) {
                        hood.insert(v.index);
                    }
                }
                assert_eq!(hood.into_iter().collect::<Vec<_>>(), neighborhood);
            }
            MatchabilityWitness::Perfect(_) => panic!("graph has no perfect matching"),
        }
    }

    #[test]
    fn unbalanced_graph_witness_uses_larger_side() {
        let g = BipGraph::build(1, 2, [(0, 0), (0, 1)]).unwrap();
        let cert = matchability(&g);
        assert!(!cert.matchable);
        match cert.witness {
            MatchabilityWitness::HallViolator { side, members, neighborhood } => {
                assert_eq!(side, Side::B);
                assert_eq!(members, alloc::vec![0, 1]);
                assert_eq!(neighborhood, alloc::vec![0]);
            }
            _ => panic!("expected a violator"),
        }
    }

    #[test]
    fn empty_graph_is_matchable() {
        let g = BipGraph::build(0, 0, []).unwrap();
        assert!(is_matchable(&g));
        assert!(matchability(&g).matchable);
    }

    #[test]
    fn every_edge_of_k33_is_matchable() {
        let g = complete_bipartite(3, 3);
        for id in 0..g.m() {
            assert!(is_matchable_edge(&g, id).unwrap());
        }
        assert!(is_matching_covered(&g));
    }

    #[test]
    fn pendant_edge_path_is_not_matching_covered() {
        let g = BipGraph::build(2, 2, [(0, 0), (1, 0), (1, 1)]).unwrap();
        assert_eq!(
            matching_covered_reason(&g),
            Err(NotMatchingCoveredReason::UnmatchableEdge { edge: 1 })
        );
    }

    #[test]
    fn small_and_disconnected_graphs_are_rejected() {
        let g = BipGraph::build(1, 1, [(0, 0)]).unwrap();
        assert_eq!(matching_covered_reason(&g), Err(NotMatchingCoveredReason::TooSmall { n: 2 }));
        let two = BipGraph::build(2, 2, [(0, 0), (1, 1)]).unwrap();
        assert_eq!(matching_covered_reason(&two), Err(NotMatchingCoveredReason::Disconnected));
    }

    #[test]
    fn conformal_subgraphs_of_cycle6() {
        let g = even_cycle(3);
        let empty = BTreeSet::new();
        assert!(is_conformal(&g, &empty).unwrap());
        let pair: BTreeSet<Vertex> = [Vertex::a(0), Vertex::b(0)].into();
        assert!(is_conformal(&g, &pair).unwrap());
        let skew: BTreeSet<Vertex> =
            [Vertex::a(0), Vertex::a(1), Vertex::b(1), Vertex::b(2)].into();
        assert!(!is_conformal(&g, &skew).unwrap());
    }

    #[test]
    fn pm_enumeration_counts() {
        assert_eq!(enumerate_perfect_matchings(&cycle4(), 100).matchings.len(), 2);
        assert_eq!(enumerate_perfect_matchings(&complete_bipartite(3, 3), 100).matchings.len(), 6);
        let trunc = enumerate_perfect_matchings(&complete_bipartite(3, 3), 4);
        assert_eq!(trunc.matchings.len(), 4);
        assert!(trunc.truncated);
        let exact = enumerate_perfect_matchings(&cycle4(), 2);
        assert!(!exact.truncated);
    }

    #[test]
    fn pm_enumeration_matches_matchability_verdict() {
        let g = BipGraph::build(3, 3, [(0, 0), (1, 0), (2, 0), (0, 1), (0, 2)]).unwrap();
        assert!(enumerate_perfect_matchings(&g, 10).matchings.is_empty());
        assert!(!is_matchable(&g));
    }

    #[test]
    fn conformal_cycle_avoids_requested_edge() {
        let g = complete_bipartite(3, 3);
        let u = Vertex::a(0);
        let cycle = conformal_cycle_through_vertex_avoiding_edge(&g, u, 0).unwrap();
        assert_eq!(cycle[0], u);
        assert_eq!(cycle.len() % 2, 0);
        assert!(cycle.len() >= 4);
        for pair in cycle.windows(2) {
            assert_ne!((pair[0], pair[1]), (Vertex::a(0), Vertex::b(0)));
            assert_ne!((pair[0], pair[1]), (Vertex::b(0), Vertex::a(0)));
        }
        let on_cycle: BTreeSet<Vertex> = cycle.iter().copied().collect();
        assert_eq!(on_cycle.len(), cycle.len());
        assert!(is_conformal(&g, &on_cycle).unwrap());
    }

    #[test]
    fn degree_two_vertex_has_no_avoiding_cycle() {
        let g = cycle4();
        let err = conformal_cycle_through_vertex_avoiding_edge(&g, Vertex::a(0), 0).unwrap_err();
        assert_eq!(err, MatchingError::NoSuchCycle);
    }

    #[test]
    fn mask_matcher_agrees_with_hopcroft_karp() {
        let graphs = [
            complete_bipartite(4, 4),
            even_cycle(5),
            BipGraph::build(3, 3, [(0, 0), (1, 0), (2, 0), (0, 1), (0, 2)]).unwrap(),
        ];
        for g in graphs {
            let adj = adjacency_masks(&g);
            assert_eq!(max_matching_masks(&adj, g.b_count()), max_matching(&g).len());
        }
    }

    #[test]
    fn masks_matchable_restricts_correctly() {
        let g = BipGraph::build(3, 3, [(0, 0), (1, 0), (2, 0), (0, 1), (0, 2)]).unwrap();
        let adj = adjacency_masks(&g);
        assert!(!masks_matchable(&adj, 0b111, 0b111));
        assert!(!masks_matchable(&adj, 0b110, 0b011));
        assert!(masks_matchable(&adj, 0b011, 0b011));
        assert!(masks_matchable(&adj, 0, 0));
    }
}
