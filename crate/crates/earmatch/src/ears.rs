//! Ear decompositions of matching covered bipartite graphs: an even initial
//! cycle followed by odd ears, every prefix conformal, found deterministically
//! and re-verifiable from scratch.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{BipGraph, EdgeId, Vertex};
use crate::matching::{
    is_matchable, is_matching_covered, matching_covered_reason, perfect_matching_through_edge,
    NotMatchingCoveredReason,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EarsError {
    NotMatchingCovered(NotMatchingCoveredReason),
    PreconditionFailed(&'static str),
    SearchExhausted,
}

impl fmt::Display for EarsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EarsError::NotMatchingCovered(reason) => {
                write!(f, "graph is not matching covered: {reason}")
            }
            EarsError::PreconditionFailed(what) => write!(f, "precondition failed: {what}"),
            EarsError::SearchExhausted => write!(f, "ear search exhausted without covering the graph"),
        }
    }
}

impl core::error::Error for EarsError {}

/// A walk given by its vertices and the edge ids between them. For an ear the
/// two lists satisfy `edge_ids.len() + 1 == vertices.len()`; for the initial
/// cycle they have equal length and the last edge closes the cycle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EarPath {
    pub vertices: Vec<Vertex>,
    pub edge_ids: Vec<EdgeId>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EarDecomposition {
    pub initial_cycle: EarPath,
    pub ears: Vec<EarPath>,
}

impl EarDecomposition {
    /// Number of ears after the initial cycle; equals `m - n` when the
    /// decomposition covers the whole graph.
    pub fn ear_count(&self) -> usize {
        self.ears.len()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EarVerification {
    pub ok: bool,
    pub violation: Option<String>,
}

/// An ear decomposition of `g`: an even conformal cycle, then odd ears added
/// one at a time, each keeping the union conformal, until every edge is used.
pub fn find_ear_decomposition(g: &BipGraph) -> Result<EarDecomposition, EarsError> {
    matching_covered_reason(g).map_err(EarsError::NotMatchingCovered)?;
    let initial_cycle = initial_conformal_cycle(g).ok_or(EarsError::SearchExhausted)?;
    let mut in_union: BTreeSet<Vertex> = initial_cycle.vertices.iter().copied().collect();
    let mut used: BTreeSet<EdgeId> = initial_cycle.edge_ids.iter().copied().collect();
    let mut ears = Vec::new();
    grow_to_full(g, &mut in_union, &mut used, &mut ears)?;
    Ok(EarDecomposition { initial_cycle, ears })
}

/// An ear decomposition whose prefix is exactly the subgraph given by
/// `h_vertices` and `h_edge_ids`; that subgraph must be conformal in `g` and
/// matching covered on its own.
pub fn find_ear_decomposition_through(
    g: &BipGraph,
    h_vertices: &BTreeSet<Vertex>,
    h_edge_ids: &BTreeSet<EdgeId>,
) -> Result<EarDecomposition, EarsError> {
    matching_covered_reason(g).map_err(EarsError::NotMatchingCovered)?;
    for &v in h_vertices {
        if !g.contains_vertex(v) {
            return Err(EarsError::PreconditionFailed("subgraph vertex is not in the graph"));
        }
    }
    for &id in h_edge_ids {
        let Ok((u, v)) = g.endpoints(id) else {
            return Err(EarsError::PreconditionFailed("subgraph edge is not in the graph"));
        };
        if !h_vertices.contains(&u) || !h_vertices.contains(&v) {
            return Err(EarsError::PreconditionFailed("subgraph edge leaves the vertex set"));
        }
    }
    let outside: BTreeSet<Vertex> = g.vertices().filter(|v| !h_vertices.contains(v)).collect();
    let spurned: BTreeSet<EdgeId> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(id, &(a, b))| {
            !h_edge_ids.contains(&id)
                && h_vertices.contains(&Vertex::a(a))
                && h_vertices.contains(&Vertex::b(b))
        })
        .map(|(id, _)| id)
        .collect();
    let (sub, maps) = g
        .remove(&outside, &spurned)
        .expect("subgraph vertices and edges were just validated");
    if !is_matchable(&g.remove(h_vertices, &BTreeSet::new()).expect("vertices validated").0) {
        return Err(EarsError::PreconditionFailed("subgraph is not conformal"));
    }
    if !is_matching_covered(&sub) {
        return Err(EarsError::PreconditionFailed("subgraph is not matching covered"));
    }
    let inner = find_ear_decomposition(&sub)?;
    let mut a_back = alloc::vec![0; sub.a_count()];
    let mut b_back = alloc::vec![0; sub.b_count()];
    let mut e_back = alloc::vec![0; sub.m()];
    for (old, slot) in maps.a_map.iter().enumerate() {
        if let Some(new) = slot {
            a_back[*new] = old;
        }
    }
    for (old, slot) in maps.b_map.iter().enumerate() {
        if let Some(new) = slot {
            b_back[*new] = old;
        }
    }
    for (old, slot) in maps.edge_map.iter().enumerate() {
        if let Some(new) = slot {
            e_back[*new] = old;
        }
    }
    let lift = |p: &EarPath| EarPath {
        vertices: p
            .vertices
            .iter()
            .map(|v| match v.side {
                crate::graph::Side::A => Vertex::a(a_back[v.index]),
                crate::graph::Side::B => Vertex::b(b_back[v.index]),
            })
            .collect(),
        edge_ids: p.edge_ids.iter().map(|&id| e_back[id]).collect(),
    };
    let initial_cycle = lift(&inner.initial_cycle);
    let mut ears: Vec<EarPath> = inner.ears.iter().map(lift).collect();
    let mut in_union = h_vertices.clone();
    let mut used = h_edge_ids.clone();
    grow_to_full(g, &mut in_union, &mut used, &mut ears)?;
    Ok(EarDecomposition { initial_cycle, ears })
}

/// Replays a decomposition against `g`, checking shape, parity, disjointness,
/// conformality of every prefix, and full coverage. Returns the first
/// violation found.
pub fn verify_ear_decomposition(g: &BipGraph, ed: &EarDecomposition) -> EarVerification {
    let fail = |msg: String| EarVerification { ok: false, violation: Some(msg) };
    let cycle = &ed.initial_cycle;
    if cycle.vertices.len() != cycle.edge_ids.len() {
        return fail("initial cycle vertex and edge counts disagree".into());
    }
    if cycle.vertices.len() < 4 || cycle.vertices.len() % 2 != 0 {
        return fail(format!("initial cycle length {} is not an even number >= 4", cycle.vertices.len()));
    }
    let len = cycle.vertices.len();
    for i in 0..len {
        let u = cycle.vertices[i];
        let v = cycle.vertices[(i + 1) % len];
        if !edge_joins(g, cycle.edge_ids[i], u, v) {
            return fail(format!("initial cycle edge {} does not join {u} and {v}", cycle.edge_ids[i]));
        }
    }
    let mut in_union: BTreeSet<Vertex> = BTreeSet::new();
    for &v in &cycle.vertices {
        if !in_union.insert(v) {
            return fail(format!("initial cycle repeats vertex {v}"));
        }
    }
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    for &id in &cycle.edge_ids {
        if !used.insert(id) {
            return fail(format!("initial cycle repeats edge {id}"));
        }
    }
    if !conformal(g, &in_union) {
        return fail("initial cycle is not conformal".into());
    }
    for (k, ear) in ed.ears.iter().enumerate() {
        if ear.edge_ids.is_empty() || ear.vertices.len() != ear.edge_ids.len() + 1 {
            return fail(format!("ear {k} is not a nonempty path"));
        }
        if ear.edge_ids.len() % 2 != 1 {
            return fail(format!("ear {k} has even length {}", ear.edge_ids.len()));
        }
        for i in 0..ear.edge_ids.len() {
            let u = ear.vertices[i];
            let v = ear.vertices[i + 1];
            if !edge_joins(g, ear.edge_ids[i], u, v) {
                return fail(format!("ear {k} edge {} does not join {u} and {v}", ear.edge_ids[i]));
            }
        }
        let first = *ear.vertices.first().expect("checked nonempty");
        let last = *ear.vertices.last().expect("checked nonempty");
        if !in_union.contains(&first) || !in_union.contains(&last) {
            return fail(format!("ear {k} endpoint lies outside the union built so far"));
        }
        let interior = &ear.vertices[1..ear.vertices.len() - 1];
        let mut seen_interior = BTreeSet::new();
        for &v in interior {
            if in_union.contains(&v) {
                return fail(format!("ear {k} interior vertex {v} is already in the union"));
            }
            if !seen_interior.insert(v) {
                return fail(format!("ear {k} repeats interior vertex {v}"));
            }
        }
        for &id in &ear.edge_ids {
            if !used.insert(id) {
                return fail(format!("ear {k} reuses edge {id}"));
            }
        }
        for &v in interior {
            in_union.insert(v);
        }
        if !conformal(g, &in_union) {
            return fail(format!("union after ear {k} is not conformal"));
        }
    }
    if used.len() != g.m() {
        return fail(format!("decomposition uses {} of {} edges", used.len(), g.m()));
    }
    if in_union.len() != g.n() {
        return fail(format!("decomposition covers {} of {} vertices", in_union.len(), g.n()));
    }
    EarVerification { ok: true, violation: None }
}

fn edge_joins(g: &BipGraph, id: EdgeId, u: Vertex, v: Vertex) -> bool {
    match g.endpoints(id) {
        Ok((a, b)) => (a == u && b == v) || (a == v && b == u),
        Err(_) => false,
    }
}

fn conformal(g: &BipGraph, verts: &BTreeSet<Vertex>) -> bool {
    match g.remove(verts, &BTreeSet::new()) {
        Ok((rest, _)) => is_matchable(&rest),
        Err(_) => false,
    }
}

/// An even conformal cycle of length at least 4 through the smallest edge id
/// that admits one, from the symmetric difference of two perfect matchings.
fn initial_conformal_cycle(g: &BipGraph) -> Option<EarPath> {
    for e0 in 0..g.m() {
        let (va, vb) = g.endpoints(e0).expect("edge id is in range");
        let Ok(Some(m1)) = perfect_matching_through_edge(g, e0) else {
            continue;
        };
        let mut candidates: Vec<(Vertex, EdgeId)> = Vec::new();
        for id in g.incident_edges(va) {
            if id != e0 && g.other_end(id, va).expect("incident") != vb {
                candidates.push((va, id));
            }
        }
        for id in g.incident_edges(vb) {
            if id != e0 && g.other_end(id, vb).expect("incident") != va {
                candidates.push((vb, id));
            }
        }
        for (anchor, f) in candidates {
            let Ok(Some(m2)) = perfect_matching_through_edge(g, f) else {
                continue;
            };
            let mut vertices = alloc::vec![anchor];
            let mut edge_ids = Vec::new();
            let mut cur = anchor;
            let mut use_first = true;
            loop {
                let m = if use_first { &m1 } else { &m2 };
                let (next, id) = m.partner(g, cur).expect("perfect matchings cover every vertex");
                edge_ids.push(id);
                use_first = !use_first;
                if next == anchor {
                    break;
                }
                vertices.push(next);
                cur = next;
            }
            if vertices.len() >= 4 {
                return Some(EarPath { vertices, edge_ids });
            }
        }
    }
    None
}

fn grow_to_full(
    g: &BipGraph,
    in_union: &mut BTreeSet<Vertex>,
    used: &mut BTreeSet<EdgeId>,
    ears: &mut Vec<EarPath>,
) -> Result<(), EarsError> {
    while used.len() < g.m() {
        let mut added = false;
        for seed in 0..g.m() {
            if used.contains(&seed) {
                continue;
            }
            if let Some(ear) = grow_ear(g, in_union, used, seed) {
                for &v in &ear.vertices {
                    in_union.insert(v);
                }
                for &id in &ear.edge_ids {
                    used.insert(id);
                }
                ears.push(ear);
                added = true;
                break;
            }
        }
        if !added {
            return Err(EarsError::SearchExhausted);
        }
    }
    Ok(())
}

/// Depth-first search for an odd ear through the seed edge: endpoints in the
/// union, interior outside it, union staying conformal. The front end is
/// extended before the back end and neighbors are tried in edge-id order, so
/// the first ear found is deterministic.
fn grow_ear(
    g: &BipGraph,
    in_union: &BTreeSet<Vertex>,
    used: &BTreeSet<EdgeId>,
    seed: EdgeId,
) -> Option<EarPath> {
    let (va, vb) = g.endpoints(seed).expect("seed edge is in range");
    let mut vertices = alloc::vec![va, vb];
    let mut edge_ids = alloc::vec![seed];
    extend(g, in_union, used, &mut vertices, &mut edge_ids)
}

fn extend(
    g: &BipGraph,
    in_union: &BTreeSet<Vertex>,
    used: &BTreeSet<EdgeId>,
    vertices: &mut Vec<Vertex>,
    edge_ids: &mut Vec<EdgeId>,
) -> Option<EarPath> {
    let front = *vertices.first().expect("path is nonempty");
    let back = *vertices.last().expect("path is nonempty");
    if in_union.contains(&front) && in_union.contains(&back) {
        let mut union: BTreeSet<Vertex> = in_union.clone();
        union.extend(vertices.iter().copied());
        if conformal(g, &union) {
            return Some(EarPath { vertices: vertices.clone(), edge_ids: edge_ids.clone() });
        }
        return None;
    }
    let (at, at_front) = if in_union.contains(&front) { (back, false) } else { (front, true) };
    for (w, id) in g.neighbors(at) {
        if used.contains(&id) || edge_ids.contains(&id) || vertices.contains(&w) {
            continue;
        }
        if at_front {
            vertices.insert(0, w);
            edge_ids.insert(0, id);
        } else {
            vertices.push(w);
            edge_ids.push(id);
        }
        if let Some(found) = extend(g, in_union, used, vertices, edge_ids) {
            return Some(found);
        }
        if at_front {
            vertices.remove(0);
            edge_ids.remove(0);
        } else {
            vertices.pop();
            edge_ids.pop();
        }
    }
    None
}
