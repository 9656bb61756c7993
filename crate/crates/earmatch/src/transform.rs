//! Local transformations: bicontraction of a degree-two vertex and its
//! inverse bisplit, the partial retract reached by exhausting restricted
//! bicontractions, decomposition along a balanced two-edge cut, and the
//! inverse splice that glues two graphs at a pair of middle edges.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{BipGraph, EdgeCut, EdgeId, GraphError, IndexMaps, Side, Vertex};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TransformError {
    /// The vertex does not have degree exactly two.
    NotDegreeTwo(Vertex),
    /// The two edges at the vertex lead to the same neighbor.
    ParallelNeighbors(Vertex),
    /// A restricted operation was asked to break its degree restriction.
    RestrictionViolated(&'static str),
    /// The two edge sets do not partition the edges at the split vertex.
    BadPartition,
    /// No edge completes the requested cut.
    NotFound,
    /// The given cut is not a nontrivial balanced cut of two edges.
    NotBalanced2Cut(&'static str),
    /// The edge is not a middle edge: both of its endpoints must have degree
    /// exactly two, each with a second neighbor distinct from the edge's
    /// other end.
    NotTwoEdge(EdgeId),
    /// A referenced vertex or edge is not in the graph.
    NotPresent,
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformError::NotDegreeTwo(v) => write!(f, "vertex {v} does not have degree two"),
            TransformError::ParallelNeighbors(v) => {
                write!(f, "the two edges at {v} are parallel")
            }
            TransformError::RestrictionViolated(what) => {
                write!(f, "restriction violated: {what}")
            }
            TransformError::BadPartition => {
                write!(f, "the edge sets do not partition the edges at the vertex")
            }
            TransformError::NotFound => write!(f, "no edge completes the requested cut"),
            TransformError::NotBalanced2Cut(what) => {
                write!(f, "not a nontrivial balanced two-edge cut: {what}")
            }
            TransformError::NotTwoEdge(id) => {
                write!(f, "edge {id} is not a middle edge of two degree-two endpoints")
            }
            TransformError::NotPresent => write!(f, "vertex or edge is not in the graph"),
        }
    }
}

impl core::error::Error for TransformError {}

impl From<GraphError> for TransformError {
    fn from(_: GraphError) -> TransformError {
        TransformError::NotPresent
    }
}

/// Contracts the two edges at a degree-two vertex `v`, deleting `v` and
/// merging its two neighbors into the slot of the smaller-indexed one.
///
/// Surviving edges keep their relative order and parallel edges created by
/// the merge are kept. In the returned maps both old neighbors point at the
/// merged slot, so the vertex maps are not injective. With `restricted` set
/// the contraction additionally requires both neighbors to have degree at
/// least three.
pub fn bicontract(
    g: &BipGraph,
    v: Vertex,
    restricted: bool,
) -> Result<(BipGraph, IndexMaps), TransformError> {
    if !g.contains_vertex(v) {
        return Err(TransformError::NotPresent);
    }
    let inc = g.incident_edges(v);
    if inc.len() != 2 {
        return Err(TransformError::NotDegreeTwo(v));
    }
    let n1 = g.other_end(inc[0], v)?;
    let n2 = g.other_end(inc[1], v)?;
    if n1 == n2 {
        return Err(TransformError::ParallelNeighbors(v));
    }
    if restricted && (g.degree(n1) < 3 || g.degree(n2) < 3) {
        return Err(TransformError::RestrictionViolated(
            "both neighbors of the contracted vertex must have degree at least three",
        ));
    }
    let lo = n1.index.min(n2.index);
    let hi = n1.index.max(n2.index);
    let shifted = |count: usize, gone: usize| -> Vec<Option<usize>> {
        (0..count).map(|i| if i == gone { None } else { Some(i - usize::from(i > gone)) }).collect()
    };
    let (mut a_map, mut b_map) = match v.side {
        Side::A => (shifted(g.a_count(), v.index), shifted(g.b_count(), hi)),
        Side::B => (shifted(g.a_count(), hi), shifted(g.b_count(), v.index)),
    };
    match v.side {
        Side::A => b_map[hi] = b_map[lo],
        Side::B => a_map[hi] = a_map[lo],
    }
    let mut edge_map = alloc::vec![None; g.m()];
    let mut edges = Vec::with_capacity(g.m() - 2);
    for (id, &(a, b)) in g.edges().iter().enumerate() {
        if id == inc[0] || id == inc[1] {
            continue;
        }
        edge_map[id] = Some(edges.len());
        edges.push((a_map[a].expect("survivor is mapped"), b_map[b].expect("survivor is mapped")));
    }
    let graph = BipGraph::build(g.a_count() - 1, g.b_count() - 1, edges)
        .expect("contracted edges stay in range");
    Ok((graph, IndexMaps { a_map, b_map, edge_map }))
}

/// Splits vertex `v` in two, undoing a bicontraction. The edges in `f1` stay
/// at `v`; those in `f2` move to a new vertex on the same side. The two new
/// vertices are joined by a path of two new edges through a new degree-two
/// vertex on the opposite side.
///
/// All old vertices and edge ids keep their indices; the split-off copy of
/// `v` and the middle vertex are appended at the end of their sides, and the
/// two path edges become the last two edge ids, the one at `v` first.
/// Contracting the new middle vertex restores `g` exactly. With `restricted`
/// set, `v` must have degree at least four and both parts at least two edges.
pub fn bisplit(
    g: &BipGraph,
    v: Vertex,
    f1: &BTreeSet<EdgeId>,
    f2: &BTreeSet<EdgeId>,
    restricted: bool,
) -> Result<BipGraph, TransformError> {
    if !g.contains_vertex(v) {
        return Err(TransformError::NotPresent);
    }
    let inc: BTreeSet<EdgeId> = g.incident_edges(v).into_iter().collect();
    if !f1.is_disjoint(f2) || (f1 | f2) != inc {
        return Err(TransformError::BadPartition);
    }
    if restricted && (inc.len() < 4 || f1.len() < 2 || f2.len() < 2) {
        return Err(TransformError::RestrictionViolated(
            "a restricted split needs degree at least four and at least two edges in each part",
        ));
    }
    let split_index = match v.side {
        Side::A => g.a_count(),
        Side::B => g.b_count(),
    };
    let mid_index = match v.side {
        Side::A => g.b_count(),
        Side::B => g.a_count(),
    };
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(g.m() + 2);
    for (id, &(a, b)) in g.edges().iter().enumerate() {
        if f2.contains(&id) {
            match v.side {
                Side::A => edges.push((split_index, b)),
                Side::B => edges.push((a, split_index)),
            }
        } else {
            edges.push((a, b));
        }
    }
    match v.side {
        Side::A => {
            edges.push((v.index, mid_index));
            edges.push((split_index, mid_index));
        }
        Side::B => {
            edges.push((mid_index, v.index));
            edges.push((mid_index, split_index));
        }
    }
    Ok(BipGraph::build(g.a_count() + 1, g.b_count() + 1, edges)
        .expect("split edges stay in range"))
}

/// What a sequence of restricted bicontractions did: the contracted vertices
/// in the coordinates current at each step, the composed old-to-final
/// translation maps, and how many parallel edge pairs the merges created.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RetractTrace {
    pub steps: Vec<Vertex>,
    pub maps: IndexMaps,
    pub parallel_edges_created: usize,
}

/// Applies restricted bicontractions until none applies, always contracting
/// the first eligible vertex in side-A-then-side-B ascending order. The
/// result is the partial retract of `g`; graphs whose every degree-two
/// vertex has a degree-two or repeated neighbor come back unchanged.
pub fn partial_retract(g: &BipGraph) -> (BipGraph, RetractTrace) {
    let mut cur = g.clone();
    let mut maps = IndexMaps {
        a_map: (0..g.a_count()).map(Some).collect(),
        b_map: (0..g.b_count()).map(Some).collect(),
        edge_map: (0..g.m()).map(Some).collect(),
    };
    let mut steps = Vec::new();
    let start_parallels = parallel_pair_count(&cur);
    loop {
        let next = cur.vertices().find(|&v| {
            g_contractible(&cur, v)
        });
        let Some(v) = next else { break };
        let (contracted, step) = bicontract(&cur, v, true).expect("the scan checked eligibility");
        steps.push(v);
        maps = compose_maps(&maps, &step);
        cur = contracted;
    }
    let created = parallel_pair_count(&cur) - start_parallels;
    (cur, RetractTrace { steps, maps, parallel_edges_created: created })
}

fn g_contractible(g: &BipGraph, v: Vertex) -> bool {
    if g.degree(v) != 2 {
        return false;
    }
    let inc = g.incident_edges(v);
    let n1 = g.other_end(inc[0], v).expect("incident edge has an other end");
    let n2 = g.other_end(inc[1], v).expect("incident edge has an other end");
    n1 != n2 && g.degree(n1) >= 3 && g.degree(n2) >= 3
}

fn parallel_pair_count(g: &BipGraph) -> usize {
    let distinct: BTreeSet<(usize, usize)> = g.edges().iter().copied().collect();
    g.m() - distinct.len()
}

fn compose_maps(first: &IndexMaps, then: &IndexMaps) -> IndexMaps {
    let chain = |outer: &[Option<usize>], slot: Option<usize>| slot.and_then(|mid| outer[mid]);
    IndexMaps {
        a_map: first.a_map.iter().map(|&s| chain(&then.a_map, s)).collect(),
        b_map: first.b_map.iter().map(|&s| chain(&then.b_map, s)).collect(),
        edge_map: first.edge_map.iter().map(|&s| chain(&then.edge_map, s)).collect(),
    }
}

/// Looks for an edge `f` so that `{e, f}` is a balanced two-edge cut,
/// scanning `f` in ascending id order and returning the first hit. The
/// returned cut's shore is the side containing the A-endpoint of `e`.
pub fn find_balanced_2cut_with(g: &BipGraph, e: EdgeId) -> Result<EdgeCut, TransformError> {
    if e >= g.m() {
        return Err(TransformError::NotPresent);
    }
    let (start, _) = g.endpoints(e)?;
    for f in 0..g.m() {
        if f == e {
            continue;
        }
        let shore = reachable_avoiding(g, start, e, f);
        if shore.len() == g.n() {
            continue;
        }
        let cut = g.boundary(&shore);
        if cut.edge_ids.len() == 2
            && cut.edge_ids.contains(&e)
            && cut.edge_ids.contains(&f)
            && cut.is_balanced()
        {
            return Ok(cut);
        }
    }
    Err(TransformError::NotFound)
}

fn reachable_avoiding(g: &BipGraph, start: Vertex, e: EdgeId, f: EdgeId) -> BTreeSet<Vertex> {
    let mut seen = BTreeSet::new();
    let mut stack = alloc::vec![start];
    seen.insert(start);
    while let Some(v) = stack.pop() {
        for (w, id) in g.neighbors(v) {
            if id != e && id != f && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}

/// One side of a balanced two-edge cut, completed to a standalone graph by a
/// three-edge path replacing the cut. `maps` translates the original graph's
/// vertices and edges into the part; `new_a` and `new_b` are the two added
/// path vertices and `bridge_edge` the middle path edge, a two-edge of the
/// part. `ear_edge_ids` lists the three path edges in order, the bridge in
/// the middle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CutPart {
    pub graph: BipGraph,
    pub maps: IndexMaps,
    pub new_a: Vertex,
    pub new_b: Vertex,
    pub bridge_edge: EdgeId,
    pub ear_edge_ids: [EdgeId; 3],
}

/// Splits `g` along a nontrivial balanced two-edge cut into two standalone
/// parts, the first for the cut's shore. Splicing the parts back together at
/// their bridge edges rebuilds `g` up to isomorphism.
pub fn two_cut_decompose(
    g: &BipGraph,
    cut: &EdgeCut,
) -> Result<(CutPart, CutPart), TransformError> {
    if cut.edge_ids.len() != 2 {
        return Err(TransformError::NotBalanced2Cut("the cut must have exactly two edges"));
    }
    for &v in &cut.shore {
        if !g.contains_vertex(v) {
            return Err(TransformError::NotPresent);
        }
    }
    let check = g.boundary(&cut.shore);
    if check.edge_ids != cut.edge_ids {
        return Err(TransformError::NotBalanced2Cut("the edges do not match the shore's boundary"));
    }
    if !check.is_balanced() {
        return Err(TransformError::NotBalanced2Cut("the cut is not balanced"));
    }
    if check.is_trivial() {
        return Err(TransformError::NotBalanced2Cut("the cut is trivial"));
    }
    let first = cut_part(g, &cut.shore, &cut.edge_ids)?;
    let co_shore: BTreeSet<Vertex> = g.vertices().filter(|v| !cut.shore.contains(v)).collect();
    let second = cut_part(g, &co_shore, &cut.edge_ids)?;
    Ok((first, second))
}

fn cut_part(
    g: &BipGraph,
    shore: &BTreeSet<Vertex>,
    cut_edges: &BTreeSet<EdgeId>,
) -> Result<CutPart, TransformError> {
    let mut a_attach = None;
    let mut b_attach = None;
    for &id in cut_edges {
        let (av, bv) = g.endpoints(id)?;
        if shore.contains(&av) {
            a_attach = Some(av);
        }
        if shore.contains(&bv) {
            b_attach = Some(bv);
        }
    }
    let (a_attach, b_attach) = match (a_attach, b_attach) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(TransformError::NotBalanced2Cut(
                "each side must meet one cut edge at an A-vertex and one at a B-vertex",
            ))
        }
    };
    let outside: BTreeSet<Vertex> = g.vertices().filter(|v| !shore.contains(v)).collect();
    let (sub, maps) = g.remove(&outside, &BTreeSet::new())?;
    let a1 = maps.vertex(a_attach).expect("shore vertex survives");
    let b1 = maps.vertex(b_attach).expect("shore vertex survives");
    let new_b = Vertex::b(sub.b_count());
    let new_a = Vertex::a(sub.a_count());
    let m0 = sub.m();
    let mut edges = sub.edges().to_vec();
    edges.push((a1.index, new_b.index));
    edges.push((new_a.index, new_b.index));
    edges.push((new_a.index, b1.index));
    let graph = BipGraph::build(sub.a_count() + 1, sub.b_count() + 1, edges)
        .expect("part edges stay in range");
    Ok(CutPart {
        graph,
        maps,
        new_a,
        new_b,
        bridge_edge: m0 + 1,
        ear_edge_ids: [m0, m0 + 1, m0 + 2],
    })
}

/// The two graphs and corner vertices of a splice. For each side, `e` must be
/// a middle edge `u-v` with both endpoints of degree two; `a` is the second
/// neighbor of `v` and `b` the second neighbor of `u`.
#[derive(Clone, Debug)]
pub struct SpliceSpec<'g> {
    pub g1: &'g BipGraph,
    pub e1: EdgeId,
    pub u1: Vertex,
    pub v1: Vertex,
    pub a1: Vertex,
    pub b1: Vertex,
    pub g2: &'g BipGraph,
    pub e2: EdgeId,
    pub u2: Vertex,
    pub v2: Vertex,
    pub a2: Vertex,
    pub b2: Vertex,
}

impl<'g> SpliceSpec<'g> {
    pub fn new(
        g1: &'g BipGraph,
        e1: EdgeId,
        g2: &'g BipGraph,
        e2: EdgeId,
    ) -> Result<SpliceSpec<'g>, TransformError> {
        let (u1, v1, a1, b1) = splice_corners(g1, e1)?;
        let (u2, v2, a2, b2) = splice_corners(g2, e2)?;
        Ok(SpliceSpec { g1, e1, u1, v1, a1, b1, g2, e2, u2, v2, a2, b2 })
    }
}

fn splice_corners(
    g: &BipGraph,
    e: EdgeId,
) -> Result<(Vertex, Vertex, Vertex, Vertex), TransformError> {
    let (u, v) = g.endpoints(e)?;
    if g.degree(u) != 2 || g.degree(v) != 2 {
        return Err(TransformError::NotTwoEdge(e));
    }
    let b = g
        .neighbors(u)
        .into_iter()
        .find(|&(_, id)| id != e)
        .expect("a degree-two vertex has a second edge")
        .0;
    let a = g
        .neighbors(v)
        .into_iter()
        .find(|&(_, id)| id != e)
        .expect("a degree-two vertex has a second edge")
        .0;
    if a == u || b == v {
        return Err(TransformError::NotTwoEdge(e));
    }
    Ok((u, v, a, b))
}

/// The spliced graph together with translation maps from each input's
/// coordinates; `new_edge_ids` are the two crossing edges `(a1, b2)` and
/// `(a2, b1)`, in that order, as the last two edge ids.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpliceOutcome {
    pub graph: BipGraph,
    pub maps1: IndexMaps,
    pub maps2: IndexMaps,
    pub new_edge_ids: [EdgeId; 2],
}

/// Glues two graphs by deleting the endpoints of a middle edge on each side
/// and joining the four exposed corners crosswise. The two crossing edges
/// form a balanced two-edge cut of the result, and decomposing along it
/// recovers the two inputs up to isomorphism.
pub fn two_edge_splice(spec: &SpliceSpec<'_>) -> SpliceOutcome {
    let gone1: BTreeSet<Vertex> = [spec.u1, spec.v1].into_iter().collect();
    let gone2: BTreeSet<Vertex> = [spec.u2, spec.v2].into_iter().collect();
    let (h1, maps1) = spec.g1.remove(&gone1, &BTreeSet::new()).expect("splice corners exist");
    let (h2, raw2) = spec.g2.remove(&gone2, &BTreeSet::new()).expect("splice corners exist");
    let a_off = h1.a_count();
    let b_off = h1.b_count();
    let e_off = h1.m();
    let maps2 = IndexMaps {
        a_map: raw2.a_map.iter().map(|s| s.map(|i| i + a_off)).collect(),
        b_map: raw2.b_map.iter().map(|s| s.map(|i| i + b_off)).collect(),
        edge_map: raw2.edge_map.iter().map(|s| s.map(|i| i + e_off)).collect(),
    };
    let mut edges = h1.edges().to_vec();
    for &(a, b) in h2.edges() {
        edges.push((a + a_off, b + b_off));
    }
    let a1 = maps1.vertex(spec.a1).expect("corner survives the deletion");
    let b1 = maps1.vertex(spec.b1).expect("corner survives the deletion");
    let a2 = maps2.vertex(spec.a2).expect("corner survives the deletion");
    let b2 = maps2.vertex(spec.b2).expect("corner survives the deletion");
    let first = edges.len();
    edges.push((a1.index, b2.index));
    edges.push((a2.index, b1.index));
    let graph = BipGraph::build(h1.a_count() + h2.a_count(), h1.b_count() + h2.b_count(), edges)
        .expect("spliced edges stay in range");
    SpliceOutcome { graph, maps1, maps2, new_edge_ids: [first, first + 1] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::are_isomorphic;
    use crate::graph::{complete_bipartite, cycle4, even_cycle, theta_graph};

    #[test]
    fn bicontraction_collapses_a_hexagon_to_a_square() {
        let (g, maps) = bicontract(&even_cycle(3), Vertex::b(0), false).unwrap();
        assert_eq!(g, cycle4());
        assert_eq!(maps.a_map, alloc::vec![Some(0), Some(0), Some(1)]);
        assert_eq!(maps.b_map, alloc::vec![None, Some(0), Some(1)]);
        assert_eq!(
            maps.edge_map,
            alloc::vec![None, None, Some(0), Some(1), Some(2), Some(3)]
        );
    }

    #[test]
    fn restricted_bicontraction_needs_thick_neighbors() {
        let theta = theta_graph();
        let err = bicontract(&theta, Vertex::b(1), true).unwrap_err();
        assert!(matches!(err, TransformError::RestrictionViolated(_)));
        let (g, _) = bicontract(&theta, Vertex::b(1), false).unwrap();
        assert_eq!((g.n(), g.m()), (6, 7));
        assert_eq!(
            g.edges(),
            &[(0, 1), (0, 2), (0, 0), (1, 0), (2, 0), (1, 1), (2, 2)]
        );
    }

    #[test]
    fn bicontraction_rejects_parallel_neighbors_and_high_degree() {
        let doubled = BipGraph::build(2, 2, [(0, 0), (0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
        let err = bicontract(&doubled, Vertex::a(0), false).unwrap_err();
        assert_eq!(err, TransformError::NotDegreeTwo(Vertex::a(0)));
        let pair = BipGraph::build(1, 1, [(0, 0), (0, 0)]).unwrap();
        let err = bicontract(&pair, Vertex::a(0), false).unwrap_err();
        assert_eq!(err, TransformError::ParallelNeighbors(Vertex::a(0)));
    }

    #[test]
    fn bisplit_then_contracting_the_middle_restores_the_graph() {
        let g = complete_bipartite(4, 4);
        let f1: BTreeSet<EdgeId> = [0, 1].into_iter().collect();
        let f2: BTreeSet<EdgeId> = [2, 3].into_iter().collect();
        let h = bisplit(&g, Vertex::a(0), &f1, &f2, true).unwrap();
        assert_eq!((h.n(), h.m()), (10, 18));
        assert_eq!(h.degree(Vertex::b(4)), 2);
        let (back, maps) = bicontract(&h, Vertex::b(4), false).unwrap();
        assert_eq!(back, g);
        assert_eq!(maps.a_map[4], Some(0));
    }

    #[test]
    fn bisplit_validates_its_partition() {
        let g = complete_bipartite(4, 4);
        let f1: BTreeSet<EdgeId> = [0, 1].into_iter().collect();
        let short: BTreeSet<EdgeId> = [2].into_iter().collect();
        assert_eq!(
            bisplit(&g, Vertex::a(0), &f1, &short, false).unwrap_err(),
            TransformError::BadPartition
        );
        let f2: BTreeSet<EdgeId> = [2, 3].into_iter().collect();
        let overlap: BTreeSet<EdgeId> = [1, 2, 3].into_iter().collect();
        assert_eq!(
            bisplit(&g, Vertex::a(0), &f1, &overlap, false).unwrap_err(),
            TransformError::BadPartition
        );
        let lone: BTreeSet<EdgeId> = [3].into_iter().collect();
        let rest: BTreeSet<EdgeId> = [0, 1, 2].into_iter().collect();
        assert!(matches!(
            bisplit(&g, Vertex::a(0), &rest, &lone, true).unwrap_err(),
            TransformError::RestrictionViolated(_)
        ));
        assert_eq!(bisplit(&g, Vertex::a(0), &rest, &lone, false).unwrap().n(), 10);
        assert_eq!(bisplit(&g, Vertex::a(0), &f1, &f2, false).unwrap().m(), 18);
    }

    #[test]
    fn retract_undoes_a_restricted_bisplit() {
        let g = complete_bipartite(4, 4);
        let f1: BTreeSet<EdgeId> = [0, 1].into_iter().collect();
        let f2: BTreeSet<EdgeId> = [2, 3].into_iter().collect();
        let h = bisplit(&g, Vertex::a(0), &f1, &f2, true).unwrap();
        let (r, trace) = partial_retract(&h);
        assert_eq!(r, g);
        assert_eq!(trace.steps, alloc::vec![Vertex::b(4)]);
        assert_eq!(trace.maps.vertex(Vertex::a(4)), Some(Vertex::a(0)));
        assert_eq!(trace.maps.vertex(Vertex::b(4)), None);
        assert_eq!(trace.parallel_edges_created, 0);
    }

    #[test]
    fn retract_fixes_cycles_and_the_theta_graph() {
        for g in [theta_graph(), cycle4(), even_cycle(3), even_cycle(5)] {
            let (r, trace) = partial_retract(&g);
            assert_eq!(r, g);
            assert!(trace.steps.is_empty());
        }
    }

    #[test]
    fn retract_counts_created_parallel_edges() {
        let g = BipGraph::build(2, 4, [(0, 0), (1, 0), (0, 1), (1, 1), (0, 2), (1, 3)]).unwrap();
        let (r, trace) = partial_retract(&g);
        assert_eq!(trace.steps, alloc::vec![Vertex::b(0)]);
        assert_eq!(trace.parallel_edges_created, 1);
        assert!(r.has_parallel_edges());
        assert_eq!((r.n(), r.m()), (4, 4));
    }

    #[test]
    fn theta_has_a_balanced_cut_pairing_opposite_path_ends() {
        let theta = theta_graph();
        let cut = find_balanced_2cut_with(&theta, 0).unwrap();
        assert_eq!(cut.edge_ids, [0, 3].into_iter().collect());
        assert!(cut.is_balanced());
        assert!(!cut.is_trivial());
        assert_eq!(cut.shore.len(), 6);
        let (first, second) = two_cut_decompose(&theta, &cut).unwrap();
        assert!(are_isomorphic(&first.graph, &theta_graph()));
        assert!(are_isomorphic(&second.graph, &cycle4()));
        assert_eq!(first.graph.degree(first.new_a), 2);
        assert_eq!(first.graph.degree(first.new_b), 2);
        let (bu, bv) = first.graph.edge(first.bridge_edge).unwrap();
        assert_eq!((Vertex::a(bu), Vertex::b(bv)), (first.new_a, first.new_b));
    }

    #[test]
    fn triple_connectivity_defeats_the_cut_search() {
        assert_eq!(
            find_balanced_2cut_with(&complete_bipartite(3, 3), 0).unwrap_err(),
            TransformError::NotFound
        );
        assert_eq!(
            find_balanced_2cut_with(&complete_bipartite(3, 3), 99).unwrap_err(),
            TransformError::NotPresent
        );
    }

    #[test]
    fn decomposing_a_square_doubles_it() {
        let g = cycle4();
        let shore: BTreeSet<Vertex> = [Vertex::a(0), Vertex::b(0)].into_iter().collect();
        let cut = g.boundary(&shore);
        assert_eq!(cut.edge_ids, [1, 3].into_iter().collect());
        let (first, second) = two_cut_decompose(&g, &cut).unwrap();
        assert_eq!(first.graph.edges(), &[(0, 0), (0, 1), (1, 1), (1, 0)]);
        assert!(are_isomorphic(&first.graph, &cycle4()));
        assert!(are_isomorphic(&second.graph, &cycle4()));
    }

    #[test]
    fn decompose_rejects_malformed_cuts() {
        let theta = theta_graph();
        let lopsided: BTreeSet<Vertex> = [Vertex::b(1)].into_iter().collect();
        let cut = theta.boundary(&lopsided);
        assert!(matches!(
            two_cut_decompose(&theta, &cut).unwrap_err(),
            TransformError::NotBalanced2Cut(_)
        ));
        let big: BTreeSet<Vertex> = [Vertex::a(0)].into_iter().collect();
        let cut = theta.boundary(&big);
        assert!(matches!(
            two_cut_decompose(&theta, &cut).unwrap_err(),
            TransformError::NotBalanced2Cut(_)
        ));
    }

    #[test]
    fn splicing_a_square_onto_a_theta_middle_edge_gives_a_theta() {
        let square = cycle4();
        let theta = theta_graph();
        let spec = SpliceSpec::new(&square, 0, &theta, 6).unwrap();
        assert_eq!((spec.u1, spec.v1), (Vertex::a(0), Vertex::b(0)));
        assert_eq!((spec.a1, spec.b1), (Vertex::a(1), Vertex::b(1)));
        assert_eq!((spec.a2, spec.b2), (Vertex::a(0), Vertex::b(0)));
        let out = two_edge_splice(&spec);
        assert_eq!((out.graph.n(), out.graph.m()), (8, 9));
        assert!(are_isomorphic(&out.graph, &theta_graph()));
        assert_eq!(out.new_edge_ids, [7, 8]);
        assert_eq!(out.maps1.vertex(Vertex::a(0)), None);
        assert_eq!(out.maps2.vertex(Vertex::a(0)), Some(Vertex::a(1)));
    }

    #[test]
    fn splicing_two_thetas_decomposes_back_into_thetas() {
        let theta = theta_graph();
        let spec = SpliceSpec::new(&theta, 6, &theta, 6).unwrap();
        let out = two_edge_splice(&spec);
        assert_eq!((out.graph.n(), out.graph.m()), (12, 14));
        let cut = find_balanced_2cut_with(&out.graph, out.new_edge_ids[0]).unwrap();
        assert_eq!(cut.edge_ids, out.new_edge_ids.into_iter().collect());
        let (first, second) = two_cut_decompose(&out.graph, &cut).unwrap();
        assert!(are_isomorphic(&first.graph, &theta));
        assert!(are_isomorphic(&second.graph, &theta));
    }

    #[test]
    fn splice_spec_rejects_edges_with_thick_or_repeated_ends() {
        let theta = theta_graph();
        let thick = SpliceSpec::new(&theta, 0, &theta, 6).map(|_| ()).unwrap_err();
        assert_eq!(thick, TransformError::NotTwoEdge(0));
        let doubled = BipGraph::build(2, 2, [(0, 0), (0, 0), (1, 1)]).unwrap();
        let repeated = SpliceSpec::new(&doubled, 0, &theta, 6).map(|_| ()).unwrap_err();
        assert_eq!(repeated, TransformError::NotTwoEdge(0));
    }
}
