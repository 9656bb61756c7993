//! Builders for the graph families the rest of the crate studies: tree
//! joins over identified leaves, their star and double-star specialisations,
//! edge replacement by a star join, and a small free-tree census.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::graph::{BipGraph, EdgeId, GraphError, IndexMaps, Tree, Vertex};
use crate::recognize::tree_center;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstructError {
    /// The tree has a single vertex, so there is nothing to join.
    TrivialTree,
    /// A numeric parameter is out of range for the requested family.
    BadParams(&'static str),
    /// An endpoint of the replaced edge does not have the degree the
    /// replacement needs.
    DegreeMismatch {
        vertex: Vertex,
        expected: usize,
        found: usize,
    },
    /// The named edge is not in the graph.
    NotPresent,
}

impl fmt::Display for ConstructError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructError::TrivialTree => write!(f, "a single-vertex tree cannot be joined"),
            ConstructError::BadParams(msg) => write!(f, "{msg}"),
            ConstructError::DegreeMismatch {
                vertex,
                expected,
                found,
            } => write!(
                f,
                "vertex {vertex} has degree {found} but the replacement needs {expected}"
            ),
            ConstructError::NotPresent => write!(f, "no such edge"),
        }
    }
}

impl core::error::Error for ConstructError {}

impl From<GraphError> for ConstructError {
    fn from(_: GraphError) -> Self {
        ConstructError::NotPresent
    }
}

/// A graph assembled from `2k` colored copies of a tree, together with the
/// placement of each copy inside it.
///
/// The first `k` copies keep the tree's 2-coloring, the other `k` flip it,
/// all copies of either orientation share their leaf vertices, and each
/// shared leaf of the first half is joined to its counterpart in the second.
#[derive(Debug, Clone)]
pub struct IsojoinParts {
    pub graph: BipGraph,
    pub tree: Tree,
    pub k: usize,
    /// `copy_maps[j][v]` hosts tree vertex `v` in copy `j` of the first
    /// half. Leaf entries agree across all `j`.
    pub copy_maps: Vec<Vec<Vertex>>,
    /// The same for the color-flipped half.
    pub copy_maps2: Vec<Vec<Vertex>>,
    /// The edges joining the two halves, one per tree leaf in ascending
    /// leaf order. They are the last edges of the graph.
    pub pairing_edges: Vec<EdgeId>,
}

/// Joins `2k` copies of `t` over shared leaves as described on
/// [`IsojoinParts`].
///
/// The result has `2(l + k(n - l))` vertices and `2k(n - 1) + l` edges,
/// where `n` counts the tree's vertices and `l` its leaves. With `k = 1`
/// this is [`leaf_matching`]. Joining the two-vertex tree with `k >= 2`
/// yields parallel edges, since both of its vertices are shared leaves.
pub fn k_leaf_matching(t: &Tree, k: usize) -> Result<IsojoinParts, ConstructError> {
    if k == 0 {
        return Err(ConstructError::BadParams(
            "the copy count must be at least one",
        ));
    }
    if t.n() < 2 {
        return Err(ConstructError::TrivialTree);
    }
    let n_t = t.n();
    let color = t.coloring();
    let leaves = t.leaves();
    let mut is_leaf = vec![false; n_t];
    for &l in &leaves {
        is_leaf[l] = true;
    }

    let placeholder = Vertex::a(usize::MAX);
    let mut maps = [
        vec![vec![placeholder; n_t]; k],
        vec![vec![placeholder; n_t]; k],
    ];
    let mut a_next = 0;
    let mut b_next = 0;
    for (half, half_maps) in maps.iter_mut().enumerate() {
        for &l in &leaves {
            let on_a_side = (color[l] == 0) != (half == 1);
            let host = if on_a_side {
                a_next += 1;
                Vertex::a(a_next - 1)
            } else {
                b_next += 1;
                Vertex::b(b_next - 1)
            };
            for copy in half_maps.iter_mut() {
                copy[l] = host;
            }
        }
        for v in 0..n_t {
            if is_leaf[v] {
                continue;
            }
            let on_a_side = (color[v] == 0) != (half == 1);
            for copy in half_maps.iter_mut() {
                copy[v] = if on_a_side {
                    a_next += 1;
                    Vertex::a(a_next - 1)
                } else {
                    b_next += 1;
                    Vertex::b(b_next - 1)
                };
            }
        }
    }

    let mut edges = Vec::new();
    for half_maps in &maps {
        for copy in half_maps {
            for &(x, y) in t.edges() {
                let (hx, hy) = (copy[x], copy[y]);
                let (a, b) = if hx.side == crate::graph::Side::A { (hx, hy) } else { (hy, hx) };
                edges.push((a.index, b.index));
            }
        }
    }
    let mut pairing_edges = Vec::with_capacity(leaves.len());
    for &l in &leaves {
        pairing_edges.push(edges.len());
        let (h1, h2) = (maps[0][0][l], maps[1][0][l]);
        let (a, b) = if h1.side == crate::graph::Side::A { (h1, h2) } else { (h2, h1) };
        edges.push((a.index, b.index));
    }

    let graph = BipGraph::build(a_next, b_next, edges).expect("join edges are in range");
    let [copy_maps, copy_maps2] = maps;
    Ok(IsojoinParts {
        graph,
        tree: t.clone(),
        k,
        copy_maps,
        copy_maps2,
        pairing_edges,
    })
}

/// Joins two colored copies of `t` over shared leaves: [`k_leaf_matching`]
/// with one copy per orientation.
pub fn leaf_matching(t: &Tree) -> Result<IsojoinParts, ConstructError> {
    k_leaf_matching(t, 1)
}

/// A star joined over its leaves, with the center copies singled out.
#[derive(Debug, Clone)]
pub struct StarJoin {
    pub graph: BipGraph,
    pub p: usize,
    pub r: usize,
    /// The `p` center copies on the first side.
    pub centers_a: Vec<Vertex>,
    /// The `p` center copies on the other side.
    pub centers_b: Vec<Vertex>,
    pub pairing_edges: Vec<EdgeId>,
}

/// The star with `r` leaves joined over them with multiplicity `p`, for
/// `0 <= p <= r`. With `p = 0` the result degenerates to `r` disjoint
/// edges and there are no center copies.
pub fn star_join(p: usize, r: usize) -> Result<StarJoin, ConstructError> {
    if r == 0 {
        return Err(ConstructError::BadParams(
            "the star needs at least one leaf",
        ));
    }
    if p > r {
        return Err(ConstructError::BadParams(
            "the center multiplicity cannot exceed the leaf count",
        ));
    }
    if p == 0 {
        let graph = BipGraph::build(r, r, (0..r).map(|i| (i, i)))
            .expect("matching edges are in range");
        return Ok(StarJoin {
            graph,
            p,
            r,
            centers_a: Vec::new(),
            centers_b: Vec::new(),
            pairing_edges: (0..r).collect(),
        });
    }
    let star =
        Tree::new(r + 1, (1..=r).map(|i| (0, i))).expect("a star is a tree");
    let parts = k_leaf_matching(&star, p)?;
    let centers_a = parts.copy_maps.iter().map(|copy| copy[0]).collect();
    let centers_b = parts.copy_maps2.iter().map(|copy| copy[0]).collect();
    Ok(StarJoin {
        graph: parts.graph,
        p,
        r,
        centers_a,
        centers_b,
        pairing_edges: parts.pairing_edges,
    })
}

/// The tree on `p + q` vertices whose two adjacent centers have degrees
/// `p` and `q`. Vertex 0 carries `p - 1` leaves, vertex 1 the rest.
pub fn double_star_tree(p: usize, q: usize) -> Result<Tree, ConstructError> {
    if p == 0 || q == 0 {
        return Err(ConstructError::BadParams(
            "both center degrees must be at least one",
        ));
    }
    let mut edges = vec![(0, 1)];
    for i in 0..p - 1 {
        edges.push((0, 2 + i));
    }
    for i in 0..q - 1 {
        edges.push((1, 1 + p + i));
    }
    Ok(Tree::new(p + q, edges).expect("a double star is a tree"))
}

/// A double star joined over its leaves, built directly from four matched
/// vertex groups arranged in a cycle.
#[derive(Debug, Clone)]
pub struct DoubleStarJoin {
    pub graph: BipGraph,
    /// Group sizes `p - 1`, `k`, `q - 1`, `k` on the first side.
    pub a_groups: [Vec<Vertex>; 4],
    /// The matched partner groups on the other side.
    pub b_groups: [Vec<Vertex>; 4],
}

/// The double star with center degrees `p, q >= 2` joined over its leaves
/// with multiplicity `k`.
///
/// Each group pair `(a_groups[i], b_groups[i])` carries a perfect matching
/// and `b_groups[i]` is completely joined to `a_groups[(i + 1) % 4]`. The
/// result is isomorphic to `k_leaf_matching(double_star_tree(p, q), k)`.
pub fn double_star_join(p: usize, q: usize, k: usize) -> Result<DoubleStarJoin, ConstructError> {
    if p < 2 || q < 2 {
        return Err(ConstructError::BadParams(
            "both center degrees must be at least two",
        ));
    }
    if k == 0 {
        return Err(ConstructError::BadParams(
            "the copy count must be at least one",
        ));
    }
    let sizes = [p - 1, k, q - 1, k];
    let mut a_groups: [Vec<Vertex>; 4] = Default::default();
    let mut b_groups: [Vec<Vertex>; 4] = Default::default();
    let mut next = 0;
    for (i, &size) in sizes.iter().enumerate() {
        a_groups[i] = (next..next + size).map(Vertex::a).collect();
        b_groups[i] = (next..next + size).map(Vertex::b).collect();
        next += size;
    }
    let mut edges = Vec::new();
    for i in 0..4 {
        for (a, b) in a_groups[i].iter().zip(&b_groups[i]) {
            edges.push((a.index, b.index));
        }
    }
    for i in 0..4 {
        for b in &b_groups[i] {
            for a in &a_groups[(i + 1) % 4] {
                edges.push((a.index, b.index));
            }
        }
    }
    let graph = BipGraph::build(next, next, edges).expect("group edges are in range");
    Ok(DoubleStarJoin {
        graph,
        a_groups,
        b_groups,
    })
}

/// The outcome of replacing an edge by a star join.
#[derive(Debug, Clone)]
pub struct ReplacedEdge {
    pub graph: BipGraph,
    /// Index maps from the original graph into the result. The replaced
    /// edge's endpoints and its incident edges map to `None`.
    pub maps: IndexMaps,
    /// The star join's center copies, in the result's indexing.
    pub centers_a: Vec<Vertex>,
    pub centers_b: Vec<Vertex>,
    /// The `2p` edges tying the star join to the rest, first-side
    /// attachments first.
    pub attachment_edges: Vec<EdgeId>,
}

/// Removes both endpoints of `e`, inserts the star join with parameters
/// `p, r`, and reattaches the neighborhood: the `p` other edges at the
/// first-side endpoint are redirected to the `p` first-side center copies
/// in ascending edge order, and symmetrically for the other endpoint.
///
/// Both endpoints must have degree exactly `p + 1`, with `p >= 1`.
pub fn replace_edge_with_star_join(
    g: &BipGraph,
    e: EdgeId,
    p: usize,
    r: usize,
) -> Result<ReplacedEdge, ConstructError> {
    if p == 0 {
        return Err(ConstructError::BadParams(
            "the replacement needs multiplicity at least one",
        ));
    }
    let (u, v) = g.endpoints(e)?;
    for end in [u, v] {
        let found = g.degree(end);
        if found != p + 1 {
            return Err(ConstructError::DegreeMismatch {
                vertex: end,
                expected: p + 1,
                found,
            });
        }
    }
    let mut u_others = Vec::with_capacity(p);
    for (w, id) in g.neighbors(u) {
        if id != e {
            u_others.push(w);
        }
    }
    let mut v_others = Vec::with_capacity(p);
    for (w, id) in g.neighbors(v) {
        if id != e {
            v_others.push(w);
        }
    }
    if u_others.contains(&v) || v_others.contains(&u) {
        return Err(ConstructError::BadParams(
            "a parallel copy of the edge blocks the replacement",
        ));
    }

    let join = star_join(p, r)?;
    let removed = [u, v].into_iter().collect();
    let (rest, maps) = g.remove(&removed, &Default::default())?;
    let a_off = rest.a_count();
    let b_off = rest.b_count();

    let mut edges: Vec<(usize, usize)> = rest.edges().to_vec();
    for &(ja, jb) in join.graph.edges() {
        edges.push((ja + a_off, jb + b_off));
    }
    let mut attachment_edges = Vec::with_capacity(2 * p);
    let centers_a: Vec<Vertex> = join
        .centers_a
        .iter()
        .map(|c| Vertex::a(c.index + a_off))
        .collect();
    let centers_b: Vec<Vertex> = join
        .centers_b
        .iter()
        .map(|c| Vertex::b(c.index + b_off))
        .collect();
    for (center, w) in centers_a.iter().zip(&u_others) {
        let w_new = maps.vertex(*w).expect("neighbors of one endpoint survive");
        attachment_edges.push(edges.len());
        edges.push((center.index, w_new.index));
    }
    for (center, w) in centers_b.iter().zip(&v_others) {
        let w_new = maps.vertex(*w).expect("neighbors of one endpoint survive");
        attachment_edges.push(edges.len());
        edges.push((w_new.index, center.index));
    }
    let graph = BipGraph::build(a_off + join.graph.a_count(), b_off + join.graph.b_count(), edges)
        .expect("replacement edges are in range");
    Ok(ReplacedEdge {
        graph,
        maps,
        centers_a,
        centers_b,
        attachment_edges,
    })
}

fn ahu(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut parts: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| ahu(adj, w, v))
        .collect();
    parts.sort();
    let mut s = String::from("(");
    for part in parts {
        s.push_str(&part);
    }
    s.push(')');
    s
}

/// A label that two free trees share exactly when they are isomorphic:
/// the sorted center-rooted shape strings.
fn free_canonical(t: &Tree) -> String {
    let adj = t.adjacency();
    let centers = tree_center(&adj);
    if centers.len() == 1 {
        ahu(&adj, centers[0], usize::MAX)
    } else {
        let s1 = ahu(&adj, centers[0], centers[1]);
        let s2 = ahu(&adj, centers[1], centers[0]);
        if s1 <= s2 {
            format!("{s1}{s2}")
        } else {
            format!("{s2}{s1}")
        }
    }
}

/// All free trees with at most `max_n` vertices that satisfy `keep`, one
/// representative per isomorphism class, ordered by vertex count and then
/// by canonical shape.
pub fn enumerate_trees<F: Fn(&Tree) -> bool>(max_n: usize, keep: F) -> Vec<Tree> {
    use alloc::collections::BTreeMap;

    let mut out = Vec::new();
    if max_n == 0 {
        return out;
    }
    let single = Tree::new(1, []).expect("one vertex, no edges");
    if keep(&single) {
        out.push(single.clone());
    }
    let mut current = vec![single];
    for _ in 2..=max_n {
        let mut seen: BTreeMap<String, Tree> = BTreeMap::new();
        for t in &current {
            for attach in 0..t.n() {
                let mut edges = t.edges().to_vec();
                edges.push((attach, t.n()));
                let bigger = Tree::new(t.n() + 1, edges).expect("adding a leaf keeps a tree");
                seen.entry(free_canonical(&bigger)).or_insert(bigger);
            }
        }
        current = seen.into_values().collect();
        for t in &current {
            if keep(t) {
                out.push(t.clone());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::are_isomorphic;
    use crate::graph::{cycle4, even_cycle, theta_graph};
    use crate::matching::is_matching_covered;
    use crate::recognize::is_r_tree;

    fn claw() -> Tree {
        Tree::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn joining_the_claw_gives_the_theta_graph() {
        let parts = leaf_matching(&claw()).unwrap();
        assert_eq!(parts.graph.n(), 8);
        assert_eq!(parts.graph.m(), 9);
        assert!(are_isomorphic(&parts.graph, &theta_graph()));
        assert_eq!(parts.pairing_edges, vec![6, 7, 8]);
        assert_eq!(parts.copy_maps[0][0], Vertex::a(0));
        assert_eq!(parts.copy_maps2[0][0], Vertex::b(3));
        assert_eq!(parts.copy_maps[0][1], Vertex::b(0));
        assert_eq!(parts.copy_maps2[0][1], Vertex::a(1));
    }

    #[test]
    fn joining_the_two_vertex_tree_gives_the_square() {
        let edge = Tree::new(2, [(0, 1)]).unwrap();
        let parts = leaf_matching(&edge).unwrap();
        assert!(are_isomorphic(&parts.graph, &cycle4()));
    }

    #[test]
    fn join_sizes_and_degrees_follow_the_tree() {
        let star4 = Tree::new(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let parts = k_leaf_matching(&star4, 3).unwrap();
        assert_eq!(parts.graph.n(), 14);
        assert_eq!(parts.graph.m(), 28);
        for maps in [&parts.copy_maps, &parts.copy_maps2] {
            for copy in maps.iter() {
                assert_eq!(parts.graph.degree(copy[0]), 4);
            }
            for leaf in 1..5 {
                assert_eq!(parts.graph.degree(maps[0][leaf]), 4);
            }
        }
        assert!(is_matching_covered(&parts.graph));
    }

    #[test]
    fn join_rejects_degenerate_input() {
        let t = claw();
        assert_eq!(
            k_leaf_matching(&t, 0).unwrap_err(),
            ConstructError::BadParams("the copy count must be at least one")
        );
        let single = Tree::new(1, []).unwrap();
        assert_eq!(
            leaf_matching(&single).unwrap_err(),
            ConstructError::TrivialTree
        );
    }

    #[test]
    fn star_joins_cover_the_small_cases() {
        let j = star_join(1, 2).unwrap();
        assert!(are_isomorphic(&j.graph, &even_cycle(3)));
        assert_eq!(j.centers_a.len(), 1);

        let j = star_join(0, 3).unwrap();
        assert_eq!(
            j.graph,
            BipGraph::build(3, 3, [(0, 0), (1, 1), (2, 2)]).unwrap()
        );
        assert!(j.centers_a.is_empty());

        let j = star_join(2, 4).unwrap();
        assert_eq!(j.graph.n(), 12);
        assert_eq!(j.graph.m(), 20);
        for &c in j.centers_a.iter().chain(&j.centers_b) {
            assert_eq!(j.graph.degree(c), 4);
        }

        assert!(matches!(
            star_join(3, 2).unwrap_err(),
            ConstructError::BadParams(_)
        ));
        assert!(matches!(
            star_join(0, 0).unwrap_err(),
            ConstructError::BadParams(_)
        ));
    }

    #[test]
    fn double_star_join_agrees_with_the_tree_join() {
        let direct = double_star_join(2, 2, 1).unwrap();
        assert!(are_isomorphic(&direct.graph, &even_cycle(4)));

        let direct = double_star_join(3, 3, 2).unwrap();
        let via_tree = k_leaf_matching(&double_star_tree(3, 3).unwrap(), 2).unwrap();
        assert_eq!(direct.graph.n(), 16);
        assert_eq!(direct.graph.m(), 24);
        assert!(are_isomorphic(&direct.graph, &via_tree.graph));

        let direct = double_star_join(4, 5, 2).unwrap();
        let via_tree = k_leaf_matching(&double_star_tree(4, 5).unwrap(), 2).unwrap();
        assert_eq!(direct.graph.n(), 22);
        assert_eq!(direct.graph.m(), 39);
        assert!(are_isomorphic(&direct.graph, &via_tree.graph));

        assert!(double_star_join(1, 3, 1).is_err());
    }

    #[test]
    fn edge_replacement_splices_a_star_join_in() {
        let replaced = replace_edge_with_star_join(&even_cycle(3), 0, 1, 2).unwrap();
        assert_eq!(replaced.graph.n(), 10);
        assert_eq!(replaced.graph.m(), 11);
        assert!(is_matching_covered(&replaced.graph));
        assert_eq!(replaced.attachment_edges.len(), 2);
        for &id in &replaced.attachment_edges {
            let (x, y) = replaced.graph.endpoints(id).unwrap();
            assert!(replaced.centers_a.contains(&x) || replaced.centers_b.contains(&y));
        }

        let k44 = crate::graph::complete_bipartite(4, 4);
        let replaced = replace_edge_with_star_join(&k44, 0, 3, 4).unwrap();
        assert_eq!(replaced.graph.n(), 20);
        assert_eq!(replaced.graph.m(), 43);

        assert_eq!(
            replace_edge_with_star_join(&k44, 0, 2, 4).unwrap_err(),
            ConstructError::DegreeMismatch {
                vertex: Vertex::a(0),
                expected: 3,
                found: 4
            }
        );
        assert_eq!(
            replace_edge_with_star_join(&k44, 99, 3, 4).unwrap_err(),
            ConstructError::NotPresent
        );
    }

    #[test]
    fn tree_census_matches_the_known_counts() {
        let trees = enumerate_trees(9, |_| true);
        let mut by_n = [0usize; 10];
        for t in &trees {
            by_n[t.n()] += 1;
        }
        assert_eq!(by_n[1..], [1, 1, 1, 2, 3, 6, 11, 23, 47]);
        assert_eq!(trees.len(), 95);
    }

    #[test]
    fn tree_census_filters_by_predicate() {
        let halin = enumerate_trees(7, |t| is_r_tree(t, 3));
        let mut by_n = [0usize; 8];
        for t in &halin {
            by_n[t.n()] += 1;
        }
        assert_eq!(by_n[1..], [0, 1, 0, 1, 1, 2, 2]);
    }
}
