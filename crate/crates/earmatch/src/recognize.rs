//! Structure recognizers: taking a graph apart into two paired trees, and
//! the class tests built on that witness, directly or after retracting.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::canon::are_isomorphic;
use crate::classify::{degree_profile, is_minimal_mc};
use crate::graph::{cycle4, BipGraph, EdgeId, Tree, Vertex};
use crate::transform::{partial_retract, RetractTrace};

/// Shape tests for the trees behind the extremal classes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TreePredicates {
    pub is_halin: bool,
    pub is_cubic_halin: bool,
    pub is_star: bool,
}

/// At least two vertices and every internal vertex of degree at least `r`.
pub fn is_r_tree(t: &Tree, r: usize) -> bool {
    t.n() >= 2 && t.non_leaves().into_iter().all(|v| t.degree(v) >= r)
}

/// At least two vertices and every internal vertex of degree exactly `r`.
pub fn is_regular_r_tree(t: &Tree, r: usize) -> bool {
    t.n() >= 2 && t.non_leaves().into_iter().all(|v| t.degree(v) == r)
}

/// Exactly one internal vertex; the smallest star has two leaves.
pub fn is_star(t: &Tree) -> bool {
    t.n() >= 3 && t.non_leaves().len() == 1
}

pub fn tree_predicates(t: &Tree) -> TreePredicates {
    TreePredicates {
        is_halin: is_r_tree(t, 3),
        is_cubic_halin: is_regular_r_tree(t, 3),
        is_star: is_star(t),
    }
}

/// An isomorphism from `t1` onto `t2` as a vertex map, or `None`. When
/// `leaf_images` is given, each listed leaf of `t1` must map to the named
/// vertex of `t2`. Roots the search at tree centers, so the work is linear
/// in all the bipartite child matchings.
pub fn tree_isomorphism(
    t1: &Tree,
    t2: &Tree,
    leaf_images: Option<&BTreeMap<usize, usize>>,
) -> Option<Vec<usize>> {
    if t1.n() != t2.n() {
        return None;
    }
    let n = t1.n();
    if n == 1 {
        return match leaf_images.and_then(|c| c.get(&0)) {
            Some(&img) if img != 0 => None,
            _ => Some(alloc::vec![0]),
        };
    }
    let adj1 = t1.adjacency();
    let adj2 = t2.adjacency();
    let centers1 = tree_center(&adj1);
    let centers2 = tree_center(&adj2);
    if centers1.len() != centers2.len() {
        return None;
    }
    let r1 = centers1[0];
    for &r2 in &centers2 {
        let mut search = TreeIso {
            deg1: (0..n).map(|v| adj1[v].len()).collect(),
            children1: rooted_children(&adj1, r1),
            children2: rooted_children(&adj2, r2),
            leaf_images,
            memo: alloc::vec![None; n * n],
            n,
        };
        if search.compat(r1, r2) {
            let mut out = alloc::vec![usize::MAX; n];
            search.extract(r1, r2, &mut out);
            return Some(out);
        }
    }
    None
}

/// The one or two middle vertices left by repeatedly peeling all leaves.
pub(crate) fn tree_center(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut degree: Vec<usize> = (0..n).map(|v| adj[v].len()).collect();
    let mut alive = alloc::vec![true; n];
    let mut remaining = n;
    let mut frontier: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    while remaining > 2 {
        let mut next = Vec::new();
        for &v in &frontier {
            alive[v] = false;
            remaining -= 1;
            for &w in &adj[v] {
                if alive[w] {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        next.sort_unstable();
        frontier = next;
    }
    (0..n).filter(|&v| alive[v]).collect()
}

fn rooted_children(adj: &[Vec<usize>], root: usize) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut parent = alloc::vec![usize::MAX; n];
    let mut children = alloc::vec![Vec::new(); n];
    let mut stack = alloc::vec![root];
    let mut seen = alloc::vec![false; n];
    seen[root] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    for v in 0..n {
        let mut cs: Vec<usize> = adj[v].iter().copied().filter(|&w| parent[w] == v).collect();
        cs.sort_unstable();
        children[v] = cs;
    }
    children
}

struct TreeIso<'c> {
    deg1: Vec<usize>,
    children1: Vec<Vec<usize>>,
    children2: Vec<Vec<usize>>,
    leaf_images: Option<&'c BTreeMap<usize, usize>>,
    memo: Vec<Option<bool>>,
    n: usize,
}

impl TreeIso<'_> {
    fn compat(&mut self, u: usize, v: usize) -> bool {
        if let Some(known) = self.memo[u * self.n + v] {
            return known;
        }
        let ok = self.compute(u, v);
        self.memo[u * self.n + v] = Some(ok);
        ok
    }

    fn compute(&mut self, u: usize, v: usize) -> bool {
        if self.deg1[u] == 1 {
            if let Some(&img) = self.leaf_images.and_then(|c| c.get(&u)) {
                if v != img {
                    return false;
                }
            }
        }
        let cu = self.children1[u].clone();
        let cv = self.children2[v].clone();
        if cu.len() != cv.len() {
            return false;
        }
        self.child_matching(&cu, &cv).is_some()
    }

    fn child_matching(&mut self, cu: &[usize], cv: &[usize]) -> Option<Vec<usize>> {
        let k = cu.len();
        let mut owner: Vec<Option<usize>> = alloc::vec![None; k];
        for i in 0..k {
            let mut seen = alloc::vec![false; k];
            if !self.augment(cu, cv, i, &mut owner, &mut seen) {
                return None;
            }
        }
        let mut assign = alloc::vec![usize::MAX; k];
        for (j, slot) in owner.iter().enumerate() {
            if let Some(i) = slot {
                assign[*i] = j;
            }
        }
        Some(assign)
    }

    fn augment(
        &mut self,
        cu: &[usize],
        cv: &[usize],
        i: usize,
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for j in 0..cv.len() {
            if !seen[j] && self.compat(cu[i], cv[j]) {
                seen[j] = true;
                let freed = owner[j];
                if freed.is_none() || self.augment(cu, cv, freed.unwrap(), owner, seen) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }

    fn extract(&mut self, u: usize, v: usize, out: &mut [usize]) {
        out[u] = v;
        let cu = self.children1[u].clone();
        let cv = self.children2[v].clone();
        let assign = self.child_matching(&cu, &cv).expect("compat established a matching");
        for (i, &j) in assign.iter().enumerate() {
            self.extract(cu[i], cv[j], out);
        }
    }
}

/// How a graph splits into two copies of a tree: deleting `pairing_edges`
/// leaves exactly the components `tree` and `tree2` (placed into the graph
/// by `tree_map` and `tree2_map`), and `iso` is a tree isomorphism mapping
/// each leaf to the leaf its pairing edge points at.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LeafMatchingWitness {
    pub tree: Tree,
    pub tree_map: Vec<Vertex>,
    pub tree2: Tree,
    pub tree2_map: Vec<Vertex>,
    pub iso: Vec<usize>,
    pub pairing_edges: BTreeSet<EdgeId>,
}

/// Finds the paired-tree structure of `g` if it has one. Even cycles split
/// into two paths joined by two of their edges; every other recognized graph
/// splits along all edges whose endpoints both have degree two. Complete for
/// hosts built from trees without internal degree-two vertices; graphs built
/// from other trees may come back `None`.
pub fn recognize_leaf_matching(g: &BipGraph) -> Option<LeafMatchingWitness> {
    if g.n() < 4
        || g.a_count() != g.b_count()
        || g.min_degree() < 2
        || g.has_parallel_edges()
        || !g.is_connected()
    {
        return None;
    }
    if g.m() == g.n() && g.max_degree() == 2 {
        return cycle_witness(g);
    }
    general_witness(g)
}

fn cycle_witness(g: &BipGraph) -> Option<LeafMatchingWitness> {
    let p = g.n() / 2;
    let mut walk = alloc::vec![Vertex::a(0)];
    let mut walk_edges = Vec::new();
    let first = g.neighbors(Vertex::a(0)).into_iter().min_by_key(|&(_, id)| id)?;
    walk.push(first.0);
    walk_edges.push(first.1);
    while walk.len() < g.n() {
        let cur = *walk.last().expect("walk is nonempty");
        let prev_edge = *walk_edges.last().expect("walk has an edge");
        let (next, id) = g
            .neighbors(cur)
            .into_iter()
            .find(|&(_, id)| id != prev_edge)
            .expect("cycle vertices have two edges");
        walk.push(next);
        walk_edges.push(id);
    }
    let closing = g
        .neighbors(*walk.last().expect("walk is nonempty"))
        .into_iter()
        .find(|&(_, id)| id != *walk_edges.last().expect("walk has an edge"))
        .expect("cycle vertices have two edges")
        .1;
    walk_edges.push(closing);
    let path = |count: usize| Tree::new(count, (1..count).map(|i| (i - 1, i)));
    let tree = path(p).expect("a path is a tree");
    let tree2 = path(p).expect("a path is a tree");
    Some(LeafMatchingWitness {
        tree,
        tree_map: walk[..p].to_vec(),
        tree2,
        tree2_map: walk[p..].to_vec(),
        iso: (0..p).map(|i| p - 1 - i).collect(),
        pairing_edges: [walk_edges[p - 1], walk_edges[2 * p - 1]].into_iter().collect(),
    })
}

fn general_witness(g: &BipGraph) -> Option<LeafMatchingWitness> {
    let profile = degree_profile(g).expect("minimum degree was checked");
    let pairing = profile.e2;
    if pairing.is_empty() {
        return None;
    }
    let mut label: BTreeMap<Vertex, usize> = BTreeMap::new();
    let mut parts = 0;
    for start in g.vertices() {
        if label.contains_key(&start) {
            continue;
        }
        let this = parts;
        parts += 1;
        let mut stack = alloc::vec![start];
        label.insert(start, this);
        while let Some(v) = stack.pop() {
            for (w, id) in g.neighbors(v) {
                if !pairing.contains(&id) && label.insert(w, this).is_none() {
                    stack.push(w);
                }
            }
        }
    }
    if parts != 2 {
        return None;
    }
    for &id in &pairing {
        let (u, v) = g.endpoints(id).expect("edge id from the profile");
        if label[&u] == label[&v] {
            return None;
        }
    }
    let side: Vec<BTreeSet<Vertex>> = (0..2)
        .map(|part| label.iter().filter(|&(_, &l)| l == part).map(|(&v, _)| v).collect())
        .collect();
    let (tree, tree_map) = component_tree(g, &side[0], &pairing)?;
    let (tree2, tree2_map) = component_tree(g, &side[1], &pairing)?;
    for (t, map) in [(&tree, &tree_map), (&tree2, &tree2_map)] {
        for (i, &host) in map.iter().enumerate() {
            let td = t.degree(i);
            let hd = g.degree(host);
            let fits = if td == 1 { hd == 2 } else { td >= 3 && hd == td };
            if !fits {
                return None;
            }
        }
    }
    let mut leaf_images = BTreeMap::new();
    for &id in &pairing {
        let (u, v) = g.endpoints(id).expect("edge id from the profile");
        let (x, y) = if label[&u] == 0 { (u, v) } else { (v, u) };
        let i = tree_map.binary_search(&x).ok()?;
        let j = tree2_map.binary_search(&y).ok()?;
        if leaf_images.insert(i, j).is_some() {
            return None;
        }
    }
    let iso = tree_isomorphism(&tree, &tree2, Some(&leaf_images))?;
    Some(LeafMatchingWitness { tree, tree_map, tree2, tree2_map, iso, pairing_edges: pairing })
}

fn component_tree(
    g: &BipGraph,
    members: &BTreeSet<Vertex>,
    skip: &BTreeSet<EdgeId>,
) -> Option<(Tree, Vec<Vertex>)> {
    let hosts: Vec<Vertex> = members.iter().copied().collect();
    let mut edges = Vec::new();
    for (id, _) in g.edges().iter().enumerate() {
        if skip.contains(&id) {
            continue;
        }
        let (u, v) = g.endpoints(id).expect("edge id in range");
        if members.contains(&u) && members.contains(&v) {
            let i = hosts.binary_search(&u).expect("endpoint is a member");
            let j = hosts.binary_search(&v).expect("endpoint is a member");
            edges.push((i, j));
        }
    }
    let tree = Tree::new(hosts.len(), edges).ok()?;
    Some((tree, hosts))
}

/// `Some` exactly when `g` splits into two copies of a tree whose internal
/// vertices all have degree at least three.
pub fn recognize_h2(g: &BipGraph) -> Option<LeafMatchingWitness> {
    recognize_leaf_matching(g).filter(|w| is_r_tree(&w.tree, 3))
}

/// `Some` exactly when `g` splits into two copies of a tree whose internal
/// vertices all have degree exactly three.
pub fn recognize_h3(g: &BipGraph) -> Option<LeafMatchingWitness> {
    recognize_leaf_matching(g).filter(|w| is_regular_r_tree(&w.tree, 3))
}

/// `Some` exactly when `g` splits into two copies of a star.
pub fn recognize_h4(g: &BipGraph) -> Option<LeafMatchingWitness> {
    recognize_leaf_matching(g).filter(|w| is_star(&w.tree))
}

/// A class test that works on the partial retract: the verdict, the retract
/// itself with the trace that produced it, and the retract's paired-tree
/// witness when one exists.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RetractRecognition {
    pub verdict: bool,
    pub retract: BipGraph,
    pub trace: RetractTrace,
    pub witness: Option<LeafMatchingWitness>,
}

/// Tests whether `g` is a minimal matching covered graph, other than the
/// four-cycle, whose partial retract splits into two copies of a tree with
/// all internal degrees at least three.
pub fn recognize_h0(g: &BipGraph) -> RetractRecognition {
    let (retract, trace) = partial_retract(g);
    let witness = recognize_h2(&retract);
    let verdict = witness.is_some()
        && !are_isomorphic(g, &cycle4())
        && is_minimal_mc(g).unwrap_or(false);
    RetractRecognition { verdict, retract, trace, witness }
}

/// Tests whether `g` is a minimal matching covered graph of maximum degree
/// three whose partial retract splits into two copies of a star.
pub fn recognize_h1(g: &BipGraph) -> RetractRecognition {
    let (retract, trace) = partial_retract(g);
    let witness = recognize_h4(&retract);
    let verdict =
        witness.is_some() && g.max_degree() == 3 && is_minimal_mc(g).unwrap_or(false);
    RetractRecognition { verdict, retract, trace, witness }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, even_cycle, theta_graph};
    use crate::transform::bisplit;

    fn tree(n: usize, edges: &[(usize, usize)]) -> Tree {
        Tree::new(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn predicates_on_small_trees() {
        let k2 = tree(2, &[(0, 1)]);
        assert_eq!(
            tree_predicates(&k2),
            TreePredicates { is_halin: true, is_cubic_halin: true, is_star: false }
        );
        let p3 = tree(3, &[(0, 1), (1, 2)]);
        assert_eq!(
            tree_predicates(&p3),
            TreePredicates { is_halin: false, is_cubic_halin: false, is_star: true }
        );
        let claw = tree(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(
            tree_predicates(&claw),
            TreePredicates { is_halin: true, is_cubic_halin: true, is_star: true }
        );
        let star4 = tree(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(
            tree_predicates(&star4),
            TreePredicates { is_halin: true, is_cubic_halin: false, is_star: true }
        );
        let single = tree(1, &[]);
        assert_eq!(
            tree_predicates(&single),
            TreePredicates { is_halin: false, is_cubic_halin: false, is_star: false }
        );
        let p4 = tree(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(
            tree_predicates(&p4),
            TreePredicates { is_halin: false, is_cubic_halin: false, is_star: false }
        );
    }

    #[test]
    fn path_isomorphism_respects_leaf_constraints() {
        let p4 = tree(4, &[(0, 1), (1, 2), (2, 3)]);
        let fixed: BTreeMap<usize, usize> = [(0, 0), (3, 3)].into_iter().collect();
        assert_eq!(tree_isomorphism(&p4, &p4, Some(&fixed)), Some(alloc::vec![0, 1, 2, 3]));
        let flipped: BTreeMap<usize, usize> = [(0, 3), (3, 0)].into_iter().collect();
        assert_eq!(tree_isomorphism(&p4, &p4, Some(&flipped)), Some(alloc::vec![3, 2, 1, 0]));
        let impossible: BTreeMap<usize, usize> = [(0, 1)].into_iter().collect();
        assert_eq!(tree_isomorphism(&p4, &p4, Some(&impossible)), None);
        let claw = tree(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(tree_isomorphism(&p4, &claw, None), None);
    }

    #[test]
    fn asymmetric_tree_constraints() {
        let t = tree(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]);
        let swap: BTreeMap<usize, usize> = [(0, 2), (2, 0), (4, 4)].into_iter().collect();
        let iso = tree_isomorphism(&t, &t, Some(&swap)).unwrap();
        assert_eq!(iso, alloc::vec![2, 1, 0, 3, 4]);
        let wrong: BTreeMap<usize, usize> = [(0, 4), (4, 0), (2, 2)].into_iter().collect();
        assert_eq!(tree_isomorphism(&t, &t, Some(&wrong)), None);
    }

    #[test]
    fn theta_decomposes_into_paired_stars() {
        let theta = theta_graph();
        let w = recognize_leaf_matching(&theta).unwrap();
        assert_eq!(w.pairing_edges, [6, 7, 8].into_iter().collect());
        assert_eq!(w.tree_map, alloc::vec![Vertex::a(0), Vertex::b(1), Vertex::b(2), Vertex::b(3)]);
        assert_eq!(w.tree2_map, alloc::vec![Vertex::a(1), Vertex::a(2), Vertex::a(3), Vertex::b(0)]);
        assert_eq!(w.iso, alloc::vec![3, 0, 1, 2]);
        assert_eq!(
            tree_predicates(&w.tree),
            TreePredicates { is_halin: true, is_cubic_halin: true, is_star: true }
        );
        assert!(recognize_h2(&theta).is_some());
        assert!(recognize_h3(&theta).is_some());
        assert!(recognize_h4(&theta).is_some());
    }

    #[test]
    fn cycles_are_paired_paths() {
        let square = cycle4();
        let w = recognize_leaf_matching(&square).unwrap();
        assert_eq!(w.tree.n(), 2);
        assert_eq!(w.pairing_edges.len(), 2);
        assert!(recognize_h2(&square).is_some());
        assert!(recognize_h3(&square).is_some());
        assert!(recognize_h4(&square).is_none());

        let hexagon = even_cycle(3);
        let w = recognize_leaf_matching(&hexagon).unwrap();
        assert_eq!(w.tree_map, alloc::vec![Vertex::a(0), Vertex::b(0), Vertex::a(1)]);
        assert_eq!(w.tree2_map, alloc::vec![Vertex::b(1), Vertex::a(2), Vertex::b(2)]);
        assert_eq!(w.pairing_edges, [2, 5].into_iter().collect());
        assert_eq!(w.iso, alloc::vec![2, 1, 0]);
        assert!(recognize_h2(&hexagon).is_none());
        assert!(recognize_h4(&hexagon).is_some());

        let octagon = even_cycle(4);
        assert!(recognize_leaf_matching(&octagon).is_some());
        assert!(recognize_h2(&octagon).is_none());
        assert!(recognize_h4(&octagon).is_none());
    }

    #[test]
    fn mismatched_halves_fail() {
        let g = BipGraph::build(
            10,
            10,
            [
                (0, 0),
                (1, 0),
                (0, 1),
                (0, 2),
                (2, 0),
                (1, 3),
                (1, 4),
                (1, 5),
                (1, 6),
                (3, 7),
                (3, 8),
                (4, 7),
                (5, 7),
                (6, 7),
                (3, 9),
                (7, 8),
                (8, 8),
                (9, 8),
                (4, 1),
                (5, 2),
                (6, 3),
                (7, 4),
                (8, 5),
                (9, 6),
                (2, 9),
            ],
        )
        .unwrap();
        assert_eq!(g.min_degree(), 2);
        assert!(recognize_leaf_matching(&g).is_none());
    }

    #[test]
    fn graphs_without_two_edges_fail() {
        assert!(recognize_leaf_matching(&complete_bipartite(3, 3)).is_none());
        assert!(recognize_leaf_matching(&complete_bipartite(2, 2)).is_some());
    }

    #[test]
    fn retract_classes_on_fixed_points() {
        let theta = theta_graph();
        assert!(recognize_h0(&theta).verdict);
        assert!(recognize_h1(&theta).verdict);
        assert!(!recognize_h0(&cycle4()).verdict);
        assert!(!recognize_h0(&even_cycle(3)).verdict);
        assert!(!recognize_h1(&even_cycle(3)).verdict);
    }

    #[test]
    fn split_star_join_retracts_to_a_tight_member() {
        let join = BipGraph::build(
            5,
            5,
            [
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (1, 0),
                (2, 0),
                (3, 0),
                (4, 0),
                (1, 1),
                (2, 2),
                (3, 3),
                (4, 4),
            ],
        )
        .unwrap();
        assert!(recognize_h2(&join).is_some());
        assert!(recognize_h3(&join).is_none());
        assert!(recognize_h4(&join).is_some());
        let f1: BTreeSet<EdgeId> = [0, 1].into_iter().collect();
        let f2: BTreeSet<EdgeId> = [2, 3].into_iter().collect();
        let split = bisplit(&join, Vertex::a(0), &f1, &f2, true).unwrap();
        let h0 = recognize_h0(&split);
        assert!(h0.verdict);
        assert_eq!(h0.trace.steps, alloc::vec![Vertex::b(5)]);
        assert_eq!(h0.retract, join);
        assert!(!recognize_h1(&split).verdict);
    }
}
