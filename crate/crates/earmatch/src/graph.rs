//! Core types: bipartite multigraphs with stable edge ids, vertices tagged by
//! class, matchings, edge cuts, and trees.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

/// The two classes of a bipartition. `A` orders before `B`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// A vertex is a class tag plus an index within that class.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Vertex {
    pub side: Side,
    pub index: usize,
}

impl Vertex {
    pub fn a(index: usize) -> Vertex {
        Vertex { side: Side::A, index }
    }

    pub fn b(index: usize) -> Vertex {
        Vertex { side: Side::B, index }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::A => write!(f, "a{}", self.index),
            Side::B => write!(f, "b{}", self.index),
        }
    }
}

/// Edges are addressed by their position in the edge list.
pub type EdgeId = usize;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GraphError {
    InvalidEdge { a: usize, b: usize },
    NotPresent,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::InvalidEdge { a, b } => {
                write!(f, "edge ({a}, {b}) has an endpoint out of range")
            }
            GraphError::NotPresent => write!(f, "referenced vertex or edge is not present"),
        }
    }
}

impl core::error::Error for GraphError {}

/// A bipartite multigraph. Vertices are `0..a_count` on side A and
/// `0..b_count` on side B; the edge list is ordered and may repeat pairs, and
/// an edge's id is its position in that list.
#[derive(Clone, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BipGraph {
    a_count: usize,
    b_count: usize,
    edges: Vec<(usize, usize)>,
}

/// Old-to-new index translation produced by vertex/edge removal and by the
/// transformations that reindex. `None` marks a removed item.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IndexMaps {
    pub a_map: Vec<Option<usize>>,
    pub b_map: Vec<Option<usize>>,
    pub edge_map: Vec<Option<EdgeId>>,
}

impl IndexMaps {
    pub fn vertex(&self, v: Vertex) -> Option<Vertex> {
        let slot = match v.side {
            Side::A => self.a_map.get(v.index),
            Side::B => self.b_map.get(v.index),
        };
        slot.copied().flatten().map(|index| Vertex { side: v.side, index })
    }
}

/// One connected component together with the positions of its vertices and
/// edges in the parent graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Component {
    pub graph: BipGraph,
    pub a_to_parent: Vec<usize>,
    pub b_to_parent: Vec<usize>,
    pub edge_to_parent: Vec<EdgeId>,
}

impl BipGraph {
    pub fn build(
        a_count: usize,
        b_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<BipGraph, GraphError> {
        let edges: Vec<(usize, usize)> = edges.into_iter().collect();
        for &(a, b) in &edges {
            if a >= a_count || b >= b_count {
                return Err(GraphError::InvalidEdge { a, b });
            }
        }
        Ok(BipGraph { a_count, b_count, edges })
    }

    pub fn a_count(&self) -> usize {
        self.a_count
    }

    pub fn b_count(&self) -> usize {
        self.b_count
    }

    /// Total vertex count.
    pub fn n(&self) -> usize {
        self.a_count + self.b_count
    }

    /// Edge count, with multiplicity.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<(usize, usize), GraphError> {
        self.edges.get(id).copied().ok_or(GraphError::NotPresent)
    }

    /// Endpoints of an edge as `(A-vertex, B-vertex)`.
    pub fn endpoints(&self, id: EdgeId) -> Result<(Vertex, Vertex), GraphError> {
        let (a, b) = self.edge(id)?;
        Ok((Vertex::a(a), Vertex::b(b)))
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        match v.side {
            Side::A => v.index < self.a_count,
            Side::B => v.index < self.b_count,
        }
    }

    /// All vertices, side A first, ascending index within each side.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        let a = (0..self.a_count).map(Vertex::a);
        let b = (0..self.b_count).map(Vertex::b);
        a.chain(b)
    }

    /// Degree with multiplicity.
    pub fn degree(&self, v: Vertex) -> usize {
        self.incident_edges(v).len()
    }

    /// Ids of the edges at `v`, ascending.
    pub fn incident_edges(&self, v: Vertex) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|&(_, &(a, b))| match v.side {
                Side::A => a == v.index,
                Side::B => b == v.index,
            })
            .map(|(id, _)| id)
            .collect()
    }

    /// `(neighbor, edge id)` pairs at `v`, in edge-id order.
    pub fn neighbors(&self, v: Vertex) -> Vec<(Vertex, EdgeId)> {
        self.incident_edges(v)
            .into_iter()
            .map(|id| {
                let (a, b) = self.edges[id];
                let other = match v.side {
                    Side::A => Vertex::b(b),
                    Side::B => Vertex::a(a),
                };
                (other, id)
            })
            .collect()
    }

    /// Adjacency lists for both sides at once: `(a_adj, b_adj)`, each entry a
    /// `(neighbor index, edge id)` list in edge-id order.
    pub fn adjacency(&self) -> (Vec<Vec<(usize, EdgeId)>>, Vec<Vec<(usize, EdgeId)>>) {
        let mut a_adj = alloc::vec![Vec::new(); self.a_count];
        let mut b_adj = alloc::vec![Vec::new(); self.b_count];
        for (id, &(a, b)) in self.edges.iter().enumerate() {
            a_adj[a].push((b, id));
            b_adj[b].push((a, id));
        }
        (a_adj, b_adj)
    }

    /// The other endpoint of edge `id` as seen from `v`.
    pub fn other_end(&self, id: EdgeId, v: Vertex) -> Result<Vertex, GraphError> {
        let (a, b) = self.edge(id)?;
        match v.side {
            Side::A if a == v.index => Ok(Vertex::b(b)),
            Side::B if b == v.index => Ok(Vertex::a(a)),
            _ => Err(GraphError::NotPresent),
        }
    }

    /// Deletes the listed vertices (with all incident edges) and the listed
    /// extra edges, reindexing both sides ascending. Returns the new graph and
    /// the old-to-new translation maps.
    pub fn remove(
        &self,
        vertices: &BTreeSet<Vertex>,
        edge_ids: &BTreeSet<EdgeId>,
    ) -> Result<(BipGraph, IndexMaps), GraphError> {
        for &v in vertices {
            if !self.contains_vertex(v) {
                return Err(GraphError::NotPresent);
            }
        }
        for &id in edge_ids {
            if id >= self.edges.len() {
                return Err(GraphError::NotPresent);
            }
        }
        let mut a_map = alloc::vec![None; self.a_count];
        let mut b_map = alloc::vec![None; self.b_count];
        let mut next = 0;
        for i in 0..self.a_count {
            if !vertices.contains(&Vertex::a(i)) {
                a_map[i] = Some(next);
                next += 1;
            }
        }
        let new_a = next;
        next = 0;
        for i in 0..self.b_count {
            if !vertices.contains(&Vertex::b(i)) {
                b_map[i] = Some(next);
                next += 1;
            }
        }
        let new_b = next;
        let mut edge_map = alloc::vec![None; self.edges.len()];
        let mut new_edges = Vec::new();
        for (id, &(a, b)) in self.edges.iter().enumerate() {
            if edge_ids.contains(&id) {
                continue;
            }
            if let (Some(na), Some(nb)) = (a_map[a], b_map[b]) {
                edge_map[id] = Some(new_edges.len());
                new_edges.push((na, nb));
            }
        }
        Ok((
            BipGraph { a_count: new_a, b_count: new_b, edges: new_edges },
            IndexMaps { a_map, b_map, edge_map },
        ))
    }

    /// Connected components, ordered by their smallest parent vertex.
    pub fn components(&self) -> Vec<Component> {
        let (a_adj, b_adj) = self.adjacency();
        let mut comp_of = alloc::collections::BTreeMap::new();
        let mut count = 0;
        for start in self.vertices() {
            if comp_of.contains_key(&start) {
                continue;
            }
            let label = count;
            count += 1;
            let mut stack = alloc::vec![start];
            comp_of.insert(start, label);
            while let Some(v) = stack.pop() {
                let adj = match v.side {
                    Side::A => &a_adj[v.index],
                    Side::B => &b_adj[v.index],
                };
                for &(w, _) in adj {
                    let u = Vertex { side: v.side.other(), index: w };
                    if comp_of.insert(u, label).is_none() {
                        stack.push(u);
                    }
                }
            }
        }
        let mut out = Vec::new();
        for label in 0..count {
            let verts: BTreeSet<Vertex> =
                comp_of.iter().filter(|&(_, &l)| l == label).map(|(&v, _)| v).collect();
            let keep_out: BTreeSet<Vertex> =
                self.vertices().filter(|v| !verts.contains(v)).collect();
            let (graph, maps) = self
                .remove(&keep_out, &BTreeSet::new())
                .expect("component vertices are present");
            let mut a_to_parent = alloc::vec![0; graph.a_count];
            for (old, slot) in maps.a_map.iter().enumerate() {
                if let Some(new) = slot {
                    a_to_parent[*new] = old;
                }
            }
            let mut b_to_parent = alloc::vec![0; graph.b_count];
            for (old, slot) in maps.b_map.iter().enumerate() {
                if let Some(new) = slot {
                    b_to_parent[*new] = old;
                }
            }
            let mut edge_to_parent = alloc::vec![0; graph.m()];
            for (old, slot) in maps.edge_map.iter().enumerate() {
                if let Some(new) = slot {
                    edge_to_parent[*new] = old;
                }
            }
            out.push(Component { graph, a_to_parent, b_to_parent, edge_to_parent });
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.components().len() == 1
    }

    /// Whether some pair of distinct edges joins the same endpoints.
    pub fn has_parallel_edges(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.iter().any(|&e| !seen.insert(e))
    }

    /// Smallest vertex degree, with multiplicity. Zero for an empty graph.
    pub fn min_degree(&self) -> usize {
        let mut deg_a = alloc::vec![0usize; self.a_count];
        let mut deg_b = alloc::vec![0usize; self.b_count];
        for &(a, b) in &self.edges {
            deg_a[a] += 1;
            deg_b[b] += 1;
        }
        deg_a.into_iter().chain(deg_b).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        let mut deg_a = alloc::vec![0usize; self.a_count];
        let mut deg_b = alloc::vec![0usize; self.b_count];
        for &(a, b) in &self.edges {
            deg_a[a] += 1;
            deg_b[b] += 1;
        }
        deg_a.into_iter().chain(deg_b).max().unwrap_or(0)
    }

    /// The edge cut determined by a shore: all edges with exactly one end in
    /// `shore`. `boundary(W)` and `boundary(V - W)` contain the same edges.
    pub fn boundary(&self, shore: &BTreeSet<Vertex>) -> EdgeCut {
        let mut edge_ids = BTreeSet::new();
        let mut a_side_count = 0;
        let mut b_side_count = 0;
        for (id, &(a, b)) in self.edges.iter().enumerate() {
            let a_in = shore.contains(&Vertex::a(a));
            let b_in = shore.contains(&Vertex::b(b));
            if a_in != b_in {
                edge_ids.insert(id);
                if a_in {
                    a_side_count += 1;
                } else {
                    b_side_count += 1;
                }
            }
        }
        EdgeCut {
            shore: shore.clone(),
            co_shore_size: self.n() - shore.len(),
            edge_ids,
            a_side_count,
            b_side_count,
        }
    }
}

/// An edge cut `boundary(W)`. `a_side_count` counts cut edges whose end inside
/// the shore is an A-vertex, `b_side_count` those whose inside end is a
/// B-vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeCut {
    pub shore: BTreeSet<Vertex>,
    pub co_shore_size: usize,
    pub edge_ids: BTreeSet<EdgeId>,
    pub a_side_count: usize,
    pub b_side_count: usize,
}

impl EdgeCut {
    /// Balanced: as many cut edges leave the shore from an A-vertex as from a
    /// B-vertex.
    pub fn is_balanced(&self) -> bool {
        self.a_side_count == self.b_side_count
    }

    /// Trivial: one side of the cut is a single vertex or empty.
    pub fn is_trivial(&self) -> bool {
        self.shore.len() <= 1 || self.co_shore_size <= 1
    }
}

/// A set of pairwise disjoint edges of a specific graph, held by edge id.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matching {
    edge_ids: BTreeSet<EdgeId>,
}

impl Matching {
    pub fn empty() -> Matching {
        Matching { edge_ids: BTreeSet::new() }
    }

    /// Validates that the ids exist in `g` and share no endpoint.
    pub fn from_edge_ids(
        g: &BipGraph,
        ids: impl IntoIterator<Item = EdgeId>,
    ) -> Result<Matching, GraphError> {
        let mut seen_a = BTreeSet::new();
        let mut seen_b = BTreeSet::new();
        let mut edge_ids = BTreeSet::new();
        for id in ids {
            let (a, b) = g.edge(id)?;
            if !seen_a.insert(a) || !seen_b.insert(b) {
                return Err(GraphError::InvalidEdge { a, b });
            }
            edge_ids.insert(id);
        }
        Ok(Matching { edge_ids })
    }

    pub fn edge_ids(&self) -> &BTreeSet<EdgeId> {
        &self.edge_ids
    }

    pub fn len(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_ids.is_empty()
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.edge_ids.contains(&id)
    }

    /// Perfect in `g`: covers every vertex.
    pub fn is_perfect(&self, g: &BipGraph) -> bool {
        g.a_count() == g.b_count() && self.edge_ids.len() == g.a_count()
    }

    /// The matched partner of `v`, if any.
    pub fn partner(&self, g: &BipGraph, v: Vertex) -> Option<(Vertex, EdgeId)> {
        for &id in &self.edge_ids {
            let (a, b) = g.edge(id).ok()?;
            match v.side {
                Side::A if a == v.index => return Some((Vertex::b(b), id)),
                Side::B if b == v.index => return Some((Vertex::a(a), id)),
                _ => {}
            }
        }
        None
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TreeError {
    NotATree,
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::NotATree => write!(f, "edge list is not a tree"),
        }
    }
}

impl core::error::Error for TreeError {}

/// A tree on vertices `0..n`, validated at construction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tree {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Tree {
    /// Checks `m = n - 1`, endpoints in range, and connectivity.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Tree, TreeError> {
        let edges: Vec<(usize, usize)> =
            edges.into_iter().map(|(u, v)| if u <= v { (u, v) } else { (v, u) }).collect();
        if n == 0 || edges.len() + 1 != n {
            return Err(TreeError::NotATree);
        }
        for &(u, v) in &edges {
            if u >= n || v >= n || u == v {
                return Err(TreeError::NotATree);
            }
        }
        let adj = adjacency_lists(n, &edges);
        let mut seen = alloc::vec![false; n];
        let mut stack = alloc::vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        if reached != n {
            return Err(TreeError::NotATree);
        }
        Ok(Tree { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(u, w)| u == v || w == v).count()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        adjacency_lists(self.n, &self.edges)
    }

    /// Degree-1 vertices, ascending. The one vertex of a trivial tree counts
    /// as neither leaf nor non-leaf by degree, so it lands in `non_leaves`.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) == 1).collect()
    }

    pub fn non_leaves(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) != 1).collect()
    }

    /// Proper 2-coloring with vertex 0 colored 0.
    pub fn coloring(&self) -> Vec<u8> {
        let adj = self.adjacency();
        let mut color = alloc::vec![u8::MAX; self.n];
        let mut stack = alloc::vec![0usize];
        color[0] = 0;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    stack.push(w);
                }
            }
        }
        color
    }
}

fn adjacency_lists(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = alloc::vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

/// The 4-cycle, smallest matching covered bipartite graph.
pub fn cycle4() -> BipGraph {
    even_cycle(2)
}

/// The cycle on `2p` vertices: `a0 b0 a1 b1 .. a(p-1) b(p-1)`.
pub fn even_cycle(p: usize) -> BipGraph {
    assert!(p >= 2, "even cycle needs at least 4 vertices");
    let mut edges = Vec::new();
    for i in 0..p {
        edges.push((i, i));
        edges.push(((i + 1) % p, i));
    }
    BipGraph::build(p, p, edges).expect("cycle edges are in range")
}

/// Complete bipartite graph `K(a, b)` with edges in row-major order.
pub fn complete_bipartite(a: usize, b: usize) -> BipGraph {
    let edges = (0..a).flat_map(|i| (0..b).map(move |j| (i, j)));
    BipGraph::build(a, b, edges).expect("complete bipartite edges are in range")
}

/// The theta graph: vertices `a0` and `b0` joined by three internally
/// disjoint paths of length three. Eight vertices, nine edges; the three
/// middle edges are exactly its edges with both endpoints of degree two.
pub fn theta_graph() -> BipGraph {
    BipGraph::build(4, 4, [(0, 1), (0, 2), (0, 3), (1, 0), (2, 0), (3, 0), (1, 1), (2, 2), (3, 3)])
        .expect("theta edges are in range")
}
