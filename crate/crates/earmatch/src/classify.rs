//! Degree and edge partitions of minimal matching covered graphs, the five
//! extremal classes cut out by tight counting bounds, the bound checks with a
//! constructive induced-matching witness, and the counting identities that
//! hold in the class with |V2| = 2(m - n + 2).

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{BipGraph, EdgeId, Vertex};
use crate::matching::{is_matching_covered, matching_covered_reason, NotMatchingCoveredReason};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClassifyError {
    DegreeTooLow { vertex: Vertex },
    NotMatchingCovered(NotMatchingCoveredReason),
    NotMinimal,
    PreconditionFailed(&'static str),
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::DegreeTooLow { vertex } => {
                write!(f, "vertex {vertex} has degree below 2")
            }
            ClassifyError::NotMatchingCovered(reason) => {
                write!(f, "graph is not matching covered: {reason}")
            }
            ClassifyError::NotMinimal => write!(f, "graph has a removable edge"),
            ClassifyError::PreconditionFailed(what) => write!(f, "precondition failed: {what}"),
        }
    }
}

impl core::error::Error for ClassifyError {}

/// Partition of vertices by degree 2 versus 3-or-more, and of edges by the
/// degrees of their ends: both 2, both at least 3, or mixed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeProfile {
    pub v2: BTreeSet<Vertex>,
    pub v3: BTreeSet<Vertex>,
    pub e2: BTreeSet<EdgeId>,
    pub e3: BTreeSet<EdgeId>,
    pub e32: BTreeSet<EdgeId>,
}

pub fn degree_profile(g: &BipGraph) -> Result<DegreeProfile, ClassifyError> {
    let mut deg_a = alloc::vec![0usize; g.a_count()];
    let mut deg_b = alloc::vec![0usize; g.b_count()];
    for &(a, b) in g.edges() {
        deg_a[a] += 1;
        deg_b[b] += 1;
    }
    for (i, &d) in deg_a.iter().enumerate() {
        if d < 2 {
            return Err(ClassifyError::DegreeTooLow { vertex: Vertex::a(i) });
        }
    }
    for (i, &d) in deg_b.iter().enumerate() {
        if d < 2 {
            return Err(ClassifyError::DegreeTooLow { vertex: Vertex::b(i) });
        }
    }
    let mut profile = DegreeProfile {
        v2: BTreeSet::new(),
        v3: BTreeSet::new(),
        e2: BTreeSet::new(),
        e3: BTreeSet::new(),
        e32: BTreeSet::new(),
    };
    for (i, &d) in deg_a.iter().enumerate() {
        if d == 2 {
            profile.v2.insert(Vertex::a(i));
        } else {
            profile.v3.insert(Vertex::a(i));
        }
    }
    for (i, &d) in deg_b.iter().enumerate() {
        if d == 2 {
            profile.v2.insert(Vertex::b(i));
        } else {
            profile.v3.insert(Vertex::b(i));
        }
    }
    for (id, &(a, b)) in g.edges().iter().enumerate() {
        match (deg_a[a] == 2, deg_b[b] == 2) {
            (true, true) => profile.e2.insert(id),
            (false, false) => profile.e3.insert(id),
            _ => profile.e32.insert(id),
        };
    }
    Ok(profile)
}

/// Edges whose removal leaves the graph matching covered.
pub fn removable_edges(g: &BipGraph) -> Result<BTreeSet<EdgeId>, ClassifyError> {
    matching_covered_reason(g).map_err(ClassifyError::NotMatchingCovered)?;
    let mut out = BTreeSet::new();
    for id in 0..g.m() {
        let (shrunk, _) = g
            .remove(&BTreeSet::new(), &[id].into())
            .expect("edge id is in range");
        if is_matching_covered(&shrunk) {
            out.insert(id);
        }
    }
    Ok(out)
}

/// Matching covered with no removable edge.
pub fn is_minimal_mc(g: &BipGraph) -> Result<bool, ClassifyError> {
    Ok(removable_edges(g)?.is_empty())
}

/// Membership flags for the five extremal classes, each the equality case of
/// one counting bound.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtremalFlags {
    pub h0: bool,
    pub h1: bool,
    pub h2: bool,
    pub h3: bool,
    pub h4: bool,
}

/// Signed distances from each equality; a flag is set exactly when its slack
/// is zero, and the underlying bound holds exactly when the slack is
/// nonnegative (the 4-cycle being the one exception for `h4`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtremalSlacks {
    /// |E2| - (m - n + 2)
    pub h0: i64,
    /// 6 |E2| - (n + 10)
    pub h1: i64,
    /// |V2| - 2 (m - n + 2)
    pub h2: i64,
    /// 2 |V2| - (n + 4)
    pub h3: i64,
    /// (3n - 6) - 2m
    pub h4: i64,
}

#[derive(Clone, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtremalReport {
    pub n: usize,
    pub m: usize,
    pub v2_count: usize,
    pub v3_count: usize,
    pub e2_count: usize,
    pub e3_count: usize,
    pub e32_count: usize,
    pub flags: ExtremalFlags,
    pub slacks: ExtremalSlacks,
}

fn minimal_gate(g: &BipGraph) -> Result<DegreeProfile, ClassifyError> {
    matching_covered_reason(g).map_err(ClassifyError::NotMatchingCovered)?;
    if !is_minimal_mc(g)? {
        return Err(ClassifyError::NotMinimal);
    }
    degree_profile(g)
}

pub(crate) fn slacks_from_counts(n: usize, m: usize, v2: usize, e2: usize) -> ExtremalSlacks {
    let (n, m, v2, e2) = (n as i64, m as i64, v2 as i64, e2 as i64);
    ExtremalSlacks {
        h0: e2 - (m - n + 2),
        h1: 6 * e2 - (n + 10),
        h2: v2 - 2 * (m - n + 2),
        h3: 2 * v2 - (n + 4),
        h4: (3 * n - 6) - 2 * m,
    }
}

pub(crate) fn flags_from_slacks(s: &ExtremalSlacks) -> ExtremalFlags {
    ExtremalFlags { h0: s.h0 == 0, h1: s.h1 == 0, h2: s.h2 == 0, h3: s.h3 == 0, h4: s.h4 == 0 }
}

/// Classifies a minimal matching covered graph against the five extremal
/// classes.
pub fn classify_extremal(g: &BipGraph) -> Result<ExtremalReport, ClassifyError> {
    let profile = minimal_gate(g)?;
    let slacks = slacks_from_counts(g.n(), g.m(), profile.v2.len(), profile.e2.len());
    Ok(ExtremalReport {
        n: g.n(),
        m: g.m(),
        v2_count: profile.v2.len(),
        v3_count: profile.v3.len(),
        e2_count: profile.e2.len(),
        e3_count: profile.e3.len(),
        e32_count: profile.e32.len(),
        flags: flags_from_slacks(&slacks),
        slacks,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundCheck {
    pub name: &'static str,
    pub lhs: i64,
    pub rhs: i64,
    /// Nonnegative exactly when the bound holds.
    pub slack: i64,
    pub holds: bool,
    pub exempt: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundReport {
    pub checks: [BoundCheck; 5],
    /// Pairwise nonadjacent 2-edges witnessing the first bound; empty exactly
    /// when the graph is the exempt 4-cycle.
    pub induced_matching: Vec<EdgeId>,
    pub c4_exempt: bool,
}

impl BoundReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds || c.exempt)
            && (!self.induced_matching.is_empty() || self.c4_exempt)
    }
}

/// Checks the five counting bounds on a minimal matching covered graph and
/// produces an induced matching of 2-edges of size m - n + 2 (the 4-cycle,
/// which has no induced 2-matching and violates the size bound, is exempt).
pub fn check_bounds(g: &BipGraph) -> Result<BoundReport, ClassifyError> {
    let profile = minimal_gate(g)?;
    let s = slacks_from_counts(g.n(), g.m(), profile.v2.len(), profile.e2.len());
    let (n, m) = (g.n() as i64, g.m() as i64);
    let (v2, e2) = (profile.v2.len() as i64, profile.e2.len() as i64);
    let is_c4 = g.n() == 4 && g.m() == 4;
    let geq = |name, lhs, rhs, slack| BoundCheck { name, lhs, rhs, slack, holds: slack >= 0, exempt: false };
    let mut checks = [
        geq("two_edge_count", e2, m - n + 2, s.h0),
        geq("two_vertex_count", v2, 2 * (m - n + 2), s.h2),
        geq("two_vertex_vs_order", 2 * v2, n + 4, s.h3),
        BoundCheck {
            name: "size_vs_order",
            lhs: 2 * m,
            rhs: 3 * n - 6,
            slack: s.h4,
            holds: s.h4 >= 0,
            exempt: is_c4,
        },
        geq("two_edge_vs_order", 6 * e2, n + 10, s.h1),
    ];
    let induced_matching = if is_c4 {
        Vec::new()
    } else {
        let target = (m - n + 2).max(0) as usize;
        induced_two_edge_matching(g, &profile, target).unwrap_or_default()
    };
    if checks[0].holds && !is_c4 && induced_matching.len() < (m - n + 2).max(0) as usize {
        checks[0].holds = false;
    }
    Ok(BoundReport { checks, induced_matching, c4_exempt: is_c4 })
}

/// A set of at least `target` 2-edges that are pairwise nonadjacent and not
/// joined by any edge of the graph, found by branch and bound.
fn induced_two_edge_matching(
    g: &BipGraph,
    profile: &DegreeProfile,
    target: usize,
) -> Option<Vec<EdgeId>> {
    let list: Vec<EdgeId> = profile.e2.iter().copied().collect();
    let present: BTreeSet<(usize, usize)> = g.edges().iter().copied().collect();
    let conflict = |x: EdgeId, y: EdgeId| {
        let (ax, bx) = g.edge(x).expect("profile edge exists");
        let (ay, by) = g.edge(y).expect("profile edge exists");
        ax == ay || bx == by || present.contains(&(ax, by)) || present.contains(&(ay, bx))
    };
    fn go(
        i: usize,
        list: &[EdgeId],
        chosen: &mut Vec<EdgeId>,
        target: usize,
        conflict: &impl Fn(EdgeId, EdgeId) -> bool,
    ) -> bool {
        if chosen.len() >= target {
            return true;
        }
        if chosen.len() + (list.len() - i) < target {
            return false;
        }
        if i == list.len() {
            return false;
        }
        let e = list[i];
        if !chosen.iter().any(|&c| conflict(c, e)) {
            chosen.push(e);
            if go(i + 1, list, chosen, target, conflict) {
                return true;
            }
            chosen.pop();
        }
        go(i + 1, list, chosen, target, conflict)
    }
    let mut chosen = Vec::new();
    if go(0, &list, &mut chosen, target, &conflict) {
        Some(chosen)
    } else {
        None
    }
}

/// Whether the 2-edges form a perfect matching of the subgraph induced by the
/// degree-2 vertices: every degree-2 vertex lies on exactly one 2-edge.
pub fn e2_is_perfect_matching_on_v2(g: &BipGraph, profile: &DegreeProfile) -> bool {
    let mut cover_a = alloc::collections::BTreeMap::new();
    let mut cover_b = alloc::collections::BTreeMap::new();
    for &id in &profile.e2 {
        let (a, b) = g.edge(id).expect("profile edge exists");
        *cover_a.entry(a).or_insert(0usize) += 1;
        *cover_b.entry(b).or_insert(0usize) += 1;
    }
    profile.v2.iter().all(|v| {
        let count = match v.side {
            crate::graph::Side::A => cover_a.get(&v.index).copied().unwrap_or(0),
            crate::graph::Side::B => cover_b.get(&v.index).copied().unwrap_or(0),
        };
        count == 1
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdentityReport {
    pub checks: [IdentityCheck; 3],
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// The three counting identities for members of the class with
/// |V2| = 2(m - n + 2), excluding the 4-cycle: |V3| = 3n - 2m - 4,
/// |E32| = 2m - 2n + 4, and |E3| = 3n - 2m - 6.
pub fn counting_identities(g: &BipGraph) -> Result<IdentityReport, ClassifyError> {
    let profile = minimal_gate(g)?;
    let slacks = slacks_from_counts(g.n(), g.m(), profile.v2.len(), profile.e2.len());
    if slacks.h2 != 0 {
        return Err(ClassifyError::PreconditionFailed("graph is not in the |V2| = 2(m-n+2) class"));
    }
    if g.n() == 4 && g.m() == 4 {
        return Err(ClassifyError::PreconditionFailed("the 4-cycle is excluded"));
    }
    let (n, m) = (g.n() as i64, g.m() as i64);
    let mk = |name, lhs: i64, rhs: i64| IdentityCheck { name, lhs, rhs, holds: lhs == rhs };
    Ok(IdentityReport {
        checks: [
            mk("three_vertex_count", profile.v3.len() as i64, 3 * n - 2 * m - 4),
            mk("mixed_edge_count", profile.e32.len() as i64, 2 * m - 2 * n + 4),
            mk("three_edge_count", profile.e3.len() as i64, 3 * n - 2 * m - 6),
        ],
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, cycle4, even_cycle, theta_graph};

    /// The smallest graph carrying all five extremal classes.
    pub(crate) fn theta() -> BipGraph {
        theta_graph()
    }

    #[test]
    fn profile_of_theta() {
        let g = theta();
        let p = degree_profile(&g).unwrap();
        assert_eq!(p.v2.len(), 6);
        assert_eq!(p.v3.len(), 2);
        assert_eq!(p.e2.len(), 3);
        assert_eq!(p.e3.len(), 0);
        assert_eq!(p.e32.len(), 6);
        assert!(e2_is_perfect_matching_on_v2(&g, &p));
    }

    #[test]
    fn profile_rejects_pendant_vertices() {
        let g = BipGraph::build(2, 1, [(0, 0), (1, 0)]).unwrap();
        assert_eq!(
            degree_profile(&g).unwrap_err(),
            ClassifyError::DegreeTooLow { vertex: Vertex::a(0) }
        );
    }

    #[test]
    fn every_edge_of_k33_is_removable() {
        let g = complete_bipartite(3, 3);
        assert_eq!(removable_edges(&g).unwrap().len(), 9);
        assert_eq!(is_minimal_mc(&g), Ok(false));
        assert_eq!(classify_extremal(&g).unwrap_err(), ClassifyError::NotMinimal);
    }

    #[test]
    fn cycles_and_theta_are_minimal() {
        assert_eq!(is_minimal_mc(&cycle4()), Ok(true));
        assert_eq!(is_minimal_mc(&even_cycle(3)), Ok(true));
        assert_eq!(is_minimal_mc(&theta()), Ok(true));
    }

    #[test]
    fn cycle4_lies_exactly_in_the_two_vertex_classes() {
        let report = classify_extremal(&cycle4()).unwrap();
        assert!(!report.flags.h0);
        assert!(!report.flags.h1);
        assert!(report.flags.h2);
        assert!(report.flags.h3);
        assert!(!report.flags.h4);
    }

    #[test]
    fn cycle6_lies_exactly_in_the_size_class() {
        let report = classify_extremal(&even_cycle(3)).unwrap();
        assert_eq!(
            (report.flags.h0, report.flags.h1, report.flags.h2, report.flags.h3, report.flags.h4),
            (false, false, false, false, true)
        );
    }

    #[test]
    fn theta_carries_all_five_flags_with_zero_slack() {
        let report = classify_extremal(&theta()).unwrap();
        assert!(report.flags.h0 && report.flags.h1 && report.flags.h2);
        assert!(report.flags.h3 && report.flags.h4);
        let s = report.slacks;
        assert_eq!((s.h0, s.h1, s.h2, s.h3, s.h4), (0, 0, 0, 0, 0));
    }

    #[test]
    fn bounds_hold_on_theta_with_witness() {
        let report = check_bounds(&theta()).unwrap();
        assert!(report.all_hold());
        assert_eq!(report.induced_matching.len(), 3);
        for c in &report.checks {
            assert!(c.holds, "{} violated", c.name);
        }
    }

    #[test]
    fn cycle4_is_exempt_from_the_size_bound() {
        let report = check_bounds(&cycle4()).unwrap();
        assert!(report.c4_exempt);
        assert!(report.induced_matching.is_empty());
        let size = report.checks.iter().find(|c| c.name == "size_vs_order").unwrap();
        assert!(!size.holds && size.exempt);
        assert!(report.all_hold());
    }

    #[test]
    fn identities_hold_on_theta() {
        let report = counting_identities(&theta()).unwrap();
        assert!(report.all_hold());
        assert_eq!(report.checks[0].lhs, 2);
        assert_eq!(report.checks[1].lhs, 6);
        assert_eq!(report.checks[2].lhs, 0);
    }

    #[test]
    fn identities_refuse_the_wrong_class() {
        assert_eq!(
            counting_identities(&cycle4()).unwrap_err(),
            ClassifyError::PreconditionFailed("the 4-cycle is excluded")
        );
        assert_eq!(
            counting_identities(&even_cycle(3)).unwrap_err(),
            ClassifyError::PreconditionFailed("graph is not in the |V2| = 2(m-n+2) class")
        );
    }
}
