//! Canonical forms for bipartite graphs: the lexicographically smallest
//! biadjacency matrix over row and column permutations, with the class swap
//! allowed so that the form names the unlabeled graph. Drives isomorphism
//! tests and the isomorph-free census enumeration.
//!
//! Branch and bound over row orders: for a fixed row prefix the best column
//! order sorts columns ascending by their entries in those rows, so columns
//! are kept as an ordered partition that each new row refines. Equal unused
//! rows are interchangeable and only the first is branched on; the census
//! edge-orbit closure puts the skipped labelings back.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::graph::BipGraph;

/// Canonical biadjacency matrix, rows on the smaller class. Forms compare as
/// `(rows_n, cols_n, cells)`, so equality means isomorphism for connected
/// graphs (components of a disconnected graph keep their given class labels).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct CanonicalForm {
    pub rows_n: usize,
    pub cols_n: usize,
    /// Row-major edge multiplicities.
    pub cells: Vec<u8>,
}

impl CanonicalForm {
    /// Stable text encoding: `RxC:` then one hex digit per cell for 0/1
    /// matrices, or comma-separated decimal when multiplicities occur.
    pub fn encode(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{}x{}:", self.rows_n, self.cols_n);
        if self.cells.iter().all(|&c| c <= 1) {
            for row in self.cells.chunks(self.cols_n.max(1)) {
                let mut val: u32 = 0;
                for &c in row {
                    val = (val << 1) | c as u32;
                }
                let _ = write!(out, "{val:x}.");
            }
        } else {
            for &c in &self.cells {
                let _ = write!(out, "{c},");
            }
        }
        out
    }
}

pub fn canonical_form(g: &BipGraph) -> CanonicalForm {
    canonical_form_with_orbit(g).0
}

/// Whether two graphs are isomorphic as unlabeled bipartite graphs. Complete
/// for connected graphs; for disconnected graphs a `true` answer is always
/// right while classes of separate components are not re-flipped.
pub fn are_isomorphic(g1: &BipGraph, g2: &BipGraph) -> bool {
    canonical_form(g1) == canonical_form(g2)
}

/// Canonical form plus the set of edges (as `(a, b)` endpoint pairs of `g`)
/// that map to the last nonzero cell of the canonical matrix under some
/// optimal labeling: the automorphism orbit of the canonical last edge.
pub(crate) fn canonical_form_with_orbit(g: &BipGraph) -> (CanonicalForm, BTreeSet<(usize, usize)>) {
    canonical_form_with_orbit_parts(g.a_count(), g.b_count(), g.edges())
}

/// The same computation on a bare edge list, for callers that have not built
/// a graph value yet.
pub(crate) fn canonical_form_with_orbit_parts(
    a: usize,
    b: usize,
    edges: &[(usize, usize)],
) -> (CanonicalForm, BTreeSet<(usize, usize)>) {
    let mut direct: Vec<Vec<u8>> = alloc::vec![alloc::vec![0; b]; a];
    for &(x, y) in edges {
        direct[x][y] = direct[x][y].saturating_add(1);
    }
    let fast = a <= 16 && b <= 16 && direct.iter().flatten().all(|&c| c <= 1);
    let run = |rows: &[Vec<u8>], cols: usize| {
        if fast {
            let masks: Vec<u16> = rows
                .iter()
                .map(|row| {
                    row.iter().enumerate().fold(0u16, |m, (j, &c)| m | ((c as u16) << j))
                })
                .collect();
            canon_matrix_masks(&masks, cols)
        } else {
            canon_matrix(rows, cols)
        }
    };
    if a < b {
        run(&direct, b)
    } else {
        let transposed: Vec<Vec<u8>> =
            (0..b).map(|y| (0..a).map(|x| direct[x][y]).collect()).collect();
        if b < a {
            let (form, orbit) = run(&transposed, a);
            (form, orbit.into_iter().map(|(r, c)| (c, r)).collect())
        } else {
            let (f1, o1) = run(&direct, b);
            let (f2, o2) = run(&transposed, a);
            let o2: BTreeSet<(usize, usize)> = o2.into_iter().map(|(r, c)| (c, r)).collect();
            match f1.cmp(&f2) {
                core::cmp::Ordering::Less => (f1, o1),
                core::cmp::Ordering::Greater => (f2, o2),
                core::cmp::Ordering::Equal => (f1, o1.union(&o2).copied().collect()),
            }
        }
    }
}

struct MaskSearch<'m> {
    rows: &'m [u16],
    best: Vec<u32>,
    leaves: Vec<(Vec<usize>, Vec<u16>)>,
}

/// Allocation-free inner loop for simple graphs with both sides at most 16;
/// computes the same form and orbit as the dense search.
fn canon_matrix_masks(rows: &[u16], cols: usize) -> (CanonicalForm, BTreeSet<(usize, usize)>) {
    let n = rows.len();
    let mut search = MaskSearch { rows, best: alloc::vec![u32::MAX; n], leaves: Vec::new() };
    let init_groups: [u16; 1] = [if cols == 0 { 0 } else { ((1u32 << cols) - 1) as u16 }];
    let groups: &[u16] = if cols == 0 { &[] } else { &init_groups };
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    mask_descend(&mut search, &mut chosen, 0, groups, false);
    let mut cells: Vec<u8> = Vec::with_capacity(n * cols);
    for &val in &search.best {
        for j in (0..cols).rev() {
            cells.push(((val >> j) & 1) as u8);
        }
    }
    let form = CanonicalForm { rows_n: n, cols_n: cols, cells: cells.clone() };
    let mut orbit = BTreeSet::new();
    if let Some(pos) = cells.iter().rposition(|&c| c != 0) {
        let (ri, ci) = (pos / cols.max(1), pos % cols.max(1));
        for (leaf_rows, leaf_groups) in &search.leaves {
            let row = leaf_rows[ri];
            let mut offset = 0;
            for &gm in leaf_groups {
                let size = gm.count_ones() as usize;
                if ci < offset + size {
                    let mut m = gm;
                    while m != 0 {
                        let col = m.trailing_zeros() as usize;
                        m &= m - 1;
                        orbit.insert((row, col));
                    }
                    break;
                }
                offset += size;
            }
        }
        let mut col_profiles = alloc::vec![0u16; cols];
        for (r, &mask) in rows.iter().enumerate() {
            let mut m = mask;
            while m != 0 {
                let c = m.trailing_zeros() as usize;
                m &= m - 1;
                col_profiles[c] |= 1 << r;
            }
        }
        let seed: Vec<(usize, usize)> = orbit.iter().copied().collect();
        for (r, c) in seed {
            for r2 in 0..n {
                if rows[r2] == rows[r] {
                    for c2 in 0..cols {
                        if col_profiles[c2] == col_profiles[c] {
                            orbit.insert((r2, c2));
                        }
                    }
                }
            }
        }
    }
    (form, orbit)
}

fn mask_descend(
    search: &mut MaskSearch<'_>,
    chosen: &mut Vec<usize>,
    used: u16,
    groups: &[u16],
    improved: bool,
) {
    use core::cmp::Ordering;
    let n = search.rows.len();
    if chosen.len() == n {
        if improved {
            search.leaves.clear();
        }
        search.leaves.push((chosen.clone(), groups.to_vec()));
        return;
    }
    let depth = chosen.len();
    for r in 0..n {
        if used & (1 << r) != 0 {
            continue;
        }
        if (0..r).any(|r2| used & (1 << r2) == 0 && search.rows[r2] == search.rows[r]) {
            continue;
        }
        let mut val: u32 = 0;
        let mut new_groups = [0u16; 17];
        let mut ng = 0;
        for &gm in groups {
            let ones = search.rows[r] & gm;
            let zeros = gm & !search.rows[r];
            let oc = ones.count_ones();
            val = (val << gm.count_ones()) | ((1u32 << oc) - 1);
            if zeros != 0 {
                new_groups[ng] = zeros;
                ng += 1;
            }
            if ones != 0 {
                new_groups[ng] = ones;
                ng += 1;
            }
        }
        let child_improved = match val.cmp(&search.best[depth]) {
            Ordering::Greater => continue,
            Ordering::Less => {
                search.best[depth] = val;
                for slot in &mut search.best[depth + 1..] {
                    *slot = u32::MAX;
                }
                true
            }
            Ordering::Equal => false,
        };
        chosen.push(r);
        mask_descend(search, chosen, used | (1 << r), &new_groups[..ng], child_improved);
        chosen.pop();
    }
}

struct Search<'m> {
    rows: &'m [Vec<u8>],
    cols: usize,
    best: Vec<Vec<u8>>,
    orbit_leaves: Vec<(Vec<usize>, Vec<Vec<usize>>)>,
}

fn canon_matrix(rows: &[Vec<u8>], cols: usize) -> (CanonicalForm, BTreeSet<(usize, usize)>) {
    let n = rows.len();
    let sentinel_row: Vec<u8> = alloc::vec![u8::MAX; cols + 1];
    let mut search =
        Search { rows, cols, best: alloc::vec![sentinel_row; n], orbit_leaves: Vec::new() };
    let init_groups: Vec<Vec<usize>> = if cols == 0 { Vec::new() } else { alloc::vec![(0..cols).collect()] };
    let mut chosen: Vec<usize> = Vec::new();
    let mut used = alloc::vec![false; n];
    descend(&mut search, &mut chosen, &mut used, init_groups, false);
    let cells: Vec<u8> = search.best.iter().flatten().copied().collect();
    let form = CanonicalForm { rows_n: n, cols_n: cols, cells: cells.clone() };
    let mut orbit = BTreeSet::new();
    if let Some(pos) = cells.iter().rposition(|&c| c != 0) {
        let (ri, ci) = (pos / cols.max(1), pos % cols.max(1));
        for (leaf_rows, leaf_groups) in &search.orbit_leaves {
            let row = leaf_rows[ri];
            let mut offset = 0;
            for group in leaf_groups {
                if ci < offset + group.len() {
                    for &col in group {
                        orbit.insert((row, col));
                    }
                    break;
                }
                offset += group.len();
            }
        }
        let seed: Vec<(usize, usize)> = orbit.iter().copied().collect();
        for (r, c) in seed {
            for r2 in 0..n {
                if rows[r2] == rows[r] {
                    for c2 in 0..cols {
                        if (0..n).all(|k| rows[k][c2] == rows[k][c]) {
                            orbit.insert((r2, c2));
                        }
                    }
                }
            }
        }
    }
    (form, orbit)
}

fn descend(
    search: &mut Search<'_>,
    chosen: &mut Vec<usize>,
    used: &mut [bool],
    groups: Vec<Vec<usize>>,
    improved: bool,
) {
    use core::cmp::Ordering;
    let n = search.rows.len();
    if chosen.len() == n {
        if improved {
            search.orbit_leaves.clear();
        }
        search.orbit_leaves.push((chosen.clone(), groups));
        return;
    }
    let depth = chosen.len();
    for r in 0..n {
        if used[r] {
            continue;
        }
        if (0..r).any(|r2| !used[r2] && search.rows[r2] == search.rows[r]) {
            continue;
        }
        let mut cand_row: Vec<u8> = Vec::with_capacity(search.cols);
        let mut new_groups: Vec<Vec<usize>> = Vec::new();
        for group in &groups {
            let mut parts: Vec<(u8, Vec<usize>)> = Vec::new();
            for &c in group {
                let v = search.rows[r][c];
                match parts.iter_mut().find(|(pv, _)| *pv == v) {
                    Some((_, list)) => list.push(c),
                    None => parts.push((v, alloc::vec![c])),
                }
            }
            parts.sort_by_key(|(v, _)| *v);
            for (v, list) in parts {
                for _ in 0..list.len() {
                    cand_row.push(v);
                }
                new_groups.push(list);
            }
        }
        let child_improved = match cand_row.cmp(&search.best[depth]) {
            Ordering::Greater => continue,
            Ordering::Less => {
                search.best[depth] = cand_row;
                for slot in &mut search.best[depth + 1..] {
                    *slot = alloc::vec![u8::MAX; search.cols + 1];
                }
                true
            }
            Ordering::Equal => false,
        };
        used[r] = true;
        chosen.push(r);
        descend(search, chosen, used, new_groups, child_improved);
        chosen.pop();
        used[r] = false;
    }
}
