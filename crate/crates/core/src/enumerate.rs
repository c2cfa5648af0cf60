//! Exhaustive enumeration of topologies on a labelled ground set, plus
//! canonicalization up to homeomorphism.
//!
//! Two strategies behind one iterator, both yielding the same deterministic
//! order (lexicographic over the off-diagonal entries read row-major, first
//! row most significant):
//!
//! * `n <= 4`: run through every off-diagonal bit pattern (at most 4096) and
//!   keep the transitive ones;
//! * `n >= 5`: depth-first assignment of one entry at a time, pruning as soon
//!   as the decided entries already violate transitivity.
//!
//! Parallel collection partitions the search space by the first matrix row
//! and concatenates chunk results in chunk order, so it returns exactly the
//! sequential sequence.

use std::collections::BTreeMap;
use std::collections::HashMap;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::preorder::{LabelSet, Topology, MAX_GROUND_SIZE};

/// Default cap on exhaustive enumeration. Raiseable per call, at a steep
/// exponential price.
pub const DEFAULT_ENUM_CAP: usize = 5;

/// Default cap on canonicalization, which walks all permutations.
pub const DEFAULT_CANONICAL_CAP: usize = 7;

/// Off-diagonal positions in row-major order.
fn positions(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

fn transitive(rows: &[u16]) -> bool {
    rows.iter()
        .all(|&ri| (0..rows.len()).all(|j| ri & (1 << j) == 0 || ri | rows[j] == ri))
}

struct DfsState {
    labels: LabelSet,
    positions: Vec<(usize, usize)>,
    rows: Vec<u16>,
    decided: Vec<u16>,
    /// next value to try at each depth (2 = exhausted)
    try_next: Vec<u8>,
    depth: usize,
    /// depths below `floor` are fixed by the chunk seed and never backtracked
    floor: usize,
    done: bool,
}

impl DfsState {
    fn new(labels: LabelSet) -> DfsState {
        let n = labels.len();
        DfsState {
            positions: positions(n),
            rows: (0..n).map(|i| 1 << i).collect(),
            decided: (0..n).map(|i| 1 << i).collect(),
            try_next: vec![0; n * n.saturating_sub(1)],
            depth: 0,
            floor: 0,
            done: false,
            labels,
        }
    }

    /// Fix the first `prefix.len()` positions to the given values. Returns
    /// a finished state if the seed already violates transitivity.
    fn seeded(labels: LabelSet, prefix: &[u8]) -> DfsState {
        let mut s = DfsState::new(labels);
        for &v in prefix {
            if !s.assign(v) {
                s.done = true;
                return s;
            }
            s.depth += 1;
        }
        s.floor = prefix.len();
        s
    }

    /// Assign the value at the current depth; undo and report false if the
    /// decided entries now contain a transitivity violation.
    fn assign(&mut self, v: u8) -> bool {
        let (i, j) = self.positions[self.depth];
        self.decided[i] |= 1 << j;
        if v == 1 {
            self.rows[i] |= 1 << j;
            // i <= j and a decided j <= k force i <= k
            if self.rows[j] & self.decided[j] & self.decided[i] & !self.rows[i] != 0 {
                self.unassign();
                return false;
            }
            // a decided k <= i forces k <= j
            for k in 0..self.rows.len() {
                if self.decided[k] & (1 << i) != 0
                    && self.rows[k] & (1 << i) != 0
                    && self.decided[k] & (1 << j) != 0
                    && self.rows[k] & (1 << j) == 0
                {
                    self.unassign();
                    return false;
                }
            }
        } else {
            // i <= k <= j with both decided forces the absent i <= j
            for k in 0..self.rows.len() {
                if self.decided[i] & (1 << k) != 0
                    && self.rows[i] & (1 << k) != 0
                    && self.decided[k] & (1 << j) != 0
                    && self.rows[k] & (1 << j) != 0
                {
                    self.unassign();
                    return false;
                }
            }
        }
        true
    }

    fn unassign(&mut self) {
        let (i, j) = self.positions[self.depth];
        self.decided[i] &= !(1 << j);
        self.rows[i] &= !(1 << j);
    }

    fn backtrack(&mut self) -> bool {
        while self.depth > self.floor {
            self.depth -= 1;
            self.unassign();
            if self.try_next[self.depth] <= 1 {
                return true;
            }
        }
        false
    }

    fn next_topology(&mut self) -> Option<Topology> {
        if self.done {
            return None;
        }
        loop {
            if self.depth == self.positions.len() {
                let t = Topology::from_rows_unchecked(self.labels.clone(), self.rows.clone());
                debug_assert!(transitive(t.rows()));
                if !self.backtrack() {
                    self.done = true;
                }
                return Some(t);
            }
            let mut advanced = false;
            while self.try_next[self.depth] <= 1 {
                let v = self.try_next[self.depth];
                self.try_next[self.depth] += 1;
                if self.assign(v) {
                    self.depth += 1;
                    if self.depth < self.positions.len() {
                        self.try_next[self.depth] = 0;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced && !self.backtrack() {
                self.done = true;
                return None;
            }
        }
    }
}

enum Inner {
    Filter { labels: LabelSet, positions: Vec<(usize, usize)>, next: u64, end: u64 },
    Dfs(Box<DfsState>),
}

/// Deterministic iterator over every topology on a fixed label set.
pub struct TopologyIterator {
    inner: Inner,
}

impl TopologyIterator {
    fn filter_range(labels: LabelSet, next: u64, end: u64) -> TopologyIterator {
        let positions = positions(labels.len());
        TopologyIterator { inner: Inner::Filter { labels, positions, next, end } }
    }
}

impl Iterator for TopologyIterator {
    type Item = Topology;

    fn next(&mut self) -> Option<Topology> {
        match &mut self.inner {
            Inner::Filter { labels, positions, next, end } => {
                let n = labels.len();
                let m = positions.len();
                while *next < *end {
                    let pattern = *next;
                    *next += 1;
                    let mut rows: Vec<u16> = (0..n).map(|i| 1 << i).collect();
                    for (k, &(i, j)) in positions.iter().enumerate() {
                        if pattern >> (m - 1 - k) & 1 != 0 {
                            rows[i] |= 1 << j;
                        }
                    }
                    if transitive(&rows) {
                        return Some(Topology::from_rows_unchecked(labels.clone(), rows));
                    }
                }
                None
            }
            Inner::Dfs(state) => state.next_topology(),
        }
    }
}

fn check_enum_size(n: usize, cap: usize) -> Result<()> {
    let cap = cap.min(MAX_GROUND_SIZE);
    if n > cap {
        return Err(Error::GroundSetTooLarge { got: n, max: cap });
    }
    Ok(())
}

/// All topologies on the given labels, capped at ground size `cap`.
pub fn all_topologies_capped(labels: &LabelSet, cap: usize) -> Result<TopologyIterator> {
    let n = labels.len();
    check_enum_size(n, cap)?;
    if n <= 4 {
        let m = (n * n.saturating_sub(1)) as u32;
        Ok(TopologyIterator::filter_range(labels.clone(), 0, 1u64 << m))
    } else {
        Ok(TopologyIterator { inner: Inner::Dfs(Box::new(DfsState::new(labels.clone()))) })
    }
}

/// All topologies on the given labels, up to the default ground-size cap.
pub fn all_topologies(labels: &LabelSet) -> Result<TopologyIterator> {
    all_topologies_capped(labels, DEFAULT_ENUM_CAP)
}

/// One chunk of the enumeration: topologies whose first matrix row matches
/// the seed assignment. Chunks in ascending seed order concatenate to the
/// full sequential order.
fn chunk(labels: &LabelSet, seed: u16) -> Vec<Topology> {
    let n = labels.len();
    let first_row = n - 1;
    let m = n * (n - 1);
    if n <= 4 {
        let width = (m - first_row) as u32;
        let lo = (seed as u64) << width;
        TopologyIterator::filter_range(labels.clone(), lo, lo + (1 << width)).collect()
    } else {
        let prefix: Vec<u8> =
            (0..first_row).map(|k| (seed >> (first_row - 1 - k) & 1) as u8).collect();
        let mut state = DfsState::seeded(labels.clone(), &prefix);
        std::iter::from_fn(move || state.next_topology()).collect()
    }
}

/// Collect the full enumeration, optionally fanning the first-row chunks out
/// in parallel. The result equals the sequential iterator's output exactly.
pub fn collect_all_capped(labels: &LabelSet, cap: usize, mode: ExecMode) -> Result<Vec<Topology>> {
    let n = labels.len();
    check_enum_size(n, cap)?;
    if n <= 1 {
        return Ok(all_topologies_capped(labels, cap)?.collect());
    }
    let seeds: Vec<u16> = (0..1u32 << (n - 1)).map(|s| s as u16).collect();
    let per = exec::map_collect(mode, seeds, |s| chunk(labels, s));
    Ok(per.into_iter().flatten().collect())
}

pub fn collect_all(labels: &LabelSet, mode: ExecMode) -> Result<Vec<Topology>> {
    collect_all_capped(labels, DEFAULT_ENUM_CAP, mode)
}

/// All admissible refinements of `t`, in enumeration order. `t` itself and
/// its finest admissible refinement always appear. The ground set comes from
/// the caller, so this enumerates without the default size cap; cost grows
/// steeply with ground size.
pub fn admissible_refinements(t: &Topology) -> Result<Vec<Topology>> {
    Ok(all_topologies_capped(t.labels(), MAX_GROUND_SIZE)?
        .filter(|c| c.is_admissible_for(t).unwrap())
        .collect())
}

/// A homeomorphism class: the least relabelled matrix as representative
/// (ground set renumbered to `0..n`), plus the number of distinct labelled
/// topologies in the class on a fixed ground set.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CanonicalClass {
    pub representative: Topology,
    pub orbit_size: u64,
}

/// Matrix order used for canonical representatives: row-major entrywise.
fn rows_cmp(a: &[u16], b: &[u16], n: usize) -> std::cmp::Ordering {
    for i in 0..n {
        for j in 0..n {
            let x = a[i] >> j & 1;
            let y = b[i] >> j & 1;
            if x != y {
                return x.cmp(&y);
            }
        }
    }
    std::cmp::Ordering::Equal
}

fn relabelled(rows: &[u16], perm: &[usize]) -> Vec<u16> {
    let n = rows.len();
    let mut out = vec![0u16; n];
    for i in 0..n {
        for j in 0..n {
            if rows[i] & (1 << j) != 0 {
                out[perm[i]] |= 1 << perm[j];
            }
        }
    }
    out
}

fn canonical_rows(rows: &[u16]) -> (Vec<u16>, u64) {
    let n = rows.len();
    let mut best = rows.to_vec();
    let mut distinct: std::collections::HashSet<Vec<u16>> = std::collections::HashSet::new();
    for perm in (0..n).permutations(n) {
        let img = relabelled(rows, &perm);
        if rows_cmp(&img, &best, n) == std::cmp::Ordering::Less {
            best = img.clone();
        }
        distinct.insert(img);
    }
    (best, distinct.len().max(1) as u64)
}

/// Canonical form by brute force over all label permutations. Two
/// topologies are homeomorphic iff their representatives have equal
/// matrices.
pub fn canonical_form_capped(t: &Topology, cap: usize) -> Result<CanonicalClass> {
    let n = t.size();
    let cap = cap.min(MAX_GROUND_SIZE);
    if n > cap {
        return Err(Error::GroundSetTooLarge { got: n, max: cap });
    }
    let (best, orbit) = canonical_rows(t.rows());
    Ok(CanonicalClass {
        representative: Topology::from_rows_unchecked(LabelSet::from_range(n), best),
        orbit_size: orbit,
    })
}

pub fn canonical_form(t: &Topology) -> Result<CanonicalClass> {
    canonical_form_capped(t, DEFAULT_CANONICAL_CAP)
}

/// All homeomorphism classes on `n` points, ordered by first appearance in
/// the enumeration. Orbit sizes sum to the labelled count.
pub fn canonical_classes(n: usize, mode: ExecMode) -> Result<Vec<CanonicalClass>> {
    canonical_classes_capped(n, DEFAULT_ENUM_CAP, mode)
}

/// Same as [`canonical_classes`] with an explicit ground-size cap. Cost is
/// the full labelled enumeration times `n!` relabellings per topology.
pub fn canonical_classes_capped(n: usize, cap: usize, mode: ExecMode) -> Result<Vec<CanonicalClass>> {
    let all = collect_all_capped(&LabelSet::from_range(n), cap, mode)?;
    let canon = exec::map_collect(mode, all, |t| canonical_rows(t.rows()).0);
    let mut first_seen: HashMap<Vec<u16>, usize> = HashMap::new();
    let mut classes: Vec<(Vec<u16>, u64)> = Vec::new();
    for rows in canon {
        match first_seen.get(&rows) {
            Some(&idx) => classes[idx].1 += 1,
            None => {
                first_seen.insert(rows.clone(), classes.len());
                classes.push((rows, 1));
            }
        }
    }
    Ok(classes
        .into_iter()
        .map(|(rows, count)| CanonicalClass {
            representative: Topology::from_rows_unchecked(LabelSet::from_range(n), rows),
            orbit_size: count,
        })
        .collect())
}

/// Histogram of the degree (classes minus components) over all topologies
/// on `n` points.
pub fn count_by_grading(n: usize, mode: ExecMode) -> Result<BTreeMap<usize, u64>> {
    count_by_grading_capped(n, DEFAULT_ENUM_CAP, mode)
}

/// Same as [`count_by_grading`] with an explicit ground-size cap.
pub fn count_by_grading_capped(n: usize, cap: usize, mode: ExecMode) -> Result<BTreeMap<usize, u64>> {
    let all = collect_all_capped(&LabelSet::from_range(n), cap, mode)?;
    let gradings = exec::map_collect(mode, all, |t| t.grading());
    let mut hist = BTreeMap::new();
    for d in gradings {
        *hist.entry(d).or_insert(0u64) += 1;
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preorder::transitive_closure;

    /// Known point counts for labelled topologies and homeomorphism classes.
    const LABELLED: [u64; 6] = [1, 1, 4, 29, 355, 6942];
    const CLASSES: [u64; 6] = [1, 1, 3, 9, 33, 139];

    /// Independent oracle: generate off-diagonal patterns, keep relations
    /// whose closure changes nothing.
    fn brute_force(n: usize) -> Vec<Vec<Vec<bool>>> {
        let m = n * n.saturating_sub(1);
        let mut out = Vec::new();
        for pat in 0u64..1 << m {
            let mut rel = vec![vec![false; n]; n];
            let mut k = 0;
            for i in 0..n {
                rel[i][i] = true;
                for j in 0..n {
                    if i != j {
                        if pat >> (m - 1 - k) & 1 != 0 {
                            rel[i][j] = true;
                        }
                        k += 1;
                    }
                }
            }
            if transitive_closure(&rel) == rel {
                out.push(rel);
            }
        }
        out
    }

    #[test]
    fn iterator_matches_brute_force_oracle() {
        for n in 0..=4 {
            let labels = LabelSet::from_range(n);
            let got: Vec<Vec<Vec<bool>>> =
                all_topologies(&labels).unwrap().map(|t| t.matrix()).collect();
            assert_eq!(got, brute_force(n), "n={n}");
        }
    }

    #[test]
    fn labelled_counts() {
        for (n, &want) in LABELLED.iter().enumerate().take(5) {
            assert_eq!(all_topologies(&LabelSet::from_range(n)).unwrap().count() as u64, want);
        }
    }

    #[test]
    fn dfs_path_agrees_with_filter_path_and_known_count() {
        // force the pruned search on a size the filter path can still handle
        let labels = LabelSet::from_range(4);
        let dfs: Vec<Topology> = TopologyIterator {
            inner: Inner::Dfs(Box::new(DfsState::new(labels.clone()))),
        }
        .collect();
        let filter: Vec<Topology> = all_topologies(&labels).unwrap().collect();
        assert_eq!(dfs, filter);
        assert_eq!(
            all_topologies(&LabelSet::from_range(5)).unwrap().count() as u64,
            LABELLED[5]
        );
    }

    #[test]
    fn parallel_collection_preserves_order() {
        for n in 2..=5 {
            let labels = LabelSet::from_range(n);
            let seq: Vec<Topology> = all_topologies(&labels).unwrap().collect();
            assert_eq!(collect_all(&labels, ExecMode::Sequential).unwrap(), seq);
            assert_eq!(collect_all(&labels, ExecMode::Parallel).unwrap(), seq);
        }
    }

    #[test]
    fn enumeration_respects_caps() {
        assert_eq!(
            all_topologies(&LabelSet::from_range(6)).err(),
            Some(Error::GroundSetTooLarge { got: 6, max: 5 })
        );
        assert!(all_topologies_capped(&LabelSet::from_range(6), 6).is_ok());
    }

    #[test]
    fn labels_survive_enumeration() {
        let labels = LabelSet::from([3, 7]);
        let all: Vec<Topology> = all_topologies(&labels).unwrap().collect();
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|t| t.labels() == &labels));
    }

    #[test]
    fn refinement_lists_frozen() {
        let chain = Topology::chain(LabelSet::from_range(2));
        let refs = admissible_refinements(&chain).unwrap();
        assert_eq!(refs, vec![Topology::discrete(LabelSet::from_range(2)), chain.clone()]);
        let coarse = Topology::coarse(LabelSet::from_range(2));
        assert_eq!(admissible_refinements(&coarse).unwrap(), vec![coarse]);
    }

    #[test]
    fn refinements_contain_self_and_finest() {
        for t in all_topologies(&LabelSet::from_range(3)).unwrap() {
            let refs = admissible_refinements(&t).unwrap();
            assert!(refs.contains(&t));
            assert!(refs.contains(&t.finest_admissible()));
        }
    }

    #[test]
    fn canonical_form_identifies_homeomorphic_relabellings() {
        let up = Topology::chain(LabelSet::from_range(2));
        let down = Topology::generated_by(
            LabelSet::from_range(2),
            &[vec![false, false], vec![true, false]],
        )
        .unwrap();
        let a = canonical_form(&up).unwrap();
        let b = canonical_form(&down).unwrap();
        assert_eq!(a.representative, b.representative);
        assert_eq!(a.orbit_size, 2);
        assert_eq!(canonical_form(&Topology::coarse(LabelSet::from_range(2))).unwrap().orbit_size, 1);
        // idempotent
        let again = canonical_form(&a.representative).unwrap();
        assert_eq!(again.representative, a.representative);
    }

    #[test]
    fn canonical_form_cap() {
        let t = Topology::discrete(LabelSet::from_range(8));
        assert_eq!(
            canonical_form(&t).err(),
            Some(Error::GroundSetTooLarge { got: 8, max: 7 })
        );
    }

    #[test]
    fn class_counts_and_orbit_sums() {
        for n in 0..=4 {
            let classes = canonical_classes(n, ExecMode::Parallel).unwrap();
            assert_eq!(classes.len() as u64, CLASSES[n], "classes at n={n}");
            let total: u64 = classes.iter().map(|c| c.orbit_size).sum();
            assert_eq!(total, LABELLED[n], "orbit sizes at n={n}");
            for c in &classes {
                let again = canonical_form(&c.representative).unwrap();
                assert_eq!(again.representative, c.representative);
                assert_eq!(again.orbit_size, c.orbit_size);
            }
        }
    }

    #[test]
    fn class_count_n5() {
        let classes = canonical_classes(5, ExecMode::Parallel).unwrap();
        assert_eq!(classes.len() as u64, CLASSES[5]);
        assert_eq!(classes.iter().map(|c| c.orbit_size).sum::<u64>(), LABELLED[5]);
    }

    #[test]
    fn grading_histogram_frozen() {
        let h2 = count_by_grading(2, ExecMode::Sequential).unwrap();
        assert_eq!(h2, BTreeMap::from([(0, 2), (1, 2)]));
        let h1 = count_by_grading(1, ExecMode::Sequential).unwrap();
        assert_eq!(h1, BTreeMap::from([(0, 1)]));
        // histogram totals match the labelled counts
        for n in 0..=4 {
            let h = count_by_grading(n, ExecMode::Parallel).unwrap();
            assert_eq!(h.values().sum::<u64>(), LABELLED[n]);
        }
    }
}
