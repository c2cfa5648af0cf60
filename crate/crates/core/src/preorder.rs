//! Finite topologies on labelled ground sets, stored as quasi-orders.
//!
//! A finite topology is encoded by its specialization quasi-order: `a <= b`
//! iff every open set containing `a` also contains `b`. Open sets are then
//! exactly the upper ideals of the quasi-order, and every reflexive
//! transitive relation arises this way, so [`Topology`] stores the relation
//! and nothing else. Ground sets keep their original labels through every
//! operation (restriction does not renumber), and equality is labelled:
//! same label list, same relation matrix.
//!
//! The relation is a dense boolean matrix with each row packed into a `u16`
//! bitmask, which caps ground sets at 16 labels and makes closure, upper
//! ideal tests, and subset sweeps cheap word operations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on ground-set size, imposed by the `u16` row masks.
pub const MAX_GROUND_SIZE: usize = 16;

/// A point of a ground set. Labels are arbitrary non-negative integers and
/// survive restriction and disjoint union unchanged.
#[derive(
    Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite set of labels, kept sorted ascending and deduplicated.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct LabelSet(Vec<Label>);

// incoming arrays may be unsorted or carry duplicates; normalize on entry
impl<'de> Deserialize<'de> for LabelSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(LabelSet::new(Vec::<Label>::deserialize(d)?))
    }
}

impl LabelSet {
    pub fn new<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        let mut v: Vec<Label> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        LabelSet(v)
    }

    /// The ground set `{0, 1, .., n-1}`.
    pub fn from_range(n: usize) -> Self {
        LabelSet((0..n as u32).map(Label).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, label: Label) -> bool {
        self.0.binary_search(&label).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Label> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Label] {
        &self.0
    }

    pub fn union(&self, other: &LabelSet) -> LabelSet {
        LabelSet::new(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &LabelSet) -> LabelSet {
        LabelSet(self.iter().filter(|l| other.contains(*l)).collect())
    }

    pub fn difference(&self, other: &LabelSet) -> LabelSet {
        LabelSet(self.iter().filter(|l| !other.contains(*l)).collect())
    }

    pub fn is_subset_of(&self, other: &LabelSet) -> bool {
        self.iter().all(|l| other.contains(l))
    }

    pub fn is_disjoint_from(&self, other: &LabelSet) -> bool {
        self.iter().all(|l| !other.contains(l))
    }

    /// First label present in both sets, if any.
    pub fn first_common(&self, other: &LabelSet) -> Option<Label> {
        self.iter().find(|l| other.contains(*l))
    }
}

impl FromIterator<Label> for LabelSet {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        LabelSet::new(iter)
    }
}

impl FromIterator<u32> for LabelSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        LabelSet::new(iter.into_iter().map(Label))
    }
}

impl<const N: usize> From<[u32; N]> for LabelSet {
    fn from(arr: [u32; N]) -> Self {
        arr.into_iter().collect()
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// Reflexive-transitive closure of a square boolean matrix: the smallest
/// transitive relation containing the input together with the identity.
/// Idempotent. Panics if the matrix is not square.
pub fn transitive_closure(rel: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = rel.len();
    assert!(rel.iter().all(|row| row.len() == n), "matrix must be square");
    let mut m: Vec<Vec<bool>> = rel.to_vec();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = true;
    }
    for j in 0..n {
        for i in 0..n {
            if m[i][j] {
                for k in 0..n {
                    if m[j][k] {
                        m[i][k] = true;
                    }
                }
            }
        }
    }
    m
}

/// Warshall closure on packed rows, in place. Assumes the diagonal is set.
pub(crate) fn close_rows(rows: &mut [u16]) {
    let n = rows.len();
    for j in 0..n {
        for i in 0..n {
            if rows[i] & (1 << j) != 0 {
                rows[i] |= rows[j];
            }
        }
    }
}

/// Serialized form: `labels` ascending, `leq` a 0/1 matrix in label order.
#[derive(Serialize, Deserialize)]
struct TopologyRepr {
    labels: Vec<u32>,
    leq: Vec<Vec<u8>>,
}

/// A finite topology on a labelled ground set, as its specialization
/// quasi-order. Immutable after construction; all invariants (reflexive,
/// transitive, at most 16 labels) are checked by the constructors.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "TopologyRepr", into = "TopologyRepr")]
pub struct Topology {
    labels: LabelSet,
    rows: Vec<u16>,
}

impl Topology {
    /// Validating constructor: `leq[i][j]` must already be reflexive and
    /// transitive, with rows and columns in the order of `labels`.
    pub fn new(labels: LabelSet, leq: &[Vec<bool>]) -> Result<Topology> {
        let n = labels.len();
        if n > MAX_GROUND_SIZE {
            return Err(Error::GroundSetTooLarge { got: n, max: MAX_GROUND_SIZE });
        }
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::MatrixShape { expected: n });
        }
        let mut rows = vec![0u16; n];
        for (i, row) in leq.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v {
                    rows[i] |= 1 << j;
                }
            }
        }
        for (i, &r) in rows.iter().enumerate() {
            if r & (1 << i) == 0 {
                return Err(Error::NotReflexive { position: i });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if rows[a] & (1 << b) != 0 && rows[a] | rows[b] != rows[a] {
                    let c = (0..n)
                        .find(|&c| rows[b] & (1 << c) != 0 && rows[a] & (1 << c) == 0)
                        .unwrap();
                    return Err(Error::NotTransitive { a, b, c });
                }
            }
        }
        Ok(Topology { labels, rows })
    }

    /// Builds the topology generated by an arbitrary relation: takes the
    /// reflexive-transitive closure first, then validates size and shape.
    pub fn generated_by(labels: LabelSet, rel: &[Vec<bool>]) -> Result<Topology> {
        let n = labels.len();
        if n > MAX_GROUND_SIZE {
            return Err(Error::GroundSetTooLarge { got: n, max: MAX_GROUND_SIZE });
        }
        if rel.len() != n || rel.iter().any(|row| row.len() != n) {
            return Err(Error::MatrixShape { expected: n });
        }
        let closed = transitive_closure(rel);
        Topology::new(labels, &closed)
    }

    /// No validation at all; callers guarantee the invariants (or, in the
    /// verifier's fault-injection paths, deliberately break them).
    pub(crate) fn from_rows_unchecked(labels: LabelSet, rows: Vec<u16>) -> Topology {
        Topology { labels, rows }
    }

    pub fn empty() -> Topology {
        Topology { labels: LabelSet::default(), rows: Vec::new() }
    }

    pub fn point(label: Label) -> Topology {
        Topology { labels: LabelSet::new([label]), rows: vec![1] }
    }

    /// Discrete topology: every subset open, order is equality.
    pub fn discrete(labels: LabelSet) -> Topology {
        let n = labels.len();
        Topology { labels, rows: (0..n).map(|i| 1 << i).collect() }
    }

    /// Coarse topology: only the empty set and the whole set are open.
    pub fn coarse(labels: LabelSet) -> Topology {
        let n = labels.len();
        let full = if n == 0 { 0 } else { (1u32 << n) - 1 } as u16;
        Topology { labels, rows: vec![full; n] }
    }

    /// Total order along ascending labels.
    pub fn chain(labels: LabelSet) -> Topology {
        let n = labels.len();
        let full = if n == 0 { 0u32 } else { (1u32 << n) - 1 };
        Topology { labels, rows: (0..n).map(|i| (full & !((1u32 << i) - 1)) as u16).collect() }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn matrix(&self) -> Vec<Vec<bool>> {
        let n = self.size();
        (0..n).map(|i| (0..n).map(|j| self.rows[i] & (1 << j) != 0).collect()).collect()
    }

    pub(crate) fn rows(&self) -> &[u16] {
        &self.rows
    }

    pub(crate) fn pos(&self, label: Label) -> Option<usize> {
        self.labels.as_slice().binary_search(&label).ok()
    }

    /// Position bitmask for a subset of the ground set.
    pub(crate) fn mask_of(&self, set: &LabelSet) -> Result<u16> {
        let mut mask = 0u16;
        for l in set.iter() {
            match self.pos(l) {
                Some(i) => mask |= 1 << i,
                None => return Err(Error::LabelNotInGroundSet { label: l.0 }),
            }
        }
        Ok(mask)
    }

    pub(crate) fn set_of(&self, mask: u16) -> LabelSet {
        LabelSet((0..self.size()).filter(|i| mask & (1 << i) != 0).map(|i| self.labels.0[i]).collect())
    }

    /// Specialization order by label: `a <= b` iff every open containing `a`
    /// contains `b`.
    pub fn leq(&self, a: Label, b: Label) -> Result<bool> {
        let i = self.pos(a).ok_or(Error::LabelNotInGroundSet { label: a.0 })?;
        let j = self.pos(b).ok_or(Error::LabelNotInGroundSet { label: b.0 })?;
        Ok(self.rows[i] & (1 << j) != 0)
    }

    pub(crate) fn mask_is_open(&self, mask: u16) -> bool {
        (0..self.size()).all(|i| mask & (1 << i) == 0 || self.rows[i] & !mask == 0)
    }

    pub fn is_open(&self, set: &LabelSet) -> Result<bool> {
        Ok(self.mask_is_open(self.mask_of(set)?))
    }

    /// All open sets, i.e. all upper ideals, in ascending bitmask order
    /// (so the empty set comes first and the whole ground set last).
    pub fn open_sets(&self) -> Vec<OpenSet> {
        let n = self.size();
        (0..1u32 << n)
            .map(|m| m as u16)
            .filter(|&m| self.mask_is_open(m))
            .map(|m| OpenSet { members: self.set_of(m) })
            .collect()
    }

    /// Induced topology on a subset, keeping the original labels. The
    /// submatrix of a quasi-order is again a quasi-order, so no re-closure.
    pub fn restrict(&self, subset: &LabelSet) -> Result<Topology> {
        let positions: Vec<usize> = subset
            .iter()
            .map(|l| self.pos(l).ok_or(Error::LabelNotInGroundSet { label: l.0 }))
            .collect::<Result<_>>()?;
        let rows = positions
            .iter()
            .map(|&i| {
                let mut r = 0u16;
                for (b, &j) in positions.iter().enumerate() {
                    if self.rows[i] & (1 << j) != 0 {
                        r |= 1 << b;
                    }
                }
                r
            })
            .collect();
        Ok(Topology { labels: subset.clone(), rows })
    }

    /// Sum topology on the disjoint union of the ground sets: no relation
    /// between the parts.
    pub fn disjoint_union(&self, other: &Topology) -> Result<Topology> {
        if let Some(l) = self.labels.first_common(&other.labels) {
            return Err(Error::LabelCollision { label: l.0 });
        }
        let merged = self.labels.union(&other.labels);
        let n = merged.len();
        if n > MAX_GROUND_SIZE {
            return Err(Error::GroundSetTooLarge { got: n, max: MAX_GROUND_SIZE });
        }
        // merged position -> (source topology, source position)
        let locate: Vec<(&Topology, usize)> = merged
            .iter()
            .map(|l| match self.pos(l) {
                Some(i) => (self, i),
                None => (other, other.pos(l).unwrap()),
            })
            .collect();
        let rows = locate
            .iter()
            .map(|&(t, i)| {
                let mut r = 0u16;
                for (b, &(u, j)) in locate.iter().enumerate() {
                    if std::ptr::eq(t, u) && t.rows[i] & (1 << j) != 0 {
                        r |= 1 << b;
                    }
                }
                r
            })
            .collect();
        Ok(Topology { labels: merged, rows })
    }

    /// True iff this topology refines `coarser`: every relation here also
    /// holds there, equivalently every `coarser`-open set is open here.
    pub fn is_finer_than(&self, coarser: &Topology) -> Result<bool> {
        if self.labels != coarser.labels {
            return Err(Error::GroundSetMismatch);
        }
        Ok(self.rows.iter().zip(&coarser.rows).all(|(&a, &b)| a & !b == 0))
    }

    /// Quotient of this topology by a finer one: the closure of the relation
    /// holding at `(x, y)` when `x <= y` here or `y <= x` in `refinement`.
    pub fn quotient(&self, refinement: &Topology) -> Result<Topology> {
        if !refinement.is_finer_than(self)? {
            return Err(Error::NotFiner);
        }
        let n = self.size();
        let mut rows = self.rows.clone();
        for y in 0..n {
            for x in 0..n {
                if refinement.rows[y] & (1 << x) != 0 {
                    rows[x] |= 1 << y;
                }
            }
        }
        close_rows(&mut rows);
        Ok(Topology { labels: self.labels.clone(), rows })
    }

    fn mutual_mask(&self, i: usize) -> u16 {
        let mut m = 0u16;
        for j in 0..self.size() {
            if self.rows[i] & (1 << j) != 0 && self.rows[j] & (1 << i) != 0 {
                m |= 1 << j;
            }
        }
        m
    }

    /// Group positions into blocks by a complete system of masks, in order of
    /// least member.
    fn blocks_from(&self, mask_of: impl Fn(usize) -> u16) -> Partition {
        let mut blocks = Vec::new();
        let mut seen = 0u16;
        for i in 0..self.size() {
            if seen & (1 << i) == 0 {
                let m = mask_of(i);
                seen |= m;
                blocks.push(self.set_of(m));
            }
        }
        Partition { blocks }
    }

    /// Classes of mutual specialization (`x <= y` and `y <= x`).
    pub fn equivalence_classes(&self) -> Partition {
        self.blocks_from(|i| self.mutual_mask(i))
    }

    /// Components of the symmetrized relation's reachability.
    pub fn connected_components(&self) -> Partition {
        let n = self.size();
        let mut sym = vec![0u16; n];
        for i in 0..n {
            sym[i] |= self.rows[i];
            for j in 0..n {
                if self.rows[j] & (1 << i) != 0 {
                    sym[i] |= 1 << j;
                }
            }
        }
        close_rows(&mut sym);
        self.blocks_from(|i| sym[i])
    }

    /// Admissibility of `self` as a refinement of `base`: finer, induces the
    /// same topology on each of its connected components, and the classes of
    /// the quotient are exactly those components. The component condition
    /// suffices for all connected subsets, since any connected subset lies
    /// inside one component.
    pub fn is_admissible_for(&self, base: &Topology) -> Result<bool> {
        if !self.is_finer_than(base)? {
            return Ok(false);
        }
        let components = self.connected_components();
        for block in components.blocks() {
            if self.restrict(block).unwrap() != base.restrict(block).unwrap() {
                return Ok(false);
            }
        }
        Ok(base.quotient(self).unwrap().equivalence_classes() == components)
    }

    /// The finest admissible refinement: mutual-specialization classes made
    /// coarse, no relation between classes. Quotienting by it gives back the
    /// original topology, and its grading is zero.
    pub fn finest_admissible(&self) -> Topology {
        let rows = (0..self.size()).map(|i| self.mutual_mask(i)).collect();
        Topology { labels: self.labels.clone(), rows }
    }

    /// Degree: number of mutual-specialization classes minus number of
    /// connected components.
    pub fn grading(&self) -> usize {
        self.equivalence_classes().len() - self.connected_components().len()
    }

    /// True iff the relation equals its converse (every component coarse,
    /// equivalently degree zero).
    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.rows[i] & (1 << j) != 0 || self.rows[j] & (1 << i) == 0))
    }

    /// Converse relation; a quasi-order again, so no re-closure needed.
    pub(crate) fn transpose(&self) -> Topology {
        let n = self.size();
        let rows = (0..n)
            .map(|i| {
                let mut r = 0u16;
                for j in 0..n {
                    if self.rows[j] & (1 << i) != 0 {
                        r |= 1 << j;
                    }
                }
                r
            })
            .collect();
        Topology { labels: self.labels.clone(), rows }
    }

    /// Transitive closure of the entrywise union of two relations on the
    /// same ground set. Fault-injection helper.
    pub(crate) fn union_closed(&self, other: &Topology) -> Result<Topology> {
        if self.labels != other.labels {
            return Err(Error::GroundSetMismatch);
        }
        let mut rows: Vec<u16> =
            self.rows.iter().zip(&other.rows).map(|(&a, &b)| a | b).collect();
        close_rows(&mut rows);
        Ok(Topology { labels: self.labels.clone(), rows })
    }

    /// The relation with one extra pair `a <= b` adjoined, re-closed.
    /// Fault-injection helper.
    pub(crate) fn with_pair_closed(&self, a: Label, b: Label) -> Result<Topology> {
        let i = self.pos(a).ok_or(Error::LabelNotInGroundSet { label: a.0 })?;
        let j = self.pos(b).ok_or(Error::LabelNotInGroundSet { label: b.0 })?;
        let mut rows = self.rows.clone();
        rows[i] |= 1 << j;
        close_rows(&mut rows);
        Ok(Topology { labels: self.labels.clone(), rows })
    }
}

impl fmt::Debug for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Topology{:?}[", self.labels)?;
        let mut first = true;
        for i in 0..self.size() {
            for j in 0..self.size() {
                if i != j && self.rows[i] & (1 << j) != 0 {
                    if !first {
                        write!(f, " ")?;
                    }
                    write!(f, "{}<={}", self.labels.0[i], self.labels.0[j])?;
                    first = false;
                }
            }
        }
        write!(f, "]")
    }
}

impl TryFrom<TopologyRepr> for Topology {
    type Error = Error;

    fn try_from(repr: TopologyRepr) -> Result<Topology> {
        if repr.labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MatrixShape { expected: repr.labels.len() });
        }
        let labels = LabelSet(repr.labels.into_iter().map(Label).collect());
        let n = labels.len();
        let mut matrix = vec![vec![false; n]; n];
        if repr.leq.len() != n {
            return Err(Error::MatrixShape { expected: n });
        }
        for (i, row) in repr.leq.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MatrixShape { expected: n });
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => matrix[i][j] = true,
                    _ => return Err(Error::MatrixShape { expected: n }),
                }
            }
        }
        Topology::new(labels, &matrix)
    }
}

impl From<Topology> for TopologyRepr {
    fn from(t: Topology) -> TopologyRepr {
        let leq = t.matrix().iter().map(|row| row.iter().map(|&b| b as u8).collect()).collect();
        TopologyRepr { labels: t.labels.iter().map(|l| l.0).collect(), leq }
    }
}

/// An open set of a specific topology, produced by [`Topology::open_sets`]
/// or checked by [`OpenSet::new`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OpenSet {
    members: LabelSet,
}

impl OpenSet {
    pub fn new(topology: &Topology, members: LabelSet) -> Result<OpenSet> {
        let mask = topology.mask_of(&members)?;
        if !topology.mask_is_open(mask) {
            return Err(Error::NotOpen);
        }
        Ok(OpenSet { members })
    }

    pub fn members(&self) -> &LabelSet {
        &self.members
    }

    pub fn into_members(self) -> LabelSet {
        self.members
    }
}

/// A partition of a ground set; blocks are ordered by least member.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Partition {
    blocks: Vec<LabelSet>,
}

impl Partition {
    pub fn blocks(&self) -> &[LabelSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Serialized form of an admissible pair.
#[derive(Serialize, Deserialize)]
struct PairRepr {
    base: Topology,
    refinement: Topology,
}

/// A topology together with an admissible refinement of it, validated at
/// construction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "PairRepr", into = "PairRepr")]
pub struct AdmissiblePair {
    base: Topology,
    refinement: Topology,
}

impl AdmissiblePair {
    pub fn new(base: Topology, refinement: Topology) -> Result<AdmissiblePair> {
        if !refinement.is_admissible_for(&base)? {
            return Err(Error::NotAdmissible);
        }
        Ok(AdmissiblePair { base, refinement })
    }

    /// For fault-injection and hot loops whose inputs are admissible by
    /// construction.
    pub(crate) fn new_unchecked(base: Topology, refinement: Topology) -> AdmissiblePair {
        AdmissiblePair { base, refinement }
    }

    pub fn base(&self) -> &Topology {
        &self.base
    }

    pub fn refinement(&self) -> &Topology {
        &self.refinement
    }

    pub fn into_parts(self) -> (Topology, Topology) {
        (self.base, self.refinement)
    }
}

impl TryFrom<PairRepr> for AdmissiblePair {
    type Error = Error;

    fn try_from(repr: PairRepr) -> Result<AdmissiblePair> {
        AdmissiblePair::new(repr.base, repr.refinement)
    }
}

impl From<AdmissiblePair> for PairRepr {
    fn from(p: AdmissiblePair) -> PairRepr {
        PairRepr { base: p.base, refinement: p.refinement }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2() -> Topology {
        Topology::chain(LabelSet::from([0, 1]))
    }

    fn matrix_from_pairs(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; n]; n];
        for &(a, b) in pairs {
            m[a][b] = true;
        }
        m
    }

    /// Independent closure oracle: boolean matrix squaring to fixpoint.
    fn closure_by_squaring(rel: &[Vec<bool>]) -> Vec<Vec<bool>> {
        let n = rel.len();
        let mut m = rel.to_vec();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = true;
        }
        loop {
            let mut next = m.clone();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if m[i][k] && m[k][j] {
                            next[i][j] = true;
                        }
                    }
                }
            }
            if next == m {
                return m;
            }
            m = next;
        }
    }

    #[test]
    fn closure_matches_squaring_oracle() {
        // all relations on 3 points, off-diagonal bits from a counter
        for pat in 0u32..64 {
            let mut rel = vec![vec![false; 3]; 3];
            let mut k = 0;
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        rel[i][j] = pat & (1 << k) != 0;
                        k += 1;
                    }
                }
            }
            assert_eq!(transitive_closure(&rel), closure_by_squaring(&rel), "pattern {pat}");
        }
    }

    #[test]
    fn closure_frozen_example() {
        // 0->1, 1->2 on three points closes to the full chain
        let rel = matrix_from_pairs(3, &[(0, 1), (1, 2)]);
        let closed = transitive_closure(&rel);
        assert_eq!(closed, Topology::chain(LabelSet::from_range(3)).matrix());
        assert_eq!(transitive_closure(&closed), closed, "idempotent");
    }

    #[test]
    fn make_topology_rejects_unclosed_relation() {
        let labels = LabelSet::from_range(3);
        let mut m = matrix_from_pairs(3, &[(0, 1), (1, 2)]);
        for i in 0..3 {
            m[i][i] = true;
        }
        assert_eq!(
            Topology::new(labels.clone(), &m),
            Err(Error::NotTransitive { a: 0, b: 1, c: 2 })
        );
        assert!(Topology::generated_by(labels, &m).is_ok());
    }

    #[test]
    fn make_topology_rejects_missing_diagonal() {
        let labels = LabelSet::from([0, 1]);
        let m = matrix_from_pairs(2, &[(0, 0)]);
        assert_eq!(Topology::new(labels, &m), Err(Error::NotReflexive { position: 1 }));
    }

    #[test]
    fn ground_set_cap() {
        let labels = LabelSet::from_range(17);
        let m = vec![vec![false; 17]; 17];
        assert_eq!(
            Topology::new(labels, &m),
            Err(Error::GroundSetTooLarge { got: 17, max: 16 })
        );
    }

    /// Subset-filter oracle for open sets: upper ideals by definition.
    fn open_sets_oracle(t: &Topology) -> Vec<LabelSet> {
        let labels: Vec<Label> = t.labels().iter().collect();
        let n = labels.len();
        let mut out = Vec::new();
        'subsets: for m in 0u32..1 << n {
            let set: LabelSet = labels
                .iter()
                .enumerate()
                .filter(|(i, _)| m & (1 << i) != 0)
                .map(|(_, &l)| l)
                .collect();
            for y in set.iter() {
                for z in t.labels().iter() {
                    if t.leq(y, z).unwrap() && !set.contains(z) {
                        continue 'subsets;
                    }
                }
            }
            out.push(set);
        }
        out
    }

    #[test]
    fn open_sets_match_filter_oracle() {
        for t in [
            chain2(),
            Topology::coarse(LabelSet::from_range(3)),
            Topology::chain(LabelSet::from_range(3)),
            Topology::discrete(LabelSet::from_range(4)),
            Topology::generated_by(LabelSet::from_range(3), &matrix_from_pairs(3, &[(0, 1), (2, 1)]))
                .unwrap(),
        ] {
            let got: Vec<LabelSet> = t.open_sets().into_iter().map(OpenSet::into_members).collect();
            let mut want = open_sets_oracle(&t);
            want.sort_by_key(|s| t.mask_of(s).unwrap());
            assert_eq!(got, want, "{t:?}");
        }
    }

    #[test]
    fn open_sets_frozen_examples() {
        let opens: Vec<LabelSet> =
            chain2().open_sets().into_iter().map(OpenSet::into_members).collect();
        assert_eq!(opens, vec![LabelSet::default(), LabelSet::from([1]), LabelSet::from([0, 1])]);
        assert_eq!(Topology::coarse(LabelSet::from_range(3)).open_sets().len(), 2);
        assert_eq!(Topology::discrete(LabelSet::from_range(3)).open_sets().len(), 8);
    }

    #[test]
    fn restrict_keeps_labels_and_composed_relations() {
        let t = Topology::chain(LabelSet::from_range(3));
        let r = t.restrict(&LabelSet::from([0, 2])).unwrap();
        assert_eq!(r, Topology::chain(LabelSet::from([0, 2])));
        assert_eq!(r.labels().as_slice(), &[Label(0), Label(2)]);
        assert_eq!(
            t.restrict(&LabelSet::from([3])),
            Err(Error::LabelNotInGroundSet { label: 3 })
        );
    }

    #[test]
    fn disjoint_union_is_block_diagonal() {
        let a = Topology::chain(LabelSet::from([0, 2]));
        let b = Topology::coarse(LabelSet::from([1, 3]));
        let u = a.disjoint_union(&b).unwrap();
        assert_eq!(u.labels(), &LabelSet::from([0, 1, 2, 3]));
        assert!(u.leq(Label(0), Label(2)).unwrap());
        assert!(u.leq(Label(1), Label(3)).unwrap());
        assert!(u.leq(Label(3), Label(1)).unwrap());
        assert!(!u.leq(Label(0), Label(1)).unwrap());
        assert!(!u.leq(Label(1), Label(0)).unwrap());
        // restriction to either side gives back the operand
        assert_eq!(u.restrict(a.labels()).unwrap(), a);
        assert_eq!(u.restrict(b.labels()).unwrap(), b);
        assert_eq!(
            a.disjoint_union(&Topology::point(Label(0))),
            Err(Error::LabelCollision { label: 0 })
        );
    }

    #[test]
    fn finer_is_entrywise_containment() {
        let labels = LabelSet::from([0, 1]);
        let disc = Topology::discrete(labels.clone());
        let coarse = Topology::coarse(labels.clone());
        assert!(disc.is_finer_than(&coarse).unwrap());
        assert!(disc.is_finer_than(&chain2()).unwrap());
        assert!(chain2().is_finer_than(&coarse).unwrap());
        assert!(!coarse.is_finer_than(&chain2()).unwrap());
        assert!(chain2().is_finer_than(&chain2()).unwrap());
        assert_eq!(
            disc.is_finer_than(&Topology::point(Label(0))),
            Err(Error::GroundSetMismatch)
        );
    }

    #[test]
    fn quotient_frozen_examples() {
        let labels = LabelSet::from([0, 1]);
        let disc = Topology::discrete(labels.clone());
        let coarse = Topology::coarse(labels.clone());
        assert_eq!(chain2().quotient(&disc).unwrap(), chain2());
        assert_eq!(chain2().quotient(&chain2()).unwrap(), coarse);
        assert_eq!(coarse.quotient(&chain2()).unwrap(), coarse);
        assert_eq!(chain2().quotient(&coarse), Err(Error::NotFiner));
        let q = chain2().quotient(&chain2()).unwrap();
        assert_eq!(q.equivalence_classes().blocks(), &[LabelSet::from([0, 1])]);
    }

    #[test]
    fn quotient_needs_closure() {
        // two chains sharing only endpoints force a genuine closure step:
        // 0<=1 in the base, 2<=1 in the refinement's converse direction
        let labels = LabelSet::from_range(3);
        let base =
            Topology::generated_by(labels.clone(), &matrix_from_pairs(3, &[(0, 1), (2, 1)])).unwrap();
        let refinement =
            Topology::generated_by(labels.clone(), &matrix_from_pairs(3, &[(2, 1)])).unwrap();
        let q = base.quotient(&refinement).unwrap();
        // R holds at (0,1) and (1,2); closure must add (0,2)
        assert!(q.leq(Label(0), Label(2)).unwrap());
    }

    #[test]
    fn classes_and_components() {
        let labels = LabelSet::from_range(3);
        let t =
            Topology::generated_by(labels.clone(), &matrix_from_pairs(3, &[(0, 1), (1, 0)])).unwrap();
        assert_eq!(
            t.equivalence_classes().blocks(),
            &[LabelSet::from([0, 1]), LabelSet::from([2])]
        );
        assert_eq!(
            t.connected_components().blocks(),
            &[LabelSet::from([0, 1]), LabelSet::from([2])]
        );
        // one-way arrow connects but does not identify
        let v = Topology::generated_by(labels, &matrix_from_pairs(3, &[(0, 1)])).unwrap();
        assert_eq!(v.equivalence_classes().len(), 3);
        assert_eq!(
            v.connected_components().blocks(),
            &[LabelSet::from([0, 1]), LabelSet::from([2])]
        );
        assert_eq!(v.grading(), 1);
    }

    #[test]
    fn admissibility_frozen_examples() {
        let labels = LabelSet::from([0, 1]);
        let disc = Topology::discrete(labels.clone());
        let coarse = Topology::coarse(labels.clone());
        assert!(disc.is_admissible_for(&chain2()).unwrap());
        assert!(chain2().is_admissible_for(&chain2()).unwrap());
        // induced topology on the refinement's component differs
        assert!(!chain2().is_admissible_for(&coarse).unwrap());
        // quotient classes {0,1} do not match the two discrete components
        assert!(!disc.is_admissible_for(&coarse).unwrap());
        assert!(coarse.is_admissible_for(&coarse).unwrap());
        assert_eq!(
            disc.is_admissible_for(&Topology::point(Label(0))),
            Err(Error::GroundSetMismatch)
        );
    }

    #[test]
    fn finest_admissible_properties() {
        let labels = LabelSet::from_range(3);
        let t =
            Topology::generated_by(labels.clone(), &matrix_from_pairs(3, &[(0, 1), (1, 0), (1, 2)]))
                .unwrap();
        let d = t.finest_admissible();
        assert!(d.is_admissible_for(&t).unwrap());
        assert_eq!(d.grading(), 0);
        assert_eq!(t.quotient(&d).unwrap(), t);
        assert_eq!(d.connected_components(), t.equivalence_classes());
        assert_eq!(chain2().finest_admissible(), Topology::discrete(LabelSet::from([0, 1])));
        let coarse = Topology::coarse(LabelSet::from([0, 1]));
        assert_eq!(coarse.finest_admissible(), coarse);
    }

    #[test]
    fn grading_examples() {
        assert_eq!(chain2().grading(), 1);
        assert_eq!(Topology::discrete(LabelSet::from_range(4)).grading(), 0);
        assert_eq!(Topology::coarse(LabelSet::from_range(4)).grading(), 0);
        assert_eq!(Topology::chain(LabelSet::from_range(4)).grading(), 3);
        assert_eq!(Topology::empty().grading(), 0);
    }

    #[test]
    fn open_set_validation() {
        assert!(OpenSet::new(&chain2(), LabelSet::from([1])).is_ok());
        assert_eq!(OpenSet::new(&chain2(), LabelSet::from([0])), Err(Error::NotOpen));
        assert_eq!(
            OpenSet::new(&chain2(), LabelSet::from([7])),
            Err(Error::LabelNotInGroundSet { label: 7 })
        );
    }

    #[test]
    fn admissible_pair_validation() {
        let labels = LabelSet::from([0, 1]);
        assert!(AdmissiblePair::new(chain2(), Topology::discrete(labels.clone())).is_ok());
        assert_eq!(
            AdmissiblePair::new(Topology::coarse(labels.clone()), chain2()),
            Err(Error::NotAdmissible)
        );
    }

    #[test]
    fn topology_json_round_trip_is_bit_exact() {
        let t = Topology::generated_by(
            LabelSet::from([0, 2, 5]),
            &matrix_from_pairs(3, &[(0, 1), (1, 0)]),
        )
        .unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"{"labels":[0,2,5],"leq":[[1,1,0],[1,1,0],[0,0,1]]}"#
        );
        let back: Topology = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn topology_json_rejects_invalid() {
        // out-of-order labels would desynchronize rows from labels
        assert!(serde_json::from_str::<Topology>(r#"{"labels":[1,0],"leq":[[1,0],[0,1]]}"#).is_err());
        // non-transitive matrix
        assert!(serde_json::from_str::<Topology>(
            r#"{"labels":[0,1,2],"leq":[[1,1,0],[0,1,1],[0,0,1]]}"#
        )
        .is_err());
        // entries other than 0/1
        assert!(serde_json::from_str::<Topology>(r#"{"labels":[0],"leq":[[2]]}"#).is_err());
    }
}
