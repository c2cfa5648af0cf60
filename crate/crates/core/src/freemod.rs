//! Free module over the rationals on topology-flavored basis keys, with
//! formal tensor products.
//!
//! Basis keys come in three scalar shapes (a bare topology, a topology with
//! a distinguished open set, a topology with an admissible refinement) plus
//! flat tensors of those. A tensor key is never nested and always carries an
//! explicit [`TensorKind`]:
//!
//! * [`TensorKind::Species`]: factors live on pairwise disjoint ground sets
//!   (the shape of coproducts that split a ground set). Validated.
//! * [`TensorKind::Internal`]: factors may share a ground set (the shape of
//!   coproducts that refine in place, and of mixed diagram codomains).
//!
//! The tag is part of the key, so species and internal tensors never compare
//! equal and never merge. Combining operands into a new tensor requires
//! their existing tags to match the requested kind; re-embedding a map's
//! output inside a larger tensor is done explicitly by [`LinComb::map_slot`],
//! which re-tags with the ambient kind it is given. Every composite-diagram
//! comparison in this crate builds both sides with the same ambient kind.
//!
//! Coefficients are arbitrary-precision rationals and serialize as `"p/q"`
//! strings in lowest terms.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preorder::{AdmissiblePair, LabelSet, OpenSet, Topology};

pub type Coeff = BigRational;

pub fn coeff_one() -> Coeff {
    Coeff::one()
}

pub fn coeff_int(n: i64) -> Coeff {
    Coeff::from_integer(BigInt::from(n))
}

/// Which tensor discipline a tensor key obeys.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorKind {
    /// Factors on pairwise disjoint ground sets.
    Species,
    /// No disjointness constraint; factors typically share one ground set.
    Internal,
}

/// A basis element of the free module. Build through the constructors, which
/// enforce the invariants (open set actually open, refinement actually
/// admissible, tensors flat and species tensors disjoint).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BasisKey {
    Top(Topology),
    PairOpen { topology: Topology, open: LabelSet },
    PairAdm(AdmissiblePair),
    Tensor { kind: TensorKind, factors: Vec<BasisKey> },
}

impl BasisKey {
    pub fn top(t: Topology) -> BasisKey {
        BasisKey::Top(t)
    }

    /// The empty-ground-set topology: unit of the product and the carrier
    /// for scalar values.
    pub fn unit_top() -> BasisKey {
        BasisKey::Top(Topology::empty())
    }

    pub fn unit_pair_open() -> BasisKey {
        BasisKey::PairOpen { topology: Topology::empty(), open: LabelSet::default() }
    }

    pub fn unit_pair_adm() -> BasisKey {
        BasisKey::PairAdm(AdmissiblePair::new(Topology::empty(), Topology::empty()).unwrap())
    }

    pub fn pair_open(topology: Topology, open: LabelSet) -> Result<BasisKey> {
        OpenSet::new(&topology, open.clone())?;
        Ok(BasisKey::PairOpen { topology, open })
    }

    /// Skips the openness check; verifier fault injection only.
    pub(crate) fn pair_open_unchecked(topology: Topology, open: LabelSet) -> BasisKey {
        BasisKey::PairOpen { topology, open }
    }

    pub fn pair_adm(base: Topology, refinement: Topology) -> Result<BasisKey> {
        Ok(BasisKey::PairAdm(AdmissiblePair::new(base, refinement)?))
    }

    pub fn from_adm(pair: AdmissiblePair) -> BasisKey {
        BasisKey::PairAdm(pair)
    }

    /// Flat tensor of the given kind. Operands that are already tensors are
    /// flattened in when their kind matches and rejected when it does not;
    /// a species tensor additionally requires pairwise disjoint ground sets.
    pub fn tensor(kind: TensorKind, factors: Vec<BasisKey>) -> Result<BasisKey> {
        let mut flat = Vec::with_capacity(factors.len());
        for f in factors {
            match f {
                BasisKey::Tensor { kind: k, factors: inner } => {
                    if k != kind {
                        return Err(Error::KindMismatch);
                    }
                    flat.extend(inner);
                }
                other => flat.push(other),
            }
        }
        if kind == TensorKind::Species {
            let mut seen = LabelSet::default();
            for f in &flat {
                let span = f.label_span();
                if let Some(l) = seen.first_common(&span) {
                    return Err(Error::LabelOverlapInSpeciesTensor { label: l.0 });
                }
                seen = seen.union(&span);
            }
        }
        Ok(BasisKey::Tensor { kind, factors: flat })
    }

    /// Ground labels this key involves (union over tensor factors).
    pub fn label_span(&self) -> LabelSet {
        match self {
            BasisKey::Top(t) => t.labels().clone(),
            BasisKey::PairOpen { topology, .. } => topology.labels().clone(),
            BasisKey::PairAdm(p) => p.base().labels().clone(),
            BasisKey::Tensor { factors, .. } => factors
                .iter()
                .fold(LabelSet::default(), |acc, f| acc.union(&f.label_span())),
        }
    }

    pub fn tensor_factors(&self) -> Option<&[BasisKey]> {
        match self {
            BasisKey::Tensor { factors, .. } => Some(factors),
            _ => None,
        }
    }
}

/// Serialized basis key. Mirror of [`BasisKey`], revalidated on the way in.
#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum KeyRepr {
    Top(Topology),
    PairOpen { topology: Topology, open: LabelSet },
    PairAdm(AdmissiblePair),
    Tensor { kind: TensorKind, factors: Vec<KeyRepr> },
}

impl TryFrom<KeyRepr> for BasisKey {
    type Error = Error;

    fn try_from(repr: KeyRepr) -> Result<BasisKey> {
        match repr {
            KeyRepr::Top(t) => Ok(BasisKey::Top(t)),
            KeyRepr::PairOpen { topology, open } => BasisKey::pair_open(topology, open),
            KeyRepr::PairAdm(p) => Ok(BasisKey::PairAdm(p)),
            KeyRepr::Tensor { kind, factors } => {
                let factors: Vec<BasisKey> =
                    factors.into_iter().map(BasisKey::try_from).collect::<Result<_>>()?;
                if factors.iter().any(|f| matches!(f, BasisKey::Tensor { .. })) {
                    return Err(Error::KindMismatch);
                }
                BasisKey::tensor(kind, factors)
            }
        }
    }
}

impl From<BasisKey> for KeyRepr {
    fn from(key: BasisKey) -> KeyRepr {
        match key {
            BasisKey::Top(t) => KeyRepr::Top(t),
            BasisKey::PairOpen { topology, open } => KeyRepr::PairOpen { topology, open },
            BasisKey::PairAdm(p) => KeyRepr::PairAdm(p),
            BasisKey::Tensor { kind, factors } => KeyRepr::Tensor {
                kind,
                factors: factors.into_iter().map(KeyRepr::from).collect(),
            },
        }
    }
}

impl Serialize for BasisKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        KeyRepr::from(self.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BasisKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = KeyRepr::deserialize(d)?;
        BasisKey::try_from(repr).map_err(serde::de::Error::custom)
    }
}

fn format_coeff(c: &Coeff) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

fn parse_coeff(s: &str) -> std::result::Result<Coeff, String> {
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p: BigInt = p.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let q: BigInt = q.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if q.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Coeff::new(p, q))
}

/// A finite rational linear combination of basis keys. Terms are kept in a
/// map ordered by the structural key order, so equality, hashing of the
/// serialized form, and serialization order are all deterministic; zero
/// coefficients are dropped eagerly.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct LinComb {
    terms: BTreeMap<BasisKey, Coeff>,
}

impl LinComb {
    pub fn zero() -> LinComb {
        LinComb::default()
    }

    pub fn from_key(key: BasisKey) -> LinComb {
        LinComb::term(key, coeff_one())
    }

    pub fn term(key: BasisKey, coeff: Coeff) -> LinComb {
        let mut c = LinComb::zero();
        c.add_term(key, coeff);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisKey, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &BasisKey) -> Coeff {
        self.terms.get(key).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn add_term(&mut self, key: BasisKey, coeff: Coeff) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &LinComb) {
        for (k, c) in other.terms() {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn sub(&mut self, other: &LinComb) {
        for (k, c) in other.terms() {
            self.add_term(k.clone(), -c.clone());
        }
    }

    pub fn scale(&self, c: &Coeff) -> LinComb {
        if c.is_zero() {
            return LinComb::zero();
        }
        LinComb { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// Formal tensor product into a tensor of the given kind. Both operands'
    /// keys must be scalar keys or tensors already tagged with this kind.
    pub fn tensor(&self, other: &LinComb, kind: TensorKind) -> Result<LinComb> {
        let mut out = LinComb::zero();
        for (ka, ca) in self.terms() {
            for (kb, cb) in other.terms() {
                out.add_term(BasisKey::tensor(kind, vec![ka.clone(), kb.clone()])?, ca * cb);
            }
        }
        Ok(out)
    }

    /// Extend a basis-level map linearly: apply `f` to every key and sum the
    /// results with the original coefficients.
    pub fn extend_linear(
        &self,
        mut f: impl FnMut(&BasisKey) -> Result<LinComb>,
    ) -> Result<LinComb> {
        let mut out = LinComb::zero();
        for (k, c) in self.terms() {
            let image = f(k)?;
            for (ik, ic) in image.terms() {
                out.add_term(ik.clone(), ic * c);
            }
        }
        Ok(out)
    }

    /// Apply a basis-level map to one factor of every (tensor) term and
    /// splice the result back in place of that factor. The rebuilt tensor is
    /// tagged `out_kind`; a tensor-valued image contributes its factors
    /// inline, re-tagged with the ambient kind (the explicit embedding of a
    /// slot map's codomain into the larger tensor space).
    pub fn map_slot(
        &self,
        slot: usize,
        out_kind: TensorKind,
        mut f: impl FnMut(&BasisKey) -> Result<LinComb>,
    ) -> Result<LinComb> {
        let mut out = LinComb::zero();
        for (key, coeff) in self.terms() {
            let factors = key.tensor_factors().ok_or(Error::BasisKindMismatch)?;
            if slot >= factors.len() {
                return Err(Error::BasisKindMismatch);
            }
            let image = f(&factors[slot])?;
            for (ik, ic) in image.terms() {
                let mut fs: Vec<BasisKey> = Vec::with_capacity(factors.len() + 1);
                fs.extend_from_slice(&factors[..slot]);
                match ik {
                    BasisKey::Tensor { factors: inner, .. } => fs.extend(inner.iter().cloned()),
                    scalar => fs.push(scalar.clone()),
                }
                fs.extend_from_slice(&factors[slot + 1..]);
                out.add_term(BasisKey::tensor(out_kind, fs)?, ic * coeff);
            }
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: String,
    key: BasisKey,
}

#[derive(Serialize, Deserialize)]
struct LinCombRepr {
    terms: Vec<TermRepr>,
}

impl Serialize for LinComb {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| TermRepr { coeff: format_coeff(c), key: k.clone() })
            .collect();
        LinCombRepr { terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinComb {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = LinCombRepr::deserialize(d)?;
        let mut out = LinComb::zero();
        for t in repr.terms {
            let c = parse_coeff(&t.coeff).map_err(serde::de::Error::custom)?;
            out.add_term(t.key, c);
        }
        Ok(out)
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{} {:?}", format_coeff(c), k)?;
        }
        Ok(())
    }
}
