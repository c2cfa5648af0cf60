//! The structure maps: products, coproducts, counit, coaction and the
//! auxiliary operators connecting the three basis families (bare topologies,
//! topology/open pairs, topology/refinement pairs).
//!
//! Every public map here is a thin wrapper that validates its inputs and
//! delegates to an internal context. The context carries an optional
//! [`Mutation`], a deliberately wrong variant of one ingredient; the verifier
//! uses mutated contexts to demonstrate that each of its checks actually
//! fails when the corresponding ingredient is broken. With
//! [`Mutation::None`] the context computes the honest maps.

use num::{One, Zero};

use crate::enumerate;
use crate::error::{Error, Result};
use crate::freemod::{BasisKey, Coeff, LinComb, TensorKind};
use crate::preorder::{AdmissiblePair, LabelSet, OpenSet, Topology};

/// A deliberate fault, injected through the verifier to prove a check can
/// fail. `None` is the honest behavior; every other variant changes exactly
/// one ingredient in the way its name describes.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Default)]
pub enum Mutation {
    #[default]
    None,
    /// The external coproduct skips the empty open set.
    DeltaTDropsEmptySet,
    /// Refinement enumeration keeps every finer topology, dropping the
    /// locality and quotient-class conditions.
    RefinementsFinerOnly,
    /// The 1-3 multiplication emits its passenger slots swapped.
    M13Swapped,
    /// The pair coproduct skips the empty open set.
    DeltaDDropsEmptySet,
    /// The pair coproduct adds a `(input) (x) (unit)` term it must not have.
    DeltaDInjectsCounitTerm,
    /// The counit returns 1 on every basis element.
    CounitAlwaysOne,
    /// The projection returns the base instead of the refinement.
    P2ReturnsBase,
    /// Restriction of the refinement side returns the converse relation.
    RestrictRefinedTransposed,
    /// The pair product copies the base product into the refinement slot.
    MTildeCopiesBase,
    /// The partial pair product only requires the second ground set to be a
    /// subset, not the exact complement of the first open.
    StarDropsComplementCheck,
    /// The quotient-inversion search is skipped; the given refinement is
    /// returned unchanged.
    UnquotientReturnsRefinement,
    /// The quotient closes over the refinement's relation instead of its
    /// converse.
    QuotientForgetsConverse,
    /// The disjoint union links the two blocks by one extra relation.
    DisjointUnionLinksBlocks,
    /// The splitting operator splits along the second pair's open set
    /// instead of the first's.
    XiSplitsAlongSecondOpen,
    /// The degree counts classes only, forgetting to subtract components.
    GradingCountsClassesOnly,
}

/// Internal evaluation context. All map logic lives here, parameterized by
/// the fault; the public functions call it with `Mutation::None`.
#[derive(Copy, Clone, Debug, Default)]
pub(crate) struct Ctx {
    pub(crate) mutation: Mutation,
}

impl Ctx {
    pub(crate) const NONE: Ctx = Ctx { mutation: Mutation::None };

    pub(crate) fn new(mutation: Mutation) -> Ctx {
        Ctx { mutation }
    }

    /// The refinements summed over by the internal coproducts.
    pub(crate) fn refinements(&self, t: &Topology) -> Result<Vec<Topology>> {
        if self.mutation == Mutation::RefinementsFinerOnly {
            return Ok(enumerate::all_topologies_capped(
                t.labels(),
                crate::preorder::MAX_GROUND_SIZE,
            )?
            .filter(|c| c.is_finer_than(t).unwrap())
            .collect());
        }
        enumerate::admissible_refinements(t)
    }

    pub(crate) fn quotient(&self, base: &Topology, refinement: &Topology) -> Result<Topology> {
        if self.mutation == Mutation::QuotientForgetsConverse {
            return base.union_closed(refinement);
        }
        base.quotient(refinement)
    }

    pub(crate) fn grading(&self, t: &Topology) -> usize {
        if self.mutation == Mutation::GradingCountsClassesOnly {
            return t.equivalence_classes().len();
        }
        t.grading()
    }

    /// Indicator of degree zero.
    pub(crate) fn counit_scalar(&self, t: &Topology) -> Coeff {
        let one = self.mutation == Mutation::CounitAlwaysOne || self.grading(t) == 0;
        if one {
            Coeff::one()
        } else {
            Coeff::zero()
        }
    }

    pub(crate) fn disjoint_union(&self, a: &Topology, b: &Topology) -> Result<Topology> {
        let d = a.disjoint_union(b)?;
        if self.mutation == Mutation::DisjointUnionLinksBlocks {
            if let (Some(x), Some(y)) =
                (a.labels().iter().next(), b.labels().iter().next())
            {
                return d.with_pair_closed(x, y);
            }
        }
        Ok(d)
    }

    pub(crate) fn restrict_refined(&self, t: &Topology, y: &LabelSet) -> Result<Topology> {
        let r = t.restrict(y)?;
        if self.mutation == Mutation::RestrictRefinedTransposed {
            return Ok(r.transpose());
        }
        Ok(r)
    }

    /// Sum over open sets `Y`: restriction to the complement tensor
    /// restriction to `Y`, as a ground-set-splitting 2-tensor.
    pub(crate) fn delta_external(&self, t: &Topology) -> Result<LinComb> {
        let mut out = LinComb::zero();
        for open in t.open_sets() {
            let y = open.members();
            if self.mutation == Mutation::DeltaTDropsEmptySet && y.is_empty() {
                continue;
            }
            let comp = t.labels().difference(y);
            let key = BasisKey::tensor(
                TensorKind::Species,
                vec![BasisKey::top(t.restrict(&comp)?), BasisKey::top(t.restrict(y)?)],
            )?;
            out.add_term(key, Coeff::one());
        }
        Ok(out)
    }

    /// Sum over refinements `T'`: refinement tensor quotient, on one shared
    /// ground set.
    pub(crate) fn gamma_internal(&self, t: &Topology) -> Result<LinComb> {
        let mut out = LinComb::zero();
        for r in self.refinements(t)? {
            let q = self.quotient(t, &r)?;
            let key = BasisKey::tensor(
                TensorKind::Internal,
                vec![BasisKey::top(r), BasisKey::top(q)],
            )?;
            out.add_term(key, Coeff::one());
        }
        Ok(out)
    }

    /// Product of two scalar keys of the same family: disjoint union of
    /// topologies, componentwise on pairs.
    pub(crate) fn m_key(&self, a: &BasisKey, b: &BasisKey) -> Result<BasisKey> {
        match (a, b) {
            (BasisKey::Top(x), BasisKey::Top(y)) => {
                Ok(BasisKey::top(self.disjoint_union(x, y)?))
            }
            (
                BasisKey::PairOpen { topology: t1, open: y1 },
                BasisKey::PairOpen { topology: t2, open: y2 },
            ) => Ok(BasisKey::pair_open_unchecked(
                self.disjoint_union(t1, t2)?,
                y1.union(y2),
            )),
            (BasisKey::PairAdm(p), BasisKey::PairAdm(q)) => {
                let base = self.disjoint_union(p.base(), q.base())?;
                let refinement = if self.mutation == Mutation::MTildeCopiesBase {
                    base.clone()
                } else {
                    self.disjoint_union(p.refinement(), q.refinement())?
                };
                Ok(BasisKey::from_adm(AdmissiblePair::new_unchecked(base, refinement)))
            }
            _ => Err(Error::BasisKindMismatch),
        }
    }

    /// Pair coproduct: sum over opens `Z` of the restriction to `Y`, each
    /// term `(T|_Z, Z) (x) (T|_{X-Z}, Y-Z)` splitting the ground set.
    pub(crate) fn delta_d(&self, t: &Topology, y: &LabelSet) -> Result<LinComb> {
        let ty = t.restrict(y)?;
        let mut out = LinComb::zero();
        for z in ty.open_sets() {
            let zs = z.members();
            if self.mutation == Mutation::DeltaDDropsEmptySet && zs.is_empty() {
                continue;
            }
            let comp = t.labels().difference(zs);
            let left = BasisKey::pair_open_unchecked(t.restrict(zs)?, zs.clone());
            let right = BasisKey::pair_open_unchecked(t.restrict(&comp)?, y.difference(zs));
            out.add_term(
                BasisKey::tensor(TensorKind::Species, vec![left, right])?,
                Coeff::one(),
            );
        }
        if self.mutation == Mutation::DeltaDInjectsCounitTerm && y != t.labels() {
            let key = BasisKey::tensor(
                TensorKind::Species,
                vec![
                    BasisKey::pair_open_unchecked(t.clone(), y.clone()),
                    BasisKey::unit_pair_open(),
                ],
            )?;
            out.add_term(key, Coeff::one());
        }
        Ok(out)
    }

    /// Pair-family internal coproduct: sum over refinements `T''` of the
    /// refinement, each term `(T, T'') (x) (T/T'', T'/T'')`.
    pub(crate) fn gamma_dtilde(&self, base: &Topology, refinement: &Topology) -> Result<LinComb> {
        let mut out = LinComb::zero();
        for t2 in self.refinements(refinement)? {
            let qbase = self.quotient(base, &t2)?;
            let qref = self.quotient(refinement, &t2)?;
            let left = BasisKey::from_adm(AdmissiblePair::new_unchecked(base.clone(), t2));
            let right = BasisKey::from_adm(AdmissiblePair::new_unchecked(qbase, qref));
            out.add_term(
                BasisKey::tensor(TensorKind::Internal, vec![left, right])?,
                Coeff::one(),
            );
        }
        Ok(out)
    }

    pub(crate) fn p2_key(&self, base: &Topology, refinement: &Topology) -> BasisKey {
        if self.mutation == Mutation::P2ReturnsBase {
            return BasisKey::top(base.clone());
        }
        BasisKey::top(refinement.clone())
    }

    /// Coaction of the refinement pairs on the open pairs: sum over
    /// refinements `T'` for which both `Y` and its complement are `T'`-open
    /// and `T'` is symmetric outside `Y`; each term
    /// `(T, T') (x) (T/T', Y)`.
    pub(crate) fn phi(&self, t: &Topology, y: &LabelSet) -> Result<LinComb> {
        let comp = t.labels().difference(y);
        let mut out = LinComb::zero();
        for r in self.refinements(t)? {
            if !r.is_open(y)? || !r.is_open(&comp)? {
                continue;
            }
            if !r.restrict(&comp)?.is_symmetric() {
                continue;
            }
            let q = self.quotient(t, &r)?;
            let left = BasisKey::from_adm(AdmissiblePair::new_unchecked(t.clone(), r));
            let right = BasisKey::pair_open_unchecked(q, y.clone());
            out.add_term(
                BasisKey::tensor(TensorKind::Internal, vec![left, right])?,
                Coeff::one(),
            );
        }
        Ok(out)
    }

    /// Partial product on open pairs: defined when the second operand is the
    /// first's restriction to the complement of its open set, in which case
    /// the opens join.
    pub(crate) fn star(
        &self,
        t1: &Topology,
        y1: &LabelSet,
        t2: &Topology,
        y2: &LabelSet,
    ) -> Result<Option<(Topology, LabelSet)>> {
        let defined = if self.mutation == Mutation::StarDropsComplementCheck {
            t2.labels().is_subset_of(t1.labels()) && *t2 == t1.restrict(t2.labels())?
        } else {
            let comp = t1.labels().difference(y1);
            *t2.labels() == comp && *t2 == t1.restrict(&comp)?
        };
        Ok(defined.then(|| (t1.clone(), y1.union(y2))))
    }

    /// Inverse of quotienting in the middle of a sandwich: the unique `S`
    /// with `tp` admissible for `S`, `S` admissible for `t`, and
    /// `S/tp == w`. Errors if the count differs from one.
    pub(crate) fn unquotient(&self, t: &Topology, tp: &Topology, w: &Topology) -> Result<Topology> {
        if self.mutation == Mutation::UnquotientReturnsRefinement {
            return Ok(tp.clone());
        }
        let mut found = Vec::new();
        for s in self.refinements(t)? {
            if !tp.is_admissible_for(&s)? {
                continue;
            }
            if self.quotient(&s, tp)? == *w {
                found.push(s);
            }
        }
        if found.len() == 1 {
            Ok(found.pop().unwrap())
        } else {
            Err(Error::LemmaViolation { found: found.len() })
        }
    }

    /// Partial product on refinement pairs: `(T, T') (x) (U, W)` is defined
    /// when `U == T/T'`, and lifts `W` back through the quotient.
    pub(crate) fn divtimes(
        &self,
        base1: &Topology,
        ref1: &Topology,
        base2: &Topology,
        ref2: &Topology,
    ) -> Result<LinComb> {
        let q = self.quotient(base1, ref1)?;
        if *base2 != q {
            return Ok(LinComb::zero());
        }
        let lifted = self.unquotient(base1, ref1, ref2)?;
        Ok(LinComb::from_key(BasisKey::from_adm(AdmissiblePair::new_unchecked(
            base1.clone(),
            lifted,
        ))))
    }

    /// Action of a refinement pair on open pairs: `(U, Y)` maps to
    /// `(T, Y)` when `U == T/T'`, else to zero.
    pub(crate) fn psi(
        &self,
        base: &Topology,
        refinement: &Topology,
        u: &Topology,
        y: &LabelSet,
    ) -> Result<LinComb> {
        let q = self.quotient(base, refinement)?;
        if *u != q {
            return Ok(LinComb::zero());
        }
        Ok(LinComb::from_key(BasisKey::pair_open_unchecked(base.clone(), y.clone())))
    }

    /// Split a refinement pair along the first passenger pair's open set.
    /// The passengers' ground sets must partition the pair's ground set.
    pub(crate) fn xi(
        &self,
        base: &Topology,
        refinement: &Topology,
        u1: &Topology,
        z: &LabelSet,
        u2: &Topology,
        w: &LabelSet,
    ) -> Result<LinComb> {
        let x = base.labels();
        if !u1.labels().is_disjoint_from(u2.labels())
            || u1.labels().union(u2.labels()) != *x
        {
            return Err(Error::PartitionMismatch);
        }
        let along = if self.mutation == Mutation::XiSplitsAlongSecondOpen { w } else { z };
        let rest = x.difference(along);
        let base_split =
            self.disjoint_union(&base.restrict(along)?, &base.restrict(&rest)?)?;
        let ref_split = self
            .disjoint_union(&refinement.restrict(along)?, &refinement.restrict(&rest)?)?;
        let left = BasisKey::from_adm(AdmissiblePair::new_unchecked(base_split, ref_split));
        let key = BasisKey::tensor(
            TensorKind::Internal,
            vec![
                left,
                BasisKey::pair_open_unchecked(u1.clone(), z.clone()),
                BasisKey::pair_open_unchecked(u2.clone(), w.clone()),
            ],
        )?;
        Ok(LinComb::from_key(key))
    }

    /// Multiply slots 1 and 3 of a 4-tensor, keeping slots 2 and 4 as
    /// passengers: `t1 (x) t2 (x) t3 (x) t4` maps to
    /// `m(t1, t3) (x) t2 (x) t4`.
    pub(crate) fn m13(&self, factors: &[BasisKey]) -> Result<LinComb> {
        if factors.len() != 4 {
            return Err(Error::BasisKindMismatch);
        }
        let prod = self.m_key(&factors[0], &factors[2])?;
        let (second, third) = if self.mutation == Mutation::M13Swapped {
            (&factors[3], &factors[1])
        } else {
            (&factors[1], &factors[3])
        };
        let key = BasisKey::tensor(
            TensorKind::Internal,
            vec![prod, second.clone(), third.clone()],
        )?;
        Ok(LinComb::from_key(key))
    }
}

/// Coproduct splitting the ground set: sum over open sets `Y` of
/// `T|_{X-Y} (x) T|_Y`.
pub fn delta_external(t: &Topology) -> Result<LinComb> {
    Ctx::NONE.delta_external(t)
}

/// Coproduct refining in place: sum over admissible refinements `T'` of
/// `T' (x) T/T'`.
pub fn gamma_internal(t: &Topology) -> Result<LinComb> {
    Ctx::NONE.gamma_internal(t)
}

/// Counit of the in-place coproduct: 1 on degree-zero topologies, else 0,
/// returned as a multiple of the empty-topology key.
pub fn counit_internal(t: &Topology) -> Result<LinComb> {
    Ok(LinComb::term(BasisKey::unit_top(), Ctx::NONE.counit_scalar(t)))
}

/// Disjoint-union product. Both operands must be scalar keys of the same
/// family; pairs multiply componentwise.
pub fn m_product(a: &BasisKey, b: &BasisKey) -> Result<LinComb> {
    Ok(LinComb::from_key(Ctx::NONE.m_key(a, b)?))
}

/// Pair-family coproduct splitting the ground set along opens of `T|_Y`.
pub fn delta_d(t: &Topology, open: &LabelSet) -> Result<LinComb> {
    OpenSet::new(t, open.clone())?;
    Ctx::NONE.delta_d(t, open)
}

/// Pair-family coproduct refining in place.
pub fn gamma_dtilde(pair: &AdmissiblePair) -> Result<LinComb> {
    Ctx::NONE.gamma_dtilde(pair.base(), pair.refinement())
}

/// Counit of the pair-family in-place coproduct: the degree-zero indicator
/// of the refinement component.
pub fn counit_dtilde(pair: &AdmissiblePair) -> Result<LinComb> {
    Ok(LinComb::term(BasisKey::unit_top(), Ctx::NONE.counit_scalar(pair.refinement())))
}

/// Forget the base: `(T, T')` maps to `T'`.
pub fn p2_projection(pair: &AdmissiblePair) -> LinComb {
    LinComb::from_key(Ctx::NONE.p2_key(pair.base(), pair.refinement()))
}

/// Coaction of refinement pairs on open pairs.
pub fn phi_coaction(t: &Topology, open: &LabelSet) -> Result<LinComb> {
    OpenSet::new(t, open.clone())?;
    Ctx::NONE.phi(t, open)
}

/// Partial product on open pairs; zero when undefined.
pub fn star_product(a: &BasisKey, b: &BasisKey) -> Result<LinComb> {
    let (BasisKey::PairOpen { topology: t1, open: y1 }, BasisKey::PairOpen { topology: t2, open: y2 }) =
        (a, b)
    else {
        return Err(Error::BasisKindMismatch);
    };
    match Ctx::NONE.star(t1, y1, t2, y2)? {
        None => Ok(LinComb::zero()),
        Some((t, y)) => Ok(LinComb::from_key(BasisKey::pair_open(t, y)?)),
    }
}

/// The unique topology between `pair.refinement()` and `pair.base()` whose
/// quotient by the refinement is `target`. `target` must be an admissible
/// refinement of the pair's quotient.
pub fn unquotient(pair: &AdmissiblePair, target: &Topology) -> Result<Topology> {
    let q = pair.base().quotient(pair.refinement())?;
    AdmissiblePair::new(q, target.clone())?;
    Ctx::NONE.unquotient(pair.base(), pair.refinement(), target)
}

/// Partial product on refinement pairs; zero when undefined.
pub fn divtimes_product(a: &BasisKey, b: &BasisKey) -> Result<LinComb> {
    let (BasisKey::PairAdm(p), BasisKey::PairAdm(q)) = (a, b) else {
        return Err(Error::BasisKindMismatch);
    };
    Ctx::NONE.divtimes(p.base(), p.refinement(), q.base(), q.refinement())
}

/// Action of a refinement pair on an open pair; zero when undefined.
pub fn psi_action(pair: &AdmissiblePair, operand: &Topology, open: &LabelSet) -> Result<LinComb> {
    OpenSet::new(operand, open.clone())?;
    Ctx::NONE.psi(pair.base(), pair.refinement(), operand, open)
}

/// Split a refinement pair along the first passenger's open set, keeping
/// both passenger pairs. The passengers' grounds must partition the pair's
/// ground set.
pub fn xi_map(
    pair: &AdmissiblePair,
    first: (&Topology, &LabelSet),
    second: (&Topology, &LabelSet),
) -> Result<LinComb> {
    OpenSet::new(first.0, first.1.clone())?;
    OpenSet::new(second.0, second.1.clone())?;
    Ctx::NONE.xi(pair.base(), pair.refinement(), first.0, first.1, second.0, second.1)
}

/// Multiply tensor slots 1 and 3, keep slots 2 and 4.
pub fn m13(factors: &[BasisKey]) -> Result<LinComb> {
    Ctx::NONE.m13(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::ExecMode;
    use crate::freemod::coeff_one;
    use crate::preorder::Label;

    fn ls(v: &[u32]) -> LabelSet {
        LabelSet::new(v.iter().map(|&x| Label(x)))
    }

    fn chain01() -> Topology {
        Topology::chain(ls(&[0, 1]))
    }

    fn disc01() -> Topology {
        Topology::discrete(ls(&[0, 1]))
    }

    fn coarse01() -> Topology {
        Topology::coarse(ls(&[0, 1]))
    }

    fn pt(l: u32) -> Topology {
        Topology::point(Label(l))
    }

    fn sp(a: Topology, b: Topology) -> BasisKey {
        BasisKey::tensor(TensorKind::Species, vec![BasisKey::top(a), BasisKey::top(b)]).unwrap()
    }

    fn it(a: Topology, b: Topology) -> BasisKey {
        BasisKey::tensor(TensorKind::Internal, vec![BasisKey::top(a), BasisKey::top(b)]).unwrap()
    }

    fn adm(base: Topology, refinement: Topology) -> AdmissiblePair {
        AdmissiblePair::new(base, refinement).unwrap()
    }

    fn po(t: Topology, y: &[u32]) -> BasisKey {
        BasisKey::pair_open(t, ls(y)).unwrap()
    }

    fn pa(base: Topology, refinement: Topology) -> BasisKey {
        BasisKey::from_adm(adm(base, refinement))
    }

    #[test]
    fn delta_external_on_a_two_chain() {
        let d = delta_external(&chain01()).unwrap();
        assert_eq!(d.len(), 3);
        for key in [
            sp(chain01(), Topology::empty()),
            sp(pt(0), pt(1)),
            sp(Topology::empty(), chain01()),
        ] {
            assert_eq!(d.coeff(&key), coeff_one(), "missing {key:?}");
        }
    }

    #[test]
    fn delta_external_term_count_is_open_count() {
        for t in enumerate::collect_all(&ls(&[0, 1, 2]), ExecMode::Sequential).unwrap() {
            assert_eq!(delta_external(&t).unwrap().len(), t.open_sets().len());
        }
    }

    #[test]
    fn gamma_internal_frozen_values() {
        let g = gamma_internal(&chain01()).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.coeff(&it(disc01(), chain01())), coeff_one());
        assert_eq!(g.coeff(&it(chain01(), coarse01())), coeff_one());

        let g = gamma_internal(&coarse01()).unwrap();
        assert_eq!(g, LinComb::from_key(it(coarse01(), coarse01())));
    }

    #[test]
    fn counit_internal_is_degree_indicator() {
        for (t, expect) in [
            (disc01(), 1),
            (chain01(), 0),
            (coarse01(), 1),
            (Topology::empty(), 1),
        ] {
            let c = counit_internal(&t).unwrap();
            assert_eq!(c.coeff(&BasisKey::unit_top()), crate::freemod::coeff_int(expect));
            assert!(c.len() <= 1);
        }
    }

    #[test]
    fn m_product_on_each_family() {
        let m = m_product(&BasisKey::top(pt(0)), &BasisKey::top(Topology::chain(ls(&[1, 2]))))
            .unwrap();
        let t = match m.terms().next().unwrap().0 {
            BasisKey::Top(t) => t.clone(),
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(t.labels(), &ls(&[0, 1, 2]));
        assert!(t.leq(Label(1), Label(2)).unwrap());
        assert!(!t.leq(Label(0), Label(1)).unwrap());
        assert!(!t.leq(Label(1), Label(0)).unwrap());

        let m = m_product(&po(chain01(), &[1]), &po(pt(2), &[2])).unwrap();
        let du = chain01().disjoint_union(&pt(2)).unwrap();
        assert_eq!(m, LinComb::from_key(po(du, &[1, 2])));

        let m = m_product(&pa(chain01(), disc01()), &pa(pt(2), pt(2))).unwrap();
        let base = chain01().disjoint_union(&pt(2)).unwrap();
        let refinement = disc01().disjoint_union(&pt(2)).unwrap();
        assert_eq!(m, LinComb::from_key(pa(base, refinement)));

        assert_eq!(
            m_product(&BasisKey::top(pt(0)), &po(pt(1), &[1])),
            Err(Error::BasisKindMismatch)
        );
        assert_eq!(
            m_product(&BasisKey::top(pt(0)), &BasisKey::top(pt(0))),
            Err(Error::LabelCollision { label: 0 })
        );
    }

    #[test]
    fn delta_d_frozen_values() {
        let d = delta_d(&chain01(), &ls(&[1])).unwrap();
        assert_eq!(d.len(), 2);
        let term1 = BasisKey::tensor(
            TensorKind::Species,
            vec![BasisKey::unit_pair_open(), po(chain01(), &[1])],
        )
        .unwrap();
        let term2 =
            BasisKey::tensor(TensorKind::Species, vec![po(pt(1), &[1]), po(pt(0), &[])]).unwrap();
        assert_eq!(d.coeff(&term1), coeff_one());
        assert_eq!(d.coeff(&term2), coeff_one());

        // with the full ground set as the open, the unit does appear on the right
        let d = delta_d(&chain01(), &ls(&[0, 1])).unwrap();
        assert_eq!(d.len(), 3);
        let full = BasisKey::tensor(
            TensorKind::Species,
            vec![po(chain01(), &[0, 1]), BasisKey::unit_pair_open()],
        )
        .unwrap();
        assert_eq!(d.coeff(&full), coeff_one());

        assert_eq!(delta_d(&chain01(), &ls(&[0])), Err(Error::NotOpen));
    }

    #[test]
    fn gamma_dtilde_frozen_values() {
        let g = gamma_dtilde(&adm(chain01(), chain01())).unwrap();
        assert_eq!(g.len(), 2);
        let t1 = BasisKey::tensor(
            TensorKind::Internal,
            vec![pa(chain01(), disc01()), pa(chain01(), chain01())],
        )
        .unwrap();
        let t2 = BasisKey::tensor(
            TensorKind::Internal,
            vec![pa(chain01(), chain01()), pa(coarse01(), coarse01())],
        )
        .unwrap();
        assert_eq!(g.coeff(&t1), coeff_one());
        assert_eq!(g.coeff(&t2), coeff_one());
    }

    #[test]
    fn p2_forgets_the_base() {
        assert_eq!(
            p2_projection(&adm(chain01(), disc01())),
            LinComb::from_key(BasisKey::top(disc01()))
        );
    }

    #[test]
    fn phi_frozen_values() {
        let p = phi_coaction(&chain01(), &ls(&[1])).unwrap();
        let key = BasisKey::tensor(
            TensorKind::Internal,
            vec![pa(chain01(), disc01()), po(chain01(), &[1])],
        )
        .unwrap();
        assert_eq!(p, LinComb::from_key(key));

        // with the empty open, only the symmetric refinement survives
        let p = phi_coaction(&chain01(), &ls(&[])).unwrap();
        let key = BasisKey::tensor(
            TensorKind::Internal,
            vec![pa(chain01(), disc01()), po(chain01(), &[])],
        )
        .unwrap();
        assert_eq!(p, LinComb::from_key(key));

        // with the full open, both refinements qualify
        let p = phi_coaction(&chain01(), &ls(&[0, 1])).unwrap();
        assert_eq!(p.len(), 2);
        let k1 = BasisKey::tensor(
            TensorKind::Internal,
            vec![pa(chain01(), disc01()), po(chain01(), &[0, 1])],
        )
        .unwrap();
        let k2 = BasisKey::tensor(
            TensorKind::Internal,
            vec![pa(chain01(), chain01()), po(coarse01(), &[0, 1])],
        )
        .unwrap();
        assert_eq!(p.coeff(&k1), coeff_one());
        assert_eq!(p.coeff(&k2), coeff_one());

        assert_eq!(phi_coaction(&chain01(), &ls(&[0])), Err(Error::NotOpen));
    }

    #[test]
    fn star_product_frozen_values() {
        // complement match: (chain01, {1}) * (pt0, Y2)
        let a = po(chain01(), &[1]);
        assert_eq!(
            star_product(&a, &po(pt(0), &[])).unwrap(),
            LinComb::from_key(po(chain01(), &[1]))
        );
        assert_eq!(
            star_product(&a, &po(pt(0), &[0])).unwrap(),
            LinComb::from_key(po(chain01(), &[0, 1]))
        );
        // ground mismatch and topology mismatch both vanish
        assert!(star_product(&a, &po(pt(2), &[])).unwrap().is_zero());
        let b = po(chain01(), &[0, 1]);
        assert!(star_product(&b, &po(pt(0), &[0])).unwrap().is_zero());
        assert_eq!(
            star_product(&a, &BasisKey::top(pt(0))),
            Err(Error::BasisKindMismatch)
        );
    }

    #[test]
    fn unquotient_inverts_quotienting() {
        let pair = adm(chain01(), disc01());
        assert_eq!(unquotient(&pair, &chain01()).unwrap(), chain01());
        assert_eq!(unquotient(&pair, &disc01()).unwrap(), disc01());
        // target must be admissible for the quotient
        assert_eq!(
            unquotient(&pair, &chain01().transpose()),
            Err(Error::NotAdmissible)
        );
    }

    #[test]
    fn divtimes_frozen_values() {
        let a = pa(chain01(), disc01());
        let b = pa(chain01(), chain01());
        assert_eq!(
            divtimes_product(&a, &b).unwrap(),
            LinComb::from_key(pa(chain01(), chain01()))
        );
        let c = pa(coarse01(), coarse01());
        assert!(divtimes_product(&a, &c).unwrap().is_zero());
        assert_eq!(
            divtimes_product(&a, &BasisKey::top(pt(0))),
            Err(Error::BasisKindMismatch)
        );
    }

    #[test]
    fn psi_frozen_values() {
        let pair = adm(chain01(), disc01());
        assert_eq!(
            psi_action(&pair, &chain01(), &ls(&[1])).unwrap(),
            LinComb::from_key(po(chain01(), &[1]))
        );
        assert!(psi_action(&pair, &coarse01(), &ls(&[])).unwrap().is_zero());
    }

    #[test]
    fn xi_frozen_values() {
        let pair = adm(chain01(), disc01());
        // split along the empty open of the first passenger
        let out = xi_map(&pair, (&Topology::empty(), &ls(&[])), (&chain01(), &ls(&[1]))).unwrap();
        let key = BasisKey::tensor(
            TensorKind::Internal,
            vec![
                pa(chain01(), disc01()),
                BasisKey::unit_pair_open(),
                po(chain01(), &[1]),
            ],
        )
        .unwrap();
        assert_eq!(out, LinComb::from_key(key));

        // split along {1}: both components of the pair break apart
        let out = xi_map(&pair, (&pt(1), &ls(&[1])), (&pt(0), &ls(&[]))).unwrap();
        let key = BasisKey::tensor(
            TensorKind::Internal,
            vec![pa(disc01(), disc01()), po(pt(1), &[1]), po(pt(0), &[])],
        )
        .unwrap();
        assert_eq!(out, LinComb::from_key(key));

        // passengers must partition the ground set
        assert_eq!(
            xi_map(&pair, (&pt(1), &ls(&[1])), (&pt(1), &ls(&[]))),
            Err(Error::PartitionMismatch)
        );
    }

    #[test]
    fn m13_multiplies_the_odd_slots() {
        let factors = vec![
            BasisKey::top(pt(0)),
            BasisKey::top(pt(1)),
            BasisKey::top(pt(2)),
            BasisKey::top(pt(3)),
        ];
        let out = m13(&factors).unwrap();
        let key = BasisKey::tensor(
            TensorKind::Internal,
            vec![
                BasisKey::top(pt(0).disjoint_union(&pt(2)).unwrap()),
                BasisKey::top(pt(1)),
                BasisKey::top(pt(3)),
            ],
        )
        .unwrap();
        assert_eq!(out, LinComb::from_key(key));
        assert_eq!(m13(&factors[..3]), Err(Error::BasisKindMismatch));
    }

    /// Both coproducts turn disjoint unions into slotwise products.
    #[test]
    fn coproducts_are_multiplicative() {
        let left = enumerate::collect_all(&ls(&[0]), ExecMode::Sequential).unwrap();
        let right = enumerate::collect_all(&ls(&[1, 2]), ExecMode::Sequential).unwrap();
        for a in &left {
            for b in &right {
                let ab = a.disjoint_union(b).unwrap();

                let lhs = delta_external(&ab).unwrap();
                let mut rhs = LinComb::zero();
                for (ka, ca) in delta_external(a).unwrap().terms() {
                    for (kb, cb) in delta_external(b).unwrap().terms() {
                        let fa = ka.tensor_factors().unwrap();
                        let fb = kb.tensor_factors().unwrap();
                        let key = BasisKey::tensor(
                            TensorKind::Species,
                            vec![
                                Ctx::NONE.m_key(&fa[0], &fb[0]).unwrap(),
                                Ctx::NONE.m_key(&fa[1], &fb[1]).unwrap(),
                            ],
                        )
                        .unwrap();
                        rhs.add_term(key, ca * cb);
                    }
                }
                assert_eq!(lhs, rhs, "split coproduct not multiplicative at {ab:?}");

                let lhs = gamma_internal(&ab).unwrap();
                let mut rhs = LinComb::zero();
                for (ka, ca) in gamma_internal(a).unwrap().terms() {
                    for (kb, cb) in gamma_internal(b).unwrap().terms() {
                        let fa = ka.tensor_factors().unwrap();
                        let fb = kb.tensor_factors().unwrap();
                        let key = BasisKey::tensor(
                            TensorKind::Internal,
                            vec![
                                Ctx::NONE.m_key(&fa[0], &fb[0]).unwrap(),
                                Ctx::NONE.m_key(&fa[1], &fb[1]).unwrap(),
                            ],
                        )
                        .unwrap();
                        rhs.add_term(key, ca * cb);
                    }
                }
                assert_eq!(lhs, rhs, "refine coproduct not multiplicative at {ab:?}");
            }
        }
    }
}
