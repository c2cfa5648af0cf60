//! Named exhaustive checks of the identities the structure maps satisfy.
//!
//! Each check sweeps a finite universe (all topologies on `{0..n}`, all
//! topology/open pairs, all admissible pairs, or tuples of those), evaluates
//! both sides of one identity on every element, and reports the first
//! counterexample in enumeration order. Sweeps never short-circuit, so the
//! reported element count is deterministic.
//!
//! Every check carries a designated [`Mutation`]: a deliberately broken
//! ingredient under which the check must fail. [`run_check_mutated`] runs a
//! check against a mutated context; the test suite uses it to prove no check
//! is vacuous.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use num::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::enumerate;
use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::freemod::{BasisKey, Coeff, LinComb, TensorKind};
use crate::ops::{Ctx, Mutation};
use crate::preorder::{AdmissiblePair, Label, LabelSet, Topology};

/// Outcome of one check at one ground size.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub ground_size: usize,
    pub basis_elements_checked: u64,
    pub passed: bool,
    pub counterexample: Option<Value>,
    pub elapsed_ms: u128,
}

/// A registered check: its name and the largest ground size the default
/// sweep runs it at.
#[derive(Clone, Debug, Serialize)]
pub struct CheckInfo {
    pub name: &'static str,
    pub default_cap: usize,
}

type CheckFn = fn(&Ctx, usize, ExecMode) -> Result<(u64, Option<Value>)>;

struct Entry {
    name: &'static str,
    cap: usize,
    mutation: Mutation,
    probe_n: usize,
    run: CheckFn,
}

const REGISTRY: &[Entry] = &[
    Entry {
        name: "coassoc_delta_T",
        cap: 4,
        mutation: Mutation::DeltaTDropsEmptySet,
        probe_n: 1,
        run: check_coassoc_delta_t,
    },
    Entry {
        name: "coassoc_gamma_T",
        cap: 4,
        mutation: Mutation::RefinementsFinerOnly,
        probe_n: 2,
        run: check_coassoc_gamma_t,
    },
    Entry {
        name: "compat_T",
        cap: 3,
        mutation: Mutation::M13Swapped,
        probe_n: 2,
        run: check_compat_t,
    },
    Entry {
        name: "coassoc_delta_D",
        cap: 3,
        mutation: Mutation::DeltaDDropsEmptySet,
        probe_n: 1,
        run: check_coassoc_delta_d,
    },
    Entry {
        name: "noncounital_D",
        cap: 3,
        mutation: Mutation::DeltaDInjectsCounitTerm,
        probe_n: 1,
        run: check_noncounital_d,
    },
    Entry {
        name: "coassoc_gamma_Dt",
        cap: 3,
        mutation: Mutation::RefinementsFinerOnly,
        probe_n: 2,
        run: check_coassoc_gamma_dt,
    },
    Entry {
        name: "counit_gamma_Dt",
        cap: 4,
        mutation: Mutation::CounitAlwaysOne,
        probe_n: 2,
        run: check_counit_gamma_dt,
    },
    Entry {
        name: "p2_morphism",
        cap: 3,
        mutation: Mutation::P2ReturnsBase,
        probe_n: 2,
        run: check_p2_morphism,
    },
    Entry {
        name: "restriction_admissible",
        cap: 4,
        mutation: Mutation::RestrictRefinedTransposed,
        probe_n: 2,
        run: check_restriction_admissible,
    },
    Entry {
        name: "comodule_phi",
        cap: 3,
        mutation: Mutation::RefinementsFinerOnly,
        probe_n: 2,
        run: check_comodule_phi,
    },
    Entry {
        name: "phi_monoid",
        cap: 3,
        mutation: Mutation::MTildeCopiesBase,
        probe_n: 2,
        run: check_phi_monoid,
    },
    Entry {
        name: "star_assoc",
        cap: 3,
        mutation: Mutation::StarDropsComplementCheck,
        probe_n: 2,
        run: check_star_assoc,
    },
    Entry {
        name: "divtimes_assoc",
        cap: 3,
        mutation: Mutation::UnquotientReturnsRefinement,
        probe_n: 2,
        run: check_divtimes_assoc,
    },
    Entry {
        name: "lemma21_bijection",
        cap: 3,
        mutation: Mutation::RefinementsFinerOnly,
        probe_n: 2,
        run: check_lemma21_bijection,
    },
    Entry {
        name: "psi_action",
        cap: 3,
        mutation: Mutation::UnquotientReturnsRefinement,
        probe_n: 2,
        run: check_psi_action,
    },
    Entry {
        name: "open_complement_lemma",
        cap: 4,
        mutation: Mutation::QuotientForgetsConverse,
        probe_n: 2,
        run: check_open_complement_lemma,
    },
    Entry {
        name: "tsplit_lemma",
        cap: 4,
        mutation: Mutation::DisjointUnionLinksBlocks,
        probe_n: 2,
        run: check_tsplit_lemma,
    },
    Entry {
        name: "cointeraction",
        cap: 3,
        mutation: Mutation::XiSplitsAlongSecondOpen,
        probe_n: 2,
        run: check_cointeraction,
    },
    Entry {
        name: "admissibility_transitive",
        cap: 4,
        mutation: Mutation::RefinementsFinerOnly,
        probe_n: 2,
        run: check_admissibility_transitive,
    },
    Entry {
        name: "counit_gamma_T",
        cap: 4,
        mutation: Mutation::CounitAlwaysOne,
        probe_n: 2,
        run: check_counit_gamma_t,
    },
    Entry {
        name: "grading_additivity",
        cap: 4,
        mutation: Mutation::GradingCountsClassesOnly,
        probe_n: 2,
        run: check_grading_additivity,
    },
];

fn entry(name: &str) -> Result<&'static Entry> {
    REGISTRY
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownCheck { name: name.to_string() })
}

/// The checks in registry order, with their default ground-size caps.
pub fn registered_checks() -> Vec<CheckInfo> {
    REGISTRY.iter().map(|e| CheckInfo { name: e.name, default_cap: e.cap }).collect()
}

/// The fault under which the named check is known to fail.
pub fn designated_mutation(name: &str) -> Result<Mutation> {
    Ok(entry(name)?.mutation)
}

/// The fault paired with a ground size at which it makes the named check
/// fail.
pub fn designated_probe(name: &str) -> Result<(Mutation, usize)> {
    let e = entry(name)?;
    Ok((e.mutation, e.probe_n))
}

fn run_inner(e: &Entry, ctx: Ctx, n: usize, mode: ExecMode) -> Result<VerificationReport> {
    let start = Instant::now();
    let (count, cex) = (e.run)(&ctx, n, mode)?;
    Ok(VerificationReport {
        name: e.name.to_string(),
        ground_size: n,
        basis_elements_checked: count,
        passed: cex.is_none(),
        counterexample: cex,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Run one check at an explicit ground size, honest maps, default
/// execution mode.
pub fn run_check(name: &str, n: usize) -> Result<VerificationReport> {
    run_check_mode(name, n, ExecMode::default())
}

pub fn run_check_mode(name: &str, n: usize, mode: ExecMode) -> Result<VerificationReport> {
    run_inner(entry(name)?, Ctx::NONE, n, mode)
}

/// Run one check against a deliberately broken context.
pub fn run_check_mutated(name: &str, n: usize, mutation: Mutation) -> Result<VerificationReport> {
    run_inner(entry(name)?, Ctx::new(mutation), n, ExecMode::default())
}

/// Run every registered check at `min(n_max, its cap)`, in registry order.
pub fn run_all(n_max: usize) -> Result<Vec<VerificationReport>> {
    run_all_mode(n_max, ExecMode::default())
}

pub fn run_all_mode(n_max: usize, mode: ExecMode) -> Result<Vec<VerificationReport>> {
    REGISTRY.iter().map(|e| run_inner(e, Ctx::NONE, n_max.min(e.cap), mode)).collect()
}

// ---- sweep infrastructure ----

fn sweep<T, F>(mode: ExecMode, items: Vec<T>, f: F) -> Result<(u64, Option<Value>)>
where
    T: Send,
    F: Fn(T) -> Result<Option<Value>> + Sync + Send,
{
    let count = items.len() as u64;
    let results = exec::map_collect(mode, items, f);
    let mut first = None;
    for r in results {
        let v = r?;
        if first.is_none() {
            first = v;
        }
    }
    Ok((count, first))
}

fn full_labels(n: usize) -> LabelSet {
    LabelSet::from_range(n)
}

fn universe_tops(n: usize, mode: ExecMode) -> Result<Vec<Topology>> {
    enumerate::collect_all_capped(&full_labels(n), n.max(enumerate::DEFAULT_ENUM_CAP), mode)
}

fn universe_pairs_open(n: usize, mode: ExecMode) -> Result<Vec<(Topology, LabelSet)>> {
    let mut out = Vec::new();
    for t in universe_tops(n, mode)? {
        for o in t.open_sets() {
            out.push((t.clone(), o.into_members()));
        }
    }
    Ok(out)
}

/// Refinement lists for every full-ground topology, computed once up front.
fn refs_map(
    ctx: &Ctx,
    tops: &[Topology],
    mode: ExecMode,
) -> Result<HashMap<Topology, Vec<Topology>>> {
    let ctx = *ctx;
    let results = exec::map_collect(mode, tops.to_vec(), move |t| {
        let refs = ctx.refinements(&t)?;
        Ok::<_, Error>((t, refs))
    });
    let mut map = HashMap::with_capacity(tops.len());
    for r in results {
        let (t, refs) = r?;
        map.insert(t, refs);
    }
    Ok(map)
}

fn refs_for(ctx: &Ctx, refs: &HashMap<Topology, Vec<Topology>>, t: &Topology) -> Result<Vec<Topology>> {
    match refs.get(t) {
        Some(r) => Ok(r.clone()),
        None => ctx.refinements(t),
    }
}

fn universe_pairs_adm(
    tops: &[Topology],
    refs: &HashMap<Topology, Vec<Topology>>,
) -> Vec<(Topology, Topology)> {
    let mut out = Vec::new();
    for t in tops {
        for r in &refs[t] {
            out.push((t.clone(), r.clone()));
        }
    }
    out
}

/// All subsets of a label set, in ascending bitmask order over the sorted
/// labels.
fn subsets(labels: &LabelSet) -> Vec<LabelSet> {
    let v: Vec<Label> = labels.iter().collect();
    (0..1u32 << v.len())
        .map(|m| {
            LabelSet::new(
                v.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &l)| l),
            )
        })
        .collect()
}

/// The refining coproduct computed through a precomputed refinement table.
fn gamma_with(
    ctx: &Ctx,
    refs: &HashMap<Topology, Vec<Topology>>,
    t: &Topology,
) -> Result<LinComb> {
    let mut out = LinComb::zero();
    for r in refs_for(ctx, refs, t)? {
        let q = ctx.quotient(t, &r)?;
        out.add_term(
            BasisKey::tensor(TensorKind::Internal, vec![BasisKey::top(r), BasisKey::top(q)])?,
            Coeff::one(),
        );
    }
    Ok(out)
}

fn as_top(k: &BasisKey) -> Result<&Topology> {
    match k {
        BasisKey::Top(t) => Ok(t),
        _ => Err(Error::BasisKindMismatch),
    }
}

fn as_pair_open(k: &BasisKey) -> Result<(&Topology, &LabelSet)> {
    match k {
        BasisKey::PairOpen { topology, open } => Ok((topology, open)),
        _ => Err(Error::BasisKindMismatch),
    }
}

fn as_pair_adm(k: &BasisKey) -> Result<(&Topology, &Topology)> {
    match k {
        BasisKey::PairAdm(p) => Ok((p.base(), p.refinement())),
        _ => Err(Error::BasisKindMismatch),
    }
}

fn factors(k: &BasisKey) -> Result<&[BasisKey]> {
    k.tensor_factors().ok_or(Error::BasisKindMismatch)
}

// ---- the checks ----

/// Splitting coproduct is coassociative on topologies.
fn check_coassoc_delta_t(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let ctx = *ctx;
    let tops = universe_tops(n, mode)?;
    sweep(mode, tops, move |t| {
        let d = ctx.delta_external(&t)?;
        let lhs = d.map_slot(0, TensorKind::Species, |k| ctx.delta_external(as_top(k)?))?;
        let rhs = d.map_slot(1, TensorKind::Species, |k| ctx.delta_external(as_top(k)?))?;
        Ok((lhs != rhs).then(|| json!({"topology": t, "lhs": lhs, "rhs": rhs})))
    })
}

/// Refining coproduct is coassociative on topologies.
fn check_coassoc_gamma_t(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let tops = universe_tops(n, mode)?;
    let refs = refs_map(ctx, &tops, mode)?;
    let ctx = *ctx;
    sweep(mode, tops, move |t| {
        let g = gamma_with(&ctx, &refs, &t)?;
        let lhs = g.map_slot(0, TensorKind::Internal, |k| gamma_with(&ctx, &refs, as_top(k)?))?;
        let rhs = g.map_slot(1, TensorKind::Internal, |k| gamma_with(&ctx, &refs, as_top(k)?))?;
        Ok((lhs != rhs).then(|| json!({"topology": t, "lhs": lhs, "rhs": rhs})))
    })
}

/// Applying the splitting coproduct inside the refining one equals
/// refining both halves of a split and remultiplying the refinements.
fn check_compat_t(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let tops = universe_tops(n, mode)?;
    let refs = refs_map(ctx, &tops, mode)?;
    let ctx = *ctx;
    sweep(mode, tops, move |t| {
        let lhs = gamma_with(&ctx, &refs, &t)?
            .map_slot(1, TensorKind::Internal, |k| ctx.delta_external(as_top(k)?))?;
        let rhs = ctx
            .delta_external(&t)?
            .map_slot(0, TensorKind::Internal, |k| gamma_with(&ctx, &refs, as_top(k)?))?
            .map_slot(2, TensorKind::Internal, |k| gamma_with(&ctx, &refs, as_top(k)?))?
            .extend_linear(|k| ctx.m13(factors(k)?))?;
        Ok((lhs != rhs).then(|| json!({"topology": t, "lhs": lhs, "rhs": rhs})))
    })
}

/// Splitting coproduct is coassociative on topology/open pairs.
fn check_coassoc_delta_d(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let ctx = *ctx;
    let pairs = universe_pairs_open(n, mode)?;
    sweep(mode, pairs, move |(t, y)| {
        let d = ctx.delta_d(&t, &y)?;
        let apply = |k: &BasisKey| {
            let (u, z) = as_pair_open(k)?;
            ctx.delta_d(u, z)
        };
        let lhs = d.map_slot(0, TensorKind::Species, apply)?;
        let rhs = d.map_slot(1, TensorKind::Species, apply)?;
        Ok((lhs != rhs).then(|| json!({"topology": t, "open": y, "lhs": lhs, "rhs": rhs})))
    })
}

/// The pair coproduct always emits the `unit (x) (input)` term, and emits
/// `(input) (x) unit` exactly when the open is the whole ground set. In
/// particular no two-sided counit exists.
fn check_noncounital_d(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let ctx = *ctx;
    let pairs = universe_pairs_open(n, mode)?;
    sweep(mode, pairs, move |(t, y)| {
        let d = ctx.delta_d(&t, &y)?;
        let me = BasisKey::pair_open_unchecked(t.clone(), y.clone());
        let left_unit = BasisKey::tensor(
            TensorKind::Species,
            vec![BasisKey::unit_pair_open(), me.clone()],
        )?;
        let right_unit =
            BasisKey::tensor(TensorKind::Species, vec![me, BasisKey::unit_pair_open()])?;
        let want_right = if y == *t.labels() { Coeff::one() } else { Coeff::zero() };
        let ok = d.coeff(&left_unit) == Coeff::one() && d.coeff(&right_unit) == want_right;
        Ok((!ok).then(|| {
            json!({
                "topology": t, "open": y,
                "left_unit_coeff": d.coeff(&left_unit).to_string(),
                "right_unit_coeff": d.coeff(&right_unit).to_string(),
            })
        }))
    })
}

/// Refining coproduct is coassociative on admissible pairs.
fn check_coassoc_gamma_dt(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let tops = universe_tops(n, mode)?;
    let refs = refs_map(ctx, &tops, mode)?;
    let pairs = universe_pairs_adm(&tops, &refs);
    let ctx = *ctx;
    sweep(mode, pairs, move |(b, r)| {
        let g = ctx.gamma_dtilde(&b, &r)?;
        let apply = |k: &BasisKey| {
            let (x, y) = as_pair_adm(k)?;
            ctx.gamma_dtilde(x, y)
        };
        let lhs = g.map_slot(0, TensorKind::Internal, apply)?;
        let rhs = g.map_slot(1, TensorKind::Internal, apply)?;
        Ok((lhs != rhs).then(|| json!({"base": b, "refinement": r, "lhs": lhs, "rhs": rhs})))
    })
}

/// The degree-zero indicator of the refinement component is a two-sided
/// counit for the pair-family refining coproduct.
fn check_counit_gamma_dt(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let tops = universe_tops(n, mode)?;
    let refs = refs_map(ctx, &tops, mode)?;
    let pairs = universe_pairs_adm(&tops, &refs);
    let ctx = *ctx;
    sweep(mode, pairs, move |(b, r)| {
        let g = ctx.gamma_dtilde(&b, &r)?;
        let me = LinComb::from_key(BasisKey::from_adm(AdmissiblePair::new_unchecked(
            b.clone(),
            r.clone(),
        )));
        let mut left = LinComb::zero();
        let mut right = LinComb::zero();
        for (k, c) in g.terms() {
            let f = factors(k)?;
            let (_, r1) = as_pair_adm(&f[0])?;
            let (_, r2) = as_pair_adm(&f[1])?;
            left.add_term(f[1].clone(), c * ctx.counit_scalar(r1));
            right.add_term(f[0].clone(), c * ctx.counit_scalar(r2));
        }
        let ok = left == me && right == me;
        Ok((!ok).then(|| json!({"base": b, "refinement": r, "left": left, "right": right})))
    })
}

/// Forgetting the base intertwines the pair-family coproduct and counit
/// with the plain refining coproduct and counit.
fn check_p2_morphism(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let tops = universe_tops(n, mode)?;
    let refs = refs_map(ctx, &tops, mode)?;
    let pairs = universe_pairs_adm(&tops, &refs);
    let ctx = *ctx;
    sweep(mode, pairs, move |(b, r)| {
        let g = ctx.gamma_dtilde(&b, &r)?;
        let mut lhs = LinComb::zero();
        for (k, c) in g.terms() {
            let f = factors(k)?;
            let (b1, r1) = as_pair_adm(&f[0])?;
            let (b2, r2) = as_pair_adm(&f[1])?;
            lhs.add_term(
                BasisKey::tensor(
                    TensorKind::Internal,
                    vec![ctx.p2_key(b1, r1), ctx.p2_key(b2, r2)],
                )?,
                c.clone(),
            );
        }
        let p = ctx.p2_key(&b, &r);
        let pt = as_top(&p)?;
        let rhs = gamma_with(&ctx, &refs, pt)?;
        let counit_ok = ctx.counit_scalar(pt) == ctx.counit_scalar(&r);
        let ok = lhs == rhs && counit_ok;
        Ok((!ok).then(|| json!({"base": b, "refinement": r, "lhs": lhs, "rhs": rhs})))
    })
}

/// Restricting an admissible pair to an open set of the base stays
/// admissible.
fn check_restriction_admissible(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let tops = universe_tops(n, mode)?;
    let refs = refs_map(ctx, &tops, mode)?;
    let mut items = Vec::new();
    for t in &tops {
        for r in &refs[t] {
            for o in t.open_sets() {
                items.push((t.clone(), r.clone(), o.into_members()));
            }
        }
    }
    let ctx = *ctx;
    sweep(mode, items, move |(t, r, y)| {
        let rt = t.restrict(&y)?;
        let rr = ctx.restrict_refined(&r, &y)?;
        let ok = rr.is_admissible_for(&rt)?;
        Ok((!ok).then(|| json!({"base": t, "refinement": r, "open": y, "restricted_refinement": rr})))
    })
}

/// The coaction on topology/open pairs is coassociative over the
/// pair-family coproduct.
fn check_comodule_phi(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let ctx = *ctx;
    let pairs = universe_pairs_open(n, mode)?;
    sweep(mode, pairs, move |(t, y)| {
        let p = ctx.phi(&t, &y)?;
        let lhs = p.map_slot(0, TensorKind::Internal, |k| {
            let (b, r) = as_pair_adm(k)?;
            ctx.gamma_dtilde(b, r)
        })?;
        let rhs = p.map_slot(1, TensorKind::Internal, |k| {
            let (u, z) = as_pair_open(k)?;
            ctx.phi(u, z)
        })?;
        Ok((lhs != rhs).then(|| json!({"topology": t, "open": y, "lhs": lhs, "rhs": rhs})))
    })
}

/// The coaction turns disjoint-union products into slotwise products.
fn check_phi_monoid(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let labels = full_labels(n);
    let mut items = Vec::new();
    for s in subsets(&labels) {
        let comp = labels.difference(&s);
        let mut lefts = Vec::new();
        for t in enumerate::collect_all_capped(&s, s.len().max(enumerate::DEFAULT_ENUM_CAP), ExecMode::Sequential)? {
            for o in t.open_sets() {
                lefts.push((t.clone(), o.into_members()));
            }
        }
        let mut rights = Vec::new();
        for t in enumerate::collect_all_capped(&comp, comp.len().max(enumerate::DEFAULT_ENUM_CAP), ExecMode::Sequential)? {
            for o in t.open_sets() {
                rights.push((t.clone(), o.into_members()));
            }
        }
        for a in &lefts {
            for b in &rights {
                items.push((a.clone(), b.clone()));
            }
        }
    }
    let ctx = *ctx;
    sweep(mode, items, move |((ta, ya), (tb, yb))| {
        let pt = ctx.disjoint_union(&ta, &tb)?;
        let py = ya.union(&yb);
        let lhs = ctx.phi(&pt, &py)?;
        let pa = ctx.phi(&ta, &ya)?;
        let pb = ctx.phi(&tb, &yb)?;
        let mut rhs = LinComb::zero();
        for (ka, ca) in pa.terms() {
            for (kb, cb) in pb.terms() {
                let fa = factors(ka)?;
                let fb = factors(kb)?;
                let left = ctx.m_key(&fa[0], &fb[0])?;
                let right = ctx.m_key(&fa[1], &fb[1])?;
                rhs.add_term(BasisKey::tensor(TensorKind::Internal, vec![left, right])?, ca * cb);
            }
        }
        Ok((lhs != rhs).then(|| {
            json!({
                "left": {"topology": ta, "open": ya},
                "right": {"topology": tb, "open": yb},
                "lhs": lhs, "rhs": rhs,
            })
        }))
    })
}

/// Result of one partial-product evaluation over the interned pair table.
enum StarRes {
    Undef,
    At(usize),
    Val(Box<(Topology, LabelSet)>),
}

/// The partial product on open pairs is associative, with undefined
/// products acting as zero.
fn check_star_assoc(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    // every topology/open pair on every subset of the ground set
    let labels = full_labels(n);
    let mut pairs: Vec<(Topology, LabelSet)> = Vec::new();
    for s in subsets(&labels) {
        for t in enumerate::collect_all_capped(&s, s.len().max(enumerate::DEFAULT_ENUM_CAP), ExecMode::Sequential)? {
            for o in t.open_sets() {
                pairs.push((t.clone(), o.into_members()));
            }
        }
    }
    let index: HashMap<(Topology, LabelSet), usize> =
        pairs.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let len = pairs.len();
    let ctx = *ctx;

    // precompute all pairwise products
    let rows = exec::map_collect(mode, (0..len).collect::<Vec<_>>(), |i| {
        let mut row = Vec::with_capacity(len);
        for j in 0..len {
            let r = ctx.star(&pairs[i].0, &pairs[i].1, &pairs[j].0, &pairs[j].1)?;
            row.push(match r {
                None => StarRes::Undef,
                Some(v) => match index.get(&v) {
                    Some(&at) => StarRes::At(at),
                    None => StarRes::Val(Box::new(v)),
                },
            });
        }
        Ok::<_, Error>(row)
    });
    let mut table = Vec::with_capacity(len);
    for r in rows {
        table.push(r?);
    }

    enum R {
        Undef,
        Idx(usize),
        Owned((Topology, LabelSet)),
    }
    let resolve = |r: &StarRes| match r {
        StarRes::Undef => R::Undef,
        StarRes::At(i) => R::Idx(*i),
        StarRes::Val(v) => R::Owned(*v.clone()),
    };
    let eq = |a: &R, b: &R| match (a, b) {
        (R::Undef, R::Undef) => true,
        (R::Idx(x), R::Idx(y)) => x == y,
        (R::Owned(x), R::Owned(y)) => x == y,
        (R::Idx(x), R::Owned(y)) | (R::Owned(y), R::Idx(x)) => pairs[*x] == *y,
        _ => false,
    };
    let describe = |r: &R| match r {
        R::Undef => json!(null),
        R::Idx(x) => json!({"topology": pairs[*x].0, "open": pairs[*x].1}),
        R::Owned(x) => json!({"topology": x.0, "open": x.1}),
    };

    let (_, cex) = sweep(mode, (0..len).collect::<Vec<_>>(), |i| {
        for j in 0..len {
            for k in 0..len {
                let lhs = match &table[i][j] {
                    StarRes::Undef => R::Undef,
                    StarRes::At(x) => resolve(&table[*x][k]),
                    StarRes::Val(v) => match ctx.star(&v.0, &v.1, &pairs[k].0, &pairs[k].1)? {
                        None => R::Undef,
                        Some(p) => R::Owned(p),
                    },
                };
                let rhs = match &table[j][k] {
                    StarRes::Undef => R::Undef,
                    StarRes::At(x) => resolve(&table[i][*x]),
                    StarRes::Val(v) => match ctx.star(&pairs[i].0, &pairs[i].1, &v.0, &v.1)? {
                        None => R::Undef,
                        Some(p) => R::Owned(p),
                    },
                };
                if !eq(&lhs, &rhs) {
                    return Ok(Some(json!({
                        "a": {"topology": pairs[i].0, "open": pairs[i].1},
                        "b": {"topology": pairs[j].0, "open": pairs[j].1},
                        "c": {"topology": pairs[k].0, "open": pairs[k].1},
                        "lhs": describe(&lhs), "rhs": describe(&rhs),
                    })));
                }
            }
        }
        Ok(None)
    })?;
    Ok(((len as u64).pow(3), cex))
}

/// The partial product on admissible pairs is associative along quotient
/// towers. Exhaustive through ground size 2, deterministic stride sample
/// of at least 1000 towers beyond that.
fn check_divtimes_assoc(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let tops = universe_tops(n, mode)?;
    let refs = refs_map(ctx, &tops, mode)?;
    let mut triples = Vec::new();
    for t in &tops {
        for tp in &refs[t] {
            let q1 = ctx.quotient(t, tp)?;
            for s in refs_for(ctx, &refs, &q1)? {
                let q2 = ctx.quotient(&q1, &s)?;
                for rr in refs_for(ctx, &refs, &q2)? {
                    triples.push((t.clone(), tp.clone(), q1.clone(), s.clone(), q2.clone(), rr));
                }
            }
        }
    }
    let sampled = if n <= 2 {
        triples
    } else {
        let stride = (triples.len() / 1000).max(1);
        triples.into_iter().step_by(stride).collect()
    };
    let ctx = *ctx;
    sweep(mode, sampled, move |(t, tp, q1, s, q2, rr)| {
        let ab = ctx.divtimes(&t, &tp, &q1, &s)?;
        let lhs = ab.extend_linear(|k| {
            let (x, y) = as_pair_adm(k)?;
            ctx.divtimes(x, y, &q2, &rr)
        })?;
        let bc = ctx.divtimes(&q1, &s, &q2, &rr)?;
        let rhs = bc.extend_linear(|k| {
            let (x, y) = as_pair_adm(k)?;
            ctx.divtimes(&t, &tp, x, y)
        })?;
        Ok((lhs != rhs).then(|| {
            json!({
                "a": {"base": t, "refinement": tp},
                "b": {"base": q1, "refinement": s},
                "c": {"base": q2, "refinement": rr},
                "lhs": lhs, "rhs": rhs,
            })
        }))
    })
}

/// Quotienting by an inner refinement is a bijection between the
/// refinements sandwiched over it and the refinements of the quotient:
/// injective, and onto exactly that set.
fn check_lemma21_bijection(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let tops = universe_tops(n, mode)?;
    let refs = refs_map(ctx, &tops, mode)?;
    let pairs = universe_pairs_adm(&tops, &refs);
    let ctx = *ctx;
    sweep(mode, pairs, move |(t, t2)| {
        let q = ctx.quotient(&t, &t2)?;
        let mut images = BTreeSet::new();
        let mut duplicated = false;
        for tp in refs_for(&ctx, &refs, &t)? {
            if !t2.is_admissible_for(&tp)? {
                continue;
            }
            if !images.insert(ctx.quotient(&tp, &t2)?) {
                duplicated = true;
            }
        }
        let targets: BTreeSet<Topology> = refs_for(&ctx, &refs, &q)?.into_iter().collect();
        let ok = !duplicated && images == targets;
        Ok((!ok).then(|| {
            json!({
                "base": t, "inner": t2, "duplicated": duplicated,
                "images": images.len(), "targets": targets.len(),
            })
        }))
    })
}

/// The pair action factors through the partial pair product: acting by a
/// product equals acting twice. Exhaustive through ground size 2.
fn check_psi_action(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let tops = universe_tops(n, mode)?;
    let refs = refs_map(ctx, &tops, mode)?;
    let adm = universe_pairs_adm(&tops, &refs);
    let mut opens = Vec::new();
    for t in &tops {
        for o in t.open_sets() {
            opens.push((t.clone(), o.into_members()));
        }
    }
    let total = adm.len() * adm.len() * opens.len();
    let idxs: Vec<usize> = if n <= 2 {
        (0..total).collect()
    } else {
        let stride = (total / 1000).max(1);
        (0..total).step_by(stride).collect()
    };
    let ctx = *ctx;
    sweep(mode, idxs, move |idx| {
        let i = idx / (adm.len() * opens.len());
        let rem = idx % (adm.len() * opens.len());
        let j = rem / opens.len();
        let k = rem % opens.len();
        let (ta, ra) = &adm[i];
        let (tb, rb) = &adm[j];
        let (zt, zy) = &opens[k];
        let ab = ctx.divtimes(ta, ra, tb, rb)?;
        let lhs = ab.extend_linear(|key| {
            let (x, y) = as_pair_adm(key)?;
            ctx.psi(x, y, zt, zy)
        })?;
        let inner = ctx.psi(tb, rb, zt, zy)?;
        let rhs = inner.extend_linear(|key| {
            let (u, yy) = as_pair_open(key)?;
            ctx.psi(ta, ra, u, yy)
        })?;
        Ok((lhs != rhs).then(|| {
            json!({
                "a": {"base": ta, "refinement": ra},
                "b": {"base": tb, "refinement": rb},
                "operand": {"topology": zt, "open": zy},
                "lhs": lhs, "rhs": rhs,
            })
        }))
    })
}

/// A subset is open in the quotient iff it is open in the base and its
/// complement is open in the refinement.
fn check_open_complement_lemma(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let tops = universe_tops(n, mode)?;
    let refs = refs_map(ctx, &tops, mode)?;
    let pairs = universe_pairs_adm(&tops, &refs);
    let count = pairs.len() as u64 * (1u64 << n);
    let ctx = *ctx;
    let (_, cex) = sweep(mode, pairs, move |(t, tp)| {
        let q = ctx.quotient(&t, &tp)?;
        for y in subsets(t.labels()) {
            let comp = t.labels().difference(&y);
            let in_quotient = q.is_open(&y)?;
            let criterion = t.is_open(&y)? && tp.is_open(&comp)?;
            if in_quotient != criterion {
                return Ok(Some(json!({
                    "base": t, "refinement": tp, "subset": y,
                    "open_in_quotient": in_quotient, "criterion": criterion,
                })));
            }
        }
        Ok(None)
    })?;
    Ok((count, cex))
}

/// Splitting a topology along an open set (restriction to the open sum
/// restriction to the complement) yields an admissible refinement.
fn check_tsplit_lemma(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let ctx = *ctx;
    let pairs = universe_pairs_open(n, mode)?;
    sweep(mode, pairs, move |(t, y)| {
        let comp = t.labels().difference(&y);
        let split = ctx.disjoint_union(&t.restrict(&y)?, &t.restrict(&comp)?)?;
        let ok = split.is_admissible_for(&t)?;
        Ok((!ok).then(|| json!({"topology": t, "open": y, "split": split})))
    })
}

/// Splitting after coacting equals coacting on both halves of a split and
/// remultiplying the pair components.
fn check_cointeraction(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let ctx = *ctx;
    let pairs = universe_pairs_open(n, mode)?;
    sweep(mode, pairs, move |(t, y)| {
        let lhs = ctx
            .phi(&t, &y)?
            .map_slot(1, TensorKind::Internal, |k| {
                let (u, z) = as_pair_open(k)?;
                ctx.delta_d(u, z)
            })?
            .extend_linear(|k| {
                let f = factors(k)?;
                let (b, r) = as_pair_adm(&f[0])?;
                let (u1, z) = as_pair_open(&f[1])?;
                let (u2, w) = as_pair_open(&f[2])?;
                ctx.xi(b, r, u1, z, u2, w)
            })?;
        let rhs = ctx
            .delta_d(&t, &y)?
            .map_slot(0, TensorKind::Internal, |k| {
                let (u, z) = as_pair_open(k)?;
                ctx.phi(u, z)
            })?
            .map_slot(2, TensorKind::Internal, |k| {
                let (u, z) = as_pair_open(k)?;
                ctx.phi(u, z)
            })?
            .extend_linear(|k| ctx.m13(factors(k)?))?;
        Ok((lhs != rhs).then(|| json!({"topology": t, "open": y, "lhs": lhs, "rhs": rhs})))
    })
}

/// An admissible refinement of an admissible refinement is admissible for
/// the original.
fn check_admissibility_transitive(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let tops = universe_tops(n, mode)?;
    let refs = refs_map(ctx, &tops, mode)?;
    let mut items = Vec::new();
    for t in &tops {
        for tp in &refs[t] {
            for tpp in refs_for(ctx, &refs, tp)? {
                items.push((t.clone(), tp.clone(), tpp));
            }
        }
    }
    sweep(mode, items, move |(t, tp, tpp)| {
        let ok = tpp.is_admissible_for(&t)?;
        Ok((!ok).then(|| json!({"outer": t, "middle": tp, "inner": tpp})))
    })
}

/// The degree-zero indicator is a two-sided counit for the refining
/// coproduct on topologies.
fn check_counit_gamma_t(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let tops = universe_tops(n, mode)?;
    let refs = refs_map(ctx, &tops, mode)?;
    let ctx = *ctx;
    sweep(mode, tops, move |t| {
        let g = gamma_with(&ctx, &refs, &t)?;
        let me = LinComb::from_key(BasisKey::top(t.clone()));
        let mut left = LinComb::zero();
        let mut right = LinComb::zero();
        for (k, c) in g.terms() {
            let f = factors(k)?;
            left.add_term(f[1].clone(), c * ctx.counit_scalar(as_top(&f[0])?));
            right.add_term(f[0].clone(), c * ctx.counit_scalar(as_top(&f[1])?));
        }
        let ok = left == me && right == me;
        Ok((!ok).then(|| json!({"topology": t, "left": left, "right": right})))
    })
}

/// Degree adds along admissible refinement: refinement degree plus
/// quotient degree equals base degree.
fn check_grading_additivity(ctx: &Ctx, n: usize, mode: ExecMode) -> Result<(u64, Option<Value>)> {
    let tops = universe_tops(n, mode)?;
    let refs = refs_map(ctx, &tops, mode)?;
    let pairs = universe_pairs_adm(&tops, &refs);
    let ctx = *ctx;
    sweep(mode, pairs, move |(t, tp)| {
        let q = ctx.quotient(&t, &tp)?;
        let lhs = ctx.grading(&tp) + ctx.grading(&q);
        let rhs = ctx.grading(&t);
        Ok((lhs != rhs).then(|| {
            json!({
                "base": t, "refinement": tp, "quotient": q,
                "refinement_plus_quotient": lhs, "base_degree": rhs,
            })
        }))
    })
}
