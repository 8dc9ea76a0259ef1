//! Covers of the circle geometry CG(3,q) given by norm equations.
//!
//! Two families:
//!
//! * type I: `{x ∈ GF(q³) : N(x - a) = f}`;
//! * type II: `{x ∈ GF(q³) ∪ {∞} : N((x - a)/(x - b)) = f}` with `a ≠ b`.
//!
//! In type II the pole `x = b` is excluded, `x = a` never satisfies the
//! equation (the left side is 0), and ∞ is a member exactly when `f = 1`,
//! reading `(∞ - a)/(∞ - b)` as 1.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elt, FieldCtx};
use crate::spread::CirclePoint;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CoverKind {
    I,
    II,
}

impl fmt::Display for CoverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoverKind::I => "I",
            CoverKind::II => "II",
        })
    }
}

/// Defining parameters of a cover.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoverParams {
    TypeI { a: Elt, f: Elt },
    TypeII { a: Elt, b: Elt, f: Elt },
}

impl CoverParams {
    pub fn kind(&self) -> CoverKind {
        match self {
            CoverParams::TypeI { .. } => CoverKind::I,
            CoverParams::TypeII { .. } => CoverKind::II,
        }
    }
}

/// Canonical key of a point set: the sorted circle-point labels, ∞ (label
/// q³) last.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CoverKey(pub Vec<u16>);

impl CoverKey {
    pub fn from_points(points: &[CirclePoint], order: u32) -> Self {
        let mut labels: Vec<u16> = points.iter().map(|p| p.label(order)).collect();
        labels.sort_unstable();
        CoverKey(labels)
    }

    pub fn points(&self, order: u32) -> Vec<CirclePoint> {
        self.0
            .iter()
            .map(|&l| CirclePoint::from_label(l, order))
            .collect()
    }
}

/// A cover: q²+q+1 circle points with the parameters that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub params: CoverParams,
    points: Vec<CirclePoint>,
    key: CoverKey,
}

impl Cover {
    fn new(params: CoverParams, mut points: Vec<CirclePoint>, order: u32) -> Self {
        points.sort_unstable();
        let key = CoverKey::from_points(&points, order);
        Cover {
            params,
            points,
            key,
        }
    }

    pub fn kind(&self) -> CoverKind {
        self.params.kind()
    }

    /// Members in label order.
    pub fn points(&self) -> &[CirclePoint] {
        &self.points
    }

    pub fn key(&self) -> &CoverKey {
        &self.key
    }

    pub fn contains(&self, m: CirclePoint) -> bool {
        self.points.binary_search(&m).is_ok()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn check_norm_value(ctx: &FieldCtx, f: Elt) -> Result<()> {
    if f.is_zero() || !ctx.is_base(f) {
        return Err(Error::InvalidNormValue(f.index() as u32));
    }
    Ok(())
}

/// `{x : N(x - a) = f}`.
pub fn cover_type1(ctx: &FieldCtx, a: Elt, f: Elt) -> Result<Cover> {
    check_norm_value(ctx, f)?;
    let points = ctx
        .elements()
        .filter(|&x| ctx.norm(ctx.sub(x, a)) == f)
        .map(CirclePoint::Finite)
        .collect();
    Ok(Cover::new(CoverParams::TypeI { a, f }, points, ctx.order()))
}

/// `{x ≠ b : N((x - a)/(x - b)) = f}`, plus ∞ when `f = 1`.
pub fn cover_type2(ctx: &FieldCtx, a: Elt, b: Elt, f: Elt) -> Result<Cover> {
    check_norm_value(ctx, f)?;
    if a == b {
        return Err(Error::EqualPoles);
    }
    let mut points: Vec<CirclePoint> = ctx
        .elements()
        .filter(|&x| x != b && ctx.norm(ctx.div_nonzero(ctx.sub(x, a), ctx.sub(x, b))) == f)
        .map(CirclePoint::Finite)
        .collect();
    if f == Elt::ONE {
        points.push(CirclePoint::Infinity);
    }
    Ok(Cover::new(
        CoverParams::TypeII { a, b, f },
        points,
        ctx.order(),
    ))
}

/// Builds a cover from explicit parameters.
pub fn cover_from_params(ctx: &FieldCtx, params: CoverParams) -> Result<Cover> {
    match params {
        CoverParams::TypeI { a, f } => cover_type1(ctx, a, f),
        CoverParams::TypeII { a, b, f } => cover_type2(ctx, a, b, f),
    }
}

/// Every cover of CG(3,q), deduplicated by key, with the bookkeeping needed
/// to check the family counts.
#[derive(Clone, Debug)]
pub struct CoverCatalog {
    q: u32,
    order: u32,
    /// One representative per key, in key order. Type-II representatives use
    /// the parametrization with `a < b`.
    covers: Vec<Cover>,
    index: HashMap<CoverKey, usize>,
    /// Distinct type-I covers.
    pub type_i: usize,
    /// Distinct type-II covers.
    pub type_ii: usize,
    /// Type-II parameter triples visited, q³(q³-1)(q-1).
    pub type_ii_params: usize,
    /// Every type-I parameter pair gave its own key.
    pub type_i_injective: bool,
    /// Each type-II key arose from exactly two triples, and they were
    /// `(a, b, f)` and `(b, a, 1/f)`.
    pub swap_pairs_only: bool,
    /// No key is shared between the two families.
    pub families_disjoint: bool,
    /// Every cover has q²+q+1 points.
    pub sizes_ok: bool,
}

impl CoverCatalog {
    pub fn len(&self) -> usize {
        self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covers.is_empty()
    }

    pub fn covers(&self) -> &[Cover] {
        &self.covers
    }

    pub fn contains(&self, key: &CoverKey) -> bool {
        self.index.contains_key(key)
    }

    /// Position of `key` in [`Self::covers`].
    pub fn position(&self, key: &CoverKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// A deterministic sample of up to `n` covers that includes both kinds
    /// whenever `n ≥ 2`: half the draws come from each family.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<&Cover> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ones, twos): (Vec<&Cover>, Vec<&Cover>) =
            self.covers.iter().partition(|c| c.kind() == CoverKind::I);
        let n_one = (n / 2).min(ones.len());
        let n_two = (n - n_one).min(twos.len());
        let mut out: Vec<&Cover> = ones.choose_multiple(&mut rng, n_one).copied().collect();
        out.extend(twos.choose_multiple(&mut rng, n_two).copied());
        out.sort_by(|a, b| a.key().cmp(b.key()));
        out
    }
}

/// Enumerates both families over their full parameter grids and
/// deduplicates by key.
pub fn enumerate_covers(ctx: &FieldCtx) -> CoverCatalog {
    let order = ctx.order();
    let target = (ctx.q() * ctx.q() + ctx.q() + 1) as usize;
    let mut sizes_ok = true;

    let mut type_i: HashMap<CoverKey, Vec<CoverParams>> = HashMap::new();
    let mut type_i_covers = Vec::new();
    for a in ctx.elements() {
        for f in ctx.nonzero_base_elements() {
            let cover = cover_type1(ctx, a, f).expect("valid parameters");
            sizes_ok &= cover.len() == target;
            type_i
                .entry(cover.key.clone())
                .or_default()
                .push(cover.params);
            type_i_covers.push(cover);
        }
    }
    let type_i_injective = type_i.values().all(|v| v.len() == 1);

    let mut type_ii: HashMap<CoverKey, Vec<CoverParams>> = HashMap::new();
    let mut type_ii_covers = Vec::new();
    let mut type_ii_params = 0;
    for a in ctx.elements() {
        for b in ctx.elements().filter(|&b| b != a) {
            for f in ctx.nonzero_base_elements() {
                let cover = cover_type2(ctx, a, b, f).expect("valid parameters");
                type_ii_params += 1;
                sizes_ok &= cover.len() == target;
                type_ii
                    .entry(cover.key.clone())
                    .or_default()
                    .push(cover.params);
                if a < b {
                    type_ii_covers.push(cover);
                }
            }
        }
    }
    let swap_pairs_only = type_ii.values().all(|params| match params.as_slice() {
        [CoverParams::TypeII { a, b, f }, CoverParams::TypeII {
            a: a2,
            b: b2,
            f: f2,
        }] => a == b2 && b == a2 && ctx.mul(*f, *f2) == Elt::ONE,
        _ => false,
    });
    let families_disjoint = type_i.keys().all(|k| !type_ii.contains_key(k));

    let mut by_key: BTreeMap<CoverKey, Cover> = BTreeMap::new();
    for cover in type_i_covers.into_iter().chain(type_ii_covers) {
        by_key.entry(cover.key.clone()).or_insert(cover);
    }
    let covers: Vec<Cover> = by_key.into_values().collect();
    let index = covers
        .iter()
        .enumerate()
        .map(|(i, c)| (c.key.clone(), i))
        .collect();

    CoverCatalog {
        q: ctx.q(),
        order,
        covers,
        index,
        type_i: type_i.len(),
        type_ii: type_ii.len(),
        type_ii_params,
        type_i_injective,
        swap_pairs_only,
        families_disjoint,
        sizes_ok,
    }
}

/// Closed-form number of covers, ½q³(q-1)(q³+1).
pub fn cover_count(q: u64) -> u64 {
    q.pow(3) * (q - 1) * (q.pow(3) + 1) / 2
}

/// Closed-form type-I count, q³(q-1).
pub fn type_i_count(q: u64) -> u64 {
    q.pow(3) * (q - 1)
}

/// Closed-form type-II count, ½q³(q³-1)(q-1).
pub fn type_ii_count(q: u64) -> u64 {
    q.pow(3) * (q.pow(3) - 1) * (q - 1) / 2
}
