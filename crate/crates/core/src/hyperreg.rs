//! André hyper-reguli, their switching sets, and the search for every plane
//! meeting all planes of a hyper-regulus in a point.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::covers::{cover_type1, Cover, CoverKey, CoverKind, CoverParams};
use crate::error::{Error, Result};
use crate::gf::{Elt, FieldCtx};
use crate::pg5::{self, meet_dim, Plane, ProjPoint};
use crate::spread::{graph_plane, Spread};

/// The q²+q+1 spread elements labelled by the points of a cover.
#[derive(Clone, Debug)]
pub struct HyperRegulus {
    pub cover: Cover,
    pub planes: Vec<Plane>,
}

/// Relabels a cover as spread elements, re-checking pairwise disjointness.
pub fn hyper_regulus(spread: &Spread<'_>, cover: &Cover) -> Result<HyperRegulus> {
    let ctx = spread.ctx();
    let planes: Vec<Plane> = cover.points().iter().map(|&m| *spread.element(m)).collect();
    for (i, a) in planes.iter().enumerate() {
        for b in &planes[i + 1..] {
            if meet_dim(ctx, a, b) != -1 {
                return Err(Error::PartitionViolation(format!(
                    "hyper-regulus planes {} and {} intersect",
                    a.key(),
                    b.key()
                )));
            }
        }
    }
    Ok(HyperRegulus {
        cover: cover.clone(),
        planes,
    })
}

/// Two sets of q²+q+1 planes that can replace a hyper-regulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwitchingPair {
    pub y: Vec<Plane>,
    pub z: Vec<Plane>,
}

impl SwitchingPair {
    /// All planes of both sets, sorted.
    pub fn union(&self) -> Vec<Plane> {
        let set: BTreeSet<Plane> = self.y.iter().chain(&self.z).copied().collect();
        set.into_iter().collect()
    }
}

/// Checks the switching property for `X`, `Y`, `Z`: planes within one set
/// are disjoint, planes from different sets meet in exactly one point.
pub fn verify_switching(ctx: &FieldCtx, x: &[Plane], pair: &SwitchingPair) -> Result<()> {
    let sets = [("X", x), ("Y", &pair.y[..]), ("Z", &pair.z[..])];
    for (i, (name_a, set_a)) in sets.iter().enumerate() {
        for (name_b, set_b) in &sets[i..] {
            let same = name_a == name_b;
            for (ia, a) in set_a.iter().enumerate() {
                for (ib, b) in set_b.iter().enumerate() {
                    if same && ia == ib {
                        continue;
                    }
                    let want = if same { -1 } else { 0 };
                    let got = meet_dim(ctx, a, b);
                    if got != want {
                        return Err(Error::SwitchingViolation(format!(
                            "{name_a}[{ia}] and {name_b}[{ib}] meet in dimension {got}, expected {want}"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// The switching sets of the type-I hyper-regulus `{J(n) : N(n - a) = f}`:
///
/// * `Y = { {(t, a·t + m·t^q)} : N(m) = f }`
/// * `Z = { {(t, a·t + m·t^(q²))} : N(m) = f }`
///
/// Verified against the hyper-regulus before returning.
pub fn andre_switching_sets(spread: &Spread<'_>, a: Elt, f: Elt) -> Result<SwitchingPair> {
    let ctx = spread.ctx();
    let x = hyper_regulus(spread, &cover_type1(ctx, a, f)?)?;
    let slopes: Vec<Elt> = ctx.elements().filter(|&m| ctx.norm(m) == f).collect();
    let build = |power: u32| -> Result<Vec<Plane>> {
        slopes
            .iter()
            .map(|&m| {
                graph_plane(ctx, |t| {
                    ctx.add(ctx.mul(a, t), ctx.mul(m, ctx.frobenius(t, power)))
                })
            })
            .collect()
    };
    let pair = SwitchingPair {
        y: build(1)?,
        z: build(2)?,
    };
    verify_switching(ctx, &x.planes, &pair)?;
    Ok(pair)
}

fn meets_all_in_point(ctx: &FieldCtx, pl: &Plane, x: &[Plane]) -> bool {
    x.iter().all(|s| meet_dim(ctx, pl, s) == 0)
}

/// Every plane meeting each plane of `x` in exactly one point, sorted.
///
/// A transversal `π` meets the planes of `x` in q²+q+1 distinct points. Let
/// `P1`, `P2` be its points on the first two planes. The line `P1P2` has
/// only q-1 further points, so among the next q planes of `x` at least one
/// meets `π` off that line, and the three points then span `π`. Spanning
/// every point triple from (σ1, σ2, σk) for k = 3..=q+2 and filtering
/// therefore finds them all. Three planes alone are not enough: any three
/// spread elements lie in a regulus whose transversal lines can carry all
/// three intersection points.
pub fn transversal_planes(spread: &Spread<'_>, x: &HyperRegulus) -> Vec<Plane> {
    let ctx = spread.ctx();
    let thirds = (ctx.q() as usize + 2).min(x.planes.len());
    let pts: Vec<Vec<ProjPoint>> = x.planes[..thirds]
        .iter()
        .map(|pl| pl.points(ctx).collect())
        .collect();
    let mut seen = HashSet::new();
    let mut out = BTreeSet::new();
    for p1 in &pts[0] {
        for p2 in &pts[1] {
            for third in &pts[2..] {
                for p3 in third {
                    let Ok(pl) = pg5::plane_from_points(ctx, p1, p2, p3) else {
                        continue;
                    };
                    if seen.insert(pl) && meets_all_in_point(ctx, &pl, &x.planes) {
                        out.insert(pl);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Transversals by filtering every plane of PG(5,q); for cross-checking.
pub fn transversal_planes_brute(spread: &Spread<'_>, x: &HyperRegulus) -> Vec<Plane> {
    let ctx = spread.ctx();
    let mut out: Vec<Plane> = pg5::enumerate_planes(ctx)
        .filter(|pl| meets_all_in_point(ctx, pl, &x.planes))
        .collect();
    out.sort_unstable();
    out
}

/// Recovers the two switching sets from a set of transversals: the graph
/// joining disjoint planes must be two cliques of q²+q+1 planes with every
/// cross pair meeting in a point.
pub fn split_switching_sets(ctx: &FieldCtx, transversals: &[Plane]) -> Result<SwitchingPair> {
    let n = transversals.len();
    let size = (ctx.q() * ctx.q() + ctx.q() + 1) as usize;
    if n != 2 * size {
        return Err(Error::SwitchingViolation(format!(
            "{n} transversals, expected {}",
            2 * size
        )));
    }
    let mut side = vec![None; n];
    side[0] = Some(0usize);
    for i in 1..n {
        side[i] = Some(match meet_dim(ctx, &transversals[0], &transversals[i]) {
            -1 => 0,
            0 => 1,
            d => {
                return Err(Error::SwitchingViolation(format!(
                    "transversals 0 and {i} meet in dimension {d}"
                )))
            }
        });
    }
    let (mut y, mut z) = (Vec::new(), Vec::new());
    for (pl, s) in transversals.iter().zip(side) {
        if s == Some(0) { &mut y } else { &mut z }.push(*pl);
    }
    if y.len() != size || z.len() != size {
        return Err(Error::SwitchingViolation(format!(
            "disjointness classes have sizes {} and {}",
            y.len(),
            z.len()
        )));
    }
    let pair = SwitchingPair { y, z };
    verify_switching(ctx, &[], &pair)?;
    Ok(pair)
}

/// Outcome of the transversal search for one cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransversalCheck {
    pub cover: CoverKey,
    pub kind: CoverKind,
    pub count: usize,
    /// The transversals split into two switching sets that also satisfy
    /// the switching property against the hyper-regulus.
    pub split_ok: bool,
    /// For type-I covers: the transversals are exactly the explicit
    /// switching sets.
    pub matches_explicit: Option<bool>,
}

impl TransversalCheck {
    pub fn passed(&self, q: u32) -> bool {
        self.count == 2 * (q * q + q + 1) as usize
            && self.split_ok
            && self.matches_explicit != Some(false)
    }
}

/// Runs the transversal search for one cover and checks its structure.
pub fn check_cover(spread: &Spread<'_>, cover: &Cover) -> Result<TransversalCheck> {
    let ctx = spread.ctx();
    let x = hyper_regulus(spread, cover)?;
    let found = transversal_planes(spread, &x);
    let split_ok = split_switching_sets(ctx, &found)
        .and_then(|pair| verify_switching(ctx, &x.planes, &pair))
        .is_ok();
    let matches_explicit = match cover.params {
        CoverParams::TypeI { a, f } => {
            Some(andre_switching_sets(spread, a, f).is_ok_and(|pair| pair.union() == found))
        }
        CoverParams::TypeII { .. } => None,
    };
    Ok(TransversalCheck {
        cover: cover.key().clone(),
        kind: cover.kind(),
        count: found.len(),
        split_ok,
        matches_explicit,
    })
}

/// [`check_cover`] over many covers on `jobs` worker threads; results are
/// returned in input order.
pub fn check_covers(
    spread: &Spread<'_>,
    covers: &[&Cover],
    jobs: usize,
) -> Result<Vec<TransversalCheck>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| covers.par_iter().map(|c| check_cover(spread, c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::{cover_type2, enumerate_covers};
    use crate::spread::{build_spread, CirclePoint};

    fn q2() -> FieldCtx {
        FieldCtx::new(2, 1).unwrap()
    }

    #[test]
    fn relabels_type1_example() {
        let ctx = q2();
        let spread = build_spread(&ctx).unwrap();
        let cover = cover_type1(&ctx, Elt::ZERO, Elt::ONE).unwrap();
        let x = hyper_regulus(&spread, &cover).unwrap();
        assert_eq!(x.planes.len(), 7);
        for (i, pl) in x.planes.iter().enumerate() {
            assert_eq!(
                spread.label_of(pl),
                Some(CirclePoint::Finite(Elt::new(i as u16 + 1)))
            );
        }
    }

    #[test]
    fn all_q2_hyper_reguli_are_disjoint() {
        let ctx = q2();
        let spread = build_spread(&ctx).unwrap();
        for cover in enumerate_covers(&ctx).covers() {
            let x = hyper_regulus(&spread, cover).unwrap();
            assert_eq!(x.planes.len(), 7);
        }
    }

    #[test]
    fn q2_switching_sets() {
        let ctx = q2();
        let spread = build_spread(&ctx).unwrap();
        let pair = andre_switching_sets(&spread, Elt::ZERO, Elt::ONE).unwrap();
        assert_eq!((pair.y.len(), pair.z.len()), (7, 7));
        assert_eq!(pair.union().len(), 14);
    }

    #[test]
    fn y_planes_meet_cover_elements_in_one_point() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let spread = build_spread(&ctx).unwrap();
        let (a, f) = (Elt::new(4), Elt::new(2));
        let pair = andre_switching_sets(&spread, a, f).unwrap();
        for n in ctx.elements() {
            let met = pair.y.iter().all(|y| {
                let common = spread
                    .element(CirclePoint::Finite(n))
                    .points(&ctx)
                    .filter(|p| y.contains(&ctx, p))
                    .count();
                common == usize::from(ctx.norm(ctx.sub(n, a)) == f)
            });
            assert!(met, "n = {n}");
        }
    }

    #[test]
    fn intra_set_planes_share_no_point() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let spread = build_spread(&ctx).unwrap();
        let pair = andre_switching_sets(&spread, Elt::ZERO, Elt::ONE).unwrap();
        for set in [&pair.y, &pair.z] {
            for (i, a) in set.iter().enumerate() {
                for b in &set[i + 1..] {
                    assert!(a.points(&ctx).all(|p| !b.contains(&ctx, &p)));
                }
            }
        }
    }

    #[test]
    fn q2_type1_transversals_are_switching_sets() {
        let ctx = q2();
        let spread = build_spread(&ctx).unwrap();
        let cover = cover_type1(&ctx, Elt::ZERO, Elt::ONE).unwrap();
        let x = hyper_regulus(&spread, &cover).unwrap();
        let found = transversal_planes(&spread, &x);
        assert_eq!(found.len(), 14);
        let pair = andre_switching_sets(&spread, Elt::ZERO, Elt::ONE).unwrap();
        assert_eq!(pair.union(), found);
        assert_eq!(transversal_planes_brute(&spread, &x), found);
    }

    #[test]
    fn split_recovers_explicit_sets() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let spread = build_spread(&ctx).unwrap();
        let pair = andre_switching_sets(&spread, Elt::new(9), Elt::ONE).unwrap();
        let split = split_switching_sets(&ctx, &pair.union()).unwrap();
        let as_set = |v: &[Plane]| v.iter().copied().collect::<BTreeSet<_>>();
        let (y, z) = (as_set(&pair.y), as_set(&pair.z));
        let (sy, sz) = (as_set(&split.y), as_set(&split.z));
        assert!((sy == y && sz == z) || (sy == z && sz == y));
    }

    #[test]
    fn split_rejects_wrong_sizes() {
        let ctx = q2();
        let spread = build_spread(&ctx).unwrap();
        let pair = andre_switching_sets(&spread, Elt::ZERO, Elt::ONE).unwrap();
        assert!(split_switching_sets(&ctx, &pair.y).is_err());
    }

    #[test]
    fn type2_cover_q3() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let spread = build_spread(&ctx).unwrap();
        let cover = cover_type2(&ctx, Elt::new(3), Elt::new(20), Elt::new(2)).unwrap();
        let check = check_cover(&spread, &cover).unwrap();
        assert_eq!(check.count, 26);
        assert!(check.split_ok);
        assert_eq!(check.matches_explicit, None);
        assert!(check.passed(3));
    }

    #[test]
    fn parallel_checks_keep_order() {
        let ctx = q2();
        let spread = build_spread(&ctx).unwrap();
        let cat = enumerate_covers(&ctx);
        let covers: Vec<&Cover> = cat.covers().iter().collect();
        let serial = check_covers(&spread, &covers, 1).unwrap();
        let parallel = check_covers(&spread, &covers, 4).unwrap();
        assert_eq!(serial, parallel);
        assert!(serial.iter().all(|c| c.passed(2)));
    }
}
