//! The regular 2-spread of PG(5,q) obtained by field reduction.
//!
//! GF(q)⁶ is identified with GF(q³)² by splitting a vector into two
//! coordinate triples. The spread elements are
//! `J(m) = {(x, m·x) : x ∈ GF(q³)}` for `m ∈ GF(q³)` and
//! `J(∞) = {(0, y)}`, so the spread is labelled by the points of the
//! circle geometry CG(3,q), i.e. by GF(q³) ∪ {∞}.

use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{Elt, FieldCtx};
use crate::pg5::{self, Plane, ProjPoint, Row};

/// A point of CG(3,q). Orders finite labels by element index, with ∞ last.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CirclePoint {
    Finite(Elt),
    Infinity,
}

impl CirclePoint {
    /// Dense label in `0..=q³`; ∞ maps to `q³`.
    #[inline]
    pub fn label(self, order: u32) -> u16 {
        match self {
            CirclePoint::Finite(e) => e.index(),
            CirclePoint::Infinity => order as u16,
        }
    }

    #[inline]
    pub fn from_label(label: u16, order: u32) -> Self {
        if label as u32 == order {
            CirclePoint::Infinity
        } else {
            CirclePoint::Finite(Elt::new(label))
        }
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CirclePoint::Finite(e) => write!(f, "{e}"),
            CirclePoint::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for CirclePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CirclePoint::Finite(e) => s.serialize_u16(e.index()),
            CirclePoint::Infinity => s.serialize_str("inf"),
        }
    }
}

/// All q³+1 circle points in label order.
pub fn circle_points(ctx: &FieldCtx) -> impl Iterator<Item = CirclePoint> {
    ctx.elements()
        .map(CirclePoint::Finite)
        .chain(std::iter::once(CirclePoint::Infinity))
}

fn split(ctx: &FieldCtx, v: &Row) -> (Elt, Elt) {
    (
        ctx.from_coords([v[0], v[1], v[2]]),
        ctx.from_coords([v[3], v[4], v[5]]),
    )
}

fn join(ctx: &FieldCtx, x: Elt, y: Elt) -> Row {
    let (a, b) = (ctx.to_coords(x), ctx.to_coords(y));
    [a[0], a[1], a[2], b[0], b[1], b[2]]
}

/// The plane of GF(q)⁶ spanned by `(t, f(t))` for `t` running over the
/// basis `1, T, T²` of GF(q³). `f` must be GF(q)-linear.
pub fn graph_plane(ctx: &FieldCtx, f: impl Fn(Elt) -> Elt) -> Result<Plane> {
    let q = ctx.q() as u16;
    let basis = [Elt::ONE, Elt::new(q), Elt::new(q * q)];
    Plane::from_rows(ctx, basis.map(|t| join(ctx, t, f(t))))
}

/// The spread element `J(m)`.
pub fn spread_element(ctx: &FieldCtx, m: CirclePoint) -> Plane {
    match m {
        CirclePoint::Finite(m) => graph_plane(ctx, |t| ctx.mul(m, t)),
        CirclePoint::Infinity => {
            let q = ctx.q() as u16;
            let basis = [Elt::ONE, Elt::new(q), Elt::new(q * q)];
            Plane::from_rows(ctx, basis.map(|y| join(ctx, Elt::ZERO, y)))
        }
    }
    .expect("spread elements have rank 3")
}

/// The unique spread label whose element contains the vector `v`: `y/x`
/// for `v = (x, y)`, or ∞ when `x = 0`.
#[inline]
pub fn locate_vector(ctx: &FieldCtx, v: &Row) -> CirclePoint {
    let (x, y) = split(ctx, v);
    if x.is_zero() {
        CirclePoint::Infinity
    } else {
        CirclePoint::Finite(ctx.div_nonzero(y, x))
    }
}

/// The regular spread with its label correspondence.
#[derive(Clone, Debug)]
pub struct Spread<'f> {
    ctx: &'f FieldCtx,
    elements: Vec<Plane>,
    labels: HashMap<Plane, CirclePoint>,
}

impl<'f> Spread<'f> {
    pub fn ctx(&self) -> &'f FieldCtx {
        self.ctx
    }

    /// Number of elements, q³+1.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, m: CirclePoint) -> &Plane {
        &self.elements[m.label(self.ctx.order()) as usize]
    }

    /// Elements in label order (∞ last).
    pub fn elements(&self) -> impl Iterator<Item = (CirclePoint, &Plane)> + '_ {
        let order = self.ctx.order();
        self.elements
            .iter()
            .enumerate()
            .map(move |(i, pl)| (CirclePoint::from_label(i as u16, order), pl))
    }

    /// The label of `pl` if it is a spread element.
    pub fn label_of(&self, pl: &Plane) -> Option<CirclePoint> {
        self.labels.get(pl).copied()
    }

    pub fn locate(&self, pt: &ProjPoint) -> CirclePoint {
        locate_vector(self.ctx, &pt.coords())
    }

    /// Checks that every three spread elements `A, B, C` determine a
    /// regulus inside the spread: each point of `A` lies on exactly one line
    /// meeting `B` and `C`, and the points of those q²+q+1 transversal lines
    /// are covered by exactly q+1 spread elements. Exhaustive over triples,
    /// so only practical for q ≤ 3.
    pub fn check_regular(&self) -> Result<()> {
        let ctx = self.ctx;
        let base = ctx.base();
        let q = ctx.q() as u8;
        let n = self.elements.len();
        let points: Vec<Vec<ProjPoint>> = self
            .elements
            .iter()
            .map(|pl| pl.points(ctx).collect())
            .collect();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let c_label = CirclePoint::from_label(c as u16, ctx.order());
                    let mut regulus = Vec::new();
                    for pa in &points[a] {
                        let mut transversals = 0;
                        for pb in &points[b] {
                            // Points P + λQ of the line PQ other than P, Q.
                            let on_line = (1..q).map(|l| {
                                std::array::from_fn::<u8, 6, _>(|i| {
                                    base.add(pa.coords()[i], base.mul(l, pb.coords()[i]))
                                })
                            });
                            let hits: Vec<Row> = on_line
                                .filter(|v| locate_vector(ctx, v) == c_label)
                                .collect();
                            if hits.is_empty() {
                                continue;
                            }
                            transversals += 1;
                            for l in 0..q {
                                for k in 0..q {
                                    if (l, k) == (0, 0) {
                                        continue;
                                    }
                                    let v = std::array::from_fn::<u8, 6, _>(|i| {
                                        base.add(
                                            base.mul(l, pa.coords()[i]),
                                            base.mul(k, pb.coords()[i]),
                                        )
                                    });
                                    let m = locate_vector(ctx, &v);
                                    if !regulus.contains(&m) {
                                        regulus.push(m);
                                    }
                                }
                            }
                        }
                        if transversals != 1 {
                            return Err(Error::PartitionViolation(format!(
                                "point {:?} of element {a} lies on {transversals} transversals to {b}, {c}",
                                pa.coords()
                            )));
                        }
                    }
                    if regulus.len() != q as usize + 1 {
                        return Err(Error::PartitionViolation(format!(
                            "regulus of elements {a}, {b}, {c} spans {} spread elements",
                            regulus.len()
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds all q³+1 elements and verifies that they partition the points of
/// PG(5,q) before returning.
pub fn build_spread(ctx: &FieldCtx) -> Result<Spread<'_>> {
    let elements: Vec<Plane> = crate::spread::circle_points(ctx)
        .map(|m| spread_element(ctx, m))
        .collect();

    let q = ctx.q();
    let mut hits = vec![0u8; (q as usize).pow(6)];
    for (label, pl) in elements.iter().enumerate() {
        for pt in pl.points(ctx) {
            let slot = &mut hits[pt.raw_index(q)];
            if *slot != 0 {
                return Err(Error::PartitionViolation(format!(
                    "point {:?} lies in elements {} and {label}",
                    pt.coords(),
                    *slot - 1
                )));
            }
            *slot = label.min(254) as u8 + 1;
        }
    }
    let covered = hits.iter().filter(|&&h| h != 0).count() as u64;
    if covered != pg5::point_count(q as u64) {
        return Err(Error::PartitionViolation(format!(
            "{covered} of {} points covered",
            pg5::point_count(q as u64)
        )));
    }

    let labels = elements
        .iter()
        .enumerate()
        .map(|(i, pl)| (*pl, CirclePoint::from_label(i as u16, ctx.order())))
        .collect();
    Ok(Spread {
        ctx,
        elements,
        labels,
    })
}
