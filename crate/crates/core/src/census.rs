//! Classification of every plane of PG(5,q) relative to the regular spread.
//!
//! A plane is of type A when it is a spread element, type B when it meets
//! q²+q+1 spread elements in one point each, and type C when it meets one
//! element in a line (and q² others in a point). Classification tallies the
//! spread labels of the plane's points instead of intersecting with all
//! q³+1 elements: an element met in a line collects q+1 hits, one met in a
//! point collects a single hit.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::check::Check;
use crate::covers::{cover_count, enumerate_covers, CoverCatalog, CoverKey};
use crate::error::{Error, Result};
use crate::pg5::{self, meet_dim, Plane};
use crate::spread::{locate_vector, CirclePoint, Spread};

/// Planes handed to a worker at a time.
pub const CHUNK_LEN: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlaneClass {
    /// A spread element.
    A(CirclePoint),
    /// The trace: labels of the q²+q+1 elements met in a point.
    B(CoverKey),
    /// The element met in a line.
    C(CirclePoint),
}

impl PlaneClass {
    pub fn tag(&self) -> char {
        match self {
            PlaneClass::A(_) => 'A',
            PlaneClass::B(_) => 'B',
            PlaneClass::C(_) => 'C',
        }
    }
}

fn tally_labels(spread: &Spread<'_>, pl: &Plane, labels: &mut Vec<u16>) {
    let ctx = spread.ctx();
    let order = ctx.order();
    labels.clear();
    labels.extend(
        pl.points(ctx)
            .map(|p| locate_vector(ctx, &p.coords()).label(order)),
    );
    labels.sort_unstable();
}

fn classify_sorted(q: u32, order: u32, labels: &[u16]) -> Result<PlaneClass> {
    let n = labels.len();
    let mut runs = labels.chunk_by(|a, b| a == b);
    let mut line_meet = None;
    let mut singles = 0;
    for run in runs.by_ref() {
        match run.len() {
            1 => singles += 1,
            len if len == n => {
                return Ok(PlaneClass::A(CirclePoint::from_label(run[0], order)));
            }
            len if len == q as usize + 1 && line_meet.is_none() => {
                line_meet = Some(CirclePoint::from_label(run[0], order));
            }
            len => {
                return Err(Error::InconsistentTally(format!(
                    "label {} hit {len} times",
                    run[0]
                )))
            }
        }
    }
    match line_meet {
        None if singles == n => Ok(PlaneClass::B(CoverKey(labels.to_vec()))),
        Some(m) if singles == (q * q) as usize => Ok(PlaneClass::C(m)),
        _ => Err(Error::InconsistentTally(format!(
            "{singles} single hits with line meet {line_meet:?}"
        ))),
    }
}

/// Classifies a plane by tallying the spread labels of its points.
pub fn classify_plane(spread: &Spread<'_>, pl: &Plane) -> Result<PlaneClass> {
    let mut labels = Vec::new();
    tally_labels(spread, pl, &mut labels);
    let ctx = spread.ctx();
    classify_sorted(ctx.q(), ctx.order(), &labels)
}

/// Classifies a plane by intersecting it with every spread element.
pub fn classify_plane_direct(spread: &Spread<'_>, pl: &Plane) -> Result<PlaneClass> {
    let ctx = spread.ctx();
    let order = ctx.order();
    let (mut points, mut lines, mut equal) = (Vec::new(), Vec::new(), Vec::new());
    for (m, el) in spread.elements() {
        match meet_dim(ctx, pl, el) {
            0 => points.push(m.label(order)),
            1 => lines.push(m),
            2 => equal.push(m),
            _ => {}
        }
    }
    let size = (ctx.q() * ctx.q() + ctx.q() + 1) as usize;
    match (equal.as_slice(), lines.as_slice(), points.len()) {
        ([m], [], 0) => Ok(PlaneClass::A(*m)),
        ([], [], n) if n == size => Ok(PlaneClass::B(CoverKey(points))),
        ([], [m], n) if n == (ctx.q() * ctx.q()) as usize => Ok(PlaneClass::C(*m)),
        _ => Err(Error::InconsistentTally(format!(
            "{} equal, {} line and {} point meets",
            equal.len(),
            lines.len(),
            points.len()
        ))),
    }
}

/// The closed forms for plane counts and covers at a given q.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForms {
    /// q³+1
    pub a: u64,
    /// q³(q³+1)(q³-1)
    pub b: u64,
    /// q(q³+1)(q²+q+1)²
    pub c: u64,
    /// (q³+1)(q²+1)(q⁴+q³+q²+q+1)
    pub total: u64,
    /// ½q³(q-1)(q³+1)
    pub covers: u64,
    /// covers · 2(q²+q+1)
    pub y: u64,
}

pub fn closed_forms(q: u64) -> ClosedForms {
    let q3 = q.pow(3);
    let hyper = q * q + q + 1;
    let covers = cover_count(q);
    ClosedForms {
        a: q3 + 1,
        b: q3 * (q3 + 1) * (q3 - 1),
        c: q * (q3 + 1) * hyper * hyper,
        total: pg5::plane_count(q),
        covers,
        y: covers * 2 * hyper,
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TraceCheck {
    pub checked: bool,
    /// Every type-B trace is a cover.
    pub matched: bool,
    /// Every cover is the trace of exactly 2(q²+q+1) type-B planes.
    pub multiplicity_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub q: u32,
    pub count_a: u64,
    pub count_b: u64,
    pub count_c: u64,
    pub total: u64,
    pub covers_total: u64,
    pub identity_x_eq_y: bool,
    pub trace_check: TraceCheck,
    pub runtime_seconds: f64,
}

impl CensusReport {
    /// Every count against its closed form, plus the x = y identity and the
    /// trace check when it ran.
    pub fn checks(&self) -> Vec<Check> {
        let cf = closed_forms(self.q as u64);
        let mut out = vec![
            Check::equal("census.type_a", cf.a, self.count_a),
            Check::equal("census.type_b", cf.b, self.count_b),
            Check::equal("census.type_c", cf.c, self.count_c),
            Check::equal("census.total", cf.total, self.total),
            Check::equal(
                "census.partition",
                self.total,
                self.count_a + self.count_b + self.count_c,
            ),
            Check::equal("census.covers_total", cf.covers, self.covers_total),
            Check::holds("census.x_eq_y", self.identity_x_eq_y),
        ];
        if self.trace_check.checked {
            out.push(Check::holds(
                "census.traces_are_covers",
                self.trace_check.matched,
            ));
            out.push(Check::holds(
                "census.trace_multiplicity",
                self.trace_check.multiplicity_ok,
            ));
        }
        out
    }

    pub fn passed(&self) -> bool {
        crate::check::all_pass(&self.checks())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CensusOptions {
    pub jobs: usize,
    /// Collect type-B traces and compare them with the cover catalog.
    pub trace_check: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            jobs: 1,
            trace_check: false,
        }
    }
}

#[derive(Default)]
struct Tally {
    a: u64,
    b: u64,
    c: u64,
    traces: HashMap<CoverKey, u64>,
}

impl Tally {
    fn merge(mut self, mut other: Tally) -> Tally {
        if self.traces.len() < other.traces.len() {
            std::mem::swap(&mut self, &mut other);
        }
        self.a += other.a;
        self.b += other.b;
        self.c += other.c;
        for (k, v) in other.traces {
            *self.traces.entry(k).or_default() += v;
        }
        self
    }
}

fn sweep(spread: &Spread<'_>, jobs: usize, collect_traces: bool) -> Result<Tally> {
    let ctx = spread.ctx();
    let (q, order) = (ctx.q(), ctx.order());
    let chunks = pg5::plane_chunks(q, CHUNK_LEN);
    let work = |chunk: &pg5::PlaneChunk| -> Result<Tally> {
        let mut tally = Tally::default();
        let mut labels = Vec::with_capacity((q * q + q + 1) as usize);
        for pl in chunk.planes(ctx) {
            tally_labels(spread, &pl, &mut labels);
            match classify_sorted(q, order, &labels)? {
                PlaneClass::A(_) => tally.a += 1,
                PlaneClass::C(_) => tally.c += 1,
                PlaneClass::B(key) => {
                    tally.b += 1;
                    if collect_traces {
                        *tally.traces.entry(key).or_default() += 1;
                    }
                }
            }
        }
        Ok(tally)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| {
        chunks
            .par_iter()
            .map(work)
            .try_reduce(Tally::default, |x, y| Ok(x.merge(y)))
    })
}

fn trace_result(catalog: &CoverCatalog, traces: &HashMap<CoverKey, u64>) -> TraceCheck {
    let q = catalog.q();
    let multiplicity = 2 * (q * q + q + 1) as u64;
    TraceCheck {
        checked: true,
        matched: traces.keys().all(|k| catalog.contains(k)),
        multiplicity_ok: catalog
            .covers()
            .iter()
            .all(|c| traces.get(c.key()) == Some(&multiplicity))
            && traces.len() == catalog.len(),
    }
}

/// Sweeps the type-B planes and compares their traces with the catalog.
pub fn trace_is_cover_check(
    spread: &Spread<'_>,
    catalog: &CoverCatalog,
    jobs: usize,
) -> Result<TraceCheck> {
    let tally = sweep(spread, jobs, true)?;
    Ok(trace_result(catalog, &tally.traces))
}

/// Classifies every plane of PG(5,q) and assembles the report. Counts are
/// exact; the report is identical for every worker count apart from
/// `runtime_seconds`.
pub fn run_census(spread: &Spread<'_>, opts: &CensusOptions) -> Result<CensusReport> {
    let start = Instant::now();
    let ctx = spread.ctx();
    let q = ctx.q();
    let catalog = enumerate_covers(ctx);
    let tally = sweep(spread, opts.jobs, opts.trace_check)?;
    let covers_total = catalog.len() as u64;
    let hyper = (q * q + q + 1) as u64;
    let trace_check = if opts.trace_check {
        trace_result(&catalog, &tally.traces)
    } else {
        TraceCheck::default()
    };
    Ok(CensusReport {
        q,
        count_a: tally.a,
        count_b: tally.b,
        count_c: tally.c,
        total: tally.a + tally.b + tally.c,
        covers_total,
        identity_x_eq_y: tally.b == covers_total * 2 * hyper
            && covers_total == cover_count(q as u64),
        trace_check,
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::cover_type1;
    use crate::gf::{Elt, FieldCtx};
    use crate::hyperreg::andre_switching_sets;
    use crate::pg5::enumerate_planes;
    use crate::spread::build_spread;

    #[test]
    fn closed_forms_match_known_values() {
        let cf = closed_forms(2);
        assert_eq!((cf.a, cf.b, cf.c, cf.total), (9, 504, 882, 1395));
        assert_eq!((cf.covers, cf.y), (36, 504));
        let cf = closed_forms(3);
        assert_eq!((cf.a, cf.b, cf.c, cf.total), (28, 19656, 14196, 33880));
        let cf = closed_forms(4);
        assert_eq!((cf.a, cf.b, cf.c, cf.total), (65, 262080, 114660, 376805));
        for q in 2..=16 {
            let cf = closed_forms(q);
            assert_eq!(cf.a + cf.b + cf.c, cf.total, "q = {q}");
            assert_eq!(cf.b, cf.y, "q = {q}");
        }
    }

    #[test]
    fn spread_elements_are_type_a() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let spread = build_spread(&ctx).unwrap();
        for (m, pl) in spread.elements() {
            assert_eq!(classify_plane(&spread, pl).unwrap(), PlaneClass::A(m));
        }
    }

    #[test]
    fn switching_planes_are_type_b_with_cover_trace() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let spread = build_spread(&ctx).unwrap();
        let (a, f) = (Elt::new(7), Elt::new(2));
        let cover = cover_type1(&ctx, a, f).unwrap();
        let pair = andre_switching_sets(&spread, a, f).unwrap();
        for pl in pair.y.iter().chain(&pair.z) {
            assert_eq!(
                classify_plane(&spread, pl).unwrap(),
                PlaneClass::B(cover.key().clone())
            );
        }
    }

    #[test]
    fn line_of_zero_element_plus_point_is_type_c() {
        let ctx = FieldCtx::new(2, 1).unwrap();
        let spread = build_spread(&ctx).unwrap();
        let pl = Plane::from_rows(
            &ctx,
            [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 0, 1, 1, 0]],
        )
        .unwrap();
        let zero = CirclePoint::Finite(Elt::ZERO);
        assert_eq!(classify_plane(&spread, &pl).unwrap(), PlaneClass::C(zero));
        assert_eq!(
            classify_plane_direct(&spread, &pl).unwrap(),
            PlaneClass::C(zero)
        );
    }

    #[test]
    fn tally_agrees_with_direct_classification() {
        let ctx = FieldCtx::new(2, 1).unwrap();
        let spread = build_spread(&ctx).unwrap();
        for pl in enumerate_planes(&ctx) {
            assert_eq!(
                classify_plane(&spread, &pl).unwrap(),
                classify_plane_direct(&spread, &pl).unwrap()
            );
        }
    }

    #[test]
    fn inconsistent_tallies_are_errors() {
        // Two labels hit twice each can't come from a plane.
        assert!(classify_sorted(2, 8, &[0, 0, 1, 1, 2, 3, 4]).is_err());
        assert!(classify_sorted(2, 8, &[0, 0, 0, 1, 2, 3, 3]).is_err());
        assert!(matches!(
            classify_sorted(2, 8, &[0, 1, 2, 3, 4, 5, 8]),
            Ok(PlaneClass::B(_))
        ));
    }

    #[test]
    fn q2_census() {
        let ctx = FieldCtx::new(2, 1).unwrap();
        let spread = build_spread(&ctx).unwrap();
        let report = run_census(
            &spread,
            &CensusOptions {
                jobs: 2,
                trace_check: true,
            },
        )
        .unwrap();
        assert_eq!(
            (report.count_a, report.count_b, report.count_c, report.total),
            (9, 504, 882, 1395)
        );
        assert_eq!(report.covers_total, 36);
        assert!(report.identity_x_eq_y);
        assert_eq!(
            report.trace_check,
            TraceCheck {
                checked: true,
                matched: true,
                multiplicity_ok: true
            }
        );
        assert!(report.passed());
    }

    #[test]
    fn q2_trace_histogram_is_constant() {
        let ctx = FieldCtx::new(2, 1).unwrap();
        let spread = build_spread(&ctx).unwrap();
        let tally = sweep(&spread, 1, true).unwrap();
        assert_eq!(tally.traces.len(), 36);
        assert!(tally.traces.values().all(|&n| n == 14));
    }
}
