//! Finite-geometry constructions in PG(5,q) over small fields.
//!
//! The crate builds the regular 2-spread of PG(5,q) by field reduction from
//! GF(q³)², the norm covers of the circle geometry CG(3,q), the André
//! hyper-reguli they label, and the switching sets of those hyper-reguli.
//! On top of that sit exhaustive verifiers: a census that classifies every
//! plane of PG(5,q) against the spread, and a search for all planes meeting
//! every plane of a hyper-regulus in a point.
//!
//! ```
//! use andre_core::{build_spread, enumerate_covers, FieldCtx};
//!
//! let ctx = FieldCtx::new(2, 1).unwrap();
//! let spread = build_spread(&ctx).unwrap();
//! assert_eq!(spread.len(), 9);
//! assert_eq!(enumerate_covers(&ctx).len(), 36);
//! ```

pub mod census;
pub mod check;
pub mod covers;
pub mod error;
pub mod gf;
pub mod hyperreg;
pub mod pg5;
pub mod spread;

pub use census::{
    classify_plane, classify_plane_direct, closed_forms, run_census, trace_is_cover_check,
    CensusOptions, CensusReport, ClosedForms, PlaneClass, TraceCheck,
};
pub use check::{Check, Value};
pub use covers::{
    cover_type1, cover_type2, enumerate_covers, Cover, CoverCatalog, CoverKey, CoverKind,
    CoverParams,
};
pub use error::{Error, Result};
pub use gf::{Elt, FieldCtx};
pub use hyperreg::{
    andre_switching_sets, check_cover, check_covers, hyper_regulus, split_switching_sets,
    transversal_planes, transversal_planes_brute, HyperRegulus, SwitchingPair, TransversalCheck,
};
pub use pg5::{enumerate_planes, meet_dim, plane_from_points, Plane, PlaneKey, ProjPoint};
pub use spread::{build_spread, spread_element, CirclePoint, Spread};
