use std::collections::BTreeMap;
use std::time::Instant;

use andre_core::covers::{cover_count, type_i_count, type_ii_count};
use andre_core::gf::{prime_power, self_checks};
use andre_core::{
    andre_switching_sets, build_spread, check_covers, cover_type1, cover_type2, enumerate_covers,
    hyper_regulus, run_census, split_switching_sets, transversal_planes, transversal_planes_brute,
    CensusOptions, Check, Cover, CoverKind, Elt, FieldCtx, Plane, Spread,
};
use serde_json::json;

use crate::args::{Command, Common};
use crate::report::{Report, SCHEMA};

/// Largest q for which a full census is attempted.
pub const CENSUS_MAX_Q: u32 = 5;

/// Largest q at which transversals are checked for every cover; above it a
/// seeded sample is used.
pub const EXHAUSTIVE_TRANSVERSAL_MAX_Q: u32 = 3;

pub const DEFAULT_SAMPLE: u32 = 20;

/// Invalid configuration or a request beyond capacity; maps to exit code 2.
#[derive(Debug)]
pub struct Refusal(pub String);

impl<E: std::error::Error> From<E> for Refusal {
    fn from(e: E) -> Self {
        Refusal(e.to_string())
    }
}

pub fn run(command: &Command) -> Result<Report, Refusal> {
    let start = Instant::now();
    let common = command.common();
    let ctx = make_ctx(common)?;
    let spread = build_spread(&ctx)?;
    let (checks, data) = match command {
        Command::Verify { trace_max_q, .. } => verify(&spread, common, *trace_max_q)?,
        Command::Census { trace_max_q, .. } => census(&spread, common, *trace_max_q)?,
        Command::Covers { list, .. } => covers(&ctx, *list),
        Command::Transversals {
            kind,
            a,
            b,
            f,
            brute,
            ..
        } => transversals(&spread, kind, *a, *b, *f, *brute)?,
        Command::Switching { a, f, .. } => switching(&spread, *a, *f)?,
    };
    Ok(Report {
        schema: SCHEMA,
        q: ctx.q(),
        subcommand: command.name(),
        checks,
        data,
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

fn make_ctx(common: &Common) -> Result<FieldCtx, Refusal> {
    let q = common.q;
    let (p, h) = prime_power(q).ok_or_else(|| Refusal(format!("{q} is not a prime power")))?;
    Ok(FieldCtx::with_moduli(
        p,
        h,
        common.base_modulus.as_deref(),
        common.cubic_modulus.as_deref(),
    )?)
}

fn elt(ctx: &FieldCtx, name: &str, index: u32) -> Result<Elt, Refusal> {
    ctx.elt(index).map_err(|_| {
        Refusal(format!(
            "--{name} {index} is not an element of GF({}³)",
            ctx.q()
        ))
    })
}

fn plane_keys(planes: &[Plane]) -> Vec<String> {
    planes.iter().map(|p| p.key().to_string()).collect()
}

fn jobs(common: &Common) -> usize {
    common.jobs as usize
}

fn cover_checks(ctx: &FieldCtx, out: &mut Vec<Check>) -> usize {
    let q = ctx.q() as u64;
    let catalog = enumerate_covers(ctx);
    out.push(Check::equal("covers.total", cover_count(q), catalog.len()));
    out.push(Check::equal(
        "covers.type_i",
        type_i_count(q),
        catalog.type_i,
    ));
    out.push(Check::equal(
        "covers.type_ii",
        type_ii_count(q),
        catalog.type_ii,
    ));
    out.push(Check::holds(
        "covers.type_i_distinct",
        catalog.type_i_injective,
    ));
    out.push(Check::holds(
        "covers.swap_pairs_only",
        catalog.swap_pairs_only,
    ));
    out.push(Check::holds(
        "covers.families_disjoint",
        catalog.families_disjoint,
    ));
    out.push(Check::holds("covers.sizes", catalog.sizes_ok));
    catalog.len()
}

fn verify(
    spread: &Spread<'_>,
    common: &Common,
    trace_max_q: u32,
) -> Result<(Vec<Check>, serde_json::Value), Refusal> {
    let ctx = spread.ctx();
    let q = ctx.q();
    if q > CENSUS_MAX_Q {
        return Err(Refusal(format!(
            "capacity exceeded: a full census at q = {q} is beyond the supported limit q <= {CENSUS_MAX_Q}"
        )));
    }
    let mut checks = self_checks(ctx);
    checks.push(Check::equal(
        "spread.size",
        (q as u64).pow(3) + 1,
        spread.len(),
    ));
    checks.push(Check::holds("spread.partition", true));
    let covers_total = cover_checks(ctx, &mut checks);

    let report = run_census(
        spread,
        &CensusOptions {
            jobs: jobs(common),
            trace_check: q <= trace_max_q,
        },
    )?;
    checks.extend(report.checks());

    let catalog = enumerate_covers(ctx);
    let sampled = q > EXHAUSTIVE_TRANSVERSAL_MAX_Q;
    let selection: Vec<&Cover> = if sampled {
        catalog.sample(
            common.sample.unwrap_or(DEFAULT_SAMPLE) as usize,
            common.seed,
        )
    } else {
        catalog.covers().iter().collect()
    };
    let results = check_covers(spread, &selection, jobs(common))?;
    let target = 2 * (q * q + q + 1) as usize;
    let exact = results.iter().filter(|r| r.count == target).count();
    checks.push(Check::equal(
        format!("transversals.exactly_{target}"),
        results.len(),
        exact,
    ));
    checks.push(Check::equal(
        "transversals.split_into_switching_sets",
        results.len(),
        results.iter().filter(|r| r.split_ok).count(),
    ));
    let type_i: Vec<_> = results.iter().filter(|r| r.kind == CoverKind::I).collect();
    checks.push(Check::equal(
        "switching.explicit_sets_match",
        type_i.len(),
        type_i
            .iter()
            .filter(|r| r.matches_explicit == Some(true))
            .count(),
    ));
    if q == 2 {
        let agree = selection.iter().all(|c| {
            hyper_regulus(spread, c).is_ok_and(|x| {
                transversal_planes(spread, &x) == transversal_planes_brute(spread, &x)
            })
        });
        checks.push(Check::holds("transversals.brute_force_agrees", agree));
    }

    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for r in &results {
        *histogram.entry(r.count).or_default() += 1;
    }
    let data = json!({
        "covers": covers_total,
        "census": report_json(&report),
        "transversals": {
            "covers_checked": results.len(),
            "sampled": sampled,
            "seed": sampled.then_some(common.seed),
            "count_histogram": histogram,
        },
    });
    Ok((checks, data))
}

fn report_json(report: &andre_core::CensusReport) -> serde_json::Value {
    serde_json::to_value(report).expect("census report serializes")
}

fn census(
    spread: &Spread<'_>,
    common: &Common,
    trace_max_q: u32,
) -> Result<(Vec<Check>, serde_json::Value), Refusal> {
    let q = spread.ctx().q();
    if q > CENSUS_MAX_Q {
        return Err(Refusal(format!(
            "capacity exceeded: a full census at q = {q} is beyond the supported limit q <= {CENSUS_MAX_Q}"
        )));
    }
    let report = run_census(
        spread,
        &CensusOptions {
            jobs: jobs(common),
            trace_check: q <= trace_max_q,
        },
    )?;
    Ok((report.checks(), report_json(&report)))
}

fn covers(ctx: &FieldCtx, list: bool) -> (Vec<Check>, serde_json::Value) {
    let mut checks = Vec::new();
    cover_checks(ctx, &mut checks);
    let catalog = enumerate_covers(ctx);
    let mut data = json!({
        "total": catalog.len(),
        "type_i": catalog.type_i,
        "type_ii": catalog.type_ii,
    });
    if list {
        data["covers"] = json!(catalog
            .covers()
            .iter()
            .map(|c| c.points())
            .collect::<Vec<_>>());
    }
    (checks, data)
}

fn transversals(
    spread: &Spread<'_>,
    kind: &str,
    a: u32,
    b: Option<u32>,
    f: u32,
    brute: bool,
) -> Result<(Vec<Check>, serde_json::Value), Refusal> {
    let ctx = spread.ctx();
    let (a, f) = (elt(ctx, "a", a)?, elt(ctx, "f", f)?);
    let cover = match (kind, b) {
        ("1", None) => cover_type1(ctx, a, f)?,
        ("1", Some(_)) => return Err(Refusal("--b is only valid with --kind 2".into())),
        ("2", Some(b)) => cover_type2(ctx, a, elt(ctx, "b", b)?, f)?,
        _ => return Err(Refusal("--kind 2 requires --b".into())),
    };
    let x = hyper_regulus(spread, &cover)?;
    let found = transversal_planes(spread, &x);
    let q = ctx.q();
    let mut checks = vec![
        Check::equal(
            "transversals.count",
            2 * (q * q + q + 1) as u64,
            found.len(),
        ),
        Check::holds(
            "transversals.split_into_switching_sets",
            split_switching_sets(ctx, &found)
                .and_then(|pair| andre_core::hyperreg::verify_switching(ctx, &x.planes, &pair))
                .is_ok(),
        ),
    ];
    if cover.kind() == CoverKind::I {
        let explicit = andre_switching_sets(spread, a, f).map(|pair| pair.union());
        checks.push(Check::holds(
            "transversals.match_explicit_switching_sets",
            explicit.is_ok_and(|u| u == found),
        ));
    }
    if brute {
        checks.push(Check::holds(
            "transversals.brute_force_agrees",
            transversal_planes_brute(spread, &x) == found,
        ));
    }
    let data = json!({
        "cover": cover.points(),
        "planes": plane_keys(&found),
    });
    Ok((checks, data))
}

fn switching(
    spread: &Spread<'_>,
    a: u32,
    f: u32,
) -> Result<(Vec<Check>, serde_json::Value), Refusal> {
    let ctx = spread.ctx();
    let (a, f) = (elt(ctx, "a", a)?, elt(ctx, "f", f)?);
    let cover = cover_type1(ctx, a, f)?;
    let q = ctx.q();
    let size = (q * q + q + 1) as u64;
    let (checks, pair) = match andre_switching_sets(spread, a, f) {
        Ok(pair) => {
            let x = hyper_regulus(spread, &cover)?;
            let found = transversal_planes(spread, &x);
            let checks = vec![
                Check::holds("switching.property", true),
                Check::equal("switching.y_size", size, pair.y.len()),
                Check::equal("switching.z_size", size, pair.z.len()),
                Check::holds("switching.union_equals_transversals", pair.union() == found),
            ];
            (checks, Some(pair))
        }
        Err(e) => (
            vec![Check::equal(
                "switching.property",
                "verified",
                e.to_string(),
            )],
            None,
        ),
    };
    let data = json!({
        "cover": cover.points(),
        "y": pair.as_ref().map(|p| plane_keys(&p.y)),
        "z": pair.as_ref().map(|p| plane_keys(&p.z)),
    });
    Ok((checks, data))
}
