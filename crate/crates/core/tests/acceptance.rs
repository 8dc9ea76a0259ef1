//! Acceptance suite. Every criterion prints one PASS/FAIL line per sub-check
//! and asserts at the end; run with `-- --nocapture` to see the lines.
//!
//! Tolerances are all zero: every compared quantity is an exact integer or
//! set. Runtime limits are wall-clock budgets and are measured on whatever
//! build profile runs the suite (the workspace compiles tests optimized).

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use andre_core::gf::irreducible_cubics;
use andre_core::pg5::{self, Row};
use andre_core::{
    andre_switching_sets, build_spread, check_covers, cover_type1, enumerate_covers, hyper_regulus,
    run_census, trace_is_cover_check, transversal_planes, transversal_planes_brute, CensusOptions,
    CensusReport, Cover, CoverKind, Elt, FieldCtx, Plane,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Criterion {
    id: u32,
    lines: Vec<(String, bool)>,
}

impl Criterion {
    fn new(id: u32) -> Self {
        Criterion {
            id,
            lines: Vec::new(),
        }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        let what = what.into();
        println!(
            "[{}] criterion {}: {what}",
            if ok { "PASS" } else { "FAIL" },
            self.id
        );
        self.lines.push((what, ok));
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, expected: T, actual: T) {
        let ok = expected == actual;
        self.check(format!("{what}: expected {expected:?}, got {actual:?}"), ok);
    }

    fn within(&mut self, what: &str, elapsed: Duration, budget: Duration) {
        self.check(
            format!(
                "{what} runtime {:.3}s < {:.0}s",
                elapsed.as_secs_f64(),
                budget.as_secs_f64()
            ),
            elapsed < budget,
        );
    }

    fn finish(self) {
        let failed: Vec<_> = self.lines.iter().filter(|(_, ok)| !ok).collect();
        assert!(
            failed.is_empty(),
            "criterion {} failed: {failed:?}",
            self.id
        );
    }
}

fn ctx(q: u32) -> FieldCtx {
    FieldCtx::for_q(q).unwrap()
}

fn census(ctx: &FieldCtx, jobs: usize, trace_check: bool) -> CensusReport {
    let spread = build_spread(ctx).unwrap();
    run_census(&spread, &CensusOptions { jobs, trace_check }).unwrap()
}

// Closed forms written out here rather than taken from the library.
fn formula_a(q: u64) -> u64 {
    q * q * q + 1
}
fn formula_b(q: u64) -> u64 {
    let q3 = q * q * q;
    q3 * (q3 + 1) * (q3 - 1)
}
fn formula_c(q: u64) -> u64 {
    let h = q * q + q + 1;
    q * (q * q * q + 1) * h * h
}
fn formula_total(q: u64) -> u64 {
    (q * q * q + 1) * (q * q + 1) * (q * q * q * q + q * q * q + q * q + q + 1)
}

#[test]
fn criterion_1_cover_counts() {
    let mut c = Criterion::new(1);
    for (q, total, budget) in [(2u32, 36usize, 1u64), (3, 756, 1), (4, 6240, 30)] {
        let ctx = ctx(q);
        let t = Instant::now();
        let cat = enumerate_covers(&ctx);
        c.within(
            &format!("q={q} enumerate_covers"),
            t.elapsed(),
            Duration::from_secs(budget),
        );
        let q = q as usize;
        let q3 = q * q * q;
        c.eq(&format!("q={q} covers"), total, cat.len());
        c.eq(&format!("q={q} type I = q³(q-1)"), q3 * (q - 1), cat.type_i);
        c.eq(
            &format!("q={q} type II = ½q³(q³-1)(q-1)"),
            q3 * (q3 - 1) * (q - 1) / 2,
            cat.type_ii,
        );
        c.eq(
            &format!("q={q} type II triples"),
            q3 * (q3 - 1) * (q - 1),
            cat.type_ii_params,
        );
        c.check(
            format!("q={q} dedup removes exactly the (a,b,f)~(b,a,1/f) pairs"),
            cat.swap_pairs_only && cat.type_i_injective && cat.families_disjoint,
        );
    }
    c.finish();
}

#[test]
fn criterion_2_census_counts() {
    let mut c = Criterion::new(2);
    let expected = [
        (2u32, [9u64, 504, 882, 1395], 5u64),
        (3, [28, 19656, 14196, 33880], 60),
        (4, [65, 262080, 114660, 376805], 600),
    ];
    for (q, [a, b, cc, total], budget) in expected {
        let ctx = ctx(q);
        let t = Instant::now();
        let r = census(&ctx, 1, false);
        c.within(
            &format!("q={q} single-threaded census"),
            t.elapsed(),
            Duration::from_secs(budget),
        );
        c.eq(
            &format!("q={q} A/B/C/total"),
            [a, b, cc, total],
            [r.count_a, r.count_b, r.count_c, r.total],
        );
        let q = q as u64;
        c.eq(
            &format!("q={q} closed forms"),
            [formula_a(q), formula_b(q), formula_c(q), formula_total(q)],
            [r.count_a, r.count_b, r.count_c, r.total],
        );
    }

    // q = 5: counts only, against the closed forms evaluated here.
    let q5 = [formula_a(5), formula_b(5), formula_c(5), formula_total(5)];
    c.eq(
        "q=5 closed forms evaluate to",
        [126, 1953000, 605430, 2558556],
        q5,
    );
    c.check("q=5 closed forms sum", q5[0] + q5[1] + q5[2] == q5[3]);
    let t = Instant::now();
    let r = census(&ctx(5), 8, false);
    c.within(
        "q=5 census with 8 workers",
        t.elapsed(),
        Duration::from_secs(3600),
    );
    c.eq(
        "q=5 A/B/C/total",
        q5,
        [r.count_a, r.count_b, r.count_c, r.total],
    );
    c.finish();
}

#[test]
fn criterion_3_x_equals_y() {
    let mut c = Criterion::new(3);
    for q in [2u32, 3, 4] {
        let ctx = ctx(q);
        let covers = enumerate_covers(&ctx).len() as u64;
        let r = census(&ctx, 2, false);
        let q = q as u64;
        c.eq(
            &format!("q={q} count_b = covers × 2(q²+q+1)"),
            covers * 2 * (q * q + q + 1),
            r.count_b,
        );
        c.check(format!("q={q} report identity flag"), r.identity_x_eq_y);
    }
    c.finish();
}

#[test]
fn criterion_4_transversal_counts() {
    let mut c = Criterion::new(4);
    for q in [2u32, 3] {
        let ctx = ctx(q);
        let spread = build_spread(&ctx).unwrap();
        let cat = enumerate_covers(&ctx);
        let all: Vec<&Cover> = cat.covers().iter().collect();
        let results = check_covers(&spread, &all, 4).unwrap();
        let target = 2 * (q * q + q + 1) as usize;
        c.eq(
            &format!("q={q} covers with exactly {target} transversals"),
            cat.len(),
            results.iter().filter(|r| r.count == target).count(),
        );
    }

    let ctx4 = ctx(4);
    let spread4 = build_spread(&ctx4).unwrap();
    let cat4 = enumerate_covers(&ctx4);
    let sample = cat4.sample(24, 0xC0FFEE);
    c.check(
        "q=4 sample has ≥ 20 covers of both kinds",
        sample.len() >= 20
            && sample.iter().any(|s| s.kind() == CoverKind::I)
            && sample.iter().any(|s| s.kind() == CoverKind::II),
    );
    let results = check_covers(&spread4, &sample, 4).unwrap();
    c.eq(
        "q=4 sampled covers with exactly 42 transversals",
        sample.len(),
        results.iter().filter(|r| r.count == 42).count(),
    );

    let ctx2 = ctx(2);
    let spread2 = build_spread(&ctx2).unwrap();
    let agree = enumerate_covers(&ctx2).covers().iter().all(|cover| {
        let x = hyper_regulus(&spread2, cover).unwrap();
        transversal_planes(&spread2, &x) == transversal_planes_brute(&spread2, &x)
    });
    c.check(
        "q=2 triple-span and brute-force key sets agree on all 36 covers",
        agree,
    );
    c.finish();
}

#[test]
fn criterion_5_switching_property() {
    let mut c = Criterion::new(5);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for q in [2u32, 3, 4] {
        let ctx = ctx(q);
        let spread = build_spread(&ctx).unwrap();
        let mut params: Vec<(Elt, Elt)> = ctx
            .elements()
            .flat_map(|a| ctx.nonzero_base_elements().map(move |f| (a, f)))
            .collect();
        if q == 4 {
            params = (0..16)
                .map(|_| params[rng.random_range(0..params.len())])
                .collect();
        }
        let mut verified = 0;
        let mut matched = 0;
        for &(a, f) in &params {
            let Ok(pair) = andre_switching_sets(&spread, a, f) else {
                continue;
            };
            verified += 1;
            let x = hyper_regulus(&spread, &cover_type1(&ctx, a, f).unwrap()).unwrap();
            if pair.union() == transversal_planes(&spread, &x) {
                matched += 1;
            }
        }
        c.eq(
            &format!("q={q} (a,f) pairs passing the switching verification"),
            params.len(),
            verified,
        );
        c.eq(
            &format!("q={q} Y ∪ Z equal to the transversal search"),
            params.len(),
            matched,
        );
    }
    c.finish();
}

#[test]
fn criterion_6_trace_bijection() {
    let mut c = Criterion::new(6);
    for q in [2u32, 3] {
        let ctx = ctx(q);
        let spread = build_spread(&ctx).unwrap();
        let cat = enumerate_covers(&ctx);
        let tc = trace_is_cover_check(&spread, &cat, 4).unwrap();
        c.check(format!("q={q} every type-B trace is a cover"), tc.matched);
        c.check(
            format!(
                "q={q} every cover traced by exactly {} type-B planes",
                2 * (q * q + q + 1)
            ),
            tc.multiplicity_ok,
        );
    }
    c.finish();
}

fn random_row(rng: &mut ChaCha8Rng, q: u32) -> Row {
    std::array::from_fn(|_| rng.random_range(0..q) as u8)
}

#[test]
fn criterion_7_property_suites() {
    let mut c = Criterion::new(7);

    for q in [2u32, 3, 4] {
        let ctx = ctx(q);
        let multiplicative = ctx.elements().all(|x| {
            ctx.elements()
                .all(|y| ctx.norm(ctx.mul(x, y)) == ctx.mul(ctx.norm(x), ctx.norm(y)))
        });
        c.check(
            format!("q={q} norm multiplicative (exhaustive)"),
            multiplicative,
        );
        let mut fibres = vec![0u32; q as usize];
        for x in ctx.elements().skip(1) {
            fibres[ctx.norm(x).index() as usize] += 1;
        }
        c.check(
            format!("q={q} nonzero norm fibres all of size q²+q+1"),
            fibres[0] == 0 && fibres[1..].iter().all(|&n| n == q * q + q + 1),
        );
    }

    for q in [2u32, 3, 4] {
        let ctx = ctx(q);
        let spread = build_spread(&ctx).unwrap();
        let mut seen = HashSet::new();
        let mut disjoint = true;
        for (_, pl) in spread.elements() {
            for p in pl.points(&ctx) {
                disjoint &= seen.insert(p);
            }
        }
        let expected = (0..6).map(|i| (q as usize).pow(i)).sum::<usize>();
        c.check(
            format!("q={q} spread partitions all {expected} points"),
            disjoint && seen.len() == expected,
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [2u32, 3, 4] {
        let ctx = ctx(q);
        let base = ctx.base();
        let mut trials = 0;
        let mut stable = 0;
        while trials < 1000 {
            let rows = [
                random_row(&mut rng, q),
                random_row(&mut rng, q),
                random_row(&mut rng, q),
            ];
            let Ok(pl) = Plane::from_rows(&ctx, rows) else {
                continue;
            };
            let m: [[u8; 3]; 3] =
                std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(0..q) as u8));
            let mut padded = m.map(|r| [r[0], r[1], r[2], 0, 0, 0]);
            if pg5::rank(base, &mut padded) != 3 {
                continue;
            }
            trials += 1;
            let mixed: [Row; 3] = std::array::from_fn(|i| {
                std::array::from_fn(|col| {
                    (0..3).fold(0, |acc, k| base.add(acc, base.mul(m[i][k], rows[k][col])))
                })
            });
            if Plane::from_rows(&ctx, mixed).map(|p| p.key()) == Ok(pl.key()) {
                stable += 1;
            }
        }
        c.eq(
            &format!("q={q} RREF key stable under random recombination"),
            1000,
            stable,
        );
    }

    for q in [2u32, 3] {
        let reference = census(&ctx(q), 1, true);
        let (p, h) = andre_core::gf::prime_power(q).unwrap();
        let cubics = irreducible_cubics(ctx(q).base());
        let mut invariant = cubics.len() > 1;
        for cubic in cubics.iter().skip(1).take(3) {
            let alt = FieldCtx::with_moduli(p, h, None, Some(cubic)).unwrap();
            let r = census(&alt, 2, true);
            invariant &= (
                r.count_a,
                r.count_b,
                r.count_c,
                r.covers_total,
                r.trace_check,
            ) == (
                reference.count_a,
                reference.count_b,
                reference.count_c,
                reference.covers_total,
                reference.trace_check,
            );
        }
        c.check(
            format!("q={q} census invariant under cubic-modulus override"),
            invariant,
        );
    }

    for q in [2u32, 3] {
        let ctx = ctx(q);
        let strip = |mut r: CensusReport| {
            r.runtime_seconds = 0.0;
            r
        };
        let reports: BTreeSet<String> = [1usize, 2, 8]
            .iter()
            .map(|&jobs| format!("{:?}", strip(census(&ctx, jobs, true))))
            .collect();
        c.eq(
            &format!("q={q} distinct reports over jobs ∈ {{1,2,8}}"),
            1,
            reports.len(),
        );
    }
    c.finish();
}
