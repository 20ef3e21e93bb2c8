//! Acceptance gate: the eight headline checks, one pass/fail line each.
//!
//! Run with `--nocapture` to see the lines as they complete.

mod common;

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use modrep::blocks::block_partition;
use modrep::extblocks::{
    ext_block_partition, generating_family, stable_hom_dim, LineSetup, StableCtx,
};
use modrep::ffla::Field;
use modrep::groups::Group;
use modrep::rep::covers::AlgebraCtx;
use modrep::report::{run_scenario, Report};
use modrep::scenario::builtin;

fn verdict(n: usize, what: &str, passed: bool, t: Duration) {
    println!(
        "criterion {n}: {} — {what} [{:.1}s]",
        if passed { "PASS" } else { "FAIL" },
        t.as_secs_f64()
    );
    assert!(passed, "criterion {n} failed: {what}");
}

fn stable_report() -> &'static Report {
    static CELL: OnceLock<Report> = OnceLock::new();
    CELL.get_or_init(|| {
        run_scenario(&builtin("g84-stable").unwrap())
            .expect("g84-stable scenario run")
            .report
    })
}

fn check_details<'r>(r: &'r Report, name: &str) -> &'r serde_json::Value {
    &r.checks
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("report lacks check {name}"))
        .details
}

#[test]
fn criterion_1_block_counts() {
    let t = Instant::now();
    let gf8 = Field::new(2, 3).unwrap();
    let h = Group::direct_product(
        &Group::cyclic(7).unwrap(),
        &Group::elementary_abelian(2, 2).unwrap(),
    )
    .unwrap();
    let hctx = AlgebraCtx::new(h, gf8.clone(), 1);
    let hbp = block_partition(&hctx).unwrap();
    let hsimple = hctx.simples().unwrap();
    let mut ok = hbp.block_count() == 7
        && hsimple.len() == 7
        && hsimple.iter().all(|s| s.dim() == 1);
    let g = builtin("g84-unstable").unwrap().group().unwrap();
    let ctx = AlgebraCtx::new(g, gf8, 1);
    let bp = block_partition(&ctx).unwrap();
    let simples = ctx.simples().unwrap();
    ok &= bp.block_count() == 3;
    for b in [1, 2] {
        ok &= bp.blocks[b].len() == 1 && simples[bp.blocks[b][0]].dim() == 3;
    }
    let el = t.elapsed();
    ok &= el < Duration::from_secs(10);
    verdict(1, "kH has 7 blocks/7 one-dim simples; kG has 3 blocks, B1/B2 one 3-dim simple each", ok, el);
}

#[test]
fn criterion_2_unstable_ext_blocks() {
    let t = Instant::now();
    let out = run_scenario(&builtin("g84-unstable").unwrap()).unwrap();
    let eb = check_details(&out.report, "ext_blocks");
    let bn = check_details(&out.report, "benson");
    let ok = out.report.passed
        && eb["classes_per_block"] == serde_json::json!([1, 3, 3])
        && eb["class_count"] == serde_json::json!(7)
        && bn["kh_blocks"] == serde_json::json!(7)
        && bn["agreement"] == serde_json::json!(true)
        && t.elapsed() < Duration::from_secs(300);
    verdict(2, "g84-unstable ext-blocks {B0:1, B1:3, B2:3}, 7 classes = kH blocks, partitions agree", ok, t.elapsed());
}

#[test]
fn criterion_3_stable_ext_blocks() {
    let t = Instant::now();
    let r = stable_report();
    let eb = check_details(r, "ext_blocks");
    let ok = r.passed
        && eb["classes_per_block"] == serde_json::json!([1, 1, 1])
        && t.elapsed() < Duration::from_secs(300);
    verdict(3, "g84-stable has exactly one ext-block per positive-defect block", ok, t.elapsed());
}

#[test]
fn criterion_4_lemma_suite() {
    let t = Instant::now();
    let stable = stable_report();
    let ls = check_details(stable, "lemma_suite");
    let mut ok = stable
        .checks
        .iter()
        .any(|c| c.name == "lemma_suite" && c.passed);
    ok &= ls["checks"]
        .as_array()
        .is_some_and(|cs| !cs.is_empty() && cs.iter().all(|c| c["passed"] == serde_json::json!(true)));
    let s3 = run_scenario(&builtin("s3-sanity").unwrap()).unwrap().report;
    ok &= s3.checks.iter().any(|c| c.name == "lemma_suite" && c.passed);
    // the odd-characteristic twist exponents are measured and reported
    ok &= check_details(&s3, "lemma_suite")["twist_exponents"]
        .as_array()
        .is_some_and(|a| !a.is_empty());
    let lemma_time: u128 = stable
        .checks
        .iter()
        .chain(&s3.checks)
        .filter(|c| c.name == "lemma_suite")
        .map(|c| c.millis)
        .sum();
    ok &= lemma_time < 120_000;
    verdict(4, "syzygy-twist lemma suite passes on g84-stable and s3-sanity", ok, t.elapsed());
}

#[test]
fn criterion_5_p3_example() {
    let t = Instant::now();
    let out = run_scenario(&builtin("p3").unwrap()).unwrap();
    let bl = check_details(&out.report, "blocks");
    let eb = check_details(&out.report, "ext_blocks");
    let ok = out.report.passed
        && bl["kh_blocks"] == serde_json::json!(5)
        && bl["blocks"].as_array().is_some_and(|b| b.len() == 3)
        && eb["classes_per_block"] == serde_json::json!([1, 2, 2])
        && t.elapsed() < Duration::from_secs(300);
    verdict(5, "p3: kH has 5 blocks, kG has 3, two ext-blocks per nonprincipal block", ok, t.elapsed());
}

#[test]
fn criterion_6_component_in_every_ext_block() {
    let t = Instant::now();
    let sc = builtin("g84-unstable").unwrap();
    let field = sc.field().unwrap();
    let group = sc.group().unwrap();
    let ctx = AlgebraCtx::new(group.clone(), field.clone(), sc.seed);
    let sctx = StableCtx::new(&ctx);
    let e = sc.elementary(&group).unwrap();
    let line = sc.line(&field).unwrap();
    let setup = LineSetup::new(&field, e, line).unwrap();
    let w = setup.default_window();
    let fam = generating_family(&sctx, &setup, None).unwrap();
    let part = ext_block_partition(&sctx, &setup, &fam, w, false).unwrap();
    let bp = sctx.blocks().unwrap();
    // M1: the unique simple of the first nonprincipal block
    let m1 = ctx.simples().unwrap()[bp.blocks[1][0]].clone();
    let classes_in_b1: Vec<&Vec<usize>> = part
        .graph_partition
        .iter()
        .filter(|cl| part.members[cl[0]].kg_block == 1)
        .collect();
    let mut ok = classes_in_b1.len() == 3;
    for class in classes_in_b1 {
        let rep = sctx.rep(part.members[class[0]].canon);
        ok &= stable_hom_dim(&ctx, &m1, &rep).unwrap() > 0;
    }
    verdict(6, "M1 has a component in each of the 3 ext-blocks of C_V ∩ B1", ok, t.elapsed());
}

#[test]
fn criterion_7_tate_linkage_equals_positive_defect_blocks() {
    let t = Instant::now();
    let mut ok = true;
    for (name, window) in [("g84-stable", 3usize), ("p3", 3)] {
        let sc = builtin(name).unwrap();
        let ctx = AlgebraCtx::new(sc.group().unwrap(), sc.field().unwrap(), sc.seed);
        let sctx = StableCtx::new(&ctx);
        let bp = sctx.blocks().unwrap().clone();
        let simples = ctx.simples().unwrap().to_vec();
        let nonproj: Vec<usize> = (0..simples.len())
            .filter(|&i| !bp.defect_zero[bp.block_of(i)])
            .collect();
        let canons: Vec<usize> = nonproj
            .iter()
            .map(|&i| sctx.canon(&simples[i]).unwrap())
            .collect();
        // union-find over the nonprojective simples by nonzero Tate Ext
        let mut comp: Vec<usize> = (0..nonproj.len()).collect();
        fn find(c: &mut Vec<usize>, i: usize) -> usize {
            if c[i] != i {
                let r = find(c, c[i]);
                c[i] = r;
            }
            c[i]
        }
        for a in 0..nonproj.len() {
            for b in (a + 1)..nonproj.len() {
                // the narrow window is cheap and catches most linked pairs;
                // the cached Ω-shifts make widening nearly free afterwards
                if sctx.linked(canons[a], canons[b], 1).unwrap()
                    || sctx.linked(canons[a], canons[b], window).unwrap()
                {
                    let (x, y) = (find(&mut comp, a), find(&mut comp, b));
                    if x != y {
                        comp[x] = y;
                    }
                }
            }
        }
        let mut tate: Vec<Vec<usize>> = Vec::new();
        let mut cartan: Vec<Vec<usize>> = Vec::new();
        for roots in [true, false] {
            let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
            for (k, &i) in nonproj.iter().enumerate() {
                let key = if roots { find(&mut comp, k) } else { bp.block_of(i) };
                groups.entry(key).or_default().push(i);
            }
            let mut parts: Vec<Vec<usize>> = groups.into_values().collect();
            parts.sort();
            if roots {
                tate = parts;
            } else {
                cartan = parts;
            }
        }
        ok &= tate == cartan;
    }
    verdict(7, "Tate linkage partitions the simples exactly into the positive-defect blocks", ok, t.elapsed());
}

#[test]
fn criterion_8_property_suites() {
    let t = Instant::now();
    common::check_field_axioms_all_prime_powers(1024);
    for seed in 0..50 {
        common::check_frobenius_reciprocity(seed);
        common::check_tate_duality(seed);
    }
    for seed in 0..20 {
        common::check_krull_schmidt_resum(seed);
        common::check_tensor_theorem(seed);
    }
    common::check_orbit_stabilizer_on_scenario_lines();
    common::check_equivariant_lifts_on_scenario_lines();
    verdict(8, "field axioms, reciprocity, duality, Krull–Schmidt, orbits, lifts, tensor identity", true, t.elapsed());
}
