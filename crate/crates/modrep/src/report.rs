//! Check execution and report assembly: runs the checks a scenario asks
//! for, compares against its expectations, and emits deterministic JSON,
//! plain text, or DOT.

use serde::Serialize;
use serde_json::{json, Value};

use crate::blocks;
use crate::error::{Error, Result};
use crate::extblocks::{
    self, ExtBlockReport, LineSetup, StableCtx,
};
use crate::rep::covers::AlgebraCtx;
use crate::rep::Module;
use crate::scenario::{Check, Scenario};

#[derive(Serialize)]
pub struct ScenarioEcho {
    pub name: String,
    pub field: String,
    pub group_order: usize,
    pub e_rank: usize,
    pub alpha: Vec<String>,
    pub stable_line: bool,
    pub seed: u64,
    pub window: usize,
}

#[derive(Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub details: Value,
    #[serde(skip)]
    pub millis: u128,
}

#[derive(Serialize)]
pub struct Report {
    pub tool: String,
    pub scenario: ScenarioEcho,
    pub checks: Vec<CheckReport>,
    pub passed: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// One PASS/FAIL line per check, with wall-clock timings.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "scenario {} over {} (group order {}, seed {}, window {})\n",
            self.scenario.name,
            self.scenario.field,
            self.scenario.group_order,
            self.scenario.seed,
            self.scenario.window
        );
        for c in &self.checks {
            out.push_str(&format!(
                "{} {:<16} [{} ms]\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.millis
            ));
        }
        out.push_str(if self.passed { "all checks passed\n" } else { "some checks FAILED\n" });
        out
    }
}

pub struct RunOutcome {
    pub report: Report,
    /// DOT rendering of the ext-block graph, when that check ran
    pub dot: Option<String>,
}

/// Runs a scenario, retrying with shifted seeds when a randomized search
/// gives up.
pub fn run_scenario(sc: &Scenario) -> Result<RunOutcome> {
    let mut attempt = 0usize;
    loop {
        let seed = sc.seed + 1000 * attempt as u64;
        match run_once(sc, seed) {
            Ok(out) => return Ok(out),
            Err(e)
                if attempt < sc.retries
                    && matches!(
                        e,
                        Error::SearchExhausted { .. } | Error::IsoInconclusive { .. }
                    ) =>
            {
                eprintln!("retrying with a fresh seed after: {e}");
                attempt += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

fn run_once(sc: &Scenario, seed: u64) -> Result<RunOutcome> {
    let field = sc.field()?;
    let group = sc.group()?;
    let ctx = AlgebraCtx::new(group.clone(), field.clone(), seed);
    let sctx = StableCtx::new(&ctx);
    let setup = if sc.line_basis.is_empty() {
        None
    } else {
        let e = sc.elementary(&group)?;
        let line = sc.line(&field)?;
        Some(LineSetup::new(&field, e, line)?)
    };
    let window = sc
        .window
        .or_else(|| setup.as_ref().map(|s| s.default_window()))
        .unwrap_or(4);

    let need_setup = |check: Check| -> Result<&LineSetup> {
        setup.as_ref().ok_or_else(|| {
            Error::Invariant(format!("check '{}' needs a [line] section", check.name()))
        })
    };
    let want_benson = sc
        .checks
        .iter()
        .any(|&c| matches!(c, Check::Benson | Check::Correspondence));

    let mut ext_report: Option<ExtBlockReport> = None;
    let ensure_ext = |sctx: &StableCtx,
                          setup: &LineSetup,
                          ext_report: &mut Option<ExtBlockReport>|
     -> Result<()> {
        if ext_report.is_none() {
            let family = extblocks::generating_family(sctx, setup, None)?;
            *ext_report = Some(extblocks::ext_block_partition(
                sctx, setup, &family, window, want_benson,
            )?);
        }
        Ok(())
    };

    let mut checks: Vec<CheckReport> = Vec::new();
    for &check in &sc.checks {
        let started = std::time::Instant::now();
        let (passed, details) = match check {
            Check::Blocks => {
                let bp = sctx.blocks()?;
                let simples = ctx.simples()?.to_vec();
                let pims = ctx.pims()?.to_vec();
                let blocks_json: Vec<Value> = bp
                    .blocks
                    .iter()
                    .enumerate()
                    .map(|(id, members)| {
                        json!({
                            "id": id,
                            "simples": members
                                .iter()
                                .map(|&s| json!({"dim": simples[s].dim()}))
                                .collect::<Vec<_>>(),
                            "pim_dims": members
                                .iter()
                                .map(|&s| pims[s].dim())
                                .collect::<Vec<_>>(),
                            "defect_zero": bp.defect_zero[id],
                        })
                    })
                    .collect();
                let kh_blocks = match &setup {
                    Some(s) => {
                        let h = s.stabilizer();
                        let hctx = AlgebraCtx::new(h.group().clone(), field.clone(), seed);
                        Some(blocks::block_partition(&hctx)?.block_count())
                    }
                    None => None,
                };
                let mut passed = sc
                    .expect
                    .kg_blocks
                    .map_or(true, |e| e == bp.block_count());
                if let (Some(e), Some(k)) = (sc.expect.kh_blocks, kh_blocks) {
                    passed &= e == k;
                }
                (
                    passed,
                    json!({"blocks": blocks_json, "kh_blocks": kh_blocks}),
                )
            }
            Check::Simples => {
                let dims: Vec<usize> = ctx.simples()?.iter().map(Module::dim).collect();
                let passed = sc
                    .expect
                    .simple_count
                    .map_or(true, |e| e == dims.len());
                (passed, json!({"dims": dims}))
            }
            Check::ExtBlocks => {
                let s = need_setup(check)?;
                ensure_ext(&sctx, s, &mut ext_report)?;
                let rep = ext_report.as_ref().unwrap();
                let counts: Vec<usize> = (0..sctx.blocks()?.block_count())
                    .map(|b| rep.classes_per_block.get(&b).copied().unwrap_or(0))
                    .collect();
                let passed = sc
                    .expect
                    .ext_classes
                    .as_ref()
                    .map_or(true, |e| *e == counts);
                let members: Vec<Value> = rep
                    .members
                    .iter()
                    .map(|m| {
                        json!({
                            "dim": m.dim,
                            "kg_block": m.kg_block,
                            "kh_label": m.benson_label,
                            "in_family": m.in_family,
                        })
                    })
                    .collect();
                (
                    passed,
                    json!({
                        "classes_per_block": counts,
                        "class_count": rep.class_count(),
                        "classes": rep.graph_partition,
                        "members": members,
                    }),
                )
            }
            Check::Benson => {
                let s = need_setup(check)?;
                ensure_ext(&sctx, s, &mut ext_report)?;
                let rep = ext_report.as_ref().unwrap();
                let mut passed = rep.benson_agreement == Some(true);
                if let Some(e) = sc.expect.agreement {
                    passed = rep.benson_agreement == Some(e);
                }
                if let (Some(e), Some(k)) = (sc.expect.kh_blocks, rep.kh_block_count) {
                    passed &= e == k;
                }
                (
                    passed,
                    json!({
                        "agreement": rep.benson_agreement,
                        "kh_blocks": rep.kh_block_count,
                    }),
                )
            }
            Check::LemmaSuite => {
                let s = need_setup(check)?;
                let suite = extblocks::verify_lemma_suite(&sctx, s, window)?;
                let checks_json: Vec<Value> = suite
                    .checks
                    .iter()
                    .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                    .collect();
                (
                    suite.all_passed(),
                    json!({
                        "checks": checks_json,
                        "twist_exponents": suite.twist_exponents,
                    }),
                )
            }
            Check::Correspondence => {
                let s = need_setup(check)?;
                ensure_ext(&sctx, s, &mut ext_report)?;
                let rep = ext_report.as_ref().unwrap();
                match extblocks::block_correspondence_map(rep) {
                    Ok(map) => {
                        let m: std::collections::BTreeMap<String, usize> = map
                            .into_iter()
                            .map(|(k, v)| (k.to_string(), v))
                            .collect();
                        (true, json!({"map": m}))
                    }
                    Err(Error::CorrespondenceNotSingleton { label, blocks }) => (
                        false,
                        json!({"non_singleton_label": label, "witness_blocks": blocks}),
                    ),
                    Err(e) => return Err(e),
                }
            }
        };
        checks.push(CheckReport {
            name: check.name().to_string(),
            passed,
            details,
            millis: started.elapsed().as_millis(),
        });
    }

    let passed = checks.iter().all(|c| c.passed);
    let report = Report {
        tool: format!("modrep {}", env!("CARGO_PKG_VERSION")),
        scenario: ScenarioEcho {
            name: sc.name.clone(),
            field: format!("GF({}^{})", sc.p, sc.n),
            group_order: group.order(),
            e_rank: setup.as_ref().map_or(0, |s| s.elementary().rank()),
            alpha: sc.alpha.clone(),
            stable_line: setup.as_ref().is_some_and(LineSetup::is_stable),
            seed,
            window,
        },
        checks,
        passed,
    };
    let dot = ext_report.as_ref().map(extblocks::to_dot);
    Ok(RunOutcome { report, dot })
}
