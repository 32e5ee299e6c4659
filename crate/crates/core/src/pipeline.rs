//! The verification pipeline: tower validation, relabeling, containments,
//! decomposition, classification and genera, assembled into a single
//! report with deterministic machine-readable rendering.

use num_bigint::BigUint;

use crate::classify::{self, ClassificationReport};
use crate::cover::{check_etale_condition, CoverError, CoverTower};
use crate::format::{parse_tower_file, ParseError, TowerFile};
use crate::group::PermutationGroup;
use crate::report::{CheckReport, CheckStatus};
use crate::structure;

/// Summary facts about the verified tower.
#[derive(Clone, Debug)]
pub struct TowerSummary {
    pub p: u64,
    pub q: u64,
    pub degree: usize,
    pub group_order: BigUint,
    pub h_order: BigUint,
    pub n_order: BigUint,
    pub monodromy_realized: bool,
}

/// Everything a verification run produces. `passed()` is the exit-status
/// criterion: every check passed, including the expected-value checks.
#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub checks: CheckReport,
    pub summary: Option<TowerSummary>,
    pub classification: Option<ClassificationReport>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.checks.all_passed()
    }

    fn failed(checks: CheckReport) -> Self {
        VerifyOutcome {
            checks,
            summary: None,
            classification: None,
        }
    }
}

/// Parses and verifies a tower file; parse errors are reported separately
/// from check failures (they carry a line number and exit differently).
pub fn verify_text(text: &str) -> Result<VerifyOutcome, ParseError> {
    let file = parse_tower_file(text)?;
    Ok(verify_file(&file))
}

/// Runs the full pipeline on parsed tower data.
pub fn verify_file(file: &TowerFile) -> VerifyOutcome {
    let build = |gens: &[crate::perm::Permutation]| {
        PermutationGroup::generated(file.degree, gens.to_vec())
    };
    let mut checks = CheckReport::new();
    let (g, h, n) = match (build(&file.g_gens), build(&file.h_gens), build(&file.n_gens)) {
        (Ok(g), Ok(h), Ok(n)) => (g, h, n),
        (a, b, c) => {
            let detail = [a.err(), b.err(), c.err()]
                .into_iter()
                .flatten()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            checks.check("group_construction", false, detail);
            return VerifyOutcome::failed(checks);
        }
    };
    verify_tower_data(file.p, file.q, g, h, n, &file.expect)
}

/// Runs the pipeline on explicit group data plus optional expected values.
pub fn verify_tower_data(
    p: u64,
    q: u64,
    g: PermutationGroup,
    h: PermutationGroup,
    n: PermutationGroup,
    expect: &crate::format::Expectations,
) -> VerifyOutcome {
    let mut checks = CheckReport::new();

    let tower = match CoverTower::validated(p, q, g, h, n) {
        Ok(t) => t,
        Err(CoverError::Invariants { report, .. }) => {
            checks.merge(*report);
            return VerifyOutcome::failed(checks);
        }
        Err(other) => {
            checks.check("tower_construction", false, other.to_string());
            return VerifyOutcome::failed(checks);
        }
    };
    checks.merge(tower.evidence().checks.clone());

    let summary = TowerSummary {
        p,
        q,
        degree: tower.degree(),
        group_order: tower.group().order(),
        h_order: tower.h().order(),
        n_order: tower.n().order(),
        monodromy_realized: tower.evidence().monodromy_realized,
    };

    let pair = match structure::find_shift_pair(&tower) {
        Ok(pair) => pair,
        Err(e) => {
            checks.check("shift_pair", false, e.to_string());
            return VerifyOutcome::failed(checks);
        }
    };
    let relabeled = match structure::relabel_to_blocks(&tower, &pair) {
        Ok(r) => r,
        Err(e) => {
            checks.check("relabel_to_blocks", false, e.to_string());
            return VerifyOutcome::failed(checks);
        }
    };
    checks.merge(relabeled.checks.clone());

    let scaffold = match structure::block_scaffold(p, q) {
        Ok(s) => s,
        Err(e) => {
            checks.check("block_scaffold", false, e.to_string());
            return VerifyOutcome::failed(checks);
        }
    };
    let core = match relabeled.tower.group().core(relabeled.tower.h()) {
        Ok(c) => c,
        Err(e) => {
            checks.check("core_computation", false, e.to_string());
            return VerifyOutcome::failed(checks);
        }
    };
    match structure::verify_containments(&relabeled.tower, &scaffold, core.group()) {
        Ok(report) => checks.merge(report),
        Err(e) => {
            checks.check("containments", false, e.to_string());
            return VerifyOutcome::failed(checks);
        }
    }
    match check_etale_condition(&relabeled.tower, core.group()) {
        Ok(ok) => {
            checks.check(
                "etale_condition",
                ok,
                "the core meets every cyclic elliptic subgroup trivially",
            );
        }
        Err(e) => {
            checks.check("etale_condition", false, e.to_string());
        }
    }

    let witness = match structure::decompose(&relabeled, &scaffold, core) {
        Ok(w) => w,
        Err(e) => {
            checks.check("decompose", false, e.to_string());
            return VerifyOutcome::failed(checks);
        }
    };
    checks.merge(witness.checks.clone());

    let solvable = match classify::solvable_case(&relabeled.tower, &witness) {
        Ok(s) => s,
        Err(e) => {
            checks.check("solvable_case", false, e.to_string());
            return VerifyOutcome::failed(checks);
        }
    };
    let identified = match classify::identify_image(&witness.block_image, p) {
        Ok(i) => i,
        Err(e) => {
            checks.check("identify_image", false, e.to_string());
            return VerifyOutcome::failed(checks);
        }
    };
    checks.check(
        "image_simple_or_cyclic",
        identified.id.tag == classify::SimpleGroupTag::Cyclic || identified.simplicity_confirmed,
        if identified.simplicity_confirmed {
            "block image verified simple (or cyclic of prime order)".to_string()
        } else {
            "simplicity not confirmed: order exceeds the enumeration budget".to_string()
        },
    );

    let classification =
        match classify::case_label(&relabeled.tower, &witness, solvable.as_ref(), &identified) {
            Ok(c) => c,
            Err(e) => {
                checks.check("classification", false, e.to_string());
                return VerifyOutcome::failed(checks);
            }
        };
    if classification.diagnostics.is_empty() {
        checks.check(
            "classification_consistency",
            true,
            "no theorem-violation diagnostics",
        );
    } else {
        for d in &classification.diagnostics {
            checks.check("classification_consistency", false, d.clone());
        }
    }
    match classification.n_maximal_in_h {
        Some(ok) => {
            checks.check("n_maximal_in_h", ok, "exhaustive intermediate-subgroup search");
        }
        None => checks.note(
            "n_maximal_in_h",
            format!(
                "skipped: |H| exceeds {}",
                classify::MAXIMALITY_THRESHOLD
            ),
        ),
    }
    if !classification.product_condition_evaluated {
        checks.note(
            "product_condition",
            "G = N*U not evaluated: group order exceeds the complement search threshold",
        );
    }

    // Expected-values block, when present.
    if let Some(order) = &expect.order {
        checks.check(
            "expect_order",
            &summary.group_order == order,
            format!("|G| = {}, expected {order}", summary.group_order),
        );
    }
    if let Some(s) = expect.core_rank {
        checks.check(
            "expect_core_rank",
            classification.rank == s,
            format!("s = {}, expected {s}", classification.rank),
        );
    }
    if let Some(label) = &expect.image_label {
        let actual = classification.image.to_string();
        checks.check(
            "expect_image",
            &actual == label,
            format!("U = {actual}, expected {label}"),
        );
    }
    if let Some(gz) = &expect.genus_z {
        checks.check(
            "expect_genus_z",
            &classification.genus_z == gz,
            format!("g_Z = {}, expected {gz}", classification.genus_z),
        );
    }

    VerifyOutcome {
        checks,
        summary: Some(summary),
        classification: Some(classification),
    }
}

/// The built-in tower fixtures, keyed by short name.
pub fn builtin_fixtures() -> Vec<(&'static str, &'static str)> {
    vec![
        ("ex1", include_str!("../fixtures/ex1.tower")),
        ("ex2", include_str!("../fixtures/ex2.tower")),
        ("ex3", include_str!("../fixtures/ex3.tower")),
        ("ex4", include_str!("../fixtures/ex4.tower")),
        ("ex5", include_str!("../fixtures/ex5.tower")),
        ("ex6", include_str!("../fixtures/ex6.tower")),
        ("ex7", include_str!("../fixtures/ex7.tower")),
    ]
}

/// Line-oriented `key=value` rendering; byte-identical across runs for
/// identical input.
pub fn render_machine(outcome: &VerifyOutcome) -> String {
    let mut out = String::new();
    if let Some(s) = &outcome.summary {
        out.push_str(&format!("tower.p={}\n", s.p));
        out.push_str(&format!("tower.q={}\n", s.q));
        out.push_str(&format!("tower.degree={}\n", s.degree));
        out.push_str(&format!("group.order={}\n", s.group_order));
        out.push_str(&format!("h.order={}\n", s.h_order));
        out.push_str(&format!("n.order={}\n", s.n_order));
        out.push_str(&format!("monodromy.realized={}\n", s.monodromy_realized));
    }
    for check in outcome.checks.checks() {
        match check.status {
            CheckStatus::Pass => out.push_str(&format!("check.{}=pass\n", check.name)),
            CheckStatus::Fail => out.push_str(&format!("check.{}=fail\n", check.name)),
            CheckStatus::Note => {
                out.push_str(&format!("note.{}={}\n", check.name, check.detail))
            }
        }
    }
    if let Some(c) = &outcome.classification {
        out.push_str(&format!("classification.case={}\n", c.case_label()));
        out.push_str(&format!("classification.solvable={}\n", c.solvable));
        out.push_str(&format!("classification.galois={}\n", c.galois));
        out.push_str(&format!("classification.s={}\n", c.rank));
        out.push_str(&format!("classification.u={}\n", c.image));
        out.push_str(&format!("classification.u_order={}\n", c.image.order));
        if let Some(pres) = &c.presentation {
            out.push_str(&format!("classification.galois_exponent={}\n", pres.r));
        }
        out.push_str(&format!(
            "classification.product_condition={}\n",
            match c.product_condition {
                Some(v) => v.to_string(),
                None => "unevaluated".to_string(),
            }
        ));
        out.push_str(&format!("classification.h_meets_u={}\n", c.h_meets_u));
        out.push_str(&format!("genus.x={}\n", c.genus_x));
        out.push_str(&format!("genus.y={}\n", c.genus_y));
        out.push_str(&format!("genus.z={}\n", c.genus_z));
    }
    out.push_str(&format!(
        "result={}\n",
        if outcome.passed() { "pass" } else { "fail" }
    ));
    out
}

/// Human-readable report.
pub fn render_human(outcome: &VerifyOutcome) -> String {
    let mut out = String::new();
    if let Some(s) = &outcome.summary {
        out.push_str(&format!(
            "tower: p = {}, q = {}, degree = {}\n",
            s.p, s.q, s.degree
        ));
        out.push_str(&format!(
            "orders: |G| = {}, |H| = {}, |N| = {}\n",
            s.group_order, s.h_order, s.n_order
        ));
        if s.monodromy_realized {
            out.push_str("note: input was rebuilt through the coset action of N\n");
        }
    }
    out.push_str("checks:\n");
    out.push_str(&outcome.checks.to_string());
    if let Some(c) = &outcome.classification {
        out.push_str(&format!(
            "classification: case {} | U = {} (order {}) | s = {}\n",
            c.case_label(),
            c.image,
            c.image.order,
            c.rank
        ));
        out.push_str(&format!(
            "solvable = {}, galois = {}",
            c.solvable, c.galois
        ));
        if let Some(pres) = &c.presentation {
            out.push_str(&format!(
                " (presentation exponent r = {}, r^{} = 1 mod {})",
                pres.r, pres.p, pres.q
            ));
        }
        out.push('\n');
        out.push_str(&format!("H meets U: {}\n", c.h_meets_u));
        out.push_str(&format!(
            "genera: g_X = {}, g_Y = {}, g_Z = {}\n",
            c.genus_x, c.genus_y, c.genus_z
        ));
    }
    out.push_str(&format!(
        "result: {}\n",
        if outcome.passed() { "PASS" } else { "FAIL" }
    ));
    out
}
