//! Run orchestration shared by the command-line interface and the
//! acceptance suite: configuration parsing, the admissible-side selection
//! rule, the chain-identity battery, and the three commands.

use std::time::Instant;

use crate::algebra::{
    check_conditions, AlgebraError, ConditionVariant, Gl, Parabolic, StarMap,
};
use crate::chains::{ChainComplex, ChainSide};
use crate::jets::JetSystem;
use crate::linalg::Mat;
use crate::quabla;
use crate::rep::RepModule;
use crate::report::*;
use crate::resolution::{
    build_resolution, casimir_criterion_censuses, census_disagreements, euler_check,
    required_k_max, WeightBox,
};
use crate::scalar::q;

/// Parsed run configuration; string fields keep their canonical encodings.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algebra: String,
    pub levi: String,
    pub module: String,
    pub star: String,
    pub variant: String,
    pub truncation: usize,
    pub k_max: usize,
    pub weight_box: Option<String>,
    pub out: Option<String>,
    pub verbosity: u8,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            algebra: "gl:1|1".into(),
            levi: "levi=".into(),
            module: "natural".into(),
            star: "natural".into(),
            variant: "neccond".into(),
            truncation: 4,
            k_max: 3,
            weight_box: None,
            out: None,
            verbosity: 0,
        }
    }
}

impl RunConfig {
    /// Canonical rendering: parse(render(cfg)) = cfg.
    pub fn render(&self) -> String {
        let mut parts = vec![
            format!("algebra={}", self.algebra),
            self.levi.clone(),
            format!("module={}", self.module),
            format!("star={}", self.star),
            format!("variant={}", self.variant),
            format!("N={}", self.truncation),
            format!("kmax={}", self.k_max),
        ];
        if let Some(b) = &self.weight_box {
            parts.push(format!("box={b}"));
        }
        parts.join(" ")
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            algebra: self.algebra.clone(),
            levi: self.levi.clone(),
            module: self.module.clone(),
            star: self.star.clone(),
            variant: self.variant.clone(),
            truncation: Some(self.truncation),
            k_max: Some(self.k_max),
            weight_box: self.weight_box.clone(),
            verbosity: self.verbosity,
        }
    }

    /// Key=value assignment, shared by flags and config files.
    pub fn assign(&mut self, key: &str, value: &str) -> Result<(), AlgebraError> {
        match key {
            "algebra" => self.algebra = value.to_string(),
            "levi" => self.levi = format!("levi={value}"),
            "module" => self.module = value.to_string(),
            "star" => self.star = value.to_string(),
            "variant" => self.variant = value.to_string(),
            "N" => {
                self.truncation = value
                    .parse()
                    .map_err(|_| AlgebraError::ParseError(format!("bad N {value:?}")))?
            }
            "kmax" => {
                self.k_max = value
                    .parse()
                    .map_err(|_| AlgebraError::ParseError(format!("bad kmax {value:?}")))?
            }
            "box" => self.weight_box = Some(value.to_string()),
            "out" => self.out = Some(value.to_string()),
            "v" => {
                self.verbosity = value
                    .parse()
                    .map_err(|_| AlgebraError::ParseError(format!("bad verbosity {value:?}")))?
            }
            _ => {
                return Err(AlgebraError::ParseError(format!("unknown key {key:?}")));
            }
        }
        Ok(())
    }

    pub fn parsed(&self) -> Result<(Gl, Parabolic, StarMap, ConditionVariant, RepModule), AlgebraError> {
        let gl = Gl::parse(&self.algebra)?;
        let p = Parabolic::parse(&gl, &self.levi)?;
        let star = StarMap::parse(&self.star)?;
        let variant = ConditionVariant::parse(&self.variant)?;
        let module = RepModule::parse(&gl, &self.module)?;
        Ok((gl, p, star, variant, module))
    }
}

/// Process exit classification.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Outcome {
    AllPass = 0,
    CheckFailed = 1,
    UsageError = 2,
    TruncationInsufficient = 3,
}

/// The condition-check command.
pub fn cmd_check(cfg: &RunConfig) -> Result<(Report, Outcome), AlgebraError> {
    let started = Instant::now();
    let (_gl, p, star, variant, _module) = cfg.parsed()?;
    let report = check_conditions(&p, &star, variant);
    let outcome = if report.passed() {
        Outcome::AllPass
    } else {
        Outcome::CheckFailed
    };
    let body = ReportBody {
        schema: SCHEMA.into(),
        config: cfg.echo(),
        condition: Some(ConditionSection::from_report(&report)),
        ..Default::default()
    };
    Ok((
        Report {
            body,
            timing_ms: started.elapsed().as_millis(),
        },
        outcome,
    ))
}

/// The side the engine runs a triple on: the variant whose invariance
/// check passes, preferring the n-wedge picture.
pub enum SelectedSide {
    VSide,
    WSide,
    Inadmissible,
}

pub fn select_side(p: &Parabolic, star: &StarMap) -> SelectedSide {
    if check_conditions(p, star, ConditionVariant::NecCond).invariance_ok {
        SelectedSide::VSide
    } else if check_conditions(p, star, ConditionVariant::NecCond2).invariance_ok {
        SelectedSide::WSide
    } else {
        SelectedSide::Inadmissible
    }
}

/// The §-battery of chain identities on an admissible complex, together
/// with per-level cohomology summaries.
pub fn chain_battery(
    cc: &mut ChainComplex,
    k_max: usize,
    run_defect: bool,
) -> (ChainChecks, Vec<CohomologySection>) {
    let mut checks = ChainChecks {
        side: match cc.side {
            ChainSide::WedgeN => "wedge-n".into(),
            ChainSide::WedgeNbar => "wedge-nbar".into(),
        },
        codiff_squares_to_zero: true,
        diff_squares_to_zero: true,
        gram_adjointness: true,
        invariant_pairing: true,
        morphisms: true,
        action_defect: if run_defect { Some(true) } else { None },
        hodge: true,
        disjointness: true,
        nilradical_trivial_on_harmonics: true,
        casimir_criterion_agrees: true,
        quabla_casimir_identity: None,
    };
    for k in 1..=k_max {
        if !cc.codiff[k].mul(&cc.codiff[k + 1]).is_zero() {
            checks.codiff_squares_to_zero = false;
        }
    }
    for k in 0..k_max {
        if !cc.diff[k + 1].mul(&cc.diff[k]).is_zero() {
            checks.diff_squares_to_zero = false;
        }
    }
    for k in 0..=k_max {
        let lhs = cc.level(k + 1).gram.mul(&cc.diff[k]);
        let rhs = cc.codiff[k + 1]
            .transpose()
            .mul(&cc.level(k).gram)
            .scale(&q(-1));
        if lhs != rhs {
            checks.gram_adjointness = false;
        }
        if !cc.check_invariant_pairing(k) {
            checks.invariant_pairing = false;
        }
        if !cc.check_morphism_properties(k) {
            checks.morphisms = false;
        }
        if run_defect && !cc.check_action_defect(k) {
            checks.action_defect = Some(false);
        }
        if cc.hodge(k).is_err() {
            checks.hodge = false;
        }
        if !cc.check_disjointness(k) {
            checks.disjointness = false;
        }
    }
    let mut sections = Vec::new();
    for k in 0..=k_max {
        match cc.cohomology(k) {
            Ok(summary) => {
                let by_casimir = cc.cohomology_by_casimir(k);
                if !summary.same_content(&by_casimir) {
                    checks.casimir_criterion_agrees = false;
                }
                sections.push(CohomologySection {
                    k,
                    chain_dim: cc.level(k).dim,
                    harmonic_dim: summary.harmonic_dim,
                    hw_list: render_hw_list(&summary.hw_list),
                });
            }
            Err(_) => {
                checks.nilradical_trivial_on_harmonics = false;
                checks.hodge = false;
            }
        }
    }
    if quabla::killing_duals_match_partners(cc) {
        let mut ok = true;
        for k in 0..=k_max.min(3) {
            match quabla::verify_quabla_casimir(cc, k) {
                Ok(v) => ok &= v,
                Err(_) => ok = false,
            }
        }
        checks.quabla_casimir_identity = Some(ok);
    }
    (checks, sections)
}

/// The cohomology command: build the admissible picture of the triple and
/// run the identity battery.
pub fn cmd_cohomology(cfg: &RunConfig) -> Result<(Report, Outcome), AlgebraError> {
    let started = Instant::now();
    let (_gl, p, star, _variant, module) = cfg.parsed()?;
    let k_max = cfg.k_max;
    let mut body = ReportBody {
        schema: SCHEMA.into(),
        config: cfg.echo(),
        ..Default::default()
    };
    let mut outcome = Outcome::AllPass;
    match select_side(&p, &star) {
        SelectedSide::VSide => {
            body.condition = Some(ConditionSection::from_report(&check_conditions(
                &p,
                &star,
                ConditionVariant::NecCond,
            )));
            let mut cc = ChainComplex::build(
                &p,
                &star,
                ConditionVariant::NecCond,
                ChainSide::WedgeN,
                &module,
                k_max + 1,
            )
            .map_err(|e| AlgebraError::ParseError(e.to_string()))?;
            let (checks, sections) = chain_battery(&mut cc, k_max, true);
            if !checks.all_pass() {
                outcome = Outcome::CheckFailed;
            }
            if cfg.verbosity >= 2 {
                for k in 1..=k_max {
                    body.matrices
                        .push(dump_matrix(&format!("codiff-{k}"), &cc.codiff[k]));
                    body.matrices
                        .push(dump_matrix(&format!("diff-{}", k - 1), &cc.diff[k - 1]));
                }
            }
            body.chain_checks = Some(checks);
            body.cohomology = sections;
        }
        SelectedSide::WSide => {
            body.condition = Some(ConditionSection::from_report(&check_conditions(
                &p,
                &star,
                ConditionVariant::NecCond2,
            )));
            // the nbar-wedge side carries the codifferential and the Casimir
            // filter; the full identity battery runs on the dual n-wedge
            // complex, where the Gram is positive definite at every level
            let mut cc = ChainComplex::build(
                &p,
                &star,
                ConditionVariant::NecCond2,
                ChainSide::WedgeNbar,
                &module,
                k_max + 1,
            )
            .map_err(|e| AlgebraError::ParseError(e.to_string()))?;
            let dual_star = StarMap::Dualized(Box::new(star.clone()));
            let mut v_side = ChainComplex::build(
                &p,
                &dual_star,
                ConditionVariant::NecCond,
                ChainSide::WedgeN,
                &module.dual(),
                k_max + 1,
            )
            .map_err(|e| AlgebraError::ParseError(e.to_string()))?;
            let (mut checks, _) = chain_battery(&mut v_side, k_max, true);
            checks.side = "wedge-nbar (battery on the dual wedge-n complex)".into();
            // codifferential square on the case's own side
            for k in 1..=k_max {
                if !cc.codiff[k].mul(&cc.codiff[k + 1]).is_zero() {
                    checks.codiff_squares_to_zero = false;
                }
            }
            // per-level summaries: the Casimir filter on this side, checked
            // against the dual transport of the n-wedge harmonics and
            // against the rank censuses
            let levels = crate::resolution::resolution_levels(&mut cc, k_max, true)
                .map_err(|e| AlgebraError::ParseError(e.to_string()))?;
            let mut sections = Vec::new();
            for d in &levels.descriptors {
                let (dim, hw_list) = crate::chains::dual_transported_summary(&mut v_side, d.k)
                    .map_err(|e| AlgebraError::ParseError(e.to_string()))?;
                if dim != d.harmonic_dim || hw_list != d.hw_list {
                    checks.casimir_criterion_agrees = false;
                }
                sections.push(CohomologySection {
                    k: d.k,
                    chain_dim: cc.level(d.k).dim,
                    harmonic_dim: d.harmonic_dim,
                    hw_list: render_hw_list(&d.hw_list),
                });
            }
            if !checks.all_pass() {
                outcome = Outcome::CheckFailed;
            }
            body.chain_checks = Some(checks);
            body.cohomology = sections;
        }
        SelectedSide::Inadmissible => {
            body.warnings
                .push("triple fails both admissibility variants; rank-route censuses only".into());
            let mut cc = ChainComplex::build_codiff_only(
                &p,
                &star,
                ConditionVariant::NecCond2,
                ChainSide::WedgeNbar,
                &module,
                k_max + 1,
            )
            .map_err(|e| AlgebraError::ParseError(e.to_string()))?;
            let levels = crate::resolution::resolution_levels(&mut cc, k_max, false)
                .map_err(|e| AlgebraError::ParseError(e.to_string()))?;
            for d in &levels.descriptors {
                body.cohomology.push(CohomologySection {
                    k: d.k,
                    chain_dim: cc.level(d.k).dim,
                    harmonic_dim: d.harmonic_dim,
                    hw_list: Default::default(),
                });
            }
            outcome = Outcome::CheckFailed;
        }
    }
    Ok((
        Report {
            body,
            timing_ms: started.elapsed().as_millis(),
        },
        outcome,
    ))
}

/// The resolve command: conditions, the resolution of W with the Euler
/// verification, and the jet-side coresolution battery with its windows.
pub fn cmd_resolve(cfg: &RunConfig) -> Result<(Report, Outcome), AlgebraError> {
    let started = Instant::now();
    let (gl, p, star, _variant, module) = cfg.parsed()?;
    let k_max = cfg.k_max;
    let n = cfg.truncation;
    let mut body = ReportBody {
        schema: SCHEMA.into(),
        config: cfg.echo(),
        ..Default::default()
    };
    let mut outcome = Outcome::AllPass;

    let condition = check_conditions(&p, &star, ConditionVariant::NecCond2);
    body.condition = Some(ConditionSection::from_report(&condition));

    // resolution levels and Euler verification
    let res = build_resolution(&p, &star, &module, k_max)
        .map_err(|e| AlgebraError::ParseError(e.to_string()))?;
    let bx = match &cfg.weight_box {
        Some(s) => WeightBox::parse(s)?,
        None => WeightBox::covering(&module.weights),
    };
    let needed = required_k_max(&gl, &res.w_census, &bx);
    if needed > k_max {
        body.warnings.push(format!(
            "k_max {k_max} below the safe bound {needed} for the requested box"
        ));
        outcome = Outcome::TruncationInsufficient;
    }
    let verdicts = euler_check(&p, &res.levels.censuses, &res.w_census, &bx);
    let euler = euler_section(&bx.render(), k_max, &verdicts);
    let mut disagreements = Vec::new();
    if p.levi_roots.is_empty() {
        let crit = casimir_criterion_censuses(&p, &module, k_max);
        disagreements = census_disagreements(&res.levels.censuses, &crit)
            .into_iter()
            .map(|(k, w)| format!("k={k} mu={}", w.render()))
            .collect();
    }
    if !euler.all_pass {
        outcome = Outcome::CheckFailed;
    }
    if !res.admissible {
        if disagreements.is_empty() {
            body.warnings
                .push("inadmissible triple but no census disagreement found".into());
        }
        outcome = Outcome::CheckFailed;
    } else if !disagreements.is_empty() {
        outcome = Outcome::CheckFailed;
    }
    body.resolution = Some(ResolutionSection {
        admissible: res.admissible,
        levels: res
            .levels
            .descriptors
            .iter()
            .map(|d| CohomologySection {
                k: d.k,
                chain_dim: 0,
                harmonic_dim: d.harmonic_dim,
                hw_list: render_hw_list(&d.hw_list),
            })
            .collect(),
        euler,
        criterion_census_disagreements: disagreements,
    });

    // jet-side verification on the dual n-wedge complex
    if res.admissible {
        if n < 2 {
            body.warnings
                .push(format!("truncation N={n} too small for jet checks; need N ≥ 2"));
            outcome = Outcome::TruncationInsufficient;
        } else {
            let jet_top = k_max.min(n.saturating_sub(1)).max(1);
            if jet_top < k_max {
                body.warnings.push(format!(
                    "jet windows cover k ≤ {jet_top}; increase N beyond {n} for k_max {k_max}"
                ));
            }
            let cc = crate::jets::v_side_for_resolution(&p, &star, &module, jet_top + 2)
                .map_err(|e| AlgebraError::ParseError(e.to_string()))?;
            let mut js = JetSystem::new(cc, n);
            let push = |name: &str, window: usize, pass: bool, body: &mut ReportBody| {
                body.jets.push(JetCheck {
                    name: name.into(),
                    window,
                    pass,
                });
            };
            let hopf = js.check_coassociativity() && js.check_antipode_axiom();
            push("hopf-axioms", n, hopf, &mut body);
            for k in 0..=jet_top {
                let chi = js.chi(k);
                let chi_inv = js.chi_inverse(k);
                let pass = chi.mat.mul(&chi_inv.mat) == Mat::identity(js.jet_dim(k));
                push(&format!("chi-iso-k{k}"), n, pass, &mut body);
            }
            let mut triv = js.trivial_companion(jet_top + 2);
            for k in 0..jet_top {
                let chi_k = js.chi(k);
                let chi_up_inv = js.chi_inverse(k + 1);
                let dj = js.d_untwisted(&mut triv, k);
                let d = js.jet_d(k);
                let composed = chi_up_inv.compose(&dj.compose(&chi_k));
                let w = n.saturating_sub(composed.cost.max(d.cost));
                push(
                    &format!("chi-intertwines-d-k{k}"),
                    w,
                    js.ops_agree(k + 1, k, &d, &composed),
                    &mut body,
                );
            }
            for k in 0..jet_top {
                let d1 = js.jet_d(k);
                let d2 = js.jet_d(k + 1);
                let dd = d2.compose(&d1);
                let w = n.saturating_sub(dd.cost);
                push(&format!("dd-zero-k{k}"), w, js.op_vanishes(k + 2, k, &dd), &mut body);
            }
            // im ε = ker d0 in the aligned window
            {
                let eps = js.epsilon();
                let d0 = js.jet_d(0);
                let rows = js.indices_up_to(1, n - 1);
                let cols = js.indices_up_to(0, n);
                let mut d0w = Mat::zero(rows.len(), cols.len());
                for (ri, &r) in rows.iter().enumerate() {
                    for (ci, &c) in cols.iter().enumerate() {
                        let v = d0.mat.at(r, c);
                        if !num_traits::Zero::is_zero(v) {
                            d0w.set(ri, ci, v.clone());
                        }
                    }
                }
                let ker = d0w.kernel();
                let mut eps_w = Mat::zero(cols.len(), eps.cols);
                for (ri, &r) in cols.iter().enumerate() {
                    for c in 0..eps.cols {
                        let v = eps.at(r, c);
                        if !num_traits::Zero::is_zero(v) {
                            eps_w.set(ri, c, v.clone());
                        }
                    }
                }
                push(
                    "epsilon-spans-ker-d0",
                    n - 1,
                    ker.same_column_span(&eps_w),
                    &mut body,
                );
            }
            for k in 1..=jet_top.min(n.saturating_sub(2)) {
                let (ker, im, contained) = js.de_rham_exactness(k);
                push(
                    &format!("de-rham-exactness-k{k}"),
                    n - k - 1,
                    contained && ker == im,
                    &mut body,
                );
            }
            // propsplit and the BGG sequence
            for k in 0..=jet_top.saturating_sub(1) {
                let pi = js.pi_op(k);
                let codiff_up = js.jet_codiff(k + 1);
                let z1 = pi.compose(&codiff_up);
                let w1 = n.saturating_sub(z1.cost);
                push(&format!("pi-kills-codiff-k{k}"), w1, js.op_vanishes(k, k + 1, &z1), &mut body);
                let pipi = pi.compose(&pi);
                let w2 = n.saturating_sub(pipi.cost);
                push(&format!("pi-idempotent-k{k}"), w2, js.ops_agree(k, k, &pipi, &pi), &mut body);
            }
            {
                let (kd, ri, eq) = js.bgg_kernel_at_zero();
                let _ = (kd, ri);
                push("epsilon-prime-spans-ker-bgg-d0", n - 1, eq, &mut body);
                if jet_top >= 2 {
                    let d0 = js.bgg_d(0);
                    let d1 = js.bgg_d(1);
                    let dd = d1.compose(&d0);
                    let w = n.saturating_sub(dd.cost);
                    let pass = js.h_window(&dd, 2, 0, w, n).is_zero();
                    push("bgg-dd-zero", w, pass, &mut body);
                    let (m, ker, im, contained) = js.bgg_exactness(1);
                    push("bgg-exactness-k1", m, contained && ker == im, &mut body);
                    if m == 0 && !js.complete() {
                        let d0c = js.bgg_d(0).cost;
                        let d1c = js.bgg_d(1).cost;
                        body.warnings.push(format!(
                            "BGG-exactness window reduced to degree 0; use N ≥ {} for a wider window",
                            d0c + d1c + 2
                        ));
                    }
                }
            }
            if body.jets.iter().any(|c| !c.pass) {
                outcome = Outcome::CheckFailed;
            }
        }
    } else {
        body.warnings
            .push("jet coresolution checks skipped: triple inadmissible".into());
    }

    Ok((
        Report {
            body,
            timing_ms: started.elapsed().as_millis(),
        },
        outcome,
    ))
}
