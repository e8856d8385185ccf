//! Staged verification of a presentation and the resulting report.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use cy3_core::derivation::{check_delta_r_in_ideal, extend_derivation, transport_presentation, IdealMembership};
use cy3_core::homology::{
    associativity_failures, base_resolution_check, chain_map_commutation_check, euler_defects, graded_symmetry_check,
    induced_sequence_check, mapping_cone_check, pairing_matrix, trivial_extension_check, ChainMapVariant,
    ExactnessReport, KoszulDualElement, YonedaElement,
};
use cy3_core::normalform::{
    base_denominator, beilinson_dims, closed_form_check, coherence_witness_check, complete_gb, ore_denominator,
    CoherenceReport, HilbertData, TruncatedGb,
};
use cy3_core::quadratic::{is_standard, reduce_to_standard};
use cy3_core::superpotential::{
    build_superpotential, cyclic_partial, cyclicity_failures, jacobian_presentation_check, ore_presentation,
    rewritten_form_check, OrePresentation,
};
use cy3_core::tensoralg::{word_index, GeneratorSet, NcPoly, RatMatrix, Rational, Word};
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::format::Instance;

/// One stage of the pipeline, in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Validation,
    DeltaR,
    OrePresentation,
    Superpotential,
    CalabiYau,
    TrivialExtension,
    Hilbert,
    Resolution,
    Coherence,
    Beilinson,
    StandardForm,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::Validation,
        Check::DeltaR,
        Check::OrePresentation,
        Check::Superpotential,
        Check::CalabiYau,
        Check::TrivialExtension,
        Check::Hilbert,
        Check::Resolution,
        Check::Coherence,
        Check::Beilinson,
        Check::StandardForm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Validation => "validation",
            Check::DeltaR => "delta_r",
            Check::OrePresentation => "ore_presentation",
            Check::Superpotential => "superpotential",
            Check::CalabiYau => "calabi_yau",
            Check::TrivialExtension => "trivial_extension",
            Check::Hilbert => "hilbert",
            Check::Resolution => "resolution",
            Check::Coherence => "coherence",
            Check::Beilinson => "beilinson",
            Check::StandardForm => "standard_form",
        }
    }

    /// Stages past the δ(r) gate need the Ore extension.
    fn needs_ore(self) -> bool {
        !matches!(self, Check::Validation | Check::DeltaR | Check::StandardForm)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub check: Check,
    #[serde(flatten)]
    pub status: Status,
    pub summary: String,
    pub witness: Json,
    /// Wall time, shown in text reports only so structured output stays reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub generators: Vec<String>,
    pub ore_variable: String,
    pub bound: usize,
    pub parameters: BTreeMap<String, String>,
    pub stages: Vec<StageReport>,
}

impl Report {
    pub fn stage(&self, check: Check) -> Option<&StageReport> {
        self.stages.iter().find(|s| s.check == check)
    }

    pub fn all_passed(&self) -> bool {
        self.stages.iter().all(|s| s.status != Status::Fail)
    }

    /// 0 when no selected check fails, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }
}

pub struct PipelineInput<'a> {
    pub instance: &'a Instance,
    pub ore_variable: &'a str,
    pub bound: usize,
    pub parameters: BTreeMap<String, Rational>,
}

enum Outcome {
    Pass(String, Json),
    Fail(String, Json),
    Skip(String, Json),
}

fn outcome(ok: bool, summary: String, witness: Json) -> Outcome {
    if ok {
        Outcome::Pass(summary, witness)
    } else {
        Outcome::Fail(summary, witness)
    }
}

fn q(r: &Rational) -> String {
    r.to_string()
}

fn qs(v: &[Rational]) -> Vec<String> {
    v.iter().map(q).collect()
}

fn matrix_json(m: &RatMatrix) -> Json {
    json!(m.to_rows().iter().map(|r| qs(r)).collect::<Vec<_>>())
}

fn poly_json(p: &NcPoly, gens: &GeneratorSet) -> Json {
    let terms: Vec<Json> = p.terms().map(|(w, c)| json!([gens.render_word(w), q(c)])).collect();
    json!({ "rendered": p.render(gens), "terms": terms })
}

fn koszul_json(e: &KoszulDualElement) -> Json {
    json!({ "unit": q(&e.c0), "linear": qs(&e.v), "top": q(&e.c2) })
}

fn yoneda_json(e: &YonedaElement) -> Json {
    json!({ "first": koszul_json(&e.first), "second": koszul_json(&e.second) })
}

fn exactness_json(r: &ExactnessReport) -> Json {
    json!(r
        .degrees
        .iter()
        .map(|d| json!({
            "degree": d.degree,
            "dims": d.dims,
            "ranks": d.ranks,
            "cokernel_dim": d.target_dim,
            "composites_zero": d.composites_zero,
            "exact": d.exact,
        }))
        .collect::<Vec<_>>())
}

struct Context<'a> {
    input: &'a PipelineInput<'a>,
    gate: Option<String>,
    ore: Option<OrePresentation>,
    gb_b: Option<Result<TruncatedGb, String>>,
    gb_a: Option<Result<TruncatedGb, String>>,
}

impl<'a> Context<'a> {
    fn gb_b(&mut self) -> Result<&TruncatedGb, String> {
        if self.gb_b.is_none() {
            let ore = self.ore.as_ref().expect("Ore presentation built");
            self.gb_b = Some(complete_gb(ore.nvars(), &ore.relations, self.input.bound).map_err(|e| e.to_string()));
        }
        self.gb_b.as_ref().expect("set").as_ref().map_err(Clone::clone)
    }

    fn gb_a(&mut self) -> Result<&TruncatedGb, String> {
        if self.gb_a.is_none() {
            let pres = &self.input.instance.presentation;
            self.gb_a = Some(complete_gb(pres.n(), &[pres.relation.clone()], self.input.bound).map_err(|e| e.to_string()));
        }
        self.gb_a.as_ref().expect("set").as_ref().map_err(Clone::clone)
    }
}

/// Runs the selected stages in pipeline order. Validation always runs; the
/// δ(r) check and the Ore presentation run whenever a later stage needs them.
pub fn run_pipeline(input: &PipelineInput, selected: &[Check]) -> Report {
    let mut wanted: Vec<Check> = selected.to_vec();
    wanted.push(Check::Validation);
    if wanted.iter().any(|c| c.needs_ore()) {
        wanted.extend([Check::DeltaR, Check::OrePresentation]);
    }
    wanted.sort();
    wanted.dedup();

    let mut ctx = Context { input, gate: None, ore: None, gb_b: None, gb_a: None };
    let mut stages = Vec::new();
    for check in wanted {
        let start = Instant::now();
        let gated = match check {
            Check::Validation => None,
            Check::DeltaR | Check::StandardForm => ctx.gate.clone().filter(|g| g.starts_with("validation")),
            _ => ctx.gate.clone(),
        };
        let out = match gated {
            Some(reason) => Outcome::Skip(reason, Json::Null),
            None => run_stage(&mut ctx, check),
        };
        let (status, summary, witness) = match out {
            Outcome::Pass(s, w) => (Status::Pass, s, w),
            Outcome::Fail(s, w) => (Status::Fail, s, w),
            Outcome::Skip(r, w) => (Status::Skipped { reason: r.clone() }, r, w),
        };
        if status == Status::Fail && ctx.gate.is_none() {
            match check {
                Check::Validation => ctx.gate = Some(format!("validation failed: {summary}")),
                Check::DeltaR => ctx.gate = Some(format!("δ(r) check failed: {summary}")),
                Check::OrePresentation => ctx.gate = Some(format!("no Ore presentation: {summary}")),
                _ => {}
            }
        }
        stages.push(StageReport { check, status, summary, witness, elapsed: start.elapsed() });
    }

    Report {
        generators: input.instance.presentation.gens.names().to_vec(),
        ore_variable: input.ore_variable.to_string(),
        bound: input.bound,
        parameters: input.parameters.iter().map(|(k, v)| (k.clone(), q(v))).collect(),
        stages,
    }
}

fn run_stage(ctx: &mut Context, check: Check) -> Outcome {
    let result = match check {
        Check::Validation => validation(ctx),
        Check::DeltaR => delta_r(ctx),
        Check::OrePresentation => ore_stage(ctx),
        Check::Superpotential => superpotential(ctx),
        Check::CalabiYau => calabi_yau(ctx),
        Check::TrivialExtension => trivial_extension(ctx),
        Check::Hilbert => hilbert(ctx),
        Check::Resolution => resolution(ctx),
        Check::Coherence => coherence(ctx),
        Check::Beilinson => beilinson(ctx),
        Check::StandardForm => standard_form(ctx),
    };
    result.unwrap_or_else(|e| Outcome::Fail(format!("error: {e}"), Json::Null))
}

type StageResult = Result<Outcome, String>;

fn validation(ctx: &mut Context) -> StageResult {
    let pres = &ctx.input.instance.presentation;
    let n = pres.n();
    let m = pres.matrix.matrix();
    let rank = m.rank();
    let det = m.determinant().map_err(|e| e.to_string())?;
    let ok = rank == n;
    let summary = if ok {
        format!("{n} generators, M invertible (det {det})")
    } else {
        format!("M is singular: rank {rank} < {n}")
    };
    Ok(outcome(
        ok,
        summary,
        json!({
            "n": n,
            "matrix": matrix_json(m),
            "rank": rank,
            "determinant": q(&det),
            "relation": poly_json(&pres.relation, &pres.gens),
        }),
    ))
}

fn delta_r(ctx: &mut Context) -> StageResult {
    let inst = ctx.input.instance;
    let pres = &inst.presentation;
    let dr = extend_derivation(&inst.derivation, &pres.relation).map_err(|e| e.to_string())?;
    let images: Vec<Json> = inst.derivation.images().iter().map(|p| poly_json(p, &pres.gens)).collect();
    if dr.is_zero() {
        return Ok(Outcome::Pass(
            "δ(r) = 0".into(),
            json!({ "delta_images": images, "delta_r": poly_json(&dr, &pres.gens) }),
        ));
    }
    let membership = match check_delta_r_in_ideal(&inst.derivation, pres).map_err(|e| e.to_string())? {
        IdealMembership::Member { left, right } => json!({ "member": true, "left": qs(&left), "right": qs(&right) }),
        IdealMembership::NotMember { functional } => {
            let n = pres.n();
            let support: Vec<Json> = Word::all_of_length(n, 3)
                .iter()
                .filter_map(|w| {
                    let c = &functional[word_index(w, n)];
                    (!num_traits::Zero::is_zero(c)).then(|| json!([pres.gens.render_word(w), q(c)]))
                })
                .collect();
            json!({ "member": false, "functional": support })
        }
    };
    let member = membership["member"].as_bool().unwrap_or(false);
    let summary = if member {
        "δ(r) ≠ 0, although δ(r) lies in the ideal (r)".to_string()
    } else {
        "δ(r) ≠ 0 and δ(r) is not in the ideal (r)".to_string()
    };
    Ok(Outcome::Fail(
        summary,
        json!({ "delta_images": images, "delta_r": poly_json(&dr, &pres.gens), "membership": membership }),
    ))
}

fn ore_stage(ctx: &mut Context) -> StageResult {
    let inst = ctx.input.instance;
    match ore_presentation(&inst.presentation, &inst.derivation, ctx.input.ore_variable) {
        Ok(ore) => {
            let rels: Vec<Json> = ore.relations.iter().map(|p| poly_json(p, &ore.gens_hat)).collect();
            let summary = format!("{} independent relations over {} generators", ore.relations.len(), ore.nvars());
            ctx.ore = Some(ore);
            Ok(Outcome::Pass(summary, json!({ "relations": rels })))
        }
        Err(e) => Ok(Outcome::Fail(e.to_string(), Json::Null)),
    }
}

fn superpotential(ctx: &mut Context) -> StageResult {
    let ore = ctx.ore.as_ref().expect("Ore presentation built");
    let gens = &ore.gens_hat;
    let w = build_superpotential(ore).map_err(|e| e.to_string())?;
    let failures = cyclicity_failures(w.poly()).map_err(|e| e.to_string())?;
    let jac = jacobian_presentation_check(ore, &w).map_err(|e| e.to_string())?;
    let rewritten = rewritten_form_check(ore, &w);
    let partials: Vec<Json> = (0..ore.nvars())
        .map(|i| cyclic_partial(&w, i).map(|p| json!({ "generator": gens.name(i), "partial": poly_json(&p, gens) })))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let ok = failures.is_empty() && jac.holds() && rewritten;
    let summary = format!(
        "{} terms, cyclic for {}/{} functionals, Jacobian ranks {}/{}/{}",
        w.poly().len(),
        ore.nvars() - failures.len(),
        ore.nvars(),
        jac.derivative_rank,
        jac.relation_rank,
        jac.union_rank
    );
    Ok(outcome(
        ok,
        summary,
        json!({
            "superpotential": poly_json(w.poly(), gens),
            "cyclicity_failures": failures.iter().map(|&i| gens.name(i)).collect::<Vec<_>>(),
            "cyclic_partials": partials,
            "jacobian": {
                "derivative_rank": jac.derivative_rank,
                "relation_rank": jac.relation_rank,
                "union_rank": jac.union_rank,
            },
            "rewritten_form_agrees": rewritten,
        }),
    ))
}

fn calabi_yau(ctx: &mut Context) -> StageResult {
    let inst = ctx.input.instance;
    let m = inst.presentation.matrix.matrix();
    let d = &inst.derivation;
    let err = |e: cy3_core::Error| e.to_string();
    let symmetric = graded_symmetry_check(m, d).map_err(err)?;
    let pairing = pairing_matrix(m, d).map_err(err)?;
    let rank = pairing.rank();
    let failures = associativity_failures(m, d).map_err(err)?;
    let size = inst.presentation.n() + 1;
    let ok = symmetric && rank == size && failures.is_empty();
    let summary = format!(
        "graded symmetry {}, pairing rank {rank}/{size}, {} associativity failure(s)",
        if symmetric { "holds" } else { "fails" },
        failures.len()
    );
    Ok(outcome(
        ok,
        summary,
        json!({
            "graded_symmetric": symmetric,
            "pairing_matrix": matrix_json(&pairing),
            "pairing_rank": rank,
            "associativity_failures": failures,
        }),
    ))
}

fn trivial_extension(ctx: &mut Context) -> StageResult {
    let inst = ctx.input.instance;
    let report = trivial_extension_check(inst.presentation.matrix.matrix(), &inst.derivation).map_err(|e| e.to_string())?;
    let mismatches: Vec<Json> = report
        .mismatches
        .iter()
        .zip(&report.differences)
        .map(|(&(i, j), diff)| json!({ "left": i, "right": j, "yoneda_minus_trivial": yoneda_json(diff) }))
        .collect();
    let summary = if report.holds() {
        "Yoneda product equals the trivial-extension product".to_string()
    } else {
        format!(
            "products differ on {} basis pair(s) in E¹×E¹ by the δ correction",
            report.mismatches.len()
        )
    };
    Ok(outcome(report.holds(), summary, json!({ "mismatches": mismatches })))
}

fn hilbert(ctx: &mut Context) -> StageResult {
    let n = ctx.input.instance.presentation.n();
    let b = ctx.gb_b()?;
    let rules_b = b.rules().len();
    let overlaps = b.overlaps_resolve();
    let h_b = HilbertData::new(b.normal_word_counts());
    let a = ctx.gb_a()?;
    let h_a = HilbertData::new(a.normal_word_counts());
    let den_b = ore_denominator(n);
    let den_a = base_denominator(n);
    let b_ok = closed_form_check(&h_b, &[1], &den_b);
    let a_ok = closed_form_check(&h_a, &[1], &den_a);
    let defects = euler_defects(&h_b.coeffs, n);
    let ok = b_ok && a_ok && overlaps && defects.is_empty();
    let summary = format!(
        "dim B_k = {:?}, closed form {}",
        h_b.coeffs,
        if b_ok { "matches" } else { "differs" }
    );
    Ok(outcome(
        ok,
        summary,
        json!({
            "extension": { "dims": h_b.coeffs, "denominator": den_b, "matches_closed_form": b_ok },
            "base": { "dims": h_a.coeffs, "denominator": den_a, "matches_closed_form": a_ok },
            "groebner_rules": rules_b,
            "overlaps_resolve": overlaps,
            "euler_defects": defects,
        }),
    ))
}

fn resolution(ctx: &mut Context) -> StageResult {
    let bound = ctx.input.bound;
    let pres = &ctx.input.instance.presentation;
    let base = base_resolution_check(pres, ctx.gb_a()?, bound).map_err(|e| e.to_string())?;
    let ore = ctx.ore.clone().expect("Ore presentation built");
    let gb = ctx.gb_b()?;
    let err = |e: cy3_core::Error| e.to_string();
    let induced = induced_sequence_check(&ore, gb, bound).map_err(err)?;
    let cone = mapping_cone_check(&ore, gb, bound).map_err(err)?;
    let full = chain_map_commutation_check(&ore, gb, bound, ChainMapVariant::Full).map_err(err)?;
    let control = chain_map_commutation_check(&ore, gb, bound, ChainMapVariant::DropDelta).map_err(err)?;
    let ok = base.holds() && induced.holds() && cone.holds() && full.holds();
    let summary = format!(
        "base resolution {}, induced sequence {}, mapping cone {}, chain map {} through degree {bound}",
        if base.holds() { "exact" } else { "not exact" },
        if induced.holds() { "exact" } else { "not exact" },
        if cone.holds() { "exact" } else { "not exact" },
        if full.holds() { "commutes" } else { "does not commute" },
    );
    Ok(outcome(
        ok,
        summary,
        json!({
            "base_resolution": exactness_json(&base),
            "induced_sequence": exactness_json(&induced),
            "mapping_cone": exactness_json(&cone),
            "chain_map": { "left_square": full.left_square, "right_square": full.right_square },
            "chain_map_without_delta": { "left_square": control.left_square, "right_square": control.right_square },
        }),
    ))
}

fn coherence(ctx: &mut Context) -> StageResult {
    let inst = ctx.input.instance;
    let err = |e: cy3_core::Error| e.to_string();
    let m = &inst.presentation.matrix;
    let (ore, transport) = if inst.presentation.n() == 2 || is_standard(m) {
        (ctx.ore.clone().expect("Ore presentation built"), Json::Null)
    } else {
        let p = reduce_to_standard(m).map_err(err)?;
        let (pres, d) = transport_presentation(&inst.presentation, &inst.derivation, &p).map_err(err)?;
        (ore_presentation(&pres, &d, ctx.input.ore_variable).map_err(err)?, matrix_json(&p))
    };
    match coherence_witness_check(&ore, ctx.input.bound).map_err(err)? {
        CoherenceReport::Noetherian => {
            Ok(Outcome::Pass("two generators: the extension is Noetherian".into(), json!({ "noetherian": true })))
        }
        CoherenceReport::PreconditionFailed(f) => {
            let reason = if f.no_square_free_index {
                "no generator x_j with k^i_jj = 0 for every i"
            } else {
                "M is not standard"
            };
            Ok(Outcome::Skip(
                reason.to_string(),
                json!({
                    "transport": transport,
                    "matrix_not_standard": f.matrix_not_standard,
                    "no_square_free_index": f.no_square_free_index,
                }),
            ))
        }
        CoherenceReport::Witnesses(w) => {
            let ok = w.holds();
            let summary = format!(
                "B/I dims {:?}, images commute {}, Hilbert identity {}",
                w.quotient_dims,
                if w.images_commute { "yes" } else { "no" },
                if w.hilbert_identity_ok { "holds" } else { "fails" }
            );
            Ok(outcome(
                ok,
                summary,
                json!({
                    "transport": transport,
                    "distinguished_generator": w.distinguished_index + 1,
                    "bound": w.bound,
                    "quotient_dims": w.quotient_dims,
                    "quotient_dims_ok": w.quotient_dims_ok,
                    "images_commute": w.images_commute,
                    "ideal_dims": qs(&w.ideal_dims),
                    "predicted_ideal_dims": qs(&w.predicted_ideal_dims),
                    "hilbert_identity_ok": w.hilbert_identity_ok,
                    "expansion_reduces": w.expansion_reduces,
                    "left_ideal_membership": w.left_ideal_membership,
                }),
            ))
        }
    }
}

fn beilinson(ctx: &mut Context) -> StageResult {
    if ctx.input.bound < 2 {
        return Ok(Outcome::Skip(format!("degree bound {} < 2", ctx.input.bound), Json::Null));
    }
    let h = HilbertData::new(ctx.gb_b()?.normal_word_counts());
    let grid = beilinson_dims(&h).map_err(|e| e.to_string())?;
    Ok(Outcome::Pass(
        format!("Hom dimensions total {}", grid.total()),
        json!({ "grid": grid.grid, "total": grid.total() }),
    ))
}

fn standard_form(ctx: &mut Context) -> StageResult {
    let inst = ctx.input.instance;
    let err = |e: cy3_core::Error| e.to_string();
    let m = &inst.presentation.matrix;
    let p = reduce_to_standard(m).map_err(err)?;
    let reduced = m.congruent(&p).map_err(err)?;
    let (pres, d) = transport_presentation(&inst.presentation, &inst.derivation, &p).map_err(err)?;
    let ok = is_standard(&reduced);
    let images: Vec<Json> = d.images().iter().map(|q| poly_json(q, &pres.gens)).collect();
    Ok(outcome(
        ok,
        format!("Pᵗ M P is {}standard", if ok { "" } else { "not " }),
        json!({
            "transform": matrix_json(&p),
            "reduced_matrix": matrix_json(reduced.matrix()),
            "transported_delta_images": images,
            "transported_relation": poly_json(&pres.relation, &pres.gens),
        }),
    ))
}
