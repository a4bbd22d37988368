//! The analysis pipeline and its witness-carrying reports.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{certify, Error, Result};
use crate::group::{FiniteGroup, GroupDescriptor};
use crate::linalg::{check_modulus, FieldMatrix, MatrixSpace, Subspace};
use crate::obstruction::{
    additive_cocycle, analyze_obstruction, certify_extension, coboundary, gr_module, gr_radical_module, ideal_of,
    layered_tensor_structure, quotient_system, solve_coboundary, AdditiveCocycle, CoefficientModule, GradedModule,
    GradedRoute, LayerReport, ObstructionReport, ObstructionRoute, Triviality,
};
use crate::rep::{socle_series, Representation, Search};
use crate::schreier::{certify_splitting, extension_from_rep, CoefficientGroup, SchreierSystem};
use crate::spec::{Analysis, Caps, Problem, ProblemSpec};
use crate::stability::{
    numerical_from_structure, tensor_to_numerical, test_g_stability, test_split_observability, CosetSearch, FactorSet,
    NormalModule, NumericalWitness, ObservabilityWitness, StructureMap, SubmoduleAction, TensorWitness,
};

pub const REPORT_SCHEMA: &str = "gstable.report/1";

/// `true`/`false`, or a word such as `"unresolved"` when the question was not decided.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Verdict {
    Decided(bool),
    Open(String),
}

impl Verdict {
    pub fn is(&self, b: bool) -> bool {
        *self == Verdict::Decided(b)
    }

    fn of(t: &Triviality) -> Self {
        match t {
            Triviality::Trivial => Verdict::Decided(true),
            Triviality::Nontrivial => Verdict::Decided(false),
            Triviality::Unresolved(_) => Verdict::Open("unresolved".into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericalSection {
    pub copies: usize,
    pub iso: FieldMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilitySection {
    pub g_stable: Verdict,
    /// Coset representative whose twist is not isomorphic, as a permutation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_witness: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_only: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// `α(r_k)` for the coset representatives of `N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_map: Option<Vec<FieldMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor_set_trivial: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerical: Option<NumericalSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleSection {
    pub action: Vec<FieldMatrix>,
    pub values: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorSection {
    /// Generator matrices of `Y` on `G/N`.
    pub y: Vec<FieldMatrix>,
    /// Generator matrices of the `G`-module on `Q ⊗ Y`.
    pub module: Vec<FieldMatrix>,
    /// `α(r_k)` recovered from the numerical witness of `Q ⊗ Y`.
    pub closing_structure_map: Vec<FieldMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionSection {
    pub route: ObstructionRoute,
    pub trivial: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub cocycle_dim: usize,
    pub ideal: Vec<FieldMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<FieldMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extended_rep: Option<Vec<FieldMatrix>>,
    #[serde(default)]
    pub layers: Vec<LayerReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<TensorSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor_status: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionSection {
    pub extends: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extended_rep: Option<Vec<FieldMatrix>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSection {
    pub route: GradedRoute,
    pub layer_dims: Vec<usize>,
    pub basis: FieldMatrix,
    pub generators: Vec<FieldMatrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradedSource {
    /// The pair `(Q, V)` with the structure map of the stability section.
    V,
    /// `V = Q` with the extended representation.
    Extension,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<GradedSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub socle: Option<GradedSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radical: Option<GradedSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchreierSection {
    pub u_order: usize,
    pub extension_order: usize,
    pub split: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservabilitySection {
    pub observable: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<FieldMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: String,
    pub problem: ProblemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability: Option<StabilitySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gr: Option<GrSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schreier: Option<SchreierSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observability: Option<ObservabilitySection>,
    /// Analyses that could not run, with the reason.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub skipped: BTreeMap<String, String>,
    pub timing_ms: u64,
}

impl AnalysisReport {
    /// Some decided verdict is negative.
    pub fn has_negative(&self) -> bool {
        self.stability.as_ref().is_some_and(|s| s.g_stable.is(false))
            || self.obstruction.as_ref().is_some_and(|s| s.trivial.is(false))
            || self.extension.as_ref().is_some_and(|s| s.extends.is(false))
            || self.schreier.as_ref().is_some_and(|s| s.split.is(false))
            || self.observability.as_ref().is_some_and(|s| s.observable.is(false))
    }

    /// The report with timing cleared, for byte-level comparisons.
    pub fn without_timing(&self) -> Self {
        Self { timing_ms: 0, ..self.clone() }
    }
}

fn generator_matrices(rep: &Representation) -> Vec<FieldMatrix> {
    rep.generator_matrices()
}

fn from_generators(group: &Arc<FiniteGroup>, p: u32, dim: usize, gens: &[FieldMatrix]) -> Result<Representation> {
    Representation::from_generators(group, p as u64, dim, gens)
}

fn soc_in(module: &NormalModule, v: &SubmoduleAction) -> Result<bool> {
    Ok(socle_series(module.rho())?.layers[1].is_subspace_of(&v.space))
}

/// `V = Q` with the action of an extension.
fn full_pair(module: &NormalModule, ext: &Representation) -> Result<(SubmoduleAction, StructureMap)> {
    let full = Subspace::full(module.modulus(), module.dim());
    let v = SubmoduleAction::validate(module, full, ext.clone())?;
    let alpha = StructureMap::from_table(module, ext.matrices().to_vec())?;
    Ok((v, alpha))
}

fn graded_section(g: &GradedModule) -> GradedSection {
    GradedSection {
        route: g.route,
        layer_dims: g.layer_dims.clone(),
        basis: g.basis.clone(),
        generators: generator_matrices(&g.rep),
    }
}

/// Strong → tensor (regular `Y` forced at the first layer) → numerical → strong.
fn tensor_chain(
    module: &NormalModule,
    v: &SubmoduleAction,
    alpha: &StructureMap,
) -> Result<std::result::Result<(Vec<LayerReport>, TensorSection), String>> {
    if !soc_in(module, v)? {
        return Ok(Err("soc Q ⊄ V".into()));
    }
    let regular = Representation::regular(module.qmap().quotient(), module.modulus());
    let layered = match layered_tensor_structure(module, v, alpha, Some(&regular))? {
        Search::Found(t) => t,
        Search::Absent => return Ok(Err("a layer cocycle survived the regular module".into())),
        Search::Unresolved(why) => return Ok(Err(why)),
    };
    let (_, summand) = match tensor_to_numerical(module, v, &layered.witness) {
        Ok(x) => x,
        Err(Error::SizeLimit { what, needed, cap }) => {
            return Ok(Err(format!("{what} would need {needed}, cap is {cap}")));
        }
        Err(e) => return Err(e),
    };
    let closing = summand.structure_map(module, v)?;
    Ok(Ok((
        layered.layers,
        TensorSection {
            y: generator_matrices(&layered.witness.y),
            module: generator_matrices(&layered.witness.module),
            closing_structure_map: closing.coset_values(module),
        },
    )))
}

fn obstruction_section(
    module: &NormalModule,
    v: &SubmoduleAction,
    alpha: &StructureMap,
    obs: &ObstructionReport,
) -> Result<ObstructionSection> {
    let (layers, tensor, tensor_status) = match tensor_chain(module, v, alpha)? {
        Ok((layers, t)) => (layers, Some(t), None),
        Err(why) => (Vec::new(), None, Some(why)),
    };
    Ok(ObstructionSection {
        route: obs.route,
        trivial: Verdict::of(&obs.trivial),
        reason: match &obs.trivial {
            Triviality::Unresolved(why) => Some(why.clone()),
            _ => None,
        },
        cocycle_dim: obs.ideal.len(),
        ideal: obs.ideal.clone(),
        cocycle: obs
            .cocycle
            .as_ref()
            .map(|j| CocycleSection { action: j.coeff.action.clone(), values: j.values.clone() }),
        beta: obs.beta.clone(),
        extended_rep: obs.extended.as_ref().map(generator_matrices),
        layers,
        tensor,
        tensor_status,
    })
}

/// Runs the requested analyses in dependency order. Deterministic given the seed.
pub fn run(spec: &ProblemSpec) -> Result<AnalysisReport> {
    let start = Instant::now();
    let prob = spec.build()?;
    let mut report = AnalysisReport {
        schema: REPORT_SCHEMA.into(),
        problem: spec.clone(),
        stability: None,
        obstruction: None,
        extension: None,
        gr: None,
        schreier: None,
        observability: None,
        skipped: BTreeMap::new(),
        timing_ms: 0,
    };
    let dependent = [Analysis::Obstruction, Analysis::Extension, Analysis::Gr, Analysis::SchreierVerify];
    let needs_alpha = spec.wants(Analysis::Stability) || dependent.iter().any(|&a| spec.wants(a));
    let mut alpha = None;
    if needs_alpha {
        let (module, v) = prob.pair()?;
        alpha = run_stability(spec, &prob, module, v, &mut report)?;
    }
    let skip = |report: &mut AnalysisReport, why: &str| {
        for a in dependent {
            if spec.wants(a) {
                report.skipped.insert(analysis_name(a).into(), why.into());
            }
        }
    };
    match &alpha {
        Some(alpha) => run_dependent(spec, &prob, alpha, &mut report)?,
        None if needs_alpha => skip(&mut report, "no certified structure map"),
        None => {}
    }
    if spec.wants(Analysis::Observability) {
        let section = match test_split_observability(&prob.sub, &prob.rho)? {
            Search::Found(w) => ObservabilitySection { observable: Verdict::Decided(true), section: Some(w.section) },
            Search::Absent => ObservabilitySection { observable: Verdict::Decided(false), section: None },
            Search::Unresolved(_) => ObservabilitySection { observable: Verdict::Open("unresolved".into()), section: None },
        };
        report.observability = Some(section);
    }
    report.timing_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn analysis_name(a: Analysis) -> &'static str {
    match a {
        Analysis::Stability => "stability",
        Analysis::Obstruction => "obstruction",
        Analysis::Extension => "extension",
        Analysis::Gr => "gr",
        Analysis::SchreierVerify => "schreier-verify",
        Analysis::Observability => "observability",
    }
}

fn run_stability(
    spec: &ProblemSpec,
    prob: &Problem,
    module: &NormalModule,
    v: &SubmoduleAction,
    report: &mut AnalysisReport,
) -> Result<Option<StructureMap>> {
    let mut section = StabilitySection {
        g_stable: Verdict::Decided(true),
        failure_witness: None,
        pair_only: None,
        reason: None,
        structure_map: None,
        factor_set_trivial: None,
        numerical: None,
    };
    let alpha = match test_g_stability(module, v, spec.search())? {
        CosetSearch::Stable(xs) => {
            let alpha = StructureMap::from_coset_intertwiners(module, &xs)?;
            alpha.certify_pair(v)?;
            section.structure_map = Some(xs);
            section.factor_set_trivial = Some(FactorSet::compute(module, &alpha)?.is_trivial());
            if spec.wants(Analysis::Stability) {
                let w = numerical_from_structure(module, &alpha)?;
                section.numerical = Some(NumericalSection { copies: w.copies, iso: w.iso });
            }
            Some(alpha)
        }
        CosetSearch::Unstable { element, pair_only } => {
            section.g_stable = Verdict::Decided(false);
            section.failure_witness = Some(prob.group.element(element).images().to_vec());
            section.pair_only = Some(pair_only);
            None
        }
        CosetSearch::Inconclusive { element, reason } => {
            section.g_stable = Verdict::Open("inconclusive".into());
            section.failure_witness = Some(prob.group.element(element).images().to_vec());
            section.reason = Some(reason);
            None
        }
    };
    report.stability = Some(section);
    Ok(alpha)
}

fn run_dependent(spec: &ProblemSpec, prob: &Problem, alpha: &StructureMap, report: &mut AnalysisReport) -> Result<()> {
    let (module, v) = prob.pair()?;
    let needs_obs = spec.wants(Analysis::Obstruction) || spec.wants(Analysis::Extension) || spec.wants(Analysis::Gr);
    let obs = if needs_obs { Some(analyze_obstruction(module, v, alpha, spec.caps.coeff)?) } else { None };
    if let (true, Some(obs)) = (spec.wants(Analysis::Obstruction), &obs) {
        report.obstruction = Some(obstruction_section(module, v, alpha, obs)?);
    }
    if let (true, Some(obs)) = (spec.wants(Analysis::Extension), &obs) {
        report.extension = Some(ExtensionSection {
            extends: Verdict::of(&obs.trivial),
            extended_rep: obs.extended.as_ref().map(generator_matrices),
        });
    }
    if spec.wants(Analysis::Gr) {
        report.gr = Some(run_gr(module, v, alpha, obs.as_ref())?);
    }
    if spec.wants(Analysis::SchreierVerify) {
        match run_schreier(module, v, alpha, spec.caps.coeff, spec.caps.group)? {
            Ok(s) => report.schreier = Some(s),
            Err(why) => {
                report.skipped.insert("schreier-verify".into(), why);
            }
        }
    }
    Ok(())
}

fn run_gr(
    module: &NormalModule,
    v: &SubmoduleAction,
    alpha: &StructureMap,
    obs: Option<&ObstructionReport>,
) -> Result<GrSection> {
    let mut section = GrSection { source: None, socle: None, radical: None, skipped: None };
    let owned;
    let (pair_v, pair_alpha, source) = if soc_in(module, v)? {
        (v, alpha, GradedSource::V)
    } else if let Some(ext) = obs.and_then(|o| o.extended.as_ref()) {
        owned = full_pair(module, ext)?;
        (&owned.0, &owned.1, GradedSource::Extension)
    } else {
        section.skipped = Some("soc Q ⊄ V and no extension to G exists".into());
        return Ok(section);
    };
    section.source = Some(source);
    section.socle = Some(graded_section(&gr_module(module, pair_v, pair_alpha)?));
    match gr_radical_module(module, pair_v, pair_alpha) {
        Ok(g) => section.radical = Some(graded_section(&g)),
        Err(Error::Precondition(why)) => section.skipped = Some(format!("radical series: {why}")),
        Err(e) => return Err(e),
    }
    Ok(section)
}

fn run_schreier(
    module: &NormalModule,
    v: &SubmoduleAction,
    alpha: &StructureMap,
    coeff_cap: usize,
    group_cap: usize,
) -> Result<std::result::Result<SchreierSection, String>> {
    let ideal = ideal_of(module, v)?;
    let u = match CoefficientGroup::one_plus_j(module.modulus(), module.dim(), &ideal.basis(), coeff_cap) {
        Ok(u) => Arc::new(u),
        Err(Error::SizeLimit { needed, cap, .. }) => return Ok(Err(format!("|U| needs {needed}, cap is {cap}"))),
        Err(e) => return Err(e),
    };
    let gamma = FactorSet::compute(module, alpha)?;
    let ext = match extension_from_rep(module, alpha, &gamma, u.clone(), group_cap) {
        Ok(e) => e,
        Err(Error::SizeLimit { what, needed, cap }) => return Ok(Err(format!("{what} needs {needed}, cap is {cap}"))),
        Err(e) => return Err(e),
    };
    ext.certify_pullback(alpha)?;
    let sys = quotient_system(module, alpha, &gamma, u)?;
    let (split, beta) = match crate::schreier::is_split(&sys)? {
        Search::Found(b) => (Verdict::Decided(true), Some(b)),
        Search::Absent => (Verdict::Decided(false), None),
        Search::Unresolved(_) => (Verdict::Open("unresolved".into()), None),
    };
    Ok(Ok(SchreierSection { u_order: ext.system.coeff().order(), extension_order: ext.ext.order(), split, beta }))
}

/// One re-certified (or failed) certificate of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub checks: Vec<Check>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok)
    }

    fn record(&mut self, name: &str, r: Result<()>) {
        self.checks.push(Check { name: name.into(), ok: r.is_ok(), detail: r.err().map(|e| e.to_string()) });
    }
}

fn missing(what: &str) -> Error {
    Error::Certification(format!("{what} is missing"))
}

/// Re-certifies every witness embedded in a report, without repeating any search.
pub fn verify(report: &AnalysisReport) -> Result<VerifyOutcome> {
    if report.schema != REPORT_SCHEMA {
        return Err(Error::Schema { expected: REPORT_SCHEMA.into(), found: report.schema.clone() });
    }
    let mut out = VerifyOutcome { checks: Vec::new() };
    let prob = match report.problem.build() {
        Ok(p) => p,
        Err(e) => {
            out.record("problem", Err(e));
            return Ok(out);
        }
    };
    let mut alpha = None;
    if let Some(s) = &report.stability {
        let (module, v) = prob.pair()?;
        if let Some(xs) = &s.structure_map {
            let r = (|| {
                let a = StructureMap::from_coset_intertwiners(module, xs)?;
                a.certify_pair(v)?;
                let trivial = FactorSet::compute(module, &a)?.is_trivial();
                certify(s.factor_set_trivial == Some(trivial), || "factor_set_trivial does not match".into())?;
                Ok(a)
            })();
            match r {
                Ok(a) => {
                    out.record("stability.structure_map", Ok(()));
                    alpha = Some(a);
                }
                Err(e) => out.record("stability.structure_map", Err(e)),
            }
            certify_flag(&mut out, "stability.g_stable", s.g_stable.is(true));
        }
        if let Some(n) = &s.numerical {
            out.record("stability.numerical", (|| {
                let ind = module.rho().induce(module.normal())?;
                NumericalWitness { copies: n.copies, module: ind.module, iso: n.iso.clone() }.certify(module)
            })());
        }
        if let Some(w) = &s.failure_witness {
            out.record("stability.failure_witness", (|| {
                let perm = crate::group::Perm::new(w.clone())?;
                let g = prob.group.index_of(&perm).ok_or_else(|| Error::Certification("witness is not in G".into()))?;
                certify(!module.normal().contains(g), || "witness lies in N".into())
            })());
        }
    }
    if let Some(o) = &report.obstruction {
        out.record("obstruction", verify_obstruction(&prob, alpha.as_ref(), o));
    }
    if let Some(e) = &report.extension {
        out.record("extension", (|| {
            let (module, v) = prob.pair()?;
            let alpha = alpha.as_ref().ok_or_else(|| missing("structure map"))?;
            match (&e.extends, &e.extended_rep) {
                (Verdict::Decided(true), Some(gens)) => verify_extension(module, v, alpha, gens, None),
                (Verdict::Decided(true), None) => Err(missing("extended_rep")),
                (_, Some(_)) => Err(Error::Certification("extended_rep without a positive verdict".into())),
                _ => Ok(()),
            }
        })());
    }
    if let Some(g) = &report.gr {
        out.record("gr", verify_gr(&prob, alpha.as_ref(), report, g));
    }
    if let Some(s) = &report.schreier {
        out.record("schreier", (|| {
            let (module, v) = prob.pair()?;
            let alpha = alpha.as_ref().ok_or_else(|| missing("structure map"))?;
            let ideal = ideal_of(module, v)?;
            let u = Arc::new(CoefficientGroup::one_plus_j(
                module.modulus(),
                module.dim(),
                &ideal.basis(),
                report.problem.caps.coeff,
            )?);
            let gamma = FactorSet::compute(module, alpha)?;
            let ext = extension_from_rep(module, alpha, &gamma, u.clone(), report.problem.caps.group)?;
            ext.certify_pullback(alpha)?;
            certify(ext.system.coeff().order() == s.u_order && ext.ext.order() == s.extension_order, || {
                "extension orders do not match".into()
            })?;
            let sys = quotient_system(module, alpha, &gamma, u)?;
            match (&s.split, &s.beta) {
                (Verdict::Decided(true), Some(b)) => certify_splitting(&sys, b),
                (Verdict::Decided(true), None) => Err(missing("splitting map")),
                _ => Ok(()),
            }
        })());
    }
    if let Some(o) = &report.observability {
        out.record("observability", (|| match (&o.observable, &o.section) {
            (Verdict::Decided(true), Some(section)) => {
                let ind = prob.rho.induce(&prob.sub)?;
                ObservabilityWitness::from_section(&prob.sub, &prob.rho, ind.module, ind.reps, section.clone()).map(|_| ())
            }
            (Verdict::Decided(true), None) => Err(missing("section")),
            _ => Ok(()),
        })());
    }
    Ok(out)
}

fn certify_flag(out: &mut VerifyOutcome, name: &str, ok: bool) {
    out.record(name, certify(ok, || "verdict contradicts the embedded witness".into()));
}

/// Generator matrices rebuild a representation equal to `β(ḡ)α(g)` (when `β` is
/// given), satisfying the homomorphism law and restricting to `ρ` and to `V`.
fn verify_extension(
    module: &NormalModule,
    v: &SubmoduleAction,
    alpha: &StructureMap,
    gens: &[FieldMatrix],
    beta: Option<&[FieldMatrix]>,
) -> Result<()> {
    let rep = from_generators(module.group(), module.modulus(), module.dim(), gens)?;
    rep.certify_exhaustive()?;
    certify_extension(module, v, &rep)?;
    if let Some(beta) = beta {
        let qmap = module.qmap();
        certify(beta.len() == qmap.quotient().order(), || "β has the wrong length".into())?;
        for g in 0..module.group().order() {
            certify(rep.matrix(g) == &(&beta[qmap.project(g)] * alpha.at(g)), || {
                format!("extension is not β(ḡ)α(g) at {g}")
            })?;
        }
    }
    Ok(())
}

fn verify_obstruction(prob: &Problem, alpha: Option<&StructureMap>, o: &ObstructionSection) -> Result<()> {
    let (module, v) = prob.pair()?;
    let alpha = alpha.ok_or_else(|| missing("structure map"))?;
    let p = module.modulus();
    let ideal = ideal_of(module, v)?;
    certify(ideal.basis() == o.ideal && o.cocycle_dim == o.ideal.len(), || "ideal basis does not match".into())?;
    let quotient = module.qmap().quotient();
    let cocycle = match &o.cocycle {
        Some(c) => {
            let gamma = FactorSet::compute(module, alpha)?;
            let expected = additive_cocycle(module, alpha, &gamma, &ideal)?;
            let given = AdditiveCocycle {
                coeff: CoefficientModule { dim: o.ideal.len(), action: c.action.clone() },
                values: c.values.clone(),
            };
            given.certify(quotient, p)?;
            certify(given == expected, || "cocycle does not match the factor set".into())?;
            Some(given)
        }
        None => None,
    };
    certify(o.route == ObstructionRoute::Multiplicative || cocycle.is_some(), || "additive route without a cocycle".into())?;
    match &o.trivial {
        Verdict::Decided(true) => {
            let beta = o.beta.as_ref().ok_or_else(|| missing("beta"))?;
            let gens = o.extended_rep.as_ref().ok_or_else(|| missing("extended_rep"))?;
            verify_extension(module, v, alpha, gens, Some(beta))?;
            if let Some(j) = &cocycle {
                let space = MatrixSpace::span(p, module.dim(), module.dim(), &o.ideal);
                let id = FieldMatrix::identity(p, module.dim());
                let b = beta
                    .iter()
                    .map(|x| space.coords(&x.try_sub(&id)?).ok_or_else(|| Error::Certification("β leaves 1 + J".into())))
                    .collect::<Result<Vec<_>>>()?;
                certify(coboundary(&j.coeff, &b, quotient, p) == j.values, || "δβ ≠ j".into())?;
            }
        }
        Verdict::Decided(false) => {
            certify(o.beta.is_none() && o.extended_rep.is_none(), || "negative verdict carries an extension".into())?;
            if let Some(j) = &cocycle {
                certify(solve_coboundary(j, quotient, p)?.is_none(), || "the coboundary equation is solvable".into())?;
            }
        }
        Verdict::Open(_) => {}
    }
    if let Some(t) = &o.tensor {
        let y = from_generators(quotient, p, t.y.first().map_or(0, FieldMatrix::rows), &t.y)?;
        let dim = t.module.first().map_or(0, FieldMatrix::rows);
        let m = from_generators(module.group(), p, dim, &t.module)?;
        let w = TensorWitness { y, module: m };
        w.certify(module, v)?;
        let (_, summand) = tensor_to_numerical(module, v, &w)?;
        let closing = summand.structure_map(module, v)?;
        certify(closing.coset_values(module) == t.closing_structure_map, || {
            "closing structure map does not match the tensor witness".into()
        })?;
    }
    Ok(())
}

fn verify_gr(prob: &Problem, alpha: Option<&StructureMap>, report: &AnalysisReport, g: &GrSection) -> Result<()> {
    let (module, v) = prob.pair()?;
    let Some(source) = g.source else {
        return Ok(());
    };
    let alpha = alpha.ok_or_else(|| missing("structure map"))?;
    let owned;
    let (_, pair_alpha) = match source {
        GradedSource::V => (v, alpha),
        GradedSource::Extension => {
            let gens = report
                .extension
                .as_ref()
                .and_then(|e| e.extended_rep.as_ref())
                .or_else(|| report.obstruction.as_ref().and_then(|o| o.extended_rep.as_ref()))
                .ok_or_else(|| missing("extension used for gr"))?;
            let ext = from_generators(module.group(), module.modulus(), module.dim(), gens)?;
            owned = full_pair(module, &ext)?;
            (&owned.0, &owned.1)
        }
    };
    for s in g.socle.iter().chain(&g.radical) {
        let rep = from_generators(module.group(), module.modulus(), module.dim(), &s.generators)?;
        let gm = GradedModule { route: s.route, basis: s.basis.clone(), layer_dims: s.layer_dims.clone(), rep };
        gm.certify(module, pair_alpha)?;
    }
    Ok(())
}

pub const SYSTEM_SCHEMA: &str = "gstable.schreier/1";
pub const SYSTEM_REPORT_SCHEMA: &str = "gstable.schreier-report/1";

/// The coefficient group of a standalone Schreier system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoeffSpec {
    /// A permutation group; elements are indexed in the BFS order of its closure.
    Enumerated { group: GroupDescriptor },
    /// Units `1 + J` for the ideal spanned by `basis`; elements are indexed by the
    /// coordinates of `u - 1`, `Σ c_i p^i`.
    OnePlusJ { p: u64, dim: usize, basis: Vec<Vec<Vec<i64>>> },
}

/// A Schreier system as tables: `kappa[g * |U| + u]` and `gamma[g * |G| + h]`, with
/// elements of the base group in the BFS order of its closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub schema: String,
    pub base: GroupDescriptor,
    pub coeff: CoeffSpec,
    pub kappa: Vec<u32>,
    pub gamma: Vec<u32>,
    #[serde(default)]
    pub caps: Caps,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemReport {
    pub schema: String,
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<usize>>,
}

impl SystemSpec {
    pub fn build(&self) -> Result<SchreierSystem> {
        if self.schema != SYSTEM_SCHEMA {
            return Err(Error::Schema { expected: SYSTEM_SCHEMA.into(), found: self.schema.clone() });
        }
        let base = Arc::new(FiniteGroup::from_descriptor(&self.base, self.caps.group)?);
        let coeff = match &self.coeff {
            CoeffSpec::Enumerated { group } => {
                CoefficientGroup::enumerated(Arc::new(FiniteGroup::from_descriptor(group, self.caps.coeff)?))
            }
            CoeffSpec::OnePlusJ { p, dim, basis } => {
                let p32 = check_modulus(*p).map_err(|e| Error::Validation { path: "coeff.p".into(), message: e.to_string() })?;
                let basis = basis
                    .iter()
                    .enumerate()
                    .map(|(i, rows)| {
                        if rows.len() != *dim || rows.iter().any(|r| r.len() != *dim) {
                            return Err(Error::Validation {
                                path: format!("coeff.basis[{i}]"),
                                message: format!("expected a {dim}x{dim} matrix"),
                            });
                        }
                        FieldMatrix::from_rows(*p, rows)
                    })
                    .collect::<Result<Vec<_>>>()?;
                CoefficientGroup::one_plus_j(p32, *dim, &basis, self.caps.coeff)?
            }
        };
        SchreierSystem::new(base, Arc::new(coeff), self.kappa.clone(), self.gamma.clone())
    }
}

/// Checks the identities, builds the extension group and decides splitting.
pub fn analyze_system(spec: &SystemSpec) -> Result<SystemReport> {
    let sys = spec.build()?;
    let mut out = SystemReport {
        schema: SYSTEM_REPORT_SCHEMA.into(),
        valid: true,
        violation: None,
        extension_order: None,
        split: None,
        beta: None,
    };
    if let Err(v) = sys.check() {
        out.valid = false;
        out.violation = Some(v.to_string());
        return Ok(out);
    }
    let ext = sys.build_extension(spec.caps.group)?;
    ext.certify(&sys)?;
    out.extension_order = Some(ext.order());
    match crate::schreier::is_split(&sys)? {
        Search::Found(b) => {
            certify_splitting(&sys, &b)?;
            out.split = Some(Verdict::Decided(true));
            out.beta = Some(b);
        }
        Search::Absent => out.split = Some(Verdict::Decided(false)),
        Search::Unresolved(_) => out.split = Some(Verdict::Open("unresolved".into())),
    }
    Ok(out)
}
