//! Grid verification runner and report export.

use std::collections::BTreeSet;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{
    density_verdict, enumerate_d2, lie_closure_dim, quarter_seeds_d4, real_irreducibility, GroupOrder, VerdictCase,
};
use crate::error::{KzError, Result};
use crate::generators::{
    build_form, diagonalize_form, eigenstructure_lp, hodge_matches_form,
    predicted_signature, special_element_d2, vector_fields_d2, GeneratorSet, SpecialClass,
};
use crate::group::{character_table, decompose_homology};
use crate::lyapunov::{classify_spectrum, simulate_spectrum, SimConfig, SpectrumReport, SpectrumVerdict};
use crate::number::{AlphaParam, ExactMatrix};
use crate::rauzy::{build_diagram, conjugation_rules_hold, RauzyDiagram};
use crate::surface::{alphabet, hodge_gram, singularity_profile, SurfaceParams};

pub const SCHEMA_VERSION: u32 = 1;
pub const MAX_K: u32 = 8;
pub const MAX_ELL: u32 = 13;
pub const MAX_D: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    pub steps: u64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    /// (k, ℓ) points for the surface and group checks.
    pub surfaces: Vec<(u32, u32)>,
    /// (d, α) points for the diagram, generator and density checks.
    pub cocycles: Vec<(usize, AlphaParam)>,
    pub density: bool,
    /// Enumeration bound for finite groups.
    pub bound: usize,
    pub spectrum: Option<SpectrumOptions>,
}

impl Default for Grid {
    /// k ≤ 8, 3 ≤ ℓ ≤ 12; 2 ≤ d ≤ 8 with α = r/2k, k ≤ 6.
    fn default() -> Self {
        let surfaces = (1..=8).flat_map(|k| (3..=12).map(move |l| (k, l))).collect();
        let alphas = crate::number::alpha_grid(6);
        let cocycles = (2..=8).flat_map(|d| alphas.iter().map(move |&a| (d, a))).collect();
        Grid {
            surfaces,
            cocycles,
            density: true,
            bound: crate::density::DEFAULT_BOUND,
            spectrum: None,
        }
    }
}

impl Grid {
    pub fn single_cocycle(d: usize, alpha: AlphaParam) -> Self {
        Grid {
            surfaces: Vec::new(),
            cocycles: vec![(d, alpha)],
            ..Grid::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.surfaces.is_empty() && self.cocycles.is_empty() {
            return Err(KzError::InvalidGrid("grid has no points".into()));
        }
        for &(k, l) in &self.surfaces {
            if k == 0 || k > MAX_K || !(3..=MAX_ELL).contains(&l) {
                return Err(KzError::InvalidGrid(format!(
                    "(k, ℓ) = ({k}, {l}) outside 1 ≤ k ≤ {MAX_K}, 3 ≤ ℓ ≤ {MAX_ELL}"
                )));
            }
        }
        for &(d, a) in &self.cocycles {
            if !(2..=MAX_D).contains(&d) {
                return Err(KzError::InvalidGrid(format!("d = {d} outside 2 ≤ d ≤ {MAX_D}")));
            }
            if !(a.value() > 0.0 && a.value() < 0.5) {
                return Err(KzError::InvalidGrid(format!("α = {a} outside (0, 1/2)")));
            }
        }
        if self.bound == 0 {
            return Err(KzError::InvalidGrid("enumeration bound must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A known disagreement with the source conventions, reported rather than judged.
    Flagged,
}

impl CheckStatus {
    fn from_bool(ok: bool) -> Self {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Flagged => "flagged",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub params: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl CheckRecord {
    fn new(check_id: &str, params: &str, ok: bool, detail: impl Into<String>) -> Self {
        CheckRecord {
            check_id: check_id.to_string(),
            params: params.to_string(),
            status: CheckStatus::from_bool(ok),
            detail: detail.into(),
        }
    }

    /// `[params] check_id detail: status`.
    pub fn line(&self) -> String {
        if self.detail.is_empty() {
            format!("[{}] {}: {}", self.params, self.check_id, self.status.as_str())
        } else {
            format!("[{}] {} {}: {}", self.params, self.check_id, self.detail, self.status.as_str())
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub flagged: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub grid: Grid,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }
}

fn surface_checks(k: u32, ell: u32) -> Result<Vec<CheckRecord>> {
    let tag = format!("k={k},ell={ell}");
    let params = SurfaceParams::new(k, ell)?;
    let prof = singularity_profile(params);
    let mut out = vec![
        CheckRecord::new(
            "surface.gauss_bonnet",
            &tag,
            prof.gauss_bonnet_holds(),
            format!("sum={} 2g-2={}", prof.order_sum(), 2 * prof.genus as i64 - 2),
        ),
        CheckRecord::new("surface.dimension_count", &tag, prof.relative_dimension_holds(), ""),
    ];
    out.push(CheckRecord {
        check_id: "surface.stratum_label".into(),
        params: tag.clone(),
        status: if prof.label_discrepancy {
            CheckStatus::Flagged
        } else {
            CheckStatus::Pass
        },
        detail: format!("cone order {} label order {}", prof.a_points.order, prof.label_a_order),
    });

    let table = character_table(k, ell);
    out.push(CheckRecord::new("group.orthogonality", &tag, table.orthogonality_holds(), ""));
    let sq = table.sum_of_squared_degrees();
    out.push(CheckRecord::new(
        "group.degree_squares",
        &tag,
        sq == 4 * (k * ell) as usize,
        format!("sum={sq}"),
    ));
    let dec = decompose_homology(k, ell);
    out.push(CheckRecord::new("group.character_identities", &tag, dec.checks.all(), ""));
    out.push(CheckRecord::new(
        "group.absolute_dimension",
        &tag,
        dec.chi_ab_identity == 2 * prof.genus as i64 && dec.total_dim == 2 * prof.genus as usize,
        format!("chi_ab(id)={} 2g={}", dec.chi_ab_identity, 2 * prof.genus),
    ));

    for r in 1..k {
        let rtag = format!("{tag},r={r}");
        let h = hodge_gram(params, r)?;
        let th = std::f64::consts::PI * r as f64 / k as f64;
        let diag = -(k as f64) * (1.0 + th.cos()) / th.sin();
        let d = params.d();
        let mut err: f64 = 0.0;
        for a in 0..d {
            err = err.max((h.raw.get(a, a).approx_complex() - Complex64::new(diag, 0.0)).norm());
            for b in 0..a {
                err = err.max((h.raw.get(a, b).approx_complex().im - k as f64 / 2.0).abs());
            }
        }
        out.push(CheckRecord::new("surface.hodge_values", &rtag, err < 1e-12, format!("err={err:.1e}")));
        out.push(CheckRecord::new("surface.hodge_matches_form", &rtag, hodge_matches_form(k, ell, r)?, ""));
    }
    Ok(out)
}

fn diagram_checks(d: usize) -> Result<Vec<CheckRecord>> {
    let tag = format!("d={d}");
    let g = build_diagram(d)?;
    let mut out = vec![CheckRecord::new(
        "rauzy.vertex_count",
        &tag,
        g.len() == (1usize << (d - 1)) - 1,
        format!("vertices={}", g.len()),
    )];
    if d <= 8 {
        out.push(CheckRecord::new("rauzy.standard_moves", &tag, g.matches_standard_moves(), ""));
    }
    out.push(CheckRecord::new(
        "rauzy.winner_inequality",
        &tag,
        (0..g.len()).all(|v| {
            let (a, b) = g.winners(v);
            a > b
        }),
        "",
    ));
    let loops = g.elementary_loops();
    out.push(CheckRecord::new(
        "rauzy.loop_lengths",
        &tag,
        loops.iter().all(|l| l.length + l.base.len() == d - 1 && g.base_is_distinguished(l)),
        format!("loops={}", loops.len()),
    ));
    out.push(CheckRecord::new(
        "rauzy.paths",
        &tag,
        (0..g.len()).all(|v| {
            let p: String = g.path_from_central(v).iter().map(|k| k.letter()).collect();
            p == g.words[v]
        }),
        "",
    ));
    if d < MAX_D {
        let big = build_diagram(d + 1)?;
        out.push(CheckRecord::new("rauzy.conjugation_rules", &tag, conjugation_rules_hold(&g, &big), ""));
    }
    Ok(out)
}

fn invariant_under(form: &ExactMatrix, m: &ExactMatrix) -> bool {
    &(&m.adjoint() * form) * m == *form
}

fn cocycle_checks(d: usize, alpha: AlphaParam, grid: &Grid) -> Result<Vec<CheckRecord>> {
    let tag = format!("d={d},alpha={alpha}");
    let gens = GeneratorSet::new(d, alpha)?;
    let form = build_form(d, alpha);
    let mut out = vec![CheckRecord::new(
        "generators.form_invariance",
        &tag,
        gens.all().iter().all(|(_, _, m)| form.preserved_by(m)),
        "",
    )];
    let mut poly_ok = true;
    for p in alphabet(d) {
        let e = eigenstructure_lp(d, alpha, p)?;
        let det = gens.top[crate::surface::letter_index(d, p)?].det();
        poly_ok &= e.char_poly == e.expected_char_poly() && det == -alpha.zeta();
    }
    out.push(CheckRecord::new("generators.char_poly", &tag, poly_ok, ""));

    let diag = diagonalize_form(d, alpha);
    let pred = predicted_signature(d, alpha);
    let num = diag.numeric_signature();
    let cf = diag.max_closed_form_error();
    out.push(CheckRecord::new(
        "generators.signature",
        &tag,
        diag.signature == pred && num == pred && cf < 1e-10,
        format!("(p,q,z)=({},{},{}) closed-form err={cf:.1e}", pred.n_minus, pred.n_plus, pred.n_zero),
    ));
    if pred.n_zero > 0 {
        let fixed = diag.kernel.len() == 1
            && gens.all().iter().all(|(_, _, m)| m.apply(&diag.kernel[0]) == diag.kernel[0]);
        out.push(CheckRecord::new("generators.kernel_fixed", &tag, fixed, ""));
    }

    if d == 2 {
        let s = special_element_d2(alpha);
        let ok = s.trace == s.expected_trace() && s.det.is_one();
        let hyper = 2.0 * (2.0 * std::f64::consts::PI * alpha.value()).cos() < -1.0;
        let class_ok = if alpha.equals(1, 3) {
            s.classification == SpecialClass::Parabolic
        } else {
            (s.classification == SpecialClass::Hyperbolic) == hyper
        };
        out.push(CheckRecord::new(
            "generators.special_element",
            &tag,
            ok && class_ok,
            format!("{:?}", s.classification),
        ));
    }

    if grid.density {
        out.extend(density_checks(d, alpha, grid, &form.entries)?);
    }
    if let Some(opt) = grid.spectrum {
        let report = simulate_spectrum(&SimConfig::new(d, alpha, opt.steps, opt.trials, opt.seed))?;
        let verdict = classify_spectrum(&report, d, alpha);
        out.push(CheckRecord::new(
            "lyapunov.zero_count",
            &tag,
            verdict == SpectrumVerdict::Consistent,
            format!("{verdict:?} zeros={}", report.zero_set.len()).to_lowercase(),
        ));
        out.push(CheckRecord::new(
            "lyapunov.zero_lower_bound",
            &tag,
            report.zero_set.len() >= pred.n_plus.abs_diff(pred.n_minus),
            "",
        ));
    }
    Ok(out)
}

fn density_checks(d: usize, alpha: AlphaParam, grid: &Grid, form: &ExactMatrix) -> Result<Vec<CheckRecord>> {
    let tag = format!("d={d},alpha={alpha}");
    let verdict = density_verdict(d, alpha);
    let mut out = Vec::new();
    if verdict.case == VerdictCase::ExceptionalFinite {
        let e = enumerate_d2(alpha, grid.bound)?;
        let detail = match e.order {
            GroupOrder::Finite(n) => format!("order={n}"),
            GroupOrder::Exceeded(n) => format!("order>{n}"),
        };
        let invariant = e.elements.iter().flatten().all(|m| invariant_under(form, m));
        out.push(CheckRecord::new(
            "density.enumeration",
            &tag,
            matches!(e.order, GroupOrder::Finite(_)) && invariant,
            detail,
        ));
    }
    if d == 2 {
        if verdict.case == VerdictCase::IndefiniteZariskiDenseSu {
            let c = special_element_d2(alpha).classification;
            out.push(CheckRecord::new(
                "density.special_element_class",
                &tag,
                matches!(c, SpecialClass::Hyperbolic | SpecialClass::InfiniteElliptic),
                format!("{c:?}"),
            ));
        }
        let vf = vector_fields_d2(alpha);
        out.push(CheckRecord::new("density.field_determinant", &tag, vf.det == vf.expected_det, ""));
        if !vf.det.is_zero() {
            if let Some(seeds) = vf.fields {
                let dim = lie_closure_dim(&seeds).closure_dim;
                out.push(CheckRecord::new("density.lie_closure", &tag, dim == 3, format!("dim={dim}")));
            }
        }
    }
    if d == 4 && alpha.equals(1, 4) {
        let dim = lie_closure_dim(&quarter_seeds_d4()).closure_dim;
        out.push(CheckRecord::new("density.lie_closure", &tag, dim == 15, format!("dim={dim}")));
    }
    let ell = d as i64 + 1;
    if d <= 6 && !alpha.times_is_integer(ell) {
        let rep = real_irreducibility(d, alpha)?;
        out.push(CheckRecord::new(
            "density.irreducibility",
            &tag,
            rep.irreducible,
            format!("algebra dim={}", rep.algebra_dim),
        ));
    }
    out.push(CheckRecord {
        check_id: "density.verdict".into(),
        params: tag,
        status: CheckStatus::Pass,
        detail: verdict.case.label().into(),
    });
    Ok(out)
}

/// Runs every check over the grid. Grid points are processed in parallel and
/// reassembled in grid order, so the output does not depend on scheduling.
pub fn run_verification_suite(grid: &Grid) -> Result<VerificationReport> {
    grid.validate()?;
    let surface: Vec<Vec<CheckRecord>> = grid
        .surfaces
        .par_iter()
        .map(|&(k, l)| surface_checks(k, l))
        .collect::<Result<_>>()?;
    let ds: BTreeSet<usize> = grid.cocycles.iter().map(|&(d, _)| d).collect();
    let diagrams: Vec<Vec<CheckRecord>> = ds.par_iter().map(|&d| diagram_checks(d)).collect::<Result<_>>()?;
    let cocycles: Vec<Vec<CheckRecord>> = grid
        .cocycles
        .par_iter()
        .map(|&(d, a)| cocycle_checks(d, a, grid))
        .collect::<Result<_>>()?;
    let checks: Vec<CheckRecord> = surface.into_iter().chain(diagrams).chain(cocycles).flatten().collect();
    let mut summary = Summary::default();
    for c in &checks {
        match c.status {
            CheckStatus::Pass => summary.pass += 1,
            CheckStatus::Fail => summary.fail += 1,
            CheckStatus::Flagged => summary.flagged += 1,
        }
    }
    Ok(VerificationReport {
        schema: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: None,
        grid: grid.clone(),
        checks,
        summary,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Csv,
    Dot,
}

impl FromStr for ExportFormat {
    type Err = KzError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ExportFormat::Json),
            "csv" => Ok(ExportFormat::Csv),
            "dot" => Ok(ExportFormat::Dot),
            _ => Err(KzError::UnsupportedFormat {
                format: s.to_string(),
                what: "export".into(),
            }),
        }
    }
}

/// A spectrum together with its classification, as written to JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub schema: u32,
    pub expected_zero_count: usize,
    pub verdict: SpectrumVerdict,
    pub report: SpectrumReport,
}

impl SpectrumSummary {
    pub fn new(report: SpectrumReport) -> Self {
        let (d, a) = (report.config.d, report.config.alpha);
        SpectrumSummary {
            schema: SCHEMA_VERSION,
            expected_zero_count: crate::lyapunov::expected_zero_count(d, a),
            verdict: classify_spectrum(&report, d, a),
            report,
        }
    }
}

pub enum Artifact<'a> {
    Verification(&'a VerificationReport),
    Spectrum(&'a SpectrumReport),
    Diagram(&'a RauzyDiagram),
}

impl Artifact<'_> {
    fn name(&self) -> &'static str {
        match self {
            Artifact::Verification(_) => "verification report",
            Artifact::Spectrum(_) => "spectrum report",
            Artifact::Diagram(_) => "Rauzy diagram",
        }
    }
}

fn csv_string<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| KzError::Io(std::io::Error::other(e)))?;
    }
    let bytes = w.into_inner().map_err(|e| KzError::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Renders an artifact in the given format.
pub fn render(artifact: &Artifact, format: ExportFormat) -> Result<String> {
    let unsupported = || KzError::UnsupportedFormat {
        format: format!("{format:?}").to_lowercase(),
        what: artifact.name().into(),
    };
    let mut s = match (artifact, format) {
        (Artifact::Verification(r), ExportFormat::Json) => serde_json::to_string_pretty(r)?,
        (Artifact::Verification(r), ExportFormat::Csv) => csv_string(&r.checks)?,
        (Artifact::Spectrum(r), ExportFormat::Json) => {
            serde_json::to_string_pretty(&SpectrumSummary::new((*r).clone()))?
        }
        (Artifact::Spectrum(r), ExportFormat::Csv) => r.to_csv(),
        (Artifact::Diagram(g), ExportFormat::Dot) => g.to_dot(),
        (Artifact::Diagram(g), ExportFormat::Json) => serde_json::to_string_pretty(g)?,
        _ => return Err(unsupported()),
    };
    if !s.ends_with('\n') {
        s.push('\n');
    }
    Ok(s)
}

pub fn export_report(artifact: &Artifact, format: ExportFormat, path: &Path) -> Result<()> {
    let s = render(artifact, format)?;
    std::fs::write(path, s)?;
    Ok(())
}

pub fn read_verification_report(path: &Path) -> Result<VerificationReport> {
    let s = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&s)?)
}
