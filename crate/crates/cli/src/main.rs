use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use kzcocycle_core::density::{
    density_verdict, enumerate_d2, lie_closure_dim, parse_exact_alpha, quarter_seeds_d4, real_irreducibility,
    DEFAULT_BOUND,
};
use kzcocycle_core::generators::{build_form, diagonalize_form, special_element_d2, vector_fields_d2};
use kzcocycle_core::group::{character_table, decompose_homology, CharacterLabel};
use kzcocycle_core::lyapunov::{classify_spectrum, expected_zero_count, simulate_spectrum};
use kzcocycle_core::rauzy::build_diagram;
use kzcocycle_core::report::{export_report, render, run_verification_suite, Artifact, SpectrumOptions};
use kzcocycle_core::surface::{hodge_gram, singularity_profile};
use kzcocycle_core::{
    AlphaParam, ExactMatrix, ExportFormat, GeneratorSet, GroupOrder, Grid, KzError, SimConfig, SpectrumVerdict,
    SurfaceParams, VerdictCase,
};

#[derive(Parser)]
#[command(name = "kzlab", version, about = "Cyclic-cover surfaces, Rauzy diagrams and their Hermitian monodromy")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct Surface {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    ell: u32,
}

#[derive(Args, Clone)]
struct Cocycle {
    #[arg(long)]
    d: usize,
    /// Exact fraction a/b.
    #[arg(long, value_parser = alpha_arg)]
    alpha: AlphaParam,
}

#[derive(Args, Clone, Default)]
struct Output {
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
    /// Leave the timestamp out of JSON output.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Genus, cone points and Hodge diagonal of M_{k,ℓ}.
    Profile {
        #[command(flatten)]
        s: Surface,
        #[command(flatten)]
        out: Output,
    },
    /// Character table of the symmetry group and the splitting of homology.
    Chars {
        #[command(flatten)]
        s: Surface,
        #[command(flatten)]
        out: Output,
    },
    /// Hyperelliptic Rauzy diagram on d letters.
    Diagram {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        out: Output,
    },
    /// The matrices L_p^t, L_p^b.
    Generators {
        #[command(flatten)]
        c: Cocycle,
        #[command(flatten)]
        out: Output,
    },
    /// The invariant form, its diagonalization and signature.
    Form {
        #[command(flatten)]
        c: Cocycle,
        #[command(flatten)]
        out: Output,
    },
    /// Density verdict with the available certificates.
    Density {
        #[command(flatten)]
        c: Cocycle,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Monte-Carlo Lyapunov spectrum.
    Spectrum {
        #[command(flatten)]
        c: Cocycle,
        #[arg(long, default_value_t = 100_000)]
        steps: u64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        qr_cadence: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Runs the check suite over a grid; the default grid when no point is given.
    Verify {
        #[arg(long, requires = "ell")]
        k: Option<u32>,
        #[arg(long, requires = "k")]
        ell: Option<u32>,
        #[arg(long, requires = "alpha")]
        d: Option<usize>,
        #[arg(long, requires = "d", value_parser = alpha_arg)]
        alpha: Option<AlphaParam>,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
        #[arg(long)]
        no_density: bool,
        /// Adds spectrum checks with this many steps.
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Print every check, not only failures and flags.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        out: Output,
    },
}

fn alpha_arg(s: &str) -> Result<AlphaParam, String> {
    parse_exact_alpha(s).map_err(|e| e.to_string())
}

fn timestamp() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("unix:{secs}")
}

fn envelope(command: &str, out: &Output, result: impl Serialize) -> Result<Value, KzError> {
    let mut v = json!({
        "schema": 1,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "result": serde_json::to_value(result)?,
    });
    if !out.no_timestamp {
        v["timestamp"] = Value::String(timestamp());
    }
    Ok(v)
}

fn write_json(path: &Path, v: &Value) -> Result<(), KzError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

/// Rejects output flags a subcommand does not produce.
fn only(out: &Output, allowed: &[ExportFormat], what: &str) -> Result<(), KzError> {
    for (set, fmt, name) in [
        (out.json.is_some(), ExportFormat::Json, "json"),
        (out.csv.is_some(), ExportFormat::Csv, "csv"),
        (out.dot.is_some(), ExportFormat::Dot, "dot"),
    ] {
        if set && !allowed.contains(&fmt) {
            return Err(KzError::UnsupportedFormat {
                format: name.into(),
                what: what.into(),
            });
        }
    }
    Ok(())
}

fn matrix_strings(m: &ExactMatrix) -> Vec<Vec<String>> {
    (0..m.nrows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect()
}

fn profile(s: &Surface, out: &Output) -> Result<u8, KzError> {
    only(out, &[ExportFormat::Json], "profile")?;
    let params = SurfaceParams::new(s.k, s.ell)?;
    let prof = singularity_profile(params);
    println!("M_{{{},{}}}: genus {}, ϖ = {}", s.k, s.ell, prof.genus, params.varpi);
    println!(
        "  {} M-points of angle 2π·{} (order {}), {} A-points of angle 2π·{} (order {})",
        prof.m_points.count,
        prof.m_points.angle_over_2pi,
        prof.m_points.order,
        prof.a_points.count,
        prof.a_points.angle_over_2pi,
        prof.a_points.order
    );
    println!("  Σ orders = {} (2g − 2 = {})", prof.order_sum(), 2 * prof.genus as i64 - 2);
    if prof.label_discrepancy {
        println!("  flagged: stratum label order {} differs from cone order {}", prof.label_a_order, prof.a_points.order);
    }
    let mut diags = Vec::new();
    for r in 1..s.k {
        let h = hodge_gram(params, r)?;
        println!("  H_{r}: ⟨Z(p), Z(p)⟩ = {}", h.diagonal);
        diags.push(json!({"r": r, "diagonal": h.diagonal.to_string(), "rescaled": matrix_strings(&h.rescaled)}));
    }
    if let Some(p) = &out.json {
        write_json(p, &envelope("profile", out, json!({"profile": prof, "hodge": diags}))?)?;
    }
    Ok(if prof.gauss_bonnet_holds() { 0 } else { 1 })
}

fn chars(s: &Surface, out: &Output) -> Result<u8, KzError> {
    only(out, &[ExportFormat::Json], "chars")?;
    SurfaceParams::new(s.k, s.ell)?;
    let table = character_table(s.k, s.ell);
    let dec = decompose_homology(s.k, s.ell);
    println!(
        "G of order {}: {} classes, {} irreducible characters",
        table.group_order(),
        table.classes.len(),
        table.rows.len()
    );
    for row in &table.rows {
        let label = match row.label {
            CharacterLabel::Linear { a, b, c } => format!("linear ({a:+}, {b:+}, {c:+})"),
            CharacterLabel::Dihedral { r, s } => format!("χ_{{{r},{s}}}"),
        };
        println!("  {label}  degree {}", row.degree);
    }
    let ortho = table.orthogonality_holds();
    println!("orthogonality: {}", if ortho { "holds" } else { "FAILS" });
    println!("Σ dim² = {}", table.sum_of_squared_degrees());
    for (r, dim) in &dec.hr_dims {
        println!("  dim H_{r} = {dim}");
    }
    println!("χ_ab(id) = {} = 2g", dec.chi_ab_identity);
    if let Some(p) = &out.json {
        write_json(p, &envelope("chars", out, json!({"table": table, "homology": dec}))?)?;
    }
    Ok(if ortho && dec.checks.all() { 0 } else { 1 })
}

fn diagram(d: usize, out: &Output) -> Result<u8, KzError> {
    only(out, &[ExportFormat::Json, ExportFormat::Dot], "diagram")?;
    let g = build_diagram(d)?;
    let loops = g.elementary_loops();
    println!("D_{d}: {} vertices, {} arrows, {} elementary loops", g.len(), 2 * g.len(), loops.len());
    for l in &loops {
        let base = if l.base.is_empty() { "ε" } else { &l.base };
        println!("  {} loop at {base}: length {}, winner {}", l.kind, l.length, l.winner);
    }
    if let Some(p) = &out.dot {
        export_report(&Artifact::Diagram(&g), ExportFormat::Dot, p)?;
    }
    if let Some(p) = &out.json {
        write_json(p, &envelope("diagram", out, json!({"diagram": g, "loops": loops}))?)?;
    }
    Ok(if g.matches_standard_moves() || d > 8 { 0 } else { 1 })
}

fn generators(c: &Cocycle, out: &Output) -> Result<u8, KzError> {
    only(out, &[ExportFormat::Json], "generators")?;
    let set = GeneratorSet::new(c.d, c.alpha)?;
    let form = build_form(c.d, c.alpha);
    let mut ok = true;
    let mut mats = Vec::new();
    for (p, kind, m) in set.all() {
        let inv = form.preserved_by(m);
        ok &= inv;
        println!("L_{p}^{kind}  (form {})", if inv { "preserved" } else { "NOT preserved" });
        for row in matrix_strings(m) {
            println!("  [{}]", row.join(", "));
        }
        mats.push(json!({"p": p, "kind": kind.to_string(), "matrix": matrix_strings(m)}));
    }
    if let Some(path) = &out.json {
        write_json(path, &envelope("generators", out, json!({"d": c.d, "alpha": c.alpha, "generators": mats}))?)?;
    }
    Ok(if ok { 0 } else { 1 })
}

fn form(c: &Cocycle, out: &Output) -> Result<u8, KzError> {
    only(out, &[ExportFormat::Json], "form")?;
    GeneratorSet::new(c.d, c.alpha)?;
    let g = build_form(c.d, c.alpha);
    let diag = diagonalize_form(c.d, c.alpha);
    println!("Q_α for d = {}, α = {}", c.d, c.alpha);
    for row in matrix_strings(&g.entries) {
        println!("  [{}]", row.join(", "));
    }
    for (s, (v, cf)) in diag.values.iter().zip(&diag.closed_form).enumerate() {
        println!("  Q(w_{}) = {:.12}  closed form {cf:.12}", s + 1, v.approx_complex().re);
    }
    let sig = diag.signature;
    println!("signature (p, q) = ({}, {}), kernel dimension {}", sig.n_minus, sig.n_plus, sig.n_zero);
    if let Some(path) = &out.json {
        let values: Vec<String> = diag.values.iter().map(|v| v.to_string()).collect();
        let v = json!({
            "d": c.d, "alpha": c.alpha, "gram": matrix_strings(&g.entries),
            "values": values, "closed_form": diag.closed_form, "signature": sig,
            "numeric_eigenvalues": diag.numeric_eigenvalues,
        });
        write_json(path, &envelope("form", out, v)?)?;
    }
    let ok = diag.numeric_signature() == sig && diag.max_closed_form_error() < 1e-10;
    Ok(if ok { 0 } else { 1 })
}

fn density(c: &Cocycle, bound: usize, out: &Output) -> Result<u8, KzError> {
    only(out, &[ExportFormat::Json], "density")?;
    GeneratorSet::new(c.d, c.alpha)?;
    let verdict = density_verdict(c.d, c.alpha);
    println!("verdict: {}", verdict.case.label());
    for n in &verdict.notes {
        println!("  {n}");
    }
    let mut ok = true;
    let mut extra = serde_json::Map::new();
    if c.d == 2 {
        let s = special_element_d2(c.alpha);
        println!("special element: trace {}, {:?}", s.trace, s.classification);
        extra.insert("special_class".into(), json!(s.classification));
        let vf = vector_fields_d2(c.alpha);
        if !vf.det.is_zero() {
            if let Some(seeds) = vf.fields {
                let dim = lie_closure_dim(&seeds).closure_dim;
                println!("Lie closure of X(0), X(1), X(2): dimension {dim}");
                extra.insert("lie_closure_dim".into(), json!(dim));
            }
        }
        if verdict.case == VerdictCase::ExceptionalFinite {
            let e = enumerate_d2(c.alpha, bound)?;
            match e.order {
                GroupOrder::Finite(n) => println!("order={n}"),
                GroupOrder::Exceeded(n) => {
                    ok = false;
                    println!("enumeration exceeded {n} elements");
                }
            }
            extra.insert("order".into(), json!(e.order));
        }
    }
    if c.d == 4 && c.alpha.equals(1, 4) {
        let dim = lie_closure_dim(&quarter_seeds_d4()).closure_dim;
        println!("Lie closure of g_-3 ∪ g_3: dimension {dim}");
        extra.insert("lie_closure_dim".into(), json!(dim));
    }
    if !c.alpha.times_is_integer(c.d as i64 + 1) {
        let rep = real_irreducibility(c.d, c.alpha)?;
        println!("real irreducibility: {} (algebra dimension {})", rep.irreducible, rep.algebra_dim);
        extra.insert("irreducible".into(), json!(rep.irreducible));
    }
    if let Some(p) = &out.json {
        write_json(p, &envelope("density", out, json!({"verdict": verdict, "certificates": extra}))?)?;
    }
    Ok(if ok { 0 } else { 1 })
}

fn spectrum(cfg: SimConfig, out: &Output) -> Result<u8, KzError> {
    only(out, &[ExportFormat::Json, ExportFormat::Csv], "spectrum")?;
    let report = simulate_spectrum(&cfg)?;
    let verdict = classify_spectrum(&report, cfg.d, cfg.alpha);
    for (i, e) in report.exponents.iter().enumerate() {
        let z = if report.zero_set.contains(&i) { "  (zero)" } else { "" };
        println!("λ_{} = {:+.6e} ± {:.1e}{z}", i + 1, e.value, e.stderr);
    }
    println!(
        "zeros: {} (expected {}), simple: {}, symmetry defect {:.1e}",
        report.zero_set.len(),
        expected_zero_count(cfg.d, cfg.alpha),
        report.simple,
        report.symmetric_defect
    );
    println!("verdict: {verdict:?}");
    if let Some(p) = &out.csv {
        export_report(&Artifact::Spectrum(&report), ExportFormat::Csv, p)?;
    }
    if let Some(p) = &out.json {
        let v: Value = serde_json::from_str(&render(&Artifact::Spectrum(&report), ExportFormat::Json)?)?;
        write_json(p, &envelope("spectrum", out, v)?)?;
    }
    Ok(if verdict == SpectrumVerdict::Inconsistent { 1 } else { 0 })
}

#[allow(clippy::too_many_arguments)]
fn verify(
    surface: Option<(u32, u32)>,
    cocycle: Option<(usize, AlphaParam)>,
    bound: usize,
    no_density: bool,
    spectrum: Option<SpectrumOptions>,
    all: bool,
    out: &Output,
) -> Result<u8, KzError> {
    only(out, &[ExportFormat::Json, ExportFormat::Csv], "verify")?;
    let mut grid = if surface.is_none() && cocycle.is_none() {
        Grid::default()
    } else {
        Grid {
            surfaces: surface.into_iter().collect(),
            cocycles: cocycle.into_iter().collect(),
            ..Grid::default()
        }
    };
    grid.bound = bound;
    grid.density = !no_density;
    grid.spectrum = spectrum;
    let mut report = run_verification_suite(&grid)?;
    if !out.no_timestamp {
        report.timestamp = Some(timestamp());
    }
    for c in &report.checks {
        if all || c.status != kzcocycle_core::CheckStatus::Pass {
            println!("{}", c.line());
        }
    }
    let s = report.summary;
    println!("{} pass, {} fail, {} flagged", s.pass, s.fail, s.flagged);
    if let Some(p) = &out.json {
        export_report(&Artifact::Verification(&report), ExportFormat::Json, p)?;
    }
    if let Some(p) = &out.csv {
        export_report(&Artifact::Verification(&report), ExportFormat::Csv, p)?;
    }
    Ok(report.exit_code() as u8)
}

fn run(cli: Cli) -> Result<u8, KzError> {
    match cli.cmd {
        Command::Profile { s, out } => profile(&s, &out),
        Command::Chars { s, out } => chars(&s, &out),
        Command::Diagram { d, out } => diagram(d, &out),
        Command::Generators { c, out } => generators(&c, &out),
        Command::Form { c, out } => form(&c, &out),
        Command::Density { c, bound, out } => density(&c, bound, &out),
        Command::Spectrum {
            c,
            steps,
            trials,
            seed,
            qr_cadence,
            out,
        } => {
            let mut cfg = SimConfig::new(c.d, c.alpha, steps, trials, seed);
            cfg.qr_cadence = qr_cadence;
            spectrum(cfg, &out)
        }
        Command::Verify {
            k,
            ell,
            d,
            alpha,
            bound,
            no_density,
            steps,
            trials,
            seed,
            all,
            out,
        } => {
            let spectrum = steps.map(|steps| SpectrumOptions { steps, trials, seed });
            verify(k.zip(ell), d.zip(alpha), bound, no_density, spectrum, all, &out)
        }
    }
}

/// Configuration problems exit with 2, like usage errors.
fn is_config_error(e: &KzError) -> bool {
    matches!(
        e,
        KzError::InvalidParameter(_)
            | KzError::InexactInput(_)
            | KzError::InvalidGrid(_)
            | KzError::InvalidIndex { .. }
            | KzError::DegenerateAngle { .. }
            | KzError::DegenerateConfiguration(_)
            | KzError::UnsupportedFormat { .. }
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("kzlab: {e}");
            ExitCode::from(if is_config_error(&e) { 2 } else { 1 })
        }
    }
}
