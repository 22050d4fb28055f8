//! Acceptance criteria 1–10, one line each.

use std::time::{Duration, Instant};

use kzcocycle_core::density::{enumerate_d2, lie_closure_dim, quarter_seeds_d4, DEFAULT_BOUND};
use kzcocycle_core::generators::{
    build_form, diagonalize_form, hodge_matches_form, predicted_signature, special_element_d2, vector_fields_d2,
    SpecialClass,
};
use kzcocycle_core::group::{character_table, decompose_homology};
use kzcocycle_core::lyapunov::{classify_spectrum, expected_zero_count, simulate_spectrum};
use kzcocycle_core::number::alpha_grid;
use kzcocycle_core::rauzy::build_diagram;
use kzcocycle_core::report::{run_verification_suite, CheckStatus, Grid};
use kzcocycle_core::surface::{hodge_gram, singularity_profile};
use kzcocycle_core::{AlphaParam, GeneratorSet, GroupOrder, SimConfig, SpectrumVerdict, SurfaceParams};

fn a(n: i64, d: i64) -> AlphaParam {
    AlphaParam::new(n, d).unwrap()
}

/// Reduced fractions in (0, 1/2), by increasing denominator.
fn rationals(count: usize, skip: &[(i64, i64)]) -> Vec<AlphaParam> {
    let mut out = Vec::new();
    for den in 3i64.. {
        for num in 1..den {
            if 2 * num >= den || num_integer::gcd(num, den) != 1 || skip.contains(&(num, den)) {
                continue;
            }
            out.push(a(num, den));
            if out.len() == count {
                return out;
            }
        }
    }
    unreachable!()
}

fn c1() -> (bool, String) {
    let e = enumerate_d2(a(1, 4), DEFAULT_BOUND).unwrap();
    (e.order == GroupOrder::Finite(96), format!("order {:?}", e.order))
}

fn c2() -> (bool, String) {
    let mut n = 0;
    for d in 2..=10 {
        for al in alpha_grid(6) {
            let q = build_form(d, al);
            let set = GeneratorSet::new(d, al).unwrap();
            for (p, kind, m) in set.all() {
                if !q.preserved_by(m) {
                    return (false, format!("d={d} α={al} L_{p}^{kind}"));
                }
                n += 1;
            }
        }
    }
    (true, format!("{n} generators"))
}

fn c3() -> (bool, String) {
    let mut n = 0;
    let mut worst: f64 = 0.0;
    for d in 2..=12usize {
        for al in alpha_grid(8) {
            if al.times_is_integer(d as i64 + 1) {
                continue;
            }
            let diag = diagonalize_form(d, al);
            let pred = predicted_signature(d, al);
            let ell = (d + 1) as u64;
            let want = (
                (ell * al.numer() as u64).div_ceil(al.denom() as u64) as usize - 1,
                (ell * (al.denom() - al.numer()) as u64).div_ceil(al.denom() as u64) as usize - 1,
            );
            worst = worst.max(diag.max_closed_form_error());
            let s = diag.numeric_signature();
            if (s.n_minus, s.n_plus) != want || diag.signature != pred || s.n_zero != 0 {
                return (false, format!("d={d} α={al}: {s:?} vs {want:?}"));
            }
            n += 1;
        }
    }
    (worst < 1e-10, format!("{n} cases, closed-form err {worst:.1e}"))
}

fn c4() -> (bool, String) {
    let mut ok = true;
    for al in rationals(50, &[]) {
        let s = special_element_d2(al);
        let expect = 1.0 - 2.0 * (2.0 * std::f64::consts::PI * al.value()).cos();
        ok &= s.trace == s.expected_trace() && s.det.is_one();
        ok &= (s.trace.approx_complex().re - expect).abs() < 1e-12;
        let hyper = 2.0 * (2.0 * std::f64::consts::PI * al.value()).cos() < -1.0;
        ok &= (s.classification == SpecialClass::Hyperbolic) == hyper;
    }
    ok &= special_element_d2(a(1, 3)).classification == SpecialClass::Parabolic;
    (ok, "50 values of α".into())
}

fn c5() -> (bool, String) {
    let mut ok = true;
    for al in rationals(20, &[(1, 6), (1, 4), (1, 3)]) {
        let vf = vector_fields_d2(al);
        ok &= vf.det == vf.expected_det && !vf.det.is_zero();
        ok &= vf.fields.map(|f| lie_closure_dim(&f).closure_dim) == Some(3);
    }
    let quarter = lie_closure_dim(&quarter_seeds_d4()).closure_dim;
    (ok && quarter == 15, format!("20 closures of dim 3, d=4 closure {quarter}"))
}

fn c6() -> (bool, String) {
    for k in 1..=8 {
        for ell in 3..=12 {
            let t = character_table(k, ell);
            let dec = decompose_homology(k, ell);
            let g = SurfaceParams::new(k, ell).unwrap().genus() as i64;
            let ok = t.orthogonality_holds()
                && t.sum_of_squared_degrees() == (4 * k * ell) as usize
                && dec.checks.all()
                && dec.chi_ab_identity == 2 * g;
            if !ok {
                return (false, format!("k={k} ℓ={ell}"));
            }
        }
    }
    (true, "k ≤ 8, ℓ ≤ 12".into())
}

fn c7() -> (bool, String) {
    let mut n = 0;
    for k in 2..=6u32 {
        for r in 1..k {
            for ell in 3..=9 {
                if !hodge_matches_form(k, ell, r).unwrap() {
                    return (false, format!("k={k} r={r} ℓ={ell}"));
                }
                let h = hodge_gram(SurfaceParams::new(k, ell).unwrap(), r).unwrap();
                let th = std::f64::consts::PI * r as f64 / k as f64;
                let diag = -(k as f64) * (1.0 + th.cos()) / th.sin();
                let dz = h.diagonal.approx_complex();
                let im = h.raw.get(1, 0).approx_complex().im;
                if (dz.re - diag).abs() > 1e-12 || dz.im.abs() > 1e-12 || (im - k as f64 / 2.0).abs() > 1e-12 {
                    return (false, format!("raw values k={k} r={r} ℓ={ell}"));
                }
                n += 1;
            }
        }
    }
    (true, format!("{n} cases"))
}

fn c8() -> (bool, String) {
    for d in 2..=12 {
        let g = build_diagram(d).unwrap();
        let mut ok = g.len() == (1usize << (d - 1)) - 1;
        if d <= 8 {
            ok &= g.matches_standard_moves();
        }
        ok &= (0..g.len()).all(|v| {
            let (t, b) = g.winners(v);
            t > b
        });
        ok &= g.elementary_loops().iter().all(|l| l.length + l.base.len() == d - 1);
        if !ok {
            return (false, format!("d={d}"));
        }
    }
    (true, "d ≤ 12".into())
}

fn c9() -> (bool, String) {
    let seed = 20240601;
    let main = simulate_spectrum(&SimConfig::new(6, a(3, 10), 1_000_000, 20, seed)).unwrap();
    let se = main.max_stderr();
    let verdict = classify_spectrum(&main, 6, a(3, 10));
    let ok_main = main.symmetric_defect < 5.0 * se
        && main.zero_set.len() == 2
        && main.zero_set.len() == expected_zero_count(6, a(3, 10))
        && main.simple
        && verdict == SpectrumVerdict::Consistent;
    let definite = simulate_spectrum(&SimConfig::new(4, a(1, 10), 100_000, 10, seed)).unwrap();
    let ok_def = definite.zero_set.len() == 4;
    let pair = simulate_spectrum(&SimConfig::new(2, a(2, 5), 100_000, 10, seed)).unwrap();
    let ok_pair = pair.zero_set.is_empty() && pair.exponents[0].value > 0.0;
    let lams: Vec<String> = main.exponents.iter().map(|e| format!("{:+.4}", e.value)).collect();
    (
        ok_main && ok_def && ok_pair,
        format!("zeros {:?}, λ = [{}], defect {:.1e} < 5·SE {:.1e}", main.zero_set, lams.join(" "), main.symmetric_defect, 5.0 * se),
    )
}

fn c10() -> (bool, String) {
    for k in 1..=8 {
        for ell in 3..=12 {
            if !singularity_profile(SurfaceParams::new(k, ell).unwrap()).gauss_bonnet_holds() {
                return (false, format!("k={k} ℓ={ell}"));
            }
        }
    }
    let grid = Grid {
        surfaces: (1..=8).flat_map(|k| (3..=12).map(move |l| (k, l))).collect(),
        cocycles: vec![],
        ..Grid::default()
    };
    let r = run_verification_suite(&grid).unwrap();
    let labels: Vec<_> = r.checks.iter().filter(|c| c.check_id == "surface.stratum_label").collect();
    let ok = labels.len() == 80
        && labels.iter().all(|c| {
            let k1 = c.params.starts_with("k=1,");
            (c.status == CheckStatus::Flagged) != k1 && c.status != CheckStatus::Fail
        });
    let flagged = labels.iter().filter(|c| c.status == CheckStatus::Flagged).count();
    (ok, format!("{flagged} label checks flagged"))
}

type Criterion = (u32, &'static str, Duration, fn() -> (bool, String));

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "order-96 certificate", Duration::from_secs(5), c1),
        (2, "exact form invariance", Duration::from_secs(30), c2),
        (3, "signature formula", Duration::from_secs(60), c3),
        (4, "d=2 trace and det", Duration::from_secs(60), c4),
        (5, "Lie certificates", Duration::from_secs(10), c5),
        (6, "character suite", Duration::from_secs(60), c6),
        (7, "Hodge form cross-oracle", Duration::from_secs(60), c7),
        (8, "Rauzy diagram", Duration::from_secs(60), c8),
        (9, "Lyapunov properties", Duration::from_secs(600), c9),
        (10, "Gauss-Bonnet sweep", Duration::from_secs(60), c10),
    ];
    let mut failed = 0;
    for (n, name, limit, f) in criteria {
        let t = Instant::now();
        let (ok, detail) = f();
        let dt = t.elapsed();
        let pass = ok && dt <= limit;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {n:>2} {}: {name} ({:.2}s, limit {}s) {detail}",
            if pass { "PASS" } else { "FAIL" },
            dt.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
