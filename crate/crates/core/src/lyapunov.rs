//! Monte-Carlo Lyapunov spectra for i.i.d. products of the L_p^t, L_p^b.
//!
//! The product acts on C^d viewed as R^{2d}. A frame of 2d real vectors is
//! pushed forward one generator at a time and re-orthonormalized by a real
//! Gram–Schmidt pass every `qr_cadence` steps.

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{KzError, Result};
use crate::generators::{predicted_signature, GeneratorSet};
use crate::number::AlphaParam;

/// Entries above this magnitude abort a trial.
pub const OVERFLOW_LIMIT: f64 = 1e150;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub d: usize,
    pub alpha: AlphaParam,
    pub steps: u64,
    pub trials: usize,
    pub seed: u64,
    /// Weight of letter p (ascending order), shared by L_p^t and L_p^b so the
    /// law is symmetric under inversion. `None` means uniform.
    pub letter_weights: Option<Vec<f64>>,
    pub qr_cadence: usize,
}

impl SimConfig {
    pub fn new(d: usize, alpha: AlphaParam, steps: u64, trials: usize, seed: u64) -> Self {
        SimConfig {
            d,
            alpha,
            steps,
            trials,
            seed,
            letter_weights: None,
            qr_cadence: 8,
        }
    }

    /// Steps discarded before accumulation starts.
    pub fn warmup(&self) -> u64 {
        self.steps / 10
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exponent {
    pub value: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub config: SimConfig,
    /// d complex exponents, descending.
    pub exponents: Vec<Exponent>,
    /// 2d real exponents, descending.
    pub real_exponents: Vec<Exponent>,
    /// Per trial, the d complex exponents in the same order as `exponents`.
    pub per_trial: Vec<Vec<f64>>,
    /// Indices into `exponents` classified as zero.
    pub zero_set: Vec<usize>,
    /// Zero threshold used for each exponent.
    pub zero_thresholds: Vec<f64>,
    pub simple: bool,
    /// max |λ_i + λ_{d+1−i}|.
    pub symmetric_defect: f64,
    /// Largest gap inside a pair of real exponents.
    pub max_pair_gap: f64,
}

impl SpectrumReport {
    pub fn max_stderr(&self) -> f64 {
        self.exponents.iter().map(|e| e.stderr).fold(0.0, f64::max)
    }

    /// One row per (trial, exponent index), header `trial,index,exponent,stderr`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,index,exponent,stderr\n");
        for (t, row) in self.per_trial.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                out.push_str(&format!("{t},{i},{v:e},{:e}\n", self.exponents[i].stderr));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumVerdict {
    Consistent,
    Inconsistent,
    Inconclusive,
}

/// A generator that differs from the identity only in one row.
#[derive(Clone, Debug)]
struct RowOp {
    row: usize,
    coeffs: Vec<Complex64>,
}

fn row_ops(gens: &GeneratorSet) -> Vec<RowOp> {
    gens.to_complex()
        .into_iter()
        .map(|m| {
            let d = m.nrows();
            let row = (0..d)
                .find(|&i| (0..d).any(|j| (m[(i, j)] - if i == j { 1.0 } else { 0.0 }).norm() > 0.0))
                .unwrap_or(0);
            RowOp {
                row,
                coeffs: (0..d).map(|j| m[(row, j)]).collect(),
            }
        })
        .collect()
}

/// A frame of 2d vectors in C^d, stored row by row.
struct Frame {
    d: usize,
    rows: Vec<Vec<Complex64>>,
}

impl Frame {
    /// Columns e_m and i·e_m, a real basis of R^{2d}.
    fn standard(d: usize) -> Self {
        let mut rows = vec![vec![Complex64::new(0.0, 0.0); 2 * d]; d];
        for m in 0..d {
            rows[m][2 * m] = Complex64::new(1.0, 0.0);
            rows[m][2 * m + 1] = Complex64::new(0.0, 1.0);
        }
        Frame { d, rows }
    }

    fn apply(&mut self, op: &RowOp, scratch: &mut [Complex64]) {
        scratch.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for (q, c) in op.coeffs.iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            for (s, x) in scratch.iter_mut().zip(&self.rows[q]) {
                *s += c * x;
            }
        }
        self.rows[op.row].copy_from_slice(scratch);
    }

    /// Largest |Re| or |Im| over the frame; infinite if anything is not finite.
    fn max_abs(&self) -> f64 {
        let mut m: f64 = 0.0;
        for z in self.rows.iter().flatten() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return f64::INFINITY;
            }
            m = m.max(z.re.abs()).max(z.im.abs());
        }
        m
    }

    /// Modified Gram–Schmidt for the real inner product Re(uᴴv); adds log r_jj to `acc`.
    fn orthonormalize(&mut self, acc: Option<&mut [f64]>) -> Result<()> {
        let n = 2 * self.d;
        let mut logs = vec![0.0; n];
        for j in 0..n {
            for i in 0..j {
                let c: f64 = self.rows.iter().map(|r| (r[i].conj() * r[j]).re).sum();
                for r in self.rows.iter_mut() {
                    let ri = r[i];
                    r[j] -= ri * c;
                }
            }
            let norm = self.rows.iter().map(|r| r[j].norm_sqr()).sum::<f64>().sqrt();
            if !(norm.is_finite() && norm > 0.0) {
                return Err(KzError::NumericalOverflow(format!("frame column {j} has norm {norm}")));
            }
            for r in self.rows.iter_mut() {
                r[j] /= norm;
            }
            logs[j] = norm.ln();
        }
        if let Some(acc) = acc {
            for (a, l) in acc.iter_mut().zip(logs) {
                *a += l;
            }
        }
        Ok(())
    }
}

/// Real exponents of one trial, in Gram–Schmidt column order.
fn run_trial(cfg: &SimConfig, ops: &[RowOp], sampler: &WeightedIndex<f64>, trial: usize) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial as u64);
    let d = cfg.d;
    let mut frame = Frame::standard(d);
    let mut scratch = vec![Complex64::new(0.0, 0.0); 2 * d];
    let mut acc = vec![0.0; 2 * d];
    let warm = cfg.warmup();
    let cadence = cfg.qr_cadence as u64;
    let mut step = 0u64;
    while step < cfg.steps {
        let block = cadence.min(cfg.steps - step);
        for _ in 0..block {
            frame.apply(&ops[sampler.sample(&mut rng)], &mut scratch);
        }
        step += block;
        let m = frame.max_abs();
        if m > OVERFLOW_LIMIT {
            return Err(KzError::NumericalOverflow(format!(
                "entries reached {m:e} at step {step}; qr_cadence {} is too sparse",
                cfg.qr_cadence
            )));
        }
        // blocks straddling the warm-up boundary are discarded whole
        let counting = step - block >= warm;
        frame.orthonormalize(if counting { Some(&mut acc) } else { None })?;
    }
    let measured = (cfg.steps - warm.div_ceil(cadence) * cadence).max(1) as f64;
    Ok(acc.into_iter().map(|a| a / measured).collect())
}

fn mean_se(xs: impl Iterator<Item = f64> + Clone) -> Exponent {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let var = if n > 1.0 {
        xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Exponent {
        value: mean,
        stderr: (var / n).sqrt(),
    }
}

fn validate(cfg: &SimConfig) -> Result<()> {
    if cfg.d < 2 {
        return Err(KzError::InvalidParameter(format!("need d ≥ 2, got {}", cfg.d)));
    }
    if !(cfg.alpha.value() > 0.0 && cfg.alpha.value() < 0.5) {
        return Err(KzError::InvalidParameter(format!("need 0 < α < 1/2, got {}", cfg.alpha)));
    }
    if cfg.steps == 0 || cfg.trials == 0 || cfg.qr_cadence == 0 {
        return Err(KzError::InvalidParameter("steps, trials and qr_cadence must be positive".into()));
    }
    if let Some(w) = &cfg.letter_weights {
        if w.len() != cfg.d || w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || w.iter().all(|x| *x == 0.0) {
            return Err(KzError::InvalidParameter("letter_weights needs d non-negative finite entries, not all zero".into()));
        }
    }
    Ok(())
}

/// Runs `trials` independent products; trial t uses stream t of a ChaCha8
/// generator seeded with `seed`, so the result does not depend on scheduling.
pub fn simulate_spectrum(cfg: &SimConfig) -> Result<SpectrumReport> {
    validate(cfg)?;
    let d = cfg.d;
    let gens = GeneratorSet::new(d, cfg.alpha)?;
    let ops = row_ops(&gens);
    // ops alternate top, bottom for each letter
    let weights: Vec<f64> = match &cfg.letter_weights {
        Some(w) => w.iter().flat_map(|&x| [x, x]).collect(),
        None => vec![1.0; 2 * d],
    };
    let sampler = WeightedIndex::new(&weights).map_err(|e| KzError::InvalidParameter(e.to_string()))?;
    let raw: Vec<Vec<f64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, &ops, &sampler, t))
        .collect::<Result<_>>()?;

    // Average by column position, then sort the averages.
    let mut order: Vec<usize> = (0..2 * d).collect();
    let col_means: Vec<f64> = (0..2 * d).map(|j| raw.iter().map(|r| r[j]).sum::<f64>()).collect();
    order.sort_by(|&a, &b| col_means[b].total_cmp(&col_means[a]));
    let real_exponents: Vec<Exponent> = order.iter().map(|&j| mean_se(raw.iter().map(move |r| r[j]))).collect();
    let per_trial: Vec<Vec<f64>> = raw
        .iter()
        .map(|r| (0..d).map(|i| 0.5 * (r[order[2 * i]] + r[order[2 * i + 1]])).collect())
        .collect();
    let exponents: Vec<Exponent> = (0..d).map(|i| mean_se(per_trial.iter().map(move |r| r[i]))).collect();
    let max_pair_gap = (0..d)
        .map(|i| real_exponents[2 * i].value - real_exponents[2 * i + 1].value)
        .fold(0.0, f64::max);

    let p = predicted_signature(d, cfg.alpha).n_minus;
    let (zero_set, zero_thresholds) = zero_classification(&exponents, p);
    let simple = is_simple(&exponents, &zero_set);
    let symmetric_defect = (0..d)
        .map(|i| (exponents[i].value + exponents[d - 1 - i].value).abs())
        .fold(0.0, f64::max);
    Ok(SpectrumReport {
        config: cfg.clone(),
        exponents,
        real_exponents,
        per_trial,
        zero_set,
        zero_thresholds,
        simple,
        symmetric_defect,
        max_pair_gap,
    })
}

/// |λ_i| < max(3·SE_i, 0.1·min |λ| over the top p exponents).
fn zero_classification(exps: &[Exponent], p: usize) -> (Vec<usize>, Vec<f64>) {
    let floor = exps[..p.min(exps.len())]
        .iter()
        .map(|e| e.value.abs())
        .fold(f64::INFINITY, f64::min);
    let floor = if floor.is_finite() { 0.1 * floor } else { 0.0 };
    let thresholds: Vec<f64> = exps.iter().map(|e| (3.0 * e.stderr).max(floor)).collect();
    let zeros = exps
        .iter()
        .zip(&thresholds)
        .enumerate()
        .filter(|(_, (e, t))| e.value.abs() < **t)
        .map(|(i, _)| i)
        .collect();
    (zeros, thresholds)
}

fn is_simple(exps: &[Exponent], zeros: &[usize]) -> bool {
    let nz: Vec<&Exponent> = exps.iter().enumerate().filter(|(i, _)| !zeros.contains(i)).map(|(_, e)| e).collect();
    nz.iter().enumerate().all(|(i, a)| {
        nz[i + 1..]
            .iter()
            .all(|b| (a.value - b.value).abs() > 3.0 * (a.stderr + b.stderr))
    })
}

/// Expected number of vanishing exponents, q − p.
pub fn expected_zero_count(d: usize, alpha: AlphaParam) -> usize {
    let s = predicted_signature(d, alpha);
    (s.n_plus + s.n_zero).saturating_sub(s.n_minus)
}

/// Compares a report against the signature prediction. Inconclusive when some
/// exponent sits within one standard error of its zero threshold, or some
/// pair of nonzero exponents within one standard error of the simplicity gap.
pub fn classify_spectrum(report: &SpectrumReport, d: usize, alpha: AlphaParam) -> SpectrumVerdict {
    if report.exponents.len() != d || report.config.alpha != alpha {
        return SpectrumVerdict::Inconsistent;
    }
    let exps = &report.exponents;
    let straddles_zero = exps
        .iter()
        .zip(&report.zero_thresholds)
        .any(|(e, t)| (e.value.abs() - t).abs() < e.stderr);
    let nz: Vec<&Exponent> = (0..d).filter(|i| !report.zero_set.contains(i)).map(|i| &exps[i]).collect();
    let straddles_gap = nz.iter().enumerate().any(|(i, a)| {
        nz[i + 1..].iter().any(|b| {
            let gap = (a.value - b.value).abs();
            let thr = 3.0 * (a.stderr + b.stderr);
            (gap - thr).abs() < a.stderr + b.stderr
        })
    });
    if straddles_zero || straddles_gap {
        return SpectrumVerdict::Inconclusive;
    }
    let symmetric = report.symmetric_defect < 5.0 * report.max_stderr();
    let zeros_ok = report.zero_set.len() == expected_zero_count(d, alpha);
    if symmetric && zeros_ok && report.simple {
        SpectrumVerdict::Consistent
    } else {
        SpectrumVerdict::Inconsistent
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rauzy::ArrowType;

    fn a(n: i64, d: i64) -> AlphaParam {
        AlphaParam::new(n, d).unwrap()
    }

    #[test]
    fn bottom_inverts_top() {
        let g = GeneratorSet::new(4, a(1, 5)).unwrap();
        for p in g.letters() {
            let t = g.get(p, ArrowType::Top).unwrap();
            let b = g.get(p, ArrowType::Bottom).unwrap();
            assert!((t * b).is_identity());
        }
    }

    #[test]
    fn max_abs_sees_nan_anywhere() {
        let mut f = Frame { d: 1, rows: vec![vec![Complex64::new(f64::NAN, 0.0), Complex64::new(2.0, 0.0)]] };
        assert!(f.max_abs() > OVERFLOW_LIMIT);
        f.rows[0][0] = Complex64::new(1.0, -3.0);
        assert_eq!(f.max_abs(), 3.0);
    }

    #[test]
    fn row_ops_reproduce_matrices() {
        let g = GeneratorSet::new(3, a(1, 4)).unwrap();
        let ops = row_ops(&g);
        for (op, m) in ops.iter().zip(g.to_complex()) {
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == op.row { op.coeffs[j] } else if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                    assert!((m[(i, j)] - want).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let cfg = SimConfig::new(3, a(1, 5), 2000, 3, 7);
        let r1 = simulate_spectrum(&cfg).unwrap();
        let r2 = simulate_spectrum(&cfg).unwrap();
        assert_eq!(r1, r2);
        let r3 = simulate_spectrum(&SimConfig { seed: 8, ..cfg }).unwrap();
        assert_ne!(r1.per_trial, r3.per_trial);
    }

    #[test]
    fn sparse_cadence_overflows() {
        let mut cfg = SimConfig::new(2, a(2, 5), 20_000, 1, 1);
        cfg.qr_cadence = 20_000;
        assert!(matches!(simulate_spectrum(&cfg), Err(KzError::NumericalOverflow(_))));
    }

    #[test]
    fn rejects_bad_config() {
        assert!(simulate_spectrum(&SimConfig::new(1, a(1, 5), 10, 1, 0)).is_err());
        assert!(simulate_spectrum(&SimConfig::new(3, a(1, 5), 0, 1, 0)).is_err());
        let mut cfg = SimConfig::new(3, a(1, 5), 10, 1, 0);
        cfg.letter_weights = Some(vec![1.0, 0.0]);
        assert!(simulate_spectrum(&cfg).is_err());
    }

    #[test]
    fn zero_rule_uses_top_block_floor() {
        let e = |v: f64| Exponent { value: v, stderr: 0.001 };
        let exps = [e(0.5), e(0.04), e(-0.04), e(-0.5)];
        let (z, _) = zero_classification(&exps, 1);
        assert_eq!(z, vec![1, 2]);
        let (z, _) = zero_classification(&exps, 0);
        assert!(z.is_empty());
    }

    #[test]
    fn expected_zero_counts() {
        assert_eq!(expected_zero_count(6, a(3, 10)), 2);
        assert_eq!(expected_zero_count(2, a(2, 5)), 0);
        assert_eq!(expected_zero_count(4, a(1, 10)), 4);
    }

    #[test]
    fn csv_shape() {
        let r = simulate_spectrum(&SimConfig::new(2, a(2, 5), 500, 4, 3)).unwrap();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "trial,index,exponent,stderr");
        assert_eq!(lines.len(), 1 + 4 * 2);
    }
}
