//! Monte Carlo tail probabilities of κ_Z over uniformly random subspaces,
//! compared against the first-order tube law around the tangency
//! hypersurface: Prob{κ_Z(L) ≥ 1/ε} ≈ (vol Σ/vol G)·π·ε², a model (not a
//! bound) whose constant comes from the closed-form volume ratio.
//!
//! Sampling is deterministic given the seed: sample i draws from an
//! independent ChaCha12 substream obtained by [`substream_rng`], and results
//! are aggregated in index order, so thread count does not affect output.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::condition::{self, KappaOpts};
use crate::error::{Error, Result};
use crate::grassmann;
use crate::variety::VarietySpec;
use crate::volume::{self, HurwitzParams};

/// 97.5% normal quantile, for 95% two-sided intervals.
const Z95: f64 = 1.959963984540054;

/// The documented seed-splitting function: sample i uses the ChaCha12 stream
/// `i` of the master seed.
pub fn substream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn kappa_of_sample(variety: &VarietySpec, stream: u64, seed: u64) -> Option<f64> {
    let mut rng = substream_rng(seed, stream);
    let n1 = variety.ambient_proj_dim() + 1;
    let l = grassmann::sample_uniform(n1, variety.codim() + 1, &mut rng);
    match condition::kappa_global(variety, &l, &KappaOpts::default()) {
        Ok(report) => Some(report.kappa_global),
        Err(Error::PositiveDimensional) => Some(f64::INFINITY),
        Err(_) => None,
    }
}

/// κ_Z(L) for `n_samples` uniformly random L. Ill-posed draws come back as
/// +∞; solver failures as NaN, and a failure rate above 1% aborts.
pub fn sample_kappa(
    variety: &VarietySpec,
    n_samples: usize,
    seed: u64,
    threads: usize,
) -> Result<Vec<f64>> {
    let run = |idx: usize| kappa_of_sample(variety, idx as u64, seed).unwrap_or(f64::NAN);
    let samples: Vec<f64> = if threads == 1 {
        (0..n_samples).map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Capability(format!("thread pool: {e}")))?;
        pool.install(|| (0..n_samples).into_par_iter().map(run).collect())
    };
    let failures = samples.iter().filter(|k| k.is_nan()).count();
    if failures * 100 > n_samples {
        return Err(Error::SolverFailureRate { failures, total: n_samples });
    }
    Ok(samples)
}

fn valid(samples: &[f64]) -> impl Iterator<Item = f64> + '_ {
    samples.iter().copied().filter(|k| !k.is_nan())
}

/// Wilson 95% score interval for a binomial proportion.
fn wilson(successes: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = Z95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Empirical Prob{κ ≥ 1/ε} with its Wilson 95% interval.
pub fn tail_probability(samples: &[f64], eps: f64) -> Result<(f64, (f64, f64))> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Capability(format!("need ε in (0, 1], got {eps}")));
    }
    let n = valid(samples).count();
    if n == 0 {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let threshold = 1.0 / eps;
    let hits = valid(samples).filter(|&k| k >= threshold).count();
    Ok((hits as f64 / n as f64, wilson(hits, n)))
}

/// First-order tube-law model (vol Σ/vol G)·π·ε², clipped to [0, 1]. This is
/// a reference model for the small-ε regime, not a proven bound.
pub fn predicted_tail(params: &HurwitzParams, eps: f64) -> Result<f64> {
    let ratio = volume::hurwitz_vol_ratio(params)?;
    Ok((ratio.to_f64() * std::f64::consts::PI * eps * eps).clamp(0.0, 1.0))
}

/// Expectation summary over the finite κ samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpectationReport {
    /// Mean with the top 0.1% winsorized (display value; the tail is heavy).
    pub mean_kappa_trimmed: f64,
    pub mean_log_kappa: f64,
    /// E log κ ≤ log E κ on the sample.
    pub jensen_gap_ok: bool,
}

pub fn expectation_report(samples: &[f64]) -> Result<ExpectationReport> {
    let mut finite: Vec<f64> = valid(samples).filter(|k| k.is_finite()).collect();
    if finite.len() < 100 {
        return Err(Error::TooFewSamples { needed: 100, got: finite.len() });
    }
    let n = finite.len();
    let raw_mean = finite.iter().sum::<f64>() / n as f64;
    let mean_log = finite.iter().map(|k| k.ln()).sum::<f64>() / n as f64;
    finite.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cut = ((n as f64) * 0.001).ceil() as usize;
    let cap = finite[n - 1 - cut.min(n - 1)];
    let trimmed_mean =
        finite.iter().map(|&k| k.min(cap)).sum::<f64>() / n as f64;
    Ok(ExpectationReport {
        mean_kappa_trimmed: trimmed_mean,
        mean_log_kappa: mean_log,
        jensen_gap_ok: mean_log <= raw_mean.ln() + 1e-12,
    })
}

/// One ε entry of the empirical tail.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailPoint {
    pub eps: f64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Monte Carlo tail estimate next to the first-order tube prediction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailEstimate {
    pub eps_grid: Vec<f64>,
    pub empirical_tail: Vec<TailPoint>,
    /// Model values (vol Σ/vol G)·π·ε² per grid entry.
    pub predicted_tail: Vec<f64>,
    pub sample_count: usize,
    pub seed: u64,
    pub mean_log_kappa: f64,
    pub mean_log_kappa_ci: [f64; 2],
    pub mean_kappa_trimmed: f64,
    pub ill_posed_hits: usize,
    pub solver_failures: usize,
}

/// Default ε grid: small enough for the o(ε²) term to stay subdominant on
/// the shipped fixtures, large enough for desk-scale sample counts.
pub fn default_eps_grid() -> Vec<f64> {
    vec![0.02, 0.05, 0.1, 0.2]
}

/// Full tail experiment: draws, empirical tails with Wilson intervals, the
/// tube-law model, and expectation summaries. Deterministic given the seed.
pub fn estimate_tail(
    variety: &VarietySpec,
    n_samples: usize,
    seed: u64,
    eps_grid: &[f64],
    threads: usize,
) -> Result<(TailEstimate, Vec<f64>)> {
    let params = HurwitzParams::for_variety(variety)?;
    let samples = sample_kappa(variety, n_samples, seed, threads)?;
    let mut grid: Vec<f64> = eps_grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut empirical = Vec::with_capacity(grid.len());
    let mut predicted = Vec::with_capacity(grid.len());
    for &eps in &grid {
        let (p, (lo, hi)) = tail_probability(&samples, eps)?;
        empirical.push(TailPoint { eps, estimate: p, ci_low: lo, ci_high: hi });
        predicted.push(predicted_tail(&params, eps)?);
    }
    let expectation = expectation_report(&samples)?;
    let finite: Vec<f64> = valid(&samples).filter(|k| k.is_finite()).collect();
    let n = finite.len() as f64;
    let var_log = finite
        .iter()
        .map(|k| (k.ln() - expectation.mean_log_kappa).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    let half = Z95 * (var_log / n).sqrt();
    let ill_posed_hits = valid(&samples).filter(|k| k.is_infinite()).count();
    let solver_failures = samples.iter().filter(|k| k.is_nan()).count();
    let estimate = TailEstimate {
        eps_grid: grid,
        empirical_tail: empirical,
        predicted_tail: predicted,
        sample_count: n_samples,
        seed,
        mean_log_kappa: expectation.mean_log_kappa,
        mean_log_kappa_ci: [
            expectation.mean_log_kappa - half,
            expectation.mean_log_kappa + half,
        ],
        mean_kappa_trimmed: expectation.mean_kappa_trimmed,
        ill_posed_hits,
        solver_failures,
    };
    Ok((estimate, samples))
}

/// Least-squares slope of log(tail) against log(ε) with a seeded bootstrap
/// percentile interval; the tube law predicts slope 2.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

fn slope_of(samples: &[f64], eps_grid: &[f64]) -> Option<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let n = valid(samples).count();
    if n == 0 {
        return None;
    }
    for &eps in eps_grid {
        let threshold = 1.0 / eps;
        let hits = valid(samples).filter(|&k| k >= threshold).count();
        if hits > 0 {
            xs.push(eps.ln());
            ys.push((hits as f64 / n as f64).ln());
        }
    }
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

pub fn fit_tail_slope(
    samples: &[f64],
    eps_grid: &[f64],
    bootstrap: usize,
    seed: u64,
) -> Result<SlopeFit> {
    let slope = slope_of(samples, eps_grid)
        .ok_or_else(|| Error::TooFewSamples { needed: 2, got: 0 })?;
    let pool: Vec<f64> = valid(samples).collect();
    let mut slopes = Vec::with_capacity(bootstrap);
    for b in 0..bootstrap {
        let mut rng = substream_rng(seed ^ 0x9e37_79b9_7f4a_7c15, b as u64);
        let resample: Vec<f64> = (0..pool.len())
            .map(|_| pool[rand::Rng::random_range(&mut rng, 0..pool.len())])
            .collect();
        if let Some(s) = slope_of(&resample, eps_grid) {
            slopes.push(s);
        }
    }
    if slopes.len() < bootstrap / 2 {
        return Err(Error::TooFewSamples { needed: bootstrap / 2, got: slopes.len() });
    }
    slopes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lo = slopes[((slopes.len() as f64) * 0.025) as usize];
    let hi = slopes[(((slopes.len() as f64) * 0.975) as usize).min(slopes.len() - 1)];
    Ok(SlopeFit { slope, ci_low: lo, ci_high: hi })
}

/// Recomputes κ through the Schubert-distance route on a deterministic
/// audit fraction of the sample streams and returns the worst relative
/// disagreement with the angle route.
pub fn audit_consistency(
    variety: &VarietySpec,
    n_samples: usize,
    seed: u64,
    audit_every: usize,
) -> Result<f64> {
    let opts = KappaOpts::default();
    let n1 = variety.ambient_proj_dim() + 1;
    let mut worst: f64 = 0.0;
    let mut idx = 0;
    while idx < n_samples {
        let mut rng = substream_rng(seed, idx as u64);
        let l = grassmann::sample_uniform(n1, variety.codim() + 1, &mut rng);
        if let Ok(set) = crate::intersect::intersect(variety, &l) {
            for z in &set.points {
                let (Ok(k1), Ok(k3)) = (
                    condition::kappa_point(variety, &l, z, &opts),
                    condition::kappa_point_via_cnt(variety, &l, z, &opts).map(|c| c.kappa),
                ) else {
                    continue;
                };
                if k1.is_finite() && k3.is_finite() {
                    worst = worst.max((k1 - k3).abs() / k1);
                }
            }
        }
        idx += audit_every;
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variety::{conic, HomogeneousPoly};
    use crate::variety::VarietySpec as VS;

    #[test]
    fn hyperplane_samples_all_finite() {
        let plane = VS::hypersurface(
            HomogeneousPoly::from_terms(3, 1, &[(1.0, 0.0, &[0, 0, 1])]).unwrap(),
        )
        .unwrap();
        let samples = sample_kappa(&plane, 200, 3, 1).unwrap();
        assert!(samples.iter().all(|k| k.is_finite()));
        assert!(samples.iter().all(|&k| k >= 1.0));
    }

    #[test]
    fn conic_samples_bounded_below_by_one() {
        let samples = sample_kappa(&conic(), 500, 7, 1).unwrap();
        assert_eq!(samples.len(), 500);
        let finite = samples.iter().filter(|k| k.is_finite()).count();
        assert_eq!(finite, 500, "tangency is measure zero");
        assert!(samples.iter().all(|&k| k >= 1.0));
    }

    #[test]
    fn sampling_is_deterministic_and_thread_invariant() {
        let a = sample_kappa(&conic(), 300, 11, 1).unwrap();
        let b = sample_kappa(&conic(), 300, 11, 1).unwrap();
        assert_eq!(a, b);
        let c = sample_kappa(&conic(), 300, 11, 4).unwrap();
        assert_eq!(a, c, "thread count must not change the sample stream");
        let d = sample_kappa(&conic(), 300, 12, 1).unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn tail_probability_edges() {
        let samples = vec![1.0, 2.0, 5.0, 10.0];
        let (p, _) = tail_probability(&samples, 1.0).unwrap();
        assert_eq!(p, 1.0, "κ ≥ 1 always");
        let (p, _) = tail_probability(&samples, 1e-9).unwrap();
        assert_eq!(p, 0.0);
        let (p, (lo, hi)) = tail_probability(&samples, 0.2).unwrap();
        assert_eq!(p, 0.5);
        assert!(lo < 0.5 && 0.5 < hi);
        assert!(tail_probability(&[], 0.5).is_err());
        assert!(tail_probability(&samples, 1.5).is_err());
    }

    #[test]
    fn predicted_tail_values() {
        let conic_p = HurwitzParams { deg_z: 2, sectional_genus: 0, dim_z: 1, codim_z: 1 };
        assert!((predicted_tail(&conic_p, 0.1).unwrap() - 0.04).abs() < 1e-12);
        assert_eq!(predicted_tail(&conic_p, 0.0).unwrap(), 0.0);
        let tc = HurwitzParams { deg_z: 3, sectional_genus: 0, dim_z: 1, codim_z: 2 };
        assert!((predicted_tail(&tc, 0.05).unwrap() - 0.03).abs() < 1e-12);
    }

    #[test]
    fn expectation_report_cases() {
        let ones = vec![1.0; 150];
        let rep = expectation_report(&ones).unwrap();
        assert!(rep.mean_log_kappa.abs() < 1e-14);
        assert!(rep.jensen_gap_ok);
        assert!(expectation_report(&ones[..50]).is_err());

        let samples = sample_kappa(&conic(), 400, 5, 1).unwrap();
        let r1 = expectation_report(&samples).unwrap();
        let r2 = expectation_report(&samples).unwrap();
        assert_eq!(r1.mean_log_kappa, r2.mean_log_kappa);
        assert!(r1.jensen_gap_ok);
    }

    #[test]
    fn tail_estimate_monotone_and_deterministic() {
        let (est1, raw1) = estimate_tail(&conic(), 400, 9, &default_eps_grid(), 1).unwrap();
        let (est2, _) = estimate_tail(&conic(), 400, 9, &default_eps_grid(), 1).unwrap();
        assert_eq!(serde_json::to_string(&est1).unwrap(), serde_json::to_string(&est2).unwrap());
        assert_eq!(raw1.len(), 400);
        // nondecreasing in ε
        for w in est1.empirical_tail.windows(2) {
            assert!(w[0].estimate <= w[1].estimate + 1e-15);
        }
        assert_eq!(est1.ill_posed_hits, 0);
    }

    #[test]
    fn audit_angle_vs_cnt() {
        let worst = audit_consistency(&conic(), 200, 13, 50).unwrap();
        assert!(worst <= 1e-6, "audit disagreement {worst}");
    }
}
