//! Roots of binary forms via companion-matrix eigenvalues.
//!
//! A binary form g(u,v) = Σ_j c_j u^j v^(d−j) of degree d has exactly d roots
//! (u:v) in P¹ counted with multiplicity. The dehomogenization chart is chosen
//! to keep the leading coefficient maximal; degree drop in the chosen chart is
//! returned as the chart's point at infinity with the matching multiplicity.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative threshold below which trailing coefficients count as zero.
const TRIM_TOL: f64 = 1e-12;

fn companion_roots(monic_tail: &[Complex64]) -> Result<Vec<Complex64>> {
    // monic_tail = [a_0, …, a_{d-1}] for x^d + a_{d-1}x^{d-1} + … + a_0
    let d = monic_tail.len();
    if d == 0 {
        return Ok(Vec::new());
    }
    if d == 1 {
        return Ok(vec![-monic_tail[0]]);
    }
    let mut m = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -monic_tail[i];
    }
    // capped Schur iteration: the uncapped eigenvalue path can spin forever
    // on degenerate companions
    let schur = nalgebra::linalg::Schur::try_new(m, 1.0e-14, 100 * d.max(5))
        .ok_or(Error::EigenFailed { size: d })?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

fn poly_eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn poly_deriv_eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in (1..coeffs.len()).rev() {
        acc = acc * x + coeffs[j] * Complex64::new(j as f64, 0.0);
    }
    acc
}

fn newton_polish(coeffs: &[Complex64], mut x: Complex64) -> Complex64 {
    for _ in 0..3 {
        let p = poly_eval(coeffs, x);
        let dp = poly_deriv_eval(coeffs, x);
        if dp.norm() <= 1e-14 * p.norm().max(1.0) {
            break; // multiple root; leave the eigenvalue estimate alone
        }
        x -= p / dp;
    }
    x
}

/// All d projective roots (u : v) of the binary form with coefficients
/// `coeffs[j]` on u^j v^(d−j), as unit-norm pairs, multiplicities repeated.
pub fn binary_form_roots(coeffs: &[Complex64]) -> Result<Vec<(Complex64, Complex64)>> {
    if coeffs.is_empty() {
        return Err(Error::InvalidPolynomial("empty coefficient list".into()));
    }
    let d = coeffs.len() - 1;
    let maxc = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if maxc == 0.0 {
        return Err(Error::InvalidPolynomial("zero binary form has no root set".into()));
    }

    // Chart with the larger leading coefficient; g(u,1) for u-chart,
    // g(1,v) for v-chart (coefficients reversed).
    let u_chart = coeffs[d].norm() >= coeffs[0].norm();
    let chart: Vec<Complex64> =
        if u_chart { coeffs.to_vec() } else { coeffs.iter().rev().copied().collect() };

    let mut deg_eff = d;
    while deg_eff > 0 && chart[deg_eff].norm() <= TRIM_TOL * maxc {
        deg_eff -= 1;
    }
    // factor out exact zero roots at the chart origin; besides being faster,
    // this keeps degenerate companions (pure powers) away from the Schur
    // iteration and reports their multiplicity exactly
    let mut zero_mult = 0;
    while zero_mult < deg_eff && chart[zero_mult].norm() <= TRIM_TOL * maxc {
        zero_mult += 1;
    }

    let lead = chart[deg_eff];
    let tail: Vec<Complex64> = (zero_mult..deg_eff).map(|j| chart[j] / lead).collect();
    let finite = companion_roots(&tail)?;

    let mut out = Vec::with_capacity(d);
    let origin = if u_chart {
        (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    } else {
        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    };
    for _ in 0..zero_mult {
        out.push(origin);
    }
    for x in finite {
        let x = newton_polish(&chart[..=deg_eff], x);
        let scale = (1.0 + x.norm_sqr()).sqrt();
        let (u, v) = if u_chart {
            (x / scale, Complex64::new(1.0 / scale, 0.0))
        } else {
            (Complex64::new(1.0 / scale, 0.0), x / scale)
        };
        out.push((u, v));
    }
    // degree drop = roots at the chart's infinity point
    let inf = if u_chart {
        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    };
    for _ in deg_eff..d {
        out.push(inf);
    }
    Ok(out)
}

/// Evaluates the binary form at a projective parameter value.
pub fn binary_form_eval(coeffs: &[Complex64], u: Complex64, v: Complex64) -> Complex64 {
    let d = coeffs.len() - 1;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut up = vec![Complex64::new(1.0, 0.0); d + 1];
    let mut vp = vec![Complex64::new(1.0, 0.0); d + 1];
    for j in 1..=d {
        up[j] = up[j - 1] * u;
        vp[j] = vp[j - 1] * v;
    }
    for (j, &c) in coeffs.iter().enumerate() {
        acc += c * up[j] * vp[d - j];
    }
    acc
}
