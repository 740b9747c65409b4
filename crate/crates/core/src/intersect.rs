//! Intersections Z ∩ L: direct solves for the supported variety classes,
//! Newton correction against a kernel-represented subspace, witness-set
//! tracking along subspace paths, and transversality tests.
//!
//! Lines against hypersurfaces and hyperplanes against rational curves both
//! reduce to the roots of a degree-d binary form: substitute the subspace
//! parametrization into the defining equation (pullback through the curve for
//! the second case) and read the coefficients off d+1 evaluations at roots of
//! unity, which is an exact interpolation with a unitary Vandermonde.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grassmann::{self, Subspace};
use crate::linalg::{self, CMat, CVec};
use crate::roots;
use crate::variety::{self, HomogeneousPoly, ProjPoint, VarietySpec};

/// Chordal clustering distance for multiplicity detection.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Angles at or below this count as nontransversal.
pub const ANGLE_TOL: f64 = 1e-10;
/// Newton target residual.
pub const NEWTON_TOL: f64 = 1e-12;

/// The finite intersection Z ∩ L with per-point diagnostics.
#[derive(Debug, Clone)]
pub struct IntersectionSet {
    pub points: Vec<ProjPoint>,
    pub multiplicities: Vec<usize>,
    pub residuals: Vec<f64>,
    pub transversal: Vec<bool>,
}

impl IntersectionSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.multiplicities.iter().sum()
    }
}

/// A path t ∈ [0,1] of subspaces in kernel representation: A(t) is the
/// row-reorthonormalized linear interpolation of the endpoint matrices.
#[derive(Debug, Clone)]
pub struct SubspacePath {
    start: CMat,
    end: CMat,
}

impl SubspacePath {
    pub fn new(start: CMat, end: CMat) -> Result<Self> {
        if start.shape() != end.shape() {
            return Err(Error::DimensionMismatch {
                context: format!("path endpoints {:?} vs {:?}", start.shape(), end.shape()),
            });
        }
        // endpoints must be full rank
        let _ = linalg::orthonormalize(&start.adjoint())?;
        let _ = linalg::orthonormalize(&end.adjoint())?;
        Ok(Self { start, end })
    }

    /// A(t) with rows re-orthonormalized (the kernel only depends on the row
    /// span, and orthonormal rows keep the Newton systems well scaled).
    pub fn matrix_at(&self, t: f64) -> Result<CMat> {
        let raw = &self.start * Complex64::new(1.0 - t, 0.0) + &self.end * Complex64::new(t, 0.0);
        let q = linalg::orthonormalize(&raw.adjoint())?;
        Ok(q.adjoint())
    }
}

/// ker A as a subspace: the orthogonal complement of the conjugated row span.
pub fn kernel_subspace(a: &CMat) -> Result<Subspace> {
    let col = Subspace::from_span(&a.adjoint())?;
    Ok(grassmann::complement(&col))
}

// ── binary-form pullbacks ───────────────────────────────────────────

/// Coefficients of g(u,v) = f(u·b₁ + v·b₂) on u^j v^(d−j): interpolate at
/// the (d+1)-st roots of unity (v = 1 chart), an exactly conditioned DFT.
fn restrict_to_pencil(f: &HomogeneousPoly, b1: &CVec, b2: &CVec) -> Vec<Complex64> {
    let d = f.degree() as usize;
    let n = d + 1;
    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
        let point = CVec::from_iterator(b1.len(), b1.iter().zip(b2.iter()).map(|(x, y)| w * x + y));
        values.push(f.eval(&point));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    for (j, cj) in coeffs.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, val) in values.iter().enumerate() {
            let w = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64);
            acc += val * w;
        }
        *cj = acc / Complex64::new(n as f64, 0.0);
    }
    coeffs
}

fn containment_threshold(f: &HomogeneousPoly) -> f64 {
    // restricted values live on points of norm ≤ √2
    1e-10 * f.coefficient_norm() * 2.0_f64.powf(f.degree() as f64 / 2.0)
}

// ── direct intersections ────────────────────────────────────────────

/// Z ∩ L for a hypersurface {f = 0} and a projective line L (dim L̂ = 2):
/// roots of the restricted binary form, Newton-refined, clustered into
/// multiplicities at the chordal tolerance.
pub fn line_hypersurface(f: &HomogeneousPoly, l: &Subspace) -> Result<IntersectionSet> {
    if l.dim() != 2 {
        return Err(Error::DimensionMismatch {
            context: format!("line_hypersurface needs dim L̂ = 2, got {}", l.dim()),
        });
    }
    if f.num_vars() != l.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: "polynomial and subspace ambient dimensions differ".into(),
        });
    }
    let b1 = l.basis().column(0).into_owned();
    let b2 = l.basis().column(1).into_owned();
    let coeffs = restrict_to_pencil(f, &b1, &b2);
    let maxc = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if maxc <= containment_threshold(f) {
        return Err(Error::PositiveDimensional);
    }

    let variety = VarietySpec::hypersurface(f.clone())?;
    let a = kernel_rep(l);
    let mut raw_points = Vec::new();
    for (u, v) in roots::binary_form_roots(&coeffs)? {
        let rep = CVec::from_iterator(b1.len(), b1.iter().zip(b2.iter()).map(|(x, y)| u * x + v * y));
        let z0 = ProjPoint::new(rep)?;
        // refine where possible; tangential roots keep the companion estimate
        let z = match newton_refine(&variety, &a, &z0, 30) {
            Ok(out) if out.converged => out.point,
            _ => z0,
        };
        raw_points.push(z);
    }
    assemble_set(&variety, l, raw_points)
}

/// Z ∩ H for a parametrized rational curve and a hyperplane H (dim Ĥ = n):
/// roots of the pulled-back binary form ℓ∘φ mapped through φ.
pub fn hyperplane_curve(variety: &VarietySpec, h: &Subspace) -> Result<IntersectionSet> {
    let VarietySpec::ParamCurve { components } = variety else {
        return Err(Error::Capability("hyperplane_curve needs a parametrized curve".into()));
    };
    let n1 = variety.ambient_proj_dim() + 1;
    if h.dim() != n1 - 1 || h.ambient_dim() != n1 {
        return Err(Error::DimensionMismatch {
            context: format!("hyperplane in P^{} needs dim Ĥ = {}", n1 - 1, n1 - 1),
        });
    }
    // Ĥ = {x : ⟨x, w⟩ = 0}, so the linear form has coefficients conj(w)
    let w = grassmann::complement(h).basis().column(0).into_owned();
    let d = variety.degree() as usize;
    let mut pullback = vec![Complex64::new(0.0, 0.0); d + 1];
    for (j, comp) in components.iter().enumerate() {
        let cs = comp_coeffs(comp);
        for (k, c) in cs.iter().enumerate() {
            pullback[k] += w[j].conj() * c;
        }
    }
    let maxc = pullback.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let scale: f64 = components.iter().map(|c| c.coefficient_norm()).sum();
    if maxc <= 1e-10 * scale {
        return Err(Error::PositiveDimensional);
    }
    let mut raw_points = Vec::new();
    for (u, v) in roots::binary_form_roots(&pullback)? {
        let img = variety::curve_image(components, u, v);
        raw_points.push(ProjPoint::new(img)?);
    }
    assemble_set(variety, h, raw_points)
}

fn comp_coeffs(p: &HomogeneousPoly) -> Vec<Complex64> {
    let d = p.degree() as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
    for (exps, c) in p.terms() {
        coeffs[exps[0] as usize] = *c;
    }
    coeffs
}

/// Dispatch to the direct solver matching the variety class and subspace
/// dimension; the only supported shapes are hypersurface ∩ line and
/// parametrized curve ∩ hyperplane.
pub fn intersect(variety: &VarietySpec, l: &Subspace) -> Result<IntersectionSet> {
    let n1 = variety.ambient_proj_dim() + 1;
    if l.ambient_dim() != n1 {
        return Err(Error::DimensionMismatch {
            context: format!("subspace ambient {} vs variety ambient {}", l.ambient_dim(), n1),
        });
    }
    match variety {
        VarietySpec::Hypersurface { f } if l.dim() == 2 => line_hypersurface(f, l),
        VarietySpec::ParamCurve { .. } if l.dim() == n1 - 1 => hyperplane_curve(variety, l),
        _ => Err(Error::Capability(format!(
            "no direct solver for this variety class with dim L̂ = {}; supply a witness set",
            l.dim()
        ))),
    }
}

fn assemble_set(
    variety: &VarietySpec,
    l: &Subspace,
    raw_points: Vec<ProjPoint>,
) -> Result<IntersectionSet> {
    // greedy chordal clustering
    let mut reps: Vec<ProjPoint> = Vec::new();
    let mut mult: Vec<usize> = Vec::new();
    for p in raw_points {
        let mut joined = false;
        for (i, r) in reps.iter().enumerate() {
            if r.distance(&p) <= CLUSTER_TOL {
                mult[i] += 1;
                joined = true;
                break;
            }
        }
        if !joined {
            reps.push(p);
            mult.push(1);
        }
    }
    let mut residuals = Vec::with_capacity(reps.len());
    let mut transversal = Vec::with_capacity(reps.len());
    for r in &reps {
        residuals.push(variety.residuals(r).into_iter().fold(0.0, f64::max));
        let flag = match is_transversal(variety, l, r, ANGLE_TOL) {
            Ok(t) => t.transversal,
            Err(_) => false,
        };
        transversal.push(flag);
    }
    Ok(IntersectionSet { points: reps, multiplicities: mult, residuals, transversal })
}

/// Kernel representation of L: rows spanning the conjugated orthogonal
/// complement, so that A·z = 0 ⟺ z ∈ L̂.
pub fn kernel_rep(l: &Subspace) -> CMat {
    grassmann::complement(l).basis().adjoint().conjugate().transpose().adjoint()
}

// ── Newton correction ───────────────────────────────────────────────

/// Result of a Newton correction run.
#[derive(Debug, Clone)]
pub struct RefineOutcome {
    pub point: ProjPoint,
    /// Scaled residual of the square local system at the returned point.
    pub residual: f64,
    pub iterations: usize,
    /// False when the iteration cap was reached away from the target
    /// residual; the point then holds the last iterate.
    pub converged: bool,
}

/// Newton corrector for the square local system {f = 0, A·z = 0} in the
/// affine chart ⟨z, z₀⟩ = 1. For parametrized curves the correction runs in
/// the parameter chart instead. A singular Newton matrix (nontransversal
/// intersection) is an error; hitting the iteration cap is reported through
/// the `converged` flag.
pub fn newton_refine(
    variety: &VarietySpec,
    a: &CMat,
    z0: &ProjPoint,
    max_iter: usize,
) -> Result<RefineOutcome> {
    let n1 = variety.ambient_proj_dim() + 1;
    if a.ncols() != n1 || z0.ambient_dim() != n1 {
        return Err(Error::DimensionMismatch {
            context: format!("kernel matrix {}x{} in ambient C^{n1}", a.nrows(), a.ncols()),
        });
    }
    if a.nrows() != variety.dim() {
        return Err(Error::DimensionMismatch {
            context: format!("kernel matrix needs m = {} rows, got {}", variety.dim(), a.nrows()),
        });
    }
    match variety {
        VarietySpec::Hypersurface { .. } | VarietySpec::CompleteIntersection { .. } => {
            refine_equational(variety, a, z0, max_iter)
        }
        VarietySpec::ParamCurve { components } => refine_on_curve(components, a, z0, max_iter),
    }
}

fn refine_equational(
    variety: &VarietySpec,
    a: &CMat,
    z0: &ProjPoint,
    max_iter: usize,
) -> Result<RefineOutcome> {
    let fs = variety.equations().expect("equational classes only");
    let n1 = variety.ambient_proj_dim() + 1;
    let n = n1 - 1;
    let s = variety.codim();
    let zc = z0.coords();
    let zmat = CMat::from_column_slice(n1, 1, zc.as_slice());
    let chart = linalg::complement_cols(&zmat); // (n+1)×n, ⊥ z0
    let fscales: Vec<f64> = fs.iter().map(|f| f.coefficient_norm()).collect();
    // balanced row scales for the linear part
    let arows: Vec<f64> = (0..a.nrows())
        .map(|i| a.row(i).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE))
        .collect();

    let mut w = CVec::zeros(n);
    let mut residual = f64::INFINITY;
    for iter in 0..=max_iter {
        let zhat = zc + &chart * &w;
        let mut fval = CVec::zeros(n);
        for (i, f) in fs.iter().enumerate() {
            fval[i] = f.eval(&zhat) / Complex64::new(fscales[i], 0.0);
        }
        let lin = a * &zhat;
        for i in 0..a.nrows() {
            fval[s + i] = lin[i] / Complex64::new(arows[i], 0.0);
        }
        residual = fval.norm();
        // Jacobian in chart coordinates; checked for singularity even at an
        // already-converged point, because the corrector must not validate a
        // nontransversal intersection
        let mut jac = CMat::zeros(n, n);
        for (i, f) in fs.iter().enumerate() {
            let g = f.gradient_at(&zhat);
            let row = CMat::from_fn(1, n1, |_, k| g[k] / Complex64::new(fscales[i], 0.0)) * &chart;
            for k in 0..n {
                jac[(i, k)] = row[(0, k)];
            }
        }
        let alin = a * &chart;
        for i in 0..a.nrows() {
            for k in 0..n {
                jac[(s + i, k)] = alin[(i, k)] / Complex64::new(arows[i], 0.0);
            }
        }
        let dec = linalg::svd(&jac)?;
        let smax = dec.singular_values[0];
        let smin = *dec.singular_values.last().unwrap();
        if !(smin > 1e-14 * smax.max(f64::MIN_POSITIVE)) {
            return Err(Error::NewtonSingular);
        }
        if residual <= NEWTON_TOL {
            return Ok(RefineOutcome {
                point: ProjPoint::new(zhat)?,
                residual,
                iterations: iter,
                converged: true,
            });
        }
        if iter == max_iter {
            break;
        }
        let r = dec.singular_values.len();
        let inv = CMat::from_fn(r, r, |i, j| {
            if i == j {
                Complex64::new(1.0 / dec.singular_values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let delta = &dec.right_factor * inv * dec.left_factor.adjoint() * (-fval);
        if delta.norm() > 10.0 {
            // far outside the chart: treat as divergence
            let zhat = zc + &chart * &w;
            return Ok(RefineOutcome {
                point: ProjPoint::new(zhat)?,
                residual,
                iterations: iter,
                converged: false,
            });
        }
        w += delta;
    }
    let zhat = zc + &chart * &w;
    Ok(RefineOutcome { point: ProjPoint::new(zhat)?, residual, iterations: max_iter, converged: false })
}

fn refine_on_curve(
    components: &[HomogeneousPoly],
    a: &CMat,
    z0: &ProjPoint,
    max_iter: usize,
) -> Result<RefineOutcome> {
    // pullback of the single linear equation through the parametrization
    let d = components[0].degree() as usize;
    let mut pullback = vec![Complex64::new(0.0, 0.0); d + 1];
    for (j, comp) in components.iter().enumerate() {
        let cs = comp_coeffs(comp);
        for (k, c) in cs.iter().enumerate() {
            pullback[k] += a[(0, j)] * c;
        }
    }
    let scale: f64 = pullback.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Err(Error::PositiveDimensional);
    }
    let (u0, v0) = variety::curve_preimage(components, z0)?;
    // dehomogenize around the larger coordinate
    let u_chart = u0.norm() >= v0.norm();
    let chart: Vec<Complex64> =
        if u_chart { pullback.iter().rev().copied().collect() } else { pullback.clone() };
    // chart[k] multiplies y^k where y is the affine parameter
    let mut y = if u_chart { v0 / u0 } else { u0 / v0 };
    let eval = |y: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in chart.iter().rev() {
            acc = acc * y + c;
        }
        acc
    };
    let deriv = |y: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (1..chart.len()).rev() {
            acc = acc * y + chart[k] * Complex64::new(k as f64, 0.0);
        }
        acc
    };
    let mut residual = f64::INFINITY;
    for iter in 0..=max_iter {
        let p = eval(y);
        residual = p.norm() / (scale * (1.0 + y.norm_sqr()).powf(d as f64 / 2.0));
        let dp = deriv(y);
        // a vanishing derivative at the root is a tangential intersection
        if dp.norm() <= 1e-14 * scale {
            return Err(Error::NewtonSingular);
        }
        if residual <= NEWTON_TOL {
            let (u, v) = if u_chart { (Complex64::new(1.0, 0.0), y) } else { (y, Complex64::new(1.0, 0.0)) };
            let img = variety::curve_image(components, u, v);
            return Ok(RefineOutcome {
                point: ProjPoint::new(img)?,
                residual,
                iterations: iter,
                converged: true,
            });
        }
        if iter == max_iter {
            break;
        }
        y -= p / dp;
    }
    let (u, v) = if u_chart { (Complex64::new(1.0, 0.0), y) } else { (y, Complex64::new(1.0, 0.0)) };
    let img = variety::curve_image(components, u, v);
    Ok(RefineOutcome { point: ProjPoint::new(img)?, residual, iterations: max_iter, converged: false })
}

// ── transversality ──────────────────────────────────────────────────

/// Outcome of a pointwise transversality test.
#[derive(Debug, Clone, Copy)]
pub struct Transversality {
    pub transversal: bool,
    /// Minimum angle between T_zZ and T_zL; NaN when z is singular.
    pub min_angle: f64,
    pub singular: bool,
}

/// T_zZ + T_zL = T_zPⁿ ⟺ the minimum tangent angle is positive. Singular
/// points are reported nontransversal with the `singular` flag set.
pub fn is_transversal(
    variety: &VarietySpec,
    l: &Subspace,
    z: &ProjPoint,
    tol: f64,
) -> Result<Transversality> {
    if !variety::is_smooth(variety, z, variety::RESIDUAL_TOL)? {
        return Ok(Transversality { transversal: false, min_angle: f64::NAN, singular: true });
    }
    let tz = variety::tangent_space(variety, z)?;
    let tl = variety::tangent_space_of_subspace(l, z)?;
    let angle = grassmann::min_angle(&tz, &tl)?;
    Ok(Transversality { transversal: angle > tol, min_angle: angle, singular: false })
}

// ── witness tracking ────────────────────────────────────────────────

/// Tracked witness set plus per-point condition summaries.
#[derive(Debug, Clone)]
pub struct TrackOutcome {
    pub end: IntersectionSet,
    /// Largest 1/sin(minimum tangent angle) seen along each point's path.
    pub max_kappa: Vec<f64>,
}

fn local_kappa_estimate(variety: &VarietySpec, l: &Subspace, z: &ProjPoint) -> f64 {
    let Ok(tz) = variety::tangent_space(variety, z) else { return f64::INFINITY };
    let Ok(tl) = variety::tangent_space_of_subspace(l, z) else { return f64::INFINITY };
    match grassmann::min_angle(&tz, &tl) {
        Ok(angle) if angle > ANGLE_TOL => 1.0 / angle.sin(),
        _ => f64::INFINITY,
    }
}

/// Advances one witness point from t_from to t_to, bisecting the sub-step
/// whenever the corrector fails; returns the point at t_to and the largest
/// condition estimate seen at an accepted parameter.
fn advance_point(
    variety: &VarietySpec,
    path: &SubspacePath,
    mut z: ProjPoint,
    t_from: f64,
    t_to: f64,
) -> Result<(ProjPoint, f64)> {
    let mut t = t_from;
    let mut step = t_to - t_from;
    let mut max_kappa: f64 = 0.0;
    while t < t_to - 1e-15 {
        let t_try = (t + step).min(t_to);
        let a = path.matrix_at(t_try)?;
        let accepted = match newton_refine(variety, &a, &z, 30) {
            Ok(out) if out.converged => Some(out.point),
            _ => None,
        };
        match accepted {
            Some(p) => {
                z = p;
                t = t_try;
                let l = kernel_subspace(&a)?;
                max_kappa = max_kappa.max(local_kappa_estimate(variety, &l, &z));
                step = (step * 2.0).min(t_to - t_from);
            }
            None => {
                step *= 0.5;
                if step < 1e-10 {
                    let l = kernel_subspace(&path.matrix_at(t)?)?;
                    let kappa_estimate = local_kappa_estimate(variety, &l, &z);
                    return Err(Error::PathFailure { t: t_try, kappa_estimate });
                }
            }
        }
    }
    Ok((z, max_kappa))
}

/// Predictor–corrector continuation of a witness set along a subspace path:
/// each point reuses its previous position as predictor and corrects with
/// [`newton_refine`], bisecting the step on failure. Step underflow below
/// 1e−10 aborts with the blocking parameter and the local condition estimate.
/// Two points landing on each other at a shared grid parameter means a root
/// was lost to the tangency locus and also aborts; both are the diagnostics
/// for paths passing near or through ill-posed subspaces.
pub fn track_witness(
    variety: &VarietySpec,
    path: &SubspacePath,
    start: &IntersectionSet,
    steps: usize,
) -> Result<TrackOutcome> {
    if steps == 0 {
        return Err(Error::Capability("steps must be positive".into()));
    }
    if start.transversal.iter().any(|t| !t) {
        return Err(Error::Nontransversal("start witness set has a nontransversal point".into()));
    }
    let mut end_points = start.points.clone();
    let mut max_kappas = {
        let l0 = kernel_subspace(&path.matrix_at(0.0)?)?;
        end_points
            .iter()
            .map(|z| local_kappa_estimate(variety, &l0, z))
            .collect::<Vec<_>>()
    };
    for k in 1..=steps {
        let t_from = (k - 1) as f64 / steps as f64;
        let t_to = k as f64 / steps as f64;
        for (i, z) in end_points.iter_mut().enumerate() {
            let (moved, kappa) = advance_point(variety, path, z.clone(), t_from, t_to)?;
            *z = moved;
            max_kappas[i] = max_kappas[i].max(kappa);
        }
        for i in 0..end_points.len() {
            for j in i + 1..end_points.len() {
                if end_points[i].distance(&end_points[j]) < CLUSTER_TOL {
                    let l = kernel_subspace(&path.matrix_at(t_to)?)?;
                    let kappa_estimate = local_kappa_estimate(variety, &l, &end_points[i]);
                    return Err(Error::PathFailure { t: t_to, kappa_estimate });
                }
            }
        }
    }
    let l_end = kernel_subspace(&path.matrix_at(1.0)?)?;
    let mut residuals = Vec::with_capacity(end_points.len());
    let mut transversal = Vec::with_capacity(end_points.len());
    for p in &end_points {
        residuals.push(variety.residuals(p).into_iter().fold(0.0, f64::max));
        let flag = match is_transversal(variety, &l_end, p, ANGLE_TOL) {
            Ok(t) => t.transversal,
            Err(_) => false,
        };
        transversal.push(flag);
    }
    Ok(TrackOutcome {
        end: IntersectionSet {
            points: end_points,
            multiplicities: start.multiplicities.clone(),
            residuals,
            transversal,
        },
        max_kappa: max_kappas,
    })
}

// ── JSON wire format ────────────────────────────────────────────────

#[derive(Serialize, Deserialize)]
struct IntersectionSetWire {
    points: Vec<Vec<[f64; 2]>>,
    multiplicities: Vec<usize>,
    residuals: Vec<f64>,
    transversal: Vec<bool>,
}

impl Serialize for IntersectionSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        IntersectionSetWire {
            points: self
                .points
                .iter()
                .map(|p| p.coords().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            multiplicities: self.multiplicities.clone(),
            residuals: self.residuals.clone(),
            transversal: self.transversal.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntersectionSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = IntersectionSetWire::deserialize(deserializer)?;
        let k = wire.points.len();
        if wire.multiplicities.len() != k || wire.residuals.len() != k || wire.transversal.len() != k
        {
            return Err(D::Error::custom("per-point arrays have inconsistent lengths"));
        }
        let points = wire
            .points
            .iter()
            .map(|p| {
                ProjPoint::from_slice(&p.iter().map(|&[re, im]| (re, im)).collect::<Vec<_>>())
                    .map_err(|e| D::Error::custom(e.to_string()))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntersectionSet {
            points,
            multiplicities: wire.multiplicities,
            residuals: wire.residuals,
            transversal: wire.transversal,
        })
    }
}
