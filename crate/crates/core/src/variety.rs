//! Projective varieties Z ⊂ Pⁿ: defining data, evaluation, Jacobians,
//! tangent spaces, smoothness and transversality tests, and the N-matrix of
//! the normal form N = −(∂_X f)⁻¹ ∂_Y f at a point z ∈ Z ∩ L.
//!
//! Three input classes are supported: hypersurfaces (m = n−1), complete
//! intersections cut by s = n−m equations of full Jacobian rank near the
//! queried points, and rational curves P¹ → Pⁿ given by n+1 binary forms of
//! a common degree (m = 1).

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grassmann::Subspace;
use crate::linalg::{self, hcat, hinner, CMat, CVec};
use crate::roots;

/// Default relative tolerance for membership and smoothness decisions.
pub const RESIDUAL_TOL: f64 = 1e-8;

// ── polynomials ─────────────────────────────────────────────────────

/// Homogeneous polynomial in `num_vars` variables, sparse exponent map.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPoly {
    num_vars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl HomogeneousPoly {
    pub fn new(
        num_vars: usize,
        degree: u32,
        term_list: impl IntoIterator<Item = (Vec<u32>, Complex64)>,
    ) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (exps, coeff) in term_list {
            if exps.len() != num_vars {
                return Err(Error::InvalidPolynomial(format!(
                    "exponent vector length {} != num_vars {num_vars}",
                    exps.len()
                )));
            }
            if exps.iter().sum::<u32>() != degree {
                return Err(Error::InvalidPolynomial(format!(
                    "term {exps:?} does not have degree {degree}"
                )));
            }
            if coeff.norm() > 0.0 {
                *terms.entry(exps).or_insert(Complex64::new(0.0, 0.0)) += coeff;
            }
        }
        terms.retain(|_, c| c.norm() > 0.0);
        if terms.is_empty() {
            return Err(Error::InvalidPolynomial("polynomial has no nonzero term".into()));
        }
        Ok(Self { num_vars, degree, terms })
    }

    /// Convenience constructor from (coeff_re, coeff_im, exponents) triples.
    pub fn from_terms(num_vars: usize, degree: u32, terms: &[(f64, f64, &[u32])]) -> Result<Self> {
        Self::new(
            num_vars,
            degree,
            terms.iter().map(|(re, im, e)| (e.to_vec(), Complex64::new(*re, *im))),
        )
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Complex64)> {
        self.terms.iter()
    }

    /// √Σ|c|², the scale used for relative residuals.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, x: &CVec) -> Complex64 {
        debug_assert_eq!(x.len(), self.num_vars);
        let mut acc = Complex64::new(0.0, 0.0);
        for (exps, coeff) in &self.terms {
            let mut t = *coeff;
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    t *= x[i].powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Gradient (∂₀f, …, ∂ₙf) at x.
    pub fn gradient_at(&self, x: &CVec) -> CVec {
        let mut g = CVec::zeros(self.num_vars);
        for (exps, coeff) in &self.terms {
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut t = *coeff * Complex64::new(e as f64, 0.0);
                for (j, &ej) in exps.iter().enumerate() {
                    let p = if j == i { ej - 1 } else { ej };
                    if p > 0 {
                        t *= x[j].powu(p);
                    }
                }
                g[i] += t;
            }
        }
        g
    }
}

/// Coefficients of a binary form on the monomials u^j v^(d−j), j = 0..d.
pub(crate) fn binary_coeffs(p: &HomogeneousPoly) -> Vec<Complex64> {
    debug_assert_eq!(p.num_vars, 2);
    let d = p.degree as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
    for (exps, c) in &p.terms {
        coeffs[exps[0] as usize] = *c;
    }
    coeffs
}

// ── points ──────────────────────────────────────────────────────────

/// A point of Pⁿ held as a unit-norm representative in C^(n+1).
#[derive(Debug, Clone)]
pub struct ProjPoint {
    coords: CVec,
}

impl ProjPoint {
    pub fn new(v: CVec) -> Result<Self> {
        let n = v.norm();
        if !(n.is_finite() && n > 1e-300) {
            return Err(Error::InvalidVariety(
                "projective point needs a nonzero representative".into(),
            ));
        }
        Ok(Self { coords: v / Complex64::new(n, 0.0) })
    }

    pub fn from_slice(parts: &[(f64, f64)]) -> Result<Self> {
        Self::new(CVec::from_iterator(
            parts.len(),
            parts.iter().map(|&(re, im)| Complex64::new(re, im)),
        ))
    }

    pub fn coords(&self) -> &CVec {
        &self.coords
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    /// Chordal (Fubini–Study) distance, insensitive to phase.
    pub fn distance(&self, other: &ProjPoint) -> f64 {
        crate::grassmann::fubini_study_distance(&self.coords, &other.coords)
    }
}

// ── varieties ───────────────────────────────────────────────────────

/// Defining data for the variety Z ⊂ Pⁿ.
#[derive(Debug, Clone)]
pub enum VarietySpec {
    /// m = n−1, s = 1.
    Hypersurface { f: HomogeneousPoly },
    /// m = n−s, cut by s equations of Jacobian rank s near the sample point.
    CompleteIntersection { fs: Vec<HomogeneousPoly>, sample: ProjPoint },
    /// Rational curve P¹ → Pⁿ, m = 1, s = n−1; components of equal degree
    /// with no common root.
    ParamCurve { components: Vec<HomogeneousPoly> },
}

impl VarietySpec {
    pub fn hypersurface(f: HomogeneousPoly) -> Result<Self> {
        if f.num_vars() < 3 {
            return Err(Error::InvalidVariety("hypersurface needs ambient P^n with n >= 2".into()));
        }
        Ok(Self::Hypersurface { f })
    }

    pub fn complete_intersection(fs: Vec<HomogeneousPoly>, sample: ProjPoint) -> Result<Self> {
        if fs.is_empty() {
            return Err(Error::InvalidVariety("no equations given".into()));
        }
        let nv = fs[0].num_vars();
        if fs.iter().any(|f| f.num_vars() != nv) {
            return Err(Error::InvalidVariety("equations disagree on variable count".into()));
        }
        let s = fs.len();
        if s + 1 >= nv {
            return Err(Error::InvalidVariety(format!(
                "{s} equations in P^{} leave no positive dimension",
                nv - 1
            )));
        }
        if sample.ambient_dim() != nv {
            return Err(Error::InvalidVariety("sample point dimension mismatch".into()));
        }
        let spec = Self::CompleteIntersection { fs, sample: sample.clone() };
        // the stored sample anchors the rank check: residuals ~0, Jacobian rank s
        let residuals = spec.residuals(&sample);
        if residuals.iter().any(|&r| r > RESIDUAL_TOL) {
            return Err(Error::InvalidVariety(format!(
                "sample point is not on the variety (residuals {residuals:?})"
            )));
        }
        let j = jacobian(&spec, &sample)?;
        let rank = linalg::svd(&j)?.rank(RESIDUAL_TOL);
        if rank != s {
            return Err(Error::InvalidVariety(format!(
                "Jacobian rank {rank} != {s} at the sample point"
            )));
        }
        Ok(spec)
    }

    pub fn param_curve(components: Vec<HomogeneousPoly>) -> Result<Self> {
        if components.len() < 3 {
            return Err(Error::InvalidVariety("curve needs ambient P^n with n >= 2".into()));
        }
        if components.iter().any(|c| c.num_vars() != 2) {
            return Err(Error::InvalidVariety("curve components must be binary forms".into()));
        }
        let d = components[0].degree();
        if components.iter().any(|c| c.degree() != d) {
            return Err(Error::InvalidVariety("curve components must share one degree".into()));
        }
        // A common root of all components is a base point of the map, i.e. a
        // common binary-form factor; found through the roots of any nonzero
        // component rather than a numerically fragile explicit GCD.
        let coeff_lists: Vec<Vec<Complex64>> = components.iter().map(binary_coeffs).collect();
        let lead = coeff_lists
            .iter()
            .position(|c| c.iter().any(|x| x.norm() > 0.0))
            .ok_or_else(|| Error::InvalidVariety("all components vanish".into()))?;
        let scale: f64 = components.iter().map(|c| c.coefficient_norm()).sum();
        for (u, v) in roots::binary_form_roots(&coeff_lists[lead])? {
            let all_vanish = coeff_lists
                .iter()
                .all(|c| roots::binary_form_eval(c, u, v).norm() < 1e-8 * scale.max(1.0));
            if all_vanish {
                return Err(Error::InvalidVariety(
                    "components share a common root (common factor)".into(),
                ));
            }
        }
        Ok(Self::ParamCurve { components })
    }

    /// Projective ambient dimension n.
    pub fn ambient_proj_dim(&self) -> usize {
        match self {
            Self::Hypersurface { f } => f.num_vars() - 1,
            Self::CompleteIntersection { fs, .. } => fs[0].num_vars() - 1,
            Self::ParamCurve { components } => components.len() - 1,
        }
    }

    /// dim Z = m.
    pub fn dim(&self) -> usize {
        match self {
            Self::Hypersurface { .. } => self.ambient_proj_dim() - 1,
            Self::CompleteIntersection { fs, .. } => self.ambient_proj_dim() - fs.len(),
            Self::ParamCurve { .. } => 1,
        }
    }

    /// codim Z = s = n − m.
    pub fn codim(&self) -> usize {
        self.ambient_proj_dim() - self.dim()
    }

    pub fn degree(&self) -> u32 {
        match self {
            Self::Hypersurface { f } => f.degree(),
            Self::CompleteIntersection { fs, .. } => fs.iter().map(|f| f.degree()).product(),
            Self::ParamCurve { components } => components[0].degree(),
        }
    }

    pub fn equations(&self) -> Option<&[HomogeneousPoly]> {
        match self {
            Self::Hypersurface { f } => Some(std::slice::from_ref(f)),
            Self::CompleteIntersection { fs, .. } => Some(fs),
            Self::ParamCurve { .. } => None,
        }
    }

    /// Relative residuals |f_i(z)|/‖f_i‖ (equational) or the chordal distance
    /// to the curve (parametrized).
    pub fn residuals(&self, z: &ProjPoint) -> Vec<f64> {
        match self {
            Self::Hypersurface { .. } | Self::CompleteIntersection { .. } => self
                .equations()
                .unwrap()
                .iter()
                .map(|f| f.eval(z.coords()).norm() / f.coefficient_norm())
                .collect(),
            Self::ParamCurve { components } => match curve_preimage_best(components, z) {
                Some((_, _, d)) => vec![d],
                None => vec![f64::INFINITY],
            },
        }
    }

    pub fn is_on(&self, z: &ProjPoint, tol: f64) -> bool {
        self.residuals(z).iter().all(|&r| r <= tol)
    }
}

/// Evaluates one defining polynomial at a projective point.
pub fn eval(f: &HomogeneousPoly, z: &ProjPoint) -> Result<Complex64> {
    if f.num_vars() != z.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: format!("poly in {} vars at point in C^{}", f.num_vars(), z.ambient_dim()),
        });
    }
    Ok(f.eval(z.coords()))
}

/// Jacobian of the defining equations at z, one gradient per row (s×(n+1)).
/// Parametrized curves carry no equations; use [`tangent_space`] instead.
pub fn jacobian(variety: &VarietySpec, z: &ProjPoint) -> Result<CMat> {
    let fs = variety.equations().ok_or_else(|| {
        Error::Capability("parametrized curve has no Jacobian; use tangent_space".into())
    })?;
    let n1 = variety.ambient_proj_dim() + 1;
    if z.ambient_dim() != n1 {
        return Err(Error::DimensionMismatch {
            context: format!("point in C^{} vs ambient C^{n1}", z.ambient_dim()),
        });
    }
    let mut j = CMat::zeros(fs.len(), n1);
    for (i, f) in fs.iter().enumerate() {
        let g = f.gradient_at(z.coords());
        for k in 0..n1 {
            j[(i, k)] = g[k];
        }
    }
    Ok(j)
}

fn check_on_variety(variety: &VarietySpec, z: &ProjPoint, tol: f64) -> Result<()> {
    let residuals = variety.residuals(z);
    if residuals.iter().any(|&r| r > tol) {
        return Err(Error::PointNotOnVariety { residuals });
    }
    Ok(())
}

// ── parametrized-curve helpers ──────────────────────────────────────

pub(crate) fn curve_image(components: &[HomogeneousPoly], u: Complex64, v: Complex64) -> CVec {
    CVec::from_iterator(
        components.len(),
        components.iter().map(|c| roots::binary_form_eval(&binary_coeffs(c), u, v)),
    )
}

/// Partial derivatives (∂φ/∂u, ∂φ/∂v) at the parameter point.
fn curve_partials(components: &[HomogeneousPoly], u: Complex64, v: Complex64) -> (CVec, CVec) {
    let n1 = components.len();
    let mut du = CVec::zeros(n1);
    let mut dv = CVec::zeros(n1);
    for (i, comp) in components.iter().enumerate() {
        for (exps, c) in &comp.terms {
            let (a, b) = (exps[0], exps[1]);
            if a > 0 {
                du[i] += c * Complex64::new(a as f64, 0.0) * u.powu(a - 1) * v.powu(b);
            }
            if b > 0 {
                dv[i] += c * Complex64::new(b as f64, 0.0) * u.powu(a) * v.powu(b - 1);
            }
        }
    }
    (du, dv)
}

/// The parameter (u:v) whose image is closest to z, with the chordal
/// distance achieved; None if every candidate construction degenerates.
/// Candidates are the roots of the 2×2 minors z_i φ_j − z_j φ_i.
fn curve_preimage_best(
    components: &[HomogeneousPoly],
    z: &ProjPoint,
) -> Option<(Complex64, Complex64, f64)> {
    let coeff_lists: Vec<Vec<Complex64>> = components.iter().map(binary_coeffs).collect();
    let mut idx: Vec<usize> = (0..components.len()).collect();
    idx.sort_by(|&a, &b| z.coords()[b].norm().partial_cmp(&z.coords()[a].norm()).unwrap());
    let i0 = idx[0];
    let mut best: Option<(Complex64, Complex64, f64)> = None;
    for &j in idx.iter().skip(1) {
        // g = z_{i0} φ_j − z_j φ_{i0} vanishes on every preimage of z
        let g: Vec<Complex64> = coeff_lists[j]
            .iter()
            .zip(&coeff_lists[i0])
            .map(|(cj, ci)| z.coords()[i0] * cj - z.coords()[j] * ci)
            .collect();
        let gnorm: f64 = g.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if gnorm < 1e-14 {
            continue;
        }
        let Ok(cands) = roots::binary_form_roots(&g) else { continue };
        for (u, v) in cands {
            let img = curve_image(components, u, v);
            if img.norm() < 1e-14 {
                continue;
            }
            let d = crate::grassmann::fubini_study_distance(&img, z.coords());
            if best.map(|(_, _, bd)| d < bd).unwrap_or(true) {
                best = Some((u, v, d));
            }
        }
        if let Some((_, _, d)) = best {
            if d <= RESIDUAL_TOL {
                break;
            }
        }
    }
    best
}

/// Finds the parameter point mapping to z, to [`RESIDUAL_TOL`].
pub(crate) fn curve_preimage(
    components: &[HomogeneousPoly],
    z: &ProjPoint,
) -> Result<(Complex64, Complex64)> {
    match curve_preimage_best(components, z) {
        Some((u, v, d)) if d <= RESIDUAL_TOL => Ok((u, v)),
        Some((_, _, d)) => Err(Error::PointNotOnVariety { residuals: vec![d] }),
        None => Err(Error::PointNotOnVariety { residuals: vec![f64::INFINITY] }),
    }
}

// ── smoothness and tangent spaces ───────────────────────────────────

/// Smoothness test at a point known to lie on Z within `tol`.
///
/// Equational: the s-th singular value of the Jacobian must exceed tol·σ₁.
/// Parametrized: the projected derivative of the parametrization at the
/// preimage must be nonzero (immersion test).
pub fn is_smooth(variety: &VarietySpec, z: &ProjPoint, tol: f64) -> Result<bool> {
    check_on_variety(variety, z, tol.max(RESIDUAL_TOL))?;
    match variety {
        VarietySpec::Hypersurface { .. } | VarietySpec::CompleteIntersection { .. } => {
            let j = jacobian(variety, z)?;
            let sv = linalg::svd(&j)?.singular_values;
            let s = variety.codim();
            Ok(sv[s - 1] > tol * sv[0].max(f64::MIN_POSITIVE))
        }
        VarietySpec::ParamCurve { components } => {
            let (u, v) = curve_preimage(components, z)?;
            let dir = curve_tangent_direction(components, u, v, z);
            let scale: f64 = components.iter().map(|c| c.coefficient_norm()).sum();
            Ok(dir.norm() > tol * scale.max(1.0))
        }
    }
}

/// Derivative of the parametrization along the parameter circle, projected
/// to z^⊥ (the cone direction removed).
fn curve_tangent_direction(
    components: &[HomogeneousPoly],
    u: Complex64,
    v: Complex64,
    z: &ProjPoint,
) -> CVec {
    let (du, dv) = curve_partials(components, u, v);
    // direction orthogonal to (u, v) in the parameter C²
    let dir = du * (-v.conj()) + dv * u.conj();
    let zc = z.coords();
    &dir - zc * hinner(&dir, zc)
}

/// Tangent space T_zZ as an m-dimensional subspace of z^⊥ ⊂ C^(n+1).
pub fn tangent_space(variety: &VarietySpec, z: &ProjPoint) -> Result<Subspace> {
    check_on_variety(variety, z, RESIDUAL_TOL)?;
    let m = variety.dim();
    match variety {
        VarietySpec::Hypersurface { .. } | VarietySpec::CompleteIntersection { .. } => {
            let j = jacobian(variety, z)?;
            let kernel = linalg::null_space(&j, RESIDUAL_TOL)?;
            if kernel.ncols() != m + 1 {
                return Err(Error::SingularPoint);
            }
            // z itself lies in ker J (Euler relation); strip the cone direction
            let zc = z.coords();
            let zmat = CMat::from_column_slice(zc.len(), 1, zc.as_slice());
            let proj = &kernel - &zmat * (zmat.adjoint() * &kernel);
            let basis = linalg::column_space(&proj, 1e-8)?;
            if basis.ncols() != m {
                return Err(Error::SingularPoint);
            }
            Subspace::from_orthonormal(basis)
        }
        VarietySpec::ParamCurve { components } => {
            let (u, v) = curve_preimage(components, z)?;
            let dir = curve_tangent_direction(components, u, v, z);
            let scale: f64 = components.iter().map(|c| c.coefficient_norm()).sum();
            if dir.norm() <= RESIDUAL_TOL * scale.max(1.0) {
                return Err(Error::SingularPoint);
            }
            Subspace::from_vector(&dir)
        }
    }
}

/// T_zL = L̂ ∩ z^⊥ for a subspace L containing z, dimension dim L̂ − 1.
pub fn tangent_space_of_subspace(l: &Subspace, z: &ProjPoint) -> Result<Subspace> {
    let res = l.residual_of(z.coords());
    if res > RESIDUAL_TOL {
        return Err(Error::PointNotOnSubspace { residual: res });
    }
    let zc = z.coords();
    let zmat = CMat::from_column_slice(zc.len(), 1, zc.as_slice());
    let proj = l.basis() - &zmat * (zmat.adjoint() * l.basis());
    let basis = linalg::column_space(&proj, 1e-8)?;
    if basis.ncols() != l.dim() - 1 {
        return Err(Error::RankDeficient { rank: basis.ncols(), expected: l.dim() - 1 });
    }
    Subspace::from_orthonormal(basis)
}

/// Unitary normalization [ẑ | basis of T_zL | completion] sending z ↦ e₀ and
/// L̂ ↦ span{e₀,…,e_s}; deterministic given (L, z).
fn normalization_frame(l: &Subspace, z: &ProjPoint) -> Result<CMat> {
    let tl = tangent_space_of_subspace(l, z)?;
    let zc = z.coords();
    let zmat = CMat::from_column_slice(zc.len(), 1, zc.as_slice());
    let lhat = hcat(&[&zmat, tl.basis()]);
    let completion = linalg::complement_cols(&lhat);
    Ok(hcat(&[&lhat, &completion]))
}

/// Condition cap beyond which the X-block counts as singular
/// (nontransversal configuration).
const NMATRIX_COND_CAP: f64 = 1e12;

/// The N-matrix (s×m) of the normal form at z ∈ Z ∩ L: after the unitary
/// change of coordinates sending z to e₀ and L̂ to the first s+1
/// coordinates, N = −(∂_X f)⁻¹ ∂_Y f; its spectral norm is cot of the
/// minimum tangent angle. For parametrized curves the same matrix is read
/// off the tangent space blocks: U*·T_zZ = [0; P; Q] and N = P Q⁻¹.
pub fn n_matrix(variety: &VarietySpec, l: &Subspace, z: &ProjPoint) -> Result<CMat> {
    check_on_variety(variety, z, RESIDUAL_TOL)?;
    let s = variety.codim();
    let m = variety.dim();
    if l.dim() != s + 1 {
        return Err(Error::DimensionMismatch {
            context: format!("L has linear dimension {}, expected s+1 = {}", l.dim(), s + 1),
        });
    }
    let frame = normalization_frame(l, z)?;
    match variety {
        VarietySpec::Hypersurface { .. } | VarietySpec::CompleteIntersection { .. } => {
            let j = jacobian(variety, z)?;
            let jn = &j * &frame;
            let dx = jn.columns(1, s).into_owned();
            let dy = jn.columns(1 + s, m).into_owned();
            let neg_dy = dy.map(|c| -c);
            solve_with_condition_cap(&dx, &neg_dy)
        }
        VarietySpec::ParamCurve { .. } => {
            let tz = tangent_space(variety, z)?;
            let w = frame.adjoint() * tz.basis();
            let p = w.rows(1, s).into_owned();
            let q = w.rows(1 + s, m).into_owned();
            // T_zZ = {(0, Nẏ, ẏ)} forces P = N·Q, i.e. Q* N* = P*
            let n_t = solve_with_condition_cap(&q.adjoint(), &p.adjoint())?;
            Ok(n_t.adjoint())
        }
    }
}

/// Solves A·X = B with an explicit condition cap on A.
fn solve_with_condition_cap(a: &CMat, b: &CMat) -> Result<CMat> {
    let dec = linalg::svd(a)?;
    let s1 = dec.singular_values.first().copied().unwrap_or(0.0);
    let sm = dec.singular_values.last().copied().unwrap_or(0.0);
    if !(sm > 0.0) || s1 / sm > NMATRIX_COND_CAP {
        return Err(Error::Nontransversal(format!(
            "block condition {:.3e} exceeds cap {NMATRIX_COND_CAP:.0e}",
            if sm > 0.0 { s1 / sm } else { f64::INFINITY }
        )));
    }
    let r = dec.singular_values.len();
    let inv = CMat::from_fn(r, r, |i, j| {
        if i == j {
            Complex64::new(1.0 / dec.singular_values[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(&dec.right_factor * inv * dec.left_factor.adjoint() * b)
}

// ── JSON wire format ────────────────────────────────────────────────

#[derive(Serialize, Deserialize)]
struct TermWire {
    exps: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyWire {
    degree: u32,
    terms: Vec<TermWire>,
}

#[derive(Serialize, Deserialize)]
struct VarietyWire {
    #[serde(rename = "type")]
    kind: String,
    n: usize,
    polys: Vec<PolyWire>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sample: Option<Vec<[f64; 2]>>,
}

fn poly_to_wire(p: &HomogeneousPoly) -> PolyWire {
    PolyWire {
        degree: p.degree(),
        terms: p
            .terms()
            .map(|(exps, c)| TermWire { exps: exps.clone(), re: c.re, im: c.im })
            .collect(),
    }
}

fn poly_from_wire(w: &PolyWire, num_vars: usize) -> Result<HomogeneousPoly> {
    HomogeneousPoly::new(
        num_vars,
        w.degree,
        w.terms.iter().map(|t| (t.exps.clone(), Complex64::new(t.re, t.im))),
    )
}

impl Serialize for VarietySpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = match self {
            Self::Hypersurface { f } => VarietyWire {
                kind: "hypersurface".into(),
                n: self.ambient_proj_dim(),
                polys: vec![poly_to_wire(f)],
                sample: None,
            },
            Self::CompleteIntersection { fs, sample } => VarietyWire {
                kind: "complete_intersection".into(),
                n: self.ambient_proj_dim(),
                polys: fs.iter().map(poly_to_wire).collect(),
                sample: Some(sample.coords().iter().map(|z| [z.re, z.im]).collect()),
            },
            Self::ParamCurve { components } => VarietyWire {
                kind: "param_curve".into(),
                n: self.ambient_proj_dim(),
                polys: components.iter().map(poly_to_wire).collect(),
                sample: None,
            },
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VarietySpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = VarietyWire::deserialize(deserializer)?;
        let fail = |e: Error| D::Error::custom(e.to_string());
        match wire.kind.as_str() {
            "hypersurface" => {
                if wire.polys.len() != 1 {
                    return Err(D::Error::custom("hypersurface takes exactly one polynomial"));
                }
                let f = poly_from_wire(&wire.polys[0], wire.n + 1).map_err(fail)?;
                VarietySpec::hypersurface(f).map_err(fail)
            }
            "complete_intersection" => {
                let fs = wire
                    .polys
                    .iter()
                    .map(|p| poly_from_wire(p, wire.n + 1))
                    .collect::<Result<Vec<_>>>()
                    .map_err(fail)?;
                let sample = wire
                    .sample
                    .as_ref()
                    .ok_or_else(|| D::Error::custom("complete_intersection needs a sample point"))?;
                let pt = ProjPoint::from_slice(
                    &sample.iter().map(|&[re, im]| (re, im)).collect::<Vec<_>>(),
                )
                .map_err(fail)?;
                VarietySpec::complete_intersection(fs, pt).map_err(fail)
            }
            "param_curve" => {
                if wire.polys.len() != wire.n + 1 {
                    return Err(D::Error::custom(format!(
                        "param_curve in P^{} needs {} components, got {}",
                        wire.n,
                        wire.n + 1,
                        wire.polys.len()
                    )));
                }
                let components = wire
                    .polys
                    .iter()
                    .map(|p| poly_from_wire(p, 2))
                    .collect::<Result<Vec<_>>>()
                    .map_err(fail)?;
                VarietySpec::param_curve(components).map_err(fail)
            }
            other => Err(D::Error::custom(format!("unknown variety type {other:?}"))),
        }
    }
}

// ── shared fixtures ─────────────────────────────────────────────────

/// x₀x₂ − x₁², the smooth conic in P².
pub fn conic() -> VarietySpec {
    let f = HomogeneousPoly::from_terms(3, 2, &[(1.0, 0.0, &[1, 0, 1]), (-1.0, 0.0, &[0, 2, 0])])
        .unwrap();
    VarietySpec::hypersurface(f).unwrap()
}

/// (u:v) ↦ (u³ : u²v : uv² : v³), the twisted cubic in P³.
pub fn twisted_cubic() -> VarietySpec {
    let comps = vec![
        HomogeneousPoly::from_terms(2, 3, &[(1.0, 0.0, &[3, 0])]).unwrap(),
        HomogeneousPoly::from_terms(2, 3, &[(1.0, 0.0, &[2, 1])]).unwrap(),
        HomogeneousPoly::from_terms(2, 3, &[(1.0, 0.0, &[1, 2])]).unwrap(),
        HomogeneousPoly::from_terms(2, 3, &[(1.0, 0.0, &[0, 3])]).unwrap(),
    ];
    VarietySpec::param_curve(comps).unwrap()
}
