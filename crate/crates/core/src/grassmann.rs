//! Points, metrics, tangent vectors, sampling, the Plücker embedding, and
//! Schubert-variety distances on complex Grassmann manifolds.
//!
//! A subspace is stored as an orthonormal-column basis of its cone in
//! C^(n+1). Principal angles between two subspaces are θ_j = arccos σ_j of
//! the singular values of U₁*U₂; they drive both distances used here:
//! d_p = sin θ_max (projection distance) and d_g = ‖θ‖₂ (geodesic distance).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, hcat, hinner, orthonormalize, random_gaussian, svd, CMat, CVec};

/// Span comparison tolerance: subspaces are equal when d_p falls below this.
pub const SPAN_EQ_TOL: f64 = 1e-8;

/// A linear subspace of C^(ambient_dim), i.e. a point of a Grassmannian,
/// held as an orthonormal-column basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: CMat,
}

impl Subspace {
    /// Wraps a matrix whose columns are already orthonormal (checked to 1e−10).
    pub fn from_orthonormal(basis: CMat) -> Result<Self> {
        let (n, k) = (basis.nrows(), basis.ncols());
        if !(1 <= k && k < n) {
            return Err(Error::InvalidSubspace(format!(
                "need 1 <= dim < ambient_dim, got dim {k} in ambient {n}"
            )));
        }
        let gram_err = (basis.adjoint() * &basis - CMat::identity(k, k)).norm();
        if gram_err > 1e-10 {
            return Err(Error::InvalidSubspace(format!(
                "basis columns not orthonormal (Gram residual {gram_err:.3e})"
            )));
        }
        Ok(Self { basis })
    }

    /// Orthonormalizes the columns of a full-column-rank matrix.
    pub fn from_span(m: &CMat) -> Result<Self> {
        Self::from_orthonormal(orthonormalize(m)?)
    }

    /// Span of a single nonzero vector.
    pub fn from_vector(v: &CVec) -> Result<Self> {
        Self::from_span(&CMat::from_column_slice(v.len(), 1, v.as_slice()))
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> CMat {
        &self.basis * self.basis.adjoint()
    }

    /// Residual of v against the subspace: ‖v − Π v‖ / ‖v‖.
    pub fn residual_of(&self, v: &CVec) -> f64 {
        let vn = v.norm();
        if vn == 0.0 {
            return 0.0;
        }
        let proj = &self.basis * (self.basis.adjoint() * v);
        (v - proj).norm() / vn
    }

    pub fn contains(&self, v: &CVec, tol: f64) -> bool {
        self.residual_of(v) <= tol
    }

    /// Span equality: d_p below [`SPAN_EQ_TOL`].
    pub fn same_span(&self, other: &Subspace) -> bool {
        self.dim() == other.dim()
            && self.ambient_dim() == other.ambient_dim()
            && projection_distance(self, other).map(|d| d < SPAN_EQ_TOL).unwrap_or(false)
    }
}

/// Sorted principal angles θ_1 ≤ … ≤ θ_r in [0, π/2], r = min(dim₁, dim₂).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrincipalAngleList {
    angles: Vec<f64>,
}

impl PrincipalAngleList {
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn min(&self) -> f64 {
        self.angles[0]
    }

    pub fn max(&self) -> f64 {
        *self.angles.last().unwrap()
    }

    /// ‖θ‖₂, the geodesic distance the list encodes.
    pub fn geodesic_norm(&self) -> f64 {
        self.angles.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

fn check_same_ambient(v1: &Subspace, v2: &Subspace) -> Result<()> {
    if v1.ambient_dim() != v2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "ambient dims {} and {} differ",
                v1.ambient_dim(),
                v2.ambient_dim()
            ),
        });
    }
    Ok(())
}

fn check_same_dims(v1: &Subspace, v2: &Subspace) -> Result<()> {
    check_same_ambient(v1, v2)?;
    if v1.dim() != v2.dim() {
        return Err(Error::DimensionMismatch {
            context: format!("subspace dims {} and {} differ", v1.dim(), v2.dim()),
        });
    }
    Ok(())
}

/// Angles ascending, computed by the dual cosine/sine route: θ_j = arccos of
/// the j-th singular value of U₁*U₂, except that angles below π/4 are taken
/// from arcsin of the singular values of (I − Π₁)U₂. The cosine route alone
/// cannot resolve angles below ~1e−8 (arccos loses half the digits at σ→1);
/// the sine route is absolutely accurate there.
fn dual_route_angles(v1: &Subspace, v2: &Subspace) -> Result<(crate::linalg::SvdResult, Vec<f64>)> {
    let m = v1.basis().adjoint() * v2.basis();
    let cos_dec = svd(&m)?;
    let r = cos_dec.singular_values.len();
    let b = v2.basis() - v1.basis() * &m;
    let sin_dec = svd(&b)?;
    let sins = &sin_dec.singular_values;
    let mut angles = Vec::with_capacity(r);
    for j in 0..r {
        let theta_cos = cos_dec.singular_values[j].clamp(0.0, 1.0).acos();
        let theta = if theta_cos < std::f64::consts::FRAC_PI_4 {
            // j-th smallest angle pairs with the j-th smallest sine
            sins[sins.len() - 1 - j].clamp(0.0, 1.0).asin()
        } else {
            theta_cos
        };
        angles.push(theta);
    }
    // the two routes can disagree by ~1e-8 right at the π/4 seam
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok((cos_dec, angles))
}

/// Principal angles via θ_j = arccos σ_j(U₁*U₂), σ clamped to [0,1], with a
/// sine-based correction for small angles.
pub fn principal_angles(v1: &Subspace, v2: &Subspace) -> Result<PrincipalAngleList> {
    check_same_ambient(v1, v2)?;
    let (_, angles) = dual_route_angles(v1, v2)?;
    Ok(PrincipalAngleList { angles })
}

/// Smallest principal angle; positive iff the subspaces meet only at 0.
pub fn min_angle(v1: &Subspace, v2: &Subspace) -> Result<f64> {
    Ok(principal_angles(v1, v2)?.min())
}

/// Projection distance d_p = sin θ_max = ‖Π₁ − Π₂‖.
pub fn projection_distance(v1: &Subspace, v2: &Subspace) -> Result<f64> {
    check_same_dims(v1, v2)?;
    Ok(principal_angles(v1, v2)?.max().sin())
}

/// Geodesic distance d_g = ‖θ‖₂.
pub fn geodesic_distance(v1: &Subspace, v2: &Subspace) -> Result<f64> {
    check_same_dims(v1, v2)?;
    Ok(principal_angles(v1, v2)?.geodesic_norm())
}

/// Orthogonal complement, deterministic given the basis.
pub fn complement(w: &Subspace) -> Subspace {
    Subspace { basis: linalg::complement_cols(w.basis()) }
}

/// Uniform (unitarily invariant) random subspace: orthonormalized i.i.d.
/// standard complex Gaussian columns, redrawn in the measure-zero
/// rank-deficient case.
pub fn sample_uniform(ambient_dim: usize, dim: usize, rng: &mut impl Rng) -> Subspace {
    assert!(1 <= dim && dim < ambient_dim, "need 1 <= dim < ambient_dim");
    loop {
        let g = random_gaussian(ambient_dim, dim, rng);
        if let Ok(q) = orthonormalize(&g) {
            return Subspace { basis: q };
        }
    }
}

fn subsets_lex(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next k-subset of {0..n} in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Plücker coordinates: all k×k minors of the basis matrix, indexed by
/// sorted row subsets in lexicographic order, normalized to unit norm.
/// Well-defined up to a global phase.
pub fn plucker(w: &Subspace) -> CVec {
    let n = w.ambient_dim();
    let k = w.dim();
    let subsets = subsets_lex(n, k);
    let mut coords = CVec::zeros(subsets.len());
    for (idx, rows) in subsets.iter().enumerate() {
        let sub = DMatrix::from_fn(k, k, |i, j| w.basis()[(rows[i], j)]);
        coords[idx] = sub.determinant();
    }
    let nrm = coords.norm();
    // orthonormal basis ⇒ the Plücker vector already has unit norm up to roundoff
    coords / Complex64::new(nrm, 0.0)
}

/// Fubini–Study (angular) distance between two projective points given by
/// nonzero representatives.
pub fn fubini_study_distance(p: &CVec, q: &CVec) -> f64 {
    let c = hinner(p, q).norm() / (p.norm() * q.norm());
    c.clamp(0.0, 1.0).acos()
}

/// Matched principal bases: columns of `first` and `second` are principal
/// vector pairs for (V₁, V₂), angles ascending.
pub(crate) struct PrincipalPairs {
    pub first: CMat,
    pub second: CMat,
    pub angles: Vec<f64>,
}

pub(crate) fn principal_pairs(v1: &Subspace, v2: &Subspace) -> Result<PrincipalPairs> {
    check_same_ambient(v1, v2)?;
    let (dec, angles) = dual_route_angles(v1, v2)?;
    let first = v1.basis() * &dec.left_factor;
    let second = v2.basis() * &dec.right_factor;
    Ok(PrincipalPairs { first, second, angles })
}

/// Distance of W to the Schubert variety S_T = {W' : W' ∩ T ≠ 0}, returned
/// as (d_p, d_g) = (sin α, α) with α the minimum angle between W and T.
pub fn schubert_distance(w: &Subspace, t: &Subspace) -> Result<(f64, f64)> {
    let alpha = min_angle(w, t)?;
    Ok((alpha.sin(), alpha))
}

/// Constructive minimizer for the Schubert distance: swaps the principal
/// vector w₁ realizing the minimum angle for its partner t₁ in T, giving
/// W' ∈ S_T with d_g(W, W') = min_angle(W, T). Ties are broken by the first
/// pair the SVD returns. If W already meets T, W is returned unchanged.
pub fn nearest_schubert_point(w: &Subspace, t: &Subspace) -> Result<Subspace> {
    let pairs = principal_pairs(w, t)?;
    let alpha = pairs.angles[0];
    if alpha <= SPAN_EQ_TOL {
        return Ok(w.clone());
    }
    let w1 = pairs.first.column(0).into_owned();
    let t1 = pairs.second.column(0).into_owned();
    if w.dim() == 1 {
        return Subspace::from_vector(&t1);
    }
    // W ⊖ span{w₁}: project w₁ out of the basis; rank drops by exactly one.
    let proj_out = CMat::identity(w.ambient_dim(), w.ambient_dim())
        - &CMat::from_column_slice(w.ambient_dim(), 1, w1.as_slice())
            * CMat::from_column_slice(w.ambient_dim(), 1, w1.as_slice()).adjoint();
    let reduced = &proj_out * w.basis();
    let rest = linalg::column_space(&reduced, 1e-8)?;
    if rest.ncols() != w.dim() - 1 {
        return Err(Error::RankDeficient { rank: rest.ncols(), expected: w.dim() - 1 });
    }
    // t₁ ⊥ (W ⊖ w₁) because ⟨t₁, w_j⟩ = σ₁ δ_{1j}.
    let t1_mat = CMat::from_column_slice(w.ambient_dim(), 1, t1.as_slice());
    Subspace::from_span(&hcat(&[&rest, &t1_mat]))
}

/// Point at parameter t on a minimizing geodesic from V₁ to V₂: each
/// principal pair is rotated by t·θ_j. Errors when two or more principal
/// angles sit at π/2, where the pairing (and hence the geodesic) is not
/// unique.
pub fn geodesic_step(v1: &Subspace, v2: &Subspace, t: f64) -> Result<Subspace> {
    check_same_dims(v1, v2)?;
    let pairs = principal_pairs(v1, v2)?;
    let right_angles = pairs.angles.iter().filter(|&&a| a > std::f64::consts::FRAC_PI_2 - 1e-9).count();
    if right_angles >= 2 {
        return Err(Error::DegenerateGeodesic(format!(
            "{right_angles} principal angles at pi/2"
        )));
    }
    let n = v1.ambient_dim();
    let k = v1.dim();
    let mut cols = CMat::zeros(n, k);
    for j in 0..k {
        let theta = pairs.angles[j];
        let p1 = pairs.first.column(j);
        let p2 = pairs.second.column(j);
        let col = if theta < 1e-9 {
            p1.into_owned()
        } else {
            // direction vector ⊥ p1 inside span{p1, p2}
            let mut u = p2.into_owned();
            let cosv = Complex64::new(theta.cos(), 0.0);
            u -= p1 * cosv;
            let un = u.norm();
            u /= Complex64::new(un, 0.0);
            pairs.first.column(j) * Complex64::new((t * theta).cos(), 0.0)
                + u * Complex64::new((t * theta).sin(), 0.0)
        };
        cols.set_column(j, &col);
    }
    Subspace::from_span(&cols)
}

/// Tangent vector to the Grassmannian at `base`, stored as the coefficient
/// matrix R of size (ambient − dim) × dim against the deterministic
/// orthonormal completion of the base point; ‖R‖_F is the Riemannian norm.
#[derive(Debug, Clone)]
pub struct GrassmannTangent {
    base: Subspace,
    completion: CMat,
    coeff: CMat,
}

impl GrassmannTangent {
    pub fn new(base: Subspace, coeff: CMat) -> Result<Self> {
        let comp = complement(&base);
        if coeff.nrows() != comp.dim() || coeff.ncols() != base.dim() {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "tangent coefficients must be {}x{}, got {}x{}",
                    comp.dim(),
                    base.dim(),
                    coeff.nrows(),
                    coeff.ncols()
                ),
            });
        }
        Ok(Self { base, completion: comp.basis().clone(), coeff })
    }

    /// Random tangent of unit Frobenius norm.
    pub fn random_unit(base: Subspace, rng: &mut impl Rng) -> Self {
        let rows = base.ambient_dim() - base.dim();
        let cols = base.dim();
        let mut coeff = random_gaussian(rows, cols, rng);
        let nrm = coeff.norm();
        coeff /= Complex64::new(nrm, 0.0);
        Self::new(base, coeff).expect("shape is consistent by construction")
    }

    pub fn base(&self) -> &Subspace {
        &self.base
    }

    pub fn coeff(&self) -> &CMat {
        &self.coeff
    }

    /// Riemannian norm √tr(RR*).
    pub fn norm(&self) -> f64 {
        self.coeff.norm()
    }

    /// Ambient representative Δ = C·R with columns orthogonal to the base.
    pub fn ambient(&self) -> CMat {
        &self.completion * &self.coeff
    }

    /// Exact geodesic step: with Δ = UΣV*, the point at arclength-parameter h
    /// is span(B V cos(hΣ) + U sin(hΣ)).
    pub fn geodesic(&self, h: f64) -> Result<Subspace> {
        let delta = self.ambient();
        let dec = svd(&delta)?;
        let k = self.base.dim();
        let mut cols = CMat::zeros(self.base.ambient_dim(), k);
        let bv = self.base.basis() * &dec.right_factor;
        for j in 0..k {
            let s = dec.singular_values[j];
            let col = bv.column(j) * Complex64::new((h * s).cos(), 0.0)
                + dec.left_factor.column(j) * Complex64::new((h * s).sin(), 0.0);
            cols.set_column(j, &col);
        }
        Subspace::from_span(&cols)
    }
}

// ── JSON wire format ────────────────────────────────────────────────
//
// {ambient_dim, dim, basis: [[re, im], …]} row-major. Readers
// re-orthonormalize and reject if the correction exceeds 1e−6.

#[derive(Serialize, Deserialize)]
struct SubspaceWire {
    ambient_dim: usize,
    dim: usize,
    basis: Vec<[f64; 2]>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut basis = Vec::with_capacity(self.ambient_dim() * self.dim());
        for i in 0..self.ambient_dim() {
            for j in 0..self.dim() {
                let z = self.basis[(i, j)];
                basis.push([z.re, z.im]);
            }
        }
        SubspaceWire { ambient_dim: self.ambient_dim(), dim: self.dim(), basis }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = SubspaceWire::deserialize(deserializer)?;
        if wire.basis.len() != wire.ambient_dim * wire.dim {
            return Err(D::Error::custom(format!(
                "basis length {} does not match ambient_dim*dim = {}",
                wire.basis.len(),
                wire.ambient_dim * wire.dim
            )));
        }
        if !(1 <= wire.dim && wire.dim < wire.ambient_dim) {
            return Err(D::Error::custom("need 1 <= dim < ambient_dim"));
        }
        let raw = CMat::from_fn(wire.ambient_dim, wire.dim, |i, j| {
            let [re, im] = wire.basis[i * wire.dim + j];
            Complex64::new(re, im)
        });
        let gram_err =
            (raw.adjoint() * &raw - CMat::identity(wire.dim, wire.dim)).norm();
        if gram_err > 1e-6 {
            return Err(D::Error::custom(format!(
                "basis requires too large an orthonormality correction ({gram_err:.3e} > 1e-6)"
            )));
        }
        let q = orthonormalize(&raw).map_err(|e| D::Error::custom(e.to_string()))?;
        Ok(Subspace { basis: q })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use std::f64::consts::FRAC_PI_2;

    fn line(dirs: &[Complex64]) -> Subspace {
        Subspace::from_vector(&CVec::from_row_slice(dirs)).unwrap()
    }

    fn e(n: usize, i: usize) -> CVec {
        let mut v = CVec::zeros(n);
        v[i] = c(1.0, 0.0);
        v
    }

    fn span(n: usize, idx: &[usize]) -> Subspace {
        let mut m = CMat::zeros(n, idx.len());
        for (j, &i) in idx.iter().enumerate() {
            m[(i, j)] = c(1.0, 0.0);
        }
        Subspace::from_orthonormal(m).unwrap()
    }

    fn rotated_line(t: f64) -> Subspace {
        line(&[c(t.cos(), 0.0), c(t.sin(), 0.0)])
    }

    #[test]
    fn angles_identical_and_orthogonal() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let v = sample_uniform(5, 2, &mut rng);
        let a = principal_angles(&v, &v).unwrap();
        assert!(a.angles().iter().all(|&x| x < 1e-7));

        let l1 = span(2, &[0]);
        let l2 = span(2, &[1]);
        let a = principal_angles(&l1, &l2).unwrap();
        assert_eq!(a.angles().len(), 1);
        assert!((a.min() - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn angle_of_rotated_line() {
        let a = principal_angles(&span(2, &[0]), &rotated_line(0.3)).unwrap();
        assert!((a.min() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn min_angle_with_shared_vector() {
        let v1 = span(3, &[0, 1]);
        let v2 = span(3, &[1, 2]);
        assert!(min_angle(&v1, &v2).unwrap() < 1e-8);
    }

    #[test]
    fn distances_on_lines() {
        let l1 = span(2, &[0]);
        assert!(projection_distance(&l1, &l1).unwrap() < 1e-12);
        assert!((projection_distance(&l1, &span(2, &[1])).unwrap() - 1.0).abs() < 1e-12);
        let d = projection_distance(&l1, &rotated_line(0.3)).unwrap();
        assert!((d - 0.3f64.sin()).abs() < 1e-12);
        assert!((geodesic_distance(&l1, &rotated_line(0.3)).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn projection_distance_matches_projector_norm() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        for _ in 0..10 {
            let v1 = sample_uniform(4, 2, &mut rng);
            let v2 = sample_uniform(4, 2, &mut rng);
            let d = projection_distance(&v1, &v2).unwrap();
            let diff = v1.projector() - v2.projector();
            let spec = linalg::spectral_norm(&diff);
            assert!((d - spec).abs() < 1e-8, "d_p {d} vs projector norm {spec}");
        }
    }

    #[test]
    fn geodesic_distance_block_planes() {
        // two planes in C^4 built from two rotated C^2 factors at angle π/4 each
        let t = std::f64::consts::FRAC_PI_4;
        let mut b1 = CMat::zeros(4, 2);
        b1[(0, 0)] = c(1.0, 0.0);
        b1[(2, 1)] = c(1.0, 0.0);
        let mut b2 = CMat::zeros(4, 2);
        b2[(0, 0)] = c(t.cos(), 0.0);
        b2[(1, 0)] = c(t.sin(), 0.0);
        b2[(2, 1)] = c(t.cos(), 0.0);
        b2[(3, 1)] = c(t.sin(), 0.0);
        let v1 = Subspace::from_orthonormal(b1).unwrap();
        let v2 = Subspace::from_orthonormal(b2).unwrap();
        let d = geodesic_distance(&v1, &v2).unwrap();
        assert!((d - std::f64::consts::PI * 2.0f64.sqrt() / 4.0).abs() < 1e-12);
    }

    #[test]
    fn complement_basics() {
        let w = span(2, &[0]);
        let comp = complement(&w);
        assert!(comp.same_span(&span(2, &[1])));
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let v = sample_uniform(5, 2, &mut rng);
        let back = complement(&complement(&v));
        assert!(back.same_span(&v));
        assert!((v.basis().adjoint() * complement(&v).basis()).norm() < 1e-10);
    }

    #[test]
    fn complement_is_isometry() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        for _ in 0..10 {
            let v1 = sample_uniform(5, 2, &mut rng);
            let v2 = sample_uniform(5, 2, &mut rng);
            let d = geodesic_distance(&v1, &v2).unwrap();
            let dc = geodesic_distance(&complement(&v1), &complement(&v2)).unwrap();
            assert!((d - dc).abs() < 1e-9, "{d} vs {dc}");
        }
    }

    #[test]
    fn angle_symmetry_and_unitary_invariance() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let v1 = sample_uniform(5, 2, &mut rng);
        let v2 = sample_uniform(5, 3, &mut rng);
        let a12 = principal_angles(&v1, &v2).unwrap();
        let a21 = principal_angles(&v2, &v1).unwrap();
        for (x, y) in a12.angles().iter().zip(a21.angles()) {
            assert!((x - y).abs() < 1e-10);
        }
        let q = random_unitary(5, &mut rng);
        let qv1 = Subspace::from_span(&(&q * v1.basis())).unwrap();
        let qv2 = Subspace::from_span(&(&q * v2.basis())).unwrap();
        let aq = principal_angles(&qv1, &qv2).unwrap();
        for (x, y) in a12.angles().iter().zip(aq.angles()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn common_subspace_reduction() {
        // V1 = shared ⊕ a, V2 = shared ⊕ b with a known angle between a and b
        let n = 5;
        let shared = e(n, 0);
        let a = e(n, 1);
        let t = 0.7f64;
        let b_vec = e(n, 1) * c(t.cos(), 0.0) + e(n, 2) * c(t.sin(), 0.0);
        let m1 = hcat(&[
            &CMat::from_column_slice(n, 1, shared.as_slice()),
            &CMat::from_column_slice(n, 1, a.as_slice()),
        ]);
        let m2 = hcat(&[
            &CMat::from_column_slice(n, 1, shared.as_slice()),
            &CMat::from_column_slice(n, 1, b_vec.as_slice()),
        ]);
        let v1 = Subspace::from_span(&m1).unwrap();
        let v2 = Subspace::from_span(&m2).unwrap();
        let angles = principal_angles(&v1, &v2).unwrap();
        assert!(angles.angles()[0] < 1e-8);
        assert!((angles.angles()[1] - t).abs() < 1e-10);
    }

    #[test]
    fn plucker_coordinate_span() {
        let w = span(4, &[0, 1]);
        let p = plucker(&w);
        assert!((p[0].norm() - 1.0).abs() < 1e-12);
        assert!(p.rows(1, p.len() - 1).norm() < 1e-12);
    }

    #[test]
    fn plucker_basis_change_is_phase() {
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let w = sample_uniform(4, 2, &mut rng);
        let u = random_unitary(2, &mut rng);
        let w2 = Subspace::from_orthonormal(w.basis() * &u).unwrap();
        let p1 = plucker(&w);
        let p2 = plucker(&w2);
        for i in 0..p1.len() {
            assert!((p1[i].norm() - p2[i].norm()).abs() < 1e-10);
        }
        assert!(fubini_study_distance(&p1, &p2) < 1e-8);
    }

    #[test]
    fn schubert_distance_cases() {
        let w = span(2, &[0]);
        let t = span(2, &[1]);
        let (dp, dg) = schubert_distance(&w, &t).unwrap();
        assert!((dp - 1.0).abs() < 1e-12);
        assert!((dg - FRAC_PI_2).abs() < 1e-12);

        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let v1 = sample_uniform(4, 2, &mut rng);
        let (dp, dg) = schubert_distance(&v1, &v1).unwrap();
        assert!(dp < 1e-7 && dg < 1e-7);
    }

    #[test]
    fn nearest_schubert_point_attains_distance() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        for _ in 0..20 {
            let w = sample_uniform(4, 2, &mut rng);
            let t = sample_uniform(4, 2, &mut rng);
            let (_, alpha) = schubert_distance(&w, &t).unwrap();
            let wp = nearest_schubert_point(&w, &t).unwrap();
            assert!(min_angle(&wp, &t).unwrap() < 1e-8);
            let d = geodesic_distance(&w, &wp).unwrap();
            assert!((d - alpha).abs() < 1e-8, "d = {d}, alpha = {alpha}");
        }
    }

    #[test]
    fn nearest_schubert_orthogonal_case() {
        // W inside the complement of T: the minimizing swap replaces w1 by t1
        let w = span(4, &[0, 1]);
        let t = span(4, &[2]);
        let wp = nearest_schubert_point(&w, &t).unwrap();
        assert!(min_angle(&wp, &t).unwrap() < 1e-10);
        assert!((geodesic_distance(&w, &wp).unwrap() - FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn nearest_schubert_rotated_line() {
        let w = span(2, &[0]);
        let t = rotated_line(0.3);
        let wp = nearest_schubert_point(&w, &t).unwrap();
        assert!(wp.same_span(&t));
        assert!((geodesic_distance(&w, &wp).unwrap() - 0.3).abs() < 1e-10);
    }

    #[test]
    fn geodesic_step_endpoints_and_midpoint() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let v1 = sample_uniform(4, 2, &mut rng);
        let v2 = sample_uniform(4, 2, &mut rng);
        assert!(geodesic_step(&v1, &v2, 0.0).unwrap().same_span(&v1));
        assert!(geodesic_step(&v1, &v2, 1.0).unwrap().same_span(&v2));

        let l1 = span(2, &[0]);
        let l2 = rotated_line(0.3);
        let mid = geodesic_step(&l1, &l2, 0.5).unwrap();
        assert!((min_angle(&mid, &l1).unwrap() - 0.15).abs() < 1e-10);
        assert!((min_angle(&mid, &l2).unwrap() - 0.15).abs() < 1e-10);
    }

    #[test]
    fn geodesic_step_additivity() {
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        let v1 = sample_uniform(5, 2, &mut rng);
        let v2 = sample_uniform(5, 2, &mut rng);
        let d = geodesic_distance(&v1, &v2).unwrap();
        for &t in &[0.25, 0.5, 0.8] {
            let mid = geodesic_step(&v1, &v2, t).unwrap();
            let a = geodesic_distance(&v1, &mid).unwrap();
            let b = geodesic_distance(&mid, &v2).unwrap();
            assert!((a + b - d).abs() < 1e-8);
            assert!((a - t * d).abs() < 1e-8);
        }
    }

    #[test]
    fn geodesic_step_degenerate_errors() {
        let v1 = span(4, &[0, 1]);
        let v2 = span(4, &[2, 3]);
        assert!(matches!(
            geodesic_step(&v1, &v2, 0.5),
            Err(Error::DegenerateGeodesic(_))
        ));
    }

    #[test]
    fn tangent_norm_and_geodesic() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let base = sample_uniform(4, 2, &mut rng);
        let tan = GrassmannTangent::random_unit(base.clone(), &mut rng);
        assert!((tan.norm() - 1.0).abs() < 1e-12);
        let h = 0.1;
        let stepped = tan.geodesic(h).unwrap();
        let d = geodesic_distance(&base, &stepped).unwrap();
        assert!((d - h).abs() < 1e-9, "geodesic arclength {d} vs {h}");
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        let v = sample_uniform(4, 2, &mut rng);
        let text = serde_json::to_string(&v).unwrap();
        let back: Subspace = serde_json::from_str(&text).unwrap();
        assert!(back.same_span(&v));

        let bad = r#"{"ambient_dim": 2, "dim": 1, "basis": [[2.0, 0.0], [0.0, 0.0]]}"#;
        assert!(serde_json::from_str::<Subspace>(bad).is_err());
    }

    #[test]
    fn sampled_subspace_satisfies_invariants() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        for _ in 0..20 {
            let v = sample_uniform(6, 3, &mut rng);
            let k = v.dim();
            let gram = (v.basis().adjoint() * v.basis() - CMat::identity(k, k)).norm();
            assert!(gram < 1e-10);
        }
    }
}
