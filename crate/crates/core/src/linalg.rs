//! Dense complex linear algebra primitives shared by every other module.
//!
//! The SVD is a one-sided Jacobi implementation: nalgebra's complex SVD
//! miscomputes both values and factors on some well-conditioned inputs when
//! factors are requested (reconstruction errors around 1e-2), which the
//! reconstruction contract below cannot tolerate. Jacobi also gives high
//! relative accuracy for the small principal angles this crate lives on.
//! QR and LU remain nalgebra's. This module pins the contracts the rest of
//! the crate relies on: sorted singular values, explicit non-convergence
//! errors, rank-tolerance conventions, and the Fubini–Study inner product
//! ⟨u,v⟩_z = ⟨u,v⟩/‖z‖².

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Dense complex matrix, double precision.
pub type CMat = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVec = DVector<Complex64>;

/// Relative rank tolerance: singular values below `tol * σ₁` count as zero.
pub fn default_rank_tol(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON
}

/// Hermitian inner product ⟨u,v⟩ = Σ_j u_j conj(v_j).
pub fn hinner(u: &CVec, v: &CVec) -> Complex64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v.iter()).map(|(a, b)| a * b.conj()).sum()
}

fn check_finite(m: &CMat) -> Result<()> {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Full SVD `M = U diag(σ) V*` with σ₁ ≥ σ₂ ≥ … ≥ 0.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// Left factor with orthonormal columns, `rows × r`.
    pub left_factor: CMat,
    /// Nonincreasing, nonnegative.
    pub singular_values: Vec<f64>,
    /// Right factor with orthonormal columns, `cols × r` (not transposed).
    pub right_factor: CMat,
}

impl SvdResult {
    pub fn rank(&self, rel_tol: f64) -> usize {
        let s1 = self.singular_values.first().copied().unwrap_or(0.0);
        self.singular_values.iter().filter(|&&s| s > rel_tol * s1).count()
    }

    pub fn reconstruct(&self) -> CMat {
        let d = CMat::from_fn(self.singular_values.len(), self.singular_values.len(), |i, j| {
            if i == j {
                Complex64::new(self.singular_values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        &self.left_factor * d * self.right_factor.adjoint()
    }
}

const JACOBI_MAX_SWEEPS: usize = 60;
// Relative off-diagonal threshold. Must sit above the roundoff floor of the
// column inner products (~sqrt(rows)·eps) or the sweep loop livelocks on
// noise; the residual coupling it leaves perturbs σ only at second order.
const JACOBI_TOL: f64 = 1e-13;

/// One-sided Jacobi on a tall matrix (rows ≥ cols): returns (U, σ, V) with
/// U rows×cols thin, σ descending, V cols×cols square.
fn jacobi_svd_tall(m: &CMat) -> Result<(CMat, Vec<f64>, CMat)> {
    let (rows, cols) = (m.nrows(), m.ncols());
    debug_assert!(rows >= cols);
    let mut a = m.clone();
    let mut v = CMat::identity(cols, cols);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let col_p = a.column(p);
                let col_q = a.column(q);
                let app = col_p.norm_squared();
                let aqq = col_q.norm_squared();
                // (A*A)_{pq}
                let apq: Complex64 = col_p.iter().zip(col_q.iter()).map(|(x, y)| x.conj() * y).sum();
                if apq.norm() <= JACOBI_TOL * (app * aqq).sqrt() || apq.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                // Diagonalize the hermitian 2x2 Gram block [[app, apq], [conj, aqq]]
                // with J = [[c1, -conj(s1)], [s1, c1]], s1 = t*c1*e^{-iφ}.
                let phase = apq / apq.norm();
                let tau = (aqq - app) / (2.0 * apq.norm());
                // smaller root of t² − 2τt − 1 = 0, in the cancellation-free form
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c1 = 1.0 / (1.0 + t * t).sqrt();
                let s1 = phase.conj() * (t * c1);
                for i in 0..rows {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c1 + aiq * s1;
                    a[(i, q)] = -aip * s1.conj() + aiq * c1;
                }
                for i in 0..cols {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c1 + viq * s1;
                    v[(i, q)] = -vip * s1.conj() + viq * c1;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::SvdFailed { rows, cols });
    }

    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut sigma = Vec::with_capacity(cols);
    let mut u = CMat::zeros(rows, cols);
    let mut vs = CMat::zeros(cols, cols);
    for (slot, &j) in order.iter().enumerate() {
        sigma.push(norms[j]);
        vs.set_column(slot, &v.column(j));
        if norms[j] > 0.0 {
            let col = a.column(j) / Complex64::new(norms[j], 0.0);
            u.set_column(slot, &col);
        }
    }
    // Zero singular values leave holes in U; fill them with unit vectors
    // orthogonal to everything already placed so U keeps orthonormal columns.
    for slot in 0..cols {
        if sigma[slot] > 0.0 {
            continue;
        }
        let mut best: Option<CVec> = None;
        let mut best_norm = -1.0;
        for i in 0..rows {
            let mut cand = CVec::zeros(rows);
            cand[i] = Complex64::new(1.0, 0.0);
            for k in 0..cols {
                if u.column(k).norm_squared() == 0.0 {
                    continue;
                }
                let uk = u.column(k).into_owned();
                let coef: Complex64 = uk.iter().zip(cand.iter()).map(|(x, y)| x.conj() * y).sum();
                cand -= uk * coef;
            }
            let nrm = cand.norm();
            if nrm > best_norm {
                best_norm = nrm;
                best = Some(cand / Complex64::new(nrm, 0.0));
            }
        }
        u.set_column(slot, &best.expect("rows >= 1"));
    }
    Ok((u, sigma, vs))
}

/// Singular value decomposition; errors explicitly on non-convergence.
pub fn svd(m: &CMat) -> Result<SvdResult> {
    check_finite(m)?;
    if m.nrows() >= m.ncols() {
        let (u, sigma, v) = jacobi_svd_tall(m)?;
        Ok(SvdResult { left_factor: u, singular_values: sigma, right_factor: v })
    } else {
        let (u, sigma, v) = jacobi_svd_tall(&m.adjoint())?;
        Ok(SvdResult { left_factor: v, singular_values: sigma, right_factor: u })
    }
}

/// Spectral norm σ₁(M); 0 for the zero matrix.
pub fn spectral_norm(m: &CMat) -> f64 {
    svd(m).map(|s| s.singular_values.first().copied().unwrap_or(0.0)).unwrap_or(f64::NAN)
}

/// Moore–Penrose pseudoinverse. Singular values below `rank_tol · σ₁` are
/// treated as zero; `rank_tol` defaults to `max(rows, cols) · ε`.
pub fn pinv(m: &CMat, rank_tol: Option<f64>) -> Result<CMat> {
    let tol = rank_tol.unwrap_or_else(|| default_rank_tol(m.nrows(), m.ncols()));
    let dec = svd(m)?;
    let s1 = dec.singular_values.first().copied().unwrap_or(0.0);
    let r = dec.singular_values.len();
    let inv_d = CMat::from_fn(r, r, |i, j| {
        if i == j && dec.singular_values[i] > tol * s1 && dec.singular_values[i] > 0.0 {
            Complex64::new(1.0 / dec.singular_values[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(&dec.right_factor * inv_d * dec.left_factor.adjoint())
}

/// κ(M) = σ_max / σ_min over nonzero singular values; +∞ when numerically
/// rank deficient. The zero matrix has no condition number.
pub fn matrix_condition(m: &CMat) -> Result<f64> {
    let dec = svd(m)?;
    let s1 = dec.singular_values.first().copied().unwrap_or(0.0);
    if s1 == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let tol = default_rank_tol(m.nrows(), m.ncols());
    let r = m.nrows().min(m.ncols());
    let smin = dec.singular_values[r - 1];
    if smin <= tol * s1 {
        Ok(f64::INFINITY)
    } else {
        Ok(s1 / smin)
    }
}

/// Orthonormal basis of the column span of a full-column-rank matrix.
pub fn orthonormalize(m: &CMat) -> Result<CMat> {
    let dec = svd(m)?;
    let rank = dec.rank(default_rank_tol(m.nrows(), m.ncols()));
    if rank < m.ncols() {
        return Err(Error::RankDeficient { rank, expected: m.ncols() });
    }
    Ok(dec.left_factor.columns(0, m.ncols()).into_owned())
}

/// Orthonormal basis of the numerical column space (rank-tolerant variant).
pub fn column_space(m: &CMat, rel_tol: f64) -> Result<CMat> {
    let dec = svd(m)?;
    let rank = dec.rank(rel_tol);
    Ok(dec.left_factor.columns(0, rank).into_owned())
}

/// Orthonormal basis of the orthogonal complement of col(B), deterministic
/// given B: QR of [B | I] puts col(B) in the first columns of Q and the
/// complement in the rest.
pub fn complement_cols(b: &CMat) -> CMat {
    let n = b.nrows();
    let k = b.ncols();
    if k == 0 {
        return CMat::identity(n, n);
    }
    let stacked = hcat(&[b, &CMat::identity(n, n)]);
    let q = stacked.qr().q();
    q.columns(k, n - k).into_owned()
}

/// Orthonormal basis of the numerical null space {x : Mx ≈ 0}, computed as
/// the complement of col(M*); valid for any shape.
pub fn null_space(m: &CMat, rel_tol: f64) -> Result<CMat> {
    let col = column_space(&m.adjoint(), rel_tol)?;
    Ok(complement_cols(&col))
}

/// Fubini–Study inner product ⟨u,v⟩_z = ⟨u,v⟩ / ‖z‖² of tangent vectors at z.
///
/// u and v must be tangent, i.e. orthogonal to z (relative residual ≤ 1e−8).
pub fn fubini_study_inner(z: &CVec, u: &CVec, v: &CVec) -> Result<Complex64> {
    let zn = z.norm();
    if zn == 0.0 {
        return Err(Error::InvalidSubspace("base point of T_z P^n must be nonzero".into()));
    }
    for w in [u, v] {
        let wn = w.norm();
        if wn > 0.0 {
            let residual = hinner(w, z).norm() / (wn * zn);
            if residual > 1e-8 {
                return Err(Error::NotTangent { residual });
            }
        }
    }
    Ok(hinner(u, v) / Complex64::new(zn * zn, 0.0))
}

/// Horizontal concatenation.
pub fn hcat(blocks: &[&CMat]) -> CMat {
    assert!(!blocks.is_empty());
    let rows = blocks[0].nrows();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut c0 = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows);
        out.view_mut((0, c0), (rows, b.ncols())).copy_from(*b);
        c0 += b.ncols();
    }
    out
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-distributed unitary, via QR of a complex Gaussian matrix with the
/// R-diagonal phase correction.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> CMat {
    let g = random_gaussian(n, n, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn ident(n: usize) -> CMat {
        CMat::identity(n, n)
    }

    #[test]
    fn svd_identity() {
        let dec = svd(&ident(3)).unwrap();
        for s in &dec.singular_values {
            assert!((s - 1.0).abs() < 1e-12);
        }
        let err = (dec.reconstruct() - ident(3)).norm();
        assert!(err < 1e-12);
    }

    #[test]
    fn svd_diag_complex() {
        // diag(3, 4i): singular values are the absolute values, sorted.
        let m = CMat::from_row_slice(2, 2, &[c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 4.0)]);
        let dec = svd(&m).unwrap();
        assert!((dec.singular_values[0] - 4.0).abs() < 1e-12);
        assert!((dec.singular_values[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn svd_reconstruction_random() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let m = random_gaussian(5, 3, &mut rng);
        let dec = svd(&m).unwrap();
        let err = (&m - dec.reconstruct()).norm();
        assert!(err <= 1e-10 * m.norm().max(1.0), "reconstruction error {err}");
        let k = dec.left_factor.ncols();
        let ortho = (dec.left_factor.adjoint() * &dec.left_factor - ident(k)).norm();
        assert!(ortho < 1e-10);
        let ortho_v = (dec.right_factor.adjoint() * &dec.right_factor - ident(k)).norm();
        assert!(ortho_v < 1e-10);
    }

    #[test]
    fn svd_rejects_non_finite() {
        let mut m = ident(2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(svd(&m), Err(Error::NonFinite { row: 0, col: 1 })));
    }

    #[test]
    fn pinv_identity_and_rank_deficient_diag() {
        let p = pinv(&ident(3), None).unwrap();
        assert!((p - ident(3)).norm() < 1e-12);

        let m = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let p = pinv(&m, None).unwrap();
        assert!((p[(0, 0)] - c(0.5, 0.0)).norm() < 1e-12);
        assert!(p[(1, 1)].norm() < 1e-14);
    }

    #[test]
    fn pinv_zero_matrix_is_zero() {
        let m = CMat::zeros(3, 2);
        let p = pinv(&m, None).unwrap();
        assert_eq!(p.nrows(), 2);
        assert!(p.norm() == 0.0);
    }

    #[test]
    fn pinv_penrose_identities() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let m = random_gaussian(3, 5, &mut rng);
        let p = pinv(&m, None).unwrap();
        let scale = m.norm();
        assert!((&m * &p * &m - &m).norm() < 1e-8 * scale);
        assert!((&p * &m * &p - &p).norm() < 1e-8 * scale);
        let mp = &m * &p;
        assert!((mp.adjoint() - &mp).norm() < 1e-8);
        let pm = &p * &m;
        assert!((pm.adjoint() - &pm).norm() < 1e-8);
    }

    #[test]
    fn pinv_involution_full_rank() {
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let m = random_gaussian(4, 3, &mut rng);
        let back = pinv(&pinv(&m, None).unwrap(), None).unwrap();
        assert!((&m - back).norm() < 1e-8 * m.norm());
    }

    #[test]
    fn condition_values() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let q = random_unitary(4, &mut rng);
        assert!((matrix_condition(&q).unwrap() - 1.0).abs() < 1e-10);

        let m = CMat::from_row_slice(2, 2, &[c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!((matrix_condition(&m).unwrap() - 4.0).abs() < 1e-12);

        let g = random_gaussian(3, 3, &mut rng);
        let dec = svd(&g).unwrap();
        let expect = dec.singular_values[0] / dec.singular_values[2];
        assert!((matrix_condition(&g).unwrap() - expect).abs() < 1e-10 * expect);

        assert!(matches!(matrix_condition(&CMat::zeros(2, 2)), Err(Error::ZeroMatrix)));
        let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matrix_condition(&m).unwrap().is_infinite());
    }

    #[test]
    fn condition_scale_invariant() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let m = random_gaussian(3, 4, &mut rng);
        let t = c(2.0, -1.5);
        let scaled = m.map(|z| z * t);
        let a = matrix_condition(&m).unwrap();
        let b = matrix_condition(&scaled).unwrap();
        assert!((a - b).abs() < 1e-10 * a);
    }

    #[test]
    fn orthonormalize_basic() {
        // [e1, e1+e2] spans the same plane as [e1, e2].
        let m = CMat::from_row_slice(3, 2, &[
            c(1.0, 0.0), c(1.0, 0.0),
            c(0.0, 0.0), c(1.0, 0.0),
            c(0.0, 0.0), c(0.0, 0.0),
        ]);
        let q = orthonormalize(&m).unwrap();
        assert!((q.adjoint() * &q - ident(2)).norm() < 1e-10);
        // span check: e1 and e2 both reachable.
        let p = &q * q.adjoint();
        let e1 = CVec::from_row_slice(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let e2 = CVec::from_row_slice(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!((&p * &e1 - e1).norm() < 1e-10);
        assert!((&p * &e2 - e2).norm() < 1e-10);
    }

    #[test]
    fn orthonormalize_single_column_and_rank_error() {
        let v = CMat::from_row_slice(2, 1, &[c(3.0, 4.0), c(0.0, 0.0)]);
        let q = orthonormalize(&v).unwrap();
        assert!((q.column(0).norm() - 1.0).abs() < 1e-12);
        assert!((q[(1, 0)]).norm() < 1e-14);

        let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        match orthonormalize(&m) {
            Err(Error::RankDeficient { rank, expected }) => {
                assert_eq!((rank, expected), (1, 2));
            }
            other => panic!("expected rank error, got {other:?}"),
        }
    }

    #[test]
    fn orthonormalize_is_projection() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let m = random_gaussian(5, 2, &mut rng);
        let q1 = orthonormalize(&m).unwrap();
        let q2 = orthonormalize(&q1).unwrap();
        let p1 = &q1 * q1.adjoint();
        let p2 = &q2 * q2.adjoint();
        assert!((p1 - p2).norm() < 1e-10);
    }

    #[test]
    fn fubini_study_values() {
        let e0 = CVec::from_row_slice(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let e1 = CVec::from_row_slice(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let v = fubini_study_inner(&e0, &e1, &e1).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-14);

        // scaling the base point by 2 scales the metric by 1/4
        let z2 = e0.map(|x| x * c(2.0, 0.0));
        let v = fubini_study_inner(&z2, &e1, &e1).unwrap();
        assert!((v - c(0.25, 0.0)).norm() < 1e-14);

        let e0c = CVec::from_row_slice(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let e1c = CVec::from_row_slice(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let e2c = CVec::from_row_slice(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let v = fubini_study_inner(&e0c, &e1c, &e2c).unwrap();
        assert!(v.norm() < 1e-14);

        assert!(matches!(
            fubini_study_inner(&e0, &e0, &e1),
            Err(Error::NotTangent { .. })
        ));
    }

    #[test]
    fn singular_values_unitary_invariant() {
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        let m = random_gaussian(4, 3, &mut rng);
        let q = random_unitary(4, &mut rng);
        let p = random_unitary(3, &mut rng);
        let sv = |x: &CMat| svd(x).unwrap().singular_values;
        let a = sv(&m);
        let b = sv(&(&q * &m * &p));
        let ct = sv(&m.adjoint());
        for i in 0..3 {
            assert!((a[i] - b[i]).abs() < 1e-10);
            assert!((a[i] - ct[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        let q = random_unitary(5, &mut rng);
        assert!((q.adjoint() * &q - ident(5)).norm() < 1e-12);
    }
}
