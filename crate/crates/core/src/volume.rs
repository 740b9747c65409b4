//! Closed-form volumes and degrees: spheres, unitary groups, projective
//! spaces, Grassmannians, the special Schubert hypersurface of lines meeting
//! a fixed P^(m−1), and the Hurwitz hypersurface of tangent subspaces.
//!
//! Every quantity here is an exact rational multiple of a power of π, so the
//! module computes in that form ([`PiVolume`]) and converts to floating point
//! only on demand. vol U(n) = 2ⁿ π^(n(n+1)/2) / sf(n−1) with the
//! superfactorial sf(k) = ∏ i!, vol Pⁿ = πⁿ/n!, and
//! vol G(k, Cⁿ) = vol U(n) / (vol U(k) vol U(n−k)).

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact value q·π^k with q rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiVolume {
    coeff: BigRational,
    pi_pow: i64,
}

impl PiVolume {
    pub fn new(coeff: BigRational, pi_pow: i64) -> Self {
        Self { coeff, pi_pow }
    }

    pub fn from_integer(n: u64) -> Self {
        Self { coeff: BigRational::from_integer(BigInt::from(n)), pi_pow: 0 }
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn pi_pow(&self) -> i64 {
        self.pi_pow
    }

    pub fn to_f64(&self) -> f64 {
        let q = self.coeff.to_f64().unwrap_or(f64::NAN);
        q * std::f64::consts::PI.powi(self.pi_pow as i32)
    }

    pub fn mul(&self, other: &PiVolume) -> PiVolume {
        PiVolume { coeff: &self.coeff * &other.coeff, pi_pow: self.pi_pow + other.pi_pow }
    }

    pub fn div(&self, other: &PiVolume) -> PiVolume {
        PiVolume { coeff: &self.coeff / &other.coeff, pi_pow: self.pi_pow - other.pi_pow }
    }

    pub fn scale_int(&self, k: u64) -> PiVolume {
        PiVolume { coeff: &self.coeff * BigInt::from(k), pi_pow: self.pi_pow }
    }

    /// The exact integer this value equals, if it is a π-free integer.
    pub fn as_integer(&self) -> Option<BigUint> {
        if self.pi_pow == 0 && self.coeff.is_integer() && !self.coeff.is_negative() {
            self.coeff.to_integer().to_biguint()
        } else {
            None
        }
    }
}

impl fmt::Display for PiVolume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_pow {
            0 => write!(f, "{}", self.coeff),
            1 => write!(f, "{}·π", self.coeff),
            -1 => write!(f, "{}/π", self.coeff),
            p if p > 0 => write!(f, "{}·π^{}", self.coeff, p),
            p => write!(f, "{}/π^{}", self.coeff, -p),
        }
    }
}

fn factorial(k: u64) -> BigUint {
    (1..=k).map(BigUint::from).fold(BigUint::one(), |a, b| a * b)
}

fn double_factorial(k: u64) -> BigUint {
    let mut acc = BigUint::one();
    let mut i = k;
    while i > 1 {
        acc *= BigUint::from(i);
        i -= 2;
    }
    acc
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Superfactorial sf(k) = ∏_{i=1}^k i!, sf(0) = 1. Exact.
pub fn superfactorial(k: u64) -> BigUint {
    (1..=k).map(factorial).fold(BigUint::one(), |a, b| a * b)
}

/// vol U(n) = 2ⁿ π^(n(n+1)/2) / sf(n−1).
pub fn vol_unitary(n: u64) -> PiVolume {
    assert!(n >= 1, "U(n) needs n >= 1");
    let two_pow = BigUint::from(2u32).pow(n as u32);
    PiVolume::new(ratio(two_pow, superfactorial(n - 1)), (n * (n + 1) / 2) as i64)
}

/// vol S^d for the unit sphere in R^(d+1): 2π^(m/2)/Γ(m/2) with m = d+1.
pub fn vol_sphere(d: u64) -> PiVolume {
    let m = d + 1;
    if m % 2 == 0 {
        // Γ(m/2) = (m/2 − 1)!
        let half = m / 2;
        PiVolume::new(ratio(BigUint::from(2u32), factorial(half - 1)), half as i64)
    } else {
        // Γ(m/2) = (m−2)!! √π / 2^((m−1)/2)
        let num = BigUint::from(2u32).pow(((m + 1) / 2) as u32);
        PiVolume::new(ratio(num, double_factorial(m.saturating_sub(2))), ((m - 1) / 2) as i64)
    }
}

/// vol Pⁿ = πⁿ/n! (Fubini–Study normalization matching the metric in use).
pub fn vol_proj(n: u64) -> PiVolume {
    PiVolume::new(ratio(BigUint::one(), factorial(n)), n as i64)
}

/// vol G(k, Cⁿ) = vol U(n) / (vol U(k) · vol U(n−k)).
pub fn vol_grassmann(k: u64, n: u64) -> PiVolume {
    assert!(0 < k && k < n, "need 0 < k < n");
    vol_unitary(n).div(&vol_unitary(k).mul(&vol_unitary(n - k)))
}

/// Degree of the Plücker image of G(k, Cⁿ), by the exact identity
/// deg = vol G(k,Cⁿ) / vol P^(k(n−k)). Errors if the ratio is not an integer
/// (an internal-consistency failure, not an input condition).
pub fn plucker_degree(k: u64, n: u64) -> Result<BigUint> {
    let r = vol_grassmann(k, n).div(&vol_proj(k * (n - k)));
    r.as_integer().ok_or_else(|| {
        Error::ExactIdentity(format!(
            "vol G({k},C^{n})/vol P^{} = {r} is not an integer",
            k * (n - k)
        ))
    })
}

/// Classical product formula (k(n−k))! ∏_{i=0}^{k−1} i!/(n−k+i)! for the
/// Plücker degree; independent cross-check of [`plucker_degree`].
pub fn plucker_degree_classical(k: u64, n: u64) -> Result<BigUint> {
    assert!(0 < k && k < n);
    let mut r = BigRational::from_integer(BigInt::from(factorial(k * (n - k))));
    for i in 0..k {
        r *= ratio(factorial(i), factorial(n - k + i));
    }
    if r.is_integer() {
        r.to_integer().to_biguint().ok_or_else(|| Error::ExactIdentity("negative degree".into()))
    } else {
        Err(Error::ExactIdentity(format!("classical Plücker product {r} is not an integer")))
    }
}

/// vol(H_lin)/vol(G) = dim G / π = (s+1)m/π for the Schubert hypersurface of
/// subspaces meeting a fixed P^(m−1) in G(s, Pⁿ).
pub fn vol_schubert_lin_ratio(m: u64, s: u64) -> PiVolume {
    assert!(m >= 1 && s >= 1);
    PiVolume::new(BigRational::from_integer(BigInt::from((s + 1) * m)), -1)
}

/// vol(H)/vol(G) = rdeg · vol(H_lin)/vol(G) for a hypersurface of relative
/// degree rdeg.
pub fn vol_hypersurface_ratio(rdeg: u64, m: u64, s: u64) -> PiVolume {
    vol_schubert_lin_ratio(m, s).scale_int(rdeg)
}

/// Input data for the Hurwitz-hypersurface formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HurwitzParams {
    pub deg_z: u64,
    pub sectional_genus: u64,
    /// m = dim Z
    pub dim_z: u64,
    /// s = codim Z
    pub codim_z: u64,
}

impl HurwitzParams {
    /// Degree/genus/dimension data for the supported variety classes.
    pub fn for_variety(variety: &crate::variety::VarietySpec) -> Result<Self> {
        use crate::variety::VarietySpec;
        match variety {
            VarietySpec::Hypersurface { f } => Ok(Self {
                deg_z: f.degree() as u64,
                sectional_genus: sectional_genus(GenusClass::Hypersurface {
                    degree: f.degree() as u64,
                })?,
                dim_z: variety.dim() as u64,
                codim_z: variety.codim() as u64,
            }),
            VarietySpec::ParamCurve { .. } => Ok(Self {
                deg_z: variety.degree() as u64,
                sectional_genus: sectional_genus(GenusClass::RationalCurve)?,
                dim_z: 1,
                codim_z: variety.codim() as u64,
            }),
            VarietySpec::CompleteIntersection { .. } => Err(Error::Capability(
                "sectional genus for general complete intersections is not provided".into(),
            )),
        }
    }
}

/// rdeg Σ(Z) = 2 deg Z + 2 g(Z) − 2; only defined for deg Z ≥ 2, where the
/// tangency locus is a hypersurface in the Grassmannian.
pub fn hurwitz_rdeg(p: &HurwitzParams) -> Result<u64> {
    if p.deg_z < 2 {
        return Err(Error::Capability(
            "deg Z = 1: the tangency locus is not a hypersurface and has no relative degree".into(),
        ));
    }
    Ok(2 * p.deg_z + 2 * p.sectional_genus - 2)
}

/// vol(Σ(Z))/vol(G) = (2/π)(deg Z + g(Z) − 1)·dim Z·(codim Z + 1).
pub fn hurwitz_vol_ratio(p: &HurwitzParams) -> Result<PiVolume> {
    let _ = hurwitz_rdeg(p)?;
    let factor = 2 * (p.deg_z + p.sectional_genus - 1) * p.dim_z * (p.codim_z + 1);
    Ok(PiVolume::new(BigRational::from_integer(BigInt::from(factor)), -1))
}

/// Variety classes with a closed-form sectional genus. The plane-curve and
/// hypersurface values are the classical genus formula for a smooth plane
/// curve of degree d (a generic curve section of a hypersurface is one);
/// rational curves have genus 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenusClass {
    PlaneCurve { degree: u64 },
    Hypersurface { degree: u64 },
    RationalCurve,
}

pub fn sectional_genus(kind: GenusClass) -> Result<u64> {
    match kind {
        GenusClass::PlaneCurve { degree } | GenusClass::Hypersurface { degree } => {
            if degree == 0 {
                return Err(Error::Capability("degree-zero input has no genus".into()));
            }
            Ok((degree - 1) * (degree - 2) / 2)
        }
        GenusClass::RationalCurve => Ok(0),
    }
}
