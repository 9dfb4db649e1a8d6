//! Exact linear algebra on one qubit (2×2 density matrices) and on the
//! two-copy space (4-component pure states).
//!
//! Joint amplitudes are always ordered `(|++⟩, |+−⟩, |−+⟩, |−−⟩)`, the first
//! factor being the subsystem that carried the original.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::xlog2x;
use crate::tolerance;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Real 3-vector `r` of a qubit state `ρ = ½(I + σ·r)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ZERO: BlochVector = BlochVector::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &BlochVector) -> BlochVector {
        BlochVector::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    /// Unit vector along `self`, or `None` for a (numerically) zero vector.
    pub fn normalized(&self) -> Option<BlochVector> {
        let n = self.norm();
        (n > 1e-300).then(|| *self * (1.0 / n))
    }

    pub fn max_abs_diff(&self, other: &BlochVector) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }
}

impl Add for BlochVector {
    type Output = BlochVector;
    fn add(self, rhs: BlochVector) -> BlochVector {
        BlochVector::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for BlochVector {
    type Output = BlochVector;
    fn sub(self, rhs: BlochVector) -> BlochVector {
        BlochVector::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for BlochVector {
    type Output = BlochVector;
    fn mul(self, rhs: f64) -> BlochVector {
        BlochVector::new(self.x * rhs, self.y * rhs, self.z * rhs)
    }
}

/// A single-qubit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    m: [[Complex64; 2]; 2],
}

impl DensityMatrix2 {
    /// Validates and wraps the given entries.
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let rho = Self { m };
        rho.validate()?;
        Ok(rho)
    }

    /// Real symmetric matrix `[[a, b], [b, d]]`.
    pub fn from_real(a: f64, b: f64, d: f64) -> Result<Self> {
        let b = Complex64::new(b, 0.0);
        Self::new([[Complex64::new(a, 0.0), b], [b, Complex64::new(d, 0.0)]])
    }

    /// Projector onto the normalised ket `amps`.
    pub fn pure(amps: [Complex64; 2]) -> Result<Self> {
        let norm = (amps[0].norm_sqr() + amps[1].norm_sqr()).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState(format!("cannot normalise ket {amps:?}")));
        }
        let a = [amps[0] / norm, amps[1] / norm];
        Ok(Self::from_entries_unchecked([
            [a[0] * a[0].conj(), a[0] * a[1].conj()],
            [a[1] * a[0].conj(), a[1] * a[1].conj()],
        ]))
    }

    pub fn pure_real(a0: f64, a1: f64) -> Result<Self> {
        Self::pure([Complex64::new(a0, 0.0), Complex64::new(a1, 0.0)])
    }

    pub fn maximally_mixed() -> Self {
        Self::from_entries_unchecked([
            [Complex64::new(0.5, 0.0), ZERO],
            [ZERO, Complex64::new(0.5, 0.0)],
        ])
    }

    /// Wraps entries produced by an operation that preserves the invariants
    /// up to round-off (partial traces, Bloch reconstruction).
    pub(crate) fn from_entries_unchecked(m: [[Complex64; 2]; 2]) -> Self {
        Self { m }
    }

    /// Checks the density-matrix invariants with slack [`tolerance::STATE`].
    pub fn validate(&self) -> Result<()> {
        let m = &self.m;
        if m.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let herm = (m[0][1] - m[1][0].conj())
            .norm()
            .max(m[0][0].im.abs())
            .max(m[1][1].im.abs());
        if herm > tolerance::STATE {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > tolerance::STATE {
            return Err(Error::InvalidState(format!("trace {tr} ≠ 1")));
        }
        let det = self.det();
        if det < -tolerance::STATE || m[0][0].re < -tolerance::STATE || m[1][1].re < -tolerance::STATE
        {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (det {det:e})"
            )));
        }
        Ok(())
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[i][j]
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0].re + self.m[1][1].re
    }

    /// Real determinant `ρ₀₀ρ₁₁ − |ρ₀₁|²` (exact for Hermitian input).
    pub fn det(&self) -> f64 {
        self.m[0][0].re * self.m[1][1].re - self.m[0][1].norm_sqr()
    }

    /// Determinant with round-off-level values (as left by pure states) set to zero,
    /// so that square roots of it do not amplify the noise.
    fn det_above_roundoff(&self) -> f64 {
        let d = self.det();
        if d <= 8.0 * f64::EPSILON {
            0.0
        } else {
            d
        }
    }

    /// Eigenvalues in descending order, from trace and discriminant.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let tr = self.trace();
        // tr² − 4 det written without cancellation.
        let diff = self.m[0][0].re - self.m[1][1].re;
        let disc = (diff * diff + 4.0 * self.m[0][1].norm_sqr()).sqrt();
        (0.5 * (tr + disc), 0.5 * (tr - disc))
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        let m = &self.m;
        m[0][0].re * m[0][0].re + m[1][1].re * m[1][1].re + 2.0 * m[0][1].norm_sqr()
    }

    pub fn bloch(&self) -> BlochVector {
        let off = self.m[1][0];
        BlochVector::new(2.0 * off.re, 2.0 * off.im, self.m[0][0].re - self.m[1][1].re)
    }

    /// Inverse of [`DensityMatrix2::bloch`]; rejects `|v| > 1 + 1e-9`.
    pub fn from_bloch(v: BlochVector) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n > 1.0 + tolerance::BLOCH_REJECT {
            return Err(Error::InvalidBloch(n));
        }
        let half = |x: f64| Complex64::new(0.5 * x, 0.0);
        Ok(Self::from_entries_unchecked([
            [half(1.0 + v.z), Complex64::new(0.5 * v.x, -0.5 * v.y)],
            [Complex64::new(0.5 * v.x, 0.5 * v.y), half(1.0 - v.z)],
        ]))
    }

    /// `Tr(ρσ)`.
    pub fn trace_product(&self, other: &DensityMatrix2) -> f64 {
        let (a, b) = (&self.m, &other.m);
        (a[0][0] * b[0][0] + a[0][1] * b[1][0] + a[1][0] * b[0][1] + a[1][1] * b[1][1]).re
    }

    /// Convex combination `p·self + (1−p)·other`.
    pub fn mix(&self, other: &DensityMatrix2, p: f64) -> DensityMatrix2 {
        let mut m = [[ZERO; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z = self.m[i][j] * p + other.m[i][j] * (1.0 - p);
            }
        }
        Self::from_entries_unchecked(m)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix2) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        worst
    }

    /// `U ρ U†` for a 2×2 matrix `U` (unitarity is the caller's business).
    pub fn conjugate_by(&self, u: &[[Complex64; 2]; 2]) -> DensityMatrix2 {
        let mut tmp = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                tmp[i][j] = u[i][0] * self.m[0][j] + u[i][1] * self.m[1][j];
            }
        }
        let mut out = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = tmp[i][0] * u[j][0].conj() + tmp[i][1] * u[j][1].conj();
            }
        }
        Self::from_entries_unchecked(out)
    }
}

pub fn bloch_from_state(rho: &DensityMatrix2) -> BlochVector {
    rho.bloch()
}

pub fn state_from_bloch(v: BlochVector) -> Result<DensityMatrix2> {
    DensityMatrix2::from_bloch(v)
}

/// Von Neumann entropy in bits, from the analytic eigenvalues.
pub fn von_neumann_entropy(rho: &DensityMatrix2) -> f64 {
    let (l1, l2) = rho.eigenvalues();
    let s = -(xlog2x(l1.max(0.0)) + xlog2x(l2.max(0.0)));
    s.clamp(0.0, 1.0)
}

/// Uhlmann fidelity via the two-level identity `Tr(ρσ) + 2√(det ρ · det σ)`.
pub fn fidelity_mixed(rho1: &DensityMatrix2, rho2: &DensityMatrix2) -> f64 {
    let d1 = rho1.det_above_roundoff();
    let d2 = rho2.det_above_roundoff();
    (rho1.trace_product(rho2) + 2.0 * (d1 * d2).sqrt()).clamp(0.0, 1.0)
}

/// Which copy survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Normalised pure state of the two copies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointPureState {
    amps: [Complex64; 4],
}

impl JointPureState {
    /// Wraps amplitudes that are already normalised to within [`tolerance::JOINT_NORM`].
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !norm2.is_finite() || (norm2 - 1.0).abs() > tolerance::JOINT_NORM {
            return Err(Error::InvalidJointState(format!("squared norm {norm2} ≠ 1")));
        }
        Ok(Self { amps })
    }

    pub fn from_real(amps: [f64; 4]) -> Result<Self> {
        Self::new(amps.map(|a| Complex64::new(a, 0.0)))
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: [Complex64; 4]) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidJointState("zero or non-finite vector".into()));
        }
        Ok(Self {
            amps: amps.map(|a| a / norm),
        })
    }

    /// `|a⟩ ⊗ |b⟩` for normalised single-copy kets.
    pub fn product(a: [Complex64; 2], b: [Complex64; 2]) -> Result<Self> {
        Self::new([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &JointPureState) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Schmidt coefficients (singular values of the 2×2 amplitude matrix), descending.
    pub fn schmidt_coefficients(&self) -> (f64, f64) {
        let a = &self.amps;
        let frob2: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        let det = (a[0] * a[3] - a[1] * a[2]).norm();
        // σ₁² + σ₂² = ‖M‖², σ₁σ₂ = |det M|; recover σ₂ by division to keep it accurate.
        let disc = (frob2 * frob2 - 4.0 * det * det).max(0.0).sqrt();
        let s1 = (0.5 * (frob2 + disc)).sqrt();
        let s2 = if s1 > 0.0 { det / s1 } else { 0.0 };
        (s1, s2)
    }
}

/// Reduced state of one copy.
pub fn partial_trace(state: &JointPureState, keep: Subsystem) -> DensityMatrix2 {
    let a = &state.amps;
    // amplitude matrix M[i][j] = a[2i + j], i = first copy, j = second copy
    let el = |i: usize, j: usize| a[2 * i + j];
    let mut m = [[ZERO; 2]; 2];
    for (u, row) in m.iter_mut().enumerate() {
        for (v, z) in row.iter_mut().enumerate() {
            *z = (0..2)
                .map(|k| match keep {
                    Subsystem::First => el(u, k) * el(v, k).conj(),
                    Subsystem::Second => el(k, u) * el(k, v).conj(),
                })
                .sum();
        }
    }
    DensityMatrix2::from_entries_unchecked(m)
}

/// `|⟨a|b⟩|²`.
pub fn overlap_sq(a: &JointPureState, b: &JointPureState) -> f64 {
    a.inner(b).norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn partial_trace_of_product_basis_state() {
        let s = JointPureState::from_real([1.0, 0.0, 0.0, 0.0]).unwrap();
        let rho = partial_trace(&s, Subsystem::First);
        assert_eq!(rho, DensityMatrix2::pure_real(1.0, 0.0).unwrap());
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = JointPureState::from_real([h, 0.0, 0.0, h]).unwrap();
        for keep in [Subsystem::First, Subsystem::Second] {
            let rho = partial_trace(&s, keep);
            assert!(rho.max_abs_diff(&DensityMatrix2::maximally_mixed()) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_distinguishes_subsystems() {
        // |+⟩ ⊗ |−⟩
        let s = JointPureState::from_real([0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(partial_trace(&s, Subsystem::First).bloch(), BlochVector::new(0.0, 0.0, 1.0));
        assert_eq!(partial_trace(&s, Subsystem::Second).bloch(), BlochVector::new(0.0, 0.0, -1.0));
    }

    #[test]
    fn bloch_of_basis_and_mixed_states() {
        assert_eq!(
            DensityMatrix2::pure_real(1.0, 0.0).unwrap().bloch(),
            BlochVector::new(0.0, 0.0, 1.0)
        );
        assert_eq!(DensityMatrix2::maximally_mixed().bloch(), BlochVector::ZERO);
    }

    #[test]
    fn bloch_of_rotated_mixed_copy() {
        // ½[[1 + r cos φ, r sin φ], [r sin φ, 1 − r cos φ]] at r = 0.8, φ = π/2
        let (r, phi) = (0.8_f64, std::f64::consts::FRAC_PI_2);
        let rho = DensityMatrix2::from_real(
            0.5 * (1.0 + r * phi.cos()),
            0.5 * r * phi.sin(),
            0.5 * (1.0 - r * phi.cos()),
        )
        .unwrap();
        let v = rho.bloch();
        assert_abs_diff_eq!(v.x, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(v.y, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.z, 0.0, epsilon = 1e-15);
        let back = DensityMatrix2::from_bloch(v).unwrap();
        assert!(back.max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn state_from_bloch_rejects_outside_ball() {
        assert!(matches!(
            state_from_bloch(BlochVector::new(0.0, 0.0, 1.0 + 1e-8)),
            Err(Error::InvalidBloch(_))
        ));
        assert!(state_from_bloch(BlochVector::new(0.0, 0.0, 1.0 + 1e-10)).is_ok());
        assert_eq!(
            state_from_bloch(BlochVector::ZERO).unwrap(),
            DensityMatrix2::maximally_mixed()
        );
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(von_neumann_entropy(&DensityMatrix2::pure_real(0.6, 0.8).unwrap()), 0.0);
        assert_abs_diff_eq!(
            von_neumann_entropy(&DensityMatrix2::maximally_mixed()),
            1.0,
            epsilon = 1e-15
        );
        let rho = DensityMatrix2::from_bloch(BlochVector::new(0.3, 0.0, 0.4)).unwrap();
        // −0.75 log₂ 0.75 − 0.25 log₂ 0.25
        assert_abs_diff_eq!(von_neumann_entropy(&rho), 0.811_278_124_459_132_9, epsilon = 1e-14);
    }

    #[test]
    fn fidelity_examples() {
        let rho = DensityMatrix2::from_bloch(BlochVector::new(0.1, -0.2, 0.3)).unwrap();
        assert_abs_diff_eq!(fidelity_mixed(&rho, &rho), 1.0, epsilon = 1e-14);
        let up = DensityMatrix2::pure_real(1.0, 0.0).unwrap();
        let down = DensityMatrix2::pure_real(0.0, 1.0).unwrap();
        assert_eq!(fidelity_mixed(&up, &down), 0.0);

        // pure input vs. the WZ copy at f = 0.5 (θ = π/8)
        let t = std::f64::consts::PI / 8.0;
        let psi = DensityMatrix2::pure_real(t.cos(), t.sin()).unwrap();
        let copy = DensityMatrix2::from_real(t.cos().powi(2), 0.0, t.sin().powi(2)).unwrap();
        assert_abs_diff_eq!(fidelity_mixed(&psi, &copy), 0.75, epsilon = 1e-15);
    }

    #[test]
    fn overlap_examples() {
        let a = JointPureState::from_real([0.6, 0.0, 0.0, 0.8]).unwrap();
        assert_abs_diff_eq!(overlap_sq(&a, &a), 1.0, epsilon = 1e-15);
        let e1 = JointPureState::from_real([0.0, 1.0, 0.0, 0.0]).unwrap();
        let e2 = JointPureState::from_real([0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(overlap_sq(&e1, &e2), 0.0);
    }

    #[test]
    fn invalid_matrices_are_rejected() {
        assert!(DensityMatrix2::from_real(0.7, 0.0, 0.7).is_err());
        assert!(DensityMatrix2::from_real(1.2, 0.0, -0.2).is_err());
        assert!(DensityMatrix2::from_real(0.5, 0.6, 0.5).is_err());
        let nonherm = [[c(0.5), Complex64::new(0.1, 0.1)], [Complex64::new(0.1, 0.1), c(0.5)]];
        assert!(DensityMatrix2::new(nonherm).is_err());
        assert!(JointPureState::from_real([1.0, 1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn schmidt_coefficients_of_product_and_bell() {
        let p = JointPureState::product([c(0.6), c(0.8)], [c(0.8), c(-0.6)]).unwrap();
        let (s1, s2) = p.schmidt_coefficients();
        assert_abs_diff_eq!(s1, 1.0, epsilon = 1e-15);
        assert!(s2 < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let b = JointPureState::from_real([h, 0.0, 0.0, h]).unwrap();
        let (s1, s2) = b.schmidt_coefficients();
        assert_abs_diff_eq!(s1, h, epsilon = 1e-15);
        assert_abs_diff_eq!(s2, h, epsilon = 1e-15);
    }
}
