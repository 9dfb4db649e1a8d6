//! Design of the copier that maximises the Holevo information of its copies.
//!
//! For a copy Bloch length `r ∈ [√(1−f), 1]` the opening angle `φ` between
//! the two copies is fixed by a quartic in `cos φ`; the information is then
//! maximised over `r`. The result is checked against the overlap and
//! normalisation constraints it was derived from.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infomeasures::ultimate_info_from_bloch;
use crate::numeric::check_unit_interval;
use crate::search::grid_then_golden_max;
use crate::tolerance;

/// Grid resolution of the scan over `r` before golden-section refinement.
pub const R_GRID_POINTS: usize = 513;

const NEWTON_POLISH_STEPS: usize = 5;
const OVERLAP_REFINE_STEPS: usize = 3;

/// Coefficients of `c4·c⁴ + c3·c³ + c2·c² + c1·c + c0` in `c = cos φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticCoefficients {
    pub c4: f64,
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl QuarticCoefficients {
    /// Coefficients from the leading one down.
    pub fn to_array(&self) -> [f64; 5] {
        [self.c4, self.c3, self.c2, self.c1, self.c0]
    }

    pub fn eval(&self, c: f64) -> f64 {
        (((self.c4 * c + self.c3) * c + self.c2) * c + self.c1) * c + self.c0
    }

    pub fn derivative(&self, c: f64) -> f64 {
        ((4.0 * self.c4 * c + 3.0 * self.c3) * c + 2.0 * self.c2) * c + self.c1
    }

    /// Real roots in descending order, repeated according to multiplicity.
    ///
    /// Roots come from the eigenvalues of the companion matrix. A conjugate
    /// pair whose imaginary part is tiny relative to its real part is read as
    /// a (near-)double real root. Each root is then Newton-polished.
    pub fn real_roots(&self) -> Vec<f64> {
        let all = self.to_array();
        let scale = all.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        if !(scale > 0.0) || !scale.is_finite() {
            return Vec::new();
        }
        let lead = all
            .iter()
            .position(|c| c.abs() > 1e-14 * scale)
            .expect("nonzero scale");
        let poly = &all[lead..];
        let degree = poly.len() - 1;

        let mut roots: Vec<f64> = match degree {
            0 => Vec::new(),
            1 => vec![-poly[1] / poly[0]],
            _ => {
                let companion = DMatrix::from_fn(degree, degree, |i, j| {
                    if i == 0 {
                        -poly[j + 1] / poly[0]
                    } else if i == j + 1 {
                        1.0
                    } else {
                        0.0
                    }
                });
                companion
                    .complex_eigenvalues()
                    .iter()
                    // eigenvalues of a real matrix come in conjugate pairs, so
                    // this keeps both members of a near-double pair
                    .filter(|z| z.im.abs() <= tolerance::ROOT_NEAR_DOUBLE * z.re.abs().max(1.0))
                    .map(|z| z.re)
                    .collect()
            }
        };
        for root in roots.iter_mut() {
            *root = self.polish(*root);
        }
        roots.sort_by(|a, b| b.total_cmp(a));
        roots
    }

    /// Newton steps on the polynomial, each kept only if it lowers the residual.
    fn polish(&self, mut c: f64) -> f64 {
        let mut res = self.eval(c).abs();
        for _ in 0..NEWTON_POLISH_STEPS {
            let d = self.derivative(c);
            if d == 0.0 || res == 0.0 {
                break;
            }
            let next = c - self.eval(c) / d;
            let next_res = self.eval(next).abs();
            if !(next_res < res) {
                break;
            }
            c = next;
            res = next_res;
        }
        c
    }

    /// The second-largest real root, clamped to `[−1, 1]`, provided it lies
    /// within the acceptance window and its residual is small.
    pub fn cos_phi_root(&self) -> Option<f64> {
        let roots = self.real_roots();
        let c = *roots.get(1)?;
        let w = tolerance::ROOT_WINDOW;
        if !(-1.0 - w..=1.0 + w).contains(&c) {
            return None;
        }
        let c = c.clamp(-1.0, 1.0);
        (self.eval(c).abs() < tolerance::ROOT_RESIDUAL).then_some(c)
    }
}

fn check_r_bracket(f: f64, r: f64) -> Result<(f64, f64)> {
    let f = check_unit_interval(f, "f", 0.0)?;
    let r0 = (1.0 - f).sqrt();
    if r.is_nan() || r < r0 - 1e-12 || r > 1.0 + 1e-12 {
        return Err(Error::domain("r", r, "[√(1−f), 1]"));
    }
    Ok((f, r.clamp(r0, 1.0)))
}

/// Quartic whose second-largest real root is `cos φ` at copy Bloch length `r`.
pub fn quartic_coeffs(f: f64, r: f64) -> Result<QuarticCoefficients> {
    let (f, r) = check_r_bracket(f, r)?;
    let r2 = r * r;
    let s = (1.0 - r2).max(0.0).sqrt();
    Ok(QuarticCoefficients {
        c4: r2 * (2.0 - r2 - 2.0 * s),
        c3: 4.0 * r2 * (1.0 - s),
        c2: 2.0 * (r2 * r2 + 2.0 * r2 + 4.0 * f * (s - 1.0)),
        c1: 4.0 * r2 * (1.0 + s - 4.0 * f),
        c0: (4.0 * f - 1.0).powi(2) - (1.0 - r2).powi(2) + 2.0 * (r2 - 4.0 * f) * s,
    })
}

/// `cos φ` of the copies at Bloch length `r`.
pub fn cos_phi_of_r(f: f64, r: f64) -> Result<f64> {
    let coeffs = quartic_coeffs(f, r)?;
    if f == 0.0 {
        // bracket is r = 1 and the quartic is (c + 1)⁴; the eigen-solver
        // smears a quadruple root into a complex cluster
        return Ok(-1.0);
    }
    coeffs
        .cos_phi_root()
        .ok_or_else(|| Error::Infeasible {
            f,
            r,
            reason: "quartic has no admissible second-largest real root".into(),
        })
}

/// Holevo information of the copies produced at Bloch length `r`.
pub fn ih_of_r(f: f64, r: f64) -> Result<f64> {
    let c = cos_phi_of_r(f, r)?;
    ultimate_info_from_bloch(r, r * (0.5 * (1.0 + c)).sqrt())
}

/// Squared amplitude `x` of the first transformation component.
pub fn display_x(r: f64, cos_phi: f64) -> f64 {
    let s = (1.0 - r * r).max(0.0).sqrt();
    let c = cos_phi;
    0.5 * (1.0 + c * c + 2.0 * r * c + s * (1.0 - c * c))
}

fn x_cross_term(r: f64, c: f64, x: f64) -> f64 {
    (x * (x - 2.0 * r * c)).max(0.0).sqrt()
}

/// Residual of the overlap constraint with unit sign choices.
pub fn overlap_residual(f: f64, r: f64, cos_phi: f64, x: f64) -> f64 {
    let s = (1.0 - r * r).max(0.0).sqrt();
    x + r * (r - 1.0) * cos_phi + s * x_cross_term(r, cos_phi, x) - 2.0 * f
}

/// Residual of the normalisation constraint with unit sign choices.
pub fn norm_residual(r: f64, cos_phi: f64, x: f64) -> f64 {
    let c = cos_phi;
    r * r * (1.0 - c * c) - 2.0 * (1.0 + r * c - x) * (x - r * c + x_cross_term(r, c, x))
}

/// Newton steps on the overlap constraint with `x` tied to `c`.
///
/// Near `f → 1` the selected quartic root sits beside another root and is
/// only good to about `1e-12`; the constraint itself is well conditioned.
fn refine_on_overlap(f: f64, r: f64, c0: f64) -> f64 {
    let s = (1.0 - r * r).max(0.0).sqrt();
    let g = |c: f64| overlap_residual(f, r, c, display_x(r, c));
    let mut c = c0;
    let mut gc = g(c);
    for _ in 0..OVERLAP_REFINE_STEPS {
        let x = display_x(r, c);
        let a = x * (x - 2.0 * r * c);
        if !(a > 0.0) || gc == 0.0 {
            break;
        }
        let dx = c + r - s * c;
        let da = dx * (x - 2.0 * r * c) + x * (dx - 2.0 * r);
        let dg = dx + r * (r - 1.0) + s * da / (2.0 * a.sqrt());
        let step = -gc / dg;
        if !step.is_finite() || step.abs() >= 1e-8 {
            break;
        }
        let next = (c + step).clamp(-1.0, 1.0);
        let g_next = g(next);
        if !(g_next.abs() < gc.abs()) {
            break;
        }
        c = next;
        gc = g_next;
    }
    c
}

/// Parameters of the information-optimal copier at overlap `f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UltimateCopierSolution {
    pub f: f64,
    pub r_m: f64,
    pub phi_m: f64,
    pub cos_phi_m: f64,
    pub x: f64,
    pub ih: f64,
}

impl UltimateCopierSolution {
    /// Completes a solution from `(r, cos φ)`.
    pub fn from_root(f: f64, r: f64, cos_phi: f64) -> Result<Self> {
        let c = cos_phi.clamp(-1.0, 1.0);
        let ih = ultimate_info_from_bloch(r, r * (0.5 * (1.0 + c)).sqrt())?;
        Ok(Self {
            f,
            r_m: r,
            phi_m: c.acos(),
            cos_phi_m: c,
            x: display_x(r, c),
            ih,
        })
    }

    pub fn cos_phi(&self) -> f64 {
        self.cos_phi_m
    }

    /// Half the distance between the copy Bloch vectors, `r sin(φ/2)`.
    pub fn q(&self) -> f64 {
        self.r_m * (0.5 * (1.0 - self.cos_phi_m)).max(0.0).sqrt()
    }

    /// Length of the mean copy Bloch vector, `r cos(φ/2)`.
    pub fn q_h(&self) -> f64 {
        self.r_m * (0.5 * (1.0 + self.cos_phi_m)).max(0.0).sqrt()
    }

    /// Below the threshold overlap the optimum is the basis-copying copier.
    pub fn is_wz_regime(&self) -> bool {
        self.cos_phi_m <= -1.0
    }
}

/// Maximises the Holevo information of the copies over `r ∈ [√(1−f), 1]`.
///
/// `f = 0` gives the exact cloner; `f = 1` is canonicalised to `r = 1, φ = 0`.
pub fn maximize_ih(f: f64) -> Result<UltimateCopierSolution> {
    let f = check_unit_interval(f, "f", 0.0)?;
    if f == 0.0 {
        return UltimateCopierSolution::from_root(f, 1.0, -1.0);
    }
    if f == 1.0 {
        return UltimateCopierSolution::from_root(f, 1.0, 1.0);
    }
    let r0 = (1.0 - f).sqrt();
    let best = grid_then_golden_max(
        |r| ih_of_r(f, r).unwrap_or(f64::NEG_INFINITY),
        r0,
        1.0,
        R_GRID_POINTS,
        tolerance::R_RESOLUTION,
    );
    if !best.value.is_finite() {
        return Err(Error::Infeasible {
            f,
            r: r0,
            reason: "no admissible r in the bracket".into(),
        });
    }
    let r = best.x;
    let mut c = cos_phi_of_r(f, r)?;
    if c < -1.0 + tolerance::WZ_SNAP {
        c = -1.0;
    } else {
        c = refine_on_overlap(f, r, c);
    }
    UltimateCopierSolution::from_root(f, r, c)
}

/// Values of the two constraints at a solution, with unit sign choices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityWitness {
    pub x: f64,
    pub k: f64,
    pub c: f64,
    pub residual_f: f64,
    pub residual_n: f64,
}

/// Confirms that `sol` satisfies the overlap and normalisation constraints
/// with `K = C = 1` and a common `x`.
pub fn feasibility_check(f: f64, sol: &UltimateCopierSolution) -> Result<FeasibilityWitness> {
    let f = check_unit_interval(f, "f", 0.0)?;
    if (sol.f - f).abs() > 1e-15 {
        return Err(Error::Consistency(format!(
            "solution was computed for f = {}, checked at f = {f}",
            sol.f
        )));
    }
    let (r, c, x) = (sol.r_m, sol.cos_phi_m, sol.x);
    let slack = tolerance::AMPLITUDE_RADICAND;
    let lower = (2.0 * r * c).max(0.0);
    if !(x >= lower - slack && x <= 2.0 + slack && 1.0 - x + r * c >= -slack) {
        return Err(Error::Consistency(format!(
            "x = {x} outside its admissible range at f = {f}, r = {r}, cos φ = {c}"
        )));
    }
    let witness = FeasibilityWitness {
        x,
        k: 1.0,
        c: 1.0,
        residual_f: overlap_residual(f, r, c, x),
        residual_n: norm_residual(r, c, x),
    };
    if witness.residual_f.abs() >= tolerance::FEASIBILITY
        || witness.residual_n.abs() >= tolerance::FEASIBILITY
    {
        return Err(Error::Consistency(format!(
            "constraints violated at f = {f}: overlap residual {:e}, norm residual {:e}",
            witness.residual_f, witness.residual_n
        )));
    }
    Ok(witness)
}

/// Column order of the published matrix, as canonical basis indices.
const U_COLUMN_TO_CANONICAL: [usize; 4] = [0, 3, 1, 2];

/// Orthogonal change of basis taking the transformation amplitudes to the
/// canonical product basis: row `j` holds the canonical components of `b_j`.
pub fn build_basis_matrix(phi_m: f64) -> [[f64; 4]; 4] {
    let (s, c) = (0.5 * phi_m).sin_cos();
    let u = [
        [1.0 + s, 1.0 - s, c, c],
        [1.0 - s, 1.0 + s, -c, -c],
        [-c, c, 1.0 + s, s - 1.0],
        [-c, c, s - 1.0, 1.0 + s],
    ];
    let mut out = [[0.0; 4]; 4];
    for (j, row) in u.iter().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            out[j][U_COLUMN_TO_CANONICAL[k]] = 0.5 * v;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn coefficients_at_half_and_point_eight() {
        let q = quartic_coeffs(0.5, 0.8).unwrap();
        let expected = [0.1024, 1.024, 1.7792, -1.024, -0.7616];
        for (a, b) in q.to_array().iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn roots_at_half_and_point_eight() {
        let q = quartic_coeffs(0.5, 0.8).unwrap();
        let roots = q.real_roots();
        let expected = [
            0.767_766_952_966_368_8,
            -0.464_466_094_067_262_4,
            -2.767_766_952_966_368_8,
            -7.535_533_905_932_737_6,
        ];
        assert_eq!(roots.len(), 4);
        for (a, b) in roots.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
            assert!(q.eval(*a).abs() < 1e-8);
        }
        assert_abs_diff_eq!(cos_phi_of_r(0.5, 0.8).unwrap(), expected[1], epsilon = 1e-12);
    }

    #[test]
    fn minus_one_is_a_root_at_lower_bracket() {
        let r0 = 0.9f64.sqrt();
        let q = quartic_coeffs(0.1, r0).unwrap();
        assert!(q.eval(-1.0).abs() < 1e-9);
        assert_abs_diff_eq!(cos_phi_of_r(0.1, r0).unwrap(), -1.0, epsilon = 1e-8);
    }

    #[test]
    fn unit_r_quartic_is_a_square() {
        let f: f64 = 0.3;
        let q = quartic_coeffs(f, 1.0).unwrap();
        assert_eq!(q.c4, 1.0);
        // (c² + 2c + 1 − 4f)²
        let a = 1.0 - 4.0 * f;
        let expected = [1.0, 4.0, 2.0 * a + 4.0, 4.0 * a, a * a];
        for (x, y) in q.to_array().iter().zip(expected) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-14);
        }
        let roots = q.real_roots();
        assert_eq!(roots.len(), 4);
        assert_abs_diff_eq!(roots[1], -1.0 + 2.0 * f.sqrt(), epsilon = 1e-7);
        assert_abs_diff_eq!(cos_phi_of_r(f, 1.0).unwrap(), -1.0 + 2.0 * f.sqrt(), epsilon = 1e-7);
    }

    #[test]
    fn far_largest_root_does_not_disturb_selection() {
        let f: f64 = 0.99;
        let roots = quartic_coeffs(f, 0.1).unwrap().real_roots();
        assert!(roots[0] > 10.0);
        assert_abs_diff_eq!(roots[1], -1.0, epsilon = 1e-8);
    }

    #[test]
    fn out_of_bracket_r_is_rejected() {
        assert!(matches!(quartic_coeffs(0.5, 0.5), Err(Error::Domain { .. })));
        assert!(matches!(quartic_coeffs(0.5, 1.01), Err(Error::Domain { .. })));
        assert!(matches!(quartic_coeffs(1.2, 1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn degenerate_polynomial_has_no_root() {
        let zero = QuarticCoefficients { c4: 0.0, c3: 0.0, c2: 0.0, c1: 0.0, c0: 0.0 };
        assert!(zero.real_roots().is_empty());
        assert_eq!(zero.cos_phi_root(), None);
        let linear = QuarticCoefficients { c4: 0.0, c3: 0.0, c2: 0.0, c1: 2.0, c0: 1.0 };
        assert_eq!(linear.real_roots(), vec![-0.5]);
    }

    #[test]
    fn wz_regime_below_threshold() {
        let sol = maximize_ih(0.1).unwrap();
        assert_eq!(sol.r_m, 0.9f64.sqrt());
        assert_eq!(sol.cos_phi_m, -1.0);
        assert!(sol.is_wz_regime());
        assert_abs_diff_eq!(sol.ih, 0.827_872_137_216_183_1, epsilon = 1e-14);
        feasibility_check(0.1, &sol).unwrap();
    }

    #[test]
    fn interior_optimum_at_half() {
        let sol = maximize_ih(0.5).unwrap();
        assert_abs_diff_eq!(sol.r_m, 0.98208, epsilon = 1e-4);
        assert_abs_diff_eq!(sol.cos_phi_m, 0.27816, epsilon = 1e-4);
        assert_abs_diff_eq!(sol.ih, 0.418353, epsilon = 1e-6);
        let w = feasibility_check(0.5, &sol).unwrap();
        assert!(w.residual_f.abs() < 1e-8 && w.residual_n.abs() < 1e-8);
        let q = quartic_coeffs(0.5, sol.r_m).unwrap();
        assert!(q.eval(sol.cos_phi_m).abs() < 1e-8);
    }

    #[test]
    fn endpoints_are_canonical() {
        let zero = maximize_ih(0.0).unwrap();
        assert_eq!((zero.r_m, zero.phi_m, zero.x, zero.ih), (1.0, std::f64::consts::PI, 0.0, 1.0));
        let one = maximize_ih(1.0).unwrap();
        assert_eq!((one.r_m, one.phi_m, one.x, one.ih), (1.0, 0.0, 2.0, 0.0));
        assert!(maximize_ih(-0.01).is_err());
    }

    #[test]
    fn feasibility_rejects_mismatched_f_and_perturbed_x() {
        let sol = maximize_ih(0.5).unwrap();
        assert!(matches!(feasibility_check(0.6, &sol), Err(Error::Consistency(_))));
        let bad = UltimateCopierSolution { x: sol.x + 1e-3, ..sol };
        assert!(matches!(feasibility_check(0.5, &bad), Err(Error::Consistency(_))));
    }

    #[test]
    fn basis_matrix_is_orthogonal() {
        for phi in [0.0, 0.3, 1.0, 2.5, std::f64::consts::PI] {
            let u = build_basis_matrix(phi);
            for i in 0..4 {
                for j in 0..4 {
                    let dot: f64 = (0..4).map(|k| u[i][k] * u[j][k]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(dot, want, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn basis_matrix_at_pi_copies_the_basis() {
        let u = build_basis_matrix(std::f64::consts::PI);
        // b1 → |++⟩, b2 → |−−⟩
        assert_abs_diff_eq!(u[0][0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u[1][3], 1.0, epsilon = 1e-15);
    }
}
