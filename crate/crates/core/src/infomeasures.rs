//! Information carried by a pair of equiprobable qubit states: the one-state
//! (single-copy measurement) information, the Holevo quantity, baselines for
//! the uncopied inputs, and a measurement-scan oracle.

use std::f64::consts::{LN_2, PI};

use crate::copiers::CopierOutput;
use crate::error::{Error, Result};
use crate::numeric::{check_unit_interval, xlog2x};
use crate::qstate::{von_neumann_entropy, BlochVector, DensityMatrix2};
use crate::search::golden_section_max;
use crate::tolerance;

/// Number of measurement angles scanned by [`accessible_info_oracle`].
pub const ORACLE_SCAN_POINTS: usize = 2048;

/// `½[(1+q)log₂(1+q) + (1−q)log₂(1−q)]` without domain checks.
pub(crate) fn binary_info(q: f64) -> f64 {
    let q = q.clamp(0.0, 1.0);
    if q == 1.0 {
        return 1.0;
    }
    if q < 0.05 {
        // Σ q²ᵏ / (2k(2k−1)) avoids the cancellation of the closed form
        let q2 = q * q;
        let (mut term, mut sum) = (q2, 0.0);
        for k in 1..=12 {
            let n = (2 * k) as f64;
            sum += term / (n * (n - 1.0));
            term *= q2;
        }
        return sum / LN_2;
    }
    let v = 0.5 * ((1.0 + q) * q.ln_1p() + (1.0 - q) * (-q).ln_1p()) / LN_2;
    v.clamp(0.0, 1.0)
}

/// Information per state obtainable from two equiprobable states whose Bloch
/// vectors are `±q` apart (half distance), measured one at a time.
pub fn binary_info_from_q(q: f64) -> Result<f64> {
    if q.is_nan() || q < -tolerance::RADICAND || q > 1.0 + tolerance::RADICAND {
        return Err(Error::domain("q", q, "[0, 1]"));
    }
    Ok(binary_info(q))
}

/// One-state information of a copier's output pair.
pub fn one_state_info(out: &CopierOutput) -> f64 {
    binary_info(out.q)
}

/// `S(p₁ρ₁ + p₂ρ₂) − p₁S(ρ₁) − p₂S(ρ₂)` in bits.
pub fn holevo_two_state(rho1: &DensityMatrix2, rho2: &DensityMatrix2, p1: f64) -> Result<f64> {
    let p1 = check_unit_interval(p1, "p1", 0.0)?;
    let avg = rho1.mix(rho2, p1);
    let chi = von_neumann_entropy(&avg)
        - p1 * von_neumann_entropy(rho1)
        - (1.0 - p1) * von_neumann_entropy(rho2);
    Ok(chi.clamp(0.0, 1.0))
}

/// Holevo quantity of an equiprobable symmetric pair of copies with Bloch
/// length `r` and mean-vector length `q_h`.
pub fn ultimate_info_from_bloch(r: f64, q_h: f64) -> Result<f64> {
    let r = check_unit_interval(r, "r", tolerance::RADICAND)?;
    let q_h = check_unit_interval(q_h, "q_H", tolerance::RADICAND)?;
    if q_h > r + tolerance::RADICAND {
        return Err(Error::domain("q_H − r", q_h - r, "(−∞, 0]"));
    }
    Ok((binary_info(r) - binary_info(q_h.min(r))).max(0.0))
}

/// One-state information of the uncopied inputs.
pub fn i1_baseline(f: f64) -> Result<f64> {
    let f = check_unit_interval(f, "f", 0.0)?;
    Ok(binary_info((1.0 - f).sqrt()))
}

/// Holevo information of the uncopied (pure) inputs.
pub fn ih_baseline(f: f64) -> Result<f64> {
    let f = check_unit_interval(f, "f", 0.0)?;
    Ok((1.0 - binary_info(f.sqrt())).max(0.0))
}

/// Conditional outcome probabilities `P(j | i)` for two equiprobable inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementStatistics {
    rows: [Vec<f64>; 2],
}

impl MeasurementStatistics {
    /// Rows must have equal length, entries in `[0, 1]` and unit sums (within `1e-12`).
    pub fn new(row1: Vec<f64>, row2: Vec<f64>) -> Result<Self> {
        if row1.is_empty() || row1.len() != row2.len() {
            return Err(Error::Consistency(format!(
                "outcome rows of length {} and {}",
                row1.len(),
                row2.len()
            )));
        }
        for row in [&row1, &row2] {
            if row.iter().any(|p| !(-1e-12..=1.0 + 1e-12).contains(p)) {
                return Err(Error::Consistency(format!("probability outside [0, 1] in {row:?}")));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::Consistency(format!("row sums to {total}")));
            }
        }
        Ok(Self { rows: [row1, row2] })
    }

    /// Two-outcome projective measurement along unit Bloch direction `n`.
    pub fn projective(n: BlochVector, r1: BlochVector, r2: BlochVector) -> Self {
        let row = |r: BlochVector| {
            let p = (0.5 * (1.0 + n.dot(&r))).clamp(0.0, 1.0);
            vec![p, 1.0 - p]
        };
        Self {
            rows: [row(r1), row(r2)],
        }
    }

    pub fn cond_probs(&self) -> &[Vec<f64>; 2] {
        &self.rows
    }

    /// Outcome probabilities with equal priors.
    pub fn marginals(&self) -> Vec<f64> {
        self.rows[0]
            .iter()
            .zip(&self.rows[1])
            .map(|(a, b)| 0.5 * (a + b))
            .collect()
    }
}

/// Shannon mutual information between input label and outcome, in bits.
pub fn mutual_information(stats: &MeasurementStatistics) -> f64 {
    let marg = stats.marginals();
    let h_marg: f64 = -marg.iter().map(|&p| xlog2x(p)).sum::<f64>();
    let h_cond: f64 = stats
        .rows
        .iter()
        .map(|row| -0.5 * row.iter().map(|&p| xlog2x(p)).sum::<f64>())
        .sum();
    (h_marg - h_cond).max(0.0)
}

/// Best mutual information over two-outcome projective measurements in the
/// plane containing both Bloch vectors: a uniform scan of the measurement
/// angle followed by golden-section refinement.
pub fn accessible_info_oracle(rho1: &DensityMatrix2, rho2: &DensityMatrix2) -> f64 {
    let (r1, r2) = (rho1.bloch(), rho2.bloch());
    let Some(e1) = (r1 - r2).normalized() else {
        return 0.0;
    };
    let sum = r1 + r2;
    let e2 = (sum - e1 * e1.dot(&sum))
        .normalized()
        .unwrap_or_else(|| any_perpendicular(e1));

    let info = |chi: f64| {
        let n = e1 * chi.cos() + e2 * chi.sin();
        mutual_information(&MeasurementStatistics::projective(n, r1, r2))
    };

    let step = PI / ORACLE_SCAN_POINTS as f64;
    let (mut best_chi, mut best) = (0.0, info(0.0));
    for k in 1..ORACLE_SCAN_POINTS {
        let chi = step * k as f64;
        let v = info(chi);
        if v > best {
            best = v;
            best_chi = chi;
        }
    }
    let refined = golden_section_max(
        info,
        best_chi - step,
        best_chi + step,
        tolerance::ANGLE_RESOLUTION,
    );
    best.max(refined.value)
}

fn any_perpendicular(e: BlochVector) -> BlochVector {
    let axis = if e.x.abs() < 0.9 {
        BlochVector::new(1.0, 0.0, 0.0)
    } else {
        BlochVector::new(0.0, 1.0, 0.0)
    };
    e.cross(&axis)
        .normalized()
        .expect("axis chosen away from e")
}
