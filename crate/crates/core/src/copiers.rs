//! The six symmetric copier families and the copies they produce from the
//! two signal states `ψ₁ = cos θ|+⟩ + sin θ|−⟩` and `ψ₂ = sin θ|+⟩ + cos θ|−⟩`.
//!
//! Every family yields a mirror-symmetric pair of copies with Bloch vectors
//! `(q_H, 0, ±q)`; `q` fixes the one-state information and `(r, q_H)` the
//! Holevo information.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::check_unit_interval;
use crate::optimizer::{build_basis_matrix, maximize_ih, UltimateCopierSolution};
use crate::qstate::{partial_trace, BlochVector, DensityMatrix2, JointPureState, Subsystem};
use crate::tolerance;

/// Two equiprobable pure inputs with squared overlap `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputEnsemble {
    f: f64,
    theta: f64,
    psi1: [f64; 2],
    psi2: [f64; 2],
}

/// Builds the input pair for `f ∈ [0, 1]`, with `f = sin²2θ`.
pub fn make_ensemble(f: f64) -> Result<InputEnsemble> {
    let f = check_unit_interval(f, "f", 0.0)?;
    let theta = 0.5 * f.sqrt().asin();
    let (s, c) = theta.sin_cos();
    Ok(InputEnsemble {
        f,
        theta,
        psi1: [c, s],
        psi2: [s, c],
    })
}

impl InputEnsemble {
    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn psi1(&self) -> [f64; 2] {
        self.psi1
    }

    pub fn psi2(&self) -> [f64; 2] {
        self.psi2
    }

    pub fn priors(&self) -> (f64, f64) {
        (0.5, 0.5)
    }

    /// Pure state of input `i ∈ {1, 2}`.
    pub fn rho(&self, i: usize) -> DensityMatrix2 {
        let psi = if i == 1 { self.psi1 } else { self.psi2 };
        DensityMatrix2::pure_real(psi[0], psi[1]).expect("inputs are normalised")
    }

    /// Closed-form Bloch vectors `(√f, 0, ±√(1−f))`.
    pub fn bloch_vectors(&self) -> (BlochVector, BlochVector) {
        let (x, z) = (self.f.sqrt(), (1.0 - self.f).sqrt());
        (BlochVector::new(x, 0.0, z), BlochVector::new(x, 0.0, -z))
    }
}

/// Copier families compared throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CopierFamily {
    Wz,
    Ultimate,
    Unentangled,
    GlobalFid,
    LocalFid,
    Uqcm,
}

impl CopierFamily {
    pub const ALL: [CopierFamily; 6] = [
        CopierFamily::Wz,
        CopierFamily::Ultimate,
        CopierFamily::Unentangled,
        CopierFamily::GlobalFid,
        CopierFamily::LocalFid,
        CopierFamily::Uqcm,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            CopierFamily::Wz => "wz",
            CopierFamily::Ultimate => "ultimate",
            CopierFamily::Unentangled => "unentangled",
            CopierFamily::GlobalFid => "global_fid",
            CopierFamily::LocalFid => "local_fid",
            CopierFamily::Uqcm => "uqcm",
        }
    }

    /// Whether the family is built as an explicit isometry with joint outputs.
    pub fn has_joint_states(self) -> bool {
        matches!(
            self,
            CopierFamily::Wz | CopierFamily::Ultimate | CopierFamily::Unentangled
        )
    }
}

impl fmt::Display for CopierFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for CopierFamily {
    type Err = Error;

    /// Accepts the lowercase tags and their uppercase spellings.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        CopierFamily::ALL
            .into_iter()
            .find(|fam| fam.tag() == lower)
            .ok_or_else(|| Error::UnknownCopier(s.to_string()))
    }
}

/// Copies produced for each input, with their Bloch parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CopierOutput {
    pub family: CopierFamily,
    pub copy1: DensityMatrix2,
    pub copy2: DensityMatrix2,
    pub joint1: Option<JointPureState>,
    pub joint2: Option<JointPureState>,
    pub q: f64,
    pub r: f64,
    pub q_h: f64,
    pub local_fidelity: f64,
}

fn real_amps(a: [f64; 4]) -> [Complex64; 4] {
    a.map(|v| Complex64::new(v, 0.0))
}

/// Copy pair with Bloch vectors `(q_H, 0, ±q)`.
fn mirror_pair(q: f64, q_h: f64) -> Result<(DensityMatrix2, DensityMatrix2)> {
    Ok((
        DensityMatrix2::from_bloch(BlochVector::new(q_h, 0.0, q))?,
        DensityMatrix2::from_bloch(BlochVector::new(q_h, 0.0, -q))?,
    ))
}

/// Fidelity of a `(q_H, 0, ±q)` copy with its input.
fn fidelity_from_params(f: f64, q: f64, q_h: f64) -> f64 {
    0.5 * (1.0 + q * (1.0 - f).sqrt() + q_h * f.sqrt())
}

/// Basis copying `|±⟩ → |±±⟩`.
pub fn wz_copier(ens: &InputEnsemble) -> CopierOutput {
    let [c, s] = ens.psi1;
    let joint1 = JointPureState::from_real([c, 0.0, 0.0, s]).expect("normalised");
    let joint2 = JointPureState::from_real([s, 0.0, 0.0, c]).expect("normalised");
    let (c2, s2) = (c * c, s * s);
    let q = (1.0 - ens.f).sqrt();
    CopierOutput {
        family: CopierFamily::Wz,
        copy1: DensityMatrix2::from_entries_unchecked(diag(c2, s2)),
        copy2: DensityMatrix2::from_entries_unchecked(diag(s2, c2)),
        joint1: Some(joint1),
        joint2: Some(joint2),
        q,
        r: q,
        q_h: 0.0,
        local_fidelity: 1.0 - 0.5 * ens.f,
    }
}

fn diag(a: f64, b: f64) -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    [[Complex64::new(a, 0.0), z], [z, Complex64::new(b, 0.0)]]
}

/// Copies of each input produced by repeated basis copying into `n_copies` qubits.
///
/// The reduced copies are diagonal, so every further basis-copying step
/// reproduces the same diagonal state.
pub fn wz_cascade(ens: &InputEnsemble, n_copies: usize) -> Result<[Vec<DensityMatrix2>; 2]> {
    if n_copies < 2 {
        return Err(Error::domain("n_copies", n_copies as f64, "[2, ∞)"));
    }
    let base = wz_copier(ens);
    let duplicate = |rho: &DensityMatrix2| {
        let mut copies = vec![*rho, *rho];
        while copies.len() < n_copies {
            let last = copies[copies.len() - 1];
            let (p0, p1) = (last.entry(0, 0).re, last.entry(1, 1).re);
            copies.push(DensityMatrix2::from_entries_unchecked(diag(p0, p1)));
        }
        copies
    };
    Ok([duplicate(&base.copy1), duplicate(&base.copy2)])
}

/// Information-optimal copier for the solution `sol` found at the same `f`.
pub fn ultimate_copier(ens: &InputEnsemble, sol: &UltimateCopierSolution) -> Result<CopierOutput> {
    if (sol.f - ens.f).abs() > 1e-15 {
        return Err(Error::Construction(format!(
            "solution for f = {} applied to inputs with f = {}",
            sol.f, ens.f
        )));
    }
    if sol.is_wz_regime() {
        return Ok(CopierOutput {
            family: CopierFamily::Ultimate,
            ..wz_copier(ens)
        });
    }

    let (r, c, x) = (sol.r_m, sol.cos_phi_m, sol.x);
    let amp = |v: f64, what: &str| -> Result<f64> {
        if v < -tolerance::AMPLITUDE_RADICAND || !v.is_finite() {
            return Err(Error::Construction(format!(
                "{what} radicand {v:e} at f = {}, r = {r}, cos φ = {c}",
                ens.f
            )));
        }
        Ok(v.max(0.0).sqrt())
    };
    let a1 = [amp(0.5 * (1.0 + r), "α₁")?, amp(0.5 * (1.0 - r), "β₁")?, 0.0, 0.0];
    let tail = amp(0.5 * (1.0 - x + r * c), "γ₂")?;
    let a2 = [amp(0.5 * x, "α₂")?, amp(0.5 * x - r * c, "β₂")?, tail, tail];

    let basis = build_basis_matrix(sol.phi_m);
    let expand = |a: [f64; 4]| {
        let mut out = [0.0; 4];
        for (j, aj) in a.iter().enumerate() {
            for (k, o) in out.iter_mut().enumerate() {
                *o += aj * basis[j][k];
            }
        }
        JointPureState::normalized(real_amps(out))
    };
    let joint1 = expand(a1)?;
    let joint2 = expand(a2)?;

    let (q, q_h) = (sol.q(), sol.q_h());
    Ok(CopierOutput {
        family: CopierFamily::Ultimate,
        copy1: partial_trace(&joint1, Subsystem::First),
        copy2: partial_trace(&joint2, Subsystem::First),
        joint1: Some(joint1),
        joint2: Some(joint2),
        q,
        r,
        q_h,
        local_fidelity: fidelity_from_params(ens.f, q, q_h),
    })
}

/// Copier producing the best product-state (unentangled) copies.
pub fn unentangled_copier(ens: &InputEnsemble) -> CopierOutput {
    let f = ens.f;
    let q = (1.0 - f.sqrt()).max(0.0).sqrt();
    let k = [(0.5 * (1.0 + q)).sqrt(), (0.5 * (1.0 - q)).sqrt()];
    let k1 = k.map(|v| Complex64::new(v, 0.0));
    let k2 = [k1[1], k1[0]];
    let joint1 = JointPureState::product(k1, k1).expect("normalised");
    let joint2 = JointPureState::product(k2, k2).expect("normalised");
    let local_fidelity = 0.5 * (f.powf(0.75) + 1.0 + ((1.0 - f) * (1.0 - f.sqrt())).sqrt());
    CopierOutput {
        family: CopierFamily::Unentangled,
        copy1: DensityMatrix2::pure(k1).expect("normalised"),
        copy2: DensityMatrix2::pure(k2).expect("normalised"),
        joint1: Some(joint1),
        joint2: Some(joint2),
        q,
        r: 1.0,
        q_h: f.sqrt().sqrt(),
        local_fidelity,
    }
}

/// Copier maximising the fidelity of the joint output with two perfect copies.
pub fn global_fid_copier(ens: &InputEnsemble) -> Result<CopierOutput> {
    let f = ens.f;
    let u = f.sqrt();
    let q = ((1.0 - f) / (1.0 + f)).sqrt();
    let q_h = (f + u) / (1.0 + f);
    let r = (1.0 + f * (1.0 + 2.0 * u)).sqrt() / (1.0 + f);
    let (copy1, copy2) = mirror_pair(q, q_h)?;
    let local_fidelity = 0.5 * (1.0 + ((1.0 - f) * (1.0 + f).sqrt() + f * (1.0 + u)) / (1.0 + f));
    Ok(CopierOutput {
        family: CopierFamily::GlobalFid,
        copy1,
        copy2,
        joint1: None,
        joint2: None,
        q,
        r,
        q_h,
        local_fidelity,
    })
}

/// `sin 2φ` of the local-fidelity copier, written without a `0/0` at `f = 0`.
pub fn local_fid_sin_2phi(f: f64) -> f64 {
    if f < 1e-12 {
        return 0.0;
    }
    let u = f.sqrt();
    2.0 * u / ((1.0 - 2.0 * u + 9.0 * f).sqrt() + 1.0 - u)
}

/// Copier maximising the fidelity of each copy with its input.
pub fn local_fid_copier(ens: &InputEnsemble) -> Result<CopierOutput> {
    let f = ens.f;
    let u = f.sqrt();
    let s2 = local_fid_sin_2phi(f);
    let c2 = (1.0 - s2 * s2).max(0.0).sqrt();
    let q = (1.0 - f).sqrt() * c2;
    let q_h = s2 * c2 * (1.0 + u);
    let r = c2 * (1.0 - f + (1.0 + u).powi(2) * s2 * s2).sqrt();
    let (copy1, copy2) = mirror_pair(q, q_h)?;
    let local_fidelity = 0.5 * (1.0 + c2 * (1.0 - f + u * (1.0 + u) * s2));
    Ok(CopierOutput {
        family: CopierFamily::LocalFid,
        copy1,
        copy2,
        joint1: None,
        joint2: None,
        q,
        r,
        q_h,
        local_fidelity,
    })
}

/// Universal symmetric cloner (state-independent shrinking by 2/3).
pub fn uqcm_copier(ens: &InputEnsemble) -> Result<CopierOutput> {
    let f = ens.f;
    let q = 2.0 / 3.0 * (1.0 - f).sqrt();
    let q_h = 2.0 / 3.0 * f.sqrt();
    let (copy1, copy2) = mirror_pair(q, q_h)?;
    Ok(CopierOutput {
        family: CopierFamily::Uqcm,
        copy1,
        copy2,
        joint1: None,
        joint2: None,
        q,
        r: 2.0 / 3.0,
        q_h,
        local_fidelity: 5.0 / 6.0,
    })
}

/// Runs `family` on `ens`; the information-optimal copier is optimised first.
pub fn copy(family: CopierFamily, ens: &InputEnsemble) -> Result<CopierOutput> {
    match family {
        CopierFamily::Wz => Ok(wz_copier(ens)),
        CopierFamily::Ultimate => ultimate_copier(ens, &maximize_ih(ens.f)?),
        CopierFamily::Unentangled => Ok(unentangled_copier(ens)),
        CopierFamily::GlobalFid => global_fid_copier(ens),
        CopierFamily::LocalFid => local_fid_copier(ens),
        CopierFamily::Uqcm => uqcm_copier(ens),
    }
}
