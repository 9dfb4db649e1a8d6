//! Invariant suite run over a uniform grid of overlaps.
//!
//! Every check reduces, at each grid point, to a deviation compared against a
//! fixed tolerance. The report keeps the worst deviation per check and names
//! the first grid point at which a check failed.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::copiers::{make_ensemble, ultimate_copier, wz_cascade, CopierFamily, CopierOutput};
use crate::error::{Error, Result};
use crate::infomeasures::{
    accessible_info_oracle, holevo_two_state, i1_baseline, ih_baseline, one_state_info,
    ultimate_info_from_bloch,
};
use crate::optimizer::{cos_phi_of_r, feasibility_check, maximize_ih, quartic_coeffs};
use crate::qstate::{fidelity_mixed, overlap_sq, partial_trace, Subsystem};
use crate::sweep::{uniform_grid, SweepRecord};
use crate::{copiers, tolerance};

/// Largest `f` at which the lower end of the `r` bracket must give `cos φ = −1`.
pub const WZ_REGIME_PROBE_MAX_F: f64 = 0.19;

pub const CHECK_STATES: &str = "copy states valid";
pub const CHECK_BLOCH: &str = "bloch parameters";
pub const CHECK_ISOMETRY: &str = "isometry";
pub const CHECK_SYMMETRY: &str = "symmetry";
pub const CHECK_PRODUCT: &str = "unentangled product";
pub const CHECK_LOCAL_FIDELITY: &str = "local fidelity closed form";
pub const CHECK_UQCM: &str = "uqcm fidelity 5/6";
pub const CHECK_WZ_FIDELITY: &str = "wz fidelity law";
pub const CHECK_WZ_LOSSLESS: &str = "wz lossless";
pub const CHECK_WZ_HOLEVO: &str = "wz holevo equals one-state";
pub const CHECK_WZ_CASCADE: &str = "wz cascade";
pub const CHECK_IH_CLOSED_FORM: &str = "holevo closed form";
pub const CHECK_ORACLE_MATCH: &str = "oracle matches one-state";
pub const CHECK_ORACLE_BOUND: &str = "oracle within holevo bound";
pub const CHECK_BASELINES: &str = "baseline order";
pub const CHECK_QUARTIC: &str = "quartic root residual";
pub const CHECK_FEASIBILITY: &str = "feasibility";
pub const CHECK_WZ_ROOT: &str = "wz regime root";
pub const CHECK_ORDER_IH: &str = "ordering ih ultimate max";
pub const CHECK_ORDER_FIDELITY: &str = "ordering local_fid max";
pub const CHECK_ORDER_I1: &str = "ordering i1 wz max";
pub const CHECK_INPUT_BOUND: &str = "ih below input bound";
pub const CHECK_RECORDS: &str = "record sanity";

const CHECK_ORDER: [&str; 23] = [
    CHECK_STATES,
    CHECK_BLOCH,
    CHECK_ISOMETRY,
    CHECK_SYMMETRY,
    CHECK_PRODUCT,
    CHECK_LOCAL_FIDELITY,
    CHECK_UQCM,
    CHECK_WZ_FIDELITY,
    CHECK_WZ_LOSSLESS,
    CHECK_WZ_HOLEVO,
    CHECK_WZ_CASCADE,
    CHECK_IH_CLOSED_FORM,
    CHECK_ORACLE_MATCH,
    CHECK_ORACLE_BOUND,
    CHECK_BASELINES,
    CHECK_QUARTIC,
    CHECK_FEASIBILITY,
    CHECK_WZ_ROOT,
    CHECK_ORDER_IH,
    CHECK_ORDER_FIDELITY,
    CHECK_ORDER_I1,
    CHECK_INPUT_BOUND,
    CHECK_RECORDS,
];

/// Grid size and optional fault injection for the quartic-residual check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub steps: usize,
    /// Added to the constant coefficient before root selection; the selected
    /// root is then scored against the unperturbed polynomial.
    pub quartic_fault: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            steps: 21,
            quartic_fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub steps: usize,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One `PASS`/`FAIL` line per check and a summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{tag}  {:<28} {}", c.name, c.detail);
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "{} of {} checks passed over {} grid points",
            self.checks.len() - failed,
            self.checks.len(),
            self.steps
        );
        out
    }
}

struct Obs {
    check: &'static str,
    f: f64,
    dev: f64,
    tol: f64,
    note: String,
}

struct Observer {
    f: f64,
    obs: Vec<Obs>,
}

impl Observer {
    fn dev(&mut self, check: &'static str, dev: f64, tol: f64, note: impl Into<String>) {
        self.obs.push(Obs {
            check,
            f: self.f,
            dev,
            tol,
            note: note.into(),
        });
    }

    /// Records `value ≤ bound + slack` as the deviation `value − bound`.
    fn at_most(&mut self, check: &'static str, value: f64, bound: f64, slack: f64, note: impl Into<String>) {
        self.dev(check, (value - bound).max(0.0), slack, note);
    }

    fn error(&mut self, check: &'static str, err: &Error) {
        self.dev(check, f64::INFINITY, 0.0, err.to_string());
    }
}

fn bloch_checks(o: &mut Observer, out: &CopierOutput) {
    let tag = out.family.tag();
    for rho in [&out.copy1, &out.copy2] {
        match rho.validate() {
            Ok(()) => o.dev(CHECK_STATES, 0.0, 0.0, tag),
            Err(e) => o.dev(CHECK_STATES, f64::INFINITY, 0.0, format!("{tag}: {e}")),
        }
    }
    let (b1, b2) = (out.copy1.bloch(), out.copy2.bloch());
    let devs = [
        (out.q - 0.5 * (b1 - b2).norm()).abs(),
        (out.q_h - 0.5 * (b1 + b2).norm()).abs(),
        (b1.norm() - out.r).abs(),
        (b2.norm() - out.r).abs(),
        (out.q * out.q + out.q_h * out.q_h - out.r * out.r).max(0.0),
    ];
    let worst = devs.iter().fold(0.0_f64, |m, d| m.max(*d));
    o.dev(CHECK_BLOCH, worst, 1e-12, tag);
}

fn joint_checks(o: &mut Observer, f: f64, out: &CopierOutput) {
    let tag = out.family.tag();
    let (Some(j1), Some(j2)) = (&out.joint1, &out.joint2) else {
        if out.family.has_joint_states() {
            o.dev(CHECK_ISOMETRY, f64::INFINITY, 0.0, format!("{tag}: joint states missing"));
        }
        return;
    };
    o.dev(CHECK_ISOMETRY, (overlap_sq(j1, j2) - f).abs(), 1e-12, tag);
    let mut sym: f64 = 0.0;
    for (j, rho) in [(j1, &out.copy1), (j2, &out.copy2)] {
        let first = partial_trace(j, Subsystem::First);
        let second = partial_trace(j, Subsystem::Second);
        sym = sym
            .max(first.max_abs_diff(rho))
            .max(second.max_abs_diff(rho))
            .max(first.max_abs_diff(&second));
    }
    o.dev(CHECK_SYMMETRY, sym, 1e-10, tag);
    if out.family == CopierFamily::Unentangled {
        let s2 = j1.schmidt_coefficients().1.max(j2.schmidt_coefficients().1);
        o.dev(CHECK_PRODUCT, s2, 1e-12, tag);
    }
}

fn observe(f: f64, fault: Option<f64>) -> Vec<Obs> {
    let mut o = Observer { f, obs: Vec::new() };
    if let Err(e) = observe_into(&mut o, f, fault) {
        o.error(CHECK_RECORDS, &e);
    }
    o.obs
}

fn observe_into(o: &mut Observer, f: f64, fault: Option<f64>) -> Result<()> {
    let ens = make_ensemble(f)?;
    let sol = match maximize_ih(f) {
        Ok(sol) => Some(sol),
        Err(e) => {
            o.error(CHECK_FEASIBILITY, &e);
            None
        }
    };

    let mut outputs = vec![
        copiers::wz_copier(&ens),
        copiers::unentangled_copier(&ens),
        copiers::global_fid_copier(&ens)?,
        copiers::local_fid_copier(&ens)?,
        copiers::uqcm_copier(&ens)?,
    ];
    if let Some(sol) = &sol {
        match ultimate_copier(&ens, sol) {
            Ok(out) => outputs.push(out),
            Err(e) => o.error(CHECK_ISOMETRY, &e),
        }
    }

    let (rho1, rho2) = (ens.rho(1), ens.rho(2));
    let i1_base = i1_baseline(f)?;
    let ih_base = ih_baseline(f)?;
    o.at_most(CHECK_BASELINES, i1_base, ih_base, 1e-12, "i1 vs ih baseline");

    let mut records = Vec::with_capacity(outputs.len());
    for out in &outputs {
        let tag = out.family.tag();
        bloch_checks(o, out);
        joint_checks(o, f, out);

        let fid = (fidelity_mixed(&rho1, &out.copy1) - out.local_fidelity)
            .abs()
            .max((fidelity_mixed(&rho2, &out.copy2) - out.local_fidelity).abs());
        o.dev(CHECK_LOCAL_FIDELITY, fid, 1e-10, tag);

        let i1 = one_state_info(out);
        let holevo = holevo_two_state(&out.copy1, &out.copy2, 0.5)?;
        let ih = ultimate_info_from_bloch(out.r, out.q_h)?;
        o.dev(CHECK_IH_CLOSED_FORM, (ih - holevo).abs(), 1e-10, tag);

        let oracle = accessible_info_oracle(&out.copy1, &out.copy2);
        o.dev(CHECK_ORACLE_MATCH, (oracle - i1).abs(), 1e-6, tag);
        o.at_most(CHECK_ORACLE_BOUND, oracle, holevo, 1e-9, tag);

        match out.family {
            CopierFamily::Uqcm => {
                o.dev(CHECK_UQCM, (out.local_fidelity - 5.0 / 6.0).abs(), 1e-12, tag)
            }
            CopierFamily::Wz => {
                o.dev(CHECK_WZ_FIDELITY, (out.local_fidelity - (1.0 - 0.5 * f)).abs(), 1e-12, tag);
                o.dev(CHECK_WZ_LOSSLESS, (i1 - i1_base).abs(), 1e-12, tag);
                o.dev(CHECK_WZ_HOLEVO, (holevo - i1).abs(), 1e-12, tag);
                let [c1, c2] = wz_cascade(&ens, 4)?;
                let cascade = c1
                    .iter()
                    .map(|r| r.max_abs_diff(&out.copy1))
                    .chain(c2.iter().map(|r| r.max_abs_diff(&out.copy2)))
                    .fold(0.0_f64, f64::max);
                o.dev(CHECK_WZ_CASCADE, cascade, 1e-15, tag);
            }
            _ => {}
        }

        let rec = SweepRecord::from_output(f, out)?;
        let finite = [rec.i1, rec.i1_ratio, rec.ih, rec.f_local, rec.q, rec.r, rec.q_h]
            .iter()
            .all(|v| v.is_finite());
        let ratio_ok = (0.0..=1.0 + 1e-9).contains(&rec.i1_ratio);
        o.dev(
            CHECK_RECORDS,
            if finite && ratio_ok { 0.0 } else { f64::INFINITY },
            0.0,
            format!("{tag}: i1_ratio {}", rec.i1_ratio),
        );
        records.push(rec);
    }

    ordering_checks(o, &records, ih_base);

    if f > 0.0 && f < 1.0 {
        if let Some(sol) = &sol {
            match feasibility_check(f, sol) {
                Ok(w) => o.dev(
                    CHECK_FEASIBILITY,
                    w.residual_f.abs().max(w.residual_n.abs()),
                    tolerance::FEASIBILITY,
                    "constraint residuals",
                ),
                Err(e) => o.error(CHECK_FEASIBILITY, &e),
            }
            quartic_check(o, f, sol.r_m, fault);
        }
    }
    if f > 0.0 && f <= WZ_REGIME_PROBE_MAX_F {
        match cos_phi_of_r(f, (1.0 - f).sqrt()) {
            Ok(c) => o.dev(CHECK_WZ_ROOT, (c + 1.0).abs(), 1e-8, "cos φ at r = √(1−f)"),
            Err(e) => o.error(CHECK_WZ_ROOT, &e),
        }
    }
    Ok(())
}

fn quartic_check(o: &mut Observer, f: f64, r: f64, fault: Option<f64>) {
    let exact = match quartic_coeffs(f, r) {
        Ok(q) => q,
        Err(e) => return o.error(CHECK_QUARTIC, &e),
    };
    let mut searched = exact;
    if let Some(delta) = fault {
        searched.c0 += delta;
    }
    match searched.cos_phi_root() {
        Some(c) => o.dev(
            CHECK_QUARTIC,
            exact.eval(c).abs(),
            tolerance::ROOT_RESIDUAL,
            format!("r = {r}, cos φ = {c}"),
        ),
        None => o.dev(
            CHECK_QUARTIC,
            f64::INFINITY,
            tolerance::ROOT_RESIDUAL,
            format!("no admissible root at r = {r}"),
        ),
    }
}

fn ordering_checks(o: &mut Observer, records: &[SweepRecord], ih_base: f64) {
    let find = |fam: CopierFamily| {
        records
            .iter()
            .find(|r| r.series == crate::sweep::Series::Copier(fam))
    };
    let slack = tolerance::ORDERING;
    for rec in records {
        let tag = rec.series.tag();
        if let Some(ult) = find(CopierFamily::Ultimate) {
            o.at_most(CHECK_ORDER_IH, rec.ih, ult.ih, slack, tag);
        }
        if let Some(lf) = find(CopierFamily::LocalFid) {
            o.at_most(CHECK_ORDER_FIDELITY, rec.f_local, lf.f_local, slack, tag);
        }
        if let Some(wz) = find(CopierFamily::Wz) {
            o.at_most(CHECK_ORDER_I1, rec.i1, wz.i1, slack, tag);
        }
        o.at_most(CHECK_INPUT_BOUND, rec.ih, ih_base, slack, tag);
    }
}

/// Runs every invariant at `steps` equally spaced overlaps in `[0, 1]`.
pub fn run_verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    if opts.steps < 2 {
        return Err(Error::domain("steps", opts.steps as f64, "[2, ∞)"));
    }
    let grid = uniform_grid(0.0, 1.0, opts.steps);
    let observations: Vec<Vec<Obs>> = grid
        .par_iter()
        .map(|&f| observe(f, opts.quartic_fault))
        .collect();

    let checks = CHECK_ORDER
        .iter()
        .map(|&name| {
            let mut worst: f64 = 0.0;
            let mut count = 0usize;
            let mut failing = 0usize;
            let mut first: Option<&Obs> = None;
            for ob in observations.iter().flatten().filter(|ob| ob.check == name) {
                count += 1;
                worst = worst.max(ob.dev);
                if !(ob.dev <= ob.tol) {
                    failing += 1;
                    first.get_or_insert(ob);
                }
            }
            let detail = match first {
                None if count == 0 => "not exercised on this grid".to_string(),
                None => format!("worst deviation {worst:.3e} over {count} evaluations"),
                Some(ob) => format!(
                    "{failing} of {count} evaluations failed; first at f = {}: deviation {:e} > {:e} ({})",
                    ob.f, ob.dev, ob.tol, ob.note
                ),
            };
            CheckOutcome {
                name,
                passed: first.is_none(),
                detail,
            }
        })
        .collect();
    Ok(VerifyReport {
        steps: opts.steps,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_grid_passes() {
        let report = run_verify(&VerifyOptions { steps: 2, quartic_fault: None }).unwrap();
        assert!(report.all_passed(), "{}", report.render());
    }

    #[test]
    fn default_grid_passes() {
        let report = run_verify(&VerifyOptions::default()).unwrap();
        assert!(report.all_passed(), "{}", report.render());
        assert!(report.render().lines().all(|l| !l.starts_with("FAIL")));
    }

    #[test]
    fn quartic_fault_is_detected() {
        let report = run_verify(&VerifyOptions { steps: 5, quartic_fault: Some(1e-3) }).unwrap();
        let failed: Vec<_> = report.failures().map(|c| c.name).collect();
        assert_eq!(failed, vec![CHECK_QUARTIC]);
        assert!(report.check(CHECK_QUARTIC).unwrap().detail.contains("f = "));
    }

    #[test]
    fn too_few_steps_is_a_domain_error() {
        assert!(run_verify(&VerifyOptions { steps: 1, quartic_fault: None }).is_err());
    }
}
