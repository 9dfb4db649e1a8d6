use num_complex::Complex64;
use proptest::prelude::*;
use qcopy_core::infomeasures::ultimate_info_from_bloch;
use qcopy_core::optimizer::ih_of_r;
use qcopy_core::qstate::state_from_bloch;
use qcopy_core::{
    accessible_info_oracle, copy, fidelity_mixed, holevo_two_state, ih_baseline, make_ensemble,
    maximize_ih, partial_trace, von_neumann_entropy, BlochVector, CopierFamily, DensityMatrix2,
    JointPureState, Subsystem,
};

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn joint_state() -> impl Strategy<Value = JointPureState> {
    prop::array::uniform4(complex())
        .prop_filter("nonzero", |a| a.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
        .prop_map(|a| JointPureState::normalized(a).unwrap())
}

fn ket() -> impl Strategy<Value = [Complex64; 2]> {
    (complex(), complex())
        .prop_filter("nonzero", |(a, b)| a.norm_sqr() + b.norm_sqr() > 1e-3)
        .prop_map(|(a, b)| {
            let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
            [a / n, b / n]
        })
}

fn bloch_in_ball() -> impl Strategy<Value = BlochVector> {
    (0.0..=1.0f64, 0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU).prop_map(
        |(len, theta, phi)| {
            BlochVector::new(
                len * theta.sin() * phi.cos(),
                len * theta.sin() * phi.sin(),
                len * theta.cos(),
            )
        },
    )
}

fn unitary() -> impl Strategy<Value = [[Complex64; 2]; 2]> {
    (0.0..std::f64::consts::TAU, 0.0..std::f64::consts::TAU, 0.0..std::f64::consts::TAU, 0.0..1.5f64)
        .prop_map(|(a, b, g, t)| {
            let e = |x: f64| Complex64::from_polar(1.0, x);
            let (s, c) = t.sin_cos();
            [[e(a) * c, e(b) * s], [-e(g - b) * s, e(g - a) * c]]
        })
}

proptest! {
    #[test]
    fn partial_traces_are_valid_states(state in joint_state()) {
        for keep in [Subsystem::First, Subsystem::Second] {
            prop_assert!(partial_trace(&state, keep).validate().is_ok());
        }
    }

    #[test]
    fn reduced_states_share_spectrum(state in joint_state()) {
        let (a, _) = partial_trace(&state, Subsystem::First).eigenvalues();
        let (b, _) = partial_trace(&state, Subsystem::Second).eigenvalues();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn bloch_round_trip(v in bloch_in_ball()) {
        let back = state_from_bloch(v).unwrap().bloch();
        prop_assert!(back.max_abs_diff(&v) < 1e-12);
    }

    #[test]
    fn fidelity_of_pure_states_is_overlap(a in ket(), b in ket()) {
        let overlap = (a[0].conj() * b[0] + a[1].conj() * b[1]).norm_sqr();
        let f = fidelity_mixed(&DensityMatrix2::pure(a).unwrap(), &DensityMatrix2::pure(b).unwrap());
        prop_assert!((f - overlap).abs() < 1e-12, "{} vs {}", f, overlap);
    }

    #[test]
    fn fidelity_is_symmetric(a in bloch_in_ball(), b in bloch_in_ball()) {
        let (ra, rb) = (state_from_bloch(a).unwrap(), state_from_bloch(b).unwrap());
        prop_assert!((fidelity_mixed(&ra, &rb) - fidelity_mixed(&rb, &ra)).abs() < 1e-15);
    }

    #[test]
    fn entropy_is_unitarily_invariant(v in bloch_in_ball(), u in unitary()) {
        let rho = state_from_bloch(v).unwrap();
        let rotated = rho.conjugate_by(&u);
        prop_assert!((von_neumann_entropy(&rho) - von_neumann_entropy(&rotated)).abs() < 1e-10);
    }

    #[test]
    fn oracle_never_exceeds_holevo(a in bloch_in_ball(), b in bloch_in_ball()) {
        let (ra, rb) = (state_from_bloch(a).unwrap(), state_from_bloch(b).unwrap());
        let oracle = accessible_info_oracle(&ra, &rb);
        let chi = holevo_two_state(&ra, &rb, 0.5).unwrap();
        prop_assert!(oracle <= chi + 1e-9, "{} > {}", oracle, chi);
    }

    #[test]
    fn copier_outputs_are_consistent(f in 0.0..=1.0f64) {
        let ens = make_ensemble(f).unwrap();
        for fam in CopierFamily::ALL {
            if fam == CopierFamily::Ultimate {
                continue;
            }
            let out = copy(fam, &ens).unwrap();
            prop_assert!(out.q * out.q + out.q_h * out.q_h <= out.r * out.r + 1e-12);
            let (b1, b2) = (out.copy1.bloch(), out.copy2.bloch());
            prop_assert!((out.q - 0.5 * (b1 - b2).norm()).abs() < 1e-12);
            prop_assert!((out.q_h - 0.5 * (b1 + b2).norm()).abs() < 1e-12);
            prop_assert!((fidelity_mixed(&ens.rho(1), &out.copy1) - out.local_fidelity).abs() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn optimum_between_basis_copying_and_inputs(f in 0.001..0.999f64) {
        let sol = maximize_ih(f).unwrap();
        let wz = ultimate_info_from_bloch((1.0 - f).sqrt(), 0.0).unwrap();
        prop_assert!(sol.ih >= wz - 1e-9);
        prop_assert!(sol.ih <= ih_baseline(f).unwrap() + 1e-9);
        let out = copy(CopierFamily::Ultimate, &make_ensemble(f).unwrap()).unwrap();
        let (j1, j2) = (out.joint1.unwrap(), out.joint2.unwrap());
        prop_assert!((qcopy_core::overlap_sq(&j1, &j2) - f).abs() < 1e-12);
    }
}

#[test]
fn ultimate_info_monotone_in_r_and_q_h() {
    let n = 60;
    let grid: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
    for &r in &grid {
        let mut prev = f64::INFINITY;
        for &qh in grid.iter().filter(|&&q| q <= r) {
            let v = ultimate_info_from_bloch(r, qh).unwrap();
            assert!(v <= prev + 1e-15, "not decreasing in q_H at r = {r}");
            prev = v;
        }
    }
    for &qh in &grid {
        let mut prev = f64::NEG_INFINITY;
        for &r in grid.iter().filter(|&&r| r >= qh) {
            let v = ultimate_info_from_bloch(r, qh).unwrap();
            assert!(v >= prev - 1e-15, "not increasing in r at q_H = {qh}");
            prev = v;
        }
    }
}

#[test]
fn information_over_r_is_single_peaked() {
    for k in 1..20 {
        let f = k as f64 / 20.0;
        let r0 = (1.0_f64 - f).sqrt();
        let vals: Vec<f64> = (0..=400)
            .map(|j| ih_of_r(f, r0 + (1.0 - r0) * j as f64 / 400.0).unwrap())
            .collect();
        let peak = vals
            .iter()
            .enumerate()
            .fold(0, |best, (i, v)| if *v > vals[best] { i } else { best });
        let rising = vals[..=peak].windows(2).all(|w| w[1] >= w[0] - 1e-12);
        let falling = vals[peak..].windows(2).all(|w| w[1] <= w[0] + 1e-12);
        assert!(rising && falling, "f = {f}: more than one peak");
    }
}
