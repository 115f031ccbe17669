use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use proptest::prelude::*;

use super::*;
use crate::Error;
use Polarization::{H, V};
use QubitLabel::{A, C, S, T};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn ket(label: QubitLabel, pol: Polarization) -> PureState {
    PureState::basis(label, pol)
}

#[test]
fn tensor_of_basis_states() {
    let hv = ket(S, H).tensor(&ket(C, V)).unwrap();
    assert_eq!(hv.labels(), &[S, C]);
    assert_eq!(hv.amplitudes()[1], c(1.0, 0.0));
    assert_eq!(hv.amplitudes().iter().filter(|z| z.norm() > 0.0).count(), 1);
}

#[test]
fn tensor_of_maximally_mixed() {
    let a = DensityMatrix::maximally_mixed(vec![S]).unwrap();
    let b = DensityMatrix::maximally_mixed(vec![C]).unwrap();
    let ab = a.tensor(&b).unwrap();
    let expect = DensityMatrix::maximally_mixed(vec![S, C]).unwrap();
    assert!(ab.max_abs_diff(&expect).unwrap() < 1e-15);
}

#[test]
fn tensor_rejects_shared_label() {
    let err = ket(S, H).tensor(&ket(S, V)).unwrap_err();
    assert_eq!(err, Error::LabelCollision(S));
    let mixed = tensor(&ket(A, H).into(), &ket(A, H).to_density().into()).unwrap_err();
    assert_eq!(mixed, Error::LabelCollision(A));
}

#[test]
fn hadamard_on_h() {
    let out = ket(S, H).apply(&Gate::hadamard(), &[S]).unwrap();
    let expect = PureState::qubit(S, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    assert!((out.overlap(&expect).unwrap() - 1.0).abs() < 1e-15);
    assert!((out.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
}

#[test]
fn cz_flips_sign_of_vv_only() {
    let vv = PureState::product(&[C, S], &[V, V]).unwrap();
    let out = vv.apply(&Gate::cz(), &[C, S]).unwrap();
    assert_eq!(out.amplitudes()[3], c(-1.0, 0.0));
    let hv = PureState::product(&[C, S], &[H, V]).unwrap();
    assert_eq!(hv.apply(&Gate::cz(), &[C, S]).unwrap(), hv);
}

#[test]
fn ch_targets_control_first() {
    // control C = V: Hadamard on S; target order (C, S) with S listed first.
    let st = PureState::product(&[S, C], &[H, V]).unwrap();
    let out = st.apply(&Gate::ch(), &[C, S]).unwrap();
    let expect = PureState::qubit(S, c(1.0, 0.0), c(1.0, 0.0))
        .unwrap()
        .tensor(&ket(C, V))
        .unwrap();
    assert!((out.overlap(&expect).unwrap() - 1.0).abs() < 1e-14);
    // control C = H: identity
    let st = PureState::product(&[S, C], &[H, H]).unwrap();
    assert_eq!(st.apply(&Gate::ch(), &[C, S]).unwrap(), st);
}

#[test]
fn apply_gate_usage_errors() {
    let st = PureState::product(&[S, C], &[H, H]).unwrap();
    assert_eq!(
        st.apply(&Gate::cz(), &[S]).unwrap_err(),
        Error::ArityMismatch {
            expected: 2,
            got: 1
        }
    );
    assert_eq!(
        st.apply(&Gate::hadamard(), &[A]).unwrap_err(),
        Error::UnknownLabel(A)
    );
    assert_eq!(
        st.apply(&Gate::cz(), &[S, S]).unwrap_err(),
        Error::DuplicateLabel(S)
    );
}

#[test]
fn partial_trace_of_product_state() {
    let hv = PureState::product(&[S, C], &[H, V]).unwrap().to_density();
    let reduced = hv.partial_trace(&[S]).unwrap();
    assert!(reduced.max_abs_diff(&ket(S, H).to_density()).unwrap() < 1e-15);
    assert!(matches!(
        hv.partial_trace(&[]),
        Err(Error::InvalidArgument(_))
    ));
    assert_eq!(hv.partial_trace(&[T]).unwrap_err(), Error::UnknownLabel(T));
}

#[test]
fn partial_trace_keeps_requested_order() {
    let st = PureState::product(&[S, C, A], &[H, V, V])
        .unwrap()
        .to_density();
    let reduced = st.partial_trace(&[A, S]).unwrap();
    assert_eq!(reduced.labels(), &[A, S]);
    // |V H⟩ over (A, S) is index 2
    assert!((reduced.element(2, 2).re - 1.0).abs() < 1e-15);
}

#[test]
fn orthogonal_projection_is_degenerate() {
    let err = ket(S, H).project(S, &ket(S, V)).unwrap_err();
    assert!(matches!(err, Error::DegenerateProjection(p) if p == 0.0));
    let err = ket(S, H).to_density().project(S, &ket(S, V)).unwrap_err();
    assert!(matches!(err, Error::DegenerateProjection(_)));
}

#[test]
fn projection_requires_normalized_direction() {
    let bad = PureState::from_raw(vec![S], vec![c(1.0, 0.0), c(1.0, 0.0)]);
    assert!(matches!(
        ket(S, H).project(S, &bad),
        Err(Error::NotNormalized(_))
    ));
}

#[test]
fn projecting_last_qubit_leaves_scalar_state() {
    let (p, rest) = ket(S, H).project(S, &ket(S, H)).unwrap();
    assert_eq!(p, 1.0);
    assert!(rest.labels().is_empty());
    assert_eq!(rest.amplitudes(), &[c(1.0, 0.0)]);
}

#[test]
fn mix_limits() {
    let rho = PureState::product(&[C, A], &[H, V]).unwrap().to_density();
    let white = DensityMatrix::maximally_mixed(vec![C, A]).unwrap();
    assert_eq!(mix(&rho, &white, 1.0).unwrap(), rho);
    assert!(
        mix(&rho, &white, 0.0)
            .unwrap()
            .max_abs_diff(&white)
            .unwrap()
            < 1e-16
    );
    assert!(matches!(
        mix(&rho, &white, 1.5),
        Err(Error::InvalidArgument(_))
    ));
    let small = DensityMatrix::maximally_mixed(vec![C]).unwrap();
    assert!(matches!(
        mix(&rho, &small, 0.5),
        Err(Error::DimensionMismatch { .. })
    ));
    let other = DensityMatrix::maximally_mixed(vec![S, T]).unwrap();
    assert!(matches!(
        mix(&rho, &other, 0.5),
        Err(Error::UnknownLabel(_))
    ));
}

#[test]
fn mix_aligns_label_order() {
    let rho = PureState::product(&[C, A], &[H, V]).unwrap().to_density();
    let swapped = rho.reorder(&[A, C]).unwrap();
    let m = mix(&rho, &swapped, 0.3).unwrap();
    assert!(m.max_abs_diff(&rho).unwrap() < 1e-16);
}

#[test]
fn density_validation() {
    let m = CMatrix::from_real(2, &[0.5, 0.0, 0.0, 0.4]);
    assert!(matches!(
        DensityMatrix::new(vec![S], m),
        Err(Error::BadTrace(_))
    ));
    let m = CMatrix::from_rows(2, vec![c(0.5, 0.0), c(0.1, 0.1), c(0.1, 0.0), c(0.5, 0.0)]);
    assert!(matches!(
        DensityMatrix::new(vec![S], m),
        Err(Error::NotHermitian(_))
    ));
    let m = CMatrix::from_real(2, &[1.2, 0.0, 0.0, -0.2]);
    assert_eq!(
        DensityMatrix::new(vec![S], m).unwrap_err(),
        Error::NotPositive
    );
    let m = CMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]);
    assert!(DensityMatrix::new(vec![S], m).is_ok());
}

#[test]
fn pure_state_validation() {
    assert!(matches!(
        PureState::new(vec![S], vec![c(1.0, 0.0), c(1.0, 0.0)]),
        Err(Error::NotNormalized(_))
    ));
    assert!(matches!(
        PureState::new(vec![S, C], vec![c(1.0, 0.0), c(0.0, 0.0)]),
        Err(Error::DimensionMismatch { .. })
    ));
    assert_eq!(
        PureState::new(
            vec![S, S],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]
        )
        .unwrap_err(),
        Error::DuplicateLabel(S)
    );
}

#[test]
fn reorder_round_trip() {
    let st = PureState::product(&[T, S, A], &[V, H, V]).unwrap();
    let canon = st.canonical();
    assert_eq!(canon.labels(), &[S, A, T]);
    // |H V V⟩ over (S, A, T) = index 3
    assert_eq!(canon.amplitudes()[3], c(1.0, 0.0));
    assert_eq!(canon.reorder(&[T, S, A]).unwrap(), st);
}

// ---------------------------------------------------------------------------
// properties

fn labels_for(n: usize) -> Vec<QubitLabel> {
    QubitLabel::ALL[..n].to_vec()
}

fn amplitudes(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("non-zero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(|v| v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
}

fn pure_over(labels: Vec<QubitLabel>) -> impl Strategy<Value = PureState> {
    amplitudes(labels.len()).prop_map(move |a| PureState::normalized(labels.clone(), a).unwrap())
}

fn density_over(labels: Vec<QubitLabel>) -> impl Strategy<Value = DensityMatrix> {
    let n = labels.len();
    (
        prop::collection::vec(amplitudes(n), 1..4),
        prop::collection::vec(0.05f64..1.0, 3),
    )
        .prop_map(move |(kets, weights)| {
            let total: f64 = weights[..kets.len()].iter().sum();
            let mut acc = CMatrix::zeros(1 << n);
            for (k, w) in kets.into_iter().zip(&weights) {
                let p = PureState::normalized(labels.clone(), k).unwrap();
                acc = add(&acc, &CMatrix::outer(p.amplitudes()).scale(w / total));
            }
            DensityMatrix::new(labels.clone(), acc).unwrap()
        })
}

fn add(a: &CMatrix, b: &CMatrix) -> CMatrix {
    CMatrix::from_rows(
        a.dim(),
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(x, y)| x + y)
            .collect(),
    )
}

proptest! {
    #[test]
    fn named_gates_are_unitary(phi in -10.0f64..10.0, alpha in -3.0f64..3.0) {
        prop_assert!(Gate::phase(phi).matrix().unitarity_defect() <= UNITARITY_TOL);
        prop_assert!(Gate::alpha(alpha).matrix().unitarity_defect() <= UNITARITY_TOL);
    }

    #[test]
    fn pure_and_density_gate_application_agree(
        psi in pure_over(labels_for(3)),
        phi in -3.2f64..3.2,
    ) {
        let gates = [
            (Gate::phase(phi), vec![C]),
            (Gate::cz(), vec![A, S]),
            (Gate::ch(), vec![C, A]),
            (Gate::w(), vec![S]),
        ];
        for (g, targets) in gates.iter() {
            let via_pure = psi.apply(g, targets).unwrap().to_density();
            let via_rho = psi.to_density().apply(g, targets).unwrap();
            prop_assert!(via_pure.max_abs_diff(&via_rho).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn partial_trace_inverts_tensor(
        a in density_over(vec![S, T]),
        b in density_over(vec![C, A]),
    ) {
        let ab = a.tensor(&b).unwrap();
        prop_assert!(ab.partial_trace(&[S, T]).unwrap().max_abs_diff(&a).unwrap() <= 1e-12);
        prop_assert!(ab.partial_trace(&[C, A]).unwrap().max_abs_diff(&b).unwrap() <= 1e-12);
        prop_assert!((ab.trace() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn orthonormal_projection_probabilities_sum_to_one(
        psi in pure_over(labels_for(3)),
        rho in density_over(labels_for(2)),
        theta in 0.0f64..3.2,
        chi in -3.2f64..3.2,
    ) {
        let u = PureState::qubit(S, C64::new(libm::cos(theta), 0.0), C64::from_polar(libm::sin(theta), chi)).unwrap();
        let u_perp = PureState::qubit(S, -C64::from_polar(libm::sin(theta), -chi), C64::new(libm::cos(theta), 0.0)).unwrap();
        prop_assert!(u.inner(&u_perp).unwrap().norm() < 1e-15);
        let p = |state: &QuantumState, target, dir: &PureState| match project(state, target, dir) {
            Ok((p, _)) => p,
            Err(Error::DegenerateProjection(p)) => p,
            Err(e) => panic!("{e}"),
        };
        let pure: QuantumState = psi.into();
        let mixed: QuantumState = rho.into();
        prop_assert!((p(&pure, C, &u) + p(&pure, C, &u_perp) - 1.0).abs() <= 1e-12);
        prop_assert!((p(&mixed, S, &u) + p(&mixed, S, &u_perp) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn mixing_preserves_trace_and_hermiticity(
        a in density_over(labels_for(2)),
        b in density_over(labels_for(2)),
        w in 0.0f64..=1.0,
    ) {
        let m = mix(&a, &b, w).unwrap();
        prop_assert!(m.validate().is_ok());
    }
}
