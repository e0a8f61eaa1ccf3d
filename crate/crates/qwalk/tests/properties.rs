//! Property-based invariants of the entropy primitives and the walk kernels.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

use qwalk::asymptotics::{asymptotic_eigenvalues_nonlocal, kspace_spectrum, kspace_step_matrix};
use qwalk::math::{
    binary_entropy, fit_log2_growth, hermitian2_eigenvalues, schmidt_entropy, EntropySeries,
};
use qwalk::walk1d::{
    make_local_state, step_hadamard, step_hadamard_adjoint, CoinSpec1D, NonlocalSpec, WalkState1D,
};
use qwalk::walk2d::{
    bipartite_entropy_ab, coin_hadamard2, make_local_state2, step2, CoinOp4, WalkState2D,
};

fn complex_strategy() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

/// A random unit-norm amplitude matrix of the given shape.
fn amplitude_matrix(rows: usize, cols: usize) -> impl Strategy<Value = DMatrix<Complex64>> {
    proptest::collection::vec(complex_strategy(), rows * cols)
        .prop_filter("nonzero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-6)
        .prop_map(move |v| {
            let m = DMatrix::from_vec(rows, cols, v);
            let n = m.norm();
            m / Complex64::new(n, 0.0)
        })
}

/// An exactly unitary 2x2 matrix built from three angles.
fn unitary2(angles: (f64, f64, f64)) -> [[Complex64; 2]; 2] {
    let (theta, phi, lambda) = angles;
    let c = Complex64::new(theta.cos(), 0.0);
    let s = theta.sin();
    [
        [c, -Complex64::from_polar(s, phi)],
        [
            Complex64::from_polar(s, -phi + lambda),
            Complex64::from_polar(theta.cos(), lambda),
        ],
    ]
}

/// A random normalized single-walker state of small support.
fn walk_state(width: usize) -> impl Strategy<Value = WalkState1D> {
    (
        proptest::collection::vec(complex_strategy(), width),
        proptest::collection::vec(complex_strategy(), width),
        -5i64..5,
    )
        .prop_filter("nonzero", |(a, b, _)| {
            a.iter().chain(b.iter()).map(|z| z.norm_sqr()).sum::<f64>() > 1e-6
        })
        .prop_map(|(a, b, offset)| {
            WalkState1D::from_amplitudes_normalized(offset, a, b).unwrap()
        })
}

proptest! {
    #[test]
    fn binary_entropy_is_symmetric(r in 0.0..=1.0f64) {
        let lhs = binary_entropy(r).unwrap();
        let rhs = binary_entropy(1.0 - r).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn hermitian2_eigenvalues_form_a_distribution(
        a in 0.0..=1.0f64,
        frac in 0.0..=1.0f64,
        phase in -PI..PI,
    ) {
        let c = 1.0 - a;
        // |b|^2 <= ac keeps the matrix positive semidefinite
        let b = Complex64::from_polar(frac * (a * c).sqrt(), phase);
        let (r1, r2) = hermitian2_eigenvalues(a, b, c).unwrap();
        prop_assert!((r1 + r2 - 1.0).abs() <= 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&r1));
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&r2));
        prop_assert!(r1 >= r2);
    }

    #[test]
    fn schmidt_entropy_equal_for_both_reductions(m in amplitude_matrix(3, 5)) {
        let s = schmidt_entropy(&m).unwrap();
        let st = schmidt_entropy(&m.transpose()).unwrap();
        prop_assert!((s - st).abs() <= 1e-10);
    }

    #[test]
    fn schmidt_entropy_invariant_under_local_unitaries(
        m in amplitude_matrix(4, 4),
        seed in proptest::collection::vec(complex_strategy(), 32),
    ) {
        // unitaries from the QR factorization of random complex matrices
        let u = DMatrix::from_vec(4, 4, seed[..16].to_vec()).qr().q();
        let v = DMatrix::from_vec(4, 4, seed[16..].to_vec()).qr().q();
        let rotated = &u * &m * v.adjoint();
        let s = schmidt_entropy(&m).unwrap();
        let sr = schmidt_entropy(&rotated).unwrap();
        prop_assert!((s - sr).abs() <= 1e-9, "entropy moved {s} -> {sr}");
    }

    #[test]
    fn fit_recovers_planted_slope_exactly(
        exponents in proptest::sample::subsequence((2u32..40).collect::<Vec<_>>(), 4),
        slope_num in 0i32..=64,
        icpt_num in 0i32..=64,
    ) {
        // dyadic slope and intercept over power-of-two times keep every OLS
        // intermediate exact in binary floating point
        let c = slope_num as f64 / 64.0;
        let d = icpt_num as f64 / 64.0;
        let entries: Vec<(u64, f64)> = exponents
            .iter()
            .map(|&e| (1u64 << e, c * e as f64 + d))
            .collect();
        let series = EntropySeries::from_entries(entries).unwrap();
        let fit = fit_log2_growth(&series, 1).unwrap();
        prop_assert_eq!(fit.c, c);
        prop_assert_eq!(fit.intercept, d);
        prop_assert_eq!(fit.residual_rms, 0.0);
    }

    #[test]
    fn walk_conserves_norm(state in walk_state(7), steps in 1u32..40) {
        let mut s = state;
        for _ in 0..steps {
            s = step_hadamard(&s);
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn walk_is_reversible(state in walk_state(5), steps in 1u32..24) {
        let initial = state.clone();
        let mut s = state;
        for _ in 0..steps {
            s = step_hadamard(&s);
        }
        for _ in 0..steps {
            s = step_hadamard_adjoint(&s);
        }
        let (lo, hi) = initial.x_range();
        for x in lo - 1..=hi + 1 {
            let (a, b) = s.amplitudes_at(x);
            let (a0, b0) = initial.amplitudes_at(x);
            prop_assert!((a - a0).norm() <= 1e-9);
            prop_assert!((b - b0).norm() <= 1e-9);
        }
    }

    #[test]
    fn light_cone_and_parity_hold(
        alpha in -FRAC_PI_2..FRAC_PI_2,
        beta in -PI..PI,
        steps in 1i64..20,
    ) {
        let mut s = make_local_state(&CoinSpec1D::new(alpha, beta).unwrap());
        for _ in 0..steps {
            s = step_hadamard(&s);
        }
        let (lo, hi) = s.x_range();
        for x in lo..=hi {
            let (a, b) = s.amplitudes_at(x);
            let weight = a.norm_sqr() + b.norm_sqr();
            if x.abs() > steps {
                prop_assert_eq!(weight, 0.0, "leak outside the light cone at {}", x);
            }
            if (x - steps).rem_euclid(2) == 1 {
                prop_assert_eq!(weight, 0.0, "parity-forbidden site {} occupied", x);
            }
        }
    }

    #[test]
    fn dispersion_and_eigenrelation_hold_everywhere(k in -PI..PI) {
        let spec = kspace_spectrum(k);
        prop_assert!((spec.omega.sin() - k.sin() / 2f64.sqrt()).abs() <= 1e-12);
        prop_assert!(spec.omega.abs() <= FRAC_PI_2);
        let u = kspace_step_matrix(k);
        let (l1, l2) = spec.eigenvalues();
        for (vec, lambda) in spec.eigenvectors.iter().zip([l1, l2]) {
            let uv0 = u[0][0] * vec[0] + u[0][1] * vec[1];
            let uv1 = u[1][0] * vec[0] + u[1][1] * vec[1];
            prop_assert!((uv0 - lambda * vec[0]).norm() <= 1e-10);
            prop_assert!((uv1 - lambda * vec[1]).norm() <= 1e-10);
        }
    }

    #[test]
    fn nonlocal_surface_symmetries(
        theta in -FRAC_PI_2..FRAC_PI_2,
        phi in -PI..PI,
    ) {
        let at = |t: f64, p: f64| {
            let (r, _) = asymptotic_eigenvalues_nonlocal(&NonlocalSpec::new(t, p).unwrap()).unwrap();
            binary_entropy(r).unwrap()
        };
        // even in phi
        prop_assert!((at(theta, phi) - at(theta, -phi)).abs() <= 1e-12);
        // sin(2 theta) periodicity: theta and theta - pi/2 * sign flip the
        // modulation; theta -> theta + pi maps outside the domain, so check
        // the equivalent reflection theta -> -theta with phi -> pi - phi
        let reflected = at(-theta, (PI - phi.abs()).copysign(1.0));
        prop_assert!((at(theta, phi.abs()) - reflected).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn separable_coins_never_entangle_the_walkers(
        a in -FRAC_PI_2..FRAC_PI_2,
        b in -PI..PI,
        c in -FRAC_PI_2..FRAC_PI_2,
        d in -PI..PI,
        steps in 1u64..10,
    ) {
        let coin_a = [
            Complex64::new(a.cos(), 0.0),
            Complex64::from_polar(a.sin(), b),
        ];
        let coin_b = [
            Complex64::new(c.cos(), 0.0),
            Complex64::from_polar(c.sin(), d),
        ];
        let product = [
            coin_a[0] * coin_b[0],
            coin_a[0] * coin_b[1],
            coin_a[1] * coin_b[0],
            coin_a[1] * coin_b[1],
        ];
        let mut state = make_local_state2(&product).unwrap();
        let h2 = coin_hadamard2();
        for _ in 0..steps {
            state = step2(&state, &h2);
        }
        prop_assert!(bipartite_entropy_ab(&state) < 1e-9);
    }

    #[test]
    fn entropy_invariant_under_local_coin_rotation(
        angles in (-PI..PI, -PI..PI, -PI..PI),
    ) {
        // entangled reference state: a few Grover steps from chi1
        let grover = qwalk::walk2d::coin_grover();
        let mut state = make_local_state2(&qwalk::walk2d::coin_chi1()).unwrap();
        for _ in 0..6 {
            state = step2(&state, &grover);
        }
        let u = unitary2(angles);
        let rotated = apply_coin_a(&state, &u);
        let s0 = bipartite_entropy_ab(&state);
        let s1 = bipartite_entropy_ab(&rotated);
        prop_assert!((s0 - s1).abs() <= 1e-9, "entropy moved {} -> {}", s0, s1);
    }
}

/// Apply a unitary to walker A's coin bit only.
fn apply_coin_a(state: &WalkState2D, u: &[[Complex64; 2]; 2]) -> WalkState2D {
    let (nx, ny) = (state.nx(), state.ny());
    let mut amp = vec![Complex64::ZERO; 4 * nx * ny];
    for ix in 0..nx {
        for iy in 0..ny {
            let x = state.offset_x() + ix as i64;
            let y = state.offset_y() + iy as i64;
            for cb in 0..2 {
                let v0 = state.amplitude(cb, x, y);
                let v1 = state.amplitude(2 + cb, x, y);
                let w0 = u[0][0] * v0 + u[0][1] * v1;
                let w1 = u[1][0] * v0 + u[1][1] * v1;
                amp[(cb * nx + ix) * ny + iy] = w0;
                amp[((2 + cb) * nx + ix) * ny + iy] = w1;
            }
        }
    }
    WalkState2D::from_amplitudes(state.offset_x(), state.offset_y(), nx, ny, amp).unwrap()
}

#[test]
fn coin_op_from_kron_is_unitary_for_any_angles() {
    // spot-check the unitary2 builder itself
    let u = unitary2((0.7, -1.3, 2.1));
    let v = unitary2((-0.2, 0.4, -2.8));
    let coin = CoinOp4::kron(&u, &v);
    assert!(coin.is_ok());
}
