//! Long-time entanglement of the Hadamard walk, evaluated without running the
//! clock: closed forms for localized and nonlocal starts, and an independent
//! k-space route that diagonalizes the one-step operator per wavenumber.
//!
//! Conventions are pinned once and used everywhere: |k> = sum_x e^{ikx}|x>,
//! so the forward transform is a~_k = sum_x e^{-ikx} a_x and the inverse
//! carries the 1/(2 pi) measure. The step operator in k-space is
//! U_k = (1/sqrt 2) ((e^{-ik}, e^{-ik}), (e^{ik}, -e^{ik})), with eigenvalues
//! e^{-i w_k} and -e^{+i w_k}, where sin(w_k) = sin(k)/sqrt 2 and w_k is
//! taken in [-pi/2, pi/2].

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::walk1d::{CoinSpec1D, NonlocalSpec, ReducedCoinDensity, WalkState1D};

/// Constants entering the long-time coin density of the Hadamard walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticConstants {
    /// Long-time determinant for the balanced (beta = pi/2) local coin.
    pub delta0: f64,
    /// Amplitude of the cos(beta) sin(4 alpha) modulation of the determinant.
    pub b1: f64,
    /// Constant term of the nonlocal eigenvalue bracket.
    pub b0: f64,
    /// Modulation amplitude of the nonlocal eigenvalue bracket.
    pub b_prime: f64,
    /// (sqrt(2)-1)^2 / 2, companion constant of the family; the eigenvalue
    /// bracket itself carries b_prime in both of its terms.
    pub b_plus: f64,
}

impl AsymptoticConstants {
    pub fn hadamard() -> Self {
        Self {
            delta0: (SQRT_2 - 1.0) / 2.0,
            b1: (2.0 - SQRT_2) / 4.0,
            b0: (SQRT_2 - 1.0) / 2.0,
            b_prime: (3.0 * SQRT_2 - 4.0) / 2.0,
            b_plus: (SQRT_2 - 1.0) * (SQRT_2 - 1.0) / 2.0,
        }
    }
}

/// Long-time determinant of the reduced coin density for a walk started at
/// one site with the given coin: delta0 - 2 b1^2 cos(beta) sin(4 alpha).
pub fn asymptotic_delta_local(coin: &CoinSpec1D) -> f64 {
    let c = AsymptoticConstants::hadamard();
    c.delta0 - 2.0 * c.b1 * c.b1 * coin.beta().cos() * (4.0 * coin.alpha()).sin()
}

/// Long-time eigenvalues of the reduced coin density for the nonlocal start,
/// ordered descending: r = 1/2 +- |b0 - b_prime sin(2 theta) e^{i phi}|.
pub fn asymptotic_eigenvalues_nonlocal(spec: &NonlocalSpec) -> Result<(f64, f64)> {
    let c = AsymptoticConstants::hadamard();
    let s = (2.0 * spec.theta()).sin();
    let re = c.b0 - c.b_prime * s * spec.phi().cos();
    let im = c.b_prime * s * spec.phi().sin();
    let bracket = re * re + im * im;
    if bracket > 0.25 + 1e-12 {
        return Err(Error::Invariant(format!(
            "nonlocal eigenvalue bracket {bracket} exceeds 1/4"
        )));
    }
    let r = 0.5 + bracket.sqrt().min(0.5);
    Ok((r, 1.0 - r))
}

/// The one-step operator at wavenumber k (coin then shift).
pub fn kspace_step_matrix(k: f64) -> [[Complex64; 2]; 2] {
    let f = 1.0 / SQRT_2;
    let em = Complex64::from_polar(f, -k);
    let ep = Complex64::from_polar(f, k);
    [[em, em], [ep, -ep]]
}

/// Spectral data of U_k at one wavenumber.
#[derive(Debug, Clone, Copy)]
pub struct KSpaceSpectrum {
    pub k: f64,
    /// Dispersion angle w_k in [-pi/2, pi/2] with sin(w_k) = sin(k)/sqrt(2).
    pub omega: f64,
    /// Orthonormal eigenvectors, one per row.
    pub eigenvectors: [[Complex64; 2]; 2],
}

impl KSpaceSpectrum {
    /// Eigenvalues (e^{-i w}, -e^{+i w}), paired with `eigenvectors`.
    pub fn eigenvalues(&self) -> (Complex64, Complex64) {
        (
            Complex64::from_polar(1.0, -self.omega),
            -Complex64::from_polar(1.0, self.omega),
        )
    }
}

/// Diagonalize U_k. The eigenvectors are built from the first matrix row and
/// normalized; they are orthogonal because U_k is unitary with distinct
/// eigenvalues (cos w_k >= 1/sqrt 2 > 0 for every k).
pub fn kspace_spectrum(k: f64) -> KSpaceSpectrum {
    let omega = (k.sin() / SQRT_2).asin();
    debug_assert!(omega.abs() <= FRAC_PI_2);
    let eik = Complex64::from_polar(1.0, k);
    let lambdas = [
        Complex64::from_polar(1.0, -omega),
        -Complex64::from_polar(1.0, omega),
    ];
    let mut eigenvectors = [[Complex64::ZERO; 2]; 2];
    for (vec, lambda) in eigenvectors.iter_mut().zip(lambdas) {
        let v1 = lambda * SQRT_2 * eik - 1.0;
        let norm = (1.0 + v1.norm_sqr()).sqrt();
        vec[0] = Complex64::new(1.0 / norm, 0.0);
        vec[1] = v1 / norm;
    }
    KSpaceSpectrum {
        k,
        omega,
        eigenvectors,
    }
}

#[inline]
fn dot_conj(v: &[Complex64; 2], w: [Complex64; 2]) -> Complex64 {
    v[0].conj() * w[0] + v[1].conj() * w[1]
}

/// Evolve a state t steps through Fourier space: transform, apply the
/// spectral power of U_k at each grid wavenumber, transform back.
///
/// The grid must satisfy n_k >= 2 (2t + w) + 1 for an initial support of
/// width w, otherwise the wrapped-around window would alias.
pub fn evolve_kspace(initial: &WalkState1D, t: u64, n_k: usize) -> Result<WalkState1D> {
    let width = initial.len();
    let required = 2 * (2 * t as usize + width) + 1;
    if n_k < required {
        return Err(Error::Aliasing(format!(
            "n_k = {n_k} below the required {required} for t = {t}, support {width}"
        )));
    }

    let mut fa = vec![Complex64::ZERO; n_k];
    let mut fb = vec![Complex64::ZERO; n_k];
    for i in 0..width {
        let ring = (initial.offset() + i as i64).rem_euclid(n_k as i64) as usize;
        fa[ring] += initial.a()[i];
        fb[ring] += initial.b()[i];
    }

    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(n_k);
    forward.process(&mut fa);
    forward.process(&mut fb);

    let parity = if t.is_multiple_of(2) { 1.0 } else { -1.0 };
    for j in 0..n_k {
        let k = 2.0 * PI * j as f64 / n_k as f64;
        let spec = kspace_spectrum(k);
        let phase = spec.omega * t as f64;
        let l1t = Complex64::from_polar(1.0, -phase);
        let l2t = Complex64::from_polar(parity, phase);
        let phi = [fa[j], fb[j]];
        let c1 = dot_conj(&spec.eigenvectors[0], phi);
        let c2 = dot_conj(&spec.eigenvectors[1], phi);
        let w1 = l1t * c1;
        let w2 = l2t * c2;
        fa[j] = w1 * spec.eigenvectors[0][0] + w2 * spec.eigenvectors[1][0];
        fb[j] = w1 * spec.eigenvectors[0][1] + w2 * spec.eigenvectors[1][1];
    }

    let inverse = planner.plan_fft_inverse(n_k);
    inverse.process(&mut fa);
    inverse.process(&mut fb);
    let scale = 1.0 / n_k as f64;

    let out_min = initial.x_range().0 - t as i64;
    let out_len = width + 2 * t as usize;
    let mut a = Vec::with_capacity(out_len);
    let mut b = Vec::with_capacity(out_len);
    for i in 0..out_len {
        let ring = (out_min + i as i64).rem_euclid(n_k as i64) as usize;
        a.push(fa[ring] * scale);
        b.push(fb[ring] * scale);
    }
    WalkState1D::from_amplitudes(out_min, a, b)
}

/// Long-time reduced coin density of a state given by its k-space profile,
/// with the oscillating cross terms between the two eigenbranches dropped
/// (their time average vanishes). Uniform trapezoid quadrature over the
/// periodic Brillouin zone on n_k nodes.
///
/// The profile must carry unit probability on the grid,
/// (1/n_k) sum_j |Phi(k_j)|^2 = 1 within 1e-6.
pub fn asymptotic_density_quadrature<F>(profile: F, n_k: usize) -> Result<ReducedCoinDensity>
where
    F: Fn(f64) -> [Complex64; 2],
{
    if n_k < 2 {
        return Err(Error::Domain(format!("n_k = {n_k} too small for quadrature")));
    }
    let mut a = 0.0;
    let mut c = 0.0;
    let mut b = Complex64::ZERO;
    let mut norm = 0.0;
    for j in 0..n_k {
        let k = -PI + 2.0 * PI * j as f64 / n_k as f64;
        let phi = profile(k);
        norm += phi[0].norm_sqr() + phi[1].norm_sqr();
        let spec = kspace_spectrum(k);
        for vec in &spec.eigenvectors {
            let weight = dot_conj(vec, phi).norm_sqr();
            a += weight * vec[0].norm_sqr();
            c += weight * vec[1].norm_sqr();
            b += weight * vec[0] * vec[1].conj();
        }
    }
    norm /= n_k as f64;
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-6 {
        return Err(Error::Normalization(format!(
            "k-space profile carries probability {norm}, expected 1"
        )));
    }
    let scale = 1.0 / (n_k as f64 * norm);
    ReducedCoinDensity::new(a * scale, b * scale, c * scale)
}

/// Reduced coin density of a concrete state, computed through its discrete
/// Fourier transform instead of position sums. Same trapezoid rule as the
/// asymptotic quadrature; exact (up to rounding) once n_k covers the window.
pub fn kspace_density(state: &WalkState1D, n_k: usize) -> Result<ReducedCoinDensity> {
    if n_k < state.len() {
        return Err(Error::Aliasing(format!(
            "n_k = {n_k} below the window size {}",
            state.len()
        )));
    }
    let mut a = 0.0;
    let mut c = 0.0;
    let mut b = Complex64::ZERO;
    for j in 0..n_k {
        let k = -PI + 2.0 * PI * j as f64 / n_k as f64;
        let mut ak = Complex64::ZERO;
        let mut bk = Complex64::ZERO;
        for i in 0..state.len() {
            let x = state.offset() + i as i64;
            let phase = Complex64::from_polar(1.0, -k * x as f64);
            ak += phase * state.a()[i];
            bk += phase * state.b()[i];
        }
        a += ak.norm_sqr();
        c += bk.norm_sqr();
        b += ak * bk.conj();
    }
    let norm = (a + c) / n_k as f64;
    let scale = 1.0 / (n_k as f64 * norm);
    ReducedCoinDensity::new(a * scale, b * scale, c * scale)
}

/// k-space profile of a walk localized at the origin: constant in k.
pub fn local_coin_profile(coin: &CoinSpec1D) -> impl Fn(f64) -> [Complex64; 2] {
    let (a0, b0) = coin.amplitudes();
    move |_k| [a0, b0]
}

/// k-space profile of the nonlocal two-site start.
pub fn nonlocal_profile(spec: &NonlocalSpec) -> impl Fn(f64) -> [Complex64; 2] {
    let left = Complex64::new(spec.theta().cos(), 0.0);
    let right = Complex64::from_polar(1.0, -spec.phi()) * spec.theta().sin();
    move |k| {
        let pos = left * Complex64::from_polar(1.0, k) + right * Complex64::from_polar(1.0, -k);
        let f = pos / SQRT_2;
        [f, Complex64::new(0.0, 1.0) * f]
    }
}

/// k-space profile of the Gaussian packet of spread sigma with the chi0 coin,
/// centered at wavenumber pi/2 (the site phases i^x of the position-space
/// packet). Normalized on the same n_k grid the quadrature will use.
pub fn gaussian_profile(sigma: f64, n_k: usize) -> Result<impl Fn(f64) -> [Complex64; 2]> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::Domain(format!("sigma = {sigma} must be positive")));
    }
    if n_k < 2 {
        return Err(Error::Domain(format!("n_k = {n_k} too small for a profile grid")));
    }
    let envelope = move |k: f64| {
        let d = k - FRAC_PI_2;
        sigma.sqrt() * (-d * d * sigma * sigma / 2.0).exp()
    };
    let mut norm = 0.0;
    for j in 0..n_k {
        let k = -PI + 2.0 * PI * j as f64 / n_k as f64;
        let g = envelope(k);
        norm += g * g;
    }
    norm = (norm / n_k as f64).sqrt();
    if norm <= 0.0 {
        return Err(Error::Normalization(
            "gaussian profile vanishes on the grid".into(),
        ));
    }
    Ok(move |k: f64| {
        let g = envelope(k) / (norm * SQRT_2);
        [Complex64::new(g, 0.0), Complex64::new(0.0, g)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::binary_entropy;
    use crate::walk1d::{
        self, make_local_state, make_nonlocal_state, step_hadamard,
    };
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    fn mat_vec(m: &[[Complex64; 2]; 2], v: [Complex64; 2]) -> [Complex64; 2] {
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    #[test]
    fn constants_identity() {
        let c = AsymptoticConstants::hadamard();
        assert_abs_diff_eq!(c.delta0 + 2.0 * c.b1 * c.b1, 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(c.b_plus, 0.085786437627, epsilon = 1e-12);
    }

    #[test]
    fn local_delta_balanced_coin() {
        let c = AsymptoticConstants::hadamard();
        for alpha in [-1.2, -0.3, 0.0, 0.7, 1.5] {
            let coin = CoinSpec1D::new(alpha, FRAC_PI_2).unwrap();
            assert_abs_diff_eq!(asymptotic_delta_local(&coin), c.delta0, epsilon = 1e-15);
            let s = binary_entropy(0.5 * (1.0 + (1.0 - 4.0 * c.delta0).sqrt())).unwrap();
            assert_abs_diff_eq!(s, 0.872, epsilon = 1e-3);
        }
    }

    #[test]
    fn local_delta_extremes() {
        let c = AsymptoticConstants::hadamard();
        // sin(4 alpha) = -1 at alpha = -pi/8: delta reaches 1/4 at beta = 0
        let full = CoinSpec1D::new(-PI / 8.0, 0.0).unwrap();
        assert_abs_diff_eq!(asymptotic_delta_local(&full), 0.25, epsilon = 1e-15);
        let entropy_of_delta = |d: f64| {
            binary_entropy(0.5 * (1.0 + (1.0 - 4.0 * d).max(0.0).sqrt())).unwrap()
        };
        assert_abs_diff_eq!(entropy_of_delta(asymptotic_delta_local(&full)), 1.0, epsilon = 1e-12);

        let min = CoinSpec1D::new(-PI / 8.0, PI).unwrap();
        let d_min = asymptotic_delta_local(&min);
        assert_abs_diff_eq!(d_min, c.delta0 - 2.0 * c.b1 * c.b1, epsilon = 1e-15);
        assert_abs_diff_eq!(entropy_of_delta(d_min), 0.736, epsilon = 1e-3);
        assert_abs_diff_eq!(entropy_of_delta(d_min), 0.735915938035, epsilon = 1e-9);
    }

    #[test]
    fn nonlocal_eigenvalue_extremes() {
        let (r_max, r2) =
            asymptotic_eigenvalues_nonlocal(&NonlocalSpec::new(FRAC_PI_4, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(r_max, 0.585786437627, epsilon = 1e-9);
        assert_abs_diff_eq!(r_max + r2, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(binary_entropy(r_max).unwrap(), 0.979, epsilon = 1e-3);

        let (r_min, _) =
            asymptotic_eigenvalues_nonlocal(&NonlocalSpec::new(-FRAC_PI_4, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(r_min, 0.828427124746, epsilon = 1e-9);
        assert_abs_diff_eq!(binary_entropy(r_min).unwrap(), 0.661, epsilon = 1e-3);
    }

    #[test]
    fn nonlocal_localized_theta_gives_intermediate_level() {
        for phi in [-PI, -1.0, 0.0, FRAC_PI_2, PI] {
            for theta in [0.0, FRAC_PI_2, -FRAC_PI_2] {
                let (r, _) =
                    asymptotic_eigenvalues_nonlocal(&NonlocalSpec::new(theta, phi).unwrap())
                        .unwrap();
                assert_abs_diff_eq!(binary_entropy(r).unwrap(), 0.872429339856, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn nonlocal_bracket_bounded_on_grid() {
        let c = AsymptoticConstants::hadamard();
        let mut max_bracket: f64 = 0.0;
        for i in 0..101 {
            for j in 0..101 {
                let theta = -FRAC_PI_2 + PI * i as f64 / 100.0;
                let phi = -PI + 2.0 * PI * j as f64 / 100.0;
                let s = (2.0 * theta).sin();
                let re = c.b0 - c.b_prime * s * phi.cos();
                let im = c.b_prime * s * phi.sin();
                max_bracket = max_bracket.max(re * re + im * im);
            }
        }
        assert!(max_bracket <= 0.25);
    }

    #[test]
    fn spectrum_at_special_wavenumbers() {
        let s = kspace_spectrum(0.0);
        assert_eq!(s.omega, 0.0);
        let (l1, l2) = s.eigenvalues();
        assert_abs_diff_eq!((l1 - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((l2 + Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);

        let s = kspace_spectrum(FRAC_PI_2);
        assert_abs_diff_eq!(s.omega, FRAC_PI_4, epsilon = 1e-15);
    }

    #[test]
    fn spectrum_satisfies_eigenrelations() {
        for i in 0..41 {
            let k = -PI + 2.0 * PI * i as f64 / 40.0;
            let spec = kspace_spectrum(k);
            assert_abs_diff_eq!(spec.omega.sin(), k.sin() / SQRT_2, epsilon = 1e-12);
            let u = kspace_step_matrix(k);
            // |det| = 1
            let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
            assert_abs_diff_eq!(det.norm(), 1.0, epsilon = 1e-12);
            let (l1, l2) = spec.eigenvalues();
            for (vec, lambda) in spec.eigenvectors.iter().zip([l1, l2]) {
                let uv = mat_vec(&u, *vec);
                let dev =
                    ((uv[0] - lambda * vec[0]).norm_sqr() + (uv[1] - lambda * vec[1]).norm_sqr())
                        .sqrt();
                assert!(dev < 1e-10, "eigenrelation violated at k = {k}: {dev}");
            }
            let overlap = dot_conj(&spec.eigenvectors[0], spec.eigenvectors[1]);
            assert!(overlap.norm() < 1e-12);
            assert_abs_diff_eq!(
                spec.eigenvectors[0][0].norm_sqr() + spec.eigenvectors[0][1].norm_sqr(),
                1.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn kspace_identity_at_t_zero() {
        let init = make_nonlocal_state(&NonlocalSpec::new(0.5, 1.0).unwrap());
        let out = evolve_kspace(&init, 0, 64).unwrap();
        for x in -2..=2 {
            let (a, b) = out.amplitudes_at(x);
            let (a0, b0) = init.amplitudes_at(x);
            assert_abs_diff_eq!((a - a0).norm(), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!((b - b0).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn kspace_two_steps_from_origin() {
        let init = make_local_state(&CoinSpec1D::new(0.0, 0.0).unwrap());
        let out = evolve_kspace(&init, 2, 32).unwrap();
        let p = |x: i64| {
            let (a, b) = out.amplitudes_at(x);
            a.norm_sqr() + b.norm_sqr()
        };
        assert_abs_diff_eq!(p(-2), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(p(0), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(p(2), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn kspace_matches_position_stepping() {
        let init = make_local_state(&CoinSpec1D::chi0());
        let t = 50;
        let spectral = evolve_kspace(&init, t, 512).unwrap();
        let mut direct = init;
        for _ in 0..t {
            direct = step_hadamard(&direct);
        }
        let mut worst: f64 = 0.0;
        for x in -(t as i64)..=t as i64 {
            let (a1, b1) = spectral.amplitudes_at(x);
            let (a2, b2) = direct.amplitudes_at(x);
            worst = worst.max((a1 - a2).norm()).max((b1 - b2).norm());
        }
        assert!(worst < 1e-8, "max amplitude deviation {worst}");
    }

    #[test]
    fn kspace_rejects_coarse_grid() {
        let init = make_local_state(&CoinSpec1D::chi0());
        assert!(matches!(
            evolve_kspace(&init, 64, 128),
            Err(Error::Aliasing(_))
        ));
    }

    #[test]
    fn quadrature_balanced_local_coin_hits_delta0() {
        let c = AsymptoticConstants::hadamard();
        let rho =
            asymptotic_density_quadrature(local_coin_profile(&CoinSpec1D::chi0()), 4096).unwrap();
        assert_abs_diff_eq!(rho.delta(), c.delta0, epsilon = 1e-6);
        assert_abs_diff_eq!(rho.entropy(), 0.872429339856, epsilon = 1e-9);
    }

    #[test]
    fn quadrature_matches_local_closed_form_on_grid() {
        for i in 0..5 {
            for j in 0..5 {
                let alpha = -3.0 * PI / 8.0 + PI * i as f64 / 4.0 * 0.75;
                let beta = -PI + 2.0 * PI * j as f64 / 4.0;
                let coin = CoinSpec1D::new(alpha.clamp(-FRAC_PI_2, FRAC_PI_2), beta).unwrap();
                let rho =
                    asymptotic_density_quadrature(local_coin_profile(&coin), 1024).unwrap();
                assert_abs_diff_eq!(rho.delta(), asymptotic_delta_local(&coin), epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn quadrature_matches_nonlocal_closed_form() {
        for i in 0..7 {
            for j in 0..7 {
                let theta = -FRAC_PI_2 + PI * i as f64 / 6.0;
                let phi = -PI + 2.0 * PI * j as f64 / 6.0;
                let spec = NonlocalSpec::new(theta, phi).unwrap();
                let rho = asymptotic_density_quadrature(nonlocal_profile(&spec), 4096).unwrap();
                let (r, _) = asymptotic_eigenvalues_nonlocal(&spec).unwrap();
                let closed = binary_entropy(r).unwrap();
                assert_abs_diff_eq!(rho.entropy(), closed, epsilon = 1e-5);
            }
        }
    }

    #[test]
    fn quadrature_rejects_unnormalized_profile() {
        let bad = |_k: f64| [Complex64::new(0.5, 0.0), Complex64::ZERO];
        assert!(matches!(
            asymptotic_density_quadrature(bad, 256),
            Err(Error::Normalization(_))
        ));
    }

    #[test]
    fn gaussian_profile_entropy_shrinks_with_sigma() {
        let n_k = 4096;
        let mut previous = f64::INFINITY;
        for sigma in [5.0, 10.0, 20.0, 40.0] {
            let rho =
                asymptotic_density_quadrature(gaussian_profile(sigma, n_k).unwrap(), n_k).unwrap();
            let s = rho.entropy();
            assert!(s < previous, "entropy did not shrink at sigma = {sigma}");
            previous = s;
        }
        let rho =
            asymptotic_density_quadrature(gaussian_profile(20.0, n_k).unwrap(), n_k).unwrap();
        assert!(rho.entropy() < 0.05);
        assert_abs_diff_eq!(rho.entropy(), 0.013797254, epsilon = 1e-6);
    }

    #[test]
    fn kspace_density_matches_position_sums() {
        let mut state = make_nonlocal_state(&NonlocalSpec::new(0.6, -2.0).unwrap());
        for _ in 0..6 {
            state = step_hadamard(&state);
        }
        let direct = walk1d::reduce_to_coin(&state);
        let via_k = kspace_density(&state, 256).unwrap();
        assert_abs_diff_eq!(direct.a(), via_k.a(), epsilon = 1e-6);
        assert_abs_diff_eq!(direct.c(), via_k.c(), epsilon = 1e-6);
        assert_abs_diff_eq!((direct.b() - via_k.b()).norm(), 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(direct.delta(), via_k.delta(), epsilon = 1e-6);
    }

    #[test]
    fn simulation_approaches_quadrature_at_generic_point() {
        // a point with both cos(phi) and sin(phi) contributions
        let spec = NonlocalSpec::new(PI / 8.0, PI / 3.0).unwrap();
        let quad = asymptotic_density_quadrature(nonlocal_profile(&spec), 4096)
            .unwrap()
            .entropy();
        let series = walk1d::entropy_series(&make_nonlocal_state(&spec), 400);
        let sim = series.tail_mean(100).unwrap();
        assert_abs_diff_eq!(sim, quad, epsilon = 0.01);
        assert_abs_diff_eq!(quad, 0.904122931, epsilon = 1e-6);
    }
}
