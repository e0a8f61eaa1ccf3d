//! Position-space simulation of the single-walker Hadamard walk on the line.
//!
//! A state stores the coin-up and coin-down amplitudes (a_x, b_x) on a dense
//! window of lattice sites. One step applies the Hadamard coin and then the
//! conditional shift (coin up moves right, coin down moves left); the window
//! grows by one site per side per step, which is exactly the light cone.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::math::{self, EntropySeries};

const NORM_TOL: f64 = 1e-9;

/// Decimal approximations of pi-derived bounds may overshoot by rounding;
/// angles this close past a boundary are clamped onto it.
const ANGLE_SLACK: f64 = 1e-6;

fn checked_angle(value: f64, bound: f64, name: &str) -> Result<f64> {
    if !value.is_finite() || value.abs() > bound + ANGLE_SLACK {
        return Err(Error::Domain(format!(
            "{name} = {value} not in [-{bound}, {bound}]"
        )));
    }
    Ok(value.clamp(-bound, bound))
}

/// Coin state cos(alpha)|0> + e^{i beta} sin(alpha)|1> for a localized start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinSpec1D {
    alpha: f64,
    beta: f64,
}

impl CoinSpec1D {
    /// Requires alpha in [-pi/2, pi/2] and beta in [-pi, pi].
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        Ok(Self {
            alpha: checked_angle(alpha, FRAC_PI_2, "coin alpha")?,
            beta: checked_angle(beta, PI, "coin beta")?,
        })
    }

    /// The balanced coin (|0> + i|1>)/sqrt(2).
    pub fn chi0() -> Self {
        Self {
            alpha: std::f64::consts::FRAC_PI_4,
            beta: FRAC_PI_2,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Coin amplitudes (cos alpha, e^{i beta} sin alpha).
    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        (
            Complex64::new(self.alpha.cos(), 0.0),
            Complex64::from_polar(1.0, self.beta) * self.alpha.sin(),
        )
    }
}

/// Position superposition cos(theta)|-1> + e^{-i phi} sin(theta)|+1>, always
/// carrying the chi0 coin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlocalSpec {
    theta: f64,
    phi: f64,
}

impl NonlocalSpec {
    /// Requires theta in [-pi/2, pi/2] and phi in [-pi, pi].
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        Ok(Self {
            theta: checked_angle(theta, FRAC_PI_2, "theta")?,
            phi: checked_angle(phi, PI, "phi")?,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Pure state of one walker: amplitudes on the window starting at `offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState1D {
    offset: i64,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
}

impl WalkState1D {
    /// Build a state from explicit amplitudes; they must already have unit
    /// norm within 1e-9.
    pub fn from_amplitudes(offset: i64, a: Vec<Complex64>, b: Vec<Complex64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::Domain(format!(
                "amplitude arrays must be nonempty and equal length (got {} and {})",
                a.len(),
                b.len()
            )));
        }
        let state = Self { offset, a, b };
        let norm = state.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization(format!(
                "squared norm {norm} differs from 1"
            )));
        }
        Ok(state)
    }

    /// Build a state from explicit amplitudes, rescaling to unit norm.
    pub fn from_amplitudes_normalized(
        offset: i64,
        mut a: Vec<Complex64>,
        mut b: Vec<Complex64>,
    ) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::Domain(format!(
                "amplitude arrays must be nonempty and equal length (got {} and {})",
                a.len(),
                b.len()
            )));
        }
        let norm: f64 = a.iter().chain(b.iter()).map(|z| z.norm_sqr()).sum();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::Normalization(format!(
                "cannot normalize state with squared norm {norm}"
            )));
        }
        let scale = 1.0 / norm.sqrt();
        for z in a.iter_mut().chain(b.iter_mut()) {
            *z *= scale;
        }
        Ok(Self { offset, a, b })
    }

    /// Lattice coordinate of the first stored site.
    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Number of stored sites.
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Coin-up amplitudes a_x, indexed from `offset`.
    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    /// Coin-down amplitudes b_x, indexed from `offset`.
    pub fn b(&self) -> &[Complex64] {
        &self.b
    }

    /// Inclusive coordinate range of the stored window.
    pub fn x_range(&self) -> (i64, i64) {
        (self.offset, self.offset + self.a.len() as i64 - 1)
    }

    /// Amplitude pair at lattice site x (zero outside the window).
    pub fn amplitudes_at(&self, x: i64) -> (Complex64, Complex64) {
        let i = x - self.offset;
        if i < 0 || i >= self.a.len() as i64 {
            (Complex64::ZERO, Complex64::ZERO)
        } else {
            (self.a[i as usize], self.b[i as usize])
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.iter().chain(self.b.iter()).map(|z| z.norm_sqr()).sum()
    }
}

/// State localized at the origin with the given coin.
pub fn make_local_state(coin: &CoinSpec1D) -> WalkState1D {
    let (a0, b0) = coin.amplitudes();
    WalkState1D {
        offset: 0,
        a: vec![a0],
        b: vec![b0],
    }
}

/// State spread over the sites -1 and +1 with the chi0 coin:
/// cos(theta)|-1> + e^{-i phi} sin(theta)|+1>, unit norm.
pub fn make_nonlocal_state(spec: &NonlocalSpec) -> WalkState1D {
    let chi0 = (
        Complex64::new(1.0 / SQRT_2, 0.0),
        Complex64::new(0.0, 1.0 / SQRT_2),
    );
    let left = Complex64::new(spec.theta.cos(), 0.0);
    let right = Complex64::from_polar(1.0, -spec.phi) * spec.theta.sin();
    WalkState1D {
        offset: -1,
        a: vec![left * chi0.0, Complex64::ZERO, right * chi0.0],
        b: vec![left * chi0.1, Complex64::ZERO, right * chi0.1],
    }
}

/// i^x for integer x, exact.
fn quarter_phase(x: i64) -> Complex64 {
    match x.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Gaussian wave packet of position spread sigma on [-cutoff, cutoff] with
/// the chi0 coin at every site.
///
/// The envelope is exp(-x^2 / (4 sigma^2)) modulated by the site phases i^x,
/// centering the packet at wavenumber pi/2: that is the one wavenumber where
/// chi0 rides a single branch of the dispersion relation, so a wide packet
/// stays nearly a product state. An unmodulated envelope (centered at k = 0)
/// splits evenly across both branches and dephases into the maximally mixed
/// coin instead.
pub fn make_gaussian_state(sigma: f64, cutoff: u32) -> Result<WalkState1D> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::Domain(format!("sigma = {sigma} must be positive")));
    }
    if (cutoff as f64) < 5.0 * sigma {
        return Err(Error::Domain(format!(
            "cutoff = {cutoff} must be at least 5 sigma = {}",
            5.0 * sigma
        )));
    }
    let chi0 = (
        Complex64::new(1.0 / SQRT_2, 0.0),
        Complex64::new(0.0, 1.0 / SQRT_2),
    );
    let n = 2 * cutoff as usize + 1;
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for i in 0..n {
        let x = i as i64 - cutoff as i64;
        let g = (-(x as f64) * (x as f64) / (4.0 * sigma * sigma)).exp();
        let amp = quarter_phase(x) * g;
        a.push(amp * chi0.0);
        b.push(amp * chi0.1);
    }
    WalkState1D::from_amplitudes_normalized(-(cutoff as i64), a, b)
}

/// One step of the Hadamard walk: coin H, then shift (up right, down left).
/// The output window is one site wider on each side.
pub fn step_hadamard(state: &WalkState1D) -> WalkState1D {
    let n = state.len();
    let mut a = vec![Complex64::ZERO; n + 2];
    let mut b = vec![Complex64::ZERO; n + 2];
    let inv_sqrt2 = 1.0 / SQRT_2;
    for i in 0..n {
        let mixed_up = (state.a[i] + state.b[i]) * inv_sqrt2;
        let mixed_down = (state.a[i] - state.b[i]) * inv_sqrt2;
        a[i + 2] = mixed_up; // site x+1
        b[i] = mixed_down; // site x-1
    }
    WalkState1D {
        offset: state.offset - 1,
        a,
        b,
    }
}

/// Inverse of `step_hadamard`: undo the shift, then apply H again.
pub fn step_hadamard_adjoint(state: &WalkState1D) -> WalkState1D {
    let n = state.len();
    let mut a = vec![Complex64::ZERO; n + 2];
    let mut b = vec![Complex64::ZERO; n + 2];
    let inv_sqrt2 = 1.0 / SQRT_2;
    for i in 0..n {
        // amplitude that arrived at x came from x-1 (coin up) or x+1 (down)
        let up = state.a[i]; // returns to site x-1: output index i
        let down = state.b[i]; // returns to site x+1: output index i+2
        a[i] += up * inv_sqrt2;
        b[i] += up * inv_sqrt2;
        a[i + 2] += down * inv_sqrt2;
        b[i + 2] -= down * inv_sqrt2;
    }
    WalkState1D {
        offset: state.offset - 1,
        a,
        b,
    }
}

/// Per-site probabilities |a_x|^2 + |b_x|^2 over the stored window.
pub fn position_distribution(state: &WalkState1D) -> Vec<(i64, f64)> {
    state
        .a
        .iter()
        .zip(state.b.iter())
        .enumerate()
        .map(|(i, (a, b))| (state.offset + i as i64, a.norm_sqr() + b.norm_sqr()))
        .collect()
}

/// Variance of the position distribution about its mean.
pub fn position_variance(state: &WalkState1D) -> f64 {
    let dist = position_distribution(state);
    let mean: f64 = dist.iter().map(|&(x, p)| x as f64 * p).sum();
    dist.iter()
        .map(|&(x, p)| {
            let d = x as f64 - mean;
            d * d * p
        })
        .sum()
}

/// The 2x2 reduced coin density matrix ((a, b), (b*, c)) together with its
/// determinant delta = ac - |b|^2, the entanglement monotone in [0, 1/4].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedCoinDensity {
    a: f64,
    b: Complex64,
    c: f64,
    delta: f64,
}

impl ReducedCoinDensity {
    pub fn new(a: f64, b: Complex64, c: f64) -> Result<Self> {
        if a < -1e-12 || c < -1e-12 || (a + c - 1.0).abs() > NORM_TOL {
            return Err(Error::Invariant(format!(
                "coin density diagonal ({a}, {c}) is not a unit-trace distribution"
            )));
        }
        let delta = a * c - b.norm_sqr();
        if !(-1e-12..=0.25 + 1e-12).contains(&delta) {
            return Err(Error::Invariant(format!(
                "coin density determinant {delta} outside [0, 1/4]"
            )));
        }
        Ok(Self { a, b, c, delta })
    }

    /// Population of coin |0>.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Coherence between the coin states.
    pub fn b(&self) -> Complex64 {
        self.b
    }

    /// Population of coin |1>.
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> (f64, f64) {
        math::hermitian2_eigenvalues(self.a, self.b, self.c)
            .expect("validated density matrix has eigenvalues")
    }

    /// Von Neumann entropy in e-bits.
    pub fn entropy(&self) -> f64 {
        let (r, _) = self.eigenvalues();
        math::binary_entropy(r).expect("eigenvalue of a density matrix lies in [0, 1]")
    }
}

/// Trace out the position register: a = sum |a_x|^2, b = sum a_x b_x*,
/// c = sum |b_x|^2.
pub fn reduce_to_coin(state: &WalkState1D) -> ReducedCoinDensity {
    let mut a = 0.0;
    let mut c = 0.0;
    let mut b = Complex64::ZERO;
    for (ax, bx) in state.a.iter().zip(state.b.iter()) {
        a += ax.norm_sqr();
        c += bx.norm_sqr();
        b += ax * bx.conj();
    }
    ReducedCoinDensity::new(a, b, c).expect("unit-norm state reduces to a valid coin density")
}

/// Coin-position entanglement entropy of the walker, in [0, 1] e-bits.
pub fn coin_position_entropy(state: &WalkState1D) -> f64 {
    reduce_to_coin(state).entropy()
}

/// Evolve `steps` Hadamard steps, recording the entanglement entropy at every
/// time (including t = 0).
pub fn entropy_series(initial: &WalkState1D, steps: u64) -> EntropySeries {
    let mut series = EntropySeries::new();
    let mut state = initial.clone();
    series
        .push(0, coin_position_entropy(&state))
        .expect("entropy of a valid state is finite");
    for t in 1..=steps {
        state = step_hadamard(&state);
        series
            .push(t, coin_position_entropy(&state))
            .expect("entropy of a valid state is finite");
    }
    series
}
