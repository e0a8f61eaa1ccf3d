//! Two coherent walkers on the line with a joint four-dimensional coin.
//!
//! Amplitudes live on a dense square window indexed by the coin pair and the
//! two positions. The coin basis order is (|00>, |01>, |10>, |11>): the first
//! bit belongs to walker A and drives the x shift, the second to walker B and
//! drives the y shift (0 steps up, 1 steps down). The A|B bipartition used by
//! the entanglement entropy is everything of walker A (its coin bit and x)
//! against everything of walker B; for product coins that cut provably stays
//! unentangled, which is what makes it the meaningful one here.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::math::{self, EntropySeries};

const NORM_TOL: f64 = 1e-9;

/// Unitary acting on the two-qubit coin, basis (|00>, |01>, |10>, |11>).
#[derive(Debug, Clone, PartialEq)]
pub struct CoinOp4 {
    entries: [[Complex64; 4]; 4],
}

impl CoinOp4 {
    /// Validates unitarity: U U^dagger = I within 1e-12 per entry.
    #[allow(clippy::needless_range_loop)]
    pub fn new(entries: [[Complex64; 4]; 4]) -> Result<Self> {
        for i in 0..4 {
            for j in 0..4 {
                let mut dot = Complex64::ZERO;
                for k in 0..4 {
                    dot += entries[i][k] * entries[j][k].conj();
                }
                let expected = if i == j { 1.0 } else { 0.0 };
                if (dot - expected).norm() > 1e-12 {
                    return Err(Error::Invariant(format!(
                        "coin operator is not unitary at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[[Complex64; 4]; 4] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i][j]
    }

    /// Apply to a coin 4-vector.
    pub fn apply(&self, v: &[Complex64; 4]) -> [Complex64; 4] {
        let mut out = [Complex64::ZERO; 4];
        for (o, row) in out.iter_mut().zip(self.entries.iter()) {
            for (m, x) in row.iter().zip(v.iter()) {
                *o += m * x;
            }
        }
        out
    }

    /// Kronecker product of two single-coin unitaries, A on the first bit.
    pub fn kron(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> Result<Self> {
        let mut entries = [[Complex64::ZERO; 4]; 4];
        for ia in 0..2 {
            for ib in 0..2 {
                for ja in 0..2 {
                    for jb in 0..2 {
                        entries[2 * ia + ib][2 * ja + jb] = a[ia][ja] * b[ib][jb];
                    }
                }
            }
        }
        Self::new(entries)
    }
}

fn real_matrix(scale: f64, signs: [[f64; 4]; 4]) -> [[Complex64; 4]; 4] {
    let mut m = [[Complex64::ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = Complex64::new(scale * signs[i][j], 0.0);
        }
    }
    m
}

/// The separable Hadamard coin H (x) H, all entries +-1/2.
pub fn coin_hadamard2() -> CoinOp4 {
    CoinOp4::new(real_matrix(
        0.5,
        [
            [1.0, 1.0, 1.0, 1.0],
            [1.0, -1.0, 1.0, -1.0],
            [1.0, 1.0, -1.0, -1.0],
            [1.0, -1.0, -1.0, 1.0],
        ],
    ))
    .expect("H (x) H is unitary")
}

/// The Grover reflection coin: diagonal -1/2, off-diagonal +1/2.
pub fn coin_grover() -> CoinOp4 {
    CoinOp4::new(real_matrix(
        0.5,
        [
            [-1.0, 1.0, 1.0, 1.0],
            [1.0, -1.0, 1.0, 1.0],
            [1.0, 1.0, -1.0, 1.0],
            [1.0, 1.0, 1.0, -1.0],
        ],
    ))
    .expect("the Grover reflection is unitary")
}

/// The random-Pavlov game coin CNOT (H (x) I): sends the computational
/// basis to the Bell basis.
pub fn coin_rp() -> CoinOp4 {
    CoinOp4::new(real_matrix(
        1.0 / SQRT_2,
        [
            [1.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 1.0],
            [0.0, 1.0, 0.0, -1.0],
            [1.0, 0.0, -1.0, 0.0],
        ],
    ))
    .expect("CNOT (H (x) I) is unitary")
}

/// The balanced separable coin chi0 (x) chi0 = (|00> + i|01> + i|10> - |11>)/2.
pub fn coin_chi1() -> [Complex64; 4] {
    [
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, 0.5),
        Complex64::new(0.0, 0.5),
        Complex64::new(-0.5, 0.0),
    ]
}

/// The balanced separable coin (|0>-|1>)/sqrt2 (x) (|0>-|1>)/sqrt2
/// = (|00> - |01> - |10> + |11>)/2.
pub fn coin_chi2() -> [Complex64; 4] {
    [
        Complex64::new(0.5, 0.0),
        Complex64::new(-0.5, 0.0),
        Complex64::new(-0.5, 0.0),
        Complex64::new(0.5, 0.0),
    ]
}

/// Pure state of two walkers on a rectangular window.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState2D {
    offset_x: i64,
    offset_y: i64,
    nx: usize,
    ny: usize,
    /// Layout: amp[((coin * nx) + ix) * ny + iy].
    amp: Vec<Complex64>,
}

impl WalkState2D {
    pub fn from_amplitudes(
        offset_x: i64,
        offset_y: i64,
        nx: usize,
        ny: usize,
        amp: Vec<Complex64>,
    ) -> Result<Self> {
        if nx == 0 || ny == 0 || amp.len() != 4 * nx * ny {
            return Err(Error::Domain(format!(
                "amplitude buffer of {} entries does not match 4 x {nx} x {ny}",
                amp.len()
            )));
        }
        let state = Self {
            offset_x,
            offset_y,
            nx,
            ny,
            amp,
        };
        let norm = state.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization(format!(
                "squared norm {norm} differs from 1"
            )));
        }
        Ok(state)
    }

    #[inline]
    fn idx(&self, coin: usize, ix: usize, iy: usize) -> usize {
        (coin * self.nx + ix) * self.ny + iy
    }

    pub fn offset_x(&self) -> i64 {
        self.offset_x
    }

    pub fn offset_y(&self) -> i64 {
        self.offset_y
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Amplitude of coin basis state `coin` at lattice site (x, y); zero
    /// outside the window.
    pub fn amplitude(&self, coin: usize, x: i64, y: i64) -> Complex64 {
        assert!(coin < 4);
        let ix = x - self.offset_x;
        let iy = y - self.offset_y;
        if ix < 0 || iy < 0 || ix >= self.nx as i64 || iy >= self.ny as i64 {
            Complex64::ZERO
        } else {
            self.amp[self.idx(coin, ix as usize, iy as usize)]
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// State localized at the origin with the given (unit norm) two-qubit coin.
pub fn make_local_state2(coin4: &[Complex64; 4]) -> Result<WalkState2D> {
    let norm: f64 = coin4.iter().map(|z| z.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Normalization(format!(
            "coin squared norm {norm} differs from 1"
        )));
    }
    WalkState2D::from_amplitudes(0, 0, 1, 1, coin4.to_vec())
}

/// One step: apply the coin, then shift walker A by +-1 in x (coin bit 0 up)
/// and walker B by +-1 in y. The window grows by one site per side per axis.
pub fn step2(state: &WalkState2D, coin: &CoinOp4) -> WalkState2D {
    let (nx, ny) = (state.nx, state.ny);
    let (mx, my) = (nx + 2, ny + 2);
    let mut amp = vec![Complex64::ZERO; 4 * mx * my];
    // output cell of each coin component relative to the new offset:
    // |00> -> (+1, +1), |01> -> (+1, -1), |10> -> (-1, +1), |11> -> (-1, -1)
    let shifts = [(2usize, 2usize), (2, 0), (0, 2), (0, 0)];
    for ix in 0..nx {
        for iy in 0..ny {
            let v = [
                state.amp[state.idx(0, ix, iy)],
                state.amp[state.idx(1, ix, iy)],
                state.amp[state.idx(2, ix, iy)],
                state.amp[state.idx(3, ix, iy)],
            ];
            let w = coin.apply(&v);
            for (c, &(dx, dy)) in shifts.iter().enumerate() {
                amp[(c * mx + ix + dx) * my + iy + dy] += w[c];
            }
        }
    }
    WalkState2D {
        offset_x: state.offset_x - 1,
        offset_y: state.offset_y - 1,
        nx: mx,
        ny: my,
        amp,
    }
}

/// Joint probability of finding walker A at x and walker B at y.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    offset_x: i64,
    offset_y: i64,
    nx: usize,
    ny: usize,
    p: Vec<f64>,
}

impl JointDistribution {
    pub fn offset_x(&self) -> i64 {
        self.offset_x
    }

    pub fn offset_y(&self) -> i64 {
        self.offset_y
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn prob(&self, x: i64, y: i64) -> f64 {
        let ix = x - self.offset_x;
        let iy = y - self.offset_y;
        if ix < 0 || iy < 0 || ix >= self.nx as i64 || iy >= self.ny as i64 {
            0.0
        } else {
            self.p[ix as usize * self.ny + iy as usize]
        }
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    /// Probability inside the square |x| <= radius, |y| <= radius.
    pub fn central_mass(&self, radius: i64) -> f64 {
        let mut sum = 0.0;
        for x in -radius..=radius {
            for y in -radius..=radius {
                sum += self.prob(x, y);
            }
        }
        sum
    }

    /// Marginal distribution of walker A.
    pub fn marginal_x(&self) -> Vec<(i64, f64)> {
        (0..self.nx)
            .map(|ix| {
                let p = (0..self.ny).map(|iy| self.p[ix * self.ny + iy]).sum();
                (self.offset_x + ix as i64, p)
            })
            .collect()
    }

    /// Marginal distribution of walker B.
    pub fn marginal_y(&self) -> Vec<(i64, f64)> {
        (0..self.ny)
            .map(|iy| {
                let p = (0..self.nx).map(|ix| self.p[ix * self.ny + iy]).sum();
                (self.offset_y + iy as i64, p)
            })
            .collect()
    }

    /// Entries with probability above `threshold`, row-major.
    pub fn cells_above(&self, threshold: f64) -> Vec<(i64, i64, f64)> {
        let mut out = Vec::new();
        for ix in 0..self.nx {
            for iy in 0..self.ny {
                let p = self.p[ix * self.ny + iy];
                if p > threshold {
                    out.push((self.offset_x + ix as i64, self.offset_y + iy as i64, p));
                }
            }
        }
        out
    }
}

/// Standard deviation of a marginal distribution about its mean.
pub fn marginal_std(marginal: &[(i64, f64)]) -> f64 {
    let mean: f64 = marginal.iter().map(|&(x, p)| x as f64 * p).sum();
    marginal
        .iter()
        .map(|&(x, p)| {
            let d = x as f64 - mean;
            d * d * p
        })
        .sum::<f64>()
        .sqrt()
}

/// Trace out the coin: P(x, y) = sum of the four squared coin amplitudes.
pub fn joint_distribution(state: &WalkState2D) -> JointDistribution {
    let (nx, ny) = (state.nx, state.ny);
    let mut p = vec![0.0; nx * ny];
    for c in 0..4 {
        for ix in 0..nx {
            for iy in 0..ny {
                p[ix * ny + iy] += state.amp[state.idx(c, ix, iy)].norm_sqr();
            }
        }
    }
    JointDistribution {
        offset_x: state.offset_x,
        offset_y: state.offset_y,
        nx,
        ny,
        p,
    }
}

/// Entanglement entropy between walker A (coin bit + x) and walker B
/// (coin bit + y), in e-bits.
///
/// The state is reshaped into the amplitude matrix with rows (coin_A, x) and
/// columns (coin_B, y); the entropy of its Schmidt coefficients is the von
/// Neumann entropy of either walker's reduced state.
pub fn bipartite_entropy_ab(state: &WalkState2D) -> f64 {
    let m = bipartite_matrix(state);
    math::schmidt_entropy(&m).expect("unit-norm state yields a unit-norm amplitude matrix")
}

/// The (2 nx) x (2 ny) amplitude matrix of the A|B cut.
pub fn bipartite_matrix(state: &WalkState2D) -> DMatrix<Complex64> {
    let (nx, ny) = (state.nx, state.ny);
    DMatrix::from_fn(2 * nx, 2 * ny, |row, col| {
        let (ca, ix) = (row / nx, row % nx);
        let (cb, iy) = (col / ny, col % ny);
        state.amp[state.idx(2 * ca + cb, ix, iy)]
    })
}

/// The sampling schedule used for entanglement growth fits: approximately
/// log-uniform times up to `max_t`.
pub fn fit_sample_times(max_t: u64) -> Vec<u64> {
    [4u64, 6, 8, 12, 16, 24, 32, 48, 64, 96]
        .into_iter()
        .filter(|&t| t <= max_t)
        .collect()
}

/// Evolve with the given coin, recording the A|B entropy at the requested
/// times (which must be strictly increasing).
pub fn entropy_series2(
    initial: &WalkState2D,
    coin: &CoinOp4,
    sample_times: &[u64],
) -> Result<EntropySeries> {
    let mut series = EntropySeries::new();
    let mut state = initial.clone();
    let mut next = sample_times.iter().copied().peekable();
    if next.peek() == Some(&0) {
        next.next();
        series.push(0, bipartite_entropy_ab(&state))?;
    }
    let last = *sample_times.last().unwrap_or(&0);
    for t in 1..=last {
        state = step2(&state, coin);
        if next.peek() == Some(&t) {
            next.next();
            series.push(t, bipartite_entropy_ab(&state))?;
        }
    }
    Ok(series)
}
