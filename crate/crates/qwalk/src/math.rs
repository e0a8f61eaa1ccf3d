//! Shared numerics: entropy functions, the 2x2 Hermitian eigenproblem,
//! Schmidt-coefficient entropy of a bipartite amplitude matrix, and
//! least-squares fitting of logarithmic growth.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for probability-like inputs that may carry float rounding.
const PROB_TOL: f64 = 1e-12;

/// -p log2(p), with the 0 log 0 = 0 convention taken by branch so that pure
/// states come out exactly 0.
#[inline]
fn plog2(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Shannon entropy of the distribution {r, 1-r} in base 2 (e-bits).
///
/// `r` may stray outside [0, 1] by at most 1e-12 (rounding slack); anything
/// further is a domain error.
pub fn binary_entropy(r: f64) -> Result<f64> {
    if !r.is_finite() || !(-PROB_TOL..=1.0 + PROB_TOL).contains(&r) {
        return Err(Error::Domain(format!("binary_entropy: r = {r} not in [0, 1]")));
    }
    let r = r.clamp(0.0, 1.0);
    Ok(plog2(r) + plog2(1.0 - r))
}

/// Eigenvalues of the Hermitian matrix ((a, b), (b*, c)) with unit trace,
/// ordered descending.
///
/// For a density matrix with determinant d = ac - |b|^2 the eigenvalues are
/// (1 +- sqrt(1 - 4d)) / 2. A determinant beyond 1/4 is impossible for a
/// valid density matrix and is rejected.
pub fn hermitian2_eigenvalues(a: f64, b: Complex64, c: f64) -> Result<(f64, f64)> {
    if (a + c - 1.0).abs() > 1e-9 {
        return Err(Error::Invariant(format!(
            "hermitian2_eigenvalues: trace {} differs from 1",
            a + c
        )));
    }
    let delta = a * c - b.norm_sqr();
    let disc = 1.0 - 4.0 * delta;
    if disc < -PROB_TOL {
        return Err(Error::Invariant(format!(
            "hermitian2_eigenvalues: determinant {delta} exceeds 1/4"
        )));
    }
    let r = 0.5 * (1.0 + disc.max(0.0).sqrt());
    Ok((r, 1.0 - r))
}

/// Entanglement entropy of a pure bipartite state written as an amplitude
/// matrix of unit Frobenius norm.
///
/// The squared singular values of `m` are the eigenvalues of either reduced
/// density matrix, so the result equals the von Neumann entropy of the
/// partial trace without ever forming it.
pub fn schmidt_entropy(m: &DMatrix<Complex64>) -> Result<f64> {
    let norm = m.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-6 {
        return Err(Error::Normalization(format!(
            "schmidt_entropy: Frobenius norm {norm} differs from 1"
        )));
    }
    let sv = m.singular_values();
    // a leading singular value of 1 + eps would contribute -eps; entropy is
    // nonnegative, so round that away
    Ok(sv.iter().map(|s| plog2(s * s)).sum::<f64>().max(0.0))
}

/// Time series of entropy samples, strictly increasing in t.
#[derive(Debug, Clone, Default)]
pub struct EntropySeries {
    entries: Vec<(u64, f64)>,
}

impl EntropySeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: Vec<(u64, f64)>) -> Result<Self> {
        let mut series = Self::new();
        for (t, s) in entries {
            series.push(t, s)?;
        }
        Ok(series)
    }

    /// Append a sample. `t` must exceed the last sample time and `s` must be
    /// a nonnegative finite entropy.
    pub fn push(&mut self, t: u64, s: f64) -> Result<()> {
        if let Some(&(last, _)) = self.entries.last() {
            if t <= last {
                return Err(Error::Invariant(format!(
                    "entropy series: t = {t} does not increase past {last}"
                )));
            }
        }
        if !s.is_finite() || s < 0.0 {
            return Err(Error::Domain(format!("entropy series: invalid entropy {s}")));
        }
        self.entries.push((t, s));
        Ok(())
    }

    pub fn entries(&self) -> &[(u64, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Mean entropy over the last `count` samples (or all of them if fewer).
    pub fn tail_mean(&self, count: usize) -> Option<f64> {
        if self.entries.is_empty() {
            return None;
        }
        let n = count.min(self.entries.len()).max(1);
        let sum: f64 = self.entries[self.entries.len() - n..].iter().map(|&(_, s)| s).sum();
        Some(sum / n as f64)
    }
}

/// Result of a least-squares fit of entropy against log2(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    /// Slope: the growth exponent c in S ~ log2(t^c).
    pub c: f64,
    pub intercept: f64,
    pub residual_rms: f64,
}

/// Ordinary least squares of s against log2(t) over samples with t >= t_min.
///
/// Samples at t = 0 are always excluded (log2 undefined). Needs at least
/// three usable points.
pub fn fit_log2_growth(series: &EntropySeries, t_min: u64) -> Result<FitResult> {
    let t_min = t_min.max(1);
    let pts: Vec<(f64, f64)> = series
        .entries()
        .iter()
        .filter(|&&(t, _)| t >= t_min)
        .map(|&(t, s)| ((t as f64).log2(), s))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "fit_log2_growth: {} usable points with t >= {t_min}, need 3",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mean_u = pts.iter().map(|&(u, _)| u).sum::<f64>() / n;
    let mean_s = pts.iter().map(|&(_, s)| s).sum::<f64>() / n;
    let mut suu = 0.0;
    let mut sus = 0.0;
    for &(u, s) in &pts {
        suu += (u - mean_u) * (u - mean_u);
        sus += (u - mean_u) * (s - mean_s);
    }
    let c = sus / suu;
    let intercept = mean_s - c * mean_u;
    let ss: f64 = pts
        .iter()
        .map(|&(u, s)| {
            let r = s - (c * u + intercept);
            r * r
        })
        .sum();
    Ok(FitResult {
        c,
        intercept,
        residual_rms: (ss / n).sqrt(),
    })
}
