//! Entanglement and correlation quantifiers for two-qubit states.
//!
//! Discord and classical correlation use a measurement on qubit B. For
//! X-states the minimization over measurements reduces to five candidate
//! conditional entropies `S1..S5` built from six angles `θ0..θ5`;
//! [`discord_bruteforce`] is the independent check, sweeping projective
//! measurements over the Bloch sphere.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    binary_entropy_h, general_real_spectrum, kron, partial_trace, pauli_y, von_neumann_entropy, xlog2x, ComplexMat2,
    Subsystem, C64,
};
use crate::model::DensityMatrix;

/// Largest off-pattern magnitude an X-state may carry.
pub const X_PATTERN_TOL: f64 = 1e-10;
/// Branch probabilities below this make the branch degenerate.
const DEGENERATE_PROB: f64 = 1e-12;
pub const MIN_BRUTEFORCE_GRID: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub concurrence: f64,
    /// Quantum discord, bits.
    pub discord: f64,
    /// Classical correlation, bits.
    pub classical: f64,
    pub mutual_info: f64,
    /// Which of `S1..S5` attained the minimum (1-based, lowest index on ties).
    pub argmin_branch: u8,
    pub thetas: [f64; 6],
}

/// Wootters concurrence from the spectrum of `ρ (σy⊗σy) ρ* (σy⊗σy)`.
pub fn concurrence_general(rho: &DensityMatrix) -> Result<f64> {
    let yy = kron(&pauli_y(), &pauli_y());
    let flipped = yy * rho.matrix().conjugate() * yy;
    let spectrum = general_real_spectrum(&(rho.matrix() * flipped))?;
    let roots = spectrum.map(|x| x.max(0.0).sqrt());
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).clamp(0.0, 1.0))
}

fn require_x_state(rho: &DensityMatrix) -> Result<()> {
    let magnitude = rho.off_x_magnitude();
    if magnitude > X_PATTERN_TOL {
        return Err(Error::NotXState { magnitude });
    }
    Ok(())
}

fn diagonal(rho: &DensityMatrix) -> [f64; 4] {
    [0, 1, 2, 3].map(|k| rho.get(k, k).re)
}

/// `2 max(0, |ρ23| − √(ρ11ρ44), |ρ14| − √(ρ22ρ33))` for X-states.
pub fn concurrence_x(rho: &DensityMatrix) -> Result<f64> {
    require_x_state(rho)?;
    let [r11, r22, r33, r44] = diagonal(rho);
    let a = rho.get(1, 2).norm() - (r11 * r44).max(0.0).sqrt();
    let b = rho.get(0, 3).norm() - (r22 * r33).max(0.0).sqrt();
    Ok((2.0 * a.max(b).max(0.0)).min(1.0))
}

/// `I(ρ) = S(ρ^A) + S(ρ^B) − S(ρ)`, bits.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    let (s_a, s_b, s) = entropies(rho)?;
    Ok(s_a + s_b - s)
}

fn entropies(rho: &DensityMatrix) -> Result<(f64, f64, f64)> {
    let s_a = von_neumann_entropy(&partial_trace(rho.matrix(), Subsystem::A))?;
    let s_b = von_neumann_entropy(&partial_trace(rho.matrix(), Subsystem::B))?;
    let s = von_neumann_entropy(rho.matrix())?;
    Ok((s_a, s_b, s))
}

/// Angles and outcome probabilities feeding the five-branch minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaParams {
    pub thetas: [f64; 6],
    /// `ρ11 + ρ33`
    pub p0: f64,
    /// `ρ22 + ρ44`
    pub p1: f64,
    /// Set when `p0` (index 0) or `p1` (index 1) vanishes; that branch then
    /// contributes nothing and its θ is reported as 0.
    pub degenerate: [bool; 2],
}

impl ThetaParams {
    /// `[S1, S2, S3, S4, S5]`.
    pub fn branch_entropies(&self) -> Result<[f64; 5]> {
        let weighted = |prob: f64, theta: f64, degenerate: bool| -> Result<f64> {
            if degenerate {
                Ok(0.0)
            } else {
                Ok(prob * binary_entropy_h(theta)?)
            }
        };
        let s1 = weighted(self.p0, self.thetas[0], self.degenerate[0])?
            + weighted(self.p1, self.thetas[1], self.degenerate[1])?;
        Ok([
            s1,
            binary_entropy_h(self.thetas[2])?,
            binary_entropy_h(self.thetas[3])?,
            binary_entropy_h(self.thetas[4])?,
            binary_entropy_h(self.thetas[5])?,
        ])
    }
}

fn clamp_theta(theta: f64) -> Result<f64> {
    if !(theta <= 1.0 + 1e-9) {
        return Err(Error::OutOfRange {
            name: "theta",
            value: theta,
            range: "[0, 1]",
        });
    }
    Ok(theta.clamp(0.0, 1.0))
}

pub fn theta_params(rho: &DensityMatrix) -> Result<ThetaParams> {
    require_x_state(rho)?;
    let [r11, r22, r33, r44] = diagonal(rho);
    let (r14, r23) = (rho.get(0, 3), rho.get(1, 2));

    let p0 = r11 + r33;
    let p1 = r22 + r44;
    let degenerate = [p0 < DEGENERATE_PROB, p1 < DEGENERATE_PROB];
    let theta0 = if degenerate[0] { 0.0 } else { ((r11 - r33) / p0).abs() };
    let theta1 = if degenerate[1] { 0.0 } else { ((r22 - r44) / p1).abs() };

    let cross = r14 * r23.conj();
    let polar = 0.25 * (r11 + r22 - r33 - r44).powi(2);
    let base = r14.norm_sqr() + r23.norm_sqr() + polar;
    let radial = |shift: f64| 2.0 * (base + 2.0 * shift).max(0.0).sqrt();

    let thetas = [
        theta0,
        theta1,
        radial(cross.re),
        radial(-cross.re),
        radial(cross.im),
        radial(-cross.im),
    ];
    let mut clamped = [0.0; 6];
    for (slot, theta) in clamped.iter_mut().zip(thetas) {
        *slot = clamp_theta(theta)?;
    }
    Ok(ThetaParams {
        thetas: clamped,
        p0,
        p1,
        degenerate,
    })
}

/// Discord and classical correlation of an X-state via the five-branch minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    pub discord: f64,
    pub classical: f64,
    pub mutual_info: f64,
    pub argmin_branch: u8,
    pub branch_entropies: [f64; 5],
    pub thetas: ThetaParams,
}

pub fn discord_and_classical(rho: &DensityMatrix) -> Result<DiscordResult> {
    let thetas = theta_params(rho)?;
    let branches = thetas.branch_entropies()?;
    let (mut best, mut min) = (0, branches[0]);
    for (k, &s) in branches.iter().enumerate().skip(1) {
        if s < min {
            best = k;
            min = s;
        }
    }
    let (s_a, s_b, s) = entropies(rho)?;
    Ok(DiscordResult {
        discord: s_b - s + min,
        classical: s_a - min,
        mutual_info: s_a + s_b - s,
        argmin_branch: best as u8 + 1,
        branch_entropies: branches,
        thetas,
    })
}

/// Concurrence, discord, classical correlation and mutual information of an X-state.
pub fn correlation_report(rho: &DensityMatrix) -> Result<CorrelationReport> {
    let discord = discord_and_classical(rho)?;
    Ok(CorrelationReport {
        concurrence: concurrence_x(rho)?,
        discord: discord.discord,
        classical: discord.classical,
        mutual_info: discord.mutual_info,
        argmin_branch: discord.argmin_branch,
        thetas: discord.thetas.thetas,
    })
}

/// `Σ_k p_k S(ρ_A|k)` for the projective measurement on B along the Bloch
/// direction `(polar, azimuth)`.
fn measured_conditional_entropy(rho: &DensityMatrix, polar: f64, azimuth: f64) -> f64 {
    let (c, s) = ((polar / 2.0).cos(), (polar / 2.0).sin());
    let phase = C64::from_polar(1.0, azimuth);
    let basis = [[C64::new(c, 0.0), phase * s], [-phase.conj() * s, C64::new(c, 0.0)]];
    let m = rho.matrix();
    basis
        .iter()
        .map(|v| {
            // (I ⊗ ⟨v|) ρ (I ⊗ |v⟩), unnormalized conditional state of A
            let cond = ComplexMat2::from_fn(|a, a2| {
                let mut acc = C64::new(0.0, 0.0);
                for b in 0..2 {
                    for b2 in 0..2 {
                        acc += v[b].conj() * m[(2 * a + b, 2 * a2 + b2)] * v[b2];
                    }
                }
                acc
            });
            let prob = cond[(0, 0)].re + cond[(1, 1)].re;
            let mean = 0.5 * prob;
            let radius = (0.25 * (cond[(0, 0)].re - cond[(1, 1)].re).powi(2) + cond[(0, 1)].norm_sqr()).sqrt();
            // p·S(M/p) = −Σ μ log μ + p log p over the eigenvalues μ of M
            xlog2x(mean + radius) + xlog2x(mean - radius) - xlog2x(prob)
        })
        .sum()
}

/// Discord by direct sweep over projective measurements on B.
///
/// Scans a `(grid + 1) × 2·grid` lattice of Bloch angles, then one refinement
/// pass at half spacing around the best point. Residual error is about 1e-3
/// bits or better.
pub fn discord_bruteforce(rho: &DensityMatrix, grid: usize) -> Result<f64> {
    if grid < MIN_BRUTEFORCE_GRID {
        return Err(Error::OutOfRange {
            name: "grid",
            value: grid as f64,
            range: "[64, inf)",
        });
    }
    let step = std::f64::consts::PI / grid as f64;
    let coarse = (0..=grid)
        .into_par_iter()
        .map(|i| {
            (0..2 * grid)
                .map(|j| {
                    (
                        measured_conditional_entropy(rho, i as f64 * step, j as f64 * step),
                        i,
                        j,
                    )
                })
                .fold((f64::INFINITY, 0, 0), lowest)
        })
        .reduce(|| (f64::INFINITY, 0, 0), lowest);

    let (center_polar, center_azimuth) = (coarse.1 as f64 * step, coarse.2 as f64 * step);
    let half = 0.5 * step;
    let mut best = coarse.0;
    for di in -2i32..=2 {
        for dj in -2i32..=2 {
            let polar = (center_polar + di as f64 * half).clamp(0.0, std::f64::consts::PI);
            let value = measured_conditional_entropy(rho, polar, center_azimuth + dj as f64 * half);
            best = best.min(value);
        }
    }

    let s_b = von_neumann_entropy(&partial_trace(rho.matrix(), Subsystem::B))?;
    let s = von_neumann_entropy(rho.matrix())?;
    Ok(s_b - s + best)
}

/// Order-independent minimum: ties go to the smaller lattice index.
fn lowest(a: (f64, usize, usize), b: (f64, usize, usize)) -> (f64, usize, usize) {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => {
            if (a.1, a.2) <= (b.1, b.2) {
                a
            } else {
                b
            }
        }
    }
}
