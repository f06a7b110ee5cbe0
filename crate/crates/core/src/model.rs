//! Initial states, the XY + DM Hamiltonian and the Lindblad generators.
//!
//! Basis ordering is `{|00⟩, |01⟩, |10⟩, |11⟩}`. The qubit lowering operator
//! is `σ⁻ = |1⟩⟨0|`, so `|0⟩` is the excited level: amplitude damping drives
//! population `|00⟩ → {|01⟩, |10⟩} → |11⟩`.

use std::fmt;
use std::str::FromStr;

use nalgebra::Vector4;

use crate::error::{Error, Result};
use crate::linalg::{
    commutator, hermitian_deviation, hermitian_eigenvalues, identity2, kron, max_abs, ComplexMat2, ComplexMat4, C64,
    HERMITIAN_TOL, I, ONE, POSITIVITY_TOL, ZERO,
};

/// Couplings of `H = (J+iD)σ₁⁺σ₂⁻ + (J−iD)σ₁⁻σ₂⁺ + Δ(σ₁⁺σ₂⁺ + σ₁⁻σ₂⁻)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Mean exchange coupling; sets the unit of time.
    pub j: f64,
    /// Anisotropy `(Jx − Jy) / 2`.
    pub delta: f64,
    /// Dzyaloshinskii–Moriya strength along z.
    pub d: f64,
}

impl ModelParams {
    /// Parameters with the conventional `J = 1`.
    pub fn new(delta: f64, d: f64) -> Result<Self> {
        Self::with_coupling(1.0, delta, d)
    }

    pub fn with_coupling(j: f64, delta: f64, d: f64) -> Result<Self> {
        if !(j > 0.0 && j.is_finite()) {
            return Err(Error::OutOfRange {
                name: "j",
                value: j,
                range: "(0, inf)",
            });
        }
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::OutOfRange {
                name: "delta",
                value: delta,
                range: "[0, inf)",
            });
        }
        if !(d >= 0.0 && d.is_finite()) {
            return Err(Error::OutOfRange {
                name: "d",
                value: d,
                range: "[0, inf)",
            });
        }
        Ok(Self { j, delta, d })
    }

    /// `ν = √(D² + J²)`.
    pub fn nu(&self) -> f64 {
        self.d.hypot(self.j)
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            j: 1.0,
            delta: 0.0,
            d: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnvKind {
    Closed,
    /// Zero-temperature amplitude damping.
    Dissipative,
    /// Infinite-temperature (symmetric) damping.
    Noisy,
    Dephasing,
}

impl EnvKind {
    pub const ALL: [EnvKind; 4] = [
        EnvKind::Closed,
        EnvKind::Dissipative,
        EnvKind::Noisy,
        EnvKind::Dephasing,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            EnvKind::Closed => "closed",
            EnvKind::Dissipative => "dissipative",
            EnvKind::Noisy => "noisy",
            EnvKind::Dephasing => "dephasing",
        }
    }
}

impl fmt::Display for EnvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnvKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "closed" => Ok(EnvKind::Closed),
            "dissipative" => Ok(EnvKind::Dissipative),
            "noisy" => Ok(EnvKind::Noisy),
            "dephasing" => Ok(EnvKind::Dephasing),
            other => Err(Error::Config(format!(
                "unknown env '{other}' (expected closed|dissipative|noisy|dephasing)"
            ))),
        }
    }
}

/// Environment kind plus system–bath coupling strength γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvSpec {
    pub kind: EnvKind,
    pub gamma: f64,
}

impl EnvSpec {
    pub fn new(kind: EnvKind, gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::OutOfRange {
                name: "gamma",
                value: gamma,
                range: "[0, inf)",
            });
        }
        Ok(Self { kind, gamma })
    }

    pub fn closed() -> Self {
        Self {
            kind: EnvKind::Closed,
            gamma: 0.0,
        }
    }

    /// γ actually applied; a closed system ignores the configured value.
    pub fn effective_gamma(&self) -> f64 {
        match self.kind {
            EnvKind::Closed => 0.0,
            _ => self.gamma,
        }
    }
}

/// Two-qubit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMat4,
}

/// Trace tolerance for a validated [`DensityMatrix`].
pub const TRACE_TOL: f64 = 1e-9;

impl DensityMatrix {
    pub fn new(mat: ComplexMat4) -> Result<Self> {
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let deviation = hermitian_deviation(&mat);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = mat.trace();
        if (trace - ONE).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
        }
        let min = *hermitian_eigenvalues(&mat)?.last().expect("4 eigenvalues");
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive { eigenvalue: min });
        }
        Ok(Self { mat })
    }

    /// Wraps a matrix the caller has already checked with its own tolerances.
    pub(crate) fn from_checked(mat: ComplexMat4) -> Self {
        Self { mat }
    }

    pub fn matrix(&self) -> &ComplexMat4 {
        &self.mat
    }

    /// Entry at zero-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    pub fn trace_error(&self) -> f64 {
        (self.mat.trace() - ONE).norm()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*hermitian_eigenvalues(&self.mat)?.last().expect("4 eigenvalues"))
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (self.mat * self.mat).trace().re
    }

    /// Largest magnitude outside the diagonal and the ρ14/ρ23 anti-diagonal.
    pub fn off_x_magnitude(&self) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..4 {
            for c in 0..4 {
                if r != c && r + c != 3 {
                    worst = worst.max(self.mat[(r, c)].norm());
                }
            }
        }
        worst
    }

    /// Max entry-wise distance to another state.
    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        max_abs(&(self.mat - other.mat))
    }
}

/// `ρ = (1−p)/4 · I + p|φ⟩⟨φ|` with `|φ⟩ = (|01⟩ + |10⟩)/√2`.
pub fn werner_state(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            range: "[0, 1]",
        });
    }
    let mixed = C64::new((1.0 - p) / 4.0, 0.0);
    let mut mat = ComplexMat4::identity() * mixed;
    let half = C64::new(p / 2.0, 0.0);
    mat[(1, 1)] += half;
    mat[(2, 2)] += half;
    mat[(1, 2)] += half;
    mat[(2, 1)] += half;
    Ok(DensityMatrix { mat })
}

/// Basis-state projector `|k⟩⟨k|`, zero-based `k`.
pub fn basis_projector(k: usize) -> DensityMatrix {
    let mut diag = Vector4::repeat(ZERO);
    diag[k] = ONE;
    DensityMatrix {
        mat: ComplexMat4::from_diagonal(&diag),
    }
}

/// Qubit lowering operator `|1⟩⟨0|`.
pub fn sigma_minus() -> ComplexMat2 {
    ComplexMat2::new(ZERO, ZERO, ONE, ZERO)
}

/// Qubit raising operator `|0⟩⟨1|`.
pub fn sigma_plus() -> ComplexMat2 {
    sigma_minus().adjoint()
}

/// Single-qubit operator embedded on qubit `which` (0 = A, 1 = B).
pub fn on_qubit(op: &ComplexMat2, which: usize) -> ComplexMat4 {
    match which {
        0 => kron(op, &identity2()),
        _ => kron(&identity2(), op),
    }
}

pub fn build_hamiltonian(params: &ModelParams) -> ComplexMat4 {
    let sp1 = on_qubit(&sigma_plus(), 0);
    let sm1 = on_qubit(&sigma_minus(), 0);
    let sp2 = on_qubit(&sigma_plus(), 1);
    let sm2 = on_qubit(&sigma_minus(), 1);
    let flip = C64::new(params.j, params.d);
    let pair = C64::new(params.delta, 0.0);
    sp1 * sm2 * flip + sm1 * sp2 * flip.conj() + (sp1 * sp2 + sm1 * sm2) * pair
}

/// One Lindblad channel `rate · (LρL† − ½{L†L, ρ})`.
#[derive(Debug, Clone)]
struct Channel {
    rate: f64,
    op: ComplexMat4,
    op_dag: ComplexMat4,
    number: ComplexMat4,
}

/// Generic Lindblad dissipator over a list of `(rate, operator)` pairs.
#[derive(Debug, Clone, Default)]
pub struct Dissipator {
    channels: Vec<Channel>,
}

impl Dissipator {
    pub fn new(channels: impl IntoIterator<Item = (f64, ComplexMat4)>) -> Self {
        let channels = channels
            .into_iter()
            .map(|(rate, op)| {
                let op_dag = op.adjoint();
                Channel {
                    rate,
                    op,
                    op_dag,
                    number: op_dag * op,
                }
            })
            .collect();
        Self { channels }
    }

    /// Channels for an environment. Every operator carries rate γ, which
    /// matches the `γ/2 · Σ (2bρb† − b†bρ − ρb†b)` normalization.
    pub fn for_env(env: &EnvSpec) -> Self {
        let gamma = env.effective_gamma();
        let lower = [on_qubit(&sigma_minus(), 0), on_qubit(&sigma_minus(), 1)];
        let ops: Vec<ComplexMat4> = match env.kind {
            EnvKind::Closed => Vec::new(),
            EnvKind::Dissipative => lower.to_vec(),
            EnvKind::Noisy => lower.iter().flat_map(|l| [*l, l.adjoint()]).collect(),
            EnvKind::Dephasing => lower.iter().map(|l| l.adjoint() * l).collect(),
        };
        Self::new(ops.into_iter().map(|op| (gamma, op)))
    }

    pub fn apply(&self, rho: &ComplexMat4) -> ComplexMat4 {
        let mut out = ComplexMat4::zeros();
        for ch in self.channels.iter().filter(|ch| ch.rate != 0.0) {
            let jump = ch.op * rho * ch.op_dag;
            let anti = ch.number * rho + rho * ch.number;
            out += (jump - anti * C64::new(0.5, 0.0)) * C64::new(ch.rate, 0.0);
        }
        out
    }
}

/// Full master-equation generator `ρ ↦ −i[H, ρ] + ℓ(ρ)`.
#[derive(Debug, Clone)]
pub struct Generator {
    hamiltonian: ComplexMat4,
    dissipator: Dissipator,
}

impl Generator {
    pub fn new(params: &ModelParams, env: &EnvSpec) -> Self {
        Self {
            hamiltonian: build_hamiltonian(params),
            dissipator: Dissipator::for_env(env),
        }
    }

    pub fn hamiltonian(&self) -> &ComplexMat4 {
        &self.hamiltonian
    }

    /// `dρ/dt` for an arbitrary (not necessarily physical) matrix.
    pub fn rhs(&self, rho: &ComplexMat4) -> ComplexMat4 {
        commutator(&self.hamiltonian, rho) * (-I) + self.dissipator.apply(rho)
    }
}

pub fn lindblad_rhs(rho: &DensityMatrix, params: &ModelParams, env: &EnvSpec) -> ComplexMat4 {
    Generator::new(params, env).rhs(rho.matrix())
}
