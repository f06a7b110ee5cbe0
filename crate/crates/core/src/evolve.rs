//! Time evolution: fixed-step RK4 on the master equation, closed-form
//! propagators for each environment, and the t → ∞ states.
//!
//! The numeric path is normative. The closed forms are evaluated in complex
//! arithmetic and are checked against it by [`compare_with_numeric`].

use nalgebra::{SymmetricEigen, Vector4};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermitize, ComplexMat4, C64, I, ONE, ZERO};
use crate::model::{werner_state, DensityMatrix, EnvKind, EnvSpec, Generator, ModelParams};

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_STRIDE: usize = 10;
pub const MAX_DT: f64 = 0.01;

/// Largest tolerated `|Tr ρ − 1|` along a numeric trajectory.
pub const TRACE_DRIFT_TOL: f64 = 1e-7;
/// Smallest tolerated eigenvalue along a numeric trajectory.
pub const MIN_EIGENVALUE_TOL: f64 = -1e-6;

/// Denominators below this make a closed form unusable.
const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: DensityMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub params: ModelParams,
    pub env: EnvSpec,
    /// Werner purity of the initial state, when the trajectory started from one.
    pub p0: Option<f64>,
}

impl Trajectory {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }

    pub fn last(&self) -> &Sample {
        self.samples
            .last()
            .expect("trajectory holds at least the initial sample")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericOptions {
    pub dt: f64,
    /// Store every `stride`-th step (plus the final one).
    pub stride: usize,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self {
            dt: DEFAULT_DT,
            stride: DEFAULT_STRIDE,
        }
    }
}

impl NumericOptions {
    pub fn new(dt: f64, stride: usize) -> Result<Self> {
        if !(dt > 0.0 && dt <= MAX_DT) {
            return Err(Error::OutOfRange {
                name: "dt",
                value: dt,
                range: "(0, 0.01]",
            });
        }
        if stride == 0 {
            return Err(Error::OutOfRange {
                name: "stride",
                value: 0.0,
                range: "[1, inf)",
            });
        }
        Ok(Self { dt, stride })
    }
}

fn rk4_step(gen: &Generator, rho: &ComplexMat4, h: f64) -> ComplexMat4 {
    let half = C64::new(0.5 * h, 0.0);
    let full = C64::new(h, 0.0);
    let k1 = gen.rhs(rho);
    let k2 = gen.rhs(&(rho + k1 * half));
    let k3 = gen.rhs(&(rho + k2 * half));
    let k4 = gen.rhs(&(rho + k3 * full));
    rho + (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(h / 6.0, 0.0)
}

/// Re-Hermitizes a raw integrator state and checks trace drift and positivity.
fn checked_sample(raw: &ComplexMat4, t: f64) -> Result<DensityMatrix> {
    let mat = hermitize(raw);
    let drift = (mat.trace() - ONE).norm();
    if !(drift <= TRACE_DRIFT_TOL) {
        return Err(Error::InvariantViolated {
            t,
            what: format!("trace drift {drift:.3e}"),
        });
    }
    let min = *hermitian_eigenvalues(&mat)?.last().expect("4 eigenvalues");
    if min < MIN_EIGENVALUE_TOL {
        return Err(Error::InvariantViolated {
            t,
            what: format!("eigenvalue {min:.3e}"),
        });
    }
    Ok(DensityMatrix::from_checked(mat))
}

fn step_plan(t_end: f64, dt: f64) -> Result<(usize, f64)> {
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t_end,
            range: "[0, inf)",
        });
    }
    if !(dt > 0.0 && dt <= MAX_DT) {
        return Err(Error::OutOfRange {
            name: "dt",
            value: dt,
            range: "(0, 0.01]",
        });
    }
    // shrink the step so the last one lands on t_end exactly
    let steps = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
    let h = if steps == 0 { 0.0 } else { t_end / steps as f64 };
    Ok((steps, h))
}

/// RK4 trajectory from `rho0` to `t_end`, sampled every [`DEFAULT_STRIDE`] steps.
pub fn evolve_numeric(
    rho0: &DensityMatrix,
    params: &ModelParams,
    env: &EnvSpec,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    evolve_numeric_with(rho0, params, env, t_end, NumericOptions::new(dt, DEFAULT_STRIDE)?)
}

pub fn evolve_numeric_with(
    rho0: &DensityMatrix,
    params: &ModelParams,
    env: &EnvSpec,
    t_end: f64,
    opts: NumericOptions,
) -> Result<Trajectory> {
    if !(t_end > 0.0) {
        return Err(Error::OutOfRange {
            name: "t_end",
            value: t_end,
            range: "(0, inf)",
        });
    }
    let opts = NumericOptions::new(opts.dt, opts.stride)?;
    let (steps, h) = step_plan(t_end, opts.dt)?;
    let gen = Generator::new(params, env);

    let mut samples = Vec::with_capacity(steps / opts.stride + 2);
    samples.push(Sample { t: 0.0, state: *rho0 });
    let mut rho = *rho0.matrix();
    for k in 1..=steps {
        rho = rk4_step(&gen, &rho, h);
        if k % opts.stride == 0 || k == steps {
            let t = if k == steps { t_end } else { k as f64 * h };
            samples.push(Sample {
                t,
                state: checked_sample(&rho, t)?,
            });
        }
    }
    Ok(Trajectory {
        samples,
        params: *params,
        env: *env,
        p0: None,
    })
}

/// RK4 state at time `t` only.
pub fn evolve_numeric_to(
    rho0: &DensityMatrix,
    params: &ModelParams,
    env: &EnvSpec,
    t: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    let (steps, h) = step_plan(t, dt)?;
    let gen = Generator::new(params, env);
    let mut rho = *rho0.matrix();
    for _ in 0..steps {
        rho = rk4_step(&gen, &rho, h);
    }
    checked_sample(&rho, t)
}

/// Sample times [`evolve_numeric_with`] would store for the same inputs.
pub fn sample_times(t_end: f64, opts: NumericOptions) -> Result<Vec<f64>> {
    if !(t_end > 0.0) {
        return Err(Error::OutOfRange {
            name: "t_end",
            value: t_end,
            range: "(0, inf)",
        });
    }
    let opts = NumericOptions::new(opts.dt, opts.stride)?;
    let (steps, h) = step_plan(t_end, opts.dt)?;
    let mut times = vec![0.0];
    for k in 1..=steps {
        if k % opts.stride == 0 || k == steps {
            times.push(if k == steps { t_end } else { k as f64 * h });
        }
    }
    Ok(times)
}

/// Constants shared by the closed-form propagators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticAux {
    /// `√(D² + J²)`
    pub nu: f64,
    /// `γ − 2iΔ`
    pub omega: C64,
    /// `√(γ² − 16(D² + J²))`, principal branch.
    pub kcoef: C64,
}

impl AnalyticAux {
    pub fn new(params: &ModelParams, env: &EnvSpec) -> Self {
        let gamma = env.effective_gamma();
        let nu = params.nu();
        Self {
            nu,
            omega: C64::new(gamma, -2.0 * params.delta),
            kcoef: C64::new(gamma * gamma - 16.0 * nu * nu, 0.0).sqrt(),
        }
    }
}

fn require_nonsingular(quantity: &'static str, value: f64) -> Result<()> {
    if value < SINGULAR_TOL {
        Err(Error::SingularParameterization { quantity, value })
    } else {
        Ok(())
    }
}

fn cexp(z: C64) -> C64 {
    z.exp()
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// X-pattern matrix from its five independent entries (ρ14 and ρ23 upper).
fn x_matrix(diag: [C64; 4], rho14: C64, rho23: C64) -> ComplexMat4 {
    let mut m = ComplexMat4::from_diagonal(&Vector4::from(diag));
    m[(0, 3)] = rho14;
    m[(3, 0)] = rho14.conj();
    m[(1, 2)] = rho23;
    m[(2, 1)] = rho23.conj();
    m
}

fn dissipative_closed_form(p: f64, params: &ModelParams, gamma: f64, t: f64) -> Result<ComplexMat4> {
    let aux = AnalyticAux::new(
        params,
        &EnvSpec {
            kind: EnvKind::Dissipative,
            gamma,
        },
    );
    let (nu, omega) = (aux.nu, aux.omega);
    let w2 = omega.norm_sqr();
    require_nonsingular("|omega|^2", w2)?;
    require_nonsingular("nu", nu)?;
    let (j, d, delta) = (params.j, params.d, params.delta);

    // e^{-2γt}, e^{-2γt} e^{ωt}, e^{-2γt} e^{ω* t}
    let a = (-2.0 * gamma * t).exp();
    let b = cexp((omega - 2.0 * gamma) * t);
    let bc = b.conj();
    let rot = cexp(I * (4.0 * delta * t)) - ONE;

    let rho11 = (re(a * (1.0 - p) * gamma * gamma)
        + I * 2.0 * b * rot * gamma * delta
        + re(4.0 * delta * delta * (1.0 - a * p)))
        / (4.0 * w2);

    let decay_c = cexp(-omega.conj() * t);
    let rho14 = re(gamma) * (decay_c * rot * gamma + I * 2.0 * delta * (decay_c * (rot + 2.0) - 2.0)) / (4.0 * w2);

    let dm = re(d) * cexp(C64::new(-gamma * t, -2.0 * nu * t)) * (cexp(I * (4.0 * nu * t)) - ONE) * (I * nu * p * w2);
    let common = re(nu * nu) * ((re(a * (p - 1.0)) + b + bc) * gamma * gamma + re(4.0 * delta * delta * (1.0 + a * p)));
    let denom = 4.0 * nu * nu * w2;
    let rho22 = (common - dm) / denom;
    let rho33 = (common + dm) / denom;

    let rho23 = re((-gamma * t).exp() * p) * C64::new(d * (2.0 * nu * t).cos(), j) / C64::new(2.0 * d, 2.0 * j);

    let rho44 = ((re(a * (1.0 - p)) + 4.0 - 2.0 * b - 2.0 * bc) * gamma * gamma - I * 2.0 * b * rot * gamma * delta
        + re(4.0 * delta * delta * (1.0 - a * p)))
        / (4.0 * w2);

    Ok(x_matrix([rho11, rho22, rho33, rho44], rho14, rho23))
}

fn noisy_closed_form(p: f64, params: &ModelParams, gamma: f64, t: f64) -> Result<ComplexMat4> {
    let nu = params.nu();
    require_nonsingular("nu", nu)?;
    let (j, d) = (params.j, params.d);
    let fast = (-4.0 * gamma * t).exp();
    let corner = re((1.0 - p * fast) / 4.0);
    let beat = re(d) / (I * nu)
        * (cexp(C64::new(-2.0 * gamma * t, 2.0 * nu * t)) - cexp(C64::new(-2.0 * gamma * t, -2.0 * nu * t)));
    let rho22 = (ONE + re(p) * (re(fast) + beat)) / 4.0;
    let rho33 = (ONE + re(p) * (re(fast) - beat)) / 4.0;
    let rho23 = re(p * (-2.0 * gamma * t).exp()) / C64::new(2.0 * d, 2.0 * j) * C64::new(d * (2.0 * nu * t).cos(), j);
    Ok(x_matrix([corner, rho22, rho33, corner], ZERO, rho23))
}

fn dephasing_closed_form(p: f64, params: &ModelParams, gamma: f64, t: f64) -> Result<ComplexMat4> {
    let aux = AnalyticAux::new(
        params,
        &EnvSpec {
            kind: EnvKind::Dephasing,
            gamma,
        },
    );
    let k = aux.kcoef;
    require_nonsingular("|K|", k.norm())?;
    require_nonsingular("nu", aux.nu)?;
    let (j, d) = (params.j, params.d);

    let corner = re((1.0 - p) / 4.0);
    // e^{-t(γ+K)/2}(e^{Kt} − 1), without forming e^{Kt} on its own
    let slow = cexp((k - gamma) * (t / 2.0));
    let fast = cexp(-(k + gamma) * (t / 2.0));
    let split = re(4.0 * d) * (slow - fast) / k;
    let rho22 = (ONE + re(p) * (ONE + split)) / 4.0;
    let rho33 = (ONE + re(p) * (ONE - split)) / 4.0;

    // e^{-γt/2} (cosh(Kt/2) − γ sinh(Kt/2)/K)
    let envelope = (slow + fast) / 2.0 - re(gamma) * (slow - fast) / (2.0 * k);
    let rho23 = re(p) / C64::new(2.0 * d, 2.0 * j) * (C64::new(0.0, j * (-gamma * t).exp()) + re(d) * envelope);
    Ok(x_matrix([corner, rho22, rho33, corner], ZERO, rho23))
}

/// Exact unitary evolution through the spectral decomposition of H.
fn unitary_evolution(rho0: &DensityMatrix, params: &ModelParams, t: f64) -> ComplexMat4 {
    let eig = SymmetricEigen::new(crate::model::build_hamiltonian(params));
    let phases = Vector4::from_fn(|k, _| cexp(C64::new(0.0, -eig.eigenvalues[k] * t)));
    let u = eig.eigenvectors * ComplexMat4::from_diagonal(&phases) * eig.eigenvectors.adjoint();
    u * rho0.matrix() * u.adjoint()
}

fn finish_analytic(raw: ComplexMat4) -> Result<DensityMatrix> {
    let mut mat = hermitize(&raw);
    for k in 0..4 {
        if mat[(k, k)].im.abs() < 1e-9 {
            mat[(k, k)].im = 0.0;
        }
    }
    DensityMatrix::new(mat)
}

/// State at time `t` from the closed-form propagators, starting from a
/// Werner state of purity `p`.
pub fn evolve_analytic(p: f64, params: &ModelParams, env: &EnvSpec, t: f64) -> Result<DensityMatrix> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            range: "[0, inf)",
        });
    }
    let rho0 = werner_state(p)?;
    if t == 0.0 {
        return Ok(rho0);
    }
    let gamma = env.effective_gamma();
    let raw = match env.kind {
        EnvKind::Closed => unitary_evolution(&rho0, params, t),
        EnvKind::Dissipative => dissipative_closed_form(p, params, gamma, t)?,
        EnvKind::Noisy => noisy_closed_form(p, params, gamma, t)?,
        EnvKind::Dephasing => dephasing_closed_form(p, params, gamma, t)?,
    };
    finish_analytic(raw)
}

/// Limit `t → ∞` of the closed-form states.
pub fn asymptotic_state(p: f64, params: &ModelParams, env: &EnvSpec) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            range: "[0, 1]",
        });
    }
    let gamma = env.gamma;
    if env.kind == EnvKind::Closed {
        return Err(Error::Unsupported("closed systems have no asymptotic state"));
    }
    if !(gamma > 0.0) {
        return Err(Error::OutOfRange {
            name: "gamma",
            value: gamma,
            range: "(0, inf)",
        });
    }
    let raw = match env.kind {
        EnvKind::Dissipative => {
            let delta = params.delta;
            let denom = 4.0 * delta * delta + gamma * gamma;
            let low = re(delta * delta / denom);
            let rho44 = re((delta * delta + gamma * gamma) / denom);
            let rho14 = C64::new(0.0, -gamma * delta / denom);
            x_matrix([low, low, low, rho44], rho14, ZERO)
        }
        EnvKind::Noisy => ComplexMat4::identity() * re(0.25),
        EnvKind::Dephasing => {
            let corner = re((1.0 - p) / 4.0);
            let middle = re((1.0 + p) / 4.0);
            // ρ23 decays at rates γ and (γ ∓ Re K)/2, all positive
            x_matrix([corner, middle, middle, corner], ZERO, ZERO)
        }
        EnvKind::Closed => unreachable!(),
    };
    DensityMatrix::new(raw)
}

/// Concurrence of the asymptotic dissipative state,
/// `2 max(0, (γΔ − Δ²) / (4Δ² + γ²))`.
pub fn asymptotic_concurrence_dissipative(delta: f64, gamma: f64) -> f64 {
    let denom = 4.0 * delta * delta + gamma * gamma;
    if denom <= 0.0 {
        return 0.0;
    }
    2.0 * ((gamma * delta - delta * delta) / denom).max(0.0)
}

/// Name of the closed-form element that produced entry `(row, col)`.
pub fn formula_element(kind: EnvKind, row: usize, col: usize) -> String {
    let (r, c) = if row <= col { (row, col) } else { (col, row) };
    format!("{}.rho{}{}", kind.as_str(), r + 1, c + 1)
}

/// Worst disagreement between closed form and RK4 over one trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleDeviation {
    pub p: f64,
    pub params: ModelParams,
    pub env: EnvSpec,
    pub max_deviation: f64,
    pub worst_t: f64,
    /// Closed-form element id, e.g. `dissipative.rho22`.
    pub worst_element: String,
}

impl OracleDeviation {
    pub fn exceeds(&self, tol: f64) -> bool {
        !(self.max_deviation <= tol)
    }
}

/// Max entry distance between [`evolve_analytic`] and [`evolve_numeric_with`]
/// over every stored sample in `[0, t_end]`.
pub fn compare_with_numeric(
    p: f64,
    params: &ModelParams,
    env: &EnvSpec,
    t_end: f64,
    opts: NumericOptions,
) -> Result<OracleDeviation> {
    let traj = evolve_numeric_with(&werner_state(p)?, params, env, t_end, opts)?;
    let mut worst = OracleDeviation {
        p,
        params: *params,
        env: *env,
        max_deviation: 0.0,
        worst_t: 0.0,
        worst_element: formula_element(env.kind, 0, 0),
    };
    for sample in &traj.samples {
        let exact = evolve_analytic(p, params, env, sample.t)?;
        let diff = exact.matrix() - sample.state.matrix();
        for r in 0..4 {
            for c in 0..4 {
                let dev = diff[(r, c)].norm();
                if dev > worst.max_deviation {
                    worst.max_deviation = dev;
                    worst.worst_t = sample.t;
                    worst.worst_element = formula_element(env.kind, r, c);
                }
            }
        }
    }
    Ok(worst)
}
