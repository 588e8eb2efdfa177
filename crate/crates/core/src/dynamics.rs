//! Time integration of master-equation generators and steady-state
//! extraction.
//!
//! Density matrices are integrated directly (never vectorized) with either
//! an embedded Dormand–Prince 5(4) pair or a fixed-step classical
//! fourth-order scheme. Every accepted step is symmetrized, the trace is
//! monitored against drift, and positivity is spot-checked at a configurable
//! cadence, so an integration that finishes has stayed physical throughout.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};

use crate::analytic::AbsdState;
use crate::hilbert::{
    c64, excitation_index, fidelity, frobenius_norm, make_eta, min_eigenvalue, trace_of,
    DensityMatrix, StateVector,
};
use crate::liouvillian::Generator;
use crate::{C64, Error, Result};

/// Integration scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Classical 4th-order Runge–Kutta with step size `max_step`.
    Fixed,
    /// Dormand–Prince 5(4) embedded pair with proportional step control.
    Adaptive,
}

/// Integrator tuning knobs.
#[derive(Clone, Copy, Debug)]
pub struct IntegratorConfig {
    pub method: Method,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the step size; for [`Method::Fixed`] this *is* the
    /// step size and must be finite.
    pub max_step: f64,
    /// Positivity (minimum eigenvalue) is checked every this many accepted
    /// steps, and always on the final state.
    pub positivity_check_interval: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::Adaptive,
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            max_step: f64::INFINITY,
            positivity_check_interval: 10,
        }
    }
}

impl IntegratorConfig {
    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::Domain(
                "integrator tolerances must be positive".into(),
            ));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::Domain("max_step must be positive".into()));
        }
        if self.method == Method::Fixed && !self.max_step.is_finite() {
            return Err(Error::Domain(
                "fixed-step integration needs a finite max_step".into(),
            ));
        }
        if self.positivity_check_interval == 0 {
            return Err(Error::Domain(
                "positivity_check_interval must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Time-stamped sequence of states produced by the integrator.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory is never empty")
    }
}

// Dormand–Prince 5(4) tableau.
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
// b − b̂: weights of the embedded error estimate.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn tiny_for(t_ref: f64) -> f64 {
    1e-14 * t_ref.abs().max(1.0)
}

/// In-place stepping engine; owns all stage buffers so repeated advancing
/// allocates nothing.
struct Stepper<'a> {
    gen: &'a Generator,
    cfg: IntegratorConfig,
    k: Vec<Array2<C64>>,
    stage: Array2<C64>,
    candidate: Array2<C64>,
    scratch: Array2<C64>,
    h: f64,
    accepted: usize,
}

impl<'a> Stepper<'a> {
    fn new(gen: &'a Generator, cfg: IntegratorConfig) -> Self {
        let d = gen.space().dim();
        Stepper {
            gen,
            cfg,
            k: (0..7).map(|_| Array2::zeros((d, d))).collect(),
            stage: Array2::zeros((d, d)),
            candidate: Array2::zeros((d, d)),
            scratch: Array2::zeros((d, d)),
            h: f64::NAN,
            accepted: 0,
        }
    }

    /// Conservative first step size from the derivative magnitude.
    fn init_step(&mut self, rho: &Array2<C64>, span: f64) {
        let (k1, _) = self.k.split_at_mut(1);
        self.gen.apply_into(rho, &mut k1[0], &mut self.scratch);
        let f_norm = frobenius_norm(&self.k[0]);
        let y_norm = frobenius_norm(rho).max(1.0);
        let by_derivative = if f_norm > 0.0 {
            0.01 * y_norm / f_norm
        } else {
            span
        };
        self.h = by_derivative.min(span).min(self.cfg.max_step);
    }

    fn symmetrize(rho: &mut Array2<C64>) {
        let d = rho.nrows();
        for i in 0..d {
            let z = rho[(i, i)];
            rho[(i, i)] = c64(z.re, 0.0);
            for j in (i + 1)..d {
                let avg = 0.5 * (rho[(i, j)] + rho[(j, i)].conj());
                rho[(i, j)] = avg;
                rho[(j, i)] = avg.conj();
            }
        }
    }

    /// Trace monitor plus cadenced positivity spot check.
    fn integrity_checks(&self, rho: &Array2<C64>) -> Result<()> {
        let tr = trace_of(rho);
        if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
            return Err(Error::Integrity(format!(
                "trace drifted to {tr} during integration"
            )));
        }
        if self.accepted % self.cfg.positivity_check_interval == 0 {
            check_positivity(rho)?;
        }
        Ok(())
    }

    /// Exactly one accepted step (Fixed: always accepts; Adaptive: retries
    /// rejected proposals internally). Never overshoots `t_to`.
    fn step_once(&mut self, rho: &mut Array2<C64>, t: &mut f64, t_to: f64) -> Result<()> {
        match self.cfg.method {
            Method::Fixed => self.step_once_fixed(rho, t, t_to),
            Method::Adaptive => self.step_once_adaptive(rho, t, t_to),
        }
    }

    fn step_once_fixed(&mut self, rho: &mut Array2<C64>, t: &mut f64, t_to: f64) -> Result<()> {
        let h = self.cfg.max_step.min(t_to - *t);
        // Classical RK4 stages.
        {
            let (k1, _) = self.k.split_at_mut(1);
            self.gen.apply_into(rho, &mut k1[0], &mut self.scratch);
        }
        self.stage.assign(rho);
        self.stage.scaled_add(c64(0.5 * h, 0.0), &self.k[0]);
        {
            let (_, rest) = self.k.split_at_mut(1);
            self.gen
                .apply_into(&self.stage, &mut rest[0], &mut self.scratch);
        }
        self.stage.assign(rho);
        self.stage.scaled_add(c64(0.5 * h, 0.0), &self.k[1]);
        {
            let (_, rest) = self.k.split_at_mut(2);
            self.gen
                .apply_into(&self.stage, &mut rest[0], &mut self.scratch);
        }
        self.stage.assign(rho);
        self.stage.scaled_add(c64(h, 0.0), &self.k[2]);
        {
            let (_, rest) = self.k.split_at_mut(3);
            self.gen
                .apply_into(&self.stage, &mut rest[0], &mut self.scratch);
        }
        rho.scaled_add(c64(h / 6.0, 0.0), &self.k[0]);
        rho.scaled_add(c64(h / 3.0, 0.0), &self.k[1]);
        rho.scaled_add(c64(h / 3.0, 0.0), &self.k[2]);
        rho.scaled_add(c64(h / 6.0, 0.0), &self.k[3]);

        Self::symmetrize(rho);
        *t += h;
        self.accepted += 1;
        self.integrity_checks(rho)
    }

    fn step_once_adaptive(&mut self, rho: &mut Array2<C64>, t: &mut f64, t_to: f64) -> Result<()> {
        if !self.h.is_finite() {
            self.init_step(rho, (t_to - *t).max(1e-30));
        }
        loop {
            let h = self.h.min(t_to - *t).min(self.cfg.max_step);
            if h < tiny_for(t_to) {
                return Err(Error::Stiffness(format!(
                    "step size underflow at t = {t}: h = {h:.3e}"
                )));
            }

            // Stage derivatives k1..k6 plus the closing k7.
            {
                let (k1, _) = self.k.split_at_mut(1);
                self.gen.apply_into(rho, &mut k1[0], &mut self.scratch);
            }
            let coeffs: [&[f64]; 5] = [&A2, &A3, &A4, &A5, &A6];
            for (s, row) in coeffs.iter().enumerate() {
                self.stage.assign(rho);
                for (j, &a) in row.iter().enumerate() {
                    if a != 0.0 {
                        self.stage.scaled_add(c64(h * a, 0.0), &self.k[j]);
                    }
                }
                let (_, rest) = self.k.split_at_mut(s + 1);
                self.gen
                    .apply_into(&self.stage, &mut rest[0], &mut self.scratch);
            }
            self.candidate.assign(rho);
            for (j, &b) in B.iter().enumerate() {
                if b != 0.0 {
                    self.candidate.scaled_add(c64(h * b, 0.0), &self.k[j]);
                }
            }
            {
                let (_, rest) = self.k.split_at_mut(6);
                self.gen
                    .apply_into(&self.candidate, &mut rest[0], &mut self.scratch);
            }

            // Weighted RMS norm of the embedded error estimate.
            let d = rho.nrows();
            let mut err_sq = 0.0;
            for i in 0..d {
                for j in 0..d {
                    let mut e = c64(0.0, 0.0);
                    for (s, &w) in E.iter().enumerate() {
                        if w != 0.0 {
                            e += self.k[s][(i, j)] * c64(h * w, 0.0);
                        }
                    }
                    let scale = self.cfg.abs_tol
                        + self.cfg.rel_tol
                            * rho[(i, j)].norm().max(self.candidate[(i, j)].norm());
                    let r = e.norm() / scale;
                    err_sq += r * r;
                }
            }
            let err = (err_sq / (d * d) as f64).sqrt();
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            self.h = (h * factor).min(self.cfg.max_step);

            if err <= 1.0 {
                std::mem::swap(rho, &mut self.candidate);
                Self::symmetrize(rho);
                *t += h;
                self.accepted += 1;
                return self.integrity_checks(rho);
            }
        }
    }

    /// Advance `rho` from `*t` to exactly `t_to`.
    fn advance(&mut self, rho: &mut Array2<C64>, t: &mut f64, t_to: f64) -> Result<()> {
        while t_to - *t > tiny_for(t_to) {
            self.step_once(rho, t, t_to)?;
        }
        Ok(())
    }
}

fn check_positivity(rho: &Array2<C64>) -> Result<()> {
    let min_eig = min_eigenvalue(rho)?;
    if min_eig < -1e-6 {
        return Err(Error::Integrity(format!(
            "state developed negative eigenvalue {min_eig:.3e}"
        )));
    }
    Ok(())
}

fn check_same_space(gen: &Generator, rho0: &DensityMatrix) -> Result<()> {
    if gen.space() != &rho0.space {
        return Err(Error::Dimension(
            "initial state lives on a different space than the generator".into(),
        ));
    }
    Ok(())
}

/// Integrate ρ̇ = gen(ρ) from `rho0` to `t_final`, recording the state at
/// every accepted step (plus both endpoints).
pub fn evolve(
    gen: &Generator,
    rho0: &DensityMatrix,
    t_final: f64,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    config.validate()?;
    check_same_space(gen, rho0)?;
    if !(t_final > 0.0) {
        return Err(Error::Domain(format!(
            "final time must be positive, got {t_final}"
        )));
    }
    let mut stepper = Stepper::new(gen, *config);
    let mut rho = rho0.entries.clone();
    let mut t = 0.0;
    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];
    while t_final - t > tiny_for(t_final) {
        stepper.step_once(&mut rho, &mut t, t_final)?;
        times.push(t);
        states.push(DensityMatrix::new_unchecked(
            rho0.space.clone(),
            rho.clone(),
        ));
    }
    check_positivity(&rho)?;
    Ok(Trajectory { times, states })
}

/// Integrate and sample the solution exactly at the given times. The grid
/// must be non-empty, start at ≥ 0, and increase strictly.
pub fn evolve_grid(
    gen: &Generator,
    rho0: &DensityMatrix,
    times: &[f64],
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    config.validate()?;
    check_same_space(gen, rho0)?;
    if times.is_empty() {
        return Err(Error::Domain("time grid must be non-empty".into()));
    }
    if times[0] < 0.0 {
        return Err(Error::Domain("time grid must start at t ≥ 0".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("time grid must increase strictly".into()));
    }
    let mut stepper = Stepper::new(gen, *config);
    let mut rho = rho0.entries.clone();
    let mut t = 0.0;
    let mut out_times = Vec::with_capacity(times.len());
    let mut out_states = Vec::with_capacity(times.len());
    for &target in times {
        if target > t {
            stepper.advance(&mut rho, &mut t, target)?;
        }
        out_times.push(target);
        out_states.push(DensityMatrix::new_unchecked(
            rho0.space.clone(),
            rho.clone(),
        ));
    }
    check_positivity(&rho)?;
    Ok(Trajectory {
        times: out_times,
        states: out_states,
    })
}

/// How the materialized-null-space cross-check of [`steady_state`] is
/// applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossCheck {
    /// Run it when the dimension allows (≤ 32), skip silently otherwise.
    Auto,
    /// Never run it.
    Off,
    /// Require it; error if the dimension is too large.
    Force,
}

/// Convergence policy for [`steady_state`].
#[derive(Clone, Copy, Debug)]
pub struct SteadyStateCriteria {
    /// Residual threshold on ‖gen(ρ)‖_F; `None` means 1e-10 × dimension.
    pub residual_tol: Option<f64>,
    /// Give up (convergence error) beyond this propagation time.
    pub max_time: f64,
    /// First propagation chunk; chunks double until convergence.
    pub initial_chunk: f64,
    pub cross_check: CrossCheck,
}

impl Default for SteadyStateCriteria {
    fn default() -> Self {
        SteadyStateCriteria {
            residual_tol: None,
            max_time: 1e4,
            initial_chunk: 1.0,
            cross_check: CrossCheck::Auto,
        }
    }
}

/// Long-time limit of the evolution from `rho0`: propagate in doubling
/// chunks until ‖gen(ρ)‖_F falls below the threshold. Steady states of
/// collective decay depend on the symmetry sector of the initial state, so
/// the returned matrix is the limit from this particular `rho0`. When the
/// dimension allows, membership of the result in the null space of the
/// materialized superoperator is verified independently.
pub fn steady_state(
    gen: &Generator,
    rho0: &DensityMatrix,
    criteria: &SteadyStateCriteria,
) -> Result<DensityMatrix> {
    check_same_space(gen, rho0)?;
    let dim = gen.space().dim();
    let tol = criteria.residual_tol.unwrap_or(1e-10 * dim as f64);
    if !(tol > 0.0) || !(criteria.max_time > 0.0) || !(criteria.initial_chunk > 0.0) {
        return Err(Error::Domain(
            "steady-state criteria must be positive".into(),
        ));
    }
    let mut stepper = Stepper::new(gen, IntegratorConfig::default());
    let mut rho = rho0.entries.clone();
    let mut t = 0.0;
    let mut chunk = criteria.initial_chunk;
    let mut prev_residual = f64::INFINITY;
    let mut stalls = 0usize;
    loop {
        let residual = frobenius_norm(&gen.apply(&rho)?);
        if residual <= tol {
            break;
        }
        if t >= criteria.max_time {
            return Err(Error::Convergence(format!(
                "steady state not reached by t = {t:.3e}: residual {residual:.3e} > {tol:.3e}"
            )));
        }
        if residual > 0.999 * prev_residual && residual > 100.0 * tol {
            stalls += 1;
            if stalls >= 5 {
                return Err(Error::Convergence(format!(
                    "residual stalled at {residual:.3e} (threshold {tol:.3e})"
                )));
            }
        } else {
            stalls = 0;
        }
        prev_residual = residual;
        let target = (t + chunk).min(criteria.max_time);
        stepper.advance(&mut rho, &mut t, target)?;
        chunk *= 2.0;
    }

    let run_check = match criteria.cross_check {
        CrossCheck::Off => false,
        CrossCheck::Auto => dim <= 32,
        CrossCheck::Force => {
            if dim > 32 {
                return Err(Error::Size(format!(
                    "null-space cross-check requires dimension ≤ 32, got {dim}"
                )));
            }
            true
        }
    };
    if run_check {
        null_space_membership(gen, &rho)?;
    }

    check_positivity(&rho)?;
    Ok(DensityMatrix::new_unchecked(rho0.space.clone(), rho))
}

/// Verify that vec(ρ) lies in the null space of the superoperator by
/// projecting onto the near-null eigenvectors of L†L.
fn null_space_membership(gen: &Generator, rho: &Array2<C64>) -> Result<()> {
    let sup = gen.materialize_superoperator()?;
    let d2 = sup.nrows();
    // G = L†L is Hermitian positive semidefinite; its null eigenvectors
    // span the steady subspace.
    let mut gram: Array2<C64> = Array2::zeros((d2, d2));
    for i in 0..d2 {
        for j in 0..d2 {
            let mut acc = c64(0.0, 0.0);
            for k in 0..d2 {
                acc += sup[(k, i)].conj() * sup[(k, j)];
            }
            gram[(i, j)] = acc;
        }
    }
    let (vals, vecs) = crate::linalg::eigh_pairs(&gram)?;
    let scale = vals.last().copied().unwrap_or(0.0).max(1e-300);
    let flat: Array1<C64> = Array1::from_iter(rho.iter().cloned());
    let norm = flat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut residual = flat.clone();
    for (lambda, v) in vals.iter().zip(vecs.iter()) {
        if *lambda <= 1e-12 * scale {
            let overlap: C64 = v.iter().zip(flat.iter()).map(|(a, b)| a.conj() * b).sum();
            residual
                .iter_mut()
                .zip(v.iter())
                .for_each(|(r, vi)| *r -= overlap * vi);
        }
    }
    let res_norm = residual.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if res_norm > 1e-6 * norm.max(1e-300) {
        return Err(Error::Convergence(format!(
            "propagated steady state is outside the superoperator null space \
             (projection residual {res_norm:.3e})"
        )));
    }
    Ok(())
}

/// Expectation series Tr(ρ(t)·O) for each named operator.
pub fn observables(
    traj: &Trajectory,
    ops: &[(&str, &Array2<C64>)],
) -> Result<Vec<(String, Vec<C64>)>> {
    let mut out = Vec::with_capacity(ops.len());
    for (name, op) in ops {
        let mut series = Vec::with_capacity(traj.len());
        for state in &traj.states {
            series.push(state.expectation(op)?);
        }
        out.push((name.to_string(), series));
    }
    Ok(out)
}

/// Tr ρ(t)² along a trajectory.
pub fn purity_series(traj: &Trajectory) -> Vec<f64> {
    traj.states.iter().map(|s| s.purity()).collect()
}

/// ⟨ψ|ρ(t)|ψ⟩ along a trajectory.
pub fn fidelity_series(traj: &Trajectory, target: &StateVector) -> Result<Vec<f64>> {
    traj.states.iter().map(|s| fidelity(target, s)).collect()
}

/// Coefficients (A, B, S, D) of the five-operator decay family for a
/// single state, obtained by solving the overlap system of the
/// non-orthogonal family {|1;n⟩⟨η| + h.c., i(|1;n⟩⟨η| − h.c.),
/// |1;n⟩⟨1;n|, |0⟩⟨0|, |η⟩⟨η|}. The family degenerates when |η⟩ and
/// |1;n⟩ are collinear (uniform amplitudes), which is reported as an
/// extraction error.
pub fn absd_extract(state: &DensityMatrix, q: &[C64], kappa: f64) -> Result<AbsdState> {
    let eta = make_eta(q)?;
    if eta.space != state.space {
        return Err(Error::Dimension(
            "state space does not match the amplitude register".into(),
        ));
    }
    let n = q.len();
    let dim = state.dim();
    let mut sym: Array1<C64> = Array1::zeros(dim);
    for k in 0..n {
        sym[excitation_index(n, k)] = c64(1.0, 0.0);
    }
    let mut ground: Array1<C64> = Array1::zeros(dim);
    ground[0] = c64(1.0, 0.0);
    let vecs = [&sym, &eta.amplitudes, &ground];

    // Pairwise overlaps s[a][b] = ⟨a|b⟩ and quadratic forms
    // r[a][b] = ⟨a|ρ|b⟩ are all that is needed for the projections.
    let mut s = [[c64(0.0, 0.0); 3]; 3];
    let mut r = [[c64(0.0, 0.0); 3]; 3];
    for a in 0..3 {
        for bb in 0..3 {
            s[a][bb] = vecs[a]
                .iter()
                .zip(vecs[bb].iter())
                .map(|(x, y)| x.conj() * y)
                .sum();
            let mut acc = c64(0.0, 0.0);
            for i in 0..dim {
                if vecs[a][i] == c64(0.0, 0.0) {
                    continue;
                }
                for j in 0..dim {
                    acc += vecs[a][i].conj() * state.entries[(i, j)] * vecs[bb][j];
                }
            }
            r[a][bb] = acc;
        }
    }

    // Each family member as a sum of weighted dyads |u⟩⟨v| over the three
    // vectors (0 = |1;n⟩, 1 = |η⟩, 2 = |0⟩).
    let i1 = c64(0.0, 1.0);
    let members: [Vec<(C64, usize, usize)>; 5] = [
        vec![(c64(1.0, 0.0), 0, 1), (c64(1.0, 0.0), 1, 0)],
        vec![(i1, 0, 1), (-i1, 1, 0)],
        vec![(c64(1.0, 0.0), 0, 0)],
        vec![(c64(1.0, 0.0), 2, 2)],
        vec![(c64(1.0, 0.0), 1, 1)],
    ];
    let mut overlap: Array2<f64> = Array2::zeros((5, 5));
    let mut rhs: Array1<f64> = Array1::zeros(5);
    for (k, gk) in members.iter().enumerate() {
        for (l, gl) in members.iter().enumerate() {
            let mut acc = c64(0.0, 0.0);
            for &(c1, u1, v1) in gk {
                for &(c2, u2, v2) in gl {
                    // Tr((|u1⟩⟨v1|)†·|u2⟩⟨v2|) = ⟨u1|u2⟩⟨v2|v1⟩.
                    acc += c1.conj() * c2 * s[u1][u2] * s[v2][v1];
                }
            }
            overlap[(k, l)] = acc.re;
        }
        let mut acc = c64(0.0, 0.0);
        for &(c1, u1, v1) in gk {
            // Tr((|u⟩⟨v|)†·ρ) = ⟨u|ρ|v⟩.
            acc += c1.conj() * r[u1][v1];
        }
        rhs[k] = acc.re;
    }

    let (vals, basis) = overlap.eigh(UPLO::Lower).map_err(Error::from)?;
    let max_val = vals.iter().cloned().fold(0.0f64, f64::max);
    let min_val = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_val <= 1e-10 * max_val.max(1e-300) {
        return Err(Error::Extraction(format!(
            "overlap system is singular (eigenvalue ratio {:.3e}); the \
             operator family degenerates for uniform amplitudes",
            min_val / max_val.max(1e-300)
        )));
    }
    let mut x = [0.0f64; 5];
    for idx in 0..5 {
        let col = basis.column(idx);
        let proj: f64 = col.iter().zip(rhs.iter()).map(|(a, b)| a * b).sum();
        for (xi, ci) in x.iter_mut().zip(col.iter()) {
            *xi += proj / vals[idx] * ci;
        }
    }
    let q_sum: C64 = (0..n).map(|k| eta.amplitudes[excitation_index(n, k)]).sum();
    AbsdState::new(c64(x[0], x[1]), x[2], x[3], x[4], q_sum, n, kappa)
}

/// Coefficient series along a trajectory (see [`absd_extract`]).
pub fn absd_series(traj: &Trajectory, q: &[C64], kappa: f64) -> Result<Vec<AbsdState>> {
    traj.states
        .iter()
        .map(|state| absd_extract(state, q, kappa))
        .collect()
}

/// Diagonal matrix element ρ(t)[index, index] along a trajectory.
pub fn population_series(traj: &Trajectory, index: usize) -> Result<Vec<f64>> {
    traj.states
        .iter()
        .map(|s| {
            if index >= s.dim() {
                Err(Error::Dimension(format!(
                    "basis index {index} out of range for dimension {}",
                    s.dim()
                )))
            } else {
                Ok(s.entries[(index, index)].re)
            }
        })
        .collect()
}
