//! Closed-form solutions for collective decay and the squeezed-thermostat
//! steady states.
//!
//! Collective vacuum decay started from a single-excitation state
//! |η⟩ = Σ_k q_k|1_k⟩ stays inside a five-operator family for all times:
//!
//! ρ(t) = A·|1;n⟩⟨η| + A*·|η⟩⟨1;n| + B·|1;n⟩⟨1;n| + S·|0⟩⟨0| + D·|η⟩⟨η|,
//!
//! where |1;n⟩ = Σ_k |1_k⟩ is the unnormalized symmetric one-excitation
//! vector and |0⟩ the collective ground state. The coefficients obey a
//! closed linear system with D constant, which this module provides both as
//! a right-hand side and in solved form, together with the exact
//! density-matrix solution, its long-time limit, and the pure steady states
//! selected by a maximally squeezed thermostat.

use ndarray::{Array1, Array2};

use crate::hilbert::{
    c64, excitation_index, make_eta, make_w, DensityMatrix, SpaceLabel, StateVector,
    MAX_COLLECTIVE_N,
};
use crate::{C64, Error, Result};

/// Coefficients of the closed five-operator family, together with the
/// context (Q = Σ_k q_k, atom count, decay rate) needed to evolve them.
#[derive(Clone, Copy, Debug)]
pub struct AbsdState {
    pub a: C64,
    pub b: f64,
    pub s: f64,
    pub d: f64,
    /// Q = Σ_k q_k of the underlying single-excitation amplitudes.
    pub q_sum: C64,
    pub n: usize,
    pub kappa: f64,
}

impl AbsdState {
    /// Validated constructor: unit-trace combination within 1e-10.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: C64,
        b: f64,
        s: f64,
        d: f64,
        q_sum: C64,
        n: usize,
        kappa: f64,
    ) -> Result<Self> {
        let state = AbsdState {
            a,
            b,
            s,
            d,
            q_sum,
            n,
            kappa,
        };
        state.validate()?;
        Ok(state)
    }

    /// Coefficients of the pure initial state |η⟩⟨η| (A = B = S = 0, D = 1)
    /// for the given amplitudes.
    pub fn initial(q: &[C64], kappa: f64) -> Result<Self> {
        let (n, q_sum) = q_summary(q)?;
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::Domain(format!(
                "decay rate must be finite and non-negative, got {kappa}"
            )));
        }
        AbsdState::new(c64(0.0, 0.0), 0.0, 0.0, 1.0, q_sum, n, kappa)
    }

    /// |A·Q* + A*·Q + B·n + S + D − 1|: distance from the unit-trace
    /// combination.
    pub fn normalization_residual(&self) -> f64 {
        let trace = 2.0 * (self.a * self.q_sum.conj()).re
            + self.b * self.n as f64
            + self.s
            + self.d;
        (trace - 1.0).abs()
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 || self.n > MAX_COLLECTIVE_N {
            return Err(Error::Size(format!(
                "coefficient family needs 2 ≤ n ≤ {MAX_COLLECTIVE_N}, got {}",
                self.n
            )));
        }
        if !(self.kappa >= 0.0) || !self.kappa.is_finite() {
            return Err(Error::Domain(format!(
                "decay rate must be finite and non-negative, got {}",
                self.kappa
            )));
        }
        let finite = self.a.re.is_finite()
            && self.a.im.is_finite()
            && self.b.is_finite()
            && self.s.is_finite()
            && self.d.is_finite()
            && self.q_sum.re.is_finite()
            && self.q_sum.im.is_finite();
        if !finite {
            return Err(Error::Domain("coefficients must be finite".into()));
        }
        // |Q|² ≤ n by Cauchy–Schwarz for normalized amplitudes.
        if self.q_sum.norm_sqr() > self.n as f64 + 1e-9 {
            return Err(Error::Domain(format!(
                "|Q|² = {:.6} exceeds the Cauchy–Schwarz bound n = {}",
                self.q_sum.norm_sqr(),
                self.n
            )));
        }
        let residual = self.normalization_residual();
        if residual > 1e-10 {
            return Err(Error::Normalization(format!(
                "coefficient combination has trace residual {residual:.3e}"
            )));
        }
        Ok(())
    }
}

/// Time derivative of the coefficient family; `dd` is identically zero.
#[derive(Clone, Copy, Debug)]
pub struct AbsdDerivative {
    pub da: C64,
    pub db: f64,
    pub ds: f64,
    pub dd: f64,
}

/// Right-hand side of the coefficient system under collective vacuum decay
/// at rate κ:
///
/// Ȧ = −κ(An + DQ), Ḃ = −κ(AQ* + A*Q) − 2κn·B, Ḋ = 0,
///
/// and Ṡ = 2κ[n(AQ* + A*Q) + n²B + |Q|²D], the unique choice that keeps
/// the unit-trace combination conserved alongside Ḋ = 0.
pub fn absd_rhs(state: &AbsdState) -> Result<AbsdDerivative> {
    state.validate()?;
    let kappa = state.kappa;
    let n = state.n as f64;
    let q = state.q_sum;
    let cross = 2.0 * (state.a * q.conj()).re; // AQ* + A*Q
    let da = -kappa * (state.a * n + q * state.d);
    let db = -kappa * cross - 2.0 * kappa * n * state.b;
    let ds = 2.0 * kappa * (n * cross + n * n * state.b + q.norm_sqr() * state.d);
    Ok(AbsdDerivative {
        da,
        db,
        ds,
        dd: 0.0,
    })
}

/// Solved coefficient trajectory from the pure initial state |η⟩⟨η|:
///
/// A(t) = −(Q/n)(1 − e^{−nκt}), B(t) = (|Q|²/n²)(1 − e^{−nκt})²,
/// S(t) = (|Q|²/n)(1 − e^{−2nκt}), D = 1.
pub fn absd_closed_form(q: &[C64], kappa: f64, t: f64) -> Result<AbsdState> {
    let (n, q_sum) = q_summary(q)?;
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(Error::Domain(format!(
            "decay rate must be finite and non-negative, got {kappa}"
        )));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    let nf = n as f64;
    let u = (-nf * kappa * t).exp();
    let decay = 1.0 - u;
    let q2 = q_sum.norm_sqr();
    let a = -(q_sum / nf) * decay;
    let b = q2 / (nf * nf) * decay * decay;
    let s = q2 / nf * (1.0 - u * u);
    AbsdState::new(a, b, s, 1.0, q_sum, n, kappa)
}

/// Density matrix of the coefficient family for the amplitudes `q` (which
/// must carry the same Q and n the state was built with).
pub fn absd_to_density(state: &AbsdState, q: &[C64]) -> Result<DensityMatrix> {
    state.validate()?;
    let (n, q_sum) = q_summary(q)?;
    if n != state.n || (q_sum - state.q_sum).norm() > 1e-10 {
        return Err(Error::Dimension(
            "amplitudes do not match the coefficient state's Q and n".into(),
        ));
    }
    let eta = make_eta(q)?;
    let sym = symmetric_vector(n);
    let ground = ground_vector(n);
    let dim = eta.space.dim();
    let mut entries: Array2<C64> = Array2::zeros((dim, dim));
    add_outer(&mut entries, state.a, &sym, &eta.amplitudes);
    add_outer(&mut entries, state.a.conj(), &eta.amplitudes, &sym);
    add_outer(&mut entries, c64(state.b, 0.0), &sym, &sym);
    add_outer(&mut entries, c64(state.s, 0.0), &ground, &ground);
    add_outer(&mut entries, c64(state.d, 0.0), &eta.amplitudes, &eta.amplitudes);
    DensityMatrix::new(eta.space, entries)
}

/// Exact state of collective vacuum decay at time `t`, started from
/// |η⟩⟨η| with amplitudes `q`:
///
/// ρ(t) = (Q/√n)(e^{−nκt} − 1)|W⟩⟨η| + h.c.
///        + (|Q|²/n)(1 − e^{−nκt})²|W⟩⟨W|
///        + (|Q|²/n)(1 − e^{−2nκt})|0⟩⟨0| + |η⟩⟨η|.
pub fn eta_decay_solution(t: f64, q: &[C64], kappa: f64) -> Result<DensityMatrix> {
    let (n, q_sum) = q_summary(q)?;
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(Error::Domain(format!(
            "decay rate must be finite and non-negative, got {kappa}"
        )));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    let nf = n as f64;
    let u = (-nf * kappa * t).exp();
    let eta = make_eta(q)?;
    let w = make_w(n)?;
    let ground = ground_vector(n);
    let q2 = q_sum.norm_sqr();

    let dim = eta.space.dim();
    let mut entries: Array2<C64> = Array2::zeros((dim, dim));
    let cross = (q_sum / nf.sqrt()) * (u - 1.0);
    add_outer(&mut entries, cross, &w.amplitudes, &eta.amplitudes);
    add_outer(&mut entries, cross.conj(), &eta.amplitudes, &w.amplitudes);
    let b_w = q2 / nf * (1.0 - u) * (1.0 - u);
    add_outer(&mut entries, c64(b_w, 0.0), &w.amplitudes, &w.amplitudes);
    let s = q2 / nf * (1.0 - u * u);
    add_outer(&mut entries, c64(s, 0.0), &ground, &ground);
    add_outer(&mut entries, c64(1.0, 0.0), &eta.amplitudes, &eta.amplitudes);
    DensityMatrix::new(eta.space, entries)
}

/// Long-time limit of collective vacuum decay from a state whose weight on
/// |η⟩⟨η| is `d` (and 1 − d on the ground state):
///
/// ρ_∞ = d·|v⟩⟨v| + [(1 − d) + |Q|²d/n]|0⟩⟨0|, v = |η⟩ − (Q/n)|1;n⟩.
pub fn f_ss(d: f64, q: &[C64], n: usize) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::Domain(format!(
            "initial weight must lie in [0, 1], got {d}"
        )));
    }
    let (n_q, q_sum) = q_summary(q)?;
    if n_q != n {
        return Err(Error::Dimension(format!(
            "amplitude count {n_q} does not match requested n = {n}"
        )));
    }
    let eta = make_eta(q)?;
    let sym = symmetric_vector(n);
    let ground = ground_vector(n);
    let nf = n as f64;
    let v: Array1<C64> = &eta.amplitudes - &(&sym * (q_sum / nf));
    let dim = eta.space.dim();
    let mut entries: Array2<C64> = Array2::zeros((dim, dim));
    add_outer(&mut entries, c64(d, 0.0), &v, &v);
    let ground_weight = (1.0 - d) + q_sum.norm_sqr() * d / nf;
    add_outer(&mut entries, c64(ground_weight, 0.0), &ground, &ground);
    DensityMatrix::new(eta.space, entries)
}

/// Pure two-atom steady state of the maximally squeezed collective channel
/// with real correlator: s = (√(N+1)|00⟩ + √N|11⟩)/√(2N+1).
pub fn two_atom_squeezed_steady(n_occ: f64) -> Result<StateVector> {
    two_atom_squeezed_steady_with_phase(n_occ, 0.0)
}

/// Same steady state for a complex correlator M = |M|e^{iφ}: the phase
/// rotates the doubly excited amplitude, s = (√(N+1)|00⟩ +
/// e^{iφ}√N|11⟩)/√(2N+1).
pub fn two_atom_squeezed_steady_with_phase(n_occ: f64, phase: f64) -> Result<StateVector> {
    if !(n_occ >= 0.0) || !n_occ.is_finite() {
        return Err(Error::Domain(format!(
            "occupation must be finite and non-negative, got {n_occ}"
        )));
    }
    let norm = (2.0 * n_occ + 1.0).sqrt();
    let space = SpaceLabel::atoms(2);
    let mut amplitudes: Array1<C64> = Array1::zeros(4);
    amplitudes[0] = c64((n_occ + 1.0).sqrt() / norm, 0.0);
    amplitudes[3] = C64::from_polar(n_occ.sqrt() / norm, phase);
    StateVector::new(space, amplitudes)
}

/// Pure steady state reached by the maximally squeezed collective channel
/// from a four-site zero-sum single-excitation state: each pair term of the
/// singlet expansion of |η₄⟩ keeps its singlet, while the spectator pair
/// (the complementary two sites) lands in the two-atom steady state s
/// instead of the ground state:
///
/// |Φ⟩ ∝ Σ_{k=1}^{3} q_k · Ψ⁻_{0k} ⊗ s_(complementary pair).
pub fn eta4_squeezed_final(q: &[C64], n_occ: f64) -> Result<StateVector> {
    let (n, q_sum) = q_summary(q)?;
    if n != 4 {
        return Err(Error::Size(format!(
            "the pair construction is specific to 4 sites, got {n}"
        )));
    }
    if q_sum.norm() > 1e-10 {
        return Err(Error::Domain(format!(
            "amplitudes must sum to zero, got |Σq| = {:.3e}",
            q_sum.norm()
        )));
    }
    let eta = make_eta(q)?;
    let q_norm: Vec<C64> = (0..4)
        .map(|k| eta.amplitudes[excitation_index(4, k)])
        .collect();
    let s2 = two_atom_squeezed_steady(n_occ)?;
    let r = 1.0 / 2f64.sqrt();
    let singlet: Array1<C64> =
        Array1::from(vec![c64(0.0, 0.0), c64(r, 0.0), c64(-r, 0.0), c64(0.0, 0.0)]);
    let mut amplitudes: Array1<C64> = Array1::zeros(16);
    for k in 1..4 {
        let term = crate::hilbert::place_pair_states(&singlet, 0, k, &s2.amplitudes)?;
        amplitudes.scaled_add(q_norm[k], &term.amplitudes);
    }
    let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Err(Error::Domain(
            "pair construction collapsed to the zero vector".into(),
        ));
    }
    amplitudes.mapv_inplace(|z| z / norm);
    StateVector::new(SpaceLabel::atoms(4), amplitudes)
}

/// Steady level populations of a single atom coupled to the squeezed
/// thermostat.
#[derive(Clone, Copy, Debug)]
pub struct LevelOccupations {
    /// Ground (lower) level population.
    pub lower: f64,
    /// Excited (upper) level population.
    pub upper: f64,
}

/// Steady populations of one atom under the squeezed channel: the downward
/// rate is proportional to N+1 and the upward rate to N (the squeezing
/// correlator only couples coherences), so detailed balance gives
/// lower = (N+1)/(2N+1) and upper = N/(2N+1). Both levels are reported
/// because the value λ = N/(2N+1) is sometimes quoted for the *lower*
/// level, which in this convention is the upper-level population.
pub fn single_atom_squeezed_occupation(n_occ: f64) -> Result<LevelOccupations> {
    if !(n_occ >= 0.0) || !n_occ.is_finite() {
        return Err(Error::Domain(format!(
            "occupation must be finite and non-negative, got {n_occ}"
        )));
    }
    let denom = 2.0 * n_occ + 1.0;
    Ok(LevelOccupations {
        lower: (n_occ + 1.0) / denom,
        upper: n_occ / denom,
    })
}

// ---------------------------------------------------------------------------
// Internal helpers
// ---------------------------------------------------------------------------

/// Validate amplitudes (via the η constructor) and return (n, Q = Σq_k).
fn q_summary(q: &[C64]) -> Result<(usize, C64)> {
    let eta = make_eta(q)?;
    let n = q.len();
    let q_sum: C64 = (0..n)
        .map(|k| eta.amplitudes[excitation_index(n, k)])
        .sum();
    Ok((n, q_sum))
}

/// Unnormalized |1;n⟩ = Σ_k |1_k⟩ as a raw amplitude vector.
fn symmetric_vector(n: usize) -> Array1<C64> {
    let mut v: Array1<C64> = Array1::zeros(1 << n);
    for k in 0..n {
        v[excitation_index(n, k)] = c64(1.0, 0.0);
    }
    v
}

fn ground_vector(n: usize) -> Array1<C64> {
    let mut v: Array1<C64> = Array1::zeros(1 << n);
    v[0] = c64(1.0, 0.0);
    v
}

/// entries += w · |u⟩⟨v|.
fn add_outer(entries: &mut Array2<C64>, w: C64, u: &Array1<C64>, v: &Array1<C64>) {
    if w == c64(0.0, 0.0) {
        return;
    }
    for (i, ui) in u.iter().enumerate() {
        if *ui == c64(0.0, 0.0) {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            entries[(i, j)] += w * ui * vj.conj();
        }
    }
}
