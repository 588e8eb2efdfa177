//! Swap-based quantum memory: write a single-photon multimode light state
//! into the atomic register, store it under the collective channel, read it
//! back with the inverse swap.
//!
//! The register holds n atoms followed by n photonic modes truncated to
//! occupation {0, 1}; the protocol never leaves the ≤1-excitation sector
//! from its initial states, so the qubit truncation is exact. The exchange
//! coupling V = i·f·Σ_j (σ₊ʲ a_j − a_j† σ₋ʲ) rotates each atom–mode pair,
//! carrying cos(ft)|0⟩_a|η⟩_b + sin(ft)|η⟩_a|0⟩_b through the write stage;
//! at f·t = π/2 the light state sits entirely on the atoms. States with
//! zero-sum amplitudes then survive collective storage unchanged, while the
//! symmetric state degrades.

use ndarray::{Array1, Array2};
use serde::Serialize;

use crate::dynamics::{self, IntegratorConfig};
use crate::hilbert::{SpaceLabel, StateVector, c64, fidelity, make_eta};
use crate::liouvillian::{ThermostatParams, dissipator_collective};
use crate::sparse::SparseOp;
use crate::{C64, Error, Result};

/// Largest register size accepted by the memory protocol (total dimension
/// 4ⁿ for the swap stages, 2ⁿ for the stored density matrix).
pub const MAX_MEMORY_N: usize = 6;

/// Parameters of one write–store–read cycle.
#[derive(Clone, Debug)]
pub struct MemoryConfig {
    /// Atom (and mode) count.
    pub n: usize,
    /// Exchange coupling f (rad/s).
    pub coupling_f: f64,
    /// Duration of the write swap; f·t = π/2 transfers the full state.
    pub write_time: f64,
    /// Duration of collective storage on the atoms.
    pub store_time: f64,
    /// Thermostat seen by the atoms while stored.
    pub store_bath: ThermostatParams,
    /// Collective rate during storage.
    pub store_kappa: f64,
}

impl MemoryConfig {
    /// Cycle with the ideal write duration f·t = π/2.
    pub fn standard(
        n: usize,
        coupling_f: f64,
        store_time: f64,
        store_bath: ThermostatParams,
        store_kappa: f64,
    ) -> Result<Self> {
        let cfg = MemoryConfig {
            n,
            coupling_f,
            write_time: std::f64::consts::FRAC_PI_2 / coupling_f,
            store_time,
            store_bath,
            store_kappa,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.n > MAX_MEMORY_N {
            return Err(Error::Size(format!(
                "memory register needs 1..={MAX_MEMORY_N} atoms, got {}",
                self.n
            )));
        }
        if !(self.coupling_f > 0.0) || !self.coupling_f.is_finite() {
            return Err(Error::Physicality(format!(
                "exchange coupling must be positive, got {}",
                self.coupling_f
            )));
        }
        for (name, v) in [
            ("write_time", self.write_time),
            ("store_time", self.store_time),
            ("store_kappa", self.store_kappa),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Physicality(format!(
                    "{name} must be a finite non-negative real, got {v}"
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Swap coupling
// ---------------------------------------------------------------------------

/// Position of atom `j`'s bit in a basis index of the 2n-qubit register.
fn atom_bit(n: usize, j: usize) -> usize {
    2 * n - 1 - j
}

/// Position of mode `j`'s bit.
fn mode_bit(n: usize, j: usize) -> usize {
    n - 1 - j
}

/// Sparse triplets of V = i·f·Σ_j (σ₊ʲ a_j − a_j† σ₋ʲ) on atoms ⊗ modes.
fn swap_triplets(n: usize, f: f64) -> Vec<(u32, u32, C64)> {
    let dim = 1usize << (2 * n);
    let mut trips = Vec::with_capacity(n * (dim / 2));
    for j in 0..n {
        let ab = 1usize << atom_bit(n, j);
        let mb = 1usize << mode_bit(n, j);
        for b in 0..dim {
            let atom_up = b & ab != 0;
            let mode_up = b & mb != 0;
            if !atom_up && mode_up {
                // σ₊ a: move the excitation from mode j to atom j.
                trips.push(((b + ab - mb) as u32, b as u32, c64(0.0, f)));
            } else if atom_up && !mode_up {
                // −a† σ₋: move it back.
                trips.push(((b - ab + mb) as u32, b as u32, c64(0.0, -f)));
            }
        }
    }
    trips
}

/// Dense exchange coupling V = i·f·Σ_j (σ₊ʲ a_j − a_j† σ₋ʲ) on the
/// register of n atoms followed by n qubit-truncated modes. Hermitian and
/// commuting with the total excitation number.
pub fn swap_hamiltonian(n: usize, f: f64) -> Result<Array2<C64>> {
    validate_swap_args(n, f)?;
    if n > 5 {
        return Err(Error::Size(format!(
            "dense swap coupling restricted to n ≤ 5, got {n}"
        )));
    }
    let dim = 1usize << (2 * n);
    Ok(SparseOp::from_triplets(dim, swap_triplets(n, f)).to_dense())
}

fn validate_swap_args(n: usize, f: f64) -> Result<()> {
    if n < 1 || n > MAX_MEMORY_N {
        return Err(Error::Size(format!(
            "swap register needs 1..={MAX_MEMORY_N} atoms, got {n}"
        )));
    }
    if !f.is_finite() || f <= 0.0 {
        return Err(Error::Physicality(format!(
            "exchange coupling must be positive, got {f}"
        )));
    }
    Ok(())
}

/// exp(−iVt)·v for a sparse Hermitian V, by scaled Taylor summation: the
/// interval is split so each substep has ‖Vτ‖ ≤ 1/2 and the series is
/// summed to machine precision.
fn expm_apply(v: &SparseOp, t: f64, psi: &Array1<C64>) -> Array1<C64> {
    let theta = v.norm_bound() * t.abs();
    let steps = (theta / 0.5).ceil().max(1.0) as usize;
    let tau = t / steps as f64;
    let mut state = psi.clone();
    for _ in 0..steps {
        let mut acc = state.clone();
        let mut term = state;
        for m in 1..=64u32 {
            let factor = c64(0.0, -tau / m as f64);
            term = v.apply_vec(&term).mapv(|z| z * factor);
            acc = acc + &term;
            let tn: f64 = term.iter().map(|z| z.norm_sqr()).sum();
            if tn.sqrt() <= 1e-17 {
                break;
            }
        }
        state = acc;
    }
    state
}

/// Evolve a register state through the exchange coupling for time `t`
/// (negative `t` runs the inverse swap).
pub fn swap_evolve(psi0: &StateVector, t: f64, n: usize, f: f64) -> Result<StateVector> {
    validate_swap_args(n, f)?;
    if !t.is_finite() {
        return Err(Error::Domain(format!("swap time must be finite, got {t}")));
    }
    let space = SpaceLabel::atoms_with_photon_qubits(n);
    if psi0.space != space {
        return Err(Error::Dimension(
            "state does not live on the atoms ⊗ photon-qubit register".into(),
        ));
    }
    let v = SparseOp::from_triplets(space.dim(), swap_triplets(n, f));
    let amps = expm_apply(&v, t, &psi0.amplitudes);
    StateVector::new(space, amps)
}

// ---------------------------------------------------------------------------
// The write–store–read cycle
// ---------------------------------------------------------------------------

/// Configuration echo embedded in the cycle report.
#[derive(Clone, Debug, Serialize)]
pub struct MemoryParameters {
    pub n: usize,
    pub coupling_f: f64,
    pub write_time: f64,
    pub store_time: f64,
    pub store_kappa: f64,
    pub store_occupation: f64,
    pub store_correlator: (f64, f64),
}

/// Figures of merit of one write–store–read cycle, all fidelities taken
/// against the initial light state.
#[derive(Clone, Debug, Serialize)]
pub struct MemoryReport {
    /// Overlap of the post-write register with the ideal written state.
    pub write_fidelity: f64,
    /// Fidelity of the stored atomic state with the light pattern.
    pub post_store_fidelity: f64,
    /// Fidelity of the read-out mode state with the initial light state.
    pub read_fidelity: f64,
    /// Tr ρ² of the atomic state after storage.
    pub purity_after_store: f64,
    pub parameters: MemoryParameters,
}

/// Amplitudes of the single-excitation pattern `q` on an n-qubit group,
/// embedded at the given bit offsets.
fn pattern_vector(dim: usize, bits: &[usize], q: &[C64]) -> Array1<C64> {
    let mut v = Array1::zeros(dim);
    for (k, &amp) in q.iter().enumerate() {
        v[1usize << bits[k]] = amp;
    }
    v
}

/// Run the full cycle: swap the light pattern `q` into the atoms, hold the
/// atomic reduced state in the collective thermostat for `store_time`
/// (modes idle), swap back, and report the fidelities.
pub fn memory_cycle(config: &MemoryConfig, q: &[C64]) -> Result<MemoryReport> {
    config.validate()?;
    let n = config.n;
    if q.len() != n {
        return Err(Error::Dimension(format!(
            "{} amplitudes for {} modes",
            q.len(),
            n
        )));
    }
    let q_norm: f64 = q.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (q_norm - 1.0).abs() > 1e-8 {
        return Err(Error::Normalization(format!(
            "light amplitudes must be normalized, got ‖q‖ = {q_norm}"
        )));
    }
    let space = SpaceLabel::atoms_with_photon_qubits(n);
    let dim = space.dim();
    let mode_dim = 1usize << n;
    let atom_bits: Vec<usize> = (0..n).map(|j| atom_bit(n, j)).collect();
    let mode_bits: Vec<usize> = (0..n).map(|j| mode_bit(n, j)).collect();

    // |0⟩_atoms ⊗ |η⟩_modes.
    let psi0 = StateVector::new(space.clone(), pattern_vector(dim, &mode_bits, q))?;

    // Write stage.
    let written = swap_evolve(&psi0, config.write_time, n, config.coupling_f)?;
    let target = StateVector::new(space.clone(), pattern_vector(dim, &atom_bits, q))?;
    let write_fidelity = written.inner(&target)?.norm_sqr();

    // Store stage: reduce to the atoms and hold them in the collective
    // thermostat; the modes idle in vacuum.
    let atoms: Vec<usize> = (0..n).collect();
    let rho_atoms = crate::hilbert::partial_trace(&written.to_density()?, &atoms)?;
    let stored = if config.store_time > 0.0 && config.store_kappa > 0.0 {
        let gen = dissipator_collective(n, &config.store_bath, config.store_kappa)?;
        let traj = dynamics::evolve(
            &gen,
            &rho_atoms,
            config.store_time,
            &IntegratorConfig::default(),
        )?;
        traj.last().clone()
    } else {
        rho_atoms
    };
    let eta_atoms = make_eta(q)?;
    let post_store_fidelity = fidelity(&eta_atoms, &stored)?;
    let purity_after_store = stored.purity();

    // Read stage: re-embed with the modes in vacuum and run the inverse
    // swap. The stored state has rank ≤ 2ⁿ, so evolve its eigenvectors as
    // register states instead of conjugating a 4ⁿ-dimensional matrix.
    let v = SparseOp::from_triplets(dim, swap_triplets(n, config.coupling_f));
    let (evals, evecs) = crate::linalg::eigh_pairs(&stored.entries)?;
    let mut rho_modes: Array2<C64> = Array2::zeros((mode_dim, mode_dim));
    for (p, phi) in evals.iter().zip(evecs.iter()) {
        if *p <= 1e-14 {
            continue;
        }
        let mut full: Array1<C64> = Array1::zeros(dim);
        for (a, amp) in phi.iter().enumerate() {
            full[a * mode_dim] = *amp;
        }
        let out = expm_apply(&v, -config.write_time, &full);
        let weight = c64(*p, 0.0);
        for m1 in 0..mode_dim {
            for m2 in 0..mode_dim {
                let mut acc = c64(0.0, 0.0);
                for a in 0..(dim / mode_dim) {
                    acc += out[a * mode_dim + m1] * out[a * mode_dim + m2].conj();
                }
                rho_modes[(m1, m2)] += weight * acc;
            }
        }
    }
    // ⟨η|ρ_modes|η⟩ on the mode register.
    let eta_modes: Vec<C64> = q.to_vec();
    let mut read_fidelity = 0.0;
    for (k1, a1) in eta_modes.iter().enumerate() {
        for (k2, a2) in eta_modes.iter().enumerate() {
            let m1 = 1usize << mode_bits[k1];
            let m2 = 1usize << mode_bits[k2];
            read_fidelity += (a1.conj() * rho_modes[(m1, m2)] * *a2).re;
        }
    }

    Ok(MemoryReport {
        write_fidelity,
        post_store_fidelity,
        read_fidelity: read_fidelity.clamp(0.0, 1.0),
        purity_after_store,
        parameters: MemoryParameters {
            n,
            coupling_f: config.coupling_f,
            write_time: config.write_time,
            store_time: config.store_time,
            store_kappa: config.store_kappa,
            store_occupation: config.store_bath.occupation(),
            store_correlator: (
                config.store_bath.correlator().re,
                config.store_bath.correlator().im,
            ),
        },
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
