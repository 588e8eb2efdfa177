//! Hilbert-space plumbing: labeled tensor-product spaces of two-level atoms
//! and truncated field modes, the special entangled states of the model
//! (single-excitation η states, W states, singlet embeddings), collective
//! angular-momentum operators, the permutation representation, partial
//! trace, and state metrics.
//!
//! Ordering convention, fixed throughout the crate: subsystem 0 is the most
//! significant position of the basis index. For an all-qubit register the
//! basis state `|b_0 b_1 … b_{n-1}⟩` sits at index `Σ_k b_k · 2^{n-1-k}`,
//! i.e. site 0 owns the leading binary digit.

use ndarray::{Array1, Array2};
use ndarray_linalg::{EigValsh, UPLO};

use crate::{C64, Error, Result};

/// Largest atom count for which dense collective operators are materialized.
pub const MAX_COLLECTIVE_N: usize = 10;

/// Unit-norm tolerance for the `normalized` flag on [`StateVector`].
pub const NORM_TOL: f64 = 1e-12;
/// Hermiticity tolerance in [`DensityMatrix`] validation.
pub const HERM_TOL: f64 = 1e-10;
/// Unit-trace tolerance in [`DensityMatrix`] validation.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest admissible eigenvalue in [`DensityMatrix`] validation.
pub const MIN_EIG_FLOOR: f64 = -1e-8;

#[inline]
pub(crate) fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// What a tensor factor physically is. Atoms are always two-level; modes
/// carry a truncation-dependent local dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsystemKind {
    Atom,
    Mode,
}

/// One tensor factor of a labeled space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Subsystem {
    pub kind: SubsystemKind,
    pub dim: usize,
}

/// Ordered tensor-product structure of a Hilbert space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceLabel {
    subsystems: Vec<Subsystem>,
}

impl SpaceLabel {
    pub fn new(subsystems: Vec<Subsystem>) -> Result<Self> {
        if subsystems.is_empty() {
            return Err(Error::Size("a space needs at least one subsystem".into()));
        }
        if let Some(s) = subsystems.iter().find(|s| s.dim < 2) {
            return Err(Error::Size(format!(
                "local dimension must be at least 2, got {}",
                s.dim
            )));
        }
        Ok(SpaceLabel { subsystems })
    }

    /// Register of `n` two-level atoms.
    pub fn atoms(n: usize) -> Self {
        assert!(n >= 1, "atom register needs at least one atom");
        SpaceLabel {
            subsystems: vec![
                Subsystem {
                    kind: SubsystemKind::Atom,
                    dim: 2,
                };
                n
            ],
        }
    }

    /// `n` atoms followed by one truncated cavity mode. `cutoff` is the
    /// largest Fock occupancy kept, so the mode's local dimension is
    /// `cutoff + 1`.
    pub fn atoms_with_mode(n: usize, cutoff: usize) -> Self {
        assert!(n >= 1, "atom register needs at least one atom");
        assert!(cutoff >= 1, "mode truncation needs at least occupancy 1");
        let mut subsystems = vec![
            Subsystem {
                kind: SubsystemKind::Atom,
                dim: 2,
            };
            n
        ];
        subsystems.push(Subsystem {
            kind: SubsystemKind::Mode,
            dim: cutoff + 1,
        });
        SpaceLabel { subsystems }
    }

    /// A single truncated mode (no atoms); local dimension `cutoff + 1`.
    pub fn single_mode(cutoff: usize) -> Self {
        assert!(cutoff >= 1, "mode truncation needs at least occupancy 1");
        SpaceLabel {
            subsystems: vec![Subsystem {
                kind: SubsystemKind::Mode,
                dim: cutoff + 1,
            }],
        }
    }

    /// `n` atoms followed by `n` photonic modes truncated to occupation
    /// {0, 1}: the register used by the swap-based memory protocol.
    pub fn atoms_with_photon_qubits(n: usize) -> Self {
        assert!(n >= 1, "register needs at least one atom");
        let mut subsystems = vec![
            Subsystem {
                kind: SubsystemKind::Atom,
                dim: 2,
            };
            n
        ];
        subsystems.extend(vec![
            Subsystem {
                kind: SubsystemKind::Mode,
                dim: 2,
            };
            n
        ]);
        SpaceLabel { subsystems }
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn n_subsystems(&self) -> usize {
        self.subsystems.len()
    }

    /// Total dimension (product of local dimensions).
    pub fn dim(&self) -> usize {
        self.subsystems.iter().map(|s| s.dim).product()
    }

    /// Number of atom subsystems.
    pub fn atom_count(&self) -> usize {
        self.subsystems
            .iter()
            .filter(|s| s.kind == SubsystemKind::Atom)
            .count()
    }

    /// Indices of the atom subsystems.
    pub fn atom_indices(&self) -> Vec<usize> {
        self.subsystems
            .iter()
            .enumerate()
            .filter(|(_, s)| s.kind == SubsystemKind::Atom)
            .map(|(i, _)| i)
            .collect()
    }

    /// Index of the unique mode subsystem, if there is exactly one.
    pub fn mode_index(&self) -> Option<usize> {
        let modes: Vec<usize> = self
            .subsystems
            .iter()
            .enumerate()
            .filter(|(_, s)| s.kind == SubsystemKind::Mode)
            .map(|(i, _)| i)
            .collect();
        if modes.len() == 1 {
            Some(modes[0])
        } else {
            None
        }
    }

    /// Row-major strides: subsystem 0 is most significant.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.subsystems.len()];
        for i in (0..self.subsystems.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.subsystems[i + 1].dim;
        }
        strides
    }

    pub fn is_qubit_register(&self) -> bool {
        self.subsystems.iter().all(|s| s.dim == 2)
    }
}

/// Complex amplitudes over a labeled space.
#[derive(Clone, Debug)]
pub struct StateVector {
    pub space: SpaceLabel,
    pub amplitudes: Array1<C64>,
    /// True iff Σ|amplitude|² = 1 within [`NORM_TOL`] at construction.
    pub normalized: bool,
}

impl StateVector {
    pub fn new(space: SpaceLabel, amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::Dimension(format!(
                "amplitude vector of length {} does not fit space of dimension {}",
                amplitudes.len(),
                space.dim()
            )));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let normalized = (norm_sqr.sqrt() - 1.0).abs() <= NORM_TOL;
        Ok(StateVector {
            space,
            amplitudes,
            normalized,
        })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Rescale to unit norm. Errors on the zero vector.
    pub fn normalize(mut self) -> Result<Self> {
        let norm = self.norm();
        if norm < 1e-300 {
            return Err(Error::Normalization(
                "cannot normalize the zero vector".into(),
            ));
        }
        self.amplitudes.mapv_inplace(|a| a / norm);
        self.normalized = true;
        Ok(self)
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.space != other.space {
            return Err(Error::Dimension(
                "inner product between different spaces".into(),
            ));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |ψ⟩⟨ψ| as a validated density matrix (requires unit norm).
    pub fn to_density(&self) -> Result<DensityMatrix> {
        if !self.normalized {
            return Err(Error::Normalization(
                "projector requires a normalized state".into(),
            ));
        }
        let d = self.space.dim();
        let mut m = Array2::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        Ok(DensityMatrix {
            space: self.space.clone(),
            entries: m,
        })
    }

    /// ⟨ψ|O|ψ⟩ for a dense operator.
    pub fn expectation(&self, op: &Array2<C64>) -> Result<C64> {
        let d = self.space.dim();
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::Dimension("operator does not fit the space".into()));
        }
        let ov = op.dot(&self.amplitudes);
        Ok(self
            .amplitudes
            .iter()
            .zip(ov.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Hermitian, positive-semidefinite, unit-trace matrix over a labeled space.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub space: SpaceLabel,
    pub entries: Array2<C64>,
}

impl DensityMatrix {
    /// Validating constructor: Hermitian within [`HERM_TOL`], unit trace
    /// within [`TRACE_TOL`], minimum eigenvalue ≥ [`MIN_EIG_FLOOR`].
    pub fn new(space: SpaceLabel, entries: Array2<C64>) -> Result<Self> {
        let d = space.dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::Dimension(format!(
                "{}×{} matrix does not fit space of dimension {}",
                entries.nrows(),
                entries.ncols(),
                d
            )));
        }
        let herm = hermiticity_residual(&entries);
        if herm > HERM_TOL {
            return Err(Error::Physicality(format!(
                "matrix is not Hermitian: residual {herm:.3e}"
            )));
        }
        let tr = trace_of(&entries);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Physicality(format!(
                "trace {tr} is not 1 within {TRACE_TOL:.0e}"
            )));
        }
        let min_eig = min_eigenvalue(&entries)?;
        if min_eig < MIN_EIG_FLOOR {
            return Err(Error::Physicality(format!(
                "minimum eigenvalue {min_eig:.3e} below {MIN_EIG_FLOOR:.0e}"
            )));
        }
        Ok(DensityMatrix { space, entries })
    }

    /// Constructor for matrices whose validity is guaranteed by
    /// construction (integrator steps, partial traces of valid states);
    /// skips the eigenvalue check.
    pub(crate) fn new_unchecked(space: SpaceLabel, entries: Array2<C64>) -> Self {
        DensityMatrix { space, entries }
    }

    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        psi.to_density()
    }

    /// Maximally mixed state 1/d.
    pub fn maximally_mixed(space: SpaceLabel) -> Self {
        let d = space.dim();
        let mut m = Array2::zeros((d, d));
        for i in 0..d {
            m[(i, i)] = c64(1.0 / d as f64, 0.0);
        }
        DensityMatrix { space, entries: m }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn trace(&self) -> C64 {
        trace_of(&self.entries)
    }

    /// Tr ρ², computed as Σ|ρ_ij|² (valid for Hermitian ρ).
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(&self.entries)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        min_eigenvalue(&self.entries)
    }

    /// Tr(ρ·O) for a dense operator.
    pub fn expectation(&self, op: &Array2<C64>) -> Result<C64> {
        let d = self.dim();
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::Dimension("operator does not fit the space".into()));
        }
        let mut tr = c64(0.0, 0.0);
        for i in 0..d {
            for k in 0..d {
                tr += self.entries[(i, k)] * op[(k, i)];
            }
        }
        Ok(tr)
    }
}

pub(crate) fn trace_of(m: &Array2<C64>) -> C64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

pub(crate) fn hermiticity_residual(m: &Array2<C64>) -> f64 {
    let mut max = 0.0_f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let r = (m[(i, j)] - m[(j, i)].conj()).norm();
            if r > max {
                max = r;
            }
        }
    }
    max
}

pub(crate) fn min_eigenvalue(m: &Array2<C64>) -> Result<f64> {
    let evals = m.eigvalsh(UPLO::Lower)?;
    Ok(evals.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// ‖m‖_F.
pub fn frobenius_norm(m: &Array2<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

// ---------------------------------------------------------------------------
// Basis states and the model's special states
// ---------------------------------------------------------------------------

/// Computational basis state with the given local occupation per subsystem.
/// The all-zeros occupation is the ground state |0⟩.
pub fn basis_state(space: &SpaceLabel, occupation: &[usize]) -> Result<StateVector> {
    if occupation.len() != space.n_subsystems() {
        return Err(Error::Dimension(format!(
            "occupation list of length {} for {} subsystems",
            occupation.len(),
            space.n_subsystems()
        )));
    }
    let strides = space.strides();
    let mut index = 0usize;
    for (i, (&occ, sub)) in occupation.iter().zip(space.subsystems()).enumerate() {
        if occ >= sub.dim {
            return Err(Error::Dimension(format!(
                "occupation {} out of range for subsystem {} of dimension {}",
                occ, i, sub.dim
            )));
        }
        index += occ * strides[i];
    }
    let mut amplitudes = Array1::zeros(space.dim());
    amplitudes[index] = c64(1.0, 0.0);
    Ok(StateVector {
        space: space.clone(),
        amplitudes,
        normalized: true,
    })
}

/// Atomic ground state |00…0⟩ of `n` atoms.
pub fn ground_state(n: usize) -> Result<StateVector> {
    let space = SpaceLabel::atoms(n);
    let occ = vec![0usize; n];
    basis_state(&space, &occ)
}

/// Basis index of the single-excitation state |1_k⟩ (site k excited, all
/// others ground) in an `n`-qubit register.
#[inline]
pub(crate) fn excitation_index(n: usize, k: usize) -> usize {
    1usize << (n - 1 - k)
}

/// Single-excitation superposition q₁|10…0⟩ + q₂|01…0⟩ + … + q_n|00…1⟩.
///
/// Requires Σ|q_k|² = 1 within 1e-10 and at least two sites; the returned
/// amplitudes are rescaled to unit norm at machine precision.
pub fn make_eta(q: &[C64]) -> Result<StateVector> {
    let n = q.len();
    if n < 2 {
        return Err(Error::Size(format!(
            "single-excitation superposition needs at least 2 sites, got {n}"
        )));
    }
    let norm_sqr: f64 = q.iter().map(|z| z.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > 1e-10 {
        return Err(Error::Normalization(format!(
            "amplitudes have squared norm {norm_sqr}, expected 1"
        )));
    }
    let norm = norm_sqr.sqrt();
    let space = SpaceLabel::atoms(n);
    let mut amplitudes = Array1::zeros(space.dim());
    for (k, &qk) in q.iter().enumerate() {
        amplitudes[excitation_index(n, k)] = qk / norm;
    }
    Ok(StateVector {
        space,
        amplitudes,
        normalized: true,
    })
}

/// The W state (1/√n) Σ_k |1_k⟩: the uniform-amplitude single-excitation
/// superposition.
pub fn make_w(n: usize) -> Result<StateVector> {
    if n < 1 {
        return Err(Error::Size("W state needs at least one atom".into()));
    }
    let space = SpaceLabel::atoms(n);
    let mut amplitudes = Array1::zeros(space.dim());
    let amp = c64(1.0 / (n as f64).sqrt(), 0.0);
    for k in 0..n {
        amplitudes[excitation_index(n, k)] = amp;
    }
    Ok(StateVector {
        space,
        amplitudes,
        normalized: true,
    })
}

/// The unnormalized fully symmetric one-excitation vector Σ_k |1_k⟩, of
/// norm √n (equal to √n·W_n). The closure algebra of the collective decay
/// is naturally written for this unnormalized vector.
pub fn symmetric_unnormalized(n: usize) -> Result<StateVector> {
    if n < 1 {
        return Err(Error::Size("need at least one atom".into()));
    }
    let space = SpaceLabel::atoms(n);
    let mut amplitudes = Array1::zeros(space.dim());
    for k in 0..n {
        amplitudes[excitation_index(n, k)] = c64(1.0, 0.0);
    }
    StateVector::new(space, amplitudes)
}

/// Singlet embedding: Ψ⁻ = (|0_i 1_k⟩ − |1_i 0_k⟩)/√2 on sites (i, k), all
/// other atoms in the ground state.
pub fn make_singlet_embedding(n: usize, i: usize, k: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::Size("singlet embedding needs at least 2 sites".into()));
    }
    if i == k {
        return Err(Error::Site(format!("sites must differ, got i = k = {i}")));
    }
    if i >= n || k >= n {
        return Err(Error::Site(format!(
            "sites ({i}, {k}) out of range for {n} atoms"
        )));
    }
    let space = SpaceLabel::atoms(n);
    let mut amplitudes = Array1::zeros(space.dim());
    let amp = c64(1.0 / 2f64.sqrt(), 0.0);
    amplitudes[excitation_index(n, k)] = amp;
    amplitudes[excitation_index(n, i)] = -amp;
    Ok(StateVector {
        space,
        amplitudes,
        normalized: true,
    })
}

/// Two-qubit state placed on atom sites (i, k) of an `n`-atom register,
/// tensored with a two-qubit state on the remaining pair of sites. Used to
/// build the steady states reached from 4-site single-excitation states
/// under the squeezed collective bath. `n` must be 4 and {i, k} determines
/// the complementary pair automatically.
pub(crate) fn place_pair_states(
    pair_state: &Array1<C64>,
    i: usize,
    k: usize,
    rest_state: &Array1<C64>,
) -> Result<StateVector> {
    let n = 4usize;
    if i == k || i >= n || k >= n {
        return Err(Error::Site(format!("invalid pair sites ({i}, {k})")));
    }
    if pair_state.len() != 4 || rest_state.len() != 4 {
        return Err(Error::Dimension("pair states must be two-qubit".into()));
    }
    let rest: Vec<usize> = (0..n).filter(|&s| s != i && s != k).collect();
    let space = SpaceLabel::atoms(n);
    let mut amplitudes = Array1::zeros(space.dim());
    for b in 0..space.dim() {
        let bit = |site: usize| (b >> (n - 1 - site)) & 1;
        let pair_idx = 2 * bit(i) + bit(k);
        let rest_idx = 2 * bit(rest[0]) + bit(rest[1]);
        amplitudes[b] = pair_state[pair_idx] * rest_state[rest_idx];
    }
    StateVector::new(space, amplitudes)
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

/// Collective atomic operators on `n` two-level atoms.
///
/// R₊ = Σ_j |1⟩_j⟨0|, R₋ = R₊†, R₃ = Σ_j (|1⟩_j⟨1| − |0⟩_j⟨0|), and the
/// angular-momentum set J₁ = (R₋+R₊)/2, J₂ = i(R₋−R₊)/2, J₃ = R₃/2 with
/// J² = J₁² + J₂² + J₃². With this choice [J_b, J_c] = i ε_{bcd} J_d and
/// the raising/lowering pair is exactly J₁ ± iJ₂ = R_±.
#[derive(Clone, Debug)]
pub struct CollectiveOperators {
    pub n: usize,
    pub r_plus: Array2<C64>,
    pub r_minus: Array2<C64>,
    pub r3: Array2<C64>,
    pub j1: Array2<C64>,
    pub j2: Array2<C64>,
    pub j3: Array2<C64>,
    pub j_squared: Array2<C64>,
}

/// Build the collective operators for `n ≤ MAX_COLLECTIVE_N` atoms as dense
/// matrices (one nonzero per site per basis column, so construction is
/// linear in n·2ⁿ; only J² needs matrix products).
pub fn collective_ops(n: usize) -> Result<CollectiveOperators> {
    if n < 1 || n > MAX_COLLECTIVE_N {
        return Err(Error::Size(format!(
            "collective operators supported for 1 ≤ n ≤ {MAX_COLLECTIVE_N}, got {n}"
        )));
    }
    let dim = 1usize << n;
    let mut r_plus: Array2<C64> = Array2::zeros((dim, dim));
    let mut r3: Array2<C64> = Array2::zeros((dim, dim));
    for b in 0..dim {
        let pop = (b as u32).count_ones() as i64;
        r3[(b, b)] = c64((2 * pop - n as i64) as f64, 0.0);
        for k in 0..n {
            let mask = 1usize << (n - 1 - k);
            if b & mask == 0 {
                r_plus[(b | mask, b)] += c64(1.0, 0.0);
            }
        }
    }
    let r_minus = r_plus.t().mapv(|z| z.conj());
    let half = c64(0.5, 0.0);
    let j1 = (&r_minus + &r_plus).mapv(|z| z * half);
    let j2 = (&r_minus - &r_plus).mapv(|z| z * c64(0.0, 0.5));
    let j3 = r3.mapv(|z| z * half);
    // J² = J₃² + (R₊R₋ + R₋R₊)/2, using J₁ ± iJ₂ = R_±.
    let j_squared = {
        let pm = r_plus.dot(&r_minus);
        let mp = r_minus.dot(&r_plus);
        let mut js = j3.dot(&j3);
        js = js + (&pm + &mp).mapv(|z| z * half);
        js
    };
    Ok(CollectiveOperators {
        n,
        r_plus,
        r_minus,
        r3,
        j1,
        j2,
        j3,
        j_squared,
    })
}

/// Embed a local operator acting on one subsystem into the full space
/// (identity on all other factors).
pub fn embed_operator(
    space: &SpaceLabel,
    which: usize,
    local: &Array2<C64>,
) -> Result<Array2<C64>> {
    if which >= space.n_subsystems() {
        return Err(Error::Site(format!(
            "subsystem {which} out of range for {} subsystems",
            space.n_subsystems()
        )));
    }
    let d_local = space.subsystems()[which].dim;
    if local.nrows() != d_local || local.ncols() != d_local {
        return Err(Error::Dimension(format!(
            "{}×{} local operator for subsystem of dimension {}",
            local.nrows(),
            local.ncols(),
            d_local
        )));
    }
    let dim = space.dim();
    let strides = space.strides();
    let stride = strides[which];
    let left = dim / (d_local * stride);
    let mut out = Array2::zeros((dim, dim));
    for l in 0..left {
        let base = l * d_local * stride;
        for i in 0..d_local {
            for j in 0..d_local {
                let v = local[(i, j)];
                if v == c64(0.0, 0.0) {
                    continue;
                }
                for r in 0..stride {
                    out[(base + i * stride + r, base + j * stride + r)] += v;
                }
            }
        }
    }
    Ok(out)
}

/// Lowering operator |0⟩⟨1| on atom subsystem `j`, identity elsewhere.
pub fn site_lower(space: &SpaceLabel, j: usize) -> Result<Array2<C64>> {
    check_atom_site(space, j)?;
    let mut local = Array2::zeros((2, 2));
    local[(0, 1)] = c64(1.0, 0.0);
    embed_operator(space, j, &local)
}

/// Raising operator |1⟩⟨0| on atom subsystem `j`, identity elsewhere.
pub fn site_raise(space: &SpaceLabel, j: usize) -> Result<Array2<C64>> {
    check_atom_site(space, j)?;
    let mut local = Array2::zeros((2, 2));
    local[(1, 0)] = c64(1.0, 0.0);
    embed_operator(space, j, &local)
}

fn check_atom_site(space: &SpaceLabel, j: usize) -> Result<()> {
    if j >= space.n_subsystems() {
        return Err(Error::Site(format!(
            "site {j} out of range for {} subsystems",
            space.n_subsystems()
        )));
    }
    if space.subsystems()[j].kind != SubsystemKind::Atom {
        return Err(Error::Site(format!("subsystem {j} is not an atom")));
    }
    Ok(())
}

/// Collective R₊ = Σ_j |1⟩_j⟨0| over every atom subsystem of `space`.
pub fn collective_raising_on(space: &SpaceLabel) -> Result<Array2<C64>> {
    let atoms = space.atom_indices();
    if atoms.is_empty() {
        return Err(Error::Size("space has no atom subsystems".into()));
    }
    let dim = space.dim();
    let mut out = Array2::zeros((dim, dim));
    for j in atoms {
        out = out + site_raise(space, j)?;
    }
    Ok(out)
}

/// Collective R₋ over every atom subsystem of `space`.
pub fn collective_lowering_on(space: &SpaceLabel) -> Result<Array2<C64>> {
    Ok(collective_raising_on(space)?.t().mapv(|z| z.conj()))
}

/// Collective R₃ = Σ_j (|1⟩_j⟨1| − |0⟩_j⟨0|) over every atom subsystem.
pub fn collective_r3_on(space: &SpaceLabel) -> Result<Array2<C64>> {
    let atoms = space.atom_indices();
    if atoms.is_empty() {
        return Err(Error::Size("space has no atom subsystems".into()));
    }
    let dim = space.dim();
    let mut out = Array2::zeros((dim, dim));
    let mut local = Array2::zeros((2, 2));
    local[(0, 0)] = c64(-1.0, 0.0);
    local[(1, 1)] = c64(1.0, 0.0);
    for j in atoms {
        out = out + embed_operator(space, j, &local)?;
    }
    Ok(out)
}

/// Truncated-mode annihilation operator on the mode subsystem of `space`:
/// c|m⟩ = √m |m−1⟩ for m up to the truncation.
pub fn annihilator_on(space: &SpaceLabel) -> Result<Array2<C64>> {
    let idx = space
        .mode_index()
        .ok_or_else(|| Error::Size("space does not have exactly one mode subsystem".into()))?;
    let d = space.subsystems()[idx].dim;
    let mut local = Array2::zeros((d, d));
    for m in 1..d {
        local[(m - 1, m)] = c64((m as f64).sqrt(), 0.0);
    }
    embed_operator(space, idx, &local)
}

/// Unitary representation of a site permutation on an `n`-qubit register:
/// the particle at site `i` is sent to site `perm[i]` (sites 0-indexed).
pub fn permutation_operator(n: usize, perm: &[usize]) -> Result<Array2<C64>> {
    if perm.len() != n {
        return Err(Error::Permutation(format!(
            "permutation of length {} for {} sites",
            perm.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::Permutation(format!(
                "not a bijection on 0..{n}: {perm:?}"
            )));
        }
        seen[p] = true;
    }
    let dim = 1usize << n;
    let mut out = Array2::zeros((dim, dim));
    for b in 0..dim {
        let mut target = 0usize;
        for i in 0..n {
            let bit = (b >> (n - 1 - i)) & 1;
            if bit == 1 {
                target |= 1 << (n - 1 - perm[i]);
            }
        }
        out[(target, b)] = c64(1.0, 0.0);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Partial trace and metrics
// ---------------------------------------------------------------------------

/// Partial trace over all subsystems *not* listed in `keep` (ascending
/// subsystem indices). Preserves trace and Hermiticity exactly.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let ns = rho.space.n_subsystems();
    if keep.is_empty() {
        return Err(Error::Subset("keep set must be non-empty".into()));
    }
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != keep.len() {
        return Err(Error::Subset(format!("duplicate subsystems in {keep:?}")));
    }
    if *sorted.last().unwrap() >= ns {
        return Err(Error::Subset(format!(
            "subsystem index out of range in {keep:?} for {ns} subsystems"
        )));
    }
    let strides = rho.space.strides();
    let subsystems = rho.space.subsystems();
    let traced: Vec<usize> = (0..ns).filter(|i| !sorted.contains(i)).collect();

    // Enumerate offsets contributed by kept and traced multi-indices; the
    // full index is their sum because strides are additive.
    let offsets = |subset: &[usize]| -> Vec<usize> {
        let mut offs = vec![0usize];
        for &s in subset {
            let d = subsystems[s].dim;
            let stride = strides[s];
            let mut next = Vec::with_capacity(offs.len() * d);
            for &o in &offs {
                for v in 0..d {
                    next.push(o + v * stride);
                }
            }
            offs = next;
        }
        offs
    };
    let kept_offsets = offsets(&sorted);
    let traced_offsets = offsets(&traced);

    let kd = kept_offsets.len();
    let mut out = Array2::zeros((kd, kd));
    for (a, &oa) in kept_offsets.iter().enumerate() {
        for (b, &ob) in kept_offsets.iter().enumerate() {
            let mut sum = c64(0.0, 0.0);
            for &ot in &traced_offsets {
                sum += rho.entries[(oa + ot, ob + ot)];
            }
            out[(a, b)] = sum;
        }
    }
    let kept_subsystems: Vec<Subsystem> = sorted.iter().map(|&s| subsystems[s]).collect();
    Ok(DensityMatrix::new_unchecked(
        SpaceLabel::new(kept_subsystems)?,
        out,
    ))
}

/// ⟨ψ|ρ|ψ⟩ for a pure state against a density matrix, clamped to [0, 1].
pub fn fidelity(psi: &StateVector, rho: &DensityMatrix) -> Result<f64> {
    if psi.space != rho.space {
        return Err(Error::Dimension(
            "fidelity between states on different spaces".into(),
        ));
    }
    let f = rho.expectation_with_vector(psi);
    Ok(f.re.clamp(0.0, 1.0))
}

impl DensityMatrix {
    fn expectation_with_vector(&self, psi: &StateVector) -> C64 {
        let d = self.dim();
        let mut acc = c64(0.0, 0.0);
        for i in 0..d {
            let mut row = c64(0.0, 0.0);
            for j in 0..d {
                row += self.entries[(i, j)] * psi.amplitudes[j];
            }
            acc += psi.amplitudes[i].conj() * row;
        }
        acc
    }
}

/// Tr ρ² of a density matrix.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// Trace distance (1/2)‖ρ − σ‖₁.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.space != b.space {
        return Err(Error::Dimension(
            "trace distance between different spaces".into(),
        ));
    }
    let diff = &a.entries - &b.entries;
    let evals = diff.eigvalsh(UPLO::Lower)?;
    Ok(0.5 * evals.iter().map(|e| e.abs()).sum::<f64>())
}

/// Frobenius distance ‖ρ − σ‖_F.
pub fn frobenius_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.space != b.space {
        return Err(Error::Dimension(
            "distance between different spaces".into(),
        ));
    }
    Ok(frobenius_norm(&(&a.entries - &b.entries)))
}

// ---------------------------------------------------------------------------
// State-string mini-grammar (CLI surface)
// ---------------------------------------------------------------------------

/// Parse a complex literal in `re`, `imj`, or `re+imj` form, e.g. `0.5`,
/// `-0.25j`, `0.3-0.2j`, `1e-3+2.5j`, `j`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    let parse_real = |x: &str| -> Result<f64> {
        x.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("invalid number `{x}` in `{s}`")))
    };
    if let Some(body) = t.strip_suffix(['j', 'J']) {
        // Find the split between real and imaginary parts: the last +/- that
        // is not a leading sign and not part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let ch = bytes[i] as char;
            if ch == '+' || ch == '-' {
                let prev = bytes[i - 1] as char;
                if prev != 'e' && prev != 'E' {
                    split = Some(i);
                    break;
                }
            }
        }
        let (re_str, im_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let re = if re_str.is_empty() { 0.0 } else { parse_real(re_str)? };
        let im = match im_str.trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => parse_real(other)?,
        };
        Ok(c64(re, im))
    } else {
        Ok(c64(parse_real(t)?, 0.0))
    }
}

/// Parse a bracketed comma-separated list of complex literals, e.g.
/// `[0.70710678, -0.70710678, 0]`.
pub fn parse_complex_list(s: &str) -> Result<Vec<C64>> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected a bracketed list, got `{s}`")))?;
    let items: Vec<&str> = inner
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .collect();
    if items.is_empty() {
        return Err(Error::Parse("empty list".into()));
    }
    items.iter().map(|x| parse_complex(x)).collect()
}

/// Parse a state string:
///
/// - `eta:[q1,q2,...]` — single-excitation superposition with the given
///   complex amplitudes (normalized within 1e-10),
/// - `w:n` — the n-atom W state,
/// - `ground:n` — the n-atom ground state,
/// - `basis:bitstring` — a computational basis state, first character =
///   site 0,
/// - `singlet:n:i:k` — singlet on sites (i, k) of n atoms (0-indexed),
///   ground elsewhere.
pub fn parse_state(spec: &str) -> Result<StateVector> {
    let t = spec.trim();
    let (head, rest) = t
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("state spec `{t}` has no `:`")))?;
    match head.trim() {
        "eta" => {
            let q = parse_complex_list(rest)?;
            make_eta(&q)
        }
        "w" => {
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid atom count `{rest}`")))?;
            make_w(n)
        }
        "ground" => {
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid atom count `{rest}`")))?;
            ground_state(n)
        }
        "basis" => {
            let bits = rest.trim();
            if bits.is_empty() || !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::Parse(format!("invalid bitstring `{bits}`")));
            }
            let n = bits.len();
            let occ: Vec<usize> = bits.chars().map(|c| (c == '1') as usize).collect();
            basis_state(&SpaceLabel::atoms(n), &occ)
        }
        "singlet" => {
            let parts: Vec<&str> = rest.split(':').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!(
                    "singlet spec needs `singlet:n:i:k`, got `{t}`"
                )));
            }
            let nums: Result<Vec<usize>> = parts
                .iter()
                .map(|p| {
                    p.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("invalid integer `{p}` in `{t}`")))
                })
                .collect();
            let nums = nums?;
            make_singlet_embedding(nums[0], nums[1], nums[2])
        }
        other => Err(Error::Parse(format!("unknown state kind `{other}`"))),
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_permutation, random_q, random_zsa_q, rng_from_seed};
    use approx::assert_abs_diff_eq;

    fn cr(re: f64) -> C64 {
        c64(re, 0.0)
    }

    fn max_abs(m: &Array2<C64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn basis_state_single_qubit() {
        let s = basis_state(&SpaceLabel::atoms(1), &[0]).unwrap();
        assert_eq!(s.amplitudes[0], cr(1.0));
        assert_eq!(s.amplitudes[1], cr(0.0));
    }

    #[test]
    fn basis_state_two_qubits_orders_site_zero_most_significant() {
        let s = basis_state(&SpaceLabel::atoms(2), &[1, 0]).unwrap();
        // |10⟩ has binary index 10 = 2.
        assert_eq!(s.amplitudes[2], cr(1.0));
        assert_eq!(s.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>(), 1.0);
    }

    #[test]
    fn basis_state_ground_of_three() {
        let s = basis_state(&SpaceLabel::atoms(3), &[0, 0, 0]).unwrap();
        assert_eq!(s.amplitudes[0], cr(1.0));
        assert!(basis_state(&SpaceLabel::atoms(3), &[0, 2, 0]).is_err());
    }

    #[test]
    fn eta_with_uniform_amplitudes_is_the_w_state() {
        for n in 2..=5 {
            let q = vec![cr(1.0 / (n as f64).sqrt()); n];
            let eta = make_eta(&q).unwrap();
            let w = make_w(n).unwrap();
            let overlap = eta.inner(&w).unwrap();
            assert_abs_diff_eq!(overlap.re, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(overlap.im, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn eta_zero_sum_example() {
        let r = 1.0 / 2f64.sqrt();
        let eta = make_eta(&[cr(r), cr(-r), cr(0.0)]).unwrap();
        let sum: C64 = [cr(r), cr(-r), cr(0.0)].iter().sum();
        assert!(sum.norm() < 1e-15);
        assert!(eta.normalized);
    }

    #[test]
    fn eta_of_two_uniform_is_the_triplet_bell_state() {
        let r = 1.0 / 2f64.sqrt();
        let eta = make_eta(&[cr(r), cr(r)]).unwrap();
        // (|10⟩ + |01⟩)/√2: amplitudes at indices 2 and 1.
        assert_abs_diff_eq!(eta.amplitudes[1].re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(eta.amplitudes[2].re, r, epsilon = 1e-15);
    }

    #[test]
    fn eta_rejects_bad_input() {
        assert!(matches!(
            make_eta(&[cr(1.0), cr(1.0)]),
            Err(Error::Normalization(_))
        ));
        assert!(matches!(make_eta(&[cr(1.0)]), Err(Error::Size(_))));
    }

    #[test]
    fn w_state_of_one_atom_is_the_excited_state() {
        let w = make_w(1).unwrap();
        assert_eq!(w.amplitudes[1], cr(1.0));
        assert!(make_w(0).is_err());
    }

    #[test]
    fn w4_total_momentum_expectation() {
        // ⟨W₄|J²|W₄⟩ = (n/2)(n/2+1) = 6 for the fully symmetric sector.
        let w = make_w(4).unwrap();
        let ops = collective_ops(4).unwrap();
        let val = w.expectation(&ops.j_squared).unwrap();
        assert_abs_diff_eq!(val.re, 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(val.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn singlet_of_two_atoms() {
        let s = make_singlet_embedding(2, 0, 1).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert_abs_diff_eq!(s.amplitudes[1].re, r, epsilon = 1e-15); // |01⟩
        assert_abs_diff_eq!(s.amplitudes[2].re, -r, epsilon = 1e-15); // |10⟩
        assert!(make_singlet_embedding(2, 0, 0).is_err());
    }

    #[test]
    fn pair_collective_operators_annihilate_an_embedded_singlet() {
        // The two-site collective operators of the pair (0, 1) kill the
        // singlet sitting on those sites, whatever the rest of the register
        // holds.
        let space = SpaceLabel::atoms(3);
        let s = make_singlet_embedding(3, 0, 1).unwrap();
        let pair_lower = site_lower(&space, 0).unwrap() + site_lower(&space, 1).unwrap();
        let pair_raise = site_raise(&space, 0).unwrap() + site_raise(&space, 1).unwrap();
        let lowered = pair_lower.dot(&s.amplitudes);
        let raised = pair_raise.dot(&s.amplitudes);
        assert!(lowered.iter().map(|z| z.norm()).sum::<f64>() < 1e-14);
        assert!(raised.iter().map(|z| z.norm()).sum::<f64>() < 1e-14);
    }

    #[test]
    fn singlet_expansion_reconstructs_eta_under_zero_sum() {
        // √2 Σ_{k≥1} q_k · singlet(0,k) ⊗ ground = eta(q) exactly when
        // Σ_k q_k = 0 (0-indexed sites; the sum runs over partners of site 0).
        let mut rng = rng_from_seed(17);
        for n in 3..=6 {
            for _ in 0..5 {
                let q = random_zsa_q(&mut rng, n);
                let eta = make_eta(&q).unwrap();
                let mut acc: Array1<C64> = Array1::zeros(1 << n);
                for k in 1..n {
                    let s = make_singlet_embedding(n, 0, k).unwrap();
                    acc = acc + s.amplitudes.mapv(|z| z * q[k] * c64(2f64.sqrt(), 0.0));
                }
                let diff: f64 = acc
                    .iter()
                    .zip(eta.amplitudes.iter())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                assert!(diff < 1e-12, "n={n}: max deviation {diff}");
            }
        }
    }

    #[test]
    fn collective_ops_single_atom() {
        let ops = collective_ops(1).unwrap();
        assert_eq!(ops.r_plus[(1, 0)], cr(1.0));
        assert_eq!(ops.r_plus[(0, 1)], cr(0.0));
        assert_eq!(ops.r3[(0, 0)], cr(-1.0));
        assert_eq!(ops.r3[(1, 1)], cr(1.0));
        assert!(collective_ops(0).is_err());
        assert!(collective_ops(MAX_COLLECTIVE_N + 1).is_err());
    }

    #[test]
    fn collective_ops_annihilate_the_singlet() {
        let ops = collective_ops(2).unwrap();
        let s = make_singlet_embedding(2, 0, 1).unwrap();
        let rm = ops.r_minus.dot(&s.amplitudes);
        let r3 = ops.r3.dot(&s.amplitudes);
        assert!(rm.iter().map(|z| z.norm()).sum::<f64>() < 1e-14);
        assert!(r3.iter().map(|z| z.norm()).sum::<f64>() < 1e-14);
    }

    #[test]
    fn zero_sum_eta_is_a_total_momentum_eigenstate() {
        // J² η = j(j+1) η with j = n/2 − 1 = 1/2 for n = 3.
        let r = 1.0 / 2f64.sqrt();
        let eta = make_eta(&[cr(r), cr(-r), cr(0.0)]).unwrap();
        let ops = collective_ops(3).unwrap();
        let jsq_eta = ops.j_squared.dot(&eta.amplitudes);
        let expect = eta.amplitudes.mapv(|z| z * cr(0.75));
        let dev: f64 = jsq_eta
            .iter()
            .zip(expect.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-12);
    }

    #[test]
    fn momentum_algebra_closes_for_small_registers() {
        for n in 1..=6 {
            let ops = collective_ops(n).unwrap();
            let comm = |a: &Array2<C64>, b: &Array2<C64>| a.dot(b) - b.dot(a);
            let i = c64(0.0, 1.0);
            let c12 = comm(&ops.j1, &ops.j2) - ops.j3.mapv(|z| z * i);
            let c23 = comm(&ops.j2, &ops.j3) - ops.j1.mapv(|z| z * i);
            let c31 = comm(&ops.j3, &ops.j1) - ops.j2.mapv(|z| z * i);
            assert!(max_abs(&c12) < 1e-12, "n={n}");
            assert!(max_abs(&c23) < 1e-12, "n={n}");
            assert!(max_abs(&c31) < 1e-12, "n={n}");
            // R₋ is the adjoint of R₊ and R₃ has integer spectrum −n..n.
            let adj = &ops.r_plus.t().mapv(|z| z.conj()) - &ops.r_minus;
            assert!(max_abs(&adj) < 1e-15);
            for b in 0..(1usize << n) {
                let e = ops.r3[(b, b)].re;
                assert!(e.fract() == 0.0 && e.abs() <= n as f64);
            }
        }
    }

    #[test]
    fn collective_operators_are_permutation_invariant() {
        let mut rng = rng_from_seed(23);
        for n in 2..=6 {
            let ops = collective_ops(n).unwrap();
            for _ in 0..4 {
                let perm = random_permutation(&mut rng, n);
                let p = permutation_operator(n, &perm).unwrap();
                let pdag = p.t().mapv(|z| z.conj());
                for (name, op) in [("r_plus", &ops.r_plus), ("r_minus", &ops.r_minus), ("r3", &ops.r3)] {
                    let conj = p.dot(op).dot(&pdag);
                    let dev = max_abs(&(&conj - op));
                    assert!(dev < 1e-12, "n={n} {name} perm={perm:?}: {dev}");
                }
            }
        }
    }

    #[test]
    fn momentum_expectation_separates_the_zero_sum_sector() {
        // ⟨η|J²|η⟩ = (n/2−1)(n/2) + |Σq_k|²: the value (n/2−1)(n/2) is hit
        // exactly when the amplitudes sum to zero, and the uniform W state
        // gives (n/2)(n/2+1).
        let mut rng = rng_from_seed(31);
        for n in 2..=6 {
            let ops = collective_ops(n).unwrap();
            let base = (n as f64 / 2.0 - 1.0) * (n as f64 / 2.0);
            for _ in 0..6 {
                let q = random_q(&mut rng, n);
                let qsum: C64 = q.iter().sum();
                let eta = make_eta(&q).unwrap();
                let val = eta.expectation(&ops.j_squared).unwrap();
                assert_abs_diff_eq!(val.re, base + qsum.norm_sqr(), epsilon = 1e-12);
            }
            let w = make_w(n).unwrap();
            let val = w.expectation(&ops.j_squared).unwrap();
            assert_abs_diff_eq!(
                val.re,
                (n as f64 / 2.0) * (n as f64 / 2.0 + 1.0),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn permutation_operator_identity_and_swap() {
        let id = permutation_operator(3, &[0, 1, 2]).unwrap();
        for b in 0..8 {
            assert_eq!(id[(b, b)], cr(1.0));
        }
        let swap = permutation_operator(2, &[1, 0]).unwrap();
        let s = make_singlet_embedding(2, 0, 1).unwrap();
        let swapped = swap.dot(&s.amplitudes);
        let dev: f64 = swapped
            .iter()
            .zip(s.amplitudes.iter())
            .map(|(a, b)| (a + b).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-15, "swap must negate the singlet");
        assert!(permutation_operator(3, &[0, 0, 2]).is_err());
        assert!(permutation_operator(3, &[0, 1]).is_err());
    }

    #[test]
    fn permutations_conjugate_collective_raising_to_itself() {
        for n in 2..=4 {
            let ops = collective_ops(n).unwrap();
            // All transpositions generate the group; checking them plus one
            // cycle covers representative cases exactly.
            let mut perms: Vec<Vec<usize>> = Vec::new();
            for i in 0..n {
                for k in (i + 1)..n {
                    let mut p: Vec<usize> = (0..n).collect();
                    p.swap(i, k);
                    perms.push(p);
                }
            }
            let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            perms.push(cycle);
            for perm in perms {
                let p = permutation_operator(n, &perm).unwrap();
                let pdag = p.t().mapv(|z| z.conj());
                let conj = p.dot(&ops.r_plus).dot(&pdag);
                assert!(max_abs(&(&conj - &ops.r_plus)) < 1e-13);
            }
        }
    }

    #[test]
    fn partial_trace_of_a_product_state_returns_the_factor() {
        let space = SpaceLabel::atoms(2);
        // ρ_a ⊗ ρ_b with ρ_a pure |1⟩⟨1| and ρ_b maximally mixed.
        let mut m = Array2::zeros((4, 4));
        m[(2, 2)] = cr(0.5);
        m[(3, 3)] = cr(0.5);
        let rho = DensityMatrix::new(space, m).unwrap();
        let a = partial_trace(&rho, &[0]).unwrap();
        assert_abs_diff_eq!(a.entries[(1, 1)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a.entries[(0, 0)].re, 0.0, epsilon = 1e-15);
        let b = partial_trace(&rho, &[1]).unwrap();
        assert_abs_diff_eq!(b.entries[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b.entries[(1, 1)].re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn partial_trace_of_the_singlet_is_maximally_mixed() {
        let s = make_singlet_embedding(2, 0, 1).unwrap();
        let rho = s.to_density().unwrap();
        let red = partial_trace(&rho, &[0]).unwrap();
        assert_abs_diff_eq!(red.entries[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(red.entries[(1, 1)].re, 0.5, epsilon = 1e-15);
        assert!(red.entries[(0, 1)].norm() < 1e-15);
        assert!(partial_trace(&rho, &[]).is_err());
    }

    #[test]
    fn partial_trace_preserves_trace_and_hermiticity() {
        let mut rng = rng_from_seed(41);
        let space = SpaceLabel::atoms_with_mode(2, 2);
        for _ in 0..10 {
            let m = crate::sampling::random_density(&mut rng, space.dim());
            let rho = DensityMatrix::new(space.clone(), m).unwrap();
            for keep in [vec![0usize], vec![0, 1], vec![2], vec![1, 2]] {
                let red = partial_trace(&rho, &keep).unwrap();
                assert!((red.trace().re - 1.0).abs() < 1e-12);
                assert!(red.trace().im.abs() < 1e-12);
                assert!(red.hermiticity_residual() < 1e-12);
            }
        }
    }

    #[test]
    fn fidelity_and_purity_basics() {
        let psi = make_w(3).unwrap();
        let rho = psi.to_density().unwrap();
        assert_abs_diff_eq!(fidelity(&psi, &rho).unwrap(), 1.0, epsilon = 1e-14);
        let mixed = DensityMatrix::maximally_mixed(SpaceLabel::atoms(1));
        assert_abs_diff_eq!(purity(&mixed), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn trace_distance_of_orthogonal_pure_states_is_one() {
        let a = basis_state(&SpaceLabel::atoms(1), &[0]).unwrap().to_density().unwrap();
        let b = basis_state(&SpaceLabel::atoms(1), &[1]).unwrap().to_density().unwrap();
        assert_abs_diff_eq!(trace_distance(&a, &b).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(trace_distance(&a, &a).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(frobenius_distance(&a, &b).unwrap(), 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn density_matrix_validation_rejects_unphysical_input() {
        let space = SpaceLabel::atoms(1);
        let mut not_unit_trace = Array2::zeros((2, 2));
        not_unit_trace[(0, 0)] = cr(0.7);
        not_unit_trace[(1, 1)] = cr(0.7);
        assert!(DensityMatrix::new(space.clone(), not_unit_trace).is_err());

        let mut not_hermitian = Array2::zeros((2, 2));
        not_hermitian[(0, 0)] = cr(1.0);
        not_hermitian[(0, 1)] = cr(0.5);
        assert!(DensityMatrix::new(space.clone(), not_hermitian).is_err());

        let mut negative = Array2::zeros((2, 2));
        negative[(0, 0)] = cr(1.5);
        negative[(1, 1)] = cr(-0.5);
        assert!(DensityMatrix::new(space, negative).is_err());
    }

    #[test]
    fn state_vector_normalized_flag_and_rescaling() {
        let space = SpaceLabel::atoms(1);
        let sv = StateVector::new(space.clone(), Array1::from(vec![cr(0.6), cr(0.8)])).unwrap();
        assert!(sv.normalized);
        let sv = StateVector::new(space, Array1::from(vec![cr(1.0), cr(1.0)])).unwrap();
        assert!(!sv.normalized);
        assert!(sv.to_density().is_err());
        let sv = sv.normalize().unwrap();
        assert!(sv.normalized);
        assert_abs_diff_eq!(sv.norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn symmetric_unnormalized_vector_scales_the_w_state() {
        for n in 1..=5 {
            let sym = symmetric_unnormalized(n).unwrap();
            assert!(!sym.normalized || n == 1);
            assert_abs_diff_eq!(sym.norm(), (n as f64).sqrt(), epsilon = 1e-14);
        }
    }

    #[test]
    fn embed_operator_matches_direct_construction() {
        let space = SpaceLabel::atoms_with_mode(1, 2);
        let c = annihilator_on(&space).unwrap();
        // Basis |a, m⟩ with atom most significant: index = 3a + m.
        assert_abs_diff_eq!(c[(0, 1)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c[(1, 2)].re, 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(c[(3, 4)].re, 1.0, epsilon = 1e-15);
        assert!(c[(0, 2)].norm() < 1e-15);
    }

    #[test]
    fn collective_builders_match_dense_collective_ops() {
        let space = SpaceLabel::atoms(3);
        let ops = collective_ops(3).unwrap();
        let rp = collective_raising_on(&space).unwrap();
        let r3 = collective_r3_on(&space).unwrap();
        assert!(max_abs(&(&rp - &ops.r_plus)) < 1e-15);
        assert!(max_abs(&(&r3 - &ops.r3)) < 1e-15);
    }

    #[test]
    fn complex_literal_parsing() {
        assert_eq!(parse_complex("0.5").unwrap(), cr(0.5));
        assert_eq!(parse_complex("-2").unwrap(), cr(-2.0));
        assert_eq!(parse_complex("0.5j").unwrap(), c64(0.0, 0.5));
        assert_eq!(parse_complex("-j").unwrap(), c64(0.0, -1.0));
        assert_eq!(parse_complex("j").unwrap(), c64(0.0, 1.0));
        assert_eq!(parse_complex("0.3+0.2j").unwrap(), c64(0.3, 0.2));
        assert_eq!(parse_complex("0.3-0.2j").unwrap(), c64(0.3, -0.2));
        assert_eq!(parse_complex("1e-3+2.5j").unwrap(), c64(1e-3, 2.5));
        assert_eq!(parse_complex("-1.5e2-2e-1j").unwrap(), c64(-150.0, -0.2));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn state_spec_grammar() {
        let r = 1.0 / 2f64.sqrt();
        let eta = parse_state(&format!("eta:[{r}, -{r}, 0]")).unwrap();
        assert_eq!(eta.space, SpaceLabel::atoms(3));
        let w = parse_state("w:4").unwrap();
        let expect = make_w(4).unwrap();
        assert!((w.inner(&expect).unwrap().re - 1.0).abs() < 1e-14);
        let g = parse_state("ground:3").unwrap();
        assert_eq!(g.amplitudes[0], cr(1.0));
        let b = parse_state("basis:010").unwrap();
        assert_eq!(b.amplitudes[0b010], cr(1.0));
        let s = parse_state("singlet:3:0:2").unwrap();
        let expect = make_singlet_embedding(3, 0, 2).unwrap();
        assert!((s.inner(&expect).unwrap().re - 1.0).abs() < 1e-14);
        assert!(parse_state("nope:3").is_err());
        assert!(parse_state("w").is_err());
        assert!(parse_state("basis:012").is_err());
    }
}
