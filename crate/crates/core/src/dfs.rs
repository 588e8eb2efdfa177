//! Decoherence-free-subspace detection and permutation-symmetry analysis.
//!
//! A pure state is *dark* for a generator when its dyad is a fixed point of
//! the flow, ‖gen(|ψ⟩⟨ψ|)‖ = 0. For purely dissipative generators the dark
//! states form the joint kernel of the canonical jump operators, and for
//! excitation-graded jumps (such as collective decay into the vacuum) that
//! kernel splits over excitation sectors, so [`dark_subspace`] computes the
//! kernel sector by sector through a Gram matrix. Collective channels leave
//! the particle-permutation expectations invariant; [`symmetry_conserved`]
//! measures that drift along a trajectory.

use ndarray::{Array1, Array2};
use serde::Serialize;

use crate::dynamics::{self, IntegratorConfig};
use crate::hilbert::{
    DensityMatrix, SpaceLabel, StateVector, c64, collective_ops, frobenius_norm,
    permutation_operator,
};
use crate::liouvillian::Generator;
use crate::{C64, Error, Result};

/// Largest total dimension accepted by [`dark_subspace`].
pub const MAX_DARK_DIM: usize = 256;

/// Zero-sum-amplitude tolerance for [`zsa_check`].
pub const ZSA_TOL: f64 = 1e-10;

/// Variance threshold above which a state is reported as a non-eigenstate
/// of the collective invariants.
pub const EIGENSTATE_TOL: f64 = 1e-8;

// ---------------------------------------------------------------------------
// Dark states
// ---------------------------------------------------------------------------

/// True iff the dyad of `psi` is annihilated by the generator within `tol`
/// in Frobenius norm.
pub fn is_dark(gen: &Generator, psi: &StateVector, tol: f64) -> Result<bool> {
    if psi.space != *gen.space() {
        return Err(Error::Dimension(
            "state and generator act on different spaces".into(),
        ));
    }
    if !(tol >= 0.0) {
        return Err(Error::Domain(format!(
            "darkness tolerance must be non-negative, got {tol}"
        )));
    }
    let rho = psi.to_density()?;
    let dot = gen.apply(&rho.entries)?;
    Ok(frobenius_norm(&dot) <= tol)
}

fn sector_indices(space: &SpaceLabel, sector: Option<usize>) -> Result<Vec<usize>> {
    let dim = space.dim();
    match sector {
        None => Ok((0..dim).collect()),
        Some(excitation) => {
            if !space.is_qubit_register() {
                return Err(Error::Domain(
                    "excitation sectors are defined on registers of two-level \
                     subsystems only"
                        .into(),
                ));
            }
            Ok((0..dim)
                .filter(|b| b.count_ones() as usize == excitation)
                .collect())
        }
    }
}

/// Orthonormal basis of the dark states of `gen`, optionally restricted to
/// one excitation sector (the span of computational basis states with the
/// given number of excited subsystems).
///
/// The basis is computed as the joint kernel of the canonical jump
/// operators, which characterizes darkness exactly for purely dissipative
/// generators. A Hamiltonian part can break that equivalence, so the
/// result is guarded by direct residual checks on every basis vector and
/// on random superpositions of them; if the guard fails the set of dark
/// states is not a subspace and a domain error is returned.
pub fn dark_subspace(gen: &Generator, sector: Option<usize>) -> Result<Vec<StateVector>> {
    let space = gen.space();
    let dim = space.dim();
    if dim > MAX_DARK_DIM {
        return Err(Error::Size(format!(
            "dark-subspace search restricted to dimension ≤ {MAX_DARK_DIM}, got {dim}"
        )));
    }
    let idx = sector_indices(space, sector)?;
    let m = idx.len();
    if m == 0 {
        return Ok(Vec::new());
    }

    // Gram matrix of the stacked jump columns: G = Σ_k λ_k B̃_k†B̃_k over
    // the sector columns. Its kernel is the joint kernel of the jumps.
    let jumps = gen.effective_jumps()?;
    let mut gram: Array2<C64> = Array2::zeros((m, m));
    for (b, lambda) in &jumps {
        let w = c64(*lambda, 0.0);
        for r in 0..dim {
            for (a, &ia) in idx.iter().enumerate() {
                let left = b[(r, ia)].conj() * w;
                if left.norm_sqr() == 0.0 {
                    continue;
                }
                for (bb, &ib) in idx.iter().enumerate() {
                    gram[(a, bb)] += left * b[(r, ib)];
                }
            }
        }
    }
    let (evals, evecs) = crate::linalg::eigh_pairs(&gram)?;
    let scale = evals.iter().fold(0.0_f64, |acc, &v| acc.max(v.abs()));
    let kernel_tol = 1e-9 * scale.max(1.0);
    let mut basis = Vec::new();
    for (lambda, v) in evals.iter().zip(evecs.iter()) {
        if *lambda > kernel_tol {
            continue;
        }
        let mut amplitudes: Array1<C64> = Array1::zeros(dim);
        for (a, &ia) in idx.iter().enumerate() {
            amplitudes[ia] = v[a];
        }
        basis.push(StateVector::new(space.clone(), amplitudes)?);
    }
    if basis.is_empty() {
        return Ok(basis);
    }

    // Residual guard: the kernel construction ignores the Hamiltonian, so
    // verify darkness directly for each basis vector and for a few random
    // superpositions spanning the candidate subspace.
    let h_scale = gen
        .hamiltonian()
        .map(frobenius_norm)
        .unwrap_or(0.0);
    let guard_tol = 1e-8 * (scale + h_scale).max(1.0);
    let mut probes: Vec<Array1<C64>> = basis.iter().map(|s| s.amplitudes.clone()).collect();
    let mut rng = crate::sampling::rng_from_seed(0x0df5);
    for _ in 0..3 {
        let coeffs = crate::sampling::random_unit_vector(&mut rng, basis.len());
        let mut v: Array1<C64> = Array1::zeros(dim);
        for (c, s) in coeffs.iter().zip(basis.iter()) {
            v.zip_mut_with(&s.amplitudes, |x, &a| *x += c * a);
        }
        probes.push(v);
    }
    for v in probes {
        let psi = StateVector::new(space.clone(), v)?;
        if !is_dark(gen, &psi, guard_tol)? {
            return Err(Error::Domain(
                "the Hamiltonian part moves states inside the dissipative \
                 kernel, so the dark states do not form a subspace"
                    .into(),
            ));
        }
    }
    Ok(basis)
}

// ---------------------------------------------------------------------------
// Zero-sum amplitudes and collective quantum numbers
// ---------------------------------------------------------------------------

/// True iff the single-excitation amplitudes sum to zero, |Σ_k q_k| ≤ 1e-10.
pub fn zsa_check(q: &[C64]) -> bool {
    let total: C64 = q.iter().sum();
    total.norm() <= ZSA_TOL
}

/// Collective quantum numbers of a register state together with the
/// variances that qualify them.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DickeEstimate {
    /// j from ⟨J²⟩ = j(j+1).
    pub j: f64,
    /// m = ⟨J₃⟩.
    pub m: f64,
    /// Variance of J² in the state.
    pub j_variance: f64,
    /// Variance of J₃ in the state.
    pub m_variance: f64,
    /// True iff both variances are at most [`EIGENSTATE_TOL`].
    pub eigenstate: bool,
}

/// Estimate (j, m) with explicit variance flags instead of an error, for
/// callers that want to inspect non-eigenstates.
pub fn dicke_estimate(psi: &StateVector) -> Result<DickeEstimate> {
    let space = &psi.space;
    if space.atom_count() != space.n_subsystems() {
        return Err(Error::Domain(
            "collective quantum numbers are defined on all-atom registers".into(),
        ));
    }
    if !psi.normalized {
        return Err(Error::Normalization(
            "collective quantum numbers need a normalized state".into(),
        ));
    }
    let ops = collective_ops(space.atom_count())?;
    let j2 = psi.expectation(&ops.j_squared)?.re;
    let j2_sq = psi.expectation(&ops.j_squared.dot(&ops.j_squared))?.re;
    let m = psi.expectation(&ops.j3)?.re;
    let m_sq = psi.expectation(&ops.j3.dot(&ops.j3))?.re;
    let j_variance = (j2_sq - j2 * j2).max(0.0);
    let m_variance = (m_sq - m * m).max(0.0);
    let j = 0.5 * ((1.0 + 4.0 * j2).max(0.0).sqrt() - 1.0);
    Ok(DickeEstimate {
        j,
        m,
        j_variance,
        m_variance,
        eigenstate: j_variance <= EIGENSTATE_TOL && m_variance <= EIGENSTATE_TOL,
    })
}

/// Collective quantum numbers (j, m) of a simultaneous eigenstate of J²
/// and J₃: j solves ⟨J²⟩ = j(j+1) and m = ⟨J₃⟩. States that are not
/// eigenstates of both operators (variance above [`EIGENSTATE_TOL`]) are
/// rejected; use [`dicke_estimate`] to inspect those.
pub fn dicke_numbers(psi: &StateVector) -> Result<(f64, f64)> {
    let est = dicke_estimate(psi)?;
    if !est.eigenstate {
        return Err(Error::Eigenstate(format!(
            "variances ({:.3e}, {:.3e}) exceed {:.1e}",
            est.j_variance, est.m_variance, EIGENSTATE_TOL
        )));
    }
    Ok((est.j, est.m))
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of permutation-symmetry copies of the spin-j multiplet in a
/// register of n two-level atoms: n_j = C(n, n/2+j) − C(n, n/2+j+1), with
/// out-of-range binomials counted as zero. `j` must lie in
/// {n/2, n/2−1, …, 0 or 1/2} (matching the parity of n/2).
pub fn dicke_degeneracy(n: usize, j: f64) -> Result<u128> {
    if n == 0 {
        return Err(Error::Size("register needs at least one atom".into()));
    }
    let two_j = (2.0 * j).round();
    if (2.0 * j - two_j).abs() > 1e-9 || two_j < 0.0 {
        return Err(Error::Domain(format!(
            "j must be a non-negative half-integer, got {j}"
        )));
    }
    let two_j = two_j as u64;
    let n64 = n as u64;
    if two_j > n64 || (n64 - two_j) % 2 != 0 {
        return Err(Error::Domain(format!(
            "j = {j} is not in the ladder n/2, n/2−1, … for n = {n}"
        )));
    }
    let upper = (n64 + two_j) / 2;
    Ok(binomial(n64, upper) - binomial(n64, upper + 1))
}

// ---------------------------------------------------------------------------
// Permutation-symmetry drift
// ---------------------------------------------------------------------------

/// Drift of one transposition expectation along the trajectory.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TranspositionDrift {
    /// Swapped sites.
    pub i: usize,
    pub k: usize,
    /// ⟨P_ik⟩ in the initial state.
    pub initial: f64,
    /// max_t |⟨P_ik⟩(t) − ⟨P_ik⟩(0)|.
    pub drift: f64,
}

/// Permutation-symmetry conservation report: the transpositions generate
/// the symmetric group, so zero drift for all of them certifies every
/// permutation expectation.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub n: usize,
    pub times: Vec<f64>,
    pub transpositions: Vec<TranspositionDrift>,
    pub max_drift: f64,
}

/// A dark-subspace basis in serializable form.
#[derive(Clone, Debug, Serialize)]
pub struct SubspaceReport {
    pub dimension: usize,
    /// Basis vectors as (re, im) amplitude pairs.
    pub vectors: Vec<Vec<(f64, f64)>>,
}

/// Serialize a basis as returned by [`dark_subspace`].
pub fn subspace_report(basis: &[StateVector]) -> SubspaceReport {
    SubspaceReport {
        dimension: basis.len(),
        vectors: basis
            .iter()
            .map(|s| s.amplitudes.iter().map(|z| (z.re, z.im)).collect())
            .collect(),
    }
}

/// Evolve `rho0` under an atomic-only generator, sampling at `t_grid`, and
/// report the worst drift of ⟨P⟩ over all transpositions P.
pub fn symmetry_conserved(
    gen: &Generator,
    rho0: &DensityMatrix,
    t_grid: &[f64],
) -> Result<SymmetryReport> {
    let space = gen.space();
    if space.atom_count() != space.n_subsystems() {
        return Err(Error::Domain(
            "permutation symmetry is defined on all-atom registers".into(),
        ));
    }
    let n = space.atom_count();
    if n < 2 {
        return Err(Error::Size(
            "permutation symmetry needs at least two atoms".into(),
        ));
    }
    let traj = dynamics::evolve_grid(gen, rho0, t_grid, &IntegratorConfig::default())?;
    let mut transpositions = Vec::new();
    let mut max_drift = 0.0_f64;
    for i in 0..n {
        for k in (i + 1)..n {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(i, k);
            let p = permutation_operator(n, &perm)?;
            let initial = traj.states[0].expectation(&p)?.re;
            let mut drift = 0.0_f64;
            for state in &traj.states[1..] {
                drift = drift.max((state.expectation(&p)?.re - initial).abs());
            }
            max_drift = max_drift.max(drift);
            transpositions.push(TranspositionDrift {
                i,
                k,
                initial,
                drift,
            });
        }
    }
    Ok(SymmetryReport {
        n,
        times: traj.times.clone(),
        transpositions,
        max_drift,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{
        excitation_index, ground_state, make_eta, make_singlet_embedding, make_w,
    };
    use crate::liouvillian::{ThermostatParams, dissipator_single_atom, vacuum_collective};
    use crate::sampling::{random_q, random_zsa_q, rng_from_seed};
    use ndarray::Array2;

    #[test]
    fn the_singlet_is_dark_but_the_w_state_is_not() {
        let gen2 = vacuum_collective(2, 1.0).unwrap();
        let singlet = make_singlet_embedding(2, 0, 1).unwrap();
        assert!(is_dark(&gen2, &singlet, 1e-10).unwrap());

        let gen3 = vacuum_collective(3, 1.0).unwrap();
        let w3 = make_w(3).unwrap();
        assert!(!is_dark(&gen3, &w3, 1e-10).unwrap());

        let mut rng = rng_from_seed(21);
        let eta5 = make_eta(&random_zsa_q(&mut rng, 5)).unwrap();
        let gen5 = vacuum_collective(5, 1.0).unwrap();
        assert!(is_dark(&gen5, &eta5, 1e-10).unwrap());
    }

    #[test]
    fn dark_states_in_the_single_excitation_sector_span_the_hyperplane() {
        for n in 2..=6usize {
            let gen = vacuum_collective(n, 1.0).unwrap();
            let basis = dark_subspace(&gen, Some(1)).unwrap();
            assert_eq!(basis.len(), n - 1, "n = {n}");
            for (a, psi) in basis.iter().enumerate() {
                // Orthonormality.
                for (b, phi) in basis.iter().enumerate() {
                    let olap = psi.inner(phi).unwrap();
                    let expected = if a == b { 1.0 } else { 0.0 };
                    assert!((olap.norm() - expected).abs() < 1e-12);
                }
                // Every vector is a zero-sum-amplitude state.
                let q: Vec<C64> = (0..n)
                    .map(|k| psi.amplitudes[excitation_index(n, k)])
                    .collect();
                assert!(zsa_check(&q), "n = {n}, vector {a}");
                assert!(is_dark(&gen, psi, 1e-12).unwrap());
            }
        }
    }

    #[test]
    fn two_atom_dark_states_without_sector_restriction() {
        // The whole kernel for two atoms: the ground state and the singlet.
        let gen = vacuum_collective(2, 1.0).unwrap();
        let basis = dark_subspace(&gen, None).unwrap();
        assert_eq!(basis.len(), 2);
        let singlet = make_singlet_embedding(2, 0, 1).unwrap();
        let ground = ground_state(2).unwrap();
        for target in [&singlet, &ground] {
            let best = basis
                .iter()
                .map(|b| b.inner(target).unwrap().norm())
                .fold(0.0_f64, f64::max);
            // Each target lies in the span: its projection has full norm.
            let proj: f64 = basis
                .iter()
                .map(|b| b.inner(target).unwrap().norm_sqr())
                .sum();
            assert!(proj > 1.0 - 1e-10, "projection {proj}, best overlap {best}");
        }
    }

    #[test]
    fn three_atom_zero_excitation_sector_is_the_ground_state() {
        let gen = vacuum_collective(3, 1.0).unwrap();
        let basis = dark_subspace(&gen, Some(0)).unwrap();
        assert_eq!(basis.len(), 1);
        let ground = ground_state(3).unwrap();
        assert!((basis[0].inner(&ground).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dark_vectors_stay_fixed_under_evolution() {
        let n = 4;
        let gen = vacuum_collective(n, 1.0).unwrap();
        let basis = dark_subspace(&gen, Some(1)).unwrap();
        for psi in &basis {
            let rho0 = psi.to_density().unwrap();
            let traj =
                dynamics::evolve(&gen, &rho0, 10.0, &IntegratorConfig::default()).unwrap();
            let fid = crate::hilbert::fidelity(psi, traj.last()).unwrap();
            assert!(fid > 1.0 - 1e-8, "fidelity {fid}");
        }
    }

    #[test]
    fn a_diagonal_hamiltonian_obstructs_mixed_sector_superpositions() {
        // R₃ phases the ground state and the singlet differently: each
        // remains individually dark, so the restricted sector passes, but
        // superpositions across sectors rotate and the unrestricted search
        // must refuse to return a basis.
        let n = 2;
        let space = SpaceLabel::atoms(n);
        let r3 = crate::hilbert::collective_r3_on(&space).unwrap();
        let ham = Generator::new(space.clone(), Some(r3), Vec::new()).unwrap();
        let gen = Generator::combine(vec![ham, vacuum_collective(n, 1.0).unwrap()]).unwrap();

        let sector = dark_subspace(&gen, Some(1)).unwrap();
        assert_eq!(sector.len(), 1);

        let err = dark_subspace(&gen, None).unwrap_err();
        assert!(matches!(err, Error::Domain(_)), "got {err:?}");
    }

    #[test]
    fn oversized_spaces_are_rejected() {
        let gen = vacuum_collective(9, 1.0).unwrap(); // dimension 512
        let err = dark_subspace(&gen, Some(1)).unwrap_err();
        assert!(matches!(err, Error::Size(_)), "got {err:?}");
    }

    #[test]
    fn zero_sum_check_matches_the_amplitude_sum() {
        let s = 1.0 / 2.0_f64.sqrt();
        assert!(zsa_check(&[c64(s, 0.0), c64(-s, 0.0), c64(0.0, 0.0)]));
        assert!(!zsa_check(&[c64(s, 0.0), c64(s, 0.0)]));
        // A cancellation with complex phases.
        assert!(zsa_check(&[
            c64(0.5, 0.5),
            c64(-0.5, 0.0),
            c64(0.0, -0.5)
        ]));
    }

    #[test]
    fn collective_quantum_numbers_of_reference_states() {
        let s = 1.0 / 2.0_f64.sqrt();
        let eta = make_eta(&[c64(s, 0.0), c64(-s, 0.0), c64(0.0, 0.0)]).unwrap();
        let (j, m) = dicke_numbers(&eta).unwrap();
        assert!((j - 0.5).abs() < 1e-9, "j = {j}");
        assert!((m + 0.5).abs() < 1e-12, "m = {m}");

        let w4 = make_w(4).unwrap();
        let (j, m) = dicke_numbers(&w4).unwrap();
        assert!((j - 2.0).abs() < 1e-9);
        assert!((m + 1.0).abs() < 1e-12);

        let g3 = ground_state(3).unwrap();
        let (j, m) = dicke_numbers(&g3).unwrap();
        assert!((j - 1.5).abs() < 1e-9);
        assert!((m + 1.5).abs() < 1e-12);
    }

    #[test]
    fn zero_sum_amplitudes_are_equivalent_to_the_lower_dicke_family() {
        for n in 2..=6usize {
            let mut rng = rng_from_seed(100 + n as u64);
            let target_j = n as f64 / 2.0 - 1.0;
            for trial in 0..100 {
                let q = if trial % 2 == 0 {
                    random_zsa_q(&mut rng, n)
                } else {
                    random_q(&mut rng, n)
                };
                let eta = make_eta(&q).unwrap();
                let est = dicke_estimate(&eta).unwrap();
                let is_zsa = zsa_check(&q);
                let j_matches = (est.j - target_j).abs() <= 1e-6;
                assert_eq!(is_zsa, j_matches, "n = {n}, trial {trial}, j = {}", est.j);
                if is_zsa {
                    assert!(est.eigenstate);
                    assert!((est.m - (1.0 - n as f64 / 2.0)).abs() < 1e-10);
                    dicke_numbers(&eta).unwrap();
                } else {
                    assert!(!est.eigenstate, "generic q must mix two j families");
                    let err = dicke_numbers(&eta).unwrap_err();
                    assert!(matches!(err, Error::Eigenstate(_)));
                }
            }
        }
    }

    #[test]
    fn multiplet_counts_match_the_binomial_formula() {
        assert_eq!(dicke_degeneracy(2, 1.0).unwrap(), 1);
        assert_eq!(dicke_degeneracy(2, 0.0).unwrap(), 1);
        assert_eq!(dicke_degeneracy(4, 1.0).unwrap(), 3);
        assert_eq!(dicke_degeneracy(3, 0.5).unwrap(), 2);
        assert_eq!(dicke_degeneracy(6, 0.0).unwrap(), 5);
    }

    #[test]
    fn multiplet_counts_resolve_the_identity() {
        for n in 1..=10usize {
            let mut total: u128 = 0;
            let mut two_j = (n % 2) as i64;
            while two_j <= n as i64 {
                let j = two_j as f64 / 2.0;
                total += dicke_degeneracy(n, j).unwrap() * (two_j as u128 + 1);
                two_j += 2;
            }
            assert_eq!(total, 1u128 << n, "n = {n}");
        }
    }

    #[test]
    fn invalid_multiplet_labels_are_rejected() {
        for (n, j) in [(3usize, 1.0), (3, -0.5), (3, 2.5), (4, 0.3), (2, 3.0)] {
            let err = dicke_degeneracy(n, j).unwrap_err();
            assert!(matches!(err, Error::Domain(_)), "n = {n}, j = {j}");
        }
    }

    #[test]
    fn collective_decay_conserves_permutation_expectations() {
        let mut rng = rng_from_seed(77);
        let q = random_q(&mut rng, 3);
        let rho0 = make_eta(&q).unwrap().to_density().unwrap();
        let gen = vacuum_collective(3, 1.0).unwrap();
        let report = symmetry_conserved(&gen, &rho0, &[0.0, 0.5, 1.0, 2.0]).unwrap();
        assert_eq!(report.transpositions.len(), 3);
        assert!(report.max_drift <= 1e-8, "drift {}", report.max_drift);
    }

    #[test]
    fn single_site_decay_breaks_the_symmetry() {
        let bath = ThermostatParams::vacuum();
        let gen = dissipator_single_atom(3, 0, &bath, 1.0).unwrap();
        let rho0 = make_w(3).unwrap().to_density().unwrap();
        let report = symmetry_conserved(&gen, &rho0, &[0.0, 0.5, 1.0]).unwrap();
        assert!(report.max_drift > 1e-3, "drift {}", report.max_drift);
    }

    #[test]
    fn the_zero_generator_has_zero_drift() {
        let gen = Generator::dissipative(SpaceLabel::atoms(2), Vec::new()).unwrap();
        let rho0 = make_w(2).unwrap().to_density().unwrap();
        let report = symmetry_conserved(&gen, &rho0, &[0.0, 1.0, 2.0]).unwrap();
        assert!(report.max_drift <= 1e-14, "drift {}", report.max_drift);
    }

    #[test]
    fn mode_spaces_are_rejected_by_the_symmetry_report() {
        let bath = ThermostatParams::vacuum();
        let gen = crate::liouvillian::dissipator_cavity(&bath, 1.0, 2).unwrap();
        let dim = gen.space().dim();
        let mut entries: Array2<C64> = Array2::zeros((dim, dim));
        entries[(0, 0)] = c64(1.0, 0.0);
        let rho0 = DensityMatrix::new(gen.space().clone(), entries).unwrap();
        let err = symmetry_conserved(&gen, &rho0, &[0.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::Domain(_)), "got {err:?}");
    }

    #[test]
    fn report_serialization_round_trips() {
        let gen = vacuum_collective(2, 1.0).unwrap();
        let basis = dark_subspace(&gen, Some(1)).unwrap();
        let sub = subspace_report(&basis);
        let text = serde_json::to_string(&sub).unwrap();
        assert!(text.contains("\"dimension\":1"));

        let rho0 = make_w(2).unwrap().to_density().unwrap();
        let report = symmetry_conserved(&gen, &rho0, &[0.0, 1.0]).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains("max_drift"));
    }
}
