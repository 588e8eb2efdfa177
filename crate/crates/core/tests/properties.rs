//! Randomized invariants spanning several modules: conservation laws of the
//! generators, positivity at the squeezing boundary, round trips of the
//! parsing and coefficient-extraction layers, and the symmetries of the
//! memory protocol.

use proptest::prelude::*;

use collective_decay::analytic::absd_closed_form;
use collective_decay::dfs::{dicke_estimate, symmetry_conserved, zsa_check};
use collective_decay::dynamics::{absd_extract, evolve_grid, IntegratorConfig};
use collective_decay::hilbert::{make_eta, parse_complex, DensityMatrix, SpaceLabel};
use collective_decay::liouvillian::{
    assemble_full, dissipator_cavity, dissipator_collective, dissipator_single_atom,
    vacuum_collective, Generator, ModelParams, ThermostatParams,
};
use collective_decay::memory::{memory_cycle, swap_evolve, MemoryConfig};
use collective_decay::sampling::{
    random_density, random_permutation, random_q, random_unit_vector, random_zsa_q, rng_from_seed,
};
use collective_decay::{C64, Error};

fn trace_of(m: &ndarray::Array2<C64>) -> C64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

fn hermiticity_residual(m: &ndarray::Array2<C64>) -> f64 {
    let mut max = 0.0_f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            max = max.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    max
}

/// Trace and Hermiticity preservation for every generator family, checked
/// on 200 random Hermitian unit-trace matrices each (not necessarily
/// positive, so the linear structure itself is exercised).
#[test]
fn generator_families_preserve_trace_and_hermiticity() {
    let boundary = ThermostatParams::new(1.0, C64::from_polar(2.0_f64.sqrt(), 0.7)).unwrap();
    let squeezed = ThermostatParams::new(0.6, C64::from_polar(0.55, -1.2)).unwrap();
    let model = ModelParams {
        n: 2,
        g: 0.15,
        delta: 60.0,
        k_sq: 1e-4,
        gamma_sq: 0.7,
        kappa: 1.2,
        cavity_cutoff: 2,
    };
    let gens: Vec<Generator> = vec![
        vacuum_collective(3, 1.0).unwrap(),
        dissipator_collective(2, &boundary, 0.8).unwrap(),
        dissipator_single_atom(2, 0, &ThermostatParams::thermal(0.5).unwrap(), 0.4).unwrap(),
        dissipator_cavity(&squeezed, 0.9, 3).unwrap(),
        assemble_full(&model, &squeezed).unwrap(),
    ];
    let mut rng = rng_from_seed(0x200);
    for gen in &gens {
        let dim = gen.space().dim();
        for _ in 0..200 {
            let rho = collective_decay::sampling::random_hermitian_unit_trace(&mut rng, dim);
            let image = gen.apply(&rho).unwrap();
            assert!(trace_of(&image).norm() <= 1e-10, "dim {dim}: trace leak");
            assert!(
                hermiticity_residual(&image) <= 1e-10,
                "dim {dim}: Hermiticity broken"
            );
        }
    }
}

/// At the maximal-squeezing boundary |M| = √(N(N+1)) the Kossakowski matrix
/// is singular; short-time propagation must still keep states (numerically)
/// positive.
#[test]
fn saturated_squeezing_keeps_short_time_positivity() {
    let mut rng = rng_from_seed(0x905);
    for (n_occ, phase) in [(0.3, 0.0), (1.0, 1.1), (2.0, -2.4)] {
        let m = C64::from_polar((n_occ * (n_occ + 1.0_f64)).sqrt(), phase);
        let bath = ThermostatParams::new(n_occ, m).unwrap();
        for n in [2usize, 3] {
            let gen = dissipator_collective(n, &bath, 1.0).unwrap();
            let space = SpaceLabel::atoms(n);
            for _ in 0..10 {
                let rho0 =
                    DensityMatrix::new(space.clone(), random_density(&mut rng, space.dim()))
                        .unwrap();
                let traj =
                    evolve_grid(&gen, &rho0, &[0.02, 0.08, 0.25], &IntegratorConfig::default())
                        .unwrap();
                for state in &traj.states {
                    let min_eig = state.min_eigenvalue().unwrap();
                    assert!(
                        min_eig >= -1e-7,
                        "N = {n_occ}, n = {n}: eigenvalue {min_eig:.3e}"
                    );
                }
            }
        }
    }
}

/// Collective channels commute with every site permutation, so all
/// permutation expectations are constants of motion from any initial state;
/// the check runs over vacuum, thermal, and squeezed baths.
#[test]
fn permutation_expectations_are_conserved_by_collective_channels() {
    let baths = [
        ThermostatParams::vacuum(),
        ThermostatParams::thermal(0.8).unwrap(),
        ThermostatParams::new(0.5, C64::from_polar(0.6, 0.9)).unwrap(),
    ];
    let grid = [0.4, 1.0, 2.2, 4.0];
    let mut rng = rng_from_seed(0x7e57);
    for n in 2..=4usize {
        let space = SpaceLabel::atoms(n);
        for bath in &baths {
            let gen = dissipator_collective(n, bath, 1.1).unwrap();
            for _ in 0..2 {
                let rho0 =
                    DensityMatrix::new(space.clone(), random_density(&mut rng, space.dim()))
                        .unwrap();
                let report = symmetry_conserved(&gen, &rho0, &grid).unwrap();
                assert!(
                    report.max_drift <= 1e-8,
                    "n = {n}: drift {:.3e}",
                    report.max_drift
                );
            }
        }
    }
}

/// The read-out fidelity of a full memory cycle only depends on the stored
/// pattern through collective quantities, so relabeling the sites (and the
/// amplitudes with them) cannot change it.
#[test]
fn read_fidelity_is_invariant_under_site_relabeling() {
    let mut rng = rng_from_seed(0xbead);
    for n in [2usize, 3] {
        let q = random_q(&mut rng, n);
        let config =
            MemoryConfig::standard(n, 1.4, 0.4, ThermostatParams::vacuum(), 1.0).unwrap();
        let reference = memory_cycle(&config, &q).unwrap();
        for _ in 0..3 {
            let perm = random_permutation(&mut rng, n);
            let relabeled: Vec<C64> = (0..n).map(|k| q[perm[k]]).collect();
            let report = memory_cycle(&config, &relabeled).unwrap();
            assert!(
                (report.read_fidelity - reference.read_fidelity).abs() <= 1e-10,
                "n = {n}, perm {perm:?}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The bath parameters form a disc |M|² ≤ N(N+1): scaled interior
    /// points are accepted, points pushed beyond the boundary are rejected
    /// as unphysical.
    #[test]
    fn thermostat_correlation_bound(
        n_occ in 0.0..4.0f64,
        phase in -std::f64::consts::PI..std::f64::consts::PI,
        scale in 0.0..1.0f64,
    ) {
        let bound = n_occ * (n_occ + 1.0);
        let inside = C64::from_polar((scale * bound).sqrt(), phase);
        prop_assert!(ThermostatParams::new(n_occ, inside).is_ok());

        let outside = C64::from_polar((bound + 0.01 * (1.0 + bound)).sqrt(), phase);
        let rejected = ThermostatParams::new(n_occ, outside);
        prop_assert!(matches!(rejected, Err(Error::Physicality(_))));
    }

    /// Extraction inverts the embedding of the decay-sector coefficients
    /// for arbitrary amplitudes, rates, and times.
    #[test]
    fn coefficient_extraction_inverts_the_embedding(
        seed in 0u64..1 << 48,
        n in 2usize..=5,
        kappa in 0.1..2.5f64,
        t in 0.0..6.0f64,
    ) {
        let q = random_q(&mut rng_from_seed(seed), n);
        let state = absd_closed_form(&q, kappa, t).unwrap();
        let rho = collective_decay::analytic::absd_to_density(&state, &q).unwrap();
        let extracted = absd_extract(&rho, &q, kappa).unwrap();
        prop_assert!((extracted.a - state.a).norm() <= 1e-8);
        prop_assert!((extracted.b - state.b).abs() <= 1e-8);
        prop_assert!((extracted.s - state.s).abs() <= 1e-8);
        prop_assert!((extracted.d - state.d).abs() <= 1e-8);
    }

    /// Complex literals survive a print/parse round trip exactly.
    #[test]
    fn complex_literal_roundtrip(
        re in prop::num::f64::NORMAL | prop::num::f64::ZERO,
        im in prop::num::f64::NORMAL | prop::num::f64::ZERO,
    ) {
        let text = format!("{re:e}{im:+e}j");
        let parsed = parse_complex(&text).unwrap();
        prop_assert_eq!(parsed.re, re);
        prop_assert_eq!(parsed.im, im);

        let real_only = format!("{re:e}");
        let parsed_real = parse_complex(&real_only).unwrap();
        prop_assert_eq!(parsed_real.re, re);
        prop_assert_eq!(parsed_real.im, 0.0);
    }

    /// The write/read exchange is unitary and conserves the total
    /// excitation number for any register size, coupling, and duration.
    #[test]
    fn swap_rotations_preserve_norm_and_excitation(
        seed in 0u64..1 << 48,
        n in 1usize..=3,
        f in 0.2..3.0f64,
        t in 0.0..8.0f64,
    ) {
        let space = SpaceLabel::atoms_with_photon_qubits(n);
        let mut rng = rng_from_seed(seed);
        let psi0 = collective_decay::hilbert::StateVector::new(
            space.clone(),
            random_unit_vector(&mut rng, space.dim()),
        )
        .unwrap();
        let psi = swap_evolve(&psi0, t, n, f).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() <= 1e-12);

        let excitation = |v: &collective_decay::hilbert::StateVector| -> f64 {
            v.amplitudes
                .iter()
                .enumerate()
                .map(|(b, amp)| amp.norm_sqr() * b.count_ones() as f64)
                .sum()
        };
        prop_assert!((excitation(&psi) - excitation(&psi0)).abs() <= 1e-12);
    }

    /// The zero-sum sampler always produces amplitudes in the dark Dicke
    /// sector j = n/2 − 1.
    #[test]
    fn zero_sum_sampler_lands_in_the_dark_sector(
        seed in 0u64..1 << 48,
        n in 2usize..=6,
    ) {
        let q = random_zsa_q(&mut rng_from_seed(seed), n);
        prop_assert!(zsa_check(&q));
        let eta = make_eta(&q).unwrap();
        let estimate = dicke_estimate(&eta).unwrap();
        prop_assert!((estimate.j - (n as f64 / 2.0 - 1.0)).abs() <= 1e-6);
        prop_assert!(estimate.eigenstate);
    }
}
