//! Seeded random generation of states, amplitude vectors, and density
//! matrices.
//!
//! Everything here is deterministic given a seed, so property tests and CLI
//! runs are exactly reproducible. The zero-sum-amplitude (ZSA) sampler
//! projects a random complex vector onto the Σ_k q_k = 0 hyperplane before
//! normalizing.

use ndarray::{Array1, Array2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::C64;

/// Deterministic RNG used throughout the crate's samplers.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal via Box–Muller.
pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Complex vector with i.i.d. standard-normal real and imaginary parts.
pub fn random_complex_vector<R: Rng>(rng: &mut R, len: usize) -> Vec<C64> {
    (0..len)
        .map(|_| C64::new(standard_normal(rng), standard_normal(rng)))
        .collect()
}

/// Normalized random amplitude vector of length `n`.
pub fn random_q<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let v = random_complex_vector(rng, n);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Normalized random amplitude vector satisfying Σ_k q_k = 0 exactly (to
/// roundoff): a random complex vector is projected onto the zero-sum
/// hyperplane, then normalized.
pub fn random_zsa_q<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    assert!(n >= 2, "a zero-sum amplitude vector needs at least two sites");
    loop {
        let v = random_complex_vector(rng, n);
        let mean = v.iter().sum::<C64>() / (n as f64);
        let proj: Vec<C64> = v.into_iter().map(|z| z - mean).collect();
        let norm = proj.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return proj.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Random unit vector in a `dim`-dimensional complex space.
pub fn random_unit_vector<R: Rng>(rng: &mut R, dim: usize) -> Array1<C64> {
    Array1::from(random_q(rng, dim))
}

/// Random density matrix ρ = G·G†/Tr(G·G†) with Gaussian G: Hermitian,
/// positive semidefinite, unit trace.
pub fn random_density<R: Rng>(rng: &mut R, dim: usize) -> Array2<C64> {
    let g = Array2::from_shape_vec((dim, dim), random_complex_vector(rng, dim * dim))
        .expect("shape matches allocation");
    let gdag = g.t().mapv(|z| z.conj());
    let rho = g.dot(&gdag);
    let tr: C64 = (0..dim).map(|i| rho[(i, i)]).sum();
    rho.mapv(|z| z / tr.re)
}

/// Random Hermitian matrix with unit trace (not necessarily positive):
/// exercises trace/Hermiticity preservation of generators off the state
/// manifold.
pub fn random_hermitian_unit_trace<R: Rng>(rng: &mut R, dim: usize) -> Array2<C64> {
    let g = Array2::from_shape_vec((dim, dim), random_complex_vector(rng, dim * dim))
        .expect("shape matches allocation");
    let gdag = g.t().mapv(|z| z.conj());
    let herm = (&g + &gdag).mapv(|z| z * 0.5);
    let tr: C64 = (0..dim).map(|i| herm[(i, i)]).sum();
    let shift = (tr.re - 1.0) / dim as f64;
    let mut out = herm;
    for i in 0..dim {
        out[(i, i)] -= C64::new(shift, 0.0);
    }
    out
}

/// Uniformly random permutation of 0..n (Fisher–Yates).
pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}
