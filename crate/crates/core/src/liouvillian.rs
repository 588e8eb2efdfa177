//! Generators of the master equation: Hamiltonian commutator plus
//! structured dissipator terms for the three decay channels of the model —
//! independent atomic decay, cavity-mode relaxation, and collective atomic
//! decay — all driven by a broadband squeezed bath.
//!
//! Sign and weight conventions, fixed once here and used everywhere:
//!
//! * A jump term `(L, γ)` contributes `γ(LρL† − ½{L†L, ρ})` to ρ̇.
//! * An anomalous term `(A, μ)` contributes `2μ(AρA − ½{A², ρ})` to ρ̇.
//! * Each bath channel with lowering operator `O` and base weight `w` adds
//!   the four terms of the Kossakowski matrix `2w·[[N+1, −M*], [−M, N]]`
//!   over the operator pair `(O, O†)`: jumps `(O, 2w(N+1))`, `(O†, 2wN)`
//!   and anomalous pieces `(O†, −wM)`, `(O, −wM*)`.
//!
//! The relative sign between the `M` terms and the jump terms is fixed by
//! the physics: at maximal squeezing `|M|² = N(N+1)` the Kossakowski matrix
//! is rank one with effective jump `B ∝ √(N+1)·O − e^{iφ}√N·O†`, whose dark
//! state for two collectively coupled atoms is the pure superposition
//! `(√(N+1)|00⟩ + e^{iφ}√N|11⟩)/√(2N+1)` that the collective channel must
//! reach. The opposite sign produces the orthogonal-phase superposition and
//! a mixed steady state instead.

use ndarray::Array2;

use crate::hilbert::{
    annihilator_on, c64, collective_lowering_on, collective_r3_on, collective_raising_on,
    hermiticity_residual, site_lower, SpaceLabel,
};
use crate::sparse::SparseOp;
use crate::{C64, Error, Result};

/// Squeezed-bath parameters: mean photon occupation `N ≥ 0` and anomalous
/// two-photon correlator `M` with `|M|² ≤ N(N+1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermostatParams {
    n: f64,
    m: C64,
}

impl ThermostatParams {
    /// Validating constructor. The physicality bound `|M|² ≤ N(N+1)` is
    /// enforced with a small relative slack so that exactly saturated
    /// parameters built from floating-point hyperbolics pass.
    pub fn new(n: f64, m: C64) -> Result<Self> {
        if !n.is_finite() || n < 0.0 {
            return Err(Error::Physicality(format!(
                "bath occupation must be a finite non-negative real, got {n}"
            )));
        }
        let bound = n * (n + 1.0);
        let slack = 1e-12 * (1.0 + bound);
        if m.norm_sqr() > bound + slack {
            return Err(Error::Physicality(format!(
                "|M|² = {:.6e} exceeds N(N+1) = {bound:.6e}",
                m.norm_sqr()
            )));
        }
        Ok(ThermostatParams { n, m })
    }

    /// The ordinary vacuum: N = M = 0.
    pub fn vacuum() -> Self {
        ThermostatParams {
            n: 0.0,
            m: c64(0.0, 0.0),
        }
    }

    /// Thermal bath with occupation `n` and no two-photon correlations.
    pub fn thermal(n: f64) -> Result<Self> {
        Self::new(n, c64(0.0, 0.0))
    }

    /// Ideal squeezed bath from squeezing magnitude `r ≥ 0` and phase:
    /// N = sinh²r, M = e^{i·phase}·cosh r·sinh r, which saturates
    /// |M| = √(N(N+1)) identically.
    pub fn squeezing_from_r(r: f64, phase: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::Physicality(format!(
                "squeezing magnitude must be a finite non-negative real, got {r}"
            )));
        }
        let (sh, ch) = (r.sinh(), r.cosh());
        let m = C64::from_polar(ch * sh, phase);
        Ok(ThermostatParams { n: sh * sh, m })
    }

    pub fn occupation(&self) -> f64 {
        self.n
    }

    pub fn correlator(&self) -> C64 {
        self.m
    }

    pub fn is_vacuum(&self) -> bool {
        self.n == 0.0 && self.m == c64(0.0, 0.0)
    }

    /// True iff |M|² = N(N+1) within 1e-12 relative tolerance.
    pub fn is_maximally_squeezed(&self) -> bool {
        let bound = self.n * (self.n + 1.0);
        (self.m.norm_sqr() - bound).abs() <= 1e-12 * (1.0 + bound)
    }
}

/// Physical parameters of the full atoms-plus-cavity model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Atom count.
    pub n: usize,
    /// Atom–mode coupling g (rad/s).
    pub g: f64,
    /// Atom–mode detuning Δ (rad/s); must be nonzero.
    pub delta: f64,
    /// Independent single-atom decay rate (1/s).
    pub k_sq: f64,
    /// Cavity relaxation rate (1/s).
    pub gamma_sq: f64,
    /// Collective (cavity-mediated) decay rate (1/s).
    pub kappa: f64,
    /// Largest Fock occupancy kept for the cavity mode.
    pub cavity_cutoff: usize,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Size("model needs at least one atom".into()));
        }
        if self.delta == 0.0 || !self.delta.is_finite() {
            return Err(Error::Singularity(
                "detuning must be nonzero and finite".into(),
            ));
        }
        for (name, v) in [
            ("g", self.g),
            ("k_sq", self.k_sq),
            ("gamma_sq", self.gamma_sq),
            ("kappa", self.kappa),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Physicality(format!(
                    "{name} must be a finite non-negative real, got {v}"
                )));
            }
        }
        if self.cavity_cutoff < 1 {
            return Err(Error::Size("cavity cutoff must be at least 1".into()));
        }
        Ok(())
    }

    /// Space the assembled generator acts on.
    pub fn space(&self) -> SpaceLabel {
        SpaceLabel::atoms_with_mode(self.n, self.cavity_cutoff)
    }
}

/// One structured dissipator term.
#[derive(Clone, Debug)]
pub enum DissipatorTerm {
    /// Contributes `rate·(LρL† − ½{L†L, ρ})` to ρ̇.
    Jump { op: Array2<C64>, rate: f64 },
    /// Contributes `2·weight·(AρA − ½{A², ρ})` to ρ̇.
    Anomalous { op: Array2<C64>, weight: C64 },
}

#[derive(Clone)]
enum CachedTerm {
    Jump {
        l: SparseOp,
        l_dag: SparseOp,
        ldl: SparseOp,
        rate: f64,
    },
    Anomalous {
        a: SparseOp,
        a_sq: SparseOp,
        weight: C64,
    },
}

/// A generator of master-equation flow: ρ̇ = −i[H, ρ] + Σ(dissipator terms).
/// Applied matrix-free through cached sparse factors.
#[derive(Clone)]
pub struct Generator {
    space: SpaceLabel,
    hamiltonian: Option<Array2<C64>>,
    terms: Vec<DissipatorTerm>,
    h_sparse: Option<SparseOp>,
    cache: Vec<CachedTerm>,
}

impl Generator {
    pub fn new(
        space: SpaceLabel,
        hamiltonian: Option<Array2<C64>>,
        terms: Vec<DissipatorTerm>,
    ) -> Result<Self> {
        let d = space.dim();
        if let Some(h) = &hamiltonian {
            if h.nrows() != d || h.ncols() != d {
                return Err(Error::Dimension(format!(
                    "{}×{} Hamiltonian on a space of dimension {d}",
                    h.nrows(),
                    h.ncols()
                )));
            }
            let res = hermiticity_residual(h);
            if res > 1e-10 {
                return Err(Error::Physicality(format!(
                    "Hamiltonian is not Hermitian: residual {res:.3e}"
                )));
            }
        }
        for t in &terms {
            let op = match t {
                DissipatorTerm::Jump { op, rate } => {
                    if !rate.is_finite() || *rate < 0.0 {
                        return Err(Error::Physicality(format!(
                            "jump rate must be a finite non-negative real, got {rate}"
                        )));
                    }
                    op
                }
                DissipatorTerm::Anomalous { op, .. } => op,
            };
            if op.nrows() != d || op.ncols() != d {
                return Err(Error::Dimension(format!(
                    "{}×{} dissipator operator on a space of dimension {d}",
                    op.nrows(),
                    op.ncols()
                )));
            }
        }
        let h_sparse = hamiltonian.as_ref().map(SparseOp::from_dense);
        let cache = terms
            .iter()
            .map(|t| match t {
                DissipatorTerm::Jump { op, rate } => {
                    let l = SparseOp::from_dense(op);
                    let l_dag = l.adjoint();
                    let ldl = l_dag.matmul(&l);
                    CachedTerm::Jump {
                        l,
                        l_dag,
                        ldl,
                        rate: *rate,
                    }
                }
                DissipatorTerm::Anomalous { op, weight } => {
                    let a = SparseOp::from_dense(op);
                    let a_sq = a.matmul(&a);
                    CachedTerm::Anomalous {
                        a,
                        a_sq,
                        weight: *weight,
                    }
                }
            })
            .collect();
        Ok(Generator {
            space,
            hamiltonian,
            terms,
            h_sparse,
            cache,
        })
    }

    /// Purely dissipative generator (no coherent part).
    pub fn dissipative(space: SpaceLabel, terms: Vec<DissipatorTerm>) -> Result<Self> {
        Generator::new(space, None, terms)
    }

    /// Merge several generators on the same space: Hamiltonians add, term
    /// lists concatenate.
    pub fn combine(parts: Vec<Generator>) -> Result<Self> {
        let mut iter = parts.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::Size("cannot combine zero generators".into()))?;
        let space = first.space.clone();
        let mut h_total = first.hamiltonian;
        let mut terms = first.terms;
        for g in iter {
            if g.space != space {
                return Err(Error::Dimension(
                    "cannot combine generators on different spaces".into(),
                ));
            }
            h_total = match (h_total, g.hamiltonian) {
                (None, h) => h,
                (h, None) => h,
                (Some(a), Some(b)) => Some(a + b),
            };
            terms.extend(g.terms);
        }
        Generator::new(space, h_total, terms)
    }

    pub fn space(&self) -> &SpaceLabel {
        &self.space
    }

    pub fn terms(&self) -> &[DissipatorTerm] {
        &self.terms
    }

    pub fn hamiltonian(&self) -> Option<&Array2<C64>> {
        self.hamiltonian.as_ref()
    }

    pub fn is_purely_dissipative(&self) -> bool {
        self.hamiltonian.is_none()
    }

    /// ρ̇ for the given density-matrix entries (validating the shape).
    pub fn apply(&self, rho: &Array2<C64>) -> Result<Array2<C64>> {
        let d = self.space.dim();
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::Dimension(format!(
                "{}×{} matrix on a space of dimension {d}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let mut out = Array2::zeros((d, d));
        let mut tmp = Array2::zeros((d, d));
        self.apply_into(rho, &mut out, &mut tmp);
        Ok(out)
    }

    /// ρ̇ written into `out` using `tmp` as scratch; both must be d×d.
    /// No validation — the integrator's hot path.
    pub(crate) fn apply_into(
        &self,
        rho: &Array2<C64>,
        out: &mut Array2<C64>,
        tmp: &mut Array2<C64>,
    ) {
        out.fill(c64(0.0, 0.0));
        if let Some(h) = &self.h_sparse {
            // −i[H, ρ] = −iHρ + iρH
            h.left_mul_acc(c64(0.0, -1.0), rho, out);
            h.right_mul_acc(c64(0.0, 1.0), rho, out);
        }
        let one = c64(1.0, 0.0);
        for term in &self.cache {
            match term {
                CachedTerm::Jump { l, l_dag, ldl, rate } => {
                    let g = c64(*rate, 0.0);
                    let gh = c64(-0.5 * rate, 0.0);
                    tmp.fill(c64(0.0, 0.0));
                    l_dag.right_mul_acc(one, rho, tmp); // tmp = ρL†
                    l.left_mul_acc(g, tmp, out); // out += γ LρL†
                    ldl.left_mul_acc(gh, rho, out); // out −= γ/2 L†Lρ
                    ldl.right_mul_acc(gh, rho, out); // out −= γ/2 ρL†L
                }
                CachedTerm::Anomalous { a, a_sq, weight } => {
                    let two_mu = 2.0 * weight;
                    let neg_mu = -weight;
                    tmp.fill(c64(0.0, 0.0));
                    a.right_mul_acc(one, rho, tmp); // tmp = ρA
                    a.left_mul_acc(two_mu, tmp, out); // out += 2μ AρA
                    a_sq.left_mul_acc(neg_mu, rho, out); // out −= μ A²ρ
                    a_sq.right_mul_acc(neg_mu, rho, out); // out −= μ ρA²
                }
            }
        }
    }

    /// Diagonalize the Kossakowski matrix of the dissipative part into
    /// canonical jump operators: returns pairs `(B_k, λ_k)` with λ_k > 0
    /// such that Σ_k λ_k (B_kρB_k† − ½{B_k†B_k, ρ}) reproduces every
    /// dissipator term. Errors if the combined matrix has a significantly
    /// negative eigenvalue (non-completely-positive flow).
    pub fn effective_jumps(&self) -> Result<Vec<(Array2<C64>, f64)>> {
        // Deduplicate the operators appearing in the terms.
        let mut ops: Vec<Array2<C64>> = Vec::new();
        let find_or_insert = |op: &Array2<C64>, ops: &mut Vec<Array2<C64>>| -> usize {
            for (i, existing) in ops.iter().enumerate() {
                let close = existing
                    .iter()
                    .zip(op.iter())
                    .all(|(a, b)| (a - b).norm() <= 1e-13);
                if close {
                    return i;
                }
            }
            ops.push(op.clone());
            ops.len() - 1
        };
        // First pass: collect indices (and adjoint indices for anomalous terms).
        #[derive(Clone, Copy)]
        enum Entry {
            Diag(usize, f64),
            Cross(usize, usize, C64),
        }
        let mut entries = Vec::new();
        for t in &self.terms {
            match t {
                DissipatorTerm::Jump { op, rate } => {
                    let i = find_or_insert(op, &mut ops);
                    entries.push(Entry::Diag(i, *rate));
                }
                DissipatorTerm::Anomalous { op, weight } => {
                    let a = find_or_insert(op, &mut ops);
                    let adj = op.t().mapv(|z| z.conj());
                    let b = find_or_insert(&adj, &mut ops);
                    entries.push(Entry::Cross(a, b, *weight));
                }
            }
        }
        let k = ops.len();
        if k == 0 {
            return Ok(Vec::new());
        }
        let mut c: Array2<C64> = Array2::zeros((k, k));
        for e in entries {
            match e {
                Entry::Diag(i, rate) => c[(i, i)] += c64(rate, 0.0),
                // Anomalous (A, μ) sits at C[A, A†] with weight 2μ in the
                // canonical form Σ C_ab (O_a ρ O_b† − ½{O_b†O_a, ρ}).
                Entry::Cross(a, b, mu) => c[(a, b)] += 2.0 * mu,
            }
        }
        if hermiticity_residual(&c) > 1e-10 {
            return Err(Error::Physicality(
                "dissipator coefficient matrix is not Hermitian".into(),
            ));
        }
        let (evals, evecs) = crate::linalg::eigh_pairs(&c)?;
        let scale = evals.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
        let mut jumps = Vec::new();
        for (u, &lambda) in evecs.iter().zip(evals.iter()) {
            if lambda < -1e-10 * (1.0 + scale) {
                return Err(Error::Physicality(format!(
                    "dissipator coefficient matrix has negative eigenvalue {lambda:.3e}"
                )));
            }
            if lambda <= 1e-12 * (1.0 + scale) {
                continue;
            }
            let d = self.space.dim();
            let mut b: Array2<C64> = Array2::zeros((d, d));
            for (i, op) in ops.iter().enumerate() {
                let coeff = u[i];
                if coeff.norm() > 0.0 {
                    b.zip_mut_with(op, |x, &o| *x += coeff * o);
                }
            }
            jumps.push((b, lambda));
        }
        Ok(jumps)
    }

    /// Dense matrix of the generator acting on row-major vectorized
    /// matrices: column `i·dim + j` is `vec(apply(E_ij))`. Restricted to
    /// dimensions ≤ 64 (the matrix has dim⁴ entries).
    pub fn materialize_superoperator(&self) -> Result<Array2<C64>> {
        let d = self.space.dim();
        if d > 64 {
            return Err(Error::Size(format!(
                "superoperator materialization restricted to dimension ≤ 64, got {d}"
            )));
        }
        let d2 = d * d;
        let mut sup = Array2::zeros((d2, d2));
        let mut unit = Array2::zeros((d, d));
        let mut out = Array2::zeros((d, d));
        let mut tmp = Array2::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                unit[(i, j)] = c64(1.0, 0.0);
                self.apply_into(&unit, &mut out, &mut tmp);
                let col = i * d + j;
                for r in 0..d {
                    for s in 0..d {
                        sup[(r * d + s, col)] = out[(r, s)];
                    }
                }
                unit[(i, j)] = c64(0.0, 0.0);
            }
        }
        Ok(sup)
    }
}

// ---------------------------------------------------------------------------
// Term builders
// ---------------------------------------------------------------------------

/// The four Kossakowski terms `2w[[N+1, −M*], [−M, N]]` over `(op, op†)`,
/// skipping terms whose coefficient vanishes (so a vacuum bath yields the
/// single downward jump).
fn squeezed_channel_terms(
    lower: Array2<C64>,
    bath: &ThermostatParams,
    w: f64,
) -> Vec<DissipatorTerm> {
    let mut terms = Vec::new();
    if w == 0.0 {
        return terms;
    }
    let raise = lower.t().mapv(|z| z.conj());
    let n = bath.occupation();
    let m = bath.correlator();
    terms.push(DissipatorTerm::Jump {
        op: lower.clone(),
        rate: 2.0 * w * (n + 1.0),
    });
    if n > 0.0 {
        terms.push(DissipatorTerm::Jump {
            op: raise.clone(),
            rate: 2.0 * w * n,
        });
    }
    if m.norm() > 0.0 {
        terms.push(DissipatorTerm::Anomalous {
            op: raise,
            weight: -w * m,
        });
        terms.push(DissipatorTerm::Anomalous {
            op: lower,
            weight: -w * m.conj(),
        });
    }
    terms
}

/// Independent decay of atom `j` into the squeezed bath, on an arbitrary
/// space containing that atom: downward rate k(N+1), upward rate kN, and
/// the anomalous M cross terms. The transversal coherence of the atom then
/// decays at γ⊥ = k(2N+1)/2 − Re{M k} in its slow quadrature.
pub fn dissipator_single_atom_on(
    space: &SpaceLabel,
    j: usize,
    bath: &ThermostatParams,
    k_sq: f64,
) -> Result<Generator> {
    if !k_sq.is_finite() || k_sq < 0.0 {
        return Err(Error::Physicality(format!(
            "single-atom rate must be a finite non-negative real, got {k_sq}"
        )));
    }
    let lower = site_lower(space, j)?;
    let terms = squeezed_channel_terms(lower, bath, 0.5 * k_sq);
    Generator::dissipative(space.clone(), terms)
}

/// Independent decay of atom `j` of an `n`-atom register.
pub fn dissipator_single_atom(
    n: usize,
    j: usize,
    bath: &ThermostatParams,
    k_sq: f64,
) -> Result<Generator> {
    dissipator_single_atom_on(&SpaceLabel::atoms(n), j, bath, k_sq)
}

/// Independent decay of every atom of `space` at the common rate `k_sq`.
pub fn dissipator_all_atoms_on(
    space: &SpaceLabel,
    bath: &ThermostatParams,
    k_sq: f64,
) -> Result<Generator> {
    let parts: Result<Vec<Generator>> = space
        .atom_indices()
        .into_iter()
        .map(|j| dissipator_single_atom_on(space, j, bath, k_sq))
        .collect();
    Generator::combine(parts?)
}

/// Cavity-mode relaxation into the squeezed bath on a space containing one
/// truncated mode: photon loss at 2γ(N+1), thermal feeding at 2γN, and the
/// anomalous M cross terms.
pub fn dissipator_cavity_on(
    space: &SpaceLabel,
    bath: &ThermostatParams,
    gamma_sq: f64,
) -> Result<Generator> {
    if !gamma_sq.is_finite() || gamma_sq < 0.0 {
        return Err(Error::Physicality(format!(
            "cavity rate must be a finite non-negative real, got {gamma_sq}"
        )));
    }
    let c = annihilator_on(space)?;
    let terms = squeezed_channel_terms(c, bath, gamma_sq);
    Generator::dissipative(space.clone(), terms)
}

/// Cavity-mode relaxation on a bare single-mode space with the given Fock
/// truncation.
pub fn dissipator_cavity(
    bath: &ThermostatParams,
    gamma_sq: f64,
    cutoff: usize,
) -> Result<Generator> {
    dissipator_cavity_on(&SpaceLabel::single_mode(cutoff), bath, gamma_sq)
}

/// Collective decay of all atoms of `space` through the symmetric operators
/// R_±: downward jump (R₋, 2κ(N+1)), upward jump (R₊, 2κN), anomalous
/// cross terms (R₊, −κM), (R₋, −κM*).
pub fn dissipator_collective_on(
    space: &SpaceLabel,
    bath: &ThermostatParams,
    kappa: f64,
) -> Result<Generator> {
    if !kappa.is_finite() || kappa < 0.0 {
        return Err(Error::Physicality(format!(
            "collective rate must be a finite non-negative real, got {kappa}"
        )));
    }
    let r_minus = collective_lowering_on(space)?;
    let terms = squeezed_channel_terms(r_minus, bath, kappa);
    Generator::dissipative(space.clone(), terms)
}

/// Collective decay of an `n`-atom register into the squeezed bath.
pub fn dissipator_collective(n: usize, bath: &ThermostatParams, kappa: f64) -> Result<Generator> {
    dissipator_collective_on(&SpaceLabel::atoms(n), bath, kappa)
}

/// Collective decay into the ordinary vacuum:
/// ḟ = −κ(R₊R₋f − 2R₋fR₊ + fR₊R₋), i.e. the single trace-preserving jump
/// (R₋, 2κ).
pub fn vacuum_collective(n: usize, kappa: f64) -> Result<Generator> {
    dissipator_collective(n, &ThermostatParams::vacuum(), kappa)
}

/// Effective dispersive Hamiltonian on atoms ⊗ truncated mode:
/// H_e = (g²/Δ)·(R₋R₊ + 2·c·c†·R₃), with ħ = 1 so all entries are angular
/// frequencies. Diagonal in each (photon number, excitation number)
/// sector: it commutes with both c†c and R₃.
pub fn effective_hamiltonian(n: usize, g: f64, delta: f64, cutoff: usize) -> Result<Array2<C64>> {
    if delta == 0.0 || !delta.is_finite() {
        return Err(Error::Singularity(
            "detuning must be nonzero and finite".into(),
        ));
    }
    let space = SpaceLabel::atoms_with_mode(n, cutoff);
    let r_plus = collective_raising_on(&space)?;
    let r_minus = collective_lowering_on(&space)?;
    let r3 = collective_r3_on(&space)?;
    let c = annihilator_on(&space)?;
    let c_dag = c.t().mapv(|z| z.conj());
    let scale = c64(g * g / delta, 0.0);
    let cc_dag = c.dot(&c_dag);
    let h = (r_minus.dot(&r_plus) + cc_dag.dot(&r3).mapv(|z| z * c64(2.0, 0.0)))
        .mapv(|z| z * scale);
    Ok(h)
}

/// The full model: effective Hamiltonian plus all three dissipation
/// channels (independent atoms, cavity mode, collective decay) on
/// atoms ⊗ mode.
pub fn assemble_full(model: &ModelParams, bath: &ThermostatParams) -> Result<Generator> {
    model.validate()?;
    let space = model.space();
    let h = effective_hamiltonian(model.n, model.g, model.delta, model.cavity_cutoff)?;
    let mut parts = vec![Generator::new(space.clone(), Some(h), Vec::new())?];
    if model.k_sq > 0.0 {
        parts.push(dissipator_all_atoms_on(&space, bath, model.k_sq)?);
    }
    if model.gamma_sq > 0.0 {
        parts.push(dissipator_cavity_on(&space, bath, model.gamma_sq)?);
    }
    if model.kappa > 0.0 {
        parts.push(dissipator_collective_on(&space, bath, model.kappa)?);
    }
    Generator::combine(parts)
}

/// Ratio |Δ| / (n·g·√(mean_photons+1)) controlling the dispersive
/// approximation.
pub fn dispersive_ratio(model: &ModelParams, mean_photons: f64) -> f64 {
    let denom = model.n as f64 * model.g * (mean_photons + 1.0).sqrt();
    if denom == 0.0 {
        f64::INFINITY
    } else {
        model.delta.abs() / denom
    }
}

/// Dispersive-regime check with the default threshold 10:
/// |Δ| ≥ 10·n·g·√(mean_photons+1).
pub fn dispersive_ok(model: &ModelParams, mean_photons: f64) -> bool {
    dispersive_ok_with(model, mean_photons, 10.0)
}

/// Dispersive-regime check with a configurable threshold.
pub fn dispersive_ok_with(model: &ModelParams, mean_photons: f64, ratio_threshold: f64) -> bool {
    dispersive_ratio(model, mean_photons) >= ratio_threshold
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
