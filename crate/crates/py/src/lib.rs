//! Python bindings for the collective-decay library.
//!
//! The module mirrors the Rust surface with thin wrappers: `StateVector`
//! and `DensityMatrix` hold their Rust counterparts, `Thermostat` and
//! `Generator` build the open-system pieces, and free functions cover
//! construction, evolution, steady states, the dark-sector tools, the
//! closed-form solutions, and the memory cycle. Validation problems raise
//! `ValueError`; numerical failures raise `RuntimeError`, matching the
//! CLI's exit-code split.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use collective_decay as cd;
use collective_decay::Error;

fn to_py_err(err: Error) -> PyErr {
    match err {
        Error::Parse(_)
        | Error::Dimension(_)
        | Error::Normalization(_)
        | Error::Size(_)
        | Error::Site(_)
        | Error::Permutation(_)
        | Error::Subset(_)
        | Error::Physicality(_)
        | Error::Domain(_)
        | Error::Singularity(_) => PyValueError::new_err(err.to_string()),
        Error::Stiffness(_)
        | Error::Integrity(_)
        | Error::Convergence(_)
        | Error::Extraction(_)
        | Error::Eigenstate(_)
        | Error::Linalg(_) => PyRuntimeError::new_err(err.to_string()),
    }
}

fn ok<T>(result: cd::Result<T>) -> PyResult<T> {
    result.map_err(to_py_err)
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

/// Pure state on a labeled Hilbert space.
#[pyclass(frozen, name = "StateVector")]
struct PyStateVector {
    inner: cd::hilbert::StateVector,
}

#[pymethods]
impl PyStateVector {
    #[getter]
    fn dim(&self) -> usize {
        self.inner.space.dim()
    }

    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes.to_vec()
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn inner_product(&self, other: &PyStateVector) -> PyResult<Complex64> {
        ok(self.inner.inner(&other.inner))
    }

    fn to_density(&self) -> PyResult<PyDensityMatrix> {
        Ok(PyDensityMatrix {
            inner: ok(self.inner.to_density())?,
        })
    }

    /// Collective quantum numbers (j, m); raises if the state is not a
    /// simultaneous eigenstate of J² and J₃.
    fn dicke_numbers(&self) -> PyResult<(f64, f64)> {
        ok(cd::dfs::dicke_numbers(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!("StateVector(dim={})", self.inner.space.dim())
    }
}

/// Mixed state (density matrix) on a labeled Hilbert space.
#[pyclass(frozen, name = "DensityMatrix")]
struct PyDensityMatrix {
    inner: cd::hilbert::DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn entries(&self) -> Vec<Vec<Complex64>> {
        self.inner
            .entries
            .rows()
            .into_iter()
            .map(|row| row.to_vec())
            .collect()
    }

    fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    fn hermiticity_residual(&self) -> f64 {
        self.inner.hermiticity_residual()
    }

    fn min_eigenvalue(&self) -> PyResult<f64> {
        ok(self.inner.min_eigenvalue())
    }

    fn __repr__(&self) -> String {
        format!(
            "DensityMatrix(dim={}, purity={:.6})",
            self.inner.dim(),
            self.inner.purity()
        )
    }
}

// ---------------------------------------------------------------------------
// Thermostat and generators
// ---------------------------------------------------------------------------

/// Squeezed-thermostat parameters (N, M) with the physicality bound
/// |M|² ≤ N(N+1).
#[pyclass(frozen, name = "Thermostat")]
struct PyThermostat {
    inner: cd::liouvillian::ThermostatParams,
}

#[pymethods]
impl PyThermostat {
    #[new]
    fn new(n: f64, m: Complex64) -> PyResult<Self> {
        Ok(PyThermostat {
            inner: ok(cd::liouvillian::ThermostatParams::new(n, m))?,
        })
    }

    #[staticmethod]
    fn vacuum() -> Self {
        PyThermostat {
            inner: cd::liouvillian::ThermostatParams::vacuum(),
        }
    }

    #[staticmethod]
    fn thermal(n: f64) -> PyResult<Self> {
        Ok(PyThermostat {
            inner: ok(cd::liouvillian::ThermostatParams::thermal(n))?,
        })
    }

    /// Maximally squeezed bath from the squeezing parameter r and phase.
    #[staticmethod]
    fn squeezing_from_r(r: f64, phase: f64) -> PyResult<Self> {
        Ok(PyThermostat {
            inner: ok(cd::liouvillian::ThermostatParams::squeezing_from_r(
                r, phase,
            ))?,
        })
    }

    #[getter]
    fn occupation(&self) -> f64 {
        self.inner.occupation()
    }

    #[getter]
    fn correlator(&self) -> Complex64 {
        self.inner.correlator()
    }

    fn is_maximally_squeezed(&self) -> bool {
        self.inner.is_maximally_squeezed()
    }

    fn __repr__(&self) -> String {
        format!(
            "Thermostat(N={}, M={})",
            self.inner.occupation(),
            self.inner.correlator()
        )
    }
}

/// Open-system generator: Hamiltonian part plus dissipator terms.
#[pyclass(frozen, name = "Generator", from_py_object)]
#[derive(Clone)]
struct PyGenerator {
    inner: cd::liouvillian::Generator,
}

#[pymethods]
impl PyGenerator {
    /// Collective decay of n atoms into the vacuum at rate 2κ.
    #[staticmethod]
    fn vacuum_collective(n: usize, kappa: f64) -> PyResult<Self> {
        Ok(PyGenerator {
            inner: ok(cd::liouvillian::vacuum_collective(n, kappa))?,
        })
    }

    /// Collective coupling of n atoms to a squeezed thermostat.
    #[staticmethod]
    fn collective(n: usize, bath: &PyThermostat, kappa: f64) -> PyResult<Self> {
        Ok(PyGenerator {
            inner: ok(cd::liouvillian::dissipator_collective(
                n,
                &bath.inner,
                kappa,
            ))?,
        })
    }

    /// Independent coupling of one site to its own thermostat.
    #[staticmethod]
    fn single_atom(n: usize, site: usize, bath: &PyThermostat, k_sq: f64) -> PyResult<Self> {
        Ok(PyGenerator {
            inner: ok(cd::liouvillian::dissipator_single_atom(
                n,
                site,
                &bath.inner,
                k_sq,
            ))?,
        })
    }

    /// Dispersive atoms-plus-mode model on the truncated Fock space.
    #[staticmethod]
    #[allow(clippy::too_many_arguments)]
    fn full_model(
        n: usize,
        g: f64,
        delta: f64,
        k_sq: f64,
        gamma_sq: f64,
        kappa: f64,
        cavity_cutoff: usize,
        bath: &PyThermostat,
    ) -> PyResult<Self> {
        let model = cd::liouvillian::ModelParams {
            n,
            g,
            delta,
            k_sq,
            gamma_sq,
            kappa,
            cavity_cutoff,
        };
        Ok(PyGenerator {
            inner: ok(cd::cavity::full_model(&model, &bath.inner))?,
        })
    }

    /// Sum of generators on the same space.
    #[staticmethod]
    fn combine(parts: Vec<PyGenerator>) -> PyResult<Self> {
        Ok(PyGenerator {
            inner: ok(cd::liouvillian::Generator::combine(
                parts.into_iter().map(|p| p.inner).collect(),
            ))?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.space().dim()
    }

    /// Orthonormal basis of the dark subspace, optionally restricted to
    /// one excitation sector.
    #[pyo3(signature = (sector=None))]
    fn dark_subspace(&self, sector: Option<usize>) -> PyResult<Vec<PyStateVector>> {
        let basis = ok(cd::dfs::dark_subspace(&self.inner, sector))?;
        Ok(basis
            .into_iter()
            .map(|inner| PyStateVector { inner })
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("Generator(dim={})", self.inner.space().dim())
    }
}

// ---------------------------------------------------------------------------
// Construction and analysis functions
// ---------------------------------------------------------------------------

#[pyfunction]
fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// Single-excitation state |η⟩ = Σ q_k |1_k⟩ from normalized amplitudes.
#[pyfunction]
fn make_eta(q: Vec<Complex64>) -> PyResult<PyStateVector> {
    Ok(PyStateVector {
        inner: ok(cd::hilbert::make_eta(&q))?,
    })
}

/// Uniform single-excitation state W_n.
#[pyfunction]
fn make_w(n: usize) -> PyResult<PyStateVector> {
    Ok(PyStateVector {
        inner: ok(cd::hilbert::make_w(n))?,
    })
}

/// All-ground product state of n atoms.
#[pyfunction]
fn ground_state(n: usize) -> PyResult<PyStateVector> {
    Ok(PyStateVector {
        inner: ok(cd::hilbert::ground_state(n))?,
    })
}

/// True when the amplitudes sum to zero (dark single-excitation pattern).
#[pyfunction]
fn zsa_check(q: Vec<Complex64>) -> bool {
    cd::dfs::zsa_check(&q)
}

/// Multiplicity of the collective momentum j for n spin-½ atoms.
#[pyfunction]
fn dicke_degeneracy(n: usize, j: f64) -> PyResult<u128> {
    ok(cd::dfs::dicke_degeneracy(n, j))
}

/// Overlap ⟨ψ|ρ|ψ⟩.
#[pyfunction]
fn fidelity(psi: &PyStateVector, rho: &PyDensityMatrix) -> PyResult<f64> {
    ok(cd::hilbert::fidelity(&psi.inner, &rho.inner))
}

/// Trace distance ½‖a − b‖₁.
#[pyfunction]
fn trace_distance(a: &PyDensityMatrix, b: &PyDensityMatrix) -> PyResult<f64> {
    ok(cd::hilbert::trace_distance(&a.inner, &b.inner))
}

/// Integrate ρ̇ = L(ρ) and return the states at the requested times.
#[pyfunction]
fn evolve(
    gen: &PyGenerator,
    rho0: &PyDensityMatrix,
    times: Vec<f64>,
) -> PyResult<Vec<PyDensityMatrix>> {
    let traj = ok(cd::dynamics::evolve_grid(
        &gen.inner,
        &rho0.inner,
        &times,
        &cd::dynamics::IntegratorConfig::default(),
    ))?;
    Ok(traj
        .states
        .into_iter()
        .map(|inner| PyDensityMatrix { inner })
        .collect())
}

/// Long-time limit of the evolution from `rho0`.
#[pyfunction]
fn steady_state(gen: &PyGenerator, rho0: &PyDensityMatrix) -> PyResult<PyDensityMatrix> {
    Ok(PyDensityMatrix {
        inner: ok(cd::dynamics::steady_state(
            &gen.inner,
            &rho0.inner,
            &cd::dynamics::SteadyStateCriteria::default(),
        ))?,
    })
}

/// Closed-form decay coefficients of a single-excitation initial state,
/// as a dict with keys "a", "b", "s", "d".
#[pyfunction]
fn absd_closed_form<'py>(
    py: Python<'py>,
    q: Vec<Complex64>,
    kappa: f64,
    t: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let state = ok(cd::analytic::absd_closed_form(&q, kappa, t))?;
    let dict = PyDict::new(py);
    dict.set_item("a", state.a)?;
    dict.set_item("b", state.b)?;
    dict.set_item("s", state.s)?;
    dict.set_item("d", state.d)?;
    Ok(dict)
}

/// Pure steady state of two atoms in the maximally squeezed channel.
#[pyfunction]
fn two_atom_squeezed_steady(n_occ: f64) -> PyResult<PyStateVector> {
    Ok(PyStateVector {
        inner: ok(cd::analytic::two_atom_squeezed_steady(n_occ))?,
    })
}

/// Pure steady state reached from a four-site zero-sum pattern in the
/// maximally squeezed channel.
#[pyfunction]
fn eta4_squeezed_final(q: Vec<Complex64>, n_occ: f64) -> PyResult<PyStateVector> {
    Ok(PyStateVector {
        inner: ok(cd::analytic::eta4_squeezed_final(&q, n_occ))?,
    })
}

/// Run one write–store–read memory cycle and return its figures of merit
/// as a dict.
#[pyfunction]
#[pyo3(signature = (q, coupling_f, store_time, bath, store_kappa))]
fn memory_cycle<'py>(
    py: Python<'py>,
    q: Vec<Complex64>,
    coupling_f: f64,
    store_time: f64,
    bath: &PyThermostat,
    store_kappa: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let config = ok(cd::memory::MemoryConfig::standard(
        q.len(),
        coupling_f,
        store_time,
        bath.inner,
        store_kappa,
    ))?;
    let report = ok(cd::memory::memory_cycle(&config, &q))?;
    let dict = PyDict::new(py);
    dict.set_item("write_fidelity", report.write_fidelity)?;
    dict.set_item("post_store_fidelity", report.post_store_fidelity)?;
    dict.set_item("read_fidelity", report.read_fidelity)?;
    dict.set_item("purity_after_store", report.purity_after_store)?;
    dict.set_item("write_time", report.parameters.write_time)?;
    Ok(dict)
}

#[pymodule]
fn collective_decay_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStateVector>()?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyThermostat>()?;
    m.add_class::<PyGenerator>()?;
    m.add_function(wrap_pyfunction!(version, m)?)?;
    m.add_function(wrap_pyfunction!(make_eta, m)?)?;
    m.add_function(wrap_pyfunction!(make_w, m)?)?;
    m.add_function(wrap_pyfunction!(ground_state, m)?)?;
    m.add_function(wrap_pyfunction!(zsa_check, m)?)?;
    m.add_function(wrap_pyfunction!(dicke_degeneracy, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(trace_distance, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(steady_state, m)?)?;
    m.add_function(wrap_pyfunction!(absd_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(two_atom_squeezed_steady, m)?)?;
    m.add_function(wrap_pyfunction!(eta4_squeezed_final, m)?)?;
    m.add_function(wrap_pyfunction!(memory_cycle, m)?)?;
    Ok(())
}
