//! Python bindings. Matrices cross the boundary as `list[list[float]]`
//! (row-major) and width models as text, e.g. `"shift(1, geom(0.5))"`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use widthlab::covering::{self, DEFAULT_TOL};
use widthlab::rigid::{self, RigidCompactSpec};
use widthlab::seqlab::{self, SequenceModel};
use widthlab::spectra;
use widthlab::{equations, expanding, Error, Matrix};

fn py_err(e: Error) -> PyErr {
    if e.is_input_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn to_matrix(rows: Vec<Vec<f64>>) -> PyResult<Matrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("rows have different lengths"));
    }
    Ok(Matrix::from_fn(r, c, |i, j| rows[i][j]))
}

fn to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// `(x, y, residual)` as returned to Python.
type PyPair = (Vec<Vec<f64>>, Vec<Vec<f64>>, f64);

fn parse(text: &str) -> PyResult<SequenceModel> {
    seqlab::parse_model(text).map_err(py_err)
}

/// A centered ellipsoid `A(B)`.
#[pyclass(name = "Ellipsoid", module = "widthlab_py", frozen)]
struct PyEllipsoid {
    inner: spectra::Ellipsoid,
}

#[pymethods]
impl PyEllipsoid {
    #[new]
    fn new(generator: Vec<Vec<f64>>) -> PyResult<Self> {
        let inner = spectra::Ellipsoid::new(to_matrix(generator)?).map_err(py_err)?;
        Ok(PyEllipsoid { inner })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim()
    }

    #[getter]
    fn generator(&self) -> Vec<Vec<f64>> {
        to_rows(self.inner.generator())
    }

    /// s-numbers `s_1, s_2, ...`.
    fn spectrum(&self) -> Vec<f64> {
        self.inner.spectrum().values.clone()
    }

    /// Kolmogorov widths `d_0, d_1, ...`.
    fn widths(&self) -> Vec<f64> {
        spectra::kolmogorov_widths(&self.inner).values
    }

    /// s-numbers of the section by the complement of `span(y)`, where `y`
    /// has orthonormal columns.
    fn section(&self, y: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
        let sec = spectra::section(&self.inner, &to_matrix(y)?).map_err(py_err)?;
        Ok(sec.spectrum.values)
    }

    fn scaled(&self, c: f64) -> PyResult<Self> {
        Ok(PyEllipsoid { inner: self.inner.scaled(c).map_err(py_err)? })
    }

    #[pyo3(signature = (point, tol = DEFAULT_TOL))]
    fn contains(&self, point: Vec<f64>, tol: f64) -> PyResult<bool> {
        let y = widthlab::Vector::from_vec(point);
        spectra::ellipsoid_membership(&self.inner, &y, tol).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Ellipsoid(ambient_dim={}, rank={})", self.inner.ambient_dim(), self.inner.rank())
    }
}

/// A width sequence model parsed from text.
#[pyclass(name = "SequenceModel", module = "widthlab_py", frozen)]
struct PyModel {
    inner: SequenceModel,
}

#[pymethods]
impl PyModel {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyModel { inner: parse(text)? })
    }

    fn sample(&self, n: usize) -> PyResult<Vec<f64>> {
        seqlab::sample(&self.inner, n).map_err(py_err)
    }

    fn is_lacunary(&self) -> PyResult<bool> {
        Ok(seqlab::is_lacunary(&self.inner).map_err(py_err)?.lacunary)
    }

    fn majorizes(&self, other: &PyModel) -> PyResult<bool> {
        Ok(seqlab::majorizes(&self.inner, &other.inner).map_err(py_err)?.holds)
    }

    fn strictly_majorizes(&self, other: &PyModel) -> PyResult<bool> {
        Ok(seqlab::strictly_majorizes(&self.inner, &other.inner).map_err(py_err)?.holds)
    }

    fn equivalent(&self, other: &PyModel) -> PyResult<bool> {
        seqlab::equivalent(&self.inner, &other.inner).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("SequenceModel('{}')", self.inner)
    }
}

#[pyfunction]
fn kolmogorov_widths(a: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    let e = spectra::Ellipsoid::new(to_matrix(a)?).map_err(py_err)?;
    Ok(spectra::kolmogorov_widths(&e).values)
}

/// `(holds, psd_margin)` for `T·E1 ⊇ E2`.
#[pyfunction]
#[pyo3(signature = (t, e1, e2, tol = DEFAULT_TOL))]
fn covers(t: Vec<Vec<f64>>, e1: &PyEllipsoid, e2: &PyEllipsoid, tol: f64) -> PyResult<(bool, f64)> {
    let c = covering::covers(&to_matrix(t)?, &e1.inner, &e2.inner, tol).map_err(py_err)?;
    Ok((c.holds, c.psd_margin))
}

/// `(operator, constant)` of the minimal-norm cover of `e2` by `e1`.
#[pyfunction]
fn schmidt_cover(e1: &PyEllipsoid, e2: &PyEllipsoid) -> PyResult<(Vec<Vec<f64>>, f64)> {
    let s = covering::schmidt_cover(&e1.inner, &e2.inner).map_err(py_err)?;
    Ok((to_rows(&s.operator), s.constant))
}

/// `(operator, rho, constraint_residual)`.
#[pyfunction]
fn prescribed_cover(e: &PyEllipsoid, y: Vec<Vec<f64>>, n: Vec<Vec<f64>>) -> PyResult<(Vec<Vec<f64>>, f64, f64)> {
    let pc = covering::prescribed_cover(&e.inner, &to_matrix(y)?, &to_matrix(n)?).map_err(py_err)?;
    Ok((to_rows(&pc.operator), pc.rho, pc.constraint_residual))
}

/// Verdict tag such as `"KDim(1)"`.
#[pyfunction]
#[pyo3(signature = (a, b, k_max = 16))]
fn classify_wg(a: &str, b: &str, k_max: usize) -> PyResult<String> {
    Ok(covering::classify_wg(&parse(a)?, &parse(b)?, k_max).map_err(py_err)?.tag.to_string())
}

#[pyfunction]
#[pyo3(signature = (a, b, k_max = 16))]
fn classify_wcg(a: &str, b: &str, k_max: usize) -> PyResult<String> {
    Ok(covering::classify_wcg(&parse(a)?, &parse(b)?, k_max).map_err(py_err)?.tag.to_string())
}

#[pyfunction]
#[pyo3(signature = (model, kernel_trivial = false))]
fn classify_we(model: &str, kernel_trivial: bool) -> PyResult<String> {
    Ok(expanding::classify_we(&parse(model)?, kernel_trivial).map_err(py_err)?.tag.to_string())
}

/// `(expanding, margin)` for `|ATx| >= |Ax|`.
#[pyfunction]
#[pyo3(signature = (t, a, tol = DEFAULT_TOL))]
fn is_expanding(t: Vec<Vec<f64>>, a: Vec<Vec<f64>>, tol: f64) -> PyResult<(bool, f64)> {
    let v = expanding::is_expanding(&to_matrix(t)?, &to_matrix(a)?, tol).map_err(py_err)?;
    Ok((v.expanding, v.margin))
}

/// `(x, y, residual)` with `X A Y = B`.
#[pyfunction]
fn solve_xay(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>) -> PyResult<PyPair> {
    let s = equations::solve_xay(&to_matrix(a)?, &to_matrix(b)?).map_err(py_err)?;
    Ok((to_rows(&s.x), to_rows(&s.y), s.residual))
}

/// `(x, y, residual)` with `X Y = B` on the doubled space.
#[pyfunction]
fn factor_pair(b: Vec<Vec<f64>>) -> PyResult<PyPair> {
    let s = equations::factor_pair(&to_matrix(b)?).map_err(py_err)?;
    Ok((to_rows(&s.x), to_rows(&s.y), s.residual))
}

#[pyfunction]
#[pyo3(signature = (model, m, dims, seed = 0))]
fn wot_density_experiment<'py>(
    py: Python<'py>,
    model: &str,
    m: usize,
    dims: Vec<usize>,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = covering::wot_density_experiment(&parse(model)?, m, &dims, seed).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("dims", r.dims)?;
    d.set_item("rho", r.rho)?;
    d.set_item("constraint_residuals", r.constraint_residuals)?;
    d.set_item("model_lacunary", r.model_lacunary)?;
    d.set_item("refused", r.refused)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (n, alphas, betas, norm_bound = 10.0))]
fn rigid_cover_search<'py>(
    py: Python<'py>,
    n: usize,
    alphas: Vec<f64>,
    betas: Vec<f64>,
    norm_bound: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = RigidCompactSpec { n, alphas, betas };
    let r = rigid::rigid_cover_search(&spec, norm_bound).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("identity_only", r.identity_only)?;
    d.set_item("admissible_maps", r.admissible_maps)?;
    d.set_item("threshold", r.threshold)?;
    d.set_item("out_degree_min", r.edge_graph_stats.out_degree_min)?;
    d.set_item("in_degree_max", r.edge_graph_stats.in_degree_max)?;
    d.set_item("nodes_visited", r.nodes_visited)?;
    Ok(d)
}

#[pymodule]
fn widthlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEllipsoid>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(kolmogorov_widths, m)?)?;
    m.add_function(wrap_pyfunction!(covers, m)?)?;
    m.add_function(wrap_pyfunction!(schmidt_cover, m)?)?;
    m.add_function(wrap_pyfunction!(prescribed_cover, m)?)?;
    m.add_function(wrap_pyfunction!(classify_wg, m)?)?;
    m.add_function(wrap_pyfunction!(classify_wcg, m)?)?;
    m.add_function(wrap_pyfunction!(classify_we, m)?)?;
    m.add_function(wrap_pyfunction!(is_expanding, m)?)?;
    m.add_function(wrap_pyfunction!(solve_xay, m)?)?;
    m.add_function(wrap_pyfunction!(factor_pair, m)?)?;
    m.add_function(wrap_pyfunction!(wot_density_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(rigid_cover_search, m)?)?;
    Ok(())
}
