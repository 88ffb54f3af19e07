use std::str::FromStr;

use ::invlimit as core;
use core::codes::{enumerate_types, is_admissible};
use core::limit_space;
use core::map_family::{presets, TailEndpoint};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn sheet(name: &str) -> PyResult<core::Sheet> {
    core::Sheet::from_str(name).map_err(err)
}

#[pyclass(name = "UnimodalMap", frozen, from_py_object)]
#[derive(Clone)]
struct PyMap(core::UnimodalMap);

#[pymethods]
impl PyMap {
    #[new]
    fn new(rho: f64, delta: f64, gamma: f64, alpha: f64) -> PyResult<Self> {
        core::UnimodalMap::new(rho, delta, gamma, alpha).map(PyMap).map_err(err)
    }

    /// One of the reference instances: "case1", "case2", "case3a" or "case3b".
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        let m = match name {
            "case1" => presets::case1(),
            "case2" => presets::case2(),
            "case3a" => presets::case3a(),
            "case3b" => presets::case3b(),
            other => return Err(PyValueError::new_err(format!("unknown preset {other:?}"))),
        };
        Ok(PyMap(m))
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.0.rho
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.0.delta
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha
    }

    #[getter]
    fn rho1(&self) -> f64 {
        self.0.rho1
    }

    /// Case name such as "Case 3b".
    fn case(&self) -> &'static str {
        self.0.case().name()
    }

    fn headline(&self) -> String {
        core::cli::headline(&self.0)
    }

    fn eval(&self, x: f64) -> PyResult<f64> {
        self.0.apply(x).map_err(err)
    }

    fn iterate(&self, x: f64, n: usize) -> f64 {
        self.0.iterate(x, n)
    }

    fn branch_inverse(&self, branch: u8, y: f64) -> PyResult<f64> {
        self.0.branch_inverse(branch, y).map_err(err)
    }

    fn landmarks<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let l = self.0.landmarks();
        let d = PyDict::new(py);
        d.set_item("rho1", l.rho1)?;
        d.set_item("omega0", l.omega0)?;
        d.set_item("omega0_multiplier", l.omega0_multiplier)?;
        d.set_item("w1", l.w1)?;
        d.set_item("w2", l.w2)?;
        d.set_item("cycle_multiplier", l.cycle_multiplier)?;
        d.set_item("f_rho1", l.f_rho1)?;
        Ok(d)
    }

    #[pyo3(signature = (grid=2048, p_max=8, tol=1e-6))]
    fn period_census<'py>(&self, py: Python<'py>, grid: usize, p_max: u32, tol: f64) -> PyResult<Bound<'py, PyDict>> {
        let c = self.0.period_census(grid, p_max, tol);
        let d = PyDict::new(py);
        d.set_item("periods", c.detected_periods.iter().copied().collect::<Vec<u32>>())?;
        d.set_item("stabilization_n", c.stabilization_n)?;
        d.set_item("intervals", c.periodic_intervals.iter().map(|i| (i.lo, i.hi, i.period)).collect::<Vec<_>>())?;
        d.set_item("unresolved", c.unresolved)?;
        d.set_item("agrees", c.agrees_with(self.0.case()))?;
        Ok(d)
    }

    fn d_sequence(&self, k: usize) -> PyResult<Vec<f64>> {
        self.0.d_sequence(k).map_err(err)
    }

    /// `(value, remainder_bound)`; case 2 gives `(-inf, 0.0)`.
    fn tail_endpoint_a(&self, k: usize) -> PyResult<(f64, f64)> {
        Ok(match self.0.tail_endpoint_a(k).map_err(err)? {
            TailEndpoint::Finite { value, remainder_bound } => (value, remainder_bound),
            TailEndpoint::NegInfinity => (f64::NEG_INFINITY, 0.0),
        })
    }

    fn __repr__(&self) -> String {
        let m = &self.0;
        format!("UnimodalMap(rho={}, delta={}, gamma={}, alpha={})", m.rho, m.delta, m.gamma, m.alpha)
    }
}

#[pyclass(name = "LimitPoint", frozen, from_py_object)]
#[derive(Clone)]
struct PyPoint(core::LimitPoint);

#[pymethods]
impl PyPoint {
    #[getter]
    fn x0(&self) -> f64 {
        self.0.x0()
    }

    #[getter]
    fn code(&self) -> String {
        self.0.code().to_string()
    }

    #[getter]
    fn thread(&self) -> Vec<f64> {
        self.0.thread().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("LimitPoint(x0={}, code={})", self.0.x0(), self.0.code())
    }
}

#[pyclass(name = "Embedding", frozen)]
struct PyEmbedding(core::Embedding);

#[pymethods]
impl PyEmbedding {
    #[new]
    #[pyo3(signature = (map, bricks=40))]
    fn new(map: &PyMap, bricks: usize) -> PyResult<Self> {
        core::Embedding::with_bricks(&map.0, bricks).map(PyEmbedding).map_err(err)
    }

    /// `(sheet, value)` of a point.
    fn encode(&self, p: &PyPoint) -> PyResult<(String, f64)> {
        let c = self.0.encode(&p.0).map_err(err)?;
        Ok((c.sheet.name().to_string(), c.value))
    }

    #[pyo3(signature = (sheet_name, value, depth=64))]
    fn decode(&self, sheet_name: &str, value: f64, depth: usize) -> PyResult<PyPoint> {
        let c = core::ExtendedCoord::on(sheet(sheet_name)?, value);
        self.0.decode(c, depth).map(PyPoint).map_err(err)
    }

    fn embedded_shift(&self, sheet_name: &str, value: f64) -> PyResult<(String, f64)> {
        let c = self.0.embedded_shift(core::ExtendedCoord::on(sheet(sheet_name)?, value)).map_err(err)?;
        Ok((c.sheet.name().to_string(), c.value))
    }

    fn model_coordinates(&self, sheet_name: &str, value: f64) -> PyResult<Vec<f64>> {
        self.0.model_coordinates(core::ExtendedCoord::on(sheet(sheet_name)?, value)).map_err(err)
    }

    /// `(lo, hi)` of the line covered by the brick table.
    fn covered_line(&self) -> (f64, f64) {
        self.0.covered_line()
    }

    /// `(code, image_lo, image_hi)` per line brick in table order.
    fn line_table(&self) -> Vec<(String, f64, f64)> {
        self.0.line_table().iter().map(|t| (t.code.to_string(), t.image().lo, t.image().hi)).collect()
    }

    fn arc_table(&self) -> Vec<(String, f64, f64)> {
        self.0.arc_table().iter().map(|t| (t.code.to_string(), t.image().lo, t.image().hi)).collect()
    }
}

/// Canonical string form of a code such as "10.1^∞"; raises on malformed input.
#[pyfunction]
fn canonical_code(code: &str) -> PyResult<String> {
    core::TypeCode::from_str(code).map(|c| c.to_string()).map_err(err)
}

#[pyfunction]
fn admissible(map: &PyMap, code: &str) -> PyResult<bool> {
    let c = core::TypeCode::from_str(code).map_err(err)?;
    Ok(is_admissible(map.0.case(), &c))
}

#[pyfunction]
fn types(map: &PyMap, bound: usize) -> Vec<String> {
    enumerate_types(map.0.case(), bound).iter().map(|c| c.to_string()).collect()
}

#[pyfunction]
fn brick(map: &PyMap, code: &str) -> PyResult<(f64, f64)> {
    let c = core::TypeCode::from_str(code).map_err(err)?;
    let b = limit_space::brick_interval(&map.0, &c, 4096).map_err(err)?;
    Ok((b.lo, b.hi))
}

#[pyfunction]
#[pyo3(signature = (map, x0, code, depth=64))]
fn decode_point(map: &PyMap, x0: f64, code: &str, depth: usize) -> PyResult<PyPoint> {
    let c = core::TypeCode::from_str(code).map_err(err)?;
    limit_space::decode_point(&map.0, x0, &c, depth).map(PyPoint).map_err(err)
}

#[pyfunction]
fn shift(map: &PyMap, p: &PyPoint) -> PyPoint {
    PyPoint(limit_space::shift(&map.0, &p.0))
}

#[pyfunction]
fn unshift(map: &PyMap, p: &PyPoint) -> PyResult<PyPoint> {
    limit_space::unshift(&map.0, &p.0).map(PyPoint).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (map, figure_id, fmt="csv", samples=2000))]
fn figure(map: &PyMap, figure_id: u8, fmt: &str, samples: usize) -> PyResult<String> {
    let f = core::figures::figure(&map.0, figure_id, samples).map_err(err)?;
    match fmt {
        "csv" => Ok(f.to_csv()),
        "svg" => Ok(f.to_svg()),
        other => Err(PyValueError::new_err(format!("unknown format {other:?}"))),
    }
}

#[pyfunction]
#[pyo3(signature = (map, sheet_name="line", samples=100, depth=64))]
fn embed_csv(map: &PyMap, sheet_name: &str, samples: usize, depth: usize) -> PyResult<String> {
    core::cli::embed_csv(&map.0, sheet(sheet_name)?, samples, depth).map(|(csv, _)| csv).map_err(err)
}

#[pymodule]
fn invlimit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMap>()?;
    m.add_class::<PyPoint>()?;
    m.add_class::<PyEmbedding>()?;
    m.add_function(wrap_pyfunction!(canonical_code, m)?)?;
    m.add_function(wrap_pyfunction!(admissible, m)?)?;
    m.add_function(wrap_pyfunction!(types, m)?)?;
    m.add_function(wrap_pyfunction!(brick, m)?)?;
    m.add_function(wrap_pyfunction!(decode_point, m)?)?;
    m.add_function(wrap_pyfunction!(shift, m)?)?;
    m.add_function(wrap_pyfunction!(unshift, m)?)?;
    m.add_function(wrap_pyfunction!(figure, m)?)?;
    m.add_function(wrap_pyfunction!(embed_csv, m)?)?;
    Ok(())
}
