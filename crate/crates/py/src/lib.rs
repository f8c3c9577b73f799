//! Python extension module over the core library. Exact values cross the
//! boundary losslessly: BigInt becomes a Python int, valuations that are
//! infinite become None, and rationals inside reports stay strings.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;

use watkins_core::bounds::{self, PeterssonMode};
use watkins_core::congruence;
use watkins_core::curve::{TwistParameter, WeierstrassModel};
use watkins_core::families;
use watkins_core::hecke;
use watkins_core::local;
use watkins_core::{arith, Error};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mode_from(name: &str) -> PyResult<PeterssonMode> {
    match name {
        "cased" => Ok(PeterssonMode::Cased),
        "refined" => Ok(PeterssonMode::Refined),
        other => Err(PyValueError::new_err(format!(
            "mode must be 'cased' or 'refined', got '{other}'"
        ))),
    }
}

fn twist_from(d: i64) -> PyResult<TwistParameter> {
    TwistParameter::new(d).map_err(err)
}

fn json_to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    use serde_json::Value;
    match value {
        Value::Null => Ok(py.None()),
        Value::Bool(b) => b.into_py_any(py),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_py_any(py)
            } else if let Some(u) = n.as_u64() {
                u.into_py_any(py)
            } else {
                n.as_f64().unwrap().into_py_any(py)
            }
        }
        Value::String(s) => s.into_py_any(py),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_py_any(py)
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (key, item) in map {
                dict.set_item(key, json_to_py(py, item)?)?;
            }
            dict.into_py_any(py)
        }
    }
}

/// An integral Weierstrass model [a1, a2, a3, a4, a6].
#[pyclass(frozen, eq)]
#[derive(PartialEq, Eq)]
struct Curve {
    model: WeierstrassModel,
}

#[pymethods]
impl Curve {
    #[new]
    fn new(a1: i64, a2: i64, a3: i64, a4: i64, a6: i64) -> Self {
        Curve {
            model: WeierstrassModel::new(a1, a2, a3, a4, a6),
        }
    }

    /// Parses "[a1, a2, a3, a4, a6]" (brackets optional).
    #[staticmethod]
    fn from_string(text: &str) -> PyResult<Self> {
        text.parse::<WeierstrassModel>()
            .map(|model| Curve { model })
            .map_err(err)
    }

    /// One of the bundled curves, by its label.
    #[staticmethod]
    fn from_label(label: &str) -> PyResult<Self> {
        families::curve_by_label(label)
            .map(|record| Curve {
                model: record.model.clone(),
            })
            .map_err(err)
    }

    /// The prime-conductor pair for p = u^2 + 64.
    #[staticmethod]
    fn setzer(p: i64) -> PyResult<(Self, Self)> {
        let (e1, e2) = families::setzer_pair(p).map_err(err)?;
        Ok((Curve { model: e1 }, Curve { model: e2 }))
    }

    fn ainvs(&self) -> (BigInt, BigInt, BigInt, BigInt, BigInt) {
        let m = &self.model;
        (
            m.a1.clone(),
            m.a2.clone(),
            m.a3.clone(),
            m.a4.clone(),
            m.a6.clone(),
        )
    }

    fn invariants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let inv = self.model.invariants();
        let dict = PyDict::new(py);
        dict.set_item("b2", inv.b2)?;
        dict.set_item("b4", inv.b4)?;
        dict.set_item("b6", inv.b6)?;
        dict.set_item("b8", inv.b8)?;
        dict.set_item("c4", inv.c4)?;
        dict.set_item("c6", inv.c6)?;
        dict.set_item("disc", inv.disc)?;
        Ok(dict)
    }

    fn minimal(&self) -> PyResult<Self> {
        let (model, _) = self.model.minimal_model().map_err(err)?;
        Ok(Curve { model })
    }

    fn twist(&self, d: i64) -> PyResult<Self> {
        let model = self.model.quadratic_twist(&twist_from(d)?).map_err(err)?;
        Ok(Curve { model })
    }

    /// (nu_p(c4), nu_p(c6), nu_p(disc)) of the minimal model; None marks an
    /// infinite valuation. Defaults to p = 2.
    #[pyo3(signature = (p = 2))]
    fn signature(&self, p: u64) -> PyResult<(Option<u32>, Option<u32>, Option<u32>)> {
        if p == 2 {
            let sig = self.model.signature().map_err(err)?;
            return Ok((sig.c4.finite(), sig.c6.finite(), sig.disc.finite()));
        }
        if !arith::is_prime_u64(p) {
            return Err(PyValueError::new_err(format!("{p} is not prime")));
        }
        let (minimal, _) = self.model.minimal_model().map_err(err)?;
        let inv = minimal.invariants();
        let bp = BigInt::from(p);
        Ok((
            arith::padic_val(&bp, &inv.c4).finite(),
            arith::padic_val(&bp, &inv.c6).finite(),
            arith::padic_val(&bp, &inv.disc).finite(),
        ))
    }

    fn two_torsion_order(&self) -> PyResult<u32> {
        self.model.two_torsion_order().map_err(err)
    }

    fn conductor(&self) -> PyResult<BigInt> {
        Ok(local::conductor(&self.model).map_err(err)?.value)
    }

    fn conductor_factored(&self) -> PyResult<Vec<(BigInt, u32)>> {
        Ok(local::conductor(&self.model).map_err(err)?.factors)
    }

    fn local_reduction<'py>(&self, py: Python<'py>, p: BigInt) -> PyResult<Bound<'py, PyDict>> {
        let red = local::local_reduction(&self.model, &p).map_err(err)?;
        let dict = PyDict::new(py);
        dict.set_item("p", red.p)?;
        dict.set_item("kind", red.kind.as_str())?;
        dict.set_item("kodaira", red.kodaira.to_string())?;
        dict.set_item("f", red.f)?;
        dict.set_item("v_disc", red.v_disc)?;
        Ok(dict)
    }

    fn ap(&self, q: BigInt) -> PyResult<i64> {
        hecke::a_q(&self.model, &q).map_err(err)
    }

    /// {n: a_n} for n = 1..bound.
    fn coefficients<'py>(&self, py: Python<'py>, bound: u64) -> PyResult<Bound<'py, PyDict>> {
        let table = hecke::expand(&self.model, bound).map_err(err)?;
        let dict = PyDict::new(py);
        for (n, an) in table.entries() {
            dict.set_item(n, an)?;
        }
        Ok(dict)
    }

    fn rank_upper(&self, d: i64) -> PyResult<u32> {
        bounds::rank_upper_twist(&self.model, &twist_from(d)?).map_err(err)
    }

    #[pyo3(signature = (d, mode = "cased"))]
    fn petersson_val_lower(&self, d: i64, mode: &str) -> PyResult<u32> {
        bounds::petersson_val_lower(&self.model, &twist_from(d)?, mode_from(mode)?).map_err(err)
    }

    /// Full verdict report for the twist by d, as a dict.
    fn watkins(&self, py: Python<'_>, d: i64) -> PyResult<Py<PyAny>> {
        let report = bounds::watkins_verdict(&self.model, &twist_from(d)?).map_err(err)?;
        json_to_py(py, &report.to_json())
    }

    fn __str__(&self) -> String {
        self.model.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Curve({})", self.model)
    }
}

#[pyfunction]
fn kronecker(a: i64, b: i64) -> i32 {
    arith::kronecker(a, b)
}

#[pyfunction]
fn gamma(n: u64, d: i64) -> PyResult<i32> {
    hecke::gamma(n, d).map_err(err)
}

#[pyfunction]
fn is_prime(n: BigInt) -> PyResult<bool> {
    arith::is_prime(&n).map_err(err)
}

#[pyfunction]
fn factorize(n: BigInt) -> PyResult<Vec<(BigInt, u32)>> {
    Ok(arith::factorize(&n).map_err(err)?.factors)
}

#[pyfunction]
fn setzer_primes(limit: i64) -> Vec<i64> {
    families::setzer_primes(limit)
}

#[pyfunction]
fn bundled_labels() -> PyResult<Vec<String>> {
    Ok(families::bundled_curves()
        .map_err(err)?
        .iter()
        .map(|r| r.label.clone())
        .collect())
}

/// Valuation bound, dichotomy, and conductor equality for y^2 = x^3 - d D^2 x.
#[pyfunction]
#[pyo3(signature = (d, bound = 2000))]
fn verify_theorem(py: Python<'_>, d: u64, bound: u64) -> PyResult<Py<PyAny>> {
    let report = congruence::verify_theorem(d, bound).map_err(err)?;
    json_to_py(py, &report.to_json())
}

#[pyfunction]
fn lemma52<'py>(py: Python<'py>, d: u64, q: u64, k: u32) -> PyResult<Bound<'py, PyDict>> {
    let o = congruence::lemma52_check(d, q, k).map_err(err)?;
    let dict = PyDict::new(py);
    dict.set_item("d", o.d)?;
    dict.set_item("q", o.q)?;
    dict.set_item("k", o.k)?;
    dict.set_item("symbol", o.symbol)?;
    dict.set_item("coefficient", o.coefficient)?;
    dict.set_item("congruence_ok", o.congruence_ok)?;
    dict.set_item("two_squares", o.two_squares)?;
    dict.set_item("two_squares_ok", o.two_squares_ok)?;
    Ok(dict)
}

#[pymodule]
fn watkins_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Curve>()?;
    m.add_function(wrap_pyfunction!(kronecker, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(is_prime, m)?)?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(setzer_primes, m)?)?;
    m.add_function(wrap_pyfunction!(bundled_labels, m)?)?;
    m.add_function(wrap_pyfunction!(verify_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(lemma52, m)?)?;
    Ok(())
}
