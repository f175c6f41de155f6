use o2_mcfg::grammar::{self, certify, from_json, from_sexp, to_json, to_sexp};
use o2_mcfg::oracle::{self, search_decompositions, SearchBudget};
use o2_mcfg::parser::{self, ParseError, Strategy};
use o2_mcfg::words::{self, Word};
use o2_mcfg::{g2, BalDecomposition, DerivationTree};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

create_exception!(o2, NotBalancedError, PyValueError, "The word is not in O2.");
create_exception!(
    o2,
    DerivationError,
    PyValueError,
    "A derivation was rejected by the grammar."
);

fn word(s: &str, n: usize) -> PyResult<Word> {
    Word::parse_bounded(s, n).map_err(|e| PyValueError::new_err(format!("bad word {s:?}: {e}")))
}

fn strategy(s: &str) -> PyResult<Strategy> {
    s.parse().map_err(PyValueError::new_err)
}

fn parse_err(e: ParseError) -> PyErr {
    match e {
        ParseError::NotBalanced(b) => NotBalancedError::new_err(format!("balance {b}")),
        e if e.is_internal() => {
            PyRuntimeError::new_err(format!("internal error, please report: {e}"))
        }
        e => PyValueError::new_err(e.to_string()),
    }
}

fn strings(ws: &[Word]) -> Vec<String> {
    ws.iter().map(|w| w.to_string()).collect()
}

/// A derivation tree of the grammar G2.
#[pyclass(name = "Derivation", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyDerivation {
    inner: DerivationTree,
}

#[pymethods]
impl PyDerivation {
    #[getter]
    fn rule(&self) -> &str {
        &self.inner.rule
    }

    #[getter]
    fn args(&self) -> Vec<String> {
        strings(&self.inner.args)
    }

    #[getter]
    fn children(&self) -> Vec<PyDerivation> {
        self.inner
            .children
            .iter()
            .map(|t| PyDerivation { inner: t.clone() })
            .collect()
    }

    fn size(&self) -> usize {
        self.inner.size()
    }

    fn to_json(&self) -> String {
        to_json(&self.inner)
    }

    fn to_sexp(&self) -> String {
        to_sexp(&self.inner)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<PyDerivation> {
        from_json(text)
            .map(|inner| PyDerivation { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[staticmethod]
    fn from_sexp(text: &str) -> PyResult<PyDerivation> {
        from_sexp(text)
            .map(|inner| PyDerivation { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Checks the tree against G2 and returns the word it derives.
    fn certify(&self) -> PyResult<String> {
        certify(&g2(), &self.inner)
            .map(|w| w.to_string())
            .map_err(|r| DerivationError::new_err(r.to_string()))
    }

    /// Whether every node is a valid instance of a G2 rule.
    fn is_valid(&self) -> bool {
        grammar::check_derivation(&g2(), &self.inner).is_ok()
    }

    fn __repr__(&self) -> String {
        format!("Derivation({})", to_sexp(&self.inner))
    }
}

#[pyfunction]
#[pyo3(signature = (word, n = 2))]
fn is_balanced(word: &str, n: usize) -> PyResult<bool> {
    let w = self::word(word, n)?;
    words::is_balanced(&w, n).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyfunction]
#[pyo3(signature = (word, n = 2))]
fn balance(word: &str, n: usize) -> PyResult<Vec<i64>> {
    let w = self::word(word, n)?;
    words::balance(&w, n)
        .map(|b| b.deltas().to_vec())
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyfunction]
#[pyo3(signature = (word, n = 2))]
fn is_short(word: &str, n: usize) -> PyResult<bool> {
    Ok(self::word(word, n)?.is_short())
}

/// Bumps as `(direction, start, end)` with inclusive ends.
#[pyfunction]
#[pyo3(signature = (word, n = 2))]
fn bumps(word: &str, n: usize) -> PyResult<Vec<(String, usize, usize)>> {
    let w = self::word(word, n)?;
    Ok(words::bumps(&w)
        .into_iter()
        .map(|b| (b.direction.to_string(), b.start, b.end))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (word, strategy = "guided"))]
fn parse(py: Python<'_>, word: &str, strategy: &str) -> PyResult<PyDerivation> {
    let (w, s) = (self::word(word, 2)?, self::strategy(strategy)?);
    py.detach(|| parser::parse(&w, s))
        .map(|inner| PyDerivation { inner })
        .map_err(parse_err)
}

#[pyfunction]
fn reference_parse(py: Python<'_>, word: &str) -> PyResult<PyDerivation> {
    let w = self::word(word, 2)?;
    py.detach(|| oracle::reference_parse(&w))
        .map(|inner| PyDerivation { inner })
        .map_err(parse_err)
}

type Components = (Vec<String>, Vec<String>);

fn components(d: &BalDecomposition, sources: &[Word]) -> Components {
    let [a, b] = d.component_words(sources);
    (strings(&a), strings(&b))
}

/// The balanced decomposition of `(v, w)` chosen by the given strategy, as
/// the factor words of each component.
#[pyfunction]
#[pyo3(signature = (v, w, strategy = "guided"))]
fn decompose(v: &str, w: &str, strategy: &str) -> PyResult<Components> {
    let sources = [word(v, 2)?, word(w, 2)?];
    let d = parser::decompose_pair(&sources[0], &sources[1], self::strategy(strategy)?)
        .map_err(parse_err)?;
    Ok(components(&d, &sources))
}

#[pyfunction]
#[pyo3(signature = (v, w, limit = None))]
fn search(v: &str, w: &str, limit: Option<usize>) -> PyResult<Vec<Components>> {
    let sources = [word(v, 2)?, word(w, 2)?];
    let found = search_decompositions(&sources[0], &sources[1], SearchBudget::default());
    Ok(found
        .take(limit.unwrap_or(usize::MAX))
        .map(|d| components(&d, &sources))
        .collect())
}

/// `count` uniformly random balanced words of even length `length`.
#[pyfunction]
#[pyo3(signature = (length, count = 1, seed = 0))]
fn sample(length: usize, count: usize, seed: u64) -> PyResult<Vec<String>> {
    if length % 2 == 1 {
        return Err(PyValueError::new_err(format!(
            "no balanced word has odd length {length}"
        )));
    }
    Ok(strings(&o2_mcfg::sample::sample_words(length, count, seed)))
}

#[pyfunction]
fn enumerate_balanced(max_len: usize) -> Vec<String> {
    oracle::enumerate_balanced(max_len)
        .map(|w| w.to_string())
        .collect()
}

/// The `o2` Python module.
#[pymodule]
pub fn o2(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDerivation>()?;
    m.add("NotBalancedError", m.py().get_type::<NotBalancedError>())?;
    m.add("DerivationError", m.py().get_type::<DerivationError>())?;
    m.add_function(wrap_pyfunction!(is_balanced, m)?)?;
    m.add_function(wrap_pyfunction!(balance, m)?)?;
    m.add_function(wrap_pyfunction!(is_short, m)?)?;
    m.add_function(wrap_pyfunction!(bumps, m)?)?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(reference_parse, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_balanced, m)?)?;
    Ok(())
}
