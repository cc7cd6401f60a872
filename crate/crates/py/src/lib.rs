//! Python bindings: `import pyrichbound`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use num_bigint::BigUint;
use richbound::bounds::{self, BoundConfig, PhiSpec};
use richbound::eertree::{self, Letter, Word};
use richbound::richcount::{self, CountError, CountOptions};
use richbound::tower::Cmp3;

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn count_err(e: CountError) -> PyErr {
    match e {
        CountError::BudgetExceeded { .. }
        | CountError::NaiveBudget { .. }
        | CountError::SampleBudget { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => value_err(e),
    }
}

/// Parse letters `a..z0..9`; the alphabet defaults to the largest letter used.
fn parse_word(text: &str, q: Option<u32>) -> PyResult<(Word, u32)> {
    let w = Word::parse(text, u32::MAX).map_err(value_err)?;
    let q = q.unwrap_or_else(|| w.letters().iter().map(|l| l.0 + 1).max().unwrap_or(1));
    let w = w.validate(q).map_err(value_err)?;
    Ok((w, q))
}

/// Incremental palindromic tree over a q-letter alphabet.
#[pyclass(name = "PalTree")]
struct PyPalTree {
    inner: eertree::PalTree,
}

#[pymethods]
impl PyPalTree {
    #[new]
    fn new(q: u32) -> PyResult<Self> {
        Ok(PyPalTree {
            inner: eertree::PalTree::new(q).map_err(value_err)?,
        })
    }

    /// Append a letter (index or one-character string); True if a new
    /// palindrome appeared.
    fn push(&mut self, letter: &Bound<'_, PyAny>) -> PyResult<bool> {
        let l = if let Ok(i) = letter.extract::<u32>() {
            Letter(i)
        } else {
            let s: String = letter.extract()?;
            let mut cs = s.chars();
            match (cs.next(), cs.next()) {
                (Some(c), None) => Letter::from_char(c).map_err(value_err)?,
                _ => return Err(value_err("expected a single letter")),
            }
        };
        self.inner.push(l).map_err(value_err)
    }

    fn pop(&mut self) -> PyResult<()> {
        self.inner.pop().map_err(value_err)
    }

    /// Push every letter of a string; returns how many created palindromes.
    fn extend(&mut self, word: &str) -> PyResult<usize> {
        let (w, _) = parse_word(word, Some(self.inner.alphabet_size()))?;
        self.inner.extend(&w).map_err(value_err)
    }

    #[getter]
    fn pal_count(&self) -> usize {
        self.inner.pal_count()
    }

    #[getter]
    fn word(&self) -> String {
        self.inner.word().to_string()
    }

    #[getter]
    fn defect(&self) -> usize {
        self.inner.defect()
    }

    #[getter]
    fn longest_pal_suffix(&self) -> usize {
        self.inner.longest_pal_suffix()
    }

    fn is_rich(&self) -> bool {
        self.inner.is_rich()
    }

    fn __len__(&self) -> usize {
        self.inner.word_len()
    }
}

#[pyfunction]
#[pyo3(signature = (word, q=None))]
fn is_rich(word: &str, q: Option<u32>) -> PyResult<bool> {
    Ok(eertree::is_rich(&parse_word(word, q)?.0))
}

/// Sorted list of distinct non-empty palindromic factors, by brute force.
#[pyfunction]
fn palindromic_factors_naive(word: &str) -> PyResult<Vec<String>> {
    let (w, _) = parse_word(word, None)?;
    Ok(eertree::palindromic_factors_naive(&w)
        .into_iter()
        .map(|p| p.to_string())
        .collect())
}

/// `[R(1), ..., R(n)]`.
#[pyfunction]
#[pyo3(signature = (q, n, threads=1))]
fn count_rich(py: Python<'_>, q: u32, n: usize, threads: usize) -> PyResult<Vec<BigUint>> {
    let t = py
        .detach(|| richcount::count_rich_with(q, n, &CountOptions::threads(threads)))
        .map_err(count_err)?;
    Ok(t.rows.into_iter().map(|r| r.r).collect())
}

#[pyfunction]
fn count_rich_naive(q: u32, n: usize) -> PyResult<BigUint> {
    richcount::count_rich_naive(q, n).map_err(count_err)
}

/// Every rich word of length n in lexicographic order.
#[pyfunction]
fn enumerate_rich(q: u32, n: usize) -> PyResult<Vec<String>> {
    let mut out = Vec::new();
    richcount::enumerate_rich::<std::convert::Infallible, _>(q, n, |w| {
        out.push(w.to_string());
        Ok(())
    })
    .map_err(|e| match e {
        richcount::EnumerateError::Count(c) => count_err(c),
        richcount::EnumerateError::Sink(never) => match never {},
    })?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (q, n, seed=0))]
fn sample_rich(q: u32, n: usize, seed: u64) -> PyResult<String> {
    Ok(richcount::sample_rich(q, n, seed)
        .map_err(count_err)?
        .to_string())
}

/// Sound enclosure of a nonnegative real that may be far too large for a
/// float.
#[pyclass(name = "TowerReal", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyTower {
    inner: richbound::TowerReal,
}

fn tower(inner: richbound::TowerReal) -> PyTower {
    PyTower { inner }
}

#[pymethods]
impl PyTower {
    /// From a float, an int, or the text form `T(h; lo, hi)`.
    #[new]
    fn new(value: &Bound<'_, PyAny>) -> PyResult<Self> {
        if let Ok(n) = value.extract::<BigUint>() {
            return Ok(tower(richbound::TowerReal::from_biguint(&n)));
        }
        if let Ok(x) = value.extract::<f64>() {
            return Ok(tower(
                richbound::TowerReal::from_real(x).map_err(value_err)?,
            ));
        }
        let s: String = value.extract()?;
        Ok(tower(s.parse().map_err(value_err)?))
    }

    #[staticmethod]
    fn e_tower(n: u32) -> Self {
        tower(richbound::TowerReal::e_tower(n))
    }

    #[staticmethod]
    fn tetrate(base: &PyTower, n: u32) -> PyResult<Self> {
        Ok(tower(
            richbound::TowerReal::tetrate(&base.inner, n).map_err(value_err)?,
        ))
    }

    fn __add__(&self, o: &PyTower) -> Self {
        tower(self.inner.add(&o.inner))
    }

    fn __sub__(&self, o: &PyTower) -> PyResult<Self> {
        Ok(tower(self.inner.sub(&o.inner).map_err(value_err)?))
    }

    fn __mul__(&self, o: &PyTower) -> Self {
        tower(self.inner.mul(&o.inner))
    }

    fn __pow__(&self, o: &PyTower, _m: Option<&Bound<'_, PyAny>>) -> Self {
        tower(self.inner.pow(&o.inner))
    }

    fn ln(&self) -> PyResult<Self> {
        Ok(tower(self.inner.ln().map_err(value_err)?))
    }

    fn exp(&self) -> Self {
        tower(self.inner.exp())
    }

    fn ceil(&self) -> Self {
        tower(self.inner.ceil())
    }

    /// "less", "greater" or "indeterminate".
    fn cmp(&self, o: &PyTower) -> &'static str {
        self.inner.cmp(&o.inner).as_str()
    }

    /// `ln*`, or None when the enclosure straddles a level boundary.
    fn iter_log(&self) -> Option<u32> {
        self.inner.iter_log()
    }

    /// `(lo, hi)` as floats when the value fits.
    fn bounds(&self) -> Option<(f64, f64)> {
        self.inner.to_interval().map(|iv| (iv.lo, iv.hi))
    }

    fn contains(&self, x: f64) -> bool {
        self.inner.contains_f64(x)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("TowerReal('{}')", self.inner)
    }
}

/// Constants and function choices the bounds depend on.
#[pyclass(name = "BoundConfig", from_py_object)]
#[derive(Clone)]
struct PyBoundConfig {
    inner: BoundConfig,
}

#[pymethods]
impl PyBoundConfig {
    #[new]
    #[pyo3(signature = (q=2, phi="sqrt", lam=None, delta=None, gamma=None, c2=None, c=None, k1_exp=None, c6=None, n0=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        q: u32,
        phi: &str,
        lam: Option<f64>,
        delta: Option<f64>,
        gamma: Option<f64>,
        c2: Option<f64>,
        c: Option<f64>,
        k1_exp: Option<f64>,
        c6: Option<f64>,
        n0: Option<u64>,
    ) -> PyResult<Self> {
        let phi: PhiSpec = phi.parse().map_err(value_err)?;
        let mut cfg = BoundConfig::new(q.max(2), phi);
        cfg.q = q;
        if let Some(v) = lam {
            cfg.lambda = v;
        }
        if let Some(v) = delta {
            cfg.delta = v;
        }
        if let Some(v) = gamma {
            cfg.gamma = v;
        }
        if let Some(v) = c2 {
            cfg.c2 = v;
        }
        if let Some(v) = c {
            cfg.c = v;
        }
        if let Some(v) = k1_exp {
            cfg.k1_exp = v;
        }
        if let Some(v) = c6 {
            cfg.c6 = v;
        }
        if let Some(v) = n0 {
            cfg.n0 = v;
        }
        cfg.validate().map_err(value_err)?;
        Ok(PyBoundConfig { inner: cfg })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q
    }

    #[getter]
    fn lam(&self) -> f64 {
        self.inner.lambda
    }

    #[getter]
    fn n0(&self) -> u64 {
        self.inner.n0
    }

    #[getter]
    fn c6(&self) -> f64 {
        self.inner.c6
    }

    #[getter]
    fn phi(&self) -> String {
        self.inner.phi.to_string()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

#[pyfunction]
#[pyo3(signature = (n, c2=1.0))]
fn sigma(n: u64, c2: f64) -> PyResult<(f64, f64)> {
    let s = bounds::sigma(n, c2).map_err(value_err)?;
    Ok((s.lo, s.hi))
}

#[pyfunction]
fn bound_step(k: &PyTower, h: &PyTower, n: u64, c2: f64) -> PyResult<PyTower> {
    Ok(tower(
        bounds::bound_step(&k.inner, &h.inner, n, c2).map_err(value_err)?,
    ))
}

/// `(ratio verdict, scalar verdict)` for the step inequality.
#[pyfunction]
fn step_equivalence_check(
    n: u64,
    alpha: f64,
    k: &PyTower,
    cfg: &PyBoundConfig,
) -> PyResult<(&'static str, &'static str)> {
    let c = bounds::step_equivalence_check(n, alpha, &k.inner, &cfg.inner).map_err(value_err)?;
    Ok((c.ratio.as_str(), c.scalar.as_str()))
}

/// `(beta_j, K_j)`.
#[pyfunction]
fn beta_k(j: u32, cfg: &PyBoundConfig) -> PyResult<(PyTower, PyTower)> {
    if j == 0 {
        return Err(value_err("j must be at least 1"));
    }
    let (b, k) = bounds::beta_k(j, &cfg.inner);
    Ok((tower(b), tower(k)))
}

#[pyfunction]
fn tau(n: u64, cfg: &PyBoundConfig) -> u32 {
    bounds::tau(n, &cfg.inner)
}

#[pyfunction]
fn bound_g(n: u64, cfg: &PyBoundConfig) -> PyTower {
    tower(bounds::bound_g(n, &cfg.inner))
}

#[pyfunction]
fn f_exponent(n: u64, cfg: &PyBoundConfig) -> PyResult<f64> {
    Ok(bounds::f_exponent(n, &cfg.inner).map_err(value_err)?.mid())
}

/// `e(n)` with `B(n) = q^e(n)`, as `(lo, hi)`.
#[pyfunction]
fn bound_b_exponent(n: u64, cfg: &PyBoundConfig) -> PyResult<(f64, f64)> {
    let e = bounds::bound_b_exponent(n, &cfg.inner).map_err(value_err)?;
    Ok((e.lo, e.hi))
}

#[pyfunction]
fn bound_b(n: u64, cfg: &PyBoundConfig) -> PyResult<PyTower> {
    Ok(tower(bounds::bound_b(n, &cfg.inner).map_err(value_err)?))
}

#[pyfunction]
fn fit_c6(j: u32, cfg: &PyBoundConfig) -> PyResult<f64> {
    bounds::fit_c6(j, &cfg.inner).map_err(value_err)
}

/// Bound report as JSON text; exact counts are filled in for `n <= count_max`.
#[pyfunction]
#[pyo3(signature = (grid, cfg, count_max=16))]
fn report(
    py: Python<'_>,
    grid: Vec<u64>,
    cfg: &PyBoundConfig,
    count_max: usize,
) -> PyResult<String> {
    let cfg = cfg.inner.clone();
    py.detach(move || {
        let feasible = grid
            .iter()
            .copied()
            .filter(|&n| n as usize <= count_max)
            .max();
        let counts = feasible
            .map(|m| richcount::count_rich(cfg.q, m as usize))
            .transpose()
            .map_err(count_err)?;
        let rep = bounds::report(&grid, &cfg, counts.as_ref()).map_err(value_err)?;
        Ok(rep.to_json())
    })
}

/// Compare two towers; same strings as `TowerReal.cmp`.
#[pyfunction]
fn cmp(a: &PyTower, b: &PyTower) -> &'static str {
    let c: Cmp3 = a.inner.cmp(&b.inner);
    c.as_str()
}

#[pymodule]
fn pyrichbound(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPalTree>()?;
    m.add_class::<PyTower>()?;
    m.add_class::<PyBoundConfig>()?;
    m.add_function(wrap_pyfunction!(is_rich, m)?)?;
    m.add_function(wrap_pyfunction!(palindromic_factors_naive, m)?)?;
    m.add_function(wrap_pyfunction!(count_rich, m)?)?;
    m.add_function(wrap_pyfunction!(count_rich_naive, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_rich, m)?)?;
    m.add_function(wrap_pyfunction!(sample_rich, m)?)?;
    m.add_function(wrap_pyfunction!(sigma, m)?)?;
    m.add_function(wrap_pyfunction!(bound_step, m)?)?;
    m.add_function(wrap_pyfunction!(step_equivalence_check, m)?)?;
    m.add_function(wrap_pyfunction!(beta_k, m)?)?;
    m.add_function(wrap_pyfunction!(tau, m)?)?;
    m.add_function(wrap_pyfunction!(bound_g, m)?)?;
    m.add_function(wrap_pyfunction!(f_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(bound_b_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(bound_b, m)?)?;
    m.add_function(wrap_pyfunction!(fit_c6, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add_function(wrap_pyfunction!(cmp, m)?)?;
    Ok(())
}
