//! Python bindings: `Slp`, `SemilocalCache`, window counting and
//! reporting, seaweed multiplication and the brute-force oracles.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use slpseq_core::recognition::{self, ReportMode, WindowCounter};
use slpseq_core::seaweed::{self, SeaweedPerm};
use slpseq_core::{oracle, slp};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn chars(s: &str) -> Vec<char> {
    s.chars().collect()
}

fn report_mode(mode: &str, w: Option<BigUint>) -> PyResult<ReportMode> {
    match (mode, w) {
        ("minimal", _) => Ok(ReportMode::Minimal),
        ("fixed", Some(w)) => Ok(ReportMode::Fixed(w)),
        ("bounded", Some(w)) => Ok(ReportMode::Bounded(w)),
        ("fixed" | "bounded", None) => Err(PyValueError::new_err(format!("mode {mode:?} needs w"))),
        _ => Err(PyValueError::new_err(format!("unknown mode {mode:?}; use minimal, fixed or bounded"))),
    }
}

/// A straight-line program for a text.
#[pyclass(name = "Slp", module = "slpseq", frozen)]
#[derive(Clone)]
pub struct PySlp {
    inner: Arc<slp::Slp>,
}

impl PySlp {
    fn wrap(inner: slp::Slp) -> Self {
        PySlp { inner: Arc::new(inner) }
    }

    pub fn slp(&self) -> &slp::Slp {
        &self.inner
    }

    fn cache(&self, pattern: &str, threads: usize) -> PyResult<recognition::SemilocalCache> {
        let p = chars(pattern);
        let built = if threads > 1 {
            recognition::SemilocalCache::build_parallel(&self.inner, &p, threads)
        } else {
            recognition::SemilocalCache::build(&self.inner, &p)
        };
        built.map_err(value_err)
    }
}

#[pymethods]
impl PySlp {
    /// Parses the line-oriented SLP format.
    #[staticmethod]
    pub fn parse(src: &str) -> PyResult<Self> {
        slp::Slp::parse(src).map(Self::wrap).map_err(value_err)
    }

    #[staticmethod]
    pub fn load(path: &str) -> PyResult<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| value_err(format!("{path}: {e}")))?;
        Self::parse(&src)
    }

    /// Balanced SLP for an explicit text.
    #[staticmethod]
    pub fn from_text(text: &str) -> PyResult<Self> {
        slp::Slp::from_text(text).map(Self::wrap).map_err(value_err)
    }

    pub fn serialize(&self) -> String {
        self.inner.serialize()
    }

    /// The text, refused when longer than `max_len` characters.
    #[pyo3(signature = (max_len = 1 << 20))]
    pub fn expand(&self, max_len: usize) -> PyResult<String> {
        self.inner.expand(self.inner.root(), max_len).map_err(value_err)
    }

    #[getter]
    pub fn text_length(&self) -> BigUint {
        self.inner.text_length().clone()
    }

    #[getter]
    pub fn root(&self) -> usize {
        self.inner.root()
    }

    pub fn __len__(&self) -> usize {
        self.inner.len()
    }

    pub fn __repr__(&self) -> String {
        format!("Slp(statements={}, text_length={})", self.inner.len(), self.inner.text_length())
    }

    pub fn contains(&self, pattern: &str) -> bool {
        recognition::contains(&self.inner, &chars(pattern))
    }

    pub fn prefix_len(&self, pattern: &str) -> usize {
        recognition::global_longest_prefix(&self.inner, &chars(pattern))
    }

    pub fn lcs(&self, pattern: &str) -> PyResult<usize> {
        recognition::lcs(&self.inner, &chars(pattern)).map_err(value_err)
    }

    pub fn count_minimal(&self, pattern: &str) -> PyResult<BigUint> {
        recognition::count_minimal_windows(&self.inner, &chars(pattern)).map(|c| c.0).map_err(value_err)
    }

    pub fn count_fixed(&self, pattern: &str, w: BigUint) -> PyResult<BigUint> {
        recognition::count_fixed_windows(&self.inner, &chars(pattern), &w).map(|c| c.0).map_err(value_err)
    }

    pub fn count_bounded(&self, pattern: &str, w: BigUint) -> PyResult<BigUint> {
        recognition::count_bounded_minimal(&self.inner, &chars(pattern), &w).map(|c| c.0).map_err(value_err)
    }

    /// Up to `limit` windows as 1-based inclusive `(start, end)` pairs, plus
    /// whether more exist.
    #[pyo3(signature = (pattern, mode = "minimal", w = None, limit = 100))]
    pub fn report(
        &self,
        pattern: &str,
        mode: &str,
        w: Option<BigUint>,
        limit: usize,
    ) -> PyResult<(Vec<(BigUint, BigUint)>, bool)> {
        let mode = report_mode(mode, w)?;
        let rep = recognition::report_windows(&self.inner, &chars(pattern), &mode, limit).map_err(value_err)?;
        Ok((rep.windows, rep.truncated))
    }

    /// Builds the per-symbol semilocal cache against `pattern`.
    #[pyo3(signature = (pattern, threads = 1))]
    pub fn semilocal(&self, pattern: &str, threads: usize) -> PyResult<PySemilocalCache> {
        Ok(PySemilocalCache { slp: self.inner.clone(), cache: self.cache(pattern, threads)? })
    }
}

/// Partial score matrices of every symbol against one pattern.
#[pyclass(name = "SemilocalCache", module = "slpseq", frozen)]
pub struct PySemilocalCache {
    slp: Arc<slp::Slp>,
    cache: recognition::SemilocalCache,
}

impl PySemilocalCache {
    fn index(&self) -> &slpseq_core::semilocal::DominanceIndex {
        &self.cache.entry(self.slp.root()).index
    }

    fn counter(&self) -> PyResult<WindowCounter<'_>> {
        WindowCounter::new(&self.slp, &self.cache).map_err(value_err)
    }
}

#[pymethods]
impl PySemilocalCache {
    #[getter]
    pub fn pattern(&self) -> String {
        self.cache.pattern().iter().collect()
    }

    /// Nonzeros of a symbol's matrix (default: the root) in rank coordinates,
    /// `(i, j)` standing for `(i + 1/2, j + 1/2)`.
    #[pyo3(signature = (symbol = None))]
    pub fn nonzeros(&self, symbol: Option<usize>) -> PyResult<Vec<(BigInt, BigInt)>> {
        let sym = symbol.unwrap_or(self.slp.root());
        if sym >= self.cache.len() {
            return Err(PyValueError::new_err(format!("symbol {sym} out of range")));
        }
        Ok(self.cache.entry(sym).matrix.nonzeros().to_vec())
    }

    /// LCS of the whole text against `P[j..j2]`.
    pub fn string_substring(&self, j: usize, j2: usize) -> PyResult<usize> {
        self.index().string_substring(j, j2).map_err(value_err)
    }

    /// LCS of the length-`l` text suffix against `P[..j2]`.
    pub fn suffix_prefix(&self, l: BigUint, j2: usize) -> PyResult<usize> {
        self.index().suffix_prefix(&l, j2).map_err(value_err)
    }

    /// LCS of the length-`l` text prefix against `P[j..]`.
    pub fn prefix_suffix(&self, l: BigUint, j: usize) -> PyResult<usize> {
        self.index().prefix_suffix(&l, j).map_err(value_err)
    }

    pub fn count_minimal(&self) -> PyResult<BigUint> {
        Ok(self.counter()?.minimal_counts(None).map_err(value_err)?.swap_remove(self.slp.root()))
    }

    pub fn count_fixed(&self, w: BigUint) -> PyResult<BigUint> {
        Ok(self.counter()?.fixed_counts(&w).map_err(value_err)?.swap_remove(self.slp.root()))
    }

    pub fn count_bounded(&self, w: BigUint) -> PyResult<BigUint> {
        Ok(self.counter()?.minimal_counts(Some(&w)).map_err(value_err)?.swap_remove(self.slp.root()))
    }

    #[pyo3(signature = (mode = "minimal", w = None, limit = 100))]
    pub fn report(&self, mode: &str, w: Option<BigUint>, limit: usize) -> PyResult<(Vec<(BigUint, BigUint)>, bool)> {
        let mode = report_mode(mode, w)?;
        let rep = recognition::report_windows_with_cache(&self.slp, &self.cache, &mode, limit).map_err(value_err)?;
        Ok((rep.windows, rep.truncated))
    }
}

fn perm(v: Vec<usize>) -> PyResult<SeaweedPerm> {
    SeaweedPerm::new(v).map_err(value_err)
}

/// Distance product of two permutations given as row-to-column lists.
#[pyfunction]
#[pyo3(signature = (a, b, oracle = false))]
pub fn mul_dist(a: Vec<usize>, b: Vec<usize>, oracle: bool) -> PyResult<Vec<usize>> {
    let (a, b) = (perm(a)?, perm(b)?);
    let c = if oracle { seaweed::mul_dist_oracle(&a, &b) } else { seaweed::mul_dist_fast(&a, &b) };
    Ok(c.map_err(value_err)?.row_to_col().to_vec())
}

#[pyfunction]
pub fn oracle_lcs(a: &str, b: &str) -> usize {
    oracle::oracle_lcs(&chars(a), &chars(b))
}

/// Critical points of the extended score matrix of `a` against `b`.
#[pyfunction]
pub fn oracle_semilocal(a: &str, b: &str) -> PyResult<Vec<(i64, i64)>> {
    oracle::oracle_semilocal(&chars(a), &chars(b)).map_err(value_err)
}

#[pyfunction]
pub fn oracle_count_minimal(t: &str, p: &str) -> PyResult<usize> {
    oracle::oracle_count_minimal(&chars(t), &chars(p)).map_err(value_err)
}

#[pyfunction]
pub fn oracle_count_fixed(t: &str, p: &str, w: usize) -> PyResult<usize> {
    oracle::oracle_count_fixed(&chars(t), &chars(p), w).map_err(value_err)
}

#[pyfunction]
pub fn oracle_count_bounded(t: &str, p: &str, w: usize) -> PyResult<usize> {
    oracle::oracle_count_bounded(&chars(t), &chars(p), w).map_err(value_err)
}

#[pymodule]
fn slpseq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySlp>()?;
    m.add_class::<PySemilocalCache>()?;
    m.add_function(wrap_pyfunction!(mul_dist, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_lcs, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_semilocal, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_count_minimal, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_count_fixed, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_count_bounded, m)?)?;
    Ok(())
}
