//! Python bindings: terms, machines, rewrite systems, ω-run exploration and
//! the bounded law checks.

use std::collections::HashMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use irw_core::encoders::{self, Construction};
use irw_core::laws::{self, fixtures, RConstructionOptions};
use irw_core::machine::{parse_machine, print_machine};
use irw_core::omega::{self as om, NdTmSpec};
use irw_core::rewrite::{self as rw, Bounds, SearchOutcome};
use irw_core::turing::{self as tm, TmOutcome, TmSpec};
use irw_core::{agreement_depth, bisim_equal, canonical_key, Signature};

fn err(e: irw_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite or rational term. Equality is bisimilarity.
#[pyclass(frozen, skip_from_py_object, module = "irw")]
#[derive(Clone)]
struct Term(irw_core::Term);

#[pymethods]
impl Term {
    /// Parses `text`. Without `arities` every applied identifier is a
    /// symbol and bare identifiers are constants.
    #[new]
    #[pyo3(signature = (text, arities = None))]
    fn new(text: &str, arities: Option<HashMap<String, usize>>) -> PyResult<Self> {
        let t = match arities {
            None => irw_core::term::parse_loose(text),
            Some(a) => {
                let mut sig = Signature::new();
                let mut names: Vec<_> = a.into_iter().collect();
                names.sort();
                for (name, arity) in names {
                    sig.add(&name, arity).map_err(err)?;
                }
                irw_core::parse_term(text, &sig)
            }
        };
        t.map(Term).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Term({:?})", self.0.to_string())
    }

    fn __eq__(&self, other: &Term) -> bool {
        bisim_equal(&self.0, &other.0)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        canonical_key(&self.0).hash(&mut h);
        h.finish()
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    fn truncate(&self, depth: usize) -> Term {
        Term(self.0.truncate(depth))
    }

    /// Length of the shortest position where the unfoldings differ; `None`
    /// when bisimilar.
    fn agreement_depth(&self, other: &Term) -> Option<usize> {
        agreement_depth(&self.0, &other.0)
    }
}

#[pyclass(frozen, skip_from_py_object, module = "irw")]
#[derive(Clone)]
struct Machine(irw_core::machine::Machine);

#[pymethods]
impl Machine {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_machine(text).map(Machine).map_err(err)
    }

    /// One of the built-in machines: m_acc, m_rej, m_ext, halt_now,
    /// nd_right, nd_pong, nd_two.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        fixtures::machine(name)
            .map(Machine)
            .ok_or_else(|| PyValueError::new_err(format!("no fixture `{name}`")))
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name.clone()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind.name()
    }

    fn __str__(&self) -> String {
        print_machine(&self.0)
    }
}

impl Machine {
    fn det(&self) -> PyResult<TmSpec> {
        TmSpec::new(self.0.clone()).map_err(err)
    }

    fn nd(&self) -> PyResult<NdTmSpec> {
        NdTmSpec::new(self.0.clone()).map_err(err)
    }
}

/// A rewrite system, optionally with a designated start term.
#[pyclass(frozen, module = "irw")]
struct Trs {
    inner: rw::Trs,
    start: Option<irw_core::Term>,
    text: String,
}

#[pymethods]
impl Trs {
    /// Parses a TRS file.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let file = rw::parse_trs(text).map_err(err)?;
        let start = match file.header_value("start") {
            Some(s) => Some(irw_core::parse_term(s, &file.trs.sig).map_err(err)?),
            None => None,
        };
        Ok(Trs {
            inner: file.trs,
            start,
            text: text.to_owned(),
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.text.clone()
    }

    #[getter]
    fn start(&self) -> Option<Term> {
        self.start.clone().map(Term)
    }

    fn rule_ids(&self) -> Vec<String> {
        self.inner.rules().iter().map(|r| r.id.clone()).collect()
    }

    /// Parses `text` against this system's signature.
    fn term(&self, text: &str) -> PyResult<Term> {
        irw_core::parse_term(text, &self.inner.sig)
            .map(Term)
            .map_err(err)
    }

    /// Searches for a trace to a normal form. Returns (normal form, trace
    /// text) or `None` when the bounds run out.
    #[pyo3(signature = (t, fuel = 10_000, epochs = 4, depth = 32))]
    fn normalize(
        &self,
        t: &Term,
        fuel: usize,
        epochs: usize,
        depth: usize,
    ) -> PyResult<Option<(Term, String)>> {
        let bounds = Bounds {
            fuel,
            max_epochs: epochs,
            depth_bound: depth,
        };
        let outcome = rw::bounded_normalize(&self.inner, &t.0, bounds).map_err(err)?;
        Ok(found(outcome))
    }

    #[pyo3(signature = (source, target, fuel = 10_000, epochs = 4, depth = 32))]
    fn reach(
        &self,
        source: &Term,
        target: &Term,
        fuel: usize,
        epochs: usize,
        depth: usize,
    ) -> PyResult<Option<(Term, String)>> {
        let bounds = Bounds {
            fuel,
            max_epochs: epochs,
            depth_bound: depth,
        };
        let outcome = rw::bounded_reach(&self.inner, &source.0, &target.0, bounds).map_err(err)?;
        Ok(found(outcome))
    }

    /// One-step reducts as (position, rule id, term).
    #[pyo3(signature = (t, depth = 32))]
    fn successors(&self, t: &Term, depth: usize) -> Vec<(String, String, Term)> {
        rw::successors(&self.inner, &t.0, depth)
            .into_iter()
            .map(|(r, after)| {
                let id = self.inner.rules()[r.rule].id.clone();
                (r.position.to_string(), id, Term(after))
            })
            .collect()
    }
}

fn found(outcome: SearchOutcome) -> Option<(Term, String)> {
    match outcome {
        SearchOutcome::Found { trace, term } => Some((Term(term), trace.render(false))),
        SearchOutcome::Exhausted(_) => None,
    }
}

/// Compiles a construction (base, pebbled, pickn, S, Sprime, srs, R).
#[pyfunction]
#[pyo3(signature = (construction, machine = None, as_printed = false))]
fn compile(construction: &str, machine: Option<&Machine>, as_printed: bool) -> PyResult<Trs> {
    let c = Construction::parse(construction)
        .ok_or_else(|| PyValueError::new_err(format!("unknown construction `{construction}`")))?;
    let compiled = encoders::compile(c, machine.map(|m| &m.0), as_printed).map_err(err)?;
    Ok(Trs {
        text: compiled.to_file(),
        start: compiled.start,
        inner: compiled.trs,
    })
}

/// Runs a deterministic machine from a configuration such as
/// `0 S q0 S 0`. Returns the visited configurations and whether the run
/// halted within `fuel` steps.
#[pyfunction]
#[pyo3(signature = (machine, config, fuel = 1000))]
fn tm_run(machine: &Machine, config: &str, fuel: usize) -> PyResult<(Vec<String>, bool)> {
    let m = machine.det()?;
    let start = tm::parse_config(&machine.0, config).map_err(err)?;
    let mut seen = Vec::new();
    let outcome = tm::tm_run(&m, &start, fuel, |c| seen.push(c.to_string()));
    Ok((seen, matches!(outcome, TmOutcome::Final { .. })))
}

/// The value on `q0 S^n 0`: an int, "undefined" or "unknown".
#[pyfunction]
#[pyo3(signature = (machine, n, fuel = 1000))]
fn eval_fun(py: Python<'_>, machine: &Machine, n: usize, fuel: usize) -> PyResult<Py<PyAny>> {
    Ok(match tm::eval_fun(&machine.det()?, n, fuel).map_err(err)? {
        tm::FunValue::Value(v) => v.into_pyobject(py)?.into_any().unbind(),
        tm::FunValue::Undefined => "undefined".into_pyobject(py)?.into_any().unbind(),
        tm::FunValue::Unknown => "unknown".into_pyobject(py)?.into_any().unbind(),
    })
}

/// "holds", "fails" or "unknown" on `0 S^n q0 S^k 0`.
#[pyfunction]
#[pyo3(signature = (machine, n, k, fuel = 1000))]
fn eval_rel(machine: &Machine, n: usize, k: usize, fuel: usize) -> PyResult<String> {
    Ok(tm::eval_rel(&machine.det()?, n, k, fuel)
        .map_err(err)?
        .to_string())
}

/// "accepted", "rejected_exhausted" or "unknown".
#[pyfunction]
#[pyo3(signature = (machine, word, fuel = 1000, width = 64))]
fn omega_member(machine: &Machine, word: &str, fuel: usize, width: usize) -> PyResult<String> {
    let w = om::parse_word(word).map_err(err)?;
    Ok(om::membership_semidecide(&machine.nd()?, &w, fuel, width)
        .name()
        .to_owned())
}

/// One (complete, oscillating, accepting) triple of "yes"/"no"/"unknown"
/// per explored run.
#[pyfunction]
#[pyo3(signature = (machine, word, fuel = 1000, width = 64))]
fn omega_classify(
    machine: &Machine,
    word: &str,
    fuel: usize,
    width: usize,
) -> PyResult<Vec<(String, String, String)>> {
    let w = om::parse_word(word).map_err(err)?;
    let ex = om::explore_runs(&machine.nd()?, &w, fuel, width);
    Ok(ex
        .runs
        .iter()
        .map(|r| {
            let c = om::classify_run(r);
            (
                c.complete.to_string(),
                c.oscillating.to_string(),
                c.accepting.to_string(),
            )
        })
        .collect())
}

#[pyclass(frozen, module = "irw")]
struct LawReport(laws::LawReport);

#[pymethods]
impl LawReport {
    #[getter]
    fn law(&self) -> String {
        self.0.law.clone()
    }

    /// "holds", "refuted" or "unknown".
    #[getter]
    fn verdict(&self) -> &'static str {
        self.0.verdict.name()
    }

    #[getter]
    fn samples(&self) -> usize {
        self.0.samples
    }

    fn holds(&self) -> bool {
        self.0.holds()
    }

    fn __str__(&self) -> String {
        self.0.render()
    }
}

#[pyfunction]
#[pyo3(signature = (machines = 200, configs = 5, steps = 50, seed = 0))]
fn check_two_sided(machines: usize, configs: usize, steps: usize, seed: u64) -> LawReport {
    LawReport(laws::check_two_sided_random(machines, configs, steps, seed))
}

#[pyfunction]
#[pyo3(signature = (machines = 100, depth = 100, seed = 0))]
fn check_srs(machines: usize, depth: usize, seed: u64) -> LawReport {
    LawReport(laws::check_srs_random(machines, depth, seed))
}

#[pyfunction]
#[pyo3(signature = (n_max = 50))]
fn check_pickn(n_max: usize) -> LawReport {
    LawReport(laws::check_pickn(n_max))
}

#[pyfunction]
#[pyo3(signature = (machine, firings = 5, fuel = 100_000))]
fn check_run_cycles(machine: &Machine, firings: usize, fuel: usize) -> PyResult<LawReport> {
    laws::check_run_cycles(&machine.det()?, firings, fuel)
        .map(LawReport)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (machine, firings = 5, fuel = 100_000, loop_fuel = 1000))]
fn check_pebble_limit(
    machine: &Machine,
    firings: usize,
    fuel: usize,
    loop_fuel: usize,
) -> PyResult<LawReport> {
    laws::check_pebble_limit(&machine.det()?, firings, fuel, loop_fuel)
        .map(LawReport)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (accepting, rejecting, fuel = 10_000, as_printed = false))]
fn check_r_construction(
    py: Python<'_>,
    accepting: &Machine,
    rejecting: &Machine,
    fuel: usize,
    as_printed: bool,
) -> PyResult<LawReport> {
    let (pos, neg) = (accepting.nd()?, rejecting.nd()?);
    let opts = RConstructionOptions {
        fuel,
        as_printed,
        ..RConstructionOptions::default()
    };
    py.detach(|| laws::check_r_construction(&pos, &neg, opts))
        .map(LawReport)
        .map_err(err)
}

/// Returns the report and the closed limit term, if one was found.
#[pyfunction]
#[pyo3(signature = (machine, word, fuel = 10_000))]
fn check_limit_correspondence(
    machine: &Machine,
    word: &str,
    fuel: usize,
) -> PyResult<(LawReport, Option<Term>)> {
    let w = om::parse_word(word).map_err(err)?;
    let (report, outcome) = laws::check_limit_correspondence(&machine.nd()?, &w, fuel);
    let limit = match outcome {
        laws::LimitOutcome::Closed(t) => Some(Term(t)),
        _ => None,
    };
    Ok((LawReport(report), limit))
}

#[pyfunction]
#[pyo3(signature = (machine, word, steps = 10_000))]
fn check_run_classification(machine: &Machine, word: &str, steps: usize) -> PyResult<LawReport> {
    let w = om::parse_word(word).map_err(err)?;
    Ok(LawReport(laws::check_run_classification(
        &machine.nd()?,
        &w,
        steps,
    )))
}

#[pymodule]
fn irw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Term>()?;
    m.add_class::<Machine>()?;
    m.add_class::<Trs>()?;
    m.add_class::<LawReport>()?;
    m.add_function(wrap_pyfunction!(compile, m)?)?;
    m.add_function(wrap_pyfunction!(tm_run, m)?)?;
    m.add_function(wrap_pyfunction!(eval_fun, m)?)?;
    m.add_function(wrap_pyfunction!(eval_rel, m)?)?;
    m.add_function(wrap_pyfunction!(omega_member, m)?)?;
    m.add_function(wrap_pyfunction!(omega_classify, m)?)?;
    m.add_function(wrap_pyfunction!(check_two_sided, m)?)?;
    m.add_function(wrap_pyfunction!(check_srs, m)?)?;
    m.add_function(wrap_pyfunction!(check_pickn, m)?)?;
    m.add_function(wrap_pyfunction!(check_run_cycles, m)?)?;
    m.add_function(wrap_pyfunction!(check_pebble_limit, m)?)?;
    m.add_function(wrap_pyfunction!(check_r_construction, m)?)?;
    m.add_function(wrap_pyfunction!(check_limit_correspondence, m)?)?;
    m.add_function(wrap_pyfunction!(check_run_classification, m)?)?;
    Ok(())
}
