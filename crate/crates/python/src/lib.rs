//! Python bindings: the text helpers, the decay arithmetic and a
//! conversational `Agent` with its own dialogue state.

use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Mutex;

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use arthur_core::dialogue::{DialogueState, TurnInput};
use arthur_core::memory::{self, EmotionLabel, DEFAULT_K};
use arthur_core::persistence::{load_ltm_or_empty, save_ltm};
use arthur_core::text::TextPipeline;
use arthur_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Validation(_) | Error::UnknownEvent(_) | Error::UnknownResource(_) => {
            PyValueError::new_err(e.to_string())
        }
        Error::Persistence(_) => PyIOError::new_err(e.to_string()),
        Error::Integrity(_) => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn default_text() -> &'static TextPipeline {
    static TEXT: std::sync::OnceLock<TextPipeline> = std::sync::OnceLock::new();
    TEXT.get_or_init(TextPipeline::default)
}

/// Content tokens of a sentence: lowercased, stop words removed, stemmed.
#[pyfunction]
fn tokenize(sentence: &str) -> Vec<String> {
    default_text().tokenize(sentence).into_vec()
}

#[pyfunction]
fn stem(word: &str) -> String {
    default_text().stem(word)
}

/// Sentence polarity in [-1, 1].
#[pyfunction]
fn polarity(sentence: &str) -> f64 {
    default_text().polarity(sentence)
}

/// Activation after `ticks` decay steps.
#[pyfunction]
#[pyo3(signature = (activation, ticks = 1))]
fn decay(activation: f64, ticks: u64) -> f64 {
    memory::decay_activation_n(activation, ticks)
}

#[pyfunction]
fn reduce_weight(weight: f64) -> f64 {
    memory::reduce_weight(weight)
}

struct Session {
    agent: arthur_core::Agent,
    state: DialogueState,
}

#[pyclass(name = "Agent")]
struct PyAgent {
    inner: Mutex<Session>,
    ltm_path: Option<PathBuf>,
}

impl PyAgent {
    fn with<R>(&self, f: impl FnOnce(&mut Session) -> R) -> R {
        let mut guard = self.inner.lock().unwrap_or_else(|p| p.into_inner());
        f(&mut guard)
    }
}

#[pymethods]
impl PyAgent {
    /// Opens the memory file at `ltm_path` if given (a missing file starts
    /// empty). Image paths are checked relative to `image_root`.
    #[new]
    #[pyo3(signature = (ltm_path = None, image_root = None))]
    fn new(ltm_path: Option<PathBuf>, image_root: Option<PathBuf>) -> PyResult<Self> {
        let ltm = match &ltm_path {
            Some(path) => load_ltm_or_empty(path).map_err(py_err)?,
            None => Default::default(),
        };
        let mut agent = arthur_core::Agent::new(
            memory::MemoryCore::with_ltm(ltm, memory::Clock::logical()),
            TextPipeline::default(),
        );
        if let Some(root) = image_root {
            agent = agent.with_image_root(root);
        }
        Ok(PyAgent {
            inner: Mutex::new(Session {
                agent,
                state: DialogueState::new(),
            }),
            ltm_path,
        })
    }

    /// One dialogue turn. Returns the reply as a dict.
    #[pyo3(signature = (text, person = None, emotion = "neutral", image = None))]
    fn turn<'py>(
        &self,
        py: Python<'py>,
        text: &str,
        person: Option<String>,
        emotion: &str,
        image: Option<String>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let emotion = EmotionLabel::from_str(emotion).map_err(py_err)?;
        let input = TurnInput {
            declared_person: person,
            text: text.to_string(),
            declared_emotion: emotion,
            attached_image: image,
        };
        let reply = self
            .with(|s| s.agent.turn(&mut s.state, input))
            .map_err(py_err)?;
        to_py(py, &reply)
    }

    /// Declares who is in front of the camera.
    #[pyo3(signature = (person = None))]
    fn identify<'py>(&self, py: Python<'py>, person: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
        let reply = self.with(|s| s.agent.identify(&mut s.state, person));
        to_py(py, &reply)
    }

    fn teach<'py>(&self, py: Python<'py>, term: &str, image: &str) -> PyResult<Bound<'py, PyAny>> {
        let reply = self.with(|s| s.agent.teach(term, image)).map_err(py_err)?;
        to_py(py, &reply)
    }

    /// Consolidates memory. Returns `{"reply": ..., "report": ...}`.
    fn sleep<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        #[derive(Serialize)]
        struct Slept {
            reply: arthur_core::dialogue::AgentReply,
            report: memory::ConsolidationReport,
        }
        let (reply, report) = self.with(|s| s.agent.sleep());
        to_py(py, &Slept { reply, report })
    }

    #[pyo3(signature = (n = 1))]
    fn tick(&self, n: u64) {
        self.with(|s| s.agent.tick(n));
    }

    /// Ranked events for the cues, without rehearsing them.
    #[pyo3(signature = (cues, k = DEFAULT_K))]
    fn recall<'py>(
        &self,
        py: Python<'py>,
        cues: Vec<String>,
        k: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let hits = self
            .with(|s| s.agent.memory().peek(&cues, k))
            .map_err(py_err)?;
        to_py(py, &hits)
    }

    fn fact(&self, person: &str, attribute: &str) -> PyResult<Option<String>> {
        self.with(|s| s.agent.memory().fact_lookup_named(person, attribute))
            .map_err(py_err)
    }

    fn people<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let people = self.with(|s| s.agent.memory().people());
        to_py(py, &people)
    }

    /// `(token, activation)` for every short-term memory slot.
    fn stm(&self) -> Vec<(String, f64)> {
        self.with(|s| {
            let memory = s.agent.memory();
            memory
                .stm()
                .slots()
                .iter()
                .filter_map(|slot| {
                    let r = memory.ltm().resource(slot.resource_id)?;
                    Some((r.information.summary(), slot.activation))
                })
                .collect()
        })
    }

    fn event_count(&self) -> usize {
        self.with(|s| s.agent.memory().ltm().event_count())
    }

    fn resource_count(&self) -> usize {
        self.with(|s| s.agent.memory().ltm().resource_count())
    }

    /// Writes long-term memory to `path`, or to the file it was opened from.
    /// Returns the number of records written.
    #[pyo3(signature = (path = None))]
    fn save(&self, path: Option<PathBuf>) -> PyResult<usize> {
        let path = path
            .or_else(|| self.ltm_path.clone())
            .ok_or_else(|| PyValueError::new_err("no memory file given"))?;
        self.with(|s| save_ltm(s.agent.memory().ltm(), &path))
            .map_err(|e| py_err(e.into()))
    }
}

#[pymodule]
fn arthur(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(stem, m)?)?;
    m.add_function(wrap_pyfunction!(polarity, m)?)?;
    m.add_function(wrap_pyfunction!(decay, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_weight, m)?)?;
    m.add_class::<PyAgent>()?;
    m.add("STM_CAPACITY", memory::STM_CAPACITY)?;
    m.add("ACTIVATION_THRESHOLD", memory::ACTIVATION_THRESHOLD)?;
    Ok(())
}
