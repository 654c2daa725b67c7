//! Line-delimited JSON storage for long-term memory, and the key=value
//! configuration file.
//!
//! Records are written one per line, sorted by kind (event, resource,
//! person) and then by id or name, so an unchanged store always produces
//! the same bytes.

use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, PersistenceError, Result};
use crate::memory::{GeneralEvent, LongTermMemory, PersonProfile, Resource};

pub const DEFAULT_LTM_PATH: &str = "./arthur_ltm.jsonl";
pub const LTM_PATH_ENV: &str = "ARTHUR_LTM_PATH";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LtmRecord {
    Event(GeneralEvent),
    Resource(Resource),
    Person(PersonProfile),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PersistenceError + '_ {
    move |source| PersistenceError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn records(ltm: &LongTermMemory) -> Vec<LtmRecord> {
    // BTreeMap iteration already yields ids and names in order
    ltm.events()
        .cloned()
        .map(LtmRecord::Event)
        .chain(ltm.resources().cloned().map(LtmRecord::Resource))
        .chain(ltm.people().cloned().map(LtmRecord::Person))
        .collect()
}

pub fn serialize_ltm(ltm: &LongTermMemory) -> String {
    let mut out = String::new();
    for record in records(ltm) {
        out.push_str(&serde_json::to_string(&record).expect("records serialize"));
        out.push('\n');
    }
    out
}

/// Writes the store atomically and returns the byte count.
pub fn save_ltm(ltm: &LongTermMemory, path: &Path) -> Result<usize, PersistenceError> {
    save_ltm_with(ltm, path, |file, bytes| file.write_all(bytes))
}

/// [`save_ltm`] with a caller-supplied write step. The previous file is only
/// replaced after `write` and the flush succeed.
pub fn save_ltm_with<F>(
    ltm: &LongTermMemory,
    path: &Path,
    write: F,
) -> Result<usize, PersistenceError>
where
    F: FnOnce(&mut File, &[u8]) -> std::io::Result<()>,
{
    let bytes = serialize_ltm(ltm).into_bytes();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::Builder::new()
        .prefix(".arthur-ltm-")
        .suffix(".tmp")
        .tempfile_in(dir)
        .map_err(io_err(path))?;
    write(tmp.as_file_mut(), &bytes).map_err(io_err(path))?;
    tmp.as_file_mut().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| io_err(path)(e.error))?;
    Ok(bytes.len())
}

pub fn parse_ltm(text: &str, path: &Path) -> Result<LongTermMemory> {
    let mut events = Vec::new();
    let mut resources = Vec::new();
    let mut people = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: LtmRecord =
            serde_json::from_str(line).map_err(|e| PersistenceError::Malformed {
                path: path.to_path_buf(),
                line: idx + 1,
                message: e.to_string(),
            })?;
        match record {
            LtmRecord::Event(e) => events.push(e),
            LtmRecord::Resource(r) => resources.push(r),
            LtmRecord::Person(p) => people.push(p),
        }
    }
    Ok(LongTermMemory::from_parts(events, resources, people)?)
}

pub fn load_ltm(path: &Path) -> Result<LongTermMemory> {
    let text = fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            PersistenceError::NotFound(path.to_path_buf())
        } else {
            io_err(path)(source)
        }
    })?;
    parse_ltm(&text, path)
}

/// Loads the store, treating a missing file as an empty memory.
pub fn load_ltm_or_empty(path: &Path) -> Result<LongTermMemory> {
    match load_ltm(path) {
        Err(Error::Persistence(PersistenceError::NotFound(_))) => Ok(LongTermMemory::new()),
        other => other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TickMode {
    /// One decay step per dialogue turn.
    #[default]
    Turns,
    /// One decay step per elapsed tick period of wall clock.
    Seconds,
}

impl FromStr for TickMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "turns" => Ok(TickMode::Turns),
            "seconds" => Ok(TickMode::Seconds),
            other => Err(Error::Validation(format!(
                "tick mode must be 'turns' or 'seconds', got '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClockMode {
    Logical,
    System,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub tick_mode: TickMode,
    pub tick_period: Duration,
    /// Defaults to logical in turns mode and system in seconds mode.
    pub clock: Option<ClockMode>,
    pub show_thresholds: bool,
    pub ltm_path: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub stemmer_rules: Option<PathBuf>,
    pub chatbot_url: Option<String>,
    pub chatbot_timeout: Duration,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tick_mode: TickMode::Turns,
            tick_period: Duration::from_secs(2),
            clock: None,
            show_thresholds: false,
            ltm_path: None,
            stopwords: None,
            lexicon: None,
            stemmer_rules: None,
            chatbot_url: None,
            chatbot_timeout: Duration::from_secs(3),
        }
    }
}

impl Config {
    /// Parses `key = value` lines. Relative paths resolve against `base`.
    pub fn parse(text: &str, path: &Path) -> Result<Self, PersistenceError> {
        let base = path.parent().unwrap_or(Path::new(""));
        let mut config = Config::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| PersistenceError::Config {
                path: path.to_path_buf(),
                line: idx + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key = value, got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let resolve = |v: &str| base.join(v);
            match key {
                "tick_mode" => {
                    config.tick_mode = value.parse().map_err(|e: Error| bad(e.to_string()))?
                }
                "tick_seconds" => {
                    let secs: f64 = value
                        .parse()
                        .ok()
                        .filter(|s: &f64| *s > 0.0 && s.is_finite())
                        .ok_or_else(|| {
                            bad(format!("tick_seconds must be positive, got '{value}'"))
                        })?;
                    config.tick_period = Duration::from_secs_f64(secs);
                }
                "clock" => {
                    config.clock = Some(match value {
                        "logical" => ClockMode::Logical,
                        "system" => ClockMode::System,
                        other => return Err(bad(format!("unknown clock '{other}'"))),
                    })
                }
                "show_thresholds" => {
                    config.show_thresholds = value
                        .parse()
                        .map_err(|_| bad(format!("expected true/false, got '{value}'")))?
                }
                "ltm" | "ltm_path" => config.ltm_path = Some(resolve(value)),
                "stopwords" => config.stopwords = Some(resolve(value)),
                "lexicon" => config.lexicon = Some(resolve(value)),
                "stemmer_rules" => config.stemmer_rules = Some(resolve(value)),
                "chatbot_url" => {
                    config.chatbot_url = (!value.is_empty()).then(|| value.to_string())
                }
                "chatbot_timeout_ms" => {
                    let ms: u64 = value
                        .parse()
                        .map_err(|_| bad(format!("bad timeout '{value}'")))?;
                    config.chatbot_timeout = Duration::from_millis(ms);
                }
                other => return Err(bad(format!("unknown key '{other}'"))),
            }
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, PersistenceError> {
        let text = fs::read_to_string(path).map_err(|source| {
            if source.kind() == std::io::ErrorKind::NotFound {
                PersistenceError::NotFound(path.to_path_buf())
            } else {
                io_err(path)(source)
            }
        })?;
        Config::parse(&text, path)
    }

    pub fn clock_mode(&self) -> ClockMode {
        self.clock.unwrap_or(match self.tick_mode {
            TickMode::Turns => ClockMode::Logical,
            TickMode::Seconds => ClockMode::System,
        })
    }

    /// Command-line flag, then `ARTHUR_LTM_PATH`, then the config file, then
    /// `./arthur_ltm.jsonl`.
    pub fn resolve_ltm_path(&self, flag: Option<&Path>) -> PathBuf {
        if let Some(flag) = flag {
            return flag.to_path_buf();
        }
        if let Some(env) = std::env::var_os(LTM_PATH_ENV).filter(|v| !v.is_empty()) {
            return PathBuf::from(env);
        }
        self.ltm_path
            .clone()
            .unwrap_or_else(|| PathBuf::from(DEFAULT_LTM_PATH))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::{EmotionLabel, EventType, Information, MemoryCore};

    fn sample() -> LongTermMemory {
        let mut m = MemoryCore::default();
        let e = m
            .create_event(
                EventType::MeetNewPerson,
                EmotionLabel::Joy,
                0.25,
                vec![Information::token("knob"), Information::image("knob.png")],
            )
            .unwrap();
        m.register_person("knob", e.id).unwrap();
        m.ltm().clone()
    }

    #[test]
    fn empty_store_is_empty_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ltm.jsonl");
        assert_eq!(save_ltm(&LongTermMemory::new(), &path).unwrap(), 0);
        assert_eq!(fs::read(&path).unwrap().len(), 0);
        assert!(load_ltm(&path).unwrap().is_empty());
    }

    #[test]
    fn four_sorted_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ltm.jsonl");
        let ltm = sample();
        save_ltm(&ltm, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let kinds: Vec<String> = text
            .lines()
            .map(|l| {
                serde_json::from_str::<serde_json::Value>(l).unwrap()["kind"]
                    .as_str()
                    .unwrap()
                    .to_string()
            })
            .collect();
        assert_eq!(kinds, ["event", "resource", "resource", "person"]);
        assert_eq!(load_ltm(&path).unwrap(), ltm);

        let first = fs::read(&path).unwrap();
        save_ltm(&ltm, &path).unwrap();
        assert_eq!(fs::read(&path).unwrap(), first);
    }

    #[test]
    fn dangling_reference_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ltm.jsonl");
        save_ltm(&sample(), &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let without_event: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
        fs::write(&path, without_event).unwrap();
        let err = load_ltm(&path).unwrap_err();
        assert!(matches!(err, Error::Integrity(_)), "{err}");
        assert!(err.to_string().contains("e1"), "{err}");
    }

    #[test]
    fn malformed_line_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ltm.jsonl");
        save_ltm(&sample(), &path).unwrap();
        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str("{not json\n");
        fs::write(&path, text).unwrap();
        match load_ltm(&path).unwrap_err() {
            Error::Persistence(PersistenceError::Malformed { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_file_is_distinct() {
        let err = load_ltm(Path::new("/nonexistent/arthur.jsonl")).unwrap_err();
        assert!(matches!(
            err,
            Error::Persistence(PersistenceError::NotFound(_))
        ));
        assert!(load_ltm_or_empty(Path::new("/nonexistent/arthur.jsonl"))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn failed_write_leaves_previous_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ltm.jsonl");
        save_ltm(&sample(), &path).unwrap();
        let before = fs::read(&path).unwrap();

        let mut bigger = sample();
        bigger = {
            let mut m = MemoryCore::with_ltm(bigger, crate::memory::Clock::logical());
            m.create_event(
                EventType::Interaction,
                EmotionLabel::Neutral,
                0.0,
                vec![Information::token("weather")],
            )
            .unwrap();
            m.ltm().clone()
        };
        let err = save_ltm_with(&bigger, &path, |f, bytes| {
            f.write_all(&bytes[..bytes.len() / 2])?;
            Err(std::io::Error::other("disk full"))
        })
        .unwrap_err();
        assert!(err.to_string().contains("disk full"));
        assert_eq!(fs::read(&path).unwrap(), before);
        let leftovers = fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(leftovers, 1, "temp file cleaned up");
    }

    #[test]
    fn config_parsing() {
        let path = Path::new("/etc/arthur/arthur.conf");
        let c = Config::parse(
            "# comment\ntick_mode = seconds\ntick_seconds=0.5\nlexicon = data/lex.tsv\nshow_thresholds = true\nchatbot_timeout_ms = 250\n",
            path,
        )
        .unwrap();
        assert_eq!(c.tick_mode, TickMode::Seconds);
        assert_eq!(c.tick_period, Duration::from_millis(500));
        assert_eq!(
            c.lexicon.as_deref().unwrap(),
            Path::new("/etc/arthur/data/lex.tsv")
        );
        assert!(c.show_thresholds);
        assert_eq!(c.clock_mode(), ClockMode::System);
        assert_eq!(c.chatbot_timeout, Duration::from_millis(250));

        let err = Config::parse("a=1\nbogus", path).unwrap_err();
        assert!(matches!(err, PersistenceError::Config { line: 1, .. }));
        let err = Config::parse("tick_mode = sometimes", path).unwrap_err();
        assert!(err.to_string().contains("tick mode"));
    }

    #[test]
    fn ltm_path_precedence() {
        let c = Config {
            ltm_path: Some(PathBuf::from("from-config.jsonl")),
            ..Config::default()
        };
        assert_eq!(
            c.resolve_ltm_path(Some(Path::new("flag.jsonl"))),
            PathBuf::from("flag.jsonl")
        );
        if std::env::var_os(LTM_PATH_ENV).is_none() {
            assert_eq!(c.resolve_ltm_path(None), PathBuf::from("from-config.jsonl"));
            assert_eq!(
                Config::default().resolve_ltm_path(None),
                PathBuf::from(DEFAULT_LTM_PATH)
            );
        }
    }
}
