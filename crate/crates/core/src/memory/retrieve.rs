//! Cue-driven (generative) retrieval over long-term memory.

use std::cmp::Ordering;

use serde::Serialize;

use super::ltm::LongTermMemory;
use super::types::{GeneralEvent, Resource};
use crate::error::{Error, Result};

/// Default number of events returned by a retrieval.
pub const DEFAULT_K: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetrievalHit {
    pub event: GeneralEvent,
    pub matched_cues: Vec<String>,
    pub score: usize,
    pub mean_weight: f64,
}

/// Lowercases, trims and deduplicates cues, keeping first-seen order.
pub fn normalize_cues<S: AsRef<str>>(cues: &[S]) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::with_capacity(cues.len());
    for cue in cues {
        let cue = cue.as_ref().trim().to_lowercase();
        if !cue.is_empty() && !out.contains(&cue) {
            out.push(cue);
        }
    }
    if out.is_empty() {
        return Err(Error::validation("retrieval needs at least one cue"));
    }
    Ok(out)
}

/// A cue matches a grammatical resource when it equals the token or one of
/// its words (multi-word terms and names).
pub(crate) fn cue_matches(cue: &str, resource: &Resource) -> bool {
    match resource.information.as_token() {
        Some(token) => token == cue || token.split_whitespace().any(|w| w == cue),
        None => false,
    }
}

pub(crate) fn mean_weight<'a>(resources: impl Iterator<Item = &'a Resource>) -> f64 {
    let (sum, n) = resources.fold((0.0, 0usize), |(s, n), r| (s + r.weight, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn rank(a: &RetrievalHit, b: &RetrievalHit) -> Ordering {
    b.score
        .cmp(&a.score)
        .then_with(|| b.mean_weight.total_cmp(&a.mean_weight))
        .then_with(|| b.event.timestamp.cmp(&a.event.timestamp))
        .then_with(|| a.event.id.cmp(&b.event.id))
}

/// Scores every event by the number of distinct cues it matches and returns
/// the top `k`. Cues must already be normalized.
pub(crate) fn rank_events(ltm: &LongTermMemory, cues: &[String], k: usize) -> Vec<RetrievalHit> {
    let mut hits: Vec<RetrievalHit> = ltm
        .events()
        .filter_map(|event| {
            let matched: Vec<String> = cues
                .iter()
                .filter(|cue| ltm.event_resources(event).any(|r| cue_matches(cue, r)))
                .cloned()
                .collect();
            if matched.is_empty() {
                return None;
            }
            Some(RetrievalHit {
                score: matched.len(),
                matched_cues: matched,
                mean_weight: mean_weight(ltm.event_resources(event)),
                event: event.clone(),
            })
        })
        .collect();
    hits.sort_by(rank);
    hits.truncate(k);
    hits
}
