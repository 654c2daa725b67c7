use std::fmt;
use std::time::Duration;

use thiserror::Error;

/// Reply used when no external chatbot is configured.
pub const CANNED_REPLY: &str = "I am not sure, tell me more.";
/// Reply used when the external chatbot fails or times out.
pub const APOLOGY: &str = "Sorry, I cannot answer that right now.";
pub const CHATBOT_URL_ENV: &str = "ARTHUR_CHATBOT_URL";
pub const DEFAULT_CHATBOT_TIMEOUT: Duration = Duration::from_secs(3);

#[derive(Debug, Error)]
#[error("chatbot unavailable: {0}")]
pub struct ChatbotError(pub String);

/// Open-domain responder for utterances the dialogue rules do not cover.
pub trait ChatbotClient: Send + fmt::Debug {
    fn reply(&self, utterance: &str) -> Result<String, ChatbotError>;
}

#[derive(Debug, Clone, Default)]
pub struct CannedChatbot;

impl ChatbotClient for CannedChatbot {
    fn reply(&self, _utterance: &str) -> Result<String, ChatbotError> {
        Ok(CANNED_REPLY.to_string())
    }
}

/// Posts the utterance as plain text and uses the response body as the reply.
#[derive(Debug, Clone)]
pub struct HttpChatbot {
    url: String,
    agent: ureq::Agent,
}

impl HttpChatbot {
    pub fn new(url: impl Into<String>, timeout: Duration) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .build()
            .into();
        HttpChatbot {
            url: url.into(),
            agent,
        }
    }

    pub fn url(&self) -> &str {
        &self.url
    }
}

impl ChatbotClient for HttpChatbot {
    fn reply(&self, utterance: &str) -> Result<String, ChatbotError> {
        let mut response = self
            .agent
            .post(&self.url)
            .header("Content-Type", "text/plain; charset=utf-8")
            .send(utterance)
            .map_err(|e| ChatbotError(e.to_string()))?;
        let body = response
            .body_mut()
            .read_to_string()
            .map_err(|e| ChatbotError(e.to_string()))?;
        let body = body.trim();
        if body.is_empty() {
            return Err(ChatbotError("empty reply".into()));
        }
        Ok(body.to_string())
    }
}

/// The HTTP client when a URL is given (or set in the environment), the
/// canned responder otherwise.
pub fn chatbot_from(url: Option<&str>, timeout: Duration) -> Box<dyn ChatbotClient> {
    let env = std::env::var(CHATBOT_URL_ENV).ok();
    match url
        .map(str::to_string)
        .or(env)
        .filter(|u| !u.trim().is_empty())
    {
        Some(url) => Box::new(HttpChatbot::new(url, timeout)),
        None => Box::new(CannedChatbot),
    }
}
