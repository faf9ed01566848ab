//! Model client interface and the scripted offline client.

use std::collections::BTreeMap;
use std::path::Path;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerateParams {
    pub temperature: f64,
    pub max_tokens: u32,
}

/// One generation call. `task_id`, `turn` and `attempt` let scripted clients
/// answer deterministically; network clients only use `prompt` and `params`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerateRequest {
    pub task_id: String,
    pub turn: u8,
    /// Zero-based retry counter within one turn.
    pub attempt: u32,
    pub prompt: String,
    pub params: GenerateParams,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Generation {
    pub text: String,
    pub input_tokens: Option<u64>,
    pub output_tokens: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClientError {
    #[error("no response within {0:?}")]
    Timeout(Duration),
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("HTTP {status}: {body}")]
    Http { status: u16, body: String },
    #[error("unexpected response: {0}")]
    Protocol(String),
    #[error("client configuration: {0}")]
    Config(String),
}

/// A text generator. Implementations must tolerate concurrent calls unless
/// [`ModelClient::concurrent`] returns false, in which case the harness
/// serializes them.
pub trait ModelClient: Send + Sync {
    /// Stable identifier recorded with every result, e.g. `openai:gpt-4.1`.
    fn model_id(&self) -> &str;

    fn generate(&self, request: &GenerateRequest) -> Result<Generation, ClientError>;

    fn concurrent(&self) -> bool {
        true
    }
}

/// One scripted reply: plain text, or an object that can also delay or fail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScriptedResponse {
    Text(String),
    Detailed {
        #[serde(default)]
        text: Option<String>,
        #[serde(default)]
        error: Option<String>,
        #[serde(default)]
        delay_ms: u64,
    },
}

/// Script document: replies per task id, then per turn (`"1"`, `"2"`), one
/// entry per attempt. The last entry repeats for later attempts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MockScript {
    #[serde(default = "default_model")]
    pub model: String,
    pub tasks: BTreeMap<String, BTreeMap<String, Vec<ScriptedResponse>>>,
    /// Reply for tasks or turns missing from `tasks`.
    #[serde(default)]
    pub fallback: Option<ScriptedResponse>,
}

fn default_model() -> String {
    "mock".into()
}

/// Replays a [`MockScript`]. Stateless: the reply depends only on the
/// request's task, turn and attempt.
#[derive(Debug, Clone)]
pub struct ScriptedMockClient {
    id: String,
    script: MockScript,
}

/// Scripted replies for the seed tasks.
pub const SEED_MOCK: &str = include_str!("../data/seed.mock.json");

impl ScriptedMockClient {
    pub fn new(script: MockScript) -> Self {
        ScriptedMockClient { id: script.model.clone(), script }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        Ok(Self::new(serde_json::from_str(text)?))
    }

    pub fn from_file(path: &Path) -> Result<Self, ClientError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ClientError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| ClientError::Config(format!("{}: {e}", path.display())))
    }

    pub fn seed() -> Self {
        Self::from_json(SEED_MOCK).expect("bundled mock script is valid")
    }

    fn lookup(&self, req: &GenerateRequest) -> Option<&ScriptedResponse> {
        let scripted = self
            .script
            .tasks
            .get(&req.task_id)
            .and_then(|turns| turns.get(&req.turn.to_string()))
            .and_then(|replies| replies.get(req.attempt as usize).or(replies.last()));
        scripted.or(self.script.fallback.as_ref())
    }
}

impl ModelClient for ScriptedMockClient {
    fn model_id(&self) -> &str {
        &self.id
    }

    fn generate(&self, req: &GenerateRequest) -> Result<Generation, ClientError> {
        let reply = self.lookup(req).ok_or_else(|| {
            ClientError::Transport(format!("no scripted reply for task '{}' turn {}", req.task_id, req.turn))
        })?;
        let text = match reply {
            ScriptedResponse::Text(t) => t.clone(),
            ScriptedResponse::Detailed { text, error, delay_ms } => {
                if *delay_ms > 0 {
                    thread::sleep(Duration::from_millis(*delay_ms));
                }
                if let Some(e) = error {
                    return Err(ClientError::Transport(e.clone()));
                }
                text.clone().unwrap_or_default()
            }
        };
        Ok(Generation { text, input_tokens: None, output_tokens: None })
    }
}
