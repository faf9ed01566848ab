//! HTTP clients for hosted model APIs.

use std::time::Duration;

use serde_json::{json, Value};

use crate::client::{ClientError, GenerateRequest, Generation, ModelClient};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provider {
    OpenAi,
    Anthropic,
    Google,
}

impl Provider {
    pub const ALL: [Provider; 3] = [Provider::OpenAi, Provider::Anthropic, Provider::Google];

    pub const fn name(self) -> &'static str {
        match self {
            Provider::OpenAi => "openai",
            Provider::Anthropic => "anthropic",
            Provider::Google => "google",
        }
    }

    pub fn from_name(name: &str) -> Option<Provider> {
        Provider::ALL.into_iter().find(|p| p.name() == name)
    }

    /// Environment variable holding the API key, e.g. `DRAWBENCH_OPENAI_KEY`.
    pub fn key_var(self) -> String {
        format!("DRAWBENCH_{}_KEY", self.name().to_uppercase())
    }

    /// Environment variable overriding the base URL.
    pub fn base_url_var(self) -> String {
        format!("DRAWBENCH_{}_BASE_URL", self.name().to_uppercase())
    }

    pub const fn default_base_url(self) -> &'static str {
        match self {
            Provider::OpenAi => "https://api.openai.com",
            Provider::Anthropic => "https://api.anthropic.com",
            Provider::Google => "https://generativelanguage.googleapis.com",
        }
    }
}

pub struct HttpClient {
    provider: Provider,
    model: String,
    id: String,
    api_key: String,
    base_url: String,
    agent: ureq::Agent,
}

impl std::fmt::Debug for HttpClient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HttpClient").field("id", &self.id).field("base_url", &self.base_url).finish_non_exhaustive()
    }
}

impl HttpClient {
    pub fn new(provider: Provider, model: &str, api_key: &str, base_url: &str, timeout: Duration) -> Self {
        let agent =
            ureq::Agent::config_builder().timeout_global(Some(timeout)).http_status_as_error(false).build().into();
        HttpClient {
            provider,
            model: model.into(),
            id: format!("{}:{model}", provider.name()),
            api_key: api_key.into(),
            base_url: base_url.trim_end_matches('/').into(),
            agent,
        }
    }

    /// Reads the key from the provider's environment variable. The base URL
    /// comes from `base_url`, then the environment, then the default.
    pub fn from_env(
        provider: Provider,
        model: &str,
        base_url: Option<&str>,
        timeout: Duration,
    ) -> Result<Self, ClientError> {
        let key = std::env::var(provider.key_var())
            .map_err(|_| ClientError::Config(format!("{} is not set", provider.key_var())))?;
        let base = match base_url {
            Some(b) => b.to_string(),
            None => std::env::var(provider.base_url_var()).unwrap_or_else(|_| provider.default_base_url().into()),
        };
        Ok(Self::new(provider, model, &key, &base, timeout))
    }

    fn post(&self, req: &GenerateRequest) -> Result<Value, ClientError> {
        let p = &req.params;
        let request = match self.provider {
            Provider::OpenAi => self
                .agent
                .post(format!("{}/v1/chat/completions", self.base_url))
                .header("authorization", format!("Bearer {}", self.api_key))
                .send_json(json!({
                    "model": self.model,
                    "messages": [{"role": "user", "content": req.prompt}],
                    "temperature": p.temperature,
                    "max_tokens": p.max_tokens,
                })),
            Provider::Anthropic => self
                .agent
                .post(format!("{}/v1/messages", self.base_url))
                .header("x-api-key", &self.api_key)
                .header("anthropic-version", "2023-06-01")
                .send_json(json!({
                    "model": self.model,
                    "max_tokens": p.max_tokens,
                    "temperature": p.temperature,
                    "messages": [{"role": "user", "content": req.prompt}],
                })),
            Provider::Google => self
                .agent
                .post(format!("{}/v1beta/models/{}:generateContent", self.base_url, self.model))
                .header("x-goog-api-key", &self.api_key)
                .send_json(json!({
                    "contents": [{"role": "user", "parts": [{"text": req.prompt}]}],
                    "generationConfig": {"temperature": p.temperature, "maxOutputTokens": p.max_tokens},
                })),
        };
        let mut resp = request.map_err(|e| match e {
            ureq::Error::Timeout(_) => ClientError::Timeout(Duration::ZERO),
            other => ClientError::Transport(other.to_string()),
        })?;
        let status = resp.status().as_u16();
        let body = resp.body_mut().read_to_string().map_err(|e| ClientError::Transport(e.to_string()))?;
        if !(200..300).contains(&status) {
            return Err(ClientError::Http { status, body });
        }
        serde_json::from_str(&body).map_err(|e| ClientError::Protocol(format!("invalid JSON body: {e}")))
    }
}

fn count(v: &Value, path: &[&str]) -> Option<u64> {
    path.iter().try_fold(v, |v, k| v.get(k)).and_then(Value::as_u64)
}

fn join_text<'a>(parts: impl Iterator<Item = &'a Value>, key: &str) -> String {
    parts.filter_map(|p| p.get(key).and_then(Value::as_str)).collect()
}

/// Extracts text and token counts from a provider response body.
pub fn parse_response(provider: Provider, v: &Value) -> Result<Generation, ClientError> {
    let missing = |what: &str| ClientError::Protocol(format!("response has no {what}"));
    match provider {
        Provider::OpenAi => {
            let text = v
                .pointer("/choices/0/message/content")
                .and_then(Value::as_str)
                .ok_or_else(|| missing("choices[0].message.content"))?;
            Ok(Generation {
                text: text.into(),
                input_tokens: count(v, &["usage", "prompt_tokens"]),
                output_tokens: count(v, &["usage", "completion_tokens"]),
            })
        }
        Provider::Anthropic => {
            let blocks = v.get("content").and_then(Value::as_array).ok_or_else(|| missing("content"))?;
            Ok(Generation {
                text: join_text(
                    blocks.iter().filter(|b| b.get("type").and_then(Value::as_str) == Some("text")),
                    "text",
                ),
                input_tokens: count(v, &["usage", "input_tokens"]),
                output_tokens: count(v, &["usage", "output_tokens"]),
            })
        }
        Provider::Google => {
            let parts = v
                .pointer("/candidates/0/content/parts")
                .and_then(Value::as_array)
                .ok_or_else(|| missing("candidates[0].content.parts"))?;
            Ok(Generation {
                text: join_text(parts.iter(), "text"),
                input_tokens: count(v, &["usageMetadata", "promptTokenCount"]),
                output_tokens: count(v, &["usageMetadata", "candidatesTokenCount"]),
            })
        }
    }
}

impl ModelClient for HttpClient {
    fn model_id(&self) -> &str {
        &self.id
    }

    fn generate(&self, req: &GenerateRequest) -> Result<Generation, ClientError> {
        parse_response(self.provider, &self.post(req)?)
    }
}
