//! Thin async client for the latdist HTTP API.

use std::time::Duration;

use latdist_api as api;
use serde::de::DeserializeOwned;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("transport error: {0}")]
    Http(#[from] reqwest::Error),
    #[error("{} (kind {}, exit code {})", .0.message, .0.kind, .0.exit_code)]
    Api(api::ErrorInfo),
    #[error("unexpected response with HTTP status {0}: {1}")]
    Protocol(u16, String),
}

pub type Result<T> = std::result::Result<T, ClientError>;

#[derive(Debug, Clone)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    /// `base` is e.g. "http://127.0.0.1:8317".
    pub fn new(base: impl Into<String>) -> Self {
        let mut base = base.into();
        while base.ends_with('/') {
            base.pop();
        }
        Client { base, http: reqwest::Client::new() }
    }

    fn url(&self, path: &str) -> String {
        format!("{}{}{}", self.base, api::API_BASE, path)
    }

    async fn decode<T: DeserializeOwned>(resp: reqwest::Response) -> Result<T> {
        let status = resp.status();
        if status.is_success() {
            return Ok(resp.json::<T>().await?);
        }
        let body = resp.text().await.unwrap_or_default();
        match serde_json::from_str::<api::ApiError>(&body) {
            Ok(err) => Err(ClientError::Api(err.error)),
            Err(_) => Err(ClientError::Protocol(status.as_u16(), body)),
        }
    }

    pub async fn health(&self) -> Result<api::HealthInfo> {
        Self::decode(self.http.get(self.url("/health")).send().await?).await
    }

    pub async fn bound(&self, req: &api::BoundRequest) -> Result<api::BoundResponse> {
        Self::decode(self.http.post(self.url("/bound")).json(req).send().await?).await
    }

    pub async fn reduce(&self, req: &api::ReduceRequest) -> Result<api::ReduceResponse> {
        Self::decode(self.http.post(self.url("/reduce")).json(req).send().await?).await
    }

    pub async fn submit(&self, req: &api::JobRequest) -> Result<api::JobCreated> {
        Self::decode(self.http.post(self.url("/jobs")).json(req).send().await?).await
    }

    pub async fn status(&self, id: u64) -> Result<api::JobStatus> {
        Self::decode(self.http.get(self.url(&format!("/jobs/{id}"))).send().await?).await
    }

    pub async fn report(&self, id: u64) -> Result<api::RunReport> {
        Self::decode(self.http.get(self.url(&format!("/jobs/{id}/report"))).send().await?).await
    }

    /// Polls until the job leaves the queued/running states, invoking
    /// `on_status` after every poll, then fetches the report. A failed job
    /// surfaces as `ClientError::Api` with the job's error info.
    pub async fn wait(
        &self,
        id: u64,
        poll: Duration,
        mut on_status: impl FnMut(&api::JobStatus),
    ) -> Result<api::RunReport> {
        loop {
            let status = self.status(id).await?;
            on_status(&status);
            match status.state.as_str() {
                "done" => return self.report(id).await,
                "failed" => {
                    return Err(ClientError::Api(status.error.unwrap_or(api::ErrorInfo {
                        kind: "internal".into(),
                        message: "job failed without an error record".into(),
                        exit_code: api::EXIT_INTERNAL,
                    })));
                }
                _ => tokio::time::sleep(poll).await,
            }
        }
    }
}
