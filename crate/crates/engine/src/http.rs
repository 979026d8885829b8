use std::time::Duration;

use adaudit_wire::{
    ApiError, AudienceCreated, CampaignCreated, CampaignSpec, DeliveryReport, ErrorBody, MarketingApi, RunCreated,
    RunRequest, UploadRow,
};
use serde::de::DeserializeOwned;

/// [`MarketingApi`] over HTTP/JSON.
#[derive(Debug, Clone)]
pub struct HttpApi {
    agent: ureq::Agent,
    base: String,
}

impl HttpApi {
    pub fn new(base_url: impl Into<String>) -> Self {
        let agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_connect(Some(Duration::from_secs(5)))
            .timeout_global(Some(Duration::from_secs(300)))
            .build()
            .into();
        Self { agent, base: base_url.into().trim_end_matches('/').to_string() }
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    fn url(&self, path: &str) -> String {
        format!("{}{path}", self.base)
    }

    fn decode<T: DeserializeOwned>(mut resp: ureq::http::Response<ureq::Body>) -> Result<T, ApiError> {
        let status = resp.status().as_u16();
        let text = resp
            .body_mut()
            .with_config()
            .limit(256 * 1024 * 1024)
            .read_to_string()
            .map_err(|e| ApiError::Transport(e.to_string()))?;
        if status >= 400 {
            let body: ErrorBody =
                serde_json::from_str(&text).map_err(|e| ApiError::Decode(format!("HTTP {status}: {e}: {text}")))?;
            return Err(ApiError::Status { status, body });
        }
        serde_json::from_str(&text).map_err(|e| ApiError::Decode(e.to_string()))
    }

    fn post<B: serde::Serialize, T: DeserializeOwned>(&self, path: &str, body: &B) -> Result<T, ApiError> {
        let resp = self.agent.post(self.url(path)).send_json(body).map_err(|e| ApiError::Transport(e.to_string()))?;
        Self::decode(resp)
    }
}

impl MarketingApi for HttpApi {
    fn upload_audience(&self, rows: &[UploadRow]) -> Result<AudienceCreated, ApiError> {
        self.post("/audiences", &rows)
    }

    fn create_campaign(&self, spec: &CampaignSpec) -> Result<CampaignCreated, ApiError> {
        self.post("/campaigns", spec)
    }

    fn start_run(&self, request: &RunRequest) -> Result<RunCreated, ApiError> {
        self.post("/runs", request)
    }

    fn fetch_report(&self, campaign_id: &str) -> Result<DeliveryReport, ApiError> {
        if campaign_id.contains(['/', '?', '#']) {
            return Err(ApiError::new(adaudit_wire::ErrorCode::NotFound, format!("bad campaign id {campaign_id:?}")));
        }
        let resp = self
            .agent
            .get(self.url(&format!("/reports/{campaign_id}")))
            .call()
            .map_err(|e| ApiError::Transport(e.to_string()))?;
        Self::decode(resp)
    }
}
