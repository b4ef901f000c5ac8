//! Problem configs and their kind-specific payloads.

use serde::{Deserialize, Serialize};

use fredpair::corpus::DEFAULT_SEED;
use fredpair::loop_symbols::SymbolLiteral;
use fredpair::planar_models::DomainRecord;
use fredpair::rh_index::DEFAULT_WINDOW;
use fredpair::subspace_lab::DEFAULT_TOL;

use crate::UsageError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    SymbolIndex,
    Pair,
    Bordism,
    Surface,
    Chain,
    Verify,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Float,
    Rational,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    #[default]
    Quick,
    Full,
}

/// A config as read from disk. Missing settings take defaults on resolution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub kind: Kind,
    #[serde(default)]
    pub payload: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolIndexPayload {
    pub symbol: SymbolLiteral,
    #[serde(default = "default_curve_points")]
    pub curve_points: usize,
}

fn default_curve_points() -> usize {
    512
}

/// Subspaces of a common ambient space, each given by generator columns of
/// `[re, im]` entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairPayload {
    pub u: Vec<Vec<[f64; 2]>>,
    pub v: Vec<Vec<[f64; 2]>>,
    pub ambient: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BordismPayload {
    pub domain: DomainRecord,
    /// Map circle labels through the calibrated conventions.
    #[serde(default)]
    pub calibrated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfacePayload {
    pub domain: DomainRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainPayload {
    pub domains: Vec<DomainRecord>,
    #[serde(default)]
    pub calibrated: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyPayload {
    #[serde(default)]
    pub level: Level,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    SymbolIndex(SymbolIndexPayload),
    Pair(PairPayload),
    Bordism(BordismPayload),
    Surface(SurfacePayload),
    Chain(ChainPayload),
    Verify(VerifyPayload),
}

/// A config with every default materialized.
#[derive(Clone, Debug, PartialEq)]
pub struct Resolved {
    pub kind: Kind,
    pub payload: Payload,
    pub window: usize,
    pub tol: f64,
    pub backend: Backend,
    pub seed: u64,
}

fn typed<T: serde::de::DeserializeOwned>(v: &serde_json::Value, kind: Kind) -> Result<T, UsageError> {
    let v = if v.is_null() { serde_json::Value::Object(Default::default()) } else { v.clone() };
    serde_json::from_value(v).map_err(|e| UsageError(format!("bad {kind:?} payload: {e}")))
}

impl ProblemConfig {
    pub fn parse(text: &str) -> Result<Self, UsageError> {
        serde_json::from_str(text).map_err(|e| UsageError(format!("malformed config: {e}")))
    }

    pub fn resolve(&self) -> Result<Resolved, UsageError> {
        let payload = match self.kind {
            Kind::SymbolIndex => Payload::SymbolIndex(typed(&self.payload, self.kind)?),
            Kind::Pair => Payload::Pair(typed(&self.payload, self.kind)?),
            Kind::Bordism => Payload::Bordism(typed(&self.payload, self.kind)?),
            Kind::Surface => Payload::Surface(typed(&self.payload, self.kind)?),
            Kind::Chain => Payload::Chain(typed(&self.payload, self.kind)?),
            Kind::Verify => Payload::Verify(typed(&self.payload, self.kind)?),
        };
        let window = self.window.unwrap_or(match self.kind {
            Kind::Bordism | Kind::Surface | Kind::Chain => 32,
            _ => DEFAULT_WINDOW,
        });
        let tol = self.tol.unwrap_or(DEFAULT_TOL);
        if window == 0 {
            return Err(UsageError("window must be positive".into()));
        }
        if tol <= 0.0 || !tol.is_finite() {
            return Err(UsageError(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Resolved {
            kind: self.kind,
            payload,
            window,
            tol,
            backend: self.backend.unwrap_or_default(),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
        })
    }
}

impl Resolved {
    /// The config that re-runs to the same results.
    pub fn echo(&self) -> ProblemConfig {
        let payload = match &self.payload {
            Payload::SymbolIndex(p) => serde_json::to_value(p),
            Payload::Pair(p) => serde_json::to_value(p),
            Payload::Bordism(p) => serde_json::to_value(p),
            Payload::Surface(p) => serde_json::to_value(p),
            Payload::Chain(p) => serde_json::to_value(p),
            Payload::Verify(p) => serde_json::to_value(p),
        }
        .expect("payloads serialize");
        ProblemConfig {
            kind: self.kind,
            payload,
            window: Some(self.window),
            tol: Some(self.tol),
            backend: Some(self.backend),
            seed: Some(self.seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(ProblemConfig::parse(r#"{"kind":"verify","colour":1}"#).is_err());
        let c = ProblemConfig::parse(r#"{"kind":"verify","payload":{"level":"quick","extra":0}}"#).unwrap();
        assert!(c.resolve().is_err());
    }

    #[test]
    fn defaults_are_materialized() {
        let c = ProblemConfig::parse(r#"{"kind":"verify"}"#).unwrap();
        let echo = c.resolve().unwrap().echo();
        assert_eq!(echo.window, Some(DEFAULT_WINDOW));
        assert_eq!(echo.backend, Some(Backend::Float));
        assert_eq!(echo.payload, serde_json::json!({"level": "quick"}));
        assert_eq!(echo.resolve().unwrap().echo(), echo);
    }

    #[test]
    fn symbol_payload() {
        let c = ProblemConfig::parse(r#"{"kind":"symbol-index","payload":{"symbol":[{"degree":3,"matrix":[[1,0]]}]}}"#)
            .unwrap();
        let r = c.resolve().unwrap();
        match r.payload {
            Payload::SymbolIndex(p) => assert_eq!(p.curve_points, 512),
            _ => panic!(),
        }
    }
}
