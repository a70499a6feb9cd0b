//! Capacity bounds: the two lower bounds (majorization / phi-transform and
//! tail-conditioned / psi-transform) and the symmetrized-KL upper bound, each
//! reported together with numerically verified hypotheses.

mod lower;
mod upper;

pub use lower::{
    lower_bound_maj, lower_bound_maj_constrained, lower_bound_psi, majorization_integral,
    verify_majorization_condition, DELTA_SEARCH_RANGE,
};
pub use upper::{maximize_covariance, symkl_bound_at, upper_bound_closed_form, TwoPointSolution};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::channel::ExtReal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HypothesisStatus {
    /// Numerically checked and satisfied (grid/sampling semantics, not a
    /// formal certificate).
    Verified,
    /// Could not be checked; the bound is reported under this assumption.
    Assumed,
    Failed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypothesisResult {
    pub name: String,
    pub status: HypothesisStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl HypothesisResult {
    pub fn verified(name: &str) -> Self {
        Self { name: name.into(), status: HypothesisStatus::Verified, detail: None }
    }

    pub fn assumed(name: &str, detail: impl Into<String>) -> Self {
        Self { name: name.into(), status: HypothesisStatus::Assumed, detail: Some(detail.into()) }
    }

    pub fn failed(name: &str, detail: impl Into<String>) -> Self {
        Self { name: name.into(), status: HypothesisStatus::Failed, detail: Some(detail.into()) }
    }

    pub fn is_verified(&self) -> bool {
        self.status == HypothesisStatus::Verified
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    LowerMaj,
    LowerPsi,
    UpperSymKl,
}

/// A computed bound with its optimized parameters and hypothesis audit.
/// `value` may be infinite; if any hypothesis failed, the value is still
/// reported but [`BoundReport::is_valid_bound`] is false.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    value: ExtReal,
    pub params: BTreeMap<String, f64>,
    pub hypotheses: Vec<HypothesisResult>,
    pub fingerprint: String,
}

impl BoundReport {
    pub fn new(
        kind: BoundKind,
        value: f64,
        params: BTreeMap<String, f64>,
        hypotheses: Vec<HypothesisResult>,
        fingerprint: String,
    ) -> Self {
        Self { kind, value: ExtReal(value), params, hypotheses, fingerprint }
    }

    pub fn value(&self) -> f64 {
        self.value.0
    }

    pub fn is_valid_bound(&self) -> bool {
        self.hypotheses.iter().all(|h| h.status != HypothesisStatus::Failed)
    }

    pub fn hypothesis(&self, name: &str) -> Option<&HypothesisResult> {
        self.hypotheses.iter().find(|h| h.name == name)
    }
}
