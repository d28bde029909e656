//! Scenario documents on disk.

use std::path::Path;

use rasp_core::decision::{ConsumerProfile, ExpConsumerPrior, WarrantyPolicy, WeibullPriorPair};
use rasp_core::rdsp::RdspBounds;
use rasp_core::scenario::{ExpManufacturerPrior, ManufacturerProfile, ModelPriors, Scenario};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Deserialize)]
struct ModelTag {
    model: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Priors<C, M> {
    consumer: C,
    manufacturer: M,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile<C, M> {
    model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    consumer: ConsumerProfile<f64>,
    manufacturer: ManufacturerProfile<f64>,
    warranty: WarrantyPolicy<f64>,
    priors: Priors<C, M>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rdsp: Option<RdspBounds<f64>>,
}

impl<C, M> ScenarioFile<C, M> {
    fn into_scenario(self, priors: impl FnOnce(C, M) -> ModelPriors<f64>) -> Scenario<f64> {
        Scenario {
            consumer: self.consumer,
            manufacturer: self.manufacturer,
            warranty: self.warranty,
            priors: priors(self.priors.consumer, self.priors.manufacturer),
            rdsp: self.rdsp,
        }
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str, origin: &str) -> Result<Scenario<f64>, CliError> {
    let syntax = |e: serde_json::Error| {
        CliError::Input(format!(
            "{origin}: line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    };
    let tag: ModelTag = serde_json::from_str(text).map_err(syntax)?;
    let scenario = match tag.model.as_str() {
        "exponential" => serde_json::from_str::<
            ScenarioFile<ExpConsumerPrior<f64>, ExpManufacturerPrior<f64>>,
        >(text)
        .map_err(syntax)?
        .into_scenario(|consumer, manufacturer| ModelPriors::Exponential {
            consumer,
            manufacturer,
        }),
        "weibull" => {
            serde_json::from_str::<ScenarioFile<WeibullPriorPair<f64>, WeibullPriorPair<f64>>>(text)
                .map_err(syntax)?
                .into_scenario(|consumer, manufacturer| ModelPriors::Weibull {
                    consumer,
                    manufacturer,
                })
        }
        other => {
            return Err(CliError::Input(format!(
                "{origin}: unknown model {other:?}; expected \"exponential\" or \"weibull\""
            )))
        }
    };
    scenario
        .validate()
        .map_err(|e| CliError::Input(format!("{origin}: {e}")))?;
    Ok(scenario)
}

pub fn load_scenario(path: &Path) -> Result<Scenario<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_scenario(&text, &path.display().to_string())
}
