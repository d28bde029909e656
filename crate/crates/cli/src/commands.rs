use rasp_core::censoring::generate_hcs_sample;
use rasp_core::decision::{
    posttest_decision_exp, posttest_decision_weibull, pretest_decision, pretest_values_exp,
    pretest_values_weibull, Action, DecisionOutcome,
};
use rasp_core::lifetime::{Exponential, Weibull};
use rasp_core::numerics::{sample_gamma, sample_inverse_gamma, RngStream};
use rasp_core::rdsp::{estimate_action_probabilities, RdspEvaluation};
use rasp_core::scenario::ModelPriors;
use rasp_core::{
    evaluate_plan_exp, evaluate_plan_mc, evaluate_plan_rdsp, optimize, Baselines, Design, Engine,
    HcsSample, McConfig, Optimum, PlanEvaluation, Scenario, SearchSpace,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub fn default_engine(scenario: &Scenario<f64>) -> Engine {
    match scenario.priors {
        ModelPriors::Exponential { .. } => Engine::Exact,
        ModelPriors::Weibull { .. } => Engine::Mc,
    }
}

#[derive(Serialize)]
pub struct OptimizeReport {
    pub design: Design<f64>,
    /// Set when no test is run.
    pub action: Option<Action>,
    pub evaluation: PlanEvaluation<f64>,
    pub baselines: Baselines<f64>,
    pub pretest: Option<DecisionOutcome<f64>>,
    pub best_tested: Option<PlanEvaluation<f64>>,
    pub evaluated_designs: usize,
}

pub fn run_optimize(
    scenario: &Scenario<f64>,
    space: &SearchSpace<f64>,
    cfg: &McConfig,
) -> Result<(OptimizeReport, Optimum<f64>), CliError> {
    let opt = optimize(scenario, space, cfg)?;
    let report = OptimizeReport {
        design: opt.design,
        action: opt.action,
        evaluation: opt.evaluation.clone(),
        baselines: opt.baselines,
        pretest: opt.pretest,
        best_tested: opt.best_tested.clone(),
        evaluated_designs: opt.trace.len(),
    };
    Ok((report, opt))
}

pub fn run_evaluate(
    scenario: &Scenario<f64>,
    design: &Design<f64>,
    engine: Engine,
    cfg: &McConfig,
) -> Result<PlanEvaluation<f64>, CliError> {
    Ok(match engine {
        Engine::Exact => evaluate_plan_exp(design, scenario)?,
        Engine::Mc => evaluate_plan_mc(design, scenario, cfg)?,
        Engine::Rdsp => evaluate_plan_rdsp(design, scenario, require_bounds(scenario)?, cfg)?.plan,
    })
}

fn require_bounds(scenario: &Scenario<f64>) -> Result<&rasp_core::RdspBounds<f64>, CliError> {
    scenario
        .rdsp
        .as_ref()
        .ok_or_else(|| CliError::Input("scenario has no \"rdsp\" bounds".into()))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationFile {
    pub samples: Vec<HcsSample<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequencies: Option<Frequencies>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Frequencies {
    pub accept_no_warranty: f64,
    pub accept_with_warranty: f64,
    pub reject: f64,
    pub se_accept_no_warranty: f64,
    pub se_accept_with_warranty: f64,
    pub se_reject: f64,
}

/// Observed data: one sample, a list of samples, or a simulation file.
pub fn parse_samples(text: &str, origin: &str) -> Result<Vec<HcsSample<f64>>, CliError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| {
        CliError::Input(format!(
            "{origin}: line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    let parsed = match &value {
        serde_json::Value::Array(_) => serde_json::from_value(value),
        serde_json::Value::Object(m) if m.contains_key("samples") => {
            serde_json::from_value::<SimulationFile>(value).map(|f| f.samples)
        }
        _ => serde_json::from_value::<HcsSample<f64>>(value).map(|s| vec![s]),
    };
    parsed.map_err(|e| CliError::Input(format!("{origin}: {e}")))
}

#[derive(Serialize)]
pub struct DecisionReport {
    pub d: u32,
    pub v: f64,
    pub eta: f64,
    pub pretest: DecisionOutcome<f64>,
    pub posttest: DecisionOutcome<f64>,
    /// The consumer's final action: the pre-test action unless it sent the lot to test.
    pub action: Action,
}

pub fn pretest_outcome(scenario: &Scenario<f64>) -> Result<DecisionOutcome<f64>, CliError> {
    let values = match &scenario.priors {
        ModelPriors::Exponential { consumer, .. } => {
            pretest_values_exp(&scenario.consumer, &scenario.warranty, consumer)?
        }
        ModelPriors::Weibull { consumer, .. } => {
            pretest_values_weibull(&scenario.consumer, &scenario.warranty, consumer)?
        }
    };
    Ok(pretest_decision(
        &scenario.consumer,
        &scenario.warranty,
        &values,
    ))
}

pub fn posttest_outcome(
    scenario: &Scenario<f64>,
    sample: &HcsSample<f64>,
    s2: usize,
    rng: &mut RngStream,
) -> Result<DecisionOutcome<f64>, CliError> {
    Ok(match &scenario.priors {
        ModelPriors::Exponential { consumer, .. } => {
            posttest_decision_exp(sample, &scenario.consumer, &scenario.warranty, consumer)?
        }
        ModelPriors::Weibull { consumer, .. } => posttest_decision_weibull(
            sample,
            &scenario.consumer,
            &scenario.warranty,
            consumer,
            s2,
            rng,
        )?,
    })
}

pub fn run_decide(
    scenario: &Scenario<f64>,
    samples: &[HcsSample<f64>],
    s2: usize,
    seed: u64,
) -> Result<Vec<DecisionReport>, CliError> {
    let pretest = pretest_outcome(scenario)?;
    samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let posttest = posttest_outcome(scenario, s, s2, &mut RngStream::new(seed, i as u64))?;
            let action = if pretest.action == Action::Reject {
                posttest.action
            } else {
                pretest.action
            };
            Ok(DecisionReport {
                d: s.d(),
                v: s.v(),
                eta: s.eta(),
                pretest,
                posttest,
                action,
            })
        })
        .collect()
}

/// Simulates `count` lots under the manufacturer's prior and tallies the
/// consumer's post-test decisions.
pub fn run_simulate(
    scenario: &Scenario<f64>,
    design: &Design<f64>,
    count: u64,
    s2: usize,
    seed: u64,
) -> Result<SimulationFile, CliError> {
    design.require_test()?;
    let mut samples = Vec::with_capacity(count as usize);
    let mut tally = [0u64; 3];
    for u in 0..count {
        let root = RngStream::new(seed, u);
        let sample = match &scenario.priors {
            ModelPriors::Exponential { manufacturer, .. } => {
                let theta = sample_inverse_gamma(
                    manufacturer.alpha2,
                    manufacturer.beta2,
                    &mut root.child(0),
                )?;
                generate_hcs_sample(&Exponential::new(theta)?, design, &mut root.child(1))?
            }
            ModelPriors::Weibull { manufacturer, .. } => {
                let mut rng = root.child(0);
                let alpha = sample_gamma(
                    manufacturer.shape_hyper.shape,
                    manufacturer.shape_hyper.rate,
                    &mut rng,
                )?;
                let lambda = sample_gamma(
                    manufacturer.rate_hyper.shape,
                    manufacturer.rate_hyper.rate,
                    &mut rng,
                )?;
                generate_hcs_sample(&Weibull::new(alpha, lambda)?, design, &mut root.child(1))?
            }
        };
        let outcome = posttest_outcome(scenario, &sample, s2, &mut root.child(2))?;
        tally[match outcome.action {
            Action::AcceptNoWarranty => 0,
            Action::AcceptWithWarranty => 1,
            Action::Reject => 2,
        }] += 1;
        samples.push(sample);
    }
    let frequencies = (count > 0).then(|| {
        let n = count as f64;
        let p = tally.map(|c| c as f64 / n);
        let se = p.map(|p| (p * (1.0 - p) / n).sqrt());
        Frequencies {
            accept_no_warranty: p[0],
            accept_with_warranty: p[1],
            reject: p[2],
            se_accept_no_warranty: se[0],
            se_accept_with_warranty: se[1],
            se_reject: se[2],
        }
    });
    Ok(SimulationFile {
        samples,
        frequencies,
    })
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum RdspReport {
    Plan(RdspEvaluation<f64>),
    Probabilities(Vec<rasp_core::rdsp::ActionProbabilities<f64>>),
}

pub fn run_rdsp(
    scenario: &Scenario<f64>,
    design: Option<&Design<f64>>,
    samples: Option<&[HcsSample<f64>]>,
    k: Option<u32>,
    cfg: &McConfig,
) -> Result<RdspReport, CliError> {
    let mut bounds = *require_bounds(scenario)?;
    if let Some(k) = k {
        bounds.k = k;
    }
    match (design, samples) {
        (_, Some(samples)) => Ok(RdspReport::Probabilities(
            samples
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    estimate_action_probabilities(
                        s,
                        &bounds,
                        &scenario.warranty,
                        &mut RngStream::new(cfg.seed, i as u64),
                    )
                })
                .collect::<Result<_, _>>()?,
        )),
        (Some(design), None) => Ok(RdspReport::Plan(evaluate_plan_rdsp(
            design, scenario, &bounds, cfg,
        )?)),
        (None, None) => Err(CliError::Input(
            "rdsp needs a design (--n, --r, --t0) or --data".into(),
        )),
    }
}
