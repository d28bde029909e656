//! Search over life-test designs (n, r, T0).

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::censoring::Design;
use crate::decision::{
    pretest_decision, pretest_values_exp, pretest_values_weibull, Action, DecisionOutcome,
};
use crate::error::{Error, Result};
use crate::evaluation::{Baselines, PlanEvaluation};
use crate::exact::{baseline_utilities, evaluate_plan_exp};
use crate::mc::{evaluate_plan_mc, McConfig};
use crate::numerics::Real;
use crate::rdsp::evaluate_plan_rdsp;
use crate::scenario::{ModelPriors, Scenario};

/// Points per refinement pass.
const REFINE_POINTS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Exact,
    Mc,
    Rdsp,
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Engine::Exact),
            "mc" => Ok(Engine::Mc),
            "rdsp" => Ok(Engine::Rdsp),
            other => Err(Error::InvalidConfig(format!(
                "unknown engine {other:?}; expected exact, mc or rdsp"
            ))),
        }
    }
}

/// The designs to search and how.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpace<T> {
    pub n_max: u32,
    pub t_min: T,
    pub t_max: T,
    /// Points on the initial T0 grid.
    pub coarse_steps: usize,
    pub refine_iters: usize,
    pub engine: Engine,
    /// Replicates per design in the Monte Carlo screening pass.
    pub screen_s1: u64,
    /// Designs re-evaluated at the full budget after screening.
    pub finalists: usize,
}

impl<T: Real> SearchSpace<T> {
    pub fn new(n_max: u32, t_min: T, t_max: T, engine: Engine) -> Self {
        Self {
            n_max,
            t_min,
            t_max,
            coarse_steps: 48,
            refine_iters: 4,
            engine,
            screen_s1: 10_000,
            finalists: 10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max == 0
            || !(self.t_min > T::zero())
            || !(self.t_max > self.t_min)
            || !self.t_max.is_finite()
        {
            return Err(Error::InvalidConfig(format!(
                "search space needs n_max ≥ 1 and 0 < t_min < t_max (got n_max = {}, T0 in [{}, {}])",
                self.n_max, self.t_min, self.t_max
            )));
        }
        if self.coarse_steps < 2 || (self.engine != Engine::Exact && self.finalists == 0) {
            return Err(Error::InvalidConfig(
                "search space needs coarse_steps ≥ 2 and finalists ≥ 1".into(),
            ));
        }
        Ok(())
    }

    fn coarse_grid(&self) -> Vec<T> {
        let steps = self.coarse_steps;
        let h = (self.t_max - self.t_min) / T::of((steps - 1) as u64);
        (0..steps)
            .map(|i| {
                if i + 1 == steps {
                    self.t_max
                } else {
                    self.t_min + h * T::of(i as u64)
                }
            })
            .collect()
    }
}

/// Result of a design search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Optimum<T> {
    /// The chosen design; (0, 0, 0) when no test is run.
    pub design: Design<T>,
    pub evaluation: PlanEvaluation<T>,
    pub baselines: Baselines<T>,
    /// The consumer's action when no test is run.
    pub action: Option<Action>,
    /// The consumer's decision before any test, when it is known.
    pub pretest: Option<DecisionOutcome<T>>,
    /// Best tested design, if any was searched.
    pub best_tested: Option<PlanEvaluation<T>>,
    pub trace: Vec<PlanEvaluation<T>>,
}

impl<T: Real> Optimum<T> {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from(PlanEvaluation::<T>::CSV_HEADER);
        out.push('\n');
        for e in &self.trace {
            out.push_str(&e.csv_row());
            out.push('\n');
        }
        out
    }
}

/// Higher ψ wins; ties go to the lexicographically smaller (n, r, T0).
fn better<T: Real>(a: &PlanEvaluation<T>, b: &PlanEvaluation<T>) -> bool {
    match a.psi.partial_cmp(&b.psi) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Less) => false,
        _ => {
            (a.design.n, a.design.r) < (b.design.n, b.design.r)
                || ((a.design.n, a.design.r) == (b.design.n, b.design.r)
                    && a.design.t0 < b.design.t0)
        }
    }
}

fn no_test<T: Real>(action: Action, baselines: &Baselines<T>) -> PlanEvaluation<T> {
    let (o, z) = (T::one(), T::zero());
    match action {
        Action::AcceptNoWarranty => {
            PlanEvaluation::degenerate(baselines.accept_no_warranty, o, z, z, z)
        }
        Action::AcceptWithWarranty => PlanEvaluation::degenerate(
            baselines.accept_with_warranty,
            z,
            o,
            z,
            baselines.warranty_loss,
        ),
        Action::Reject => PlanEvaluation::degenerate(baselines.reject, z, z, o, z),
    }
}

fn pretest<T: Real>(scenario: &Scenario<T>) -> Result<DecisionOutcome<T>> {
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

struct Evaluator<'a, T> {
    scenario: &'a Scenario<T>,
    engine: Engine,
    cfg: McConfig,
}

impl<T: Real> Evaluator<'_, T> {
    fn eval(&self, design: &Design<T>) -> Result<PlanEvaluation<T>> {
        match self.engine {
            Engine::Exact => evaluate_plan_exp(design, self.scenario),
            Engine::Mc => evaluate_plan_mc(design, self.scenario, &self.cfg),
            Engine::Rdsp => {
                let bounds = self.scenario.rdsp.as_ref().ok_or_else(|| {
                    Error::InvalidConfig("the rdsp engine needs rdsp bounds in the scenario".into())
                })?;
                Ok(evaluate_plan_rdsp(design, self.scenario, bounds, &self.cfg)?.plan)
            }
        }
    }

    /// Coarse grid then repeated bracketing of the best point and its neighbours.
    fn search_pair(
        &self,
        n: u32,
        r: u32,
        space: &SearchSpace<T>,
    ) -> Result<Vec<PlanEvaluation<T>>> {
        let mut trace = Vec::new();
        let mut points = space.coarse_grid();
        let mut best: Option<PlanEvaluation<T>> = None;
        for iter in 0..=space.refine_iters {
            let mut evaluated: Vec<PlanEvaluation<T>> = Vec::with_capacity(points.len());
            for &t0 in &points {
                evaluated.push(self.eval(&Design::new(n, r, t0)?)?);
            }
            for e in &evaluated {
                if best.as_ref().is_none_or(|b| better(e, b)) {
                    best = Some(e.clone());
                }
            }
            trace.extend(evaluated);
            if iter == space.refine_iters {
                break;
            }
            // bracket: nearest evaluated T0 on each side of the incumbent
            let t_best = best.as_ref().expect("grid is nonempty").design.t0;
            let mut below = space.t_min;
            let mut above = space.t_max;
            for e in &trace {
                let t = e.design.t0;
                if t < t_best && t > below {
                    below = t;
                }
                if t > t_best && t < above {
                    above = t;
                }
            }
            let h = (above - below) / T::of((REFINE_POINTS + 1) as u64);
            points = (1..=REFINE_POINTS)
                .map(|i| below + h * T::of(i as u64))
                .filter(|&t| t != t_best && t >= space.t_min && t <= space.t_max)
                .collect();
            if points.is_empty() || !(h > T::zero()) {
                break;
            }
        }
        Ok(trace)
    }
}

/// Finds the design maximizing the manufacturer's expected utility.
///
/// If the consumer would decide before any test, no test is run. Otherwise
/// every (n, r) with 1 ≤ r ≤ n ≤ n_max is searched over T0, and the best
/// tested design is returned unless rejecting without a test pays more.
pub fn optimize<T: Real>(
    scenario: &Scenario<T>,
    space: &SearchSpace<T>,
    cfg: &McConfig,
) -> Result<Optimum<T>> {
    scenario.validate()?;
    space.validate()?;
    cfg.validate()?;
    let baselines = baseline_utilities(scenario)?;
    let before = if space.engine == Engine::Rdsp {
        None
    } else {
        Some(pretest(scenario)?)
    };
    if let Some(outcome) = before {
        if outcome.action != Action::Reject {
            return Ok(Optimum {
                design: Design::none(),
                evaluation: no_test(outcome.action, &baselines),
                baselines,
                action: Some(outcome.action),
                pretest: before,
                best_tested: None,
                trace: Vec::new(),
            });
        }
    }

    let pairs: Vec<(u32, u32)> = (1..=space.n_max)
        .flat_map(|n| (1..=n).map(move |r| (n, r)))
        .collect();
    let screen_cfg = McConfig {
        s1: if space.engine == Engine::Exact {
            cfg.s1
        } else {
            space.screen_s1.min(cfg.s1)
        },
        parallel_width: 1,
        ..*cfg
    };
    let evaluator = Evaluator {
        scenario,
        engine: space.engine,
        cfg: screen_cfg,
    };
    let run = || {
        pairs
            .par_iter()
            .map(|&(n, r)| evaluator.search_pair(n, r, space))
            .collect::<Result<Vec<_>>>()
    };
    let per_pair = if cfg.parallel_width == 1 {
        pairs
            .iter()
            .map(|&(n, r)| evaluator.search_pair(n, r, space))
            .collect::<Result<Vec<_>>>()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.parallel_width)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(run)?
    };
    let mut trace: Vec<PlanEvaluation<T>> = per_pair.into_iter().flatten().collect();

    let mut best = trace
        .iter()
        .fold(None::<&PlanEvaluation<T>>, |acc, e| match acc {
            Some(b) if !better(e, b) => Some(b),
            _ => Some(e),
        })
        .cloned()
        .ok_or_else(|| Error::InvalidConfig("empty search space".into()))?;

    if space.engine != Engine::Exact && screen_cfg.s1 < cfg.s1 {
        let mut ranked: Vec<&PlanEvaluation<T>> = trace.iter().collect();
        ranked.sort_by(|a, b| {
            if better(a, b) {
                Ordering::Less
            } else if better(b, a) {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        });
        let mut finalists: Vec<Design<T>> = Vec::new();
        for e in ranked {
            if finalists.len() == space.finalists {
                break;
            }
            if !finalists.contains(&e.design) {
                finalists.push(e.design);
            }
        }
        let full = Evaluator {
            scenario,
            engine: space.engine,
            cfg: *cfg,
        };
        let mut top: Option<PlanEvaluation<T>> = None;
        for d in &finalists {
            let e = full.eval(d)?;
            if top.as_ref().is_none_or(|b| better(&e, b)) {
                top = Some(e.clone());
            }
            trace.push(e);
        }
        best = top.expect("at least one finalist");
    }

    let (design, evaluation, action) = if best.psi < baselines.reject {
        (
            Design::none(),
            no_test(Action::Reject, &baselines),
            Some(Action::Reject),
        )
    } else {
        (best.design, best.clone(), None)
    };
    Ok(Optimum {
        design,
        evaluation,
        baselines,
        action,
        pretest: before,
        best_tested: Some(best),
        trace,
    })
}
