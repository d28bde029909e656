//! Regenerates the published tables side by side with the published values.

use std::fmt::Write as _;

use rasp_core::{Design, Engine, McConfig, PlanEvaluation, Scenario, SearchSpace};

use crate::commands::{parse_samples, run_decide, run_evaluate, run_optimize};
use crate::error::CliError;
use crate::fixtures;
use crate::scenario_file::parse_scenario;

/// A published row: design, ψ, (P(A_wo), P(A_w), P(R)), E[D], E[η], L_w.
#[derive(Debug, Clone, Copy)]
pub struct PaperRow {
    pub design: (u32, u32, f64),
    pub psi: f64,
    pub probs: [f64; 3],
    pub e_d: f64,
    pub e_eta: f64,
    pub l_w: f64,
}

const fn row(
    design: (u32, u32, f64),
    psi: f64,
    probs: [f64; 3],
    e_d: f64,
    e_eta: f64,
    l_w: f64,
) -> PaperRow {
    PaperRow {
        design,
        psi,
        probs,
        e_d,
        e_eta,
        l_w,
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Override {
    Base,
    A3(f64),
    B1(f64),
    B3(f64),
    Prior(f64, f64),
    B6(f64),
}

impl Override {
    pub fn apply(&self, s: &mut Scenario<f64>) {
        match *self {
            Override::Base => {}
            Override::A3(x) => s.consumer.a3 = x,
            Override::B1(x) => s.manufacturer.b1 = x,
            Override::B3(x) => s.manufacturer.b3 = x,
            Override::B6(x) => s.manufacturer.b6 = x,
            Override::Prior(a, b) => {
                if let rasp_core::ModelPriors::Exponential { manufacturer, .. } = &mut s.priors {
                    manufacturer.alpha2 = a;
                    manufacturer.beta2 = b;
                }
            }
        }
    }

    fn label(&self) -> String {
        match *self {
            Override::Base => "base".into(),
            Override::A3(x) => format!("a3={x}"),
            Override::B1(x) => format!("b1={x}"),
            Override::B3(x) => format!("b3={x}"),
            Override::B6(x) => format!("b6={x}"),
            Override::Prior(a, b) => format!("alpha2={a};beta2={b}"),
        }
    }
}

const TABLE1: PaperRow = row((5, 2, 5.75), 70.81, [0.18, 0.24, 0.58], 1.40, 3.95, 0.09);
const TABLE7: PaperRow = row((3, 3, 4.73), 85.08, [0.50, 0.37, 0.13], 1.03, 4.59, 1.14);

/// Rows of tables 1–6 (exponential, deterministic consumer).
pub fn exact_table(id: u32) -> Option<Vec<(Override, PaperRow)>> {
    use Override::*;
    Some(match id {
        1 => vec![(Base, TABLE1)],
        2 => vec![
            (
                A3(8.0),
                row((5, 2, 10.63), 57.69, [0.10, 0.13, 0.77], 1.69, 5.46, 0.02),
            ),
            (A3(9.0), TABLE1),
            (
                A3(10.0),
                row((4, 2, 4.03), 81.30, [0.32, 0.32, 0.36], 1.05, 3.35, 0.19),
            ),
            (
                A3(11.0),
                row((1, 1, 1.71), 89.38, [0.0, 0.85, 0.15], 0.15, 1.57, 0.50),
            ),
            (
                A3(12.0),
                row((0, 0, 0.0), 92.03, [0.0, 1.0, 0.0], 0.0, 0.0, 0.92),
            ),
        ],
        3 => vec![
            (
                B1(3.0),
                row((5, 1, 3.30), 29.31, [0.0, 0.31, 0.69], 0.52, 3.12, 0.21),
            ),
            (
                B1(5.0),
                row((2, 1, 6.55), 38.59, [0.0, 0.37, 0.63], 0.63, 3.99, 0.11),
            ),
            (B1(10.0), TABLE1),
            (
                B1(15.0),
                row((8, 5, 10.21), 106.85, [0.34, 0.13, 0.53], 3.75, 7.89, 0.07),
            ),
            (
                B1(20.0),
                row((10, 7, 11.76), 144.26, [0.36, 0.14, 0.50], 5.28, 9.47, 0.07),
            ),
        ],
        4 => vec![
            (
                B3(15.0),
                row((8, 4, 7.46), 65.22, [0.32, 0.14, 0.54], 2.94, 5.65, 0.07),
            ),
            (
                B3(35.0),
                row((5, 2, 5.75), 76.62, [0.18, 0.24, 0.58], 1.40, 3.95, 0.09),
            ),
            (
                B3(55.0),
                row((4, 2, 7.67), 88.37, [0.17, 0.24, 0.69], 1.42, 5.21, 0.09),
            ),
            (
                B3(110.0),
                row((2, 1, 11.50), 123.10, [0.23, 0.0, 0.77], 0.77, 5.43, 0.0),
            ),
        ],
        5 => vec![
            (
                Prior(2.8, 18.0),
                row((2, 1, 6.55), 33.21, [0.0, 0.22, 0.78], 0.78, 3.13, 0.14),
            ),
            (
                Prior(2.8, 28.0),
                row((5, 2, 5.75), 48.42, [0.14, 0.24, 0.62], 1.48, 3.88, 0.11),
            ),
            (
                Prior(1.8, 28.0),
                row((8, 5, 10.13), 112.96, [0.51, 0.15, 0.34], 3.10, 8.93, 0.06),
            ),
            (
                Prior(18.0, 180.0),
                row((2, 1, 6.55), 30.40, [0.0, 0.28, 0.72], 0.72, 3.69, 0.20),
            ),
        ],
        6 => vec![
            (
                B6(0.0),
                row((5, 5, 33.29), 76.41, [0.33, 0.13, 0.54], 4.24, 23.06, 0.06),
            ),
            (
                B6(0.1),
                row((6, 5, 17.37), 74.36, [0.33, 0.13, 0.54], 3.91, 13.18, 0.07),
            ),
            (
                B6(1.0),
                row((6, 2, 4.60), 68.95, [0.19, 0.24, 0.57], 1.39, 3.19, 0.09),
            ),
            (
                B6(3.0),
                row((8, 2, 3.29), 63.67, [0.20, 0.23, 0.57], 1.37, 2.30, 0.09),
            ),
        ],
        _ => return None,
    })
}

/// Rows of tables 7–8 (random consumer).
pub fn rdsp_table(id: u32) -> Option<Vec<(Override, PaperRow)>> {
    use Override::*;
    Some(match id {
        7 => vec![(Base, TABLE7)],
        8 => vec![
            (
                B1(5.0),
                row((2, 1, 5.45), 39.37, [0.46, 0.27, 0.27], 0.57, 3.56, 0.83),
            ),
            (B1(10.0), TABLE7),
            (
                B1(15.0),
                row((5, 4, 4.93), 132.38, [0.68, 0.23, 0.09], 1.62, 4.40, 0.70),
            ),
            (
                B1(20.0),
                row((5, 5, 4.94), 180.13, [0.69, 0.22, 0.09], 1.74, 4.90, 0.68),
            ),
        ],
        _ => return None,
    })
}

/// Published post-test decisions on five application datasets: failures, e1, e2.
pub const DECISION_ROWS: [(&[f64], f64, f64); 5] = [
    (&[0.243, 0.354, 0.457], -512.83, -787.44),
    (&[0.020, 0.155, 0.272, 0.423], 645.61, 107.01),
    (&[0.150, 0.220, 0.250, 0.465], 42.01, -356.93),
    (&[0.103, 0.151, 0.230, 0.405, 0.420], 441.06, -45.22),
    (&[0.038], -173.01, -534.39),
];

/// Application design and its published post-test probabilities.
pub const APP_DESIGN: (u32, u32, f64) = (10, 5, 0.481);
pub const APP_PROBS: [f64; 3] = [0.35, 0.24, 0.41];

pub const CSV_HEADER: &str = "table,param,source,n,r,t0,psi,p_awo,p_aw,p_r,e_d,e_eta,l_w";

/// Options for the reproduction run.
#[derive(Debug, Clone, Copy)]
pub struct ReproduceOptions {
    pub cfg: McConfig,
    /// Re-optimize random-consumer rows instead of evaluating the published design.
    pub search: bool,
    pub n_max: u32,
}

fn deviation(computed: f64, paper: f64) -> f64 {
    if paper.abs() > 1e-12 {
        (computed - paper) / paper.abs()
    } else {
        computed - paper
    }
}

fn paper_fields(p: &PaperRow) -> [f64; 7] {
    [
        p.psi, p.probs[0], p.probs[1], p.probs[2], p.e_d, p.e_eta, p.l_w,
    ]
}

fn eval_fields(e: &PlanEvaluation<f64>) -> [f64; 7] {
    [e.psi, e.p_awo, e.p_aw, e.p_r, e.e_d, e.e_eta, e.l_w]
}

fn push_rows(
    out: &mut String,
    table: &str,
    param: &str,
    paper: &PaperRow,
    computed: &PlanEvaluation<f64>,
) {
    let join = |xs: [f64; 7]| {
        xs.iter()
            .map(|x| format!("{x:.6}"))
            .collect::<Vec<_>>()
            .join(",")
    };
    let (n, r, t0) = paper.design;
    let d = computed.design;
    let pf = paper_fields(paper);
    let cf = eval_fields(computed);
    let dev: [f64; 7] = std::array::from_fn(|k| deviation(cf[k], pf[k]));
    let _ = writeln!(out, "{table},{param},paper,{n},{r},{t0},{}", join(pf));
    let _ = writeln!(
        out,
        "{table},{param},computed,{},{},{:.4},{}",
        d.n,
        d.r,
        d.t0,
        join(cf)
    );
    let _ = writeln!(
        out,
        "{table},{param},deviation,{},{},{:.4},{}",
        i64::from(d.n) - i64::from(n),
        i64::from(d.r) - i64::from(r),
        deviation(d.t0, t0),
        join(dev)
    );
}

fn exact_space(n_max: u32) -> SearchSpace<f64> {
    SearchSpace::new(n_max, 0.05, 60.0, Engine::Exact)
}

/// CSV for table `id` ("1".."8" or "app").
pub fn reproduce(id: &str, opts: &ReproduceOptions) -> Result<String, CliError> {
    let mut out = String::new();
    if id == "app" {
        return reproduce_application(opts);
    }
    let num: u32 = id
        .parse()
        .map_err(|_| CliError::Input(format!("unknown table {id:?}; expected 1..8 or app")))?;
    if let Some(rows) = exact_table(num) {
        let base = parse_scenario(fixtures::EXAMPLE1, "example1.json")?;
        out.push_str(CSV_HEADER);
        out.push('\n');
        for (ov, paper) in rows {
            let mut s = base.clone();
            ov.apply(&mut s);
            let (report, _) = run_optimize(&s, &exact_space(opts.n_max), &opts.cfg)?;
            push_rows(&mut out, id, &ov.label(), &paper, &report.evaluation);
        }
        return Ok(out);
    }
    if let Some(rows) = rdsp_table(num) {
        let base = parse_scenario(fixtures::EXAMPLE2_RDSP, "example2_rdsp.json")?;
        out.push_str(CSV_HEADER);
        out.push('\n');
        for (ov, paper) in rows {
            let mut s = base.clone();
            ov.apply(&mut s);
            let computed = if opts.search {
                let mut space = SearchSpace::new(opts.n_max, 0.5, 15.0, Engine::Rdsp);
                space.coarse_steps = 12;
                space.refine_iters = 2;
                space.screen_s1 = (opts.cfg.s1 / 10).max(1);
                run_optimize(&s, &space, &opts.cfg)?.0.evaluation
            } else {
                let (n, r, t0) = paper.design;
                run_evaluate(&s, &Design::new(n, r, t0)?, Engine::Rdsp, &opts.cfg)?
            };
            push_rows(&mut out, id, &ov.label(), &paper, &computed);
        }
        return Ok(out);
    }
    Err(CliError::Input(format!(
        "unknown table {id:?}; expected 1..8 or app"
    )))
}

fn reproduce_application(opts: &ReproduceOptions) -> Result<String, CliError> {
    let s = parse_scenario(fixtures::APPLICATION, "application.json")?;
    let (n, r, t0) = APP_DESIGN;
    let design = Design::new(n, r, t0)?;
    let e = run_evaluate(&s, &design, Engine::Mc, &opts.cfg)?;
    let mut out = String::from("table,source,n,r,t0,p_awo,p_aw,p_r,psi\n");
    let [a, b, c] = APP_PROBS;
    let _ = writeln!(out, "app,paper,{n},{r},{t0},{a},{b},{c},");
    let _ = writeln!(
        out,
        "app,computed,{n},{r},{t0},{:.6},{:.6},{:.6},{:.6}",
        e.p_awo, e.p_aw, e.p_r, e.psi
    );
    let _ = writeln!(
        out,
        "app,deviation,0,0,0,{:.6},{:.6},{:.6},",
        e.p_awo - a,
        e.p_aw - b,
        e.p_r - c
    );
    out.push_str("\ndataset,source,d,e1,e2,action\n");
    for (i, (failures, e1, e2)) in DECISION_ROWS.iter().enumerate() {
        let text = serde_json::json!({ "failures": failures, "d": failures.len(), "n": n, "r": r, "t0": t0 }).to_string();
        let samples = parse_samples(&text, "dataset")?;
        let report = &run_decide(&s, &samples, opts.cfg.s2, opts.cfg.seed)?[0];
        let paper_action = if *e1 <= 0.0 {
            "AcceptNoWarranty"
        } else if *e2 <= 0.0 {
            "AcceptWithWarranty"
        } else {
            "Reject"
        };
        let (c1, c2) = (
            report.posttest.e1.unwrap_or(f64::NAN),
            report.posttest.e2.unwrap_or(f64::NAN),
        );
        let k = i + 1;
        let _ = writeln!(out, "{k},paper,{},{e1},{e2},{paper_action}", failures.len());
        let _ = writeln!(
            out,
            "{k},computed,{},{c1:.2},{c2:.2},{:?}",
            report.d, report.posttest.action
        );
        let _ = writeln!(
            out,
            "{k},deviation,0,{:.4},{:.4},",
            deviation(c1, *e1),
            deviation(c2, *e2)
        );
    }
    Ok(out)
}
