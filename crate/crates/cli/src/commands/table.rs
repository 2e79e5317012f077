use std::io::Write;

use portsim::limits;
use portsim::protocols::{
    average_fidelity, resource_estimate, success_probability, Protocol, SchurVariant,
};
use serde::{Deserialize, Serialize};

use crate::args::{Format, Metric, PortRange};
use crate::output::{write_csv, write_json, write_table, CliError, CliResult};

pub const SCHEMA: &str = "portsim.table/1";
/// Resource rows only touch register-level plans, so they go further.
const RESOURCE_MAX_PORTS: usize = 1024;
const COST_NOTE: &str = "big-O constants set to 1, log base 2: order of magnitude only";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityRow {
    pub n: usize,
    pub dpbt_mes: f64,
    pub dpbt_opt: f64,
    pub mes_deficit_times_n: f64,
    pub opt_deficit_times_n2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessRow {
    pub n: usize,
    pub ppbt_mes: f64,
    pub ppbt_opt: f64,
    pub mes_deficit_times_sqrt_n: f64,
    pub opt_deficit_times_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceRow {
    pub protocol: Protocol,
    pub n: usize,
    pub schur_variant: SchurVariant,
    pub p: usize,
    pub rounds: usize,
    pub c_star: f64,
    pub t_sch: f64,
    pub total_cost: f64,
    pub ancilla: usize,
    pub p_class: String,
    pub rounds_class: String,
    pub ancilla_class: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "metric", content = "rows", rename_all = "kebab-case")]
pub enum Rows {
    Fidelity(Vec<FidelityRow>),
    Success(Vec<SuccessRow>),
    Resources(Vec<ResourceRow>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    #[serde(flatten)]
    pub rows: Rows,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

pub fn report(
    metric: Metric,
    ports: PortRange,
    epsilon: f64,
    variants: &[SchurVariant],
) -> CliResult<TableReport> {
    let rows = match metric {
        Metric::Fidelity => Rows::Fidelity(
            ports
                .iter()
                .map(|n| {
                    let (m, o) = (
                        average_fidelity(Protocol::DpbtMes, n)?,
                        average_fidelity(Protocol::DpbtOpt, n)?,
                    );
                    let nf = n as f64;
                    Ok(FidelityRow {
                        n,
                        dpbt_mes: m,
                        dpbt_opt: o,
                        mes_deficit_times_n: (1.0 - m) * nf,
                        opt_deficit_times_n2: (1.0 - o) * nf * nf,
                    })
                })
                .collect::<portsim::Result<_>>()?,
        ),
        Metric::Success => Rows::Success(
            ports
                .iter()
                .map(|n| {
                    let (m, o) = (
                        success_probability(Protocol::PpbtMes, n)?,
                        success_probability(Protocol::PpbtOpt, n)?,
                    );
                    let nf = n as f64;
                    Ok(SuccessRow {
                        n,
                        ppbt_mes: m,
                        ppbt_opt: o,
                        mes_deficit_times_sqrt_n: (1.0 - m) * nf.sqrt(),
                        opt_deficit_times_n: (1.0 - o) * nf,
                    })
                })
                .collect::<portsim::Result<_>>()?,
        ),
        Metric::Resources => {
            let cap = limits::effective(RESOURCE_MAX_PORTS);
            if ports.hi > cap {
                return Err(CliError::Usage(format!(
                    "N = {} exceeds the cap of {cap}",
                    ports.hi
                )));
            }
            let mut rows = Vec::new();
            for proto in Protocol::ALL {
                for &variant in variants {
                    for n in ports.iter() {
                        let e = resource_estimate(proto, n, epsilon, variant)?;
                        rows.push(ResourceRow {
                            protocol: proto,
                            n,
                            schur_variant: variant,
                            p: e.p,
                            rounds: e.rounds,
                            c_star: e.c_star,
                            t_sch: e.t_sch,
                            total_cost: e.total_cost,
                            ancilla: e.ancilla,
                            p_class: e.classes.p.into(),
                            rounds_class: e.classes.rounds.into(),
                            ancilla_class: e.classes.ancilla.into(),
                        });
                    }
                }
            }
            Rows::Resources(rows)
        }
    };
    let resources = metric == Metric::Resources;
    Ok(TableReport {
        rows,
        epsilon: resources.then_some(epsilon),
        note: resources.then(|| COST_NOTE.to_string()),
    })
}

fn f(x: f64) -> String {
    format!("{x:.10}")
}

fn human(rep: &TableReport, w: &mut dyn Write) -> CliResult<()> {
    match &rep.rows {
        Rows::Fidelity(rows) => write_table(
            w,
            &["N", "dpbt-mes", "dpbt-opt", "(1-f_mes)N", "(1-f_opt)N^2"],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        f(r.dpbt_mes),
                        f(r.dpbt_opt),
                        f(r.mes_deficit_times_n),
                        f(r.opt_deficit_times_n2),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Rows::Success(rows) => write_table(
            w,
            &["N", "ppbt-mes", "ppbt-opt", "(1-p_mes)sqrtN", "(1-p_opt)N"],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        f(r.ppbt_mes),
                        f(r.ppbt_opt),
                        f(r.mes_deficit_times_sqrt_n),
                        f(r.opt_deficit_times_n),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Rows::Resources(rows) => {
            write_table(
                w,
                &[
                    "protocol",
                    "N",
                    "schur",
                    "p",
                    "n",
                    "c*",
                    "T_Sch",
                    "cost",
                    "ancilla",
                    "p class",
                    "n class",
                    "ancilla class",
                ],
                &rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.protocol.to_string(),
                            r.n.to_string(),
                            r.schur_variant.to_string(),
                            r.p.to_string(),
                            r.rounds.to_string(),
                            format!("{:.4}", r.c_star),
                            format!("{:.3e}", r.t_sch),
                            format!("{:.3e}", r.total_cost),
                            r.ancilla.to_string(),
                            r.p_class.clone(),
                            r.rounds_class.clone(),
                            r.ancilla_class.clone(),
                        ]
                    })
                    .collect::<Vec<_>>(),
            )?;
            if let (Some(eps), Some(note)) = (rep.epsilon, &rep.note) {
                writeln!(w, "epsilon = {eps:e}; {note}")?;
            }
            Ok(())
        }
    }
}

pub fn run(
    metric: Metric,
    ports: PortRange,
    epsilon: f64,
    variants: &[SchurVariant],
    format: Format,
    w: &mut dyn Write,
) -> CliResult<()> {
    let rep = report(metric, ports, epsilon, variants)?;
    match format {
        Format::Json => write_json(w, SCHEMA, &rep),
        Format::Csv => match &rep.rows {
            Rows::Fidelity(r) => write_csv(w, r),
            Rows::Success(r) => write_csv(w, r),
            Rows::Resources(r) => write_csv(w, r),
        },
        Format::Human => human(&rep, w),
    }
}
