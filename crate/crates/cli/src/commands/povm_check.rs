use std::io::Write;

use portsim::operator::Operator;
use portsim::povm_analytic::{eigensystem_pi_n, eigensystem_pi_n_plus1};
use portsim::povm_oracle::{povm, PovmSet};
use portsim::schur::coupling_unitary;
use portsim::{limits, Regime};
use serde::{Deserialize, Serialize};

use crate::args::{Format, PortRange};
use crate::output::{write_csv, write_json, CliError, CliResult};

pub const SCHEMA: &str = "portsim.povm-check/1";
/// Default port cap for this command; PORTSIM_MAX_PORTS raises it.
const MAX_PORTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub equivalence: f64,
    pub validity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Upper bound, or lower bound for the eigenvalue checks.
    pub limit: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Suite {
    pub regime: Regime,
    pub n: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmCheckReport {
    pub tolerances: Tolerances,
    pub inject_fault: bool,
    pub suites: Vec<Suite>,
    pub max_frobenius_deviation: f64,
    pub pass: bool,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    regime: Regime,
    n: usize,
    check: &'a str,
    value: f64,
    limit: f64,
    pass: bool,
}

/// Max absolute row sum of ΣΠ - I.
fn completeness(set: &PovmSet) -> f64 {
    let q = set.elements[0].qubits();
    set.sum()
        .sub(&Operator::identity(q))
        .matrix()
        .row_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn min_eigenvalue(set: &PovmSet) -> f64 {
    set.elements
        .iter()
        .map(Operator::min_eigenvalue)
        .fold(f64::INFINITY, f64::min)
}

/// The analytic POVM, optionally with the largest Π_N eigenvalue negated.
fn analytic(regime: Regime, n: usize, fault: bool) -> portsim::Result<PovmSet> {
    let uc = coupling_unitary(n + 1)?;
    let mut es = eigensystem_pi_n(regime, n)?;
    if fault {
        if let Some(e) = es
            .entries
            .iter_mut()
            .max_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue))
        {
            e.eigenvalue = -e.eigenvalue;
        }
    }
    let pin = es.assemble(&uc)?;
    let mut elements: Vec<Operator> = (0..n - 1).map(|i| pin.conjugate_swap(i, n - 1)).collect();
    elements.push(pin);
    if regime.is_probabilistic() {
        elements.push(eigensystem_pi_n_plus1(regime, n)?.assemble(&uc)?);
    }
    Ok(PovmSet {
        regime,
        n,
        elements,
    })
}

fn upper(name: &str, value: f64, limit: f64) -> Check {
    Check {
        name: name.into(),
        value,
        limit,
        pass: value <= limit,
    }
}

fn lower(name: &str, value: f64, limit: f64) -> Check {
    Check {
        name: name.into(),
        value,
        limit,
        pass: value >= limit,
    }
}

fn suite(regime: Regime, n: usize, tol: Tolerances, fault: bool) -> CliResult<(Suite, f64)> {
    let oracle = povm(regime, n)?;
    let an = analytic(regime, n, fault)?;
    let frob = an
        .elements
        .iter()
        .zip(&oracle.elements)
        .map(|(a, o)| a.frobenius_dist(o))
        .fold(0.0, f64::max);
    let checks = vec![
        upper("oracle-completeness", completeness(&oracle), tol.validity),
        lower(
            "oracle-min-eigenvalue",
            min_eigenvalue(&oracle),
            -tol.validity,
        ),
        upper(
            "oracle-swap-covariance",
            oracle.report().swap_covariance,
            tol.validity,
        ),
        upper("analytic-completeness", completeness(&an), tol.validity),
        lower(
            "analytic-min-eigenvalue",
            min_eigenvalue(&an),
            -tol.validity,
        ),
        upper("analytic-vs-oracle", frob, tol.equivalence),
    ];
    let pass = checks.iter().all(|c| c.pass);
    Ok((
        Suite {
            regime,
            n,
            checks,
            pass,
        },
        frob,
    ))
}

pub fn report(
    regimes: &[Regime],
    ports: PortRange,
    tol: Tolerances,
    fault: bool,
) -> CliResult<PovmCheckReport> {
    let cap = limits::effective(MAX_PORTS);
    if ports.hi > cap {
        return Err(CliError::Usage(format!(
            "N = {} exceeds the cap of {cap} (set {} to raise it)",
            ports.hi,
            limits::ENV_MAX_PORTS
        )));
    }
    let mut suites = Vec::new();
    let mut worst = 0.0f64;
    for &r in regimes {
        for n in ports.iter() {
            let (s, frob) = suite(r, n, tol, fault)?;
            worst = worst.max(frob);
            suites.push(s);
        }
    }
    let pass = suites.iter().all(|s| s.pass);
    Ok(PovmCheckReport {
        tolerances: tol,
        inject_fault: fault,
        suites,
        max_frobenius_deviation: worst,
        pass,
    })
}

pub fn run(
    regimes: &[Regime],
    ports: PortRange,
    tol: Tolerances,
    fault: bool,
    format: Format,
    w: &mut dyn Write,
) -> CliResult<()> {
    let rep = report(regimes, ports, tol, fault)?;
    match format {
        Format::Json => write_json(w, SCHEMA, &rep)?,
        Format::Csv => write_csv(
            w,
            rep.suites.iter().flat_map(|s| {
                s.checks.iter().map(move |c| CsvRow {
                    regime: s.regime,
                    n: s.n,
                    check: &c.name,
                    value: c.value,
                    limit: c.limit,
                    pass: c.pass,
                })
            }),
        )?,
        Format::Human => {
            if fault {
                writeln!(w, "fault injected: largest Π_N eigenvalue negated")?;
            }
            for s in &rep.suites {
                for c in &s.checks {
                    let verdict = if c.pass { "PASS" } else { "FAIL" };
                    let rel = if c.name.ends_with("min-eigenvalue") {
                        ">="
                    } else {
                        "<="
                    };
                    writeln!(
                        w,
                        "{} N={} {:<24} {:>10.3e} {rel} {:.0e}  {verdict}",
                        s.regime, s.n, c.name, c.value, c.limit
                    )?;
                }
            }
            let passed = rep.suites.iter().filter(|s| s.pass).count();
            writeln!(
                w,
                "max Frobenius deviation {:.3e}",
                rep.max_frobenius_deviation
            )?;
            writeln!(w, "{passed}/{} suites pass", rep.suites.len())?;
        }
    }
    if rep.pass {
        Ok(())
    } else {
        let failed = rep.suites.iter().filter(|s| !s.pass).count();
        Err(CliError::Check(format!(
            "{failed} of {} suites failed",
            rep.suites.len()
        )))
    }
}
