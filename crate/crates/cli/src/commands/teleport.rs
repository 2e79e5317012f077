use std::io::Write;

use portsim::protocols::{
    average_fidelity, haar_qubit, naimark_with_spectators, resource_state, success_probability,
    teleport_with_rng, Protocol,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::args::Format;
use crate::output::{write_csv, write_json, write_table, CliError, CliResult};

pub const SCHEMA: &str = "portsim.teleport/1";
/// |z| at or above this fails the run.
pub const Z_LIMIT: f64 = 4.0;
/// Standard-deviation floor, so a zero-variance mismatch still gives a
/// huge z instead of a division by zero.
const SD_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub trial: usize,
    /// 1..=N for a port, N+1 for failure.
    pub outcome: usize,
    pub success: bool,
    pub fidelity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: usize,
    pub successes: usize,
    pub outcome_counts: Vec<usize>,
    pub success_rate: f64,
    pub exact_success: f64,
    pub success_z: f64,
    /// Mean over successful trials.
    pub mean_fidelity: Option<f64>,
    /// Average over Haar inputs, conditioned on success.
    pub exact_fidelity: f64,
    pub fidelity_z: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeleportReport {
    pub protocol: Protocol,
    pub n: usize,
    pub seed: u64,
    pub generator: String,
    pub rounds: usize,
    pub c_star: f64,
    pub trials: Vec<Trial>,
    pub summary: Summary,
}

pub fn report(protocol: Protocol, n: usize, trials: usize, seed: u64) -> CliResult<TeleportReport> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let circ = naimark_with_spectators(protocol, n, n)?;
    let res = resource_state(protocol, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(trials);
    let mut counts = vec![0usize; protocol.outcomes(n)];
    for t in 0..trials {
        let input = haar_qubit(&mut rng);
        let run = teleport_with_rng(&circ, &res, input, &mut rng)?;
        counts[run.outcome - 1] += 1;
        rows.push(Trial {
            trial: t + 1,
            outcome: run.outcome,
            success: run.success,
            fidelity: run.fidelity,
        });
    }

    let tf = trials as f64;
    let successes = rows.iter().filter(|r| r.success).count();
    let (exact_success, exact_fidelity) = if protocol.is_probabilistic() {
        (success_probability(protocol, n)?, 1.0)
    } else {
        (1.0, average_fidelity(protocol, n)?)
    };
    let sd = (exact_success * (1.0 - exact_success)).sqrt().max(SD_FLOOR);
    let success_z = (successes as f64 - tf * exact_success) / (sd * tf.sqrt());

    let fids: Vec<f64> = rows.iter().filter_map(|r| r.fidelity).collect();
    let (mean_fidelity, fidelity_z) = if fids.is_empty() {
        (None, None)
    } else {
        let k = fids.len() as f64;
        let mean = fids.iter().sum::<f64>() / k;
        let var = if fids.len() > 1 {
            fids.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        let sd = var.sqrt().max(SD_FLOOR);
        (Some(mean), Some((mean - exact_fidelity) / (sd / k.sqrt())))
    };
    let pass = success_z.abs() < Z_LIMIT && fidelity_z.is_none_or(|z| z.abs() < Z_LIMIT);
    Ok(TeleportReport {
        protocol,
        n,
        seed,
        generator: "ChaCha8Rng (rand_chacha 0.3), seed_from_u64".into(),
        rounds: circ.rounds(),
        c_star: circ.plan.c_star,
        trials: rows,
        summary: Summary {
            trials,
            successes,
            outcome_counts: counts,
            success_rate: successes as f64 / tf,
            exact_success,
            success_z,
            mean_fidelity,
            exact_fidelity,
            fidelity_z,
            pass,
        },
    })
}

fn human(rep: &TeleportReport, w: &mut dyn Write) -> CliResult<()> {
    let s = &rep.summary;
    writeln!(
        w,
        "{} N={} seed={} rounds={} c*={:.6}",
        rep.protocol, rep.n, rep.seed, rep.rounds, rep.c_star
    )?;
    let opt = |x: Option<f64>, p: usize| x.map_or("-".to_string(), |v| format!("{v:.p$}"));
    let rows = vec![
        vec![
            "success rate".into(),
            format!("{:.6}", s.success_rate),
            format!("{:.6}", s.exact_success),
            format!("{:.3}", s.success_z),
        ],
        vec![
            "fidelity".into(),
            opt(s.mean_fidelity, 6),
            format!("{:.6}", s.exact_fidelity),
            opt(s.fidelity_z, 3),
        ],
    ];
    write_table(w, &["quantity", "empirical", "exact", "z"], &rows)?;
    let counts: Vec<String> = s
        .outcome_counts
        .iter()
        .enumerate()
        .map(|(i, c)| format!("{}:{c}", i + 1))
        .collect();
    writeln!(w, "outcomes {} over {} trials", counts.join(" "), s.trials)?;
    writeln!(w, "{}", if s.pass { "PASS" } else { "FAIL" })?;
    Ok(())
}

pub fn run(
    protocol: Protocol,
    n: usize,
    trials: usize,
    seed: u64,
    format: Format,
    w: &mut dyn Write,
) -> CliResult<()> {
    let rep = report(protocol, n, trials, seed)?;
    match format {
        Format::Json => write_json(w, SCHEMA, &rep)?,
        Format::Csv => write_csv(w, &rep.trials)?,
        Format::Human => human(&rep, w)?,
    }
    if rep.summary.pass {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "z-score outside ±{Z_LIMIT} (success {:.2}, fidelity {:?})",
            rep.summary.success_z, rep.summary.fidelity_z
        )))
    }
}
