use std::io::Write;

use portsim::limits::COUPLING_MAX_QUBITS;
use portsim::schur::{coupling_unitary, enumerate_labels, real_amplitudes, schur_vector};
use serde::{Deserialize, Serialize};

use crate::args::Format;
use crate::output::{fraction, write_csv, write_json, write_table, CliError, CliResult};

pub const SCHEMA: &str = "portsim.schur/1";

/// Amplitudes below this are dropped from the listing.
const AMP_CUTOFF: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Amplitude {
    /// Computational basis string, qubit 0 first.
    pub basis: String,
    pub value: f64,
}

/// Spins are twice-values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelRow {
    pub index: usize,
    pub ks: Vec<i32>,
    pub j: i32,
    pub s: i32,
    pub m: i32,
    pub amplitudes: Vec<Amplitude>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchurReport {
    pub n: usize,
    pub labels: Vec<LabelRow>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unitary: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize)]
struct CsvRow {
    index: usize,
    ks: String,
    j: i32,
    s: i32,
    m: i32,
    amplitudes: String,
}

pub fn report(n: usize, unitary: bool) -> CliResult<SchurReport> {
    if n == 0 || n > COUPLING_MAX_QUBITS {
        return Err(CliError::Usage(format!(
            "n = {n} outside 1..={COUPLING_MAX_QUBITS} (size cap)"
        )));
    }
    let mut labels = Vec::new();
    for (index, label) in enumerate_labels(n)?.iter().enumerate() {
        let rec = label.record(index);
        let amplitudes = real_amplitudes(&schur_vector(label)?)
            .into_iter()
            .enumerate()
            .filter(|(_, a)| a.abs() > AMP_CUTOFF)
            .map(|(i, value)| Amplitude {
                basis: format!("{i:0n$b}"),
                value,
            })
            .collect();
        labels.push(LabelRow {
            index,
            ks: rec.ks,
            j: rec.j,
            s: rec.s,
            m: rec.m,
            amplitudes,
        });
    }
    let unitary = if unitary {
        let u = coupling_unitary(n)?;
        Some(
            (0..u.dim())
                .map(|r| (0..u.dim()).map(|c| u.get(r, c).re).collect())
                .collect(),
        )
    } else {
        None
    };
    Ok(SchurReport { n, labels, unitary })
}

fn human_state(amps: &[Amplitude]) -> String {
    let mut out = String::new();
    for (i, a) in amps.iter().enumerate() {
        let sign = if a.value < 0.0 { "-" } else { "+" };
        if i == 0 {
            if a.value < 0.0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        out.push_str(&format!("{:.6}|{}⟩", a.value.abs(), a.basis));
    }
    out
}

pub fn run(n: usize, unitary: bool, format: Format, w: &mut dyn Write) -> CliResult<()> {
    if unitary && format == Format::Csv {
        return Err(CliError::Usage(
            "--unitary is available in json and human formats only".into(),
        ));
    }
    let rep = report(n, unitary)?;
    match format {
        Format::Json => write_json(w, SCHEMA, &rep),
        Format::Csv => write_csv(
            w,
            rep.labels.iter().map(|l| CsvRow {
                index: l.index,
                ks: l
                    .ks
                    .iter()
                    .map(|k| k.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
                j: l.j,
                s: l.s,
                m: l.m,
                amplitudes: l
                    .amplitudes
                    .iter()
                    .map(|a| format!("{}:{}", a.basis, a.value))
                    .collect::<Vec<_>>()
                    .join(";"),
            }),
        ),
        Format::Human => {
            let rows: Vec<Vec<String>> = rep
                .labels
                .iter()
                .map(|l| {
                    vec![
                        l.index.to_string(),
                        l.ks.iter()
                            .map(|&k| fraction(k))
                            .collect::<Vec<_>>()
                            .join(","),
                        fraction(l.j),
                        fraction(l.s),
                        fraction(l.m),
                        human_state(&l.amplitudes),
                    ]
                })
                .collect();
            writeln!(w, "Schur basis on {n} qubits ({} labels)", rep.labels.len())?;
            write_table(w, &["index", "k", "j", "s", "m", "state"], &rows)?;
            if let Some(u) = &rep.unitary {
                writeln!(w, "\ncoupling unitary (column = label index)")?;
                for row in u {
                    let cells: Vec<String> = row.iter().map(|x| format!("{x:>9.6}")).collect();
                    writeln!(w, "{}", cells.join(" "))?;
                }
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let rep = report(3, true).unwrap();
        let text = serde_json::to_string(&crate::output::Envelope {
            schema: SCHEMA.into(),
            body: &rep,
        })
        .unwrap();
        let back: crate::output::Envelope<SchurReport> = serde_json::from_str(&text).unwrap();
        assert_eq!(back.schema, SCHEMA);
        assert_eq!(back.body, rep);
    }

    #[test]
    fn singlet_row() {
        let rep = report(2, false).unwrap();
        let singlet = rep.labels.iter().find(|l| l.s == 0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(singlet.amplitudes.len(), 2);
        assert!(singlet
            .amplitudes
            .iter()
            .all(|a| (a.value.abs() - h).abs() < 1e-15));
        assert!(singlet.amplitudes[0].value * singlet.amplitudes[1].value < 0.0);
    }
}
