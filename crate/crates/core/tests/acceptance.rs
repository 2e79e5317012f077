//! Acceptance suite. Runs without the libtest harness so each criterion
//! prints exactly one PASS/FAIL line, then exits non-zero on any failure.

mod common;

use std::cell::Cell;
use std::time::{Duration, Instant};

use common::{embed_input, naimark_residual, naimark_target, oracle_roots, CIRCUITS};
use portsim::circuit::{c_star, measure_register, oaa, Register, UnitaryAction};
use portsim::operator::{Operator, C64};
use portsim::povm_analytic::analytic_povm;
use portsim::povm_oracle::{povm, rho, PovmSet};
use portsim::protocols::{
    average_fidelity, haar_qubit, haar_state, naimark, naimark_with_spectators, resource_estimate,
    resource_operator, resource_state, success_probability, teleport_with_rng, NaimarkCircuit,
    Protocol, SchurVariant,
};
use portsim::schur::StateVector;
use portsim::spinalg::lambda_eig;
use portsim::{HalfInt, Regime};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> std::result::Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

/// Max absolute row sum.
fn inf_norm(m: &Operator) -> f64 {
    m.matrix()
        .row_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn validity(set: &PovmSet) -> (f64, f64) {
    let q = set.elements[0].qubits();
    let comp = inf_norm(&set.sum().sub(&Operator::identity(q)));
    let lo = set
        .elements
        .iter()
        .map(Operator::min_eigenvalue)
        .fold(f64::INFINITY, f64::min);
    (comp, lo)
}

fn povm_validity() -> Outcome {
    let start = Instant::now();
    let (mut worst_c, mut worst_e) = (0.0f64, f64::INFINITY);
    for r in Regime::ALL {
        for n in 1..=5 {
            for (src, set) in [("oracle", povm(r, n)), ("analytic", analytic_povm(r, n))] {
                let set = set.map_err(|e| e.to_string())?;
                let (comp, lo) = validity(&set);
                ensure(
                    comp <= 1e-10,
                    format!("{src} {r} N={n}: |ΣΠ - I|∞ = {comp:e}"),
                )?;
                ensure(
                    lo >= -1e-10,
                    format!("{src} {r} N={n}: min eigenvalue {lo:e}"),
                )?;
                worst_c = worst_c.max(comp);
                worst_e = worst_e.min(lo);
            }
        }
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!(
        "max |ΣΠ - I|∞ = {worst_c:.1e}, min eigenvalue = {worst_e:.1e}, {t:.2?}"
    ))
}

fn analytic_vs_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for r in Regime::ALL {
        for n in 1..=5 {
            let a = analytic_povm(r, n).map_err(|e| e.to_string())?;
            let o = povm(r, n).map_err(|e| e.to_string())?;
            ensure(
                a.elements.len() == o.elements.len(),
                format!("{r} N={n}: element count"),
            )?;
            for (i, (x, y)) in a.elements.iter().zip(&o.elements).enumerate() {
                let d = x.frobenius_dist(y);
                ensure(d <= 1e-9, format!("{r} N={n} element {}: {d:e}", i + 1))?;
                worst = worst.max(d);
            }
        }
    }
    let t = within(start, Duration::from_secs(120))?;
    Ok(format!("max Frobenius distance {worst:.1e}, {t:.2?}"))
}

fn factorial(k: i32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Copies of spin j among N qubits.
fn spin_multiplicity(n: usize, j: HalfInt) -> f64 {
    let n2 = n as i32;
    let (lo, hi) = ((n2 - j.twice()) / 2, (n2 + j.twice()) / 2 + 1);
    f64::from(j.twice() + 1) * factorial(n2) / (factorial(lo) * factorial(hi))
}

fn rho_spectrum() -> Outcome {
    let half = HalfInt::HALF;
    let mut worst = 0.0f64;
    for n in 2..=5 {
        let r = rho(n).map_err(|e| e.to_string())?;
        let mut got = r.eigenvalues();
        got.sort_by(f64::total_cmp);
        let mut want = Vec::new();
        for j in HalfInt::spins_for(n) {
            for s in [j - half, j + half] {
                if s < HalfInt::ZERO {
                    continue;
                }
                let lam = lambda_eig(n, j, s).map_err(|e| e.to_string())?;
                let copies = spin_multiplicity(n, j) * f64::from(s.twice() + 1);
                want.extend(std::iter::repeat_n(lam, copies.round() as usize));
            }
        }
        want.sort_by(f64::total_cmp);
        ensure(
            want.len() == got.len(),
            format!(
                "N={n}: {} predicted vs {} eigenvalues",
                want.len(),
                got.len()
            ),
        )?;
        for (a, b) in got.iter().zip(&want) {
            worst = worst.max((a - b).abs());
        }
        ensure(
            worst <= 1e-10,
            format!("N={n}: eigenvalue mismatch {worst:e}"),
        )?;
        let nulls = got.iter().filter(|x| x.abs() <= 1e-10).count();
        ensure(
            nulls == n + 2,
            format!("N={n}: null space of dimension {nulls}"),
        )?;
        let sum: f64 = got.iter().sum();
        ensure(
            (sum - n as f64).abs() <= 1e-10,
            format!("N={n}: Σλ = {sum}"),
        )?;
    }
    Ok(format!(
        "N=2..5 spectra match to {worst:.1e}, null space N+2, Σλ = N"
    ))
}

fn naimark_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    let mut worst = 0.0f64;
    let mut tiers = Vec::new();
    for (tier, ns) in [("fast", 1..=4), ("slow", 5..=6)] {
        let start = Instant::now();
        for n in ns {
            for proto in CIRCUITS {
                let circ = naimark(proto, n).map_err(|e| e.to_string())?;
                let roots = oracle_roots(proto, n);
                for _ in 0..20 {
                    let psi = haar_state(&mut rng, 1 << (n + 1));
                    let out = circ
                        .run(&embed_input(&circ, &psi))
                        .map_err(|e| e.to_string())?;
                    let res = naimark_residual(&circ, &out, &naimark_target(&circ, &roots, &psi));
                    ensure(res <= 1e-8, format!("{proto} N={n}: residual {res:e}"))?;
                    worst = worst.max(res);
                }
            }
        }
        tiers.push(format!("{tier} tier {:.2?}", start.elapsed()));
    }
    Ok(format!(
        "4 circuits x 20 inputs, max residual {worst:.1e}, {}",
        tiers.join(", ")
    ))
}

/// Counts every application of U and U†.
struct Counted<'a> {
    inner: &'a NaimarkCircuit,
    uses: Cell<usize>,
}

impl UnitaryAction for Counted<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.uses.set(self.uses.get() + 1);
        self.inner.apply(v)
    }

    fn apply_adjoint(&self, v: &[C64]) -> Vec<C64> {
        self.uses.set(self.uses.get() + 1);
        self.inner.apply_adjoint(v)
    }
}

fn odd_ceiling(x: f64) -> usize {
    let c = x.ceil() as usize;
    if c.is_multiple_of(2) {
        c + 1
    } else {
        c
    }
}

fn round_counts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut rounds = Vec::new();
    for n in 1..=6 {
        for proto in [Protocol::DpbtMes, Protocol::PpbtMes, Protocol::PpbtOpt] {
            let circ = naimark(proto, n).map_err(|e| e.to_string())?;
            let psi = haar_state(&mut rng, 1 << (n + 1));
            let v = embed_input(&circ, &psi);
            let counted = Counted {
                inner: &circ,
                uses: Cell::new(0),
            };
            let amp = oaa(&counted, circ.pi(), circ.pi_tilde(), circ.rounds())
                .map_err(|e| e.to_string())?;
            let out = amp.apply(&v);
            let used = counted.uses.get();
            let direct = circ.run(&v).map_err(|e| e.to_string())?;
            ensure(
                portsim::operator::dist(&out, &direct) < 1e-12,
                format!("{proto} N={n}: run differs"),
            )?;
            ensure(
                used == circ.rounds(),
                format!(
                    "{proto} N={n}: {used} uses of U, plan says {}",
                    circ.rounds()
                ),
            )?;
            match proto {
                Protocol::PpbtMes => {
                    ensure(used == 5, format!("Algorithm 1 N={n}: {used} rounds"))?
                }
                _ => {
                    let (_, n_star) = c_star(circ.plan.target).map_err(|e| e.to_string())?;
                    let bound = odd_ceiling(std::f64::consts::PI * ((n + 1) as f64).sqrt());
                    ensure(
                        used == n_star,
                        format!("{proto} N={n}: {used} rounds, c_star gives {n_star}"),
                    )?;
                    ensure(
                        used <= bound,
                        format!("{proto} N={n}: {used} rounds above {bound}"),
                    )?;
                    if n == 6 {
                        rounds.push(format!("{proto} {used}"));
                    }
                }
            }
        }

        let circ = naimark(Protocol::PpbtMesNoAa, n).map_err(|e| e.to_string())?;
        ensure(
            circ.rounds() == 0,
            format!("Algorithm 2 N={n}: {} rounds", circ.rounds()),
        )?;
        let els = povm(Regime::PpbtMes, n)
            .map_err(|e| e.to_string())?
            .elements;
        for _ in 0..5 {
            let psi = haar_state(&mut rng, 1 << (n + 1));
            let out = StateVector::new(
                circ.run(&embed_input(&circ, &psi))
                    .map_err(|e| e.to_string())?,
                circ.layout,
            )
            .map_err(|e| e.to_string())?;
            let m = measure_register(&out, Register::Port);
            let got: f64 = m.probabilities[..n].iter().sum();
            let want: f64 = 0.25 * els[..n].iter().map(|e| e.expectation(&psi).re).sum::<f64>();
            ensure(
                (got - want).abs() <= 1e-9,
                format!("Algorithm 2 N={n}: success {got} vs {want}"),
            )?;
        }
    }
    Ok(format!(
        "Algorithm 1 = 5, Algorithm 2 = 0 with success ¼⟨ΣΠ⟩, at N=6: {}",
        rounds.join(", ")
    ))
}

fn anchors() -> Outcome {
    let f = average_fidelity(Protocol::DpbtMes, 1).map_err(|e| e.to_string())?;
    ensure((f - 0.5).abs() <= 1e-10, format!("dPBT F(N=1) = {f}"))?;
    // Hand trace at N=1: Π_1 = ψ⁻ on (A, C), the input is I/2 on both, so
    // p = Tr(ψ⁻ · I/4) = 1/4.
    let p = success_probability(Protocol::PpbtMes, 1).map_err(|e| e.to_string())?;
    ensure((p - 0.25).abs() <= 1e-10, format!("pPBT-MES p(N=1) = {p}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst, mut successes) = (0.0f64, 0);
    for proto in [Protocol::PpbtMes, Protocol::PpbtMesNoAa, Protocol::PpbtOpt] {
        for n in 1..=4 {
            let circ = naimark_with_spectators(proto, n, n).map_err(|e| e.to_string())?;
            let res = resource_state(proto, n).map_err(|e| e.to_string())?;
            for _ in 0..25 {
                let run = teleport_with_rng(&circ, &res, haar_qubit(&mut rng), &mut rng)
                    .map_err(|e| e.to_string())?;
                if let Some(fid) = run.fidelity {
                    ensure(
                        (fid - 1.0).abs() <= 1e-9,
                        format!("{proto} N={n}: success fidelity {fid}"),
                    )?;
                    worst = worst.max((fid - 1.0).abs());
                    successes += 1;
                }
            }
        }
    }
    ensure(successes > 0, "no successful pPBT runs")?;
    Ok(format!(
        "F_dPBT(1) = {f:.12}, p_MES(1) = {p:.12}, {successes} successes with |F - 1| ≤ {worst:.1e}"
    ))
}

fn ratios_ok(seq: &[f64]) -> bool {
    seq.windows(2).all(|w| (0.5..=2.0).contains(&(w[1] / w[0])))
}

fn scaling() -> Outcome {
    let ns: Vec<usize> = (2..=6).collect();
    let mut f_mes = Vec::new();
    let mut f_opt = Vec::new();
    let mut p_mes = Vec::new();
    let mut p_opt = Vec::new();
    for &n in &ns {
        let e = |r: portsim::Result<f64>| r.map_err(|e| e.to_string());
        let (fm, fo) = (
            e(average_fidelity(Protocol::DpbtMes, n))?,
            e(average_fidelity(Protocol::DpbtOpt, n))?,
        );
        let (pm, po) = (
            e(success_probability(Protocol::PpbtMes, n))?,
            e(success_probability(Protocol::PpbtOpt, n))?,
        );
        ensure(fo >= fm, format!("N={n}: f_opt {fo} < f_MES {fm}"))?;
        ensure(po >= pm, format!("N={n}: p_opt {po} < p_MES {pm}"))?;
        let nf = n as f64;
        f_mes.push((1.0 - fm) * nf);
        f_opt.push((1.0 - fo) * nf * nf);
        p_mes.push((1.0 - pm) * nf.sqrt());
        p_opt.push((1.0 - po) * nf);
    }
    for (name, seq) in [
        ("(1-f_MES)N", &f_mes),
        ("(1-f_opt)N²", &f_opt),
        ("(1-p_MES)√N", &p_mes),
        ("(1-p_opt)N", &p_opt),
    ] {
        ensure(ratios_ok(seq), format!("{name} = {seq:?}"))?;
    }
    let last = |v: &[f64]| v[v.len() - 1];
    Ok(format!(
        "N=6 surrogates {:.3}, {:.3}, {:.3}, {:.3}; orderings hold",
        last(&f_mes),
        last(&f_opt),
        last(&p_mes),
        last(&p_opt)
    ))
}

/// Input-averaged outcome probabilities straight from the dense POVM.
fn exact_outcomes(proto: Protocol, n: usize) -> std::result::Result<Vec<f64>, String> {
    let els = povm(proto.regime(), n).map_err(|e| e.to_string())?.elements;
    let x = resource_operator(proto, n).map_err(|e| e.to_string())?;
    let xx = x.mul(&x.adjoint());
    let state = xx
        .scale(1.0 / xx.trace().re)
        .kron(&Operator::identity(1))
        .scale(0.5);
    let scale = if proto == Protocol::PpbtMesNoAa {
        0.25
    } else {
        1.0
    };
    let mut probs: Vec<f64> = els[..n]
        .iter()
        .map(|e| scale * e.mul(&state).trace().re)
        .collect();
    if proto.is_probabilistic() {
        probs.push(1.0 - probs.iter().sum::<f64>());
    }
    Ok(probs)
}

fn statistics() -> Outcome {
    const TRIALS: usize = 10_000;
    let mut worst = 0.0f64;
    for (k, proto) in Protocol::ALL.into_iter().enumerate() {
        for n in 1..=3 {
            let want = exact_outcomes(proto, n)?;
            let circ = naimark_with_spectators(proto, n, n).map_err(|e| e.to_string())?;
            let res = resource_state(proto, n).map_err(|e| e.to_string())?;
            let mut rng = ChaCha8Rng::seed_from_u64(1000 * k as u64 + n as u64);
            let mut counts = vec![0usize; want.len()];
            for _ in 0..TRIALS {
                let run = teleport_with_rng(&circ, &res, haar_qubit(&mut rng), &mut rng)
                    .map_err(|e| e.to_string())?;
                counts[run.outcome - 1] += 1;
            }
            for (i, (&c, &p)) in counts.iter().zip(&want).enumerate() {
                let t = TRIALS as f64;
                let var = t * p * (1.0 - p);
                let z = if var > 1e-12 {
                    (c as f64 - t * p) / var.sqrt()
                } else if (c as f64 - t * p).abs() < 0.5 {
                    0.0
                } else {
                    f64::INFINITY
                };
                ensure(
                    z.abs() < 4.0,
                    format!(
                        "{proto} N={n} outcome {}: {c} hits, p = {p:.4}, z = {z:.2}",
                        i + 1
                    ),
                )?;
                worst = worst.max(z.abs());
            }
        }
    }
    Ok(format!(
        "5 protocols x N=1..3 x {TRIALS} trials, max |z| = {worst:.2}"
    ))
}

fn resources() -> Outcome {
    let mut worst = (f64::INFINITY, 0.0f64);
    for proto in Protocol::ALL {
        for variant in SchurVariant::ALL {
            for n in 2..=6 {
                let a = resource_estimate(proto, n, 1e-3, variant).map_err(|e| e.to_string())?;
                let b =
                    resource_estimate(proto, 2 * n, 1e-3, variant).map_err(|e| e.to_string())?;
                let r = b.p as f64 / a.p as f64;
                ensure(
                    (1.5..=2.5).contains(&r),
                    format!("{proto} N={n}: p doubling ratio {r}"),
                )?;
                worst = (worst.0.min(r), worst.1.max(r));
                let rounds = match proto {
                    Protocol::PpbtMes | Protocol::PpbtMesNoAa => "Theta(1)",
                    _ => "O(sqrt N)",
                };
                let ancilla = match variant {
                    SchurVariant::Bch => "O(N log N)",
                    SchurVariant::SpinCoupling => "O(log N)",
                };
                ensure(
                    a.classes.p == "O(N)",
                    format!("{proto}: p class {}", a.classes.p),
                )?;
                ensure(
                    a.classes.rounds == rounds,
                    format!("{proto}: n class {}", a.classes.rounds),
                )?;
                ensure(
                    a.classes.ancilla == ancilla,
                    format!("{variant}: ancilla class {}", a.classes.ancilla),
                )?;
                ensure(
                    a.ancilla > 0 && a.p > 0 && (a.rounds % 2 == 1 || a.rounds == 0),
                    "positivity",
                )?;
            }
            // The labels must describe the counted numbers too.
            let est = |n| resource_estimate(proto, n, 1e-3, variant).map_err(|e| e.to_string());
            let (small, big) = (est(16)?, est(64)?);
            let growth = big.ancilla as f64 / small.ancilla as f64;
            match variant {
                // log 64 / log 16 = 1.5; allow constant offsets.
                SchurVariant::SpinCoupling => ensure(
                    growth <= 2.0,
                    format!("{proto}: log-class ancilla grew {growth}"),
                )?,
                // 64·6 / 16·4 = 6.
                SchurVariant::Bch => ensure(
                    growth >= 4.0,
                    format!("{proto}: N log N ancilla grew only {growth}"),
                )?,
            }
            let (r16, r64) = (small.rounds as f64, big.rounds as f64);
            match proto {
                Protocol::PpbtMes | Protocol::PpbtMesNoAa => {
                    ensure(r16 == r64, format!("{proto}: rounds vary"))?
                }
                _ => ensure(
                    r64 / r16 <= 2.5,
                    format!("{proto}: rounds grew {r16} -> {r64}"),
                )?,
            }
        }
    }
    Ok(format!(
        "p doubling ratios in [{:.2}, {:.2}], classes match for both Schur variants",
        worst.0, worst.1
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("povm validity", povm_validity),
        ("analytic vs oracle", analytic_vs_oracle),
        ("rho spectrum", rho_spectrum),
        ("naimark exactness", naimark_exactness),
        ("amplification rounds", round_counts),
        ("anchor values", anchors),
        ("scaling surrogates", scaling),
        ("statistical consistency", statistics),
        ("resource estimator", resources),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                println!("criterion {} {name}: FAIL ({why})", i + 1);
                failed += 1;
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
