//! Figures of merit against a brute-force purification: a reference qubit
//! R maximally entangled with the input C, Bob's ports B alongside Alice's
//! A, and every outcome's √Πᵢ applied to (A, C).

use portsim::circuit::{measure_register, Register};
use portsim::operator::{C64, ZERO};
use portsim::povm_oracle::{povm, psd_sqrt};
use portsim::protocols::{
    average_fidelity, entanglement_fidelity, haar_qubit, naimark_with_spectators,
    resource_operator, resource_state, success_probability, teleport_with_rng, NaimarkCircuit,
    Protocol,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Index of |b, a, c, r⟩ with B and A N-bit registers.
fn idx(n: usize, b: usize, a: usize, cbit: usize, r: usize) -> usize {
    (((b << n) | a) << 2) | (cbit << 1) | r
}

/// |Φ⁺⟩_{RC} ⊗ (X ⊗ I)|ψ⁻⟩^{⊗N}, normalized.
fn purified(protocol: Protocol, n: usize) -> Vec<C64> {
    let x = resource_operator(protocol, n).unwrap();
    let da = 1usize << n;
    let mut singlets = vec![ZERO; da * da];
    for a in 0..da {
        let b = !a & (da - 1);
        let sign = if a.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        singlets[b * da + a] = C64::new(sign, 0.0);
    }
    let mut out = vec![ZERO; 4 * da * da];
    for b in 0..da {
        for a in 0..da {
            let amp: C64 = (0..da).map(|a0| x.get(a, a0) * singlets[b * da + a0]).sum();
            for bit in 0..2 {
                out[idx(n, b, a, bit, bit)] = amp;
            }
        }
    }
    let nrm = portsim::operator::norm(&out);
    out.iter_mut().for_each(|z| *z /= nrm);
    out
}

/// (weight of outcome i, weight of its overlap with Φ⁺ on (R, B_i)).
fn branch(n: usize, state: &[C64], root: &portsim::operator::Operator, i: usize) -> (f64, f64) {
    let da = 1usize << n;
    let mut v = vec![ZERO; state.len()];
    for b in 0..da {
        for r in 0..2 {
            let sys: Vec<C64> = (0..2 * da)
                .map(|s| state[idx(n, b, s >> 1, s & 1, r)])
                .collect();
            for (s, z) in root.apply(&sys).into_iter().enumerate() {
                v[idx(n, b, s >> 1, s & 1, r)] = z;
            }
        }
    }
    let weight: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let mask = 1usize << (n - 1 - i);
    let mut overlap = 0.0;
    for b in (0..da).filter(|b| b & mask == 0) {
        for a in 0..da {
            for cbit in 0..2 {
                let z = (v[idx(n, b, a, cbit, 0)] + v[idx(n, b | mask, a, cbit, 1)])
                    * std::f64::consts::FRAC_1_SQRT_2;
                overlap += z.norm_sqr();
            }
        }
    }
    (weight, overlap)
}

#[test]
fn deterministic_fidelity_matches_purification() {
    for proto in [Protocol::DpbtMes, Protocol::DpbtOpt] {
        for n in 1..=4 {
            let state = purified(proto, n);
            let els = povm(proto.regime(), n).unwrap().elements;
            let fe: f64 = (0..n)
                .map(|i| branch(n, &state, &psd_sqrt(&els[i]).unwrap(), i).1)
                .sum();
            let want = entanglement_fidelity(proto, n).unwrap();
            assert!((fe - want).abs() < 1e-10, "{proto} N={n}: {fe} vs {want}");
        }
    }
}

#[test]
fn probabilistic_success_matches_purification() {
    for proto in [Protocol::PpbtMes, Protocol::PpbtOpt] {
        for n in 1..=4 {
            let state = purified(proto, n);
            let els = povm(proto.regime(), n).unwrap().elements;
            let mut p = 0.0;
            for (i, el) in els.iter().take(n).enumerate() {
                let (w, ov) = branch(n, &state, &psd_sqrt(el).unwrap(), i);
                // Success hands Bob the input exactly.
                assert!((w - ov).abs() < 1e-10, "{proto} N={n} port {i}");
                p += w;
            }
            let want = success_probability(proto, n).unwrap();
            assert!((p - want).abs() < 1e-10, "{proto} N={n}: {p} vs {want}");
        }
    }
}

/// Outcome-averaged fidelity of one input, read off the circuit output.
fn exact_fidelity(
    circ: &NaimarkCircuit,
    res: &[C64],
    input: [C64; 2],
    rng: &mut ChaCha8Rng,
) -> f64 {
    let n = circ.plan.n;
    let run = teleport_with_rng(circ, res, input, rng).unwrap();
    let m = measure_register(&run.final_state, Register::Port);
    let inner = run.final_state.layout.inner_dim();
    let mut f = 0.0;
    for i in 0..n {
        let Some(post) = m.post_states[i].as_ref() else {
            continue;
        };
        let mask = 1usize << (n - 1 - i);
        // ⟨ψ|ρ_B_i|ψ⟩ = Σ over the rest of |⟨ψ|_{B_i} · post|².
        let mut fid = 0.0;
        for (k, &a0) in post.amplitudes.iter().enumerate() {
            if (k / inner) & mask != 0 {
                continue;
            }
            let a1 = post.amplitudes[k + mask * inner];
            fid += (input[0].conj() * a0 + input[1].conj() * a1).norm_sqr();
        }
        f += m.probabilities[i] * fid;
    }
    f
}

#[test]
fn haar_average_within_three_sigma() {
    let mut rng = ChaCha8Rng::seed_from_u64(314);
    for (proto, n) in [(Protocol::DpbtMes, 2), (Protocol::DpbtOpt, 3)] {
        let circ = naimark_with_spectators(proto, n, n).unwrap();
        let res = resource_state(proto, n).unwrap();
        let samples: Vec<f64> = (0..1000)
            .map(|_| exact_fidelity(&circ, &res, haar_qubit(&mut rng), &mut rng))
            .collect();
        let k = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / k;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
        let want = average_fidelity(proto, n).unwrap();
        let sigma = (var / k).sqrt();
        assert!(
            (mean - want).abs() <= 3.0 * sigma.max(1e-12),
            "{proto} N={n}: {mean} vs {want} ± {sigma}"
        );
    }
}
