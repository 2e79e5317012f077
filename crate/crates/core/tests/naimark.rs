mod common;

use common::{embed_input, naimark_residual, naimark_target, oracle_roots, CIRCUITS};
use portsim::circuit::{measure_register, Register};
use portsim::protocols::{haar_state, naimark, Protocol};
use portsim::schur::StateVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn circuits_match_oracle_square_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for proto in CIRCUITS {
        for n in 1..=4 {
            let circ = naimark(proto, n).unwrap();
            let roots = oracle_roots(proto, n);
            for _ in 0..10 {
                let psi = haar_state(&mut rng, 1 << (n + 1));
                let out = circ.run(&embed_input(&circ, &psi)).unwrap();
                let res = naimark_residual(&circ, &out, &naimark_target(&circ, &roots, &psi));
                assert!(res < 1e-8, "{proto} N={n}: residual {res:e}");
            }
        }
    }
}

#[test]
fn measurement_recovers_born_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 3;
    let circ = naimark(Protocol::PpbtOpt, n).unwrap();
    let roots = oracle_roots(Protocol::PpbtOpt, n);
    let els = portsim::povm_oracle::povm(Protocol::PpbtOpt.regime(), n)
        .unwrap()
        .elements;
    let psi = haar_state(&mut rng, 1 << (n + 1));
    let out = StateVector::new(circ.run(&embed_input(&circ, &psi)).unwrap(), circ.layout).unwrap();
    let m = measure_register(&out, Register::Port);
    for (i, e) in els.iter().enumerate() {
        let want = e.expectation(&psi).re;
        assert!((m.probabilities[i] - want).abs() < 1e-10);
        // Post-state ∝ √Πᵢ|ψ⟩.
        let post = m.post_states[i].as_ref().unwrap();
        let w = roots[i].apply(&psi);
        let nrm = portsim::operator::norm(&w);
        let overlap: num_complex::Complex64 = (0..psi.len())
            .map(|sys| post.amplitudes[circ.layout.index(0, sys, i, 0)] * w[sys].conj() / nrm)
            .sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn no_amplification_branch_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let n = 3;
    let circ = naimark(Protocol::PpbtMesNoAa, n).unwrap();
    assert_eq!(circ.rounds(), 0);
    let els = portsim::povm_oracle::povm(Protocol::PpbtMesNoAa.regime(), n)
        .unwrap()
        .elements;
    let psi = haar_state(&mut rng, 1 << (n + 1));
    let out = StateVector::new(circ.run(&embed_input(&circ, &psi)).unwrap(), circ.layout).unwrap();
    let m = measure_register(&out, Register::Port);
    let mut total = 0.0;
    for (i, el) in els.iter().take(n).enumerate() {
        let want = 0.25 * el.expectation(&psi).re;
        assert!((m.probabilities[i] - want).abs() < 1e-10);
        total += m.probabilities[i];
    }
    let all: f64 = els[..n].iter().map(|e| e.expectation(&psi).re).sum();
    assert!((total - 0.25 * all).abs() < 1e-10);
}
