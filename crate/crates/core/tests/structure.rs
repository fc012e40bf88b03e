//! Structure of synthesized circuits on compiled gadget instances: the
//! builder output must be an alternating ladder of controlled-C /
//! controlled-C† blocks with clean-controlled X probes interleaved on the
//! ancilla wires, matching the probe tables. Also the exactness of the
//! reduction over a seeded circuit family.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use otoc_core::builder::{build_otoc_dqc1, build_otoc_dqc1_fallback};
use otoc_core::circuit::{random_circuit, Circuit, Gate, GateKind, Polarity};
use otoc_core::reduction::{compile_trace_to_otoc, probe_tables, verify_reduction};
use otoc_core::sim::DQC1Circuit;

#[derive(Debug, PartialEq)]
enum Token {
    /// Clean-controlled X on a probe wire (1-based gadget wire numbering).
    Probe { wire: u32, polarity: Polarity },
    /// One full application of the gadget unitary or its adjoint.
    Block { adjoint: bool },
}

fn tokenize(d: &DQC1Circuit, gadget: &Circuit) -> Vec<Token> {
    let lifted = gadget.embedded(1 + gadget.n_qubits(), 1).unwrap();
    let forward: Vec<Gate> = lifted.gates().to_vec();
    let backward: Vec<Gate> = lifted.adjoint().gates().to_vec();
    let block_len = forward.len();

    let gates = d.circuit().gates();
    assert!(gates.len() >= 2);
    let first = &gates[0];
    let last = &gates[gates.len() - 1];
    for h in [first, last] {
        assert_eq!(h.kind(), GateKind::H);
        assert_eq!(h.targets(), [0]);
        assert!(h.controls().is_empty());
    }

    let mut tokens = Vec::new();
    let mut run: Vec<Gate> = Vec::new();
    for gate in &gates[1..gates.len() - 1] {
        let is_probe = gate.kind() == GateKind::X
            && gate.controls().len() == 1
            && gate.controls()[0].0 == 0;
        if is_probe {
            assert!(run.is_empty(), "probe interrupts an evolution block");
            tokens.push(Token::Probe {
                wire: gate.targets()[0] as u32, // wire 1+q for gadget qubit q, so 1-based already
                polarity: gate.controls()[0].1,
            });
        } else {
            run.push(gate.clone());
            if run.len() == block_len {
                if run.as_slice() == forward.as_slice() {
                    tokens.push(Token::Block { adjoint: false });
                } else if run.as_slice() == backward.as_slice() {
                    tokens.push(Token::Block { adjoint: true });
                } else {
                    panic!("evolution block matches neither C nor C† ladder");
                }
                run.clear();
            }
        }
    }
    assert!(run.is_empty(), "dangling partial evolution block");
    tokens
}

fn expected_fallback(k: usize) -> Vec<Token> {
    let (w, v) = probe_tables(k).unwrap();
    let mut tokens = Vec::new();
    for j in (1..=k).rev() {
        tokens.push(Token::Probe {
            wire: v[j - 1],
            polarity: Polarity::OnOne,
        });
        tokens.push(Token::Block { adjoint: true });
        tokens.push(Token::Probe {
            wire: w[j - 1],
            polarity: Polarity::OnOne,
        });
        tokens.push(Token::Block { adjoint: false });
    }
    tokens
}

fn expected_paired(k: usize) -> Vec<Token> {
    let (w, v) = probe_tables(k).unwrap();
    let mut tokens = Vec::new();
    for j in (1..=k / 2).rev() {
        let mate = k - j + 1;
        tokens.push(Token::Probe {
            wire: v[j - 1],
            polarity: Polarity::OnOne,
        });
        tokens.push(Token::Block { adjoint: true });
        tokens.push(Token::Probe {
            wire: w[j - 1],
            polarity: Polarity::OnOne,
        });
        tokens.push(Token::Probe {
            wire: w[mate - 1],
            polarity: Polarity::OnZero,
        });
        tokens.push(Token::Block { adjoint: false });
        tokens.push(Token::Probe {
            wire: v[mate - 1],
            polarity: Polarity::OnZero,
        });
    }
    tokens
}

fn payload() -> Circuit {
    // Two distinct gates so block orientation is visible.
    Circuit::new(1).with(GateKind::S, 0).with(GateKind::H, 0)
}

#[test]
fn builder_reproduces_gadget_ladders() {
    let c = payload();
    for k in [1usize, 2, 3, 4, 8] {
        let instance = compile_trace_to_otoc(&c, k).unwrap();
        let d = build_otoc_dqc1(&instance).unwrap();
        let tokens = tokenize(&d, instance.u());
        let expected = if k % 2 == 0 {
            expected_paired(k)
        } else {
            expected_fallback(k)
        };
        assert_eq!(tokens, expected, "k = {k}");

        // Depth accounting: paired halves the evolution count.
        let blocks = tokens
            .iter()
            .filter(|t| matches!(t, Token::Block { .. }))
            .count();
        assert_eq!(blocks, if k % 2 == 0 { k } else { 2 * k });
        let probes = tokens.len() - blocks;
        assert_eq!(probes, 2 * k);
    }
}

#[test]
fn fallback_ladder_for_even_k_too() {
    let c = payload();
    let instance = compile_trace_to_otoc(&c, 4).unwrap();
    let d = build_otoc_dqc1_fallback(&instance).unwrap();
    let tokens = tokenize(&d, instance.u());
    assert_eq!(tokens, expected_fallback(4));
}

#[test]
fn blocks_alternate_adjoint_then_forward() {
    let c = payload();
    for k in [2usize, 3, 8] {
        let instance = compile_trace_to_otoc(&c, k).unwrap();
        let d = build_otoc_dqc1(&instance).unwrap();
        let orientations: Vec<bool> = tokenize(&d, instance.u())
            .into_iter()
            .filter_map(|t| match t {
                Token::Block { adjoint } => Some(adjoint),
                Token::Probe { .. } => None,
            })
            .collect();
        for (i, adj) in orientations.iter().enumerate() {
            assert_eq!(*adj, i % 2 == 0, "k = {k}: block {i}");
        }
    }
}

#[test]
fn reduction_exact_over_seeded_family() {
    // 20 seeded circuits with m ∈ {1, 2, 3}, every supported power of two.
    let mut rng = ChaCha8Rng::seed_from_u64(20260810);
    for idx in 0..20 {
        let m = 1 + idx % 3;
        let c = random_circuit(m, 8, &mut rng);
        for k in [1usize, 2, 4, 8] {
            let check = verify_reduction(&c, k).unwrap();
            assert!(
                check.passed,
                "circuit {idx} (m = {m}), k = {k}: delta = {:?}",
                check.delta
            );
        }
    }
}
