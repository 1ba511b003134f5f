//! Property tests for the algebraic invariants that hold on all inputs,
//! not just the worked examples.

use std::collections::BTreeMap;

use proptest::prelude::*;

use qfa_core::classical::Dfa;
use qfa_core::formats::{parse_machine, serialize_machine};
use qfa_core::linalg::{Complex64, ComplexMatrix};
use qfa_core::machines::Machine;
use qfa_core::random::Generator;

fn complex_entry() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn square_matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(complex_entry(), dim * dim)
        .prop_map(move |data| ComplexMatrix::new(dim, dim, data))
}

fn any_square_matrix(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim).prop_flat_map(square_matrix)
}

proptest! {
    #[test]
    fn tensor_matches_the_four_index_oracle(
        a in any_square_matrix(3),
        b in any_square_matrix(3),
    ) {
        let t = a.tensor(&b);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                for k in 0..b.rows() {
                    for l in 0..b.cols() {
                        let lhs = t.get(i * b.rows() + k, j * b.cols() + l);
                        prop_assert_eq!(lhs, a.get(i, j) * b.get(k, l));
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_trace_is_multiplicative(
        a in any_square_matrix(3),
        b in any_square_matrix(3),
    ) {
        let lhs = a.tensor(&b).trace();
        let rhs = a.trace() * b.trace();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_the_trace(
        (dim_a, dim_b, m) in (1..=3usize, 1..=3usize).prop_flat_map(|(a, b)| {
            square_matrix(a * b).prop_map(move |m| (a, b, m))
        }),
    ) {
        let reduced = m.partial_trace_second(dim_a, dim_b).unwrap();
        prop_assert!((reduced.trace() - m.trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_of_a_product_factorizes(
        a in any_square_matrix(3),
        b in any_square_matrix(3),
    ) {
        let reduced = a.tensor(&b).partial_trace_second(a.rows(), b.rows()).unwrap();
        prop_assert!(reduced.approx_eq(&a.scale(b.trace()), 1e-12));
    }

    #[test]
    fn dfa_matrix_evaluation_agrees_with_the_run_semantics(
        states in 1..=5usize,
        transitions in prop::collection::vec(0..5usize, 10),
        accepting in prop::collection::vec(any::<bool>(), 5),
        word in prop::collection::vec(0..2usize, 0..=8),
    ) {
        let labels: Vec<String> = (1..=states).map(|i| format!("s{i}")).collect();
        let alphabet = vec!["a".to_string(), "b".to_string()];
        let mut delta = BTreeMap::new();
        for (i, s) in labels.iter().enumerate() {
            for (j, sym) in alphabet.iter().enumerate() {
                let t = labels[transitions[i * 2 + j] % states].clone();
                delta.insert((s.clone(), sym.clone()), t);
            }
        }
        let accepting: Vec<String> = labels
            .iter()
            .enumerate()
            .filter(|(i, _)| accepting[*i])
            .map(|(_, s)| s.clone())
            .collect();
        let dfa = Dfa::new(labels, alphabet.clone(), "s1", accepting, delta).unwrap();
        let input: Vec<String> = word.iter().map(|&i| alphabet[i].clone()).collect();
        let expected = u8::from(dfa.accepts(&input).unwrap());
        prop_assert_eq!(dfa.matrix_eval(&input).unwrap(), expected);
    }

    /// Round trip through the interchange format for every machine kind,
    /// with the machine drawn from the seeded generators.
    #[test]
    fn interchange_format_round_trips(seed in any::<u64>(), kind in 0..7usize) {
        let mut gen = Generator::from_seed(seed);
        let alphabet = vec!["a".to_string(), "b".to_string()];
        let outputs = vec!["x".to_string(), "y".to_string()];
        let machine = match kind {
            0 => Machine::Dfa(gen.dfa(3, &alphabet)),
            1 => Machine::Mo1g(gen.mo1g(2, &alphabet, 2)),
            2 => Machine::Cl1Qfa(gen.cl1qfa(2, &alphabet, 2, 2)),
            3 => Machine::Qfac(gen.qfac(2, 2, &alphabet)),
            4 => Machine::Qcfa(gen.qcfa(2, 2, &alphabet, 2)),
            5 => Machine::Ancilla(gen.ancilla(2, &alphabet, &outputs)),
            _ => Machine::Qsm(gen.qsm(2, &alphabet, &outputs)),
        };
        let text = serialize_machine(&machine);
        let reparsed = parse_machine(&text).unwrap();
        prop_assert_eq!(&reparsed, &machine);
        prop_assert_eq!(serialize_machine(&reparsed), text);
    }
}
