//! Seeded generators for random machines and their building blocks.
//!
//! Random unitaries come from orthonormalizing Gaussian matrices, random
//! channels and measurements from slicing a random isometry into blocks
//! (so the completeness conditions hold by construction), and random DFAs
//! from uniform transition choice. Everything is driven by a ChaCha
//! stream cipher, so a given seed reproduces the same machines on every
//! platform.

use std::collections::BTreeMap;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{GeneralMeasurement, ProjectiveMeasurement, QuantumOperation};
use crate::classical::Dfa;
use crate::linalg::{Complex64, ComplexMatrix, ComplexVector, DensityOperator};
use crate::machines::{AncillaQfa, Cl1Qfa, Mo1gQfa, Qcfa1, Qfac1, Qsm};

pub struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn bool(&mut self) -> bool {
        self.rng.random::<bool>()
    }

    /// Standard normal via Box-Muller.
    fn gaussian(&mut self) -> f64 {
        let u1: f64 = 1.0 - self.rng.random::<f64>();
        let u2: f64 = self.rng.random::<f64>();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    fn gaussian_complex(&mut self) -> Complex64 {
        Complex64::new(self.gaussian(), self.gaussian())
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        let data = (0..rows * cols).map(|_| self.gaussian_complex()).collect();
        ComplexMatrix::new(rows, cols, data)
    }

    /// Random isometry (`rows ≥ cols`) by modified Gram-Schmidt over the
    /// columns of a Gaussian matrix.
    pub fn isometry(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        assert!(rows >= cols, "an isometry cannot widen the space");
        loop {
            let g = self.gaussian_matrix(rows, cols);
            let mut columns: Vec<ComplexVector> = (0..cols)
                .map(|j| {
                    ComplexVector::new((0..rows).map(|i| g.get(i, j)).collect())
                })
                .collect();
            let mut ok = true;
            for j in 0..cols {
                for k in 0..j {
                    let proj = columns[k].inner(&columns[j]);
                    columns[j] = columns[j].sub(&columns[k].scale(proj));
                }
                let norm = columns[j].norm();
                if norm < 1e-8 {
                    ok = false;
                    break;
                }
                columns[j] = columns[j].scale(Complex64::new(1.0 / norm, 0.0));
            }
            if !ok {
                continue;
            }
            let mut m = ComplexMatrix::zeros(rows, cols);
            for (j, col) in columns.iter().enumerate() {
                for i in 0..rows {
                    m.set(i, j, col.get(i));
                }
            }
            return m;
        }
    }

    pub fn unitary(&mut self, dim: usize) -> ComplexMatrix {
        self.isometry(dim, dim)
    }

    /// Random trace-preserving operation with `num_kraus` elements, cut
    /// from the row blocks of a random `(dim·num_kraus) × dim` isometry.
    pub fn channel(&mut self, dim: usize, num_kraus: usize) -> QuantumOperation {
        assert!(num_kraus >= 1);
        let v = self.isometry(dim * num_kraus, dim);
        let kraus = (0..num_kraus)
            .map(|b| {
                let mut e = ComplexMatrix::zeros(dim, dim);
                for i in 0..dim {
                    for j in 0..dim {
                        e.set(i, j, v.get(b * dim + i, j));
                    }
                }
                e
            })
            .collect();
        QuantumOperation::new(kraus).expect("blocks share the channel dimension")
    }

    /// Random general measurement: the same block construction, one block
    /// per outcome.
    pub fn general_measurement(&mut self, dim: usize, outcomes: &[String]) -> GeneralMeasurement {
        let op = self.channel(dim, outcomes.len());
        GeneralMeasurement::new(outcomes.to_vec(), op.kraus().to_vec())
            .expect("one operator per outcome")
    }

    /// Random projective measurement: a random unitary's columns are dealt
    /// uniformly to outcomes and each outcome's projector sums its dyads.
    /// Outcomes may end up with the zero projector.
    pub fn projective_measurement(
        &mut self,
        dim: usize,
        outcomes: &[String],
    ) -> ProjectiveMeasurement {
        let u = self.unitary(dim);
        let mut projectors = vec![ComplexMatrix::zeros(dim, dim); outcomes.len()];
        for j in 0..dim {
            let col = ComplexVector::new((0..dim).map(|i| u.get(i, j)).collect());
            let target = self.index(outcomes.len());
            projectors[target] = projectors[target].add(&col.outer_self());
        }
        ProjectiveMeasurement::new(outcomes.to_vec(), projectors)
            .expect("one projector per outcome")
    }

    /// Random mixed state `G G† / Tr(G G†)`.
    pub fn density_operator(&mut self, dim: usize) -> DensityOperator {
        let g = self.gaussian_matrix(dim, dim);
        let psd = g.mul(&g.dagger());
        let tr = psd.trace().re;
        DensityOperator::new(psd.scale(Complex64::new(1.0 / tr, 0.0)), crate::TOL)
            .expect("normalized Gram matrix is a state")
    }

    /// Random word of length up to `max_len` (inclusive, uniform length).
    pub fn word(&mut self, alphabet: &[String], max_len: usize) -> Vec<String> {
        let len = self.index(max_len + 1);
        self.word_exact(alphabet, len)
    }

    /// Random word of exactly `len` symbols.
    pub fn word_exact(&mut self, alphabet: &[String], len: usize) -> Vec<String> {
        (0..len)
            .map(|_| alphabet[self.index(alphabet.len())].clone())
            .collect()
    }

    fn labels(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    /// Random DFA over the given alphabet: uniform transitions, each state
    /// accepting with probability 1/2, initial state `s1`.
    pub fn dfa(&mut self, num_states: usize, alphabet: &[String]) -> Dfa {
        let states = Self::labels("s", num_states);
        let mut delta = BTreeMap::new();
        for s in &states {
            for a in alphabet {
                let t = states[self.index(num_states)].clone();
                delta.insert((s.clone(), a.clone()), t);
            }
        }
        let accepting: Vec<String> = states.iter().filter(|_| self.bool()).cloned().collect();
        Dfa::new(states, alphabet.to_vec(), "s1", accepting, delta).expect("total by construction")
    }

    /// Random channel-driven machine with a random accepting state subset.
    pub fn mo1g(&mut self, dim: usize, alphabet: &[String], num_kraus: usize) -> Mo1gQfa {
        let states = Self::labels("q", dim);
        let mut operations = BTreeMap::new();
        for a in alphabet {
            operations.insert(a.clone(), self.channel(dim, num_kraus));
        }
        let accepting: Vec<String> = states.iter().filter(|_| self.bool()).cloned().collect();
        Mo1gQfa::with_accepting_states(states.clone(), alphabet.to_vec(), "q1", operations, &accepting)
            .expect("structurally consistent by construction")
    }

    /// Random control-language machine: random unitaries, a random
    /// projective measurement with `num_outcomes` outcomes, and a random
    /// control DFA over the outcomes.
    pub fn cl1qfa(
        &mut self,
        dim: usize,
        alphabet: &[String],
        num_outcomes: usize,
        control_states: usize,
    ) -> Cl1Qfa {
        let states = Self::labels("q", dim);
        let outcomes = Self::labels("c", num_outcomes);
        let mut unitaries = BTreeMap::new();
        for a in alphabet {
            unitaries.insert(a.clone(), self.unitary(dim));
        }
        let measurement = self.projective_measurement(dim, &outcomes);
        let control = self.dfa(control_states, &outcomes);
        Cl1Qfa::new(states, alphabet.to_vec(), "q1", unitaries, measurement, control)
            .expect("structurally consistent by construction")
    }

    /// Random machine with classical states selecting unitaries.
    pub fn qfac(&mut self, dim: usize, classical_states: usize, alphabet: &[String]) -> Qfac1 {
        let quantum = Self::labels("q", dim);
        let classical = self.dfa(classical_states, alphabet).with_accepting([]).unwrap();
        let mut unitaries = BTreeMap::new();
        for s in classical.states() {
            for a in alphabet {
                unitaries.insert((s.clone(), a.clone()), self.unitary(dim));
            }
        }
        let outcome_pair = vec!["a".to_string(), "r".to_string()];
        let mut finals = BTreeMap::new();
        for s in classical.states() {
            finals.insert(s.clone(), self.projective_measurement(dim, &outcome_pair));
        }
        Qfac1::new(quantum, "q1", unitaries, classical, finals)
            .expect("structurally consistent by construction")
    }

    /// Random two-way-communication machine: random general measurements
    /// per (state, symbol), uniform classical transitions, random
    /// accepting subset.
    pub fn qcfa(
        &mut self,
        dim: usize,
        classical_states: usize,
        alphabet: &[String],
        num_outcomes: usize,
    ) -> Qcfa1 {
        let quantum = Self::labels("q", dim);
        let classical = Self::labels("s", classical_states);
        let outcomes = Self::labels("c", num_outcomes);
        let mut measurements = BTreeMap::new();
        let mut delta = BTreeMap::new();
        for s in &classical {
            for a in alphabet {
                measurements.insert((s.clone(), a.clone()), self.general_measurement(dim, &outcomes));
                for c in &outcomes {
                    let t = classical[self.index(classical.len())].clone();
                    delta.insert((s.clone(), a.clone(), c.clone()), t);
                }
            }
        }
        let accepting: Vec<String> = classical.iter().filter(|_| self.bool()).cloned().collect();
        Qcfa1::new(
            quantum,
            classical,
            alphabet.to_vec(),
            outcomes,
            "q1",
            "s1",
            measurements,
            delta,
            accepting,
        )
        .expect("structurally consistent by construction")
    }

    /// Random ancilla machine: per symbol, a random isometry sliced into
    /// one block per output symbol gives amplitudes that satisfy the
    /// orthogonality condition exactly (up to float error).
    pub fn ancilla(&mut self, dim: usize, alphabet: &[String], outputs: &[String]) -> AncillaQfa {
        let states = Self::labels("q", dim);
        let mut delta = BTreeMap::new();
        for a in alphabet {
            let op = self.channel(dim, outputs.len());
            for (w, omega) in outputs.iter().enumerate() {
                let v = &op.kraus()[w];
                for (j, q) in states.iter().enumerate() {
                    for (i, p) in states.iter().enumerate() {
                        let amp = v.get(i, j);
                        if amp != Complex64::ZERO {
                            delta.insert((q.clone(), a.clone(), p.clone(), omega.clone()), amp);
                        }
                    }
                }
            }
        }
        let accepting: Vec<String> = states.iter().filter(|_| self.bool()).cloned().collect();
        AncillaQfa::new(
            states,
            alphabet.to_vec(),
            outputs.to_vec(),
            "q1",
            delta,
            accepting,
        )
        .expect("structurally consistent by construction")
    }

    /// Random quantum sequential machine, built like [`Self::ancilla`]
    /// with the QSM index order.
    pub fn qsm(&mut self, dim: usize, alphabet: &[String], outputs: &[String]) -> Qsm {
        let states = Self::labels("s", dim);
        let mut delta = BTreeMap::new();
        for a in alphabet {
            let op = self.channel(dim, outputs.len());
            for (w, omega) in outputs.iter().enumerate() {
                let v = &op.kraus()[w];
                for (s_idx, s) in states.iter().enumerate() {
                    for (t_idx, t) in states.iter().enumerate() {
                        let amp = v.get(t_idx, s_idx);
                        if amp != Complex64::ZERO {
                            delta.insert((a.clone(), s.clone(), omega.clone(), t.clone()), amp);
                        }
                    }
                }
            }
        }
        Qsm::new(states, alphabet.to_vec(), outputs.to_vec(), "s1", delta)
            .expect("structurally consistent by construction")
    }
}
