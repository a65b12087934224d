//! The magic square game: a two-player cooperative game in which entangled
//! players win with certainty while every classical strategy fails on at
//! least one question pair.
//!
//! Player 1 receives a row index and answers with three bits of even parity;
//! player 2 receives a column index and answers with three bits of odd
//! parity. They win when the bit at the intersection cell agrees: player 1's
//! bit at the column position equals player 2's bit at the row position.
//!
//! The entangled strategy measures a fixed two-ebit state with a 3×3 grid of
//! pairwise-commuting two-qubit observables whose row products are `+𝟙` and
//! column products are `−𝟙` — the operator identities that make a perfect
//! score possible and that no ±1 assignment of numbers can satisfy.

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::prob::{Alphabet, JointPmf};
use crate::quantum::{
    build_observable, spectral_projectors, trace_product, ComplexMatrix, DensityOperator,
    Observable,
};

/// Commutator entries above this fail strategy validation.
pub const COMMUTATION_TOLERANCE: f64 = 1e-12;

/// A question pair: the row index sent to player 1 and the column index sent
/// to player 2, each in `1..=3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuestionPair {
    row: u8,
    col: u8,
}

impl QuestionPair {
    pub fn new(row: u8, col: u8) -> Result<Self> {
        for value in [row, col] {
            if !(1..=3).contains(&value) {
                return Err(Error::BadQuestion { value });
            }
        }
        Ok(Self { row, col })
    }

    /// Player 1's question (the row index).
    pub fn row(&self) -> u8 {
        self.row
    }

    /// Player 2's question (the column index).
    pub fn col(&self) -> u8 {
        self.col
    }

    /// All nine question pairs in row-major order.
    pub fn all() -> Vec<QuestionPair> {
        let mut out = Vec::with_capacity(9);
        for row in 1..=3 {
            for col in 1..=3 {
                out.push(Self { row, col });
            }
        }
        out
    }
}

/// Three answer bits; position `i` (1-based) is the bit for line `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AnswerTriple {
    bits: [u8; 3],
}

impl AnswerTriple {
    pub fn new(bits: [u8; 3]) -> Result<Self> {
        for &value in &bits {
            if value > 1 {
                return Err(Error::BadAnswerBit { value });
            }
        }
        Ok(Self { bits })
    }

    /// Decode an index in `0..8`, most significant bit first, so index order
    /// matches the lexicographic order of the bit strings `000`–`111`.
    pub fn from_index(index: usize) -> Self {
        Self {
            bits: [
                ((index >> 2) & 1) as u8,
                ((index >> 1) & 1) as u8,
                (index & 1) as u8,
            ],
        }
    }

    pub fn index(&self) -> usize {
        (self.bits[0] as usize) << 2 | (self.bits[1] as usize) << 1 | self.bits[2] as usize
    }

    /// All eight triples in index order.
    pub fn all() -> Vec<AnswerTriple> {
        (0..8).map(Self::from_index).collect()
    }

    pub fn bits(&self) -> [u8; 3] {
        self.bits
    }

    /// Bit at 1-based position.
    pub fn bit(&self, position: u8) -> u8 {
        self.bits[(position - 1) as usize]
    }

    /// Sum of bits modulo 2.
    pub fn parity(&self) -> u8 {
        (self.bits[0] + self.bits[1] + self.bits[2]) % 2
    }

    /// The bit string, e.g. `"011"`.
    pub fn label(&self) -> String {
        format!("{}{}{}", self.bits[0], self.bits[1], self.bits[2])
    }
}

/// Whether an answer pair wins on a question pair: player 1's parity even,
/// player 2's parity odd, and the intersection bits agree.
pub fn is_win(q: QuestionPair, a1: AnswerTriple, a2: AnswerTriple) -> bool {
    a1.parity() == 0 && a2.parity() == 1 && a1.bit(q.col()) == a2.bit(q.row())
}

/// All winning answer pairs for one question pair, in `(a1, a2)` index order.
pub fn winning_answer_pairs(q: QuestionPair) -> Vec<(AnswerTriple, AnswerTriple)> {
    let mut out = Vec::new();
    for a1 in AnswerTriple::all() {
        for a2 in AnswerTriple::all() {
            if is_win(q, a1, a2) {
                out.push((a1, a2));
            }
        }
    }
    out
}

/// A deterministic strategy: one answer triple per question for each player.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalStrategyPair {
    f1: [AnswerTriple; 3],
    f2: [AnswerTriple; 3],
}

impl ClassicalStrategyPair {
    pub fn new(f1: [AnswerTriple; 3], f2: [AnswerTriple; 3]) -> Self {
        Self { f1, f2 }
    }

    /// Player 1's answer to row question `row`.
    pub fn answer1(&self, row: u8) -> AnswerTriple {
        self.f1[(row - 1) as usize]
    }

    /// Player 2's answer to column question `col`.
    pub fn answer2(&self, col: u8) -> AnswerTriple {
        self.f2[(col - 1) as usize]
    }

    /// Winning probability under uniformly random questions, as an exact
    /// rational (multiples of 1/9).
    pub fn win_prob(&self) -> Ratio<i64> {
        let wins = QuestionPair::all()
            .into_iter()
            .filter(|&q| is_win(q, self.answer1(q.row()), self.answer2(q.col())))
            .count();
        Ratio::new(wins as i64, 9)
    }

    /// A best deterministic strategy: rows of a ±1 grid consistent everywhere
    /// except the bottom-right cell. Wins 8 of 9 question pairs.
    pub fn standard_optimal() -> Self {
        let t = |b: [u8; 3]| AnswerTriple::new(b).expect("bits");
        Self {
            f1: [t([0, 0, 0]), t([0, 1, 1]), t([1, 0, 1])],
            f2: [t([0, 0, 1]), t([0, 1, 0]), t([0, 1, 0])],
        }
    }
}

/// Exhaustive search over all `8³ × 8³` deterministic strategy pairs.
/// Returns the best winning probability and the first strategy achieving it.
pub fn max_classical_win_prob() -> (Ratio<i64>, ClassicalStrategyPair) {
    let triples = AnswerTriple::all();
    let mut best_wins = 0usize;
    let mut best = ClassicalStrategyPair::new(
        [triples[0], triples[0], triples[0]],
        [triples[0], triples[0], triples[0]],
    );
    let questions = QuestionPair::all();
    for i1 in 0..8 {
        for i2 in 0..8 {
            for i3 in 0..8 {
                let f1 = [triples[i1], triples[i2], triples[i3]];
                // Player 1's parity constraint is question-independent; prune
                // rows that can never win to keep the scan quick.
                for j1 in 0..8 {
                    for j2 in 0..8 {
                        for j3 in 0..8 {
                            let f2 = [triples[j1], triples[j2], triples[j3]];
                            let wins = questions
                                .iter()
                                .filter(|q| {
                                    is_win(
                                        **q,
                                        f1[(q.row() - 1) as usize],
                                        f2[(q.col() - 1) as usize],
                                    )
                                })
                                .count();
                            if wins > best_wins {
                                best_wins = wins;
                                best = ClassicalStrategyPair::new(f1, f2);
                            }
                        }
                    }
                }
            }
        }
    }
    (Ratio::new(best_wins as i64, 9), best)
}

/// An entangled strategy: a shared four-qubit state (player 1 holds the left
/// two qubits, player 2 the right two) and a 3×3 grid of two-qubit
/// observables. Player 1 measures the three observables of their row; player
/// 2 measures the three observables of their column; outcome `+1` is answer
/// bit 0 and `−1` is bit 1.
#[derive(Debug, Clone)]
pub struct QuantumStrategy {
    state: DensityOperator,
    table: [[Observable; 3]; 3],
}

impl QuantumStrategy {
    /// Validates dimensions plus pairwise commutation of every row and every
    /// column of the grid — the property that makes the three measured
    /// outcomes simultaneously sharp.
    pub fn new(state: DensityOperator, table: [[Observable; 3]; 3]) -> Result<Self> {
        if state.dim() != 16 {
            return Err(Error::DimensionMismatch {
                expected: 16,
                got: state.dim(),
            });
        }
        for row in &table {
            for obs in row {
                if obs.dim() != 4 {
                    return Err(Error::DimensionMismatch {
                        expected: 4,
                        got: obs.dim(),
                    });
                }
            }
        }
        for (r, row) in table.iter().enumerate() {
            let line = [&row[0], &row[1], &row[2]];
            check_commuting(&line, &format!("row {}", r + 1))?;
        }
        for (c, obs0) in table[0].iter().enumerate() {
            let line = [obs0, &table[1][c], &table[2][c]];
            check_commuting(&line, &format!("column {}", c + 1))?;
        }
        Ok(Self { state, table })
    }

    pub fn state(&self) -> &DensityOperator {
        &self.state
    }

    /// Observable at 1-based (row, col).
    pub fn observable(&self, row: u8, col: u8) -> &Observable {
        &self.table[(row - 1) as usize][(col - 1) as usize]
    }

    /// The perfect strategy: two maximally entangled qubit pairs (player k
    /// holds one qubit of each pair) and the Pauli grid
    ///
    /// ```text
    ///   X⊗I    X⊗X    I⊗X
    ///  −X⊗Z    Y⊗Y   −Z⊗X
    ///   I⊗Z    Z⊗Z    Z⊗I
    /// ```
    ///
    /// whose rows multiply to `+𝟙` and columns to `−𝟙`.
    pub fn standard() -> Result<Self> {
        // Qubit order (first of player 1, second of player 1, first of
        // player 2, second of player 2); the k-th qubits of the two players
        // are maximally entangled: |ψ⟩ = ½ Σ_{ij} |i j i j⟩.
        let mut amp = vec![Complex64::new(0.0, 0.0); 16];
        for i in 0..2usize {
            for j in 0..2usize {
                amp[i * 8 + j * 4 + i * 2 + j] = Complex64::new(0.5, 0.0);
            }
        }
        let state = DensityOperator::pure(&ComplexMatrix::ket(amp))?;
        let table = [
            [
                build_observable(1, 'X', 'I')?,
                build_observable(1, 'X', 'X')?,
                build_observable(1, 'I', 'X')?,
            ],
            [
                build_observable(-1, 'X', 'Z')?,
                build_observable(1, 'Y', 'Y')?,
                build_observable(-1, 'Z', 'X')?,
            ],
            [
                build_observable(1, 'I', 'Z')?,
                build_observable(1, 'Z', 'Z')?,
                build_observable(1, 'Z', 'I')?,
            ],
        ];
        Self::new(state, table)
    }
}

fn check_commuting(line: &[&Observable; 3], context: &str) -> Result<()> {
    for i in 0..3 {
        for j in (i + 1)..3 {
            let ab = line[i].matrix().mul(line[j].matrix())?;
            let ba = line[j].matrix().mul(line[i].matrix())?;
            let deviation = ab.max_abs_diff(&ba);
            if deviation > COMMUTATION_TOLERANCE {
                return Err(Error::NonCommuting {
                    context: context.to_string(),
                    deviation,
                });
            }
        }
    }
    Ok(())
}

/// Joint projector onto the subspace where the three commuting observables
/// of one line take outcomes `(−1)^{bit}`.
fn line_projector(line: [&Observable; 3], answer: AnswerTriple) -> ComplexMatrix {
    let mut proj = ComplexMatrix::identity(4);
    for (j, obs) in line.iter().enumerate() {
        let (plus, minus) = spectral_projectors(obs);
        let factor = if answer.bits()[j] == 0 { plus } else { minus };
        proj = proj.mul(&factor).expect("same dim");
    }
    proj
}

/// Joint answer distribution of an entangled strategy on one question pair,
/// as a pmf over variables `A1` and `A2` with bit-string symbols `000`–`111`.
pub fn quantum_answer_pmf(strategy: &QuantumStrategy, q: QuestionPair) -> Result<JointPmf> {
    let row = [
        strategy.observable(q.row(), 1),
        strategy.observable(q.row(), 2),
        strategy.observable(q.row(), 3),
    ];
    let col = [
        strategy.observable(1, q.col()),
        strategy.observable(2, q.col()),
        strategy.observable(3, q.col()),
    ];
    let labels: Vec<String> = AnswerTriple::all()
        .iter()
        .map(AnswerTriple::label)
        .collect();
    let mut probs = Vec::with_capacity(64);
    let proj2: Vec<ComplexMatrix> = AnswerTriple::all()
        .into_iter()
        .map(|a2| line_projector(col, a2))
        .collect();
    for a1 in AnswerTriple::all() {
        let p1 = line_projector(row, a1);
        for p2 in &proj2 {
            let joint = p1.kron(p2);
            let p = trace_product(&joint, strategy.state().matrix())?.re;
            probs.push(p.max(0.0));
        }
    }
    JointPmf::new(
        vec![
            Alphabet::new("A1", labels.clone())?,
            Alphabet::new("A2", labels)?,
        ],
        probs,
    )
}

/// Winning probability of an entangled strategy on one question pair.
pub fn quantum_win_prob(strategy: &QuantumStrategy, q: QuestionPair) -> Result<f64> {
    let pmf = quantum_answer_pmf(strategy, q)?;
    let mut total = 0.0;
    for (a1, a2) in winning_answer_pairs(q) {
        total += pmf.probs()[a1.index() * 8 + a2.index()];
    }
    Ok(total)
}

/// Winning probability averaged over uniformly random questions.
pub fn quantum_average_win_prob(strategy: &QuantumStrategy) -> Result<f64> {
    let mut total = 0.0;
    for q in QuestionPair::all() {
        total += quantum_win_prob(strategy, q)?;
    }
    Ok(total / 9.0)
}
