//! Two-sender/two-receiver discrete memoryless channels, the magic-square
//! game channel, and input distributions produced by encoders that measure a
//! shared entangled state.
//!
//! Channel inputs carry a question/answer pair flattened to the string
//! `"q:abc"`; the lexicographic symbol order is part of the file format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{is_win, AnswerTriple, ClassicalStrategyPair, QuantumStrategy, QuestionPair};
use crate::prob::{compose_chain, for_each_index, Alphabet, ConditionalPmf, JointPmf};
use crate::quantum::{trace_product, ComplexMatrix, DensityOperator, Povm};

/// A discrete memoryless interference channel `p(y₁,y₂|x₁,x₂)`, stored as a
/// dense tensor indexed `(x₁, x₂, y₁, y₂)`.
#[derive(Debug, Clone)]
pub struct DmIc {
    x1: Alphabet,
    x2: Alphabet,
    y1: Alphabet,
    y2: Alphabet,
    probs: Vec<f64>,
}

impl DmIc {
    pub fn new(
        x1: Alphabet,
        x2: Alphabet,
        y1: Alphabet,
        y2: Alphabet,
        probs: Vec<f64>,
    ) -> Result<Self> {
        let expected = x1.len() * x2.len() * y1.len() * y2.len();
        if probs.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: probs.len(),
            });
        }
        let out_size = y1.len() * y2.len();
        for (i, &p) in probs.iter().enumerate() {
            if p < 0.0 || p.is_nan() {
                return Err(Error::NegativeEntry { index: i, value: p });
            }
        }
        for row in 0..x1.len() * x2.len() {
            let total: f64 = probs[row * out_size..(row + 1) * out_size].iter().sum();
            if (total - 1.0).abs() > crate::prob::MASS_TOLERANCE {
                return Err(Error::RowMassNotOne {
                    row,
                    total,
                    tolerance: crate::prob::MASS_TOLERANCE,
                });
            }
        }
        Ok(Self {
            x1,
            x2,
            y1,
            y2,
            probs,
        })
    }

    pub fn x1(&self) -> &Alphabet {
        &self.x1
    }

    pub fn x2(&self) -> &Alphabet {
        &self.x2
    }

    pub fn y1(&self) -> &Alphabet {
        &self.y1
    }

    pub fn y2(&self) -> &Alphabet {
        &self.y2
    }

    pub fn prob(&self, ix1: usize, ix2: usize, iy1: usize, iy2: usize) -> f64 {
        let i = ((ix1 * self.x2.len() + ix2) * self.y1.len() + iy1) * self.y2.len() + iy2;
        self.probs[i]
    }

    /// The channel as a conditional pmf with given `(X₁, X₂)` and target
    /// `(Y₁, Y₂)`, using the alphabets' own variable names.
    pub fn conditional(&self) -> Result<ConditionalPmf> {
        ConditionalPmf::new(
            vec![self.x1.clone(), self.x2.clone()],
            vec![self.y1.clone(), self.y2.clone()],
            self.probs.clone(),
        )
    }

    /// Serializable nested-array form (the on-disk JSON schema).
    pub fn file_repr(&self) -> DmIcFile {
        let mut p = Vec::with_capacity(self.x1.len());
        for ix1 in 0..self.x1.len() {
            let mut px1 = Vec::with_capacity(self.x2.len());
            for ix2 in 0..self.x2.len() {
                let mut px2 = Vec::with_capacity(self.y1.len());
                for iy1 in 0..self.y1.len() {
                    let mut py1 = Vec::with_capacity(self.y2.len());
                    for iy2 in 0..self.y2.len() {
                        py1.push(self.prob(ix1, ix2, iy1, iy2));
                    }
                    px2.push(py1);
                }
                px1.push(px2);
            }
            p.push(px1);
        }
        DmIcFile {
            x1: self.x1.symbols().to_vec(),
            x2: self.x2.symbols().to_vec(),
            y1: self.y1.symbols().to_vec(),
            y2: self.y2.symbols().to_vec(),
            p,
        }
    }

    pub fn from_file_repr(file: DmIcFile) -> Result<Self> {
        let x1 = Alphabet::new("X1", file.x1)?;
        let x2 = Alphabet::new("X2", file.x2)?;
        let y1 = Alphabet::new("Y1", file.y1)?;
        let y2 = Alphabet::new("Y2", file.y2)?;
        let mut probs = Vec::with_capacity(x1.len() * x2.len() * y1.len() * y2.len());
        if file.p.len() != x1.len() {
            return Err(Error::InvalidChannel {
                reason: format!("expected {} x1 slices, got {}", x1.len(), file.p.len()),
            });
        }
        for px1 in &file.p {
            if px1.len() != x2.len() {
                return Err(Error::InvalidChannel {
                    reason: format!("expected {} x2 slices, got {}", x2.len(), px1.len()),
                });
            }
            for px2 in px1 {
                if px2.len() != y1.len() {
                    return Err(Error::InvalidChannel {
                        reason: format!("expected {} y1 rows, got {}", y1.len(), px2.len()),
                    });
                }
                for py1 in px2 {
                    if py1.len() != y2.len() {
                        return Err(Error::InvalidChannel {
                            reason: format!("expected {} y2 entries, got {}", y2.len(), py1.len()),
                        });
                    }
                    probs.extend_from_slice(py1);
                }
            }
        }
        Self::new(x1, x2, y1, y2, probs)
    }
}

/// On-disk JSON schema for a channel: symbol lists plus the transition
/// tensor as nested arrays indexed `[x1][x2][y1][y2]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DmIcFile {
    pub x1: Vec<String>,
    pub x2: Vec<String>,
    pub y1: Vec<String>,
    pub y2: Vec<String>,
    pub p: Vec<Vec<Vec<Vec<f64>>>>,
}

/// The 24 input symbols `"q:abc"` for one sender, questions outermost and
/// answer bit strings in lexicographic order.
pub fn question_answer_alphabet(name: &str) -> Alphabet {
    let mut symbols = Vec::with_capacity(24);
    for q in 1..=3u8 {
        for a in AnswerTriple::all() {
            symbols.push(format!("{q}:{}", a.label()));
        }
    }
    Alphabet::new(name, symbols).expect("distinct symbols")
}

/// Split `"q:abc"` back into its question and answer parts.
fn parse_question_answer(symbol: &str) -> (u8, AnswerTriple) {
    let q = symbol.as_bytes()[0] - b'0';
    let bits = &symbol.as_bytes()[2..5];
    let triple = AnswerTriple::new([bits[0] - b'0', bits[1] - b'0', bits[2] - b'0']);
    (q, triple.expect("alphabet symbols are well-formed"))
}

/// The magic-square game channel: each sender feeds in a question/answer
/// pair; a winning answer pair passes both questions through noiselessly,
/// a losing pair scrambles the outputs to the uniform distribution.
pub fn ms_channel() -> DmIc {
    let x1 = question_answer_alphabet("X1");
    let x2 = question_answer_alphabet("X2");
    let y1 = Alphabet::new("Y1", ["1", "2", "3"]).expect("distinct");
    let y2 = Alphabet::new("Y2", ["1", "2", "3"]).expect("distinct");
    let mut probs = Vec::with_capacity(24 * 24 * 9);
    for s1 in x1.symbols() {
        let (q1, a1) = parse_question_answer(s1);
        for s2 in x2.symbols() {
            let (q2, a2) = parse_question_answer(s2);
            let q = QuestionPair::new(q1, q2).expect("alphabet questions");
            let won = is_win(q, a1, a2);
            for out1 in 1..=3u8 {
                for out2 in 1..=3u8 {
                    let p = if won {
                        if out1 == q1 && out2 == q2 {
                            1.0
                        } else {
                            0.0
                        }
                    } else {
                        1.0 / 9.0
                    };
                    probs.push(p);
                }
            }
        }
    }
    DmIc::new(x1, x2, y1, y2, probs).expect("stochastic by construction")
}

/// One sender's half of an entangled encoder: auxiliary alphabets `U` and
/// `V`, the channel-input alphabet `X`, and a dense family of measurements
/// indexed by `(v₀, u, v)` whose outcome labels are exactly the `X` symbols.
#[derive(Debug, Clone)]
pub struct EncoderSide {
    u: Alphabet,
    v: Alphabet,
    x: Alphabet,
    povms: Vec<Povm>,
}

impl EncoderSide {
    pub fn new(u: Alphabet, v: Alphabet, x: Alphabet, povms: Vec<Povm>) -> Self {
        Self { u, v, x, povms }
    }

    pub fn u(&self) -> &Alphabet {
        &self.u
    }

    pub fn v(&self) -> &Alphabet {
        &self.v
    }

    pub fn x(&self) -> &Alphabet {
        &self.x
    }
}

/// An encoder pair that measures a shared bipartite state: sender `k` holds
/// the `E_k` share and, given `(v₀, u_k, v_k)`, measures with the indexed
/// POVM; the outcome is the channel input `x_k`.
#[derive(Debug, Clone)]
pub struct EntangledEncoderSpec {
    shared_state: DensityOperator,
    partition: (usize, usize),
    v0: Alphabet,
    side1: EncoderSide,
    side2: EncoderSide,
}

impl EntangledEncoderSpec {
    pub fn new(
        shared_state: DensityOperator,
        partition: (usize, usize),
        v0: Alphabet,
        side1: EncoderSide,
        side2: EncoderSide,
    ) -> Result<Self> {
        if partition.0 * partition.1 != shared_state.dim() {
            return Err(Error::BadPartition {
                dim: shared_state.dim(),
                left: partition.0,
                right: partition.1,
            });
        }
        for (k, (side, dim)) in [(1, (&side1, partition.0)), (2, (&side2, partition.1))] {
            let expected = v0.len() * side.u.len() * side.v.len();
            if side.povms.len() != expected {
                return Err(Error::InvalidEncoder {
                    reason: format!(
                        "sender {k} needs {expected} measurements (one per (v0,u,v) triple), got {}",
                        side.povms.len()
                    ),
                });
            }
            for povm in &side.povms {
                if povm.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: povm.dim(),
                    });
                }
                if povm.labels() != side.x.symbols() {
                    return Err(Error::InvalidEncoder {
                        reason: format!(
                            "sender {k} measurement outcomes must be the X{k} symbols in order"
                        ),
                    });
                }
            }
        }
        Ok(Self {
            shared_state,
            partition,
            v0,
            side1,
            side2,
        })
    }

    pub fn shared_state(&self) -> &DensityOperator {
        &self.shared_state
    }

    pub fn partition(&self) -> (usize, usize) {
        self.partition
    }

    pub fn v0(&self) -> &Alphabet {
        &self.v0
    }

    pub fn side(&self, k: u8) -> &EncoderSide {
        match k {
            1 => &self.side1,
            2 => &self.side2,
            _ => panic!("sender index must be 1 or 2"),
        }
    }

    /// Measurement for sender `k` at index triple `(v₀, u, v)`.
    pub fn povm(&self, k: u8, iv0: usize, iu: usize, iv: usize) -> &Povm {
        let side = self.side(k);
        &side.povms[(iv0 * side.u.len() + iu) * side.v.len() + iv]
    }
}

/// The input distribution `p(x₁,x₂ | v₀,u₁,v₁,u₂,v₂)` realized by measuring
/// the shared state: `p = Tr[(L₁ ⊗ L₂) φ]`.
pub fn encoder_input_conditional(spec: &EntangledEncoderSpec) -> Result<ConditionalPmf> {
    let v0 = spec.v0();
    let s1 = spec.side(1);
    let s2 = spec.side(2);
    let n_x1 = s1.x.len();
    let n_x2 = s2.x.len();
    let given_dims = [v0.len(), s1.u.len(), s1.v.len(), s2.u.len(), s2.v.len()];
    let mut probs = Vec::with_capacity(given_dims.iter().product::<usize>() * n_x1 * n_x2);
    let state = spec.shared_state().matrix();
    for_each_index(&given_dims, &mut |g: &[usize]| {
        let povm1 = spec.povm(1, g[0], g[1], g[2]);
        let povm2 = spec.povm(2, g[0], g[3], g[4]);
        // Cache which operators vanish so product traces skip zero terms.
        let live1: Vec<bool> = (0..n_x1)
            .map(|i| povm1.operator(i).max_abs() > 0.0)
            .collect();
        let live2: Vec<bool> = (0..n_x2)
            .map(|i| povm2.operator(i).max_abs() > 0.0)
            .collect();
        for (ix1, &alive1) in live1.iter().enumerate() {
            for (ix2, &alive2) in live2.iter().enumerate() {
                let p = if alive1 && alive2 {
                    let joint = povm1.operator(ix1).kron(povm2.operator(ix2));
                    trace_product(&joint, state)
                        .expect("dimensions validated at construction")
                        .re
                        .max(0.0)
                } else {
                    0.0
                };
                probs.push(p);
            }
        }
    });
    ConditionalPmf::new(
        vec![
            v0.clone(),
            s1.u.clone(),
            s1.v.clone(),
            s2.u.clone(),
            s2.v.clone(),
        ],
        vec![s1.x.clone(), s2.x.clone()],
        probs,
    )
}

fn singleton(name: &str) -> Alphabet {
    Alphabet::new(name, ["0"]).expect("one symbol")
}

fn question_alphabet(name: &str) -> Alphabet {
    Alphabet::new(name, ["1", "2", "3"]).expect("distinct")
}

/// Represent a deterministic strategy as an encoder: a trivial scalar shared
/// state, and for question `v_k = q` a 0/1-valued measurement that emits
/// exactly `x_k = "q:f_k(q)"`.
pub fn classical_encoder(strategy: &ClassicalStrategyPair) -> Result<EntangledEncoderSpec> {
    let state = DensityOperator::new(ComplexMatrix::identity(1))?;
    let one = ComplexMatrix::identity(1);
    let zero = ComplexMatrix::zeros(1, 1);
    let build_side = |k: u8| -> Result<EncoderSide> {
        let x = question_answer_alphabet(if k == 1 { "X1" } else { "X2" });
        let mut povms = Vec::with_capacity(3);
        for q in 1..=3u8 {
            let answer = if k == 1 {
                strategy.answer1(q)
            } else {
                strategy.answer2(q)
            };
            let chosen = format!("{q}:{}", answer.label());
            let outcomes = x
                .symbols()
                .iter()
                .map(|s| {
                    let op = if *s == chosen {
                        one.clone()
                    } else {
                        zero.clone()
                    };
                    (s.clone(), op)
                })
                .collect();
            povms.push(Povm::new(outcomes)?);
        }
        Ok(EncoderSide::new(
            singleton(&format!("U{k}")),
            question_alphabet(&format!("V{k}")),
            x,
            povms,
        ))
    };
    EntangledEncoderSpec::new(
        state,
        (1, 1),
        singleton("V0"),
        build_side(1)?,
        build_side(2)?,
    )
}

/// Represent an entangled strategy as an encoder: sender `k` holds two
/// qubits of the strategy state and, on question `q`, measures the joint
/// spectral projectors of its line of the observable grid; the outcome is
/// `x_k = "q:a"`. Outcomes whose question part differs from `q` carry the
/// zero operator.
pub fn quantum_encoder(strategy: &QuantumStrategy) -> Result<EntangledEncoderSpec> {
    let state = strategy.state().clone();
    let zero = ComplexMatrix::zeros(4, 4);
    let build_side = |k: u8| -> Result<EncoderSide> {
        let x = question_answer_alphabet(if k == 1 { "X1" } else { "X2" });
        let mut povms = Vec::with_capacity(3);
        for q in 1..=3u8 {
            let mut outcomes = Vec::with_capacity(24);
            for symbol in x.symbols() {
                let (sq, answer) = parse_question_answer(symbol);
                let op = if sq == q {
                    line_projector_for(strategy, k, q, answer)
                } else {
                    zero.clone()
                };
                outcomes.push((symbol.clone(), op));
            }
            povms.push(Povm::new(outcomes)?);
        }
        Ok(EncoderSide::new(
            singleton(&format!("U{k}")),
            question_alphabet(&format!("V{k}")),
            x,
            povms,
        ))
    };
    EntangledEncoderSpec::new(
        state,
        (4, 4),
        singleton("V0"),
        build_side(1)?,
        build_side(2)?,
    )
}

/// Joint spectral projector for sender `k` answering `answer` on question
/// `q`: the product of `(𝟙 ± O)/2` over the sender's line of the grid.
fn line_projector_for(
    strategy: &QuantumStrategy,
    k: u8,
    q: u8,
    answer: AnswerTriple,
) -> ComplexMatrix {
    let line: [&crate::quantum::Observable; 3] = if k == 1 {
        [
            strategy.observable(q, 1),
            strategy.observable(q, 2),
            strategy.observable(q, 3),
        ]
    } else {
        [
            strategy.observable(1, q),
            strategy.observable(2, q),
            strategy.observable(3, q),
        ]
    };
    let mut proj = ComplexMatrix::identity(4);
    for (j, obs) in line.iter().enumerate() {
        let (plus, minus) = crate::quantum::spectral_projectors(obs);
        let factor = if answer.bits()[j] == 0 { plus } else { minus };
        proj = proj.mul(&factor).expect("same dim");
    }
    proj
}

/// Compose message/question distributions, an encoder, and a channel into
/// the joint pmf over `(V₀, V₁, U₁, V₂, U₂, X₁, X₂, Y₁, Y₂)`.
///
/// `p1` must condition `(V₁, U₁)` on `V₀` and `p2` likewise for sender 2.
pub fn build_joint(
    p_v0: &JointPmf,
    p1: &ConditionalPmf,
    p2: &ConditionalPmf,
    enc: &EntangledEncoderSpec,
    ch: &DmIc,
) -> Result<JointPmf> {
    let c0 = ConditionalPmf::from_joint(p_v0);
    let enc_cond = encoder_input_conditional(enc)?;
    let ch_cond = ch.conditional()?;
    compose_chain(&[&c0, p1, p2, &enc_cond, &ch_cond])
}

/// Uniform question marginals for an encoder with the preset index shape:
/// returns `(p(v₀), p(v₁,u₁|v₀), p(v₂,u₂|v₀))`, each uniform over its
/// alphabet product.
pub fn uniform_inputs(
    enc: &EntangledEncoderSpec,
) -> Result<(JointPmf, ConditionalPmf, ConditionalPmf)> {
    let p_v0 = JointPmf::uniform(vec![enc.v0().clone()])?;
    let side_factor = |k: u8| -> Result<ConditionalPmf> {
        let side = enc.side(k);
        let t = side.v.len() * side.u.len();
        let probs = vec![1.0 / t as f64; enc.v0().len() * t];
        ConditionalPmf::new(
            vec![enc.v0().clone()],
            vec![side.v.clone(), side.u.clone()],
            probs,
        )
    };
    Ok((p_v0, side_factor(1)?, side_factor(2)?))
}
