//! Monte-Carlo simulation of the superposition-coding scheme: layered random
//! codebooks, measurement-based encoding with co-sampled transmitter
//! outcomes, joint-typicality decoding, and message-average error
//! estimation.
//!
//! Everything is deterministic for a fixed seed: the codebook draw and each
//! trial use their own counter-derived substream, so results do not depend
//! on evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{
    build_joint, classical_encoder, encoder_input_conditional, ms_channel, quantum_encoder,
    uniform_inputs, DmIc, EntangledEncoderSpec,
};
use crate::error::{Error, Result};
use crate::game::{ClassicalStrategyPair, QuantumStrategy};
use crate::prob::{compose_chain, condition, marginalize, ConditionalPmf, JointPmf};

/// Largest blocklength the exhaustive typicality decoder will accept.
pub const DEFAULT_MAX_BLOCKLENGTH: usize = 12;
/// Largest per-layer message count the decoder will accept.
pub const DEFAULT_MAX_MESSAGES: usize = 1 << 16;
/// Substream reserved for the standalone codebook draw (trials use 0, 1, …).
const CODEBOOK_STREAM: u64 = u64::MAX;

/// Rate four-tuple `(R₁′, R₁″, R₂′, R₂″)`: per sender, a common-layer rate
/// (decoded by both receivers) and a private-layer rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RateSplit {
    pub r1_common: f64,
    pub r1_private: f64,
    pub r2_common: f64,
    pub r2_private: f64,
}

impl RateSplit {
    fn as_array(&self) -> [f64; 4] {
        [
            self.r1_common,
            self.r1_private,
            self.r2_common,
            self.r2_private,
        ]
    }
}

/// Message counts per layer, `⌈2^{nR}⌉` (snapped to the nearest integer when
/// within 1e-9, so rates like log₂3 hit exact counts).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MessageCounts {
    pub m1_common: usize,
    pub m1_private: usize,
    pub m2_common: usize,
    pub m2_private: usize,
}

impl MessageCounts {
    fn as_array(&self) -> [usize; 4] {
        [
            self.m1_common,
            self.m1_private,
            self.m2_common,
            self.m2_private,
        ]
    }
}

/// One drawn message tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Messages {
    pub m1_common: usize,
    pub m1_private: usize,
    pub m2_common: usize,
    pub m2_private: usize,
}

/// Simulation parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    n: usize,
    rates: RateSplit,
    delta: f64,
    trials: usize,
    seed: u64,
    max_blocklength: usize,
    max_messages: usize,
}

impl SimConfig {
    pub fn new(n: usize, rates: RateSplit, delta: f64, trials: usize, seed: u64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidConfig {
                reason: "blocklength must be at least 1".into(),
            });
        }
        for r in rates.as_array() {
            if !r.is_finite() || r < 0.0 {
                return Err(Error::InvalidConfig {
                    reason: format!("rates must be finite and nonnegative, got {r}"),
                });
            }
        }
        if delta <= 0.0 || delta.is_nan() {
            return Err(Error::InvalidConfig {
                reason: format!("typicality tolerance must be positive, got {delta}"),
            });
        }
        if trials < 1 {
            return Err(Error::InvalidConfig {
                reason: "trial count must be at least 1".into(),
            });
        }
        Ok(Self {
            n,
            rates,
            delta,
            trials,
            seed,
            max_blocklength: DEFAULT_MAX_BLOCKLENGTH,
            max_messages: DEFAULT_MAX_MESSAGES,
        })
    }

    /// Raise or lower the exhaustive-search caps.
    pub fn with_caps(mut self, max_blocklength: usize, max_messages: usize) -> Self {
        self.max_blocklength = max_blocklength;
        self.max_messages = max_messages;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rates(&self) -> RateSplit {
        self.rates
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `⌈2^{nR}⌉` per layer, with the 1e-9 integer snap.
    pub fn message_counts(&self) -> MessageCounts {
        let count = |r: f64| -> usize {
            let raw = (2.0f64).powf(self.n as f64 * r);
            let snapped = if (raw - raw.round()).abs() < 1e-9 {
                raw.round()
            } else {
                raw.ceil()
            };
            (snapped as usize).max(1)
        };
        let [r1c, r1p, r2c, r2p] = self.rates.as_array();
        MessageCounts {
            m1_common: count(r1c),
            m1_private: count(r1p),
            m2_common: count(r2c),
            m2_private: count(r2p),
        }
    }

    fn check_caps(&self) -> Result<MessageCounts> {
        if self.n > self.max_blocklength {
            return Err(Error::CapExceeded {
                what: "blocklength",
                value: self.n,
                cap: self.max_blocklength,
            });
        }
        let counts = self.message_counts();
        for m in counts.as_array() {
            if m > self.max_messages {
                return Err(Error::CapExceeded {
                    what: "message count",
                    value: m,
                    cap: self.max_messages,
                });
            }
        }
        Ok(counts)
    }
}

/// The layered random codebooks: one shared time-sharing sequence, per
/// sender a common codeword per common message and a superimposed codeword
/// per message pair. Entries are alphabet indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebooks {
    n: usize,
    v0: Vec<usize>,
    u: [Vec<Vec<usize>>; 2],
    v: [Vec<Vec<Vec<usize>>>; 2],
}

impl Codebooks {
    pub fn new(
        n: usize,
        v0: Vec<usize>,
        u1: Vec<Vec<usize>>,
        v1: Vec<Vec<Vec<usize>>>,
        u2: Vec<Vec<usize>>,
        v2: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let check = |name: &str, ok: bool| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidConfig {
                    reason: format!("codebook shape mismatch at {name}"),
                })
            }
        };
        check("v0", v0.len() == n)?;
        for (k, (u, v)) in [(&u1, &v1), (&u2, &v2)].into_iter().enumerate() {
            let k = k + 1;
            check(&format!("u{k}"), !u.is_empty())?;
            for row in u {
                check(&format!("u{k}"), row.len() == n)?;
            }
            check(&format!("v{k}"), v.len() == u.len())?;
            let private = v.first().map(|r| r.len()).unwrap_or(0);
            check(&format!("v{k}"), private >= 1)?;
            for per_common in v {
                check(&format!("v{k}"), per_common.len() == private)?;
                for row in per_common {
                    check(&format!("v{k}"), row.len() == n)?;
                }
            }
        }
        Ok(Self {
            n,
            v0,
            u: [u1, u2],
            v: [v1, v2],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn v0(&self) -> &[usize] {
        &self.v0
    }

    /// Common codeword of sender `k ∈ {1,2}` for common message `m`.
    pub fn u(&self, k: u8, m: usize) -> &[usize] {
        &self.u[(k - 1) as usize][m]
    }

    /// Superimposed codeword of sender `k` for message pair `(m_common, m_private)`.
    pub fn v(&self, k: u8, m_common: usize, m_private: usize) -> &[usize] {
        &self.v[(k - 1) as usize][m_common][m_private]
    }

    pub fn counts(&self) -> MessageCounts {
        MessageCounts {
            m1_common: self.u[0].len(),
            m1_private: self.v[0][0].len(),
            m2_common: self.u[1].len(),
            m2_private: self.v[1][0].len(),
        }
    }
}

/// The input-side factor distributions `p(v₀)`, `p(v_k,u_k|v₀)`, together
/// with the derived per-layer factors used for codeword sampling.
///
/// Variable names are fixed: `V0`, and `V1,U1` / `V2,U2` per sender.
#[derive(Debug, Clone)]
pub struct FactorDists {
    p_v0: JointPmf,
    pair: [ConditionalPmf; 2],
    u_given: [ConditionalPmf; 2],
    v_given: [ConditionalPmf; 2],
}

impl FactorDists {
    pub fn new(p_v0: JointPmf, p1: ConditionalPmf, p2: ConditionalPmf) -> Result<Self> {
        if p_v0.var_names() != ["V0"] {
            return Err(Error::InvalidConfig {
                reason: "time-sharing distribution must be over the single variable V0".into(),
            });
        }
        let factorize = |p: &ConditionalPmf, k: u8| -> Result<(ConditionalPmf, ConditionalPmf)> {
            let (v_name, u_name) = (format!("V{k}"), format!("U{k}"));
            let given_names: Vec<&str> = p.given().iter().map(|a| a.name()).collect();
            let mut target_names: Vec<&str> = p.target().iter().map(|a| a.name()).collect();
            target_names.sort_unstable();
            let mut expected = [u_name.as_str(), v_name.as_str()];
            expected.sort_unstable();
            if given_names != ["V0"] || target_names != expected {
                return Err(Error::InvalidConfig {
                    reason: format!("sender-{k} factor must map V0 to ({v_name}, {u_name})"),
                });
            }
            let c0 = ConditionalPmf::from_joint(&p_v0);
            let joint = compose_chain(&[&c0, p])?;
            let u_given = condition(&joint, &["V0"], &[&u_name])?;
            let v_given = condition(&joint, &["V0", &u_name], &[&v_name])?;
            Ok((u_given, v_given))
        };
        let (u1, v1) = factorize(&p1, 1)?;
        let (u2, v2) = factorize(&p2, 2)?;
        Ok(Self {
            p_v0,
            pair: [p1, p2],
            u_given: [u1, u2],
            v_given: [v1, v2],
        })
    }

    /// Uniform factors matching an encoder's alphabets.
    pub fn uniform_for(enc: &EntangledEncoderSpec) -> Result<Self> {
        let (p_v0, p1, p2) = uniform_inputs(enc)?;
        Self::new(p_v0, p1, p2)
    }

    pub fn p_v0(&self) -> &JointPmf {
        &self.p_v0
    }

    /// `p(v_k, u_k | v₀)` as supplied.
    pub fn pair(&self, k: u8) -> &ConditionalPmf {
        &self.pair[(k - 1) as usize]
    }

    /// Derived `p(u_k | v₀)`.
    pub fn u_given(&self, k: u8) -> &ConditionalPmf {
        &self.u_given[(k - 1) as usize]
    }

    /// Derived `p(v_k | v₀, u_k)`.
    pub fn v_given(&self, k: u8) -> &ConditionalPmf {
        &self.v_given[(k - 1) as usize]
    }
}

fn sample_codebooks(
    dists: &FactorDists,
    n: usize,
    counts: MessageCounts,
    rng: &mut ChaCha8Rng,
) -> Codebooks {
    let v0: Vec<usize> = (0..n).map(|_| dists.p_v0.sample(rng)[0]).collect();
    let mut u_books: Vec<Vec<Vec<usize>>> = Vec::with_capacity(2);
    let mut v_books: Vec<Vec<Vec<Vec<usize>>>> = Vec::with_capacity(2);
    let commons = [counts.m1_common, counts.m2_common];
    let privates = [counts.m1_private, counts.m2_private];
    for k in 0..2 {
        let u_given = &dists.u_given[k];
        let v_given = &dists.v_given[k];
        let mut u_book = Vec::with_capacity(commons[k]);
        for _ in 0..commons[k] {
            let row: Vec<usize> = (0..n)
                .map(|i| u_given.sample_target(&[v0[i]], rng)[0])
                .collect();
            u_book.push(row);
        }
        let mut v_book = Vec::with_capacity(commons[k]);
        for u_row in &u_book {
            let mut per_common = Vec::with_capacity(privates[k]);
            for _ in 0..privates[k] {
                let row: Vec<usize> = (0..n)
                    .map(|i| v_given.sample_target(&[v0[i], u_row[i]], rng)[0])
                    .collect();
                per_common.push(row);
            }
            v_book.push(per_common);
        }
        u_books.push(u_book);
        v_books.push(v_book);
    }
    let v2 = v_books.pop().expect("two senders");
    let v1 = v_books.pop().expect("two senders");
    let u2 = u_books.pop().expect("two senders");
    let u1 = u_books.pop().expect("two senders");
    Codebooks {
        n,
        v0,
        u: [u1, u2],
        v: [v1, v2],
    }
}

/// Draw the full layered codebook set, i.i.d. per position from the factor
/// distributions. Deterministic given `cfg.seed` (its own substream,
/// disjoint from all trial substreams).
pub fn generate_codebooks(dists: &FactorDists, cfg: &SimConfig) -> Result<Codebooks> {
    let counts = cfg.check_caps()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(CODEBOOK_STREAM);
    Ok(sample_codebooks(dists, cfg.n, counts, &mut rng))
}

/// Everything observable about one transmission.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transmission {
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
    pub y1: Vec<usize>,
    pub y2: Vec<usize>,
}

fn transmit_with(
    cb: &Codebooks,
    messages: Messages,
    enc_cond: &ConditionalPmf,
    ch_cond: &ConditionalPmf,
    rng: &mut impl Rng,
) -> Result<Transmission> {
    let enc_out: Vec<&str> = enc_cond.target().iter().map(|a| a.name()).collect();
    let ch_in: Vec<&str> = ch_cond.given().iter().map(|a| a.name()).collect();
    let sizes_match = enc_cond
        .target()
        .iter()
        .zip(ch_cond.given())
        .all(|(a, b)| a.len() == b.len());
    if enc_out != ch_in || !sizes_match {
        return Err(Error::InvalidChannel {
            reason: "encoder output alphabets do not match channel inputs".into(),
        });
    }
    let u1 = cb.u(1, messages.m1_common);
    let v1 = cb.v(1, messages.m1_common, messages.m1_private);
    let u2 = cb.u(2, messages.m2_common);
    let v2 = cb.v(2, messages.m2_common, messages.m2_private);
    let mut tx = Transmission {
        x1: Vec::with_capacity(cb.n),
        x2: Vec::with_capacity(cb.n),
        y1: Vec::with_capacity(cb.n),
        y2: Vec::with_capacity(cb.n),
    };
    for i in 0..cb.n {
        // Joint sampling of both measurement outcomes realizes the shared
        // correlation exactly.
        let x = enc_cond.sample_target(&[cb.v0[i], u1[i], v1[i], u2[i], v2[i]], rng);
        let y = ch_cond.sample_target(&x, rng);
        tx.x1.push(x[0]);
        tx.x2.push(x[1]);
        tx.y1.push(y[0]);
        tx.y2.push(y[1]);
    }
    Ok(tx)
}

/// Encode a message tuple position by position — sampling both senders'
/// measurement outcomes jointly — and push the result through the channel.
/// Returns the two received sequences.
pub fn simulate_transmission(
    cb: &Codebooks,
    enc: &EntangledEncoderSpec,
    ch: &DmIc,
    messages: Messages,
    rng: &mut impl Rng,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let tx = simulate_transmission_detailed(cb, enc, ch, messages, rng)?;
    Ok((tx.y1, tx.y2))
}

/// As [`simulate_transmission`], but also keeps the channel inputs.
pub fn simulate_transmission_detailed(
    cb: &Codebooks,
    enc: &EntangledEncoderSpec,
    ch: &DmIc,
    messages: Messages,
    rng: &mut impl Rng,
) -> Result<Transmission> {
    let enc_cond = encoder_input_conditional(enc)?;
    let ch_cond = ch.conditional()?;
    transmit_with(cb, messages, &enc_cond, &ch_cond, rng)
}

/// The five-variable marginal a receiver's typicality test runs against:
/// `(V0, U_k, V_k, U_other, Y_k)` in that order.
pub fn decode_target(joint: &JointPmf, receiver: u8) -> Result<JointPmf> {
    let names: [&str; 5] = match receiver {
        1 => ["V0", "U1", "V1", "U2", "Y1"],
        2 => ["V0", "U2", "V2", "U1", "Y2"],
        _ => {
            return Err(Error::InvalidConfig {
                reason: format!("receiver must be 1 or 2, got {receiver}"),
            })
        }
    };
    marginalize(joint, &names)
}

/// Joint-typicality decoding for one receiver: find the unique own message
/// pair such that, for some candidate value of the other sender's common
/// message, all five sequences are δ-typical with `target` (robust
/// typicality: every symbol-tuple frequency within `delta·p` of its
/// probability `p`). Returns `None` when no pair or more than one pair
/// qualifies.
///
/// `target` must be the matching [`decode_target`] marginal. Panics if
/// `receiver` is not 1 or 2.
pub fn typical_decode(
    y: &[usize],
    cb: &Codebooks,
    target: &JointPmf,
    delta: f64,
    receiver: u8,
) -> Option<(usize, usize)> {
    assert!(receiver == 1 || receiver == 2, "receiver must be 1 or 2");
    let other: u8 = 3 - receiver;
    let counts = cb.counts();
    let (own_common, own_private, other_common) = if receiver == 1 {
        (counts.m1_common, counts.m1_private, counts.m2_common)
    } else {
        (counts.m2_common, counts.m2_private, counts.m1_common)
    };
    let n = cb.n;
    let probs = target.probs();
    let mut cell_counts = vec![0usize; probs.len()];
    let mut is_typical = |m_common: usize, m_private: usize, m_other: usize| -> bool {
        cell_counts.iter_mut().for_each(|c| *c = 0);
        let u_own = cb.u(receiver, m_common);
        let v_own = cb.v(receiver, m_common, m_private);
        let u_other = cb.u(other, m_other);
        for i in 0..n {
            let idx = [cb.v0[i], u_own[i], v_own[i], u_other[i], y[i]];
            cell_counts[target.flat_index(&idx)] += 1;
        }
        cell_counts.iter().zip(probs).all(|(&c, &p)| {
            let freq = c as f64 / n as f64;
            (freq - p).abs() <= delta * p
        })
    };
    let mut found: Option<(usize, usize)> = None;
    for m_common in 0..own_common {
        for m_private in 0..own_private {
            let hit = (0..other_common).any(|m_other| is_typical(m_common, m_private, m_other));
            if hit {
                if found.is_some() {
                    return None;
                }
                found = Some((m_common, m_private));
            }
        }
    }
    found
}

/// Where each trial's codebooks come from.
#[derive(Debug, Clone)]
pub enum CodebookSource {
    /// Fresh random codebooks per trial, drawn from the trial's substream.
    Random,
    /// One fixed codebook set reused by every trial.
    Fixed(Codebooks),
}

/// A complete simulation target: channel, encoder, input distributions, and
/// the codebook policy.
#[derive(Debug, Clone)]
pub struct SimSetup {
    pub channel: DmIc,
    pub encoder: EntangledEncoderSpec,
    pub dists: FactorDists,
    pub source: CodebookSource,
}

/// Empirical message-average error estimate with 95% normal-approximation
/// binomial confidence half-widths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorReport {
    pub pe1: f64,
    pub pe2: f64,
    pub ci1: f64,
    pub ci2: f64,
    pub trials: usize,
}

fn validate_fixed_codebooks(
    cb: &Codebooks,
    cfg: &SimConfig,
    counts: MessageCounts,
    enc_cond: &ConditionalPmf,
) -> Result<()> {
    if cb.n != cfg.n {
        return Err(Error::InvalidConfig {
            reason: format!(
                "fixed codebooks have blocklength {} but the config says {}",
                cb.n, cfg.n
            ),
        });
    }
    if cb.counts() != counts {
        return Err(Error::InvalidConfig {
            reason: "fixed codebooks do not match the configured message counts".into(),
        });
    }
    let dims: Vec<usize> = enc_cond.given().iter().map(|a| a.len()).collect();
    let ok = cb.v0.iter().all(|&s| s < dims[0])
        && cb.u[0].iter().flatten().all(|&s| s < dims[1])
        && cb.v[0].iter().flatten().flatten().all(|&s| s < dims[2])
        && cb.u[1].iter().flatten().all(|&s| s < dims[3])
        && cb.v[1].iter().flatten().flatten().all(|&s| s < dims[4]);
    if !ok {
        return Err(Error::InvalidConfig {
            reason: "fixed codebooks index outside the encoder alphabets".into(),
        });
    }
    Ok(())
}

/// Run the full Monte-Carlo estimate: per trial, draw codebooks (per the
/// source policy) and uniform messages, transmit, decode at both receivers,
/// and count own-pair decoding failures.
pub fn estimate_error(cfg: &SimConfig, setup: &SimSetup) -> Result<ErrorReport> {
    let counts = cfg.check_caps()?;
    let enc_cond = encoder_input_conditional(&setup.encoder)?;
    let ch_cond = setup.channel.conditional()?;
    let joint = build_joint(
        &setup.dists.p_v0,
        &setup.dists.pair[0],
        &setup.dists.pair[1],
        &setup.encoder,
        &setup.channel,
    )?;
    let target1 = decode_target(&joint, 1)?;
    let target2 = decode_target(&joint, 2)?;
    if let CodebookSource::Fixed(cb) = &setup.source {
        validate_fixed_codebooks(cb, cfg, counts, &enc_cond)?;
    }
    let mut errors1 = 0usize;
    let mut errors2 = 0usize;
    for trial in 0..cfg.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(trial as u64);
        let generated;
        let cb: &Codebooks = match &setup.source {
            CodebookSource::Fixed(cb) => cb,
            CodebookSource::Random => {
                generated = sample_codebooks(&setup.dists, cfg.n, counts, &mut rng);
                &generated
            }
        };
        let messages = Messages {
            m1_common: rng.gen_range(0..counts.m1_common),
            m1_private: rng.gen_range(0..counts.m1_private),
            m2_common: rng.gen_range(0..counts.m2_common),
            m2_private: rng.gen_range(0..counts.m2_private),
        };
        let tx = transmit_with(cb, messages, &enc_cond, &ch_cond, &mut rng)?;
        if typical_decode(&tx.y1, cb, &target1, cfg.delta, 1)
            != Some((messages.m1_common, messages.m1_private))
        {
            errors1 += 1;
        }
        if typical_decode(&tx.y2, cb, &target2, cfg.delta, 2)
            != Some((messages.m2_common, messages.m2_private))
        {
            errors2 += 1;
        }
    }
    let t = cfg.trials as f64;
    let pe1 = errors1 as f64 / t;
    let pe2 = errors2 as f64 / t;
    let half_width = |p: f64| 1.96 * (p * (1.0 - p) / t).sqrt();
    Ok(ErrorReport {
        pe1,
        pe2,
        ci1: half_width(pe1),
        ci2: half_width(pe2),
        trials: cfg.trials,
    })
}

/// Fixed blocklength-1 codebooks carrying one question per private message:
/// `v_k(0, m) = m`, with trivial common and time-sharing layers.
pub fn question_codebooks(enc: &EntangledEncoderSpec) -> Result<Codebooks> {
    let questions = enc.side(1).v().len();
    if enc.side(2).v().len() != questions {
        return Err(Error::InvalidConfig {
            reason: "senders disagree on the question count".into(),
        });
    }
    let rows: Vec<Vec<Vec<usize>>> = vec![(0..questions).map(|q| vec![q]).collect()];
    Codebooks::new(1, vec![0], vec![vec![0]], rows.clone(), vec![vec![0]], rows)
}

/// Blocklength-1 config for the question-passing presets: private rate
/// log₂3 per sender, tolerance 3.0 (wide enough to accept every single-shot
/// winning outcome, tight enough to reject every losing symbol).
pub fn question_passing_config(trials: usize, seed: u64) -> Result<SimConfig> {
    let rate = 3f64.log2();
    SimConfig::new(
        1,
        RateSplit {
            r1_common: 0.0,
            r1_private: rate,
            r2_common: 0.0,
            r2_private: rate,
        },
        3.0,
        trials,
        seed,
    )
}

/// The magic-square channel driven by the perfect entangled strategy, with
/// question codebooks.
pub fn ms_quantum_setup() -> Result<SimSetup> {
    let encoder = quantum_encoder(&QuantumStrategy::standard()?)?;
    let dists = FactorDists::uniform_for(&encoder)?;
    let source = CodebookSource::Fixed(question_codebooks(&encoder)?);
    Ok(SimSetup {
        channel: ms_channel(),
        encoder,
        dists,
        source,
    })
}

/// The magic-square channel driven by the best deterministic strategy, with
/// question codebooks.
pub fn ms_classical_setup() -> Result<SimSetup> {
    let encoder = classical_encoder(&ClassicalStrategyPair::standard_optimal())?;
    let dists = FactorDists::uniform_for(&encoder)?;
    let source = CodebookSource::Fixed(question_codebooks(&encoder)?);
    Ok(SimSetup {
        channel: ms_channel(),
        encoder,
        dists,
        source,
    })
}
