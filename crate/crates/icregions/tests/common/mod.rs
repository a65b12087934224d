//! Shared helpers for the integration suites: seeded random distributions,
//! randomly generated channel/encoder configurations built through the public
//! API, and small independent oracles used to cross-check library results.

#![allow(dead_code)] // each test binary uses its own subset

use std::collections::HashMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use icregions::channel::{
    build_joint, question_answer_alphabet, DmIc, EncoderSide, EntangledEncoderSpec,
};
use icregions::prob::{Alphabet, ConditionalPmf, JointPmf};
use icregions::quantum::{hermitian_eigen, ComplexMatrix, DensityOperator, Povm};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random point of the probability simplex over `n` outcomes, via
/// normalized exponential draws.
pub fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut draws: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = draws.iter().sum();
    draws.iter_mut().for_each(|d| *d /= total);
    draws
}

/// An alphabet named `name` with symbols `"0"`, `"1"`, … `"n-1"`.
pub fn named_alphabet(name: &str, n: usize) -> Alphabet {
    Alphabet::indexed(name, n).expect("nonzero size")
}

/// A fully random joint pmf over the given alphabets.
pub fn random_joint_pmf(rng: &mut ChaCha8Rng, vars: Vec<Alphabet>) -> JointPmf {
    let cells = vars.iter().map(Alphabet::len).product();
    JointPmf::new(vars, random_simplex(rng, cells)).expect("simplex rows are valid")
}

/// A conditional pmf whose every row is an independent random simplex point.
pub fn random_conditional(
    rng: &mut ChaCha8Rng,
    given: Vec<Alphabet>,
    target: Vec<Alphabet>,
) -> ConditionalPmf {
    let rows: usize = given.iter().map(Alphabet::len).product();
    let cols: usize = target.iter().map(Alphabet::len).product();
    let mut probs = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        probs.extend(random_simplex(rng, cols));
    }
    ConditionalPmf::new(given, target, probs).expect("simplex rows are valid")
}

/// A channel, an encoder, and input distributions, ready to compose.
pub struct TestConfig {
    pub channel: DmIc,
    pub encoder: EntangledEncoderSpec,
    pub p_v0: JointPmf,
    pub p1: ConditionalPmf,
    pub p2: ConditionalPmf,
}

impl TestConfig {
    pub fn joint(&self) -> JointPmf {
        build_joint(&self.p_v0, &self.p1, &self.p2, &self.encoder, &self.channel)
            .expect("config composes")
    }
}

/// A 1×1 measurement whose outcome probabilities are the given row — the
/// scalar case of a POVM, i.e. an arbitrary classical stochastic map.
pub fn scalar_povm(x: &Alphabet, probs: &[f64]) -> Povm {
    let outcomes = x
        .symbols()
        .iter()
        .zip(probs)
        .map(|(s, &p)| {
            (
                s.clone(),
                ComplexMatrix::new(1, 1, vec![Complex64::new(p, 0.0)]).expect("1x1"),
            )
        })
        .collect();
    Povm::new(outcomes).expect("row sums to one")
}

pub fn trivial_shared_state() -> DensityOperator {
    DensityOperator::new(ComplexMatrix::identity(1)).expect("scalar state")
}

fn random_stochastic_side(
    rng: &mut ChaCha8Rng,
    k: u8,
    nv0: usize,
    nu: usize,
    nv: usize,
    x: Alphabet,
) -> EncoderSide {
    let povms = (0..nv0 * nu * nv)
        .map(|_| scalar_povm(&x, &random_simplex(rng, x.len())))
        .collect();
    EncoderSide::new(
        named_alphabet(&format!("U{k}"), nu),
        named_alphabet(&format!("V{k}"), nv),
        x,
        povms,
    )
}

fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    perm
}

fn random_bijective_side(
    rng: &mut ChaCha8Rng,
    k: u8,
    nv0: usize,
    nu: usize,
    nv: usize,
    x: Alphabet,
) -> EncoderSide {
    assert_eq!(x.len(), nv, "a bijection needs matching alphabet sizes");
    let mut povms = Vec::with_capacity(nv0 * nu * nv);
    for _ in 0..nv0 * nu {
        // One bijection V → X per (v0, u) slice, deterministic within it.
        let perm = random_permutation(rng, nv);
        for iv in 0..nv {
            let mut probs = vec![0.0; nv];
            probs[perm[iv]] = 1.0;
            povms.push(scalar_povm(&x, &probs));
        }
    }
    EncoderSide::new(
        named_alphabet(&format!("U{k}"), nu),
        named_alphabet(&format!("V{k}"), nv),
        x,
        povms,
    )
}

struct ConfigShape {
    nv0: usize,
    nu1: usize,
    nu2: usize,
    nv1: usize,
    nv2: usize,
    ny1: usize,
    ny2: usize,
}

fn random_shape(rng: &mut ChaCha8Rng) -> ConfigShape {
    ConfigShape {
        nv0: rng.gen_range(1..=2),
        nu1: rng.gen_range(1..=2),
        nu2: rng.gen_range(1..=2),
        nv1: rng.gen_range(2..=3),
        nv2: rng.gen_range(2..=3),
        ny1: rng.gen_range(2..=3),
        ny2: rng.gen_range(2..=3),
    }
}

fn random_channel(rng: &mut ChaCha8Rng, nx1: usize, nx2: usize, ny1: usize, ny2: usize) -> DmIc {
    let mut probs = Vec::with_capacity(nx1 * nx2 * ny1 * ny2);
    for _ in 0..nx1 * nx2 {
        probs.extend(random_simplex(rng, ny1 * ny2));
    }
    DmIc::new(
        named_alphabet("X1", nx1),
        named_alphabet("X2", nx2),
        named_alphabet("Y1", ny1),
        named_alphabet("Y2", ny2),
        probs,
    )
    .expect("rows are simplex points")
}

fn assemble(
    rng: &mut ChaCha8Rng,
    shape: &ConfigShape,
    channel: DmIc,
    side1: EncoderSide,
    side2: EncoderSide,
) -> TestConfig {
    let v0 = named_alphabet("V0", shape.nv0);
    let encoder =
        EntangledEncoderSpec::new(trivial_shared_state(), (1, 1), v0.clone(), side1, side2)
            .expect("shapes agree");
    let p_v0 = random_joint_pmf(rng, vec![v0.clone()]);
    let p1 = random_conditional(
        rng,
        vec![v0.clone()],
        vec![
            named_alphabet("V1", shape.nv1),
            named_alphabet("U1", shape.nu1),
        ],
    );
    let p2 = random_conditional(
        rng,
        vec![v0],
        vec![
            named_alphabet("V2", shape.nv2),
            named_alphabet("U2", shape.nu2),
        ],
    );
    TestConfig {
        channel,
        encoder,
        p_v0,
        p1,
        p2,
    }
}

/// A fully random small configuration: random channel, random classical
/// stochastic encoders (scalar POVMs), random input factors.
pub fn random_stochastic_config(rng: &mut ChaCha8Rng) -> TestConfig {
    let shape = random_shape(rng);
    let nx1 = rng.gen_range(2..=3);
    let nx2 = rng.gen_range(2..=3);
    let channel = random_channel(rng, nx1, nx2, shape.ny1, shape.ny2);
    let side1 = random_stochastic_side(
        rng,
        1,
        shape.nv0,
        shape.nu1,
        shape.nv1,
        channel.x1().clone(),
    );
    let side2 = random_stochastic_side(
        rng,
        2,
        shape.nv0,
        shape.nu2,
        shape.nv2,
        channel.x2().clone(),
    );
    assemble(rng, &shape, channel, side1, side2)
}

/// Like [`random_stochastic_config`], but each `(v0, u)` slice of each
/// encoder is a deterministic bijection from the question to the input.
pub fn random_bijective_config(rng: &mut ChaCha8Rng) -> TestConfig {
    let shape = random_shape(rng);
    let channel = random_channel(rng, shape.nv1, shape.nv2, shape.ny1, shape.ny2);
    let side1 = random_bijective_side(
        rng,
        1,
        shape.nv0,
        shape.nu1,
        shape.nv1,
        channel.x1().clone(),
    );
    let side2 = random_bijective_side(
        rng,
        2,
        shape.nv0,
        shape.nu2,
        shape.nv2,
        channel.x2().clone(),
    );
    assemble(rng, &shape, channel, side1, side2)
}

/// The joint pmf of a fresh random stochastic configuration.
pub fn random_config_joint(rng: &mut ChaCha8Rng) -> JointPmf {
    random_stochastic_config(rng).joint()
}

/// A random answering strategy on the magic-square channel: each sender maps
/// its question to a random distribution over the answers for that question,
/// with random (possibly correlated-by-`V0`) question statistics.
pub fn random_ms_strategy_config(rng: &mut ChaCha8Rng, channel: &DmIc) -> TestConfig {
    let nv0 = rng.gen_range(1..=2);
    let v0 = named_alphabet("V0", nv0);
    let build_side = |rng: &mut ChaCha8Rng, k: u8| -> EncoderSide {
        let x = question_answer_alphabet(if k == 1 { "X1" } else { "X2" });
        let mut povms = Vec::with_capacity(nv0 * 3);
        for _ in 0..nv0 {
            for q in 0..3usize {
                // Support only the eight inputs that carry this question.
                let inner = random_simplex(rng, 8);
                let mut probs = vec![0.0; 24];
                probs[8 * q..8 * (q + 1)].copy_from_slice(&inner);
                povms.push(scalar_povm(&x, &probs));
            }
        }
        EncoderSide::new(
            named_alphabet(&format!("U{k}"), 1),
            Alphabet::new(format!("V{k}"), ["1", "2", "3"]).expect("three questions"),
            x,
            povms,
        )
    };
    let side1 = build_side(rng, 1);
    let side2 = build_side(rng, 2);
    let encoder =
        EntangledEncoderSpec::new(trivial_shared_state(), (1, 1), v0.clone(), side1, side2)
            .expect("shapes agree");
    let p_v0 = random_joint_pmf(rng, vec![v0.clone()]);
    let question = |rng: &mut ChaCha8Rng, k: u8| {
        random_conditional(
            rng,
            vec![v0.clone()],
            vec![
                Alphabet::new(format!("V{k}"), ["1", "2", "3"]).expect("three questions"),
                named_alphabet(&format!("U{k}"), 1),
            ],
        )
    };
    let p1 = question(rng, 1);
    let p2 = question(rng, 2);
    TestConfig {
        channel: channel.clone(),
        encoder,
        p_v0,
        p1,
        p2,
    }
}

/// A matrix with independent uniform complex entries in the unit square.
pub fn random_complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
        .collect();
    ComplexMatrix::new(rows, cols, data).expect("sized data")
}

/// A random full-rank mixed state: `AA† / tr(AA†)`.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityOperator {
    let a = random_complex_matrix(rng, dim, dim);
    let m = a.mul(&a.adjoint()).expect("square");
    let tr = m.trace().expect("square").re;
    DensityOperator::new(m.scale(Complex64::new(1.0 / tr, 0.0))).expect("normalized PSD")
}

/// A random POVM: raw positive operators `Bᵢ†Bᵢ` whitened by the inverse
/// square root of their sum, so completeness holds by construction.
pub fn random_povm(rng: &mut ChaCha8Rng, dim: usize, outcomes: usize) -> Povm {
    let raw: Vec<ComplexMatrix> = (0..outcomes)
        .map(|_| {
            let b = random_complex_matrix(rng, dim, dim);
            b.adjoint().mul(&b).expect("square")
        })
        .collect();
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for m in &raw {
        sum = sum.add(m).expect("same dims");
    }
    let (vals, vecs) = hermitian_eigen(&sum).expect("hermitian");
    let mut inv_sqrt_diag = ComplexMatrix::zeros(dim, dim);
    for (i, v) in vals.iter().enumerate() {
        assert!(
            *v > 1e-12,
            "sum of random positive operators is positive definite"
        );
        inv_sqrt_diag.set(i, i, Complex64::new(1.0 / v.sqrt(), 0.0));
    }
    let whiten = vecs
        .mul(&inv_sqrt_diag)
        .expect("same dims")
        .mul(&vecs.adjoint())
        .expect("same dims");
    let named = raw
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            let e = whiten
                .mul(&m)
                .expect("same dims")
                .mul(&whiten)
                .expect("same dims");
            (i.to_string(), e)
        })
        .collect();
    Povm::new(named).expect("whitened operators form a measurement")
}

/// Row-major multi-index of `flat` under `dims` (last axis fastest).
pub fn unflatten(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut idx = vec![0usize; dims.len()];
    for i in (0..dims.len()).rev() {
        idx[i] = flat % dims[i];
        flat /= dims[i];
    }
    idx
}

/// Independent conditional-mutual-information oracle: accumulate the four
/// marginals in hash maps and take the single sum
/// `Σ p(a,b,c) · log₂[ p(a,b,c)·p(c) / (p(a,c)·p(b,c)) ]` directly, with no
/// shared code with the library's entropy-based route.
pub fn cmi_oracle(joint: &JointPmf, a: &[&str], b: &[&str], c: &[&str]) -> f64 {
    let dims = joint.dims();
    let positions = |names: &[&str]| -> Vec<usize> {
        names
            .iter()
            .map(|n| joint.var_index(n).expect("known variable"))
            .collect()
    };
    let (pa, pb, pc) = (positions(a), positions(b), positions(c));
    let project =
        |idx: &[usize], pos: &[usize]| -> Vec<usize> { pos.iter().map(|&i| idx[i]).collect() };
    type PairKey = (Vec<usize>, Vec<usize>);
    type TripleKey = (Vec<usize>, Vec<usize>, Vec<usize>);
    let mut p_abc: HashMap<TripleKey, f64> = HashMap::new();
    let mut p_ac: HashMap<PairKey, f64> = HashMap::new();
    let mut p_bc: HashMap<PairKey, f64> = HashMap::new();
    let mut p_c: HashMap<Vec<usize>, f64> = HashMap::new();
    for (flat, &p) in joint.probs().iter().enumerate() {
        let idx = unflatten(flat, &dims);
        let ka = project(&idx, &pa);
        let kb = project(&idx, &pb);
        let kc = project(&idx, &pc);
        *p_ac.entry((ka.clone(), kc.clone())).or_insert(0.0) += p;
        *p_bc.entry((kb.clone(), kc.clone())).or_insert(0.0) += p;
        *p_c.entry(kc.clone()).or_insert(0.0) += p;
        *p_abc.entry((ka, kb, kc)).or_insert(0.0) += p;
    }
    let mut total = 0.0;
    for ((ka, kb, kc), &p) in &p_abc {
        if p <= 0.0 {
            continue;
        }
        let pac = p_ac[&(ka.clone(), kc.clone())];
        let pbc = p_bc[&(kb.clone(), kc.clone())];
        let pcc = p_c[kc];
        total += p * ((p * pcc) / (pac * pbc)).log2();
    }
    total
}

/// Membership in a convex polygon given counterclockwise (hull order)
/// vertices: left of or on every directed edge, within `tol`.
pub fn point_in_hull(hull: &[(f64, f64)], p: (f64, f64), tol: f64) -> bool {
    match hull.len() {
        0 => false,
        1 => (p.0 - hull[0].0).abs() <= tol && (p.1 - hull[0].1).abs() <= tol,
        n => (0..n).all(|i| {
            let q = hull[i];
            let r = hull[(i + 1) % n];
            (r.0 - q.0) * (p.1 - q.1) - (r.1 - q.1) * (p.0 - q.0) >= -tol
        }),
    }
}

/// Signed area of a polygon (positive when counterclockwise).
pub fn polygon_area(poly: &[(f64, f64)]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    0.5 * (0..n)
        .map(|i| {
            let (x0, y0) = poly[i];
            let (x1, y1) = poly[(i + 1) % n];
            x0 * y1 - x1 * y0
        })
        .sum::<f64>()
}
