//! Finite-alphabet probability: named alphabets, dense joint and conditional
//! distributions, and exact Shannon information measures in bits.
//!
//! Distributions are dense tensors over an ordered list of named variables.
//! The leftmost variable owns the most significant digit of the flat index
//! (row-major), matching the tensor-product convention used by the quantum
//! module. Information measures are evaluated exactly from the tensor; nothing
//! in this module samples or approximates.

use crate::error::{Error, Result};

/// Tolerance for "this mass must equal one" checks. Distributions that miss
/// it are rejected outright — never silently renormalized.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Visit every index tuple of a dense shape in row-major order.
///
/// An empty shape has exactly one (empty) tuple; a shape with a zero axis has
/// none.
pub(crate) fn for_each_index(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; dims.len()];
    loop {
        f(&idx);
        let mut k = dims.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// A named finite symbol set — the value domain of one random variable.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Alphabet {
    name: String,
    symbols: Vec<String>,
}

impl Alphabet {
    /// Build an alphabet, rejecting empty or duplicated symbol lists.
    pub fn new<S, I, T>(name: S, symbols: I) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let name = name.into();
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet { name });
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::DuplicateSymbol {
                    name,
                    symbol: s.clone(),
                });
            }
        }
        Ok(Self { name, symbols })
    }

    /// Alphabet `0, 1, …, n-1` rendered in decimal — convenient for
    /// index-valued variables.
    pub fn indexed(name: impl Into<String>, n: usize) -> Result<Self> {
        Self::new(name, (0..n).map(|i| i.to_string()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }
}

fn check_distinct_names(vars: &[Alphabet]) -> Result<()> {
    for (i, v) in vars.iter().enumerate() {
        if vars[..i].iter().any(|w| w.name() == v.name()) {
            return Err(Error::DuplicateVariable {
                name: v.name().to_string(),
            });
        }
    }
    Ok(())
}

fn check_entries(probs: &[f64]) -> Result<()> {
    for (index, &value) in probs.iter().enumerate() {
        if value < 0.0 || value.is_nan() {
            return Err(Error::NegativeEntry { index, value });
        }
    }
    Ok(())
}

/// A dense joint distribution over one or more named variables.
///
/// Invariants enforced on construction: variable names are distinct, every
/// entry is nonnegative and finite, and the total mass is within
/// [`MASS_TOLERANCE`] of one.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    vars: Vec<Alphabet>,
    probs: Vec<f64>,
}

impl JointPmf {
    pub fn new(vars: Vec<Alphabet>, probs: Vec<f64>) -> Result<Self> {
        check_distinct_names(&vars)?;
        let size: usize = vars.iter().map(Alphabet::len).product();
        if probs.len() != size {
            return Err(Error::LengthMismatch {
                expected: size,
                got: probs.len(),
            });
        }
        check_entries(&probs)?;
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::MassNotOne {
                total,
                tolerance: MASS_TOLERANCE,
            });
        }
        Ok(Self { vars, probs })
    }

    /// The uniform distribution over the product of the given alphabets.
    pub fn uniform(vars: Vec<Alphabet>) -> Result<Self> {
        check_distinct_names(&vars)?;
        let size: usize = vars.iter().map(Alphabet::len).product();
        Self::new(vars, vec![1.0 / size as f64; size])
    }

    pub fn vars(&self) -> &[Alphabet] {
        &self.vars
    }

    pub fn var_names(&self) -> Vec<&str> {
        self.vars.iter().map(Alphabet::name).collect()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn dims(&self) -> Vec<usize> {
        self.vars.iter().map(Alphabet::len).collect()
    }

    /// Position of a variable in the tensor order.
    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v.name() == name)
            .ok_or_else(|| Error::UnknownVariable {
                name: name.to_string(),
            })
    }

    pub fn alphabet(&self, name: &str) -> Result<&Alphabet> {
        Ok(&self.vars[self.var_index(name)?])
    }

    /// Flatten a per-variable index tuple (same order as `vars`).
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.vars.len());
        let mut flat = 0usize;
        for (i, v) in self.vars.iter().enumerate() {
            debug_assert!(idx[i] < v.len());
            flat = flat * v.len() + idx[i];
        }
        flat
    }

    pub fn prob(&self, idx: &[usize]) -> f64 {
        self.probs[self.flat_index(idx)]
    }

    /// Draw one index tuple by inverse-CDF sampling.
    pub fn sample<R: rand::Rng>(&self, rng: &mut R) -> Vec<usize> {
        let u: f64 = rng.gen();
        let mut cum = 0.0;
        let mut last_positive = 0usize;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > 0.0 {
                last_positive = i;
            }
            cum += p;
            if u < cum {
                return self.unflatten(i);
            }
        }
        // Rounding can leave cum marginally below 1; fall back to the last
        // entry that carries mass.
        self.unflatten(last_positive)
    }

    fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0usize; self.vars.len()];
        for (i, v) in self.vars.iter().enumerate().rev() {
            idx[i] = flat % v.len();
            flat /= v.len();
        }
        idx
    }
}

/// A conditional distribution `p(target | given)` stored densely, one
/// normalized row per value of the conditioning tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalPmf {
    given: Vec<Alphabet>,
    target: Vec<Alphabet>,
    /// Row-major over given, then target: `probs[g * target_size + t]`.
    probs: Vec<f64>,
}

impl ConditionalPmf {
    pub fn new(given: Vec<Alphabet>, target: Vec<Alphabet>, probs: Vec<f64>) -> Result<Self> {
        let mut all = given.clone();
        all.extend(target.iter().cloned());
        check_distinct_names(&all)?;
        if target.is_empty() {
            return Err(Error::InvalidConfig {
                reason: "conditional needs at least one target variable".into(),
            });
        }
        let g_size: usize = given.iter().map(Alphabet::len).product();
        let t_size: usize = target.iter().map(Alphabet::len).product();
        if probs.len() != g_size * t_size {
            return Err(Error::LengthMismatch {
                expected: g_size * t_size,
                got: probs.len(),
            });
        }
        check_entries(&probs)?;
        for row in 0..g_size {
            let total: f64 = probs[row * t_size..(row + 1) * t_size].iter().sum();
            if (total - 1.0).abs() > MASS_TOLERANCE {
                return Err(Error::RowMassNotOne {
                    row,
                    total,
                    tolerance: MASS_TOLERANCE,
                });
            }
        }
        Ok(Self {
            given,
            target,
            probs,
        })
    }

    /// Reinterpret an unconditional distribution as a conditional with an
    /// empty conditioning set — handy for building factor chains.
    pub fn from_joint(joint: &JointPmf) -> Self {
        Self {
            given: Vec::new(),
            target: joint.vars.clone(),
            probs: joint.probs.clone(),
        }
    }

    pub fn given(&self) -> &[Alphabet] {
        &self.given
    }

    pub fn target(&self) -> &[Alphabet] {
        &self.target
    }

    pub fn given_size(&self) -> usize {
        self.given.iter().map(Alphabet::len).product()
    }

    pub fn target_size(&self) -> usize {
        self.target.iter().map(Alphabet::len).product()
    }

    pub fn flat_given(&self, g: &[usize]) -> usize {
        debug_assert_eq!(g.len(), self.given.len());
        let mut flat = 0usize;
        for (i, v) in self.given.iter().enumerate() {
            flat = flat * v.len() + g[i];
        }
        flat
    }

    pub fn flat_target(&self, t: &[usize]) -> usize {
        debug_assert_eq!(t.len(), self.target.len());
        let mut flat = 0usize;
        for (i, v) in self.target.iter().enumerate() {
            flat = flat * v.len() + t[i];
        }
        flat
    }

    pub fn row(&self, g_flat: usize) -> &[f64] {
        let t = self.target_size();
        &self.probs[g_flat * t..(g_flat + 1) * t]
    }

    pub fn prob(&self, g: &[usize], t: &[usize]) -> f64 {
        self.row(self.flat_given(g))[self.flat_target(t)]
    }

    /// Draw one target tuple for a fixed conditioning tuple.
    pub fn sample_target<R: rand::Rng>(&self, g: &[usize], rng: &mut R) -> Vec<usize> {
        let row = self.row(self.flat_given(g));
        let u: f64 = rng.gen();
        let mut cum = 0.0;
        let mut last_positive = 0usize;
        let mut chosen = None;
        for (i, &p) in row.iter().enumerate() {
            if p > 0.0 {
                last_positive = i;
            }
            cum += p;
            if u < cum {
                chosen = Some(i);
                break;
            }
        }
        let flat = chosen.unwrap_or(last_positive);
        let mut idx = vec![0usize; self.target.len()];
        let mut rest = flat;
        for (i, v) in self.target.iter().enumerate().rev() {
            idx[i] = rest % v.len();
            rest /= v.len();
        }
        idx
    }
}

/// Shannon entropy of the joint, in bits, with the convention `0·log 0 = 0`.
pub fn entropy(joint: &JointPmf) -> f64 {
    joint
        .probs
        .iter()
        .map(|&p| if p > 0.0 { -p * p.log2() } else { 0.0 })
        .sum()
}

/// Marginal distribution over `keep`, in the order given.
pub fn marginalize(joint: &JointPmf, keep: &[&str]) -> Result<JointPmf> {
    let mut positions = Vec::with_capacity(keep.len());
    for (i, name) in keep.iter().enumerate() {
        if keep[..i].contains(name) {
            return Err(Error::DuplicateVariable {
                name: (*name).to_string(),
            });
        }
        positions.push(joint.var_index(name)?);
    }
    let kept_vars: Vec<Alphabet> = positions.iter().map(|&p| joint.vars[p].clone()).collect();
    let out_size: usize = kept_vars.iter().map(Alphabet::len).product();
    let mut out = vec![0.0f64; out_size];
    let dims = joint.dims();
    let mut flat = 0usize;
    for_each_index(&dims, |idx| {
        let mut reduced = 0usize;
        for (k, &p) in positions.iter().enumerate() {
            reduced = reduced * kept_vars[k].len() + idx[p];
        }
        out[reduced] += joint.probs[flat];
        flat += 1;
    });
    JointPmf::new(kept_vars, out)
}

fn check_disjoint(groups: &[&[&str]]) -> Result<()> {
    for (i, g) in groups.iter().enumerate() {
        for name in g.iter() {
            for h in &groups[..i] {
                if h.contains(name) {
                    return Err(Error::OverlappingVariables {
                        name: (*name).to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Conditional mutual information `I(A;B|C)` in bits, computed exactly as
/// `H(A,C) + H(B,C) − H(A,B,C) − H(C)`. Conditioning tuples of probability
/// zero contribute nothing. `C` may be empty, giving plain mutual
/// information.
pub fn cond_mutual_information(
    joint: &JointPmf,
    a: &[&str],
    b: &[&str],
    c: &[&str],
) -> Result<f64> {
    check_disjoint(&[a, b, c])?;
    let mut ac: Vec<&str> = a.to_vec();
    ac.extend_from_slice(c);
    let mut bc: Vec<&str> = b.to_vec();
    bc.extend_from_slice(c);
    let mut abc: Vec<&str> = a.to_vec();
    abc.extend_from_slice(b);
    abc.extend_from_slice(c);
    let h_ac = entropy(&marginalize(joint, &ac)?);
    let h_bc = entropy(&marginalize(joint, &bc)?);
    let h_abc = entropy(&marginalize(joint, &abc)?);
    let h_c = entropy(&marginalize(joint, c)?);
    Ok(h_ac + h_bc - h_abc - h_c)
}

/// Multiply a chain of factors `p(t₁) · p(t₂|g₂) · …` into one dense joint.
///
/// Factors are consumed left to right. Every conditioning variable must have
/// been introduced by an earlier factor (with an identical alphabet), and no
/// target variable may be introduced twice. The result orders variables by
/// first appearance.
pub fn compose_chain(factors: &[&ConditionalPmf]) -> Result<JointPmf> {
    let mut vars: Vec<Alphabet> = Vec::new();
    // Per factor: positions (into the result tuple) of its given and target vars.
    let mut gather: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for f in factors {
        let mut g_pos = Vec::with_capacity(f.given().len());
        for g in f.given() {
            match vars.iter().position(|v| v.name() == g.name()) {
                Some(p) => {
                    if vars[p] != *g {
                        return Err(Error::AlphabetMismatch {
                            name: g.name().to_string(),
                        });
                    }
                    g_pos.push(p);
                }
                None => {
                    return Err(Error::UnknownVariable {
                        name: g.name().to_string(),
                    })
                }
            }
        }
        let mut t_pos = Vec::with_capacity(f.target().len());
        for t in f.target() {
            if vars.iter().any(|v| v.name() == t.name()) {
                return Err(Error::DuplicateVariable {
                    name: t.name().to_string(),
                });
            }
            vars.push(t.clone());
            t_pos.push(vars.len() - 1);
        }
        gather.push((g_pos, t_pos));
    }
    let dims: Vec<usize> = vars.iter().map(Alphabet::len).collect();
    let size: usize = dims.iter().product();
    let mut probs = Vec::with_capacity(size);
    let mut g_buf: Vec<usize> = Vec::new();
    let mut t_buf: Vec<usize> = Vec::new();
    for_each_index(&dims, |idx| {
        let mut p = 1.0f64;
        for (f, (g_pos, t_pos)) in factors.iter().zip(&gather) {
            g_buf.clear();
            g_buf.extend(g_pos.iter().map(|&q| idx[q]));
            t_buf.clear();
            t_buf.extend(t_pos.iter().map(|&q| idx[q]));
            p *= f.prob(&g_buf, &t_buf);
            if p == 0.0 {
                break;
            }
        }
        probs.push(p);
    });
    JointPmf::new(vars, probs)
}

/// Extract `p(target | given)` from a joint. Rows whose conditioning event
/// has probability zero are filled uniformly; such rows are unreachable when
/// the conditional is used together with the same joint.
pub fn condition(joint: &JointPmf, given: &[&str], target: &[&str]) -> Result<ConditionalPmf> {
    check_disjoint(&[given, target])?;
    let mut all: Vec<&str> = given.to_vec();
    all.extend_from_slice(target);
    let reduced = marginalize(joint, &all)?;
    let g_vars: Vec<Alphabet> = reduced.vars[..given.len()].to_vec();
    let t_vars: Vec<Alphabet> = reduced.vars[given.len()..].to_vec();
    let g_size: usize = g_vars.iter().map(Alphabet::len).product();
    let t_size: usize = t_vars.iter().map(Alphabet::len).product();
    // The reduced tensor is already laid out given-major because we ordered
    // `all` that way.
    let mut probs = vec![0.0f64; g_size * t_size];
    for g in 0..g_size {
        let row = &reduced.probs[g * t_size..(g + 1) * t_size];
        let mass: f64 = row.iter().sum();
        let out = &mut probs[g * t_size..(g + 1) * t_size];
        if mass > 0.0 {
            for (o, &p) in out.iter_mut().zip(row) {
                *o = p / mass;
            }
        } else {
            for o in out.iter_mut() {
                *o = 1.0 / t_size as f64;
            }
        }
    }
    ConditionalPmf::new(g_vars, t_vars, probs)
}
