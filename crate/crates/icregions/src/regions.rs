//! Achievable-rate regions and outer bounds for the two-user interference
//! channel, with and without entanglement between the transmitters.
//!
//! Every builder takes a fully composed joint distribution, evaluates a fixed
//! family of conditional mutual informations, and returns the resulting 2-D
//! polygon together with the named information terms that produced it. The
//! returned regions are closed (capacity regions are closures, so strict
//! inequalities are evaluated as `≤`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{cond_mutual_information, JointPmf};

/// Values this far below zero fail validation; smaller dips are rounding.
pub const TERM_TOLERANCE: f64 = 1e-9;

/// Membership slack: a point satisfies a constraint if it violates it by no
/// more than this.
pub const CONTAINMENT_TOLERANCE: f64 = 1e-9;

/// Classical sum-rate cap for the magic-square multiple-access configuration,
/// as reported in the literature for the best classical strategy. Stored as
/// an externally sourced reference line for reports; not recomputed here.
pub const CLASSICAL_MS_SUM_RATE_REFERENCE: f64 = 3.02;

/// Time-sharing cardinality that suffices for the inner-bound regions.
pub const INNER_TIME_SHARING_LIMIT: usize = 7;
/// Time-sharing cardinality that suffices for the outer-bound regions.
pub const OUTER_TIME_SHARING_LIMIT: usize = 3;

/// One half-plane `a·R₁ + b·R₂ ≤ c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub r1_coeff: i64,
    pub r2_coeff: i64,
    pub bound: f64,
}

const ALLOWED_PATTERNS: [(i64, i64); 5] = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)];

/// A rate region in the nonnegative quadrant cut by half-planes whose rate
/// coefficients follow the standard superposition-coding patterns. `R₁ ≥ 0`
/// and `R₂ ≥ 0` are implicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRegion2D {
    constraints: Vec<Constraint>,
}

impl RateRegion2D {
    pub fn new(constraints: Vec<Constraint>) -> Result<Self> {
        for c in &constraints {
            if !ALLOWED_PATTERNS.contains(&(c.r1_coeff, c.r2_coeff)) {
                return Err(Error::PatternNotAllowed {
                    a: c.r1_coeff,
                    b: c.r2_coeff,
                });
            }
            if !c.bound.is_finite() {
                return Err(Error::InvalidConfig {
                    reason: format!(
                        "constraint bound must be finite, got {} for ({}, {})",
                        c.bound, c.r1_coeff, c.r2_coeff
                    ),
                });
            }
        }
        Ok(Self { constraints })
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }
}

/// Named conditional-mutual-information values, in bits.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InfoTermSet {
    terms: BTreeMap<String, f64>,
}

impl InfoTermSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record a value; dips below `-1e-9` are rejected, smaller ones kept
    /// as computed.
    pub fn insert(&mut self, name: impl Into<String>, value: f64) -> Result<()> {
        let name = name.into();
        if value < -TERM_TOLERANCE || value.is_nan() {
            return Err(Error::NegativeTermValue { name, value });
        }
        self.terms.insert(name, value);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<f64> {
        self.terms
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownTerm {
                name: name.to_string(),
            })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.terms.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map(&self) -> &BTreeMap<String, f64> {
        &self.terms
    }
}

/// Canonical display name `I(A;B|C)` with comma-joined groups and no spaces.
fn term_name(a: &[&str], b: &[&str], c: &[&str]) -> String {
    let join = |v: &[&str]| v.join(",");
    if c.is_empty() {
        format!("I({};{})", join(a), join(b))
    } else {
        format!("I({};{}|{})", join(a), join(b), join(c))
    }
}

/// Evaluate one conditional mutual information and record it by name.
fn term(
    joint: &JointPmf,
    terms: &mut InfoTermSet,
    a: &[&str],
    b: &[&str],
    c: &[&str],
) -> Result<f64> {
    let value = cond_mutual_information(joint, a, b, c)?;
    terms.insert(term_name(a, b, c), value)?;
    Ok(value)
}

fn constraint(a: i64, b: i64, bound: f64) -> Constraint {
    Constraint {
        r1_coeff: a,
        r2_coeff: b,
        bound,
    }
}

/// Inner bound achievable with entangled transmitters: rate-splitting with a
/// common part decoded by both receivers, evaluated on a joint over
/// `(V₀, V₁, U₁, V₂, U₂, Y₁, Y₂)`.
pub fn et_hk_region(joint: &JointPmf) -> Result<(RateRegion2D, InfoTermSet)> {
    let mut t = InfoTermSet::new();
    let t1 = term(joint, &mut t, &["V1", "U1"], &["Y1"], &["V0", "U2"])?;
    let t2 = term(joint, &mut t, &["V2", "U2"], &["Y2"], &["V0", "U1"])?;
    let a = term(joint, &mut t, &["V1"], &["Y1"], &["V0", "U1", "U2"])?;
    let d2 = term(joint, &mut t, &["U1", "V2", "U2"], &["Y2"], &["V0"])?;
    let c1 = term(joint, &mut t, &["V1", "U2"], &["Y1"], &["V0", "U1"])?;
    let g2 = term(joint, &mut t, &["U1", "V2"], &["Y2"], &["V0", "U2"])?;
    let d1 = term(joint, &mut t, &["V1", "U1", "U2"], &["Y1"], &["V0"])?;
    let e = term(joint, &mut t, &["V2"], &["Y2"], &["V0", "U1", "U2"])?;
    let region = RateRegion2D::new(vec![
        constraint(1, 0, t1),
        constraint(0, 1, t2),
        constraint(1, 1, a + d2),
        constraint(1, 1, c1 + g2),
        constraint(1, 1, d1 + e),
        constraint(2, 1, d1 + a + g2),
        constraint(1, 2, c1 + d2 + e),
    ])?;
    Ok((region, t))
}

/// Classical rate-splitting inner bound, evaluated on a joint over
/// `(V₀, U₁, U₂, X₁, X₂, Y₁, Y₂)` where the channel inputs play the private
/// role directly.
pub fn hk_classical_region(joint: &JointPmf) -> Result<(RateRegion2D, InfoTermSet)> {
    let mut t = InfoTermSet::new();
    let t1 = term(joint, &mut t, &["X1"], &["Y1"], &["V0", "U2"])?;
    let t2 = term(joint, &mut t, &["X2"], &["Y2"], &["V0", "U1"])?;
    let a = term(joint, &mut t, &["X1"], &["Y1"], &["V0", "U1", "U2"])?;
    let d2 = term(joint, &mut t, &["U1", "X2"], &["Y2"], &["V0"])?;
    let c1 = term(joint, &mut t, &["X1", "U2"], &["Y1"], &["V0", "U1"])?;
    let g2 = term(joint, &mut t, &["U1", "X2"], &["Y2"], &["V0", "U2"])?;
    let d1 = term(joint, &mut t, &["X1", "U2"], &["Y1"], &["V0"])?;
    let e = term(joint, &mut t, &["X2"], &["Y2"], &["V0", "U1", "U2"])?;
    let region = RateRegion2D::new(vec![
        constraint(1, 0, t1),
        constraint(0, 1, t2),
        constraint(1, 1, a + d2),
        constraint(1, 1, c1 + g2),
        constraint(1, 1, d1 + e),
        constraint(2, 1, d1 + a + g2),
        constraint(1, 2, c1 + d2 + e),
    ])?;
    Ok((region, t))
}

/// Outer bound for entangled transmitters, over `(V₀, V₁, V₂, Y₁, Y₂)`; the
/// question variables need not be conditionally independent here.
pub fn et_outer_region(joint: &JointPmf) -> Result<(RateRegion2D, InfoTermSet)> {
    let mut t = InfoTermSet::new();
    let o1 = term(joint, &mut t, &["V1"], &["Y1"], &["V0", "V2"])?;
    let o2 = term(joint, &mut t, &["V2"], &["Y2"], &["V0", "V1"])?;
    let o3 = term(joint, &mut t, &["V1", "V2"], &["Y1", "Y2"], &["V0"])?;
    let region = RateRegion2D::new(vec![
        constraint(1, 0, o1),
        constraint(0, 1, o2),
        constraint(1, 1, o3),
    ])?;
    Ok((region, t))
}

/// Classical outer bound over `(V₀, X₁, X₂, Y₁, Y₂)`.
pub fn classical_outer_region(joint: &JointPmf) -> Result<(RateRegion2D, InfoTermSet)> {
    let mut t = InfoTermSet::new();
    let o1 = term(joint, &mut t, &["X1"], &["Y1"], &["V0", "X2"])?;
    let o2 = term(joint, &mut t, &["X2"], &["Y2"], &["V0", "X1"])?;
    let o3 = term(joint, &mut t, &["X1", "X2"], &["Y1", "Y2"], &["V0"])?;
    let region = RateRegion2D::new(vec![
        constraint(1, 0, o1),
        constraint(0, 1, o2),
        constraint(1, 1, o3),
    ])?;
    Ok((region, t))
}

/// Multiple-access view: both outputs are handed to one receiver, so every
/// mutual information is taken against the merged output `(Y₁, Y₂)`.
pub fn mac_region(joint: &JointPmf) -> Result<(RateRegion2D, InfoTermSet)> {
    let mut t = InfoTermSet::new();
    let m1 = term(joint, &mut t, &["X1"], &["Y1", "Y2"], &["V0", "X2"])?;
    let m2 = term(joint, &mut t, &["X2"], &["Y1", "Y2"], &["V0", "X1"])?;
    let m3 = term(joint, &mut t, &["X1", "X2"], &["Y1", "Y2"], &["V0"])?;
    let region = RateRegion2D::new(vec![
        constraint(1, 0, m1),
        constraint(0, 1, m2),
        constraint(1, 1, m3),
    ])?;
    Ok((region, t))
}

/// The eight split-rate information terms of the rate-splitting analysis:
/// receiver 1 decodes `(M₀, M₁′, M₁″, M₂′)` and receiver 2 its mirror image.
/// Keys are the canonical `I(·;·|·)` names.
pub fn split_rate_terms(joint: &JointPmf) -> Result<InfoTermSet> {
    let mut t = InfoTermSet::new();
    term(joint, &mut t, &["V1"], &["Y1"], &["V0", "U1", "U2"])?;
    term(joint, &mut t, &["U1", "V1"], &["Y1"], &["V0", "U2"])?;
    term(joint, &mut t, &["V1", "U2"], &["Y1"], &["V0", "U1"])?;
    term(joint, &mut t, &["U1", "V1", "U2"], &["Y1"], &["V0"])?;
    term(joint, &mut t, &["V2"], &["Y2"], &["V0", "U1", "U2"])?;
    term(joint, &mut t, &["U2", "V2"], &["Y2"], &["V0", "U1"])?;
    term(joint, &mut t, &["V2", "U1"], &["Y2"], &["V0", "U2"])?;
    term(joint, &mut t, &["U2", "V2", "U1"], &["Y2"], &["V0"])?;
    Ok(t)
}

/// Advisory note when a time-sharing alphabet exceeds the cardinality that
/// provably suffices (larger supports are unnecessary, not invalid).
pub fn time_sharing_warning(v0_size: usize, outer: bool) -> Option<String> {
    let limit = if outer {
        OUTER_TIME_SHARING_LIMIT
    } else {
        INNER_TIME_SHARING_LIMIT
    };
    (v0_size > limit).then(|| {
        format!(
            "time-sharing alphabet size {v0_size} exceeds {limit}, which already suffices for this bound"
        )
    })
}

/// True iff the point satisfies every constraint and nonnegativity with
/// slack at worst `-1e-9`.
pub fn region_contains(region: &RateRegion2D, r1: f64, r2: f64) -> bool {
    if r1 < -CONTAINMENT_TOLERANCE || r2 < -CONTAINMENT_TOLERANCE {
        return false;
    }
    region.constraints().iter().all(|c| {
        c.bound - (c.r1_coeff as f64 * r1 + c.r2_coeff as f64 * r2) >= -CONTAINMENT_TOLERANCE
    })
}

fn dedupe_points(points: &mut Vec<(f64, f64)>) {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for &p in points.iter() {
        if !out
            .iter()
            .any(|q| (q.0 - p.0).abs() <= 1e-9 && (q.1 - p.1).abs() <= 1e-9)
        {
            out.push(p);
        }
    }
    *points = out;
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Counterclockwise convex hull (monotone chain), starting from the
/// lexicographically smallest point. Collinear intermediate points are
/// dropped.
fn convex_hull(mut points: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    dedupe_points(&mut points);
    points.sort_by(|p, q| p.partial_cmp(q).expect("finite coordinates"));
    if points.len() <= 2 {
        return points;
    }
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &points {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 1e-12
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in points.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 1e-12
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Vertices of the region polygon in counterclockwise order, starting from
/// the lexicographically smallest vertex. Errors if some direction in the
/// quadrant is uncapped.
pub fn region_vertices(region: &RateRegion2D) -> Result<Vec<(f64, f64)>> {
    let caps_r1 = region.constraints().iter().any(|c| c.r1_coeff > 0);
    let caps_r2 = region.constraints().iter().any(|c| c.r2_coeff > 0);
    if !caps_r1 || !caps_r2 {
        let missing = if !caps_r1 { "R1" } else { "R2" };
        return Err(Error::UnboundedRegion {
            detail: format!("no constraint caps {missing}"),
        });
    }
    // Candidate vertices: pairwise intersections of all boundary lines,
    // including the two axes.
    let mut lines: Vec<(f64, f64, f64)> = region
        .constraints()
        .iter()
        .map(|c| (c.r1_coeff as f64, c.r2_coeff as f64, c.bound))
        .collect();
    lines.push((1.0, 0.0, 0.0));
    lines.push((0.0, 1.0, 0.0));
    let mut candidates = Vec::new();
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            let (a1, b1, c1) = lines[i];
            let (a2, b2, c2) = lines[j];
            let det = a1 * b2 - a2 * b1;
            if det.abs() < 1e-12 {
                continue;
            }
            let x = (c1 * b2 - c2 * b1) / det;
            let y = (a1 * c2 - a2 * c1) / det;
            if region_contains(region, x, y) {
                candidates.push((x.max(0.0), y.max(0.0)));
            }
        }
    }
    Ok(convex_hull(candidates))
}

/// Convex hull of the union of several bounded regions — the time-sharing
/// closure of alternatives.
pub fn union_hull(regions: &[RateRegion2D]) -> Result<Vec<(f64, f64)>> {
    if regions.is_empty() {
        return Err(Error::InvalidConfig {
            reason: "union of zero regions".into(),
        });
    }
    let mut points = Vec::new();
    for region in regions {
        points.extend(region_vertices(region)?);
    }
    Ok(convex_hull(points))
}
