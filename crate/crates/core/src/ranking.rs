//! Rules on full rankings of committees, with one position-weight vector per
//! orbit of rankings.
//!
//! A ballot ranking `r` in orbit `O` gives `w_O[i]` points to the committee in
//! position `i`. Nothing ties the vectors of different orbits together.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::ballot::{argmax_winners, BallotTally};
use crate::combinatorics::{
    canonical_representative, enumerate_orbits, orbit_count, orbit_members, resolve_orbit_key, Caps, OrbitInfo,
    Ranking, Shape,
};
use crate::decomposition::{decompose_result, project_onto_component, DecompositionReport};
use crate::error::{Error, Result};
use crate::linalg::{rational_string, RatMatrix, RatVector, Rational};

/// Position weights per orbit, keyed by canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitWeights {
    pub m: usize,
    pub n: usize,
    pub default: RatVector,
    pub weights: BTreeMap<Ranking, RatVector>,
}

#[derive(Serialize, Deserialize)]
struct OrbitWeightsJson {
    #[serde(default)]
    default: Option<RatVector>,
    #[serde(default)]
    orbits: BTreeMap<String, RatVector>,
}

fn check_len(shape: Shape, w: &RatVector, caps: &Caps) -> Result<usize> {
    let dim = shape.dim(caps)?;
    if w.dim() != dim {
        return Err(Error::WrongSize { expected: dim, got: w.dim() });
    }
    Ok(dim)
}

fn key_of(r: &Ranking) -> String {
    r.order().iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl OrbitWeights {
    /// The same vector for every orbit.
    pub fn uniform(shape: Shape, w: RatVector, caps: &Caps) -> Result<Self> {
        check_len(shape, &w, caps)?;
        Ok(OrbitWeights { m: shape.m, n: shape.n, default: w, weights: BTreeMap::new() })
    }

    pub fn shape(&self) -> Shape {
        Shape { m: self.m, n: self.n }
    }

    /// Sets the weights of the orbit named by `key` (see [`resolve_orbit_key`]).
    pub fn set(&mut self, key: &str, w: RatVector, caps: &Caps) -> Result<()> {
        let shape = self.shape();
        check_len(shape, &w, caps)?;
        let rep = resolve_orbit_key(shape, key, caps)?;
        self.weights.insert(rep, w);
        Ok(())
    }

    pub fn with(mut self, key: &str, w: RatVector, caps: &Caps) -> Result<Self> {
        self.set(key, w, caps)?;
        Ok(self)
    }

    /// Weights used by the orbit whose canonical representative is `rep`.
    pub fn for_representative(&self, rep: &Ranking) -> &RatVector {
        self.weights.get(rep).unwrap_or(&self.default)
    }

    /// Weights used for the ballot `r`.
    pub fn for_ranking(&self, r: &Ranking, caps: &Caps) -> Result<&RatVector> {
        if self.weights.is_empty() {
            return Ok(&self.default);
        }
        let rep = canonical_representative(self.shape(), r, caps)?;
        Ok(self.for_representative(&rep))
    }

    /// Reads `{"default": [...], "orbits": {"<key>": [...]}}`. A missing
    /// default means zero weights.
    pub fn from_json(shape: Shape, text: &str, caps: &Caps) -> Result<Self> {
        let raw: OrbitWeightsJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let dim = shape.dim(caps)?;
        let default = raw.default.unwrap_or_else(|| RatVector::zeros(dim));
        let mut out = OrbitWeights::uniform(shape, default, caps)?;
        for (key, w) in raw.orbits {
            out.set(&key, w, caps)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let raw = OrbitWeightsJson {
            default: Some(self.default.clone()),
            orbits: self.weights.iter().map(|(r, w)| (key_of(r), w.clone())).collect(),
        };
        serde_json::to_string(&raw).expect("weights serialize")
    }
}

/// Signed multiplicities of rankings. Negative counts make profile
/// differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankingProfile {
    pub m: usize,
    pub n: usize,
    pub votes: BTreeMap<Ranking, Rational>,
}

#[derive(Serialize, Deserialize)]
struct Vote {
    ranking: Ranking,
    #[serde(with = "rational_string")]
    count: Rational,
}

impl RankingProfile {
    pub fn new(shape: Shape) -> Self {
        RankingProfile { m: shape.m, n: shape.n, votes: BTreeMap::new() }
    }

    pub fn shape(&self) -> Shape {
        Shape { m: self.m, n: self.n }
    }

    /// Adds `count` ballots of `r`; entries that cancel to zero are dropped.
    pub fn add(&mut self, r: Ranking, count: Rational) -> Result<()> {
        let dim = self.shape().committee_count();
        if BigUint::from(r.len()) != dim {
            return Err(Error::Invalid(format!("ranking of length {} for {dim} committees", r.len())));
        }
        let entry = self.votes.entry(r).or_insert_with(Rational::zero);
        *entry += count;
        if entry.is_zero() {
            self.votes.retain(|_, c| !c.is_zero());
        }
        Ok(())
    }

    pub fn from_votes(shape: Shape, votes: impl IntoIterator<Item = (Ranking, Rational)>) -> Result<Self> {
        let mut p = RankingProfile::new(shape);
        for (r, c) in votes {
            p.add(r, c)?;
        }
        Ok(p)
    }

    /// Reads a list of `{"ranking": [...], "count": "p/q"}`.
    pub fn from_json(shape: Shape, text: &str) -> Result<Self> {
        let raw: Vec<Vote> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut p = RankingProfile::new(shape);
        for v in raw {
            let r = Ranking::new(shape, v.ranking.order().to_vec())?;
            p.add(r, v.count)?;
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        let raw: Vec<Vote> = self.votes.iter().map(|(r, c)| Vote { ranking: r.clone(), count: c.clone() }).collect();
        serde_json::to_string(&raw).expect("profile serializes")
    }

    pub fn is_empty(&self) -> bool {
        self.votes.is_empty()
    }
}

impl Serialize for RankingProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw: Vec<Vote> = self.votes.iter().map(|(r, c)| Vote { ranking: r.clone(), count: c.clone() }).collect();
        raw.serialize(s)
    }
}

/// Points each committee receives from the ballot `r` with position weights `w`.
fn row_with(r: &Ranking, w: &RatVector) -> RatVector {
    let mut row = RatVector::zeros(w.dim());
    for (pos, &c) in r.order().iter().enumerate() {
        row[c] = w[pos].clone();
    }
    row
}

/// Points each committee receives from one ballot `r`.
pub fn ranking_scoring_row(ow: &OrbitWeights, r: &Ranking, caps: &Caps) -> Result<RatVector> {
    let shape = ow.shape();
    let dim = shape.dim(caps)?;
    if r.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
    }
    Ok(row_with(r, ow.for_ranking(r, caps)?))
}

pub fn tally_rankings(ow: &OrbitWeights, p: &RankingProfile, caps: &Caps) -> Result<BallotTally> {
    let shape = ow.shape();
    if p.shape() != shape {
        return Err(Error::Invalid(format!("profile is for {}, weights for {shape}", p.shape())));
    }
    let dim = shape.dim(caps)?;
    let mut scores = RatVector::zeros(dim);
    for (r, count) in &p.votes {
        scores.add_scaled(count, &ranking_scoring_row(ow, r, caps)?);
    }
    let winners = argmax_winners(shape, &scores);
    Ok(BallotTally { scores, winners })
}

/// The rule restricted to one orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSpace {
    pub orbit: OrbitInfo,
    pub weights: RatVector,
    pub weights_sum_zero: bool,
    /// Coefficient of the all-ones vector in `weights`.
    #[serde(with = "rational_string")]
    pub trivial_coefficient: Rational,
    pub rank: usize,
    pub kernel_dim: usize,
    /// Row space of the block, in the coordinates of [`orbit_members`] order.
    pub row_space_basis: Vec<RatVector>,
    /// Image of the block inside the committee space.
    pub image_in_r: Vec<RatVector>,
    /// Dimension of the image inside each component `k = 0..=n`.
    pub component_dims_of_image: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EffectiveSpaceReport {
    pub m: usize,
    pub n: usize,
    pub per_orbit: Vec<OrbitSpace>,
    /// Rank of the whole scoring matrix, i.e. the dimension of the total image.
    pub total_image_rank: usize,
    pub image_component_dims: Vec<usize>,
}

impl EffectiveSpaceReport {
    pub fn orbit_by_alias(&self, alias: u32) -> Option<&OrbitSpace> {
        self.per_orbit.iter().find(|o| o.orbit.alias == Some(alias))
    }
}

fn component_dims(shape: Shape, vectors: &[RatVector], caps: &Caps) -> Result<Vec<usize>> {
    (0..=shape.n)
        .map(|k| {
            let projected =
                vectors.iter().map(|v| project_onto_component(shape, k, v, caps)).collect::<Result<Vec<_>>>()?;
            Ok(if projected.is_empty() { 0 } else { RatMatrix::from_rows(&projected).rank() })
        })
        .collect()
}

/// The `m^n × |orbit|` block of the scoring matrix, columns in member order.
pub fn orbit_block(ow: &OrbitWeights, rep: &Ranking, caps: &Caps) -> Result<RatMatrix> {
    let shape = ow.shape();
    let dim = shape.dim(caps)?;
    let w = ow.for_representative(rep);
    let columns: Vec<RatVector> = orbit_members(shape, rep, caps)?.iter().map(|r| row_with(r, w)).collect();
    Ok(RatMatrix::from_columns(dim, &columns))
}

pub fn orbit_effective_space(ow: &OrbitWeights, orbit: &OrbitInfo, caps: &Caps) -> Result<OrbitSpace> {
    let shape = ow.shape();
    let block = orbit_block(ow, &orbit.representative, caps)?;
    let weights = ow.for_representative(&orbit.representative).clone();
    let row_space_basis = block.row_space_basis();
    let rank = row_space_basis.len();
    let image_in_r = block.column_space_basis();
    let component_dims_of_image = component_dims(shape, &image_in_r, caps)?;
    let sum = weights.sum();
    Ok(OrbitSpace {
        orbit: orbit.clone(),
        weights_sum_zero: sum.is_zero(),
        trivial_coefficient: sum / Rational::from_integer(weights.dim().into()),
        weights,
        rank,
        kernel_dim: block.cols() - rank,
        row_space_basis,
        image_in_r,
        component_dims_of_image,
    })
}

/// Rank, kernel and image of the rule on every orbit, plus the rank of the
/// whole scoring matrix.
pub fn effective_space(ow: &OrbitWeights, caps: &Caps) -> Result<EffectiveSpaceReport> {
    let shape = ow.shape();
    let per_orbit = enumerate_orbits(shape, caps)?
        .iter()
        .map(|o| orbit_effective_space(ow, o, caps))
        .collect::<Result<Vec<_>>>()?;
    let all_images: Vec<RatVector> = per_orbit.iter().flat_map(|o| o.image_in_r.iter().cloned()).collect();
    let total_image_rank = if all_images.is_empty() { 0 } else { RatMatrix::from_rows(&all_images).rank() };
    let image_component_dims = component_dims(shape, &all_images, caps)?;
    Ok(EffectiveSpaceReport { m: shape.m, n: shape.n, per_orbit, total_image_rank, image_component_dims })
}

/// `w = x1 [1,1,1,1] + x2 [1,-1,-1,1] + x3 [1,0,0,-1] + x4 [0,1,-1,0]`
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourWeightCoordinates {
    #[serde(with = "rational_string")]
    pub x1: Rational,
    #[serde(with = "rational_string")]
    pub x2: Rational,
    #[serde(with = "rational_string")]
    pub x3: Rational,
    #[serde(with = "rational_string")]
    pub x4: Rational,
}

impl FourWeightCoordinates {
    pub fn of(w: &RatVector) -> Result<Self> {
        if w.dim() != 4 {
            return Err(Error::WrongSize { expected: 4, got: w.dim() });
        }
        let (a, b, c, d) = (&w[0], &w[1], &w[2], &w[3]);
        let two = Rational::from_integer(2.into());
        let four = Rational::from_integer(4.into());
        Ok(FourWeightCoordinates {
            x1: (a + b + c + d) / &four,
            x2: (a - b - c + d) / &four,
            x3: (a - d) / &two,
            x4: (b - c) / &two,
        })
    }
}

/// What the case analysis predicts for one of the three `m = n = 2` orbits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoByTwoOrbit {
    pub alias: u32,
    pub weights: RatVector,
    pub coordinates: FourWeightCoordinates,
    /// Predicted image dimension in components `k = 0, 1, 2`.
    pub image_component_dims: [usize; 3],
    /// Components entirely in the kernel.
    pub killed: Vec<usize>,
    pub rank: usize,
    pub kernel_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoByTwoReport {
    pub orbits: [TwoByTwoOrbit; 3],
}

/// Case analysis of the `m = n = 2` rule with weights `w1, w2, w3` on the
/// orbits labelled 1, 2, 3, without building any matrix.
///
/// The trivial component survives iff `x1 != 0`. In orbit 1, `x2` alone
/// decides the sign-like component `k = 2` and `(x3, x4)` decide `k = 1`. In
/// orbits 2 and 3, `k = 1` survives when `x2 != 0` or `x3 != ∓x4`, and
/// `k = 2` survives when `x3 != ±x4`, with the signs swapped between the two.
pub fn analyze_2wr2(w1: &RatVector, w2: &RatVector, w3: &RatVector) -> Result<TwoByTwoReport> {
    let orbit = |alias: u32, w: &RatVector| -> Result<TwoByTwoOrbit> {
        let x = FourWeightCoordinates::of(w)?;
        let trivial = usize::from(!x.x1.is_zero());
        let (borda, sign) = match alias {
            1 => (!(x.x3.is_zero() && x.x4.is_zero()), !x.x2.is_zero()),
            2 => (!x.x2.is_zero() || x.x3 != -&x.x4, x.x3 != x.x4),
            _ => (!x.x2.is_zero() || x.x3 != x.x4, x.x3 != -&x.x4),
        };
        let dims = [trivial, 2 * usize::from(borda), usize::from(sign)];
        let killed = (0..3).filter(|&k| dims[k] == 0).collect();
        let rank = dims.iter().sum();
        Ok(TwoByTwoOrbit {
            alias,
            weights: w.clone(),
            coordinates: x,
            image_component_dims: dims,
            killed,
            rank,
            kernel_dim: 8 - rank,
        })
    };
    Ok(TwoByTwoReport { orbits: [orbit(1, w1)?, orbit(2, w2)?, orbit(3, w3)?] })
}

/// Orbit weights for `m = n = 2` from three per-orbit vectors, in alias order.
pub fn two_by_two_weights(w1: RatVector, w2: RatVector, w3: RatVector, caps: &Caps) -> Result<OrbitWeights> {
    let shape = Shape { m: 2, n: 2 };
    OrbitWeights::uniform(shape, w1.clone(), caps)?
        .with("orbit-1", w1, caps)?
        .with("orbit-2", w2, caps)?
        .with("orbit-3", w3, caps)
}

/// `(a,b,c,d) -> ((a,b,c,d), (a,c,d,b), (a,d,c,b))`: undoes the relabelling
/// that carries orbit 1 to orbits 2 and 3, so all three orbits act alike.
pub fn permute_weights_identical(w: &RatVector) -> Result<(RatVector, RatVector, RatVector)> {
    if w.dim() != 4 {
        return Err(Error::WrongSize { expected: 4, got: w.dim() });
    }
    let pick = |idx: [usize; 4]| RatVector::new(idx.iter().map(|&i| w[i].clone()).collect());
    Ok((w.clone(), pick([0, 2, 3, 1]), pick([0, 3, 2, 1])))
}

/// Free parameters of a general rule: one weight per position per orbit,
/// `orbit_count(m, n) * m^n`.
pub fn parameter_count(m: usize, n: usize) -> BigUint {
    let committees = num_traits::pow(BigUint::from(m), n);
    orbit_count(m, n) * committees
}

/// A position-weight vector, read as a vector of the committee space.
pub fn decompose_position_weights(m: usize, n: usize, w: &RatVector, caps: &Caps) -> Result<DecompositionReport> {
    decompose_result(Shape::new(m, n)?, w, caps)
}
