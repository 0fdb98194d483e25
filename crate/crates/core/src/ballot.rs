//! Points-based rules on committee ballots.
//!
//! A neutral rule is fixed by `n + 1` numbers `a[d]`: a ballot for `C` gives
//! `a[d]` points to every committee that disagrees with `C` in `d`
//! departments. Such a rule acts on component `k` of the committee space as
//! multiplication by a single scalar `lambda[k]`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{disagreement_by_index, Caps, Committee, Shape};
use crate::decomposition::{component_vector, decompose_result, DecompositionReport};
use crate::error::{Error, Result};
use crate::linalg::{parse_rational, rational_vec_string, RatMatrix, RatVector, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceWeights {
    pub m: usize,
    pub n: usize,
    /// `a[d]` for `d = 0..=n`.
    #[serde(with = "rational_vec_string")]
    pub a: Vec<Rational>,
}

impl DistanceWeights {
    pub fn new(shape: Shape, a: Vec<Rational>) -> Result<Self> {
        if a.len() != shape.n + 1 {
            return Err(Error::WrongSize { expected: shape.n + 1, got: a.len() });
        }
        Ok(DistanceWeights { m: shape.m, n: shape.n, a })
    }

    pub fn from_ints(shape: Shape, a: &[i64]) -> Result<Self> {
        Self::new(shape, a.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    /// Parses `"a0,a1,...,an"`; `;` also separates.
    pub fn parse(shape: Shape, text: &str) -> Result<Self> {
        let trimmed = text.trim().trim_start_matches('[').trim_end_matches(']');
        let a = trimmed.split([',', ';']).map(parse_rational).collect::<Result<Vec<_>>>()?;
        Self::new(shape, a)
    }

    pub fn shape(&self) -> Shape {
        Shape { m: self.m, n: self.n }
    }

    /// `[a0;a1;...;an]`
    pub fn display(&self) -> String {
        let parts: Vec<String> = self.a.iter().map(crate::linalg::format_rational).collect();
        format!("[{}]", parts.join(";"))
    }
}

/// The example rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedWeights {
    /// `a[d] = n - d`
    BordaLike,
    /// One point to every committee sharing at least one member with the ballot.
    ApprovalNondisjoint,
    /// `[1;0;...;0;1]`, for `m = 2` only.
    ComplementPair,
    /// `a[d] = 1` for even `d`, for `m = 2` only.
    ParityEven,
    /// `a[d] = (-1)^d`
    Alternating,
    /// `[1;0;...;0;1]` for any `m`.
    FirstLast,
}

impl NamedWeights {
    pub const ALL: [NamedWeights; 6] = [
        NamedWeights::BordaLike,
        NamedWeights::ApprovalNondisjoint,
        NamedWeights::ComplementPair,
        NamedWeights::ParityEven,
        NamedWeights::Alternating,
        NamedWeights::FirstLast,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedWeights::BordaLike => "borda_like",
            NamedWeights::ApprovalNondisjoint => "approval_nondisjoint",
            NamedWeights::ComplementPair => "complement_pair",
            NamedWeights::ParityEven => "parity_even",
            NamedWeights::Alternating => "alternating",
            NamedWeights::FirstLast => "first_last",
        }
    }
}

impl fmt::Display for NamedWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedWeights {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_lowercase().replace('-', "_");
        NamedWeights::ALL
            .into_iter()
            .find(|w| w.name() == wanted)
            .ok_or_else(|| Error::Parse(format!("unknown weight name `{s}`")))
    }
}

pub fn named_weights(name: NamedWeights, m: usize, n: usize) -> Result<DistanceWeights> {
    let shape = Shape::new(m, n)?;
    if matches!(name, NamedWeights::ComplementPair | NamedWeights::ParityEven) && m != 2 {
        return Err(Error::UnsupportedM { name: name.name(), m });
    }
    let a: Vec<i64> = (0..=n)
        .map(|d| match name {
            NamedWeights::BordaLike => (n - d) as i64,
            NamedWeights::ApprovalNondisjoint => i64::from(d < n),
            NamedWeights::ComplementPair | NamedWeights::FirstLast => i64::from(d == 0 || d == n),
            NamedWeights::ParityEven => i64::from(d % 2 == 0),
            NamedWeights::Alternating => {
                if d % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
        })
        .collect();
    DistanceWeights::from_ints(shape, &a)
}

/// Entry `[c, c']` is the number of points a ballot for `c'` gives `c`.
pub fn scoring_matrix(w: &DistanceWeights, caps: &Caps) -> Result<RatMatrix> {
    let shape = w.shape();
    let dim = shape.dim(caps)?;
    Ok(RatMatrix::from_fn(dim, dim, |c, cp| w.a[disagreement_by_index(shape, cp, c)].clone()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallotTally {
    pub scores: RatVector,
    /// Every committee attaining the top score, in lexicographic order.
    pub winners: Vec<Committee>,
}

/// All committees whose score is maximal. An empty score vector has no winners.
pub fn argmax_winners(shape: Shape, scores: &RatVector) -> Vec<Committee> {
    let Some(best) = scores.iter().max() else {
        return Vec::new();
    };
    scores.iter().enumerate().filter(|(_, s)| *s == best).map(|(i, _)| Committee::from_index(shape, i)).collect()
}

/// Scores of every committee for the ballot counts `p` (indexed by committee).
pub fn tally_committee_ballots(w: &DistanceWeights, p: &RatVector, caps: &Caps) -> Result<BallotTally> {
    let shape = w.shape();
    let dim = shape.dim(caps)?;
    if p.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
    }
    let ballots: Vec<(usize, &Rational)> = p.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
    let scores: Vec<Rational> = (0..dim)
        .map(|c| {
            let mut by_distance = vec![Rational::zero(); shape.n + 1];
            for &(cp, count) in &ballots {
                by_distance[disagreement_by_index(shape, cp, c)] += count;
            }
            by_distance.iter().zip(&w.a).fold(Rational::zero(), |acc, (x, a)| acc + x * a)
        })
        .collect();
    let scores = RatVector::new(scores);
    let winners = argmax_winners(shape, &scores);
    Ok(BallotTally { scores, winners })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchurParameters {
    /// `lambda[k]` is the scalar by which the rule acts on component `k`.
    #[serde(with = "rational_vec_string")]
    pub lambda: Vec<Rational>,
}

/// Applies the rule to `b_C` for the first committee `C` and reads off the
/// scalar for each component.
///
/// The image of `b_C` is again a function of the distance from `C`, so it is
/// evaluated at one committee per distance and compared against `b_C` there.
pub fn schur_parameters(w: &DistanceWeights, caps: &Caps) -> Result<SchurParameters> {
    let shape = w.shape();
    let dim = shape.dim(caps)?;
    let target = Committee::from_index(shape, 0);
    // committee at distance d from the first one: last d departments pick candidate 2
    let probes: Vec<usize> =
        (0..=shape.n).map(|d| if shape.m < 2 { 0 } else { (0..d).map(|i| shape.m.pow(i as u32)).sum() }).collect();
    let lambda = (0..=shape.n)
        .map(|k| {
            let b = component_vector(shape, k, &target, caps)?.vector;
            let mut lambda: Option<Rational> = None;
            for &c in &probes {
                let image = (0..dim).fold(Rational::zero(), |acc, cp| {
                    let x = &b[cp];
                    if x.is_zero() {
                        acc
                    } else {
                        acc + &w.a[disagreement_by_index(shape, cp, c)] * x
                    }
                });
                let here = &b[c];
                if here.is_zero() {
                    if !image.is_zero() {
                        return Err(Error::NotScalar { k });
                    }
                    continue;
                }
                let r = image / here;
                match &lambda {
                    Some(l) if *l != r => return Err(Error::NotScalar { k }),
                    Some(_) => {}
                    None => lambda = Some(r),
                }
            }
            lambda.ok_or(Error::NotScalar { k })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SchurParameters { lambda })
}

impl SchurParameters {
    /// Components on which the rule reverses the sign of a profile.
    pub fn reversed(&self) -> Vec<usize> {
        (0..self.lambda.len()).filter(|&k| self.lambda[k].is_negative()).collect()
    }

    /// Components the rule sends to zero.
    pub fn killed(&self) -> Vec<usize> {
        (0..self.lambda.len()).filter(|&k| self.lambda[k].is_zero()).collect()
    }

    /// Components the rule enlarges, i.e. `|lambda[k]| > 1`.
    pub fn amplified(&self) -> Vec<usize> {
        (0..self.lambda.len()).filter(|&k| self.lambda[k].abs() > Rational::one()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleAnalysis {
    pub profile: DecompositionReport,
    pub scores: DecompositionReport,
    pub parameters: SchurParameters,
}

pub fn analyze_rule_on_profile(w: &DistanceWeights, p: &RatVector, caps: &Caps) -> Result<RuleAnalysis> {
    let shape = w.shape();
    let tally = tally_committee_ballots(w, p, caps)?;
    Ok(RuleAnalysis {
        profile: decompose_result(shape, p, caps)?,
        scores: decompose_result(shape, &tally.scores, caps)?,
        parameters: schur_parameters(w, caps)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{binomial, enumerate_group, WreathElement};
    use crate::decomposition::{component_spanning_set, distance_profile, project_onto_component};
    use crate::linalg::{rat, ratio};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn s(m: usize, n: usize) -> Shape {
        Shape::new(m, n).unwrap()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn pow(b: i64, e: usize) -> i64 {
        b.pow(e as u32)
    }

    /// Oracle: `lambda_k = Σ_d a_d · #{C' at distance d} · p_k(d) / p_k(0)`,
    /// the eigenvalue read off at the centre of `b_C`.
    fn lambda_oracle(w: &DistanceWeights) -> Vec<Rational> {
        let sh = w.shape();
        (0..=sh.n)
            .map(|k| {
                let p = distance_profile(sh, k).unwrap().values;
                let total = (0..=sh.n).fold(Rational::zero(), |acc, d| {
                    let count = BigInt::from(binomial(sh.n, d)) * BigInt::from(sh.m - 1).pow(d as u32);
                    acc + &w.a[d] * Rational::from_integer(count) * &p[d]
                });
                total / &p[0]
            })
            .collect()
    }

    #[test]
    fn scoring_matrix_rows() {
        let w = named_weights(NamedWeights::BordaLike, 2, 2).unwrap();
        let a = scoring_matrix(&w, &caps()).unwrap();
        assert_eq!(a.row(0), RatVector::from_ints(&[2, 1, 1, 0]));
        assert!(a.is_symmetric());

        let w = named_weights(NamedWeights::BordaLike, 3, 3).unwrap();
        let a = scoring_matrix(&w, &caps()).unwrap();
        assert_eq!(&a.row(0).entries()[..9], &ints(&[3, 2, 2, 2, 1, 1, 2, 1, 1])[..]);
        assert!(a.is_symmetric());

        let w = DistanceWeights::from_ints(s(3, 2), &[1, 1, 1]).unwrap();
        let a = scoring_matrix(&w, &caps()).unwrap();
        assert!(a.row_vectors().iter().all(|r| *r == RatVector::ones(9)));
    }

    #[test]
    fn scoring_matrix_size_guard() {
        let w = named_weights(NamedWeights::BordaLike, 5, 6).unwrap();
        assert!(matches!(scoring_matrix(&w, &caps()), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn tally_examples() {
        let c = caps();
        let borda = named_weights(NamedWeights::BordaLike, 2, 2).unwrap();
        let t = tally_committee_ballots(&borda, &RatVector::from_ints(&[1, 0, 0, 0]), &c).unwrap();
        assert_eq!(t.scores, RatVector::from_ints(&[2, 1, 1, 0]));
        assert_eq!(t.winners, vec![Committee::from_index(s(2, 2), 0)]);

        let wine = DistanceWeights::from_ints(s(2, 2), &[1, 0, 1]).unwrap();
        let t = tally_committee_ballots(&wine, &RatVector::from_ints(&[1, 0, 0, 0]), &c).unwrap();
        assert_eq!(t.scores, RatVector::from_ints(&[1, 0, 0, 1]));
        assert_eq!(t.winners.iter().map(|w| w.index(2)).collect::<Vec<_>>(), vec![0, 3]);

        let t = tally_committee_ballots(&borda, &RatVector::zeros(4), &c).unwrap();
        assert!(t.scores.is_zero());
        assert_eq!(t.winners.len(), 4);

        assert_eq!(
            tally_committee_ballots(&borda, &RatVector::zeros(3), &c),
            Err(Error::DimensionMismatch { expected: 4, got: 3 })
        );
    }

    #[test]
    fn tally_matches_matrix_product() {
        let w = DistanceWeights::new(s(3, 2), vec![ratio(5, 2), rat(-1), ratio(1, 3)]).unwrap();
        let p = RatVector::new((0..9).map(|i| ratio(i * i - 7, i + 1)).collect());
        let t = tally_committee_ballots(&w, &p, &caps()).unwrap();
        assert_eq!(t.scores, scoring_matrix(&w, &caps()).unwrap().mul_vec(&p).unwrap());
    }

    #[test]
    fn named_weight_vectors() {
        let borda = named_weights(NamedWeights::BordaLike, 2, 2).unwrap();
        assert_eq!(borda.a, ints(&[2, 1, 0]));
        assert_eq!(borda.display(), "[2;1;0]");
        assert_eq!(named_weights(NamedWeights::Alternating, 4, 5).unwrap().a, ints(&[1, -1, 1, -1, 1, -1]));
        assert_eq!(named_weights(NamedWeights::ApprovalNondisjoint, 4, 4).unwrap().a, ints(&[1, 1, 1, 1, 0]));
        assert_eq!(named_weights(NamedWeights::ComplementPair, 2, 3).unwrap().a, ints(&[1, 0, 0, 1]));
        assert_eq!(named_weights(NamedWeights::FirstLast, 3, 3).unwrap().a, ints(&[1, 0, 0, 1]));
        assert_eq!(named_weights(NamedWeights::ParityEven, 2, 4).unwrap().a, ints(&[1, 0, 1, 0, 1]));
        assert_eq!(
            named_weights(NamedWeights::ParityEven, 3, 2),
            Err(Error::UnsupportedM { name: "parity_even", m: 3 })
        );
        assert!(matches!(named_weights(NamedWeights::ComplementPair, 4, 2), Err(Error::UnsupportedM { .. })));
        for w in NamedWeights::ALL {
            assert_eq!(w.name().parse::<NamedWeights>().unwrap(), w);
        }
        assert_eq!("first-last".parse::<NamedWeights>().unwrap(), NamedWeights::FirstLast);
        assert!("plurality".parse::<NamedWeights>().is_err());
    }

    #[test]
    fn parse_weights() {
        let w = DistanceWeights::parse(s(2, 2), "1, 0, 1/2").unwrap();
        assert_eq!(w.a, vec![rat(1), rat(0), ratio(1, 2)]);
        assert_eq!(DistanceWeights::parse(s(2, 2), "[2;1;0]").unwrap().a, ints(&[2, 1, 0]));
        assert_eq!(DistanceWeights::parse(s(2, 2), "1,2"), Err(Error::WrongSize { expected: 3, got: 2 }));
        assert!(matches!(DistanceWeights::parse(s(2, 2), "1,x,2"), Err(Error::Parse(_))));
    }

    #[test]
    fn borda_parameters() {
        for m in 2..=4 {
            for n in 1..=4 {
                let w = named_weights(NamedWeights::BordaLike, m, n).unwrap();
                let lambda = schur_parameters(&w, &caps()).unwrap().lambda;
                let mut expected = vec![rat((n as i64) * pow(m as i64, n - 1)), rat(pow(m as i64, n - 1))];
                expected.resize(n + 1, rat(0));
                assert_eq!(lambda, expected, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn wine_parameters() {
        let w = DistanceWeights::from_ints(s(2, 2), &[1, 0, 1]).unwrap();
        assert_eq!(schur_parameters(&w, &caps()).unwrap().lambda, ints(&[2, 0, 2]));
    }

    #[test]
    fn approval_parameters() {
        for m in 2..=4 {
            for n in 1..=4 {
                let w = named_weights(NamedWeights::ApprovalNondisjoint, m, n).unwrap();
                let lambda = schur_parameters(&w, &caps()).unwrap().lambda;
                let mi = m as i64;
                let mut expected = vec![rat(pow(mi, n) - pow(mi - 1, n))];
                for k in 1..=n {
                    let sign = if k % 2 == 1 { 1 } else { -1 };
                    expected.push(rat(sign * pow(mi - 1, n - k)));
                }
                assert_eq!(lambda, expected, "m={m} n={n}");
            }
        }
        let w = named_weights(NamedWeights::ApprovalNondisjoint, 4, 4).unwrap();
        assert_eq!(schur_parameters(&w, &caps()).unwrap().lambda, ints(&[175, 27, -9, 3, -1]));
    }

    #[test]
    fn complement_and_parity_parameters() {
        for n in 1..=6 {
            let w = named_weights(NamedWeights::ComplementPair, 2, n).unwrap();
            let lambda = schur_parameters(&w, &caps()).unwrap().lambda;
            for (k, l) in lambda.iter().enumerate() {
                assert_eq!(*l, rat(if k % 2 == 0 { 2 } else { 0 }), "n={n} k={k}");
            }
            let w = named_weights(NamedWeights::ParityEven, 2, n).unwrap();
            let lambda = schur_parameters(&w, &caps()).unwrap().lambda;
            for (k, l) in lambda.iter().enumerate() {
                if k == 0 || k == n {
                    assert!(!l.is_zero(), "n={n} k={k}");
                } else {
                    assert!(l.is_zero(), "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn alternating_parameters() {
        for n in 1..=4 {
            let w = named_weights(NamedWeights::Alternating, 4, n).unwrap();
            let lambda = schur_parameters(&w, &caps()).unwrap().lambda;
            for (i, l) in lambda.iter().enumerate() {
                let sign = if (i + n) % 2 == 0 { 1 } else { -1 };
                assert_eq!(*l, rat(sign * pow(2, n)), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn parameters_match_closed_form() {
        let weights = [
            vec![ratio(3, 2), rat(-2), rat(0), ratio(7, 5)],
            vec![rat(1), rat(1), rat(-4), rat(9)],
            vec![rat(0), rat(0), rat(1), rat(0)],
        ];
        for a in weights {
            for m in 2..=4 {
                let w = DistanceWeights::new(s(m, 3), a.clone()).unwrap();
                assert_eq!(schur_parameters(&w, &caps()).unwrap().lambda, lambda_oracle(&w));
            }
        }
    }

    #[test]
    fn schur_consistency_on_every_spanning_vector() {
        let c = caps();
        for (m, n) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            let w = DistanceWeights::new(s(m, n), (0..=n).map(|d| ratio(d as i64 * 3 - 2, 2)).collect()).unwrap();
            let lambda = schur_parameters(&w, &c).unwrap().lambda;
            let a = scoring_matrix(&w, &c).unwrap();
            for (k, l) in lambda.iter().enumerate() {
                for b in component_spanning_set(s(m, n), k, &c).unwrap() {
                    assert_eq!(a.mul_vec(&b.vector).unwrap(), b.vector.scale(l));
                }
            }
        }
    }

    #[test]
    fn worked_example_four_by_four() {
        let c = caps();
        let sh = s(4, 4);
        let w = named_weights(NamedWeights::ApprovalNondisjoint, 4, 4).unwrap();
        let target = Committee::new(sh, vec![2, 3, 1, 4]).unwrap();
        let k1 = distance_profile(sh, 1).unwrap();
        let k2 = distance_profile(sh, 2).unwrap();
        assert_eq!(k1.values, ints(&[12, 8, 4, 0, -4]));
        assert_eq!(k2.values, ints(&[54, 18, -2, -6, 6]));
        let p = &k1.around(&target).unwrap() + &k2.around(&target).unwrap();
        let combined: Vec<Rational> = k1.values.iter().zip(&k2.values).map(|(x, y)| x + y).collect();
        assert_eq!(combined, ints(&[66, 26, 2, -6, 2]));

        let analysis = analyze_rule_on_profile(&w, &p, &c).unwrap();
        let expected = crate::decomposition::profile_vector(sh, &ints(&[-18, 6, 14, 6, -18]), &target).unwrap();
        assert_eq!(analysis.scores.input.ratio_to(&expected), Some(rat(9)));
        assert_eq!(analysis.profile.support(), vec![1, 2]);
        assert_eq!(analysis.scores.support(), vec![1, 2]);
        assert_eq!(analysis.parameters.reversed(), vec![2, 4]);
    }

    #[test]
    fn trivial_profile_stays_trivial() {
        let w = DistanceWeights::new(s(3, 2), vec![rat(4), ratio(-1, 3), rat(2)]).unwrap();
        let analysis = analyze_rule_on_profile(&w, &RatVector::ones(9).scale(&ratio(2, 7)), &caps()).unwrap();
        assert_eq!(analysis.profile.support(), vec![0]);
        assert_eq!(analysis.scores.support(), vec![0]);
    }

    #[test]
    fn indicator_weights_share_support_with_profile() {
        // the rule counting only distance-d committees, read as a vector around a
        // committee, lives exactly in the components whose profile is nonzero at d
        let c = caps();
        for (m, n) in [(2, 3), (3, 2), (3, 3), (4, 2)] {
            let sh = s(m, n);
            let target = Committee::from_index(sh, 1);
            for d in 0..=n {
                let mut a = vec![rat(0); n + 1];
                a[d] = rat(1);
                let v = crate::decomposition::profile_vector(sh, &a, &target).unwrap();
                let support = decompose_result(sh, &v, &c).unwrap().support();
                let expected: Vec<usize> =
                    (0..=n).filter(|&k| !distance_profile(sh, k).unwrap().values[d].is_zero()).collect();
                assert_eq!(support, expected, "m={m} n={n} d={d}");
                let lambda = schur_parameters(&DistanceWeights::new(sh, a).unwrap(), &c).unwrap().lambda;
                let nonzero: Vec<usize> = (0..=n).filter(|&k| !lambda[k].is_zero()).collect();
                assert_eq!(nonzero, expected);
            }
        }
    }

    #[test]
    fn equivariance_exhaustive_small() {
        let c = caps();
        for (m, n) in [(2, 2), (2, 3), (3, 2)] {
            let sh = s(m, n);
            let dim = m.pow(n as u32);
            let w = DistanceWeights::new(sh, (0..=n).map(|d| ratio(7 - 3 * d as i64, 2)).collect()).unwrap();
            let p = RatVector::new((0..dim).map(|i| ratio((i * 5 % 7) as i64 - 2, 3)).collect());
            let base = tally_committee_ballots(&w, &p, &c).unwrap();
            for g in enumerate_group(sh, &c).unwrap() {
                let perm = g.committee_permutation(sh);
                let moved = tally_committee_ballots(&w, &p.permute(&perm), &c).unwrap();
                assert_eq!(moved.scores, base.scores.permute(&perm));
                let mut mapped: Vec<usize> = base.winners.iter().map(|w| perm[w.index(m)]).collect();
                mapped.sort_unstable();
                let got: Vec<usize> = moved.winners.iter().map(|w| w.index(m)).collect();
                assert_eq!(got, mapped);
            }
        }
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=6).prop_map(|(p, q)| ratio(p, q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn reconstruction_from_parameters(
            a in prop::collection::vec(small_rational(), 4),
            p in prop::collection::vec(small_rational(), 27),
        ) {
            let c = caps();
            let sh = s(3, 3);
            let w = DistanceWeights::new(sh, a).unwrap();
            let p = RatVector::new(p);
            let lambda = schur_parameters(&w, &c).unwrap().lambda;
            let mut rebuilt = RatVector::zeros(27);
            for (k, l) in lambda.iter().enumerate() {
                rebuilt.add_scaled(l, &project_onto_component(sh, k, &p, &c).unwrap());
            }
            prop_assert_eq!(tally_committee_ballots(&w, &p, &c).unwrap().scores, rebuilt);
        }

        #[test]
        fn shifting_weights_keeps_winners(
            a in prop::collection::vec(small_rational(), 3),
            p in prop::collection::vec(small_rational(), 9),
            t in small_rational(),
        ) {
            let c = caps();
            let sh = s(3, 2);
            let p = RatVector::new(p);
            let w = DistanceWeights::new(sh, a.clone()).unwrap();
            let shifted = DistanceWeights::new(sh, a.iter().map(|x| x + &t).collect()).unwrap();
            let before = tally_committee_ballots(&w, &p, &c).unwrap();
            let after = tally_committee_ballots(&shifted, &p, &c).unwrap();
            let shift = &t * p.sum();
            let expected: Vec<Rational> = before.scores.iter().map(|x| x + &shift).collect();
            prop_assert_eq!(after.scores, RatVector::new(expected));
            prop_assert_eq!(after.winners, before.winners);
        }

        #[test]
        fn equivariance_sampled(
            outer_swap in any::<bool>(),
            inner in prop::collection::vec(0usize..6, 3),
            p in prop::collection::vec(small_rational(), 27),
        ) {
            let c = caps();
            let sh = s(3, 3);
            let perms = crate::combinatorics::lex_permutations(3);
            let outer = if outer_swap { vec![1, 2, 0] } else { vec![0, 2, 1] };
            let g = WreathElement::new(inner.iter().map(|&i| perms[i].clone()).collect(), outer).unwrap();
            let perm = g.committee_permutation(sh);
            let w = named_weights(NamedWeights::BordaLike, 3, 3).unwrap();
            let p = RatVector::new(p);
            let base = tally_committee_ballots(&w, &p, &c).unwrap();
            let moved = tally_committee_ballots(&w, &p.permute(&perm), &c).unwrap();
            prop_assert_eq!(moved.scores, base.scores.permute(&perm));
        }
    }
}
