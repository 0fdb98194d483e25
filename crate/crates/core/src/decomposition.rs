//! Splitting the committee space into its `n + 1` irreducible pieces.
//!
//! Component `k` (for `0 <= k <= n`) has dimension `C(n, k) (m - 1)^k`. It is
//! spanned by the vectors `b_C`, one per committee `C`, whose entry at `C'`
//! depends only on the number `d` of departments where `C` and `C'`
//! disagree. That dependence is the [`DistanceProfile`].

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::combinatorics::{binomial, disagreement_by_index, Caps, Committee, Shape};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, rational_vec_string, RatVector, Rational};

/// Entry values of `b_C` indexed by disagreement count `d = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceProfile {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    #[serde(with = "rational_vec_string")]
    pub values: Vec<Rational>,
}

impl DistanceProfile {
    /// `[p_0; p_1; ...; p_n]`
    pub fn display(&self) -> String {
        let parts: Vec<String> = self.values.iter().map(format_rational).collect();
        format!("[{}]", parts.join(";"))
    }

    /// The vector in `R_{m,n}` whose entry at `C'` is `values[d(target, C')]`.
    pub fn around(&self, target: &Committee) -> Result<RatVector> {
        profile_vector(Shape { m: self.m, n: self.n }, &self.values, target)
    }
}

/// Places per-distance values around `target`: entry `C'` gets
/// `values[disagreement(target, C')]`.
pub fn profile_vector(shape: Shape, values: &[Rational], target: &Committee) -> Result<RatVector> {
    if values.len() != shape.n + 1 {
        return Err(Error::WrongSize { expected: shape.n + 1, got: values.len() });
    }
    if target.departments() != shape.n {
        return Err(Error::DimensionMismatch { expected: shape.n, got: target.departments() });
    }
    let dim = shape.m.pow(shape.n as u32);
    let t = target.index(shape.m);
    Ok(RatVector::new((0..dim).map(|c| values[disagreement_by_index(shape, t, c)].clone()).collect()))
}

fn check_k(shape: Shape, k: usize) -> Result<()> {
    if k > shape.n {
        return Err(Error::BadK { k, n: shape.n });
    }
    if shape.m < 2 {
        return Err(Error::InvalidShape("components need m >= 2".into()));
    }
    Ok(())
}

/// `values[d] = Σ_ℓ C(n-d, ℓ) C(d, k-ℓ) (m-1)^ℓ (-1)^(k-ℓ)`: each size-`k`
/// set of departments contributes `m - 1` for every department where the
/// committees agree and `-1` for every one where they differ.
pub fn distance_profile(shape: Shape, k: usize) -> Result<DistanceProfile> {
    check_k(shape, k)?;
    let (m, n) = (shape.m, shape.n);
    let values = (0..=n)
        .map(|d| {
            let mut total = BigInt::zero();
            for agree in 0..=k.min(n - d) {
                let differ = k - agree;
                if differ > d {
                    continue;
                }
                let count: BigUint = binomial(n - d, agree) * binomial(d, differ);
                let term = BigInt::from(count) * num_traits::pow(BigInt::from(m - 1), agree);
                if differ.is_multiple_of(2) {
                    total += term;
                } else {
                    total -= term;
                }
            }
            Rational::from_integer(total)
        })
        .collect();
    Ok(DistanceProfile { m, n, k, values })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentVector {
    pub k: usize,
    pub target: Committee,
    pub vector: RatVector,
}

/// `b_C` for component `k` and target committee `C`.
pub fn component_vector(shape: Shape, k: usize, target: &Committee, caps: &Caps) -> Result<ComponentVector> {
    shape.dim(caps)?;
    let profile = distance_profile(shape, k)?;
    if target.choices().iter().any(|&j| j > shape.m) {
        return Err(Error::Invalid(format!("{target} has a candidate outside 1..={}", shape.m)));
    }
    Ok(ComponentVector { k, target: target.clone(), vector: profile.around(target)? })
}

/// `b_C` for every committee `C`, in lexicographic order of `C`. Redundant:
/// its rank is `C(n, k) (m - 1)^k`.
pub fn component_spanning_set(shape: Shape, k: usize, caps: &Caps) -> Result<Vec<ComponentVector>> {
    let dim = shape.dim(caps)?;
    let profile = distance_profile(shape, k)?;
    (0..dim)
        .map(|i| {
            let target = Committee::from_index(shape, i);
            let vector = profile.around(&target)?;
            Ok(ComponentVector { k, target, vector })
        })
        .collect()
}

/// `C(n, k) (m - 1)^k`
pub fn component_dimension(shape: Shape, k: usize) -> BigUint {
    binomial(shape.n, k) * num_traits::pow(BigUint::from(shape.m.saturating_sub(1)), k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub input: RatVector,
    /// `components[k]` is the projection of `input` onto component `k`.
    pub components: Vec<RatVector>,
    #[serde(with = "rational_vec_string")]
    pub norms_squared: Vec<Rational>,
}

impl DecompositionReport {
    /// Indices `k` whose projection is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.components.len()).filter(|&k| !self.components[k].is_zero()).collect()
    }
}

/// For every committee `C'`, the sums `Σ v[C]` over committees `C` at each
/// disagreement count `d` from `C'`.
fn distance_sums(shape: Shape, v: &RatVector) -> Vec<Vec<Rational>> {
    let dim = v.dim();
    (0..dim)
        .map(|target| {
            let mut sums = vec![Rational::zero(); shape.n + 1];
            for (c, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    sums[disagreement_by_index(shape, target, c)] += x;
                }
            }
            sums
        })
        .collect()
}

fn check_vector(shape: Shape, v: &RatVector, caps: &Caps) -> Result<()> {
    let dim = shape.dim(caps)?;
    if v.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: v.dim() });
    }
    if shape.m < 2 {
        return Err(Error::InvalidShape("components need m >= 2".into()));
    }
    Ok(())
}

fn project_with_sums(shape: Shape, k: usize, sums: &[Vec<Rational>]) -> Result<RatVector> {
    let profile = distance_profile(shape, k)?;
    let scale = Rational::from_integer(BigInt::from(shape.committee_count())).recip();
    Ok(RatVector::new(
        sums.iter()
            .map(|s| {
                let total = s.iter().zip(&profile.values).fold(Rational::zero(), |acc, (x, p)| acc + x * p);
                total * &scale
            })
            .collect(),
    ))
}

/// Orthogonal projection of `v` onto component `k`.
///
/// The projector onto the span of the full spanning set `{b_C}` is
/// `m^{-n} Σ_C b_C e_C^T`, so the projection is `m^{-n} Σ_C v[C] b_C`. This
/// agrees with solving the normal equations of `{b_C}` through
/// [`project_onto_span`], at a fraction of the cost.
pub fn project_onto_component(shape: Shape, k: usize, v: &RatVector, caps: &Caps) -> Result<RatVector> {
    check_vector(shape, v, caps)?;
    project_with_sums(shape, k, &distance_sums(shape, v))
}

pub fn decompose_result(shape: Shape, v: &RatVector, caps: &Caps) -> Result<DecompositionReport> {
    check_vector(shape, v, caps)?;
    let sums = distance_sums(shape, v);
    let components = (0..=shape.n).map(|k| project_with_sums(shape, k, &sums)).collect::<Result<Vec<_>>>()?;
    let norms_squared = components.iter().map(RatVector::norm_squared).collect();
    Ok(DecompositionReport { input: v.clone(), components, norms_squared })
}

/// The `n (m - 1)` vectors `v_{d,i}`: `+1` on committees choosing candidate 1
/// in department `d`, `-1` on those choosing candidate `i`, `0` elsewhere.
/// Ordered by department, then by `i = 2..=m`.
pub fn borda_department_basis(shape: Shape, caps: &Caps) -> Result<Vec<RatVector>> {
    let dim = shape.dim(caps)?;
    if shape.m < 2 {
        return Err(Error::InvalidShape("the Borda basis needs m >= 2".into()));
    }
    let mut out = Vec::with_capacity(shape.n * (shape.m - 1));
    for dept in 0..shape.n {
        for cand in 2..=shape.m {
            let v = (0..dim)
                .map(|c| {
                    let choice = Committee::from_index(shape, c).choices()[dept];
                    if choice == 1 {
                        Rational::one()
                    } else if choice == cand {
                        -Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            out.push(RatVector::new(v));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{disagreement, enumerate_committees};
    use crate::linalg::project_onto_span;
    use crate::linalg::{rat, ratio, RatMatrix};

    fn s(m: usize, n: usize) -> Shape {
        Shape::new(m, n).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    /// Oracle: enumerate every size-k department subset explicitly.
    fn profile_by_subsets(m: usize, n: usize, k: usize) -> Vec<Rational> {
        (0..=n)
            .map(|d| {
                // departments 0..d disagree, the rest agree
                let mut total = 0i64;
                for mask in 0u32..(1 << n) {
                    if mask.count_ones() as usize != k {
                        continue;
                    }
                    let mut term = 1i64;
                    for dept in 0..n {
                        if mask & (1 << dept) != 0 {
                            term *= if dept < d { -1 } else { m as i64 - 1 };
                        }
                    }
                    total += term;
                }
                rat(total)
            })
            .collect()
    }

    #[test]
    fn profiles_from_worked_examples() {
        assert_eq!(distance_profile(s(5, 3), 1).unwrap().values, ints(&[12, 7, 2, -3]));
        assert_eq!(distance_profile(s(5, 3), 2).unwrap().values, ints(&[48, 8, -7, 3]));
        assert_eq!(distance_profile(s(3, 3), 1).unwrap().values, ints(&[6, 3, 0, -3]));
        assert_eq!(distance_profile(s(3, 3), 0).unwrap().values, ints(&[1, 1, 1, 1]));
        assert_eq!(distance_profile(s(2, 2), 2).unwrap().values, ints(&[1, -1, 1]));
        assert_eq!(distance_profile(s(4, 4), 1).unwrap().values, ints(&[12, 8, 4, 0, -4]));
        assert_eq!(distance_profile(s(4, 4), 2).unwrap().values, ints(&[54, 18, -2, -6, 6]));
        assert_eq!(distance_profile(s(3, 3), 1).unwrap().display(), "[6;3;0;-3]");
    }

    #[test]
    fn profile_errors() {
        assert_eq!(distance_profile(s(3, 2), 3), Err(Error::BadK { k: 3, n: 2 }));
        assert!(matches!(distance_profile(s(1, 2), 1), Err(Error::InvalidShape(_))));
    }

    #[test]
    fn profile_matches_subset_enumeration_and_closed_forms() {
        for m in 2..=6usize {
            for n in 1..=6usize {
                for k in 0..=n {
                    let got = distance_profile(s(m, n), k).unwrap().values;
                    assert_eq!(got, profile_by_subsets(m, n, k), "m={m} n={n} k={k}");
                }
                let (mi, ni) = (m as i64, n as i64);
                let k1 = distance_profile(s(m, n), 1).unwrap().values;
                for (d, val) in k1.iter().enumerate() {
                    assert_eq!(*val, rat(mi * ni - ni - mi * d as i64));
                }
                let top = distance_profile(s(m, n), n).unwrap().values;
                for (d, val) in top.iter().enumerate() {
                    let sign = if d % 2 == 0 { 1 } else { -1 };
                    assert_eq!(*val, rat(sign * (mi - 1).pow((n - d) as u32)));
                }
                if n >= 2 {
                    let k2 = distance_profile(s(m, n), 2).unwrap().values;
                    for (d, val) in k2.iter().enumerate() {
                        let d = rat(d as i64);
                        let expected = ratio(mi * mi, 2) * &d * &d
                            + (rat(-mi * (mi - 1) * (ni - 1)) - ratio(mi * mi, 2)) * &d
                            + ratio(ni * (ni - 1), 2) * rat((mi - 1) * (mi - 1));
                        assert_eq!(*val, expected);
                    }
                }
            }
        }
    }

    #[test]
    fn component_vector_examples() {
        let caps = Caps::default();
        let sh = s(2, 2);
        let z = Committee::new(sh, vec![2, 2]).unwrap();
        assert_eq!(component_vector(sh, 2, &z, &caps).unwrap().vector, RatVector::from_ints(&[1, -1, -1, 1]));
        assert_eq!(component_vector(sh, 1, &z, &caps).unwrap().vector, RatVector::from_ints(&[-2, 0, 0, 2]));
        let sh3 = s(3, 3);
        let first = Committee::new(sh3, vec![1, 1, 1]).unwrap();
        let expected = [6, 3, 3, 3, 0, 0, 3, 0, 0, 3, 0, 0, 0, -3, -3, 0, -3, -3, 3, 0, 0, 0, -3, -3, 0, -3, -3];
        assert_eq!(component_vector(sh3, 1, &first, &caps).unwrap().vector, RatVector::from_ints(&expected));
        assert!(matches!(component_vector(sh, 3, &z, &caps), Err(Error::BadK { .. })));
        let wrong = Committee::new(sh3, vec![1, 1, 1]).unwrap();
        assert!(component_vector(sh, 1, &wrong, &caps).is_err());
    }

    #[test]
    fn spanning_set_ranks() {
        let caps = Caps::default();
        let rank_of = |m, n, k| {
            let vs: Vec<RatVector> =
                component_spanning_set(s(m, n), k, &caps).unwrap().into_iter().map(|c| c.vector).collect();
            (vs.len(), RatMatrix::from_rows(&vs).rank())
        };
        assert_eq!(rank_of(2, 2, 1), (4, 2));
        assert_eq!(rank_of(3, 3, 1), (27, 6));
        assert_eq!(rank_of(3, 2, 0), (9, 1));
    }

    #[test]
    fn decompose_two_by_two_scores() {
        let caps = Caps::default();
        let v = RatVector::from_ints(&[9, 5, 6, 10]);
        let rep = decompose_result(s(2, 2), &v, &caps).unwrap();
        assert_eq!(rep.components[0], RatVector::new(vec![ratio(15, 2); 4]));
        assert_eq!(rep.components[1], RatVector::new(vec![ratio(-1, 2), ratio(-1, 2), ratio(1, 2), ratio(1, 2)]));
        assert_eq!(rep.components[2], RatVector::from_ints(&[2, -2, -2, 2]));
        assert_eq!(rep.norms_squared, vec![rat(225), rat(1), rat(16)]);

        let ones = decompose_result(s(2, 2), &RatVector::ones(4), &caps).unwrap();
        assert_eq!(ones.support(), vec![0]);

        assert!(matches!(decompose_result(s(2, 2), &RatVector::ones(3), &caps), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn closed_form_projection_matches_normal_equations() {
        let caps = Caps::default();
        for (m, n) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            let sh = s(m, n);
            let dim = m.pow(n as u32);
            let v = RatVector::new((0..dim).map(|i| ratio((i * i % 11) as i64 - 4, (i % 3 + 1) as i64)).collect());
            for k in 0..=n {
                let spanning: Vec<RatVector> =
                    component_spanning_set(sh, k, &caps).unwrap().into_iter().map(|c| c.vector).collect();
                let oracle = project_onto_span(&spanning, &v).unwrap();
                assert_eq!(project_onto_component(sh, k, &v, &caps).unwrap(), oracle, "m={m} n={n} k={k}");
            }
        }
    }

    #[test]
    fn borda_basis_two_by_two() {
        let caps = Caps::default();
        let basis = borda_department_basis(s(2, 2), &caps).unwrap();
        assert_eq!(basis, vec![RatVector::from_ints(&[1, 1, -1, -1]), RatVector::from_ints(&[1, -1, 1, -1])]);
    }

    #[test]
    fn borda_basis_spans_component_one() {
        let caps = Caps::default();
        for (m, n) in [(2, 3), (3, 2), (3, 3), (4, 2)] {
            let sh = s(m, n);
            let basis = borda_department_basis(sh, &caps).unwrap();
            assert_eq!(RatMatrix::from_rows(&basis).rank(), n * (m - 1));
            for v in &basis {
                assert!(v.sum().is_zero());
            }
            let mut both = basis.clone();
            both.extend(component_spanning_set(sh, 1, &caps).unwrap().into_iter().map(|c| c.vector));
            assert_eq!(RatMatrix::from_rows(&both).rank(), n * (m - 1));
        }
    }

    #[test]
    fn committees_helper_agrees_with_index_distance() {
        let caps = Caps::default();
        let sh = s(3, 2);
        let cs = enumerate_committees(sh, &caps).unwrap();
        for a in &cs {
            for b in &cs {
                assert_eq!(disagreement(a, b).unwrap(), disagreement_by_index(sh, a.index(3), b.index(3)));
            }
        }
    }
}
