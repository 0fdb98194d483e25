//! Profiles inside a single orbit that make several position-weight rules
//! produce prescribed outcomes at once.
//!
//! Each rule `w_i` is applied uniformly (same vector in every orbit). The
//! unknowns are the multiplicities of the rankings of one orbit; the
//! constraints are `T_{w_i}(p) = r_i`. The system is solved exactly.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    canonical_representative, orbit_members, orbit_of_ranking, resolve_orbit_key, Caps, OrbitInfo, Ranking, Shape,
};
use crate::decomposition::decompose_result;
use crate::error::{Error, Result};
use crate::linalg::{independent, RatMatrix, RatVector};
use crate::ranking::RankingProfile;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParadoxInstance {
    pub m: usize,
    pub n: usize,
    /// Position weights, each of length `m^n`.
    pub weights: Vec<RatVector>,
    /// Desired score vectors, one per weight.
    pub targets: Vec<RatVector>,
    pub orbit: OrbitInfo,
}

#[derive(Deserialize)]
struct InstanceJson {
    weights: Vec<RatVector>,
    targets: Vec<RatVector>,
    orbit: serde_json::Value,
}

impl ParadoxInstance {
    pub fn new(
        shape: Shape,
        weights: Vec<RatVector>,
        targets: Vec<RatVector>,
        orbit_key: &str,
        caps: &Caps,
    ) -> Result<Self> {
        let rep = resolve_orbit_key(shape, orbit_key, caps)?;
        let orbit = orbit_of_ranking(shape, &rep, caps)?;
        Ok(ParadoxInstance { m: shape.m, n: shape.n, weights, targets, orbit })
    }

    /// Reads `{"weights": [...], "targets": [...], "orbit": <key>}`; the orbit
    /// key may be a number or a string understood by [`resolve_orbit_key`].
    pub fn from_json(shape: Shape, text: &str, caps: &Caps) -> Result<Self> {
        let raw: InstanceJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let key = match raw.orbit {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(x) => x.to_string(),
            serde_json::Value::Array(items) => items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            other => return Err(Error::Parse(format!("bad orbit key {other}"))),
        };
        Self::new(shape, raw.weights, raw.targets, &key, caps)
    }

    pub fn shape(&self) -> Shape {
        Shape { m: self.m, n: self.n }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParadoxSolution {
    pub profile: RankingProfile,
    /// Dimension of the solution set: orbit size minus the rank of the constraints.
    pub solution_space_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentIndependence {
    pub k: usize,
    pub independent: bool,
    /// Every weight projects to zero on this component.
    pub all_zero: bool,
}

/// For `k = 1..=n`, whether the projections of the weights onto component `k`
/// are linearly independent.
pub fn check_weight_independence(
    m: usize,
    n: usize,
    weights: &[RatVector],
    caps: &Caps,
) -> Result<Vec<ComponentIndependence>> {
    let shape = Shape::new(m, n)?;
    let reports = weights.iter().map(|w| decompose_result(shape, w, caps)).collect::<Result<Vec<_>>>()?;
    Ok((1..=n)
        .map(|k| {
            let projections: Vec<RatVector> = reports.iter().map(|r| r.components[k].clone()).collect();
            ComponentIndependence {
                k,
                independent: independent(&projections),
                all_zero: projections.iter().all(RatVector::is_zero),
            }
        })
        .collect())
}

fn validate(inst: &ParadoxInstance, caps: &Caps) -> Result<usize> {
    let shape = inst.shape();
    let dim = shape.dim(caps)?;
    if inst.weights.len() != inst.targets.len() {
        return Err(Error::Invalid(format!("{} weights but {} targets", inst.weights.len(), inst.targets.len())));
    }
    for v in inst.weights.iter().chain(&inst.targets) {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.dim() });
        }
    }
    for (i, w) in inst.weights.iter().enumerate() {
        if !w.sum().is_zero() {
            return Err(Error::Infeasible(format!("weight {i} does not sum to zero")));
        }
    }
    for (i, r) in inst.targets.iter().enumerate() {
        if !r.sum().is_zero() {
            return Err(Error::Infeasible(format!("target {i} does not sum to zero")));
        }
    }
    Ok(dim)
}

/// Stacked constraint matrix: block `i` maps orbit multiplicities (in
/// [`orbit_members`] order) to the scores under `weights[i]`.
pub fn constraint_matrix(inst: &ParadoxInstance, caps: &Caps) -> Result<(Vec<Ranking>, RatMatrix)> {
    let dim = validate(inst, caps)?;
    let members = orbit_members(inst.shape(), &inst.orbit.representative, caps)?;
    let rows = dim * inst.weights.len();
    let mut matrix = RatMatrix::zeros(rows, members.len());
    for (i, w) in inst.weights.iter().enumerate() {
        for (col, r) in members.iter().enumerate() {
            for (pos, &c) in r.order().iter().enumerate() {
                matrix[(i * dim + c, col)] = w[pos].clone();
            }
        }
    }
    Ok((members, matrix))
}

fn stacked_targets(inst: &ParadoxInstance) -> RatVector {
    RatVector::new(inst.targets.iter().flat_map(|t| t.iter().cloned()).collect())
}

/// An exact profile on `inst.orbit` meeting every target.
///
/// Fails with `Infeasible` when a target has a component `k` on which the
/// weights are not independent, or when the orbit's system has no solution.
pub fn construct_paradox_profile(inst: &ParadoxInstance, caps: &Caps) -> Result<ParadoxSolution> {
    validate(inst, caps)?;
    let shape = inst.shape();
    let independence = check_weight_independence(shape.m, shape.n, &inst.weights, caps)?;
    let targets = inst.targets.iter().map(|t| decompose_result(shape, t, caps)).collect::<Result<Vec<_>>>()?;
    for c in &independence {
        let needed = targets.iter().any(|t| !t.components[c.k].is_zero());
        if needed && !c.independent {
            return Err(Error::Infeasible(format!(
                "a target has a nonzero component k={} but the weights' projections there are {}",
                c.k,
                if c.all_zero { "all zero" } else { "dependent" }
            )));
        }
    }
    let (members, matrix) = constraint_matrix(inst, caps)?;
    let x = matrix.solve(&stacked_targets(inst)).map_err(|e| match e {
        Error::InconsistentSystem => {
            Error::Infeasible(format!("no profile on orbit {} reaches the targets", inst.orbit.id))
        }
        other => other,
    })?;
    let solution_space_dim = members.len() - matrix.rank();
    let profile = RankingProfile::from_votes(shape, members.into_iter().zip(x.into_entries()))?;
    Ok(ParadoxSolution { profile, solution_space_dim })
}

/// Directions along which a solution can move without changing any score,
/// as profiles on the orbit.
pub fn solution_directions(inst: &ParadoxInstance, caps: &Caps) -> Result<Vec<RankingProfile>> {
    let (members, matrix) = constraint_matrix(inst, caps)?;
    matrix
        .nullspace()
        .into_iter()
        .map(|v| RankingProfile::from_votes(inst.shape(), members.iter().cloned().zip(v.into_entries())))
        .collect()
}

/// Recomputes every tally and checks that the profile stays on the orbit.
pub fn verify_solution(inst: &ParadoxInstance, sol: &ParadoxSolution, caps: &Caps) -> bool {
    let shape = inst.shape();
    let Ok(dim) = shape.dim(caps) else {
        return false;
    };
    if sol.profile.shape() != shape || inst.weights.len() != inst.targets.len() {
        return false;
    }
    for r in sol.profile.votes.keys() {
        match canonical_representative(shape, r, caps) {
            Ok(rep) if rep == inst.orbit.representative => {}
            _ => return false,
        }
    }
    inst.weights.iter().zip(&inst.targets).all(|(w, target)| {
        if w.dim() != dim || target.dim() != dim {
            return false;
        }
        let mut scores = RatVector::zeros(dim);
        for (r, count) in &sol.profile.votes {
            for (pos, &c) in r.order().iter().enumerate() {
                scores[c] += count * &w[pos];
            }
        }
        &scores == target
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::enumerate_orbits;
    use crate::linalg::{rat, ratio, Rational};
    use num_traits::One;

    fn s(m: usize, n: usize) -> Shape {
        Shape::new(m, n).unwrap()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    fn borda() -> RatVector {
        RatVector::new(vec![ratio(3, 2), ratio(1, 2), ratio(-1, 2), ratio(-3, 2)])
    }

    #[test]
    fn independence_examples() {
        let c = caps();
        let res = check_weight_independence(2, 2, &[borda()], &c).unwrap();
        assert!(res[0].independent && !res[0].all_zero);
        assert!(!res[1].independent && res[1].all_zero);

        let w = RatVector::from_ints(&[1, -2, 0, 1]);
        let res = check_weight_independence(2, 2, &[w.clone(), w], &c).unwrap();
        assert!(res.iter().all(|r| !r.independent));
    }

    #[test]
    fn generic_weights_independent_on_borda_component() {
        // n (m - 1) weights with pseudo-random entries
        let c = caps();
        for (m, n) in [(2usize, 2usize), (2, 3), (3, 2)] {
            let dim = m.pow(n as u32);
            let j = n * (m - 1);
            let weights: Vec<RatVector> = (0..j)
                .map(|i| {
                    let mut entries: Vec<Rational> = (0..dim)
                        .map(|x| ratio(((x * 7 + i * 13) * (x + 3 * i + 1) % 11) as i64, 1 + i as i64))
                        .collect();
                    let mean = entries.iter().fold(Rational::zero(), |a, e| a + e)
                        / Rational::from_integer((dim as i64).into());
                    for e in &mut entries {
                        *e -= &mean;
                    }
                    RatVector::new(entries)
                })
                .collect();
            let res = check_weight_independence(m, n, &weights, &c).unwrap();
            assert!(res[0].independent, "m={m} n={n}");
        }
    }

    fn instance(weights: Vec<RatVector>, targets: Vec<RatVector>, orbit: &str) -> ParadoxInstance {
        ParadoxInstance::new(s(2, 2), weights, targets, orbit, &caps()).unwrap()
    }

    #[test]
    fn solution_in_every_orbit() {
        let c = caps();
        for alias in 1..=3 {
            let inst = instance(vec![borda()], vec![RatVector::from_ints(&[1, -1, 1, -1])], &format!("orbit-{alias}"));
            let sol = construct_paradox_profile(&inst, &c).unwrap();
            assert!(verify_solution(&inst, &sol, &c));
            assert!(sol.solution_space_dim >= 1);
            let (_, matrix) = constraint_matrix(&inst, &c).unwrap();
            assert_eq!(sol.solution_space_dim, 8 - matrix.rank());
        }
    }

    #[test]
    fn zero_targets() {
        let c = caps();
        let inst = instance(vec![borda()], vec![RatVector::zeros(4)], "0");
        let sol = construct_paradox_profile(&inst, &c).unwrap();
        assert!(sol.profile.is_empty());
        assert!(verify_solution(&inst, &sol, &c));
        assert_eq!(sol.solution_space_dim, 8 - constraint_matrix(&inst, &c).unwrap().1.rank());
    }

    #[test]
    fn borda_cannot_reach_sign_component() {
        let c = caps();
        for alias in 1..=3 {
            let inst = instance(vec![borda()], vec![RatVector::from_ints(&[1, -1, -1, 1])], &format!("orbit-{alias}"));
            assert!(matches!(construct_paradox_profile(&inst, &c), Err(Error::Infeasible(_))));
        }
    }

    #[test]
    fn non_sum_zero_inputs_rejected() {
        let c = caps();
        let inst = instance(vec![RatVector::from_ints(&[3, 2, 1, 0])], vec![RatVector::zeros(4)], "orbit-1");
        assert!(matches!(construct_paradox_profile(&inst, &c), Err(Error::Infeasible(_))));
        let inst = instance(vec![borda()], vec![RatVector::from_ints(&[1, 0, 0, 0])], "orbit-1");
        assert!(matches!(construct_paradox_profile(&inst, &c), Err(Error::Infeasible(_))));
        let inst = instance(vec![borda()], vec![], "orbit-1");
        assert!(matches!(construct_paradox_profile(&inst, &c), Err(Error::Invalid(_))));
    }

    #[test]
    fn two_rules_two_outcomes() {
        let c = caps();
        let w1 = borda();
        let w2 = RatVector::new(vec![ratio(3, 4), ratio(-1, 4), ratio(-1, 4), ratio(-1, 4)]);
        let r1 = RatVector::from_ints(&[2, 0, 0, -2]);
        let r2 = RatVector::from_ints(&[1, 1, -1, -1]);
        for alias in 1..=3 {
            let inst = instance(vec![w1.clone(), w2.clone()], vec![r1.clone(), r2.clone()], &format!("orbit-{alias}"));
            let sol = construct_paradox_profile(&inst, &c).unwrap();
            assert!(verify_solution(&inst, &sol, &c));
            assert!(sol.solution_space_dim > 0);
        }
    }

    #[test]
    fn perturbed_solution_fails() {
        let c = caps();
        let inst = instance(vec![borda()], vec![RatVector::from_ints(&[1, -1, 1, -1])], "orbit-1");
        let mut sol = construct_paradox_profile(&inst, &c).unwrap();
        let first = sol.profile.votes.keys().next().unwrap().clone();
        sol.profile.add(first, Rational::one()).unwrap();
        assert!(!verify_solution(&inst, &sol, &c));
    }

    #[test]
    fn off_orbit_support_fails() {
        let c = caps();
        let inst = instance(vec![borda()], vec![RatVector::zeros(4)], "orbit-1");
        let mut sol = construct_paradox_profile(&inst, &c).unwrap();
        let other = resolve_orbit_key(s(2, 2), "orbit-2", &c).unwrap();
        sol.profile.add(other.clone(), rat(1)).unwrap();
        sol.profile.add(other.permuted(&[1, 0, 3, 2]), rat(-1)).unwrap();
        assert!(!verify_solution(&inst, &sol, &c));
    }

    #[test]
    fn shifting_along_directions_keeps_solutions() {
        let c = caps();
        let inst = instance(vec![borda()], vec![RatVector::from_ints(&[1, -1, 1, -1])], "orbit-2");
        let sol = construct_paradox_profile(&inst, &c).unwrap();
        let directions = solution_directions(&inst, &c).unwrap();
        assert_eq!(directions.len(), sol.solution_space_dim);
        for (i, d) in directions.iter().enumerate() {
            let mut shifted = sol.clone();
            for (r, x) in &d.votes {
                shifted.profile.add(r.clone(), x * ratio(i as i64 + 2, 3)).unwrap();
            }
            assert!(verify_solution(&inst, &shifted, &c));
        }
    }

    #[test]
    fn sampled_orbits_of_three_departments() {
        let c = caps();
        let shape = s(2, 3);
        let w = RatVector::new((0..8).map(|i| rat(7 - 2 * i)).collect());
        let target = RatVector::from_ints(&[3, 1, -1, 2, 0, -2, -1, -2]);
        assert!(target.sum().is_zero());
        let orbits = enumerate_orbits(shape, &c).unwrap();
        for o in orbits.iter().step_by(61) {
            let key = o.representative.order().iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            let inst = ParadoxInstance::new(shape, vec![w.clone()], vec![target.clone()], &key, &c).unwrap();
            // Borda has no k >= 2 part, so only reachable targets live in k <= 1
            let res = construct_paradox_profile(&inst, &c);
            assert!(matches!(res, Err(Error::Infeasible(_))));
        }
        let reachable = RatVector::from_ints(&[3, 1, 1, -1, 1, -1, -1, -3]);
        for o in orbits.iter().step_by(61) {
            let key = o.representative.order().iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            let inst = ParadoxInstance::new(shape, vec![w.clone()], vec![reachable.clone()], &key, &c).unwrap();
            let sol = construct_paradox_profile(&inst, &c).unwrap();
            assert!(verify_solution(&inst, &sol, &c));
            assert!(sol.solution_space_dim > 0);
        }
    }

    #[test]
    fn instance_json() {
        let c = caps();
        let text = r#"{"weights": [["3/2","1/2","-1/2","-3/2"]], "targets": [[1,-1,1,-1]], "orbit": "orbit-3"}"#;
        let inst = ParadoxInstance::from_json(s(2, 2), text, &c).unwrap();
        assert_eq!(inst.orbit.alias, Some(3));
        let by_id = ParadoxInstance::from_json(s(2, 2), &text.replace("\"orbit-3\"", "2"), &c).unwrap();
        assert_eq!(by_id.orbit, inst.orbit);
        assert!(ParadoxInstance::from_json(s(2, 2), "{}", &c).is_err());
    }
}
