//! Endotacticity tests.
//!
//! A direction `u` induces a total preorder on complexes by `y ↦ y·u`. A
//! reaction from a `u`-maximal effective source that still points strictly in
//! the direction of `u` violates `u`-endotacticity; a network with no such
//! reaction for any `u` is endotactic. All comparisons here are exact.
//!
//! For first-order networks embedded in the nonnegative integer lattice the
//! signed indicator vectors `±Σ_{i∈I} e_i` form a complete test set:
//! passing all of them certifies endotacticity outright, and the certificate
//! records the structural consequences (the part of the graph away from the
//! zero complex is weakly reversible with deficiency zero and touches a
//! disjoint set of species). For everything else there are exact
//! single-direction tests, a complete rule in dimension one, and a one-sided
//! sufficient test that may return `Unknown`.

use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact::{self, Rat};
use crate::graph::{
    cross_component_subgraph, deficiency, is_weakly_reversible, stoichiometric_subspace,
    zero_component_split, Reaction, ReactionNetwork,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EndoError {
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("direction has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operation requires a nonempty network")]
    EmptyNetwork,
    #[error("indicator test set undefined for dimension {0} (valid range 1..=16)")]
    TestSetDimension(usize),
    #[error("network is not first order: source {0} has order greater than one")]
    HigherOrderSource(String),
    #[error("complex {0} is not a nonnegative integer vector")]
    NonIntegerComplex(String),
    #[error("species {0} is redundant but occurs in a complex; split the network first")]
    CoupledRedundantSpecies(String),
    #[error("network has stoichiometric dimension {0}, expected 1")]
    NotOneDimensional(usize),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// A nonzero rational direction vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Direction(Vec<Rat>);

impl Direction {
    pub fn new(coords: Vec<Rat>) -> Result<Self, EndoError> {
        if coords.iter().all(Rat::is_zero) {
            return Err(EndoError::ZeroDirection);
        }
        Ok(Direction(coords))
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn negated(&self) -> Self {
        Direction(self.0.iter().map(|x| -x).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EndoStatus {
    Endotactic,
    Violated,
    Unknown,
}

/// Evidence for a `Violated` verdict. Strong-endotacticity failures carry a
/// direction but no single violating reaction.
#[derive(Clone, Debug)]
pub struct Witness {
    pub direction: Direction,
    pub reaction: Option<Reaction>,
}

#[derive(Clone, Debug)]
pub struct EndoVerdict {
    pub status: EndoStatus,
    pub witness: Option<Witness>,
    pub method: &'static str,
}

impl EndoVerdict {
    fn endotactic(method: &'static str) -> Self {
        EndoVerdict {
            status: EndoStatus::Endotactic,
            witness: None,
            method,
        }
    }

    fn violated(method: &'static str, direction: Direction, reaction: Option<Reaction>) -> Self {
        EndoVerdict {
            status: EndoStatus::Violated,
            witness: Some(Witness {
                direction,
                reaction,
            }),
            method,
        }
    }

    fn unknown(method: &'static str) -> Self {
        EndoVerdict {
            status: EndoStatus::Unknown,
            witness: None,
            method,
        }
    }

    pub fn is_endotactic(&self) -> bool {
        self.status == EndoStatus::Endotactic
    }

    /// JSON form: `{status, method, witness: {direction, reaction} | null}`.
    pub fn to_json(&self, species: &[String]) -> Value {
        let witness = self.witness.as_ref().map(|w| {
            json!({
                "direction": w.direction.coords().iter().map(exact::render).collect::<Vec<_>>(),
                "reaction": w.reaction.as_ref().map(|r| json!({
                    "source": r.source.render(species),
                    "target": r.target.render(species),
                    "rate": exact::to_f64(&r.rate),
                })),
            })
        });
        json!({
            "status": self.status,
            "method": self.method,
            "witness": witness,
        })
    }
}

fn check_direction(net: &ReactionNetwork, u: &Direction) -> Result<(), EndoError> {
    if net.is_empty() {
        return Err(EndoError::EmptyNetwork);
    }
    if u.dim() != net.dim() {
        return Err(EndoError::DimensionMismatch {
            expected: net.dim(),
            found: u.dim(),
        });
    }
    Ok(())
}

/// First `u`-endotacticity-violating reaction in lexicographic edge order,
/// if any: an effective reaction whose source is maximal under `y·u` among
/// effective sources and whose reaction vector has positive inner product
/// with `u`.
fn first_violation(net: &ReactionNetwork, u: &Direction) -> Option<Reaction> {
    let mut effective: Vec<(Reaction, Rat)> = Vec::new();
    for r in net.reactions() {
        let advance = exact::dot(&r.vector(), u.coords());
        if !advance.is_zero() {
            effective.push((r, advance));
        }
    }
    let max_height = effective
        .iter()
        .map(|(r, _)| r.source.dot(u.coords()))
        .max()?;
    effective
        .into_iter()
        .find(|(r, advance)| advance.is_positive() && r.source.dot(u.coords()) == max_height)
        .map(|(r, _)| r)
}

/// Exact single-direction endotacticity test. Vacuously endotactic when no
/// reaction vector meets `u`.
pub fn u_endotactic(net: &ReactionNetwork, u: &Direction) -> Result<EndoVerdict, EndoError> {
    check_direction(net, u)?;
    Ok(match first_violation(net, u) {
        Some(r) => EndoVerdict::violated("single-direction", u.clone(), Some(r)),
        None => EndoVerdict::endotactic("single-direction"),
    })
}

/// Strong variant: `u`-endotactic and the `u`-maximal effective sources reach
/// the `u`-maximum over all sources.
pub fn u_strongly_endotactic(
    net: &ReactionNetwork,
    u: &Direction,
) -> Result<EndoVerdict, EndoError> {
    check_direction(net, u)?;
    if let Some(r) = first_violation(net, u) {
        return Ok(EndoVerdict::violated(
            "single-direction-strong",
            u.clone(),
            Some(r),
        ));
    }
    let mut effective_max: Option<Rat> = None;
    for r in net.reactions() {
        if exact::dot(&r.vector(), u.coords()).is_zero() {
            continue;
        }
        let h = r.source.dot(u.coords());
        if effective_max.as_ref().is_none_or(|m| h > *m) {
            effective_max = Some(h);
        }
    }
    let overall_max = net
        .sources()
        .iter()
        .map(|s| s.dot(u.coords()))
        .max()
        .expect("nonempty network has sources");
    let ok = effective_max.as_ref() == Some(&overall_max);
    Ok(if ok {
        EndoVerdict::endotactic("single-direction-strong")
    } else {
        EndoVerdict::violated("single-direction-strong", u.clone(), None)
    })
}

/// The signed indicator vectors `±Σ_{i∈I} e_i` over nonempty `I ⊆ [d]`:
/// `2(2^d − 1)` directions, positive block first, subsets enumerated by
/// binary counter. Dimension is capped at 16.
pub fn indicator_test_set(dim: usize) -> Result<Vec<Direction>, EndoError> {
    if dim == 0 || dim > 16 {
        return Err(EndoError::TestSetDimension(dim));
    }
    let mut out = Vec::with_capacity(2 * ((1usize << dim) - 1));
    for sign in [1i64, -1] {
        for mask in 1u32..(1u32 << dim) {
            let coords = (0..dim)
                .map(|i| {
                    if mask & (1 << i) != 0 {
                        exact::int(sign)
                    } else {
                        Rat::zero()
                    }
                })
                .collect();
            out.push(Direction(coords));
        }
    }
    Ok(out)
}

/// First violation over an ordered direction list, evaluated on `jobs`
/// threads. The reported witness is the first in list order regardless of
/// scheduling.
fn scan_directions(
    net: &ReactionNetwork,
    dirs: &[Direction],
    jobs: usize,
) -> Option<(usize, Reaction)> {
    let jobs = jobs.max(1).min(dirs.len().max(1));
    if jobs == 1 {
        return dirs
            .iter()
            .enumerate()
            .find_map(|(i, u)| first_violation(net, u).map(|r| (i, r)));
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|t| {
                scope.spawn(move || {
                    dirs.iter()
                        .enumerate()
                        .skip(t)
                        .step_by(jobs)
                        .find_map(|(i, u)| first_violation(net, u).map(|r| (i, r)))
                })
            })
            .collect();
        handles
            .into_iter()
            .filter_map(|h| h.join().expect("scan thread panicked"))
            .min_by_key(|(i, _)| *i)
    })
}

/// Every violating `(direction, reaction)` pair over the indicator test set,
/// in canonical order. Diagnostic companion to [`first_order_endotactic`].
pub fn indicator_violations(
    net: &ReactionNetwork,
    jobs: usize,
) -> Result<Vec<(Direction, Reaction)>, EndoError> {
    first_order_preconditions(net)?;
    let dirs = indicator_test_set(net.dim())?;
    let jobs = jobs.max(1).min(dirs.len());
    let collect = |chunk: &[(usize, &Direction)]| -> Vec<(usize, Reaction)> {
        chunk
            .iter()
            .filter_map(|(i, u)| first_violation(net, u).map(|r| (*i, r)))
            .collect()
    };
    let indexed: Vec<(usize, &Direction)> = dirs.iter().enumerate().collect();
    let mut found: Vec<(usize, Reaction)> = if jobs == 1 {
        collect(&indexed)
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = indexed
                .chunks(indexed.len().div_ceil(jobs))
                .map(|chunk| scope.spawn(move || collect(chunk)))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("scan thread panicked"))
                .collect()
        })
    };
    found.sort_by_key(|(i, _)| *i);
    Ok(found
        .into_iter()
        .map(|(i, r)| (dirs[i].clone(), r))
        .collect())
}

fn first_order_preconditions(net: &ReactionNetwork) -> Result<(), EndoError> {
    if net.is_empty() {
        return Err(EndoError::EmptyNetwork);
    }
    for v in net.vertices() {
        if !v.is_integer() || !v.is_nonnegative() {
            return Err(EndoError::NonIntegerComplex(v.render(net.species())));
        }
    }
    if let Some(bad) = net
        .sources()
        .into_iter()
        .find(|s| s.l1_norm() > exact::int(1))
    {
        return Err(EndoError::HigherOrderSource(bad.render(net.species())));
    }
    Ok(())
}

/// Structural consequences recorded when the indicator scan passes. The
/// certificate is what downstream kinetics requires before it will apply
/// equilibrium and stability formulas.
#[derive(Clone, Debug)]
pub struct Certificate {
    network: ReactionNetwork,
    /// True when the whole network is the component of the zero complex, in
    /// which case the network is strongly endotactic.
    pub strongly_endotactic: bool,
    /// Strong endotacticity of the zero-complex component, checked over the
    /// indicator directions that meet its stoichiometric subspace. `None`
    /// when that component is empty.
    pub zero_part_strongly_endotactic: Option<bool>,
    /// The remainder is weakly reversible with deficiency zero.
    pub remainder_wrdz: bool,
    /// The zero-complex component and the remainder touch disjoint species.
    pub disjoint_species_supports: bool,
}

impl Certificate {
    pub fn network(&self) -> &ReactionNetwork {
        &self.network
    }

    pub fn covers(&self, net: &ReactionNetwork) -> bool {
        self.network == *net
    }
}

#[derive(Clone, Debug)]
pub struct FirstOrderAnalysis {
    pub verdict: EndoVerdict,
    /// Present exactly when the verdict is `Endotactic`.
    pub certificate: Option<Certificate>,
}

/// Complete endotacticity decision for first-order networks embedded in the
/// nonnegative integer lattice, by scanning the indicator test set.
pub fn first_order_endotactic(net: &ReactionNetwork) -> Result<FirstOrderAnalysis, EndoError> {
    first_order_endotactic_jobs(net, 1)
}

/// As [`first_order_endotactic`], with the direction scan spread over
/// `jobs` threads.
pub fn first_order_endotactic_jobs(
    net: &ReactionNetwork,
    jobs: usize,
) -> Result<FirstOrderAnalysis, EndoError> {
    first_order_preconditions(net)?;
    let dirs = indicator_test_set(net.dim())?;
    if let Some((i, reaction)) = scan_directions(net, &dirs, jobs) {
        return Ok(FirstOrderAnalysis {
            verdict: EndoVerdict::violated("indicator-scan", dirs[i].clone(), Some(reaction)),
            certificate: None,
        });
    }
    // A passing scan is only conclusive without redundant species that still
    // occur in complexes; species absent from every complex are harmless.
    let redundant = net.redundant_species();
    if let Some(&i) = redundant.coupled.first() {
        return Err(EndoError::CoupledRedundantSpecies(net.species()[i].clone()));
    }
    let certificate = build_certificate(net)?;
    Ok(FirstOrderAnalysis {
        verdict: EndoVerdict::endotactic("indicator-scan"),
        certificate: Some(certificate),
    })
}

fn build_certificate(net: &ReactionNetwork) -> Result<Certificate, EndoError> {
    let (zero_part, remainder) = zero_component_split(net);
    let disjoint_species_supports = zero_part
        .species_support()
        .is_disjoint(&remainder.species_support());
    let remainder_wrdz =
        remainder.is_empty() || (is_weakly_reversible(&remainder) && deficiency(&remainder) == 0);
    let zero_part_strongly_endotactic = if zero_part.is_empty() {
        None
    } else {
        Some(strongly_endotactic_over_indicators(&zero_part)?)
    };
    if !disjoint_species_supports {
        return Err(EndoError::Internal(
            "indicator scan passed but species supports overlap".into(),
        ));
    }
    if !remainder_wrdz {
        return Err(EndoError::Internal(
            "indicator scan passed but the remainder is not weakly reversible with deficiency zero"
                .into(),
        ));
    }
    if zero_part_strongly_endotactic == Some(false) {
        return Err(EndoError::Internal(
            "indicator scan passed but the zero component is not strongly endotactic".into(),
        ));
    }
    Ok(Certificate {
        network: net.clone(),
        strongly_endotactic: remainder.is_empty(),
        zero_part_strongly_endotactic,
        remainder_wrdz,
        disjoint_species_supports,
    })
}

/// Strong endotacticity over the indicator directions that are not
/// orthogonal to the network's stoichiometric subspace.
fn strongly_endotactic_over_indicators(net: &ReactionNetwork) -> Result<bool, EndoError> {
    let basis = stoichiometric_subspace(net);
    for u in indicator_test_set(net.dim())? {
        if basis.orthogonal_to(u.coords()) {
            continue;
        }
        if !u_strongly_endotactic(net, &u)?.is_endotactic() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn spanning_direction(net: &ReactionNetwork) -> Result<Direction, EndoError> {
    let basis = stoichiometric_subspace(net);
    if basis.dim() != 1 {
        return Err(EndoError::NotOneDimensional(basis.dim()));
    }
    Direction::new(exact::canonical_ray(&basis.vectors[0]))
}

/// Complete decision for one-dimensional networks: every direction outside
/// the orthogonal complement is a multiple of the spanning vector, so the
/// two signed spanning directions decide.
pub fn one_dim_endotactic(net: &ReactionNetwork) -> Result<EndoVerdict, EndoError> {
    if net.is_empty() {
        return Err(EndoError::EmptyNetwork);
    }
    let v = spanning_direction(net)?;
    for u in [v.clone(), v.negated()] {
        if let Some(r) = first_violation(net, &u) {
            return Ok(EndoVerdict::violated("one-dimensional", u, Some(r)));
        }
    }
    Ok(EndoVerdict::endotactic("one-dimensional"))
}

/// Strong variant of [`one_dim_endotactic`].
pub fn one_dim_strongly_endotactic(net: &ReactionNetwork) -> Result<EndoVerdict, EndoError> {
    if net.is_empty() {
        return Err(EndoError::EmptyNetwork);
    }
    let v = spanning_direction(net)?;
    for u in [v.clone(), v.negated()] {
        let verdict = u_strongly_endotactic(net, &u)?;
        if !verdict.is_endotactic() {
            return Ok(EndoVerdict {
                method: "one-dimensional-strong",
                ..verdict
            });
        }
    }
    Ok(EndoVerdict::endotactic("one-dimensional-strong"))
}

/// Whether every cross-component reaction has a parallel continuation from
/// its target that is not undone by an explicit reverse edge.
fn parallel_continuation_holds(net: &ReactionNetwork, lir: &ReactionNetwork) -> bool {
    lir.reactions().all(|r| {
        let step = r.vector();
        net.reactions().any(|next| {
            next.source == r.target
                && exact::parallel(&next.vector(), &step)
                && net.rate(&next.target, &next.source).is_none()
        })
    })
}

/// One-sided endotacticity test for networks of any order. Returns
/// `Endotactic` when one of the sufficient conditions fires and `Unknown`
/// otherwise; it never claims a violation.
///
/// Conditions, in order: (a) weak reversibility; (b) every cross-component
/// reaction continues in a parallel, non-reversed reaction; (c) the
/// cross-component subgraph itself is decidable (one-dimensional or first
/// order) and endotactic, which transfers to the whole network.
pub fn sufficient_endotactic(net: &ReactionNetwork) -> Result<EndoVerdict, EndoError> {
    if net.is_empty() {
        return Err(EndoError::EmptyNetwork);
    }
    if is_weakly_reversible(net) {
        return Ok(EndoVerdict::endotactic("weakly-reversible"));
    }
    let lir = cross_component_subgraph(net);
    debug_assert!(!lir.is_empty());
    if parallel_continuation_holds(net, &lir) {
        return Ok(EndoVerdict::endotactic("parallel-continuation"));
    }
    if stoichiometric_subspace(&lir).dim() == 1 {
        if one_dim_endotactic(&lir)?.is_endotactic() {
            return Ok(EndoVerdict::endotactic("cross-component-subgraph"));
        }
    } else if let Ok(analysis) = first_order_endotactic(&lir) {
        if analysis.verdict.is_endotactic() {
            return Ok(EndoVerdict::endotactic("cross-component-subgraph"));
        }
    }
    Ok(EndoVerdict::unknown("inconclusive"))
}

/// Convenience: parses species-index directions like `(0,1,2,2,2)`.
pub fn direction_from_i64(coords: &[i64]) -> Result<Direction, EndoError> {
    Direction::new(coords.iter().map(|&c| exact::int(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_network;

    fn net(text: &str) -> ReactionNetwork {
        parse_network(text).expect("parse").network
    }

    fn dir(coords: &[i64]) -> Direction {
        direction_from_i64(coords).unwrap()
    }

    fn intro_network() -> ReactionNetwork {
        net("species S1 S2 S3 S4 S5\n\
             S2 -> S1 [2]; S1 -> 0 [2]; 0 -> S1 + S2 [2]\n\
             S3 -> S4 [1]; S4 -> S5 [1]; S5 -> S3 [2]")
    }

    #[test]
    fn single_direction_decay_and_birth() {
        let decay = net("S1 -> 0 [1]");
        assert!(u_endotactic(&decay, &dir(&[1])).unwrap().is_endotactic());
        let v = u_endotactic(&decay, &dir(&[-1])).unwrap();
        assert_eq!(v.status, EndoStatus::Violated);
        let w = v.witness.unwrap();
        assert_eq!(w.reaction.unwrap().source.as_unit(), Some(0));

        let birth = net("0 -> S1 [1]");
        assert!(u_endotactic(&birth, &dir(&[-1])).unwrap().is_endotactic());
        assert_eq!(
            u_endotactic(&birth, &dir(&[1])).unwrap().status,
            EndoStatus::Violated
        );
    }

    #[test]
    fn orthogonal_direction_is_vacuous() {
        let n = net("S1 -> S2 [1]; S2 -> S1 [1]");
        // (1,1) is orthogonal to every reaction vector.
        assert!(u_endotactic(&n, &dir(&[1, 1])).unwrap().is_endotactic());
    }

    #[test]
    fn witness_replays() {
        let n = net("S1 -> S2 [1]; S2 -> 0 [1]; 0 -> 2 S2 [1]");
        let analysis = first_order_endotactic(&n).unwrap();
        assert_eq!(analysis.verdict.status, EndoStatus::Violated);
        let w = analysis.verdict.witness.unwrap();
        let replay = u_endotactic(&n, &w.direction).unwrap();
        assert_eq!(replay.status, EndoStatus::Violated);
    }

    #[test]
    fn strong_endotacticity_examples() {
        // 0 -> S1 <- 2S1 together with 3S1 <-> 3S1+S2 is endotactic but not
        // (1,0)-strongly endotactic.
        let g = net("0 -> S1 [1]; 2 S1 -> S1 [1]; 3 S1 <-> 3 S1 + S2 [1]");
        let u = dir(&[1, 0]);
        assert!(u_endotactic(&g, &u).unwrap().is_endotactic());
        let strong = u_strongly_endotactic(&g, &u).unwrap();
        assert_eq!(strong.status, EndoStatus::Violated);
        let w = strong.witness.unwrap();
        assert!(w.reaction.is_none());
        assert_eq!(w.direction, u);

        // In one dimension the same inner pair is strongly endotactic both
        // ways.
        let inner = net("0 -> S1 [1]; 2 S1 -> S1 [1]");
        assert!(u_strongly_endotactic(&inner, &dir(&[1]))
            .unwrap()
            .is_endotactic());
        assert!(u_strongly_endotactic(&inner, &dir(&[-1]))
            .unwrap()
            .is_endotactic());
    }

    #[test]
    fn intro_network_is_not_strongly_endotactic() {
        let g = intro_network();
        let u = dir(&[0, 1, 2, 2, 2]);
        assert!(u_endotactic(&g, &u).unwrap().is_endotactic());
        assert_eq!(
            u_strongly_endotactic(&g, &u).unwrap().status,
            EndoStatus::Violated
        );
    }

    #[test]
    fn indicator_test_set_shape() {
        let d1 = indicator_test_set(1).unwrap();
        assert_eq!(d1.len(), 2);
        assert_eq!(d1[0], dir(&[1]));
        assert_eq!(d1[1], dir(&[-1]));

        let d2 = indicator_test_set(2).unwrap();
        let expected: Vec<Direction> = [
            [1, 0],
            [0, 1],
            [1, 1],
            [-1, 0],
            [0, -1],
            [-1, -1],
        ]
        .iter()
        .map(|c| dir(c))
        .collect();
        assert_eq!(d2, expected);

        assert_eq!(indicator_test_set(5).unwrap().len(), 62);
        assert!(indicator_test_set(0).is_err());
        assert!(indicator_test_set(17).is_err());
    }

    #[test]
    fn intro_network_certified_endotactic() {
        let analysis = first_order_endotactic(&intro_network()).unwrap();
        assert!(analysis.verdict.is_endotactic());
        let cert = analysis.certificate.unwrap();
        assert!(cert.remainder_wrdz);
        assert!(cert.disjoint_species_supports);
        assert_eq!(cert.zero_part_strongly_endotactic, Some(true));
        assert!(!cert.strongly_endotactic);
    }

    #[test]
    fn first_order_negative_fixture() {
        let g = net("S1 -> S2 [1]; S2 -> 0 [1]; 0 -> 2 S2 [1]");
        let analysis = first_order_endotactic(&g).unwrap();
        assert_eq!(analysis.verdict.status, EndoStatus::Violated);
        assert!(analysis.certificate.is_none());
    }

    #[test]
    fn chain_with_fan_is_strongly_endotactic() {
        let g = net("S3 -> S2 [1]; S2 -> S1 [1]; S1 -> 0 [1]; 0 -> 2 S3 [1]");
        let analysis = first_order_endotactic(&g).unwrap();
        assert!(analysis.verdict.is_endotactic());
        let cert = analysis.certificate.unwrap();
        assert!(cert.strongly_endotactic);
        assert_eq!(cert.zero_part_strongly_endotactic, Some(true));
    }

    #[test]
    fn first_order_preconditions_enforced() {
        let higher = net("2 S1 -> S1 [1]");
        assert!(matches!(
            first_order_endotactic(&higher),
            Err(EndoError::HigherOrderSource(_))
        ));
        let fractional = net("1/2 S1 -> S1 [1]");
        assert!(matches!(
            first_order_endotactic(&fractional),
            Err(EndoError::NonIntegerComplex(_))
        ));
        let empty = ReactionNetwork::empty(vec!["S1".into()]);
        assert_eq!(
            first_order_endotactic(&empty).unwrap_err(),
            EndoError::EmptyNetwork
        );
    }

    #[test]
    fn one_dim_rules() {
        let inner = net("0 -> S1 [1]; 2 S1 -> S1 [1]");
        assert!(one_dim_strongly_endotactic(&inner).unwrap().is_endotactic());

        let quad = net("2 S2 -> S1 + S2 [1]; 2 S1 -> S1 + S2 [1]");
        assert!(one_dim_endotactic(&quad).unwrap().is_endotactic());

        let birth = net("0 -> S1 [1]");
        assert_eq!(
            one_dim_endotactic(&birth).unwrap().status,
            EndoStatus::Violated
        );

        let two_dim = net("0 -> S1 [1]; 0 -> S2 [1]");
        assert!(matches!(
            one_dim_endotactic(&two_dim),
            Err(EndoError::NotOneDimensional(2))
        ));
    }

    #[test]
    fn sufficient_conditions() {
        // Ladder with a return edge: decided by the parallel continuation.
        let ladder = net("0 -> S1 [1]; S1 -> 2 S1 [1]; 2 S1 -> 3 S1 [1]; 3 S1 -> S1 [1]");
        let v = sufficient_endotactic(&ladder).unwrap();
        assert!(v.is_endotactic());
        assert_eq!(v.method, "parallel-continuation");

        // Weakly reversible shortcut.
        let cycle = net("S1 -> S2 [1]; S2 -> S1 [1]");
        assert_eq!(
            sufficient_endotactic(&cycle).unwrap().method,
            "weakly-reversible"
        );

        // Four-species network decided through its cross-component subgraph.
        let quad = net(
            "2 S2 -> S1 + S2 [1]; 2 S1 -> S1 + S2 [1]; S3 + S4 -> 2 S2 [1]; \
             2 S3 -> S3 + S4 [1]; 2 S2 -> 2 S3 [1]; S1 + S2 -> S3 [1]; \
             2 S1 <-> S2 + S3 [1]; S3 -> S4 [1]; S4 -> S1 + S2 [1]",
        );
        let v = sufficient_endotactic(&quad).unwrap();
        assert!(v.is_endotactic());
        assert_eq!(v.method, "cross-component-subgraph");

        // Reversible ladder tail: every route fails, honestly unknown even
        // though the network is endotactic.
        let unknown = net("0 -> S1 [1]; S1 <-> 2 S1 [1]");
        let v = sufficient_endotactic(&unknown).unwrap();
        assert_eq!(v.status, EndoStatus::Unknown);
        // The same network is decided completely by the one-dimensional rule.
        assert!(one_dim_endotactic(&unknown).unwrap().is_endotactic());
    }

    #[test]
    fn minimality_of_the_two_signed_directions() {
        // Each of the two one-species networks passes exactly one of the two
        // signed indicator directions.
        let decay = net("S1 -> 0 [1]");
        let birth = net("0 -> S1 [1]");
        let dirs = indicator_test_set(1).unwrap();
        let passes = |n: &ReactionNetwork| -> Vec<bool> {
            dirs.iter()
                .map(|u| u_endotactic(n, u).unwrap().is_endotactic())
                .collect()
        };
        assert_eq!(passes(&decay), [true, false]);
        assert_eq!(passes(&birth), [false, true]);
    }

    #[test]
    fn coupled_redundancy_rejected_padding_tolerated() {
        // A species present in a complex but never changed always trips the
        // scan itself in a first-order network (the all-ones direction), so
        // the verdict stays sound.
        let coupled = net("S1 -> S1 + S2 [1]; S2 -> 0 [1]");
        let analysis = first_order_endotactic(&coupled).unwrap();
        assert_eq!(analysis.verdict.status, EndoStatus::Violated);
        // A padding species (declared, never used) is harmless.
        let padded = net("species S1 S2\n0 <-> S1 [1]");
        assert!(first_order_endotactic(&padded).unwrap().verdict.is_endotactic());
    }

    #[test]
    fn parallel_scan_matches_sequential() {
        let g = net("S1 -> S2 [1]; S2 -> 0 [1]; 0 -> 2 S2 [1]");
        let seq = first_order_endotactic_jobs(&g, 1).unwrap();
        let par = first_order_endotactic_jobs(&g, 4).unwrap();
        let (a, b) = (seq.verdict.witness.unwrap(), par.verdict.witness.unwrap());
        assert_eq!(a.direction, b.direction);
        assert_eq!(a.reaction, b.reaction);
    }

    #[test]
    fn all_witnesses_collects_every_pair() {
        let g = net("0 -> S1 [1]");
        let witnesses = indicator_violations(&g, 2).unwrap();
        assert_eq!(witnesses.len(), 1);
        assert_eq!(witnesses[0].0, dir(&[1]));
    }
}
