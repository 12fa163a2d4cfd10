//! Linear-ODE data for first-order mass-action systems.
//!
//! A first-order network defines `ẋ = xA + b` with the average flux matrix
//! `A` (Metzler) and the nonnegative influx vector `b`. This module builds
//! that data exactly, analyzes the spectrum, computes per-component spanning
//! tree constants through the weighted Laplacian (Kirchhoff), constructs the
//! monomolecular strong realization, and assembles the unique equilibrium of
//! each stoichiometric compatibility class.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::endo::Certificate;
use crate::exact::{self, Rat};
use crate::graph::{
    strongly_connected_components, weakly_connected_components, zero_component_split, Complex,
    Reaction, ReactionNetwork,
};

#[derive(Debug, Error, PartialEq)]
pub enum KineticsError {
    #[error("network is not first order: source {0} has order greater than one")]
    HigherOrderSource(String),
    #[error("complex {0} is not a nonnegative integer vector")]
    NonIntegerComplex(String),
    #[error("operation requires a nonempty network")]
    EmptyNetwork,
    #[error("eigenvalue computation failed to converge")]
    EigenFailed,
    #[error("zero eigenvalue multiplicity {found} does not match the {expected} strongly connected components away from the zero complex")]
    SpectralMismatch { expected: usize, found: usize },
    #[error("component vertex {0} is neither the zero complex nor a single species")]
    NonMonomolecularVertex(String),
    #[error("component is not strongly connected")]
    NotStronglyConnected,
    #[error("tree constant for vertex {0} is not positive")]
    NonPositiveTreeConstant(String),
    #[error("certificate was issued for a different network")]
    CertificateMismatch,
    #[error("species {0} is redundant; prune it before equilibrium analysis")]
    RedundantSpecies(String),
    #[error("initial state has {found} components, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("initial state component {0} is negative")]
    NegativeInitial(usize),
    #[error("zero-complex block of the flux matrix is singular")]
    SingularZeroBlock,
    #[error("network does not decompose into Markov components plus a zero-complex part: {0}")]
    NotDecomposable(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// `ẋ = xA + b` for a first-order network, kept both exactly and as floats.
#[derive(Clone, Debug)]
pub struct FluxSystem {
    net: ReactionNetwork,
    a_exact: Vec<Vec<Rat>>,
    b_exact: Vec<Rat>,
    a: DMatrix<f64>,
    b: Vec<f64>,
}

impl FluxSystem {
    pub fn network(&self) -> &ReactionNetwork {
        &self.net
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn a_exact(&self) -> &[Vec<Rat>] {
        &self.a_exact
    }

    pub fn b_exact(&self) -> &[Rat] {
        &self.b_exact
    }
}

fn first_order_checks(net: &ReactionNetwork) -> Result<(), KineticsError> {
    for v in net.vertices() {
        if !v.is_integer() || !v.is_nonnegative() {
            return Err(KineticsError::NonIntegerComplex(v.render(net.species())));
        }
    }
    if let Some(bad) = net
        .sources()
        .into_iter()
        .find(|s| s.l1_norm() > exact::int(1))
    {
        return Err(KineticsError::HigherOrderSource(bad.render(net.species())));
    }
    Ok(())
}

/// Assembles the average flux matrix and influx vector exactly:
/// `a_ij = Σ_{e_i → y'} κ (y'_j − y_j)` and `b_i = Σ_{0 → y'} κ y'_i`.
pub fn flux_system(net: &ReactionNetwork) -> Result<FluxSystem, KineticsError> {
    first_order_checks(net)?;
    let d = net.dim();
    let mut a_exact = vec![vec![Rat::zero(); d]; d];
    let mut b_exact = vec![Rat::zero(); d];
    for r in net.reactions() {
        if r.source.is_zero() {
            for j in 0..d {
                b_exact[j] += &r.rate * r.target.coord(j);
            }
        } else {
            let i = r
                .source
                .as_unit()
                .expect("first-order nonzero sources are single species");
            let v = r.vector();
            for j in 0..d {
                if !v[j].is_zero() {
                    a_exact[i][j] += &r.rate * &v[j];
                }
            }
        }
    }
    for (i, row) in a_exact.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j && x.is_negative() {
                return Err(KineticsError::Internal(
                    "flux matrix has a negative off-diagonal entry".into(),
                ));
            }
        }
    }
    if b_exact.iter().any(Rat::is_negative) {
        return Err(KineticsError::Internal("negative influx entry".into()));
    }
    let a = DMatrix::from_fn(d, d, |i, j| exact::to_f64(&a_exact[i][j]));
    let b = b_exact.iter().map(exact::to_f64).collect();
    Ok(FluxSystem {
        net: net.clone(),
        a_exact,
        b_exact,
        a,
        b,
    })
}

/// Weakly chained diagonal dominance: every row diagonally dominant, and
/// every non-strictly-dominant row reaches a strictly dominant one through
/// the digraph of nonzero off-diagonal entries. Implies nonsingularity for
/// Metzler matrices.
pub fn is_wcdd(a: &DMatrix<f64>) -> bool {
    let n = a.nrows();
    if n != a.ncols() || n == 0 {
        return false;
    }
    let mut sdd = vec![false; n];
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
        let diag = a[(i, i)].abs();
        if diag < off {
            return false;
        }
        sdd[i] = diag > off;
    }
    let mut ok = sdd.clone();
    // Propagate backwards: a row chains to an SDD row through nonzero
    // off-diagonals.
    loop {
        let mut changed = false;
        for i in 0..n {
            if ok[i] {
                continue;
            }
            for j in 0..n {
                if j != i && a[(i, j)] != 0.0 && ok[j] {
                    ok[i] = true;
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }
    ok.into_iter().all(|x| x)
}

/// Spectrum of the flux matrix together with the graph quantities that
/// police it.
#[derive(Clone, Debug)]
pub struct SpectralReport {
    /// Eigenvalues as (re, im), sorted by real then imaginary part.
    pub eigenvalues: Vec<(f64, f64)>,
    /// Largest real part.
    pub spectral_abscissa: f64,
    /// Negative of the largest real part over nonzero eigenvalues; `None`
    /// when every eigenvalue is classified as zero.
    pub rho: Option<f64>,
    /// Maximum number of sources over the weakly connected components.
    pub n: usize,
    /// Eigenvalues with |re| and |im| both at most the zero threshold.
    pub zero_multiplicity: usize,
}

/// Threshold below which an eigenvalue is classified as zero.
pub const ZERO_EIGENVALUE_TOLERANCE: f64 = 1e-9;

impl SpectralReport {
    pub fn to_json(&self) -> Value {
        json!({
            "eigenvalues": self
                .eigenvalues
                .iter()
                .map(|(re, im)| json!({"re": re, "im": im}))
                .collect::<Vec<_>>(),
            "r": self.spectral_abscissa,
            "rho": self.rho,
            "n": self.n,
            "zero_multiplicity": self.zero_multiplicity,
        })
    }
}

/// Dense eigenvalue analysis of the flux matrix. When a certificate is
/// supplied, the numerically found zero multiplicity must equal the number
/// of strongly connected components away from the zero complex; disagreement
/// is an error rather than a silent repair.
pub fn spectral_report(
    sys: &FluxSystem,
    certificate: Option<&Certificate>,
) -> Result<SpectralReport, KineticsError> {
    if let Some(cert) = certificate {
        if !cert.covers(&sys.net) {
            return Err(KineticsError::CertificateMismatch);
        }
    }
    let d = sys.dim();
    let mut eigenvalues: Vec<(f64, f64)> = if d == 0 {
        Vec::new()
    } else {
        let schur = nalgebra::linalg::Schur::try_new(sys.a.clone(), 1e-14, 100_000)
            .ok_or(KineticsError::EigenFailed)?;
        schur
            .complex_eigenvalues()
            .iter()
            .map(|c| (c.re, c.im))
            .collect()
    };
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let spectral_abscissa = eigenvalues
        .iter()
        .map(|(re, _)| *re)
        .fold(f64::NEG_INFINITY, f64::max);
    let is_zero =
        |(re, im): &(f64, f64)| re.abs() <= ZERO_EIGENVALUE_TOLERANCE && im.abs() <= ZERO_EIGENVALUE_TOLERANCE;
    let zero_multiplicity = eigenvalues.iter().filter(|e| is_zero(e)).count();
    let rho = eigenvalues
        .iter()
        .filter(|e| !is_zero(e))
        .map(|(re, _)| *re)
        .fold(None, |acc: Option<f64>, re| {
            Some(acc.map_or(re, |m| m.max(re)))
        })
        .map(|m| -m);
    let sources = sys.net.sources();
    let n = weakly_connected_components(&sys.net)
        .blocks
        .iter()
        .map(|block| block.iter().filter(|v| sources.contains(v)).count())
        .max()
        .unwrap_or(0);
    if let Some(cert) = certificate {
        let (_, remainder) = zero_component_split(cert.network());
        let expected = strongly_connected_components(&remainder).len();
        if expected != zero_multiplicity {
            return Err(KineticsError::SpectralMismatch {
                expected,
                found: zero_multiplicity,
            });
        }
    }
    Ok(SpectralReport {
        eigenvalues,
        spectral_abscissa,
        rho,
        n,
        zero_multiplicity,
    })
}

/// Orders a component's vertices canonically: the zero complex first, then
/// single species by index. Errors on anything else.
fn monomolecular_order(
    component: &BTreeSet<Complex>,
    species: &[String],
) -> Result<Vec<Complex>, KineticsError> {
    let mut zero = Vec::new();
    let mut units: Vec<(usize, Complex)> = Vec::new();
    for v in component {
        if v.is_zero() {
            zero.push(v.clone());
        } else if let Some(i) = v.as_unit() {
            units.push((i, v.clone()));
        } else {
            return Err(KineticsError::NonMonomolecularVertex(v.render(species)));
        }
    }
    units.sort_by_key(|(i, _)| *i);
    Ok(zero.into_iter().chain(units.into_iter().map(|(_, v)| v)).collect())
}

/// Weighted Laplacian of the subgraph induced on `component`:
/// `L_vw = −κ(v→w)` off the diagonal and row sums zero. Vertices must be the
/// zero complex or single species; rows/columns are ordered zero first, then
/// by species index.
pub fn laplacian(
    net: &ReactionNetwork,
    component: &BTreeSet<Complex>,
) -> Result<DMatrix<f64>, KineticsError> {
    let order = monomolecular_order(component, net.species())?;
    let n = order.len();
    let mut l = DMatrix::zeros(n, n);
    for (i, v) in order.iter().enumerate() {
        for (j, w) in order.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some(rate) = net.rate(v, w) {
                let k = exact::to_f64(rate);
                l[(i, j)] = -k;
                l[(i, i)] += k;
            }
        }
    }
    Ok(l)
}

/// Spanning-tree constants of a strongly connected component: `c_v` is the
/// (v,v) cofactor of the component Laplacian, the total weight of spanning
/// trees oriented toward `v`. All positive on a strongly connected weighted
/// digraph; normalized they form the stationary distribution of the
/// associated continuous-time Markov chain.
#[derive(Clone, Debug)]
pub struct TreeConstants {
    pub vertices: Vec<Complex>,
    pub weights: Vec<f64>,
}

impl TreeConstants {
    pub fn normalized(&self) -> Vec<f64> {
        let total: f64 = self.weights.iter().sum();
        self.weights.iter().map(|w| w / total).collect()
    }
}

pub fn tree_constants(
    net: &ReactionNetwork,
    component: &BTreeSet<Complex>,
) -> Result<TreeConstants, KineticsError> {
    let induced = net.filter_edges(|s, t| component.contains(s) && component.contains(t));
    let scc = strongly_connected_components(&induced);
    let connected = scc.len() == 1 && scc.blocks[0] == *component;
    let single_vertex = component.len() == 1 && induced.is_empty();
    if !connected && !single_vertex {
        return Err(KineticsError::NotStronglyConnected);
    }
    let order = monomolecular_order(component, net.species())?;
    let l = laplacian(&induced, component)?;
    let n = order.len();
    let mut weights = Vec::with_capacity(n);
    for v in 0..n {
        let minor = l.clone().remove_row(v).remove_column(v);
        let c = if minor.nrows() == 0 {
            1.0
        } else {
            minor.determinant()
        };
        if c <= 0.0 {
            return Err(KineticsError::NonPositiveTreeConstant(
                order[v].render(net.species()),
            ));
        }
        weights.push(c);
    }
    Ok(TreeConstants {
        vertices: order,
        weights,
    })
}

/// Monomolecular strong realization: keeps every reaction with a
/// single-species source and replaces the zeroth-order reactions by the fan
/// `0 → S_k` with `κ'_k = Σ_{0→z} z_k κ_{0→z}` (edges with zero weight are
/// omitted; connectivity, the stoichiometric span, and the deficiency are
/// unaffected because such targets are reachable through single-species
/// steps). The result has the same kinetic flux as the input at every
/// source, exactly; it is weakly reversible with deficiency zero precisely
/// when the input network is endotactic.
pub fn monomolecular_realization(
    net: &ReactionNetwork,
) -> Result<ReactionNetwork, KineticsError> {
    if net.is_empty() {
        return Err(KineticsError::EmptyNetwork);
    }
    first_order_checks(net)?;
    let d = net.dim();
    let mut reactions: Vec<Reaction> = net
        .reactions()
        .filter(|r| !r.source.is_zero())
        .collect();
    let mut fan = vec![Rat::zero(); d];
    for r in net.reactions().filter(|r| r.source.is_zero()) {
        for k in 0..d {
            fan[k] += &r.rate * r.target.coord(k);
        }
    }
    for (k, weight) in fan.into_iter().enumerate() {
        if weight.is_positive() {
            reactions.push(Reaction::new(
                Complex::zero(d),
                Complex::unit(d, k),
                weight,
            ));
        }
    }
    ReactionNetwork::new(net.species().to_vec(), reactions)
        .map_err(|e| KineticsError::Internal(e.to_string()))
}

/// Per-source kinetic flux `Σ κ (y' − y)`, exact. Two networks are strong
/// realizations of each other when these agree at every source.
pub fn source_flux(net: &ReactionNetwork, source: &Complex) -> Vec<Rat> {
    let mut flux = vec![Rat::zero(); net.dim()];
    for r in net.reactions() {
        if r.source == *source {
            for (j, v) in r.vector().into_iter().enumerate() {
                flux[j] += &r.rate * v;
            }
        }
    }
    flux
}

/// Checks the strong-realization identity between two networks over the
/// union of their sources, exactly.
pub fn is_strong_realization(a: &ReactionNetwork, b: &ReactionNetwork) -> bool {
    if a.species() != b.species() {
        return false;
    }
    let mut sources = a.sources();
    sources.extend(b.sources());
    sources
        .iter()
        .all(|s| source_flux(a, s) == source_flux(b, s))
}

/// Stoichiometric compatibility class of an initial state: either the full
/// orthant (no conserved components) or the list of per-component masses.
#[derive(Clone, Debug, PartialEq)]
pub enum CompatibilityClass {
    FullOrthant,
    Masses(Vec<f64>),
}

impl CompatibilityClass {
    pub fn to_json(&self) -> Value {
        match self {
            CompatibilityClass::FullOrthant => json!({ "full_orthant": true }),
            CompatibilityClass::Masses(m) => json!({ "masses": m }),
        }
    }
}

/// How [`equilibrium`] is authorized to run.
#[derive(Clone, Copy, Debug)]
pub enum EquilibriumMode<'a> {
    /// A passing endotacticity certificate for the same network; uniqueness
    /// and positivity of the equilibrium are then guaranteed per class.
    Certified(&'a Certificate),
    /// No certificate: the structural formula is applied if the network
    /// decomposes, but the theory guarantees nothing and the result is
    /// flagged.
    Forced,
}

#[derive(Clone, Debug)]
pub struct EquilibriumResult {
    pub x_star: Vec<f64>,
    pub class: CompatibilityClass,
    pub positive: bool,
    pub residual: f64,
    /// False for forced runs: uniqueness/positivity are not guaranteed.
    pub certified: bool,
}

impl EquilibriumResult {
    pub fn to_json(&self) -> Value {
        json!({
            "x_star": self.x_star,
            "class": self.class.to_json(),
            "positive": self.positive,
            "residual": self.residual,
            "certified": self.certified,
        })
    }
}

/// Relative bound on the equilibrium residual `‖x*A + b‖₁`.
pub const EQUILIBRIUM_RESIDUAL_TOLERANCE: f64 = 1e-10;

/// The unique equilibrium in the stoichiometric compatibility class of `x0`.
///
/// The class is read off `x0` as one mass per strongly connected component
/// away from the zero complex; the equilibrium is the per-component tree
/// constant distribution scaled by those masses, together with
/// `b (−A₀)⁻¹` on the zero-complex block. Requires a certificate (or
/// [`EquilibriumMode::Forced`], which still needs the same block structure
/// and flags its output as uncertified).
pub fn equilibrium(
    sys: &FluxSystem,
    x0: &[f64],
    mode: EquilibriumMode,
) -> Result<EquilibriumResult, KineticsError> {
    let net = &sys.net;
    let d = sys.dim();
    if x0.len() != d {
        return Err(KineticsError::DimensionMismatch {
            expected: d,
            found: x0.len(),
        });
    }
    if let Some(i) = x0.iter().position(|&x| x < 0.0) {
        return Err(KineticsError::NegativeInitial(i));
    }
    let certified = match mode {
        EquilibriumMode::Certified(cert) => {
            if !cert.covers(net) {
                return Err(KineticsError::CertificateMismatch);
            }
            true
        }
        EquilibriumMode::Forced => false,
    };
    let redundant = net.redundant_species();
    if let Some(&i) = redundant.coupled.first().or(redundant.padding.first()) {
        return Err(KineticsError::RedundantSpecies(net.species()[i].clone()));
    }

    let (zero_part, remainder) = zero_component_split(net);
    let components = strongly_connected_components(&remainder);
    let mut species_seen: BTreeSet<usize> = BTreeSet::new();
    let mut component_species: Vec<(BTreeSet<Complex>, Vec<usize>)> = Vec::new();
    for block in &components.blocks {
        let mut indices = Vec::with_capacity(block.len());
        for v in block {
            let Some(i) = v.as_unit() else {
                return Err(KineticsError::NotDecomposable(format!(
                    "component vertex {} is not a single species",
                    v.render(net.species())
                )));
            };
            if !species_seen.insert(i) {
                return Err(KineticsError::NotDecomposable(format!(
                    "species {} occurs in two components",
                    net.species()[i]
                )));
            }
            indices.push(i);
        }
        // Closed under the dynamics: no edges leaving the block.
        for r in remainder.reactions() {
            if block.contains(&r.source) && !block.contains(&r.target) {
                return Err(KineticsError::NotDecomposable(format!(
                    "reaction {} leaves its component",
                    r.render(net.species())
                )));
            }
        }
        component_species.push((block.clone(), indices));
    }
    let zero_species: Vec<usize> = (0..d).filter(|i| !species_seen.contains(i)).collect();
    for &i in &zero_species {
        let unit = Complex::unit(d, i);
        if !zero_part.vertices().contains(&unit) {
            return Err(KineticsError::NotDecomposable(format!(
                "species {} belongs to no component and is not in the zero-complex part",
                net.species()[i]
            )));
        }
    }

    let mut x_star = vec![0.0; d];
    let mut masses = Vec::with_capacity(component_species.len());
    for (block, indices) in &component_species {
        let mass: f64 = indices.iter().map(|&i| x0[i]).sum();
        masses.push(mass);
        let trees = tree_constants(net, block)?;
        let total: f64 = trees.weights.iter().sum();
        for (v, w) in trees.vertices.iter().zip(&trees.weights) {
            let i = v.as_unit().expect("component vertices are single species");
            x_star[i] = mass * w / total;
        }
    }
    if !zero_species.is_empty() {
        let m = zero_species.len();
        let a0 = DMatrix::from_fn(m, m, |r, c| sys.a[(zero_species[r], zero_species[c])]);
        let b0 = DVector::from_fn(m, |r, _| sys.b[zero_species[r]]);
        // Row convention: x(−A₀) = b₀ transposes to (−A₀)ᵀ xᵀ = b₀ᵀ.
        let lu = nalgebra::linalg::LU::new((-&a0).transpose());
        let solved = lu.solve(&b0).ok_or(if certified {
            KineticsError::Internal(
                "certified zero-complex block is singular".into(),
            )
        } else {
            KineticsError::SingularZeroBlock
        })?;
        for (r, &i) in zero_species.iter().enumerate() {
            x_star[i] = solved[r];
        }
    }

    let residual = {
        let x = DVector::from_column_slice(&x_star);
        let ax = sys.a.transpose() * &x;
        (0..d).map(|i| (ax[i] + sys.b[i]).abs()).sum::<f64>()
    };
    let b_norm: f64 = sys.b.iter().map(|x| x.abs()).sum();
    let bound = EQUILIBRIUM_RESIDUAL_TOLERANCE * (1.0 + b_norm);
    if residual > bound {
        return Err(KineticsError::Internal(format!(
            "equilibrium residual {residual:.3e} exceeds {bound:.3e}"
        )));
    }

    let class = if component_species.is_empty() {
        CompatibilityClass::FullOrthant
    } else {
        CompatibilityClass::Masses(masses)
    };
    let positive = x_star.iter().all(|&x| x > 0.0);
    Ok(EquilibriumResult {
        x_star,
        class,
        positive,
        residual,
        certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_network;
    use crate::endo::first_order_endotactic;
    use approx::assert_relative_eq;

    fn net(text: &str) -> ReactionNetwork {
        parse_network(text).expect("parse").network
    }

    fn intro_network() -> ReactionNetwork {
        net("species S1 S2 S3 S4 S5\n\
             S2 -> S1 [2]; S1 -> 0 [2]; 0 -> S1 + S2 [2]\n\
             S3 -> S4 [1]; S4 -> S5 [1]; S5 -> S3 [2]")
    }

    #[test]
    fn flux_matrix_examples() {
        let g = net("0 -> S1 [5]; S1 -> 0 [3]; S1 -> S2 [2]; S2 -> S1 [2]; S2 -> 2 S2 [1]; 0 -> S2 [4]");
        let sys = flux_system(&g).unwrap();
        let expect = [[-5.0, 2.0], [2.0, -1.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(sys.a()[(i, j)], expect[i][j]);
            }
        }
        assert_eq!(sys.b(), &[5.0, 4.0]);

        let g = net("0 <-> S1 [1]; S2 -> S1 [2]; S2 -> 2 S2 [1]");
        let sys = flux_system(&g).unwrap();
        assert_eq!(sys.a()[(0, 0)], -1.0);
        assert_eq!(sys.a()[(0, 1)], 0.0);
        assert_eq!(sys.a()[(1, 0)], 2.0);
        assert_eq!(sys.a()[(1, 1)], -1.0);
        assert_eq!(sys.b(), &[1.0, 0.0]);
    }

    #[test]
    fn flux_matrix_of_intro_network_is_block_diagonal() {
        let sys = flux_system(&intro_network()).unwrap();
        let a1 = [[-2.0, 0.0], [2.0, -2.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(sys.a()[(i, j)], a1[i][j]);
            }
        }
        let a2 = [[-1.0, 1.0, 0.0], [0.0, -1.0, 1.0], [2.0, 0.0, -2.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(sys.a()[(i + 2, j + 2)], a2[i][j]);
            }
        }
        for i in 0..2 {
            for j in 2..5 {
                assert_eq!(sys.a()[(i, j)], 0.0);
                assert_eq!(sys.a()[(j, i)], 0.0);
            }
        }
        assert_eq!(sys.b(), &[2.0, 2.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn flux_requires_first_order_integer() {
        assert!(matches!(
            flux_system(&net("2 S1 -> S1 [1]")),
            Err(KineticsError::HigherOrderSource(_))
        ));
        assert!(matches!(
            flux_system(&net("1/2 S1 -> S1 [1]")),
            Err(KineticsError::NonIntegerComplex(_))
        ));
    }

    #[test]
    fn wcdd_examples() {
        let a = DMatrix::from_row_slice(2, 2, &[-2.0, 0.0, 2.0, -2.0]);
        assert!(is_wcdd(&a));
        // Diagonally deficient in row 2, yet Hurwitz: sufficiency, not
        // necessity.
        let b = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 2.0, -1.0]);
        assert!(!is_wcdd(&b));
        let zero = DMatrix::from_row_slice(1, 1, &[0.0]);
        assert!(!is_wcdd(&zero));
    }

    #[test]
    fn spectral_report_of_intro_network() {
        let g = intro_network();
        let cert = first_order_endotactic(&g).unwrap().certificate.unwrap();
        let sys = flux_system(&g).unwrap();
        let report = spectral_report(&sys, Some(&cert)).unwrap();
        assert_eq!(report.n, 3);
        assert_eq!(report.zero_multiplicity, 1);
        assert_relative_eq!(report.spectral_abscissa, 0.0, epsilon = 1e-9);
        assert_relative_eq!(report.rho.unwrap(), 2.0, epsilon = 1e-7);
        let expected = [(-2.0, -1.0), (-2.0, 0.0), (-2.0, 0.0), (-2.0, 1.0), (0.0, 0.0)];
        let mut remaining = report.eigenvalues.clone();
        for (ere, eim) in expected {
            let pos = remaining
                .iter()
                .position(|(re, im)| (re - ere).abs() <= 1e-7 && (im - eim).abs() <= 1e-7)
                .unwrap_or_else(|| panic!("no eigenvalue near ({ere}, {eim}) in {remaining:?}"));
            remaining.remove(pos);
        }
        assert!(remaining.is_empty());
    }

    #[test]
    fn spectral_abscissa_negative_iff_pure_zero_part() {
        let g = net("S3 -> S2 [1]; S2 -> S1 [1]; S1 -> 0 [1]; 0 -> 2 S3 [1]");
        let cert = first_order_endotactic(&g).unwrap().certificate.unwrap();
        let sys = flux_system(&g).unwrap();
        let report = spectral_report(&sys, Some(&cert)).unwrap();
        assert!(report.spectral_abscissa < -ZERO_EIGENVALUE_TOLERANCE);
        assert_eq!(report.zero_multiplicity, 0);
    }

    #[test]
    fn spectral_report_of_cycle() {
        let g = net("S3 -> S4 [1]; S4 -> S5 [1]; S5 -> S3 [2]");
        let cert = first_order_endotactic(&g).unwrap().certificate.unwrap();
        let sys = flux_system(&g).unwrap();
        let report = spectral_report(&sys, Some(&cert)).unwrap();
        assert_relative_eq!(report.spectral_abscissa, 0.0, epsilon = 1e-9);
        assert_eq!(report.zero_multiplicity, 1);
        assert_relative_eq!(report.rho.unwrap(), 2.0, epsilon = 1e-7);
    }

    #[test]
    fn laplacian_of_cycle() {
        let g = net("S3 -> S4 [1]; S4 -> S5 [1]; S5 -> S3 [2]");
        let l = laplacian(&g, &g.vertices()).unwrap();
        let expect = [[1.0, -1.0, 0.0], [0.0, 1.0, -1.0], [-2.0, 0.0, 2.0]];
        for i in 0..3 {
            let mut row_sum = 0.0;
            for j in 0..3 {
                assert_eq!(l[(i, j)], expect[i][j]);
                row_sum += l[(i, j)];
            }
            assert_eq!(row_sum, 0.0);
        }

        let pair = net("0 <-> S1 [1]");
        let l = laplacian(&pair, &pair.vertices()).unwrap();
        assert_eq!(l, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn laplacian_rejects_higher_complexes() {
        let g = net("2 S1 -> S1 [1]");
        assert!(matches!(
            laplacian(&g, &g.vertices()),
            Err(KineticsError::NonMonomolecularVertex(_))
        ));
    }

    #[test]
    fn tree_constants_of_cycle() {
        let g = net("S3 -> S4 [1]; S4 -> S5 [1]; S5 -> S3 [2]");
        let trees = tree_constants(&g, &g.vertices()).unwrap();
        assert_eq!(trees.weights, vec![2.0, 2.0, 1.0]);
        let pi = trees.normalized();
        assert_relative_eq!(pi[0], 0.4);
        assert_relative_eq!(pi[1], 0.4);
        assert_relative_eq!(pi[2], 0.2);
    }

    #[test]
    fn tree_constants_of_two_state_exchange() {
        let g = net("0 -> S1 [3]; S1 -> 0 [5]");
        let trees = tree_constants(&g, &g.vertices()).unwrap();
        // Root 0 collects the edge into it, weight 5; root S1 weight 3.
        assert_eq!(trees.weights, vec![5.0, 3.0]);
    }

    #[test]
    fn tree_constants_need_strong_connectivity() {
        let g = net("S1 -> S2 [1]");
        assert!(matches!(
            tree_constants(&g, &g.vertices()),
            Err(KineticsError::NotStronglyConnected)
        ));
    }

    #[test]
    fn monomolecular_realization_examples() {
        let g = net("species S1 S2 S3\nS3 -> S2 [1]; S2 -> S1 [1]; S1 -> 0 [1]; 0 -> 2 S3 [1]");
        let spade = monomolecular_realization(&g).unwrap();
        assert!(spade.is_monomolecular());
        let zero = Complex::zero(3);
        let s3 = Complex::unit(3, 2);
        assert_eq!(spade.rate(&zero, &s3), Some(&exact::int(2)));
        assert_eq!(spade.reaction_count(), 4);
        assert!(is_strong_realization(&g, &spade));
        assert!(crate::graph::is_weakly_reversible(&spade));
        assert_eq!(crate::graph::deficiency(&spade), 0);

        let chain = net("species S1 S2\nS1 -> S2 [1]; S2 -> 0 [1]; 0 -> 2 S1 [1]");
        let spade = monomolecular_realization(&chain).unwrap();
        let s1 = Complex::unit(2, 0);
        assert_eq!(spade.rate(&Complex::zero(2), &s1), Some(&exact::int(2)));
        assert!(is_strong_realization(&chain, &spade));

        let mono = net("0 <-> S1 [1]; S1 -> S2 [1]; S2 -> 0 [1]");
        assert_eq!(monomolecular_realization(&mono).unwrap(), mono);
    }

    #[test]
    fn equilibrium_on_intro_network() {
        let g = intro_network();
        let cert = first_order_endotactic(&g).unwrap().certificate.unwrap();
        let sys = flux_system(&g).unwrap();

        let degenerate = equilibrium(
            &sys,
            &[5.0, 5.0, 0.0, 0.0, 0.0],
            EquilibriumMode::Certified(&cert),
        )
        .unwrap();
        assert_relative_eq!(degenerate.x_star[0], 2.0, epsilon = 1e-12);
        assert_relative_eq!(degenerate.x_star[1], 1.0, epsilon = 1e-12);
        for i in 2..5 {
            assert_eq!(degenerate.x_star[i], 0.0);
        }
        assert!(!degenerate.positive);
        assert_eq!(degenerate.class, CompatibilityClass::Masses(vec![0.0]));

        let a = 15.0;
        let res = equilibrium(
            &sys,
            &[1.0, 7.0, 4.0, 5.0, 6.0],
            EquilibriumMode::Certified(&cert),
        )
        .unwrap();
        let expect = [2.0, 1.0, 2.0 * a / 5.0, 2.0 * a / 5.0, a / 5.0];
        for (x, e) in res.x_star.iter().zip(&expect) {
            assert_relative_eq!(x, e, epsilon = 1e-9);
        }
        assert!(res.positive);
        assert!(res.certified);
    }

    #[test]
    fn forced_equilibrium_of_non_endotactic_network() {
        let g = net("0 <-> S1 [1]; S2 -> S1 [2]; S2 -> 2 S2 [1]");
        assert!(!first_order_endotactic(&g).unwrap().verdict.is_endotactic());
        let sys = flux_system(&g).unwrap();
        let res = equilibrium(&sys, &[1.0, 1.0], EquilibriumMode::Forced).unwrap();
        assert_relative_eq!(res.x_star[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(res.x_star[1], 0.0, epsilon = 1e-12);
        assert!(!res.positive);
        assert!(!res.certified);
    }

    #[test]
    fn closed_form_two_species_equilibrium() {
        // A Hurwitz flux matrix solved directly: x* = b(−A)⁻¹ = (13, 30).
        let g = net("0 -> S1 [5]; S1 -> 0 [3]; S1 -> S2 [2]; S2 -> S1 [2]; S2 -> 2 S2 [1]; 0 -> S2 [4]");
        let sys = flux_system(&g).unwrap();
        let res = equilibrium(&sys, &[0.0, 0.0], EquilibriumMode::Forced).unwrap();
        assert_relative_eq!(res.x_star[0], 13.0, epsilon = 1e-9);
        assert_relative_eq!(res.x_star[1], 30.0, epsilon = 1e-9);
        assert_eq!(res.class, CompatibilityClass::FullOrthant);
        assert!(res.positive);
    }

    #[test]
    fn equilibrium_requires_matching_certificate() {
        let g = intro_network();
        let other = net("0 -> S1 [1]; S1 -> 0 [1]");
        let cert = first_order_endotactic(&other).unwrap().certificate.unwrap();
        let sys = flux_system(&g).unwrap();
        assert!(matches!(
            equilibrium(&sys, &[0.0; 5], EquilibriumMode::Certified(&cert)),
            Err(KineticsError::CertificateMismatch)
        ));
    }

    #[test]
    fn equilibrium_rejects_bad_initial_states() {
        let g = net("0 <-> S1 [1]");
        let sys = flux_system(&g).unwrap();
        assert!(matches!(
            equilibrium(&sys, &[1.0, 2.0], EquilibriumMode::Forced),
            Err(KineticsError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            equilibrium(&sys, &[-1.0], EquilibriumMode::Forced),
            Err(KineticsError::NegativeInitial(0))
        ));
    }
}
