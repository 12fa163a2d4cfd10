//! Reaction graphs and their combinatorial structure.
//!
//! A reaction network is a finite simple directed graph whose vertices
//! (*complexes*) are exact rational vectors in species space and whose edges
//! (*reactions*) carry positive rational rate constants. This module holds
//! the data types plus the graph-level operations: connected components,
//! the subgraph extractions used throughout the crate, deficiency, the
//! stoichiometric subspace and conservation laws, and the reachability sets
//! around the zero complex that drive the first-order theory.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact::{self, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("complex has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("reaction source equals its target: {0}")]
    SelfLoop(String),
    #[error("duplicate reaction {0}")]
    DuplicateEdge(String),
    #[error("rate constant must be positive, got {0}")]
    NonPositiveRate(String),
    #[error("operation requires a nonempty network")]
    EmptyNetwork,
    #[error("zero complex is not a vertex of the network")]
    ZeroComplexAbsent,
    #[error("network is not first order: source {0} has order greater than one")]
    HigherOrderSource(String),
    #[error("species {0} is redundant (no reaction changes it)")]
    RedundantSpecies(String),
    #[error("networks have different species lists")]
    SpeciesMismatch,
    #[error("species {0} not present in the target species list")]
    UnknownSpecies(String),
}

/// A vertex of the reaction graph: molecule counts per species, exact.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Complex {
    coords: Vec<Rat>,
}

impl Complex {
    pub fn new(coords: Vec<Rat>) -> Self {
        Complex { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Complex {
            coords: vec![Rat::zero(); dim],
        }
    }

    /// The single-species complex `e_i`.
    pub fn unit(dim: usize, species: usize) -> Self {
        let mut coords = vec![Rat::zero(); dim];
        coords[species] = exact::int(1);
        Complex { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rat {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    pub fn l1_norm(&self) -> Rat {
        self.coords.iter().map(|c| c.abs()).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    pub fn is_integer(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Species indices with a nonzero count.
    pub fn support(&self) -> BTreeSet<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// `Some(i)` when this complex is exactly the single-species `e_i`.
    pub fn as_unit(&self) -> Option<usize> {
        let mut unit = None;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if unit.is_some() || *c != exact::int(1) {
                return None;
            }
            unit = Some(i);
        }
        unit
    }

    pub fn dot(&self, v: &[Rat]) -> Rat {
        exact::dot(&self.coords, v)
    }

    /// Renders with the given species names, e.g. `"S1 + 2 S2"` or `"0"`.
    pub fn render(&self, species: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_integer() && *c == exact::int(1) {
                parts.push(species[i].clone());
            } else {
                parts.push(format!("{} {}", exact::render(c), species[i]));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(exact::render).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A directed edge `source → target` with a positive rate constant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Reaction {
    pub source: Complex,
    pub target: Complex,
    pub rate: Rat,
}

impl Reaction {
    pub fn new(source: Complex, target: Complex, rate: Rat) -> Self {
        Reaction {
            source,
            target,
            rate,
        }
    }

    /// The reaction vector `target − source`.
    pub fn vector(&self) -> Vec<Rat> {
        exact::sub(self.target.coords(), self.source.coords())
    }

    pub fn render(&self, species: &[String]) -> String {
        format!(
            "{} -> {} [{}]",
            self.source.render(species),
            self.target.render(species),
            exact::render(&self.rate)
        )
    }
}

/// Species names plus the weighted edge set. Vertices are implied: every
/// vertex is an endpoint of some edge, so isolated vertices cannot occur.
/// The empty network (no edges) is permitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReactionNetwork {
    species: Vec<String>,
    edges: BTreeMap<(Complex, Complex), Rat>,
}

impl ReactionNetwork {
    pub fn new(
        species: Vec<String>,
        reactions: impl IntoIterator<Item = Reaction>,
    ) -> Result<Self, GraphError> {
        let mut net = ReactionNetwork {
            species,
            edges: BTreeMap::new(),
        };
        for r in reactions {
            net.insert(r)?;
        }
        Ok(net)
    }

    pub fn empty(species: Vec<String>) -> Self {
        ReactionNetwork {
            species,
            edges: BTreeMap::new(),
        }
    }

    fn insert(&mut self, r: Reaction) -> Result<(), GraphError> {
        let d = self.species.len();
        for c in [&r.source, &r.target] {
            if c.dim() != d {
                return Err(GraphError::DimensionMismatch {
                    expected: d,
                    found: c.dim(),
                });
            }
        }
        if r.source == r.target {
            return Err(GraphError::SelfLoop(r.source.render(&self.species)));
        }
        if !r.rate.is_positive() {
            return Err(GraphError::NonPositiveRate(exact::render(&r.rate)));
        }
        let key = (r.source, r.target);
        if self.edges.contains_key(&key) {
            return Err(GraphError::DuplicateEdge(format!(
                "{} -> {}",
                key.0.render(&self.species),
                key.1.render(&self.species)
            )));
        }
        self.edges.insert(key, r.rate);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.species.len()
    }

    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn reaction_count(&self) -> usize {
        self.edges.len()
    }

    pub fn reactions(&self) -> impl Iterator<Item = Reaction> + '_ {
        self.edges.iter().map(|((s, t), k)| Reaction {
            source: s.clone(),
            target: t.clone(),
            rate: k.clone(),
        })
    }

    pub fn rate(&self, source: &Complex, target: &Complex) -> Option<&Rat> {
        self.edges.get(&(source.clone(), target.clone()))
    }

    /// All vertices, in lexicographic order.
    pub fn vertices(&self) -> BTreeSet<Complex> {
        let mut v = BTreeSet::new();
        for (s, t) in self.edges.keys() {
            v.insert(s.clone());
            v.insert(t.clone());
        }
        v
    }

    /// Sources of at least one reaction, in lexicographic order.
    pub fn sources(&self) -> BTreeSet<Complex> {
        self.edges.keys().map(|(s, _)| s.clone()).collect()
    }

    pub fn contains_zero_complex(&self) -> bool {
        self.vertices().contains(&Complex::zero(self.dim()))
    }

    /// Maximum source order (`None` for the empty network).
    pub fn order(&self) -> Option<Rat> {
        self.edges.keys().map(|(s, _)| s.l1_norm()).max()
    }

    /// Maximum order over all complexes (`None` for the empty network).
    pub fn net_order(&self) -> Option<Rat> {
        self.vertices().iter().map(Complex::l1_norm).max()
    }

    /// Every source is the zero complex or a single species.
    pub fn is_first_order(&self) -> bool {
        self.order().is_none_or(|r| r <= exact::int(1))
    }

    pub fn is_integer_embedded(&self) -> bool {
        self.vertices()
            .iter()
            .all(|v| v.is_integer() && v.is_nonnegative())
    }

    /// Net order at most one with integer complexes.
    pub fn is_monomolecular(&self) -> bool {
        self.is_integer_embedded() && self.net_order().is_none_or(|r| r <= exact::int(1))
    }

    pub fn reaction_vectors(&self) -> Vec<Vec<Rat>> {
        self.edges
            .keys()
            .map(|(s, t)| exact::sub(t.coords(), s.coords()))
            .collect()
    }

    /// Species that occur with a nonzero count in some vertex.
    pub fn species_support(&self) -> BTreeSet<usize> {
        let mut supp = BTreeSet::new();
        for v in self.vertices() {
            supp.extend(v.support());
        }
        supp
    }

    /// Species untouched by every reaction vector. The pair distinguishes
    /// species that still occur in complexes (`coupled`) from species absent
    /// from every vertex (`padding`); several operations tolerate padding but
    /// must reject coupled redundancy.
    pub fn redundant_species(&self) -> RedundantSpecies {
        let vectors = self.reaction_vectors();
        let support = self.species_support();
        let mut coupled = Vec::new();
        let mut padding = Vec::new();
        for i in 0..self.dim() {
            if vectors.iter().any(|v| !v[i].is_zero()) {
                continue;
            }
            if support.contains(&i) {
                coupled.push(i);
            } else {
                padding.push(i);
            }
        }
        RedundantSpecies { coupled, padding }
    }

    /// Subnetwork with the same ambient species, keeping edges that satisfy
    /// the predicate.
    pub fn filter_edges(&self, mut keep: impl FnMut(&Complex, &Complex) -> bool) -> Self {
        ReactionNetwork {
            species: self.species.clone(),
            edges: self
                .edges
                .iter()
                .filter(|((s, t), _)| keep(s, t))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Re-embeds the network into a superset species list, matching by name.
    pub fn lifted(&self, species: &[String]) -> Result<Self, GraphError> {
        let mut index = Vec::with_capacity(self.dim());
        for name in &self.species {
            let pos = species
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| GraphError::UnknownSpecies(name.clone()))?;
            index.push(pos);
        }
        let lift = |c: &Complex| {
            let mut coords = vec![Rat::zero(); species.len()];
            for (i, x) in c.coords().iter().enumerate() {
                coords[index[i]] = x.clone();
            }
            Complex::new(coords)
        };
        let edges = self
            .edges
            .iter()
            .map(|((s, t), k)| ((lift(s), lift(t)), k.clone()))
            .collect();
        Ok(ReactionNetwork {
            species: species.to_vec(),
            edges,
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct RedundantSpecies {
    /// Redundant but still present in some complex.
    pub coupled: Vec<usize>,
    /// Absent from every complex (dimension padding).
    pub padding: Vec<usize>,
}

/// A partition of the vertex set; blocks ordered by their smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub blocks: Vec<BTreeSet<Complex>>,
}

impl Partition {
    fn from_blocks(mut blocks: Vec<BTreeSet<Complex>>) -> Self {
        blocks.sort_by(|a, b| a.iter().next().cmp(&b.iter().next()));
        Partition { blocks }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, v: &Complex) -> Option<&BTreeSet<Complex>> {
        self.blocks.iter().find(|b| b.contains(v))
    }
}

/// Role of a rational basis attached to a network.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisRole {
    Stoichiometric,
    Conservation,
}

/// Linearly independent rational vectors spanning either the stoichiometric
/// subspace or its orthogonal complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    pub vectors: Vec<Vec<Rat>>,
    pub role: BasisRole,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        exact::in_span(&self.vectors, v)
    }

    /// Whether `v` is orthogonal to every basis vector.
    pub fn orthogonal_to(&self, v: &[Rat]) -> bool {
        self.vectors.iter().all(|w| exact::dot(w, v).is_zero())
    }
}

/// Conservation structure: a basis of the orthogonal complement of the
/// stoichiometric subspace, plus whether that complement contains a strictly
/// positive vector (a conservation law vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConservationLaws {
    pub basis: SubspaceBasis,
    pub positive_vector_exists: bool,
}

/// The reachability sets around the zero complex of a first-order network:
/// `to_zero` (J) holds species whose unit complex has a directed path to 0,
/// `from_zero` (K) the support of complexes reachable from 0, and `relayed`
/// (L) the species of `to_zero \ from_zero` reachable from every species of
/// `from_zero`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroPathSets {
    pub to_zero: BTreeSet<usize>,
    pub from_zero: BTreeSet<usize>,
    pub relayed: BTreeSet<usize>,
}

/// Index-based view of the vertex set with adjacency lists.
struct IndexedGraph {
    verts: Vec<Complex>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl IndexedGraph {
    fn build(net: &ReactionNetwork) -> Self {
        let verts: Vec<Complex> = net.vertices().into_iter().collect();
        let index: BTreeMap<&Complex, usize> =
            verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut out = vec![Vec::new(); verts.len()];
        let mut inc = vec![Vec::new(); verts.len()];
        for (s, t) in net.edges.keys() {
            let (si, ti) = (index[s], index[t]);
            out[si].push(ti);
            inc[ti].push(si);
        }
        IndexedGraph { verts, out, inc }
    }

    fn index_of(&self, v: &Complex) -> Option<usize> {
        self.verts.binary_search(v).ok()
    }

    fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.verts.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.out[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Kosaraju: strongly connected components as index sets.
    fn scc(&self) -> Vec<Vec<usize>> {
        let n = self.verts.len();
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            // Iterative post-order.
            let mut stack = vec![(start, 0usize)];
            seen[start] = true;
            while let Some(&mut (v, ref mut i)) = stack.last_mut() {
                if *i < self.out[v].len() {
                    let w = self.out[v][*i];
                    *i += 1;
                    if !seen[w] {
                        seen[w] = true;
                        stack.push((w, 0));
                    }
                } else {
                    order.push(v);
                    stack.pop();
                }
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for &start in order.iter().rev() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &self.inc[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            comps.push(members);
        }
        comps
    }

    /// Weakly connected components as index sets.
    fn wcc(&self) -> Vec<Vec<usize>> {
        let n = self.verts.len();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut members = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                members.push(v);
                for &w in self.out[v].iter().chain(&self.inc[v]) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comps.push(members);
        }
        comps
    }
}

fn blocks_from_indices(g: &IndexedGraph, comps: Vec<Vec<usize>>) -> Partition {
    Partition::from_blocks(
        comps
            .into_iter()
            .map(|c| c.into_iter().map(|i| g.verts[i].clone()).collect())
            .collect(),
    )
}

/// Strongly connected components, blocks ordered by smallest vertex.
pub fn strongly_connected_components(net: &ReactionNetwork) -> Partition {
    let g = IndexedGraph::build(net);
    let comps = g.scc();
    blocks_from_indices(&g, comps)
}

/// Weakly connected components (undirected reachability closure).
pub fn weakly_connected_components(net: &ReactionNetwork) -> Partition {
    let g = IndexedGraph::build(net);
    let comps = g.wcc();
    blocks_from_indices(&g, comps)
}

/// True iff every weakly connected component is strongly connected. The
/// empty network is weakly reversible.
pub fn is_weakly_reversible(net: &ReactionNetwork) -> bool {
    strongly_connected_components(net).len() == weakly_connected_components(net).len()
}

/// Exact row-reduced basis of the span of the reaction vectors.
pub fn stoichiometric_subspace(net: &ReactionNetwork) -> SubspaceBasis {
    let vectors = exact::row_space_basis(&net.reaction_vectors());
    SubspaceBasis {
        vectors,
        role: BasisRole::Stoichiometric,
    }
}

/// Exact basis of `{w : w · (y' − y) = 0 for every reaction}`, plus whether a
/// strictly positive vector exists in that space.
pub fn conservation_laws(net: &ReactionNetwork) -> ConservationLaws {
    let vectors = exact::null_space(&net.reaction_vectors(), net.dim());
    let positive_vector_exists = exact::span_meets_positive_orthant(&vectors, net.dim());
    ConservationLaws {
        basis: SubspaceBasis {
            vectors,
            role: BasisRole::Conservation,
        },
        positive_vector_exists,
    }
}

/// Number of strongly connected components with at least two vertices.
pub fn cyclic_component_count(net: &ReactionNetwork) -> usize {
    strongly_connected_components(net)
        .blocks
        .iter()
        .filter(|b| b.len() >= 2)
        .count()
}

/// Deficiency in this crate's convention:
/// `#vertices − dim(stoichiometric subspace) − #(strong components with ≥ 2
/// vertices)`. Unlike the classical linkage-class convention this value can
/// be negative; callers that care should check and surface it rather than
/// clamp. The empty network has deficiency zero.
pub fn deficiency(net: &ReactionNetwork) -> i64 {
    let nv = net.vertices().len() as i64;
    let dim = stoichiometric_subspace(net).dim() as i64;
    nv - dim - cyclic_component_count(net) as i64
}

/// Classical deficiency: `#vertices − dim S − #(linkage classes)`, where the
/// linkage classes are the weakly connected components. Always nonnegative.
pub fn deficiency_standard(net: &ReactionNetwork) -> i64 {
    let nv = net.vertices().len() as i64;
    let dim = stoichiometric_subspace(net).dim() as i64;
    nv - dim - weakly_connected_components(net).len() as i64
}

/// Splits off the weakly connected component containing the zero complex.
/// Returns `(zero_part, remainder)`, both embedded in the ambient species.
/// The zero part is empty when 0 is not a vertex.
pub fn zero_component_split(net: &ReactionNetwork) -> (ReactionNetwork, ReactionNetwork) {
    let zero = Complex::zero(net.dim());
    let wcc = weakly_connected_components(net);
    match wcc.block_of(&zero) {
        Some(block) => {
            let block = block.clone();
            (
                net.filter_edges(|s, _| block.contains(s)),
                net.filter_edges(|s, _| !block.contains(s)),
            )
        }
        None => (ReactionNetwork::empty(net.species.clone()), net.clone()),
    }
}

/// The subgraph of reactions whose source and target lie in different
/// strongly connected components. Empty exactly when the network is weakly
/// reversible.
pub fn cross_component_subgraph(net: &ReactionNetwork) -> ReactionNetwork {
    let scc = strongly_connected_components(net);
    net.filter_edges(|s, t| scc.block_of(s) != scc.block_of(t))
}

/// The subgraph of reactions whose source order is maximal.
pub fn highest_order_subgraph(net: &ReactionNetwork) -> Result<ReactionNetwork, GraphError> {
    let max = net.order().ok_or(GraphError::EmptyNetwork)?;
    Ok(net.filter_edges(|s, _| s.l1_norm() == max))
}

/// `net == net*`: every reaction has maximal source order.
pub fn is_homogeneous(net: &ReactionNetwork) -> Result<bool, GraphError> {
    Ok(highest_order_subgraph(net)? == *net)
}

/// Reachability sets around the zero complex. Requires a first-order network
/// containing the zero complex.
pub fn zero_path_sets(net: &ReactionNetwork) -> Result<ZeroPathSets, GraphError> {
    if !net.is_first_order() {
        let bad = net
            .sources()
            .into_iter()
            .find(|s| s.l1_norm() > exact::int(1))
            .expect("a higher-order source exists");
        return Err(GraphError::HigherOrderSource(bad.render(&net.species)));
    }
    let g = IndexedGraph::build(net);
    let zero = Complex::zero(net.dim());
    let zero_idx = g.index_of(&zero).ok_or(GraphError::ZeroComplexAbsent)?;

    let mut to_zero = BTreeSet::new();
    let mut from_zero = BTreeSet::new();
    let from = g.reachable_from(zero_idx);
    for (i, v) in g.verts.iter().enumerate() {
        if i != zero_idx && from[i] {
            from_zero.extend(v.support());
        }
    }
    let mut unit_reach: BTreeMap<usize, Vec<bool>> = BTreeMap::new();
    for j in 0..net.dim() {
        let unit = Complex::unit(net.dim(), j);
        if let Some(ui) = g.index_of(&unit) {
            let reach = g.reachable_from(ui);
            if reach[zero_idx] && ui != zero_idx {
                to_zero.insert(j);
            }
            unit_reach.insert(j, reach);
        }
    }
    let mut relayed = BTreeSet::new();
    for &l in to_zero.difference(&from_zero) {
        let target = Complex::unit(net.dim(), l);
        let Some(ti) = g.index_of(&target) else {
            continue;
        };
        let from_all = from_zero.iter().all(|&k| {
            unit_reach
                .get(&k)
                .map(|reach| reach[ti])
                .unwrap_or(false)
        });
        if !from_zero.is_empty() && from_all {
            relayed.insert(l);
        }
    }
    Ok(ZeroPathSets {
        to_zero,
        from_zero,
        relayed,
    })
}

/// Result of joining two networks over the same species.
#[derive(Clone, Debug)]
pub struct JointOutcome {
    pub network: ReactionNetwork,
    /// Whether the inputs had disjoint vertex and edge sets.
    pub disjoint: bool,
}

/// Union of vertex and edge sets. A reaction present in both inputs keeps a
/// single edge whose rate is the sum, which preserves the average kinetic
/// flux of running both systems together.
pub fn joint(a: &ReactionNetwork, b: &ReactionNetwork) -> Result<JointOutcome, GraphError> {
    if a.species != b.species {
        return Err(GraphError::SpeciesMismatch);
    }
    let mut edges = a.edges.clone();
    let mut edge_overlap = false;
    for (key, rate) in &b.edges {
        edges
            .entry(key.clone())
            .and_modify(|r| {
                edge_overlap = true;
                *r += rate;
            })
            .or_insert_with(|| rate.clone());
    }
    let disjoint = !edge_overlap && a.vertices().is_disjoint(&b.vertices());
    Ok(JointOutcome {
        network: ReactionNetwork {
            species: a.species.clone(),
            edges,
        },
        disjoint,
    })
}
