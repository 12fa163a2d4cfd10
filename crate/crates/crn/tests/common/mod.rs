//! Shared oracles and generators for the integration test suites. The
//! oracles deliberately take different algorithmic routes than the library
//! so that agreement is evidence, not tautology.

// Each test target compiles this module separately and uses its own subset.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::Rng;

use crn::exact::{self, Rat};
use crn::graph::{Complex, Reaction, ReactionNetwork};

/// Rank by fraction-free Bareiss elimination over the integers, after
/// clearing denominators row by row. Independent of the library's rational
/// row reduction.
pub fn bareiss_rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let mut lcm = BigInt::from(1);
            for x in row {
                lcm = num_integer::lcm(lcm, x.denom().clone());
            }
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    if m.is_empty() {
        return 0;
    }
    let ncols = m[0].len();
    let nrows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..ncols {
        let Some(pivot_row) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col].clone();
        for r in 0..nrows {
            if r == rank {
                continue;
            }
            for c in 0..ncols {
                if c == col {
                    continue;
                }
                let val = (&pivot * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = val;
            }
            m[r][col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Sum of spanning in-tree weights rooted at `root` by direct enumeration:
/// every non-root vertex picks one outgoing edge, and the assignment counts
/// when every vertex reaches the root.
pub fn in_tree_weight_sum(n: usize, edges: &[(usize, usize, f64)], root: usize) -> f64 {
    let mut options: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(s, t, w) in edges {
        options[s].push((t, w));
    }
    let choosers: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    let mut total = 0.0;
    let mut pick = vec![0usize; n];
    fn recurse(
        idx: usize,
        choosers: &[usize],
        options: &[Vec<(usize, f64)>],
        pick: &mut [usize],
        root: usize,
        total: &mut f64,
    ) {
        if idx == choosers.len() {
            // Acyclic toward the root?
            for &start in choosers {
                let mut v = start;
                let mut hops = 0;
                while v != root {
                    v = options[v][pick[v]].0;
                    hops += 1;
                    if hops > choosers.len() + 1 {
                        return;
                    }
                }
            }
            let mut weight = 1.0;
            for &v in choosers {
                weight *= options[v][pick[v]].1;
            }
            *total += weight;
            return;
        }
        let v = choosers[idx];
        for choice in 0..options[v].len() {
            pick[v] = choice;
            recurse(idx + 1, choosers, options, pick, root, total);
        }
    }
    recurse(0, &choosers, &options, &mut pick, root, &mut total);
    total
}

/// Edge list of the subgraph induced on a component, with vertex indices in
/// the component's canonical order (zero complex first, then species).
pub fn component_edge_list(
    net: &ReactionNetwork,
    component: &BTreeSet<Complex>,
) -> (Vec<Complex>, Vec<(usize, usize, f64)>) {
    let mut order: Vec<Complex> = component.iter().cloned().collect();
    order.sort_by_key(|v| (!v.is_zero(), v.as_unit()));
    let index = |v: &Complex| order.iter().position(|w| w == v).unwrap();
    let mut edges = Vec::new();
    for r in net.reactions() {
        if component.contains(&r.source) && component.contains(&r.target) {
            edges.push((index(&r.source), index(&r.target), exact::to_f64(&r.rate)));
        }
    }
    (order, edges)
}

pub fn species_names(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("S{i}")).collect()
}

fn random_rate(rng: &mut StdRng) -> Rat {
    exact::ratio(rng.gen_range(1..=6), rng.gen_range(1..=3))
}

fn random_target(rng: &mut StdRng, d: usize) -> Complex {
    let coords = (0..d)
        .map(|_| {
            if rng.gen_bool(0.45) {
                exact::int(rng.gen_range(1..=2))
            } else {
                Rat::zero()
            }
        })
        .collect();
    Complex::new(coords)
}

/// Random nonempty first-order network on `d` species, integer-embedded,
/// without redundant species.
pub fn random_first_order_network(rng: &mut StdRng, d: usize) -> ReactionNetwork {
    loop {
        let n_edges = rng.gen_range(1..=8);
        let mut reactions: Vec<Reaction> = Vec::new();
        let mut seen: BTreeSet<(Complex, Complex)> = BTreeSet::new();
        for _ in 0..n_edges {
            let source = if rng.gen_bool(0.35) {
                Complex::zero(d)
            } else {
                Complex::unit(d, rng.gen_range(0..d))
            };
            let target = if rng.gen_bool(0.25) {
                Complex::zero(d)
            } else if rng.gen_bool(0.5) {
                Complex::unit(d, rng.gen_range(0..d))
            } else {
                random_target(rng, d)
            };
            if source == target {
                continue;
            }
            if !seen.insert((source.clone(), target.clone())) {
                continue;
            }
            reactions.push(Reaction::new(source, target, random_rate(rng)));
        }
        if reactions.is_empty() {
            continue;
        }
        let net = ReactionNetwork::new(species_names(d), reactions).expect("generator invariants");
        let redundant = net.redundant_species();
        if redundant.coupled.is_empty() && redundant.padding.is_empty() {
            return net;
        }
    }
}

/// Random strongly connected weighted digraph on `2 <= n <= 6` vertices,
/// represented as a monomolecular network: a random cycle through all
/// vertices plus extra random edges.
pub fn random_strongly_connected(rng: &mut StdRng, n: usize) -> ReactionNetwork {
    use rand::seq::SliceRandom;
    assert!(n >= 2, "a strongly connected loop-free digraph needs two vertices");
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut reactions = Vec::new();
    for i in 0..n {
        let s = perm[i];
        let t = perm[(i + 1) % n];
        seen.insert((s, t));
        reactions.push(Reaction::new(
            Complex::unit(n, s),
            Complex::unit(n, t),
            random_rate(rng),
        ));
    }
    for s in 0..n {
        for t in 0..n {
            if s != t && rng.gen_bool(0.3) && seen.insert((s, t)) {
                reactions.push(Reaction::new(
                    Complex::unit(n, s),
                    Complex::unit(n, t),
                    random_rate(rng),
                ));
            }
        }
    }
    ReactionNetwork::new(species_names(n), reactions).expect("generator invariants")
}

/// Random direction with rational entries in `[-5, 5]`, not identically
/// zero.
pub fn random_direction(rng: &mut StdRng, d: usize) -> crn::endo::Direction {
    loop {
        let coords: Vec<Rat> = (0..d)
            .map(|_| {
                let den = rng.gen_range(1..=4i64);
                let num = rng.gen_range(-5 * den..=5 * den);
                exact::ratio(num, den)
            })
            .collect();
        if let Ok(dir) = crn::endo::Direction::new(coords) {
            return dir;
        }
    }
}
