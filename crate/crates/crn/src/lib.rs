//! Analysis of mass-action reaction networks.
//!
//! A reaction network is a directed graph embedded in species space:
//! vertices are complexes (exact rational vectors of molecule counts), edges
//! are reactions carrying positive rate constants. This crate parses a small
//! text format for such networks and answers structural and dynamical
//! questions about them:
//!
//! - **Structure** ([`graph`]): connected components, weak reversibility,
//!   deficiency, the stoichiometric subspace and conservation laws, and the
//!   standard subgraph extractions (component of the zero complex,
//!   cross-component reactions, highest-order part).
//! - **Endotacticity** ([`endo`]): exact single-direction tests, a complete
//!   decision procedure for first-order networks via the finite set of
//!   signed indicator directions, a complete rule in dimension one, and a
//!   one-sided sufficient test for everything else.
//! - **Kinetics** ([`kinetics`]): the linear-ODE data `ẋ = xA + b` of a
//!   first-order mass-action system, spectral analysis, spanning-tree
//!   constants via the Matrix-Tree theorem, the monomolecular strong
//!   realization, and the unique equilibrium of every stoichiometric
//!   compatibility class.
//! - **Dynamics** ([`dynamics`]): mass-action integration (fixed-step RK4),
//!   closed-form linear solutions via the matrix exponential, and empirical
//!   verification of the exponential convergence bound
//!   `‖x(t) − x*‖₁ ≤ g(t) e^{−ρt}`.
//!
//! ```
//! use crn::dsl::parse_network;
//! use crn::endo::first_order_endotactic;
//! use crn::kinetics::{equilibrium, flux_system, EquilibriumMode};
//!
//! let parsed = parse_network(
//!     "species S1 S2 S3 S4 S5
//!      S2 -> S1 [2]; S1 -> 0 [2]; 0 -> S1 + S2 [2]
//!      S3 -> S4 [1]; S4 -> S5 [1]; S5 -> S3 [2]",
//! ).unwrap();
//! let analysis = first_order_endotactic(&parsed.network).unwrap();
//! assert!(analysis.verdict.is_endotactic());
//!
//! let cert = analysis.certificate.unwrap();
//! let sys = flux_system(&parsed.network).unwrap();
//! let eq = equilibrium(&sys, &[5.0; 5], EquilibriumMode::Certified(&cert)).unwrap();
//! assert!((eq.x_star[0] - 2.0).abs() < 1e-9);
//! assert!((eq.x_star[1] - 1.0).abs() < 1e-9);
//! ```

pub mod dsl;
pub mod dynamics;
pub mod endo;
pub mod exact;
pub mod graph;
pub mod kinetics;

pub use graph::{Complex, Reaction, ReactionNetwork};

// The guide's code blocks compile and run as doc-tests, which keeps the book
// in sync with the crate.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            #[allow(dead_code)]
            struct $name;
        };
    }
    chapter!(Networks, "../../../book/src/networks.md");
    chapter!(Structure, "../../../book/src/structure.md");
    chapter!(Endotacticity, "../../../book/src/endotacticity.md");
    chapter!(Equilibria, "../../../book/src/equilibria.md");
    chapter!(Dynamics, "../../../book/src/dynamics.md");
    chapter!(Cli, "../../../book/src/cli.md");
}
