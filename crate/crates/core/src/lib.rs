//! W-graph ideals for Hecke algebras with unequal parameters.
//!
//! The crate computes, for a finite Coxeter group `W` with a weight function
//! `L` into a totally ordered abelian group `Γ ≅ Z^k`:
//!
//! * exact arithmetic in `A = Z[Γ]` and the Hecke algebra `H(W, S, L)`,
//! * W-graph ideals `E_J` realized from bar-invariant seed elements, with the
//!   paired dual modules `M` and `M̃` and the duality maps `η`/`θ`,
//! * the polynomial families `R`, `R̃`, `P`, `P̃`, `Q`, `Q̃` and the four dual
//!   bases `C`, `C′`, `D`, `D′` with their μ-coefficients and W-graphs,
//! * the finite-case `π`-twisted tables (`R^π`, `P^π`) and the inversion
//!   identities relating `Q` to `P̃^π`.
//!
//! Everything is exact; every structural identity the construction relies on
//! is re-verified on the computed tables.

pub mod coxeter;
pub mod finite;
pub mod hecke;
pub mod ideal;
pub mod instances;
pub mod klpoly;
pub mod laurent;
pub mod polymat;
pub mod solve;

pub use laurent::{Cone, ConeKind, Coeff, Degree, GammaExp, LaurentPoly};
