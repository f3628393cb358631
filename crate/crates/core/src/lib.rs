//! Exact spectra of Cayley graphs over finite commutative `Z/n`-algebras.
//!
//! The crate builds finite rings from declarative [`RingSpec`]s, certifies
//! whether they carry a non-degenerate linear functional `ψ: R → Z/n`,
//! computes the eigenvalues of `Γ(R, S)` exactly in `Z[ζ_n]`, and compares
//! integrality of the spectrum with stability of `S` under `(Z/n)^×`.
//!
//! ```
//! use integral_cayley::{canonical_functional, spectrum, CayleyGraph, RingSpec};
//!
//! let spec = RingSpec::Zn { n: 4 };
//! let ring = spec.build().unwrap();
//! let psi = canonical_functional(&spec).unwrap();
//! let graph = CayleyGraph::new(&ring, [1, 3]).unwrap();
//! let report = spectrum(&ring, &graph, &psi).unwrap();
//! assert!(report.integral);
//! ```

pub mod arith;
pub mod census;
pub mod cyclotomic;
mod error;
mod fp_poly;
pub mod functional;
pub mod paley;
pub mod ring;
pub mod spec;
pub mod spectra;

pub use census::{run_census, CensusRecord, CensusSummary};
pub use cyclotomic::{cyclotomic_poly, reduce_sum, CyclotomicBasis, CyclotomicInt};
pub use error::{Error, Result};
pub use functional::{
    build_character_table, canonical_functional, certify, enumerate_functionals, find_nondegenerate, is_nondegenerate,
    transport_functional, Certificate, CharacterTable, FunctionalRecord, LinearFunctional, Transport,
};
pub use paley::{
    character_kernel, induced_dirichlet_is_trivial, paley_graph, power_residue_character, quadratic_character,
    quartic_residue_character, unit_group, MultiplicativeCharacter, UnitGroup,
};
pub use ring::{ElementOp, FiniteRing, RingElement, RingId};
pub use spec::{FqCoeff, RingSpec};
pub use spectra::{
    dft_matrix, gcd_classes, integer_spectrum, is_additively_closed, is_integral, is_stable, negation_classes,
    numeric_spectrum_oracle, ramanujan_sum, scalar_orbits, spectrum, spectrum_by_characters, symmetric_sets, to_dot,
    verify_by_characters, verify_theorem, CayleyGraph, DftMatrix, OrbitPartition, SpectrumReport, VerificationReport,
    VerifyMode,
};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/rings.md")]
mod book_rings {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/functionals.md")]
mod book_functionals {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cyclotomic.md")]
mod book_cyclotomic {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/spectra.md")]
mod book_spectra {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/paley.md")]
mod book_paley {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
