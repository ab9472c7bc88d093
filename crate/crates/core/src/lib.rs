//! Coset geometry toolkit: two-generator coset tables, dessins d'enfants,
//! the point-line geometries they stabilize, and the coset-commutator test
//! for geometric contextuality, with Pauli-operator and Belyi-map
//! cross-checks.

pub mod belyi;
pub mod contextuality;
pub mod coset;
pub mod dessin;
pub mod error;
pub mod geometry;
pub mod pauli;
pub mod perm;
pub mod words;

pub use belyi::{matches_dessin, passport_of, BelyiPassport, Poly, RationalMap};
pub use contextuality::{best_labeling, line_commuting, score, Candidate, CommutationMode, ContextualityReport, LineVerdict};
pub use coset::{low_index_subgroups, todd_coxeter, CosetTable, DEFAULT_MAX_COSETS};
pub use dessin::{CanonicalForm, Dessin, Passport, Signature};
pub use error::{Error, Result};
pub use geometry::{build, catalog_names, extract_geometries, stored_dessin, Hyperplane, HyperplaneMode, IncidenceStructure, PairStabilizer, PolygonOrder, PolygonVerdict, StabilizerGeometry};
pub use pauli::{find_mermin_square, find_pentagram, max_commuting_geometry, pentagram_lines, verify_mermin_square, verify_pentagram, ContextVerdict, PauliOp};
pub use perm::{evaluate, PermGroup, Permutation, StabilizerClass, SubgroupKey, DEFAULT_KEY_BOUND};
pub use words::{parse_word, Letter, Mode, Presentation, Word};
