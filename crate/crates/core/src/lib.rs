//! Exact invariants of K3 surfaces `x^2 = f(y, z, w)` with `f` an invertible
//! potential, their Berglund-Huebsch-Krawitz mirrors and symplectic quotients.

pub mod catalog;
pub mod error;
pub mod groups;
pub mod involution;
pub mod lattice;
pub mod linalg;
pub mod potential;
pub mod quotient;
pub mod toric;
pub mod wps;

pub use error::{Error, Result};
pub use groups::{AbelianStructure, DiagonalSubgroup, Symmetry};
pub use lattice::{IntegralLattice, NikulinTriple};
pub use linalg::{IntMatrix, RatMatrix};
pub use potential::{Potential, Shape};
pub use toric::{Fan2D, SmoothToricSurface};
pub use wps::WeightSystem;
pub use catalog::{build_catalog, Catalog, CatalogEntry};
pub use involution::{lattice_route, nikulin_triple, LatticeRoute};
pub use quotient::{mirror_pair_check, quotient_triple};
