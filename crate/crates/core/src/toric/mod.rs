//! Good toric contact manifolds from their moment cones: certification,
//! Reeb vectors, closed orbits over edges and contact homology tables.

pub mod cone;
pub mod hc;
pub mod lattice;
pub mod orbits;
pub mod reeb;
pub mod simplex;
pub mod surd;

pub use cone::{check_good_cone, fundamental_group, Edge, Face, FaceLattice, MomentCone};
pub use hc::{convexity_lower_bound, hc_table, hc_table_auto, ConvexityBound, HCTable};
pub use orbits::{
    edge_orbit_rotations, lifted_path, orbit_rs_index, orbit_rs_index_checked, EdgeOrbitIndex, EdgeRotations,
};
pub use reeb::{accept_reeb, is_reeb_vector, nondegenerate_reeb_near, ReebVector};
pub use surd::Surd;
