//! Shared inputs for the pipeline benchmarks.

use k3bhcr::groups::intermediate_subgroups;
use k3bhcr::{DiagonalSubgroup, Potential};

/// One potential of each shape, small to large symmetry groups.
pub const POTENTIALS: [(&str, &str); 5] = [
    ("fermat", "y^6+z^6+w^6"),
    ("loop", "y^3z+z^9w+w^7y"),
    ("loop+fermat", "y^3z+z^7y+w^10"),
    ("chain+fermat", "y^4w+w^9+z^6"),
    ("chain", "y^3+yz^9+zw^10"),
];

pub fn potential(f: &str) -> Potential {
    Potential::parse_k3(f).expect("bench potential parses")
}

/// The sextic with its largest symplectic group, the slowest quotient in the tables.
pub fn sextic_full_group() -> (Potential, DiagonalSubgroup) {
    let p = potential("y^6+z^6+w^6");
    let g = intermediate_subgroups(&p).expect("subgroups").into_iter().max_by_key(|g| g.order()).expect("nonempty");
    (p, g)
}
