//! Node sets, structured matrices, the `Q_{4p}` factorization and the
//! condition-number bounds around it.

pub mod bounds;
pub mod builders;
pub mod exact;
pub mod factor;
pub mod nodes;

pub use bounds::{
    cond_u4p, cond_vandermonde_cyclotomic, cond_vandermonde_real, diagonal_norm_check,
    kuian_reference, table_row, verify_bounds, NodeScale, TableRow, REFERENCE_TABLE,
};
pub use builders::{lagrange_inverse, vandermonde};
pub use exact::{transition_to_power_basis, IntMatrix};
pub use factor::{build_q4p, check_odd_prime, factorize, Factorization};
pub use nodes::{
    chebyshev_nodes, psi_nodes, q4p_row_nodes, retained_nodes, roots_of_unity, NodeKind, NodeSet,
};
