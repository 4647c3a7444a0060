//! Exact arithmetic over ℚ and real quadratic fields ℚ(√d), their real
//! embeddings, minimal polynomials and heights.

mod field;
mod height;

pub use field::{
    arith, is_squarefree, parse_field_literal, sqrt_enclosure, squarefree_decomposition, ArithOp,
    FieldDescriptor, FieldElement,
};
pub use height::{
    check_height_relation, mahler_measure, minimal_polynomial, quotient_bound_holds, naive_height, weil_height, weil_height_quotient_bound,
    HeightRelation, IntegerPolynomial,
};
