//! Exact arithmetic: coefficient fields, polynomials, truncated series,
//! factorization, Newton lifting, differentials and rational integration.

pub mod differential;
pub mod factor;
pub mod field;
pub mod fpoly;
pub mod integrate;
pub mod newton;
pub mod pfrac;
pub mod poly;
pub mod qpoly;
pub mod series;

pub use differential::Differential;
pub use field::{CoeffField, FieldElem, FieldKind};
pub use newton::{newton_lift_root, SeriesPoly};
pub use poly::Poly;
pub use qpoly::Q;
pub use series::{TruncSeries, UnitDecomposition};
