//! Exact arithmetic and deterministic linear algebra over Q, rational
//! functions in t, Laurent jets, and Jordan data.

pub mod jordan;
pub mod laurent;
pub mod matrix;
pub mod poly;
pub mod rat;
pub mod ratfunc;

pub use jordan::{char_poly, jordan_data, JordanData};
pub use laurent::{laurent_expand, residue_of_form, Jet, MJet, Pt};
pub use matrix::{Mat, MatQ, MatRF, RowSpan, Scalar};
pub use poly::Poly;
pub use rat::{rat, rat_from_string, rat_int, rat_to_string, Rat};
pub use ratfunc::{rf_parse, RatFunc};
