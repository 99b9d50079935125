// `!(x > y)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beta;
pub mod cli;
pub mod jet;
pub mod quadrature;
pub mod series;
pub mod special;
pub mod surface;
pub mod verify;
