//! Exact polynomial and linear algebra over a [`Field`](crate::scalar::Field).

pub mod composed;
pub mod matrix;
pub mod poly;

pub use composed::{
    composed_power, composed_product, composed_product_by_resultant, degree_cap, set_degree_cap,
    symmetric_power, DEFAULT_DEGREE_CAP,
};
pub use matrix::{Matrix, Solution};
pub use poly::Poly;
