pub mod arith;
pub mod completion;
pub mod field;
pub mod gauge;
pub mod integrability;
pub mod linalg;
pub mod matrix;
pub mod parse;
pub mod solver;
#[cfg(test)]
pub(crate) mod testing;
