pub mod domain;
pub mod error;
pub mod estimate;
pub mod numeric;
pub mod symbols;
pub mod random;
pub mod search;
pub mod bloch;
pub mod constants;
pub mod operator;
