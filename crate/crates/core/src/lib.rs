pub mod arith;
pub mod elimination;
pub mod harness;
pub mod multiplier;
pub mod oracle;
pub mod structure;
