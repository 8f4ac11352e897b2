#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod construct;
pub mod cyclotomic;
pub mod error;
pub mod graphs;
pub mod kummer;
pub mod monomial;
pub mod search;
