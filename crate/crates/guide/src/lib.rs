//! Runs the book's Rust snippets as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/hamiltonians.md")]
pub mod hamiltonians {}

#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}

#[doc = include_str!("../../../book/src/sum-of-squares.md")]
pub mod sum_of_squares {}

#[doc = include_str!("../../../book/src/coalescing.md")]
pub mod coalescing {}

#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}

#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}
