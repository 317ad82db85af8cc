//! Chapters of the guide in `book/`. Each code block is a doc-test.

#[doc = include_str!("../../../book/src/ch01-arithmetic.md")]
pub mod chapter1 {}

#[doc = include_str!("../../../book/src/ch02-carlitz.md")]
pub mod chapter2 {}

#[doc = include_str!("../../../book/src/ch03-rank-two.md")]
pub mod chapter3 {}

#[doc = include_str!("../../../book/src/ch04-tensor-module.md")]
pub mod chapter4 {}

#[doc = include_str!("../../../book/src/ch05-dual-motive.md")]
pub mod chapter5 {}

#[doc = include_str!("../../../book/src/ch06-l-values.md")]
pub mod chapter6 {}

#[doc = include_str!("../../../book/src/ch07-cli.md")]
pub mod chapter7 {}
