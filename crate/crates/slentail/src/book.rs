//! The user guide under `book/`, compiled here so its examples are tested.

#[doc = include_str!("../../../book/src/chapter1.md")]
pub mod chapter1 {}
#[doc = include_str!("../../../book/src/chapter2.md")]
pub mod chapter2 {}
#[doc = include_str!("../../../book/src/chapter3.md")]
pub mod chapter3 {}
#[doc = include_str!("../../../book/src/chapter4.md")]
pub mod chapter4 {}
#[doc = include_str!("../../../book/src/chapter5.md")]
pub mod chapter5 {}
#[doc = include_str!("../../../book/src/chapter6.md")]
pub mod chapter6 {}
#[doc = include_str!("../../../book/src/chapter7.md")]
pub mod chapter7 {}
#[doc = include_str!("../../../book/src/chapter8.md")]
pub mod chapter8 {}
