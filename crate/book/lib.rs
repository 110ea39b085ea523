//! Doc-tests for the guide. Each chapter is compiled as module docs.

#[doc = include_str!("src/transmissions.md")]
pub mod transmissions {}

#[doc = include_str!("src/chordal-paths.md")]
pub mod chordal_paths {}

#[doc = include_str!("src/families.md")]
pub mod families {}

#[doc = include_str!("src/products.md")]
pub mod products {}

#[doc = include_str!("src/unimodality.md")]
pub mod unimodality {}

#[doc = include_str!("src/search.md")]
pub mod search {}

#[doc = include_str!("src/sessions.md")]
pub mod sessions {}
