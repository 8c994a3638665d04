//! Finite-scale condensed mathematics.
//!
//! Finite sets and maps, ultrafilters and the Stone–Čech functor β, the
//! standard free resolution `B²(X) ⇉ B(X) → X`, presheaves on a bounded
//! skeletal site of finite sets, descent along split forks, and
//! sheafification through the plus construction.

pub mod descent;
pub mod error;
pub mod finset;
pub mod label;
pub mod plus;
pub mod presheaf;
pub mod resolution;
pub mod site;
pub mod stone;
mod union_find;

pub use error::{Error, ForkEquation, Result};
pub use finset::{Cocone, Cone, FinMap, FinSet, Iso};
pub use label::{Label, Side};
pub use union_find::UnionFind;
