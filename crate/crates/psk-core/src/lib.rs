//! Finite algebraic and relational semantics for superintuitionistic and classical modal
//! rule systems: frontal Heyting algebras, K4 modal algebras, their dual frames, the
//! translation between them, and pre-stable canonical rules.

pub mod bits;
pub mod error;
pub mod order;
pub mod algebra;
pub mod syntax;
pub mod semantics;
pub mod duality;
pub mod iso;
pub mod enumerate;
pub mod canon;
pub mod corpus;
pub mod suites;

pub use error::{Error, Result};
