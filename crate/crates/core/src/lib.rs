//! Exact desk-scale computations around containers for digraphs that avoid
//! a fixed pattern `H`.
//!
//! * [`digraph`], [`weight`], [`copies`], [`canon`]: labelled digraphs, the
//!   weighted size `a·f2 + f1`, copy counting and canonical forms.
//! * [`density`]: `m(H)`, the sparsity condition `e(H')/v(H') ≤ a/2` and
//!   the constant `C(H)`.
//! * [`extremal`]: `ex_a(n, H)`, `f*(n, H)` and the copy-budget scan.
//! * [`hypergraph`], [`codegree`]: the pair hypergraph `D(N, H)` and its
//!   co-degree function.
//! * [`container`], [`pipeline`]: a deterministic container algorithm, its
//!   verification, and the end-to-end report.

pub mod canon;
pub mod codegree;
pub mod container;
pub mod copies;
pub mod density;
pub mod digraph;
pub mod error;
pub mod extremal;
pub mod hypergraph;
pub mod pattern;
pub mod pipeline;
pub mod weight;

pub use digraph::Digraph;
pub use error::{Error, Result};
pub use pattern::Pattern;
pub use weight::{EdgeProfile, Rational, Weight};
