//! Metric graphs and their tropical Jacobians.
//!
//! The crate implements the geometry needed to study marked metric graphs
//! at desk scale: validity and genus bookkeeping for multigraphs
//! ([`graph`]), integer homology and period matrices ([`homology`]),
//! the symmetric space of positive definite matrices ([`spd`]),
//! 3-edge connectivizations and cyclic equivalence ([`connectivize`]),
//! plane tropical curves ([`tropical`]), and the simplicial/invariant
//! metrics on the space of marked graphs ([`outer`]).
//!
//! Everything is deterministic: identical inputs produce identical
//! outputs, bit for bit. Algorithms are exponential-time brute force
//! where that is the honest thing to do (cycle enumeration, C1-sets,
//! lattice searches) and are documented with the sizes they are meant
//! for. Exact rational arithmetic backs every decision that hinges on
//! length equality.

pub mod connectivize;
pub mod error;
pub mod graph;
pub mod homology;
pub mod io;
pub mod mat;
pub mod num;
pub mod outer;
pub mod quad;
pub mod random;
pub mod report;
pub mod shapes;
pub mod snf;
pub mod spd;
pub mod tensor;
pub mod tropical;

pub use error::{Error, Result};
pub use graph::MetricGraph;
pub use num::{Length, Rat};
