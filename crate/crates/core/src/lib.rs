//! Certified bounds on the Lyapunov exponent and the lower Lyapunov exponent
//! of continuous-time linear switching systems, obtained from polytope
//! Lyapunov norms (stability) and polytope antinorms (stabilizability).

// index loops mirror the matrix algebra; `!(x < y)` is deliberate where NaN must fail
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod linalg;
pub mod lp;
pub mod polytope;
pub mod family;
pub mod products;
pub mod bounds;
pub mod report;
