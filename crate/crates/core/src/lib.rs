//! Certified heights of Dehn filling points on holonomy curves, and exact
//! anomalous-subvariety checks for truncated holonomy expansions.
//!
//! Modules are layered bottom-up: [`exactnum`] supplies exact arithmetic,
//! [`roots`] certified complex root isolation, [`heights`] Mahler measures and
//! Weil heights, [`subgroups`] integer lattices and algebraic subgroups,
//! [`nzdata`] Neumann–Zagier gluing data, and [`dehn`] / [`anomaly`] the two
//! pipelines built on them.

pub mod anomaly;
pub mod dehn;
pub mod exactnum;
pub mod heights;
pub mod nzdata;
pub mod roots;
pub mod subgroups;
