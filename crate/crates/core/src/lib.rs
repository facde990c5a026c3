//! Workbench for additive quaternary codes viewed as multisets of lines in
//! PG(r−1,2): exact geometry over GF(2), system verification, the associated
//! binary projection codes, non-existence bounds, constructions, and search
//! model export.

pub mod bounds;
pub mod code;
pub mod construct;
pub mod fixtures;
pub mod geom;
pub mod search;
pub mod lp;
pub mod system;
