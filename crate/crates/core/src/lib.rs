//! Random stack-triangulations and stack-quadrangulations through their
//! tree encodings.

pub mod counting;
pub mod experiments;
pub mod fragmentation;
pub mod localtopo;
pub mod par;
pub mod passage;
pub mod rng;
pub mod stackmap;
pub mod statistics;
pub mod tree;
pub mod verify;
pub mod word;
