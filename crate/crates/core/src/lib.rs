//! Exact and numerical models of probabilistic and quantum categorical
//! constructions: finite probabilities, probabilistic pointed sets,
//! information loss, cubical nerves, summing functors, quantum channels and
//! gapped systems.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod category;
pub mod cubical;
pub mod fincat;
pub mod finprob;
pub mod gapped;
pub mod infoloss;
pub mod linalg;
pub mod pointed;
pub mod probcat;
pub mod quantum;
pub mod rational;
pub mod sample;
pub mod summing;
pub mod wreath;
