//! Exact arithmetic in number fields and certification of the emptiness
//! criteria for Shimura varieties attached to totally indefinite quaternion
//! algebras.
//!
//! The crate is organised in layers:
//!
//! * low-level exact arithmetic: [`poly`], [`fp`], [`linalg`], [`interval`],
//!   [`intfact`];
//! * number-field arithmetic: [`number_field`] (elements, ideals, prime
//!   decomposition, bounded enumeration);
//! * arithmetic invariants: [`class_group`], [`cyclotomic_data`],
//!   [`quaternion`], [`weil_sets`];
//! * the certification layer: [`certifier`] (hypothesis checks, witness
//!   search, certificates).
//!
//! Everything is `no_std + alloc`; all operations are pure functions over
//! immutable values and are safe to call from concurrent workers.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod certifier;
pub mod class_group;
pub mod cyclotomic_data;
pub mod error;
pub mod fp;
pub mod intfact;
pub mod interval;
pub mod linalg;
pub mod number_field;
pub mod poly;
pub mod quaternion;
pub mod rng;
pub mod weil_sets;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
