//! Analysis, classification, and synthesis of space curves through the
//! alternative moving frame {N, C, W}.
//!
//! The library extracts the Frenet apparatus from sampled unit-speed
//! curves, builds the alternative frame with its scalar curvatures f and g,
//! classifies curves as general helices, slant helices, C-slant helices,
//! curves of constant precession, or curves of C-constant precession, and
//! synthesizes curves from intrinsic (κ, τ) or (f, g) profiles by
//! integrating the Frenet-Serret system.

pub mod alt_frame;
pub mod classify;
pub mod curve;
pub mod error;
pub mod frenet;
pub mod indicatrix;
pub mod io;
pub mod num;
pub mod synthesis;
pub mod verify;

pub use error::{HelixError, Result};
