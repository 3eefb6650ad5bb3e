//! Exact algebra for abelian surfaces with quaternion and complex
//! multiplication: quaternion algebras over Q and their ramification,
//! splitting fields, the idempotent/embedding correspondence in `D (x) L`,
//! presentations `(disc L, theta / Q)`, orders and optimal embeddings,
//! class groups of imaginary quadratic orders, and isogeny degree bounds.

pub mod arith;
pub mod classgrp;
pub mod error;
pub mod linalg;
pub mod localsym;
pub mod orders;
pub mod quat;
pub mod report;
pub mod tensor;
pub mod thetasearch;

pub use arith::{q, qi, PrimeFactorization, Rational};
pub use error::{Error, Result};
pub use localsym::{ImagQuadField, RamificationSet};
pub use quat::{Embedding, QuatAlgebra, QuatElement};
pub use classgrp::{ClassGroup, IdealClass, IdealClassSet, QuadForm};
pub use orders::{QuadOrder, QuatLattice, QuatOrder};
pub use report::DegreeBoundReport;
pub use tensor::{Idempotent, LScalar, TensorAlgebra, TensorElement};
pub use thetasearch::{ThetaCheck, ThetaPair};
