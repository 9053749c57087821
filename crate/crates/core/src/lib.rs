//! Truncated variational Hamiltonian ansatz (tVHA) toolkit.
//!
//! The pipeline runs from molecular integrals to an optimized energy:
//!
//! 1. [`fcidump`] reads FCIDUMP integrals and expands them to spin orbitals.
//! 2. [`hamiltonian`] splits the operator into one-body, Coulomb and
//!    non-Coulomb parts and truncates the non-Coulomb part by magnitude.
//! 3. [`pauli`] maps fermionic terms to Pauli sums (Jordan-Wigner).
//! 4. [`circuit`] compiles tVHA, UCCSD and hardware-efficient ansätze.
//! 5. [`sim`] evaluates circuits on an exact statevector.
//! 6. [`vqe`] optimizes the circuit parameters with derivative-free methods.
//!
//! Spin orbitals use blocked ordering: all α orbitals first, then all β.
//! Qubit `i` carries spin orbital `i`; basis states are little-endian.

pub mod circuit;
pub mod error;
pub mod fcidump;
pub mod hamiltonian;
pub mod pauli;
pub mod sim;
pub mod vqe;

pub use circuit::{AngleExpr, Circuit, CircuitMetrics, Gate, OneBodyMode, PauliMerge, TvhaOptions};
pub use error::{Error, Result};
pub use fcidump::{FixtureMetadata, SpatialIntegrals, SpinOrbitalIntegrals};
pub use hamiltonian::{DecomposedHamiltonian, FermionTerm, TruncationResult};
pub use pauli::{Pauli, PauliString, PauliSum};
pub use sim::{ParamVector, StateVector};
pub use vqe::{Algorithm, OptimizerConfig, VqeResult};
