//! Pretty good state transfer on path graphs.
//!
//! A continuous-time quantum walk on the path of `n` vertices evolves by
//! `exp(itA)` for the adjacency matrix `A`; the fidelity
//! `|e_a^T exp(itA) e_b|^2` is the probability that an excitation prepared
//! at vertex `a` is found at vertex `b`. This crate decides exactly which
//! vertex pairs admit transfer fidelity arbitrarily close to 1, produces
//! machine-checkable integer certificates for every negative mirror pair,
//! and demonstrates the dynamics numerically with an independent
//! matrix-exponential oracle.
//!
//! Module map:
//!
//! * [`numtheory`] - deterministic 64-bit primality, `2^t * r` splits,
//!   odd prime factors.
//! * [`spectra`] - closed-form eigenvalues, projector entries, eigenvalue
//!   supports, strong cospectrality.
//! * [`classifier`] - the exact transfer decision for any vertex pair.
//! * [`certificates`] - obstruction certificates and their checker.
//! * [`dynamics`] - amplitudes, fidelity, budgeted time search, oracle.

pub mod certificates;
pub mod classifier;
pub mod dynamics;
pub mod numtheory;
pub mod render;
pub mod spectra;
pub mod trig;

pub use certificates::{
    check_certificate, generate_certificate, CaseTag, CertificateError, CertificateReport,
    ObstructionCertificate,
};
pub use classifier::{classify, classify_end_vertices, pgst_pairs, Classification, Reason, Verdict};
pub use dynamics::{
    amplitude, fidelity, oracle_expm, search_best_time, search_best_time_with, DynamicsError,
    FidelityTrace, SearchConfig,
};
pub use numtheory::{is_prime, odd_prime_factors, two_adic, TwoAdicForm};
pub use spectra::{spectrum, strongly_cospectral, support, PathPair, PathSpectrum, SpectraError, SupportMask};
