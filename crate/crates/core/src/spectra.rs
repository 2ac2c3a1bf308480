//! Closed-form spectral data of the path graph: eigenvalues, spectral
//! projector entries, eigenvalue supports, and strong cospectrality.
//!
//! For the path on `n` vertices the adjacency matrix has simple spectrum
//! `theta_j = 2 cos(j*pi/(n+1))`, `j = 1..n`, with eigenvector components
//! proportional to `sin(k*j*pi/(n+1))`. Projector entries carry the
//! `2/(n+1)` normalization that makes each `E_j` a true idempotent.
//!
//! Eigenvalue supports are computed by an exact divisibility rule, never by
//! thresholding sines: `sin(a*j*pi/(n+1)) = 0` iff `(n+1) | a*j`, i.e. iff
//! `j` is a multiple of `(n+1)/gcd(a, n+1)`.

use std::fmt;

use crate::numtheory::gcd;
use crate::trig::{cos_pi_ratio, sin_pi_ratio};

/// Largest accepted path length; keeps every index product inside `u128`
/// and every sum inside `u64` with room to spare.
pub const MAX_PATH_LEN: u64 = 1 << 62;

/// Tolerance for the numeric sign-pattern verification in
/// [`strongly_cospectral`].
pub const COSPECTRAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpectraError {
    /// The path must have at least one vertex.
    ZeroVertices,
    /// Path length beyond [`MAX_PATH_LEN`].
    PathTooLong { n: u64 },
    /// Vertex index outside `1..=n`.
    VertexOutOfRange { vertex: u64, n: u64 },
}

impl fmt::Display for SpectraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectraError::ZeroVertices => write!(f, "path must have at least one vertex"),
            SpectraError::PathTooLong { n } => {
                write!(f, "path length {n} exceeds supported maximum {MAX_PATH_LEN}")
            }
            SpectraError::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} outside 1..={n}")
            }
        }
    }
}

impl std::error::Error for SpectraError {}

fn check_path_len(n: u64) -> Result<(), SpectraError> {
    if n == 0 {
        Err(SpectraError::ZeroVertices)
    } else if n > MAX_PATH_LEN {
        Err(SpectraError::PathTooLong { n })
    } else {
        Ok(())
    }
}

fn check_vertex(n: u64, vertex: u64) -> Result<(), SpectraError> {
    if vertex == 0 || vertex > n {
        Err(SpectraError::VertexOutOfRange { vertex, n })
    } else {
        Ok(())
    }
}

/// A path length together with an ordered pair of its vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathPair {
    n: u64,
    a: u64,
    b: u64,
}

impl PathPair {
    pub fn new(n: u64, a: u64, b: u64) -> Result<Self, SpectraError> {
        check_path_len(n)?;
        check_vertex(n, a)?;
        check_vertex(n, b)?;
        Ok(PathPair { n, a, b })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// True iff the vertices are reflections of each other through the
    /// center of the path, `a + b = n + 1`.
    pub fn is_mirror(&self) -> bool {
        self.a + self.b == self.n + 1
    }
}

/// Closed-form spectrum of the path on `n` vertices. Queries are O(1);
/// nothing dense is stored.
#[derive(Debug, Clone, Copy)]
pub struct PathSpectrum {
    n: u64,
}

impl PathSpectrum {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `theta_j = 2 cos(j*pi/(n+1))`, strictly decreasing in `j`.
    ///
    /// Evaluated so that the reflection `theta_{n+1-j} = -theta_j` holds
    /// exactly. Panics if `j` is outside `1..=n`.
    pub fn eigenvalue(&self, j: u64) -> f64 {
        assert!(j >= 1 && j <= self.n, "eigenvalue index {j} outside 1..={}", self.n);
        2.0 * cos_pi_ratio(j as u128, self.n + 1)
    }

    /// Entry `(u, v)` of the spectral idempotent for `theta_j`:
    /// `(2/(n+1)) sin(u*j*pi/(n+1)) sin(v*j*pi/(n+1))`.
    pub fn projector_entry(&self, j: u64, u: u64, v: u64) -> f64 {
        let n = self.n;
        assert!(j >= 1 && j <= n, "eigenvalue index {j} outside 1..={n}");
        assert!(u >= 1 && u <= n, "vertex {u} outside 1..={n}");
        assert!(v >= 1 && v <= n, "vertex {v} outside 1..={n}");
        let m = n + 1;
        let norm = 2.0 / m as f64;
        norm * sin_pi_ratio(u as u128 * j as u128, m) * sin_pi_ratio(v as u128 * j as u128, m)
    }
}

/// The spectrum of the adjacency matrix of the path on `n >= 1` vertices.
pub fn spectrum(n: u64) -> Result<PathSpectrum, SpectraError> {
    check_path_len(n)?;
    Ok(PathSpectrum { n })
}

/// Eigenvalue support of a vertex, held as the exact divisibility rule:
/// index `j` is excluded iff `step | j` where `step = (n+1)/gcd(a, n+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupportMask {
    n: u64,
    a: u64,
    step: u64,
}

impl SupportMask {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    /// The exclusion modulus `(n+1)/gcd(a, n+1)`.
    pub fn step(&self) -> u64 {
        self.step
    }

    /// True iff `theta_j` lies in the support, i.e. `E_j e_a != 0`.
    pub fn contains(&self, j: u64) -> bool {
        assert!(j >= 1 && j <= self.n, "index {j} outside 1..={}", self.n);
        !j.is_multiple_of(self.step)
    }

    /// Excluded indices in increasing order.
    pub fn excluded(&self) -> Vec<u64> {
        (1..=self.n / self.step).map(|i| i * self.step).collect()
    }

    /// Indices in the support, in increasing order.
    pub fn included(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.n).filter(move |j| j % self.step != 0)
    }

    pub fn included_len(&self) -> u64 {
        self.n - self.n / self.step
    }
}

/// Eigenvalue support of vertex `a` on the path of `n` vertices.
pub fn support(n: u64, a: u64) -> Result<SupportMask, SpectraError> {
    check_path_len(n)?;
    check_vertex(n, a)?;
    let step = (n + 1) / gcd(a, n + 1);
    Ok(SupportMask { n, a, step })
}

/// Outcome of the strong-cospectrality test for a vertex pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cospectrality {
    pub strongly_cospectral: bool,
    /// Per-eigenvalue signs `s_j` with `E_j e_a = s_j E_j e_b`, present only
    /// for cospectral pairs: `+1` for odd `j`, `-1` for even `j`.
    pub signs: Option<Vec<i8>>,
}

/// Decides strong cospectrality of `a` and `b` on the path of `n` vertices.
///
/// On the path this holds iff `a + b = n + 1`; when it does, the sign
/// pattern `E_j e_a = (-1)^(j+1) E_j e_b` is verified numerically against
/// the projector entries (every column for `n <= 2048`, a deterministic
/// stride of columns beyond that).
pub fn strongly_cospectral(n: u64, a: u64, b: u64) -> Result<Cospectrality, SpectraError> {
    let pair = PathPair::new(n, a, b)?;
    if !pair.is_mirror() {
        return Ok(Cospectrality {
            strongly_cospectral: false,
            signs: None,
        });
    }

    let spec = PathSpectrum { n };
    let signs: Vec<i8> = (1..=n).map(|j| if j % 2 == 1 { 1 } else { -1 }).collect();
    let stride = (n / 2048).max(1);
    for j in 1..=n {
        let s = signs[(j - 1) as usize] as f64;
        let mut v = 1;
        while v <= n {
            let lhs = spec.projector_entry(j, a, v);
            let rhs = spec.projector_entry(j, b, v);
            assert!(
                (lhs - s * rhs).abs() <= COSPECTRAL_TOL,
                "sign pattern violated at j={j}, v={v}: {lhs} vs {}",
                s * rhs
            );
            v += stride;
        }
    }

    Ok(Cospectrality {
        strongly_cospectral: true,
        signs: Some(signs),
    })
}
