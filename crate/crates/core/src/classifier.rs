//! Exact decision procedure for pretty good state transfer between two
//! vertices of a path.
//!
//! Writing `n + 1 = 2^t * r` with `r` odd, transfer between `a` and `b`
//! occurs iff `a + b = n + 1` and either `r = 1`, or `r` is prime and `a`
//! is a multiple of `2^(t-1)`. For `t <= 1` the divisibility constraint is
//! vacuous, which matches the end-vertex characterization (`n + 1` prime,
//! twice a prime, or a power of two). The central self-pair `a = b` is
//! reported as degenerate rather than as transfer: its fidelity is 1 at
//! time 0 for trivial reasons.

use std::fmt;

use crate::numtheory::{is_prime, two_adic};
use crate::spectra::{PathPair, SpectraError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pgst,
    NoPgst,
    Degenerate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pgst => "PGST",
            Verdict::NoPgst => "NO_PGST",
            Verdict::Degenerate => "DEGENERATE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Structured grounds for a verdict; reasons for `NoPgst` are ordered and
/// deterministic: a non-mirror pair is reported before anything about the
/// arithmetic of `n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reason {
    NotMirrorPair,
    OddPartComposite,
    BadDyadicAlignment,
    PowerOfTwoCase,
    PrimeCase,
    SelfPair,
}

impl Reason {
    pub fn as_str(&self) -> &'static str {
        match self {
            Reason::NotMirrorPair => "NOT_MIRROR_PAIR",
            Reason::OddPartComposite => "ODD_PART_COMPOSITE",
            Reason::BadDyadicAlignment => "BAD_DYADIC_ALIGNMENT",
            Reason::PowerOfTwoCase => "POWER_OF_TWO_CASE",
            Reason::PrimeCase => "PRIME_CASE",
            Reason::SelfPair => "SELF_PAIR",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The decomposition `n + 1 = 2^t * r` driving the verdict; `p` is the odd
/// part `r` when it is prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicParams {
    pub t: u32,
    pub r: u64,
    pub p: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub reason: Reason,
    pub params: DyadicParams,
}

/// Decides pretty good state transfer between vertices `a` and `b` of the
/// path on `n` vertices.
pub fn classify(n: u64, a: u64, b: u64) -> Result<Classification, SpectraError> {
    let pair = PathPair::new(n, a, b)?;
    let form = two_adic(n + 1);
    let r_prime = form.r > 1 && is_prime(form.r);
    let params = DyadicParams {
        t: form.t,
        r: form.r,
        p: r_prime.then_some(form.r),
    };

    if a == b {
        return Ok(Classification {
            verdict: Verdict::Degenerate,
            reason: Reason::SelfPair,
            params,
        });
    }
    if !pair.is_mirror() {
        return Ok(Classification {
            verdict: Verdict::NoPgst,
            reason: Reason::NotMirrorPair,
            params,
        });
    }
    if form.r == 1 {
        return Ok(Classification {
            verdict: Verdict::Pgst,
            reason: Reason::PowerOfTwoCase,
            params,
        });
    }
    if !r_prime {
        return Ok(Classification {
            verdict: Verdict::NoPgst,
            reason: Reason::OddPartComposite,
            params,
        });
    }
    if form.t <= 1 || a.is_multiple_of(1u64 << (form.t - 1)) {
        Ok(Classification {
            verdict: Verdict::Pgst,
            reason: Reason::PrimeCase,
            params,
        })
    } else {
        Ok(Classification {
            verdict: Verdict::NoPgst,
            reason: Reason::BadDyadicAlignment,
            params,
        })
    }
}

/// End-vertex transfer on the path of `n >= 2` vertices: `n + 1` prime,
/// twice a prime, or a power of two.
///
/// Deliberately a separate code path from [`classify`]; the two must agree
/// on `(n, 1, n)` and tests hold them to that.
pub fn classify_end_vertices(n: u64) -> bool {
    assert!(n >= 2, "end-vertex classification requires n >= 2");
    let m = n + 1;
    is_prime(m) || (m.is_multiple_of(2) && is_prime(m / 2)) || m.is_power_of_two()
}

/// All transfer pairs `(a, b)` with `a < b`, ordered by `a`.
pub fn pgst_pairs(n: u64) -> Vec<(u64, u64)> {
    assert!(n >= 2, "pair enumeration requires n >= 2");
    (1..=n / 2)
        .filter(|&a| {
            let c = classify(n, a, n + 1 - a).expect("vertices in range by construction");
            c.verdict == Verdict::Pgst
        })
        .map(|a| (a, n + 1 - a))
        .collect()
}
