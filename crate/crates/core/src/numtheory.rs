//! Exact 64-bit integer arithmetic: deterministic primality, the 2-adic
//! decomposition `m = 2^t * r`, and odd prime factorization.
//!
//! Everything here is exact integer arithmetic; no verdict downstream ever
//! depends on a probabilistic test.

use std::fmt;

/// The decomposition `m = 2^t * r` with `r` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoAdicForm {
    /// 2-adic valuation of the input.
    pub t: u32,
    /// Odd part of the input.
    pub r: u64,
}

impl TwoAdicForm {
    /// Reassembles the original input.
    pub fn reconstruct(&self) -> u64 {
        self.r << self.t
    }
}

/// Factorization failure: a composite cofactor with no prime factor below
/// the trial-division bound resisted splitting.
///
/// Can only occur for inputs whose square-free part has two prime factors
/// above 10^6, i.e. inputs exceeding 10^12.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IncompleteFactorization {
    pub input: u64,
    pub cofactor: u64,
}

impl fmt::Display for IncompleteFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "composite cofactor {} of {} has no prime factor below 10^6",
            self.cofactor, self.input
        )
    }
}

impl std::error::Error for IncompleteFactorization {}

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Deterministic primality test for the full `u64` range.
///
/// Uses the Miller-Rabin witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29,
/// 31, 37}, which is sufficient for all integers below 3.3 * 10^24, so the
/// answer is exact: no probabilistic error for any 64-bit input.
pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if m == p {
            return true;
        }
        if m.is_multiple_of(p) {
            return false;
        }
    }
    // m is odd and > 37*37 is not guaranteed, but all composites below 41^2
    // were caught by the divisions above.
    let form = two_adic(m - 1);
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, form.r, m);
        if x == 1 || x == m - 1 {
            continue;
        }
        for _ in 1..form.t {
            x = mul_mod(x, x, m);
            if x == m - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Splits `m >= 1` as `2^t * r` with `r` odd.
pub fn two_adic(m: u64) -> TwoAdicForm {
    assert!(m >= 1, "two_adic requires m >= 1");
    let t = m.trailing_zeros();
    TwoAdicForm { t, r: m >> t }
}

/// Distinct odd prime divisors of `m`, strictly increasing. Empty for
/// powers of two (including 1).
///
/// Trial division up to 10^6, then deterministic primality on the cofactor.
/// A composite cofactor beyond the bound is reported as
/// [`IncompleteFactorization`] rather than silently mislabelled.
pub fn odd_prime_factors(m: u64) -> Result<Vec<u64>, IncompleteFactorization> {
    assert!(m >= 1, "odd_prime_factors requires m >= 1");
    let mut rest = m >> m.trailing_zeros();
    let mut factors = Vec::new();
    let mut d = 3u64;
    while d <= TRIAL_DIVISION_BOUND && d * d <= rest {
        if rest.is_multiple_of(d) {
            factors.push(d);
            while rest.is_multiple_of(d) {
                rest /= d;
            }
        }
        d += 2;
    }
    if rest > 1 {
        if is_prime(rest) {
            factors.push(rest);
        } else {
            return Err(IncompleteFactorization {
                input: m,
                cofactor: rest,
            });
        }
    }
    Ok(factors)
}

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

fn mul_mod(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 * b as u128) % modulus as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: plain trial division.
    fn is_prime_trial(m: u64) -> bool {
        if m < 2 {
            return false;
        }
        let mut d = 2u64;
        while d * d <= m {
            if m.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn small_prime_examples() {
        assert!(is_prime(2));
        assert!(!is_prime(9));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
    }

    #[test]
    fn mersenne_31_is_prime() {
        // 2^31 - 1, cross-checked against the trial-division oracle.
        assert!(is_prime_trial(2_147_483_647));
        assert!(is_prime(2_147_483_647));
    }

    #[test]
    fn large_carmichael_like_composites() {
        // Strong pseudoprimes to several bases; the full witness set must
        // reject them.
        assert!(!is_prime(3_215_031_751)); // spsp to 2,3,5,7
        assert!(!is_prime(3_825_123_056_546_413_051)); // spsp to bases up to 23
        assert!(is_prime(18_446_744_073_709_551_557)); // largest 64-bit prime
    }

    #[test]
    fn two_adic_examples() {
        assert_eq!(two_adic(12), TwoAdicForm { t: 2, r: 3 });
        assert_eq!(two_adic(9), TwoAdicForm { t: 0, r: 9 });
        assert_eq!(two_adic(16), TwoAdicForm { t: 4, r: 1 });
    }

    #[test]
    fn odd_prime_factor_examples() {
        assert_eq!(odd_prime_factors(45).unwrap(), vec![3, 5]);
        assert_eq!(odd_prime_factors(8).unwrap(), Vec::<u64>::new());
        assert_eq!(odd_prime_factors(105).unwrap(), vec![3, 5, 7]);
        assert_eq!(odd_prime_factors(1).unwrap(), Vec::<u64>::new());
    }

    #[test]
    fn incomplete_factorization_beyond_bound() {
        // 1000003 * 1000033 - both primes above the trial bound.
        let m = 1_000_003u64 * 1_000_033;
        let err = odd_prime_factors(m).unwrap_err();
        assert_eq!(err.cofactor, m);
        // A single large prime cofactor still factors fine.
        assert_eq!(odd_prime_factors(2 * 1_000_003).unwrap(), vec![1_000_003]);
    }

    #[test]
    fn two_adic_reconstructs_exhaustively() {
        for m in 1..=1_000_000u64 {
            let form = two_adic(m);
            assert_eq!(form.r & 1, 1, "odd part of {m} not odd");
            assert_eq!(form.reconstruct(), m);
        }
    }

    #[test]
    fn is_prime_matches_sieve_exhaustively() {
        let sieve = prime_sieve(1_000_000);
        for m in 0..=1_000_000u64 {
            assert_eq!(
                is_prime(m),
                sieve[m as usize],
                "primality disagreement at {m}"
            );
        }
    }

    #[test]
    fn odd_prime_factors_match_spf_sieve() {
        let spf = smallest_prime_factor_sieve(1_000_000);
        for m in 1..=1_000_000u64 {
            let got = odd_prime_factors(m).unwrap();
            let mut expected = Vec::new();
            let mut rest = m as usize;
            while rest > 1 {
                let p = spf[rest];
                if p != 2 {
                    expected.push(p as u64);
                }
                while rest.is_multiple_of(p) {
                    rest /= p;
                }
            }
            assert_eq!(got, expected, "factor mismatch at {m}");
        }
    }

    fn prime_sieve(limit: usize) -> Vec<bool> {
        let mut sieve = vec![true; limit + 1];
        sieve[0] = false;
        if limit >= 1 {
            sieve[1] = false;
        }
        let mut p = 2;
        while p * p <= limit {
            if sieve[p] {
                let mut q = p * p;
                while q <= limit {
                    sieve[q] = false;
                    q += p;
                }
            }
            p += 1;
        }
        sieve
    }

    fn smallest_prime_factor_sieve(limit: usize) -> Vec<usize> {
        let mut spf: Vec<usize> = (0..=limit).collect();
        let mut p = 2;
        while p * p <= limit {
            if spf[p] == p {
                let mut q = p * p;
                while q <= limit {
                    if spf[q] == q {
                        spf[q] = p;
                    }
                    q += p;
                }
            }
            p += 1;
        }
        spf
    }
}
