//! Obstruction certificates: machine-checkable witnesses that pretty good
//! state transfer fails between a mirror pair.
//!
//! A certificate holds, for each parity class of eigenvalue indices, a set
//! of integer coefficients supported on the vertex's eigenvalue support
//! whose weighted eigenvalue sum vanishes while the coefficient sum is odd.
//! By Kronecker's approximation theorem such a pair of relations forces the
//! transfer phase toward two incompatible values at once, so no time can
//! bring the fidelity arbitrarily close to 1.
//!
//! Writing `n + 1 = 2^t * r` with `r` odd, the generator covers every
//! negative mirror instance with one of three constructions:
//!
//! * `DyadicPrimeBlock` (`t >= 1`, an odd prime `p | r` also divides the
//!   support modulus): alternating coefficients on `c + i * 2^t * p`.
//! * `DyadicResidueBlock` (`t >= 2`): alternating coefficients on
//!   `c + i * 2^t`, used when `r` divides `a`, and equally when `r` is
//!   prime but `a` misses the `2^(t-1)` alignment.
//! * `OddReflectionBlock` (`t = 0`): the alternating block on `c + i * p`
//!   folded into a single parity class through the eigenvalue reflection
//!   `theta_{n+1-j} = -theta_j`, leaving all coefficients at +1.
//!
//! Each block has odd length (`r/p` or `r`), so the coefficient sums are
//! odd, and the weighted sums vanish by the two alternating-cosine
//! identities exposed here as [`lemma4_sum`] and [`lemma5_sum`].

use std::collections::BTreeMap;
use std::fmt;

use crate::classifier::{classify, Classification, Reason, Verdict};
use crate::numtheory::{odd_prime_factors, two_adic, IncompleteFactorization};
use crate::spectra::{spectrum, support, SpectraError};
use crate::trig::cos_pi_ratio;

/// Relative tolerance for the numeric zero-sum check: the identities are
/// exact, so the allowance only covers floating-point accumulation.
pub const ZERO_SUM_TOL: f64 = 1e-10;

/// Largest coefficient class the generator will materialize. Block lengths
/// grow with the odd part of `n + 1`, so a huge odd composite would demand
/// a certificate too big to hold, let alone check.
pub const MAX_CLASS_LEN: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    DyadicPrimeBlock,
    DyadicResidueBlock,
    OddReflectionBlock,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::DyadicPrimeBlock => "DYADIC_PRIME_BLOCK",
            CaseTag::DyadicResidueBlock => "DYADIC_RESIDUE_BLOCK",
            CaseTag::OddReflectionBlock => "ODD_REFLECTION_BLOCK",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "DYADIC_PRIME_BLOCK" => Some(CaseTag::DyadicPrimeBlock),
            "DYADIC_RESIDUE_BLOCK" => Some(CaseTag::DyadicResidueBlock),
            "ODD_REFLECTION_BLOCK" => Some(CaseTag::OddReflectionBlock),
            _ => None,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Integer coefficients witnessing the failure of transfer between `a` and
/// `n + 1 - a`. Indices are sorted, coefficients never zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionCertificate {
    pub n: u64,
    pub a: u64,
    pub case_tag: CaseTag,
    /// Coefficients on odd eigenvalue indices.
    pub odd_class: BTreeMap<u64, i64>,
    /// Coefficients on even eigenvalue indices.
    pub even_class: BTreeMap<u64, i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CertificateError {
    /// The pair is not a negative mirror instance, so no certificate exists.
    NotApplicable { n: u64, a: u64, classification: Classification },
    Spectra(SpectraError),
    Factorization(IncompleteFactorization),
    /// Identity-evaluator parameter that must be an odd integer >= 3.
    InvalidOddParameter { name: &'static str, value: u64 },
    /// [`lemma5_sum`] offset outside `0..k`.
    OffsetOutOfRange { offset: u64, k: u64 },
    /// [`lemma5_sum`] product `k * m` does not fit the supported index range.
    ParameterOverflow { k: u64, m: u64 },
    /// The construction exists but needs more than [`MAX_CLASS_LEN`]
    /// coefficients per class.
    CertificateTooLarge { class_len: u64 },
    /// Certificate document parse failure (line number and message).
    Document { line: usize, message: String },
}

impl fmt::Display for CertificateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateError::NotApplicable { n, a, classification } => write!(
                f,
                "no obstruction certificate for (n={n}, a={a}): pair is {} ({})",
                classification.verdict, classification.reason
            ),
            CertificateError::Spectra(e) => e.fmt(f),
            CertificateError::Factorization(e) => e.fmt(f),
            CertificateError::InvalidOddParameter { name, value } => {
                write!(f, "{name} must be an odd integer >= 3, got {value}")
            }
            CertificateError::OffsetOutOfRange { offset, k } => {
                write!(f, "offset {offset} outside 0..{k}")
            }
            CertificateError::ParameterOverflow { k, m } => {
                write!(f, "product {k} * {m} exceeds the supported range")
            }
            CertificateError::CertificateTooLarge { class_len } => write!(
                f,
                "certificate would need {class_len} coefficients per class (limit {MAX_CLASS_LEN})"
            ),
            CertificateError::Document { line, message } => {
                write!(f, "certificate document line {line}: {message}")
            }
        }
    }
}

impl std::error::Error for CertificateError {}

impl From<SpectraError> for CertificateError {
    fn from(e: SpectraError) -> Self {
        CertificateError::Spectra(e)
    }
}

impl From<IncompleteFactorization> for CertificateError {
    fn from(e: IncompleteFactorization) -> Self {
        CertificateError::Factorization(e)
    }
}

/// Evaluates `2 * sum_{k=1}^{(q-1)/2} (-1)^k cos(k*pi/q) + 1` for odd
/// `q >= 3`; identically zero, returned for numeric inspection.
pub fn lemma4_sum(q: u64) -> Result<f64, CertificateError> {
    if q.is_multiple_of(2) || q < 3 {
        return Err(CertificateError::InvalidOddParameter { name: "q", value: q });
    }
    let mut sum = 0.0;
    let mut sign = -1.0;
    for k in 1..=(q - 1) / 2 {
        sum += sign * cos_pi_ratio(k as u128, q);
        sign = -sign;
    }
    Ok(2.0 * sum + 1.0)
}

/// Evaluates `sum_{j=0}^{m-1} (-1)^j cos((offset + j*k)*pi/(k*m))` for odd
/// `m >= 3` and `0 <= offset < k`; identically zero.
pub fn lemma5_sum(k: u64, m: u64, offset: u64) -> Result<f64, CertificateError> {
    if m.is_multiple_of(2) || m < 3 {
        return Err(CertificateError::InvalidOddParameter { name: "m", value: m });
    }
    if k == 0 || offset >= k {
        return Err(CertificateError::OffsetOutOfRange { offset, k });
    }
    let km = k
        .checked_mul(m)
        .ok_or(CertificateError::ParameterOverflow { k, m })?;
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 0..m {
        sum += sign * cos_pi_ratio(offset as u128 + j as u128 * k as u128, km);
        sign = -sign;
    }
    Ok(sum)
}

/// Builds the obstruction certificate for the mirror pair `(a, n + 1 - a)`.
///
/// Requires the pair to classify as no-transfer; degenerate and positive
/// instances return [`CertificateError::NotApplicable`]. When several odd
/// primes are eligible the smallest is taken, so output is deterministic.
pub fn generate_certificate(n: u64, a: u64) -> Result<ObstructionCertificate, CertificateError> {
    let b = n
        .checked_add(1)
        .and_then(|m| m.checked_sub(a))
        .unwrap_or(0);
    let classification = classify(n, a, b)?;
    let applicable = classification.verdict == Verdict::NoPgst
        && matches!(
            classification.reason,
            Reason::OddPartComposite | Reason::BadDyadicAlignment
        );
    if !applicable {
        return Err(CertificateError::NotApplicable { n, a, classification });
    }

    let m = n + 1;
    let form = two_adic(m);
    let (t, r) = (form.t, form.r);
    let mask = support(n, a)?;

    let certificate = if classification.reason == Reason::BadDyadicAlignment {
        // r prime, t >= 2, a misaligned: alternating block of length r on
        // the residues c mod 2^t.
        ensure_class_len(r)?;
        residue_block(n, a, t, r)
    } else if t >= 1 {
        match block_prime(r, mask.step())? {
            Some(p) => {
                ensure_class_len(r / p)?;
                prime_block(n, a, t, r, p)
            }
            // Every prime of r divides gcd(a, n+1), hence r | a and t >= 2
            // (a = 2^(t-1) r is the excluded center).
            None => {
                debug_assert!(t >= 2 && a.is_multiple_of(r));
                ensure_class_len(r)?;
                residue_block(n, a, t, r)
            }
        }
    } else {
        let p = block_prime(r, mask.step())?
            .expect("t = 0 forces some prime of r to divide the support modulus");
        ensure_class_len(r / p)?;
        reflection_block(n, a, r, p)
    };

    for (j, _) in certificate.odd_class.iter().chain(certificate.even_class.iter()) {
        assert!(
            *j >= 1 && *j <= n && mask.contains(*j),
            "constructed index {j} escapes the support of vertex {a} on P_{n}"
        );
    }
    Ok(certificate)
}

/// Smallest odd prime dividing both `r` and the support modulus.
fn block_prime(r: u64, step: u64) -> Result<Option<u64>, CertificateError> {
    Ok(odd_prime_factors(r)?
        .into_iter()
        .find(|&p| step.is_multiple_of(p)))
}

fn ensure_class_len(class_len: u64) -> Result<(), CertificateError> {
    if class_len > MAX_CLASS_LEN {
        Err(CertificateError::CertificateTooLarge { class_len })
    } else {
        Ok(())
    }
}

fn alternating(indices: impl Iterator<Item = u64>) -> BTreeMap<u64, i64> {
    indices
        .enumerate()
        .map(|(i, j)| (j, if i % 2 == 0 { 1 } else { -1 }))
        .collect()
}

fn prime_block(n: u64, a: u64, t: u32, r: u64, p: u64) -> ObstructionCertificate {
    let stride = (1u64 << t) * p;
    let class = |c: u64| alternating((0..r / p).map(|i| c + i * stride));
    ObstructionCertificate {
        n,
        a,
        case_tag: CaseTag::DyadicPrimeBlock,
        odd_class: class(1),
        even_class: class(2),
    }
}

fn residue_block(n: u64, a: u64, t: u32, r: u64) -> ObstructionCertificate {
    let stride = 1u64 << t;
    let class = |c: u64| alternating((0..r).map(|i| c + i * stride));
    ObstructionCertificate {
        n,
        a,
        case_tag: CaseTag::DyadicResidueBlock,
        odd_class: class(1),
        even_class: class(2),
    }
}

fn reflection_block(n: u64, a: u64, r: u64, p: u64) -> ObstructionCertificate {
    let half = (r / p - 1) / 2;
    let class = |c: u64| -> BTreeMap<u64, i64> {
        let forward = (0..=half).map(move |i| c + 2 * p * i);
        let reflected = (0..half).map(move |i| n + 1 - (c + p + 2 * p * i));
        let map: BTreeMap<u64, i64> = forward.chain(reflected).map(|j| (j, 1)).collect();
        // Forward and reflected runs never collide (that would need p | 2c),
        // so the block keeps its full odd length r/p.
        debug_assert_eq!(map.len() as u64, r / p);
        map
    };
    ObstructionCertificate {
        n,
        a,
        case_tag: CaseTag::OddReflectionBlock,
        odd_class: class(1),
        even_class: class(2),
    }
}

/// Outcome of checking a certificate against the four obstruction conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    /// (i) every index sits in its parity class (and in `1..=n`).
    pub parity_ok: bool,
    /// (ii) every index lies in the eigenvalue support of `a`.
    pub support_ok: bool,
    /// (iii) both coefficient sums are odd.
    pub coefficient_sums_odd: bool,
    /// (iv) both weighted eigenvalue sums vanish within tolerance.
    pub zero_sum_ok: bool,
    pub odd_class_residual: f64,
    pub even_class_residual: f64,
    /// Per-class bounds `ZERO_SUM_TOL * sum |l_j|`.
    pub odd_class_bound: f64,
    pub even_class_bound: f64,
}

impl CertificateReport {
    pub fn all_passed(&self) -> bool {
        self.parity_ok && self.support_ok && self.coefficient_sums_odd && self.zero_sum_ok
    }
}

/// Checks a certificate; failures are reported, never thrown. Out-of-range
/// indices fail the support condition and are left out of the residuals.
pub fn check_certificate(cert: &ObstructionCertificate) -> Result<CertificateReport, CertificateError> {
    let spec = spectrum(cert.n)?;
    let mask = support(cert.n, cert.a)?;

    let mut parity_ok = true;
    let mut support_ok = true;
    let mut sums_odd = true;
    let mut residuals = [0.0f64; 2];
    let mut bounds = [0.0f64; 2];

    for (class_idx, (class, want_odd_index)) in
        [(&cert.odd_class, true), (&cert.even_class, false)].into_iter().enumerate()
    {
        let mut weighted = 0.0;
        let mut abs_coeff = 0.0;
        let mut coeff_sum = 0i64;
        for (&j, &l) in class {
            if (j % 2 == 1) != want_odd_index {
                parity_ok = false;
            }
            if j < 1 || j > cert.n {
                support_ok = false;
                continue;
            }
            if !mask.contains(j) {
                support_ok = false;
            }
            weighted += l as f64 * spec.eigenvalue(j);
            abs_coeff += l.unsigned_abs() as f64;
            coeff_sum = coeff_sum.wrapping_add(l);
        }
        if coeff_sum.rem_euclid(2) != 1 {
            sums_odd = false;
        }
        residuals[class_idx] = weighted.abs();
        bounds[class_idx] = ZERO_SUM_TOL * abs_coeff;
    }

    Ok(CertificateReport {
        parity_ok,
        support_ok,
        coefficient_sums_odd: sums_odd,
        zero_sum_ok: residuals[0] <= bounds[0] && residuals[1] <= bounds[1],
        odd_class_residual: residuals[0],
        even_class_residual: residuals[1],
        odd_class_bound: bounds[0],
        even_class_bound: bounds[1],
    })
}

impl ObstructionCertificate {
    /// Canonical text form: `n`, `a`, `case` key-value lines, then one
    /// `odd <j> <coeff>` or `even <j> <coeff>` line per entry, ascending.
    pub fn to_document(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("n = {}\n", self.n));
        out.push_str(&format!("a = {}\n", self.a));
        out.push_str(&format!("case = {}\n", self.case_tag));
        for (j, l) in &self.odd_class {
            out.push_str(&format!("odd {j} {l}\n"));
        }
        for (j, l) in &self.even_class {
            out.push_str(&format!("even {j} {l}\n"));
        }
        out
    }

    /// Parses the canonical text form produced by [`Self::to_document`].
    pub fn parse_document(doc: &str) -> Result<Self, CertificateError> {
        let fail = |line: usize, message: &str| CertificateError::Document {
            line,
            message: message.to_string(),
        };
        let mut n = None;
        let mut a = None;
        let mut case_tag = None;
        let mut odd_class = BTreeMap::new();
        let mut even_class = BTreeMap::new();

        for (idx, raw) in doc.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                [key, "=", value] => match *key {
                    "n" => n = Some(value.parse().map_err(|_| fail(line_no, "bad n"))?),
                    "a" => a = Some(value.parse().map_err(|_| fail(line_no, "bad a"))?),
                    "case" => {
                        case_tag = Some(
                            CaseTag::parse(value).ok_or_else(|| fail(line_no, "unknown case tag"))?,
                        )
                    }
                    _ => return Err(fail(line_no, "unknown key")),
                },
                [class @ ("odd" | "even"), j, l] => {
                    let j: u64 = j.parse().map_err(|_| fail(line_no, "bad index"))?;
                    let l: i64 = l.parse().map_err(|_| fail(line_no, "bad coefficient"))?;
                    if l == 0 {
                        return Err(fail(line_no, "zero coefficient"));
                    }
                    let target = if *class == "odd" { &mut odd_class } else { &mut even_class };
                    if target.insert(j, l).is_some() {
                        return Err(fail(line_no, "duplicate index"));
                    }
                }
                _ => return Err(fail(line_no, "unrecognized line")),
            }
        }

        Ok(ObstructionCertificate {
            n: n.ok_or_else(|| fail(0, "missing n"))?,
            a: a.ok_or_else(|| fail(0, "missing a"))?,
            case_tag: case_tag.ok_or_else(|| fail(0, "missing case"))?,
            odd_class,
            even_class,
        })
    }
}
