//! Splitting `n` along the twist `s`.
//!
//! For `s² ≡ 1`, `s ≢ ±1 (mod n)` we find coprime `n₁`, `n₂` with
//! `s ≡ −1 (mod n₁)`, `s ≡ 1 (mod n₂)` and either `n = n₁n₂` (case A) or
//! `n = 2n₁n₂` (case B). Writing `n = 2ᵗm` with `m` odd, `m₁ = gcd(m, s+1)` and
//! `m₂ = gcd(m, s−1)` split `m`, and the power of two is placed according to
//! `s mod 2ᵗ`. The reduction `k ↦ (k mod n₁, k mod n₂)` then turns
//! multiplication by `s` into `(e₁, e₂) ↦ (−e₁, e₂)`.

use serde::Serialize;

use crate::error::GroupError;
use crate::group::{gcd, validate_params};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FactorCase {
    /// `n = n₁n₂`
    A,
    /// `n = 2n₁n₂`
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub n: u64,
    pub s: u64,
    pub n1: u64,
    pub n2: u64,
    #[serde(rename = "case")]
    pub case: FactorCase,
    /// 2-adic valuation of `n`.
    pub t: u32,
    /// Odd part of `n`.
    pub m: u64,
    pub m1: u64,
    pub m2: u64,
}

pub fn factor(n: i64, s: i64) -> Result<Factorization, GroupError> {
    if !validate_params(n, s)?.is_paper_metacyclic() {
        return Err(GroupError::NotPaperMetacyclic(format!("(n, s) = ({n}, {s})")));
    }
    let (n, s) = (n as u64, s.rem_euclid(n) as u64);
    let t = n.trailing_zeros();
    let m = n >> t;
    let m1 = gcd(m, s + 1);
    let m2 = gcd(m, s + m - 1);
    debug_assert_eq!(m1 * m2, m);
    let two_t = 1u64 << t;
    let s_mod = s % two_t;
    let (n1, n2, case) = match t {
        0 => (m1, m2, FactorCase::A),
        // Either side may take the factor 2; it goes to n₁ whenever s ≡ −1 (mod 2m₁).
        1 if (s + 1) % (2 * m1) == 0 => (2 * m1, m2, FactorCase::A),
        1 => (m1, 2 * m2, FactorCase::A),
        _ if s_mod == two_t - 1 => (two_t * m1, m2, FactorCase::A),
        _ if s_mod == 1 => (m1, two_t * m2, FactorCase::A),
        _ if t >= 3 && s_mod == two_t / 2 - 1 => (two_t / 2 * m1, m2, FactorCase::B),
        _ if t >= 3 && s_mod == two_t / 2 + 1 => (m1, two_t / 2 * m2, FactorCase::B),
        _ => unreachable!("s^2 = 1 mod 2^t leaves only s = +-1, 2^(t-1) +- 1"),
    };
    Ok(Factorization { n, s, n1, n2, case, t, m, m1, m2 })
}

/// Every invariant a factorization must satisfy; empty when all hold.
pub fn invariant_violations(f: &Factorization) -> Vec<String> {
    let mut out = Vec::new();
    let (n, s) = (f.n, f.s);
    if gcd(f.n1, f.n2) != 1 {
        out.push(format!("gcd(n1, n2) = {} != 1", gcd(f.n1, f.n2)));
    }
    if f.n1 > 1 && (s + 1) % f.n1 != 0 {
        out.push(format!("s = {s} is not -1 mod n1 = {}", f.n1));
    }
    if f.n2 > 1 && s % f.n2 != 1 {
        out.push(format!("s = {s} is not 1 mod n2 = {}", f.n2));
    }
    let product = match f.case {
        FactorCase::A => f.n1 * f.n2,
        FactorCase::B => 2 * f.n1 * f.n2,
    };
    if product != n {
        out.push(format!("case {:?} product {product} != n = {n}", f.case));
    }
    if (1u64 << f.t) * f.m != n || f.m % 2 == 0 {
        out.push(format!("n != 2^t * m with m odd (t = {}, m = {})", f.t, f.m));
    }
    if f.m1 != gcd(f.m, s + 1) || f.m2 != gcd(f.m, s + f.m - 1) || f.m1 * f.m2 != f.m {
        out.push(format!("m1 = {}, m2 = {} do not split m = {}", f.m1, f.m2, f.m));
    }
    out
}

/// `Ψ: C_n → C_{n₁} ⊕ C_{n₂}`, `k ↦ (k mod n₁, k mod n₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CrtProjection {
    pub n: u64,
    pub n1: u64,
    pub n2: u64,
}

impl CrtProjection {
    pub fn new(f: &Factorization) -> Self {
        CrtProjection { n: f.n, n1: f.n1, n2: f.n2 }
    }

    pub fn apply(&self, k: i64) -> (u64, u64) {
        let k = k.rem_euclid(self.n as i64) as u64;
        (k % self.n1, k % self.n2)
    }

    /// Number of residues mapped to each image point, or `None` if the fibres
    /// have different sizes.
    pub fn fibre_size(&self) -> Option<u64> {
        let mut hits = vec![0u64; (self.n1 * self.n2) as usize];
        for k in 0..self.n {
            let (a, b) = self.apply(k as i64);
            hits[(a * self.n2 + b) as usize] += 1;
        }
        let first = hits[0];
        hits.iter().all(|&h| h == first).then_some(first)
    }

    pub fn is_bijective(&self) -> bool {
        self.fibre_size() == Some(1)
    }
}

pub fn build_projection(f: &Factorization) -> CrtProjection {
    CrtProjection::new(f)
}

/// Checks `Ψ(a + b) = Ψ(a) + Ψ(b)` and `Ψ(s·k) = (−Ψ₁(k), Ψ₂(k))` on all residues.
pub fn projection_violations(f: &Factorization) -> Vec<String> {
    let psi = CrtProjection::new(f);
    let mut out = Vec::new();
    let n = f.n as i64;
    for k in 0..n {
        let (e1, e2) = psi.apply(k);
        let flipped = psi.apply(f.s as i64 * k);
        let expected = ((f.n1 - e1) % f.n1, e2);
        if flipped != expected {
            out.push(format!("sign flip fails at k = {k}: {flipped:?} != {expected:?}"));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let (x1, x2) = psi.apply(a);
            let (y1, y2) = psi.apply(b);
            if psi.apply(a + b) != ((x1 + y1) % f.n1, (x2 + y2) % f.n2) {
                out.push(format!("not additive at ({a}, {b})"));
            }
        }
    }
    let fibre = psi.fibre_size();
    let expected_fibre = match f.case {
        FactorCase::A => 1,
        FactorCase::B => 2,
    };
    if fibre != Some(expected_fibre) {
        out.push(format!("case {:?} projection has fibre size {fibre:?}, expected {expected_fibre}", f.case));
    }
    out
}

/// `n = pᵉ` or `n = 2pᵉ` for an odd prime `p`, `e ≥ 1`.
pub fn is_odd_prime_power_or_twice(n: u64) -> bool {
    let odd = if n % 2 == 0 { n / 2 } else { n };
    if odd < 3 || (n % 4 == 0) {
        return false;
    }
    let p = (3..=odd).find(|p| odd % p == 0).unwrap_or(odd);
    let mut rest = odd;
    while rest % p == 0 {
        rest /= p;
    }
    rest == 1
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FactorAudit {
    pub n_max: u64,
    pub pairs_checked: usize,
    pub case_a: usize,
    pub case_b: usize,
    /// Pairs where `n₁` or `n₂` is below 3.
    pub degenerate: Vec<(u64, u64)>,
    pub violations: Vec<String>,
    /// Moduli of the form `pᵉ` or `2pᵉ` scanned for admissible twists.
    pub excluded_moduli_scanned: usize,
    pub exclusion_violations: Vec<(u64, u64)>,
}

impl FactorAudit {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.exclusion_violations.is_empty()
    }
}

/// Factors every admissible `(n, s)` with `n ≤ n_max` and scans the excluded moduli.
pub fn audit_factorizations(n_max: u64) -> FactorAudit {
    let mut audit = FactorAudit { n_max, ..Default::default() };
    for n in 2..=n_max as i64 {
        let excluded = is_odd_prime_power_or_twice(n as u64);
        audit.excluded_moduli_scanned += usize::from(excluded);
        for s in 0..n {
            let admissible = validate_params(n, s).map(|c| c.is_paper_metacyclic()).unwrap_or(false);
            if !admissible {
                continue;
            }
            if excluded {
                audit.exclusion_violations.push((n as u64, s as u64));
            }
            audit.pairs_checked += 1;
            let f = match factor(n, s) {
                Ok(f) => f,
                Err(e) => {
                    audit.violations.push(format!("({n}, {s}): {e}"));
                    continue;
                }
            };
            match f.case {
                FactorCase::A => audit.case_a += 1,
                FactorCase::B => audit.case_b += 1,
            }
            if f.n1 < 3 || f.n2 < 3 {
                audit.degenerate.push((f.n, f.s));
            }
            for v in invariant_violations(&f).into_iter().chain(projection_violations(&f)) {
                audit.violations.push(format!("({n}, {s}): {v}"));
            }
        }
    }
    audit
}
