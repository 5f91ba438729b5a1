//! Definition-level checks that do not consult any closed-form criterion.
//!
//! `O_p[G]` is clean exactly when, for every divisor `m` of the `p`-free part
//! `n` of the exponent, `[K(zeta_m) : K]` equals the multiplicative order of
//! the norm `q = N(p)` modulo `m`. Equivalently, `x^n - 1` factors over the
//! residue field `F_q` into pieces of the same degrees as over `K`. This
//! module evaluates that condition directly and also computes the residue
//! factor degrees two ways: from cyclotomic cosets, and by distinct-degree
//! factorization of `x^n - 1` over `F_p` followed by base extension to `F_q`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arith::{self, coprime_part, ensure_prime, euler_phi, gcd, mult_order, pow_mod};
use crate::decide::{field_group_algebra_star_clean, StarClean};
use crate::error::{Error, Result};
use crate::numberfield::{degree_adjoin, discriminant, FieldSpec};

/// Dense polynomial over `F_p`, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl PrimePoly {
    pub fn new(p: u64, coeffs: impl IntoIterator<Item = u64>) -> Self {
        let mut poly = PrimePoly {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.trim();
        poly
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(p: u64, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[0] = p - 1;
        coeffs[n] += 1;
        PrimePoly::new(p, coeffs)
    }

    pub fn x(p: u64) -> Self {
        PrimePoly::new(p, [0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn sub(&self, other: &PrimePoly) -> PrimePoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let p = self.p;
        PrimePoly::new(
            p,
            (0..len).map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            }),
        )
    }

    pub fn mul(&self, other: &PrimePoly) -> PrimePoly {
        if self.is_zero() || other.is_zero() {
            return PrimePoly::new(self.p, []);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + arith::mul_mod(a, b, self.p)) % self.p;
            }
        }
        PrimePoly::new(self.p, out)
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &PrimePoly) -> (PrimePoly, PrimePoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = self.inv(divisor.coeffs[dd]);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (PrimePoly::new(self.p, []), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = arith::mul_mod(rem[k], lead_inv, self.p);
            if c == 0 {
                continue;
            }
            quot[k - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = (rem[idx] + self.p - arith::mul_mod(c, b, self.p)) % self.p;
            }
        }
        rem.truncate(dd);
        (PrimePoly::new(self.p, quot), PrimePoly::new(self.p, rem))
    }

    pub fn rem(&self, divisor: &PrimePoly) -> PrimePoly {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> PrimePoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lead) => {
                let inv = self.inv(lead);
                PrimePoly::new(self.p, self.coeffs.iter().map(|&c| arith::mul_mod(c, inv, self.p)))
            }
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &PrimePoly) -> PrimePoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^exp mod modulus` by repeated squaring.
    pub fn pow_mod(&self, mut exp: u64, modulus: &PrimePoly) -> PrimePoly {
        let mut acc = PrimePoly::new(self.p, [1]).rem(modulus);
        let mut base = self.rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            exp >>= 1;
        }
        acc
    }
}

/// Multiset of irreducible-factor degrees.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DegreeMultiset(BTreeMap<u64, u64>);

impl DegreeMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, degree: u64, count: u64) {
        if count > 0 {
            *self.0.entry(degree).or_insert(0) += count;
        }
    }

    pub fn multiplicity(&self, degree: u64) -> u64 {
        self.0.get(&degree).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.0.iter().map(|(&d, &k)| (d, k))
    }

    /// Sum of degree times multiplicity.
    pub fn total_degree(&self) -> u64 {
        self.iter().map(|(d, k)| d * k).sum()
    }

    pub fn factor_count(&self) -> u64 {
        self.0.values().sum()
    }
}

impl FromIterator<(u64, u64)> for DegreeMultiset {
    fn from_iter<I: IntoIterator<Item = (u64, u64)>>(iter: I) -> Self {
        let mut m = DegreeMultiset::new();
        for (d, k) in iter {
            m.add(d, k);
        }
        m
    }
}

impl fmt::Display for DegreeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (d, k)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}:{k}")?;
        }
        f.write_str("}")
    }
}

/// Residue degree of a prime above `p`, derived without the splitting symbol.
///
/// Quadratic fields count roots of the minimal polynomial of the integral
/// generator modulo `p` (its ring of integers is monogenic): no root means
/// inert. Cyclotomic fields use `f = ord_{n0} p`.
pub fn oracle_residue_degree(field: &FieldSpec, p: u64) -> Result<u32> {
    ensure_prime(p)?;
    match *field {
        FieldSpec::Cyclotomic { n } => {
            if n == 0 {
                return Err(Error::Zero);
            }
            let f = mult_order(p, coprime_part(n, p))?;
            u32::try_from(f).map_err(|_| Error::Overflow("residue degree"))
        }
        FieldSpec::Quadratic { d } => {
            let delta = discriminant(d)?;
            let has_root = if p == 2 {
                // x^2 - x + (1 - d)/4 or x^2 - d, evaluated at 0 and 1
                let c = if d.rem_euclid(4) == 1 { (1 - d) / 4 } else { -d };
                let lin = if d.rem_euclid(4) == 1 { -1 } else { 0 };
                (0..2i64).any(|x| (x * x + lin * x + c).rem_euclid(2) == 0)
            } else {
                // the discriminant of the minimal polynomial is delta
                let r = delta.rem_euclid(p as i64) as u64;
                r == 0 || pow_mod(r, (p - 1) / 2, p) == 1
            };
            Ok(if has_root { 1 } else { 2 })
        }
    }
}

/// `N(p)` reduced modulo `m`.
fn norm_mod(p: u64, f: u32, m: u64) -> u64 {
    pow_mod(p, f as u64, m)
}

/// Divisor criterion: `[K(zeta_m):K] = ord_m N(p)` for all `m | n`.
pub fn oracle_clean(field: &FieldSpec, p: u64, exponent: u64) -> Result<bool> {
    Ok(first_failing_divisor(field, p, exponent)?.is_none())
}

/// Smallest divisor `m` of the `p`-free exponent at which the divisor
/// criterion fails.
pub fn first_failing_divisor(field: &FieldSpec, p: u64, exponent: u64) -> Result<Option<u64>> {
    if exponent == 0 {
        return Err(Error::Zero);
    }
    let f = oracle_residue_degree(field, p)?;
    let n = coprime_part(exponent, p);
    for m in arith::divisors(n)? {
        let order = mult_order(norm_mod(p, f, m), m)?;
        if degree_adjoin(field, m)? != order {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// `O_p[G]` is *-clean iff it is clean and `K[G]` is *-clean, provided `p`
/// does not divide the exponent.
pub fn oracle_star_clean(field: &FieldSpec, p: u64, exponent: u64) -> Result<StarClean> {
    ensure_prime(p)?;
    if exponent == 0 {
        return Err(Error::Zero);
    }
    if exponent % p == 0 {
        return Ok(StarClean::OutOfScope);
    }
    Ok((oracle_clean(field, p, exponent)? && field_group_algebra_star_clean(field, exponent)?).into())
}

/// One row of the per-divisor decomposition `x^n - 1 = prod_{m | n} Phi_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DivisorRow {
    pub m: u64,
    pub phi: u64,
    /// `ord_m q`, the degree of every irreducible factor of `Phi_m` over `F_q`.
    pub order: u64,
    pub count: u64,
}

/// Per-divisor factor data for `x^n - 1` over `F_q`, given `q mod n`.
pub fn divisor_breakdown(n: u64, q_mod_n: u64) -> Result<Vec<DivisorRow>> {
    if gcd(q_mod_n, n) != 1 {
        return Err(Error::NotCoprime { a: q_mod_n, n });
    }
    arith::divisors(n)?
        .into_iter()
        .map(|m| {
            let phi = euler_phi(m)?;
            let order = mult_order(q_mod_n % m, m)?;
            Ok(DivisorRow {
                m,
                phi,
                order,
                count: phi / order,
            })
        })
        .collect()
}

/// Orbit sizes of `x -> q x` on `Z/nZ`.
fn coset_orbits(n: u64, q_mod_n: u64) -> DegreeMultiset {
    let len = n as usize;
    let mut seen = vec![false; len];
    let mut out = DegreeMultiset::new();
    for start in 0..len {
        if seen[start] {
            continue;
        }
        let mut x = start;
        let mut size = 0;
        while !seen[x] {
            seen[x] = true;
            size += 1;
            x = arith::mul_mod(x as u64, q_mod_n, n) as usize;
        }
        out.add(size, 1);
    }
    out
}

pub(crate) fn cosets_from_residue(n: u64, q_mod_n: u64) -> Result<DegreeMultiset> {
    let formula: DegreeMultiset = divisor_breakdown(n, q_mod_n)?
        .into_iter()
        .map(|r| (r.order, r.count))
        .collect();
    let orbits = coset_orbits(n, q_mod_n);
    if formula != orbits {
        return Err(Error::AlgorithmMismatch {
            what: "divisor formula and coset orbits",
            n,
            q: q_mod_n as u128,
        });
    }
    Ok(formula)
}

/// Degrees of the irreducible factors of `x^n - 1` over `F_q` from
/// cyclotomic cosets. The divisor formula and the explicit orbit count are
/// both evaluated and must agree.
pub fn factor_degrees_cosets(n: u64, q: u128) -> Result<DegreeMultiset> {
    if n == 0 {
        return Err(Error::Zero);
    }
    if q < 2 {
        return Err(Error::NotCoprime { a: q as u64, n });
    }
    let r = (q % n as u128) as u64;
    if gcd(r, n) != 1 {
        return Err(Error::NotCoprime { a: r, n });
    }
    cosets_from_residue(n, r)
}

/// Degrees of the irreducible factors of `x^n - 1` over `F_p` by
/// distinct-degree factorization. `x^n - 1` is square-free when `p` does not
/// divide `n`, so no equal-degree splitting is needed.
pub fn factor_degrees_ddf(n: u64, p: u64) -> Result<DegreeMultiset> {
    if n == 0 {
        return Err(Error::Zero);
    }
    ensure_prime(p)?;
    if n % p == 0 {
        return Err(Error::PrimeDivides { p, n });
    }
    let len = usize::try_from(n).map_err(|_| Error::Overflow("polynomial degree"))?;
    let mut rest = PrimePoly::x_pow_minus_one(p, len);
    let x = PrimePoly::x(p);
    let mut frob = x.clone();
    let mut out = DegreeMultiset::new();
    let mut i: usize = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        // frob = x^(p^i) mod rest
        frob = frob.pow_mod(p, &rest);
        let g = frob.sub(&x).gcd(&rest);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 {
            out.add(i as u64, (gd / i) as u64);
            rest = rest.div_rem(&g).0;
            frob = frob.rem(&rest);
        }
        i += 1;
    }
    if let Some(d) = rest.degree().filter(|&d| d > 0) {
        out.add(d as u64, 1);
    }
    Ok(out)
}

/// Base change from `F_p` to `F_{p^f}`: a degree-`e` irreducible splits into
/// `gcd(e, f)` irreducibles of degree `e / gcd(e, f)`.
pub fn lift_degrees(base: &DegreeMultiset, f: u64) -> DegreeMultiset {
    assert!(f >= 1, "extension degree must be positive");
    base.iter()
        .map(|(e, k)| {
            let g = gcd(e, f);
            (e / g, k * g)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub n: u64,
    pub residue_degree: u32,
    /// DDF over `F_p` lifted to the residue field.
    pub residue_degrees: DegreeMultiset,
    pub coset_degrees: DegreeMultiset,
    /// `{[K(zeta_m):K] with multiplicity phi(m)/[K(zeta_m):K] : m | n}`.
    pub field_degrees: DegreeMultiset,
    pub algorithms_agree: bool,
    pub degrees_match: bool,
    pub first_divergent_divisor: Option<u64>,
    pub oracle_clean: bool,
    /// The degree comparison and the divisor criterion tell the same story.
    pub consistent: bool,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.algorithms_agree && self.degrees_match
    }
}

/// Cross-checks the residue factor degrees against the field-side degrees.
pub fn degree_consistency(field: &FieldSpec, p: u64, exponent: u64) -> Result<ConsistencyReport> {
    if exponent == 0 {
        return Err(Error::Zero);
    }
    let f = oracle_residue_degree(field, p)?;
    let n = coprime_part(exponent, p);
    let residue_degrees = lift_degrees(&factor_degrees_ddf(n, p)?, f as u64);
    let coset_degrees = cosets_from_residue(n, norm_mod(p, f, n))?;
    let mut field_degrees = DegreeMultiset::new();
    for m in arith::divisors(n)? {
        let k = degree_adjoin(field, m)?;
        field_degrees.add(k, euler_phi(m)? / k);
    }
    let algorithms_agree = residue_degrees == coset_degrees;
    let degrees_match = residue_degrees == field_degrees;
    let first_divergent_divisor = first_failing_divisor(field, p, exponent)?;
    let oracle_clean = first_divergent_divisor.is_none();
    Ok(ConsistencyReport {
        n,
        residue_degree: f,
        residue_degrees,
        coset_degrees,
        field_degrees,
        algorithms_agree,
        degrees_match,
        first_divergent_divisor,
        oracle_clean,
        consistent: algorithms_agree && oracle_clean == degrees_match,
    })
}
