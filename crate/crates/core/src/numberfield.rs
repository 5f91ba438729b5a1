//! The two field families: cyclotomic `Q(zeta_n)` and quadratic `Q(sqrt d)`.
//!
//! A prime ideal above `p` is represented only through its residue degree
//! `f` and norm `p^f`. All primes above `p` in a Galois field share `f`, and
//! nothing downstream needs more than the norm.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{self, ensure_prime, factorize};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FieldSpec {
    /// `Q(zeta_n)`; `n = 1` is the rationals.
    Cyclotomic { n: u64 },
    /// `Q(sqrt d)` for square-free `d` outside `{0, 1}`.
    Quadratic { d: i64 },
}

impl FieldSpec {
    pub fn cyclotomic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Zero);
        }
        Ok(FieldSpec::Cyclotomic { n })
    }

    pub fn quadratic(d: i64) -> Result<Self> {
        validate_quadratic(d)?;
        Ok(FieldSpec::Quadratic { d })
    }

    /// Short family tag used in CSV output.
    pub fn kind(&self) -> &'static str {
        match self {
            FieldSpec::Cyclotomic { .. } => "cyclo",
            FieldSpec::Quadratic { .. } => "quad",
        }
    }

    /// `n` or `d` rendered as text.
    pub fn param(&self) -> String {
        match self {
            FieldSpec::Cyclotomic { n } => n.to_string(),
            FieldSpec::Quadratic { d } => d.to_string(),
        }
    }

    pub fn is_valid(&self) -> bool {
        match *self {
            FieldSpec::Cyclotomic { n } => n >= 1,
            FieldSpec::Quadratic { d } => validate_quadratic(d).is_ok(),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind(), self.param())
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let syntax = || Error::FieldSyntax(s.to_string());
        let (kind, value) = s.split_once(':').ok_or_else(syntax)?;
        match kind.trim() {
            "cyclo" => FieldSpec::cyclotomic(value.trim().parse().map_err(|_| syntax())?),
            "quad" => FieldSpec::quadratic(value.trim().parse().map_err(|_| syntax())?),
            _ => Err(syntax()),
        }
    }
}

impl From<FieldSpec> for String {
    fn from(f: FieldSpec) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for FieldSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Residue data of a prime ideal above `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeLocalization {
    pub p: u64,
    pub residue_degree: u32,
    pub norm: u128,
}

pub(crate) fn validate_quadratic(d: i64) -> Result<()> {
    if d == 0 || d == 1 {
        return Err(Error::DegenerateQuadratic(d));
    }
    if d == i64::MIN || !factorize(d.unsigned_abs())?.is_square_free() {
        return Err(Error::NotSquareFree(d));
    }
    Ok(())
}

/// Field discriminant: `d` when `d = 1 (mod 4)`, otherwise `4d`.
pub fn discriminant(d: i64) -> Result<i64> {
    validate_quadratic(d)?;
    if d.rem_euclid(4) == 1 {
        Ok(d)
    } else {
        d.checked_mul(4).ok_or(Error::Overflow("discriminant"))
    }
}

/// Splitting behaviour of `p` in `Q(sqrt d)`: 1 split, 0 ramified, -1 inert.
///
/// For odd `p` this is the Legendre symbol of the discriminant. At `p = 2` the
/// value follows the dyadic splitting rule on the discriminant modulo 8.
pub fn splitting_symbol(d: i64, p: u64) -> Result<i8> {
    let delta = discriminant(d)?;
    ensure_prime(p)?;
    if p == 2 {
        return Ok(match delta.rem_euclid(8) {
            1 => 1,
            5 => -1,
            _ => 0,
        });
    }
    arith::legendre(delta, p)
}

/// Residue degree of a prime above `p`; never overflows.
pub fn residue_degree(field: &FieldSpec, p: u64) -> Result<u32> {
    ensure_prime(p)?;
    match *field {
        FieldSpec::Cyclotomic { n } => {
            if n == 0 {
                return Err(Error::Zero);
            }
            let n0 = arith::coprime_part(n, p);
            let f = arith::mult_order(p % n0.max(1), n0)?;
            u32::try_from(f).map_err(|_| Error::Overflow("residue degree"))
        }
        FieldSpec::Quadratic { d } => Ok(if splitting_symbol(d, p)? >= 0 { 1 } else { 2 }),
    }
}

pub fn localize(field: &FieldSpec, p: u64) -> Result<PrimeLocalization> {
    let f = residue_degree(field, p)?;
    let norm = (p as u128)
        .checked_pow(f)
        .ok_or(Error::Overflow("norm p^f"))?;
    Ok(PrimeLocalization {
        p,
        residue_degree: f,
        norm,
    })
}

/// `[K(zeta_m) : K]`.
///
/// For `K = Q(zeta_n)` this is `phi(lcm(n, m)) / phi(n)`, computed from the
/// merged prime factorizations so the lcm never has to be materialized. For
/// `K = Q(sqrt d)` the degree halves exactly when `K` sits inside
/// `Q(zeta_m)`, i.e. when `|disc|` divides `m`.
pub fn degree_adjoin(field: &FieldSpec, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::Zero);
    }
    match *field {
        FieldSpec::Cyclotomic { n } => {
            let fm = factorize(m)?;
            let fn_ = factorize(n)?;
            // phi(lcm)/phi(n) = prod over r | m of the extra factor contributed by r
            Ok(fm
                .factors()
                .iter()
                .map(|&(r, k)| {
                    let j = fn_.exponent_of(r);
                    if j == 0 {
                        r.pow(k - 1) * (r - 1)
                    } else {
                        r.pow(k.saturating_sub(j))
                    }
                })
                .product())
        }
        FieldSpec::Quadratic { d } => {
            let phi = arith::euler_phi(m)?;
            if m >= 3 && contains_quadratic(d, m)? {
                Ok(phi / 2)
            } else {
                Ok(phi)
            }
        }
    }
}

/// Whether `Q(sqrt d)` is a subfield of `Q(zeta_m)`.
pub fn contains_quadratic(d: i64, m: u64) -> Result<bool> {
    let delta = discriminant(d)?;
    Ok(m % delta.unsigned_abs() == 0)
}

/// Whether adjoining `zeta_k` to the maximal real subfield of `Q(zeta_m)`
/// already gives `Q(zeta_m)(zeta_k)`.
pub fn real_cyclotomic_adjoin_equal(m: u64, k: u64) -> bool {
    m <= 2 || arith::gcd(m, k) >= 3
}

/// Whether `Q(sqrt d)(zeta_m + zeta_m^-1) = Q(sqrt d)(zeta_m)`.
pub fn quadratic_real_adjoin_equal(d: i64, m: u64) -> Result<bool> {
    let delta = discriminant(d)?;
    Ok(m <= 2 || (d < 0 && m % delta.unsigned_abs() == 0))
}
