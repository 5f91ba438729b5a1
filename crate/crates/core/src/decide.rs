//! Closed-form characterizations of clean and *-clean group rings `O_p[G]`.
//!
//! All criteria depend on `G` only through its exponent. The clean verdict
//! for cyclotomic fields compares multiplicative orders of `p` modulo the
//! pieces `n0`, `n1`, `m'` of the exponent; the quadratic verdict branches on
//! whether the discriminant divides the `p`-free part of the exponent and on
//! the residue class of `d` modulo 4.

use serde::Serialize;

use crate::arith::{self, checked_lcm, coprime_part, ensure_prime, euler_phi, factorize, gcd, mult_order};
use crate::error::{Error, Result};
use crate::numberfield::{self, discriminant, splitting_symbol, FieldSpec};

/// Finite abelian group given by invariant factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSpec {
    invariant_factors: Vec<u64>,
    exponent: u64,
}

impl GroupSpec {
    pub fn new(invariant_factors: Vec<u64>) -> Result<Self> {
        let exponent = invariant_factors
            .iter()
            .try_fold(1u64, |acc, &k| checked_lcm(acc, k))?;
        Ok(GroupSpec {
            invariant_factors,
            exponent,
        })
    }

    /// A cyclic group of order `e`; the trivial group when `e = 1`.
    pub fn from_exponent(e: u64) -> Result<Self> {
        match e {
            0 => Err(Error::Zero),
            1 => GroupSpec::new(Vec::new()),
            _ => GroupSpec::new(vec![e]),
        }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StarClean {
    True,
    False,
    /// `p` divides the exponent; no criterion applies.
    OutOfScope,
}

impl StarClean {
    pub fn as_str(&self) -> &'static str {
        match self {
            StarClean::True => "true",
            StarClean::False => "false",
            StarClean::OutOfScope => "out_of_scope",
        }
    }

    pub fn in_scope(&self) -> Option<bool> {
        match self {
            StarClean::True => Some(true),
            StarClean::False => Some(false),
            StarClean::OutOfScope => None,
        }
    }
}

impl From<bool> for StarClean {
    fn from(b: bool) -> Self {
        if b {
            StarClean::True
        } else {
            StarClean::False
        }
    }
}

/// Which case of the clean criterion produced the verdict. The string forms
/// are a stable part of the JSON and CSV output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "&'static str")]
pub enum Clause {
    Cyclotomic,
    Quad1a,
    Quad1b,
    Quad1c,
    /// `n = 1` with `p` inert: the divisor criterion holds vacuously.
    QuadTrivial,
    /// Discriminant does not divide `n` and no sub-case matched.
    Quad1None,
    Quad2,
    /// `d = -1`: `Q(i) = Q(zeta_4)`, decided by the cyclotomic criterion.
    Quad2Gaussian,
    Quad3a,
    Quad3b,
    Quad3c,
    Quad3d,
    Quad3None,
}

impl Clause {
    pub const ALL: [Clause; 13] = [
        Clause::Cyclotomic,
        Clause::Quad1a,
        Clause::Quad1b,
        Clause::Quad1c,
        Clause::QuadTrivial,
        Clause::Quad1None,
        Clause::Quad2,
        Clause::Quad2Gaussian,
        Clause::Quad3a,
        Clause::Quad3b,
        Clause::Quad3c,
        Clause::Quad3d,
        Clause::Quad3None,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Clause::Cyclotomic => "T1.1",
            Clause::Quad1a => "T1.3-1a",
            Clause::Quad1b => "T1.3-1b",
            Clause::Quad1c => "T1.3-1c",
            Clause::QuadTrivial => "T1.3-n<=1-trivial",
            Clause::Quad1None => "T1.3-1",
            Clause::Quad2 => "T1.3-2",
            Clause::Quad2Gaussian => "T1.3-2-gaussian",
            Clause::Quad3a => "T1.3-3a",
            Clause::Quad3b => "T1.3-3b",
            Clause::Quad3c => "T1.3-3c",
            Clause::Quad3d => "T1.3-3d",
            Clause::Quad3None => "T1.3-3",
        }
    }

    /// Keys of [`Derived`] that the clause's conditions are stated in.
    pub fn required_fields(&self) -> &'static [&'static str] {
        const CYCLO: &[&str] = &["n0", "n1", "n2", "m_prime", "ord_n0", "ord_n1", "ord_n0_m_prime", "phi_n1"];
        const QUAD: &[&str] = &["n", "delta", "symbol", "ord_n", "phi_n"];
        match self {
            Clause::Cyclotomic => CYCLO,
            Clause::Quad1a | Clause::Quad1b | Clause::Quad1None | Clause::Quad2 | Clause::Quad3a | Clause::Quad3None => QUAD,
            Clause::Quad1c | Clause::QuadTrivial => &["n", "delta", "symbol"],
            Clause::Quad2Gaussian => &["n", "delta", "symbol", "n0", "n1", "m_prime", "ord_n0", "ord_n1", "ord_n0_m_prime"],
            Clause::Quad3b => &["n", "delta", "symbol", "q1", "l1", "ord_q1_power"],
            Clause::Quad3c | Clause::Quad3d => &["n", "delta", "symbol", "q1", "l1", "q2", "l2"],
        }
    }
}

impl From<Clause> for &'static str {
    fn from(c: Clause) -> Self {
        c.as_str()
    }
}

impl std::fmt::Display for Clause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn decimal_string<S: serde::Serializer>(v: &Option<u128>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.collect_str(x),
        None => s.serialize_none(),
    }
}

/// Intermediate quantities of a decision. Absent entries are omitted from
/// the JSON; `norm` is written as a decimal string (it easily exceeds what
/// JSON numbers carry) and is `null` when `p^f` does not fit in 128 bits.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Derived {
    pub residue_degree: u32,
    #[serde(serialize_with = "decimal_string")]
    pub norm: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n0: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n2: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_prime: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ord_n0: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ord_n1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ord_n0_m_prime: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_n1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star_conductor: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star_n0: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star_n1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbol: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ord_n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l1: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q2: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l2: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ord_q1_power: Option<u64>,
}

impl Derived {
    /// Fills every cyclotomic slot that is still empty from `other`.
    fn absorb(&mut self, other: &Derived) {
        macro_rules! take {
            ($($f:ident),*) => {$( if self.$f.is_none() { self.$f = other.$f; } )*};
        }
        take!(n0, n1, n2, m_prime, ord_n0, ord_n1, ord_n0_m_prime, phi_n1);
    }
}

/// Verdict of a clean criterion before the group and localization are
/// attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanOutcome {
    pub clean: bool,
    pub clause: Clause,
    pub derived: Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub field: FieldSpec,
    pub prime: u64,
    pub exponent: u64,
    pub clean: bool,
    pub star_clean: StarClean,
    pub matched_clause: Clause,
    pub derived: Derived,
}

/// Largest divisor of `e` sharing no prime with `avoid`.
fn coprime_divisor(e: u64, avoid: u64) -> Result<u64> {
    Ok(factorize(e)?
        .factors()
        .iter()
        .filter(|&&(r, _)| avoid % r != 0)
        .map(|&(r, k)| r.pow(k))
        .product())
}

fn check_inputs(p: u64, exponent: u64) -> Result<()> {
    ensure_prime(p)?;
    if exponent == 0 {
        return Err(Error::Zero);
    }
    Ok(())
}

/// Clean criterion over `Q(zeta_n)`.
pub fn clean_cyclotomic(n: u64, p: u64, exponent: u64) -> Result<CleanOutcome> {
    check_inputs(p, exponent)?;
    if n == 0 {
        return Err(Error::Zero);
    }
    let n0 = coprime_part(n, p);
    let n2 = coprime_part(exponent, p);
    let n1 = coprime_divisor(n2, n0)?;
    let m_prime = checked_lcm(n2, n0)? / (n0 * n1);
    let ord_n0 = mult_order(p, n0)?;
    let ord_n1 = mult_order(p, n1)?;
    let ord_n0_m = mult_order(p, n0 * m_prime)?;
    let phi_n1 = euler_phi(n1)?;
    let clean = ord_n1 == phi_n1 && ord_n0_m == m_prime * ord_n0 && gcd(ord_n1, ord_n0_m) == 1;
    Ok(CleanOutcome {
        clean,
        clause: Clause::Cyclotomic,
        derived: Derived {
            n0: Some(n0),
            n1: Some(n1),
            n2: Some(n2),
            m_prime: Some(m_prime),
            ord_n0: Some(ord_n0),
            ord_n1: Some(ord_n1),
            ord_n0_m_prime: Some(ord_n0_m),
            phi_n1: Some(phi_n1),
            ..Derived::default()
        },
    })
}

/// Clean criterion for `Z_(p)[G]`: `p` is a primitive root of the `p`-free
/// part of the exponent.
pub fn clean_rational(p: u64, exponent: u64) -> Result<bool> {
    check_inputs(p, exponent)?;
    arith::is_primitive_root(p, coprime_part(exponent, p))
}

/// `Q(zeta_n) = Q(zeta_{n/2})` for `n = 2 (mod 4)`; the *-clean criterion is
/// evaluated on this representative.
pub fn canonical_conductor(n: u64) -> u64 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

/// *-clean criterion over `Q(zeta_n)`, in scope only when `p` does not
/// divide the exponent.
pub fn star_clean_cyclotomic(n: u64, p: u64, exponent: u64) -> Result<StarClean> {
    Ok(star_cyclotomic_detail(n, p, exponent)?.0)
}

fn star_cyclotomic_detail(n: u64, p: u64, exponent: u64) -> Result<(StarClean, Derived)> {
    check_inputs(p, exponent)?;
    if n == 0 {
        return Err(Error::Zero);
    }
    if exponent % p == 0 {
        return Ok((StarClean::OutOfScope, Derived::default()));
    }
    let conductor = canonical_conductor(n);
    let n0 = coprime_part(conductor, p);
    let n1 = coprime_divisor(exponent, n0)?;
    let ord_n1 = mult_order(p, n1)?;
    let ord_n0 = mult_order(p, n0)?;
    let star = ord_n1 == euler_phi(n1)?
        && exponent >= 3
        && exponent as u128 <= 2 * n1 as u128
        && gcd(ord_n1, ord_n0) == 1;
    let derived = Derived {
        star_conductor: Some(conductor),
        star_n0: Some(n0),
        star_n1: Some(n1),
        ..Derived::default()
    };
    Ok((star.into(), derived))
}

/// `n = q^l` with `l >= 1`.
fn power_of(n: u64, q: u64) -> Option<u32> {
    if q < 2 || n < q {
        return None;
    }
    let mut rest = n;
    let mut l = 0;
    while rest % q == 0 {
        rest /= q;
        l += 1;
    }
    (rest == 1 && l >= 1).then_some(l)
}

/// `n = q^l` or `2 q^l` for odd `q`.
fn odd_power_or_twice(n: u64, q: u64) -> Option<u32> {
    power_of(n, q).or_else(|| if n % 2 == 0 { power_of(n / 2, q) } else { None })
}

/// Splits `n = q1^l1 q2^l2` or `2 q1^l1 q2^l2` with distinct odd primes.
fn two_odd_prime_powers(n: u64) -> Result<Option<[(u64, u32); 2]>> {
    let f = factorize(n)?;
    if f.exponent_of(2) > 1 {
        return Ok(None);
    }
    let odd: Vec<_> = f.factors().iter().copied().filter(|&(r, _)| r != 2).collect();
    Ok(match odd.as_slice() {
        &[a, b] => Some([a, b]),
        _ => None,
    })
}

/// Clean criterion over `Q(sqrt d)`.
pub fn clean_quadratic(d: i64, p: u64, exponent: u64) -> Result<CleanOutcome> {
    check_inputs(p, exponent)?;
    let delta = discriminant(d)?;
    let abs_delta = delta.unsigned_abs();
    let symbol = splitting_symbol(d, p)?;
    let n = coprime_part(exponent, p);
    let ord_n = mult_order(p, n)?;
    let phi_n = euler_phi(n)?;
    let primitive = ord_n == phi_n;

    let mut derived = Derived {
        n: Some(n),
        delta: Some(delta),
        symbol: Some(symbol),
        ord_n: Some(ord_n),
        phi_n: Some(phi_n),
        ..Derived::default()
    };
    let outcome = |clean, clause, derived| CleanOutcome { clean, clause, derived };

    if n % abs_delta != 0 {
        let clause = if p == 2 && primitive && delta.rem_euclid(8) != 5 {
            Some(Clause::Quad1a)
        } else if p != 2 && primitive && symbol >= 0 {
            Some(Clause::Quad1b)
        } else if n == 2 && p != 2 && symbol == -1 {
            Some(Clause::Quad1c)
        } else if n == 1 {
            Some(Clause::QuadTrivial)
        } else {
            None
        };
        return Ok(match clause {
            Some(c) => outcome(true, c, derived),
            None => outcome(false, Clause::Quad1None, derived),
        });
    }

    let abs_d = d.unsigned_abs();
    if d.rem_euclid(4) != 1 {
        if d == -1 {
            let via = clean_cyclotomic(4, p, exponent)?;
            derived.absorb(&via.derived);
            return Ok(outcome(via.clean, Clause::Quad2Gaussian, derived));
        }
        let shape = arith::is_prime(abs_d) && n % 4 == 0 && power_of(n / 4, abs_d).is_some();
        let clean = shape && p % 4 == 3 && symbol == 1 && 2 * ord_n == phi_n;
        return Ok(outcome(clean, Clause::Quad2, derived));
    }

    // d = 1 (mod 4): the symbol of d and of the discriminant coincide.
    if arith::is_prime(abs_d) {
        let q = abs_d;
        if let Some(l) = odd_power_or_twice(n, q) {
            derived.q1 = Some(q);
            derived.l1 = Some(l);
            let main = (3 + symbol as i64) as u64 * ord_n == 2 * phi_n;
            let alt = 2 * ord_n == phi_n && symbol == -1 && d < 0;
            if main || alt {
                return Ok(outcome(true, Clause::Quad3a, derived));
            }
        }
        if n % 4 == 0 {
            if let Some(l) = power_of(n / 4, q) {
                let q_power = q.pow(l);
                let ord_q = mult_order(p, q_power)?;
                derived.q1 = Some(q);
                derived.l1 = Some(l);
                derived.ord_q1_power = Some(ord_q);
                if q % 4 == 3 && symbol == 1 && p % 4 == 3 && ord_q == q.pow(l - 1) * (q - 1) / 2 {
                    return Ok(outcome(true, Clause::Quad3b, derived));
                }
            }
        }
        if let Some(pair) = two_odd_prime_powers(n)? {
            if let Some(i) = pair.iter().position(|&(r, _)| r == q) {
                let (q1, l1) = pair[i];
                let (q2, l2) = pair[1 - i];
                derived.q1 = Some(q1);
                derived.l1 = Some(l1);
                derived.q2 = Some(q2);
                derived.l2 = Some(l2);
                let half1 = q1.pow(l1 - 1) * (q1 - 1) / 2;
                let phi2 = q2.pow(l2 - 1) * (q2 - 1);
                let ord_q1 = mult_order(p, q1.pow(l1))?;
                derived.ord_q1_power = Some(ord_q1);
                if q1 % 4 == 3
                    && symbol == 1
                    && mult_order(p, q2.pow(l2))? == phi2
                    && ord_q1 == half1
                    && gcd(half1, phi2) == 1
                {
                    return Ok(outcome(true, Clause::Quad3c, derived));
                }
            }
        }
    } else {
        let fd = factorize(abs_d)?;
        if let (&[(q1, _), (q2, _)], Some(pair)) = (fd.factors(), two_odd_prime_powers(n)?) {
            if pair[0].0 == q1 && pair[1].0 == q2 {
                let (l1, l2) = (pair[0].1, pair[1].1);
                derived.q1 = Some(q1);
                derived.l1 = Some(l1);
                derived.q2 = Some(q2);
                derived.l2 = Some(l2);
                let (pw1, pw2) = (q1.pow(l1), q2.pow(l2));
                if symbol == 1
                    && arith::is_primitive_root(p, pw1)?
                    && arith::is_primitive_root(p, pw2)?
                    && gcd(euler_phi(pw1)? / 2, euler_phi(pw2)? / 2) == 1
                {
                    return Ok(outcome(true, Clause::Quad3d, derived));
                }
            }
        }
    }
    Ok(outcome(false, Clause::Quad3None, derived))
}

/// *-clean criterion over `Q(sqrt d)`, in scope only when `p` does not
/// divide the exponent.
pub fn star_clean_quadratic(d: i64, p: u64, exponent: u64) -> Result<StarClean> {
    check_inputs(p, exponent)?;
    let delta = discriminant(d)?;
    if exponent % p == 0 {
        return Ok(StarClean::OutOfScope);
    }
    let star = if d > 0 {
        clean_quadratic(d, p, exponent)?.clean && exponent >= 3
    } else {
        exponent % delta.unsigned_abs() != 0
            && arith::is_primitive_root(p, exponent)?
            && exponent >= 3
            && splitting_symbol(d, p)? >= 0
    };
    Ok(star.into())
}

/// Whether the group algebra `K[G]` over the field itself is *-clean.
pub fn field_group_algebra_star_clean(field: &FieldSpec, exponent: u64) -> Result<bool> {
    if exponent == 0 {
        return Err(Error::Zero);
    }
    match *field {
        FieldSpec::Cyclotomic { n } => {
            if n == 0 {
                return Err(Error::Zero);
            }
            Ok(exponent >= 3 && gcd(exponent, n) <= 2)
        }
        FieldSpec::Quadratic { d } => {
            let delta = discriminant(d)?;
            Ok(exponent >= 3 && (d > 0 || exponent % delta.unsigned_abs() != 0))
        }
    }
}

/// Clean and *-clean verdicts for `O_p[G]`.
pub fn decide(field: &FieldSpec, p: u64, group: &GroupSpec) -> Result<Decision> {
    decide_exponent(field, p, group.exponent())
}

pub fn decide_exponent(field: &FieldSpec, p: u64, exponent: u64) -> Result<Decision> {
    check_inputs(p, exponent)?;
    let (outcome, star_clean) = match *field {
        FieldSpec::Cyclotomic { n } => {
            let mut outcome = clean_cyclotomic(n, p, exponent)?;
            let (star, star_derived) = star_cyclotomic_detail(n, p, exponent)?;
            outcome.derived.star_conductor = star_derived.star_conductor;
            outcome.derived.star_n0 = star_derived.star_n0;
            outcome.derived.star_n1 = star_derived.star_n1;
            (outcome, star)
        }
        FieldSpec::Quadratic { d } => (clean_quadratic(d, p, exponent)?, star_clean_quadratic(d, p, exponent)?),
    };
    let f = numberfield::residue_degree(field, p)?;
    let mut derived = outcome.derived;
    derived.residue_degree = f;
    derived.norm = (p as u128).checked_pow(f);
    Ok(Decision {
        field: *field,
        prime: p,
        exponent,
        clean: outcome.clean,
        star_clean,
        matched_clause: outcome.clause,
        derived,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_prime;
    use proptest::prelude::*;

    fn primes_upto(n: u64) -> Vec<u64> {
        (2..=n).filter(|&p| is_prime(p)).collect()
    }

    #[test]
    fn clean_cyclotomic_examples() {
        assert!(!clean_cyclotomic(1, 7, 3).unwrap().clean);
        let o = clean_cyclotomic(7, 23, 147).unwrap();
        assert!(o.clean);
        assert_eq!(o.derived.n1, Some(3));
        assert_eq!(o.derived.m_prime, Some(7));
        assert_eq!(o.derived.ord_n0_m_prime, Some(21));
        assert!(clean_cyclotomic(12, 5, 12).unwrap().clean);
        assert_eq!(clean_cyclotomic(7, 21, 3), Err(Error::NotPrime(21)));
    }

    #[test]
    fn clean_rational_examples() {
        assert!(clean_rational(5, 3).unwrap());
        assert!(!clean_rational(7, 3).unwrap());
        assert!(clean_rational(3, 9).unwrap());
    }

    #[test]
    fn star_cyclotomic_examples() {
        assert_eq!(star_clean_cyclotomic(7, 23, 147).unwrap(), StarClean::False);
        // n1 = 1 allows exponents up to 2 only
        assert_eq!(star_clean_cyclotomic(3, 2, 3).unwrap(), StarClean::False);
        assert_eq!(star_clean_cyclotomic(1, 2, 3).unwrap(), StarClean::True);
        assert_eq!(star_clean_cyclotomic(5, 5, 10).unwrap(), StarClean::OutOfScope);
    }

    #[test]
    fn star_cyclotomic_same_field_same_verdict() {
        // Q(zeta_2) = Q and Q(zeta_6) = Q(zeta_3); Z_(3)[C_4] is *-clean.
        assert_eq!(star_clean_cyclotomic(2, 3, 4).unwrap(), StarClean::True);
        for p in primes_upto(40) {
            for e in 1..=40 {
                for n in [1u64, 3, 5, 7, 9] {
                    assert_eq!(
                        star_clean_cyclotomic(n, p, e).unwrap(),
                        star_clean_cyclotomic(2 * n, p, e).unwrap(),
                        "n={n} p={p} e={e}"
                    );
                    assert_eq!(
                        clean_cyclotomic(n, p, e).unwrap().clean,
                        clean_cyclotomic(2 * n, p, e).unwrap().clean
                    );
                }
            }
        }
    }

    #[test]
    fn clean_quadratic_examples() {
        let cases = [
            (-2, 3, 8, Clause::Quad2),
            (3, 11, 12, Clause::Quad2),
            (33, 2, 33, Clause::Quad3d),
            (-3, 5, 6, Clause::Quad3a),
            (5, 19, 5, Clause::Quad3a),
        ];
        for (d, p, e, clause) in cases {
            let o = clean_quadratic(d, p, e).unwrap();
            assert!(o.clean, "d={d} p={p} e={e}");
            assert_eq!(o.clause, clause, "d={d} p={p} e={e}");
        }
        assert_eq!(clean_quadratic(8, 3, 8), Err(Error::NotSquareFree(8)));
        assert_eq!(clean_quadratic(5, 4, 8), Err(Error::NotPrime(4)));
    }

    #[test]
    fn quadratic_inert_with_trivial_n() {
        // d = 5, p = 2 is inert and exp 2 has trivial odd part.
        let o = clean_quadratic(5, 2, 2).unwrap();
        assert!(o.clean);
        assert_eq!(o.clause, Clause::QuadTrivial);
    }

    #[test]
    fn gaussian_integers_with_four_dividing_n() {
        // Z[i] localized at 3: x^4 - 1 = (x-1)(x+1)(x-i)(x+i) over F_9.
        let o = clean_quadratic(-1, 3, 4).unwrap();
        assert!(o.clean);
        assert_eq!(o.clause, Clause::Quad2Gaussian);
        assert_eq!(o.clean, clean_cyclotomic(4, 3, 4).unwrap().clean);
    }

    #[test]
    fn star_quadratic_examples() {
        assert_eq!(star_clean_quadratic(3, 11, 12).unwrap(), StarClean::True);
        assert_eq!(star_clean_quadratic(-2, 3, 8).unwrap(), StarClean::False);
        assert_eq!(star_clean_quadratic(-3, 5, 6).unwrap(), StarClean::False);
        assert_eq!(star_clean_quadratic(5, 5, 5).unwrap(), StarClean::OutOfScope);
    }

    #[test]
    fn field_algebra_examples() {
        assert!(!field_group_algebra_star_clean(&FieldSpec::Cyclotomic { n: 7 }, 147).unwrap());
        assert!(field_group_algebra_star_clean(&FieldSpec::Quadratic { d: 33 }, 33).unwrap());
        assert!(!field_group_algebra_star_clean(&FieldSpec::Quadratic { d: 33 }, 2).unwrap());
        assert!(!field_group_algebra_star_clean(&FieldSpec::Cyclotomic { n: 1 }, 2).unwrap());
    }

    #[test]
    fn decide_examples() {
        let g = GroupSpec::new(vec![3, 49]).unwrap();
        let dec = decide(&FieldSpec::Cyclotomic { n: 7 }, 23, &g).unwrap();
        assert!(dec.clean);
        assert_eq!(dec.star_clean, StarClean::False);
        assert_eq!(dec.derived.residue_degree, 3);
        assert_eq!(dec.derived.norm, Some(12167));

        let dec = decide(&FieldSpec::Quadratic { d: 5 }, 19, &GroupSpec::new(vec![5]).unwrap()).unwrap();
        assert!(dec.clean);
        assert_eq!(dec.star_clean, StarClean::True);

        let trivial = GroupSpec::new(vec![]).unwrap();
        assert_eq!(trivial.exponent(), 1);
        let dec = decide(&FieldSpec::Cyclotomic { n: 1 }, 2, &trivial).unwrap();
        assert!(dec.clean);
        assert_eq!(dec.star_clean, StarClean::False);
    }

    #[test]
    fn group_spec_validation() {
        assert_eq!(GroupSpec::new(vec![2, 0]), Err(Error::Zero));
        assert_eq!(GroupSpec::new(vec![4, 6, 10]).unwrap().exponent(), 60);
        assert_eq!(GroupSpec::from_exponent(0), Err(Error::Zero));
        assert_eq!(GroupSpec::new(vec![u64::MAX, u64::MAX - 1]), Err(Error::Overflow("lcm")));
    }

    #[test]
    fn exponent_dividing_n_is_clean() {
        for n in 1..=40u64 {
            for p in primes_upto(30) {
                for e in arith::divisors(n).unwrap() {
                    assert!(clean_cyclotomic(n, p, e).unwrap().clean, "n={n} p={p} e={e}");
                }
            }
        }
    }

    #[test]
    fn rational_criterion_matches_general_criterion() {
        for p in primes_upto(100) {
            for e in 1..=120 {
                assert_eq!(clean_rational(p, e).unwrap(), clean_cyclotomic(1, p, e).unwrap().clean);
            }
        }
    }

    #[test]
    fn star_implies_clean_and_clause_fields_present() {
        let mut fields = vec![];
        for n in 1..=24 {
            fields.push(FieldSpec::Cyclotomic { n });
        }
        for d in -24i64..=24 {
            if let Ok(f) = FieldSpec::quadratic(d) {
                fields.push(f);
            }
        }
        for field in &fields {
            for p in primes_upto(30) {
                for e in 1..=48 {
                    let dec = decide_exponent(field, p, e).unwrap();
                    if dec.star_clean == StarClean::True {
                        assert!(dec.clean, "{field} p={p} e={e}");
                    }
                    let json = serde_json::to_value(&dec.derived).unwrap();
                    for key in dec.matched_clause.required_fields() {
                        assert!(json.get(key).is_some(), "{field} p={p} e={e} missing {key}");
                    }
                }
            }
        }
    }

    #[test]
    fn clause_strings_are_distinct() {
        let set: std::collections::HashSet<_> = Clause::ALL.iter().map(|c| c.as_str()).collect();
        assert_eq!(set.len(), Clause::ALL.len());
    }

    proptest! {
        #[test]
        fn decision_depends_only_on_exponent(
            factors in prop::collection::vec(1u64..=12, 0..4),
            n in 1u64..=30,
            pi in 0usize..10,
        ) {
            let p = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29][pi];
            let field = FieldSpec::Cyclotomic { n };
            let g = GroupSpec::new(factors.clone()).unwrap();
            let mut reversed = factors.clone();
            reversed.reverse();
            let h = GroupSpec::new(reversed).unwrap();
            let cyclic = GroupSpec::from_exponent(g.exponent()).unwrap();
            let a = decide(&field, p, &g).unwrap();
            prop_assert_eq!(&a, &decide(&field, p, &h).unwrap());
            prop_assert_eq!(&a, &decide(&field, p, &cyclic).unwrap());
        }
    }
}
