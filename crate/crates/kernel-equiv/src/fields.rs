//! Scalar domains for kernel entries.
//!
//! Three kinds of scalars are supported: exact rationals with
//! arbitrary-precision numerator and denominator, prime fields `GF(p)` with
//! `p < 2^31`, and a best-effort approximate real mode in which zero tests
//! and equality are tolerance-based. Exact kinds give exact verdicts; the
//! approximate kind exists for demonstration data (sampled sine or
//! Christoffel-Darboux kernels) and flags every downstream verdict as
//! heuristic.
//!
//! Approximate equality is symmetric and reflexive but not transitive, so
//! nothing downstream may rely on chaining `eq` calls in that mode.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde_json::Value;
use thiserror::Error;

/// Default threshold below which an approximate real counts as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;
/// Default threshold for approximate real equality.
pub const DEFAULT_EQ_TOL: f64 = 1e-9;
/// Largest accepted prime modulus; `(p-1)^2` must fit in `u64` and trial
/// division must stay cheap.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

#[derive(Debug, Error, PartialEq)]
pub enum FieldError {
    #[error("cannot invert zero")]
    ZeroInversion,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported bound {MAX_MODULUS}")]
    ModulusTooLarge(u64),
    #[error("tolerances must be positive (zero_tol={zero_tol}, eq_tol={eq_tol})")]
    NonpositiveTolerance { zero_tol: f64, eq_tol: f64 },
    #[error("entry {text} is not valid here: {reason}")]
    BadEntry { text: String, reason: String },
}

/// A multiplicative sign, the two square roots of one.
///
/// In characteristic 2 the two variants map to the same field element; they
/// stay distinct as labels so enumeration output is well-defined there too.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i8(v: i8) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs { Sign::Plus } else { Sign::Minus }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Declares the scalar domain kernels live over, together with its
/// arithmetic contract.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    /// Exact rationals, kept in lowest terms with positive denominator.
    Rational,
    /// Integers modulo a prime `p`, residues in `[0, p)`.
    PrimeField { p: u64 },
    /// 64-bit reals with explicit zero and equality tolerances.
    ApproxReal { zero_tol: f64, eq_tol: f64 },
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Inverse of `a` modulo the prime `p` by the extended Euclidean algorithm.
fn mod_inverse(a: u64, p: u64) -> u64 {
    debug_assert!(a > 0 && a < p);
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "modulus must be prime");
    old_s.rem_euclid(p as i128) as u64
}

impl FieldSpec {
    pub fn rational() -> FieldSpec {
        FieldSpec::Rational
    }

    /// Primality is checked by trial division; moduli are capped at `2^31 - 1`.
    pub fn prime_field(p: u64) -> Result<FieldSpec, FieldError> {
        if p > MAX_MODULUS {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField { p })
    }

    pub fn approx_real(zero_tol: f64, eq_tol: f64) -> Result<FieldSpec, FieldError> {
        // NaN fails both comparisons and is rejected along with nonpositives.
        let ok = zero_tol > 0.0 && eq_tol > 0.0;
        if !ok {
            return Err(FieldError::NonpositiveTolerance { zero_tol, eq_tol });
        }
        Ok(FieldSpec::ApproxReal { zero_tol, eq_tol })
    }

    /// Approximate reals with the default tolerances.
    pub fn approx_default() -> FieldSpec {
        FieldSpec::ApproxReal {
            zero_tol: DEFAULT_ZERO_TOL,
            eq_tol: DEFAULT_EQ_TOL,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::PrimeField { p } => *p,
            _ => 0,
        }
    }

    /// True for domains where equality and zero tests are exact.
    pub fn is_exact(&self) -> bool {
        !matches!(self, FieldSpec::ApproxReal { .. })
    }

    pub fn zero(&self) -> FieldElement {
        match self {
            FieldSpec::Rational => FieldElement::Rational(BigRational::zero()),
            FieldSpec::PrimeField { .. } => FieldElement::Residue(0),
            FieldSpec::ApproxReal { .. } => FieldElement::Real(0.0),
        }
    }

    pub fn one(&self) -> FieldElement {
        match self {
            FieldSpec::Rational => FieldElement::Rational(BigRational::one()),
            FieldSpec::PrimeField { .. } => FieldElement::Residue(1),
            FieldSpec::ApproxReal { .. } => FieldElement::Real(1.0),
        }
    }

    /// The additive inverse of one; equal to one exactly in characteristic 2.
    pub fn minus_one(&self) -> FieldElement {
        self.neg(&self.one())
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        match self {
            FieldSpec::Rational => FieldElement::Rational(BigRational::from(BigInt::from(v))),
            FieldSpec::PrimeField { p } => {
                FieldElement::Residue((v as i128).rem_euclid(*p as i128) as u64)
            }
            FieldSpec::ApproxReal { .. } => FieldElement::Real(v as f64),
        }
    }

    pub fn element_of(&self, e: &FieldElement) -> bool {
        match (self, e) {
            (FieldSpec::Rational, FieldElement::Rational(_)) => true,
            (FieldSpec::PrimeField { p }, FieldElement::Residue(r)) => r < p,
            (FieldSpec::ApproxReal { .. }, FieldElement::Real(x)) => x.is_finite(),
            _ => false,
        }
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        match (self, a) {
            (FieldSpec::Rational, FieldElement::Rational(r)) => r.is_zero(),
            (FieldSpec::PrimeField { .. }, FieldElement::Residue(r)) => *r == 0,
            (FieldSpec::ApproxReal { zero_tol, .. }, FieldElement::Real(x)) => x.abs() <= *zero_tol,
            _ => panic!("element does not belong to this field"),
        }
    }

    /// Equality under this spec: structural for exact kinds, within `eq_tol`
    /// for approximate reals (symmetric and reflexive, not transitive).
    pub fn eq(&self, a: &FieldElement, b: &FieldElement) -> bool {
        match (self, a, b) {
            (FieldSpec::Rational, FieldElement::Rational(x), FieldElement::Rational(y)) => x == y,
            (FieldSpec::PrimeField { .. }, FieldElement::Residue(x), FieldElement::Residue(y)) => {
                x == y
            }
            (FieldSpec::ApproxReal { eq_tol, .. }, FieldElement::Real(x), FieldElement::Real(y)) => {
                (x - y).abs() <= *eq_tol
            }
            _ => panic!("elements do not belong to this field"),
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (FieldSpec::Rational, FieldElement::Rational(x), FieldElement::Rational(y)) => {
                FieldElement::Rational(x + y)
            }
            (FieldSpec::PrimeField { p }, FieldElement::Residue(x), FieldElement::Residue(y)) => {
                FieldElement::Residue((x + y) % p)
            }
            (FieldSpec::ApproxReal { .. }, FieldElement::Real(x), FieldElement::Real(y)) => {
                FieldElement::Real(x + y)
            }
            _ => panic!("elements do not belong to this field"),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (FieldSpec::Rational, FieldElement::Rational(x), FieldElement::Rational(y)) => {
                FieldElement::Rational(x * y)
            }
            (FieldSpec::PrimeField { p }, FieldElement::Residue(x), FieldElement::Residue(y)) => {
                // p < 2^31, so the product fits in u64.
                FieldElement::Residue(x * y % p)
            }
            (FieldSpec::ApproxReal { .. }, FieldElement::Real(x), FieldElement::Real(y)) => {
                FieldElement::Real(x * y)
            }
            _ => panic!("elements do not belong to this field"),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match (self, a) {
            (FieldSpec::Rational, FieldElement::Rational(x)) => FieldElement::Rational(-x.clone()),
            (FieldSpec::PrimeField { p }, FieldElement::Residue(x)) => {
                FieldElement::Residue(if *x == 0 { 0 } else { p - x })
            }
            (FieldSpec::ApproxReal { .. }, FieldElement::Real(x)) => FieldElement::Real(-x),
            _ => panic!("element does not belong to this field"),
        }
    }

    /// Multiplicative inverse. Prime-field inversion runs the extended
    /// Euclidean algorithm; approximate reals must clear the zero tolerance.
    pub fn invert(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::ZeroInversion);
        }
        Ok(match (self, a) {
            (FieldSpec::Rational, FieldElement::Rational(x)) => {
                FieldElement::Rational(x.recip())
            }
            (FieldSpec::PrimeField { p }, FieldElement::Residue(x)) => {
                FieldElement::Residue(mod_inverse(*x, *p))
            }
            (FieldSpec::ApproxReal { .. }, FieldElement::Real(x)) => FieldElement::Real(1.0 / x),
            _ => panic!("element does not belong to this field"),
        })
    }

    /// True iff `a * a = 1`, i.e. `a` is `+1` or `-1` (which coincide exactly
    /// in characteristic 2).
    pub fn is_own_inverse(&self, a: &FieldElement) -> bool {
        self.eq(&self.mul(a, a), &self.one())
    }

    /// Whether `a^2 = b^2`. In a field this means `a = b` or `a = -b`, which
    /// is how the exact kinds test it; approximate reals compare the squares
    /// against `eq_tol` directly.
    pub fn squares_equal(&self, a: &FieldElement, b: &FieldElement) -> bool {
        match self {
            FieldSpec::ApproxReal { eq_tol, .. } => {
                let (FieldElement::Real(x), FieldElement::Real(y)) = (a, b) else {
                    panic!("elements do not belong to this field");
                };
                (x * x - y * y).abs() <= *eq_tol
            }
            _ => self.eq(a, b) || self.eq(a, &self.neg(b)),
        }
    }

    /// The sign `s` with `q = s * k`, if one exists. `k` must be nonzero.
    ///
    /// Exact kinds compare structurally (`Plus` wins in characteristic 2,
    /// where both signs act identically). Approximate reals snap the ratio
    /// `q / k` to whichever of the two signs is nearer, and reject when it is
    /// not within `eq_tol` of either.
    pub fn sign_relating(&self, k: &FieldElement, q: &FieldElement) -> Option<Sign> {
        debug_assert!(!self.is_zero(k));
        match self {
            FieldSpec::ApproxReal { eq_tol, .. } => {
                let (FieldElement::Real(kv), FieldElement::Real(qv)) = (k, q) else {
                    panic!("elements do not belong to this field");
                };
                let ratio = qv / kv;
                let (sign, dist) = if (ratio - 1.0).abs() <= (ratio + 1.0).abs() {
                    (Sign::Plus, (ratio - 1.0).abs())
                } else {
                    (Sign::Minus, (ratio + 1.0).abs())
                };
                (dist <= *eq_tol).then_some(sign)
            }
            _ => {
                if self.eq(q, k) {
                    Some(Sign::Plus)
                } else if self.eq(q, &self.neg(k)) {
                    Some(Sign::Minus)
                } else {
                    None
                }
            }
        }
    }

    pub fn sign_element(&self, s: Sign) -> FieldElement {
        match s {
            Sign::Plus => self.one(),
            Sign::Minus => self.minus_one(),
        }
    }

    /// Parses one kernel-file entry: rationals are strings `"p"` or `"p/q"`,
    /// prime-field entries are integers (reduced mod `p`), approximate reals
    /// are JSON numbers.
    pub fn parse_entry(&self, v: &Value) -> Result<FieldElement, FieldError> {
        let bad = |reason: &str| FieldError::BadEntry {
            text: v.to_string(),
            reason: reason.to_string(),
        };
        match self {
            FieldSpec::Rational => {
                let s = v.as_str().ok_or_else(|| bad("expected a string \"p\" or \"p/q\""))?;
                let (num_text, den_text) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let numer: BigInt = num_text
                    .parse()
                    .map_err(|_| bad("numerator is not an integer"))?;
                let denom: BigInt = den_text
                    .parse()
                    .map_err(|_| bad("denominator is not an integer"))?;
                if denom.is_zero() {
                    return Err(bad("denominator is zero"));
                }
                Ok(FieldElement::Rational(BigRational::new(numer, denom)))
            }
            FieldSpec::PrimeField { .. } => {
                let r = v.as_i64().ok_or_else(|| bad("expected an integer"))?;
                Ok(self.from_i64(r))
            }
            FieldSpec::ApproxReal { .. } => {
                let x = v.as_f64().ok_or_else(|| bad("expected a number"))?;
                if !x.is_finite() {
                    return Err(bad("value is not finite"));
                }
                Ok(FieldElement::Real(x))
            }
        }
    }

    /// Serializes one entry in the format `parse_entry` reads back losslessly.
    pub fn entry_to_json(&self, e: &FieldElement) -> Value {
        match (self, e) {
            (FieldSpec::Rational, FieldElement::Rational(r)) => Value::String(render_rational(r)),
            (FieldSpec::PrimeField { .. }, FieldElement::Residue(r)) => Value::from(*r),
            (FieldSpec::ApproxReal { .. }, FieldElement::Real(x)) => {
                Value::Number(serde_json::Number::from_f64(*x).expect("finite entry"))
            }
            _ => panic!("element does not belong to this field"),
        }
    }
}

/// One scalar value; which variant is valid is dictated by the `FieldSpec`
/// it belongs to. Derived equality is structural — use [`FieldSpec::eq`]
/// for the tolerance-aware comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldElement {
    Rational(BigRational),
    Residue(u64),
    Real(f64),
}

fn render_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => f.write_str(&render_rational(r)),
            FieldElement::Residue(r) => write!(f, "{r}"),
            FieldElement::Real(x) => write!(f, "{x}"),
        }
    }
}

impl FieldElement {
    /// Convenience constructor for an exact rational in canonical form.
    pub fn rational(numer: i64, denom: i64) -> FieldElement {
        assert!(denom != 0, "denominator must be nonzero");
        FieldElement::Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64, d: i64) -> FieldElement {
        FieldElement::rational(n, d)
    }

    #[test]
    fn rational_inversion() {
        let spec = FieldSpec::rational();
        let inv = spec.invert(&rat(3, 4)).unwrap();
        assert_eq!(inv, rat(4, 3));
        assert!(spec.eq(&spec.mul(&rat(3, 4), &inv), &spec.one()));
    }

    #[test]
    fn gf7_inversion_by_extended_euclid() {
        let spec = FieldSpec::prime_field(7).unwrap();
        assert_eq!(spec.invert(&spec.from_i64(3)).unwrap(), FieldElement::Residue(5));
    }

    #[test]
    fn gf2_unit_is_self_inverse() {
        let spec = FieldSpec::prime_field(2).unwrap();
        let one = spec.one();
        assert_eq!(spec.invert(&one).unwrap(), one);
        assert!(spec.is_own_inverse(&one));
        assert!(spec.eq(&spec.one(), &spec.minus_one()));
    }

    #[test]
    fn zero_inversion_is_rejected() {
        assert_eq!(
            FieldSpec::rational().invert(&FieldSpec::rational().zero()),
            Err(FieldError::ZeroInversion)
        );
        let gf5 = FieldSpec::prime_field(5).unwrap();
        assert_eq!(gf5.invert(&gf5.zero()), Err(FieldError::ZeroInversion));
        let approx = FieldSpec::approx_default();
        assert_eq!(
            approx.invert(&FieldElement::Real(1e-13)),
            Err(FieldError::ZeroInversion)
        );
    }

    #[test]
    fn equality_examples() {
        let spec = FieldSpec::rational();
        let half = spec.parse_entry(&Value::String("2/4".into())).unwrap();
        assert!(spec.eq(&half, &rat(1, 2)));

        let gf5 = FieldSpec::prime_field(5).unwrap();
        assert!(gf5.eq(&gf5.from_i64(7), &gf5.from_i64(2)));

        let approx = FieldSpec::approx_default();
        assert!(approx.eq(&FieldElement::Real(1.0), &FieldElement::Real(1.0 + 1e-12)));
        assert!(!approx.eq(&FieldElement::Real(1.0), &FieldElement::Real(1.0 + 1e-6)));
    }

    #[test]
    fn own_inverse_characterizes_signs() {
        let spec = FieldSpec::rational();
        assert!(spec.is_own_inverse(&rat(-1, 1)));
        assert!(spec.is_own_inverse(&spec.one()));
        assert!(!spec.is_own_inverse(&rat(2, 1)));
    }

    #[test]
    fn gf2_every_unit_is_own_inverse() {
        let gf2 = FieldSpec::prime_field(2).unwrap();
        for v in 1..2 {
            assert!(gf2.is_own_inverse(&gf2.from_i64(v)));
        }
    }

    #[test]
    fn composite_moduli_are_rejected() {
        assert_eq!(FieldSpec::prime_field(4), Err(FieldError::NotPrime(4)));
        assert_eq!(FieldSpec::prime_field(1), Err(FieldError::NotPrime(1)));
        assert_eq!(FieldSpec::prime_field(0), Err(FieldError::NotPrime(0)));
        assert!(FieldSpec::prime_field(2_147_483_647).is_ok());
        assert_eq!(
            FieldSpec::prime_field(1 << 31),
            Err(FieldError::ModulusTooLarge(1 << 31))
        );
    }

    #[test]
    fn tolerances_must_be_positive() {
        assert!(FieldSpec::approx_real(0.0, 1e-9).is_err());
        assert!(FieldSpec::approx_real(1e-12, -1.0).is_err());
        assert!(FieldSpec::approx_real(1e-12, 1e-9).is_ok());
    }

    fn random_nonzero(spec: &FieldSpec, rng: &mut ChaCha8Rng) -> FieldElement {
        loop {
            let e = match spec {
                FieldSpec::Rational => FieldElement::rational(
                    rng.random_range(-99..=99),
                    rng.random_range(1..=99),
                ),
                FieldSpec::PrimeField { p } => {
                    FieldElement::Residue(rng.random_range(0..*p))
                }
                FieldSpec::ApproxReal { .. } => {
                    FieldElement::Real(rng.random_range(-9..=9i64) as f64 / rng.random_range(1..=9i64) as f64)
                }
            };
            if !spec.is_zero(&e) {
                return e;
            }
        }
    }

    #[test]
    fn invert_then_multiply_gives_one() {
        let specs = [
            FieldSpec::rational(),
            FieldSpec::prime_field(2).unwrap(),
            FieldSpec::prime_field(7).unwrap(),
            FieldSpec::prime_field(1009).unwrap(),
            FieldSpec::approx_default(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for spec in &specs {
            for _ in 0..1000 {
                let a = random_nonzero(spec, &mut rng);
                let inv = spec.invert(&a).unwrap();
                assert!(
                    spec.eq(&spec.mul(&a, &inv), &spec.one()),
                    "a * a^-1 != 1 for {a} in {spec:?}"
                );
            }
        }
    }

    #[test]
    fn own_inverse_iff_square_is_one() {
        let specs = [
            FieldSpec::rational(),
            FieldSpec::prime_field(13).unwrap(),
            FieldSpec::approx_default(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in &specs {
            for _ in 0..300 {
                let a = random_nonzero(spec, &mut rng);
                let square_is_one = spec.eq(&spec.mul(&a, &a), &spec.one());
                assert_eq!(spec.is_own_inverse(&a), square_is_one);
            }
        }
    }

    #[test]
    fn sign_relating_examples() {
        let spec = FieldSpec::rational();
        assert_eq!(spec.sign_relating(&rat(2, 3), &rat(2, 3)), Some(Sign::Plus));
        assert_eq!(spec.sign_relating(&rat(2, 3), &rat(-2, 3)), Some(Sign::Minus));
        assert_eq!(spec.sign_relating(&rat(2, 3), &rat(1, 3)), None);

        let gf2 = FieldSpec::prime_field(2).unwrap();
        assert_eq!(
            gf2.sign_relating(&gf2.one(), &gf2.one()),
            Some(Sign::Plus),
            "characteristic 2 reports the canonical sign"
        );

        let approx = FieldSpec::approx_default();
        let k = FieldElement::Real(0.5);
        assert_eq!(spec_sign(&approx, &k, -0.5 + 1e-11), Some(Sign::Minus));
        assert_eq!(spec_sign(&approx, &k, 0.5 - 1e-11), Some(Sign::Plus));
        assert_eq!(spec_sign(&approx, &k, 0.4), None);
    }

    fn spec_sign(spec: &FieldSpec, k: &FieldElement, q: f64) -> Option<Sign> {
        spec.sign_relating(k, &FieldElement::Real(q))
    }

    #[test]
    fn squares_equal_matches_definition() {
        let spec = FieldSpec::rational();
        assert!(spec.squares_equal(&rat(2, 3), &rat(-2, 3)));
        assert!(!spec.squares_equal(&rat(2, 1), &rat(3, 1)));
        let gf5 = FieldSpec::prime_field(5).unwrap();
        assert!(gf5.squares_equal(&gf5.from_i64(2), &gf5.from_i64(3)));
        assert!(!gf5.squares_equal(&gf5.from_i64(1), &gf5.from_i64(2)));
    }

    #[test]
    fn entry_round_trip() {
        let spec = FieldSpec::rational();
        for text in ["0", "-7", "3/4", "-3/4"] {
            let e = spec.parse_entry(&Value::String(text.into())).unwrap();
            assert_eq!(spec.entry_to_json(&e), Value::String(text.into()));
        }
        // Non-canonical input parses to the canonical form.
        let e = spec.parse_entry(&Value::String("3/-4".into())).unwrap();
        assert_eq!(spec.entry_to_json(&e), Value::String("-3/4".into()));

        let gf7 = FieldSpec::prime_field(7).unwrap();
        let e = gf7.parse_entry(&Value::from(-2)).unwrap();
        assert_eq!(e, FieldElement::Residue(5));

        assert!(spec.parse_entry(&Value::from(3)).is_err());
        assert!(spec.parse_entry(&Value::String("1/0".into())).is_err());
        assert!(spec.parse_entry(&Value::String("a/b".into())).is_err());
        assert!(gf7.parse_entry(&Value::String("3".into())).is_err());
    }

    #[test]
    fn sign_algebra() {
        assert_eq!(Sign::Plus * Sign::Minus, Sign::Minus);
        assert_eq!(Sign::Minus * Sign::Minus, Sign::Plus);
        assert_eq!(Sign::Minus.flip(), Sign::Plus);
        assert_eq!(Sign::from_i8(-1), Some(Sign::Minus));
        assert_eq!(Sign::from_i8(0), None);
    }
}
