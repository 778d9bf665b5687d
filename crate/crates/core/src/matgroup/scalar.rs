//! Exact scalars: rationals, prime fields, and quadratic extensions of either.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Which exact ring a scalar lives in. Quadratic rings are `base(√d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Ring {
    Rational,
    Prime(u64),
    QuadRational(i64),
    QuadPrime(u64, i64),
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

/// Least positive integer that is not a square mod `q`.
pub fn least_non_square(q: u64) -> u64 {
    (2..q).find(|&d| (1..q).all(|x| x * x % q != d)).expect("odd prime has a non-square")
}

impl Ring {
    /// `F_q` for an odd prime `q`.
    pub fn prime(q: u64) -> Result<Ring> {
        if !is_prime(q) || q == 2 {
            return Err(Error::BadParameter(format!("q = {q} must be an odd prime")));
        }
        Ok(Ring::Prime(q))
    }

    /// The quadratic extension by the least non-square (2 over the rationals).
    pub fn quadratic(self) -> Ring {
        match self {
            Ring::Rational => Ring::QuadRational(2),
            Ring::Prime(q) => Ring::QuadPrime(q, least_non_square(q) as i64),
            other => other,
        }
    }

    pub fn base(self) -> Ring {
        match self {
            Ring::QuadRational(_) => Ring::Rational,
            Ring::QuadPrime(q, _) => Ring::Prime(q),
            other => other,
        }
    }

    pub fn is_quadratic(self) -> bool {
        matches!(self, Ring::QuadRational(_) | Ring::QuadPrime(..))
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            Ring::Prime(q) | Ring::QuadPrime(q, _) => Some(q),
            _ => None,
        }
    }

    fn d(self) -> i64 {
        match self {
            Ring::QuadRational(d) | Ring::QuadPrime(_, d) => d,
            _ => 0,
        }
    }

    pub fn zero(self) -> Scalar {
        Scalar::from_i64(self, 0)
    }

    pub fn one(self) -> Scalar {
        Scalar::from_i64(self, 1)
    }

    /// `γ = √d`, with `γ̄ = -γ`.
    pub fn gamma(self) -> Result<Scalar> {
        if !self.is_quadratic() {
            return Err(Error::BadParameter("γ needs a quadratic ring".into()));
        }
        Ok(Scalar { ring: self, a: BigRational::zero(), b: BigRational::one() })
    }

    /// Every element, for finite rings small enough to list.
    pub fn elements(self) -> Option<Vec<Scalar>> {
        let q = self.modulus()? as i64;
        let base: Vec<i64> = (0..q).collect();
        Some(if self.is_quadratic() {
            base.iter()
                .flat_map(|&a| base.iter().map(move |&b| (a, b)))
                .map(|(a, b)| Scalar::from_parts(self, a, b))
                .collect()
        } else {
            base.iter().map(|&a| Scalar::from_i64(self, a)).collect()
        })
    }

    /// A random element. Rationals are drawn with small numerators and
    /// denominators so products stay readable.
    pub fn random<R: Rng>(self, rng: &mut R) -> Scalar {
        let base = |rng: &mut R| -> BigRational {
            match self.modulus() {
                Some(q) => BigRational::from_integer(BigInt::from(rng.gen_range(0..q))),
                None => BigRational::new(BigInt::from(rng.gen_range(-6i64..=6)), BigInt::from(rng.gen_range(1i64..=4))),
            }
        };
        let a = base(rng);
        let b = if self.is_quadratic() { base(rng) } else { BigRational::zero() };
        Scalar::new(self, a, b)
    }

    /// A random nonzero element.
    pub fn random_nonzero<R: Rng>(self, rng: &mut R) -> Scalar {
        loop {
            let s = self.random(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }
}

/// `a + b√d` in its ring. `b` is zero outside quadratic rings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    ring: Ring,
    a: BigRational,
    b: BigRational,
}

fn reduce(ring: Ring, x: BigRational) -> BigRational {
    match ring.modulus() {
        None => x,
        Some(q) => {
            let q = BigInt::from(q);
            let num = x.numer().mod_floor(&q);
            let den = x.denom().mod_floor(&q);
            // den is invertible mod q whenever the value is defined.
            let inv = den.modpow(&(&q - 2u32), &q);
            BigRational::from_integer((num * inv).mod_floor(&q))
        }
    }
}

impl Scalar {
    fn new(ring: Ring, a: BigRational, b: BigRational) -> Scalar {
        Scalar { ring, a: reduce(ring, a), b: reduce(ring, b) }
    }

    pub fn from_i64(ring: Ring, v: i64) -> Scalar {
        Scalar::from_parts(ring, v, 0)
    }

    pub fn from_parts(ring: Ring, a: i64, b: i64) -> Scalar {
        let b = if ring.is_quadratic() { b } else { 0 };
        Scalar::new(ring, BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    pub fn from_ratio(ring: Ring, num: i64, den: i64) -> Result<Scalar> {
        let half = Scalar::from_i64(ring, den).inv().ok_or_else(|| Error::BadParameter("zero denominator".into()))?;
        Ok(Scalar::from_i64(ring, num) * half)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// Galois conjugate; the identity outside quadratic rings.
    pub fn conj(&self) -> Scalar {
        Scalar::new(self.ring, self.a.clone(), -self.b.clone())
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let d = BigRational::from_integer(self.ring.d().into());
        let norm = reduce(self.ring, &self.a * &self.a - d * &self.b * &self.b);
        if norm.is_zero() {
            return None;
        }
        let inv_norm = match self.ring.modulus() {
            None => norm.recip(),
            Some(q) => {
                let q = BigInt::from(q);
                BigRational::from_integer(norm.to_integer().modpow(&(&q - 2u32), &q))
            }
        };
        Some(Scalar::new(self.ring, &self.a * &inv_norm, -(&self.b * &inv_norm)))
    }

    /// Value as a residue, for prime-field scalars.
    pub fn residue(&self) -> Option<u64> {
        if self.ring.modulus().is_none() || !self.b.is_zero() {
            return None;
        }
        self.a.to_integer().to_u64()
    }

    /// `(a, b)` residues, for finite rings.
    pub fn residues(&self) -> Option<(u64, u64)> {
        self.ring.modulus()?;
        Some((self.a.to_integer().to_u64()?, self.b.to_integer().to_u64()?))
    }

    fn check(&self, other: &Scalar) {
        assert_eq!(self.ring, other.ring, "scalars from different rings");
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.check(o);
        Scalar::new(self.ring, &self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.check(o);
        Scalar::new(self.ring, &self.a - &o.a, &self.b - &o.b)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.check(o);
        let d = BigRational::from_integer(self.ring.d().into());
        Scalar::new(self.ring, &self.a * &o.a + d * &self.b * &o.b, &self.a * &o.b + &self.b * &o.a)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(self.ring, -self.a.clone(), -self.b.clone())
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn show(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return f.write_str(&show(&self.a));
        }
        let g = match self.b.abs().is_one() {
            true => "g".to_string(),
            false => format!("{}g", show(&self.b.abs())),
        };
        let sign = if self.b.is_negative() { "-" } else { "+" };
        if self.a.is_zero() {
            write!(f, "{}{g}", if self.b.is_negative() { "-" } else { "" })
        } else {
            write!(f, "{}{sign}{g}", show(&self.a))
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
