//! Integer arithmetic: certified factorization, p-adic valuations, and the
//! Kronecker symbol with full edge-case semantics.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Trial division bound; every prime below this is found by the wheel.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Largest n for which Miller-Rabin with the first twelve prime bases is a
/// proof of primality (Sorenson-Webster).
const MR_PROOF_BOUND: &str = "3317044064679887385961981";

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// A natural number extended with infinity, for valuations of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtNat {
    Fin(u32),
    Inf,
}

impl ExtNat {
    pub fn finite(self) -> Option<u32> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Inf => None,
        }
    }

    pub fn is_inf(self) -> bool {
        matches!(self, ExtNat::Inf)
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (ExtNat::Inf, ExtNat::Inf) => std::cmp::Ordering::Equal,
            (ExtNat::Inf, _) => std::cmp::Ordering::Greater,
            (_, ExtNat::Inf) => std::cmp::Ordering::Less,
            (ExtNat::Fin(a), ExtNat::Fin(b)) => a.cmp(b),
        }
    }
}

impl std::fmt::Display for ExtNat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Inf => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for ExtNat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" {
            return Ok(ExtNat::Inf);
        }
        s.parse::<u32>().map(ExtNat::Fin).map_err(|_| {
            Error::BadArgument(format!("expected a natural number or \"inf\", got {s:?}"))
        })
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtNat::Fin(n) => ser.serialize_u32(*n),
            ExtNat::Inf => ser.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Str(String),
        }
        match Raw::deserialize(de)? {
            Raw::Num(n) => Ok(ExtNat::Fin(n)),
            Raw::Str(s) if s == "inf" => Ok(ExtNat::Inf),
            Raw::Str(s) => Err(D::Error::custom(format!("expected \"inf\", got {s:?}"))),
        }
    }
}

/// p-adic valuation of n; `Inf` iff n = 0. p must be >= 2 (not checked to be
/// prime: callers pass primes).
pub fn padic_val(p: &BigInt, n: &BigInt) -> ExtNat {
    assert!(p >= &BigInt::from(2), "padic_val needs p >= 2");
    if n.is_zero() {
        return ExtNat::Inf;
    }
    let mut v = 0u32;
    let mut m = n.abs();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return ExtNat::Fin(v);
        }
        v += 1;
        m = q;
    }
}

/// 2-adic valuation; `Inf` iff n = 0.
pub fn v2(n: &BigInt) -> ExtNat {
    if n.is_zero() {
        return ExtNat::Inf;
    }
    let bits = n.abs().to_biguint().unwrap().trailing_zeros().unwrap_or(0);
    ExtNat::Fin(bits as u32)
}

/// Kronecker symbol (a|n) with GP semantics: defined for all integers,
/// including n = 0 ((a|0) = 1 iff |a| = 1), n < 0, and even n.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return i32::from(a == 1 || a == -1);
    }
    let mut result: i32 = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let e = n.trailing_zeros();
    if e > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= e;
        if e % 2 == 1 {
            // (a|2) for odd a: +1 iff a = +-1 mod 8
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    // Jacobi symbol on odd positive n via quadratic reciprocity.
    let mut a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_u64(acc, b, m);
        }
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic primality for u64 via Miller-Rabin with the twelve bases.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &a in &MR_BASES {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn is_prime_big_uncached(n: &BigUint) -> Result<bool> {
    if let Some(v) = n.to_u64() {
        return Ok(is_prime_u64(v));
    }
    let bound: BigUint = MR_PROOF_BOUND.parse().unwrap();
    if *n >= bound {
        return Err(Error::PrimalityUncertified(n.to_string()));
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap();
    let d = &nm1 >> s;
    'witness: for &a in &MR_BASES {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// Certified primality: exact for |n| below the Miller-Rabin proof bound
/// (about 3.3e24), an error above it. Negative n and 0, 1 are not prime.
pub fn is_prime(n: &BigInt) -> Result<bool> {
    if n.sign() != Sign::Plus {
        return Ok(false);
    }
    is_prime_big_uncached(n.magnitude())
}

/// Signed prime factorization: `sign * prod p_i^e_i` with strictly
/// increasing primes. Zero has none and is rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn value(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc
    }

    /// Number of distinct prime divisors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn nu(&self, p: &BigInt) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    /// Is |n| a prime power p^k with k >= 1? Returns (p, k) if so.
    pub fn prime_power(&self) -> Option<(&BigInt, u32)> {
        match self.factors.as_slice() {
            [(p, e)] => Some((p, *e)),
            _ => None,
        }
    }

    /// All positive divisors of |n|, ascending.
    pub fn divisors(&self) -> Vec<BigInt> {
        let mut divs = vec![BigInt::one()];
        for (p, e) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            let mut pk = BigInt::one();
            for _ in 0..=*e {
                for d in &divs {
                    next.push(d * &pk);
                }
                pk *= p;
            }
            divs = next;
        }
        divs.sort();
        divs
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn brent_rho(n: &BigUint) -> BigUint {
    // n is odd, composite, with no prime factor below the trial bound.
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut x, mut q) = (two.clone(), one.clone());
        let (mut ys, mut g) = (x.clone(), one.clone());
        let mut r: u64 = 1;
        let m: u64 = 128;
        let mut y = x.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0u64;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x >= y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if g == *n {
            // Backtrack one step at a time.
            loop {
                ys = f(&ys);
                let diff = if x >= ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
        // Cycle collapsed for this c; retry with the next increment.
    }
    unreachable!()
}

fn split_recursive(n: BigUint, out: &mut Vec<BigUint>) -> Result<()> {
    if is_prime_big_uncached(&n)? {
        out.push(n);
        return Ok(());
    }
    let d = brent_rho(&n);
    let q = &n / &d;
    split_recursive(d, out)?;
    split_recursive(q, out)
}

/// Full signed factorization. Errors on 0 and when a composite cofactor
/// survives whose primality cannot be certified.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::BadArgument("cannot factor 0".into()));
    }
    let sign: i8 = if n.is_negative() { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let strip = |m: &mut BigUint, p: u64, factors: &mut Vec<(BigInt, u32)>| {
        let pb = BigUint::from(p);
        let mut e = 0u32;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            *m = q;
            e += 1;
        }
        if e > 0 {
            factors.push((BigInt::from(p), e));
        }
    };
    strip(&mut m, 2, &mut factors);
    strip(&mut m, 3, &mut factors);
    strip(&mut m, 5, &mut factors);
    // Wheel mod 30 over residues coprime to 2, 3, 5.
    const WHEEL: [u64; 8] = [1, 7, 11, 13, 17, 19, 23, 29];
    let mut base = 0u64;
    'trial: while base <= TRIAL_DIVISION_LIMIT {
        for off in WHEEL {
            let p = base + off;
            if p < 7 {
                continue;
            }
            if BigUint::from(p) * BigUint::from(p) > m {
                break 'trial;
            }
            strip(&mut m, p, &mut factors);
        }
        base += 30;
    }
    if !m.is_one() {
        if let Some(small) = m.to_u64() {
            // Cofactor below the square of the trial bound is prime.
            if small <= TRIAL_DIVISION_LIMIT * TRIAL_DIVISION_LIMIT || is_prime_u64(small) {
                factors.push((BigInt::from(small), 1));
            } else {
                let mut parts = Vec::new();
                split_recursive(m, &mut parts)?;
                push_parts(parts, &mut factors);
            }
        } else {
            let mut parts = Vec::new();
            split_recursive(m, &mut parts)?;
            push_parts(parts, &mut factors);
        }
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { sign, factors })
}

fn push_parts(mut parts: Vec<BigUint>, factors: &mut Vec<(BigInt, u32)>) {
    parts.sort();
    for p in parts {
        let p = BigInt::from_biguint(Sign::Plus, p);
        match factors.iter_mut().find(|(q, _)| *q == p) {
            Some((_, e)) => *e += 1,
            None => factors.push((p, 1)),
        }
    }
}

/// Number of distinct primes dividing n (n != 0).
pub fn omega(n: &BigInt) -> Result<u32> {
    Ok(factorize(n)?.omega())
}

/// Squarefree check for small signed integers, without full factorization
/// cost mattering (|d| stays tiny in every caller).
pub fn is_squarefree_i64(d: i64) -> Result<bool> {
    if d == 0 {
        return Ok(false);
    }
    Ok(factorize(&BigInt::from(d))?.is_squarefree())
}
