//! Exact Fourier coefficients of the newform attached to a curve.
//!
//! Prime coefficients come from point counts over prime fields (good
//! reduction) or the reduction kind (bad reduction); prime powers from the
//! Hecke recursion; composites from multiplicativity. Everything is exact
//! integer arithmetic, sized for primes up to about 10^6.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::curve::{TwistParameter, WeierstrassModel};
use crate::{local, Error, Result};

/// Largest prime (and table bound) accepted by default. Counting is O(q)
/// per prime, so anything beyond this stops being interactive.
pub const DEFAULT_PRIME_CEILING: u64 = 1_000_000;

/// a_q for a single prime q, on the global minimal model of `model`.
pub fn a_q(model: &WeierstrassModel, q: &BigInt) -> Result<i64> {
    a_q_with_ceiling(model, q, DEFAULT_PRIME_CEILING)
}

pub fn a_q_with_ceiling(model: &WeierstrassModel, q: &BigInt, ceiling: u64) -> Result<i64> {
    let qu = q
        .to_u64()
        .filter(|&v| v <= ceiling)
        .ok_or_else(|| Error::PrimeTooLarge(q.to_string(), ceiling))?;
    if !crate::arith::is_prime_u64(qu) {
        return Err(Error::NotPrime(q.to_string()));
    }
    let (minimal, _) = model.minimal_model()?;
    let disc = minimal.invariants().disc;
    a_q_minimal(&minimal, &disc, qu)
}

/// Core dispatch. `minimal` must be globally minimal and `disc` its
/// discriminant, so q | disc decides good versus bad exactly.
fn a_q_minimal(minimal: &WeierstrassModel, disc: &BigInt, q: u64) -> Result<i64> {
    let qb = BigInt::from(q);
    if disc.mod_floor(&qb).is_zero() {
        let red = local::local_reduction(minimal, &qb)?;
        Ok(red
            .kind
            .bad_ap()
            .expect("prime dividing the minimal discriminant has bad reduction"))
    } else if q == 2 {
        Ok(a_2_good(minimal))
    } else {
        Ok(a_q_good_odd(minimal, q))
    }
}

/// Good odd q: complete the square, so the affine count is
/// q + sum_x chi(4x^3 + b2 x^2 + 2 b4 x + b6) and a_q is minus that sum.
fn a_q_good_odd(model: &WeierstrassModel, q: u64) -> i64 {
    let inv = model.invariants();
    let red = |v: &BigInt| v.mod_floor(&BigInt::from(q)).to_u64().unwrap();
    let (b2, b4, b6) = (red(&inv.b2), red(&inv.b4), red(&inv.b6));
    let mut square = vec![false; q as usize];
    let mut t = 0u64;
    while t <= q / 2 {
        square[((t * t) % q) as usize] = true;
        t += 1;
    }
    let two_b4 = (2 * b4) % q;
    let mut sum: i64 = 0;
    for x in 0..q {
        let mut g = (4 * x + b2) % q;
        g = (g * x + two_b4) % q;
        g = (g * x + b6) % q;
        if g != 0 {
            sum += if square[g as usize] { 1 } else { -1 };
        }
    }
    -sum
}

/// Good reduction at 2: four affine candidates, counted directly.
fn a_2_good(model: &WeierstrassModel) -> i64 {
    let two = BigInt::from(2);
    let bit = |v: &BigInt| v.mod_floor(&two).to_i64().unwrap();
    let (a1, a2, a3, a4, a6) = (
        bit(&model.a1),
        bit(&model.a2),
        bit(&model.a3),
        bit(&model.a4),
        bit(&model.a6),
    );
    let mut affine = 0;
    for x in 0..2i64 {
        for y in 0..2i64 {
            let lhs = y * y + a1 * x * y + a3 * y;
            let rhs = x * x * x + a2 * x * x + a4 * x + a6;
            if (lhs - rhs).rem_euclid(2) == 0 {
                affine += 1;
            }
        }
    }
    2 + 1 - (1 + affine)
}

/// Coefficients a_1 .. a_B of the newform of (the minimal model of) a
/// curve. Immutable once built; construction is parallel across primes but
/// bit-identical regardless of thread count.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    curve: WeierstrassModel,
    a: Vec<i64>,
}

impl CoefficientTable {
    pub fn build(model: &WeierstrassModel, bound: u64) -> Result<Self> {
        if bound == 0 {
            return Err(Error::BadArgument(
                "coefficient bound must be positive".into(),
            ));
        }
        if bound > DEFAULT_PRIME_CEILING {
            return Err(Error::BadArgument(format!(
                "coefficient bound {bound} exceeds the supported {DEFAULT_PRIME_CEILING}"
            )));
        }
        let (minimal, _) = model.minimal_model()?;
        let disc = minimal.invariants().disc;
        let b = bound as usize;

        // Smallest-prime-factor sieve; spf[n] == n marks primes.
        let mut spf: Vec<u32> = (0..=b as u32).collect();
        let mut p = 2usize;
        while p * p <= b {
            if spf[p] == p as u32 {
                let mut m = p * p;
                while m <= b {
                    if spf[m] == m as u32 {
                        spf[m] = p as u32;
                    }
                    m += p;
                }
            }
            p += 1;
        }
        let primes: Vec<u64> = (2..=b as u64)
            .filter(|&n| spf[n as usize] == n as u32)
            .collect();

        let prime_coeffs: Vec<(u64, i64, bool)> = primes
            .par_iter()
            .map(|&q| {
                let bad = disc.mod_floor(&BigInt::from(q)).is_zero();
                a_q_minimal(&minimal, &disc, q).map(|a| (q, a, bad))
            })
            .collect::<Result<_>>()?;

        let mut a = vec![0i64; b + 1];
        a[1] = 1;
        for &(q, aq, bad) in &prime_coeffs {
            if bad {
                debug_assert!(aq.abs() <= 1, "bad-prime coefficient out of range");
            } else {
                debug_assert!(aq * aq <= 4 * q as i64, "Hasse bound violated at {q}");
            }
            a[q as usize] = aq;
            let mut prev = 1i64; // a(q^(k-1))
            let mut cur = aq; //    a(q^k)
            let mut pk = q;
            while pk <= bound / q {
                pk *= q;
                let next = if bad {
                    cur * aq
                } else {
                    aq * cur - q as i64 * prev
                };
                a[pk as usize] = next;
                prev = cur;
                cur = next;
            }
        }
        for n in 2..=b {
            let q = spf[n] as usize;
            if q == n {
                continue;
            }
            let mut pe = 1usize;
            let mut m = n;
            while m % q == 0 {
                pe *= q;
                m /= q;
            }
            if m > 1 {
                a[n] = a[pe] * a[m];
            }
        }
        Ok(CoefficientTable { curve: minimal, a })
    }

    /// The minimal model the table was computed on.
    pub fn curve(&self) -> &WeierstrassModel {
        &self.curve
    }

    pub fn bound(&self) -> u64 {
        (self.a.len() - 1) as u64
    }

    pub fn coefficient(&self, n: u64) -> Option<i64> {
        self.a.get(n as usize).copied().filter(|_| n >= 1)
    }

    /// (n, a_n) pairs in ascending n, ready for CSV export.
    pub fn entries(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &v)| (n as u64, v))
    }
}

/// Table construction under the spec name.
pub fn expand(model: &WeierstrassModel, bound: u64) -> Result<CoefficientTable> {
    CoefficientTable::build(model, bound)
}

/// The completely multiplicative character γ_n(D) = prod (D/q_i)^(α_i)
/// over the prime factorization of n. Errors when any symbol vanishes.
pub fn gamma(n: u64, d: i64) -> Result<i32> {
    if n == 0 {
        return Err(Error::BadArgument("gamma needs n >= 1".into()));
    }
    let mut m = n;
    let mut out = 1i32;
    let mut q = 2u64;
    while q * q <= m {
        if m % q == 0 {
            let mut alpha = 0u32;
            while m % q == 0 {
                m /= q;
                alpha += 1;
            }
            out *= symbol_power(d, q, alpha)?;
        }
        q += 1;
    }
    if m > 1 {
        out *= symbol_power(d, m, 1)?;
    }
    Ok(out)
}

fn symbol_power(d: i64, q: u64, alpha: u32) -> Result<i32> {
    let s = crate::arith::kronecker(d, q as i64);
    if s == 0 {
        return Err(Error::BadArgument(format!(
            "({d}/{q}) = 0; gamma requires n coprime to D"
        )));
    }
    Ok(if alpha % 2 == 1 { s } else { 1 })
}

/// Coefficient table of the quadratic twist by D, computed independently
/// (twist the curve, then count). At good primes of both curves this
/// satisfies a_q(twist) = (D/q) a_q.
pub fn twist_table(
    model: &WeierstrassModel,
    d: &TwistParameter,
    bound: u64,
) -> Result<CoefficientTable> {
    let twisted = model.quadratic_twist(d)?;
    CoefficientTable::build(&twisted, bound)
}
