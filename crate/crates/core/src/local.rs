//! Local reduction data via Tate's algorithm, run in exact arithmetic at
//! every prime (2 and 3 included). Non-minimal input is rescaled on the fly,
//! so any integral model of the curve gives the same answer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{self, ExtNat};
use crate::curve::{Transformation, WeierstrassModel};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KodairaType {
    /// I(0) is good reduction; I(n), n >= 1, multiplicative.
    I(u32),
    /// I(m)* for m >= 0.
    Istar(u32),
    II,
    III,
    IV,
    IVstar,
    IIIstar,
    IIstar,
}

impl KodairaType {
    /// Number of irreducible components of the special fiber (with
    /// multiplicity one each), as in Ogg's formula.
    pub fn components(self) -> u32 {
        match self {
            KodairaType::I(0) => 1,
            KodairaType::I(n) => n,
            KodairaType::Istar(m) => 5 + m,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::IVstar => 7,
            KodairaType::IIIstar => 8,
            KodairaType::IIstar => 9,
        }
    }
}

impl std::fmt::Display for KodairaType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::Istar(m) => write!(f, "I{m}*"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IVstar => write!(f, "IV*"),
            KodairaType::IIIstar => write!(f, "III*"),
            KodairaType::IIstar => write!(f, "II*"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionKind {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
}

impl ReductionKind {
    /// The eigenvalue a_p at a bad prime; None for good reduction (where it
    /// comes from point counting instead).
    pub fn bad_ap(self) -> Option<i64> {
        match self {
            ReductionKind::Good => None,
            ReductionKind::SplitMultiplicative => Some(1),
            ReductionKind::NonsplitMultiplicative => Some(-1),
            ReductionKind::Additive => Some(0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ReductionKind::Good => "good",
            ReductionKind::SplitMultiplicative => "split multiplicative",
            ReductionKind::NonsplitMultiplicative => "nonsplit multiplicative",
            ReductionKind::Additive => "additive",
        }
    }
}

/// Everything Tate's algorithm yields at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalReduction {
    pub p: BigInt,
    pub kind: ReductionKind,
    pub kodaira: KodairaType,
    /// Conductor exponent.
    pub f: u32,
    /// Valuation of the minimal discriminant at p.
    pub v_disc: u32,
}

/// The conductor together with its per-prime data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conductor {
    pub value: BigInt,
    pub factors: Vec<(BigInt, u32)>,
    pub locals: Vec<LocalReduction>,
}

impl Conductor {
    pub fn factored_string(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|(p, e)| {
                if *e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" * ")
    }
}

/// Runs Tate's algorithm at p on any integral model of the curve.
pub fn local_reduction(model: &WeierstrassModel, p: &BigInt) -> Result<LocalReduction> {
    if !arith::is_prime(p)? {
        return Err(Error::NotPrime(p.to_string()));
    }
    let mut m = model.clone();
    loop {
        match tate_once(&m, p)? {
            Step::Done(red) => return Ok(red),
            Step::NonMinimal => {
                let inv_p = BigRational::from_integer(p.clone());
                m = m
                    .transformed(&Transformation {
                        u: inv_p,
                        r: BigRational::zero(),
                        s: BigRational::zero(),
                        t: BigRational::zero(),
                    })
                    .expect("step 11 divisibilities make the rescale integral");
            }
        }
    }
}

/// Conductor of the curve: product of p^f over the bad primes of a minimal
/// model.
pub fn conductor(model: &WeierstrassModel) -> Result<Conductor> {
    let (minimal, _) = model.minimal_model()?;
    let disc = minimal.invariants().disc;
    let mut value = BigInt::one();
    let mut factors = Vec::new();
    let mut locals = Vec::new();
    for (p, _) in arith::factorize(&disc)?.factors {
        let red = local_reduction(&minimal, &p)?;
        if red.f > 0 {
            value *= p.pow(red.f);
            factors.push((p, red.f));
        }
        locals.push(red);
    }
    Ok(Conductor {
        value,
        factors,
        locals,
    })
}

enum Step {
    Done(LocalReduction),
    NonMinimal,
}

fn modp(x: &BigInt, p: &BigInt) -> BigInt {
    x.mod_floor(p)
}

/// Inverse mod the prime p via Fermat.
fn inv_mod(x: &BigInt, p: &BigInt) -> BigInt {
    let xm = modp(x, p);
    debug_assert!(!xm.is_zero(), "inverse of 0 mod {p}");
    xm.modpow(&(p - BigInt::from(2)), p)
}

/// Legendre symbol via Euler's criterion; p an odd prime.
fn legendre(a: &BigInt, p: &BigInt) -> i32 {
    let r = modp(a, p).modpow(&((p - BigInt::one()) / BigInt::from(2)), p);
    if r.is_zero() {
        0
    } else if r.is_one() {
        1
    } else {
        -1
    }
}

fn exact_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    debug_assert!(r.is_zero(), "exact division {a} / {b}");
    q
}

fn shift(m: &WeierstrassModel, r: BigInt, s: BigInt, t: BigInt) -> WeierstrassModel {
    m.transformed(&Transformation {
        u: BigRational::one(),
        r: BigRational::from_integer(r),
        s: BigRational::from_integer(s),
        t: BigRational::from_integer(t),
    })
    .expect("integral shift")
}

/// The singular point of the reduction mod p, as lifted coordinates (r, t).
/// Only called when v_p(disc) >= 1; the point is unique, hence rational.
fn singular_point(m: &WeierstrassModel, p: &BigInt) -> (BigInt, BigInt) {
    if *p <= BigInt::from(3) {
        // Brute force over at most 9 affine points.
        let pv = p.to_string().parse::<i64>().unwrap();
        for x in 0..pv {
            for y in 0..pv {
                let (x, y) = (BigInt::from(x), BigInt::from(y));
                let fval = &y * &y + &m.a1 * &x * &y + &m.a3 * &y
                    - (&x * &x * &x + &m.a2 * &x * &x + &m.a4 * &x + &m.a6);
                let fx =
                    &m.a1 * &y - (BigInt::from(3) * &x * &x + BigInt::from(2) * &m.a2 * &x + &m.a4);
                let fy = BigInt::from(2) * &y + &m.a1 * &x + &m.a3;
                if modp(&fval, p).is_zero() && modp(&fx, p).is_zero() && modp(&fy, p).is_zero() {
                    return (x, y);
                }
            }
        }
        unreachable!("singular reduction must have a singular point mod {p}");
    }
    // p >= 5: short form y^2 = x^3 + Ax + B with A = -c4/48, B = -c6/864.
    let inv = m.invariants();
    let a = modp(&(-&inv.c4 * inv_mod(&BigInt::from(48), p)), p);
    let b = modp(&(-&inv.c6 * inv_mod(&BigInt::from(864), p)), p);
    let alpha = if a.is_zero() {
        BigInt::zero()
    } else {
        // Double root of x^3 + Ax + B.
        modp(
            &(BigInt::from(-3) * &b * inv_mod(&(BigInt::from(2) * &a), p)),
            p,
        )
    };
    let x0 = modp(&(alpha - &inv.b2 * inv_mod(&BigInt::from(12), p)), p);
    let y0 = modp(&(-(&m.a1 * &x0 + &m.a3) * inv_mod(&BigInt::from(2), p)), p);
    (x0, y0)
}

fn vp(p: &BigInt, x: &BigInt) -> ExtNat {
    arith::padic_val(p, x)
}

/// One pass of Tate's algorithm. Returns NonMinimal exactly when every exit
/// condition fails, i.e. the model can be rescaled by u = p.
fn tate_once(model: &WeierstrassModel, p: &BigInt) -> Result<Step> {
    let inv = model.invariants();
    if inv.disc.is_zero() {
        return Err(Error::Singular);
    }
    let n = match vp(p, &inv.disc) {
        ExtNat::Fin(v) => v,
        ExtNat::Inf => unreachable!(),
    };
    let done = |kind, kodaira: KodairaType, n: u32| {
        let f = n + 1 - kodaira.components();
        Step::Done(LocalReduction {
            p: p.clone(),
            kind,
            kodaira,
            f,
            v_disc: n,
        })
    };
    if n == 0 {
        return Ok(done(ReductionKind::Good, KodairaType::I(0), 0));
    }
    let two = BigInt::from(2);
    let is_two = *p == two;
    let is_three = *p == BigInt::from(3);

    // Step 2: move the singular point to the origin.
    let (r0, t0) = singular_point(model, p);
    let m = shift(model, r0, BigInt::zero(), t0);
    let inv = m.invariants();
    debug_assert!(modp(&m.a3, p).is_zero() && modp(&m.a4, p).is_zero() && modp(&m.a6, p).is_zero());

    if vp(p, &inv.b2) == ExtNat::Fin(0) {
        // Multiplicative: split iff the tangent directions are rational.
        let split = if is_two {
            m.a2.is_even()
        } else {
            legendre(&inv.b2, p) == 1
        };
        let kind = if split {
            ReductionKind::SplitMultiplicative
        } else {
            ReductionKind::NonsplitMultiplicative
        };
        return Ok(done(kind, KodairaType::I(n), n));
    }

    // Additive from here on.
    if vp(p, &m.a6) < ExtNat::Fin(2) {
        return Ok(done(ReductionKind::Additive, KodairaType::II, n));
    }
    if vp(p, &inv.b8) < ExtNat::Fin(3) {
        return Ok(done(ReductionKind::Additive, KodairaType::III, n));
    }
    if vp(p, &inv.b6) < ExtNat::Fin(3) {
        return Ok(done(ReductionKind::Additive, KodairaType::IV, n));
    }

    // Step 6: normalize to p | a1, a2; p^2 | a3, a4; p^3 | a6.
    let m = if is_two {
        let m = if m.a2.is_odd() {
            shift(&m, BigInt::zero(), BigInt::one(), BigInt::zero())
        } else {
            m
        };
        if vp(p, &m.a6) == ExtNat::Fin(2) {
            shift(&m, BigInt::zero(), BigInt::zero(), two.clone())
        } else {
            m
        }
    } else {
        let s = modp(&(-&m.a1 * inv_mod(&two, p)), p);
        let m = shift(&m, BigInt::zero(), s, BigInt::zero());
        let a3_over_p = exact_div(&m.a3, p);
        let tau = modp(&(-a3_over_p * inv_mod(&two, p)), p);
        shift(&m, BigInt::zero(), BigInt::zero(), p * tau)
    };
    debug_assert!(vp(p, &m.a1) >= ExtNat::Fin(1) && vp(p, &m.a2) >= ExtNat::Fin(1));
    debug_assert!(vp(p, &m.a3) >= ExtNat::Fin(2) && vp(p, &m.a4) >= ExtNat::Fin(2));
    debug_assert!(vp(p, &m.a6) >= ExtNat::Fin(3));

    // Step 7: the cubic P(T) = T^3 + b T^2 + c T + d from the normalized
    // coefficients.
    let p2 = p * p;
    let p3 = &p2 * p;
    let p4 = &p2 * &p2;
    let b = exact_div(&m.a2, p);
    let c = exact_div(&m.a4, &p2);
    let d = exact_div(&m.a6, &p3);
    let w = BigInt::from(27) * &d * &d - &b * &b * &c * &c + BigInt::from(4) * &b * &b * &b * &d
        - BigInt::from(18) * &b * &c * &d
        + BigInt::from(4) * &c * &c * &c;
    let x = BigInt::from(3) * &c - &b * &b;
    if vp(p, &w) == ExtNat::Fin(0) {
        // Three distinct roots.
        return Ok(done(ReductionKind::Additive, KodairaType::Istar(0), n));
    }
    if vp(p, &x) == ExtNat::Fin(0) {
        // Exactly one double root; locate it and run the I_m* subprocedure.
        let rbar = if is_two {
            modp(&c, p)
        } else if is_three {
            modp(&(&b * &c), p)
        } else {
            let num = &b * &c - BigInt::from(9) * &d;
            modp(&(num * inv_mod(&(BigInt::from(2) * &x), p)), p)
        };
        let mut m = shift(&m, p * rbar, BigInt::zero(), BigInt::zero());
        let mut mx = p2.clone();
        let mut my = p2.clone();
        let mut mcount: u32 = 1;
        loop {
            assert!(mcount <= n, "I_m* subprocedure exceeded v(disc)");
            let a3t = exact_div(&m.a3, &my);
            let a6t = exact_div(&m.a6, &(&mx * &my));
            let disc_y = &a3t * &a3t + BigInt::from(4) * &a6t;
            if vp(p, &disc_y) == ExtNat::Fin(0) {
                return Ok(done(ReductionKind::Additive, KodairaType::Istar(mcount), n));
            }
            let root = if is_two {
                modp(&a6t, p)
            } else {
                modp(&(-&a3t * inv_mod(&two, p)), p)
            };
            m = shift(&m, BigInt::zero(), BigInt::zero(), &my * root);
            my *= p;
            mcount += 1;

            let a2t = exact_div(&m.a2, p);
            let a4t = exact_div(&m.a4, &(p * &mx));
            let a6t = exact_div(&m.a6, &(&mx * &my));
            let disc_x = &a4t * &a4t - BigInt::from(4) * &a2t * &a6t;
            if vp(p, &disc_x) == ExtNat::Fin(0) {
                return Ok(done(ReductionKind::Additive, KodairaType::Istar(mcount), n));
            }
            let root = if is_two {
                modp(&(&a6t * &a2t), p)
            } else {
                modp(&(-&a4t * inv_mod(&(BigInt::from(2) * &a2t), p)), p)
            };
            m = shift(&m, &mx * root, BigInt::zero(), BigInt::zero());
            mx *= p;
            mcount += 1;
        }
    }

    // Triple root: translate it to T = 0.
    let rbar = if is_three {
        modp(&-&d, p)
    } else {
        modp(&(-&b * inv_mod(&BigInt::from(3), p)), p)
    };
    let m = shift(&m, p * rbar, BigInt::zero(), BigInt::zero());
    debug_assert!(vp(p, &m.a2) >= ExtNat::Fin(2));
    debug_assert!(vp(p, &m.a4) >= ExtNat::Fin(3));
    debug_assert!(vp(p, &m.a6) >= ExtNat::Fin(4));

    // Step 8: Y^2 + a3/p^2 Y - a6/p^4.
    let a32 = exact_div(&m.a3, &p2);
    let a64 = exact_div(&m.a6, &p4);
    let disc_y = &a32 * &a32 + BigInt::from(4) * &a64;
    if vp(p, &disc_y) == ExtNat::Fin(0) {
        return Ok(done(ReductionKind::Additive, KodairaType::IVstar, n));
    }
    let root = if is_two {
        modp(&a64, p)
    } else {
        modp(&(-&a32 * inv_mod(&two, p)), p)
    };
    let m = shift(&m, BigInt::zero(), BigInt::zero(), &p2 * root);
    debug_assert!(vp(p, &m.a3) >= ExtNat::Fin(3));
    debug_assert!(vp(p, &m.a6) >= ExtNat::Fin(5));

    // Step 9.
    if vp(p, &m.a4) < ExtNat::Fin(4) {
        return Ok(done(ReductionKind::Additive, KodairaType::IIIstar, n));
    }
    // Step 10.
    if vp(p, &m.a6) < ExtNat::Fin(6) {
        return Ok(done(ReductionKind::Additive, KodairaType::IIstar, n));
    }
    // Step 11: p | a1, p^2 | a2, p^3 | a3, p^4 | a4, p^6 | a6.
    Ok(Step::NonMinimal)
}
