//! Weierstrass models over Q: invariants, isomorphisms, minimal models,
//! quadratic twists, 2-adic signatures, and rational 2-torsion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, ExtNat};
use crate::{Error, Result};

/// An integral Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeierstrassModel {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
}

/// The standard quantities attached to a model. All exact integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub b2: BigInt,
    pub b4: BigInt,
    pub b6: BigInt,
    pub b8: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    pub disc: BigInt,
}

/// Coordinate change x = u^2 x' + r, y = u^3 y' + u^2 s x' + t. Rational
/// entries: u integral scales down (toward a minimal model), u = 1/n blows
/// up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transformation {
    pub u: BigRational,
    pub r: BigRational,
    pub s: BigRational,
    pub t: BigRational,
}

impl Transformation {
    pub fn identity() -> Self {
        Transformation {
            u: BigRational::one(),
            r: BigRational::zero(),
            s: BigRational::zero(),
            t: BigRational::zero(),
        }
    }

    pub fn from_integers(u: i64, r: i64, s: i64, t: i64) -> Self {
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        Transformation {
            u: q(u),
            r: q(r),
            s: q(s),
            t: q(t),
        }
    }

    /// Pure rescaling by 1/n: inflates a minimal model to an isomorphic
    /// integral model with a_i multiplied by n^i.
    pub fn inflate(n: i64) -> Self {
        assert!(n != 0);
        Transformation {
            u: BigRational::new(BigInt::one(), BigInt::from(n)),
            r: BigRational::zero(),
            s: BigRational::zero(),
            t: BigRational::zero(),
        }
    }
}

impl WeierstrassModel {
    pub fn new(a1: i64, a2: i64, a3: i64, a4: i64, a6: i64) -> Self {
        WeierstrassModel {
            a1: BigInt::from(a1),
            a2: BigInt::from(a2),
            a3: BigInt::from(a3),
            a4: BigInt::from(a4),
            a6: BigInt::from(a6),
        }
    }

    pub fn invariants(&self) -> Invariants {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let z = |k: i64| BigInt::from(k);
        let b2 = a1 * a1 + z(4) * a2;
        let b4 = z(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + z(4) * a6;
        let b8 = a1 * a1 * a6 + z(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = &b2 * &b2 - z(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + z(36) * &b2 * &b4 - z(216) * &b6;
        let disc = -(&b2 * &b2 * &b8) - z(8) * (&b4 * &b4 * &b4) - z(27) * (&b6 * &b6)
            + z(9) * &b2 * &b4 * &b6;
        debug_assert_eq!(z(4) * &b8, &b2 * &b6 - &b4 * &b4);
        debug_assert_eq!(z(1728) * &disc, &c4 * &c4 * &c4 - &c6 * &c6);
        Invariants {
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            disc,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.invariants().disc.is_zero()
    }

    /// Applies the coordinate change, requiring the result stay integral.
    pub fn transformed(&self, tr: &Transformation) -> Result<WeierstrassModel> {
        let (u, r, s, t) = (&tr.u, &tr.r, &tr.s, &tr.t);
        if u.is_zero() {
            return Err(Error::BadArgument(
                "transformation scale u must be nonzero".into(),
            ));
        }
        let q = |n: &BigInt| BigRational::from_integer(n.clone());
        let (a1, a2, a3, a4, a6) = (
            q(&self.a1),
            q(&self.a2),
            q(&self.a3),
            q(&self.a4),
            q(&self.a6),
        );
        let w = |k: i64| BigRational::from_integer(BigInt::from(k));
        let u2 = u * u;
        let u3 = &u2 * u;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        let n1 = &a1 + w(2) * s;
        let n2 = &a2 - s * &a1 + w(3) * r - s * s;
        let n3 = &a3 + r * &a1 + w(2) * t;
        let n4 =
            &a4 - s * &a3 + w(2) * r * &a2 - (t + r * s) * &a1 + w(3) * (r * r) - w(2) * (s * t);
        let n6 = &a6 + r * &a4 + r * r * &a2 + r * r * r - t * &a3 - t * t - r * t * &a1;
        let parts = [n1 / u, n2 / &u2, n3 / &u3, n4 / &u4, n6 / &u6];
        let mut ints = Vec::with_capacity(5);
        for p in &parts {
            if !p.is_integer() {
                return Err(Error::BadArgument(
                    "transformation does not produce an integral model".into(),
                ));
            }
            ints.push(p.to_integer());
        }
        let [a1, a2, a3, a4, a6] = <[BigInt; 5]>::try_from(ints).unwrap();
        Ok(WeierstrassModel { a1, a2, a3, a4, a6 })
    }

    /// The minimal model in canonical reduced form (a1, a3 in {0,1}, a2 in
    /// {-1,0,1}) together with the coordinate change onto it.
    pub fn minimal_model(&self) -> Result<(WeierstrassModel, Transformation)> {
        let inv = self.invariants();
        if inv.disc.is_zero() {
            return Err(Error::Singular);
        }
        let mut caps: Vec<(BigInt, u32)> = Vec::new();
        let cap_at = |p: &BigInt| -> u32 {
            let kc4 = match arith::padic_val(p, &inv.c4) {
                ExtNat::Fin(v) => Some(v / 4),
                ExtNat::Inf => None,
            };
            let kc6 = match arith::padic_val(p, &inv.c6) {
                ExtNat::Fin(v) => Some(v / 6),
                ExtNat::Inf => None,
            };
            match (kc4, kc6) {
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (None, None) => unreachable!("c4 = c6 = 0 forces disc = 0"),
            }
        };
        let pool = if inv.c4.is_zero() {
            inv.c6.abs()
        } else if inv.c6.is_zero() {
            inv.c4.abs()
        } else {
            inv.c4.gcd(&inv.c6)
        };
        if !pool.is_one() {
            for (p, _) in factorize_scaling_pool(&pool)?.factors {
                let k = cap_at(&p);
                if k > 0 {
                    caps.push((p, k));
                }
            }
        }
        // Every u = prod p^e with e <= cap is a candidate; the largest
        // feasible one gives the minimal model.
        let mut candidates = vec![BigInt::one()];
        for (p, k) in &caps {
            let mut next = Vec::with_capacity(candidates.len() * (*k as usize + 1));
            let mut pe = BigInt::one();
            for _ in 0..=*k {
                for u in &candidates {
                    next.push(u * &pe);
                }
                pe *= p;
            }
            candidates = next;
        }
        candidates.sort();
        for u in candidates.into_iter().rev() {
            let u4 = (&u).pow(4u32);
            let u6 = (&u).pow(6u32);
            let (c4q, c4r) = inv.c4.div_rem(&u4);
            let (c6q, c6r) = inv.c6.div_rem(&u6);
            if !c4r.is_zero() || !c6r.is_zero() {
                continue;
            }
            if let Some(model) = reduced_model_from(&c4q, &c6q) {
                let tr = self.transformation_onto(&model, &u);
                return Ok((model, tr));
            }
        }
        unreachable!("u = 1 always admits a reduced model");
    }

    /// Solves for (r, s, t) given the scale u between isomorphic models and
    /// checks the full system.
    fn transformation_onto(&self, other: &WeierstrassModel, u: &BigInt) -> Transformation {
        let q = |n: &BigInt| BigRational::from_integer(n.clone());
        let u = q(u);
        let s = (&u * q(&other.a1) - q(&self.a1)) / BigRational::from_integer(2.into());
        let r = (&u * &u * q(&other.a2) - q(&self.a2) + &s * q(&self.a1) + &s * &s)
            / BigRational::from_integer(3.into());
        let t = (&u * &u * &u * q(&other.a3) - q(&self.a3) - &r * q(&self.a1))
            / BigRational::from_integer(2.into());
        let tr = Transformation { u, r, s, t };
        let image = self
            .transformed(&tr)
            .expect("solved transformation must be integral");
        assert_eq!(&image, other, "transformation equations are inconsistent");
        tr
    }

    /// Minimal model of the quadratic twist by d.
    pub fn quadratic_twist(&self, d: &TwistParameter) -> Result<WeierstrassModel> {
        let inv = self.invariants();
        if inv.disc.is_zero() {
            return Err(Error::Singular);
        }
        let dd = BigInt::from(d.value());
        let d2 = &dd * &dd;
        let d3 = &d2 * &dd;
        // y^2 = x^3 - 27 d^2 c4 x - 54 d^3 c6 has (c4, c6) = (6^4 d^2 c4, 6^6 d^3 c6).
        let blown = WeierstrassModel {
            a1: BigInt::zero(),
            a2: BigInt::zero(),
            a3: BigInt::zero(),
            a4: BigInt::from(-27) * d2 * &inv.c4,
            a6: BigInt::from(-54) * d3 * &inv.c6,
        };
        Ok(blown.minimal_model()?.0)
    }

    /// 2-adic valuations (v2(c4), v2(c6), v2(disc)) of the minimal model.
    pub fn signature(&self) -> Result<Signature> {
        let (minimal, _) = self.minimal_model()?;
        let inv = minimal.invariants();
        Ok(Signature {
            c4: arith::v2(&inv.c4),
            c6: arith::v2(&inv.c6),
            disc: arith::v2(&inv.disc),
        })
    }

    /// Order of E(Q)[2]: 1, 2, or 4. Counts rational roots of the 2-division
    /// polynomial 4x^3 + b2 x^2 + 2 b4 x + b6 via X = 4x.
    pub fn two_torsion_order(&self) -> Result<u32> {
        let inv = self.invariants();
        if inv.disc.is_zero() {
            return Err(Error::Singular);
        }
        let p2 = inv.b2.clone();
        let p1 = BigInt::from(8) * &inv.b4;
        let p0 = BigInt::from(16) * &inv.b6;
        Ok(1 + count_integer_roots_cubic(&p2, &p1, &p0)?)
    }
}

/// Squarefree nonzero twist parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TwistParameter(i64);

impl TwistParameter {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || !arith::is_squarefree_i64(d)? {
            return Err(Error::BadTwist(d.to_string()));
        }
        Ok(TwistParameter(d))
    }

    pub fn value(self) -> i64 {
        self.0
    }
}

impl std::fmt::Display for TwistParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::str::FromStr for TwistParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let d: i64 = s
            .trim()
            .parse()
            .map_err(|_| Error::BadTwist(s.to_string()))?;
        TwistParameter::new(d)
    }
}

/// (v2(c4), v2(c6), v2(disc)) of a minimal model; c6 = 0 prints as inf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub c4: ExtNat,
    pub c6: ExtNat,
    pub disc: ExtNat,
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.c4, self.c6, self.disc)
    }
}

impl std::fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{},{},{},{},{}]",
            self.a1, self.a2, self.a3, self.a4, self.a6
        )
    }
}

impl std::str::FromStr for WeierstrassModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim();
        let inner = inner.strip_prefix('[').unwrap_or(inner);
        let inner = inner.strip_suffix(']').unwrap_or(inner);
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::BadCurve(format!(
                "expected 5 comma-separated coefficients, got {}",
                parts.len()
            )));
        }
        let mut coeffs = Vec::with_capacity(5);
        for p in parts {
            coeffs.push(
                p.parse::<BigInt>()
                    .map_err(|_| Error::BadCurve(format!("bad integer {p:?}")))?,
            );
        }
        let [a1, a2, a3, a4, a6] = <[BigInt; 5]>::try_from(coeffs).unwrap();
        Ok(WeierstrassModel { a1, a2, a3, a4, a6 })
    }
}

/// The scaling pool only matters at primes p with p^4 | c4 (or c4 = 0), so
/// strip everything the trial wheel finds and certify what remains.
fn factorize_scaling_pool(pool: &BigInt) -> Result<arith::Factorization> {
    arith::factorize(pool)
}

/// Searches the 12 canonical reduced coefficient triples for an integral
/// model with invariants exactly (c4, c6). At most one exists.
fn reduced_model_from(c4: &BigInt, c6: &BigInt) -> Option<WeierstrassModel> {
    for a1 in 0i64..=1 {
        for a2 in -1i64..=1 {
            for a3 in 0i64..=1 {
                let b2 = BigInt::from(a1 * a1 + 4 * a2);
                let num = &b2 * &b2 - c4;
                let (b4, r) = num.div_rem(&BigInt::from(24));
                if !r.is_zero() {
                    continue;
                }
                let num = &b4 - BigInt::from(a1 * a3);
                let (a4, r) = num.div_rem(&BigInt::from(2));
                if !r.is_zero() {
                    continue;
                }
                let num = -(&b2 * &b2 * &b2) + BigInt::from(36) * &b2 * &b4 - c6;
                let (b6, r) = num.div_rem(&BigInt::from(216));
                if !r.is_zero() {
                    continue;
                }
                let num = &b6 - BigInt::from(a3 * a3);
                let (a6, r) = num.div_rem(&BigInt::from(4));
                if !r.is_zero() {
                    continue;
                }
                let model = WeierstrassModel {
                    a1: BigInt::from(a1),
                    a2: BigInt::from(a2),
                    a3: BigInt::from(a3),
                    a4,
                    a6,
                };
                let inv = model.invariants();
                if &inv.c4 == c4 && &inv.c6 == c6 {
                    return Some(model);
                }
            }
        }
    }
    None
}

/// Distinct integer roots of X^3 + p2 X^2 + p1 X + p0 (the caller guarantees
/// the cubic is separable).
fn count_integer_roots_cubic(p2: &BigInt, p1: &BigInt, p0: &BigInt) -> Result<u32> {
    let eval = |x: &BigInt| ((x + p2) * x + p1) * x + p0;
    if p0.is_zero() {
        // X = 0 plus nonzero integer roots of the deflated quadratic.
        return Ok(1 + count_integer_roots_quadratic(p2, p1));
    }
    let mut count = 0;
    for d in arith::factorize(p0)?.divisors() {
        for root in [&d, &(-&d)] {
            if eval(root).is_zero() {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Distinct integer roots of X^2 + b X + c.
fn count_integer_roots_quadratic(b: &BigInt, c: &BigInt) -> u32 {
    let disc = b * b - BigInt::from(4) * c;
    if disc.is_negative() {
        return 0;
    }
    let s = disc.sqrt();
    if &s * &s != disc {
        return 0;
    }
    // Roots (-b +- s)/2: integral iff b and s share parity.
    if (b + &s).is_even() {
        if s.is_zero() {
            1
        } else {
            2
        }
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(s: &str) -> WeierstrassModel {
        s.parse().unwrap()
    }

    #[test]
    fn invariants_cases() {
        // (coefficients, c4, c6, disc)
        const CASES: [(&str, i64, i64, i64); 8] = [
            ("[1,-1,1,-1,0]", 33, -81, 17),
            ("[1,-1,0,-2,-1]", 105, 1323, -343),
            ("[1,-1,0,-37,-78]", 1785, 75411, 343),
            ("[0,0,0,-1,0]", 48, 0, 64),
            ("[0,0,0,4,0]", -192, 0, -4096),
            ("[0,1,0,1,1]", -32, -640, -256),
            ("[0,-1,0,-2,2]", 112, -1088, 128),
            ("[0,-1,0,3,5]", -128, -5120, -16384),
        ];
        for (coeffs, c4, c6, disc) in CASES {
            let inv = model(coeffs).invariants();
            assert_eq!(inv.c4, BigInt::from(c4), "c4 of {coeffs}");
            assert_eq!(inv.c6, BigInt::from(c6), "c6 of {coeffs}");
            assert_eq!(inv.disc, BigInt::from(disc), "disc of {coeffs}");
        }
    }

    #[test]
    fn parse_and_display() {
        let m = model(" [1, -1, 1, -91, -310] ");
        assert_eq!(m.to_string(), "[1,-1,1,-91,-310]");
        assert_eq!(m, "1,-1,1,-91,-310".parse().unwrap());
        assert!("1,2,3".parse::<WeierstrassModel>().is_err());
        assert!("1,2,x,4,5".parse::<WeierstrassModel>().is_err());
    }

    #[test]
    fn minimal_model_is_identity_on_reduced_models() {
        for coeffs in [
            "[1,-1,1,-1,0]",
            "[1,-1,0,-1822,30393]",
            "[0,0,0,-1,0]",
            "[0,1,0,3,-5]",
            "[0,0,1,0,-7]", // c4 = 0; u = 3 passes the valuation caps but not integrality
        ] {
            let m = model(coeffs);
            let (minimal, tr) = m.minimal_model().unwrap();
            assert_eq!(minimal, m, "{coeffs} should already be minimal");
            assert_eq!(tr, Transformation::identity());
        }
    }

    #[test]
    fn minimal_model_undoes_inflation() {
        let cases = ["[1,-1,1,-1,0]", "[0,0,0,-1,0]", "[0,-1,0,-9,-7]"];
        for coeffs in cases {
            let m = model(coeffs);
            for n in [2i64, 3, 5, 6, 30] {
                let big = m.transformed(&Transformation::inflate(n)).unwrap();
                assert_eq!(
                    big.invariants().disc,
                    m.invariants().disc * BigInt::from(n).pow(12)
                );
                let (minimal, tr) = big.minimal_model().unwrap();
                assert_eq!(minimal, m, "inflate {coeffs} by {n}");
                assert_eq!(big.transformed(&tr).unwrap(), minimal);
            }
        }
    }

    #[test]
    fn minimal_model_undoes_shifts() {
        let m = model("[1,-1,1,-91,-310]");
        for (n, r, s, t) in [(2, 3, -1, 4), (6, -2, 5, 1), (1, 7, 7, -7), (10, 0, -3, 2)] {
            let big = m
                .transformed(&Transformation::inflate(n))
                .unwrap()
                .transformed(&Transformation::from_integers(1, r, s, t))
                .unwrap();
            let (minimal, _) = big.minimal_model().unwrap();
            assert_eq!(minimal, m, "inflate {n} shift ({r},{s},{t})");
        }
    }

    #[test]
    fn transformed_rejects_non_integral() {
        let m = model("[1,-1,1,-1,0]");
        // Dividing by u = 2 is not possible: the model is minimal.
        assert!(m
            .transformed(&Transformation::from_integers(2, 0, 0, 0))
            .is_err());
    }

    #[test]
    fn twist_cases() {
        let e = model("[1,-1,1,-1,0]");
        let d = TwistParameter::new(-3).unwrap();
        let twisted = e.quadratic_twist(&d).unwrap();
        let inv = twisted.invariants();
        assert_eq!(inv.c4, BigInt::from(9 * 33));
        assert_eq!(inv.c6, BigInt::from(-27 * -81));
        assert_eq!(inv.disc, BigInt::from(729 * 17));

        let e = model("[0,0,0,-1,0]");
        let two = TwistParameter::new(2).unwrap();
        assert_eq!(e.quadratic_twist(&two).unwrap(), model("[0,0,0,-4,0]"));

        // Twisting by 1 minimizes.
        let one = TwistParameter::new(1).unwrap();
        let big = e.transformed(&Transformation::inflate(5)).unwrap();
        assert_eq!(big.quadratic_twist(&one).unwrap(), e);
    }

    #[test]
    fn twist_is_an_involution() {
        for coeffs in ["[1,-1,1,-1,0]", "[1,-1,0,-107,552]", "[0,1,0,-2,-2]"] {
            let e = model(coeffs);
            for d in [-1i64, 2, -3, 5, -15, 34] {
                let d = TwistParameter::new(d).unwrap();
                let back = e.quadratic_twist(&d).unwrap().quadratic_twist(&d).unwrap();
                assert_eq!(back, e, "{coeffs} twisted twice by {d}");
            }
        }
    }

    #[test]
    fn twist_parameter_validation() {
        assert!(TwistParameter::new(0).is_err());
        assert!(TwistParameter::new(12).is_err());
        assert!(TwistParameter::new(-4).is_err());
        assert_eq!(TwistParameter::new(-51).unwrap().value(), -51);
        assert_eq!("  -15 ".parse::<TwistParameter>().unwrap().value(), -15);
    }

    #[test]
    fn signature_cases() {
        const CASES: [(&str, ExtNat, ExtNat, ExtNat); 4] = [
            ("[0,0,0,-1,0]", ExtNat::Fin(4), ExtNat::Inf, ExtNat::Fin(6)),
            ("[0,0,0,4,0]", ExtNat::Fin(6), ExtNat::Inf, ExtNat::Fin(12)),
            (
                "[0,1,0,3,-5]",
                ExtNat::Fin(7),
                ExtNat::Fin(10),
                ExtNat::Fin(14),
            ),
            (
                "[0,1,0,-9,7]",
                ExtNat::Fin(6),
                ExtNat::Fin(9),
                ExtNat::Fin(13),
            ),
        ];
        for (coeffs, c4, c6, disc) in CASES {
            let m = model(coeffs);
            let sig = m.signature().unwrap();
            assert_eq!(sig, Signature { c4, c6, disc }, "{coeffs}");
            // Signature must not depend on the presented model.
            let big = m.transformed(&Transformation::inflate(6)).unwrap();
            assert_eq!(big.signature().unwrap(), sig);
        }
        assert_eq!(
            model("[0,0,0,-1,0]").signature().unwrap().to_string(),
            "(4, inf, 6)"
        );
    }

    #[test]
    fn two_torsion_cases() {
        const CASES: [(&str, u32); 6] = [
            ("[1,-1,1,-6,-4]", 4),
            ("[1,-1,1,-1,0]", 2),
            ("[1,-1,1,-91,-310]", 2),
            ("[0,0,0,-1,0]", 4),
            ("[0,0,0,4,0]", 2),
            ("[1,-1,0,-2,-1]", 2),
        ];
        for (coeffs, order) in CASES {
            assert_eq!(
                model(coeffs).two_torsion_order().unwrap(),
                order,
                "{coeffs}"
            );
        }
        // No rational 2-torsion at all: y^2 + y = x^3 - x (conductor 37).
        assert_eq!(model("[0,0,1,-1,0]").two_torsion_order().unwrap(), 1);
    }
}
