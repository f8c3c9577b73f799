//! Alternating sums of twisted eigenforms over the family
//! `y^2 = x^3 - d D^2 x` (D running over the divisors of an odd squarefree
//! d) and the 2-adic congruence-number lower bound they force:
//! `nu_2(delta_E) >= 2 floor((omega(d)+1)/2) + 1` for every member.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::json;

use crate::arith::{factorize, is_prime_u64, kronecker};
use crate::curve::WeierstrassModel;
use crate::hecke::{a_q, gamma, CoefficientTable};
use crate::local;
use crate::{Error, Result};

/// Coefficient bound used by the sweep entry points when none is given.
pub const DEFAULT_COEFF_BOUND: u64 = 2000;

/// Divisor count cap: tables cost `2^omega(d) * B` integers.
const OMEGA_CAP: u32 = 4;

fn family_model(d: u64, div: u64) -> Result<WeierstrassModel> {
    let a4 = -(d as i128) * (div as i128) * (div as i128);
    if a4 < i64::MIN as i128 {
        return Err(Error::BadArgument(format!("d = {d} is too large")));
    }
    Ok(WeierstrassModel::new(0, 0, 0, a4 as i64, 0))
}

fn check_family_parameter(d: u64) -> Result<Vec<u64>> {
    if d % 2 == 0 {
        return Err(Error::BadArgument(format!("d = {d} must be odd")));
    }
    let fact = factorize(&BigInt::from(d))?;
    if !fact.is_squarefree() {
        return Err(Error::BadArgument(format!("d = {d} must be squarefree")));
    }
    if fact.omega() > OMEGA_CAP {
        return Err(Error::BadArgument(format!(
            "omega({d}) = {} exceeds the table cap {OMEGA_CAP}",
            fact.omega()
        )));
    }
    let mut primes = Vec::with_capacity(fact.omega() as usize);
    for div in fact.divisors() {
        let q: u64 = (&div).try_into().expect("divisor of a u64 fits");
        if is_prime_u64(q) {
            primes.push(q);
        }
    }
    Ok(primes)
}

/// Coefficient tables for every member of the family, built once per d by
/// independent point counting (no use of the twist relation).
pub struct FamilyTables {
    d: u64,
    primes: Vec<u64>,
    divisors: Vec<u64>,
    omegas: Vec<u32>,
    tables: Vec<CoefficientTable>,
}

impl FamilyTables {
    pub fn build(d: u64, bound: u64) -> Result<Self> {
        if d < 3 {
            return Err(Error::BadArgument(format!(
                "d = {d} is below the smallest admissible member d = 3"
            )));
        }
        let primes = check_family_parameter(d)?;
        let mut divisors = vec![1u64];
        for p in &primes {
            let with_p: Vec<u64> = divisors.iter().map(|v| v * p).collect();
            divisors.extend(with_p);
        }
        divisors.sort_unstable();
        let omegas: Vec<u32> = divisors
            .iter()
            .map(|v| primes.iter().filter(|p| v % *p == 0).count() as u32)
            .collect();
        let tables = divisors
            .par_iter()
            .map(|div| CoefficientTable::build(&family_model(d, *div)?, bound))
            .collect::<Result<Vec<_>>>()?;
        Ok(FamilyTables {
            d,
            primes,
            divisors,
            omegas,
            tables,
        })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// omega(d), the m of the valuation bound.
    pub fn m(&self) -> u32 {
        self.primes.len() as u32
    }

    pub fn bound(&self) -> u64 {
        self.tables[0].bound()
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    /// Table of the member `y^2 = x^3 - d div^2 x`.
    pub fn member(&self, div: u64) -> Option<&CoefficientTable> {
        let i = self.divisors.iter().position(|v| *v == div)?;
        Some(&self.tables[i])
    }

    /// Table of the base member D = 1, the f of the bound statement.
    pub fn base(&self) -> &CoefficientTable {
        self.member(1).expect("1 divides d")
    }

    /// a_n of the alternating sum S = sum over D | d of (-1)^omega(D) f^(D).
    pub fn alternating_sum(&self, n: u64) -> Result<i64> {
        self.alternating_sum_over(n, self.d)
    }

    /// Same sum restricted to divisors of `top` (a divisor of d); the inner
    /// sums of the recursion step live here.
    pub fn alternating_sum_over(&self, n: u64, top: u64) -> Result<i64> {
        if top == 0 || self.d % top != 0 {
            return Err(Error::BadArgument(format!(
                "{top} is not a divisor of {}",
                self.d
            )));
        }
        let mut sum = 0i64;
        for (i, div) in self.divisors.iter().enumerate() {
            if top % div != 0 {
                continue;
            }
            let a = self.tables[i]
                .coefficient(n)
                .ok_or_else(|| Error::BadArgument(format!("n = {n} exceeds the table bound")))?;
            sum += if self.omegas[i] % 2 == 0 { a } else { -a };
        }
        Ok(sum)
    }

    /// Largest divisor of n supported on the primes of d, and its cofactor.
    fn split(&self, n: u64) -> (u64, u64) {
        let mut n2 = n;
        for p in &self.primes {
            while n2 % p == 0 {
                n2 /= p;
            }
        }
        (n / n2, n2)
    }
}

/// epsilon of the bound: 1 for even m, 2 for odd m.
pub fn epsilon_for(m: u32) -> u32 {
    if m % 2 == 0 {
        1
    } else {
        2
    }
}

/// The congruence-number valuation lower bound m + epsilon.
pub fn theorem_bound(m: u32) -> u32 {
    let bound = m + epsilon_for(m);
    debug_assert_eq!(bound, 2 * ((m + 1) / 2) + 1);
    bound
}

/// One coefficient of S checked against the dichotomy
/// `a_n(S) = 2^m a_n(f)` when gamma_{n2}(p) = -1 for every p | d, else 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimOutcome {
    pub n: u64,
    pub sum: i64,
    pub expected: i64,
    pub ok: bool,
}

pub fn claim_check(tables: &FamilyTables, n: u64) -> Result<ClaimOutcome> {
    let sum = tables.alternating_sum(n)?;
    let base = tables.base().coefficient(n).expect("checked by the sum");
    // Additive reduction at 2 across the whole family: even n never reach
    // the gamma character, their coefficients are outright zero.
    let expected = if n % 2 == 0 || base == 0 {
        0
    } else {
        // base != 0 forces n coprime to 2d, so n2 = n and every symbol
        // in gamma is nonzero.
        let mut all_minus = true;
        for p in &tables.primes {
            if gamma(n, *p as i64)? != -1 {
                all_minus = false;
                break;
            }
        }
        if all_minus {
            (1i64 << tables.m()) * base
        } else {
            0
        }
    };
    Ok(ClaimOutcome {
        n,
        sum,
        expected,
        ok: sum == expected,
    })
}

/// The recursion step behind the dichotomy: whenever gamma_{n2}(p) = -1 for
/// a prime p | d, the full sum collapses onto the subfamily missing p,
/// `a_n(S) = 2 a_{n1}(f) * sum over D | (d/p) of (-1)^omega(D) a_{n2}(f^(D))`.
/// Returns None when the premise does not apply to (n, p).
pub fn telescope_check(tables: &FamilyTables, n: u64, p: u64) -> Result<Option<bool>> {
    if !tables.primes.contains(&p) {
        return Err(Error::BadArgument(format!(
            "{p} does not divide d = {}",
            tables.d
        )));
    }
    let (n1, n2) = tables.split(n);
    if n2 % 2 == 0 || n2 == 1 || gamma(n2, p as i64)? != -1 {
        return Ok(None);
    }
    let lhs = tables.alternating_sum(n)?;
    let base_n1 = tables
        .base()
        .coefficient(n1)
        .ok_or_else(|| Error::BadArgument(format!("n = {n} exceeds the table bound")))?;
    let rhs = 2 * base_n1 * tables.alternating_sum_over(n2, tables.d / p)?;
    Ok(Some(lhs == rhs))
}

/// A coefficient of S meeting the bound with equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightWitness {
    pub n: u64,
    pub value: i64,
    pub val2: u32,
}

/// Everything the theorem verification observed for one d.
#[derive(Debug, Clone)]
pub struct CongruenceReport {
    pub d: u64,
    pub m: u32,
    pub epsilon: u32,
    pub bound: u32,
    pub coeff_bound: u64,
    /// Minimum nu_2 over nonzero a_n(S); None when every coefficient
    /// vanished (valuation infinity).
    pub min_observed_val: Option<u32>,
    pub tight_witnesses: Vec<TightWitness>,
    pub claim_violations: Vec<u64>,
    pub bound_violations: Vec<u64>,
    pub conductor_family_ok: bool,
}

impl CongruenceReport {
    pub fn claim_ok(&self) -> bool {
        self.claim_violations.is_empty()
    }

    pub fn passes(&self) -> bool {
        self.claim_ok() && self.bound_violations.is_empty() && self.conductor_family_ok
    }

    pub fn to_json(&self) -> serde_json::Value {
        let min = match self.min_observed_val {
            Some(v) => json!(v),
            None => json!("inf"),
        };
        json!({
            "d": self.d,
            "m": self.m,
            "epsilon": self.epsilon,
            "bound": self.bound,
            "B": self.coeff_bound,
            "min_observed_val": min,
            "tight_witnesses": self.tight_witnesses.iter().map(|w| {
                json!({"n": w.n, "value": w.value, "val2": w.val2})
            }).collect::<Vec<_>>(),
            "claim_ok": self.claim_ok(),
            "conductor_family_ok": self.conductor_family_ok,
        })
    }
}

/// Checks `nu_2(a_n(S)) >= m + epsilon` for every n <= coeff_bound along
/// with the dichotomy at every n, and the conductor equality across the
/// family. Zero coefficients count as valuation infinity.
pub fn verify_theorem(d: u64, coeff_bound: u64) -> Result<CongruenceReport> {
    if coeff_bound < 100 {
        return Err(Error::BadArgument(format!(
            "coefficient bound {coeff_bound} is too small to be informative (need >= 100)"
        )));
    }
    let tables = FamilyTables::build(d, coeff_bound)?;
    let m = tables.m();
    let bound = theorem_bound(m);
    let mut report = CongruenceReport {
        d,
        m,
        epsilon: epsilon_for(m),
        bound,
        coeff_bound,
        min_observed_val: None,
        tight_witnesses: Vec::new(),
        claim_violations: Vec::new(),
        bound_violations: Vec::new(),
        conductor_family_ok: conductor_family_check(d)?.equal,
    };
    for n in 1..=coeff_bound {
        let claim = claim_check(&tables, n)?;
        if !claim.ok {
            report.claim_violations.push(n);
        }
        if claim.sum == 0 {
            continue;
        }
        let val2 = claim.sum.unsigned_abs().trailing_zeros();
        if report.min_observed_val.is_none_or(|v| val2 < v) {
            report.min_observed_val = Some(val2);
        }
        if val2 < bound {
            report.bound_violations.push(n);
        } else if val2 == bound {
            report.tight_witnesses.push(TightWitness {
                n,
                value: claim.sum,
                val2,
            });
        }
    }
    Ok(report)
}

/// Reports for every odd squarefree d in [3, d_max] with omega(d) <= omega_cap.
pub fn theorem_sweep(
    d_max: u64,
    omega_cap: u32,
    coeff_bound: u64,
) -> Result<Vec<CongruenceReport>> {
    let ds: Vec<u64> = (3..=d_max)
        .step_by(2)
        .filter(|d| check_family_parameter(*d).map_or(false, |ps| ps.len() as u32 <= omega_cap))
        .collect();
    ds.par_iter()
        .map(|d| verify_theorem(*d, coeff_bound))
        .collect()
}

/// One parity check of the base form at a good prime power q^k, k odd:
/// a_{q^k}(f) is even when (d/q) = 1 and divisible by 4 when (d/q) = -1,
/// in the latter case because f and the form g of `y^2 = x^3 - x` split q
/// as a sum of two squares, `(a_q(f)/2)^2 + (a_q(g)/2)^2 = q` (q = 1 mod 4).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma52Outcome {
    pub d: u64,
    pub q: u64,
    pub k: u32,
    pub symbol: i32,
    pub coefficient: i128,
    pub congruence_ok: bool,
    /// (a_q(f)/2, a_q(g)/2) when the two-squares identity applies.
    pub two_squares: Option<(i64, i64)>,
    pub two_squares_ok: Option<bool>,
}

fn prime_power_coefficient(aq: i64, q: u64, k: u32) -> Result<i128> {
    // a_{q^(j+1)} = a_q a_{q^j} - q a_{q^(j-1)} at good q.
    let (mut prev, mut cur) = (1i128, aq as i128);
    for _ in 1..k {
        let next = cur
            .checked_mul(aq as i128)
            .and_then(|t| t.checked_sub((q as i128).checked_mul(prev)?))
            .ok_or_else(|| {
                Error::BadArgument(format!("a_({q}^{k}) exceeds the supported range"))
            })?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

pub fn lemma52_check(d: u64, q: u64, k: u32) -> Result<Lemma52Outcome> {
    check_family_parameter(d)?;
    if d < 3 {
        return Err(Error::BadArgument(format!(
            "d = {d} is below the smallest admissible member d = 3"
        )));
    }
    if k % 2 == 0 {
        return Err(Error::BadArgument(format!("k = {k} must be odd")));
    }
    if !is_prime_u64(q) {
        return Err(Error::NotPrime(q.to_string()));
    }
    if q == 2 || d % q == 0 {
        return Err(Error::BadArgument(format!(
            "q = {q} is a bad prime for y^2 = x^3 - {d}x"
        )));
    }
    let aq = a_q(&family_model(d, 1)?, &BigInt::from(q))?;
    let coefficient = prime_power_coefficient(aq, q, k)?;
    let symbol = kronecker(d as i64, q as i64);
    let congruence_ok = match symbol {
        1 => coefficient % 2 == 0,
        -1 => coefficient % 4 == 0,
        _ => unreachable!("q does not divide d"),
    };
    let (two_squares, two_squares_ok) = if symbol == -1 && q % 4 == 1 {
        let ag = a_q(&WeierstrassModel::new(0, 0, 0, -1, 0), &BigInt::from(q))?;
        let (hf, hg) = (aq / 2, ag / 2);
        (Some((hf, hg)), Some(hf * hf + hg * hg == q as i64))
    } else {
        (None, None)
    };
    Ok(Lemma52Outcome {
        d,
        q,
        k,
        symbol,
        coefficient,
        congruence_ok,
        two_squares,
        two_squares_ok,
    })
}

/// lemma52_check at every good prime q <= q_max and every (odd) k in ks.
pub fn lemma52_sweep(d: u64, q_max: u64, ks: &[u32]) -> Result<Vec<Lemma52Outcome>> {
    let mut out = Vec::new();
    for q in (3..=q_max).filter(|q| is_prime_u64(*q) && d % q != 0) {
        for k in ks {
            out.push(lemma52_check(d, q, *k)?);
        }
    }
    Ok(out)
}

/// Conductors of every family member, which the bound argument needs to
/// agree (the alternating sum S must live at a single level).
#[derive(Debug, Clone)]
pub struct FamilyConductor {
    pub d: u64,
    pub conductors: Vec<(u64, BigInt)>,
    pub equal: bool,
}

pub fn conductor_family_check(d: u64) -> Result<FamilyConductor> {
    if d == 0 {
        return Err(Error::BadArgument("d must be positive".into()));
    }
    let primes = check_family_parameter(d)?;
    let mut divisors = vec![1u64];
    for p in &primes {
        let with_p: Vec<u64> = divisors.iter().map(|v| v * p).collect();
        divisors.extend(with_p);
    }
    divisors.sort_unstable();
    let conductors = divisors
        .par_iter()
        .map(|div| Ok((*div, local::conductor(&family_model(d, *div)?)?.value)))
        .collect::<Result<Vec<(u64, BigInt)>>>()?;
    let equal = conductors.windows(2).all(|w| w[0].1 == w[1].1);
    Ok(FamilyConductor {
        d,
        conductors,
        equal,
    })
}

/// The strict gap for d = p: rank of y^2 = x^3 - px and y^2 = x^3 - p^3 x
/// is at most 2, strictly below the valuation bound 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorollaryOutcome {
    pub p: u64,
    pub rank_bound_d: u32,
    pub rank_bound_d3: u32,
    pub congruence_bound: u32,
    pub strict: bool,
}

pub fn corollary_check(p: u64) -> Result<CorollaryOutcome> {
    if p == 2 {
        return Err(Error::BadArgument("p = 2 is outside the family".into()));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let bp = BigInt::from(p);
    let rank_bound_d = crate::bounds::rank_upper_dx(&bp)?;
    let rank_bound_d3 = crate::bounds::rank_upper_dx(&(&bp * &bp * &bp))?;
    let congruence_bound = theorem_bound(1);
    Ok(CorollaryOutcome {
        p,
        rank_bound_d,
        rank_bound_d3,
        congruence_bound,
        strict: rank_bound_d < congruence_bound && rank_bound_d3 < congruence_bound,
    })
}
