//! Bundled curve tables (conductors 17, 49, 32, 128), the claimed 2-adic
//! signature table, the Setzer prime-conductor family p = u^2 + 64, and
//! cross-checks of everything recomputable.
//!
//! The bundle stores the published values verbatim. Verification recomputes
//! discriminants, conductors, torsion, and signatures and reports
//! mismatches; it never silently corrects the data. The modular degree m_E
//! and Manin constant c_E are trusted inputs with nothing local to check
//! them against.

use std::sync::OnceLock;

use num_bigint::BigInt;

use crate::arith::ExtNat;
use crate::curve::{Signature, WeierstrassModel};
use crate::{local, Error, Result};

/// One bundled table row.
#[derive(Debug, Clone)]
pub struct CurveRecord {
    pub label: String,
    pub model: WeierstrassModel,
    /// Modular degree m_E (trusted data).
    pub modular_degree: u64,
    /// Manin constant c_E (trusted data).
    pub manin_constant: u64,
    pub claimed_disc: ClaimedDisc,
}

/// A signed factored discriminant claim such as `-2^14` or `17`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimedDisc {
    pub text: String,
    pub value: BigInt,
}

impl std::str::FromStr for ClaimedDisc {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let text = s.trim().to_string();
        let rest = text.strip_prefix('-').unwrap_or(&text);
        let (base, exp) = match rest.split_once('^') {
            Some((b, e)) => (
                b.parse::<BigInt>()
                    .map_err(|_| format!("bad base in {text:?}"))?,
                e.parse::<u32>()
                    .map_err(|_| format!("bad exponent in {text:?}"))?,
            ),
            None => (
                rest.parse::<BigInt>()
                    .map_err(|_| format!("bad integer {text:?}"))?,
                1,
            ),
        };
        let mut value = base.pow(exp);
        if text.starts_with('-') {
            value = -value;
        }
        Ok(ClaimedDisc { text, value })
    }
}

static CURVES: OnceLock<std::result::Result<Vec<CurveRecord>, String>> = OnceLock::new();

/// The table rows, from the built-in bundle or the file named by the
/// WATKINS_DATA environment variable (read once per process).
pub fn bundled_curves() -> Result<&'static [CurveRecord]> {
    match CURVES.get_or_init(load_curves) {
        Ok(v) => Ok(v),
        Err(e) => Err(Error::BadData(e.clone())),
    }
}

pub fn curve_by_label(label: &str) -> Result<&'static CurveRecord> {
    bundled_curves()?
        .iter()
        .find(|r| r.label == label)
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

/// Numeric conductor prefix of an LMFDB-style label ("128.b2" -> 128).
pub fn label_conductor(label: &str) -> Option<BigInt> {
    label.split('.').next()?.parse().ok()
}

fn load_curves() -> std::result::Result<Vec<CurveRecord>, String> {
    let owned;
    let text = match std::env::var("WATKINS_DATA") {
        Ok(path) => {
            owned = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read WATKINS_DATA file {path}: {e}"))?;
            owned.as_str()
        }
        Err(_) => include_str!("data/curves.csv"),
    };
    parse_curves(text)
}

fn parse_curves(text: &str) -> std::result::Result<Vec<CurveRecord>, String> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "label,a1,a2,a3,a4,a6,mE,cE,disc" => {}
        other => return Err(format!("bad header line: {:?}", other.map(|(_, h)| h))),
    }
    let mut records = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(format!(
                "line {}: expected 9 fields, got {}",
                i + 1,
                fields.len()
            ));
        }
        let label = fields[0].trim().to_string();
        if label.is_empty() || records.iter().any(|r: &CurveRecord| r.label == label) {
            return Err(format!("line {}: empty or duplicate label", i + 1));
        }
        let model: WeierstrassModel = fields[1..6]
            .join(",")
            .parse()
            .map_err(|e| format!("line {}: {e}", i + 1))?;
        if model.is_singular() {
            return Err(format!("line {}: singular model", i + 1));
        }
        let modular_degree: u64 = fields[6]
            .trim()
            .parse()
            .map_err(|_| format!("line {}: bad mE", i + 1))?;
        let manin_constant: u64 = fields[7]
            .trim()
            .parse()
            .map_err(|_| format!("line {}: bad cE", i + 1))?;
        if modular_degree == 0 || manin_constant == 0 {
            return Err(format!("line {}: mE and cE must be positive", i + 1));
        }
        let claimed_disc: ClaimedDisc = fields[8]
            .parse()
            .map_err(|e| format!("line {}: {e}", i + 1))?;
        records.push(CurveRecord {
            label,
            model,
            modular_degree,
            manin_constant,
            claimed_disc,
        });
    }
    if records.is_empty() {
        return Err("no curve records".into());
    }
    Ok(records)
}

/// A claimed signature-table row: (c4, c6) of the minimal model and its
/// 2-adic signature, stored verbatim.
#[derive(Debug, Clone, Copy)]
pub struct ClaimedSignature {
    pub label: &'static str,
    pub c4: i64,
    pub c6: i64,
    pub sig: Signature,
}

const fn sig(c4: ExtNat, c6: ExtNat, disc: ExtNat) -> Signature {
    Signature { c4, c6, disc }
}
const F4: ExtNat = ExtNat::Fin(4);
const F5: ExtNat = ExtNat::Fin(5);
const F6: ExtNat = ExtNat::Fin(6);
const F7: ExtNat = ExtNat::Fin(7);
const F8: ExtNat = ExtNat::Fin(8);
const F9: ExtNat = ExtNat::Fin(9);

/// The published table of minimal-model (c4, c6) and 2-adic signatures for
/// the conductor-32 and conductor-128 curves, verbatim.
pub const CLAIMED_SIGNATURES: [ClaimedSignature; 12] = [
    ClaimedSignature {
        label: "32.a1",
        c4: 528,
        c6: 12096,
        sig: sig(F4, F6, F9),
    },
    ClaimedSignature {
        label: "32.a2",
        c4: 528,
        c6: -12096,
        sig: sig(F4, F6, F9),
    },
    ClaimedSignature {
        label: "32.a3",
        c4: 48,
        c6: 0,
        sig: sig(F4, ExtNat::Inf, F6),
    },
    ClaimedSignature {
        label: "32.a4",
        c4: -192,
        c6: 0,
        sig: sig(F6, ExtNat::Inf, ExtNat::Fin(12)),
    },
    ClaimedSignature {
        label: "128.a1",
        c4: 448,
        c6: -8704,
        sig: sig(F6, F9, ExtNat::Fin(13)),
    },
    ClaimedSignature {
        label: "128.a2",
        c4: -32,
        c6: -640,
        sig: sig(F5, F7, F8),
    },
    ClaimedSignature {
        label: "128.b1",
        c4: 112,
        c6: 1088,
        sig: sig(F4, F6, F7),
    },
    ClaimedSignature {
        label: "128.b2",
        c4: -128,
        c6: 5120,
        sig: sig(F7, ExtNat::Fin(10), ExtNat::Fin(14)),
    },
    ClaimedSignature {
        label: "128.c1",
        c4: 448,
        c6: 3392,
        sig: sig(F6, F6, ExtNat::Fin(13)),
    },
    ClaimedSignature {
        label: "128.c2",
        c4: -32,
        c6: 1088,
        sig: sig(F5, F6, F8),
    },
    ClaimedSignature {
        label: "128.d1",
        c4: 112,
        c6: -2368,
        sig: sig(F4, F6, F7),
    },
    ClaimedSignature {
        label: "128.d2",
        c4: -128,
        c6: -3520,
        sig: sig(F7, F6, ExtNat::Fin(14)),
    },
];

/// Result of rechecking one bundled row against recomputation.
#[derive(Debug, Clone)]
pub struct TableCheck {
    pub label: String,
    pub computed_disc: BigInt,
    pub claimed_disc: ClaimedDisc,
    pub disc_matches: bool,
    pub computed_conductor: BigInt,
    pub label_conductor: Option<BigInt>,
    pub conductor_matches: bool,
    pub has_two_torsion: bool,
    pub model_is_minimal: bool,
}

pub fn verify_record(record: &CurveRecord) -> Result<TableCheck> {
    let (minimal, _) = record.model.minimal_model()?;
    let computed_disc = minimal.invariants().disc;
    let cond = local::conductor(&record.model)?;
    let label_conductor = label_conductor(&record.label);
    let conductor_matches = label_conductor.as_ref() == Some(&cond.value);
    Ok(TableCheck {
        label: record.label.clone(),
        disc_matches: computed_disc == record.claimed_disc.value,
        computed_disc,
        claimed_disc: record.claimed_disc.clone(),
        computed_conductor: cond.value,
        label_conductor,
        conductor_matches,
        has_two_torsion: record.model.two_torsion_order()? > 1,
        model_is_minimal: minimal == record.model,
    })
}

/// Rechecks every bundled row. Mismatches appear in the report; the caller
/// decides what is fatal.
pub fn verify_tables() -> Result<Vec<TableCheck>> {
    bundled_curves()?.iter().map(verify_record).collect()
}

/// Result of rechecking one claimed-signature row.
#[derive(Debug, Clone)]
pub struct SignatureCheck {
    pub label: &'static str,
    pub claimed_c4: i64,
    pub claimed_c6: i64,
    pub computed_c4: BigInt,
    pub computed_c6: BigInt,
    pub c4_matches: bool,
    pub c6_matches: bool,
    pub claimed_sig: Signature,
    pub computed_sig: Signature,
    pub sig_matches: bool,
}

pub fn verify_signatures() -> Result<Vec<SignatureCheck>> {
    CLAIMED_SIGNATURES
        .iter()
        .map(|row| {
            let record = curve_by_label(row.label)?;
            let (minimal, _) = record.model.minimal_model()?;
            let inv = minimal.invariants();
            let computed_sig = record.model.signature()?;
            Ok(SignatureCheck {
                label: row.label,
                claimed_c4: row.c4,
                claimed_c6: row.c6,
                c4_matches: inv.c4 == BigInt::from(row.c4),
                c6_matches: inv.c6 == BigInt::from(row.c6),
                computed_c4: inv.c4,
                computed_c6: inv.c6,
                claimed_sig: row.sig,
                computed_sig,
                sig_matches: computed_sig == row.sig,
            })
        })
        .collect()
}

/// The unique u with p = u^2 + 64 and u = 1 (mod 4), if p is so
/// representable.
pub fn setzer_u(p: i64) -> Option<i64> {
    if p <= 64 {
        return None;
    }
    let target = (p - 64) as u64;
    let s = target.isqrt() as i64;
    if (s as u64) * (s as u64) != target {
        return None;
    }
    let u = if s.rem_euclid(4) == 1 { s } else { -s };
    // Even s admits no representative that is 1 mod 4.
    (u.rem_euclid(4) == 1).then_some(u)
}

/// The two prime-conductor curves with rational 2-torsion, discriminants p
/// and -p^2. The second is the X_0(p)-optimal one.
pub fn setzer_pair(p: i64) -> Result<(WeierstrassModel, WeierstrassModel)> {
    if p == 17 {
        return Err(Error::BadArgument(
            "p = 17 is the four-curve exceptional case; use the bundled 17.a records".into(),
        ));
    }
    if !crate::arith::is_prime_u64(p.max(0) as u64) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let u = setzer_u(p)
        .ok_or_else(|| Error::BadArgument(format!("{p} is not of the form u^2 + 64")))?;
    debug_assert_eq!(u.rem_euclid(4), 1);
    let a2 = (u - 1) / 4;
    Ok((
        WeierstrassModel::new(1, a2, 0, -1, 0),
        WeierstrassModel::new(1, a2, 0, 4, u),
    ))
}

/// All primes p = u^2 + 64 < limit, ascending.
pub fn setzer_primes(limit: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut s: i64 = 1;
    while s * s + 64 < limit {
        let p = s * s + 64;
        if crate::arith::is_prime_u64(p as u64) {
            out.push(p);
        }
        s += 2;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_loads_and_is_sane() {
        let curves = bundled_curves().unwrap();
        assert_eq!(curves.len(), 20);
        for r in curves {
            assert!(!r.model.is_singular(), "{}", r.label);
            assert!(r.model.two_torsion_order().unwrap() > 1, "{}", r.label);
            let (minimal, _) = r.model.minimal_model().unwrap();
            assert_eq!(minimal, r.model, "{} should be stored minimal", r.label);
        }
    }

    #[test]
    fn lookup_matches_bundle() {
        let r = curve_by_label("32.a3").unwrap();
        assert_eq!(r.model, WeierstrassModel::new(0, 0, 0, -1, 0));
        assert_eq!((r.modular_degree, r.manin_constant), (2, 2));
        assert_eq!(r.claimed_disc.text, "2^6");

        let r = curve_by_label("49.a1").unwrap();
        assert_eq!(r.model, WeierstrassModel::new(1, -1, 0, -1822, 30393));
        assert_eq!((r.modular_degree, r.manin_constant), (14, 1));

        let r = curve_by_label("128.b1").unwrap();
        assert_eq!(r.model, WeierstrassModel::new(0, 1, 0, -2, -2));
        assert_eq!((r.modular_degree, r.manin_constant), (16, 2));

        assert!(matches!(
            curve_by_label("11.a1"),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn claimed_disc_parsing() {
        let d: ClaimedDisc = "-2^14".parse().unwrap();
        assert_eq!(d.value, BigInt::from(-16384));
        let d: ClaimedDisc = "17".parse().unwrap();
        assert_eq!(d.value, BigInt::from(17));
        let d: ClaimedDisc = "7^9".parse().unwrap();
        assert_eq!(d.value, BigInt::from(40353607));
        assert!("7^".parse::<ClaimedDisc>().is_err());
        assert!("".parse::<ClaimedDisc>().is_err());
    }

    #[test]
    fn table_verification_reports_known_discrepancies() {
        let checks = verify_tables().unwrap();
        assert_eq!(checks.len(), 20);
        let disc_mismatches: Vec<&str> = checks
            .iter()
            .filter(|c| !c.disc_matches)
            .map(|c| c.label.as_str())
            .collect();
        // The published Table 3 lists 7^9 for 49.a2 (true value -7^9) and
        // 7^2 for 49.a4 (true value -7^3). Everything else checks out.
        assert_eq!(disc_mismatches, ["49.a2", "49.a4"]);
        for c in &checks {
            assert!(c.conductor_matches, "{}", c.label);
            assert!(c.has_two_torsion, "{}", c.label);
            assert!(c.model_is_minimal, "{}", c.label);
        }
        let c = checks.iter().find(|c| c.label == "49.a4").unwrap();
        assert_eq!(c.computed_disc, BigInt::from(-343));
    }

    #[test]
    fn signature_verification_reports_known_discrepancies() {
        let checks = verify_signatures().unwrap();
        assert_eq!(checks.len(), 12);
        for c in &checks {
            assert!(c.c4_matches, "{}: c4", c.label);
        }
        let c6_mismatches: Vec<&str> = checks
            .iter()
            .filter(|c| !c.c6_matches)
            .map(|c| c.label)
            .collect();
        assert_eq!(c6_mismatches, ["128.c1", "128.c2", "128.d1", "128.d2"]);
        let sig_mismatches: Vec<&str> = checks
            .iter()
            .filter(|c| !c.sig_matches)
            .map(|c| c.label)
            .collect();
        // 128.d1's published c6 is wrong but has the correct 2-adic
        // valuation, so its signature row still matches.
        assert_eq!(sig_mismatches, ["128.c1", "128.c2", "128.d2"]);
        let c = checks.iter().find(|c| c.label == "128.c1").unwrap();
        assert_eq!(c.computed_c6, BigInt::from(8704));
        assert_eq!(c.computed_sig.to_string(), "(6, 9, 13)");
    }

    #[test]
    fn setzer_examples() {
        assert_eq!(setzer_u(73), Some(-3));
        assert_eq!(setzer_u(89), Some(5));
        assert_eq!(setzer_u(113), Some(-7));
        assert_eq!(setzer_u(11), None);
        assert_eq!(setzer_u(100), None); // 100 = 6^2 + 64 but 6 is even
        let (e1, e2) = setzer_pair(89).unwrap();
        assert_eq!(e1, WeierstrassModel::new(1, 1, 0, -1, 0));
        assert_eq!(e2, WeierstrassModel::new(1, 1, 0, 4, 5));
        assert_eq!(e1.invariants().disc, BigInt::from(89));
        assert_eq!(e2.invariants().disc, BigInt::from(-7921));
        let (e1, _) = setzer_pair(73).unwrap();
        assert_eq!(e1, WeierstrassModel::new(1, -1, 0, -1, 0));
        assert_eq!(e1.invariants().disc, BigInt::from(73));
        let (e1, e2) = setzer_pair(113).unwrap();
        assert_eq!(e1, WeierstrassModel::new(1, -2, 0, -1, 0));
        assert_eq!(e1.invariants().disc, BigInt::from(113));
        assert_eq!(e2.invariants().disc, BigInt::from(-113 * 113));
        assert!(setzer_pair(17).is_err());
        assert!(setzer_pair(11).is_err());
        assert!(setzer_pair(90).is_err());
    }

    #[test]
    fn setzer_prime_list() {
        let primes = setzer_primes(10_000);
        assert_eq!(
            primes,
            [
                73, 89, 113, 233, 353, 593, 1153, 1289, 1433, 1913, 2089, 2273, 3089, 3313, 4289,
                5393, 5689, 8713, 9473
            ]
        );
        for &p in &primes {
            let (e1, e2) = setzer_pair(p).unwrap();
            assert!(e1.two_torsion_order().unwrap() > 1);
            assert!(e2.two_torsion_order().unwrap() > 1);
        }
        let cond = local::conductor(&setzer_pair(73).unwrap().0).unwrap();
        assert_eq!(cond.value, BigInt::from(73));
    }
}
