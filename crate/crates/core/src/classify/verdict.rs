//! The dichotomy verdict for finite EO signature sets and its extensions to
//! `EO≥`/`EO≤` and single-weighted sets.

use rayon::prelude::*;
use serde::Serialize;

use super::eoclass::membership_eo_class;
use super::pairing::Pairing;
use super::rebalance::{is_rebalancing, RebalanceReport};
use super::triple::{triple_class, TripleClass, TripleWitness};
use super::{Class, Direction, Refutation};
use crate::error::{Error, Result};
use crate::signature::{is_heavy, is_light, Signature};
use crate::transforms::{pad_to_eo, restrict_eo, weight_profile, Weight};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassFailure {
    pub signature: String,
    pub pairing: Pairing,
    pub refutation: Refutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum HardReason {
    Exists3Mid {
        signature: String,
        witness: TripleWitness,
    },
    UpAndDown {
        up_signature: String,
        up_witness: TripleWitness,
        down_signature: String,
        down_witness: TripleWitness,
    },
    NoCommonClass {
        not_a: ClassFailure,
        not_p: ClassFailure,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome")]
pub enum Outcome {
    SharpPHard {
        reason: HardReason,
    },
    FPNP {
        classes: Vec<Class>,
        directions: Vec<Direction>,
    },
    FP {
        classes: Vec<Class>,
        directions: Vec<Direction>,
        rebalancing: Vec<u8>,
    },
}

impl Outcome {
    pub fn is_hard(&self) -> bool {
        matches!(self, Outcome::SharpPHard { .. })
    }

    pub fn is_fp(&self) -> bool {
        matches!(self, Outcome::FP { .. })
    }

    pub fn classes(&self) -> &[Class] {
        match self {
            Outcome::SharpPHard { .. } => &[],
            Outcome::FPNP { classes, .. } | Outcome::FP { classes, .. } => classes,
        }
    }

    pub fn directions(&self) -> &[Direction] {
        match self {
            Outcome::SharpPHard { .. } => &[],
            Outcome::FPNP { directions, .. } | Outcome::FP { directions, .. } => directions,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignatureSummary {
    pub name: String,
    pub arity: usize,
    pub triple: TripleClass,
    pub eo_a: bool,
    pub eo_p: bool,
    pub rebalancing: [RebalanceReport; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Set when no signature has a heavy or light triple, so both
    /// directions apply and the choice between them is not determined.
    pub direction_ambiguous: bool,
    pub signatures: Vec<SignatureSummary>,
    /// The EO set that was classified (after any transform).
    pub classified: Vec<Signature>,
    pub notes: Vec<String>,
}

fn label(f: &Signature, k: usize) -> String {
    f.name().map(str::to_string).unwrap_or_else(|| format!("f{}", k + 1))
}

struct Analysis {
    name: String,
    triple: TripleClass,
    a: super::eoclass::EoClassReport,
    p: super::eoclass::EoClassReport,
    reb: [RebalanceReport; 2],
}

fn analyse(f: &Signature, name: String) -> Result<Analysis> {
    Ok(Analysis {
        triple: triple_class(f)?,
        a: membership_eo_class(f, Class::A)?,
        p: membership_eo_class(f, Class::P)?,
        reb: [is_rebalancing(f, 0)?, is_rebalancing(f, 1)?],
        name,
    })
}

fn trivial(notes: Vec<String>) -> Verdict {
    Verdict {
        outcome: Outcome::FP {
            classes: vec![Class::A, Class::P],
            directions: vec![Direction::Up, Direction::Down],
            rebalancing: vec![0, 1],
        },
        direction_ambiguous: true,
        signatures: Vec::new(),
        classified: Vec::new(),
        notes,
    }
}

pub fn dichotomy_verdict(set: &[Signature]) -> Result<Verdict> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    for f in set {
        f.require_eo()?;
    }
    let mut notes = Vec::new();
    let named: Vec<(String, &Signature)> = set
        .iter()
        .enumerate()
        .map(|(k, f)| (label(f, k), f))
        .filter(|(n, f)| {
            if f.is_zero() {
                notes.push(format!("{n} is identically zero and was dropped"));
                false
            } else {
                true
            }
        })
        .collect();
    if named.is_empty() {
        notes.push("every signature vanishes; the partition function is always 0".into());
        return Ok(trivial(notes));
    }
    let analyses: Result<Vec<Analysis>> = named
        .par_iter()
        .map(|(n, f)| analyse(f, n.clone()))
        .collect();
    let analyses = analyses?;

    let summaries = analyses
        .iter()
        .zip(&named)
        .map(|(a, (_, f))| SignatureSummary {
            name: a.name.clone(),
            arity: f.arity(),
            triple: a.triple.clone(),
            eo_a: a.a.member,
            eo_p: a.p.member,
            rebalancing: a.reb.clone(),
        })
        .collect();
    let classified: Vec<Signature> = named.iter().map(|(_, f)| (*f).clone()).collect();

    let outcome = decide(&analyses);
    let direction_ambiguous = !outcome.is_hard()
        && analyses
            .iter()
            .all(|a| a.triple.exists3up.is_none() && a.triple.exists3down.is_none());
    if direction_ambiguous {
        notes.push("no signature has a heavy or light triple; both directions reported".into());
    }
    Ok(Verdict {
        outcome,
        direction_ambiguous,
        signatures: summaries,
        classified,
        notes,
    })
}

fn decide(analyses: &[Analysis]) -> Outcome {
    if let Some(a) = analyses.iter().find(|a| a.triple.exists3mid.is_some()) {
        return Outcome::SharpPHard {
            reason: HardReason::Exists3Mid {
                signature: a.name.clone(),
                witness: a.triple.exists3mid.clone().unwrap(),
            },
        };
    }
    let up = analyses.iter().find(|a| a.triple.exists3up.is_some());
    let down = analyses.iter().find(|a| a.triple.exists3down.is_some());
    if let (Some(u), Some(d)) = (up, down) {
        return Outcome::SharpPHard {
            reason: HardReason::UpAndDown {
                up_signature: u.name.clone(),
                up_witness: u.triple.exists3up.clone().unwrap(),
                down_signature: d.name.clone(),
                down_witness: d.triple.exists3down.clone().unwrap(),
            },
        };
    }
    let mut classes = Vec::new();
    if analyses.iter().all(|a| a.a.member) {
        classes.push(Class::A);
    }
    if analyses.iter().all(|a| a.p.member) {
        classes.push(Class::P);
    }
    if classes.is_empty() {
        let fail = |get: &dyn Fn(&Analysis) -> &super::eoclass::EoClassReport| {
            let a = analyses.iter().find(|a| !get(a).member).unwrap();
            let (pairing, refutation) = get(a).failing.clone().unwrap();
            ClassFailure {
                signature: a.name.clone(),
                pairing,
                refutation,
            }
        };
        return Outcome::SharpPHard {
            reason: HardReason::NoCommonClass {
                not_a: fail(&|a| &a.a),
                not_p: fail(&|a| &a.p),
            },
        };
    }
    let mut directions = Vec::new();
    if down.is_none() {
        directions.push(Direction::Up);
    }
    if up.is_none() {
        directions.push(Direction::Down);
    }
    let rebalancing: Vec<u8> = (0..2u8)
        .filter(|&b| analyses.iter().all(|a| a.reb[b as usize].holds))
        .collect();
    if rebalancing.is_empty() {
        Outcome::FPNP {
            classes,
            directions,
        }
    } else {
        Outcome::FP {
            classes,
            directions,
            rebalancing,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExtendedMode {
    Eo,
    Upside,
    Downside,
    SingleWeighted,
}

impl std::str::FromStr for ExtendedMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eo" => Ok(ExtendedMode::Eo),
            "upside" => Ok(ExtendedMode::Upside),
            "downside" => Ok(ExtendedMode::Downside),
            "single-weighted" | "single_weighted" => Ok(ExtendedMode::SingleWeighted),
            _ => Err(Error::parse(0, format!("unknown mode {s:?}"))),
        }
    }
}

fn restricted(set: &[Signature], notes: &mut Vec<String>) -> Vec<Signature> {
    set.iter()
        .enumerate()
        .filter_map(|(k, f)| {
            let r = restrict_eo(f).with_name(label(f, k));
            if r.is_zero() {
                notes.push(format!("{} vanishes on balanced strings and was dropped", label(f, k)));
                None
            } else {
                Some(r)
            }
        })
        .collect()
}

fn finish(set: Vec<Signature>, mut notes: Vec<String>) -> Result<Verdict> {
    if set.is_empty() {
        notes.push("nothing left to classify; the partition function is always 0".into());
        return Ok(trivial(notes));
    }
    let mut v = dichotomy_verdict(&set)?;
    notes.append(&mut v.notes);
    v.notes = notes;
    Ok(v)
}

pub fn verdict_extended(set: &[Signature], mode: ExtendedMode) -> Result<Verdict> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut notes = Vec::new();
    match mode {
        ExtendedMode::Eo => dichotomy_verdict(set),
        ExtendedMode::Upside | ExtendedMode::Downside => {
            for (k, f) in set.iter().enumerate() {
                let bad = f.support().into_iter().find(|&a| match mode {
                    ExtendedMode::Upside => is_light(a, f.arity()),
                    _ => is_heavy(a, f.arity()),
                });
                if let Some(a) = bad {
                    return Err(Error::ModeViolation(format!(
                        "{}: string {} has more {} than {}",
                        label(f, k),
                        f.render(a),
                        if mode == ExtendedMode::Upside { "zeros" } else { "ones" },
                        if mode == ExtendedMode::Upside { "ones" } else { "zeros" },
                    )));
                }
            }
            notes.push("classified the EO restriction of the set".into());
            let r = restricted(set, &mut notes);
            finish(r, notes)
        }
        ExtendedMode::SingleWeighted => {
            let mut live = Vec::new();
            for (k, f) in set.iter().enumerate() {
                match weight_profile(f).weight {
                    Weight::Mixed => {
                        return Err(Error::ModeViolation(format!(
                            "{} takes nonzero values at several Hamming weights",
                            label(f, k)
                        )))
                    }
                    Weight::Empty => notes.push(format!("{} is identically zero and was dropped", label(f, k))),
                    Weight::Single(_) => live.push(f.clone().with_name(label(f, k))),
                }
            }
            if live.iter().all(|f| f.is_eo_ge()) || live.iter().all(|f| f.is_eo_le()) {
                notes.push("every signature lies on one side; classified the EO restriction".into());
                let r = restricted(&live, &mut notes);
                finish(r, notes)
            } else {
                notes.push("signatures on both sides; classified the padded set together with the pin".into());
                let mut padded = live
                    .iter()
                    .map(|f| {
                        let n = f.name().unwrap_or("f").to_string();
                        pad_to_eo(f).map(|p| p.with_name(format!("{n}->EO")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                padded.push(Signature::delta());
                finish(padded, notes)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ExactValue;

    fn v(n: i64) -> ExactValue {
        ExactValue::from_int(n)
    }

    fn m112() -> Signature {
        Signature::from_strings(4, &[("1100", v(1)), ("1010", v(1)), ("1001", v(2))]).unwrap()
    }

    #[test]
    fn examples() {
        let vd = dichotomy_verdict(&[m112()]).unwrap();
        assert!(!vd.outcome.is_hard());
        assert_eq!(vd.outcome.classes(), &[Class::P]);
        assert_eq!(vd.outcome.directions(), &[Direction::Up]);

        let h = Signature::from_strings(4, &[("0011", v(1)), ("0101", v(1)), ("1010", v(1))]).unwrap();
        match dichotomy_verdict(&[h]).unwrap().outcome {
            Outcome::SharpPHard {
                reason: HardReason::Exists3Mid { witness, .. },
            } => assert_eq!(witness.delta, "1100"),
            o => panic!("{o:?}"),
        }

        let d = dichotomy_verdict(&[Signature::diseq(4).unwrap()]).unwrap();
        match d.outcome {
            Outcome::FP {
                classes,
                directions,
                rebalancing,
            } => {
                assert!(classes.contains(&Class::P));
                assert_eq!(directions, vec![Direction::Up, Direction::Down]);
                assert!(rebalancing.contains(&0));
            }
            o => panic!("{o:?}"),
        }
        assert!(d.direction_ambiguous);
        assert_eq!(dichotomy_verdict(&[]), Err(Error::EmptySet));
    }

    #[test]
    fn up_and_down_is_hard() {
        let up = m112();
        let down = up.dual();
        assert!(dichotomy_verdict(&[up, down]).unwrap().outcome.is_hard());
    }

    #[test]
    fn extended_examples() {
        let all = Signature::symmetric(&[v(1), v(1), v(1)]).unwrap();
        assert!(matches!(
            verdict_extended(&[all], ExtendedMode::Upside),
            Err(Error::ModeViolation(_))
        ));
        let f = Signature::from_strings(2, &[("01", v(1)), ("10", v(1)), ("11", v(1))]).unwrap();
        let vd = verdict_extended(&[f], ExtendedMode::Upside).unwrap();
        assert!(vd.outcome.is_fp());
        assert_eq!(vd.classified, vec![Signature::neq2()]);

        // Δ₁ alone lies in EO≥, so the restriction branch applies and the set vanishes
        let vd = verdict_extended(&[Signature::delta1()], ExtendedMode::SingleWeighted).unwrap();
        assert!(vd.outcome.is_fp());
        // both sides present: padding branch
        let vd = verdict_extended(
            &[Signature::delta1(), Signature::delta0()],
            ExtendedMode::SingleWeighted,
        )
        .unwrap();
        assert!(vd.outcome.is_fp());
        assert!(vd.classified.contains(&Signature::delta()));
        assert!(vd.classified.iter().all(|s| s.is_eo()));
    }
}
