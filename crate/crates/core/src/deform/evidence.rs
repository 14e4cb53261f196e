use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::RingVerdict;
use crate::coeff::{LocalAlgebra, RMatrix, RingSurjection};
use crate::homalg::{ext1_dim, stable_end_dim};
use crate::repbuild::Representation;

use super::linear::{extend_search, first_order_classes, ExtendOutcome, Obstruction};
use super::rrep::{verify_lift, Lift, LiftVerdict, RRepresentation};
use super::serial::LiftRecord;
use super::trivial::is_trivial_lift;
use super::DeformError;

pub const DEFAULT_MAX_LEVEL: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LevelStatus {
    LiftExists,
    NoLiftExtending,
    NotChecked,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub ring: String,
    pub status: LevelStatus,
}

/// A failed extension together with the lift that could not be extended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionRecord {
    pub lift: LiftRecord,
    pub target_ring: String,
    pub obstruction: Obstruction,
}

/// Truncation-level evidence about the universal deformation ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UdrEvidence {
    pub module: String,
    /// `dim Ext¹(V,V)` via syzygies.
    pub r: usize,
    /// Tangent dimension from the linearized relations.
    pub r_linearized: usize,
    pub levels: Vec<LevelRecord>,
    pub verdict: RingVerdict,
    pub summary: String,
    /// The highest lift found.
    pub witness: Option<LiftRecord>,
    pub obstructed: Option<ObstructionRecord>,
}

fn ring(spec: &str, v: &Representation) -> Result<Arc<LocalAlgebra>, DeformError> {
    Ok(LocalAlgebra::from_spec(spec, v.field())?)
}

/// `V` with arrows `A_a + Σ_i t_i X_{i,a}` over `ring`.
fn first_order_lift(
    v: &Representation,
    v_spec: &str,
    ring_spec: &str,
    ring: &Arc<LocalAlgebra>,
    dirs: &[Vec<crate::coeff::Matrix>],
) -> Lift {
    let pres = v.presentation();
    let arrows = (0..pres.num_arrows())
        .map(|a| {
            let mut m = RMatrix::from_field_matrix(ring, v.arrow(a));
            for (i, x) in dirs.iter().enumerate() {
                m = m.add(&RMatrix::from_field_matrix(ring, &x[a]).scale(&ring.var(i)));
            }
            m
        })
        .collect();
    let mut l = Lift::trivial(ring_spec, ring, v_spec, v);
    l.rep = RRepresentation::new(pres, ring, v.dims().to_vec(), arrows);
    l
}

/// Evidence ladder for `V` (which must have stable endomorphism ring `k`):
/// `r = 0` gives `k`; for `r = 1` a nontrivial first-order lift is extended
/// through `k[t]/(t^max_level)`; for `r = 2` a tangent basis is sought whose
/// lift extends to `k[t1,t2]/(t1²−t2², t1t2)` but not to the next quotient.
pub fn udr_evidence(v: &Representation, v_spec: &str, max_level: u32) -> Result<UdrEvidence, DeformError> {
    let s = stable_end_dim(v)?;
    if s != 1 {
        return Err(DeformError::StableEndTooLarge(s));
    }
    let r = ext1_dim(v)?;
    let fo = first_order_classes(v);
    if fo.r != r {
        return Err(DeformError::Inconclusive(format!(
            "tangent dimensions disagree: {r} via syzygy, {} linearized",
            fo.r
        )));
    }
    let mut ev = UdrEvidence {
        module: v_spec.to_string(),
        r,
        r_linearized: fo.r,
        levels: Vec::new(),
        verdict: RingVerdict::K,
        summary: String::new(),
        witness: None,
        obstructed: None,
    };
    match r {
        0 => {
            ev.summary = "Ext^1 vanishes".into();
            Ok(ev)
        }
        1 => ladder_one(v, v_spec, max_level, &fo.classes[0], ev),
        2 => ladder_two(v, v_spec, &fo.classes, ev),
        _ => Err(DeformError::Inconclusive(format!(
            "tangent dimension {r} has no evidence ladder"
        ))),
    }
}

fn ladder_one(
    v: &Representation,
    v_spec: &str,
    max_level: u32,
    x: &[crate::coeff::Matrix],
    mut ev: UdrEvidence,
) -> Result<UdrEvidence, DeformError> {
    if max_level < 3 {
        return Err(DeformError::Inconclusive(
            "max level below 3 cannot separate the candidates".into(),
        ));
    }
    let spec2 = "k[t]/(t^2)".to_string();
    let r2 = ring(&spec2, v)?;
    let mut cur = first_order_lift(v, v_spec, &spec2, &r2, &[x.to_vec()]);
    debug_assert_eq!(verify_lift(&cur), LiftVerdict::Valid);
    if is_trivial_lift(&cur)? {
        return Err(DeformError::Inconclusive(
            "first-order lift from a nonzero class is trivial".into(),
        ));
    }
    ev.levels.push(LevelRecord {
        ring: spec2,
        status: LevelStatus::LiftExists,
    });
    for n in 2..max_level {
        let spec = format!("k[t]/(t^{})", n + 1);
        let upper = ring(&spec, v)?;
        let proj = RingSurjection::natural(&upper, cur.ring())?;
        match extend_search(&cur, &spec, &proj)? {
            ExtendOutcome::Extended(next) => {
                ev.levels.push(LevelRecord {
                    ring: spec,
                    status: LevelStatus::LiftExists,
                });
                cur = next;
            }
            ExtendOutcome::NoExtension(o) => {
                ev.levels.push(LevelRecord {
                    ring: spec.clone(),
                    status: LevelStatus::NoLiftExtending,
                });
                for m in n + 1..max_level {
                    ev.levels.push(LevelRecord {
                        ring: format!("k[t]/(t^{})", m + 1),
                        status: LevelStatus::NotChecked,
                    });
                }
                ev.witness = Some(LiftRecord::from_lift(&cur));
                ev.obstructed = Some(ObstructionRecord {
                    lift: LiftRecord::from_lift(&cur),
                    target_ring: spec,
                    obstruction: o,
                });
                if n == 2 {
                    ev.verdict = RingVerdict::DualNumbers;
                    ev.summary = "nontrivial lift over k[t]/(t^2) does not extend to k[t]/(t^3)".into();
                    return Ok(ev);
                }
                return Err(DeformError::Inconclusive(format!(
                    "ladder obstructed at k[t]/(t^{}) after extending past level 3",
                    n + 1
                )));
            }
        }
    }
    ev.verdict = RingVerdict::PowerSeries;
    ev.summary = format!("consistent with k[[t]]: lifts exist through k[t]/(t^{max_level})");
    ev.witness = Some(LiftRecord::from_lift(&cur));
    Ok(ev)
}

const TANGENT_RING: &str = "k[t1,t2]/(t1^2,t1t2,t2^2)";
const J_RING: &str = "k[t1,t2]/(t1^2-t2^2,t1t2)";
const J_PRIME_RING: &str = "k[t1,t2]/((t1,t2)*(t1^2-t2^2,t1t2))";

fn ladder_two(
    v: &Representation,
    v_spec: &str,
    classes: &[Vec<crate::coeff::Matrix>],
    mut ev: UdrEvidence,
) -> Result<UdrEvidence, DeformError> {
    let f = v.field();
    let tangent = ring(TANGENT_RING, v)?;
    let j = ring(J_RING, v)?;
    let jp = ring(J_PRIME_RING, v)?;
    let to_tangent = RingSurjection::natural(&j, &tangent)?;
    let to_j = RingSurjection::natural(&jp, &j)?;
    let p = f.p();
    let combine = |a: u32, b: u32| -> Vec<crate::coeff::Matrix> {
        classes[0]
            .iter()
            .zip(&classes[1])
            .map(|(x, y)| x.scale(a).add(&y.scale(b)))
            .collect()
    };
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if f.sub(f.mul(a, d), f.mul(b, c)) == 0 {
                        continue;
                    }
                    let l = first_order_lift(v, v_spec, TANGENT_RING, &tangent, &[combine(a, b), combine(c, d)]);
                    let lj = match extend_search(&l, J_RING, &to_tangent)? {
                        ExtendOutcome::Extended(lj) => lj,
                        ExtendOutcome::NoExtension(_) => continue,
                    };
                    return match extend_search(&lj, J_PRIME_RING, &to_j)? {
                        ExtendOutcome::NoExtension(o) => {
                            ev.levels = vec![
                                LevelRecord {
                                    ring: TANGENT_RING.into(),
                                    status: LevelStatus::LiftExists,
                                },
                                LevelRecord {
                                    ring: J_RING.into(),
                                    status: LevelStatus::LiftExists,
                                },
                                LevelRecord {
                                    ring: J_PRIME_RING.into(),
                                    status: LevelStatus::NoLiftExtending,
                                },
                            ];
                            ev.verdict = RingVerdict::TwoVariable;
                            ev.summary = format!("lift over {J_RING} exists and does not extend to {J_PRIME_RING}");
                            ev.witness = Some(LiftRecord::from_lift(&lj));
                            ev.obstructed = Some(ObstructionRecord {
                                lift: LiftRecord::from_lift(&lj),
                                target_ring: J_PRIME_RING.into(),
                                obstruction: o,
                            });
                            Ok(ev)
                        }
                        ExtendOutcome::Extended(_) => Err(DeformError::Inconclusive(format!(
                            "lift over {J_RING} extends to {J_PRIME_RING}"
                        ))),
                    };
                }
            }
        }
    }
    Err(DeformError::Inconclusive(format!(
        "no tangent basis admits a lift over {J_RING}"
    )))
}
