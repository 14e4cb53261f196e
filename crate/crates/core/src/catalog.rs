//! The catalog of Ω-orbit representatives with stable endomorphism ring `k`
//! and the deformation rings predicted for them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::homalg::ComponentLabel;
use crate::presentation::Presentation;
use crate::repbuild::{ModuleSpec, StringWord};

/// Candidate universal deformation rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RingVerdict {
    #[serde(rename = "k")]
    K,
    #[serde(rename = "k[[t]]")]
    PowerSeries,
    #[serde(rename = "k[t]/(t^2)")]
    DualNumbers,
    #[serde(rename = "k[[t1,t2]]/(t1^2-t2^2,t1t2)")]
    TwoVariable,
}

impl RingVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            RingVerdict::K => "k",
            RingVerdict::PowerSeries => "k[[t]]",
            RingVerdict::DualNumbers => "k[t]/(t^2)",
            RingVerdict::TwoVariable => "k[[t1,t2]]/(t1^2-t2^2,t1t2)",
        }
    }
}

impl fmt::Display for RingVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A representative of one Ω-orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    pub name: String,
    pub spec: ModuleSpec,
    pub component: ComponentLabel,
    pub predicted: RingVerdict,
}

/// `a<hi>*…*a<lo>` in printed indices, i.e. `α_hi ⋯ α_lo`.
fn alpha_run(hi: usize, lo: usize) -> String {
    (lo..=hi).rev().map(|i| format!("a{i}")).collect::<Vec<_>>().join("*")
}

fn string_spec(pres: &Presentation, text: &str) -> ModuleSpec {
    let w = StringWord::parse(pres, text, None).expect("catalog word parses");
    w.validate(pres).expect("catalog word is a string");
    ModuleSpec::String(w)
}

/// `α_{e-2}⋯α_1 α_e δ⁻¹`, or `α` when `e = 1`.
pub fn w_word(e: usize) -> String {
    if e == 1 {
        return "a1".into();
    }
    let mut parts = Vec::new();
    if e >= 3 {
        parts.push(alpha_run(e - 2, 1));
    }
    parts.push(format!("a{e}"));
    parts.push("d~".into());
    parts.join("*")
}

/// `α_{e-1}⋯α_1 α_e δ⁻¹`, the band word.
fn band_word(e: usize) -> String {
    let mut parts = Vec::new();
    if e >= 2 {
        parts.push(alpha_run(e - 1, 1));
    }
    parts.push(format!("a{e}"));
    parts.push("d~".into());
    parts.join("*")
}

/// One representative per Ω-orbit of modules with stable endomorphism
/// ring `k`, outside the homogeneous tubes.
pub fn seeds(pres: &Presentation) -> Vec<Seed> {
    let e = pres.e();
    let mut out = Vec::new();
    let seed = |name: String, spec, component, predicted| Seed {
        name,
        spec,
        component,
        predicted,
    };
    if e == 1 {
        out.push(seed(
            "M(a1)".into(),
            string_spec(pres, "a1"),
            ComponentLabel::ExceptionalTube,
            RingVerdict::PowerSeries,
        ));
        out.push(seed(
            "S_1".into(),
            ModuleSpec::Simple(0),
            ComponentLabel::NonPeriodic,
            RingVerdict::TwoVariable,
        ));
        return out;
    }
    out.push(seed(
        format!("S_{}", e - 1),
        ModuleSpec::Simple(e - 2),
        ComponentLabel::ExceptionalTube,
        RingVerdict::K,
    ));
    for i in 1..=e.saturating_sub(2) {
        let text = alpha_run(e - 2, i);
        out.push(seed(
            format!("M({text})"),
            string_spec(pres, &text),
            ComponentLabel::ExceptionalTube,
            RingVerdict::K,
        ));
    }
    let w = w_word(e);
    out.push(seed(
        format!("M({w})"),
        string_spec(pres, &w),
        ComponentLabel::ExceptionalTube,
        RingVerdict::PowerSeries,
    ));
    out.push(seed(
        format!("S_{e}"),
        ModuleSpec::Simple(e - 1),
        ComponentLabel::NonPeriodic,
        RingVerdict::DualNumbers,
    ));
    for i in 1..e {
        let text = alpha_run(e - 1, i);
        let predicted = if i == 1 {
            RingVerdict::DualNumbers
        } else {
            RingVerdict::K
        };
        out.push(seed(
            format!("M({text})"),
            string_spec(pres, &text),
            ComponentLabel::NonPeriodic,
            predicted,
        ));
    }
    out
}

/// String modules whose stable endomorphism ring is larger than `k`:
/// `M_{1,0}` and `M_{1,i}` for `1 ≤ i ≤ e-1` (for `e = 1`, `M(α δ⁻¹ α)`).
pub fn large_stable_end(pres: &Presentation) -> Vec<(String, ModuleSpec)> {
    let e = pres.e();
    if e == 1 {
        let t = "a1*d~*a1".to_string();
        return vec![(format!("M({t})"), string_spec(pres, &t))];
    }
    let w = w_word(e);
    let mut out = Vec::new();
    let m10 = format!("{w}*{}", band_word(e));
    out.push((format!("M({m10})"), string_spec(pres, &m10)));
    for i in 1..e {
        let t = format!("{w}*{}", alpha_run(e - 1, i));
        out.push((format!("M({t})"), string_spec(pres, &t)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_counts_match_orbit_counts() {
        for e in 1..=5 {
            let pres = Presentation::new(e).unwrap();
            let s = seeds(&pres);
            let exc = s
                .iter()
                .filter(|x| x.component == ComponentLabel::ExceptionalTube)
                .count();
            let non = s.iter().filter(|x| x.component == ComponentLabel::NonPeriodic).count();
            if e == 1 {
                assert_eq!((exc, non), (1, 1));
            } else {
                assert_eq!(exc, e);
                assert_eq!(non, e);
            }
        }
    }

    #[test]
    fn e2_w_is_a2_dinv() {
        let pres = Presentation::new(2).unwrap();
        assert_eq!(w_word(2), "a2*d~");
        assert_eq!(w_word(3), "a1*a3*d~");
        let names: Vec<String> = large_stable_end(&pres).into_iter().map(|x| x.0).collect();
        assert_eq!(names, vec!["M(a2*d~*a1*a2*d~)", "M(a2*d~*a1)"]);
    }
}
