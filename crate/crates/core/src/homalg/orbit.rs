use serde::{Deserialize, Serialize};

use crate::catalog::{seeds, Seed};
use crate::repbuild::Representation;

use super::cover::{strip_projectives, syzygy};
use super::hom::HomMap;
use super::iso::{iso_test, IsoVerdict};
use super::HomError;

/// Stable Auslander–Reiten component types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentLabel {
    ExceptionalTube,
    NonPeriodic,
    HomogeneousTube,
    Projective,
    Unknown,
}

impl ComponentLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentLabel::ExceptionalTube => "ExceptionalTube",
            ComponentLabel::NonPeriodic => "NonPeriodic",
            ComponentLabel::HomogeneousTube => "HomogeneousTube",
            ComponentLabel::Projective => "Projective",
            ComponentLabel::Unknown => "Unknown",
        }
    }
}

/// `V, ΩV, Ω²V, …` up to the first repetition or the depth bound.
#[derive(Debug, Clone)]
pub struct OmegaOrbit {
    pub members: Vec<Representation>,
    /// Smallest `k > 0` with `Ω^k V ≅ V`, if found.
    pub period: Option<usize>,
    /// Isomorphism `Ω^period V → V`.
    pub witness: Option<HomMap>,
}

/// Compute `Ω^k V` for `k ≤ max_depth`, stopping at the first `k` with
/// `Ω^k V ≅ Ω^j V` for some `j < k`. Because Ω is an auto-equivalence of the
/// stable category, a repetition always returns to `V` itself.
pub fn omega_orbit(v: &Representation, max_depth: usize) -> Result<OmegaOrbit, HomError> {
    let mut members = vec![v.clone()];
    for k in 1..=max_depth {
        let next = syzygy(members.last().unwrap());
        for (j, prev) in members.iter().enumerate() {
            if let IsoVerdict::Isomorphic(w) = iso_test(&next, prev)? {
                if j != 0 {
                    return Err(HomError::Inconclusive(format!(
                        "Ω^{k} V ≅ Ω^{j} V with j > 0; input is not a non-projective indecomposable"
                    )));
                }
                return Ok(OmegaOrbit {
                    members,
                    period: Some(k),
                    witness: Some(w),
                });
            }
        }
        members.push(next);
    }
    Ok(OmegaOrbit {
        members,
        period: None,
        witness: None,
    })
}

/// Result of classifying an indecomposable module.
#[derive(Debug, Clone)]
pub struct Classification {
    pub label: ComponentLabel,
    /// Index into [`crate::catalog::seeds`] and `s` with `V ≅ Ω^s(seed)`
    /// (`s` may be negative).
    pub seed: Option<(usize, i64)>,
    /// Band parameters `(n, λ)` when `V ≅ B(n, λ)`.
    pub band: Option<(usize, u32)>,
    pub period: Option<usize>,
}

/// Classifier with cached forward Ω-orbits of the catalog seeds.
pub struct Classifier {
    seeds: Vec<Seed>,
    orbits: Vec<Vec<Representation>>,
    depth: usize,
}

impl Classifier {
    /// Depth `2e + 2` reaches every member of a tube of rank `e`.
    pub fn new(v_like: &Representation) -> Result<Self, HomError> {
        let pres = v_like.presentation();
        let depth = 2 * pres.e() + 2;
        Self::with_depth(v_like, depth)
    }

    pub fn with_depth(v_like: &Representation, depth: usize) -> Result<Self, HomError> {
        let pres = v_like.presentation();
        let f = v_like.field();
        let seeds = seeds(pres);
        let mut orbits = Vec::new();
        for s in &seeds {
            let m = s.spec.build(pres, f)?;
            let mut orbit = vec![m];
            for _ in 0..depth {
                let next = syzygy(orbit.last().unwrap());
                orbit.push(next);
            }
            orbits.push(orbit);
        }
        Ok(Classifier { seeds, orbits, depth })
    }

    pub fn seeds(&self) -> &[Seed] {
        &self.seeds
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Find `(seed, s)` with `V ≅ Ω^s(seed)`, trying `s ≥ 0` through the
    /// cached orbits and then `s < 0` by walking `V` forward.
    pub fn match_seed(&self, v: &Representation) -> Result<Option<(usize, i64)>, HomError> {
        for (i, orbit) in self.orbits.iter().enumerate() {
            for (s, m) in orbit.iter().enumerate() {
                if iso_test(v, m)?.is_isomorphic() {
                    return Ok(Some((i, s as i64)));
                }
            }
        }
        let mut cur = v.clone();
        for s in 1..=self.depth {
            cur = syzygy(&cur);
            for (i, orbit) in self.orbits.iter().enumerate() {
                if iso_test(&cur, &orbit[0])?.is_isomorphic() {
                    return Ok(Some((i, -(s as i64))));
                }
            }
        }
        Ok(None)
    }

    /// Classify an indecomposable module. Projective modules are detected
    /// directly, bands by isomorphism with `B(n, λ)`, catalog members by
    /// Ω-orbit matching. Otherwise a module with `Ω^{2e} V ≅ V` lies in an
    /// exceptional tube (τ = Ω² and the tubes have rank `e`), one without lies
    /// in the non-periodic component, and an orbit not settled within the
    /// depth bound is `Unknown`.
    pub fn classify(&self, v: &Representation) -> Result<Classification, HomError> {
        let pres = v.presentation();
        let e = pres.e();
        let mut out = Classification {
            label: ComponentLabel::Unknown,
            seed: None,
            band: None,
            period: None,
        };
        let (core, removed) = strip_projectives(v);
        if !removed.is_empty() {
            out.label = if core.is_zero() {
                ComponentLabel::Projective
            } else {
                ComponentLabel::Unknown
            };
            return Ok(out);
        }
        if let Some(b) = band_parameters(v)? {
            out.label = ComponentLabel::HomogeneousTube;
            out.band = Some(b);
            out.period = Some(if v.field().mul(b.1, b.1) == v.field().neg(1) {
                1
            } else {
                2
            });
            return Ok(out);
        }
        let orbit = omega_orbit(v, self.depth.max(2 * e))?;
        out.period = orbit.period;
        if let Some(m) = self.match_seed(v)? {
            out.seed = Some(m);
            out.label = self.seeds[m.0].component;
            return Ok(out);
        }
        out.label = match orbit.period {
            Some(k) if (2 * e).is_multiple_of(k) => ComponentLabel::ExceptionalTube,
            Some(_) => ComponentLabel::Unknown,
            None if self.depth >= 2 * e => ComponentLabel::NonPeriodic,
            None => ComponentLabel::Unknown,
        };
        Ok(out)
    }
}

/// `(n, λ)` with `V ≅ B(n, λ)`, if any.
pub fn band_parameters(v: &Representation) -> Result<Option<(usize, u32)>, HomError> {
    let dims = v.dims();
    let e = dims.len();
    let n = dims[e - 1] / 2;
    if n == 0 || dims[e - 1] != 2 * n || dims[..e - 1].iter().any(|&d| d != n) {
        return Ok(None);
    }
    let f = v.field();
    for lambda in f.units() {
        let b = Representation::band(v.presentation(), f, n, lambda)?;
        if iso_test(v, &b)?.is_isomorphic() {
            return Ok(Some((n, lambda)));
        }
    }
    Ok(None)
}

/// Classify one module, building the seed cache on the fly.
pub fn classify_component(v: &Representation) -> Result<ComponentLabel, HomError> {
    Ok(Classifier::new(v)?.classify(v)?.label)
}
