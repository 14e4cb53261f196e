use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::w_word;
use crate::coeff::{Fp, LocalAlgebra, RMatrix, RingElem};
use crate::presentation::Presentation;
use crate::repbuild::ModuleSpec;

use super::rrep::{Lift, RRepresentation};
use super::DeformError;

/// The explicit lift families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Rank `e+1` lift of `M(α_{e-2}⋯α_1α_eδ⁻¹)` (of `M(α)` when `e = 1`)
    /// over `k[t]/(t^N)`, with `α_{e-1} = t·E_{e+1,e-1}`.
    WStar,
    /// The same family with `α_{e-1} = t·E_{e,e-1}`; fails the relations.
    WStarPrinted,
    /// Rank `e` lift of `M(α_{e-1}⋯α_1)` with `α_e = t·E_{1,e}`.
    VNonPeriodic,
    /// `S_e` with `δ = [t]`.
    Se,
    /// `e = 1`: `S_1` over `k[t1,t2]/(t1²−t2², t1t2)` with `α = [t1]`, `δ = [t2]`.
    S1E1,
    /// Rank `e+1` lift of `B(1,λ)` with `δ = (t+λ)·E_{e+1,e}`.
    Band,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::WStar,
        Family::WStarPrinted,
        Family::VNonPeriodic,
        Family::Se,
        Family::S1E1,
        Family::Band,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::WStar => "W-star",
            Family::WStarPrinted => "W-star-printed",
            Family::VNonPeriodic => "V-nonperiodic",
            Family::Se => "Se",
            Family::S1E1 => "S1-e1",
            Family::Band => "band",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = DeformError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| DeformError::BadFamily(format!("unknown family {s}")))
    }
}

/// Numbered basis vectors `1..=n` placed at vertices; `E_{j,i}` entries are
/// written into the arrow blocks.
struct Builder {
    pres: Arc<Presentation>,
    ring: Arc<LocalAlgebra>,
    /// vertex and position within the vertex, per numbered vector
    place: Vec<(usize, usize)>,
    dims: Vec<usize>,
    arrows: Vec<RMatrix>,
}

impl Builder {
    fn new(pres: &Arc<Presentation>, ring: &Arc<LocalAlgebra>, vertices: &[usize]) -> Self {
        let mut dims = vec![0; pres.num_vertices()];
        let place = vertices
            .iter()
            .map(|&v| {
                dims[v] += 1;
                (v, dims[v] - 1)
            })
            .collect();
        let arrows = (0..pres.num_arrows())
            .map(|a| RMatrix::zeros(ring, dims[pres.target(a)], dims[pres.source(a)]))
            .collect();
        Builder {
            pres: Arc::clone(pres),
            ring: Arc::clone(ring),
            place,
            dims,
            arrows,
        }
    }

    /// Arrow `a` sends vector `i` to `x` times vector `j` (1-based).
    fn set(&mut self, a: usize, j: usize, i: usize, x: &RingElem) -> Result<(), DeformError> {
        let (vs, ps) = self.place[i - 1];
        let (vt, pt) = self.place[j - 1];
        if self.pres.source(a) != vs || self.pres.target(a) != vt {
            return Err(DeformError::BadFamily(format!(
                "E_{{{j},{i}}} does not fit arrow {}",
                self.pres.arrow_name(a)
            )));
        }
        self.arrows[a].set(pt, ps, x);
        Ok(())
    }

    fn finish(self) -> RRepresentation {
        RRepresentation::new(&self.pres, &self.ring, self.dims, self.arrows)
    }
}

/// Ring spec used by a family at truncation level `n`.
pub fn family_ring_spec(family: Family, level: u32) -> String {
    match family {
        Family::S1E1 => "k[t1,t2]/(t1^2-t2^2,t1t2)".to_string(),
        _ => format!("k[t]/(t^{level})"),
    }
}

/// Build a family member. `level` is the truncation `N` of `k[t]/(t^N)`
/// (ignored by `S1-e1`); `lambda` is used by `band` only.
pub fn paper_lift_family(
    family: Family,
    pres: &Arc<Presentation>,
    field: Fp,
    level: u32,
    lambda: u32,
) -> Result<Lift, DeformError> {
    let e = pres.e();
    if level < 2 && family != Family::S1E1 {
        return Err(DeformError::BadFamily("truncation level must be at least 2".into()));
    }
    let ring_spec = family_ring_spec(family, level);
    let ring = LocalAlgebra::from_spec(&ring_spec, field).map_err(|x| DeformError::BadFamily(x.to_string()))?;
    let one = ring.one();
    let delta = pres.delta();
    // arrow index of α_i (printed 1-based)
    let alpha = |i: usize| i - 1;
    let last = e - 1;
    let (rep, base_spec) = match family {
        Family::WStar | Family::WStarPrinted => {
            let t = ring.var(0);
            if e == 1 {
                if family == Family::WStarPrinted {
                    return Err(DeformError::BadFamily("the printed variant needs e >= 2".into()));
                }
                let mut b = Builder::new(pres, &ring, &[0, 0]);
                b.set(alpha(1), 2, 1, &one)?;
                b.set(delta, 2, 1, &t)?;
                (b.finish(), format!("str:{}", w_word(1)))
            } else {
                let mut verts: Vec<usize> = (0..e - 1).collect();
                verts.extend([last, last]);
                let mut b = Builder::new(pres, &ring, &verts);
                for i in 1..=e.saturating_sub(2) {
                    b.set(alpha(i), i + 1, i, &one)?;
                }
                let into = if family == Family::WStar { e + 1 } else { e };
                b.set(alpha(e - 1), into, e - 1, &t)?;
                b.set(alpha(e), 1, e, &one)?;
                b.set(delta, e + 1, e, &one)?;
                (b.finish(), format!("str:{}", w_word(e)))
            }
        }
        Family::VNonPeriodic => {
            if e < 2 {
                return Err(DeformError::BadFamily("V-nonperiodic needs e >= 2".into()));
            }
            let t = ring.var(0);
            let mut b = Builder::new(pres, &ring, &(0..e).collect::<Vec<_>>());
            for i in 1..e {
                b.set(alpha(i), i + 1, i, &one)?;
            }
            b.set(alpha(e), 1, e, &t)?;
            let word: Vec<String> = (1..e).rev().map(|i| format!("a{i}")).collect();
            (b.finish(), format!("str:{}", word.join("*")))
        }
        Family::Se => {
            let mut b = Builder::new(pres, &ring, &[last]);
            b.set(delta, 1, 1, &ring.var(0))?;
            (b.finish(), format!("S({e})"))
        }
        Family::S1E1 => {
            if e != 1 {
                return Err(DeformError::BadFamily("S1-e1 needs e = 1".into()));
            }
            let mut b = Builder::new(pres, &ring, &[0]);
            b.set(alpha(1), 1, 1, &ring.var(0))?;
            b.set(delta, 1, 1, &ring.var(1))?;
            (b.finish(), "S(1)".to_string())
        }
        Family::Band => {
            let lambda = field.reduce(lambda as i64);
            if lambda == 0 {
                return Err(DeformError::BadFamily("band parameter must be nonzero".into()));
            }
            let t_plus = ring.add(&ring.var(0), &ring.scalar(lambda));
            if e == 1 {
                let mut b = Builder::new(pres, &ring, &[0, 0]);
                b.set(alpha(1), 2, 1, &one)?;
                b.set(delta, 2, 1, &t_plus)?;
                (b.finish(), format!("band:1,{lambda}"))
            } else {
                let mut verts: Vec<usize> = (0..e - 1).collect();
                verts.extend([last, last]);
                let mut b = Builder::new(pres, &ring, &verts);
                for i in 1..=e.saturating_sub(2) {
                    b.set(alpha(i), i + 1, i, &one)?;
                }
                b.set(alpha(e - 1), e + 1, e - 1, &one)?;
                b.set(alpha(e), 1, e, &one)?;
                b.set(delta, e + 1, e, &t_plus)?;
                (b.finish(), format!("band:1,{lambda}"))
            }
        }
    };
    let base = ModuleSpec::parse(pres, field, &base_spec)?.build(pres, field)?;
    Lift::new(&ring_spec, rep, &base_spec, base)
}
