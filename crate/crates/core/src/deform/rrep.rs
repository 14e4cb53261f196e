use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeff::{LocalAlgebra, Matrix, RMatrix, RingSurjection};
use crate::homalg::{iso_test, IsoVerdict};
use crate::presentation::Presentation;
use crate::repbuild::Representation;

use super::DeformError;

/// A representation of the quiver over a local algebra `R`, free of rank
/// `dims[v]` at each vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct RRepresentation {
    pres: Arc<Presentation>,
    ring: Arc<LocalAlgebra>,
    dims: Vec<usize>,
    arrows: Vec<RMatrix>,
}

impl RRepresentation {
    /// No relation check; see [`RRepresentation::relation_residues`].
    pub fn new(pres: &Arc<Presentation>, ring: &Arc<LocalAlgebra>, dims: Vec<usize>, arrows: Vec<RMatrix>) -> Self {
        RRepresentation {
            pres: Arc::clone(pres),
            ring: Arc::clone(ring),
            dims,
            arrows,
        }
    }

    /// `R ⊗ V`.
    pub fn trivial(ring: &Arc<LocalAlgebra>, base: &Representation) -> Self {
        let arrows = base
            .arrows()
            .iter()
            .map(|a| RMatrix::from_field_matrix(ring, a))
            .collect();
        Self::new(base.presentation(), ring, base.dims().to_vec(), arrows)
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn ring(&self) -> &Arc<LocalAlgebra> {
        &self.ring
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn arrow(&self, a: usize) -> &RMatrix {
        &self.arrows[a]
    }

    pub fn arrows(&self) -> &[RMatrix] {
        &self.arrows
    }

    pub fn set_arrow(&mut self, a: usize, m: RMatrix) {
        self.arrows[a] = m;
    }

    /// Every arrow matrix has shape `dims[target] × dims[source]` over the ring.
    pub fn is_well_formed(&self) -> bool {
        self.arrows.len() == self.pres.num_arrows()
            && self.dims.len() == self.pres.num_vertices()
            && self.arrows.iter().enumerate().all(|(a, m)| {
                m.rows() == self.dims[self.pres.target(a)]
                    && m.cols() == self.dims[self.pres.source(a)]
                    && m.ring().dim() == self.ring.dim()
            })
    }

    /// Product of the arrow matrices along a word in application order.
    pub fn act_word(&self, start: usize, word: &[usize]) -> RMatrix {
        let mut acc = RMatrix::identity(&self.ring, self.dims[start]);
        for &a in word {
            acc = self.arrows[a].mul(&acc);
        }
        acc
    }

    /// For each relation, `lhs − rhs` evaluated on the matrices.
    pub fn relation_residues(&self) -> Vec<RMatrix> {
        self.pres
            .relations()
            .iter()
            .map(|r| {
                let start = self.pres.source(r.lhs[0]);
                let lhs = self.act_word(start, &r.lhs);
                match &r.rhs {
                    Some(rhs) => lhs.sub(&self.act_word(start, rhs)),
                    None => lhs,
                }
            })
            .collect()
    }

    /// Entrywise reduction modulo the maximal ideal.
    pub fn reduce_mod_m(&self) -> Representation {
        let f = self.ring.field();
        Representation::new_unchecked(
            &self.pres,
            f,
            self.dims.clone(),
            self.arrows.iter().map(RMatrix::reduce_mod_m).collect(),
        )
        .expect("shapes agree")
    }

    /// Base change along a ring surjection `R → R'`.
    pub fn push_forward(&self, s: &RingSurjection) -> RRepresentation {
        let arrows = self.arrows.iter().map(|a| a.map_ring(&s.target, &s.matrix)).collect();
        Self::new(&self.pres, &s.target, self.dims.clone(), arrows)
    }

    /// The underlying Λ-module over GF(p), of dimension `dims[v] · dim R` at `v`.
    pub fn restrict_scalars(&self) -> Representation {
        let d = self.ring.dim();
        let dims = self.dims.iter().map(|&x| x * d).collect();
        Representation::new_unchecked(
            &self.pres,
            self.ring.field(),
            dims,
            self.arrows.iter().map(RMatrix::as_field_matrix).collect(),
        )
        .expect("shapes agree")
    }
}

/// A lift of a Λ-module `V` over a local algebra `R`.
#[derive(Debug, Clone)]
pub struct Lift {
    /// Ring spec text, parseable by [`LocalAlgebra::from_spec`].
    pub ring_spec: String,
    pub rep: RRepresentation,
    /// Module spec text of the base module.
    pub base_spec: String,
    pub base: Representation,
    /// Per vertex `g_v` with `base_a = g_t · (rep_a mod m) · g_s⁻¹`.
    pub reduction: Vec<Matrix>,
}

impl Lift {
    /// Build a lift, computing the reduction isomorphism.
    pub fn new(
        ring_spec: &str,
        rep: RRepresentation,
        base_spec: &str,
        base: Representation,
    ) -> Result<Lift, DeformError> {
        let reduced = rep.reduce_mod_m();
        let reduction = match iso_test(&reduced, &base)? {
            IsoVerdict::Isomorphic(w) => w.0,
            IsoVerdict::NotIsomorphic(why) => return Err(DeformError::WrongReduction(why)),
        };
        Ok(Lift {
            ring_spec: ring_spec.to_string(),
            rep,
            base_spec: base_spec.to_string(),
            base,
            reduction,
        })
    }

    /// `R ⊗ V` with the identity reduction.
    pub fn trivial(ring_spec: &str, ring: &Arc<LocalAlgebra>, base_spec: &str, base: &Representation) -> Lift {
        Lift {
            ring_spec: ring_spec.to_string(),
            rep: RRepresentation::trivial(ring, base),
            base_spec: base_spec.to_string(),
            base: base.clone(),
            reduction: base.dims().iter().map(|&d| Matrix::identity(base.field(), d)).collect(),
        }
    }

    pub fn ring(&self) -> &Arc<LocalAlgebra> {
        self.rep.ring()
    }

    /// The lift pushed along `s`, whose target must be described by `target_spec`.
    pub fn push_forward(&self, s: &RingSurjection, target_spec: &str) -> Lift {
        Lift {
            ring_spec: target_spec.to_string(),
            rep: self.rep.push_forward(s),
            base_spec: self.base_spec.clone(),
            base: self.base.clone(),
            reduction: self.reduction.clone(),
        }
    }
}

/// Where a lift fails a relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub relation: String,
    pub row: usize,
    pub col: usize,
    /// `lhs − rhs` at that entry.
    pub residue: String,
    /// The residue scaled to leading coefficient 1.
    pub normalized: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum LiftVerdict {
    Valid,
    RelationViolated(Violation),
    NotFree,
    WrongReduction,
}

/// The first nonzero entry of the relation residues, if any.
pub fn first_violation(rep: &RRepresentation) -> Option<Violation> {
    let ring = rep.ring();
    let pres = rep.presentation();
    for (r, res) in pres.relations().iter().zip(rep.relation_residues()) {
        for row in 0..res.rows() {
            for col in 0..res.cols() {
                let x = res.get(row, col);
                if !x.is_zero() {
                    return Some(Violation {
                        relation: pres.relation_name(r),
                        row,
                        col,
                        residue: ring.format(&x),
                        normalized: ring.format(&ring.normalize_leading(&x)),
                    });
                }
            }
        }
    }
    None
}

/// Check the relations, freeness (shape consistency), and that the
/// reduction matrices transport `rep mod m` onto the base.
pub fn verify_lift(l: &Lift) -> LiftVerdict {
    if !l.rep.is_well_formed() || l.rep.dims() != l.base.dims() || l.rep.presentation() != l.base.presentation() {
        return LiftVerdict::NotFree;
    }
    if let Some(v) = first_violation(&l.rep) {
        return LiftVerdict::RelationViolated(v);
    }
    let pres = l.rep.presentation();
    let reduced = l.rep.reduce_mod_m();
    if l.reduction.len() != pres.num_vertices()
        || l.reduction.iter().enumerate().any(|(v, g)| {
            g.rows() != l.base.dim(v) || g.cols() != l.base.dim(v) || (g.rows() > 0 && !g.is_invertible())
        })
    {
        return LiftVerdict::WrongReduction;
    }
    for a in 0..pres.num_arrows() {
        let (s, t) = (pres.source(a), pres.target(a));
        let lhs = l.base.arrow(a).mul(&l.reduction[s]);
        let rhs = l.reduction[t].mul(reduced.arrow(a));
        if lhs != rhs {
            return LiftVerdict::WrongReduction;
        }
    }
    LiftVerdict::Valid
}
