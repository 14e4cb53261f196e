use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeff::{Fp, LocalAlgebra, Matrix, RMatrix, RingElem};
use crate::presentation::Presentation;
use crate::repbuild::ModuleSpec;

use super::rrep::{Lift, RRepresentation};
use super::DeformError;

pub const LIFT_FORMAT: &str = "brauer-udr-lift";
pub const LIFT_VERSION: u32 = 1;

/// One arrow matrix; each entry is its coefficient vector on the ring basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowRecord {
    pub arrow: String,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Vec<u32>>>,
}

/// Self-contained serialized lift.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftRecord {
    pub format: String,
    pub version: u32,
    pub e: usize,
    pub p: u32,
    pub ring: String,
    pub ring_basis: Vec<String>,
    pub base: String,
    pub arrows: Vec<ArrowRecord>,
    /// Per vertex, rows of `g_v`.
    pub reduction: Vec<Vec<Vec<u32>>>,
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<u32>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

impl LiftRecord {
    pub fn from_lift(l: &Lift) -> Self {
        let pres = l.rep.presentation();
        let ring = l.ring();
        LiftRecord {
            format: LIFT_FORMAT.into(),
            version: LIFT_VERSION,
            e: pres.e(),
            p: ring.field().p(),
            ring: l.ring_spec.clone(),
            ring_basis: ring.basis_labels().to_vec(),
            base: l.base_spec.clone(),
            arrows: l
                .rep
                .arrows()
                .iter()
                .enumerate()
                .map(|(a, m)| ArrowRecord {
                    arrow: pres.arrow_name(a),
                    rows: m.rows(),
                    cols: m.cols(),
                    entries: m
                        .entries()
                        .into_iter()
                        .map(|row| row.into_iter().map(|x| x.0).collect())
                        .collect(),
                })
                .collect(),
            reduction: l.reduction.iter().map(matrix_rows).collect(),
        }
    }

    /// Rebuild the lift. Shapes are checked here; relations and the
    /// reduction are left to [`super::verify_lift`].
    pub fn to_lift(&self) -> Result<Lift, DeformError> {
        let bad = |why: String| DeformError::Serialization(why);
        if self.format != LIFT_FORMAT || self.version != LIFT_VERSION {
            return Err(bad(format!("unsupported format {} v{}", self.format, self.version)));
        }
        let pres = Arc::new(Presentation::new(self.e).map_err(|x| bad(x.to_string()))?);
        let f = Fp::new(self.p)?;
        let ring = LocalAlgebra::from_spec(&self.ring, f)?;
        if ring.basis_labels() != self.ring_basis.as_slice() {
            return Err(bad(format!(
                "ring basis {:?} does not match {:?}",
                self.ring_basis,
                ring.basis_labels()
            )));
        }
        let base = ModuleSpec::parse(&pres, f, &self.base)?.build(&pres, f)?;
        if self.arrows.len() != pres.num_arrows() {
            return Err(bad(format!("expected {} arrows", pres.num_arrows())));
        }
        let mut arrows = Vec::new();
        for (a, rec) in self.arrows.iter().enumerate() {
            if rec.arrow != pres.arrow_name(a) {
                return Err(bad(format!("arrow {} out of order", rec.arrow)));
            }
            let mut m = RMatrix::zeros(&ring, rec.rows, rec.cols);
            if rec.entries.len() != rec.rows {
                return Err(bad(format!("arrow {}: wrong row count", rec.arrow)));
            }
            for (i, row) in rec.entries.iter().enumerate() {
                if row.len() != rec.cols {
                    return Err(bad(format!("arrow {}: wrong column count", rec.arrow)));
                }
                for (j, x) in row.iter().enumerate() {
                    if x.len() != ring.dim() {
                        return Err(bad(format!(
                            "arrow {}: entry ({i},{j}) has {} coordinates",
                            rec.arrow,
                            x.len()
                        )));
                    }
                    m.set(i, j, &RingElem(x.iter().map(|&c| f.reduce(c as i64)).collect()));
                }
            }
            arrows.push(m);
        }
        let dims = (0..pres.num_vertices())
            .map(|v| {
                (0..pres.num_arrows())
                    .find_map(|a| {
                        if pres.source(a) == v {
                            Some(self.arrows[a].cols)
                        } else if pres.target(a) == v {
                            Some(self.arrows[a].rows)
                        } else {
                            None
                        }
                    })
                    .unwrap_or(0)
            })
            .collect();
        let reduction = self
            .reduction
            .iter()
            .map(|rows| {
                let ints: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
                if ints.is_empty() {
                    Matrix::zeros(f, 0, 0)
                } else {
                    Matrix::from_rows(f, &ints)
                }
            })
            .collect();
        Ok(Lift {
            ring_spec: self.ring.clone(),
            rep: RRepresentation::new(&pres, &ring, dims, arrows),
            base_spec: self.base.clone(),
            base,
            reduction,
        })
    }

    pub fn to_json(&self) -> String {
        crate::json::to_pretty(&serde_json::to_value(self).expect("serializable"))
    }

    pub fn from_json(src: &str) -> Result<Self, DeformError> {
        serde_json::from_str(src).map_err(|e| DeformError::Serialization(e.to_string()))
    }
}
