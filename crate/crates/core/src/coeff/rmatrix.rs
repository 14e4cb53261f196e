use std::sync::Arc;

use super::local::{LocalAlgebra, RingElem};
use super::matrix::Matrix;

/// A matrix over a local algebra `R`, stored as one GF(p) matrix per basis
/// element of `R`: `A = Σ_b comps[b] · basis[b]`.
#[derive(Debug, Clone)]
pub struct RMatrix {
    ring: Arc<LocalAlgebra>,
    rows: usize,
    cols: usize,
    comps: Vec<Matrix>,
}

impl PartialEq for RMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.comps == other.comps
    }
}

impl RMatrix {
    pub fn zeros(ring: &Arc<LocalAlgebra>, rows: usize, cols: usize) -> Self {
        let f = ring.field();
        RMatrix {
            ring: Arc::clone(ring),
            rows,
            cols,
            comps: (0..ring.dim()).map(|_| Matrix::zeros(f, rows, cols)).collect(),
        }
    }

    pub fn identity(ring: &Arc<LocalAlgebra>, n: usize) -> Self {
        Self::from_field_matrix(ring, &Matrix::identity(ring.field(), n))
    }

    /// Scalar extension `R ⊗ A` of a GF(p)-matrix.
    pub fn from_field_matrix(ring: &Arc<LocalAlgebra>, a: &Matrix) -> Self {
        let mut m = Self::zeros(ring, a.rows(), a.cols());
        m.comps[0] = a.clone();
        m
    }

    pub fn from_components(ring: &Arc<LocalAlgebra>, comps: Vec<Matrix>) -> Self {
        assert_eq!(comps.len(), ring.dim());
        let rows = comps[0].rows();
        let cols = comps[0].cols();
        assert!(comps.iter().all(|c| c.rows() == rows && c.cols() == cols));
        RMatrix {
            ring: Arc::clone(ring),
            rows,
            cols,
            comps,
        }
    }

    /// Single nonzero entry `x` at `(r, c)`.
    pub fn unit_entry(ring: &Arc<LocalAlgebra>, rows: usize, cols: usize, r: usize, c: usize, x: &RingElem) -> Self {
        let mut m = Self::zeros(ring, rows, cols);
        m.set(r, c, x);
        m
    }

    pub fn ring(&self) -> &Arc<LocalAlgebra> {
        &self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn components(&self) -> &[Matrix] {
        &self.comps
    }
    pub fn component(&self, b: usize) -> &Matrix {
        &self.comps[b]
    }

    pub fn get(&self, r: usize, c: usize) -> RingElem {
        RingElem(self.comps.iter().map(|m| m.get(r, c)).collect())
    }

    pub fn set(&mut self, r: usize, c: usize, x: &RingElem) {
        for (m, &v) in self.comps.iter_mut().zip(&x.0) {
            m.set(r, c, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|m| m.is_zero())
    }

    /// Entrywise reduction modulo the maximal ideal.
    pub fn reduce_mod_m(&self) -> Matrix {
        self.comps[0].clone()
    }

    pub fn add(&self, rhs: &RMatrix) -> RMatrix {
        RMatrix {
            ring: Arc::clone(&self.ring),
            rows: self.rows,
            cols: self.cols,
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &RMatrix) -> RMatrix {
        RMatrix {
            ring: Arc::clone(&self.ring),
            rows: self.rows,
            cols: self.cols,
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, x: &RingElem) -> RMatrix {
        let d = self.ring.dim();
        let mut out = Self::zeros(&self.ring, self.rows, self.cols);
        for (a, &xa) in x.0.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            for b in 0..d {
                if self.comps[b].is_zero() {
                    continue;
                }
                for &(c, coef) in self.ring.table_entry(a, b) {
                    out.comps[c].add_scaled(&self.comps[b], self.ring.field().mul(xa, coef));
                }
            }
        }
        out
    }

    pub fn mul(&self, rhs: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, rhs.rows, "RMatrix product shape");
        let d = self.ring.dim();
        let f = self.ring.field();
        let mut out = Self::zeros(&self.ring, self.rows, rhs.cols);
        for a in 0..d {
            if self.comps[a].is_zero() {
                continue;
            }
            for b in 0..d {
                if rhs.comps[b].is_zero() {
                    continue;
                }
                let entry = self.ring.table_entry(a, b);
                if entry.is_empty() {
                    continue;
                }
                let prod = self.comps[a].mul(&rhs.comps[b]);
                for &(c, coef) in entry {
                    out.comps[c].add_scaled(&prod, coef);
                }
            }
        }
        let _ = f;
        out
    }

    /// The GF(p)-linear map on `R^cols -> R^rows` viewed as `k^{cols·d} -> k^{rows·d}`,
    /// coordinates ordered (entry index, ring basis index).
    pub fn as_field_matrix(&self) -> Matrix {
        let d = self.ring.dim();
        let f = self.ring.field();
        let mut out = Matrix::zeros(f, self.rows * d, self.cols * d);
        for a in 0..d {
            let ca = &self.comps[a];
            for r in 0..self.rows {
                for c in 0..self.cols {
                    let v = ca.get(r, c);
                    if v == 0 {
                        continue;
                    }
                    // x = basis[b] at column c  ->  v * basis[a]*basis[b] at row r
                    for b in 0..d {
                        for &(k, coef) in self.ring.table_entry(a, b) {
                            let cur = out.get(r * d + k, c * d + b);
                            out.set(r * d + k, c * d + b, f.mul_add(cur, v, coef));
                        }
                    }
                }
            }
        }
        out
    }

    /// Apply a ring map to every entry (`matrix` is `dim target × dim source`).
    pub fn map_ring(&self, target: &Arc<LocalAlgebra>, matrix: &Matrix) -> RMatrix {
        let f = self.ring.field();
        let mut comps: Vec<Matrix> = (0..target.dim())
            .map(|_| Matrix::zeros(f, self.rows, self.cols))
            .collect();
        for (b, comp) in self.comps.iter().enumerate() {
            if comp.is_zero() {
                continue;
            }
            for (c, out) in comps.iter_mut().enumerate() {
                let coef = matrix.get(c, b);
                if coef != 0 {
                    out.add_scaled(comp, coef);
                }
            }
        }
        RMatrix {
            ring: Arc::clone(target),
            rows: self.rows,
            cols: self.cols,
            comps,
        }
    }

    /// Entries as coefficient vectors, row-major.
    pub fn entries(&self) -> Vec<Vec<RingElem>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c)).collect())
            .collect()
    }

    pub fn format(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|r| {
                let cells: Vec<String> = (0..self.cols).map(|c| self.ring.format(&self.get(r, c))).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Fp;

    #[test]
    fn product_matches_entrywise_ring_arithmetic() {
        let f = Fp::new(5).unwrap();
        let r = LocalAlgebra::from_spec("k[t1,t2]/(t1^2-t2^2,t1t2)", f).unwrap();
        let t1 = r.var(0);
        let t2 = r.var(1);
        let mut a = RMatrix::zeros(&r, 2, 2);
        a.set(0, 0, &r.add(&r.one(), &t1));
        a.set(0, 1, &t2);
        a.set(1, 0, &r.scalar(3));
        let mut b = RMatrix::zeros(&r, 2, 1);
        b.set(0, 0, &t1);
        b.set(1, 0, &r.add(&t2, &r.scalar(2)));
        let c = a.mul(&b);
        let expect00 = r.add(
            &r.mul(&r.add(&r.one(), &t1), &t1),
            &r.mul(&t2, &r.add(&t2, &r.scalar(2))),
        );
        assert_eq!(c.get(0, 0), expect00);
        assert_eq!(c.get(1, 0), r.scale(&t1, 3));
        // the flattened k-linear map agrees with the product
        let flat = a
            .as_field_matrix()
            .mul(&b.as_field_matrix().block(0, 0, 2 * r.dim(), 1));
        let direct: Vec<u32> = (0..2).flat_map(|i| c.get(i, 0).0).collect();
        assert_eq!(flat.col(0), direct);
    }
}
