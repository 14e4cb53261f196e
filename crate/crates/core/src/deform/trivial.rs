use crate::coeff::{Matrix, RMatrix};
use crate::homalg::hom::{in_span, HomSpace};
use crate::homalg::iso::find_invertible;
use crate::homalg::{hom_space, local_radical, stable_end_dim, HomMap};

use super::rrep::Lift;
use super::DeformError;

/// Whether `L ≅ R ⊗ V` as RΛ-modules. Requires `dim End_stable(V) = 1`,
/// under which this agrees with equivalence of deformations.
///
/// The R-linear homomorphisms `L → R ⊗ V` are solved for as a GF(p)-space;
/// such a map is invertible iff its reduction mod m is, and the reductions
/// (transported to `End V` by the reduction isomorphism) contain an
/// invertible element iff they are not all in the radical of `End V`.
pub fn is_trivial_lift(l: &Lift) -> Result<bool, DeformError> {
    let base = &l.base;
    let s = stable_end_dim(base)?;
    if s != 1 {
        return Err(DeformError::StableEndTooLarge(s));
    }
    let pres = l.rep.presentation();
    let ring = l.ring();
    let f = ring.field();
    let d = ring.dim();
    let nv = pres.num_vertices();
    // unknowns: (vertex, row, col, ring basis)
    let mut unknowns = Vec::new();
    for v in 0..nv {
        for r in 0..base.dim(v) {
            for c in 0..base.dim(v) {
                for b in 0..d {
                    unknowns.push((v, r, c, b));
                }
            }
        }
    }
    let mut eq_offsets = Vec::new();
    let mut n_eq = 0;
    for a in 0..pres.num_arrows() {
        eq_offsets.push(n_eq);
        n_eq += base.dim(pres.target(a)) * base.dim(pres.source(a)) * d;
    }
    let lifted_base: Vec<RMatrix> = base
        .arrows()
        .iter()
        .map(|m| RMatrix::from_field_matrix(ring, m))
        .collect();
    let mut cols = Vec::with_capacity(unknowns.len());
    for &(v, r, c, b) in &unknowns {
        let x = RMatrix::unit_entry(ring, base.dim(v), base.dim(v), r, c, &ring.basis(b));
        let mut col = vec![0u32; n_eq];
        for a in 0..pres.num_arrows() {
            let (s, t) = (pres.source(a), pres.target(a));
            if s != v && t != v {
                continue;
            }
            // (R⊗B_a) X_s − X_t A_a
            let mut val = RMatrix::zeros(ring, base.dim(t), base.dim(s));
            if s == v {
                val = val.add(&lifted_base[a].mul(&x));
            }
            if t == v {
                val = val.sub(&x.mul(l.rep.arrow(a)));
            }
            let off = eq_offsets[a];
            for i in 0..val.rows() {
                for j in 0..val.cols() {
                    for (k, &y) in val.get(i, j).0.iter().enumerate() {
                        col[off + (i * val.cols() + j) * d + k] = y;
                    }
                }
            }
        }
        cols.push(col);
    }
    let system = Matrix::from_col_vectors(f, n_eq, &cols);
    let sols = if n_eq == 0 {
        Matrix::identity(f, unknowns.len()).column_space()
    } else {
        system.kernel()
    };
    // reductions mod m, transported to End(V) by g⁻¹
    let g_inv: Vec<Matrix> = l
        .reduction
        .iter()
        .map(|g| {
            if g.rows() == 0 {
                g.clone()
            } else {
                g.inverse().expect("reduction is invertible")
            }
        })
        .collect();
    let reductions: Vec<HomMap> = sols
        .iter()
        .map(|x| {
            HomMap(
                (0..nv)
                    .map(|v| {
                        let mut m = Matrix::zeros(f, base.dim(v), base.dim(v));
                        for (k, &(w, r, c, b)) in unknowns.iter().enumerate() {
                            if w == v && b == 0 {
                                m.set(r, c, x[k]);
                            }
                        }
                        m.mul(&g_inv[v])
                    })
                    .collect(),
            )
        })
        .collect();
    let end = hom_space(base, base)?;
    if let Some(j) = local_radical(base, &end) {
        return Ok(reductions.iter().any(|h| !in_span(f, &j, h)));
    }
    let space = HomSpace {
        source: base.clone(),
        target: base.clone(),
        basis: crate::homalg::hom::span_homs(f, base, base, &reductions),
    };
    Ok(find_invertible(f, &space)?.is_some())
}
