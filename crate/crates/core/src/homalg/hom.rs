use crate::coeff::{Fp, Matrix};
use crate::repbuild::Representation;

use super::cover::projective_cover;
use super::HomError;

/// A module homomorphism given by one matrix per vertex (target × source).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomMap(pub Vec<Matrix>);

impl HomMap {
    pub fn zero(source: &Representation, target: &Representation) -> Self {
        let f = source.field();
        HomMap(
            (0..source.dims().len())
                .map(|v| Matrix::zeros(f, target.dim(v), source.dim(v)))
                .collect(),
        )
    }

    pub fn identity(m: &Representation) -> Self {
        let f = m.field();
        HomMap(m.dims().iter().map(|&d| Matrix::identity(f, d)).collect())
    }

    pub fn vertex(&self, v: usize) -> &Matrix {
        &self.0[v]
    }

    /// `self ∘ rhs`
    pub fn compose(&self, rhs: &HomMap) -> HomMap {
        HomMap(self.0.iter().zip(&rhs.0).map(|(a, b)| a.mul(b)).collect())
    }

    pub fn add(&self, rhs: &HomMap) -> HomMap {
        HomMap(self.0.iter().zip(&rhs.0).map(|(a, b)| a.add(b)).collect())
    }

    pub fn sub(&self, rhs: &HomMap) -> HomMap {
        HomMap(self.0.iter().zip(&rhs.0).map(|(a, b)| a.sub(b)).collect())
    }

    pub fn scale(&self, c: u32) -> HomMap {
        HomMap(self.0.iter().map(|a| a.scale(c)).collect())
    }

    pub fn add_scaled(&mut self, rhs: &HomMap, c: u32) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            a.add_scaled(b, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Matrix::is_zero)
    }

    /// Invertible at every vertex.
    pub fn is_invertible(&self) -> bool {
        self.0
            .iter()
            .all(|m| m.is_square() && (m.rows() == 0 || m.is_invertible()))
    }

    pub fn inverse(&self) -> Option<HomMap> {
        self.0
            .iter()
            .map(|m| if m.rows() == 0 { Some(m.clone()) } else { m.inverse() })
            .collect::<Option<Vec<_>>>()
            .map(HomMap)
    }

    /// Vertex-diagonal nilpotency.
    pub fn is_nilpotent(&self) -> bool {
        self.0.iter().all(|m| {
            let n = m.rows();
            if n == 0 {
                return true;
            }
            let mut pw = m.clone();
            let mut k = 1;
            while k < n {
                pw = pw.mul(&pw);
                k *= 2;
            }
            pw.is_zero()
        })
    }

    /// All entries, vertex by vertex, row-major.
    pub fn flatten(&self) -> Vec<u32> {
        self.0.iter().flat_map(|m| m.data().iter().copied()).collect()
    }

    /// Whether the map commutes with every arrow.
    pub fn is_homomorphism(&self, source: &Representation, target: &Representation) -> bool {
        let pres = source.presentation();
        (0..pres.num_arrows()).all(|a| {
            let (s, t) = (pres.source(a), pres.target(a));
            self.0[t].mul(source.arrow(a)) == target.arrow(a).mul(&self.0[s])
        })
    }

    /// The global block-diagonal matrix.
    pub fn global(&self, source: &Representation, target: &Representation) -> Matrix {
        let f = source.field();
        let mut g = Matrix::zeros(f, target.total_dim(), source.total_dim());
        for (v, m) in self.0.iter().enumerate() {
            g.set_block(target.offset(v), source.offset(v), m);
        }
        g
    }

    pub fn rank(&self) -> usize {
        self.0.iter().map(Matrix::rank).sum()
    }
}

/// A basis of `Hom_Λ(M, N)`.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub source: Representation,
    pub target: Representation,
    pub basis: Vec<HomMap>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Linear combination of the basis.
    pub fn combination(&self, coeffs: &[u32]) -> HomMap {
        let mut out = HomMap::zero(&self.source, &self.target);
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c != 0 {
                out.add_scaled(b, c);
            }
        }
        out
    }
}

fn check_compatible(m: &Representation, n: &Representation) -> Result<(), HomError> {
    if m.presentation() != n.presentation() || m.field() != n.field() {
        return Err(HomError::Mismatch("modules over different algebras".into()));
    }
    Ok(())
}

/// Basis of `Hom_Λ(M, N)`, computed from a projective presentation of `M`:
/// a homomorphism is determined by the images of the top generators, and
/// those images are constrained exactly by the kernel of the cover.
pub fn hom_space(m: &Representation, n: &Representation) -> Result<HomSpace, HomError> {
    check_compatible(m, n)?;
    let f = m.field();
    let pres = m.presentation();
    let cover = projective_cover(m);
    let gens = &cover.gens;
    let mut unknown_offset = Vec::with_capacity(gens.len());
    let mut nunk = 0;
    for (v, _) in gens {
        unknown_offset.push(nunk);
        nunk += n.dim(*v);
    }
    // images N_b of every basis path appearing in the cover
    let mut eq_rows: Vec<Vec<u32>> = Vec::new();
    for w in 0..pres.num_vertices() {
        let epi = &cover.epi[w];
        if epi.cols() == 0 || n.dim(w) == 0 {
            continue;
        }
        let kernel = epi.kernel();
        if kernel.is_empty() {
            continue;
        }
        let actions: Vec<Matrix> = cover.cols[w].iter().map(|(_, b)| n.act_basis_path(b)).collect();
        for k in &kernel {
            let mut block = vec![vec![0u32; nunk]; n.dim(w)];
            for (c, &kc) in k.iter().enumerate() {
                if kc == 0 {
                    continue;
                }
                let g = cover.cols[w][c].0;
                let act = &actions[c];
                for r in 0..n.dim(w) {
                    for s in 0..act.cols() {
                        let x = act.get(r, s);
                        if x != 0 {
                            let slot = &mut block[r][unknown_offset[g] + s];
                            *slot = f.mul_add(*slot, x, kc);
                        }
                    }
                }
            }
            eq_rows.extend(block.into_iter().filter(|row| row.iter().any(|&x| x != 0)));
        }
    }
    let solutions: Vec<Vec<u32>> = if nunk == 0 {
        Vec::new()
    } else if eq_rows.is_empty() {
        (0..nunk)
            .map(|i| {
                let mut e = vec![0; nunk];
                e[i] = 1;
                e
            })
            .collect()
    } else {
        Matrix::from_row_vectors(f, nunk, &eq_rows).kernel()
    };

    // f_w = F_w · E_w⁻¹ over a column basis of each epi_w
    let mut pivots = Vec::new();
    let mut e_inv = Vec::new();
    let mut pivot_actions = Vec::new();
    for w in 0..pres.num_vertices() {
        let epi = &cover.epi[w];
        if m.dim(w) == 0 {
            pivots.push(Vec::new());
            e_inv.push(Matrix::zeros(f, 0, 0));
            pivot_actions.push(Vec::new());
            continue;
        }
        let piv = epi.rref().pivots;
        let e = epi.select_cols(&piv);
        e_inv.push(e.inverse().expect("pivot columns of a surjection form a basis"));
        pivot_actions.push(
            piv.iter()
                .map(|&c| n.act_basis_path(&cover.cols[w][c].1))
                .collect::<Vec<_>>(),
        );
        pivots.push(piv);
    }
    let basis = solutions
        .iter()
        .map(|x| {
            HomMap(
                (0..pres.num_vertices())
                    .map(|w| {
                        if m.dim(w) == 0 {
                            return Matrix::zeros(f, n.dim(w), 0);
                        }
                        let cols: Vec<Vec<u32>> = pivots[w]
                            .iter()
                            .zip(&pivot_actions[w])
                            .map(|(&c, act)| {
                                let g = cover.cols[w][c].0;
                                let off = unknown_offset[g];
                                act.mul_vec(&x[off..off + n.dim(gens[g].0)])
                            })
                            .collect();
                        Matrix::from_col_vectors(f, n.dim(w), &cols).mul(&e_inv[w])
                    })
                    .collect(),
            )
        })
        .collect();
    Ok(HomSpace {
        source: m.clone(),
        target: n.clone(),
        basis,
    })
}

/// Basis of `Hom_Λ(M, N)` by solving the commutation equations
/// `f_t · M_a = N_a · f_s` for all vertex matrices at once. Slower; kept as
/// an independent oracle for [`hom_space`].
pub fn hom_space_by_commutation(m: &Representation, n: &Representation) -> Result<HomSpace, HomError> {
    check_compatible(m, n)?;
    let f = m.field();
    let pres = m.presentation();
    let nv = pres.num_vertices();
    let mut offs = Vec::with_capacity(nv);
    let mut nunk = 0;
    for v in 0..nv {
        offs.push(nunk);
        nunk += n.dim(v) * m.dim(v);
    }
    let var = |v: usize, r: usize, c: usize| offs[v] + r * m.dim(v) + c;
    let mut rows = Vec::new();
    for a in 0..pres.num_arrows() {
        let (s, t) = (pres.source(a), pres.target(a));
        let ma = m.arrow(a);
        let na = n.arrow(a);
        // (f_t M_a)[i][j] - (N_a f_s)[i][j] = 0
        for i in 0..n.dim(t) {
            for j in 0..m.dim(s) {
                let mut row = vec![0u32; nunk];
                for k in 0..m.dim(t) {
                    let x = ma.get(k, j);
                    if x != 0 {
                        row[var(t, i, k)] = f.add(row[var(t, i, k)], x);
                    }
                }
                for k in 0..n.dim(s) {
                    let x = na.get(i, k);
                    if x != 0 {
                        row[var(s, k, j)] = f.sub(row[var(s, k, j)], x);
                    }
                }
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
            }
        }
    }
    let sols = if nunk == 0 {
        Vec::new()
    } else if rows.is_empty() {
        Matrix::zeros(f, 1, nunk).kernel()
    } else {
        Matrix::from_row_vectors(f, nunk, &rows).kernel()
    };
    let basis = sols
        .into_iter()
        .map(|x| {
            HomMap(
                (0..nv)
                    .map(|v| Matrix::from_fn(f, n.dim(v), m.dim(v), |r, c| x[var(v, r, c)]))
                    .collect(),
            )
        })
        .collect();
    Ok(HomSpace {
        source: m.clone(),
        target: n.clone(),
        basis,
    })
}

/// Basis (in [`HomMap::flatten`] coordinates, echelonized) of the maps in
/// `Hom(M, N)` factoring through a projective: the span of `π ∘ g` for
/// `g ∈ Hom(M, P(N))` with `π: P(N) → N` the projective cover.
pub fn proj_factoring_subspace(h: &HomSpace) -> Result<Vec<HomMap>, HomError> {
    let f = h.source.field();
    let cover = projective_cover(&h.target);
    let through = hom_space(&h.source, &cover.cover)?;
    let pi = HomMap(cover.epi.clone());
    let images: Vec<HomMap> = through.basis.iter().map(|g| pi.compose(g)).collect();
    Ok(span_homs(f, &h.source, &h.target, &images))
}

/// Echelonized basis of the span of a set of maps.
pub fn span_homs(f: Fp, source: &Representation, target: &Representation, maps: &[HomMap]) -> Vec<HomMap> {
    let len: usize = (0..source.dims().len()).map(|v| source.dim(v) * target.dim(v)).sum();
    let flat: Vec<Vec<u32>> = maps.iter().map(HomMap::flatten).collect();
    crate::coeff::matrix::span_basis(f, len, &flat)
        .into_iter()
        .map(|x| unflatten(f, source, target, &x))
        .collect()
}

pub fn unflatten(f: Fp, source: &Representation, target: &Representation, x: &[u32]) -> HomMap {
    let mut at = 0;
    HomMap(
        (0..source.dims().len())
            .map(|v| {
                let (r, c) = (target.dim(v), source.dim(v));
                let m = Matrix::from_fn(f, r, c, |i, j| x[at + i * c + j]);
                at += r * c;
                m
            })
            .collect(),
    )
}

/// Whether `x` lies in the span of `basis`.
pub fn in_span(f: Fp, basis: &[HomMap], x: &HomMap) -> bool {
    let len = x.flatten().len();
    if len == 0 {
        return true;
    }
    let mut vecs: Vec<Vec<u32>> = basis.iter().map(HomMap::flatten).collect();
    let r = crate::coeff::matrix::span_rank(f, len, &vecs);
    vecs.push(x.flatten());
    crate::coeff::matrix::span_rank(f, len, &vecs) == r
}

/// `dim Hom(M,N) − dim PHom(M,N)`.
pub fn stable_hom_dim(m: &Representation, n: &Representation) -> Result<usize, HomError> {
    let h = hom_space(m, n)?;
    let p = proj_factoring_subspace(&h)?;
    Ok(h.dim() - p.len())
}

/// Dimension of the stable endomorphism ring.
pub fn stable_end_dim(m: &Representation) -> Result<usize, HomError> {
    stable_hom_dim(m, m)
}
