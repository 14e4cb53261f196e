use crate::coeff::matrix::{complement_coordinates, span_basis};
use crate::coeff::Matrix;
use crate::presentation::BasisPath;
use crate::repbuild::Representation;

/// A projective cover `π: ⊕_g P_{v_g} → M`.
#[derive(Debug, Clone)]
pub struct ProjectiveCover {
    /// Top generators: vertex and vector in `M_v`.
    pub gens: Vec<(usize, Vec<u32>)>,
    /// Per vertex `w`, the cover's basis at `w`: (generator, path) pairs.
    pub cols: Vec<Vec<(usize, BasisPath)>>,
    /// Per vertex, the matrix of `π_w` (`dim M_w × dim P_w`).
    pub epi: Vec<Matrix>,
    /// The cover as a representation, basis aligned with `cols`.
    pub cover: Representation,
}

impl ProjectiveCover {
    /// Multiplicity of each `P_v` in the cover.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.epi.len()];
        for (v, _) in &self.gens {
            m[*v] += 1;
        }
        m
    }
}

/// Standard basis vectors completing `rad M` at each vertex.
pub fn top_generators(m: &Representation) -> Vec<(usize, Vec<u32>)> {
    let pres = m.presentation();
    let f = m.field();
    let mut gens = Vec::new();
    for v in 0..pres.num_vertices() {
        let n = m.dim(v);
        if n == 0 {
            continue;
        }
        let mut images = Vec::new();
        for a in 0..pres.num_arrows() {
            if pres.target(a) == v {
                images.extend(m.arrow(a).column_space());
            }
        }
        let rad = span_basis(f, n, &images);
        for i in complement_coordinates(f, n, &rad) {
            let mut x = vec![0; n];
            x[i] = 1;
            gens.push((v, x));
        }
    }
    gens
}

pub fn projective_cover(m: &Representation) -> ProjectiveCover {
    let pres = m.presentation();
    let f = m.field();
    let gens = top_generators(m);
    let nv = pres.num_vertices();
    let mut cols: Vec<Vec<(usize, BasisPath)>> = vec![Vec::new(); nv];
    for (g, (v, _)) in gens.iter().enumerate() {
        for w in 0..nv {
            for b in pres.paths_between(*v, w) {
                cols[w].push((g, b));
            }
        }
    }
    let epi: Vec<Matrix> = (0..nv)
        .map(|w| {
            let vecs: Vec<Vec<u32>> = cols[w]
                .iter()
                .map(|(g, b)| m.act_basis_path(b).mul_vec(&gens[*g].1))
                .collect();
            Matrix::from_col_vectors(f, m.dim(w), &vecs)
        })
        .collect();
    let mut cover = Representation::zero(pres, f);
    for (v, _) in &gens {
        cover = cover
            .direct_sum(&Representation::projective(pres, f, *v).expect("valid vertex"))
            .expect("same algebra");
    }
    ProjectiveCover { gens, cols, epi, cover }
}

/// Split off projective summands. A vector `x ∈ M_v` with `ω_v x ≠ 0` (the
/// socle path of `P_v`) generates a copy of `P_v`, which is injective and so
/// a direct summand; the quotient by it is isomorphic to a complement.
/// Returns the projective-free part and the vertices of the removed summands.
pub fn strip_projectives(m: &Representation) -> (Representation, Vec<usize>) {
    let pres = m.presentation().clone();
    let mut cur = m.clone();
    let mut removed = Vec::new();
    'outer: loop {
        for v in 0..pres.num_vertices() {
            if cur.dim(v) == 0 {
                continue;
            }
            let omega = cur.act_basis_path(&pres.socle_path(v));
            if omega.is_zero() {
                continue;
            }
            let j = (0..omega.cols())
                .find(|&j| omega.col(j).iter().any(|&x| x != 0))
                .unwrap();
            let mut x = vec![0; cur.dim(v)];
            x[j] = 1;
            let sub: Vec<Vec<Vec<u32>>> = (0..pres.num_vertices())
                .map(|w| {
                    let vecs: Vec<Vec<u32>> = pres
                        .paths_between(v, w)
                        .iter()
                        .map(|b| cur.act_basis_path(b).mul_vec(&x))
                        .collect();
                    span_basis(cur.field(), cur.dim(w), &vecs)
                })
                .collect();
            cur = cur.quotient(&sub).0;
            removed.push(v);
            continue 'outer;
        }
        break;
    }
    (cur, removed)
}

/// Whether `M` has no projective direct summand.
pub fn is_projective_free(m: &Representation) -> bool {
    let pres = m.presentation();
    (0..pres.num_vertices()).all(|v| m.dim(v) == 0 || m.act_basis_path(&pres.socle_path(v)).is_zero())
}

/// `Ω(M)`: the kernel of the projective cover of the projective-free part of `M`.
pub fn syzygy(m: &Representation) -> Representation {
    let (core, _) = strip_projectives(m);
    syzygy_of_projective_free(&core)
}

/// The kernel of the projective cover, without stripping first.
pub fn syzygy_of_projective_free(m: &Representation) -> Representation {
    let cover = projective_cover(m);
    let kernel: Vec<Vec<Vec<u32>>> = cover
        .epi
        .iter()
        .map(|e| if e.cols() == 0 { Vec::new() } else { e.kernel() })
        .collect();
    cover.cover.subrepresentation(&kernel)
}
