use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeff::matrix::span_basis;
use crate::coeff::{solve_linear, Fp, LocalAlgebra, Matrix, RMatrix, RingElem, RingSurjection, Solution};
use crate::repbuild::Representation;

use super::rrep::{first_violation, Lift, RRepresentation};
use super::DeformError;

/// The relations linearized at a Λ-module `V`:
/// `X ↦ (Σ_j after_j · X_{w_j} · before_j)` over the positions `j` of each
/// relation word (equal-path relations contribute `lhs − rhs`).
#[derive(Debug, Clone)]
pub struct Linearization {
    /// Per arrow, offset of its `rows × cols` block (row-major) in unknown space.
    pub arrow_offsets: Vec<usize>,
    /// Per relation, offset of its block in equation space and its shape.
    pub relation_blocks: Vec<(usize, usize, usize)>,
    pub matrix: Matrix,
}

impl Linearization {
    pub fn num_unknowns(&self) -> usize {
        self.matrix.cols()
    }

    /// `(relation, row, col)` of an equation coordinate.
    pub fn equation_position(&self, k: usize) -> (usize, usize, usize) {
        for (r, &(off, rows, cols)) in self.relation_blocks.iter().enumerate() {
            if k < off + rows * cols {
                let i = k - off;
                return (r, i / cols, i % cols);
            }
        }
        unreachable!("equation index in range")
    }
}

pub fn linearize(v: &Representation) -> Linearization {
    let pres = v.presentation();
    let f = v.field();
    let mut arrow_offsets = Vec::new();
    let mut n_unk = 0;
    for a in 0..pres.num_arrows() {
        arrow_offsets.push(n_unk);
        n_unk += v.dim(pres.target(a)) * v.dim(pres.source(a));
    }
    let mut relation_blocks = Vec::new();
    let mut n_eq = 0;
    // (arrow, sign, after, before) per relation
    let mut terms: Vec<Vec<(usize, u32, Matrix, Matrix)>> = Vec::new();
    for r in pres.relations() {
        let start = pres.source(r.lhs[0]);
        let end = pres.target(*r.lhs.last().unwrap());
        relation_blocks.push((n_eq, v.dim(end), v.dim(start)));
        n_eq += v.dim(end) * v.dim(start);
        let mut t = Vec::new();
        let mut push_word = |word: &[usize], sign: u32| {
            for j in 0..word.len() {
                let before = v.act_path(start, &word[..j]).expect("composable");
                let after = v.act_path(pres.target(word[j]), &word[j + 1..]).expect("composable");
                t.push((word[j], sign, after, before));
            }
        };
        push_word(&r.lhs, 1);
        if let Some(rhs) = &r.rhs {
            push_word(rhs, f.neg(1));
        }
        terms.push(t);
    }
    let mut matrix = Matrix::zeros(f, n_eq, n_unk);
    for (ri, t) in terms.iter().enumerate() {
        let (off, _, cols) = relation_blocks[ri];
        for (a, sign, after, before) in t {
            let (ar, ac) = (v.dim(pres.target(*a)), v.dim(pres.source(*a)));
            for x in 0..ar {
                for y in 0..ac {
                    let col = arrow_offsets[*a] + x * ac + y;
                    // after · E_{xy} · before = after[:, x] ⊗ before[y, :]
                    for i in 0..after.rows() {
                        let u = after.get(i, x);
                        if u == 0 {
                            continue;
                        }
                        for j in 0..before.cols() {
                            let w = before.get(y, j);
                            if w == 0 {
                                continue;
                            }
                            let row = off + i * cols + j;
                            let cur = matrix.get(row, col);
                            matrix.set(row, col, f.mul_add(cur, f.mul(*sign, u), w));
                        }
                    }
                }
            }
        }
    }
    Linearization {
        arrow_offsets,
        relation_blocks,
        matrix,
    }
}

/// The coboundary map `Y ↦ (Y_t A_a − A_a Y_s)_a` from `⊕_v End(V_v)`.
pub fn coboundary_matrix(v: &Representation, lin: &Linearization) -> Matrix {
    let pres = v.presentation();
    let f = v.field();
    let mut vert_offsets = Vec::new();
    let mut n = 0;
    for w in 0..pres.num_vertices() {
        vert_offsets.push(n);
        n += v.dim(w) * v.dim(w);
    }
    let mut m = Matrix::zeros(f, lin.num_unknowns(), n);
    for w in 0..pres.num_vertices() {
        let d = v.dim(w);
        for x in 0..d {
            for y in 0..d {
                let col = vert_offsets[w] + x * d + y;
                for a in 0..pres.num_arrows() {
                    let (s, t) = (pres.source(a), pres.target(a));
                    let am = v.arrow(a);
                    let ac = v.dim(s);
                    let off = lin.arrow_offsets[a];
                    if t == w {
                        // E_{xy} A: row x gets row y of A
                        for j in 0..ac {
                            let val = am.get(y, j);
                            let idx = off + x * ac + j;
                            m.set(idx, col, f.add(m.get(idx, col), val));
                        }
                    }
                    if s == w {
                        // −A E_{xy}: column y gets column x of A
                        for i in 0..v.dim(t) {
                            let val = am.get(i, x);
                            let idx = off + i * ac + y;
                            m.set(idx, col, f.sub(m.get(idx, col), val));
                        }
                    }
                }
            }
        }
    }
    m
}

/// Split a flat unknown vector into per-arrow matrices.
pub fn unflatten_arrows(v: &Representation, lin: &Linearization, x: &[u32]) -> Vec<Matrix> {
    let pres = v.presentation();
    (0..pres.num_arrows())
        .map(|a| {
            let (r, c) = (v.dim(pres.target(a)), v.dim(pres.source(a)));
            let off = lin.arrow_offsets[a];
            Matrix::from_fn(v.field(), r, c, |i, j| x[off + i * c + j])
        })
        .collect()
}

/// First-order deformations: cocycles `Z`, coboundaries `B`, `r = dim Z/B`.
#[derive(Debug, Clone)]
pub struct FirstOrder {
    pub r: usize,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    /// Representatives of a basis of `Z/B`, as per-arrow perturbations.
    pub classes: Vec<Vec<Matrix>>,
}

impl FirstOrder {
    /// `p^r`, saturating.
    pub fn count(&self, f: Fp) -> u64 {
        (f.p() as u64).saturating_pow(self.r as u32)
    }
}

/// Linearized computation of the tangent space.
pub fn first_order_classes(v: &Representation) -> FirstOrder {
    let f = v.field();
    let lin = linearize(v);
    let z = lin.matrix.kernel();
    let b = span_basis(f, lin.num_unknowns(), &coboundary_matrix(v, &lin).column_space());
    let mut acc = b.clone();
    let mut classes = Vec::new();
    let mut rank = acc.len();
    for x in &z {
        acc.push(x.clone());
        let nr = crate::coeff::matrix::span_rank(f, lin.num_unknowns(), &acc);
        if nr > rank {
            rank = nr;
            classes.push(unflatten_arrows(v, &lin, x));
        } else {
            acc.pop();
        }
    }
    FirstOrder {
        r: z.len() - b.len(),
        cocycle_dim: z.len(),
        coboundary_dim: b.len(),
        classes,
    }
}

/// Count of first-order deformations by enumeration over `k[ε]`: every
/// perturbation `A + εX` is tested against the relations with ring
/// arithmetic, and classes are counted as `|Z| / |B|` where `B` is the set
/// of perturbations produced by conjugating with `I + εY`.
pub fn first_order_exhaustive(v: &Representation, limit: u64) -> Result<u64, DeformError> {
    let pres = v.presentation();
    let f = v.field();
    let p = f.p() as u64;
    let ring = LocalAlgebra::truncated_power_series(f, 2);
    let eps = ring.var(0);
    let shapes: Vec<(usize, usize)> = (0..pres.num_arrows())
        .map(|a| (v.dim(pres.target(a)), v.dim(pres.source(a))))
        .collect();
    let n_unk: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let n_conj: usize = v.dims().iter().map(|d| d * d).sum();
    let too_large = |n: usize| p.checked_pow(n as u32).is_none_or(|t| t > limit);
    if too_large(n_unk) || too_large(n_conj) {
        return Err(DeformError::TooLarge(format!(
            "{n_unk} perturbation and {n_conj} conjugation coordinates over GF({p})"
        )));
    }
    let digits = |mut idx: u64, n: usize| -> Vec<u32> {
        (0..n)
            .map(|_| {
                let d = (idx % p) as u32;
                idx /= p;
                d
            })
            .collect()
    };
    let eps_part = |m: &RMatrix| m.component(1).clone();
    let mut z = 0u64;
    for idx in 0..p.pow(n_unk as u32) {
        let x = digits(idx, n_unk);
        let mut at = 0;
        let arrows: Vec<RMatrix> = shapes
            .iter()
            .enumerate()
            .map(|(a, &(r, c))| {
                let xa = Matrix::from_fn(f, r, c, |i, j| x[at + i * c + j]);
                at += r * c;
                RMatrix::from_field_matrix(&ring, v.arrow(a)).add(&RMatrix::from_field_matrix(&ring, &xa).scale(&eps))
            })
            .collect();
        let rep = RRepresentation::new(pres, &ring, v.dims().to_vec(), arrows);
        if first_violation(&rep).is_none() {
            z += 1;
        }
    }
    let mut images: HashSet<Vec<Matrix>> = HashSet::new();
    for idx in 0..p.pow(n_conj as u32) {
        let y = digits(idx, n_conj);
        let mut at = 0;
        let conj: Vec<(RMatrix, RMatrix)> = v
            .dims()
            .iter()
            .map(|&d| {
                let ym = Matrix::from_fn(f, d, d, |i, j| y[at + i * d + j]);
                at += d * d;
                let e = RMatrix::from_field_matrix(&ring, &ym).scale(&eps);
                let id = RMatrix::identity(&ring, d);
                (id.add(&e), id.sub(&e))
            })
            .collect();
        let img: Vec<Matrix> = (0..pres.num_arrows())
            .map(|a| {
                let (s, t) = (pres.source(a), pres.target(a));
                let m = conj[t]
                    .0
                    .mul(&RMatrix::from_field_matrix(&ring, v.arrow(a)))
                    .mul(&conj[s].1);
                eps_part(&m)
            })
            .collect();
        images.insert(img);
    }
    let b = images.len() as u64;
    debug_assert_eq!(z % b, 0);
    Ok(z / b)
}

/// A failed extension: the relation system is inconsistent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    /// Ring at which the extension failed (source of the failing small step).
    pub ring: String,
    /// First relation entry in the certificate's support.
    pub relation: String,
    pub row: usize,
    pub col: usize,
    /// `lhs − rhs` at that entry for the naive lift, an element of the kernel.
    pub residue: String,
    /// `residue` scaled to leading coefficient 1.
    pub obstruction: String,
    /// Left-null certificate: `(relation, row, col, coefficient)` with
    /// `Σ coefficient · equation = 0` on the corrections but not on the residue.
    pub certificate: Vec<(String, usize, usize, u32)>,
}

#[derive(Debug, Clone)]
pub enum ExtendOutcome {
    Extended(Lift),
    NoExtension(Obstruction),
}

impl ExtendOutcome {
    pub fn is_extended(&self) -> bool {
        matches!(self, ExtendOutcome::Extended(_))
    }
}

/// Coordinates of `x` in the kernel basis.
fn kernel_coords(kernel: &Matrix, x: &RingElem) -> Vec<u32> {
    match solve_linear(kernel, &x.0) {
        Solution::Consistent { particular, .. } => particular,
        Solution::Inconsistent { .. } => unreachable!("residue lies in the kernel of a lift's reduction"),
    }
}

/// The linear system of one small step: the section-lifted representation,
/// the linearization at the base, the kernel basis, and per kernel
/// direction the negated residue coordinates in equation space.
struct StepSystem {
    lifted: RRepresentation,
    base: Representation,
    lin: Linearization,
    kernel: Vec<RingElem>,
    residues: Vec<RMatrix>,
    rhs: Vec<Vec<u32>>,
}

fn step_system(rep: &RRepresentation, s: &RingSurjection) -> StepSystem {
    let pres = rep.presentation();
    let src = &s.source;
    let f = src.field();
    let sec = s.section();
    let sec_matrix = Matrix::from_col_vectors(f, src.dim(), &sec.iter().map(|x| x.0.clone()).collect::<Vec<_>>());
    let naive: Vec<RMatrix> = rep.arrows().iter().map(|a| a.map_ring(src, &sec_matrix)).collect();
    let lifted = RRepresentation::new(pres, src, rep.dims().to_vec(), naive);
    let kernel = s.kernel();
    let kmat = Matrix::from_col_vectors(f, src.dim(), &kernel.iter().map(|x| x.0.clone()).collect::<Vec<_>>());
    let base = rep.reduce_mod_m();
    let lin = linearize(&base);
    let residues = lifted.relation_residues();
    let n_eq = lin.matrix.rows();
    let mut rhs = vec![vec![0u32; n_eq]; kernel.len()];
    for (ri, res) in residues.iter().enumerate() {
        let (off, _, cols) = lin.relation_blocks[ri];
        for i in 0..res.rows() {
            for j in 0..res.cols() {
                let x = res.get(i, j);
                if x.is_zero() {
                    continue;
                }
                for (l, c) in kernel_coords(&kmat, &x).into_iter().enumerate() {
                    rhs[l][off + i * cols + j] = f.neg(c);
                }
            }
        }
    }
    StepSystem {
        lifted,
        base,
        lin,
        kernel,
        residues,
        rhs,
    }
}

/// Extend a representation over `s.target` along one small extension `s`.
#[allow(clippy::result_large_err)]
fn extend_one(rep: &RRepresentation, s: &RingSurjection) -> Result<RRepresentation, Obstruction> {
    let pres = rep.presentation();
    let src = &s.source;
    let StepSystem {
        mut lifted,
        base,
        lin,
        kernel,
        residues,
        rhs,
    } = step_system(rep, s);
    let mut corrections: Vec<Vec<u32>> = Vec::new();
    for b in &rhs {
        match solve_linear(&lin.matrix, b) {
            Solution::Consistent { particular, .. } => corrections.push(particular),
            Solution::Inconsistent { certificate, .. } => {
                let support: Vec<(String, usize, usize, u32)> = certificate
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(k, &c)| {
                        let (r, i, j) = lin.equation_position(k);
                        (pres.relation_name(&pres.relations()[r]), i, j, c)
                    })
                    .collect();
                let (k0, _) = certificate
                    .iter()
                    .enumerate()
                    .find(|(k, &c)| c != 0 && b[*k] != 0)
                    .expect("certificate meets residue");
                let (r, i, j) = lin.equation_position(k0);
                let x = residues[r].get(i, j);
                return Err(Obstruction {
                    ring: src.name().to_string(),
                    relation: pres.relation_name(&pres.relations()[r]),
                    row: i,
                    col: j,
                    residue: src.format(&x),
                    obstruction: src.format(&src.normalize_leading(&x)),
                    certificate: support,
                });
            }
        }
    }
    for (l, x) in corrections.iter().enumerate() {
        let kappa = &kernel[l];
        for (a, m) in unflatten_arrows(&base, &lin, x).into_iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            let delta = RMatrix::from_field_matrix(src, &m).scale(kappa);
            let updated = lifted.arrow(a).add(&delta);
            lifted.set_arrow(a, updated);
        }
    }
    debug_assert!(first_violation(&lifted).is_none());
    Ok(lifted)
}

/// Search for a lift over `proj.source` reducing to `l` along `proj`.
/// The surjection is decomposed into small extensions; at each step the
/// corrections solve one linear system, and an inconsistent system yields
/// an [`Obstruction`] with its certificate.
pub fn extend_search(l: &Lift, target_spec: &str, proj: &RingSurjection) -> Result<ExtendOutcome, DeformError> {
    if proj.target.dim() != l.ring().dim() || proj.target.name() != l.ring().name() {
        return Err(DeformError::Mismatch(format!(
            "surjection lands in {}, lift is over {}",
            proj.target.name(),
            l.ring().name()
        )));
    }
    let steps = proj
        .small_steps()
        .map_err(|e| DeformError::NotSmallExtension(e.to_string()))?;
    // steps run from the top ring down; extend from the bottom up
    let mut cur = l.rep.clone();
    for s in steps.iter().rev() {
        if !s.is_small_extension() {
            return Err(DeformError::NotSmallExtension(format!(
                "{} -> {}",
                s.source.name(),
                s.target.name()
            )));
        }
        let retarget = RRepresentation::new(
            cur.presentation(),
            &s.target,
            cur.dims().to_vec(),
            cur.arrows().to_vec(),
        );
        match extend_one(&retarget, s) {
            Ok(next) => cur = next,
            Err(o) => return Ok(ExtendOutcome::NoExtension(o)),
        }
    }
    let rep = RRepresentation::new(
        cur.presentation(),
        &proj.source,
        cur.dims().to_vec(),
        cur.arrows().to_vec(),
    );
    Ok(ExtendOutcome::Extended(Lift {
        ring_spec: target_spec.to_string(),
        rep,
        base_spec: l.base_spec.clone(),
        base: l.base.clone(),
        reduction: l.reduction.clone(),
    }))
}

/// Re-check an obstruction certificate for extending `l` along the single
/// small extension `s`: the certificate must annihilate every correction
/// direction and pair nontrivially with the residue.
pub fn check_obstruction(l: &Lift, s: &RingSurjection, o: &Obstruction) -> Result<bool, DeformError> {
    if !s.is_small_extension() {
        return Err(DeformError::NotSmallExtension(format!(
            "{} -> {}",
            s.source.name(),
            s.target.name()
        )));
    }
    if s.target.name() != l.ring().name() || s.source.name() != o.ring {
        return Ok(false);
    }
    let pres = l.rep.presentation();
    let retarget = RRepresentation::new(pres, &s.target, l.rep.dims().to_vec(), l.rep.arrows().to_vec());
    let sys = step_system(&retarget, s);
    let f = s.source.field();
    let mut y = vec![0u32; sys.lin.matrix.rows()];
    for (name, i, j, c) in &o.certificate {
        let Some(r) = pres.relations().iter().position(|r| &pres.relation_name(r) == name) else {
            return Ok(false);
        };
        let (off, rows, cols) = sys.lin.relation_blocks[r];
        if *i >= rows || *j >= cols || *c == 0 || *c >= f.p() {
            return Ok(false);
        }
        y[off + i * cols + j] = *c;
    }
    let dot = |v: &[u32]| y.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
    let annihilates = sys.lin.matrix.transpose().mul_vec(&y).iter().all(|&x| x == 0);
    let pairs = sys.rhs.iter().any(|b| dot(b) != 0);
    Ok(annihilates && pairs)
}

/// Count the matrix tuples over `s.source` reducing exactly to the lift's
/// matrices along a small extension `s` and satisfying every relation.
/// Enumerates one kernel element per matrix entry.
pub fn exhaustive_extension_count(l: &Lift, s: &RingSurjection, limit: u64) -> Result<u64, DeformError> {
    let pres = l.rep.presentation();
    let src: &Arc<LocalAlgebra> = &s.source;
    let f = src.field();
    let p = f.p() as u64;
    let kernel = s.kernel();
    let sec = s.section();
    let sec_matrix = Matrix::from_col_vectors(f, src.dim(), &sec.iter().map(|x| x.0.clone()).collect::<Vec<_>>());
    let naive: Vec<RMatrix> = l.rep.arrows().iter().map(|a| a.map_ring(src, &sec_matrix)).collect();
    let entries: Vec<(usize, usize, usize)> = naive
        .iter()
        .enumerate()
        .flat_map(|(a, m)| (0..m.rows()).flat_map(move |i| (0..m.cols()).map(move |j| (a, i, j))))
        .collect();
    let n = entries.len() * kernel.len();
    let total = p.checked_pow(n as u32).filter(|&t| t <= limit).ok_or_else(|| {
        DeformError::TooLarge(format!(
            "{} entries with a {}-dimensional kernel over GF({p})",
            entries.len(),
            kernel.len()
        ))
    })?;
    let mut count = 0;
    for mut idx in 0..total {
        let mut arrows = naive.clone();
        for &(a, i, j) in &entries {
            let mut x = arrows[a].get(i, j);
            for k in &kernel {
                let c = (idx % p) as u32;
                idx /= p;
                if c != 0 {
                    x = src.add(&x, &src.scale(k, c));
                }
            }
            arrows[a].set(i, j, &x);
        }
        let rep = RRepresentation::new(pres, src, l.rep.dims().to_vec(), arrows);
        if first_violation(&rep).is_none() {
            count += 1;
        }
    }
    Ok(count)
}
