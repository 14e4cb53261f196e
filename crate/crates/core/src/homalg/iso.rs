use crate::coeff::Fp;
use crate::repbuild::Representation;

use super::hom::{hom_space, in_span, span_homs, HomMap, HomSpace};
use super::HomError;

/// Largest number of coefficient vectors an exhaustive search may visit.
pub const EXHAUSTIVE_LIMIT: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoVerdict {
    /// An invertible homomorphism `M → N`.
    Isomorphic(HomMap),
    /// A certified reason why no isomorphism exists.
    NotIsomorphic(String),
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }
}

/// Certify that `End(M)` is local: returns a basis of its radical `J`
/// (the maps `φ − c·id` with `φ − c·id` nilpotent), after checking that `J`
/// is a nilpotent subalgebra of codimension one. `None` if the check fails.
pub fn local_radical(m: &Representation, end: &HomSpace) -> Option<Vec<HomMap>> {
    let f = m.field();
    let id = HomMap::identity(m);
    let mut rad = Vec::new();
    for phi in &end.basis {
        let c = (0..f.p()).find(|&c| phi.sub(&id.scale(c)).is_nilpotent())?;
        rad.push(phi.sub(&id.scale(c)));
    }
    let j = span_homs(f, m, m, &rad);
    if j.len() + 1 != end.dim() {
        return None;
    }
    // J^k → 0
    let mut power = j.clone();
    for _ in 0..=m.total_dim() {
        if power.is_empty() {
            return Some(j);
        }
        let products: Vec<HomMap> = power.iter().flat_map(|a| j.iter().map(move |b| a.compose(b))).collect();
        let next = span_homs(f, m, m, &products);
        if next.len() >= power.len() {
            return None;
        }
        power = next;
    }
    None
}

/// Decide whether `M ≅ N`.
///
/// Order of checks: dimension vectors; ranks of every basis path; the
/// dimensions of `End M`, `Hom(M,N)`, `Hom(N,M)`; if `End M` is certified
/// local, the pairing `Hom(N,M) × Hom(M,N) → End M / J` decides outright;
/// otherwise single basis elements, pairs, and exhaustive enumeration.
pub fn iso_test(m: &Representation, n: &Representation) -> Result<IsoVerdict, HomError> {
    if m.presentation() != n.presentation() || m.field() != n.field() {
        return Err(HomError::Mismatch("modules over different algebras".into()));
    }
    if m.dims() != n.dims() {
        return Ok(IsoVerdict::NotIsomorphic(format!(
            "dimension vectors differ: {:?} vs {:?}",
            m.dims(),
            n.dims()
        )));
    }
    if m.total_dim() == 0 {
        return Ok(IsoVerdict::Isomorphic(HomMap::identity(m)));
    }
    let pres = m.presentation();
    for b in pres.all_paths() {
        let (rm, rn) = (m.act_basis_path(&b).rank(), n.act_basis_path(&b).rank());
        if rm != rn {
            return Ok(IsoVerdict::NotIsomorphic(format!(
                "path {} acts with rank {rm} vs {rn}",
                pres.path_name(&b)
            )));
        }
    }
    let end = hom_space(m, m)?;
    let h = hom_space(m, n)?;
    let g = hom_space(n, m)?;
    if h.dim() != end.dim() || g.dim() != end.dim() {
        return Ok(IsoVerdict::NotIsomorphic(format!(
            "dim End = {}, dim Hom(M,N) = {}, dim Hom(N,M) = {}",
            end.dim(),
            h.dim(),
            g.dim()
        )));
    }
    if let Some(j) = local_radical(m, &end) {
        for fi in &h.basis {
            for gj in &g.basis {
                if !in_span(m.field(), &j, &gj.compose(fi)) {
                    debug_assert!(fi.is_invertible());
                    return Ok(IsoVerdict::Isomorphic(fi.clone()));
                }
            }
        }
        return Ok(IsoVerdict::NotIsomorphic(
            "End(M) is local and every composite M -> N -> M lies in its radical".into(),
        ));
    }
    match find_invertible(m.field(), &h)? {
        Some(w) => Ok(IsoVerdict::Isomorphic(w)),
        None => Ok(IsoVerdict::NotIsomorphic(
            "exhaustive search found no invertible homomorphism".into(),
        )),
    }
}

/// Find an invertible element of a hom space: single basis elements, then
/// pairs `f_i + c f_j`, then every coefficient vector when there are at most
/// [`EXHAUSTIVE_LIMIT`] of them. `Ok(None)` only after an exhaustive search;
/// otherwise `Err(Inconclusive)`.
pub fn find_invertible(f: Fp, h: &HomSpace) -> Result<Option<HomMap>, HomError> {
    let k = h.dim();
    for b in &h.basis {
        if b.is_invertible() {
            return Ok(Some(b.clone()));
        }
    }
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            for c in f.units() {
                let mut x = h.basis[i].clone();
                x.add_scaled(&h.basis[j], c);
                if x.is_invertible() {
                    return Ok(Some(x));
                }
            }
        }
    }
    let total = (f.p() as u64).checked_pow(k as u32).filter(|&t| t <= EXHAUSTIVE_LIMIT);
    let Some(total) = total else {
        return Err(HomError::Inconclusive(format!(
            "hom space of dimension {k} over GF({}) too large to enumerate",
            f.p()
        )));
    };
    let p = f.p() as u64;
    let mut coeffs = vec![0u32; k];
    for mut idx in 0..total {
        for c in coeffs.iter_mut() {
            *c = (idx % p) as u32;
            idx /= p;
        }
        let x = h.combination(&coeffs);
        if x.is_invertible() {
            return Ok(Some(x));
        }
    }
    Ok(None)
}
