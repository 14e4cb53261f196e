use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::field::Fp;
use super::matrix::{solve_linear, Matrix, Solution};
use super::ringspec::parse_ring_spec;
use super::CoeffError;

pub const DEFAULT_DEGREE_CAP: u32 = 8;

/// A finite-dimensional commutative local GF(p)-algebra with residue
/// field GF(p), given by a multiplication table on a basis whose first
/// element is the unit and whose remaining elements span the maximal ideal.
#[derive(Clone)]
pub struct LocalAlgebra {
    name: String,
    field: Fp,
    vars: Vec<String>,
    basis_labels: Vec<String>,
    /// Monomial exponents of each basis element, when the basis is monomial.
    basis_exps: Option<Vec<Vec<u32>>>,
    /// `table[a * d + b]` = sparse coordinates of `basis[a] * basis[b]`.
    table: Vec<Vec<(usize, u32)>>,
    /// Normal forms of monomials of degree < `nil_degree` (monomial bases only).
    monomial_nf: HashMap<Vec<u32>, Vec<u32>>,
    /// Smallest N with m^N = 0.
    nil_degree: u32,
}

/// An element of a [`LocalAlgebra`], as coordinates in its basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElem(pub Vec<u32>);

impl RingElem {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

fn monomials_up_to(nvars: usize, max_deg: u32) -> Vec<Vec<u32>> {
    // degree ascending; inside a degree, higher powers of earlier variables first
    let mut out = Vec::new();
    for d in 0..=max_deg {
        match nvars {
            0 => {
                if d == 0 {
                    out.push(vec![]);
                }
            }
            1 => out.push(vec![d]),
            2 => {
                for a in (0..=d).rev() {
                    out.push(vec![a, d - a]);
                }
            }
            _ => unreachable!("at most two variables"),
        }
    }
    out
}

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

fn monomial_label(vars: &[String], e: &[u32]) -> String {
    let mut s = String::new();
    for (v, &k) in vars.iter().zip(e) {
        match k {
            0 => {}
            1 => s.push_str(v),
            _ => s.push_str(&format!("{v}^{k}")),
        }
    }
    if s.is_empty() {
        "1".to_string()
    } else {
        s
    }
}

impl LocalAlgebra {
    /// Build the quotient algebra from a ring spec with the default cap.
    pub fn from_spec(spec: &str, field: Fp) -> Result<Arc<Self>, CoeffError> {
        Self::from_spec_with_cap(spec, field, DEFAULT_DEGREE_CAP)
    }

    /// `k[t]/(t^n)`.
    pub fn truncated_power_series(field: Fp, n: u32) -> Arc<Self> {
        Self::from_spec(&format!("k[t]/(t^{n})"), field).expect("truncated polynomial ring")
    }

    /// The residue field GF(p) as a one-dimensional local algebra.
    pub fn residue_field(field: Fp) -> Arc<Self> {
        Self::from_spec("k", field).expect("residue field")
    }

    pub fn from_spec_with_cap(spec: &str, field: Fp, cap: u32) -> Result<Arc<Self>, CoeffError> {
        let pres = parse_ring_spec(spec, &field)?;
        let nvars = pres.vars.len();
        let monos = monomials_up_to(nvars, cap);
        let index: HashMap<Vec<u32>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let n = monos.len();
        // column order: reverse of the basis order, so leading terms are the
        // high-degree / late-variable monomials
        let col_of = |i: usize| n - 1 - i;

        let build_rows = |truncate: bool| -> Vec<Vec<u32>> {
            let mut rows = Vec::new();
            for g in &pres.generators {
                if g.is_empty() {
                    continue;
                }
                let gdeg = g.keys().map(|e| degree(e)).max().unwrap_or(0);
                let low = g.keys().map(|e| degree(e)).min().unwrap_or(0);
                for m in &monos {
                    let md = degree(m);
                    if !truncate && md + gdeg > cap {
                        continue;
                    }
                    if truncate && md + low > cap {
                        continue;
                    }
                    let mut row = vec![0u32; n];
                    for (e, &c) in g {
                        let prod: Vec<u32> = e.iter().zip(m).map(|(a, b)| a + b).collect();
                        if let Some(&i) = index.get(&prod) {
                            row[col_of(i)] = field.add(row[col_of(i)], c);
                        }
                    }
                    if row.iter().any(|&x| x != 0) {
                        rows.push(row);
                    }
                }
            }
            rows
        };

        let exact = build_rows(false);
        let reducer = Reducer::new(field, n, &exact);
        let in_ideal = |r: &Reducer, m: &Vec<u32>| {
            let mut v = vec![0u32; n];
            v[col_of(index[m])] = 1;
            r.normal_form(v).iter().all(|&x| x == 0)
        };

        let nil = (0..=cap).find(|&d| monos.iter().filter(|m| degree(m) == d).all(|m| in_ideal(&reducer, m)));
        let Some(nil) = nil else {
            let trunc = Reducer::new(field, n, &build_rows(true));
            let finite_in_series =
                (0..=cap).any(|d| monos.iter().filter(|m| degree(m) == d).all(|m| in_ideal(&trunc, m)));
            return Err(if finite_in_series {
                CoeffError::NonLocal(spec.to_string())
            } else {
                CoeffError::InfiniteWithinCap {
                    spec: spec.to_string(),
                    cap,
                }
            });
        };
        if nil == 0 {
            return Err(CoeffError::NonLocal(format!("{spec} (unit ideal)")));
        }

        // standard monomials below the nilpotency degree
        let basis_exps: Vec<Vec<u32>> = monos
            .iter()
            .filter(|m| degree(m) < nil && !reducer.is_pivot(col_of(index[*m])))
            .cloned()
            .collect();
        let d = basis_exps.len();
        let basis_index: HashMap<Vec<u32>, usize> =
            basis_exps.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();

        let mut monomial_nf = HashMap::new();
        for m in monos.iter().filter(|m| degree(m) < nil) {
            let mut v = vec![0u32; n];
            v[col_of(index[m])] = 1;
            let nf = reducer.normal_form(v);
            let mut coords = vec![0u32; d];
            for (e, &bi) in &basis_index {
                coords[bi] = nf[col_of(index[e])];
            }
            monomial_nf.insert(m.clone(), coords);
        }

        let mut table = Vec::with_capacity(d * d);
        for a in &basis_exps {
            for b in &basis_exps {
                let prod: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let coords = if degree(&prod) >= nil {
                    vec![0u32; d]
                } else {
                    monomial_nf[&prod].clone()
                };
                table.push(
                    coords
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (i, c))
                        .collect(),
                );
            }
        }

        let basis_labels = basis_exps.iter().map(|e| monomial_label(&pres.vars, e)).collect();
        let alg = LocalAlgebra {
            name: spec.trim().to_string(),
            field,
            vars: pres.vars,
            basis_labels,
            basis_exps: Some(basis_exps),
            table,
            monomial_nf,
            nil_degree: nil,
        };
        alg.check_local()?;
        Ok(Arc::new(alg))
    }

    fn check_local(&self) -> Result<(), CoeffError> {
        let d = self.dim();
        let one = self.one();
        for b in 0..d {
            if self.mul(&one, &self.basis(b)) != self.basis(b) {
                return Err(CoeffError::NonLocal(format!("{}: basis[0] is not a unit", self.name)));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn field(&self) -> Fp {
        self.field
    }
    pub fn dim(&self) -> usize {
        self.basis_labels.len()
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }
    pub fn basis_exponents(&self) -> Option<&[Vec<u32>]> {
        self.basis_exps.as_deref()
    }
    /// Indices of basis elements spanning the maximal ideal.
    pub fn max_ideal_indices(&self) -> Vec<usize> {
        (1..self.dim()).collect()
    }
    pub fn nilpotency_degree(&self) -> u32 {
        self.nil_degree
    }

    /// Sparse product of two basis elements.
    #[inline]
    pub fn table_entry(&self, a: usize, b: usize) -> &[(usize, u32)] {
        &self.table[a * self.dim() + b]
    }

    pub fn zero(&self) -> RingElem {
        RingElem(vec![0; self.dim()])
    }
    pub fn one(&self) -> RingElem {
        self.basis(0)
    }
    pub fn basis(&self, i: usize) -> RingElem {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        RingElem(v)
    }
    pub fn scalar(&self, c: u32) -> RingElem {
        let mut v = vec![0; self.dim()];
        v[0] = c % self.field.p();
        RingElem(v)
    }

    /// The class of a monomial given by exponents.
    pub fn monomial(&self, exps: &[u32]) -> RingElem {
        if degree(exps) >= self.nil_degree {
            return self.zero();
        }
        RingElem(
            self.monomial_nf
                .get(exps)
                .cloned()
                .unwrap_or_else(|| vec![0; self.dim()]),
        )
    }

    /// The class of the `i`-th variable.
    pub fn var(&self, i: usize) -> RingElem {
        let mut e = vec![0; self.vars.len()];
        e[i] = 1;
        self.monomial(&e)
    }

    pub fn var_by_name(&self, name: &str) -> Option<RingElem> {
        self.vars.iter().position(|v| v == name).map(|i| self.var(i))
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        RingElem(a.0.iter().zip(&b.0).map(|(&x, &y)| self.field.add(x, y)).collect())
    }
    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        RingElem(a.0.iter().zip(&b.0).map(|(&x, &y)| self.field.sub(x, y)).collect())
    }
    pub fn neg(&self, a: &RingElem) -> RingElem {
        RingElem(a.0.iter().map(|&x| self.field.neg(x)).collect())
    }
    pub fn scale(&self, a: &RingElem, c: u32) -> RingElem {
        RingElem(a.0.iter().map(|&x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let d = self.dim();
        let mut out = vec![0u32; d];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = self.field.mul(x, y);
                for &(k, c) in self.table_entry(i, j) {
                    out[k] = self.field.mul_add(out[k], xy, c);
                }
            }
        }
        RingElem(out)
    }

    pub fn pow(&self, a: &RingElem, n: u32) -> RingElem {
        (0..n).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Coefficient of the unit: the image in the residue field.
    pub fn reduce_mod_m(&self, a: &RingElem) -> u32 {
        a.0[0]
    }

    pub fn is_unit(&self, a: &RingElem) -> bool {
        self.reduce_mod_m(a) != 0
    }

    /// Matrix of multiplication by `a` in the basis.
    pub fn mult_matrix(&self, a: &RingElem) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(self.field, d, d);
        for j in 0..d {
            let col = self.mul(a, &self.basis(j));
            for (i, &c) in col.0.iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    pub fn inverse(&self, a: &RingElem) -> Option<RingElem> {
        match solve_linear(&self.mult_matrix(a), &self.one().0) {
            Solution::Consistent { particular, .. } => Some(RingElem(particular)),
            Solution::Inconsistent { .. } => None,
        }
    }

    /// Scale so that the first nonzero coordinate is 1.
    pub fn normalize_leading(&self, a: &RingElem) -> RingElem {
        match a.0.iter().find(|&&x| x != 0) {
            Some(&lead) => self.scale(a, self.field.inv(lead).expect("nonzero")),
            None => a.clone(),
        }
    }

    pub fn format(&self, a: &RingElem) -> String {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (i, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let s = self.field.signed(c);
            let mag = s.unsigned_abs();
            let label = &self.basis_labels[i];
            let body = if label == "1" {
                format!("{mag}")
            } else if mag == 1 {
                label.clone()
            } else {
                format!("{mag}{label}")
            };
            parts.push((s < 0, body));
        }
        if parts.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (negative, body)) in parts.iter().enumerate() {
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(body);
        }
        out
    }

    /// Quotient by an ideal given as a spanning set of elements. The ideal
    /// must lie in the maximal ideal; closure under multiplication is checked.
    pub fn quotient_by(
        self: &Arc<Self>,
        gens: &[RingElem],
        name: String,
    ) -> Result<(Arc<LocalAlgebra>, RingSurjection), CoeffError> {
        let d = self.dim();
        let f = self.field;
        let ideal: Vec<Vec<u32>> =
            super::matrix::span_basis(f, d, &gens.iter().map(|g| g.0.clone()).collect::<Vec<_>>());
        for g in &ideal {
            if g[0] != 0 {
                return Err(CoeffError::NonLocal(name));
            }
            for b in 0..d {
                let prod = self.mul(&RingElem(g.clone()), &self.basis(b));
                let mut test = ideal.clone();
                test.push(prod.0);
                if super::matrix::span_rank(f, d, &test) > ideal.len() {
                    return Err(CoeffError::NotAnIdeal(name));
                }
            }
        }
        let keep = super::matrix::complement_coordinates(f, d, &ideal);
        let q = keep.len();
        // projection: write each basis element as combination of kept basis
        // elements modulo the ideal
        let mut cols: Vec<Vec<u32>> = keep.iter().map(|&k| self.basis(k).0).collect();
        cols.extend(ideal.iter().cloned());
        let a = Matrix::from_col_vectors(f, d, &cols);
        let mut proj = Matrix::zeros(f, q, d);
        for b in 0..d {
            match solve_linear(&a, &self.basis(b).0) {
                Solution::Consistent { particular, .. } => {
                    for i in 0..q {
                        proj.set(i, b, particular[i]);
                    }
                }
                Solution::Inconsistent { .. } => unreachable!("kept basis plus ideal spans"),
            }
        }
        let project = |x: &RingElem| RingElem(proj.mul_vec(&x.0));
        let mut table = Vec::with_capacity(q * q);
        for &a_i in &keep {
            for &b_i in &keep {
                let prod = project(&self.mul(&self.basis(a_i), &self.basis(b_i)));
                table.push(
                    prod.0
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (i, c))
                        .collect(),
                );
            }
        }
        let basis_exps = self
            .basis_exps
            .as_ref()
            .map(|exps| keep.iter().map(|&k| exps[k].clone()).collect::<Vec<_>>());
        let mut monomial_nf = HashMap::new();
        for (m, coords) in &self.monomial_nf {
            monomial_nf.insert(m.clone(), project(&RingElem(coords.clone())).0);
        }
        let nil = {
            // smallest N with every product of N maximal-ideal basis elements zero
            let mut n = 1u32;
            let mut layer: Vec<Vec<u32>> = (1..q)
                .map(|i| {
                    let mut v = vec![0; q];
                    v[i] = 1;
                    v
                })
                .collect();
            let mut tmp = LocalAlgebra {
                name: name.clone(),
                field: f,
                vars: self.vars.clone(),
                basis_labels: keep.iter().map(|&k| self.basis_labels[k].clone()).collect(),
                basis_exps: basis_exps.clone(),
                table: table.clone(),
                monomial_nf: monomial_nf.clone(),
                nil_degree: u32::MAX,
            };
            while !layer.iter().all(|v| v.iter().all(|&x| x == 0)) {
                let mut next = Vec::new();
                for v in &layer {
                    for i in 1..q {
                        next.push(tmp.mul(&RingElem(v.clone()), &tmp.basis(i)).0);
                    }
                }
                layer = super::matrix::span_basis(f, q, &next);
                n += 1;
                if n > 64 {
                    return Err(CoeffError::NonLocal(name));
                }
            }
            tmp.nil_degree = n;
            tmp
        };
        let alg = Arc::new(nil);
        let surj = RingSurjection {
            source: Arc::clone(self),
            target: Arc::clone(&alg),
            matrix: proj,
        };
        Ok((alg, surj))
    }
}

impl fmt::Debug for LocalAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalAlgebra")
            .field("name", &self.name)
            .field("p", &self.field.p())
            .field("basis", &self.basis_labels)
            .finish()
    }
}

impl PartialEq for LocalAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.basis_labels == other.basis_labels && self.table == other.table
    }
}

/// Row-reduced spanning set used for monomial normal forms.
struct Reducer {
    field: Fp,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Reducer {
    fn new(field: Fp, n: usize, rows: &[Vec<u32>]) -> Self {
        if rows.is_empty() {
            return Reducer {
                field,
                rows: Vec::new(),
                pivots: Vec::new(),
            };
        }
        let ech = Matrix::from_row_vectors(field, n, rows).rref();
        let rows = (0..ech.pivots.len()).map(|i| ech.reduced.row(i).to_vec()).collect();
        Reducer {
            field,
            rows,
            pivots: ech.pivots,
        }
    }

    fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains(&col)
    }

    fn normal_form(&self, mut v: Vec<u32>) -> Vec<u32> {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                let neg = self.field.neg(c);
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = self.field.mul_add(*x, r, neg);
                }
            }
        }
        v
    }
}

/// A surjective homomorphism of local algebras, as a matrix on bases.
#[derive(Debug, Clone)]
pub struct RingSurjection {
    pub source: Arc<LocalAlgebra>,
    pub target: Arc<LocalAlgebra>,
    /// `dim target x dim source`
    pub matrix: Matrix,
}

impl RingSurjection {
    /// The map induced by the identity on polynomials: each basis monomial
    /// of the source goes to its class in the target. Variables absent from
    /// the target are sent to zero.
    pub fn natural(source: &Arc<LocalAlgebra>, target: &Arc<LocalAlgebra>) -> Result<Self, CoeffError> {
        let f = source.field;
        if f != target.field {
            return Err(CoeffError::NotARingMap("different residue fields".into()));
        }
        let exps = source
            .basis_exps
            .as_ref()
            .ok_or_else(|| CoeffError::NotARingMap(format!("{} has no monomial basis", source.name)))?;
        let mut matrix = Matrix::zeros(f, target.dim(), source.dim());
        for (j, e) in exps.iter().enumerate() {
            let mut te = vec![0u32; target.vars.len()];
            let mut killed = false;
            for (v, &k) in source.vars.iter().zip(e) {
                match target.vars.iter().position(|w| w == v) {
                    Some(i) => te[i] = k,
                    None => killed |= k > 0,
                }
            }
            if killed {
                continue;
            }
            let img = target.monomial(&te);
            for (i, &c) in img.0.iter().enumerate() {
                matrix.set(i, j, c);
            }
        }
        let s = RingSurjection {
            source: Arc::clone(source),
            target: Arc::clone(target),
            matrix,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), CoeffError> {
        let src = &self.source;
        let tgt = &self.target;
        if self.apply(&src.one()) != tgt.one() {
            return Err(CoeffError::NotARingMap("unit not preserved".into()));
        }
        for a in 0..src.dim() {
            for b in 0..src.dim() {
                let lhs = self.apply(&src.mul(&src.basis(a), &src.basis(b)));
                let rhs = tgt.mul(&self.apply(&src.basis(a)), &self.apply(&src.basis(b)));
                if lhs != rhs {
                    return Err(CoeffError::NotARingMap(format!(
                        "{} -> {} is not multiplicative on ({}, {})",
                        src.name, tgt.name, src.basis_labels[a], src.basis_labels[b]
                    )));
                }
            }
        }
        if self.matrix.rank() != tgt.dim() {
            return Err(CoeffError::NotARingMap(format!(
                "{} -> {} is not surjective",
                src.name, tgt.name
            )));
        }
        Ok(())
    }

    pub fn apply(&self, x: &RingElem) -> RingElem {
        RingElem(self.matrix.mul_vec(&x.0))
    }

    /// Basis of the kernel, as source elements.
    pub fn kernel(&self) -> Vec<RingElem> {
        self.matrix.kernel().into_iter().map(RingElem).collect()
    }

    /// Kernel annihilated by the maximal ideal of the source.
    pub fn is_small_extension(&self) -> bool {
        let src = &self.source;
        self.kernel().iter().all(|k| {
            src.max_ideal_indices()
                .into_iter()
                .all(|i| src.mul(k, &src.basis(i)).is_zero())
        })
    }

    /// A linear section: images of the target basis elements in the source.
    pub fn section(&self) -> Vec<RingElem> {
        (0..self.target.dim())
            .map(|i| match solve_linear(&self.matrix, &self.target.basis(i).0) {
                Solution::Consistent { particular, .. } => RingElem(particular),
                Solution::Inconsistent { .. } => unreachable!("surjective"),
            })
            .collect()
    }

    pub fn lift(&self, x: &RingElem) -> RingElem {
        let sec = self.section();
        self.lift_with(&sec, x)
    }

    pub fn lift_with(&self, section: &[RingElem], x: &RingElem) -> RingElem {
        let src = &self.source;
        let mut out = src.zero();
        for (i, &c) in x.0.iter().enumerate() {
            if c != 0 {
                out = src.add(&out, &src.scale(&section[i], c));
            }
        }
        out
    }

    /// Factor into a chain of small extensions `source = Q_s -> ... -> Q_0 ≅ target`.
    /// Returns the intermediate surjections from the top (source) down, with
    /// the last map landing in `target` itself.
    pub fn small_steps(&self) -> Result<Vec<RingSurjection>, CoeffError> {
        if self.is_small_extension() {
            return Ok(vec![self.clone()]);
        }
        let src = &self.source;
        // filtration I ⊇ mI ⊇ m²I ⊇ ... ⊇ 0
        let kernel = self.kernel();
        let mut layers: Vec<Vec<RingElem>> = vec![kernel.clone()];
        loop {
            let last = layers.last().unwrap();
            let mut next = Vec::new();
            for k in last {
                for i in src.max_ideal_indices() {
                    next.push(src.mul(k, &src.basis(i)).0);
                }
            }
            let basis = super::matrix::span_basis(src.field, src.dim(), &next);
            if basis.is_empty() {
                break;
            }
            layers.push(basis.into_iter().map(RingElem).collect());
        }
        // quotients Q_j = source / m^j I for j = 1..layers.len()-1, plus target
        let mut rings = Vec::new();
        for (j, gens) in layers.iter().enumerate().skip(1) {
            let (q, s) = src.quotient_by(gens, format!("{}/m^{}I", src.name, j))?;
            rings.push((q, s));
        }
        // chain: source -> Q_{top} -> ... -> Q_1 -> target
        let mut steps = Vec::new();
        let mut upper: Arc<LocalAlgebra> = Arc::clone(src);
        let mut upper_from_source: Option<RingSurjection> = None;
        for (q, s) in rings.into_iter().rev() {
            let step = compose_through(&upper, upper_from_source.as_ref(), &s)?;
            steps.push(step);
            upper = q;
            upper_from_source = Some(s);
        }
        steps.push(compose_through(&upper, upper_from_source.as_ref(), self)?);
        Ok(steps)
    }
}

/// Given `upper = source/J` (via `upper_map`, or `upper = source`) and a
/// surjection `lower_map: source -> lower` with kernel ⊇ J, build `upper -> lower`.
fn compose_through(
    upper: &Arc<LocalAlgebra>,
    upper_map: Option<&RingSurjection>,
    lower_map: &RingSurjection,
) -> Result<RingSurjection, CoeffError> {
    let matrix = match upper_map {
        None => lower_map.matrix.clone(),
        Some(um) => {
            let sec = um.section();
            let cols: Vec<Vec<u32>> = sec.iter().map(|s| lower_map.apply(s).0).collect();
            Matrix::from_col_vectors(upper.field, lower_map.target.dim(), &cols)
        }
    };
    let s = RingSurjection {
        source: Arc::clone(upper),
        target: Arc::clone(&lower_map.target),
        matrix,
    };
    s.validate()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn dual_numbers_have_basis_one_t() {
        let r = LocalAlgebra::from_spec("k[t]/(t^2)", f(5)).unwrap();
        assert_eq!(r.dim(), 2);
        assert_eq!(r.basis_labels(), &["1", "t"]);
        let x = RingElem(vec![1, 3]);
        assert_eq!(r.reduce_mod_m(&x), 1);
    }

    #[test]
    fn two_variable_ring_of_the_nonperiodic_case() {
        let r = LocalAlgebra::from_spec("k[t1,t2]/(t1^2-t2^2,t1t2)", f(5)).unwrap();
        assert_eq!(r.basis_labels(), &["1", "t1", "t2", "t1^2"]);
        let t1 = r.var(0);
        let t2 = r.var(1);
        assert_eq!(r.mul(&t2, &t2), r.mul(&t1, &t1));
        assert!(r.mul(&t1, &t2).is_zero());
    }

    #[test]
    fn product_ideal_ring_has_dimension_six() {
        let r = LocalAlgebra::from_spec("k[t1,t2]/((t1,t2)*(t1^2-t2^2,t1t2))", f(5)).unwrap();
        assert_eq!(r.basis_labels(), &["1", "t1", "t2", "t1^2", "t1t2", "t2^2"]);
        let t1sq = r.mul(&r.var(0), &r.var(0));
        assert_eq!(r.reduce_mod_m(&t1sq), 0);
    }

    #[test]
    fn residue_of_t_plus_lambda() {
        let r = LocalAlgebra::truncated_power_series(f(7), 2);
        let x = r.add(&r.var(0), &r.scalar(2));
        assert_eq!(r.reduce_mod_m(&x), 2);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            LocalAlgebra::from_spec("k[t1,t2]/(t1^2)", f(5)),
            Err(CoeffError::InfiniteWithinCap { .. })
        ));
        assert!(matches!(
            LocalAlgebra::from_spec("k[t]/(t-t^2)", f(5)),
            Err(CoeffError::NonLocal(_))
        ));
        assert!(matches!(
            LocalAlgebra::from_spec("k[t]/(1)", f(5)),
            Err(CoeffError::NonLocal(_))
        ));
        assert!(matches!(
            LocalAlgebra::from_spec("k[t]/(t^2", f(5)),
            Err(CoeffError::Parse { .. })
        ));
    }

    fn all_elements(r: &LocalAlgebra) -> Vec<RingElem> {
        let p = r.field().p();
        let d = r.dim();
        let mut out = Vec::new();
        let total = (p as usize).pow(d as u32);
        for mut n in 0..total {
            let mut v = vec![0u32; d];
            for x in v.iter_mut() {
                *x = (n % p as usize) as u32;
                n /= p as usize;
            }
            out.push(RingElem(v));
        }
        out
    }

    #[test]
    fn ring_axioms_and_units_exhaustively() {
        for (spec, p) in [
            ("k[t]/(t^2)", 5),
            ("k[t]/(t^4)", 3),
            ("k[t1,t2]/(t1^2-t2^2,t1t2)", 3),
            ("k[t1,t2]/((t1,t2)*(t1^2-t2^2,t1t2))", 3),
            ("k[t1,t2]/(t1^2,t2^2)", 5),
        ] {
            let r = LocalAlgebra::from_spec(spec, f(p)).unwrap();
            let d = r.dim();
            for a in 0..d {
                for b in 0..d {
                    assert_eq!(
                        r.mul(&r.basis(a), &r.basis(b)),
                        r.mul(&r.basis(b), &r.basis(a)),
                        "{spec}"
                    );
                    for c in 0..d {
                        let lhs = r.mul(&r.mul(&r.basis(a), &r.basis(b)), &r.basis(c));
                        let rhs = r.mul(&r.basis(a), &r.mul(&r.basis(b), &r.basis(c)));
                        assert_eq!(lhs, rhs, "{spec}");
                    }
                }
            }
            // m nilpotent
            let n = r.nilpotency_degree();
            assert!(n as usize <= d);
            for i in r.max_ideal_indices() {
                assert!(r.pow(&r.basis(i), n).is_zero());
            }
            // invertible iff residue nonzero
            if d <= 6 && p <= 5 {
                for x in all_elements(&r) {
                    let inv = r.inverse(&x);
                    assert_eq!(inv.is_some(), r.reduce_mod_m(&x) != 0, "{spec} {:?}", x);
                    if let Some(y) = inv {
                        assert_eq!(r.mul(&x, &y), r.one());
                    }
                }
            }
        }
    }

    #[test]
    fn natural_surjections_and_small_extensions() {
        let f3 = f(3);
        let big = LocalAlgebra::truncated_power_series(f3, 3);
        let small = LocalAlgebra::truncated_power_series(f3, 2);
        let s = RingSurjection::natural(&big, &small).unwrap();
        assert!(s.is_small_extension());
        assert_eq!(s.kernel().len(), 1);

        let jp = LocalAlgebra::from_spec("k[t1,t2]/((t1,t2)*(t1^2-t2^2,t1t2))", f3).unwrap();
        let j = LocalAlgebra::from_spec("k[t1,t2]/(t1^2-t2^2,t1t2)", f3).unwrap();
        let s = RingSurjection::natural(&jp, &j).unwrap();
        assert!(s.is_small_extension());
        assert_eq!(s.kernel().len(), 2);

        let k = LocalAlgebra::residue_field(f3);
        let deep = LocalAlgebra::truncated_power_series(f3, 4);
        let s = RingSurjection::natural(&deep, &k).unwrap();
        assert!(!s.is_small_extension());
        let steps = s.small_steps().unwrap();
        assert_eq!(steps.len(), 3);
        assert!(steps.iter().all(|st| st.is_small_extension()));
        assert_eq!(steps.last().unwrap().target.dim(), 1);

        // wrong direction is not a ring map onto
        assert!(RingSurjection::natural(&small, &big).is_err());
    }

    #[test]
    fn formatting_uses_signed_coefficients() {
        let r = LocalAlgebra::truncated_power_series(f(7), 3);
        let x = r.neg(&r.mul(&r.var(0), &r.var(0)));
        assert_eq!(r.format(&x), "-t^2");
        assert_eq!(r.format(&r.add(&r.scalar(2), &r.var(0))), "2 + t");
    }
}
