//! Matrix representations of `Λ`-modules: simples, projectives, string and
//! band modules, direct sums, and the module-spec grammar.

use std::fmt;
use std::sync::Arc;

use crate::coeff::{Fp, Matrix};
use crate::presentation::{BasisPath, Presentation, PresentationError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("invalid string {word}: {reason}")]
    InvalidString { word: String, reason: String },
    #[error("band parameter must be nonzero mod p")]
    ZeroLambda,
    #[error("band size must be positive")]
    ZeroBandSize,
    #[error("relation {0} is violated")]
    RelationViolated(String),
    #[error("representations do not match: {0}")]
    Mismatch(String),
    #[error("module spec parse error at position {pos}: expected {expected}")]
    Parse { pos: usize, expected: String },
}

/// A finite-dimensional `Λ`-module over GF(p): one space per vertex and one
/// matrix (target × source) per arrow.
#[derive(Clone, PartialEq, Eq)]
pub struct Representation {
    pres: Arc<Presentation>,
    field: Fp,
    dims: Vec<usize>,
    arrows: Vec<Matrix>,
}

impl Representation {
    /// Build from explicit matrices and check every relation.
    pub fn new(pres: &Arc<Presentation>, field: Fp, dims: Vec<usize>, arrows: Vec<Matrix>) -> Result<Self, RepError> {
        let rep = Self::new_unchecked(pres, field, dims, arrows)?;
        rep.check_relations()?;
        Ok(rep)
    }

    /// Build from explicit matrices, checking only shapes.
    pub fn new_unchecked(
        pres: &Arc<Presentation>,
        field: Fp,
        dims: Vec<usize>,
        arrows: Vec<Matrix>,
    ) -> Result<Self, RepError> {
        if dims.len() != pres.num_vertices() || arrows.len() != pres.num_arrows() {
            return Err(RepError::Mismatch("wrong number of vertices or arrows".into()));
        }
        for (a, m) in arrows.iter().enumerate() {
            if m.rows() != dims[pres.target(a)] || m.cols() != dims[pres.source(a)] {
                return Err(RepError::Mismatch(format!(
                    "arrow {} has shape {}x{}, expected {}x{}",
                    pres.arrow_name(a),
                    m.rows(),
                    m.cols(),
                    dims[pres.target(a)],
                    dims[pres.source(a)]
                )));
            }
        }
        Ok(Representation {
            pres: Arc::clone(pres),
            field,
            dims,
            arrows,
        })
    }

    pub fn zero(pres: &Arc<Presentation>, field: Fp) -> Self {
        Self::with_zero_arrows(pres, field, vec![0; pres.num_vertices()])
    }

    fn with_zero_arrows(pres: &Arc<Presentation>, field: Fp, dims: Vec<usize>) -> Self {
        let arrows = (0..pres.num_arrows())
            .map(|a| Matrix::zeros(field, dims[pres.target(a)], dims[pres.source(a)]))
            .collect();
        Representation {
            pres: Arc::clone(pres),
            field,
            dims,
            arrows,
        }
    }

    pub fn simple(pres: &Arc<Presentation>, field: Fp, v: usize) -> Result<Self, RepError> {
        if v >= pres.num_vertices() {
            return Err(PresentationError::BadVertex(v + 1, pres.e()).into());
        }
        let mut dims = vec![0; pres.num_vertices()];
        dims[v] = 1;
        Ok(Self::with_zero_arrows(pres, field, dims))
    }

    /// The indecomposable projective `P_v = Λ e_v`, with the basis of
    /// [`Presentation::projective_basis`].
    pub fn projective(pres: &Arc<Presentation>, field: Fp, v: usize) -> Result<Self, RepError> {
        if v >= pres.num_vertices() {
            return Err(PresentationError::BadVertex(v + 1, pres.e()).into());
        }
        let per_vertex: Vec<Vec<BasisPath>> = (0..pres.num_vertices()).map(|w| pres.paths_between(v, w)).collect();
        let dims = per_vertex.iter().map(Vec::len).collect();
        let mut rep = Self::with_zero_arrows(pres, field, dims);
        for a in 0..pres.num_arrows() {
            let (s, t) = (pres.source(a), pres.target(a));
            for (j, b) in per_vertex[s].iter().enumerate() {
                if let Some(img) = pres.compose(a, b) {
                    let i = per_vertex[t]
                        .iter()
                        .position(|x| *x == img)
                        .expect("image is a basis path");
                    rep.arrows[a].set(i, j, 1);
                }
            }
        }
        rep.check_relations()?;
        Ok(rep)
    }

    /// The string module `M(w)`.
    pub fn string(pres: &Arc<Presentation>, field: Fp, w: &StringWord) -> Result<Self, RepError> {
        w.validate(pres)?;
        let verts = w.vertices(pres);
        let mut dims = vec![0; pres.num_vertices()];
        // local index of each z_j inside its vertex space
        let mut local = Vec::with_capacity(verts.len());
        for &v in &verts {
            local.push(dims[v]);
            dims[v] += 1;
        }
        let mut rep = Self::with_zero_arrows(pres, field, dims);
        for (j, l) in w.letters.iter().enumerate() {
            // letter j+1 joins z_j and z_{j+1}
            let (from, to) = if l.inverse { (j + 1, j) } else { (j, j + 1) };
            rep.arrows[l.arrow].set(local[to], local[from], 1);
        }
        rep.check_relations().map_err(|err| RepError::InvalidString {
            word: w.text(pres),
            reason: err.to_string(),
        })?;
        Ok(rep)
    }

    /// The band module `B(n, λ)`; the last vertex carries (top block, socle block).
    pub fn band(pres: &Arc<Presentation>, field: Fp, n: usize, lambda: u32) -> Result<Self, RepError> {
        if n == 0 {
            return Err(RepError::ZeroBandSize);
        }
        let lambda = lambda % field.p();
        if lambda == 0 {
            return Err(RepError::ZeroLambda);
        }
        let e = pres.e();
        let last = e - 1;
        let mut dims = vec![n; e];
        dims[last] = 2 * n;
        let mut rep = Self::with_zero_arrows(pres, field, dims);
        let id = Matrix::identity(field, n);
        for a in 0..e.saturating_sub(2) {
            rep.arrows[a] = id.clone();
        }
        // α_{e-1} into the socle block, α_e out of the top block; for e = 1
        // the single α goes from the top block to the socle block
        rep.arrows[pres.alpha_into(last)].set_block(n, 0, &id);
        if e > 1 {
            rep.arrows[pres.alpha_from(last)].set_block(0, 0, &id);
        }
        let jordan = Matrix::from_fn(field, n, n, |i, j| {
            if i == j {
                lambda
            } else if i == j + 1 {
                1
            } else {
                0
            }
        });
        rep.arrows[pres.delta()].set_block(n, 0, &jordan);
        rep.check_relations()?;
        Ok(rep)
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation, RepError> {
        if self.pres != other.pres || self.field != other.field {
            return Err(RepError::Mismatch(
                "direct sum of modules over different algebras".into(),
            ));
        }
        Ok(Representation {
            pres: Arc::clone(&self.pres),
            field: self.field,
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            arrows: self
                .arrows
                .iter()
                .zip(&other.arrows)
                .map(|(a, b)| a.block_diag(b))
                .collect(),
        })
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }
    pub fn field(&self) -> Fp {
        self.field
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn dim(&self, v: usize) -> usize {
        self.dims[v]
    }
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }
    pub fn arrow(&self, a: usize) -> &Matrix {
        &self.arrows[a]
    }
    pub fn arrows(&self) -> &[Matrix] {
        &self.arrows
    }

    /// Offset of vertex `v`'s block in the total space.
    pub fn offset(&self, v: usize) -> usize {
        self.dims[..v].iter().sum()
    }

    /// Matrix of a word (application order) starting at vertex `start`.
    pub fn act_path(&self, start: usize, word: &[usize]) -> Result<Matrix, RepError> {
        let mut at = start;
        let mut m = Matrix::identity(self.field, self.dims[start]);
        for (i, &a) in word.iter().enumerate() {
            if a >= self.pres.num_arrows() || self.pres.source(a) != at {
                return Err(PresentationError::NotComposable(i).into());
            }
            m = self.arrows[a].mul(&m);
            at = self.pres.target(a);
        }
        Ok(m)
    }

    pub fn act_basis_path(&self, p: &BasisPath) -> Matrix {
        self.act_path(p.start, &self.pres.path_word(p))
            .expect("basis paths are composable")
    }

    /// Evaluate every relation; report the first violated one.
    pub fn check_relations(&self) -> Result<(), RepError> {
        for r in self.pres.relations() {
            let start = self.pres.source(r.lhs[0]);
            let lhs = self.act_path(start, &r.lhs)?;
            let ok = match &r.rhs {
                Some(rhs) => lhs == self.act_path(start, rhs)?,
                None => lhs.is_zero(),
            };
            if !ok {
                return Err(RepError::RelationViolated(self.pres.relation_name(r)));
            }
        }
        Ok(())
    }

    /// The total-space matrix of an arrow (acting on `⊕_v M_v`).
    pub fn global_arrow(&self, a: usize) -> Matrix {
        let n = self.total_dim();
        let mut m = Matrix::zeros(self.field, n, n);
        m.set_block(
            self.offset(self.pres.target(a)),
            self.offset(self.pres.source(a)),
            &self.arrows[a],
        );
        m
    }

    /// Total-space matrix of a basis path.
    pub fn global_path(&self, p: &BasisPath) -> Matrix {
        let n = self.total_dim();
        let mut m = Matrix::zeros(self.field, n, n);
        m.set_block(
            self.offset(self.pres.end(p)),
            self.offset(p.start),
            &self.act_basis_path(p),
        );
        m
    }

    /// Global basis vectors of the radical `rad M = Σ_a im(a)`.
    pub fn radical_basis(&self) -> Vec<Vec<u32>> {
        let n = self.total_dim();
        let mut gens = Vec::new();
        for a in 0..self.pres.num_arrows() {
            gens.extend(self.global_arrow(a).column_space());
        }
        crate::coeff::matrix::span_basis(self.field, n, &gens)
    }

    /// Global basis of the socle `{x : a·x = 0 for all arrows a}`.
    pub fn socle_basis(&self) -> Vec<Vec<u32>> {
        let n = self.total_dim();
        if n == 0 {
            return Vec::new();
        }
        let mut stacked = Matrix::zeros(self.field, 0, n);
        for a in 0..self.pres.num_arrows() {
            stacked = stacked.vstack(&self.global_arrow(a));
        }
        stacked.kernel()
    }

    /// Dimension of `rad^k M`.
    pub fn radical_power_dim(&self, k: usize) -> usize {
        let n = self.total_dim();
        let mut current: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        let globals: Vec<Matrix> = (0..self.pres.num_arrows()).map(|a| self.global_arrow(a)).collect();
        for _ in 0..k {
            let mut next = Vec::new();
            for v in &current {
                for g in &globals {
                    next.push(g.mul_vec(v));
                }
            }
            current = crate::coeff::matrix::span_basis(self.field, n, &next);
            if current.is_empty() {
                break;
            }
        }
        current.len()
    }

    /// Loewy length: smallest `k` with `rad^k M = 0`.
    pub fn loewy_length(&self) -> usize {
        (0..).find(|&k| self.radical_power_dim(k) == 0).unwrap()
    }

    /// Restrict to a vertexwise subspace closed under the arrows. `basis[v]`
    /// holds column vectors spanning the subspace at `v` (independent).
    pub fn subrepresentation(&self, basis: &[Vec<Vec<u32>>]) -> Representation {
        let f = self.field;
        let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
        let mut sub = Self::with_zero_arrows(&self.pres, f, dims.clone());
        for a in 0..self.pres.num_arrows() {
            let (s, t) = (self.pres.source(a), self.pres.target(a));
            if dims[s] == 0 || dims[t] == 0 {
                continue;
            }
            let tb = Matrix::from_col_vectors(f, self.dims[t], &basis[t]);
            for (j, x) in basis[s].iter().enumerate() {
                let y = self.arrows[a].mul_vec(x);
                match crate::coeff::solve_linear(&tb, &y) {
                    crate::coeff::Solution::Consistent { particular, .. } => {
                        for (i, &c) in particular.iter().enumerate() {
                            sub.arrows[a].set(i, j, c);
                        }
                    }
                    crate::coeff::Solution::Inconsistent { .. } => panic!("subspace is not a submodule"),
                }
            }
        }
        sub
    }

    /// Quotient by a vertexwise submodule (same input format as
    /// [`Self::subrepresentation`]). Returns the quotient and, per vertex,
    /// the projection matrix.
    pub fn quotient(&self, basis: &[Vec<Vec<u32>>]) -> (Representation, Vec<Matrix>) {
        let f = self.field;
        let mut projections = Vec::new();
        let mut dims = Vec::new();
        let mut keeps = Vec::new();
        for v in 0..self.pres.num_vertices() {
            let n = self.dims[v];
            let keep = crate::coeff::matrix::complement_coordinates(f, n, &basis[v]);
            // write each standard vector in terms of (kept standard vectors, sub basis)
            let mut cols: Vec<Vec<u32>> = keep
                .iter()
                .map(|&k| {
                    let mut e = vec![0; n];
                    e[k] = 1;
                    e
                })
                .collect();
            cols.extend(basis[v].iter().cloned());
            let mut proj = Matrix::zeros(f, keep.len(), n);
            if n > 0 {
                let a = Matrix::from_col_vectors(f, n, &cols);
                let inv = a.inverse().expect("complement plus submodule basis spans");
                proj = inv.block(0, 0, keep.len(), n);
            }
            dims.push(keep.len());
            projections.push(proj);
            keeps.push(keep);
        }
        let mut q = Self::with_zero_arrows(&self.pres, f, dims);
        for a in 0..self.pres.num_arrows() {
            let (s, t) = (self.pres.source(a), self.pres.target(a));
            // q_a = proj_t · a · (inclusion of kept coordinates at s)
            let inc = Matrix::from_fn(f, self.dims[s], keeps[s].len(), |i, j| u32::from(keeps[s][j] == i));
            q.arrows[a] = projections[t].mul(&self.arrows[a]).mul(&inc);
        }
        (q, projections)
    }

    /// Conjugate by vertexwise invertible matrices: `a ↦ g_t · a · g_s⁻¹`.
    pub fn transport(&self, g: &[Matrix]) -> Representation {
        let mut out = self.clone();
        for a in 0..self.pres.num_arrows() {
            let (s, t) = (self.pres.source(a), self.pres.target(a));
            let inv = g[s].inverse().expect("transport by invertible maps");
            out.arrows[a] = g[t].mul(&self.arrows[a]).mul(&inv);
        }
        out
    }

    /// Multiplicity of each simple in a composition series.
    pub fn composition_multiplicities(&self) -> Vec<usize> {
        self.dims.clone()
    }
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Representation(dims={:?}", self.dims)?;
        for (a, m) in self.arrows.iter().enumerate() {
            write!(f, ", {}={:?}", self.pres.arrow_name(a), m)?;
        }
        write!(f, ")")
    }
}

/// One letter of a string: an arrow, possibly inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub arrow: usize,
    pub inverse: bool,
}

/// A string word. `letters` are in application order (the rightmost letter
/// of the printed word comes first); `base` is the vertex of `z_0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StringWord {
    pub base: usize,
    pub letters: Vec<Letter>,
}

impl StringWord {
    pub fn empty(base: usize) -> Self {
        StringWord {
            base,
            letters: Vec::new(),
        }
    }

    /// Parse printed letters (`a1*a3*d~`, right-to-left). `base` is needed
    /// only for the empty word.
    pub fn parse(pres: &Presentation, text: &str, base: Option<usize>) -> Result<Self, RepError> {
        let text = text.trim();
        if text.is_empty() {
            return match base {
                Some(v) => Ok(StringWord::empty(v)),
                None => Err(RepError::Parse {
                    pos: 0,
                    expected: "letters, or an explicit base vertex for the empty word".into(),
                }),
            };
        }
        let mut printed = Vec::new();
        let mut pos = 0;
        for token in text.split('*') {
            let t = token.trim();
            let (name, inverse) = match t.strip_suffix('~') {
                Some(n) => (n, true),
                None => (t, false),
            };
            let arrow = pres.arrow_by_name(name).map_err(|_| RepError::Parse {
                pos,
                expected: format!("a letter a1..a{} or d, optionally followed by ~", pres.e()),
            })?;
            printed.push(Letter { arrow, inverse });
            pos += token.len() + 1;
        }
        printed.reverse();
        let first = printed[0];
        let start = if first.inverse {
            pres.target(first.arrow)
        } else {
            pres.source(first.arrow)
        };
        if let Some(b) = base {
            if b != start {
                return Err(RepError::InvalidString {
                    word: text.to_string(),
                    reason: format!("word starts at vertex {}, not {}", start + 1, b + 1),
                });
            }
        }
        Ok(StringWord {
            base: start,
            letters: printed,
        })
    }

    /// Printed letters, right-to-left.
    pub fn text(&self, pres: &Presentation) -> String {
        self.letters
            .iter()
            .rev()
            .map(|l| format!("{}{}", pres.arrow_name(l.arrow), if l.inverse { "~" } else { "" }))
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Vertices of `z_0, …, z_n`, without checking composability.
    pub fn vertices(&self, pres: &Presentation) -> Vec<usize> {
        let mut out = vec![self.base];
        for l in &self.letters {
            out.push(if l.inverse {
                pres.source(l.arrow)
            } else {
                pres.target(l.arrow)
            });
        }
        out
    }

    /// The reversed, inverted word; it defines an isomorphic module.
    pub fn inverse(&self, pres: &Presentation) -> StringWord {
        let verts = self.vertices(pres);
        StringWord {
            base: *verts.last().unwrap(),
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    arrow: l.arrow,
                    inverse: !l.inverse,
                })
                .collect(),
        }
    }

    /// Of the word and its inverse, the one with fewer inverse letters
    /// (ties broken by printed text).
    pub fn canonical(&self, pres: &Presentation) -> StringWord {
        let inv = self.inverse(pres);
        let key = |w: &StringWord| (w.letters.iter().filter(|l| l.inverse).count(), w.text(pres), w.base);
        if key(&inv) < key(self) {
            inv
        } else {
            self.clone()
        }
    }

    /// Check the string conditions for `Λ/soc Λ`.
    pub fn validate(&self, pres: &Presentation) -> Result<(), RepError> {
        let bad = |reason: String| RepError::InvalidString {
            word: self.text(pres),
            reason,
        };
        if self.base >= pres.num_vertices() {
            return Err(bad(format!("base vertex {} out of range", self.base + 1)));
        }
        let mut at = self.base;
        for (j, l) in self.letters.iter().enumerate() {
            let (from, to) = if l.inverse {
                (pres.target(l.arrow), pres.source(l.arrow))
            } else {
                (pres.source(l.arrow), pres.target(l.arrow))
            };
            if from != at {
                return Err(bad(format!("letter {} is not composable with the walk", j + 1)));
            }
            at = to;
        }
        for pair in self.letters.windows(2) {
            if pair[0].arrow == pair[1].arrow && pair[0].inverse != pair[1].inverse {
                return Err(bad(format!(
                    "contains {0}{0}~ or {0}~{0}",
                    pres.arrow_name(pair[0].arrow)
                )));
            }
        }
        let mut j = 0;
        while j < self.letters.len() {
            let inv = self.letters[j].inverse;
            let mut k = j;
            while k < self.letters.len() && self.letters[k].inverse == inv {
                k += 1;
            }
            let mut word: Vec<usize> = self.letters[j..k].iter().map(|l| l.arrow).collect();
            if inv {
                word.reverse();
            }
            let run = StringWord {
                base: 0,
                letters: word
                    .iter()
                    .map(|&a| Letter {
                        arrow: a,
                        inverse: false,
                    })
                    .collect(),
            };
            match pres.word_normal_form(&word)? {
                None => return Err(bad(format!("run {} is zero in the algebra", run.text(pres)))),
                Some(p) if pres.is_socle(&p) => {
                    return Err(bad(format!("run {} lies in the socle", run.text(pres))));
                }
                Some(_) => {}
            }
            j = k;
        }
        Ok(())
    }
}

/// A parsed module spec.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuleSpec {
    Simple(usize),
    Projective(usize),
    String(StringWord),
    Band { n: usize, lambda: u32 },
    Sum(Vec<ModuleSpec>),
}

impl ModuleSpec {
    /// Parse `S(i)`, `P(i)`, `str@v:<letters>`, `band:<n>,<lambda>`, or a
    /// `+`-separated direct sum of these.
    pub fn parse(pres: &Presentation, field: Fp, src: &str) -> Result<Self, RepError> {
        if src.contains('+') {
            let mut parts = Vec::new();
            let mut offset = 0;
            for piece in src.split('+') {
                parts.push(Self::parse_one(pres, field, piece, offset)?);
                offset += piece.len() + 1;
            }
            return Ok(ModuleSpec::Sum(parts));
        }
        Self::parse_one(pres, field, src, 0)
    }

    fn parse_one(pres: &Presentation, field: Fp, piece: &str, offset: usize) -> Result<Self, RepError> {
        let lead = piece.len() - piece.trim_start().len();
        let s = piece.trim();
        let at = offset + lead;
        let err = |pos: usize, expected: &str| RepError::Parse {
            pos: at + pos,
            expected: expected.to_string(),
        };
        let vertex_arg = |inner: &str, pos: usize| -> Result<usize, RepError> {
            let v: usize = inner.trim().parse().map_err(|_| err(pos, "a vertex number"))?;
            pres.vertex(v)
                .map_err(|_| err(pos, &format!("a vertex in 1..={}", pres.e())))
        };
        if let Some(rest) = s.strip_prefix("S(") {
            let inner = rest.strip_suffix(')').ok_or_else(|| err(s.len(), "')'"))?;
            return Ok(ModuleSpec::Simple(vertex_arg(inner, 2)?));
        }
        if let Some(rest) = s.strip_prefix("P(") {
            let inner = rest.strip_suffix(')').ok_or_else(|| err(s.len(), "')'"))?;
            return Ok(ModuleSpec::Projective(vertex_arg(inner, 2)?));
        }
        if let Some(rest) = s.strip_prefix("band:") {
            let (n, l) = rest.split_once(',').ok_or_else(|| err(5, "<n>,<lambda>"))?;
            let n: usize = n.trim().parse().map_err(|_| err(5, "a positive band size"))?;
            let lambda: i64 = l
                .trim()
                .parse()
                .map_err(|_| err(5 + rest.find(',').unwrap() + 1, "an integer lambda"))?;
            if n == 0 {
                return Err(RepError::ZeroBandSize);
            }
            let lambda = field.reduce(lambda);
            if lambda == 0 {
                return Err(RepError::ZeroLambda);
            }
            return Ok(ModuleSpec::Band { n, lambda });
        }
        if let Some(rest) = s.strip_prefix("str") {
            let (base, letters, letters_pos) = if let Some(r) = rest.strip_prefix('@') {
                let (v, letters) = r.split_once(':').ok_or_else(|| err(4, "@<vertex>:<letters>"))?;
                (Some(vertex_arg(v, 4)?), letters, 5 + v.len())
            } else if let Some(letters) = rest.strip_prefix(':') {
                (None, letters, 4)
            } else {
                return Err(err(3, "':' or '@'"));
            };
            let w = StringWord::parse(pres, letters, base).map_err(|e| match e {
                RepError::Parse { pos, expected } => err(letters_pos + pos, &expected),
                other => other,
            })?;
            w.validate(pres)?;
            if w.is_empty() {
                return Ok(ModuleSpec::Simple(w.base));
            }
            return Ok(ModuleSpec::String(w));
        }
        Err(err(
            0,
            "S(i), P(i), str:<letters>, str@v:<letters> or band:<n>,<lambda>",
        ))
    }

    pub fn build(&self, pres: &Arc<Presentation>, field: Fp) -> Result<Representation, RepError> {
        match self {
            ModuleSpec::Simple(v) => Representation::simple(pres, field, *v),
            ModuleSpec::Projective(v) => Representation::projective(pres, field, *v),
            ModuleSpec::String(w) => Representation::string(pres, field, w),
            ModuleSpec::Band { n, lambda } => Representation::band(pres, field, *n, *lambda),
            ModuleSpec::Sum(parts) => {
                let mut acc = Representation::zero(pres, field);
                for p in parts {
                    acc = acc.direct_sum(&p.build(pres, field)?)?;
                }
                Ok(acc)
            }
        }
    }

    /// Canonical text: strings in canonical orientation, length-0 strings as simples.
    pub fn canonical_text(&self, pres: &Presentation) -> String {
        match self {
            ModuleSpec::Simple(v) => format!("S({})", v + 1),
            ModuleSpec::Projective(v) => format!("P({})", v + 1),
            ModuleSpec::String(w) if w.is_empty() => format!("S({})", w.base + 1),
            ModuleSpec::String(w) => format!("str:{}", w.canonical(pres).text(pres)),
            ModuleSpec::Band { n, lambda } => format!("band:{n},{lambda}"),
            ModuleSpec::Sum(parts) => parts
                .iter()
                .map(|p| p.canonical_text(pres))
                .collect::<Vec<_>>()
                .join(" + "),
        }
    }

    /// Human-readable name such as `M(a2*a1)` or `B(1,2)`.
    pub fn display_name(&self, pres: &Presentation) -> String {
        match self {
            ModuleSpec::Simple(v) => format!("S_{}", v + 1),
            ModuleSpec::Projective(v) => format!("P_{}", v + 1),
            ModuleSpec::String(w) if w.is_empty() => format!("S_{}", w.base + 1),
            ModuleSpec::String(w) => format!("M({})", w.canonical(pres).text(pres)),
            ModuleSpec::Band { n, lambda } => format!("B({n},{lambda})"),
            ModuleSpec::Sum(parts) => parts
                .iter()
                .map(|p| p.display_name(pres))
                .collect::<Vec<_>>()
                .join(" ⊕ "),
        }
    }
}

/// All valid strings of length `1..=max_len`, one per isomorphism class
/// (canonical orientation), sorted.
pub fn enumerate_strings(pres: &Presentation, max_len: usize) -> Vec<StringWord> {
    let mut frontier: Vec<StringWord> = (0..pres.num_vertices()).map(StringWord::empty).collect();
    let mut out = std::collections::BTreeSet::new();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            let at = *w.vertices(pres).last().unwrap();
            for arrow in 0..pres.num_arrows() {
                for inverse in [false, true] {
                    let from = if inverse {
                        pres.target(arrow)
                    } else {
                        pres.source(arrow)
                    };
                    if from != at {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.letters.push(Letter { arrow, inverse });
                    if w2.validate(pres).is_ok() {
                        out.insert(w2.canonical(pres));
                        next.push(w2);
                    }
                }
            }
        }
        frontier = next;
    }
    let mut v: Vec<StringWord> = out.into_iter().collect();
    v.sort_by_key(|w| (w.len(), w.text(pres)));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(e: usize, p: u32) -> (Arc<Presentation>, Fp) {
        (Arc::new(Presentation::new(e).unwrap()), Fp::new(p).unwrap())
    }

    fn spec(pres: &Arc<Presentation>, f: Fp, s: &str) -> Representation {
        ModuleSpec::parse(pres, f, s).unwrap().build(pres, f).unwrap()
    }

    #[test]
    fn simples() {
        let (pres, f) = setup(3, 5);
        let s3 = spec(&pres, f, "S(3)");
        assert_eq!(s3.dims(), &[0, 0, 1]);
        let (p1, f1) = setup(1, 5);
        let s1 = spec(&p1, f1, "S(1)");
        assert_eq!(s1.dims(), &[1]);
        assert!(s1.arrows().iter().all(|m| m.rows() == 1 && m.is_zero()));
        assert!(matches!(
            Representation::simple(&pres, f, 3),
            Err(RepError::Presentation(_))
        ));
    }

    #[test]
    fn projective_dimension_vectors() {
        let (pres, f) = setup(3, 5);
        assert_eq!(spec(&pres, f, "P(3)").dims(), &[2, 2, 4]);
        assert_eq!(spec(&pres, f, "P(1)").dims(), &[3, 2, 2]);
        let (p1, f1) = setup(1, 5);
        assert_eq!(spec(&p1, f1, "P(1)").dims(), &[4]);
    }

    #[test]
    fn string_examples() {
        let (pres, f) = setup(3, 5);
        let m = spec(&pres, f, "str:a1*a3*d~");
        assert_eq!(m.dims(), &[1, 1, 2]);
        assert!(matches!(
            ModuleSpec::parse(&pres, f, "str:d*d"),
            Err(RepError::InvalidString { .. })
        ));
        let (p2, f2) = setup(2, 5);
        assert_eq!(spec(&p2, f2, "str:a1*a2").dims(), &[1, 2]);
        assert_eq!(spec(&pres, f, "str@2:"), spec(&pres, f, "S(2)"));
        assert!(matches!(
            ModuleSpec::parse(&pres, f, "str:a1*a1"),
            Err(RepError::InvalidString { .. })
        ));
        assert!(matches!(
            ModuleSpec::parse(&pres, f, "str:a3~*a3"),
            Err(RepError::InvalidString { .. })
        ));
        assert!(matches!(
            ModuleSpec::parse(&pres, f, "str:a3*d"),
            Err(RepError::InvalidString { .. })
        ));
        match ModuleSpec::parse(&pres, f, "str:a1*b2") {
            Err(RepError::Parse { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn band_examples() {
        let (pres, f) = setup(3, 7);
        let b = spec(&pres, f, "band:1,2");
        assert_eq!(b.dims(), &[1, 1, 2]);
        assert_eq!(b.arrow(pres.delta()), &Matrix::from_rows(f, &[vec![0, 0], vec![2, 0]]));
        let b2 = spec(&pres, f, "band:2,3");
        assert_eq!(b2.total_dim(), 8);
        // α_e∘δ acts by zero
        assert!(b.act_path(2, &[pres.delta(), 2]).unwrap().is_zero());
        assert!(matches!(
            ModuleSpec::parse(&pres, f, "band:1,7"),
            Err(RepError::ZeroLambda)
        ));
        for e in 1..=4 {
            let (pe, fe) = setup(e, 7);
            for n in 1..=3 {
                assert_eq!(Representation::band(&pe, fe, n, 3).unwrap().total_dim(), n * (e + 1));
            }
        }
    }

    #[test]
    fn relations_on_projectives_and_simple_actions() {
        for e in 1..=4 {
            let (pres, f) = setup(e, 5);
            let last = e - 1;
            let pe = Representation::projective(&pres, f, last).unwrap();
            let d = pres.delta();
            let c2: Vec<usize> = pres.cycle_word(last).into_iter().chain(pres.cycle_word(last)).collect();
            assert_eq!(pe.act_path(last, &[d, d]).unwrap(), pe.act_path(last, &c2).unwrap());
            for v in 0..e {
                let s = Representation::simple(&pres, f, v).unwrap();
                for a in 0..pres.num_arrows() {
                    if pres.source(a) == v {
                        assert!(s.act_path(v, &[a]).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn direct_sums() {
        let (pres, f) = setup(3, 5);
        let s = spec(&pres, f, "S(1) + S(2)");
        assert_eq!(s.dims(), &[1, 1, 0]);
        let x = spec(&pres, f, "str:a1*a3*d~");
        let z = Representation::zero(&pres, f);
        assert_eq!(x.direct_sum(&z).unwrap(), x);
        let y = spec(&pres, f, "band:1,2");
        assert_eq!(x.direct_sum(&y).unwrap().total_dim(), x.total_dim() + y.total_dim());
    }

    #[test]
    fn lemma_maps_between_projective_and_band_are_homomorphisms() {
        // Bases: P_e at vertex e is (b1, b2 = C b1, b3 = δ b1, b4 = C² b1), at
        // vertex i < e it is (b_{i,1}, b_{i,2}); the band at vertex e is
        // (c_e, c_{e+1}) and c_i elsewhere. B(1,λ) here has δ c_e = λ c_{e+1}.
        for e in 1..=4 {
            for lambda in 1..7u32 {
                let (pres, f) = setup(e, 7);
                let p = Representation::projective(&pres, f, e - 1).unwrap();
                let b = Representation::band(&pres, f, 1, lambda).unwrap();
                let last = e - 1;
                // r1: c_e -> b2 + λ b3, c_i -> b_{i,2}, c_{e+1} -> b4
                let mut r1: Vec<Matrix> = (0..e).map(|v| Matrix::zeros(f, p.dim(v), b.dim(v))).collect();
                let mut s1: Vec<Matrix> = (0..e).map(|v| Matrix::zeros(f, b.dim(v), p.dim(v))).collect();
                for v in 0..last {
                    r1[v].set(1, 0, 1);
                    s1[v].set(0, 0, 1);
                }
                r1[last].set(1, 0, 1);
                r1[last].set(2, 0, lambda);
                r1[last].set(3, 1, 1);
                // s1: b1 -> c_e, b2 -> c_{e+1}, b3 -> λ c_{e+1}
                s1[last].set(0, 0, 1);
                s1[last].set(1, 1, 1);
                s1[last].set(1, 2, lambda);
                for a in 0..pres.num_arrows() {
                    let (s, t) = (pres.source(a), pres.target(a));
                    assert_eq!(r1[t].mul(b.arrow(a)), p.arrow(a).mul(&r1[s]), "r1 e={e} arrow {a}");
                    assert_eq!(s1[t].mul(p.arrow(a)), b.arrow(a).mul(&s1[s]), "s1 e={e} arrow {a}");
                }
                let comp = s1[last].mul(&r1[last]);
                let expect = Matrix::from_rows(f, &[vec![0, 0], vec![(lambda * lambda + 1) as i64, 0]]);
                assert_eq!(comp, expect);
                for v in 0..last {
                    assert!(s1[v].mul(&r1[v]).is_zero());
                }
            }
        }
    }

    #[test]
    fn enumeration_is_canonical_and_valid() {
        let (pres, f) = setup(2, 5);
        let words = enumerate_strings(&pres, 6);
        assert!(!words.is_empty());
        for w in &words {
            assert_eq!(&w.canonical(&pres), w);
            let m = Representation::string(&pres, f, w).unwrap();
            assert_eq!(m.total_dim(), w.len() + 1);
        }
        let texts: Vec<String> = words.iter().map(|w| w.text(&pres)).collect();
        assert!(texts.contains(&"a1*a2".to_string()));
    }
}
