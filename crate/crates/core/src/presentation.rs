//! The bound quiver `(Q_e, I)` of the generalized Brauer star algebra.
//!
//! Vertices are `0..e` internally (printed as `1..=e`). Arrow `i` for
//! `i < e` is `α_{i+1}` (printed `a<i+1>`), going from vertex `i` to `i+1`
//! (and from `e-1` back to `0` for `α_e`); arrow `e` is the loop `δ` at the
//! last vertex. Words are stored in application order: `[x, y]` means
//! "apply `x`, then `y`", which is written `y∘x` or `y*x` in text.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("the number of edges must be at least 1, got {0}")]
    InvalidE(usize),
    #[error("vertex {0} is out of range 1..={1}")]
    BadVertex(usize, usize),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("word is not composable at letter {0}")]
    NotComposable(usize),
}

/// A nonzero path of `Λ` in normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisPath {
    pub start: usize,
    pub kind: PathKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathKind {
    /// The α-path of the given length (length 0 is the trivial path).
    Alpha(usize),
    /// The loop `δ` at the last vertex.
    Delta,
}

/// A relation `lhs = rhs` (or `lhs = 0`), words in application order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Vec<usize>,
    pub rhs: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    e: usize,
    relations: Vec<Relation>,
}

impl Presentation {
    pub fn new(e: usize) -> Result<Self, PresentationError> {
        if e == 0 {
            return Err(PresentationError::InvalidE(e));
        }
        let mut p = Presentation {
            e,
            relations: Vec::new(),
        };
        p.relations = p.build_relations();
        Ok(p)
    }

    fn build_relations(&self) -> Vec<Relation> {
        let e = self.e;
        let delta = self.delta();
        let mut rels = Vec::new();
        let cycle = self.cycle_word(e - 1);
        let mut c2 = cycle.clone();
        c2.extend(&cycle);
        rels.push(Relation {
            lhs: c2,
            rhs: Some(vec![delta, delta]),
        });
        // α_e∘δ and δ∘α_{e-1}
        rels.push(Relation {
            lhs: vec![delta, self.alpha_from(e - 1)],
            rhs: None,
        });
        rels.push(Relation {
            lhs: vec![self.alpha_into(e - 1), delta],
            rhs: None,
        });
        for i in 0..e - 1 {
            let word: Vec<usize> = (0..2 * e + 1).map(|k| (i + k) % e).collect();
            rels.push(Relation { lhs: word, rhs: None });
        }
        rels
    }

    pub fn e(&self) -> usize {
        self.e
    }
    pub fn num_vertices(&self) -> usize {
        self.e
    }
    pub fn num_arrows(&self) -> usize {
        self.e + 1
    }
    pub fn delta(&self) -> usize {
        self.e
    }
    /// The α-arrow leaving vertex `v`.
    pub fn alpha_from(&self, v: usize) -> usize {
        v
    }
    /// The α-arrow entering vertex `v`.
    pub fn alpha_into(&self, v: usize) -> usize {
        (v + self.e - 1) % self.e
    }
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn source(&self, arrow: usize) -> usize {
        if arrow == self.e {
            self.e - 1
        } else {
            arrow
        }
    }

    pub fn target(&self, arrow: usize) -> usize {
        if arrow == self.e {
            self.e - 1
        } else {
            (arrow + 1) % self.e
        }
    }

    pub fn arrow_name(&self, arrow: usize) -> String {
        if arrow == self.e {
            "d".to_string()
        } else {
            format!("a{}", arrow + 1)
        }
    }

    pub fn arrow_by_name(&self, name: &str) -> Result<usize, PresentationError> {
        if name == "d" {
            return Ok(self.e);
        }
        name.strip_prefix('a')
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| (1..=self.e).contains(&k))
            .map(|k| k - 1)
            .ok_or_else(|| PresentationError::UnknownArrow(name.to_string()))
    }

    /// Convert a printed vertex `1..=e` to an internal index.
    pub fn vertex(&self, printed: usize) -> Result<usize, PresentationError> {
        if (1..=self.e).contains(&printed) {
            Ok(printed - 1)
        } else {
            Err(PresentationError::BadVertex(printed, self.e))
        }
    }

    /// The α-cycle based at `v`, in application order.
    pub fn cycle_word(&self, v: usize) -> Vec<usize> {
        (0..self.e).map(|k| (v + k) % self.e).collect()
    }

    pub fn trivial(&self, v: usize) -> BasisPath {
        BasisPath {
            start: v,
            kind: PathKind::Alpha(0),
        }
    }

    /// Longest nonzero α-path length (the socle of every projective).
    pub fn socle_length(&self) -> usize {
        2 * self.e
    }

    pub fn socle_path(&self, v: usize) -> BasisPath {
        BasisPath {
            start: v,
            kind: PathKind::Alpha(self.socle_length()),
        }
    }

    pub fn end(&self, p: &BasisPath) -> usize {
        match p.kind {
            PathKind::Alpha(len) => (p.start + len) % self.e,
            PathKind::Delta => self.e - 1,
        }
    }

    /// Radical depth of a path.
    pub fn length(&self, p: &BasisPath) -> usize {
        match p.kind {
            PathKind::Alpha(len) => len,
            PathKind::Delta => 1,
        }
    }

    pub fn is_socle(&self, p: &BasisPath) -> bool {
        p.kind == PathKind::Alpha(self.socle_length())
    }

    /// `arrow ∘ path`, or `None` if the composite is zero.
    /// Panics if the arrow does not start where the path ends.
    pub fn compose(&self, arrow: usize, p: &BasisPath) -> Option<BasisPath> {
        let end = self.end(p);
        assert_eq!(self.source(arrow), end, "arrow does not start at the end of the path");
        let delta = self.delta();
        match p.kind {
            PathKind::Alpha(len) if arrow != delta => (len < self.socle_length()).then_some(BasisPath {
                start: p.start,
                kind: PathKind::Alpha(len + 1),
            }),
            PathKind::Alpha(0) => Some(BasisPath {
                start: p.start,
                kind: PathKind::Delta,
            }),
            PathKind::Alpha(_) => None,
            PathKind::Delta if arrow == delta => Some(self.socle_path(p.start)),
            PathKind::Delta => None,
        }
    }

    /// Normal form of a word (application order) starting at `start`.
    /// `Ok(None)` means the word is zero in `Λ`.
    pub fn normal_form(&self, start: usize, word: &[usize]) -> Result<Option<BasisPath>, PresentationError> {
        let mut cur = Some(self.trivial(start));
        let mut at = start;
        for (i, &a) in word.iter().enumerate() {
            if a >= self.num_arrows() || self.source(a) != at {
                return Err(PresentationError::NotComposable(i));
            }
            at = self.target(a);
            cur = cur.and_then(|p| self.compose(a, &p));
        }
        Ok(cur)
    }

    /// Normal form of a word, starting at the source of its first letter.
    pub fn word_normal_form(&self, word: &[usize]) -> Result<Option<BasisPath>, PresentationError> {
        match word.first() {
            Some(&a) => self.normal_form(self.source(a), word),
            None => Err(PresentationError::NotComposable(0)),
        }
    }

    /// A word representing a basis path, in application order.
    pub fn path_word(&self, p: &BasisPath) -> Vec<usize> {
        match p.kind {
            PathKind::Alpha(len) => (0..len).map(|k| (p.start + k) % self.e).collect(),
            PathKind::Delta => vec![self.delta()],
        }
    }

    /// Printed form, composition right-to-left (`a2*a1*a3`), `e<v>` for trivial paths.
    pub fn path_name(&self, p: &BasisPath) -> String {
        let w = self.path_word(p);
        if w.is_empty() {
            return format!("e{}", p.start + 1);
        }
        w.iter()
            .rev()
            .map(|&a| self.arrow_name(a))
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Basis of `P_v` ordered by end vertex, then (socle last, δ after α, length).
    pub fn projective_basis(&self, v: usize) -> Vec<BasisPath> {
        let mut paths: Vec<BasisPath> = (0..=self.socle_length())
            .map(|len| BasisPath {
                start: v,
                kind: PathKind::Alpha(len),
            })
            .collect();
        if v == self.e - 1 {
            paths.push(BasisPath {
                start: v,
                kind: PathKind::Delta,
            });
        }
        paths.sort_by_key(|p| (self.end(p), self.order_key(p)));
        paths
    }

    fn order_key(&self, p: &BasisPath) -> (bool, bool, usize) {
        (self.is_socle(p), p.kind == PathKind::Delta, self.length(p))
    }

    /// Basis paths from `v` ending at `w`, in [`Self::projective_basis`] order.
    pub fn paths_between(&self, v: usize, w: usize) -> Vec<BasisPath> {
        self.projective_basis(v)
            .into_iter()
            .filter(|p| self.end(p) == w)
            .collect()
    }

    pub fn projective_dim(&self, v: usize) -> usize {
        self.projective_basis(v).len()
    }

    pub fn algebra_dim(&self) -> usize {
        (0..self.e).map(|v| self.projective_dim(v)).sum()
    }

    /// All basis paths of `Λ`.
    pub fn all_paths(&self) -> Vec<BasisPath> {
        (0..self.e).flat_map(|v| self.projective_basis(v)).collect()
    }

    /// Relation text with composition right-to-left.
    pub fn relation_name(&self, r: &Relation) -> String {
        let word = |w: &[usize]| {
            w.iter()
                .rev()
                .map(|&a| self.arrow_name(a))
                .collect::<Vec<_>>()
                .join("*")
        };
        match &r.rhs {
            Some(rhs) => format!("{} = {}", word(&r.lhs), word(rhs)),
            None => format!("{} = 0", word(&r.lhs)),
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Q_{}: {} vertices, {} arrows", self.e, self.e, self.num_arrows())?;
        for a in 0..self.num_arrows() {
            writeln!(
                f,
                "  {}: {} -> {}",
                self.arrow_name(a),
                self.source(a) + 1,
                self.target(a) + 1
            )?;
        }
        for r in &self.relations {
            writeln!(f, "  {}", self.relation_name(r))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: enumerate all composable words up to a length,
    /// reduce by the rewriting rules on raw words, and collect the distinct
    /// nonzero results. Rules: kill any word containing a mixed zero or an
    /// over-long α-run; replace `δδ` by `C²`.
    fn raw_reduce(p: &Presentation, start: usize, word: &[usize]) -> Option<Vec<usize>> {
        let e = p.e();
        let d = p.delta();
        let mut w = word.to_vec();
        loop {
            if let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] == d && w[i + 1] == d) {
                let mut c2 = p.cycle_word(e - 1);
                c2.extend(p.cycle_word(e - 1));
                w.splice(i..i + 2, c2);
                continue;
            }
            break;
        }
        for i in 0..w.len().saturating_sub(1) {
            if (w[i] == d) != (w[i + 1] == d) {
                return None;
            }
        }
        if w.len() > 2 * e {
            return None;
        }
        let _ = start;
        Some(w)
    }

    fn words_from(p: &Presentation, v: usize, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        let mut frontier = vec![(vec![], v)];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (w, at) in &frontier {
                for a in 0..p.num_arrows() {
                    if p.source(a) == *at {
                        let mut w2: Vec<usize> = w.clone();
                        w2.push(a);
                        next.push((w2.clone(), p.target(a)));
                        out.push(w2);
                    }
                }
            }
            frontier = next;
        }
        out
    }

    #[test]
    fn arrows_and_relations_for_e3() {
        let p = Presentation::new(3).unwrap();
        assert_eq!(p.num_arrows(), 4);
        let names: Vec<String> = p.relations().iter().map(|r| p.relation_name(r)).collect();
        assert!(names.contains(&"a2*a1*a3*a2*a1*a3 = d*d".to_string()));
        assert!(names.contains(&"a3*d = 0".to_string()));
        assert!(names.contains(&"d*a2 = 0".to_string()));
        for r in p.relations() {
            let lhs = p.word_normal_form(&r.lhs).unwrap();
            let rhs = r.rhs.as_ref().map(|w| p.word_normal_form(w).unwrap()).unwrap_or(None);
            assert_eq!(lhs, rhs, "{}", p.relation_name(r));
        }
    }

    #[test]
    fn e1_relations() {
        let p = Presentation::new(1).unwrap();
        assert_eq!(p.num_arrows(), 2);
        let names: Vec<String> = p.relations().iter().map(|r| p.relation_name(r)).collect();
        assert_eq!(names, vec!["a1*a1 = d*d", "a1*d = 0", "d*a1 = 0"]);
        let basis: Vec<String> = p.projective_basis(0).iter().map(|b| p.path_name(b)).collect();
        assert_eq!(basis, vec!["e1", "a1", "d", "a1*a1"]);
        assert_eq!(p.algebra_dim(), 4);
    }

    #[test]
    fn e2_arrows() {
        let p = Presentation::new(2).unwrap();
        assert_eq!((p.source(0), p.target(0)), (0, 1));
        assert_eq!((p.source(1), p.target(1)), (1, 0));
        assert_eq!((p.source(2), p.target(2)), (1, 1));
        assert_eq!(p.algebra_dim(), 11);
        assert!(matches!(Presentation::new(0), Err(PresentationError::InvalidE(0))));
    }

    #[test]
    fn normal_forms_for_e3() {
        let p = Presentation::new(3).unwrap();
        let d = p.delta();
        assert_eq!(p.normal_form(2, &[d, d]).unwrap(), Some(p.socle_path(2)));
        assert_eq!(p.normal_form(2, &[d, 2]).unwrap(), None);
        assert_eq!(p.normal_form(1, &[]).unwrap(), Some(p.trivial(1)));
        assert_eq!(p.normal_form(2, &[d, d, d]).unwrap(), None);
        assert!(matches!(
            p.normal_form(0, &[d]),
            Err(PresentationError::NotComposable(0))
        ));
        let dims: Vec<usize> = (0..3).map(|v| p.projective_dim(v)).collect();
        assert_eq!(dims, vec![7, 7, 8]);
    }

    #[test]
    fn projective_e_basis_is_e_c_delta_c2() {
        for e in 1..=5 {
            let p = Presentation::new(e).unwrap();
            let at_e = p.paths_between(e - 1, e - 1);
            let kinds: Vec<PathKind> = at_e.iter().map(|b| b.kind).collect();
            assert_eq!(
                kinds,
                vec![
                    PathKind::Alpha(0),
                    PathKind::Alpha(e),
                    PathKind::Delta,
                    PathKind::Alpha(2 * e)
                ]
            );
        }
    }

    #[test]
    fn path_basis_matches_enumeration_oracle() {
        for e in 1..=4 {
            let p = Presentation::new(e).unwrap();
            for v in 0..e {
                let mut seen = std::collections::BTreeSet::new();
                for w in words_from(&p, v, 2 * e + 2) {
                    let raw = raw_reduce(&p, v, &w);
                    let nf = p.normal_form(v, &w).unwrap();
                    assert_eq!(raw.is_some(), nf.is_some(), "e={e} v={v} word={w:?}");
                    if let (Some(r), Some(n)) = (raw, nf) {
                        // both reductions name the same path
                        assert_eq!(p.normal_form(v, &r).unwrap(), Some(n));
                        seen.insert(n);
                    }
                }
                assert_eq!(seen.len(), p.projective_dim(v));
            }
            let expected = if e == 1 { 4 } else { (e - 1) * (2 * e + 1) + 2 * e + 2 };
            assert_eq!(p.algebra_dim(), expected);
        }
    }

    #[test]
    fn socle_is_simple_and_matches_top() {
        for e in 1..=6 {
            let p = Presentation::new(e).unwrap();
            for v in 0..e {
                // socle = paths killed by every arrow
                let socle: Vec<BasisPath> = p
                    .projective_basis(v)
                    .into_iter()
                    .filter(|b| {
                        (0..p.num_arrows())
                            .filter(|&a| p.source(a) == p.end(b))
                            .all(|a| p.compose(a, b).is_none())
                    })
                    .collect();
                assert_eq!(socle, vec![p.socle_path(v)]);
                assert_eq!(p.end(&socle[0]), v);
                // Loewy length 2e+1
                let max_len = p.projective_basis(v).iter().map(|b| p.length(b)).max().unwrap();
                assert_eq!(max_len, 2 * e);
            }
        }
    }

    proptest! {
        #[test]
        fn normal_form_is_idempotent(e in 1usize..6, v_seed in 0usize..6, choices in proptest::collection::vec(0usize..2, 0..16)) {
            let p = Presentation::new(e).unwrap();
            let v = v_seed % e;
            let mut word = Vec::new();
            let mut at = v;
            for c in choices {
                let outs: Vec<usize> = (0..p.num_arrows()).filter(|&a| p.source(a) == at).collect();
                let a = outs[c % outs.len()];
                word.push(a);
                at = p.target(a);
            }
            let nf = p.normal_form(v, &word).unwrap();
            if let Some(b) = nf {
                let again = p.normal_form(v, &p.path_word(&b)).unwrap();
                prop_assert_eq!(again, Some(b));
                prop_assert_eq!(p.end(&b), at);
            }
        }
    }
}
