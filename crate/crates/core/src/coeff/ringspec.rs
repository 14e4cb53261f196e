//! Parser for ring specs of the form `k[t1,t2]/(g1,...)`.
//!
//! Inside the generator list, parenthesised comma lists are ideals, so
//! `(t1,t2)*(t1^2-t2^2,t1t2)` is a product ideal and `(t1,t2)^3` a power.
//! Sums and negation are only defined on principal pieces. Adjacent
//! variable names multiply (`t1t2`).

use std::collections::BTreeMap;

use super::field::Fp;
use super::CoeffError;

/// Exponent vector -> coefficient.
pub type Poly = BTreeMap<Vec<u32>, u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    pub vars: Vec<String>,
    pub generators: Vec<Poly>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    K,
    Ident(String),
    Int(u64),
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Slash,
    Plus,
    Minus,
    Star,
    Caret,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, CoeffError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '[' => out.push((start, Tok::LBrack)),
            ']' => out.push((start, Tok::RBrack)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            ',' => out.push((start, Tok::Comma)),
            '/' => out.push((start, Tok::Slash)),
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v = src[start..i].parse().map_err(|_| parse_err(start, "integer literal"))?;
                out.push((start, Tok::Int(v)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &src[start..i];
                if word == "k" && out.is_empty() {
                    out.push((start, Tok::K));
                } else {
                    out.push((start, Tok::Ident(word.to_string())));
                }
                continue;
            }
            _ => {
                return Err(parse_err(
                    start,
                    "one of k [ ] ( ) , / + - * ^, a variable or an integer",
                ))
            }
        }
        i += 1;
    }
    Ok(out)
}

fn parse_err(pos: usize, expected: &str) -> CoeffError {
    CoeffError::Parse {
        pos,
        expected: expected.to_string(),
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    vars: Vec<String>,
    field: &'a Fp,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), CoeffError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(parse_err(self.pos(), what))
        }
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn constant(&self, c: u64) -> Poly {
        let mut p = Poly::new();
        let v = self.field.reduce((c % self.field.p() as u64) as i64);
        if v != 0 {
            p.insert(vec![0; self.nvars()], v);
        }
        p
    }

    fn header(&mut self) -> Result<(), CoeffError> {
        self.expect(Tok::K, "'k'")?;
        self.expect(Tok::LBrack, "'['")?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Ident(name)) => {
                    if self.vars.contains(&name) {
                        return Err(parse_err(self.pos(), "a new variable name"));
                    }
                    self.vars.push(name);
                    self.at += 1;
                }
                _ => return Err(parse_err(self.pos(), "variable name")),
            }
            match self.peek() {
                Some(Tok::Comma) => self.at += 1,
                Some(Tok::RBrack) => {
                    self.at += 1;
                    break;
                }
                _ => return Err(parse_err(self.pos(), "',' or ']'")),
            }
        }
        if self.vars.len() > 2 {
            return Err(parse_err(0, "at most two variables"));
        }
        Ok(())
    }

    /// item := ['-'] term (('+'|'-') term)*
    fn item(&mut self) -> Result<Vec<Poly>, CoeffError> {
        let start = self.pos();
        let mut negate = false;
        if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = vec![self
                .principal(&acc, start)?
                .iter()
                .map(|(k, &v)| (k.clone(), self.field.neg(v)))
                .collect()];
        }
        loop {
            let sign = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            let pos = self.pos();
            self.at += 1;
            let rhs = self.term()?;
            let a = self.principal(&acc, pos)?.clone();
            let b = self.principal(&rhs, pos)?;
            let mut sum = a;
            for (k, &v) in b {
                let v = if sign { self.field.neg(v) } else { v };
                let e = sum.entry(k.clone()).or_insert(0);
                *e = self.field.add(*e, v);
            }
            sum.retain(|_, v| *v != 0);
            acc = vec![sum];
        }
        Ok(acc)
    }

    fn principal<'b>(&self, ideal: &'b [Poly], pos: usize) -> Result<&'b Poly, CoeffError> {
        if ideal.len() == 1 {
            Ok(&ideal[0])
        } else {
            Err(parse_err(
                pos,
                "a single polynomial (sums of non-principal ideals are not defined)",
            ))
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Int(_)) | Some(Tok::LParen))
    }

    /// term := factor (['*'] factor)*
    fn term(&mut self) -> Result<Vec<Poly>, CoeffError> {
        let mut acc = self.factor()?;
        loop {
            if self.peek() == Some(&Tok::Star) {
                self.at += 1;
            } else if !self.starts_factor() {
                break;
            }
            let rhs = self.factor()?;
            acc = ideal_product(self.field, &acc, &rhs);
        }
        Ok(acc)
    }

    /// factor := atom ['^' int]
    fn factor(&mut self) -> Result<Vec<Poly>, CoeffError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.at += 1;
            let n = match self.peek() {
                Some(Tok::Int(n)) => *n,
                _ => return Err(parse_err(self.pos(), "exponent")),
            };
            self.at += 1;
            let mut acc = vec![self.constant(1)];
            for _ in 0..n {
                acc = ideal_product(self.field, &acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Vec<Poly>, CoeffError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(c)) => {
                self.at += 1;
                Ok(vec![self.constant(c)])
            }
            Some(Tok::Ident(word)) => {
                self.at += 1;
                let exps = self.split_monomial(&word, pos)?;
                let mut p = Poly::new();
                p.insert(exps, 1);
                Ok(vec![p])
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let mut gens = self.item()?;
                while self.peek() == Some(&Tok::Comma) {
                    self.at += 1;
                    gens.extend(self.item()?);
                }
                self.expect(Tok::RParen, "')' or ','")?;
                Ok(gens)
            }
            _ => Err(parse_err(pos, "integer, variable or '('")),
        }
    }

    /// Split a run of letters like `t1t2t1` into known variable names.
    fn split_monomial(&self, word: &str, pos: usize) -> Result<Vec<u32>, CoeffError> {
        let mut exps = vec![0u32; self.nvars()];
        let mut rest = word;
        while !rest.is_empty() {
            let best = self
                .vars
                .iter()
                .enumerate()
                .filter(|(_, v)| rest.starts_with(v.as_str()))
                .max_by_key(|(_, v)| v.len());
            match best {
                Some((i, v)) => {
                    exps[i] += 1;
                    rest = &rest[v.len()..];
                }
                None => {
                    return Err(parse_err(
                        pos + word.len() - rest.len(),
                        &format!("one of the variables {:?}", self.vars),
                    ))
                }
            }
        }
        Ok(exps)
    }
}

fn ideal_product(field: &Fp, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(poly_mul(field, x, y));
        }
    }
    out
}

pub fn poly_mul(field: &Fp, x: &Poly, y: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ex, &cx) in x {
        for (ey, &cy) in y {
            let e: Vec<u32> = ex.iter().zip(ey).map(|(a, b)| a + b).collect();
            let slot = out.entry(e).or_insert(0);
            *slot = field.mul_add(*slot, cx, cy);
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Parse a ring spec. The bare string `k` denotes the residue field itself.
pub fn parse_ring_spec(src: &str, field: &Fp) -> Result<RingPresentation, CoeffError> {
    let trimmed = src.trim();
    if trimmed == "k" {
        return Ok(RingPresentation {
            vars: Vec::new(),
            generators: Vec::new(),
        });
    }
    let toks = lex(src)?;
    let mut parser = Parser {
        toks,
        at: 0,
        end: src.len(),
        vars: Vec::new(),
        field,
    };
    parser.header()?;
    parser.expect(Tok::Slash, "'/'")?;
    let generators = parser.factor()?;
    if parser.at != parser.toks.len() {
        return Err(parse_err(parser.pos(), "end of ring spec"));
    }
    Ok(RingPresentation {
        vars: parser.vars,
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    #[test]
    fn dual_numbers() {
        let r = parse_ring_spec("k[t]/(t^2)", &f5()).unwrap();
        assert_eq!(r.vars, vec!["t"]);
        assert_eq!(r.generators.len(), 1);
        assert_eq!(r.generators[0].get(&vec![2]), Some(&1));
    }

    #[test]
    fn juxtaposed_variables_multiply() {
        let r = parse_ring_spec("k[t1,t2]/(t1^2-t2^2,t1t2)", &f5()).unwrap();
        assert_eq!(r.generators.len(), 2);
        assert_eq!(r.generators[1].get(&vec![1, 1]), Some(&1));
        assert_eq!(r.generators[0].get(&vec![0, 2]), Some(&4));
    }

    #[test]
    fn product_ideal_expands() {
        let r = parse_ring_spec("k[t1,t2]/((t1,t2)*(t1^2-t2^2,t1t2))", &f5()).unwrap();
        assert_eq!(r.generators.len(), 4);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_ring_spec("k[t]/(t^2+s)", &f5()) {
            Err(CoeffError::Parse { pos, .. }) => assert_eq!(pos, 10),
            other => panic!("{other:?}"),
        }
        assert!(parse_ring_spec("k[t]/((t,t^2)+t)", &f5()).is_err());
        assert!(parse_ring_spec("k[t](t)", &f5()).is_err());
    }
}
