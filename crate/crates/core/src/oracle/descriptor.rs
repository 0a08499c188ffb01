//! Operator descriptors: linear combinations of words in `z`, `d`, `v`, `p`.
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := [number ['/' number] ['*']] product
//! product := factor (['*'] factor)*
//! factor  := '1' | letter ['^' int] | 'sym(' product ')'
//! letter  := 'z' | 'd' | 'v' | 'p'
//! ```
//!
//! `d` is `d/dz`; `v` and `p` are `-i sqrt(2) d/dz` (normalized units).
//! `sym(...)` averages over the distinct orderings of its letters, e.g.
//! `sym(v^2 z) = (v v z + v z v + z v v)/3`.

use std::collections::BTreeSet;

use crate::error::{BouncerError, Result};

/// `re + i im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ONE: Complex = Complex { re: 1.0, im: 0.0 };

    pub fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    pub fn mul(self, o: Complex) -> Complex {
        Complex {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    pub fn scale(self, s: f64) -> Complex {
        Complex {
            re: self.re * s,
            im: self.im * s,
        }
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

/// Multiplication by `z` or differentiation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Letter {
    Z,
    D,
}

/// `coefficient * word`, the word acting right to left.
#[derive(Debug, Clone, PartialEq)]
pub struct Word {
    pub coefficient: Complex,
    pub letters: Vec<Letter>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Symbol {
    Z,
    D,
    V,
}

impl Symbol {
    fn expand(self) -> (Complex, Letter) {
        match self {
            Symbol::Z => (Complex::ONE, Letter::Z),
            Symbol::D => (Complex::ONE, Letter::D),
            Symbol::V => (
                Complex {
                    re: 0.0,
                    im: -std::f64::consts::SQRT_2,
                },
                Letter::D,
            ),
        }
    }
}

/// A product: list of alternatives (from `sym`) with weights.
type Product = Vec<(f64, Vec<Symbol>)>;

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> BouncerError {
        BouncerError::Config(format!("descriptor `{}`: {what} at offset {}", self.src, self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Option<f64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].is_ascii_digit() || self.chars[self.pos] == '.') {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().ok()
    }

    fn exponent(&mut self) -> Result<usize> {
        if self.eat('^') {
            let e = self.number().ok_or_else(|| self.err("expected exponent"))?;
            if e.fract() != 0.0 || e < 0.0 {
                return Err(self.err("exponent must be a non-negative integer"));
            }
            Ok(e as usize)
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<Option<Product>> {
        let c = match self.peek() {
            Some(c) => c,
            None => return Ok(None),
        };
        let symbol = match c {
            'z' => Symbol::Z,
            'd' => Symbol::D,
            'v' | 'p' => Symbol::V,
            's' => {
                if !self.chars[self.pos..].iter().collect::<String>().starts_with("sym(") {
                    return Err(self.err("unknown factor"));
                }
                self.pos += 4;
                let inner = self.product()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                return Ok(Some(symmetrize(&inner)));
            }
            '1' => {
                self.pos += 1;
                return Ok(Some(vec![(1.0, Vec::new())]));
            }
            _ => return Ok(None),
        };
        self.pos += 1;
        let e = self.exponent()?;
        Ok(Some(vec![(1.0, vec![symbol; e])]))
    }

    fn product(&mut self) -> Result<Product> {
        let mut acc: Product = vec![(1.0, Vec::new())];
        let mut any = false;
        loop {
            self.eat('*');
            match self.factor()? {
                Some(f) => {
                    any = true;
                    acc = concat(&acc, &f);
                }
                None => break,
            }
        }
        if !any {
            return Err(self.err("expected an operator factor"));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<(f64, Product)> {
        let mut coefficient = 1.0;
        if let Some(num) = self.number() {
            coefficient = num;
            if self.eat('/') {
                let den = self.number().ok_or_else(|| self.err("expected denominator"))?;
                coefficient /= den;
            }
            self.eat('*');
            // A bare number is a multiple of the identity.
            if matches!(self.peek(), None | Some('+') | Some('-')) {
                return Ok((coefficient, vec![(1.0, Vec::new())]));
            }
        }
        Ok((coefficient, self.product()?))
    }

    fn expr(&mut self) -> Result<Vec<(f64, Product)>> {
        let mut terms = Vec::new();
        let mut sign = if self.eat('-') { -1.0 } else { 1.0 };
        loop {
            let (c, p) = self.term()?;
            terms.push((sign * c, p));
            if self.eat('+') {
                sign = 1.0;
            } else if self.eat('-') {
                sign = -1.0;
            } else {
                break;
            }
        }
        if self.peek().is_some() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(terms)
    }
}

fn concat(a: &Product, b: &Product) -> Product {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (wa, sa) in a {
        for (wb, sb) in b {
            let mut s = sa.clone();
            s.extend_from_slice(sb);
            out.push((wa * wb, s));
        }
    }
    out
}

/// Average over distinct orderings of every alternative's symbols.
fn symmetrize(p: &Product) -> Product {
    let mut out = Vec::new();
    for (w, symbols) in p {
        let mut perms = BTreeSet::new();
        permutations(symbols, &mut Vec::new(), &mut vec![false; symbols.len()], &mut perms);
        let share = w / perms.len() as f64;
        out.extend(perms.into_iter().map(|s| (share, s)));
    }
    out
}

fn permutations(
    symbols: &[Symbol],
    current: &mut Vec<Symbol>,
    used: &mut Vec<bool>,
    out: &mut BTreeSet<Vec<Symbol>>,
) {
    if current.len() == symbols.len() {
        out.insert(current.clone());
        return;
    }
    for i in 0..symbols.len() {
        if !used[i] {
            used[i] = true;
            current.push(symbols[i]);
            permutations(symbols, current, used, out);
            current.pop();
            used[i] = false;
        }
    }
}

/// Parse into a flat list of words.
pub fn parse(descriptor: &str) -> Result<Vec<Word>> {
    let mut parser = Parser {
        src: descriptor,
        chars: descriptor.chars().collect(),
        pos: 0,
    };
    let terms = parser.expr()?;
    let mut words = Vec::new();
    for (c, product) in terms {
        for (w, symbols) in product {
            let mut coefficient = Complex::real(c * w);
            let mut letters = Vec::with_capacity(symbols.len());
            for s in symbols {
                let (phase, letter) = s.expand();
                coefficient = coefficient.mul(phase);
                letters.push(letter);
            }
            words.push(Word { coefficient, letters });
        }
    }
    Ok(words)
}
