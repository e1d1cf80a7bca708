//! Ring expressions over named generators and their evaluation.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;

use super::ring::{RingDescriptor, RingElem};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Gen(String),
    Int(BigInt),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn gen(name: &str) -> Expr {
        Expr::Gen(name.to_string())
    }

    pub fn int(n: i64) -> Expr {
        Expr::Int(BigInt::from(n))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }
}

/// Evaluates `expr` in `ring`. Integer literals map through ℤ → R.
pub fn ring_eval(
    expr: &Expr,
    ring: &RingDescriptor,
    assignment: &BTreeMap<String, RingElem>,
) -> Result<RingElem> {
    for v in assignment.values() {
        ring.check(v)?;
    }
    eval_checked(expr, ring, assignment)
}

fn eval_checked(
    expr: &Expr,
    ring: &RingDescriptor,
    assignment: &BTreeMap<String, RingElem>,
) -> Result<RingElem> {
    Ok(match expr {
        Expr::Gen(name) => assignment
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnboundGenerator(name.clone()))?,
        Expr::Int(n) => ring.from_int(n),
        Expr::Add(a, b) => ring.add(
            &eval_checked(a, ring, assignment)?,
            &eval_checked(b, ring, assignment)?,
        ),
        Expr::Sub(a, b) => ring.sub(
            &eval_checked(a, ring, assignment)?,
            &eval_checked(b, ring, assignment)?,
        ),
        Expr::Mul(a, b) => ring.mul(
            &eval_checked(a, ring, assignment)?,
            &eval_checked(b, ring, assignment)?,
        ),
        Expr::Neg(a) => ring.neg(&eval_checked(a, ring, assignment)?),
    })
}

/// Binds every generator of a free ring to itself.
pub fn free_assignment(ring: &RingDescriptor) -> Result<BTreeMap<String, RingElem>> {
    match ring {
        RingDescriptor::FreeNoncommutative { generators } => generators
            .iter()
            .map(|g| Ok((g.clone(), ring.generator(g)?)))
            .collect(),
        _ => Err(Error::UnsupportedRing(ring.name())),
    }
}

impl FromStr for Expr {
    type Err = Error;

    /// Grammar: `expr := term (('+'|'-') term)*`, `term := unary ('*' unary)*`,
    /// `unary := '-' unary | INT | IDENT | '(' expr ')'`.
    fn from_str(s: &str) -> Result<Expr> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::add(lhs, self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = Expr::mul(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::neg(self.unary()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(Expr::Int(digits.parse().expect("digits")))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(Expr::gen(name))
            }
            _ => Err(self.error("expected operand")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmod(n: u64) -> RingDescriptor {
        RingDescriptor::zmod(n).unwrap()
    }

    #[test]
    fn commutator_is_nonzero_in_free_ring() {
        let r = RingDescriptor::free(["x", "y"]).unwrap();
        let e: Expr = "x*y - y*x".parse().unwrap();
        let v = ring_eval(&e, &r, &free_assignment(&r).unwrap()).unwrap();
        assert!(!r.is_zero(&v));
    }

    #[test]
    fn modular_product_vanishes() {
        let e: Expr = "2*3".parse().unwrap();
        let v = ring_eval(&e, &zmod(6), &BTreeMap::new()).unwrap();
        assert_eq!(v, RingElem::Residue(0));
    }

    #[test]
    fn matrix_product_matches_textbook() {
        let r = RingDescriptor::matrix(zmod(3), 2).unwrap();
        let grid = |v: [u64; 4]| RingElem::Grid(v.iter().map(|&x| RingElem::Residue(x)).collect());
        let x = grid([1, 2, 0, 1]);
        let y = grid([2, 1, 1, 1]);
        let mut asg = BTreeMap::new();
        asg.insert("x".to_string(), x);
        asg.insert("y".to_string(), y);
        let v = ring_eval(&"x*y".parse().unwrap(), &r, &asg).unwrap();
        // [[1,2],[0,1]]·[[2,1],[1,1]] = [[4,3],[1,1]] ≡ [[1,0],[1,1]] mod 3
        assert_eq!(v, grid([1, 0, 1, 1]));
    }

    #[test]
    fn errors_on_unbound_and_mismatch() {
        let r = zmod(5);
        assert_eq!(
            ring_eval(&"x+1".parse().unwrap(), &r, &BTreeMap::new()),
            Err(Error::UnboundGenerator("x".into()))
        );
        let mut asg = BTreeMap::new();
        asg.insert("x".to_string(), RingElem::Residue(9));
        assert!(matches!(
            ring_eval(&"x".parse().unwrap(), &r, &asg),
            Err(Error::DescriptorMismatch(_))
        ));
    }

    #[test]
    fn parser_precedence_and_errors() {
        let r = RingDescriptor::free(["x", "y"]).unwrap();
        let asg = free_assignment(&r).unwrap();
        let a = ring_eval(&"-x*y + 2*(x - y)".parse().unwrap(), &r, &asg).unwrap();
        let b = ring_eval(&"2*x - 2*y - x*y".parse().unwrap(), &r, &asg).unwrap();
        assert_eq!(a, b);
        assert!("x +".parse::<Expr>().is_err());
        assert!("(x".parse::<Expr>().is_err());
        assert!("x y".parse::<Expr>().is_err());
    }
}
