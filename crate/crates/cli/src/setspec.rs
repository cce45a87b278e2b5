//! Inline set syntax:
//!
//! - `[lo,hi]`: interval
//! - `(x,y)`: single point
//! - `ball((x,y),r)`: closed ball
//! - `{(x,y),(x,y),...}`: convex hull of the listed points

use setbm::ConvexSet;

use crate::error::CliError;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> CliError {
        CliError::Config(format!("set {:?}: {what} at offset {}", self.src, self.pos))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), CliError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {token:?}")))
        }
    }

    fn number(&mut self) -> Result<f64, CliError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')))
            .unwrap_or(rest.len());
        let x = rest[..len].parse::<f64>().map_err(|_| self.err("expected a number"))?;
        if !x.is_finite() {
            return Err(self.err("number is not finite"));
        }
        self.pos += len;
        Ok(x)
    }

    fn point(&mut self) -> Result<Vec<f64>, CliError> {
        self.expect("(")?;
        let mut p = vec![self.number()?];
        while self.eat(",") {
            p.push(self.number()?);
        }
        self.expect(")")?;
        Ok(p)
    }

    fn set(&mut self) -> Result<ConvexSet, CliError> {
        self.skip_ws();
        let set = if self.eat("[") {
            let lo = self.number()?;
            self.expect(",")?;
            let hi = self.number()?;
            self.expect("]")?;
            ConvexSet::interval(lo, hi)?
        } else if self.eat("ball") {
            self.expect("(")?;
            let center = self.point()?;
            self.expect(",")?;
            let radius = self.number()?;
            self.expect(")")?;
            ConvexSet::ball(center, radius)?
        } else if self.eat("{") {
            let mut pts = vec![self.point()?];
            while self.eat(",") {
                pts.push(self.point()?);
            }
            self.expect("}")?;
            ConvexSet::polytope(pts)?
        } else if self.src[self.pos..].starts_with('(') {
            ConvexSet::point(self.point()?)?
        } else {
            return Err(self.err("expected '[', '(', '{' or 'ball'"));
        };
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(self.err("trailing input"));
        }
        Ok(set)
    }
}

pub fn parse_set(src: &str) -> Result<ConvexSet, CliError> {
    Parser { src, pos: 0 }.set()
}
