//! Text forms: ordinal expressions, formulas, stacks, operation expressions
//! and degree words.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*' nat)?
//! factor := 'w' ('^' factor)? | nat | '(' expr ')'
//! ```

use crate::degree_word::UPWord;
use crate::error::{Error, Result};
use crate::hopda::{OpAtom, OpExpr, Stack};
use crate::mso::{self, Formula};
use crate::ordinal::{add, mul_nat, Ordinal};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    /// Consumes `tok` if the input continues with it.
    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected '{tok}'"))
        }
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let digits: &str = {
            let r = self.rest();
            let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
            &r[..end]
        };
        if digits.is_empty() {
            return self.err("expected a natural number");
        }
        let v = digits.parse::<u64>().or_else(|_| self.err("number too large"))?;
        self.pos += digits.len();
        Ok(v)
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let r = self.rest();
        let end = r
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(r.len());
        if end == 0 || !r.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
            return self.err("expected an identifier");
        }
        self.pos += end;
        Ok(r[..end].to_string())
    }

    fn finish<T>(&mut self, v: T) -> Result<T> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(v)
        } else {
            self.err("unexpected trailing input")
        }
    }
}

pub fn parse_ordinal(text: &str) -> Result<Ordinal> {
    let mut c = Cursor::new(text);
    let v = ord_expr(&mut c)?;
    c.finish(v)
}

/// Canonical text, inverse to [`parse_ordinal`].
pub fn format_ordinal(a: &Ordinal) -> String {
    a.to_string()
}

fn ord_expr(c: &mut Cursor) -> Result<Ordinal> {
    let mut acc = ord_term(c)?;
    while c.eat("+") {
        acc = add(&acc, &ord_term(c)?);
    }
    Ok(acc)
}

fn ord_term(c: &mut Cursor) -> Result<Ordinal> {
    let f = ord_factor(c)?;
    if c.eat("*") {
        let k = c.nat()?;
        return Ok(mul_nat(&f, k));
    }
    Ok(f)
}

fn ord_factor(c: &mut Cursor) -> Result<Ordinal> {
    match c.peek() {
        Some('w') => {
            c.pos += 1;
            if c.eat("^") {
                Ok(Ordinal::omega_pow(ord_factor(c)?))
            } else {
                Ok(Ordinal::omega())
            }
        }
        Some('(') => {
            c.pos += 1;
            let e = ord_expr(c)?;
            c.expect(")")?;
            Ok(e)
        }
        Some(d) if d.is_ascii_digit() => Ok(Ordinal::nat(c.nat()?)),
        _ => c.err("expected 'w', a number or '('"),
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut c = Cursor::new(text);
    let f = formula(&mut c)?;
    c.finish(f)
}

fn formula(c: &mut Cursor) -> Result<Formula> {
    let lhs = disjunction(c)?;
    if c.eat("=>") {
        return Ok(mso::implies(lhs, formula(c)?));
    }
    Ok(lhs)
}

fn disjunction(c: &mut Cursor) -> Result<Formula> {
    let mut acc = conjunction(c)?;
    while c.eat("|") {
        acc = mso::or(acc, conjunction(c)?);
    }
    Ok(acc)
}

fn conjunction(c: &mut Cursor) -> Result<Formula> {
    let mut acc = unary(c)?;
    while c.eat("&") {
        acc = mso::and(acc, unary(c)?);
    }
    Ok(acc)
}

fn is_set_var(name: &str) -> bool {
    name.starts_with(|ch: char| ch.is_ascii_uppercase())
}

fn quantifier(c: &mut Cursor) -> Option<char> {
    c.skip_ws();
    let r = c.rest();
    let q = r.chars().next().filter(|&ch| ch == 'E' || ch == 'A')?;
    r[1..].starts_with(char::is_whitespace).then_some(q)
}

fn unary(c: &mut Cursor) -> Result<Formula> {
    if c.eat("~") {
        return Ok(mso::not(unary(c)?));
    }
    if let Some(q) = quantifier(c) {
        c.pos += 1;
        let infinite = q == 'E' && {
            let save = c.pos;
            let kw = c.eat("inf") && c.rest().starts_with(char::is_whitespace);
            if !kw {
                c.pos = save;
            }
            kw
        };
        let v = c.ident()?;
        c.expect(".")?;
        let body = formula(c)?;
        let set = is_set_var(&v);
        return Ok(match (q, set, infinite) {
            (_, false, true) => return c.err("'inf' applies to set variables"),
            ('E', true, true) => Formula::ExistsInfiniteSet(v, Box::new(body)),
            ('E', false, _) => mso::exists(&v, body),
            ('E', true, _) => mso::exists_set(&v, body),
            (_, false, _) => mso::forall(&v, body),
            (_, true, _) => mso::forall_set(&v, body),
        });
    }
    if c.eat("(") {
        let f = formula(c)?;
        c.expect(")")?;
        return Ok(f);
    }
    let x = c.ident()?;
    if is_set_var(&x) {
        return c.err(format!("'{x}' is a set variable, expected a vertex"));
    }
    if c.eat("->") {
        let y = c.ident()?;
        return Ok(mso::edge(&x, &y));
    }
    if c.eat("=") {
        let y = c.ident()?;
        return Ok(mso::eq(&x, &y));
    }
    c.skip_ws();
    if c.rest().starts_with("in") {
        c.pos += 2;
        let s = c.ident()?;
        if !is_set_var(&s) {
            return c.err(format!("'{s}' is not a set variable"));
        }
        return Ok(mso::in_set(&x, &s));
    }
    c.err("expected '->', '=' or 'in'")
}

pub fn parse_stack(text: &str) -> Result<Stack> {
    let mut c = Cursor::new(text);
    let s = stack(&mut c)?;
    if !s.is_well_formed() {
        return Err(Error::Syntax {
            pos: 0,
            msg: "mixed levels or empty list".into(),
        });
    }
    c.finish(s)
}

fn stack(c: &mut Cursor) -> Result<Stack> {
    if c.eat("[") {
        let mut xs = vec![stack(c)?];
        while c.eat(",") {
            xs.push(stack(c)?);
        }
        c.expect("]")?;
        Ok(Stack::Seq(xs))
    } else {
        Ok(Stack::Nat(c.nat()?))
    }
}

pub fn parse_op_expr(text: &str) -> Result<OpExpr> {
    let mut c = Cursor::new(text);
    let e = op_union(&mut c)?;
    c.finish(e)
}

fn op_union(c: &mut Cursor) -> Result<OpExpr> {
    let mut acc = op_concat(c)?;
    while c.eat("+") {
        acc = OpExpr::union(acc, op_concat(c)?);
    }
    Ok(acc)
}

fn op_concat(c: &mut Cursor) -> Result<OpExpr> {
    let mut acc = op_postfix(c)?;
    while c.eat(".") {
        acc = OpExpr::concat(acc, op_postfix(c)?);
    }
    Ok(acc)
}

fn op_postfix(c: &mut Cursor) -> Result<OpExpr> {
    let mut e = op_primary(c)?;
    loop {
        if c.eat("^+") {
            e = OpExpr::plus(e);
        } else if c.eat("*") {
            e = OpExpr::star(e);
        } else {
            return Ok(e);
        }
    }
}

fn op_primary(c: &mut Cursor) -> Result<OpExpr> {
    if c.eat("(") {
        let e = op_union(c)?;
        c.expect(")")?;
        return Ok(e);
    }
    let start = c.pos;
    let word = c.ident()?;
    let level = |s: &str| s.parse::<usize>().ok().filter(|&k| k >= 2);
    let atom = match word.as_str() {
        "push1" => OpAtom::Push1,
        "pop1" => OpAtom::Pop1,
        "id" => OpAtom::Id,
        w => match (w.strip_prefix("copy"), w.strip_prefix("pop")) {
            (Some(k), _) if level(k).is_some() => OpAtom::Copy(level(k).unwrap()),
            (_, Some(k)) if level(k).is_some() => OpAtom::PopK(level(k).unwrap()),
            _ => {
                c.pos = start;
                return c.err(format!("unknown operation '{w}'"));
            }
        },
    };
    Ok(OpExpr::atom(atom))
}

/// `1,2,2(2,1)^w`, its compact form `122(21)^w`, or a finite word.
pub fn parse_word(text: &str) -> Result<UPWord> {
    let t: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
    let letters = |s: &str, offset: usize| -> Result<Vec<u32>> {
        if s.is_empty() {
            return Ok(Vec::new());
        }
        let parts: Vec<&str> = if s.contains(',') {
            s.split(',').collect()
        } else {
            s.split("").filter(|p| !p.is_empty()).collect()
        };
        parts
            .iter()
            .map(|p| {
                p.parse::<u32>().map_err(|_| Error::Syntax {
                    pos: offset,
                    msg: format!("bad letter '{p}'"),
                })
            })
            .collect()
    };
    match t.find('(') {
        None => Ok(UPWord::finite(letters(&t, 0)?)),
        Some(i) => {
            let body = t[i + 1..].strip_suffix(")^w").ok_or(Error::Syntax {
                pos: t.len(),
                msg: "expected ')^w' at the end".into(),
            })?;
            let period = letters(body, i + 1)?;
            if period.is_empty() {
                return Err(Error::Syntax {
                    pos: i + 1,
                    msg: "empty period".into(),
                });
            }
            Ok(UPWord::periodic(letters(&t[..i], 0)?, period))
        }
    }
}
