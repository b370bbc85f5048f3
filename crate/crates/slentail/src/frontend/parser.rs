use std::collections::BTreeSet;

use super::ast::{EntailmentQuery, InductiveSystem, Predicate, QuerySide, SidFile};
use crate::slcore::{Formula, PointsTo, PredicateCall, PureAtom, SpatialAtom, Var};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Defines,
    Bar,
    Turnstile,
    Semi,
    Exists,
    Dot,
    Arrow,
    Star,
    Amp,
    Eq,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, Error> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let adv = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            adv(1, &mut i, &mut col);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let three: String = chars[i..(i + 3).min(chars.len())].iter().collect();
        let (tok, n) = if three == "::=" {
            (Tok::Defines, 3)
        } else if two == "|-" {
            (Tok::Turnstile, 2)
        } else if two == "->" {
            (Tok::Arrow, 2)
        } else if two == "\\E" {
            (Tok::Exists, 2)
        } else {
            match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                '|' => (Tok::Bar, 1),
                ';' => (Tok::Semi, 1),
                '.' => (Tok::Dot, 1),
                '*' => (Tok::Star, 1),
                '&' => (Tok::Amp, 1),
                '=' => (Tok::Eq, 1),
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut j = i;
                    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                        j += 1;
                    }
                    (Tok::Ident(chars[i..j].iter().collect()), j - i)
                }
                other => {
                    return Err(Error::Syntax { line, col, msg: format!("unexpected character `{other}`") });
                }
            }
        };
        adv(n, &mut i, &mut col);
        out.push(Token { tok, line: start.0, col: start.1 });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
    /// Call sites with their source coordinates, resolved after parsing.
    calls: Vec<(String, usize, usize, usize)>,
}

enum Atom {
    Spatial(SpatialAtom),
    Call(PredicateCall),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.line, t.col)).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, Error> {
        let (line, col) = self.here();
        Err(Error::Syntax { line, col, msg: msg.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), Error> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String, Error> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn var(&mut self) -> Result<Var, Error> {
        let name = self.ident()?;
        if name == "emp" || name == "entail" {
            return self.err(format!("`{name}` is reserved"));
        }
        Ok(Var::named(&name))
    }

    fn vars(&mut self) -> Result<Vec<Var>, Error> {
        let mut out = vec![self.var()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            out.push(self.var()?);
        }
        Ok(out)
    }

    fn paren_vars(&mut self, allow_empty: bool) -> Result<Vec<Var>, Error> {
        self.expect(Tok::LParen, "`(`")?;
        if allow_empty && self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            return Ok(Vec::new());
        }
        let vs = self.vars()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(vs)
    }

    fn atom(&mut self) -> Result<Atom, Error> {
        let (line, col) = self.here();
        let name = self.ident()?;
        if name == "emp" {
            return Ok(Atom::Spatial(SpatialAtom::Emp));
        }
        match self.peek() {
            Some(Tok::Arrow) => {
                if name == "nil" {
                    return self.err("nil cannot be allocated");
                }
                self.pos += 1;
                let targets = self.paren_vars(false)?;
                Ok(Atom::Spatial(SpatialAtom::PointsTo(PointsTo { source: Var::named(&name), targets })))
            }
            Some(Tok::LParen) => {
                let args = self.paren_vars(true)?;
                self.calls.push((name.clone(), args.len(), line, col));
                Ok(Atom::Call(PredicateCall::new(&name, args)))
            }
            _ => self.err("expected `->` or `(` after identifier"),
        }
    }

    fn rule(&mut self) -> Result<Formula, Error> {
        let mut f = Formula::default();
        if self.peek() == Some(&Tok::Exists) {
            self.pos += 1;
            f.existentials = self.vars()?;
            self.expect(Tok::Dot, "`.`")?;
        }
        loop {
            match self.atom()? {
                Atom::Spatial(a) => f.spatial.push(a),
                Atom::Call(c) => f.calls.push(c),
            }
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let lhs = self.var()?;
            self.expect(Tok::Eq, "`=`")?;
            let rhs = self.var()?;
            f.pure.push(PureAtom::new(lhs, rhs));
        }
        if f.spatial.len() > 1 {
            f.spatial.retain(|a| *a != SpatialAtom::Emp);
        }
        Ok(f)
    }

    fn predicate(&mut self, name: String) -> Result<Predicate, Error> {
        let formals = self.paren_vars(true)?;
        self.expect(Tok::Defines, "`::=`")?;
        let mut rules = vec![self.rule()?];
        while self.peek() == Some(&Tok::Bar) {
            self.pos += 1;
            rules.push(self.rule()?);
        }
        self.expect(Tok::Semi, "`;`")?;
        Ok(Predicate::new(&name, formals, rules))
    }

    fn side(&mut self) -> Result<QuerySide, Error> {
        let f = self.rule()?;
        if f.existentials.is_empty() && f.spatial.is_empty() && f.pure.is_empty() && f.calls.len() == 1 {
            Ok(QuerySide::Call(f.calls.into_iter().next().unwrap()))
        } else {
            Ok(QuerySide::Formula(f))
        }
    }
}

/// Parses a `.sid` file: predicate definitions and an optional query.
pub fn parse_file(text: &str) -> Result<SidFile, Error> {
    let toks = lex(text)?;
    let lines: Vec<&str> = text.lines().collect();
    let end = (lines.len().max(1), lines.last().map_or(1, |l| l.chars().count() + 1));
    let mut p = Parser { toks, pos: 0, end, calls: Vec::new() };
    let mut preds: Vec<Predicate> = Vec::new();
    let mut query = None;
    let mut decl: Vec<(String, usize, usize)> = Vec::new();
    while p.peek().is_some() {
        let (line, col) = p.here();
        let name = p.ident()?;
        if name == "entail" {
            if query.is_some() {
                return p.err("more than one query");
            }
            let lhs = p.side()?;
            p.expect(Tok::Turnstile, "`|-`")?;
            let rhs = p.side()?;
            p.expect(Tok::Semi, "`;`")?;
            query = Some(EntailmentQuery { lhs, rhs });
            continue;
        }
        if query.is_some() {
            return p.err("definitions must precede the query");
        }
        if name == "nil" || name == "emp" {
            return p.err(format!("`{name}` is reserved"));
        }
        if preds.iter().any(|q| *q.name == name) {
            return Err(Error::Syntax { line, col, msg: format!("predicate `{name}` defined twice") });
        }
        decl.push((name.clone(), line, col));
        preds.push(p.predicate(name)?);
    }
    if preds.is_empty() {
        return p.err("expected at least one predicate definition");
    }
    for (name, n, line, col) in &p.calls {
        match preds.iter().find(|q| &*q.name == name) {
            None => return Err(Error::UnknownPredicate { name: name.clone(), line: *line, col: *col }),
            Some(q) if q.arity() != *n => {
                return Err(Error::ArityMismatch {
                    name: name.clone(),
                    expected: q.arity(),
                    found: *n,
                    line: *line,
                    col: *col,
                })
            }
            _ => {}
        }
    }
    for (pred, (_, line, col)) in preds.iter().zip(decl.iter()) {
        check_scopes(pred, *line, *col)?;
    }
    Ok(SidFile { system: InductiveSystem::new(preds), query })
}

/// Parses a file that must not contain a query.
pub fn parse_system(text: &str) -> Result<InductiveSystem, Error> {
    let f = parse_file(text)?;
    if f.query.is_some() {
        return Err(Error::Syntax { line: 1, col: 1, msg: "unexpected query in system file".into() });
    }
    Ok(f.system)
}

/// Parses a single query side, for command-line overrides.
pub fn parse_side(text: &str) -> Result<QuerySide, Error> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: (1, text.len() + 1), calls: Vec::new() };
    let side = p.side()?;
    if p.peek().is_some() {
        return p.err("trailing input after formula");
    }
    Ok(side)
}

fn check_scopes(pred: &Predicate, line: usize, col: usize) -> Result<(), Error> {
    let formals: BTreeSet<&Var> = pred.formals.iter().collect();
    if formals.len() != pred.formals.len() || formals.contains(&Var::Nil) {
        return Err(Error::Syntax {
            line,
            col,
            msg: format!("formals of `{}` must be distinct non-nil names", pred.name),
        });
    }
    for (j, r) in pred.rules.iter().enumerate() {
        let ex: BTreeSet<&Var> = r.existentials.iter().collect();
        if ex.len() != r.existentials.len() || ex.iter().any(|v| formals.contains(v) || v.is_nil()) {
            return Err(Error::Syntax {
                line,
                col,
                msg: format!("rule {} of `{}`: existentials must be fresh and distinct", j + 1, pred.name),
            });
        }
        for v in r.free_vars() {
            if !formals.contains(&v) {
                return Err(Error::Syntax {
                    line,
                    col,
                    msg: format!("rule {} of `{}`: variable `{v}` is not bound", j + 1, pred.name),
                });
            }
        }
    }
    Ok(())
}
