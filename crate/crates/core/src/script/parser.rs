use std::collections::BTreeSet;

use super::lexer::{lex, Spanned, Tok};
use super::{ConfigFlags, Decl, Item, ItemKind, ParseError, Script};
use crate::formula::{BinOp, Formula, Quantifier, Sequent, Slot};
use crate::kernel::{Params, ProofNode, Rule};
use crate::registry::DomainRecord;
use crate::term::{CorrelationTag, Index, Prob, Term};

const KEYWORDS: [&str; 5] = ["forall", "exists", "in", "join_i", "join_o"];

/// Recursive-descent parser over the tokens of one line, with
/// backtracking and a furthest-failure expected set.
struct Exprs {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
    end_col: usize,
    furthest: usize,
    expected: BTreeSet<String>,
}

type R<T> = Result<T, ()>;

impl Exprs {
    fn new(text: &str, line: usize, col0: usize) -> Result<Self, ParseError> {
        let toks = lex(text, col0).map_err(|e| ParseError {
            line,
            col: e.col,
            expected: vec!["a token".into()],
            found: format!("`{}`", e.found),
        })?;
        Ok(Exprs {
            toks,
            pos: 0,
            line,
            end_col: col0 + text.chars().count(),
            furthest: 0,
            expected: BTreeSet::new(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn fail<T>(&mut self, what: &str) -> R<T> {
        if self.pos > self.furthest {
            self.furthest = self.pos;
            self.expected.clear();
        }
        if self.pos == self.furthest {
            self.expected.insert(what.to_string());
        }
        Err(())
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> R<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.fail(&format!("`{}`", tok.text()))
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == word) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, word: &str) -> R<()> {
        if self.keyword(word) {
            Ok(())
        } else {
            self.fail(&format!("`{word}`"))
        }
    }

    fn ident(&mut self, what: &str) -> R<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail(what),
        }
    }

    fn num(&mut self) -> R<u64> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => self.fail("a number"),
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.toks.len()
    }

    fn finish(&mut self) -> R<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.fail("end of line")
        }
    }

    fn error(&self) -> ParseError {
        let (col, found) = match self.toks.get(self.furthest) {
            Some(t) => (t.col, t.tok.to_string()),
            None => (self.end_col, "end of line".to_string()),
        };
        ParseError {
            line: self.line,
            col,
            expected: self.expected.iter().cloned().collect(),
            found,
        }
    }

    /// Run `f`, restoring the position on failure.
    fn attempt<T>(&mut self, f: impl FnOnce(&mut Self) -> R<T>) -> R<T> {
        let save = self.pos;
        let out = f(self);
        if out.is_err() {
            self.pos = save;
        }
        out
    }

    fn term(&mut self) -> R<Term> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let label = self.ident("an outcome label")?;
                self.expect(Tok::Comma)?;
                let n = self.num()?;
                let d = if self.eat(&Tok::Slash) { self.num()? } else { 1 };
                self.expect(Tok::RParen)?;
                if d == 0 {
                    return self.fail("a nonzero denominator");
                }
                match Term::outcome(label, Prob::new(n, d)) {
                    Ok(t) => Ok(t),
                    Err(_) => self.fail("a probability in (0, 1]"),
                }
            }
            Some(Tok::Ident(_)) => {
                let name = self.ident("a term")?;
                Ok(name_term(name))
            }
            _ => self.fail("a term"),
        }
    }

    fn index(&mut self) -> R<Index> {
        match self.peek() {
            Some(Tok::Num(n)) if *n <= u8::MAX as u64 => {
                let n = *n as u8;
                self.pos += 1;
                Ok(Index::Const(n))
            }
            Some(Tok::Ident(s)) if starts_lower(s) && !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(Index::Var(s))
            }
            _ => self.fail("an index"),
        }
    }

    pub fn formula(&mut self) -> R<Formula> {
        let lhs = self.mid()?;
        let op = match self.peek() {
            Some(Tok::Arrow) => BinOp::Imp,
            Some(Tok::BackArrow) => BinOp::Excl,
            _ => return Ok(lhs),
        };
        self.pos += 1;
        let rhs = self.formula()?;
        Ok(Formula::binary(op, lhs, rhs))
    }

    fn mid(&mut self) -> R<Formula> {
        let mut lhs = self.conj()?;
        loop {
            let join = |tag| move |l, r| Formula::join(tag, l, r);
            let make: Box<dyn Fn(Formula, Formula) -> Formula> = match self.peek() {
                Some(Tok::Vee) => Box::new(|l, r| Formula::binary(BinOp::Or, l, r)),
                Some(Tok::Star) => Box::new(|l, r| Formula::binary(BinOp::Par, l, r)),
                Some(Tok::Ident(s)) if s == "join_i" => Box::new(join(CorrelationTag::Identical)),
                Some(Tok::Ident(s)) if s == "join_o" => Box::new(join(CorrelationTag::Opposite)),
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.conj()?;
            lhs = make(lhs, rhs);
        }
    }

    fn at_times(&self) -> bool {
        matches!(
            (self.peek(), self.peek_at(1), self.peek_at(2)),
            (Some(Tok::LParen), Some(Tok::Ident(x)), Some(Tok::RParen)) if x == "x"
        )
    }

    fn conj(&mut self) -> R<Formula> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.peek() == Some(&Tok::Amp) {
                self.pos += 1;
                BinOp::And
            } else if self.at_times() {
                self.pos += 3;
                BinOp::Times
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Formula::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> R<Formula> {
        let q = if self.keyword("forall") {
            Quantifier::Forall
        } else if self.keyword("exists") {
            Quantifier::Exists
        } else {
            return self.primary();
        };
        let var = self.ident("a bound variable")?;
        if !starts_lower(&var) {
            return self.fail("a lowercase variable");
        }
        self.expect_keyword("in")?;
        let domain = self.ident("a domain name")?;
        self.expect(Tok::Dot)?;
        let body = self.formula()?;
        Ok(Formula::quant(q, var, domain, body))
    }

    /// After a term: `in D`, `= t` or `/= t`.
    fn relation(&mut self, t: Term) -> R<Formula> {
        if self.keyword("in") {
            let d = self.ident("a domain name")?;
            return Ok(Formula::member(t, d));
        }
        if self.eat(&Tok::Eq) {
            return Ok(Formula::Eq(t, self.term()?));
        }
        if self.eat(&Tok::Neq) {
            return Ok(Formula::Neq(t, self.term()?));
        }
        self.fail("`in`, `=` or `/=`")
    }

    fn index_rel(&mut self) -> R<Formula> {
        let left = self.index()?;
        let tag = match self.peek() {
            Some(Tok::Tilde(t)) => *t,
            _ => return self.fail("`~i` or `~o`"),
        };
        self.pos += 1;
        let right = self.index()?;
        Ok(Formula::IndexRel { left, tag, right })
    }

    fn primary(&mut self) -> R<Formula> {
        match self.peek() {
            Some(Tok::LParen) => {
                if let Ok(f) = self.attempt(|p| {
                    let t = p.term()?;
                    if !t.is_closed() || matches!(t, Term::Const(_)) {
                        return p.fail("an outcome");
                    }
                    p.relation(t)
                }) {
                    return Ok(f);
                }
                if let Ok(f) = self.attempt(|p| {
                    p.expect(Tok::LParen)?;
                    let t = p.term()?;
                    p.expect_keyword("in")?;
                    let d = p.ident("a domain name")?;
                    p.expect(Tok::RParen)?;
                    p.expect(Tok::Caret)?;
                    let dual = p.ident("a duality name")?;
                    Ok(Formula::dual_member(t, d, dual))
                }) {
                    return Ok(f);
                }
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Num(_)) => self.index_rel(),
            Some(Tok::Ident(_)) => {
                if matches!(self.peek_at(1), Some(Tok::Tilde(_))) {
                    return self.index_rel();
                }
                if matches!(self.peek_at(1), Some(Tok::Eq | Tok::Neq))
                    || matches!(self.peek_at(1), Some(Tok::Ident(s)) if s == "in")
                {
                    let t = self.term()?;
                    return self.relation(t);
                }
                let name_col = self.toks[self.pos].col;
                let name = self.ident("a formula")?;
                let (pred, index) = split_index(&name);
                let adjacent = self
                    .toks
                    .get(self.pos)
                    .is_some_and(|t| t.tok == Tok::LParen && t.col == name_col + name.chars().count());
                let mut args = Vec::new();
                if adjacent {
                    self.pos += 1;
                    loop {
                        args.push(self.term()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(Tok::RParen)?;
                }
                Ok(Formula::Atom { pred, index, args })
            }
            _ => self.fail("a formula"),
        }
    }

    fn slot(&mut self) -> R<Slot> {
        let first = self.formula()?;
        match self.peek() {
            Some(Tok::CorrComma(tag)) => {
                let tag = *tag;
                self.pos += 1;
                let second = self.formula()?;
                Ok(Slot::corr(first, tag, second))
            }
            _ => Ok(Slot::Single(first)),
        }
    }

    fn slots(&mut self, stop: Option<&Tok>) -> R<Vec<Slot>> {
        let mut out = Vec::new();
        if self.peek() == stop || (stop.is_none() && self.at_end()) {
            return Ok(out);
        }
        loop {
            out.push(self.slot()?);
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    fn sequent(&mut self) -> R<Sequent> {
        let left = self.slots(Some(&Tok::Turnstile))?;
        self.expect(Tok::Turnstile)?;
        let right = self.slots(None)?;
        Ok(Sequent::new(left, right))
    }
}

fn starts_lower(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_lowercase())
}

fn name_term(name: String) -> Term {
    if starts_lower(&name) {
        Term::Var(name)
    } else {
        Term::Const(name)
    }
}

/// `A_1` is predicate `A` with index 1; `A_i` has index variable `i`.
fn split_index(name: &str) -> (String, Option<Index>) {
    if let Some((pred, idx)) = name.rsplit_once('_') {
        if !pred.is_empty() && !idx.is_empty() {
            if idx.chars().all(|c| c.is_ascii_digit()) {
                if let Ok(n) = idx.parse::<u8>() {
                    return (pred.to_string(), Some(Index::Const(n)));
                }
            } else if starts_lower(idx) && idx.chars().all(|c| c.is_ascii_alphanumeric()) {
                return (pred.to_string(), Some(Index::Var(idx.to_string())));
            }
        }
    }
    (name.to_string(), None)
}

fn whole<T>(text: &str, line: usize, col0: usize, f: impl FnOnce(&mut Exprs) -> R<T>) -> Result<T, ParseError> {
    let mut p = Exprs::new(text, line, col0)?;
    let out = f(&mut p).and_then(|v| p.finish().map(|_| v));
    out.map_err(|_| p.error())
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    whole(text, 1, 1, Exprs::formula)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    whole(text, 1, 1, Exprs::sequent)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    whole(text, 1, 1, Exprs::term)
}

struct Line<'a> {
    no: usize,
    indent: usize,
    text: &'a str,
}

fn err(line: usize, col: usize, expected: &str, found: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col,
        expected: vec![expected.to_string()],
        found: found.into(),
    }
}

fn first_word(text: &str) -> (&str, &str) {
    match text.split_once(char::is_whitespace) {
        Some((w, rest)) => (w, rest.trim_start()),
        None => (text, ""),
    }
}

/// Column (1-based) of `rest` inside `line.text`, after the indentation.
fn col_of(line: &Line, rest: &str) -> usize {
    line.indent + line.text.len() - rest.len() + 1
}

/// `NAME : body` after a keyword.
fn named<'a>(line: &Line<'a>, rest: &'a str) -> Result<(String, &'a str), ParseError> {
    let Some((name, body)) = rest.split_once(':') else {
        return Err(err(line.no, col_of(line, rest), "`NAME :`", "end of line"));
    };
    let name = name.trim();
    let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
    if !valid {
        return Err(err(line.no, col_of(line, rest), "an item name", format!("`{name}`")));
    }
    Ok((name.to_string(), body))
}

/// Parse a `.blq` script.
pub fn parse(text: &str) -> Result<Script, ParseError> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .filter_map(|(k, raw)| {
            let trimmed = raw.trim_end();
            let body = trimmed.trim_start_matches(' ');
            if body.is_empty() || body.starts_with('#') {
                return None;
            }
            Some(Line {
                no: k + 1,
                indent: trimmed.len() - body.len(),
                text: body,
            })
        })
        .collect();
    let mut script = Script::default();
    let mut names = BTreeSet::new();
    let mut domains: BTreeSet<String> = crate::duality::QUBIT_DOMAINS.iter().map(|s| s.to_string()).collect();
    let mut k = 0;
    while k < lines.len() {
        let line = &lines[k];
        if line.indent != 0 {
            return Err(err(line.no, line.indent + 1, "a declaration at column 1", "indented line"));
        }
        if line.text.contains('\t') {
            return Err(err(line.no, 1, "spaces", "a tab"));
        }
        let (word, rest) = first_word(line.text);
        k += 1;
        match word {
            "domain" => {
                let r = parse_domain(line, rest)?;
                if !domains.insert(r.name.clone()) {
                    return Err(err(line.no, col_of(line, rest), "a new domain name", format!("`{}`", r.name)));
                }
                script.declarations.push(Decl::Domain(r));
            }
            "config" => {
                let mut flags = ConfigFlags::default();
                let words: Vec<&str> = rest.split_whitespace().collect();
                if words != ["none"] {
                    for w in words {
                        if !flags.set(w) {
                            return Err(err(
                                line.no,
                                col_of(line, rest),
                                "left_contexts, right_contexts, weakening, cut or none",
                                format!("`{w}`"),
                            ));
                        }
                    }
                }
                script.declarations.push(Decl::Config(flags));
            }
            "license" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                let decl = match words.as_slice() {
                    ["subst", d] => Decl::LicenseSubst(d.to_string()),
                    ["daxiom", d, dual] => Decl::LicenseDAxiom {
                        domain: d.to_string(),
                        duality: dual.to_string(),
                    },
                    _ => {
                        return Err(err(
                            line.no,
                            col_of(line, rest),
                            "`subst DOMAIN` or `daxiom DOMAIN DUALITY`",
                            format!("`{rest}`"),
                        ))
                    }
                };
                let (Decl::LicenseSubst(d) | Decl::LicenseDAxiom { domain: d, .. }) = &decl else { unreachable!() };
                if !domains.contains(d) {
                    return Err(err(line.no, col_of(line, rest), "a declared domain", format!("`{d}`")));
                }
                script.declarations.push(decl);
            }
            "collapse_demo" if rest.is_empty() => script.declarations.push(Decl::CollapseDemo),
            "formula" | "sequent" | "proof" => {
                let (name, body) = named(line, rest)?;
                if !names.insert(name.clone()) {
                    return Err(err(line.no, col_of(line, rest), "a new item name", format!("`{name}`")));
                }
                let col = col_of(line, body);
                let kind = match word {
                    "formula" => ItemKind::Formula(whole(body, line.no, col, Exprs::formula)?),
                    "sequent" => ItemKind::Sequent(whole(body, line.no, col, Exprs::sequent)?),
                    _ => {
                        let concl = whole(body, line.no, col, Exprs::sequent)?;
                        ItemKind::Proof(parse_node(&lines, &mut k, concl, 2, line.no)?)
                    }
                };
                check_domains(&kind, &domains, line)?;
                script.items.push(Item { name, kind });
            }
            _ => {
                return Err(err(
                    line.no,
                    1,
                    "domain, config, license, collapse_demo, formula, sequent or proof",
                    format!("`{word}`"),
                ))
            }
        }
    }
    Ok(script)
}

fn check_domains(kind: &ItemKind, declared: &BTreeSet<String>, line: &Line) -> Result<(), ParseError> {
    let mut used = BTreeSet::new();
    match kind {
        ItemKind::Formula(f) => used.extend(f.domains()),
        ItemKind::Sequent(s) => used.extend(s.domains()),
        ItemKind::Proof(p) => p.visit(&mut |n| {
            used.extend(n.conclusion.domains());
            if let Some(d) = &n.params.domain {
                used.insert(d.clone());
            }
        }),
    }
    match used.iter().find(|d| !declared.contains(*d)) {
        Some(d) => Err(err(line.no, 1, "domains declared before use", format!("`{d}`"))),
        None => Ok(()),
    }
}

fn parse_domain(line: &Line, rest: &str) -> Result<DomainRecord, ParseError> {
    let Some((name, after)) = rest.split_once('=') else {
        return Err(err(line.no, col_of(line, rest), "`NAME = {...}`", format!("`{rest}`")));
    };
    let name = name.trim();
    if !name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
        || !name.chars().all(|c| c.is_ascii_alphanumeric())
    {
        return Err(err(line.no, col_of(line, rest), "a capitalized domain name", format!("`{name}`")));
    }
    let after = after.trim_start();
    let (Some(body), Some(close)) = (after.strip_prefix('{'), after.find('}')) else {
        return Err(err(line.no, col_of(line, after), "`{`", format!("`{after}`")));
    };
    let inner = &body[..close - 1];
    let mut entries = Vec::new();
    let mut p = Exprs::new(inner, line.no, col_of(line, body))?;
    if !p.at_end() {
        let parsed = (|| {
            loop {
                let t = p.term()?;
                if !t.is_closed() {
                    return p.fail("a closed term");
                }
                entries.push(t);
                if !p.eat(&Tok::Comma) {
                    break;
                }
            }
            p.finish()
        })();
        parsed.map_err(|_| p.error())?;
    }
    let mut r = DomainRecord::new(name, entries);
    let mut words = after[close + 1..].split_whitespace();
    while let Some(w) = words.next() {
        match w {
            "focused" => r.focused = true,
            "virtual" => r.virtual_singleton = true,
            "inhabited" => r.inhabited = true,
            "substitution" => r.substitution_allowed = true,
            "duality" => match words.next() {
                Some(d) if d.chars().all(|c| c.is_ascii_alphanumeric()) => r.duality = Some(d.to_string()),
                _ => return Err(err(line.no, col_of(line, after), "a duality name", "end of line")),
            },
            other => {
                return Err(err(
                    line.no,
                    col_of(line, after),
                    "focused, virtual, inhabited, substitution or duality",
                    format!("`{other}`"),
                ))
            }
        }
    }
    Ok(r)
}

/// The rule line for a node whose rule line sits at `indent`, then its
/// premises.
fn parse_node(lines: &[Line], k: &mut usize, conclusion: Sequent, indent: usize, parent_line: usize) -> Result<ProofNode, ParseError> {
    let Some(line) = lines.get(*k).filter(|l| l.indent == indent) else {
        let (no, col) = lines.get(*k).map_or((parent_line + 1, 1), |l| (l.no, l.indent + 1));
        return Err(err(no, col, &format!("`by RULE` at indentation {indent}"), "something else"));
    };
    let (word, rest) = first_word(line.text);
    if word != "by" {
        return Err(err(line.no, indent + 1, "`by`", format!("`{word}`")));
    }
    let (rule_name, params_text) = first_word(rest);
    let rule = Rule::parse(rule_name)
        .ok_or_else(|| err(line.no, col_of(line, rest), "a rule name", format!("`{rule_name}`")))?;
    let params = parse_params(line, params_text)?;
    *k += 1;
    let mut premises = Vec::new();
    while let Some(l) = lines.get(*k) {
        if l.indent != indent || !l.text.starts_with("- ") && l.text != "-" {
            break;
        }
        let body = l.text[1..].trim_start();
        let concl = whole(body, l.no, col_of(l, body), Exprs::sequent)?;
        *k += 1;
        premises.push(parse_node(lines, k, concl, indent + 2, l.no)?);
    }
    Ok(ProofNode::new(conclusion, rule, params, premises))
}

fn parse_params(line: &Line, text: &str) -> Result<Params, ParseError> {
    let mut params = Params::default();
    let mut rest = text.trim_start();
    while !rest.is_empty() {
        let col = col_of(line, rest);
        let Some((key, after)) = rest.split_once('=') else {
            return Err(err(line.no, col, "`key=value`", format!("`{rest}`")));
        };
        let (value, vcol, next) = if let Some(inner) = after.strip_prefix('[') {
            let Some(end) = inner.find(']') else {
                return Err(err(line.no, col_of(line, after), "`]`", "end of line"));
            };
            (&inner[..end], col_of(line, inner), inner[end + 1..].trim_start())
        } else {
            let end = after.find(char::is_whitespace).unwrap_or(after.len());
            (&after[..end], col_of(line, after), after[end..].trim_start())
        };
        let dup = |p: bool| {
            if p {
                Err(err(line.no, col, "each parameter once", format!("`{key}` again")))
            } else {
                Ok(())
            }
        };
        let plain = |v: &str| -> Result<String, ParseError> {
            if !v.is_empty() && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') {
                Ok(v.to_string())
            } else {
                Err(err(line.no, vcol, "a name", format!("`{v}`")))
            }
        };
        match key {
            "formula" => {
                dup(params.formula.is_some())?;
                params.formula = Some(whole(value, line.no, vcol, Exprs::formula)?);
            }
            "term" => {
                dup(params.term.is_some())?;
                params.term = Some(whole(value, line.no, vcol, Exprs::term)?);
            }
            "var" => {
                dup(params.var.is_some())?;
                let v = plain(value)?;
                if !starts_lower(&v) {
                    return Err(err(line.no, vcol, "a lowercase variable", format!("`{v}`")));
                }
                params.var = Some(v);
            }
            "domain" => {
                dup(params.domain.is_some())?;
                params.domain = Some(plain(value)?);
            }
            "duality" => {
                dup(params.duality.is_some())?;
                params.duality = Some(plain(value)?);
            }
            "which" => {
                dup(params.which.is_some())?;
                params.which = Some(match value {
                    "1" => 1,
                    "2" => 2,
                    _ => return Err(err(line.no, vcol, "1 or 2", format!("`{value}`"))),
                });
            }
            _ => {
                return Err(err(
                    line.no,
                    col,
                    "formula, term, var, domain, duality or which",
                    format!("`{key}`"),
                ))
            }
        }
        rest = next;
    }
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_bell_formula() {
        let f = parse_formula("forall x in Dplus . A_1(x) join_i A_2(x)").unwrap();
        let a = |i| Formula::indexed_atom("A", Index::Const(i), vec![Term::var("x")]);
        assert_eq!(
            f,
            Formula::forall("x", "Dplus", Formula::join(CorrelationTag::Identical, a(1), a(2)))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_formula("p & q \\/ r -> s -> t").unwrap();
        assert_eq!(f.to_string(), "((p & q) \\/ r) -> (s -> t)");
        let g = parse_formula("p (x) q * r").unwrap();
        assert_eq!(g.to_string(), "(p (x) q) * r");
        assert_eq!(parse_formula("A(x)").unwrap(), Formula::atom("A", vec![Term::var("x")]));
    }

    #[test]
    fn parses_relations_and_outcomes() {
        let f = parse_formula("(down,1/2) in Dplus").unwrap();
        assert_eq!(f, Formula::member(Term::outcome_of("down", 1, 2), "Dplus"));
        let g = parse_formula("((up,1) in Dup)^perp").unwrap();
        assert_eq!(g, Formula::dual_member(Term::outcome_of("up", 1, 1), "Dup", "perp"));
        assert_eq!(parse_formula("z /= T1").unwrap(), Formula::Neq(Term::var("z"), Term::constant("T1")));
        let r = parse_formula("1 ~o j").unwrap();
        assert_eq!(r.to_string(), "1 ~o j");
    }

    #[test]
    fn parses_sequents_with_pairs() {
        let s = parse_sequent("z in Dplus |- A_1(z) ,_i A_2(z)").unwrap();
        assert_eq!(s.to_string(), "z in Dplus |- A_1(z) ,_i A_2(z)");
        assert_eq!(parse_sequent("|-").unwrap(), Sequent::default());
    }

    #[test]
    fn errors_are_positioned() {
        let e = parse_formula("p & ").unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
        assert!(e.expected.iter().any(|x| x == "a formula"));
        let e = parse_sequent("p |- q r").unwrap_err();
        assert_eq!(e.col, 8);
    }

    #[test]
    fn parses_a_proof_block() {
        let text = "config none\nproof mp : p -> q, p |- q\n  by imp_l\n  - p |- p\n    by id\n  - q |- q\n    by id\n";
        let s = parse(text).unwrap();
        let (_, p) = s.proofs().next().unwrap();
        assert_eq!(p.rule, Rule::ImpL);
        assert_eq!(p.premises.len(), 2);
        assert_eq!(s.to_string(), text);
    }

    #[test]
    fn rejects_undeclared_domain() {
        let e = parse("sequent s : z in Q |- z in Q\n").unwrap_err();
        assert_eq!(e.line, 1);
    }
}
