//! Formulas and rules of both signatures, the ASCII grammar, and the translation T.

use crate::algebra::Sig;
use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::fmt::Write as _;

/// Prefix of the variables generated for canonical rules.
pub const RESERVED_PREFIX: &str = "p@";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Bot,
    Top,
    And(Box<Formula>, Box<Formula>),
    /// sim only
    Or(Box<Formula>, Box<Formula>),
    /// sim only
    Imp(Box<Formula>, Box<Formula>),
    /// sim only: the frontal box `[m]`
    BoxSim(Box<Formula>),
    /// clm only
    Neg(Box<Formula>),
    /// clm only: the modal box `[]`
    BoxClm(Box<Formula>),
}

use Formula::*;

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Var(name.into())
    }
    /// The variable standing for element `i` of a canonical rule's algebra.
    pub fn reserved(i: usize) -> Formula {
        Var(format!("{RESERVED_PREFIX}{i}"))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Or(Box::new(a), Box::new(b))
    }
    pub fn imp(a: Formula, b: Formula) -> Formula {
        Imp(Box::new(a), Box::new(b))
    }
    pub fn boxsim(a: Formula) -> Formula {
        BoxSim(Box::new(a))
    }
    pub fn neg(a: Formula) -> Formula {
        Neg(Box::new(a))
    }
    pub fn boxclm(a: Formula) -> Formula {
        BoxClm(Box::new(a))
    }
    /// clm disjunction, desugared to `~(~a & ~b)`.
    pub fn c_or(a: Formula, b: Formula) -> Formula {
        Formula::neg(Formula::and(Formula::neg(a), Formula::neg(b)))
    }
    /// clm implication, desugared to `~(a & ~b)`.
    pub fn c_imp(a: Formula, b: Formula) -> Formula {
        Formula::neg(Formula::and(a, Formula::neg(b)))
    }
    /// `[+]a`, desugared to `[]a & a`.
    pub fn c_boxplus(a: Formula) -> Formula {
        Formula::and(Formula::boxclm(a.clone()), a)
    }
    /// `(a -> b) & (b -> a)` in the given signature.
    pub fn iff(sig: Sig, a: Formula, b: Formula) -> Formula {
        match sig {
            Sig::Sim => Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a)),
            Sig::Clm => Formula::and(Formula::c_imp(a.clone(), b.clone()), Formula::c_imp(b, a)),
        }
    }

    /// Whether every connective belongs to `sig`.
    pub fn fits(&self, sig: Sig) -> bool {
        match self {
            Var(_) | Bot | Top => true,
            And(a, b) => a.fits(sig) && b.fits(sig),
            Or(a, b) | Imp(a, b) => sig == Sig::Sim && a.fits(sig) && b.fits(sig),
            BoxSim(a) => sig == Sig::Sim && a.fits(sig),
            Neg(a) | BoxClm(a) => sig == Sig::Clm && a.fits(sig),
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Var(_) | Bot | Top => vec![],
            And(a, b) | Or(a, b) | Imp(a, b) => vec![a, b],
            BoxSim(a) | Neg(a) | BoxClm(a) => vec![a],
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        if let Var(v) = self {
            out.insert(v.clone());
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        self.collect_vars(&mut s);
        s
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Print in the ASCII grammar of `sig`.
    pub fn print(&self, _sig: Sig) -> String {
        let mut s = String::new();
        write_formula(&mut s, self);
        s
    }
}

/// Ordering key putting user variables first (by name), then reserved ones by index.
pub fn var_key(name: &str) -> (u8, u64, &str) {
    match name.strip_prefix(RESERVED_PREFIX).and_then(|d| d.parse::<u64>().ok()) {
        Some(i) => (1, i, ""),
        None => (0, 0, name),
    }
}

/// Sort variable names into canonical order.
pub fn sort_vars(vars: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut v: Vec<String> = vars.into_iter().collect();
    v.sort_by(|a, b| var_key(a).cmp(&var_key(b)));
    v.dedup();
    v
}

fn prec(f: &Formula) -> u8 {
    match f {
        Imp(..) => 1,
        Or(..) => 2,
        And(..) => 3,
        BoxSim(_) | Neg(_) | BoxClm(_) => 4,
        Var(_) | Bot | Top => 5,
    }
}

fn write_formula(s: &mut String, f: &Formula) {
    let sub = |s: &mut String, g: &Formula, paren: bool| {
        if paren {
            s.push('(');
        }
        write_formula(s, g);
        if paren {
            s.push(')');
        }
    };
    match f {
        Var(v) => s.push_str(v),
        Bot => s.push_str("false"),
        Top => s.push_str("true"),
        And(a, b) | Or(a, b) => {
            let p = prec(f);
            sub(s, a, prec(a) < p);
            s.push_str(if matches!(f, And(..)) { " & " } else { " | " });
            sub(s, b, prec(b) <= p);
        }
        Imp(a, b) => {
            sub(s, a, prec(a) <= 1);
            s.push_str(" -> ");
            sub(s, b, prec(b) < 1);
        }
        BoxSim(a) | Neg(a) | BoxClm(a) => {
            s.push_str(match f {
                BoxSim(_) => "[m]",
                Neg(_) => "~",
                _ => "[]",
            });
            sub(s, a, prec(a) < 4);
        }
    }
}

/// A rule `gamma / delta`. Members are kept in insertion order without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub sig: Sig,
    pub gamma: Vec<Formula>,
    pub delta: Vec<Formula>,
}

impl Rule {
    pub fn new(sig: Sig, gamma: Vec<Formula>, delta: Vec<Formula>) -> Result<Rule> {
        for f in gamma.iter().chain(&delta) {
            if !f.fits(sig) {
                return Err(Error::Signature(format!("`{}` is not a {sig} formula", f.print(Sig::Sim))));
            }
        }
        Ok(Rule { sig, gamma: dedup(gamma), delta: dedup(delta) })
    }

    /// The rule `/ f`.
    pub fn axiom(sig: Sig, f: Formula) -> Result<Rule> {
        Rule::new(sig, vec![], vec![f])
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        for f in self.gamma.iter().chain(&self.delta) {
            f.collect_vars(&mut s);
        }
        s
    }

    /// Same premises and conclusions as sets.
    pub fn same_as(&self, other: &Rule) -> bool {
        let set = |v: &[Formula]| v.iter().cloned().collect::<BTreeSet<_>>();
        self.sig == other.sig && set(&self.gamma) == set(&other.gamma) && set(&self.delta) == set(&other.delta)
    }

    pub fn print(&self) -> String {
        let side = |v: &[Formula]| v.iter().map(|f| f.print(self.sig)).collect::<Vec<_>>().join("; ");
        let (g, d) = (side(&self.gamma), side(&self.delta));
        let mut s = String::new();
        let _ = write!(s, "{g}{}/{}{d}", if g.is_empty() { "" } else { " " }, if d.is_empty() { "" } else { " " });
        s
    }
}

fn dedup(v: Vec<Formula>) -> Vec<Formula> {
    let mut seen = BTreeSet::new();
    v.into_iter().filter(|f| seen.insert(f.clone())).collect()
}

/// Least set containing the rule's members and closed under immediate subformulas.
pub fn subformula_closure(r: &Rule) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<&Formula> = r.gamma.iter().chain(&r.delta).collect();
    while let Some(f) = stack.pop() {
        if out.insert(f.clone()) {
            stack.extend(f.children());
        }
    }
    out
}

/// Translation of sim formulas into clm formulas.
///
/// Variables go to `[+]p`; implication goes to `[+](~T(a) | T(b))`; the frontal box goes to
/// `[]`. All clm sugar is expanded.
pub fn translate(f: &Formula) -> Result<Formula> {
    Ok(match f {
        Var(_) => Formula::c_boxplus(f.clone()),
        Bot => Bot,
        Top => Top,
        And(a, b) => Formula::and(translate(a)?, translate(b)?),
        Or(a, b) => Formula::c_or(translate(a)?, translate(b)?),
        Imp(a, b) => Formula::c_boxplus(Formula::c_or(Formula::neg(translate(a)?), translate(b)?)),
        BoxSim(a) => Formula::boxclm(translate(a)?),
        Neg(_) | BoxClm(_) => return Err(Error::Signature("translation takes sim formulas".into())),
    })
}

pub fn translate_rule(r: &Rule) -> Result<Rule> {
    if r.sig != Sig::Sim {
        return Err(Error::Signature("translation takes sim rules".into()));
    }
    let tr = |v: &[Formula]| v.iter().map(translate).collect::<Result<Vec<_>>>();
    Rule::new(Sig::Clm, tr(&r.gamma)?, tr(&r.delta)?)
}

// ---------------------------------------------------------------------------------------
// Parsing

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    BoxM,
    BoxC,
    BoxPlus,
    Tilde,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    Semi,
    Slash,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let b = text.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    let err = |offset: usize, msg: &str| Error::Parse { offset, msg: msg.into() };
    while i < b.len() {
        let c = b[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'~' => Tok::Tilde,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b';' => Tok::Semi,
            b'/' => Tok::Slash,
            b'-' => {
                if b.get(i + 1) != Some(&b'>') {
                    return Err(err(i, "expected `->`"));
                }
                i += 1;
                Tok::Arrow
            }
            b'[' => {
                let t = if text[i..].starts_with("[m]") {
                    Tok::BoxM
                } else if text[i..].starts_with("[+]") {
                    Tok::BoxPlus
                } else if text[i..].starts_with("[]") {
                    Tok::BoxC
                } else {
                    return Err(err(i, "unknown modal operator"));
                };
                i += if t == Tok::BoxC { 1 } else { 2 };
                t
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < b.len() && (b[i + 1].is_ascii_alphanumeric() || b[i + 1] == b'_') {
                    i += 1;
                }
                let word = &text[start..=i];
                if word == "p" && b.get(i + 1) == Some(&b'@') {
                    // reserved variable p@N
                    let mut j = i + 2;
                    while j < b.len() && b[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == i + 2 {
                        return Err(err(i + 1, "reserved variable needs an index"));
                    }
                    i = j - 1;
                    Tok::Ident(text[start..j].to_string())
                } else {
                    match word {
                        "true" => Tok::True,
                        "false" => Tok::False,
                        _ => Tok::Ident(word.to_string()),
                    }
                }
            }
            _ => return Err(err(i, &format!("unexpected character `{}`", c as char))),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    sig: Sig,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.offset(), msg: msg.into() })
    }
    fn sig_err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Signature(format!("`{what}` at byte {} is not available in {}", self.offset(), self.sig)))
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.imp()?;
            return Ok(match self.sig {
                Sig::Sim => Formula::imp(lhs, rhs),
                Sig::Clm => Formula::c_imp(lhs, rhs),
            });
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let rhs = self.and()?;
            lhs = match self.sig {
                Sig::Sim => Formula::or(lhs, rhs),
                Sig::Clm => Formula::c_or(lhs, rhs),
            };
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.prefix()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = Formula::and(lhs, self.prefix()?);
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Formula> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("unexpected end of input"),
        };
        match tok {
            Tok::BoxM | Tok::BoxC | Tok::BoxPlus | Tok::Tilde => {
                match (&tok, self.sig) {
                    (Tok::BoxM, Sig::Clm) => return self.sig_err("[m]"),
                    (Tok::BoxC, Sig::Sim) => return self.sig_err("[]"),
                    (Tok::BoxPlus, Sig::Sim) => return self.sig_err("[+]"),
                    (Tok::Tilde, Sig::Sim) => return self.sig_err("~"),
                    _ => {}
                }
                self.pos += 1;
                let a = self.prefix()?;
                Ok(match tok {
                    Tok::BoxM => Formula::boxsim(a),
                    Tok::BoxC => Formula::boxclm(a),
                    Tok::BoxPlus => Formula::c_boxplus(a),
                    _ => Formula::neg(a),
                })
            }
            Tok::True => {
                self.pos += 1;
                Ok(Top)
            }
            Tok::False => {
                self.pos += 1;
                Ok(Bot)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                Ok(Var(name))
            }
            Tok::LParen => {
                self.pos += 1;
                let f = self.imp()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(f)
            }
            _ => self.err("expected a formula"),
        }
    }

    fn side(&mut self) -> Result<Vec<Formula>> {
        let mut v = Vec::new();
        if matches!(self.peek(), None | Some(Tok::Slash)) {
            return Ok(v);
        }
        loop {
            v.push(self.imp()?);
            if self.peek() == Some(&Tok::Semi) {
                self.pos += 1;
            } else {
                return Ok(v);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Formula(Formula),
    Rule(Rule),
}

/// Parse a formula, or a rule if the text contains `/`.
pub fn parse(text: &str, sig: Sig) -> Result<Parsed> {
    if text.contains('/') {
        parse_rule(text, sig).map(Parsed::Rule)
    } else {
        parse_formula(text, sig).map(Parsed::Formula)
    }
}

pub fn parse_formula(text: &str, sig: Sig) -> Result<Formula> {
    let mut p = Parser { toks: lex(text)?, pos: 0, end: text.len(), sig };
    let f = p.imp()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

pub fn parse_rule(text: &str, sig: Sig) -> Result<Rule> {
    let mut p = Parser { toks: lex(text)?, pos: 0, end: text.len(), sig };
    let gamma = p.side()?;
    if p.peek() != Some(&Tok::Slash) {
        return p.err("expected `/`");
    }
    p.pos += 1;
    let delta = p.side()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Rule::new(sig, gamma, delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Formula {
        Formula::var(s)
    }

    #[test]
    fn parse_examples() {
        let f = parse_formula("(p -> q) & [m]p", Sig::Sim).unwrap();
        assert_eq!(f, Formula::and(Formula::imp(v("p"), v("q")), Formula::boxsim(v("p"))));
        assert_eq!(parse_formula("[+]p", Sig::Clm).unwrap(), Formula::and(Formula::boxclm(v("p")), v("p")));
        let r = parse_rule("p ; p -> q / q", Sig::Sim).unwrap();
        assert_eq!(r.gamma, vec![v("p"), Formula::imp(v("p"), v("q"))]);
        assert_eq!(r.delta, vec![v("q")]);
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_formula("a -> b -> c", Sig::Sim).unwrap();
        assert_eq!(f, Formula::imp(v("a"), Formula::imp(v("b"), v("c"))));
        let f = parse_formula("a | b & c -> d", Sig::Sim).unwrap();
        assert_eq!(f, Formula::imp(Formula::or(v("a"), Formula::and(v("b"), v("c"))), v("d")));
        let f = parse_formula("[m]a & b", Sig::Sim).unwrap();
        assert_eq!(f, Formula::and(Formula::boxsim(v("a")), v("b")));
        let f = parse_formula("a & b & c", Sig::Sim).unwrap();
        assert_eq!(f, Formula::and(Formula::and(v("a"), v("b")), v("c")));
    }

    #[test]
    fn clm_sugar() {
        let f = parse_formula("p -> q", Sig::Clm).unwrap();
        assert_eq!(f, Formula::neg(Formula::and(v("p"), Formula::neg(v("q")))));
        let f = parse_formula("p | q", Sig::Clm).unwrap();
        assert_eq!(f, Formula::c_or(v("p"), v("q")));
        assert!(f.fits(Sig::Clm) && !f.fits(Sig::Sim));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_formula("[m]p", Sig::Clm), Err(Error::Signature(_))));
        assert!(matches!(parse_formula("~p", Sig::Sim), Err(Error::Signature(_))));
        assert_eq!(parse_formula("p & ", Sig::Sim), Err(Error::Parse { offset: 4, msg: "unexpected end of input".into() }));
        assert!(matches!(parse_formula("p $ q", Sig::Sim), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_formula("(p", Sig::Sim), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_formula("p q", Sig::Sim), Err(Error::Parse { offset: 2, .. })));
    }

    #[test]
    fn rules_with_empty_sides() {
        let r = parse_rule("/ p", Sig::Sim).unwrap();
        assert!(r.gamma.is_empty());
        assert_eq!(r.print(), "/ p");
        let r = parse_rule("p /", Sig::Sim).unwrap();
        assert!(r.delta.is_empty());
        assert_eq!(r.print(), "p /");
        assert_eq!(parse_rule("/", Sig::Clm).unwrap().print(), "/");
    }

    #[test]
    fn reserved_variables_round_trip() {
        let f = Formula::and(Formula::reserved(3), v("p"));
        assert_eq!(parse_formula(&f.print(Sig::Sim), Sig::Sim).unwrap(), f);
        assert!(parse_formula("p@", Sig::Sim).is_err());
        assert_ne!(parse_formula("p", Sig::Sim).unwrap(), Formula::reserved(0));
        assert_eq!(sort_vars(["p@10".into(), "q".into(), "p@2".into(), "a".into()]), vec!["a", "q", "p@2", "p@10"]);
    }

    #[test]
    fn closure_examples() {
        let r = Rule::axiom(Sig::Sim, v("p")).unwrap();
        assert_eq!(subformula_closure(&r).into_iter().collect::<Vec<_>>(), vec![v("p")]);
        let km = parse_formula("([m]p -> p) -> p", Sig::Sim).unwrap();
        let c = subformula_closure(&Rule::axiom(Sig::Sim, km.clone()).unwrap());
        let expect: BTreeSet<_> = [
            v("p"),
            Formula::boxsim(v("p")),
            Formula::imp(Formula::boxsim(v("p")), v("p")),
            km,
        ]
        .into_iter()
        .collect();
        assert_eq!(c, expect);
        let r = Rule::new(Sig::Sim, vec![Formula::and(v("p"), v("q"))], vec![]).unwrap();
        assert_eq!(subformula_closure(&r).len(), 3);
    }

    #[test]
    fn translation_clauses() {
        let bp = |f: Formula| Formula::c_boxplus(f);
        assert_eq!(translate(&v("p")).unwrap(), bp(v("p")));
        assert_eq!(translate(&Formula::boxsim(v("p"))).unwrap(), Formula::boxclm(bp(v("p"))));
        let t = translate(&Formula::imp(v("p"), v("q"))).unwrap();
        assert_eq!(t, bp(Formula::c_or(Formula::neg(bp(v("p"))), bp(v("q")))));
        // the KM axiom goes to [+]([+]([][+]p -> [+]p) -> [+]p) with -> read as ~a | b
        let km = parse_formula("([m]p -> p) -> p", Sig::Sim).unwrap();
        let shown = parse_formula("[+](~[+](~[][+]p | [+]p) | [+]p)", Sig::Clm).unwrap();
        let inner = parse_formula("[+](~[][+]p | [+]p)", Sig::Clm).unwrap();
        assert_eq!(translate(&km).unwrap(), shown);
        assert_eq!(translate(&Formula::imp(Formula::boxsim(v("p")), v("p"))).unwrap(), inner);
        assert!(translate(&Formula::neg(v("p"))).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_sim() -> impl Strategy<Value = Formula> {
            let leaf = prop_oneof![Just(Bot), Just(Top), "[a-c]".prop_map(Formula::var), (0usize..3).prop_map(Formula::reserved)];
            leaf.prop_recursive(5, 40, 2, |inner| {
                prop_oneof![
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
                    inner.prop_map(Formula::boxsim),
                ]
            })
        }

        fn arb_clm() -> impl Strategy<Value = Formula> {
            let leaf = prop_oneof![Just(Bot), Just(Top), "[a-c]".prop_map(Formula::var)];
            leaf.prop_recursive(5, 40, 2, |inner| {
                prop_oneof![
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                    inner.clone().prop_map(Formula::neg),
                    inner.prop_map(Formula::boxclm),
                ]
            })
        }

        proptest! {
            #[test]
            fn print_parse_sim(f in arb_sim()) {
                prop_assert_eq!(parse_formula(&f.print(Sig::Sim), Sig::Sim).unwrap(), f);
            }

            #[test]
            fn print_parse_clm(f in arb_clm()) {
                prop_assert_eq!(parse_formula(&f.print(Sig::Clm), Sig::Clm).unwrap(), f);
            }

            #[test]
            fn rule_print_parse(g in proptest::collection::vec(arb_sim(), 0..3), d in proptest::collection::vec(arb_sim(), 0..3)) {
                let r = Rule::new(Sig::Sim, g, d).unwrap();
                prop_assert_eq!(parse_rule(&r.print(), Sig::Sim).unwrap(), r);
            }

            #[test]
            fn translation_is_structural(f in arb_sim(), g in arb_sim()) {
                let t = translate(&f).unwrap();
                prop_assert!(t.fits(Sig::Clm));
                prop_assert_eq!(translate(&Formula::and(f.clone(), g.clone())).unwrap(),
                    Formula::and(t.clone(), translate(&g).unwrap()));
                prop_assert_eq!(translate(&Formula::and(f.clone(), f.clone())).unwrap(), Formula::and(t.clone(), t));
            }

            #[test]
            fn closure_is_closed(f in arb_sim()) {
                let c = subformula_closure(&Rule::axiom(Sig::Sim, f.clone()).unwrap());
                prop_assert!(c.contains(&f));
                for g in &c {
                    for h in g.children() {
                        prop_assert!(c.contains(h));
                    }
                }
            }
        }
    }
}
