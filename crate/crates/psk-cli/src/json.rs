//! On-disk JSON forms of frames, algebras and canonical rules.

use psk_core::algebra::{validate, Algebra, AlgebraClm, AlgebraSim, AnyAlgebra, Class, Sig};
use psk_core::canon::{build_scr, CanonicalRule, DomainPair};
use psk_core::duality::Frame;
use psk_core::order::{Elem, FiniteLattice};
use psk_core::{Error, Result};
use serde::Deserialize;
use serde_json::{json, Value};

/// Anything that can be loaded from a file.
pub enum Object {
    Frame(Frame),
    Algebra(AnyAlgebra),
    Scr(CanonicalRule),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameIn {
    kind: String,
    sig: Sig,
    n: usize,
    #[serde(default)]
    leq: Option<Vec<Vec<u8>>>,
    #[serde(rename = "mod")]
    modal: Vec<Vec<u8>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraIn {
    kind: String,
    sig: Sig,
    n: usize,
    leq: Vec<Vec<u8>>,
    #[serde(rename = "box")]
    boxm: Option<Vec<Elem>>,
    imp: Option<Vec<Vec<Elem>>>,
    neg: Option<Vec<Elem>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScrIn {
    kind: String,
    algebra: Value,
    domains: DomainsIn,
    rule: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DomainsIn {
    #[serde(default)]
    pub imp: Vec<(Elem, Elem)>,
    #[serde(default, rename = "box")]
    pub boxm: Vec<Elem>,
}

impl From<DomainsIn> for DomainPair {
    fn from(d: DomainsIn) -> DomainPair {
        DomainPair::new(d.imp, d.boxm)
    }
}

fn input<E: std::fmt::Display>(what: &str) -> impl FnOnce(E) -> Error + '_ {
    move |e| Error::Input(format!("{what}: {e}"))
}

fn rows(m: &[Vec<u8>], n: usize, what: &str) -> Result<Vec<u64>> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::Input(format!("`{what}` must be a {n}x{n} matrix")));
    }
    m.iter()
        .map(|r| {
            r.iter().enumerate().try_fold(0u64, |acc, (j, &b)| match b {
                0 => Ok(acc),
                1 => Ok(acc | 1 << j),
                _ => Err(Error::Input(format!("`{what}` entries must be 0 or 1"))),
            })
        })
        .collect()
}

fn matrix(rows: &[u64], n: usize) -> Vec<Vec<u8>> {
    rows.iter().map(|r| (0..n).map(|j| (r >> j & 1) as u8).collect()).collect()
}

pub fn parse(v: Value) -> Result<Object> {
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| Error::Input("missing `kind`".into()))?;
    match kind {
        "frame" => frame_from(v).map(Object::Frame),
        "algebra" => algebra_from(v).map(Object::Algebra),
        "scr" => scr_from(v).map(Object::Scr),
        k => Err(Error::Input(format!("unknown kind `{k}`"))),
    }
}

fn frame_from(v: Value) -> Result<Frame> {
    let f: FrameIn = serde_json::from_value(v).map_err(input("frame"))?;
    debug_assert_eq!(f.kind, "frame");
    if f.n == 0 || f.n > psk_core::duality::MAX_POINTS {
        return Err(Error::Input(format!("frame size {} out of range", f.n)));
    }
    let modal = rows(&f.modal, f.n, "mod")?;
    match f.sig {
        Sig::Sim => {
            let leq = f.leq.ok_or_else(|| Error::Input("sim frames need `leq`".into()))?;
            Frame::sim(rows(&leq, f.n, "leq")?, modal)
        }
        Sig::Clm => {
            if f.leq.is_some() {
                return Err(Error::Input("clm frames take no `leq`".into()));
            }
            Frame::clm(modal)
        }
    }
}

/// Algebras must at least be frontal Heyting (sim) or modal (clm).
fn algebra_from(v: Value) -> Result<AnyAlgebra> {
    let a = raw_algebra_from(v)?;
    let class = match a.sig() {
        Sig::Sim => Class::Fha,
        Sig::Clm => Class::Ma,
    };
    match validate(&a, class)?.violations.first() {
        Some(bad) => Err(Error::Input(format!("algebra is not {class:?}: `{}` fails at {:?}", bad.axiom, bad.witness))),
        None => Ok(a),
    }
}

fn raw_algebra_from(v: Value) -> Result<AnyAlgebra> {
    let a: AlgebraIn = serde_json::from_value(v).map_err(input("algebra"))?;
    debug_assert_eq!(a.kind, "algebra");
    let leq = rows(&a.leq, a.n, "leq")?;
    let lat = FiniteLattice::from_leq(&leq.iter().map(|r| (0..a.n).map(|j| r >> j & 1 == 1).collect()).collect::<Vec<_>>())?;
    let boxm = a.boxm.ok_or_else(|| Error::Input("algebras need `box`".into()))?;
    if boxm.len() != a.n || boxm.iter().any(|&x| x >= a.n) {
        return Err(Error::Input("`box` must list one element per element".into()));
    }
    match a.sig {
        Sig::Sim => {
            if a.neg.is_some() {
                return Err(Error::Input("sim algebras take `imp`, not `neg`".into()));
            }
            Ok(AnyAlgebra::Sim(match a.imp {
                Some(imp) => AlgebraSim::with_imp(lat, &imp, boxm)?,
                None => AlgebraSim::new(lat, boxm)?,
            }))
        }
        Sig::Clm => {
            if a.imp.is_some() {
                return Err(Error::Input("clm algebras take `neg`, not `imp`".into()));
            }
            Ok(AnyAlgebra::Clm(match a.neg {
                Some(neg) => AlgebraClm::with_neg(lat, &neg, boxm)?,
                None => AlgebraClm::new(lat, boxm)?,
            }))
        }
    }
}

fn scr_from(v: Value) -> Result<CanonicalRule> {
    let s: ScrIn = serde_json::from_value(v).map_err(input("scr"))?;
    debug_assert_eq!(s.kind, "scr");
    let alg = algebra_from(s.algebra)?;
    let c = build_scr(&alg, s.domains.into())?;
    if let Some(text) = s.rule {
        if text != c.rule.print() {
            return Err(Error::Input("stored rule text does not match its algebra and domains".into()));
        }
    }
    Ok(c)
}

pub fn frame_json(f: &Frame) -> Value {
    let n = f.size();
    match f.kind() {
        Sig::Sim => json!({"kind": "frame", "sig": "sim", "n": n, "leq": matrix(f.leq_rows(), n), "mod": matrix(f.rel_rows(), n)}),
        Sig::Clm => json!({"kind": "frame", "sig": "clm", "n": n, "mod": matrix(f.rel_rows(), n)}),
    }
}

pub fn algebra_json(a: &AnyAlgebra) -> Value {
    let l = a.lattice();
    let n = l.size();
    let leq: Vec<Vec<u8>> = (0..n).map(|x| (0..n).map(|y| u8::from(l.leq(x, y))).collect()).collect();
    match a {
        AnyAlgebra::Sim(h) => json!({"kind": "algebra", "sig": "sim", "n": n, "leq": leq, "box": h.box_table(), "imp": h.imp_table()}),
        AnyAlgebra::Clm(m) => json!({"kind": "algebra", "sig": "clm", "n": n, "leq": leq, "box": m.box_table(), "neg": m.neg_table()}),
    }
}

pub fn domains_json(d: &DomainPair) -> Value {
    json!({"imp": d.imp, "box": d.bx})
}

pub fn scr_json(c: &CanonicalRule) -> Value {
    json!({"kind": "scr", "algebra": algebra_json(&c.algebra), "domains": domains_json(&c.domains), "rule": c.rule.print()})
}

#[cfg(test)]
mod tests {
    use super::*;
    use psk_core::algebra::fronton_expand;
    use psk_core::duality::complex_algebra;

    #[test]
    fn round_trips() {
        let f = Frame::sim(vec![0b11, 0b10], vec![0b10, 0]).unwrap();
        let Object::Frame(g) = parse(frame_json(&f)).unwrap() else { panic!() };
        assert_eq!(f, g);
        let a = complex_algebra(&Frame::clm(vec![0b10, 0]).unwrap()).unwrap().algebra;
        let Object::Algebra(b) = parse(algebra_json(&a)).unwrap() else { panic!() };
        assert_eq!(a, b);
        let c = build_scr(&AnyAlgebra::Sim(fronton_expand(&FiniteLattice::chain(3))), DomainPair::boxes(vec![0])).unwrap();
        let Object::Scr(d) = parse(scr_json(&c)).unwrap() else { panic!() };
        assert_eq!(c, d);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse(json!({"kind": "frame", "sig": "clm", "n": 2, "mod": [[0, 1]]})).is_err());
        assert!(parse(json!({"kind": "frame", "sig": "clm", "n": 1, "mod": [[2]]})).is_err());
        assert!(parse(json!({"kind": "algebra", "sig": "sim", "n": 2, "leq": [[1, 1], [0, 1]], "box": [0, 0]})).is_err());
        assert!(parse(json!({"kind": "widget"})).is_err());
        let mut s = scr_json(&build_scr(&AnyAlgebra::Sim(fronton_expand(&FiniteLattice::chain(2))), DomainPair::default()).unwrap());
        s["rule"] = json!("/ p");
        assert!(parse(s).is_err());
    }
}
