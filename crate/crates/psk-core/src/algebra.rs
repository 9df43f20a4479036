//! Frontal Heyting algebras and modal algebras with their class validators.

use crate::bits::ElemSet;
use crate::error::{Error, Result};
use crate::order::{Elem, FiniteLattice};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sig {
    Sim,
    Clm,
}

impl fmt::Display for Sig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sig::Sim => "sim",
            Sig::Clm => "clm",
        })
    }
}

/// Operations shared by both signatures, as needed by evaluation and search.
pub trait Algebra: Sync {
    fn sig(&self) -> Sig;
    fn lattice(&self) -> &FiniteLattice;
    /// The modal operator (the frontal box for sim, the modal box for clm).
    fn bx(&self, a: Elem) -> Elem;
    /// Heyting implication for sim, material implication for clm.
    fn imp(&self, a: Elem, b: Elem) -> Elem;
    fn size(&self) -> usize {
        self.lattice().size()
    }
}

/// Heyting algebra with a frontal box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSim {
    lat: FiniteLattice,
    imp: Vec<u16>,
    boxm: Vec<u16>,
}

impl AlgebraSim {
    /// Attach a box table to a lattice; the implication is computed from the order.
    pub fn new(lat: FiniteLattice, boxm: Vec<Elem>) -> Result<Self> {
        check_unary(&lat, &boxm, "box")?;
        let imp = lat.implication_table();
        Ok(AlgebraSim { boxm: boxm.iter().map(|&x| x as u16).collect(), lat, imp })
    }

    /// As [`AlgebraSim::new`], additionally checking a supplied implication table.
    pub fn with_imp(lat: FiniteLattice, imp: &[Vec<Elem>], boxm: Vec<Elem>) -> Result<Self> {
        let a = Self::new(lat, boxm)?;
        let n = a.lat.size();
        if imp.len() != n || imp.iter().any(|r| r.len() != n) {
            return Err(Error::BadTable("implication table has wrong shape".into()));
        }
        for x in 0..n {
            for y in 0..n {
                if imp[x][y] != a.imp(x, y) {
                    return Err(Error::BadTable(format!(
                        "implication at ({x}, {y}) is {} but the lattice forces {}",
                        imp[x][y],
                        a.imp(x, y)
                    )));
                }
            }
        }
        Ok(a)
    }

    pub fn box_table(&self) -> Vec<Elem> {
        self.boxm.iter().map(|&x| x as Elem).collect()
    }

    pub fn imp_table(&self) -> Vec<Vec<Elem>> {
        let n = self.lat.size();
        (0..n).map(|a| (0..n).map(|b| self.imp(a, b)).collect()).collect()
    }
}

impl Algebra for AlgebraSim {
    fn sig(&self) -> Sig {
        Sig::Sim
    }
    fn lattice(&self) -> &FiniteLattice {
        &self.lat
    }
    #[inline]
    fn bx(&self, a: Elem) -> Elem {
        self.boxm[a] as Elem
    }
    #[inline]
    fn imp(&self, a: Elem, b: Elem) -> Elem {
        self.imp[a * self.lat.size() + b] as Elem
    }
}

/// Boolean algebra with a modal box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraClm {
    lat: FiniteLattice,
    neg: Vec<u16>,
    boxm: Vec<u16>,
}

impl AlgebraClm {
    /// Attach a box table to a Boolean lattice; complements are computed.
    pub fn new(lat: FiniteLattice, boxm: Vec<Elem>) -> Result<Self> {
        check_unary(&lat, &boxm, "box")?;
        let neg = boolean_complements(&lat)?;
        Ok(AlgebraClm { lat, neg, boxm: boxm.iter().map(|&x| x as u16).collect() })
    }

    /// Build from a supplied negation table, checking each entry is the complement.
    pub fn with_neg(lat: FiniteLattice, neg: &[Elem], boxm: Vec<Elem>) -> Result<Self> {
        check_unary(&lat, &boxm, "box")?;
        check_unary(&lat, neg, "negation")?;
        for (x, &y) in neg.iter().enumerate() {
            if lat.meet(x, y) != lat.bottom() || lat.join(x, y) != lat.top() {
                return Err(Error::BadTable(format!("negation of {x} is not its complement")));
            }
        }
        Ok(AlgebraClm {
            lat,
            neg: neg.iter().map(|&x| x as u16).collect(),
            boxm: boxm.iter().map(|&x| x as u16).collect(),
        })
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a] as Elem
    }

    /// `[+]a = []a /\ a`, always computed on demand.
    #[inline]
    pub fn box_plus(&self, a: Elem) -> Elem {
        self.lat.meet(self.bx(a), a)
    }

    pub fn box_table(&self) -> Vec<Elem> {
        self.boxm.iter().map(|&x| x as Elem).collect()
    }

    pub fn neg_table(&self) -> Vec<Elem> {
        self.neg.iter().map(|&x| x as Elem).collect()
    }
}

impl Algebra for AlgebraClm {
    fn sig(&self) -> Sig {
        Sig::Clm
    }
    fn lattice(&self) -> &FiniteLattice {
        &self.lat
    }
    #[inline]
    fn bx(&self, a: Elem) -> Elem {
        self.boxm[a] as Elem
    }
    #[inline]
    fn imp(&self, a: Elem, b: Elem) -> Elem {
        self.lat.join(self.neg(a), b)
    }
}

/// Either kind of algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyAlgebra {
    Sim(AlgebraSim),
    Clm(AlgebraClm),
}

impl AnyAlgebra {
    pub fn as_sim(&self) -> Result<&AlgebraSim> {
        match self {
            AnyAlgebra::Sim(a) => Ok(a),
            AnyAlgebra::Clm(_) => Err(Error::Signature("expected a sim algebra".into())),
        }
    }
    pub fn as_clm(&self) -> Result<&AlgebraClm> {
        match self {
            AnyAlgebra::Clm(a) => Ok(a),
            AnyAlgebra::Sim(_) => Err(Error::Signature("expected a clm algebra".into())),
        }
    }
    pub fn as_dyn(&self) -> &dyn Algebra {
        match self {
            AnyAlgebra::Sim(a) => a,
            AnyAlgebra::Clm(a) => a,
        }
    }
}

impl Algebra for AnyAlgebra {
    fn sig(&self) -> Sig {
        self.as_dyn().sig()
    }
    fn lattice(&self) -> &FiniteLattice {
        self.as_dyn().lattice()
    }
    fn bx(&self, a: Elem) -> Elem {
        self.as_dyn().bx(a)
    }
    fn imp(&self, a: Elem, b: Elem) -> Elem {
        self.as_dyn().imp(a, b)
    }
}

fn check_unary(lat: &FiniteLattice, t: &[Elem], what: &str) -> Result<()> {
    if t.len() != lat.size() {
        return Err(Error::BadTable(format!("{what} table has length {} for {} elements", t.len(), lat.size())));
    }
    if let Some(x) = t.iter().find(|&&x| x >= lat.size()) {
        return Err(Error::BadTable(format!("{what} table entry {x} out of range")));
    }
    Ok(())
}

fn boolean_complements(lat: &FiniteLattice) -> Result<Vec<u16>> {
    // In a Boolean lattice the complement of a is the largest element disjoint from a.
    let n = lat.size();
    let mut neg = vec![0u16; n];
    for a in 0..n {
        let c = lat.heyting_implication(a, lat.bottom());
        if lat.join(a, c) != lat.top() {
            return Err(Error::BadTable(format!("lattice is not Boolean: {a} has no complement")));
        }
        neg[a] = c as u16;
    }
    Ok(neg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Class {
    #[serde(rename = "HA")]
    Ha,
    #[serde(rename = "fHA")]
    Fha,
    #[serde(rename = "fronton")]
    Fronton,
    #[serde(rename = "MA")]
    Ma,
    K4,
    K4Grz,
    Magari,
}

impl Class {
    pub fn sig(self) -> Sig {
        match self {
            Class::Ha | Class::Fha | Class::Fronton => Sig::Sim,
            _ => Sig::Clm,
        }
    }

    pub fn parse(s: &str) -> Option<Class> {
        Some(match s {
            "HA" => Class::Ha,
            "fHA" => Class::Fha,
            "fronton" => Class::Fronton,
            "MA" => Class::Ma,
            "K4" => Class::K4,
            "K4Grz" => Class::K4Grz,
            "Magari" => Class::Magari,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: &'static str,
    pub witness: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub class: Class,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_member(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Collect(Vec<Violation>);

impl Collect {
    fn check(&mut self, ok: bool, axiom: &'static str, witness: &[Elem]) {
        if !ok {
            self.0.push(Violation { axiom, witness: witness.to_vec() });
        }
    }
}

/// Check an algebra against a class, listing every violated axiom instance.
pub fn validate(a: &AnyAlgebra, class: Class) -> Result<Report> {
    match a {
        AnyAlgebra::Sim(h) => validate_sim(h, class),
        AnyAlgebra::Clm(m) => validate_clm(m, class),
    }
}

pub fn validate_sim(h: &AlgebraSim, class: Class) -> Result<Report> {
    if class.sig() != Sig::Sim {
        return Err(Error::Signature(format!("{class:?} is not a sim class")));
    }
    let l = h.lattice();
    let n = l.size();
    let mut v = Collect(Vec::new());
    for a in 0..n {
        for b in 0..n {
            let i = h.imp(a, b);
            for c in 0..n {
                v.check(l.leq(c, i) == l.leq(l.meet(a, c), b), "c <= a->b iff a/\\c <= b", &[a, b, c]);
            }
        }
    }
    if class != Class::Ha {
        v.check(h.bx(l.top()) == l.top(), "[m]1 = 1", &[]);
        for a in 0..n {
            v.check(l.leq(a, h.bx(a)), "a <= [m]a", &[a]);
            for b in 0..n {
                v.check(h.bx(l.meet(a, b)) == l.meet(h.bx(a), h.bx(b)), "[m](a/\\b) = [m]a/\\[m]b", &[a, b]);
                v.check(l.leq(h.bx(a), l.join(b, h.imp(b, a))), "[m]a <= b\\/(b->a)", &[a, b]);
            }
        }
    }
    if class == Class::Fronton {
        for a in 0..n {
            v.check(l.leq(h.imp(h.bx(a), a), a), "([m]a->a) <= a", &[a]);
        }
    }
    Ok(Report { class, violations: v.0 })
}

pub fn validate_clm(m: &AlgebraClm, class: Class) -> Result<Report> {
    if class.sig() != Sig::Clm {
        return Err(Error::Signature(format!("{class:?} is not a clm class")));
    }
    let l = m.lattice();
    let n = l.size();
    let mut v = Collect(Vec::new());
    for a in 0..n {
        v.check(l.meet(a, m.neg(a)) == l.bottom() && l.join(a, m.neg(a)) == l.top(), "~a complements a", &[a]);
    }
    v.check(m.bx(l.top()) == l.top(), "[]1 = 1", &[]);
    for a in 0..n {
        for b in 0..n {
            v.check(m.bx(l.meet(a, b)) == l.meet(m.bx(a), m.bx(b)), "[](a/\\b) = []a/\\[]b", &[a, b]);
        }
    }
    if class != Class::Ma {
        for a in 0..n {
            v.check(l.leq(m.bx(a), m.bx(m.bx(a))), "[]a <= [][]a", &[a]);
        }
        if v.0.is_empty() {
            match class {
                Class::K4Grz => {
                    for a in 0..n {
                        let inner = m.imp(m.bx(m.imp(a, m.bx(a))), a);
                        v.check(l.leq(m.bx(inner), m.bx(a)), "[]([](a->[]a)->a) <= []a", &[a]);
                    }
                }
                Class::Magari => {
                    for a in 0..n {
                        v.check(l.leq(m.bx(m.imp(m.bx(a), a)), m.bx(a)), "[]([]a->a) <= []a", &[a]);
                    }
                }
                _ => {}
            }
        }
    }
    Ok(Report { class, violations: v.0 })
}

/// The unique fronton expansion of a finite Heyting algebra: `[m]a = meet {b : b->a <= b}`.
pub fn fronton_expand(lat: &FiniteLattice) -> AlgebraSim {
    let n = lat.size();
    let imp = lat.implication_table();
    let boxm = (0..n)
        .map(|a| {
            let f: ElemSet = (0..n).filter(|&b| lat.leq(imp[b * n + a] as Elem, b)).collect();
            lat.meet_all(&f)
        })
        .collect::<Vec<_>>();
    AlgebraSim { boxm: boxm.iter().map(|&x| x as u16).collect(), lat: lat.clone(), imp }
}

/// Complement of `b` in the Boolean interval `[a, [m]a]`: `(b->a) /\ [m]a`.
pub fn interval_complement(h: &AlgebraSim, a: Elem, b: Elem) -> Result<Elem> {
    let l = h.lattice();
    if !(l.leq(a, b) && l.leq(b, h.bx(a))) {
        return Err(Error::Domain(format!("{b} is not in the interval [{a}, [m]{a}]")));
    }
    Ok(l.meet(h.imp(b, a), h.bx(a)))
}

/// Fixed points of `[+]` in a K4 algebra.
pub fn quasi_opens(m: &AlgebraClm) -> Result<ElemSet> {
    let l = m.lattice();
    if (0..l.size()).any(|a| !l.leq(m.bx(a), m.bx(m.bx(a)))) {
        return Err(Error::Domain("quasi-open elements require a K4 algebra".into()));
    }
    Ok((0..l.size()).filter(|&a| m.box_plus(a) == a).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clm_identity(k: usize) -> AlgebraClm {
        let l = FiniteLattice::boolean(k);
        let id = (0..l.size()).collect();
        AlgebraClm::new(l, id).unwrap()
    }

    #[test]
    fn fronton_expand_chains() {
        let f2 = fronton_expand(&FiniteLattice::chain(2));
        assert_eq!(f2.box_table(), vec![1, 1]);
        let f3 = fronton_expand(&FiniteLattice::chain(3));
        assert_eq!(f3.box_table(), vec![1, 2, 2]);
        assert!(validate_sim(&f2, Class::Fronton).unwrap().is_member());
        assert!(validate_sim(&f3, Class::Fronton).unwrap().is_member());
    }

    #[test]
    fn fronton_expansion_is_the_only_one_on_small_lattices() {
        let diamond = FiniteLattice::boolean(2);
        for lat in [FiniteLattice::chain(2), FiniteLattice::chain(3), FiniteLattice::chain(4), diamond] {
            let n = lat.size();
            let mut found = Vec::new();
            for code in 0..n.pow(n as u32) {
                let bx: Vec<Elem> = (0..n).map(|i| code / n.pow(i as u32) % n).collect();
                let h = AlgebraSim::new(lat.clone(), bx.clone()).unwrap();
                if validate_sim(&h, Class::Fronton).unwrap().is_member() {
                    found.push(bx);
                }
            }
            assert_eq!(found, vec![fronton_expand(&lat).box_table()]);
        }
    }

    #[test]
    fn interval_complements() {
        let f3 = fronton_expand(&FiniteLattice::chain(3));
        assert_eq!(interval_complement(&f3, 0, 1).unwrap(), 0);
        assert_eq!(interval_complement(&f3, 0, 0).unwrap(), f3.bx(0));
        assert_eq!(interval_complement(&f3, 0, f3.bx(0)).unwrap(), 0);
        assert!(matches!(interval_complement(&f3, 0, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn boolean_identity_box_is_grz_not_magari() {
        let m = clm_identity(2);
        assert!(validate_clm(&m, Class::K4Grz).unwrap().is_member());
        let r = validate_clm(&m, Class::Magari).unwrap();
        assert!(!r.is_member());
        for v in &r.violations {
            let a = v.witness[0];
            assert_ne!(a, 3);
            assert_eq!(m.bx(m.imp(m.bx(a), a)), 3);
        }
        assert_eq!(quasi_opens(&m).unwrap(), ElemSet::full(4));
    }

    #[test]
    fn irreflexive_point() {
        let m = AlgebraClm::new(FiniteLattice::boolean(1), vec![1, 1]).unwrap();
        for c in [Class::Ma, Class::K4, Class::K4Grz, Class::Magari] {
            assert!(validate_clm(&m, c).unwrap().is_member(), "{c:?}");
        }
        assert_eq!(quasi_opens(&m).unwrap().iter().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn grz_and_magari_need_k4() {
        // two atoms swapped by the box: not transitive
        let l = FiniteLattice::boolean(2);
        let m = AlgebraClm::new(l, vec![0, 2, 1, 3]).unwrap();
        assert!(validate_clm(&m, Class::Ma).unwrap().is_member());
        let r = validate_clm(&m, Class::Magari).unwrap();
        assert!(r.violations.iter().all(|v| v.axiom == "[]a <= [][]a"));
        assert!(!r.is_member());
        assert!(quasi_opens(&m).is_err());
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(AlgebraSim::new(FiniteLattice::chain(2), vec![1]).is_err());
        assert!(AlgebraSim::new(FiniteLattice::chain(2), vec![1, 2]).is_err());
        assert!(AlgebraClm::new(FiniteLattice::chain(3), vec![2, 2, 2]).is_err());
        let bad_imp = vec![vec![1, 1], vec![1, 1]];
        assert!(AlgebraSim::with_imp(FiniteLattice::chain(2), &bad_imp, vec![1, 1]).is_err());
    }

    #[test]
    fn validate_reports_every_violation() {
        // identity box on the 3-chain is an fHA but not a fronton
        let h = AlgebraSim::new(FiniteLattice::chain(3), vec![0, 1, 2]).unwrap();
        assert!(validate_sim(&h, Class::Fha).unwrap().is_member());
        let r = validate_sim(&h, Class::Fronton).unwrap();
        let w: Vec<_> = r.violations.iter().map(|v| v.witness.clone()).collect();
        assert_eq!(w, vec![vec![0], vec![1]]);
        assert!(validate_sim(&h, Class::K4).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn random_k4(k: usize, rel: u64) -> AlgebraClm {
            // box of a transitive relation on k points, index = subset mask
            let mut r = vec![0u64; k];
            for x in 0..k {
                r[x] = rel >> (x * k) & ((1 << k) - 1);
            }
            loop {
                let mut changed = false;
                for x in 0..k {
                    let mut acc = r[x];
                    for y in 0..k {
                        if r[x] >> y & 1 == 1 {
                            acc |= r[y];
                        }
                    }
                    if acc != r[x] {
                        r[x] = acc;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            let bx = (0..1usize << k)
                .map(|u| (0..k).filter(|&x| r[x] & !(u as u64) == 0).fold(0, |m, x| m | 1 << x))
                .collect();
            AlgebraClm::new(FiniteLattice::boolean(k), bx).unwrap()
        }

        proptest! {
            #[test]
            fn mix_identity(k in 1usize..5, rel in any::<u64>()) {
                let m = random_k4(k, rel);
                prop_assert!(validate_clm(&m, Class::K4).unwrap().is_member());
                for a in 0..m.size() {
                    prop_assert_eq!(m.bx(a), m.box_plus(m.bx(m.box_plus(a))));
                }
                let q = quasi_opens(&m).unwrap();
                let l = m.lattice();
                prop_assert!(q.contains(l.bottom()) && q.contains(l.top()));
                for a in q.iter() { for b in q.iter() {
                    prop_assert!(q.contains(l.meet(a, b)) && q.contains(l.join(a, b)));
                }}
            }

            #[test]
            fn interval_complement_involution(n in 2usize..7) {
                let h = fronton_expand(&FiniteLattice::chain(n));
                let l = h.lattice();
                for a in 0..n {
                    for b in 0..n {
                        if let Ok(c) = interval_complement(&h, a, b) {
                            prop_assert_eq!(interval_complement(&h, a, c).unwrap(), b);
                            prop_assert_eq!(l.meet(b, c), a);
                            prop_assert_eq!(l.join(b, c), h.bx(a));
                        }
                    }
                }
            }
        }
    }
}
