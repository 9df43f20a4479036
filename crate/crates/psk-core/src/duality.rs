//! Finite Kripke frames and their duality with the algebras, the maps sigma and rho,
//! cluster collapse, frontier sets and frame classes.

use crate::algebra::{validate, validate_clm, Algebra, AlgebraClm, AlgebraSim, AnyAlgebra, Class, Sig};
use crate::bits::{mask_iter, MAX_ELEMS};
use crate::error::{Error, Result};
use crate::order::{Elem, FiniteLattice};
use crate::semantics::rule_valid;
use crate::syntax::parse_rule;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt::Write as _;

/// Largest frame handled (points are stored as 64-bit masks).
pub const MAX_POINTS: usize = 64;

/// A finite frame. For sim frames `leq` is the intuitionistic order and `rel` the strict
/// modal relation; for clm frames only `rel` is used.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frame {
    kind: Sig,
    leq: Vec<u64>,
    rel: Vec<u64>,
}

impl Frame {
    /// A sim frame, checking that `leq` is a partial order whose strict part lies in `rel`
    /// and that `rel` lies in `leq`.
    pub fn sim(leq: Vec<u64>, rel: Vec<u64>) -> Result<Frame> {
        let n = leq.len();
        check_rows(n, &leq)?;
        check_rows(n, &rel)?;
        if rel.len() != n {
            return Err(Error::BadTable("order and modal relation differ in size".into()));
        }
        for x in 0..n {
            if leq[x] >> x & 1 == 0 {
                return Err(Error::NotPartialOrder(format!("not reflexive at {x}")));
            }
            for y in mask_iter(leq[x]) {
                if y != x && leq[y] >> x & 1 == 1 {
                    return Err(Error::NotPartialOrder(format!("not antisymmetric at ({x}, {y})")));
                }
                if leq[y] & !leq[x] != 0 {
                    return Err(Error::NotPartialOrder(format!("not transitive through {x} <= {y}")));
                }
            }
            let strict = leq[x] & !(1 << x);
            if strict & !rel[x] != 0 || rel[x] & !leq[x] != 0 {
                return Err(Error::BadTable(format!("reflexive closure of the modal relation differs from the order at {x}")));
            }
        }
        Ok(Frame { kind: Sig::Sim, leq, rel })
    }

    /// A sim frame whose modal relation is the strict order.
    pub fn km(leq: Vec<u64>) -> Result<Frame> {
        let rel = leq.iter().enumerate().map(|(x, &r)| r & !(1 << x)).collect();
        Frame::sim(leq, rel)
    }

    pub fn clm(rel: Vec<u64>) -> Result<Frame> {
        check_rows(rel.len(), &rel)?;
        Ok(Frame { kind: Sig::Clm, leq: vec![], rel })
    }

    pub fn kind(&self) -> Sig {
        self.kind
    }
    pub fn size(&self) -> usize {
        self.rel.len()
    }
    /// Points above `x` in the intuitionistic order (sim only).
    pub fn leq_row(&self, x: usize) -> u64 {
        self.leq[x]
    }
    /// Modal successors of `x`.
    pub fn rel_row(&self, x: usize) -> u64 {
        self.rel[x]
    }
    pub fn rel_rows(&self) -> &[u64] {
        &self.rel
    }
    pub fn leq_rows(&self) -> &[u64] {
        &self.leq
    }
    /// Reflexive closure of the modal relation (equals `leq` on sim frames).
    pub fn rplus_row(&self, x: usize) -> u64 {
        self.rel[x] | 1 << x
    }
    pub fn all_points(&self) -> u64 {
        full_mask(self.size())
    }

    /// The clm frame forgetting the intuitionistic order.
    pub fn forget_order(&self) -> Frame {
        Frame { kind: Sig::Clm, leq: vec![], rel: self.rel.clone() }
    }

    /// Upward closed under `leq` (sim) or under the modal relation (clm).
    pub fn is_upset(&self, u: u64) -> bool {
        mask_iter(u).all(|x| self.up_row(x) & !u == 0)
    }

    fn up_row(&self, x: usize) -> u64 {
        match self.kind {
            Sig::Sim => self.leq[x],
            Sig::Clm => self.rplus_row(x),
        }
    }

    /// Points below some member of `u` by the reflexive closure of the modal relation.
    pub fn down_closure(&self, u: u64) -> u64 {
        (0..self.size()).filter(|&x| self.rplus_row(x) & u != 0).fold(0, |m, x| m | 1 << x)
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.size()).all(|x| mask_iter(self.rel[x]).all(|y| self.rel[y] & !self.rel[x] == 0))
    }

    /// Graphviz rendering: solid edges for the modal relation, dashed edges for order pairs
    /// that are not modal pairs.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph frame {\n");
        for x in 0..self.size() {
            let _ = writeln!(s, "  {x} [label=\"{x}\"];");
        }
        for x in 0..self.size() {
            for y in mask_iter(self.rel[x]) {
                let _ = writeln!(s, "  {x} -> {y};");
            }
            if self.kind == Sig::Sim {
                for y in mask_iter(self.leq[x] & !self.rel[x]) {
                    let _ = writeln!(s, "  {x} -> {y} [style=dashed];");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

fn check_rows(n: usize, rows: &[u64]) -> Result<()> {
    if n == 0 {
        return Err(Error::BadTable("frames need at least one point".into()));
    }
    if n > MAX_POINTS {
        return Err(Error::TooLarge { size: n, cap: MAX_POINTS });
    }
    if rows.iter().any(|&r| r & !full_mask(n) != 0) {
        return Err(Error::BadTable("relation mentions a point out of range".into()));
    }
    Ok(())
}

pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Dual frame of an algebra together with the representation map.
#[derive(Clone, Debug)]
pub struct Dual {
    pub frame: Frame,
    /// The algebra element each point comes from (join-irreducible or atom).
    pub points: Vec<Elem>,
    /// `iota[a]` is the set of points whose prime filter contains `a`.
    pub iota: Vec<u64>,
}

/// Dual frame of a validated algebra.
pub fn dual_frame(a: &AnyAlgebra) -> Result<Dual> {
    let class = match a {
        AnyAlgebra::Sim(_) => Class::Fha,
        AnyAlgebra::Clm(_) => Class::Ma,
    };
    let rep = validate(a, class)?;
    if !rep.is_member() {
        return Err(Error::Domain(format!("dual frame needs a valid {class:?} algebra: {:?}", rep.violations[0])));
    }
    Ok(dual_unchecked(a.as_dyn()))
}

pub(crate) fn dual_unchecked(a: &dyn Algebra) -> Dual {
    let l = a.lattice();
    let points = match a.sig() {
        Sig::Sim => l.join_irreducibles(),
        Sig::Clm => l.atoms(),
    };
    let m = points.len();
    assert!(m <= MAX_POINTS, "dual frame too large");
    let iota: Vec<u64> = (0..l.size())
        .map(|e| (0..m).filter(|&x| l.leq(points[x], e)).fold(0, |acc, x| acc | 1 << x))
        .collect();
    // x R y iff every a with a box in the filter of x lies in the filter of y
    let mut rel = vec![0u64; m];
    for x in 0..m {
        let mut allowed = full_mask(m);
        for e in 0..l.size() {
            if iota[a.bx(e)] >> x & 1 == 1 {
                allowed &= iota[e];
            }
        }
        rel[x] = allowed;
    }
    let frame = match a.sig() {
        Sig::Sim => {
            // filters grow as the irreducible shrinks: x <= y iff points[y] <= points[x]
            let leq = (0..m)
                .map(|x| (0..m).filter(|&y| l.leq(points[y], points[x])).fold(0, |acc, y| acc | 1 << y))
                .collect();
            Frame { kind: Sig::Sim, leq, rel }
        }
        Sig::Clm => Frame { kind: Sig::Clm, leq: vec![], rel },
    };
    Dual { frame, points, iota }
}

/// Complex algebra with its carrier listed as point masks (`carrier[i]` is element `i`).
#[derive(Clone, Debug)]
pub struct Complex {
    pub algebra: AnyAlgebra,
    pub carrier: Vec<u64>,
}

impl Complex {
    pub fn index_of(&self, u: u64) -> Option<Elem> {
        self.carrier.binary_search(&u).ok()
    }
}

pub fn complex_algebra(f: &Frame) -> Result<Complex> {
    match f.kind {
        Sig::Sim => complex_sim(f),
        Sig::Clm => complex_clm(f),
    }
}

/// All upsets of a sim frame, ascending as integers.
pub fn upsets(f: &Frame) -> Result<Vec<u64>> {
    let n = f.size();
    let mut seen: HashMap<u64, ()> = HashMap::new();
    let mut list = vec![0u64];
    seen.insert(0, ());
    let mut i = 0;
    while i < list.len() {
        let u = list[i];
        for x in 0..n {
            let v = u | f.up_row(x);
            if v != u && seen.insert(v, ()).is_none() {
                list.push(v);
                if list.len() > MAX_ELEMS {
                    return Err(Error::TooLarge { size: list.len(), cap: MAX_ELEMS });
                }
            }
        }
        i += 1;
    }
    list.sort_unstable();
    Ok(list)
}

fn complex_sim(f: &Frame) -> Result<Complex> {
    let carrier = upsets(f)?;
    let (lat, carrier) = FiniteLattice::from_set_family(&carrier)?;
    let idx: HashMap<u64, usize> = carrier.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let n = f.size();
    let imp: Vec<Vec<Elem>> = carrier
        .iter()
        .map(|&u| {
            carrier
                .iter()
                .map(|&v| {
                    let bad = u & !v;
                    idx[&(0..n).filter(|&x| f.leq[x] & bad == 0).fold(0u64, |m, x| m | 1 << x)]
                })
                .collect()
        })
        .collect();
    let boxm = carrier.iter().map(|&u| idx[&box_of(f, u)]).collect();
    let alg = AlgebraSim::with_imp(lat, &imp, boxm)?;
    Ok(Complex { algebra: AnyAlgebra::Sim(alg), carrier })
}

fn complex_clm(f: &Frame) -> Result<Complex> {
    let n = f.size();
    if 1usize << n.min(63) > MAX_ELEMS || n > 8 {
        return Err(Error::TooLarge { size: 1 << n.min(20), cap: MAX_ELEMS });
    }
    let lat = FiniteLattice::boolean(n);
    let full = full_mask(n);
    let carrier: Vec<u64> = (0..1u64 << n).collect();
    let neg: Vec<Elem> = carrier.iter().map(|&u| (full & !u) as Elem).collect();
    let boxm = carrier.iter().map(|&u| box_of(f, u) as Elem).collect();
    let alg = AlgebraClm::with_neg(lat, &neg, boxm)?;
    Ok(Complex { algebra: AnyAlgebra::Clm(alg), carrier })
}

/// `{x : every modal successor of x is in u}`.
pub fn box_of(f: &Frame, u: u64) -> u64 {
    (0..f.size()).filter(|&x| f.rel[x] & !u == 0).fold(0, |m, x| m | 1 << x)
}

/// The skeleton of a frontal Heyting algebra with the embedding of the algebra into it.
#[derive(Clone, Debug)]
pub struct Sigma {
    pub algebra: AlgebraClm,
    /// `embed[a]` is the image of element `a`; elements of the result are point masks.
    pub embed: Vec<Elem>,
    pub dual: Dual,
}

/// sigma(H): the free Boolean extension with `[]a = [m](Ia)`. Computed algebraically and
/// via the dual frame; the two must coincide.
pub fn sigma_algebra(h: &AlgebraSim) -> Result<Sigma> {
    let rep = validate(&AnyAlgebra::Sim(h.clone()), Class::Fha)?;
    if !rep.is_member() {
        return Err(Error::Domain("sigma needs a frontal Heyting algebra".into()));
    }
    let dual = dual_unchecked(h);
    let m = dual.frame.size();
    if m > 8 {
        return Err(Error::TooLarge { size: 1 << m.min(20), cap: MAX_ELEMS });
    }
    let l = h.lattice();
    let mut of_image: HashMap<u64, Elem> = HashMap::new();
    for e in 0..l.size() {
        of_image.insert(dual.iota[e], e);
    }
    let size = 1usize << m;
    let boxm: Vec<Elem> = (0..size as u64)
        .map(|u| {
            // Iu: the largest image below u, i.e. the union of all images inside u
            let inner = dual.iota.iter().filter(|&&v| v & !u == 0).fold(0, |acc, &v| acc | v);
            dual.iota[h.bx(of_image[&inner])] as Elem
        })
        .collect();
    let full = full_mask(m);
    let neg: Vec<Elem> = (0..size as u64).map(|u| (full & !u) as Elem).collect();
    let algebra = AlgebraClm::with_neg(FiniteLattice::boolean(m), &neg, boxm)?;
    let via_dual = complex_clm(&dual.frame.forget_order())?;
    if AnyAlgebra::Clm(algebra.clone()) != via_dual.algebra {
        return Err(Error::Internal("algebraic and dual sigma disagree".into()));
    }
    let embed = dual.iota.iter().map(|&u| u as Elem).collect();
    Ok(Sigma { algebra, embed, dual })
}

/// rho(M): the quasi-open elements with `a -> b = [+](~a | b)` and `[m]a = []a`.
#[derive(Clone, Debug)]
pub struct Rho {
    pub algebra: AlgebraSim,
    /// `incl[i]` is the element of M that element `i` of the result is.
    pub incl: Vec<Elem>,
}

pub fn rho_algebra(m: &AlgebraClm) -> Result<Rho> {
    let q = crate::algebra::quasi_opens(m)?;
    let (lat, incl) = m.lattice().sublattice(&q)?;
    let mut back = vec![usize::MAX; m.size()];
    for (i, &a) in incl.iter().enumerate() {
        back[a] = i;
    }
    let ml = m.lattice();
    let imp: Vec<Vec<Elem>> = incl
        .iter()
        .map(|&a| incl.iter().map(|&b| back[m.box_plus(ml.join(m.neg(a), b))]).collect())
        .collect();
    let boxm = incl.iter().map(|&a| back[m.bx(a)]).collect::<Vec<_>>();
    if boxm.iter().chain(imp.iter().flatten()).any(|&x| x == usize::MAX) {
        return Err(Error::Internal("quasi-opens not closed under the rho operations".into()));
    }
    let algebra = AlgebraSim::with_imp(lat, &imp, boxm)?;
    Ok(Rho { algebra, incl })
}

/// Quotient of a transitive clm frame by its clusters. Classes are numbered by their least
/// point.
pub fn cluster_collapse(f: &Frame) -> Result<(Frame, Vec<usize>)> {
    if f.kind != Sig::Clm || !f.is_transitive() {
        return Err(Error::Domain("cluster collapse needs a transitive clm frame".into()));
    }
    let n = f.size();
    let mut map = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if map[x] == usize::MAX {
            let c = reps.len();
            reps.push(x);
            for y in x..n {
                if y == x || (f.rel[x] >> y & 1 == 1 && f.rel[y] >> x & 1 == 1) {
                    map[y] = c;
                }
            }
        }
    }
    let row = |x: usize, plus: bool| {
        let r = if plus { f.rplus_row(x) } else { f.rel[x] };
        mask_iter(r).fold(0u64, |m, y| m | 1 << map[y])
    };
    let leq = reps.iter().map(|&x| row(x, true)).collect();
    let rel = reps.iter().map(|&x| row(x, false)).collect();
    Ok((Frame::sim(leq, rel)?, map))
}

/// `max U` and the passive points of `U`.
pub fn frontier(f: &Frame, u: u64) -> (u64, u64) {
    let mut max = 0;
    let mut pas = 0;
    for x in mask_iter(u) {
        if f.rel[x] & u & !(1 << x) == 0 {
            max |= 1 << x;
        }
        if mask_iter(f.rel[x] & !u).all(|y| f.rel[y] & u == 0) {
            pas |= 1 << x;
        }
    }
    (max, pas)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassFlags {
    #[serde(rename = "K4")]
    pub k4: bool,
    #[serde(rename = "K4Grz")]
    pub k4grz: bool,
    #[serde(rename = "GL")]
    pub gl: bool,
    #[serde(rename = "KM")]
    pub km: bool,
}

/// Frame classes. K4.Grz is decided semantically: the complex algebra must validate
/// `/ []([](p -> []p) -> p) -> []p`.
pub fn frame_class(f: &Frame) -> Result<ClassFlags> {
    let n = f.size();
    Ok(match f.kind {
        Sig::Sim => ClassFlags {
            km: (0..n).all(|x| f.rel[x] == f.leq[x] & !(1 << x)),
            ..Default::default()
        },
        Sig::Clm => {
            let k4 = f.is_transitive();
            let irreflexive = (0..n).all(|x| f.rel[x] >> x & 1 == 0);
            let k4grz = k4 && grz_semantic(f)?;
            ClassFlags { k4, k4grz, gl: k4 && irreflexive && acyclic(f), km: false }
        }
    })
}

fn acyclic(f: &Frame) -> bool {
    // transitive closure has no loop
    let n = f.size();
    let mut reach = f.rel.clone();
    loop {
        let mut changed = false;
        for x in 0..n {
            let add = mask_iter(reach[x]).fold(0, |m, y| m | reach[y]);
            if add & !reach[x] != 0 {
                reach[x] |= add;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).all(|x| reach[x] >> x & 1 == 0)
}

fn grz_semantic(f: &Frame) -> Result<bool> {
    let c = complex_clm(f)?;
    let r = parse_rule("/ []([](p -> []p) -> p) -> []p", Sig::Clm)?;
    Ok(rule_valid(&c.algebra, &r)?.is_valid())
}

/// Structural shortcut for K4.Grz: transitive with no proper clusters.
pub fn grz_structural(f: &Frame) -> bool {
    f.kind == Sig::Clm
        && f.is_transitive()
        && (0..f.size()).all(|x| mask_iter(f.rel[x]).all(|y| y == x || f.rel[y] >> x & 1 == 0))
}

/// Frame classes of an algebra's dual, for convenience.
pub fn validate_matches_class(m: &AlgebraClm, flags: &ClassFlags) -> Result<bool> {
    let k4 = validate_clm(m, Class::K4)?.is_member();
    let grz = validate_clm(m, Class::K4Grz)?.is_member();
    Ok(k4 == flags.k4 && grz == flags.k4grz)
}

/// The fronton on the upsets of a poset, i.e. the complex algebra of its KM-frame.
pub fn fronton_of_poset(leq: Vec<u64>) -> Result<AlgebraSim> {
    let c = complex_sim(&Frame::km(leq)?)?;
    match c.algebra {
        AnyAlgebra::Sim(a) => Ok(a),
        AnyAlgebra::Clm(_) => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fronton_expand;

    fn chain_frame(n: usize) -> Frame {
        // point 0 at the bottom
        Frame::km((0..n).map(|x| full_mask(n) & !((1u64 << x) - 1)).collect()).unwrap()
    }

    fn f3() -> AlgebraSim {
        fronton_expand(&FiniteLattice::chain(3))
    }

    #[test]
    fn dual_of_chains() {
        let d = dual_frame(&AnyAlgebra::Sim(f3())).unwrap();
        assert_eq!(d.frame.size(), 2);
        assert!(frame_class(&d.frame).unwrap().km);
        assert_eq!(d.points, vec![1, 2]);
        // the irreducible 1 is the larger filter, so it is the top point
        assert_eq!(d.frame.leq_rows(), &[0b01, 0b11]);
        let d2 = dual_frame(&AnyAlgebra::Sim(fronton_expand(&FiniteLattice::chain(2)))).unwrap();
        assert_eq!(d2.frame.rel_rows(), &[0]);
        let id = AlgebraClm::new(FiniteLattice::boolean(1), vec![0, 1]).unwrap();
        assert_eq!(dual_frame(&AnyAlgebra::Clm(id)).unwrap().frame.rel_rows(), &[1]);
    }

    #[test]
    fn complex_examples() {
        let c = complex_algebra(&Frame::clm(vec![0]).unwrap()).unwrap();
        assert_eq!(c.algebra.as_clm().unwrap().box_table(), vec![1, 1]);
        let c = complex_algebra(&chain_frame(2)).unwrap();
        assert_eq!(c.algebra, AnyAlgebra::Sim(f3()));
        let c = complex_algebra(&Frame::clm(vec![0, 0, 0]).unwrap()).unwrap();
        assert!(c.algebra.as_clm().unwrap().box_table().iter().all(|&b| b == 7));
    }

    #[test]
    fn sigma_and_rho_of_the_3_chain() {
        let s = sigma_algebra(&f3()).unwrap();
        assert_eq!(s.algebra.size(), 4);
        assert!(validate_clm(&s.algebra, Class::Magari).unwrap().is_member());
        assert_eq!(crate::algebra::quasi_opens(&s.algebra).unwrap().len(), 3);
        let r = rho_algebra(&s.algebra).unwrap();
        assert_eq!(r.algebra, f3());
        let s2 = sigma_algebra(&fronton_expand(&FiniteLattice::chain(2))).unwrap();
        assert_eq!(s2.algebra.box_table(), vec![1, 1]);
    }

    #[test]
    fn rho_of_identity_box() {
        let id = AlgebraClm::new(FiniteLattice::boolean(1), vec![0, 1]).unwrap();
        let r = rho_algebra(&id).unwrap();
        assert_eq!(r.algebra.box_table(), vec![0, 1]);
        assert_eq!(r.incl, vec![0, 1]);
        let bad = AlgebraClm::new(FiniteLattice::boolean(2), vec![0, 2, 1, 3]).unwrap();
        assert!(rho_algebra(&bad).is_err());
    }

    #[test]
    fn collapse_examples() {
        let cluster = Frame::clm(vec![0b11, 0b11]).unwrap();
        let (q, map) = cluster_collapse(&cluster).unwrap();
        assert_eq!(map, vec![0, 0]);
        assert_eq!((q.leq_rows(), q.rel_rows()), (&[1u64][..], &[1u64][..]));
        let chain = Frame::clm(vec![0b10, 0]).unwrap();
        let (q, map) = cluster_collapse(&chain).unwrap();
        assert_eq!(map, vec![0, 1]);
        assert_eq!(q.rel_rows(), &[0b10, 0]);
        let (q, _) = cluster_collapse(&Frame::clm(vec![0]).unwrap()).unwrap();
        assert_eq!(q.rel_rows(), &[0]);
        assert!(cluster_collapse(&Frame::clm(vec![0b10, 0b100, 0]).unwrap()).is_err());
    }

    #[test]
    fn frontier_examples() {
        let chain = Frame::clm(vec![0b10, 0]).unwrap();
        assert_eq!(frontier(&chain, 0b11), (0b10, 0b11));
        assert_eq!(frontier(&chain, 0), (0, 0));
        assert_eq!(frontier(&Frame::clm(vec![0]).unwrap(), 1), (1, 1));
        // u -> v with v outside U and v seeing nothing in U: u passive
        assert_eq!(frontier(&chain, 0b01), (0b01, 0b01));
    }

    #[test]
    fn class_examples() {
        let flags = |rel: Vec<u64>| frame_class(&Frame::clm(rel).unwrap()).unwrap();
        let f = flags(vec![0b10, 0]);
        assert!(f.k4 && f.k4grz && f.gl);
        let f = flags(vec![0b11, 0b11]);
        assert!(f.k4 && !f.k4grz && !f.gl);
        let f = flags(vec![1]);
        assert!(f.k4 && f.k4grz && !f.gl);
        assert!(frame_class(&chain_frame(3)).unwrap().km);
    }

    #[test]
    fn sim_frame_invariant_enforced() {
        // modal relation missing a strict order pair
        assert!(Frame::sim(vec![0b11, 0b10], vec![0, 0]).is_err());
        // modal relation outside the order
        assert!(Frame::sim(vec![0b01, 0b10], vec![0b10, 0]).is_err());
        assert!(Frame::sim(vec![0b11, 0b10], vec![0b11, 0]).is_ok());
    }

    #[test]
    fn dot_output() {
        let f = Frame::sim(vec![0b11, 0b10], vec![0b11, 0]).unwrap();
        let d = f.to_dot();
        assert!(d.contains("0 -> 0;") && d.contains("0 -> 1;") && d.contains("1 -> 1 [style=dashed];"));
    }
}
