//! Backtracking searches for pre-stable embeddings and for their dual surjections.

use super::DomainPair;
use crate::algebra::{Algebra, AnyAlgebra, Sig};
use crate::bits::mask_iter;
use crate::duality::{full_mask, Dual, Frame};
use crate::order::Elem;
use rayon::prelude::*;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Truth-functional structure only (plus `h([+]a) <= [+]h(a)` for clm).
    PreStable,
    /// Additionally `h([m]a) <= [m]h(a)` or `h([]a) <= []h(a)` everywhere.
    Stable,
}

/// What an algebra-level embedding must satisfy: a mode and the bounded domain condition
/// on the listed domains of the source algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingSpec {
    pub mode: Mode,
    pub domains: DomainPair,
}

#[derive(Clone, Copy, Debug)]
enum Check {
    /// `h(z) = c` for a constant of the target
    Const(Elem, Elem),
    /// `h(z) = h(x) /\ h(y)`
    Meet(Elem, Elem, Elem),
    /// `h(z) = h(x) \/ h(y)`
    Join(Elem, Elem, Elem),
    /// `h(z) = ~h(x)`
    Neg(Elem, Elem),
    /// `h(z) = h(x) -> h(y)`
    Imp(Elem, Elem, Elem),
    /// `h(z) = box h(x)`
    BoxEq(Elem, Elem),
    /// `h(z) <= box h(x)`
    BoxLeq(Elem, Elem),
    /// `h(z) <= [+]h(x)`
    BoxPlusLeq(Elem, Elem),
}

impl Check {
    fn elems(&self) -> Vec<Elem> {
        match *self {
            Check::Const(z, _) => vec![z],
            Check::Meet(x, y, z) | Check::Join(x, y, z) | Check::Imp(x, y, z) => vec![x, y, z],
            Check::Neg(x, z) | Check::BoxEq(x, z) | Check::BoxLeq(x, z) | Check::BoxPlusLeq(x, z) => vec![x, z],
        }
    }

    /// Value forced on `z` once everything else is known.
    fn forced(&self, a: &AnyAlgebra, h: &[Elem]) -> Option<Elem> {
        let l = a.lattice();
        Some(match *self {
            Check::Const(_, c) => c,
            Check::Meet(x, y, _) => l.meet(h[x], h[y]),
            Check::Join(x, y, _) => l.join(h[x], h[y]),
            Check::Neg(x, _) => a.imp(h[x], l.bottom()),
            Check::Imp(x, y, _) => a.imp(h[x], h[y]),
            Check::BoxEq(x, _) => a.bx(h[x]),
            Check::BoxLeq(..) | Check::BoxPlusLeq(..) => return None,
        })
    }

    fn holds(&self, a: &AnyAlgebra, h: &[Elem]) -> bool {
        let l = a.lattice();
        match *self {
            Check::Const(z, _) | Check::Meet(_, _, z) | Check::Join(_, _, z) | Check::Neg(_, z) | Check::Imp(_, _, z) | Check::BoxEq(_, z) => {
                Some(h[z]) == self.forced(a, h)
            }
            Check::BoxLeq(x, z) => l.leq(h[z], a.bx(h[x])),
            Check::BoxPlusLeq(x, z) => l.leq(h[z], l.meet(a.bx(h[x]), h[x])),
        }
    }
}

fn checks(b: &AnyAlgebra, a: &AnyAlgebra, spec: &EmbeddingSpec) -> Vec<Check> {
    let lb = b.lattice();
    let la = a.lattice();
    let n = b.size();
    let mut out = vec![Check::Const(lb.bottom(), la.bottom()), Check::Const(lb.top(), la.top())];
    for x in 0..n {
        for y in x..n {
            out.push(Check::Meet(x, y, lb.meet(x, y)));
            out.push(Check::Join(x, y, lb.join(x, y)));
        }
    }
    match b {
        AnyAlgebra::Sim(hb) => {
            for &(x, y) in &spec.domains.imp {
                out.push(Check::Imp(x, y, hb.imp(x, y)));
            }
            if spec.mode == Mode::Stable {
                out.extend((0..n).map(|x| Check::BoxLeq(x, hb.bx(x))));
            }
        }
        AnyAlgebra::Clm(mb) => {
            out.extend((0..n).map(|x| Check::Neg(x, mb.neg(x))));
            out.extend((0..n).map(|x| Check::BoxPlusLeq(x, mb.box_plus(x))));
            if spec.mode == Mode::Stable {
                out.extend((0..n).map(|x| Check::BoxLeq(x, mb.bx(x))));
            }
        }
    }
    out.extend(spec.domains.bx.iter().map(|&x| Check::BoxEq(x, b.bx(x))));
    out
}

/// Literal recheck of an embedding against the definitions.
pub fn check_embedding(b: &AnyAlgebra, a: &AnyAlgebra, h: &[Elem], spec: &EmbeddingSpec) -> bool {
    if b.sig() != a.sig() || h.len() != b.size() || h.iter().any(|&x| x >= a.size()) {
        return false;
    }
    let mut seen = vec![false; a.size()];
    for &x in h {
        if std::mem::replace(&mut seen[x], true) {
            return false;
        }
    }
    checks(b, a, spec).iter().all(|c| c.holds(a, h))
}

/// First embedding `b -> a` per `spec`, assigning the elements of `b` in canonical order and
/// trying target values in canonical order.
pub fn embedding_search(b: &AnyAlgebra, a: &AnyAlgebra, spec: &EmbeddingSpec) -> Option<Vec<Elem>> {
    if b.sig() != a.sig() || b.size() > a.size() {
        return None;
    }
    let order: Vec<Elem> = b.lattice().elements().to_vec();
    let mut pos = vec![0; b.size()];
    for (i, &e) in order.iter().enumerate() {
        pos[e] = i;
    }
    // each check fires when its last element is assigned; it forces that element when it
    // is the check's result
    let mut fire: Vec<Vec<(Check, bool)>> = vec![vec![]; order.len()];
    for c in checks(b, a, spec) {
        let els = c.elems();
        let last = els.iter().map(|&e| pos[e]).max().unwrap();
        let result = *els.last().unwrap();
        let strictly_last = els[..els.len() - 1].iter().all(|&e| pos[e] < pos[result]);
        let forcing = strictly_last && !matches!(c, Check::BoxLeq(..) | Check::BoxPlusLeq(..));
        fire[last].push((c, forcing));
    }
    let ctx = Ctx { a, order: &order, fire: &fire };
    let mut h = vec![usize::MAX; b.size()];
    let mut used = vec![false; a.size()];
    ctx.top(&mut h, &mut used)
}

struct Ctx<'a> {
    a: &'a AnyAlgebra,
    order: &'a [Elem],
    fire: &'a [Vec<(Check, bool)>],
}

impl Ctx<'_> {
    fn candidates(&self, k: usize, h: &[Elem], used: &[bool]) -> Vec<Elem> {
        if let Some((c, _)) = self.fire[k].iter().find(|(_, f)| *f) {
            let v = c.forced(self.a, h).expect("forcing check");
            return if used[v] { vec![] } else { vec![v] };
        }
        self.a.lattice().elements().iter().copied().filter(|&v| !used[v]).collect()
    }

    fn accept(&self, k: usize, h: &[Elem]) -> bool {
        self.fire[k].iter().all(|(c, _)| c.holds(self.a, h))
    }

    /// Run serially until the first real branching point, then split that branch across
    /// threads, keeping the first solution in candidate order.
    fn top(&self, h: &mut Vec<Elem>, used: &mut Vec<bool>) -> Option<Vec<Elem>> {
        let mut k = 0;
        loop {
            if k == self.order.len() {
                return Some(h.clone());
            }
            let cands = self.candidates(k, h, used);
            if cands.len() != 1 {
                let e = self.order[k];
                return cands.par_iter().find_map_first(|&v| {
                    let mut h = h.clone();
                    let mut used = used.clone();
                    h[e] = v;
                    if !self.accept(k, &h) {
                        return None;
                    }
                    used[v] = true;
                    self.dfs(k + 1, &mut h, &mut used).then_some(h)
                });
            }
            let v = cands[0];
            h[self.order[k]] = v;
            if !self.accept(k, h) {
                return None;
            }
            used[v] = true;
            k += 1;
        }
    }

    fn dfs(&self, k: usize, h: &mut Vec<Elem>, used: &mut Vec<bool>) -> bool {
        if k == self.order.len() {
            return true;
        }
        let e = self.order[k];
        for v in self.candidates(k, h, used) {
            h[e] = v;
            if self.accept(k, h) {
                used[v] = true;
                if self.dfs(k + 1, h, used) {
                    return true;
                }
                used[v] = false;
            }
        }
        h[e] = usize::MAX;
        false
    }
}

/// Relation used by a back-and-forth condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrameRel {
    /// The intuitionistic order of a sim frame.
    Leq,
    /// The modal relation (strict modal relation on sim frames).
    Rel,
}

/// Back-and-forth condition for one set of target points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FrameCond {
    pub rel: FrameRel,
    pub set: u64,
}

fn succ(f: &Frame, rel: FrameRel, x: usize) -> u64 {
    match rel {
        FrameRel::Leq => f.leq_row(x),
        FrameRel::Rel => f.rel_row(x),
    }
}

/// The monotonicity relation of pre-stable maps: the order (sim) or the reflexive modal
/// relation (clm).
fn mono_row(f: &Frame, x: usize) -> u64 {
    match f.kind() {
        Sig::Sim => f.leq_row(x),
        Sig::Clm => f.rplus_row(x),
    }
}

/// Frame-level domains: implication pairs become `i(a) \ i(b)` under the order, box
/// elements become the complement of `i(a)` under the modal relation.
pub fn frame_conditions(dual: &Dual, d: &DomainPair) -> Vec<FrameCond> {
    let full = full_mask(dual.frame.size());
    let mut out: Vec<FrameCond> = d
        .imp
        .iter()
        .map(|&(x, y)| FrameCond { rel: FrameRel::Leq, set: dual.iota[x] & !dual.iota[y] })
        .chain(d.bx.iter().map(|&x| FrameCond { rel: FrameRel::Rel, set: full & !dual.iota[x] }))
        .collect();
    out.sort_by_key(|c| (c.rel == FrameRel::Rel, c.set));
    out.dedup();
    out
}

fn bfc_at(x: &Frame, y: &Frame, f: &[usize], p: usize, c: &FrameCond) -> bool {
    let there = succ(y, c.rel, f[p]) & c.set != 0;
    let here = mask_iter(succ(x, c.rel, p)).any(|z| c.set >> f[z] & 1 == 1);
    there == here
}

/// Literal recheck: surjective, monotone, and back-and-forth for every condition.
pub fn check_frame_map(x: &Frame, y: &Frame, f: &[usize], conds: &[FrameCond]) -> bool {
    if f.len() != x.size() || f.iter().any(|&v| v >= y.size()) || x.kind() != y.kind() {
        return false;
    }
    let hit = f.iter().fold(0u64, |m, &v| m | 1 << v);
    hit == y.all_points()
        && (0..x.size()).all(|p| mask_iter(mono_row(x, p)).all(|q| mono_row(y, f[p]) >> f[q] & 1 == 1))
        && (0..x.size()).all(|p| conds.iter().all(|c| bfc_at(x, y, f, p, c)))
}

/// First pre-stable surjection `x -> y` satisfying the conditions; points of `x` are
/// assigned in index order, target points tried in index order.
pub fn frame_search(x: &Frame, y: &Frame, conds: &[FrameCond]) -> Option<Vec<usize>> {
    let n = x.size();
    if x.kind() != y.kind() || y.size() > n {
        return None;
    }
    // a point's conditions are checked once it and all its successors are assigned
    let mut fire: Vec<Vec<usize>> = vec![vec![]; n];
    for p in 0..n {
        let mut last = p;
        for c in conds {
            last = last.max(mask_iter(succ(x, c.rel, p)).max().unwrap_or(0));
        }
        fire[last].push(p);
    }
    let mut f = vec![usize::MAX; n];
    let ok = frame_dfs(x, y, conds, &fire, 0, &mut f);
    ok.then_some(f)
}

fn frame_dfs(x: &Frame, y: &Frame, conds: &[FrameCond], fire: &[Vec<usize>], k: usize, f: &mut Vec<usize>) -> bool {
    let n = x.size();
    if k == n {
        return true;
    }
    let hit = f[..k].iter().fold(0u64, |m, &v| m | 1 << v);
    let missing = (y.all_points() & !hit).count_ones() as usize;
    if missing > n - k {
        return false;
    }
    for v in 0..y.size() {
        // the remaining points must still be able to cover every missed target
        if missing == n - k && hit >> v & 1 == 1 {
            continue;
        }
        f[k] = v;
        let mono = (0..k).all(|q| {
            (mono_row(x, q) >> k & 1 == 0 || mono_row(y, f[q]) >> v & 1 == 1)
                && (mono_row(x, k) >> q & 1 == 0 || mono_row(y, v) >> f[q] & 1 == 1)
        }) && (mono_row(x, k) >> k & 1 == 0 || mono_row(y, v) >> v & 1 == 1);
        if mono && fire[k].iter().all(|&p| conds.iter().all(|c| bfc_at(x, y, f, p, c))) && frame_dfs(x, y, conds, fire, k + 1, f) {
            return true;
        }
    }
    f[k] = usize::MAX;
    false
}

/// The algebra map dual to a frame map: `h(b)` is the element of the target whose point
/// set is the preimage of the point set of `b`.
pub fn algebra_map_from_frame_map(target: &Dual, source: &Dual, f: &[usize]) -> Option<Vec<Elem>> {
    let idx: HashMap<u64, Elem> = target.iota.iter().enumerate().map(|(e, &u)| (u, e)).collect();
    source
        .iota
        .iter()
        .map(|&u| {
            let pre = (0..f.len()).filter(|&p| u >> f[p] & 1 == 1).fold(0u64, |m, p| m | 1 << p);
            idx.get(&pre).copied()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fronton_expand;
    use crate::order::FiniteLattice;

    fn chain(n: usize) -> AnyAlgebra {
        AnyAlgebra::Sim(fronton_expand(&FiniteLattice::chain(n)))
    }

    #[test]
    fn search_examples() {
        let spec = EmbeddingSpec { mode: Mode::PreStable, domains: DomainPair::default() };
        assert_eq!(embedding_search(&chain(2), &chain(3), &spec), Some(vec![0, 2]));
        assert_eq!(embedding_search(&chain(3), &chain(2), &spec), None);
        let stable = EmbeddingSpec { mode: Mode::Stable, domains: DomainPair::default() };
        // [m]0 is the top of the 2-chain but not of the 3-chain
        assert!(embedding_search(&chain(2), &chain(3), &stable).is_none());
        assert!(embedding_search(&chain(2), &chain(2), &stable).is_some());
        // 3-chain into 4-chain with the box condition on the bottom
        let spec = EmbeddingSpec { mode: Mode::PreStable, domains: DomainPair::boxes(vec![0]) };
        let h = embedding_search(&chain(3), &chain(4), &spec).unwrap();
        assert!(check_embedding(&chain(3), &chain(4), &h, &spec));
    }
}
