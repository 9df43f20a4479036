//! Finite bounded distributive lattices.

use crate::bits::{ElemSet, MAX_ELEMS};
use crate::error::{Error, Result};
use std::collections::HashMap;

pub type Elem = usize;

/// A finite bounded distributive lattice with precomputed order rows and operation tables.
///
/// Indices are dense. The canonical element order is the topological order of `leq` that
/// always takes the smallest available index; [`FiniteLattice::elements`] yields it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    n: usize,
    up: Vec<ElemSet>,
    down: Vec<ElemSet>,
    meet: Vec<u16>,
    join: Vec<u16>,
    bottom: Elem,
    top: Elem,
    order: Vec<Elem>,
    rank: Vec<usize>,
}

impl FiniteLattice {
    /// Build from a boolean order matrix, validating partial order, lattice and distributivity.
    pub fn from_leq(leq: &[Vec<bool>]) -> Result<Self> {
        let n = leq.len();
        if n == 0 {
            return Err(Error::NotPartialOrder("empty carrier".into()));
        }
        if n > MAX_ELEMS {
            return Err(Error::TooLarge { size: n, cap: MAX_ELEMS });
        }
        if leq.iter().any(|r| r.len() != n) {
            return Err(Error::BadTable("order matrix is not square".into()));
        }
        let mut up = vec![ElemSet::EMPTY; n];
        for a in 0..n {
            for b in 0..n {
                if leq[a][b] {
                    up[a].insert(b);
                }
            }
        }
        Self::from_up(up)
    }

    /// Build from up-set rows (`up[a]` = elements above `a`), fully validated.
    pub fn from_up(up: Vec<ElemSet>) -> Result<Self> {
        let n = up.len();
        if n == 0 {
            return Err(Error::NotPartialOrder("empty carrier".into()));
        }
        if n > MAX_ELEMS {
            return Err(Error::TooLarge { size: n, cap: MAX_ELEMS });
        }
        for a in 0..n {
            if !up[a].contains(a) {
                return Err(Error::NotPartialOrder(format!("not reflexive at {a}")));
            }
            for b in up[a].iter() {
                if b >= n {
                    return Err(Error::BadTable(format!("index {b} out of range")));
                }
                if b != a && up[b].contains(a) {
                    return Err(Error::NotPartialOrder(format!("not antisymmetric at ({a}, {b})")));
                }
                if !up[b].is_subset(&up[a]) {
                    return Err(Error::NotPartialOrder(format!("not transitive through {a} <= {b}")));
                }
            }
        }
        let down = transpose(&up);
        let mut meet = vec![0u16; n * n];
        let mut join = vec![0u16; n * n];
        for a in 0..n {
            for b in a..n {
                let m = bound(&down, &down[a].and(&down[b])).ok_or(Error::NotLattice(a, b, "meet"))?;
                let j = bound(&up, &up[a].and(&up[b])).ok_or(Error::NotLattice(a, b, "join"))?;
                meet[a * n + b] = m as u16;
                meet[b * n + a] = m as u16;
                join[a * n + b] = j as u16;
                join[b * n + a] = j as u16;
            }
        }
        let lat = Self::assemble(up, down, meet, join);
        lat.check_distributive()?;
        Ok(lat)
    }

    /// Lattice of a family of point sets closed under union and intersection, ordered by
    /// inclusion. Index `i` is the position of `family[i]` after sorting ascending.
    /// Such a family is always distributive, so that check is skipped.
    pub fn from_set_family(family: &[u64]) -> Result<(Self, Vec<u64>)> {
        let mut fam = family.to_vec();
        fam.sort_unstable();
        fam.dedup();
        let n = fam.len();
        if n > MAX_ELEMS {
            return Err(Error::TooLarge { size: n, cap: MAX_ELEMS });
        }
        let index: HashMap<u64, usize> = fam.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut up = vec![ElemSet::EMPTY; n];
        let mut meet = vec![0u16; n * n];
        let mut join = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                if fam[a] & !fam[b] == 0 {
                    up[a].insert(b);
                }
                let m = *index
                    .get(&(fam[a] & fam[b]))
                    .ok_or_else(|| Error::BadTable("family not closed under intersection".into()))?;
                let j = *index
                    .get(&(fam[a] | fam[b]))
                    .ok_or_else(|| Error::BadTable("family not closed under union".into()))?;
                meet[a * n + b] = m as u16;
                join[a * n + b] = j as u16;
            }
        }
        let down = transpose(&up);
        Ok((Self::assemble(up, down, meet, join), fam))
    }

    /// The `n`-element chain `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> Self {
        let fam: Vec<u64> = (0..n).map(|i| (1u64 << i) - 1).collect();
        Self::from_set_family(&fam).expect("chain").0
    }

    /// The Boolean lattice of all subsets of `k` atoms; index = bitmask.
    pub fn boolean(k: usize) -> Self {
        let fam: Vec<u64> = (0..1u64 << k).collect();
        Self::from_set_family(&fam).expect("powerset").0
    }

    fn assemble(up: Vec<ElemSet>, down: Vec<ElemSet>, meet: Vec<u16>, join: Vec<u16>) -> Self {
        let n = up.len();
        let bottom = (0..n).find(|&a| up[a].len() == n).expect("bottom");
        let top = (0..n).find(|&a| down[a].len() == n).expect("top");
        let mut order = Vec::with_capacity(n);
        let mut placed = ElemSet::EMPTY;
        while order.len() < n {
            let next = (0..n)
                .find(|&a| !placed.contains(a) && down[a].minus(&ElemSet::singleton(a)).is_subset(&placed))
                .expect("acyclic order");
            placed.insert(next);
            order.push(next);
        }
        let mut rank = vec![0; n];
        for (i, &a) in order.iter().enumerate() {
            rank[a] = i;
        }
        FiniteLattice { n, up, down, meet, join, bottom, top, order, rank }
    }

    fn check_distributive(&self) -> Result<()> {
        for a in 0..self.n {
            for b in 0..self.n {
                for c in b + 1..self.n {
                    let lhs = self.meet(a, self.join(b, c));
                    let rhs = self.join(self.meet(a, b), self.meet(a, c));
                    if lhs != rhs {
                        return Err(Error::NotDistributive(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }
    #[inline]
    pub fn bottom(&self) -> Elem {
        self.bottom
    }
    #[inline]
    pub fn top(&self) -> Elem {
        self.top
    }
    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.up[a].contains(b)
    }
    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.n + b] as Elem
    }
    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.n + b] as Elem
    }
    /// `{b : a <= b}`.
    #[inline]
    pub fn up(&self, a: Elem) -> &ElemSet {
        &self.up[a]
    }
    /// `{b : b <= a}`.
    #[inline]
    pub fn down(&self, a: Elem) -> &ElemSet {
        &self.down[a]
    }
    /// Elements in canonical order.
    #[inline]
    pub fn elements(&self) -> &[Elem] {
        &self.order
    }
    /// Position of `a` in the canonical order.
    #[inline]
    pub fn rank(&self, a: Elem) -> usize {
        self.rank[a]
    }
    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    pub fn meet_all(&self, s: &ElemSet) -> Elem {
        s.iter().fold(self.top, |m, x| self.meet(m, x))
    }

    pub fn join_all(&self, s: &ElemSet) -> Elem {
        s.iter().fold(self.bottom, |m, x| self.join(m, x))
    }

    /// Least subset containing `s`, bottom and top, closed under meet and join.
    pub fn sublattice_generate(&self, s: &ElemSet) -> ElemSet {
        let mut set = *s;
        set.insert(self.bottom);
        set.insert(self.top);
        let mut members: Vec<Elem> = set.iter().collect();
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for j in 0..i {
                let y = members[j];
                for z in [self.meet(x, y), self.join(x, y)] {
                    if set.insert(z) {
                        members.push(z);
                    }
                }
            }
            i += 1;
        }
        set
    }

    /// Elements with exactly one lower cover, in canonical order.
    pub fn join_irreducibles(&self) -> Vec<Elem> {
        self.order
            .iter()
            .copied()
            .filter(|&a| a != self.bottom && self.lower_covers(a).len() == 1)
            .collect()
    }

    pub fn lower_covers(&self, a: Elem) -> Vec<Elem> {
        let below = self.down[a].minus(&ElemSet::singleton(a));
        below
            .iter()
            .filter(|&b| self.up[b].and(&below).len() == 1)
            .collect()
    }

    pub fn atoms(&self) -> Vec<Elem> {
        self.order
            .iter()
            .copied()
            .filter(|&a| a != self.bottom && self.down[a].len() == 2)
            .collect()
    }

    /// `a -> b = join {c : a /\ c <= b}`.
    pub fn heyting_implication(&self, a: Elem, b: Elem) -> Elem {
        let mut r = self.bottom;
        for c in 0..self.n {
            if self.leq(self.meet(a, c), b) {
                r = self.join(r, c);
            }
        }
        r
    }

    /// Full implication table, row-major.
    pub fn implication_table(&self) -> Vec<u16> {
        let n = self.n;
        let mut t = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                // The residual is the largest c with a /\ c <= b; scan from the top down.
                let mut r = self.bottom;
                for &c in self.order.iter().rev() {
                    if self.leq(self.meet(a, c), b) {
                        r = c;
                        break;
                    }
                }
                debug_assert_eq!(r, self.heyting_implication(a, b));
                t[a * n + b] = r as u16;
            }
        }
        t
    }

    /// Complement of `a`, if one exists.
    pub fn complement(&self, a: Elem) -> Option<Elem> {
        (0..self.n).find(|&b| self.meet(a, b) == self.bottom && self.join(a, b) == self.top)
    }

    /// Restrict to a sublattice. Returns the lattice on `s` (indices follow the canonical
    /// order of `self`) and the map from new to old indices.
    pub fn sublattice(&self, s: &ElemSet) -> Result<(FiniteLattice, Vec<Elem>)> {
        let mut old: Vec<Elem> = s.iter().collect();
        old.sort_by_key(|&a| self.rank[a]);
        let k = old.len();
        let mut new_of = vec![usize::MAX; self.n];
        for (i, &a) in old.iter().enumerate() {
            new_of[a] = i;
        }
        let mut up = vec![ElemSet::EMPTY; k];
        let mut meet = vec![0u16; k * k];
        let mut join = vec![0u16; k * k];
        for i in 0..k {
            for j in 0..k {
                let (a, b) = (old[i], old[j]);
                if self.leq(a, b) {
                    up[i].insert(j);
                }
                let (m, jn) = (new_of[self.meet(a, b)], new_of[self.join(a, b)]);
                if m == usize::MAX || jn == usize::MAX {
                    return Err(Error::Domain("subset is not a sublattice".into()));
                }
                meet[i * k + j] = m as u16;
                join[i * k + j] = jn as u16;
            }
        }
        if !s.contains(self.bottom) || !s.contains(self.top) {
            return Err(Error::Domain("sublattice must contain the bounds".into()));
        }
        let down = transpose(&up);
        Ok((Self::assemble(up, down, meet, join), old))
    }

    pub fn leq_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n).map(|a| (0..self.n).map(|b| self.leq(a, b)).collect()).collect()
    }
}

fn transpose(rows: &[ElemSet]) -> Vec<ElemSet> {
    let n = rows.len();
    let mut t = vec![ElemSet::EMPTY; n];
    for (a, r) in rows.iter().enumerate() {
        for b in r.iter() {
            t[b].insert(a);
        }
    }
    t
}

/// The member of `cands` whose row (down-set for meets, up-set for joins) covers all of
/// `cands`, if any.
fn bound(rows: &[ElemSet], cands: &ElemSet) -> Option<Elem> {
    cands.iter().find(|&m| cands.is_subset(&rows[m]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> FiniteLattice {
        // 0 < a, b < 1 with a = 1, b = 2, top = 3
        let leq = vec![
            vec![true, true, true, true],
            vec![false, true, false, true],
            vec![false, false, true, true],
            vec![false, false, false, true],
        ];
        FiniteLattice::from_leq(&leq).unwrap()
    }

    fn naive_generate(l: &FiniteLattice, s: &ElemSet) -> ElemSet {
        let mut cur = *s;
        cur.insert(l.bottom());
        cur.insert(l.top());
        loop {
            let mut next = cur;
            for a in cur.iter() {
                for b in cur.iter() {
                    next.insert(l.meet(a, b));
                    next.insert(l.join(a, b));
                }
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    fn naive_irreducibles(l: &FiniteLattice) -> Vec<Elem> {
        l.elements()
            .iter()
            .copied()
            .filter(|&a| {
                a != l.bottom()
                    && (0..l.size()).all(|b| (0..l.size()).all(|c| l.join(b, c) != a || b == a || c == a))
            })
            .collect()
    }

    #[test]
    fn chain_generation() {
        let c3 = FiniteLattice::chain(3);
        assert_eq!(c3.sublattice_generate(&ElemSet::singleton(1)), ElemSet::full(3));
        assert_eq!(c3.sublattice_generate(&ElemSet::EMPTY).iter().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn diamond_generation_and_irreducibles() {
        let d = diamond();
        let s: ElemSet = [1, 2].into_iter().collect();
        assert_eq!(d.sublattice_generate(&s), ElemSet::full(4));
        assert_eq!(d.sublattice_generate(&s), naive_generate(&d, &s));
        assert_eq!(d.join_irreducibles(), vec![1, 2]);
    }

    #[test]
    fn irreducibles_of_chains() {
        assert_eq!(FiniteLattice::chain(3).join_irreducibles(), vec![1, 2]);
        assert_eq!(FiniteLattice::chain(2).join_irreducibles(), vec![1]);
        for k in 0..4 {
            let b = FiniteLattice::boolean(k);
            assert_eq!(b.join_irreducibles(), naive_irreducibles(&b));
            assert_eq!(b.join_irreducibles().len(), k);
        }
    }

    #[test]
    fn implication_examples() {
        let c3 = FiniteLattice::chain(3);
        assert_eq!(c3.heyting_implication(2, 1), 1);
        for a in 0..3 {
            assert_eq!(c3.heyting_implication(a, a), 2);
            assert_eq!(c3.heyting_implication(0, a), 2);
        }
    }

    #[test]
    fn rejects_non_distributive() {
        // M3: 0 < a, b, c < 1
        let mut leq = vec![vec![false; 5]; 5];
        for i in 0..5 {
            leq[i][i] = true;
            leq[0][i] = true;
            leq[i][4] = true;
        }
        assert!(matches!(FiniteLattice::from_leq(&leq), Err(Error::NotDistributive(..))));
    }

    #[test]
    fn rejects_non_lattice_and_non_order() {
        // two incomparable maximal elements
        let leq = vec![vec![true, true, true], vec![false, true, false], vec![false, false, true]];
        assert!(matches!(FiniteLattice::from_leq(&leq), Err(Error::NotLattice(..))));
        let leq = vec![vec![true, true], vec![true, true]];
        assert!(matches!(FiniteLattice::from_leq(&leq), Err(Error::NotPartialOrder(_))));
    }

    #[test]
    fn canonical_order_is_topological() {
        // indices deliberately out of order: 2 is bottom, 0 is top
        let leq = vec![vec![true, false, false], vec![true, true, false], vec![true, true, true]];
        let l = FiniteLattice::from_leq(&leq).unwrap();
        assert_eq!(l.elements(), &[2, 1, 0]);
        assert_eq!((l.bottom(), l.top()), (2, 0));
        assert_eq!(l.join_irreducibles(), vec![1, 0]);
    }

    #[test]
    fn sublattice_restriction() {
        let b3 = FiniteLattice::boolean(3);
        let s = b3.sublattice_generate(&[1, 3].into_iter().collect());
        let (sub, map) = b3.sublattice(&s).unwrap();
        assert_eq!(map, vec![0, 1, 3, 7]);
        assert_eq!(sub.size(), 4);
        assert!(b3.sublattice(&[0, 1, 2, 7].into_iter().collect()).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn upset_lattice(n: usize, rel: u64) -> FiniteLattice {
            // poset from a random relation: take the transitive closure of a DAG on index order
            let mut below = vec![0u64; n];
            for i in 0..n {
                for j in 0..i {
                    if rel >> (i * 8 + j) & 1 == 1 {
                        below[i] |= 1 << j | below[j];
                    }
                }
            }
            let ups: Vec<u64> = (0..1u64 << n)
                .filter(|&u| is_downset(&below, u))
                .collect();
            FiniteLattice::from_set_family(&ups).unwrap().0
        }

        fn is_downset(below: &[u64], u: u64) -> bool {
            (0..below.len()).all(|i| u >> i & 1 == 0 || below[i] & !u == 0)
        }

        proptest! {
            #[test]
            fn residuation(n in 1usize..5, rel in any::<u64>()) {
                let l = upset_lattice(n, rel);
                let imp = l.implication_table();
                let k = l.size();
                for a in 0..k { for b in 0..k { for c in 0..k {
                    prop_assert_eq!(l.leq(c, imp[a * k + b] as usize), l.leq(l.meet(a, c), b));
                }}}
            }

            #[test]
            fn generate_monotone_idempotent(n in 1usize..5, rel in any::<u64>(), s in any::<u64>(), t in any::<u64>()) {
                let l = upset_lattice(n, rel);
                let k = l.size();
                let s: ElemSet = (0..k).filter(|i| s >> i & 1 == 1).collect();
                let t: ElemSet = s.or(&(0..k).filter(|i| t >> i & 1 == 1).collect());
                let gs = l.sublattice_generate(&s);
                prop_assert_eq!(gs, naive_generate(&l, &s));
                prop_assert_eq!(l.sublattice_generate(&gs), gs);
                prop_assert!(gs.is_subset(&l.sublattice_generate(&t)));
            }

            #[test]
            fn irreducibles_count_points(n in 1usize..6, rel in any::<u64>()) {
                let l = upset_lattice(n, rel);
                prop_assert_eq!(l.join_irreducibles(), naive_irreducibles(&l));
                prop_assert_eq!(l.join_irreducibles().len(), n);
            }
        }
    }
}
