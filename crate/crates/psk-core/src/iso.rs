//! Isomorphism and canonical labeling for frames and algebras.
//!
//! Frames are canonically labeled by colour refinement followed by individualization
//! backtracking, keeping the lexicographically least relabeled encoding. Algebra
//! isomorphisms are found by matching join-irreducibles (atoms in the Boolean case).

use crate::algebra::{Algebra, AnyAlgebra};
use crate::bits::mask_iter;
use crate::duality::Frame;
use crate::order::{Elem, FiniteLattice};

/// Canonical encoding of a frame: for each new point, its order row then its modal row,
/// both relabeled.
pub type FrameKey = Vec<u64>;

/// Canonical form, the encoding, and the labeling `perm` with `perm[new] = old`.
pub fn canonical_frame(f: &Frame) -> (Frame, FrameKey, Vec<usize>) {
    let n = f.size();
    let rels: Vec<&[u64]> = match f.kind() {
        crate::algebra::Sig::Sim => vec![f.leq_rows(), f.rel_rows()],
        crate::algebra::Sig::Clm => vec![f.rel_rows()],
    };
    let (key, perm) = canonical_labeling(n, &rels);
    let mut inv = vec![0; n];
    for (i, &o) in perm.iter().enumerate() {
        inv[o] = i;
    }
    let relabel = |rows: &[u64]| -> Vec<u64> { perm.iter().map(|&o| relabel_row(rows[o], &inv)).collect() };
    let g = match f.kind() {
        crate::algebra::Sig::Sim => Frame::sim(relabel(f.leq_rows()), relabel(f.rel_rows())),
        crate::algebra::Sig::Clm => Frame::clm(relabel(f.rel_rows())),
    }
    .expect("relabeling preserves validity");
    (g, key, perm)
}

pub fn frame_key(f: &Frame) -> FrameKey {
    canonical_frame(f).1
}

pub fn frames_isomorphic(a: &Frame, b: &Frame) -> bool {
    a.kind() == b.kind() && a.size() == b.size() && frame_key(a) == frame_key(b)
}

/// An isomorphism `a -> b` as a point map, if one exists.
pub fn frame_isomorphism(a: &Frame, b: &Frame) -> Option<Vec<usize>> {
    if a.kind() != b.kind() || a.size() != b.size() {
        return None;
    }
    let (_, ka, pa) = canonical_frame(a);
    let (_, kb, pb) = canonical_frame(b);
    if ka != kb {
        return None;
    }
    let mut map = vec![0; a.size()];
    for i in 0..a.size() {
        map[pa[i]] = pb[i];
    }
    Some(map)
}

fn relabel_row(row: u64, inv: &[usize]) -> u64 {
    mask_iter(row).fold(0, |m, y| m | 1 << inv[y])
}

/// Canonical labeling of a structure given by binary relations on `n` points.
pub fn canonical_labeling(n: usize, rels: &[&[u64]]) -> (Vec<u64>, Vec<usize>) {
    let colors = refine(n, rels, vec![0; n]);
    let mut best: Option<(Vec<u64>, Vec<usize>)> = None;
    search(n, rels, colors, &mut best);
    best.expect("at least one leaf")
}

fn search(n: usize, rels: &[&[u64]], colors: Vec<u32>, best: &mut Option<(Vec<u64>, Vec<usize>)>) {
    // first non-singleton cell, by colour
    let mut count = vec![0usize; n];
    for &c in &colors {
        count[c as usize] += 1;
    }
    match (0..n).find(|&c| count[c] > 1) {
        None => {
            let mut perm = vec![0; n];
            for (x, &c) in colors.iter().enumerate() {
                perm[c as usize] = x;
            }
            let mut inv = vec![0; n];
            for (i, &o) in perm.iter().enumerate() {
                inv[o] = i;
            }
            let key: Vec<u64> = perm
                .iter()
                .flat_map(|&o| rels.iter().map(move |r| r[o]))
                .map(|row| relabel_row(row, &inv))
                .collect();
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                *best = Some((key, perm));
            }
        }
        Some(cell) => {
            for v in 0..n {
                if colors[v] as usize == cell {
                    let c: Vec<u32> = colors
                        .iter()
                        .enumerate()
                        .map(|(x, &c)| 2 * c + u32::from(c as usize == cell && x != v))
                        .collect();
                    search(n, rels, refine(n, rels, c), best);
                }
            }
        }
    }
}

/// Equitable refinement. Colours come out as cell start positions (colour `c` means the
/// points of that cell occupy positions `c..c+size`).
fn refine(n: usize, rels: &[&[u64]], mut colors: Vec<u32>) -> Vec<u32> {
    loop {
        let sigs: Vec<(u32, Vec<Vec<u32>>)> = (0..n)
            .map(|x| {
                let mut parts = Vec::with_capacity(2 * rels.len() + 1);
                for r in rels {
                    let mut out: Vec<u32> = mask_iter(r[x]).map(|y| colors[y]).collect();
                    out.sort_unstable();
                    let mut inn: Vec<u32> = (0..n).filter(|&y| r[y] >> x & 1 == 1).map(|y| colors[y]).collect();
                    inn.sort_unstable();
                    parts.push(vec![u32::from(r[x] >> x & 1 == 1)]);
                    parts.push(out);
                    parts.push(inn);
                }
                (colors[x], parts)
            })
            .collect();
        let mut sorted: Vec<&(u32, Vec<Vec<u32>>)> = sigs.iter().collect();
        sorted.sort();
        let next: Vec<u32> = sigs
            .iter()
            .map(|s| sorted.iter().position(|t| *t == s).unwrap() as u32)
            .collect();
        let cells = |c: &[u32]| {
            let mut v = c.to_vec();
            v.sort_unstable();
            v.dedup();
            v.len()
        };
        let done = cells(&next) == cells(&colors);
        colors = next;
        if done {
            return colors;
        }
    }
}

/// Naive canonical key: minimum encoding over all permutations. Test oracle only.
pub fn naive_key(n: usize, rels: &[&[u64]]) -> Vec<u64> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u64>> = None;
    permute(&mut perm, 0, &mut |p| {
        let mut inv = vec![0; n];
        for (i, &o) in p.iter().enumerate() {
            inv[o] = i;
        }
        let key: Vec<u64> = p.iter().flat_map(|&o| rels.iter().map(move |r| r[o])).map(|row| relabel_row(row, &inv)).collect();
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    });
    best.unwrap()
}

pub fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Calls `visit` with every lattice isomorphism `a -> b` (as an element map) until it
/// returns `false`.
pub fn lattice_isomorphisms(a: &FiniteLattice, b: &FiniteLattice, mut visit: impl FnMut(&[Elem]) -> bool) {
    if a.size() != b.size() {
        return;
    }
    let ja = a.join_irreducibles();
    let jb = b.join_irreducibles();
    if ja.len() != jb.len() {
        return;
    }
    let mut img = vec![usize::MAX; ja.len()];
    let mut used = vec![false; jb.len()];
    assign(a, b, &ja, &jb, 0, &mut img, &mut used, &mut visit);
}

#[allow(clippy::too_many_arguments)]
fn assign(
    a: &FiniteLattice,
    b: &FiniteLattice,
    ja: &[Elem],
    jb: &[Elem],
    k: usize,
    img: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut impl FnMut(&[Elem]) -> bool,
) -> bool {
    if k == ja.len() {
        let mut map = vec![b.bottom(); a.size()];
        for e in 0..a.size() {
            for (i, &j) in ja.iter().enumerate() {
                if a.leq(j, e) {
                    map[e] = b.join(map[e], jb[img[i]]);
                }
            }
        }
        return visit(&map);
    }
    for t in 0..jb.len() {
        if used[t] {
            continue;
        }
        let ok = (0..k).all(|i| a.leq(ja[i], ja[k]) == b.leq(jb[img[i]], jb[t]) && a.leq(ja[k], ja[i]) == b.leq(jb[t], jb[img[i]]));
        if ok {
            used[t] = true;
            img[k] = t;
            if !assign(a, b, ja, jb, k + 1, img, used, visit) {
                return false;
            }
            used[t] = false;
        }
    }
    true
}

fn preserves_box(a: &dyn Algebra, b: &dyn Algebra, map: &[Elem]) -> bool {
    (0..a.size()).all(|e| map[a.bx(e)] == b.bx(map[e]))
}

/// An algebra isomorphism `a -> b`, if any.
pub fn algebra_isomorphism(a: &AnyAlgebra, b: &AnyAlgebra) -> Option<Vec<Elem>> {
    if a.sig() != b.sig() {
        return None;
    }
    let mut found = None;
    lattice_isomorphisms(a.lattice(), b.lattice(), |m| {
        if preserves_box(a.as_dyn(), b.as_dyn(), m) {
            found = Some(m.to_vec());
            false
        } else {
            true
        }
    });
    found
}

pub fn algebras_isomorphic(a: &AnyAlgebra, b: &AnyAlgebra) -> bool {
    algebra_isomorphism(a, b).is_some()
}

/// All automorphisms, the identity first.
pub fn automorphisms(a: &AnyAlgebra) -> Vec<Vec<Elem>> {
    let mut out = vec![(0..a.size()).collect::<Vec<_>>()];
    lattice_isomorphisms(a.lattice(), a.lattice(), |m| {
        if preserves_box(a.as_dyn(), a.as_dyn(), m) && m.iter().enumerate().any(|(i, &x)| i != x) {
            out.push(m.to_vec());
        }
        true
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{fronton_expand, AlgebraClm};
    use crate::duality::full_mask;
    use proptest::prelude::*;

    #[test]
    fn chain_relabelings_agree() {
        let a = Frame::clm(vec![0b110, 0b100, 0]).unwrap();
        let b = Frame::clm(vec![0, 0b001, 0b011]).unwrap();
        assert!(frames_isomorphic(&a, &b));
        let m = frame_isomorphism(&a, &b).unwrap();
        assert_eq!(m, vec![2, 1, 0]);
        let c = Frame::clm(vec![0b110, 0, 0]).unwrap();
        assert!(!frames_isomorphic(&a, &c));
    }

    #[test]
    fn lattice_isos_of_boolean() {
        let b = FiniteLattice::boolean(3);
        let mut count = 0;
        lattice_isomorphisms(&b, &b, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 6);
        let f = AnyAlgebra::Sim(fronton_expand(&FiniteLattice::chain(3)));
        assert_eq!(automorphisms(&f).len(), 1);
        // box = const top on the 4-element Boolean algebra has the swap automorphism
        let m = AnyAlgebra::Clm(AlgebraClm::new(FiniteLattice::boolean(2), vec![3; 4]).unwrap());
        assert_eq!(automorphisms(&m).len(), 2);
    }

    fn arb_rel(n: usize) -> impl Strategy<Value = Vec<u64>> {
        proptest::collection::vec(0..=full_mask(n), n)
    }

    proptest! {
        #[test]
        fn refined_key_matches_naive(n in 1usize..6, seed in any::<u64>(), rel in arb_rel(5), other in arb_rel(5)) {
            let rel: Vec<u64> = rel.into_iter().take(n).map(|r| r & full_mask(n)).collect();
            let other: Vec<u64> = other.into_iter().take(n).map(|r| r & full_mask(n)).collect();
            let (k1, _) = canonical_labeling(n, &[&rel]);
            let same = k1 == canonical_labeling(n, &[&other]).0;
            prop_assert_eq!(same, naive_key(n, &[&rel]) == naive_key(n, &[&other]));
            // relabel randomly and compare
            let mut p: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                p.swap(i, (s >> 33) as usize % (i + 1));
            }
            let moved: Vec<u64> = (0..n).map(|x| {
                let o = p.iter().position(|&q| q == x).unwrap();
                mask_iter(rel[o]).fold(0, |m, y| m | 1 << p[y])
            }).collect();
            prop_assert_eq!(k1, canonical_labeling(n, &[&moved]).0);
        }
    }
}
