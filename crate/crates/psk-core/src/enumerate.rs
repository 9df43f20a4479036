//! Isomorphism-free generation of posets, frames and their complex algebras.

use crate::algebra::AnyAlgebra;
use crate::bits::mask_iter;
use crate::duality::{complex_algebra, frame_class, full_mask, grz_structural, upsets, Frame};
use crate::error::{Error, Result};
use crate::iso::canonical_labeling;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Default hard cap on the number of points.
pub const DEFAULT_MAX_POINTS: usize = 6;

/// A poset as up-rows: bit `y` of `leq[x]` is set iff `x <= y`.
pub type Poset = Vec<u64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumKind {
    Poset,
    KmFrame,
    SimFrame,
    ClmFrame,
}

/// Classes usable as filters on clm frames. All are closed under taking subframes, so
/// they are applied at every augmentation step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassFilter {
    #[serde(rename = "K4")]
    K4,
    #[serde(rename = "K4Grz")]
    K4Grz,
    #[serde(rename = "GL")]
    Gl,
    #[serde(rename = "KM")]
    Km,
}

impl ClassFilter {
    pub fn parse(s: &str) -> Option<ClassFilter> {
        match s {
            "K4" | "k4" => Some(ClassFilter::K4),
            "K4Grz" | "k4grz" => Some(ClassFilter::K4Grz),
            "GL" | "gl" => Some(ClassFilter::Gl),
            "KM" | "km" => Some(ClassFilter::Km),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumSpec {
    pub kind: EnumKind,
    pub size: usize,
    pub class_filter: Option<ClassFilter>,
}

fn check_size(n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Input("enumeration size must be at least 1".into()));
    }
    if n > cap {
        return Err(Error::TooLarge { size: n, cap });
    }
    Ok(())
}

/// Posets on `n` points, one per isomorphism class, ordered by canonical key.
pub fn enum_posets(n: usize) -> Result<Vec<Poset>> {
    enum_posets_capped(n, DEFAULT_MAX_POINTS)
}

pub fn enum_posets_capped(n: usize, cap: usize) -> Result<Vec<Poset>> {
    check_size(n, cap)?;
    let mut level = vec![vec![1u64]];
    for _ in 1..n {
        level = extend_posets(&level, |_| true);
    }
    Ok(level)
}

/// Add a new maximal point above a downset of each parent, keep one per class.
fn extend_posets(parents: &[Poset], keep: impl Fn(&Poset) -> bool + Sync) -> Vec<Poset> {
    let found: Vec<(Vec<u64>, Poset)> = parents
        .par_iter()
        .flat_map_iter(|p| {
            let m = p.len();
            let new = 1u64 << m;
            let mut out = Vec::new();
            for d in 0..1u64 << m {
                // d must be a downset: nothing outside d lies below a member
                if (0..m).any(|x| d >> x & 1 == 0 && p[x] & d != 0) {
                    continue;
                }
                let mut q: Poset = p.iter().enumerate().map(|(x, &r)| if d >> x & 1 == 1 { r | new } else { r }).collect();
                q.push(new);
                if keep(&q) {
                    let key = canonical_labeling(m + 1, &[&q]);
                    out.push((key.0, relabel(&q, &key.1)));
                }
            }
            out
        })
        .collect();
    found.into_iter().collect::<BTreeMap<_, _>>().into_values().collect()
}

fn relabel(rows: &[u64], perm: &[usize]) -> Vec<u64> {
    let mut inv = vec![0; perm.len()];
    for (i, &o) in perm.iter().enumerate() {
        inv[o] = i;
    }
    perm.iter().map(|&o| mask_iter(rows[o]).fold(0, |m, y| m | 1 << inv[y])).collect()
}

/// Every poset (of any size) whose upset lattice has at most `max` elements. These index
/// the finite Heyting algebras of at most `max` elements, except the one-element algebra.
pub fn posets_with_few_upsets(max: usize) -> Vec<Poset> {
    let count = |p: &Poset| upsets(&Frame::km(p.clone()).expect("poset")).map_or(usize::MAX, |u| u.len());
    let mut out = Vec::new();
    let mut level: Vec<Poset> = if max >= 2 { vec![vec![1u64]] } else { vec![] };
    while !level.is_empty() {
        out.extend(level.iter().cloned());
        if level[0].len() >= 63 {
            break;
        }
        level = extend_posets(&level, |q| count(q) <= max);
    }
    out
}

/// Frames matching an `EnumSpec`, one per isomorphism class, ordered by canonical key.
pub fn enum_frames(spec: &EnumSpec) -> Result<Vec<Frame>> {
    enum_frames_capped(spec, DEFAULT_MAX_POINTS)
}

pub fn enum_frames_capped(spec: &EnumSpec, cap: usize) -> Result<Vec<Frame>> {
    check_size(spec.size, cap)?;
    let n = spec.size;
    match spec.kind {
        EnumKind::Poset | EnumKind::KmFrame => {
            if matches!(spec.class_filter, Some(f) if f != ClassFilter::Km) {
                return Err(Error::Input("km frames only accept the KM filter".into()));
            }
            enum_posets_capped(n, cap)?.into_iter().map(Frame::km).collect()
        }
        EnumKind::SimFrame => {
            let km_only = match spec.class_filter {
                None => false,
                Some(ClassFilter::Km) => true,
                Some(_) => return Err(Error::Input("sim frames only accept the KM filter".into())),
            };
            let posets = enum_posets_capped(n, cap)?;
            let found: Vec<(Vec<u64>, Frame)> = posets
                .par_iter()
                .flat_map_iter(|p| {
                    let diagonals = if km_only { 1u64 } else { 1u64 << n };
                    (0..diagonals).map(move |d| {
                        let rel: Vec<u64> = p.iter().enumerate().map(|(x, &r)| (r & !(1 << x)) | (d >> x & 1) << x).collect();
                        let key = canonical_labeling(n, &[p, &rel]);
                        let f = Frame::sim(relabel(p, &key.1), relabel(&rel, &key.1)).expect("valid sim frame");
                        (key.0, f)
                    })
                })
                .collect();
            Ok(found.into_iter().collect::<BTreeMap<_, _>>().into_values().collect())
        }
        EnumKind::ClmFrame => {
            let keep: fn(&Frame) -> bool = match spec.class_filter {
                None => |_| true,
                Some(ClassFilter::K4) => |f| f.is_transitive(),
                Some(ClassFilter::K4Grz) => grz_structural,
                Some(ClassFilter::Gl) => |f| frame_class(f).is_ok_and(|c| c.gl),
                Some(ClassFilter::Km) => return Err(Error::Input("KM is a sim frame class".into())),
            };
            let mut level: Vec<Frame> = [vec![0u64], vec![1u64]]
                .into_iter()
                .map(|r| Frame::clm(r).expect("valid"))
                .filter(&keep)
                .collect();
            for m in 1..n {
                level = extend_clm(&level, m, keep);
            }
            Ok(level)
        }
    }
}

fn extend_clm(parents: &[Frame], m: usize, keep: fn(&Frame) -> bool) -> Vec<Frame> {
    let found: Vec<(Vec<u64>, Frame)> = parents
        .par_iter()
        .flat_map_iter(|p| {
            let mut out = Vec::new();
            // out-row of the new point (m+1 bits) and in-column from old points (m bits)
            for row in 0..1u64 << (m + 1) {
                for col in 0..1u64 << m {
                    let mut rel: Vec<u64> = (0..m).map(|x| p.rel_row(x) | (col >> x & 1) << m).collect();
                    rel.push(row);
                    let f = Frame::clm(rel).expect("valid");
                    if keep(&f) {
                        let (key, perm) = canonical_labeling(m + 1, &[f.rel_rows()]);
                        out.push((key, Frame::clm(relabel(f.rel_rows(), &perm)).expect("valid")));
                    }
                }
            }
            out
        })
        .collect();
    found.into_iter().collect::<BTreeMap<_, _>>().into_values().collect()
}

/// Complex algebras of the frames matching an `EnumSpec`.
pub fn enum_algebras(spec: &EnumSpec) -> Result<Vec<AnyAlgebra>> {
    enum_frames(spec)?.iter().map(|f| complex_algebra(f).map(|c| c.algebra)).collect()
}

/// All frames of a kind with `1..=max` points.
pub fn frames_up_to(kind: EnumKind, max: usize, class_filter: Option<ClassFilter>) -> Result<Vec<Frame>> {
    let mut out = Vec::new();
    for size in 1..=max {
        out.extend(enum_frames_capped(&EnumSpec { kind, size, class_filter }, max.max(DEFAULT_MAX_POINTS))?);
    }
    Ok(out)
}

/// Naive generate-and-filter oracle: every relation matrix, deduplicated by the minimum
/// encoding over all permutations.
pub fn naive_count(kind: EnumKind, n: usize, class_filter: Option<ClassFilter>) -> usize {
    use crate::iso::naive_key;
    use std::collections::BTreeSet;
    let mut keys = BTreeSet::new();
    let full = full_mask(n);
    let cells = n * n;
    for bits in 0u64..1 << cells {
        let rel: Vec<u64> = (0..n).map(|x| bits >> (x * n) & full).collect();
        match kind {
            EnumKind::Poset | EnumKind::KmFrame | EnumKind::SimFrame => {
                let Ok(_) = Frame::km(rel.clone()) else { continue };
                if kind == EnumKind::SimFrame {
                    for d in 0..1u64 << n {
                        let m: Vec<u64> = rel.iter().enumerate().map(|(x, &r)| (r & !(1 << x)) | (d >> x & 1) << x).collect();
                        keys.insert(naive_key(n, &[&rel, &m]));
                    }
                } else {
                    keys.insert(naive_key(n, &[&rel]));
                }
            }
            EnumKind::ClmFrame => {
                let f = Frame::clm(rel.clone()).expect("valid");
                let ok = match class_filter {
                    None => true,
                    Some(ClassFilter::K4) => f.is_transitive(),
                    Some(ClassFilter::K4Grz) => frame_class(&f).is_ok_and(|c| c.k4grz),
                    Some(ClassFilter::Gl) => frame_class(&f).is_ok_and(|c| c.gl),
                    Some(ClassFilter::Km) => false,
                };
                if ok {
                    keys.insert(naive_key(n, &[&rel]));
                }
            }
        }
    }
    keys.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::iso::frames_isomorphic;

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| enum_posets(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16, 63, 318]);
        assert!(enum_posets(7).is_err());
        assert!(enum_posets(0).is_err());
    }

    #[test]
    fn counts_match_naive_oracle() {
        for n in 1..=4 {
            assert_eq!(enum_posets(n).unwrap().len(), naive_count(EnumKind::Poset, n, None));
            let sim = EnumSpec { kind: EnumKind::SimFrame, size: n, class_filter: None };
            assert_eq!(enum_frames(&sim).unwrap().len(), naive_count(EnumKind::SimFrame, n, None), "sim {n}");
        }
        for n in 1..=3 {
            for f in [None, Some(ClassFilter::K4), Some(ClassFilter::K4Grz), Some(ClassFilter::Gl)] {
                let spec = EnumSpec { kind: EnumKind::ClmFrame, size: n, class_filter: f };
                assert_eq!(enum_frames(&spec).unwrap().len(), naive_count(EnumKind::ClmFrame, n, f), "clm {n} {f:?}");
            }
        }
    }

    #[test]
    fn spec_examples() {
        let km2 = EnumSpec { kind: EnumKind::KmFrame, size: 2, class_filter: None };
        assert_eq!(enum_frames(&km2).unwrap().len(), 2);
        let gl1 = EnumSpec { kind: EnumKind::ClmFrame, size: 1, class_filter: Some(ClassFilter::Gl) };
        let g = enum_frames(&gl1).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].rel_rows(), &[0]);
        let sizes: Vec<usize> = (1..=2)
            .flat_map(|n| enum_algebras(&EnumSpec { kind: EnumKind::KmFrame, size: n, class_filter: None }).unwrap())
            .map(|a| a.size())
            .collect();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sorted, vec![2, 3, 4]);
    }

    #[test]
    fn no_duplicates_up_to_four() {
        for kind in [EnumKind::SimFrame, EnumKind::ClmFrame] {
            let fs = enum_frames(&EnumSpec { kind, size: 3, class_filter: None }).unwrap();
            for i in 0..fs.len() {
                for j in i + 1..fs.len() {
                    assert!(!frames_isomorphic(&fs[i], &fs[j]));
                }
            }
        }
    }

    #[test]
    fn heyting_algebras_up_to_16() {
        let ps = posets_with_few_upsets(16);
        assert!(ps.iter().any(|p| p.len() == 15));
        // distributive lattices with 2..=16 elements
        let mut by_size = [0usize; 17];
        for p in &ps {
            by_size[upsets(&Frame::km(p.clone()).unwrap()).unwrap().len()] += 1;
        }
        assert_eq!(&by_size[2..=10], &[1, 1, 2, 3, 5, 8, 15, 26, 47]);
    }
}
