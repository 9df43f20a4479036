//! Pre-stable canonical rules: construction, refutation, pre-filtration, rewriting and
//! classicization.

mod prefilter;
mod rewrite;
mod search;

pub use prefilter::{prefilter_magari, prefilter_sim, prefilter_sim_with, MagariPrefiltration, PrefilterOptions, Prefiltration};
pub use rewrite::{rewrite, rewrite_with, RewriteOptions, RewriteResult};
pub use search::{
    algebra_map_from_frame_map, check_embedding, check_frame_map, embedding_search, frame_conditions, frame_search,
    EmbeddingSpec, FrameCond, FrameRel, Mode,
};

use crate::algebra::{validate, Algebra, AnyAlgebra, Class, Sig};
use crate::duality::{dual_unchecked, sigma_algebra};
use crate::error::{Error, Result};
use crate::order::Elem;
use crate::semantics::{rule_holds, rule_valid_with_limit, Valuation, Validity};
use crate::syntax::{Formula, Rule};
use serde::Serialize;

/// Domains of a canonical rule. For sim rules `imp` is the implication domain and `bx`
/// the frontal-box domain; clm rules only use `bx`. Both are kept sorted and duplicate free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DomainPair {
    pub imp: Vec<(Elem, Elem)>,
    pub bx: Vec<Elem>,
}

impl DomainPair {
    pub fn new(mut imp: Vec<(Elem, Elem)>, mut bx: Vec<Elem>) -> DomainPair {
        imp.sort_unstable();
        imp.dedup();
        bx.sort_unstable();
        bx.dedup();
        DomainPair { imp, bx }
    }

    pub fn boxes(bx: Vec<Elem>) -> DomainPair {
        DomainPair::new(vec![], bx)
    }

    pub fn is_empty(&self) -> bool {
        self.imp.is_empty() && self.bx.is_empty()
    }

    /// Image under an element map.
    pub fn map(&self, h: &[Elem]) -> DomainPair {
        DomainPair::new(self.imp.iter().map(|&(a, b)| (h[a], h[b])).collect(), self.bx.iter().map(|&a| h[a]).collect())
    }
}

/// A finite algebra with domains and the rule it stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalRule {
    pub algebra: AnyAlgebra,
    pub domains: DomainPair,
    pub rule: Rule,
}

/// The variable standing for element `a`.
pub fn elem_var(a: Elem) -> Formula {
    Formula::reserved(a)
}

fn elem_name(a: Elem) -> String {
    match elem_var(a) {
        Formula::Var(s) => s,
        _ => unreachable!(),
    }
}

/// Build `scr(A, D)`. Sim algebras must be frontons, clm algebras K4.
pub fn build_scr(a: &AnyAlgebra, d: DomainPair) -> Result<CanonicalRule> {
    let class = match a.sig() {
        Sig::Sim => Class::Fronton,
        Sig::Clm => Class::K4,
    };
    let rep = validate(a, class)?;
    if !rep.is_member() {
        return Err(Error::Precondition(format!("canonical rules need a {class:?} algebra")));
    }
    let n = a.size();
    let in_range = d.bx.iter().all(|&x| x < n) && d.imp.iter().all(|&(x, y)| x < n && y < n);
    if !in_range {
        return Err(Error::Domain(format!("domain element out of range for an algebra of {n} elements")));
    }
    if a.sig() == Sig::Clm && !d.imp.is_empty() {
        return Err(Error::Domain("clm rules have no implication domain".into()));
    }
    let rule = render(a, &d)?;
    Ok(CanonicalRule { algebra: a.clone(), domains: d, rule })
}

fn render(a: &AnyAlgebra, d: &DomainPair) -> Result<Rule> {
    let sig = a.sig();
    let l = a.lattice();
    let p = elem_var;
    let iff = |x: Formula, y: Formula| Formula::iff(sig, x, y);
    let mut gamma = vec![iff(p(l.bottom()), Formula::Bot), iff(p(l.top()), Formula::Top)];
    let elems = l.elements().to_vec();
    for &x in &elems {
        for &y in &elems {
            gamma.push(iff(p(l.meet(x, y)), Formula::and(p(x), p(y))));
        }
    }
    match a {
        AnyAlgebra::Sim(h) => {
            for &x in &elems {
                for &y in &elems {
                    gamma.push(iff(p(l.join(x, y)), Formula::or(p(x), p(y))));
                }
            }
            for &(x, y) in &d.imp {
                gamma.push(iff(p(h.imp(x, y)), Formula::imp(p(x), p(y))));
            }
            for &x in &d.bx {
                gamma.push(iff(p(h.bx(x)), Formula::boxsim(p(x))));
            }
            let mut delta = Vec::new();
            for (i, &x) in elems.iter().enumerate() {
                for &y in &elems[i + 1..] {
                    delta.push(iff(p(x), p(y)));
                }
            }
            Rule::new(sig, gamma, delta)
        }
        AnyAlgebra::Clm(m) => {
            for &x in &elems {
                gamma.push(iff(p(m.neg(x)), Formula::neg(p(x))));
            }
            for &x in &elems {
                gamma.push(Formula::c_imp(p(m.box_plus(x)), Formula::c_boxplus(p(x))));
            }
            for &x in &d.bx {
                gamma.push(iff(p(m.bx(x)), Formula::boxclm(p(x))));
            }
            let delta = elems.iter().filter(|&&x| x != l.top()).map(|&x| p(x)).collect();
            Rule::new(sig, gamma, delta)
        }
    }
}

/// Outcome of [`refutes_scr`], with witnesses from each oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub refuted: bool,
    /// Countermodel of the rendered rule found by exhaustive evaluation.
    pub valuation: Option<Valuation>,
    /// Embedding of the rule's algebra found by the algebra-level search.
    pub embedding: Option<Vec<Elem>>,
    /// Surjection between dual frames found by the frame-level search.
    pub frame_map: Option<Vec<usize>>,
}

/// Decide `A |/= scr(B, D)` three ways (semantic evaluation, algebra-level embedding search,
/// frame-level surjection search), insisting that they agree and that every witness passes
/// a literal recheck.
pub fn refutes_scr(a: &AnyAlgebra, r: &CanonicalRule) -> Result<Verdict> {
    if a.sig() != r.algebra.sig() {
        return Err(Error::Signature("algebra and rule signatures differ".into()));
    }
    let spec = EmbeddingSpec { mode: Mode::PreStable, domains: r.domains.clone() };
    // the premises pin every variable to a homomorphic image, so the exhaustive search is
    // cut long before the raw assignment count matters
    let semantic = match rule_valid_with_limit(a, &r.rule, f64::INFINITY)? {
        Validity::Valid => None,
        Validity::Countermodel(v) => Some(v),
    };
    let structural = embedding_search(&r.algebra, a, &spec);
    let frame_map = refutes_by_frames(a, r)?;
    let refuted = semantic.is_some();
    if structural.is_some() != refuted || frame_map.is_some() != refuted {
        return Err(Error::Internal(format!(
            "refutation oracles disagree: semantic {refuted}, algebraic {}, frame {}",
            structural.is_some(),
            frame_map.is_some()
        )));
    }
    if let Some(v) = &semantic {
        let h: Vec<Elem> = (0..r.algebra.size()).map(|x| v.get(&elem_name(x)).copied().unwrap_or(a.lattice().bottom())).collect();
        if !check_embedding(&r.algebra, a, &h, &spec) {
            return Err(Error::Internal("countermodel does not induce an embedding".into()));
        }
    }
    if let Some(h) = &structural {
        if !check_embedding(&r.algebra, a, h, &spec) || rule_holds(a, &valuation_of(h), &r.rule)? {
            return Err(Error::Internal("embedding witness fails its recheck".into()));
        }
    }
    Ok(Verdict { refuted, valuation: semantic, embedding: structural, frame_map })
}

/// The valuation `p@a := h(a)`.
pub fn valuation_of(h: &[Elem]) -> Valuation {
    h.iter().enumerate().map(|(a, &x)| (elem_name(a), x)).collect()
}

fn refutes_by_frames(a: &AnyAlgebra, r: &CanonicalRule) -> Result<Option<Vec<usize>>> {
    let dx = dual_unchecked(a.as_dyn());
    let dy = dual_unchecked(r.algebra.as_dyn());
    let conds = frame_conditions(&dy, &r.domains);
    let found = frame_search(&dx.frame, &dy.frame, &conds);
    if let Some(f) = &found {
        if !check_frame_map(&dx.frame, &dy.frame, f, &conds) {
            return Err(Error::Internal("frame map fails its recheck".into()));
        }
        let h = algebra_map_from_frame_map(&dx, &dy, f)
            .ok_or_else(|| Error::Internal("frame map does not induce an algebra map".into()))?;
        let spec = EmbeddingSpec { mode: Mode::PreStable, domains: r.domains.clone() };
        if !check_embedding(&r.algebra, a, &h, &spec) {
            return Err(Error::Internal("dual of the frame map is not a valid embedding".into()));
        }
    }
    Ok(found)
}

/// `(a, b)` in the implication domain forces `a -> b` into the box domain.
pub fn is_classicizable(r: &CanonicalRule) -> Result<bool> {
    let h = r.algebra.as_sim()?;
    Ok(r.domains.imp.iter().all(|&(a, b)| r.domains.bx.binary_search(&h.imp(a, b)).is_ok()))
}

/// The clm rule over the skeleton of the rule's fronton, with the box domain carried over
/// along the embedding into the skeleton.
pub fn classicize(r: &CanonicalRule) -> Result<CanonicalRule> {
    if !is_classicizable(r)? {
        return Err(Error::Precondition("rule is not classicizable".into()));
    }
    let s = sigma_algebra(r.algebra.as_sim()?)?;
    let d = DomainPair::boxes(r.domains.bx.iter().map(|&a| s.embed[a]).collect());
    build_scr(&AnyAlgebra::Clm(s.algebra), d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{fronton_expand, AlgebraClm};
    use crate::duality::{complex_algebra, Frame};
    use crate::order::FiniteLattice;

    fn chain(n: usize) -> AnyAlgebra {
        AnyAlgebra::Sim(fronton_expand(&FiniteLattice::chain(n)))
    }

    #[test]
    fn build_examples() {
        let r = build_scr(&chain(2), DomainPair::default()).unwrap();
        assert_eq!(r.rule.gamma.len(), 2 + 2 * 4);
        assert_eq!(r.rule.delta, vec![Formula::iff(Sig::Sim, elem_var(0), elem_var(1))]);
        let d = DomainPair::new(vec![(1, 0), (2, 1)], vec![0]);
        let r3 = build_scr(&chain(3), d).unwrap();
        assert_eq!(r3.rule.gamma.len(), 2 + 2 * 9 + 2 + 1);
        assert_eq!(r3.rule.delta.len(), 3);
        let m = AnyAlgebra::Clm(AlgebraClm::new(FiniteLattice::boolean(1), vec![1, 1]).unwrap());
        let rc = build_scr(&m, DomainPair::boxes(vec![0])).unwrap();
        assert!(rc.rule.gamma.contains(&Formula::iff(Sig::Clm, elem_var(1), Formula::boxclm(elem_var(0)))));
        assert_eq!(rc.rule.delta, vec![elem_var(0)]);
        assert!(build_scr(&chain(2), DomainPair::boxes(vec![5])).is_err());
    }

    #[test]
    fn refutation_examples() {
        let r2 = build_scr(&chain(2), DomainPair::default()).unwrap();
        for n in 2..5 {
            assert!(refutes_scr(&chain(n), &r2).unwrap().refuted);
        }
        let r3 = build_scr(&chain(3), DomainPair::default()).unwrap();
        assert!(!refutes_scr(&chain(2), &r3).unwrap().refuted);
        // identity embedding satisfies every domain condition
        let h = chain(3);
        let n = h.size();
        let full = DomainPair::new((0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect(), (0..n).collect());
        let v = refutes_scr(&h, &build_scr(&h, full).unwrap()).unwrap();
        assert!(v.refuted);
        assert_eq!(v.embedding, Some(vec![0, 1, 2]));
    }

    #[test]
    fn classicize_examples() {
        let r = build_scr(&chain(2), DomainPair::default()).unwrap();
        let c = classicize(&r).unwrap();
        assert_eq!(c.algebra.size(), 2);
        assert!(c.domains.is_empty());
        let r = build_scr(&chain(3), DomainPair::boxes(vec![0])).unwrap();
        assert!(is_classicizable(&r).unwrap());
        let c = classicize(&r).unwrap();
        assert_eq!(c.algebra.size(), 4);
        assert!(validate(&c.algebra, Class::Magari).unwrap().is_member());
        // element 0 of the fronton is the empty set of points
        assert_eq!(c.domains.bx, vec![0]);
        let bad = build_scr(&chain(3), DomainPair::new(vec![(1, 0)], vec![])).unwrap();
        assert!(!is_classicizable(&bad).unwrap());
        assert!(classicize(&bad).is_err());
        // dual check: domain images are downsets of the dual frame
        let s = sigma_algebra(chain(3).as_sim().unwrap()).unwrap();
        for &d in &c.domains.bx {
            let u = !(d as u64) & 0b11;
            assert!(s.dual.frame.is_upset(u));
        }
    }

    #[test]
    fn simple_fact_on_small_clm() {
        // every embedding passing the box condition passes the [+] condition
        let gl2 = complex_algebra(&Frame::clm(vec![0b10, 0]).unwrap()).unwrap().algebra;
        let r = build_scr(&gl2, DomainPair::boxes(vec![1, 2])).unwrap();
        let v = refutes_scr(&gl2, &r).unwrap();
        let h = v.embedding.unwrap();
        let m = gl2.as_clm().unwrap();
        for &a in &[1usize, 2] {
            assert_eq!(h[m.box_plus(a)], m.box_plus(h[a]));
        }
    }
}
