//! Pre-filtrations of fronton models and of Magari models.

use super::{check_embedding, DomainPair, EmbeddingSpec, Mode};
use crate::algebra::{fronton_expand, validate_clm, validate_sim, Algebra, AlgebraClm, AlgebraSim, AnyAlgebra, Class, Sig};
use crate::bits::ElemSet;
use crate::duality::{rho_algebra, sigma_algebra};
use crate::error::{Error, Result};
use crate::order::{Elem, FiniteLattice};
use crate::semantics::{eval, rule_holds, Valuation};
use crate::syntax::{subformula_closure, Formula, Rule};
use std::collections::BTreeSet;

/// Result of [`prefilter_sim`]: the fronton `K`, its inclusion into `H`, the valuation `V'`
/// on `K` and the domains on `K`.
#[derive(Clone, Debug)]
pub struct Prefiltration {
    pub fronton: AlgebraSim,
    pub incl: Vec<Elem>,
    pub valuation: Valuation,
    pub domains: DomainPair,
}

/// Options for [`prefilter_sim_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PrefilterOptions {
    /// Also put the value of every implication of the set into the box domain.
    pub classicizable: bool,
    /// Walk the box domain from the top of the canonical order down instead of upwards.
    pub reverse_order: bool,
}

/// Close `gens` under the interval complements of each box-domain element in turn. The
/// domain elements and their boxes are added to the generators.
pub(crate) fn relative_complement_closure(h: &AlgebraSim, gens: ElemSet, dbox: &[Elem], reverse: bool) -> ElemSet {
    let l = h.lattice();
    let mut dbox = dbox.to_vec();
    dbox.sort_by_key(|&a| (l.rank(a), a));
    dbox.dedup();
    if reverse {
        dbox.reverse();
    }
    let mut seed = gens;
    for &a in &dbox {
        seed.insert(a);
        seed.insert(h.bx(a));
    }
    let mut k = l.sublattice_generate(&seed);
    for &a in &dbox {
        let top = h.bx(a);
        let mut next = k;
        for b in k.iter() {
            if l.leq(a, b) && l.leq(b, top) {
                next.insert(l.meet(h.imp(b, a), top));
            }
        }
        k = l.sublattice_generate(&next);
    }
    k
}

fn index_map(n: usize, incl: &[Elem]) -> Vec<Elem> {
    let mut back = vec![usize::MAX; n];
    for (i, &a) in incl.iter().enumerate() {
        back[a] = i;
    }
    back
}

/// Pre-filtration of `(H, V)` through the subformula-closed set `theta`.
pub fn prefilter_sim(h: &AlgebraSim, v: &Valuation, theta: &BTreeSet<Formula>) -> Result<Prefiltration> {
    prefilter_sim_with(h, v, theta, PrefilterOptions::default())
}

pub fn prefilter_sim_with(h: &AlgebraSim, v: &Valuation, theta: &BTreeSet<Formula>, opts: PrefilterOptions) -> Result<Prefiltration> {
    if !validate_sim(h, Class::Fronton)?.is_member() {
        return Err(Error::Precondition("pre-filtration needs a fronton".into()));
    }
    for f in theta {
        if !f.fits(Sig::Sim) {
            return Err(Error::Signature("pre-filtration takes sim formulas".into()));
        }
        if f.children().iter().any(|c| !theta.contains(*c)) {
            return Err(Error::Precondition(format!("`{}` has a subformula outside the set", f.print(Sig::Sim))));
        }
    }
    let l = h.lattice();
    let val = |f: &Formula| eval(h, v, f);
    let mut gens = ElemSet::EMPTY;
    let mut dimp = Vec::new();
    let mut dbox = Vec::new();
    for f in theta {
        gens.insert(val(f)?);
        match f {
            Formula::Imp(a, b) => {
                dimp.push((val(a)?, val(b)?));
                if opts.classicizable {
                    dbox.push(val(f)?);
                }
            }
            Formula::BoxSim(a) => dbox.push(val(a)?),
            _ => {}
        }
    }
    let k = relative_complement_closure(h, gens, &dbox, opts.reverse_order);
    let (klat, incl) = l.sublattice(&k)?;
    let fronton = fronton_expand(&klat);
    let back = index_map(l.size(), &incl);
    let mut valuation = Valuation::new();
    for (name, &e) in v {
        let here = theta.contains(&Formula::var(name.clone()));
        valuation.insert(name.clone(), if here { back[e] } else { klat.bottom() });
    }
    let domains = DomainPair::new(dimp.iter().map(|&(a, b)| (back[a], back[b])).collect(), dbox.iter().map(|&a| back[a]).collect());
    let spec = EmbeddingSpec { mode: Mode::PreStable, domains: domains.clone() };
    if !check_embedding(&AnyAlgebra::Sim(fronton.clone()), &AnyAlgebra::Sim(h.clone()), &incl, &spec) {
        return Err(Error::Internal("inclusion of the pre-filtration fails the domain conditions".into()));
    }
    for f in theta {
        if incl[eval(&fronton, &valuation, f)?] != val(f)? {
            return Err(Error::Internal(format!("pre-filtration changes the value of `{}`", f.print(Sig::Sim))));
        }
    }
    Ok(Prefiltration { fronton, incl, valuation, domains })
}

/// Result of [`prefilter_magari`].
#[derive(Clone, Debug)]
pub struct MagariPrefiltration {
    /// The fronton `K` built inside the quasi-open fragment of `M`.
    pub fronton: AlgebraSim,
    /// Domains of `K` (implication pairs and their boxes); the sim rule on `K` with these
    /// domains is classicizable.
    pub domains: DomainPair,
    /// The skeleton `N` of `K`.
    pub algebra: AlgebraClm,
    /// Embedding `N -> M`.
    pub embedding: Vec<Elem>,
    pub valuation: Valuation,
    /// Image of the box domain of `K` in `N`.
    pub classicized_domain: Vec<Elem>,
    /// `{V'(phi) : []phi in Sfor(r)}` in `N`.
    pub box_domain: Vec<Elem>,
}

/// Boolean extension of a lattice embedding `q: K -> M` with `K` the lattice `lat`: the atom
/// of point `x` (irreducible `j`) goes to `q(j) /\ ~q(j*)` with `j*` the lower cover of `j`.
fn boolean_extension(m: &AlgebraClm, lat: &FiniteLattice, points: &[Elem], q: impl Fn(Elem) -> Elem) -> Vec<Elem> {
    let ml = m.lattice();
    let atoms: Vec<Elem> = points
        .iter()
        .map(|&j| {
            let lower = lat.lower_covers(j)[0];
            ml.meet(q(j), m.neg(q(lower)))
        })
        .collect();
    (0..1usize << points.len())
        .map(|u| (0..points.len()).filter(|&x| u >> x & 1 == 1).fold(ml.bottom(), |acc, x| ml.join(acc, atoms[x])))
        .collect()
}

/// Pre-filtration of a Magari model through `Sfor(r)`, landing on a Magari algebra. `w` is a
/// countermodel of `r` on the skeleton of `M` (elements are point sets of its dual).
pub fn prefilter_magari(m: &AlgebraClm, r: &Rule, w: &Valuation) -> Result<MagariPrefiltration> {
    if !validate_clm(m, Class::Magari)?.is_member() {
        return Err(Error::Precondition("Magari pre-filtration needs a Magari algebra".into()));
    }
    if r.sig != Sig::Clm {
        return Err(Error::Signature("Magari pre-filtration takes clm rules".into()));
    }
    let ml = m.lattice();
    let rho = rho_algebra(m)?;
    let ra = &rho.algebra;
    let rl = ra.lattice();
    let q = |e: Elem| rho.incl[e];
    let qback = index_map(ml.size(), &rho.incl);
    let skel = sigma_algebra(ra)?;
    if rule_holds(&skel.algebra, w, r)? {
        return Err(Error::Precondition("the valuation does not refute the rule on the skeleton".into()));
    }
    let e = boolean_extension(m, rl, &skel.dual.points, q);
    let mut v = Valuation::new();
    for name in r.vars() {
        let x = *w.get(&name).ok_or_else(|| Error::Unassigned(name.clone()))?;
        v.insert(name, e[x]);
    }
    let sfor = subformula_closure(r);
    let npts = skel.dual.points.len();
    // cells of V(phi): one pair (j_x, j_x*) of quasi-opens per point outside its point set
    let mut pairs_of = Vec::new();
    for f in &sfor {
        let b = eval(&skel.algebra, w, f)?;
        if e[b] != eval(m, &v, f)? {
            return Err(Error::Internal("skeleton embedding does not commute with evaluation".into()));
        }
        let pairs: Vec<(Elem, Elem)> = (0..npts)
            .filter(|&x| b >> x & 1 == 0)
            .map(|x| {
                let j = skel.dual.points[x];
                (j, rl.lower_covers(j)[0])
            })
            .collect();
        pairs_of.push((f, pairs));
    }
    let cell = |(i, j): (Elem, Elem)| ml.join(m.neg(q(i)), q(j));
    let to_rho = |x: Elem| -> Result<Elem> {
        match qback[x] {
            usize::MAX => Err(Error::Internal("expected a quasi-open element".into())),
            y => Ok(y),
        }
    };
    let mut gens = ElemSet::EMPTY;
    let mut dimp = Vec::new();
    let mut dbox = Vec::new();
    for (f, pairs) in &pairs_of {
        let boxed = sfor.contains(&Formula::boxclm((*f).clone()));
        let boxed_plus = sfor.contains(&Formula::c_boxplus((*f).clone()));
        for &p in pairs {
            gens.insert(p.0);
            gens.insert(p.1);
            if boxed_plus {
                gens.insert(to_rho(m.box_plus(cell(p)))?);
            }
            if boxed {
                gens.insert(to_rho(m.bx(cell(p)))?);
                dimp.push(p);
                dbox.push(to_rho(m.box_plus(cell(p)))?);
            }
        }
    }
    let k = relative_complement_closure(ra, gens, &dbox, false);
    let (klat, kincl) = rl.sublattice(&k)?;
    let fronton = fronton_expand(&klat);
    let kback = index_map(rl.size(), &kincl);
    let domains = DomainPair::new(dimp.iter().map(|&(a, b)| (kback[a], kback[b])).collect(), dbox.iter().map(|&a| kback[a]).collect());
    let spec = EmbeddingSpec { mode: Mode::PreStable, domains: domains.clone() };
    if !check_embedding(&AnyAlgebra::Sim(fronton.clone()), &AnyAlgebra::Sim(ra.clone()), &kincl, &spec) {
        return Err(Error::Internal("fronton inclusion fails the domain conditions".into()));
    }
    let ks = sigma_algebra(&fronton)?;
    let embedding = boolean_extension(m, &klat, &ks.dual.points, |x| q(kincl[x]));
    let kinv = index_map(ml.size(), &embedding);
    let mut valuation = Valuation::new();
    for (name, &x) in &v {
        match kinv[x] {
            usize::MAX => return Err(Error::Internal(format!("value of `{name}` is outside the pre-filtration"))),
            y => valuation.insert(name.clone(), y),
        };
    }
    let mut box_domain = Vec::new();
    for f in &sfor {
        if let Formula::BoxClm(g) = f {
            box_domain.push(kinv[eval(m, &v, g)?]);
        }
    }
    box_domain.sort_unstable();
    box_domain.dedup();
    let n = ks.algebra.clone();
    if !validate_clm(&n, Class::Magari)?.is_member() {
        return Err(Error::Internal("pre-filtration is not a Magari algebra".into()));
    }
    let espec = EmbeddingSpec { mode: Mode::PreStable, domains: DomainPair::boxes(box_domain.clone()) };
    if box_domain.contains(&usize::MAX) || !check_embedding(&AnyAlgebra::Clm(n.clone()), &AnyAlgebra::Clm(m.clone()), &embedding, &espec) {
        return Err(Error::Internal("embedding fails pre-stability or the box condition".into()));
    }
    for f in &sfor {
        if embedding[eval(&n, &valuation, f)?] != eval(m, &v, f)? {
            return Err(Error::Internal(format!("pre-filtration changes the value of `{}`", f.print(Sig::Clm))));
        }
    }
    let classicized_domain = {
        let mut d: Vec<Elem> = domains.bx.iter().map(|&a| ks.embed[a]).collect();
        d.sort_unstable();
        d.dedup();
        d
    };
    Ok(MagariPrefiltration { fronton, domains, algebra: n, embedding, valuation, classicized_domain, box_domain })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::{complex_algebra, Frame};
    use crate::syntax::parse_rule;

    fn chain3() -> AlgebraSim {
        fronton_expand(&FiniteLattice::chain(3))
    }

    fn val(pairs: &[(&str, Elem)]) -> Valuation {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn sim_examples() {
        let r = parse_rule("/ p", Sig::Sim).unwrap();
        let p = prefilter_sim(&chain3(), &val(&[("p", 1)]), &subformula_closure(&r)).unwrap();
        assert_eq!(p.fronton.size(), 3);
        assert!(p.domains.is_empty());
        let r = parse_rule("/ [m]p", Sig::Sim).unwrap();
        let p = prefilter_sim(&chain3(), &val(&[("p", 0)]), &subformula_closure(&r)).unwrap();
        assert_eq!(p.fronton.size(), 3);
        assert_eq!(p.domains.bx, vec![0]);
        assert_eq!(p.fronton.bx(0), 1);
        let p = prefilter_sim(&chain3(), &val(&[]), &BTreeSet::new()).unwrap();
        assert_eq!(p.fronton.size(), 2);
        let not_closed: BTreeSet<Formula> = [Formula::boxsim(Formula::var("p"))].into_iter().collect();
        assert!(prefilter_sim(&chain3(), &val(&[("p", 0)]), &not_closed).is_err());
    }

    #[test]
    fn magari_examples() {
        let m = complex_algebra(&Frame::clm(vec![0b10, 0]).unwrap()).unwrap().algebra;
        let m = m.as_clm().unwrap();
        let r = parse_rule("/ p", Sig::Clm).unwrap();
        let out = prefilter_magari(m, &r, &val(&[("p", 0)])).unwrap();
        assert!(validate_clm(&out.algebra, Class::Magari).unwrap().is_member());
        assert!(prefilter_magari(m, &r, &val(&[("p", 3)])).is_err());
        let gl = parse_rule("/ []([]p -> p) -> []p", Sig::Clm).unwrap();
        let w = val(&[("p", 0)]);
        assert!(matches!(prefilter_magari(m, &gl, &w), Err(Error::Precondition(_))));
        let r = parse_rule("[]p / p", Sig::Clm).unwrap();
        let skel = sigma_algebra(&rho_algebra(m).unwrap().algebra).unwrap().algebra;
        let w = (0..skel.size())
            .map(|x| val(&[("p", x)]))
            .find(|w| !rule_holds(&skel, w, &r).unwrap())
            .expect("the rule is refuted on the skeleton");
        let out = prefilter_magari(m, &r, &w).unwrap();
        assert!(!out.box_domain.is_empty());
    }
}
