//! Budgeted rewriting of a rule into canonical rules.

use super::prefilter::relative_complement_closure;
use super::{build_scr, prefilter_magari, CanonicalRule, DomainPair};
use crate::bits::ElemSet;
use crate::algebra::{Algebra, AnyAlgebra, Sig};
use crate::duality::{complex_algebra, dual_frame, fronton_of_poset, rho_algebra, sigma_algebra};
use crate::enumerate::{frames_up_to, posets_with_few_upsets, ClassFilter, EnumKind};
use crate::error::{Error, Result};
use crate::iso::{algebra_isomorphism, automorphisms, frame_key, FrameKey};
use crate::order::Elem;
use crate::semantics::{for_each_assignment, rule_holds, Program, Valuation};
use crate::syntax::{subformula_closure, sort_vars, Formula, Rule};
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RewriteOptions {
    /// Sim rules only: put the value of every implication of `Sfor(r)` into the box domain.
    pub classicizable: bool,
}

#[derive(Clone, Debug)]
pub struct RewriteResult {
    pub rules: Vec<CanonicalRule>,
    /// Largest algebra size considered.
    pub budget: usize,
    /// Every algebra whose pre-filtration fits the budget is covered.
    pub complete_up_to_budget: bool,
}

pub fn rewrite(r: &Rule, budget: usize) -> Result<RewriteResult> {
    rewrite_with(r, budget, RewriteOptions::default())
}

/// Rewrite `r` into canonical rules over algebras of at most `budget` elements. Sim rules
/// range over all frontons within budget; clm rules range over complex algebras of GL frames
/// and pass through the Magari pre-filtration.
pub fn rewrite_with(r: &Rule, budget: usize, opts: RewriteOptions) -> Result<RewriteResult> {
    if budget < 2 {
        return Err(Error::Precondition(format!("rewrite budget must be at least 2, got {budget}")));
    }
    let mut pool = Pool::default();
    match r.sig {
        Sig::Sim => rewrite_sim(r, budget, opts, &mut pool)?,
        Sig::Clm => {
            if opts.classicizable {
                return Err(Error::Signature("the classicizable variant takes sim rules".into()));
            }
            rewrite_clm(r, budget, &mut pool)?
        }
    }
    Ok(RewriteResult { rules: pool.finish()?, budget, complete_up_to_budget: true })
}

fn rewrite_sim(r: &Rule, budget: usize, opts: RewriteOptions, pool: &mut Pool) -> Result<()> {
    let sfor: Vec<Formula> = subformula_closure(r).into_iter().collect();
    let vars = sort_vars(r.vars());
    let mut prog = Program::new(Sig::Sim, vars.clone());
    let idx: Vec<u32> = sfor.iter().map(|f| prog.add(f)).collect::<Result<_>>()?;
    let at = |f: &Formula| idx[sfor.iter().position(|g| g == f).expect("subformula")] as usize;
    let gamma: Vec<usize> = r.gamma.iter().map(at).collect();
    let delta: Vec<usize> = r.delta.iter().map(at).collect();
    let imps: Vec<(usize, usize, usize)> = sfor
        .iter()
        .filter_map(|f| match f {
            Formula::Imp(a, b) => Some((at(a), at(b), at(f))),
            _ => None,
        })
        .collect();
    let boxes: Vec<usize> = sfor.iter().filter_map(|f| if let Formula::BoxSim(a) = f { Some(at(a)) } else { None }).collect();
    for poset in posets_with_few_upsets(budget) {
        let k = fronton_of_poset(poset)?;
        let top = k.lattice().top();
        let all = k.lattice().all();
        let mut found = BTreeSet::new();
        let mut out = Vec::new();
        for_each_assignment(vars.len(), k.size(), |assign| {
            prog.eval_all(&k, assign, &mut out);
            if gamma.iter().all(|&g| out[g] == top) && delta.iter().all(|&d| out[d] != top) {
                let mut bx: Vec<Elem> = boxes.iter().map(|&a| out[a]).collect();
                if opts.classicizable {
                    bx.extend(imps.iter().map(|&(_, _, i)| out[i]));
                }
                // only models that are their own pre-filtration; every pre-filtration is one
                let mut gens = ElemSet::EMPTY;
                for &i in &idx {
                    gens.insert(out[i as usize]);
                }
                if relative_complement_closure(&k, gens, &bx, false) != all {
                    return;
                }
                found.insert(DomainPair::new(imps.iter().map(|&(a, b, _)| (out[a], out[b])).collect(), bx));
            }
        });
        if !found.is_empty() {
            let k = AnyAlgebra::Sim(k);
            for d in found {
                pool.insert(&k, d)?;
            }
        }
    }
    Ok(())
}

fn rewrite_clm(r: &Rule, budget: usize, pool: &mut Pool) -> Result<()> {
    let vars = sort_vars(r.vars());
    let mut points = 0;
    while points < 63 && 1usize << (points + 1) <= budget {
        points += 1;
    }
    for x in frames_up_to(EnumKind::ClmFrame, points, Some(ClassFilter::Gl))? {
        let m = complex_algebra(&x)?.algebra;
        let m = m.as_clm()?;
        let skel = sigma_algebra(&rho_algebra(m)?.algebra)?.algebra;
        let mut err = None;
        for_each_assignment(vars.len(), skel.size(), |assign| {
            if err.is_some() {
                return;
            }
            let w: Valuation = vars.iter().cloned().zip(assign.iter().copied()).collect();
            let mut step = || -> Result<()> {
                if !rule_holds(&skel, &w, r)? {
                    let p = prefilter_magari(m, r, &w)?;
                    pool.insert(&AnyAlgebra::Clm(p.algebra), DomainPair::boxes(p.classicized_domain))?;
                }
                Ok(())
            };
            if let Err(e) = step() {
                err = Some(e);
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(())
}

/// Algebras up to isomorphism, each with its domains up to automorphism.
#[derive(Default)]
struct Pool {
    reps: Vec<Rep>,
}

struct Rep {
    algebra: AnyAlgebra,
    key: FrameKey,
    auts: Vec<Vec<Elem>>,
    domains: BTreeSet<DomainPair>,
}

impl Pool {
    fn insert(&mut self, a: &AnyAlgebra, d: DomainPair) -> Result<()> {
        let key = frame_key(&dual_frame(a)?.frame);
        for rep in self.reps.iter_mut().filter(|r| r.key == key) {
            if let Some(h) = algebra_isomorphism(a, &rep.algebra) {
                let d = d.map(&h);
                let canon = rep.auts.iter().map(|g| d.map(g)).min().expect("identity");
                rep.domains.insert(canon);
                return Ok(());
            }
        }
        let auts = automorphisms(a);
        let canon = auts.iter().map(|g| d.map(g)).min().expect("identity");
        self.reps.push(Rep { algebra: a.clone(), key, auts, domains: [canon].into_iter().collect() });
        Ok(())
    }

    /// Keep only domains that are minimal under inclusion up to automorphism: a rule with
    /// larger domains is refuted only where a rule with smaller domains already is.
    fn finish(self) -> Result<Vec<CanonicalRule>> {
        let mut out = Vec::new();
        for rep in self.reps {
            let all: Vec<&DomainPair> = rep.domains.iter().collect();
            for d in &all {
                let redundant = all.iter().any(|e| e != d && rep.auts.iter().any(|g| contained(&e.map(g), d)));
                if !redundant {
                    out.push(build_scr(&rep.algebra, (*d).clone())?);
                }
            }
        }
        Ok(out)
    }
}

fn contained(small: &DomainPair, big: &DomainPair) -> bool {
    small.imp.iter().all(|p| big.imp.binary_search(p).is_ok()) && small.bx.iter().all(|a| big.bx.binary_search(a).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_rule;

    fn sim(s: &str) -> Rule {
        parse_rule(s, Sig::Sim).unwrap()
    }

    #[test]
    fn trivial_and_small_rules() {
        assert!(rewrite(&sim("/ true"), 8).unwrap().rules.is_empty());
        for text in ["/ false", "/ p"] {
            let out = rewrite(&sim(text), 4).unwrap();
            assert!(out.complete_up_to_budget);
            assert!(out.rules.iter().any(|c| c.algebra.size() == 2 && c.domains.is_empty()), "{text}");
        }
        assert!(rewrite(&sim("/ p"), 1).is_err());
    }

    #[test]
    fn classicizable_output() {
        let out = rewrite_with(&sim("[m]p / p | (p -> q)"), 5, RewriteOptions { classicizable: true }).unwrap();
        assert!(!out.rules.is_empty());
        for c in &out.rules {
            assert!(super::super::is_classicizable(c).unwrap());
        }
    }

    #[test]
    fn clm_rules_land_on_magari() {
        use crate::algebra::{validate_clm, Class};
        let r = parse_rule("[]p / p", Sig::Clm).unwrap();
        let out = rewrite(&r, 8).unwrap();
        assert!(!out.rules.is_empty());
        for c in &out.rules {
            assert!(validate_clm(c.algebra.as_clm().unwrap(), Class::Magari).unwrap().is_member());
        }
    }
}
