//! Valuations, evaluation, and exhaustive rule validity on finite algebras.

use crate::algebra::{Algebra, Sig};
use crate::bits::ElemSet;
use crate::error::{Error, Result};
use crate::order::Elem;
use crate::syntax::{sort_vars, Formula, Rule};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

pub type Valuation = BTreeMap<String, Elem>;

/// Default cap on `k * log2 |A|` for [`rule_valid`].
pub const DEFAULT_SEARCH_BITS: f64 = 64.0;

fn check_sig<A: Algebra + ?Sized>(a: &A, f: &Formula) -> Result<()> {
    if f.fits(a.sig()) {
        Ok(())
    } else {
        Err(Error::Signature(format!("formula `{}` does not fit a {} algebra", f.print(Sig::Sim), a.sig())))
    }
}

/// Value of `f` under `v`.
pub fn eval<A: Algebra + ?Sized>(a: &A, v: &Valuation, f: &Formula) -> Result<Elem> {
    check_sig(a, f)?;
    eval_unchecked(a, v, f)
}

fn eval_unchecked<A: Algebra + ?Sized>(a: &A, v: &Valuation, f: &Formula) -> Result<Elem> {
    let l = a.lattice();
    Ok(match f {
        Formula::Var(x) => match v.get(x) {
            Some(&e) if e < l.size() => e,
            Some(&e) => return Err(Error::Domain(format!("value {e} of `{x}` is out of range"))),
            None => return Err(Error::Unassigned(x.clone())),
        },
        Formula::Bot => l.bottom(),
        Formula::Top => l.top(),
        Formula::And(p, q) => l.meet(eval_unchecked(a, v, p)?, eval_unchecked(a, v, q)?),
        Formula::Or(p, q) => l.join(eval_unchecked(a, v, p)?, eval_unchecked(a, v, q)?),
        Formula::Imp(p, q) => a.imp(eval_unchecked(a, v, p)?, eval_unchecked(a, v, q)?),
        Formula::Neg(p) => a.imp(eval_unchecked(a, v, p)?, l.bottom()),
        Formula::BoxSim(p) | Formula::BoxClm(p) => a.bx(eval_unchecked(a, v, p)?),
    })
}

/// If every premise is top then some conclusion is top.
pub fn rule_holds<A: Algebra + ?Sized>(a: &A, v: &Valuation, r: &Rule) -> Result<bool> {
    let top = a.lattice().top();
    for g in &r.gamma {
        if eval(a, v, g)? != top {
            return Ok(true);
        }
    }
    for d in &r.delta {
        if eval(a, v, d)? == top {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Op {
    Var(u32),
    Bot,
    Top,
    And(u32, u32),
    Or(u32, u32),
    Imp(u32, u32),
    Neg(u32),
    Box(u32),
}

/// Formulas compiled into a shared operation list over a fixed variable order.
#[derive(Clone, Debug)]
pub struct Program {
    sig: Sig,
    ops: Vec<Op>,
    dedup: HashMap<Op, u32>,
    vars: Vec<String>,
    var_index: HashMap<String, u32>,
}

impl Program {
    pub fn new(sig: Sig, vars: Vec<String>) -> Program {
        let var_index = vars.iter().enumerate().map(|(i, v)| (v.clone(), i as u32)).collect();
        Program { sig, ops: Vec::new(), dedup: HashMap::new(), vars, var_index }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    fn push(&mut self, op: Op) -> u32 {
        if let Some(&i) = self.dedup.get(&op) {
            return i;
        }
        let i = self.ops.len() as u32;
        self.ops.push(op);
        self.dedup.insert(op, i);
        i
    }

    /// Compile `f`, returning the index of its root operation.
    pub fn add(&mut self, f: &Formula) -> Result<u32> {
        if !f.fits(self.sig) {
            return Err(Error::Signature(format!("formula does not fit {}", self.sig)));
        }
        self.add_rec(f)
    }

    fn add_rec(&mut self, f: &Formula) -> Result<u32> {
        let op = match f {
            Formula::Var(x) => Op::Var(*self.var_index.get(x).ok_or_else(|| Error::Unassigned(x.clone()))?),
            Formula::Bot => Op::Bot,
            Formula::Top => Op::Top,
            Formula::And(p, q) => Op::And(self.add_rec(p)?, self.add_rec(q)?),
            Formula::Or(p, q) => Op::Or(self.add_rec(p)?, self.add_rec(q)?),
            Formula::Imp(p, q) => Op::Imp(self.add_rec(p)?, self.add_rec(q)?),
            Formula::Neg(p) => Op::Neg(self.add_rec(p)?),
            Formula::BoxSim(p) | Formula::BoxClm(p) => Op::Box(self.add_rec(p)?),
        };
        Ok(self.push(op))
    }

    #[inline]
    fn apply<A: Algebra + ?Sized>(&self, a: &A, i: usize, assign: &[Elem], out: &mut [Elem]) {
        let l = a.lattice();
        out[i] = match self.ops[i] {
            Op::Var(v) => assign[v as usize],
            Op::Bot => l.bottom(),
            Op::Top => l.top(),
            Op::And(p, q) => l.meet(out[p as usize], out[q as usize]),
            Op::Or(p, q) => l.join(out[p as usize], out[q as usize]),
            Op::Imp(p, q) => a.imp(out[p as usize], out[q as usize]),
            Op::Neg(p) => a.imp(out[p as usize], l.bottom()),
            Op::Box(p) => a.bx(out[p as usize]),
        };
    }

    /// Evaluate every operation under a full assignment (indexed like [`Program::vars`]).
    pub fn eval_all<A: Algebra + ?Sized>(&self, a: &A, assign: &[Elem], out: &mut Vec<Elem>) {
        out.resize(self.ops.len(), 0);
        for i in 0..self.ops.len() {
            self.apply(a, i, assign, out);
        }
    }

    fn children(&self, i: usize) -> Vec<usize> {
        match self.ops[i] {
            Op::Var(_) | Op::Bot | Op::Top => vec![],
            Op::And(p, q) | Op::Or(p, q) | Op::Imp(p, q) => vec![p as usize, q as usize],
            Op::Neg(p) | Op::Box(p) => vec![p as usize],
        }
    }

    /// Operations reachable from `root`, in evaluation order, and the variables they read.
    fn cone(&self, root: usize) -> (Vec<usize>, Vec<usize>) {
        let mut seen = vec![false; root + 1];
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            if !seen[i] {
                seen[i] = true;
                stack.extend(self.children(i));
            }
        }
        let ops: Vec<usize> = (0..=root).filter(|&i| seen[i]).collect();
        let mut vars: Vec<usize> = ops
            .iter()
            .filter_map(|&i| if let Op::Var(v) = self.ops[i] { Some(v as usize) } else { None })
            .collect();
        vars.sort_unstable();
        (ops, vars)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Countermodel(Valuation),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Exhaustive validity check with the default search-size guard.
pub fn rule_valid<A: Algebra + ?Sized>(a: &A, r: &Rule) -> Result<Validity> {
    rule_valid_with_limit(a, r, DEFAULT_SEARCH_BITS)
}

/// Exhaustive search over all assignments to the rule's variables in canonical order
/// (variables by [`sort_vars`], values by the lattice's canonical element order). Returns the
/// lexicographically first countermodel.
///
/// A branch is cut only when some premise is already forced below top or some conclusion is
/// already forced to top for every completion, so the search stays exhaustive.
pub fn rule_valid_with_limit<A: Algebra + ?Sized>(a: &A, r: &Rule, max_bits: f64) -> Result<Validity> {
    if r.sig != a.sig() {
        return Err(Error::Signature(format!("{} rule on a {} algebra", r.sig, a.sig())));
    }
    let vars = sort_vars(r.vars());
    let bits = vars.len() as f64 * (a.size() as f64).log2();
    if bits > max_bits {
        return Err(Error::Budget(format!(
            "{} variables over {} elements is 2^{bits:.1} assignments, above the bound 2^{max_bits}",
            vars.len(),
            a.size()
        )));
    }
    let search = match Search::new(a, r, vars)? {
        Some(s) => s,
        None => return Ok(Validity::Valid),
    };
    Ok(match search.run() {
        Some(assign) => Validity::Countermodel(search.vars.iter().cloned().zip(assign).collect()),
        None => Validity::Valid,
    })
}

struct Constraint {
    premise: bool,
    root: usize,
    ops: Vec<usize>,
    last: usize,
}

struct Search<'a, A: Algebra + ?Sized> {
    alg: &'a A,
    prog: Program,
    vars: Vec<String>,
    cons: Vec<Constraint>,
    /// constraints to filter once the given variable is assigned
    trigger: Vec<Vec<usize>>,
    init: Vec<ElemSet>,
}

impl<'a, A: Algebra + ?Sized> Search<'a, A> {
    /// `None` when some ground constraint already rules out every countermodel.
    fn new(alg: &'a A, r: &Rule, vars: Vec<String>) -> Result<Option<Self>> {
        let mut prog = Program::new(r.sig, vars.clone());
        let k = vars.len();
        let mut s = Search {
            alg,
            prog: Program::new(r.sig, vec![]),
            vars,
            cons: Vec::new(),
            trigger: vec![Vec::new(); k],
            init: vec![alg.lattice().all(); k],
        };
        let mut members = Vec::new();
        for f in &r.gamma {
            members.push((true, prog.add(f)?));
        }
        for f in &r.delta {
            members.push((false, prog.add(f)?));
        }
        s.prog = prog;
        let top = alg.lattice().top();
        let mut scratch = vec![0; s.prog.ops.len()];
        let mut assign = vec![0; k];
        for (premise, root) in members {
            let (ops, vs) = s.prog.cone(root as usize);
            let c = Constraint { premise, root: root as usize, ops, last: vs.last().copied().unwrap_or(0) };
            match vs.len() {
                0 => {
                    for &i in &c.ops {
                        s.prog.apply(alg, i, &assign, &mut scratch);
                    }
                    if (scratch[c.root] == top) != premise {
                        return Ok(None);
                    }
                }
                1 => {
                    let v = vs[0];
                    let mut keep = ElemSet::EMPTY;
                    for x in s.init[v].iter() {
                        assign[v] = x;
                        if s.holds(&c, &assign, &mut scratch) {
                            keep.insert(x);
                        }
                    }
                    if keep.is_empty() {
                        return Ok(None);
                    }
                    s.init[v] = keep;
                }
                n => {
                    s.trigger[vs[n - 2]].push(s.cons.len());
                    s.cons.push(c);
                }
            }
        }
        Ok(Some(s))
    }

    #[inline]
    fn holds(&self, c: &Constraint, assign: &[Elem], scratch: &mut [Elem]) -> bool {
        for &i in &c.ops {
            self.prog.apply(self.alg, i, assign, scratch);
        }
        (scratch[c.root] == self.alg.lattice().top()) == c.premise
    }

    fn run(&self) -> Option<Vec<Elem>> {
        let k = self.vars.len();
        if k == 0 {
            return Some(vec![]);
        }
        let order = self.alg.lattice().elements();
        let firsts: Vec<Elem> = order.iter().copied().filter(|&x| self.init[0].contains(x)).collect();
        // Branches over the first variable run in parallel; the earliest branch wins.
        firsts.par_iter().find_map_first(|&x| {
            let mut assign = vec![0; k];
            let mut scratch = vec![0; self.prog.ops.len()];
            let mut doms = self.init.clone();
            assign[0] = x;
            if self.propagate(0, &mut assign, &mut doms, &mut scratch) && self.dfs(1, &mut assign, &doms, &mut scratch) {
                Some(assign)
            } else {
                None
            }
        })
    }

    /// Filter the domains of constraints triggered by variable `v`; false if one empties.
    fn propagate(&self, v: usize, assign: &mut [Elem], doms: &mut [ElemSet], scratch: &mut [Elem]) -> bool {
        for &ci in &self.trigger[v] {
            let c = &self.cons[ci];
            let mut keep = ElemSet::EMPTY;
            for x in doms[c.last].iter() {
                assign[c.last] = x;
                if self.holds(c, assign, scratch) {
                    keep.insert(x);
                }
            }
            if keep.is_empty() {
                return false;
            }
            doms[c.last] = keep;
        }
        true
    }

    fn dfs(&self, v: usize, assign: &mut [Elem], doms: &[ElemSet], scratch: &mut [Elem]) -> bool {
        if v == assign.len() {
            return true;
        }
        for &x in self.alg.lattice().elements() {
            if !doms[v].contains(x) {
                continue;
            }
            assign[v] = x;
            let mut next = doms.to_vec();
            next[v] = ElemSet::singleton(x);
            if self.propagate(v, assign, &mut next, scratch) {
                assign[v] = x;
                if self.dfs(v + 1, assign, &next, scratch) {
                    return true;
                }
            }
        }
        false
    }
}

/// Call `f` on every assignment of `k` variables over `n` elements, last variable fastest.
pub fn for_each_assignment(k: usize, n: usize, mut f: impl FnMut(&[Elem])) {
    let mut a = vec![0; k];
    loop {
        f(&a);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            a[i] += 1;
            if a[i] < n {
                break;
            }
            a[i] = 0;
        }
    }
}
