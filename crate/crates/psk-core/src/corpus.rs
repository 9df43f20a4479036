//! The fixed test corpus: hand-picked rules of both signatures and a seeded batch of
//! random sim formulas.

use crate::algebra::Sig;
use crate::syntax::{parse_rule, Formula, Rule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Seed of the random formula batch.
pub const CORPUS_SEED: u64 = 0x5eed_f407_2024;

/// Number of random formulas in [`random_sim_formulas`].
pub const RANDOM_FORMULAS: usize = 200;

const SIM_RULES: &[&str] = &[
    "/ true",
    "/ false",
    "/ p",
    "/ p | (p -> false)",
    "/ (p -> false) | ((p -> false) -> false)",
    "/ (p -> q) | (q -> p)",
    "/ [m]p -> p",
    "[m]p / p",
    "/ ([m]p -> p) -> p",
    "/ [m](p | (p -> false))",
    "/ [m]p | ([m]p -> p)",
    "(p -> false) -> q | r / ((p -> false) -> q) | ((p -> false) -> r)",
    "[m]p / p | (p -> q)",
    "p -> [m]q / p -> q",
];

const CLM_RULES: &[&str] = &[
    "/ true",
    "/ false",
    "/ p",
    "/ []p -> p",
    "[]p / p",
    "/ []p -> [][]p",
    "/ []([]p -> p) -> []p",
    "/ [](p | q) -> []p | []q",
    "/ ~[]false",
    "/ []p | []~p",
    "[]p / []q | ~q",
    "/ [+]p -> [](p -> [+]p)",
];

/// Hand-picked rules in the `sim` language.
pub fn sim_rules() -> Vec<Rule> {
    SIM_RULES.iter().map(|s| parse_rule(s, Sig::Sim).expect("corpus rule parses")).collect()
}

/// Hand-picked rules in the `clm` language.
pub fn clm_rules() -> Vec<Rule> {
    CLM_RULES.iter().map(|s| parse_rule(s, Sig::Clm).expect("corpus rule parses")).collect()
}

/// [`RANDOM_FORMULAS`] distinct sim formulas over `p`, `q`, `r` with connectives nested at
/// most four deep.
pub fn random_sim_formulas() -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(RANDOM_FORMULAS);
    while out.len() < RANDOM_FORMULAS {
        let f = random_formula(&mut rng, 4);
        if seen.insert(f.clone()) {
            out.push(f);
        }
    }
    out
}

fn random_formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..8) {
            0 => Formula::Bot,
            1 => Formula::Top,
            i => Formula::var(["p", "q", "r"][i % 3]),
        };
    }
    let op = rng.gen_range(0..5);
    let a = random_formula(rng, depth - 1);
    match op {
        0 => Formula::and(a, random_formula(rng, depth - 1)),
        1 => Formula::or(a, random_formula(rng, depth - 1)),
        2 => Formula::imp(a, random_formula(rng, depth - 1)),
        3 => Formula::imp(a, Formula::Bot),
        _ => Formula::boxsim(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shape() {
        assert_eq!(sim_rules().len(), SIM_RULES.len());
        assert_eq!(clm_rules().len(), CLM_RULES.len());
        let fs = random_sim_formulas();
        assert_eq!(fs.len(), RANDOM_FORMULAS);
        assert!(fs.iter().all(|f| f.depth() - 1 <= 4 && f.vars().len() <= 3 && f.fits(Sig::Sim)));
        assert_eq!(fs, random_sim_formulas());
    }
}
