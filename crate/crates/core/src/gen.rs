//! Random formulas for property tests and scheme instantiation.

use rand::Rng;

use crate::formula::Formula;

/// Random formula of depth at most `depth` over `vars` (⊥ when `vars` is empty).
/// Leaves are ⊥ with probability 1/10.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, vars: &[&str], depth: usize) -> Formula {
    let leaf = |rng: &mut R| {
        if vars.is_empty() || rng.gen_ratio(1, 10) {
            Formula::Bottom
        } else {
            Formula::prop(vars[rng.gen_range(0..vars.len())])
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..4) {
        0 => leaf(rng),
        1 => Formula::not(random_formula(rng, vars, depth - 1)),
        2 => Formula::conj(
            random_formula(rng, vars, depth - 1),
            random_formula(rng, vars, depth - 1),
        ),
        _ => Formula::implies(
            random_formula(rng, vars, depth - 1),
            random_formula(rng, vars, depth - 1),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn respects_depth_and_alphabet() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let f = random_formula(&mut rng, &["p", "q"], 3);
            assert!(f.depth() <= 3);
            assert!(f.variables().iter().all(|v| v == "p" || v == "q"));
        }
    }
}
