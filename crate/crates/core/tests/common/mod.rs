//! Helpers shared by the integration tests.

use nnrecover::lp::LpProblem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int_coeffs(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-3..=3) as f64).collect()
}

/// Small LP with integer data: at most 5 variables, 8 rows and 14
/// constraints counting finite bounds, so the vertex oracle accepts it.
pub fn random_lp(seed: u64) -> LpProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rng.random_range(1..=5);
    let rows = rng.random_range(0..=8);
    let mut p = LpProblem::new(d);
    p.set_objective(int_coeffs(&mut rng, d));
    for _ in 0..rows {
        let a = int_coeffs(&mut rng, d);
        let b = rng.random_range(-4..=6) as f64;
        if rng.random_bool(0.25) {
            p.add_eq(a, b);
        } else {
            p.add_le(a, b);
        }
    }
    let mut budget = 14 - rows;
    for i in 0..d {
        let (lo, hi) = match rng.random_range(0..4) {
            0 => (f64::NEG_INFINITY, f64::INFINITY),
            1 => (0.0, f64::INFINITY),
            2 => (-2.0, 3.0),
            _ => (f64::NEG_INFINITY, 2.0),
        };
        let need = lo.is_finite() as usize + hi.is_finite() as usize;
        if need <= budget {
            budget -= need;
            p.set_bounds(i, lo, hi);
        }
    }
    p
}
