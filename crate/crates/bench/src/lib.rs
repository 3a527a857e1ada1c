//! Fixtures shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ptk_core::catalog::builtin_scene;
use ptk_core::dirac::random::random_lagrangian;
use ptk_core::dirac::LinearDirac;
use ptk_core::mvcalc::Multivector;
use ptk_core::poisson::PoissonStructure;

pub fn scene_structure(name: &str) -> PoissonStructure {
    builtin_scene(name)
        .and_then(|s| s.poisson_structure().ok().flatten())
        .unwrap_or_else(|| panic!("built-in scene {name} has a Poisson structure"))
}

pub fn scene_bivector(name: &str) -> Multivector {
    scene_structure(name).bivector().clone()
}

/// Seeded Lagrangians of dimension `n`.
pub fn lagrangians(n: usize, count: usize) -> Vec<LinearDirac> {
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    (0..count).map(|_| random_lagrangian(&mut rng, n)).collect()
}
