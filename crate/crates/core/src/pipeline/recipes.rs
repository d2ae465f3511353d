//! Seeded recipe generation (Step 3).

use crate::error::{Error, Result};
use crate::opt::{command_pool, Command, Recipe};
use crate::rng::Rng;
use std::collections::HashSet;

/// Draws `n` pairwise-distinct recipes of `length` independent uniform
/// picks from the 16-entry command pool. Deterministic given the seed;
/// duplicate whole recipes are rejected and redrawn.
pub fn gen_recipes(n: usize, length: usize, seed: u64) -> Result<Vec<Recipe>> {
    if length == 0 {
        return Err(Error::usage("recipe length must be at least 1"));
    }
    let pool = command_pool();
    // the pool has 4 distinguishable balance entries but they are equal
    // as commands, so the distinct-sequence space is 13^length
    let distinct: HashSet<Command> = pool.iter().copied().collect();
    let space = (distinct.len() as u128).checked_pow(length as u32);
    if space.map(|s| (n as u128) > s).unwrap_or(false) {
        return Err(Error::usage(format!(
            "cannot draw {n} distinct recipes of length {length} from a space of {}",
            space.unwrap()
        )));
    }
    let mut rng = Rng::new(seed);
    let mut seen: HashSet<Vec<Command>> = HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let commands: Vec<Command> = (0..length)
            .map(|_| pool[rng.below(pool.len() as u64) as usize])
            .collect();
        if seen.insert(commands.clone()) {
            out.push(Recipe::new(out.len(), commands));
        }
    }
    Ok(out)
}

/// Per-job derived seed: pure jobs are seeded independently of worker
/// scheduling.
pub fn seed_job(master_seed: u64, design: &str, recipe_id: usize) -> u64 {
    Rng::derive(master_seed, &[crate::rng::hash_str(design), recipe_id as u64]).next_u64()
}
