//! Label-swap improvement: exchange the positions of two teams of the same
//! league whenever the rebuilt schedule gets strictly shorter.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::construction::{build_schedule, Labeling, Params, Variant};
use crate::error::Result;
use crate::instance::{Instance, League};
use crate::schedule::total_distance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    /// Upper limit on scan passes; 0 runs until a pass finds no improvement.
    pub max_passes: usize,
    pub variant: Variant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub labeling: Labeling,
    pub weight: f64,
    /// Passes performed, including the final one that found nothing.
    pub passes: usize,
}

pub fn labeling_weight(inst: &Instance, p: &Params, labeling: &Labeling, variant: Variant) -> Result<f64> {
    total_distance(&build_schedule(inst, p, labeling, variant)?, inst)
}

pub fn swap_improve(inst: &Instance, p: &Params, labeling: &Labeling, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let n = inst.n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut current = labeling.clone();
    let mut weight = labeling_weight(inst, p, &current, cfg.variant)?;
    let mut moves: Vec<(League, usize, usize)> = [League::X, League::Y]
        .into_iter()
        .flat_map(|lg| (0..n).flat_map(move |a| (a + 1..n).map(move |b| (lg, a, b))))
        .collect();
    let mut passes = 0;
    loop {
        passes += 1;
        moves.shuffle(&mut rng);
        let mut improved = false;
        for &(league, a, b) in &moves {
            current.order_mut(league).swap(a, b);
            let w = labeling_weight(inst, p, &current, cfg.variant)?;
            if w < weight {
                weight = w;
                improved = true;
            } else {
                current.order_mut(league).swap(a, b);
            }
        }
        if !improved || (cfg.max_passes > 0 && passes >= cfg.max_passes) {
            break;
        }
    }
    Ok(SearchOutcome {
        labeling: current,
        weight,
        passes,
    })
}
