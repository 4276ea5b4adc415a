//! Negative sampling by head/tail corruption.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Triad;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Subject,
    Object,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Subject, Side::Object];

    pub fn entity(self, t: &Triad) -> usize {
        match self {
            Side::Subject => t.subject,
            Side::Object => t.object,
        }
    }

    /// `t` with this side replaced by `entity`.
    pub fn replace(self, t: &Triad, entity: usize) -> Triad {
        match self {
            Side::Subject => Triad::new(entity, t.predicate, t.object),
            Side::Object => Triad::new(t.subject, t.predicate, entity),
        }
    }
}

/// Positives with `eta` corruptions each. `negatives[i * eta..(i + 1) * eta]`
/// belong to `positives[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorruptionBatch {
    pub eta: usize,
    pub positives: Vec<Triad>,
    pub negatives: Vec<Triad>,
    pub sides: Vec<Side>,
}

impl CorruptionBatch {
    pub fn negatives_of(&self, i: usize) -> &[Triad] {
        &self.negatives[i * self.eta..(i + 1) * self.eta]
    }
}

/// Redraws allowed when the replacement equals the original entity.
const MAX_REDRAWS: usize = 16;

/// Draws `eta` corruptions per positive. The side is a fair coin per
/// negative and the replacement entity is uniform over the vocabulary; a draw
/// that reproduces the original entity is redrawn a bounded number of times,
/// then replaced by the next entity id.
pub fn sample_corruptions<R: Rng + ?Sized>(
    positives: &[Triad],
    eta: usize,
    entity_count: usize,
    rng: &mut R,
) -> Result<CorruptionBatch> {
    if entity_count < 2 {
        return Err(Error::CannotCorrupt(entity_count));
    }
    if eta == 0 {
        return Err(Error::config("eta", "must be a positive integer"));
    }
    let mut negatives = Vec::with_capacity(positives.len() * eta);
    let mut sides = Vec::with_capacity(positives.len() * eta);
    for pos in positives {
        for _ in 0..eta {
            let side = if rng.gen::<bool>() { Side::Subject } else { Side::Object };
            let original = side.entity(pos);
            let mut entity = rng.gen_range(0..entity_count);
            let mut redraws = 0;
            while entity == original && redraws < MAX_REDRAWS {
                entity = rng.gen_range(0..entity_count);
                redraws += 1;
            }
            if entity == original {
                entity = (original + 1) % entity_count;
            }
            negatives.push(side.replace(pos, entity));
            sides.push(side);
        }
    }
    Ok(CorruptionBatch {
        eta,
        positives: positives.to_vec(),
        negatives,
        sides,
    })
}
