use rand::Rng;

use crate::error::{Error, Result};
use crate::multicolor::ColorTree;
use crate::types::{AllocationState, ValueItem, VectorItem};

/// Envy minimization through multicolor discrepancy: the value vector of
/// each item, scaled by `1/√n` into the unit ball, is routed through a
/// color tree and the item goes to the agent of the reached color.
#[derive(Debug, Clone)]
pub struct DiscrepancyAllocator {
    tree: ColorTree,
    scale: f64,
}

impl DiscrepancyAllocator {
    pub fn new(n: usize, c_param: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::param("allocation needs at least two agents"));
        }
        Ok(Self {
            tree: ColorTree::build(n, n, c_param)?,
            scale: 1.0 / (n as f64).sqrt(),
        })
    }

    pub fn tree(&self) -> &ColorTree {
        &self.tree
    }

    pub fn scaled_vector(&self, item: &ValueItem) -> Result<VectorItem> {
        VectorItem::new(item.values().iter().map(|v| v * self.scale).collect())
    }

    pub fn step<R: Rng + ?Sized>(
        &mut self,
        state: &mut AllocationState,
        item: &ValueItem,
        rng: &mut R,
    ) -> Result<usize> {
        if item.n() != self.tree.n() {
            return Err(Error::DimensionMismatch {
                expected: self.tree.n(),
                got: item.n(),
            });
        }
        let v = self.scaled_vector(item)?;
        let recipient = self.tree.assign_color(&v, rng)?;
        state.update(item, recipient)?;
        Ok(recipient)
    }
}
