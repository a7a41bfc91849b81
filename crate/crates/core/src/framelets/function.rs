//! Piecewise-constant functions on the finest level of a partition.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hierarchy::{BlockId, HierarchicalPartition};

/// A function in `V_J = span{χ_B : B ∈ B_J}` stored as sparse leaf values.
///
/// Leaves missing from the map carry the value zero.
#[derive(Clone, Debug)]
pub struct PwcFunction {
    partition: Arc<HierarchicalPartition>,
    values: BTreeMap<BlockId, f64>,
}

pub(crate) fn same_partition(
    a: &Arc<HierarchicalPartition>,
    b: &Arc<HierarchicalPartition>,
) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PwcFunction {
    pub fn zero(partition: Arc<HierarchicalPartition>) -> Self {
        Self {
            partition,
            values: BTreeMap::new(),
        }
    }

    /// `χ_B` for any block `B` of the partition, expanded to leaves.
    pub fn indicator(partition: Arc<HierarchicalPartition>, block: BlockId) -> Self {
        Self::constant_on(partition, block, 1.0)
    }

    /// `χ_B / sqrt(|B|)`, the unit-norm indicator.
    pub fn normalized_indicator(partition: Arc<HierarchicalPartition>, block: BlockId) -> Self {
        let value = partition.block(block).measure_f64().sqrt().recip();
        Self::constant_on(partition, block, value)
    }

    pub(crate) fn constant_on(
        partition: Arc<HierarchicalPartition>,
        block: BlockId,
        value: f64,
    ) -> Self {
        let values = partition
            .leaves_below(block)
            .iter()
            .map(|&leaf| (leaf, value))
            .collect();
        Self { partition, values }
    }

    pub fn from_leaf_values(
        partition: Arc<HierarchicalPartition>,
        values: impl IntoIterator<Item = (BlockId, f64)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (id, v) in values {
            if !partition.get(id).is_some_and(|_| partition.is_leaf(id)) {
                return Err(Error::IndexMismatch(format!("{id} is not a leaf block")));
            }
            map.insert(id, v);
        }
        Ok(Self {
            partition,
            values: map,
        })
    }

    /// Values given in finest-level order.
    pub fn from_dense(partition: Arc<HierarchicalPartition>, values: &[f64]) -> Result<Self> {
        let leaves = partition.leaves();
        if values.len() != leaves.len() {
            return Err(Error::IndexMismatch(format!(
                "expected {} leaf values, got {}",
                leaves.len(),
                values.len()
            )));
        }
        let map = leaves.iter().copied().zip(values.iter().copied()).collect();
        Ok(Self {
            partition,
            values: map,
        })
    }

    pub fn partition(&self) -> &Arc<HierarchicalPartition> {
        &self.partition
    }

    pub fn value(&self, leaf: BlockId) -> f64 {
        self.values.get(&leaf).copied().unwrap_or(0.0)
    }

    /// Stored `(leaf, value)` pairs, including explicit zeros.
    pub fn entries(&self) -> impl Iterator<Item = (BlockId, f64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    /// Leaves where the function is non-zero.
    pub fn support(&self) -> impl Iterator<Item = BlockId> + '_ {
        self.values
            .iter()
            .filter(|(_, v)| **v != 0.0)
            .map(|(&k, _)| k)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        self.partition
            .leaves()
            .iter()
            .map(|&leaf| self.value(leaf))
            .collect()
    }

    pub fn inner(&self, other: &PwcFunction) -> Result<f64> {
        if !same_partition(&self.partition, &other.partition) {
            return Err(Error::PartitionMismatch);
        }
        let (small, large) = if self.values.len() <= other.values.len() {
            (&self.values, &other.values)
        } else {
            (&other.values, &self.values)
        };
        Ok(small
            .iter()
            .filter_map(|(leaf, a)| {
                large
                    .get(leaf)
                    .map(|b| a * b * self.partition.block(*leaf).measure_f64())
            })
            .sum())
    }

    pub fn norm_squared(&self) -> f64 {
        self.values
            .iter()
            .map(|(leaf, v)| v * v * self.partition.block(*leaf).measure_f64())
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// `∫_K f`.
    pub fn integral(&self) -> f64 {
        self.values
            .iter()
            .map(|(leaf, v)| v * self.partition.block(*leaf).measure_f64())
            .sum()
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, scale: f64, other: &PwcFunction) -> Result<()> {
        if !same_partition(&self.partition, &other.partition) {
            return Err(Error::PartitionMismatch);
        }
        for (&leaf, &v) in &other.values {
            *self.values.entry(leaf).or_insert(0.0) += scale * v;
        }
        Ok(())
    }

    pub fn scaled(&self, scale: f64) -> PwcFunction {
        Self {
            partition: self.partition.clone(),
            values: self.values.iter().map(|(&k, &v)| (k, scale * v)).collect(),
        }
    }

    /// `‖self − other‖₂`.
    pub fn distance(&self, other: &PwcFunction) -> Result<f64> {
        let mut diff = self.clone();
        diff.add_scaled(-1.0, other)?;
        Ok(diff.norm())
    }
}

/// `⟨f, g⟩ = Σ_leaf f(leaf) g(leaf) |leaf|`.
pub fn inner_product(f: &PwcFunction, g: &PwcFunction) -> Result<f64> {
    f.inner(g)
}

/// Orthonormal basis `χ_B / sqrt(|B|)` of the leaf space `V_J`.
pub fn leaf_basis(partition: &Arc<HierarchicalPartition>) -> Vec<PwcFunction> {
    partition
        .leaves()
        .iter()
        .map(|&leaf| PwcFunction::normalized_indicator(partition.clone(), leaf))
        .collect()
}
