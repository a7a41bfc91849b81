//! Cut-off framelet systems `{φ0} ∪ {Ψ_{j,B}}` and their analysis/synthesis maps.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::function::{same_partition, PwcFunction};
use crate::error::{Error, Result};
use crate::hierarchy::{rational_to_f64, BlockId, HierarchicalPartition};

/// `(level, parent, ℓ1, ℓ2)` with 1-based child positions `ℓ1 < ℓ2`.
///
/// The derived ordering is level, then parent id, then the flat pair index,
/// which is the serialization order of coefficient vectors.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AtomKey {
    pub level: usize,
    pub parent: BlockId,
    pub l1: usize,
    pub l2: usize,
}

impl fmt::Display for AtomKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "psi[j={}, B={}, ({}, {})]",
            self.level, self.parent.0, self.l1, self.l2
        )
    }
}

/// One generator `ψ^{(ℓ1,ℓ2)}_{j,B} = sqrt(b_ℓ2) γ_ℓ1 − sqrt(b_ℓ1) γ_ℓ2`.
#[derive(Clone, Debug)]
pub struct FrameletAtom {
    key: AtomKey,
    function: PwcFunction,
}

impl FrameletAtom {
    pub fn key(&self) -> AtomKey {
        self.key
    }

    pub fn level(&self) -> usize {
        self.key.level
    }

    pub fn parent(&self) -> BlockId {
        self.key.parent
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.key.l1, self.key.l2)
    }

    pub fn function(&self) -> &PwcFunction {
        &self.function
    }

    /// The two children `B_ℓ1`, `B_ℓ2` whose union carries the atom.
    pub fn support_blocks(&self, partition: &HierarchicalPartition) -> (BlockId, BlockId) {
        let kids = partition.children(self.key.parent);
        (kids[self.key.l1 - 1], kids[self.key.l2 - 1])
    }
}

/// All `c_B choose 2` generators attached to `parent`; empty when `c_B < 2`.
pub fn build_generators(
    partition: &Arc<HierarchicalPartition>,
    parent: BlockId,
) -> Vec<FrameletAtom> {
    let kids = partition.children(parent);
    let m = kids.len();
    if m < 2 {
        return Vec::new();
    }
    let level = partition.block(parent).level();
    let b: Vec<f64> = partition
        .child_ratios(parent)
        .iter()
        .map(rational_to_f64)
        .collect();
    let mut atoms = Vec::with_capacity(m * (m - 1) / 2);
    for l1 in 1..=m {
        for l2 in l1 + 1..=m {
            let key = AtomKey {
                level,
                parent,
                l1,
                l2,
            };
            atoms.push(FrameletAtom {
                key,
                function: generator_function(partition, &key, &b),
            });
        }
    }
    atoms
}

fn generator_function(
    partition: &Arc<HierarchicalPartition>,
    key: &AtomKey,
    b: &[f64],
) -> PwcFunction {
    let kids = partition.children(key.parent);
    let (c1, c2) = (kids[key.l1 - 1], kids[key.l2 - 1]);
    let v1 = b[key.l2 - 1].sqrt() / partition.block(c1).measure_f64().sqrt();
    let v2 = -b[key.l1 - 1].sqrt() / partition.block(c2).measure_f64().sqrt();
    let values = partition
        .leaves_below(c1)
        .iter()
        .map(|&leaf| (leaf, v1))
        .chain(partition.leaves_below(c2).iter().map(|&leaf| (leaf, v2)));
    PwcFunction::from_leaf_values(partition.clone(), values).expect("descendant leaves are leaves")
}

fn atom_for_key(partition: &Arc<HierarchicalPartition>, key: AtomKey) -> Result<FrameletAtom> {
    let block = partition
        .get(key.parent)
        .ok_or_else(|| Error::IndexMismatch(format!("unknown parent block {}", key.parent)))?;
    if block.level() != key.level {
        return Err(Error::IndexMismatch(format!(
            "{key}: block lives at level {}",
            block.level()
        )));
    }
    let m = partition.children(key.parent).len();
    super::matrix::pair_to_flat(key.l1, key.l2, m)?;
    let b: Vec<f64> = partition
        .child_ratios(key.parent)
        .iter()
        .map(rational_to_f64)
        .collect();
    Ok(FrameletAtom {
        key,
        function: generator_function(partition, &key, &b),
    })
}

/// `φ0 = χ_K / sqrt(|K|)`.
pub fn scaling_function(partition: &Arc<HierarchicalPartition>) -> PwcFunction {
    PwcFunction::normalized_indicator(partition.clone(), BlockId(0))
}

/// A cut-off system or a subset of one (after restriction or pruning).
///
/// `φ0` is always present; atoms are sorted by [`AtomKey`].
#[derive(Clone, Debug)]
pub struct FrameletSystem {
    partition: Arc<HierarchicalPartition>,
    depth: usize,
    phi0: PwcFunction,
    atoms: Vec<FrameletAtom>,
}

/// `X({B_j}_{j=0}^J)`: `φ0` plus every generator of levels `0..J`.
pub fn build_system(partition: Arc<HierarchicalPartition>, depth: usize) -> Result<FrameletSystem> {
    if depth > partition.depth() {
        return Err(Error::DepthMismatch {
            left: depth,
            right: partition.depth(),
        });
    }
    let mut atoms = Vec::new();
    for j in 0..depth {
        for &parent in partition.level(j) {
            atoms.extend(build_generators(&partition, parent));
        }
    }
    atoms.sort_by_key(|a| a.key);
    Ok(FrameletSystem {
        phi0: scaling_function(&partition),
        partition,
        depth,
        atoms,
    })
}

impl FrameletSystem {
    /// Rebuilds a (sub)system from its atom keys.
    pub fn from_keys(
        partition: Arc<HierarchicalPartition>,
        depth: usize,
        keys: impl IntoIterator<Item = AtomKey>,
    ) -> Result<Self> {
        if depth > partition.depth() {
            return Err(Error::DepthMismatch {
                left: depth,
                right: partition.depth(),
            });
        }
        let mut atoms = Vec::new();
        for key in keys {
            if key.level >= depth {
                return Err(Error::IndexMismatch(format!(
                    "{key} lies beyond the cut-off depth {depth}"
                )));
            }
            atoms.push(atom_for_key(&partition, key)?);
        }
        atoms.sort_by_key(|a| a.key);
        atoms.dedup_by_key(|a| a.key);
        Ok(Self {
            phi0: scaling_function(&partition),
            partition,
            depth,
            atoms,
        })
    }

    pub fn partition(&self) -> &Arc<HierarchicalPartition> {
        &self.partition
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn phi0(&self) -> &PwcFunction {
        &self.phi0
    }

    pub fn atoms(&self) -> &[FrameletAtom] {
        &self.atoms
    }

    pub fn keys(&self) -> impl Iterator<Item = AtomKey> + '_ {
        self.atoms.iter().map(|a| a.key)
    }

    /// Number of functions, `φ0` included.
    pub fn len(&self) -> usize {
        self.atoms.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn atom(&self, key: &AtomKey) -> Option<&FrameletAtom> {
        self.atoms
            .binary_search_by(|a| a.key.cmp(key))
            .ok()
            .map(|i| &self.atoms[i])
    }

    /// `φ0` followed by the atoms in key order.
    pub fn functions(&self) -> impl Iterator<Item = &PwcFunction> + '_ {
        std::iter::once(&self.phi0).chain(self.atoms.iter().map(|a| &a.function))
    }

    /// Atom count per level `0..depth`.
    pub fn counts_by_level(&self) -> Vec<usize> {
        let mut counts = vec![0; self.depth];
        for a in &self.atoms {
            counts[a.key.level] += 1;
        }
        counts
    }

    /// Subsystem keeping the atoms accepted by `keep`.
    pub fn retain(&self, mut keep: impl FnMut(&FrameletAtom) -> bool) -> FrameletSystem {
        FrameletSystem {
            partition: self.partition.clone(),
            depth: self.depth,
            phi0: self.phi0.clone(),
            atoms: self.atoms.iter().filter(|a| keep(a)).cloned().collect(),
        }
    }

    pub fn without(&self, key: &AtomKey) -> FrameletSystem {
        self.retain(|a| a.key != *key)
    }

    fn check_partition(&self, f: &PwcFunction) -> Result<()> {
        if same_partition(&self.partition, f.partition()) {
            Ok(())
        } else {
            Err(Error::PartitionMismatch)
        }
    }

    /// `c_φ0 = ⟨f, φ0⟩` and `c_ψ = ⟨f, ψ⟩` for every atom.
    pub fn analyze(&self, f: &PwcFunction) -> Result<CoefficientVector> {
        self.check_partition(f)?;
        let phi0 = f.inner(&self.phi0)?;
        let mut coefficients = BTreeMap::new();
        for atom in &self.atoms {
            coefficients.insert(atom.key, f.inner(&atom.function)?);
        }
        Ok(CoefficientVector { phi0, coefficients })
    }

    /// `c_φ0 φ0 + Σ c_ψ ψ`.
    pub fn synthesize(&self, c: &CoefficientVector) -> Result<PwcFunction> {
        let mut out = self.phi0.scaled(c.phi0);
        for (key, &value) in &c.coefficients {
            let atom = self
                .atom(key)
                .ok_or_else(|| Error::IndexMismatch(format!("{key} is not in the system")))?;
            if value != 0.0 {
                out.add_scaled(value, &atom.function)?;
            }
        }
        Ok(out)
    }

    /// Pairwise inner products of `φ0` and the atoms, in that order.
    pub fn gram_matrix(&self) -> DMatrix<f64> {
        let functions: Vec<&PwcFunction> = self.functions().collect();
        super::bounds::gram(&functions)
    }
}

/// Coefficients of a signal against a system: `φ0` plus a map over atom keys.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientVector {
    pub phi0: f64,
    coefficients: BTreeMap<AtomKey, f64>,
}

impl CoefficientVector {
    pub fn new(phi0: f64, coefficients: impl IntoIterator<Item = (AtomKey, f64)>) -> Self {
        Self {
            phi0,
            coefficients: coefficients.into_iter().collect(),
        }
    }

    pub fn zeros(system: &FrameletSystem) -> Self {
        Self::new(0.0, system.keys().map(|k| (k, 0.0)))
    }

    pub fn get(&self, key: &AtomKey) -> Option<f64> {
        self.coefficients.get(key).copied()
    }

    pub fn set(&mut self, key: AtomKey, value: f64) {
        self.coefficients.insert(key, value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomKey, f64)> + '_ {
        self.coefficients.iter().map(|(&k, &v)| (k, v))
    }

    /// Number of atom coefficients (`φ0` excluded).
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `|c_φ0|² + Σ |c_ψ|²`.
    pub fn energy(&self) -> f64 {
        self.phi0 * self.phi0 + self.coefficients.values().map(|c| c * c).sum::<f64>()
    }

    /// Sparse copy keeping only coefficients with `|c| > eps`.
    pub fn threshold(&self, eps: f64) -> CoefficientVector {
        CoefficientVector {
            phi0: self.phi0,
            coefficients: self
                .coefficients
                .iter()
                .filter(|(_, v)| v.abs() > eps)
                .map(|(&k, &v)| (k, v))
                .collect(),
        }
    }
}
