//! Boxes, blocks and hierarchical partitions with exact rational geometry.
//!
//! A [`HierarchicalPartition`] is a finite nested sequence of levels
//! `B_0 = {K}, B_1, ..., B_J`, each a finite collection of interior-disjoint
//! boxes covering `K`, where every block of level `j - 1` is the union of its
//! children in level `j`. Endpoints are stored as exact rationals so that the
//! tiling and nesting identities can be checked with `==`.
//!
//! Block ids are global: the root is `0` and ids increase level by level.
//! Within a level, blocks of a tensor product (and of the dyadic partitions)
//! are laid out on the grid with the first coordinate varying fastest, and
//! the children of a block are listed in id order.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Closed-open interval `[lo, hi)` with `lo < hi`.
///
/// The right boundary of `K` is closed by convention; only lengths enter the
/// framelet construction so the distinction is purely presentational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidPartition(format!(
                "interval [{lo}, {hi}) has non-positive length"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn from_ratios(lo: (i64, i64), hi: (i64, i64)) -> Result<Self> {
        if lo.1 == 0 || hi.1 == 0 {
            return Err(Error::InvalidPartition("zero denominator".into()));
        }
        Self::new(ratio(lo.0, lo.1), ratio(hi.0, hi.1))
    }

    pub fn unit() -> Self {
        Self {
            lo: Rational::zero(),
            hi: Rational::one(),
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Length of `self ∩ other`, zero when they only touch.
    pub fn overlap(&self, other: &Interval) -> Rational {
        let lo = if self.lo > other.lo {
            &self.lo
        } else {
            &other.lo
        };
        let hi = if self.hi < other.hi {
            &self.hi
        } else {
            &other.hi
        };
        if lo < hi {
            hi - lo
        } else {
            Rational::zero()
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlockId(pub usize);

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// An axis-aligned box `I_1 × ... × I_d` inside a partition.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    id: BlockId,
    level: usize,
    parent: Option<BlockId>,
    sides: Vec<Interval>,
    measure: Rational,
    measure_f64: f64,
}

impl Block {
    fn new(id: BlockId, level: usize, parent: Option<BlockId>, sides: Vec<Interval>) -> Self {
        let measure = sides
            .iter()
            .fold(Rational::one(), |acc, side| acc * side.length());
        let measure_f64 = rational_to_f64(&measure);
        Self {
            id,
            level,
            parent,
            sides,
            measure,
            measure_f64,
        }
    }

    pub fn id(&self) -> BlockId {
        self.id
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn parent(&self) -> Option<BlockId> {
        self.parent
    }

    pub fn sides(&self) -> &[Interval] {
        &self.sides
    }

    pub fn measure(&self) -> &Rational {
        &self.measure
    }

    pub fn measure_f64(&self) -> f64 {
        self.measure_f64
    }

    pub fn contains(&self, other: &Block) -> bool {
        self.sides.len() == other.sides.len()
            && self
                .sides
                .iter()
                .zip(&other.sides)
                .all(|(a, b)| a.contains(b))
    }

    /// Exact Lebesgue measure of `self ∩ other`.
    pub fn intersection_measure(&self, other: &Block) -> Rational {
        let mut acc = Rational::one();
        for (a, b) in self.sides.iter().zip(&other.sides) {
            let len = a.overlap(b);
            if len.is_zero() {
                return len;
            }
            acc *= len;
        }
        acc
    }

    /// True when the intersection has positive measure. Comparison only, no products.
    pub fn meets(&self, other: &Block) -> bool {
        self.sides
            .iter()
            .zip(&other.sides)
            .all(|(a, b)| std::cmp::max(&a.lo, &b.lo) < std::cmp::min(&a.hi, &b.hi))
    }
}

/// Nested block tree `{B_j}` over a compact box `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct HierarchicalPartition {
    dimension: usize,
    blocks: Vec<Block>,
    levels: Vec<Vec<BlockId>>,
    children: Vec<Vec<BlockId>>,
    leaves_below: Vec<Vec<BlockId>>,
    leaf_position: Vec<Option<usize>>,
}

impl HierarchicalPartition {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Index `J` of the finest level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn root(&self) -> &Block {
        &self.blocks[0]
    }

    pub fn block(&self, id: BlockId) -> &Block {
        &self.blocks[id.0]
    }

    pub fn get(&self, id: BlockId) -> Option<&Block> {
        self.blocks.get(id.0)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn level(&self, j: usize) -> &[BlockId] {
        &self.levels[j]
    }

    pub fn levels(&self) -> &[Vec<BlockId>] {
        &self.levels
    }

    pub fn children(&self, id: BlockId) -> &[BlockId] {
        &self.children[id.0]
    }

    pub fn leaves(&self) -> &[BlockId] {
        &self.levels[self.depth()]
    }

    pub fn is_leaf(&self, id: BlockId) -> bool {
        self.leaf_position[id.0].is_some()
    }

    /// Position of a leaf within the finest level.
    pub fn leaf_position(&self, id: BlockId) -> Option<usize> {
        self.leaf_position.get(id.0).copied().flatten()
    }

    /// Finest-level blocks contained in `id`.
    pub fn leaves_below(&self, id: BlockId) -> &[BlockId] {
        &self.leaves_below[id.0]
    }

    pub fn measure(&self) -> &Rational {
        self.root().measure()
    }

    /// Ratios `b_ℓ = |B_ℓ| / |B|` for the children of `id`, exact.
    pub fn child_ratios(&self, id: BlockId) -> Vec<Rational> {
        let parent = self.block(id).measure();
        self.children(id)
            .iter()
            .map(|&c| self.block(c).measure() / parent)
            .collect()
    }

    /// Checks the root and nested properties and reports every failure.
    pub fn validate(&self) -> ValidationReport {
        validate_parts(self.dimension, &self.blocks, &self.levels, &self.children)
    }

    fn assemble(
        dimension: usize,
        blocks: Vec<Block>,
        levels: Vec<Vec<BlockId>>,
        children: Vec<Vec<BlockId>>,
    ) -> Self {
        let n = blocks.len();
        let mut leaf_position = vec![None; n];
        let depth = levels.len() - 1;
        for (pos, id) in levels[depth].iter().enumerate() {
            leaf_position[id.0] = Some(pos);
        }
        let mut leaves_below: Vec<Vec<BlockId>> = vec![Vec::new(); n];
        for &leaf in &levels[depth] {
            leaves_below[leaf.0].push(leaf);
        }
        for j in (0..depth).rev() {
            for &id in &levels[j] {
                let mut acc = Vec::new();
                for &c in &children[id.0] {
                    acc.extend_from_slice(&leaves_below[c.0]);
                }
                leaves_below[id.0] = acc;
            }
        }
        Self {
            dimension,
            blocks,
            levels,
            children,
            leaves_below,
            leaf_position,
        }
    }
}

/// Incrementally builds a partition level by level.
///
/// Blocks receive ids in insertion order; children of a block are listed in
/// the order they were added.
#[derive(Debug)]
pub struct PartitionBuilder {
    dimension: usize,
    blocks: Vec<Block>,
    levels: Vec<Vec<BlockId>>,
    children: Vec<Vec<BlockId>>,
}

impl PartitionBuilder {
    pub fn new(root_sides: Vec<Interval>) -> Self {
        let dimension = root_sides.len();
        Self {
            dimension,
            blocks: vec![Block::new(BlockId(0), 0, None, root_sides)],
            levels: vec![vec![BlockId(0)]],
            children: vec![Vec::new()],
        }
    }

    pub fn start_level(&mut self) {
        self.levels.push(Vec::new());
    }

    pub fn current_level(&self) -> usize {
        self.levels.len() - 1
    }

    /// Adds a block to the level opened by the last [`start_level`](Self::start_level).
    pub fn add(&mut self, parent: BlockId, sides: Vec<Interval>) -> BlockId {
        let level = self.current_level();
        assert!(
            level > 0,
            "start_level must be called before adding children"
        );
        let id = BlockId(self.blocks.len());
        self.blocks.push(Block::new(id, level, Some(parent), sides));
        self.children.push(Vec::new());
        self.children[parent.0].push(id);
        self.levels[level].push(id);
        id
    }

    pub fn level_ids(&self, j: usize) -> &[BlockId] {
        &self.levels[j]
    }

    pub fn build(self) -> Result<HierarchicalPartition> {
        let report = validate_parts(self.dimension, &self.blocks, &self.levels, &self.children);
        report.into_result()?;
        Ok(self.build_unchecked())
    }

    /// Skips validation, for constructing deliberately broken partitions.
    pub fn build_unchecked(mut self) -> HierarchicalPartition {
        while self.levels.len() > 1 && self.levels.last().is_some_and(|l| l.is_empty()) {
            self.levels.pop();
        }
        HierarchicalPartition::assemble(self.dimension, self.blocks, self.levels, self.children)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ValidationIssue {
    DimensionMismatch {
        block: BlockId,
    },
    RootNotUnique,
    ChildOutsideParent {
        level: usize,
        parent: BlockId,
        child: BlockId,
    },
    ChildrenOverlap {
        level: usize,
        parent: BlockId,
        a: BlockId,
        b: BlockId,
    },
    MeasureMismatch {
        level: usize,
        parent: BlockId,
        residual: Rational,
    },
    Childless {
        level: usize,
        block: BlockId,
    },
    BadParent {
        level: usize,
        block: BlockId,
    },
}

impl ValidationIssue {
    /// Level of the offending child blocks (or of the block itself).
    pub fn level(&self) -> usize {
        match self {
            Self::DimensionMismatch { .. } | Self::RootNotUnique => 0,
            Self::ChildOutsideParent { level, .. }
            | Self::ChildrenOverlap { level, .. }
            | Self::MeasureMismatch { level, .. }
            | Self::Childless { level, .. }
            | Self::BadParent { level, .. } => *level,
        }
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DimensionMismatch { block } => write!(f, "block {block} has the wrong dimension"),
            Self::RootNotUnique => write!(f, "level 0 must contain exactly the root block"),
            Self::ChildOutsideParent { parent, child, .. } => {
                write!(f, "child {child} is not contained in its parent {parent}")
            }
            Self::ChildrenOverlap { parent, a, b, .. } => {
                write!(f, "children {a} and {b} of {parent} overlap")
            }
            Self::MeasureMismatch {
                parent, residual, ..
            } => {
                write!(f, "children of {parent} miss its measure by {residual}")
            }
            Self::Childless { block, level } => {
                write!(f, "block {block} at level {level} has no children")
            }
            Self::BadParent { block, .. } => write!(f, "block {block} has an inconsistent parent"),
        }
    }
}

/// Per-level tiling residuals plus every nesting failure found.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    /// `Σ_{B ∈ B_j} |B| − |K|` for each level; zero for a valid partition.
    pub level_residuals: Vec<Rational>,
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty() && self.level_residuals.iter().all(Zero::is_zero)
    }

    pub fn into_result(self) -> Result<()> {
        if let Some(issue) = self.issues.first() {
            let level = issue.level();
            return Err(match issue {
                ValidationIssue::ChildOutsideParent { .. } | ValidationIssue::BadParent { .. } => {
                    Error::NotNested {
                        level,
                        detail: issue.to_string(),
                    }
                }
                ValidationIssue::ChildrenOverlap { .. }
                | ValidationIssue::MeasureMismatch { .. } => Error::GapOrOverlap {
                    level,
                    detail: issue.to_string(),
                },
                _ => Error::InvalidPartition(issue.to_string()),
            });
        }
        if let Some((level, r)) = self
            .level_residuals
            .iter()
            .enumerate()
            .find(|(_, r)| !r.is_zero())
        {
            return Err(Error::GapOrOverlap {
                level,
                detail: format!("measures miss |K| by {r}"),
            });
        }
        Ok(())
    }
}

fn validate_parts(
    dimension: usize,
    blocks: &[Block],
    levels: &[Vec<BlockId>],
    children: &[Vec<BlockId>],
) -> ValidationReport {
    let mut issues = Vec::new();
    let root = &blocks[0];
    if levels[0].len() != 1 || levels[0][0] != BlockId(0) {
        issues.push(ValidationIssue::RootNotUnique);
    }
    for b in blocks {
        if b.sides.len() != dimension {
            issues.push(ValidationIssue::DimensionMismatch { block: b.id });
        }
    }
    let depth = levels.len() - 1;
    let level_residuals = levels
        .iter()
        .map(|level| {
            let total = level
                .iter()
                .fold(Rational::zero(), |acc, id| acc + &blocks[id.0].measure);
            total - &root.measure
        })
        .collect();

    for (j, level) in levels.iter().enumerate() {
        for &id in level {
            let parent = &blocks[id.0];
            let kids = &children[id.0];
            if j < depth && kids.is_empty() {
                issues.push(ValidationIssue::Childless {
                    level: j,
                    block: id,
                });
                continue;
            }
            if kids.is_empty() {
                continue;
            }
            let mut sum = Rational::zero();
            for (k, &c) in kids.iter().enumerate() {
                let child = &blocks[c.0];
                if child.parent != Some(id) || child.level != j + 1 {
                    issues.push(ValidationIssue::BadParent {
                        level: j + 1,
                        block: c,
                    });
                }
                if !parent.contains(child) {
                    issues.push(ValidationIssue::ChildOutsideParent {
                        level: j + 1,
                        parent: id,
                        child: c,
                    });
                }
                for &other in &kids[k + 1..] {
                    if child.meets(&blocks[other.0]) {
                        issues.push(ValidationIssue::ChildrenOverlap {
                            level: j + 1,
                            parent: id,
                            a: c,
                            b: other,
                        });
                    }
                }
                sum += &child.measure;
            }
            if sum != parent.measure {
                issues.push(ValidationIssue::MeasureMismatch {
                    level: j + 1,
                    parent: id,
                    residual: sum - &parent.measure,
                });
            }
        }
    }
    ValidationReport {
        level_residuals,
        issues,
    }
}

/// Dyadic partition of `[0,1]^d`: level `j` holds `2^{jd}` congruent cubes.
pub fn make_dyadic_partition(dimension: usize, depth: usize) -> Result<HierarchicalPartition> {
    if dimension == 0 {
        return Err(Error::InvalidPartition(
            "dimension must be at least 1".into(),
        ));
    }
    let mut builder = PartitionBuilder::new(vec![Interval::unit(); dimension]);
    for j in 1..=depth {
        builder.start_level();
        let per_axis = 1usize << j;
        let parent_per_axis = per_axis / 2;
        let parent_ids = builder.level_ids(j - 1).to_vec();
        let count = per_axis.pow(dimension as u32);
        let den = per_axis as i64;
        for flat in 0..count {
            let mut rest = flat;
            let mut sides = Vec::with_capacity(dimension);
            let mut parent_flat = 0;
            let mut stride = 1;
            for _ in 0..dimension {
                let k = rest % per_axis;
                rest /= per_axis;
                sides.push(Interval {
                    lo: ratio(k as i64, den),
                    hi: ratio(k as i64 + 1, den),
                });
                parent_flat += (k / 2) * stride;
                stride *= parent_per_axis;
            }
            builder.add(parent_ids[parent_flat], sides);
        }
    }
    Ok(builder.build_unchecked())
}

/// Builds a one-dimensional partition of `[0,1]` from explicit interval levels.
///
/// Each level must tile `[0,1]` and each interval must sit inside exactly one
/// interval of the previous level. Intervals are reordered by position.
pub fn refine_interval_levels(levels: Vec<Vec<Interval>>) -> Result<HierarchicalPartition> {
    let Some(first) = levels.first() else {
        return Err(Error::InvalidPartition("no levels given".into()));
    };
    if first.len() != 1 || first[0] != Interval::unit() {
        return Err(Error::GapOrOverlap {
            level: 0,
            detail: "level 0 must be exactly [0,1]".into(),
        });
    }
    let mut builder = PartitionBuilder::new(vec![Interval::unit()]);
    let mut previous: Vec<(Interval, BlockId)> = vec![(Interval::unit(), BlockId(0))];
    for (j, level) in levels.into_iter().enumerate().skip(1) {
        let mut sorted = level;
        sorted.sort_by(|a, b| a.lo.cmp(&b.lo));
        check_tiles_unit(j, &sorted)?;
        builder.start_level();
        let mut current = Vec::with_capacity(sorted.len());
        for interval in sorted {
            let parent = previous
                .iter()
                .find(|(p, _)| p.contains(&interval))
                .map(|(_, id)| *id)
                .ok_or_else(|| Error::NotNested {
                    level: j,
                    detail: format!("{interval} straddles intervals of level {}", j - 1),
                })?;
            let id = builder.add(parent, vec![interval.clone()]);
            current.push((interval, id));
        }
        previous = current;
    }
    builder.build()
}

fn check_tiles_unit(level: usize, sorted: &[Interval]) -> Result<()> {
    let mut cursor = Rational::zero();
    for interval in sorted {
        if interval.lo != cursor {
            let kind = if interval.lo > cursor {
                "gap"
            } else {
                "overlap"
            };
            return Err(Error::GapOrOverlap {
                level,
                detail: format!("{kind} at {cursor} before {interval}"),
            });
        }
        cursor = interval.hi.clone();
    }
    if cursor != Rational::one() {
        return Err(Error::GapOrOverlap {
            level,
            detail: format!("level ends at {cursor}"),
        });
    }
    Ok(())
}

/// `B_j := I^x_j ⊗ I^y_j` for two one-dimensional partitions of equal depth.
pub fn tensor_partitions(
    px: &HierarchicalPartition,
    py: &HierarchicalPartition,
) -> Result<HierarchicalPartition> {
    tensor_product(&[px, py])
}

/// Level-wise tensor product of any number of partitions of equal depth.
///
/// Level `j` of the result enumerates the products on the grid of the factor
/// levels with the first factor varying fastest.
pub fn tensor_product(factors: &[&HierarchicalPartition]) -> Result<HierarchicalPartition> {
    let Some(first) = factors.first() else {
        return Err(Error::InvalidPartition(
            "tensor product of no factors".into(),
        ));
    };
    let depth = first.depth();
    if let Some(f) = factors.iter().find(|f| f.depth() != depth) {
        return Err(Error::DepthMismatch {
            left: depth,
            right: f.depth(),
        });
    }
    let root_sides = factors
        .iter()
        .flat_map(|f| f.root().sides().iter().cloned())
        .collect();
    let mut builder = PartitionBuilder::new(root_sides);
    for j in 1..=depth {
        builder.start_level();
        let shape: Vec<usize> = factors.iter().map(|f| f.level(j).len()).collect();
        let parent_shape: Vec<usize> = factors.iter().map(|f| f.level(j - 1).len()).collect();
        // position of each factor block within its level
        let parent_pos: Vec<BTreeMap<BlockId, usize>> = factors
            .iter()
            .map(|f| {
                f.level(j - 1)
                    .iter()
                    .enumerate()
                    .map(|(i, &id)| (id, i))
                    .collect()
            })
            .collect();
        let parent_ids = builder.level_ids(j - 1).to_vec();
        let count: usize = shape.iter().product();
        for flat in 0..count {
            let mut rest = flat;
            let mut sides = Vec::new();
            let mut parent_flat = 0;
            let mut stride = 1;
            for (s, factor) in factors.iter().enumerate() {
                let k = rest % shape[s];
                rest /= shape[s];
                let block = factor.block(factor.level(j)[k]);
                sides.extend(block.sides().iter().cloned());
                let p = block.parent().expect("non-root block has a parent");
                parent_flat += parent_pos[s][&p] * stride;
                stride *= parent_shape[s];
            }
            builder.add(parent_ids[parent_flat], sides);
        }
    }
    builder.build()
}

// ---------------------------------------------------------------------------
// JSON form

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
enum BigIntRepr {
    Small(i64),
    Big(String),
}

impl BigIntRepr {
    fn from_bigint(v: &BigInt) -> Self {
        v.to_i64()
            .map(Self::Small)
            .unwrap_or_else(|| Self::Big(v.to_string()))
    }

    fn to_bigint(&self) -> Result<BigInt> {
        match self {
            Self::Small(v) => Ok(BigInt::from(*v)),
            Self::Big(s) => s
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct BlockJson {
    id: usize,
    sides: Vec<[BigIntRepr; 4]>,
}

/// Serialized partition: `{dimension, depth, blocks, children}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionJson {
    dimension: usize,
    depth: usize,
    blocks: Vec<BlockJson>,
    children: BTreeMap<String, Vec<usize>>,
}

impl From<&HierarchicalPartition> for PartitionJson {
    fn from(p: &HierarchicalPartition) -> Self {
        let blocks = p
            .blocks
            .iter()
            .map(|b| BlockJson {
                id: b.id.0,
                sides: b
                    .sides
                    .iter()
                    .map(|s| {
                        [
                            BigIntRepr::from_bigint(s.lo.numer()),
                            BigIntRepr::from_bigint(s.lo.denom()),
                            BigIntRepr::from_bigint(s.hi.numer()),
                            BigIntRepr::from_bigint(s.hi.denom()),
                        ]
                    })
                    .collect(),
            })
            .collect();
        let children = p
            .children
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_empty())
            .map(|(i, c)| (i.to_string(), c.iter().map(|id| id.0).collect()))
            .collect();
        Self {
            dimension: p.dimension,
            depth: p.depth(),
            blocks,
            children,
        }
    }
}

impl PartitionJson {
    /// Rebuilds and validates the partition.
    pub fn into_partition(self) -> Result<HierarchicalPartition> {
        let n = self.blocks.len();
        if n == 0 {
            return Err(Error::Parse("partition has no blocks".into()));
        }
        let mut sides: Vec<Option<Vec<Interval>>> = vec![None; n];
        for b in self.blocks {
            if b.id >= n || sides[b.id].is_some() {
                return Err(Error::Parse(format!(
                    "block ids must be 0..{n} without repeats (got {})",
                    b.id
                )));
            }
            let mut s = Vec::with_capacity(b.sides.len());
            for [ln, ld, hn, hd] in &b.sides {
                let (ld, hd) = (ld.to_bigint()?, hd.to_bigint()?);
                if ld.is_zero() || hd.is_zero() || ld.is_negative() || hd.is_negative() {
                    return Err(Error::Parse("denominators must be positive".into()));
                }
                s.push(Interval::new(
                    Rational::new(ln.to_bigint()?, ld),
                    Rational::new(hn.to_bigint()?, hd),
                )?);
            }
            sides[b.id] = Some(s);
        }
        let sides: Vec<Vec<Interval>> = sides.into_iter().map(|s| s.unwrap_or_default()).collect();

        let mut children = vec![Vec::new(); n];
        let mut parent = vec![None; n];
        for (key, kids) in self.children {
            let p: usize = key
                .parse()
                .map_err(|_| Error::Parse(format!("bad parent id {key:?}")))?;
            if p >= n {
                return Err(Error::Parse(format!("unknown parent id {p}")));
            }
            for &c in &kids {
                if c >= n || c == 0 || parent[c].is_some() {
                    return Err(Error::Parse(format!(
                        "child id {c} is invalid or has two parents"
                    )));
                }
                parent[c] = Some(BlockId(p));
            }
            children[p] = kids.into_iter().map(BlockId).collect();
        }

        // levels by breadth-first descent from the root, ids ascending within a level
        let mut level_of = vec![usize::MAX; n];
        level_of[0] = 0;
        let mut levels: Vec<Vec<BlockId>> = vec![vec![BlockId(0)]];
        loop {
            let mut next: Vec<BlockId> = levels
                .last()
                .unwrap()
                .iter()
                .flat_map(|id| children[id.0].iter().copied())
                .collect();
            if next.is_empty() {
                break;
            }
            next.sort();
            for id in &next {
                level_of[id.0] = levels.len();
            }
            levels.push(next);
        }
        if level_of.contains(&usize::MAX) {
            return Err(Error::Parse(
                "some blocks are unreachable from the root".into(),
            ));
        }
        if levels.len() - 1 != self.depth {
            return Err(Error::Parse(format!(
                "declared depth {} but tree has depth {}",
                self.depth,
                levels.len() - 1
            )));
        }

        let blocks: Vec<Block> = sides
            .into_iter()
            .enumerate()
            .map(|(i, s)| Block::new(BlockId(i), level_of[i], parent[i], s))
            .collect();
        validate_parts(self.dimension, &blocks, &levels, &children).into_result()?;
        Ok(HierarchicalPartition::assemble(
            self.dimension,
            blocks,
            levels,
            children,
        ))
    }
}
