//! Increasing block subalgebras of the matrix algebra and their
//! trace-preserving conditional expectations.
//!
//! A subalgebra is specified by a partition of the index set into blocks,
//! each tagged `Full` (the whole matrix algebra on that block) or `Scalar`
//! (scalar multiples of the identity on that block). Every conditional
//! expectation is then an explicit pinching/averaging map, which makes the
//! trace-preservation, positivity and module properties exact by
//! construction.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, GeneralMatrix, HermitianMatrix, PositiveOperator};

#[derive(Debug, Error)]
pub enum FiltrationError {
    #[error("blocks do not partition 0..{dim}: {reason}")]
    BadPartition { dim: usize, reason: String },

    #[error("tower is not increasing at step {step}: {reason}")]
    NotIncreasing { step: usize, reason: String },

    #[error("bad dimension for preset: {reason}")]
    BadDimension { reason: String },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("sequence length {xs} does not match tower length {tower}")]
    LengthMismatch { xs: usize, tower: usize },

    #[error("empty tower")]
    EmptyTower,

    #[error("malformed tower JSON: {0}")]
    BadTowerJson(String),

    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Tag deciding which algebra a block carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockTag {
    #[serde(rename = "FULL")]
    Full,
    #[serde(rename = "SCALAR")]
    Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    indices: Vec<usize>, // sorted ascending
    tag: BlockTag,
}

impl Block {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn tag(&self) -> BlockTag {
        self.tag
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    fn is_subset_of(&self, other: &Block) -> bool {
        self.indices.iter().all(|i| other.indices.binary_search(i).is_ok())
    }
}

/// Block partition of `{0..dim-1}` with per-block tags. Canonical form:
/// indices sorted within each block, blocks ordered by smallest index, so
/// equality of specs is decidable by `==`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubalgebraSpec {
    dim: usize,
    blocks: Vec<Block>,
}

impl SubalgebraSpec {
    pub fn new(
        dim: usize,
        blocks: Vec<(Vec<usize>, BlockTag)>,
    ) -> Result<Self, FiltrationError> {
        if dim == 0 {
            return Err(FiltrationError::BadPartition {
                dim,
                reason: "dimension must be positive".into(),
            });
        }
        let mut seen = vec![false; dim];
        let mut canonical = Vec::with_capacity(blocks.len());
        for (mut indices, tag) in blocks {
            if indices.is_empty() {
                return Err(FiltrationError::BadPartition {
                    dim,
                    reason: "empty block".into(),
                });
            }
            indices.sort_unstable();
            for &i in &indices {
                if i >= dim {
                    return Err(FiltrationError::BadPartition {
                        dim,
                        reason: format!("index {i} out of range"),
                    });
                }
                if seen[i] {
                    return Err(FiltrationError::BadPartition {
                        dim,
                        reason: format!("index {i} appears twice"),
                    });
                }
                seen[i] = true;
            }
            indices.dedup();
            canonical.push(Block { indices, tag });
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(FiltrationError::BadPartition {
                dim,
                reason: format!("index {missing} not covered"),
            });
        }
        canonical.sort_by_key(|b| b.indices[0]);
        Ok(Self { dim, blocks: canonical })
    }

    /// The trivial subalgebra: scalar multiples of the identity.
    pub fn trivial(dim: usize) -> Self {
        Self::new(dim, vec![((0..dim).collect(), BlockTag::Scalar)]).expect("valid")
    }

    /// The full matrix algebra.
    pub fn full(dim: usize) -> Self {
        Self::new(dim, vec![((0..dim).collect(), BlockTag::Full)]).expect("valid")
    }

    /// The diagonal subalgebra (all singleton scalar blocks).
    pub fn diagonal(dim: usize) -> Self {
        Self::new(dim, (0..dim).map(|i| (vec![i], BlockTag::Scalar)).collect()).expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// True when every element of this subalgebra lies in `other`, in the
    /// conservative block sense used by tower validation: a `Full` block must
    /// be contained in a `Full` block of `other`; a `Scalar` block must be a
    /// union of blocks of `other` or lie inside a `Full` block of `other`.
    pub fn contained_in(&self, other: &SubalgebraSpec) -> Result<(), String> {
        if self.dim != other.dim {
            return Err(format!("dimension mismatch {} vs {}", self.dim, other.dim));
        }
        for block in &self.blocks {
            match block.tag {
                BlockTag::Full => {
                    let ok = other
                        .blocks
                        .iter()
                        .any(|o| o.tag == BlockTag::Full && block.is_subset_of(o));
                    if !ok {
                        return Err(format!(
                            "FULL block starting at {} is not inside a FULL block of the next spec",
                            block.indices[0]
                        ));
                    }
                }
                BlockTag::Scalar => {
                    let inside_full = other
                        .blocks
                        .iter()
                        .any(|o| o.tag == BlockTag::Full && block.is_subset_of(o));
                    if inside_full {
                        continue;
                    }
                    // Union condition: every block of `other` meeting this
                    // block must be wholly contained in it.
                    let union_ok = other.blocks.iter().all(|o| {
                        let meets = o.indices.iter().any(|i| block.indices.binary_search(i).is_ok());
                        !meets || o.is_subset_of(block)
                    });
                    if !union_ok {
                        return Err(format!(
                            "SCALAR block starting at {} is neither a union of next-spec blocks nor inside a FULL block",
                            block.indices[0]
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// An increasing chain of subalgebra specs sharing one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower {
    specs: Vec<SubalgebraSpec>,
    dim: usize,
}

impl Tower {
    pub fn specs(&self) -> &[SubalgebraSpec] {
        &self.specs
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn spec(&self, k: usize) -> &SubalgebraSpec {
        &self.specs[k]
    }
}

/// Checks the increasing-chain invariant and returns the validated tower.
/// `NotIncreasing(k)` names the first offending step (the transition from
/// spec `k-1` to spec `k`).
pub fn validate_tower(specs: Vec<SubalgebraSpec>) -> Result<Tower, FiltrationError> {
    let first = specs.first().ok_or(FiltrationError::EmptyTower)?;
    let dim = first.dim();
    for s in &specs {
        if s.dim() != dim {
            return Err(FiltrationError::DimensionMismatch { left: dim, right: s.dim() });
        }
    }
    for k in 1..specs.len() {
        specs[k - 1]
            .contained_in(&specs[k])
            .map_err(|reason| FiltrationError::NotIncreasing { step: k, reason })?;
    }
    Ok(Tower { specs, dim })
}

/// Conditional expectation onto the subalgebra, extended entrywise to
/// general (non-Hermitian) arguments: entries crossing distinct blocks are
/// zeroed, `Full` blocks are kept verbatim, and each `Scalar` block is
/// replaced by its normalized partial trace times the identity.
pub fn cond_exp_general(
    spec: &SubalgebraSpec,
    x: &GeneralMatrix,
) -> Result<GeneralMatrix, FiltrationError> {
    if spec.dim() != x.dim() {
        return Err(FiltrationError::DimensionMismatch { left: spec.dim(), right: x.dim() });
    }
    let d = spec.dim();
    let mut out = GeneralMatrix::zero(d);
    for block in &spec.blocks {
        match block.tag {
            BlockTag::Full => {
                for &i in &block.indices {
                    for &j in &block.indices {
                        out.set(i, j, x.get(i, j));
                    }
                }
            }
            BlockTag::Scalar => {
                let trace: Complex64 = block.indices.iter().map(|&i| x.get(i, i)).sum();
                let avg = trace.scale(1.0 / block.len() as f64);
                for &i in &block.indices {
                    out.set(i, i, avg);
                }
            }
        }
    }
    Ok(out)
}

/// Conditional expectation of a Hermitian argument; the block rule preserves
/// Hermitian symmetry exactly.
pub fn cond_exp(
    spec: &SubalgebraSpec,
    x: &HermitianMatrix,
) -> Result<HermitianMatrix, FiltrationError> {
    Ok(HermitianMatrix::symmetrized(&cond_exp_general(spec, x.as_general())?))
}

/// Conditional expectation of a certified-positive argument. Pinching and
/// averaging are positive maps, so the certificate is re-established on the
/// output.
pub fn cond_exp_pos(
    spec: &SubalgebraSpec,
    x: &PositiveOperator,
) -> Result<PositiveOperator, FiltrationError> {
    Ok(PositiveOperator::new(cond_exp(spec, x.matrix())?)?)
}

/// Canonical preset towers.
#[derive(Debug, Clone)]
pub enum TowerPreset {
    /// Classical dyadic filtration on the diagonal: scalar blocks halving at
    /// each step, ending in singletons. Requires `dim = 2^levels` and yields
    /// `levels + 1` specs (including the trivial algebra).
    DyadicScalar { levels: u32 },
    /// Increasing full-block algebras: one spec per size profile, blocks
    /// contiguous; consecutive profiles must coarsen.
    PinchCoarsen { level_sizes: Vec<Vec<usize>> },
    /// Explicit specs, validated as-is.
    Custom(Vec<SubalgebraSpec>),
}

pub fn preset_tower(preset: TowerPreset, dim: usize) -> Result<Tower, FiltrationError> {
    match preset {
        TowerPreset::DyadicScalar { levels } => {
            let expected = 1usize
                .checked_shl(levels)
                .ok_or_else(|| FiltrationError::BadDimension { reason: "levels too large".into() })?;
            if dim != expected {
                return Err(FiltrationError::BadDimension {
                    reason: format!("dyadic_scalar needs dim = 2^levels, got dim {dim}, levels {levels}"),
                });
            }
            let mut specs = Vec::with_capacity(levels as usize + 1);
            for level in 0..=levels {
                let blocks = 1usize << level;
                let size = dim / blocks;
                let spec = SubalgebraSpec::new(
                    dim,
                    (0..blocks)
                        .map(|b| ((b * size..(b + 1) * size).collect(), BlockTag::Scalar))
                        .collect(),
                )?;
                specs.push(spec);
            }
            validate_tower(specs)
        }
        TowerPreset::PinchCoarsen { level_sizes } => {
            let mut specs = Vec::with_capacity(level_sizes.len());
            for sizes in &level_sizes {
                if sizes.iter().sum::<usize>() != dim {
                    return Err(FiltrationError::BadDimension {
                        reason: format!("block sizes {sizes:?} do not sum to dim {dim}"),
                    });
                }
                let mut start = 0usize;
                let mut blocks = Vec::with_capacity(sizes.len());
                for &s in sizes {
                    blocks.push(((start..start + s).collect(), BlockTag::Full));
                    start += s;
                }
                specs.push(SubalgebraSpec::new(dim, blocks)?);
            }
            validate_tower(specs)
        }
        TowerPreset::Custom(specs) => validate_tower(specs),
    }
}

/// Which preset family a randomized tower is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TowerFamily {
    DyadicScalar,
    PinchCoarsen,
    Mixed,
}

impl TowerFamily {
    pub const ALL: [TowerFamily; 3] = [
        TowerFamily::DyadicScalar,
        TowerFamily::PinchCoarsen,
        TowerFamily::Mixed,
    ];

    /// Canonical sampling weights for the three families.
    pub fn weight(self) -> f64 {
        match self {
            TowerFamily::DyadicScalar => 0.4,
            TowerFamily::PinchCoarsen => 0.4,
            TowerFamily::Mixed => 0.2,
        }
    }
}

/// Splits a random block with at least two indices; returns false when all
/// blocks are singletons.
fn split_random_block(blocks: &mut Vec<Vec<usize>>, rng: &mut ChaCha8Rng) -> bool {
    let candidates: Vec<usize> =
        (0..blocks.len()).filter(|&b| blocks[b].len() >= 2).collect();
    if candidates.is_empty() {
        return false;
    }
    let b = candidates[rng.random_range(0..candidates.len())];
    let cut = rng.random_range(1..blocks[b].len());
    let tail = blocks[b].split_off(cut);
    blocks.push(tail);
    true
}

/// Random tower of length `n` over `dim`, drawn from the given families
/// (weights renormalized from the canonical 0.4 / 0.4 / 0.2).
pub fn random_tower(
    dim: usize,
    n: usize,
    families: &[TowerFamily],
    rng: &mut ChaCha8Rng,
) -> Result<Tower, FiltrationError> {
    if n == 0 {
        return Err(FiltrationError::EmptyTower);
    }
    let families = if families.is_empty() { &TowerFamily::ALL[..] } else { families };
    let total: f64 = families.iter().map(|f| f.weight()).sum();
    let mut draw = rng.random_range(0.0..total);
    let mut family = families[families.len() - 1];
    for &f in families {
        if draw < f.weight() {
            family = f;
            break;
        }
        draw -= f.weight();
    }

    let specs = match family {
        TowerFamily::DyadicScalar => scalar_chain(dim, n, rng)?,
        TowerFamily::PinchCoarsen => full_chain(dim, n, rng)?,
        TowerFamily::Mixed => mixed_chain(dim, n, rng)?,
    };
    validate_tower(specs)
}

/// Refining chain of scalar partitions (trivial algebra towards the
/// diagonal), subsampled to length `n`.
fn scalar_chain(
    dim: usize,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<SubalgebraSpec>, FiltrationError> {
    let mut chain: Vec<Vec<Vec<usize>>> = vec![vec![(0..dim).collect()]];
    let mut blocks: Vec<Vec<usize>> = vec![(0..dim).collect()];
    while split_random_block(&mut blocks, rng) {
        chain.push(blocks.clone());
    }
    let picks = sorted_positions(chain.len(), n, rng);
    picks
        .into_iter()
        .map(|i| {
            SubalgebraSpec::new(
                dim,
                chain[i].iter().map(|b| (b.clone(), BlockTag::Scalar)).collect(),
            )
        })
        .collect()
}

/// Coarsening chain of full-block partitions (diagonal-as-full towards the
/// whole algebra), subsampled to length `n`.
fn full_chain(
    dim: usize,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<SubalgebraSpec>, FiltrationError> {
    let mut blocks: Vec<Vec<usize>> = (0..dim).map(|i| vec![i]).collect();
    let mut chain = vec![blocks.clone()];
    while blocks.len() > 1 {
        let a = rng.random_range(0..blocks.len());
        let mut b = rng.random_range(0..blocks.len() - 1);
        if b >= a {
            b += 1;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let merged = blocks.remove(hi);
        blocks[lo].extend(merged);
        blocks[lo].sort_unstable();
        chain.push(blocks.clone());
    }
    let picks = sorted_positions(chain.len(), n, rng);
    picks
        .into_iter()
        .map(|i| {
            SubalgebraSpec::new(
                dim,
                chain[i].iter().map(|b| (b.clone(), BlockTag::Full)).collect(),
            )
        })
        .collect()
}

/// Chain mixing scalar refinements, promotions to full blocks and full-block
/// merges. A single move always yields a valid transition, but composing two
/// moves inside one step can break the conservative containment rule (e.g.
/// splitting a scalar block and absorbing one half into a full block), so
/// every composite is checked against the previous spec and reverted if it
/// does not validate.
fn mixed_chain(
    dim: usize,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<SubalgebraSpec>, FiltrationError> {
    let mut blocks: Vec<(Vec<usize>, BlockTag)> = vec![((0..dim).collect(), BlockTag::Scalar)];
    let mut specs = Vec::with_capacity(n);
    specs.push(SubalgebraSpec::new(dim, blocks.clone())?);
    while specs.len() < n {
        let moves = rng.random_range(0..=2usize);
        let prev = specs.last().expect("nonempty").clone();
        for _ in 0..moves {
            let mut trial = blocks.clone();
            apply_mixed_move(&mut trial, rng);
            let trial_spec = SubalgebraSpec::new(dim, trial.clone())?;
            if prev.contained_in(&trial_spec).is_ok() {
                blocks = trial;
            }
        }
        specs.push(SubalgebraSpec::new(dim, blocks.clone())?);
    }
    Ok(specs)
}

fn apply_mixed_move(blocks: &mut Vec<(Vec<usize>, BlockTag)>, rng: &mut ChaCha8Rng) {
    match rng.random_range(0..4u8) {
        // Split a scalar block.
        0 => {
            let cands: Vec<usize> = (0..blocks.len())
                .filter(|&b| blocks[b].1 == BlockTag::Scalar && blocks[b].0.len() >= 2)
                .collect();
            if !cands.is_empty() {
                let b = cands[rng.random_range(0..cands.len())];
                let cut = rng.random_range(1..blocks[b].0.len());
                let tail = blocks[b].0.split_off(cut);
                blocks.push((tail, BlockTag::Scalar));
            }
        }
        // Promote a scalar block to full.
        1 => {
            let cands: Vec<usize> = (0..blocks.len())
                .filter(|&b| blocks[b].1 == BlockTag::Scalar)
                .collect();
            if !cands.is_empty() {
                let b = cands[rng.random_range(0..cands.len())];
                blocks[b].1 = BlockTag::Full;
            }
        }
        // Merge two full blocks.
        2 => {
            let cands: Vec<usize> = (0..blocks.len())
                .filter(|&b| blocks[b].1 == BlockTag::Full)
                .collect();
            if cands.len() >= 2 {
                let i = rng.random_range(0..cands.len());
                let mut j = rng.random_range(0..cands.len() - 1);
                if j >= i {
                    j += 1;
                }
                let (lo, hi) = (cands[i].min(cands[j]), cands[i].max(cands[j]));
                let merged = blocks.remove(hi);
                blocks[lo].0.extend(merged.0);
                blocks[lo].0.sort_unstable();
            }
        }
        // Absorb a scalar block into a full block.
        _ => {
            let scalars: Vec<usize> = (0..blocks.len())
                .filter(|&b| blocks[b].1 == BlockTag::Scalar)
                .collect();
            let fulls: Vec<usize> = (0..blocks.len())
                .filter(|&b| blocks[b].1 == BlockTag::Full)
                .collect();
            if !scalars.is_empty() && !fulls.is_empty() {
                let s = scalars[rng.random_range(0..scalars.len())];
                let f = fulls[rng.random_range(0..fulls.len())];
                let (lo, hi) = (s.min(f), s.max(f));
                let merged = blocks.remove(hi);
                blocks[lo].0.extend(merged.0);
                blocks[lo].0.sort_unstable();
                blocks[lo].1 = BlockTag::Full;
            }
        }
    }
}

/// `n` sorted draws from `0..len` (with repetition), always including a
/// non-decreasing order so repeated specs encode a stalled filtration step.
fn sorted_positions(len: usize, n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut picks: Vec<usize> = (0..n).map(|_| rng.random_range(0..len)).collect();
    picks.sort_unstable();
    picks
}

/// Sequence of certified-positive operators matched to a tower step count.
#[derive(Debug, Clone)]
pub struct OperatorSequence {
    xs: Vec<PositiveOperator>,
    dim: usize,
}

impl OperatorSequence {
    pub fn new(xs: Vec<PositiveOperator>) -> Result<Self, FiltrationError> {
        let first = xs.first().ok_or(FiltrationError::EmptyTower)?;
        let dim = first.dim();
        for x in &xs {
            if x.dim() != dim {
                return Err(FiltrationError::DimensionMismatch { left: dim, right: x.dim() });
            }
        }
        Ok(Self { xs, dim })
    }

    pub fn xs(&self) -> &[PositiveOperator] {
        &self.xs
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn check_against(&self, tower: &Tower) -> Result<(), FiltrationError> {
        if self.len() != tower.len() {
            return Err(FiltrationError::LengthMismatch { xs: self.len(), tower: tower.len() });
        }
        if self.dim != tower.dim() {
            return Err(FiltrationError::DimensionMismatch { left: self.dim, right: tower.dim() });
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    blocks: Vec<Vec<usize>>,
    tags: Vec<BlockTag>,
}

/// Tower file format: JSON list of specs, each
/// `{"blocks": [[indices...]...], "tags": ["FULL"|"SCALAR"...]}`.
pub fn tower_to_json(tower: &Tower) -> String {
    let specs: Vec<SpecJson> = tower
        .specs()
        .iter()
        .map(|s| SpecJson {
            blocks: s.blocks().iter().map(|b| b.indices().to_vec()).collect(),
            tags: s.blocks().iter().map(|b| b.tag()).collect(),
        })
        .collect();
    serde_json::to_string(&specs).expect("plain data serializes")
}

pub fn tower_from_json(text: &str) -> Result<Tower, FiltrationError> {
    let specs: Vec<SpecJson> =
        serde_json::from_str(text).map_err(|e| FiltrationError::BadTowerJson(e.to_string()))?;
    let mut out = Vec::with_capacity(specs.len());
    for s in specs {
        if s.blocks.len() != s.tags.len() {
            return Err(FiltrationError::BadTowerJson(
                "blocks and tags have different lengths".into(),
            ));
        }
        let dim: usize = s.blocks.iter().map(|b| b.len()).sum();
        out.push(SubalgebraSpec::new(
            dim,
            s.blocks.into_iter().zip(s.tags).collect(),
        )?);
    }
    validate_tower(out)
}
