//! Block theory for kG: the Cartan matrix of the projective
//! indecomposables, the partition of the simples into blocks through Cartan
//! linkage, and defect-zero detection.

use crate::error::{Error, Result};
use crate::rep::covers::AlgebraCtx;
use crate::rep::{meataxe, Module};

/// The partition of the simple modules into blocks. Block 0 is the
/// principal block (the one containing the trivial module); the remaining
/// blocks are ordered by their smallest simple index.
#[derive(Debug, Clone)]
pub struct BlockPartition {
    /// Cartan matrix: entry (i, j) is the multiplicity of simple j as a
    /// composition factor of the projective cover of simple i.
    pub cartan: Vec<Vec<usize>>,
    /// simple indices of each block, sorted
    pub blocks: Vec<Vec<usize>>,
    /// block index of each simple
    pub block_of_simple: Vec<usize>,
    /// whether each block has defect zero (every module in it projective)
    pub defect_zero: Vec<bool>,
}

impl BlockPartition {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, simple_idx: usize) -> usize {
        self.block_of_simple[simple_idx]
    }

    pub fn positive_defect_blocks(&self) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&b| !self.defect_zero[b])
            .collect()
    }
}

/// Multiplicity of each simple among the composition factors of `m`.
pub fn factor_multiplicities(ctx: &AlgebraCtx, m: &Module) -> Result<Vec<usize>> {
    let simples = ctx.simples()?.to_vec();
    let factors = meataxe::composition_factors(m, &mut *ctx.rng())?;
    let mut counts = vec![0usize; simples.len()];
    for f in factors {
        let mut matched = false;
        for (i, s) in simples.iter().enumerate() {
            if meataxe::simple_isomorphic(&f, s)? {
                counts[i] += 1;
                matched = true;
                break;
            }
        }
        if !matched {
            return Err(Error::Invariant(
                "composition factor matches no simple module".into(),
            ));
        }
    }
    Ok(counts)
}

pub fn cartan_matrix(ctx: &AlgebraCtx) -> Result<Vec<Vec<usize>>> {
    let pims = ctx.pims()?.to_vec();
    pims.iter().map(|p| factor_multiplicities(ctx, p)).collect()
}

/// Index of the simple isomorphic to the trivial module.
pub fn trivial_simple_index(ctx: &AlgebraCtx) -> Result<usize> {
    let triv = Module::trivial(ctx.group().clone(), ctx.field().clone());
    for (i, s) in ctx.simples()?.iter().enumerate() {
        if meataxe::simple_isomorphic(&triv, s)? {
            return Ok(i);
        }
    }
    Err(Error::Invariant("no simple is trivial".into()))
}

/// Partitions the simples into blocks: connected components of the graph
/// linking i and j when the Cartan matrix couples them.
pub fn block_partition(ctx: &AlgebraCtx) -> Result<BlockPartition> {
    let cartan = cartan_matrix(ctx)?;
    let n = cartan.len();
    // union-find over simples
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in 0..n {
            if cartan[i][j] != 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut blocks: Vec<Vec<usize>> = groups.into_values().collect();
    blocks.sort_by_key(|b| b[0]);
    // principal block first
    let t = trivial_simple_index(ctx)?;
    if let Some(pos) = blocks.iter().position(|b| b.contains(&t)) {
        blocks.swap(0, pos);
    }
    let mut block_of_simple = vec![0usize; n];
    for (bi, b) in blocks.iter().enumerate() {
        for &s in b {
            block_of_simple[s] = bi;
        }
    }
    // defect zero exactly when every projective indecomposable in the block
    // is simple
    let simples = ctx.simples()?;
    let pims = ctx.pims()?;
    let defect_zero = blocks
        .iter()
        .map(|b| b.iter().all(|&s| pims[s].dim() == simples[s].dim()))
        .collect();
    Ok(BlockPartition {
        cartan,
        blocks,
        block_of_simple,
        defect_zero,
    })
}
