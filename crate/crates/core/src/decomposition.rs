//! Independent decompositions of the reaction set.

use crate::error::Result;
use crate::kinetics::{rate_vector, PowerLawKinetics};
use crate::linalg::{nullspace, SubspaceBasis};
use crate::network::ReactionNetwork;
use crate::rational::{to_f64, Q};
use num_traits::Zero;
use petgraph::unionfind::UnionFind;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// Reaction indices per block, ascending; blocks ordered by smallest member.
    pub blocks: Vec<Vec<usize>>,
    pub subspaces: Vec<SubspaceBasis>,
    pub independent: bool,
}

fn block_subspace(net: &ReactionNetwork, block: &[usize]) -> SubspaceBasis {
    let vecs: Vec<Vec<Q>> = block.iter().map(|&i| net.reaction_vector(i)).collect();
    SubspaceBasis::span(net.m(), &vecs)
}

/// Whether S is the direct sum of the block subspaces.
pub fn is_independent(net: &ReactionNetwork, partition: &[Vec<usize>]) -> bool {
    let s = crate::network::stoichiometric_subspace(net).dimension();
    let total: usize = partition.iter().map(|b| block_subspace(net, b).dimension()).sum();
    total == s
}

/// Reactions sharing support in some kernel basis vector are merged.
pub fn finest_independent_decomposition(net: &ReactionNetwork) -> Decomposition {
    let r = net.r();
    let kernel = nullspace(&net.stoichiometric_matrix(), r);
    let mut uf = UnionFind::new(r);
    for v in &kernel {
        let supp: Vec<usize> = (0..r).filter(|&i| !v[i].is_zero()).collect();
        for w in supp.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..r {
        let root = uf.find(i);
        match roots.iter().position(|&x| x == root) {
            Some(p) => blocks[p].push(i),
            None => {
                roots.push(root);
                blocks.push(vec![i]);
            }
        }
    }
    let subspaces = blocks.iter().map(|b| block_subspace(net, b)).collect();
    let independent = is_independent(net, &blocks);
    Decomposition { blocks, subspaces, independent }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockResidual {
    pub block: Vec<usize>,
    /// max |N_b K_b(x)| / max(1, max |K_b(x)|)
    pub residual: f64,
}

pub const EQUILIBRIUM_TOLERANCE: f64 = 1e-9;

/// Species-formation residual of each block at x.
pub fn verify_equilibria_intersection(kin: &PowerLawKinetics, partition: &[Vec<usize>], x: &[f64]) -> Result<Vec<BlockResidual>> {
    let rates = rate_vector(kin, x)?;
    let net = kin.network();
    let vecs: Vec<Vec<f64>> = (0..net.r()).map(|i| net.reaction_vector(i).iter().map(to_f64).collect()).collect();
    Ok(partition
        .iter()
        .map(|block| {
            let mut f = vec![0.0; net.m()];
            let mut scale: f64 = 1.0;
            for &i in block {
                scale = scale.max(rates[i].abs());
                for (fj, vj) in f.iter_mut().zip(&vecs[i]) {
                    *fj += vj * rates[i];
                }
            }
            let res = f.iter().fold(0.0f64, |a, v| a.max(v.abs())) / scale;
            BlockResidual { block: block.clone(), residual: res }
        })
        .collect())
}

pub fn all_blocks_at_equilibrium(res: &[BlockResidual]) -> bool {
    res.iter().all(|b| b.residual < EQUILIBRIUM_TOLERANCE)
}
