//! Reaction networks and their structural indices.

use crate::error::{Error, Result};
use crate::linalg::{self, nullspace, rank, SubspaceBasis};
use crate::lp::{realizable_sign_patterns, LinearSystem, Relation};
use crate::rational::{format_rational, primitive, Q};
use num_traits::{One, Signed, Zero};
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::unionfind::UnionFind;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reaction {
    pub label: String,
    pub reactant: usize,
    pub product: usize,
}

/// Species, complexes and directed reactions. Immutable once built; graph
/// structure (linkage classes, strong components) is computed at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReactionNetwork {
    name: String,
    species: Vec<String>,
    complexes: Vec<Vec<Q>>,
    reactions: Vec<Reaction>,
    linkage: Vec<Vec<usize>>,
    strong: Vec<Vec<usize>>,
    terminal: Vec<bool>,
    scc_of: Vec<usize>,
    lc_of: Vec<usize>,
}

impl ReactionNetwork {
    pub fn new(species: Vec<String>, complexes: Vec<Vec<Q>>, reactions: Vec<Reaction>) -> Result<Self> {
        let m = species.len();
        let mut seen = BTreeSet::new();
        for s in &species {
            if s.is_empty() {
                return Err(Error::InvalidNetwork("empty species name".into()));
            }
            if !seen.insert(s.as_str()) {
                return Err(Error::InvalidNetwork(format!("duplicate species {s}")));
            }
        }
        for (i, c) in complexes.iter().enumerate() {
            if c.len() != m {
                return Err(Error::InvalidNetwork(format!("complex {i} has {} coordinates, expected {m}", c.len())));
            }
            if c.iter().any(|x| x.is_negative()) {
                return Err(Error::InvalidNetwork(format!("complex {i} has a negative coefficient")));
            }
            if complexes[..i].contains(c) {
                return Err(Error::InvalidNetwork(format!("complex {i} is listed twice")));
            }
        }
        let mut labels = BTreeSet::new();
        let mut used = vec![false; complexes.len()];
        for r in &reactions {
            if !labels.insert(r.label.as_str()) {
                return Err(Error::InvalidNetwork(format!("duplicate reaction label {}", r.label)));
            }
            if r.reactant >= complexes.len() || r.product >= complexes.len() {
                return Err(Error::InvalidNetwork(format!("reaction {} refers to a missing complex", r.label)));
            }
            if r.reactant == r.product {
                return Err(Error::InvalidNetwork(format!("reaction {} has identical reactant and product", r.label)));
            }
            used[r.reactant] = true;
            used[r.product] = true;
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::InvalidNetwork(format!("complex {i} takes part in no reaction")));
        }
        let mut net = ReactionNetwork {
            name: String::new(),
            species,
            complexes,
            reactions,
            linkage: Vec::new(),
            strong: Vec::new(),
            terminal: Vec::new(),
            scc_of: Vec::new(),
            lc_of: Vec::new(),
        };
        net.compute_graph();
        Ok(net)
    }

    /// Builds a network from labelled (reactant, product) vectors; complexes are
    /// numbered by first appearance, reactant before product.
    pub fn from_pairs(species: Vec<String>, pairs: Vec<(String, Vec<Q>, Vec<Q>)>) -> Result<Self> {
        let mut complexes: Vec<Vec<Q>> = Vec::new();
        let mut reactions = Vec::new();
        let index = |c: Vec<Q>, complexes: &mut Vec<Vec<Q>>| match complexes.iter().position(|x| *x == c) {
            Some(i) => i,
            None => {
                complexes.push(c);
                complexes.len() - 1
            }
        };
        for (label, y, yp) in pairs {
            let a = index(y, &mut complexes);
            let b = index(yp, &mut complexes);
            reactions.push(Reaction { label, reactant: a, product: b });
        }
        ReactionNetwork::new(species, complexes, reactions)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    fn compute_graph(&mut self) {
        let n = self.complexes.len();
        let mut g: DiGraph<(), ()> = DiGraph::new();
        let nodes: Vec<NodeIndex> = (0..n).map(|_| g.add_node(())).collect();
        let mut uf = UnionFind::new(n);
        for r in &self.reactions {
            g.update_edge(nodes[r.reactant], nodes[r.product], ());
            uf.union(r.reactant, r.product);
        }
        self.linkage = group(n, |i| uf.find(i));
        self.lc_of = owner(n, &self.linkage);
        let sccs = petgraph::algo::tarjan_scc(&g);
        let mut comp = vec![0usize; n];
        for (ci, c) in sccs.iter().enumerate() {
            for v in c {
                comp[v.index()] = ci;
            }
        }
        self.strong = group(n, |i| comp[i]);
        self.scc_of = owner(n, &self.strong);
        self.terminal = vec![true; self.strong.len()];
        for r in &self.reactions {
            if self.scc_of[r.reactant] != self.scc_of[r.product] {
                self.terminal[self.scc_of[r.reactant]] = false;
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn species(&self) -> &[String] {
        &self.species
    }
    pub fn complexes(&self) -> &[Vec<Q>] {
        &self.complexes
    }
    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }
    pub fn m(&self) -> usize {
        self.species.len()
    }
    pub fn n(&self) -> usize {
        self.complexes.len()
    }
    pub fn r(&self) -> usize {
        self.reactions.len()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s == name)
    }

    pub fn reaction_index(&self, label: &str) -> Option<usize> {
        self.reactions.iter().position(|r| r.label == label)
    }

    pub fn complex_index(&self, c: &[Q]) -> Option<usize> {
        self.complexes.iter().position(|x| x.as_slice() == c)
    }

    /// Human-readable complex such as `A1+2A2`; the empty complex prints as `0`.
    pub fn complex_name(&self, i: usize) -> String {
        format_complex(&self.species, &self.complexes[i])
    }

    /// Looks up a complex by its printed name (as produced by [`complex_name`](Self::complex_name)).
    pub fn complex_by_name(&self, name: &str) -> Option<usize> {
        let wanted: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        (0..self.n()).find(|&i| self.complex_name(i) == wanted)
    }

    pub fn reaction_vector(&self, i: usize) -> Vec<Q> {
        let r = &self.reactions[i];
        self.complexes[r.product].iter().zip(&self.complexes[r.reactant]).map(|(a, b)| a - b).collect()
    }

    /// Stoichiometric matrix N, species by reactions.
    pub fn stoichiometric_matrix(&self) -> Vec<Vec<Q>> {
        let vecs: Vec<Vec<Q>> = (0..self.r()).map(|i| self.reaction_vector(i)).collect();
        linalg::transpose(&vecs, self.m())
    }

    /// Complex indices that are the reactant of some reaction, ascending.
    pub fn reactant_complexes(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.reactions.iter().map(|r| r.reactant).collect();
        set.into_iter().collect()
    }

    /// Weakly connected components of the complex graph; members ascending, classes by first member.
    pub fn linkage_classes(&self) -> &[Vec<usize>] {
        &self.linkage
    }

    pub fn strong_classes(&self) -> &[Vec<usize>] {
        &self.strong
    }

    pub fn terminal_classes(&self) -> Vec<&[usize]> {
        self.strong.iter().zip(&self.terminal).filter(|(_, &t)| t).map(|(c, _)| c.as_slice()).collect()
    }

    pub fn linkage_class_of(&self, complex: usize) -> usize {
        self.lc_of[complex]
    }

    pub fn strong_class_of(&self, complex: usize) -> usize {
        self.scc_of[complex]
    }

    pub fn is_terminal_class(&self, scc: usize) -> bool {
        self.terminal[scc]
    }

    /// Unordered pairs of complexes joined by at least one reaction, each as (low, high).
    pub fn adjacent_pairs(&self) -> Vec<(usize, usize)> {
        let set: BTreeSet<(usize, usize)> = self
            .reactions
            .iter()
            .map(|r| (r.reactant.min(r.product), r.reactant.max(r.product)))
            .collect();
        set.into_iter().collect()
    }
}

fn group(n: usize, key: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        let k = key(i);
        match seen.iter().find(|(kk, _)| *kk == k) {
            Some(&(_, slot)) => out[slot].push(i),
            None => {
                seen.push((k, out.len()));
                out.push(vec![i]);
            }
        }
    }
    out
}

fn owner(n: usize, groups: &[Vec<usize>]) -> Vec<usize> {
    let mut o = vec![0; n];
    for (g, members) in groups.iter().enumerate() {
        for &i in members {
            o[i] = g;
        }
    }
    o
}

pub fn format_complex(species: &[String], c: &[Q]) -> String {
    let terms: Vec<String> = c
        .iter()
        .zip(species)
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, s)| {
            if x.is_one() {
                s.clone()
            } else if x.is_integer() {
                format!("{}{s}", x.numer())
            } else {
                format!("({}){s}", format_rational(x))
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NetworkNumbers {
    pub m: usize,
    pub n: usize,
    pub n_r: usize,
    pub r: usize,
    pub r_irr: usize,
    pub l: usize,
    pub sl: usize,
    pub t: usize,
    pub s: usize,
    pub q: usize,
    pub delta: i64,
    pub delta_rho: i64,
}

pub fn network_numbers(net: &ReactionNetwork) -> NetworkNumbers {
    let reactants = net.reactant_complexes();
    let pairs: BTreeSet<(usize, usize)> = net.reactions.iter().map(|r| (r.reactant, r.product)).collect();
    let r_irr = net.reactions.iter().filter(|r| !pairs.contains(&(r.product, r.reactant))).count();
    let s = stoichiometric_subspace(net).dimension();
    let reactant_vectors: Vec<Vec<Q>> = reactants.iter().map(|&i| net.complexes[i].clone()).collect();
    let q = rank(&reactant_vectors, net.m());
    let n = net.n();
    let l = net.linkage.len();
    NetworkNumbers {
        m: net.m(),
        n,
        n_r: reactants.len(),
        r: net.r(),
        r_irr,
        l,
        sl: net.strong.len(),
        t: net.terminal.iter().filter(|&&t| t).count(),
        s,
        q,
        delta: n as i64 - l as i64 - s as i64,
        delta_rho: reactants.len() as i64 - q as i64,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructuralFlags {
    pub weakly_reversible: bool,
    pub t_minimal: bool,
    pub cycle_terminal: bool,
    pub point_terminal: bool,
}

pub fn structural_flags(net: &ReactionNetwork) -> StructuralFlags {
    let nn = network_numbers(net);
    StructuralFlags {
        weakly_reversible: nn.sl == nn.l,
        t_minimal: nn.t == nn.l,
        cycle_terminal: nn.n_r == nn.n,
        point_terminal: nn.t == nn.n - nn.n_r,
    }
}

pub fn stoichiometric_subspace(net: &ReactionNetwork) -> SubspaceBasis {
    let vecs: Vec<Vec<Q>> = (0..net.r()).map(|i| net.reaction_vector(i)).collect();
    SubspaceBasis::span(net.m(), &vecs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    #[serde(serialize_with = "crate::report::ser_opt_qvec")]
    pub witness: Option<Vec<Q>>,
}

/// A strictly positive vector orthogonal to every reaction vector.
pub fn is_conservative(net: &ReactionNetwork) -> Verdict {
    let mut lp = LinearSystem::new(net.m());
    for i in 0..net.r() {
        lp.add(net.reaction_vector(i), Relation::Eq, Q::zero());
    }
    for j in 0..net.m() {
        lp.bound(j, Relation::Ge, Q::one());
    }
    let witness = lp.solve().map(|w| primitive(&w));
    Verdict { holds: witness.is_some(), witness }
}

/// Positive rates k with sum k_i (y'_i - y_i) = 0.
pub fn is_positively_dependent(net: &ReactionNetwork) -> Verdict {
    let nmat = net.stoichiometric_matrix();
    let mut lp = LinearSystem::new(net.r());
    for row in nmat {
        lp.add(row, Relation::Eq, Q::zero());
    }
    for j in 0..net.r() {
        lp.bound(j, Relation::Ge, Q::one());
    }
    let witness = lp.solve().map(|w| primitive(&w));
    Verdict { holds: witness.is_some(), witness }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum Concordance {
    Concordant,
    Discordant {
        #[serde(serialize_with = "crate::report::ser_qvec")]
        alpha: Vec<Q>,
        #[serde(serialize_with = "crate::report::ser_qvec")]
        sigma: Vec<Q>,
    },
}

pub const DEFAULT_SPECIES_LIMIT: usize = 12;

/// Searches for a discordance witness: alpha in the kernel of the reaction map and a
/// nonzero sigma in S whose signs are compatible with alpha reaction by reaction.
pub fn concordance(net: &ReactionNetwork) -> Result<Concordance> {
    concordance_with_limit(net, DEFAULT_SPECIES_LIMIT)
}

pub fn concordance_with_limit(net: &ReactionNetwork, limit: usize) -> Result<Concordance> {
    if net.m() > limit {
        return Err(Error::SizeLimit { what: "species", value: net.m(), limit });
    }
    let s = stoichiometric_subspace(net);
    let patterns = realizable_sign_patterns(&s);
    let kernel = nullspace(&net.stoichiometric_matrix(), net.r());
    let supports: Vec<Vec<usize>> = net
        .reactions
        .iter()
        .map(|r| (0..net.m()).filter(|&j| !net.complexes[r.reactant][j].is_zero()).collect())
        .collect();

    let check = |sigma: &Vec<i8>| -> Option<Concordance> {
        // alpha = kernel coefficients c; alpha_r = sum_j c_j kernel_j[r]
        let kdim = kernel.len();
        let mut lp = LinearSystem::new(kdim);
        for (r, supp) in supports.iter().enumerate() {
            let pos = supp.iter().any(|&j| sigma[j] > 0);
            let neg = supp.iter().any(|&j| sigma[j] < 0);
            let row: Vec<Q> = kernel.iter().map(|v| v[r].clone()).collect();
            // one-signed support forces alpha_r strictly to that sign; homogeneous, so >= 1
            match (pos, neg) {
                (true, true) => {}
                (true, false) => lp.add(row, Relation::Ge, Q::one()),
                (false, true) => lp.add(row, Relation::Le, -Q::one()),
                (false, false) => lp.add(row, Relation::Eq, Q::zero()),
            }
        }
        let c = if kdim == 0 {
            if lp.constraints().iter().any(|c| c.relation != Relation::Eq) {
                return None;
            }
            Vec::new()
        } else {
            lp.solve()?
        };
        let alpha: Vec<Q> = (0..net.r())
            .map(|r| kernel.iter().zip(&c).fold(Q::zero(), |acc, (v, cj)| acc + &v[r] * cj))
            .collect();
        let sigma_vec = realize_pattern(&s, sigma)?;
        Some(Concordance::Discordant { alpha, sigma: sigma_vec })
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let found = patterns.par_iter().map(check).find_first(|x| x.is_some()).flatten();
        Ok(found.unwrap_or(Concordance::Concordant))
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(patterns.iter().find_map(check).unwrap_or(Concordance::Concordant))
    }
}

/// An element of the subspace with the given sign pattern.
pub fn realize_pattern(s: &SubspaceBasis, sign: &[i8]) -> Option<Vec<Q>> {
    let k = s.dimension();
    let mut lp = LinearSystem::new(k);
    for (i, &sg) in sign.iter().enumerate() {
        let row: Vec<Q> = s.vectors.iter().map(|b| b[i].clone()).collect();
        match sg {
            1 => lp.add(row, Relation::Ge, Q::one()),
            -1 => lp.add(row, Relation::Le, -Q::one()),
            _ => lp.add(row, Relation::Eq, Q::zero()),
        }
    }
    let a = lp.solve()?;
    Some((0..s.dim).map(|i| s.vectors.iter().zip(&a).fold(Q::zero(), |acc, (b, x)| acc + &b[i] * x)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutPair {
    pub a: usize,
    pub b: usize,
    /// Component containing `a` after the edges between a and b are removed.
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
}

fn components_without(net: &ReactionNetwork, class: &[usize], skip: (usize, usize)) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(net.n());
    for r in &net.reactions {
        let e = (r.reactant.min(r.product), r.reactant.max(r.product));
        if e == skip {
            continue;
        }
        uf.union(r.reactant, r.product);
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut keys: Vec<usize> = Vec::new();
    for &c in class {
        let k = uf.find(c);
        match keys.iter().position(|&x| x == k) {
            Some(p) => out[p].push(c),
            None => {
                keys.push(k);
                out.push(vec![c]);
            }
        }
    }
    out
}

/// Adjacent complex pairs whose removal splits their linkage class in two.
pub fn cut_pairs(net: &ReactionNetwork) -> Vec<CutPair> {
    let mut out = Vec::new();
    for (a, b) in net.adjacent_pairs() {
        let class = &net.linkage[net.lc_of[a]];
        let comps = components_without(net, class, (a, b));
        if comps.len() == 2 {
            let (sa, sb) = if comps[0].contains(&a) { (comps[0].clone(), comps[1].clone()) } else { (comps[1].clone(), comps[0].clone()) };
            out.push(CutPair { a, b, side_a: sa, side_b: sb });
        }
    }
    out
}

/// Number of pieces the linkage class of (a, b) falls into when the edges between them go.
pub fn split_count(net: &ReactionNetwork, a: usize, b: usize) -> usize {
    let class = &net.linkage[net.lc_of[a]];
    components_without(net, class, (a.min(b), a.max(b))).len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Regularity {
    pub regular: bool,
    pub violation: Option<String>,
}

pub fn is_regular(net: &ReactionNetwork) -> Regularity {
    let fail = |msg: String| Regularity { regular: false, violation: Some(msg) };
    if !is_positively_dependent(net).holds {
        return fail("reaction vectors are not positively dependent".into());
    }
    let nn = network_numbers(net);
    if nn.t != nn.l {
        return fail(format!("t = {} differs from l = {}", nn.t, nn.l));
    }
    let cuts: BTreeSet<(usize, usize)> = cut_pairs(net).iter().map(|c| (c.a, c.b)).collect();
    for (a, b) in net.adjacent_pairs() {
        if net.scc_of[a] != net.scc_of[b] && !cuts.contains(&(a, b)) {
            return fail(format!(
                "{} and {} lie in different strong classes but are not a cut pair",
                net.complex_name(a),
                net.complex_name(b)
            ));
        }
    }
    Regularity { regular: true, violation: None }
}

/// Reactions grouped by linkage class of their reactant, in class order.
pub fn linkage_class_reactions(net: &ReactionNetwork) -> Vec<Vec<usize>> {
    let mut blocks = vec![Vec::new(); net.linkage.len()];
    for (i, r) in net.reactions.iter().enumerate() {
        blocks[net.lc_of[r.reactant]].push(i);
    }
    blocks
}

pub fn linkage_class_independence(net: &ReactionNetwork) -> bool {
    crate::decomposition::is_independent(net, &linkage_class_reactions(net))
}
