//! Exact linear feasibility by the two-phase simplex method over the rationals.
//!
//! Only feasibility is needed by the analyses: positive dependence, conservation
//! witnesses, sign realizability and the deficiency-one relation systems all
//! reduce to "does this polyhedron contain a point". Bland's rule guarantees
//! termination; the problems here have at most a few dozen variables.

use crate::linalg::SubspaceBasis;
use crate::rational::Q;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub relation: Relation,
    pub rhs: Q,
}

/// A system of linear constraints over `n` variables, each either free or non-negative.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    nonneg: Vec<bool>,
    constraints: Vec<Constraint>,
}

impl LinearSystem {
    /// All variables free.
    pub fn new(nvars: usize) -> Self {
        LinearSystem { nonneg: vec![false; nvars], constraints: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nonneg.len()
    }

    pub fn set_nonneg(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    pub fn add(&mut self, coeffs: Vec<Q>, relation: Relation, rhs: Q) {
        assert_eq!(coeffs.len(), self.nvars(), "constraint width");
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    /// `x_var (rel) rhs` for a single variable.
    pub fn bound(&mut self, var: usize, relation: Relation, rhs: Q) {
        let mut c = vec![Q::zero(); self.nvars()];
        c[var] = Q::one();
        self.add(c, relation, rhs);
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Checks a candidate point against every constraint exactly.
    pub fn satisfied_by(&self, x: &[Q]) -> bool {
        if x.len() != self.nvars() {
            return false;
        }
        if self.nonneg.iter().zip(x).any(|(&nn, v)| nn && v.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs = crate::linalg::dot(&c.coeffs, x);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
    }

    /// Returns some feasible point, or `None` when the system is infeasible.
    pub fn solve(&self) -> Option<Vec<Q>> {
        let n = self.nvars();
        // column layout: one column per non-negative variable, two per free one
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
        let mut ncols = 0;
        for &nn in &self.nonneg {
            if nn {
                col_of.push((ncols, None));
                ncols += 1;
            } else {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
        let structural = ncols;

        struct Row {
            a: Vec<(usize, Q)>,
            rel: Relation,
            b: Q,
        }
        let mut rows: Vec<Row> = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            let mut a = Vec::new();
            for (j, v) in c.coeffs.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let (pos, neg) = col_of[j];
                a.push((pos, v.clone()));
                if let Some(neg) = neg {
                    a.push((neg, -v.clone()));
                }
            }
            let (a, rel, b) = if c.rhs.is_negative() {
                let flipped = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (a.into_iter().map(|(j, v)| (j, -v)).collect(), flipped, -c.rhs.clone())
            } else {
                (a, c.relation, c.rhs.clone())
            };
            if a.is_empty() {
                let ok = match rel {
                    Relation::Le => true,
                    Relation::Eq => b.is_zero(),
                    Relation::Ge => b.is_zero(),
                };
                if !ok {
                    return None;
                }
                continue;
            }
            rows.push(Row { a, rel, b });
        }

        // slack / surplus and artificial columns
        let nslack = rows.iter().filter(|r| r.rel != Relation::Eq).count();
        let nart = rows.iter().filter(|r| r.rel != Relation::Le).count();
        let total = structural + nslack + nart;
        let first_art = structural + nslack;
        let m = rows.len();
        let mut tab: Vec<Vec<Q>> = vec![vec![Q::zero(); total + 1]; m];
        let mut basis = vec![0usize; m];
        let mut next_slack = structural;
        let mut next_art = first_art;
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in &r.a {
                tab[i][*j] += v;
            }
            tab[i][total] = r.b.clone();
            match r.rel {
                Relation::Le => {
                    tab[i][next_slack] = Q::one();
                    basis[i] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    tab[i][next_slack] = -Q::one();
                    next_slack += 1;
                    tab[i][next_art] = Q::one();
                    basis[i] = next_art;
                    next_art += 1;
                }
                Relation::Eq => {
                    tab[i][next_art] = Q::one();
                    basis[i] = next_art;
                    next_art += 1;
                }
            }
        }

        // phase-one objective: minimise the sum of artificials
        let mut obj = vec![Q::zero(); total + 1];
        for i in 0..m {
            if basis[i] >= first_art {
                for j in 0..=total {
                    if j < first_art || j == total {
                        let v = &tab[i][j];
                        if !v.is_zero() {
                            obj[j] -= v;
                        }
                    }
                }
            }
        }

        loop {
            let Some(enter) = (0..total).find(|&j| obj[j].is_negative()) else {
                break;
            };
            let mut leave: Option<(usize, Q)> = None;
            for i in 0..m {
                let a = &tab[i][enter];
                if a.is_positive() {
                    let ratio = &tab[i][total] / a;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            // phase-one objective is bounded below by zero
            let (pr, _) = leave.expect("phase one is bounded");
            pivot(&mut tab, &mut obj, pr, enter);
            basis[pr] = enter;
        }

        if !obj[total].is_zero() {
            return None;
        }
        let mut colval = vec![Q::zero(); total];
        for i in 0..m {
            colval[basis[i]] = tab[i][total].clone();
        }
        let x = col_of
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &colval[p] - &colval[n],
                None => colval[p].clone(),
            })
            .collect();
        Some(x)
    }

    pub fn is_feasible(&self) -> bool {
        self.solve().is_some()
    }
}

/// Sign vectors (entries -1, 0, 1) of every element of the subspace, except zero,
/// in lexicographic order. Prefixes that no element realizes are pruned by an LP.
pub fn realizable_sign_patterns(basis: &SubspaceBasis) -> Vec<Vec<i8>> {
    let m = basis.dim;
    let k = basis.dimension();
    // v = sum_j a_j b_j; coordinate i has coefficients b_j[i]
    let coords: Vec<Vec<Q>> = (0..m).map(|i| basis.vectors.iter().map(|b| b[i].clone()).collect()).collect();
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(m);
    fn feasible(coords: &[Vec<Q>], k: usize, prefix: &[i8]) -> bool {
        let mut lp = LinearSystem::new(k);
        for (i, &s) in prefix.iter().enumerate() {
            let rel = match s {
                1 => (Relation::Ge, Q::one()),
                -1 => (Relation::Le, -Q::one()),
                _ => (Relation::Eq, Q::zero()),
            };
            lp.add(coords[i].clone(), rel.0, rel.1);
        }
        lp.is_feasible()
    }
    fn walk(coords: &[Vec<Q>], k: usize, prefix: &mut Vec<i8>, out: &mut Vec<Vec<i8>>) {
        if prefix.len() == coords.len() {
            if prefix.iter().any(|&s| s != 0) {
                out.push(prefix.clone());
            }
            return;
        }
        for s in [-1i8, 0, 1] {
            prefix.push(s);
            let zero_row = coords[prefix.len() - 1].iter().all(|c| c.is_zero());
            let ok = if zero_row { s == 0 } else { feasible(coords, k, prefix) };
            if ok {
                walk(coords, k, prefix, out);
            }
            prefix.pop();
        }
    }
    if k == 0 {
        return out;
    }
    walk(&coords, k, &mut prefix, &mut out);
    out
}

/// Whether `sign` is realized by some element of the subspace.
pub fn sign_realizable(basis: &SubspaceBasis, sign: &[i8]) -> bool {
    let k = basis.dimension();
    if sign.iter().all(|&s| s == 0) {
        return true;
    }
    if k == 0 {
        return false;
    }
    let mut lp = LinearSystem::new(k);
    for (i, &s) in sign.iter().enumerate() {
        let coeffs: Vec<Q> = basis.vectors.iter().map(|b| b[i].clone()).collect();
        match s {
            1 => lp.add(coeffs, Relation::Ge, Q::one()),
            -1 => lp.add(coeffs, Relation::Le, -Q::one()),
            _ => lp.add(coeffs, Relation::Eq, Q::zero()),
        }
    }
    lp.is_feasible()
}

fn pivot(tab: &mut [Vec<Q>], obj: &mut [Q], pr: usize, pc: usize) {
    let inv = Q::one() / &tab[pr][pc];
    for x in tab[pr].iter_mut() {
        if !x.is_zero() {
            *x *= &inv;
        }
    }
    let prow = tab[pr].clone();
    let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for &j in &nz {
            row[j] -= &f * &prow[j];
        }
    }
    if !obj[pc].is_zero() {
        let f = obj[pc].clone();
        for &j in &nz {
            obj[j] -= &f * &prow[j];
        }
    }
}
