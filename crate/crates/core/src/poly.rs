//! Sparse multivariate polynomials with exact rational coefficients.

use crate::error::{Error, Result};
use crate::rational::{format_rational, Q};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Symbol name to exponent; zero exponents are never stored.
pub type Monomial = BTreeMap<String, u32>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparsePolynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl SparsePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::new(), c);
        p
    }

    pub fn var(name: &str) -> Self {
        let mut m = Monomial::new();
        m.insert(name.to_string(), 1);
        let mut p = Self::zero();
        p.add_term(m, Q::one());
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    /// Total degree of a monomial counting only symbols accepted by `filter`.
    pub fn degree_in(m: &Monomial, filter: impl Fn(&str) -> bool) -> u32 {
        m.iter().filter(|(s, _)| filter(s)).map(|(_, e)| *e).sum()
    }

    /// Whether every term has the same degree in the filtered symbols.
    pub fn is_homogeneous_in(&self, filter: impl Fn(&str) -> bool) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| Self::degree_in(m, &filter));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Scales by -1 if needed so the first term (in monomial order) is positive.
    pub fn normalized(&self) -> Self {
        match self.terms.values().next() {
            Some(c) if c.is_negative() => -self.clone(),
            _ => self.clone(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePolynomial { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn evaluate(&self, values: &BTreeMap<String, Q>) -> Option<Q> {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (s, e) in m {
                let v = values.get(s)?;
                for _ in 0..*e {
                    t *= v;
                }
            }
            total += t;
        }
        Some(total)
    }

    /// Substitutes numeric values for some symbols, keeping the rest.
    pub fn substitute(&self, values: &BTreeMap<String, Q>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Monomial::new();
            for (s, e) in m {
                match values.get(s) {
                    Some(v) => {
                        for _ in 0..*e {
                            coeff *= v;
                        }
                    }
                    None => {
                        rest.insert(s.clone(), *e);
                    }
                }
            }
            out.add_term(rest, coeff);
        }
        out
    }
}

fn mul_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut m = a.clone();
    for (s, e) in b {
        *m.entry(s.clone()).or_insert(0) += e;
    }
    m
}

impl Add for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn add(self, o: &SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn sub(self, o: &SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn mul(self, o: &SparsePolynomial) -> SparsePolynomial {
        let mut out = SparsePolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(mul_monomials(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for SparsePolynomial {
    type Output = SparsePolynomial;
    fn neg(self) -> SparsePolynomial {
        SparsePolynomial { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

pub fn format_monomial(m: &Monomial) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter()
        .map(|(s, e)| if *e == 1 { s.clone() } else { format!("{s}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            match (a.is_one(), m.is_empty()) {
                (true, false) => f.write_str(&format_monomial(m))?,
                (_, true) => f.write_str(&format_rational(&a))?,
                (false, false) => write!(f, "{}*{}", format_rational(&a), format_monomial(m))?,
            }
        }
        Ok(())
    }
}

pub const DETERMINANT_LIMIT: usize = 12;

/// Determinant by dynamic programming over column subsets (rows taken in order).
pub fn determinant(mat: &[Vec<SparsePolynomial>]) -> Result<SparsePolynomial> {
    let n = mat.len();
    if mat.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParameter("determinant of a non-square matrix".into()));
    }
    if n > DETERMINANT_LIMIT {
        return Err(Error::SizeLimit { what: "matrix size", value: n, limit: DETERMINANT_LIMIT });
    }
    if n == 0 {
        return Ok(SparsePolynomial::constant(Q::one()));
    }
    let mut dp: Vec<Option<SparsePolynomial>> = vec![None; 1 << n];
    dp[0] = Some(SparsePolynomial::constant(Q::one()));
    for mask in 0usize..(1 << n) {
        let Some(cur) = dp[mask].take() else { continue };
        if cur.is_zero() {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            dp[mask] = Some(cur);
            continue;
        }
        for c in 0..n {
            if mask & (1 << c) != 0 || mat[row][c].is_zero() {
                continue;
            }
            let inversions = (mask >> (c + 1)).count_ones();
            let mut term = &cur * &mat[row][c];
            if inversions % 2 == 1 {
                term = -term;
            }
            let next = mask | (1 << c);
            dp[next] = Some(match dp[next].take() {
                Some(p) => &p + &term,
                None => term,
            });
        }
    }
    Ok(dp[(1 << n) - 1].take().unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn v(s: &str) -> SparsePolynomial {
        SparsePolynomial::var(s)
    }

    #[test]
    fn two_by_two() {
        let d = determinant(&[vec![v("a"), v("b")], vec![v("c"), v("d")]]).unwrap();
        assert_eq!(d, &(&v("a") * &v("d")) - &(&v("b") * &v("c")));
        assert_eq!(d.to_string(), "a*d - b*c");
    }

    #[test]
    fn numeric_three_by_three() {
        let c = |x: i64| SparsePolynomial::constant(q(x));
        let m = vec![vec![c(2), c(0), c(1)], vec![c(1), c(3), c(2)], vec![c(1), c(1), c(1)]];
        // 2(3-2) - 0 + 1(1-3) = 0
        assert!(determinant(&m).unwrap().is_zero());
        let m = vec![vec![c(2), c(0), c(1)], vec![c(1), c(3), c(2)], vec![c(1), c(1), c(4)]];
        assert_eq!(determinant(&m).unwrap(), c(2 * 10 + (1 - 3)));
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = &v("x") - &v("x");
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn substitute_and_evaluate() {
        let p = &(&v("x") * &v("y")) + &SparsePolynomial::constant(q(2));
        let mut vals = BTreeMap::new();
        vals.insert("x".to_string(), q(3));
        let s = p.substitute(&vals);
        assert_eq!(s.to_string(), "2 + 3*y");
        vals.insert("y".to_string(), q(2));
        assert_eq!(p.evaluate(&vals), Some(q(8)));
    }
}
