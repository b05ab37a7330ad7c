//! Exact dense linear algebra over the rationals: characteristic
//! polynomials, squarefreeness, and Krylov-style span closures.

use num::BigRational;
use num::{One, Zero};

use crate::error::{AlgebraError, Result};

/// Dense matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: Vec<Vec<BigRational>>,
}

impl RatMatrix {
    pub fn new(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(AlgebraError::InvalidInput("matrix must be square".into()));
        }
        Ok(RatMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        let mut rows = vec![vec![BigRational::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = BigRational::one();
        }
        RatMatrix { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        let n = self.size();
        let mut out = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                if self.rows[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if other.rows[k][j].is_zero() {
                        continue;
                    }
                    out[i][j] += &self.rows[i][k] * &other.rows[k][j];
                }
            }
        }
        RatMatrix { rows: out }
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .fold(BigRational::zero(), |acc, t| acc + t)
            })
            .collect()
    }

    /// `self * c + other`
    pub fn scale_add(&self, c: &BigRational, other: &RatMatrix) -> RatMatrix {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| a * c + b).collect())
            .collect();
        RatMatrix { rows }
    }

    pub fn zero(n: usize) -> Self {
        RatMatrix {
            rows: vec![vec![BigRational::zero(); n]; n],
        }
    }

    pub fn trace(&self) -> BigRational {
        (0..self.size()).fold(BigRational::zero(), |acc, i| acc + &self.rows[i][i])
    }

    pub fn commutes_with(&self, other: &RatMatrix) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Characteristic polynomial coefficients `c_0 .. c_n` (monic), by
    /// the trace recursion; exact at every step.
    pub fn char_poly(&self) -> Vec<BigRational> {
        let n = self.size();
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut m = RatMatrix::identity(n);
        for k in 1..=n {
            m = self.mul(&m);
            let c = -(m.trace() / BigRational::from(num::BigInt::from(k as i64)));
            coeffs[n - k] = c.clone();
            // M <- A M + c I, folded into the next round
            for i in 0..n {
                m.rows[i][i] = &m.rows[i][i] + &c;
            }
        }
        coeffs
    }
}

fn poly_trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn poly_derivative(p: &[BigRational]) -> Vec<BigRational> {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    let mut out = Vec::with_capacity(p.len() - 1);
    for (k, c) in p.iter().enumerate().skip(1) {
        out.push(c * BigRational::from(num::BigInt::from(k as i64)));
    }
    out
}

fn poly_rem(num_p: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let mut r = num_p.to_vec();
    poly_trim(&mut r);
    let mut d = den.to_vec();
    poly_trim(&mut d);
    let dd = d.len() - 1;
    let lead = d[dd].clone();
    while r.len() > dd && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - 1 - dd;
        let f = r.last().unwrap() / &lead;
        for t in 0..=dd {
            let v = &d[t] * &f;
            r[t + shift] = &r[t + shift] - v;
        }
        poly_trim(&mut r);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
        if r.len() - 1 < dd {
            break;
        }
    }
    r
}

/// Polynomial gcd degree via the Euclidean algorithm.
pub fn poly_gcd_degree(a: &[BigRational], b: &[BigRational]) -> usize {
    let mut f = a.to_vec();
    let mut g = b.to_vec();
    poly_trim(&mut f);
    poly_trim(&mut g);
    if g.len() == 1 && g[0].is_zero() {
        return f.len() - 1;
    }
    loop {
        let r = poly_rem(&f, &g);
        if r.len() == 1 && r[0].is_zero() {
            return g.len() - 1;
        }
        f = g;
        g = r;
    }
}

/// A polynomial is squarefree iff it is coprime with its derivative.
pub fn is_squarefree(p: &[BigRational]) -> bool {
    let dp = poly_derivative(p);
    poly_gcd_degree(p, &dp) == 0
}

/// Row-reduced spanning set maintained incrementally.
#[derive(Debug, Default)]
pub struct SpanBasis {
    /// rows in echelon form, each with its pivot column
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl SpanBasis {
    pub fn new() -> Self {
        SpanBasis::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduce the vector against the basis; if independent, absorb it and
    /// return true.
    pub fn insert(&mut self, mut v: Vec<BigRational>) -> bool {
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let f = v[*pivot].clone();
                for (t, rv) in row.iter().enumerate() {
                    let s = rv * &f;
                    v[t] = &v[t] - s;
                }
            }
        }
        if let Some(pivot) = v.iter().position(|c| !c.is_zero()) {
            let lead = v[pivot].clone();
            for c in v.iter_mut() {
                *c = &*c / &lead;
            }
            self.rows.push((pivot, v));
            true
        } else {
            false
        }
    }
}

/// Does the orbit of the `seed`th coordinate vector under the unital
/// algebra generated by `mats` span the whole space? Decided exactly by
/// iterated closure.
pub fn krylov_cyclic_from(mats: &[RatMatrix], dim: usize, seed: usize) -> bool {
    let mut basis = SpanBasis::new();
    let mut seed_vec = vec![BigRational::zero(); dim];
    seed_vec[seed] = BigRational::one();
    basis.insert(seed_vec.clone());
    let mut frontier = vec![seed_vec];
    while !frontier.is_empty() && basis.dim() < dim {
        let mut next = Vec::new();
        for v in &frontier {
            for m in mats {
                let w = m.apply(v);
                if basis.insert(w.clone()) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    basis.dim() == dim
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, rat_int};

    fn m(rows: Vec<Vec<i64>>) -> RatMatrix {
        RatMatrix::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(rat_int).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn char_poly_known() {
        // [[2,1],[0,3]]: (x-2)(x-3) = x^2 - 5x + 6
        let a = m(vec![vec![2, 1], vec![0, 3]]);
        let p = a.char_poly();
        assert_eq!(p, vec![rat_int(6), rat_int(-5), rat_int(1)]);
        assert!(is_squarefree(&p));
        // [[1,1],[0,1]]: (x-1)^2 not squarefree
        let b = m(vec![vec![1, 1], vec![0, 1]]);
        assert!(!is_squarefree(&b.char_poly()));
    }

    #[test]
    fn gcd_degree() {
        // (x-1)^2 (x+2) shares (x-1) with its derivative
        let p = vec![rat_int(2), rat_int(-3), rat_int(0), rat_int(1)];
        let dp = poly_derivative(&p);
        assert_eq!(poly_gcd_degree(&p, &dp), 1);
    }

    #[test]
    fn cyclic_diagonal_pair() {
        // coordinate vectors are joint eigenvectors of a diagonal family,
        // hence not cyclic; adding an off-diagonal generator fixes that
        let a = m(vec![vec![1, 0], vec![0, 2]]);
        let b = m(vec![vec![3, 0], vec![0, 5]]);
        assert!(!krylov_cyclic_from(&[a.clone(), b.clone()], 2, 0));
        let n = m(vec![vec![0, 0], vec![1, 0]]);
        assert!(krylov_cyclic_from(&[a, b, n], 2, 0));
    }

    #[test]
    fn commutation_check() {
        let a = m(vec![vec![1, 2], vec![0, 1]]);
        let b = m(vec![vec![1, 5], vec![0, 1]]);
        assert!(a.commutes_with(&b));
        let c = m(vec![vec![0, 1], vec![1, 0]]);
        assert!(!a.commutes_with(&c));
    }

    #[test]
    fn squarefree_via_random_combination() {
        let a = m(vec![vec![1, 0], vec![0, 2]]);
        let b = m(vec![vec![3, 0], vec![0, 5]]);
        let comb = a.scale_add(&rat(1, 2), &b);
        assert!(is_squarefree(&comb.char_poly()));
    }
}
