//! Matrices over a possibly noncommutative superalgebra: column and row
//! determinants, quasideterminants, principal quasiminors, Berezinians of
//! a 0/1 type, Manin-matrix checks, and Schur-style factorizations.

use crate::error::{AlgebraError, Result};
use crate::ring::{Parity, Ring};

/// A square matrix tagged with a 0/1 type sequence; entry (i, j) is
/// expected to be homogeneous of parity `s_i + s_j`.
#[derive(Debug, Clone)]
pub struct TypedMatrix<E> {
    pub entries: Vec<Vec<E>>,
    pub signature: Vec<Parity>,
}

impl<E: Clone> TypedMatrix<E> {
    pub fn new(entries: Vec<Vec<E>>, signature: Vec<Parity>) -> Result<Self> {
        let k = entries.len();
        if k == 0 || entries.iter().any(|row| row.len() != k) {
            return Err(AlgebraError::InvalidInput("matrix must be square".into()));
        }
        if signature.len() != k {
            return Err(AlgebraError::InvalidInput(
                "type sequence length must match the matrix size".into(),
            ));
        }
        Ok(TypedMatrix { entries, signature })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &E {
        &self.entries[i][j]
    }

    /// Plain transpose; the type sequence is unchanged.
    pub fn transpose(&self) -> TypedMatrix<E> {
        let k = self.size();
        let entries = (0..k)
            .map(|i| (0..k).map(|j| self.entries[j][i].clone()).collect())
            .collect();
        TypedMatrix {
            entries,
            signature: self.signature.clone(),
        }
    }

    /// Standard submatrix on a strictly increasing index set.
    pub fn submatrix(&self, rows: &[usize]) -> Result<TypedMatrix<E>> {
        if rows.is_empty() || rows.windows(2).any(|w| w[0] >= w[1]) {
            return Err(AlgebraError::InvalidInput(
                "index set must be nonempty and strictly increasing".into(),
            ));
        }
        if *rows.last().unwrap() >= self.size() {
            return Err(AlgebraError::InvalidInput("index out of range".into()));
        }
        let entries = rows
            .iter()
            .map(|&i| rows.iter().map(|&j| self.entries[i][j].clone()).collect())
            .collect();
        let signature = rows.iter().map(|&i| self.signature[i]).collect();
        Ok(TypedMatrix { entries, signature })
    }

    /// Conjugation by a permutation: entry (i, j) of the result is the
    /// (perm^{-1}(i), perm^{-1}(j)) entry of the input, and the type is
    /// permuted the same way. `perm[t]` is the image of index `t`.
    pub fn permute(&self, perm: &[usize]) -> Result<TypedMatrix<E>> {
        let k = self.size();
        if perm.len() != k {
            return Err(AlgebraError::InvalidInput("permutation length mismatch".into()));
        }
        let mut inv = vec![usize::MAX; k];
        for (t, &im) in perm.iter().enumerate() {
            if im >= k || inv[im] != usize::MAX {
                return Err(AlgebraError::InvalidInput("not a permutation".into()));
            }
            inv[im] = t;
        }
        let entries = (0..k)
            .map(|i| (0..k).map(|j| self.entries[inv[i]][inv[j]].clone()).collect())
            .collect();
        let signature = (0..k).map(|i| self.signature[inv[i]]).collect();
        Ok(TypedMatrix { entries, signature })
    }
}

/// Verify the homogeneity pattern of a typed matrix.
pub fn check_type<R: Ring>(ring: &R, m: &TypedMatrix<R::Elem>) -> Result<()> {
    for i in 0..m.size() {
        for j in 0..m.size() {
            let want = m.signature[i].plus(m.signature[j]);
            if !ring.homogeneity(&m.entries[i][j]).admits(want) {
                return Err(AlgebraError::InvalidInput(format!(
                    "entry ({}, {}) is not homogeneous of parity {:?}",
                    i, j, want
                )));
            }
        }
    }
    Ok(())
}

/// Column determinant: signed sum over permutations with factors ordered
/// by column index, `a_{s(1),1} a_{s(2),2} ...`.
pub fn cdet<R: Ring>(ring: &R, m: &TypedMatrix<R::Elem>) -> Result<R::Elem> {
    let k = m.size();
    let mut acc = ring.zero();
    for (perm, sign) in permutations_with_sign(k) {
        let mut prod = ring.one();
        for (col, &row) in perm.iter().enumerate() {
            prod = ring.mul(&prod, &m.entries[row][col])?;
        }
        if sign < 0 {
            prod = ring.neg(&prod);
        }
        acc = ring.add(&acc, &prod)?;
    }
    Ok(acc)
}

/// Row determinant, `a_{1,s(1)} a_{2,s(2)} ...` = cdet of the transpose.
pub fn rdet<R: Ring>(ring: &R, m: &TypedMatrix<R::Elem>) -> Result<R::Elem> {
    cdet(ring, &m.transpose())
}

/// All permutations of 0..k with signs (small k only).
fn permutations_with_sign(k: usize) -> Vec<(Vec<usize>, i32)> {
    fn go(rest: &mut Vec<usize>, acc: &mut Vec<usize>, sign: i32, out: &mut Vec<(Vec<usize>, i32)>) {
        if rest.is_empty() {
            out.push((acc.clone(), sign));
            return;
        }
        for idx in 0..rest.len() {
            let v = rest.remove(idx);
            acc.push(v);
            // removing from position idx costs idx transpositions
            let s = if idx % 2 == 0 { sign } else { -sign };
            go(rest, acc, s, out);
            acc.pop();
            rest.insert(idx, v);
        }
    }
    let mut rest: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    go(&mut rest, &mut Vec::new(), 1, &mut out);
    out
}

/// Two-sided inverse via block recursion on the leading entry; valid over
/// a noncommutative ring whenever the pivots invert.
pub fn inverse<R: Ring>(ring: &R, m: &TypedMatrix<R::Elem>) -> Result<Vec<Vec<R::Elem>>> {
    let k = m.size();
    inverse_block(ring, &m.entries, k)
}

fn inverse_block<R: Ring>(ring: &R, a: &[Vec<R::Elem>], k: usize) -> Result<Vec<Vec<R::Elem>>> {
    if k == 1 {
        return Ok(vec![vec![ring.invert(&a[0][0])?]]);
    }
    let w = &a[0][0];
    let w_inv = ring.invert(w)?;
    // S = Z - Y w^{-1} X
    let mut s = vec![vec![ring.zero(); k - 1]; k - 1];
    for i in 1..k {
        for j in 1..k {
            let yw = ring.mul(&a[i][0], &w_inv)?;
            let ywx = ring.mul(&yw, &a[0][j])?;
            s[i - 1][j - 1] = ring.sub(&a[i][j], &ywx)?;
        }
    }
    let s_inv = inverse_block(ring, &s, k - 1)?;
    let mut out = vec![vec![ring.zero(); k]; k];
    // top-left: w^{-1} + w^{-1} X S^{-1} Y w^{-1}
    let mut corr = ring.zero();
    for u in 1..k {
        for v in 1..k {
            let t = ring.mul(&a[0][u], &s_inv[u - 1][v - 1])?;
            let t = ring.mul(&t, &a[v][0])?;
            corr = ring.add(&corr, &t)?;
        }
    }
    let t = ring.mul(&w_inv, &corr)?;
    let t = ring.mul(&t, &w_inv)?;
    out[0][0] = ring.add(&w_inv, &t)?;
    // top row: -w^{-1} X S^{-1}
    for j in 1..k {
        let mut acc = ring.zero();
        for u in 1..k {
            let t = ring.mul(&a[0][u], &s_inv[u - 1][j - 1])?;
            acc = ring.add(&acc, &t)?;
        }
        out[0][j] = ring.neg(&ring.mul(&w_inv, &acc)?);
    }
    // left column: -S^{-1} Y w^{-1}
    for i in 1..k {
        let mut acc = ring.zero();
        for u in 1..k {
            let t = ring.mul(&s_inv[i - 1][u - 1], &a[u][0])?;
            acc = ring.add(&acc, &t)?;
        }
        out[i][0] = ring.neg(&ring.mul(&acc, &w_inv)?);
    }
    for i in 1..k {
        for j in 1..k {
            out[i][j] = s_inv[i - 1][j - 1].clone();
        }
    }
    Ok(out)
}

/// The (i, j) quasideterminant: `a_{ij} - r_i^j (A^{ij})^{-1} c_j^i`,
/// with the boxed row and column removed from the submatrix.
pub fn quasideterminant<R: Ring>(
    ring: &R,
    m: &TypedMatrix<R::Elem>,
    i: usize,
    j: usize,
) -> Result<R::Elem> {
    let k = m.size();
    if i >= k || j >= k {
        return Err(AlgebraError::InvalidInput("index out of range".into()));
    }
    if k == 1 {
        return Ok(m.entries[0][0].clone());
    }
    let rows: Vec<usize> = (0..k).filter(|&r| r != i).collect();
    let cols: Vec<usize> = (0..k).filter(|&c| c != j).collect();
    let sub: Vec<Vec<R::Elem>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| m.entries[r][c].clone()).collect())
        .collect();
    let sub_inv = inverse_block(ring, &sub, k - 1).map_err(|e| {
        AlgebraError::NotInvertible(format!("submatrix without row {} col {}: {}", i, j, e))
    })?;
    let mut corr = ring.zero();
    for (u, &c) in cols.iter().enumerate() {
        for (v, &r) in rows.iter().enumerate() {
            let t = ring.mul(&m.entries[i][c], &sub_inv[u][v])?;
            let t = ring.mul(&t, &m.entries[r][j])?;
            corr = ring.add(&corr, &t)?;
        }
    }
    ring.sub(&m.entries[i][j], &corr)
}

/// Principal quasiminors `d_1, ..., d_k` computed as the pivots of
/// noncommutative Gaussian elimination (iterated Schur complements of the
/// leading blocks).
pub fn principal_quasiminors<R: Ring>(
    ring: &R,
    m: &TypedMatrix<R::Elem>,
) -> Result<Vec<R::Elem>> {
    let k = m.size();
    let mut work = m.entries.clone();
    let mut out = Vec::with_capacity(k);
    for t in 0..k {
        let pivot = work[t][t].clone();
        out.push(pivot.clone());
        if t + 1 == k {
            break;
        }
        let piv_inv = ring.invert(&pivot).map_err(|e| {
            AlgebraError::NotInvertible(format!("principal quasiminor {}: {}", t + 1, e))
        })?;
        for i in t + 1..k {
            for j in t + 1..k {
                let left = ring.mul(&work[i][t], &piv_inv)?;
                let corr = ring.mul(&left, &work[t][j])?;
                work[i][j] = ring.sub(&work[i][j], &corr)?;
            }
        }
    }
    Ok(out)
}

/// Berezinian of the given type: the ordered product
/// `d_1^{e_1} ... d_k^{e_k}` of principal quasiminors, where `e_i` is +1
/// for an even slot of the type sequence and -1 for an odd one.
pub fn berezinian<R: Ring>(ring: &R, m: &TypedMatrix<R::Elem>) -> Result<R::Elem> {
    let minors = principal_quasiminors(ring, m)?;
    let mut acc = ring.one();
    for (i, d) in minors.iter().enumerate() {
        let factor = if m.signature[i].is_odd() {
            ring.invert(d).map_err(|e| {
                AlgebraError::NotInvertible(format!("quasiminor {} must invert: {}", i + 1, e))
            })?
        } else {
            d.clone()
        };
        acc = ring.mul(&acc, &factor)?;
    }
    Ok(acc)
}

/// First violating index quadruple of the Manin relation, if any:
/// `[a_{ij}, a_{kl}] = (-1)^{s_i s_j + s_i s_k + s_j s_k} [a_{kj}, a_{il}]`.
pub fn manin_witness<R: Ring>(
    ring: &R,
    m: &TypedMatrix<R::Elem>,
) -> Result<Option<(usize, usize, usize, usize)>> {
    let k = m.size();
    let s = |i: usize| m.signature[i].is_odd() as u32;
    let parity = |i: usize, j: usize| m.signature[i].plus(m.signature[j]);
    for i in 0..k {
        for j in 0..k {
            for r in 0..k {
                for l in 0..k {
                    let lhs = ring.supercommutator(
                        &m.entries[i][j],
                        parity(i, j),
                        &m.entries[r][l],
                        parity(r, l),
                    )?;
                    let mut rhs = ring.supercommutator(
                        &m.entries[r][j],
                        parity(r, j),
                        &m.entries[i][l],
                        parity(i, l),
                    )?;
                    if (s(i) * s(j) + s(i) * s(r) + s(j) * s(r)) % 2 == 1 {
                        rhs = ring.neg(&rhs);
                    }
                    if ring.sub(&lhs, &rhs).map(|d| !ring.is_zero(&d))? {
                        return Ok(Some((i, j, r, l)));
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn is_manin<R: Ring>(ring: &R, m: &TypedMatrix<R::Elem>) -> Result<bool> {
    Ok(manin_witness(ring, m)?.is_none())
}

/// Factor through the leading k-block: returns
/// `(Ber of W, Ber of Z - Y W^{-1} X)`, whose ordered product equals the
/// Berezinian of the whole matrix.
pub fn schur_factor_lower<R: Ring>(
    ring: &R,
    m: &TypedMatrix<R::Elem>,
    k: usize,
) -> Result<(R::Elem, R::Elem)> {
    let n = m.size();
    if k == 0 || k >= n {
        return Err(AlgebraError::InvalidInput("split must be interior".into()));
    }
    let top: Vec<usize> = (0..k).collect();
    let bottom: Vec<usize> = (k..n).collect();
    let w = m.submatrix(&top)?;
    let w_inv = inverse(ring, &w)?;
    let mut schur = Vec::with_capacity(n - k);
    for &i in &bottom {
        let mut row = Vec::with_capacity(n - k);
        for &j in &bottom {
            let mut corr = ring.zero();
            for u in 0..k {
                for v in 0..k {
                    let t = ring.mul(&m.entries[i][u], &w_inv[u][v])?;
                    let t = ring.mul(&t, &m.entries[v][j])?;
                    corr = ring.add(&corr, &t)?;
                }
            }
            row.push(ring.sub(&m.entries[i][j], &corr)?);
        }
        schur.push(row);
    }
    let schur_m = TypedMatrix::new(schur, bottom.iter().map(|&i| m.signature[i]).collect())?;
    Ok((berezinian(ring, &w)?, berezinian(ring, &schur_m)?))
}

/// Factor through the trailing block: returns
/// `(Ber of Z, Ber of W - X Z^{-1} Y)` with product equal to the
/// Berezinian taken in that order.
pub fn schur_factor_upper<R: Ring>(
    ring: &R,
    m: &TypedMatrix<R::Elem>,
    k: usize,
) -> Result<(R::Elem, R::Elem)> {
    let n = m.size();
    if k == 0 || k >= n {
        return Err(AlgebraError::InvalidInput("split must be interior".into()));
    }
    let top: Vec<usize> = (0..k).collect();
    let bottom: Vec<usize> = (k..n).collect();
    let z = m.submatrix(&bottom)?;
    let z_inv = inverse(ring, &z)?;
    let mut schur = Vec::with_capacity(k);
    for &i in &top {
        let mut row = Vec::with_capacity(k);
        for &j in &top {
            let mut corr = ring.zero();
            for (u_pos, &u) in bottom.iter().enumerate() {
                for (v_pos, &v) in bottom.iter().enumerate() {
                    let t = ring.mul(&m.entries[i][u], &z_inv[u_pos][v_pos])?;
                    let t = ring.mul(&t, &m.entries[v][j])?;
                    corr = ring.add(&corr, &t)?;
                }
            }
            row.push(ring.sub(&m.entries[i][j], &corr)?);
        }
        schur.push(row);
    }
    let schur_m = TypedMatrix::new(schur, top.iter().map(|&i| m.signature[i]).collect())?;
    Ok((berezinian(ring, &z)?, berezinian(ring, &schur_m)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, rat_int, Rationals};
    use num::BigRational;

    fn mat(rows: Vec<Vec<i64>>) -> TypedMatrix<BigRational> {
        let k = rows.len();
        TypedMatrix::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(rat_int).collect())
                .collect(),
            vec![Parity::Even; k],
        )
        .unwrap()
    }

    #[test]
    fn cdet_of_identity_and_2x2() {
        let r = Rationals;
        let id = mat(vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(cdet(&r, &id).unwrap(), rat_int(1));
        let a = mat(vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(cdet(&r, &a).unwrap(), rat_int(-2));
        assert_eq!(rdet(&r, &a).unwrap(), rat_int(-2));
    }

    #[test]
    fn cdet_column_multilinearity() {
        let r = Rationals;
        // replacing a column by a linear combination splits the value
        let a = mat(vec![vec![1, 2], vec![3, 4]]);
        let b = mat(vec![vec![1, -1], vec![3, 5]]);
        let mixed = mat(vec![vec![1, 2 * 3 + (-1) * 2], vec![3, 4 * 3 + 5 * 2]]);
        let expect = cdet(&r, &a).unwrap() * rat_int(3) + cdet(&r, &b).unwrap() * rat_int(2);
        assert_eq!(cdet(&r, &mixed).unwrap(), expect);
    }

    #[test]
    fn cdet_sign_under_column_swap() {
        let r = Rationals;
        let a = mat(vec![vec![1, 2, -1], vec![3, 4, 5], vec![0, 1, 2]]);
        let swapped = mat(vec![vec![2, 1, -1], vec![4, 3, 5], vec![1, 0, 2]]);
        assert_eq!(cdet(&r, &a).unwrap(), -cdet(&r, &swapped).unwrap());
    }

    #[test]
    fn quasideterminant_is_schur_expression() {
        let r = Rationals;
        let a = mat(vec![vec![2, 3], vec![5, 7]]);
        // |A|_{11} = a11 - a12 a22^{-1} a21
        let q = quasideterminant(&r, &a, 0, 0).unwrap();
        assert_eq!(q, rat_int(2) - rat_int(3) * rat(1, 7) * rat_int(5));
        // 1x1 returns the entry
        let b = mat(vec![vec![9]]);
        assert_eq!(quasideterminant(&r, &b, 0, 0).unwrap(), rat_int(9));
    }

    #[test]
    fn quasideterminant_inverse_consistency() {
        let r = Rationals;
        let a = mat(vec![vec![2, 3, 1], vec![5, 7, 0], vec![1, -1, 4]]);
        let inv = inverse(&r, &a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let q = quasideterminant(&r, &a, i, j).unwrap();
                // |A|_{ij} * (A^{-1})_{ji} = 1
                assert_eq!(&q * &inv[j][i], rat_int(1), "({}, {})", i, j);
            }
        }
    }

    #[test]
    fn pivots_match_quasiminors() {
        let r = Rationals;
        let a = mat(vec![vec![2, 3, 1], vec![5, 7, 0], vec![1, -1, 4]]);
        let pivots = principal_quasiminors(&r, &a).unwrap();
        for i in 1..=3usize {
            let idx: Vec<usize> = (0..i).collect();
            let sub = a.submatrix(&idx).unwrap();
            let direct = quasideterminant(&r, &sub, i - 1, i - 1).unwrap();
            assert_eq!(pivots[i - 1], direct, "minor {}", i);
        }
        // for commutative entries the product of pivots is the determinant
        let prod: BigRational = pivots.iter().product();
        assert_eq!(prod, cdet(&r, &a).unwrap());
    }

    #[test]
    fn berezinian_pure_types_commutative() {
        let r = Rationals;
        let mut a = mat(vec![vec![2, 1], vec![1, 3]]);
        // type (0,0): Ber = det
        assert_eq!(berezinian(&r, &a).unwrap(), rat_int(5));
        // type (1,1): Ber = 1/det
        a.signature = vec![Parity::Odd, Parity::Odd];
        assert_eq!(berezinian(&r, &a).unwrap(), rat(1, 5));
    }

    #[test]
    fn identity_berezinian_any_type() {
        let r = Rationals;
        let mut id = mat(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        id.signature = vec![Parity::Even, Parity::Odd, Parity::Even];
        assert_eq!(berezinian(&r, &id).unwrap(), rat_int(1));
    }

    #[test]
    fn commutative_matrices_are_manin() {
        let r = Rationals;
        let a = mat(vec![vec![2, 3], vec![5, 7]]);
        assert!(is_manin(&r, &a).unwrap());
    }

    #[test]
    fn schur_factorizations_agree_with_berezinian() {
        // all-even type over a commutative ring: both splits factor det
        let r = Rationals;
        let a = mat(vec![vec![2, 1, 1], vec![0, 3, 2], vec![1, 1, 4]]);
        let ber = berezinian(&r, &a).unwrap();
        assert_eq!(ber, cdet(&r, &a).unwrap());
        for k in 1..3 {
            let (f1, f2) = schur_factor_lower(&r, &a, k).unwrap();
            assert_eq!(&f1 * &f2, ber, "lower split {}", k);
            let (g1, g2) = schur_factor_upper(&r, &a, k).unwrap();
            assert_eq!(&g1 * &g2, ber, "upper split {}", k);
        }
    }

    #[test]
    fn mixed_type_supercommutative_factorization() {
        // 2x2 with genuinely odd off-diagonal entries over polynomials
        use crate::superpoly::{GenId, Generator, SuperPoly, SuperPolyRing};
        let r = SuperPolyRing;
        let theta = |i: u16| {
            SuperPoly::generator(Generator::new(GenId::Y { sup: 1, sub: i }, Parity::Odd))
        };
        let a = TypedMatrix::new(
            vec![
                vec![SuperPoly::constant(rat_int(2)), theta(1)],
                vec![theta(2), SuperPoly::constant(rat_int(3))],
            ],
            vec![Parity::Even, Parity::Odd],
        )
        .unwrap();
        check_type(&r, &a).unwrap();
        assert!(is_manin(&r, &a).unwrap());
        let ber = berezinian(&r, &a).unwrap();
        let (f1, f2) = schur_factor_lower(&r, &a, 1).unwrap();
        assert_eq!(r.mul(&f1, &f2).unwrap(), ber);
        let (g1, g2) = schur_factor_upper(&r, &a, 1).unwrap();
        assert_eq!(r.mul(&g1, &g2).unwrap(), ber);
        // permutation invariance of the Berezinian for Manin matrices
        let p = a.permute(&[1, 0]).unwrap();
        assert_eq!(berezinian(&r, &p).unwrap(), ber);
    }

    #[test]
    fn permutation_preserves_commutative_berezinian() {
        let r = Rationals;
        let a = mat(vec![vec![2, 1], vec![1, 3]]);
        let p = a.permute(&[1, 0]).unwrap();
        assert_eq!(berezinian(&r, &a).unwrap(), berezinian(&r, &p).unwrap());
        assert_eq!(p.entries[0][0], rat_int(3));
    }
}
