//! Construction of the Gaudin generating matrices: the series image of
//! current-algebra generators with poles at the singular points, the
//! spectral-parameter matrices for the even and super sides, Jordan-block
//! characters, and extraction of generator families from determinant and
//! Berezinian series.

use num::BigRational;
use num::Zero;
use std::collections::BTreeMap;

use crate::envalg::{Enveloping, GlAlgebra, PbwElement, TakiffSum};
use crate::error::{AlgebraError, Result};
use crate::ncmatrix::TypedMatrix;
use crate::psdo::{DzForm, PsdoRing, Symbol, SymbolKind, TruncatedPsdo, Window};
use crate::ring::{Parity, Ring};

/// Singular points with their orders.
#[derive(Debug, Clone)]
pub struct SingularityData {
    pub points: Vec<BigRational>,
    pub orders: Vec<u32>,
}

impl SingularityData {
    pub fn new(points: Vec<BigRational>, orders: Vec<u32>) -> Result<Self> {
        if points.len() != orders.len() || points.is_empty() {
            return Err(AlgebraError::InvalidInput(
                "points and orders must be nonempty and aligned".into(),
            ));
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(AlgebraError::InvalidInput(format!(
                        "singular points must be distinct, {} repeats",
                        points[i]
                    )));
                }
            }
        }
        if orders.contains(&0) {
            return Err(AlgebraError::InvalidInput("orders must be >= 1".into()));
        }
        Ok(SingularityData { points, orders })
    }
}

/// A character of the even part, tabulated on the matrix-unit basis.
#[derive(Debug, Clone, Default)]
pub struct CharacterTable {
    pub values: BTreeMap<(u16, u16), BigRational>,
}

impl CharacterTable {
    pub fn zero() -> Self {
        CharacterTable::default()
    }

    pub fn value(&self, i: u16, j: u16) -> BigRational {
        self.values
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    fn from_jordan(
        points: &[BigRational],
        orders: &[u32],
        sign_of_row: impl Fn(u16) -> i64,
    ) -> Self {
        let mut values = BTreeMap::new();
        let mut offset: u16 = 0;
        for (block, size) in orders.iter().enumerate() {
            for t in 0..*size as u16 {
                let row = offset + t + 1;
                let s = BigRational::from(num::BigInt::from(sign_of_row(row)));
                let v = &points[block] * &s;
                if !v.is_zero() {
                    values.insert((row, row), v);
                }
                if t + 1 < *size as u16 {
                    values.insert((row, row + 1), s.clone());
                }
            }
            offset += *size as u16;
        }
        CharacterTable { values }
    }

    /// The even-side Jordan character: minus the block-Jordan matrix with
    /// the given eigenvalues and block sizes.
    pub fn jordan_d(points: &[BigRational], orders: &[u32]) -> Result<Self> {
        if points.len() != orders.len() {
            return Err(AlgebraError::InvalidInput("jordan data misaligned".into()));
        }
        Ok(Self::from_jordan(points, orders, |_| -1))
    }

    /// The super-side Jordan character `(-1)^{|i|+1} J(z)_{i,j}`. Blocks
    /// must not straddle a parity boundary, so that the character
    /// vanishes on the odd part.
    pub fn jordan_s(gl: &GlAlgebra, points: &[BigRational], orders: &[u32]) -> Result<Self> {
        if points.len() != orders.len() {
            return Err(AlgebraError::InvalidInput("jordan data misaligned".into()));
        }
        let total: u32 = orders.iter().sum();
        if total != gl.size() as u32 {
            return Err(AlgebraError::InvalidInput(format!(
                "orders sum to {} but the superalgebra has {} directions",
                total,
                gl.size()
            )));
        }
        let mut offset: u16 = 0;
        for size in orders {
            for t in 0..(*size as u16).saturating_sub(1) {
                let row = offset + t + 1;
                if gl.index_parity(row) != gl.index_parity(row + 1) {
                    return Err(AlgebraError::InvalidInput(format!(
                        "jordan block straddles the parity boundary at index {}",
                        row
                    )));
                }
            }
            offset += *size as u16;
        }
        let table = Self::from_jordan(points, orders, |row| {
            if gl.index_parity(row).is_odd() {
                1
            } else {
                -1
            }
        });
        Ok(table)
    }

    /// A character must vanish on odd basis elements.
    pub fn check_even_support(&self, gl: &GlAlgebra) -> Result<()> {
        for ((i, j), v) in &self.values {
            if !v.is_zero() && gl.index_parity(*i).plus(gl.index_parity(*j)).is_odd() {
                return Err(AlgebraError::InvalidInput(format!(
                    "character does not vanish on the odd element E[{},{}]",
                    i, j
                )));
            }
        }
        Ok(())
    }
}

/// Everything needed to build series and matrices over one Takiff sum.
pub struct GaudinContext {
    pub takiff: TakiffSum,
    pub env: Enveloping,
    pub ring: PsdoRing<Enveloping>,
}

pub type USeries = TruncatedPsdo<PbwElement>;

impl GaudinContext {
    pub fn new(base: GlAlgebra, sing: &SingularityData, window: Window) -> Result<Self> {
        let takiff = TakiffSum::new(base, sing.points.clone(), sing.orders.clone())?;
        let env = Enveloping::new(takiff.algebra.clone());
        let ring = PsdoRing::new(env.clone(), SymbolKind::WeylPair, window)?;
        Ok(GaudinContext { takiff, env, ring })
    }

    /// The series image of `E^i_j (x) t^{-1}` with poles in the z symbol:
    /// `-sum_sites sum_k (E^i_j (x) t^k at site) / (z - point)^{k+1}`
    /// plus the character value.
    pub fn psi_generator(&self, i: u16, j: u16, mu: &CharacterTable) -> Result<USeries> {
        self.psi_generator_in(Symbol::Z, i, j, mu)
    }

    /// Same expansion with poles in the derivative symbol.
    pub fn psi_generator_dpoles(&self, i: u16, j: u16, mu: &CharacterTable) -> Result<USeries> {
        self.psi_generator_in(Symbol::D, i, j, mu)
    }

    fn psi_generator_in(
        &self,
        symbol: Symbol,
        i: u16,
        j: u16,
        mu: &CharacterTable,
    ) -> Result<USeries> {
        let mut acc = self.ring.zero();
        for site in 0..self.takiff.sites() {
            for k in 0..self.takiff.orders[site] {
                let pole = self
                    .ring
                    .pole_expand(symbol, &self.takiff.points[site], k + 1)?;
                let gen = self.ring.monomial(
                    0,
                    0,
                    self.env.generator_elt(self.takiff.gen(site, i, j, k)?),
                );
                let term = self.ring.mul(&gen, &pole)?;
                acc = self.ring.sub(&acc, &term)?;
            }
        }
        let c = mu.value(i, j);
        if !c.is_zero() {
            acc = self
                .ring
                .add(&acc, &self.ring.monomial(0, 0, self.env.from_rational(&c)))?;
        }
        Ok(acc)
    }

    /// Spectral matrix with entries `delta_{ij} d + psi(E^i_j (x) t^{-1})`
    /// over the even base; type sequence all-even.
    pub fn build_l_d(&self, mu: &CharacterTable) -> Result<TypedMatrix<USeries>> {
        let d = self.takiff.base.size();
        let mut rows = Vec::with_capacity(d as usize);
        for i in 1..=d {
            let mut row = Vec::with_capacity(d as usize);
            for j in 1..=d {
                let mut e = self.psi_generator(i, j, mu)?;
                if i == j {
                    e = self
                        .ring
                        .add(&e, &self.ring.monomial(0, 1, self.env.one()))?;
                }
                row.push(e);
            }
            rows.push(row);
        }
        TypedMatrix::new(rows, vec![Parity::Even; d as usize])
    }

    /// The partner matrix with the roles of the symbols exchanged, built
    /// directly: entry (i, j) is
    /// `delta_{ij} z + mu(e_{ji}) - sum (e_{ji} (x) t^k) (d - point)^{-k-1}`.
    pub fn build_l_d_hat_direct(&self, mu: &CharacterTable) -> Result<TypedMatrix<USeries>> {
        let d = self.takiff.base.size();
        let mut rows = Vec::with_capacity(d as usize);
        for i in 1..=d {
            let mut row = Vec::with_capacity(d as usize);
            for j in 1..=d {
                // note the transposed basis index
                let mut e = self.psi_generator_dpoles(j, i, mu)?;
                if i == j {
                    e = self
                        .ring
                        .add(&e, &self.ring.monomial(1, 0, self.env.one()))?;
                }
                row.push(e);
            }
            rows.push(row);
        }
        TypedMatrix::new(rows, vec![Parity::Even; d as usize])
    }

    /// The same matrix built the defining way: minus the symbol exchange
    /// applied to `delta_{ij} d - psi(e_{ji} (x) t^{-1})` entrywise.
    pub fn build_l_d_hat_omega(&self, mu: &CharacterTable) -> Result<TypedMatrix<USeries>> {
        let d = self.takiff.base.size();
        let mut rows = Vec::with_capacity(d as usize);
        for i in 1..=d {
            let mut row = Vec::with_capacity(d as usize);
            for j in 1..=d {
                let psi = self.psi_generator(j, i, mu)?;
                let mut pre = self.ring.neg(&psi);
                if i == j {
                    pre = self
                        .ring
                        .add(&pre, &self.ring.monomial(0, 1, self.env.one()))?;
                }
                row.push(self.ring.neg(&self.ring.omega(&pre)?));
            }
            rows.push(row);
        }
        TypedMatrix::new(rows, vec![Parity::Even; d as usize])
    }

    /// Super-side spectral matrix: entry (i, j) is
    /// `delta_{ij} d + (-1)^{|i|} psi(E^i_j (x) t^{-1})`, of the type
    /// carried by the base superalgebra.
    pub fn build_l_s(&self, mu: &CharacterTable) -> Result<TypedMatrix<USeries>> {
        mu.check_even_support(&self.takiff.base)?;
        let sz = self.takiff.base.size();
        let mut rows = Vec::with_capacity(sz as usize);
        for i in 1..=sz {
            let sign = if self.takiff.base.index_parity(i).is_odd() {
                BigRational::from(num::BigInt::from(-1))
            } else {
                BigRational::from(num::BigInt::from(1))
            };
            let mut row = Vec::with_capacity(sz as usize);
            for j in 1..=sz {
                let psi = self.psi_generator(i, j, mu)?;
                let mut e = self.ring.scale(&psi, &sign);
                if i == j {
                    e = self
                        .ring
                        .add(&e, &self.ring.monomial(0, 1, self.env.one()))?;
                }
                row.push(e);
            }
            rows.push(row);
        }
        TypedMatrix::new(rows, self.takiff.base.type_sequence())
    }
}

/// Which series a generator family was extracted from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorRole {
    /// determinant of the plain matrix: series in z times powers of d
    CdetD,
    /// determinant of the exchanged matrix: series in d times powers of z
    CdetDHat,
    /// Berezinian of the super matrix: series in z times powers of d
    BerS,
}

/// One window coefficient of a generating series.
#[derive(Debug, Clone)]
pub struct ExtractedGenerator<E> {
    pub z_exp: i64,
    pub d_exp: i64,
    pub value: E,
}

/// Pull every trustworthy window coefficient out of a generating series.
/// The exchanged role re-expresses the series with derivative powers on
/// the left before reading off slots.
pub fn extract_generators<R: Ring>(
    ring: &PsdoRing<R>,
    series: &TruncatedPsdo<R::Elem>,
    role: GeneratorRole,
) -> Result<Vec<ExtractedGenerator<R::Elem>>> {
    fn collect<E: Clone>(
        terms: &BTreeMap<(i64, i64), E>,
        window: &Window,
    ) -> Vec<ExtractedGenerator<E>> {
        terms
            .iter()
            .filter(|((i, j), _)| window.contains(*i, *j))
            .map(|((i, j), v)| ExtractedGenerator {
                z_exp: *i,
                d_exp: *j,
                value: v.clone(),
            })
            .collect()
    }
    match role {
        GeneratorRole::CdetD | GeneratorRole::BerS => Ok(collect(&series.terms, &series.window)),
        GeneratorRole::CdetDHat => {
            let dz: DzForm<R::Elem> = ring.to_dz_form(series)?;
            Ok(collect(&dz.terms, &dz.window))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncmatrix;
    use crate::ring::{rat, rat_int};

    fn window() -> Window {
        Window::working(-6, 3, -6, 3).unwrap()
    }

    #[test]
    fn psi_single_regular_site() {
        let gl1 = GlAlgebra::gl_d(1).unwrap();
        let sing = SingularityData::new(vec![rat(2, 1)], vec![1]).unwrap();
        let ctx = GaudinContext::new(gl1, &sing, window()).unwrap();
        let s = ctx.psi_generator(1, 1, &CharacterTable::zero()).unwrap();
        // - sum_j 2^j z^{-j-1} A
        let a0 = ctx.env.generator_elt(ctx.takiff.gen(0, 1, 1, 0).unwrap());
        for j in 0..5i64 {
            let expect = a0.scale_by(&-num::pow::pow(rat(2, 1), j as usize));
            assert_eq!(s.coefficient(-j - 1, 0), Some(&expect), "j={}", j);
        }
        // nonzero character adds a constant slot
        let mut mu = CharacterTable::zero();
        mu.values.insert((1, 1), rat(7, 1));
        let s2 = ctx.psi_generator(1, 1, &mu).unwrap();
        assert_eq!(
            s2.coefficient(0, 0),
            Some(&ctx.env.from_rational(&rat(7, 1)))
        );
    }

    #[test]
    fn psi_matches_evaluation_map() {
        // the z^{-r-1} slot must be minus the order-respecting evaluation
        // of E^i_j (x) t^r summed over sites
        let gl2 = GlAlgebra::new(0, 0, 1, 1).unwrap();
        let sing = SingularityData::new(vec![rat(1, 2), rat(-1, 3)], vec![2, 1]).unwrap();
        let ctx = GaudinContext::new(gl2, &sing, window()).unwrap();
        let s = ctx.psi_generator(1, 2, &CharacterTable::zero()).unwrap();
        for r in 0..5u32 {
            let ev = ctx.takiff.evaluate_generator(&ctx.env, 1, 2, r).unwrap();
            let slot = s
                .coefficient(-(r as i64) - 1, 0)
                .cloned()
                .unwrap_or_else(|| ctx.env.zero());
            assert_eq!(slot, ctx.env.neg(&ev), "r={}", r);
        }
        // two sites: the z^{-1} slot is minus the sum of degree-zero gens
        let deg0 = ctx
            .env
            .add(
                &ctx.env.generator_elt(ctx.takiff.gen(0, 1, 2, 0).unwrap()),
                &ctx.env.generator_elt(ctx.takiff.gen(1, 1, 2, 0).unwrap()),
            )
            .unwrap();
        assert_eq!(s.coefficient(-1, 0), Some(&ctx.env.neg(&deg0)));
    }

    #[test]
    fn hat_constructors_agree() {
        let gl2 = GlAlgebra::gl_d(2).unwrap();
        let sing = SingularityData::new(vec![rat(1, 1), rat(-1, 2)], vec![1, 2]).unwrap();
        let ctx = GaudinContext::new(gl2, &sing, window()).unwrap();
        let mu = CharacterTable::jordan_d(&[rat(3, 1)], &[2]).unwrap();
        let direct = ctx.build_l_d_hat_direct(&mu).unwrap();
        let via_omega = ctx.build_l_d_hat_omega(&mu).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let cmp =
                    crate::psdo::compare_series(direct.entry(i, j), via_omega.entry(i, j));
                assert!(cmp.equal(), "entry ({}, {}): {:?}", i, j, cmp.mismatches);
                assert!(cmp.compared_slots > 0);
            }
        }
    }

    #[test]
    fn l_matrices_are_manin() {
        let gl2 = GlAlgebra::gl_d(2).unwrap();
        let sing = SingularityData::new(vec![rat(0, 1)], vec![2]).unwrap();
        let ctx = GaudinContext::new(gl2, &sing, window()).unwrap();
        let l = ctx.build_l_d(&CharacterTable::zero()).unwrap();
        assert!(ncmatrix::is_manin(&ctx.ring, &l).unwrap());
        // super side with a mixed type
        let gls = GlAlgebra::new(0, 0, 1, 1).unwrap();
        let sing2 = SingularityData::new(vec![rat(1, 1)], vec![1]).unwrap();
        let ctx2 = GaudinContext::new(gls, &sing2, window()).unwrap();
        let ls = ctx2.build_l_s(&CharacterTable::zero()).unwrap();
        ncmatrix::check_type(&ctx2.ring, &ls).unwrap();
        assert!(ncmatrix::is_manin(&ctx2.ring, &ls).unwrap());
        // corrupting one entry must produce a witness
        let mut bad = ls.clone();
        bad.entries[0][1] = ctx2
            .ring
            .mul(
                &bad.entries[0][1],
                &ctx2.ring.monomial(1, 0, ctx2.env.one()),
            )
            .unwrap();
        assert!(ncmatrix::manin_witness(&ctx2.ring, &bad)
            .unwrap()
            .is_some());
    }

    #[test]
    fn cdet_leading_symbols() {
        let gl2 = GlAlgebra::gl_d(2).unwrap();
        let sing = SingularityData::new(vec![rat(1, 1), rat(2, 1)], vec![1, 1]).unwrap();
        let ctx = GaudinContext::new(gl2, &sing, window()).unwrap();
        let l = ctx.build_l_d(&CharacterTable::zero()).unwrap();
        let det = ncmatrix::cdet(&ctx.ring, &l).unwrap();
        // leading symbol d^2
        assert_eq!(det.coefficient(0, 2), Some(&ctx.env.one()));
        let gens = extract_generators(&ctx.ring, &det, GeneratorRole::CdetD).unwrap();
        assert!(gens.iter().any(|g| g.z_exp == 0 && g.d_exp == 2));
        // exchanged matrix: leading slot z^2 in the other order
        let hat = ctx.build_l_d_hat_direct(&CharacterTable::zero()).unwrap();
        let det_hat = ncmatrix::cdet(&ctx.ring, &hat).unwrap();
        let hat_gens =
            extract_generators(&ctx.ring, &det_hat, GeneratorRole::CdetDHat).unwrap();
        let top = hat_gens
            .iter()
            .find(|g| g.z_exp == 2 && g.d_exp == 0)
            .expect("z^2 slot");
        assert_eq!(top.value, ctx.env.one());
    }

    #[test]
    fn extracted_generators_supercommute_small() {
        // one irregular site over gl_2; the determinant coefficients all
        // commute in the enveloping algebra
        let gl2 = GlAlgebra::gl_d(2).unwrap();
        let sing = SingularityData::new(vec![rat(1, 2)], vec![2]).unwrap();
        let small = Window::working(-3, 2, -3, 2).unwrap();
        let ctx = GaudinContext::new(gl2, &sing, small).unwrap();
        let mu = CharacterTable::jordan_d(&[rat(2, 1), rat(-1, 1)], &[1, 1]).unwrap();
        let l = ctx.build_l_d(&mu).unwrap();
        let det = ncmatrix::cdet(&ctx.ring, &l).unwrap();
        let gens = extract_generators(&ctx.ring, &det, GeneratorRole::CdetD).unwrap();
        assert!(gens.len() > 3);
        for a in &gens {
            for b in &gens {
                let c = ctx.env.supercommutator_elt(&a.value, &b.value).unwrap();
                assert!(
                    c.is_zero(),
                    "generators at ({},{}) and ({},{}) fail to commute",
                    a.z_exp,
                    a.d_exp,
                    b.z_exp,
                    b.d_exp
                );
            }
        }
    }

    #[test]
    fn jordan_characters() {
        // a single 2x2 block at w: diagonal -w, superdiagonal -1
        let mu = CharacterTable::jordan_d(&[rat(5, 1)], &[2]).unwrap();
        assert_eq!(mu.value(1, 1), rat(-5, 1));
        assert_eq!(mu.value(1, 2), rat_int(-1));
        assert_eq!(mu.value(2, 1), rat_int(0));
        assert_eq!(mu.value(2, 2), rat(-5, 1));
        // diagonal data
        let mu2 = CharacterTable::jordan_d(&[rat(1, 1), rat(2, 1)], &[1, 1]).unwrap();
        assert_eq!(mu2.value(1, 1), rat(-1, 1));
        assert_eq!(mu2.value(2, 2), rat(-2, 1));
        assert_eq!(mu2.value(1, 2), rat_int(0));
        // super side, regular: the diagonal carries (-1)^{|i|+1} z_i
        let gl = GlAlgebra::new(1, 1, 0, 0).unwrap();
        let nu = CharacterTable::jordan_s(&gl, &[rat(3, 1), rat(4, 1)], &[1, 1]).unwrap();
        assert_eq!(nu.value(1, 1), rat(-3, 1)); // even row
        assert_eq!(nu.value(2, 2), rat(4, 1)); // odd row
        nu.check_even_support(&gl).unwrap();
        // a block crossing the parity boundary is rejected
        assert!(CharacterTable::jordan_s(&gl, &[rat(1, 1)], &[2]).is_err());
    }
}
