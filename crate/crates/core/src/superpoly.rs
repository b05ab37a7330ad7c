//! Supercommutative polynomial superalgebras over exact rationals.
//!
//! Hosts the Fock space `F` (variables x, y), the classical Weyl algebra
//! (x, y and their momenta) with its Poisson bracket, and supersymmetric
//! algebras on abstract Lie-algebra generators. Monomials are kept in a
//! fixed global generator order so the stored form is canonical; odd
//! generators square to zero.

use std::collections::BTreeMap;

use num::BigRational;
use num::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::ring::{rat_int, Homogeneity, Parity, Ring};

/// Identity of a polynomial generator. The global order is the derived
/// lexicographic one: kind, then superscript, then subscript.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenId {
    /// Fock variable `x^a_i`
    X { sup: u16, sub: u16 },
    /// Fock variable `y^a_r`
    Y { sup: u16, sub: u16 },
    /// classical momentum `p_{x^a_i}`
    Px { sup: u16, sub: u16 },
    /// classical momentum `p_{y^a_r}`
    Py { sup: u16, sub: u16 },
    /// abstract basis generator of a Lie superalgebra (index into its basis)
    Basis { idx: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub id: GenId,
    pub parity: Parity,
}

impl Generator {
    pub fn new(id: GenId, parity: Parity) -> Self {
        Generator { id, parity }
    }
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.id {
            GenId::X { sup, sub } => write!(f, "x^{}_{}", sup, sub),
            GenId::Y { sup, sub } => write!(f, "y^{}_{}", sup, sub),
            GenId::Px { sup, sub } => write!(f, "px^{}_{}", sup, sub),
            GenId::Py { sup, sub } => write!(f, "py^{}_{}", sup, sub),
            GenId::Basis { idx } => write!(f, "g{}", idx),
        }
    }
}

/// Sorted sequence of (generator, exponent) pairs with positive exponents;
/// odd generators carry exponent exactly 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub Vec<(Generator, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(g: Generator) -> Self {
        Monomial(vec![(g, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|(_, e)| *e as u64).sum()
    }

    pub fn parity(&self) -> Parity {
        let odd: u64 = self
            .0
            .iter()
            .filter(|(g, _)| g.parity.is_odd())
            .map(|(_, e)| *e as u64)
            .sum();
        if odd.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn check_exponents(&self) -> Result<()> {
        for (g, e) in &self.0 {
            if g.parity.is_odd() && *e > 1 {
                return Err(AlgebraError::InvalidInput(format!(
                    "odd generator {} with exponent {}",
                    g, e
                )));
            }
        }
        Ok(())
    }

    /// Build from unsorted factors; returns the canonical monomial and the
    /// reordering sign, or `None` if an odd generator repeats.
    pub fn from_factors(mut factors: Vec<Generator>) -> Option<(Monomial, i64)> {
        // insertion sort, counting odd-odd transpositions
        let mut sign = 1i64;
        for i in 1..factors.len() {
            let mut j = i;
            while j > 0 && factors[j - 1] > factors[j] {
                if factors[j - 1].parity.is_odd() && factors[j].parity.is_odd() {
                    sign = -sign;
                }
                factors.swap(j - 1, j);
                j -= 1;
            }
        }
        let mut out: Vec<(Generator, u32)> = Vec::new();
        for g in factors {
            match out.last_mut() {
                Some((h, e)) if *h == g => {
                    if g.parity.is_odd() {
                        return None;
                    }
                    *e += 1;
                }
                _ => out.push((g, 1)),
            }
        }
        Some((Monomial(out), sign))
    }

    /// Merge two canonical monomials. Returns `Ok(None)` when the product
    /// vanishes (repeated odd generator); the sign is the Koszul sign
    /// accumulated while interleaving.
    pub fn mul(&self, other: &Monomial) -> Result<Option<(Monomial, i64)>> {
        let mut out: Vec<(Generator, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let mut sign = 1i64;
        let mut ia = 0;
        let mut ib = 0;
        // odd degree of the remaining tail of self
        let mut odd_tail: u64 = self
            .0
            .iter()
            .filter(|(g, _)| g.parity.is_odd())
            .map(|(_, e)| *e as u64)
            .sum();
        let a = &self.0;
        let b = &other.0;
        while ia < a.len() || ib < b.len() {
            let take_b = if ia == a.len() {
                true
            } else if ib == b.len() {
                false
            } else {
                match a[ia].0.id.cmp(&b[ib].0.id) {
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Equal => {
                        if a[ia].0.parity != b[ib].0.parity {
                            return Err(AlgebraError::Mismatch(format!(
                                "generator {} carries two parities",
                                a[ia].0
                            )));
                        }
                        if a[ia].0.parity.is_odd() {
                            return Ok(None);
                        }
                        // merge exponents; no crossing sign for even gens
                        out.push((a[ia].0, a[ia].1 + b[ib].1));
                        ia += 1;
                        ib += 1;
                        continue;
                    }
                }
            };
            if take_b {
                let (g, e) = b[ib];
                // g crosses the odd tail of a
                if g.parity.is_odd() && (e as u64 * odd_tail) % 2 == 1 {
                    sign = -sign;
                }
                push_merge(&mut out, g, e)?;
                ib += 1;
            } else {
                let (g, e) = a[ia];
                if g.parity.is_odd() {
                    odd_tail -= e as u64;
                }
                push_merge(&mut out, g, e)?;
                ia += 1;
            }
        }
        let m = Monomial(out);
        m.check_exponents().map_err(|_| {
            AlgebraError::InvalidInput("odd generator squared during merge".into())
        })?;
        Ok(Some((m, sign)))
    }
}

fn push_merge(out: &mut Vec<(Generator, u32)>, g: Generator, e: u32) -> Result<()> {
    match out.last_mut() {
        Some((h, f)) if h.id == g.id => {
            if h.parity != g.parity {
                return Err(AlgebraError::Mismatch(format!(
                    "generator {} carries two parities",
                    g
                )));
            }
            if g.parity.is_odd() {
                // caller treats as zero product
                *f += e;
            } else {
                *f += e;
            }
        }
        _ => out.push((g, e)),
    }
    Ok(())
}

/// Sparse supercommutative polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SuperPoly {
    pub terms: BTreeMap<Monomial, BigRational>,
}

impl SuperPoly {
    pub fn zero() -> Self {
        SuperPoly::default()
    }

    pub fn one() -> Self {
        SuperPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        SuperPoly { terms }
    }

    pub fn generator(g: Generator) -> Self {
        SuperPoly::from_term(Monomial::generator(g), BigRational::one())
    }

    pub fn from_term(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SuperPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &SuperPoly) -> SuperPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> SuperPoly {
        SuperPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &SuperPoly) -> SuperPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> SuperPoly {
        if c.is_zero() {
            return SuperPoly::zero();
        }
        SuperPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Supercommutative product; errors only on inconsistent generator data.
    pub fn mul(&self, other: &SuperPoly) -> Result<SuperPoly> {
        let mut out = SuperPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, sign)) = ma.mul(mb)? {
                    out.add_term(m, ca * cb * rat_int(sign));
                }
            }
        }
        Ok(out)
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut h = Homogeneity::Zero;
        for m in self.terms.keys() {
            h = h.merge(Homogeneity::Homogeneous(m.parity()));
        }
        h
    }

    /// Split into parity-homogeneous components (even, odd).
    pub fn parity_split(&self) -> (SuperPoly, SuperPoly) {
        let mut even = SuperPoly::zero();
        let mut odd = SuperPoly::zero();
        for (m, c) in &self.terms {
            match m.parity() {
                Parity::Even => even.add_term(m.clone(), c.clone()),
                Parity::Odd => odd.add_term(m.clone(), c.clone()),
            }
        }
        (even, odd)
    }

    /// Decomposition by Fock degree: each monomial contributes
    /// `#x-factors - #y-factors`. Momentum or abstract generators are
    /// rejected, matching the degree operator's domain.
    pub fn degree_decompose(&self) -> Result<BTreeMap<i64, SuperPoly>> {
        let mut out: BTreeMap<i64, SuperPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut deg = 0i64;
            for (g, e) in &m.0 {
                match g.id {
                    GenId::X { .. } => deg += *e as i64,
                    GenId::Y { .. } => deg -= *e as i64,
                    _ => {
                        return Err(AlgebraError::InvalidInput(format!(
                            "degree operator applies to Fock variables only, found {}",
                            g
                        )))
                    }
                }
            }
            out.entry(deg)
                .or_insert_with(SuperPoly::zero)
                .add_term(m.clone(), c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        Ok(out)
    }
}

impl std::fmt::Display for SuperPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (g, e) in &m.0 {
                if *e == 1 {
                    write!(f, "*{}", g)?;
                } else {
                    write!(f, "*{}^{}", g, e)?;
                }
            }
        }
        Ok(())
    }
}

/// The supercommutative ring object.
#[derive(Debug, Clone, Copy, Default)]
pub struct SuperPolyRing;

impl Ring for SuperPolyRing {
    type Elem = SuperPoly;

    fn zero(&self) -> SuperPoly {
        SuperPoly::zero()
    }
    fn one(&self) -> SuperPoly {
        SuperPoly::one()
    }
    fn is_zero(&self, a: &SuperPoly) -> bool {
        a.is_zero()
    }
    fn neg(&self, a: &SuperPoly) -> SuperPoly {
        a.neg()
    }
    fn add(&self, a: &SuperPoly, b: &SuperPoly) -> Result<SuperPoly> {
        Ok(a.add(b))
    }
    fn add_assign(&self, a: &mut SuperPoly, b: &SuperPoly) -> Result<()> {
        for (m, c) in &b.terms {
            a.add_term(m.clone(), c.clone());
        }
        Ok(())
    }
    fn add_scaled_assign(&self, a: &mut SuperPoly, b: &SuperPoly, c: &BigRational) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        for (m, k) in &b.terms {
            a.add_term(m.clone(), k * c);
        }
        Ok(())
    }
    fn mul(&self, a: &SuperPoly, b: &SuperPoly) -> Result<SuperPoly> {
        a.mul(b)
    }
    fn scale(&self, a: &SuperPoly, c: &BigRational) -> SuperPoly {
        a.scale(c)
    }
    fn invert(&self, a: &SuperPoly) -> Result<SuperPoly> {
        // invertible iff the constant term is nonzero and everything else
        // is nilpotent (here: every non-constant monomial has odd content)
        let Some(c) = a.terms.get(&Monomial::one()) else {
            return Err(AlgebraError::NotInvertible(
                "polynomial has no constant term".into(),
            ));
        };
        if c.is_zero() {
            return Err(AlgebraError::NotInvertible("zero constant term".into()));
        }
        let mut nil = a.clone();
        nil.terms.remove(&Monomial::one());
        if nil.is_zero() {
            return Ok(SuperPoly::constant(c.recip()));
        }
        if nil
            .terms
            .keys()
            .any(|m| m.0.iter().all(|(g, _)| !g.parity.is_odd()))
        {
            return Err(AlgebraError::NotInvertible(
                "non-constant even part is not nilpotent".into(),
            ));
        }
        // geometric series c^{-1} sum (-nil/c)^k, finite by nilpotency
        let n = nil.scale(&(-c.recip()));
        let mut acc = SuperPoly::one();
        let mut term = SuperPoly::one();
        loop {
            term = term.mul(&n)?;
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        Ok(acc.scale(&c.recip()))
    }
    fn homogeneity(&self, a: &SuperPoly) -> Homogeneity {
        a.homogeneity()
    }
}

/// A Poisson structure is determined by its values on pairs of generators;
/// it extends to polynomials by bilinearity and the graded Leibniz rule.
pub trait PoissonStructure {
    fn bracket_generators(&self, a: &Generator, b: &Generator) -> Result<SuperPoly>;
}

/// Canonical bracket of the classical Weyl algebra:
/// `{p_{x^a_i}, x^b_j} = delta delta`, `{p_{y^a_r}, y^b_s} = delta delta`,
/// all other generator pairs bracket to zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct CanonicalPairs;

impl PoissonStructure for CanonicalPairs {
    fn bracket_generators(&self, a: &Generator, b: &Generator) -> Result<SuperPoly> {
        let paired = |u: &GenId, v: &GenId| -> bool {
            matches!(
                (u, v),
                (GenId::Px { sup: s1, sub: i1 }, GenId::X { sup: s2, sub: i2 })
                    if s1 == s2 && i1 == i2
            ) || matches!(
                (u, v),
                (GenId::Py { sup: s1, sub: i1 }, GenId::Y { sup: s2, sub: i2 })
                    if s1 == s2 && i1 == i2
            )
        };
        if paired(&a.id, &b.id) {
            return Ok(SuperPoly::one());
        }
        if paired(&b.id, &a.id) {
            // superskew: {x, p} = -(-1)^{|x||p|} {p, x}
            let s = -a.parity.koszul(b.parity);
            return Ok(SuperPoly::constant(rat_int(s)));
        }
        Ok(SuperPoly::zero())
    }
}

/// Kirillov-type bracket on the supersymmetric algebra of a Lie
/// superalgebra: generators bracket to their Lie bracket.
pub struct LiePoisson<'a> {
    pub algebra: &'a crate::envalg::LieSuperAlgebra,
}

impl PoissonStructure for LiePoisson<'_> {
    fn bracket_generators(&self, a: &Generator, b: &Generator) -> Result<SuperPoly> {
        let (ia, ib) = match (a.id, b.id) {
            (GenId::Basis { idx: ia }, GenId::Basis { idx: ib }) => (ia, ib),
            _ => {
                return Err(AlgebraError::Mismatch(
                    "Lie-Poisson bracket applies to abstract basis generators".into(),
                ))
            }
        };
        let mut out = SuperPoly::zero();
        for (k, c) in self.algebra.bracket(ia as usize, ib as usize) {
            out.add_term(
                Monomial::generator(self.algebra.generator(*k)),
                c.clone(),
            );
        }
        Ok(out)
    }
}

/// Poisson bracket extended to polynomials.
///
/// Uses `{AB, C} = A{B, C} + (-1)^{|B||C|} {A, C} B` and its mirror; both
/// arguments are split into parity-homogeneous parts first.
pub fn poisson_bracket<P: PoissonStructure>(
    ps: &P,
    a: &SuperPoly,
    b: &SuperPoly,
) -> Result<SuperPoly> {
    let (ae, ao) = a.parity_split();
    let (be, bo) = b.parity_split();
    let mut out = SuperPoly::zero();
    for (ah, pa) in [(ae, Parity::Even), (ao, Parity::Odd)] {
        for (bh, pb) in [(be.clone(), Parity::Even), (bo.clone(), Parity::Odd)] {
            if ah.is_zero() || bh.is_zero() {
                continue;
            }
            out = out.add(&bracket_homogeneous(ps, &ah, pa, &bh, pb)?);
        }
    }
    Ok(out)
}

fn bracket_homogeneous<P: PoissonStructure>(
    ps: &P,
    a: &SuperPoly,
    pa: Parity,
    b: &SuperPoly,
    pb: Parity,
) -> Result<SuperPoly> {
    let mut out = SuperPoly::zero();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            let br = bracket_monomials(ps, ma, pa, mb, pb)?;
            out = out.add(&br.scale(&(ca * cb)));
        }
    }
    Ok(out)
}

fn bracket_monomials<P: PoissonStructure>(
    ps: &P,
    ma: &Monomial,
    pa: Parity,
    mb: &Monomial,
    pb: Parity,
) -> Result<SuperPoly> {
    // peel the first generator of ma: ma = g * rest
    let Some(&(g, e)) = ma.0.first() else {
        return Ok(SuperPoly::zero()); // {1, -} = 0
    };
    let mut rest = ma.clone();
    if e > 1 {
        rest.0[0].1 = e - 1;
    } else {
        rest.0.remove(0);
    }
    let prest = pa.plus(g.parity);
    // {g * rest, b} = g {rest, b} + (-1)^{|rest||b|} {g, b} rest
    let gp = SuperPoly::from_term(Monomial::generator(g), BigRational::one());
    let t1 = gp.mul(&bracket_monomials(ps, &rest, prest, mb, pb)?)?;
    let gb = bracket_generator_monomial(ps, &g, mb, pb)?;
    let restp = SuperPoly::from_term(rest, BigRational::one());
    let sign = rat_int(prest.koszul(pb));
    let t2 = gb.mul(&restp)?.scale(&sign);
    Ok(t1.add(&t2))
}

fn bracket_generator_monomial<P: PoissonStructure>(
    ps: &P,
    g: &Generator,
    mb: &Monomial,
    _pb: Parity,
) -> Result<SuperPoly> {
    // {g, h * rest} = {g, h} rest + (-1)^{|g||h|} h {g, rest}
    let Some(&(h, e)) = mb.0.first() else {
        return Ok(SuperPoly::zero());
    };
    let mut rest = mb.clone();
    if e > 1 {
        rest.0[0].1 = e - 1;
    } else {
        rest.0.remove(0);
    }
    let ghr = ps
        .bracket_generators(g, &h)?
        .mul(&SuperPoly::from_term(rest.clone(), BigRational::one()))?;
    let hp = SuperPoly::from_term(Monomial::generator(h), BigRational::one());
    let inner = bracket_generator_monomial(ps, g, &rest, _pb)?;
    let t2 = hp.mul(&inner)?.scale(&rat_int(g.parity.koszul(h.parity)));
    Ok(ghr.add(&t2))
}
