//! Finite-dimensional Lie superalgebras presented by structure constants,
//! their universal enveloping algebras with PBW normal forms, Takiff
//! quotients of current algebras, and evaluation maps of higher orders.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num::BigRational;
use num::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::ring::{binomial, rat, rat_int, rat_pow, Homogeneity, Parity, Ring};
use crate::superpoly::{GenId, Generator};

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

type SparseVec = Vec<(u32, BigRational)>;

/// A Lie superalgebra given by a homogeneous basis and exact structure
/// constants. Superskew symmetry and the super-Jacobi identity are
/// verified over the full basis at construction time.
#[derive(Debug)]
pub struct LieSuperAlgebra {
    id: u64,
    labels: Vec<String>,
    parities: Vec<Parity>,
    brackets: HashMap<(u32, u32), SparseVec>,
}

impl LieSuperAlgebra {
    pub fn new(
        labels: Vec<String>,
        parities: Vec<Parity>,
        brackets: HashMap<(u32, u32), SparseVec>,
    ) -> Result<Self> {
        if labels.len() != parities.len() || labels.is_empty() {
            return Err(AlgebraError::InvalidInput(
                "basis labels and parities must be nonempty and aligned".into(),
            ));
        }
        let alg = LieSuperAlgebra {
            id: NEXT_ALGEBRA_ID.fetch_add(1, Ordering::Relaxed),
            labels,
            parities,
            brackets,
        };
        alg.validate()?;
        Ok(alg)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn bracket(&self, i: usize, j: usize) -> &[(u32, BigRational)] {
        self.brackets
            .get(&(i as u32, j as u32))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    /// Abstract polynomial generator for the supersymmetric algebra.
    pub fn generator(&self, i: u32) -> Generator {
        Generator::new(GenId::Basis { idx: i }, self.parities[i as usize])
    }

    fn bracket_vec(&self, i: u32, j: u32) -> BTreeMap<u32, BigRational> {
        let mut out = BTreeMap::new();
        for (k, c) in self.bracket(i as usize, j as usize) {
            insert_sparse(&mut out, *k, c.clone());
        }
        out
    }

    /// Bracket of a basis element with a sparse vector.
    fn bracket_with(&self, i: u32, v: &BTreeMap<u32, BigRational>) -> BTreeMap<u32, BigRational> {
        let mut out = BTreeMap::new();
        for (j, c) in v {
            for (k, s) in self.bracket(i as usize, *j as usize) {
                insert_sparse(&mut out, *k, c * s);
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim() as u32;
        // superskew: [a,b] = -(-1)^{|a||b|} [b,a]
        for i in 0..n {
            for j in 0..n {
                let lhs = self.bracket_vec(i, j);
                let mut rhs = self.bracket_vec(j, i);
                let sign = self.parities[i as usize].koszul(self.parities[j as usize]);
                for c in rhs.values_mut() {
                    *c = -&*c * rat_int(sign);
                }
                rhs.retain(|_, c| !c.is_zero());
                if lhs != rhs {
                    return Err(AlgebraError::InvalidStructure(format!(
                        "superskew fails at ({}, {})",
                        self.labels[i as usize], self.labels[j as usize]
                    )));
                }
            }
        }
        // super-Jacobi in Leibniz form:
        // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]]
        for i in 0..n {
            for j in 0..n {
                let pij = self.parities[i as usize].koszul(self.parities[j as usize]);
                let ij = self.bracket_vec(i, j);
                for k in 0..n {
                    let lhs = self.bracket_with(i, &self.bracket_vec(j, k));
                    let mut rhs: BTreeMap<u32, BigRational> = BTreeMap::new();
                    for (t, c) in &ij {
                        for (u, s) in self.bracket(*t as usize, k as usize) {
                            insert_sparse(&mut rhs, *u, c * s);
                        }
                    }
                    for (u, s) in self.bracket_with(j, &self.bracket_vec(i, k)) {
                        insert_sparse(&mut rhs, u, s * rat_int(pij));
                    }
                    if lhs != rhs {
                        return Err(AlgebraError::InvalidStructure(format!(
                            "super-Jacobi fails at ({}, {}, {})",
                            self.labels[i as usize],
                            self.labels[j as usize],
                            self.labels[k as usize]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn insert_sparse(map: &mut BTreeMap<u32, BigRational>, k: u32, c: BigRational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(k) {
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

/// The general linear Lie superalgebra on `p+q+m+n` basis directions with
/// parity pattern even^p odd^q even^m odd^n, basis `E^i_j`.
#[derive(Debug, Clone)]
pub struct GlAlgebra {
    pub p: u16,
    pub q: u16,
    pub m: u16,
    pub n: u16,
    pub algebra: Arc<LieSuperAlgebra>,
}

impl GlAlgebra {
    pub fn new(p: u16, q: u16, m: u16, n: u16) -> Result<Self> {
        let size = (p + q + m + n) as u32;
        if size == 0 {
            return Err(AlgebraError::InvalidInput(
                "general linear superalgebra needs at least one basis direction".into(),
            ));
        }
        let index_parity = |i: u32| -> Parity {
            let i = i as u16;
            if i <= p || (i > p + q && i <= p + q + m) {
                Parity::Even
            } else {
                Parity::Odd
            }
        };
        let unit = |i: u32, j: u32| -> u32 { (i - 1) * size + (j - 1) };
        let mut labels = Vec::new();
        let mut parities = Vec::new();
        for i in 1..=size {
            for j in 1..=size {
                labels.push(format!("E[{},{}]", i, j));
                parities.push(index_parity(i).plus(index_parity(j)));
            }
        }
        let mut brackets: HashMap<(u32, u32), SparseVec> = HashMap::new();
        for i in 1..=size {
            for j in 1..=size {
                for r in 1..=size {
                    for s in 1..=size {
                        let mut v: BTreeMap<u32, BigRational> = BTreeMap::new();
                        if j == r {
                            insert_sparse(&mut v, unit(i, s), BigRational::one());
                        }
                        if i == s {
                            let pa = index_parity(i).plus(index_parity(j));
                            let pb = index_parity(r).plus(index_parity(s));
                            insert_sparse(&mut v, unit(r, j), rat_int(-pa.koszul(pb)));
                        }
                        if !v.is_empty() {
                            brackets.insert(
                                (unit(i, j), unit(r, s)),
                                v.into_iter().collect(),
                            );
                        }
                    }
                }
            }
        }
        Ok(GlAlgebra {
            p,
            q,
            m,
            n,
            algebra: Arc::new(LieSuperAlgebra::new(labels, parities, brackets)?),
        })
    }

    /// The purely even special case on `d` directions.
    pub fn gl_d(d: u16) -> Result<Self> {
        GlAlgebra::new(0, 0, d, 0)
    }

    pub fn size(&self) -> u16 {
        self.p + self.q + self.m + self.n
    }

    /// Parity of the `i`th basis direction (1-based).
    pub fn index_parity(&self, i: u16) -> Parity {
        if i <= self.p || (i > self.p + self.q && i <= self.p + self.q + self.m) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Basis index of `E^i_j` (1-based matrix indices).
    pub fn unit(&self, i: u16, j: u16) -> u32 {
        debug_assert!(i >= 1 && i <= self.size() && j >= 1 && j <= self.size());
        (i as u32 - 1) * self.size() as u32 + (j as u32 - 1)
    }

    /// The 0/1 type sequence of the natural matrix of this superalgebra.
    pub fn type_sequence(&self) -> Vec<Parity> {
        (1..=self.size()).map(|i| self.index_parity(i)).collect()
    }
}

/// A finite direct sum of Takiff quotients `g (x) C[t]/t^order` of one
/// base superalgebra, each summand attached to a rational point.
#[derive(Debug, Clone)]
pub struct TakiffSum {
    pub base: GlAlgebra,
    pub points: Vec<BigRational>,
    pub orders: Vec<u32>,
    pub algebra: Arc<LieSuperAlgebra>,
    site_offsets: Vec<u32>,
}

impl TakiffSum {
    pub fn new(base: GlAlgebra, points: Vec<BigRational>, orders: Vec<u32>) -> Result<Self> {
        if points.len() != orders.len() || points.is_empty() {
            return Err(AlgebraError::InvalidInput(
                "takiff sum needs matching nonempty points and orders".into(),
            ));
        }
        if orders.contains(&0) {
            return Err(AlgebraError::InvalidInput("takiff orders must be >= 1".into()));
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(AlgebraError::InvalidInput(format!(
                        "singular points must be pairwise distinct, got {} twice",
                        points[i]
                    )));
                }
            }
        }
        let size = base.size() as u32;
        let base_dim = (size * size);
        let mut labels = Vec::new();
        let mut parities = Vec::new();
        let mut site_offsets = Vec::new();
        let mut offset = 0u32;
        for (site, order) in orders.iter().enumerate() {
            site_offsets.push(offset);
            for b in 0..base_dim {
                for deg in 0..*order {
                    labels.push(format!("{}@s{}t{}", base.algebra.label(b as usize), site, deg));
                    parities.push(base.algebra.parity(b as usize));
                    let _ = deg;
                }
            }
            offset += base_dim * order;
        }
        // index layout per site: (base index) * order + deg
        let gen =
            |site: usize, b: u32, deg: u32| -> u32 { site_offsets[site] + b * orders[site] + deg };
        let mut brackets: HashMap<(u32, u32), SparseVec> = HashMap::new();
        for (site, order) in orders.iter().enumerate() {
            for b1 in 0..base_dim {
                for b2 in 0..base_dim {
                    let base_bracket = base.algebra.bracket(b1 as usize, b2 as usize);
                    if base_bracket.is_empty() {
                        continue;
                    }
                    for k in 0..*order {
                        for l in 0..*order {
                            if k + l >= *order {
                                continue;
                            }
                            let v: SparseVec = base_bracket
                                .iter()
                                .map(|(t, c)| (gen(site, *t, k + l), c.clone()))
                                .collect();
                            brackets.insert((gen(site, b1, k), gen(site, b2, l)), v);
                        }
                    }
                }
            }
        }
        Ok(TakiffSum {
            base,
            points,
            orders,
            algebra: Arc::new(LieSuperAlgebra::new(labels, parities, brackets)?),
            site_offsets,
        })
    }

    pub fn sites(&self) -> usize {
        self.points.len()
    }

    /// Inverse of `gen`: recover (site, i, j, degree) from a basis index.
    pub fn decode(&self, idx: u32) -> (usize, u16, u16, u32) {
        let site = match self.site_offsets.binary_search(&idx) {
            Ok(s) => s,
            Err(s) => s - 1,
        };
        let local = idx - self.site_offsets[site];
        let order = self.orders[site];
        let b = local / order;
        let deg = local % order;
        let size = self.base.size() as u32;
        let i = (b / size) as u16 + 1;
        let j = (b % size) as u16 + 1;
        (site, i, j, deg)
    }

    /// Basis index of `E^i_j (x) t^deg` at a site.
    pub fn gen(&self, site: usize, i: u16, j: u16, deg: u32) -> Result<u32> {
        if site >= self.sites() {
            return Err(AlgebraError::InvalidInput(format!("site {} out of range", site)));
        }
        if deg >= self.orders[site] {
            return Err(AlgebraError::InvalidInput(format!(
                "degree {} exceeds order {} at site {}",
                deg, self.orders[site], site
            )));
        }
        Ok(self.site_offsets[site] + self.base.unit(i, j) * self.orders[site] + deg)
    }

    /// Image of `E^i_j (x) t^r` under the order-`orders[site]` evaluation
    /// at `points[site]`: the binomial expansion of `t^r` around the
    /// point, truncated at the site order.
    pub fn evaluate_generator_at_site(
        &self,
        env: &Enveloping,
        site: usize,
        i: u16,
        j: u16,
        r: u32,
    ) -> Result<PbwElement> {
        let mut out = env.zero();
        let top = std::cmp::min(r, self.orders[site] - 1);
        for k in 0..=top {
            let c = BigRational::from(binomial(r as i64, k))
                * rat_pow(&self.points[site], (r - k) as i64)?;
            let g = self.gen(site, i, j, k)?;
            out = env.add(&out, &env.generator_elt(g).scale_by(&c))?;
        }
        Ok(out)
    }

    /// Image of `E^i_j (x) t^r` under the evaluation map of this sum:
    /// the sum over sites of the per-site images.
    pub fn evaluate_generator(
        &self,
        env: &Enveloping,
        i: u16,
        j: u16,
        r: u32,
    ) -> Result<PbwElement> {
        let mut out = env.zero();
        for site in 0..self.sites() {
            out = env.add(&out, &self.evaluate_generator_at_site(env, site, i, j, r)?)?;
        }
        Ok(out)
    }
}

/// PBW monomial: nondecreasing sequence of (basis index, exponent).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PbwMonomial(pub Vec<(u32, u32)>);

impl PbwMonomial {
    pub fn one() -> Self {
        PbwMonomial(Vec::new())
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|(_, e)| *e as u64).sum()
    }
}

/// Element of a universal enveloping algebra in PBW normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PbwElement {
    pub algebra_id: u64,
    pub terms: BTreeMap<PbwMonomial, BigRational>,
}

impl PbwElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale_by(&self, c: &BigRational) -> PbwElement {
        if c.is_zero() {
            return PbwElement {
                algebra_id: self.algebra_id,
                terms: BTreeMap::new(),
            };
        }
        PbwElement {
            algebra_id: self.algebra_id,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn filtration_degree(&self) -> u64 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }
}

/// Ring object for the universal enveloping algebra of one Lie
/// superalgebra.
#[derive(Clone)]
pub struct Enveloping {
    pub algebra: Arc<LieSuperAlgebra>,
}

impl Enveloping {
    pub fn new(algebra: Arc<LieSuperAlgebra>) -> Self {
        Enveloping { algebra }
    }

    pub fn generator_elt(&self, idx: u32) -> PbwElement {
        let mut terms = BTreeMap::new();
        terms.insert(PbwMonomial(vec![(idx, 1)]), BigRational::one());
        PbwElement {
            algebra_id: self.algebra.id(),
            terms,
        }
    }

    pub fn monomial_parity(&self, m: &PbwMonomial) -> Parity {
        let mut odd = 0u64;
        for (i, e) in &m.0 {
            if self.algebra.parity(*i as usize).is_odd() {
                odd += *e as u64;
            }
        }
        if odd.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn check(&self, a: &PbwElement) -> Result<()> {
        if a.algebra_id != self.algebra.id() {
            return Err(AlgebraError::Mismatch(format!(
                "element of algebra {} used in algebra {}",
                a.algebra_id,
                self.algebra.id()
            )));
        }
        Ok(())
    }

    /// Rewrite an arbitrary word in the basis into PBW normal form.
    pub fn normalize_word(&self, word: Vec<u32>, coeff: BigRational) -> PbwElement {
        let mut out: BTreeMap<PbwMonomial, BigRational> = BTreeMap::new();
        let mut stack: Vec<(Vec<u32>, BigRational)> = vec![(word, coeff)];
        while let Some((w, c)) = stack.pop() {
            if c.is_zero() {
                continue;
            }
            // find first violation of nondecreasing order / odd repetition
            let mut violation = None;
            for k in 0..w.len().saturating_sub(1) {
                if w[k] > w[k + 1] {
                    violation = Some((k, false));
                    break;
                }
                if w[k] == w[k + 1] && self.algebra.parity(w[k] as usize).is_odd() {
                    violation = Some((k, true));
                    break;
                }
            }
            match violation {
                None => {
                    let mut mono: Vec<(u32, u32)> = Vec::new();
                    for g in w {
                        match mono.last_mut() {
                            Some((h, e)) if *h == g => *e += 1,
                            _ => mono.push((g, 1)),
                        }
                    }
                    let key = PbwMonomial(mono);
                    use std::collections::btree_map::Entry;
                    match out.entry(key) {
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
                Some((k, equal_odd)) => {
                    let a = w[k];
                    let b = w[k + 1];
                    if equal_odd {
                        // x x = (1/2) [x, x]
                        for (t, s) in self.algebra.bracket(a as usize, b as usize) {
                            let mut spliced = Vec::with_capacity(w.len() - 1);
                            spliced.extend_from_slice(&w[..k]);
                            spliced.push(*t);
                            spliced.extend_from_slice(&w[k + 2..]);
                            stack.push((spliced, &c * s * rat(1, 2)));
                        }
                    } else {
                        let sign = self
                            .algebra
                            .parity(a as usize)
                            .koszul(self.algebra.parity(b as usize));
                        let mut swapped = w.clone();
                        swapped.swap(k, k + 1);
                        stack.push((swapped, &c * rat_int(sign)));
                        for (t, s) in self.algebra.bracket(a as usize, b as usize) {
                            let mut spliced = Vec::with_capacity(w.len() - 1);
                            spliced.extend_from_slice(&w[..k]);
                            spliced.push(*t);
                            spliced.extend_from_slice(&w[k + 2..]);
                            stack.push((spliced, &c * s));
                        }
                    }
                }
            }
        }
        PbwElement {
            algebra_id: self.algebra.id(),
            terms: out,
        }
    }

    fn monomial_word(m: &PbwMonomial) -> Vec<u32> {
        let mut w = Vec::new();
        for (g, e) in &m.0 {
            for _ in 0..*e {
                w.push(*g);
            }
        }
        w
    }

    /// Supercommutator on parity-homogeneous decompositions.
    pub fn supercommutator_elt(&self, a: &PbwElement, b: &PbwElement) -> Result<PbwElement> {
        let mut out = self.zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let pa = self.monomial_parity(ma);
                let pb = self.monomial_parity(mb);
                let mut ab = Self::monomial_word(ma);
                ab.extend(Self::monomial_word(mb));
                let mut ba = Self::monomial_word(mb);
                ba.extend(Self::monomial_word(ma));
                let t1 = self.normalize_word(ab, ca * cb);
                let t2 = self.normalize_word(ba, ca * cb * rat_int(-pa.koszul(pb)));
                self.add_assign(&mut out, &t1)?;
                self.add_assign(&mut out, &t2)?;
            }
        }
        Ok(out)
    }
}

impl Ring for Enveloping {
    type Elem = PbwElement;

    fn zero(&self) -> PbwElement {
        PbwElement {
            algebra_id: self.algebra.id(),
            terms: BTreeMap::new(),
        }
    }

    fn one(&self) -> PbwElement {
        let mut terms = BTreeMap::new();
        terms.insert(PbwMonomial::one(), BigRational::one());
        PbwElement {
            algebra_id: self.algebra.id(),
            terms,
        }
    }

    fn is_zero(&self, a: &PbwElement) -> bool {
        a.is_zero()
    }

    fn neg(&self, a: &PbwElement) -> PbwElement {
        PbwElement {
            algebra_id: a.algebra_id,
            terms: a.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    fn add(&self, a: &PbwElement, b: &PbwElement) -> Result<PbwElement> {
        self.check(a)?;
        self.check(b)?;
        let mut out = a.clone();
        for (m, c) in &b.terms {
            use std::collections::btree_map::Entry;
            match out.terms.entry(m.clone()) {
                Entry::Vacant(v) => {
                    v.insert(c.clone());
                }
                Entry::Occupied(mut o) => {
                    *o.get_mut() += c;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
        }
        Ok(out)
    }

    fn mul(&self, a: &PbwElement, b: &PbwElement) -> Result<PbwElement> {
        self.check(a)?;
        self.check(b)?;
        let mut out = self.zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let mut w = Self::monomial_word(ma);
                w.extend(Self::monomial_word(mb));
                let t = self.normalize_word(w, ca * cb);
                self.add_assign(&mut out, &t)?;
            }
        }
        Ok(out)
    }

    fn add_assign(&self, a: &mut PbwElement, b: &PbwElement) -> Result<()> {
        self.check(a)?;
        self.check(b)?;
        for (m, c) in &b.terms {
            use std::collections::btree_map::Entry;
            match a.terms.entry(m.clone()) {
                Entry::Vacant(v) => {
                    v.insert(c.clone());
                }
                Entry::Occupied(mut o) => {
                    *o.get_mut() += c;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
        }
        Ok(())
    }

    fn add_scaled_assign(
        &self,
        a: &mut PbwElement,
        b: &PbwElement,
        c: &BigRational,
    ) -> Result<()> {
        self.check(a)?;
        self.check(b)?;
        if c.is_zero() {
            return Ok(());
        }
        for (m, k) in &b.terms {
            use std::collections::btree_map::Entry;
            match a.terms.entry(m.clone()) {
                Entry::Vacant(v) => {
                    v.insert(k * c);
                }
                Entry::Occupied(mut o) => {
                    *o.get_mut() += k * c;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
        }
        Ok(())
    }

    fn scale(&self, a: &PbwElement, c: &BigRational) -> PbwElement {
        a.scale_by(c)
    }

    fn invert(&self, a: &PbwElement) -> Result<PbwElement> {
        if a.terms.len() == 1 {
            if let Some(c) = a.terms.get(&PbwMonomial::one()) {
                return Ok(self.from_rational(&c.recip()));
            }
        }
        Err(AlgebraError::NotInvertible(
            "enveloping-algebra element is not a nonzero scalar".into(),
        ))
    }

    fn homogeneity(&self, a: &PbwElement) -> Homogeneity {
        let mut h = Homogeneity::Zero;
        for m in a.terms.keys() {
            h = h.merge(Homogeneity::Homogeneous(self.monomial_parity(m)));
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl2_matrix_units() {
        let gl2 = GlAlgebra::gl_d(2).unwrap();
        let env = Enveloping::new(gl2.algebra.clone());
        let e12 = gl2.unit(1, 2);
        let e21 = gl2.unit(2, 1);
        let br: Vec<_> = gl2.algebra.bracket(e12 as usize, e21 as usize).to_vec();
        // [e12, e21] = e11 - e22
        let mut expect = BTreeMap::new();
        expect.insert(gl2.unit(1, 1), BigRational::one());
        expect.insert(gl2.unit(2, 2), -BigRational::one());
        let got: BTreeMap<_, _> = br.into_iter().collect();
        assert_eq!(got, expect);
        // [A, A] = 0 for even A
        let a = env.generator_elt(e12);
        assert!(env.supercommutator_elt(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn gl11_odd_anticommutator() {
        let gl = GlAlgebra::new(0, 0, 1, 1).unwrap();
        let e12 = gl.unit(1, 2);
        let e21 = gl.unit(2, 1);
        // [E^1_2, E^2_1] = E^1_1 + E^2_2 (both odd)
        let got: BTreeMap<_, _> = gl
            .algebra
            .bracket(e12 as usize, e21 as usize)
            .iter()
            .cloned()
            .collect();
        let mut expect = BTreeMap::new();
        expect.insert(gl.unit(1, 1), BigRational::one());
        expect.insert(gl.unit(2, 2), BigRational::one());
        assert_eq!(got, expect);
    }

    #[test]
    fn pbw_rewrites_one_step() {
        let gl2 = GlAlgebra::gl_d(2).unwrap();
        let env = Enveloping::new(gl2.algebra.clone());
        let e12 = env.generator_elt(gl2.unit(1, 2));
        let e21 = env.generator_elt(gl2.unit(2, 1));
        // e21 * e12 = e12 e21 - e11 + e22 in PBW order (e12 < e21 by index)
        let prod = env.mul(&e21, &e12).unwrap();
        let sorted = env.mul(&e12, &e21).unwrap();
        let e11 = env.generator_elt(gl2.unit(1, 1));
        let e22 = env.generator_elt(gl2.unit(2, 2));
        let expect = env
            .add(&sorted, &env.add(&env.neg(&e11), &e22).unwrap())
            .unwrap();
        assert_eq!(prod, expect);
    }

    #[test]
    fn odd_square_is_half_bracket() {
        let gl = GlAlgebra::new(0, 0, 1, 1).unwrap();
        let env = Enveloping::new(gl.algebra.clone());
        let x = env.generator_elt(gl.unit(1, 2));
        let sq = env.mul(&x, &x).unwrap();
        // [E^1_2, E^1_2] = 0 here, so x^2 = 0
        assert!(sq.is_zero());
        // while x = E^2_1 also squares to zero
        let y = env.generator_elt(gl.unit(2, 1));
        assert!(env.mul(&y, &y).unwrap().is_zero());
    }

    #[test]
    fn odd_square_with_nonzero_self_bracket() {
        // two-dimensional superalgebra: h even central, x odd, [x, x] = 2h
        let mut brackets: HashMap<(u32, u32), SparseVec> = HashMap::new();
        brackets.insert((1, 1), vec![(0, rat(2, 1))]);
        let alg = Arc::new(
            LieSuperAlgebra::new(
                vec!["h".into(), "x".into()],
                vec![Parity::Even, Parity::Odd],
                brackets,
            )
            .unwrap(),
        );
        let env = Enveloping::new(alg);
        let x = env.generator_elt(1);
        let h = env.generator_elt(0);
        // x x = (1/2)[x, x] = h
        assert_eq!(env.mul(&x, &x).unwrap(), h);
        // and the central element merges without corrections
        let hx = env.mul(&h, &x).unwrap();
        let xh = env.mul(&x, &h).unwrap();
        assert_eq!(hx, xh);
    }

    #[test]
    fn pbw_bracket_matches_structure_constants() {
        let gl = GlAlgebra::new(1, 1, 1, 0).unwrap();
        let env = Enveloping::new(gl.algebra.clone());
        let dim = gl.algebra.dim();
        for i in 0..dim {
            for j in 0..dim {
                let a = env.generator_elt(i as u32);
                let b = env.generator_elt(j as u32);
                let lhs = env.supercommutator_elt(&a, &b).unwrap();
                let mut rhs = env.zero();
                for (k, c) in gl.algebra.bracket(i, j) {
                    rhs = env.add(&rhs, &env.generator_elt(*k).scale_by(c)).unwrap();
                }
                assert_eq!(lhs, rhs, "bracket mismatch at ({}, {})", i, j);
            }
        }
    }

    #[test]
    fn takiff_truncation_and_direct_sum() {
        let gl2 = GlAlgebra::gl_d(2).unwrap();
        let sum = TakiffSum::new(
            gl2.clone(),
            vec![rat(0, 1), rat(1, 1)],
            vec![2, 1],
        )
        .unwrap();
        let env = Enveloping::new(sum.algebra.clone());
        // [A t, B t] = 0 at an order-2 site
        let a = env.generator_elt(sum.gen(0, 1, 2, 1).unwrap());
        let b = env.generator_elt(sum.gen(0, 2, 1, 1).unwrap());
        assert!(env.supercommutator_elt(&a, &b).unwrap().is_zero());
        // distinct sites commute
        let c = env.generator_elt(sum.gen(1, 1, 2, 0).unwrap());
        let d = env.generator_elt(sum.gen(0, 2, 1, 0).unwrap());
        assert!(env.supercommutator_elt(&c, &d).unwrap().is_zero());
        // order-1 site: brackets match the base algebra
        let e12 = env.generator_elt(sum.gen(1, 1, 2, 0).unwrap());
        let e21 = env.generator_elt(sum.gen(1, 2, 1, 0).unwrap());
        let br = env.supercommutator_elt(&e12, &e21).unwrap();
        let h = env
            .add(
                &env.generator_elt(sum.gen(1, 1, 1, 0).unwrap()),
                &env.neg(&env.generator_elt(sum.gen(1, 2, 2, 0).unwrap())),
            )
            .unwrap();
        assert_eq!(br, h);
    }

    #[test]
    fn evaluation_map_images() {
        let gl1 = GlAlgebra::gl_d(1).unwrap();
        let a = rat(3, 2);
        // order 1 at a: A (x) t^r -> a^r A
        let sum = TakiffSum::new(gl1.clone(), vec![a.clone()], vec![1]).unwrap();
        let env = Enveloping::new(sum.algebra.clone());
        let img = sum.evaluate_generator(&env, 1, 1, 1).unwrap();
        let gen = env.generator_elt(sum.gen(0, 1, 1, 0).unwrap());
        assert_eq!(img, gen.scale_by(&a));
        // order 2 at a: A (x) t^2 -> a^2 (A t^0) + 2a (A t^1)
        let sum2 = TakiffSum::new(gl1.clone(), vec![a.clone()], vec![2]).unwrap();
        let env2 = Enveloping::new(sum2.algebra.clone());
        let img2 = sum2.evaluate_generator(&env2, 1, 1, 2).unwrap();
        let g0 = env2.generator_elt(sum2.gen(0, 1, 1, 0).unwrap());
        let g1 = env2.generator_elt(sum2.gen(0, 1, 1, 1).unwrap());
        let expect = env2
            .add(
                &g0.scale_by(&(&a * &a)),
                &g1.scale_by(&(&a * rat(2, 1))),
            )
            .unwrap();
        assert_eq!(img2, expect);
        // t^0 maps to the degree-0 generator itself
        let img0 = sum2.evaluate_generator(&env2, 1, 1, 0).unwrap();
        assert_eq!(img0, g0);
    }

    #[test]
    fn evaluation_respects_brackets() {
        // ev([A t^r, B t^s]) = [ev(A t^r), ev(B t^s)] across generators
        let gl2 = GlAlgebra::new(0, 0, 1, 1).unwrap();
        let sum = TakiffSum::new(
            gl2.clone(),
            vec![rat(1, 2), rat(-1, 3)],
            vec![2, 1],
        )
        .unwrap();
        let env = Enveloping::new(sum.algebra.clone());
        let size = gl2.size();
        for r in 0..3u32 {
            for s in 0..3u32 {
                for (i, j) in [(1u16, 2u16), (2, 1), (1, 1)] {
                    for (k, l) in [(2u16, 1u16), (1, 2)] {
                        let lhs = {
                            // [E^i_j t^r, E^k_l t^s] = [E^i_j, E^k_l] t^{r+s}
                            let mut acc = env.zero();
                            for (t, c) in gl2
                                .algebra
                                .bracket(gl2.unit(i, j) as usize, gl2.unit(k, l) as usize)
                            {
                                let ti = (*t / size as u32) as u16 + 1;
                                let tj = (*t % size as u32) as u16 + 1;
                                let img =
                                    sum.evaluate_generator(&env, ti, tj, r + s).unwrap();
                                acc = env.add(&acc, &img.scale_by(c)).unwrap();
                            }
                            acc
                        };
                        let a = sum.evaluate_generator(&env, i, j, r).unwrap();
                        let b = sum.evaluate_generator(&env, k, l, s).unwrap();
                        let rhs = env.supercommutator_elt(&a, &b).unwrap();
                        assert_eq!(lhs, rhs, "ev bracket mismatch");
                    }
                }
            }
        }
    }
}
