//! Truncated pseudo-differential operator rings over a coefficient
//! superalgebra.
//!
//! Elements are finite arrays indexed by (z-exponent, d-exponent) kept in
//! the canonical order "z-powers left, derivative-powers right". The
//! product uses the reordering rule
//! `d^i z^j = sum_k C(i,k) C(j,k) k! z^{j-k} d^{i-k}`,
//! whose terms lower both exponents together. Every element carries a
//! validity window recording which exponents are trustworthy after
//! truncation; window bookkeeping is conservative, so a coefficient
//! inside a window never changes when inputs are recomputed on larger
//! windows.

use std::collections::BTreeMap;

use num::BigRational;
use num::Zero;

use crate::error::{AlgebraError, Result};
use crate::ring::{rat_pow, reorder_factor, Homogeneity, Ring};

/// True-support upper bound used for elements with no terms.
const EMPTY_MAX: i64 = -(1 << 40);

/// Which commutation rule the two formal symbols obey.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    /// `[d, z] = 1`: pseudo-differential operators.
    WeylPair,
    /// Two central commuting symbols (classical Laurent arrays).
    Commuting,
}

/// Exponent window. Lower bounds of `None` mean nothing was truncated in
/// that direction (finitely supported exact data); upper bounds always
/// bound the true support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub z_min: Option<i64>,
    pub z_max: i64,
    pub d_min: Option<i64>,
    pub d_max: i64,
}

impl Window {
    /// A finite working window; lower bounds are required.
    pub fn working(z_min: i64, z_max: i64, d_min: i64, d_max: i64) -> Result<Window> {
        if z_min > z_max || d_min > d_max {
            return Err(AlgebraError::InvalidInput(format!(
                "empty window [{}, {}] x [{}, {}]",
                z_min, z_max, d_min, d_max
            )));
        }
        Ok(Window {
            z_min: Some(z_min),
            z_max,
            d_min: Some(d_min),
            d_max,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.z_min.is_some_and(|m| m > self.z_max)
            || self.d_min.is_some_and(|m| m > self.d_max)
    }

    pub fn contains(&self, i: i64, j: i64) -> bool {
        self.z_min.is_none_or(|m| i >= m) && self.d_min.is_none_or(|m| j >= m)
    }

    fn intersect(&self, other: &Window) -> Window {
        Window {
            z_min: max_opt(self.z_min, other.z_min),
            z_max: self.z_max.max(other.z_max),
            d_min: max_opt(self.d_min, other.d_min),
            d_max: self.d_max.max(other.d_max),
        }
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let lo = |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_else(|| "-inf".into());
        write!(
            f,
            "z[{}..{}] d[{}..{}]",
            lo(self.z_min),
            self.z_max,
            lo(self.d_min),
            self.d_max
        )
    }
}

/// max of lower bounds where `None` is minus infinity
fn max_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) => x,
        (x, None) => x,
        (Some(u), Some(v)) => Some(u.max(v)),
    }
}

fn add_opt(a: Option<i64>, b: i64) -> Option<i64> {
    a.map(|x| x + b)
}

/// Truncated series in the canonical zd order with coefficients in `E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPsdo<E> {
    pub kind: SymbolKind,
    pub window: Window,
    /// (z-exponent, d-exponent) -> nonzero coefficient
    pub terms: BTreeMap<(i64, i64), E>,
}

impl<E> TruncatedPsdo<E> {
    pub fn coefficient(&self, i: i64, j: i64) -> Option<&E> {
        self.terms.get(&(i, j))
    }

    /// Maximal total order (z-exp + d-exp) over stored slots.
    pub fn max_total(&self) -> Option<i64> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }
}

/// The alternative canonical order (derivative-powers left) of the same
/// operator, used to extract series-in-z coefficient families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DzForm<E> {
    pub window: Window,
    /// slot (i, j) stands for the `d^j z^i` coefficient
    pub terms: BTreeMap<(i64, i64), E>,
}

/// Which of the two formal symbols a scalar series lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    Z,
    D,
}

/// Ring object: truncated series over the coefficient ring `R`.
#[derive(Clone)]
pub struct PsdoRing<R: Ring> {
    pub coeff: R,
    pub kind: SymbolKind,
    pub working: Window,
}

impl<R: Ring> PsdoRing<R> {
    pub fn new(coeff: R, kind: SymbolKind, working: Window) -> Result<Self> {
        if working.z_min.is_none() || working.d_min.is_none() || working.is_empty() {
            return Err(AlgebraError::InvalidInput(
                "working window must be finite and nonempty".into(),
            ));
        }
        Ok(PsdoRing {
            coeff,
            kind,
            working,
        })
    }

    fn floor_z(&self, sound: Option<i64>) -> i64 {
        max_opt(sound, self.working.z_min).expect("working is finite")
    }

    fn floor_d(&self, sound: Option<i64>) -> i64 {
        max_opt(sound, self.working.d_min).expect("working is finite")
    }

    /// A single monomial `c * z^i d^j`, exact.
    pub fn monomial(&self, i: i64, j: i64, c: R::Elem) -> TruncatedPsdo<R::Elem> {
        let mut terms = BTreeMap::new();
        let (z_max, d_max) = if self.coeff.is_zero(&c) {
            (EMPTY_MAX, EMPTY_MAX)
        } else {
            terms.insert((i, j), c);
            (i, j)
        };
        TruncatedPsdo {
            kind: self.kind,
            window: Window {
                z_min: None,
                z_max,
                d_min: None,
                d_max,
            },
            terms,
        }
    }

    /// `(X - c)^k` for the chosen symbol, any integer `k`; negative powers
    /// expand as series down to the working window.
    pub fn linear_power(
        &self,
        symbol: Symbol,
        c: &BigRational,
        k: i64,
    ) -> Result<TruncatedPsdo<R::Elem>> {
        if k >= 0 {
            let mut out = self.zero();
            for t in 0..=k {
                let coeff = BigRational::from(crate::ring::binomial(k, t as u32))
                    * rat_pow(&(-c.clone()), k - t)?;
                let elt = self.coeff.from_rational(&coeff);
                if self.coeff.is_zero(&elt) {
                    continue;
                }
                let slot = match symbol {
                    Symbol::Z => (t, 0),
                    Symbol::D => (0, t),
                };
                out = self.add(&out, &self.monomial(slot.0, slot.1, elt))?;
            }
            Ok(out)
        } else {
            let e = (-k) as u32;
            let floor = match symbol {
                Symbol::Z => self.working.z_min.expect("finite"),
                Symbol::D => self.working.d_min.expect("finite"),
            };
            let mut terms = BTreeMap::new();
            let mut t = 0i64;
            loop {
                let exp = -(e as i64) - t;
                if exp < floor {
                    break;
                }
                let coeff = BigRational::from(crate::ring::binomial(t + e as i64 - 1, e - 1))
                    * rat_pow(c, t)?;
                let elt = self.coeff.from_rational(&coeff);
                if !self.coeff.is_zero(&elt) {
                    let slot = match symbol {
                        Symbol::Z => (exp, 0),
                        Symbol::D => (0, exp),
                    };
                    terms.insert(slot, elt);
                }
                t += 1;
            }
            let window = match symbol {
                Symbol::Z => Window {
                    z_min: self.working.z_min,
                    z_max: -(e as i64),
                    d_min: None,
                    d_max: 0,
                },
                Symbol::D => Window {
                    z_min: None,
                    z_max: 0,
                    d_min: self.working.d_min,
                    d_max: -(e as i64),
                },
            };
            Ok(TruncatedPsdo {
                kind: self.kind,
                window,
                terms,
            })
        }
    }

    /// Laurent expansion of `1/(X - c)^k`, `k >= 1`.
    pub fn pole_expand(
        &self,
        symbol: Symbol,
        c: &BigRational,
        k: u32,
    ) -> Result<TruncatedPsdo<R::Elem>> {
        if k == 0 {
            return Err(AlgebraError::InvalidInput("pole order must be >= 1".into()));
        }
        self.linear_power(symbol, c, -(k as i64))
    }

    fn mul_impl(
        &self,
        a: &TruncatedPsdo<R::Elem>,
        b: &TruncatedPsdo<R::Elem>,
    ) -> Result<TruncatedPsdo<R::Elem>> {
        let sound_z = max_opt(
            add_opt(a.window.z_min, b.window.z_max),
            add_opt(b.window.z_min, a.window.z_max),
        );
        let sound_d = max_opt(
            add_opt(a.window.d_min, b.window.d_max),
            add_opt(b.window.d_min, a.window.d_max),
        );
        let z_max = a.window.z_max + b.window.z_max;
        let d_max = a.window.d_max + b.window.d_max;
        let floor_z = self.floor_z(sound_z);
        let floor_d = self.floor_d(sound_d);
        let mut dropped_z = false;
        let mut dropped_d = false;
        let mut terms: BTreeMap<(i64, i64), R::Elem> = BTreeMap::new();
        for ((i1, j1), c1) in &a.terms {
            for ((i2, j2), c2) in &b.terms {
                match self.kind {
                    SymbolKind::Commuting => {
                        let (zi, dj) = (i1 + i2, j1 + j2);
                        if zi < floor_z {
                            dropped_z = true;
                            continue;
                        }
                        if dj < floor_d {
                            dropped_d = true;
                            continue;
                        }
                        let base = self.coeff.mul(c1, c2)?;
                        add_slot(&self.coeff, &mut terms, (zi, dj), &base, None);
                    }
                    SymbolKind::WeylPair => {
                        let mut kn: Option<i64> = None;
                        if *j1 >= 0 {
                            kn = Some(*j1);
                        }
                        if *i2 >= 0 {
                            kn = Some(kn.map_or(*i2, |v| v.min(*i2)));
                        }
                        let kw = (i1 + i2 - floor_z).min(j1 + j2 - floor_d);
                        let (kmax, truncated) = match kn {
                            Some(nat) if nat <= kw => (nat, false),
                            Some(_) => (kw, true),
                            None => (kw, true),
                        };
                        if truncated {
                            dropped_z = true;
                            dropped_d = true;
                        }
                        if kmax < 0 {
                            continue; // nothing lands inside the window
                        }
                        // the coefficient product is the expensive part;
                        // only pay for it once a slot is known to land
                        let mut base: Option<R::Elem> = None;
                        let mut k = 0i64;
                        while k <= kmax {
                            let zi = i1 + i2 - k;
                            let dj = j1 + j2 - k;
                            if zi < floor_z {
                                dropped_z = true;
                                k += 1;
                                continue;
                            }
                            if dj < floor_d {
                                dropped_d = true;
                                k += 1;
                                continue;
                            }
                            let f = reorder_factor(*j1, *i2, k as u32);
                            if !f.is_zero() {
                                if base.is_none() {
                                    base = Some(self.coeff.mul(c1, c2)?);
                                }
                                let b = base.as_ref().unwrap();
                                if !self.coeff.is_zero(b) {
                                    let factor = BigRational::from(f);
                                    add_slot(&self.coeff, &mut terms, (zi, dj), b, Some(&factor));
                                }
                            }
                            k += 1;
                        }
                    }
                }
            }
        }
        let window = Window {
            z_min: if dropped_z { Some(floor_z) } else { sound_z },
            z_max,
            d_min: if dropped_d { Some(floor_d) } else { sound_d },
            d_max,
        };
        Ok(TruncatedPsdo {
            kind: self.kind,
            window,
            terms,
        })
    }

    /// Geometric-series inverse around the unique leading monomial.
    pub fn invert_series(&self, a: &TruncatedPsdo<R::Elem>) -> Result<TruncatedPsdo<R::Elem>> {
        if a.terms.is_empty() {
            return Err(AlgebraError::NotInvertible("zero series".into()));
        }
        let top = a.max_total().expect("nonempty");
        let leading: Vec<_> = a.terms.iter().filter(|((i, j), _)| i + j == top).collect();
        if leading.len() != 1 {
            return Err(AlgebraError::NotInvertible(format!(
                "no unique leading monomial: {} slots of total order {}",
                leading.len(),
                top
            )));
        }
        let (&(i0, j0), c0) = leading[0];
        let c0_inv = self.coeff.invert(c0).map_err(|e| {
            AlgebraError::NotInvertible(format!("leading coefficient at z^{} d^{}: {}", i0, j0, e))
        })?;
        // inverse of the monomial c z^{i0} d^{j0} is d^{-j0} z^{-i0} c^{-1}
        let linv = self.reorder_monomial(-j0, -i0, &c0_inv)?;
        let l = self.monomial(i0, j0, c0.clone());
        let n = self.mul_impl(&linv, &self.sub(a, &l)?)?;
        let neg_n = self.neg(&n);
        let mut acc = linv.clone();
        let mut term = linv;
        let span = (self.working.z_max - self.working.z_min.unwrap())
            + (self.working.d_max - self.working.d_min.unwrap());
        let cap = span + 64;
        for _ in 0..cap {
            term = self.mul_impl(&neg_n, &term)?;
            // even an empty term carries truncation marks in its window
            acc = self.add(&acc, &term)?;
            if term.terms.is_empty() {
                if acc.window.is_empty() {
                    return Err(AlgebraError::WindowExhausted(
                        "inverse series emptied its window".into(),
                    ));
                }
                return Ok(acc);
            }
        }
        Err(AlgebraError::WindowExhausted(
            "inverse series did not terminate within the working window".into(),
        ))
    }

    /// Canonical form of `d^i z^j` times a central coefficient.
    fn reorder_monomial(&self, i: i64, j: i64, c: &R::Elem) -> Result<TruncatedPsdo<R::Elem>> {
        match self.kind {
            SymbolKind::Commuting => Ok(self.monomial(j, i, c.clone())),
            SymbolKind::WeylPair => {
                let floor_z = self.working.z_min.expect("finite");
                let floor_d = self.working.d_min.expect("finite");
                let mut kn: Option<i64> = None;
                if i >= 0 {
                    kn = Some(i);
                }
                if j >= 0 {
                    kn = Some(kn.map_or(j, |v| v.min(j)));
                }
                let kw = (j - floor_z).min(i - floor_d);
                let (kmax, truncated) = match kn {
                    Some(nat) if nat <= kw => (nat, false),
                    Some(_) => (kw, true),
                    None => (kw, true),
                };
                let mut terms = BTreeMap::new();
                let mut k = 0i64;
                while k <= kmax {
                    let f = reorder_factor(i, j, k as u32);
                    if !f.is_zero() {
                        let elt = self.coeff.scale(c, &BigRational::from(f));
                        if !self.coeff.is_zero(&elt) {
                            terms.insert((j - k, i - k), elt);
                        }
                    }
                    k += 1;
                }
                let window = Window {
                    z_min: if truncated { Some(floor_z) } else { None },
                    z_max: j,
                    d_min: if truncated { Some(floor_d) } else { None },
                    d_max: i,
                };
                Ok(TruncatedPsdo {
                    kind: self.kind,
                    window,
                    terms,
                })
            }
        }
    }

    /// The isomorphism induced by `z -> d, d -> -z` onto the other
    /// canonical order, re-expressed in this one. Windows swap axes.
    pub fn omega(&self, a: &TruncatedPsdo<R::Elem>) -> Result<TruncatedPsdo<R::Elem>> {
        if self.kind != SymbolKind::WeylPair {
            return Err(AlgebraError::InvalidInput(
                "omega applies to the pseudo-differential ring".into(),
            ));
        }
        let swapped_sound_z = a.window.d_min;
        let swapped_sound_d = a.window.z_min;
        let floor_z = self.floor_z(swapped_sound_z);
        let floor_d = self.floor_d(swapped_sound_d);
        let mut dropped_z = false;
        let mut dropped_d = false;
        let mut terms: BTreeMap<(i64, i64), R::Elem> = BTreeMap::new();
        for ((i, j), c) in &a.terms {
            // z^i d^j -> (-1)^j d^i z^j, then reorder d^i z^j
            let base = if j.rem_euclid(2) == 0 {
                c.clone()
            } else {
                self.coeff.neg(c)
            };
            let mut kn: Option<i64> = None;
            if *i >= 0 {
                kn = Some(*i);
            }
            if *j >= 0 {
                kn = Some(kn.map_or(*j, |v| v.min(*j)));
            }
            let kw = (j - floor_z).min(i - floor_d);
            let (kmax, truncated) = match kn {
                Some(nat) if nat <= kw => (nat, false),
                Some(_) => (kw, true),
                None => (kw, true),
            };
            if truncated {
                dropped_z = true;
                dropped_d = true;
            }
            let mut k = 0i64;
            while k <= kmax {
                let zi = j - k;
                let dj = i - k;
                if zi < floor_z {
                    dropped_z = true;
                } else if dj < floor_d {
                    dropped_d = true;
                } else {
                    let f = reorder_factor(*i, *j, k as u32);
                    if !f.is_zero() {
                        let factor = BigRational::from(f);
                        add_slot(&self.coeff, &mut terms, (zi, dj), &base, Some(&factor));
                    }
                }
                k += 1;
            }
        }
        let window = Window {
            z_min: if dropped_z {
                Some(floor_z)
            } else {
                swapped_sound_z
            },
            z_max: a.window.d_max,
            d_min: if dropped_d {
                Some(floor_d)
            } else {
                swapped_sound_d
            },
            d_max: a.window.z_max,
        };
        Ok(TruncatedPsdo {
            kind: self.kind,
            window,
            terms,
        })
    }

    /// Re-express with derivative powers on the left, for coefficient
    /// extraction in the series-in-z families.
    pub fn to_dz_form(&self, a: &TruncatedPsdo<R::Elem>) -> Result<DzForm<R::Elem>> {
        match self.kind {
            SymbolKind::Commuting => Ok(DzForm {
                window: a.window,
                terms: a.terms.clone(),
            }),
            SymbolKind::WeylPair => {
                let floor_z = self.floor_z(a.window.z_min);
                let floor_d = self.floor_d(a.window.d_min);
                let mut dropped_z = false;
                let mut dropped_d = false;
                let mut terms: BTreeMap<(i64, i64), R::Elem> = BTreeMap::new();
                for ((i, j), c) in &a.terms {
                    // z^i d^j = sum_k (-1)^k C(i,k)C(j,k)k! d^{j-k} z^{i-k}
                    let mut kn: Option<i64> = None;
                    if *i >= 0 {
                        kn = Some(*i);
                    }
                    if *j >= 0 {
                        kn = Some(kn.map_or(*j, |v| v.min(*j)));
                    }
                    let kw = (i - floor_z).min(j - floor_d);
                    let (kmax, truncated) = match kn {
                        Some(nat) if nat <= kw => (nat, false),
                        Some(_) => (kw, true),
                        None => (kw, true),
                    };
                    if truncated {
                        dropped_z = true;
                        dropped_d = true;
                    }
                    let mut k = 0i64;
                    while k <= kmax {
                        let zi = i - k;
                        let dj = j - k;
                        if zi < floor_z {
                            dropped_z = true;
                        } else if dj < floor_d {
                            dropped_d = true;
                        } else {
                            let mut f = reorder_factor(*i, *j, k as u32);
                            if k % 2 == 1 {
                                f = -f;
                            }
                            if !f.is_zero() {
                                let factor = BigRational::from(f);
                                add_slot(&self.coeff, &mut terms, (zi, dj), c, Some(&factor));
                            }
                        }
                        k += 1;
                    }
                }
                Ok(DzForm {
                    window: Window {
                        z_min: if dropped_z {
                            Some(floor_z)
                        } else {
                            a.window.z_min
                        },
                        z_max: a.window.z_max,
                        d_min: if dropped_d {
                            Some(floor_d)
                        } else {
                            a.window.d_min
                        },
                        d_max: a.window.d_max,
                    },
                    terms,
                })
            }
        }
    }

    /// Map coefficients through an algebra homomorphism into another ring.
    pub fn map_coeffs<S: Ring, F>(
        &self,
        target: &PsdoRing<S>,
        a: &TruncatedPsdo<R::Elem>,
        f: F,
    ) -> Result<TruncatedPsdo<S::Elem>>
    where
        F: Fn(&R::Elem) -> Result<S::Elem>,
    {
        let mut terms = BTreeMap::new();
        for (slot, c) in &a.terms {
            let img = f(c)?;
            if !target.coeff.is_zero(&img) {
                terms.insert(*slot, img);
            }
        }
        Ok(TruncatedPsdo {
            kind: target.kind,
            window: a.window,
            terms,
        })
    }
}

fn add_slot<R: Ring>(
    ring: &R,
    terms: &mut BTreeMap<(i64, i64), R::Elem>,
    slot: (i64, i64),
    v: &R::Elem,
    factor: Option<&BigRational>,
) {
    use std::collections::btree_map::Entry;
    match terms.entry(slot) {
        Entry::Vacant(e) => {
            let elt = match factor {
                Some(c) => ring.scale(v, c),
                None => v.clone(),
            };
            if !ring.is_zero(&elt) {
                e.insert(elt);
            }
        }
        Entry::Occupied(mut e) => {
            let res = match factor {
                Some(c) => ring.add_scaled_assign(e.get_mut(), v, c),
                None => ring.add_assign(e.get_mut(), v),
            };
            res.expect("same-algebra slot sum");
            if ring.is_zero(e.get()) {
                e.remove();
            }
        }
    }
}

impl<R: Ring> Ring for PsdoRing<R> {
    type Elem = TruncatedPsdo<R::Elem>;

    fn zero(&self) -> Self::Elem {
        TruncatedPsdo {
            kind: self.kind,
            window: Window {
                z_min: None,
                z_max: EMPTY_MAX,
                d_min: None,
                d_max: EMPTY_MAX,
            },
            terms: BTreeMap::new(),
        }
    }

    fn one(&self) -> Self::Elem {
        self.monomial(0, 0, self.coeff.one())
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.terms.is_empty()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        TruncatedPsdo {
            kind: a.kind,
            window: a.window,
            terms: a
                .terms
                .iter()
                .map(|(s, c)| (*s, self.coeff.neg(c)))
                .collect(),
        }
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        if a.kind != b.kind {
            return Err(AlgebraError::Mismatch("mixed symbol kinds".into()));
        }
        let window = a.window.intersect(&b.window);
        let mut terms = BTreeMap::new();
        for (slot, c) in &a.terms {
            if window.contains(slot.0, slot.1) {
                add_slot(&self.coeff, &mut terms, *slot, c, None);
            }
        }
        for (slot, c) in &b.terms {
            if window.contains(slot.0, slot.1) {
                add_slot(&self.coeff, &mut terms, *slot, c, None);
            }
        }
        Ok(TruncatedPsdo {
            kind: a.kind,
            window,
            terms,
        })
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        if a.kind != b.kind || a.kind != self.kind {
            return Err(AlgebraError::Mismatch("mixed symbol kinds".into()));
        }
        let out = self.mul_impl(a, b)?;
        if out.window.is_empty() && !a.terms.is_empty() && !b.terms.is_empty() {
            return Err(AlgebraError::WindowExhausted(format!(
                "product window {} is empty",
                out.window
            )));
        }
        Ok(out)
    }

    fn scale(&self, a: &Self::Elem, c: &BigRational) -> Self::Elem {
        if c.is_zero() {
            return self.zero();
        }
        TruncatedPsdo {
            kind: a.kind,
            window: a.window,
            terms: a
                .terms
                .iter()
                .map(|(s, v)| (*s, self.coeff.scale(v, c)))
                .collect(),
        }
    }

    fn invert(&self, a: &Self::Elem) -> Result<Self::Elem> {
        self.invert_series(a)
    }

    fn homogeneity(&self, a: &Self::Elem) -> Homogeneity {
        let mut h = Homogeneity::Zero;
        for c in a.terms.values() {
            h = h.merge(self.coeff.homogeneity(c));
        }
        h
    }
}

/// Outcome of a coefficientwise comparison on the joint sound window.
#[derive(Debug, Clone)]
pub struct SeriesComparison {
    pub joint_z_min: Option<i64>,
    pub joint_d_min: Option<i64>,
    pub compared_slots: usize,
    pub mismatches: Vec<(i64, i64)>,
}

impl SeriesComparison {
    pub fn equal(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Short stable digest of a coefficient's canonical form.
pub fn value_digest<E: std::fmt::Debug>(v: Option<&E>) -> String {
    use sha2::{Digest, Sha256};
    let text = match v {
        Some(v) => format!("{:?}", v),
        None => "0".into(),
    };
    let hash = Sha256::digest(text.as_bytes());
    hash[..8].iter().map(|b| format!("{:02x}", b)).collect()
}

/// Per-slot comparison records over the joint sound region of two series.
pub fn coefficient_records<E: PartialEq + Clone + std::fmt::Debug>(
    a: &TruncatedPsdo<E>,
    b: &TruncatedPsdo<E>,
) -> Vec<crate::report::CoefficientRecord> {
    let z_min = max_opt(a.window.z_min, b.window.z_min);
    let d_min = max_opt(a.window.d_min, b.window.d_min);
    let sound = |i: i64, j: i64| z_min.map_or(true, |m| i >= m) && d_min.map_or(true, |m| j >= m);
    let mut slots: Vec<(i64, i64)> = a
        .terms
        .keys()
        .chain(b.terms.keys())
        .filter(|(i, j)| sound(*i, *j))
        .cloned()
        .collect();
    slots.sort();
    slots.dedup();
    slots
        .into_iter()
        .map(|(i, j)| {
            let left = a.terms.get(&(i, j));
            let right = b.terms.get(&(i, j));
            crate::report::CoefficientRecord {
                z_exp: i,
                d_exp: j,
                left: value_digest(left),
                right: value_digest(right),
                equal: left == right,
            }
        })
        .collect()
}

/// Compare two series on the intersection of their sound regions. Slots
/// above the upper bounds are known zeros, so only lower bounds matter.
pub fn compare_series<E: PartialEq + Clone>(
    a: &TruncatedPsdo<E>,
    b: &TruncatedPsdo<E>,
) -> SeriesComparison {
    compare_slot_maps(
        &a.terms,
        &b.terms,
        max_opt(a.window.z_min, b.window.z_min),
        max_opt(a.window.d_min, b.window.d_min),
    )
}

pub fn compare_dz_forms<E: PartialEq + Clone>(a: &DzForm<E>, b: &DzForm<E>) -> SeriesComparison {
    compare_slot_maps(
        &a.terms,
        &b.terms,
        max_opt(a.window.z_min, b.window.z_min),
        max_opt(a.window.d_min, b.window.d_min),
    )
}

fn compare_slot_maps<E: PartialEq + Clone>(
    a: &BTreeMap<(i64, i64), E>,
    b: &BTreeMap<(i64, i64), E>,
    z_min: Option<i64>,
    d_min: Option<i64>,
) -> SeriesComparison {
    let sound = |i: i64, j: i64| z_min.is_none_or(|m| i >= m) && d_min.is_none_or(|m| j >= m);
    let mut slots: Vec<(i64, i64)> = a
        .keys()
        .chain(b.keys())
        .filter(|(i, j)| sound(*i, *j))
        .cloned()
        .collect();
    slots.sort();
    slots.dedup();
    let mut mismatches = Vec::new();
    for (i, j) in &slots {
        match (a.get(&(*i, *j)), b.get(&(*i, *j))) {
            (Some(x), Some(y)) if x == y => {}
            (None, None) => {}
            _ => mismatches.push((*i, *j)),
        }
    }
    SeriesComparison {
        joint_z_min: z_min,
        joint_d_min: d_min,
        compared_slots: slots.len(),
        mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, rat_int, Rationals};

    fn ring() -> PsdoRing<Rationals> {
        PsdoRing::new(
            Rationals,
            SymbolKind::WeylPair,
            Window::working(-8, 4, -8, 4).unwrap(),
        )
        .unwrap()
    }

    fn z(r: &PsdoRing<Rationals>) -> TruncatedPsdo<BigRational> {
        r.monomial(1, 0, rat_int(1))
    }

    fn d(r: &PsdoRing<Rationals>) -> TruncatedPsdo<BigRational> {
        r.monomial(0, 1, rat_int(1))
    }

    #[test]
    fn defining_relation() {
        let r = ring();
        let dz = r.mul(&d(&r), &z(&r)).unwrap();
        // d z = z d + 1
        assert_eq!(dz.coefficient(1, 1), Some(&rat_int(1)));
        assert_eq!(dz.coefficient(0, 0), Some(&rat_int(1)));
        assert_eq!(dz.terms.len(), 2);
        // z d is already canonical
        let zd = r.mul(&z(&r), &d(&r)).unwrap();
        assert_eq!(zd.terms.len(), 1);
        assert_eq!(zd.coefficient(1, 1), Some(&rat_int(1)));
    }

    #[test]
    fn negative_power_relation() {
        let r = ring();
        let dinv = r.monomial(0, -1, rat_int(1));
        let prod = r.mul(&dinv, &z(&r)).unwrap();
        // d^{-1} z = z d^{-1} - d^{-2}
        assert_eq!(prod.coefficient(1, -1), Some(&rat_int(1)));
        assert_eq!(prod.coefficient(0, -2), Some(&rat_int(-1)));
        assert_eq!(prod.terms.len(), 2);
    }

    #[test]
    fn invert_shifted_derivative() {
        let r = ring();
        let c = rat(5, 3);
        let a = r.sub(&d(&r), &r.monomial(0, 0, c.clone())).unwrap();
        let inv = r.invert_series(&a).unwrap();
        // sum c^k d^{-k-1}
        for k in 0..6i64 {
            let expect = num::pow::pow(c.clone(), k as usize);
            assert_eq!(inv.coefficient(0, -k - 1), Some(&expect), "k={}", k);
        }
        let prod = r.mul(&a, &inv).unwrap();
        let cmp = compare_series(&prod, &r.one());
        assert!(cmp.equal(), "mismatches {:?}", cmp.mismatches);
        let prod2 = r.mul(&inv, &a).unwrap();
        assert!(compare_series(&prod2, &r.one()).equal());
    }

    #[test]
    fn invert_one_and_involution() {
        let r = ring();
        assert_eq!(r.invert_series(&r.one()).unwrap(), r.one());
        let a = r.sub(&z(&r), &r.monomial(0, 0, rat(1, 2))).unwrap();
        let inv = r.invert_series(&a).unwrap();
        let back = r.invert_series(&inv).unwrap();
        assert!(compare_series(&back, &a).equal());
    }

    #[test]
    fn omega_images() {
        let r = ring();
        let oz = r.omega(&z(&r)).unwrap();
        assert_eq!(oz.terms.len(), 1);
        assert_eq!(oz.coefficient(0, 1), Some(&rat_int(1)));
        let od = r.omega(&d(&r)).unwrap();
        assert_eq!(od.coefficient(1, 0), Some(&rat_int(-1)));
        // z d -> -z d - 1
        let zd = r.mul(&z(&r), &d(&r)).unwrap();
        let o = r.omega(&zd).unwrap();
        assert_eq!(o.coefficient(1, 1), Some(&rat_int(-1)));
        assert_eq!(o.coefficient(0, 0), Some(&rat_int(-1)));
    }

    #[test]
    fn omega_squared_is_sign_flip() {
        let r = ring();
        for (i, j) in [(1i64, 0i64), (0, 1), (2, 1), (1, 2), (-1, 0), (0, -2)] {
            let a = r.monomial(i, j, rat_int(1));
            let oo = r.omega(&r.omega(&a).unwrap()).unwrap();
            let sign = if (i + j).rem_euclid(2) == 0 { 1 } else { -1 };
            let expect = r.monomial(i, j, rat_int(sign));
            let cmp = compare_series(&oo, &expect);
            assert!(cmp.equal(), "slot ({}, {}): {:?}", i, j, cmp.mismatches);
        }
    }

    #[test]
    fn omega_multiplicative() {
        let r = ring();
        let a = r.add(&z(&r), &r.monomial(-1, 1, rat(2, 1))).unwrap();
        let b = r.add(&d(&r), &r.monomial(1, -1, rat(-1, 3))).unwrap();
        let lhs = r.omega(&r.mul(&a, &b).unwrap()).unwrap();
        let rhs = r
            .mul(&r.omega(&a).unwrap(), &r.omega(&b).unwrap())
            .unwrap();
        let cmp = compare_series(&lhs, &rhs);
        assert!(cmp.equal(), "{:?}", cmp.mismatches);
    }

    #[test]
    fn pole_expansions() {
        let r = ring();
        let c = rat(3, 1);
        let p1 = r.pole_expand(Symbol::Z, &c, 1).unwrap();
        for j in 0..6i64 {
            assert_eq!(
                p1.coefficient(-j - 1, 0),
                Some(&num::pow::pow(c.clone(), j as usize))
            );
        }
        // 1/z^2 is a single slot
        let p2 = r.pole_expand(Symbol::Z, &rat(0, 1), 2).unwrap();
        assert_eq!(p2.terms.len(), 1);
        assert_eq!(p2.coefficient(-2, 0), Some(&rat_int(1)));
        // 1/(z-c)^2: term-by-term derivative of the simple pole
        let q = r.pole_expand(Symbol::Z, &c, 2).unwrap();
        for j in 1..6i64 {
            let expect = rat_int(j) * num::pow::pow(c.clone(), (j - 1) as usize);
            assert_eq!(q.coefficient(-j - 1, 0), Some(&expect), "j={}", j);
        }
        // multiplying back by (z-c)^2 gives 1 on the window
        let lin2 = r.linear_power(Symbol::Z, &c, 2).unwrap();
        let prod = r.mul(&lin2, &q).unwrap();
        assert!(compare_series(&prod, &r.one()).equal());
    }

    #[test]
    fn associativity_spot() {
        let r = ring();
        let a = r.add(&d(&r), &r.monomial(-2, 0, rat(1, 2))).unwrap();
        let b = r.add(&z(&r), &r.monomial(0, -1, rat(7, 5))).unwrap();
        let c = r.add(&r.one(), &r.monomial(-1, -1, rat(-2, 3))).unwrap();
        let ab_c = r.mul(&r.mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = r.mul(&a, &r.mul(&b, &c).unwrap()).unwrap();
        let cmp = compare_series(&ab_c, &a_bc);
        assert!(cmp.equal(), "{:?}", cmp.mismatches);
    }

    #[test]
    fn window_soundness_on_enlargement() {
        let small = PsdoRing::new(
            Rationals,
            SymbolKind::WeylPair,
            Window::working(-5, 3, -5, 3).unwrap(),
        )
        .unwrap();
        let large = PsdoRing::new(
            Rationals,
            SymbolKind::WeylPair,
            Window::working(-9, 3, -9, 3).unwrap(),
        )
        .unwrap();
        let mk = |r: &PsdoRing<Rationals>| {
            let a = r.pole_expand(Symbol::Z, &rat(2, 1), 1).unwrap();
            let shifted = r.sub(&d(r), &r.monomial(0, 0, rat(1, 3))).unwrap();
            let b = r.invert_series(&shifted).unwrap();
            r.mul(&a, &b).unwrap()
        };
        let s = mk(&small);
        let l = mk(&large);
        for (slot, v) in &s.terms {
            if s.window.contains(slot.0, slot.1) {
                assert_eq!(l.terms.get(slot), Some(v), "slot {:?}", slot);
            }
        }
    }

    #[test]
    fn dz_form_of_euler() {
        let r = ring();
        let zd = r.mul(&z(&r), &d(&r)).unwrap();
        let f = r.to_dz_form(&zd).unwrap();
        // z d = d z - 1 in the other order
        assert_eq!(f.terms.get(&(1, 1)), Some(&rat_int(1)));
        assert_eq!(f.terms.get(&(0, 0)), Some(&rat_int(-1)));
    }
}
