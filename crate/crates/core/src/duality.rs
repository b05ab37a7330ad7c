//! The two Fock-space homomorphisms from the even-side and super-side
//! Takiff sums into the Weyl superalgebra, their classical descents, and
//! the engines verifying the determinant/Berezinian duality identity,
//! its classical shadow, and the image-equality evidence.

use num::BigRational;
use num::Zero;

use crate::envalg::{Enveloping, GlAlgebra, PbwElement, TakiffSum};
use crate::error::{AlgebraError, Result};
use crate::gaudin::{
    extract_generators, CharacterTable, ExtractedGenerator, GaudinContext, GeneratorRole,
    SingularityData,
};
use crate::ncmatrix::{self, TypedMatrix};
use crate::psdo::{
    compare_dz_forms, compare_series, PsdoRing, Symbol, SymbolKind, TruncatedPsdo, Window,
};
use crate::report::CheckOutcome;
use crate::ring::{rat_int, Ring};
use crate::superpoly::{
    poisson_bracket, CanonicalPairs, GenId, LiePoisson, SuperPoly,
    SuperPolyRing,
};
use crate::weylalg::{WeylElement, WeylProfile, WeylRing};

/// Deliberate sign corruption used by falsification controls: flips the
/// sign of one quadrant of the super-side map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// creation-pair quadrant (needs p + q > 0 to bite)
    FlipXySign,
    /// number-operator quadrant (present in every scenario with m+n > 0)
    FlipXxSign,
}

/// Full input of one verification scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub d: u16,
    pub p: u16,
    pub q: u16,
    pub m: u16,
    pub n: u16,
    /// composition of d; one entry per even-side singular point
    pub xi: Vec<u32>,
    /// composition aligned with (p, q, m, n); one entry per super-side
    /// singular point
    pub gamma: Vec<u32>,
    pub w: Vec<BigRational>,
    pub z: Vec<BigRational>,
    pub window: Window,
    /// smaller window for enveloping-algebra generator families
    pub gen_window: Window,
    pub mutation: Option<Mutation>,
}

/// Site bookkeeping derived from the compositions.
#[derive(Debug, Clone)]
pub struct ScenarioDims {
    pub sites_p: usize,
    pub sites_q: usize,
    pub sites_m: usize,
    pub sites_n: usize,
    /// cumulative sums of gamma: l[0] = 0, ..., l[sites] = p+q+m+n
    pub l_cum: Vec<u32>,
    /// cumulative sums of xi: d[0] = 0, ..., d[sites] = d
    pub d_cum: Vec<u32>,
}

impl ScenarioDims {
    pub fn y_sites(&self) -> usize {
        self.sites_p + self.sites_q
    }

    pub fn total_sites(&self) -> usize {
        self.sites_p + self.sites_q + self.sites_m + self.sites_n
    }

    /// Sign of the pole-order exponent for a super-side site (0-based):
    /// positive on the even blocks, negative on the odd ones.
    pub fn order_sign(&self, site: usize) -> i64 {
        if site < self.sites_p {
            1
        } else if site < self.sites_p + self.sites_q {
            -1
        } else if site < self.sites_p + self.sites_q + self.sites_m {
            1
        } else {
            -1
        }
    }
}

fn take_block(gamma: &[u32], start: usize, target: u32, label: &str) -> Result<usize> {
    let mut acc = 0u64;
    let target = target as u64;
    let mut cnt = 0usize;
    while acc < target {
        match gamma.get(start + cnt) {
            Some(g) => {
                acc += *g as u64;
                cnt += 1;
            }
            None => {
                return Err(AlgebraError::InvalidInput(format!(
                    "composition ends before the {} block sums to {}",
                    label, target
                )))
            }
        }
    }
    if acc != target {
        return Err(AlgebraError::InvalidInput(format!(
            "composition block for {} sums to {} instead of {}",
            label, acc, target
        )));
    }
    Ok(cnt)
}

fn all_distinct(points: &[BigRational]) -> bool {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return false;
            }
        }
    }
    true
}

impl Scenario {
    pub fn validate(&self) -> Result<ScenarioDims> {
        if self.d == 0 {
            return Err(AlgebraError::InvalidInput("d must be >= 1".into()));
        }
        if self.xi.is_empty() || self.xi.contains(&0) {
            return Err(AlgebraError::InvalidInput(
                "xi must be a composition of positive parts".into(),
            ));
        }
        let xi_sum: u64 = self.xi.iter().map(|x| *x as u64).sum();
        if xi_sum != self.d as u64 {
            return Err(AlgebraError::InvalidInput(format!(
                "xi sums to {} but d = {}; the w-side composition must sum to d",
                xi_sum, self.d
            )));
        }
        if self.gamma.contains(&0) {
            return Err(AlgebraError::InvalidInput(
                "gamma must have positive parts".into(),
            ));
        }
        let sites_p = take_block(&self.gamma, 0, self.p as u32, "p")?;
        let sites_q = take_block(&self.gamma, sites_p, self.q as u32, "q")?;
        let sites_m = take_block(&self.gamma, sites_p + sites_q, self.m as u32, "m")?;
        let sites_n = take_block(
            &self.gamma,
            sites_p + sites_q + sites_m,
            self.n as u32,
            "n",
        )?;
        let used = sites_p + sites_q + sites_m + sites_n;
        if used != self.gamma.len() {
            return Err(AlgebraError::InvalidInput(format!(
                "gamma has {} parts but its blocks for (p, q, m, n) use {}",
                self.gamma.len(),
                used
            )));
        }
        if self.w.len() != self.xi.len() {
            return Err(AlgebraError::InvalidInput(
                "w must carry one point per part of xi".into(),
            ));
        }
        if self.z.len() != self.gamma.len() {
            return Err(AlgebraError::InvalidInput(
                "z must carry one point per part of gamma".into(),
            ));
        }
        if !all_distinct(&self.w) || !all_distinct(&self.z) {
            return Err(AlgebraError::InvalidInput(
                "points must be pairwise distinct within each tuple".into(),
            ));
        }
        // block sums are bounded by small profile totals at this point
        let mut l_cum = vec![0u32];
        for g in &self.gamma {
            l_cum.push(l_cum.last().unwrap() + g);
        }
        let mut d_cum = vec![0u32];
        for x in &self.xi {
            d_cum.push(d_cum.last().unwrap() + x);
        }
        Ok(ScenarioDims {
            sites_p,
            sites_q,
            sites_m,
            sites_n,
            l_cum,
            d_cum,
        })
    }

    pub fn profile(&self) -> Result<WeylProfile> {
        WeylProfile::new(self.d, self.p, self.q, self.m, self.n)
    }

    pub fn describe(&self) -> String {
        format!(
            "{} (d={}, p={}, q={}, m={}, n={}, xi={:?}, gamma={:?}, window {})",
            self.name, self.d, self.p, self.q, self.m, self.n, self.xi, self.gamma, self.window
        )
    }
}

/// The pair of Fock-space homomorphisms attached to a scenario.
pub struct FockMap<'a> {
    pub sc: &'a Scenario,
    pub dims: ScenarioDims,
    pub profile: WeylProfile,
}

impl<'a> FockMap<'a> {
    pub fn new(sc: &'a Scenario) -> Result<Self> {
        let dims = sc.validate()?;
        let profile = sc.profile()?;
        Ok(FockMap { sc, dims, profile })
    }

    /// Even-side image of `e_{ab} (x) t^k` at a super-side site
    /// (0-based). Annihilation-type on the y block, creation-type with a
    /// parity sign on the x block.
    pub fn phi_d_generator(&self, site: usize, a: u16, b: u16, k: u32) -> Result<WeylElement> {
        if site >= self.dims.total_sites() || k >= self.sc.gamma[site] {
            return Err(AlgebraError::InvalidInput(format!(
                "site {} degree {} outside the composition",
                site, k
            )));
        }
        if a == 0 || a > self.sc.d || b == 0 || b > self.sc.d {
            return Err(AlgebraError::InvalidInput("matrix index out of range".into()));
        }
        let lo = self.dims.l_cum[site];
        let hi = self.dims.l_cum[site + 1];
        let mut out = WeylElement::zero();
        if site < self.dims.y_sites() {
            // - sum_r y^b_r d_{y^a_{r+k}}
            for r in lo + 1..=hi - k {
                let yv = WeylElement::variable(self.profile.y(b, r as u16)?);
                let dy = WeylElement::derivative(self.profile.y(a, (r + k) as u16)?);
                out = out.add(&yv.mul(&dy)?.neg());
            }
        } else {
            // sum_r (parity sign) d_{x^b_r} x^a_{r+k}
            let off = (self.sc.p + self.sc.q) as u32;
            for r in lo + 1 - off..=hi - k - off {
                let sign = if self.profile.x_parity(r as u16).is_odd() {
                    rat_int(-1)
                } else {
                    rat_int(1)
                };
                let dx = WeylElement::derivative(self.profile.x(b, r as u16)?);
                let xv = WeylElement::variable(self.profile.x(a, (r + k) as u16)?);
                out = out.add(&dx.mul(&xv)?.scale(&sign));
            }
        }
        Ok(out)
    }

    /// Super-side image of `E^i_j (x) t^k` at an even-side site
    /// (0-based), by quadrant of (i, j).
    pub fn phi_s_generator(&self, site: usize, i: u16, j: u16, k: u32) -> Result<WeylElement> {
        if site >= self.sc.xi.len() || k >= self.sc.xi[site] {
            return Err(AlgebraError::InvalidInput(format!(
                "site {} degree {} outside the composition",
                site, k
            )));
        }
        let sz = self.sc.p + self.sc.q + self.sc.m + self.sc.n;
        if i == 0 || i > sz || j == 0 || j > sz {
            return Err(AlgebraError::InvalidInput("matrix index out of range".into()));
        }
        let pq = self.sc.p + self.sc.q;
        let lo = self.dims.d_cum[site];
        let hi = self.dims.d_cum[site + 1];
        let mut out = WeylElement::zero();
        let odd_sign = |s: u16| {
            if self.profile.y_parity(s).is_odd() {
                rat_int(1)
            } else {
                rat_int(-1)
            }
        };
        for alpha in lo + 1..=hi - k {
            let al = alpha as u16;
            let alk = (alpha + k) as u16;
            let term = match (i <= pq, j <= pq) {
                (true, true) => {
                    let dy = WeylElement::derivative(self.profile.y(alk, i)?);
                    let yv = WeylElement::variable(self.profile.y(al, j)?);
                    dy.mul(&yv)?.scale(&odd_sign(j))
                }
                (true, false) => {
                    let dy = WeylElement::derivative(self.profile.y(alk, i)?);
                    let dx = WeylElement::derivative(self.profile.x(al, j - pq)?);
                    dy.mul(&dx)?
                }
                (false, true) => {
                    let xv = WeylElement::variable(self.profile.x(alk, i - pq)?);
                    let yv = WeylElement::variable(self.profile.y(al, j)?);
                    let mut t = xv.mul(&yv)?.scale(&odd_sign(j));
                    if self.sc.mutation == Some(Mutation::FlipXySign) {
                        t = t.neg();
                    }
                    t
                }
                (false, false) => {
                    let xv = WeylElement::variable(self.profile.x(alk, i - pq)?);
                    let dx = WeylElement::derivative(self.profile.x(al, j - pq)?);
                    let mut t = xv.mul(&dx)?;
                    if self.sc.mutation == Some(Mutation::FlipXxSign) {
                        t = t.neg();
                    }
                    t
                }
            };
            out = out.add(&term);
        }
        Ok(out)
    }

    fn map_word<F>(word: &[u32], image_of: F) -> Result<WeylElement>
    where
        F: Fn(u32) -> Result<WeylElement>,
    {
        let mut acc = WeylElement::one();
        for idx in word {
            acc = acc.mul(&image_of(*idx)?)?;
        }
        Ok(acc)
    }

    fn element_through<F>(e: &PbwElement, image_of: F) -> Result<WeylElement>
    where
        F: Fn(u32) -> Result<WeylElement> + Copy,
    {
        let mut out = WeylElement::zero();
        for (mono, c) in &e.terms {
            let mut word = Vec::new();
            for (idx, exp) in &mono.0 {
                for _ in 0..*exp {
                    word.push(*idx);
                }
            }
            out = out.add(&Self::map_word(&word, image_of)?.scale(c));
        }
        Ok(out)
    }

    /// Push an enveloping-algebra element of the super-side Takiff sum
    /// through the even-side map.
    pub fn phi_d_element(&self, takiff: &TakiffSum, e: &PbwElement) -> Result<WeylElement> {
        Self::element_through(e, |idx| {
            let (site, i, j, deg) = takiff.decode(idx);
            self.phi_d_generator(site, i, j, deg)
        })
    }

    /// Push an enveloping-algebra element of the even-side Takiff sum
    /// through the super-side map.
    pub fn phi_s_element(&self, takiff: &TakiffSum, e: &PbwElement) -> Result<WeylElement> {
        Self::element_through(e, |idx| {
            let (site, i, j, deg) = takiff.decode(idx);
            self.phi_s_generator(site, i, j, deg)
        })
    }

    /// Classical descent of the even-side map: same sums with momenta in
    /// place of derivatives, in the supercommutative algebra.
    pub fn phi_d_classical(&self, site: usize, a: u16, b: u16, k: u32) -> Result<SuperPoly> {
        let img = self.phi_d_generator(site, a, b, k)?;
        img.top_symbol(2)
    }

    pub fn phi_s_classical(&self, site: usize, i: u16, j: u16, k: u32) -> Result<SuperPoly> {
        let img = self.phi_s_generator(site, i, j, k)?;
        img.top_symbol(2)
    }

    fn classical_element_through<F>(e: &SuperPoly, image_of: F) -> Result<SuperPoly>
    where
        F: Fn(u32) -> Result<SuperPoly> + Copy,
    {
        let mut out = SuperPoly::zero();
        for (mono, c) in &e.terms {
            let mut acc = SuperPoly::one();
            for (g, exp) in &mono.0 {
                let GenId::Basis { idx } = g.id else {
                    return Err(AlgebraError::Mismatch(
                        "classical maps apply to abstract basis polynomials".into(),
                    ));
                };
                let img = image_of(idx)?;
                for _ in 0..*exp {
                    acc = acc.mul(&img)?;
                }
            }
            out = out.add(&acc.scale(c));
        }
        Ok(out)
    }

    pub fn phi_d_classical_element(
        &self,
        takiff: &TakiffSum,
        e: &SuperPoly,
    ) -> Result<SuperPoly> {
        Self::classical_element_through(e, |idx| {
            let (site, i, j, deg) = takiff.decode(idx);
            self.phi_d_classical(site, i, j, deg)
        })
    }

    pub fn phi_s_classical_element(
        &self,
        takiff: &TakiffSum,
        e: &SuperPoly,
    ) -> Result<SuperPoly> {
        Self::classical_element_through(e, |idx| {
            let (site, i, j, deg) = takiff.decode(idx);
            self.phi_s_classical(site, i, j, deg)
        })
    }
}

/// Everything the quantum engine computed, kept for downstream suites.
pub struct QuantumArtifacts<'a> {
    pub fock: FockMap<'a>,
    pub d_ctx: GaudinContext,
    pub s_ctx: GaudinContext,
    pub weyl_ring: PsdoRing<WeylRing>,
    pub phi_d_det: TruncatedPsdo<WeylElement>,
    pub phi_s_ber: TruncatedPsdo<WeylElement>,
    pub lhs: TruncatedPsdo<WeylElement>,
    pub rhs: TruncatedPsdo<WeylElement>,
    pub checks: Vec<CheckOutcome>,
}

fn push_compare(
    checks: &mut Vec<CheckOutcome>,
    name: &str,
    cmp: &crate::psdo::SeriesComparison,
) {
    if cmp.compared_slots == 0 {
        checks.push(CheckOutcome::fail(
            name,
            "joint window is empty",
            "no trustworthy slots to compare",
        ));
    } else if cmp.equal() {
        checks.push(CheckOutcome::pass(
            name,
            format!("{} coefficients agree exactly", cmp.compared_slots),
        ));
    } else {
        checks.push(CheckOutcome::fail(
            name,
            format!(
                "{} of {} coefficients disagree",
                cmp.mismatches.len(),
                cmp.compared_slots
            ),
            format!("first mismatch at slot {:?}", cmp.mismatches[0]),
        ));
    }
}

/// Build both sides of the quantum duality identity and compare them
/// coefficient by coefficient on the joint window.
pub fn quantum_duality<'a>(sc: &'a Scenario) -> Result<QuantumArtifacts<'a>> {
    let fock = FockMap::new(sc)?;
    let mut checks = Vec::new();

    // even side: singularities at z with orders gamma
    let gl_d = GlAlgebra::gl_d(sc.d)?;
    let sing_d = SingularityData::new(sc.z.clone(), sc.gamma.clone())?;
    let d_ctx = GaudinContext::new(gl_d, &sing_d, sc.window)?;
    let mu_d = CharacterTable::jordan_d(&sc.w, &sc.xi)?;

    let hat_direct = d_ctx.build_l_d_hat_direct(&mu_d)?;
    let hat_omega = d_ctx.build_l_d_hat_omega(&mu_d)?;
    let mut hat_agree = true;
    let mut hat_witness = String::new();
    for i in 0..hat_direct.size() {
        for j in 0..hat_direct.size() {
            let cmp = compare_series(hat_direct.entry(i, j), hat_omega.entry(i, j));
            if !cmp.equal() || cmp.compared_slots == 0 {
                hat_agree = false;
                hat_witness = format!("entry ({}, {}): {:?}", i, j, cmp.mismatches);
            }
        }
    }
    checks.push(if hat_agree {
        CheckOutcome::pass(
            "exchanged-matrix-constructors-agree",
            "direct and symbol-exchange constructions coincide entrywise",
        )
    } else {
        CheckOutcome::fail(
            "exchanged-matrix-constructors-agree",
            "entrywise disagreement",
            hat_witness,
        )
    });

    // super side: singularities at w with orders xi
    let gl_s = GlAlgebra::new(sc.p, sc.q, sc.m, sc.n)?;
    let sing_s = SingularityData::new(sc.w.clone(), sc.xi.clone())?;
    let s_ctx = GaudinContext::new(gl_s, &sing_s, sc.window)?;
    let nu_s = CharacterTable::jordan_s(&s_ctx.takiff.base, &sc.z, &sc.gamma)?;
    let l_s = s_ctx.build_l_s(&nu_s)?;
    ncmatrix::check_type(&s_ctx.ring, &l_s)?;

    // push both matrices into the Weyl superalgebra
    let weyl_ring = PsdoRing::new(WeylRing, SymbolKind::WeylPair, sc.window)?;
    let map_matrix_d = |mat: &TypedMatrix<crate::gaudin::USeries>| -> Result<TypedMatrix<TruncatedPsdo<WeylElement>>> {
        let mut rows = Vec::new();
        for row in &mat.entries {
            let mut out_row = Vec::new();
            for e in row {
                out_row.push(d_ctx.ring.map_coeffs(&weyl_ring, e, |c| {
                    fock.phi_d_element(&d_ctx.takiff, c)
                })?);
            }
            rows.push(out_row);
        }
        TypedMatrix::new(rows, mat.signature.clone())
    };
    let map_matrix_s = |mat: &TypedMatrix<crate::gaudin::USeries>| -> Result<TypedMatrix<TruncatedPsdo<WeylElement>>> {
        let mut rows = Vec::new();
        for row in &mat.entries {
            let mut out_row = Vec::new();
            for e in row {
                out_row.push(s_ctx.ring.map_coeffs(&weyl_ring, e, |c| {
                    fock.phi_s_element(&s_ctx.takiff, c)
                })?);
            }
            rows.push(out_row);
        }
        TypedMatrix::new(rows, mat.signature.clone())
    };

    let hat_w = map_matrix_d(&hat_direct)?;
    let ls_w = map_matrix_s(&l_s)?;
    let phi_d_det = ncmatrix::cdet(&weyl_ring, &hat_w)?;
    let phi_s_ber = ncmatrix::berezinian(&weyl_ring, &ls_w)?;

    // prefactors: signed pole orders in the derivative symbol on the even
    // side, plain orders in the z symbol on the super side
    let dims = &fock.dims;
    let mut lhs = phi_d_det.clone();
    for (site, point) in sc.z.iter().enumerate() {
        let e = dims.order_sign(site) * sc.gamma[site] as i64;
        let f = weyl_ring.linear_power(Symbol::D, point, e)?;
        lhs = weyl_ring.mul(&f, &lhs)?;
    }
    let mut rhs = phi_s_ber.clone();
    for (site, point) in sc.w.iter().enumerate() {
        let f = weyl_ring.linear_power(Symbol::Z, point, sc.xi[site] as i64)?;
        rhs = weyl_ring.mul(&f, &rhs)?;
    }
    let cmp = compare_series(&lhs, &rhs);
    push_compare(&mut checks, "quantum-identity", &cmp);
    if let Some(last) = checks.last_mut() {
        last.coefficients = crate::psdo::coefficient_records(&lhs, &rhs);
    }

    // inverse-free cross-check: multiply the negative prefactor powers
    // onto the other side instead of inverting
    let mut lhs_b = phi_d_det.clone();
    let mut rhs_b = rhs.clone();
    for (site, point) in sc.z.iter().enumerate() {
        let e = dims.order_sign(site) * sc.gamma[site] as i64;
        if e >= 0 {
            let f = weyl_ring.linear_power(Symbol::D, point, e)?;
            lhs_b = weyl_ring.mul(&f, &lhs_b)?;
        } else {
            let f = weyl_ring.linear_power(Symbol::D, point, -e)?;
            rhs_b = weyl_ring.mul(&f, &rhs_b)?;
        }
    }
    let cmp_b = compare_series(&lhs_b, &rhs_b);
    push_compare(&mut checks, "quantum-identity-denominator-free", &cmp_b);

    Ok(QuantumArtifacts {
        fock,
        d_ctx,
        s_ctx,
        weyl_ring,
        phi_d_det,
        phi_s_ber,
        lhs,
        rhs,
        checks,
    })
}

/// Evidence for the equality of the two generator families' images: each
/// even-side generator slot is reproduced by the prefactor-adjusted
/// super side, and the two extracted families supercommute pairwise.
pub fn image_equality_evidence(art: &QuantumArtifacts<'_>) -> Result<Vec<CheckOutcome>> {
    let sc = art.fock.sc;
    let dims = &art.fock.dims;
    let ring = &art.weyl_ring;
    let mut checks = Vec::new();

    // combo = (inverse prefactor) * rhs should match phi_d(det) slotwise
    let mut combo = art.rhs.clone();
    for (site, point) in sc.z.iter().enumerate() {
        let e = -dims.order_sign(site) * sc.gamma[site] as i64;
        let f = ring.linear_power(Symbol::D, point, e)?;
        combo = ring.mul(&f, &combo)?;
    }
    let lhs_dz = ring.to_dz_form(&art.phi_d_det)?;
    let combo_dz = ring.to_dz_form(&combo)?;
    let cmp = compare_dz_forms(&lhs_dz, &combo_dz);
    push_compare(&mut checks, "generator-family-reproduction", &cmp);

    let gens_d = extract_generators(ring, &art.phi_d_det, GeneratorRole::CdetDHat)?;
    let gens_s = extract_generators(ring, &art.phi_s_ber, GeneratorRole::BerS)?;
    let mut bad = None;
    'outer: for a in &gens_d {
        for b in &gens_s {
            let c = a.value.supercommutator(&b.value)?;
            if !c.is_zero() {
                bad = Some(format!(
                    "[{:?}/{:?}] x [{:?}/{:?}]",
                    a.z_exp, a.d_exp, b.z_exp, b.d_exp
                ));
                break 'outer;
            }
        }
    }
    checks.push(match bad {
        None => CheckOutcome::pass(
            "cross-family-commutators",
            format!(
                "{} x {} commutators vanish in the Weyl superalgebra",
                gens_d.len(),
                gens_s.len()
            ),
        ),
        Some(w) => CheckOutcome::fail("cross-family-commutators", "nonzero commutator", w),
    });
    Ok(checks)
}

/// Extracted Weyl-side generator families of a scenario (both sides).
pub fn weyl_generator_families(
    art: &QuantumArtifacts<'_>,
) -> Result<(
    Vec<ExtractedGenerator<WeylElement>>,
    Vec<ExtractedGenerator<WeylElement>>,
)> {
    let gens_d = extract_generators(&art.weyl_ring, &art.phi_d_det, GeneratorRole::CdetDHat)?;
    let gens_s = extract_generators(&art.weyl_ring, &art.phi_s_ber, GeneratorRole::BerS)?;
    Ok((gens_d, gens_s))
}

/// Pairwise commutativity of generator families, in the enveloping
/// algebras (small windows) and in the Weyl superalgebra.
pub fn generator_commutativity(sc: &Scenario) -> Result<Vec<CheckOutcome>> {
    let mut checks = Vec::new();
    let fock = FockMap::new(sc)?;

    // even side over the enveloping algebra, on the small window
    let gl_d = GlAlgebra::gl_d(sc.d)?;
    let sing_d = SingularityData::new(sc.z.clone(), sc.gamma.clone())?;
    let d_ctx = GaudinContext::new(gl_d, &sing_d, sc.gen_window)?;
    let mu_d = CharacterTable::jordan_d(&sc.w, &sc.xi)?;
    let l_d = d_ctx.build_l_d(&mu_d)?;
    checks.push(match ncmatrix::manin_witness(&d_ctx.ring, &l_d)? {
        None => CheckOutcome::pass("even-spectral-matrix-manin", "relation holds for all quadruples"),
        Some(wt) => CheckOutcome::fail(
            "even-spectral-matrix-manin",
            "relation fails",
            format!("{:?}", wt),
        ),
    });
    let det_d = ncmatrix::cdet(&d_ctx.ring, &l_d)?;
    let gens_u = extract_generators(&d_ctx.ring, &det_d, GeneratorRole::CdetD)?;
    let mut witness = None;
    'outer: for a in &gens_u {
        for b in &gens_u {
            let c = d_ctx.env.supercommutator_elt(&a.value, &b.value)?;
            if !c.is_zero() {
                witness = Some(format!(
                    "slots ({},{}) x ({},{})",
                    a.z_exp, a.d_exp, b.z_exp, b.d_exp
                ));
                break 'outer;
            }
        }
    }
    checks.push(match witness {
        None => CheckOutcome::pass(
            "even-generators-commute-enveloping",
            format!("{} generators commute pairwise", gens_u.len()),
        ),
        Some(w) => CheckOutcome::fail(
            "even-generators-commute-enveloping",
            "nonzero commutator",
            w,
        ),
    });

    // super side over the enveloping algebra: the spectral matrix is
    // always checked; the Berezinian generator family only at small size
    let sz = sc.p + sc.q + sc.m + sc.n;
    {
        let gl_s = GlAlgebra::new(sc.p, sc.q, sc.m, sc.n)?;
        let sing_s = SingularityData::new(sc.w.clone(), sc.xi.clone())?;
        let s_ctx = GaudinContext::new(gl_s, &sing_s, sc.gen_window)?;
        let nu_s = CharacterTable::jordan_s(&s_ctx.takiff.base, &sc.z, &sc.gamma)?;
        let l_s = s_ctx.build_l_s(&nu_s)?;
        checks.push(match ncmatrix::manin_witness(&s_ctx.ring, &l_s)? {
            None => CheckOutcome::pass("super-spectral-matrix-manin", "relation holds"),
            Some(wt) => CheckOutcome::fail(
                "super-spectral-matrix-manin",
                "relation fails",
                format!("{:?}", wt),
            ),
        });
    }
    if sz <= 2 {
        let gl_s = GlAlgebra::new(sc.p, sc.q, sc.m, sc.n)?;
        let sing_s = SingularityData::new(sc.w.clone(), sc.xi.clone())?;
        let s_ctx = GaudinContext::new(gl_s, &sing_s, sc.gen_window)?;
        let nu_s = CharacterTable::jordan_s(&s_ctx.takiff.base, &sc.z, &sc.gamma)?;
        let l_s = s_ctx.build_l_s(&nu_s)?;
        let ber = ncmatrix::berezinian(&s_ctx.ring, &l_s)?;
        let gens_s = extract_generators(&s_ctx.ring, &ber, GeneratorRole::BerS)?;
        let mut witness = None;
        'outer2: for a in &gens_s {
            for b in &gens_s {
                let c = s_ctx.env.supercommutator_elt(&a.value, &b.value)?;
                if !c.is_zero() {
                    witness = Some(format!(
                        "slots ({},{}) x ({},{})",
                        a.z_exp, a.d_exp, b.z_exp, b.d_exp
                    ));
                    break 'outer2;
                }
            }
        }
        checks.push(match witness {
            None => CheckOutcome::pass(
                "super-generators-commute-enveloping",
                format!("{} generators commute pairwise", gens_s.len()),
            ),
            Some(w) => CheckOutcome::fail(
                "super-generators-commute-enveloping",
                "nonzero commutator",
                w,
            ),
        });
    }

    // Weyl side on the small window: build, map, extract, commute
    let small = Scenario {
        window: sc.gen_window,
        ..sc.clone()
    };
    let art = quantum_duality(&small)?;
    let (gens_d, gens_s) = weyl_generator_families(&art)?;
    let mut all: Vec<&ExtractedGenerator<WeylElement>> = Vec::new();
    all.extend(gens_d.iter());
    all.extend(gens_s.iter());
    let mut witness = None;
    'outer3: for a in &all {
        for b in &all {
            let c = a.value.supercommutator(&b.value)?;
            if !c.is_zero() {
                witness = Some(format!(
                    "slots ({},{}) x ({},{})",
                    a.z_exp, a.d_exp, b.z_exp, b.d_exp
                ));
                break 'outer3;
            }
        }
    }
    checks.push(match witness {
        None => CheckOutcome::pass(
            "generators-commute-weyl",
            format!(
                "{} + {} mapped generators commute pairwise",
                gens_d.len(),
                gens_s.len()
            ),
        ),
        Some(w) => CheckOutcome::fail("generators-commute-weyl", "nonzero commutator", w),
    });
    let _ = fock;
    Ok(checks)
}

/// Bracket preservation of all four maps on every basis pair, plus
/// cross-side supercommutativity, quantum and classical.
pub fn verify_homomorphisms(sc: &Scenario) -> Result<Vec<CheckOutcome>> {
    let fock = FockMap::new(sc)?;
    let mut checks = Vec::new();

    let gl_d = GlAlgebra::gl_d(sc.d)?;
    let takiff_d = TakiffSum::new(gl_d, sc.z.clone(), sc.gamma.to_vec())?;
    let gl_s = GlAlgebra::new(sc.p, sc.q, sc.m, sc.n)?;
    let takiff_s = TakiffSum::new(gl_s, sc.w.clone(), sc.xi.to_vec())?;

    let phi_d = |idx: u32| -> Result<WeylElement> {
        let (site, i, j, deg) = takiff_d.decode(idx);
        fock.phi_d_generator(site, i, j, deg)
    };
    let phi_s = |idx: u32| -> Result<WeylElement> {
        let (site, i, j, deg) = takiff_s.decode(idx);
        fock.phi_s_generator(site, i, j, deg)
    };

    let quantum_side = |takiff: &TakiffSum,
                        image: &dyn Fn(u32) -> Result<WeylElement>,
                        label: &str,
                        checks: &mut Vec<CheckOutcome>|
     -> Result<(usize, bool)> {
        let dim = takiff.algebra.dim() as u32;
        let mut pairs = 0usize;
        for a in 0..dim {
            let img_a = image(a)?;
            for b in 0..dim {
                let img_b = image(b)?;
                let mut lhs = WeylElement::zero();
                for (t, c) in takiff.algebra.bracket(a as usize, b as usize) {
                    lhs = lhs.add(&image(*t)?.scale(c));
                }
                let rhs = img_a.supercommutator(&img_b)?;
                pairs += 1;
                if lhs.sub(&rhs).is_zero() {
                    continue;
                }
                checks.push(CheckOutcome::fail(
                    label,
                    "bracket not preserved",
                    format!(
                        "pair ({}, {})",
                        takiff.algebra.label(a as usize),
                        takiff.algebra.label(b as usize)
                    ),
                ));
                return Ok((pairs, false));
            }
        }
        Ok((pairs, true))
    };

    let (pairs_d, ok_d) = quantum_side(&takiff_d, &phi_d, "even-map-brackets", &mut checks)?;
    if ok_d {
        checks.push(CheckOutcome::pass(
            "even-map-brackets",
            format!("{} basis pairs preserved", pairs_d),
        ));
    }
    let (pairs_s, ok_s) = quantum_side(&takiff_s, &phi_s, "super-map-brackets", &mut checks)?;
    if ok_s {
        checks.push(CheckOutcome::pass(
            "super-map-brackets",
            format!("{} basis pairs preserved", pairs_s),
        ));
    }

    // the commuting-actions assertion: the DIAGONAL copies of the two
    // plain superalgebras supercommute inside the Weyl superalgebra.
    // (Per-site generators need not commute across the sides; only the
    // diagonal actions form the dual pair, and the transferred Gaudin
    // families are checked elsewhere.)
    let env_d = Enveloping::new(takiff_d.algebra.clone());
    let env_s = Enveloping::new(takiff_s.algebra.clone());
    let d_size = sc.d;
    let s_size = sc.p + sc.q + sc.m + sc.n;
    let mut cross_bad = None;
    let mut cross_pairs = 0usize;
    'cross: for a in 1..=d_size {
        for b in 1..=d_size {
            let diag_d = takiff_d.evaluate_generator(&env_d, a, b, 0)?;
            let img_a = fock.phi_d_element(&takiff_d, &diag_d)?;
            for i in 1..=s_size {
                for j in 1..=s_size {
                    let diag_s = takiff_s.evaluate_generator(&env_s, i, j, 0)?;
                    let img_b = fock.phi_s_element(&takiff_s, &diag_s)?;
                    cross_pairs += 1;
                    if !img_a.supercommutator(&img_b)?.is_zero() {
                        cross_bad = Some(format!("(E[{},{}], E[{},{}])", a, b, i, j));
                        break 'cross;
                    }
                }
            }
        }
    }
    checks.push(match cross_bad {
        None => CheckOutcome::pass(
            "cross-side-supercommute",
            format!("{} diagonal-action pairs commute", cross_pairs),
        ),
        Some(w) => CheckOutcome::fail("cross-side-supercommute", "nonzero commutator", w),
    });

    // classical descents preserve the Poisson bracket
    let pd_classical = |idx: u32| -> Result<SuperPoly> {
        let (site, i, j, deg) = takiff_d.decode(idx);
        fock.phi_d_classical(site, i, j, deg)
    };
    let ps_classical = |idx: u32| -> Result<SuperPoly> {
        let (site, i, j, deg) = takiff_s.decode(idx);
        fock.phi_s_classical(site, i, j, deg)
    };
    let cp = CanonicalPairs;
    let classical_side = |takiff: &TakiffSum,
                          image: &dyn Fn(u32) -> Result<SuperPoly>,
                          label: &str,
                          checks: &mut Vec<CheckOutcome>|
     -> Result<bool> {
        let dim = takiff.algebra.dim() as u32;
        for a in 0..dim {
            let img_a = image(a)?;
            for b in 0..dim {
                let img_b = image(b)?;
                let mut lhs = SuperPoly::zero();
                for (t, c) in takiff.algebra.bracket(a as usize, b as usize) {
                    lhs = lhs.add(&image(*t)?.scale(c));
                }
                let rhs = poisson_bracket(&cp, &img_a, &img_b)?;
                if !lhs.sub(&rhs).is_zero() {
                    checks.push(CheckOutcome::fail(
                        label,
                        "Poisson bracket not preserved",
                        format!(
                            "pair ({}, {})",
                            takiff.algebra.label(a as usize),
                            takiff.algebra.label(b as usize)
                        ),
                    ));
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    if classical_side(&takiff_d, &pd_classical, "even-classical-brackets", &mut checks)? {
        checks.push(CheckOutcome::pass(
            "even-classical-brackets",
            "all basis pairs preserved",
        ));
    }
    if classical_side(&takiff_s, &ps_classical, "super-classical-brackets", &mut checks)? {
        checks.push(CheckOutcome::pass(
            "super-classical-brackets",
            "all basis pairs preserved",
        ));
    }
    let mut cross_bad = None;
    'cross2: for a in 1..=d_size {
        for b in 1..=d_size {
            let mut img_a = SuperPoly::zero();
            for site in 0..takiff_d.sites() {
                img_a = img_a.add(&pd_classical(takiff_d.gen(site, a, b, 0)?)?);
            }
            for i in 1..=s_size {
                for j in 1..=s_size {
                    let mut img_b = SuperPoly::zero();
                    for site in 0..takiff_s.sites() {
                        img_b = img_b.add(&ps_classical(takiff_s.gen(site, i, j, 0)?)?);
                    }
                    if !poisson_bracket(&cp, &img_a, &img_b)?.is_zero() {
                        cross_bad = Some(format!("(E[{},{}], E[{},{}])", a, b, i, j));
                        break 'cross2;
                    }
                }
            }
        }
    }
    checks.push(match cross_bad {
        None => CheckOutcome::pass(
            "cross-side-poisson",
            "all diagonal-action pairs bracket to zero",
        ),
        Some(w) => CheckOutcome::fail("cross-side-poisson", "nonzero bracket", w),
    });

    // sanity: the Lie-Poisson structure itself validates on a sample
    let lp = LiePoisson {
        algebra: &takiff_d.algebra,
    };
    let a0 = SuperPoly::generator(takiff_d.algebra.generator(0));
    let br = poisson_bracket(&lp, &a0, &a0)?;
    if !br.is_zero() {
        checks.push(CheckOutcome::fail(
            "lie-poisson-sanity",
            "self-bracket of an even generator must vanish",
            "generator 0",
        ));
    }

    Ok(checks)
}

/// Classical artifacts: both sides of the commutative identity.
pub struct ClassicalArtifacts {
    pub lhs: TruncatedPsdo<SuperPoly>,
    pub rhs: TruncatedPsdo<SuperPoly>,
    pub checks: Vec<CheckOutcome>,
}

/// Symmetric-algebra generator as a polynomial.
fn sym_gen(takiff: &TakiffSum, idx: u32) -> SuperPoly {
    SuperPoly::generator(takiff.algebra.generator(idx))
}

/// Classical series image with poles in the chosen symbol.
fn classical_psi(
    ring: &PsdoRing<SuperPolyRing>,
    takiff: &TakiffSum,
    symbol: Symbol,
    i: u16,
    j: u16,
    mu: &CharacterTable,
) -> Result<TruncatedPsdo<SuperPoly>> {
    let mut acc = ring.zero();
    for site in 0..takiff.sites() {
        for k in 0..takiff.orders[site] {
            let pole = ring.pole_expand(symbol, &takiff.points[site], k + 1)?;
            let gen = ring.monomial(0, 0, sym_gen(takiff, takiff.gen(site, i, j, k)?));
            acc = ring.sub(&acc, &ring.mul(&gen, &pole)?)?;
        }
    }
    let c = mu.value(i, j);
    if !c.is_zero() {
        acc = ring.add(&acc, &ring.monomial(0, 0, SuperPoly::constant(c)))?;
    }
    Ok(acc)
}

/// Verify the classical duality identity on a Laurent window. The first
/// symbol is the even-side pole variable, the second carries the
/// even-side spectral parameter.
pub fn classical_duality(sc: &Scenario) -> Result<ClassicalArtifacts> {
    let fock = FockMap::new(sc)?;
    let dims = &fock.dims;
    let mut checks = Vec::new();
    let ring = PsdoRing::new(SuperPolyRing, SymbolKind::Commuting, sc.window)?;

    // even side: poles in the first symbol, spectral parameter in the second
    let gl_d = GlAlgebra::gl_d(sc.d)?;
    let takiff_d = TakiffSum::new(gl_d, sc.z.clone(), sc.gamma.clone())?;
    let mu_d = CharacterTable::jordan_d(&sc.w, &sc.xi)?;
    let dsz = sc.d as usize;
    let mut rows = Vec::with_capacity(dsz);
    for i in 1..=sc.d {
        let mut row = Vec::with_capacity(dsz);
        for j in 1..=sc.d {
            let mut e = classical_psi(&ring, &takiff_d, Symbol::Z, i, j, &mu_d)?;
            if i == j {
                e = ring.add(&e, &ring.monomial(0, 1, SuperPoly::one()))?;
            }
            row.push(e);
        }
        rows.push(row);
    }
    let l_d = TypedMatrix::new(rows, vec![crate::ring::Parity::Even; dsz])?;
    let det_d = ncmatrix::cdet(&ring, &l_d)?;
    let det_d_t = ncmatrix::cdet(&ring, &l_d.transpose())?;
    let cmp_t = compare_series(&det_d, &det_d_t);
    push_compare(&mut checks, "classical-transpose-determinant", &cmp_t);

    // super side: poles in the second symbol, spectral parameter first
    let gl_s = GlAlgebra::new(sc.p, sc.q, sc.m, sc.n)?;
    let takiff_s = TakiffSum::new(gl_s, sc.w.clone(), sc.xi.clone())?;
    let nu_s = CharacterTable::jordan_s(&takiff_s.base, &sc.z, &sc.gamma)?;
    let ssz = takiff_s.base.size() as usize;
    let mut rows = Vec::with_capacity(ssz);
    for i in 1..=takiff_s.base.size() {
        let sign = if takiff_s.base.index_parity(i).is_odd() {
            rat_int(-1)
        } else {
            rat_int(1)
        };
        let mut row = Vec::with_capacity(ssz);
        for j in 1..=takiff_s.base.size() {
            let psi = classical_psi(&ring, &takiff_s, Symbol::D, i, j, &nu_s)?;
            let mut e = ring.scale(&psi, &sign);
            if i == j {
                e = ring.add(&e, &ring.monomial(1, 0, SuperPoly::one()))?;
            }
            row.push(e);
        }
        rows.push(row);
    }
    let l_s = TypedMatrix::new(rows, takiff_s.base.type_sequence())?;
    ncmatrix::check_type(&ring, &l_s)?;
    let ber_s = ncmatrix::berezinian(&ring, &l_s)?;

    // classical descents applied coefficientwise
    let phi_bar_d = |e: &TruncatedPsdo<SuperPoly>| -> Result<TruncatedPsdo<SuperPoly>> {
        ring.map_coeffs(&ring, e, |c| fock.phi_d_classical_element(&takiff_d, c))
    };
    let phi_bar_s = |e: &TruncatedPsdo<SuperPoly>| -> Result<TruncatedPsdo<SuperPoly>> {
        ring.map_coeffs(&ring, e, |c| fock.phi_s_classical_element(&takiff_s, c))
    };
    let mut lhs = phi_bar_d(&det_d)?;
    for (site, point) in sc.z.iter().enumerate() {
        let e = dims.order_sign(site) * sc.gamma[site] as i64;
        let f = ring.linear_power(Symbol::Z, point, e)?;
        lhs = ring.mul(&f, &lhs)?;
    }
    let mut rhs = phi_bar_s(&ber_s)?;
    for (site, point) in sc.w.iter().enumerate() {
        let f = ring.linear_power(Symbol::D, point, sc.xi[site] as i64)?;
        rhs = ring.mul(&f, &rhs)?;
    }
    let cmp = compare_series(&lhs, &rhs);
    push_compare(&mut checks, "classical-identity", &cmp);
    if let Some(last) = checks.last_mut() {
        last.coefficients = crate::psdo::coefficient_records(&lhs, &rhs);
    }

    Ok(ClassicalArtifacts { lhs, rhs, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn tiny_window() -> Window {
        Window::working(-6, 3, -6, 3).unwrap()
    }

    pub fn scenario_bosonic_minimal() -> Scenario {
        Scenario {
            name: "d1-m1".into(),
            d: 1,
            p: 0,
            q: 0,
            m: 1,
            n: 0,
            xi: vec![1],
            gamma: vec![1],
            w: vec![rat(1, 1)],
            z: vec![rat(1, 2)],
            window: tiny_window(),
            gen_window: Window::working(-3, 2, -3, 2).unwrap(),
            mutation: None,
        }
    }

    pub fn scenario_fermionic_minimal() -> Scenario {
        Scenario {
            name: "d1-n1".into(),
            d: 1,
            p: 0,
            q: 0,
            m: 0,
            n: 1,
            xi: vec![1],
            gamma: vec![1],
            w: vec![rat(-2, 3)],
            z: vec![rat(3, 1)],
            window: tiny_window(),
            gen_window: Window::working(-3, 2, -3, 2).unwrap(),
            mutation: None,
        }
    }

    #[test]
    fn block_parsing() {
        let sc = Scenario {
            name: "split".into(),
            d: 2,
            p: 1,
            q: 1,
            m: 1,
            n: 1,
            xi: vec![2],
            gamma: vec![1, 1, 1, 1],
            w: vec![rat(1, 1)],
            z: vec![rat(1, 1), rat(2, 1), rat(3, 1), rat(4, 1)],
            window: tiny_window(),
            gen_window: tiny_window(),
            mutation: None,
        };
        let dims = sc.validate().unwrap();
        assert_eq!(
            (dims.sites_p, dims.sites_q, dims.sites_m, dims.sites_n),
            (1, 1, 1, 1)
        );
        assert_eq!(dims.l_cum, vec![0, 1, 2, 3, 4]);
        assert_eq!(dims.order_sign(0), 1);
        assert_eq!(dims.order_sign(1), -1);
        assert_eq!(dims.order_sign(2), 1);
        assert_eq!(dims.order_sign(3), -1);
        // malformed: xi does not sum to d
        let mut bad = sc.clone();
        bad.xi = vec![1];
        assert!(bad.validate().is_err());
        // malformed: gamma cannot split
        let mut bad2 = sc;
        bad2.gamma = vec![2, 1, 1];
        assert!(bad2.validate().is_err());
    }

    #[test]
    fn quantum_identity_minimal_bosonic() {
        let sc = scenario_bosonic_minimal();
        let art = quantum_duality(&sc).unwrap();
        for c in &art.checks {
            assert!(c.pass, "{}: {} {:?}", c.name, c.details, c.witness);
        }
        let ev = image_equality_evidence(&art).unwrap();
        for c in &ev {
            assert!(c.pass, "{}: {} {:?}", c.name, c.details, c.witness);
        }
    }

    #[test]
    fn quantum_identity_minimal_fermionic() {
        let sc = scenario_fermionic_minimal();
        let art = quantum_duality(&sc).unwrap();
        for c in &art.checks {
            assert!(c.pass, "{}: {} {:?}", c.name, c.details, c.witness);
        }
    }

    #[test]
    fn mutation_is_detected() {
        let mut sc = scenario_bosonic_minimal();
        sc.mutation = Some(Mutation::FlipXxSign);
        let art = quantum_duality(&sc).unwrap();
        let identity = art
            .checks
            .iter()
            .find(|c| c.name == "quantum-identity")
            .unwrap();
        assert!(!identity.pass, "corrupted sign must fail");
        assert!(identity.witness.is_some());
    }

    #[test]
    fn classical_identity_minimal() {
        let sc = scenario_bosonic_minimal();
        let art = classical_duality(&sc).unwrap();
        for c in &art.checks {
            assert!(c.pass, "{}: {} {:?}", c.name, c.details, c.witness);
        }
        let scf = scenario_fermionic_minimal();
        let artf = classical_duality(&scf).unwrap();
        for c in &artf.checks {
            assert!(c.pass, "{}: {} {:?}", c.name, c.details, c.witness);
        }
    }

    #[test]
    fn homomorphism_sweeps_minimal() {
        for sc in [scenario_bosonic_minimal(), scenario_fermionic_minimal()] {
            let checks = verify_homomorphisms(&sc).unwrap();
            for c in &checks {
                assert!(c.pass, "{}: {} {:?}", c.name, c.details, c.witness);
            }
        }
    }

    #[test]
    fn generator_commutativity_minimal() {
        let sc = scenario_bosonic_minimal();
        let checks = generator_commutativity(&sc).unwrap();
        for c in &checks {
            assert!(c.pass, "{}: {} {:?}", c.name, c.details, c.witness);
        }
    }

    #[test]
    fn phi_d_normal_ordering_constant() {
        // on an x block the summands normal-order to x d + parity sign
        let sc = scenario_bosonic_minimal();
        let fock = FockMap::new(&sc).unwrap();
        let img = fock.phi_d_generator(0, 1, 1, 0).unwrap();
        let x = fock.profile.x(1, 1).unwrap();
        let expected = WeylElement::variable(x)
            .mul(&WeylElement::derivative(x))
            .unwrap()
            .add(&WeylElement::one());
        assert_eq!(img, expected);
    }
}
