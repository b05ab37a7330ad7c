//! Orchestration of the verification suites: duality, classical,
//! homomorphism sweeps, the randomized Berezinian structure suite, the
//! weight-space spectral suite, and infrastructure property trials.

use num::BigRational;
use num::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::duality::{
    classical_duality, generator_commutativity, image_equality_evidence, quantum_duality,
    verify_homomorphisms, weyl_generator_families, FockMap, Scenario,
};
use crate::envalg::{Enveloping, GlAlgebra, TakiffSum};
use crate::error::{AlgebraError, Result};
use crate::fockrep::{
    check_spectral_claims, enumerate_weight_space, enumerate_weight_space_dual, restrict,
    weight_spaces_by_dimension,
};
use crate::gaudin::{CharacterTable, GaudinContext, SingularityData};
use crate::linalg::RatMatrix;
use crate::ncmatrix::{self, TypedMatrix};
use crate::psdo::{compare_series, PsdoRing, Symbol, SymbolKind, TruncatedPsdo, Window};
use crate::report::{CheckOutcome, SuiteReport};
use crate::ring::{rat, rat_int, rat_pow, Parity, Rationals, Ring};
use crate::superpoly::{GenId, Generator, SuperPoly, SuperPolyRing};
use crate::weylalg::{WeylElement, WeylProfile, WeylRing};

/// Quantum duality identity plus image-equality evidence plus generator
/// commutativity for one scenario.
pub fn run_duality_suite(sc: &Scenario) -> Result<SuiteReport> {
    let art = quantum_duality(sc)?;
    let mut checks = art.checks.clone();
    checks.extend(image_equality_evidence(&art)?);
    checks.extend(generator_commutativity(sc)?);
    Ok(SuiteReport::new("duality", Some(sc.describe()), checks))
}

/// Classical duality identity for one scenario.
pub fn run_classical_suite(sc: &Scenario) -> Result<SuiteReport> {
    let art = classical_duality(sc)?;
    Ok(SuiteReport::new(
        "classical",
        Some(sc.describe()),
        art.checks,
    ))
}

/// Bracket sweeps of all four maps for one scenario.
pub fn run_homs_suite(sc: &Scenario) -> Result<SuiteReport> {
    let checks = verify_homomorphisms(sc)?;
    Ok(SuiteReport::new("homs", Some(sc.describe()), checks))
}

fn sample_distinct<R: Rng>(rng: &mut R, count: usize) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(count);
    while out.len() < count {
        let c = rat(rng.gen_range(-20..=20i64), rng.gen_range(1..=8i64));
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// A random supercommutative matrix of a random 0/1 type: nonzero
/// constants on the diagonal, nilpotent (odd-content) corrections
/// elsewhere. Such a matrix is automatically Manin and amply invertible.
fn random_supercommutative_manin<R: Rng>(
    rng: &mut R,
    size: usize,
    force_type: Option<Parity>,
) -> TypedMatrix<SuperPoly> {
    let signature: Vec<Parity> = (0..size)
        .map(|_| match force_type {
            Some(p) => p,
            None => {
                if rng.gen_bool(0.5) {
                    Parity::Odd
                } else {
                    Parity::Even
                }
            }
        })
        .collect();
    let theta = |t: u32| SuperPoly::generator(Generator::new(GenId::Basis { idx: t }, Parity::Odd));
    let pool = 6u32;
    let mut entries = Vec::with_capacity(size);
    for i in 0..size {
        let mut row = Vec::with_capacity(size);
        for j in 0..size {
            let slot_parity = signature[i].plus(signature[j]);
            let mut e = SuperPoly::zero();
            if slot_parity == Parity::Even {
                if i == j {
                    let mut c = rat(rng.gen_range(1..=9i64), rng.gen_range(1..=3i64));
                    if rng.gen_bool(0.5) {
                        c = -c;
                    }
                    e = e.add(&SuperPoly::constant(c));
                }
                // nilpotent even correction: product of two odd symbols
                for _ in 0..rng.gen_range(0..=1) {
                    let a = rng.gen_range(0..pool);
                    let b = (a + rng.gen_range(1..pool)) % pool;
                    let c = rat(rng.gen_range(-4..=4i64), 1);
                    let prod = theta(a).mul(&theta(b)).unwrap().scale(&c);
                    e = e.add(&prod);
                }
            } else {
                for _ in 0..rng.gen_range(1..=2) {
                    let a = rng.gen_range(0..pool);
                    let c = rat(rng.gen_range(-4..=4i64), 1);
                    e = e.add(&theta(a).scale(&c));
                }
            }
            row.push(e);
        }
        entries.push(row);
    }
    TypedMatrix::new(entries, signature).expect("square by construction")
}

fn random_permutation<R: Rng>(rng: &mut R, k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// The block matrix of the duality proof over the Weyl series ring:
/// even-side Jordan block, oscillator strips, super-side Jordan block.
fn duality_block_matrix(
    sc: &Scenario,
    ring: &PsdoRing<WeylRing>,
) -> Result<TypedMatrix<TruncatedPsdo<WeylElement>>> {
    let fock = FockMap::new(sc)?;
    let profile = &fock.profile;
    let d = sc.d as usize;
    let sz = (sc.p + sc.q + sc.m + sc.n) as usize;
    let total = d + sz;
    let mu_d = CharacterTable::jordan_d(&sc.w, &sc.xi)?;
    let nu_s = CharacterTable::jordan_s(&GlAlgebra::new(sc.p, sc.q, sc.m, sc.n)?, &sc.z, &sc.gamma)?;
    let pq = (sc.p + sc.q) as usize;
    let mut entries = vec![vec![ring.zero(); total]; total];
    // top-left: z - (even-side Jordan) transposed
    for a in 0..d {
        for b in 0..d {
            let mut e = ring.monomial(0, 0, WeylElement::constant(mu_d.value(b as u16 + 1, a as u16 + 1)));
            if a == b {
                e = ring.add(&e, &ring.monomial(1, 0, WeylElement::one()))?;
            }
            entries[a][b] = e;
        }
    }
    // top-right: creation strip [Y^t P_X^t]
    for a in 0..d {
        for c in 0..sz {
            let e = if c < pq {
                let r = (c + 1) as u16;
                let sign = if profile.y_parity(r).is_odd() { 1 } else { -1 };
                ring.monomial(
                    0,
                    0,
                    WeylElement::variable(profile.y(a as u16 + 1, r)?).scale(&rat_int(sign)),
                )
            } else {
                let i = (c - pq + 1) as u16;
                ring.monomial(
                    0,
                    0,
                    WeylElement::derivative(profile.x(a as u16 + 1, i)?),
                )
            };
            entries[a][d + c] = e;
        }
    }
    // bottom-left: annihilation strip [P_Y; X]
    for r0 in 0..sz {
        for a in 0..d {
            let e = if r0 < pq {
                let r = (r0 + 1) as u16;
                let sign = if profile.y_parity(r).is_odd() { -1 } else { 1 };
                ring.monomial(
                    0,
                    0,
                    WeylElement::derivative(profile.y(a as u16 + 1, r)?).scale(&rat_int(sign)),
                )
            } else {
                let i = (r0 - pq + 1) as u16;
                let sign = if profile.x_parity(i).is_odd() { -1 } else { 1 };
                ring.monomial(
                    0,
                    0,
                    WeylElement::variable(profile.x(a as u16 + 1, i)?).scale(&rat_int(sign)),
                )
            };
            entries[d + r0][a] = e;
        }
    }
    // bottom-right: derivative symbol minus the super-side Jordan matrix
    let gl_s = GlAlgebra::new(sc.p, sc.q, sc.m, sc.n)?;
    for i in 0..sz {
        for j in 0..sz {
            let sign = if gl_s.index_parity(i as u16 + 1).is_odd() {
                -1
            } else {
                1
            };
            let v = nu_s.value(i as u16 + 1, j as u16 + 1) * rat_int(sign);
            let mut e = ring.monomial(0, 0, WeylElement::constant(v));
            if i == j {
                e = ring.add(&e, &ring.monomial(0, 1, WeylElement::one()))?;
            }
            entries[d + i][d + j] = e;
        }
    }
    let mut signature = vec![Parity::Even; d];
    signature.extend(gl_s.type_sequence());
    TypedMatrix::new(entries, signature)
}

/// Randomized structure suite: factorization, permutation invariance and
/// specialization identities on random amply invertible Manin matrices,
/// the Jordan-inverse pattern, and the proof-form block factorizations.
pub fn run_berezinian_suite(seed: u64, trials: u32) -> Result<SuiteReport> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let spr = SuperPolyRing;

    let mut done = 0u32;
    let mut fails = Vec::new();
    while done < trials {
        let size = rng.gen_range(2..=4usize);
        let force = match done % 5 {
            0 => Some(Parity::Even),
            1 => Some(Parity::Odd),
            _ => None,
        };
        let a = random_supercommutative_manin(&mut rng, size, force);
        if ncmatrix::check_type(&spr, &a).is_err() || !ncmatrix::is_manin(&spr, &a)? {
            fails.push(format!("trial {}: not a typed Manin matrix", done));
            break;
        }
        let ber = match ncmatrix::berezinian(&spr, &a) {
            Ok(b) => b,
            Err(e) => {
                fails.push(format!("trial {}: berezinian failed: {}", done, e));
                break;
            }
        };
        // leading-block and trailing-block factorizations
        let k = rng.gen_range(1..size);
        let (f1, f2) = ncmatrix::schur_factor_lower(&spr, &a, k)?;
        if spr.mul(&f1, &f2)? != ber {
            fails.push(format!("trial {}: leading split mismatch at {}", done, k));
            break;
        }
        let (g1, g2) = ncmatrix::schur_factor_upper(&spr, &a, k)?;
        if spr.mul(&g1, &g2)? != ber {
            fails.push(format!("trial {}: trailing split mismatch at {}", done, k));
            break;
        }
        // permutation invariance
        let perm = random_permutation(&mut rng, size);
        let ap = a.permute(&perm)?;
        if ncmatrix::berezinian(&spr, &ap)? != ber {
            fails.push(format!("trial {}: permutation changed the value", done));
            break;
        }
        // standard submatrices stay Manin
        let keep: Vec<usize> = (0..size).filter(|_| rng.gen_bool(0.7)).collect();
        if !keep.is_empty() {
            let sub = a.submatrix(&keep)?;
            if !ncmatrix::is_manin(&spr, &sub)? {
                fails.push(format!("trial {}: submatrix lost the relation", done));
                break;
            }
        }
        // pure-type specializations
        if force == Some(Parity::Even) {
            let det = ncmatrix::cdet(&spr, &a)?;
            if det != ber {
                fails.push(format!("trial {}: all-even value is not the determinant", done));
                break;
            }
        }
        if force == Some(Parity::Odd) {
            let det = ncmatrix::cdet(&spr, &a)?;
            if spr.invert(&det)? != ber {
                fails.push(format!(
                    "trial {}: all-odd value is not the inverse determinant",
                    done
                ));
                break;
            }
        }
        done += 1;
    }
    checks.push(if fails.is_empty() {
        CheckOutcome::pass(
            "randomized-manin-identities",
            format!("{} random matrices verified", done),
        )
    } else {
        CheckOutcome::fail(
            "randomized-manin-identities",
            format!("stopped after {} matrices", done),
            fails.join("; "),
        )
    });

    // a deliberately corrupted entry must produce a witness
    let mut corrupted = random_supercommutative_manin(&mut rng, 3, None);
    let theta = SuperPoly::generator(Generator::new(GenId::Basis { idx: 0 }, Parity::Odd));
    let bad_parity = corrupted.signature[0].plus(corrupted.signature[1]);
    corrupted.entries[0][1] = if bad_parity == Parity::Odd {
        // replace an odd entry by something failing the cross relation:
        // make it even instead
        SuperPoly::constant(rat(1, 1))
    } else {
        theta
    };
    checks.push(
        match ncmatrix::check_type(&spr, &corrupted)
            .is_err()
            .then_some(())
            .or_else(|| {
                ncmatrix::manin_witness(&spr, &corrupted)
                    .ok()
                    .flatten()
                    .map(|_| ())
            }) {
            Some(()) => CheckOutcome::pass(
                "corruption-detected",
                "type or relation check rejects the corrupted matrix",
            ),
            None => CheckOutcome::fail(
                "corruption-detected",
                "corrupted matrix slipped through",
                "entry (0, 1)",
            ),
        },
    );

    // Jordan block inverse pattern
    let mut jordan_ok = true;
    let mut jordan_witness = String::new();
    let rr = Rationals;
    'jordan: for k in 1..=4usize {
        let lambda = rat(rng.gen_range(1..=9i64), rng.gen_range(1..=4i64));
        // -J_k(-lambda): lambda on the diagonal, -1 on the superdiagonal
        let mut rows = vec![vec![BigRational::zero(); k]; k];
        for t in 0..k {
            rows[t][t] = lambda.clone();
            if t + 1 < k {
                rows[t][t + 1] = rat(-1, 1);
            }
        }
        let m = TypedMatrix::new(rows, vec![Parity::Even; k])?;
        let inv = ncmatrix::inverse(&rr, &m)?;
        for i in 0..k {
            for j in 0..k {
                let expect = if j >= i {
                    rat_pow(&lambda, -((j - i + 1) as i64))?
                } else {
                    BigRational::zero()
                };
                if inv[i][j] != expect {
                    jordan_ok = false;
                    jordan_witness = format!("k={}, entry ({}, {})", k, i, j);
                    break 'jordan;
                }
            }
        }
    }
    checks.push(if jordan_ok {
        CheckOutcome::pass(
            "jordan-inverse-pattern",
            "upper-triangular inverse powers match for sizes 1..4",
        )
    } else {
        CheckOutcome::fail("jordan-inverse-pattern", "entry mismatch", jordan_witness)
    });

    // noncommutative instances: mapped spectral matrices are Manin and
    // obey the factorization and permutation identities on windows
    let shapes: [(u16, u16, u16, u16, u16); 3] = [
        (1, 0, 0, 1, 1), // d, p, q, m, n
        (2, 0, 0, 1, 1),
        (1, 1, 1, 1, 1),
    ];
    let wring = PsdoRing::new(WeylRing, SymbolKind::WeylPair, Window::working(-4, 3, -4, 3)?)?;
    let mut nc_ok = true;
    let mut nc_witness = String::new();
    'shapes: for (d, p, q, m, n) in shapes {
        let sz = p + q + m + n;
        let points = sample_distinct(&mut rng, (d + sz) as usize);
        let sc = Scenario {
            name: format!("nc-{}-{}{}{}{}", d, p, q, m, n),
            d,
            p,
            q,
            m,
            n,
            xi: vec![1; d as usize],
            gamma: vec![1; sz as usize],
            w: points[..d as usize].to_vec(),
            z: points[d as usize..].to_vec(),
            window: Window::working(-4, 3, -4, 3)?,
            gen_window: Window::working(-3, 2, -3, 2)?,
            mutation: None,
        };
        let fock = FockMap::new(&sc)?;
        let gl_s = GlAlgebra::new(p, q, m, n)?;
        let sing = SingularityData::new(sc.w.clone(), sc.xi.clone())?;
        let ctx = GaudinContext::new(gl_s, &sing, sc.window)?;
        let nu = CharacterTable::jordan_s(&ctx.takiff.base, &sc.z, &sc.gamma)?;
        let l_s = ctx.build_l_s(&nu)?;
        let mut rows = Vec::new();
        for row in &l_s.entries {
            let mut out_row = Vec::new();
            for e in row {
                out_row.push(ctx.ring.map_coeffs(&wring, e, |c| {
                    fock.phi_s_element(&ctx.takiff, c)
                })?);
            }
            rows.push(out_row);
        }
        let mapped = TypedMatrix::new(rows, l_s.signature.clone())?;
        if !ncmatrix::is_manin(&wring, &mapped)? {
            nc_ok = false;
            nc_witness = format!("{}: relation fails", sc.name);
            break 'shapes;
        }
        let ber = ncmatrix::berezinian(&wring, &mapped)?;
        let k = rng.gen_range(1..mapped.size());
        let (f1, f2) = ncmatrix::schur_factor_lower(&wring, &mapped, k)?;
        let prod = wring.mul(&f1, &f2)?;
        let cmp = compare_series(&prod, &ber);
        if !cmp.equal() || cmp.compared_slots == 0 {
            nc_ok = false;
            nc_witness = format!("{}: leading split at {} mismatch", sc.name, k);
            break 'shapes;
        }
        let (g1, g2) = ncmatrix::schur_factor_upper(&wring, &mapped, k)?;
        let prod2 = wring.mul(&g1, &g2)?;
        let cmp2 = compare_series(&prod2, &ber);
        if !cmp2.equal() || cmp2.compared_slots == 0 {
            nc_ok = false;
            nc_witness = format!("{}: trailing split at {} mismatch", sc.name, k);
            break 'shapes;
        }
        let perm = random_permutation(&mut rng, mapped.size());
        let permuted = mapped.permute(&perm)?;
        let ber_p = ncmatrix::berezinian(&wring, &permuted)?;
        let cmp3 = compare_series(&ber_p, &ber);
        if !cmp3.equal() || cmp3.compared_slots == 0 {
            nc_ok = false;
            nc_witness = format!("{}: permutation changed the value", sc.name);
            break 'shapes;
        }
    }
    checks.push(if nc_ok {
        CheckOutcome::pass(
            "noncommutative-manin-identities",
            "mapped spectral matrices verified on windows",
        )
    } else {
        CheckOutcome::fail("noncommutative-manin-identities", "identity failed", nc_witness)
    });

    // the proof-form block matrix: both factorizations reproduce the two
    // sides of the duality identity
    let points = sample_distinct(&mut rng, 3);
    let sc = Scenario {
        name: "block-proof".into(),
        d: 1,
        p: 0,
        q: 1,
        m: 1,
        n: 0,
        xi: vec![1],
        gamma: vec![1, 1],
        w: points[..1].to_vec(),
        z: points[1..].to_vec(),
        window: Window::working(-5, 3, -5, 3)?,
        gen_window: Window::working(-3, 2, -3, 2)?,
        mutation: None,
    };
    let ring = PsdoRing::new(WeylRing, SymbolKind::WeylPair, sc.window)?;
    let block = duality_block_matrix(&sc, &ring)?;
    let mut block_checks = Vec::new();
    block_checks.push(("block-matrix-manin", ncmatrix::is_manin(&ring, &block)?));
    let d = sc.d as usize;
    let (f1, f2) = ncmatrix::schur_factor_lower(&ring, &block, d)?;
    let (g1, g2) = ncmatrix::schur_factor_upper(&ring, &block, d)?;
    let art = quantum_duality(&sc)?;
    // leading split: polynomial prefactor times the super side
    let mut q_pref = ring.one();
    for (site, point) in sc.w.iter().enumerate() {
        q_pref = ring.mul(&q_pref, &ring.linear_power(Symbol::Z, point, sc.xi[site] as i64)?)?;
    }
    block_checks.push((
        "block-leading-prefactor",
        compare_series(&f1, &q_pref).equal(),
    ));
    block_checks.push((
        "block-leading-superside",
        compare_series(&f2, &art.phi_s_ber).equal(),
    ));
    let dims = sc.validate()?;
    let mut p_pref = ring.one();
    for (site, point) in sc.z.iter().enumerate() {
        let e = dims.order_sign(site) * sc.gamma[site] as i64;
        p_pref = ring.mul(&p_pref, &ring.linear_power(Symbol::D, point, e)?)?;
    }
    block_checks.push((
        "block-trailing-prefactor",
        compare_series(&g1, &p_pref).equal(),
    ));
    block_checks.push((
        "block-trailing-evenside",
        compare_series(&g2, &art.phi_d_det).equal(),
    ));
    let ber_block = ncmatrix::berezinian(&ring, &block)?;
    block_checks.push((
        "block-factorizations-consistent",
        compare_series(&ring.mul(&f1, &f2)?, &ber_block).equal()
            && compare_series(&ring.mul(&g1, &g2)?, &ber_block).equal(),
    ));
    for (name, ok) in block_checks {
        checks.push(if ok {
            CheckOutcome::pass(name, "exact on the joint window")
        } else {
            CheckOutcome::fail(name, "mismatch", "block matrix factorization")
        });
    }

    Ok(SuiteReport::new("berezinian", None, checks))
}

/// Weight-space spectral suite: sampled distinct rational points,
/// restricted generator families, commutation, cyclicity, simple
/// spectrum, and the two-route basis dictionary.
pub fn run_spectrum_suite(base: &Scenario, seed: u64) -> Result<SuiteReport> {
    let sz = (base.p + base.q + base.m + base.n) as usize;
    if base.gamma != vec![1u32; sz] {
        return Err(AlgebraError::InvalidInput(
            "the spectral regime needs all super-side orders equal to one".into(),
        ));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let points = sample_distinct(&mut rng, base.xi.len() + sz);
    let mut sc = base.clone();
    sc.w = points[..base.xi.len()].to_vec();
    sc.z = points[base.xi.len()..].to_vec();
    let mut checks = Vec::new();
    checks.push(CheckOutcome::pass(
        "sampled-points",
        format!("w = {:?}, z = {:?}", sc.w, sc.z),
    ));

    let art = quantum_duality(&sc)?;
    for c in &art.checks {
        if !c.pass {
            return Ok(SuiteReport::new(
                "spectrum",
                Some(sc.describe()),
                vec![c.clone()],
            ));
        }
    }
    let (gens_d, gens_s) = weyl_generator_families(&art)?;

    let mut spaces = Vec::new();
    for cap in 2..=5u32 {
        spaces = weight_spaces_by_dimension(&sc, cap, 2, 16)?;
        if spaces.len() >= 3 {
            break;
        }
    }
    if spaces.len() < 3 {
        return Err(AlgebraError::InvalidInput(
            "could not find three weight spaces of dimension 2..16".into(),
        ));
    }
    spaces.truncate(4);

    for (wd, basis) in &spaces {
        let label = format!("k={:?} mu={:?} dim={}", wd.k, wd.mu, basis.len());
        // the two enumeration routes agree
        let direct = enumerate_weight_space(&sc, &wd.k, &wd.mu, 64)?;
        let dual = enumerate_weight_space_dual(&sc, &wd.k, &wd.mu, 64)?;
        checks.push(if direct == dual && &direct == basis {
            CheckOutcome::pass(
                format!("basis-dictionary {}", label),
                "both enumeration routes produce the same monomials",
            )
        } else {
            CheckOutcome::fail(
                format!("basis-dictionary {}", label),
                "enumeration routes disagree",
                format!("{} vs {} monomials", direct.len(), dual.len()),
            )
        });
        // restrict every generator; dedup matrices
        let mut mats: Vec<RatMatrix> = Vec::new();
        let mut leak = None;
        for g in gens_d.iter().chain(gens_s.iter()) {
            match restrict(&g.value, basis) {
                Ok(m) => {
                    if !mats.contains(&m) {
                        mats.push(m);
                    }
                }
                Err(AlgebraError::Leakage(w)) => {
                    leak = Some(w);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if let Some(w) = leak {
            checks.push(CheckOutcome::fail(
                format!("restriction {}", label),
                "a generator leaks outside the weight space",
                w,
            ));
            continue;
        }
        checks.push(CheckOutcome::pass(
            format!("restriction {}", label),
            format!("{} distinct matrices, zero leakage", mats.len()),
        ));
        let rep = check_spectral_claims(&mats, basis.len(), &mut rng, 3);
        checks.push(if rep.commuting {
            CheckOutcome::pass(format!("commuting {}", label), "all pairs commute")
        } else {
            CheckOutcome::fail(
                format!("commuting {}", label),
                "matrices fail to commute",
                format!("{:?}", rep.commuting_witness),
            )
        });
        checks.push(match rep.cyclic_seed {
            Some(s) => CheckOutcome::pass(
                format!("cyclic {}", label),
                format!("basis vector {} generates the space", s),
            ),
            None => CheckOutcome::fail(
                format!("cyclic {}", label),
                "no coordinate vector is cyclic",
                "all seeds exhausted",
            ),
        });
        checks.push(if rep.simple_spectrum {
            CheckOutcome::pass(
                format!("simple-spectrum {}", label),
                format!("squarefree after {} resamples", rep.resamples_used),
            )
        } else {
            CheckOutcome::fail(
                format!("simple-spectrum {}", label),
                "no squarefree combination found",
                format!("{} resamples", rep.resamples_used),
            )
        });
    }
    Ok(SuiteReport::new("spectrum", Some(sc.describe()), checks))
}

/// Window soundness: products and inverses recomputed on a larger window
/// agree on every slot the smaller window certifies.
pub fn window_soundness_trials(seed: u64, trials: u32) -> Result<CheckOutcome> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let small = PsdoRing::new(Rationals, SymbolKind::WeylPair, Window::working(-6, 4, -6, 4)?)?;
    let large = PsdoRing::new(
        Rationals,
        SymbolKind::WeylPair,
        Window::working(-11, 4, -11, 4)?,
    )?;
    let random_elt = |rng: &mut ChaCha20Rng, r: &PsdoRing<Rationals>| {
        let mut e = r.zero();
        for _ in 0..rng.gen_range(1..=4) {
            let i = rng.gen_range(-3..=2i64);
            let j = rng.gen_range(-3..=2i64);
            let c = rat(rng.gen_range(-9..=9i64), rng.gen_range(1..=4i64));
            e = r.add(&e, &r.monomial(i, j, c)).unwrap();
        }
        e
    };
    // a product whose every contribution falls below the working floor
    // legitimately exhausts its window; such draws are vacuous here
    let mul_opt = |r: &PsdoRing<Rationals>,
                   a: &TruncatedPsdo<BigRational>,
                   b: &TruncatedPsdo<BigRational>| {
        match r.mul(a, b) {
            Ok(p) => Ok(Some(p)),
            Err(AlgebraError::WindowExhausted(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    for t in 0..trials {
        // the same raw data built in both rings
        let state = rng.get_seed();
        let mut rng_a = ChaCha20Rng::from_seed(state);
        rng_a.set_word_pos(rng.get_word_pos());
        let a_small = random_elt(&mut rng_a, &small);
        let b_small = random_elt(&mut rng_a, &small);
        let mut rng_b = ChaCha20Rng::from_seed(state);
        rng_b.set_word_pos(rng.get_word_pos());
        let a_large = random_elt(&mut rng_b, &large);
        let b_large = random_elt(&mut rng_b, &large);
        // keep the outer stream aligned
        let _ = random_elt(&mut rng, &small);
        let _ = random_elt(&mut rng, &small);

        let pair = if t % 3 == 0 {
            // exercise inverses through a shifted leading monomial
            let shift = rat(rng.gen_range(1..=5i64), 1);
            let lead_s = small
                .add(&small.monomial(0, 1, rat(1, 1)), &small.monomial(0, 0, shift.clone()))
                .unwrap();
            let lead_l = large
                .add(&large.monomial(0, 1, rat(1, 1)), &large.monomial(0, 0, shift))
                .unwrap();
            match (small.invert_series(&lead_s), large.invert_series(&lead_l)) {
                (Ok(is), Ok(il)) => {
                    (mul_opt(&small, &a_small, &is)?, mul_opt(&large, &a_large, &il)?)
                }
                _ => (
                    mul_opt(&small, &a_small, &b_small)?,
                    mul_opt(&large, &a_large, &b_large)?,
                ),
            }
        } else {
            (
                mul_opt(&small, &a_small, &b_small)?,
                mul_opt(&large, &a_large, &b_large)?,
            )
        };
        let (Some(p_small), Some(p_large)) = pair else {
            continue;
        };
        for (slot, v) in &p_small.terms {
            if p_small.window.contains(slot.0, slot.1) {
                let lv = p_large.terms.get(slot);
                if lv != Some(v) {
                    return Ok(CheckOutcome::fail(
                        "window-soundness",
                        format!("trial {} changed a certified coefficient", t),
                        format!("slot {:?}", slot),
                    ));
                }
            }
        }
    }
    Ok(CheckOutcome::pass(
        "window-soundness",
        format!("{} product/inverse trials stable under enlargement", trials),
    ))
}

/// PBW product associativity on random triples.
pub fn pbw_associativity_trials(seed: u64, trials: u32) -> Result<CheckOutcome> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let gl = GlAlgebra::new(0, 0, 1, 1)?;
    let takiff = TakiffSum::new(gl, vec![rat(1, 2), rat(-1, 3)], vec![2, 1])?;
    let env = Enveloping::new(takiff.algebra.clone());
    let dim = takiff.algebra.dim() as u32;
    let random_elt = |rng: &mut ChaCha20Rng| {
        let mut e = env.zero();
        for _ in 0..rng.gen_range(1..=2) {
            let len = rng.gen_range(1..=2);
            let word: Vec<u32> = (0..len).map(|_| rng.gen_range(0..dim)).collect();
            let c = rat(rng.gen_range(-5..=5i64), rng.gen_range(1..=3i64));
            let t = env.normalize_word(word, c);
            e = env.add(&e, &t).unwrap();
        }
        e
    };
    for t in 0..trials {
        let a = random_elt(&mut rng);
        let b = random_elt(&mut rng);
        let c = random_elt(&mut rng);
        let ab_c = env.mul(&env.mul(&a, &b)?, &c)?;
        let a_bc = env.mul(&a, &env.mul(&b, &c)?)?;
        if ab_c != a_bc {
            return Ok(CheckOutcome::fail(
                "pbw-associativity",
                format!("trial {}", t),
                "rewriting is not confluent on this triple",
            ));
        }
    }
    Ok(CheckOutcome::pass(
        "pbw-associativity",
        format!("{} random triples associate", trials),
    ))
}

/// Weyl product associativity on random triples.
pub fn weyl_associativity_trials(seed: u64, trials: u32) -> Result<CheckOutcome> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let profile = WeylProfile::new(2, 1, 1, 1, 1)?;
    let gens = profile.variables();
    let random_elt = |rng: &mut ChaCha20Rng| {
        let mut e = WeylElement::zero();
        for _ in 0..rng.gen_range(1..=2) {
            let mut term = WeylElement::constant(rat(
                rng.gen_range(-5..=5i64).max(1),
                rng.gen_range(1..=3i64),
            ));
            for _ in 0..rng.gen_range(0..=2) {
                let g = gens[rng.gen_range(0..gens.len())];
                let f = if rng.gen_bool(0.5) {
                    WeylElement::variable(g)
                } else {
                    WeylElement::derivative(g)
                };
                term = term.mul(&f).unwrap();
            }
            e = e.add(&term);
        }
        e
    };
    for t in 0..trials {
        let a = random_elt(&mut rng);
        let b = random_elt(&mut rng);
        let c = random_elt(&mut rng);
        let ab_c = a.mul(&b)?.mul(&c)?;
        let a_bc = a.mul(&b.mul(&c)?)?;
        if ab_c != a_bc {
            return Ok(CheckOutcome::fail(
                "weyl-associativity",
                format!("trial {}", t),
                "normal ordering is not confluent on this triple",
            ));
        }
    }
    Ok(CheckOutcome::pass(
        "weyl-associativity",
        format!("{} random triples associate", trials),
    ))
}

/// Bundle of the infrastructure property trials.
pub fn run_infrastructure_suite(seed: u64, trials: u32) -> Result<SuiteReport> {
    let checks = vec![
        window_soundness_trials(seed, trials)?,
        pbw_associativity_trials(seed.wrapping_add(1), trials)?,
        weyl_associativity_trials(seed.wrapping_add(2), trials)?,
    ];
    Ok(SuiteReport::new("infrastructure", None, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn berezinian_suite_small() {
        let report = run_berezinian_suite(11, 8).unwrap();
        for c in &report.checks {
            assert!(c.pass, "{}: {} {:?}", c.name, c.details, c.witness);
        }
    }

    #[test]
    fn infrastructure_trials_small() {
        let report = run_infrastructure_suite(5, 10).unwrap();
        for c in &report.checks {
            assert!(c.pass, "{}: {} {:?}", c.name, c.details, c.witness);
        }
    }
}
