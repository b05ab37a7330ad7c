//! Finite-dimensional weight spaces of the Fock space, exact restriction
//! of operator families to them, and the spectral checks: pairwise
//! commutation, Krylov cyclicity, and squarefree characteristic
//! polynomials of random combinations.

use std::collections::BTreeMap;

use num::BigRational;
use num::Zero;
use rand::Rng;

use crate::duality::{Scenario, ScenarioDims};
use crate::error::{AlgebraError, Result};
use crate::linalg::{is_squarefree, krylov_cyclic_from, RatMatrix};
use crate::ring::rat_int;
use crate::superpoly::{GenId, Generator, Monomial, SuperPoly};
use crate::weylalg::WeylElement;

/// A weight-space label: per-factor degrees and Cartan eigenvalues.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeightData {
    /// degree of each even-side tensor factor (one entry per part of xi)
    pub k: Vec<i64>,
    /// eigenvalue of each diagonal basis element, indices 1..p+q+m+n
    pub mu: Vec<i64>,
}

/// Counts of each oscillator label demanded by a weight.
struct Counts {
    /// y-occupancies per subscript r (1-based index r-1)
    y: Vec<i64>,
    /// x-occupancies per subscript i
    x: Vec<i64>,
}

fn weight_to_counts(sc: &Scenario, mu: &[i64]) -> Result<Counts> {
    let pq = (sc.p + sc.q) as usize;
    let mn = (sc.m + sc.n) as usize;
    if mu.len() != pq + mn {
        return Err(AlgebraError::InvalidInput(
            "weight table length must be p+q+m+n".into(),
        ));
    }
    let profile = sc.profile()?;
    let mut y = Vec::with_capacity(pq);
    for r in 1..=pq {
        // eigenvalue = -count + (sign) d with sign = +1 for odd rows
        let sign = if profile.y_parity(r as u16).is_odd() {
            1
        } else {
            -1
        };
        y.push(sign * sc.d as i64 - mu[r - 1]);
    }
    let mut x = Vec::with_capacity(mn);
    for i in 1..=mn {
        x.push(mu[pq + i - 1]);
    }
    Ok(Counts { y, x })
}

/// Weight via the dual dictionary: factor degrees for the even-side
/// decomposition. Negative of the y-count on creation rows, the x-count
/// elsewhere.
fn weight_to_factor_degrees(sc: &Scenario, mu: &[i64]) -> Result<Vec<i64>> {
    let pq = (sc.p + sc.q) as usize;
    let mn = (sc.m + sc.n) as usize;
    if mu.len() != pq + mn {
        return Err(AlgebraError::InvalidInput(
            "weight table length must be p+q+m+n".into(),
        ));
    }
    let profile = sc.profile()?;
    let mut out = Vec::with_capacity(pq + mn);
    for r in 1..=pq {
        let sign = if profile.y_parity(r as u16).is_odd() {
            -1
        } else {
            1
        };
        out.push(mu[r - 1] + sign * sc.d as i64);
    }
    for i in 1..=mn {
        out.push(mu[pq + i - 1]);
    }
    Ok(out)
}

/// All ways to put `count` units on superscripts 1..d, one vector per
/// distribution; capped at exponent 1 when the label is odd.
fn distributions(d: usize, count: i64, odd: bool) -> Vec<Vec<u32>> {
    fn go(slots: usize, left: i64, cap: Option<u32>, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if left == 0 {
                out.push(acc.clone());
            }
            return;
        }
        let top = match cap {
            Some(c) => (c as i64).min(left),
            None => left,
        };
        for e in 0..=top.max(-1) {
            acc.push(e as u32);
            go(slots - 1, left - e, cap, acc, out);
            acc.pop();
        }
    }
    if count < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(
        d,
        count,
        if odd { Some(1) } else { None },
        &mut Vec::new(),
        &mut out,
    );
    out
}

fn assemble_basis(
    sc: &Scenario,
    dims: &ScenarioDims,
    counts: &Counts,
    k: &[i64],
    cap: usize,
) -> Result<Vec<Monomial>> {
    let profile = sc.profile()?;
    let d = sc.d as usize;
    // per-variable distribution choices
    let mut var_groups: Vec<(Generator, Vec<Vec<u32>>)> = Vec::new();
    // store one representative generator per subscript; the distribution
    // vector assigns exponents to superscripts
    let mut choices: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut labels: Vec<(bool, u16)> = Vec::new(); // (is_x, subscript)
    for i in 1..=(sc.m + sc.n) as usize {
        let odd = profile.x_parity(i as u16).is_odd();
        let dist = distributions(d, counts.x[i - 1], odd);
        if dist.is_empty() {
            return Ok(Vec::new());
        }
        labels.push((true, i as u16));
        choices.push(dist);
    }
    for r in 1..=(sc.p + sc.q) as usize {
        let odd = profile.y_parity(r as u16).is_odd();
        let dist = distributions(d, counts.y[r - 1], odd);
        if dist.is_empty() {
            return Ok(Vec::new());
        }
        labels.push((false, r as u16));
        choices.push(dist);
    }
    let _ = &mut var_groups;
    // cartesian product with the per-block degree filter
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        // evaluate this combination
        let mut per_super_degree = vec![0i64; d + 1];
        let mut factors: Vec<(Generator, u32)> = Vec::new();
        for (t, (is_x, sub)) in labels.iter().enumerate() {
            let v = &choices[t][idx[t]];
            for (a0, e) in v.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let a = (a0 + 1) as u16;
                let g = if *is_x {
                    per_super_degree[a as usize] += *e as i64;
                    profile.x(a, *sub)?
                } else {
                    per_super_degree[a as usize] -= *e as i64;
                    profile.y(a, *sub)?
                };
                factors.push((g, *e));
            }
        }
        let mut ok = true;
        for (block, want) in k.iter().enumerate() {
            let lo = dims.d_cum[block] as usize;
            let hi = dims.d_cum[block + 1] as usize;
            let got: i64 = per_super_degree[lo + 1..=hi].iter().sum();
            if got != *want {
                ok = false;
                break;
            }
        }
        if ok {
            factors.sort_by_key(|a| a.0);
            out.push(Monomial(factors));
            if out.len() > cap {
                return Err(AlgebraError::InvalidInput(format!(
                    "weight space exceeds the dimension cap {}",
                    cap
                )));
            }
        }
        // advance the odometer
        let mut t = 0;
        loop {
            if t == idx.len() {
                out.sort();
                return Ok(out);
            }
            idx[t] += 1;
            if idx[t] < choices[t].len() {
                break;
            }
            idx[t] = 0;
            t += 1;
        }
    }
}

/// Enumerate the weight-space basis from the super-side data: prescribed
/// Cartan eigenvalues and per-factor degrees.
pub fn enumerate_weight_space(
    sc: &Scenario,
    k: &[i64],
    mu: &[i64],
    cap: usize,
) -> Result<Vec<Monomial>> {
    let dims = sc.validate()?;
    if k.len() != sc.xi.len() {
        return Err(AlgebraError::InvalidInput(
            "one degree per part of xi required".into(),
        ));
    }
    let counts = weight_to_counts(sc, mu)?;
    if counts.y.iter().any(|c| *c < 0) || counts.x.iter().any(|c| *c < 0) {
        return Ok(Vec::new());
    }
    assemble_basis(sc, &dims, &counts, k, cap)
}

/// Enumerate the same basis from the even-side data: the factor-degree
/// dictionary applied to the weight, then the superscript-block filter.
pub fn enumerate_weight_space_dual(
    sc: &Scenario,
    k: &[i64],
    mu: &[i64],
    cap: usize,
) -> Result<Vec<Monomial>> {
    let dims = sc.validate()?;
    let degrees = weight_to_factor_degrees(sc, mu)?;
    let pq = (sc.p + sc.q) as usize;
    let mn = (sc.m + sc.n) as usize;
    // factor degrees determine occupancies: y rows need degree <= 0
    let mut counts = Counts {
        y: Vec::with_capacity(pq),
        x: Vec::with_capacity(mn),
    };
    for r in 0..pq {
        if degrees[r] > 0 {
            return Ok(Vec::new());
        }
        counts.y.push(-degrees[r]);
    }
    for i in 0..mn {
        if degrees[pq + i] < 0 {
            return Ok(Vec::new());
        }
        counts.x.push(degrees[pq + i]);
    }
    assemble_basis(sc, &dims, &counts, k, cap)
}

/// Exact matrix of an operator on a weight-space basis. Fails with the
/// witness monomial if the operator leaks outside the space.
pub fn restrict(op: &WeylElement, basis: &[Monomial]) -> Result<RatMatrix> {
    let n = basis.len();
    let index: BTreeMap<&Monomial, usize> = basis.iter().zip(0..).collect();
    let mut rows = vec![vec![BigRational::zero(); n]; n];
    for (col, mono) in basis.iter().enumerate() {
        let image = op.act(&SuperPoly::from_term(mono.clone(), rat_int(1)))?;
        for (m, c) in &image.terms {
            match index.get(m) {
                Some(&row) => rows[row][col] = c.clone(),
                None => {
                    return Err(AlgebraError::Leakage(format!("{:?}", m)));
                }
            }
        }
    }
    RatMatrix::new(rows)
}

/// Result of the spectral checks on one weight space.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub dim: usize,
    pub commuting: bool,
    pub commuting_witness: Option<(usize, usize)>,
    pub cyclic_seed: Option<usize>,
    pub simple_spectrum: bool,
    pub resamples_used: u32,
}

/// Pairwise commutation, Krylov cyclicity from some coordinate vector,
/// and squarefreeness of a random rational combination (resampled on
/// failure up to the given limit).
pub fn check_spectral_claims<RNG: Rng>(
    mats: &[RatMatrix],
    dim: usize,
    rng: &mut RNG,
    max_resamples: u32,
) -> SpectralReport {
    let mut commuting = true;
    let mut commuting_witness = None;
    'outer: for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            if !mats[i].commutes_with(&mats[j]) {
                commuting = false;
                commuting_witness = Some((i, j));
                break 'outer;
            }
        }
    }
    let mut cyclic_seed = None;
    for seed in 0..dim {
        if krylov_cyclic_from(mats, dim, seed) {
            cyclic_seed = Some(seed);
            break;
        }
    }
    let mut simple = false;
    let mut resamples = 0;
    while resamples <= max_resamples {
        let mut combo = RatMatrix::zero(dim);
        for m in mats {
            let c = crate::ring::rat(rng.gen_range(-50..=50i64), rng.gen_range(1..=12i64));
            combo = m.scale_add(&c, &combo);
        }
        if is_squarefree(&combo.char_poly()) {
            simple = true;
            break;
        }
        resamples += 1;
    }
    SpectralReport {
        dim,
        commuting,
        commuting_witness,
        cyclic_seed,
        simple_spectrum: simple,
        resamples_used: resamples,
    }
}

/// Scan low-degree monomials and group them into weight spaces, keeping
/// those whose dimension falls in the requested range. Deterministic.
pub fn weight_spaces_by_dimension(
    sc: &Scenario,
    degree_cap: u32,
    min_dim: usize,
    max_dim: usize,
) -> Result<Vec<(WeightData, Vec<Monomial>)>> {
    let dims = sc.validate()?;
    let profile = sc.profile()?;
    let d = sc.d as usize;
    let pq = (sc.p + sc.q) as usize;
    let mn = (sc.m + sc.n) as usize;
    // enumerate occupancy vectors per variable subscript up to the cap
    let mut spaces: BTreeMap<WeightData, Vec<Monomial>> = BTreeMap::new();
    // iterate over all exponent assignments with total below the cap
    let vars: Vec<Generator> = profile.variables();
    fn scan(
        vars: &[Generator],
        t: usize,
        left: u32,
        acc: &mut Vec<(Generator, u32)>,
        sink: &mut dyn FnMut(&[(Generator, u32)]),
    ) {
        if t == vars.len() {
            sink(acc);
            return;
        }
        let g = vars[t];
        let top = if g.parity.is_odd() { left.min(1) } else { left };
        for e in 0..=top {
            if e > 0 {
                acc.push((g, e));
            }
            scan(vars, t + 1, left - e, acc, sink);
            if e > 0 {
                acc.pop();
            }
        }
    }
    let mut record = |factors: &[(Generator, u32)]| {
        // signature of the monomial
        let mut y_counts = vec![0i64; pq];
        let mut x_counts = vec![0i64; mn];
        let mut per_super = vec![0i64; d + 1];
        for (g, e) in factors {
            match g.id {
                GenId::X { sup, sub } => {
                    x_counts[(sub - 1) as usize] += *e as i64;
                    per_super[sup as usize] += *e as i64;
                }
                GenId::Y { sup, sub } => {
                    y_counts[(sub - 1) as usize] += *e as i64;
                    per_super[sup as usize] -= *e as i64;
                }
                _ => {}
            }
        }
        let mut mu = Vec::with_capacity(pq + mn);
        for r in 1..=pq {
            let sign = if profile.y_parity(r as u16).is_odd() {
                1
            } else {
                -1
            };
            mu.push(-y_counts[r - 1] + sign * d as i64);
        }
        for i in 1..=mn {
            mu.push(x_counts[i - 1]);
        }
        let mut k = Vec::with_capacity(sc.xi.len());
        for block in 0..sc.xi.len() {
            let lo = dims.d_cum[block] as usize;
            let hi = dims.d_cum[block + 1] as usize;
            k.push(per_super[lo + 1..=hi].iter().sum());
        }
        let mut sorted = factors.to_vec();
        sorted.sort_by_key(|a| a.0);
        spaces
            .entry(WeightData { k, mu })
            .or_default()
            .push(Monomial(sorted));
    };
    scan(&vars, 0, degree_cap, &mut Vec::new(), &mut record);
    let mut out: Vec<(WeightData, Vec<Monomial>)> = spaces
        .into_iter()
        .filter(|(_, basis)| basis.len() >= min_dim && basis.len() <= max_dim)
        .collect();
    for (_, basis) in &mut out {
        basis.sort();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;
    use crate::psdo::Window;
    use rand::SeedableRng;

    fn sc_bosonic() -> Scenario {
        Scenario {
            name: "wtest".into(),
            d: 1,
            p: 0,
            q: 0,
            m: 1,
            n: 0,
            xi: vec![1],
            gamma: vec![1],
            w: vec![rat(1, 1)],
            z: vec![rat(2, 1)],
            window: Window::working(-6, 3, -6, 3).unwrap(),
            gen_window: Window::working(-3, 2, -3, 2).unwrap(),
            mutation: None,
        }
    }

    #[test]
    fn one_dimensional_space() {
        let sc = sc_bosonic();
        // degree 2 in the single bosonic variable: basis {x^2}
        let basis = enumerate_weight_space(&sc, &[2], &[2], 64).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].total_degree(), 2);
        let dual = enumerate_weight_space_dual(&sc, &[2], &[2], 64).unwrap();
        assert_eq!(basis, dual);
    }

    #[test]
    fn fermionic_degree_one_space() {
        // two odd variables across two superscripts: degree-1 space has
        // dimension 2 before the block filter splits it
        let sc = Scenario {
            name: "f".into(),
            d: 2,
            p: 0,
            q: 0,
            m: 0,
            n: 1,
            xi: vec![2],
            gamma: vec![1],
            w: vec![rat(0, 1)],
            z: vec![rat(1, 1)],
            window: Window::working(-6, 3, -6, 3).unwrap(),
            gen_window: Window::working(-3, 2, -3, 2).unwrap(),
            mutation: None,
        };
        let basis = enumerate_weight_space(&sc, &[1], &[1], 64).unwrap();
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn restriction_identity_and_euler() {
        let sc = sc_bosonic();
        let basis = enumerate_weight_space(&sc, &[3], &[3], 64).unwrap();
        assert_eq!(basis.len(), 1);
        let one = WeylElement::one();
        let m = restrict(&one, &basis).unwrap();
        assert_eq!(m, RatMatrix::identity(1));
        let profile = sc.profile().unwrap();
        let x = profile.x(1, 1).unwrap();
        let euler = WeylElement::variable(x)
            .mul(&WeylElement::derivative(x))
            .unwrap();
        let e = restrict(&euler, &basis).unwrap();
        assert_eq!(e.rows[0][0], rat(3, 1));
        // a leaking operator errors with a witness
        let leak = WeylElement::variable(x);
        assert!(matches!(
            restrict(&leak, &basis),
            Err(AlgebraError::Leakage(_))
        ));
    }

    #[test]
    fn spectral_toy() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(7);
        let a = RatMatrix::new(vec![
            vec![rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(2, 1)],
        ])
        .unwrap();
        let b = RatMatrix::new(vec![
            vec![rat(3, 1), rat(0, 1)],
            vec![rat(0, 1), rat(5, 1)],
        ])
        .unwrap();
        let n = RatMatrix::new(vec![
            vec![rat(0, 1), rat(0, 1)],
            vec![rat(1, 1), rat(0, 1)],
        ])
        .unwrap();
        let rep = check_spectral_claims(&[a, b, n.mul(&n)], 2, &mut rng, 3);
        // n^2 = 0 commutes with diagonals
        assert!(rep.commuting);
        assert!(rep.simple_spectrum);
    }

    #[test]
    fn dimension_counting_consistency() {
        // sum over weights of the weight-space dims equals the dimension
        // of the degree component
        let sc = Scenario {
            name: "count".into(),
            d: 2,
            p: 0,
            q: 0,
            m: 1,
            n: 1,
            xi: vec![1, 1],
            gamma: vec![1, 1],
            w: vec![rat(0, 1), rat(1, 1)],
            z: vec![rat(2, 1), rat(3, 1)],
            window: Window::working(-6, 3, -6, 3).unwrap(),
            gen_window: Window::working(-3, 2, -3, 2).unwrap(),
            mutation: None,
        };
        let spaces = weight_spaces_by_dimension(&sc, 3, 1, 64).unwrap();
        // reconstruct the dimension of the (k1, k2) = (1, 1) component
        let total: usize = spaces
            .iter()
            .filter(|(wd, _)| wd.k == vec![1, 1])
            .map(|(_, b)| b.len())
            .sum();
        // direct count: degree 1 on each superscript from {x1, x2}:
        // (x^1_1 or x^1_2) tensor (x^2_1 or x^2_2) = 4 monomials
        assert_eq!(total, 4);
    }
}
