//! Input validation, truncation of the conductor to degree ≤ N−3, the chart
//! at infinity, and the basis of regular differentials φ dx / F_y.

use crate::conductor::conductor;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::groebner::{buchberger, krull_dimension, Ideal};
use crate::linalg::rref;
use crate::normalize::{normalize, DEFAULT_LOOP_CAP};
use crate::poly::{Monomial, MonomialOrder, OrderKind, Polynomial, Ring};
use serde::Serialize;
use std::sync::Arc;

/// Coordinate shear applied by [`validate_input`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shear {
    /// X ↦ X' + λY'.
    Linear { lambda: u32 },
    /// X ↦ X' + Y'^a.
    Power { a: u32 },
}

/// The change of coordinates turning the input into the working curve:
/// optional swap of X and Y, then an optional shear, then scaling by a
/// nonzero constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Transform {
    pub swap: bool,
    pub shear: Option<Shear>,
    pub scale: u32,
}

impl Transform {
    pub fn is_identity(&self) -> bool {
        !self.swap && self.shear.is_none() && self.scale == 1
    }
}

/// A working model: monic in y of degree N = deg F, with F_y not in ⟨F⟩.
#[derive(Clone, Debug)]
pub struct CurveInput {
    pub f: Polynomial,
    pub n: u32,
    pub transform: Transform,
}

fn grlex(ring: &Ring) -> MonomialOrder {
    MonomialOrder::natural(OrderKind::Grlex, ring.nvars())
}

fn total_degree(f: &Polynomial) -> u32 {
    f.total_degree().finite().unwrap_or(0)
}

/// Scales `f` to be monic in y when its y^N coefficient is a nonzero constant.
fn monic_in_y(f: &Polynomial) -> Option<(Polynomial, u32)> {
    let n = total_degree(f);
    if f.degree_in(1) != Some(n) || n == 0 {
        return None;
    }
    let lc = f.coefficients_in(1).pop()?.constant_value()?;
    let s = f.field().inv(lc);
    Some((f.scale(s), s))
}

fn separable_in_y(f: &Polynomial) -> bool {
    let fy = f.partial_derivative(1, 1);
    !fy.is_zero() && !Ideal::new(f.ring(), vec![f.clone()]).contains(&fy)
}

fn accept(f: &Polynomial, swap: bool, shear: Option<Shear>) -> Option<CurveInput> {
    let (g, scale) = monic_in_y(f)?;
    separable_in_y(&g).then(|| CurveInput {
        n: total_degree(&g),
        f: g,
        transform: Transform { swap, shear, scale },
    })
}

/// Brings a plane curve into a working model: monic in y of full degree and
/// separable over k(x).
///
/// Absolute irreducibility of the input is assumed, not checked.
pub fn validate_input(f0: &Polynomial) -> Result<CurveInput> {
    if f0.ring().nvars() != 2 {
        return Err(Error::Validation("curve must be a polynomial in x and y".into()));
    }
    let n0 = match f0.total_degree().finite() {
        None => return Err(Error::Validation("curve is the zero polynomial".into())),
        Some(0) => return Err(Error::Validation("curve is a nonzero constant".into())),
        Some(d) => d,
    };
    for v in 0..2 {
        if n0 > 1 && f0.support_vars() == [v] {
            return Err(Error::Validation(
                "univariate curve of degree > 1 is not absolutely irreducible".into(),
            ));
        }
    }
    let ring = f0.ring().clone();
    let (x, y) = (Polynomial::var(&ring, 0), Polynomial::var(&ring, 1));
    let mut f = f0.clone();
    let mut swap = false;
    if f.partial_derivative(1, 1).is_zero() {
        f = f.substitute(&[y.clone(), x.clone()]);
        swap = true;
        if f.partial_derivative(1, 1).is_zero() {
            return Err(Error::Inseparable("curve is a p-th power in both variables".into()));
        }
    }
    if let Some(c) = accept(&f, swap, None) {
        return Ok(c);
    }
    let k = f.field();
    if k.characteristic() > n0 as u64 + 1 {
        for lambda in 1..k.p() {
            let shifted = &x + &y.scale(lambda);
            if let Some(c) = accept(&f.substitute(&[shifted, y.clone()]), swap, Some(Shear::Linear { lambda })) {
                return Ok(c);
            }
        }
    }
    let p = k.p();
    let a = (n0 / p + 1) * p;
    let shifted = &x + &y.pow(a as u64);
    accept(&f.substitute(&[shifted, y.clone()]), swap, Some(Shear::Power { a })).ok_or_else(|| {
        Error::Inseparable(format!("no shear with a = {a} gives a separable presentation"))
    })
}

/// Monomials x^i y^j with i + j ≤ d, in grlex-descending order (x ≻ y).
pub fn monomials_up_to(d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for deg in (0..=d).rev() {
        for i in (0..=deg).rev() {
            out.push(Monomial::from_exponents(&[i, deg - i]));
        }
    }
    out
}

fn coefficient_row(f: &Polynomial, monos: &[Monomial]) -> Vec<u32> {
    monos.iter().map(|m| f.coeff(m)).collect()
}

fn from_row(row: &[u32], monos: &[Monomial], ring: &Arc<Ring>) -> Polynomial {
    Polynomial::from_terms(
        ring,
        row.iter()
            .zip(monos)
            .filter(|(c, _)| **c != 0)
            .map(|(&c, &m)| (m, c))
            .collect(),
    )
}

/// Canonical basis of the span of polynomials of degree ≤ d: the reduced
/// row echelon form of their coefficient matrix over grlex-descending
/// monomials.
pub fn canonical_span(polys: &[Polynomial], d: u32, ring: &Arc<Ring>) -> Vec<Polynomial> {
    let monos = monomials_up_to(d);
    let rows: Vec<Vec<u32>> = polys.iter().map(|f| coefficient_row(f, &monos)).collect();
    rref(&rows, ring.field)
        .iter()
        .map(|r| from_row(r, &monos, ring))
        .collect()
}

/// Whether two families of polynomials of degree ≤ d span the same space.
pub fn same_span(a: &[Polynomial], b: &[Polynomial], d: u32) -> bool {
    match (a.first(), b.first()) {
        (None, None) => true,
        (Some(f), _) | (None, Some(f)) => {
            let ring = f.ring().clone();
            canonical_span(a, d, &ring) == canonical_span(b, d, &ring)
        }
    }
}

/// A k-basis of the elements of degree ≤ d of ⟨conductor, F⟩, each reduced
/// modulo F as a polynomial in y.
pub fn truncate_conductor(cond: &[Polynomial], f: &Polynomial, d: u32) -> Result<Vec<Polynomial>> {
    let ring = f.ring().clone();
    let mut gens = cond.to_vec();
    gens.push(f.clone());
    let g = buchberger(&gens, &grlex(&ring));
    let monos = monomials_up_to(d);
    let mut rows = Vec::new();
    for gi in &g {
        let dg = total_degree(gi);
        if dg > d {
            continue;
        }
        for m in monomials_up_to(d - dg) {
            rows.push(coefficient_row(&gi.mul_term(&m, 1), &monos));
        }
    }
    let k = ring.field;
    let mut out = Vec::new();
    for r in rref(&rows, k) {
        out.push(from_row(&r, &monos, &ring).rem_monic_in(1, f)?);
    }
    Ok(out)
}

/// Whether the projective closure of F = 0 is nonsingular at every point on
/// the line at infinity (Jacobian criterion).
pub fn nonsingular_at_infinity(f: &Polynomial) -> Result<bool> {
    let n = total_degree(f);
    let k = f.field();
    let r3 = Ring::new(k, &["x", "y", "z"]);
    let fh = Polynomial::from_terms(
        &r3,
        f.terms()
            .iter()
            .map(|&(m, c)| {
                let (i, j) = (m.exp(0), m.exp(1));
                (Monomial::from_exponents(&[i, j, n - i - j]), c)
            })
            .collect(),
    );
    let mut gens = vec![fh.clone(), Polynomial::var(&r3, 2)];
    for v in 0..3 {
        gens.push(fh.partial_derivative(v, 1));
    }
    let ideal = Ideal::new(&r3, gens);
    if ideal.is_unit() {
        return Ok(true);
    }
    Ok(krull_dimension(&ideal)? == 0)
}

/// The conductor of k[x,y]/⟨F⟩ truncated to degree ≤ d, together with the
/// conductor generators.
pub fn truncated_conductor(
    f: &Polynomial,
    n: u32,
    d: u32,
    loop_cap: usize,
) -> Result<(Vec<Polynomial>, Vec<Polynomial>)> {
    let tower = normalize(f, loop_cap)?;
    let (_, cond) = conductor(&tower, n as usize)?;
    let trunc = truncate_conductor(&cond.generators, f, d)?;
    Ok((trunc, cond.generators))
}

/// The chart at infinity F'(x', y') = x'^N F(1/x', y'/x').
pub fn infinity_chart(f: &Polynomial, n: u32) -> Result<CurveInput> {
    let fp = f.chart_substitute(n)?;
    let bad = || Error::Chart("the curve at infinity is not monic in y of full degree or not separable".into());
    let (g, scale) = monic_in_y(&fp).ok_or_else(bad)?;
    if !separable_in_y(&g) {
        return Err(bad());
    }
    Ok(CurveInput {
        f: g,
        n,
        transform: Transform {
            swap: false,
            shear: None,
            scale,
        },
    })
}

/// Elements of span(candidates) whose image in the chart at infinity lies in
/// span(chart_basis); all polynomials have degree ≤ d.
pub fn intersect_with_chart(
    candidates: &[Polynomial],
    chart_basis: &[Polynomial],
    f_chart: &Polynomial,
    d: u32,
) -> Result<Vec<Polynomial>> {
    let Some(first) = candidates.first() else {
        return Ok(Vec::new());
    };
    let ring = first.ring().clone();
    let k = ring.field;
    let monos = monomials_up_to(d);
    let m = monos.len();
    let c = candidates.len();
    // rows [φ_i' | e_i] and [b | 0]; rows of the rref with vanishing left
    // part give the combinations landing in the chart span
    let mut rows = Vec::new();
    for (i, phi) in candidates.iter().enumerate() {
        let img = phi.chart_substitute(d)?.rem_monic_in(1, f_chart)?;
        let mut row = coefficient_row(&img, &monos);
        row.extend((0..c).map(|j| u32::from(i == j)));
        rows.push(row);
    }
    for b in chart_basis {
        let mut row = coefficient_row(b, &monos);
        row.extend(std::iter::repeat_n(0, c));
        rows.push(row);
    }
    let mut combos = Vec::new();
    for r in rref(&rows, k) {
        if r[..m].iter().all(|&v| v == 0) {
            let mut acc = Polynomial::zero(&ring);
            for (ci, phi) in r[m..].iter().zip(candidates) {
                if *ci != 0 {
                    acc = &acc + &phi.scale(*ci);
                }
            }
            combos.push(acc);
        }
    }
    Ok(canonical_span(&combos, d, &ring))
}

/// Basis of regular differentials φ dx / D of the nonsingular model of F = 0,
/// with D the monic (grlex) multiple of F_y.
#[derive(Clone, Debug)]
pub struct DifferentialBasis {
    /// The working curve, after [`validate_input`].
    pub curve: Polynomial,
    pub n: u32,
    pub transform: Transform,
    pub numerators: Vec<Polynomial>,
    pub denominator: Polynomial,
    pub genus: usize,
    /// Conductor generators of the affine chart.
    pub conductor: Vec<Polynomial>,
    /// The affine conductor truncated to degree ≤ N−3.
    pub truncated: Vec<Polynomial>,
    /// Whether the chart at infinity had to be intersected.
    pub used_infinity_chart: bool,
}

/// Runs the full pipeline with the default loop cap.
pub fn differential_basis(f0: &Polynomial) -> Result<DifferentialBasis> {
    differential_basis_with(f0, DEFAULT_LOOP_CAP)
}

pub fn differential_basis_with(f0: &Polynomial, loop_cap: usize) -> Result<DifferentialBasis> {
    let input = validate_input(f0)?;
    let f = input.f.clone();
    let ring = f.ring().clone();
    let n = input.n;
    let denominator = f.partial_derivative(1, 1).monic(&grlex(&ring));
    let mut out = DifferentialBasis {
        curve: f.clone(),
        n,
        transform: input.transform,
        numerators: Vec::new(),
        denominator,
        genus: 0,
        conductor: Vec::new(),
        truncated: Vec::new(),
        used_infinity_chart: false,
    };
    if n < 3 {
        return Ok(out);
    }
    let d = n - 3;
    let smooth_at_infinity = nonsingular_at_infinity(&f)?;
    let (affine, chart) = if smooth_at_infinity {
        (truncated_conductor(&f, n, d, loop_cap)?, None)
    } else {
        let chart_curve = infinity_chart(&f, n)?;
        let (a, c) = std::thread::scope(|s| {
            let h = s.spawn(|| truncated_conductor(&chart_curve.f, n, d, loop_cap));
            let a = truncated_conductor(&f, n, d, loop_cap);
            (a, h.join().expect("chart pipeline panicked"))
        });
        (a?, Some((chart_curve.f, c?.0)))
    };
    let (truncated, cond) = affine;
    let numerators = match chart {
        None => canonical_span(&truncated, d, &ring),
        Some((fc, chart_basis)) => intersect_with_chart(&truncated, &chart_basis, &fc, d)?,
    };
    out.genus = numerators.len();
    out.numerators = numerators;
    out.conductor = cond;
    out.truncated = truncated;
    out.used_infinity_chart = !smooth_at_infinity;
    Ok(out)
}

/// Builds a polynomial in k[x, y] from exponent pairs.
pub fn plane_poly(k: PrimeField, terms: &[(&[u32], i64)]) -> Polynomial {
    Polynomial::from_exponents(&Ring::plane(k), terms)
}
