//! The Cartier operator on φ dx / F_y, the Cartier–Manin matrix and the
//! invariants read off from it.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::forms::DifferentialBasis;
use crate::linalg::{fp_mat_pow, rank, solve_in_row_span, FpMatrix};
use crate::poly::{Monomial, Polynomial};
use serde::Serialize;

/// Numerator ψ with V(φ dx/F_y) = ψ dx/F_y, reduced modulo F in y.
pub fn cartier_apply(phi: &Polynomial, f: &Polynomial) -> Result<Polynomial> {
    if phi.is_zero() {
        return Ok(phi.clone());
    }
    let p = f.field().p();
    let g = &f.pow(p as u64 - 1) * phi;
    let d = g.partial_derivative(0, p - 1).partial_derivative(1, p - 1);
    let root = d
        .pth_root()
        .map_err(|_| Error::internal("cartier", "derivative is not a p-th power"))?;
    root.rem_monic_in(1, f)
}

/// Matrix of V on a basis: column j holds the coordinates of V(φ_j).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartierManinMatrix {
    pub entries: FpMatrix,
    pub p: u32,
}

impl CartierManinMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|&v| v == 0)
    }
}

/// Coordinates of ψ on the numerators, all compared as reduced remainders.
fn coordinates(psi: &Polynomial, basis: &[Polynomial], k: PrimeField) -> Option<Vec<u32>> {
    let mut monos: Vec<Monomial> = basis
        .iter()
        .chain(std::iter::once(psi))
        .flat_map(|f| f.terms().iter().map(|t| t.0))
        .collect();
    monos.sort_by_key(|m| m.exponents(2));
    monos.dedup();
    let row = |f: &Polynomial| monos.iter().map(|m| f.coeff(m)).collect::<Vec<_>>();
    let rows: Vec<Vec<u32>> = basis.iter().map(row).collect();
    solve_in_row_span(&rows, &row(psi), k)
}

/// Cartier–Manin matrix of the basis (columns are images).
pub fn cartier_manin_matrix(basis: &DifferentialBasis) -> Result<CartierManinMatrix> {
    let f = &basis.curve;
    let k = f.field();
    let g = basis.numerators.len();
    let mut m = vec![vec![0u32; g]; g];
    for (j, phi) in basis.numerators.iter().enumerate() {
        let psi = cartier_apply(phi, f)?;
        let c = coordinates(&psi, &basis.numerators, k).ok_or_else(|| {
            Error::internal("cartier", format!("image of basis element {} is not in the span", j + 1))
        })?;
        for (i, v) in c.into_iter().enumerate() {
            m[i][j] = v;
        }
    }
    Ok(CartierManinMatrix { entries: m, p: k.p() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub genus: usize,
    pub a_number: usize,
    pub p_rank: usize,
    pub superspecial: bool,
}

/// Genus, a-number g − rank M, p-rank rank(M^g) and superspeciality M = 0.
///
/// Over F_p the Frobenius twist acts trivially on entries, so the g-fold
/// semilinear composite is the ordinary power M^g.
pub fn invariants(m: &CartierManinMatrix) -> Result<Invariants> {
    let k = PrimeField::new(m.p as u64)?;
    let g = m.size();
    let r = rank(&m.entries, k);
    Ok(Invariants {
        genus: g,
        a_number: g - r,
        p_rank: rank(&fp_mat_pow(&m.entries, g, k), k),
        superspecial: m.is_zero(),
    })
}
