//! Free k[x]-basis of the integral closure, trace forms, the complementary
//! (dual) basis and generators of the conductor.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::function_field::{from_unipoly, to_unipoly, FfElem, FunctionField};
use crate::linalg::{
    invert_ratfun_matrix, smith_normal_form, smith_normal_form_with_inverse, PolyMatrix, RatFun, RatMatrix,
    UniPoly,
};
use crate::modgb::{elimination_order, module_buchberger, syzygy_modulo_eliminated, ModuleElement, ModuleOrder};
use crate::normalize::{module_generators, RingTower};
use crate::poly::{Polynomial, Ring};
use std::sync::Arc;

/// A k[x]-basis w_1, …, w_N of the top ring of a tower.
#[derive(Clone, Debug)]
pub struct ClosureBasis {
    /// The basis elements, in the top ring.
    pub w: Vec<Polynomial>,
    /// Rows of Q⁻¹ defining w_i = W_i · ᵗ(B_1, …, B_r).
    pub w_rows: Vec<Vec<UniPoly>>,
    /// Q with its first r − N columns removed (r × N).
    pub q_prime: PolyMatrix,
    /// The module generators B_1, …, B_r.
    pub generators: Vec<Polynomial>,
    /// The k[x]-relation matrix U among the generators.
    pub relations: PolyMatrix,
    kf: FunctionField,
    images: Vec<FfElem>,
    /// The φ(w_i) on 1, y, …, y^{N-1}.
    power: RatMatrix,
    /// Inverse of the matrix whose rows are the φ(w_i) on 1, y, …, y^{N-1}.
    power_inverse: RatMatrix,
}

impl ClosureBasis {
    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }
}

/// The trace matrix and its inverse, which gives w_i* = Σ_j c_ij w_j.
#[derive(Clone, Debug)]
pub struct DualBasis {
    pub trace_matrix: Vec<Vec<UniPoly>>,
    pub coefficients: RatMatrix,
}

#[derive(Clone, Debug)]
pub struct ConductorBasis {
    /// F_y · φ(w_i*) in k[x, y].
    pub generators: Vec<Polynomial>,
    pub dual: DualBasis,
}

fn field_of(tower: &RingTower) -> PrimeField {
    tower.base_ring().field
}

fn unipoly_row(e: &[Polynomial]) -> Result<Vec<UniPoly>> {
    e.iter().map(to_unipoly).collect()
}

/// Reduced Gröbner basis of the k[x]-relations among B_1, …, B_r modulo
/// I_n, the same set `syzygy_modulo_eliminated` returns.
///
/// S_n/I_n embeds in k(x)[y]/(F) through φ, so the relations are the
/// k[x]-kernel of the coordinate matrix of φ(B_1), …, φ(B_r). The kernel is
/// read off a Smith form and then reduced under the eliminated order.
pub fn relations(generators: &[Polynomial], tower: &RingTower) -> Result<Vec<Vec<UniPoly>>> {
    let kf = FunctionField::new(tower.curve())?;
    let images = phi_images(tower, &kf)?;
    Ok(relations_with(generators, tower, &kf, &images)?.0)
}

fn relations_with(
    generators: &[Polynomial],
    tower: &RingTower,
    kf: &FunctionField,
    images: &[FfElem],
) -> Result<(Vec<Vec<UniPoly>>, Vec<FfElem>)> {
    let k = field_of(tower);
    let r = generators.len();
    let n = kf.degree();
    let rows: Vec<FfElem> = generators.iter().map(|b| kf.eval(b, images)).collect();
    let den = rows
        .iter()
        .flatten()
        .fold(UniPoly::one(k), |acc, c| acc.lcm(c.den()));
    let m = PolyMatrix::from_rows(
        k,
        rows.iter()
            .map(|row| row.iter().map(|c| c.num().mul(&den.div_exact(c.den()))).collect())
            .collect(),
        n,
    );
    let (p, d, _) = smith_normal_form(&m, k);
    let rank = (0..r.min(n)).take_while(|&i| !d.get(i, i).is_zero()).count();
    let top = &tower.top().ring;
    let kernel: Vec<ModuleElement> = p.data[rank..]
        .iter()
        .map(|row| ModuleElement::new(row.iter().map(|c| from_unipoly(c, top)).collect()))
        .collect();
    if kernel.is_empty() {
        return Ok((Vec::new(), rows));
    }
    let ord = ModuleOrder::top(elimination_order(top.nvars(), 1), r);
    let gb = module_buchberger(&kernel, &ord)
        .iter()
        .map(|g| unipoly_row(&g.coords))
        .collect::<Result<_>>()?;
    Ok((gb, rows))
}

/// The relations through the syzygy module of (B_1, …, B_r) modulo I_n in
/// the whole top ring. Agrees with [`relations`]; far slower on tall towers.
pub fn relations_by_syzygies(generators: &[Polynomial], tower: &RingTower) -> Result<Vec<Vec<UniPoly>>> {
    syzygy_modulo_eliminated(generators, &tower.top().gens, 1)?
        .iter()
        .map(|g| unipoly_row(&g.coords))
        .collect()
}

/// Computes a k[x]-basis of the top ring from the Smith form of the
/// relations among t_1 ⋯ t_n y^j.
pub fn closure_basis(tower: &RingTower, n: usize) -> Result<ClosureBasis> {
    let k = field_of(tower);
    let top = tower.top();
    let b = module_generators(tower, n);
    let r = b.len();
    let kf = FunctionField::new(tower.curve())?;
    let images = phi_images(tower, &kf)?;
    let (rows, phi_b) = relations_with(&b, tower, &kf, &images)?;
    let u = PolyMatrix::from_rows(k, rows, r);
    let (_, d, q, qinv) = smith_normal_form_with_inverse(&u, k);
    let rank = (0..d.rows.min(d.cols))
        .take_while(|&i| !d.get(i, i).is_zero())
        .count();
    if rank + n != r {
        return Err(Error::Rank {
            expected: r - n.min(r),
            found: rank,
        });
    }
    if (0..rank).any(|i| !d.get(i, i).is_one()) {
        return Err(Error::internal("conductor", "relation matrix has a non-unit invariant factor"));
    }
    let w_rows: Vec<Vec<UniPoly>> = qinv.data[rank..].to_vec();
    let ring = top.ring.clone();
    let w: Vec<Polynomial> = w_rows
        .iter()
        .map(|row| {
            row.iter()
                .zip(&b)
                .fold(Polynomial::zero(&ring), |acc, (c, bj)| &acc + &(&from_unipoly(c, &ring) * bj))
        })
        .collect();
    let q_prime = PolyMatrix::from_rows(
        k,
        q.data.iter().map(|row| row[rank..].to_vec()).collect(),
        n,
    );
    let power: RatMatrix = w_rows
        .iter()
        .map(|row| {
            row.iter().zip(&phi_b).fold(kf.zero(), |acc, (c, pb)| {
                if c.is_zero() {
                    acc
                } else {
                    kf.add(&acc, &kf.scale(pb, &RatFun::from_poly(c.clone())))
                }
            })
        })
        .collect();
    let power_inverse = invert_ratfun_matrix(&power, k)
        .map_err(|_| Error::internal("conductor", "closure basis is not a k(x)-basis"))?;
    Ok(ClosureBasis {
        w,
        w_rows,
        q_prime,
        generators: b,
        relations: u,
        kf,
        images,
        power,
        power_inverse,
    })
}

/// Coordinates of `c` on the basis w over k[x], read off its image in
/// k(x)[y]/(F).
pub fn coordinates(c: &Polynomial, basis: &ClosureBasis, tower: &RingTower) -> Result<Vec<UniPoly>> {
    coordinates_of_image(&basis.kf.eval(c, &basis.images), basis, field_of(tower))
}

fn coordinates_of_image(pc: &FfElem, basis: &ClosureBasis, k: PrimeField) -> Result<Vec<UniPoly>> {
    let mut out = Vec::with_capacity(basis.len());
    for l in 0..basis.len() {
        let mut acc = RatFun::zero(k);
        for (ci, row) in pc.iter().zip(&basis.power_inverse) {
            if !ci.is_zero() && !row[l].is_zero() {
                acc = acc.add(&ci.mul(&row[l]));
            }
        }
        if !acc.is_polynomial() {
            return Err(Error::internal("conductor", "element is not integral over k[x]"));
        }
        out.push(acc.num().clone());
    }
    Ok(out)
}

/// Coordinates of `c` on the basis w over k[x], through syzygies.
///
/// Takes the eliminated syzygies of (c, B_1, …, B_r) modulo I_n, combines
/// them so that the first coordinate becomes 1, giving c ≡ −Σ b_j B_j, and
/// maps −b through Q′. Agrees with [`coordinates`].
pub fn coordinates_by_syzygies(c: &Polynomial, basis: &ClosureBasis, tower: &RingTower) -> Result<Vec<UniPoly>> {
    let k = field_of(tower);
    let r = basis.generators.len();
    if c.is_zero() {
        return Ok(vec![UniPoly::zero(k); basis.len()]);
    }
    let mut fs = vec![c.clone()];
    fs.extend(basis.generators.iter().cloned());
    let syz = syzygy_modulo_eliminated(&fs, &tower.top().gens, 1)?;
    let mut g = UniPoly::zero(k);
    let mut b = vec![UniPoly::zero(k); r];
    for s in &syz {
        let coords = unipoly_row(&s.coords)?;
        if coords[0].is_zero() {
            continue;
        }
        let (ng, sa, tb) = g.ext_gcd(&coords[0]);
        for (j, bj) in b.iter_mut().enumerate() {
            *bj = bj.mul(&sa).add(&coords[j + 1].mul(&tb));
        }
        g = ng;
        if g.is_unit() {
            break;
        }
    }
    if !g.is_unit() {
        return Err(Error::internal(
            "conductor",
            "first coordinates of the eliminated syzygies are not coprime",
        ));
    }
    let s = k.neg(k.inv(g.lc()));
    let mut out = vec![UniPoly::zero(k); basis.len()];
    for (j, bj) in b.iter().enumerate() {
        if bj.is_zero() {
            continue;
        }
        let bj = bj.scale(s);
        for (l, o) in out.iter_mut().enumerate() {
            *o = o.add(&bj.mul(basis.q_prime.get(j, l)));
        }
    }
    Ok(out)
}

/// Trace of `a` over k(x), as the trace of the matrix of multiplication by a
/// on the basis w.
pub fn trace(a: &Polynomial, basis: &ClosureBasis, tower: &RingTower) -> Result<RatFun> {
    let k = field_of(tower);
    let mut acc = UniPoly::zero(k);
    for (i, wi) in basis.w.iter().enumerate() {
        acc = acc.add(&coordinates(&(a * wi), basis, tower)?[i]);
    }
    Ok(RatFun::from_poly(acc))
}

/// Multiplication matrices M_m with rows the coordinates of w_m · w_i.
pub fn multiplication_matrices(basis: &ClosureBasis, tower: &RingTower) -> Result<Vec<Vec<Vec<UniPoly>>>> {
    let k = field_of(tower);
    let n = basis.len();
    let mut m = vec![vec![vec![UniPoly::zero(k); n]; n]; n];
    for a in 0..n {
        for b in a..n {
            let c = coordinates_of_image(&basis.kf.mul(&basis.power[a], &basis.power[b]), basis, k)?;
            m[a][b] = c.clone();
            m[b][a] = c;
        }
    }
    Ok(m)
}

/// The matrix (Tr(w_i w_j)), from Tr(w_i w_j) = Tr(M_i M_j).
pub fn trace_matrix(basis: &ClosureBasis, tower: &RingTower) -> Result<Vec<Vec<UniPoly>>> {
    let k = field_of(tower);
    let n = basis.len();
    let m = multiplication_matrices(basis, tower)?;
    let mut t = vec![vec![UniPoly::zero(k); n]; n];
    for i in 0..n {
        for j in i..n {
            let mut acc = UniPoly::zero(k);
            for a in 0..n {
                for b in 0..n {
                    if !m[i][a][b].is_zero() && !m[j][b][a].is_zero() {
                        acc = acc.add(&m[i][a][b].mul(&m[j][b][a]));
                    }
                }
            }
            t[i][j] = acc.clone();
            t[j][i] = acc;
        }
    }
    Ok(t)
}

/// The dual basis w_i* = Σ_j c_ij w_j with (c_ij) the inverse trace matrix.
pub fn dual_basis(basis: &ClosureBasis, tower: &RingTower) -> Result<DualBasis> {
    let k = field_of(tower);
    let t = trace_matrix(basis, tower)?;
    let rt: RatMatrix = t
        .iter()
        .map(|row| row.iter().cloned().map(RatFun::from_poly).collect())
        .collect();
    let c = invert_ratfun_matrix(&rt, k).map_err(|e| match e {
        Error::SingularMatrix => Error::Inseparable("trace matrix is singular".into()),
        e => e,
    })?;
    Ok(DualBasis {
        trace_matrix: t,
        coefficients: c,
    })
}

/// Images in k(x)[y]/(F) of all variables of the top ring, with each
/// t_{i,j} sent to φ(u_{i,j}) / φ(a_i).
pub fn phi_images(tower: &RingTower, kf: &FunctionField) -> Result<Vec<FfElem>> {
    let mut images = kf.base_images();
    for level in tower.levels.iter().skip(1) {
        let ext = level
            .extension
            .as_ref()
            .ok_or_else(|| Error::internal("conductor", "tower level without extension data"))?;
        let nv = ext.a.ring().nvars();
        let pa = kf.eval(&ext.a, &images[..nv]);
        let pa_inv = kf.inv(&pa)?;
        let mut fresh = Vec::with_capacity(ext.new_vars.len());
        for u in &ext.u[1..] {
            fresh.push(kf.mul(&kf.eval(u, &images[..nv]), &pa_inv));
        }
        images.extend(fresh);
    }
    Ok(images)
}

/// Generators F_y · φ(w_i*) of the conductor, as polynomials in k[x, y].
pub fn conductor_generators(
    dual: &DualBasis,
    basis: &ClosureBasis,
    tower: &RingTower,
) -> Result<ConductorBasis> {
    let f = tower.curve();
    let plane: Arc<Ring> = f.ring().clone();
    let kf = &basis.kf;
    let phi_w = &basis.power;
    let fy = kf.eval(&f.partial_derivative(1, 1), &kf.base_images());
    let mut generators = Vec::with_capacity(basis.len());
    for row in &dual.coefficients {
        let mut acc = kf.zero();
        for (c, pw) in row.iter().zip(phi_w) {
            if !c.is_zero() {
                acc = kf.add(&acc, &kf.scale(pw, c));
            }
        }
        generators.push(kf.to_polynomial(&kf.mul(&fy, &acc), &plane)?);
    }
    Ok(ConductorBasis {
        generators,
        dual: dual.clone(),
    })
}

/// Closure basis, dual basis and conductor generators in one pass.
pub fn conductor(tower: &RingTower, n: usize) -> Result<(ClosureBasis, ConductorBasis)> {
    let basis = closure_basis(tower, n)?;
    let dual = dual_basis(&basis, tower)?;
    let cond = conductor_generators(&dual, &basis, tower)?;
    Ok((basis, cond))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::{buchberger, normal_form, Ideal};
    use crate::normalize::{level_order, normalize, DEFAULT_LOOP_CAP};
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn example() -> &'static (RingTower, ClosureBasis, ConductorBasis) {
        static CELL: OnceLock<(RingTower, ClosureBasis, ConductorBasis)> = OnceLock::new();
        CELL.get_or_init(|| {
            let r = Ring::plane(PrimeField::new(11).unwrap());
            let x = Polynomial::var(&r, 0);
            let y = Polynomial::var(&r, 1);
            let f = &(&x.pow(5) + &y.pow(5)) + &(&x * &y);
            let tower = normalize(&f, DEFAULT_LOOP_CAP).unwrap();
            let (b, c) = conductor(&tower, 5).unwrap();
            (tower, b, c)
        })
    }

    fn up(k: PrimeField, c: &[i64]) -> UniPoly {
        UniPoly::new(k, c.iter().map(|&v| k.from_i64(v)).collect())
    }

    fn mono(k: PrimeField, c: i64, e: usize) -> UniPoly {
        UniPoly::monomial(k, e, k.from_i64(c))
    }

    #[test]
    fn closure_basis_of_worked_example() {
        let (tower, basis, _) = example();
        let top = &tower.top().ring;
        let y = Polynomial::var(top, 1);
        let t = Polynomial::var(top, 2);
        let expected = vec![y.pow(3), y.pow(2), y.clone(), Polynomial::one(top), t.scale(10)];
        assert_eq!(basis.w, expected);
        // B ≡ Q′·w modulo I_n
        let gb = buchberger(&tower.top().gens, &level_order(top));
        for (j, bj) in basis.generators.iter().enumerate() {
            let mut comb = Polynomial::zero(top);
            for (l, wl) in basis.w.iter().enumerate() {
                comb = &comb + &(&from_unipoly(basis.q_prime.get(j, l), top) * wl);
            }
            assert!(normal_form(&(bj - &comb), &gb, &level_order(top)).is_zero());
        }
    }

    #[test]
    fn trace_matrix_of_worked_example() {
        let (_, _, cond) = example();
        let k = PrimeField::new(11).unwrap();
        let z = UniPoly::zero(k);
        let c = |v: i64| UniPoly::constant(k, v);
        let expected = vec![
            vec![z.clone(), mono(k, 6, 5), mono(k, 7, 1), z.clone(), z.clone()],
            vec![mono(k, 6, 5), mono(k, 7, 1), z.clone(), z.clone(), z.clone()],
            vec![mono(k, 7, 1), z.clone(), z.clone(), z.clone(), mono(k, 6, 4)],
            vec![z.clone(), z.clone(), z.clone(), c(5), c(1)],
            vec![z.clone(), z.clone(), mono(k, 6, 4), c(1), c(1)],
        ];
        assert_eq!(cond.dual.trace_matrix, expected);
    }

    #[test]
    fn inverse_trace_matrix_of_worked_example() {
        let (_, _, cond) = example();
        let k = PrimeField::new(11).unwrap();
        let den = up(k, &[3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let m = |c: i64, e: usize| RatFun::new(mono(k, c, e), den.clone()).unwrap();
        let over_x = |c: i64| RatFun::new(UniPoly::constant(k, c), den.mul(&UniPoly::x(k))).unwrap();
        let mut x15 = vec![0i64; 16];
        x15[0] = 9;
        x15[15] = 9;
        let e44 = RatFun::new(up(k, &x15), den.clone()).unwrap();
        let expected = vec![
            vec![m(5, 6), m(2, 10), over_x(2), m(3, 3), m(7, 3)],
            vec![m(2, 10), over_x(2), m(3, 3), m(10, 7), m(5, 7)],
            vec![over_x(2), m(3, 3), m(10, 7), m(4, 11), m(2, 11)],
            vec![m(3, 3), m(10, 7), m(4, 11), e44, m(2, 0)],
            vec![m(7, 3), m(5, 7), m(2, 11), m(2, 0), m(1, 0)],
        ];
        assert_eq!(cond.dual.coefficients, expected);
    }

    #[test]
    fn conductor_of_worked_example() {
        let (tower, basis, cond) = example();
        let f = tower.curve();
        let r = f.ring().clone();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let mut got = cond.generators.clone();
        got.push(f.clone());
        let want = vec![y.clone(), y.pow(2), y.pow(3), y.pow(4), x, f.clone()];
        assert!(Ideal::new(&r, got).same_ideal(&Ideal::new(&r, want)));
        // conductor property: c · B_j lands in k[x, y]
        let kf = FunctionField::new(f).unwrap();
        let images = phi_images(tower, &kf).unwrap();
        for c in &cond.generators {
            let pc = kf.eval(c, &kf.base_images());
            for bj in &basis.generators {
                let v = kf.mul(&pc, &kf.eval(bj, &images));
                assert!(v.iter().all(|e| e.is_polynomial()));
            }
        }
    }

    #[test]
    fn traces_and_duality() {
        let (tower, basis, cond) = example();
        let k = PrimeField::new(11).unwrap();
        let top = &tower.top().ring;
        let one = Polynomial::one(top);
        assert_eq!(trace(&one, basis, tower).unwrap(), RatFun::constant(k, 5));
        let w1sq = &basis.w[0] * &basis.w[0];
        assert!(trace(&w1sq, basis, tower).unwrap().is_zero());
        let w12 = &basis.w[0] * &basis.w[1];
        assert_eq!(trace(&w12, basis, tower).unwrap(), RatFun::from_poly(mono(k, 6, 5)));

        let kf = FunctionField::new(tower.curve()).unwrap();
        let images = phi_images(tower, &kf).unwrap();
        let pw: Vec<FfElem> = basis.w.iter().map(|w| kf.eval(w, &images)).collect();
        for i in 0..5 {
            for j in 0..5 {
                let mut wj = kf.zero();
                for (c, p) in cond.dual.coefficients[j].iter().zip(&pw) {
                    wj = kf.add(&wj, &kf.scale(p, c));
                }
                let tr = kf.trace(&kf.mul(&pw[i], &wj));
                let want = if i == j { RatFun::one(k) } else { RatFun::zero(k) };
                assert_eq!(tr, want, "({i},{j})");
            }
        }
    }

    #[test]
    fn fast_routes_agree_with_syzygies() {
        let (tower, basis, _) = example();
        let b = &basis.generators;
        assert_eq!(relations(b, tower).unwrap(), relations_by_syzygies(b, tower).unwrap());
        for i in 0..basis.len() {
            for j in i..basis.len() {
                let c = &basis.w[i] * &basis.w[j];
                assert_eq!(
                    coordinates(&c, basis, tower).unwrap(),
                    coordinates_by_syzygies(&c, basis, tower).unwrap()
                );
            }
        }
        // a tower with two extensions
        let r = Ring::plane(PrimeField::new(3).unwrap());
        let f = &Polynomial::var(&r, 1).pow(3) - &Polynomial::var(&r, 0).pow(5);
        let tower = normalize(&f, DEFAULT_LOOP_CAP).unwrap();
        let b = module_generators(&tower, 3);
        assert_eq!(relations(&b, &tower).unwrap(), relations_by_syzygies(&b, &tower).unwrap());
    }

    #[test]
    fn smooth_curve_has_power_basis_and_unit_conductor() {
        let r = Ring::plane(PrimeField::new(7).unwrap());
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let f = &(&y.pow(3) + &x.pow(3)) + &Polynomial::one(&r);
        let tower = normalize(&f, DEFAULT_LOOP_CAP).unwrap();
        let (basis, cond) = conductor(&tower, 3).unwrap();
        assert_eq!(basis.len(), 3);
        let mut g = cond.generators.clone();
        g.push(f.clone());
        assert!(Ideal::new(&r, g).is_unit());
    }

    #[test]
    fn line_is_trivial() {
        let r = Ring::plane(PrimeField::new(5).unwrap());
        let y = Polynomial::var(&r, 1);
        let tower = normalize(&y, DEFAULT_LOOP_CAP).unwrap();
        let (basis, cond) = conductor(&tower, 1).unwrap();
        assert_eq!(basis.w, vec![Polynomial::one(&r)]);
        assert_eq!(cond.generators, vec![Polynomial::one(&r)]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn module_trace_matches_power_basis_trace(
            terms in proptest::collection::vec((0u32..4, 0u32..5, 0i64..11), 1..5)
        ) {
            let (tower, basis, _) = example();
            let r = tower.base_ring().clone();
            let spec: Vec<(Vec<u32>, i64)> = terms.iter().map(|&(a, b, c)| (vec![a, b], c)).collect();
            let refs: Vec<(&[u32], i64)> = spec.iter().map(|(e, c)| (e.as_slice(), *c)).collect();
            let a = Polynomial::from_exponents(&r, &refs);
            let kf = FunctionField::new(tower.curve()).unwrap();
            let want = kf.trace(&kf.eval(&a, &kf.base_images()));
            let got = trace(&a.embed(&tower.top().ring).unwrap(), basis, tower).unwrap();
            prop_assert_eq!(got, want);
        }
    }
}
