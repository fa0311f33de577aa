//! Normalization of the coordinate ring k[X,Y]/⟨F⟩ by repeated ring
//! extensions A ⊂ Hom(J, J), producing a tower of presentations.

use crate::error::{Error, Result};
use crate::groebner::{
    buchberger, ideal_quotient, jacobian_ideal, radical_jacobian_over, radical_zero_dim,
    squarefree_eliminants, Ideal,
};
use crate::modgb::{lift_modulo, syzygy_modulo, ModuleOrder};
use crate::poly::{MonomialOrder, OrderKind, Polynomial, Ring};
use std::sync::Arc;

pub const DEFAULT_LOOP_CAP: usize = 64;

/// Lex order with later variables ranked higher (T ≻ Y ≻ X).
pub fn level_order(ring: &Ring) -> MonomialOrder {
    MonomialOrder::reversed(OrderKind::Lex, ring.nvars())
}

/// Data of one extension S_{i-1}/I_{i-1} ⊂ S_i/I_i.
#[derive(Clone, Debug)]
pub struct Extension {
    /// Reduced basis of the test ideal J in S_{i-1}.
    pub test_ideal: Vec<Polynomial>,
    /// Non-zerodivisor a ∈ J \ I.
    pub a: Polynomial,
    /// Generators u_0 = a, u_1, …, u_s of (aJ + I) : J.
    pub u: Vec<Polynomial>,
    /// ξ[i][j] (1 ≤ i ≤ j ≤ s) listed row by row: coefficients ξ_0..ξ_s.
    pub xi: Vec<((usize, usize), Vec<Polynomial>)>,
    /// Generators (η_0, …, η_s) of syz_I(u_0, …, u_s).
    pub eta: Vec<Vec<Polynomial>>,
    /// Names of the new variables T_{i,1..s}.
    pub new_vars: Vec<String>,
}

/// One level of the tower: S_i and generators of I_i.
#[derive(Clone, Debug)]
pub struct Level {
    pub ring: Arc<Ring>,
    pub gens: Vec<Polynomial>,
    /// How this level was obtained from the previous one (None at level 0).
    pub extension: Option<Extension>,
}

/// Result of one normalization step.
#[derive(Clone, Debug)]
pub enum Step {
    Done {
        test_ideal: Vec<Polynomial>,
        a: Option<Polynomial>,
    },
    Extend(Level),
}

/// The chain A_0 ⊂ A_1 ⊂ … ⊂ A_n with A_n normal.
#[derive(Clone, Debug)]
pub struct RingTower {
    pub levels: Vec<Level>,
    /// Test pair (J, a) of the final, terminating loop.
    pub final_test: (Vec<Polynomial>, Option<Polynomial>),
}

impl RingTower {
    pub fn top(&self) -> &Level {
        self.levels.last().unwrap()
    }

    pub fn base_ring(&self) -> &Arc<Ring> {
        &self.levels[0].ring
    }

    pub fn curve(&self) -> &Polynomial {
        &self.levels[0].gens[0]
    }

    /// Variable indices added at each level ≥ 1.
    pub fn level_vars(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for w in self.levels.windows(2) {
            out.push((w[0].ring.nvars()..w[1].ring.nvars()).collect());
        }
        out
    }

    /// Number of loops run, counting the final terminating test.
    pub fn loops(&self) -> usize {
        self.levels.len()
    }
}

/// One pass of the normality test and, if needed, the ring extension.
pub fn normalization_step(ring: &Arc<Ring>, gens: &[Polynomial], level: usize) -> Result<Step> {
    normalization_step_over(ring, gens, level, None)
}

/// As [`normalization_step`]; when `cover` is given (polynomials of a
/// smaller ring cutting out a finite set containing the image of the
/// singular locus), the radical Jacobian is computed over that finite set.
pub fn normalization_step_over(
    ring: &Arc<Ring>,
    gens: &[Polynomial],
    level: usize,
    cover: Option<&[Polynomial]>,
) -> Result<Step> {
    let k = ring.field;
    let ord = level_order(ring);
    let i = Ideal::new(ring, gens.to_vec());
    let j_rad = match cover {
        Some(c) => {
            let c: Vec<Polynomial> = c.iter().map(|p| p.embed(ring)).collect::<Result<_>>()?;
            radical_jacobian_over(&i, &c, ring.nvars() - 1)?
        }
        None => radical_zero_dim(&jacobian_ideal(&i)?)?,
    };
    let j = buchberger(j_rad.generators(), &ord);
    if j.len() == 1 && j[0].is_constant() {
        return Ok(Step::Done {
            test_ideal: j,
            a: None,
        });
    }
    let a = j
        .iter()
        .find(|g| !i.contains(g))
        .cloned()
        .ok_or_else(|| Error::internal("normalize", "no non-zerodivisor in the test ideal"))?;
    let mut aj_i: Vec<Polynomial> = j.iter().map(|g| &a * g).collect();
    aj_i.extend(gens.iter().cloned());
    let colon = ideal_quotient(
        &Ideal::new(ring, aj_i),
        &Ideal::new(ring, j.clone()),
        &ord,
    )?;
    let mut a_plus_i = vec![a.clone()];
    a_plus_i.extend(gens.iter().cloned());
    let a_plus_i = Ideal::new(ring, a_plus_i);
    let mut u = vec![a.clone()];
    u.extend(
        colon
            .generators()
            .iter()
            .filter(|g| !a_plus_i.contains(g))
            .cloned(),
    );
    if u.len() == 1 {
        return Ok(Step::Done {
            test_ideal: j,
            a: Some(a),
        });
    }
    let s = u.len() - 1;

    // ξ: u_i u_j ≡ Σ ξ_k (a u_k) mod I
    let divisors: Vec<Polynomial> = u.iter().map(|x| &a * x).collect();
    let lift_ord = ModuleOrder::pot(MonomialOrder::reversed(OrderKind::Grevlex, ring.nvars()), s + 1);
    let pairs: Vec<(usize, usize)> = (1..=s).flat_map(|ii| (ii..=s).map(move |jj| (ii, jj))).collect();
    let products: Vec<Polynomial> = pairs.iter().map(|&(ii, jj)| &u[ii] * &u[jj]).collect();
    let lifts = lift_modulo(&products, &divisors, gens, Some(&lift_ord))
        .map_err(|_| Error::internal("normalize", "product of colon generators outside aU + I"))?;
    let xi: Vec<((usize, usize), Vec<Polynomial>)> = pairs.into_iter().zip(lifts).collect();

    // η: generators of syz_I(u_0, …, u_s), dropping those that vanish mod I
    let syz = syzygy_modulo(&u, gens, Some(&ModuleOrder::top(lift_ord.blocks[0].base.clone(), s + 1)));
    let mut eta: Vec<Vec<Polynomial>> = Vec::new();
    for g in syz.generators {
        if g.coords.iter().all(|c| i.contains(c)) {
            continue;
        }
        // scale so that the last nonzero coordinate has leading coefficient 1
        let last = g.coords.iter().rposition(|c| !c.is_zero()).unwrap();
        let lc = g.coords[last].leading_term(&ord).unwrap().1;
        let inv = k.inv(lc);
        eta.push(g.coords.iter().map(|c| c.scale(inv)).collect());
    }

    let names: Vec<String> = (1..=s).map(|jj| format!("t{}_{}", level + 1, jj)).collect();
    let big = ring.extend(&names)?;
    let n0 = ring.nvars();
    let t = |idx: usize| -> Polynomial {
        if idx == 0 {
            Polynomial::one(&big)
        } else {
            Polynomial::var(&big, n0 + idx - 1)
        }
    };
    let emb = |p: &Polynomial| p.embed(&big).expect("ring extension");
    let big_ord = level_order(&big);

    let mut quad = Vec::new();
    for ((ii, jj), coeffs) in &xi {
        let mut g = &t(*ii) * &t(*jj);
        for (kk, c) in coeffs.iter().enumerate() {
            g = &g - &(&emb(c) * &t(kk));
        }
        quad.push(g);
    }
    let mut lin: Vec<Polynomial> = eta
        .iter()
        .map(|e| {
            e.iter()
                .enumerate()
                .fold(Polynomial::zero(&big), |acc, (nu, c)| &acc + &(&emb(c) * &t(nu)))
        })
        .collect();
    lin.sort_by(|p, q| {
        big_ord.cmp(
            &q.leading_monomial(&big_ord).unwrap(),
            &p.leading_monomial(&big_ord).unwrap(),
        )
    });
    let mut new_gens = quad;
    new_gens.extend(lin);
    new_gens.extend(gens.iter().map(emb));

    Ok(Step::Extend(Level {
        ring: big,
        gens: new_gens,
        extension: Some(Extension {
            test_ideal: j,
            a,
            u,
            xi,
            eta,
            new_vars: names,
        }),
    }))
}

/// Runs the normalization loop on ⟨F⟩ ⊂ k[x, y].
pub fn normalize(f: &Polynomial, loop_cap: usize) -> Result<RingTower> {
    let mut levels = vec![Level {
        ring: f.ring().clone(),
        gens: vec![f.clone()],
        extension: None,
    }];
    // the singular locus of every level lies over that of the curve
    let sing = Ideal::new(f.ring(), vec![f.clone(), f.partial_derivative(0, 1), f.partial_derivative(1, 1)]);
    let mut cover = radical_zero_dim(&sing)?.generators().to_vec();
    cover.extend(squarefree_eliminants(&sing)?);
    for _ in 0..loop_cap {
        let cur = levels.last().unwrap();
        match normalization_step_over(&cur.ring, &cur.gens, levels.len() - 1, Some(&cover))? {
            Step::Done { test_ideal, a } => {
                return Ok(RingTower {
                    levels,
                    final_test: (test_ideal, a),
                });
            }
            Step::Extend(next) => levels.push(next),
        }
    }
    Err(Error::IterationLimit {
        stage: "normalize",
        cap: loop_cap,
    })
}

/// The ordered generating set {t_1 ⋯ t_n y^j} of the top ring over k[x],
/// as polynomials in the top ring, in descending order.
pub fn module_generators(tower: &RingTower, n: usize) -> Vec<Polynomial> {
    let top = tower.top().ring.clone();
    let mut prods = vec![Polynomial::one(&top)];
    for vars in tower.level_vars() {
        // choices in descending order: t_{i,1}, …, t_{i,s}, 1
        let mut choices: Vec<Polynomial> = vars.iter().map(|&v| Polynomial::var(&top, v)).collect();
        choices.push(Polynomial::one(&top));
        let mut next = Vec::new();
        for p in &prods {
            for c in &choices {
                next.push(p * c);
            }
        }
        prods = next;
    }
    let y = Polynomial::var(&top, 1);
    let mut out = Vec::with_capacity(prods.len() * n);
    for p in &prods {
        for j in (0..n).rev() {
            out.push(p * &y.pow(j as u64));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::groebner::normal_form;

    fn curve() -> (Arc<Ring>, Polynomial, Polynomial, Polynomial) {
        let r = Ring::plane(PrimeField::new(11).unwrap());
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let f = &(&x.pow(5) + &y.pow(5)) + &(&x * &y);
        (r, x, y, f)
    }

    #[test]
    fn first_loop_matches_worked_example() {
        let (r, x, y, f) = curve();
        let Step::Extend(l1) = normalization_step(&r, std::slice::from_ref(&f), 0).unwrap() else {
            panic!("expected an extension");
        };
        let e = l1.extension.as_ref().unwrap();
        assert_eq!(e.test_ideal, vec![y.clone(), x.clone()]);
        assert_eq!(e.a, y);
        assert_eq!(e.u, vec![y.clone(), x.pow(4)]);
        assert_eq!(e.xi[0].1, vec![(&x.pow(3) * &y.pow(3)).neg(), Polynomial::constant(&r, -1)]);
        assert_eq!(
            e.eta,
            vec![vec![&y.pow(4) + &x, x.clone()], vec![x.pow(4).scale(10), y.clone()]]
        );
        let s1 = l1.ring.clone();
        let (xx, yy, t) = (
            Polynomial::var(&s1, 0),
            Polynomial::var(&s1, 1),
            Polynomial::var(&s1, 2),
        );
        let expect = vec![
            &(&t.pow(2) + &t) + &(&yy.pow(3) * &xx.pow(3)),
            &(&yy * &t) + &xx.pow(4).scale(10),
            &(&(&xx * &t) + &yy.pow(4)) + &xx,
            f.embed(&s1).unwrap(),
        ];
        assert_eq!(l1.gens, expect);
        assert!(matches!(
            normalization_step(&l1.ring, &l1.gens, 1).unwrap(),
            Step::Done { .. }
        ));
    }

    #[test]
    fn tower_invariants() {
        let (_, _, _, f) = curve();
        let tower = normalize(&f, DEFAULT_LOOP_CAP).unwrap();
        assert_eq!(tower.levels.len(), 2);
        for w in tower.levels.windows(2) {
            let (prev, cur) = (&w[0], &w[1]);
            let e = cur.extension.as_ref().unwrap();
            let ord = level_order(&prev.ring);
            let gb = buchberger(&prev.gens, &ord);
            for ((i, j), xi) in &e.xi {
                let mut v = &e.u[*i] * &e.u[*j];
                for (kk, c) in xi.iter().enumerate() {
                    v = &v - &(&(&e.a * c) * &e.u[kk]);
                }
                assert!(normal_form(&v, &gb, &ord).is_zero());
            }
            // t ↦ u/a: clearing a^2 in each generator lands in I_{i-1}
            let n0 = prev.ring.nvars();
            for g in &cur.gens {
                let mut acc = Polynomial::zero(&prev.ring);
                for &(m, c) in g.terms() {
                    let tdeg: u32 = (n0..cur.ring.nvars()).map(|v| m.exp(v)).sum();
                    assert!(tdeg <= 2);
                    let mut term = Polynomial::monomial(
                        &prev.ring,
                        crate::poly::Monomial::from_exponents(&m.exponents(n0)),
                        c,
                    );
                    for v in n0..cur.ring.nvars() {
                        term = &term * &e.u[v - n0 + 1].pow(m.exp(v) as u64);
                    }
                    term = &term * &e.a.pow((2 - tdeg) as u64);
                    acc = &acc + &term;
                }
                assert!(normal_form(&acc, &gb, &ord).is_zero());
            }
        }
        assert_eq!(module_generators(&tower, 5).len(), 10);
    }

    #[test]
    fn smooth_inputs_are_done() {
        let (r, x, y, _) = curve();
        let t = normalize(&(&y - &x.pow(2)), 4).unwrap();
        assert_eq!(t.levels.len(), 1);
        let t = normalize(&(&y - &x.pow(3)), 4).unwrap();
        let b = module_generators(&t, 3);
        assert_eq!(b, vec![y.pow(2), y.clone(), Polynomial::one(&r)]);
    }

    #[test]
    fn covered_radical_matches_full_jacobian() {
        use crate::groebner::{jacobian_ideal, radical_jacobian_over, radical_zero_dim, Ideal};
        let (_, _, _, f) = curve();
        let r2 = Ring::plane(PrimeField::new(3).unwrap());
        let (x, y) = (Polynomial::var(&r2, 0), Polynomial::var(&r2, 1));
        let cusp = &y.pow(3) - &x.pow(5);
        for f in [f, cusp] {
            let tower = normalize(&f, DEFAULT_LOOP_CAP).unwrap();
            let sing = Ideal::new(f.ring(), vec![f.clone(), f.partial_derivative(0, 1), f.partial_derivative(1, 1)]);
            let mut cover = radical_zero_dim(&sing).unwrap().generators().to_vec();
            cover.extend(squarefree_eliminants(&sing).unwrap());
            for lv in &tower.levels {
                let i = Ideal::new(&lv.ring, lv.gens.clone());
                let c: Vec<Polynomial> = cover.iter().map(|p| p.embed(&lv.ring).unwrap()).collect();
                let fast = radical_jacobian_over(&i, &c, lv.ring.nvars() - 1).unwrap();
                let full = radical_zero_dim(&jacobian_ideal(&i).unwrap()).unwrap();
                assert!(fast.same_ideal(&full));
            }
        }
    }
}
