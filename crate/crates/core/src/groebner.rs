//! Gröbner bases of polynomial ideals: division, Buchberger's algorithm,
//! colon ideals, zero-dimensional radicals and Krull dimension.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::UniPoly;
use crate::poly::{Monomial, MonomialOrder, OrderKind, Polynomial, Ring};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex};

pub(crate) type Terms = Vec<(Monomial, u32)>;

/// Terms of `f` sorted descending under `ord`.
pub(crate) fn ordered(f: &Polynomial, ord: &MonomialOrder) -> Terms {
    f.sorted_terms(ord)
}

/// `a - c·m·b` for term lists sorted descending under `ord`.
pub(crate) fn sub_mul(
    a: &[(Monomial, u32)],
    c: u32,
    m: &Monomial,
    b: &[(Monomial, u32)],
    ord: &MonomialOrder,
    k: PrimeField,
) -> Terms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let bm = if j < b.len() { Some(b[j].0.mul(m)) } else { None };
        let o = match (i < a.len(), bm) {
            (false, _) => Ordering::Less,
            (true, None) => Ordering::Greater,
            (true, Some(ref bm)) => ord.cmp(&a[i].0, bm),
        };
        match o {
            Ordering::Greater => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Less => {
                out.push((bm.unwrap(), k.neg(k.mul(c, b[j].1))));
                j += 1;
            }
            Ordering::Equal => {
                let v = k.sub(a[i].1, k.mul(c, b[j].1));
                if v != 0 {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub(crate) fn make_monic(f: &mut Terms, k: PrimeField) {
    if let Some(&(_, c)) = f.first() {
        if c != 1 {
            let inv = k.inv(c);
            for t in f.iter_mut() {
                t.1 = k.mul(t.1, inv);
            }
        }
    }
}

/// Full reduction of `f` by `g` (each nonempty, sorted under `ord`).
/// Divisors are tried in list order.
pub(crate) fn reduce_terms(f: Terms, g: &[Terms], ord: &MonomialOrder, k: PrimeField) -> Terms {
    reduce_by(f, g, None, ord, k)
}

/// As [`reduce_terms`], restricted to the indices in `only` when given.
fn reduce_by(f: Terms, g: &[Terms], only: Option<&[usize]>, ord: &MonomialOrder, k: PrimeField) -> Terms {
    let find = |m: &Monomial| -> Option<usize> {
        match only {
            Some(ix) => ix.iter().copied().find(|&i| g[i][0].0.divides(m)),
            None => g.iter().position(|gi| gi[0].0.divides(m)),
        }
    };
    let mut p = f;
    let mut r: Terms = Vec::new();
    let mut start = 0;
    while start < p.len() {
        let (m, c) = p[start];
        match find(&m) {
            Some(i) => {
                let gi = &g[i];
                let q = gi[0].0.quotient_of(&m);
                let coef = k.mul(c, k.inv(gi[0].1));
                p = sub_mul(&p[start..], coef, &q, gi, ord, k);
                start = 0;
            }
            None => {
                r.push((m, c));
                start += 1;
            }
        }
    }
    r
}

fn to_poly(ring: &Arc<Ring>, t: Terms) -> Polynomial {
    Polynomial::from_terms(ring, t)
}

/// Remainder of `f` on division by `g` under `ord`.
pub fn normal_form(f: &Polynomial, g: &[Polynomial], ord: &MonomialOrder) -> Polynomial {
    let k = f.field();
    let gs: Vec<Terms> = g
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| ordered(x, ord))
        .collect();
    to_poly(f.ring(), reduce_terms(ordered(f, ord), &gs, ord, k))
}

fn spoly(a: &Terms, b: &Terms, ord: &MonomialOrder, k: PrimeField) -> Terms {
    let l = a[0].0.lcm(&b[0].0);
    let ma = a[0].0.quotient_of(&l);
    let mb = b[0].0.quotient_of(&l);
    // a, b are monic
    let sa: Terms = a.iter().map(|&(m, c)| (m.mul(&ma), c)).collect();
    sub_mul(&sa, 1, &mb, b, ord, k)
}

/// Reduced, monic basis from a Gröbner basis; sorted by LM descending.
fn interreduce(mut g: Vec<Terms>, ord: &MonomialOrder, k: PrimeField) -> Vec<Terms> {
    g.retain(|x| !x.is_empty());
    for x in g.iter_mut() {
        make_monic(x, k);
    }
    g.sort_by(|a, b| ord.cmp(&a[0].0, &b[0].0));
    // minimal: drop elements whose LM is divisible by another kept LM
    let mut minimal: Vec<Terms> = Vec::new();
    for x in g {
        if !minimal.iter().any(|y| y[0].0.divides(&x[0].0)) {
            minimal.push(x);
        }
    }
    // a leading monomial never divides a smaller term, so no self-exclusion
    let mut out: Vec<Terms> = (0..minimal.len())
        .map(|i| {
            let mut r = vec![minimal[i][0]];
            r.extend(reduce_terms(minimal[i][1..].to_vec(), &minimal, ord, k));
            r
        })
        .collect();
    out.sort_by(|a, b| ord.cmp(&b[0].0, &a[0].0));
    out
}

#[derive(Clone, Copy)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn sugar_of(f: &[(Monomial, u32)]) -> u32 {
    f.iter().map(|t| t.0.degree()).max().unwrap_or(0)
}

/// Buchberger on term lists with the sugar strategy and the Gebauer–Möller
/// criteria; returns the reduced basis.
pub(crate) fn buchberger_terms(gens: Vec<Terms>, ord: &MonomialOrder, k: PrimeField) -> Vec<Terms> {
    let unit = || vec![vec![(Monomial::one(), 1)]];
    let mut g: Vec<Terms> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut queue: BTreeMap<u32, Vec<Pair>> = BTreeMap::new();

    // Gebauer–Möller update; returns the pairs of the current sugar bucket to drop
    let insert = |mut h: Terms,
                  sug: u32,
                  g: &mut Vec<Terms>,
                  sugars: &mut Vec<u32>,
                  active: &mut Vec<usize>,
                  queue: &mut BTreeMap<u32, Vec<Pair>>,
                  current: &mut Vec<Pair>| {
        make_monic(&mut h, k);
        let n = g.len();
        let lt = h[0].0;
        let keep_old = |pr: &Pair, g: &Vec<Terms>| {
            !lt.divides(&pr.lcm) || g[pr.i][0].0.lcm(&lt) == pr.lcm || g[pr.j][0].0.lcm(&lt) == pr.lcm
        };
        for bucket in queue.values_mut() {
            bucket.retain(|pr| keep_old(pr, g));
        }
        queue.retain(|_, b| !b.is_empty());
        current.retain(|pr| keep_old(pr, g));
        let mut cand: Vec<Pair> = active.iter().map(|&i| Pair { i, j: n, lcm: g[i][0].0.lcm(&lt) }).collect();
        cand.sort_by(|a, b| a.lcm.degree().cmp(&b.lcm.degree()).then(a.i.cmp(&b.i)));
        let mut kept: Vec<Pair> = Vec::new();
        for c in cand {
            if !kept.iter().any(|d| d.lcm.divides(&c.lcm)) {
                kept.push(c);
            }
        }
        for pr in kept {
            if g[pr.i][0].0.gcd_is_one(&lt) {
                continue;
            }
            let s = (sugars[pr.i] + g[pr.i][0].0.quotient_of(&pr.lcm).degree())
                .max(sug + lt.quotient_of(&pr.lcm).degree());
            queue.entry(s).or_default().push(pr);
        }
        active.retain(|&i| !lt.divides(&g[i][0].0));
        active.push(n);
        g.push(h);
        sugars.push(sug);
    };

    let mut gens = gens;
    gens.sort_by_key(|f| sugar_of(f));
    let mut none = Vec::new();
    for f in gens {
        let s = sugar_of(&f);
        let r = reduce_by(f, &g, Some(&active), ord, k);
        if !r.is_empty() {
            if r[0].0.is_one() {
                return unit();
            }
            insert(r, s, &mut g, &mut sugars, &mut active, &mut queue, &mut none);
        }
    }
    while let Some((&s, _)) = queue.iter().next() {
        let mut bucket = queue.remove(&s).unwrap();
        bucket.sort_by(|a, b| ord.cmp(&b.lcm, &a.lcm));
        while let Some(pr) = bucket.pop() {
            let sp = spoly(&g[pr.i], &g[pr.j], ord, k);
            let r = reduce_by(sp, &g, Some(&active), ord, k);
            if r.is_empty() {
                continue;
            }
            if r[0].0.is_one() {
                return unit();
            }
            insert(r, s, &mut g, &mut sugars, &mut active, &mut queue, &mut bucket);
            if let Some(extra) = queue.remove(&s) {
                bucket.extend(extra);
                bucket.sort_by(|a, b| ord.cmp(&b.lcm, &a.lcm));
            }
        }
    }
    let basis: Vec<Terms> = active.into_iter().map(|i| std::mem::take(&mut g[i])).collect();
    interreduce(basis, ord, k)
}

/// Reduced Gröbner basis (monic, sorted by leading monomial descending).
pub fn buchberger(gens: &[Polynomial], ord: &MonomialOrder) -> Vec<Polynomial> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let ring = first.ring().clone();
    let k = first.field();
    let ts = gens
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| ordered(f, ord))
        .collect();
    buchberger_terms(ts, ord, k)
        .into_iter()
        .map(|t| to_poly(&ring, t))
        .collect()
}

/// True when every S-polynomial of `g` reduces to zero.
pub fn is_groebner(g: &[Polynomial], ord: &MonomialOrder) -> bool {
    let gs: Vec<Terms> = g.iter().filter(|x| !x.is_zero()).map(|x| ordered(x, ord)).collect();
    let Some(k) = g.first().map(|x| x.field()) else {
        return true;
    };
    let mut monic = gs.clone();
    for x in monic.iter_mut() {
        make_monic(x, k);
    }
    for i in 0..monic.len() {
        for j in i + 1..monic.len() {
            let s = spoly(&monic[i], &monic[j], ord, k);
            if !reduce_terms(s, &monic, ord, k).is_empty() {
                return false;
            }
        }
    }
    true
}

/// An ideal given by generators, with a per-order cache of reduced bases.
pub struct Ideal {
    ring: Arc<Ring>,
    gens: Vec<Polynomial>,
    cache: Mutex<HashMap<MonomialOrder, Arc<Vec<Polynomial>>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.gens.iter()).finish()
    }
}

impl Ideal {
    pub fn new(ring: &Arc<Ring>, gens: Vec<Polynomial>) -> Self {
        Ideal {
            ring: ring.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn groebner(&self, ord: &MonomialOrder) -> Arc<Vec<Polynomial>> {
        if let Some(g) = self.cache.lock().unwrap().get(ord) {
            return g.clone();
        }
        let g = Arc::new(buchberger(&self.gens, ord));
        self.cache
            .lock()
            .unwrap()
            .entry(ord.clone())
            .or_insert(g)
            .clone()
    }

    pub fn default_order(&self) -> MonomialOrder {
        MonomialOrder::natural(OrderKind::Grevlex, self.ring.nvars())
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        let ord = self.default_order();
        normal_form(f, &self.groebner(&ord), &ord).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn is_unit(&self) -> bool {
        let g = self.groebner(&self.default_order());
        g.len() == 1 && g[0].is_constant()
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, g)
    }

    /// Equality of ideals via reduced bases.
    pub fn same_ideal(&self, other: &Ideal) -> bool {
        let ord = self.default_order();
        *self.groebner(&ord) == *other.groebner(&ord)
    }
}

/// Elimination of the variable appended last: returns generators of
/// `I ∩ k[original vars]`.
fn eliminate_last(gens: Vec<Polynomial>, ring: &Arc<Ring>) -> Result<Vec<Polynomial>> {
    let n = ring.nvars();
    let big = gens[0].ring().clone();
    let mut prec = vec![n];
    prec.extend(0..n);
    let ord = MonomialOrder::new(OrderKind::Block(1), prec);
    let g = buchberger(&gens, &ord);
    g.into_iter()
        .filter(|f| f.degree_in(n) == Some(0))
        .map(|f| {
            debug_assert!(Arc::ptr_eq(f.ring(), &big));
            f.restrict(ring)
        })
        .collect()
}

/// Generators of `I ∩ J`.
pub fn intersect(i: &[Polynomial], j: &[Polynomial], ring: &Arc<Ring>) -> Result<Vec<Polynomial>> {
    if i.is_empty() || j.is_empty() {
        return Ok(Vec::new());
    }
    let big = ring.extend(&["_t".to_string()])?;
    let t = Polynomial::var(&big, ring.nvars());
    let one_minus_t = &Polynomial::one(&big) - &t;
    let mut gens = Vec::new();
    for f in i {
        gens.push(&t * &f.embed(&big)?);
    }
    for f in j {
        gens.push(&one_minus_t * &f.embed(&big)?);
    }
    eliminate_last(gens, ring)
}

/// Generators of `I : ⟨g⟩`.
pub fn quotient_by_element(i: &[Polynomial], g: &Polynomial) -> Result<Vec<Polynomial>> {
    let ring = g.ring().clone();
    if g.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if i.is_empty() {
        return Ok(Vec::new());
    }
    let inter = intersect(i, std::slice::from_ref(g), &ring)?;
    inter.iter().map(|h| h.div_exact(g)).collect()
}

/// `I : J` as a reduced Gröbner basis under `ord`.
pub fn ideal_quotient(i: &Ideal, j: &Ideal, ord: &MonomialOrder) -> Result<Ideal> {
    let ring = i.ring().clone();
    let jg = j.generators();
    if jg.is_empty() {
        return Err(Error::internal("groebner", "quotient by the zero ideal"));
    }
    let mut acc: Option<Vec<Polynomial>> = None;
    for g in jg {
        let q = quotient_by_element(i.generators(), g)?;
        acc = Some(match acc {
            None => q,
            Some(prev) => intersect(&prev, &q, &ring)?,
        });
    }
    let gb = buchberger(&acc.unwrap_or_default(), ord);
    let out = Ideal::new(&ring, gb.clone());
    out.cache.lock().unwrap().insert(ord.clone(), Arc::new(gb));
    Ok(out)
}

/// Krull dimension of S/I via maximal independent sets modulo LM(I).
pub fn krull_dimension(i: &Ideal) -> Result<usize> {
    let n = i.ring().nvars();
    let ord = i.default_order();
    let g = i.groebner(&ord);
    if g.len() == 1 && g[0].is_constant() {
        return Err(Error::Dimension("unit ideal has no dimension".into()));
    }
    let lms: Vec<Vec<usize>> = g
        .iter()
        .map(|f| f.leading_monomial(&ord).unwrap())
        .map(|m| (0..n).filter(|&v| m.exp(v) > 0).collect())
        .collect();
    if n > 20 {
        return Err(Error::internal("groebner", "too many variables for dimension search"));
    }
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let independent = lms
            .iter()
            .all(|vs| !vs.iter().all(|&v| mask & (1 << v) != 0));
        if independent {
            best = size;
        }
    }
    Ok(best)
}

fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let ring = m[0][0].ring().clone();
    let mut acc = Polynomial::zero(&ring);
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != c)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let t = &m[0][c] * &determinant(&minor);
        acc = if c % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// `I` plus the (n−r)-minors of its Jacobian matrix, r = dim S/I.
pub fn jacobian_ideal(i: &Ideal) -> Result<Ideal> {
    let n = i.ring().nvars();
    let r = krull_dimension(i)?;
    let c = n - r;
    let gens = i.generators();
    let jac: Vec<Vec<Polynomial>> = gens
        .iter()
        .map(|f| (0..n).map(|v| f.partial_derivative(v, 1)).collect())
        .collect();
    let mut out = gens.to_vec();
    if c == 0 {
        out.push(Polynomial::one(i.ring()));
        return Ok(Ideal::new(i.ring(), out));
    }
    let mut seen = HashSet::new();
    for rows in combinations(gens.len(), c) {
        for cols in combinations(n, c) {
            let sub: Vec<Vec<Polynomial>> = rows
                .iter()
                .map(|&a| cols.iter().map(|&b| jac[a][b].clone()).collect())
                .collect();
            let d = determinant(&sub);
            if !d.is_zero() && seen.insert(d.clone()) {
                out.push(d);
            }
        }
    }
    Ok(Ideal::new(i.ring(), out))
}

/// Standard monomials of a zero-dimensional ideal given its GB leading monomials.
fn standard_monomials(lms: &[Monomial], n: usize) -> Result<Vec<Monomial>> {
    for v in 0..n {
        let pure = lms
            .iter()
            .any(|m| m.exp(v) > 0 && (0..n).all(|w| w == v || m.exp(w) == 0));
        if !pure {
            return Err(Error::Dimension("ideal is not zero-dimensional".into()));
        }
    }
    let mut out = Vec::new();
    let mut stack = vec![Monomial::one()];
    let mut seen = HashSet::new();
    while let Some(m) = stack.pop() {
        if !seen.insert(m) || lms.iter().any(|l| l.divides(&m)) {
            continue;
        }
        out.push(m);
        for v in 0..n {
            stack.push(m.mul(&Monomial::var(v, 1)));
        }
    }
    Ok(out)
}

/// Minimal polynomial of variable `v` over the zero-dimensional quotient.
fn minimal_polynomial(
    v: usize,
    gb: &[Terms],
    basis: &[Monomial],
    ord: &MonomialOrder,
    k: PrimeField,
) -> UniPoly {
    let index: HashMap<Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let dim = basis.len();
    // rows: reduced echelon vectors, each tagged with a combination of powers
    let mut rows: Vec<(Vec<u32>, Vec<u32>, usize)> = Vec::new(); // (vec, combo, pivot)
    for e in 0..=dim {
        let nf = reduce_terms(vec![(Monomial::var(v, e as u16), 1)], gb, ord, k);
        let mut vec = vec![0u32; dim];
        for (m, c) in nf {
            vec[index[&m]] = c;
        }
        let mut combo = vec![0u32; dim + 1];
        combo[e] = 1;
        for (rv, rc, piv) in &rows {
            let c = vec[*piv];
            if c != 0 {
                for i in 0..dim {
                    vec[i] = k.sub(vec[i], k.mul(c, rv[i]));
                }
                for i in 0..=dim {
                    combo[i] = k.sub(combo[i], k.mul(c, rc[i]));
                }
            }
        }
        match vec.iter().position(|&x| x != 0) {
            None => return UniPoly::new(k, combo).monic(),
            Some(piv) => {
                let inv = k.inv(vec[piv]);
                for x in vec.iter_mut() {
                    *x = k.mul(*x, inv);
                }
                for x in combo.iter_mut() {
                    *x = k.mul(*x, inv);
                }
                rows.push((vec, combo, piv));
            }
        }
    }
    unreachable!("dependency must appear within dim+1 powers")
}

/// Product of the distinct irreducible factors of `f` over F_p.
pub fn squarefree_part(f: &UniPoly) -> UniPoly {
    if f.degree() <= Some(0) || f.is_zero() {
        return f.monic();
    }
    let d = f.derivative();
    if d.is_zero() {
        return squarefree_part(&f.pth_root());
    }
    let g = f.gcd(&d);
    let w = f.div_exact(&g);
    if g.degree() == Some(0) {
        return w.monic();
    }
    w.lcm(&squarefree_part(&g))
}

fn unipoly_in_var(u: &UniPoly, ring: &Arc<Ring>, v: usize) -> Polynomial {
    let terms = u
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(e, &c)| (Monomial::var(v, e as u16), c))
        .collect();
    Polynomial::from_terms(ring, terms)
}

/// Radical of a zero-dimensional ideal (Seidenberg's method).
pub fn radical_zero_dim(i: &Ideal) -> Result<Ideal> {
    let ring = i.ring().clone();
    let n = ring.nvars();
    let k = ring.field;
    let ord = i.default_order();
    let mut gens: Vec<Polynomial> = i.generators().to_vec();
    for _round in 0..4 {
        let gb = buchberger(&gens, &ord);
        if gb.len() == 1 && gb[0].is_constant() {
            return Ok(Ideal::new(&ring, gb));
        }
        let gbt: Vec<Terms> = gb.iter().map(|f| ordered(f, &ord)).collect();
        let lms: Vec<Monomial> = gbt.iter().map(|t| t[0].0).collect();
        let basis = standard_monomials(&lms, n)?;
        let mut changed = false;
        let mut extra = Vec::new();
        for v in 0..n {
            let m = minimal_polynomial(v, &gbt, &basis, &ord, k);
            let s = squarefree_part(&m);
            if s.degree() != m.degree() {
                changed = true;
                extra.push(unipoly_in_var(&s, &ring, v));
            }
        }
        if !changed {
            let out = Ideal::new(&ring, gb.clone());
            out.cache.lock().unwrap().insert(ord.clone(), Arc::new(gb));
            return Ok(out);
        }
        gens = gb;
        gens.extend(extra);
    }
    Err(Error::internal("groebner", "radical did not stabilize"))
}

/// Squarefree parts of the minimal polynomials of all variables over a
/// zero-dimensional ideal, each as a univariate element of the ring.
pub fn squarefree_eliminants(i: &Ideal) -> Result<Vec<Polynomial>> {
    let ring = i.ring().clone();
    let k = ring.field;
    let ord = i.default_order();
    let gb: Vec<Terms> = i.groebner(&ord).iter().map(|f| ordered(f, &ord)).collect();
    if gb.len() == 1 && gb[0][0].0.is_one() {
        return Ok(vec![Polynomial::one(&ring)]);
    }
    let lms: Vec<Monomial> = gb.iter().map(|t| t[0].0).collect();
    let basis = standard_monomials(&lms, ring.nvars())?;
    Ok((0..ring.nvars())
        .map(|v| unipoly_in_var(&squarefree_part(&minimal_polynomial(v, &gb, &basis, &ord, k)), &ring, v))
        .collect())
}

/// Arithmetic in a reduced zero-dimensional quotient S/P, a finite product
/// of fields.
struct Artinian {
    ring: Arc<Ring>,
    gb: Vec<Terms>,
    ord: MonomialOrder,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl Artinian {
    fn new(p: &Ideal) -> Result<Self> {
        let ord = p.default_order();
        let gb: Vec<Terms> = p.groebner(&ord).iter().map(|f| ordered(f, &ord)).collect();
        let lms: Vec<Monomial> = gb.iter().map(|t| t[0].0).collect();
        let basis = standard_monomials(&lms, p.ring().nvars())?;
        let index = basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        Ok(Artinian {
            ring: p.ring().clone(),
            gb,
            ord,
            basis,
            index,
        })
    }

    fn nf(&self, f: &Polynomial) -> Polynomial {
        let t = reduce_terms(ordered(f, &self.ord), &self.gb, &self.ord, self.ring.field);
        Polynomial::from_terms(&self.ring, t)
    }

    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.nf(&(a * b))
    }

    fn vector(&self, a: &Polynomial) -> Vec<u32> {
        let mut v = vec![0u32; self.basis.len()];
        for &(m, c) in a.terms() {
            v[self.index[&m]] = c;
        }
        v
    }

    /// For a ≠ 0 returns (e, r): e the idempotent with ⟨a⟩ = ⟨e⟩ and r the
    /// inverse of a in the component e.
    fn idempotent(&self, a: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let k = self.ring.field;
        let a2 = self.mul(a, a);
        let rows: Vec<Vec<u32>> = self
            .basis
            .iter()
            .map(|m| self.vector(&self.nf(&a2.mul_term(m, 1))))
            .collect();
        let r = crate::linalg::solve_in_row_span(&rows, &self.vector(a), k)
            .ok_or_else(|| Error::internal("groebner", "quotient algebra is not reduced"))?;
        let r = Polynomial::from_terms(
            &self.ring,
            r.iter()
                .zip(&self.basis)
                .filter(|(c, _)| **c != 0)
                .map(|(&c, &m)| (m, c))
                .collect(),
        );
        let e = self.mul(&r, a);
        let inv = self.mul(&r, &e);
        Ok((e, inv))
    }

    /// Idempotent generating the ideal of c×c minors of `m` inside the
    /// component `ctx`.
    fn fitting(&self, m: Vec<Vec<Polynomial>>, c: usize, ctx: Polynomial) -> Result<Polynomial> {
        let zero = Polynomial::zero(&self.ring);
        if c == 0 {
            return Ok(ctx);
        }
        if ctx.is_zero() || m.len() < c || m.first().map_or(0, |r| r.len()) < c {
            return Ok(zero);
        }
        let m: Vec<Vec<Polynomial>> = m
            .iter()
            .map(|row| row.iter().map(|x| self.mul(x, &ctx)).collect())
            .collect();
        let Some((pi, pj)) = m
            .iter()
            .enumerate()
            .find_map(|(i, row)| row.iter().position(|x| !x.is_zero()).map(|j| (i, j)))
        else {
            return Ok(zero);
        };
        let (e, inv) = self.idempotent(&m[pi][pj])?;
        // where the pivot is a unit, eliminate its row and column
        let schur: Vec<Vec<Polynomial>> = (0..m.len())
            .filter(|&i| i != pi)
            .map(|i| {
                let f = self.mul(&m[i][pj], &inv);
                (0..m[i].len())
                    .filter(|&j| j != pj)
                    .map(|j| self.nf(&(&(&m[i][j] - &(&f * &m[pi][j])) * &e)))
                    .collect()
            })
            .collect();
        let on = self.fitting(schur, c - 1, e.clone())?;
        let rest = &ctx - &e;
        let off = self.fitting(m, c, rest)?;
        Ok(self.nf(&(&on + &off)))
    }
}

/// Radical of I + Jac(I) for an ideal I of pure codimension `codim`, given
/// polynomials `cover` whose common zeros on V(I) are finite and contain the
/// singular locus of V(I).
///
/// The Jacobian condition is evaluated in the reduced finite algebra
/// S/rad(I + cover), where the ideal of c×c minors is found by pivoting
/// rather than by enumerating minors.
pub fn radical_jacobian_over(i: &Ideal, cover: &[Polynomial], codim: usize) -> Result<Ideal> {
    let ring = i.ring().clone();
    let mut gens = i.generators().to_vec();
    gens.extend(cover.iter().cloned());
    let p = radical_zero_dim(&Ideal::new(&ring, gens))?;
    if p.is_unit() {
        return Ok(p);
    }
    let alg = Artinian::new(&p)?;
    let n = ring.nvars();
    let jac: Vec<Vec<Polynomial>> = i
        .generators()
        .iter()
        .map(|f| (0..n).map(|v| alg.nf(&f.partial_derivative(v, 1))).collect())
        .collect();
    let e = alg.fitting(jac, codim, Polynomial::one(&ring))?;
    let mut out = p.generators().to_vec();
    out.push(e);
    radical_zero_dim(&Ideal::new(&ring, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn setup(p: u64) -> (Arc<Ring>, Polynomial, Polynomial) {
        let r = Ring::plane(PrimeField::new(p).unwrap());
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        (r, x, y)
    }

    fn curve(x: &Polynomial, y: &Polynomial) -> Polynomial {
        &(&x.pow(5) + &y.pow(5)) + &(x * y)
    }

    fn lex_yx() -> MonomialOrder {
        MonomialOrder::lex(vec![1, 0])
    }

    #[test]
    fn normal_form_examples() {
        let (r, x, y) = setup(11);
        let f = curve(&x, &y);
        let grlex = MonomialOrder::grlex(vec![0, 1]);
        assert!(normal_form(&f, &[x.clone(), y.clone()], &grlex).is_zero());
        let g = &y.pow(4) + &x;
        assert_eq!(normal_form(&g, std::slice::from_ref(&f), &grlex), g);
        assert!(normal_form(&f, &[Polynomial::one(&r)], &grlex).is_zero());
    }

    #[test]
    fn buchberger_examples() {
        let (r, x, y) = setup(11);
        assert_eq!(buchberger(&[x.clone(), y.clone()], &lex_yx()), vec![y.clone(), x.clone()]);
        let f = curve(&x, &y);
        assert_eq!(
            buchberger(&[f.clone(), Polynomial::one(&r)], &lex_yx()),
            vec![Polynomial::one(&r)]
        );
        let jac = vec![f.clone(), f.partial_derivative(1, 1), f.partial_derivative(0, 1)];
        let g = buchberger(&jac, &lex_yx());
        assert!(is_groebner(&g, &lex_yx()));
        let rad = radical_zero_dim(&Ideal::new(&r, jac)).unwrap();
        assert_eq!(buchberger(rad.generators(), &lex_yx()), vec![y, x]);
    }

    #[test]
    fn jacobian_examples() {
        let (r, x, y) = setup(11);
        let f = curve(&x, &y);
        let j = jacobian_ideal(&Ideal::new(&r, vec![f.clone()])).unwrap();
        let expect = Ideal::new(
            &r,
            vec![f.clone(), &y.pow(4).scale(5) + &x, &y + &x.pow(4).scale(5)],
        );
        assert!(j.same_ideal(&expect));
        assert!(jacobian_ideal(&Ideal::new(&r, vec![y.clone()])).unwrap().is_unit());
    }

    #[test]
    fn quotient_examples() {
        let (r, x, y) = setup(11);
        let f = curve(&x, &y);
        let i = Ideal::new(&r, vec![f.clone()]);
        let j = Ideal::new(&r, vec![x.clone(), y.clone()]);
        let aj_i = Ideal::new(&r, vec![&y * &x, &y * &y, f.clone()]);
        let q = ideal_quotient(&aj_i, &j, &lex_yx()).unwrap();
        assert_eq!(q.generators(), &[y.clone(), x.pow(4)]);
        let q1 = ideal_quotient(&i, &Ideal::new(&r, vec![Polynomial::one(&r)]), &lex_yx()).unwrap();
        assert!(q1.same_ideal(&i));
        let q2 = ideal_quotient(
            &Ideal::new(&r, vec![x.pow(2)]),
            &Ideal::new(&r, vec![x.clone()]),
            &lex_yx(),
        )
        .unwrap();
        assert_eq!(q2.generators(), std::slice::from_ref(&x));
    }

    #[test]
    fn radical_examples() {
        let (r, x, y) = setup(11);
        let rad = radical_zero_dim(&Ideal::new(&r, vec![x.pow(2), y.clone()])).unwrap();
        assert!(rad.same_ideal(&Ideal::new(&r, vec![x.clone(), y.clone()])));
        let (r5, x5, y5) = setup(5);
        let i = Ideal::new(&r5, vec![&x5.pow(3) - &x5, &y5 - &x5.pow(2)]);
        assert!(radical_zero_dim(&i).unwrap().same_ideal(&i));
        // char-p case: (x^2 + 1)^p has zero derivative
        let (r3, x3, y3) = setup(3);
        let m = (&x3.pow(2) + &Polynomial::one(&r3)).pow(3);
        let rad = radical_zero_dim(&Ideal::new(&r3, vec![m, y3.pow(2)])).unwrap();
        assert!(rad.same_ideal(&Ideal::new(
            &r3,
            vec![&x3.pow(2) + &Polynomial::one(&r3), y3]
        )));
        assert!(radical_zero_dim(&Ideal::new(&r, vec![x])).is_err());
    }

    #[test]
    fn dimension_examples() {
        let (r, x, y) = setup(11);
        assert_eq!(krull_dimension(&Ideal::new(&r, vec![curve(&x, &y)])).unwrap(), 1);
        assert_eq!(krull_dimension(&Ideal::new(&r, vec![x, y])).unwrap(), 0);
        assert_eq!(krull_dimension(&Ideal::new(&r, vec![])).unwrap(), 2);
        assert!(krull_dimension(&Ideal::new(&r, vec![Polynomial::one(&r)])).is_err());
    }

    fn arb_poly(r: &Arc<Ring>, t: &[(u8, u8, u8)]) -> Polynomial {
        Polynomial::from_terms(
            r,
            t.iter()
                .map(|&(i, j, c)| (Monomial::from_exponents(&[i as u32, j as u32]), c as u32))
                .collect(),
        )
    }

    fn terms() -> impl Strategy<Value = Vec<(u8, u8, u8)>> {
        prop::collection::vec((0u8..3, 0u8..3, 1u8..11), 1..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn groebner_properties(pi in 0usize..4, a in terms(), b in terms(), h1 in terms(), h2 in terms(), oi in 0usize..3) {
            let (r, _, _) = setup([2u64, 3, 5, 11][pi]);
            let ord = [MonomialOrder::lex(vec![1, 0]), MonomialOrder::grlex(vec![0, 1]), MonomialOrder::grevlex(vec![0, 1])][oi].clone();
            let f1 = arb_poly(&r, &a);
            let f2 = arb_poly(&r, &b);
            prop_assume!(!f1.is_zero() && !f2.is_zero());
            let g = buchberger(&[f1.clone(), f2.clone()], &ord);
            prop_assert!(is_groebner(&g, &ord));
            // shuffled input gives the same reduced basis
            prop_assert_eq!(&g, &buchberger(&[f2.clone(), f1.clone()], &ord));
            let comb = &(&arb_poly(&r, &h1) * &f1) + &(&arb_poly(&r, &h2) * &f2);
            prop_assert!(normal_form(&comb, &g, &ord).is_zero());
            prop_assert!(normal_form(&f1, &g, &ord).is_zero());
        }

        #[test]
        fn colon_property(pi in 0usize..4, a in terms(), b in terms(), c in terms()) {
            let (r, _, _) = setup([2u64, 3, 5, 11][pi]);
            let i = Ideal::new(&r, vec![arb_poly(&r, &a), arb_poly(&r, &b)]);
            let jg = arb_poly(&r, &c);
            prop_assume!(!jg.is_zero() && !i.generators().is_empty());
            let j = Ideal::new(&r, vec![jg.clone()]);
            let q = ideal_quotient(&i, &j, &MonomialOrder::grevlex(vec![0, 1])).unwrap();
            for g in q.generators() {
                prop_assert!(i.contains(&(g * &jg)));
            }
            for g in i.generators() {
                prop_assert!(q.contains(g));
            }
        }
    }
}
