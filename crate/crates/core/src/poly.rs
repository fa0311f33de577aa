//! Sparse multivariate polynomials over F_p.
//!
//! A [`Polynomial`] stores its nonzero terms sorted by a fixed internal
//! order (descending exponent vectors). Monomial orders are applied where
//! they are needed: leading terms, division, rendering.

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// Upper bound on the number of ring variables.
pub const MAX_VARS: usize = 24;

/// Exponent vector with cached total degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    e: [u16; MAX_VARS],
    deg: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            e: [0; MAX_VARS],
            deg: 0,
        }
    }

    pub fn var(i: usize, k: u16) -> Self {
        let mut m = Monomial::one();
        m.e[i] = k;
        m.deg = k as u32;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Monomial::one();
        for (i, &x) in exps.iter().enumerate() {
            m.e[i] = u16::try_from(x).expect("exponent overflow");
            m.deg += x;
        }
        m
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.e[i] as u32
    }

    pub fn exponents(&self, n: usize) -> Vec<u32> {
        self.e[..n].iter().map(|&x| x as u32).collect()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    #[inline]
    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut r = *self;
        for i in 0..MAX_VARS {
            r.e[i] = r.e[i].checked_add(o.e[i]).expect("exponent overflow");
        }
        r.deg += o.deg;
        r
    }

    #[inline]
    pub fn divides(&self, o: &Monomial) -> bool {
        self.deg <= o.deg && (0..MAX_VARS).all(|i| self.e[i] <= o.e[i])
    }

    /// `o / self`, assuming divisibility.
    #[inline]
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        let mut r = *o;
        for i in 0..MAX_VARS {
            r.e[i] -= self.e[i];
        }
        r.deg -= self.deg;
        r
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        let mut r = Monomial::one();
        for i in 0..MAX_VARS {
            r.e[i] = self.e[i].max(o.e[i]);
            r.deg += r.e[i] as u32;
        }
        r
    }

    pub fn gcd_is_one(&self, o: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.e[i] == 0 || o.e[i] == 0)
    }

    fn with_exp(&self, i: usize, k: u32) -> Monomial {
        let mut r = *self;
        r.deg = r.deg - r.e[i] as u32 + k;
        r.e[i] = u16::try_from(k).expect("exponent overflow");
        r
    }

    /// Lexicographic comparison on raw exponent vectors (variable 0 first).
    /// This is the internal storage order, not a user-facing monomial order.
    #[inline]
    fn raw_cmp(&self, o: &Monomial) -> Ordering {
        self.e.cmp(&o.e)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = (0..MAX_VARS).rev().find(|&i| self.e[i] != 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.e[..last])
    }
}

/// Total degree, with a sentinel for the zero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }

    /// True when the degree is −∞ or at most `d`.
    pub fn at_most(self, d: i64) -> bool {
        match self {
            Degree::NegInfinity => true,
            Degree::Finite(k) => (k as i64) <= d,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    Grlex,
    Grevlex,
    /// Elimination order: the first `k` variables of the precedence list
    /// are compared by grevlex first, ties broken by grevlex on the rest.
    Block(usize),
}

/// A monomial order together with a variable precedence list
/// (`prec[0]` is the most significant variable).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub prec: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, prec: Vec<usize>) -> Self {
        MonomialOrder { kind, prec }
    }

    /// Order with precedence x_0 ≻ x_1 ≻ … ≻ x_{n-1}.
    pub fn natural(kind: OrderKind, n: usize) -> Self {
        MonomialOrder {
            kind,
            prec: (0..n).collect(),
        }
    }

    /// Order with precedence x_{n-1} ≻ … ≻ x_0, so later variables rank higher.
    pub fn reversed(kind: OrderKind, n: usize) -> Self {
        MonomialOrder {
            kind,
            prec: (0..n).rev().collect(),
        }
    }

    pub fn lex(prec: Vec<usize>) -> Self {
        Self::new(OrderKind::Lex, prec)
    }

    pub fn grlex(prec: Vec<usize>) -> Self {
        Self::new(OrderKind::Grlex, prec)
    }

    pub fn grevlex(prec: Vec<usize>) -> Self {
        Self::new(OrderKind::Grevlex, prec)
    }

    pub fn is_graded(&self) -> bool {
        matches!(self.kind, OrderKind::Grlex | OrderKind::Grevlex)
    }

    fn lex_on(&self, vars: &[usize], a: &Monomial, b: &Monomial) -> Ordering {
        for &v in vars {
            match a.e[v].cmp(&b.e[v]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    fn revlex_on(&self, vars: &[usize], a: &Monomial, b: &Monomial) -> Ordering {
        for &v in vars.iter().rev() {
            match a.e[v].cmp(&b.e[v]) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    }

    fn deg_on(vars: &[usize], a: &Monomial) -> u32 {
        vars.iter().map(|&v| a.e[v] as u32).sum()
    }

    /// Compares two monomials; `Greater` means `a ≻ b`.
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => self.lex_on(&self.prec, a, b),
            OrderKind::Grlex => a
                .deg
                .cmp(&b.deg)
                .then_with(|| self.lex_on(&self.prec, a, b)),
            OrderKind::Grevlex => a
                .deg
                .cmp(&b.deg)
                .then_with(|| self.revlex_on(&self.prec, a, b)),
            OrderKind::Block(k) => {
                let (hi, lo) = self.prec.split_at(k.min(self.prec.len()));
                Self::deg_on(hi, a)
                    .cmp(&Self::deg_on(hi, b))
                    .then_with(|| self.revlex_on(hi, a, b))
                    .then_with(|| Self::deg_on(lo, a).cmp(&Self::deg_on(lo, b)))
                    .then_with(|| self.revlex_on(lo, a, b))
            }
        }
    }
}

/// Variable names plus field: the ambient ring of a polynomial.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    pub field: PrimeField,
    pub vars: Vec<String>,
}

impl Ring {
    pub fn new(field: PrimeField, vars: &[&str]) -> Arc<Ring> {
        assert!(vars.len() <= MAX_VARS);
        Arc::new(Ring {
            field,
            vars: vars.iter().map(|s| s.to_string()).collect(),
        })
    }

    /// The bivariate ring k[x, y].
    pub fn plane(field: PrimeField) -> Arc<Ring> {
        Ring::new(field, &["x", "y"])
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// A new ring with `names` appended after the existing variables.
    pub fn extend(&self, names: &[String]) -> Result<Arc<Ring>> {
        if self.vars.len() + names.len() > MAX_VARS {
            return Err(Error::internal(
                "poly",
                format!("more than {MAX_VARS} variables"),
            ));
        }
        let mut vars = self.vars.clone();
        vars.extend(names.iter().cloned());
        Ok(Arc::new(Ring {
            field: self.field,
            vars,
        }))
    }

    /// True when `self` is `other` or a prefix extension of it.
    pub fn contains_ring(&self, other: &Ring) -> bool {
        self.field == other.field
            && self.vars.len() >= other.vars.len()
            && self.vars[..other.vars.len()] == other.vars[..]
    }
}

/// Sparse polynomial over F_p with canonical term storage.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, u32)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, o: &Self) -> bool {
        self.same_ring(o) && self.terms == o.terms
    }
}
impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: i64) -> Self {
        let v = ring.field.from_i64(c);
        Self::from_terms(ring, vec![(Monomial::one(), v)])
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, 1)
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        assert!(i < ring.nvars());
        Self::from_terms(ring, vec![(Monomial::var(i, 1), 1)])
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: u32) -> Self {
        Self::from_terms(ring, vec![(m, c)])
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges duplicates,
    /// drops zero coefficients.
    pub fn from_terms(ring: &Arc<Ring>, mut terms: Vec<(Monomial, u32)>) -> Self {
        let k = ring.field;
        terms.sort_by(|a, b| b.0.raw_cmp(&a.0));
        let mut out: Vec<(Monomial, u32)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = c % k.p();
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = k.add(last.1, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Polynomial {
            ring: ring.clone(),
            terms: out,
        }
    }

    /// Terms given as (exponent vector, signed coefficient).
    pub fn from_exponents(ring: &Arc<Ring>, terms: &[(&[u32], i64)]) -> Self {
        let k = ring.field;
        Self::from_terms(
            ring,
            terms
                .iter()
                .map(|(e, c)| (Monomial::from_exponents(e), k.from_i64(*c)))
                .collect(),
        )
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> PrimeField {
        self.ring.field
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, u32)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.0.is_one())
    }

    pub fn constant_value(&self) -> Option<u32> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(m, c)] if m.is_one() => Some(*c),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn same_ring(&self, o: &Polynomial) -> bool {
        Arc::ptr_eq(&self.ring, &o.ring) || *self.ring == *o.ring
    }

    fn check(&self, o: &Polynomial) -> Result<()> {
        if self.same_ring(o) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms
            .binary_search_by(|t| m.raw_cmp(&t.0))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .iter()
            .map(|t| t.0.deg)
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// Degree in variable `i`, or `None` for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.iter().map(|t| t.0.exp(i)).max()
    }

    /// Indices of variables that occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.iter().any(|t| t.0.exp(i) > 0))
            .collect()
    }

    /// (LM, LC) under `ord`.
    pub fn leading_data(&self, ord: &MonomialOrder) -> Result<(Monomial, FieldElement)> {
        let (m, c) = self.leading_term(ord).ok_or(Error::ZeroLeadingTerm)?;
        Ok((m, self.field().elem(c as i64)))
    }

    pub fn leading_term(&self, ord: &MonomialOrder) -> Option<(Monomial, u32)> {
        self.terms
            .iter()
            .copied()
            .max_by(|a, b| ord.cmp(&a.0, &b.0))
    }

    pub fn leading_monomial(&self, ord: &MonomialOrder) -> Option<Monomial> {
        self.leading_term(ord).map(|t| t.0)
    }

    /// Terms sorted descending under `ord`.
    pub fn sorted_terms(&self, ord: &MonomialOrder) -> Vec<(Monomial, u32)> {
        let mut t = self.terms.clone();
        t.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        t
    }

    pub fn try_add(&self, o: &Polynomial) -> Result<Polynomial> {
        self.check(o)?;
        Ok(self.merge(o, false))
    }

    pub fn try_sub(&self, o: &Polynomial) -> Result<Polynomial> {
        self.check(o)?;
        Ok(self.merge(o, true))
    }

    pub fn try_mul(&self, o: &Polynomial) -> Result<Polynomial> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    fn merge(&self, o: &Polynomial, negate: bool) -> Polynomial {
        let k = self.field();
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let ord = if i == self.terms.len() {
                Ordering::Less
            } else if j == o.terms.len() {
                Ordering::Greater
            } else {
                self.terms[i].0.raw_cmp(&o.terms[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i]);
                    i += 1;
                }
                Ordering::Less => {
                    let c = o.terms[j].1;
                    out.push((o.terms[j].0, if negate { k.neg(c) } else { c }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        k.sub(self.terms[i].1, o.terms[j].1)
                    } else {
                        k.add(self.terms[i].1, o.terms[j].1)
                    };
                    if c != 0 {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    fn mul_unchecked(&self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let k = self.field();
        let mut acc: HashMap<Monomial, u32> = HashMap::with_capacity(self.len() * o.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let e = acc.entry(m1.mul(m2)).or_insert(0);
                *e = k.add(*e, k.mul(*c1, *c2));
            }
        }
        Polynomial::from_terms(&self.ring, acc.into_iter().collect())
    }

    pub fn neg(&self) -> Polynomial {
        let k = self.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|&(m, c)| (m, k.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let k = self.field();
        let c = c % k.p();
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|&(m, a)| (m, k.mul(a, c))).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: u32) -> Polynomial {
        let k = self.field();
        if c.is_multiple_of(k.p()) {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|&(a, b)| (a.mul(m), k.mul(b, c)))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Makes the leading coefficient under `ord` equal to 1.
    pub fn monic(&self, ord: &MonomialOrder) -> Polynomial {
        match self.leading_term(ord) {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field().inv(c)),
        }
    }

    /// `times`-fold partial derivative with respect to variable `var`.
    pub fn partial_derivative(&self, var: usize, times: u32) -> Polynomial {
        let k = self.field();
        let mut out = Vec::new();
        for &(m, c) in &self.terms {
            let e = m.exp(var);
            if e < times {
                continue;
            }
            // falling factorial e (e-1) … (e-times+1) mod p
            let mut f = 1u32;
            for j in 0..times {
                f = k.mul(f, k.from_u64((e - j) as u64));
                if f == 0 {
                    break;
                }
            }
            if f != 0 {
                out.push((m.with_exp(var, e - times), k.mul(c, f)));
            }
        }
        Polynomial::from_terms(&self.ring, out)
    }

    /// g with g^p = self; every exponent must be divisible by p.
    pub fn pth_root(&self) -> Result<Polynomial> {
        let p = self.field().p();
        let n = self.ring.nvars();
        let mut out = Vec::with_capacity(self.len());
        for &(m, c) in &self.terms {
            let mut e = Vec::with_capacity(n);
            for i in 0..n {
                let x = m.exp(i);
                if x % p != 0 {
                    return Err(Error::NotPthPower);
                }
                e.push(x / p);
            }
            out.push((Monomial::from_exponents(&e), c));
        }
        Ok(Polynomial::from_terms(&self.ring, out))
    }

    /// x'^n · f(1/x', y'/x') for bivariate f with deg f ≤ n.
    pub fn chart_substitute(&self, n: u32) -> Result<Polynomial> {
        if self.ring.nvars() != 2 {
            return Err(Error::internal("poly", "chart substitution needs two variables"));
        }
        if let Degree::Finite(d) = self.total_degree() {
            if d > n {
                return Err(Error::Degree {
                    got: d as i64,
                    bound: n as i64,
                });
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|&(m, c)| {
                let (i, j) = (m.exp(0), m.exp(1));
                (Monomial::from_exponents(&[n - i - j, j]), c)
            })
            .collect();
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    /// The same polynomial viewed in a ring that extends this one.
    pub fn embed(&self, ring: &Arc<Ring>) -> Result<Polynomial> {
        if !ring.contains_ring(&self.ring) {
            return Err(Error::RingMismatch);
        }
        Ok(Polynomial {
            ring: ring.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Moves the polynomial into a smaller ring with the given prefix of
    /// variables; fails if a dropped variable occurs.
    pub fn restrict(&self, ring: &Arc<Ring>) -> Result<Polynomial> {
        if !self.ring.contains_ring(ring) {
            return Err(Error::RingMismatch);
        }
        let n = ring.nvars();
        for t in &self.terms {
            if (n..self.ring.nvars()).any(|i| t.0.exp(i) > 0) {
                return Err(Error::RingMismatch);
            }
        }
        Ok(Polynomial {
            ring: ring.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Substitutes `images[i]` for variable i. Images share one target ring.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.nvars());
        let target = images[0].ring.clone();
        let mut cache: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut acc = Polynomial::zero(&target);
        for &(m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c as i64);
            for (i, img) in images.iter().enumerate() {
                let e = m.exp(i);
                if e == 0 {
                    continue;
                }
                let pw = cache
                    .entry((i, e))
                    .or_insert_with(|| img.pow(e as u64))
                    .clone();
                t = &t * &pw;
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Coefficients with respect to variable `var`: `out[j]` multiplies var^j.
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial> {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let mut buckets: Vec<Vec<(Monomial, u32)>> = vec![Vec::new(); d + 1];
        for &(m, c) in &self.terms {
            let e = m.exp(var) as usize;
            buckets[e].push((m.with_exp(var, 0), c));
        }
        buckets
            .into_iter()
            .map(|b| Polynomial::from_terms(&self.ring, b))
            .collect()
    }

    /// Remainder of division by `f`, viewed as polynomials in `var` with `f`
    /// monic in `var`.
    pub fn rem_monic_in(&self, var: usize, f: &Polynomial) -> Result<Polynomial> {
        self.check(f)?;
        let fc = f.coefficients_in(var);
        let n = fc.len() - 1;
        if n == 0 || fc[n].constant_value() != Some(1) {
            return Err(Error::internal("poly", "divisor is not monic in the variable"));
        }
        let mut r = self.coefficients_in(var);
        let yv = |k: usize| Monomial::var(var, k as u16);
        while r.len() > n {
            let top = r.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = r.len() - n;
            for (j, cj) in fc.iter().enumerate().take(n) {
                if !cj.is_zero() {
                    r[shift + j] = &r[shift + j] - &(&top * cj);
                }
            }
        }
        let mut acc = Polynomial::zero(&self.ring);
        for (j, c) in r.into_iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &c.mul_term(&yv(j), 1);
            }
        }
        Ok(acc)
    }

    /// Exact quotient `self / d` (fails with `NotInIdeal` if not exact).
    pub fn div_exact(&self, d: &Polynomial) -> Result<Polynomial> {
        self.check(d)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ord = MonomialOrder::natural(OrderKind::Grevlex, self.ring.nvars());
        let (lm, lc) = d.leading_term(&ord).unwrap();
        let inv = self.field().inv(lc);
        let mut rem = self.clone();
        let mut q = Polynomial::zero(&self.ring);
        while let Some((m, c)) = rem.leading_term(&ord) {
            if !lm.divides(&m) {
                return Err(Error::NotInIdeal);
            }
            let t = lm.quotient_of(&m);
            let cf = self.field().mul(c, inv);
            q = &q + &Polynomial::monomial(&self.ring, t, cf);
            rem = &rem - &d.mul_term(&t, cf);
        }
        Ok(q)
    }

    /// Evaluates at a point of F_p^n.
    pub fn eval(&self, point: &[u32]) -> u32 {
        let k = self.field();
        let mut acc = 0;
        for &(m, c) in &self.terms {
            let mut t = c;
            for (i, &v) in point.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    t = k.mul(t, k.pow(v, e as u64));
                }
            }
            acc = k.add(acc, t);
        }
        acc
    }

    /// Canonical rendering: terms in grlex-descending order with variables
    /// ranked by ring position.
    pub fn render(&self) -> String {
        self.render_with(&MonomialOrder::natural(OrderKind::Grlex, self.ring.nvars()))
    }

    pub fn render_with(&self, ord: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let n = self.ring.nvars();
        let parts: Vec<String> = self
            .sorted_terms(ord)
            .into_iter()
            .map(|(m, c)| {
                let mut factors = Vec::new();
                for i in 0..n {
                    match m.exp(i) {
                        0 => {}
                        1 => factors.push(self.ring.vars[i].clone()),
                        e => factors.push(format!("{}^{}", self.ring.vars[i], e)),
                    }
                }
                if factors.is_empty() {
                    c.to_string()
                } else if c == 1 {
                    factors.join("*")
                } else {
                    format!("{}*{}", c, factors.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self.render())
    }
}

// Operator forms panic on a ring mismatch; the `try_*` methods return errors.
impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        self.try_add(o).expect("ring mismatch in +")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self.try_sub(o).expect("ring mismatch in -")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        self.try_mul(o).expect("ring mismatch in *")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(p: u64) -> Arc<Ring> {
        Ring::plane(PrimeField::new(p).unwrap())
    }

    fn xy(r: &Arc<Ring>) -> (Polynomial, Polynomial) {
        (Polynomial::var(r, 0), Polynomial::var(r, 1))
    }

    fn curve(r: &Arc<Ring>) -> Polynomial {
        let (x, y) = xy(r);
        &(&x.pow(5) + &y.pow(5)) + &(&x * &y)
    }

    #[test]
    fn arithmetic_examples() {
        let r = ring(11);
        let f = curve(&r);
        assert!((&f - &f).is_zero());
        let r2 = ring(2);
        let (x, y) = xy(&r2);
        let s = &x + &y;
        assert_eq!(&s * &s, &x.pow(2) + &y.pow(2));
        let (x, y) = xy(&r);
        let g = &y.pow(4).scale(5) + &x;
        assert_eq!(&x * &g, &(&x * &y.pow(4)).scale(5) + &x.pow(2));
    }

    #[test]
    fn leading_data_examples() {
        let r = ring(11);
        let f = curve(&r);
        let (m, c) = f.leading_data(&MonomialOrder::grlex(vec![0, 1])).unwrap();
        assert_eq!(m, Monomial::from_exponents(&[5, 0]));
        assert_eq!(c.value(), 1);
        let (x, y) = xy(&r);
        let g = &y.pow(4).scale(5) + &x;
        let (m, c) = g.leading_data(&MonomialOrder::lex(vec![1, 0])).unwrap();
        assert_eq!(m, Monomial::from_exponents(&[0, 4]));
        assert_eq!(c.value(), 5);
        let seven = Polynomial::constant(&r, 7);
        let (m, c) = seven.leading_data(&MonomialOrder::grevlex(vec![0, 1])).unwrap();
        assert!(m.is_one());
        assert_eq!(c.value(), 7);
        assert!(Polynomial::zero(&r)
            .leading_data(&MonomialOrder::grevlex(vec![0, 1]))
            .is_err());
    }

    #[test]
    fn derivative_examples() {
        let r = ring(11);
        let (x, y) = xy(&r);
        assert_eq!(curve(&r).partial_derivative(1, 1), &y.pow(4).scale(5) + &x);
        assert!(y.pow(11).partial_derivative(1, 1).is_zero());
        let r2 = ring(2);
        let (x, y) = xy(&r2);
        let f = &(&(&x.pow(5) + &y.pow(5)) + &(&x + &y).pow(3)) + &(&x * &y);
        let phi = &x.pow(2) + &x;
        let d = (&f * &phi).partial_derivative(0, 1).partial_derivative(1, 1);
        assert_eq!(d, &y.pow(4) + &y.pow(2));
    }

    #[test]
    fn pth_root_examples() {
        let r2 = ring(2);
        let (x, y) = xy(&r2);
        assert_eq!((&y.pow(4) + &y.pow(2)).pth_root().unwrap(), &y.pow(2) + &y);
        let r3 = ring(3);
        let (x3, _) = xy(&r3);
        assert_eq!(x3.pow(3).pth_root().unwrap(), x3);
        let f = &(&x.pow(2) * &y.pow(2)) + &x.pow(4);
        let g = f.pth_root().unwrap();
        assert_eq!(g, &(&x * &y) + &x.pow(2));
        assert_eq!(g.pow(2), f);
        assert!(matches!(x.pth_root(), Err(Error::NotPthPower)));
    }

    #[test]
    fn chart_examples() {
        let r = ring(11);
        let (x, y) = xy(&r);
        let fp = curve(&r).chart_substitute(5).unwrap();
        let expect = &(&Polynomial::one(&r) + &y.pow(5)) + &(&x.pow(3) * &y);
        assert_eq!(fp, expect);
        assert_eq!(Polynomial::one(&r).chart_substitute(2).unwrap(), x.pow(2));
        assert_eq!(x.pow(2).chart_substitute(2).unwrap(), Polynomial::one(&r));
        assert!(matches!(
            curve(&r).chart_substitute(4),
            Err(Error::Degree { .. })
        ));
    }

    #[test]
    fn degree_examples() {
        let r = ring(11);
        let (x, y) = xy(&r);
        assert_eq!(curve(&r).total_degree(), Degree::Finite(5));
        assert_eq!(Polynomial::zero(&r).total_degree(), Degree::NegInfinity);
        assert_eq!((&x * &y.pow(3)).total_degree(), Degree::Finite(4));
    }

    #[test]
    fn rem_monic() {
        let r = ring(11);
        let (x, y) = xy(&r);
        let f = curve(&r);
        let g = &y.pow(7) + &x;
        let rem = g.rem_monic_in(1, &f).unwrap();
        assert!(rem.degree_in(1).unwrap() < 5);
        // g - rem must be a multiple of f
        let q = (&g - &rem).div_exact(&f).unwrap();
        assert_eq!(&(&q * &f) + &rem, g);
    }

    #[test]
    fn render_examples() {
        let r = ring(11);
        assert_eq!(curve(&r).render(), "x^5 + y^5 + x*y");
        let (x, y) = xy(&r);
        assert_eq!((&y.pow(4).scale(5) + &x).render(), "5*y^4 + x");
        assert_eq!(Polynomial::zero(&r).render(), "0");
    }

    fn small_poly(r: &Arc<Ring>, coeffs: &[(u8, u8, u8)]) -> Polynomial {
        Polynomial::from_terms(
            r,
            coeffs
                .iter()
                .map(|&(i, j, c)| (Monomial::from_exponents(&[i as u32, j as u32]), c as u32))
                .collect(),
        )
    }

    fn arb_terms() -> impl Strategy<Value = Vec<(u8, u8, u8)>> {
        prop::collection::vec((0u8..4, 0u8..4, 0u8..11), 0..6)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn pth_root_recovers(pi in 0usize..4, t in arb_terms()) {
            let p = [2u64, 3, 5, 11][pi];
            let r = ring(p);
            let g = small_poly(&r, &t);
            let f = g.pow(p);
            prop_assert_eq!(f.pth_root().unwrap(), g);
        }

        #[test]
        fn derivative_linear_and_leibniz(pi in 0usize..4, a in arb_terms(), b in arb_terms(), v in 0usize..2) {
            let r = ring([2u64, 3, 5, 11][pi]);
            let f = small_poly(&r, &a);
            let g = small_poly(&r, &b);
            prop_assert_eq!((&f + &g).partial_derivative(v, 1),
                &f.partial_derivative(v, 1) + &g.partial_derivative(v, 1));
            prop_assert_eq!((&f * &g).partial_derivative(v, 1),
                &(&f.partial_derivative(v, 1) * &g) + &(&f * &g.partial_derivative(v, 1)));
        }

        #[test]
        fn chart_involution(pi in 0usize..4, a in arb_terms()) {
            let r = ring([2u64, 3, 5, 11][pi]);
            let f = small_poly(&r, &a);
            if let Some(n) = f.total_degree().finite() {
                let divisible_by_x = f.terms().iter().all(|t| t.0.exp(0) > 0);
                if !divisible_by_x {
                    let twice = f.chart_substitute(n).unwrap().chart_substitute(n).unwrap();
                    prop_assert_eq!(twice, f);
                }
            }
        }

        #[test]
        fn order_axioms(k in 0usize..4, a in prop::collection::vec(0u32..5, 3),
                        b in prop::collection::vec(0u32..5, 3),
                        c in prop::collection::vec(0u32..5, 3)) {
            let kind = [OrderKind::Lex, OrderKind::Grlex, OrderKind::Grevlex, OrderKind::Block(1)][k];
            let ord = MonomialOrder::new(kind, vec![2, 0, 1]);
            let (ma, mb, mc) = (Monomial::from_exponents(&a), Monomial::from_exponents(&b), Monomial::from_exponents(&c));
            let ab = ord.cmp(&ma, &mb);
            prop_assert_eq!(ab == Ordering::Equal, ma == mb);
            prop_assert_eq!(ab, ord.cmp(&mb, &ma).reverse());
            prop_assert_eq!(ord.cmp(&ma.mul(&mc), &mb.mul(&mc)), ab);
            prop_assert_ne!(ord.cmp(&ma, &Monomial::one()), Ordering::Less);
            if ab == Ordering::Greater && ord.cmp(&mb, &mc) == Ordering::Greater {
                prop_assert_eq!(ord.cmp(&ma, &mc), Ordering::Greater);
            }
        }
    }
}
