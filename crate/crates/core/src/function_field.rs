//! Arithmetic in K' = k(x)[y]/(F) for F monic in y.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::{RatFun, UniPoly};
use crate::poly::{Monomial, Polynomial, Ring};
use std::collections::HashMap;
use std::sync::Arc;

/// Polynomial in y over k(x), coefficients little-endian and trimmed.
type YPoly = Vec<RatFun>;

fn trim(mut a: YPoly) -> YPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn ymul(a: &[RatFun], b: &[RatFun], k: PrimeField) -> YPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![RatFun::zero(k); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    trim(out)
}

fn ysub(a: &[RatFun], b: &[RatFun], k: PrimeField) -> YPoly {
    let n = a.len().max(b.len());
    let z = RatFun::zero(k);
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z).sub(b.get(i).unwrap_or(&z)))
            .collect(),
    )
}

fn ydivrem(a: &[RatFun], d: &[RatFun], k: PrimeField) -> (YPoly, YPoly) {
    let dd = d.len() - 1;
    let mut r: YPoly = a.to_vec();
    if r.len() <= dd {
        return (Vec::new(), trim(r));
    }
    let inv = d[dd].inv().expect("nonzero leading coefficient");
    let mut q = vec![RatFun::zero(k); r.len() - dd];
    for i in (dd..r.len()).rev() {
        if r[i].is_zero() {
            continue;
        }
        let c = r[i].mul(&inv);
        for (j, dc) in d.iter().enumerate() {
            r[i - dd + j] = r[i - dd + j].sub(&c.mul(dc));
        }
        q[i - dd] = c;
    }
    (trim(q), trim(r))
}

/// The field K' = k(x)[y]/(F), with F monic of degree N in y.
#[derive(Clone, Debug)]
pub struct FunctionField {
    k: PrimeField,
    modulus: YPoly,
}

/// Element of K' as N coordinates on the power basis 1, y, …, y^{N-1}.
pub type FfElem = Vec<RatFun>;

/// Converts a polynomial in variable 0 only to a univariate polynomial.
pub fn to_unipoly(p: &Polynomial) -> Result<UniPoly> {
    let k = p.field();
    let d = p.degree_in(0).unwrap_or(0) as usize;
    let mut c = vec![0u32; d + 1];
    for (m, v) in p.terms() {
        if m.degree() != m.exp(0) {
            return Err(Error::internal("function_field", "coefficient is not in k[x]"));
        }
        c[m.exp(0) as usize] = *v;
    }
    Ok(UniPoly::new(k, c))
}

/// The univariate polynomial u(x) as an element of a multivariate ring.
pub fn from_unipoly(u: &UniPoly, ring: &Arc<Ring>) -> Polynomial {
    Polynomial::from_terms(
        ring,
        u.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| (Monomial::var(0, e as u16), c))
            .collect(),
    )
}

impl FunctionField {
    /// `f` is a polynomial in k[x, y] (variables 0 and 1), monic in y.
    pub fn new(f: &Polynomial) -> Result<Self> {
        let k = f.field();
        let coeffs = f.coefficients_in(1);
        let modulus: YPoly = coeffs
            .iter()
            .map(|c| to_unipoly(c).map(RatFun::from_poly))
            .collect::<Result<_>>()?;
        if modulus.len() < 2 || !modulus.last().unwrap().num().is_one() {
            return Err(Error::Validation("curve is not monic in y".into()));
        }
        Ok(FunctionField { k, modulus })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn field(&self) -> PrimeField {
        self.k
    }

    fn pad(&self, mut a: YPoly) -> FfElem {
        a.resize(self.degree(), RatFun::zero(self.k));
        a
    }

    pub fn zero(&self) -> FfElem {
        vec![RatFun::zero(self.k); self.degree()]
    }

    pub fn one(&self) -> FfElem {
        self.from_ratfun(RatFun::one(self.k))
    }

    pub fn from_ratfun(&self, c: RatFun) -> FfElem {
        self.pad(vec![c])
    }

    pub fn y(&self) -> FfElem {
        self.reduce(&[RatFun::zero(self.k), RatFun::one(self.k)])
    }

    pub fn reduce(&self, a: &[RatFun]) -> FfElem {
        self.pad(ydivrem(&trim(a.to_vec()), &self.modulus, self.k).1)
    }

    pub fn add(&self, a: &FfElem, b: &FfElem) -> FfElem {
        a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
    }

    pub fn sub(&self, a: &FfElem, b: &FfElem) -> FfElem {
        a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
    }

    pub fn scale(&self, a: &FfElem, c: &RatFun) -> FfElem {
        a.iter().map(|x| x.mul(c)).collect()
    }

    pub fn mul(&self, a: &FfElem, b: &FfElem) -> FfElem {
        self.reduce(&ymul(&trim(a.clone()), &trim(b.clone()), self.k))
    }

    pub fn pow(&self, a: &FfElem, mut e: u64) -> FfElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn is_zero(&self, a: &FfElem) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    /// Inverse by the extended Euclidean algorithm over k(x)[y].
    pub fn inv(&self, a: &FfElem) -> Result<FfElem> {
        let k = self.k;
        let (mut r0, mut r1) = (self.modulus.clone(), trim(a.clone()));
        if r1.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let (mut s0, mut s1): (YPoly, YPoly) = (Vec::new(), vec![RatFun::one(k)]);
        while !r1.is_empty() {
            let (q, r) = ydivrem(&r0, &r1, k);
            let s2 = ysub(&s0, &ymul(&q, &s1, k), k);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        if r0.len() != 1 {
            return Err(Error::internal("function_field", "element is a zero divisor"));
        }
        let c = r0[0].inv()?;
        Ok(self.reduce(&s0.iter().map(|x| x.mul(&c)).collect::<Vec<_>>()))
    }

    pub fn div(&self, a: &FfElem, b: &FfElem) -> Result<FfElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Trace over k(x): the trace of multiplication by `a` on the power basis.
    pub fn trace(&self, a: &FfElem) -> RatFun {
        let mut acc = RatFun::zero(self.k);
        let mut yi = self.one();
        let y = self.y();
        for i in 0..self.degree() {
            acc = acc.add(&self.mul(a, &yi)[i]);
            yi = self.mul(&yi, &y);
        }
        acc
    }

    /// Image of a polynomial whose variable v maps to `images[v]`.
    pub fn eval(&self, p: &Polynomial, images: &[FfElem]) -> FfElem {
        let mut cache: HashMap<(usize, u32), FfElem> = HashMap::new();
        let mut acc = self.zero();
        for &(m, c) in p.terms() {
            let mut t = self.from_ratfun(RatFun::constant(self.k, c as i64));
            for (v, img) in images.iter().enumerate() {
                let e = m.exp(v);
                if e > 0 {
                    let pw = cache
                        .entry((v, e))
                        .or_insert_with(|| self.pow(img, e as u64))
                        .clone();
                    t = self.mul(&t, &pw);
                }
            }
            acc = self.add(&acc, &t);
        }
        acc
    }

    /// Images of x and y.
    pub fn base_images(&self) -> Vec<FfElem> {
        vec![self.from_ratfun(RatFun::from_poly(UniPoly::x(self.k))), self.y()]
    }

    /// Converts an element with polynomial coordinates back to k[x, y].
    pub fn to_polynomial(&self, a: &FfElem, ring: &Arc<Ring>) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(ring);
        for (j, c) in a.iter().enumerate() {
            if !c.is_polynomial() {
                return Err(Error::internal(
                    "conductor",
                    format!("residual denominator {}", c.den().render("x")),
                ));
            }
            let term = &from_unipoly(c.num(), ring) * &Polynomial::var(ring, 1).pow(j as u64);
            acc = &acc + &term;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_trace() {
        let k = PrimeField::new(11).unwrap();
        let r = Ring::plane(k);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let f = &(&x.pow(5) + &y.pow(5)) + &(&x * &y);
        let kf = FunctionField::new(&f).unwrap();
        let img = kf.base_images();
        let a = kf.eval(&(&y.pow(2) + &x), &img);
        let ai = kf.inv(&a).unwrap();
        assert_eq!(kf.mul(&a, &ai), kf.one());
        assert_eq!(kf.trace(&kf.one()), RatFun::constant(k, 5));
        // y^5 = -x^5 - x y, so Tr(y^5) = -5x^5 + (-x)·Tr(y) = -5x^5
        let t = kf.trace(&kf.eval(&y.pow(5), &img));
        assert_eq!(t, RatFun::from_poly(UniPoly::monomial(k, 5, k.from_i64(-5))));
    }
}
