//! Linear algebra over k[x], k(x) and k = F_p.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use std::fmt;

/// Dense univariate polynomial over F_p, coefficients little-endian, trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    k: PrimeField,
    c: Vec<u32>,
}

impl UniPoly {
    pub fn new(k: PrimeField, mut c: Vec<u32>) -> Self {
        for x in c.iter_mut() {
            *x %= k.p();
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        UniPoly { k, c }
    }

    pub fn zero(k: PrimeField) -> Self {
        UniPoly { k, c: Vec::new() }
    }

    pub fn constant(k: PrimeField, v: i64) -> Self {
        UniPoly::new(k, vec![k.from_i64(v)])
    }

    pub fn one(k: PrimeField) -> Self {
        UniPoly::constant(k, 1)
    }

    /// c·x^e
    pub fn monomial(k: PrimeField, e: usize, c: u32) -> Self {
        let mut v = vec![0; e + 1];
        v[e] = c;
        UniPoly::new(k, v)
    }

    pub fn x(k: PrimeField) -> Self {
        UniPoly::monomial(k, 1, 1)
    }

    pub fn field(&self) -> PrimeField {
        self.k
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> u32 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_unit(&self) -> bool {
        self.degree() == Some(0)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.k.inv(self.lc()))
    }

    pub fn scale(&self, s: u32) -> UniPoly {
        UniPoly::new(self.k, self.c.iter().map(|&a| self.k.mul(a, s)).collect())
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::new(
            self.k,
            (0..n).map(|i| self.k.add(self.coeff(i), o.coeff(i))).collect(),
        )
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::new(
            self.k,
            (0..n).map(|i| self.k.sub(self.coeff(i), o.coeff(i))).collect(),
        )
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(self.k, self.c.iter().map(|&a| self.k.neg(a)).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(self.k);
        }
        let p = self.k.p() as u64;
        let mut acc = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % p;
            }
        }
        UniPoly::new(self.k, acc.into_iter().map(|v| v as u32).collect())
    }

    pub fn pow(&self, mut e: u64) -> UniPoly {
        let mut base = self.clone();
        let mut acc = UniPoly::one(self.k);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// (quotient, remainder); panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = self.k.inv(d.lc());
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (UniPoly::zero(self.k), self.clone());
        }
        let mut q = vec![0u32; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = self.k.mul(r[i], inv);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (j, &dc) in d.c.iter().enumerate() {
                r[i - dd + j] = self.k.sub(r[i - dd + j], self.k.mul(c, dc));
            }
        }
        (UniPoly::new(self.k, q), UniPoly::new(self.k, r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    pub fn div_exact(&self, d: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Monic gcd (zero when both are zero).
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(self.k);
        }
        self.mul(o).div_exact(&self.gcd(o)).monic()
    }

    /// (g, s, t) with s·self + t·o = g, g monic.
    pub fn ext_gcd(&self, o: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let k = self.k;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (UniPoly::one(k), UniPoly::zero(k));
        let (mut t0, mut t1) = (UniPoly::zero(k), UniPoly::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = k.inv(r0.lc());
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.k,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| self.k.mul(a, self.k.from_u64(i as u64)))
                .collect(),
        )
    }

    /// g with g^p = self, assuming only exponents divisible by p occur.
    pub fn pth_root(&self) -> UniPoly {
        let p = self.k.p() as usize;
        UniPoly::new(self.k, self.c.iter().step_by(p).copied().collect())
    }

    pub fn eval(&self, v: u32) -> u32 {
        self.c
            .iter()
            .rev()
            .fold(0, |acc, &a| self.k.add(self.k.mul(acc, v), a))
    }

    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            let m = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (a, m.is_empty()) {
                (_, true) => a.to_string(),
                (1, false) => m,
                _ => format!("{a}*{m}"),
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

/// Rational function with monic denominator, coprime to the numerator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: UniPoly,
    den: UniPoly,
}

impl RatFun {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = num.field();
        if num.is_zero() {
            return Ok(RatFun::zero(k));
        }
        let g = num.gcd(&den);
        let (n, d) = (num.div_exact(&g), den.div_exact(&g));
        let inv = k.inv(d.lc());
        Ok(RatFun {
            num: n.scale(inv),
            den: d.scale(inv),
        })
    }

    pub fn from_poly(p: UniPoly) -> RatFun {
        let k = p.field();
        RatFun {
            num: p,
            den: UniPoly::one(k),
        }
    }

    pub fn zero(k: PrimeField) -> RatFun {
        RatFun::from_poly(UniPoly::zero(k))
    }

    pub fn one(k: PrimeField) -> RatFun {
        RatFun::from_poly(UniPoly::one(k))
    }

    pub fn constant(k: PrimeField, v: i64) -> RatFun {
        RatFun::from_poly(UniPoly::constant(k, v))
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn field(&self) -> PrimeField {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, o: &RatFun) -> RatFun {
        if self.den == o.den {
            return RatFun::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        RatFun::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .unwrap()
    }

    pub fn sub(&self, o: &RatFun) -> RatFun {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return RatFun::zero(self.field());
        }
        RatFun::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn inv(&self) -> Result<RatFun> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFun) -> Result<RatFun> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn scale(&self, s: u32) -> RatFun {
        RatFun::new(self.num.scale(s), self.den.clone()).unwrap()
    }

    pub fn render(&self, var: &str) -> String {
        if self.den.is_one() {
            self.num.render(var)
        } else {
            format!("({})/({})", self.num.render(var), self.den.render(var))
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

/// Dense matrix over k[x].
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<UniPoly>>,
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.data {
            writeln!(f, "{:?}", row)?;
        }
        Ok(())
    }
}

impl PolyMatrix {
    pub fn from_rows(k: PrimeField, data: Vec<Vec<UniPoly>>, cols: usize) -> PolyMatrix {
        let _ = k;
        PolyMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn zeros(k: PrimeField, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix {
            rows,
            cols,
            data: vec![vec![UniPoly::zero(k); cols]; rows],
        }
    }

    pub fn identity(k: PrimeField, n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(k, n, n);
        for i in 0..n {
            m.data[i][i] = UniPoly::one(k);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &UniPoly {
        &self.data[i][j]
    }

    pub fn mul(&self, o: &PolyMatrix, k: PrimeField) -> PolyMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = PolyMatrix::zeros(k, self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                if self.data[i][l].is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    if !o.data[l][j].is_zero() {
                        out.data[i][j] = out.data[i][j].add(&self.data[i][l].mul(&o.data[l][j]));
                    }
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in self.data.iter_mut() {
            row.swap(a, b);
        }
    }

    /// row_dst -= q · row_src
    fn row_axpy(&mut self, dst: usize, q: &UniPoly, src: usize) {
        for j in 0..self.cols {
            if !self.data[src][j].is_zero() {
                let t = q.mul(&self.data[src][j]);
                self.data[dst][j] = self.data[dst][j].sub(&t);
            }
        }
    }

    /// col_dst -= q · col_src
    fn col_axpy(&mut self, dst: usize, q: &UniPoly, src: usize) {
        for i in 0..self.rows {
            if !self.data[i][src].is_zero() {
                let t = q.mul(&self.data[i][src]);
                self.data[i][dst] = self.data[i][dst].sub(&t);
            }
        }
    }

    fn scale_row(&mut self, i: usize, s: u32) {
        for e in self.data[i].iter_mut() {
            *e = e.scale(s);
        }
    }

    fn scale_col(&mut self, j: usize, s: u32) {
        for i in 0..self.rows {
            self.data[i][j] = self.data[i][j].scale(s);
        }
    }

    /// Determinant by Gaussian elimination over k(x).
    pub fn determinant(&self) -> Result<RatFun> {
        assert_eq!(self.rows, self.cols);
        let k = self.field_hint();
        let mut a: Vec<Vec<RatFun>> = self
            .data
            .iter()
            .map(|r| r.iter().cloned().map(RatFun::from_poly).collect())
            .collect();
        let n = self.rows;
        let mut det = RatFun::one(k);
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Ok(RatFun::zero(k));
            };
            if piv != c {
                a.swap(piv, c);
                det = det.neg();
            }
            det = det.mul(&a[c][c]);
            let inv = a[c][c].inv()?;
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].mul(&inv);
                for j in c..n {
                    let t = f.mul(&a[c][j]);
                    a[r][j] = a[r][j].sub(&t);
                }
            }
        }
        Ok(det)
    }

    fn field_hint(&self) -> PrimeField {
        self.data[0][0].field()
    }
}

/// Smith normal form: returns (P, D, Q) with P·U·Q = D.
///
/// Pivots are chosen by minimal degree, ties by (row, col). Pivots are made
/// monic by column scaling. Columns of Q past the rank are normalized so
/// that their highest-degree entry (topmost on ties) is monic, and sorted by
/// that degree descending, then by its row.
pub fn smith_normal_form(u: &PolyMatrix, k: PrimeField) -> (PolyMatrix, PolyMatrix, PolyMatrix) {
    let (p, d, q, _) = smith_normal_form_with_inverse(u, k);
    (p, d, q)
}

/// As [`smith_normal_form`], also returning Q⁻¹, kept in step with Q.
pub fn smith_normal_form_with_inverse(
    u: &PolyMatrix,
    k: PrimeField,
) -> (PolyMatrix, PolyMatrix, PolyMatrix, PolyMatrix) {
    let (m, n) = (u.rows, u.cols);
    let mut a = u.clone();
    let mut p = PolyMatrix::identity(k, m);
    let mut q = PolyMatrix::identity(k, n);
    let mut qinv = PolyMatrix::identity(k, n);
    let mut rank = 0;
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if let Some(d) = a.data[i][j].degree() {
                        if best.is_none_or(|b| d < b.0) {
                            best = Some((d, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                break;
            };
            if pi != t {
                a.swap_rows(pi, t);
                p.swap_rows(pi, t);
            }
            if pj != t {
                a.swap_cols(pj, t);
                q.swap_cols(pj, t);
                qinv.swap_rows(pj, t);
            }
            let piv = a.data[t][t].clone();
            let mut dirty = false;
            for i in t + 1..m {
                if a.data[i][t].is_zero() {
                    continue;
                }
                let (qt, r) = a.data[i][t].div_rem(&piv);
                a.row_axpy(i, &qt, t);
                p.row_axpy(i, &qt, t);
                dirty |= !r.is_zero();
            }
            for j in t + 1..n {
                if a.data[t][j].is_zero() {
                    continue;
                }
                let (qt, r) = a.data[t][j].div_rem(&piv);
                a.col_axpy(j, &qt, t);
                q.col_axpy(j, &qt, t);
                qinv.row_axpy(t, &qt.neg(), j);
                dirty |= !r.is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility chain
            let mut fix = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if !a.data[i][j].is_zero() && !a.data[i][j].rem(&piv).is_zero() {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    let minus_one = UniPoly::constant(k, -1);
                    a.row_axpy(t, &minus_one, i);
                    p.row_axpy(t, &minus_one, i);
                }
                None => break,
            }
        }
        if a.data[t][t].is_zero() {
            break;
        }
        let lc = a.data[t][t].lc();
        let s = k.inv(lc);
        a.scale_col(t, s);
        q.scale_col(t, s);
        qinv.scale_row(t, lc);
        rank = t + 1;
    }
    // canonical kernel columns
    let lead = |j: usize| -> (usize, usize) {
        let mut best = (0usize, usize::MAX);
        let mut found = false;
        for i in 0..n {
            if let Some(d) = q.data[i][j].degree() {
                if !found || d > best.0 {
                    best = (d, i);
                    found = true;
                }
            }
        }
        best
    };
    let mut order: Vec<(usize, (usize, usize))> = (rank..n).map(|j| (j, lead(j))).collect();
    order.sort_by(|(_, (da, ra)), (_, (db, rb))| db.cmp(da).then(ra.cmp(rb)));
    let old_q = q.clone();
    let old_qinv = qinv.clone();
    for (off, &(j, (_, i))) in order.iter().enumerate() {
        let lc = old_q.data[i][j].lc();
        let s = k.inv(lc);
        for r in 0..n {
            q.data[r][rank + off] = old_q.data[r][j].scale(s);
        }
        qinv.data[rank + off] = old_qinv.data[j].iter().map(|e| e.scale(lc)).collect();
    }
    (p, a, q, qinv)
}

/// Inverse of a unimodular matrix over k[x].
pub fn invert_polymatrix(qm: &PolyMatrix, k: PrimeField) -> Result<PolyMatrix> {
    let n = qm.rows;
    if qm.cols != n {
        return Err(Error::NotUnimodular);
    }
    let mut a = qm.clone();
    let mut inv = PolyMatrix::identity(k, n);
    for c in 0..n {
        // Euclid down column c until a single nonzero entry remains
        loop {
            let mut best: Option<(usize, usize)> = None;
            for r in c..n {
                if let Some(d) = a.data[r][c].degree() {
                    if best.is_none_or(|b| d < b.0) {
                        best = Some((d, r));
                    }
                }
            }
            let Some((_, pr)) = best else {
                return Err(Error::NotUnimodular);
            };
            a.swap_rows(pr, c);
            inv.swap_rows(pr, c);
            let piv = a.data[c][c].clone();
            let mut done = true;
            for r in c + 1..n {
                if a.data[r][c].is_zero() {
                    continue;
                }
                let (qt, rem) = a.data[r][c].div_rem(&piv);
                a.row_axpy(r, &qt, c);
                inv.row_axpy(r, &qt, c);
                done &= rem.is_zero();
            }
            if done {
                break;
            }
        }
        if !a.data[c][c].is_unit() {
            return Err(Error::NotUnimodular);
        }
        let s = k.inv(a.data[c][c].lc());
        for j in 0..n {
            a.data[c][j] = a.data[c][j].scale(s);
            inv.data[c][j] = inv.data[c][j].scale(s);
        }
        for r in 0..n {
            if r != c && !a.data[r][c].is_zero() {
                let f = a.data[r][c].clone();
                a.row_axpy(r, &f, c);
                inv.row_axpy(r, &f, c);
            }
        }
    }
    Ok(inv)
}

pub type RatMatrix = Vec<Vec<RatFun>>;

/// Inverse over k(x) by Gauss–Jordan elimination with canonical fractions.
pub fn invert_ratfun_matrix(m: &[Vec<RatFun>], k: PrimeField) -> Result<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m.to_vec();
    let mut inv: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { RatFun::one(k) } else { RatFun::zero(k) })
                .collect()
        })
        .collect();
    for c in 0..n {
        let piv = (c..n)
            .filter(|&r| !a[r][c].is_zero())
            .min_by_key(|&r| (a[r][c].num().degree().unwrap() + a[r][c].den().degree().unwrap(), r))
            .ok_or(Error::SingularMatrix)?;
        a.swap(piv, c);
        inv.swap(piv, c);
        let s = a[c][c].inv()?;
        for j in 0..n {
            a[c][j] = a[c][j].mul(&s);
            inv[c][j] = inv[c][j].mul(&s);
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for j in 0..n {
                if !a[c][j].is_zero() {
                    a[r][j] = a[r][j].sub(&f.mul(&a[c][j]));
                }
                if !inv[c][j].is_zero() {
                    inv[r][j] = inv[r][j].sub(&f.mul(&inv[c][j]));
                }
            }
        }
    }
    Ok(inv)
}

pub fn ratmat_mul(a: &[Vec<RatFun>], b: &[Vec<RatFun>], k: PrimeField) -> RatMatrix {
    let (n, l, m) = (a.len(), b.len(), b.first().map_or(0, |r| r.len()));
    let mut out = vec![vec![RatFun::zero(k); m]; n];
    for i in 0..n {
        for t in 0..l {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[t][j].is_zero() {
                    out[i][j] = out[i][j].add(&a[i][t].mul(&b[t][j]));
                }
            }
        }
    }
    out
}

/// Dense matrices over F_p as row vectors of residues.
pub type FpMatrix = Vec<Vec<u32>>;

/// Reduced row echelon form over F_p; zero rows dropped.
pub fn rref(m: &[Vec<u32>], k: PrimeField) -> FpMatrix {
    let mut a: FpMatrix = m.to_vec();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(piv, r);
        let inv = k.inv(a[r][c]);
        for x in a[r].iter_mut() {
            *x = k.mul(*x, inv);
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = k.sub(a[i][j], k.mul(f, a[r][j]));
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    a.retain(|row| row.iter().any(|&x| x != 0));
    a
}

pub fn rank(m: &[Vec<u32>], k: PrimeField) -> usize {
    rref(m, k).len()
}

pub fn fp_mat_mul(a: &[Vec<u32>], b: &[Vec<u32>], k: PrimeField) -> FpMatrix {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(0, |acc, (&x, brow)| k.add(acc, k.mul(x, brow[j])))
                })
                .collect()
        })
        .collect()
}

pub fn fp_mat_pow(a: &[Vec<u32>], e: usize, k: PrimeField) -> FpMatrix {
    let n = a.len();
    let mut acc: FpMatrix = (0..n)
        .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
        .collect();
    for _ in 0..e {
        acc = fp_mat_mul(&acc, a, k);
    }
    acc
}

/// Solves x·basis = target for a row vector x, if a solution exists.
pub fn solve_in_row_span(basis: &[Vec<u32>], target: &[u32], k: PrimeField) -> Option<Vec<u32>> {
    let n = basis.len();
    let cols = target.len();
    // transpose system: columns are basis vectors, augmented by target
    let mut a: FpMatrix = (0..cols)
        .map(|c| {
            let mut row: Vec<u32> = basis.iter().map(|b| b[c]).collect();
            row.push(target[c]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(piv, r);
        let inv = k.inv(a[r][c]);
        for x in a[r].iter_mut() {
            *x = k.mul(*x, inv);
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..=n {
                    a[i][j] = k.sub(a[i][j], k.mul(f, a[r][j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| row[n] != 0) {
        return None;
    }
    let mut x = vec![0u32; n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][n];
    }
    Some(x)
}
