//! Gröbner bases of submodules of free modules S^r, syzygies and lifting.
//!
//! Positions are ranked by index: e_i ≻ e_j when i < j. A [`ModuleOrder`] is
//! a product of blocks of consecutive positions; each block is a POT or TOP
//! extension of its own monomial order, and every term of an earlier block
//! dominates every term of a later one.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::{Monomial, MonomialOrder, OrderKind, Polynomial, Ring};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PosOrder {
    Pot,
    Top,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleBlock {
    pub len: usize,
    pub kind: PosOrder,
    pub base: MonomialOrder,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleOrder {
    pub blocks: Vec<ModuleBlock>,
    starts: Vec<usize>,
}

impl ModuleOrder {
    pub fn product(blocks: Vec<ModuleBlock>) -> Self {
        let mut starts = Vec::with_capacity(blocks.len());
        let mut s = 0;
        for b in &blocks {
            starts.push(s);
            s += b.len;
        }
        ModuleOrder { blocks, starts }
    }

    pub fn pot(base: MonomialOrder, rank: usize) -> Self {
        Self::product(vec![ModuleBlock {
            len: rank,
            kind: PosOrder::Pot,
            base,
        }])
    }

    pub fn top(base: MonomialOrder, rank: usize) -> Self {
        Self::product(vec![ModuleBlock {
            len: rank,
            kind: PosOrder::Top,
            base,
        }])
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.len).sum()
    }

    /// The same blocks with one extra POT position prepended as its own block.
    fn with_leading_position(&self) -> ModuleOrder {
        let base = self.blocks[0].base.clone();
        let mut blocks = vec![ModuleBlock {
            len: 1,
            kind: PosOrder::Pot,
            base,
        }];
        blocks.extend(self.blocks.iter().cloned());
        Self::product(blocks)
    }

    #[inline]
    fn block_of(&self, pos: usize) -> usize {
        match self.starts.binary_search(&pos) {
            Ok(i) => i,
            Err(i) => i - 1,
        }
    }

    /// `Greater` means `m_a e_a ≻ m_b e_b`.
    #[inline]
    pub fn cmp(&self, pa: usize, ma: &Monomial, pb: usize, mb: &Monomial) -> Ordering {
        let (ba, bb) = (self.block_of(pa), self.block_of(pb));
        if ba != bb {
            return bb.cmp(&ba);
        }
        let b = &self.blocks[ba];
        match b.kind {
            PosOrder::Pot => pb.cmp(&pa).then_with(|| b.base.cmp(ma, mb)),
            PosOrder::Top => b.base.cmp(ma, mb).then_with(|| pb.cmp(&pa)),
        }
    }
}

/// Compares `a = m e_i` with `b = m' e_j`; positions must lie within the order's rank.
pub fn module_compare(
    a: (usize, &Monomial),
    b: (usize, &Monomial),
    ord: &ModuleOrder,
) -> Result<Ordering> {
    let r = ord.rank();
    if a.0 >= r || b.0 >= r {
        return Err(Error::internal("modgb", "position outside module rank"));
    }
    Ok(ord.cmp(a.0, a.1, b.0, b.1))
}

/// A vector of polynomials in a free module of fixed rank.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModuleElement {
    pub coords: Vec<Polynomial>,
}

impl std::fmt::Debug for ModuleElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.coords.iter().map(|c| c.render()).collect();
        write!(f, "({})", s.join(", "))
    }
}

impl ModuleElement {
    pub fn new(coords: Vec<Polynomial>) -> Self {
        ModuleElement { coords }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: u32) -> ModuleElement {
        ModuleElement::new(self.coords.iter().map(|x| x.scale(c)).collect())
    }

    /// Σ coords[i]·fs[i]
    pub fn dot(&self, fs: &[Polynomial]) -> Polynomial {
        let mut acc = Polynomial::zero(self.coords[0].ring());
        for (a, f) in self.coords.iter().zip(fs) {
            if !a.is_zero() {
                acc = &acc + &(a * f);
            }
        }
        acc
    }

    /// Leading (position, monomial, coefficient) under `ord`.
    pub fn leading_term(&self, ord: &ModuleOrder) -> Option<(usize, Monomial, u32)> {
        let mut best: Option<(usize, Monomial, u32)> = None;
        for (i, c) in self.coords.iter().enumerate() {
            for &(m, v) in c.terms() {
                if best.is_none_or(|(bp, bm, _)| ord.cmp(i, &m, bp, &bm) == Ordering::Greater) {
                    best = Some((i, m, v));
                }
            }
        }
        best
    }
}

type MTerm = (usize, Monomial, u32);
type MTerms = Vec<MTerm>;

fn flatten(e: &ModuleElement, ord: &ModuleOrder) -> MTerms {
    let mut t: MTerms = e
        .coords
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.terms().iter().map(move |&(m, v)| (i, m, v)))
        .collect();
    t.sort_by(|a, b| ord.cmp(b.0, &b.1, a.0, &a.1));
    t
}

fn unflatten(t: &MTerms, rank: usize, ring: &Arc<Ring>) -> ModuleElement {
    let mut parts: Vec<Vec<(Monomial, u32)>> = vec![Vec::new(); rank];
    for &(p, m, c) in t {
        parts[p].push((m, c));
    }
    ModuleElement::new(
        parts
            .into_iter()
            .map(|p| Polynomial::from_terms(ring, p))
            .collect(),
    )
}

fn sub_mul(a: &[MTerm], c: u32, m: &Monomial, b: &[MTerm], ord: &ModuleOrder, k: PrimeField) -> MTerms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let bm = if j < b.len() { Some(b[j].1.mul(m)) } else { None };
        let o = match (i < a.len(), bm) {
            (false, _) => Ordering::Less,
            (true, None) => Ordering::Greater,
            (true, Some(ref bm)) => ord.cmp(a[i].0, &a[i].1, b[j].0, bm),
        };
        match o {
            Ordering::Greater => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Less => {
                out.push((b[j].0, bm.unwrap(), k.neg(k.mul(c, b[j].2))));
                j += 1;
            }
            Ordering::Equal => {
                let v = k.sub(a[i].2, k.mul(c, b[j].2));
                if v != 0 {
                    out.push((a[i].0, a[i].1, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn monic(f: &mut MTerms, k: PrimeField) {
    if let Some(&(_, _, c)) = f.first() {
        if c != 1 {
            let inv = k.inv(c);
            for t in f.iter_mut() {
                t.2 = k.mul(t.2, inv);
            }
        }
    }
}

/// Indices of basis elements grouped by the position of their leading term.
struct Index {
    by_pos: Vec<Vec<usize>>,
}

impl Index {
    fn new(rank: usize) -> Self {
        Index { by_pos: vec![Vec::new(); rank] }
    }

    fn of(g: &[MTerms], rank: usize) -> Self {
        let mut ix = Index::new(rank);
        for (i, x) in g.iter().enumerate() {
            ix.by_pos[x[0].0].push(i);
        }
        ix
    }

    #[inline]
    fn find(&self, g: &[MTerms], t: &MTerm) -> Option<usize> {
        self.by_pos[t.0].iter().copied().find(|&i| g[i][0].1.divides(&t.1))
    }
}

/// A sum of ascending term lists in buckets of geometrically growing length,
/// so adding a short multiple to a long element stays cheap.
struct GeoBucket<'a> {
    b: Vec<MTerms>,
    ord: &'a ModuleOrder,
    k: PrimeField,
}

impl<'a> GeoBucket<'a> {
    fn new(ord: &'a ModuleOrder, k: PrimeField) -> Self {
        GeoBucket { b: Vec::new(), ord, k }
    }

    fn slot(len: usize) -> usize {
        let (mut i, mut cap) = (0, 8);
        while len > cap {
            cap *= 4;
            i += 1;
        }
        i
    }

    fn merge(ord: &ModuleOrder, k: PrimeField, a: MTerms, b: MTerms) -> MTerms {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut ia, mut ib) = (a.into_iter().peekable(), b.into_iter().peekable());
        loop {
            let o = match (ia.peek(), ib.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (Some(x), Some(y)) => ord.cmp(x.0, &x.1, y.0, &y.1),
            };
            match o {
                Ordering::Less => out.push(ia.next().unwrap()),
                Ordering::Greater => out.push(ib.next().unwrap()),
                Ordering::Equal => {
                    let (x, y) = (ia.next().unwrap(), ib.next().unwrap());
                    let v = k.add(x.2, y.2);
                    if v != 0 {
                        out.push((x.0, x.1, v));
                    }
                }
            }
        }
        out
    }

    /// Adds an ascending list.
    fn add(&mut self, mut t: MTerms) {
        let mut i = Self::slot(t.len());
        loop {
            if i >= self.b.len() {
                self.b.resize(i + 1, Vec::new());
            }
            if self.b[i].is_empty() {
                self.b[i] = t;
                return;
            }
            t = Self::merge(self.ord, self.k, std::mem::take(&mut self.b[i]), t);
            let j = Self::slot(t.len());
            if j <= i {
                self.b[i] = t;
                return;
            }
            i = j;
        }
    }

    /// The whole sum, descending.
    fn into_terms(self) -> MTerms {
        let (ord, k) = (self.ord, self.k);
        let mut out = self
            .b
            .into_iter()
            .fold(Vec::new(), |acc, bk| Self::merge(ord, k, acc, bk));
        out.reverse();
        out
    }

    /// Removes and returns the leading term of the sum.
    fn pop_lead(&mut self) -> Option<MTerm> {
        loop {
            let mut best: Option<usize> = None;
            for (i, bk) in self.b.iter().enumerate() {
                if let Some(t) = bk.last() {
                    let better = match best {
                        None => true,
                        Some(j) => {
                            let u = self.b[j].last().unwrap();
                            self.ord.cmp(t.0, &t.1, u.0, &u.1) == Ordering::Greater
                        }
                    };
                    if better {
                        best = Some(i);
                    }
                }
            }
            let j = best?;
            let mut t = self.b[j].pop().unwrap();
            for i in 0..self.b.len() {
                if i != j {
                    if let Some(u) = self.b[i].last() {
                        if u.0 == t.0 && u.1 == t.1 {
                            t.2 = self.k.add(t.2, u.2);
                            self.b[i].pop();
                        }
                    }
                }
            }
            if t.2 != 0 {
                return Some(t);
            }
        }
    }
}

fn reduce(f: MTerms, g: &[MTerms], ix: &Index, ord: &ModuleOrder, k: PrimeField) -> MTerms {
    let mut bucket = GeoBucket::new(ord, k);
    bucket.add(f.into_iter().rev().collect());
    let mut r: MTerms = Vec::new();
    while let Some(t) = bucket.pop_lead() {
        match ix.find(g, &t) {
            Some(i) => {
                let gi = &g[i];
                let q = gi[0].1.quotient_of(&t.1);
                let c = k.neg(k.mul(t.2, k.inv(gi[0].2)));
                bucket.add(gi[1..].iter().rev().map(|&(p, m, v)| (p, m.mul(&q), k.mul(c, v))).collect());
            }
            None => r.push(t),
        }
    }
    r
}

fn sugar_of(f: &[MTerm]) -> u32 {
    f.iter().map(|t| t.1.degree()).max().unwrap_or(0)
}

/// Reduces only while the leading term is divisible (top reduction), tracking sugar.
fn top_reduce(
    f: MTerms,
    mut sugar: u32,
    g: &[MTerms],
    sugars: &[u32],
    ix: &Index,
    ord: &ModuleOrder,
    k: PrimeField,
) -> (MTerms, u32) {
    let mut bucket = GeoBucket::new(ord, k);
    bucket.add(f.into_iter().rev().collect());
    while let Some(t) = bucket.pop_lead() {
        match ix.find(g, &t) {
            Some(i) => {
                let gi = &g[i];
                let q = gi[0].1.quotient_of(&t.1);
                sugar = sugar.max(q.degree() + sugars[i]);
                let c = k.neg(k.mul(t.2, k.inv(gi[0].2)));
                bucket.add(gi[1..].iter().rev().map(|&(p, m, v)| (p, m.mul(&q), k.mul(c, v))).collect());
            }
            None => {
                bucket.add(vec![t]);
                break;
            }
        }
    }
    (bucket.into_terms(), sugar)
}

fn spair(a: &MTerms, b: &MTerms, ord: &ModuleOrder, k: PrimeField) -> MTerms {
    let l = a[0].1.lcm(&b[0].1);
    let ma = a[0].1.quotient_of(&l);
    let mb = b[0].1.quotient_of(&l);
    let sa: MTerms = a.iter().map(|&(p, m, c)| (p, m.mul(&ma), c)).collect();
    sub_mul(&sa, 1, &mb, b, ord, k)
}

#[derive(Clone, Copy)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Buchberger with the sugar strategy and the Gebauer–Möller criteria.
/// No product criterion: it does not hold for module elements.
///
/// S-pairs are formed only at positions below `pair_limit`. Under a POT
/// order the elements leading at those positions then form a Gröbner basis
/// of their part of the module; the rest are kept only as reducers.
fn gb_terms(gens: Vec<MTerms>, ord: &ModuleOrder, k: PrimeField, pair_limit: usize) -> Vec<MTerms> {
    let rank = ord.rank();
    let mut g: Vec<MTerms> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut ix = Index::new(rank);
    let mut queue: BTreeMap<u32, Vec<Pair>> = BTreeMap::new();

    let insert = |mut h: MTerms,
                  sug: u32,
                  g: &mut Vec<MTerms>,
                  sugars: &mut Vec<u32>,
                  active: &mut Vec<bool>,
                  ix: &mut Index,
                  queue: &mut BTreeMap<u32, Vec<Pair>>| {
        monic(&mut h, k);
        let n = g.len();
        let (pos, lt) = (h[0].0, h[0].1);
        // drop old pairs whose lcm is strictly covered through h
        for bucket in queue.values_mut() {
            bucket.retain(|pr| {
                if g[pr.i][0].0 != pos || !lt.divides(&pr.lcm) {
                    return true;
                }
                let li = g[pr.i][0].1.lcm(&lt);
                let lj = g[pr.j][0].1.lcm(&lt);
                li == pr.lcm || lj == pr.lcm
            });
        }
        queue.retain(|_, b| !b.is_empty());
        let mut cand: Vec<Pair> = ix.by_pos[pos]
            .iter()
            .filter(|_| pos < pair_limit)
            .filter(|&&i| active[i])
            .map(|&i| Pair { i, j: n, lcm: g[i][0].1.lcm(&lt) })
            .collect();
        // keep one pair per minimal lcm
        cand.sort_by(|a, b| a.lcm.degree().cmp(&b.lcm.degree()).then(a.i.cmp(&b.i)));
        let mut kept: Vec<Pair> = Vec::new();
        for c in cand {
            if !kept.iter().any(|d| d.lcm.divides(&c.lcm)) {
                kept.push(c);
            }
        }
        for pr in kept {
            let s = (sugars[pr.i] + g[pr.i][0].1.quotient_of(&pr.lcm).degree())
                .max(sug + lt.quotient_of(&pr.lcm).degree());
            queue.entry(s).or_default().push(pr);
        }
        for &i in &ix.by_pos[pos] {
            if active[i] && lt.divides(&g[i][0].1) {
                active[i] = false;
            }
        }
        ix.by_pos[pos].push(n);
        g.push(h);
        sugars.push(sug);
        active.push(true);
    };

    let mut gens = gens;
    gens.sort_by_key(|f| sugar_of(f));
    for f in gens {
        let s0 = sugar_of(&f);
        let (r, s) = top_reduce(f, s0, &g, &sugars, &ix, ord, k);
        if !r.is_empty() {
            insert(r, s, &mut g, &mut sugars, &mut active, &mut ix, &mut queue);
        }
    }
    while let Some((&s, _)) = queue.iter().next() {
        let mut bucket = queue.remove(&s).unwrap();
        bucket.sort_by(|a, b| ord.cmp(g[b.i][0].0, &b.lcm, g[a.i][0].0, &a.lcm));
        // pairs are popped smallest first
        while let Some(pr) = bucket.pop() {
            let sp = spair(&g[pr.i], &g[pr.j], ord, k);
            let (r, sug) = top_reduce(sp, s, &g, &sugars, &ix, ord, k);
            if !r.is_empty() {
                insert(r, sug, &mut g, &mut sugars, &mut active, &mut ix, &mut queue);
                // pairs of this sugar that the insertion made redundant
                let pos = g.last().unwrap()[0].0;
                let lt = g.last().unwrap()[0].1;
                bucket.retain(|q| {
                    if g[q.i][0].0 != pos || !lt.divides(&q.lcm) {
                        return true;
                    }
                    g[q.i][0].1.lcm(&lt) == q.lcm || g[q.j][0].1.lcm(&lt) == q.lcm
                });
                if let Some(extra) = queue.remove(&s) {
                    bucket.extend(extra);
                    bucket.sort_by(|a, b| ord.cmp(g[b.i][0].0, &b.lcm, g[a.i][0].0, &a.lcm));
                }
            }
        }
    }
    // reduced basis from the active (minimal) elements
    let mut minimal: Vec<MTerms> = g
        .into_iter()
        .zip(active)
        .filter(|(_, a)| *a)
        .map(|(x, _)| x)
        .collect();
    minimal.sort_by(|a, b| ord.cmp(b[0].0, &b[0].1, a[0].0, &a[0].1));
    let mut uniq: Vec<MTerms> = Vec::with_capacity(minimal.len());
    for x in minimal {
        if !uniq.iter().any(|y| y[0].0 == x[0].0 && y[0].1 == x[0].1) {
            uniq.push(x);
        }
    }
    let ix = Index::of(&uniq, rank);
    let out: Vec<MTerms> = (0..uniq.len())
        .map(|i| {
            let mut r = vec![uniq[i][0]];
            r.extend(reduce(uniq[i][1..].to_vec(), &uniq, &ix, ord, k));
            r
        })
        .collect();
    out
}

fn ring_of(gens: &[ModuleElement]) -> Option<Arc<Ring>> {
    gens.iter()
        .flat_map(|g| g.coords.iter())
        .next()
        .map(|p| p.ring().clone())
}

/// Reduced Gröbner basis of the submodule generated by `gens`
/// (monic, sorted by leading term descending).
pub fn module_buchberger(gens: &[ModuleElement], ord: &ModuleOrder) -> Vec<ModuleElement> {
    module_gb_limited(gens, ord, usize::MAX)
}

fn module_gb_limited(gens: &[ModuleElement], ord: &ModuleOrder, pair_limit: usize) -> Vec<ModuleElement> {
    let Some(ring) = ring_of(gens) else {
        return Vec::new();
    };
    let rank = gens[0].rank();
    assert_eq!(rank, ord.rank(), "module order rank mismatch");
    let k = ring.field;
    let ts = gens
        .iter()
        .map(|g| flatten(g, ord))
        .filter(|t| !t.is_empty())
        .collect();
    gb_terms(ts, ord, k, pair_limit)
        .iter()
        .map(|t| unflatten(t, rank, &ring))
        .collect()
}

/// Normal form of `f` against `g` (full reduction).
pub fn module_normal_form(f: &ModuleElement, g: &[ModuleElement], ord: &ModuleOrder) -> ModuleElement {
    let ring = f.coords[0].ring().clone();
    let k = ring.field;
    let gs: Vec<MTerms> = g
        .iter()
        .map(|x| flatten(x, ord))
        .filter(|t| !t.is_empty())
        .collect();
    let ix = Index::of(&gs, ord.rank());
    unflatten(&reduce(flatten(f, ord), &gs, &ix, ord, k), f.rank(), &ring)
}

/// True when every same-position S-pair of `g` reduces to zero.
pub fn is_module_groebner(g: &[ModuleElement], ord: &ModuleOrder) -> bool {
    let Some(ring) = ring_of(g) else {
        return true;
    };
    let k = ring.field;
    let mut gs: Vec<MTerms> = g
        .iter()
        .map(|x| flatten(x, ord))
        .filter(|t| !t.is_empty())
        .collect();
    for x in gs.iter_mut() {
        monic(x, k);
    }
    let ix = Index::of(&gs, ord.rank());
    for i in 0..gs.len() {
        for j in i + 1..gs.len() {
            if gs[i][0].0 != gs[j][0].0 {
                continue;
            }
            let s = spair(&gs[i], &gs[j], ord, k);
            if !reduce(s, &gs, &ix, ord, k).is_empty() {
                return false;
            }
        }
    }
    true
}

/// A Gröbner basis of a syzygy module with the order it refers to.
#[derive(Clone, Debug)]
pub struct SyzygyResult {
    pub generators: Vec<ModuleElement>,
    pub order: ModuleOrder,
    pub is_groebner: bool,
}

fn default_tail(ring: &Ring, r: usize) -> ModuleOrder {
    ModuleOrder::pot(MonomialOrder::natural(OrderKind::Grevlex, ring.nvars()), r)
}

/// Elements of `gb` whose coordinate 0 vanishes, with that coordinate removed.
fn strip_first(gb: Vec<ModuleElement>) -> Vec<ModuleElement> {
    gb.into_iter()
        .filter(|g| g.coords[0].is_zero())
        .map(|g| ModuleElement::new(g.coords[1..].to_vec()))
        .collect()
}

/// Gröbner basis of syz(f_1, …, f_r) under `tail` (default POT over grevlex).
pub fn syzygy(fs: &[Polynomial], tail: Option<&ModuleOrder>) -> SyzygyResult {
    let ring = fs[0].ring().clone();
    let r = fs.len();
    let tail = tail.cloned().unwrap_or_else(|| default_tail(&ring, r));
    let ord = tail.with_leading_position();
    let zero = Polynomial::zero(&ring);
    let gens: Vec<ModuleElement> = (0..r)
        .map(|i| {
            let mut c = vec![zero.clone(); r + 1];
            c[0] = fs[i].clone();
            c[i + 1] = Polynomial::one(&ring);
            ModuleElement::new(c)
        })
        .collect();
    SyzygyResult {
        generators: strip_first(module_buchberger(&gens, &ord)),
        order: tail,
        is_groebner: true,
    }
}

/// (h_1, …, h_r) with f = Σ h_i f_i, from a syzygy basis of (f, f_1, …, f_r)
/// under `tail` (default POT over grevlex) with e_0 on top.
pub fn lift_representation(
    f: &Polynomial,
    fs: &[Polynomial],
    tail: Option<&ModuleOrder>,
) -> Result<Vec<Polynomial>> {
    let ring = f.ring().clone();
    let r = fs.len() + 1;
    let tail = match tail {
        Some(t) => t.with_leading_position(),
        None => default_tail(&ring, r),
    };
    let ord = tail.with_leading_position();
    let zero = Polynomial::zero(&ring);
    let gens: Vec<ModuleElement> = std::iter::once(f)
        .chain(fs)
        .enumerate()
        .map(|(i, g)| {
            let mut c = vec![zero.clone(); r + 1];
            c[0] = g.clone();
            c[i + 1] = Polynomial::one(&ring);
            ModuleElement::new(c)
        })
        .collect();
    // Only the part leading at e_0 and at the slot of f is needed, and with
    // both slots on top it is complete without the pairs below them.
    let top = &ord.blocks[1];
    let limit = if top.len == 1 || top.kind == PosOrder::Pot { 2 } else { usize::MAX };
    let syz = strip_first(module_gb_limited(&gens, &ord, limit));
    let k = ring.field;
    for g in &syz {
        if let Some(c) = g.coords[0].constant_value() {
            if c != 0 {
                let s = k.neg(k.inv(c));
                let h: Vec<Polynomial> = g.coords[1..].iter().map(|x| x.scale(s)).collect();
                debug_assert!(ModuleElement::new(h.clone()).dot(fs) == *f);
                return Ok(h);
            }
        }
    }
    Err(Error::NotInIdeal)
}

/// For each f in `fs`, coordinates (h_1, …, h_r) reduced modulo I with
/// f ≡ Σ h_i B_i mod I.
///
/// One module basis of B_j e_0 + e_j, g e_0 and g e_j (g in a basis of I) is
/// computed with S-pairs only at e_0; every f is then divided by it.
pub fn lift_modulo(
    fs: &[Polynomial],
    bs: &[Polynomial],
    igens: &[Polynomial],
    tail: Option<&ModuleOrder>,
) -> Result<Vec<Vec<Polynomial>>> {
    let ring = bs[0].ring().clone();
    let k = ring.field;
    let r = bs.len();
    let tail = tail.cloned().unwrap_or_else(|| default_tail(&ring, r));
    let ord = tail.with_leading_position();
    let igb = crate::groebner::buchberger(igens, &tail.blocks[0].base);
    let zero = Polynomial::zero(&ring);
    let unit = |pos: usize, c0: &Polynomial, cp: Option<&Polynomial>| {
        let mut c = vec![zero.clone(); r + 1];
        c[0] = c0.clone();
        if let Some(p) = cp {
            c[pos] = p.clone();
        }
        ModuleElement::new(c)
    };
    let one = Polynomial::one(&ring);
    let mut gens: Vec<ModuleElement> = bs.iter().enumerate().map(|(j, b)| unit(j + 1, b, Some(&one))).collect();
    for g in &igb {
        gens.push(unit(0, g, None));
        for j in 1..=r {
            gens.push(unit(j, &zero, Some(g)));
        }
    }
    let ts: Vec<MTerms> = gens.iter().map(|g| flatten(g, &ord)).filter(|t| !t.is_empty()).collect();
    let gb = gb_terms(ts, &ord, k, 1);
    let ix = Index::of(&gb, ord.rank());
    fs.iter()
        .map(|f| {
            let v = flatten(&unit(0, f, None), &ord);
            let red = unflatten(&reduce(v, &gb, &ix, &ord, k), r + 1, &ring);
            if !red.coords[0].is_zero() {
                return Err(Error::NotInIdeal);
            }
            Ok(red.coords[1..].iter().map(|c| c.neg()).collect())
        })
        .collect()
}

/// Gröbner basis of syz_I(B_1, …, B_r) = {a : Σ a_i B_i ∈ I} under `ord`
/// (default POT over grevlex).
///
/// The basis is computed from the submodule of S^{1+r} generated by
/// B_j e_0 + e_j and g e_0 for the generators g of I, under an order
/// eliminating e_0; its members free of e_0 form the basis.
pub fn syzygy_modulo(bs: &[Polynomial], igens: &[Polynomial], ord: Option<&ModuleOrder>) -> SyzygyResult {
    let ring = bs[0].ring().clone();
    let r = bs.len();
    let tail = ord.cloned().unwrap_or_else(|| default_tail(&ring, r));
    let full = tail.with_leading_position();
    let zero = Polynomial::zero(&ring);
    let mut gens: Vec<ModuleElement> = (0..r)
        .map(|i| {
            let mut c = vec![zero.clone(); r + 1];
            c[0] = bs[i].clone();
            c[i + 1] = Polynomial::one(&ring);
            ModuleElement::new(c)
        })
        .collect();
    for g in igens.iter().filter(|g| !g.is_zero()) {
        let mut c = vec![zero.clone(); r + 1];
        c[0] = g.clone();
        gens.push(ModuleElement::new(c));
    }
    // I e_j lies in the module already; with these generators present the
    // tails stay reduced modulo I while the basis is built.
    if tail.blocks.len() == 1 {
        for g in crate::groebner::buchberger(igens, &tail.blocks[0].base) {
            for j in 1..=r {
                let mut c = vec![zero.clone(); r + 1];
                c[j] = g.clone();
                gens.push(ModuleElement::new(c));
            }
        }
    }
    SyzygyResult {
        generators: strip_first(module_buchberger(&gens, &full)),
        order: tail,
        is_groebner: true,
    }
}

/// Elimination order with variables `0..keep` lowest: grevlex on the
/// others first, ties broken by grevlex on the kept ones.
pub fn elimination_order(nvars: usize, keep: usize) -> MonomialOrder {
    let mut prec: Vec<usize> = (keep..nvars).rev().collect();
    prec.extend((0..keep).rev());
    MonomialOrder::new(OrderKind::Block(nvars - keep), prec)
}

/// Gröbner basis of syz_I(B_1, …, B_r) ∩ ⊕ k[x_0, …, x_{keep-1}] e_i, under
/// the TOP extension of an elimination order with the kept variables lowest.
pub fn syzygy_modulo_eliminated(
    bs: &[Polynomial],
    igens: &[Polynomial],
    keep: usize,
) -> Result<Vec<ModuleElement>> {
    let ring = bs[0].ring().clone();
    let n = ring.nvars();
    if keep == 0 || keep > n {
        return Err(Error::internal("modgb", "invalid number of kept variables"));
    }
    let ord = ModuleOrder::top(elimination_order(n, keep), bs.len());
    let res = syzygy_modulo(bs, igens, Some(&ord));
    Ok(res
        .generators
        .into_iter()
        .filter(|g| {
            g.coords
                .iter()
                .all(|c| c.support_vars().iter().all(|&v| v < keep))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::{buchberger, normal_form};
    use proptest::prelude::*;

    fn setup() -> (Arc<Ring>, Polynomial, Polynomial, Polynomial) {
        let r = Ring::plane(PrimeField::new(11).unwrap());
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let f = &(&x.pow(5) + &y.pow(5)) + &(&x * &y);
        (r, x, y, f)
    }

    fn lex_yx() -> MonomialOrder {
        MonomialOrder::lex(vec![1, 0])
    }

    /// Membership of `v` in the module generated by `gens`.
    fn in_module(v: &ModuleElement, gens: &[ModuleElement], ord: &ModuleOrder) -> bool {
        let gb = module_buchberger(gens, ord);
        module_normal_form(v, &gb, ord).is_zero()
    }

    #[test]
    fn compare_examples() {
        let grlex = MonomialOrder::grlex(vec![0, 1]);
        let x = Monomial::var(0, 1);
        let xy = Monomial::from_exponents(&[1, 1]);
        let x2 = Monomial::var(0, 2);
        let pot = ModuleOrder::pot(grlex.clone(), 3);
        assert_eq!(module_compare((1, &x), (0, &Monomial::one()), &pot).unwrap(), Ordering::Less);
        let top = ModuleOrder::top(grlex, 3);
        assert_eq!(module_compare((2, &x2), (1, &xy), &top).unwrap(), Ordering::Greater);
        assert_eq!(module_compare((1, &x), (2, &x), &top).unwrap(), Ordering::Greater);
        assert!(module_compare((3, &x), (2, &x), &top).is_err());
    }

    #[test]
    fn buchberger_examples() {
        let (r, x, _, _) = setup();
        let ord = ModuleOrder::pot(lex_yx(), 2);
        let g = ModuleElement::new(vec![x.scale(3), Polynomial::one(&r)]);
        assert_eq!(module_buchberger(std::slice::from_ref(&g), &ord), vec![g.scale(4)]);
        let e1 = ModuleElement::new(vec![Polynomial::one(&r), Polynomial::zero(&r)]);
        let e2 = ModuleElement::new(vec![Polynomial::zero(&r), Polynomial::one(&r)]);
        assert_eq!(module_buchberger(&[e2.clone(), e1.clone()], &ord), vec![e1, e2]);
    }

    #[test]
    fn normalization_syzygies() {
        let (r, x, y, f) = setup();
        let (u0, u1) = (y.clone(), x.pow(4));
        let ord = ModuleOrder::pot(lex_yx(), 3);
        let syz = syzygy(&[u0.clone(), u1.clone(), f.clone()], Some(&ord));
        let expect = [
            ModuleElement::new(vec![&y.pow(4) + &x, x.clone(), Polynomial::constant(&r, 10)]),
            ModuleElement::new(vec![x.pow(4).scale(10), y.clone(), Polynomial::zero(&r)]),
            ModuleElement::new(vec![Polynomial::zero(&r), f.clone(), x.pow(4).scale(10)]),
        ];
        assert_eq!(syz.generators.len(), 3);
        for (g, e) in syz.generators.iter().zip(expect.iter()) {
            let lc = g.leading_term(&ord).unwrap().2;
            let elc = e.leading_term(&ord).unwrap().2;
            assert_eq!(g.scale(elc), e.scale(lc));
        }
        // the larger system of the first loop
        let a = y.clone();
        let fs = vec![u1.pow(2), &a * &u0, &a * &u1, f.clone()];
        let syz = syzygy(&fs, Some(&ModuleOrder::pot(lex_yx(), 4)));
        let target = ModuleElement::new(vec![
            Polynomial::one(&r),
            &y.pow(3) * &x.pow(3),
            Polynomial::one(&r),
            x.pow(3).scale(10),
        ]);
        assert!(syz.generators.contains(&target));
        let h = lift_representation(&u1.pow(2), &fs[1..], Some(&ModuleOrder::pot(lex_yx(), 3))).unwrap();
        assert_eq!(h[0], (&y.pow(3) * &x.pow(3)).neg());
        assert_eq!(h[1], Polynomial::constant(&r, -1));
        let m = syzygy_modulo(&[u0, u1], &[f], Some(&ModuleOrder::pot(lex_yx(), 2)));
        let eta1 = ModuleElement::new(vec![&y.pow(4) + &x, x.clone()]);
        let eta2 = ModuleElement::new(vec![x.pow(4).scale(10), y.clone()]);
        let o2 = ModuleOrder::pot(lex_yx(), 2);
        assert!(in_module(&eta1, &m.generators, &o2));
        assert!(in_module(&eta2, &m.generators, &o2));
        for g in &m.generators {
            assert!(in_module(g, &[eta1.clone(), eta2.clone()], &o2)
                || normal_form(&g.dot(&[y.clone(), x.pow(4)]), &[setup().3], &lex_yx()).is_zero());
        }
    }

    #[test]
    fn syzygy_trivial_cases() {
        let (r, x, y, f) = setup();
        assert!(syzygy(std::slice::from_ref(&f), None).generators.is_empty());
        let s = syzygy(&[f.clone(), f.clone()], None);
        let v = ModuleElement::new(vec![Polynomial::one(&r), Polynomial::constant(&r, -1)]);
        assert!(in_module(&v, &s.generators, &s.order));
        let h = lift_representation(&x, &[x.clone(), y.clone()], None).unwrap();
        assert_eq!(h, vec![Polynomial::one(&r), Polynomial::zero(&r)]);
        let h = lift_representation(&(&x.pow(2) + &(&x * &y)), std::slice::from_ref(&x), None).unwrap();
        assert_eq!(h, vec![&x + &y]);
        assert!(matches!(lift_representation(&y, std::slice::from_ref(&x), None), Err(Error::NotInIdeal)));
        // syz_I(1) is I itself
        let m = syzygy_modulo(&[Polynomial::one(&r)], std::slice::from_ref(&f), None);
        assert_eq!(m.generators, vec![ModuleElement::new(vec![f.clone()])]);
        let m = syzygy_modulo(&[y.clone(), y.clone()], std::slice::from_ref(&f), None);
        let v = ModuleElement::new(vec![Polynomial::one(&r), Polynomial::constant(&r, -1)]);
        assert!(in_module(&v, &m.generators, &m.order));
        // nothing in k[x] kills 1 modulo F
        let e = syzygy_modulo_eliminated(&[Polynomial::one(&r)], std::slice::from_ref(&f), 1).unwrap();
        assert!(e.is_empty());
        let all = syzygy_modulo_eliminated(std::slice::from_ref(&y), std::slice::from_ref(&f), 2).unwrap();
        assert_eq!(all.len(), 1);
        let _ = buchberger(&[f], &lex_yx());
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
        fn syzygy_properties(pi in 0usize..4, a in terms(), b in terms(), c in terms(), i in terms(), top in any::<bool>()) {
            let r = Ring::plane(PrimeField::new([2u64, 3, 5, 11][pi]).unwrap());
            let fs = vec![arb_poly(&r, &a), arb_poly(&r, &b), arb_poly(&r, &c)];
            prop_assume!(fs.iter().all(|f| !f.is_zero()));
            let base = MonomialOrder::grevlex(vec![0, 1]);
            let ord = if top { ModuleOrder::top(base, 3) } else { ModuleOrder::pot(base, 3) };
            let s = syzygy(&fs, Some(&ord));
            prop_assert!(!s.generators.is_empty());
            for g in &s.generators {
                prop_assert!(g.dot(&fs).is_zero());
            }
            prop_assert!(is_module_groebner(&s.generators, &ord));
            let ig = arb_poly(&r, &i);
            prop_assume!(!ig.is_zero());
            let m = syzygy_modulo(&fs, std::slice::from_ref(&ig), Some(&ord));
            for g in &m.generators {
                prop_assert!(normal_form(&g.dot(&fs), &buchberger(std::slice::from_ref(&ig), &MonomialOrder::grevlex(vec![0, 1])), &MonomialOrder::grevlex(vec![0, 1])).is_zero());
            }
            prop_assert!(is_module_groebner(&m.generators, &ord));
            let e = syzygy_modulo_eliminated(&fs, std::slice::from_ref(&ig), 1).unwrap();
            for g in &e {
                prop_assert!(g.coords.iter().all(|c| c.degree_in(1).unwrap_or(0) == 0));
            }
            // lifting round trip
            let target = &(&fs[0] * &fs[1]) + &fs[2];
            let h = lift_representation(&target, &fs, None).unwrap();
            prop_assert_eq!(ModuleElement::new(h).dot(&fs), target);
        }
    }
}
