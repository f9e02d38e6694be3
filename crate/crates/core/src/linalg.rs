//! Exact sparse linear algebra over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, d)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(p, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Sparse vector with strictly increasing indices and no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(Vec<(usize, Q)>);

impl SparseVec {
    pub fn new() -> Self {
        SparseVec(Vec::new())
    }

    pub fn unit(i: usize) -> Self {
        SparseVec(vec![(i, Q::one())])
    }

    pub fn term(i: usize, c: Q) -> Self {
        if c.is_zero() {
            SparseVec::new()
        } else {
            SparseVec(vec![(i, c)])
        }
    }

    /// Sums duplicate indices and drops zeros.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Q)>) -> Self {
        let mut acc = Accumulator::default();
        for (i, c) in entries {
            acc.add(i, c);
        }
        acc.finish()
    }

    pub fn entries(&self) -> &[(usize, Q)] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<(usize, Q)> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> Option<&Q> {
        self.0.binary_search_by_key(&i, |e| e.0).ok().map(|k| &self.0[k].1)
    }

    pub fn leading(&self) -> Option<usize> {
        self.0.first().map(|e| e.0)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(i, x)| (*i, x * c)).collect())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &SparseVec, c: &Q) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() || y < b.len() {
            if y == b.len() || (x < a.len() && a[x].0 < b[y].0) {
                out.push(a[x].clone());
                x += 1;
            } else if x == a.len() || b[y].0 < a[x].0 {
                out.push((b[y].0, &b[y].1 * c));
                y += 1;
            } else {
                let s = &a[x].1 + &b[y].1 * c;
                if !s.is_zero() {
                    out.push((a[x].0, s));
                }
                x += 1;
                y += 1;
            }
        }
        SparseVec(out)
    }

    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> Self {
        SparseVec::from_entries(self.0.iter().map(|(i, c)| (f(*i), c.clone())))
    }
}

/// Accumulates `(index, coefficient)` contributions.
#[derive(Clone, Debug, Default)]
pub struct Accumulator(BTreeMap<usize, Q>);

impl Accumulator {
    pub fn add(&mut self, i: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(i) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_vec(&mut self, v: &SparseVec, c: &Q) {
        for (i, x) in v.entries() {
            self.add(*i, x * c);
        }
    }

    pub fn finish(self) -> SparseVec {
        SparseVec(self.0.into_iter().collect())
    }
}

/// Column-major sparse matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            columns: vec![SparseVec::new(); cols],
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns.iter().all(|c| c.entries().last().map_or(true, |e| e.0 < rows)));
        SparseMatrix { rows, columns }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix::from_columns(n, (0..n).map(SparseVec::unit).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.nnz()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::default();
        for (j, c) in v.entries() {
            acc.add_vec(&self.columns[*j], c);
        }
        acc.finish()
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), other.rows, "dimension mismatch");
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        SparseMatrix::from_columns(self.rows, columns)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols = vec![Vec::new(); self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, x) in c.entries() {
                cols[*i].push((j, x.clone()));
            }
        }
        SparseMatrix::from_columns(self.cols(), cols.into_iter().map(SparseVec).collect())
    }

    /// `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, Q)> {
        let mut out = Vec::with_capacity(self.nnz());
        for (j, c) in self.columns.iter().enumerate() {
            for (i, x) in c.entries() {
                out.push((*i, j, x.clone()));
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut d = vec![vec![Q::zero(); self.cols()]; self.rows];
        for (i, j, x) in self.triplets() {
            d[i][j] = x;
        }
        d
    }

    pub fn rank(&self) -> usize {
        rank(&self.columns)
    }
}

impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, j, x) in self.triplets() {
            writeln!(f, "{i} {j} {}", format_q(&x))?;
        }
        Ok(())
    }
}

/// Integer types usable by the fraction-free eliminator. Arithmetic
/// reports overflow with `None`.
trait Ring: Clone + Integer + Signed + CheckedMul + CheckedSub {
    fn from_big(x: &BigInt) -> Option<Self>;
}

impl Ring for i128 {
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i128()
    }
}

impl Ring for BigInt {
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
}

/// Clears denominators and content of a rational column.
fn primitive_column(c: &SparseVec) -> Vec<(usize, BigInt)> {
    let mut l = BigInt::one();
    for (_, x) in c.entries() {
        l = l.lcm(x.denom());
    }
    let mut ints: Vec<(usize, BigInt)> = c.entries().iter().map(|(i, x)| (*i, (x * &l).to_integer())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, (_, x)| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for e in &mut ints {
            e.1 /= &g;
        }
    }
    ints
}

/// `b*x - a*y` on sorted sparse integer vectors, content removed.
fn combine<T: Ring>(b: &T, x: &[(usize, T)], a: &T, y: &[(usize, T)]) -> Option<Vec<(usize, T)>> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut p, mut r) = (0, 0);
    while p < x.len() || r < y.len() {
        if r == y.len() || (p < x.len() && x[p].0 < y[r].0) {
            out.push((x[p].0, b.checked_mul(&x[p].1)?));
            p += 1;
        } else if p == x.len() || y[r].0 < x[p].0 {
            out.push((y[r].0, T::zero().checked_sub(&a.checked_mul(&y[r].1)?)?));
            r += 1;
        } else {
            let v = b.checked_mul(&x[p].1)?.checked_sub(&a.checked_mul(&y[r].1)?)?;
            if !v.is_zero() {
                out.push((x[p].0, v));
            }
            p += 1;
            r += 1;
        }
    }
    let g = out.iter().fold(T::zero(), |g, (_, v)| g.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for e in &mut out {
            e.1 = e.1.div_floor(&g);
        }
    }
    Some(out)
}

/// Left-looking elimination keyed on the last nonzero row of each column.
fn eliminate<T: Ring>(columns: &[Vec<(usize, BigInt)>]) -> Option<usize> {
    let mut reduced: Vec<Vec<(usize, T)>> = Vec::new();
    let mut pivot_of: BTreeMap<usize, usize> = BTreeMap::new();
    for c in columns {
        let mut col: Vec<(usize, T)> = c
            .iter()
            .map(|(i, x)| T::from_big(x).map(|v| (*i, v)))
            .collect::<Option<_>>()?;
        while let Some((p, a)) = col.last().cloned() {
            match pivot_of.get(&p) {
                Some(&k) => {
                    let r = &reduced[k];
                    let b = r.last().expect("stored pivots are nonzero").1.clone();
                    let g = a.gcd(&b);
                    col = combine(&b.div_floor(&g), &col, &a.div_floor(&g), r)?;
                }
                None => {
                    pivot_of.insert(p, reduced.len());
                    reduced.push(col);
                    break;
                }
            }
        }
    }
    Some(reduced.len())
}

/// Exact rank of the matrix with the given columns.
pub fn rank(columns: &[SparseVec]) -> usize {
    let ints: Vec<_> = columns.iter().filter(|c| !c.is_zero()).map(primitive_column).collect();
    match eliminate::<i128>(&ints) {
        Some(r) => r,
        None => eliminate::<BigInt>(&ints).expect("big integers do not overflow"),
    }
}

/// Fully reduced row echelon basis of a growing subspace. Pivots are the
/// leading indices, normalized to 1; every other basis vector vanishes at
/// each pivot.
#[derive(Clone, Debug, Default)]
pub struct Rref {
    rows: Vec<SparseVec>,
    pivots: BTreeMap<usize, usize>,
}

impl Rref {
    pub fn new() -> Self {
        Rref::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        loop {
            let hit = v.entries().iter().find_map(|(i, c)| self.pivots.get(i).map(|&r| (r, c.clone())));
            match hit {
                Some((r, c)) => v = v.add_scaled(&self.rows[r], &-c),
                None => return v,
            }
        }
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let w = self.reduce(v);
        let Some(p) = w.leading() else {
            return false;
        };
        let lead = w.get(p).unwrap().clone();
        let w = w.scale(&lead.recip());
        for row in &mut self.rows {
            if let Some(c) = row.get(p).cloned() {
                *row = row.add_scaled(&w, &-c);
            }
        }
        self.pivots.insert(p, self.rows.len());
        self.rows.push(w);
        true
    }

    /// Basis vectors sorted by pivot.
    pub fn basis(&self) -> Vec<(usize, SparseVec)> {
        self.pivots.iter().map(|(&p, &r)| (p, self.rows[r].clone())).collect()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }
}
