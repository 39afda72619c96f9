//! Exact linear algebra over a prime field.
//!
//! Scalars are residues in `[0, p)` stored as `u64`; the modulus is kept below
//! 2^32 so that a product of two residues never overflows. Every subspace is
//! stored in canonical reduced row-echelon form, which makes equality of
//! subspaces plain structural equality.
//!
//! Elimination always picks the lowest eligible column as pivot and consumes
//! rows in input order, so results are reproducible for a fixed input.

use crate::error::{usage, Error, Result};

pub type Scalar = u64;

/// Sparse row: strictly increasing column indices, no stored zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Default characteristic. Prime, and congruent to 1 mod 3.
pub const DEFAULT_PRIME: u64 = 1_000_003;

/// Trial division; adequate for moduli below 2^32.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The prime field F_p together with a fixed primitive cube root of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    omega: Scalar,
}

impl PrimeField {
    /// Characteristic 0 would select rational arithmetic, which this build does
    /// not provide.
    pub fn new(p: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::Unsupported(
                "characteristic 0 (rational arithmetic) is not available".into(),
            ));
        }
        if p >= 1 << 32 {
            return usage(format!("modulus {p} must be below 2^32"));
        }
        if !is_prime(p) {
            return usage(format!("{p} is not prime"));
        }
        if p % 3 != 1 {
            return usage(format!("{p} is not congruent to 1 mod 3"));
        }
        let mut field = PrimeField { p, omega: 1 };
        let e = (p - 1) / 3;
        let omega = (2..p)
            .map(|g| field.pow(g, e))
            .find(|&w| w != 1)
            .expect("F_p^* has elements of order 3 when p = 1 mod 3");
        field.omega = omega;
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// A root of w^2 + w + 1.
    pub fn cube_root_of_unity(&self) -> Scalar {
        self.omega
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        a * b % self.p
    }

    pub fn pow(&self, mut base: Scalar, mut exp: u64) -> Scalar {
        let mut acc = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Panics on zero; callers only invert pivots.
    pub fn inv(&self, a: Scalar) -> Scalar {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Scalar {
        self.mul(a, self.inv(b))
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        let p = self.p as i64;
        v.rem_euclid(p) as Scalar
    }

    /// Symmetric representative in `(-p/2, p/2]`.
    pub fn to_i64(&self, a: Scalar) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn dot(&self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// `acc += c * v`
    pub fn axpy(&self, acc: &mut [Scalar], c: Scalar, v: &[Scalar]) {
        if c == 0 {
            return;
        }
        for (a, &x) in acc.iter_mut().zip(v) {
            *a = self.add(*a, self.mul(c, x));
        }
    }
}

pub fn sparse_from_dense(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| (i, x))
        .collect()
}

pub fn dense_from_sparse(v: &[(usize, Scalar)], len: usize) -> Vec<Scalar> {
    let mut out = vec![0; len];
    for &(i, x) in v {
        out[i] = x;
    }
    out
}

fn check_row(row: &[(usize, Scalar)], ncols: usize) -> bool {
    row.windows(2).all(|w| w[0].0 < w[1].0) && row.iter().all(|&(c, x)| c < ncols && x != 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            ncols: n,
            rows: (0..n).map(|i| vec![(i, 1)]).collect(),
        }
    }

    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn from_rows(ncols: usize, rows: Vec<SparseVec>) -> Result<Self> {
        if let Some(bad) = rows.iter().position(|r| !check_row(r, ncols)) {
            return usage(format!("row {bad} is not a normalized sparse row"));
        }
        Ok(SparseMatrix { ncols, rows })
    }

    pub fn from_dense(ncols: usize, rows: &[Vec<Scalar>]) -> Self {
        let mut m = SparseMatrix::new(ncols);
        for r in rows {
            m.push_dense(r);
        }
        m
    }

    /// Row must satisfy the sparse-row invariant.
    pub fn push_row(&mut self, row: SparseVec) {
        debug_assert!(check_row(&row, self.ncols));
        self.rows.push(row);
    }

    pub fn push_dense(&mut self, row: &[Scalar]) {
        assert_eq!(row.len(), self.ncols);
        self.rows.push(sparse_from_dense(row));
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn mul_vec(&self, f: &PrimeField, v: &[Scalar]) -> Vec<Scalar> {
        self.rows
            .iter()
            .map(|r| r.iter().fold(0, |acc, &(c, x)| f.add(acc, f.mul(x, v[c]))))
            .collect()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut rows = vec![Vec::new(); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for &(c, x) in r {
                rows[c].push((i, x));
            }
        }
        SparseMatrix {
            ncols: self.rows.len(),
            rows,
        }
    }
}

/// A linear subspace of `F_p^ambient`, tagged with the degree of the graded
/// piece it lives in.
///
/// The basis is the unique reduced row-echelon form: rows are sorted by pivot,
/// each pivot entry is 1 and every pivot column is zero in the other rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    degree: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize, degree: usize) -> Self {
        Subspace {
            ambient,
            degree,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize, degree: usize) -> Self {
        Subspace {
            ambient,
            degree,
            rows: (0..ambient).map(|i| vec![(i, 1)]).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span<I>(f: &PrimeField, ambient: usize, degree: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = SparseVec>,
    {
        let (rows, pivots) = echelonize(f, ambient, rows);
        Subspace {
            ambient,
            degree,
            rows,
            pivots,
        }
    }

    pub fn span_dense<'a, I>(f: &PrimeField, ambient: usize, degree: usize, vecs: I) -> Self
    where
        I: IntoIterator<Item = &'a Vec<Scalar>>,
    {
        Self::span(
            f,
            ambient,
            degree,
            vecs.into_iter().map(|v| {
                assert_eq!(v.len(), ambient);
                sparse_from_dense(v)
            }),
        )
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.degree = degree;
        self
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn basis_dense(&self) -> Vec<Vec<Scalar>> {
        self.rows
            .iter()
            .map(|r| dense_from_sparse(r, self.ambient))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Reduce `v` in place to its canonical residue modulo this subspace
    /// (supported on non-pivot columns only).
    pub fn reduce(&self, f: &PrimeField, v: &mut [Scalar]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            for &(j, x) in row {
                v[j] = f.sub(v[j], f.mul(c, x));
            }
        }
    }

    pub fn contains(&self, f: &PrimeField, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, f: &PrimeField, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis_dense().iter().all(|v| other.contains(f, v))
    }
}

/// Forward elimination into semi-echelon form followed by back substitution.
fn echelonize<I>(f: &PrimeField, ncols: usize, rows: I) -> (Vec<SparseVec>, Vec<usize>)
where
    I: IntoIterator<Item = SparseVec>,
{
    const NONE: usize = usize::MAX;
    let mut basis: Vec<SparseVec> = Vec::new();
    let mut lead: Vec<usize> = Vec::new();
    let mut pivot_row = vec![NONE; ncols];
    let mut acc = vec![0 as Scalar; ncols];

    for row in rows {
        let Some(&(start, _)) = row.first() else {
            continue;
        };
        for &(c, x) in &row {
            acc[c] = x;
        }
        let mut leading = None;
        for c in start..ncols {
            let a = acc[c];
            if a == 0 {
                continue;
            }
            let b = pivot_row[c];
            if b == NONE {
                leading = Some(c);
                break;
            }
            for &(j, x) in &basis[b] {
                acc[j] = f.sub(acc[j], f.mul(a, x));
            }
        }
        if let Some(c) = leading {
            let scale = f.inv(acc[c]);
            let mut out = Vec::new();
            for (j, slot) in acc.iter_mut().enumerate().skip(c) {
                if *slot != 0 {
                    out.push((j, f.mul(*slot, scale)));
                    *slot = 0;
                }
            }
            pivot_row[c] = basis.len();
            basis.push(out);
            lead.push(c);
        }
    }

    // Back substitution, largest pivot first.
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(lead[i]));
    let mut reduced: Vec<Option<SparseVec>> = vec![None; basis.len()];
    for &i in &order {
        let c0 = lead[i];
        for &(j, x) in &basis[i] {
            acc[j] = x;
        }
        for c in c0 + 1..ncols {
            let a = acc[c];
            if a == 0 {
                continue;
            }
            let b = pivot_row[c];
            if b == NONE {
                continue;
            }
            let r = reduced[b]
                .as_ref()
                .expect("larger pivots are reduced first");
            for &(j, x) in r {
                acc[j] = f.sub(acc[j], f.mul(a, x));
            }
        }
        let mut out = Vec::new();
        for (j, slot) in acc.iter_mut().enumerate().skip(c0) {
            if *slot != 0 {
                out.push((j, *slot));
                *slot = 0;
            }
        }
        reduced[i] = Some(out);
    }

    let mut pairs: Vec<(usize, SparseVec)> = lead
        .into_iter()
        .zip(reduced.into_iter().map(|r| r.unwrap()))
        .collect();
    pairs.sort_by_key(|(c, _)| *c);
    let pivots = pairs.iter().map(|(c, _)| *c).collect();
    let rows = pairs.into_iter().map(|(_, r)| r).collect();
    (rows, pivots)
}

/// Row space of `m` in canonical form (degree tag 0).
pub fn rref(f: &PrimeField, m: &SparseMatrix) -> Subspace {
    Subspace::span(f, m.ncols, 0, m.rows.iter().cloned())
}

pub fn rank(f: &PrimeField, m: &SparseMatrix) -> usize {
    rref(f, m).dim()
}

fn check_compatible(u: &Subspace, v: &Subspace) -> Result<()> {
    if u.ambient != v.ambient || u.degree != v.degree {
        return usage(format!(
            "subspaces live in different spaces (ambient {} deg {} vs ambient {} deg {})",
            u.ambient, u.degree, v.ambient, v.degree
        ));
    }
    Ok(())
}

/// The sum U + V.
pub fn combine(f: &PrimeField, u: &Subspace, v: &Subspace) -> Result<Subspace> {
    check_compatible(u, v)?;
    Ok(Subspace::span(
        f,
        u.ambient,
        u.degree,
        u.rows.iter().chain(&v.rows).cloned(),
    ))
}

/// U ∩ V, from the kernel of `[U^T | -V^T]`.
pub fn intersect(f: &PrimeField, u: &Subspace, v: &Subspace) -> Result<Subspace> {
    check_compatible(u, v)?;
    if u.is_zero() || v.is_zero() {
        return Ok(Subspace::zero(u.ambient, u.degree));
    }
    let k = u.dim();
    let mut stacked = SparseMatrix::new(u.ambient);
    for r in &u.rows {
        stacked.push_row(r.clone());
    }
    for r in &v.rows {
        stacked.push_row(r.iter().map(|&(c, x)| (c, f.neg(x))).collect());
    }
    // columns of the system are the basis vectors
    let system = stacked.transpose();
    let ker = kernel(f, &system);
    let basis = u.basis_dense();
    let vecs: Vec<Vec<Scalar>> = ker
        .rows
        .iter()
        .map(|coeffs| {
            let mut acc = vec![0; u.ambient];
            for &(i, c) in coeffs.iter().take_while(|(i, _)| *i < k) {
                f.axpy(&mut acc, c, &basis[i]);
            }
            acc
        })
        .collect();
    Ok(Subspace::span_dense(f, u.ambient, u.degree, &vecs))
}

pub fn member(f: &PrimeField, vec: &[Scalar], u: &Subspace) -> Result<bool> {
    if vec.len() != u.ambient {
        return usage(format!(
            "vector of length {} tested against ambient dimension {}",
            vec.len(),
            u.ambient
        ));
    }
    Ok(u.contains(f, vec))
}

/// Right null space {k : m k = 0}.
pub fn kernel(f: &PrimeField, m: &SparseMatrix) -> Subspace {
    let r = rref(f, m);
    let n = m.ncols;
    let mut is_pivot = vec![false; n];
    for &c in &r.pivots {
        is_pivot[c] = true;
    }
    let mut by_free_col: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
    for (row, &pc) in r.rows.iter().zip(&r.pivots) {
        for &(c, x) in row {
            if c != pc {
                by_free_col[c].push((pc, f.neg(x)));
            }
        }
    }
    let vecs = (0..n).filter(|&c| !is_pivot[c]).map(|c| {
        let mut v = std::mem::take(&mut by_free_col[c]);
        v.push((c, 1));
        v.sort_by_key(|e| e.0);
        v
    });
    Subspace::span(f, n, 0, vecs)
}
