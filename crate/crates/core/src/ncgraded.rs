//! Graded pieces of a quadratic algebra on three generators.
//!
//! Words are encoded in base 3 with `x = 0`, `y = 1`, `z = 2` and the first
//! letter most significant, so within one degree the integer order is the
//! lexicographic order with `x < y < z`.
//!
//! Degree `n` is built from degree `n - 1`: the piece `S_n` is the quotient of
//! `S_{n-1} ⊗ S_1` by the images of `u ⊗ r` for standard words `u` of degree
//! `n - 2` and relations `r`. Columns are ordered so that elimination removes
//! the largest word of each relation first; the surviving (standard) words
//! therefore form a prefix-closed set, and every standard word of degree `n`
//! is a standard word of degree `n - 1` followed by one letter. The direct
//! construction over all `3^n` words is kept in [`direct_standard_words`] as a
//! cross-check.

use crate::error::{usage, Error, Result};
use crate::exactla::{
    dense_from_sparse, intersect, kernel, sparse_from_dense, PrimeField, Scalar, SparseMatrix,
    SparseVec, Subspace,
};

pub const GENERATORS: [char; 3] = ['x', 'y', 'z'];

/// Hard limit on the degree cap.
pub const MAX_CAP: usize = 12;

/// A subspace of `S_n`, with coordinates over the standard words of degree `n`.
pub type GradedSubspace = Subspace;

pub fn word_index(letters: &[u8]) -> u64 {
    letters.iter().fold(0, |acc, &l| acc * 3 + l as u64)
}

pub fn word_letters(mut index: u64, degree: usize) -> Vec<u8> {
    let mut out = vec![0u8; degree];
    for slot in out.iter_mut().rev() {
        *slot = (index % 3) as u8;
        index /= 3;
    }
    out
}

pub fn word_string(letters: &[u8]) -> String {
    if letters.is_empty() {
        return "1".into();
    }
    letters.iter().map(|&l| GENERATORS[l as usize]).collect()
}

pub fn parse_word(s: &str) -> Result<Vec<u8>> {
    if s == "1" {
        return Ok(Vec::new());
    }
    s.chars()
        .map(|c| match c {
            'x' => Ok(0),
            'y' => Ok(1),
            'z' => Ok(2),
            _ => usage(format!("invalid letter {c:?} in word {s:?}")),
        })
        .collect()
}

/// Quadratic relations over the nine words of degree 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    params: Option<[Scalar; 3]>,
    relations: Vec<SparseVec>,
}

impl Presentation {
    /// `a·xy + b·yx + c·zz`, `a·yz + b·zy + c·xx`, `a·zx + b·xz + c·yy`.
    pub fn sklyanin(f: &PrimeField, a: Scalar, b: Scalar, c: Scalar) -> Result<Self> {
        let p = f.characteristic();
        let (a, b, c) = (a % p, b % p, c % p);
        if a == 0 || b == 0 || c == 0 {
            return usage("Sklyanin parameters must all be nonzero");
        }
        let relations = (0..3u8)
            .map(|k| {
                let (i, j, l) = (k, (k + 1) % 3, (k + 2) % 3);
                let mut dense = [0 as Scalar; 9];
                dense[word_index(&[i, j]) as usize] = a;
                dense[word_index(&[j, i]) as usize] = b;
                dense[word_index(&[l, l]) as usize] = c;
                sparse_from_dense(&dense)
            })
            .collect();
        Ok(Presentation {
            params: Some([a, b, c]),
            relations,
        })
    }

    pub fn free() -> Self {
        Presentation {
            params: None,
            relations: Vec::new(),
        }
    }

    pub fn from_relations(relations: &[[Scalar; 9]]) -> Self {
        Presentation {
            params: None,
            relations: relations.iter().map(|r| sparse_from_dense(r)).collect(),
        }
    }

    /// Adds `delta` to the coefficient of `word` in relation `which`.
    pub fn perturbed(
        &self,
        f: &PrimeField,
        which: usize,
        word: u64,
        delta: Scalar,
    ) -> Result<Self> {
        if which >= self.relations.len() || word >= 9 {
            return usage(format!(
                "no coefficient (relation {which}, word {word}) to perturb"
            ));
        }
        let mut dense = dense_from_sparse(&self.relations[which], 9);
        dense[word as usize] = f.add(dense[word as usize], delta % f.characteristic());
        let mut relations = self.relations.clone();
        relations[which] = sparse_from_dense(&dense);
        Ok(Presentation {
            params: None,
            relations,
        })
    }

    pub fn params(&self) -> Option<[Scalar; 3]> {
        self.params
    }

    pub fn relations(&self) -> &[SparseVec] {
        &self.relations
    }

    /// `t[k][i][j]` is the coefficient of `x_i x_j` in relation `k`; missing
    /// relations are zero.
    pub fn relation_tensor(&self) -> [[[Scalar; 3]; 3]; 3] {
        let mut t = [[[0; 3]; 3]; 3];
        for (k, rel) in self.relations.iter().enumerate().take(3) {
            for &(w, c) in rel {
                t[k][w / 3][w % 3] = c;
            }
        }
        t
    }
}

/// Normal-form data for one degree.
#[derive(Clone, Debug)]
pub struct DegreeContext {
    degree: usize,
    standard: Vec<u64>,
    parent: Vec<(usize, u8)>,
    extension: Vec<SparseVec>,
    relation_rank: usize,
}

impl DegreeContext {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.standard.len()
    }

    /// Standard words, increasing.
    pub fn standard(&self) -> &[u64] {
        &self.standard
    }

    pub fn standard_word(&self, i: usize) -> Vec<u8> {
        word_letters(self.standard[i], self.degree)
    }

    pub fn position(&self, word: u64) -> Option<usize> {
        self.standard.binary_search(&word).ok()
    }

    /// Rank of the relation span inside `S_{n-1} ⊗ S_1`.
    pub fn relation_rank(&self) -> usize {
        self.relation_rank
    }

    /// Normal form of `s_k · x_j` over the next degree, if it has been built.
    pub fn extension(&self, k: usize, j: u8) -> Option<&SparseVec> {
        self.extension.get(k * 3 + j as usize)
    }
}

fn degree_zero() -> DegreeContext {
    DegreeContext {
        degree: 0,
        standard: vec![0],
        parent: Vec::new(),
        extension: Vec::new(),
        relation_rank: 0,
    }
}

/// Builds degree `prev.degree + 1` and fills `prev.extension`.
fn next_degree(
    f: &PrimeField,
    pres: &Presentation,
    before: Option<&DegreeContext>,
    prev: &mut DegreeContext,
) -> DegreeContext {
    let n = prev.degree + 1;
    let ncols = prev.dim() * 3;
    // column c = k*3 + j stands for s_k x_j; it sits at position ncols-1-c
    let pos = |c: usize| ncols - 1 - c;
    let tensor = pres.relation_tensor();
    let mut rows = Vec::new();
    if let Some(before) = before {
        for t in 0..before.dim() {
            for rel in tensor.iter().take(pres.relations.len()) {
                let mut acc = vec![0 as Scalar; ncols];
                for (i, row) in rel.iter().enumerate() {
                    let nf = &before.extension[t * 3 + i];
                    for (j, &c) in row.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        for &(k, x) in nf {
                            let slot = &mut acc[pos(k * 3 + j)];
                            *slot = f.add(*slot, f.mul(c, x));
                        }
                    }
                }
                rows.push(sparse_from_dense(&acc));
            }
        }
    }
    let span = Subspace::span(f, ncols, n, rows);
    let mut pivot_of = vec![None; ncols];
    for (r, &p) in span.pivots().iter().enumerate() {
        pivot_of[ncols - 1 - p] = Some(r);
    }
    let free_cols: Vec<usize> = (0..ncols).filter(|&c| pivot_of[c].is_none()).collect();
    let mut std_pos = vec![usize::MAX; ncols];
    for (i, &c) in free_cols.iter().enumerate() {
        std_pos[c] = i;
    }
    let extension = (0..ncols)
        .map(|c| match pivot_of[c] {
            None => vec![(std_pos[c], 1)],
            Some(r) => {
                let mut v: SparseVec = span.basis()[r]
                    .iter()
                    .filter(|&&(p, _)| ncols - 1 - p != c)
                    .map(|&(p, x)| (std_pos[ncols - 1 - p], f.neg(x)))
                    .collect();
                v.sort_by_key(|e| e.0);
                v
            }
        })
        .collect();
    prev.extension = extension;
    DegreeContext {
        degree: n,
        standard: free_cols
            .iter()
            .map(|&c| prev.standard[c / 3] * 3 + (c % 3) as u64)
            .collect(),
        parent: free_cols.iter().map(|&c| (c / 3, (c % 3) as u8)).collect(),
        extension: Vec::new(),
        relation_rank: span.dim(),
    }
}

/// A homogeneous element, with coordinates over the standard words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    pub degree: usize,
    pub coords: Vec<Scalar>,
}

impl Element {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// The truncated algebra `S_0 ⊕ … ⊕ S_cap`, built once and then read-only.
#[derive(Clone, Debug)]
pub struct Algebra {
    field: PrimeField,
    pres: Presentation,
    cap: usize,
    contexts: Vec<DegreeContext>,
}

impl Algebra {
    pub fn new(field: PrimeField, pres: Presentation, cap: usize) -> Result<Self> {
        if cap > MAX_CAP {
            return usage(format!("degree cap {cap} exceeds the maximum {MAX_CAP}"));
        }
        let mut contexts = vec![degree_zero()];
        for n in 1..=cap {
            if contexts[n - 1].dim() * 3 > 3usize.pow(MAX_CAP as u32) {
                return Err(Error::Resource(format!(
                    "degree {n} piece is too large to build"
                )));
            }
            let (done, last) = contexts.split_at_mut(n - 1);
            let next = next_degree(&field, &pres, done.last(), &mut last[0]);
            contexts.push(next);
        }
        Ok(Algebra {
            field,
            pres,
            cap,
            contexts,
        })
    }

    /// Rejects presentations off the generic locus: `dim S_3` must be 10.
    pub fn validate(&self) -> Result<()> {
        if self.cap >= 3 && self.contexts[3].dim() != 10 {
            return Err(Error::Degenerate(format!(
                "dim S_3 = {} instead of 10",
                self.contexts[3].dim()
            )));
        }
        Ok(())
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn context(&self, n: usize) -> Result<&DegreeContext> {
        self.contexts.get(n).ok_or_else(|| {
            Error::Resource(format!("degree {n} exceeds the degree cap {}", self.cap))
        })
    }

    pub fn dim(&self, n: usize) -> Result<usize> {
        Ok(self.context(n)?.dim())
    }

    pub fn one(&self) -> Element {
        Element {
            degree: 0,
            coords: vec![1],
        }
    }

    pub fn zero_element(&self, n: usize) -> Result<Element> {
        Ok(Element {
            degree: n,
            coords: vec![0; self.dim(n)?],
        })
    }

    pub fn generator(&self, j: u8) -> Element {
        let mut coords = vec![0; 3];
        coords[j as usize] = 1;
        Element { degree: 1, coords }
    }

    /// Element from a standard basis index.
    pub fn basis_element(&self, n: usize, i: usize) -> Result<Element> {
        let mut e = self.zero_element(n)?;
        e.coords[i] = 1;
        Ok(e)
    }

    /// Right multiplication by the generator `x_j`.
    pub fn mul_generator(&self, v: &[Scalar], degree: usize, j: u8) -> Result<Vec<Scalar>> {
        let f = &self.field;
        let ctx = self.context(degree)?;
        let mut out = vec![0; self.dim(degree + 1)?];
        for (k, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(t, x) in ctx.extension(k, j).expect("extension exists below the cap") {
                out[t] = f.add(out[t], f.mul(c, x));
            }
        }
        Ok(out)
    }

    pub fn normal_form_word(&self, letters: &[u8]) -> Result<Element> {
        self.context(letters.len())?;
        if let Some(&bad) = letters.iter().find(|&&l| l > 2) {
            return usage(format!("letter index {bad} out of range"));
        }
        let mut v = vec![1];
        for (m, &l) in letters.iter().enumerate() {
            v = self.mul_generator(&v, m, l)?;
        }
        Ok(Element {
            degree: letters.len(),
            coords: v,
        })
    }

    /// Normal form of a free-algebra vector given by (word index, coefficient).
    pub fn normal_form(&self, degree: usize, free: &[(u64, Scalar)]) -> Result<Element> {
        let f = &self.field;
        let mut acc = self.zero_element(degree)?;
        for &(w, c) in free {
            if degree < 32 && w >= 3u64.pow(degree as u32) {
                return usage(format!("word index {w} out of range for degree {degree}"));
            }
            let nf = self.normal_form_word(&word_letters(w, degree))?;
            f.axpy(&mut acc.coords, c % f.characteristic(), &nf.coords);
        }
        Ok(acc)
    }

    /// `u · s` for every standard word `s` of degree `b`, in standard order.
    pub fn right_products(&self, u: &Element, b: usize) -> Result<Vec<Vec<Scalar>>> {
        self.context(u.degree + b)?;
        let mut level = vec![u.coords.clone()];
        for m in 1..=b {
            let ctx = self.context(m)?;
            level = ctx
                .parent
                .iter()
                .map(|&(k, j)| self.mul_generator(&level[k], u.degree + m - 1, j))
                .collect::<Result<_>>()?;
        }
        Ok(level)
    }

    pub fn mul(&self, u: &Element, v: &Element) -> Result<Element> {
        let f = &self.field;
        let prods = self.right_products(u, v.degree)?;
        let mut acc = self.zero_element(u.degree + v.degree)?;
        for (p, &c) in prods.iter().zip(&v.coords) {
            f.axpy(&mut acc.coords, c, p);
        }
        Ok(acc)
    }

    pub fn sub(&self, u: &Element, v: &Element) -> Element {
        let f = &self.field;
        Element {
            degree: u.degree,
            coords: u
                .coords
                .iter()
                .zip(&v.coords)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: Scalar, u: &Element) -> Element {
        Element {
            degree: u.degree,
            coords: u.coords.iter().map(|&a| self.field.mul(c, a)).collect(),
        }
    }

    pub fn full(&self, n: usize) -> Result<GradedSubspace> {
        Ok(Subspace::full(self.dim(n)?, n))
    }

    pub fn zero(&self, n: usize) -> Result<GradedSubspace> {
        Ok(Subspace::zero(self.dim(n)?, n))
    }

    pub fn span(&self, n: usize, elems: &[Element]) -> Result<GradedSubspace> {
        let dim = self.dim(n)?;
        if let Some(e) = elems.iter().find(|e| e.degree != n) {
            return usage(format!(
                "element of degree {} in a degree-{n} span",
                e.degree
            ));
        }
        Ok(Subspace::span_dense(
            &self.field,
            dim,
            n,
            elems.iter().map(|e| &e.coords),
        ))
    }

    pub fn elements(&self, u: &GradedSubspace) -> Vec<Element> {
        u.basis_dense()
            .into_iter()
            .map(|coords| Element {
                degree: u.degree(),
                coords,
            })
            .collect()
    }

    fn check(&self, u: &GradedSubspace) -> Result<()> {
        if self.dim(u.degree())? != u.ambient() {
            return usage(format!(
                "subspace ambient {} does not match dim S_{}",
                u.ambient(),
                u.degree()
            ));
        }
        Ok(())
    }

    /// `U · V`, spanned by products of basis elements.
    pub fn mult(&self, u: &GradedSubspace, v: &GradedSubspace) -> Result<GradedSubspace> {
        self.check(u)?;
        self.check(v)?;
        let n = u.degree() + v.degree();
        let dim = self.dim(n)?;
        let f = &self.field;
        let vs = v.basis_dense();
        let mut out = Vec::with_capacity(u.dim() * v.dim());
        for ue in self.elements(u) {
            let prods = self.right_products(&ue, v.degree())?;
            for vc in &vs {
                let mut acc = vec![0; dim];
                for (p, &c) in prods.iter().zip(vc) {
                    f.axpy(&mut acc, c, p);
                }
                out.push(sparse_from_dense(&acc));
            }
        }
        Ok(Subspace::span(f, dim, n, out))
    }

    pub fn mult_all(&self, factors: &[&GradedSubspace]) -> Result<GradedSubspace> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::Usage("empty product".into()))?;
        rest.iter()
            .try_fold((*first).clone(), |acc, v| self.mult(&acc, v))
    }

    pub fn power(&self, v: &GradedSubspace, k: usize) -> Result<GradedSubspace> {
        if k == 0 {
            return self.full(0);
        }
        let mut acc = v.clone();
        for _ in 1..k {
            acc = self.mult(&acc, v)?;
        }
        Ok(acc)
    }

    /// `A_d, A_{2d}, …, A_{nmax·d}` for the subalgebra generated by `V ⊆ S_d`.
    pub fn closure(&self, v: &GradedSubspace, nmax: usize) -> Result<Vec<GradedSubspace>> {
        self.check(v)?;
        let d = v.degree();
        self.context(d * nmax)?;
        let mut out: Vec<GradedSubspace> = Vec::with_capacity(nmax);
        for _ in 0..nmax {
            let next = match out.last() {
                None => v.clone(),
                Some(prev) => self.mult(v, prev)?,
            };
            out.push(next);
        }
        Ok(out)
    }

    /// Right side: `{y ∈ S_a : z·y ⊆ w}`. Left side: `{y ∈ S_a : y·z ⊆ w}`.
    pub fn transporter(
        &self,
        z: &GradedSubspace,
        w: &GradedSubspace,
        a: usize,
        side: Side,
    ) -> Result<GradedSubspace> {
        self.check(z)?;
        self.check(w)?;
        if w.degree() != z.degree() + a {
            return usage(format!(
                "target degree {} is not {} + {a}",
                w.degree(),
                z.degree()
            ));
        }
        let f = &self.field;
        let da = self.dim(a)?;
        let dw = w.ambient();
        let zs = self.elements(z);
        // one column per standard word of S_a
        let mut columns: Vec<SparseVec> = vec![Vec::new(); da];
        for (zi, ze) in zs.iter().enumerate() {
            let prods: Vec<Vec<Scalar>> = match side {
                Side::Right => self.right_products(ze, a)?,
                Side::Left => (0..da)
                    .map(|s| self.mul(&self.basis_element(a, s)?, ze).map(|e| e.coords))
                    .collect::<Result<_>>()?,
            };
            for (s, mut p) in prods.into_iter().enumerate() {
                w.reduce(f, &mut p);
                columns[s].extend(
                    p.iter()
                        .enumerate()
                        .filter(|(_, &x)| x != 0)
                        .map(|(i, &x)| (zi * dw + i, x)),
                );
            }
        }
        let system = SparseMatrix::from_rows(zs.len() * dw, columns)?.transpose();
        Ok(kernel(f, &system).with_degree(a))
    }

    /// `{(y_1, …, y_k) ∈ S_a^k : Σ g_i y_i = 0}` in concatenated coordinates.
    pub fn right_syzygies(&self, gens: &[Element], a: usize) -> Result<Subspace> {
        let f = &self.field;
        let da = self.dim(a)?;
        let mut columns = Vec::with_capacity(gens.len() * da);
        for g in gens {
            for p in self.right_products(g, a)? {
                columns.push(sparse_from_dense(&p));
            }
        }
        let d = gens.first().map(|g| g.degree + a).unwrap_or(a);
        let target = self.dim(d)?;
        let system = SparseMatrix::from_rows(target, columns)?.transpose();
        Ok(kernel(f, &system).with_degree(a))
    }

    pub fn is_central(&self, c: &GradedSubspace) -> Result<bool> {
        self.check(c)?;
        if c.dim() != 1 {
            return usage(format!(
                "centrality test needs a line, got dimension {}",
                c.dim()
            ));
        }
        let e = &self.elements(c)[0];
        for j in 0..3 {
            let x = self.generator(j);
            if !self.sub(&self.mul(e, &x)?, &self.mul(&x, e)?).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `dim((U + W) / W)`.
    pub fn quotient_dim(&self, u: &GradedSubspace, w: &GradedSubspace) -> Result<usize> {
        if u.degree() != w.degree() || u.ambient() != w.ambient() {
            return usage(format!(
                "quotient of degree {} by degree {}",
                u.degree(),
                w.degree()
            ));
        }
        let f = &self.field;
        Ok(u.dim() - intersect(f, u, w)?.dim())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Whether `x ↔ y` composed with word reversal maps the relation span to itself.
pub fn opposite_invariance(f: &PrimeField, pres: &Presentation) -> bool {
    let swap = |l: usize| match l {
        0 => 1,
        1 => 0,
        l => l,
    };
    let span = Subspace::span(f, 9, 2, pres.relations.iter().cloned());
    pres.relations.iter().all(|rel| {
        let mut image = [0 as Scalar; 9];
        for &(w, c) in rel {
            let (i, j) = (w / 3, w % 3);
            image[swap(j) * 3 + swap(i)] = c;
        }
        span.contains(f, &image)
    })
}

/// Standard words of degree `n` by eliminating every `u·r·v` over all `3^n`
/// words at once. Exponential; intended for small `n`.
pub fn direct_standard_words(f: &PrimeField, pres: &Presentation, n: usize) -> Vec<u64> {
    let total = 3usize.pow(n as u32);
    let pos = |w: u64| total - 1 - w as usize;
    let mut rows = Vec::new();
    if n >= 2 {
        for left in 0..=n - 2 {
            let right = n - 2 - left;
            let rscale = 3u64.pow(right as u32);
            for u in 0..3u64.pow(left as u32) {
                for v in 0..rscale {
                    for rel in &pres.relations {
                        let mut row: SparseVec = rel
                            .iter()
                            .map(|&(w, c)| (pos((u * 9 + w as u64) * rscale + v), c))
                            .collect();
                        row.sort_by_key(|e| e.0);
                        rows.push(row);
                    }
                }
            }
        }
    }
    let span = Subspace::span(f, total, n, rows);
    let mut is_pivot = vec![false; total];
    for &p in span.pivots() {
        is_pivot[p] = true;
    }
    (0..total as u64).filter(|&w| !is_pivot[pos(w)]).collect()
}
