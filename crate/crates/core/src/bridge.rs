//! Evaluation of algebra elements along orbits of the curve.
//!
//! A word `x_{i_0} x_{i_1} … x_{i_{n-1}}` evaluates at `p` to
//! `Π_j ℓ_{i_j}(σ^j p)`, where `ℓ_i` reads the `i`-th coordinate of a
//! normalized point. Every relation vanishes on pairs `(q, σ q)`, so the value
//! is well defined on the algebra. Evaluation is multiplicative with a twist:
//! `ev(uv, p) = ev(u, p) · ev(v, σ^{deg u} p)`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rand::Rng;

use crate::error::{usage, Error, Result};
use crate::exactla::{kernel, sparse_from_dense, PrimeField, Scalar, SparseMatrix};
use crate::hesse::{CurveContext, Divisor, ProjPoint};
use crate::ncgraded::{Algebra, Element, GradedSubspace};

/// Number of sample points used to cut out the central element.
pub const CENTRAL_SAMPLE: usize = 24;

type RowCache = RwLock<HashMap<(usize, ProjPoint), Arc<Vec<Scalar>>>>;

pub struct TwistedEvaluator {
    alg: Arc<Algebra>,
    curve: Arc<CurveContext>,
    cache: RowCache,
}

impl TwistedEvaluator {
    pub fn new(alg: Arc<Algebra>, curve: Arc<CurveContext>) -> Result<Self> {
        if alg.field() != curve.field() {
            return usage("algebra and curve use different fields");
        }
        Ok(TwistedEvaluator {
            alg,
            curve,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn curve(&self) -> &CurveContext {
        &self.curve
    }

    fn field(&self) -> &PrimeField {
        self.alg.field()
    }

    fn orbit(&self, p: &ProjPoint, n: usize) -> Result<Vec<[Scalar; 3]>> {
        let mut out = Vec::with_capacity(n);
        let mut q = *p;
        for j in 0..n {
            if j > 0 {
                q = self.curve.sigma(&q, 1)?;
            }
            out.push(q.coords());
        }
        Ok(out)
    }

    pub fn eval_word(&self, letters: &[u8], p: &ProjPoint) -> Result<Scalar> {
        let f = self.field();
        if !self.curve.on_curve(p) {
            return usage(format!("point {:?} is not on the cubic", p.coords()));
        }
        let orbit = self.orbit(p, letters.len())?;
        Ok(letters
            .iter()
            .zip(&orbit)
            .fold(1, |acc, (&l, q)| f.mul(acc, q[l as usize])))
    }

    /// Values of the standard words of degree `n` at `p`.
    pub fn row(&self, n: usize, p: &ProjPoint) -> Result<Arc<Vec<Scalar>>> {
        if let Some(r) = self.cache.read().expect("cache lock").get(&(n, *p)) {
            return Ok(Arc::clone(r));
        }
        if !self.curve.on_curve(p) {
            return usage(format!("point {:?} is not on the cubic", p.coords()));
        }
        let f = self.field();
        let orbit = self.orbit(p, n)?;
        let mut level = vec![1 as Scalar];
        for (m, q) in orbit.iter().enumerate() {
            let ctx = self.alg.context(m + 1)?;
            level = (0..ctx.dim())
                .map(|t| {
                    let (k, j) = parent_of(ctx.standard()[t]);
                    let k = self
                        .alg
                        .context(m)?
                        .position(k)
                        .expect("prefix-closed basis");
                    Ok(f.mul(level[k], q[j as usize]))
                })
                .collect::<Result<_>>()?;
        }
        self.alg.context(n)?;
        let row = Arc::new(level);
        self.cache
            .write()
            .expect("cache lock")
            .insert((n, *p), Arc::clone(&row));
        Ok(row)
    }

    pub fn eval(&self, u: &Element, p: &ProjPoint) -> Result<Scalar> {
        let row = self.row(u.degree, p)?;
        Ok(self.field().dot(&row, &u.coords))
    }

    /// Matrix whose rows are the evaluation rows at `pts`.
    pub fn eval_matrix(&self, n: usize, pts: &[ProjPoint]) -> Result<SparseMatrix> {
        let mut m = SparseMatrix::new(self.alg.dim(n)?);
        for p in pts {
            m.push_row(sparse_from_dense(&self.row(n, p)?));
        }
        Ok(m)
    }

    /// Elements of `S_n` vanishing at each of the (distinct) points.
    pub fn vanishing_space(&self, n: usize, pts: &[ProjPoint]) -> Result<GradedSubspace> {
        for (i, p) in pts.iter().enumerate() {
            if pts[..i].contains(p) {
                return Err(Error::Unsupported(format!(
                    "point {:?} repeated: vanishing to higher order is not supported",
                    p.coords()
                )));
            }
        }
        Ok(kernel(self.field(), &self.eval_matrix(n, pts)?).with_degree(n))
    }

    /// The point space `W(p)`: linear forms vanishing at `p`.
    pub fn point_space(&self, p: &ProjPoint) -> Result<GradedSubspace> {
        self.vanishing_space(1, &[*p])
    }

    /// The degree-3 element killed by evaluation along the whole curve.
    pub fn central_element<R: Rng>(&self, rng: &mut R, sample: usize) -> Result<CentralElement> {
        let pts = self.curve.sample_points(rng, sample + 10, &[], 0)?;
        let (fit, fresh) = pts.split_at(sample);
        let space = self.vanishing_space(3, fit)?;
        if space.dim() != 1 {
            return Err(Error::Degenerate(format!(
                "curve evaluation on S_3 has kernel of dimension {}",
                space.dim()
            )));
        }
        if !self.alg.is_central(&space)? {
            return Err(Error::Degenerate(
                "the degree-3 kernel is not central".into(),
            ));
        }
        let elem = self.alg.elements(&space).remove(0);
        for p in fresh {
            if self.eval(&elem, p)? != 0 {
                return Err(Error::Degenerate(format!(
                    "degree-3 kernel does not vanish at {:?}",
                    p.coords()
                )));
            }
        }
        Ok(CentralElement { elem, space })
    }
}

fn parent_of(word: u64) -> (u64, u8) {
    (word / 3, (word % 3) as u8)
}

/// The central element `g ∈ S_3`, scaled so its first nonzero coordinate is 1.
#[derive(Clone, Debug)]
pub struct CentralElement {
    elem: Element,
    space: GradedSubspace,
}

impl CentralElement {
    pub fn element(&self) -> &Element {
        &self.elem
    }

    pub fn span(&self) -> &GradedSubspace {
        &self.space
    }
}

/// One row of a blowup Hilbert table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerRow {
    pub n: usize,
    pub dim: usize,
    pub mod_g: usize,
    /// `dim(R_n ∩ g·S_{3n-3})`.
    pub g_part: usize,
}

#[derive(Clone, Debug)]
pub struct BlowupTable {
    pub spaces: Vec<GradedSubspace>,
    pub rows: Vec<LayerRow>,
}

/// Evaluator plus the central element and its multiples.
pub struct Bridge {
    ev: TwistedEvaluator,
    g: CentralElement,
    g_layers: Vec<GradedSubspace>,
}

impl Bridge {
    pub fn new<R: Rng>(alg: Arc<Algebra>, curve: Arc<CurveContext>, rng: &mut R) -> Result<Self> {
        let ev = TwistedEvaluator::new(alg, curve)?;
        let g = ev.central_element(rng, CENTRAL_SAMPLE)?;
        let alg = ev.algebra();
        let g_layers = (0..=alg.cap())
            .map(|n| {
                if n < 3 {
                    alg.zero(n)
                } else {
                    alg.mult(g.span(), &alg.full(n - 3)?)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Bridge { ev, g, g_layers })
    }

    pub fn evaluator(&self) -> &TwistedEvaluator {
        &self.ev
    }

    pub fn algebra(&self) -> &Algebra {
        self.ev.algebra()
    }

    pub fn curve(&self) -> &CurveContext {
        self.ev.curve()
    }

    pub fn g(&self) -> &CentralElement {
        &self.g
    }

    /// `g · S_{n-3}` (zero below degree 3).
    pub fn g_layer(&self, n: usize) -> Result<&GradedSubspace> {
        self.g_layers.get(n).ok_or_else(|| {
            Error::Resource(format!(
                "degree {n} exceeds the degree cap {}",
                self.algebra().cap()
            ))
        })
    }

    /// `g^k · S_{n-3k}`.
    pub fn g_power_span(&self, k: usize) -> Result<GradedSubspace> {
        self.algebra().power(self.g.span(), k)
    }

    pub fn mod_g_dim(&self, u: &GradedSubspace) -> Result<usize> {
        self.algebra().quotient_dim(u, self.g_layer(u.degree())?)
    }

    /// Degree-3 elements vanishing on the divisor.
    pub fn v_of_divisor(&self, d: &Divisor) -> Result<GradedSubspace> {
        if d.degree() > 7 {
            return usage(format!("divisor degree {} exceeds 7", d.degree()));
        }
        let v = self.ev.vanishing_space(3, d.points())?;
        if v.dim() != 10 - d.degree() {
            return Err(Error::Degenerate(format!(
                "V(D) has dimension {} instead of {}",
                v.dim(),
                10 - d.degree()
            )));
        }
        if !v.contains(self.algebra().field(), &self.g.element().coords) {
            return Err(Error::Degenerate("g does not lie in V(D)".into()));
        }
        Ok(v)
    }

    /// `R(D)_1, …, R(D)_nmax` in S-degrees 3, 6, …, with their layers modulo g.
    pub fn r_of_d(&self, d: &Divisor, nmax: usize) -> Result<BlowupTable> {
        let v = self.v_of_divisor(d)?;
        self.blowup_table(&v, nmax)
    }

    pub fn blowup_table(&self, v: &GradedSubspace, nmax: usize) -> Result<BlowupTable> {
        let alg = self.algebra();
        let spaces = alg.closure(v, nmax)?;
        let rows = spaces
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mod_g = self.mod_g_dim(r)?;
                Ok(LayerRow {
                    n: i + 1,
                    dim: r.dim(),
                    mod_g,
                    g_part: r.dim() - mod_g,
                })
            })
            .collect::<Result<_>>()?;
        Ok(BlowupTable { spaces, rows })
    }
}
