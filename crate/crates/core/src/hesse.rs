//! The point scheme of a quadratic algebra on three generators.
//!
//! For a presentation with relation tensor `c[k][i][j]`, a pair of points
//! `(p, q)` of the plane is a zero of every relation when `M(p) q = 0`, where
//! `M(p)[k][j] = Σ_i c[k][i][j] p_i`. The cubic `det M(p)` is the curve `E`;
//! the kernel of `M(p)` is `σ(p)`. On `E` the chord-tangent law with an
//! inflection point as identity makes `σ` a translation.

use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;

use crate::error::{usage, Error, Result};
use crate::exactla::{PrimeField, Scalar};
use crate::ncgraded::Presentation;

/// A point of the projective plane, scaled so its first nonzero coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ProjPoint([Scalar; 3]);

impl ProjPoint {
    pub fn new(f: &PrimeField, coords: [Scalar; 3]) -> Result<Self> {
        let p = f.characteristic();
        let coords = coords.map(|c| c % p);
        let Some(&lead) = coords.iter().find(|&&c| c != 0) else {
            return usage("the zero vector is not a projective point");
        };
        let inv = f.inv(lead);
        Ok(ProjPoint(coords.map(|c| f.mul(c, inv))))
    }

    pub fn coords(&self) -> [Scalar; 3] {
        self.0
    }
}

fn cross(f: &PrimeField, a: [Scalar; 3], b: [Scalar; 3]) -> [Scalar; 3] {
    [
        f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
        f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
        f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
    ]
}

fn dot3(f: &PrimeField, a: [Scalar; 3], b: [Scalar; 3]) -> Scalar {
    f.dot(&a, &b)
}

/// Exponents of the ten cubic monomials, degree-lexicographic.
pub const CUBIC_MONOMIALS: [[u8; 3]; 10] = [
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

const XYZ: usize = 4;
const CUBES: [usize; 3] = [0, 6, 9];

pub fn monomial_name(e: [u8; 3]) -> String {
    let mut s = String::new();
    for (v, &k) in ['x', 'y', 'z'].iter().zip(&e) {
        match k {
            0 => {}
            1 => s.push(*v),
            k => s.push_str(&format!("{v}^{k}")),
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneCubic {
    coeffs: [Scalar; 10],
}

impl PlaneCubic {
    pub fn new(coeffs: [Scalar; 10]) -> Result<Self> {
        if coeffs.iter().all(|&c| c == 0) {
            return Err(Error::Degenerate("the cubic is identically zero".into()));
        }
        Ok(PlaneCubic { coeffs })
    }

    pub fn coeffs(&self) -> &[Scalar; 10] {
        &self.coeffs
    }

    pub fn eval(&self, f: &PrimeField, p: [Scalar; 3]) -> Scalar {
        CUBIC_MONOMIALS
            .iter()
            .zip(&self.coeffs)
            .fold(0, |acc, (e, &c)| {
                let m = (0..3).fold(c, |m, v| f.mul(m, f.pow(p[v], e[v] as u64)));
                f.add(acc, m)
            })
    }

    pub fn grad(&self, f: &PrimeField, p: [Scalar; 3]) -> [Scalar; 3] {
        let mut g = [0; 3];
        for (e, &c) in CUBIC_MONOMIALS.iter().zip(&self.coeffs) {
            for v in 0..3 {
                if e[v] == 0 {
                    continue;
                }
                let mut m = f.mul(c, e[v] as Scalar);
                for w in 0..3 {
                    let k = if w == v { e[w] - 1 } else { e[w] };
                    m = f.mul(m, f.pow(p[w], k as u64));
                }
                g[v] = f.add(g[v], m);
            }
        }
        g
    }

    /// `(λ, μ)` with the cubic equal to `λ·xyz + μ·(x³ + y³ + z³)`, if it has
    /// that shape.
    pub fn hesse_form(&self) -> Option<(Scalar, Scalar)> {
        let mu = self.coeffs[0];
        let off_support = (0..10).any(|i| i != XYZ && !CUBES.contains(&i) && self.coeffs[i] != 0);
        if off_support || CUBES.iter().any(|&i| self.coeffs[i] != mu) {
            return None;
        }
        Some((self.coeffs[XYZ], mu))
    }

    pub fn is_proportional(&self, f: &PrimeField, other: &PlaneCubic) -> bool {
        let Some(i) = self.coeffs.iter().position(|&c| c != 0) else {
            return false;
        };
        if other.coeffs[i] == 0 {
            return false;
        }
        let s = f.div(other.coeffs[i], self.coeffs[i]);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(&a, &b)| f.mul(s, a) == b)
    }
}

type Linear = [Scalar; 3];
type Poly = HashMap<[u8; 3], Scalar>;

fn poly_mul(f: &PrimeField, a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, &ca) in a {
        for (eb, &cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            let slot = out.entry(e).or_insert(0);
            *slot = f.add(*slot, f.mul(ca, cb));
        }
    }
    out
}

fn linear_poly(l: Linear) -> Poly {
    let mut p = Poly::new();
    for (v, &c) in l.iter().enumerate() {
        let mut e = [0; 3];
        e[v] = 1;
        p.insert(e, c);
    }
    p
}

fn det_of_linear_forms(f: &PrimeField, m: [[Linear; 3]; 3]) -> [Scalar; 10] {
    let mut total = [0 as Scalar; 10];
    let perms = [
        ([0, 1, 2], false),
        ([1, 2, 0], false),
        ([2, 0, 1], false),
        ([0, 2, 1], true),
        ([2, 1, 0], true),
        ([1, 0, 2], true),
    ];
    for (perm, odd) in perms {
        let term = (0..3).fold(Poly::from([([0, 0, 0], 1)]), |acc, row| {
            poly_mul(f, &acc, &linear_poly(m[row][perm[row]]))
        });
        for (i, e) in CUBIC_MONOMIALS.iter().enumerate() {
            let c = *term.get(e).unwrap_or(&0);
            total[i] = if odd {
                f.sub(total[i], c)
            } else {
                f.add(total[i], c)
            };
        }
    }
    total
}

fn right_matrix(t: &[[[Scalar; 3]; 3]; 3]) -> [[Linear; 3]; 3] {
    // entry (k, j) is the linear form p ↦ Σ_i t[k][i][j] p_i
    let mut m = [[[0; 3]; 3]; 3];
    for k in 0..3 {
        for j in 0..3 {
            for i in 0..3 {
                m[k][j][i] = t[k][i][j];
            }
        }
    }
    m
}

fn left_matrix(t: &[[[Scalar; 3]; 3]; 3]) -> [[Linear; 3]; 3] {
    // entry (k, i) is the linear form q ↦ Σ_j t[k][i][j] q_j
    let mut m = [[[0; 3]; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            m[k][i] = t[k][i];
        }
    }
    m
}

/// `det M(p)` as a plane cubic.
pub fn point_scheme(f: &PrimeField, pres: &Presentation) -> Result<PlaneCubic> {
    PlaneCubic::new(det_of_linear_forms(
        f,
        right_matrix(&pres.relation_tensor()),
    ))
}

/// The determinant cut out by the inverse map; proportional to the point
/// scheme for these algebras.
pub fn left_point_scheme(f: &PrimeField, pres: &Presentation) -> Result<PlaneCubic> {
    PlaneCubic::new(det_of_linear_forms(f, left_matrix(&pres.relation_tensor())))
}

fn eval_matrix(f: &PrimeField, m: &[[Linear; 3]; 3], p: [Scalar; 3]) -> [[Scalar; 3]; 3] {
    let mut out = [[0; 3]; 3];
    for k in 0..3 {
        for j in 0..3 {
            out[k][j] = dot3(f, m[k][j], p);
        }
    }
    out
}

/// The kernel line of a rank-2 matrix.
fn rank_two_kernel(f: &PrimeField, m: [[Scalar; 3]; 3]) -> Option<[Scalar; 3]> {
    let candidates = [
        cross(f, m[0], m[1]),
        cross(f, m[0], m[2]),
        cross(f, m[1], m[2]),
    ];
    let v = candidates.into_iter().find(|v| v.iter().any(|&c| c != 0))?;
    m.iter().all(|row| dot3(f, *row, v) == 0).then_some(v)
}

/// Geometric data derived from a presentation whose point scheme is a smooth
/// Hesse cubic.
#[derive(Clone, Debug)]
pub struct CurveContext {
    field: PrimeField,
    cubic: PlaneCubic,
    lambda: Scalar,
    right: [[Linear; 3]; 3],
    left: [[Linear; 3]; 3],
    flexes: [ProjPoint; 9],
    basepoint: ProjPoint,
    translation: ProjPoint,
    order_bound: u64,
}

impl CurveContext {
    /// Fails with a degeneracy error when the cubic is singular or not of Hesse
    /// shape, or when the translation has order at most `threshold`.
    pub fn derive(f: &PrimeField, pres: &Presentation, threshold: u64) -> Result<Self> {
        if threshold == 0 {
            return usage("order threshold must be at least 1");
        }
        let cubic = point_scheme(f, pres)?;
        let (lam, mu) = cubic
            .hesse_form()
            .filter(|&(_, mu)| mu != 0)
            .ok_or_else(|| Error::Degenerate("point scheme is not a Hesse cubic".into()))?;
        let lambda = f.div(lam, mu);
        if f.pow(lambda, 3) == f.from_i64(-27) {
            return Err(Error::Degenerate(format!(
                "Hesse cubic with λ = {} is singular",
                f.to_i64(lambda)
            )));
        }
        let left_cubic = left_point_scheme(f, pres)?;
        if !cubic.is_proportional(f, &left_cubic) {
            return Err(Error::Degenerate(
                "left and right point schemes differ".into(),
            ));
        }
        let tensor = pres.relation_tensor();
        let w = f.cube_root_of_unity();
        let w2 = f.mul(w, w);
        let mut flexes = Vec::with_capacity(9);
        for eps in [1, w, w2] {
            let e = f.neg(eps);
            let e_inv = f.neg(f.inv(eps));
            flexes.push(ProjPoint::new(f, [1, e, 0])?);
            flexes.push(ProjPoint::new(f, [0, 1, e])?);
            flexes.push(ProjPoint::new(f, [1, 0, e_inv])?);
        }
        let mut ctx = CurveContext {
            field: f.clone(),
            cubic,
            lambda,
            right: right_matrix(&tensor),
            left: left_matrix(&tensor),
            flexes: flexes.try_into().expect("nine flexes"),
            basepoint: ProjPoint([1, 0, 0]),
            translation: ProjPoint([1, 0, 0]),
            order_bound: threshold,
        };
        for p in ctx.flexes {
            if !ctx.on_curve(&p) {
                return Err(Error::Degenerate("Hesse base point off the cubic".into()));
            }
        }
        ctx.basepoint = ctx
            .flexes
            .iter()
            .copied()
            .find(|p| ctx.is_inflection(p))
            .ok_or_else(|| Error::Degenerate("no inflection among the Hesse base points".into()))?;
        ctx.translation = ctx.sigma(&ctx.basepoint, 1)?;
        if let Some(k) = ctx.order_of(&ctx.translation, threshold) {
            return Err(Error::Degenerate(format!(
                "translation has order {k}, not above {threshold}"
            )));
        }
        Ok(ctx)
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn cubic(&self) -> &PlaneCubic {
        &self.cubic
    }

    /// Normalized Hesse parameter: the cubic is proportional to
    /// `x³ + y³ + z³ + λ·xyz`.
    pub fn lambda(&self) -> Scalar {
        self.lambda
    }

    /// The nine inflection points; index 0 is `(1:−1:0)`.
    pub fn flexes(&self) -> &[ProjPoint; 9] {
        &self.flexes
    }

    pub fn basepoint(&self) -> ProjPoint {
        self.basepoint
    }

    /// `σ(p0)`, so that `σ(p) = p ⊕ r`.
    pub fn translation(&self) -> ProjPoint {
        self.translation
    }

    /// The order of the translation exceeds this bound.
    pub fn order_bound(&self) -> u64 {
        self.order_bound
    }

    pub fn on_curve(&self, p: &ProjPoint) -> bool {
        self.cubic.eval(&self.field, p.0) == 0
    }

    pub fn point(&self, coords: [Scalar; 3]) -> Result<ProjPoint> {
        let p = ProjPoint::new(&self.field, coords)?;
        if !self.on_curve(&p) {
            return usage(format!("point {:?} is not on the cubic", p.0));
        }
        Ok(p)
    }

    fn require_on_curve(&self, p: &ProjPoint) -> Result<()> {
        if self.on_curve(p) {
            Ok(())
        } else {
            usage(format!("point {:?} is not on the cubic", p.0))
        }
    }

    fn step(&self, p: &ProjPoint, forward: bool) -> Result<ProjPoint> {
        let m = if forward { &self.right } else { &self.left };
        let v =
            rank_two_kernel(&self.field, eval_matrix(&self.field, m, p.0)).ok_or_else(|| {
                Error::Degenerate(format!("relation matrix at {:?} does not have rank 2", p.0))
            })?;
        ProjPoint::new(&self.field, v)
    }

    /// `σ^k(p)`.
    pub fn sigma(&self, p: &ProjPoint, k: i64) -> Result<ProjPoint> {
        self.require_on_curve(p)?;
        let mut q = *p;
        for _ in 0..k.unsigned_abs() {
            q = self.step(&q, k > 0)?;
        }
        Ok(q)
    }

    /// The third intersection of the line through `p` and `q` (the tangent
    /// when they coincide) with the cubic.
    pub fn third_point(&self, p: &ProjPoint, q: &ProjPoint) -> ProjPoint {
        let f = &self.field;
        let (pc, qc) = (p.0, q.0);
        let out = if p != q {
            let b = dot3(f, self.cubic.grad(f, pc), qc);
            let c = dot3(f, self.cubic.grad(f, qc), pc);
            [0, 1, 2].map(|i| f.sub(f.mul(c, pc[i]), f.mul(b, qc[i])))
        } else {
            let g = self.cubic.grad(f, pc);
            let t = (0..3)
                .map(|k| {
                    let mut e = [0; 3];
                    e[k] = 1;
                    cross(f, g, e)
                })
                .find(|t| cross(f, *t, pc).iter().any(|&c| c != 0))
                .expect("a smooth point has a tangent line");
            let c = dot3(f, self.cubic.grad(f, t), pc);
            let d = self.cubic.eval(f, t);
            [0, 1, 2].map(|i| f.sub(f.mul(d, pc[i]), f.mul(c, t[i])))
        };
        ProjPoint::new(f, out).expect("a line meets a smooth cubic in a third point")
    }

    pub fn add(&self, p: &ProjPoint, q: &ProjPoint) -> ProjPoint {
        self.third_point(&self.basepoint, &self.third_point(p, q))
    }

    pub fn neg(&self, p: &ProjPoint) -> ProjPoint {
        self.third_point(p, &self.basepoint)
    }

    pub fn sub(&self, p: &ProjPoint, q: &ProjPoint) -> ProjPoint {
        self.add(p, &self.neg(q))
    }

    pub fn mul_int(&self, k: i64, p: &ProjPoint) -> ProjPoint {
        let mut acc = self.basepoint;
        let mut base = if k < 0 { self.neg(p) } else { *p };
        let mut n = k.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Smallest `k ≤ bound` with `k·p = p0`, or `None` if there is none.
    pub fn order_of(&self, p: &ProjPoint, bound: u64) -> Option<u64> {
        let mut acc = *p;
        for k in 1..=bound {
            if acc == self.basepoint {
                return Some(k);
            }
            acc = self.add(&acc, p);
        }
        None
    }

    pub fn is_inflection(&self, p: &ProjPoint) -> bool {
        self.on_curve(p) && self.third_point(p, p) == *p
    }

    /// Representatives of `k·r` for `|k| ≤ radius`, keyed by point.
    pub fn multiples(&self, radius: usize) -> HashMap<ProjPoint, i64> {
        let mut table = HashMap::new();
        table.insert(self.basepoint, 0);
        let (mut fwd, mut back) = (self.basepoint, self.basepoint);
        let minus = self.neg(&self.translation);
        for k in 1..=radius as i64 {
            fwd = self.add(&fwd, &self.translation);
            back = self.add(&back, &minus);
            table.entry(fwd).or_insert(k);
            table.entry(back).or_insert(-k);
        }
        table
    }

    /// Points `ι ⊕ m·r` with `ι` an inflection point and `m < 2^24` drawn from
    /// `rng`. A candidate is rejected when it differs from an avoided point
    /// `(q, k)` by `j·r` with `|j| ≤ k`, or from an earlier sample by `j·r`
    /// with `|j| ≤ mutual`.
    pub fn sample_points<R: Rng>(
        &self,
        rng: &mut R,
        count: usize,
        avoid: &[(ProjPoint, usize)],
        mutual: usize,
    ) -> Result<Vec<ProjPoint>> {
        const BUDGET: usize = 1000;
        let radius = avoid.iter().map(|a| a.1).max().unwrap_or(0).max(mutual);
        let table = self.multiples(radius);
        let clashes = |c: &ProjPoint, q: &ProjPoint, k: usize| {
            table
                .get(&self.sub(c, q))
                .is_some_and(|&j| j.unsigned_abs() as usize <= k)
        };
        let mut out: Vec<ProjPoint> = Vec::with_capacity(count);
        let mut attempts = 0;
        while out.len() < count {
            attempts += 1;
            if attempts > BUDGET + count {
                return Err(Error::Resource(format!(
                    "point sampling exhausted after {BUDGET} retries"
                )));
            }
            let iota = self.flexes[rng.gen_range(0..9)];
            let m = rng.gen_range(0..1i64 << 24);
            let cand = self.add(&iota, &self.mul_int(m, &self.translation));
            if avoid.iter().any(|(q, k)| clashes(&cand, q, *k))
                || out.iter().any(|q| clashes(&cand, q, mutual))
            {
                continue;
            }
            out.push(cand);
        }
        Ok(out)
    }

    /// Abel's criterion: equal degree and equal sum in the group law.
    pub fn lin_equiv(&self, d1: &Divisor, d2: &Divisor) -> bool {
        d1.degree() == d2.degree() && d1.sum(self) == d2.sum(self)
    }
}

/// A formal sum of distinct points of the curve, each with multiplicity one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Divisor {
    points: Vec<ProjPoint>,
}

impl Divisor {
    pub fn new(ctx: &CurveContext, points: Vec<ProjPoint>) -> Result<Self> {
        for p in &points {
            ctx.require_on_curve(p)?;
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::Unsupported(format!(
                    "point {:?} appears with multiplicity above one",
                    p.0
                )));
            }
        }
        Ok(Divisor { points })
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn degree(&self) -> usize {
        self.points.len()
    }

    pub fn sum(&self, ctx: &CurveContext) -> ProjPoint {
        self.points
            .iter()
            .fold(ctx.basepoint(), |acc, p| ctx.add(&acc, p))
    }

    /// `σ^k` applied to each point.
    pub fn shifted(&self, ctx: &CurveContext, k: i64) -> Result<Divisor> {
        let points = self
            .points
            .iter()
            .map(|p| ctx.sigma(p, k))
            .collect::<Result<_>>()?;
        Divisor::new(ctx, points)
    }
}

/// Grammar accepted by [`parse_divisor`].
pub const DIVISOR_GRAMMAR: &str = "entries separated by ';', each either \
`base:<i>,offset:<m>,sigma:<k>` (flex i in 0..9, the point ι_i ⊕ m·r moved by σ^k) \
or `orbit-of:<j>,sigma:<k>` (σ^k of entry j); the empty string is the zero divisor";

/// Parses a divisor from the textual entry list in [`DIVISOR_GRAMMAR`].
pub fn parse_divisor(ctx: &CurveContext, spec: &str) -> Result<Divisor> {
    let bad = |why: String| Error::Usage(format!("{why}; expected {DIVISOR_GRAMMAR}"));
    let mut points: Vec<ProjPoint> = Vec::new();
    for entry in spec.split(';').map(str::trim).filter(|e| !e.is_empty()) {
        let mut fields = HashMap::new();
        for kv in entry.split(',').map(str::trim) {
            let (k, v) = kv
                .split_once(':')
                .ok_or_else(|| bad(format!("malformed field {kv:?}")))?;
            let v: i64 = v
                .trim()
                .parse()
                .map_err(|_| bad(format!("field {k:?} needs an integer, got {v:?}")))?;
            if fields.insert(k.trim(), v).is_some() {
                return Err(bad(format!("field {k:?} repeated in {entry:?}")));
            }
        }
        let sigma = fields.remove("sigma").unwrap_or(0);
        let point = match (fields.remove("base"), fields.remove("orbit-of")) {
            (Some(i), None) => {
                let offset = fields.remove("offset").unwrap_or(0);
                let iota = usize::try_from(i)
                    .ok()
                    .and_then(|i| ctx.flexes.get(i))
                    .ok_or_else(|| bad(format!("flex index {i} outside 0..9")))?;
                ctx.add(iota, &ctx.mul_int(offset, &ctx.translation))
            }
            (None, Some(j)) => *usize::try_from(j)
                .ok()
                .and_then(|j| points.get(j))
                .ok_or_else(|| bad(format!("orbit-of:{j} does not name an earlier entry")))?,
            _ => {
                return Err(bad(format!(
                    "entry {entry:?} needs exactly one of base, orbit-of"
                )))
            }
        };
        if let Some(k) = fields.keys().next() {
            return Err(bad(format!("unknown field {k:?}")));
        }
        points.push(ctx.sigma(&point, sigma)?);
    }
    Divisor::new(ctx, points)
}

/// Dimension of the space of sections of a degree-`d` line bundle on a genus
/// one curve. Negative degrees give 0.
pub fn rr_dim(d: i64, trivial_class: bool) -> usize {
    match d {
        d if d < 0 => 0,
        0 => usize::from(trivial_class),
        d => d as usize,
    }
}
