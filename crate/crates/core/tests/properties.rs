use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skly_core::bridge::TwistedEvaluator;
use skly_core::exactla::{
    combine, intersect, kernel, rank, PrimeField, SparseMatrix, Subspace, DEFAULT_PRIME,
};
use skly_core::hesse::{CurveContext, Divisor, ProjPoint};
use skly_core::ncgraded::{Algebra, Element, Presentation};

struct World {
    f: PrimeField,
    alg: Arc<Algebra>,
    curve: Arc<CurveContext>,
    ev: TwistedEvaluator,
}

fn world() -> &'static World {
    static W: OnceLock<World> = OnceLock::new();
    W.get_or_init(|| {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let pres = Presentation::sklyanin(&f, 3, 7, 11).unwrap();
        let curve = Arc::new(CurveContext::derive(&f, &pres, 200).unwrap());
        let alg = Arc::new(Algebra::new(f.clone(), pres, 8).unwrap());
        let ev = TwistedEvaluator::new(Arc::clone(&alg), Arc::clone(&curve)).unwrap();
        World { f, alg, curve, ev }
    })
}

fn point(seed: u64) -> ProjPoint {
    let w = world();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    w.curve.sample_points(&mut rng, 1, &[], 0).unwrap()[0]
}

fn element(n: usize, coords: &[u64]) -> Element {
    let w = world();
    let dim = w.alg.dim(n).unwrap();
    Element {
        degree: n,
        coords: (0..dim)
            .map(|i| coords[i % coords.len()] % DEFAULT_PRIME)
            .collect(),
    }
}

fn subspace(f: &PrimeField, ambient: usize, rows: &[Vec<u64>]) -> Subspace {
    let rows: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            (0..ambient)
                .map(|i| r[i % r.len()] % f.characteristic())
                .collect()
        })
        .collect();
    Subspace::span_dense(f, ambient, 0, rows.iter())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn twisted_evaluation_is_multiplicative(
        a in 0usize..4,
        b in 0usize..4,
        cu in prop::collection::vec(any::<u64>(), 1..8),
        cv in prop::collection::vec(any::<u64>(), 1..8),
        seed in any::<u64>(),
    ) {
        let w = world();
        let (u, v) = (element(a, &cu), element(b, &cv));
        let p = point(seed);
        let uv = w.alg.mul(&u, &v).unwrap();
        let shifted = w.curve.sigma(&p, a as i64).unwrap();
        let rhs = w.f.mul(w.ev.eval(&u, &p).unwrap(), w.ev.eval(&v, &shifted).unwrap());
        prop_assert_eq!(w.ev.eval(&uv, &p).unwrap(), rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn group_law_is_associative(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>(), flex in 0usize..9) {
        let c = &world().curve;
        let (p, q) = (point(s1), point(s2));
        let r = if s3 % 4 == 0 { c.flexes()[flex] } else { point(s3) };
        prop_assert_eq!(c.add(&c.add(&p, &q), &r), c.add(&p, &c.add(&q, &r)));
        prop_assert_eq!(c.add(&p, &q), c.add(&q, &p));
        prop_assert_eq!(c.add(&p, &c.neg(&p)), c.basepoint());
    }

    #[test]
    fn algebra_multiplication_is_associative(
        a in 0usize..3, b in 0usize..3, c in 0usize..3,
        x in prop::collection::vec(any::<u64>(), 1..6),
        y in prop::collection::vec(any::<u64>(), 1..6),
        z in prop::collection::vec(any::<u64>(), 1..6),
    ) {
        let alg = &world().alg;
        let (u, v, t) = (element(a, &x), element(b, &y), element(c, &z));
        let lhs = alg.mul(&alg.mul(&u, &v).unwrap(), &t).unwrap();
        let rhs = alg.mul(&u, &alg.mul(&v, &t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn abel_equivalence_axioms(s in prop::collection::vec(any::<u64>(), 4)) {
        let c = &world().curve;
        let p: Vec<ProjPoint> = s.iter().map(|&x| point(x)).collect();
        prop_assume!(p[0] != p[1] && p[2] != p[3]);
        let d1 = Divisor::new(c, vec![p[0], p[1]]).unwrap();
        let moved = c.add(&p[0], &p[1]);
        prop_assume!(moved != c.basepoint());
        let d2 = Divisor::new(c, vec![moved, c.basepoint()]).unwrap();
        prop_assert!(c.lin_equiv(&d1, &d1));
        prop_assert!(c.lin_equiv(&d1, &d2) && c.lin_equiv(&d2, &d1));
        let t1 = c.third_point(&p[0], &p[1]);
        let t2 = c.third_point(&p[2], &p[3]);
        prop_assume!(t1 != p[0] && t1 != p[1] && t2 != p[2] && t2 != p[3]);
        let l1 = Divisor::new(c, vec![p[0], p[1], t1]).unwrap();
        let l2 = Divisor::new(c, vec![p[2], p[3], t2]).unwrap();
        prop_assert!(c.lin_equiv(&l1, &l2));
        prop_assert!(!c.lin_equiv(&d1, &l1));
    }

    #[test]
    fn rank_nullity(rows in prop::collection::vec(prop::collection::vec(any::<u64>(), 1..10), 0..10), ncols in 1usize..10) {
        let f = &world().f;
        let dense: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| (0..ncols).map(|i| r[i % r.len()] % DEFAULT_PRIME).collect())
            .collect();
        let m = SparseMatrix::from_dense(ncols, &dense);
        prop_assert_eq!(rank(f, &m) + kernel(f, &m).dim(), ncols);
        let k = kernel(f, &m);
        for v in k.basis_dense() {
            prop_assert!(m.mul_vec(f, &v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn modular_law(
        ambient in 1usize..8,
        u in prop::collection::vec(prop::collection::vec(any::<u64>(), 1..8), 0..6),
        v in prop::collection::vec(prop::collection::vec(any::<u64>(), 1..8), 0..6),
        w in prop::collection::vec(prop::collection::vec(any::<u64>(), 1..8), 0..6),
        small in any::<bool>(),
    ) {
        let f = &world().f;
        // small residues make dependent rows likely
        let reduce = |rows: &[Vec<u64>]| -> Vec<Vec<u64>> {
            rows.iter().map(|r| r.iter().map(|&x| if small { x % 3 } else { x }).collect()).collect()
        };
        let (u, v, w0) = (subspace(f, ambient, &reduce(&u)), subspace(f, ambient, &reduce(&v)), subspace(f, ambient, &reduce(&w)));
        let sum = combine(f, &u, &v).unwrap();
        let meet = intersect(f, &u, &v).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + v.dim());
        prop_assert!(meet.is_subspace_of(f, &u) && meet.is_subspace_of(f, &v));
        let wide = combine(f, &u, &w0).unwrap();
        let lhs = intersect(f, &wide, &sum).unwrap();
        let rhs = combine(f, &u, &intersect(f, &wide, &v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
