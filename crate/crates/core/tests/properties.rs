//! Randomized algebraic invariants: round-trips, division identities,
//! linear-algebra consistency, expansion multiplicativity, and conjugation
//! invariance of the rigidity index.

use isodef::algebra::{
    laurent_expand, rat, rf_parse, Mat, MatQ, Poly, Pt, Rat, RatFunc,
};
use isodef::dgla::{gl_basis, lie_concentrated};
use isodef::rigidity::{centralizer_dim, LocalSystemTuple};
use isodef::artin::ArtinLocalRing;

use num::traits::Zero;
use proptest::prelude::*;

// -- generators --------------------------------------------------------------

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(arb_rat(), 1..=max_deg + 1).prop_map(Poly::new)
}

fn arb_ratfunc() -> impl Strategy<Value = RatFunc> {
    (arb_poly(4), arb_poly(3))
        .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
        .prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

fn arb_matq(n: usize) -> impl Strategy<Value = MatQ> {
    prop::collection::vec(arb_rat(), n * n).prop_map(move |v| Mat::new(n, n, v))
}

fn arb_invertible(n: usize) -> impl Strategy<Value = MatQ> {
    arb_matq(n).prop_filter("invertible", |m| m.rank() == m.rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // -- rational functions ---------------------------------------------------

    #[test]
    fn ratfunc_text_round_trip(f in arb_ratfunc()) {
        let back = rf_parse(&f.to_text()).unwrap();
        prop_assert_eq!(back.sub(&f).is_zero(), true);
    }

    #[test]
    fn ratfunc_field_laws(f in arb_ratfunc(), g in arb_ratfunc()) {
        // commutativity and the distributive law
        prop_assert!(f.add(&g).sub(&g.add(&f)).is_zero());
        prop_assert!(f.mul(&g).sub(&g.mul(&f)).is_zero());
        let lhs = f.mul(&g.add(&RatFunc::one()));
        let rhs = f.mul(&g).add(&f);
        prop_assert!(lhs.sub(&rhs).is_zero());
        // inverse, when defined
        if !f.is_zero() {
            prop_assert!(f.mul(&f.inv().unwrap()).sub(&RatFunc::one()).is_zero());
        }
    }

    #[test]
    fn ratfunc_leibniz_rule(f in arb_ratfunc(), g in arb_ratfunc()) {
        let lhs = f.mul(&g).derivative();
        let rhs = f.derivative().mul(&g).add(&f.mul(&g.derivative()));
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    // -- polynomials -----------------------------------------------------------

    #[test]
    fn poly_division_identity(a in arb_poly(6), b in arb_poly(4)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.divrem(&b);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
        let recomposed = q.mul(&b).add(&r);
        prop_assert_eq!(recomposed, a);
    }

    #[test]
    fn poly_gcd_divides_both(a in arb_poly(5), b in arb_poly(5)) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let g = a.gcd(&b);
        prop_assert!(a.divrem(&g).1.is_zero());
        prop_assert!(b.divrem(&g).1.is_zero());
    }

    // -- linear algebra ---------------------------------------------------------

    #[test]
    fn rank_nullity(m in arb_matq(3)) {
        let ker = m.kernel_basis();
        prop_assert_eq!(m.rank() + ker.len(), m.cols);
        for v in &ker {
            let image = m.apply(v);
            prop_assert!(image.iter().all(Rat::is_zero));
        }
    }

    #[test]
    fn solve_is_a_solution(m in arb_matq(3), x in prop::collection::vec(arb_rat(), 3)) {
        let b = m.apply(&x);
        let sol = m.solve(&b).expect("consistent system has a solution");
        prop_assert_eq!(m.apply(&sol), b);
    }

    #[test]
    fn inverse_when_full_rank(m in arb_invertible(3)) {
        let inv = m.inverse().expect("full-rank matrix is invertible");
        prop_assert_eq!(m.matmul(&inv), Mat::identity(3));
        prop_assert!(!m.det().is_zero());
    }

    // -- local expansions --------------------------------------------------------

    #[test]
    fn laurent_expansion_is_multiplicative(f in arb_ratfunc(), g in arb_ratfunc()) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        for z in [Pt::Finite(rat(0, 1)), Pt::Finite(rat(2, 1)), Pt::Infinity] {
            let prec = 8;
            let jf = laurent_expand(&f, &z, prec);
            let jg = laurent_expand(&g, &z, prec);
            let jfg = laurent_expand(&f.mul(&g), &z, prec);
            let prod = jf.mul(&jg);
            let window = prod.prec.min(jfg.prec);
            for k in (window - 6)..window {
                prop_assert_eq!(prod.coeff(k), jfg.coeff(k));
            }
        }
    }

    // -- rigidity index -----------------------------------------------------------

    #[test]
    fn katz_index_is_conjugation_invariant(
        a in arb_invertible(2),
        b in arb_invertible(2),
        s in arb_invertible(2),
    ) {
        let c = b.inverse().unwrap().matmul(&a.inverse().unwrap());
        let tuple = LocalSystemTuple::new(vec![a.clone(), b.clone(), c.clone()]).unwrap();
        let sinv = s.inverse().unwrap();
        let conj: Vec<MatQ> = [a, b, c]
            .iter()
            .map(|m| s.matmul(m).matmul(&sinv))
            .collect();
        let tuple2 = LocalSystemTuple::new(conj).unwrap();
        prop_assert_eq!(tuple.katz_index(), tuple2.katz_index());
        prop_assert_eq!(
            tuple.absolutely_irreducible(),
            tuple2.absolutely_irreducible()
        );
    }

    #[test]
    fn centralizer_contains_scalars(m in arb_matq(3)) {
        prop_assert!(centralizer_dim(&m) >= 1);
    }

    // -- group-like expansions in a nilpotent setting ------------------------------

    #[test]
    fn bch_inverse_and_unit(coords in prop::collection::vec(arb_rat(), 4)) {
        let l = lie_concentrated(gl_basis(2)).unwrap();
        let ring = ArtinLocalRing::truncated(vec!["e".into()], 4);
        let mut x = l.zero_elem(&ring, 0);
        for (i, c) in coords.iter().enumerate() {
            // coefficients live in the maximal ideal: multiples of e
            let e = ring.var(0);
            x.coords[i] = ring.scale(c, &e);
        }
        let zero = l.zero_elem(&ring, 0);
        let neg = l.scale(&ring, &rat(-1, 1), &x);
        prop_assert!(l.is_zero_elem(&l.bch(&ring, &x, &neg)));
        prop_assert_eq!(l.bch(&ring, &x, &zero).coords, x.coords.clone());
        prop_assert_eq!(l.bch(&ring, &zero, &x).coords, x.coords);
    }
}
