use proptest::prelude::*;

use ratlyap::linalg::SymMatrix;
use ratlyap::polyalg::{binomial, dot_with_x, HomogPoly, Monomial, MonomialBasis};
use ratlyap::sdp::{to_sdp, SdpProblem};
use ratlyap::sosgram::{assemble, gram_poly, upper_coords, CandidateShape};
use ratlyap::dynamics::family_quintic;

fn poly(n: usize, d: u32) -> impl Strategy<Value = HomogPoly> {
    let basis = MonomialBasis::enumerate(n, d);
    let len = basis.len();
    prop::collection::vec(-5.0f64..5.0, len).prop_map(move |cs| {
        HomogPoly::new(n, d, basis.monomials().iter().cloned().zip(cs)).unwrap()
    })
}

fn point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, n)
}

proptest! {
    #[test]
    fn euler_identity((d, p) in (1usize..4, 1u32..6).prop_flat_map(|(n, d)| (Just(d), poly(n, d)))) {
        let euler = dot_with_x(&p.gradient()).unwrap();
        prop_assert!(euler.max_abs_diff(&p.scale(d as f64)).unwrap() <= 1e-12 * p.max_abs_coeff().max(1.0));
    }

    #[test]
    fn scaling_homogeneity(p in poly(2, 4), x in point(2), t in 0.1f64..3.0) {
        let tx: Vec<f64> = x.iter().map(|v| t * v).collect();
        let lhs = p.eval(&tx);
        let rhs = t.powi(4) * p.eval(&x);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }

    #[test]
    fn product_degrees_add(p in poly(3, 2), q in poly(3, 3), x in point(3)) {
        let pq = p.mul(&q).unwrap();
        prop_assert_eq!(pq.degree(), 5);
        let direct = p.eval(&x) * q.eval(&x);
        prop_assert!((pq.eval(&x) - direct).abs() <= 1e-9 * (1.0 + direct.abs()));
    }

    #[test]
    fn basis_is_deterministic_and_complete(n in 1usize..5, k in 0u32..6) {
        let a = MonomialBasis::enumerate(n, k);
        let b = MonomialBasis::enumerate(n, k);
        prop_assert_eq!(a.monomials(), b.monomials());
        prop_assert_eq!(a.len() as u64, binomial(n as u64 + k as u64 - 1, k as u64));
        prop_assert!(a.monomials().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(a.monomials().iter().all(|m: &Monomial| m.degree() == k));
        for (i, m) in a.monomials().iter().enumerate() {
            prop_assert_eq!(a.index_of(m), Some(i));
        }
    }

    #[test]
    fn gram_poly_matches_quadratic_form(vals in prop::collection::vec(-3.0f64..3.0, 6), x in point(2)) {
        let basis = MonomialBasis::enumerate(2, 2);
        let mut q = SymMatrix::zeros(3);
        for ((i, j), v) in upper_coords(3).zip(vals) {
            q.set(i, j, v);
        }
        let g = gram_poly(&q, &basis).unwrap();
        let direct = q.quad_form(&basis.eval(&x));
        prop_assert!((g.eval(&x) - direct).abs() <= 1e-9 * (1.0 + direct.abs()));
    }

    #[test]
    fn sdpa_text_round_trip(theta in 0.01f64..3.0, level in 0usize..3) {
        let (s, r) = [(2, 0), (4, 0), (4, 1)][level];
        let sys = assemble(&family_quintic(theta), &CandidateShape::new(2, s, r, 5).unwrap()).unwrap();
        let prob = to_sdp(&sys);
        let back = SdpProblem::from_sdpa_text(&prob.to_sdpa_text()).unwrap();
        let sizes = |p: &SdpProblem| p.blocks().iter().map(|b| b.size).collect::<Vec<_>>();
        prop_assert_eq!(sizes(&back), sizes(&prob));
        prop_assert_eq!(back.rows().len(), prob.rows().len());
        for (a, b) in back.rows().iter().zip(prob.rows()) {
            prop_assert_eq!(a, b);
        }
    }
}
