use harnack::harnack::{implicitize, sample_harnack, t_decompose, verify_t_decomposition, MAX_DILATION};
use harnack::linalg;
use harnack::mesh::{cell_dimension, chain_dimension};
use harnack::rational::{self, Q};
use harnack::secondary::{enumerate_regular_triangulations, gkz_vector, secondary_complex};
use harnack::tropical::{
    brute_force_corner_check, corner_locus, enumerate_graphs, AbstractTropicalCurve, Element, Heights,
};
use harnack::{LatticePoint, LatticePolygon};
use num::{One, Zero};
use proptest::prelude::*;

fn polygon_in(r: i64, max_points: usize) -> impl Strategy<Value = LatticePolygon> {
    prop::collection::vec((-r..=r, -r..=r), 3..8).prop_filter_map("degenerate or too large", move |c| {
        let p = LatticePolygon::from_coords(&c).ok()?;
        (p.lattice_points().len() <= max_points).then_some(p)
    })
}

fn normalized(p: &LatticePolygon) -> Vec<LatticePoint> {
    let (lo, _) = p.bounding_box();
    p.translate(LatticePoint::new(-lo.x, -lo.y)).vertices().to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pick_holds(p in polygon_in(4, 200)) {
        prop_assert_eq!(p.twice_area(), 2 * p.interior_count() + p.boundary_count() - 2);
        prop_assert_eq!(p.lattice_points().len() as i64, p.interior_count() + p.boundary_count());
    }

    #[test]
    fn normals_are_primitive_and_balanced(p in polygon_in(4, 200)) {
        let u = p.normal_sequence();
        prop_assert_eq!(u.len() as i64, p.boundary_count());
        prop_assert!(u.iter().all(|x| x.is_primitive()));
        prop_assert!(p.balancing_check());
        let back = LatticePolygon::from_normal_sequence(&u).unwrap();
        prop_assert_eq!(normalized(&back), normalized(&p));
    }

    #[test]
    fn dilation_scales_counts(p in polygon_in(3, 200), d in 1i64..4) {
        let q = p.dilate(d).unwrap();
        prop_assert_eq!(q.boundary_count(), d * p.boundary_count());
        prop_assert_eq!(q.twice_area(), d * d * p.twice_area());
        prop_assert_eq!(q.vertices().len(), p.vertices().len());
    }

    #[test]
    fn cut_plan_replays(p in polygon_in(2, 200)) {
        let plan = harnack::lattice::cut_plan(&p).unwrap();
        let got = plan.replay().unwrap();
        prop_assert_eq!(normalized(&got), normalized(&p.dilate(plan.d2).unwrap()));
    }

    #[test]
    fn rho_sums_to_zero(p in polygon_in(3, 200), seed in 0u64..1000) {
        let c = sample_harnack(&p, seed);
        let rho = c.rho().unwrap();
        let scale = rho.iter().map(|x| x.abs()).fold(1.0, f64::max);
        prop_assert!(rho.iter().sum::<f64>().abs() <= 1e-12 * scale * rho.len() as f64);
    }

    #[test]
    fn jacobian_kills_affine_directions(p in polygon_in(3, 200), seed in 0u64..1000) {
        let c = sample_harnack(&p, seed);
        let d = c.jacobian().unwrap();
        let n = c.n();
        let ones = vec![Q::one(); n];
        prop_assert!(linalg::mat_vec(&d, &ones).iter().all(Zero::is_zero));
        prop_assert!(linalg::mat_vec(&d, &c.values()).iter().all(Zero::is_zero));
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(&d[i][j], &d[j][i]);
            }
        }
        prop_assert!(linalg::rank(&d) <= n - 2);
    }

    #[test]
    fn t_decomposition_is_exact(p in polygon_in(2, 200), seed in 0u64..1000) {
        let plan = harnack::lattice::cut_plan(&p).unwrap();
        let u = p.normal_sequence();
        match t_decompose(&u) {
            Ok(dec) => {
                prop_assert!(dec.terms.iter().all(|t| t.coef > Q::zero()));
                prop_assert!(verify_t_decomposition(&u, &dec, seed, 2).is_ok());
            }
            Err(e) => prop_assert!(plan.d1 * plan.d2 > MAX_DILATION && e.kind() == "cap_exceeded"),
        }
    }

    #[test]
    fn implicit_newton_polygon_matches(p in polygon_in(2, 30), seed in 0u64..1000) {
        let f = implicitize(&sample_harnack(&p, seed)).unwrap().to_laurent();
        prop_assert_eq!(normalized(&f.newton_polygon().unwrap()), normalized(&p));
    }

    #[test]
    fn corner_locus_balanced_and_oracle(
        p in polygon_in(2, 12),
        hs in prop::collection::vec(-30i64..=30, 25),
    ) {
        let h: Heights = p.lattice_points().into_iter().zip(hs).map(|(v, x)| (v, rational::qf(x, 4))).collect();
        let c = corner_locus(&h).unwrap();
        prop_assert!(c.is_balanced());
        prop_assert_eq!(c.leg_count() as i64, c.rays.iter().map(|r| r.weight).sum::<i64>());
        prop_assert!(brute_force_corner_check(&h, &c, 40));
    }

    #[test]
    fn triangulations_have_consistent_gkz(p in polygon_in(2, 8)) {
        let pts = p.lattice_points();
        for s in enumerate_regular_triangulations(&pts).unwrap() {
            let g = gkz_vector(&s.points, &s.triangles().unwrap()).unwrap();
            prop_assert_eq!(g.iter().sum::<i64>(), 3 * p.twice_area());
            prop_assert!(s.is_full() || g.contains(&0));
        }
    }

    #[test]
    fn chain_identity_on_secondary_faces(p in polygon_in(2, 6)) {
        let sc = secondary_complex(&p.lattice_points()).unwrap();
        for f in &sc.faces {
            let c = cell_dimension(&f.subdivision).unwrap();
            prop_assert_eq!(c, f.dim as i64);
            prop_assert_eq!(chain_dimension(&f.subdivision), c);
        }
    }

    #[test]
    fn rationals_round_trip(x in -1e6f64..1e6) {
        prop_assert_eq!(rational::to_f64(&rational::from_f64(x).unwrap()), x);
    }
}

fn connected_graphs() -> Vec<AbstractTropicalCurve> {
    enumerate_graphs(3, 3, 1, 2)
}

#[test]
fn contraction_preserves_genus() {
    for g in connected_graphs() {
        for e in 0..g.edges.len() {
            let h = g.contract(Element::Edge(e)).unwrap();
            assert_eq!(h.genus(), g.genus());
            assert_eq!(h.legs.len(), g.legs.len());
        }
        if !g.legs.is_empty() {
            assert!(g.contract(Element::Leg(0)).is_err());
        }
    }
}
