use std::collections::BTreeMap;

use harnack::amoeba::{default_window, harnack_area_check, DEFAULT_PAD};
use harnack::harnack::{implicitize, sample_harnack};
use harnack::mesh::{
    cell_dimension, chain_dimension, cross_star_mesh, harnack_signs, mesh_from_coefficients, patchwork,
    spine_limit_check, t_curve_mesh, upsilon_s, HarnackMesh,
};
use harnack::rational::Q;
use harnack::secondary::{secondary_complex, subdivide};
use harnack::tropical::upsilon;
use harnack::verify::{AREA_PHASES, AREA_RES, AREA_TOL};
use harnack::{LatticePoint, LatticePolygon};
use num::Zero;

const RES: usize = 256;
const PHASES: usize = 128;

fn area_ratio(m: &HarnackMesh, t: f64) -> (bool, f64) {
    let f = patchwork(m, t).unwrap();
    let a = harnack_area_check(&f, default_window(&f, DEFAULT_PAD).unwrap(), AREA_RES, AREA_PHASES, AREA_TOL).unwrap();
    (a.pass, a.ratio)
}

fn single_facet_mesh() -> HarnackMesh {
    let p = LatticePolygon::cross_polytope();
    let pts = p.lattice_points();
    let s = subdivide(&pts, &vec![Q::zero(); pts.len()]).unwrap();
    assert_eq!(s.facets.len(), 1);
    let f = implicitize(&sample_harnack(&p, 4)).unwrap().to_laurent();
    HarnackMesh::new(s, vec![f]).unwrap()
}

#[test]
fn single_facet_mesh_is_the_ordinary_spine() {
    let m = single_facet_mesh();
    let glued = upsilon_s(&m, RES, PHASES).unwrap();
    assert_eq!(glued.glued_edges().count(), 0);
    let pc = &glued.facets[0];
    let heights: BTreeMap<LatticePoint, Q> =
        pc.subdivision.points.iter().copied().zip(pc.heights.iter().cloned()).collect();
    let direct = upsilon(&heights).unwrap();
    assert!(glued.moduli_point().curve().isomorphic(direct.curve()).unwrap());
}

#[test]
fn single_facet_lengths_do_not_move_with_t() {
    let m = single_facet_mesh();
    let rep = spine_limit_check(&m, &[0.5, 0.1, 0.01], RES, PHASES, AREA_TOL).unwrap();
    assert!(rep.finite_converge());
    for row in &rep.rows {
        for (got, want) in row.finite.iter().zip(&rep.rows[0].finite) {
            assert!((got.unwrap() - want.unwrap()).abs() < 1e-9);
        }
    }
}

#[test]
fn star_mesh_glued_lengths_diverge_together() {
    let m = cross_star_mesh(1.0).unwrap();
    let rep = spine_limit_check(&m, &[0.1, 0.01, 0.001], RES, PHASES, AREA_TOL).unwrap();
    assert_eq!(rep.limit.glued_edges().count(), 4);
    assert_eq!(rep.limit.curve.genus(), 1);
    assert!(rep.glued_diverge());
    for row in &rep.rows {
        let g: Vec<f64> = row.glued.iter().map(|x| x.unwrap()).collect();
        let (lo, hi) = g.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        assert!(hi - lo < 0.05 * hi, "symmetric mesh gives equal glued lengths: {g:?}");
    }
}

#[test]
fn harnack_signs_give_maximal_area_and_scrambled_do_not() {
    let m = cross_star_mesh(1.0).unwrap();
    let signs = harnack_signs(&m.subdivision).unwrap();
    assert!(signs.values().all(|&s| s == 1.0));
    let t_curve = t_curve_mesh(m.subdivision.clone()).unwrap();
    let (pass, ratio) = area_ratio(&t_curve, 0.1);
    assert!(pass, "ratio {ratio}");
    let mut scrambled = signs.clone();
    scrambled.insert(LatticePoint::new(1, 0), -1.0);
    let bad = mesh_from_coefficients(m.subdivision.clone(), &scrambled).unwrap();
    assert!(bad.disagreement().unwrap().is_none());
    let (pass, ratio) = area_ratio(&bad, 0.1);
    assert!(!pass, "ratio {ratio}");
}

#[test]
fn patchwork_has_the_full_newton_polygon() {
    let m = cross_star_mesh(1.0).unwrap();
    for t in [1.0, 0.3, 0.01] {
        let f = patchwork(&m, t).unwrap();
        assert_eq!(f.newton_polygon().unwrap(), LatticePolygon::cross_polytope());
        assert_eq!(f.support().len(), 5);
    }
}

#[test]
fn chain_identity_on_named_polygons() {
    for p in [
        LatticePolygon::unit_square(),
        LatticePolygon::cross_polytope(),
        LatticePolygon::dilated_triangle(2).unwrap(),
    ] {
        let sc = secondary_complex(&p.lattice_points()).unwrap();
        for f in &sc.faces {
            let c = cell_dimension(&f.subdivision).unwrap();
            assert_eq!(c, f.dim as i64, "{:?}", f.subdivision.facets);
            assert_eq!(chain_dimension(&f.subdivision), c, "{:?}", f.subdivision.facets);
        }
    }
}
