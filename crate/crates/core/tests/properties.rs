use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;

use distlab::distortion::{
    cone_disc_branch, cone_distortion_analytic, cone_lateral_branch, estimate_distortion, estimate_distortion_with,
    EstimateOptions,
};
use distlab::geodesics::{
    build_steiner_graph, cone_lateral_distance, cone_surface_distance, sphere_distance, straighten_path, trace_path,
};
use distlab::geom;
use distlab::surfaces::off::{parse_off, to_off_string};
use distlab::surfaces::{mesh_cone, mesh_sphere, mesh_torus, validate_mesh};
use distlab::{SurfaceSpec, TriMesh};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn without_symmetry(m: &TriMesh) -> TriMesh {
    TriMesh::new(m.dim(), m.coords().to_vec(), m.triangles().to_vec(), m.expected_genus())
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn estimate_is_invariant_under_similarity(
        scale in 0.2f64..5.0,
        shift in prop::array::uniform3(-3.0f64..3.0),
    ) {
        let mesh = mesh_sphere(1.0, 2).unwrap();
        let base = estimate_distortion(&mesh, 2, 0).unwrap().value;
        let moved = estimate_distortion(&mesh.transformed(scale, &shift), 2, 0).unwrap().value;
        prop_assert!((base - moved).abs() < 1e-9 * base, "{base} vs {moved}");
    }

    #[test]
    fn symmetry_representatives_match_all_sources(r in 0.1f64..0.8, res in 10usize..20) {
        let mesh = mesh_cone(r, res).unwrap();
        let opts = EstimateOptions { k: 1, budget: 0, ..EstimateOptions::default() };
        let reps = estimate_distortion_with(&mesh, &opts).unwrap().value;
        let all = estimate_distortion_with(&without_symmetry(&mesh), &opts).unwrap().value;
        prop_assert!((reps - all).abs() < 1e-9 * all, "{reps} vs {all}");
    }

    #[test]
    fn estimates_are_at_least_one(eps in 0.1f64..0.6) {
        let mesh = mesh_torus(eps, 24, 8).unwrap();
        let est = estimate_distortion(&mesh, 1, 0).unwrap();
        prop_assert!(est.value >= 1.0);
        prop_assert!((est.intrinsic / est.euclidean - est.value).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn cone_lateral_distance_is_rotation_invariant_and_symmetric(
        r in 0.05f64..0.95,
        s1 in 0.0f64..1.0,
        s2 in 0.0f64..1.0,
        t1 in 0.0f64..(2.0 * PI),
        t2 in 0.0f64..(2.0 * PI),
        phi in 0.0f64..(2.0 * PI),
    ) {
        let d = cone_lateral_distance(r, s1, t1, s2, t2).unwrap().distance;
        let rotated = cone_lateral_distance(r, s1, t1 + phi, s2, t2 + phi).unwrap().distance;
        let swapped = cone_lateral_distance(r, s2, t2, s1, t1).unwrap().distance;
        prop_assert!((d - rotated).abs() < 1e-12);
        prop_assert!((d - swapped).abs() < 1e-12);
        prop_assert!(d <= s1 + s2 + 1e-12);
        prop_assert!(d >= (s1 - s2).abs() - 1e-12);
    }

    #[test]
    fn cone_surface_distance_dominates_chord(
        r in 0.1f64..0.9,
        s1 in 0.05f64..1.0,
        t1 in 0.0f64..(2.0 * PI),
        rho in 0.0f64..1.0,
        t2 in 0.0f64..(2.0 * PI),
    ) {
        let h = (1.0 - r * r).sqrt();
        let lateral = [s1 * r * t1.cos(), s1 * r * t1.sin(), h * s1];
        let disc = [rho * r * t2.cos(), rho * r * t2.sin(), h];
        let d = cone_surface_distance(r, &lateral, &disc).unwrap().distance;
        prop_assert!(d >= geom::dist(&lateral, &disc) - 1e-12);
        let ratio = d / geom::dist(&lateral, &disc).max(1e-300);
        prop_assert!(ratio <= cone_distortion_analytic(r).unwrap() + 1e-6, "ratio {ratio} at r {r}");
    }

    #[test]
    fn cone_branches_are_monotone(a in 0.01f64..0.98, b in 0.01f64..0.98) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-9);
        prop_assert!(cone_lateral_branch(lo) > cone_lateral_branch(hi));
        prop_assert!(cone_disc_branch(lo) < cone_disc_branch(hi));
        prop_assert!(cone_distortion_analytic(lo).unwrap() >= cone_lateral_branch(lo));
    }

    #[test]
    fn sphere_distance_bounds(
        a in prop::array::uniform3(-1.0f64..1.0),
        b in prop::array::uniform3(-1.0f64..1.0),
        radius in 0.5f64..3.0,
    ) {
        prop_assume!(geom::norm(&a) > 1e-3 && geom::norm(&b) > 1e-3);
        let p: Vec<f64> = a.iter().map(|x| radius * x / geom::norm(&a)).collect();
        let q: Vec<f64> = b.iter().map(|x| radius * x / geom::norm(&b)).collect();
        let d = sphere_distance(radius, &p, &q).unwrap().distance;
        let chord = geom::dist(&p, &q);
        prop_assert!(d >= chord - 1e-12);
        prop_assert!(d <= FRAC_PI_2 * chord + 1e-9);
    }

    #[test]
    fn surface_specs_outside_their_ranges_are_rejected(r in 1.0f64..10.0, eps in -5.0f64..0.0) {
        let specs = [SurfaceSpec::Cone { r }, SurfaceSpec::Torus { eps }, SurfaceSpec::Torus { eps: r }];
        for spec in specs {
            prop_assert!(spec.validate().is_err(), "{:?}", spec);
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn straightened_lies_between_chord_and_graph(a in 0usize..642, b in 0usize..642) {
        prop_assume!(a != b);
        let mesh = mesh_sphere(1.0, 3).unwrap();
        let g = build_steiner_graph(&mesh, 2).unwrap();
        let (dist, pred) = g.shortest_path_tree_until(a, &[b]);
        let s = straighten_path(&g, &trace_path(&pred, a, b)).unwrap();
        let chord = geom::dist(mesh.vertex(a), mesh.vertex(b));
        prop_assert!(s.distance <= dist[b] + 1e-12);
        prop_assert!(s.distance >= chord - 1e-12);
        prop_assert!((s.path_length() - s.distance).abs() < 1e-9);
    }

    #[test]
    fn off_round_trip(subdivisions in 1usize..4, r in 0.1f64..0.9) {
        for mesh in [mesh_sphere(1.0, subdivisions).unwrap(), mesh_cone(r, 8 + subdivisions).unwrap()] {
            let back = parse_off(&to_off_string(&mesh)).unwrap();
            prop_assert_eq!(back.coords(), mesh.coords());
            prop_assert_eq!(back.triangles(), mesh.triangles());
            prop_assert!(validate_mesh(&back).is_ok());
        }
    }
}
