//! Exercises the C surface the way a foreign binding would: through the
//! exported extern functions, raw pointers and status codes.

use plap_ffi::*;
use std::f64::consts::PI;
use std::ptr;

#[test]
fn eigenpair_through_the_c_surface() {
    unsafe {
        let mut mesh: *mut PlapMesh = ptr::null_mut();
        assert_eq!(plap_mesh_interval(0.0, 1.0, 513, &mut mesh), PlapStatus::Ok);
        assert_eq!(plap_mesh_node_count(mesh), 513);

        let mut lambda = 0.0;
        let mut sol: *mut PlapSolution = ptr::null_mut();
        let st = plap_first_eigenpair(mesh, 2.0, 0.0, 0, &mut lambda, &mut sol);
        assert_eq!(st, PlapStatus::Ok);
        assert!((lambda - PI * PI).abs() < 1e-3 * PI * PI, "lambda = {lambda}");
        assert_eq!(plap_solution_converged(sol), 1);

        let n = plap_solution_len(sol);
        assert_eq!(n, 513);
        let mut values = vec![0.0; n];
        assert_eq!(plap_solution_values(sol, values.as_mut_ptr(), n), PlapStatus::Ok);
        let mut xs = vec![0.0; n];
        assert_eq!(plap_mesh_coords(mesh, xs.as_mut_ptr(), ptr::null_mut(), n), PlapStatus::Ok);
        for (x, v) in xs.iter().zip(&values) {
            assert!((v - (PI * x).sin()).abs() < 1e-3);
        }

        let mut sup = 0.0;
        assert_eq!(plap_solution_norm(sol, f64::INFINITY, &mut sup), PlapStatus::Ok);
        assert_eq!(sup, 1.0);

        let mut theta = 0.0;
        assert_eq!(plap_theta(sol, 2.0, &mut theta), PlapStatus::Ok);
        assert!((theta - 1.2130613).abs() < 1e-3, "theta = {theta}");

        plap_solution_free(sol);
        plap_mesh_free(mesh);
    }
}

#[test]
fn lane_emden_and_extraction() {
    unsafe {
        let mut mesh: *mut PlapMesh = ptr::null_mut();
        assert_eq!(plap_mesh_interval(0.0, 1.0, 513, &mut mesh), PlapStatus::Ok);

        let mut sol: *mut PlapSolution = ptr::null_mut();
        let st = plap_solve_lane_emden(mesh, 2.0, 2.1, 1.0, 0.0, 0, &mut sol);
        assert_eq!(st, PlapStatus::Ok);
        assert!(plap_solution_residual(sol) <= 1e-8);
        assert!(plap_solution_iterations(sol) > 0);

        let mut mu = 0.0;
        assert_eq!(plap_eigen_extract(sol, 1.0, 2.0, 2.1, f64::INFINITY, &mut mu), PlapStatus::Ok);
        assert!((mu - PI * PI).abs() < 0.02 * PI * PI, "mu = {mu}");

        // resonant exponent is rejected
        let mut bad: *mut PlapSolution = ptr::null_mut();
        assert_eq!(
            plap_solve_lane_emden(mesh, 2.0, 2.0, 1.0, 0.0, 0, &mut bad),
            PlapStatus::ResonantExponent
        );
        assert!(bad.is_null());

        plap_solution_free(sol);
        plap_mesh_free(mesh);
    }
}

#[test]
fn rectangle_and_ball_meshes() {
    unsafe {
        let mut rect: *mut PlapMesh = ptr::null_mut();
        assert_eq!(plap_mesh_rectangle(1.0, 2.0, 16, &mut rect), PlapStatus::Ok);
        assert_eq!(plap_mesh_node_count(rect), 256);
        let mut xs = vec![0.0; 256];
        let mut ys = vec![0.0; 256];
        assert_eq!(plap_mesh_coords(rect, xs.as_mut_ptr(), ys.as_mut_ptr(), 256), PlapStatus::Ok);
        assert_eq!(ys[1], 2.0 / 15.0);
        plap_mesh_free(rect);

        let mut disc: *mut PlapMesh = ptr::null_mut();
        assert_eq!(plap_mesh_ball(1.0, 2, 257, &mut disc), PlapStatus::Ok);
        let mut sol: *mut PlapSolution = ptr::null_mut();
        assert_eq!(plap_torsion(disc, 2.0, 0.0, 0, &mut sol), PlapStatus::Ok);
        let mut sup = 0.0;
        assert_eq!(plap_solution_norm(sol, f64::INFINITY, &mut sup), PlapStatus::Ok);
        assert!((sup - 0.25).abs() < 1e-4, "disc torsion sup {sup}");
        plap_solution_free(sol);
        plap_mesh_free(disc);
    }
}

#[test]
fn constants_and_closed_forms() {
    unsafe {
        let (mut c, mut k, mut omega) = (0.0, 0.0, 0.0);
        assert_eq!(plap_constants(1, 2.0, &mut c, &mut k, &mut omega), PlapStatus::Ok);
        assert!((c - 8.0).abs() < 1e-12);
        assert!((k - 0.649519052838329).abs() < 1e-12);
        assert_eq!(omega, 2.0);
        assert_eq!(plap_constants(7, 2.0, &mut c, &mut k, &mut omega), PlapStatus::InvalidArgument);

        let mut v = 0.0;
        assert_eq!(plap_ball_torsion_closed(1.0, 2, 2.0, 0.0, &mut v), PlapStatus::Ok);
        assert!((v - 0.25).abs() < 1e-15);
        assert_eq!(plap_ball_torsion_closed(1.0, 2, 2.0, 2.0, &mut v), PlapStatus::InvalidArgument);
    }
}

#[test]
fn error_paths_and_messages() {
    unsafe {
        let mut mesh: *mut PlapMesh = ptr::null_mut();
        // invalid spec: n too small
        assert_eq!(plap_mesh_interval(0.0, 1.0, 4, &mut mesh), PlapStatus::InvalidArgument);
        assert!(mesh.is_null());
        // null out-pointer
        assert_eq!(plap_mesh_interval(0.0, 1.0, 64, ptr::null_mut()), PlapStatus::NullArgument);
        // null-safe frees
        plap_mesh_free(ptr::null_mut());
        plap_solution_free(ptr::null_mut());
        // buffer too small
        assert_eq!(plap_mesh_interval(0.0, 1.0, 64, &mut mesh), PlapStatus::Ok);
        let mut lambda = 0.0;
        let mut sol: *mut PlapSolution = ptr::null_mut();
        assert_eq!(plap_first_eigenpair(mesh, 2.0, 0.0, 0, &mut lambda, &mut sol), PlapStatus::Ok);
        let mut small = vec![0.0; 3];
        assert_eq!(plap_solution_values(sol, small.as_mut_ptr(), 3), PlapStatus::BufferTooSmall);

        let msg = std::ffi::CStr::from_ptr(plap_status_message(PlapStatus::BufferTooSmall));
        assert_eq!(msg.to_str().unwrap(), "buffer too small");

        plap_solution_free(sol);
        plap_mesh_free(mesh);
    }
}
