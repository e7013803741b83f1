#ifndef PLAP_H
#define PLAP_H

/* Generated by cbindgen from the plap-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum {
  /**
   * Success.
   */
  PLAP_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  PLAP_STATUS_NULL_ARGUMENT = 1,
  /**
   * Arguments violate a precondition (bad exponents, domain, norm index).
   */
  PLAP_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The solver returned without meeting its tolerance.
   */
  PLAP_STATUS_NO_CONVERGENCE = 3,
  /**
   * q = p was passed where the Lane-Emden solver expects q != p.
   */
  PLAP_STATUS_RESONANT_EXPONENT = 4,
  /**
   * A caller-supplied buffer is too small.
   */
  PLAP_STATUS_BUFFER_TOO_SMALL = 5,
  /**
   * Internal panic; state is unchanged.
   */
  PLAP_STATUS_INTERNAL = 6,
} PlapStatus;

/**
 * Opaque mesh handle.
 */
typedef struct PlapMesh PlapMesh;

/**
 * Opaque solution handle: a nodal field plus its convergence report.
 */
typedef struct PlapSolution PlapSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Uniform mesh of the interval (a, b) with n nodes.
 */
PlapStatus plap_mesh_interval(double a, double b, uintptr_t n, PlapMesh **out);

/**
 * Tensor mesh of the rectangle (0,lx) x (0,ly) with n nodes per axis.
 */
PlapStatus plap_mesh_rectangle(double lx, double ly, uintptr_t n, PlapMesh **out);

/**
 * Radial mesh of the N-ball of the given radius (dim in {1,2,3}).
 */
PlapStatus plap_mesh_ball(double radius, uint32_t dim, uintptr_t n, PlapMesh **out);

/**
 * Destroy a mesh handle; safe on null.
 */
void plap_mesh_free(PlapMesh *mesh);

/**
 * Number of nodes (and the length of solution value buffers).
 */
uintptr_t plap_mesh_node_count(const PlapMesh *mesh);

/**
 * Write the node coordinates into `xs`/`ys` (each of length `len`).
 * `ys` may be null for 1D and radial meshes.
 */
PlapStatus plap_mesh_coords(const PlapMesh *mesh, double *xs, double *ys, uintptr_t len);

/**
 * First eigenpair: writes `lambda_out` and a sup-normalized eigenfunction
 * handle. Pass `tol <= 0` / `max_iter == 0` for the defaults (1e-9, 10000).
 * Returns `NoConvergence` with the handle still written when the solver
 * stopped short of the tolerance.
 */
PlapStatus plap_first_eigenpair(const PlapMesh *mesh,
                                double p,
                                double tol,
                                uintptr_t max_iter,
                                double *lambda_out,
                                PlapSolution **out);

/**
 * The p-torsion function of the mesh.
 */
PlapStatus plap_torsion(const PlapMesh *mesh,
                        double p,
                        double tol,
                        uintptr_t max_iter,
                        PlapSolution **out);

/**
 * Positive Lane-Emden solution for q != p (sub- or super-linear regime).
 */
PlapStatus plap_solve_lane_emden(const PlapMesh *mesh,
                                 double p,
                                 double q,
                                 double lambda,
                                 double tol,
                                 uintptr_t max_iter,
                                 PlapSolution **out);

/**
 * Destroy a solution handle; safe on null.
 */
void plap_solution_free(PlapSolution *solution);

/**
 * Copy the nodal values into `buf` (length `len >= node count`).
 */
PlapStatus plap_solution_values(const PlapSolution *solution, double *buf, uintptr_t len);

uintptr_t plap_solution_len(const PlapSolution *solution);

/**
 * `||u||_s` with `s >= 1`, or INFINITY for the sup norm; writes `norm_out`.
 */
PlapStatus plap_solution_norm(const PlapSolution *solution, double s, double *norm_out);

/**
 * Final relative residual of the solve that produced this handle.
 */
double plap_solution_residual(const PlapSolution *solution);

uintptr_t plap_solution_iterations(const PlapSolution *solution);

/**
 * 1 if the solve met its tolerance, 0 otherwise.
 */
int32_t plap_solution_converged(const PlapSolution *solution);

/**
 * Eigenvalue estimate `mu = lambda ||u||_s^{q-p}` extracted from a
 * Lane-Emden solution (`s = INFINITY` for the sup norm).
 */
PlapStatus plap_eigen_extract(const PlapSolution *solution,
                              double lambda,
                              double p,
                              double q,
                              double s,
                              double *mu_out);

/**
 * `theta_p` computed from a (sup-normalized) eigenfunction handle.
 */
PlapStatus plap_theta(const PlapSolution *solution, double p, double *theta_out);

/**
 * Embedding constants: writes `C_{N,p}`, `K_{N,p}` and `omega_N`.
 */
PlapStatus plap_constants(uint32_t dim, double p, double *c_out, double *k_out, double *omega_out);

/**
 * Closed-form torsion value of the N-ball at radius r.
 */
PlapStatus plap_ball_torsion_closed(double radius,
                                    uint32_t dim,
                                    double p,
                                    double r,
                                    double *value_out);

/**
 * Static description of a status code.
 */
const char *plap_status_message(PlapStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLAP_H */
