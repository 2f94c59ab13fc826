#ifndef PPT_ANTISYM_H
#define PPT_ANTISYM_H

#include <stddef.h>
#include <stdint.h>

typedef enum PptStatus {
  PPT_STATUS_OK = 0,
  PPT_STATUS_NULL_POINTER = 1,
  PPT_STATUS_INVALID_ARGUMENT = 2,
  PPT_STATUS_NOT_CONVERGED = 3,
  PPT_STATUS_TOLERANCE_VIOLATION = 4,
  PPT_STATUS_PANIC = 5,
} PptStatus;

// Values accepted by the `form` arguments.
typedef enum PptForm {
  PPT_FORM_FULL = 0,
  PPT_FORM_REDUCED = 1,
} PptForm;

// Values of `PptCertificate::kind`.
typedef enum PptCertificateKind {
  PPT_CERTIFICATE_KIND_PPT_ENTANGLED_VIA_SDP = 0,
  PPT_CERTIFICATE_KIND_ENTANGLED_VIA_SCHMIDT_RANK = 1,
  PPT_CERTIFICATE_KIND_PPT_ONLY = 2,
  PPT_CERTIFICATE_KIND_INCONCLUSIVE = 3,
} PptCertificateKind;

// Opaque bipartite density matrix.
typedef struct PptState PptState;

typedef struct PptSolverConfig {
  double tol_primal;
  double tol_dual;
  double tol_gap;
  uint64_t max_iterations;
  double step_rho;
  double over_relaxation;
} PptSolverConfig;

typedef struct PptCertificate {
  // A `PptCertificateKind` value.
  int32_t kind;
  double p_ppt;
  double margin;
  double min_eig_pt;
  int32_t is_ppt;
  double projection_error;
  double realignment_value;
  double residual_primal;
  double residual_dual;
  double gap;
  uint64_t iterations;
} PptCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The library's default solver settings.
struct PptSolverConfig ppt_solver_config_default(void);

// Message of the last failure on this thread, or NULL. The pointer stays
// valid until the next failing call on the same thread.
const char *ppt_last_error(void);

// Werner state `p P_A/d_A + (1-p) P_S/d_S`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum PptStatus ppt_werner(uintptr_t d, double p, struct PptState **out);

// Projector onto `Σ_i c_i |ψ-_{2i-1,2i}>`, `m = d/2` amplitudes with
// `Σ|c_i|² = 1`. `c_im` may be NULL for real amplitudes.
//
// # Safety
// `c_re` (and `c_im` when non-NULL) must point to `m` readable doubles;
// `out` must be valid for one write.
enum PptStatus ppt_multilevel_singlet(uintptr_t d,
                                      const double *c_re,
                                      const double *c_im,
                                      uintptr_t m,
                                      struct PptState **out);

// Seeded random state of the given rank on the antisymmetric subspace.
//
// # Safety
// `out` must be valid for one write.
enum PptStatus ppt_random_antisym(uintptr_t d,
                                  uintptr_t rank,
                                  uint64_t seed,
                                  struct PptState **out);

// Seeded random state `G G†/Tr(G G†)` with a `d² x rank` Gaussian `G`.
//
// # Safety
// `out` must be valid for one write.
enum PptStatus ppt_random_density(uintptr_t d,
                                  uintptr_t rank,
                                  uint64_t seed,
                                  struct PptState **out);

// State from `len = d⁴` row-major entries; validated as a density matrix.
// `im` may be NULL for a real matrix.
//
// # Safety
// `re` (and `im` when non-NULL) must point to `len` readable doubles;
// `out` must be valid for one write.
enum PptStatus ppt_state_from_matrix(uintptr_t d,
                                     const double *re,
                                     const double *im,
                                     uintptr_t len,
                                     struct PptState **out);

// Releases a handle. NULL is ignored.
//
// # Safety
// `state` must be NULL or a handle returned by this library that has not
// been freed.
void ppt_state_free(struct PptState *state);

// Local dimension `d` of a state on `C^d ⊗ C^d`.
//
// # Safety
// `state` must be a live handle; `out` must be valid for one write.
enum PptStatus ppt_state_local_dim(const struct PptState *state, uintptr_t *out);

// Copies the `d⁴` row-major entries into `re` and `im`.
//
// # Safety
// `state` must be a live handle; `re` and `im` must each have room for
// `len` doubles.
enum PptStatus ppt_state_copy_matrix(const struct PptState *state,
                                     double *re,
                                     double *im,
                                     uintptr_t len);

// Smallest eigenvalue of the partial transpose.
//
// # Safety
// `state` must be a live handle; `out` must be valid for one write.
enum PptStatus ppt_state_min_eig_pt(const struct PptState *state, double *out);

// Maximal probability with which a PPT state projects onto `rho_a`.
// `config` may be NULL for defaults; `sigma_out` may be NULL when the
// optimal state is not needed.
//
// # Safety
// `rho_a` must be a live handle; `config` NULL or valid; `value_out` valid
// for one write; `sigma_out` NULL or valid for one write.
enum PptStatus ppt_p_ppt(const struct PptState *rho_a,
                         const struct PptSolverConfig *config,
                         int32_t form,
                         double *value_out,
                         struct PptState **sigma_out);

// Solves for `p_ppt(rho_a)` and certifies the optimal state as PPT
// entangled when the value is clearly below 1/2.
//
// # Safety
// `rho_a` must be a live handle; `config` NULL or valid; `cert_out` valid
// for one write; `sigma_out` NULL or valid for one write.
enum PptStatus ppt_certify(const struct PptState *rho_a,
                           const struct PptSolverConfig *config,
                           int32_t form,
                           struct PptCertificate *cert_out,
                           struct PptState **sigma_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PPT_ANTISYM_H */
