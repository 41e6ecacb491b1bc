#pragma once

#include <vector>

#include "anisolab/core/parallel.hpp"
#include "anisolab/core/sweep.hpp"
#include "anisolab/functions/test_function.hpp"
#include "anisolab/geometry/convex_body.hpp"

namespace anisolab {

enum class SeminormMethod {
  monte_carlo,    // x uniform in the sampling domain, antithetic directions
  radial_tensor,  // deterministic: graded rules over chords (n = 1, 2 only)
};

struct SeminormQuadrature {
  SeminormMethod method = SeminormMethod::radial_tensor;
  McConfig mc{};
  // radial_tensor resolution: uniform core panels and geometric levels per
  // end of every graded rule, and half-circle angles for n = 2.
  int core_panels = 16;
  int levels = 40;
  int angles = 64;
  // Relative tolerance of the per-ray t integral.
  double ray_tol = 1e-9;
};

struct SeminormQuery {
  const TestFunction* f = nullptr;
  const ConvexBody* body = nullptr;
  double p = 1.0;
  double s = 0.5;
  SeminormQuadrature quadrature{};
};

/// \iint |f(x) - f(y)|^p / ||x - y||_K^{n + sp} dx dy.
///
/// Pairs with x outside the sampling domain D are folded onto x in D by the
/// x <-> y symmetry, so rays leaving D carry weight 2 and their exterior part
/// integrates in closed form. Throws ErrorCode::divergence when a partial
/// result exceeds 1e12 or is not finite, and up front for indicators with
/// sp >= 1.
Estimate seminorm(const SeminormQuery& q);

/// Rows (s, (1-s) * seminorm, ...) against (2/p) \int ||grad f||^p_{Z_p^* K};
/// the extrapolated row is linear in s through the two largest s values.
SweepTable bbm_sweep(const TestFunction& f, const ConvexBody& body, double p,
                     const std::vector<double>& s_list, const SeminormQuadrature& quad = {});

/// Rows (s, s * seminorm, ...) against (2n/p)|K| ||f||_p^p; the extrapolated
/// row is linear through the two smallest s values.
SweepTable ms_sweep(const TestFunction& f, const ConvexBody& body, double p,
                    const std::vector<double>& s_list, const SeminormQuadrature& quad = {});

std::vector<double> default_bbm_grid();
std::vector<double> default_ms_grid();

}  // namespace anisolab
