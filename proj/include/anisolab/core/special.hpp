#pragma once

namespace anisolab {

/// Surface area |S^{n-1}| of the Euclidean unit sphere in R^n (|S^0| = 2).
double unit_sphere_area(int n);

/// Volume |B^n| of the Euclidean unit ball.
double unit_ball_volume(int n);

/// k(p, n) = \int_{S^{n-1}} |e . w|^p dw = 2 Gamma((p+1)/2) pi^{(n-1)/2} / Gamma((n+p)/2),
/// evaluated in the log domain.
double k_constant(double p, int n);

}  // namespace anisolab
