#pragma once

#include <cmath>
#include <cstdint>

namespace fbstab::kernels::detail {

inline std::uint64_t mod_index(std::int64_t n, std::uint64_t M) {
  const auto sm = static_cast<std::int64_t>(M);
  std::int64_t r = n % sm;
  if (r < 0) r += sm;
  return static_cast<std::uint64_t>(r);
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t M) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % M);
}

// Closed-form eigenvalues of A^*A for A = (1/sqrt 2)[[g, h], [gs, hs]].
// lambda_max = mean + radius; lambda_min = det / lambda_max, which avoids the
// cancellation in mean - radius when A is close to singular.
inline void pair_eig_point(double gr, double gi, double hr, double hi, double gsr, double gsi,
                           double hsr, double hsi, double& lmin, double& lmax) {
  const double a = 0.5 * (gr * gr + gi * gi + gsr * gsr + gsi * gsi);
  const double d = 0.5 * (hr * hr + hi * hi + hsr * hsr + hsi * hsi);
  // b = (conj(g) h + conj(gs) hs) / 2
  const double br = 0.5 * (gr * hr + gi * hi + gsr * hsr + gsi * hsi);
  const double bi = 0.5 * (gr * hi - gi * hr + gsr * hsi - gsi * hsr);
  const double mean = 0.5 * (a + d);
  const double half_gap = 0.5 * (a - d);
  const double radius = std::sqrt(half_gap * half_gap + br * br + bi * bi);
  lmax = mean + radius;
  // det(A^*A) = |g hs - h gs|^2 / 4
  const double dr = (gr * hsr - gi * hsi) - (hr * gsr - hi * gsi);
  const double di = (gr * hsi + gi * hsr) - (hr * gsi + hi * gsr);
  const double det = 0.25 * (dr * dr + di * di);
  lmin = lmax > 0.0 ? det / lmax : 0.0;
}

}  // namespace fbstab::kernels::detail
