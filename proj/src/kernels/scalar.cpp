// Scalar reference kernels. These define the semantics the vector variants
// are tested against.

#include <algorithm>
#include <cmath>

#include "fbstab/kernels.hpp"
#include "kernel_common.hpp"

namespace fbstab::kernels {
namespace {

void trig_eval_scalar(const double* c_re, const double* c_im, std::size_t taps,
                      std::int64_t offset, const TwiddleTable& tw, double* out_re,
                      double* out_im) {
  const std::uint64_t M = tw.size;
  const std::uint64_t base = detail::mod_index(offset, M);
  for (std::uint64_t m = 0; m < M; ++m) {
    // Twiddle index of tap t at grid point m is ((offset + t) * m) mod M.
    std::uint64_t idx = detail::mul_mod(base, m, M);
    const std::uint64_t step = m;
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (std::size_t t = 0; t < taps; ++t) {
      const double c = tw.cos[idx];
      const double s = tw.sin[idx];
      // (cr + i ci)(cos - i sin)
      acc_re += c_re[t] * c + c_im[t] * s;
      acc_im += c_im[t] * c - c_re[t] * s;
      idx += step;
      if (idx >= M) idx -= M;
    }
    out_re[m] = acc_re;
    out_im[m] = acc_im;
  }
}

void dilated_mul_scalar(const double* src_re, const double* src_im, std::size_t M,
                        std::uint64_t factor, double* acc_re, double* acc_im) {
  const std::uint64_t step = factor % M;
  std::uint64_t idx = 0;
  for (std::size_t m = 0; m < M; ++m) {
    const double ar = acc_re[m];
    const double ai = acc_im[m];
    const double br = src_re[idx];
    const double bi = src_im[idx];
    acc_re[m] = ar * br - ai * bi;
    acc_im[m] = ar * bi + ai * br;
    idx += step;
    if (idx >= M) idx -= M;
  }
}

void half_shift_energy_scalar(const double* re, const double* im, std::size_t M, double* out) {
  const std::size_t half = M / 2;
  for (std::size_t m = 0; m < M; ++m) {
    const std::size_t s = m < half ? m + half : m - half;
    out[m] = re[m] * re[m] + im[m] * im[m] + re[s] * re[s] + im[s] * im[s];
  }
}

void pair_eigs_scalar(const double* g_re, const double* g_im, const double* h_re,
                      const double* h_im, std::size_t M, double* lambda_min,
                      double* lambda_max) {
  const std::size_t half = M / 2;
  for (std::size_t m = 0; m < M; ++m) {
    const std::size_t s = m < half ? m + half : m - half;
    detail::pair_eig_point(g_re[m], g_im[m], h_re[m], h_im[m], g_re[s], g_im[s], h_re[s],
                           h_im[s], lambda_min[m], lambda_max[m]);
  }
}

double max_abs2_scalar(const double* re, const double* im, std::size_t M) {
  double best = 0.0;
  for (std::size_t m = 0; m < M; ++m) best = std::max(best, re[m] * re[m] + im[m] * im[m]);
  return best;
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{
    trig_eval_scalar, dilated_mul_scalar, half_shift_energy_scalar, pair_eigs_scalar,
    max_abs2_scalar,
};
}  // namespace detail

}  // namespace fbstab::kernels
