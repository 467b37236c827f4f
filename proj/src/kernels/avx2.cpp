// AVX2/FMA variants of the grid kernels. This translation unit is the only
// one compiled with -mavx2 -mfma; it is reached only through the dispatch
// table after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "fbstab/kernels.hpp"
#include "kernel_common.hpp"

namespace fbstab::kernels {
namespace {

inline __m256i wrap_add(__m256i idx, __m256i step, __m256i modulus, __m256i limit) {
  idx = _mm256_add_epi64(idx, step);
  const __m256i over = _mm256_cmpgt_epi64(idx, limit);
  return _mm256_sub_epi64(idx, _mm256_and_si256(over, modulus));
}

void trig_eval_avx2(const double* c_re, const double* c_im, std::size_t taps,
                    std::int64_t offset, const TwiddleTable& tw, double* out_re,
                    double* out_im) {
  const std::uint64_t M = tw.size;
  const std::uint64_t base = detail::mod_index(offset, M);
  const __m256i modulus = _mm256_set1_epi64x(static_cast<long long>(M));
  const __m256i limit = _mm256_set1_epi64x(static_cast<long long>(M) - 1);
  const double* cos_tab = tw.cos.data();
  const double* sin_tab = tw.sin.data();

  std::uint64_t m = 0;
  for (; m + 4 <= M; m += 4) {
    __m256i idx = _mm256_setr_epi64x(
        static_cast<long long>(detail::mul_mod(base, m, M)),
        static_cast<long long>(detail::mul_mod(base, m + 1, M)),
        static_cast<long long>(detail::mul_mod(base, m + 2, M)),
        static_cast<long long>(detail::mul_mod(base, m + 3, M)));
    // Per-tap increment is the grid index itself; m + 3 < M so no reduction needed.
    const __m256i step = _mm256_setr_epi64x(static_cast<long long>(m), static_cast<long long>(m + 1),
                                            static_cast<long long>(m + 2),
                                            static_cast<long long>(m + 3));
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    for (std::size_t t = 0; t < taps; ++t) {
      const __m256d c = _mm256_i64gather_pd(cos_tab, idx, 8);
      const __m256d s = _mm256_i64gather_pd(sin_tab, idx, 8);
      const __m256d cr = _mm256_set1_pd(c_re[t]);
      const __m256d ci = _mm256_set1_pd(c_im[t]);
      acc_re = _mm256_add_pd(acc_re, _mm256_fmadd_pd(cr, c, _mm256_mul_pd(ci, s)));
      acc_im = _mm256_add_pd(acc_im, _mm256_fmsub_pd(ci, c, _mm256_mul_pd(cr, s)));
      idx = wrap_add(idx, step, modulus, limit);
    }
    _mm256_storeu_pd(out_re + m, acc_re);
    _mm256_storeu_pd(out_im + m, acc_im);
  }
  for (; m < M; ++m) {
    std::uint64_t idx = detail::mul_mod(base, m, M);
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (std::size_t t = 0; t < taps; ++t) {
      acc_re += c_re[t] * tw.cos[idx] + c_im[t] * tw.sin[idx];
      acc_im += c_im[t] * tw.cos[idx] - c_re[t] * tw.sin[idx];
      idx += m;
      if (idx >= M) idx -= M;
    }
    out_re[m] = acc_re;
    out_im[m] = acc_im;
  }
}

void dilated_mul_avx2(const double* src_re, const double* src_im, std::size_t M,
                      std::uint64_t factor, double* acc_re, double* acc_im) {
  const std::uint64_t step = factor % M;
  const __m256i modulus = _mm256_set1_epi64x(static_cast<long long>(M));
  const __m256i limit = _mm256_set1_epi64x(static_cast<long long>(M) - 1);
  const __m256i step4 =
      _mm256_set1_epi64x(static_cast<long long>(detail::mul_mod(step, 4 % M, M)));
  __m256i idx = _mm256_setr_epi64x(0, static_cast<long long>(detail::mul_mod(step, 1, M)),
                                   static_cast<long long>(detail::mul_mod(step, 2, M)),
                                   static_cast<long long>(detail::mul_mod(step, 3, M)));
  std::size_t m = 0;
  for (; m + 4 <= M; m += 4) {
    const __m256d br = _mm256_i64gather_pd(src_re, idx, 8);
    const __m256d bi = _mm256_i64gather_pd(src_im, idx, 8);
    const __m256d ar = _mm256_loadu_pd(acc_re + m);
    const __m256d ai = _mm256_loadu_pd(acc_im + m);
    _mm256_storeu_pd(acc_re + m, _mm256_fmsub_pd(ar, br, _mm256_mul_pd(ai, bi)));
    _mm256_storeu_pd(acc_im + m, _mm256_fmadd_pd(ar, bi, _mm256_mul_pd(ai, br)));
    idx = wrap_add(idx, step4, modulus, limit);
  }
  std::uint64_t sidx = detail::mul_mod(step, m, M);
  for (; m < M; ++m) {
    const double ar = acc_re[m];
    const double ai = acc_im[m];
    acc_re[m] = ar * src_re[sidx] - ai * src_im[sidx];
    acc_im[m] = ar * src_im[sidx] + ai * src_re[sidx];
    sidx += step;
    if (sidx >= M) sidx -= M;
  }
}

void half_shift_energy_avx2(const double* re, const double* im, std::size_t M, double* out) {
  // The value at m and at m + M/2 is the same sum.
  const std::size_t half = M / 2;
  std::size_t m = 0;
  for (; m + 4 <= half; m += 4) {
    const __m256d ar = _mm256_loadu_pd(re + m);
    const __m256d ai = _mm256_loadu_pd(im + m);
    const __m256d br = _mm256_loadu_pd(re + m + half);
    const __m256d bi = _mm256_loadu_pd(im + m + half);
    __m256d e = _mm256_mul_pd(ar, ar);
    e = _mm256_fmadd_pd(ai, ai, e);
    e = _mm256_fmadd_pd(br, br, e);
    e = _mm256_fmadd_pd(bi, bi, e);
    _mm256_storeu_pd(out + m, e);
    _mm256_storeu_pd(out + m + half, e);
  }
  for (; m < half; ++m) {
    const double e = re[m] * re[m] + im[m] * im[m] + re[m + half] * re[m + half] +
                     im[m + half] * im[m + half];
    out[m] = e;
    out[m + half] = e;
  }
}

void pair_eigs_avx2(const double* g_re, const double* g_im, const double* h_re,
                    const double* h_im, std::size_t M, double* lambda_min, double* lambda_max) {
  // Shifting by M/2 swaps the two rows of A, which leaves A^*A unchanged.
  const std::size_t half = M / 2;
  const __m256d halfv = _mm256_set1_pd(0.5);
  const __m256d quarter = _mm256_set1_pd(0.25);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t m = 0;
  for (; m + 4 <= half; m += 4) {
    const __m256d gr = _mm256_loadu_pd(g_re + m);
    const __m256d gi = _mm256_loadu_pd(g_im + m);
    const __m256d hr = _mm256_loadu_pd(h_re + m);
    const __m256d hi = _mm256_loadu_pd(h_im + m);
    const __m256d gsr = _mm256_loadu_pd(g_re + m + half);
    const __m256d gsi = _mm256_loadu_pd(g_im + m + half);
    const __m256d hsr = _mm256_loadu_pd(h_re + m + half);
    const __m256d hsi = _mm256_loadu_pd(h_im + m + half);

    __m256d a = _mm256_mul_pd(gr, gr);
    a = _mm256_fmadd_pd(gi, gi, a);
    a = _mm256_fmadd_pd(gsr, gsr, a);
    a = _mm256_fmadd_pd(gsi, gsi, a);
    a = _mm256_mul_pd(a, halfv);
    __m256d d = _mm256_mul_pd(hr, hr);
    d = _mm256_fmadd_pd(hi, hi, d);
    d = _mm256_fmadd_pd(hsr, hsr, d);
    d = _mm256_fmadd_pd(hsi, hsi, d);
    d = _mm256_mul_pd(d, halfv);

    __m256d br = _mm256_mul_pd(gr, hr);
    br = _mm256_fmadd_pd(gi, hi, br);
    br = _mm256_fmadd_pd(gsr, hsr, br);
    br = _mm256_fmadd_pd(gsi, hsi, br);
    br = _mm256_mul_pd(br, halfv);
    __m256d bi = _mm256_mul_pd(gr, hi);
    bi = _mm256_fnmadd_pd(gi, hr, bi);
    bi = _mm256_fmadd_pd(gsr, hsi, bi);
    bi = _mm256_fnmadd_pd(gsi, hsr, bi);
    bi = _mm256_mul_pd(bi, halfv);

    const __m256d mean = _mm256_mul_pd(halfv, _mm256_add_pd(a, d));
    const __m256d gap = _mm256_mul_pd(halfv, _mm256_sub_pd(a, d));
    __m256d r2 = _mm256_mul_pd(gap, gap);
    r2 = _mm256_fmadd_pd(br, br, r2);
    r2 = _mm256_fmadd_pd(bi, bi, r2);
    const __m256d lmax = _mm256_add_pd(mean, _mm256_sqrt_pd(r2));

    // g hs - h gs
    const __m256d dr = _mm256_sub_pd(_mm256_fmsub_pd(gr, hsr, _mm256_mul_pd(gi, hsi)),
                                     _mm256_fmsub_pd(hr, gsr, _mm256_mul_pd(hi, gsi)));
    const __m256d di = _mm256_sub_pd(_mm256_fmadd_pd(gr, hsi, _mm256_mul_pd(gi, hsr)),
                                     _mm256_fmadd_pd(hr, gsi, _mm256_mul_pd(hi, gsr)));
    const __m256d det = _mm256_mul_pd(quarter, _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di)));
    const __m256d positive = _mm256_cmp_pd(lmax, zero, _CMP_GT_OQ);
    const __m256d lmin = _mm256_and_pd(positive, _mm256_div_pd(det, lmax));

    _mm256_storeu_pd(lambda_max + m, lmax);
    _mm256_storeu_pd(lambda_max + m + half, lmax);
    _mm256_storeu_pd(lambda_min + m, lmin);
    _mm256_storeu_pd(lambda_min + m + half, lmin);
  }
  for (; m < half; ++m) {
    const std::size_t s = m + half;
    detail::pair_eig_point(g_re[m], g_im[m], h_re[m], h_im[m], g_re[s], g_im[s], h_re[s],
                           h_im[s], lambda_min[m], lambda_max[m]);
    lambda_min[s] = lambda_min[m];
    lambda_max[s] = lambda_max[m];
  }
}

double max_abs2_avx2(const double* re, const double* im, std::size_t M) {
  __m256d best = _mm256_setzero_pd();
  std::size_t m = 0;
  for (; m + 4 <= M; m += 4) {
    const __m256d r = _mm256_loadu_pd(re + m);
    const __m256d i = _mm256_loadu_pd(im + m);
    best = _mm256_max_pd(best, _mm256_fmadd_pd(i, i, _mm256_mul_pd(r, r)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double result = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; m < M; ++m) result = std::max(result, re[m] * re[m] + im[m] * im[m]);
  return result;
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{
    trig_eval_avx2, dilated_mul_avx2, half_shift_energy_avx2, pair_eigs_avx2, max_abs2_avx2,
};
}  // namespace detail

}  // namespace fbstab::kernels
