#include "fbstab/stability.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "fbstab/iterate.hpp"
#include "fbstab/kernels.hpp"
#include "fbstab/parallel.hpp"

namespace fbstab {
namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

double grid_xi(std::size_t m, std::size_t N) {
  return static_cast<double>(m) / static_cast<double>(N);
}

// Evaluates the pair on a grid that contains xi + 1/2 for every point, i.e.
// an even grid. Odd requested sizes are evaluated on the doubled grid.
struct HalfShiftGrid {
  std::size_t requested;
  std::size_t stride;  // 1 or 2
  std::size_t size() const { return requested * stride; }
};

HalfShiftGrid half_shift_grid(const Grid& grid) {
  return {grid.size(), grid.size() % 2 == 0 ? std::size_t{1} : std::size_t{2}};
}

std::uint64_t pow2u(int k) { return std::uint64_t{1} << k; }

// Builds X = Y_1 Y_2 ... Y_j for one fiber. gval(l, r) and hval(l, r) return
// g^ and h^ at 2^{l-j-1}(xi + r), r = 0..2^{j+1-l}-1.
template <class GVal, class HVal>
Eigen::MatrixXcd build_fiber(int j, GVal&& gval, HVal&& hval) {
  const Eigen::Index dim = static_cast<Eigen::Index>(pow2u(j));
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::MatrixXcd tail_out;
  for (int l = 1; l <= j; ++l) {
    // Y_l = diag(I, H_l); H_l is S x S with two entries per row: row r has
    // g^ in column r mod K and h^ in column K + (r mod K), K = S / 2.
    const Eigen::Index S = static_cast<Eigen::Index>(pow2u(j + 1 - l));
    const Eigen::Index K = S / 2;
    const Eigen::Index c0 = dim - S;
    tail_out.setZero(dim, S);
    for (Eigen::Index r = 0; r < S; ++r) {
      const cplx gv = kInvSqrt2 * gval(l, static_cast<std::uint64_t>(r));
      const cplx hv = kInvSqrt2 * hval(l, static_cast<std::uint64_t>(r));
      const auto col = X.col(c0 + r);
      tail_out.col(r % K) += gv * col;
      tail_out.col(K + r % K) += hv * col;
    }
    X.rightCols(S) = tail_out;
  }
  return X;
}

void check_gramian_order(int j) {
  if (j < 1 || j > kMaxGramianOrder) {
    throw InvalidArgument("Gramian order j must be in 1.." + std::to_string(kMaxGramianOrder) +
                          ", got " + std::to_string(j));
  }
}

}  // namespace

std::size_t default_grid_size(double degree) {
  const double want = std::max(4096.0, 64.0 * (degree + 1.0));
  if (!(want < 4.0e18)) throw InvalidArgument("polynomial degree too large for a grid");
  return std::bit_ceil(static_cast<std::uint64_t>(std::ceil(want)));
}

double bessel_degree(const FactoredLowpass& f, int s) {
  if (s < 1 || s > 52) throw InvalidArgument("Bessel order s must be in 1..52");
  // q spans width(p) (2^s - 1) frequencies; multiplying by a unimodular
  // exponential centres it without changing |q|, leaving half that span.
  const double width = f.p.is_zero() ? 0.0 : static_cast<double>(f.p.size() - 1);
  return 0.5 * width * static_cast<double>(pow2u(s) - 1);
}

BesselCertificate bessel_certificate(const FactoredLowpass& f, int s, const Grid& grid) {
  validate(f);
  BesselCertificate c;
  c.s = s;
  c.n = f.n;
  c.grid = grid.size();
  c.degree = bessel_degree(f, s);
  const double N = static_cast<double>(grid.size());
  const double inflation_gap = 1.0 - std::numbers::pi * c.degree / N;
  if (!(inflation_gap > 0.0)) {
    throw InvalidArgument("grid size " + std::to_string(grid.size()) +
                          " is too small to certify a degree " + std::to_string(c.degree) +
                          " polynomial (need N > pi d)");
  }
  const std::size_t M = grid.size();
  const kernels::SplitComplex pv = kernels::eval_on_grid(f.p, M);
  kernels::SplitComplex q = pv;
  const auto& k = kernels::active();
  for (int e = 1; e < s; ++e) {
    k.dilated_mul(pv.re.data(), pv.im.data(), M, pow2u(e) % M, q.re.data(), q.im.data());
  }
  c.grid_max = std::sqrt(k.max_abs2(q.re.data(), q.im.data(), M));
  c.sup_value = c.grid_max / inflation_gap;
  c.threshold = std::exp2((f.n - 0.5) * s);
  c.epsilon = c.sup_value > 0.0 ? f.n - std::log2(c.sup_value) / s
                                : std::numeric_limits<double>::infinity();
  c.verdict = c.sup_value < c.threshold;
  return c;
}

std::vector<double> std_expand_profile(const FiniteSeq& h, const Grid& grid) {
  const HalfShiftGrid hg = half_shift_grid(grid);
  const kernels::SplitComplex hv = kernels::eval_on_grid(h, hg.size());
  std::vector<double> fine(hg.size());
  kernels::active().half_shift_energy(hv.re.data(), hv.im.data(), hg.size(), fine.data());
  if (hg.stride == 1) return fine;
  std::vector<double> out(grid.size());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = fine[m * hg.stride];
  return out;
}

EigenProfile mstar_m_eigenfunctions(const FilterPair& pair, const Grid& grid) {
  const HalfShiftGrid hg = half_shift_grid(grid);
  const std::size_t M = hg.size();
  const kernels::SplitComplex gv = kernels::eval_on_grid(pair.g(), M);
  const kernels::SplitComplex hv = kernels::eval_on_grid(pair.h(), M);
  EigenProfile fine;
  fine.lambda_min.resize(M);
  fine.lambda_max.resize(M);
  kernels::active().pair_eigs(gv.re.data(), gv.im.data(), hv.re.data(), hv.im.data(), M,
                              fine.lambda_min.data(), fine.lambda_max.data());
  if (hg.stride == 1) return fine;
  EigenProfile out;
  out.lambda_min.resize(grid.size());
  out.lambda_max.resize(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) {
    out.lambda_min[m] = fine.lambda_min[m * hg.stride];
    out.lambda_max[m] = fine.lambda_max[m * hg.stride];
  }
  return out;
}

ExpandCertificate expand_certificate(const FilterPair& pair, const Grid& grid, double tol_expand) {
  const EigenProfile prof = mstar_m_eigenfunctions(pair, grid);
  const auto it = std::min_element(prof.lambda_min.begin(), prof.lambda_min.end());
  ExpandCertificate c;
  c.grid = grid.size();
  c.tol_expand = tol_expand;
  c.grid_min = *it;
  c.worst_xi = grid_xi(static_cast<std::size_t>(it - prof.lambda_min.begin()), grid.size());
  c.verdict = c.grid_min >= 1.0 - tol_expand;
  return c;
}

SpanCertificate span_certificate(const FilterPair& pair, const Grid& grid, double tol_span) {
  // xi / 2 for xi = m / N is the point m of the 2N grid; xi / 2 + 1/2 is m + N.
  const std::size_t N = grid.size();
  const kernels::SplitComplex gv = kernels::eval_on_grid(pair.g(), 2 * N);
  const kernels::SplitComplex hv = kernels::eval_on_grid(pair.h(), 2 * N);
  SpanCertificate c;
  c.grid = N;
  c.tol_span = tol_span;
  c.det_min = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < N; ++m) {
    const double d = std::abs(hv.at(m) * gv.at(m + N) - gv.at(m) * hv.at(m + N));
    if (d < c.det_min) {
      c.det_min = d;
      c.worst_xi = grid_xi(m, N);
    }
    c.det_max = std::max(c.det_max, d);
  }
  c.verdict = c.det_min > tol_span;
  return c;
}

Eigen::MatrixXcd fiber_matrix(const FilterPair& pair, int j, double xi) {
  check_gramian_order(j);
  auto arg = [j, xi](int l, std::uint64_t r) {
    return std::ldexp(xi + static_cast<double>(r), l - j - 1);
  };
  return build_fiber(
      j, [&](int l, std::uint64_t r) { return dtft_at(pair.g(), arg(l, r)); },
      [&](int l, std::uint64_t r) { return dtft_at(pair.h(), arg(l, r)); });
}

GramianReport gramian_bounds(const FilterPair& pair, int j, const Grid& grid) {
  check_gramian_order(j);
  const std::size_t N = grid.size();
  const std::uint64_t fine = static_cast<std::uint64_t>(N) << j;
  const kernels::SplitComplex gv = kernels::eval_on_grid(pair.g(), fine);
  const kernels::SplitComplex hv = kernels::eval_on_grid(pair.h(), fine);

  // For real filters the fiber at -xi is a row permutation of the conjugate
  // fiber at xi, so the points m and N - m share singular values.
  const std::size_t count = pair.is_real() ? N / 2 + 1 : N;

  struct Partial {
    double lower = std::numeric_limits<double>::infinity();
    double upper = -1.0;
    std::size_t lower_m = 0;
    std::size_t upper_m = 0;
  };
  const unsigned workers = thread_count();
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(workers * 4, count));
  std::vector<Partial> parts(chunks);
  const std::size_t per = (count + chunks - 1) / chunks;

  parallel_for(
      chunks,
      [&](std::size_t cb, std::size_t ce) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
        Eigen::MatrixXcd gram;
        for (std::size_t ci = cb; ci < ce; ++ci) {
          Partial& part = parts[ci];
          const std::size_t mb = ci * per;
          const std::size_t me = std::min(count, mb + per);
          for (std::size_t m = mb; m < me; ++m) {
            // Fine-grid index of 2^{l-j-1}(m/N + r) is (m + r N) 2^{l-1} mod fine.
            auto idx = [&](int l, std::uint64_t r) {
              return static_cast<std::size_t>(((m + r * N) << (l - 1)) % fine);
            };
            const Eigen::MatrixXcd X = build_fiber(
                j, [&](int l, std::uint64_t r) { return gv.at(idx(l, r)); },
                [&](int l, std::uint64_t r) { return hv.at(idx(l, r)); });
            gram.noalias() = X.adjoint() * X;
            solver.compute(gram, Eigen::EigenvaluesOnly);
            if (solver.info() != Eigen::Success) throw Error("Hermitian eigen solver failed");
            const double lo = solver.eigenvalues()(0);
            const double hi = solver.eigenvalues()(solver.eigenvalues().size() - 1);
            if (lo < part.lower) {
              part.lower = lo;
              part.lower_m = m;
            }
            if (hi > part.upper) {
              part.upper = hi;
              part.upper_m = m;
            }
          }
        }
      },
      1);

  GramianReport rep;
  rep.j = j;
  rep.grid = N;
  rep.lower = std::numeric_limits<double>::infinity();
  rep.upper = -1.0;
  std::size_t lower_m = 0;
  std::size_t upper_m = 0;
  for (const Partial& p : parts) {
    if (p.lower < rep.lower) {
      rep.lower = p.lower;
      lower_m = p.lower_m;
    }
    if (p.upper > rep.upper) {
      rep.upper = p.upper;
      upper_m = p.upper_m;
    }
  }
  rep.lower = std::max(rep.lower, 0.0);
  rep.lower_xi = grid_xi(lower_m, N);
  rep.upper_xi = grid_xi(upper_m, N);
  return rep;
}

Eigen::MatrixXcd gramian_dense(const FilterPair& pair, int j, double xi) {
  if (j < 1 || j > 4) throw InvalidArgument("dense pre-Gramian is limited to j in 1..4");
  const IteratedFilters it = iterate_filters(pair, j);
  const Eigen::Index dim = static_cast<Eigen::Index>(pow2u(j));
  const double scale = std::ldexp(1.0, -j);
  const double norm = std::sqrt(scale);
  Eigen::MatrixXcd T(dim, dim);
  Eigen::Index col = 0;
  auto fill = [&](const FiniteSeq& phi) {
    for (Eigen::Index m = 0; m < dim; ++m) {
      T(m, col) = norm * dtft_at(phi, scale * (xi + static_cast<double>(m)));
    }
    ++col;
  };
  for (int l = 1; l <= j; ++l) {
    for (std::uint64_t k = 0; k < pow2u(j - l); ++k) {
      fill(translate(it.g(l), static_cast<std::int64_t>(pow2u(l) * k)));
    }
  }
  fill(it.h(j));
  return T;
}

std::vector<std::size_t> annulus_indices(int l, std::size_t N) {
  if (l < 1 || l > 60) throw InvalidArgument("annulus index l must be >= 1");
  if (N % pow2u(l + 1) != 0) {
    throw InvalidArgument("grid size must be divisible by 2^(l+1) for annulus " +
                          std::to_string(l));
  }
  const auto lower = static_cast<std::int64_t>(N >> (l + 1));
  const auto upper = static_cast<std::int64_t>(N >> l);
  const auto n = static_cast<std::int64_t>(N);
  std::vector<std::size_t> out;
  for (std::int64_t m = 0; m < n; ++m) {
    const std::int64_t s = m < n / 2 ? m : m - n;  // xi = s / N in [-1/2, 1/2)
    const std::int64_t a = s < 0 ? -s : s;
    if (a > lower && a <= upper && s != -upper) out.push_back(static_cast<std::size_t>(m));
  }
  return out;
}

std::vector<cplx> downsample_spectrum(const std::vector<cplx>& spectrum, int j) {
  if (j < 1) throw InvalidArgument("downsample order must be >= 1");
  const std::size_t N = spectrum.size();
  if (j > 60 || N % pow2u(j) != 0) {
    throw InvalidArgument("spectrum length must be divisible by 2^j");
  }
  const std::size_t Np = N >> j;
  const std::size_t copies = static_cast<std::size_t>(pow2u(j));
  const double scale = std::ldexp(1.0, -j);
  std::vector<cplx> out(Np, 0.0);
  for (std::size_t m = 0; m < Np; ++m) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < copies; ++k) acc += spectrum[m + k * Np];
    out[m] = scale * acc;
  }
  return out;
}

double spectrum_energy(const std::vector<cplx>& spectrum) {
  if (spectrum.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& v : spectrum) acc += std::norm(v);
  return acc / static_cast<double>(spectrum.size());
}

AnnulusReport downsample_annulus_check(int j, int l, const std::vector<cplx>& spectrum) {
  const std::size_t N = spectrum.size();
  if (j < 1 || l < 1 || j + l + 1 > 60 || N % pow2u(j + l + 1) != 0) {
    throw InvalidArgument("grid size must be divisible by 2^(j+l+1)");
  }
  AnnulusReport r;
  r.j = j;
  r.l = l;
  r.grid = N;
  r.equality_case = l >= j;
  r.factor = std::ldexp(1.0, -std::min(j, l));
  r.input_energy = spectrum_energy(spectrum);
  r.output_energy = spectrum_energy(downsample_spectrum(spectrum, j));
  const double target = r.factor * r.input_energy;
  r.deviation = r.equality_case ? std::abs(r.output_energy - target)
                                : std::max(0.0, r.output_energy - target);
  r.ok = r.deviation <= 1e-9 * std::max(1.0, r.input_energy);
  return r;
}

AnnulusReport downsample_annulus_check(int j, int l, const Grid& grid, std::uint64_t seed) {
  const std::size_t N = grid.size();
  if (j < 1 || l < 1 || j + l + 1 > 60 || N % pow2u(j + l + 1) != 0) {
    throw InvalidArgument("grid size must be divisible by 2^(j+l+1)");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<cplx> spectrum(N, 0.0);
  for (std::size_t m : annulus_indices(l, N)) spectrum[m] = {normal(rng), normal(rng)};
  const double e = spectrum_energy(spectrum);
  if (e > 0.0) {
    for (auto& v : spectrum) v /= std::sqrt(e);
  }
  return downsample_annulus_check(j, l, spectrum);
}

double sine_product(int j, double xi) {
  double prod = 1.0;
  for (int k = 0; k < j; ++k) {
    const double phase = std::ldexp(xi, k);
    prod *= std::abs(0.5 * (1.0 + std::polar(1.0, 2.0 * std::numbers::pi * phase)));
  }
  return prod;
}

double sine_product_bound(int j, double xi) {
  const double a = std::abs(xi);
  if (a == 0.0) return 1.0;
  return std::min(1.0, 1.0 / (std::ldexp(1.0, j + 1) * a));
}

SineProductReport sine_product_check(int j, const Grid& grid) {
  if (j < 1) throw InvalidArgument("sine-product order j must be >= 1");
  const std::size_t N = grid.size();
  SineProductReport r;
  r.j = j;
  r.grid = N;
  r.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < N; ++m) {
    double xi = grid_xi(m, N);
    if (xi >= 0.5) xi -= 1.0;
    const double excess = sine_product(j, xi) - sine_product_bound(j, xi);
    if (excess > r.max_excess) {
      r.max_excess = excess;
      r.worst_xi = xi;
    }
    if (excess > 1e-12) ++r.violations;
  }
  r.ok = r.violations == 0;
  return r;
}

}  // namespace fbstab
