#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fbstab/iterate.hpp"
#include "fbstab/stability.hpp"

namespace fbstab {
namespace {

FiniteSeq random_unit_signal(std::uint64_t seed, int length, bool real) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<cplx> c(static_cast<std::size_t>(length));
  for (auto& v : c) v = real ? cplx(normal(rng), 0.0) : cplx(normal(rng), normal(rng));
  FiniteSeq x(0, std::move(c));
  const double e = norm_sq(x);
  return e > 0.0 ? x.scaled(1.0 / std::sqrt(e)) : x;
}

// Narrow-band wave packet whose order-j fiber at xi* is the unit vector u:
// x(n) = w(n) e^{2 pi i n xi* / 2^j} sum_m u_m e^{2 pi i n m / 2^j} with a
// Gaussian window w of width `width` lattice periods. Its Rayleigh quotient
// approaches u^* X X^* u as the width grows.
FiniteSeq probe_signal(const Eigen::VectorXcd& u, int j, std::size_t xi_num, std::size_t xi_den,
                       double width) {
  const auto period = static_cast<std::int64_t>(std::uint64_t{1} << j);
  std::vector<cplx> pattern(static_cast<std::size_t>(period));
  for (std::int64_t n = 0; n < period; ++n) {
    cplx acc = 0.0;
    for (std::int64_t m = 0; m < period; ++m) {
      const double phase = static_cast<double>((n * m) % period) / static_cast<double>(period);
      acc += u(m) * std::polar(1.0, 2.0 * std::numbers::pi * phase);
    }
    pattern[static_cast<std::size_t>(n)] = acc;
  }
  const double sigma = width * static_cast<double>(period);
  const auto half = static_cast<std::int64_t>(std::ceil(7.0 * sigma));
  // Phase n xi* / 2^j = n xi_num / (xi_den 2^j), reduced exactly in integers.
  const auto den = static_cast<std::int64_t>(xi_den) * period;
  std::vector<cplx> c(static_cast<std::size_t>(2 * half + 1));
  for (std::int64_t n = -half; n <= half; ++n) {
    std::int64_t k = (n * static_cast<std::int64_t>(xi_num)) % den;
    if (k < 0) k += den;
    const double t = static_cast<double>(n) / sigma;
    const cplx carrier = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                             static_cast<double>(den));
    std::int64_t r = n % period;
    if (r < 0) r += period;
    c[static_cast<std::size_t>(n + half)] =
        std::exp(-0.5 * t * t) * carrier * pattern[static_cast<std::size_t>(r)];
  }
  FiniteSeq x(-half, std::move(c));
  const double e = norm_sq(x);
  return e > 0.0 ? x.scaled(1.0 / std::sqrt(e)) : x;
}

}  // namespace

BoundTransferReport bound_transfer_check(const FilterPair& pair, int j_max, const Grid& grid,
                                         const BoundTransferOptions& options) {
  if (j_max < 1) throw InvalidArgument("j_max must be >= 1");
  if (options.signals < 1 || options.signal_length < 1 || options.depth_cap < 1) {
    throw InvalidArgument("bound-transfer options must be positive");
  }
  BoundTransferReport rep;
  for (int j = 1; j <= j_max; ++j) rep.finite.push_back(gramian_bounds(pair, j, grid));

  rep.empirical_lower = std::numeric_limits<double>::infinity();
  rep.empirical_upper = 0.0;
  std::uint64_t lower_seed = options.seed;
  std::string lower_witness;
  const int depth = std::max(options.depth_cap, j_max);
  const FiniteSeq hbar = involute(pair.h());
  const FiniteSeq gbar = involute(pair.g());

  auto run_signal = [&](const FiniteSeq& x, std::uint64_t seed, const std::string& witness) {
    // One cascade serves both the finite orders (channels 1..j plus the
    // order-j residual) and the truncated infinite bank.
    FiniteSeq r = x;
    double total = 0.0;
    int used = 0;
    bool converged = false;
    for (int l = 1; l <= depth; ++l) {
      total += norm_sq(downsample(convolve(r, gbar), 1));
      r = downsample(convolve(r, hbar), 1);
      used = l;
      const double residual = norm_sq(r);
      if (l <= j_max) {
        const double q = total + residual;
        const GramianReport& g = rep.finite[static_cast<std::size_t>(l - 1)];
        if (q < g.lower - 1e-8) rep.violations.push_back({"containment", l, seed, witness, q, g.lower});
        if (q > g.upper + 1e-8) rep.violations.push_back({"containment", l, seed, witness, q, g.upper});
      }
      if (l >= j_max && residual < options.residual_cutoff) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      rep.depth_capped = true;
      rep.violations.push_back(
          {"residual", used, seed, witness, norm_sq(r), options.residual_cutoff});
    }
    rep.max_depth = std::max(rep.max_depth, used);
    if (total < rep.empirical_lower) {
      rep.empirical_lower = total;
      lower_seed = seed;
      lower_witness = witness;
    }
    rep.empirical_upper = std::max(rep.empirical_upper, total);
  };

  for (int i = 0; i < options.signals; ++i) {
    const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(i);
    run_signal(random_unit_signal(seed, options.signal_length, pair.is_real()), seed,
               "random seed " + std::to_string(seed));
  }
  if (options.probe_width > 0.0) {
    const std::size_t N = grid.size();
    for (const GramianReport& g : rep.finite) {
      for (const bool top : {false, true}) {
        const double xi = top ? g.upper_xi : g.lower_xi;
        const auto num = static_cast<std::size_t>(std::llround(xi * static_cast<double>(N)));
        const Eigen::MatrixXcd X = fiber_matrix(pair, g.j, xi);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(X * X.adjoint());
        const Eigen::Index pick = top ? es.eigenvalues().size() - 1 : 0;
        run_signal(probe_signal(es.eigenvectors().col(pick), g.j, num, N, options.probe_width), 0,
                   std::string(top ? "upper" : "lower") + " probe j=" + std::to_string(g.j));
      }
    }
  }

  const double A = rep.empirical_lower;
  const double B = rep.empirical_upper;
  if (!(A > options.tol)) {
    // No positive lower bound for the infinite bank: the bound relations have
    // nothing to transfer, and the bank itself fails the frame inequality.
    rep.implied_lower = 0.0;
    rep.implied_upper = std::numeric_limits<double>::infinity();
    rep.violations.push_back({"lower", 0, lower_seed, lower_witness, A, options.tol});
    return rep;
  }
  rep.implied_lower = std::min(A, A / B);
  rep.implied_upper = std::max(B, B / A);
  for (const GramianReport& g : rep.finite) {
    if (rep.implied_lower - options.tol > g.lower) {
      rep.violations.push_back({"lower", g.j, 0, "", rep.implied_lower, g.lower});
    }
    if (g.upper > rep.implied_upper + options.tol) {
      rep.violations.push_back({"upper", g.j, 0, "", g.upper, rep.implied_upper});
    }
  }
  return rep;
}

}  // namespace fbstab
