// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/SVD>

#include "fbstab/iterate.hpp"
#include "fbstab/stability.hpp"
#include "properties.hpp"

using namespace fbstab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < limit_s, "runtime limit");
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s |%s | %.3f s (limit %.0f s)\n", o.pass ? "PASS" : "FAIL", id, title,
              o.detail.str().c_str(), secs, limit_s);
  std::fflush(stdout);
}

// Largest a in [lo, hi] with pred(a) true, assuming pred(lo) and !pred(hi).
double flip_point(double lo, double hi, const std::function<bool(double)>& pred, double tol = 1e-7) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double profile_min(const FiniteSeq& h, const Grid& grid) {
  const auto p = std_expand_profile(h, grid);
  return *std::min_element(p.begin(), p.end());
}

bool expanding(const FiniteSeq& h, const Grid& grid) {
  return profile_min(h, grid) >= 2.0 - kDefaultTolExpand;
}

}  // namespace

int main() {
  const Grid g8192(8192);
  const Grid g4096(4096);

  criterion(1, "Burt-Adelson Bessel threshold, s=1", 1.0, [&](Outcome& o) {
    auto ok = [&](double a) { return bessel_certificate(burt_adelson_factored(a), 1, g8192).verdict; };
    const bool at72 = ok(0.72);
    const bool at73 = ok(0.73);
    o.require(at72, "verdict true at a=0.72");
    o.require(!at73, "verdict false at a=0.73");
    const double target = (3.0 + 2.0 * std::numbers::sqrt2) / 8.0;
    const double flip = flip_point(0.72, 0.73, ok);
    o.detail << " flip a*=" << flip << " target " << target << " |diff|=" << std::abs(flip - target);
    o.require(std::abs(flip - target) < 1e-3, "flip within 1e-3");
  });

  criterion(2, "Burt-Adelson Bessel, s=2", 2.0, [&](Outcome& o) {
    auto ok = [&](double a) { return bessel_certificate(burt_adelson_factored(a), 2, g8192).verdict; };
    o.require(ok(0.78), "verdict true at a=0.78");
    double hi = 0.79;
    while (ok(hi) && hi < 4.0) hi += 0.05;
    o.require(!ok(hi), "verdict eventually false");
    const double flip = flip_point(0.78, hi, ok);
    o.detail << " flip a*=" << flip;
    o.require(flip >= 0.78, "flip >= 0.78");
  });

  criterion(3, "Burt-Adelson expanding threshold", 1.0, [&](Outcome& o) {
    for (double a : {0.65, 0.70, 0.78}) {
      const double m = profile_min(burt_adelson(a), g8192);
      o.detail << " min(" << a << ")=" << m;
      o.require(m >= 2.0 - kDefaultTolExpand, "profile min >= 2 at a=" + std::to_string(a));
    }
    for (double a : {0.55, 0.60}) {
      const double m = profile_min(burt_adelson(a), g8192);
      o.detail << " min(" << a << ")=" << m;
      o.require(m < 2.0 - kDefaultTolExpand, "profile min < 2 at a=" + std::to_string(a));
    }
    // expanding holds above the flip
    const double flip = flip_point(0.60, 0.65, [&](double a) { return !expanding(burt_adelson(a), g8192); });
    o.detail << " flip a*=" << flip;
    o.require(flip >= 0.61 && flip <= 0.64, "flip in [0.61, 0.64]");
  });

  criterion(4, "Higher-order family thresholds", 2.0, [&](Outcome& o) {
    auto s1 = [&](double a) { return bessel_certificate(higher_order(a), 1, g8192).verdict; };
    const double target = std::numbers::sqrt2 - 0.25;
    o.require(s1(1.1) && !s1(1.25), "s=1 bracket");
    const double flip1 = flip_point(1.1, 1.25, s1);
    o.detail << " s=1 flip a*=" << flip1 << " |diff|=" << std::abs(flip1 - target);
    o.require(std::abs(flip1 - target) < 1e-3, "s=1 flip within 1e-3 of sqrt2 - 1/4");
    o.require(bessel_certificate(higher_order(1.5), 2, g8192).verdict, "s=2 verdict true at a=1.5");
    auto not_expanding = [&](double a) { return !expanding(assemble(higher_order(a)), g8192); };
    o.require(not_expanding(0.3) && !not_expanding(0.7), "expanding bracket");
    const double flipe = flip_point(0.3, 0.7, not_expanding);
    o.detail << " expanding flip a*=" << flipe;
    o.require(flipe >= 0.48 && flipe <= 0.53, "expanding flip in [0.48, 0.53]");
  });

  criterion(5, "Haar exactness", 5.0, [&](Outcome& o) {
    const FilterPair pair = orthogonal_pair(haar());
    double worst = 0.0;
    for (int j = 1; j <= 6; ++j) {
      const GramianReport r = gramian_bounds(pair, j, g4096);
      worst = std::max({worst, std::abs(r.lower - 1.0), std::abs(r.upper - 1.0)});
    }
    o.detail << " max|A_j-1|,|B_j-1|=" << worst;
    o.require(worst < 1e-9, "Gramian bounds within 1e-9");
    std::mt19937_64 rng(5);
    double energy_dev = 0.0;
    for (int t = 0; t < 32; ++t) {
      const FiniteSeq x = testing::random_seq(rng, 64, 32);
      double total = 0.0;
      for (double e : analyze(pair, x, 4).energies()) total += e;
      energy_dev = std::max(energy_dev, std::abs(total - norm_sq(x)));
    }
    o.detail << " energy identity dev=" << energy_dev;
    o.require(energy_dev < 1e-10, "energy identity within 1e-10");
  });

  criterion(6, "Factorization oracle", 5.0, [&](Outcome& o) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (const FilterPair& pair : {orthogonal_pair(burt_adelson(0.7)), orthogonal_pair(assemble(higher_order(1.0)))}) {
      for (int j = 1; j <= 4; ++j) {
        for (int t = 0; t < 16; ++t) {
          const double xi = unit(rng);
          const Eigen::VectorXd a = Eigen::JacobiSVD<Eigen::MatrixXcd>(gramian_dense(pair, j, xi)).singularValues();
          const Eigen::VectorXd b = Eigen::JacobiSVD<Eigen::MatrixXcd>(fiber_matrix(pair, j, xi)).singularValues();
          worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
        }
      }
    }
    o.detail << " max singular value diff=" << worst;
    o.require(worst < 1e-10, "singular values within 1e-10");
  });

  criterion(7, "Expanding implies lower bound 1", 10.0, [&](Outcome& o) {
    const FilterPair pair = orthogonal_pair(burt_adelson(0.70));
    double lowest = 1e300;
    for (int j = 1; j <= 6; ++j) lowest = std::min(lowest, gramian_bounds(pair, j, g4096).lower);
    o.detail << " min_j A_j=" << lowest;
    o.require(lowest >= 1.0 - 1e-6, "A_j >= 1 - 1e-6 for j=1..6");
  });

  criterion(8, "Transfer-operator suite", 2.0, [&](Outcome& o) {
    const FiniteSeq tri = FiniteSeq::from_real(-1, {0.25, 0.5, 0.25}).scaled(std::numbers::sqrt2);
    std::vector<FiniteSeq> filters = {haar(), tri};
    for (double a : {0.4, 0.55, 0.6, 0.7, 0.78}) filters.push_back(burt_adelson(a));
    for (double a : {0.3, 0.8, 1.16, 1.5}) filters.push_back(assemble(higher_order(a)));
    std::mt19937_64 rng(8);
    std::normal_distribution<double> normal(0.0, 0.3);
    for (int t = 0; t < 20; ++t) {
      std::vector<double> c(4);
      double sum = 0.0;
      for (auto& v : c) sum += (v = normal(rng));
      c[0] += 1.0 - sum;
      filters.push_back(assemble({2, FiniteSeq::from_real(-1, c)}));
    }
    double sum_dev = 0.0;
    for (const FiniteSeq& h : filters) {
      const int L = static_cast<int>(std::max(std::abs(h.first()), std::abs(h.last())));
      const ContractionCertificate c = contraction_certificate(h, L);
      sum_dev = std::max({sum_dev, std::abs(c.even_sum - 1.0 / std::numbers::sqrt2),
                          std::abs(c.odd_sum - 1.0 / std::numbers::sqrt2)});
    }
    o.detail << " filters=" << filters.size() << " max sum dev=" << sum_dev;
    o.require(sum_dev < 1e-10, "even/odd sums within 1e-10");
    double worst_residual = 0.0;
    for (const FiniteSeq& h : {haar(), tri}) {
      const ContractionCertificate c = contraction_certificate(h, 1);
      o.detail << " rho=" << c.spectral_radius;
      o.require(c.hypothesis_holds, "nonnegative coefficients");
      o.require(c.spectral_radius <= 1.0 / std::numbers::sqrt2 + 1e-9, "spectral radius <= 1/sqrt2");
      const FilterPair pair = orthogonal_pair(h);
      for (std::int64_t k = -2; k <= 2; ++k) {
        const double r = std::sqrt(energy_profile(pair, FiniteSeq::delta(k), 40).back());
        worst_residual = std::max(worst_residual, r);
      }
    }
    o.detail << " max ||residual_40||=" << worst_residual;
    o.require(worst_residual < 1e-6, "residual below 1e-6 at j=40");
  });

  criterion(9, "Randomized property suites (100 instances each)", 30.0, [&](Outcome& o) {
    constexpr std::uint64_t seed = 20240601;
    constexpr int n = 100;
    for (const props::PropertyResult& r :
         {props::noble(seed, n), props::adjointness(seed + 1, n), props::convolution_theorem(seed + 2, n),
          props::annulus_estimate(seed + 3, n), props::sine_product_bound(seed + 4, n),
          props::rayleigh_containment(seed + 5, n), props::bound_transfer(seed + 6, n)}) {
      o.detail << " " << r.name << " " << (r.instances - r.failures) << "/" << r.instances << ";";
      o.require(r.ok() && r.instances == n, r.name);
    }
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", failures);
  return failures == 0 ? 0 : 1;
}
