#pragma once

// Stability certificates for iterated two-channel filter banks and exact
// finite-order frame bounds.
//
// Only the Bessel certificate is rigorous (its grid maximum is inflated by a
// Bernstein bound). The expanding, span and Gramian results are grid samples:
// a failure on a set of measure zero between grid points cannot be seen. Every
// report records its grid size so the caller can refine.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "fbstab/filters.hpp"
#include "fbstab/seq.hpp"

namespace fbstab {

inline constexpr double kDefaultTolExpand = 1e-12;
inline constexpr double kDefaultTolSpan = 1e-9;
inline constexpr int kMaxGramianOrder = 10;

/// max(4096, 64 (degree + 1)) rounded up to a power of two.
std::size_t default_grid_size(double degree);

struct BesselCertificate {
  int s = 0;
  int n = 0;
  std::size_t grid = 0;
  double degree = 0.0;    ///< Bernstein degree of q(xi) = prod_{k<s} p^(2^k xi)
  double grid_max = 0.0;  ///< max over the grid of |q|
  double sup_value = 0.0;
  double threshold = 0.0;  ///< 2^{(n - 1/2) s}
  double epsilon = 0.0;    ///< n - log2(sup_value) / s
  bool verdict = false;    ///< sup_value < threshold
};

/// Degree used for the Bernstein bound: half the frequency span of q.
double bessel_degree(const FactoredLowpass& f, int s);

/// Throws InvalidArgument when s < 1 or the grid is too coarse (N <= pi d).
BesselCertificate bessel_certificate(const FactoredLowpass& f, int s, const Grid& grid);

struct ExpandCertificate {
  std::size_t grid = 0;
  double tol_expand = kDefaultTolExpand;
  double grid_min = 0.0;  ///< min over the grid of lambda_min(M^* M)
  double worst_xi = 0.0;
  bool verdict = false;  ///< grid_min >= 1 - tol_expand
};

ExpandCertificate expand_certificate(const FilterPair& pair, const Grid& grid,
                                     double tol_expand = kDefaultTolExpand);

/// |h^(xi)|^2 + |h^(xi + 1/2)|^2 on the grid.
std::vector<double> std_expand_profile(const FiniteSeq& h, const Grid& grid);

struct EigenProfile {
  std::vector<double> lambda_min;
  std::vector<double> lambda_max;
};

/// Eigenvalues of M(xi)^* M(xi), M = (1/sqrt 2)[[g^(xi), h^(xi)], [g^(xi+1/2), h^(xi+1/2)]].
EigenProfile mstar_m_eigenfunctions(const FilterPair& pair, const Grid& grid);

struct SpanCertificate {
  std::size_t grid = 0;
  double tol_span = kDefaultTolSpan;
  double det_min = 0.0;  ///< min over the grid of |h^(xi/2) g^(xi/2+1/2) - g^(xi/2) h^(xi/2+1/2)|
  double det_max = 0.0;
  double worst_xi = 0.0;
  bool verdict = false;  ///< det_min > tol_span
};

SpanCertificate span_certificate(const FilterPair& pair, const Grid& grid,
                                 double tol_span = kDefaultTolSpan);

struct GramianReport {
  int j = 0;
  std::size_t grid = 0;
  double lower = 0.0;  ///< min over the grid of sigma_min(X)^2
  double upper = 0.0;  ///< max over the grid of sigma_max(X)^2
  double lower_xi = 0.0;
  double upper_xi = 0.0;
};

/// Frame bounds of the order-j bank from the fiber matrix X = Y_1 Y_2 ... Y_j.
GramianReport gramian_bounds(const FilterPair& pair, int j, const Grid& grid);

/// The factored fiber matrix X(xi) (2^j x 2^j), 1 <= j <= kMaxGramianOrder.
Eigen::MatrixXcd fiber_matrix(const FilterPair& pair, int j, double xi);

/// Dense pre-Gramian at xi: column n is 2^{-j/2} phi_n^(2^{-j}(xi + m)), m = 0..2^j-1,
/// for the generators T^{2^l k} g_l (l = 1..j, k = 0..2^{j-l}-1) followed by h_j.
/// Intended as an oracle, so j is limited to 1..4.
Eigen::MatrixXcd gramian_dense(const FilterPair& pair, int j, double xi);

struct AnnulusReport {
  int j = 0;
  int l = 0;
  std::size_t grid = 0;
  bool equality_case = false;  ///< l >= j
  double input_energy = 0.0;
  double output_energy = 0.0;
  double factor = 0.0;  ///< 2^{-j} when l >= j, else 2^{-l}
  double deviation = 0.0;  ///< |out - factor in| (equality) or max(0, out - factor in)
  bool ok = false;
};

/// Grid points of the annulus {2^{-(l+1)} < |xi| <= 2^{-l}} on a size-N grid,
/// excluding the single point xi = -2^{-l} so the set has no aliasing
/// collisions under D^j for j <= l.
std::vector<std::size_t> annulus_indices(int l, std::size_t N);

/// Spectrum of D^j x on the N / 2^j grid from the spectrum of x on the N grid.
std::vector<cplx> downsample_spectrum(const std::vector<cplx>& spectrum, int j);

/// (1/N) sum_m |X[m]|^2.
double spectrum_energy(const std::vector<cplx>& spectrum);

/// Checks the annulus estimate for a given spectrum supported on the annulus.
AnnulusReport downsample_annulus_check(int j, int l, const std::vector<cplx>& spectrum);

/// Same, with a random spectrum on the annulus drawn from `seed`.
AnnulusReport downsample_annulus_check(int j, int l, const Grid& grid, std::uint64_t seed = 0);

struct SineProductReport {
  int j = 0;
  std::size_t grid = 0;
  double max_excess = 0.0;  ///< max over the grid of |product| - bound
  double worst_xi = 0.0;
  std::size_t violations = 0;
  bool ok = false;
};

/// |prod_{k<j} (1 + e^{2 pi i 2^k xi}) / 2| and min{1, 1/(2^{j+1}|xi|)} at xi in [-1/2, 1/2).
double sine_product(int j, double xi);
double sine_product_bound(int j, double xi);

SineProductReport sine_product_check(int j, const Grid& grid);

struct BoundTransferOptions {
  int signals = 64;
  std::uint64_t seed = 0;
  int signal_length = 32;
  double residual_cutoff = 1e-8;
  int depth_cap = 64;
  double tol = 1e-6;
  /// Gaussian width, in lattice periods, of the probe signals built from the
  /// extremal fiber eigenvectors of each order. 0 disables the probes.
  double probe_width = 256.0;
};

struct BoundViolation {
  std::string kind;  ///< "lower", "upper", "containment" or "residual"
  int j = 0;
  std::uint64_t seed = 0;  ///< seed of the witnessing random signal
  std::string witness;     ///< which signal witnessed it; empty for envelope checks
  double lhs = 0.0;
  double rhs = 0.0;
};

struct BoundTransferReport {
  std::vector<GramianReport> finite;  ///< A_j, B_j for j = 1..j_max
  double empirical_lower = 0.0;       ///< min Rayleigh quotient of the infinite bank
  double empirical_upper = 0.0;
  double implied_lower = 0.0;  ///< min{A, A/B}
  double implied_upper = 0.0;  ///< max{B, B/A}
  int max_depth = 0;           ///< deepest truncation used
  bool depth_capped = false;   ///< some signal hit depth_cap before the residual cutoff
  std::vector<BoundViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Cross-checks the finite-order bounds against the empirical bounds of the
/// infinitely iterated bank.
BoundTransferReport bound_transfer_check(const FilterPair& pair, int j_max, const Grid& grid,
                                         const BoundTransferOptions& options = {});

}  // namespace fbstab
