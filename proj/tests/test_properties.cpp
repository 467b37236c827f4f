#include <doctest.h>

#include "properties.hpp"

using namespace fbstab;

namespace {
constexpr std::uint64_t kSeed = 20240601;
constexpr int kInstances = 100;

void expect(const props::PropertyResult& r) {
  INFO(r.name << ": " << r.failures << "/" << r.instances << " failed, worst " << r.worst);
  CHECK(r.instances == kInstances);
  CHECK(r.ok());
}
}  // namespace

TEST_CASE("Noble identity") { expect(props::noble(kSeed, kInstances)); }
TEST_CASE("adjointness of downsampling and upsampling") { expect(props::adjointness(kSeed + 1, kInstances)); }
TEST_CASE("convolution theorem") { expect(props::convolution_theorem(kSeed + 2, kInstances)); }
TEST_CASE("annulus estimate") { expect(props::annulus_estimate(kSeed + 3, kInstances)); }
TEST_CASE("sine product bound") { expect(props::sine_product_bound(kSeed + 4, kInstances)); }
TEST_CASE("Rayleigh containment") { expect(props::rayleigh_containment(kSeed + 5, kInstances)); }
TEST_CASE("bound transfer inequalities") { expect(props::bound_transfer(kSeed + 6, kInstances)); }

TEST_CASE("property checks detect a broken relation") {
  props::PropertyResult r{"probe"};
  props::record(r, 1e-3, 1e-9);
  CHECK_FALSE(r.ok());
  CHECK(r.worst == 1e-3);
}
