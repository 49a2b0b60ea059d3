#include "properties.hpp"

#include <gtest/gtest.h>

namespace {

void expect_ok(const testkit::PropertyResult& r, std::size_t cases) {
  EXPECT_EQ(r.cases, cases) << r.name;
  EXPECT_EQ(r.failures, 0u) << r.name << ": " << r.first_failure;
}

constexpr std::uint64_t kSeed = 20240601;

}  // namespace

TEST(Properties, EigenvaluePerturbation) { expect_ok(testkit::weyl_property(kSeed + 1, 1000), 1000); }
TEST(Properties, SingularValuePerturbation) { expect_ok(testkit::singular_value_property(kSeed + 2, 1000), 1000); }
TEST(Properties, RankRevealingGuarantees) { expect_ok(testkit::rank_reveal_property(kSeed + 3, 1000), 1000); }
TEST(Properties, ExactKernelIdentity) { expect_ok(testkit::kernel_identity_property(kSeed + 4, 1000), 1000); }
TEST(Properties, SubmatrixEigenvalueBound) { expect_ok(testkit::submatrix_eigen_property(kSeed + 5, 1000), 1000); }
TEST(Properties, InverseStability) { expect_ok(testkit::inverse_stability_property(kSeed + 6, 1000), 1000); }
TEST(Properties, HvecRoundTrip) { expect_ok(testkit::hvec_property(kSeed + 7, 1000), 1000); }
TEST(Properties, JacobianFiniteDifferences) { expect_ok(testkit::jacobian_property(kSeed + 8, 1000), 1000); }
TEST(Properties, IntervalEnclosure) { expect_ok(testkit::interval_enclosure_property(kSeed + 9, 1000), 1000); }
TEST(Properties, KrawczykSoundness) { expect_ok(testkit::krawczyk_property(kSeed + 10, 1000), 1000); }

TEST(Properties, DifferentSeedsAlsoPass) {
  expect_ok(testkit::rank_reveal_property(7, 200), 200);
  expect_ok(testkit::submatrix_eigen_property(7, 200), 200);
}
