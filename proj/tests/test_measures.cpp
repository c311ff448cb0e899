#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "helpers.hpp"
#include "qdmaps/qdmaps.hpp"

using namespace qdmaps;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double binary_entropy(double p) {
  double s = 0.0;
  if (p > 0.0) s -= p * std::log2(p);
  if (p < 1.0) s -= (1.0 - p) * std::log2(1.0 - p);
  return s;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

/// Reference minimizer: scan the admissible comparison-rate range on a dense
/// uniform grid, integrating the deviation with the same quadrature.
double grid_searched_rate_distance(const ChannelFamily& fam, double horizon) {
  const int samples = 1025;
  double rmin = kInf, rmax = -kInf;
  for (int i = 0; i < samples; ++i) {
    const double r = scalar_decay_rate(fam, horizon * i / (samples - 1));
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  const double lo = std::max(0.0, rmin);
  const double hi = std::max(0.0, rmax);
  const auto deviation = [&](double c) {
    return adaptive_simpson(
               [&](double t) { return std::abs(scalar_decay_rate(fam, t) - c); }, 0.0, horizon)
        .value;
  };
  if (hi - lo < 1e-12) return deviation(lo) / horizon;
  double best = kInf;
  const int steps = 4000;
  for (int k = 0; k <= steps; ++k) best = std::min(best, deviation(lo + (hi - lo) * k / steps));
  return best / horizon;
}

}  // namespace

TEST_CASE("von neumann entropy") {
  ComplexMatrix plus(2, 2);
  plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
  CHECK(von_neumann_entropy(plus) == Catch::Approx(0.0).margin(1e-12));

  CHECK(von_neumann_entropy(0.5 * ComplexMatrix::identity(2)) ==
        Catch::Approx(1.0).margin(1e-12));

  ComplexMatrix skew(2, 2);
  skew(0, 0) = 0.9;
  skew(1, 1) = 0.1;
  CHECK(von_neumann_entropy(skew) == Catch::Approx(binary_entropy(0.9)).margin(1e-12));

  CHECK_THROWS_AS(von_neumann_entropy(ComplexMatrix::identity(2)), DomainError);

  ComplexMatrix indefinite(2, 2);
  indefinite(0, 0) = 1.5;
  indefinite(1, 1) = -0.5;
  CHECK_THROWS_AS(von_neumann_entropy(indefinite), DomainError);

  CHECK_THROWS_AS(von_neumann_entropy(ComplexMatrix(4, 1)), ShapeError);
}

TEST_CASE("holevo bound of state pairs") {
  ComplexMatrix plus(2, 2), minus(2, 2);
  plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
  minus(0, 0) = minus(1, 1) = 0.5;
  minus(0, 1) = minus(1, 0) = -0.5;
  CHECK(holevo_bound(plus, minus) == Catch::Approx(1.0).margin(1e-12));
  CHECK(holevo_bound(plus, plus) == Catch::Approx(0.0).margin(1e-12));

  // Partially dephased pair: rho_pm = (I pm p X)/2 gives 1 - h2((1+p)/2).
  const double p = 0.63;
  ComplexMatrix dp = plus, dm = minus;
  dp(0, 1) = dp(1, 0) = 0.5 * p;
  dm(0, 1) = dm(1, 0) = -0.5 * p;
  CHECK(holevo_bound(dp, dm) ==
        Catch::Approx(1.0 - binary_entropy(0.5 * (1.0 + p))).margin(1e-12));
}

TEST_CASE("holevo curve shapes") {
  const auto grid = linspace(0.0, 10.0, 201);

  const auto oun = holevo_curve(Oun(0.6, 2.0), grid);
  REQUIRE(oun.size() == grid.size());
  CHECK(oun.front().t == 0.0);
  CHECK(oun.front().bound == Catch::Approx(1.0).margin(1e-12));
  for (std::size_t i = 1; i < oun.size(); ++i)
    CHECK(oun[i].bound <= oun[i - 1].bound + 1e-12);

  // Memory slows the loss of distinguishability relative to the memoryless
  // limit at the same asymptotic rate.
  const auto qds = holevo_curve(Oun(0.6, kInf), grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(oun[i].bound >= qds[i].bound - 1e-12);

  // Spectral modulation makes the bound revive.
  const auto mod = holevo_curve(ModOun(1.0, 0.3, 1.5), grid);
  bool revived = false;
  for (std::size_t i = 1; i < mod.size(); ++i)
    if (mod[i].bound > mod[i - 1].bound + 1e-6) revived = true;
  CHECK(revived);

  // The three-rate family is Pauli-diagonal, so the curve is defined; the
  // x eigenvalue contracts monotonically.
  const auto enm = holevo_curve(Enm{}, linspace(0.0, 3.0, 31));
  for (const auto& pt : enm) {
    CHECK(pt.bound >= 0.0);
    CHECK(pt.bound <= 1.0 + 1e-12);
  }
  for (std::size_t i = 1; i < enm.size(); ++i) CHECK(enm[i].bound <= enm[i - 1].bound + 1e-12);

  CHECK_THROWS_AS(holevo_curve(Ad(1.0), grid), FamilyMismatchError);
  CHECK_THROWS_AS(holevo_curve(Nmad(0.3, 1.0), grid), FamilyMismatchError);
}

TEST_CASE("scalar decay rate projection") {
  CHECK(scalar_decay_rate(Oun(1.0, kInf), 0.7) == Catch::Approx(0.25).margin(1e-15));
  CHECK(scalar_decay_rate(Ad(0.7), 1.3) == 0.7);
  CHECK(scalar_decay_rate(Enm{}, 1.0) == Catch::Approx(-std::tanh(1.0)).margin(1e-15));
}

TEST_CASE("zeta vanishes exactly on memoryless families") {
  const MeasureResult qds = zeta(Oun(0.6, kInf), 1.0);
  CHECK(qds.value <= 1e-12);
  CHECK(qds.optimizer_rate == Catch::Approx(0.15).margin(1e-6));
  CHECK(qds.convention == MeasureConvention::d_factor);
  CHECK(qds.horizon == 1.0);

  const MeasureResult ad = zeta(Ad(0.7), 2.0);
  CHECK(ad.value <= 1e-12);
  CHECK(ad.optimizer_rate == Catch::Approx(0.7).margin(1e-6));
}

TEST_CASE("zeta of the eternal family") {
  // The z rate is -tanh(t) <= 0; the admissible comparison range collapses
  // to {0}, so the measure integrates |tanh| exactly.
  const MeasureResult rd = rate_distance(Enm{}, 1.0);
  CHECK(rd.value == Catch::Approx(std::log(std::cosh(1.0))).margin(1e-8));
  CHECK(rd.optimizer_rate == 0.0);
  CHECK(rd.convention == MeasureConvention::rate_distance);

  CHECK(zeta(Enm{}, 1.0, MeasureConvention::d_factor).value ==
        Catch::Approx(4.0 * std::log(std::cosh(1.0))).margin(1e-8));
  CHECK(zeta(Enm{}, 1.0, MeasureConvention::unit).value ==
        Catch::Approx(2.0 * std::log(std::cosh(1.0))).margin(1e-8));

  const MeasureResult longer = rate_distance(Enm{}, 3.0);
  CHECK(longer.value == Catch::Approx(std::log(std::cosh(3.0)) / 3.0).margin(1e-8));
}

TEST_CASE("zeta convention weights") {
  const MeasureResult rd = rate_distance(Oun(0.6, 2.0), 1.0);
  const MeasureResult d = zeta(Oun(0.6, 2.0), 1.0, MeasureConvention::d_factor);
  const MeasureResult u = zeta(Oun(0.6, 2.0), 1.0, MeasureConvention::unit);
  CHECK(d.value == Catch::Approx(4.0 * rd.value).epsilon(1e-12));
  CHECK(u.value == Catch::Approx(2.0 * rd.value).epsilon(1e-12));
  CHECK(d.optimizer_rate == Catch::Approx(rd.optimizer_rate).margin(1e-9));

  // Damping families carry the 1 + sqrt(2) weight instead.
  const MeasureResult nrd = rate_distance(Nmad(0.3, 1.0), 1.0);
  const MeasureResult nd = zeta(Nmad(0.3, 1.0), 1.0, MeasureConvention::d_factor);
  CHECK(nd.value == Catch::Approx((1.0 + std::sqrt(2.0)) * nrd.value).epsilon(1e-12));
}

TEST_CASE("zeta against a dense grid search") {
  const std::vector<ChannelFamily> fams = {Oun(0.6, 2.0),  Pln(0.6, 1.0),
                                           ModOun(1.0, 0.3, 1.5), Rtn(0.6, 0.3),
                                           Nmad(0.3, 1.0), Enm{}};
  for (const auto& fam : fams) {
    INFO(family_name(fam));
    const double reference = grid_searched_rate_distance(fam, 1.0);
    const MeasureResult got = rate_distance(fam, 1.0);
    CHECK(got.value == Catch::Approx(reference).margin(1e-7));
    CHECK(got.value <= reference + 5e-8);
    CHECK(got.quadrature_error_estimate >= 0.0);
    CHECK(got.quadrature_error_estimate < 1e-6);
  }
}

TEST_CASE("pinned-rate bound dominates the optimized measure") {
  const std::vector<ChannelFamily> fams = {Oun(0.6, 2.0), Pln(0.6, 1.0),
                                           ModOun(1.0, 0.3, 1.5), Rtn(0.6, 0.3),
                                           Nmad(0.3, 1.0), Enm{}};
  for (const auto& fam : fams) {
    INFO(family_name(fam));
    const MeasureResult bound = zeta_upper_bound(fam, 1.0);
    const MeasureResult opt = zeta(fam, 1.0);
    CHECK(bound.value >= opt.value - 1e-12);
  }

  // Telegraph noise: the memoryless-limit rate is zero, so the bound
  // integrates |gamma| and has the closed form -2 ln p(T) under the default
  // convention.
  const Rtn rtn(0.6, 0.3);
  const MeasureResult rtn_bound = zeta_upper_bound(rtn, 1.0);
  CHECK(rtn_bound.value == Catch::Approx(-2.0 * std::log(mixing_p(rtn, 1.0))).margin(1e-7));
  CHECK(rtn_bound.optimizer_rate == 0.0);

  // Fast-bandwidth noise is almost memoryless.
  CHECK(zeta_upper_bound(Oun(0.6, 1e4), 1.0).value < 1e-3);
  // Shrinking bandwidth grows the departure from the memoryless limit.
  CHECK(zeta_upper_bound(Oun(0.6, 2.0), 1.0).value <
        zeta_upper_bound(Oun(0.6, 0.5), 1.0).value);
}

TEST_CASE("modulated bound ripples against the sweep direction") {
  // The modulated family's pinned-rate bound is not globally monotone in the
  // inverse bandwidth: the sin^2 modulation beats against the horizon and
  // carves a shallow dip near 1/bandwidth = 2.3. Values frozen from a
  // 2^21-point fixed-step Simpson reference.
  const double at_22 = zeta_upper_bound(ModOun(0.6, 1.0 / 2.2, 1.5), 1.0).value;
  const double at_25 = zeta_upper_bound(ModOun(0.6, 1.0 / 2.5, 1.5), 1.0).value;
  CHECK(at_22 == Catch::Approx(0.507826575).margin(1e-6));
  CHECK(at_25 == Catch::Approx(0.507113158).margin(1e-6));
  CHECK(at_25 < at_22 - 1e-4);
}

TEST_CASE("zeta reports generator singularities inside the horizon") {
  try {
    zeta(Nmad(5.0, 0.1), 4.0);
    FAIL("expected GeneratorSingularityError");
  } catch (const GeneratorSingularityError& err) {
    const double l = std::sqrt(0.1 * (2.0 * 5.0 - 0.1));
    const double predicted = 2.0 * (std::acos(-1.0) - std::atan(l / 0.1)) / l;
    CHECK(err.time == Catch::Approx(predicted).margin(1e-6));
  }

  try {
    zeta(Rtn(0.6, 0.3), 2.0);
    FAIL("expected GeneratorSingularityError");
  } catch (const GeneratorSingularityError& err) {
    CHECK(err.time == Catch::Approx(1.5694).margin(1e-3));
  }

  // Just inside the first zero the measure is still defined.
  CHECK(zeta(Rtn(0.6, 0.3), 1.5).value > 0.0);
}

TEST_CASE("measure horizon validation") {
  CHECK_THROWS_AS(zeta(Oun(0.6, 2.0), 0.0), PreconditionError);
  CHECK_THROWS_AS(zeta(Oun(0.6, 2.0), -1.0), PreconditionError);
  CHECK_THROWS_AS(rate_distance(Oun(0.6, 2.0), kInf), PreconditionError);
}
