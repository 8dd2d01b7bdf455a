#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "sfbif/errors.hpp"
#include "sfbif/random.hpp"
#include "sfbif/sfpath.hpp"

using namespace sfbif;

namespace {

OperatorPath diag_lambda_one(double a, double b) {
  return OperatorPath::affine(a, b, SymMatrix::diagonal({0.0, 1.0}), SymMatrix::diagonal({1.0, 0.0}));
}

OperatorPath diag_lambda_minus_lambda() {
  return OperatorPath::affine(-1.0, 1.0, SymMatrix(2), SymMatrix::diagonal({1.0, -1.0}));
}

int morse(const SymMatrix& s) { return inertia(s).neg; }

}  // namespace

TEST_SUITE("sfpath") {
  TEST_CASE("evaluate examples") {
    const auto grid = OperatorPath::from_samples({0.0, 1.0}, {SymMatrix(2), SymMatrix::diagonal({2.0, 4.0})});
    CHECK(grid.evaluate(0.5) == SymMatrix::diagonal({1.0, 2.0}));
    CHECK(grid.smooth());

    const auto rule = OperatorPath::analytic(0.0, 5.0, 2, [](double l) { return SymMatrix::identity(2) * l; });
    CHECK(rule.evaluate(3.0) == SymMatrix::identity(2) * 3.0);

    const SymMatrix mid = SymMatrix::diagonal({-1.0, 7.0});
    const auto three = OperatorPath::from_samples({0.0, 0.3, 1.0}, {SymMatrix(2), mid, SymMatrix(2)});
    CHECK(three.evaluate(0.3) == mid);
    CHECK_FALSE(three.smooth());
    CHECK_THROWS_AS(three.evaluate(1.5), DomainError);
    CHECK_THROWS_AS(OperatorPath::from_samples({0.0, 0.0}, {mid, mid}), DomainError);
    CHECK_THROWS_AS(OperatorPath::from_samples({0.0}, {mid}), DomainError);
  }

  TEST_CASE("is_admissible examples") {
    CHECK(is_admissible(diag_lambda_one(-1.0, 1.0)) == std::pair{true, true});
    CHECK(is_admissible(diag_lambda_one(0.0, 1.0)) == std::pair{false, true});
    CHECK(is_admissible(OperatorPath::constant(0.0, 1.0, SymMatrix::identity(3))) == std::pair{true, true});
  }

  TEST_CASE("extended_sf examples") {
    CHECK(extended_sf(diag_lambda_one(-1.0, 1.0)).total_sf == 1);
    CHECK(extended_sf(diag_lambda_minus_lambda()).total_sf == 0);
    const auto constant = extended_sf(OperatorPath::constant(0.0, 1.0, SymMatrix::diagonal({0.0, 1.0})));
    CHECK(constant.total_sf == 0);
    CHECK(constant.shift_delta > 0.0);
    CHECK(constant.shift_delta <= 1e-6);
  }

  TEST_CASE("extended_sf counts eigenvalues of K in (c, d)") {
    Rng rng(31);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t dim = 2 + trial % 6;
      const SymMatrix k = random_symmetric(rng, dim);
      double c = u(rng), d = u(rng);
      if (c > d) std::swap(c, d);
      if (d - c < 0.1) d = c + 0.1;
      const auto eig = eigenvalues(k);
      bool near = false;
      int inside = 0;
      for (double e : eig) {
        near = near || std::abs(e - c) < 1e-6 || std::abs(e - d) < 1e-6;
        inside += (e > c && e < d);
      }
      if (near) continue;
      const auto path = OperatorPath::affine(c, d, -k, SymMatrix::identity(dim));
      CHECK(extended_sf(path).total_sf == inside);
    }
  }

  TEST_CASE("locate_crossings examples") {
    ScanOptions opts;
    opts.n_grid = 101;
    const auto one = locate_crossings(diag_lambda_one(-1.0, 1.0), opts).crossings;
    REQUIRE(one.size() == 1);
    CHECK(std::abs(one[0].lambda_est) <= 1e-8 * 2.0);
    CHECK(one[0].kernel_dim == 1);
    CHECK(one[0].local_sf == 1);
    CHECK(one[0].hi - one[0].lo <= 2e-8);
    CHECK(one[0].regular == true);
    CHECK(one[0].form_signature == 1);

    const auto two_path = OperatorPath::affine(-1.0, 1.0, SymMatrix::diagonal({-0.25, 0.25}), SymMatrix::identity(2));
    const auto two = spectral_flow(two_path);
    REQUIRE(two.crossings.size() == 2);
    CHECK(two.crossings[0].lambda_est == doctest::Approx(-0.25).epsilon(1e-7));
    CHECK(two.crossings[1].lambda_est == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(two.crossings[0].local_sf == 1);
    CHECK(two.crossings[1].local_sf == 1);
    CHECK(two.total_sf == 2);
    CHECK(morse(two_path.start()) == 2);
    CHECK(morse(two_path.end()) == 0);

    CHECK(locate_crossings(OperatorPath::constant(0.0, 1.0, SymMatrix::identity(2))).crossings.empty());
    CHECK_THROWS_AS(locate_crossings(diag_lambda_one(-1.0, 1.0), ScanOptions{.n_grid = 1}), DomainError);
  }

  TEST_CASE("crossing at an endpoint is flagged") {
    const auto scan = locate_crossings(diag_lambda_one(0.0, 1.0));
    REQUIRE(scan.crossings.size() == 1);
    CHECK(scan.crossings[0].at_endpoint);
    CHECK_FALSE(scan.notes.empty());
  }

  TEST_CASE("even-multiplicity touch between grid points is found") {
    // Two eigenvalues dip to -0.01 and come back inside one coarse cell.
    const auto path = OperatorPath::analytic(-1.0, 1.0, 2, [](double l) {
      const double v = 100.0 * (l - 0.013) * (l - 0.013) - 0.01;
      return SymMatrix::diagonal({v, 1.0});
    });
    const auto r = spectral_flow(path, ScanOptions{.n_grid = 8});
    CHECK(r.total_sf == 0);
    REQUIRE(r.crossings.size() == 2);
    CHECK(r.crossings[0].local_sf == -1);
    CHECK(r.crossings[1].local_sf == 1);
  }

  TEST_CASE("crossing_form examples") {
    const auto f1 = crossing_form(diag_lambda_one(-1.0, 1.0), 0.0);
    CHECK(f1.form.dim() == 1);
    CHECK(f1.form(0, 0) == doctest::Approx(1.0));
    CHECK(f1.signature == 1);
    CHECK(f1.regular);

    const auto f2 = crossing_form(diag_lambda_minus_lambda(), 0.0);
    CHECK(f2.form.dim() == 2);
    CHECK(f2.signature == 0);
    CHECK(f2.regular);

    const auto square = OperatorPath::analytic(-1.0, 1.0, 2, [](double l) { return SymMatrix::diagonal({l * l, 1.0}); });
    const auto f3 = crossing_form(square, 0.0);
    CHECK(f3.form(0, 0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_FALSE(f3.regular);

    CHECK_THROWS_AS(crossing_form(diag_lambda_one(-1.0, 1.0), 0.5), DomainError);
  }

  TEST_CASE("sf_regular_sum examples") {
    const auto p1 = diag_lambda_one(-1.0, 1.0);
    CHECK(sf_regular_sum(p1, locate_crossings(p1).crossings) == 1);

    const auto p2 = diag_lambda_minus_lambda();
    CHECK(sf_regular_sum(p2, locate_crossings(p2).crossings) == 0);

    const auto positive = OperatorPath::affine(0.0, 2.0, -SymMatrix::identity(2), SymMatrix::identity(2));
    const auto cr = locate_crossings(positive).crossings;
    REQUIRE(cr.size() == 1);
    CHECK(cr[0].kernel_dim == 2);
    CHECK(sf_regular_sum(positive, cr) == 2);
    CHECK(extended_sf(positive).total_sf == 2);

    const auto tangent = OperatorPath::analytic(-1.0, 1.0, 2, [](double l) {
      return SymMatrix::diagonal({l * l * l, 1.0});
    });
    CHECK_THROWS_AS(sf_regular_sum(tangent, locate_crossings(tangent).crossings), DomainError);
  }

  TEST_CASE("path algebra") {
    const auto left = diag_lambda_one(-1.0, 0.0);
    const auto right = diag_lambda_one(0.0, 1.0);
    const auto joined = concat(left, right);
    CHECK(joined.lower() == -1.0);
    CHECK(joined.upper() == 1.0);
    CHECK(joined.evaluate(0.5) == SymMatrix::diagonal({0.5, 1.0}));
    CHECK(extended_sf(left).total_sf + extended_sf(right).total_sf == extended_sf(joined).total_sf);
    CHECK(extended_sf(joined).total_sf == 1);

    CHECK(extended_sf(reverse(diag_lambda_one(-1.0, 1.0))).total_sf == -1);
    CHECK(reverse(diag_lambda_one(-1.0, 1.0)).evaluate(-1.0) == SymMatrix::diagonal({1.0, 1.0}));

    const auto sum = direct_sum(diag_lambda_one(-1.0, 1.0), diag_lambda_one(-1.0, 1.0));
    CHECK(sum.dim() == 4);
    CHECK(extended_sf(sum).total_sf == 2);

    CHECK_THROWS_AS(concat(left, diag_lambda_one(0.5, 1.0)), DomainError);
    CHECK_THROWS_AS(concat(left, OperatorPath::constant(0.0, 1.0, SymMatrix::identity(2))), DomainError);
    CHECK_THROWS_AS(direct_sum(left, right), DomainError);

    const auto part = diag_lambda_one(-1.0, 1.0).restricted(0.25, 0.75);
    CHECK(part.lower() == 0.25);
    CHECK(part.evaluate(0.5) == SymMatrix::diagonal({0.5, 1.0}));
  }

  TEST_CASE("is_nondecreasing examples") {
    CHECK(is_nondecreasing(OperatorPath::affine(0.0, 1.0, SymMatrix(2), SymMatrix::identity(2))));
    CHECK_FALSE(is_nondecreasing(diag_lambda_minus_lambda()));
    CHECK(is_nondecreasing(OperatorPath::constant(0.0, 1.0, SymMatrix::diagonal({-1.0, 2.0}))));
  }

  TEST_CASE("compare_paths examples") {
    const auto l = diag_lambda_one(-1.0, 1.0);
    const auto m = OperatorPath::affine(-1.0, 1.0, SymMatrix::diagonal({0.1, 1.0}), SymMatrix::diagonal({1.0, 0.0}));
    const auto r1 = compare_paths(l, m);
    CHECK(r1.start_ordered);
    CHECK_FALSE(r1.end_ordered);
    CHECK_FALSE(r1.hypothesis);

    const auto r2 = compare_paths(l, l);
    CHECK(r2.hypothesis);
    CHECK(r2.sf_l == r2.sf_m);
    CHECK(r2.conclusion);

    const auto dip = OperatorPath::analytic(-1.0, 1.0, 2, [](double x) {
      return SymMatrix::diagonal({x, 1.0}) - SymMatrix::identity(2) * (0.05 * (1.0 - x) * (x + 1.0));
    });
    const auto r3 = compare_paths(l, dip);
    CHECK(r3.hypothesis);
    CHECK(r3.conclusion);
    CHECK(r3.sf_m == r3.sf_l);
  }

  TEST_CASE("local flows telescope on random paths") {
    Rng rng(404);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t dim = 2 + trial % 5;
      const auto path = OperatorPath::segment(0.0, 1.0, random_invertible(rng, dim), random_invertible(rng, dim));
      const auto r = spectral_flow(path, ScanOptions{.n_grid = 64});
      int sum = 0;
      for (const auto& c : r.crossings) {
        CHECK(std::abs(c.local_sf) <= c.kernel_dim);
        sum += c.local_sf;
      }
      CHECK(sum == r.total_sf);
      CHECK(r.total_sf == morse(path.start()) - morse(path.end()));
    }
  }

  TEST_CASE("verify_axioms small run") {
    const auto report = verify_axioms(7, 25);
    CHECK(report.passed);
    CHECK(report.counterexample.empty());
    CHECK(report.checks.size() >= 7);
    for (const auto& c : report.checks) CHECK(c.failures == 0);
    CHECK_THROWS_AS(verify_axioms(7, 0), DomainError);
  }
}
