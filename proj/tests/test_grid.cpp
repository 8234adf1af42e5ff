#include "support.hpp"

#include "elastinet/errors.hpp"
#include "elastinet/grid.hpp"

#include <doctest.h>

#include <array>

using namespace elastinet;
using namespace elastinet::testing;

TEST_SUITE("grid") {
  TEST_CASE("stencil weights reproduce monomials") {
    const std::array<int, 6> offsets{-2, -1, 0, 1, 2, 3};
    for (int order = 1; order <= 4; ++order) {
      const auto w = stencil_weights(offsets, order);
      for (int p = 0; p < 6; ++p) {
        double acc = 0.0;
        for (std::size_t i = 0; i < offsets.size(); ++i) acc += w[i] * std::pow(offsets[i], p);
        double expected = 0.0;
        if (p == order) {
          expected = 1.0;
          for (int q = 2; q <= order; ++q) expected *= q;
        }
        CHECK(acc == doctest::Approx(expected).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("classic centered second difference") {
    const std::array<int, 3> offsets{-1, 0, 1};
    const auto w = stencil_weights(offsets, 2);
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(w[1] == doctest::Approx(-2.0));
    CHECK(w[2] == doctest::Approx(1.0));
  }

  TEST_CASE("low-degree polynomials are differentiated exactly") {
    const ScalarGrid q(sample_scalar(32, [](double x) { return 1.0 + 2.0 * x - 3.0 * x * x; }));
    const ScalarGrid d1 = finite_difference(q, 1);
    const ScalarGrid d2 = finite_difference(q, 2);
    const ScalarGrid c(sample_scalar(32, [](double x) { return x - 0.5 * x * x * x; }));
    const ScalarGrid d3 = finite_difference(c, 3);
    const ScalarGrid d4 = finite_difference(c, 4);
    for (std::size_t j = 0; j < q.size(); ++j) {
      CHECK(d1[j] == doctest::Approx(2.0 - 6.0 * q.node(j)).epsilon(1e-10));
      CHECK(d2[j] == doctest::Approx(-6.0).epsilon(1e-9));
      CHECK(d3[j] == doctest::Approx(-3.0).epsilon(1e-7));
      CHECK(std::abs(d4[j]) < 1e-4);
    }
  }

  TEST_CASE("second-order convergence on a smooth function") {
    auto error = [](std::size_t n, int order) {
      const ScalarGrid g(sample_scalar(n, [](double x) { return std::sin(2.0 * x); }));
      const ScalarGrid d = finite_difference(g, order);
      double e = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.node(j);
        const double exact = order == 2 ? -4.0 * std::sin(2.0 * x) : 16.0 * std::sin(2.0 * x);
        e = std::max(e, std::abs(d[j] - exact));
      }
      return e;
    };
    for (int order : {2, 4}) {
      const double rate = std::log2(error(64, order) / error(128, order));
      CHECK(rate > 1.8);
    }
  }

  TEST_CASE("stencil matches the grid operator at every node") {
    const ScalarGrid g(sample_scalar(20, [](double x) { return std::exp(x); }));
    const ScalarGrid d = finite_difference(g, 3);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Stencil s = derivative_stencil(20, j, 3);
      double acc = 0.0;
      for (std::size_t i = 0; i < s.offsets.size(); ++i) acc += s.weights[i] * g[j + s.offsets[i]];
      CHECK(acc == doctest::Approx(d[j]).epsilon(1e-12));
      CHECK(finite_difference_at(g.values(), j, 3) == doctest::Approx(d[j]).epsilon(1e-12));
    }
  }

  TEST_CASE("too coarse grids are rejected") {
    const ScalarGrid g(std::vector<double>(9, 1.0));
    CHECK_THROWS_AS(finite_difference(g, 1), GridError);
  }

  TEST_CASE("trapezoid rule") {
    const auto v = sample_scalar(100, [](double x) { return x; });
    CHECK(trapezoid(v) == doctest::Approx(0.5).epsilon(1e-14));
    const auto s = sample_scalar(200, [](double x) { return x * x; });
    CHECK(trapezoid(s) == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
  }
}
