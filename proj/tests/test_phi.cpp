#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "epsk/errors.hpp"
#include "epsk/oracles.hpp"
#include "epsk/phi.hpp"
#include "epsk/rng.hpp"

using namespace epsk;

namespace {

std::vector<PhiSpec> all_kinds() {
  return {make_phi(PhiKind::Linear),
          make_phi(PhiKind::PowerQ, {0.5, 0.5}),
          make_phi(PhiKind::Log, {0.5}),
          make_phi(PhiKind::Arctan, {0.5}),
          make_phi(PhiKind::Scad, {3.7})};
}

}  // namespace

TEST_CASE("family invariants hold for every kind") {
  for (const PhiSpec& p : all_kinds()) {
    CAPTURE(phi_kind_name(p.kind));
    CHECK(std::abs(phi_eval(p, p.t_star)) <= 1e-12);
    CHECK(std::abs(phi_eval(p, 1.0) - 1.0) <= 1e-12);
    CHECK(p.t_star >= 0.0);
    CHECK(p.t_star < 1.0);
    CHECK(p.d_minus_1 >= 1.0 / (1.0 - p.t_star) - 1e-10);
    CHECK(p.t_zero >= 0.0);
    CHECK(p.t_zero < 1.0);
    const double target = 1.0 / (1.0 - p.t_star);
    CHECK(phi_dminus(p, p.t_zero) <= target + 1e-9);
    CHECK(phi_dplus(p, p.t_zero) >= target - 1e-9);
  }
}

TEST_CASE("cached constants match hand values") {
  const PhiSpec lin = make_phi(PhiKind::Linear);
  CHECK(lin.t_star == 0.0);
  CHECK(lin.d_minus_1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lin.t_zero == 0.0);

  const PhiSpec scad = make_phi(PhiKind::Scad, {3.7});
  CHECK(scad.norm_c == doctest::Approx((3.7 + 1.0) / 2.0).epsilon(1e-14));
  CHECK(scad.d_minus_1 ==
        doctest::Approx(2.0 * 3.7 / (3.7 + 1.0)).epsilon(1e-14));
  CHECK(scad.t_zero == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(scad.t_star == 0.0);

  const PhiSpec pq = make_phi(PhiKind::PowerQ, {0.5, 0.5});
  CHECK(pq.t_star == doctest::Approx(0.5).epsilon(1e-14));
  const PhiSpec lg = make_phi(PhiKind::Log, {0.5});
  CHECK(lg.t_star == doctest::Approx(0.5).epsilon(1e-14));
  const PhiSpec at = make_phi(PhiKind::Arctan, {0.5});
  CHECK(at.t_star == 0.0);
}

TEST_CASE("linear conjugate closed form") {
  const PhiSpec lin = make_phi(PhiKind::Linear);
  CHECK(psi_star(lin, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(psi_star(lin, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(psi_star(lin, 0.5) == 0.0);
  CHECK(psi_star(lin, -3.0) == 0.0);
}

TEST_CASE("conjugate properties: nondecreasing, nonnegative, Fenchel") {
  CounterRng rng(5, 0);
  for (const PhiSpec& p : all_kinds()) {
    CAPTURE(phi_kind_name(p.kind));
    double prev = psi_star(p, -4.0);
    // psi* is bounded below by -phi(0) (attained as s -> -inf) and is
    // nonnegative once s >= 0 because phi vanishes at t_star.
    CHECK(prev >= -phi_eval(p, 0.0) - 1e-12);
    CHECK(psi_star(p, 0.0) >= -1e-15);
    for (double s = -4.0 + 0.03125; s <= 8.0; s += 0.03125) {
      const double v = psi_star(p, s);
      CHECK(v >= prev - 1e-12);
      prev = v;
      // Fenchel inequality against three random t in [0,1].
      for (int j = 0; j < 3; ++j) {
        const double t = rng.next_double();
        CHECK(v >= s * t - phi_eval(p, t) - 1e-10);
      }
    }
  }
}

TEST_CASE("conjugate matches unimodal-search oracle") {
  for (const PhiSpec& p : all_kinds()) {
    CAPTURE(phi_kind_name(p.kind));
    CounterRng rng(17, static_cast<std::uint64_t>(p.kind));
    for (int i = 0; i < 200; ++i) {
      const double s = rng.next_uniform(-4.0, 9.0);
      CHECK(std::abs((psi_star(p, s)) - (conjugate_by_search(p, s))) <= (1e-8));
    }
  }
}

TEST_CASE("conjugate subgradient attains the sup and lies in [0,1]") {
  for (const PhiSpec& p : all_kinds()) {
    CAPTURE(phi_kind_name(p.kind));
    CounterRng rng(19, static_cast<std::uint64_t>(p.kind));
    for (int i = 0; i < 200; ++i) {
      const double s = rng.next_uniform(-4.0, 9.0);
      const double t = psi_star_subgrad(p, s);
      CHECK(t >= 0.0);
      CHECK(t <= 1.0);
      CHECK(std::abs((s * t - phi_eval(p, t)) - (psi_star(p, s))) <= (1e-10));
    }
  }
}

TEST_CASE("scad subgradient matches its printed closed form") {
  const double a = 3.7;
  const PhiSpec scad = make_phi(PhiKind::Scad, {a});
  for (double s = 0.0; s <= 6.0; s += 0.01) {
    const double expect =
        std::min(1.0, std::max(((a + 1.0) * s - 2.0) / (2.0 * (a - 1.0)), 0.0));
    CHECK(std::abs((psi_star_subgrad(scad, s)) - (expect)) <= (1e-12));
  }
}

TEST_CASE("scalar penalty value: identity and three-case bounds") {
  GridSpec grid{0.0, 1.0, 100001};
  for (const PhiSpec& p : all_kinds()) {
    CAPTURE(phi_kind_name(p.kind));
    const double c = 1.0 / (1.0 - p.t_star);
    for (double w = 0.0; w <= 2.5 * p.d_minus_1; w += 0.05) {
      const double v = scalar_penalty_value(p, w);
      CHECK(std::abs((v) - (scalar_min_by_grid(p, w, grid))) <= (1e-6));
      CHECK(v <= 1.0 + 1e-12);
      CHECK(v >= -1e-12);
      if (w > p.d_minus_1 + 1e-9) {
        CHECK(std::abs((v) - (1.0)) <= (1e-12));
      } else if (w >= c) {
        CHECK(v >= w * (1.0 - p.t_zero) / (p.d_minus_1 * (1.0 - p.t_star)) -
                       1e-10);
      } else {
        CHECK(v >= w * (1.0 - p.t_zero) - 1e-10);
      }
    }
  }
}

TEST_CASE("t_zero closed forms agree with a derivative bisection") {
  for (const PhiSpec& p : all_kinds()) {
    CAPTURE(phi_kind_name(p.kind));
    // Recompute by pure bisection on the left derivative.
    const double target = 1.0 / (1.0 - p.t_star);
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (phi_dminus(p, mid) < target)
        lo = mid;
      else
        hi = mid;
    }
    CHECK(std::abs((p.t_zero) - (lo)) <= (1e-9));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(make_phi(PhiKind::PowerQ, {0.0, 0.5}), InvalidParameter);
  CHECK_THROWS_AS(make_phi(PhiKind::PowerQ, {0.5, 1.0}), InvalidParameter);
  CHECK_THROWS_AS(make_phi(PhiKind::PowerQ, {0.5}), InvalidParameter);
  CHECK_THROWS_AS(make_phi(PhiKind::Log, {1.5}), InvalidParameter);
  CHECK_THROWS_AS(make_phi(PhiKind::Arctan, {}), InvalidParameter);
  CHECK_THROWS_AS(make_phi(PhiKind::Scad, {1.0}), InvalidParameter);
  CHECK_THROWS_AS(make_phi(PhiKind::Linear, {0.3}), InvalidParameter);
}

TEST_CASE("evaluation outside the domain throws") {
  const PhiSpec lg = make_phi(PhiKind::Log, {0.5});
  CHECK_THROWS_AS(phi_eval(lg, 1.6), DomainError);
  const PhiSpec at = make_phi(PhiKind::Arctan, {0.5});
  CHECK_THROWS_AS(phi_eval(at, -0.1), DomainError);
  CHECK_THROWS_AS(scalar_penalty_value(lg, -1.0), DomainError);
}

TEST_CASE("json round trip") {
  for (const PhiSpec& p : all_kinds()) {
    const PhiSpec q = phi_from_json(phi_to_json(p));
    CHECK(q.kind == p.kind);
    CHECK(q.eps == p.eps);
    CHECK(q.q == p.q);
    CHECK(q.a == p.a);
    CHECK(std::abs((q.t_zero) - (p.t_zero)) <= (1e-15));
  }
  CHECK_THROWS_AS(phi_from_json("{"), InvalidParameter);
  CHECK_THROWS_AS(phi_from_json(R"({"kind":"mystery"})"), InvalidParameter);
  CHECK_THROWS_AS(phi_from_json(R"({"params":{"a":3.7}})"), InvalidParameter);
}
