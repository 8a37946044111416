#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "latdef/potential.hpp"

using namespace latdef;

namespace {

constexpr double kPi = std::numbers::pi;

DefectSpec ns(std::initializer_list<std::pair<int, double>> ka) {
  std::vector<DefectEntry> e;
  for (auto [k, a] : ka) e.push_back({k, a, {}});
  return DefectSpec(e);
}

// int_0^inf e^{-rt} g(t) dt split at the given breakpoints.
template <class F>
double laplace(F g, double r, std::vector<double> bps) {
  std::sort(bps.begin(), bps.end());
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  auto h = [&](double t) {
    const double e = std::exp(-r * t);
    return e == 0.0 ? 0.0 : e * g(t);
  };
  double total = 0.0, lo = 0.0;
  for (double b : bps) {
    if (b > lo) total += ts.integrate(h, lo, b);
    lo = std::max(lo, b);
  }
  return total + es.integrate(h, lo, std::numeric_limits<double>::infinity());
}

Potential random_base(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return InversePower{1.05 + 3.0 * u(rng)};
    case 1: return YukawaPower{0.1 + 2.0 * u(rng), 0.6 + 3.0 * u(rng)};
    default: {
      const double x1 = 1.05 + 3.0 * u(rng);
      return LennardJones{0.5 + u(rng), 0.5 + u(rng), x1, x1 + 0.5 + 3.0 * u(rng)};
    }
  }
}

}  // namespace

TEST_CASE("eval") {
  CHECK(eval(InversePower{2}, 4.0) == doctest::Approx(1.0 / 16));
  const double s = 1.7;
  const Potential fk = Potential::defect_modified(InversePower{s}, ns({{2, 1.0}}));
  CHECK(eval(fk, 1.0) == doctest::Approx(1 - std::pow(2.0, -2 * s)).epsilon(1e-15));
  CHECK(eval(Gaussian{1}, 1.0) == doctest::Approx(std::exp(-kPi)).epsilon(1e-15));
  CHECK(eval(YukawaPower{1, 2}, 2.0) == doctest::Approx(std::exp(-2.0) / 4).epsilon(1e-15));
  CHECK(eval(LennardJones{1, 1, 3, 6}, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("defect-modified algebra is the literal expression") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const Potential base = i % 4 == 3 ? Potential(Gaussian{0.2 + u(rng)}) : random_base(rng);
    const DefectSpec spec = ns({{2, u(rng) - 0.5}, {3, 2 * u(rng)}});
    const Potential fk = Potential::defect_modified(base, spec);
    for (double r : {0.3, 1.0, 2.7}) {
      const double expect = base(r) - spec.entries()[0].a * base(4.0 * r) - spec.entries()[1].a * base(9.0 * r);
      CHECK(fk(r) == expect);
    }
  }
}

TEST_CASE("density closed forms") {
  const DensityFn one = density(InversePower{1});
  CHECK(one(0.3) == doctest::Approx(1.0));
  CHECK(one(17.0) == doctest::Approx(1.0));
  const DensityFn yk = density(YukawaPower{1, 2});
  CHECK(yk(0.5) == 0.0);
  CHECK(yk(3.0) == doctest::Approx(2.0));
  const DensityFn dk = density(Potential::defect_modified(InversePower{2}, ns({{2, 1.0}})));
  for (double t : {0.5, 1.0, 7.0}) CHECK(dk(t) == doctest::Approx(15.0 / 16.0 * t).epsilon(1e-15));
  for (double r : {0.5, 1.0, 2.0})
    CHECK(laplace([&](double t) { return dk(t); }, r, {}) == doctest::Approx(eval(Potential::defect_modified(InversePower{2}, ns({{2, 1.0}})), r)).epsilon(1e-8));

  const DensityFn g = density(Gaussian{0.5});
  CHECK(!g.has_evaluator());
  REQUIRE(g.atoms.size() == 1);
  CHECK(g.atoms[0].first == doctest::Approx(kPi * 0.5));
  CHECK_THROWS_AS(g(1.0), Error);
  try {
    check_condthm(Gaussian{1}, ns({{2, 0.1}}));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoDensity);
  }
}

TEST_CASE("Laplace consistency of closed-form densities") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    Potential f = random_base(rng);
    if (i % 2 == 1) f = Potential::defect_modified(f, ns({{2, 2 * u(rng) - 1}, {3, u(rng)}}));
    const DensityFn rho = density(f);
    REQUIRE(rho.has_evaluator());
    for (double r : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double q = laplace([&](double t) { return rho(t); }, r, rho.breakpoints);
      const double scale = laplace([&](double t) { return std::abs(rho(t)); }, r, rho.breakpoints);
      CAPTURE(f.describe());
      CAPTURE(r);
      CHECK(std::abs(q - f(r)) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("dirichlet_L") {
  CHECK(dirichlet_L(ns({{2, 1.0}}), 4) == doctest::Approx(1.0 / 16));
  CHECK(dirichlet_L(ns({{2, 1.0}, {3, 1.0}}), 2) == doctest::Approx(13.0 / 36));
  std::vector<DefectEntry> many;
  for (int k = 2; k <= 100; ++k) many.push_back({k, 1.0, {}});
  CHECK(dirichlet_L(DefectSpec(many), 1.8) < 1.0);
}

TEST_CASE("condition on densities") {
  CHECK(check_condthm(InversePower{2}, ns({{2, 1.0}})).holds_on_grid);
  // The right-hand side equals L(2s) rho(t) for inverse powers.
  CHECK(check_condthm(InversePower{2}, ns({{2, 8.0}})).holds_on_grid);
  const auto bad = check_condthm(InversePower{2}, ns({{2, 32.0}}));
  CHECK(!bad.holds_on_grid);
  REQUIRE(bad.first_violation.has_value());
  CHECK(check_condthm(YukawaPower{1, 2}, ns({{2, 1.0}})).holds_on_grid);
}

TEST_CASE("increasing densities with L(2) <= 1 satisfy the condition") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    std::vector<DefectEntry> e;
    for (int k = 2; k <= 6; ++k)
      if (u(rng) < 0.6) e.push_back({k, 0.05 + u(rng), {}});
    if (e.empty()) e.push_back({2, 1.0, {}});
    const double L2 = dirichlet_L(DefectSpec(e), 2.0);
    const double target = i % 5 == 0 ? 1.0 : u(rng);
    for (auto& x : e) x.a *= target / L2;
    const DefectSpec spec(e);
    const Potential f = i % 2 ? Potential(InversePower{1.0 + 3 * u(rng)})
                              : Potential(YukawaPower{2 * u(rng), 1.0 + 3 * u(rng)});
    CAPTURE(f.describe());
    CHECK(check_condthm(f, spec).holds_on_grid);
  }
}

TEST_CASE("g_V and the threshold volume") {
  const LennardJones lj{1, 1, 3, 6};
  const double V0 = V_kappa(lj, {}, 2);
  CHECK(V0 == doctest::Approx(kPi * std::cbrt(2.0 / 120.0)).epsilon(1e-14));
  CHECK(std::abs(g_V(lj, {}, 2, V0, 1.0)) < 1e-12);
  for (double y : {1.0, 2.0, 10.0}) CHECK(g_V(lj, {}, 2, 0.9 * V0, y) > 0.0);
  CHECK(g_V(InversePower{1.3}, {}, 2, 3.0, 5.0) > 0.0);

  const auto ok = check_gV(lj, {}, 2, 0.5 * V0);
  CHECK(ok.holds_on_grid);
  CHECK(ok.min_value > 0.0);
  const auto no = check_gV(lj, {}, 2, 2.0 * V0);
  CHECK(!no.holds_on_grid);
  CHECK(no.argmin < 1.5);
  CHECK(g_V(lj, {}, 2, 2.0 * V0, 1.0) < 0.0);

  const DefectSpec half = ns({{2, 0.5}});
  CHECK(check_gV(lj, half, 2, 0.5 * V_kappa(lj, half, 2)).holds_on_grid);
  CHECK(V_kappa(lj, ns({{2, 1.0}}), 2) > V0);
  try {
    V_kappa(LennardJones{1, 1, 1.2, 2}, ns({{2, 6.0}}), 2);
    FAIL("expected WrongRegime");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WrongRegime);
  }
}

TEST_CASE("g_V agrees with its polynomial factorization") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const int d = 2 + i % 2;
    const double x1 = 0.5 * d + 0.05 + 2 * u(rng);
    const LennardJones lj{0.5 + u(rng), 0.5 + u(rng), x1, x1 + 0.3 + 3 * u(rng)};
    const DefectSpec spec = i % 3 ? ns({{2, u(rng) - 0.3}}) : DefectSpec{};
    const double V = 0.2 + 3 * u(rng);
    const double b1 = lj.c1 * (1 - (spec.empty() ? 0 : dirichlet_L(spec, 2 * lj.x1)));
    const double b2 = lj.c2 * (1 - (spec.empty() ? 0 : dirichlet_L(spec, 2 * lj.x2)));
    const double be1 = b1 * std::pow(kPi, lj.x1 - 1) / std::tgamma(lj.x1);
    const double be2 = b2 * std::pow(kPi, lj.x2 - 1) / std::tgamma(lj.x2);
    const double al = std::pow(V, 2.0 / d);
    const double h = 0.5 * d;
    for (double y : {1.0, 1.7, 4.0, 30.0}) {
      const double tilde = be2 * std::pow(al, lj.x1 - lj.x2) * std::pow(y, 2 * lj.x2 - h) -
                           be1 * std::pow(y, lj.x1 + lj.x2 - h) - be1 * std::pow(y, lj.x2 - lj.x1) +
                           be2 * std::pow(al, lj.x1 - lj.x2);
      const double lhs = g_V(lj, spec, d, V, y) * std::pow(al, lj.x1 - 1) * std::pow(y, lj.x2 + 1 - h);
      const double mag = std::abs(be2 * std::pow(al, lj.x1 - lj.x2) * std::pow(y, 2 * lj.x2 - h)) +
                         std::abs(be1 * std::pow(y, lj.x1 + lj.x2 - h)) + std::abs(be1 * std::pow(y, lj.x2 - lj.x1)) +
                         std::abs(be2 * std::pow(al, lj.x1 - lj.x2));
      CHECK(std::abs(lhs - tilde) <= 1e-10 * mag);
    }
  }
}

TEST_CASE("Lennard-Jones regimes") {
  const LennardJones lj{1, 1, 3, 6};
  CHECK(lj_regime(lj, ns({{2, 1.0}})) == LJRegime::Case1);
  CHECK(lj_regime(LennardJones{1, 1, 1.2, 1.5}, ns({{2, 5.0}})) == LJRegime::Case1);
  CHECK(lj_regime(LennardJones{1, 1, 1.2, 2}, ns({{2, 6.0}})) == LJRegime::Case3);
  CHECK(lj_regime(LennardJones{1, 1, 1.2, 2}, ns({{2, 20.0}})) == LJRegime::Case2);
  CHECK(lj_regime(LennardJones{1, 1, 1.2, 2}, ns({{2, 16.0}})) == LJRegime::Degenerate);
  CHECK(lj_regime(lj, ns({{2, -1.0}})) == LJRegime::Degenerate);
}

TEST_CASE("defect spec validation and JSON") {
  CHECK_THROWS_AS(DefectSpec({{1, 1.0, {}}}), Error);
  CHECK_THROWS_AS(DefectSpec({{2, 0.0, {}}}), Error);
  CHECK_THROWS_AS(DefectSpec({{2, 1.0, {}}, {2, 0.5, {}}}), Error);
  CHECK_THROWS_AS(DefectSpec({{2, 1.0, {{2, 4}}}}), Error);
  const DefectSpec s({{2, 2.0, {{1, 0}, {0, 1}}}});
  CHECK(!s.non_shifted());
  const DefectSpec r = DefectSpec::from_json(s.to_json());
  CHECK(r.to_json() == s.to_json());
  CHECK_THROWS_AS(DefectSpec::from_json(nlohmann::json::parse(R"({"entries":[{"k":2,"a":1,"bogus":1}]})")), Error);
  CHECK_THROWS_AS(DefectSpec::from_json(nlohmann::json::parse(R"({"entries":[{"k":2.5,"a":1}]})")), Error);
  CHECK_THROWS_AS(DefectSpec::from_json(nlohmann::json::parse(R"({"entrys":[]})")), Error);
  CHECK(DefectSpec::from_json(nlohmann::json::parse(R"({"version":1,"entries":[{"k":3,"a":-0.5}]})")).non_shifted());
}

TEST_CASE("potential grammar") {
  CHECK(parse_potential("ip:s=2").describe() == "ip:s=2");
  CHECK(parse_potential("lj:c1=1,c2=1,x1=3,x2=6").describe() == "lj:c1=1,c2=1,x1=3,x2=6");
  CHECK(parse_potential("gauss:alpha=0.5").describe() == "gauss:alpha=0.5");
  CHECK(parse_potential("yuk:sigma=1,s=2").describe() == "yuk:sigma=1,s=2");
  CHECK_THROWS_AS(parse_potential("ip:t=2"), Error);
  CHECK_THROWS_AS(parse_potential("ip:s=x"), Error);
  CHECK_THROWS_AS(parse_potential("morse:a=1"), Error);
  CHECK_THROWS_AS(InversePower{0.9}.s > 0 ? Potential(InversePower{0.9}).validate(2) : void(), Error);
  CHECK_THROWS_AS(Potential(LennardJones{1, 1, 3, 2}).validate(2), Error);
}
