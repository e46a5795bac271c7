#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "korovkin/bounds.hpp"
#include "korovkin/smoothness.hpp"

using namespace korovkin;

namespace {

const char* const kOperators[] = {"bernstein:1", "bernstein:2", "bernstein:7", "stancu:4:0:1", "stancu:4:1:1",
                                  "stancu:6:1:2", "king:2",      "king:5",      "mkz:2:1e-10:0.9", "mkz:4:1e-10"};

std::vector<FunctionSpec> catalog() {
  return {FunctionSpec::monomial(0), FunctionSpec::monomial(1), FunctionSpec::monomial(2), FunctionSpec::monomial(3),
          FunctionSpec::abs_shift(0.5), FunctionSpec::sine_pi(), FunctionSpec::exponential(), FunctionSpec::sqrt_fn(),
          FunctionSpec::ramp(0.3)};
}

}  // namespace

TEST(OperatorProperties, PartitionOfUnityAndPositivity) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (const char* s : kOperators) {
    const auto op = parse_operator(s);
    std::vector<double> w(op.rank());
    for (int k = 0; k < 1000; ++k) {
      op.basis(u(rng), w);
      double sum = 0.0;
      for (double v : w) {
        ASSERT_GE(v, -1e-14) << s;
        sum += v;
      }
      ASSERT_NEAR(sum, 1.0, 1e-12) << s;
    }
  }
}

TEST(OperatorProperties, MonotoneAction) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-1, 1), x01(0, 1);
  for (const char* s : kOperators) {
    const auto op = parse_operator(s);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> f(op.rank()), g(op.rank());
      for (std::size_t k = 0; k < f.size(); ++k) {
        f[k] = u(rng);
        g[k] = f[k] + std::abs(u(rng));
      }
      for (int j = 0; j < 20; ++j) {
        const double x = x01(rng);
        ASSERT_LE(op.apply(f, x), op.apply(g, x) + 1e-12) << s;
      }
    }
  }
}

TEST(OperatorProperties, BernsteinSecondMomentIdentity) {
  for (unsigned n = 1; n <= 30; ++n) {
    const auto m2 = moments(make_bernstein(n), 2, 256);
    for (std::size_t i = 0; i < m2.size(); ++i) {
      const double x = m2.x(i);
      ASSERT_NEAR(m2[i], (1 - 1.0 / n) * x * x + x / n, 1e-12) << n;
    }
  }
}

TEST(IterateProperties, SemigroupLaw) {
  for (const char* s : kOperators) {
    IterationEngine eng(parse_operator(s), 128);
    const auto& tm = eng.transition();
    const auto f = FunctionSpec::sine_pi();
    for (auto [m1, m2] : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 3}, {5, 4}}) {
      auto v = power_on_nodes(tm, eng.op().node_values(f), m1);
      v = power_on_nodes(tm, v, m2 - 1);
      EXPECT_LE(sup_diff(eng.lift(v), eng.apply_power(f, m1 + m2)), 1e-11) << s;
    }
  }
}

TEST(IterateProperties, PowersStayStochastic) {
  for (const char* s : kOperators) {
    const auto tm = transition_matrix(parse_operator(s));
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(tm.a.rows(), tm.a.cols());
    for (int m = 1; m <= 40; ++m) {
      p = p * tm.a;
      ASSERT_LE((p.rowwise().sum().array() - 1.0).abs().maxCoeff(), m * 1e-14 + 1e-13) << s << " " << m;
    }
  }
}

TEST(IterateProperties, FixedPoints) {
  for (const char* s : kOperators) {
    IterationEngine eng(parse_operator(s), 128);
    const bool keeps_e1 = classify_sign(eng.op()).tag == SignTag::preserves_e1;
    for (std::size_t m = 0; m <= 12; ++m) {
      const auto e0 = eng.moment_power(0, m);
      for (std::size_t i = 0; i < e0.size(); ++i) ASSERT_NEAR(e0[i], 1.0, 1e-13) << s;
      if (keeps_e1) {
        const auto e1 = eng.moment_power(1, m);
        for (std::size_t i = 0; i < e1.size(); ++i) ASSERT_NEAR(e1[i], e1.x(i), (m + 1) * 1e-14) << s;
      }
    }
  }
}

TEST(IterateProperties, SquareIncreasesAlongIterates) {
  for (const char* s : kOperators) {
    IterationEngine eng(parse_operator(s), 256);
    const auto tag = classify_sign(eng.op()).tag;
    if (tag != SignTag::preserves_e1 && tag != SignTag::geq_e1) continue;
    auto prev = eng.moment_power(2, 0);
    for (std::size_t m = 1; m <= 20; ++m) {
      const auto cur = eng.moment_power(2, m);
      for (std::size_t i = 0; i < cur.size(); ++i) ASSERT_GE(cur[i], prev[i] - 1e-12) << s << " " << m;
      prev = cur;
    }
  }
}

TEST(IterateProperties, EndpointInterpolationIsIdempotent) {
  IterationEngine eng(make_bernstein(1), 64);
  for (const auto& f : catalog()) {
    const auto once = eng.apply_power(f, 1);
    for (std::size_t m = 2; m <= 6; ++m) EXPECT_LE(sup_diff(eng.apply_power(f, m), once), 1e-15) << f.name();
  }
}

TEST(SmoothnessProperties, ModuliNondecreasing) {
  for (const auto& f : catalog()) {
    const Modulus mod(f, 1024, ModulusMode::discrete);
    double p1 = 0.0, p2 = 0.0;
    for (double d = 0.0; d <= 1.2; d += 0.01) {
      ASSERT_GE(mod.first(d), p1) << f.name();
      ASSERT_GE(mod.second(d), p2) << f.name();
      p1 = mod.first(d);
      p2 = mod.second(d);
    }
  }
}

TEST(SmoothnessProperties, FirstModulusSubadditive) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0, 0.5);
  for (const auto& f : catalog()) {
    const Modulus mod(f, 1024, ModulusMode::discrete);
    for (int k = 0; k < 100; ++k) {
      const double a = u(rng), b = u(rng);
      ASSERT_LE(mod.first(a + b), mod.first(a) + mod.first(b) + mod.first(2.0 / 1024)) << f.name();
    }
  }
}

TEST(SmoothnessProperties, SmoothedDerivativesWithinBounds) {
  for (const auto& f : catalog()) {
    for (double h : {0.05, 0.1, 0.2}) {
      const auto s = zhuk(f, h);
      const double w1 = omega(1, f, h), w2 = omega(2, f, h);
      EXPECT_LE(s.d1_bound, (2 * w1 + 1.5 * w2) / h * 1.05 + 1e-8) << f.name() << " " << h;
      EXPECT_LE(s.d2_bound, 1.5 * w2 / (h * h) * 1.05 + 1e-8) << f.name() << " " << h;
    }
  }
}

TEST(SmoothnessProperties, SmoothingKeepsAffineFunctions) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = u(rng), b = u(rng);
    const auto f = FunctionSpec::custom(GridFunction::tabulate(0, 1, 8, [&](double x) { return a * x + b; }));
    const auto s = zhuk(f, 0.1, 256);
    for (std::size_t i = 0; i < s.zf.size(); ++i) ASSERT_NEAR(s.zf[i], a * s.zf.x(i) + b, 1e-9);
  }
}

TEST(BoundProperties, DispatchedEstimateAlwaysApplies) {
  for (const char* s : kOperators) {
    const auto an = analyze(parse_operator(s), {256});
    const auto e = select_estimate(an);
    if (an.sign.tag == SignTag::mixed) {
      EXPECT_FALSE(e) << s;
      continue;
    }
    ASSERT_TRUE(e) << s;
    EXPECT_EQ(hypothesis_failure(*e, an), "") << s;
  }
}

TEST(BoundProperties, GeometricBoundNonincreasingInM) {
  const auto an = analyze(make_bernstein(5), {128});
  const auto f = FunctionSpec::sqrt_fn();
  const Modulus mod(f);
  auto prev = estimate_bound(Estimate::geometric_rate, mod, an, 0);
  for (std::size_t m = 1; m <= 25; ++m) {
    const auto cur = estimate_bound(Estimate::geometric_rate, mod, an, m);
    for (std::size_t i = 0; i < cur.size(); ++i) ASSERT_LE(cur[i], prev[i]);
    prev = cur;
  }
}

TEST(BoundProperties, SoundOnCatalogIncludingZeroSteps) {
  for (const char* s : kOperators) {
    const auto an = analyze(parse_operator(s), {256});
    if (an.sign.tag == SignTag::mixed) continue;
    for (const auto& f : catalog()) {
      const Modulus mod(f);
      for (std::size_t m : {0u, 1u, 3u, 10u}) {
        const auto r = verify(an, f, mod, m, default_slack());
        EXPECT_TRUE(r.ok()) << s << " " << f.name() << " m=" << m << " min margin " << r.min_margin();
      }
    }
  }
}
