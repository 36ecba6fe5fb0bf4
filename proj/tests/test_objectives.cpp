#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "carlab/objectives.hpp"
#include "carlab/rng.hpp"

using namespace carlab;

TEST_CASE("h pair factories and names") {
  CHECK(HPair::from_name("log").kind == HKind::log_pair);
  CHECK(HPair::from_name("linear").kind == HKind::linear_pair);
  CHECK_THROWS_AS(HPair::from_name("cubic"), std::invalid_argument);
  CHECK(HPair::log_pair().name() == "log");
  CHECK(HPair::linear_pair().name() == "linear");
}

TEST_CASE("discriminator_loss on the worked examples") {
  const std::vector<double> prior = {0.5, 0.5};
  // Perfect discrimination.
  std::vector<double> df = {1.0 - 1e-9}, dc = {1e-9};
  CHECK(discriminator_loss(df, dc, prior) == doctest::Approx(0.0).epsilon(1e-4));
  // Maximally confused: log 2.
  df = {0.5};
  dc = {0.5};
  CHECK(discriminator_loss(df, dc, prior) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // Direct arithmetic oracle.
  df = {0.8, 0.6};
  dc = {0.3};
  const double want =
      0.5 * (-(std::log(0.8) + std::log(0.6)) / 2.0) + 0.5 * (-std::log(0.7));
  CHECK(discriminator_loss(df, dc, prior) == doctest::Approx(want).epsilon(1e-12));
  CHECK(discriminator_loss(df, dc, prior) == doctest::Approx(0.3618).epsilon(1e-3));
}

TEST_CASE("discriminator_loss rejects empty lists and odd priors") {
  const std::vector<double> prior = {0.5, 0.5};
  std::vector<double> some = {0.5}, none;
  CHECK_THROWS_AS(discriminator_loss(none, some, prior), std::invalid_argument);
  CHECK_THROWS_AS(discriminator_loss(some, none, prior), std::invalid_argument);
  const std::vector<double> bad_prior = {1.0};
  CHECK_THROWS_AS(discriminator_loss(some, some, bad_prior),
                  std::invalid_argument);
}

TEST_CASE("discriminator_loss is permutation invariant") {
  SplitRng rng(31);
  const std::vector<double> prior = {0.4, 0.6};
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> df, dc;
    for (int i = 0; i < 7; ++i) df.push_back(rng.uniform(0.05, 0.95));
    for (int i = 0; i < 5; ++i) dc.push_back(rng.uniform(0.05, 0.95));
    const double base = discriminator_loss(df, dc, prior);
    std::reverse(df.begin(), df.end());
    std::rotate(dc.begin(), dc.begin() + 2, dc.end());
    CHECK(discriminator_loss(df, dc, prior) == doctest::Approx(base).epsilon(1e-14));
  }
}

TEST_CASE("generator_objective on the worked examples") {
  std::vector<double> d = {0.7};
  CHECK(generator_objective(d, HPair::linear_pair(), GeneratorRole::factual) ==
        doctest::Approx(0.7));
  d = {0.5};
  CHECK(generator_objective(d, HPair::log_pair(),
                            GeneratorRole::counterfactual) ==
        doctest::Approx(-std::log(0.5)).epsilon(1e-12));
  d = {0.25, 0.75};
  const double want = (std::log(0.25) + std::log(0.75)) / 2.0;
  CHECK(generator_objective(d, HPair::log_pair(), GeneratorRole::factual) ==
        doctest::Approx(want).epsilon(1e-12));
  CHECK(want == doctest::Approx(-0.8370).epsilon(1e-3));
  std::vector<double> none;
  CHECK_THROWS_AS(generator_objective(none, HPair::log_pair(),
                                      GeneratorRole::factual),
                  std::invalid_argument);
}

TEST_CASE("generator_objective is monotone in every d output") {
  SplitRng rng(17);
  for (const auto& h : {HPair::log_pair(), HPair::linear_pair()}) {
    for (auto role : {GeneratorRole::factual, GeneratorRole::counterfactual}) {
      for (int rep = 0; rep < 30; ++rep) {
        std::vector<double> d;
        for (int i = 0; i < 6; ++i) d.push_back(rng.uniform(0.05, 0.9));
        const double base = generator_objective(d, h, role);
        const int j = static_cast<int>(rng.below(6));
        d[j] += rng.uniform(0.0, 0.95 - d[j]);
        CHECK(generator_objective(d, h, role) >= base - 1e-12);
      }
    }
  }
}

TEST_CASE("multiclass aggregation reduces to the two-class objective") {
  const std::vector<double> d = {0.2, 0.4, 0.9};
  const HPair lin = HPair::linear_pair();
  CHECK(generator_objective_multiclass(d, lin.h0) == doctest::Approx(0.5));
  CHECK(generator_objective_multiclass(d, lin.h1) ==
        doctest::Approx(generator_objective(d, lin, GeneratorRole::counterfactual)));
  const std::vector<double> one = {0.5};
  CHECK(generator_objective_multiclass(one, lin.h0) == doctest::Approx(0.5));
  const HPair lg = HPair::log_pair();
  CHECK(generator_objective_multiclass(d, lg.h0) ==
        doctest::Approx(generator_objective(d, lg, GeneratorRole::factual)));
}

TEST_CASE("sparsity_continuity_penalty worked examples") {
  RegularizerConfig cfg{1.0, 1.0, 0.2};
  // Fraction exactly alpha, constant mask: zero.
  std::vector<double> mask(10, 0.2);
  CHECK(sparsity_continuity_penalty(mask, cfg) == doctest::Approx(0.0));
  // Two selected, contiguous and interior: two boundary transitions.
  mask.assign(10, 0.0);
  mask[4] = mask[5] = 1.0;
  CHECK(sparsity_continuity_penalty(mask, cfg) == doctest::Approx(2.0));
  // All ones: only the sparsity term.
  mask.assign(10, 1.0);
  CHECK(sparsity_continuity_penalty(mask, cfg) == doctest::Approx(0.8));
  // Bag masks have no continuity term.
  mask.assign(10, 0.0);
  mask[0] = 1.0;
  mask[7] = 1.0;
  CHECK(sparsity_continuity_penalty(mask, cfg, /*ordered=*/false) ==
        doctest::Approx(0.0));
  std::vector<double> empty;
  CHECK_THROWS_AS(sparsity_continuity_penalty(empty, cfg),
                  std::invalid_argument);
}

TEST_CASE("penalty is nonnegative and zero only at target constant masks") {
  SplitRng rng(23);
  RegularizerConfig cfg{1.0, 1.0, 0.3};
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> mask;
    const int k = 1 + static_cast<int>(rng.below(12));
    for (int i = 0; i < k; ++i) mask.push_back(rng.next_double());
    const double pen = sparsity_continuity_penalty(mask, cfg);
    CHECK(pen >= 0.0);
    double mean = 0.0;
    for (double m : mask) mean += m;
    mean /= k;
    bool constant = true;
    for (double m : mask) constant = constant && m == mask[0];
    if (pen == 0.0) {
      CHECK(mean == doctest::Approx(cfg.alpha));
      CHECK(constant);
    }
  }
}

TEST_CASE("check_h_conditions certifies both shipped pairs") {
  for (const auto& h : {HPair::log_pair(), HPair::linear_pair()}) {
    const auto rep = check_h_conditions(h, 0.01);
    CHECK(rep.pass);
    CHECK(rep.h0_monotone);
    CHECK(rep.h1_monotone);
    CHECK(rep.h0_composite_convex);
    CHECK(rep.h1_composite_concave);
  }
}

TEST_CASE("check_h_conditions rejects a decreasing h0") {
  // 1/x is decreasing on (0,1]; its slope is the -1/x^2 shape.
  auto bad = HPair::custom([](double x) { return 1.0 / x; },
                           [](double x) { return x; });
  const auto rep = check_h_conditions(bad, 0.01);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.h0_monotone);
}

TEST_CASE("check_h_conditions validates grid_step") {
  CHECK_THROWS_AS(check_h_conditions(HPair::linear_pair(), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_h_conditions(HPair::linear_pair(), 0.5),
                  std::invalid_argument);
}

TEST_CASE("f_from_h reproduces the closed forms") {
  const auto lin = f_from_h(HPair::linear_pair());
  CHECK(lin.convex);
  CHECK(lin.at_one == 0.0);  // exact
  CHECK(lin.f(2.0) == doctest::Approx(3.0));   // x^2 - 1
  CHECK(lin.f(0.5) == doctest::Approx(-0.75));
  const auto lg = f_from_h(HPair::log_pair());
  CHECK(lg.convex);
  CHECK(lg.at_one == 0.0);
  CHECK(lg.f(2.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(lg.f(0.5) == doctest::Approx(0.5 * std::log(0.5)).epsilon(1e-12));
}
