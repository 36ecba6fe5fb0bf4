#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "carlab/metrics.hpp"
#include "test_fixtures.hpp"

using namespace carlab;
using testing::six_word_model;

TEST_CASE("prf1 worked examples") {
  // Perfect agreement.
  std::vector<Mask> pred = {{0, 1, 1, 0}}, truth = {{0, 1, 1, 0}};
  auto rep = prf1(pred, truth);
  CHECK(rep.precision == 1.0);
  CHECK(rep.recall == 1.0);
  CHECK(rep.f1 == 1.0);
  CHECK(rep.sparsity == doctest::Approx(0.5));

  // Selecting {2,3,4} against truth {2,3}: p=2/3, r=1, f1=0.8.
  pred = {{0, 0, 1, 1, 1, 0}};
  truth = {{0, 0, 1, 1, 0, 0}};
  rep = prf1(pred, truth);
  CHECK(rep.precision == doctest::Approx(2.0 / 3.0));
  CHECK(rep.recall == doctest::Approx(1.0));
  CHECK(rep.f1 == doctest::Approx(0.8));

  // Empty prediction: all zeros by definition.
  pred = {{0, 0, 0}};
  truth = {{1, 0, 0}};
  rep = prf1(pred, truth);
  CHECK(rep.precision == 0.0);
  CHECK(rep.recall == 0.0);
  CHECK(rep.f1 == 0.0);

  std::vector<Mask> shorter = {{1, 0}};
  CHECK_THROWS_AS(prf1(pred, shorter), std::invalid_argument);
}

TEST_CASE("prf1 micro aggregation equals pooled scoring") {
  SplitRng rng(61);
  std::vector<Mask> pred, truth;
  Mask pooled_p, pooled_t;
  for (int j = 0; j < 25; ++j) {
    const int k = 3 + static_cast<int>(rng.below(9));
    Mask p(k), t(k);
    for (int i = 0; i < k; ++i) {
      p[i] = rng.bernoulli(0.3);
      t[i] = rng.bernoulli(0.4);
    }
    pooled_p.insert(pooled_p.end(), p.begin(), p.end());
    pooled_t.insert(pooled_t.end(), t.begin(), t.end());
    pred.push_back(std::move(p));
    truth.push_back(std::move(t));
  }
  const auto split = prf1(pred, truth);
  std::vector<Mask> one_p = {pooled_p}, one_t = {pooled_t};
  const auto pooled = prf1(one_p, one_t);
  CHECK(split.precision == doctest::Approx(pooled.precision));
  CHECK(split.recall == doctest::Approx(pooled.recall));
  CHECK(split.f1 == doctest::Approx(pooled.f1));
  CHECK(split.sparsity == doctest::Approx(pooled.sparsity));

  // Permutation invariance over documents.
  std::reverse(pred.begin(), pred.end());
  std::reverse(truth.begin(), truth.end());
  const auto rev = prf1(pred, truth);
  CHECK(rev.f1 == doctest::Approx(split.f1));
}

TEST_CASE("degeneration_score counts neutral selections") {
  auto m = six_word_model();  // words 4,5 neutral
  Document d0;
  d0.label = 0;
  d0.bag = {0, 0, 1, 1, 1, 1};
  std::vector<Document> docs = {d0, d0};

  std::vector<Mask> class_only = {{0, 0, 1, 1, 0, 0}, {0, 0, 1, 0, 0, 0}};
  CHECK(degeneration_score(class_only, docs, m) == 0.0);
  std::vector<Mask> neutral_only = {{0, 0, 0, 0, 1, 1}, {0, 0, 0, 0, 1, 0}};
  CHECK(degeneration_score(neutral_only, docs, m) == 1.0);
  std::vector<Mask> half = {{0, 0, 1, 0, 1, 0}, {0, 0, 1, 0, 1, 0}};
  CHECK(degeneration_score(half, docs, m) == doctest::Approx(0.5));
}

TEST_CASE("degeneration_score on token sequences") {
  auto m = six_word_model();
  Document d;
  d.label = 0;
  d.bag = {0, 0, 1, 0, 1, 0};
  d.tokens = {2, 4, 4, 2};
  d.truth_mask = {1, 0, 0, 1};
  std::vector<Document> docs = {d};
  std::vector<Mask> sel = {{1, 1, 0, 0}};  // one class word, one neutral
  CHECK(degeneration_score(sel, docs, m) == doctest::Approx(0.5));
}

TEST_CASE("export_curves sorts by gap and dominates induced rows") {
  auto m = six_word_model();
  SelectionPolicy zero{0, PolicyRole::factual, std::vector<double>(6, 0.0)};
  SelectionPolicy zero_c{0, PolicyRole::counterfactual,
                         std::vector<double>(6, 0.0)};
  auto rows = export_curves(m, zero, zero_c, 0);
  REQUIRE(rows.size() == 6);
  // First row carries the maximal occurrence gap.
  CHECK(rows[0].word == 2);  // gap 0.6
  CHECK(rows[1].word == 3);  // gap 0.5
  for (const auto& r : rows) {
    CHECK(r.p_zf == 0.0);
    CHECK(r.p_zc == 0.0);
  }
  // Upper-bound columns equal the occurrence rows.
  for (const auto& r : rows) {
    CHECK(r.p_x_t == m.occ(0, r.word));
    CHECK(r.p_x_other == m.occ(1, r.word));
  }

  // Closed-form equilibrium policies: factual below its bound, counterfactual
  // exactly at the min formula.
  auto sol = optimal_factual_index_set(m, 0, 1.3, HPair::log_pair());
  rows = export_curves(m, sol.factual_policy, sol.counterfactual_policy, 0);
  for (const auto& r : rows) {
    CHECK(r.p_zf <= r.p_x_t + 1e-12);
    CHECK(r.p_zc <= r.p_x_other + 1e-12);
    CHECK(r.p_zc ==
          doctest::Approx(std::min(r.p_zf, r.p_x_other)).epsilon(1e-12));
  }
}

TEST_CASE("curves csv has the pinned header") {
  auto m = six_word_model();
  SelectionPolicy zero{0, PolicyRole::factual, std::vector<double>(6, 0.0)};
  auto rows = export_curves(m, zero, zero, 0);
  const auto csv = curves_to_csv(rows);
  CHECK(csv.substr(0, csv.find('\n')) == "rank,word,p_x_t,p_x_other,p_zf,p_zc");
}
