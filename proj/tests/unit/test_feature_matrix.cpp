#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <botsentinel/error.hpp>
#include <botsentinel/feature_matrix.hpp>

using namespace botsentinel;

namespace {

TemporalFeatures temporal(double seed) {
  return {8.0 + seed, -100.0 - seed, 0.1 * seed, 50.0 + seed, 2, 3, 0.25};
}

SemanticFeatures semantic(double seed) {
  SemanticFeatures s;
  s.lexical_diversity = 0.5;
  s.unique_words = 10;
  s.mean_words = 4 + seed;
  s.var_words = 1.5;
  s.hashtag_freq = seed;
  s.rho = {0.3, 0.2, 0.1, 0.05, 0.01};
  s.sentiment = {0.1, -0.2, seed};
  return s;
}

FeatureMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  FeatureMatrix m;
  std::normal_distribution<double> g(3.0, 2.0);
  m.values = Matrix(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    m.user_ids.push_back("u" + std::to_string(r));
    m.labels.push_back(r % 3 == 2 ? std::nullopt : std::optional<Label>(r % 3 ? Label::kInorganic : Label::kOrganic));
    for (std::size_t c = 0; c < cols; ++c) m.values(r, c) = g(rng);
  }
  for (std::size_t c = 0; c < cols; ++c) m.feature_names.push_back("f" + std::to_string(c));
  return m;
}

}  // namespace

TEST(FeatureMatrix, CanonicalRosterHasNineteenColumns) {
  const auto& names = canonical_feature_names();
  EXPECT_EQ(names.size(), 19u);
  EXPECT_EQ(names.front(), "periodicity");
  EXPECT_EQ(names[7], "lexical_diversity");
  EXPECT_EQ(names.back(), "sent_nrc_slot");
}

TEST(FeatureMatrix, AssemblesTwoUsersInCanonicalOrder) {
  const auto m = assemble_matrix({{"b", temporal(1)}, {"a", temporal(2)}}, {{"a", semantic(2)}, {"b", semantic(1)}},
                                 {{"a", Label::kOrganic}});
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 19u);
  EXPECT_EQ(m.user_ids, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(m.labels[0], Label::kOrganic);
  EXPECT_FALSE(m.labels[1].has_value());
  const auto row = feature_row(temporal(2), semantic(2));
  for (std::size_t c = 0; c < 19; ++c) EXPECT_EQ(m.values(0, c), row[c]);
  EXPECT_EQ(m.values(0, *m.column_index("hashtag_freq")), 2.0);
  EXPECT_EQ(m.values(0, *m.column_index("sent_nrc_slot")), 2.0);
}

TEST(FeatureMatrix, MismatchedUsersListTheDifference) {
  try {
    assemble_matrix({{"a", temporal(1)}, {"only_t", temporal(1)}}, {{"a", semantic(1)}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("only_t"), std::string::npos);
  }
}

TEST(Standardize, TwoPointColumnUsesPopulationSd) {
  FeatureMatrix m;
  m.user_ids = {"a", "b"};
  m.feature_names = {"x", "k"};
  m.labels = {std::nullopt, std::nullopt};
  m.values = Matrix::from_rows({{1, 5}, {3, 5}});
  const auto s = standardize(m);
  EXPECT_DOUBLE_EQ(s.values(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(s.values(1, 0), 1.0);
  EXPECT_EQ(s.values(0, 1), 0.0);
  EXPECT_EQ(s.values(1, 1), 0.0);
  ASSERT_TRUE(s.standardization.has_value());
  EXPECT_TRUE(s.standardization->is_constant(1));
  EXPECT_FALSE(s.standardization->is_constant(0));
}

TEST(Standardize, ZeroMeanUnitSdOnRandomMatrices) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = standardize(random_matrix(rng, 5 + rng() % 50, 1 + rng() % 8));
    for (std::size_t c = 0; c < m.cols(); ++c) {
      double mean = 0, sq = 0;
      for (std::size_t r = 0; r < m.rows(); ++r) mean += m.values(r, c);
      mean /= m.rows();
      for (std::size_t r = 0; r < m.rows(); ++r) sq += (m.values(r, c) - mean) * (m.values(r, c) - mean);
      EXPECT_NEAR(mean, 0.0, 1e-12);
      EXPECT_NEAR(std::sqrt(sq / m.rows()), 1.0, 1e-12);
    }
  }
}

TEST(Standardize, NeedsTwoRowsAndReusesStatistics) {
  std::mt19937_64 rng(2);
  auto one = random_matrix(rng, 1, 3);
  EXPECT_THROW(standardize(one), Error);
  const auto train = random_matrix(rng, 20, 3);
  const auto test = random_matrix(rng, 7, 3);
  const auto st = standardize(train);
  const auto applied = standardize_with(test, *st.standardization);
  for (std::size_t r = 0; r < test.rows(); ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      EXPECT_DOUBLE_EQ(applied.values(r, c),
                       (test.values(r, c) - st.standardization->mean[c]) / st.standardization->sd[c]);
    }
  }
}

TEST(FeatureMatrix, SelectionHelpers) {
  std::mt19937_64 rng(3);
  const auto m = random_matrix(rng, 9, 4);
  const std::vector<std::string> ids{"u5", "u1"};
  const auto sub = select_users(m, ids);
  EXPECT_EQ(sub.user_ids, ids);
  const std::vector<std::string> cols{"f3", "f0"};
  const auto sel = select_features(m, cols);
  EXPECT_EQ(sel.feature_names, cols);
  EXPECT_EQ(sel.values(4, 0), m.values(4, 3));
  EXPECT_EQ(labeled_only(m).rows(), 6u);
  EXPECT_EQ(labels_of(labeled_only(m)).size(), 6u);
  const std::vector<std::string> missing{"nope"};
  EXPECT_THROW(select_features(m, missing), Error);
}

TEST(FeatureCsv, RoundTripIsExact) {
  std::mt19937_64 rng(4);
  auto m = random_matrix(rng, 25, 6);
  m.user_ids[3] = "needs,\"quoting\"";
  const auto text = to_csv(m);
  const auto back = parse_feature_csv(text);
  EXPECT_EQ(back.user_ids, m.user_ids);
  EXPECT_EQ(back.feature_names, m.feature_names);
  EXPECT_EQ(back.values, m.values);
  EXPECT_EQ(back.labels, m.labels);
  EXPECT_EQ(to_csv(back), text);
  EXPECT_EQ(text.substr(0, 8), "user_id,");
}
