#pragma once

#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "botsentinel/feature_matrix.hpp"
#include "botsentinel/matrix.hpp"

namespace botsentinel {

// Reported for a column that is an exact linear combination of the others.
inline constexpr double kVifInfinite = std::numeric_limits<double>::infinity();

// VIF_j = 1 / (1 - R^2_j), R^2_j from the least-squares regression of column j
// on every other column plus an intercept. Needs rows > cols and no constant
// column.
std::vector<double> vif(const Matrix& values);
std::map<std::string, double> vif(const FeatureMatrix& matrix);

struct VifReport {
  std::vector<std::pair<std::string, double>> elimination_trace;  // in removal order
  std::vector<std::string> retained;                               // original column order
  std::map<std::string, double> final_vifs;
  std::vector<std::string> constant_features;  // removed before any regression
  bool unresolvable = false;                   // final max VIF still >= threshold
  double threshold = 5.0;
};

// Greedy elimination: drop the largest VIF >= threshold (earlier column wins
// ties) and recompute until every VIF is below the threshold. Constant
// columns are dropped first and traced with an infinite VIF.
VifReport select_by_vif(const FeatureMatrix& matrix, double threshold = 5.0);

}  // namespace botsentinel
