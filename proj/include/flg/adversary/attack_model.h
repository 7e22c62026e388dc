// Copyright 2026 The FLG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLG_ADVERSARY_ATTACK_MODEL_H_
#define FLG_ADVERSARY_ATTACK_MODEL_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace flg {

using FeatureMatrix = std::vector<std::vector<double>>;

// Binary logistic regression on standardized features, fitted by Newton's
// method with a small ridge penalty. Used as the attack classifier for both
// membership and property inference.
class LogisticAttackModel {
 public:
  explicit LogisticAttackModel(double l2 = 1e-2, int max_iters = 50)
      : l2_(l2), max_iters_(max_iters) {}

  // Throws InvalidArgument on empty input, ragged rows or a single class.
  void Fit(const FeatureMatrix& x, std::span<const int> labels);
  // P(label = 1 | x).
  double Score(std::span<const double> x) const;
  std::vector<double> Scores(const FeatureMatrix& x) const;

  std::span<const double> weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  double l2_;
  int max_iters_;
  std::vector<double> mean_;
  std::vector<double> scale_;
  std::vector<double> weights_;
  double bias_ = 0.0;
};

// Area under the ROC curve (Mann-Whitney U; ties count one half).
// Throws InvalidArgument unless both classes are present.
double Auc(std::span<const double> scores, std::span<const int> labels);

struct ConfusionMatrix {
  size_t tp = 0;
  size_t fp = 0;
  size_t tn = 0;
  size_t fn = 0;

  size_t total() const { return tp + fp + tn + fn; }
  double accuracy() const {
    return total() == 0 ? 0.0
                        : 1.0 - static_cast<double>(fp + fn) /
                                    static_cast<double>(total());
  }
};

ConfusionMatrix Confusion(std::span<const double> scores, std::span<const int> labels,
                          double threshold = 0.5);

// Outcome of one attack, serialized into report.json.
struct AttackReport {
  std::string attack;
  double accuracy = 0.0;
  double auc = 0.5;
  ConfusionMatrix confusion;
  std::vector<double> per_round;  // attack-specific trace
  std::vector<std::pair<std::string, std::string>> config;
  size_t rounds = 0;
};

}  // namespace flg

#endif  // FLG_ADVERSARY_ATTACK_MODEL_H_
