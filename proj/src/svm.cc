// Copyright 2026 The keyevent Authors
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

#include "keyevent/svm.h"

#include <algorithm>
#include <numeric>

#include "keyevent/error.h"
#include "keyevent/rng.h"

namespace keyevent {

double LinearModel::decision(std::span<const double> x) const {
  double s = bias;
  for (std::size_t i = 0; i < weights.size() && i < x.size(); ++i) {
    s += weights[i] * x[i];
  }
  return s;
}

LinearModel train_linear_svm(std::span<const std::vector<double>> features,
                             std::span<const int> labels,
                             const SvmOptions& options, std::uint64_t seed) {
  if (features.empty()) throw UsageError("no training samples");
  if (features.size() != labels.size()) {
    throw UsageError("features and labels differ in length");
  }
  if (!(options.lambda > 0.0) || options.epochs < 1) {
    throw UsageError("SVM needs lambda > 0 and at least one epoch");
  }
  const std::size_t dim = features.front().size();
  for (const auto& x : features) {
    if (x.size() != dim) throw UsageError("training vectors differ in dimension");
  }
  for (int y : labels) {
    if (y != 1 && y != -1) throw UsageError("labels must be +1 or -1");
  }

  // weights[dim] is the bias (constant feature 1).
  std::vector<double> w(dim + 1, 0.0);
  std::vector<std::size_t> order(features.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      ++t;
      const auto& x = features[i];
      const double y = labels[i];
      const double eta = 1.0 / (options.lambda * static_cast<double>(t));
      double margin = w[dim];
      for (std::size_t k = 0; k < dim; ++k) margin += w[k] * x[k];
      margin *= y;
      const double shrink = 1.0 - eta * options.lambda;
      for (double& v : w) v *= shrink;
      if (margin < 1.0) {
        for (std::size_t k = 0; k < dim; ++k) w[k] += eta * y * x[k];
        w[dim] += eta * y;
      }
    }
  }
  LinearModel model;
  model.bias = w[dim];
  w.pop_back();
  model.weights = std::move(w);
  return model;
}

double hinge_objective(const LinearModel& model,
                       std::span<const std::vector<double>> features,
                       std::span<const int> labels, double lambda) {
  double reg = model.bias * model.bias;
  for (double v : model.weights) reg += v * v;
  double loss = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    loss += std::max(0.0, 1.0 - labels[i] * model.decision(features[i]));
  }
  return 0.5 * lambda * reg + loss / static_cast<double>(features.size());
}

}  // namespace keyevent
