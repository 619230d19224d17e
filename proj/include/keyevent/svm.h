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

// Linear max-margin classifier trained with Pegasos-style subgradient steps
// on the L2-regularized hinge loss:
//
//   min_w  lambda/2 |w|^2 + 1/n sum_i max(0, 1 - y_i (w.x_i + b))
//
// The bias is learned as the weight of a constant feature, so it is lightly
// regularized as well. Sample order per epoch comes from the seed, which
// makes training fully deterministic.

#ifndef KEYEVENT_SVM_H_
#define KEYEVENT_SVM_H_

#include <cstdint>
#include <span>
#include <vector>

namespace keyevent {

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;

  double decision(std::span<const double> x) const;
};

struct SvmOptions {
  double lambda = 0.01;
  int epochs = 100;
};

// labels are +1 / -1. Throws UsageError on empty or inconsistent input.
LinearModel train_linear_svm(std::span<const std::vector<double>> features,
                             std::span<const int> labels,
                             const SvmOptions& options, std::uint64_t seed);

// Regularized hinge objective of `model` on the data; used by tests.
double hinge_objective(const LinearModel& model,
                       std::span<const std::vector<double>> features,
                       std::span<const int> labels, double lambda);

}  // namespace keyevent

#endif  // KEYEVENT_SVM_H_
