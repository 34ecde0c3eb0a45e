// Copyright 2026 The uspn Authors.
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

#pragma once

#include <string>

namespace uspn {

enum class Method {
  monte_carlo,
  contour,
  closed_form_q1,
  closed_form_q2,
  closed_form_q3,
  determinantal
};

std::string to_string(Method m);

// A value with its statistical or quadrature error bar.
struct DensityEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int n = 0;
  int N = 0;
  Method method = Method::monte_carlo;
  long long samples = 0;
};

}  // namespace uspn
