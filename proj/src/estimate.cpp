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

#include "uspn/estimate.hpp"

namespace uspn {

std::string to_string(Method m) {
  switch (m) {
    case Method::monte_carlo: return "monte_carlo";
    case Method::contour: return "contour";
    case Method::closed_form_q1: return "closed_form_q1";
    case Method::closed_form_q2: return "closed_form_q2";
    case Method::closed_form_q3: return "closed_form_q3";
    case Method::determinantal: return "determinantal";
  }
  return "unknown";
}

}  // namespace uspn
