// Copyright 2026 The oseql Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oseql/simulated_model.hpp"
#include "oseql/transports.hpp"

namespace oseql {

std::unique_ptr<Oracle> make_oracle(const OracleConfig& config,
                                    const SimulatedModelParams& simulated) {
  config.validate();
  switch (config.kind) {
    case OracleKind::Subprocess:
      return std::make_unique<SubprocessOracle>(config);
    case OracleKind::Http:
      return std::make_unique<HttpOracle>(config);
    case OracleKind::Simulated:
      break;
  }
  return std::make_unique<SimulatedOracle>(simulated);
}

}  // namespace oseql
