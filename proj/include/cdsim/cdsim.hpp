// Copyright 2026 The cdsim Authors
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

// Core library. Config and experiment drivers (which need nlohmann/json)
// live in cdsim/config.hpp and cdsim/experiments.hpp.
#pragma once

#include "cdsim/cd_drivers.hpp"
#include "cdsim/circuits.hpp"
#include "cdsim/error.hpp"
#include "cdsim/evolution.hpp"
#include "cdsim/format.hpp"
#include "cdsim/models.hpp"
#include "cdsim/noise.hpp"
#include "cdsim/pauli.hpp"
#include "cdsim/state_vector.hpp"
