// Copyright 2026 The noisy-lll Authors. All rights reserved.
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

// Umbrella header.

#include "nlll/analysis.hpp"
#include "nlll/channel.hpp"
#include "nlll/distribution.hpp"
#include "nlll/dynamics.hpp"
#include "nlll/error.hpp"
#include "nlll/game.hpp"
#include "nlll/graph.hpp"
#include "nlll/kernel.hpp"
#include "nlll/rng.hpp"
#include "nlll/stats.hpp"
