// SPDX-License-Identifier: Apache-2.0
//
// stcs - spatio-temporal compressed sensing toolkit
// Copyright (C) 2026 The stcs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "stcs/baselines.hpp"
#include "stcs/dictionary.hpp"
#include "stcs/error.hpp"
#include "stcs/frame.hpp"
#include "stcs/io.hpp"
#include "stcs/linalg.hpp"
#include "stcs/measurement.hpp"
#include "stcs/metrics.hpp"
#include "stcs/pipeline.hpp"
#include "stcs/random.hpp"
#include "stcs/solver.hpp"
#include "stcs/synthgen.hpp"
