// Copyright 2026 The stag Authors
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

#include "stag/config.hpp"
#include "stag/error.hpp"
#include "stag/fusion.hpp"
#include "stag/fusion_io.hpp"
#include "stag/gbm.hpp"
#include "stag/gbm_io.hpp"
#include "stag/ingest.hpp"
#include "stag/metrics.hpp"
#include "stag/sensorsim.hpp"
#include "stag/signal.hpp"
#include "stag/spline.hpp"
#include "stag/stats.hpp"
#include "stag/stream.hpp"
#include "stag/text.hpp"
