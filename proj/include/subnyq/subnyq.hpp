// Copyright 2026 The subnyq Authors
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

#pragma once

#include "subnyq/critical.hpp"
#include "subnyq/errors.hpp"
#include "subnyq/findim.hpp"
#include "subnyq/noisy.hpp"
#include "subnyq/pcm.hpp"
#include "subnyq/psd.hpp"
#include "subnyq/quadrature.hpp"
#include "subnyq/sampled_drf.hpp"
#include "subnyq/spectral_set.hpp"
#include "subnyq/waterfill.hpp"
