// Copyright 2026 The Authors.
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

#include "markov_ipp/errors.hpp"
#include "markov_ipp/gp.hpp"
#include "markov_ipp/sampling.hpp"
#include "markov_ipp/transect.hpp"
#include "markov_ipp/planners.hpp"
#include "markov_ipp/bounds.hpp"
#include "markov_ipp/metrics.hpp"
#include "markov_ipp/field_io.hpp"
#include "markov_ipp/experiment.hpp"
