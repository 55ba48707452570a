//
// Copyright 2026 The specanon Authors
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
//

#ifndef SPECANON_SPECANON_HPP_
#define SPECANON_SPECANON_HPP_

#include "specanon/anonymize.hpp"
#include "specanon/asymptotics.hpp"
#include "specanon/csv.hpp"
#include "specanon/errors.hpp"
#include "specanon/linalg.hpp"
#include "specanon/privacy.hpp"
#include "specanon/rng.hpp"
#include "specanon/sampling.hpp"
#include "specanon/simulate.hpp"
#include "specanon/simulation_io.hpp"

#endif  // SPECANON_SPECANON_HPP_
