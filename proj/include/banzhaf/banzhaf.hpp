// Copyright 2026 The banzhaf-lw Authors
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

#ifndef BANZHAF_BANZHAF_HPP
#define BANZHAF_BANZHAF_HPP

#include <banzhaf/atlas.hpp>
#include <banzhaf/error.hpp>
#include <banzhaf/experiment.hpp>
#include <banzhaf/game.hpp>
#include <banzhaf/rng.hpp>
#include <banzhaf/simplex.hpp>
#include <banzhaf/solver.hpp>
#include <banzhaf/svg.hpp>

namespace banzhaf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace banzhaf

#endif  // BANZHAF_BANZHAF_HPP
