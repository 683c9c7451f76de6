// Copyright 2026 The critscene Authors
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
#ifndef CRITSCENE__CRITSCENE_HPP_
#define CRITSCENE__CRITSCENE_HPP_

// Core pipeline without the HTTP binding and CLI.
#include "critscene/analysis.hpp"
#include "critscene/criticality.hpp"
#include "critscene/error.hpp"
#include "critscene/geometry.hpp"
#include "critscene/ingest.hpp"
#include "critscene/lanemap.hpp"
#include "critscene/scenegraph.hpp"
#include "critscene/service.hpp"
#include "critscene/visexport.hpp"

#endif  // CRITSCENE__CRITSCENE_HPP_
