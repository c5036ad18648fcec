// Copyright 2026 The depspec Authors
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

#include "depspec/bounds.hpp"
#include "depspec/core.hpp"
#include "depspec/explore.hpp"
#include "depspec/funlang.hpp"
#include "depspec/report.hpp"
#include "depspec/sources.hpp"
#include "depspec/spectral.hpp"
#include "depspec/verify.hpp"
