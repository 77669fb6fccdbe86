// Copyright 2026 The qdac Authors
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

#include "qdac/channels.hpp"
#include "qdac/dac.hpp"
#include "qdac/discord.hpp"
#include "qdac/errors.hpp"
#include "qdac/fetch.hpp"
#include "qdac/gates.hpp"
#include "qdac/instance.hpp"
#include "qdac/layout.hpp"
#include "qdac/linalg.hpp"
#include "qdac/satdemo.hpp"
#include "qdac/state.hpp"
