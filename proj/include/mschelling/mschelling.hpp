/*
 * Copyright 2026 The mschelling Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "mschelling/analysis.hpp"
#include "mschelling/constructions.hpp"
#include "mschelling/dynamics.hpp"
#include "mschelling/enumerate.hpp"
#include "mschelling/error.hpp"
#include "mschelling/fraction.hpp"
#include "mschelling/json_io.hpp"
#include "mschelling/model.hpp"
#include "mschelling/random.hpp"
#include "mschelling/utility.hpp"
#include "mschelling/verify.hpp"
