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

#include <stdexcept>
#include <string>

namespace mschelling {

/// Malformed arguments: bad node ids, empty/occupied mismatches, bad parameters.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The requested quantity does not exist for this game (e.g. the potential for k >= 2).
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Exhaustive search would exceed the configured state cap.
class CapExceededError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A generator could not realize the requested instance.
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mschelling
