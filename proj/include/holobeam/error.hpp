// SPDX-License-Identifier: Apache-2.0
//
// holobeam: holographic beamforming models and optimizers for ISAC
// Copyright (C) 2026 The holobeam authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HOLOBEAM_ERROR_HPP
#define HOLOBEAM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace holobeam {

enum class ErrorKind {
    config,      // invalid surface or scenario configuration
    argument,    // precondition violated by a caller
    infeasible,  // optimizer found no feasible point
    parse,       // malformed scenario file
    io,          // filesystem failure
    numeric,     // overflow / non-finite result
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::argument, what);
}

}  // namespace holobeam

#endif
