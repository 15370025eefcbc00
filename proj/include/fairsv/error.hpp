// Copyright (c) 2026 The fairsv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRSV_ERROR_HPP_
#define FAIRSV_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace fairsv {

// All diagnostics carry the module that raised them, e.g.
// "manifest: missing required column 'gender'".
class Error : public std::runtime_error {
 public:
  Error(const std::string& module, const std::string& message)
      : std::runtime_error(module + ": " + message), module_(module) {}

  const std::string& module() const { return module_; }

 private:
  std::string module_;
};

}  // namespace fairsv

#endif  // FAIRSV_ERROR_HPP_
