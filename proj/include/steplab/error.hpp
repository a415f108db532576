// Copyright 2026 The steplab Authors
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

#ifndef STEPLAB_ERROR_HPP_
#define STEPLAB_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace steplab {

// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A physical parameter outside its domain (non-positive length, time, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Gain synthesis failed (degenerate step matrices).
class SynthesisError : public Error {
 public:
  using Error::Error;
};

// A JSON document (robot model or scenario) violates its schema. `path` is a
// JSON-pointer-like location of the offending field.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// The IK bound intersection is empty for some joint.
class InfeasibleError : public Error {
 public:
  InfeasibleError(std::string joint, const std::string& what)
      : Error("joint '" + joint + "': " + what), joint_(std::move(joint)) {}
  const std::string& joint() const { return joint_; }

 private:
  std::string joint_;
};

}  // namespace steplab

#endif  // STEPLAB_ERROR_HPP_
