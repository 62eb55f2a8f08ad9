/*
 * Copyright 2026 The planreg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PLANREG_ERROR_H_
#define PLANREG_ERROR_H_

#include <stdexcept>
#include <string>

namespace planreg {

// Base class for every error raised by the library. Subclasses name the
// failure category so callers (and the CLI exit codes) can tell them apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PLANREG_DEFINE_ERROR(Name)  \
  class Name : public Error {       \
   public:                          \
    using Error::Error;             \
  }

PLANREG_DEFINE_ERROR(InvalidPolygonError);
PLANREG_DEFINE_ERROR(EmptyGeometryError);
PLANREG_DEFINE_ERROR(BoundsError);
PLANREG_DEFINE_ERROR(ShapeError);
PLANREG_DEFINE_ERROR(SchemaError);
PLANREG_DEFINE_ERROR(LookupError);
PLANREG_DEFINE_ERROR(LimitError);
PLANREG_DEFINE_ERROR(NoMatchError);
PLANREG_DEFINE_ERROR(EmptyStructureError);
PLANREG_DEFINE_ERROR(InvalidPoseError);
PLANREG_DEFINE_ERROR(InvalidEndpointError);
PLANREG_DEFINE_ERROR(LocalizationError);
PLANREG_DEFINE_ERROR(FormatError);
PLANREG_DEFINE_ERROR(IoError);

#undef PLANREG_DEFINE_ERROR

}  // namespace planreg

#endif  // PLANREG_ERROR_H_
