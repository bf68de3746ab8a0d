// SPDX-License-Identifier: Apache-2.0
//
// fasdep: dependability analysis for fluid antenna receivers
// Copyright (C) 2026 The fasdep authors
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

#ifndef FASDEP_ERRORS_HPP
#define FASDEP_ERRORS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace fasdep {

/// Argument outside the documented domain of an operation.
class DomainError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not deliver a trustworthy result.
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Series, quadrature or fixed-point iteration stopped before reaching its
/// tolerance. Carries what was achieved so callers can report it.
class ConvergenceError : public NumericalError
{
public:
    ConvergenceError(const std::string &what, double achieved_error, long iterations)
        : NumericalError(what + " (achieved error " + std::to_string(achieved_error) +
                         " after " + std::to_string(iterations) + " steps)"),
          achieved_error_(achieved_error), iterations_(iterations)
    {
    }

    double achieved_error() const noexcept { return achieved_error_; }
    long iterations() const noexcept { return iterations_; }

private:
    double achieved_error_;
    long iterations_;
};

namespace detail {

inline void require(bool ok, const std::string &msg)
{
    if (!ok)
        throw DomainError(msg);
}

inline void require_finite(double x, const char *what)
{
    if (!std::isfinite(x))
        throw DomainError(std::string(what) + ": argument must be finite");
}

} // namespace detail
} // namespace fasdep

#endif // FASDEP_ERRORS_HPP
