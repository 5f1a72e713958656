// SPDX-License-Identifier: Apache-2.0
//
// mmwpc - multi-cell hybrid mmWave pilot contamination simulator
// Copyright (C) 2026 The mmwpc authors
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

#ifndef MMWPC_CORE_HPP
#define MMWPC_CORE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace mmwpc
{
    using cplx = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CRowVector = Eigen::RowVectorXcd;
    using CMatrix = Eigen::MatrixXcd;
    using RVector = Eigen::VectorXd;

    inline constexpr double pi = std::numbers::pi;

    // Rician factor that denotes a pure line-of-sight link; the scattering draw is skipped.
    inline constexpr double los_only = std::numeric_limits<double>::infinity();

    // Base of all library errors. `kind()` is the error class name reported by the CLI.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
        virtual const char *kind() const noexcept { return "Error"; }
    };

    // Invalid parameter or scenario; `field()` names the offending setting when known.
    class ConfigError : public Error
    {
    public:
        explicit ConfigError(const std::string &msg, std::string field = {})
            : Error(msg), field_(std::move(field)) {}
        const char *kind() const noexcept override { return "ConfigError"; }
        const std::string &field() const noexcept { return field_; }

    private:
        std::string field_;
    };

    // Malformed configuration text; `line()` is 1-based, 0 if unknown.
    class ParseError : public Error
    {
    public:
        ParseError(const std::string &msg, std::size_t line)
            : Error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
        const char *kind() const noexcept override { return "ParseError"; }
        std::size_t line() const noexcept { return line_; }

    private:
        std::size_t line_;
    };

    // Operands with inconsistent shapes.
    class DimensionError : public Error
    {
    public:
        using Error::Error;
        const char *kind() const noexcept override { return "DimensionError"; }
    };

    // Channel estimate too ill-conditioned for zero-forcing.
    class DegenerateChannelError : public Error
    {
    public:
        DegenerateChannelError(const std::string &msg, double rcond)
            : Error(msg), rcond_(rcond) {}
        const char *kind() const noexcept override { return "DegenerateChannelError"; }
        double rcond() const noexcept { return rcond_; }

    private:
        double rcond_;
    };

    class IoError : public Error
    {
    public:
        IoError(const std::string &msg, std::string path)
            : Error(msg + ": " + path), path_(std::move(path)) {}
        const char *kind() const noexcept override { return "IoError"; }
        const std::string &path() const noexcept { return path_; }

    private:
        std::string path_;
    };

    namespace detail
    {
        inline void require(bool cond, const std::string &msg, const std::string &field = {})
        {
            if (!cond)
                throw ConfigError(msg, field);
        }

        inline void require_angle(double angle, const char *name)
        {
            // NaN fails both comparisons
            if (!(angle >= 0.0 && angle <= pi))
                throw ConfigError(std::string(name) + " must lie in [0, pi], got " + std::to_string(angle), name);
        }

        // Rician weights (sqrt(K/(K+1)), sqrt(1/(K+1))) with K = inf mapped to (1, 0).
        inline std::pair<double, double> rician_weights(double k_factor)
        {
            if (std::isinf(k_factor))
                return {1.0, 0.0};
            return {std::sqrt(k_factor / (k_factor + 1.0)), std::sqrt(1.0 / (k_factor + 1.0))};
        }
    }
}

#endif
