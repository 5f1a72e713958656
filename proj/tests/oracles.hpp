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

// Independent reference computations for the test suites. Nothing here calls into the
// library's numerical code; everything is written out with plain loops over the formulas.

#ifndef MMWPC_TESTS_ORACLES_HPP
#define MMWPC_TESTS_ORACLES_HPP

#include <mmwpc/core.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle
{
    using mmwpc::CMatrix;
    using mmwpc::cplx;
    using mmwpc::CVector;
    constexpr double pi = 3.14159265358979323846;

    inline CVector steering(double angle, int n, double d = 0.5)
    {
        CVector v(n);
        for (int m = 0; m < n; ++m)
        {
            const double ph = -2.0 * pi * m * d * std::cos(angle);
            v[m] = cplx(std::cos(ph), std::sin(ph));
        }
        return v;
    }

    // sqrt(loss) a_bs(theta) a_user(phi)^H, entry by entry
    inline CMatrix los(double theta, double phi, double loss, int M, int P, double d = 0.5)
    {
        const CVector a = steering(theta, M, d), b = steering(phi, P, d);
        CMatrix h(M, P);
        for (int m = 0; m < M; ++m)
            for (int p = 0; p < P; ++p)
                h(m, p) = std::sqrt(loss) * a[m] * std::conj(b[p]);
        return h;
    }

    // |sum_m exp(j 2 pi m d x)|^2 / n
    inline double array_gain_sum(double x, int n, double d = 0.5)
    {
        cplx s = 0.0;
        for (int m = 0; m < n; ++m)
            s += std::polar(1.0, 2.0 * pi * m * d * x);
        return std::norm(s) / n;
    }

    // composite Simpson on [a, b] with `intervals` (rounded up to even) sub-intervals
    inline double simpson(const std::function<double(double)> &f, double a, double b, long intervals)
    {
        if (intervals % 2)
            ++intervals;
        const double h = (b - a) / static_cast<double>(intervals);
        double s = f(a) + f(b);
        for (long i = 1; i < intervals; ++i)
            s += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
        return s * h / 3.0;
    }

    // two-sided one-sample Kolmogorov-Smirnov statistic D_n
    inline double ks_statistic(std::vector<double> x, const std::function<double(double)> &cdf)
    {
        std::sort(x.begin(), x.end());
        const double n = static_cast<double>(x.size());
        double d = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            const double f = cdf(x[i]);
            d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
        }
        return d;
    }

    // asymptotic KS critical value at significance 0.001
    inline double ks_critical_001(std::size_t n) { return 1.949 / std::sqrt(static_cast<double>(n)); }

    inline double mean(const std::vector<double> &v)
    {
        long double s = 0.0;
        for (double x : v)
            s += x;
        return static_cast<double>(s / static_cast<long double>(v.size()));
    }

    inline double stddev(const std::vector<double> &v)
    {
        const double mu = mean(v);
        long double s = 0.0;
        for (double x : v)
            s += (x - mu) * (x - mu);
        return std::sqrt(static_cast<double>(s / static_cast<long double>(v.size() - 1)));
    }

    inline int numerical_rank(const CMatrix &a, double tol = 1e-9)
    {
        const auto s = Eigen::JacobiSVD<CMatrix>(a).singularValues();
        int r = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            r += s[i] > tol * s[0];
        return r;
    }

    inline double rel_err(const CMatrix &a, const CMatrix &b)
    {
        const double den = std::max(b.norm(), 1e-300);
        return (a - b).norm() / den;
    }

    // Random inputs for property-style checks.
    class Gen
    {
    public:
        explicit Gen(unsigned seed) : eng_(seed) {}
        double angle() { return std::uniform_real_distribution<double>(0.0, pi)(eng_); }
        double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
        int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
        cplx gauss()
        {
            std::normal_distribution<double> n(0.0, std::sqrt(0.5));
            const double re = n(eng_);
            return {re, n(eng_)};
        }
        CMatrix matrix(int r, int c)
        {
            CMatrix m(r, c);
            for (int j = 0; j < c; ++j)
                for (int i = 0; i < r; ++i)
                    m(i, j) = gauss();
            return m;
        }
        CVector vector(int n) { return matrix(n, 1).col(0); }

    private:
        std::mt19937 eng_;
    };
}

#endif
