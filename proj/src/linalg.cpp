// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#include "zscan/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "zscan/error.hpp"

namespace zscan {

SymmetricEigen eigh(const Matrix& input) {
    const std::size_t n = input.rows();
    if (n == 0 || input.cols() != n)
        raise(Errc::InvalidArgument, "NotSquare", "eigh requires a square matrix");

    Matrix a = input;
    Matrix v(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    if (n > 1) {
        // Cyclic-by-row Jacobi. Rotation order is fixed, so results are
        // deterministic. 64 sweeps is far beyond what convergence needs.
        for (int sweep = 0; sweep < 64; ++sweep) {
            double off = 0.0;
            for (std::size_t p = 0; p + 1 < n; ++p)
                for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
            if (!(off > 0.0)) break;

            double diag = 0.0;
            for (std::size_t i = 0; i < n; ++i) diag += a(i, i) * a(i, i);
            if (std::sqrt(off) <= 1e-30 * std::max(1.0, std::sqrt(diag))) break;

            for (std::size_t p = 0; p + 1 < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    const double apq = a(p, q);
                    if (apq == 0.0) continue;
                    const double app = a(p, p);
                    const double aqq = a(q, q);
                    // Skip rotations that cannot move the result at double
                    // precision; prevents endless denormal churn.
                    if (std::abs(apq) <= 1e-300 ||
                        std::abs(apq) < 1e-20 * (std::abs(app) + std::abs(aqq)))
                        continue;

                    const double theta = (aqq - app) / (2.0 * apq);
                    const double t = (theta >= 0.0)
                        ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                        : -1.0 / (-theta + std::sqrt(1.0 + theta * theta));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;

                    for (std::size_t k = 0; k < n; ++k) {
                        const double akp = a(k, p);
                        const double akq = a(k, q);
                        a(k, p) = c * akp - s * akq;
                        a(k, q) = s * akp + c * akq;
                    }
                    for (std::size_t k = 0; k < n; ++k) {
                        const double apk = a(p, k);
                        const double aqk = a(q, k);
                        a(p, k) = c * apk - s * aqk;
                        a(q, k) = s * apk + c * aqk;
                    }
                    for (std::size_t k = 0; k < n; ++k) {
                        const double vkp = v(k, p);
                        const double vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i) > a(j, j);
    });

    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = a(order[i], order[i]);
        for (std::size_t k = 0; k < n; ++k) out.vectors(i, k) = v(k, order[i]);
    }
    return out;
}

Matrix cholesky(const Matrix& a) {
    const std::size_t n = a.rows();
    if (n == 0 || a.cols() != n)
        raise(Errc::InvalidArgument, "NotSquare", "cholesky requires a square matrix");

    Matrix l(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a(i, j);
            for (std::size_t k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
            if (i == j) {
                if (!(sum > 0.0) || !std::isfinite(sum))
                    raise(Errc::Numeric, "SingularCovariance",
                          "matrix is not positive definite (pivot " + std::to_string(i) + ")");
                l(i, i) = std::sqrt(sum);
            } else {
                l(i, j) = sum / l(j, j);
            }
        }
    }
    return l;
}

std::vector<double> forward_solve(const Matrix& l, std::span<const double> b) {
    const std::size_t n = l.rows();
    assert(b.size() == n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = b[i];
        for (std::size_t k = 0; k < i; ++k) sum -= l(i, k) * y[k];
        y[i] = sum / l(i, i);
    }
    return y;
}

double cholesky_logdet(const Matrix& l) {
    double acc = 0.0;
    for (std::size_t i = 0; i < l.rows(); ++i) acc += std::log(l(i, i));
    return 2.0 * acc;
}

} // namespace zscan
