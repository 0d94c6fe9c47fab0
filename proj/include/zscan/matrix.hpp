// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace zscan {

// Dense row-major matrix of doubles. Deliberately minimal: the numeric
// kernels in this project operate on raw rows and accept spans.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
        Matrix m;
        if (rows.empty()) return m;
        m.rows_ = rows.size();
        m.cols_ = rows.front().size();
        m.data_.reserve(m.rows_ * m.cols_);
        for (const auto& r : rows) {
            assert(r.size() == m.cols_);
            m.data_.insert(m.data_.end(), r.begin(), r.end());
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    std::span<double> row(std::size_t r) {
        assert(r < rows_);
        return {data_.data() + r * cols_, cols_};
    }
    std::span<const double> row(std::size_t r) const {
        assert(r < rows_);
        return {data_.data() + r * cols_, cols_};
    }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    std::vector<double> column(std::size_t c) const {
        assert(c < cols_);
        std::vector<double> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = data_[r * cols_ + c];
        return out;
    }

    // Rows of *this picked out by index, in the order given.
    Matrix select_rows(std::span<const std::size_t> idx) const {
        Matrix m(idx.size(), cols_);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            assert(idx[i] < rows_);
            auto src = row(idx[i]);
            auto dst = m.row(i);
            for (std::size_t c = 0; c < cols_; ++c) dst[c] = src[c];
        }
        return m;
    }

    // Columns of *this picked out by index, in the order given.
    Matrix select_cols(std::span<const std::size_t> idx) const {
        Matrix m(rows_, idx.size());
        for (std::size_t r = 0; r < rows_; ++r) {
            auto src = row(r);
            auto dst = m.row(r);
            for (std::size_t i = 0; i < idx.size(); ++i) {
                assert(idx[i] < cols_);
                dst[i] = src[idx[i]];
            }
        }
        return m;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace zscan
