#pragma once

#include <algorithm>
#include <vector>

#include "matrix.hpp"

namespace teplab {

// Truncated power series in u.  Coefficients c_0..c_N; the order N is the
// highest retained power.  Mixed-order arithmetic truncates to the minimum
// of the operand orders, never pads.
template <class Coeff>
class Series {
public:
    Series() = default;
    explicit Series(std::vector<Coeff> coeffs) : c_(std::move(coeffs)) {}
    Series(size_t order, const Coeff& zero) : c_(order + 1, zero) {}

    static Series constant(const Coeff& c, size_t order, const Coeff& zero) {
        Series s(order, zero);
        s.c_[0] = c;
        return s;
    }

    size_t order() const { return c_.empty() ? 0 : c_.size() - 1; }
    size_t size() const { return c_.size(); }
    const Coeff& operator[](size_t k) const { return c_[k]; }
    Coeff& operator[](size_t k) { return c_[k]; }
    const std::vector<Coeff>& coeffs() const { return c_; }

    Series truncated(size_t order) const {
        Series s = *this;
        if (s.c_.size() > order + 1) s.c_.resize(order + 1);
        return s;
    }

    bool is_zero() const {
        for (const auto& c : c_)
            if (!coeff_is_zero(c)) return false;
        return true;
    }

    friend Series operator+(const Series& a, const Series& b) {
        size_t n = std::min(a.c_.size(), b.c_.size());
        Series s;
        s.c_.reserve(n);
        for (size_t k = 0; k < n; k++) s.c_.push_back(a.c_[k] + b.c_[k]);
        return s;
    }
    friend Series operator-(const Series& a, const Series& b) {
        size_t n = std::min(a.c_.size(), b.c_.size());
        Series s;
        s.c_.reserve(n);
        for (size_t k = 0; k < n; k++) s.c_.push_back(a.c_[k] - b.c_[k]);
        return s;
    }
    friend Series operator*(const Series& a, const Series& b) {
        size_t n = std::min(a.c_.size(), b.c_.size());
        Series s;
        if (n == 0) return s;
        for (size_t k = 0; k < n; k++) {
            Coeff acc = a.c_[0] * b.c_[k];
            for (size_t j = 1; j <= k; j++) acc += a.c_[j] * b.c_[k - j];
            s.c_.push_back(std::move(acc));
        }
        return s;
    }

    friend bool operator==(const Series& a, const Series& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

    // Termwise d/du; output order drops by one.
    Series derivative() const {
        Series s;
        for (size_t k = 1; k < c_.size(); k++)
            s.c_.push_back(Scalar(static_cast<long>(k)) * c_[k]);
        return s;
    }

    // Multiplicative inverse to the same order; constant term must be a unit.
    Series inverse() const {
        if (c_.empty()) throw NotAUnit("inverse of empty series");
        Series s;
        s.c_.reserve(c_.size());
        s.c_.push_back(coeff_inverse(c_[0]));
        for (size_t k = 1; k < c_.size(); k++) {
            Coeff acc = c_[1] * s.c_[k - 1];
            for (size_t j = 2; j <= k; j++) acc += c_[j] * s.c_[k - j];
            s.c_.push_back(coeff_scale_neg(s.c_[0] * acc));
        }
        return s;
    }

private:
    static bool coeff_is_zero(const Scalar& c) { return c.is_zero(); }
    static bool coeff_is_zero(const Matrix& c) { return c.is_zero(); }
    static Scalar coeff_inverse(const Scalar& c) { return c.inverse(); }
    static Matrix coeff_inverse(const Matrix& c) { return c.inverse(); }
    static Coeff coeff_scale_neg(const Coeff& c) { return c * Scalar(-1); }

    std::vector<Coeff> c_;
};

using ScalarSeries = Series<Scalar>;
using MatrixSeries = Series<Matrix>;

inline ScalarSeries scalar_series(std::vector<Scalar> coeffs) {
    return ScalarSeries(std::move(coeffs));
}

inline MatrixSeries matrix_series_zero(size_t rank, size_t order) {
    return MatrixSeries(order, Matrix(rank, rank));
}

inline MatrixSeries matrix_series_identity(size_t rank, size_t order) {
    MatrixSeries s = matrix_series_zero(rank, order);
    s[0] = Matrix::identity(rank);
    return s;
}

// Inverse built on the recursion S0^{-1}, then c_k from the Cauchy identity.
// (The generic Series::inverse handles matrices too; keep one entry point.)
inline MatrixSeries inverse(const MatrixSeries& s) { return s.inverse(); }

}  // namespace teplab
