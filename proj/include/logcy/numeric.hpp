#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace logcy {

// Exact arithmetic throughout: reduction sequences and isometry search must
// never overflow, so coefficients are arbitrary-precision integers and areas
// are exact rationals.  Expression templates are off so these behave as
// ordinary value types.
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                          boost::multiprecision::et_off>;

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct LatticeMismatchError : Error {
    using Error::Error;
};

struct NotEmbeddableClassError : Error {
    using Error::Error;
};

struct InvalidArgumentError : Error {
    using Error::Error;
};

inline Int isqrt_floor(const Int& v) {
    if (v < 0) throw InvalidArgumentError("isqrt of negative value");
    Int r = sqrt(v);
    return r;
}

inline std::int64_t isqrt_floor(std::int64_t v) {
    if (v < 0) throw InvalidArgumentError("isqrt of negative value");
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

// Dense row-major integer matrix, only used at tiny ranks (<= 10).
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<Int> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    Int& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const Int& operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

inline Mat operator*(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw InvalidArgumentError("matrix shape mismatch");
    Mat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const Int& v = x(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j) z(i, j) += v * y(k, j);
        }
    return z;
}

inline std::vector<Int> operator*(const Mat& m, const std::vector<Int>& v) {
    if (m.cols != static_cast<int>(v.size())) throw InvalidArgumentError("matrix/vector shape mismatch");
    std::vector<Int> out(static_cast<size_t>(m.rows), 0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (m(i, j) != 0) out[static_cast<size_t>(i)] += m(i, j) * v[static_cast<size_t>(j)];
    return out;
}

inline Mat transpose(const Mat& m) {
    Mat t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

// Fraction-free Gaussian elimination (Bareiss).
inline Int det(Mat m) {
    if (m.rows != m.cols) throw InvalidArgumentError("det of non-square matrix");
    const int n = m.rows;
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (m(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
            }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

// Inverse of a unimodular matrix; exact, throws if the inverse is not integral.
inline Mat inverse_unimodular(const Mat& m) {
    if (m.rows != m.cols) throw InvalidArgumentError("inverse of non-square matrix");
    const int n = m.rows;
    std::vector<std::vector<Rat>> w(n, std::vector<Rat>(2 * n, Rat(0)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) w[i][j] = Rat(m(i, j));
        w[i][n + i] = 1;
    }
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int r = c; r < n; ++r)
            if (w[r][c] != 0) { p = r; break; }
        if (p < 0) throw InvalidArgumentError("singular matrix");
        std::swap(w[c], w[p]);
        Rat piv = w[c][c];
        for (int j = 0; j < 2 * n; ++j) w[c][j] /= piv;
        for (int r = 0; r < n; ++r) {
            if (r == c || w[r][c] == 0) continue;
            Rat f = w[r][c];
            for (int j = 0; j < 2 * n; ++j) w[r][j] -= f * w[c][j];
        }
    }
    Mat inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Rat& q = w[i][n + j];
            if (denominator(q) != 1) throw InvalidArgumentError("matrix inverse is not integral");
            inv(i, j) = numerator(q);
        }
    return inv;
}

}  // namespace logcy
