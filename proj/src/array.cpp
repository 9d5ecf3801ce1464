#include "oilcast/array.hpp"

#include <cmath>

#include "oilcast/errors.hpp"

namespace oilcast {

namespace {

void require_equal_or_bias(const Array2& a, const Array2& b, const char* op) {
    if (a.same_shape(b)) return;
    const bool a_is_bias = a.rows == 1 && a.cols == b.cols;
    const bool b_is_bias = b.rows == 1 && b.cols == a.cols;
    if (a_is_bias || b_is_bias) return;
    throw ShapeError(std::string(op) + ": shapes " + a.shape_str() + " and " +
                     b.shape_str() + " do not match and neither is a 1x" +
                     std::to_string(a.cols == b.cols ? a.cols : -1) + " bias row");
}

template <typename F>
Array2 binary_op(const Array2& a, const Array2& b, const char* name, F f) {
    require_equal_or_bias(a, b, name);
    if (a.same_shape(b)) {
        Array2 out(a.rows, a.cols);
        for (std::size_t i = 0; i < a.size(); ++i) out.data[i] = f(a.data[i], b.data[i]);
        return out;
    }
    const bool b_is_bias = b.rows == 1;
    const Array2& big = b_is_bias ? a : b;
    const Array2& bias = b_is_bias ? b : a;
    Array2 out(big.rows, big.cols);
    for (int r = 0; r < big.rows; ++r)
        for (int c = 0; c < big.cols; ++c) {
            const double lhs = b_is_bias ? big.at(r, c) : bias.at(0, c);
            const double rhs = b_is_bias ? bias.at(0, c) : big.at(r, c);
            out.at(r, c) = f(lhs, rhs);
        }
    return out;
}

template <typename F>
Array2 unary_op(const Array2& a, F f) {
    Array2 out(a.rows, a.cols);
    for (std::size_t i = 0; i < a.size(); ++i) out.data[i] = f(a.data[i]);
    return out;
}

} // namespace

Array2 Array2::full(int r, int c, double v) {
    Array2 out(r, c);
    for (auto& x : out.data) x = v;
    return out;
}

Array2 Array2::identity(int n) {
    Array2 out(n, n);
    for (int i = 0; i < n; ++i) out.at(i, i) = 1.0;
    return out;
}

Array2 Array2::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return Array2();
    Array2 out(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int r = 0; r < out.rows; ++r) {
        if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != out.cols)
            throw ShapeError("from_rows: ragged row lengths");
        for (int c = 0; c < out.cols; ++c)
            out.at(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    return out;
}

std::string Array2::shape_str() const {
    return "(" + std::to_string(rows) + "x" + std::to_string(cols) + ")";
}

bool Array2::all_finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

bool operator==(const Array2& a, const Array2& b) {
    return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
}

Array2 matmul(const Array2& a, const Array2& b) {
    if (a.cols != b.rows)
        throw ShapeError("matmul: inner dimensions disagree, " + a.shape_str() +
                         " x " + b.shape_str());
    Array2 out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = a.data.data() + static_cast<std::size_t>(i) * a.cols;
        double* orow = out.data.data() + static_cast<std::size_t>(i) * out.cols;
        for (int k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = b.data.data() + static_cast<std::size_t>(k) * b.cols;
            for (int j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

Array2 matmul_nt(const Array2& a, const Array2& b) {
    if (a.cols != b.cols)
        throw ShapeError("matmul_nt: inner dimensions disagree, " + a.shape_str() +
                         " x " + b.shape_str() + "^T");
    Array2 out(a.rows, b.rows);
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = a.data.data() + static_cast<std::size_t>(i) * a.cols;
        for (int j = 0; j < b.rows; ++j) {
            const double* brow = b.data.data() + static_cast<std::size_t>(j) * b.cols;
            double acc = 0.0;
            for (int k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            out.at(i, j) = acc;
        }
    }
    return out;
}

Array2 matmul_tn(const Array2& a, const Array2& b) {
    if (a.rows != b.rows)
        throw ShapeError("matmul_tn: inner dimensions disagree, " + a.shape_str() +
                         "^T x " + b.shape_str());
    Array2 out(a.cols, b.cols);
    for (int k = 0; k < a.rows; ++k) {
        const double* arow = a.data.data() + static_cast<std::size_t>(k) * a.cols;
        const double* brow = b.data.data() + static_cast<std::size_t>(k) * b.cols;
        for (int i = 0; i < a.cols; ++i) {
            const double aki = arow[i];
            if (aki == 0.0) continue;
            double* orow = out.data.data() + static_cast<std::size_t>(i) * out.cols;
            for (int j = 0; j < b.cols; ++j) orow[j] += aki * brow[j];
        }
    }
    return out;
}

Array2 add(const Array2& a, const Array2& b) {
    return binary_op(a, b, "add", [](double x, double y) { return x + y; });
}

Array2 sub(const Array2& a, const Array2& b) {
    return binary_op(a, b, "sub", [](double x, double y) { return x - y; });
}

Array2 mul(const Array2& a, const Array2& b) {
    return binary_op(a, b, "mul", [](double x, double y) { return x * y; });
}

Array2 sigmoid(const Array2& a) {
    return unary_op(a, [](double x) {
        // Split form keeps the exponent argument non-positive.
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
    });
}

Array2 tanh(const Array2& a) {
    return unary_op(a, [](double x) { return std::tanh(x); });
}

Array2 relu(const Array2& a) {
    return unary_op(a, [](double x) { return x > 0.0 ? x : 0.0; });
}

Array2 scale(const Array2& a, double c) {
    return unary_op(a, [c](double x) { return x * c; });
}

Array2 transpose(const Array2& a) {
    Array2 out(a.cols, a.rows);
    for (int r = 0; r < a.rows; ++r)
        for (int c = 0; c < a.cols; ++c) out.at(c, r) = a.at(r, c);
    return out;
}

} // namespace oilcast
