#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "spdc/errors.hpp"

namespace spdc {

// Not-a-knot cubic spline on a uniform grid x0 + i*h. Evaluation clamps to
// the table range; callers that need values outside must handle them first.
class UniformSpline {
public:
    UniformSpline() = default;

    UniformSpline(double x0, double h, std::vector<double> y)
        : x0_(x0), h_(h), y_(std::move(y)) {
        const std::size_t n = y_.size();
        if (n < 4) throw Error("spline: need at least 4 nodes");
        m_.assign(n, 0.0);
        std::vector<double> r(n, 0.0);
        const double inv_h2 = 1.0 / (h_ * h_);
        for (std::size_t i = 1; i + 1 < n; ++i)
            r[i] = 6.0 * (y_[i - 1] - 2.0 * y_[i] + y_[i + 1]) * inv_h2;

        // Not-a-knot ties the end second derivatives linearly:
        // m0 - 2 m1 + m2 = 0, and mirrored at the far end; substituting into
        // the first/last interior rows pins m1 and m_{n-2} directly.
        m_[1] = r[1] / 6.0;
        m_[n - 2] = r[n - 2] / 6.0;

        if (n >= 5) {
            // Thomas solve for m2..m_{n-3}: rows m_{i-1} + 4 m_i + m_{i+1} = r_i
            // with m1 and m_{n-2} already known.
            const std::size_t k = n - 4; // unknown count
            std::vector<double> c(k, 0.0), d(k, 0.0);
            for (std::size_t j = 0; j < k; ++j) {
                double rhs = r[j + 2];
                if (j == 0) rhs -= m_[1];
                if (j == k - 1) rhs -= m_[n - 2];
                const double w = 1.0 / (4.0 - (j ? c[j - 1] : 0.0));
                c[j] = (j + 1 < k) ? w : 0.0;
                d[j] = (rhs - (j ? d[j - 1] : 0.0)) * w;
            }
            m_[n - 3] = d[k - 1];
            for (std::size_t j = k - 1; j-- > 0;) m_[j + 2] = d[j] - c[j] * m_[j + 3];
        }

        m_[0] = 2.0 * m_[1] - m_[2];
        m_[n - 1] = 2.0 * m_[n - 2] - m_[n - 3];
    }

    double operator()(double x) const {
        const std::size_t n = y_.size();
        double u = (x - x0_) / h_;
        if (u < 0.0) u = 0.0;
        std::size_t i = static_cast<std::size_t>(u);
        if (i > n - 2) i = n - 2;
        const double xa = x0_ + i * h_;
        const double A = (xa + h_ - x) / h_;
        const double B = 1.0 - A;
        const double h26 = h_ * h_ / 6.0;
        return A * y_[i] + B * y_[i + 1] +
               ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h26;
    }

    double x_min() const { return x0_; }
    double x_max() const { return x0_ + h_ * (y_.size() - 1); }

private:
    double x0_ = 0.0, h_ = 1.0;
    std::vector<double> y_, m_;
};

} // namespace spdc
