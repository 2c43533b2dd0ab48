#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

#include "robmax/matrix.hpp"
#include "robmax/rng.hpp"

namespace robmax {

struct Autoregressive {
    double r = 0.5;
};
struct AlgebraicDecay {};
struct IdentityCorrelation {};
struct ExplicitCorrelation {
    Matrix matrix;
};

struct CorrelationSpec {
    std::variant<Autoregressive, AlgebraicDecay, IdentityCorrelation, ExplicitCorrelation> kind;
    std::size_t p = 1;
};

[[nodiscard]] inline Matrix gen_correlation(const CorrelationSpec& spec) {
    if (spec.p < 1) throw std::invalid_argument("gen_correlation: p must be >= 1");
    const std::size_t p = spec.p;
    Matrix r(p, p);
    if (const auto* ar = std::get_if<Autoregressive>(&spec.kind)) {
        if (!(ar->r > 0.0 && ar->r < 1.0)) throw std::invalid_argument("autoregressive r must lie in (0, 1)");
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j)
                r(i, j) = std::pow(ar->r, static_cast<double>(i > j ? i - j : j - i));
    } else if (std::holds_alternative<AlgebraicDecay>(spec.kind)) {
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) {
                const double d = static_cast<double>(i) - static_cast<double>(j);
                r(i, j) = i == j ? 1.0 : 1.0 / (4.0 * d * d);
            }
    } else if (std::holds_alternative<IdentityCorrelation>(spec.kind)) {
        r = Matrix::identity(p);
    } else {
        const auto& m = std::get<ExplicitCorrelation>(spec.kind).matrix;
        if (m.rows() != p || m.cols() != p) throw std::invalid_argument("explicit correlation has wrong shape");
        for (std::size_t i = 0; i < p; ++i) {
            if (std::abs(m(i, i) - 1.0) > 1e-12) throw std::invalid_argument("explicit correlation needs unit diagonal");
            for (std::size_t j = 0; j < i; ++j)
                if (std::abs(m(i, j) - m(j, i)) > 1e-12) throw std::invalid_argument("explicit correlation not symmetric");
        }
        r = m;
    }
    return r;
}

class NonSymmetric : public std::invalid_argument {
public:
    NonSymmetric() : std::invalid_argument("matrix is not symmetric") {}
};

class EigenNonConvergence : public std::runtime_error {
public:
    EigenNonConvergence() : std::runtime_error("Jacobi eigen-iteration did not converge") {}
};

struct SymmetricEigen {
    std::vector<double> values;
    Matrix vectors;  ///< columns are eigenvectors
};

/// Cyclic Jacobi eigendecomposition. Stops once the off-diagonal Frobenius
/// norm falls below 1e-12 relative to the full Frobenius norm.
[[nodiscard]] inline SymmetricEigen jacobi_eigen(Matrix a, int max_sweeps = 100) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw NonSymmetric();
    const double scale = std::max(frobenius_norm(a), 1e-300);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale) throw NonSymmetric();

    Matrix v = Matrix::identity(n);
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    int sweep = 0;
    while (off_norm() > 1e-12 * scale) {
        if (++sweep > max_sweeps) throw EigenNonConvergence();
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
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
    SymmetricEigen out{std::vector<double>(n), std::move(v)};
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
    return out;
}

/// Symmetric PSD square root. Eigenvalues in [-1e-10, 0) are clamped to 0.
[[nodiscard]] inline Matrix matrix_sqrt(const Matrix& sigma) {
    const auto eig = jacobi_eigen(sigma);
    const std::size_t n = sigma.rows();
    std::vector<double> roots(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (eig.values[k] < -1e-10) throw std::invalid_argument("matrix_sqrt: matrix is not positive semidefinite");
        roots[k] = std::sqrt(std::max(0.0, eig.values[k]));
    }
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += eig.vectors(i, k) * roots[k] * eig.vectors(j, k);
            s(i, j) = acc;
            s(j, i) = acc;
        }
    return s;
}

/// Sigma = D^{1/2} R D^{1/2} together with its cached square root.
class CovarianceModel {
public:
    /// Default standard deviations j^{-1/2}, j = 1..p.
    explicit CovarianceModel(CorrelationSpec corr) : CovarianceModel(default_std_devs(corr.p), std::move(corr)) {}

    CovarianceModel(std::vector<double> std_devs, CorrelationSpec corr)
        : std_devs_(std::move(std_devs)), corr_(std::move(corr)) {
        if (std_devs_.size() != corr_.p) throw std::invalid_argument("CovarianceModel: std_devs length != p");
        const Matrix r = gen_correlation(corr_);
        const std::size_t p = corr_.p;
        sigma_ = Matrix(p, p);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) sigma_(i, j) = std_devs_[i] * r(i, j) * std_devs_[j];
        sqrt_sigma_ = matrix_sqrt(sigma_);
    }

    [[nodiscard]] static std::vector<double> default_std_devs(std::size_t p) {
        std::vector<double> d(p);
        for (std::size_t j = 0; j < p; ++j) d[j] = 1.0 / std::sqrt(static_cast<double>(j + 1));
        return d;
    }

    [[nodiscard]] std::size_t p() const noexcept { return corr_.p; }
    [[nodiscard]] const std::vector<double>& std_devs() const noexcept { return std_devs_; }
    [[nodiscard]] const Matrix& sigma() const noexcept { return sigma_; }
    [[nodiscard]] const Matrix& sqrt_sigma() const noexcept { return sqrt_sigma_; }

private:
    std::vector<double> std_devs_;
    CorrelationSpec corr_;
    Matrix sigma_;
    Matrix sqrt_sigma_;
};

inline void sample_gaussian_vector(RngStream& stream, std::span<double> out) { stream.fill_normal(out); }

[[nodiscard]] inline std::vector<double> sample_gaussian_vector(RngStream& stream, std::size_t p) {
    if (p < 1) throw std::invalid_argument("sample_gaussian_vector: p must be >= 1");
    std::vector<double> v(p);
    stream.fill_normal(v);
    return v;
}

/// Pareto with density 6 x^-7 on [1, inf), via inverse CDF.
[[nodiscard]] inline double sample_pareto6(RngStream& stream) {
    return std::pow(1.0 - stream.uniform(), -1.0 / 6.0);
}

inline constexpr double kPareto6Mean = 6.0 / 5.0;
inline constexpr double kPareto6Variance = 6.0 / (25.0 * 4.0);

[[nodiscard]] inline double sample_pareto_std(RngStream& stream) {
    static const double inv_sd = 1.0 / std::sqrt(kPareto6Variance);
    return (sample_pareto6(stream) - kPareto6Mean) * inv_sd;
}

/// eta = sqrt((2p/3) F) with F ~ F(p, 6), so that E eta^2 = p.
[[nodiscard]] inline double sample_eta_t6(RngStream& stream, std::size_t p) {
    if (p < 1) throw std::invalid_argument("sample_eta_t6: p must be >= 1");
    double num = 0.0;
    for (std::size_t k = 0; k < p; ++k) {
        const double z = stream.normal();
        num += z * z;
    }
    double den = 0.0;
    while (den == 0.0) {
        for (int k = 0; k < 6; ++k) {
            const double z = stream.normal();
            den += z * z;
        }
    }
    const double pd = static_cast<double>(p);
    const double f = (num / pd) / (den / 6.0);
    return std::sqrt(2.0 * pd / 3.0 * f);
}

/// Uniform direction on the unit sphere: normalized standard Gaussian vector.
inline void sample_unit_direction(RngStream& stream, std::span<double> out) {
    double norm2 = 0.0;
    while (norm2 == 0.0) {
        stream.fill_normal(out);
        norm2 = 0.0;
        for (double v : out) norm2 += v * v;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : out) v *= inv;
}

/// Rows of the multivariate t_6 model eta * Sigma^{1/2} * U (mean zero).
/// Row i draws from stream.child(i).
[[nodiscard]] inline Matrix sample_elliptical_t6(const RngStream& stream, std::size_t n, const CovarianceModel& cov) {
    const std::size_t p = cov.p();
    Matrix out(n, p);
    std::vector<double> z(p);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream s = stream.child(i);
        sample_unit_direction(s, z);
        const double eta = sample_eta_t6(s, p);
        for (double& v : z) v *= eta;
        matvec(cov.sqrt_sigma(), z, out.row(i));
    }
    return out;
}

/// Rows Sigma^{1/2} * zeta with i.i.d. standardized Pareto(6) entries.
[[nodiscard]] inline Matrix sample_separable_pareto6(const RngStream& stream, std::size_t n,
                                                     const CovarianceModel& cov) {
    const std::size_t p = cov.p();
    Matrix out(n, p);
    std::vector<double> zeta(p);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream s = stream.child(i);
        for (double& v : zeta) v = sample_pareto_std(s);
        matvec(cov.sqrt_sigma(), zeta, out.row(i));
    }
    return out;
}

}  // namespace robmax
