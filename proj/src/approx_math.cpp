// SPDX-License-Identifier: Apache-2.0
#include "vfl/approx_math.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "vfl/errors.hpp"

namespace vfl {

double sigmoid_exact(double s) {
    if (s >= 0.0) {
        return 1.0 / (1.0 + std::exp(-s));
    }
    // avoids overflow of e^{-s} for very negative s
    const double e = std::exp(s);
    return e / (1.0 + e);
}

SigmoidPoly fit_sigmoid_poly(int degree, double lo, double hi, int num_points) {
    if (degree < 1) {
        throw InvalidInputError("fit_sigmoid_poly: degree must be >= 1, got " +
                                std::to_string(degree));
    }
    if (!(lo < hi)) {
        throw InvalidInputError("fit_sigmoid_poly: interval must be non-degenerate");
    }
    if (num_points < degree + 1) {
        throw FitFailureError("fit_sigmoid_poly: " + std::to_string(num_points) +
                              " points cannot determine " + std::to_string(degree + 1) +
                              " coefficients");
    }

    Matrix A(num_points, degree + 1);
    Vector b(num_points);
    const double step = (hi - lo) / (num_points - 1);
    for (int i = 0; i < num_points; ++i) {
        const double s = lo + i * step;
        double pw = 1.0;
        for (int k = 0; k <= degree; ++k) {
            A(i, k) = pw;
            pw *= s;
        }
        b(i) = sigmoid_exact(s);
    }

    Eigen::ColPivHouseholderQR<Matrix> qr(A);
    if (qr.rank() < degree + 1) {
        throw FitFailureError("fit_sigmoid_poly: rank-deficient Vandermonde system");
    }

    SigmoidPoly p;
    p.degree = degree;
    p.coefficients = qr.solve(b);
    p.lo = lo;
    p.hi = hi;
    p.fit_points = num_points;
    p.fit_rms = std::sqrt((A * p.coefficients - b).squaredNorm() / num_points);
    return p;
}

double eval_poly(const SigmoidPoly& p, double s) {
    double acc = 0.0;
    for (Index k = p.coefficients.size() - 1; k >= 0; --k) {
        acc = acc * s + p.coefficients(k);
    }
    return acc;
}

double max_abs_deviation(const SigmoidPoly& p, double lo, double hi, int grid_points) {
    double worst = 0.0;
    const double step = (hi - lo) / (grid_points - 1);
    for (int i = 0; i < grid_points; ++i) {
        const double s = lo + i * step;
        worst = std::max(worst, std::abs(eval_poly(p, s) - sigmoid_exact(s)));
    }
    return worst;
}

Sigmoid Sigmoid::poly(SigmoidPoly p) {
    Sigmoid s;
    s.poly_ = std::move(p);
    return s;
}

double Sigmoid::operator()(double s) const {
    return poly_ ? eval_poly(*poly_, s) : sigmoid_exact(s);
}

const char* to_string(KernelKind k) {
    switch (k) {
        case KernelKind::linear: return "linear";
        case KernelKind::polynomial: return "polynomial";
        case KernelKind::rbf_exact: return "rbf_exact";
        case KernelKind::rbf_taylor2: return "rbf_taylor2";
    }
    return "?";
}

KernelSpec KernelSpec::linear() { return KernelSpec{KernelKind::linear, 0.0, 1, 1.0}; }

KernelSpec KernelSpec::polynomial(double c, int d_poly) {
    if (d_poly < 1) {
        throw InvalidInputError("KernelSpec: d_poly must be >= 1");
    }
    return KernelSpec{KernelKind::polynomial, c, d_poly, 1.0};
}

KernelSpec KernelSpec::rbf(double gamma) {
    if (!(gamma > 0.0)) {
        throw InvalidInputError("KernelSpec: gamma must be positive");
    }
    return KernelSpec{KernelKind::rbf_exact, 0.0, 1, gamma};
}

KernelSpec KernelSpec::rbf_taylor2(double gamma) {
    if (!(gamma > 0.0)) {
        throw InvalidInputError("KernelSpec: gamma must be positive");
    }
    return KernelSpec{KernelKind::rbf_taylor2, 0.0, 1, gamma};
}

double kernel_entry(const KernelSpec& spec, const Vector& x, const Vector& y) {
    if (x.size() != y.size()) {
        throw InvalidInputError("kernel_entry: dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
    }
    switch (spec.kind) {
        case KernelKind::linear:
            return x.dot(y);
        case KernelKind::polynomial: {
            const double base = x.dot(y) + spec.c;
            double acc = base;
            for (int i = 1; i < spec.d_poly; ++i) acc *= base;
            return acc;
        }
        case KernelKind::rbf_exact:
            return std::exp(-spec.gamma * (x - y).squaredNorm());
        case KernelKind::rbf_taylor2: {
            const double u = -spec.gamma * (x - y).squaredNorm();
            return 1.0 + u + u * u / 2.0;
        }
    }
    throw InvalidInputError("kernel_entry: unknown kernel kind");
}

KernelMatrix gram_matrix(const KernelSpec& spec, const Matrix& data) {
    const Index n = data.rows();
    KernelMatrix K;
    K.n = n;
    K.spec = spec;
    K.provenance = KernelProvenance::plaintext;
    K.entries.resize(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            K.entries(i, j) = kernel_entry(spec, data.row(i), data.row(j));
        }
    }
    return K;
}

namespace {

void check_labels(const Vector& y) {
    for (Index i = 0; i < y.size(); ++i) {
        if (y(i) != 1.0 && y(i) != -1.0) {
            throw InvalidInputError("labels must be in {-1,+1}; sample " +
                                    std::to_string(i) + " has " + std::to_string(y(i)));
        }
    }
}

// log(1 + e^t) without overflow for large t
double log1p_exp(double t) {
    if (t > 0.0) return t + std::log1p(std::exp(-t));
    return std::log1p(std::exp(t));
}

}  // namespace

double lr_loss(const Vector& w, const Matrix& X, const Vector& y) {
    check_labels(y);
    const Index n = X.rows();
    const Vector margins = X * w;
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) {
        acc += log1p_exp(-y(i) * margins(i));
    }
    return acc / static_cast<double>(n);
}

Vector lr_gradient(const Vector& w, const Matrix& X, const Vector& y,
                   const Sigmoid& sigma) {
    if (X.cols() != w.size() || X.rows() != y.size()) {
        throw InvalidInputError("lr_gradient: inconsistent dimensions");
    }
    check_labels(y);
    const Index n = X.rows();
    const Vector margins = X * w;
    Vector factors(n);
    for (Index i = 0; i < n; ++i) {
        factors(i) = sigma(-y(i) * margins(i)) * (-y(i));
    }
    return (X.transpose() * factors) / static_cast<double>(n);
}

double klr_loss(const Vector& beta, const KernelMatrix& K, const Vector& y,
                double lambda_reg) {
    check_labels(y);
    const Index n = K.n;
    const Vector t = K.entries.transpose() * beta;
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) {
        acc += log1p_exp(-y(i) * t(i));
    }
    return lambda_reg / static_cast<double>(n) * beta.dot(K.entries * beta) +
           acc / static_cast<double>(n);
}

Vector klr_gradient(const Vector& beta, const KernelMatrix& K, const Vector& y,
                    const Sigmoid& sigma, double lambda_reg) {
    if (beta.size() != K.n || y.size() != K.n) {
        throw InvalidInputError("klr_gradient: inconsistent dimensions");
    }
    check_labels(y);
    const Index n = K.n;
    const Vector t = K.entries.transpose() * beta;  // t_i = beta . K(:,i)
    Vector factors(n);
    for (Index i = 0; i < n; ++i) {
        factors(i) = sigma(-y(i) * t(i)) * (-y(i));
    }
    Vector grad = (K.entries * factors) / static_cast<double>(n);
    if (lambda_reg != 0.0) {
        grad += (2.0 * lambda_reg / static_cast<double>(n)) *
                (K.entries.transpose() * beta);
    }
    return grad;
}

}  // namespace vfl
