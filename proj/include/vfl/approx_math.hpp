// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "vfl/types.hpp"

namespace vfl {

/// Logistic function 1 / (1 + e^{-s}). Saturates cleanly at the extremes.
double sigmoid_exact(double s);

/// Least-squares polynomial stand-in for the logistic function, used whenever
/// a model has to be evaluated with additions and multiplications only.
struct SigmoidPoly {
    int degree = 0;
    Vector coefficients;  // a_0 .. a_degree
    double lo = 0.0;      // fit interval
    double hi = 0.0;
    int fit_points = 0;
    double fit_rms = 0.0;  // residual RMS over the fit grid
};

/// Fits theta(s) over `num_points` equally spaced samples on [lo, hi] by
/// unweighted least squares (column-pivoted QR on the Vandermonde system).
/// Throws FitFailureError when the system is rank deficient, e.g. when
/// num_points < degree + 1.
SigmoidPoly fit_sigmoid_poly(int degree, double lo, double hi, int num_points);

/// Horner evaluation of p at s.
double eval_poly(const SigmoidPoly& p, double s);

/// max |p(s) - theta(s)| over a dense grid on [lo, hi].
double max_abs_deviation(const SigmoidPoly& p, double lo, double hi,
                         int grid_points = 20001);

/// Either the exact logistic function or a fitted polynomial.
class Sigmoid {
  public:
    static Sigmoid exact() { return Sigmoid{}; }
    static Sigmoid poly(SigmoidPoly p);

    bool is_exact() const { return !poly_.has_value(); }
    const SigmoidPoly* poly() const { return poly_ ? &*poly_ : nullptr; }
    double operator()(double s) const;

  private:
    std::optional<SigmoidPoly> poly_;
};

enum class KernelKind { linear, polynomial, rbf_exact, rbf_taylor2 };

const char* to_string(KernelKind k);

/// Kernel function with its parameters. Construct through the factories so
/// only the parameters the kind actually uses are set.
struct KernelSpec {
    KernelKind kind = KernelKind::linear;
    double c = 0.0;    // polynomial offset
    int d_poly = 1;    // polynomial degree
    double gamma = 1;  // RBF width

    static KernelSpec linear();
    static KernelSpec polynomial(double c, int d_poly);
    static KernelSpec rbf(double gamma);
    static KernelSpec rbf_taylor2(double gamma);
};

/// Single kernel evaluation k(x, y).
///   linear       <x,y>
///   polynomial   (<x,y> + c)^d_poly
///   rbf_exact    exp(-gamma ||x-y||^2)
///   rbf_taylor2  1 + u + u^2/2 with u = -gamma ||x-y||^2
double kernel_entry(const KernelSpec& spec, const Vector& x, const Vector& y);

enum class KernelProvenance { plaintext, secure_exchange };

struct KernelMatrix {
    Index n = 0;
    Matrix entries;  // n x n
    KernelSpec spec;
    KernelProvenance provenance = KernelProvenance::plaintext;

    Vector column(Index i) const { return entries.col(i); }
};

/// Full Gram matrix of the rows of `data`, computed in the plaintext domain.
KernelMatrix gram_matrix(const KernelSpec& spec, const Matrix& data);

/// In-sample logistic loss (1/N) sum log(1 + e^{-y_n w.x_n}).
double lr_loss(const Vector& w, const Matrix& X, const Vector& y);

/// Gradient of lr_loss, with theta either exact or replaced by the
/// polynomial: (1/N) sum_n f(-y_n w.x_n) (-y_n x_n).
Vector lr_gradient(const Vector& w, const Matrix& X, const Vector& y,
                   const Sigmoid& sigma);

/// Kernelized objective (lambda/N) b'Kb + (1/N) sum log(1 + e^{-y_n b'K(:,n)}).
double klr_loss(const Vector& beta, const KernelMatrix& K, const Vector& y,
                double lambda_reg);

/// Gradient of klr_loss:
/// (2 lambda/N) K'b + (1/N) sum_n f(-y_n b'K(:,n)) (-y_n K(:,n)).
Vector klr_gradient(const Vector& beta, const KernelMatrix& K, const Vector& y,
                    const Sigmoid& sigma, double lambda_reg);

}  // namespace vfl
