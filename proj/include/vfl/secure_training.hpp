// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vfl/approx_math.hpp"
#include "vfl/cost_ledger.hpp"
#include "vfl/dataset.hpp"
#include "vfl/fed_protocol.hpp"
#include "vfl/types.hpp"

namespace vfl {

struct Model {
    ModelKind kind = ModelKind::lr;
    Vector weights;  // length D for LR, length N (the beta coefficients) for KLR
    std::optional<KernelSpec> kernel;
    Sigmoid sigmoid = Sigmoid::exact();
};

struct TrainConfig {
    double learning_rate = 1.0;
    int iterations = 20;
    int sigmoid_degree = 3;   // degree of the fitted sigmoid in poly/secure mode
    double lambda_reg = 0.0;  // plaintext KLR regularizer; secure runs ignore it
    std::uint64_t seed = 0;
};

/// Sigmoid-fit convention shared by the secure trainers and the poly-mode
/// plaintext baselines: unweighted least squares on [-8, 8], 1024 samples.
SigmoidPoly default_sigmoid_poly(int degree);

struct TrainReport {
    Model final_model;
    std::vector<double> grad_norms;       // one decrypted-gradient norm per iteration
    std::vector<Vector> weight_history;   // weights after each update
    CostLedger ledger;
    int max_depth_reached = 0;
    double wall_time_s = 0.0;  // informational only
    ProtocolTranscript transcript;
};

/// Full ciphertext-domain LR training: feature exchange, then per iteration
/// Eve re-encrypts the current model, Bob accumulates the encrypted gradient
/// over all samples (dot product, power tree, per-degree scaling), and Eve
/// decrypts and applies the update. Depth consumption is 3 + ceil(log2 d).
TrainReport secure_train_lr(const VerticalSplit& split, const TrainConfig& cfg,
                            int budget);

/// Same loop over encrypted kernel columns instead of feature rows. The
/// kernel kind selects the exchange protocol; rbf_exact is not computable in
/// the ciphertext domain. No regularizer. Depth: kernel depth + 3 + ceil(log2 d).
TrainReport secure_train_klr(const VerticalSplit& split, const TrainConfig& cfg,
                             const KernelSpec& kernel, int budget);

struct PlainTrainResult {
    Model model;
    std::vector<Vector> weight_history;
};

/// Full-batch gradient descent from w = 0 in the plaintext domain.
PlainTrainResult plaintext_train_lr(const Dataset& data, const TrainConfig& cfg,
                                    const Sigmoid& sigma);

/// Full-batch gradient descent from beta = 0 over the plaintext Gram matrix.
PlainTrainResult plaintext_train_klr(const Dataset& data, const TrainConfig& cfg,
                                     const KernelSpec& kernel, const Sigmoid& sigma);

/// Fraction of correct sign predictions; ties predict +1. KLR scores through
/// the Gram columns (pass the training Gram for training-set accuracy, or
/// leave it out to have it computed from `data` and the model's kernel).
double evaluate(const Model& model, const Dataset& data,
                const KernelMatrix* K = nullptr);

}  // namespace vfl
