// SPDX-License-Identifier: Apache-2.0
#include "vfl/secure_training.hpp"

#include <chrono>
#include <string>

#include "vfl/errors.hpp"
#include "vfl/he_backend.hpp"

namespace vfl {

SigmoidPoly default_sigmoid_poly(int degree) {
    return fit_sigmoid_poly(degree, -8.0, 8.0, 1024);
}

namespace {

void check_config(const TrainConfig& cfg) {
    // 0 iterations is a valid bypass: the zero model comes straight back
    if (cfg.iterations < 0) throw InvalidInputError("train: iterations must be >= 0");
    if (!(cfg.learning_rate > 0.0)) {
        throw InvalidInputError("train: learning rate must be positive");
    }
    if (cfg.sigmoid_degree < 1 || cfg.sigmoid_degree > 7) {
        throw InvalidInputError("train: sigmoid degree must be in 1..7");
    }
    if (cfg.lambda_reg < 0.0) throw InvalidInputError("train: lambda_reg must be >= 0");
}

void check_labels(const Vector& y) {
    for (Index i = 0; i < y.size(); ++i) {
        if (y(i) != 1.0 && y(i) != -1.0) {
            throw InvalidInputError("train: labels must be in {-1,+1}; sample " +
                                    std::to_string(i) + " has " + std::to_string(y(i)));
        }
    }
}

// Sign factor (-y)^(k+1) for y in {-1,+1}: +1 when k is odd, -y when k is
// even. The per-sample gradient coefficient is a_k (-y)^{k+1} / N, which is
// exactly the coefficient of t^k (-y x) terms in the polynomial gradient.
double alpha_coeff(double a_k, int k, double y, Index n) {
    const double sign = (k % 2 == 1) ? 1.0 : -y;
    return a_k * sign / static_cast<double>(n);
}

// Shared iteration loop of the two secure trainers. `sample_cts[i]` is the
// encrypted vector the gradient term of sample i multiplies into (the
// aggregated feature row for LR, the kernel column for KLR).
TrainReport run_secure_loop(ProtocolTranscript transcript, const EveState& eve,
                            std::vector<TrackedCiphertext> sample_cts,
                            const Vector& labels, const TrainConfig& cfg,
                            Model final_model,
                            std::chrono::steady_clock::time_point started) {
    if (sample_cts.empty()) throw InvalidInputError("train: no samples");
    const Index n = static_cast<Index>(sample_cts.size());
    const Index dim = sample_cts[0].size();
    const int d = cfg.sigmoid_degree;
    const SigmoidPoly sig = default_sigmoid_poly(d);
    const PublicKey pk = eve.keys.public_key();

    TrainReport report;
    Vector w = Vector::Zero(dim);

    for (int iter = 0; iter < cfg.iterations; ++iter) {
        // Eve re-encrypts the current model; Bob only ever sees it encrypted.
        const TrackedCiphertext w_ct = encrypt(pk, w);
        transcript.send(PartyId::eve, PartyId::bob, "encrypted_model",
                        Payload::make_cts({w_ct}));

        TrackedCiphertext grad_ct;
        bool have_grad = false;
        for (Index i = 0; i < n; ++i) {
            const TrackedCiphertext& x_ct = sample_cts[static_cast<std::size_t>(i)];
            // t = w . x_i, replicated across slots: one level
            const TrackedCiphertext t =
                sum_slots(mul(w_ct, x_ct, transcript.ledger), transcript.ledger);
            const std::vector<TrackedCiphertext> powers =
                power_tree(t, d, transcript.ledger);

            const double y_i = labels(i);
            TrackedCiphertext term =
                mul_plain(x_ct, alpha_coeff(sig.coefficients(0), 0, y_i, n),
                          transcript.ledger);
            for (int k = 1; k <= d; ++k) {
                const TrackedCiphertext scaled =
                    mul_plain(powers[static_cast<std::size_t>(k - 1)],
                              alpha_coeff(sig.coefficients(k), k, y_i, n),
                              transcript.ledger);
                term = add(term, mul(scaled, x_ct, transcript.ledger), transcript.ledger);
            }
            grad_ct = have_grad ? add(grad_ct, term, transcript.ledger) : term;
            have_grad = true;
        }

        transcript.send(PartyId::bob, PartyId::eve, "encrypted_gradient",
                        Payload::make_cts({grad_ct}));
        transcript.send(PartyId::bob, PartyId::eve, "learning_rate",
                        Payload::make_params({{"learning_rate", cfg.learning_rate}}));

        const Vector grad = decrypt(eve.keys, grad_ct);
        transcript.send(PartyId::eve, PartyId::eve, "gradient_decrypt",
                        Payload::make_plain(grad));

        w -= cfg.learning_rate * grad;
        report.grad_norms.push_back(grad.norm());
        report.weight_history.push_back(w);
    }

    final_model.weights = w;
    final_model.sigmoid = Sigmoid::poly(sig);
    report.final_model = std::move(final_model);
    report.max_depth_reached = transcript.ledger.max_depth();
    report.ledger = transcript.ledger;
    report.transcript = std::move(transcript);
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    return report;
}

}  // namespace

TrainReport secure_train_lr(const VerticalSplit& split, const TrainConfig& cfg,
                            int budget) {
    check_config(cfg);
    check_labels(split.bob_y);
    const auto started = std::chrono::steady_clock::now();

    AliceState alice{split.alice_X};
    BobState bob{split.bob_X, split.bob_y};
    EveState eve{keygen(budget)};

    ProtocolTranscript transcript;
    transcript.protocol_name = "secure_lr_training";
    transcript.ledger = CostLedger(transcript.protocol_name);
    std::vector<TrackedCiphertext> rows = exchange_features(transcript, alice, bob, eve);

    Model model;
    model.kind = ModelKind::lr;
    return run_secure_loop(std::move(transcript), eve, std::move(rows), split.bob_y,
                           cfg, std::move(model), started);
}

TrainReport secure_train_klr(const VerticalSplit& split, const TrainConfig& cfg,
                             const KernelSpec& kernel, int budget) {
    check_config(cfg);
    check_labels(split.bob_y);
    const auto started = std::chrono::steady_clock::now();

    AliceState alice{split.alice_X};
    BobState bob{split.bob_X, split.bob_y};
    EveState eve{keygen(budget)};

    ProtocolTranscript transcript;
    transcript.protocol_name = "secure_klr_training";
    transcript.ledger = CostLedger(transcript.protocol_name);

    EncryptedKernel enc_kernel;
    switch (kernel.kind) {
        case KernelKind::linear:
            enc_kernel = exchange_linear_kernel(transcript, alice, bob, eve);
            break;
        case KernelKind::polynomial:
            enc_kernel =
                exchange_poly_kernel(transcript, alice, bob, eve, kernel.c, kernel.d_poly);
            break;
        case KernelKind::rbf_taylor2:
            enc_kernel = exchange_rbf_kernel(transcript, alice, bob, eve, kernel.gamma);
            break;
        case KernelKind::rbf_exact:
            throw ConfigError(
                "secure_train_klr: rbf_exact cannot be evaluated in the ciphertext "
                "domain; use rbf_taylor2");
    }

    std::vector<TrackedCiphertext> cols = pack_columns(enc_kernel, transcript.ledger);

    Model model;
    model.kind = ModelKind::klr;
    model.kernel = kernel;
    return run_secure_loop(std::move(transcript), eve, std::move(cols), split.bob_y,
                           cfg, std::move(model), started);
}

PlainTrainResult plaintext_train_lr(const Dataset& data, const TrainConfig& cfg,
                                    const Sigmoid& sigma) {
    check_config(cfg);
    PlainTrainResult result;
    Vector w = Vector::Zero(data.dim());
    for (int iter = 0; iter < cfg.iterations; ++iter) {
        w -= cfg.learning_rate * lr_gradient(w, data.X, data.y, sigma);
        result.weight_history.push_back(w);
    }
    result.model.kind = ModelKind::lr;
    result.model.weights = w;
    result.model.sigmoid = sigma;
    return result;
}

PlainTrainResult plaintext_train_klr(const Dataset& data, const TrainConfig& cfg,
                                     const KernelSpec& kernel, const Sigmoid& sigma) {
    check_config(cfg);
    const KernelMatrix K = gram_matrix(kernel, data.X);
    PlainTrainResult result;
    Vector beta = Vector::Zero(data.n());
    for (int iter = 0; iter < cfg.iterations; ++iter) {
        beta -= cfg.learning_rate * klr_gradient(beta, K, data.y, sigma, cfg.lambda_reg);
        result.weight_history.push_back(beta);
    }
    result.model.kind = ModelKind::klr;
    result.model.weights = beta;
    result.model.kernel = kernel;
    result.model.sigmoid = sigma;
    return result;
}

double evaluate(const Model& model, const Dataset& data, const KernelMatrix* K) {
    Vector scores;
    if (model.kind == ModelKind::lr) {
        if (data.dim() != model.weights.size()) {
            throw InvalidInputError("evaluate: feature dimension does not match the model");
        }
        scores = data.X * model.weights;
    } else {
        KernelMatrix own;
        if (K == nullptr) {
            if (!model.kernel) {
                throw InvalidInputError("evaluate: KLR model without a kernel spec");
            }
            own = gram_matrix(*model.kernel, data.X);
            K = &own;
        }
        if (K->entries.rows() != model.weights.size() ||
            K->entries.cols() != data.n()) {
            throw InvalidInputError("evaluate: Gram matrix shape does not match");
        }
        scores = K->entries.transpose() * model.weights;
    }
    Index correct = 0;
    for (Index i = 0; i < data.n(); ++i) {
        const double pred = scores(i) >= 0.0 ? 1.0 : -1.0;  // ties predict +1
        if (pred == data.y(i)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(data.n());
}

}  // namespace vfl
