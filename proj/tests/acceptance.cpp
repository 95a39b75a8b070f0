// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Each criterion prints exactly one PASS/FAIL line; the
// binary exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "random_trees.hpp"
#include "vfl/approx_math.hpp"
#include "vfl/cost_ledger.hpp"
#include "vfl/dataset.hpp"
#include "vfl/errors.hpp"
#include "vfl/fed_protocol.hpp"
#include "vfl/he_backend.hpp"
#include "vfl/secure_training.hpp"

using namespace vfl;

namespace {

int g_failures = 0;

void criterion(int num, const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << num << ": " << name;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << std::endl;
    if (!ok) ++g_failures;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::string elapsed() const {
        const double s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream ss;
        ss.precision(2);
        ss << std::fixed << s << "s";
        return ss.str();
    }
};

VerticalSplit split_of(const Dataset& d) { return vertical_split(d, 1); }

// ---------------------------------------------------------------------------
// 1. per-entry exchange op counts
// ---------------------------------------------------------------------------
void criterion_1() {
    Timer timer;
    bool ok = true;
    std::ostringstream detail;

    const Matrix ax = Matrix::Constant(1, 1, 0.3);
    const Matrix bx = Matrix::Constant(1, 1, -0.7);
    const Vector by = Vector::Constant(1, 1.0);

    auto run_check = [&](const std::string& protocol, int d_poly) {
        AliceState alice{ax};
        BobState bob{bx, by};
        EveState eve{keygen(8)};
        ProtocolTranscript t;
        if (protocol == "secure_data_exchange") {
            exchange_features(t, alice, bob, eve);
        } else if (protocol == "secure_linear_kernel") {
            exchange_linear_kernel(t, alice, bob, eve);
        } else if (protocol == "secure_poly_kernel") {
            exchange_poly_kernel(t, alice, bob, eve, 1.0, d_poly);
        } else {
            exchange_rbf_kernel(t, alice, bob, eve, 1.0);
        }
        const Table1Check check = verify_table1(t.ledger, protocol, d_poly);
        if (!check.passed) {
            ok = false;
            detail << protocol << " d_poly=" << d_poly << " got (" << check.measured_adds
                   << "," << check.measured_mults << ") ";
        }
    };

    for (const int d_poly : {1, 2, 3, 5}) {
        run_check("secure_data_exchange", d_poly);
        run_check("secure_linear_kernel", d_poly);
        run_check("secure_poly_kernel", d_poly);
        run_check("secure_rbf_kernel", d_poly);
    }
    criterion(1, "per-entry exchange costs (0,0) (1,0) (2,d_poly-1) (4,1)", ok,
              ok ? timer.elapsed() : detail.str());
}

// ---------------------------------------------------------------------------
// 2. training depth grid
// ---------------------------------------------------------------------------
void criterion_2() {
    Timer timer;
    bool ok = true;
    std::ostringstream detail;

    const Dataset d = make_circles(100, 0.05, 0.5, 7);
    const VerticalSplit split = split_of(d);

    auto run_depth = [&](ModelKind model, const std::optional<KernelSpec>& kernel,
                         int degree, DepthCheck::Status want_status) {
        TrainConfig cfg;
        cfg.iterations = 2;
        cfg.sigmoid_degree = degree;
        cfg.learning_rate = 0.01;
        const KernelSpec* kptr = kernel ? &*kernel : nullptr;
        const TrainReport report =
            model == ModelKind::lr
                ? secure_train_lr(split, cfg, required_depth(model, kptr, degree))
                : secure_train_klr(split, cfg, *kernel,
                                   required_depth(model, kptr, degree));
        const DepthCheck check =
            verify_depth(report.max_depth_reached, model, kptr, degree);
        if (check.status != want_status) {
            ok = false;
            detail << "model depth mismatch at degree " << degree << " (measured "
                   << check.measured << ", published " << check.published << ") ";
        }
    };

    const int lr_row[] = {3, 4, 5, 5, 6};
    for (int degree = 1; degree <= 5; ++degree) {
        run_depth(ModelKind::lr, std::nullopt, degree, DepthCheck::Status::pass_exact);
        if (required_depth(ModelKind::lr, nullptr, degree) != lr_row[degree - 1]) {
            ok = false;
            detail << "lr depth law broke at degree " << degree << " ";
        }
        run_depth(ModelKind::klr, KernelSpec::polynomial(1.0, 3), degree,
                  DepthCheck::Status::pass_exact);
        run_depth(ModelKind::klr, KernelSpec::linear(), degree,
                  DepthCheck::Status::pass_upper_bound);
        run_depth(ModelKind::klr, KernelSpec::rbf_taylor2(1.0), degree,
                  DepthCheck::Status::pass_upper_bound);
    }
    for (const int d_poly : {1, 2, 5}) {
        run_depth(ModelKind::klr, KernelSpec::polynomial(1.0, d_poly), 3,
                  DepthCheck::Status::pass_exact);
    }
    criterion(2,
              "secure training depths: LR {3,4,5,5,6} exact, poly kernel exact, "
              "linear/RBF one under the published row",
              ok, ok ? timer.elapsed() : detail.str());
}

// ---------------------------------------------------------------------------
// 3. secure == plaintext oracle
// ---------------------------------------------------------------------------
void criterion_3() {
    Timer timer;
    bool ok = true;
    std::ostringstream detail;

    struct Combo {
        std::string label;
        std::optional<KernelSpec> kernel;  // nullopt = LR
        double lr_circles;
        double lr_moons;
    };
    const std::vector<Combo> combos = {
        {"lr", std::nullopt, 1.0, 1.0},
        {"klr-linear", KernelSpec::linear(), 0.01, 0.01},
        {"klr-poly3", KernelSpec::polynomial(1.0, 3), 0.003, 1e-4},
        {"klr-taylor2", std::nullopt /* filled per dataset */, 0.01, 0.01},
    };

    for (const std::string dataset_name : {"circles", "moons"}) {
        const bool is_circles = dataset_name == "circles";
        const Dataset data = is_circles ? make_circles(100, 0.05, 0.5, 7)
                                        : make_moons(100, 0.05, 7);
        const VerticalSplit split = split_of(data);
        for (const Combo& combo : combos) {
            std::optional<KernelSpec> kernel = combo.kernel;
            if (combo.label == "klr-taylor2") {
                kernel = KernelSpec::rbf_taylor2(is_circles ? 1.0 : 0.4);
            }
            for (const int degree : {3, 7}) {
                TrainConfig cfg;
                cfg.iterations = 20;
                cfg.sigmoid_degree = degree;
                cfg.learning_rate = is_circles ? combo.lr_circles : combo.lr_moons;

                const Sigmoid poly = Sigmoid::poly(default_sigmoid_poly(degree));
                TrainReport secure;
                PlainTrainResult plain;
                if (!kernel) {
                    secure = secure_train_lr(
                        split, cfg, required_depth(ModelKind::lr, nullptr, degree));
                    plain = plaintext_train_lr(data, cfg, poly);
                } else {
                    secure = secure_train_klr(
                        split, cfg, *kernel,
                        required_depth(ModelKind::klr, &*kernel, degree));
                    plain = plaintext_train_klr(data, cfg, *kernel, poly);
                }
                double worst = 0.0;
                for (std::size_t i = 0; i < secure.weight_history.size(); ++i) {
                    worst = std::max(worst, (secure.weight_history[i] -
                                             plain.weight_history[i])
                                                .lpNorm<Eigen::Infinity>());
                }
                if (!(worst <= 1e-9) || !secure.final_model.weights.allFinite()) {
                    ok = false;
                    detail << dataset_name << "/" << combo.label << "/deg" << degree
                           << " gap " << worst << " ";
                }
            }
        }
    }
    criterion(3, "secure weights equal the plaintext poly trainer (1e-9, per iteration)",
              ok, ok ? timer.elapsed() : detail.str());
}

// ---------------------------------------------------------------------------
// 4./5. published accuracy windows
// ---------------------------------------------------------------------------
struct AccuracyCheck {
    std::string label;
    double measured;
    double lo;
    double hi;
    bool ok() const { return measured >= lo && measured <= hi; }
};

AccuracyCheck run_lr(const std::string& label, const Dataset& d, const Sigmoid& sigma,
                     double lr, double lo, double hi) {
    TrainConfig cfg;
    cfg.iterations = 20;
    cfg.learning_rate = lr;
    const PlainTrainResult result = plaintext_train_lr(d, cfg, sigma);
    return {label, evaluate(result.model, d), lo, hi};
}

AccuracyCheck run_klr(const std::string& label, const Dataset& d, const KernelSpec& kernel,
                      const Sigmoid& sigma, double lr, double lo, double hi) {
    TrainConfig cfg;
    cfg.iterations = 20;
    cfg.learning_rate = lr;
    const PlainTrainResult result = plaintext_train_klr(d, cfg, kernel, sigma);
    return {label, evaluate(result.model, d), lo, hi};
}

void report_accuracy(int num, const std::string& name,
                     const std::vector<AccuracyCheck>& checks, const Timer& timer) {
    bool ok = true;
    std::ostringstream detail;
    detail.precision(4);
    for (const auto& c : checks) {
        detail << c.label << "=" << c.measured;
        if (!c.ok()) {
            ok = false;
            detail << " OUTSIDE [" << c.lo << "," << c.hi << "]";
        }
        detail << " ";
    }
    detail << timer.elapsed();
    criterion(num, name, ok, detail.str());
}

void criterion_4() {
    Timer timer;
    const Dataset d = make_circles(500, 0.0, 0.5, 7);
    const Sigmoid exact = Sigmoid::exact();
    const Sigmoid deg3 = Sigmoid::poly(default_sigmoid_poly(3));
    const Sigmoid deg7 = Sigmoid::poly(default_sigmoid_poly(7));
    const KernelSpec poly3 = KernelSpec::polynomial(1.0, 3);

    std::vector<AccuracyCheck> checks;
    checks.push_back(run_lr("lr/exact", d, exact, 2.0, 0.45, 0.56));
    checks.push_back(run_lr("lr/deg3", d, deg3, 2.0, 0.45, 0.56));
    checks.push_back(run_lr("lr/deg7", d, deg7, 2.0, 0.45, 0.56));
    checks.push_back(run_klr("poly3/exact", d, poly3, exact, 0.05, 0.99, 1.0));
    checks.push_back(run_klr("poly3/deg3", d, poly3, deg3, 0.01, 0.99, 1.0));
    checks.push_back(run_klr("poly3/deg7", d, poly3, deg7, 0.006, 0.99, 1.0));
    checks.push_back(run_klr("rbf/exact", d, KernelSpec::rbf(1.0), exact, 1.0, 0.99, 1.0));
    checks.push_back(
        run_klr("taylor2/deg3", d, KernelSpec::rbf_taylor2(1.0), deg3, 0.01, 0.98, 1.0));
    report_accuracy(4, "make-circles accuracies inside the published windows", checks,
                    timer);
}

void criterion_5() {
    Timer timer;
    const Dataset d = make_moons(500, 0.0, 7);
    const Sigmoid exact = Sigmoid::exact();
    const Sigmoid deg3 = Sigmoid::poly(default_sigmoid_poly(3));
    const Sigmoid deg7 = Sigmoid::poly(default_sigmoid_poly(7));

    std::vector<AccuracyCheck> checks;
    checks.push_back(run_lr("lr/exact", d, exact, 2.0, 0.84, 0.92));
    checks.push_back(run_klr("rbf/exact", d, KernelSpec::rbf(2.0), exact, 1.0, 0.99, 1.0));
    checks.push_back(
        run_klr("taylor2/deg3", d, KernelSpec::rbf_taylor2(0.4), deg3, 0.01, 0.90, 1.0));
    checks.push_back(
        run_klr("taylor2/deg7", d, KernelSpec::rbf_taylor2(0.4), deg7, 0.01, 0.93, 1.0));
    report_accuracy(5, "make-moons accuracies inside the published windows", checks, timer);
}

// ---------------------------------------------------------------------------
// 6. homomorphism property suite
// ---------------------------------------------------------------------------
void criterion_6() {
    Timer timer;
    bool ok = true;
    std::ostringstream detail;

    const KeyPair key = keygen(6);
    CostLedger ledger;
    std::mt19937_64 seeds(424242);
    for (int rep = 0; rep < 1000 && ok; ++rep) {
        vfl_test::TreeGen gen(seeds(), key, ledger);
        const auto node = gen.gen(/*dim=*/3, /*struct_depth=*/6, /*mult_budget=*/6);
        const Vector got = decrypt(key, node.ct);
        if (got.size() != node.mirror.size()) {
            ok = false;
            detail << "payload length diverged at tree " << rep;
            break;
        }
        for (Index i = 0; i < got.size(); ++i) {
            if (!(std::abs(got(i) - node.mirror(i)) <= 1e-12)) {
                ok = false;
                detail << "tree " << rep << " slot " << i << " off by "
                       << std::abs(got(i) - node.mirror(i));
                break;
            }
        }
        if (node.ct.depth > 6 || !gen.depth_rules_held()) {
            ok = false;
            detail << "tree " << rep << " broke the depth rules or budget";
        }
    }

    // power-tree depth law up to k = 16
    const KeyPair pk = keygen(8);
    CostLedger pl;
    const auto powers = power_tree(encrypt(pk, Vector::Constant(1, 1.5)), 16, pl);
    for (int k = 1; k <= 16; ++k) {
        if (powers[static_cast<std::size_t>(k - 1)].depth != ceil_log2(k)) {
            ok = false;
            detail << " power depth law broke at k=" << k;
        }
        const double want = std::pow(1.5, k);
        if (std::abs(decrypt(pk, powers[static_cast<std::size_t>(k - 1)])(0) - want) >
            1e-9 * want) {
            ok = false;
            detail << " power value wrong at k=" << k;
        }
    }

    // budget boundary: the op fails, operands and high-water stay intact
    {
        CostLedger bl;
        const KeyPair bk = keygen(2);
        const TrackedCiphertext base = encrypt(bk, Vector::Constant(1, 2.0));
        const TrackedCiphertext deep = mul(mul(base, base, bl), base, bl);
        bool threw = false;
        try {
            mul(deep, base, bl);
        } catch (const BudgetExhaustedError&) {
            threw = true;
        }
        if (!threw || bl.max_depth() != 2 || decrypt(bk, deep)(0) != 8.0) {
            ok = false;
            detail << " budget boundary not clean";
        }
    }
    criterion(6, "1000 random op-trees match plaintext at 1e-12; power/budget laws hold",
              ok, ok ? timer.elapsed() : detail.str());
}

// ---------------------------------------------------------------------------
// 7. gradient checks against central finite differences
// ---------------------------------------------------------------------------
void criterion_7() {
    Timer timer;
    bool ok = true;
    std::ostringstream detail;

    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::uniform_int_distribution<Index> n_dist(5, 20);
    std::uniform_int_distribution<Index> d_dist(2, 5);

    const double h = 1e-5;
    for (int rep = 0; rep < 20; ++rep) {
        const Index n = n_dist(rng);
        const Index dim = d_dist(rng);
        Matrix X(n, dim);
        Vector y(n);
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < dim; ++j) X(i, j) = dist(rng);
            y(i) = dist(rng) > 0 ? 1.0 : -1.0;
        }
        Vector w(dim);
        for (Index j = 0; j < dim; ++j) w(j) = 0.5 * dist(rng);

        const Vector g = lr_gradient(w, X, y, Sigmoid::exact());
        Vector fd(dim);
        for (Index j = 0; j < dim; ++j) {
            Vector hi = w, lo = w;
            hi(j) += h;
            lo(j) -= h;
            fd(j) = (lr_loss(hi, X, y) - lr_loss(lo, X, y)) / (2 * h);
        }
        const double rel_lr = (g - fd).norm() / std::max(1e-12, fd.norm());

        const KernelMatrix K = gram_matrix(KernelSpec::rbf(1.0), X);
        const double lambda = rep % 2 == 0 ? 0.0 : 0.1;
        Vector beta(n);
        for (Index j = 0; j < n; ++j) beta(j) = 0.3 * dist(rng);
        const Vector gk = klr_gradient(beta, K, y, Sigmoid::exact(), lambda);
        Vector fdk(n);
        for (Index j = 0; j < n; ++j) {
            Vector hi = beta, lo = beta;
            hi(j) += h;
            lo(j) -= h;
            fdk(j) = (klr_loss(hi, K, y, lambda) - klr_loss(lo, K, y, lambda)) / (2 * h);
        }
        const double rel_klr = (gk - fdk).norm() / std::max(1e-12, fdk.norm());

        if (rel_lr > 1e-6 || rel_klr > 1e-6) {
            ok = false;
            detail << "instance " << rep << " rel errors " << rel_lr << "/" << rel_klr
                   << " ";
        }
    }
    criterion(7, "LR and KLR gradients match finite differences at 1e-6", ok,
              ok ? timer.elapsed() : detail.str());
}

// ---------------------------------------------------------------------------
// 8. transcript audits
// ---------------------------------------------------------------------------
void criterion_8() {
    Timer timer;
    bool ok = true;
    std::ostringstream detail;

    const Dataset d = make_circles(10, 0.05, 0.5, 7);
    const VerticalSplit split = split_of(d);
    AliceState alice{split.alice_X};
    BobState bob{split.bob_X, split.bob_y};

    // every exchange protocol run in the suite passes
    for (int which = 0; which < 4; ++which) {
        EveState eve{keygen(8)};
        ProtocolTranscript t;
        switch (which) {
            case 0: exchange_features(t, alice, bob, eve); break;
            case 1: exchange_linear_kernel(t, alice, bob, eve); break;
            case 2: exchange_poly_kernel(t, alice, bob, eve, 1.0, 3); break;
            default: exchange_rbf_kernel(t, alice, bob, eve, 1.0); break;
        }
        if (!audit_transcript(t, &split.alice_X, &split.bob_X).passed) {
            ok = false;
            detail << "exchange " << which << " failed the audit ";
        }
    }

    // full training transcripts pass, with the gradient decrypts whitelisted
    TrainConfig cfg;
    cfg.iterations = 3;
    cfg.learning_rate = 0.01;
    cfg.sigmoid_degree = 3;
    const TrainReport lr_report = secure_train_lr(split, cfg, 5);
    const AuditReport lr_audit =
        audit_transcript(lr_report.transcript, &split.alice_X, &split.bob_X);
    if (!lr_audit.passed || lr_audit.whitelisted.size() != 3) {
        ok = false;
        detail << "lr training audit failed ";
    }
    const KernelSpec tay = KernelSpec::rbf_taylor2(1.0);
    const TrainReport klr_report = secure_train_klr(split, cfg, tay, 6);
    if (!audit_transcript(klr_report.transcript, &split.alice_X, &split.bob_X).passed) {
        ok = false;
        detail << "klr training audit failed ";
    }

    // a seeded fault is detected and attributed
    {
        EveState eve{keygen(8)};
        ProtocolTranscript t;
        exchange_features(t, alice, bob, eve);
        const Message& leak = t.send(PartyId::alice, PartyId::bob, "debug_dump",
                                     Payload::make_plain(split.alice_X.row(2).transpose()));
        const AuditReport report = audit_transcript(t, &split.alice_X, &split.bob_X);
        const bool detected =
            !report.passed && report.findings.size() == 1 &&
            report.findings[0].seq == leak.seq &&
            report.findings[0].detail.find("alice feature row 2") != std::string::npos;
        if (!detected) {
            ok = false;
            detail << "seeded fault not detected ";
        }
    }
    criterion(8, "no-plaintext-feature audit passes; seeded fault detected", ok,
              ok ? timer.elapsed() : detail.str());
}

// ---------------------------------------------------------------------------
// 9. out-of-scope items, with the CSV path exercised at the published shapes
// ---------------------------------------------------------------------------
void criterion_9() {
    Timer timer;
    bool ok = true;
    std::ostringstream detail;

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (const auto [rows, cols] : {std::pair{189, 10}, std::pair{379, 10}}) {
        Dataset d;
        d.X.resize(rows, cols);
        d.y.resize(rows);
        for (Index i = 0; i < rows; ++i) {
            for (Index j = 0; j < cols; ++j) d.X(i, j) = dist(rng);
            d.y(i) = (i % 2 == 0) ? 1.0 : -1.0;
        }
        const auto path = std::filesystem::temp_directory_path() /
                          ("vfl_acceptance_standin_" + std::to_string(rows) + ".csv");
        save_csv(d, path.string());
        const Dataset back = load_csv(path.string(), "label", "1");
        if (back.n() != rows || back.dim() != cols) {
            ok = false;
            detail << "stand-in shape " << rows << "x" << cols << " failed ";
        }
        std::filesystem::remove(path);
    }
    criterion(9,
              "CSV path exercised at 189x10 / 379x10; wall-clock, RAM and medical-data "
              "accuracies intentionally not reproduced",
              ok, ok ? timer.elapsed() : detail.str());
}

}  // namespace

int main() {
    std::cout << "vflsim acceptance suite" << std::endl;
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED"
                                  : std::to_string(g_failures) + " CRITERIA FAILED")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
