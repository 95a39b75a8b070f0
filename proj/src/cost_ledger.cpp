// SPDX-License-Identifier: Apache-2.0
#include "vfl/cost_ledger.hpp"

#include <bit>

#include "vfl/errors.hpp"

namespace vfl {

CostLedger::CostLedger(const CostLedger& other) {
    std::scoped_lock lock(other.mu_);
    adds_ = other.adds_;
    ct_ct_mults_ = other.ct_ct_mults_;
    ct_pt_mults_ = other.ct_pt_mults_;
    rotations_ = other.rotations_;
    max_depth_ = other.max_depth_;
    tag_ = other.tag_;
}

CostLedger& CostLedger::operator=(const CostLedger& other) {
    if (this == &other) return *this;
    std::scoped_lock lock(mu_, other.mu_);
    adds_ = other.adds_;
    ct_ct_mults_ = other.ct_ct_mults_;
    ct_pt_mults_ = other.ct_pt_mults_;
    rotations_ = other.rotations_;
    max_depth_ = other.max_depth_;
    tag_ = other.tag_;
    return *this;
}

void CostLedger::record_add() {
    std::scoped_lock lock(mu_);
    ++adds_;
}

void CostLedger::record_ct_ct_mul() {
    std::scoped_lock lock(mu_);
    ++ct_ct_mults_;
}

void CostLedger::record_ct_pt_mul() {
    std::scoped_lock lock(mu_);
    ++ct_pt_mults_;
}

void CostLedger::record_rotation() {
    std::scoped_lock lock(mu_);
    ++rotations_;
}

void CostLedger::observe_depth(int depth) {
    std::scoped_lock lock(mu_);
    if (depth > max_depth_) max_depth_ = depth;
}

void CostLedger::merge_from(const CostLedger& child) {
    std::scoped_lock lock(mu_, child.mu_);
    adds_ += child.adds_;
    ct_ct_mults_ += child.ct_ct_mults_;
    ct_pt_mults_ += child.ct_pt_mults_;
    rotations_ += child.rotations_;
    if (child.max_depth_ > max_depth_) max_depth_ = child.max_depth_;
}

std::int64_t CostLedger::adds() const {
    std::scoped_lock lock(mu_);
    return adds_;
}

std::int64_t CostLedger::ct_ct_mults() const {
    std::scoped_lock lock(mu_);
    return ct_ct_mults_;
}

std::int64_t CostLedger::ct_pt_mults() const {
    std::scoped_lock lock(mu_);
    return ct_pt_mults_;
}

std::int64_t CostLedger::total_mults() const {
    std::scoped_lock lock(mu_);
    return ct_ct_mults_ + ct_pt_mults_;
}

std::int64_t CostLedger::rotations() const {
    std::scoped_lock lock(mu_);
    return rotations_;
}

int CostLedger::max_depth() const {
    std::scoped_lock lock(mu_);
    return max_depth_;
}

CostLedger merge(const std::vector<CostLedger>& ledgers, std::string scope_tag) {
    CostLedger out(std::move(scope_tag));
    for (const auto& l : ledgers) out.merge_from(l);
    return out;
}

int ceil_log2(int k) {
    if (k < 1) throw InvalidInputError("ceil_log2: k must be >= 1");
    return std::bit_width(static_cast<unsigned>(k - 1));
}

int kernel_entry_depth(const KernelSpec& spec) {
    switch (spec.kind) {
        case KernelKind::linear: return 0;
        case KernelKind::polynomial: return spec.d_poly - 1;
        case KernelKind::rbf_taylor2: return 1;
        case KernelKind::rbf_exact:
            throw InvalidInputError(
                "kernel_entry_depth: rbf_exact has no ciphertext-domain form");
    }
    throw InvalidInputError("kernel_entry_depth: unknown kernel kind");
}

int required_depth(ModelKind model, const KernelSpec* kernel, int sigmoid_degree) {
    if (sigmoid_degree < 1) {
        throw InvalidInputError("required_depth: sigmoid degree must be >= 1");
    }
    const int train_depth = 3 + ceil_log2(sigmoid_degree);
    if (model == ModelKind::lr) return train_depth;
    if (kernel == nullptr) {
        throw InvalidInputError("required_depth: KLR needs a kernel spec");
    }
    return kernel_entry_depth(*kernel) + train_depth;
}

int published_depth(ModelKind model, const KernelSpec* kernel, int sigmoid_degree) {
    const int lr_row = 3 + ceil_log2(sigmoid_degree);
    if (model == ModelKind::lr) return lr_row;
    if (kernel == nullptr) {
        throw InvalidInputError("published_depth: KLR needs a kernel spec");
    }
    switch (kernel->kind) {
        case KernelKind::linear: return lr_row + 1;
        case KernelKind::polynomial: return lr_row + kernel->d_poly - 1;
        case KernelKind::rbf_taylor2: return lr_row + 2;
        case KernelKind::rbf_exact:
            throw InvalidInputError(
                "published_depth: rbf_exact has no ciphertext-domain form");
    }
    throw InvalidInputError("published_depth: unknown kernel kind");
}

Table1Check verify_table1(const CostLedger& ledger, const std::string& protocol,
                          int d_poly) {
    Table1Check check;
    check.protocol = protocol;
    if (protocol == "secure_data_exchange") {
        check.expected_adds = 0;
        check.expected_mults = 0;
    } else if (protocol == "secure_linear_kernel") {
        check.expected_adds = 1;
        check.expected_mults = 0;
    } else if (protocol == "secure_poly_kernel") {
        if (d_poly < 1) throw InvalidInputError("verify_table1: d_poly must be >= 1");
        check.expected_adds = 2;
        check.expected_mults = d_poly - 1;
    } else if (protocol == "secure_rbf_kernel") {
        check.expected_adds = 4;
        check.expected_mults = 1;
    } else {
        throw InvalidInputError("verify_table1: unknown protocol '" + protocol + "'");
    }
    check.measured_adds = ledger.adds();
    check.measured_mults = ledger.total_mults();
    check.passed = check.measured_adds == check.expected_adds &&
                   check.measured_mults == check.expected_mults;
    return check;
}

DepthCheck verify_depth(int measured_max_depth, ModelKind model,
                        const KernelSpec* kernel, int sigmoid_degree) {
    DepthCheck check;
    check.measured = measured_max_depth;
    check.predicted = required_depth(model, kernel, sigmoid_degree);
    check.published = published_depth(model, kernel, sigmoid_degree);
    if (check.measured != check.predicted || check.measured > check.published) {
        check.status = DepthCheck::Status::fail;
        check.note = "measured depth disagrees with the depth law or exceeds the published value";
    } else if (check.measured == check.published) {
        check.status = DepthCheck::Status::pass_exact;
    } else {
        check.status = DepthCheck::Status::pass_upper_bound;
        check.note = "published table lists one extra level for this kernel row; "
                     "measured consumption is one below it";
    }
    return check;
}

}  // namespace vfl
