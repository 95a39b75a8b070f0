// SPDX-License-Identifier: Apache-2.0
#include "vfl/he_backend.hpp"

#include <atomic>
#include <string>

#include "vfl/errors.hpp"

namespace vfl {

namespace {

std::atomic<std::uint64_t> next_key_id{1};

void check_same_key(const TrackedCiphertext& a, const TrackedCiphertext& b,
                    const char* op) {
    if (a.key_id != b.key_id) {
        throw OperandMismatchError(std::string(op) + ": operands under different keys (" +
                                   std::to_string(a.key_id) + " vs " +
                                   std::to_string(b.key_id) + ")");
    }
}

void check_same_length(Index a, Index b, const char* op) {
    if (a != b) {
        throw OperandMismatchError(std::string(op) + ": payload length mismatch (" +
                                   std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

void check_budget(int new_depth, int budget, const char* op) {
    if (new_depth > budget) {
        throw BudgetExhaustedError(
            std::string(op) + ": depth " + std::to_string(new_depth) +
            " exceeds budget " + std::to_string(budget) +
            "; the encryption parameters are too small for this computation");
    }
}

}  // namespace

KeyPair keygen(int depth_budget) {
    if (depth_budget < 0) {
        throw InvalidInputError("keygen: depth budget must be non-negative");
    }
    return KeyPair{next_key_id.fetch_add(1), depth_budget};
}

TrackedCiphertext encrypt(const PublicKey& key, const Vector& m) {
    if (m.size() == 0) {
        throw InvalidInputError("encrypt: empty plaintext vector");
    }
    return TrackedCiphertext{m, 0, key.key_id, key.depth_budget};
}

TrackedCiphertext encrypt(const KeyPair& key, const Vector& m) {
    return encrypt(key.public_key(), m);
}

Vector decrypt(const KeyPair& key, const TrackedCiphertext& ct) {
    if (ct.key_id != key.key_id) {
        throw WrongKeyError("decrypt: ciphertext bound to key " +
                            std::to_string(ct.key_id) + ", decrypting with key " +
                            std::to_string(key.key_id));
    }
    return ct.payload;
}

TrackedCiphertext add(const TrackedCiphertext& a, const TrackedCiphertext& b,
                      CostLedger& ledger) {
    check_same_key(a, b, "add");
    check_same_length(a.size(), b.size(), "add");
    TrackedCiphertext out{a.payload + b.payload, std::max(a.depth, b.depth),
                          a.key_id, a.budget};
    ledger.record_add();
    ledger.observe_depth(out.depth);
    return out;
}

TrackedCiphertext add_plain(const TrackedCiphertext& a, const Vector& p,
                            CostLedger& ledger) {
    check_same_length(a.size(), p.size(), "add_plain");
    TrackedCiphertext out{a.payload + p, a.depth, a.key_id, a.budget};
    ledger.record_add();
    ledger.observe_depth(out.depth);
    return out;
}

TrackedCiphertext mul(const TrackedCiphertext& a, const TrackedCiphertext& b,
                      CostLedger& ledger) {
    check_same_key(a, b, "mul");
    check_same_length(a.size(), b.size(), "mul");
    const int new_depth = std::max(a.depth, b.depth) + 1;
    check_budget(new_depth, a.budget, "mul");
    TrackedCiphertext out{a.payload.cwiseProduct(b.payload), new_depth, a.key_id,
                          a.budget};
    ledger.record_ct_ct_mul();
    ledger.observe_depth(out.depth);
    return out;
}

TrackedCiphertext mul_plain(const TrackedCiphertext& a, const Vector& p,
                            CostLedger& ledger) {
    check_same_length(a.size(), p.size(), "mul_plain");
    const int new_depth = a.depth + 1;
    check_budget(new_depth, a.budget, "mul_plain");
    TrackedCiphertext out{a.payload.cwiseProduct(p), new_depth, a.key_id, a.budget};
    ledger.record_ct_pt_mul();
    ledger.observe_depth(out.depth);
    return out;
}

TrackedCiphertext mul_plain(const TrackedCiphertext& a, double scalar,
                            CostLedger& ledger) {
    const int new_depth = a.depth + 1;
    check_budget(new_depth, a.budget, "mul_plain");
    TrackedCiphertext out{a.payload * scalar, new_depth, a.key_id, a.budget};
    ledger.record_ct_pt_mul();
    ledger.observe_depth(out.depth);
    return out;
}

TrackedCiphertext rotate_concat(const TrackedCiphertext& a,
                                const TrackedCiphertext& b, CostLedger& ledger) {
    check_same_key(a, b, "rotate_concat");
    TrackedCiphertext out;
    out.payload.resize(a.size() + b.size());
    out.payload << a.payload, b.payload;
    out.depth = std::max(a.depth, b.depth);
    out.key_id = a.key_id;
    out.budget = a.budget;
    ledger.record_rotation();
    ledger.observe_depth(out.depth);
    return out;
}

TrackedCiphertext sum_slots(const TrackedCiphertext& a, CostLedger& ledger) {
    const int steps = ceil_log2(static_cast<int>(a.size()));
    for (int i = 0; i < steps; ++i) {
        ledger.record_rotation();
        ledger.record_add();
    }
    TrackedCiphertext out{Vector::Constant(a.size(), a.payload.sum()), a.depth,
                          a.key_id, a.budget};
    ledger.observe_depth(out.depth);
    return out;
}

std::vector<TrackedCiphertext> power_tree(const TrackedCiphertext& t, int k_max,
                                          CostLedger& ledger) {
    if (k_max < 1) {
        throw InvalidInputError("power_tree: k_max must be >= 1");
    }
    check_budget(t.depth + ceil_log2(k_max), t.budget, "power_tree");
    std::vector<TrackedCiphertext> powers;
    powers.reserve(k_max);
    powers.push_back(t);  // t^1
    for (int i = 2; i <= k_max; ++i) {
        // highest power of two strictly inside i; i = 2^a + r with r < 2^a
        int half = 1;
        while (half * 2 < i) half *= 2;
        const int rest = i - half;
        powers.push_back(mul(powers[half - 1], powers[rest - 1], ledger));
    }
    return powers;
}

}  // namespace vfl
