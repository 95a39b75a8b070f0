// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "vfl/cost_ledger.hpp"
#include "vfl/types.hpp"

namespace vfl {

/// Key material handed to the encrypting parties. Carries no secret; the
/// tracked backend binds ciphertexts to keys purely through key_id.
struct PublicKey {
    std::uint64_t key_id = 0;
    int depth_budget = 0;
};

struct KeyPair {
    std::uint64_t key_id = 0;
    int depth_budget = 0;

    PublicKey public_key() const { return PublicKey{key_id, depth_budget}; }
};

/// Simulated leveled ciphertext: the true slot values plus the number of
/// multiplicative levels consumed so far. Operations that would push depth
/// past the budget throw before producing a value, which is exactly the
/// failure mode of undersized encryption parameters.
struct TrackedCiphertext {
    Vector payload;
    int depth = 0;
    std::uint64_t key_id = 0;
    int budget = 0;

    Index size() const { return payload.size(); }
};

/// Fresh key pair with a unique id and the given multiplicative budget.
KeyPair keygen(int depth_budget);

TrackedCiphertext encrypt(const PublicKey& key, const Vector& m);
TrackedCiphertext encrypt(const KeyPair& key, const Vector& m);

/// Returns the payload. Throws WrongKeyError when ct was not produced under
/// this key — that is a protocol wiring bug, not a recoverable condition.
Vector decrypt(const KeyPair& key, const TrackedCiphertext& ct);

// Arithmetic. Depth rules:
//   add            max(depth_a, depth_b)
//   add_plain      depth_a
//   mul            max(depth_a, depth_b) + 1
//   mul_plain      depth_a + 1
//   rotate_concat  max(depth_a, depth_b)
//   sum_slots      depth_a
// Each primitive records exactly one ledger counter (adds, ct x ct mults,
// ct x pt mults, rotations).

TrackedCiphertext add(const TrackedCiphertext& a, const TrackedCiphertext& b,
                      CostLedger& ledger);
TrackedCiphertext add_plain(const TrackedCiphertext& a, const Vector& p,
                            CostLedger& ledger);
TrackedCiphertext mul(const TrackedCiphertext& a, const TrackedCiphertext& b,
                      CostLedger& ledger);
TrackedCiphertext mul_plain(const TrackedCiphertext& a, const Vector& p,
                            CostLedger& ledger);
/// Scalar broadcast across all slots.
TrackedCiphertext mul_plain(const TrackedCiphertext& a, double scalar,
                            CostLedger& ledger);
/// Concatenates the payloads of a and b into one ciphertext.
TrackedCiphertext rotate_concat(const TrackedCiphertext& a,
                                const TrackedCiphertext& b, CostLedger& ledger);

/// Replicates the slot total into every slot, the usual rotate-and-accumulate
/// ladder: ceil(log2 n) rotations and as many additions, no multiplicative
/// level. Composite op; not part of the one-counter-per-primitive rule.
TrackedCiphertext sum_slots(const TrackedCiphertext& a, CostLedger& ledger);

/// Powers t^1 .. t^k_max by binary decomposition (t^i = t^(2^a) * t^(i-2^a)),
/// so depth(t^i) = t.depth + ceil(log2 i) instead of i - 1 levels.
/// result[i] holds t^(i+1). k_max - 1 ciphertext multiplications in total.
std::vector<TrackedCiphertext> power_tree(const TrackedCiphertext& t, int k_max,
                                          CostLedger& ledger);

}  // namespace vfl
