// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vfl/approx_math.hpp"
#include "vfl/cost_ledger.hpp"
#include "vfl/he_backend.hpp"
#include "vfl/types.hpp"

namespace vfl {

enum class PartyId { alice, bob, eve };

const char* to_string(PartyId p);

enum class PayloadKind { public_key, ciphertexts, plain_values, params };

/// One wire payload. Exactly one of the member groups is populated,
/// according to `kind`. Plaintext vectors crossing party boundaries are what
/// the transcript auditor hunts for.
struct Payload {
    PayloadKind kind = PayloadKind::params;
    PublicKey key;
    std::vector<TrackedCiphertext> cts;
    Vector plain;
    std::vector<std::pair<std::string, double>> params;

    static Payload make_key(PublicKey k);
    static Payload make_cts(std::vector<TrackedCiphertext> cts);
    static Payload make_plain(Vector v);
    static Payload make_params(std::vector<std::pair<std::string, double>> kv);
};

struct Message {
    std::uint64_t seq = 0;
    PartyId from = PartyId::alice;
    PartyId to = PartyId::bob;
    std::string kind;
    Payload payload;
};

/// Ordered message log of one protocol run plus the homomorphic-cost ledger
/// accumulated along the way. Doubles as the run context: protocols append
/// through send().
struct ProtocolTranscript {
    std::string protocol_name;
    std::vector<Message> messages;
    CostLedger ledger;

    Message& send(PartyId from, PartyId to, std::string kind, Payload payload);

  private:
    std::uint64_t next_seq_ = 0;
};

struct AliceState {
    Matrix X;  // N x d_A feature share
};

struct BobState {
    Matrix X;  // N x d_B feature share
    Vector y;  // labels
};

struct EveState {
    KeyPair keys;
};

/// Kernel matrix in the ciphertext domain: one single-slot ciphertext per
/// entry, all under Eve's key, all at the same depth for a given protocol.
struct EncryptedKernel {
    Index n = 0;
    std::vector<TrackedCiphertext> entries;  // row-major n*n
    KernelSpec spec;

    const TrackedCiphertext& entry(Index i, Index j) const {
        return entries[static_cast<std::size_t>(i * n + j)];
    }
};

/// Bob ends up holding one ciphertext per sample whose slots are the
/// aggregated row [x_i^A | x_i^B]. No additions, no multiplications; one
/// rotation per row.
std::vector<TrackedCiphertext> exchange_features(ProtocolTranscript& t,
                                                 const AliceState& alice,
                                                 const BobState& bob,
                                                 const EveState& eve);

/// Entry (i,j) decrypts to <x_i^A, x_j^A> + <x_i^B, x_j^B>, the linear kernel
/// of the aggregated rows. One addition per entry, depth 0.
EncryptedKernel exchange_linear_kernel(ProtocolTranscript& t, const AliceState& alice,
                                       const BobState& bob, const EveState& eve);

/// Entry (i,j) decrypts to (<x_i,x_j> + c)^d_poly via repeated squaring-free
/// multiplication. Two additions (the share sum and the plaintext +c) and
/// d_poly - 1 multiplications per entry; depth d_poly - 1.
EncryptedKernel exchange_poly_kernel(ProtocolTranscript& t, const AliceState& alice,
                                     const BobState& bob, const EveState& eve,
                                     double c, int d_poly);

/// Entry (i,j) decrypts to 1 + u + u^2/2 with u = -gamma ||x_i - x_j||^2,
/// assembled from per-party squared distances (u splits additively across a
/// vertical split). Four additions and one multiplication per entry; depth 1.
EncryptedKernel exchange_rbf_kernel(ProtocolTranscript& t, const AliceState& alice,
                                    const BobState& bob, const EveState& eve,
                                    double gamma);

/// Concatenates column i of the encrypted kernel into one n-slot ciphertext,
/// for every i. Bob-local; n-1 rotations per column, depth unchanged.
std::vector<TrackedCiphertext> pack_columns(const EncryptedKernel& kernel,
                                            CostLedger& ledger);

/// Decrypts the full kernel into a plaintext matrix (provenance
/// secure_exchange). Test and evaluation utility.
KernelMatrix decrypt_kernel(const EveState& eve, const EncryptedKernel& kernel);

struct AuditFinding {
    std::uint64_t seq = 0;
    std::string detail;
};

struct AuditReport {
    bool passed = false;
    std::vector<AuditFinding> findings;
    std::vector<std::string> whitelisted;
};

/// Scans a transcript for plaintext payloads that could carry party feature
/// data. Plaintext vectors sent by Alice or Bob always fail; Eve's
/// gradient-decrypt events are whitelisted and listed. When the parties'
/// private feature matrices are supplied, payload contents are additionally
/// matched against raw feature rows and findings name the matching row.
AuditReport audit_transcript(const ProtocolTranscript& t,
                             const Matrix* alice_features = nullptr,
                             const Matrix* bob_features = nullptr);

}  // namespace vfl
