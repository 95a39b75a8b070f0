// SPDX-License-Identifier: Apache-2.0
#include "vfl/fed_protocol.hpp"

#include <cmath>
#include <string>

#include "vfl/errors.hpp"

namespace vfl {

const char* to_string(PartyId p) {
    switch (p) {
        case PartyId::alice: return "alice";
        case PartyId::bob: return "bob";
        case PartyId::eve: return "eve";
    }
    return "?";
}

Payload Payload::make_key(PublicKey k) {
    Payload p;
    p.kind = PayloadKind::public_key;
    p.key = k;
    return p;
}

Payload Payload::make_cts(std::vector<TrackedCiphertext> cts) {
    Payload p;
    p.kind = PayloadKind::ciphertexts;
    p.cts = std::move(cts);
    return p;
}

Payload Payload::make_plain(Vector v) {
    Payload p;
    p.kind = PayloadKind::plain_values;
    p.plain = std::move(v);
    return p;
}

Payload Payload::make_params(std::vector<std::pair<std::string, double>> kv) {
    Payload p;
    p.kind = PayloadKind::params;
    p.params = std::move(kv);
    return p;
}

Message& ProtocolTranscript::send(PartyId from, PartyId to, std::string kind,
                                  Payload payload) {
    Message m;
    m.seq = next_seq_++;
    m.from = from;
    m.to = to;
    m.kind = std::move(kind);
    m.payload = std::move(payload);
    messages.push_back(std::move(m));
    return messages.back();
}

namespace {

void check_alignment(const AliceState& alice, const BobState& bob) {
    if (alice.X.rows() != bob.X.rows()) {
        throw InvalidInputError("protocol: parties hold different sample counts (" +
                                std::to_string(alice.X.rows()) + " vs " +
                                std::to_string(bob.X.rows()) + ")");
    }
    if (bob.y.size() != 0 && bob.y.size() != bob.X.rows()) {
        throw InvalidInputError("protocol: Bob's labels misaligned with his features");
    }
}

void distribute_public_key(ProtocolTranscript& t, const EveState& eve) {
    t.send(PartyId::eve, PartyId::alice, "public_key",
           Payload::make_key(eve.keys.public_key()));
    t.send(PartyId::eve, PartyId::bob, "public_key",
           Payload::make_key(eve.keys.public_key()));
}

// Per-party squared-distance share: row (i,j) of -gamma ||x_i - x_j||^2
// restricted to this party's columns.
Matrix neg_gamma_sqdist(const Matrix& X, double gamma) {
    const Index n = X.rows();
    Matrix out(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            out(i, j) = -gamma * (X.row(i) - X.row(j)).squaredNorm();
        }
    }
    return out;
}

Vector scalar1(double v) { return Vector::Constant(1, v); }

}  // namespace

std::vector<TrackedCiphertext> exchange_features(ProtocolTranscript& t,
                                                 const AliceState& alice,
                                                 const BobState& bob,
                                                 const EveState& eve) {
    check_alignment(alice, bob);
    distribute_public_key(t, eve);
    const Index n = alice.X.rows();
    const PublicKey pk = eve.keys.public_key();

    std::vector<TrackedCiphertext> alice_cts;
    alice_cts.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        alice_cts.push_back(encrypt(pk, alice.X.row(i).transpose()));
    }
    t.send(PartyId::alice, PartyId::bob, "encrypted_features",
           Payload::make_cts(alice_cts));

    std::vector<TrackedCiphertext> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        const TrackedCiphertext bob_ct = encrypt(pk, bob.X.row(i).transpose());
        rows.push_back(rotate_concat(alice_cts[static_cast<std::size_t>(i)], bob_ct,
                                     t.ledger));
    }
    return rows;
}

EncryptedKernel exchange_linear_kernel(ProtocolTranscript& t, const AliceState& alice,
                                       const BobState& bob, const EveState& eve) {
    check_alignment(alice, bob);
    distribute_public_key(t, eve);
    const Index n = alice.X.rows();
    const PublicKey pk = eve.keys.public_key();

    std::vector<TrackedCiphertext> alice_entries;
    alice_entries.reserve(static_cast<std::size_t>(n * n));
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            alice_entries.push_back(encrypt(pk, scalar1(alice.X.row(i).dot(alice.X.row(j)))));
        }
    }
    t.send(PartyId::alice, PartyId::bob, "encrypted_kernel_share",
           Payload::make_cts(alice_entries));

    EncryptedKernel kernel;
    kernel.n = n;
    kernel.spec = KernelSpec::linear();
    kernel.entries.reserve(static_cast<std::size_t>(n * n));
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const TrackedCiphertext bob_ct =
                encrypt(pk, scalar1(bob.X.row(i).dot(bob.X.row(j))));
            kernel.entries.push_back(
                add(alice_entries[static_cast<std::size_t>(i * n + j)], bob_ct, t.ledger));
        }
    }
    return kernel;
}

EncryptedKernel exchange_poly_kernel(ProtocolTranscript& t, const AliceState& alice,
                                     const BobState& bob, const EveState& eve,
                                     double c, int d_poly) {
    if (d_poly < 1) throw InvalidInputError("exchange_poly_kernel: d_poly must be >= 1");
    check_alignment(alice, bob);
    distribute_public_key(t, eve);
    const Index n = alice.X.rows();
    const PublicKey pk = eve.keys.public_key();

    std::vector<TrackedCiphertext> alice_entries;
    alice_entries.reserve(static_cast<std::size_t>(n * n));
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            alice_entries.push_back(encrypt(pk, scalar1(alice.X.row(i).dot(alice.X.row(j)))));
        }
    }
    t.send(PartyId::alice, PartyId::bob, "encrypted_kernel_share",
           Payload::make_cts(alice_entries));

    const Vector offset = scalar1(c);
    EncryptedKernel kernel;
    kernel.n = n;
    kernel.spec = KernelSpec::polynomial(c, d_poly);
    kernel.entries.reserve(static_cast<std::size_t>(n * n));
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const TrackedCiphertext bob_ct =
                encrypt(pk, scalar1(bob.X.row(i).dot(bob.X.row(j))));
            const TrackedCiphertext k1 =
                add(alice_entries[static_cast<std::size_t>(i * n + j)], bob_ct, t.ledger);
            const TrackedCiphertext base = add_plain(k1, offset, t.ledger);
            TrackedCiphertext acc = base;
            for (int m = 1; m < d_poly; ++m) {
                acc = mul(acc, base, t.ledger);
            }
            kernel.entries.push_back(acc);
        }
    }
    return kernel;
}

EncryptedKernel exchange_rbf_kernel(ProtocolTranscript& t, const AliceState& alice,
                                    const BobState& bob, const EveState& eve,
                                    double gamma) {
    if (!(gamma > 0.0)) throw InvalidInputError("exchange_rbf_kernel: gamma must be positive");
    check_alignment(alice, bob);
    distribute_public_key(t, eve);
    const Index n = alice.X.rows();
    const PublicKey pk = eve.keys.public_key();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    // Bob decides gamma; Alice needs it for her distance share.
    t.send(PartyId::bob, PartyId::alice, "kernel_params",
           Payload::make_params({{"gamma", gamma}}));

    const Matrix alice_u = neg_gamma_sqdist(alice.X, gamma);
    std::vector<TrackedCiphertext> alice_u1, alice_u2;
    alice_u1.reserve(static_cast<std::size_t>(n * n));
    alice_u2.reserve(static_cast<std::size_t>(n * n));
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            alice_u1.push_back(encrypt(pk, scalar1(alice_u(i, j))));
            alice_u2.push_back(encrypt(pk, scalar1(alice_u(i, j) * inv_sqrt2)));
        }
    }
    t.send(PartyId::alice, PartyId::bob, "encrypted_distance_share",
           Payload::make_cts(alice_u1));
    t.send(PartyId::alice, PartyId::bob, "encrypted_distance_share_scaled",
           Payload::make_cts(alice_u2));

    const Matrix bob_u = neg_gamma_sqdist(bob.X, gamma);
    const Vector one = scalar1(1.0);
    EncryptedKernel kernel;
    kernel.n = n;
    kernel.spec = KernelSpec::rbf_taylor2(gamma);
    kernel.entries.reserve(static_cast<std::size_t>(n * n));
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i * n + j);
            const TrackedCiphertext b1 = encrypt(pk, scalar1(bob_u(i, j)));
            const TrackedCiphertext b2 = encrypt(pk, scalar1(bob_u(i, j) * inv_sqrt2));
            const TrackedCiphertext k1 = add(alice_u1[idx], b1, t.ledger);
            const TrackedCiphertext k2 = add(alice_u2[idx], b2, t.ledger);
            const TrackedCiphertext k2_sq = mul(k2, k2, t.ledger);
            const TrackedCiphertext sum = add(k1, k2_sq, t.ledger);
            kernel.entries.push_back(add_plain(sum, one, t.ledger));
        }
    }
    return kernel;
}

std::vector<TrackedCiphertext> pack_columns(const EncryptedKernel& kernel,
                                            CostLedger& ledger) {
    std::vector<TrackedCiphertext> cols;
    cols.reserve(static_cast<std::size_t>(kernel.n));
    for (Index i = 0; i < kernel.n; ++i) {
        TrackedCiphertext col = kernel.entry(0, i);
        for (Index j = 1; j < kernel.n; ++j) {
            col = rotate_concat(col, kernel.entry(j, i), ledger);
        }
        cols.push_back(std::move(col));
    }
    return cols;
}

KernelMatrix decrypt_kernel(const EveState& eve, const EncryptedKernel& kernel) {
    KernelMatrix K;
    K.n = kernel.n;
    K.spec = kernel.spec;
    K.provenance = KernelProvenance::secure_exchange;
    K.entries.resize(kernel.n, kernel.n);
    for (Index i = 0; i < kernel.n; ++i) {
        for (Index j = 0; j < kernel.n; ++j) {
            K.entries(i, j) = decrypt(eve.keys, kernel.entry(i, j))(0);
        }
    }
    return K;
}

namespace {

// True when some full row of `features` appears as a contiguous run in v.
// Exact comparison: protocol payloads either are the raw values or are not.
bool contains_feature_row(const Vector& v, const Matrix& features, Index* which_row) {
    const Index d = features.cols();
    if (d == 0 || v.size() < d) return false;
    for (Index r = 0; r < features.rows(); ++r) {
        for (Index off = 0; off + d <= v.size(); ++off) {
            bool match = true;
            for (Index k = 0; k < d; ++k) {
                if (v(off + k) != features(r, k)) {
                    match = false;
                    break;
                }
            }
            if (match) {
                *which_row = r;
                return true;
            }
        }
    }
    return false;
}

}  // namespace

AuditReport audit_transcript(const ProtocolTranscript& t,
                             const Matrix* alice_features,
                             const Matrix* bob_features) {
    AuditReport report;
    for (const Message& m : t.messages) {
        if (m.payload.kind != PayloadKind::plain_values) continue;

        if (m.from == PartyId::eve && m.to == PartyId::eve &&
            m.kind == "gradient_decrypt") {
            report.whitelisted.push_back(
                "seq " + std::to_string(m.seq) +
                ": gradient aggregate decrypted by eve (inherent to the protocol)");
            continue;
        }

        AuditFinding finding;
        finding.seq = m.seq;
        finding.detail = "plaintext vector payload '" + m.kind + "' from " +
                         to_string(m.from) + " to " + to_string(m.to);
        Index row = -1;
        if (m.from == PartyId::alice && alice_features != nullptr &&
            contains_feature_row(m.payload.plain, *alice_features, &row)) {
            finding.detail += "; matches alice feature row " + std::to_string(row);
        } else if (m.from == PartyId::bob && bob_features != nullptr &&
                   contains_feature_row(m.payload.plain, *bob_features, &row)) {
            finding.detail += "; matches bob feature row " + std::to_string(row);
        }
        report.findings.push_back(std::move(finding));
    }
    report.passed = report.findings.empty();
    return report;
}

}  // namespace vfl
