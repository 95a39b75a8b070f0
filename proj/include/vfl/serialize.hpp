// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "vfl/approx_math.hpp"
#include "vfl/fed_protocol.hpp"
#include "vfl/secure_training.hpp"

namespace vfl {

/// Run context the train report format carries besides the TrainReport
/// itself, so downstream tooling can label the result.
struct RunMeta {
    std::string dataset_label;
    bool secure = false;
    std::string model_label;    // "lr" | "klr"
    std::string kernel_label;   // "none", "linear", "poly-3", "rbf", "rbf_taylor2"
    std::string sigmoid_label;  // "exact", "deg-3", ...
    int budget = 0;
    int alice_dims = 0;
    bool standardized = false;
    TrainConfig cfg;
};

void save_sigmoid_poly(const std::string& path, const SigmoidPoly& p);
SigmoidPoly load_sigmoid_poly(const std::string& path);

void save_train_report(const std::string& path, const TrainReport& report,
                       const RunMeta& meta, double accuracy, bool include_history);

/// The slice of a saved train report the `report` command needs.
struct ReportSummary {
    std::string dataset_label;
    std::string model_label;
    std::string kernel_label;
    std::string sigmoid_label;
    bool secure = false;
    double accuracy = 0.0;
};

ReportSummary load_report_summary(const std::string& path);

/// Line-delimited JSON: one run-header line, then one message per line with
/// (seq, from, to, kind, payload_digest, payload_size_bytes). Full payloads
/// are embedded base64 only when record_payloads is set.
void save_transcript(const ProtocolTranscript& t, const std::string& path,
                     bool record_payloads);

/// FNV-1a 64-bit over the canonical payload encoding, rendered as 16 hex
/// digits. Stable across platforms; correlation id, not a cryptographic hash.
std::string payload_digest(const Payload& p);

std::string base64_encode(const std::string& bytes);

}  // namespace vfl
