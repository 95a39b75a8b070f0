// SPDX-License-Identifier: Apache-2.0
#include "vfl/serialize.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vfl/errors.hpp"

namespace vfl {

using nlohmann::json;

namespace {

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Vector vector_from_json(const json& arr) {
    Vector v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Index>(i)) = arr[i];
    return v;
}

json ledger_to_json(const CostLedger& l) {
    return json{{"adds", l.adds()},
                {"ct_ct_mults", l.ct_ct_mults()},
                {"ct_pt_mults", l.ct_pt_mults()},
                {"rotations", l.rotations()},
                {"max_depth", l.max_depth()},
                {"scope_tag", l.scope_tag()}};
}

json payload_to_json(const Payload& p) {
    switch (p.kind) {
        case PayloadKind::public_key:
            return json{{"kind", "public_key"},
                        {"key_id", p.key.key_id},
                        {"depth_budget", p.key.depth_budget}};
        case PayloadKind::ciphertexts: {
            json cts = json::array();
            for (const auto& ct : p.cts) {
                cts.push_back(json{{"payload", vector_to_json(ct.payload)},
                                   {"depth", ct.depth},
                                   {"key_id", ct.key_id},
                                   {"budget", ct.budget}});
            }
            return json{{"kind", "ciphertexts"}, {"cts", std::move(cts)}};
        }
        case PayloadKind::plain_values:
            return json{{"kind", "plain_values"}, {"values", vector_to_json(p.plain)}};
        case PayloadKind::params: {
            json kv = json::object();
            for (const auto& [k, v] : p.params) kv[k] = v;
            return json{{"kind", "params"}, {"params", std::move(kv)}};
        }
    }
    return json{};
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::ofstream open_out(const std::string& path, const char* who) {
    std::ofstream out(path);
    if (!out) throw IoError(std::string(who) + ": cannot open '" + path + "' for writing");
    return out;
}

json parse_file(const std::string& path, const char* who) {
    std::ifstream in(path);
    if (!in) throw IoError(std::string(who) + ": cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError(std::string(who) + ": '" + path + "' is not valid JSON: " + e.what());
    }
    return j;
}

}  // namespace

void save_sigmoid_poly(const std::string& path, const SigmoidPoly& p) {
    json j{{"schema_version", "vflsim.sigmoid.v1"},
           {"degree", p.degree},
           {"coefficients", vector_to_json(p.coefficients)},
           {"interval", {p.lo, p.hi}},
           {"fit_points", p.fit_points},
           {"fit_rms", p.fit_rms}};
    open_out(path, "save_sigmoid_poly") << j.dump(2) << "\n";
}

SigmoidPoly load_sigmoid_poly(const std::string& path) {
    const json j = parse_file(path, "load_sigmoid_poly");
    try {
        SigmoidPoly p;
        p.degree = j.at("degree");
        p.coefficients = vector_from_json(j.at("coefficients"));
        p.lo = j.at("interval")[0];
        p.hi = j.at("interval")[1];
        p.fit_points = j.at("fit_points");
        p.fit_rms = j.value("fit_rms", 0.0);
        if (p.coefficients.size() != p.degree + 1) {
            throw IoError("load_sigmoid_poly: coefficient count does not match degree");
        }
        return p;
    } catch (const json::exception& e) {
        throw IoError(std::string("load_sigmoid_poly: malformed file: ") + e.what());
    }
}

void save_train_report(const std::string& path, const TrainReport& report,
                       const RunMeta& meta, double accuracy, bool include_history) {
    json j{{"schema_version", "vflsim.report.v1"},
           {"dataset", meta.dataset_label},
           {"mode", meta.secure ? "secure" : "plain"},
           {"model", meta.model_label},
           {"kernel", meta.kernel_label},
           {"sigmoid", meta.sigmoid_label},
           {"accuracy", accuracy},
           {"weights", vector_to_json(report.final_model.weights)},
           {"grad_norms", report.grad_norms},
           {"ledger", ledger_to_json(report.ledger)},
           {"max_depth_reached", report.max_depth_reached},
           {"wall_time_s", report.wall_time_s},
           {"config",
            {{"learning_rate", meta.cfg.learning_rate},
             {"iterations", meta.cfg.iterations},
             {"sigmoid_degree", meta.cfg.sigmoid_degree},
             {"lambda_reg", meta.cfg.lambda_reg},
             {"seed", meta.cfg.seed},
             {"budget", meta.budget},
             {"alice_dims", meta.alice_dims},
             {"standardized", meta.standardized}}}};
    if (include_history) {
        json hist = json::array();
        for (const auto& w : report.weight_history) hist.push_back(vector_to_json(w));
        j["weight_history"] = std::move(hist);
    }
    open_out(path, "save_train_report") << j.dump(2) << "\n";
}

ReportSummary load_report_summary(const std::string& path) {
    const json j = parse_file(path, "load_report_summary");
    try {
        ReportSummary s;
        s.dataset_label = j.at("dataset");
        s.model_label = j.at("model");
        s.kernel_label = j.at("kernel");
        s.sigmoid_label = j.at("sigmoid");
        s.secure = j.at("mode") == "secure";
        s.accuracy = j.at("accuracy");
        return s;
    } catch (const json::exception& e) {
        throw IoError(std::string("load_report_summary: malformed file: ") + e.what());
    }
}

std::string payload_digest(const Payload& p) {
    const std::string bytes = payload_to_json(p).dump();
    std::ostringstream hex;
    hex << std::hex;
    hex.width(16);
    hex.fill('0');
    hex << fnv1a64(bytes);
    return hex.str();
}

std::string base64_encode(const std::string& bytes) {
    static const char table[] =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    while (i + 2 < bytes.size()) {
        const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                           (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                           static_cast<unsigned char>(bytes[i + 2]);
        out += table[(v >> 18) & 63];
        out += table[(v >> 12) & 63];
        out += table[(v >> 6) & 63];
        out += table[v & 63];
        i += 3;
    }
    if (i + 1 == bytes.size()) {
        const unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
        out += table[(v >> 18) & 63];
        out += table[(v >> 12) & 63];
        out += "==";
    } else if (i + 2 == bytes.size()) {
        const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                           (static_cast<unsigned char>(bytes[i + 1]) << 8);
        out += table[(v >> 18) & 63];
        out += table[(v >> 12) & 63];
        out += table[(v >> 6) & 63];
        out += "=";
    }
    return out;
}

void save_transcript(const ProtocolTranscript& t, const std::string& path,
                     bool record_payloads) {
    auto out = open_out(path, "save_transcript");
    const json header{{"schema_version", "vflsim.transcript.v1"},
                      {"protocol_name", t.protocol_name},
                      {"ledger", ledger_to_json(t.ledger)}};
    out << header.dump() << "\n";
    for (const Message& m : t.messages) {
        const std::string payload_bytes = payload_to_json(m.payload).dump();
        json line{{"seq", m.seq},
                  {"from", to_string(m.from)},
                  {"to", to_string(m.to)},
                  {"kind", m.kind},
                  {"payload_digest", payload_digest(m.payload)},
                  {"payload_size_bytes", payload_bytes.size()}};
        if (record_payloads) line["payload_b64"] = base64_encode(payload_bytes);
        out << line.dump() << "\n";
    }
    if (!out) throw IoError("save_transcript: write to '" + path + "' failed");
}

}  // namespace vfl
