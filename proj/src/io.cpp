#include "mced/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace mced {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

unsigned parse_hex(const std::string& s, const char* what) {
    std::string t = s;
    if (t.rfind("0x", 0) == 0 || t.rfind("0X", 0) == 0) t = t.substr(2);
    if (t.empty()) throw std::invalid_argument(std::string(what) + ": empty hex value");
    unsigned v = 0;
    for (char c : t) {
        v <<= 4;
        if (c >= '0' && c <= '9') {
            v |= unsigned(c - '0');
        } else if (c >= 'a' && c <= 'f') {
            v |= unsigned(c - 'a' + 10);
        } else if (c >= 'A' && c <= 'F') {
            v |= unsigned(c - 'A' + 10);
        } else {
            throw std::invalid_argument(std::string(what) + ": bad hex digit '" + c + "'");
        }
    }
    return v;
}

uint64_t parse_u64(const std::string& s, const char* what) {
    try {
        size_t pos = 0;
        const uint64_t v = std::stoull(s, &pos, 10);
        if (pos != s.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(what) + ": expected an integer, got '" + s + "'");
    }
}

std::string find_value(const std::vector<std::pair<std::string, std::string>>& kv,
                       const std::string& key, const char* context,
                       const std::string* fallback = nullptr) {
    for (const auto& [k, v] : kv) {
        if (k == key) return v;
    }
    if (fallback) return *fallback;
    throw std::invalid_argument(std::string(context) + ": missing key '" + key + "'");
}

const std::string kEmpty;

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_kv_text(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": empty key");
        }
        for (const auto& [k, v] : out) {
            if (k == key) {
                throw std::invalid_argument("line " + std::to_string(lineno) + ": duplicate key '" +
                                            key + "'");
            }
        }
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_kv_text(buf.str());
}

MdsMatrix load_matrix_file(const std::string& path) {
    const auto kv = parse_kv_file(path);
    const std::string name = find_value(kv, "name", "matrix file");
    const int degree = static_cast<int>(parse_u64(find_value(kv, "degree", "matrix file"), "degree"));
    const unsigned red = parse_hex(find_value(kv, "reduction_poly", "matrix file"), "reduction_poly");
    FieldSpec field(degree, static_cast<uint16_t>(red));

    std::istringstream rows_in(find_value(kv, "rows", "matrix file"));
    std::vector<std::string> tokens;
    for (std::string tok; rows_in >> tok;) tokens.push_back(tok);
    const size_t n = tokens.size();
    const size_t digits_per_entry = degree / 4;
    std::vector<std::vector<unsigned>> rows;
    for (const auto& tok : tokens) {
        if (tok.size() != n * digits_per_entry) {
            throw std::invalid_argument("matrix file: row '" + tok + "' should have " +
                                        std::to_string(n * digits_per_entry) + " hex digits");
        }
        std::vector<unsigned> row;
        for (size_t j = 0; j < n; ++j) {
            row.push_back(parse_hex(tok.substr(j * digits_per_entry, digits_per_entry), "rows"));
        }
        rows.push_back(std::move(row));
    }
    return MdsMatrix(name, field, rows);
}

MdsMatrix resolve_matrix(const std::string& selector) {
    for (const auto& name : catalog_names()) {
        if (name == selector) return catalog_get(selector);
    }
    std::ifstream probe(selector);
    if (probe) return load_matrix_file(selector);
    throw std::out_of_range("matrix '" + selector +
                            "' is neither a catalog name nor a readable file");
}

FaultKind parse_fault_kind(const std::string& s, int& multi_bits, unsigned& stuck_value,
                           int& stuck_width) {
    if (s == "single-bit") return FaultKind::kSingleBit;
    if (s == "single-nibble") return FaultKind::kSingleNibble;
    if (s == "single-byte") return FaultKind::kSingleByte;
    if (s.rfind("multi-bit:", 0) == 0) {
        multi_bits = static_cast<int>(parse_u64(s.substr(10), "multi-bit count"));
        return FaultKind::kMultiBit;
    }
    if (s.rfind("biased-stuck:", 0) == 0) {
        const std::string rest = s.substr(13);
        const size_t colon = rest.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("biased-stuck model needs VALUE:WIDTH, got '" + s + "'");
        }
        stuck_value = parse_hex(rest.substr(0, colon), "stuck value");
        stuck_width = static_cast<int>(parse_u64(rest.substr(colon + 1), "stuck width"));
        return FaultKind::kBiasedStuck;
    }
    throw std::invalid_argument("unknown fault model '" + s + "'");
}

FaultTarget parse_fault_target(const std::string& s) {
    if (s == "original-only") return FaultTarget::kOriginalOnly;
    if (s == "redundant-only") return FaultTarget::kRedundantOnly;
    if (s == "both-identical") return FaultTarget::kBothIdentical;
    if (s == "both-independent") return FaultTarget::kBothIndependent;
    throw std::invalid_argument("unknown fault target '" + s + "'");
}

RedundancyKind parse_scheme_kind(const std::string& s) {
    if (s == "signature-ccs") return RedundancyKind::kSignatureCcs;
    if (s == "signature-interleaved") return RedundancyKind::kSignatureInterleaved;
    if (s == "spatial-naive") return RedundancyKind::kSpatialNaive;
    if (s == "time-recompute") return RedundancyKind::kTimeRecompute;
    if (s == "spatial-fst") return RedundancyKind::kSpatialFst;
    throw std::invalid_argument("unknown scheme '" + s + "'");
}

CampaignConfig campaign_config_from_kv(
    const std::vector<std::pair<std::string, std::string>>& kv) {
    const std::string matrix_sel = find_value(kv, "matrix", "campaign config");
    const std::string scheme_s = find_value(kv, "scheme", "campaign config");
    const std::string model_s = find_value(kv, "model", "campaign config");
    const std::string default_target = "original-only";
    const std::string target_s = find_value(kv, "target", "campaign config", &default_target);
    const std::string trials_s = find_value(kv, "trials", "campaign config");
    const std::string zero = "0";
    const std::string seed_s = find_value(kv, "seed", "campaign config", &zero);
    const std::string w_sel = find_value(kv, "w_matrix", "campaign config", &kEmpty);
    const std::string ten = "10";
    const std::string max_ex_s = find_value(kv, "max_exemplars", "campaign config", &ten);
    const std::string one = "1";
    const std::string workers_s = find_value(kv, "workers", "campaign config", &one);

    CampaignConfig cfg{resolve_matrix(matrix_sel), RedundancyScheme{}, FaultModel{}, std::nullopt,
                       0, 10, 1};
    cfg.scheme.kind = parse_scheme_kind(scheme_s);
    if (!w_sel.empty()) {
        if (cfg.scheme.kind != RedundancyKind::kSpatialFst) {
            throw std::invalid_argument("w_matrix is only meaningful for spatial-fst");
        }
        cfg.scheme.w = resolve_matrix(w_sel);
    }
    cfg.model.kind =
        parse_fault_kind(model_s, cfg.model.multi_bits, cfg.model.stuck_value, cfg.model.stuck_width);
    cfg.model.target = parse_fault_target(target_s);
    if (trials_s != "exhaustive") cfg.trials = parse_u64(trials_s, "trials");
    cfg.seed = parse_u64(seed_s, "seed");
    cfg.max_exemplars = static_cast<size_t>(parse_u64(max_ex_s, "max_exemplars"));
    cfg.workers = static_cast<int>(parse_u64(workers_s, "workers"));
    return cfg;
}

CampaignConfig load_campaign_config(const std::string& path) {
    return campaign_config_from_kv(parse_kv_file(path));
}

std::string render_classification_text(const std::string& name, const MdsReport& r) {
    return name + ": " + r.to_string() + "\n";
}

std::string render_classification_records(const std::string& name, const MdsReport& r) {
    std::ostringstream os;
    os << "name=" << name << " branch_number=" << r.branch_number
       << " mds=" << (r.is_mds ? "true" : "false")
       << " almost_mds=" << (r.is_almost_mds ? "true" : "false")
       << " involutory=" << (r.is_involutory ? "true" : "false") << "\n";
    return os.str();
}

std::string render_gates_text(const std::vector<GateCount>& rows) {
    std::ostringstream os;
    os << std::left << std::setw(14) << "matrix" << std::right << std::setw(8) << "MixCol"
       << std::setw(18) << "CCS" << std::setw(18) << "Inter.CCS" << "\n";
    for (const auto& g : rows) {
        os << std::left << std::setw(14) << g.matrix_name << std::right << std::setw(8)
           << g.mixcolumn_gates << std::setw(8) << g.ccs_total << " ("
           << std::setw(5) << g.ccs_overhead_str() << "%)" << std::setw(8) << g.interleaved_total
           << " (" << std::setw(5) << g.interleaved_overhead_str() << "%)\n";
    }
    return os.str();
}

std::string render_gates_records(const std::vector<GateCount>& rows) {
    std::ostringstream os;
    for (const auto& g : rows) {
        os << "name=" << g.matrix_name << " mix=" << g.mixcolumn_gates << " ccs=" << g.ccs_total
           << " ccs_pct=" << g.ccs_overhead_str() << " inter=" << g.interleaved_total
           << " inter_pct=" << g.interleaved_overhead_str() << "\n";
    }
    return os.str();
}

namespace {

std::string rate_str(double rate) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << rate;
    return os.str();
}

std::string hex32(uint32_t v) {
    std::ostringstream os;
    os << "0x" << std::hex << std::uppercase << v;
    return os.str();
}

}  // namespace

std::string render_report_text(const CampaignReport& r) {
    std::ostringstream os;
    os << "campaign: matrix=" << r.matrix_name << " scheme=" << r.scheme_name
       << " model=" << r.model_name << " target=" << r.target_name
       << " trials=" << (r.exhaustive ? std::string("exhaustive") : std::to_string(r.trials_run))
       << " seed=" << r.seed << "\n";
    os << "trials_run=" << r.trials_run << " faults_injected=" << r.faults_injected
       << " detected=" << r.detected << " undetected=" << r.undetected << "\n";
    os << "detection_rate=" << rate_str(r.detection_rate()) << "\n";
    if (!r.undetected_exemplars.empty()) {
        os << "undetected exemplars (input, fault, redundant fault):\n";
        for (const auto& e : r.undetected_exemplars) {
            os << "  trial=" << e.trial << " input=" << hex32(e.input)
               << " fault=" << hex32(e.fault_original)
               << " fault_redundant=" << hex32(e.fault_redundant) << "\n";
        }
    }
    return os.str();
}

std::string render_report_records(const CampaignReport& r) {
    std::ostringstream os;
    os << "matrix=" << r.matrix_name << " scheme=" << r.scheme_name << " model=" << r.model_name
       << " target=" << r.target_name << " exhaustive=" << (r.exhaustive ? "true" : "false")
       << " seed=" << r.seed << " trials_run=" << r.trials_run
       << " faults_injected=" << r.faults_injected << " detected=" << r.detected
       << " undetected=" << r.undetected << " detection_rate=" << rate_str(r.detection_rate())
       << "\n";
    for (const auto& e : r.undetected_exemplars) {
        os << "exemplar trial=" << e.trial << " input=" << hex32(e.input)
           << " fault=" << hex32(e.fault_original)
           << " fault_redundant=" << hex32(e.fault_redundant) << "\n";
    }
    return os.str();
}

}  // namespace mced
