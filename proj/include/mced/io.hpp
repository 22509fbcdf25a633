#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mced/fault.hpp"
#include "mced/matrix.hpp"
#include "mced/xor_network.hpp"

namespace mced {

/// Line-oriented `key = value` text, '#' starts a comment. Keys keep file
/// order; duplicate keys are an error.
std::vector<std::pair<std::string, std::string>> parse_kv_file(const std::string& path);
std::vector<std::pair<std::string, std::string>> parse_kv_text(const std::string& text);

/// Matrix definition file:
///   name = MyMatrix
///   degree = 4
///   reduction_poly = 3          # hex, bits below x^degree
///   rows = 4122 8656 BEA9 22FB  # one token per row, degree/4 hex digits per entry
MdsMatrix load_matrix_file(const std::string& path);

/// Catalog name, else a matrix definition file path.
MdsMatrix resolve_matrix(const std::string& selector);

/// Campaign configuration file:
///   matrix = LED                # selector
///   scheme = spatial-fst        # signature-ccs | signature-interleaved |
///                               # spatial-naive | time-recompute | spatial-fst
///   w_matrix = LED              # optional, spatial-fst only
///   model = single-nibble       # single-bit | single-nibble | single-byte |
///                               # multi-bit:K | biased-stuck:HEXVALUE:WIDTH
///   target = both-identical
///   trials = exhaustive         # or a count
///   seed = 1
CampaignConfig load_campaign_config(const std::string& path);
CampaignConfig campaign_config_from_kv(
    const std::vector<std::pair<std::string, std::string>>& kv);

FaultKind parse_fault_kind(const std::string& s, int& multi_bits, unsigned& stuck_value,
                           int& stuck_width);
FaultTarget parse_fault_target(const std::string& s);
RedundancyKind parse_scheme_kind(const std::string& s);

/// Rendering. Record output is line-delimited `key=value` pairs with
/// stable field names; text output is for people.
std::string render_classification_text(const std::string& name, const MdsReport& r);
std::string render_classification_records(const std::string& name, const MdsReport& r);
std::string render_gates_text(const std::vector<GateCount>& rows);
std::string render_gates_records(const std::vector<GateCount>& rows);
std::string render_report_text(const CampaignReport& r);
std::string render_report_records(const CampaignReport& r);

}  // namespace mced
