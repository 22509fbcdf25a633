#pragma once

#include <bitset>
#include <cstdint>
#include <string>
#include <vector>

#include "mced/signature.hpp"

namespace mced {

/// A linear map over GF(2^m)^n flattened to bit level: every output bit
/// is the XOR of a set of input bits. Input bit (col, row, bit) is the
/// x^bit coefficient of state element a_{row*n+col}; term sets are kept
/// cancelled (a bit XORed in twice vanishes), so |terms|-1 is the
/// two-input XOR gate cost of that output with no sub-expression sharing.
class XorNetwork {
public:
    using TermSet = std::bitset<128>;

    XorNetwork(size_t n, int m, size_t cols, std::string output_prefix);

    size_t n() const { return n_; }
    int m() const { return m_; }
    size_t cols() const { return cols_; }
    size_t input_bits() const { return cols_ * n_ * m_; }

    size_t input_index(size_t col, size_t row, int bit) const;
    std::string input_label(size_t index) const;  // e.g. "a12[3]" = bit x^3 of a_12

    void add_output(TermSet terms, std::string label);
    size_t output_count() const { return outputs_.size(); }
    const TermSet& terms(size_t output) const { return outputs_[output]; }
    const std::string& output_label(size_t output) const { return labels_[output]; }

    /// Evaluates all outputs on concrete input bits.
    std::vector<bool> evaluate(const std::vector<bool>& inputs) const;

    /// Packs a row-major n x n state (element values) into network input bits.
    std::vector<bool> pack_state(const std::vector<unsigned>& state_elements) const;

private:
    size_t n_;
    int m_;
    size_t cols_;
    std::string prefix_;
    std::vector<TermSet> outputs_;
    std::vector<std::string> labels_;
};

/// Bit-level expansion of the full-state MixColumn (all n columns, each
/// with identical structure over its own inputs). Output order: column-
/// major, row-major within a column, bit 0 first.
XorNetwork expand_mixcolumn(const MdsMatrix& m);

/// Bit-level expansion of the predicted signatures for all n columns.
/// One m-bit output group per column for the cumulative scheme, two
/// (even then odd) for the interleaved scheme.
XorNetwork expand_signature(const SignatureScheme& s);

/// Total two-input XOR gates: sum over outputs of max(|terms| - 1, 0).
size_t count_gates(const XorNetwork& net);

/// Gate costs of a MixColumn and its two signature predictors. Overheads
/// are exact rationals extra/mixcolumn, rendered truncated to hundredths
/// of a percent.
struct GateCount {
    std::string matrix_name;
    size_t mixcolumn_gates = 0;
    size_t ccs_extra_gates = 0;
    size_t interleaved_extra_gates = 0;
    size_t ccs_total = 0;
    size_t interleaved_total = 0;

    unsigned ccs_overhead_centipct() const;          // floor(extra/mix * 10000)
    unsigned interleaved_overhead_centipct() const;
    std::string ccs_overhead_str() const;            // "37.50"
    std::string interleaved_overhead_str() const;
};

GateCount gate_cost_report(const MdsMatrix& m);

}  // namespace mced
