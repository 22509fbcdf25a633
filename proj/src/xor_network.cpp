#include "mced/xor_network.hpp"

#include <stdexcept>

namespace mced {

XorNetwork::XorNetwork(size_t n, int m, size_t cols, std::string output_prefix)
    : n_(n), m_(m), cols_(cols), prefix_(std::move(output_prefix)) {
    if (input_bits() > 128) throw std::invalid_argument("XorNetwork: state wider than 128 bits");
}

size_t XorNetwork::input_index(size_t col, size_t row, int bit) const {
    return col * (n_ * m_) + row * m_ + bit;
}

std::string XorNetwork::input_label(size_t index) const {
    const size_t col = index / (n_ * m_);
    const size_t row = (index % (n_ * m_)) / m_;
    const int bit = static_cast<int>(index % m_);
    return "a" + std::to_string(row * cols_ + col) + "[" + std::to_string(bit) + "]";
}

void XorNetwork::add_output(TermSet terms, std::string label) {
    outputs_.push_back(terms);
    labels_.push_back(std::move(label));
}

std::vector<bool> XorNetwork::evaluate(const std::vector<bool>& inputs) const {
    if (inputs.size() != input_bits()) throw std::invalid_argument("XorNetwork: bad input width");
    TermSet in;
    for (size_t i = 0; i < inputs.size(); ++i) in[i] = inputs[i];
    std::vector<bool> out(outputs_.size());
    for (size_t o = 0; o < outputs_.size(); ++o) out[o] = ((outputs_[o] & in).count() & 1) != 0;
    return out;
}

std::vector<bool> XorNetwork::pack_state(const std::vector<unsigned>& state_elements) const {
    if (state_elements.size() != n_ * cols_) {
        throw std::invalid_argument("XorNetwork: state size mismatch");
    }
    std::vector<bool> bits(input_bits());
    for (size_t col = 0; col < cols_; ++col) {
        for (size_t row = 0; row < n_; ++row) {
            const unsigned v = state_elements[row * cols_ + col];
            for (int b = 0; b < m_; ++b) bits[input_index(col, row, b)] = (v >> b) & 1u;
        }
    }
    return bits;
}

namespace {

// Per-output-bit term sets for sum_j coeffs[j] * a_j over one column.
std::vector<XorNetwork::TermSet> expand_linear_form(const std::vector<GFElement>& coeffs,
                                                    size_t col, const XorNetwork& net) {
    std::vector<XorNetwork::TermSet> per_bit(coeffs.at(0).field().degree());
    for (size_t j = 0; j < coeffs.size(); ++j) {
        const BitMatrix bm = gf_mul_const_expand(coeffs[j]);
        for (int out_bit = 0; out_bit < bm.dim; ++out_bit) {
            for (int in_bit = 0; in_bit < bm.dim; ++in_bit) {
                if ((bm.rows[out_bit] >> in_bit) & 1u) {
                    per_bit[out_bit].flip(net.input_index(col, j, in_bit));
                }
            }
        }
    }
    return per_bit;
}

}  // namespace

XorNetwork expand_mixcolumn(const MdsMatrix& m) {
    const size_t n = m.n();
    const int deg = m.field().degree();
    XorNetwork net(n, deg, n, "r");
    for (size_t col = 0; col < n; ++col) {
        for (size_t row = 0; row < n; ++row) {
            std::vector<GFElement> coeffs;
            coeffs.reserve(n);
            for (size_t j = 0; j < n; ++j) coeffs.push_back(m.at(row, j));
            auto per_bit = expand_linear_form(coeffs, col, net);
            for (int b = 0; b < deg; ++b) {
                net.add_output(per_bit[b], "r" + std::to_string(row * n + col) + "[" +
                                               std::to_string(b) + "]");
            }
        }
    }
    return net;
}

XorNetwork expand_signature(const SignatureScheme& s) {
    const MdsMatrix& m = s.matrix();
    const size_t n = m.n();
    const int deg = m.field().degree();
    XorNetwork net(n, deg, n, "p");
    for (size_t col = 0; col < n; ++col) {
        if (s.kind() == SignatureKind::kCcs) {
            auto per_bit = expand_linear_form(s.coefficients(), col, net);
            for (int b = 0; b < deg; ++b) {
                net.add_output(per_bit[b], "p" + std::to_string(col) + "[" + std::to_string(b) + "]");
            }
        } else {
            auto even = expand_linear_form(s.even_coefficients(), col, net);
            auto odd = expand_linear_form(s.odd_coefficients(), col, net);
            for (int b = 0; b < deg; ++b) {
                net.add_output(even[b], "pe" + std::to_string(col) + "[" + std::to_string(b) + "]");
            }
            for (int b = 0; b < deg; ++b) {
                net.add_output(odd[b], "po" + std::to_string(col) + "[" + std::to_string(b) + "]");
            }
        }
    }
    return net;
}

size_t count_gates(const XorNetwork& net) {
    size_t gates = 0;
    for (size_t o = 0; o < net.output_count(); ++o) {
        const size_t t = net.terms(o).count();
        if (t > 1) gates += t - 1;
    }
    return gates;
}

namespace {
std::string render_centipct(unsigned centi) {
    const unsigned whole = centi / 100;
    const unsigned frac = centi % 100;
    std::string s = std::to_string(whole) + ".";
    if (frac < 10) s += "0";
    s += std::to_string(frac);
    return s;
}
}  // namespace

unsigned GateCount::ccs_overhead_centipct() const {
    return mixcolumn_gates == 0
               ? 0
               : static_cast<unsigned>(ccs_extra_gates * 10000 / mixcolumn_gates);
}

unsigned GateCount::interleaved_overhead_centipct() const {
    return mixcolumn_gates == 0
               ? 0
               : static_cast<unsigned>(interleaved_extra_gates * 10000 / mixcolumn_gates);
}

std::string GateCount::ccs_overhead_str() const { return render_centipct(ccs_overhead_centipct()); }

std::string GateCount::interleaved_overhead_str() const {
    return render_centipct(interleaved_overhead_centipct());
}

GateCount gate_cost_report(const MdsMatrix& m) {
    GateCount g;
    g.matrix_name = m.name();
    g.mixcolumn_gates = count_gates(expand_mixcolumn(m));
    g.ccs_extra_gates = count_gates(expand_signature(derive_scheme(m, SignatureKind::kCcs)));
    g.interleaved_extra_gates =
        count_gates(expand_signature(derive_scheme(m, SignatureKind::kInterleaved)));
    g.ccs_total = g.mixcolumn_gates + g.ccs_extra_gates;
    g.interleaved_total = g.mixcolumn_gates + g.interleaved_extra_gates;
    return g;
}

}  // namespace mced
