#include "mced/gf.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace mced {

namespace {

// Remainder of a modulo b over GF(2)[x], b != 0.
unsigned poly_mod(unsigned a, unsigned b) {
    const int db = std::bit_width(b) - 1;
    while (std::bit_width(a) - 1 >= db && a != 0) {
        a ^= b << ((std::bit_width(a) - 1) - db);
    }
    return a;
}

bool is_irreducible(int degree, uint16_t reduction_poly) {
    const unsigned full = (1u << degree) | reduction_poly;
    for (int d = 1; d <= degree / 2; ++d) {
        for (unsigned div = 1u << d; div < (2u << d); ++div) {
            if (poly_mod(full, div) == 0) return false;
        }
    }
    return true;
}

}  // namespace

FieldSpec::FieldSpec(int degree, uint16_t reduction_poly)
    : degree_(degree), reduction_poly_(reduction_poly) {
    if (degree != 4 && degree != 8) {
        throw std::invalid_argument("FieldSpec: degree must be 4 or 8, got " +
                                    std::to_string(degree));
    }
    if (reduction_poly >= (1u << degree)) {
        throw std::invalid_argument("FieldSpec: reduction polynomial has bits at or above x^" +
                                    std::to_string(degree));
    }
    if (!is_irreducible(degree, reduction_poly)) {
        throw std::invalid_argument("FieldSpec: x^" + std::to_string(degree) +
                                    " + 0x" + std::to_string(reduction_poly) +
                                    " is not irreducible over GF(2)");
    }
}

std::string FieldSpec::to_string() const {
    std::ostringstream os;
    os << "GF(2^" << degree_ << ")/0x" << std::hex << std::uppercase
       << ((1u << degree_) | reduction_poly_);
    return os.str();
}

FieldSpec gf16_aes_nibble() { return FieldSpec(4, 0x3); }
FieldSpec gf16_reciprocal() { return FieldSpec(4, 0x9); }
FieldSpec gf256_aes() { return FieldSpec(8, 0x1B); }

GFElement::GFElement(const FieldSpec& field, unsigned value)
    : value_(static_cast<uint8_t>(value)), field_(field) {
    if (value >= field.size()) {
        throw std::invalid_argument("GFElement: value " + std::to_string(value) +
                                    " out of range for " + field.to_string());
    }
}

std::string GFElement::to_string() const {
    std::ostringstream os;
    os << std::hex << std::uppercase << static_cast<unsigned>(value_);
    return os.str();
}

namespace {
void require_same_field(const GFElement& x, const GFElement& y, const char* op) {
    if (x.field() != y.field()) {
        throw std::invalid_argument(std::string(op) + ": field mismatch (" +
                                    x.field().to_string() + " vs " + y.field().to_string() + ")");
    }
}
}  // namespace

GFElement gf_add(const GFElement& x, const GFElement& y) {
    require_same_field(x, y, "gf_add");
    return GFElement(x.field(), x.value() ^ y.value());
}

unsigned gf_mul_raw(unsigned a, unsigned b, int degree, uint16_t reduction_poly) {
    const unsigned mask = (1u << degree) - 1;
    unsigned acc = 0;
    a &= mask;
    b &= mask;
    while (b != 0) {
        if (b & 1u) acc ^= a;
        b >>= 1;
        a <<= 1;
        if (a & (1u << degree)) a = (a ^ (1u << degree)) ^ reduction_poly;
    }
    return acc & mask;
}

GFElement gf_mul(const GFElement& x, const GFElement& y) {
    require_same_field(x, y, "gf_mul");
    return GFElement(x.field(),
                     gf_mul_raw(x.value(), y.value(), x.field().degree(),
                                x.field().reduction_poly()));
}

GFElement gf_inv(const GFElement& x) {
    if (x.is_zero()) throw std::invalid_argument("gf_inv: zero has no inverse");
    // Field sizes are tiny; direct search keeps this obviously correct.
    for (unsigned y = 1; y < x.field().size(); ++y) {
        if (gf_mul_raw(x.value(), y, x.field().degree(), x.field().reduction_poly()) == 1u) {
            return GFElement(x.field(), y);
        }
    }
    throw std::logic_error("gf_inv: no inverse found in an irreducible field");
}

unsigned BitMatrix::apply(unsigned v) const {
    unsigned out = 0;
    for (int i = 0; i < dim; ++i) {
        if (std::popcount(static_cast<unsigned>(rows[i] & v)) & 1) out |= 1u << i;
    }
    return out;
}

bool BitMatrix::operator==(const BitMatrix& o) const {
    if (dim != o.dim) return false;
    for (int i = 0; i < dim; ++i) {
        if (rows[i] != o.rows[i]) return false;
    }
    return true;
}

std::string BitMatrix::to_string() const {
    std::ostringstream os;
    for (int i = dim - 1; i >= 0; --i) {
        for (int j = dim - 1; j >= 0; --j) os << ((rows[i] >> j) & 1);
        if (i) os << '\n';
    }
    return os.str();
}

BitMatrix identity_bit_matrix(int dim) {
    BitMatrix b;
    b.dim = dim;
    for (int i = 0; i < dim; ++i) b.rows[i] = static_cast<uint16_t>(1u << i);
    return b;
}

BitMatrix gf_mul_const_expand(const GFElement& c) {
    const int m = c.field().degree();
    BitMatrix b;
    b.dim = m;
    for (int j = 0; j < m; ++j) {
        const unsigned prod =
            gf_mul_raw(c.value(), 1u << j, m, c.field().reduction_poly());
        for (int i = 0; i < m; ++i) {
            if ((prod >> i) & 1u) b.rows[i] |= static_cast<uint16_t>(1u << j);
        }
    }
    return b;
}

}  // namespace mced
