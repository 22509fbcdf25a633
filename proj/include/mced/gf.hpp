#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace mced {

/// A binary extension field GF(2^m) described by its degree and the
/// irreducible reduction polynomial (low bits only, the leading x^m term
/// is implicit). Example: GF(2^4) with x^4 + x + 1 -> FieldSpec(4, 0x3).
///
/// Construction verifies irreducibility by trial division over all
/// polynomials of degree <= m/2; an invalid polynomial throws.
class FieldSpec {
public:
    FieldSpec(int degree, uint16_t reduction_poly);

    int degree() const { return degree_; }
    uint16_t reduction_poly() const { return reduction_poly_; }
    unsigned size() const { return 1u << degree_; }
    uint16_t element_mask() const { return static_cast<uint16_t>(size() - 1); }

    bool operator==(const FieldSpec& o) const {
        return degree_ == o.degree_ && reduction_poly_ == o.reduction_poly_;
    }
    bool operator!=(const FieldSpec& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    int degree_;
    uint16_t reduction_poly_;
};

/// Common fields used by the matrix catalog.
FieldSpec gf16_aes_nibble();   // GF(2^4), x^4 + x + 1
FieldSpec gf16_reciprocal();   // GF(2^4), x^4 + x^3 + 1
FieldSpec gf256_aes();         // GF(2^8), x^8 + x^4 + x^3 + x + 1

/// One element of a FieldSpec. Bit i of value() holds the coefficient of
/// x^i. Immutable; arithmetic between different fields throws.
class GFElement {
public:
    GFElement(const FieldSpec& field, unsigned value);

    unsigned value() const { return value_; }
    const FieldSpec& field() const { return field_; }
    bool is_zero() const { return value_ == 0; }

    bool operator==(const GFElement& o) const {
        return field_ == o.field_ && value_ == o.value_;
    }
    bool operator!=(const GFElement& o) const { return !(*this == o); }

    std::string to_string() const;  // hex digit(s), high-to-low display

private:
    uint8_t value_;
    FieldSpec field_;
};

GFElement gf_add(const GFElement& x, const GFElement& y);
GFElement gf_mul(const GFElement& x, const GFElement& y);

/// Multiplicative inverse; throws on zero.
GFElement gf_inv(const GFElement& x);

/// Raw-value multiply for hot paths; no field-consistency checks beyond
/// masking. Shift-and-XOR with per-step reduction.
unsigned gf_mul_raw(unsigned a, unsigned b, int degree, uint16_t reduction_poly);

/// An m x m matrix over GF(2): row i is the mask of input bits whose XOR
/// yields output bit i. This is the bit-level expansion of a linear map
/// on field elements.
struct BitMatrix {
    int dim = 0;
    std::array<uint16_t, 8> rows{};  // rows[i] = input-bit mask for output bit i

    unsigned apply(unsigned v) const;
    bool operator==(const BitMatrix& o) const;
    std::string to_string() const;
};

BitMatrix identity_bit_matrix(int dim);

/// Bit-level expansion of multiplication by the constant c: the returned
/// matrix B satisfies B.apply(a) == gf_mul(c, a).value() for every a.
BitMatrix gf_mul_const_expand(const GFElement& c);

}  // namespace mced
