#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mced/gf.hpp"

namespace mced {

/// Thrown when a request exceeds what the chosen strategy can enumerate
/// (e.g. exhaustive sweeps over GF(2^8) column spaces).
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One column of a cipher state: n elements of one field.
struct StateColumn {
    std::vector<GFElement> entries;

    size_t size() const { return entries.size(); }
    const GFElement& operator[](size_t i) const { return entries[i]; }
    bool operator==(const StateColumn& o) const { return entries == o.entries; }
    std::string to_string() const;  // hex, row 0 first
};

StateColumn make_column(const FieldSpec& field, const std::vector<unsigned>& values);

/// Packs a column into an unsigned word, element i at bits [i*m, (i+1)*m).
/// Requires n*degree <= 32.
uint32_t pack_column(const StateColumn& col);
StateColumn unpack_column(const FieldSpec& field, size_t n, uint32_t packed);

/// An n x n coefficient matrix over one field, with a provenance label
/// naming the cipher it came from.
class MdsMatrix {
public:
    MdsMatrix(std::string name, const FieldSpec& field,
              const std::vector<std::vector<unsigned>>& rows);

    const std::string& name() const { return name_; }
    const FieldSpec& field() const { return field_; }
    size_t n() const { return n_; }
    const GFElement& at(size_t row, size_t col) const { return coeffs_[row * n_ + col]; }

    bool operator==(const MdsMatrix& o) const;

private:
    std::string name_;
    FieldSpec field_;
    size_t n_;
    std::vector<GFElement> coeffs_;  // row-major
};

/// Catalog of the matrices under study. Known names:
///   Midori64-MC  circulant-like (0,1,1,1) over GF(2^4)/x^4+x+1
///   LED          the LED cipher matrix over GF(2^4)/x^4+x+1
///   KLEIN        circulant (2,3,1,1) over GF(2^4)/x^4+x^3+1
///   Midori64-MB  same matrix as KLEIN
///   KLEIN-byte   circulant (2,3,1,1) over GF(2^8)/x^8+x^4+x^3+x+1
/// Unknown names throw std::out_of_range.
MdsMatrix catalog_get(const std::string& name);
std::vector<std::string> catalog_names();

/// Classification result for a diffusion matrix.
struct MdsReport {
    int branch_number = 0;
    bool is_mds = false;         // branch number == n + 1
    bool is_almost_mds = false;  // branch number == n
    bool is_involutory = false;
    std::string to_string() const;
};

/// Lookup-table form of a matrix for packed-column application; the fast
/// path for sweeps and campaigns. Requires n*degree <= 32.
class PackedLinearMap {
public:
    explicit PackedLinearMap(const MdsMatrix& m);

    uint32_t apply(uint32_t packed) const;
    uint32_t input_mask() const { return input_mask_; }
    size_t n() const { return n_; }
    int degree() const { return degree_; }

private:
    size_t n_;
    int degree_;
    uint32_t input_mask_;
    std::vector<std::vector<uint8_t>> tab_;  // tab_[i*n+j][v] = coeff(i,j)*v
};

/// Nonzero-element count of a packed column.
int packed_bundle_weight(uint32_t packed, size_t n, int degree);

StateColumn mix_column(const MdsMatrix& m, const StateColumn& col);

/// Applies mix_column to each of the n columns of a row-major n x n state.
std::vector<GFElement> mix_state(const MdsMatrix& m, const std::vector<GFElement>& state);

/// Number of nonzero entries.
int bundle_weight(const StateColumn& col);

enum class BranchStrategy {
    kAuto,             // exhaustive when the column space is small, else restricted
    kExhaustive,       // sweep every nonzero input column (capability-limited)
    kWeightRestricted  // weight<=2 sweeps of M and M^-1 plus the all-minors MDS check
};

/// Minimum over nonzero inputs X of bundle_weight(X) + bundle_weight(M X).
///
/// The restricted strategy is exact for invertible matrices: any column
/// pair (X, MX) with combined weight <= n+1 has input or output weight
/// <= 2, so sweeping weight<=2 inputs of both M and M^-1 finds the true
/// minimum, and the all-square-submatrices-nonsingular criterion decides
/// MDS independently. Non-invertible matrices require kExhaustive.
int branch_number(const MdsMatrix& m, BranchStrategy strategy = BranchStrategy::kAuto);

bool is_involutory(const MdsMatrix& m);
bool is_invertible(const MdsMatrix& m);
MdsMatrix inverse(const MdsMatrix& m);

MdsReport classify(const MdsMatrix& m, BranchStrategy strategy = BranchStrategy::kAuto);

}  // namespace mced
