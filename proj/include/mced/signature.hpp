#pragma once

#include <string>
#include <vector>

#include "mced/matrix.hpp"

namespace mced {

enum class SignatureKind {
    kCcs,          // one predicted sum over all output rows of a column
    kInterleaved,  // two predicted sums: even rows and odd rows
};

std::string to_string(SignatureKind kind);

/// A predicted signature: one part for the cumulative scheme, two parts
/// (even-row sum, odd-row sum) for the interleaved scheme.
struct SignatureValue {
    std::vector<GFElement> parts;

    bool operator==(const SignatureValue& o) const { return parts == o.parts; }
    bool operator!=(const SignatureValue& o) const { return !(*this == o); }
    std::string to_string() const;
};

/// Predictor coefficients derived from a matrix: the signature of a
/// column is a fixed linear combination of the column inputs, obtained
/// by summing matrix coefficients down each column (all rows for the
/// cumulative scheme, even/odd rows separately for the interleaved one).
class SignatureScheme {
public:
    SignatureScheme(SignatureKind kind, MdsMatrix matrix);

    SignatureKind kind() const { return kind_; }
    const MdsMatrix& matrix() const { return matrix_; }

    /// Cumulative coefficients (kind == kCcs).
    const std::vector<GFElement>& coefficients() const { return ccs_; }
    /// Even-row / odd-row coefficient vectors (kind == kInterleaved).
    const std::vector<GFElement>& even_coefficients() const { return even_; }
    const std::vector<GFElement>& odd_coefficients() const { return odd_; }

private:
    SignatureKind kind_;
    MdsMatrix matrix_;
    std::vector<GFElement> ccs_;
    std::vector<GFElement> even_;
    std::vector<GFElement> odd_;
};

SignatureScheme derive_scheme(const MdsMatrix& m, SignatureKind kind);

/// Predicted signature of the mixed column, computed from the inputs only.
SignatureValue predict(const SignatureScheme& s, const StateColumn& col);

/// Signature recomputed from an (possibly faulted) output column.
SignatureValue actual_signature(SignatureKind kind, const StateColumn& out_col);

struct SignatureCheckResult {
    SignatureValue predicted;
    SignatureValue actual;
    bool detected_mismatch = false;
    std::vector<bool> part_mismatch;  // per signature part
};

SignatureCheckResult check(const SignatureScheme& s, const StateColumn& in_col,
                           const StateColumn& out_col);

}  // namespace mced
