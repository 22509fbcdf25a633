#include "mced/signature.hpp"

namespace mced {

std::string to_string(SignatureKind kind) {
    return kind == SignatureKind::kCcs ? "ccs" : "interleaved";
}

std::string SignatureValue::to_string() const {
    std::string s;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) s += "/";
        s += parts[i].to_string();
    }
    return s;
}

SignatureScheme::SignatureScheme(SignatureKind kind, MdsMatrix matrix)
    : kind_(kind), matrix_(std::move(matrix)) {
    const size_t n = matrix_.n();
    const FieldSpec& f = matrix_.field();
    for (size_t j = 0; j < n; ++j) {
        GFElement all(f, 0), even(f, 0), odd(f, 0);
        for (size_t i = 0; i < n; ++i) {
            all = gf_add(all, matrix_.at(i, j));
            if (i % 2 == 0) {
                even = gf_add(even, matrix_.at(i, j));
            } else {
                odd = gf_add(odd, matrix_.at(i, j));
            }
        }
        ccs_.push_back(all);
        even_.push_back(even);
        odd_.push_back(odd);
    }
}

SignatureScheme derive_scheme(const MdsMatrix& m, SignatureKind kind) {
    return SignatureScheme(kind, m);
}

namespace {
void require_column(const MdsMatrix& m, const StateColumn& col, const char* op) {
    if (col.size() != m.n()) throw std::invalid_argument(std::string(op) + ": dimension mismatch");
    for (const auto& e : col.entries) {
        if (e.field() != m.field()) throw std::invalid_argument(std::string(op) + ": field mismatch");
    }
}
}  // namespace

SignatureValue predict(const SignatureScheme& s, const StateColumn& col) {
    require_column(s.matrix(), col, "predict");
    const FieldSpec& f = s.matrix().field();
    auto weighted_sum = [&](const std::vector<GFElement>& coeffs) {
        GFElement acc(f, 0);
        for (size_t j = 0; j < coeffs.size(); ++j) acc = gf_add(acc, gf_mul(coeffs[j], col[j]));
        return acc;
    };
    if (s.kind() == SignatureKind::kCcs) {
        return SignatureValue{{weighted_sum(s.coefficients())}};
    }
    return SignatureValue{{weighted_sum(s.even_coefficients()), weighted_sum(s.odd_coefficients())}};
}

SignatureValue actual_signature(SignatureKind kind, const StateColumn& out_col) {
    if (out_col.size() == 0) throw std::invalid_argument("actual_signature: empty column");
    const FieldSpec& f = out_col[0].field();
    if (kind == SignatureKind::kCcs) {
        GFElement acc(f, 0);
        for (const auto& e : out_col.entries) acc = gf_add(acc, e);
        return SignatureValue{{acc}};
    }
    GFElement even(f, 0), odd(f, 0);
    for (size_t i = 0; i < out_col.size(); ++i) {
        if (i % 2 == 0) {
            even = gf_add(even, out_col[i]);
        } else {
            odd = gf_add(odd, out_col[i]);
        }
    }
    return SignatureValue{{even, odd}};
}

SignatureCheckResult check(const SignatureScheme& s, const StateColumn& in_col,
                           const StateColumn& out_col) {
    require_column(s.matrix(), out_col, "check");
    SignatureCheckResult r;
    r.predicted = predict(s, in_col);
    r.actual = actual_signature(s.kind(), out_col);
    r.part_mismatch.resize(r.predicted.parts.size());
    for (size_t i = 0; i < r.predicted.parts.size(); ++i) {
        r.part_mismatch[i] = r.predicted.parts[i] != r.actual.parts[i];
        r.detected_mismatch = r.detected_mismatch || r.part_mismatch[i];
    }
    return r;
}

}  // namespace mced
