#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>

#include "mced/signature.hpp"

using namespace mced;

namespace {

uint64_t xorshift(uint64_t& s) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
}

std::vector<unsigned> values_of(const std::vector<GFElement>& v) {
    std::vector<unsigned> out;
    for (const auto& e : v) out.push_back(e.value());
    return out;
}

}  // namespace

TEST_CASE("derived coefficients are the column sums") {
    SUBCASE("LED cumulative: (5, B, 2, 6)") {
        const auto s = derive_scheme(catalog_get("LED"), SignatureKind::kCcs);
        CHECK(values_of(s.coefficients()) == std::vector<unsigned>{0x5, 0xB, 0x2, 0x6});
    }
    SUBCASE("LED interleaved: even (F, F, 8, B), odd (A, 4, A, D)") {
        const auto s = derive_scheme(catalog_get("LED"), SignatureKind::kInterleaved);
        CHECK(values_of(s.even_coefficients()) == std::vector<unsigned>{0xF, 0xF, 0x8, 0xB});
        CHECK(values_of(s.odd_coefficients()) == std::vector<unsigned>{0xA, 0x4, 0xA, 0xD});
    }
    SUBCASE("Midori64-MC cumulative: all ones") {
        const auto s = derive_scheme(catalog_get("Midori64-MC"), SignatureKind::kCcs);
        CHECK(values_of(s.coefficients()) == std::vector<unsigned>{1, 1, 1, 1});
    }
    SUBCASE("Midori64-MC interleaved pairs pick alternating inputs") {
        const auto s = derive_scheme(catalog_get("Midori64-MC"), SignatureKind::kInterleaved);
        CHECK(values_of(s.even_coefficients()) == std::vector<unsigned>{1, 0, 1, 0});
        CHECK(values_of(s.odd_coefficients()) == std::vector<unsigned>{0, 1, 0, 1});
    }
}

TEST_CASE("predict evaluates the coefficient form") {
    const MdsMatrix mc = catalog_get("Midori64-MC");
    const FieldSpec f = mc.field();
    const auto ccs = derive_scheme(mc, SignatureKind::kCcs);
    const auto inter = derive_scheme(mc, SignatureKind::kInterleaved);
    uint64_t s = 3;
    for (int i = 0; i < 1000; ++i) {
        const unsigned a0 = xorshift(s) & 0xF, a4 = xorshift(s) & 0xF;
        const unsigned a8 = xorshift(s) & 0xF, a12 = xorshift(s) & 0xF;
        const StateColumn col = make_column(f, {a0, a4, a8, a12});
        CHECK(predict(ccs, col).parts[0].value() == (a0 ^ a4 ^ a8 ^ a12));
        const SignatureValue iv = predict(inter, col);
        CHECK(iv.parts[0].value() == (a0 ^ a8));
        CHECK(iv.parts[1].value() == (a4 ^ a12));
    }

    const auto led_ccs = derive_scheme(catalog_get("LED"), SignatureKind::kCcs);
    CHECK(predict(led_ccs, make_column(f, {1, 0, 0, 0})).parts[0].value() == 0x5);

    CHECK_THROWS_AS(predict(led_ccs, make_column(f, {1, 0, 0})), std::invalid_argument);
    CHECK_THROWS_AS(predict(led_ccs, make_column(gf16_reciprocal(), {1, 0, 0, 0})),
                    std::invalid_argument);
}

TEST_CASE("actual_signature folds output rows") {
    const FieldSpec f = gf16_aes_nibble();
    CHECK(actual_signature(SignatureKind::kCcs, make_column(f, {0, 0, 0, 0})).parts[0].value() == 0);

    uint64_t s = 17;
    for (int i = 0; i < 200; ++i) {
        const unsigned x = xorshift(s) & 0xF, y = xorshift(s) & 0xF;
        const StateColumn col = make_column(f, {x, x, y, y});
        CHECK(actual_signature(SignatureKind::kCcs, col).parts[0].value() == 0);
        const SignatureValue iv = actual_signature(SignatureKind::kInterleaved, col);
        CHECK(iv.parts[0].value() == (x ^ y));
        CHECK(iv.parts[1].value() == (x ^ y));
    }
}

TEST_CASE("fault-free outputs always satisfy the predicted signature") {
    // the coefficient identities as executable checks, exhaustive per matrix
    for (const char* name : {"Midori64-MC", "LED", "KLEIN"}) {
        const MdsMatrix m = catalog_get(name);
        const FieldSpec f = m.field();
        for (SignatureKind kind : {SignatureKind::kCcs, SignatureKind::kInterleaved}) {
            const auto scheme = derive_scheme(m, kind);
            for (uint32_t packed = 0; packed < 0x10000; ++packed) {
                const StateColumn in = unpack_column(f, 4, packed);
                const StateColumn out = mix_column(m, in);
                if (check(scheme, in, out).detected_mismatch) {
                    CAPTURE(name);
                    CAPTURE(packed);
                    REQUIRE(false);
                }
            }
        }
    }
}

TEST_CASE("every single-bit output flip is caught") {
    for (const char* name : {"Midori64-MC", "LED", "KLEIN"}) {
        const MdsMatrix m = catalog_get(name);
        const FieldSpec f = m.field();
        uint64_t s = 0xF00D;
        for (SignatureKind kind : {SignatureKind::kCcs, SignatureKind::kInterleaved}) {
            const auto scheme = derive_scheme(m, kind);
            for (int i = 0; i < 1000; ++i) {
                const uint32_t packed = static_cast<uint32_t>(xorshift(s)) & 0xFFFF;
                const StateColumn in = unpack_column(f, 4, packed);
                const uint32_t good = pack_column(mix_column(m, in));
                for (int bit = 0; bit < 16; ++bit) {
                    const StateColumn bad = unpack_column(f, 4, good ^ (1u << bit));
                    CHECK(check(scheme, in, bad).detected_mismatch);
                }
            }
        }
    }
}

TEST_CASE("paired flips in one bit position can cancel") {
    const MdsMatrix mc = catalog_get("Midori64-MC");
    const FieldSpec f = mc.field();
    const auto ccs = derive_scheme(mc, SignatureKind::kCcs);
    const auto inter = derive_scheme(mc, SignatureKind::kInterleaved);

    for (uint32_t packed = 0; packed < 0x10000; packed += 37) {
        const StateColumn in = unpack_column(f, 4, packed);
        const uint32_t good = pack_column(mix_column(mc, in));
        for (int bit = 0; bit < 4; ++bit) {
            // rows 0 and 2: even pair, invisible to both schemes
            const uint32_t both_even = (1u << bit) | (1u << (bit + 8));
            const auto r_ccs = check(ccs, in, unpack_column(f, 4, good ^ both_even));
            CHECK_FALSE(r_ccs.detected_mismatch);
            const auto r_int = check(inter, in, unpack_column(f, 4, good ^ both_even));
            CHECK_FALSE(r_int.detected_mismatch);
            CHECK_FALSE(r_int.part_mismatch[0]);
            CHECK_FALSE(r_int.part_mismatch[1]);

            // rows 0 and 1: cancels the cumulative sum, splits the pairs
            const uint32_t even_odd = (1u << bit) | (1u << (bit + 4));
            CHECK_FALSE(check(ccs, in, unpack_column(f, 4, good ^ even_odd)).detected_mismatch);
            const auto r_int2 = check(inter, in, unpack_column(f, 4, good ^ even_odd));
            CHECK(r_int2.detected_mismatch);
            CHECK(r_int2.part_mismatch[0]);
            CHECK(r_int2.part_mismatch[1]);
        }
    }
}

TEST_CASE("any fault confined to one output row is caught by both schemes") {
    const MdsMatrix led = catalog_get("LED");
    const FieldSpec f = led.field();
    const auto ccs = derive_scheme(led, SignatureKind::kCcs);
    const auto inter = derive_scheme(led, SignatureKind::kInterleaved);
    uint64_t s = 0xBEE;
    for (int i = 0; i < 300; ++i) {
        const uint32_t packed = static_cast<uint32_t>(xorshift(s)) & 0xFFFF;
        const StateColumn in = unpack_column(f, 4, packed);
        const uint32_t good = pack_column(mix_column(led, in));
        for (int row = 0; row < 4; ++row) {
            for (unsigned diff = 1; diff < 16; ++diff) {
                const uint32_t bad = good ^ (diff << (4 * row));
                CHECK(check(ccs, in, unpack_column(f, 4, bad)).detected_mismatch);
                const auto r = check(inter, in, unpack_column(f, 4, bad));
                CHECK(r.detected_mismatch);
                // the fault lands in exactly one of the two sums
                CHECK(r.part_mismatch[row % 2]);
                CHECK_FALSE(r.part_mismatch[1 - row % 2]);
            }
        }
    }
}

TEST_CASE("check result mirrors predicted vs actual") {
    const MdsMatrix led = catalog_get("LED");
    const FieldSpec f = led.field();
    const auto scheme = derive_scheme(led, SignatureKind::kCcs);
    const StateColumn in = make_column(f, {1, 2, 3, 4});
    const StateColumn out = mix_column(led, in);
    const auto ok = check(scheme, in, out);
    CHECK_FALSE(ok.detected_mismatch);
    CHECK(ok.predicted == ok.actual);
}
