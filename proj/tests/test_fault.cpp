#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "mced/fault.hpp"
#include "mced/io.hpp"

using namespace mced;

namespace {

// Independent fixed-point oracle: kernel of the bit-level matrix of
// (M xor I), by Gaussian elimination over GF(2), kernel enumerated from
// its basis. Returns packed columns, sorted.
std::vector<uint32_t> kernel_fixed_points(const MdsMatrix& m) {
    const size_t bits = m.n() * m.field().degree();
    const PackedLinearMap map(m);
    // rows of the system: row r states sum_j A[r][j] x_j = 0 where
    // A column j = bits of M(e_j) ^ e_j
    std::vector<uint32_t> cols(bits);
    for (size_t j = 0; j < bits; ++j) cols[j] = map.apply(uint32_t(1) << j) ^ (uint32_t(1) << j);
    // transpose into row masks
    std::vector<uint32_t> rows(bits, 0);
    for (size_t r = 0; r < bits; ++r) {
        for (size_t j = 0; j < bits; ++j) {
            if ((cols[j] >> r) & 1u) rows[r] |= uint32_t(1) << j;
        }
    }
    // eliminate
    std::vector<int> pivot_col;
    size_t rank = 0;
    for (size_t c = 0; c < bits && rank < bits; ++c) {
        size_t p = rank;
        while (p < bits && !((rows[p] >> c) & 1u)) ++p;
        if (p == bits) continue;
        std::swap(rows[rank], rows[p]);
        for (size_t r = 0; r < bits; ++r) {
            if (r != rank && ((rows[r] >> c) & 1u)) rows[r] ^= rows[rank];
        }
        pivot_col.push_back(static_cast<int>(c));
        ++rank;
    }
    // free columns -> kernel basis
    std::vector<uint32_t> basis;
    for (size_t c = 0; c < bits; ++c) {
        if (std::find(pivot_col.begin(), pivot_col.end(), static_cast<int>(c)) != pivot_col.end()) {
            continue;
        }
        uint32_t v = uint32_t(1) << c;
        for (size_t r = 0; r < rank; ++r) {
            if ((rows[r] >> c) & 1u) v |= uint32_t(1) << pivot_col[r];
        }
        basis.push_back(v);
    }
    std::vector<uint32_t> out;
    for (uint64_t mask = 0; mask < (uint64_t(1) << basis.size()); ++mask) {
        uint32_t v = 0;
        for (size_t i = 0; i < basis.size(); ++i) {
            if ((mask >> i) & 1u) v ^= basis[i];
        }
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<uint32_t> packed_sorted(const std::vector<StateColumn>& cols) {
    std::vector<uint32_t> out;
    for (const auto& c : cols) out.push_back(pack_column(c));
    std::sort(out.begin(), out.end());
    return out;
}

CampaignConfig base_config(const std::string& matrix, RedundancyKind kind, FaultModel model) {
    CampaignConfig cfg{catalog_get(matrix), RedundancyScheme{kind, std::nullopt}, model,
                       std::nullopt, 0, 10, 1};
    return cfg;
}

}  // namespace

TEST_CASE("trial streams are deterministic and distinct") {
    TrialRng a(42, 7), b(42, 7), c(42, 8);
    bool all_equal = true, any_equal_c = false;
    for (int i = 0; i < 64; ++i) {
        const uint64_t va = a.next();
        all_equal = all_equal && va == b.next();
        any_equal_c = any_equal_c || va == c.next();
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal_c);

    TrialRng d(1, 0);
    for (int i = 0; i < 1000; ++i) CHECK(d.below(15) < 15);
}

TEST_CASE("apply_fault basics") {
    const FieldSpec f = gf16_aes_nibble();

    SUBCASE("single bit on the zero column sets exactly one bit") {
        for (uint64_t t = 0; t < 100; ++t) {
            TrialRng rng(5, t);
            const auto r = apply_fault(make_column(f, {0, 0, 0, 0}),
                                       FaultModel{FaultKind::kSingleBit}, rng);
            CHECK(std::popcount(r.descriptor.bits) == 1);
            CHECK(pack_column(r.column) == r.descriptor.bits);
        }
    }
    SUBCASE("single nibble hits one element with a nonzero difference") {
        for (uint64_t t = 0; t < 100; ++t) {
            TrialRng rng(6, t);
            const auto r = apply_fault(make_column(f, {1, 2, 3, 4}),
                                       FaultModel{FaultKind::kSingleNibble}, rng);
            CHECK(packed_bundle_weight(r.descriptor.bits, 4, 4) == 1);
        }
    }
    SUBCASE("multi-bit flips the requested number of bits") {
        FaultModel model{FaultKind::kMultiBit};
        model.multi_bits = 3;
        for (uint64_t t = 0; t < 100; ++t) {
            TrialRng rng(7, t);
            const auto r = apply_fault(make_column(f, {9, 9, 9, 9}), model, rng);
            CHECK(std::popcount(r.descriptor.bits) == 3);
        }
    }
    SUBCASE("stuck-at forces the window and records the difference") {
        FaultModel model{FaultKind::kBiasedStuck};
        model.stuck_value = 0xF;
        model.stuck_width = 4;
        for (uint64_t t = 0; t < 50; ++t) {
            TrialRng rng(8, t);
            const auto r = apply_fault(make_column(f, {6, 6, 6, 6}), model, rng);
            CHECK(packed_bundle_weight(r.descriptor.bits, 4, 4) == 1);
            // 0x6 forced to 0xF differs by 0x9
            const int pos = std::countr_zero(r.descriptor.bits) / 4;
            CHECK(r.descriptor.bits == (0x9u << (4 * pos)));
            CHECK(r.column[pos].value() == 0xF);
        }
    }
    SUBCASE("model validation") {
        TrialRng rng(1, 1);
        FaultModel bad{FaultKind::kMultiBit};
        bad.multi_bits = 17;
        CHECK_THROWS_AS(apply_fault(make_column(f, {0, 0, 0, 0}), bad, rng),
                        std::invalid_argument);
        FaultModel wide{FaultKind::kBiasedStuck};
        wide.stuck_value = 0x10;
        wide.stuck_width = 4;
        CHECK_THROWS_AS(apply_fault(make_column(f, {0, 0, 0, 0}), wide, rng),
                        std::invalid_argument);
    }
}

TEST_CASE("signature campaigns: exhaustive single-bit faults are always caught") {
    for (RedundancyKind kind :
         {RedundancyKind::kSignatureCcs, RedundancyKind::kSignatureInterleaved}) {
        auto cfg = base_config("Midori64-MC", kind, FaultModel{FaultKind::kSingleBit});
        const CampaignReport r = run_signature_campaign(cfg);
        CHECK(r.trials_run == uint64_t(65536) * 16);
        CHECK(r.faults_injected == r.trials_run);
        CHECK(r.undetected == 0);
        CHECK(r.detection_rate() == doctest::Approx(1.0));
    }
}

TEST_CASE("signature campaigns: two-bit cancellation rates are exact") {
    FaultModel model{FaultKind::kMultiBit};
    model.multi_bits = 2;

    // 120 two-bit patterns in 16 bits; the cumulative sum misses the 24
    // with both flips in the same bit position (4 bits x C(4,2) row pairs),
    // the interleaved pair misses the 8 confined to rows {0,2} or {1,3}.
    auto ccs = run_signature_campaign(
        base_config("Midori64-MC", RedundancyKind::kSignatureCcs, model));
    CHECK(ccs.trials_run == uint64_t(65536) * 120);
    CHECK(ccs.undetected == uint64_t(65536) * 24);
    CHECK(ccs.detection_rate() == doctest::Approx(0.8));

    auto inter = run_signature_campaign(
        base_config("Midori64-MC", RedundancyKind::kSignatureInterleaved, model));
    CHECK(inter.undetected == uint64_t(65536) * 8);
    CHECK(inter.detection_rate() == doctest::Approx(112.0 / 120.0));
}

TEST_CASE("signature campaigns reject other targets") {
    FaultModel model{FaultKind::kSingleBit};
    model.target = FaultTarget::kBothIdentical;
    CHECK_THROWS_AS(
        run_signature_campaign(base_config("LED", RedundancyKind::kSignatureCcs, model)),
        std::invalid_argument);
    CHECK_THROWS_AS(
        run_redundancy_campaign(base_config("LED", RedundancyKind::kSignatureCcs, model)),
        std::invalid_argument);
}

TEST_CASE("naive duplication never sees identical faults") {
    FaultModel model{FaultKind::kSingleNibble};
    model.target = FaultTarget::kBothIdentical;
    const auto r = run_redundancy_campaign(
        base_config("Midori64-MC", RedundancyKind::kSpatialNaive, model));
    CHECK(r.trials_run == uint64_t(65536) * 60);
    CHECK(r.detected == 0);
    CHECK(r.detection_rate() == doctest::Approx(0.0));
    REQUIRE(r.undetected_exemplars.size() == 10);
    for (const auto& e : r.undetected_exemplars) {
        CHECK(e.fault_original == e.fault_redundant);
    }
}

TEST_CASE("any scheme catches a fault on one register only") {
    FaultModel model{FaultKind::kSingleBit};
    model.target = FaultTarget::kOriginalOnly;
    for (RedundancyKind kind : {RedundancyKind::kSpatialNaive, RedundancyKind::kTimeRecompute,
                                RedundancyKind::kSpatialFst}) {
        const auto r = run_redundancy_campaign(base_config("LED", kind, model));
        CAPTURE(static_cast<int>(kind));
        CHECK(r.undetected == 0);
    }
    model.target = FaultTarget::kRedundantOnly;
    const auto r = run_redundancy_campaign(
        base_config("LED", RedundancyKind::kSpatialFst, model));
    CHECK(r.undetected == 0);
}

TEST_CASE("FST fixed points: enumeration matches the kernel oracle") {
    SUBCASE("identity fixes everything") {
        const MdsMatrix id("I4", gf16_aes_nibble(),
                           {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
        CHECK(fst_fixed_points(id).size() == 65536);
    }
    SUBCASE("LED fixes only the zero column") {
        const auto fp = fst_fixed_points(catalog_get("LED"));
        REQUIRE(fp.size() == 1);
        CHECK(pack_column(fp[0]) == 0);
        CHECK(packed_sorted(fp) == kernel_fixed_points(catalog_get("LED")));
    }
    SUBCASE("Midori64-MC fixes the zero-sum columns") {
        const MdsMatrix mc = catalog_get("Midori64-MC");
        const auto fp = fst_fixed_points(mc);
        CHECK(fp.size() == 4096);  // one nibble determined by the other three
        const auto oracle = kernel_fixed_points(mc);
        CHECK(packed_sorted(fp) == oracle);
        for (const auto& c : fp) {
            CHECK((c[0].value() ^ c[1].value() ^ c[2].value() ^ c[3].value()) == 0);
        }
    }
    SUBCASE("KLEIN fixes the constant columns") {
        const auto fp = fst_fixed_points(catalog_get("KLEIN"));
        CHECK(fp.size() == 16);
        CHECK(packed_sorted(fp) == kernel_fixed_points(catalog_get("KLEIN")));
    }
    SUBCASE("byte-wide column spaces are out of enumeration reach") {
        CHECK_THROWS_AS(fst_fixed_points(catalog_get("KLEIN-byte")), CapabilityError);
    }
}

TEST_CASE("FST under identical faults misses exactly the fixed points") {
    SUBCASE("LED: no nonzero fixed points, perfect detection") {
        FaultModel model{FaultKind::kSingleNibble};
        model.target = FaultTarget::kBothIdentical;
        const auto r = run_redundancy_campaign(
            base_config("LED", RedundancyKind::kSpatialFst, model));
        CHECK(r.undetected == 0);
        CHECK(r.detection_rate() == doctest::Approx(1.0));
    }
    SUBCASE("Midori64-MC as its own mapping: same-position bit pairs collide") {
        FaultModel model{FaultKind::kMultiBit};
        model.multi_bits = 2;
        model.target = FaultTarget::kBothIdentical;
        auto cfg = base_config("Midori64-MC", RedundancyKind::kSpatialFst, model);
        cfg.max_exemplars = 24;
        const auto r = run_redundancy_campaign(cfg);

        // fault space: 120 masks; fixed points with two set bits: one bit
        // position in two of the four rows -> 4 * C(4,2) = 24
        CHECK(r.trials_run == uint64_t(65536) * 120);
        CHECK(r.undetected == uint64_t(65536) * 24);

        std::set<uint32_t> fixed2;
        for (const auto& c : fst_fixed_points(catalog_get("Midori64-MC"))) {
            const uint32_t p = pack_column(c);
            if (std::popcount(p) == 2) fixed2.insert(p);
        }
        REQUIRE(fixed2.size() == 24);
        // trial order is input-major, so the first 24 undetected trials are
        // the 24 colliding faults on input 0
        std::set<uint32_t> seen;
        for (const auto& e : r.undetected_exemplars) {
            CHECK(e.input == 0);
            CHECK(e.fault_original == e.fault_redundant);
            CHECK(fixed2.count(e.fault_original) == 1);
            seen.insert(e.fault_original);
        }
        CHECK(seen == fixed2);
    }
}

TEST_CASE("independent faults detect at least as well as identical ones under FST") {
    FaultModel model{FaultKind::kMultiBit};
    model.multi_bits = 2;
    model.target = FaultTarget::kBothIdentical;
    const auto identical = run_redundancy_campaign(
        base_config("Midori64-MC", RedundancyKind::kSpatialFst, model));
    model.target = FaultTarget::kBothIndependent;
    const auto independent = run_redundancy_campaign(
        base_config("Midori64-MC", RedundancyKind::kSpatialFst, model));
    CHECK(independent.detection_rate() >= identical.detection_rate());
}

TEST_CASE("time redundancy survives single-bit collisions at the expected rate") {
    FaultModel model{FaultKind::kSingleBit};
    model.target = FaultTarget::kBothIndependent;
    auto cfg = base_config("Midori64-MC", RedundancyKind::kTimeRecompute, model);
    cfg.trials = 100000;
    cfg.seed = 11;
    const auto r = run_redundancy_campaign(cfg);
    // collision iff both passes draw the same of 16 bit flips
    const double p = 15.0 / 16.0;
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(r.faults_injected));
    CHECK(std::abs(r.detection_rate() - p) <= 3.0 * sigma);
}

TEST_CASE("stuck-at faults collide on plain duplication but not on FST") {
    FaultModel model{FaultKind::kBiasedStuck};
    model.stuck_value = 0xF;
    model.stuck_width = 4;
    model.target = FaultTarget::kBothIdentical;

    const auto naive = run_redundancy_campaign(
        base_config("Midori64-MC", RedundancyKind::kSpatialNaive, model));
    CHECK(naive.faults_injected > 0);
    CHECK(naive.trials_run == uint64_t(65536) * 4);
    // forcing a window that already holds 0xF is not an injection
    CHECK(naive.trials_run - naive.faults_injected == uint64_t(4096) * 4);
    CHECK(naive.detection_rate() == doctest::Approx(0.0));

    const auto recompute = run_redundancy_campaign(
        base_config("Midori64-MC", RedundancyKind::kTimeRecompute, model));
    CHECK(recompute.detection_rate() == doctest::Approx(0.0));

    const auto fst = run_redundancy_campaign(
        base_config("LED", RedundancyKind::kSpatialFst, model));
    CHECK(fst.detection_rate() == doctest::Approx(1.0));
}

TEST_CASE("campaigns are reproducible and worker-count independent") {
    FaultModel model{FaultKind::kSingleNibble};
    model.target = FaultTarget::kBothIndependent;
    auto cfg = base_config("LED", RedundancyKind::kSpatialFst, model);
    cfg.trials = 50000;
    cfg.seed = 1234;

    const auto a = run_redundancy_campaign(cfg);
    const auto b = run_redundancy_campaign(cfg);
    CHECK(render_report_records(a) == render_report_records(b));

    cfg.workers = 4;
    const auto c = run_redundancy_campaign(cfg);
    CHECK(render_report_records(a) == render_report_records(c));

    // exhaustive runs are also partition-independent
    auto cfg2 = base_config("Midori64-MC", RedundancyKind::kSpatialNaive,
                            [] {
                                FaultModel m{FaultKind::kSingleNibble};
                                m.target = FaultTarget::kBothIdentical;
                                return m;
                            }());
    const auto d = run_redundancy_campaign(cfg2);
    cfg2.workers = 3;
    const auto e = run_redundancy_campaign(cfg2);
    CHECK(render_report_records(d) == render_report_records(e));
}

TEST_CASE("exhaustive campaigns respect the enumeration cap") {
    auto cfg = base_config("KLEIN-byte", RedundancyKind::kSpatialNaive,
                           FaultModel{FaultKind::kSingleBit, FaultTarget::kBothIdentical});
    CHECK_THROWS_AS(run_redundancy_campaign(cfg), CapabilityError);
    cfg.trials = 10000;  // sampled mode is fine
    const auto r = run_redundancy_campaign(cfg);
    CHECK(r.trials_run == 10000);
    CHECK(r.detection_rate() == doctest::Approx(0.0));
}

TEST_CASE("FST validates its mapping") {
    FaultModel model{FaultKind::kSingleNibble};
    model.target = FaultTarget::kBothIdentical;
    auto cfg = base_config("LED", RedundancyKind::kSpatialFst, model);
    cfg.scheme.w = MdsMatrix("singular", gf16_aes_nibble(),
                             {{1, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
    CHECK_THROWS_AS(run_redundancy_campaign(cfg), std::invalid_argument);

    cfg.scheme.w = catalog_get("KLEIN");  // wrong field
    CHECK_THROWS_AS(run_redundancy_campaign(cfg), std::invalid_argument);

    // explicit W distinct from the datapath matrix works
    cfg.scheme.w = catalog_get("Midori64-MC");
    const auto r = run_redundancy_campaign(cfg);
    CHECK(r.trials_run == uint64_t(65536) * 60);
    // single-nibble differences never satisfy the zero-sum fixed-point
    // condition of Midori64-MC, so detection stays perfect
    CHECK(r.undetected == 0);
}
