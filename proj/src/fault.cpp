#include "mced/fault.hpp"

#include <algorithm>
#include <array>
#include <future>
#include <sstream>
#include <stdexcept>

namespace mced {

TrialRng::TrialRng(uint64_t seed, uint64_t trial)
    : state_((seed + 0x9E3779B97F4A7C15ULL) ^
             (trial * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL)) {
    (void)next();
}

uint64_t TrialRng::next() {
    // splitmix64
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

uint32_t TrialRng::below(uint32_t bound) {
    return static_cast<uint32_t>(
        (static_cast<uint64_t>(static_cast<uint32_t>(next())) * bound) >> 32);
}

std::string FaultModel::kind_string() const {
    switch (kind) {
        case FaultKind::kSingleBit: return "single-bit";
        case FaultKind::kSingleNibble: return "single-nibble";
        case FaultKind::kSingleByte: return "single-byte";
        case FaultKind::kMultiBit: return "multi-bit:" + std::to_string(multi_bits);
        case FaultKind::kBiasedStuck: {
            std::ostringstream os;
            os << "biased-stuck:0x" << std::hex << std::uppercase << stuck_value << std::dec << ":"
               << stuck_width;
            return os.str();
        }
    }
    return "?";
}

std::string FaultModel::target_string() const {
    switch (target) {
        case FaultTarget::kOriginalOnly: return "original-only";
        case FaultTarget::kRedundantOnly: return "redundant-only";
        case FaultTarget::kBothIdentical: return "both-identical";
        case FaultTarget::kBothIndependent: return "both-independent";
    }
    return "?";
}

std::string RedundancyScheme::to_string() const {
    switch (kind) {
        case RedundancyKind::kSignatureCcs: return "signature-ccs";
        case RedundancyKind::kSignatureInterleaved: return "signature-interleaved";
        case RedundancyKind::kSpatialNaive: return "spatial-naive";
        case RedundancyKind::kTimeRecompute: return "time-recompute";
        case RedundancyKind::kSpatialFst:
            return "spatial-fst(" + (w ? w->name() : std::string("self")) + ")";
    }
    return "?";
}

double CampaignReport::detection_rate() const {
    if (faults_injected == 0) return 1.0;
    return static_cast<double>(detected) / static_cast<double>(faults_injected);
}

namespace {

constexpr uint64_t kCampaignCap = uint64_t(1) << 24;

uint64_t binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    uint64_t r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// One register's fault space over a packed column of `width` bits.
struct FaultSpace {
    FaultModel model;
    int width;
    std::vector<uint32_t> multi_masks;  // kMultiBit, enumeration mode only

    FaultSpace(const FaultModel& m, int w) : model(m), width(w) { validate(); }

    // Ascending-mask combination order via Gosper's hack. Only needed for
    // exhaustive campaigns, after the enumeration cap has been checked.
    void materialize_multi_masks() {
        if (model.kind != FaultKind::kMultiBit || !multi_masks.empty()) return;
        multi_masks.reserve(size());
        uint64_t v = (uint64_t(1) << model.multi_bits) - 1;
        const uint64_t limit = uint64_t(1) << width;
        while (v < limit) {
            multi_masks.push_back(static_cast<uint32_t>(v));
            const uint64_t c = v & (~v + 1);
            const uint64_t r = v + c;
            v = (((r ^ v) >> 2) / c) | r;
        }
    }

    void validate() const {
        switch (model.kind) {
            case FaultKind::kSingleBit:
                break;
            case FaultKind::kSingleNibble:
                if (width % 4 != 0) throw std::invalid_argument("single-nibble: width not nibble-aligned");
                break;
            case FaultKind::kSingleByte:
                if (width < 8 || width % 8 != 0) {
                    throw std::invalid_argument("single-byte: column narrower than a byte");
                }
                break;
            case FaultKind::kMultiBit:
                if (model.multi_bits < 1 || model.multi_bits > width) {
                    throw std::invalid_argument("multi-bit: flip count out of range");
                }
                break;
            case FaultKind::kBiasedStuck:
                if (model.stuck_width < 1 || model.stuck_width > 8 ||
                    width % model.stuck_width != 0) {
                    throw std::invalid_argument("biased-stuck: bad window width");
                }
                if (model.stuck_value >= (1u << model.stuck_width)) {
                    throw std::invalid_argument("biased-stuck: value wider than window");
                }
                break;
        }
    }

    uint64_t size() const {
        switch (model.kind) {
            case FaultKind::kSingleBit: return width;
            case FaultKind::kSingleNibble: return uint64_t(width / 4) * 15;
            case FaultKind::kSingleByte: return uint64_t(width / 8) * 255;
            case FaultKind::kMultiBit: return binomial(width, model.multi_bits);
            case FaultKind::kBiasedStuck: return uint64_t(width / model.stuck_width);
        }
        return 0;
    }

    bool is_stuck() const { return model.kind == FaultKind::kBiasedStuck; }

    // XOR kinds: the index-th difference mask.
    uint32_t xor_mask_at(uint64_t index) const {
        switch (model.kind) {
            case FaultKind::kSingleBit:
                return uint32_t(1) << index;
            case FaultKind::kSingleNibble:
                return static_cast<uint32_t>(1 + index % 15) << (4 * (index / 15));
            case FaultKind::kSingleByte:
                return static_cast<uint32_t>(1 + index % 255) << (8 * (index / 255));
            case FaultKind::kMultiBit:
                return multi_masks[index];
            case FaultKind::kBiasedStuck:
                break;
        }
        throw std::logic_error("xor_mask_at: stuck faults have no fixed mask");
    }

    uint32_t draw_xor(TrialRng& rng) const {
        switch (model.kind) {
            case FaultKind::kSingleBit:
                return uint32_t(1) << rng.below(width);
            case FaultKind::kSingleNibble:
                return static_cast<uint32_t>(1 + rng.below(15)) << (4 * rng.below(width / 4));
            case FaultKind::kSingleByte:
                return static_cast<uint32_t>(1 + rng.below(255)) << (8 * rng.below(width / 8));
            case FaultKind::kMultiBit: {
                uint32_t mask = 0;
                int placed = 0;
                while (placed < model.multi_bits) {
                    const uint32_t bit = uint32_t(1) << rng.below(width);
                    if (!(mask & bit)) {
                        mask |= bit;
                        ++placed;
                    }
                }
                return mask;
            }
            case FaultKind::kBiasedStuck:
                break;
        }
        throw std::logic_error("draw_xor: stuck faults have no fixed mask");
    }

    int stuck_pos_at(uint64_t index) const { return static_cast<int>(index); }
    int draw_stuck_pos(TrialRng& rng) const { return rng.below(width / model.stuck_width); }

    // Difference that forcing window `pos` to the stuck value makes on `reg`.
    uint32_t stuck_diff(uint32_t reg, int pos) const {
        const int w = model.stuck_width;
        const uint32_t mask = (w >= 32) ? 0xFFFFFFFFu : ((uint32_t(1) << w) - 1);
        const uint32_t cur = (reg >> (pos * w)) & mask;
        return (cur ^ model.stuck_value) << (pos * w);
    }
};

struct Tally {
    uint64_t trials = 0;
    uint64_t injected = 0;
    uint64_t detected = 0;
    uint64_t undetected = 0;
    std::vector<UndetectedExemplar> exemplars;
};

void merge_into(Tally& into, const Tally& from, size_t max_exemplars) {
    into.trials += from.trials;
    into.injected += from.injected;
    into.detected += from.detected;
    into.undetected += from.undetected;
    for (const auto& e : from.exemplars) {
        if (into.exemplars.size() >= max_exemplars) break;
        into.exemplars.push_back(e);
    }
}

// Packed signature predictor/compactor tables.
struct PackedSignature {
    SignatureKind kind;
    size_t n;
    int m;
    uint32_t elem_mask;
    std::vector<std::vector<uint8_t>> pred;  // [part*n + j][v]

    PackedSignature(const SignatureScheme& s)
        : kind(s.kind()), n(s.matrix().n()), m(s.matrix().field().degree()),
          elem_mask(s.matrix().field().element_mask()) {
        const FieldSpec& f = s.matrix().field();
        auto build = [&](const std::vector<GFElement>& coeffs) {
            for (size_t j = 0; j < n; ++j) {
                std::vector<uint8_t> t(f.size());
                for (unsigned v = 0; v < f.size(); ++v) {
                    t[v] = static_cast<uint8_t>(
                        gf_mul_raw(coeffs[j].value(), v, m, f.reduction_poly()));
                }
                pred.push_back(std::move(t));
            }
        };
        if (kind == SignatureKind::kCcs) {
            build(s.coefficients());
        } else {
            build(s.even_coefficients());
            build(s.odd_coefficients());
        }
    }

    // predicted parts from the input column
    std::array<uint8_t, 2> predict(uint32_t x) const {
        std::array<uint8_t, 2> out{0, 0};
        const size_t parts = (kind == SignatureKind::kCcs) ? 1 : 2;
        for (size_t p = 0; p < parts; ++p) {
            uint8_t acc = 0;
            for (size_t j = 0; j < n; ++j) acc ^= pred[p * n + j][(x >> (j * m)) & elem_mask];
            out[p] = acc;
        }
        return out;
    }

    // recomputed parts from an output column
    std::array<uint8_t, 2> actual(uint32_t y) const {
        std::array<uint8_t, 2> out{0, 0};
        if (kind == SignatureKind::kCcs) {
            uint8_t acc = 0;
            for (size_t j = 0; j < n; ++j) acc ^= (y >> (j * m)) & elem_mask;
            out[0] = acc;
        } else {
            for (size_t j = 0; j < n; ++j) {
                out[j % 2] ^= (y >> (j * m)) & elem_mask;
            }
        }
        return out;
    }

    bool mismatch(uint32_t x, uint32_t y) const { return predict(x) != actual(y); }
};

struct Engine {
    const CampaignConfig& cfg;
    PackedLinearMap mix;
    std::optional<PackedLinearMap> wmap;
    std::optional<PackedSignature> sig;
    FaultSpace space;
    uint64_t input_space;
    uint64_t total_trials;
    bool exhaustive;

    Engine(const CampaignConfig& c)
        : cfg(c),
          mix(c.matrix),
          space(c.model, static_cast<int>(c.matrix.n()) * c.matrix.field().degree()),
          input_space(uint64_t(1) << (c.matrix.n() * c.matrix.field().degree())),
          exhaustive(!c.trials.has_value()) {
        const bool is_sig = c.scheme.kind == RedundancyKind::kSignatureCcs ||
                            c.scheme.kind == RedundancyKind::kSignatureInterleaved;
        if (is_sig) {
            if (c.model.target != FaultTarget::kOriginalOnly) {
                throw std::invalid_argument(
                    "signature campaigns inject at the single output register; "
                    "use target original-only");
            }
            sig.emplace(derive_scheme(
                c.matrix, c.scheme.kind == RedundancyKind::kSignatureCcs
                              ? SignatureKind::kCcs
                              : SignatureKind::kInterleaved));
        }
        if (c.scheme.kind == RedundancyKind::kSpatialFst) {
            const MdsMatrix& w = c.scheme.w ? *c.scheme.w : c.matrix;
            if (w.field() != c.matrix.field() || w.n() != c.matrix.n()) {
                throw std::invalid_argument("spatial-fst: W must match the matrix dimensions/field");
            }
            if (!is_invertible(w)) {
                throw std::invalid_argument("spatial-fst: W must be invertible");
            }
            wmap.emplace(w);
        }
        if (exhaustive) {
            // Overflow-safe: input_space alone can hit 2^32.
            if (input_space > kCampaignCap || input_space * space.size() > kCampaignCap) {
                throw CapabilityError(
                    "exhaustive campaign would enumerate " +
                    std::to_string(input_space * space.size()) + " input x fault pairs (cap " +
                    std::to_string(kCampaignCap) + "); use a sampled trial count");
            }
            total_trials = input_space * space.size();
            space.materialize_multi_masks();
        } else {
            total_trials = *c.trials;
        }
    }

    Tally run_range(uint64_t t0, uint64_t t1) const {
        Tally tally;
        const uint32_t in_mask = mix.input_mask();
        const uint64_t fault_count = space.size();
        for (uint64_t t = t0; t < t1; ++t) {
            TrialRng rng(cfg.seed, t);
            uint32_t x;
            uint64_t fidx = 0;
            if (exhaustive) {
                x = static_cast<uint32_t>(t / fault_count);
                fidx = t % fault_count;
            } else {
                x = static_cast<uint32_t>(rng.next()) & in_mask;
            }

            const uint32_t out = mix.apply(x);
            uint32_t reg1 = out;
            uint32_t reg2 = out;
            if (wmap) reg2 = wmap->apply(out);

            uint32_t e1 = 0, e2 = 0;
            const FaultTarget target = cfg.model.target;
            if (space.is_stuck()) {
                const int pos = exhaustive ? space.stuck_pos_at(fidx) : space.draw_stuck_pos(rng);
                switch (target) {
                    case FaultTarget::kOriginalOnly:
                        e1 = space.stuck_diff(reg1, pos);
                        break;
                    case FaultTarget::kRedundantOnly:
                        e2 = space.stuck_diff(reg2, pos);
                        break;
                    case FaultTarget::kBothIdentical:
                        e1 = space.stuck_diff(reg1, pos);
                        e2 = e1;
                        break;
                    case FaultTarget::kBothIndependent:
                        e1 = space.stuck_diff(reg1, pos);
                        e2 = space.stuck_diff(reg2, space.draw_stuck_pos(rng));
                        break;
                }
            } else {
                const uint32_t primary =
                    exhaustive ? space.xor_mask_at(fidx) : space.draw_xor(rng);
                switch (target) {
                    case FaultTarget::kOriginalOnly:
                        e1 = primary;
                        break;
                    case FaultTarget::kRedundantOnly:
                        e2 = primary;
                        break;
                    case FaultTarget::kBothIdentical:
                        e1 = e2 = primary;
                        break;
                    case FaultTarget::kBothIndependent:
                        e1 = primary;
                        e2 = space.draw_xor(rng);
                        break;
                }
            }

            ++tally.trials;
            if ((e1 | e2) == 0) continue;  // stuck window already held the value
            ++tally.injected;

            bool det;
            if (sig) {
                det = sig->mismatch(x, reg1 ^ e1);
            } else if (wmap) {
                det = wmap->apply(reg1 ^ e1) != (reg2 ^ e2);
            } else {
                det = (reg1 ^ e1) != (reg2 ^ e2);
            }

            if (det) {
                ++tally.detected;
            } else {
                ++tally.undetected;
                if (tally.exemplars.size() < cfg.max_exemplars) {
                    tally.exemplars.push_back({t, x, e1, e2});
                }
            }
        }
        return tally;
    }
};

CampaignReport finalize(const Engine& eng, Tally&& tally) {
    CampaignReport r;
    r.matrix_name = eng.cfg.matrix.name();
    r.scheme_name = eng.cfg.scheme.kind == RedundancyKind::kSpatialFst && !eng.cfg.scheme.w
                        ? "spatial-fst(" + eng.cfg.matrix.name() + ")"
                        : eng.cfg.scheme.to_string();
    r.model_name = eng.cfg.model.kind_string();
    r.target_name = eng.cfg.model.target_string();
    r.exhaustive = eng.exhaustive;
    r.seed = eng.cfg.seed;
    r.trials_run = tally.trials;
    r.faults_injected = tally.injected;
    r.detected = tally.detected;
    r.undetected = tally.undetected;
    r.undetected_exemplars = std::move(tally.exemplars);
    return r;
}

CampaignReport run_engine(const CampaignConfig& cfg) {
    Engine eng(cfg);
    const uint64_t total = eng.total_trials;
    const int workers = std::max(1, cfg.workers);

    if (workers == 1 || total < 2) {
        return finalize(eng, eng.run_range(0, total));
    }

    // Contiguous ranges merged in order: identical to the sequential run.
    std::vector<std::future<Tally>> parts;
    const uint64_t chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const uint64_t t0 = std::min<uint64_t>(total, uint64_t(w) * chunk);
        const uint64_t t1 = std::min<uint64_t>(total, t0 + chunk);
        parts.push_back(std::async(std::launch::async,
                                   [&eng, t0, t1] { return eng.run_range(t0, t1); }));
    }
    Tally merged;
    for (auto& p : parts) merge_into(merged, p.get(), cfg.max_exemplars);
    return finalize(eng, std::move(merged));
}

}  // namespace

FaultedColumn apply_fault(const StateColumn& col, const FaultModel& model, TrialRng& rng) {
    if (col.size() == 0) throw std::invalid_argument("apply_fault: empty column");
    const FieldSpec& f = col[0].field();
    const int width = static_cast<int>(col.size()) * f.degree();
    FaultSpace space(model, width);
    const uint32_t packed = pack_column(col);
    uint32_t diff;
    if (space.is_stuck()) {
        diff = space.stuck_diff(packed, space.draw_stuck_pos(rng));
    } else {
        diff = space.draw_xor(rng);
    }
    return FaultedColumn{unpack_column(f, col.size(), packed ^ diff), FaultDescriptor{diff}};
}

CampaignReport run_signature_campaign(const CampaignConfig& cfg) {
    if (cfg.scheme.kind != RedundancyKind::kSignatureCcs &&
        cfg.scheme.kind != RedundancyKind::kSignatureInterleaved) {
        throw std::invalid_argument("run_signature_campaign: scheme is not signature-based");
    }
    return run_engine(cfg);
}

CampaignReport run_redundancy_campaign(const CampaignConfig& cfg) {
    if (cfg.scheme.kind == RedundancyKind::kSignatureCcs ||
        cfg.scheme.kind == RedundancyKind::kSignatureInterleaved) {
        throw std::invalid_argument("run_redundancy_campaign: use run_signature_campaign");
    }
    return run_engine(cfg);
}

CampaignReport run_campaign(const CampaignConfig& cfg) {
    return run_engine(cfg);
}

std::vector<StateColumn> fst_fixed_points(const MdsMatrix& w) {
    const size_t n = w.n();
    const int m = w.field().degree();
    const uint64_t space = uint64_t(1) << (n * m);
    if (space > kCampaignCap) {
        throw CapabilityError("fst_fixed_points: column space of " + std::to_string(space) +
                              " exceeds the enumeration cap");
    }
    PackedLinearMap map(w);
    std::vector<StateColumn> out;
    for (uint64_t c = 0; c < space; ++c) {
        const auto packed = static_cast<uint32_t>(c);
        if (map.apply(packed) == packed) out.push_back(unpack_column(w.field(), n, packed));
    }
    return out;
}

}  // namespace mced
