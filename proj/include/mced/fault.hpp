#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mced/matrix.hpp"
#include "mced/signature.hpp"

namespace mced {

/// Deterministic per-trial random stream: the pair (seed, trial index)
/// fully determines every draw, so campaigns can be partitioned across
/// workers without changing results.
class TrialRng {
public:
    TrialRng(uint64_t seed, uint64_t trial);
    uint64_t next();
    uint32_t below(uint32_t bound);  // uniform in [0, bound), bound >= 1

private:
    uint64_t state_;
};

enum class FaultKind {
    kSingleBit,     // flip one bit
    kSingleNibble,  // XOR one 4-bit aligned window with a nonzero value
    kSingleByte,    // XOR one 8-bit aligned window with a nonzero value
    kMultiBit,      // flip exactly k distinct bits
    kBiasedStuck,   // force one aligned window to a fixed value
};

/// Where faults land in a redundant datapath.
enum class FaultTarget {
    kOriginalOnly,
    kRedundantOnly,
    kBothIdentical,   // the same XOR difference on both registers
    kBothIndependent  // independent draws per register
};

struct FaultModel {
    FaultKind kind = FaultKind::kSingleBit;
    FaultTarget target = FaultTarget::kOriginalOnly;
    int multi_bits = 2;        // kMultiBit only
    unsigned stuck_value = 0;  // kBiasedStuck only
    int stuck_width = 4;       // kBiasedStuck window width, <= element width

    std::string kind_string() const;
    std::string target_string() const;
};

/// XOR difference actually applied to a register.
struct FaultDescriptor {
    uint32_t bits = 0;
};

struct FaultedColumn {
    StateColumn column;
    FaultDescriptor descriptor;
};

/// Applies one fault drawn from `model` (ignoring its target) to a column.
FaultedColumn apply_fault(const StateColumn& col, const FaultModel& model, TrialRng& rng);

enum class RedundancyKind {
    kSignatureCcs,
    kSignatureInterleaved,
    kSpatialNaive,    // registers (x, x), compare
    kTimeRecompute,   // two sequential passes, compare
    kSpatialFst,      // registers (x, W(x)), compare W(x') with x''
};

struct RedundancyScheme {
    RedundancyKind kind = RedundancyKind::kSignatureCcs;
    std::optional<MdsMatrix> w;  // kSpatialFst mapping; defaults to the campaign matrix

    std::string to_string() const;
};

struct CampaignConfig {
    MdsMatrix matrix;
    RedundancyScheme scheme;
    FaultModel model;
    std::optional<uint64_t> trials;  // nullopt = exhaustive over input x fault space
    uint64_t seed = 0;
    size_t max_exemplars = 10;
    int workers = 1;
};

struct UndetectedExemplar {
    uint64_t trial = 0;
    uint32_t input = 0;
    uint32_t fault_original = 0;   // XOR difference on the original register
    uint32_t fault_redundant = 0;  // XOR difference on the redundant register
};

struct CampaignReport {
    std::string matrix_name;
    std::string scheme_name;
    std::string model_name;
    std::string target_name;
    bool exhaustive = false;
    uint64_t seed = 0;

    uint64_t trials_run = 0;
    uint64_t faults_injected = 0;  // trials whose applied difference was nonzero
    uint64_t detected = 0;
    uint64_t undetected = 0;
    std::vector<UndetectedExemplar> undetected_exemplars;

    double detection_rate() const;  // detected / faults_injected; 1.0 when nothing injected
};

/// Signature-protected MixColumn under fault: per trial, draw an input
/// column, mix it, corrupt the output register, and compare the predicted
/// signature against the one recomputed from the corrupted output.
/// Requires a signature scheme kind and target kOriginalOnly (the checker
/// has a single output register; the predictor taps the inputs).
CampaignReport run_signature_campaign(const CampaignConfig& cfg);

/// Duplication-style countermeasures under fault. Exhaustive mode
/// enumerates input x fault pairs (the redundant-side fault of
/// kBothIndependent is drawn from the trial stream); sampled mode draws
/// everything per trial.
CampaignReport run_redundancy_campaign(const CampaignConfig& cfg);

/// Dispatches on the scheme kind.
CampaignReport run_campaign(const CampaignConfig& cfg);

/// All columns c with W(c) = c, found by exhaustive enumeration of the
/// packed column space (capability error beyond the enumeration cap).
/// Includes the zero column. Under a linear W these are exactly the
/// identical-fault differences that a spatial-FST check cannot see.
std::vector<StateColumn> fst_fixed_points(const MdsMatrix& w);

}  // namespace mced
