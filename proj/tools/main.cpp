// mced: verification and measurement toolkit for error-detecting
// MixColumn implementations in lightweight block ciphers.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/capability error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mced/fault.hpp"
#include "mced/io.hpp"
#include "mced/matrix.hpp"
#include "mced/signature.hpp"
#include "mced/xor_network.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

// Enumerating the column space is reserved for narrow columns.
constexpr int kExhaustiveColumnBits = 20;

int cmd_matrices(const std::string& selector, const std::string& format) {
    const mced::MdsMatrix m = mced::resolve_matrix(selector);
    const mced::MdsReport r = mced::classify(m);
    std::cout << (format == "records" ? mced::render_classification_records(m.name(), r)
                                      : mced::render_classification_text(m.name(), r));
    return kExitOk;
}

int cmd_gates(const std::string& selector, const std::string& format) {
    std::vector<mced::GateCount> rows;
    if (selector == "all") {
        for (const std::string name : {"Midori64-MC", "Midori64-MB", "LED", "KLEIN"}) {
            rows.push_back(mced::gate_cost_report(mced::catalog_get(name)));
        }
    } else {
        rows.push_back(mced::gate_cost_report(mced::resolve_matrix(selector)));
    }
    std::cout << (format == "records" ? mced::render_gates_records(rows)
                                      : mced::render_gates_text(rows));
    return kExitOk;
}

int cmd_signatures(const std::string& selector, const std::string& kind_s, bool exhaustive,
                   uint64_t sample, uint64_t seed) {
    const mced::MdsMatrix m = mced::resolve_matrix(selector);
    mced::SignatureKind kind;
    if (kind_s == "ccs") {
        kind = mced::SignatureKind::kCcs;
    } else if (kind_s == "interleaved") {
        kind = mced::SignatureKind::kInterleaved;
    } else {
        throw std::invalid_argument("signature kind must be 'ccs' or 'interleaved'");
    }
    const mced::SignatureScheme scheme = mced::derive_scheme(m, kind);

    const int column_bits = static_cast<int>(m.n()) * m.field().degree();
    uint64_t total = 0, mismatches = 0;

    auto check_one = [&](uint32_t packed) {
        const mced::StateColumn in = mced::unpack_column(m.field(), m.n(), packed);
        const mced::StateColumn out = mced::mix_column(m, in);
        const auto result = mced::check(scheme, in, out);
        ++total;
        if (result.detected_mismatch) {
            ++mismatches;
            if (mismatches <= 10) {
                std::cout << "mismatch input=" << in.to_string()
                          << " predicted=" << result.predicted.to_string()
                          << " actual=" << result.actual.to_string() << "\n";
            }
        }
    };

    if (exhaustive) {
        if (column_bits > kExhaustiveColumnBits) {
            throw mced::CapabilityError("exhaustive verification over 2^" +
                                        std::to_string(column_bits) +
                                        " columns is not feasible; use --sample N");
        }
        const uint64_t space = uint64_t(1) << column_bits;
        for (uint64_t x = 0; x < space; ++x) check_one(static_cast<uint32_t>(x));
    } else {
        const uint32_t mask =
            static_cast<uint32_t>((uint64_t(1) << column_bits) - 1);
        for (uint64_t t = 0; t < sample; ++t) {
            mced::TrialRng rng(seed, t);
            check_one(static_cast<uint32_t>(rng.next()) & mask);
        }
    }

    std::cout << (total - mismatches) << "/" << total << " ok\n";
    return mismatches == 0 ? kExitOk : kExitVerificationFailure;
}

int cmd_faultsim(const mced::CampaignConfig& cfg, const std::string& format) {
    const mced::CampaignReport report = mced::run_campaign(cfg);
    std::cout << (format == "records" ? mced::render_report_records(report)
                                      : mced::render_report_text(report));
    return kExitOk;  // a poor detection rate is a finding, not an error
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Error-detecting MixColumn toolkit: matrix criteria, XOR-gate costs, "
                 "signature verification, fault-injection campaigns"};
    app.require_subcommand(1);

    std::string m_selector, m_format = "text";
    auto* matrices = app.add_subcommand("matrices", "Branch number / MDS / involutory criteria");
    matrices->add_option("selector", m_selector, "catalog name or matrix file")->required();
    matrices->add_option("--format", m_format)->check(CLI::IsMember({"text", "records"}));

    std::string g_selector = "all", g_format = "text";
    auto* gates = app.add_subcommand("gates", "XOR-gate costs of MixColumn and signature predictors");
    gates->add_option("selector", g_selector, "catalog name, matrix file, or 'all'");
    gates->add_option("--format", g_format)->check(CLI::IsMember({"text", "records"}));

    std::string s_selector, s_kind;
    bool s_exhaustive = false;
    uint64_t s_sample = 0, s_seed = 0;
    auto* signatures =
        app.add_subcommand("signatures", "Verify predicted signatures against fault-free outputs");
    signatures->add_option("selector", s_selector)->required();
    signatures->add_option("kind", s_kind, "ccs or interleaved")->required();
    auto* ex_flag = signatures->add_flag("--exhaustive", s_exhaustive, "sweep every input column");
    signatures->add_option("--sample", s_sample, "number of random input columns")
        ->excludes(ex_flag);
    signatures->add_option("--seed", s_seed);

    std::string f_config, f_matrix, f_scheme, f_model, f_target = "original-only";
    std::string f_trials = "exhaustive", f_w, f_format = "text";
    uint64_t f_seed = 0, f_max_ex = 10;
    int f_workers = 1;
    auto* faultsim = app.add_subcommand("faultsim", "Run a fault-injection campaign");
    auto* cfg_opt = faultsim->add_option("--config", f_config, "campaign config file");
    auto* fm = faultsim->add_option("--matrix", f_matrix)->excludes(cfg_opt);
    faultsim->add_option("--scheme", f_scheme)->excludes(cfg_opt)->needs(fm);
    faultsim->add_option("--model", f_model)->excludes(cfg_opt)->needs(fm);
    faultsim->add_option("--target", f_target)->excludes(cfg_opt);
    faultsim->add_option("--trials", f_trials, "a count or 'exhaustive'")->excludes(cfg_opt);
    faultsim->add_option("--w-matrix", f_w, "FST mapping matrix")->excludes(cfg_opt);
    faultsim->add_option("--seed", f_seed)->excludes(cfg_opt);
    faultsim->add_option("--max-exemplars", f_max_ex)->excludes(cfg_opt);
    faultsim->add_option("--workers", f_workers)->excludes(cfg_opt);
    faultsim->add_option("--format", f_format)->check(CLI::IsMember({"text", "records"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (matrices->parsed()) return cmd_matrices(m_selector, m_format);
        if (gates->parsed()) return cmd_gates(g_selector, g_format);
        if (signatures->parsed()) {
            if (!s_exhaustive && s_sample == 0) {
                throw std::invalid_argument("choose --exhaustive or --sample N");
            }
            return cmd_signatures(s_selector, s_kind, s_exhaustive, s_sample, s_seed);
        }
        if (faultsim->parsed()) {
            mced::CampaignConfig cfg = [&] {
                if (!f_config.empty()) return mced::load_campaign_config(f_config);
                if (f_matrix.empty() || f_scheme.empty() || f_model.empty()) {
                    throw std::invalid_argument(
                        "faultsim needs --config or --matrix/--scheme/--model");
                }
                std::vector<std::pair<std::string, std::string>> kv = {
                    {"matrix", f_matrix},   {"scheme", f_scheme},
                    {"model", f_model},     {"target", f_target},
                    {"trials", f_trials},   {"seed", std::to_string(f_seed)},
                    {"max_exemplars", std::to_string(f_max_ex)},
                    {"workers", std::to_string(f_workers)},
                };
                if (!f_w.empty()) kv.emplace_back("w_matrix", f_w);
                return mced::campaign_config_from_kv(kv);
            }();
            return cmd_faultsim(cfg, f_format);
        }
    } catch (const mced::CapabilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
