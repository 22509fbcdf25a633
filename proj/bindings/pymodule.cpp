#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mced/fault.hpp"
#include "mced/io.hpp"
#include "mced/matrix.hpp"
#include "mced/signature.hpp"
#include "mced/xor_network.hpp"

namespace py = pybind11;
using namespace py::literals;

namespace {

std::vector<size_t> term_indices(const mced::XorNetwork& net, size_t output) {
    std::vector<size_t> out;
    const auto& t = net.terms(output);
    for (size_t i = 0; i < net.input_bits(); ++i) {
        if (t[i]) out.push_back(i);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_mced, m) {
    m.doc() = "Error-detecting MixColumn toolkit: finite-field arithmetic, MDS matrix "
              "criteria, signature schemes, XOR-gate costs, fault-injection campaigns";

    py::register_exception<mced::CapabilityError>(m, "CapabilityError");

    py::class_<mced::FieldSpec>(m, "FieldSpec")
        .def(py::init<int, uint16_t>(), "degree"_a, "reduction_poly"_a)
        .def_property_readonly("degree", &mced::FieldSpec::degree)
        .def_property_readonly("reduction_poly", &mced::FieldSpec::reduction_poly)
        .def_property_readonly("size", &mced::FieldSpec::size)
        .def("element", [](const mced::FieldSpec& f, unsigned v) { return mced::GFElement(f, v); },
             "value"_a)
        .def("__eq__", [](const mced::FieldSpec& a, const mced::FieldSpec& b) { return a == b; })
        .def("__repr__", &mced::FieldSpec::to_string);

    m.def("gf16_aes_nibble", &mced::gf16_aes_nibble);
    m.def("gf16_reciprocal", &mced::gf16_reciprocal);
    m.def("gf256_aes", &mced::gf256_aes);

    py::class_<mced::GFElement>(m, "GFElement")
        .def(py::init<const mced::FieldSpec&, unsigned>(), "field"_a, "value"_a)
        .def_property_readonly("value", &mced::GFElement::value)
        .def_property_readonly("field", &mced::GFElement::field)
        .def("__eq__", [](const mced::GFElement& a, const mced::GFElement& b) { return a == b; })
        .def("__repr__",
             [](const mced::GFElement& e) { return "GFElement(0x" + e.to_string() + ")"; });

    m.def("gf_add", &mced::gf_add, "x"_a, "y"_a);
    m.def("gf_mul", &mced::gf_mul, "x"_a, "y"_a);
    m.def("gf_inv", &mced::gf_inv, "x"_a);

    py::class_<mced::BitMatrix>(m, "BitMatrix")
        .def_readonly("dim", &mced::BitMatrix::dim)
        .def_property_readonly("rows",
                               [](const mced::BitMatrix& b) {
                                   return std::vector<unsigned>(b.rows.begin(),
                                                                b.rows.begin() + b.dim);
                               })
        .def("apply", &mced::BitMatrix::apply, "value"_a)
        .def("__eq__", [](const mced::BitMatrix& a, const mced::BitMatrix& b) { return a == b; })
        .def("__repr__", &mced::BitMatrix::to_string);

    m.def("gf_mul_const_expand", &mced::gf_mul_const_expand, "c"_a);
    m.def("identity_bit_matrix", &mced::identity_bit_matrix, "dim"_a);

    py::class_<mced::StateColumn>(m, "StateColumn")
        .def_readonly("entries", &mced::StateColumn::entries)
        .def("__len__", &mced::StateColumn::size)
        .def("__getitem__",
             [](const mced::StateColumn& c, size_t i) {
                 if (i >= c.size()) throw py::index_error();
                 return c[i];
             })
        .def("__eq__", [](const mced::StateColumn& a, const mced::StateColumn& b) { return a == b; })
        .def("__repr__", &mced::StateColumn::to_string);

    m.def("make_column", &mced::make_column, "field"_a, "values"_a);
    m.def("pack_column", &mced::pack_column, "column"_a);
    m.def("unpack_column", &mced::unpack_column, "field"_a, "n"_a, "packed"_a);

    py::class_<mced::MdsMatrix>(m, "MdsMatrix")
        .def(py::init<std::string, const mced::FieldSpec&,
                      const std::vector<std::vector<unsigned>>&>(),
             "name"_a, "field"_a, "rows"_a)
        .def_property_readonly("name", &mced::MdsMatrix::name)
        .def_property_readonly("field", &mced::MdsMatrix::field)
        .def_property_readonly("n", &mced::MdsMatrix::n)
        .def("at", &mced::MdsMatrix::at, "row"_a, "col"_a)
        .def("__eq__", [](const mced::MdsMatrix& a, const mced::MdsMatrix& b) { return a == b; });

    m.def("catalog_get", &mced::catalog_get, "name"_a);
    m.def("catalog_names", &mced::catalog_names);
    m.def("load_matrix_file", &mced::load_matrix_file, "path"_a);
    m.def("resolve_matrix", &mced::resolve_matrix, "selector"_a);

    py::class_<mced::MdsReport>(m, "MdsReport")
        .def_readonly("branch_number", &mced::MdsReport::branch_number)
        .def_readonly("is_mds", &mced::MdsReport::is_mds)
        .def_readonly("is_almost_mds", &mced::MdsReport::is_almost_mds)
        .def_readonly("is_involutory", &mced::MdsReport::is_involutory)
        .def("__repr__", &mced::MdsReport::to_string);

    py::enum_<mced::BranchStrategy>(m, "BranchStrategy")
        .value("AUTO", mced::BranchStrategy::kAuto)
        .value("EXHAUSTIVE", mced::BranchStrategy::kExhaustive)
        .value("WEIGHT_RESTRICTED", mced::BranchStrategy::kWeightRestricted);

    m.def("mix_column", &mced::mix_column, "matrix"_a, "column"_a);
    m.def("mix_state", &mced::mix_state, "matrix"_a, "state"_a);
    m.def("bundle_weight", &mced::bundle_weight, "column"_a);
    m.def("branch_number", &mced::branch_number, "matrix"_a,
          "strategy"_a = mced::BranchStrategy::kAuto);
    m.def("is_involutory", &mced::is_involutory, "matrix"_a);
    m.def("is_invertible", &mced::is_invertible, "matrix"_a);
    m.def("classify", &mced::classify, "matrix"_a, "strategy"_a = mced::BranchStrategy::kAuto);

    py::enum_<mced::SignatureKind>(m, "SignatureKind")
        .value("CCS", mced::SignatureKind::kCcs)
        .value("INTERLEAVED", mced::SignatureKind::kInterleaved);

    py::class_<mced::SignatureValue>(m, "SignatureValue")
        .def_readonly("parts", &mced::SignatureValue::parts)
        .def("__eq__",
             [](const mced::SignatureValue& a, const mced::SignatureValue& b) { return a == b; })
        .def("__repr__", &mced::SignatureValue::to_string);

    py::class_<mced::SignatureScheme>(m, "SignatureScheme")
        .def_property_readonly("kind", &mced::SignatureScheme::kind)
        .def_property_readonly("matrix", &mced::SignatureScheme::matrix)
        .def_property_readonly("coefficients", &mced::SignatureScheme::coefficients)
        .def_property_readonly("even_coefficients", &mced::SignatureScheme::even_coefficients)
        .def_property_readonly("odd_coefficients", &mced::SignatureScheme::odd_coefficients);

    m.def("derive_scheme", &mced::derive_scheme, "matrix"_a, "kind"_a);
    m.def("predict", &mced::predict, "scheme"_a, "column"_a);
    m.def("actual_signature", &mced::actual_signature, "kind"_a, "out_column"_a);

    py::class_<mced::SignatureCheckResult>(m, "SignatureCheckResult")
        .def_readonly("predicted", &mced::SignatureCheckResult::predicted)
        .def_readonly("actual", &mced::SignatureCheckResult::actual)
        .def_readonly("detected_mismatch", &mced::SignatureCheckResult::detected_mismatch)
        .def_readonly("part_mismatch", &mced::SignatureCheckResult::part_mismatch);

    m.def("check", &mced::check, "scheme"_a, "in_column"_a, "out_column"_a);

    py::class_<mced::XorNetwork>(m, "XorNetwork")
        .def_property_readonly("input_bits", &mced::XorNetwork::input_bits)
        .def_property_readonly("output_count", &mced::XorNetwork::output_count)
        .def("terms", &term_indices, "output"_a)
        .def("input_label", &mced::XorNetwork::input_label, "index"_a)
        .def("output_label", &mced::XorNetwork::output_label, "output"_a)
        .def("evaluate", &mced::XorNetwork::evaluate, "inputs"_a)
        .def("pack_state", &mced::XorNetwork::pack_state, "state_elements"_a);

    m.def("expand_mixcolumn", &mced::expand_mixcolumn, "matrix"_a);
    m.def("expand_signature", &mced::expand_signature, "scheme"_a);
    m.def("count_gates", &mced::count_gates, "network"_a);

    py::class_<mced::GateCount>(m, "GateCount")
        .def_readonly("matrix_name", &mced::GateCount::matrix_name)
        .def_readonly("mixcolumn_gates", &mced::GateCount::mixcolumn_gates)
        .def_readonly("ccs_extra_gates", &mced::GateCount::ccs_extra_gates)
        .def_readonly("interleaved_extra_gates", &mced::GateCount::interleaved_extra_gates)
        .def_readonly("ccs_total", &mced::GateCount::ccs_total)
        .def_readonly("interleaved_total", &mced::GateCount::interleaved_total)
        .def_property_readonly("ccs_overhead", &mced::GateCount::ccs_overhead_str)
        .def_property_readonly("interleaved_overhead", &mced::GateCount::interleaved_overhead_str);

    m.def("gate_cost_report", &mced::gate_cost_report, "matrix"_a);

    py::class_<mced::TrialRng>(m, "TrialRng")
        .def(py::init<uint64_t, uint64_t>(), "seed"_a, "trial"_a)
        .def("next", &mced::TrialRng::next)
        .def("below", &mced::TrialRng::below, "bound"_a);

    py::enum_<mced::FaultKind>(m, "FaultKind")
        .value("SINGLE_BIT", mced::FaultKind::kSingleBit)
        .value("SINGLE_NIBBLE", mced::FaultKind::kSingleNibble)
        .value("SINGLE_BYTE", mced::FaultKind::kSingleByte)
        .value("MULTI_BIT", mced::FaultKind::kMultiBit)
        .value("BIASED_STUCK", mced::FaultKind::kBiasedStuck);

    py::enum_<mced::FaultTarget>(m, "FaultTarget")
        .value("ORIGINAL_ONLY", mced::FaultTarget::kOriginalOnly)
        .value("REDUNDANT_ONLY", mced::FaultTarget::kRedundantOnly)
        .value("BOTH_IDENTICAL", mced::FaultTarget::kBothIdentical)
        .value("BOTH_INDEPENDENT", mced::FaultTarget::kBothIndependent);

    py::class_<mced::FaultModel>(m, "FaultModel")
        .def(py::init([](mced::FaultKind kind, mced::FaultTarget target, int multi_bits,
                         unsigned stuck_value, int stuck_width) {
                 return mced::FaultModel{kind, target, multi_bits, stuck_value, stuck_width};
             }),
             "kind"_a, "target"_a = mced::FaultTarget::kOriginalOnly, "multi_bits"_a = 2,
             "stuck_value"_a = 0, "stuck_width"_a = 4)
        .def_readwrite("kind", &mced::FaultModel::kind)
        .def_readwrite("target", &mced::FaultModel::target)
        .def_readwrite("multi_bits", &mced::FaultModel::multi_bits)
        .def_readwrite("stuck_value", &mced::FaultModel::stuck_value)
        .def_readwrite("stuck_width", &mced::FaultModel::stuck_width)
        .def("__repr__", [](const mced::FaultModel& f) {
            return f.kind_string() + "/" + f.target_string();
        });

    py::class_<mced::FaultDescriptor>(m, "FaultDescriptor")
        .def_readonly("bits", &mced::FaultDescriptor::bits);

    py::class_<mced::FaultedColumn>(m, "FaultedColumn")
        .def_readonly("column", &mced::FaultedColumn::column)
        .def_readonly("descriptor", &mced::FaultedColumn::descriptor);

    m.def("apply_fault", &mced::apply_fault, "column"_a, "model"_a, "rng"_a);

    py::enum_<mced::RedundancyKind>(m, "RedundancyKind")
        .value("SIGNATURE_CCS", mced::RedundancyKind::kSignatureCcs)
        .value("SIGNATURE_INTERLEAVED", mced::RedundancyKind::kSignatureInterleaved)
        .value("SPATIAL_NAIVE", mced::RedundancyKind::kSpatialNaive)
        .value("TIME_RECOMPUTE", mced::RedundancyKind::kTimeRecompute)
        .value("SPATIAL_FST", mced::RedundancyKind::kSpatialFst);

    py::class_<mced::RedundancyScheme>(m, "RedundancyScheme")
        .def(py::init([](mced::RedundancyKind kind, std::optional<mced::MdsMatrix> w) {
                 return mced::RedundancyScheme{kind, std::move(w)};
             }),
             "kind"_a, "w"_a = std::nullopt)
        .def_readwrite("kind", &mced::RedundancyScheme::kind)
        .def_readwrite("w", &mced::RedundancyScheme::w)
        .def("__repr__", &mced::RedundancyScheme::to_string);

    py::class_<mced::CampaignConfig>(m, "CampaignConfig")
        .def(py::init([](mced::MdsMatrix matrix, mced::RedundancyScheme scheme,
                         mced::FaultModel model, std::optional<uint64_t> trials, uint64_t seed,
                         size_t max_exemplars, int workers) {
                 return mced::CampaignConfig{std::move(matrix), std::move(scheme), model,
                                             trials,            seed,              max_exemplars,
                                             workers};
             }),
             "matrix"_a, "scheme"_a, "model"_a, "trials"_a = std::nullopt, "seed"_a = 0,
             "max_exemplars"_a = 10, "workers"_a = 1)
        .def_readwrite("model", &mced::CampaignConfig::model)
        .def_readwrite("trials", &mced::CampaignConfig::trials)
        .def_readwrite("seed", &mced::CampaignConfig::seed)
        .def_readwrite("max_exemplars", &mced::CampaignConfig::max_exemplars)
        .def_readwrite("workers", &mced::CampaignConfig::workers);

    py::class_<mced::UndetectedExemplar>(m, "UndetectedExemplar")
        .def_readonly("trial", &mced::UndetectedExemplar::trial)
        .def_readonly("input", &mced::UndetectedExemplar::input)
        .def_readonly("fault_original", &mced::UndetectedExemplar::fault_original)
        .def_readonly("fault_redundant", &mced::UndetectedExemplar::fault_redundant);

    py::class_<mced::CampaignReport>(m, "CampaignReport")
        .def_readonly("matrix_name", &mced::CampaignReport::matrix_name)
        .def_readonly("scheme_name", &mced::CampaignReport::scheme_name)
        .def_readonly("model_name", &mced::CampaignReport::model_name)
        .def_readonly("target_name", &mced::CampaignReport::target_name)
        .def_readonly("exhaustive", &mced::CampaignReport::exhaustive)
        .def_readonly("seed", &mced::CampaignReport::seed)
        .def_readonly("trials_run", &mced::CampaignReport::trials_run)
        .def_readonly("faults_injected", &mced::CampaignReport::faults_injected)
        .def_readonly("detected", &mced::CampaignReport::detected)
        .def_readonly("undetected", &mced::CampaignReport::undetected)
        .def_readonly("undetected_exemplars", &mced::CampaignReport::undetected_exemplars)
        .def_property_readonly("detection_rate", &mced::CampaignReport::detection_rate)
        .def("__repr__", &mced::render_report_records);

    m.def("run_signature_campaign", &mced::run_signature_campaign, "config"_a,
          py::call_guard<py::gil_scoped_release>());
    m.def("run_redundancy_campaign", &mced::run_redundancy_campaign, "config"_a,
          py::call_guard<py::gil_scoped_release>());
    m.def("run_campaign", &mced::run_campaign, "config"_a,
          py::call_guard<py::gil_scoped_release>());
    m.def("fst_fixed_points", &mced::fst_fixed_points, "w"_a);

    m.def("render_report_text", &mced::render_report_text, "report"_a);
    m.def("render_report_records", &mced::render_report_records, "report"_a);
    m.def("load_campaign_config", &mced::load_campaign_config, "path"_a);

    m.attr("__version__") = "0.1.0";
}
