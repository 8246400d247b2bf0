#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include <fdrclass/error.hpp>
#include <fdrclass/model.hpp>
#include <fdrclass/risk.hpp>
#include <fdrclass/simulate.hpp>
#include <fdrclass/subbotin.hpp>
#include <fdrclass/threshold.hpp>

namespace py = pybind11;
using namespace fdrclass;

namespace {

ModelKind kind_from(const std::string& text)
{
    return parse_model_kind(text);
}

SimConfig make_config(const ModelSpec& model, std::size_t m, std::size_t replicates, std::uint64_t seed,
                      const std::string& risk, bool null_only, unsigned threads)
{
    SimConfig c{model};
    c.m = m;
    c.replicates = replicates;
    c.seed = seed;
    c.risk_kind = parse_risk_kind(risk);
    c.null_only = null_only;
    c.threads = threads;
    return c;
}

ThresholdRule make_rule(const std::string& rule, double parameter)
{
    if (rule == "fdr") {
        return ThresholdRule::fdr(parameter);
    }
    if (rule == "bh") {
        return ThresholdRule::bh(parameter);
    }
    if (rule == "fixed") {
        return ThresholdRule::fixed(parameter);
    }
    throw DomainError("unknown rule '" + rule + "' (expected fdr, bh or fixed)");
}

py::dict estimate_dict(const McEstimate& e)
{
    py::dict d;
    d["mean"] = e.mean;
    d["se"] = e.se;
    d["replicates"] = e.replicates;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Misclassification risk of FDR-based classifiers under Subbotin mixtures";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<RangeError>(m, "RangeError", base.ptr());
    py::register_exception<CalibrationError>(m, "CalibrationError", base.ptr());
    py::register_exception<LevelError>(m, "LevelError", base.ptr());
    py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
    py::register_exception<HypothesisError>(m, "HypothesisError", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());

    py::class_<SubbotinShape>(m, "SubbotinShape")
        .def(py::init<double>(), py::arg("zeta"))
        .def_property_readonly("zeta", &SubbotinShape::zeta)
        .def_property_readonly("normalizer", &SubbotinShape::normalizer)
        .def("__repr__", [](const SubbotinShape& s) { return "SubbotinShape(" + std::to_string(s.zeta()) + ")"; });

    m.def("density", &density, py::arg("shape"), py::arg("x"));
    m.def("upper_tail", &upper_tail, py::arg("shape"), py::arg("u"));
    m.def("log_upper_tail", &log_upper_tail, py::arg("shape"), py::arg("u"));
    m.def("quantile", &quantile, py::arg("shape"), py::arg("p"));

    py::class_<CanonicalParams>(m, "CanonicalParams")
        .def_static("from_beta", &CanonicalParams::from_beta, py::arg("beta"), py::arg("power"))
        .def_static("from_tau", &CanonicalParams::from_tau, py::arg("tau"), py::arg("power"))
        .def_property_readonly("power", &CanonicalParams::power)
        .def_property_readonly("beta", &CanonicalParams::beta)
        .def("tau", &CanonicalParams::tau, py::arg("m"));

    py::class_<ModelSpec>(m, "ModelSpec")
        .def_static("location", &ModelSpec::location, py::arg("shape"), py::arg("tau"), py::arg("mu"))
        .def_static("scale", &ModelSpec::scale, py::arg("shape"), py::arg("tau"), py::arg("sigma"))
        .def_property_readonly("kind", [](const ModelSpec& s) { return std::string(to_string(s.kind())); })
        .def_property_readonly("shape", &ModelSpec::shape)
        .def_property_readonly("tau", &ModelSpec::tau)
        .def_property_readonly("effect", &ModelSpec::effect)
        .def_property_readonly("pi0", &ModelSpec::pi0)
        .def_property_readonly("pi1", &ModelSpec::pi1)
        .def_property_readonly("bayes_threshold", &ModelSpec::bayes_threshold)
        .def_property_readonly("power", &ModelSpec::power)
        .def("alt_cdf", &ModelSpec::alt_cdf, py::arg("t"))
        .def("alt_pdf", &ModelSpec::alt_pdf, py::arg("t"))
        .def("psi_ratio", &ModelSpec::psi_ratio, py::arg("t"))
        .def("mixture_cdf", &ModelSpec::mixture_cdf, py::arg("t"))
        .def("pvalue", &ModelSpec::pvalue, py::arg("statistic"))
        .def("statistic_cutoff", &ModelSpec::statistic_cutoff, py::arg("t"));

    m.def(
        "calibrate",
        [](const std::string& kind, double zeta, const CanonicalParams& params, std::size_t n) {
            return calibrate(kind_from(kind), SubbotinShape(zeta), params, n);
        },
        py::arg("kind"), py::arg("zeta"), py::arg("params"), py::arg("m"),
        "Model of the given kind ('location' or 'scale') whose Bayes rule has power C at sparsity tau.");

    py::class_<ThresholdResult>(m, "ThresholdResult")
        .def_readonly("value", &ThresholdResult::value)
        .def_property_readonly("provenance",
                               [](const ThresholdResult& r) { return std::string(to_string(r.provenance)); })
        .def_readonly("k_hat", &ThresholdResult::k_hat)
        .def_readonly("statistic", &ThresholdResult::statistic);

    m.def("bayes_threshold", &bayes_threshold, py::arg("model"));
    m.def("bfdr_threshold", &bfdr_threshold, py::arg("model"), py::arg("alpha"));
    m.def("q_opt", &q_opt, py::arg("model"));
    m.def(
        "alpha_opt",
        [](const std::string& family, std::size_t n, double beta0, double power0) {
            return alpha_opt(parse_family(family), n, beta0, power0);
        },
        py::arg("family"), py::arg("m"), py::arg("beta0"), py::arg("power0"));
    m.def(
        "bh_threshold", [](const std::vector<double>& p, double alpha) { return bh_threshold(p, alpha); },
        py::arg("pvalues"), py::arg("alpha"));
    m.def(
        "fdr_threshold", [](const std::vector<double>& p, double alpha) { return fdr_threshold(p, alpha); },
        py::arg("pvalues"), py::arg("alpha"));

    py::class_<RiskReport>(m, "RiskReport")
        .def_readonly("risk", &RiskReport::risk)
        .def_readonly("bayes_risk", &RiskReport::bayes_risk)
        .def_readonly("excess_rel", &RiskReport::excess_rel)
        .def_readonly("bounds", &RiskReport::bounds);

    m.def("risk_det", &risk_det, py::arg("model"), py::arg("t"));
    m.def("excess", &excess, py::arg("risk"), py::arg("bayes_risk"));
    m.def("exact_fdr_risk", &exact_fdr_risk, py::arg("model"), py::arg("m"), py::arg("alpha"),
          py::call_guard<py::gil_scoped_release>());
    m.def("fdr_rejection_distribution", &fdr_rejection_distribution, py::arg("model"), py::arg("m"),
          py::arg("alpha"), py::call_guard<py::gil_scoped_release>());
    m.def(
        "steck_prefix", [](const std::vector<double>& s) { return steck_prefix(s); }, py::arg("bounds"));
    m.def(
        "rates",
        [](const ModelSpec& model) {
            const Rates r = rates(model);
            return py::make_tuple(r.r, r.k);
        },
        py::arg("model"));
    m.def("bound_thm31_upper", &bound_thm31_upper, py::arg("model"), py::arg("alpha"));
    m.def("bound_thm31_lower", &bound_thm31_lower, py::arg("model"), py::arg("alpha"));
    m.def(
        "bound_thm32_upper",
        [](const ModelSpec& model, std::size_t n, double alpha, double epsilon) {
            BoundParams p;
            p.epsilon = epsilon;
            return bound_thm32_upper(model, n, alpha, p);
        },
        py::arg("model"), py::arg("m"), py::arg("alpha"), py::arg("epsilon") = 0.5);
    m.def("rho_rate", &rho_rate, py::arg("m"), py::arg("alpha"), py::arg("gamma_exponent"));

    m.def(
        "mc_risk",
        [](const ModelSpec& model, std::size_t n, const std::string& rule, double parameter, std::size_t replicates,
           std::uint64_t seed, const std::string& risk, unsigned threads) {
            const SimConfig c = make_config(model, n, replicates, seed, risk, false, threads);
            McEstimate e;
            {
                py::gil_scoped_release release;
                e = mc_risk(c, make_rule(rule, parameter));
            }
            return estimate_dict(e);
        },
        py::arg("model"), py::arg("m"), py::arg("rule"), py::arg("parameter"), py::arg("replicates"),
        py::arg("seed") = 1, py::arg("risk") = "inductive", py::arg("threads") = 0);
    m.def(
        "mc_fdp",
        [](const ModelSpec& model, std::size_t n, const std::string& rule, double parameter, std::size_t replicates,
           std::uint64_t seed, bool null_only, unsigned threads) {
            const SimConfig c = make_config(model, n, replicates, seed, "inductive", null_only, threads);
            McEstimate e;
            {
                py::gil_scoped_release release;
                e = mc_fdp(c, make_rule(rule, parameter));
            }
            return estimate_dict(e);
        },
        py::arg("model"), py::arg("m"), py::arg("rule"), py::arg("parameter"), py::arg("replicates"),
        py::arg("seed") = 1, py::arg("null_only") = false, py::arg("threads") = 0);
    m.def(
        "sample_dataset",
        [](const ModelSpec& model, std::size_t n, std::uint64_t seed, std::size_t replicate) {
            const Dataset d = sample_dataset(make_config(model, n, 1, seed, "inductive", false, 1), replicate);
            std::vector<int> labels(d.labels.begin(), d.labels.end());
            return py::make_tuple(labels, d.statistics, d.pvalues);
        },
        py::arg("model"), py::arg("m"), py::arg("seed") = 1, py::arg("replicate") = 0,
        "Returns (labels, statistics, pvalues).");
}
