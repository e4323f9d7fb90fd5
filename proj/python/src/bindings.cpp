#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "staircase/errors.hpp"
#include "staircase/experiment.hpp"
#include "staircase/laurent.hpp"

namespace py = pybind11;
using namespace staircase;

namespace {

// Reports cross the boundary as JSON text; the Python side decodes them.
ExperimentConfig parse_config(const std::string& text) {
    return config_from_json(text.empty() ? nlohmann::json::object() : nlohmann::json::parse(text));
}

py::tuple enclosure_tuple(const Enclosure& e) {
    return py::make_tuple(to_fraction(e.lo()), to_fraction(e.hi()));
}

class PyOracle {
public:
    explicit PyOracle(const std::string& config_text) : ex_(make_experiment(parse_config(config_text))) {}

    int k_cap() const { return ex_.oracle->k_cap(); }
    int k_ceiling() const { return ex_.k_ceiling(); }
    std::string height(int j) const { return ex_.ledger->height(j).str(); }
    std::string count(int K, const std::string& a) { return ex_.oracle->count(K, BigInt(a)).str(); }
    py::tuple correlation(const std::string& a, int K) {
        return enclosure_tuple(ex_.oracle->correlation(BigInt(a), K));
    }
    py::tuple normalized_correlation(const std::string& a, int K) {
        return enclosure_tuple(ex_.oracle->normalized_correlation(BigInt(a), K));
    }

private:
    Experiment ex_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.attr("__version__") = STAIRCASE_VERSION;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_ArithmeticError);
    py::register_exception<CapExceededError>(m, "CapExceededError", PyExc_MemoryError);

    m.def("normalize_config", [](const std::string& c) { return to_json(parse_config(c)).dump(); });
    m.def("config_hash", [](const std::string& c) { return config_hash(parse_config(c)); });
    m.def("build", [](const std::string& c) { return cmd_build(parse_config(c)).dump(); });
    m.def("verify", [](const std::string& c) {
        auto out = cmd_verify(parse_config(c));
        return py::make_tuple(out.report.dump(), out.exit_code);
    });
    m.def("rho", [](const std::string& c) { return cmd_rho(parse_config(c)).dump(); });
    m.def("rho_csv", [](const std::string& c) { return rho_csv(parse_config(c)); });
    m.def("identity", [](const std::string& c, int r_min, int r_max) {
        return cmd_identity(parse_config(c), r_min, r_max).dump();
    });
    m.def("mixing", [](const std::string& c, std::size_t points) {
        return cmd_mixing(parse_config(c), points).dump();
    });
    m.def("identity_residual", [](int r) { return to_json(identity_one_residual(r)).dump(); });

    py::class_<PyOracle>(m, "_Oracle")
        .def(py::init<const std::string&>())
        .def_property_readonly("k_cap", &PyOracle::k_cap)
        .def_property_readonly("k_ceiling", &PyOracle::k_ceiling)
        .def("height", &PyOracle::height)
        .def("count", &PyOracle::count)
        .def("correlation", &PyOracle::correlation)
        .def("normalized_correlation", &PyOracle::normalized_correlation);
}
