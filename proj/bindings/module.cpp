#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "reachquant/config.hpp"
#include "reachquant/errors.hpp"
#include "reachquant/numerics.hpp"
#include "reachquant/observer.hpp"
#include "reachquant/quantizer.hpp"
#include "reachquant/reachability.hpp"
#include "reachquant/schemes.hpp"
#include "reachquant/sets.hpp"
#include "reachquant/sim.hpp"

namespace py = pybind11;
namespace rq = reachquant;

namespace {

rq::Mat make_mat(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty())
    throw std::invalid_argument("matrix needs at least one row and column");
  rq::Mat m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size())
      throw std::invalid_argument("ragged matrix rows");
    for (std::size_t j = 0; j < rows.front().size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<std::vector<double>> mat_rows(const rq::Mat& m) {
  std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Remote state estimation over a finite-rate channel: zonotope reachability, "
      "observer verification, dynamic quantization schemes and closed-loop simulation";
  m.attr("__version__") = "0.1.0";

  py::register_exception<rq::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<rq::CertificateError>(m, "CertificateError", PyExc_RuntimeError);
  py::register_exception<rq::InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception<rq::QuantizerOverflow>(m, "QuantizerOverflow", PyExc_RuntimeError);

  py::class_<rq::Mat>(m, "Mat")
      .def(py::init(&make_mat), py::arg("rows"))
      .def_property_readonly("shape",
                             [](const rq::Mat& a) { return py::make_tuple(a.rows(), a.cols()); })
      .def("tolist", &mat_rows)
      .def("__getitem__",
           [](const rq::Mat& a, py::tuple ij) {
             const auto i = ij[0].cast<std::size_t>(), j = ij[1].cast<std::size_t>();
             if (i >= a.rows() || j >= a.cols()) throw py::index_error();
             return a(i, j);
           })
      .def(py::self == py::self)
      .def("__repr__", [](const rq::Mat& a) {
        return "Mat(" + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ")";
      });
  py::implicitly_convertible<py::list, rq::Mat>();

  m.def("mat_exp", &rq::mat_exp, py::arg("m"), py::arg("t"));
  m.def("spectral_radius_nonneg", &rq::spectral_radius_nonneg);
  m.def("symmetric_eigenvalues", &rq::symmetric_eigenvalues);
  m.def("induced_inf_norm", &rq::induced_inf_norm);
  m.def("max_col_sum_norm", &rq::max_col_sum_norm);
  m.def("entrywise_abs", &rq::entrywise_abs);
  m.def("inf_norm", &rq::inf_norm);
  m.def("rk4_step", &rq::rk4_step, py::arg("f"), py::arg("t"), py::arg("z"), py::arg("h"));

  py::class_<rq::Zonotope>(m, "Zonotope")
      .def(py::init([](rq::Vec center, std::vector<rq::Vec> generators) {
             return rq::Zonotope{std::move(center), std::move(generators)};
           }),
           py::arg("center"), py::arg("generators") = std::vector<rq::Vec>{})
      .def_readwrite("center", &rq::Zonotope::center)
      .def_readwrite("generators", &rq::Zonotope::generators)
      .def("dim", &rq::Zonotope::dim)
      .def("generator_count", &rq::Zonotope::generator_count)
      .def_static("singleton", &rq::Zonotope::singleton);

  py::class_<rq::Hyperrect>(m, "Hyperrect")
      .def(py::init([](rq::Vec center, rq::Vec half_widths) {
             return rq::Hyperrect{std::move(center), std::move(half_widths)};
           }),
           py::arg("center"), py::arg("half_widths"))
      .def_readwrite("center", &rq::Hyperrect::center)
      .def_readwrite("half_widths", &rq::Hyperrect::half_widths)
      .def("dim", &rq::Hyperrect::dim)
      .def_static("cube", &rq::Hyperrect::cube, py::arg("center"), py::arg("radius"));

  m.def("minkowski_sum", &rq::minkowski_sum);
  m.def("linear_map", &rq::linear_map);
  m.def("interval_hull", &rq::interval_hull);
  m.def("to_zonotope", &rq::to_zonotope);
  m.def("contains", &rq::contains, py::arg("box"), py::arg("point"), py::arg("tol") = 1e-12);

  py::enum_<rq::GrowthBound>(m, "GrowthBound")
      .value("Integral", rq::GrowthBound::Integral)
      .value("Exponential", rq::GrowthBound::Exponential);

  py::class_<rq::ReachParams>(m, "ReachParams")
      .def(py::init([](rq::Mat a, double T, double mu) {
             return rq::ReachParams{std::move(a), T, mu};
           }),
           py::arg("A"), py::arg("T"), py::arg("mu"))
      .def_readwrite("A", &rq::ReachParams::A)
      .def_readwrite("T", &rq::ReachParams::T)
      .def_readwrite("mu", &rq::ReachParams::mu);

  m.def("beta_inflation", &rq::beta_inflation, py::arg("params"),
        py::arg("zero_norm_limit") = false);
  m.def("terminal_reach_overapprox", &rq::terminal_reach_overapprox, py::arg("params"),
        py::arg("x0"), py::arg("zero_norm_limit") = false);
  m.def("input_error_inflation", &rq::input_error_inflation, py::arg("a_norm"), py::arg("T"),
        py::arg("u_b"), py::arg("kh_norm"), py::arg("est_error_bound"),
        py::arg("growth") = rq::GrowthBound::Integral, py::arg("zero_norm_limit") = false);

  py::class_<rq::PlantModel>(m, "PlantModel")
      .def(py::init([](rq::Mat a, rq::Mat b, rq::Mat e, rq::Mat h) {
             return rq::PlantModel{std::move(a), std::move(b), std::move(e), std::move(h)};
           }),
           py::arg("A"), py::arg("B"), py::arg("E"), py::arg("H"))
      .def_readwrite("A", &rq::PlantModel::A)
      .def_readwrite("B", &rq::PlantModel::B)
      .def_readwrite("E", &rq::PlantModel::E)
      .def_readwrite("H", &rq::PlantModel::H)
      .def("state_dim", &rq::PlantModel::state_dim)
      .def("input_dim", &rq::PlantModel::input_dim)
      .def("dist_dim", &rq::PlantModel::dist_dim)
      .def("output_dim", &rq::PlantModel::output_dim)
      .def("validate", &rq::PlantModel::validate)
      .def("observability_rank", &rq::PlantModel::observability_rank);

  py::class_<rq::BoundsConfig>(m, "BoundsConfig")
      .def(py::init([](rq::Vec x_c, double x_b, double u_b, double d_b) {
             return rq::BoundsConfig{std::move(x_c), x_b, u_b, d_b};
           }),
           py::arg("x_c"), py::arg("x_b"), py::arg("u_b"), py::arg("d_b"))
      .def_readwrite("x_c", &rq::BoundsConfig::x_c)
      .def_readwrite("x_b", &rq::BoundsConfig::x_b)
      .def_readwrite("u_b", &rq::BoundsConfig::u_b)
      .def_readwrite("d_b", &rq::BoundsConfig::d_b);

  py::class_<rq::ObserverCertificate>(m, "ObserverCertificate")
      .def(py::init([](rq::Mat p, rq::Mat q, double nu1, double nu2) {
             return rq::ObserverCertificate{std::move(p), std::move(q), nu1, nu2};
           }),
           py::arg("P"), py::arg("Q"), py::arg("nu1"), py::arg("nu2"))
      .def_readwrite("P", &rq::ObserverCertificate::P)
      .def_readwrite("Q", &rq::ObserverCertificate::Q)
      .def_readwrite("nu1", &rq::ObserverCertificate::nu1)
      .def_readwrite("nu2", &rq::ObserverCertificate::nu2);

  py::class_<rq::CertificateReport>(m, "CertificateReport")
      .def_readonly("pass_", &rq::CertificateReport::pass)
      .def_readonly("max_eigenvalue", &rq::CertificateReport::max_eigenvalue)
      .def_readonly("tolerance", &rq::CertificateReport::tolerance)
      .def_readonly("lambda_min_p", &rq::CertificateReport::lambda_min_p)
      .def_readonly("lambda_max_p", &rq::CertificateReport::lambda_max_p)
      .def_readonly("form", &rq::CertificateReport::form);

  py::class_<rq::ObserverGains>(m, "ObserverGains")
      .def_readonly("K", &rq::ObserverGains::K)
      .def_readonly("Kr", &rq::ObserverGains::Kr)
      .def_readonly("lambda_e", &rq::ObserverGains::lambda_e);

  m.def("verify_certificate", &rq::verify_certificate, py::arg("plant"), py::arg("cert"),
        py::arg("tol") = 1e-7);
  m.def("derive_gains", &rq::derive_gains, py::arg("cert"), py::arg("plant"));

  py::class_<rq::ErrorBounds>(m, "ErrorBounds")
      .def(py::init<const rq::ObserverCertificate&, const rq::ObserverGains&,
                    const rq::PlantModel&, const rq::BoundsConfig&>(),
           py::arg("cert"), py::arg("gains"), py::arg("plant"), py::arg("bounds"))
      .def("beta", &rq::ErrorBounds::beta, py::arg("r"), py::arg("s"))
      .def("gamma", &rq::ErrorBounds::gamma, py::arg("r"))
      .def("beta_rec", &rq::ErrorBounds::beta_rec, py::arg("r"), py::arg("s"))
      .def("beta_rec_growing", &rq::ErrorBounds::beta_rec_growing, py::arg("r"), py::arg("s"))
      .def("gamma_rec", &rq::ErrorBounds::gamma_rec, py::arg("s"))
      .def("estimation_error_bound", &rq::ErrorBounds::estimation_error_bound, py::arg("t"))
      .def("reconstruction_error_bound", &rq::ErrorBounds::reconstruction_error_bound,
           py::arg("er_tk"), py::arg("elapsed"), py::arg("sup_u"), py::arg("sup_d"),
           py::arg("sup_ehat"), py::arg("sup_eq"))
      .def_property_readonly("lambda_e", &rq::ErrorBounds::lambda_e)
      .def_property_readonly("condition_term", &rq::ErrorBounds::condition_term)
      .def_property_readonly("gamma_gain", &rq::ErrorBounds::gamma_gain)
      .def_property_readonly("rec_gain", &rq::ErrorBounds::rec_gain);

  py::class_<rq::QuantizerConfig>(m, "QuantizerConfig")
      .def_static("from_levels", &rq::QuantizerConfig::from_levels, py::arg("levels"),
                  py::arg("dim"))
      .def_static("from_bits", &rq::QuantizerConfig::from_bits, py::arg("bits"), py::arg("dim"))
      .def_readonly("levels", &rq::QuantizerConfig::levels)
      .def_readonly("bits", &rq::QuantizerConfig::bits)
      .def_readonly("dim", &rq::QuantizerConfig::dim)
      .def(py::self == py::self);

  py::class_<rq::QuantizerState>(m, "QuantizerState")
      .def(py::init([](rq::Vec c, rq::Vec l, std::uint32_t k) {
             return rq::QuantizerState{std::move(c), std::move(l), k};
           }),
           py::arg("C"), py::arg("L"), py::arg("k") = 0)
      .def_readwrite("C", &rq::QuantizerState::C)
      .def_readwrite("L", &rq::QuantizerState::L)
      .def_readwrite("k", &rq::QuantizerState::k);

  py::class_<rq::EncodedPacket>(m, "EncodedPacket")
      .def(py::init<>())
      .def_readwrite("k", &rq::EncodedPacket::k)
      .def_readwrite("indices", &rq::EncodedPacket::indices)
      .def(py::self == py::self);

  py::class_<rq::DecodedPacket>(m, "DecodedPacket")
      .def_readonly("k", &rq::DecodedPacket::k)
      .def_readonly("value", &rq::DecodedPacket::value);

  py::enum_<rq::DecoderRange>(m, "DecoderRange")
      .value("Full", rq::DecoderRange::Full)
      .value("Half", rq::DecoderRange::Half);

  m.def("encode", &rq::encode, py::arg("xhat"), py::arg("state"), py::arg("levels"));
  m.def("decode", &rq::decode, py::arg("packet"), py::arg("state"), py::arg("levels"),
        py::arg("range") = rq::DecoderRange::Full);
  m.def("max_qerror_step", &rq::max_qerror_step, py::arg("eq_bar"), py::arg("lambda_bar"),
        py::arg("beta_ue"), py::arg("levels"));
  m.def("pack_indices", &rq::pack_indices, py::arg("packet"), py::arg("levels"));
  m.def("payload_bits", &rq::payload_bits, py::arg("dim"), py::arg("levels"));

  py::enum_<rq::SchemeKind>(m, "SchemeKind")
      .value("SetBased", rq::SchemeKind::SetBased)
      .value("NormBased", rq::SchemeKind::NormBased);
  m.def("scheme_name", &rq::scheme_name);

  m.def("set_based_update", &rq::set_based_update, py::arg("state"), py::arg("packet"),
        py::arg("lambda_"), py::arg("lambda_bar"), py::arg("beta_ue"), py::arg("levels"));
  m.def("norm_based_update", &rq::norm_based_update, py::arg("state"), py::arg("packet"),
        py::arg("lambda_"), py::arg("a_norm"), py::arg("T"), py::arg("beta_ue"),
        py::arg("levels"));

  py::class_<rq::FeasibilityReport>(m, "FeasibilityReport")
      .def_readonly("scheme", &rq::FeasibilityReport::scheme)
      .def_readonly("lhs", &rq::FeasibilityReport::lhs)
      .def_readonly("feasible", &rq::FeasibilityReport::feasible)
      .def_readonly("margin", &rq::FeasibilityReport::margin);

  m.def("feasibility_set", &rq::feasibility_set, py::arg("A"), py::arg("T"), py::arg("levels"));
  m.def("feasibility_norm", &rq::feasibility_norm, py::arg("A"), py::arg("T"), py::arg("levels"));
  m.def("compare_schemes", &rq::compare_schemes, py::arg("A"), py::arg("T"), py::arg("levels"));

  py::class_<rq::SignalSpec> signal_spec(m, "SignalSpec");
  py::enum_<rq::SignalSpec::Input>(signal_spec, "Input")
      .value("Zero", rq::SignalSpec::Input::Zero)
      .value("Sinusoid", rq::SignalSpec::Input::Sinusoid)
      .value("Table", rq::SignalSpec::Input::Table);
  py::enum_<rq::SignalSpec::Disturbance>(signal_spec, "Disturbance")
      .value("Zero", rq::SignalSpec::Disturbance::Zero)
      .value("SeededUniform", rq::SignalSpec::Disturbance::SeededUniform)
      .value("Table", rq::SignalSpec::Disturbance::Table);
  signal_spec.def(py::init<>())
      .def_readwrite("input", &rq::SignalSpec::input)
      .def_readwrite("amplitude", &rq::SignalSpec::amplitude)
      .def_readwrite("angular_freq", &rq::SignalSpec::angular_freq)
      .def_readwrite("phase", &rq::SignalSpec::phase)
      .def_readwrite("input_table", &rq::SignalSpec::input_table)
      .def_readwrite("disturbance", &rq::SignalSpec::disturbance)
      .def_readwrite("dist_bound", &rq::SignalSpec::dist_bound)
      .def_readwrite("dist_hold", &rq::SignalSpec::dist_hold)
      .def_readwrite("dist_table", &rq::SignalSpec::dist_table)
      .def("input_at", &rq::SignalSpec::input_at, py::arg("t"), py::arg("m"));

  py::class_<rq::SimOptions>(m, "SimOptions")
      .def(py::init<>())
      .def_readwrite("T", &rq::SimOptions::T)
      .def_readwrite("horizon", &rq::SimOptions::horizon)
      .def_readwrite("dt", &rq::SimOptions::dt)
      .def_readwrite("seed", &rq::SimOptions::seed)
      .def_readwrite("x0", &rq::SimOptions::x0)
      .def_readwrite("growth", &rq::SimOptions::growth)
      .def_readwrite("decoder", &rq::SimOptions::decoder);

  py::class_<rq::Transmission>(m, "Transmission")
      .def_readonly("k", &rq::Transmission::k)
      .def_readonly("t", &rq::Transmission::t)
      .def_readonly("encoded", &rq::Transmission::encoded)
      .def_readonly("pe", &rq::Transmission::pe)
      .def_readonly("pd", &rq::Transmission::pd)
      .def_readonly("region_center", &rq::Transmission::region_center)
      .def_readonly("region_halfwidth", &rq::Transmission::region_halfwidth)
      .def_readonly("eq_bar", &rq::Transmission::eq_bar)
      .def_readonly("beta_ue", &rq::Transmission::beta_ue);

  py::class_<rq::SimTrace>(m, "SimTrace")
      .def_readonly("scheme", &rq::SimTrace::scheme)
      .def_readonly("seed", &rq::SimTrace::seed)
      .def_readonly("levels", &rq::SimTrace::levels)
      .def_readonly("T", &rq::SimTrace::T)
      .def_readonly("dt", &rq::SimTrace::dt)
      .def_readonly("horizon", &rq::SimTrace::horizon)
      .def_readonly("growth", &rq::SimTrace::growth)
      .def_readonly("decoder", &rq::SimTrace::decoder)
      .def_readonly("rng", &rq::SimTrace::rng)
      .def_readonly("n", &rq::SimTrace::n)
      .def_readonly("m", &rq::SimTrace::m)
      .def_readonly("o", &rq::SimTrace::o)
      .def_readonly("t", &rq::SimTrace::t)
      .def_readonly("x", &rq::SimTrace::x)
      .def_readonly("xhat", &rq::SimTrace::xhat)
      .def_readonly("xr", &rq::SimTrace::xr)
      .def_readonly("region_center", &rq::SimTrace::region_center)
      .def_readonly("region_halfwidth", &rq::SimTrace::region_halfwidth)
      .def_readonly("eq", &rq::SimTrace::eq)
      .def_readonly("eq_bar", &rq::SimTrace::eq_bar)
      .def_readonly("ehat_norm", &rq::SimTrace::ehat_norm)
      .def_readonly("er_norm", &rq::SimTrace::er_norm)
      .def_readonly("est_bound", &rq::SimTrace::est_bound)
      .def_readonly("rec_bound", &rq::SimTrace::rec_bound)
      .def_readonly("is_transmission", &rq::SimTrace::is_transmission)
      .def_readonly("region_k", &rq::SimTrace::region_k)
      .def_readonly("transmissions", &rq::SimTrace::transmissions)
      .def("sample_count", &rq::SimTrace::sample_count)
      .def("encoded_count", &rq::SimTrace::encoded_count)
      .def("csv", &rq::SimTrace::csv);

  m.def("run_closed_loop", &rq::run_closed_loop, py::arg("plant"), py::arg("bounds"),
        py::arg("cert"), py::arg("quantizer"), py::arg("scheme"), py::arg("signals"),
        py::arg("options"), py::call_guard<py::gil_scoped_release>());

  py::class_<rq::SteadyState>(m, "SteadyState")
      .def_readonly("eq_inf", &rq::SteadyState::eq_inf)
      .def_readonly("er_inf", &rq::SteadyState::er_inf);
  m.def("steady_state_metrics", &rq::steady_state_metrics, py::arg("trace"),
        py::arg("tail_fraction") = 0.25);

  py::class_<rq::ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("plant", &rq::ExperimentConfig::plant)
      .def_readwrite("bounds", &rq::ExperimentConfig::bounds)
      .def_readwrite("cert", &rq::ExperimentConfig::cert)
      .def_readwrite("quantizer", &rq::ExperimentConfig::quantizer)
      .def_readwrite("schemes", &rq::ExperimentConfig::schemes)
      .def_readwrite("signals", &rq::ExperimentConfig::signals)
      .def_readwrite("T", &rq::ExperimentConfig::T)
      .def_readwrite("horizon", &rq::ExperimentConfig::horizon)
      .def_readwrite("dt", &rq::ExperimentConfig::dt)
      .def_readwrite("x0", &rq::ExperimentConfig::x0)
      .def_readwrite("seeds", &rq::ExperimentConfig::seeds)
      .def_readwrite("out_dir", &rq::ExperimentConfig::out_dir)
      .def_readwrite("growth", &rq::ExperimentConfig::growth)
      .def_readwrite("decoder", &rq::ExperimentConfig::decoder)
      .def_readwrite("sweep_T", &rq::ExperimentConfig::sweep_T)
      .def_readwrite("sweep_N", &rq::ExperimentConfig::sweep_N)
      .def("validate", &rq::ExperimentConfig::validate)
      .def("emit", &rq::ExperimentConfig::emit)
      .def_static("parse_string", &rq::ExperimentConfig::parse_string, py::arg("text"),
                  py::arg("name") = "<string>")
      .def_static("parse_file", &rq::ExperimentConfig::parse_file, py::arg("path"))
      .def(py::self == py::self);
}
