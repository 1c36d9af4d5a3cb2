#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fkdyn/entrokron.hpp"
#include "fkdyn/experiments.hpp"
#include "fkdyn/gikn.hpp"
#include "fkdyn/io.hpp"
#include "fkdyn/matchkit.hpp"

namespace py = pybind11;
using namespace fkdyn;
using json = nlohmann::json;

namespace {

// Blocks cross the boundary as {word text: probability}.
BlockDistribution to_blocks(const std::map<std::string, double>& d) {
  json j = json::object();
  for (const auto& [k, v] : d) j[k] = v;
  return io::blocks_from_json(j);
}

std::map<std::string, double> from_blocks(const BlockDistribution& bd) {
  std::map<std::string, double> out;
  for (const auto& [w, p] : bd.probs) out[io::format_word(w)] = p;
  return out;
}

PeriodicOrbit orbit(const Word& w) { return PeriodicOrbit::from_word(MetricSystem::full_shift(), w); }

py::object to_python(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_fkdyn, m) {
  m.doc() = "Feldman-Katok distances, GIKN towers and ergodic diagnostics";
  py::register_exception<Error>(m, "FkdynError", PyExc_ValueError);

  m.def("parse_word", &io::parse_word);
  m.def("format_word", &io::format_word);
  m.def("rotation_coding", &rotation_coding, py::arg("alpha"), py::arg("x0"), py::arg("length"));

  m.def("word_lcs", &word_lcs);
  m.def(
      "word_metrics",
      [](const Word& u, const Word& w) {
        const auto d = word_metrics(u, w);
        return py::dict(py::arg("hamming") = d.hamming, py::arg("edit") = d.edit);
      },
      "normalized Hamming and edit distances of two equal-length words");

  m.def(
      "gap",
      [](const Word& x, const Word& z, std::size_t n, double delta) {
        const auto a = orbit(x);
        const auto b = orbit(z);
        const auto g = fkdyn::gap(a.system(), a.trajectory(n), b.trajectory(n), n, delta);
        return py::dict(py::arg("value") = g.value, py::arg("fit") = g.fit,
                        py::arg("exact") = g.certified == Certification::Exact);
      },
      py::arg("x"), py::arg("z"), py::arg("n"), py::arg("delta"),
      "gap of the periodic orbits of two words in the full shift at horizon n");

  m.def(
      "fk_distance",
      [](const Word& x, const Word& z, double tol) {
        const auto r = fkdyn::fk_distance(orbit(x), orbit(z), tol);
        return py::dict(py::arg("value") = r.value, py::arg("lo") = r.lo, py::arg("hi") = r.hi,
                        py::arg("converged") = r.converged);
      },
      py::arg("x"), py::arg("z"), py::arg("tol") = 1e-3);

  m.def("block_distribution", [](const Word& stream, std::size_t n) { return from_blocks(block_distribution(stream, n)); });
  m.def("product_blocks", [](const Word& symbols, const std::vector<double>& probs, std::size_t n) {
    return from_blocks(block_distribution(ProductSpec{symbols, probs}, n));
  });

  m.def(
      "transport",
      [](const std::map<std::string, double>& mu, const std::map<std::string, double>& nu, const std::string& cost) {
        if (cost != "edit" && cost != "hamming") throw Error(ErrorCode::InvalidInput, "cost is 'edit' or 'hamming'");
        const auto r = transport_block_distance(to_blocks(mu), to_blocks(nu),
                                                cost == "edit" ? BlockCost::Edit : BlockCost::Hamming);
        std::map<std::pair<std::string, std::string>, double> plan;
        for (const auto& [key, mass] : r.plan.mass) plan[{io::format_word(key.first), io::format_word(key.second)}] = mass;
        return py::dict(py::arg("value") = r.value, py::arg("plan") = plan, py::arg("residual") = r.residual);
      },
      py::arg("mu"), py::arg("nu"), py::arg("cost") = "edit");

  m.def(
      "entropy_rates",
      [](const Word& stream, std::size_t m_max) {
        py::list out;
        for (const auto& e : block_entropy_rate(stream, m_max)) {
          out.append(py::dict(py::arg("m") = e.m, py::arg("block_entropy") = e.block_entropy,
                              py::arg("rate") = e.rate, py::arg("undersampled") = e.undersampled));
        }
        return out;
      },
      py::arg("stream"), py::arg("m_max"), "block entropies in nats");

  m.def(
      "katok",
      [](const std::map<std::string, double>& blocks, double eps) {
        const auto k = katok_trivial(to_blocks(blocks), eps);
        return py::dict(py::arg("trivial") = k.trivial, py::arg("witness") = io::format_word(k.witness),
                        py::arg("ball_mass") = k.ball_mass, py::arg("beta") = k.beta,
                        py::arg("exhaustive") = k.exhaustive);
      },
      py::arg("blocks"), py::arg("eps"));

  m.def(
      "synthesize_tower",
      [](const std::string& config) {
        return to_python(io::tower_to_json(synthesize_gikn(io::gikn_config_from_json(json::parse(config)))));
      },
      py::arg("config"), "tower from a JSON settings string, as a dict");

  m.def("experiment_names", &experiment_names);
  m.def(
      "evaluate_experiment",
      [](const std::string& config) {
        const auto cfg = parse_config(json::parse(config));
        const auto r = evaluate_experiment(cfg);
        return py::make_tuple(r.csv, to_python(json::parse(r.summary_json(cfg))));
      },
      py::arg("config"), "(results.csv text, summary dict) without writing files");
}
