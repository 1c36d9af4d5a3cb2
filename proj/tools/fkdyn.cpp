#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

#include "fkdyn/entrokron.hpp"
#include "fkdyn/ergodiag.hpp"
#include "fkdyn/experiments.hpp"
#include "fkdyn/gikn.hpp"
#include "fkdyn/io.hpp"
#include "fkdyn/matchkit.hpp"

using namespace fkdyn;
using json = nlohmann::json;

namespace {

// A plain word is read as the periodic orbit of that word.
PeriodicOrbit load_orbit(const std::string& path) {
  const std::string text = io::read_text(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return io::orbit_from_json(json::parse(text));
  return PeriodicOrbit::from_word(MetricSystem::full_shift(), io::parse_word(text));
}

Word load_stream(const std::string& path) { return io::parse_word(io::read_text(path)); }

// coordinate | cylinder:<word> | weight:<sym>=<w>,<sym>=<w>
TestFunction parse_phi(const std::string& spec) {
  if (spec == "coordinate") return coordinate_function(1.0);
  if (spec.rfind("cylinder:", 0) == 0) return cylinder_function(io::parse_word(spec.substr(9)));
  if (spec.rfind("weight:", 0) == 0) {
    std::map<Symbol, double> w;
    std::stringstream ss(spec.substr(7));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::InvalidInput, "weight entries look like 1=0.5");
      w[std::stod(item.substr(0, eq))] = std::stod(item.substr(eq + 1));
    }
    return symbol_weight_function(w);
  }
  throw Error(ErrorCode::InvalidInput, "unknown test function '" + spec + "'");
}

std::string number(double v) { return io::format_number(v); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feldman-Katok distances, GIKN towers and ergodic diagnostics"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "run a registered experiment from a JSON config");
  run->add_option("--config", config_path, "experiment config")->required();
  run->add_option("--out", out_dir, "output directory (overrides the config)");

  app.add_subcommand("list", "list registered experiments");

  std::string xf;
  std::string zf;
  std::size_t n = 0;
  double delta = 0.0;
  double tol = 1e-3;
  auto* match = app.add_subcommand("match", "gap of two periodic orbits at horizon n");
  match->add_option("--x", xf)->required();
  match->add_option("--z", zf)->required();
  match->add_option("--n", n)->required();
  match->add_option("--delta", delta)->required();

  auto* fk = app.add_subcommand("fk", "Feldman-Katok distance of two periodic orbits");
  fk->add_option("--x", xf)->required();
  fk->add_option("--z", zf)->required();
  fk->add_option("--tol", tol);

  auto* gikn = app.add_subcommand("gikn", "synthesize or verify a GIKN tower");
  gikn->require_subcommand(1);
  std::string tower_cfg;
  std::string tower_file;
  auto* synth = gikn->add_subcommand("synth", "synthesize a tower");
  synth->add_option("--config", tower_cfg)->required();
  synth->add_option("--out", tower_file, "write the tower JSON here instead of stdout");
  auto* verify = gikn->add_subcommand("verify", "re-verify a stored tower");
  verify->add_option("--tower", tower_file)->required();
  verify->add_option("--tol", tol);

  std::string seq_file;
  std::string phi_spec = "coordinate";
  double alpha = 0.1;
  std::vector<std::size_t> klist;
  auto* ox = app.add_subcommand("oxtoby", "bad-segment densities of a symbol stream");
  ox->add_option("--seq", seq_file)->required();
  ox->add_option("--phi", phi_spec, "coordinate | cylinder:<word> | weight:<s>=<w>,...");
  ox->add_option("--alpha", alpha);
  ox->add_option("--klist", klist)->delimiter(',')->required();

  std::size_t mmax = 10;
  auto* ent = app.add_subcommand("entropy", "block entropies of a symbol stream");
  ent->add_option("--stream", seq_file)->required();
  ent->add_option("--mmax", mmax);

  std::string blocks_file;
  double eps = 0.2;
  auto* kat = app.add_subcommand("katok", "Katok (n, eps)-triviality of a block distribution");
  kat->add_option("--blocks", blocks_file)->required();
  kat->add_option("--eps", eps);

  std::vector<std::size_t> nlist;
  auto* kron = app.add_subcommand("kronecker", "loosely Kronecker diagnostic of a symbol stream");
  kron->add_option("--stream", seq_file)->required();
  kron->add_option("--eps", eps);
  kron->add_option("--nlist", nlist)->delimiter(',')->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      auto cfg = load_config(config_path);
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      const int rc = run_experiment(cfg);
      std::cout << (rc == 0 ? "pass" : "fail") << ": " << cfg.name << "\n";
      return rc;
    }
    if (app.got_subcommand("list")) {
      for (const auto& name : experiment_names()) std::cout << name << "\n";
      return 0;
    }
    if (match->parsed()) {
      const auto x = load_orbit(xf);
      const auto z = load_orbit(zf);
      const auto g = gap(x.system(), x.trajectory(n), z.trajectory(n), n, delta);
      json out = {{"value", g.value},
                  {"fit", g.fit},
                  {"certified", g.certified == Certification::Exact ? "exact" : "upper-bound"},
                  {"bracket", {g.value, g.value}}};
      std::cout << out.dump() << "\n";
      return 0;
    }
    if (fk->parsed()) {
      const auto r = fk_distance(load_orbit(xf), load_orbit(zf), tol);
      json out = {{"value", r.value}, {"certified", r.converged}, {"bracket", {r.lo, r.hi}}};
      std::cout << out.dump() << "\n";
      return 0;
    }
    if (synth->parsed()) {
      const auto gs = synthesize_gikn(io::gikn_config_from_json(json::parse(io::read_text(tower_cfg))));
      const std::string text = io::tower_to_json(gs).dump(2) + "\n";
      if (tower_file.empty()) {
        std::cout << text;
      } else {
        io::write_text(tower_file, text);
      }
      return 0;
    }
    if (verify->parsed()) {
      const auto gs = io::tower_from_json(json::parse(io::read_text(tower_file)));
      const auto rep = verify_cauchy(gs, tol);
      json checks = json::array();
      for (const auto& e : rep.consecutive) {
        checks.push_back({{"name", "consecutive " + std::to_string(e.n) + "-" + std::to_string(e.m)},
                          {"value", e.fk}, {"bound", e.bound}, {"pass", e.pass}});
      }
      for (const auto& e : rep.pairs) {
        checks.push_back({{"name", "telescoped " + std::to_string(e.n) + "-" + std::to_string(e.m)},
                          {"value", e.fk}, {"bound", e.bound}, {"pass", e.pass}});
      }
      for (const auto& d : exponent_decay(gs)) {
        checks.push_back({{"name", "decay " + std::to_string(d.level) + "-" + std::to_string(d.level + 1)},
                          {"value", d.ratio}, {"bound", gs.alpha}, {"pass", d.pass}});
      }
      bool all = true;
      for (const auto& c : checks) all = all && c.at("pass").get<bool>();
      std::cout << json{{"status", all ? "pass" : "fail"}, {"checks", checks}}.dump(2) << "\n";
      return all ? 0 : 1;
    }
    if (ox->parsed()) {
      const auto curve = bad_segment_density(stream_points(load_stream(seq_file)), parse_phi(phi_spec), alpha, klist);
      std::cout << "# finite-scale diagnostic, phi* = " << number(curve.phi_star) << "\nk,density\n";
      for (const auto& pt : curve.points) std::cout << pt.k << "," << number(pt.density) << "\n";
      return 0;
    }
    if (ent->parsed()) {
      std::cout << "m,H_m[nats],H_m/m[nats],undersampled\n";
      for (const auto& e : block_entropy_rate(load_stream(seq_file), mmax)) {
        std::cout << e.m << "," << number(e.block_entropy) << "," << number(e.rate) << ","
                  << (e.undersampled ? "yes" : "no") << "\n";
      }
      return 0;
    }
    if (kat->parsed()) {
      const auto bd = io::blocks_from_json(json::parse(io::read_text(blocks_file)));
      const auto k = katok_trivial(bd, eps);
      std::cout << "n,witness,ball_mass,beta,trivial,sqrt_beta_trivial,exhaustive,boundary_blocks\n"
                << bd.n << "," << io::format_word(k.witness) << "," << number(k.ball_mass) << "," << number(k.beta)
                << "," << (k.trivial ? "yes" : "no") << "," << (k.sqrt_beta ? "yes" : "no") << ","
                << (k.exhaustive ? "yes" : "not-found-mode") << "," << k.boundary_blocks << "\n";
      return 0;
    }
    if (kron->parsed()) {
      std::cout << "n,mass,pass,set_size,distinct_blocks\n";
      for (const auto& pt : loosely_kronecker_diagnostic(load_stream(seq_file), eps, nlist)) {
        std::cout << pt.n << "," << number(pt.mass) << "," << (pt.pass ? "yes" : "no") << "," << pt.set_size << ","
                  << pt.distinct_blocks << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
