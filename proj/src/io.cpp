#include "fkdyn/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fkdyn::io {

namespace {

bool digit_word(const Word& w) {
  for (Symbol s : w) {
    if (!(s >= 0 && s <= 9 && s == std::floor(s))) return false;
  }
  return true;
}

Symbol symbol_from_key(const std::string& key) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), v);
  if (ec != std::errc() || ptr != key.data() + key.size()) {
    throw Error(ErrorCode::InvalidInput, "not a symbol: '" + key + "'");
  }
  return v;
}

Word word_from_json(const json& j) {
  if (j.is_string()) return parse_word(j.get<std::string>());
  if (j.is_array()) return j.get<Word>();
  throw Error(ErrorCode::InvalidInput, "word must be a string or an array of numbers");
}

}  // namespace

Word parse_word(const std::string& text) {
  const bool separated = text.find_first_of(" \t,.-") != std::string::npos &&
                         text.find_first_not_of(" \t\r\n") != std::string::npos;
  Word w;
  if (separated) {
    std::string t = text;
    for (auto& c : t) {
      if (c == ',') c = ' ';
    }
    std::istringstream in(t);
    std::string tok;
    while (in >> tok) w.push_back(symbol_from_key(tok));
    return w;
  }
  for (char c : text) {
    if (c == '\n' || c == '\r') continue;
    if (c < '0' || c > '9') throw Error(ErrorCode::InvalidInput, std::string("unexpected character '") + c + "' in word");
    w.push_back(static_cast<Symbol>(c - '0'));
  }
  return w;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_word(const Word& w) {
  std::string out;
  if (digit_word(w)) {
    out.reserve(w.size());
    for (Symbol s : w) out.push_back(static_cast<char>('0' + static_cast<int>(s)));
    return out;
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += format_number(w[i]);
  }
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  out << text;
}

MetricSystem system_by_label(const std::string& label, std::size_t depth) {
  if (label == "full-shift") return MetricSystem::full_shift(depth);
  if (label == "countable-product") return MetricSystem::countable_product(depth);
  throw Error(ErrorCode::InvalidInput, "unknown system '" + label + "'");
}

PeriodicOrbit orbit_from_json(const json& j) {
  if (!j.is_object() || !j.contains("block")) throw Error(ErrorCode::InvalidInput, "orbit needs a block");
  const auto sys = system_by_label(j.value("system", std::string("full-shift")));
  return PeriodicOrbit::from_word(sys, word_from_json(j.at("block")));
}

json orbit_to_json(const PeriodicOrbit& orbit, const std::string& label) {
  return json{{"system", label}, {"block", orbit.word()}};
}

DiscreteMeasure measure_from_json(const MetricSystem& system, const json& j) {
  if (!j.is_object() || !j.contains("support") || !j.contains("weights")) {
    throw Error(ErrorCode::InvalidInput, "measure needs support and weights");
  }
  std::vector<Point> support;
  for (const auto& p : j.at("support")) {
    if (p.is_number()) {
      support.emplace_back(p.get<double>());
    } else {
      support.emplace_back(make_periodic_point(word_from_json(p)));
    }
  }
  return make_measure(system, std::move(support), j.at("weights").get<std::vector<double>>());
}

json measure_to_json(const DiscreteMeasure& mu) {
  json support = json::array();
  for (const auto& p : mu.support) {
    if (const auto* v = std::get_if<double>(&p)) {
      support.push_back(*v);
    } else {
      throw Error(ErrorCode::InvalidInput, "only real supports are serialized");
    }
  }
  return json{{"support", support}, {"weights", mu.weights}};
}

BlockDistribution blocks_from_json(const json& j) {
  if (!j.is_object() || j.empty()) throw Error(ErrorCode::InvalidInput, "block distribution must be a nonempty object");
  BlockDistribution bd;
  for (const auto& [key, value] : j.items()) {
    Word w = parse_word(key);
    if (bd.n == 0) bd.n = w.size();
    if (w.size() != bd.n || w.empty()) throw Error(ErrorCode::LengthMismatch, "block '" + key + "' has the wrong length");
    bd.probs[w] += value.get<double>();
  }
  return bd;
}

json blocks_to_json(const BlockDistribution& bd) {
  json j = json::object();
  for (const auto& [w, p] : bd.probs) j[format_word(w)] = p;
  return j;
}

json tower_to_json(const GiknSequence& gs) {
  json levels = json::array();
  for (const auto& l : gs.levels) {
    levels.push_back({{"word", format_word(l.word)}, {"gamma", l.gamma}, {"kappa", l.kappa}, {"chi", l.chi}});
  }
  json weights = json::object();
  for (const auto& [s, v] : gs.weights) weights[format_number(s)] = v;
  return json{{"levels", levels}, {"weights", weights}, {"alpha", gs.alpha}};
}

GiknSequence tower_from_json(const json& j) {
  if (!j.is_object() || !j.contains("levels") || !j.contains("weights")) {
    throw Error(ErrorCode::InvalidInput, "tower needs levels and weights");
  }
  std::vector<Word> words;
  std::vector<double> gammas;
  std::vector<double> kappas;
  for (const auto& l : j.at("levels")) {
    words.push_back(word_from_json(l.at("word")));
    if (words.size() > 1) {
      gammas.push_back(l.at("gamma").get<double>());
      kappas.push_back(l.at("kappa").get<double>());
    }
  }
  CocycleWeights weights;
  for (const auto& [key, value] : j.at("weights").items()) weights[symbol_from_key(key)] = value.get<double>();
  return tower_from_words(words, gammas, kappas, weights, j.value("alpha", 0.5));
}

GiknConfig gikn_config_from_json(const json& j) {
  static const std::set<std::string> known = {"alphabet", "seed_word", "levels",          "gamma_budget", "kappa_floor",
                                              "weights",  "alpha",     "max_tail_copies", "max_repeats"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw Error(ErrorCode::InvalidConfig, "'" + k + "' unknown key");
  }
  for (const char* k : {"alphabet", "seed_word", "levels", "gamma_budget", "kappa_floor", "weights", "alpha"}) {
    if (!j.contains(k)) throw Error(ErrorCode::InvalidConfig, std::string("'") + k + "' missing");
  }
  GiknConfig c;
  c.alphabet = parse_word(j.at("alphabet").get<std::string>());
  c.seed = parse_word(j.at("seed_word").get<std::string>());
  c.levels = j.at("levels").get<std::size_t>();
  c.gamma_budget = j.at("gamma_budget").get<std::vector<double>>();
  c.kappa_floor = j.at("kappa_floor").get<std::vector<double>>();
  for (const auto& [k, v] : j.at("weights").items()) c.weights[parse_word(k).at(0)] = v.get<double>();
  c.alpha = j.at("alpha").get<double>();
  if (j.contains("max_tail_copies")) c.max_tail_copies = j.at("max_tail_copies").get<std::size_t>();
  if (j.contains("max_repeats")) c.max_repeats = j.at("max_repeats").get<std::size_t>();
  return c;
}

std::string coupling_csv(const Coupling& c) {
  std::string out = "u,w,mass\n";
  for (const auto& [key, m] : c.mass) {
    out += format_word(key.first) + "," + format_word(key.second) + "," + format_number(m) + "\n";
  }
  return out;
}

}  // namespace fkdyn::io
