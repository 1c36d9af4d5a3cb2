#include "fkdyn/seqcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace fkdyn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPeriodic: return "NotPeriodic";
    case ErrorCode::BadSchedule: return "BadSchedule";
    case ErrorCode::HorizonTooShort: return "HorizonTooShort";
    case ErrorCode::BruteTooLarge: return "BruteTooLarge";
    case ErrorCode::HorizonMismatch: return "HorizonMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SupportTooLarge: return "SupportTooLarge";
    case ErrorCode::ProblemTooLarge: return "ProblemTooLarge";
    case ErrorCode::InfeasibleMarginals: return "InfeasibleMarginals";
    case ErrorCode::NotGoodApproximation: return "NotGoodApproximation";
    case ErrorCode::InvalidPeriods: return "InvalidPeriods";
    case ErrorCode::BudgetInfeasible: return "BudgetInfeasible";
    case ErrorCode::MissingWeight: return "MissingWeight";
    case ErrorCode::NoAdequateMatch: return "NoAdequateMatch";
    case ErrorCode::NoGoodCut: return "NoGoodCut";
    case ErrorCode::UnknownExperiment: return "UnknownExperiment";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

SymbolSeq::SymbolSeq(Word prefix, Word cycle) : prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
  if (cycle_.empty()) throw Error(ErrorCode::InvalidInput, "symbol sequence needs a nonempty cycle");
}

SymbolicPoint make_symbolic_point(Word prefix, Word cycle) {
  return {std::make_shared<const SymbolSeq>(std::move(prefix), std::move(cycle)), 0};
}

SymbolicPoint make_periodic_point(Word cycle) { return make_symbolic_point({}, std::move(cycle)); }

namespace {

std::size_t normalize_shift(const SymbolSeq& s, std::size_t shift) {
  if (shift < s.prefix_size()) return shift;
  return s.prefix_size() + (shift - s.prefix_size()) % s.cycle_size();
}

const SymbolicPoint& as_symbolic(const Point& p) {
  if (const auto* s = std::get_if<SymbolicPoint>(&p)) return *s;
  throw Error(ErrorCode::InvalidInput, "expected a symbolic point");
}

double as_real(const Point& p) {
  if (const auto* d = std::get_if<double>(&p)) return *d;
  throw Error(ErrorCode::InvalidInput, "expected a real point");
}

Point shift_map(const Point& p) {
  const auto& s = as_symbolic(p);
  return SymbolicPoint{s.seq, normalize_shift(*s.seq, s.shift + 1)};
}

double circle_arc(double a, double b) {
  double d = std::fabs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

}  // namespace

ShiftDistance shift_metric(const SymbolicPoint& a, const SymbolicPoint& b, std::size_t depth) {
  for (std::size_t j = 0; j < depth; ++j) {
    if (a.at(j) != b.at(j)) return {std::ldexp(1.0, -static_cast<int>(j)), false};
  }
  return {0.0, true};
}

bool same_sequence(const SymbolicPoint& a, const SymbolicPoint& b) {
  const std::size_t pa = a.seq->prefix_size() > a.shift ? a.seq->prefix_size() - a.shift : 0;
  const std::size_t pb = b.seq->prefix_size() > b.shift ? b.seq->prefix_size() - b.shift : 0;
  const std::size_t span = std::max(pa, pb) + a.seq->cycle_size() + b.seq->cycle_size();
  for (std::size_t j = 0; j < span; ++j) {
    if (a.at(j) != b.at(j)) return false;
  }
  return true;
}

std::size_t shift_agreement_length(double delta, std::size_t depth) {
  // ρ = 2^-m < δ  ⇔  m ≥ m_min; ρ = 0 needs agreement on all `depth` symbols.
  if (delta > 1.0) return 0;
  std::size_t m = 0;
  while (m < depth && std::ldexp(1.0, -static_cast<int>(m)) >= delta) ++m;
  return m;
}

MetricSystem MetricSystem::full_shift(std::size_t depth) {
  MetricSystem s;
  s.kind_ = PointKind::Symbolic;
  s.family_ = MetricFamily::ShiftStandard;
  s.depth_ = depth;
  s.label_ = "full-shift";
  s.diameter_ = 1.0;
  s.metric_ = [depth](const Point& a, const Point& b) {
    return shift_metric(as_symbolic(a), as_symbolic(b), depth).value;
  };
  s.map_ = shift_map;
  return s;
}

MetricSystem MetricSystem::countable_product(std::size_t depth) {
  MetricSystem s;
  s.kind_ = PointKind::Symbolic;
  s.family_ = MetricFamily::WeightedL1Product;
  s.depth_ = depth;
  s.label_ = "countable-product";
  s.diameter_ = 2.0;
  s.metric_ = [depth](const Point& a, const Point& b) {
    const auto& x = as_symbolic(a);
    const auto& y = as_symbolic(b);
    double sum = 0.0;
    for (std::size_t j = 0; j < depth; ++j) {
      sum += std::ldexp(std::fabs(x.at(j) - y.at(j)), -static_cast<int>(j));
    }
    return sum;
  };
  s.map_ = shift_map;
  return s;
}

MetricSystem MetricSystem::circle_rotation(double alpha) {
  MetricSystem s;
  s.kind_ = PointKind::Circle;
  s.family_ = MetricFamily::CircleArc;
  s.label_ = "circle-rotation:" + std::to_string(alpha);
  s.diameter_ = 0.5;
  s.rotation_ = alpha;
  s.metric_ = [](const Point& a, const Point& b) { return circle_arc(as_real(a), as_real(b)); };
  s.map_ = [alpha](const Point& p) -> Point {
    double v = as_real(p) + alpha;
    v -= std::floor(v);
    return v;
  };
  return s;
}

MetricSystem MetricSystem::real_line(MapFn map, std::string label) {
  MetricSystem s;
  s.kind_ = PointKind::Real;
  s.family_ = MetricFamily::AbsDiff;
  s.label_ = std::move(label);
  s.metric_ = [](const Point& a, const Point& b) { return std::fabs(as_real(a) - as_real(b)); };
  s.map_ = std::move(map);
  return s;
}

MetricSystem MetricSystem::custom(PointKind kind, MetricFn metric, MapFn map, std::string label,
                                  std::optional<double> diameter) {
  MetricSystem s;
  s.kind_ = kind;
  s.family_ = MetricFamily::Custom;
  s.label_ = std::move(label);
  s.diameter_ = diameter;
  s.metric_ = std::move(metric);
  s.map_ = std::move(map);
  return s;
}

bool MetricSystem::same_point(const Point& a, const Point& b) const {
  if (kind_ == PointKind::Symbolic) return same_sequence(as_symbolic(a), as_symbolic(b));
  return distance(a, b) <= 1e-12;
}

PointSeq::PointSeq(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorCode::InvalidInput, "point sequence must be nonempty");
}

PointSeq PointSeq::reals(std::span<const double> values) {
  return PointSeq(std::vector<Point>(values.begin(), values.end()));
}

PointSeq PointSeq::prefix(std::size_t n) const {
  if (n > points_.size()) throw Error(ErrorCode::HorizonTooShort, "prefix longer than sequence");
  return PointSeq(std::vector<Point>(points_.begin(), points_.begin() + static_cast<std::ptrdiff_t>(n)));
}

PointSeq PointSeq::concat(const PointSeq& other) const {
  std::vector<Point> out = points_;
  out.insert(out.end(), other.points_.begin(), other.points_.end());
  return PointSeq(std::move(out));
}

PointSeq orbit_segment(const MetricSystem& system, const Point& start, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidInput, "orbit segment length must be ≥ 1");
  std::vector<Point> pts;
  pts.reserve(n);
  pts.push_back(start);
  for (std::size_t i = 1; i < n; ++i) pts.push_back(system.map(pts.back()));
  return PointSeq(std::move(pts));
}

PeriodicOrbit::PeriodicOrbit(MetricSystem system, PointSeq base_block)
    : system_(std::move(system)), block_(std::move(base_block)) {}

PeriodicOrbit periodic_orbit(const MetricSystem& system, const PointSeq& seed_block) {
  const std::size_t n = seed_block.size();
  if (n == 0) throw Error(ErrorCode::NotPeriodic, "empty block");
  for (std::size_t i = 0; i < n; ++i) {
    const Point next = system.map(seed_block[i]);
    if (!system.same_point(next, seed_block[(i + 1) % n])) {
      throw Error(ErrorCode::NotPeriodic,
                  "T(block[" + std::to_string(i) + "]) ≠ block[" + std::to_string((i + 1) % n) + "]");
    }
  }
  return PeriodicOrbit(system, seed_block);
}

PeriodicOrbit PeriodicOrbit::from_word(const MetricSystem& system, const Word& word) {
  if (system.kind() != PointKind::Symbolic) {
    throw Error(ErrorCode::InvalidInput, "from_word needs a symbolic system");
  }
  if (word.empty()) throw Error(ErrorCode::NotPeriodic, "empty word");
  auto seq = std::make_shared<const SymbolSeq>(Word{}, word);
  std::vector<Point> pts;
  pts.reserve(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) pts.emplace_back(SymbolicPoint{seq, i});
  return PeriodicOrbit(system, PointSeq(std::move(pts)));
}

Word PeriodicOrbit::word() const {
  const auto& first = as_symbolic(block_[0]);
  Word w(period());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = first.at(j);
  return w;
}

PointSeq PeriodicOrbit::trajectory(std::size_t length, std::size_t start) const {
  std::vector<Point> pts;
  pts.reserve(length);
  const std::size_t n = period();
  for (std::size_t i = 0; i < length; ++i) pts.push_back(block_[(start + i) % n]);
  return PointSeq(std::move(pts));
}

PeriodicOrbit PeriodicOrbit::rotated(std::size_t k) const {
  return PeriodicOrbit(system_, trajectory(period(), k % period()));
}

QuasiOrbit::QuasiOrbit(PointSeq points, std::vector<std::size_t> switch_indices)
    : points_(std::move(points)), switches_(std::move(switch_indices)) {
  if (!std::is_sorted(switches_.begin(), switches_.end())) {
    throw Error(ErrorCode::InvalidInput, "switch indices must be sorted");
  }
}

double QuasiOrbit::switch_density(std::size_t prefix_length) const {
  if (prefix_length == 0) return 0.0;
  const auto count = std::lower_bound(switches_.begin(), switches_.end(), prefix_length) - switches_.begin();
  return static_cast<double>(count) / static_cast<double>(prefix_length);
}

bool QuasiOrbit::is_consistent(const MetricSystem& system) const {
  std::size_t next_switch = 0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    while (next_switch < switches_.size() && switches_[next_switch] < i) ++next_switch;
    if (next_switch < switches_.size() && switches_[next_switch] == i) continue;
    const Point& prev = points_[i - 1];
    const Point& cur = points_[i];
    // Same shared sequence one shift apart is T-consistent without a full comparison.
    const auto* a = std::get_if<SymbolicPoint>(&prev);
    const auto* b = std::get_if<SymbolicPoint>(&cur);
    if (a != nullptr && b != nullptr && a->seq == b->seq &&
        normalize_shift(*a->seq, a->shift + 1) == normalize_shift(*b->seq, b->shift)) {
      continue;
    }
    if (!system.same_point(system.map(prev), cur)) return false;
  }
  return true;
}

PointSeq stream_points(const Word& stream) {
  if (stream.empty()) return {};
  auto seq = std::make_shared<const SymbolSeq>(stream, Word{stream.back()});
  std::vector<Point> pts;
  pts.reserve(stream.size());
  for (std::size_t j = 0; j < stream.size(); ++j) pts.emplace_back(SymbolicPoint{seq, j});
  return PointSeq(std::move(pts));
}

Word rotation_coding(double alpha, double x0, std::size_t length) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidInput, "rotation must lie in (0, 1)");
  Word out(length);
  for (std::size_t j = 0; j < length; ++j) {
    long double v = static_cast<long double>(x0) + static_cast<long double>(j) * static_cast<long double>(alpha);
    v -= std::floor(v);
    out[j] = v >= 1.0L - static_cast<long double>(alpha) ? 1.0 : 0.0;
  }
  return out;
}

QuasiOrbit assemble_quasi_orbit(std::span<const PeriodicOrbit> segments,
                                std::span<const std::size_t> lengths) {
  if (segments.empty() || segments.size() != lengths.size()) {
    throw Error(ErrorCode::BadSchedule, "need one length per segment");
  }
  for (std::size_t s = 0; s < lengths.size(); ++s) {
    if (lengths[s] == 0 || lengths[s] % segments[s].period() != 0) {
      throw Error(ErrorCode::BadSchedule,
                  "length " + std::to_string(lengths[s]) + " is not a positive multiple of period " +
                      std::to_string(segments[s].period()));
    }
    if (s > 0 && lengths[s] <= lengths[s - 1]) {
      throw Error(ErrorCode::BadSchedule, "lengths must be strictly increasing");
    }
  }
  const std::size_t total = std::accumulate(lengths.begin(), lengths.end(), std::size_t{0});
  std::vector<Point> pts;
  pts.reserve(total);
  std::vector<std::size_t> switches;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (s > 0) switches.push_back(pts.size());
    const auto& block = segments[s].base_block();
    for (std::size_t i = 0; i < lengths[s]; ++i) pts.push_back(block[i % block.size()]);
  }
  return QuasiOrbit(PointSeq(std::move(pts)), std::move(switches));
}

}  // namespace fkdyn
