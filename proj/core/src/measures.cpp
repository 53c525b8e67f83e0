#include "qnum/measures.hpp"

#include "qnum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace qnum {

namespace {

constexpr double kLog2E = std::numbers::log2e;
constexpr double kLn2 = std::numbers::ln2;
constexpr double kEndpointEps = 1e-12;
constexpr double kBisectionTol = 1e-10;
constexpr double kInflectionMargin = 1e-9;
constexpr int kInflectionGrid = 100000;

// t log2(t / s) with the t -> 0 limit.
double xlog2(double t, double s) {
  if (t <= 0.0) return 0.0;
  return t * std::log2(t / s);
}

double sk_raw(double w) {
  // log2((1+w)/2) = log1p((w-1)/2) / ln 2 keeps precision near w = 1.
  const double plus = (1.0 + w) * std::log1p(0.5 * (w - 1.0)) / kLn2;
  return 1.0 + plus + xlog2(1.0 - w, 2.0);
}

double de_raw(double w) {
  const double p = 0.25 * (1.0 + 3.0 * w);
  const double q = 0.25 * (1.0 - w);
  const double plus = p * std::log1p(0.75 * (w - 1.0)) / kLn2;
  return 1.0 + plus + 3.0 * xlog2(q, 1.0);
}

void check_unit_interval(double w, const char* what) {
  if (!(w >= 0.0 && w <= 1.0)) {
    std::ostringstream msg;
    msg << what << ": Werner parameter " << w << " outside [0, 1]";
    throw DomainError(msg.str());
  }
}

struct CurvatureScan {
  std::vector<std::pair<double, double>> brackets;
  int sign = 0;  // sign of F'' at the last grid point
};

CurvatureScan scan_log_curvature(const MeasureModel& m) {
  const double lo = m.threshold() + kInflectionMargin;
  const double hi = 1.0 - kInflectionMargin;
  CurvatureScan scan;
  double prev_w = lo;
  int prev_sign = 0;
  for (int k = 0; k < kInflectionGrid; ++k) {
    const double w = lo + (hi - lo) * k / (kInflectionGrid - 1);
    const double curv = m.log_d2(w);
    const int s = curv > 0.0 ? 1 : (curv < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (prev_sign != 0 && s != prev_sign) scan.brackets.emplace_back(prev_w, w);
    prev_sign = s;
    prev_w = w;
  }
  scan.sign = prev_sign;
  return scan;
}

}  // namespace

MeasureModel::MeasureModel(std::string id, MeasureKind kind, ScalarFn value,
                           ScalarFn d1, ScalarFn d2)
    : id_(std::move(id)),
      kind_(kind),
      value_(std::move(value)),
      d1_(std::move(d1)),
      d2_(std::move(d2)) {
  upper_bound_ = value_(1.0);
  f0_zero_ = value_(0.0) == 0.0;
  threshold_ = zero_threshold(*this);
}

MeasureModel MeasureModel::secret_key_fraction() {
  return MeasureModel(
      "sk", MeasureKind::SecretKeyFraction,
      [](double w) { return std::max(0.0, sk_raw(w)); },
      [](double w) { return std::log2((1.0 + w) / (1.0 - w)); },
      [](double w) { return 2.0 * kLog2E / ((1.0 - w) * (1.0 + w)); });
}

MeasureModel MeasureModel::distillable_entanglement() {
  return MeasureModel(
      "de", MeasureKind::DistillableEntanglement,
      [](double w) { return std::max(0.0, de_raw(w)); },
      [](double w) { return 0.75 * std::log2((1.0 + 3.0 * w) / (1.0 - w)); },
      [](double w) { return 3.0 * kLog2E / ((1.0 + 3.0 * w) * (1.0 - w)); });
}

MeasureModel MeasureModel::negativity() {
  MeasureModel m(
      "neg", MeasureKind::Negativity,
      [](double w) { return std::max(0.0, 0.25 * (3.0 * w - 1.0)); },
      [](double) { return 0.75; }, [](double) { return 0.0; });
  m.threshold_ = 1.0 / 3.0;
  return m;
}

MeasureModel MeasureModel::teleportation_success() {
  return MeasureModel(
      "succ", MeasureKind::TeleportationSuccess,
      [](double w) { return 0.5 * (1.0 + w); }, [](double) { return 0.5; },
      [](double) { return 0.0; });
}

std::optional<MeasureModel> MeasureModel::builtin(const std::string& id) {
  if (id == "sk") return secret_key_fraction();
  if (id == "de") return distillable_entanglement();
  if (id == "neg") return negativity();
  if (id == "succ") return teleportation_success();
  return std::nullopt;
}

MeasureModel MeasureModel::custom(std::string id, ScalarFn value, ScalarFn d1,
                                  ScalarFn d2) {
  return MeasureModel(std::move(id), MeasureKind::Custom, std::move(value),
                      std::move(d1), std::move(d2));
}

MeasureModel MeasureModel::polynomial(std::string id,
                                      std::vector<double> coeffs) {
  if (coeffs.empty()) throw ValidationError("polynomial measure needs coefficients");
  auto horner = [](const std::vector<double>& c, double w) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * w + *it;
    return acc;
  };
  std::vector<double> first, second;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    first.push_back(static_cast<double>(k) * coeffs[k]);
  }
  for (std::size_t k = 1; k < first.size(); ++k) {
    second.push_back(static_cast<double>(k) * first[k]);
  }
  return custom(
      std::move(id),
      [coeffs, horner](double w) { return std::max(0.0, horner(coeffs, w)); },
      [first, horner](double w) { return horner(first, w); },
      [second, horner](double w) { return horner(second, w); });
}

double MeasureModel::value(double w) const {
  check_unit_interval(w, "measure value");
  return value_(w);
}

void MeasureModel::check_positive_branch(double w, const char* what) const {
  if (!(w > threshold_ && w < 1.0)) {
    std::ostringstream msg;
    msg << id_ << " " << what << ": w = " << w << " outside (" << threshold_
        << ", 1)";
    throw DomainError(msg.str());
  }
}

double MeasureModel::d1(double w) const {
  check_positive_branch(w, "first derivative");
  return d1_(w);
}

double MeasureModel::d2(double w) const {
  check_positive_branch(w, "second derivative");
  return d2_(w);
}

double MeasureModel::log_value(double w) const {
  check_unit_interval(w, "log measure");
  const double f = value_(w);
  if (!(f > 0.0)) {
    throw DomainError(id_ + ": ln f undefined where f = 0");
  }
  return std::log(f);
}

double MeasureModel::log_d1(double w) const {
  check_positive_branch(w, "log-measure derivative");
  const double f = value_(w);
  if (!(f > 0.0)) throw DomainError(id_ + ": ln f undefined where f = 0");
  return d1_(w) / f;
}

double MeasureModel::log_d2(double w) const {
  check_positive_branch(w, "log-measure second derivative");
  const double f = value_(w);
  if (!(f > 0.0)) throw DomainError(id_ + ": ln f undefined where f = 0");
  const double g = d1_(w);
  return (d2_(w) * f - g * g) / (f * f);
}

LogMeasureJet MeasureModel::jet(double w) const {
  w = std::clamp(w, 0.0, 1.0 - kEndpointEps);
  LogMeasureJet out;
  out.f = value_(w);
  if (!(out.f > 0.0)) {
    std::ostringstream msg;
    msg << id_ << ": measure vanishes at w = " << w;
    throw DomainError(msg.str());
  }
  const double g = d1_(w);
  out.log_f = std::log(out.f);
  out.d_log_f = g / out.f;
  out.d2_log_f = (d2_(w) * out.f - g * g) / (out.f * out.f);
  return out;
}

MeasureRegistry::MeasureRegistry() {
  for (auto m : {MeasureModel::secret_key_fraction(),
                 MeasureModel::distillable_entanglement(),
                 MeasureModel::negativity(),
                 MeasureModel::teleportation_success()}) {
    measures_.emplace(m.id(), std::move(m));
  }
}

void MeasureRegistry::add(MeasureModel measure) {
  const auto& id = measure.id();
  if (id == "sk" || id == "de" || id == "neg" || id == "succ") {
    throw ValidationError("cannot redefine builtin measure \"" + measure.id() +
                          "\"");
  }
  measures_.insert_or_assign(measure.id(), std::move(measure));
}

const MeasureModel* MeasureRegistry::find(const std::string& id) const {
  auto it = measures_.find(id);
  return it == measures_.end() ? nullptr : &it->second;
}

std::vector<std::string> MeasureRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, m] : measures_) out.push_back(id);
  return out;
}

double measure_value(const MeasureModel& m, double w) { return m.value(w); }
double measure_d1(const MeasureModel& m, double w) { return m.d1(w); }
double measure_d2(const MeasureModel& m, double w) { return m.d2(w); }
double log_measure_d1(const MeasureModel& m, double w) { return m.log_d1(w); }
double log_measure_d2(const MeasureModel& m, double w) { return m.log_d2(w); }

double zero_threshold(const MeasureModel& m) {
  if (m.value(kEndpointEps) > 0.0) return 0.0;
  double lo = kEndpointEps;
  double hi = 1.0 - kEndpointEps;
  if (!(m.value(hi) > 0.0)) {
    throw DegenerateMeasureError(m.id() + ": measure vanishes on all of [0, 1)");
  }
  // Invariant: f(lo) = 0 < f(hi).
  while (hi - lo > kBisectionTol) {
    const double mid = 0.5 * (lo + hi);
    if (m.value(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::optional<double> inflection_point(const MeasureModel& m) {
  const auto scan = scan_log_curvature(m);
  if (scan.brackets.empty()) return std::nullopt;
  if (scan.brackets.size() > 1) {
    std::ostringstream msg;
    msg << m.id() << ": ln f has " << scan.brackets.size()
        << " inflection points on (c, 1)";
    throw NonUniqueInflectionError(msg.str());
  }
  auto [lo, hi] = scan.brackets.front();
  const bool rising = m.log_d2(hi) > 0.0;
  while (hi - lo > kBisectionTol) {
    const double mid = 0.5 * (lo + hi);
    const bool positive = m.log_d2(mid) > 0.0;
    if (positive == rising) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

int log_curvature_sign(const MeasureModel& m) {
  const auto scan = scan_log_curvature(m);
  return scan.brackets.empty() ? scan.sign : 0;
}

double fidelity_from_werner(double w) {
  check_unit_interval(w, "fidelity");
  return 0.25 * (1.0 + 3.0 * w);
}

double werner_from_fidelity(double fidelity) {
  if (!(fidelity >= 0.25 && fidelity <= 1.0)) {
    throw DomainError("fidelity outside [1/4, 1]");
  }
  return (4.0 * fidelity - 1.0) / 3.0;
}

double bright_state_population(double w) {
  check_unit_interval(w, "bright-state population");
  return 0.75 * (1.0 - w);
}

}  // namespace qnum
