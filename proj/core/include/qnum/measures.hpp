#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qnum {

enum class MeasureKind {
  SecretKeyFraction,        // "sk"
  DistillableEntanglement,  // "de"
  Negativity,               // "neg"
  TeleportationSuccess,     // "succ"
  Custom,
};

/// f, ln f and their first two derivatives at one Werner parameter.
struct LogMeasureJet {
  double f = 0.0;
  double log_f = 0.0;
  double d_log_f = 0.0;
  double d2_log_f = 0.0;
};

/// An entanglement measure f : [0, 1] -> [0, b] of a Werner state.
///
/// Holds the closed form of f and of f', f'' on the positive branch
/// {f > 0}. The log-measure F = ln f (natural log) and its derivatives are
/// derived by the quotient rule. The zero threshold c = sup{z : f(z) = 0}
/// is computed once at construction.
class MeasureModel {
 public:
  using ScalarFn = std::function<double(double)>;

  static MeasureModel secret_key_fraction();
  static MeasureModel distillable_entanglement();
  static MeasureModel negativity();
  static MeasureModel teleportation_success();

  /// Builtin measure by id ("sk", "de", "neg", "succ"); nullopt otherwise.
  static std::optional<MeasureModel> builtin(const std::string& id);

  /// `value` must include any max(0, .) clipping; `d1` and `d2` are only
  /// evaluated where value > 0.
  static MeasureModel custom(std::string id, ScalarFn value, ScalarFn d1,
                             ScalarFn d2);

  /// f(w) = max(0, sum_k coeffs[k] w^k).
  static MeasureModel polynomial(std::string id, std::vector<double> coeffs);

  const std::string& id() const noexcept { return id_; }
  MeasureKind kind() const noexcept { return kind_; }
  bool is_builtin() const noexcept { return kind_ != MeasureKind::Custom; }

  /// c = sup{z : f(z) = 0}, rounded up so that f > 0 strictly above it.
  double threshold() const noexcept { return threshold_; }
  double upper_bound() const noexcept { return upper_bound_; }
  bool satisfies_f0_zero() const noexcept { return f0_zero_; }

  /// f(w) for w in [0, 1]; exact limits at the endpoints.
  double value(double w) const;
  /// f'(w) and f''(w) for w in (c, 1).
  double d1(double w) const;
  double d2(double w) const;
  /// F = ln f and its derivatives for w in (c, 1) with f(w) > 0.
  double log_value(double w) const;
  double log_d1(double w) const;
  double log_d2(double w) const;

  /// All of the above at once with w clamped to [0, 1 - 1e-12]; the
  /// evaluation used by the objective. Throws DomainError when f(w) = 0.
  LogMeasureJet jet(double w) const;

 private:
  MeasureModel(std::string id, MeasureKind kind, ScalarFn value, ScalarFn d1,
               ScalarFn d2);

  void check_positive_branch(double w, const char* what) const;

  std::string id_;
  MeasureKind kind_;
  ScalarFn value_;
  ScalarFn d1_;
  ScalarFn d2_;
  double threshold_ = 0.0;
  double upper_bound_ = 0.0;
  bool f0_zero_ = true;
};

/// Measures by id: the four builtins plus any registered custom ones.
class MeasureRegistry {
 public:
  MeasureRegistry();

  /// Adds or replaces a custom measure. Builtin ids cannot be replaced.
  void add(MeasureModel measure);
  const MeasureModel* find(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  std::map<std::string, MeasureModel> measures_;
};

double measure_value(const MeasureModel& m, double w);
double measure_d1(const MeasureModel& m, double w);
double measure_d2(const MeasureModel& m, double w);
double log_measure_d1(const MeasureModel& m, double w);
double log_measure_d2(const MeasureModel& m, double w);

/// Bisection for sup{z : f(z) = 0} to absolute tolerance 1e-10. Returns 0
/// when f(1e-12) > 0; throws DegenerateMeasureError when f(1 - 1e-12) = 0.
double zero_threshold(const MeasureModel& m);

/// Unique root of F'' on (c, 1), scanned on a 1e5-point grid and refined by
/// bisection. nullopt when F'' keeps one sign; NonUniqueInflectionError on
/// more than one sign change.
std::optional<double> inflection_point(const MeasureModel& m);

/// Sign of F'' when it keeps one sign on (c, 1): -1 or +1. 0 if it changes.
int log_curvature_sign(const MeasureModel& m);

/// Fidelity (1 + 3w) / 4 of a Werner state.
double fidelity_from_werner(double w);
/// Inverse of fidelity_from_werner on [1/4, 1].
double werner_from_fidelity(double fidelity);
/// Bright-state population 3 (1 - w) / 4 of the matching single-photon state.
double bright_state_population(double w);

}  // namespace qnum
