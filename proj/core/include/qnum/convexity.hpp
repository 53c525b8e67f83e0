#pragma once

#include "qnum/measures.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace qnum {

class Problem;

/// Which argument makes a route's term in the log-rate objective convex.
/// Declared from strongest to weakest.
enum class CertificateClass {
  Cond12,            // zero threshold >= 1/2 and the v(u) <= 2 condition
  PreservedConvex,   // already convex in rates; the log change keeps it
  RestrictedDomain,  // convex after cutting the end-to-end parameter
  Uncertified,
};

std::string to_string(CertificateClass c);
CertificateClass weakest(CertificateClass a, CertificateClass b);

/// Result of scanning g(u) = 2 - u F'' / (u F'' + F') - 1/u where F'' > 0.
struct Cond2Report {
  double min_g = 0.0;
  double argmin_u = 0.0;
  int grid_points = 0;
  double range_lo = 0.0;
  double range_hi = 0.0;
  /// F'' <= 0 on all of (c, 1): nothing to check.
  bool vacuous = false;
  /// First u where u F'' + F' <= 0, if any.
  std::optional<double> denominator_failure_u;

  bool passed() const noexcept;
};

struct ConvexityCertificate {
  CertificateClass cls = CertificateClass::Uncertified;
  double zero_threshold = 0.0;
  std::optional<double> inflection;
  bool cond1_pass = false;
  std::optional<Cond2Report> cond2;
  std::optional<double> restricted_cutoff;
  /// Set when the checks themselves failed (e.g. several inflections).
  std::optional<std::string> note;
};

inline constexpr double kCond2PassThreshold = -1e-9;
inline constexpr int kDefaultCond2Grid = 100000;

/// c >= 1/2.
bool check_cond1(const MeasureModel& m);

/// g(u) at one point; the form F'/(uF'' + F') - (1 - u)/u is used, which
/// equals 2 - v(u) without cancelling as u -> 1.
double cond2_margin(const MeasureModel& m, double u);

/// Scans g on a mesh over (c1 + 1e-9, 1 - 1e-9) that is uniform in the bulk
/// and geometric towards both ends, then refines around the minimum.
Cond2Report check_cond2(const MeasureModel& m, int grid = kDefaultCond2Grid);

ConvexityCertificate certify(const MeasureModel& m,
                             int cond2_grid = kDefaultCond2Grid);

/// Supremum of sum_{k<n} 1/b_k over 0 < b < 1 with prod b >= t, or of
/// beta/b_1 + sum_{k>=2} 1/b_k with prod b = t when beta is given.
double lemma_sup_bound(int n, double t, std::optional<double> beta = std::nullopt);

struct PsdProbe {
  double min_eigenvalue_estimate = 0.0;
  /// Sum over routes of the Gershgorin lower bounds of -D^2 F_i.
  double gershgorin_bound = 0.0;
  std::vector<double> route_gershgorin_bounds;
};

/// Gershgorin lower bound min_k (H_kk - sum_{m != k} |H_km|).
double gershgorin_lower_bound(const Eigen::MatrixXd& h);

/// Exact minimum eigenvalue of the objective Hessian at a strictly
/// feasible y, with the Gershgorin bound alongside. Throws InfeasibleError.
PsdProbe hessian_psd_probe(const Problem& problem, const Eigen::VectorXd& y);

}  // namespace qnum
