#include "qnum/convexity.hpp"

#include "qnum/errors.hpp"
#include "qnum/reformulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qnum {

namespace {

constexpr double kCond2EdgeMargin = 1e-9;
constexpr int kRefineRounds = 4;
constexpr int kRefinePoints = 1000;

struct GSample {
  double g = 0.0;
  bool denominator_ok = true;
};

GSample sample_g(const MeasureModel& m, double u) {
  const double d1 = m.log_d1(u);
  const double d2 = m.log_d2(u);
  const double denom = u * d2 + d1;
  if (!(denom > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), false};
  return {d1 / denom - (1.0 - u) / u, true};
}

// Uniform bulk plus geometric clusters at both ends of [lo, hi].
std::vector<double> cond2_mesh(double lo, double hi, int n) {
  std::vector<double> mesh;
  mesh.reserve(static_cast<std::size_t>(n));
  const int n_edge = n / 4;
  const int n_bulk = n - 2 * n_edge;
  const double span = hi - lo;
  for (int k = 0; k < n_bulk; ++k) {
    mesh.push_back(lo + span * k / std::max(1, n_bulk - 1));
  }
  const double log_min = std::log(kCond2EdgeMargin);
  const double log_max = std::log(0.5 * span);
  for (int k = 0; k < n_edge; ++k) {
    const double frac = n_edge > 1 ? static_cast<double>(k) / (n_edge - 1) : 0.0;
    const double dist = std::exp(log_min + frac * (log_max - log_min));
    mesh.push_back(lo + dist);
    mesh.push_back(hi - dist);
  }
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());
  std::erase_if(mesh, [&](double u) { return u < lo || u > hi; });
  return mesh;
}

}  // namespace

std::string to_string(CertificateClass c) {
  switch (c) {
    case CertificateClass::Cond12:
      return "Cond12";
    case CertificateClass::PreservedConvex:
      return "PreservedConvex";
    case CertificateClass::RestrictedDomain:
      return "RestrictedDomain";
    case CertificateClass::Uncertified:
      return "Uncertified";
  }
  return "Uncertified";
}

CertificateClass weakest(CertificateClass a, CertificateClass b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

bool Cond2Report::passed() const noexcept {
  if (vacuous) return true;
  return !denominator_failure_u && min_g >= kCond2PassThreshold;
}

bool check_cond1(const MeasureModel& m) { return m.threshold() >= 0.5; }

double cond2_margin(const MeasureModel& m, double u) {
  const auto s = sample_g(m, u);
  if (!s.denominator_ok) {
    std::ostringstream msg;
    msg << m.id() << ": u F'' + F' <= 0 at u = " << u;
    throw DomainError(msg.str());
  }
  return s.g;
}

Cond2Report check_cond2(const MeasureModel& m, int grid) {
  if (grid < 3) throw DomainError("g(u) scan needs at least 3 grid points");
  Cond2Report report;
  double start = 0.0;
  if (auto c1 = inflection_point(m)) {
    start = *c1;
  } else if (log_curvature_sign(m) > 0) {
    start = m.threshold();
  } else {
    report.vacuous = true;
    report.min_g = std::numeric_limits<double>::infinity();
    report.argmin_u = std::numeric_limits<double>::quiet_NaN();
    return report;
  }

  report.range_lo = start + kCond2EdgeMargin;
  report.range_hi = 1.0 - kCond2EdgeMargin;
  const auto mesh = cond2_mesh(report.range_lo, report.range_hi, grid);
  report.grid_points = static_cast<int>(mesh.size());

  report.min_g = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    const auto s = sample_g(m, mesh[k]);
    if (!s.denominator_ok) {
      if (!report.denominator_failure_u) report.denominator_failure_u = mesh[k];
      continue;
    }
    if (s.g < report.min_g) {
      report.min_g = s.g;
      best = k;
    }
  }
  report.argmin_u = mesh[best];
  if (report.denominator_failure_u) return report;

  double lo = mesh[best == 0 ? 0 : best - 1];
  double hi = mesh[std::min(best + 1, mesh.size() - 1)];
  for (int round = 0; round < kRefineRounds && hi > lo; ++round) {
    double round_best = report.argmin_u;
    for (int k = 0; k <= kRefinePoints; ++k) {
      const double u = lo + (hi - lo) * k / kRefinePoints;
      const auto s = sample_g(m, u);
      if (!s.denominator_ok) {
        report.denominator_failure_u = u;
        return report;
      }
      if (s.g < report.min_g) {
        report.min_g = s.g;
        round_best = u;
      }
    }
    report.argmin_u = round_best;
    const double step = (hi - lo) / kRefinePoints;
    lo = std::max(report.range_lo, round_best - step);
    hi = std::min(report.range_hi, round_best + step);
  }
  return report;
}

ConvexityCertificate certify(const MeasureModel& m, int cond2_grid) {
  ConvexityCertificate cert;
  cert.zero_threshold = m.threshold();
  cert.cond1_pass = check_cond1(m);

  switch (m.kind()) {
    case MeasureKind::Negativity:
      cert.cls = CertificateClass::PreservedConvex;
      cert.inflection = inflection_point(m);
      return cert;
    case MeasureKind::TeleportationSuccess:
      cert.cls = CertificateClass::RestrictedDomain;
      cert.restricted_cutoff = 0.5;
      cert.inflection = inflection_point(m);
      return cert;
    default:
      break;
  }

  try {
    cert.inflection = inflection_point(m);
    cert.cond2 = check_cond2(m, cond2_grid);
  } catch (const NonUniqueInflectionError& e) {
    cert.note = e.what();
    cert.cls = CertificateClass::Uncertified;
    return cert;
  }
  cert.cls = cert.cond1_pass && cert.cond2->passed()
                 ? CertificateClass::Cond12
                 : CertificateClass::Uncertified;
  return cert;
}

double lemma_sup_bound(int n, double t, std::optional<double> beta) {
  if (n < 2) throw DomainError("lemma bound needs n >= 2");
  if (!(t > 0.0 && t < 1.0)) throw DomainError("lemma bound needs 0 < t < 1");
  if (beta && !(*beta > 0.0 && *beta < 1.0)) {
    throw DomainError("lemma bound needs 0 < beta < 1");
  }
  return n - 2.0 + beta.value_or(0.0) + 1.0 / t;
}

double gershgorin_lower_bound(const Eigen::MatrixXd& h) {
  double bound = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    const double radius = h.row(k).cwiseAbs().sum() - std::abs(h(k, k));
    bound = std::min(bound, h(k, k) - radius);
  }
  return bound;
}

PsdProbe hessian_psd_probe(const Problem& problem, const Eigen::VectorXd& y) {
  const auto report = feasibility(problem, y);
  if (!report.feasible) {
    throw InfeasibleError("PSD probe requires a strictly feasible point");
  }
  const auto hess = objective_hessian(problem, y);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess,
                                                     Eigen::EigenvaluesOnly);
  PsdProbe probe;
  probe.min_eigenvalue_estimate = eig.eigenvalues().minCoeff();

  const auto point = eval_point(problem.network(), y);
  for (std::size_t i = 0; i < problem.num_routes(); ++i) {
    const Eigen::MatrixXd block =
        -route_log_measure_hessian(problem, point, i);
    const double b = gershgorin_lower_bound(block);
    probe.route_gershgorin_bounds.push_back(b);
    probe.gershgorin_bound += b;
  }
  return probe;
}

}  // namespace qnum
