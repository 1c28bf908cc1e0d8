#include "vls/ramsey.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "vls/constants.hpp"
#include "vls/rng.hpp"

namespace vls::ramsey {

namespace k = vls::constants;

void RamseyConfig::validate() const {
  if (!(interrogation_s > 0)) throw ConfigError("ramsey: interrogation time must be > 0");
  if (!(contrast_a > 0 && contrast_a <= 1) || !(contrast_b > 0 && contrast_b <= 1)) {
    throw ConfigError("ramsey: contrast must be in (0, 1]");
  }
  if (pulse_phases.size() < 6) {
    throw ConfigError("ramsey: need at least 6 pulse phases for a fit");
  }
}

std::vector<double> RamseyConfig::phase_grid(int n) {
  std::vector<double> p(n);
  for (int i = 0; i < n; ++i) p[i] = k::two_pi * i / n;
  return p;
}

std::vector<ShotRecord> simulate_shots(const RamseyConfig& cfg) {
  cfg.validate();
  const rng::Stream psi_stream(cfg.seed, "ramsey.psi");
  const rng::Stream noise_a(cfg.seed, "ramsey.readout.a");
  const rng::Stream noise_b(cfg.seed, "ramsey.readout.b");
  const double gamma_g = k::gyromag_rad_s_g(cfg.g_f);
  const double dphi = gamma_g * cfg.delta_b_g * cfg.interrogation_s;

  std::vector<ShotRecord> shots(cfg.pulse_phases.size());
  for (std::size_t i = 0; i < shots.size(); ++i) {
    const double phi = cfg.pulse_phases[i];
    const double psi = cfg.noise == NoiseDistribution::uniform
                           ? psi_stream.angle(i)
                           : cfg.noise_rms_rad * psi_stream.normal(i);
    ShotRecord& s = shots[i];
    s.pulse_phase = phi;
    s.common_phase = psi;
    s.fza = cfg.contrast_a * std::cos(psi - phi);
    s.fzb = cfg.contrast_b * std::cos(psi - phi + dphi);
    if (cfg.readout_sigma > 0) {
      s.fza += cfg.readout_sigma * noise_a.normal(i);
      s.fzb += cfg.readout_sigma * noise_b.normal(i);
    }
  }
  return shots;
}

double qz_contrast(double t_s, double b0_g) {
  const double qz = k::two_pi * k::rb87::qz_hz_per_g2 * b0_g * b0_g;
  return std::abs(std::cos(qz * t_s));
}

double qz_nearest_contrast_max_s(double t_s, double b0_g) {
  const double qz = k::two_pi * k::rb87::qz_hz_per_g2 * b0_g * b0_g;
  if (qz == 0.0) return t_s;
  const double n = std::round(qz * t_s / k::pi);
  return n * k::pi / qz;
}

namespace {

struct Normalization {
  double mx = 0, my = 0, scale = 1;
};

// direct least squares with the ellipse constraint 4AC - B^2 = 1 on
// centered/scaled points, optionally Sampson-reweighted
Eigen::Matrix<double, 6, 1> dls_fit(const std::vector<Point2>& pts,
                                    const std::vector<double>& wts,
                                    double* condition_out) {
  const int n = static_cast<int>(pts.size());
  Eigen::Matrix3d s1 = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d s2 = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d s3 = Eigen::Matrix3d::Zero();
  for (int i = 0; i < n; ++i) {
    const double x = pts[i].x, y = pts[i].y, w = wts[i];
    const Eigen::Vector3d q(x * x, x * y, y * y);
    const Eigen::Vector3d l(x, y, 1.0);
    s1 += w * q * q.transpose();
    s2 += w * q * l.transpose();
    s3 += w * l * l.transpose();
  }

  if (condition_out) {
    Eigen::Matrix<double, 6, 6> scatter;
    scatter << s1, s2, s2.transpose(), s3;
    Eigen::JacobiSVD<Eigen::Matrix<double, 6, 6>> svd(scatter);
    const double smin = svd.singularValues()(5);
    *condition_out = smin > 0 ? svd.singularValues()(0) / smin
                              : std::numeric_limits<double>::infinity();
  }

  Eigen::FullPivLU<Eigen::Matrix3d> lu(s3);
  if (!lu.isInvertible()) {
    throw DegenerateFitError("ellipse_fit: degenerate (collinear?) input");
  }
  const Eigen::Matrix3d t = -lu.solve(s2.transpose());
  const Eigen::Matrix3d m = s1 + s2 * t;
  // premultiply by C1^-1 for constraint matrix C1 = [[0,0,2],[0,-1,0],[2,0,0]]
  Eigen::Matrix3d mc;
  mc.row(0) = 0.5 * m.row(2);
  mc.row(1) = -m.row(1);
  mc.row(2) = 0.5 * m.row(0);

  Eigen::EigenSolver<Eigen::Matrix3d> eig(mc);
  Eigen::Vector3d a1 = Eigen::Vector3d::Zero();
  bool found = false;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d v = eig.eigenvectors().col(i).real();
    const double cond = 4.0 * v(0) * v(2) - v(1) * v(1);
    if (cond > 0) {
      a1 = v / std::sqrt(cond);
      found = true;
    }
  }
  if (!found) {
    throw DegenerateFitError("ellipse_fit: no ellipse solution (degenerate input)");
  }
  Eigen::Matrix<double, 6, 1> a;
  a << a1, t * a1;
  if (a(0) + a(2) < 0) a = -a;  // canonical sign, fixes the phase branch
  return a;
}

Eigen::Matrix<double, 6, 1> fit_normalized(const std::vector<Point2>& pts,
                                           const EllipseFitOptions& opts,
                                           double* condition_out) {
  std::vector<double> wts(pts.size(), 1.0);
  Eigen::Matrix<double, 6, 1> a = dls_fit(pts, wts, condition_out);
  if (opts.sampson_refine) {
    for (int it = 0; it < opts.refine_iterations; ++it) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double x = pts[i].x, y = pts[i].y;
        const double gx = 2 * a(0) * x + a(1) * y + a(3);
        const double gy = a(1) * x + 2 * a(2) * y + a(4);
        wts[i] = 1.0 / std::max(gx * gx + gy * gy, 1e-12);
      }
      a = dls_fit(pts, wts, nullptr);
    }
  }
  return a;
}

std::array<double, 6> denormalize(const Eigen::Matrix<double, 6, 1>& a,
                                  const Normalization& nrm) {
  const double s = nrm.scale, mx = nrm.mx, my = nrm.my;
  const double A = a(0), B = a(1), C = a(2), D = a(3), E = a(4), F = a(5);
  std::array<double, 6> c{};
  c[0] = A / (s * s);
  c[1] = B / (s * s);
  c[2] = C / (s * s);
  c[3] = (-2 * A * mx - B * my) / (s * s) + D / s;
  c[4] = (-2 * C * my - B * mx) / (s * s) + E / s;
  c[5] = (A * mx * mx + B * mx * my + C * my * my) / (s * s) -
         (D * mx + E * my) / s + F;
  // rescale so |(A,B,C)| = 1, keep A + C > 0
  const double nabc = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  for (auto& v : c) v /= nabc;
  return c;
}

}  // namespace

EllipseFitResult ellipse_fit(std::span<const Point2> points,
                             const EllipseFitOptions& opts) {
  if (points.size() < 6) {
    throw DegenerateFitError("ellipse_fit: need at least 6 points");
  }
  // canonical order makes the result exactly independent of input order
  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });

  Normalization nrm;
  for (const auto& p : pts) { nrm.mx += p.x; nrm.my += p.y; }
  nrm.mx /= pts.size();
  nrm.my /= pts.size();
  double r2 = 0;
  for (const auto& p : pts) {
    const double dx = p.x - nrm.mx, dy = p.y - nrm.my;
    r2 += dx * dx + dy * dy;
  }
  nrm.scale = std::sqrt(r2 / pts.size());
  if (!(nrm.scale > 0)) {
    throw DegenerateFitError("ellipse_fit: all points coincide");
  }
  std::vector<Point2> np(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    np[i] = {(pts[i].x - nrm.mx) / nrm.scale, (pts[i].y - nrm.my) / nrm.scale};
  }

  EllipseFitResult res;
  res.n_points = static_cast<int>(pts.size());
  const auto a = fit_normalized(np, opts, &res.scatter_condition);
  res.conic = denormalize(a, nrm);
  res.discriminant = res.conic[1] * res.conic[1] - 4 * res.conic[0] * res.conic[2];
  res.delta_phi = phase_from_conic(res.conic);
  const double cosd = -res.conic[1] / (2 * std::sqrt(res.conic[0] * res.conic[2]));
  res.near_degenerate = (1.0 - std::abs(cosd)) < 1e-6;

  if (opts.bootstrap_samples > 1) {
    const rng::Stream bs(opts.seed, "ellipse.bootstrap");
    std::vector<double> phases;
    phases.reserve(opts.bootstrap_samples);
    std::vector<Point2> sample(np.size());
    EllipseFitOptions sub = opts;
    sub.bootstrap_samples = 0;
    for (int b = 0; b < opts.bootstrap_samples; ++b) {
      for (std::size_t i = 0; i < np.size(); ++i) {
        const auto idx = static_cast<std::size_t>(
            bs.uniform(b * np.size() + i) * np.size());
        sample[i] = np[std::min(idx, np.size() - 1)];
      }
      try {
        const auto ab = fit_normalized(sample, sub, nullptr);
        const auto cb = denormalize(ab, nrm);
        phases.push_back(phase_from_conic(cb));
      } catch (const DegenerateFitError&) {
        // skip degenerate resamples
      }
    }
    if (phases.size() > 1) {
      const double mean =
          std::accumulate(phases.begin(), phases.end(), 0.0) / phases.size();
      double var = 0;
      for (double p : phases) var += (p - mean) * (p - mean);
      res.u_delta_phi = std::sqrt(var / (phases.size() - 1));
    }
  }
  return res;
}

double phase_from_conic(const std::array<double, 6>& conic) {
  const double a = conic[0], b = conic[1], c = conic[2];
  if (!(a * c > 0)) {
    throw DegenerateFitError("phase_from_conic: conic is not an ellipse (AC <= 0)");
  }
  const double cosd = -b / (2.0 * std::sqrt(a * c));
  if (std::abs(cosd) >= 1.0) {
    throw DegenerateFitError(
        "phase_from_conic: |cos dphi| >= 1, phase indeterminate near 0 or pi");
  }
  return std::acos(cosd);
}

void write_shots_csv(std::ostream& out, std::span<const ShotRecord> shots) {
  out << "pulse_phase_rad,fza,fzb\n";
  char buf[128];
  for (const auto& s : shots) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", s.pulse_phase,
                  s.fza, s.fzb);
    out << buf;
  }
}

std::vector<Point2> read_shots_csv(std::istream& in) {
  std::vector<Point2> pts;
  std::string row;
  if (!std::getline(in, row)) throw ConfigError("shots csv: empty file");
  while (std::getline(in, row)) {
    if (row.empty()) continue;
    double phase = 0, x = 0, y = 0;
    if (std::sscanf(row.c_str(), "%lg,%lg,%lg", &phase, &x, &y) != 3) {
      throw ConfigError("shots csv: malformed row '" + row + "'");
    }
    pts.push_back({x, y});
  }
  return pts;
}

std::string fit_to_json(const EllipseFitResult& r) {
  std::ostringstream os;
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "{\n"
                "  \"conic\": [%.17g, %.17g, %.17g, %.17g, %.17g, %.17g],\n"
                "  \"delta_phi_rad\": %.17g,\n"
                "  \"u_delta_phi_rad\": %.17g,\n"
                "  \"discriminant\": %.17g,\n"
                "  \"scatter_condition\": %.17g,\n"
                "  \"n_points\": %d,\n"
                "  \"near_degenerate\": %s\n"
                "}\n",
                r.conic[0], r.conic[1], r.conic[2], r.conic[3], r.conic[4],
                r.conic[5], r.delta_phi, r.u_delta_phi, r.discriminant,
                r.scatter_condition, r.n_points,
                r.near_degenerate ? "true" : "false");
  os << buf;
  return os.str();
}

}  // namespace vls::ramsey
