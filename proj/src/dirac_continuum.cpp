#include "fraclab/dirac_continuum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclab/errors.hpp"

namespace fraclab::continuum {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

// Second-order first derivative on a uniform grid.
std::vector<double> derivative(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) return d;
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  return d;
}

// F_i = integral_{x_0}^{x_i} f, trapezoid plus end correction; O(h^4).
std::vector<double> cumulative_integral(std::span<const double> f, double h) {
  const auto df = derivative(f, h);
  std::vector<double> out(f.size(), 0.0);
  double trap = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    trap += 0.5 * h * (f[i - 1] + f[i]);
    out[i] = trap - h * h / 12.0 * (df[i] - df[0]);
  }
  return out;
}

struct RawMode {
  std::vector<double> psi;
  std::vector<double> exponent;
};

// psi = exp(sign * F - max), normalized with `integrate`.
RawMode build_mode(std::span<const double> phi, double h, double sign) {
  RawMode m;
  const auto F = cumulative_integral(phi, h);
  m.exponent.resize(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) m.exponent[i] = sign * F[i];
  const double top = *std::max_element(m.exponent.begin(), m.exponent.end());
  m.psi.resize(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) m.psi[i] = std::exp(m.exponent[i] - top);
  std::vector<double> sq(m.psi.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = m.psi[i] * m.psi[i];
  const double norm = std::sqrt(integrate(sq, h));
  for (double& p : m.psi) p /= norm;
  return m;
}

}  // namespace

double integrate(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  double trap = 0.0;
  for (std::size_t i = 1; i < n; ++i) trap += 0.5 * h * (f[i - 1] + f[i]);
  if (n < 3) return trap;
  const auto df = derivative(f, h);
  return trap - h * h / 12.0 * (df[n - 1] - df[0]);
}

PhononProfile sample_profile(const std::function<double(double)>& f, double L, double h,
                             double phi_minus_inf, double phi_plus_inf) {
  if (!(h > 0.0) || !(L > 0.0)) invalid("need L > 0 and grid step > 0");
  const auto half = static_cast<std::size_t>(std::llround(L / h));
  if (half < 1) invalid("grid step larger than L");
  PhononProfile p;
  p.grid_step = h;
  p.x_min = -static_cast<double>(half) * h;
  p.phi.resize(2 * half + 1);
  for (std::size_t i = 0; i < p.phi.size(); ++i) p.phi[i] = f(p.x(i));
  p.phi_minus_inf = phi_minus_inf;
  p.phi_plus_inf = phi_plus_inf;
  validate(p);
  return p;
}

PhononProfile tanh_profile(double phi0, double xi, double L, double h) {
  if (!(xi > 0.0)) invalid("xi must be positive");
  return sample_profile([=](double x) { return phi0 * std::tanh(x / xi); }, L, h, -phi0, phi0);
}

PhononProfile table_profile(std::span<const double> x, std::span<const double> phi) {
  if (x.size() != phi.size()) invalid("table columns differ in length");
  if (x.size() < 3) invalid("table needs at least 3 rows");
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  if (!(h > 0.0)) invalid("table x must increase");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs((x[i] - x[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      invalid("table x is not a uniform grid (row " + std::to_string(i) + ")");
    }
  }
  PhononProfile p;
  p.x_min = x.front();
  p.grid_step = h;
  p.phi.assign(phi.begin(), phi.end());
  p.phi_minus_inf = phi.front();
  p.phi_plus_inf = phi.back();
  validate(p);
  return p;
}

PhononProfile profile_from_chain(const lattice::ChainConfig& c, double L, double h, double a) {
  lattice::validate(c);
  if (c.walls.size() != 1) invalid("continuum comparison needs exactly one wall");
  const double parity = -1.0;  // one wall
  const double sign = c.left_vacuum * parity;
  auto phi = [&](double x) {
    // x is measured from the wall center, i.e. bond coordinate x - 1/2 + w + 1/2.
    const double s = sign * std::tanh(x / (a * c.xi));
    return std::log((c.t0 + c.delta_t * s) / (c.t0 - c.delta_t * s)) / (2.0 * a);
  };
  const double inf = std::log((c.t0 + c.delta_t) / (c.t0 - c.delta_t)) / (2.0 * a);
  return sample_profile(phi, L, h, -sign * inf, sign * inf);
}

void validate(const PhononProfile& p) {
  if (!(p.grid_step > 0.0)) invalid("grid step must be positive");
  if (p.phi.size() < 3) invalid("profile needs at least 3 samples");
  // A vanishing asymptote is classify's AmbiguousAsymptotics, not a grid problem.
  const auto close = [](double sample, double target) {
    if (std::abs(target) < 1e-9) return true;
    return std::abs(sample - target) <= 1e-6 * std::abs(target);
  };
  if (!close(p.phi.front(), p.phi_minus_inf) || !close(p.phi.back(), p.phi_plus_inf)) {
    invalid("profile has not reached its asymptotes at +-L (enlarge L)");
  }
}

int sign_changes(const PhononProfile& p) {
  int changes = 0;
  int last = 0;
  for (double v : p.phi) {
    const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

Topology classify(const PhononProfile& p) {
  if (std::abs(p.phi_minus_inf) < 1e-9 || std::abs(p.phi_plus_inf) < 1e-9) {
    throw Error(ErrorCode::AmbiguousAsymptotics, "an asymptotic value of phi is zero");
  }
  validate(p);
  Topology t = Topology::Vacuum;
  if (p.phi_minus_inf < 0 && p.phi_plus_inf > 0) t = Topology::Kink;
  if (p.phi_minus_inf > 0 && p.phi_plus_inf < 0) t = Topology::Antikink;
  const bool odd = sign_changes(p) % 2 == 1;
  if (odd != (t != Topology::Vacuum)) {
    throw Error(ErrorCode::AmbiguousAsymptotics, "sign changes of phi disagree with its asymptotics");
  }
  return t;
}

double ZeroMode::evaluate(double xq) const noexcept {
  if (psi.empty()) return 0.0;
  const double u = (xq - x_min) / grid_step;
  if (u < 0.0 || u > static_cast<double>(psi.size() - 1)) return 0.0;
  const auto i = std::min(static_cast<std::size_t>(u), psi.size() - 2);
  const double f = u - static_cast<double>(i);
  return (1.0 - f) * psi[i] + f * psi[i + 1];
}

ZeroMode zero_mode(const PhononProfile& p) {
  const Topology t = classify(p);
  if (t == Topology::Vacuum) {
    throw Error(ErrorCode::NonNormalizable,
                "phi has the same sign at both ends: exp(-+ integral phi) grows at one end");
  }
  // Kink: upper component, u' = -phi u. Antikink: lower, l' = +phi l.
  const double sign = t == Topology::Kink ? -1.0 : 1.0;
  const double h = p.grid_step;
  RawMode fine = build_mode(p.phi, h, sign);

  ZeroMode zm;
  zm.x_min = p.x_min;
  zm.grid_step = h;
  zm.component = t == Topology::Kink ? Component::Upper : Component::Lower;

  const std::size_t n = fine.psi.size();
  const double peak = *std::max_element(fine.psi.begin(), fine.psi.end());
  if (fine.psi.front() > 1e-6 * peak || fine.psi.back() > 1e-6 * peak) {
    throw Error(ErrorCode::GridTooCoarse, "domain [-L, L] truncates the zero-mode tail; enlarge L");
  }

  // Richardson-style self check against the 2h subgrid.
  std::vector<double> coarse_phi;
  for (std::size_t i = 0; i < n; i += 2) coarse_phi.push_back(p.phi[i]);
  if (coarse_phi.size() >= 3) {
    const RawMode coarse = build_mode(coarse_phi, 2.0 * h, sign);
    for (std::size_t i = 0; i < coarse.psi.size(); ++i) {
      zm.refinement_delta = std::max(zm.refinement_delta, std::abs(coarse.psi[i] - fine.psi[2 * i]));
    }
  }
  if (zm.refinement_delta > 1e-6 * std::max(1.0, peak)) {
    throw Error(ErrorCode::GridTooCoarse,
                "zero mode moves by " + std::to_string(zm.refinement_delta) + " under 2x coarsening");
  }

  const auto dexp = derivative(fine.exponent, h);
  zm.decay_left = dexp.front();
  zm.decay_right = -dexp.back();
  if (!(zm.decay_left > 0.0 && zm.decay_right > 0.0)) {
    throw Error(ErrorCode::NonNormalizable, "zero-mode tail does not decay at both ends");
  }

  zm.psi = std::move(fine.psi);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = zm.psi[i] * zm.psi[i];
  zm.norm_check = integrate(sq, h);
  return zm;
}

double zero_mode_charge(const ZeroMode& zm) {
  std::vector<double> sq(zm.psi.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = zm.psi[i] * zm.psi[i];
  const double norm = integrate(sq, zm.grid_step);
  if (std::abs(norm - 1.0) > 1e-8) {
    throw Error(ErrorCode::NotNormalized, "integral of psi^2 is " + std::to_string(norm));
  }
  return -0.5 * norm;
}

double compare_to_lattice(const ZeroMode& zm, std::span<const double> mode, const LatticeAlignment& al) {
  const double ratio = al.lattice_xi / al.continuum_xi;
  if (!(ratio <= 2.0 && ratio >= 0.5)) {
    throw Error(ErrorCode::ScaleMismatch, "lattice xi " + std::to_string(al.lattice_xi) +
                                              " vs continuum xi " + std::to_string(al.continuum_xi));
  }
  double even = 0.0, odd = 0.0;
  for (std::size_t n = 0; n < mode.size(); ++n) (n % 2 == 0 ? even : odd) += mode[n] * mode[n];
  const std::size_t parity = even >= odd ? 0 : 1;

  std::vector<double> f, g;
  for (std::size_t n = parity; n < mode.size(); n += 2) {
    f.push_back(std::abs(mode[n]));
    g.push_back(zm.evaluate((static_cast<double>(n) - al.center_site) * al.spacing));
  }
  const double w = 2.0 * al.spacing;
  const auto normalize = [w](std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    s = std::sqrt(s * w);
    if (s > 0.0)
      for (double& x : v) x /= s;
  };
  normalize(f);
  normalize(g);
  double d2 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) d2 += (f[i] - g[i]) * (f[i] - g[i]);
  return std::sqrt(d2 * w);
}

}  // namespace fraclab::continuum
