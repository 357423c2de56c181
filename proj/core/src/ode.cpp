#include "mfaccel/ode.hpp"

#include <cmath>

#include "mfaccel/error.hpp"

namespace mfaccel {

namespace {

// Horizon shared by both shipped problems.
constexpr double kHorizon = 4.0;

double oscillator_damping(double k) { return 0.1 + k / 100.0; }

}  // namespace

void ParamDomain::validate() const {
  if (lower.size() != upper.size() || lower.empty())
    throw Error(ErrorCode::InvalidArgument, "parameter bounds must be nonempty and of equal length");
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] < upper[i])) throw Error(ErrorCode::InvalidArgument, "parameter bounds need lower < upper");
}

bool ParamDomain::contains(std::span<const double> k) const noexcept {
  if (k.size() != lower.size()) return false;
  for (std::size_t i = 0; i < k.size(); ++i)
    if (!(k[i] >= lower[i] && k[i] <= upper[i])) return false;
  return true;
}

State ParameterizedOde::eval_rhs(double t, std::span<const double> u, std::span<const double> k) const {
  State out(state_dim);
  rhs(t, u, k, out);
  return out;
}

State ParameterizedOde::eval_initial(std::span<const double> k) const {
  State out(state_dim);
  initial(k, out);
  return out;
}

State ParameterizedOde::eval_exact(double t, std::span<const double> k) const {
  if (!exact) throw Error(ErrorCode::InvalidArgument, "problem '" + name + "' has no closed-form solution");
  State out(state_dim);
  exact(t, k, out);
  return out;
}

ParameterizedOde damped_oscillator() {
  ParameterizedOde p;
  p.name = "oscillator";
  p.state_dim = 2;
  p.param_dim = 1;
  p.horizon = kHorizon;
  p.domain = {{5.0}, {25.0}};
  p.rhs = [](double, std::span<const double> u, std::span<const double> k, std::span<double> du) {
    du[0] = u[1];
    du[1] = -oscillator_damping(k[0]) * u[1] - k[0] * u[0];
  };
  p.initial = [](std::span<const double>, std::span<double> u0) {
    u0[0] = 1.0;
    u0[1] = 10.0;
  };
  // Underdamped for every k in the domain: c^2 < 4k.
  p.exact = [](double t, std::span<const double> k, std::span<double> u) {
    const double c = oscillator_damping(k[0]);
    const double decay = 0.5 * c;
    const double wd = std::sqrt(k[0] - decay * decay);
    const double a = 1.0;
    const double b = (10.0 + decay * a) / wd;
    const double e = std::exp(-decay * t);
    const double cs = std::cos(wd * t);
    const double sn = std::sin(wd * t);
    u[0] = e * (a * cs + b * sn);
    u[1] = e * (-decay * (a * cs + b * sn) + wd * (-a * sn + b * cs));
  };
  return p;
}

ParameterizedOde predator_prey() {
  ParameterizedOde p;
  p.name = "predator-prey";
  p.state_dim = 2;
  p.param_dim = 1;
  p.horizon = kHorizon;
  p.domain = {{0.5}, {1.5}};
  p.rhs = [](double, std::span<const double> u, std::span<const double> k, std::span<double> du) {
    const double a = k[0] + 0.5;
    const double b = 3.0 * k[0] + 1.0;
    const double c = k[0] + 1.0;
    const double d = k[0] + 0.5;
    du[0] = a * u[0] - b * u[0] * u[1];
    du[1] = c * u[0] * u[1] - d * u[1];
  };
  p.initial = [](std::span<const double>, std::span<double> u0) {
    u0[0] = 1.0;
    u0[1] = 1.0;
  };
  return p;
}

ParameterizedOde make_problem(std::string_view name) {
  if (name == "oscillator") return damped_oscillator();
  if (name == "predator-prey") return predator_prey();
  throw Error(ErrorCode::UnknownProblem, "no problem named '" + std::string(name) + "'");
}

std::vector<std::string> problem_names() { return {"oscillator", "predator-prey"}; }

}  // namespace mfaccel
