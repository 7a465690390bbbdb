#include "epsk/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "epsk/rng.hpp"
#include "json.hpp"

namespace epsk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Unnormalized generator varphi, its derivative, and its value at 1.
// phi(t) = varphi(t) / varphi(1) for every kind (varphi(1) = 1 for Linear).

double varphi(const PhiSpec& p, double t) {
  switch (p.kind) {
    case PhiKind::Linear:
      return t;
    case PhiKind::PowerQ: {
      const double e = p.eps, q = p.q;
      return -t - (q - 1.0) / q * std::pow(1.0 - t + e, q / (q - 1.0)) + e +
             (q - 1.0) / q;
    }
    case PhiKind::Log:
      return -t - std::log(1.0 - t + p.eps) + p.eps;
    case PhiKind::Arctan: {
      const double e = p.eps;
      const double r = t * (1.0 - t + e);
      return (1.0 + e) * std::atan(std::sqrt(t / (1.0 - t + e))) -
             std::sqrt(std::max(r, 0.0));
    }
    case PhiKind::Scad:
      return 0.5 * (p.a - 1.0) * t * t + t;
  }
  return 0.0;
}

double varphi_deriv(const PhiSpec& p, double t) {
  switch (p.kind) {
    case PhiKind::Linear:
      return 1.0;
    case PhiKind::PowerQ:
      return -1.0 + std::pow(1.0 - t + p.eps, 1.0 / (p.q - 1.0));
    case PhiKind::Log:
      return -1.0 + 1.0 / (1.0 - t + p.eps);
    case PhiKind::Arctan:
      return std::sqrt(std::max(t, 0.0) / (1.0 - t + p.eps));
    case PhiKind::Scad:
      return (p.a - 1.0) * t + 1.0;
  }
  return 0.0;
}

// Conjugate of varphi restricted to [0,1]: h(u) = sup_{t in [0,1]} {ut - varphi(t)}.
double varphi_conj(const PhiSpec& p, double u) {
  switch (p.kind) {
    case PhiKind::Linear:
      return u > 1.0 ? u - 1.0 : 0.0;
    case PhiKind::PowerQ: {
      const double e = p.eps, q = p.q;
      const double hi = std::pow(e, 1.0 / (q - 1.0)) - 1.0;
      const double lo = std::pow(1.0 + e, 1.0 / (q - 1.0)) - 1.0;
      if (u >= hi)
        return u + 1.0 + (q - 1.0) / q * std::pow(e, q / (q - 1.0)) - e -
               (q - 1.0) / q;
      if (u <= lo)
        return (q - 1.0) / q * std::pow(1.0 + e, q / (q - 1.0)) - e -
               (q - 1.0) / q;
      return (1.0 + e) * u - std::pow(u + 1.0, q) / q + 1.0 / q;
    }
    case PhiKind::Log: {
      const double e = p.eps;
      if (u >= 1.0 / e - 1.0) return u + 1.0 + std::log(e) - e;
      if (u <= 1.0 / (1.0 + e) - 1.0) return std::log(1.0 + e) - e;
      return u * (1.0 + e) - std::log(u + 1.0);
    }
    case PhiKind::Arctan: {
      const double e = p.eps;
      if (u <= 0.0) return 0.0;
      if (u >= std::sqrt(1.0 / e))
        return u - (1.0 + e) * std::atan(std::sqrt(1.0 / e)) + std::sqrt(e);
      return u * (1.0 + e) - (1.0 + e) * std::atan(u);
    }
    case PhiKind::Scad: {
      const double a = p.a;
      if (u <= 1.0) return 0.0;
      if (u <= a) return (u - 1.0) * (u - 1.0) / (2.0 * (a - 1.0));
      return u - 0.5 * (a + 1.0);
    }
  }
  return 0.0;
}

// An argmax of t -> ut - varphi(t) over [0,1] (smallest one at kinks).
double varphi_conj_argmax(const PhiSpec& p, double u) {
  switch (p.kind) {
    case PhiKind::Linear:
      return u > 1.0 ? 1.0 : 0.0;
    case PhiKind::PowerQ: {
      if (u + 1.0 <= 0.0) return 0.0;
      const double t = 1.0 + p.eps - std::pow(u + 1.0, p.q - 1.0);
      return std::clamp(t, 0.0, 1.0);
    }
    case PhiKind::Log: {
      if (u + 1.0 <= 0.0) return 0.0;
      const double t = 1.0 + p.eps - 1.0 / (u + 1.0);
      return std::clamp(t, 0.0, 1.0);
    }
    case PhiKind::Arctan: {
      if (u <= 0.0) return 0.0;
      const double t = u * u * (1.0 + p.eps) / (1.0 + u * u);
      return std::clamp(t, 0.0, 1.0);
    }
    case PhiKind::Scad:
      return std::clamp((u - 1.0) / (p.a - 1.0), 0.0, 1.0);
  }
  return 0.0;
}

double domain_upper(const PhiSpec& p) {
  switch (p.kind) {
    case PhiKind::Linear:
    case PhiKind::Scad:
      return kInf;
    case PhiKind::PowerQ:
    case PhiKind::Arctan:
      return 1.0 + p.eps;
    case PhiKind::Log:
      return std::nextafter(1.0 + p.eps, 0.0);
  }
  return kInf;
}

double domain_lower(const PhiSpec& p) {
  return p.kind == PhiKind::Arctan ? 0.0 : -kInf;
}

void validate(const PhiSpec& p) {
  const auto fail = [&](const std::string& what) {
    throw ValidationFailure(std::string(phi_kind_name(p.kind)) + ": " + what);
  };
  if (std::abs(phi_eval(p, p.t_star)) > 1e-12) fail("phi(t_star) != 0");
  if (std::abs(phi_eval(p, 1.0) - 1.0) > 1e-12) fail("phi(1) != 1");
  if (!(p.t_star >= 0.0 && p.t_star < 1.0)) fail("t_star outside [0,1)");
  const double target = 1.0 / (1.0 - p.t_star);
  if (p.d_minus_1 < target - 1e-10) fail("phi'_-(1) < 1/(1-t_star)");
  if (!(p.t_zero >= 0.0 && p.t_zero < 1.0)) fail("t_zero outside [0,1)");
  if (phi_dminus(p, p.t_zero) > target + 1e-9 ||
      phi_dplus(p, p.t_zero) < target - 1e-9)
    fail("1/(1-t_star) not in dphi(t_zero)");

  // Sampled midpoint convexity on [0,1].
  CounterRng rng(0xC0417E7151ULL, static_cast<std::uint64_t>(p.kind));
  for (int i = 0; i < 1000; ++i) {
    double t[3] = {rng.next_double(), rng.next_double(), rng.next_double()};
    std::sort(t, t + 3);
    if (t[2] - t[0] < 1e-12) continue;
    const double w = (t[1] - t[0]) / (t[2] - t[0]);
    const double chord =
        (1.0 - w) * phi_eval(p, t[0]) + w * phi_eval(p, t[2]);
    if (phi_eval(p, t[1]) > chord + 1e-10) fail("convexity violated on [0,1]");
  }
}

}  // namespace

const char* phi_kind_name(PhiKind kind) {
  switch (kind) {
    case PhiKind::Linear: return "linear";
    case PhiKind::PowerQ: return "powerq";
    case PhiKind::Log: return "log";
    case PhiKind::Arctan: return "arctan";
    case PhiKind::Scad: return "scad";
  }
  return "?";
}

PhiKind phi_kind_from_name(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(c)));
  if (s == "linear") return PhiKind::Linear;
  if (s == "powerq") return PhiKind::PowerQ;
  if (s == "log") return PhiKind::Log;
  if (s == "arctan") return PhiKind::Arctan;
  if (s == "scad") return PhiKind::Scad;
  throw InvalidParameter("unknown phi kind: " + name);
}

PhiSpec make_phi(PhiKind kind, const std::vector<double>& params) {
  PhiSpec p;
  p.kind = kind;
  switch (kind) {
    case PhiKind::Linear:
      if (!params.empty())
        throw InvalidParameter("linear takes no parameters");
      break;
    case PhiKind::PowerQ:
      if (params.size() != 2)
        throw InvalidParameter("powerq needs params [eps, q]");
      p.eps = params[0];
      p.q = params[1];
      if (!(p.eps > 0.0 && p.eps < 1.0))
        throw InvalidParameter("powerq: eps must be in (0,1)");
      if (!(p.q > 0.0 && p.q < 1.0))
        throw InvalidParameter("powerq: q must be in (0,1)");
      break;
    case PhiKind::Log:
    case PhiKind::Arctan:
      if (params.size() != 1)
        throw InvalidParameter("log/arctan need params [eps]");
      p.eps = params[0];
      if (!(p.eps > 0.0 && p.eps < 1.0))
        throw InvalidParameter("eps must be in (0,1)");
      break;
    case PhiKind::Scad:
      if (params.size() != 1) throw InvalidParameter("scad needs params [a]");
      p.a = params[0];
      if (!(p.a > 1.0)) throw InvalidParameter("scad: a must be > 1");
      break;
  }
  p.norm_c = varphi(p, 1.0);
  p.t_star = (kind == PhiKind::PowerQ || kind == PhiKind::Log) ? p.eps : 0.0;
  p.d_minus_1 = varphi_deriv(p, 1.0) / p.norm_c;
  p.t_zero = compute_t_zero(p);
  validate(p);
  return p;
}

double phi_eval(const PhiSpec& phi, double t) {
  if (t < domain_lower(phi) || t > domain_upper(phi))
    throw DomainError("phi_eval: t outside dom phi");
  return varphi(phi, t) / phi.norm_c;
}

double phi_dminus(const PhiSpec& phi, double t) {
  if (phi.kind == PhiKind::Arctan && t <= 0.0) return -kInf;
  return varphi_deriv(phi, t) / phi.norm_c;
}

double phi_dplus(const PhiSpec& phi, double t) {
  if (t >= domain_upper(phi)) return kInf;
  return varphi_deriv(phi, t) / phi.norm_c;
}

double psi_star(const PhiSpec& phi, double s) {
  return varphi_conj(phi, phi.norm_c * s) / phi.norm_c;
}

double psi_star_subgrad(const PhiSpec& phi, double s) {
  return varphi_conj_argmax(phi, phi.norm_c * s);
}

double scalar_penalty_value(const PhiSpec& phi, double rho_omega) {
  if (rho_omega < 0.0)
    throw DomainError("scalar_penalty_value: rho_omega must be >= 0");
  return rho_omega - psi_star(phi, rho_omega);
}

double compute_t_zero(const PhiSpec& phi) {
  const double target = 1.0 / (1.0 - phi.t_star);
  const double u = phi.norm_c * target;  // on the unnormalized scale
  double t;
  switch (phi.kind) {
    case PhiKind::Linear:
      return 0.0;
    case PhiKind::Scad:
      t = (u - 1.0) / (phi.a - 1.0);
      break;
    case PhiKind::PowerQ:
      t = 1.0 + phi.eps - std::pow(u + 1.0, phi.q - 1.0);
      break;
    case PhiKind::Log:
      t = 1.0 + phi.eps - 1.0 / (u + 1.0);
      break;
    case PhiKind::Arctan:
      t = u * u * (1.0 + phi.eps) / (1.0 + u * u);
      break;
  }
  if (t >= 0.0 && t < 1.0 && std::abs(phi_dminus(phi, t) - target) < 1e-9)
    return t;
  // Bisection fallback on the monotone left derivative.
  double lo = std::max(phi.t_star, 0.0), hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (phi_dminus(phi, mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

std::string phi_to_json(const PhiSpec& phi) {
  nlohmann::json j;
  j["kind"] = phi_kind_name(phi.kind);
  nlohmann::json params = nlohmann::json::object();
  switch (phi.kind) {
    case PhiKind::Linear: break;
    case PhiKind::PowerQ: params["eps"] = phi.eps; params["q"] = phi.q; break;
    case PhiKind::Log:
    case PhiKind::Arctan: params["eps"] = phi.eps; break;
    case PhiKind::Scad: params["a"] = phi.a; break;
  }
  j["params"] = params;
  return j.dump();
}

PhiSpec phi_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("phi JSON parse error: ") + e.what());
  }
  if (!j.contains("kind")) throw InvalidParameter("phi JSON: missing kind");
  const PhiKind kind = phi_kind_from_name(j["kind"].get<std::string>());
  const nlohmann::json params =
      j.value("params", nlohmann::json::object());
  const auto get = [&](const char* name) {
    if (!params.contains(name))
      throw InvalidParameter(std::string("phi JSON: missing param ") + name);
    return params[name].get<double>();
  };
  switch (kind) {
    case PhiKind::Linear: return make_phi(kind);
    case PhiKind::PowerQ: return make_phi(kind, {get("eps"), get("q")});
    case PhiKind::Log:
    case PhiKind::Arctan: return make_phi(kind, {get("eps")});
    case PhiKind::Scad: return make_phi(kind, {get("a")});
  }
  throw InvalidParameter("phi JSON: bad kind");
}

}  // namespace epsk
