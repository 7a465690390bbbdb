#ifndef EPSK_PHI_HPP
#define EPSK_PHI_HPP

#include <string>
#include <vector>

#include "epsk/errors.hpp"

namespace epsk {

// Generator family for the zero-norm / rank surrogates. Each member phi is
// convex on [0,1] with phi(t_star) = 0 at its minimizer t_star < 1 and
// phi(1) = 1. The associated convex function psi restricts phi to [0,1]
// (+inf outside), and psi_star is its conjugate, which has a closed form
// for every kind below.
enum class PhiKind { Linear, PowerQ, Log, Arctan, Scad };

struct PhiSpec {
  PhiKind kind = PhiKind::Linear;
  double eps = 0.0;   // PowerQ / Log / Arctan
  double q = 0.0;     // PowerQ
  double a = 0.0;     // Scad

  // Cached at construction.
  double t_star = 0.0;     // minimizer of phi on [0,1]
  double d_minus_1 = 0.0;  // left derivative phi'_-(1)
  double t_zero = 0.0;     // smallest t in [0,1) with 1/(1-t_star) in dphi(t)
  double norm_c = 1.0;     // unnormalized generator value at 1 (scaling)
};

// Validated constructor; caches t_star, d_minus_1, t_zero and checks the
// family invariants. Throws InvalidParameter / ValidationFailure.
PhiSpec make_phi(PhiKind kind, const std::vector<double>& params = {});

double phi_eval(const PhiSpec& phi, double t);

// One-sided derivatives of phi; used by the t_zero search and tests.
double phi_dminus(const PhiSpec& phi, double t);
double phi_dplus(const PhiSpec& phi, double t);

// Conjugate psi*(s) = sup_{t in [0,1]} { s t - phi(t) }, closed form.
double psi_star(const PhiSpec& phi, double s);

// Smallest element of the subdifferential of psi* at s (an argmax of
// t -> s t - phi(t) over [0,1]); always in [0,1].
double psi_star_subgrad(const PhiSpec& phi, double s);

// min_{t in [0,1]} { phi(t) + s (1 - t) } = s - psi*(s) for s >= 0.
double scalar_penalty_value(const PhiSpec& phi, double rho_omega);

// Smallest t in [0,1) with phi'_-(t) <= 1/(1-t_star) <= phi'_+(t); closed
// form per kind with a bisection fallback on the monotone left derivative.
double compute_t_zero(const PhiSpec& phi);

// JSON round-trip: {"kind": string, "params": {name: number}}.
std::string phi_to_json(const PhiSpec& phi);
PhiSpec phi_from_json(const std::string& json_text);

const char* phi_kind_name(PhiKind kind);
PhiKind phi_kind_from_name(const std::string& name);

}  // namespace epsk

#endif  // EPSK_PHI_HPP
