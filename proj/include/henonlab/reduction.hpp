#pragma once

#include <functional>
#include <string>
#include <vector>

// Bridge between the doubly symmetric picture on B_{2m}(0,1) and the axially
// symmetric picture on B_{m+1}.
//
// A doubly symmetric function u depends only on (r1, r2) = (|y1|, |y2|);
// writing r1 = r cos(theta), r2 = r sin(theta) and matching invariants gives
// the correspondence
//
//     rho = r^2 / 2,   sigma = 2 theta,
//
// i.e. (rho, sigma) are the meridian polar coordinates of a point z in
// B_{m+1}(0, 1/2) with |z| = rho and z_{m+1} = rho cos(sigma). Under it,
// Laplacians match as  Delta_{2m} u = 2|z| Delta_{m+1} v, so u solves the
// 2m-dimensional equation iff v solves the transformed (m+1)-dimensional one.
// Everything here works on meridian coordinates; the angular variables never
// appear.
//
// The correspondence degenerates at z = 0 (Delta_{2m} u = 0 there regardless
// of Delta_{m+1} v, e.g. u = |(y1,y2)|^2 <-> v = 2|z|), so evaluation points
// must stay away from the origin.

namespace henonlab::reduction {

struct ReducedPoint {
    double rho;   // |z|
    double sigma; // polar angle from +e_{m+1}, in [0, pi]
};

struct OriginalPoint {
    double r1; // |y1|
    double r2; // |y2|
};

/// r1 = sqrt(2 rho) cos(sigma/2), r2 = sqrt(2 rho) sin(sigma/2).
OriginalPoint to_original(const ReducedPoint& z);

/// rho = (r1^2 + r2^2)/2, sigma = 2 atan2(r2, r1).
ReducedPoint to_reduced(const OriginalPoint& y);

// ---------------------------------------------------------------------------
// Weights in the coordinates the solver uses.

enum class WeightKind {
    FullHenonReduced, // |z|^{(alpha-2)/2} on the unit ball (full Henon, reduced)
    PartialReduced,   // ((|z| - z_{m+1})/2)^{alpha/2} / |z|, zero at the origin
    HyperplaneAxis,   // |z_N|^alpha on the unit ball (no reduction involved)
    RadialPow,        // |z|^alpha, the unrestricted-competitor weight
    Exponential,      // e^{-gamma t} on the half space, in (s, t) coordinates
};

struct Weight {
    WeightKind kind = WeightKind::PartialReduced;
    double alpha = 40.0; // exponent for the ball weights
    double gamma = 0.5;  // decay rate for Exponential
};

/// Evaluates a ball weight at meridian point (rho, sigma), or Exponential at
/// (s, t) passed through the same two slots (first = s, second = t).
/// PartialReduced uses sin^2(sigma/2) = (1 - cos sigma)/2 for accuracy near
/// the positive axis and extends by 0 at rho = 0 (valid for alpha > 2).
double eval_weight(const Weight& w, double c1, double c2);

/// Pointwise bound  partial_reduced(z) < |z|^{(alpha-2)/2}  on the punctured
/// ball (alpha > 2); exposed for property tests.
bool partial_weight_dominated(double rho, double sigma, double alpha);

// ---------------------------------------------------------------------------
// Laplacian correspondence checks.
//
// An analytic meridian function with its first two partials and its known
// (m+1)-dimensional Laplacian. Everything is a plain function of (rho, sigma).

struct AnalyticField {
    std::string name;
    std::function<double(double, double)> v;        // v(rho, sigma)
    std::function<double(double, double)> v_rho;
    std::function<double(double, double)> v_rho2;
    std::function<double(double, double)> v_sigma;
    std::function<double(double, double)> v_sigma2;
    // Delta_{m+1} v, analytic, as a function of (rho, sigma, m)
    std::function<double(double, double, int)> lap_reduced;
};

/// Built-in suite: |z|^2, a constant, z_{m+1}.
std::vector<AnalyticField> analytic_suite();

/// Default deterministic sample cloud, bounded away from the origin and the
/// axis lines (rho in [0.08, 0.45], sigma in [0.25, pi - 0.25]).
std::vector<ReducedPoint> default_samples();

/// Max |Delta_{2m} u - 2 rho Delta_{m+1} v| over the samples, with
/// Delta_{2m} u evaluated through the doubly symmetric polar form via the
/// chain rule on the analytic partials (an independent route from
/// lap_reduced). Rounding-level for fields whose identities hold exactly.
/// Throws SingularSample if a sample is too close to the origin or an axis.
double correspondence_residual_symbolic(const AnalyticField& f, int m,
                                        const std::vector<ReducedPoint>& samples);

/// Same discrepancy but with every derivative replaced by a second-order
/// central difference with step h (in (r, theta) on the left, (rho, sigma)
/// on the right). Returns the max RELATIVE discrepancy over samples, so
/// halving h should shrink it ~4x for smooth fields.
double correspondence_residual_fd(const AnalyticField& f, int m, double h,
                                  const std::vector<ReducedPoint>& samples);

/// Least-squares slope of log(residual) vs log(h); ~2 for the suite.
double correspondence_fd_slope(const AnalyticField& f, int m,
                               const std::vector<double>& h_values,
                               const std::vector<ReducedPoint>& samples);

// ---------------------------------------------------------------------------
// Scaling between the half ball and the unit ball: v on B(0,1/2) solves the
// transformed equation iff w(z) = (1/4)^{1/(p-2)} v(z/2) solves the unit-ball
// version with weight |z|^{(alpha-2)/2} (resp. the partial weight). Exposed
// as the scalar factor; the field-level rescale lives with the solver.
double half_to_unit_factor(double p);  // (1/4)^{1/(p-2)}
double unit_to_half_factor(double p);  // 4^{1/(p-2)}

} // namespace henonlab::reduction
