#pragma once

#include <string>
#include <vector>

// Problem catalogue for weighted Lane-Emden equations
//
//     -Delta u = h(x) |u|^{p-2} u  in B,   u = 0  on dB,
//
// with three weight families on balls:
//   FullHenon    h(x) = |x|^alpha          on B_{2m}(0,1), doubly symmetric class
//   PartialHenon h(x) = |y2|^alpha         on B_{2m}(0,1), x = (y1,y2), y_i in R^m
//   Hyperplane   h(x) = |x_N|^alpha        on B_N(0,1), even in x_N
//
// The two 2m-dimensional cases are studied through their (m+1)-dimensional
// axially symmetric counterparts; `reduced_dim()` is the dimension the
// discretization actually works in.

namespace henonlab::model {

enum class ProblemCase { FullHenon, PartialHenon, Hyperplane };

struct ProblemSpec {
    ProblemCase kind = ProblemCase::PartialHenon;
    int m = 2;        // half-dimension for the 2m-dimensional cases (m >= 2)
    int N = 3;        // ambient dimension for Hyperplane (N >= 3)
    double p = 3.0;   // superlinear power, subcritical for reduced_dim()
    double alpha = 40.0;

    // Dimension the meridian solver sees: m+1 for the reduced cases, N direct.
    int reduced_dim() const;
    // Dimension of the original equation (2m or N).
    int original_dim() const;
};

/// Rates that drive the large-alpha study, all functions of (n, p) with
/// n = reduced_dim:
///   blowup        2/(p-2)            max u_alpha ~ alpha^blowup
///   quotient_beta (2n - p(n-2))/p    quotient ~ const * alpha^beta
///   energy_gamma  (2n - p(n-2))/(p-2) gradient energy ~ const * alpha^gamma
/// They satisfy energy_gamma*(p-2) == quotient_beta*p identically.
struct Exponents {
    double blowup = 0.0;
    double quotient_beta = 0.0;
    double energy_gamma = 0.0;
};

Exponents exponents(int n, double p);

/// Supremum of admissible p for dimension n (2n/(n-2); admissible means
/// 2 < p < critical_exponent(n)).
double critical_exponent(int n);

struct ValidationIssue {
    enum class Code { ExponentOutOfRange, BadDimension, BadAlpha };
    Code code;
    std::string message;
};

struct ValidationResult {
    std::vector<ValidationIssue> errors;
    std::vector<std::string> warnings;
    bool ok() const { return errors.empty(); }
};

/// Checks dimensions, the open p-interval for the case's reduced dimension,
/// and alpha. alpha <= 0 is an error everywhere; alpha <= 2 is an error for
/// the two reduced cases (their transformed weights are singular at the
/// origin otherwise); alpha <= 4 only warns, since the concentration regime
/// needs alpha large and no explicit threshold is known.
ValidationResult validate(const ProblemSpec& spec);

const char* case_name(ProblemCase c);

} // namespace henonlab::model
