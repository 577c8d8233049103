#include "henonlab/model.hpp"

#include <cmath>

namespace henonlab::model {

int ProblemSpec::reduced_dim() const {
    return kind == ProblemCase::Hyperplane ? N : m + 1;
}

int ProblemSpec::original_dim() const {
    return kind == ProblemCase::Hyperplane ? N : 2 * m;
}

Exponents exponents(int n, double p) {
    Exponents e;
    e.blowup = 2.0 / (p - 2.0);
    e.quotient_beta = (2.0 * n - p * (n - 2.0)) / p;
    e.energy_gamma = (2.0 * n - p * (n - 2.0)) / (p - 2.0);
    return e;
}

double critical_exponent(int n) {
    return 2.0 * n / (n - 2.0);
}

const char* case_name(ProblemCase c) {
    switch (c) {
        case ProblemCase::FullHenon: return "full_henon";
        case ProblemCase::PartialHenon: return "partial_henon";
        case ProblemCase::Hyperplane: return "hyperplane";
    }
    return "?";
}

ValidationResult validate(const ProblemSpec& spec) {
    ValidationResult r;
    const bool reduced = spec.kind != ProblemCase::Hyperplane;

    if (reduced && spec.m < 2) {
        r.errors.push_back({ValidationIssue::Code::BadDimension,
                            "m must be >= 2 (original dimension 2m >= 4)"});
    }
    if (!reduced && spec.N < 3) {
        r.errors.push_back({ValidationIssue::Code::BadDimension,
                            "N must be >= 3"});
    }
    if (!r.errors.empty()) return r; // dimension errors make p-range moot

    const int n = spec.reduced_dim();
    const double pc = critical_exponent(n);
    if (!(spec.p > 2.0) || !(spec.p < pc)) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "p=%g outside the open interval (2, %g) for dimension %d",
                      spec.p, pc, n);
        r.errors.push_back({ValidationIssue::Code::ExponentOutOfRange, buf});
    }

    if (!(spec.alpha > 0.0)) {
        r.errors.push_back({ValidationIssue::Code::BadAlpha,
                            "alpha must be positive"});
    } else if (reduced && spec.alpha <= 2.0) {
        r.errors.push_back({ValidationIssue::Code::BadAlpha,
                            "alpha must exceed 2 for the reduced cases"});
    } else if (spec.alpha <= 4.0) {
        r.warnings.push_back(
            "alpha <= 4: concentration effects need large alpha; "
            "results in this range are outside the studied regime");
    }
    return r;
}

} // namespace henonlab::model
