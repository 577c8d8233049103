#include "henonlab/reduction.hpp"

#include <cmath>

#include "henonlab/errors.hpp"

namespace henonlab::reduction {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kRhoFloor = 1e-3;   // correspondence degenerates at the origin
constexpr double kSigmaMargin = 0.1; // FD stencil must clear the axis lines
} // namespace

OriginalPoint to_original(const ReducedPoint& z) {
    const double r = std::sqrt(2.0 * z.rho);
    return {r * std::cos(0.5 * z.sigma), r * std::sin(0.5 * z.sigma)};
}

ReducedPoint to_reduced(const OriginalPoint& y) {
    return {0.5 * (y.r1 * y.r1 + y.r2 * y.r2), 2.0 * std::atan2(y.r2, y.r1)};
}

double eval_weight(const Weight& w, double c1, double c2) {
    switch (w.kind) {
        case WeightKind::FullHenonReduced:
            return std::pow(c1, 0.5 * (w.alpha - 2.0));
        case WeightKind::PartialReduced: {
            // ((|z| - z_{m+1})/2)^{alpha/2} / |z| = rho^{alpha/2-1} sin^alpha(sigma/2)
            if (c1 == 0.0) return 0.0;
            const double s = std::sin(0.5 * c2);
            return std::pow(c1, 0.5 * w.alpha - 1.0) * std::pow(s * s, 0.5 * w.alpha);
        }
        case WeightKind::HyperplaneAxis:
            return std::pow(std::fabs(c1 * std::cos(c2)), w.alpha);
        case WeightKind::RadialPow:
            return std::pow(c1, w.alpha);
        case WeightKind::Exponential:
            return std::exp(-w.gamma * c2);
    }
    return 0.0;
}

bool partial_weight_dominated(double rho, double sigma, double alpha) {
    Weight part{WeightKind::PartialReduced, alpha, 0.0};
    Weight full{WeightKind::FullHenonReduced, alpha, 0.0};
    return eval_weight(part, rho, sigma) < eval_weight(full, rho, sigma);
}

std::vector<AnalyticField> analytic_suite() {
    std::vector<AnalyticField> s;
    s.push_back({"abs_z_squared",
                 [](double rho, double) { return rho * rho; },
                 [](double rho, double) { return 2.0 * rho; },
                 [](double, double) { return 2.0; },
                 [](double, double) { return 0.0; },
                 [](double, double) { return 0.0; },
                 [](double, double, int m) { return 2.0 * (m + 1.0); }});
    s.push_back({"constant",
                 [](double, double) { return 0.75; },
                 [](double, double) { return 0.0; },
                 [](double, double) { return 0.0; },
                 [](double, double) { return 0.0; },
                 [](double, double) { return 0.0; },
                 [](double, double, int) { return 0.0; }});
    s.push_back({"axis_coordinate", // z_{m+1} = rho cos(sigma), harmonic
                 [](double rho, double sig) { return rho * std::cos(sig); },
                 [](double, double sig) { return std::cos(sig); },
                 [](double, double) { return 0.0; },
                 [](double rho, double sig) { return -rho * std::sin(sig); },
                 [](double rho, double sig) { return -rho * std::cos(sig); },
                 [](double, double, int) { return 0.0; }});
    return s;
}

std::vector<ReducedPoint> default_samples() {
    std::vector<ReducedPoint> pts;
    for (int i = 0; i < 7; ++i) {
        const double rho = 0.08 + (0.45 - 0.08) * i / 6.0;
        for (int j = 0; j < 9; ++j) {
            const double sig = 0.25 + (kPi - 0.5) * j / 8.0;
            pts.push_back({rho, sig});
        }
    }
    return pts;
}

namespace {

void check_sample(const ReducedPoint& z, double h) {
    if (z.rho < kRhoFloor + h || z.rho > 0.5 - h)
        throw Error(ErrorKind::SingularSample,
                    "sample too close to the origin or the half-ball boundary");
    if (z.sigma < kSigmaMargin + 2.0 * h || z.sigma > kPi - kSigmaMargin - 2.0 * h)
        throw Error(ErrorKind::SingularSample, "sample too close to an axis line");
}

// Doubly symmetric polar Laplacian assembled from derivatives of u(r, theta):
//   u_rr + (2m-1)/r u_r + (m-1)/r^2 (cot - tan)(theta) u_theta + u_thetatheta / r^2
double polar_lap_2m(int m, double r, double theta, double u_r, double u_rr,
                    double u_th, double u_thth) {
    const double cot_minus_tan =
        std::cos(theta) / std::sin(theta) - std::sin(theta) / std::cos(theta);
    return u_rr + (2.0 * m - 1.0) / r * u_r +
           (m - 1.0) / (r * r) * cot_minus_tan * u_th + u_thth / (r * r);
}

// Axially symmetric polar Laplacian in dimension m+1 from derivatives of v:
//   v_rr + m/rho v_rho + (m-1)/rho^2 cot(sigma) v_sigma + v_sigmasigma / rho^2
double polar_lap_m1(int m, double rho, double sigma, double v_r, double v_rr,
                    double v_s, double v_ss) {
    return v_rr + static_cast<double>(m) / rho * v_r +
           (m - 1.0) / (rho * rho) * (std::cos(sigma) / std::sin(sigma)) * v_s +
           v_ss / (rho * rho);
}

} // namespace

double correspondence_residual_symbolic(const AnalyticField& f, int m,
                                        const std::vector<ReducedPoint>& samples) {
    double worst = 0.0;
    for (const auto& z : samples) {
        check_sample(z, 0.0);
        const double r = std::sqrt(2.0 * z.rho);
        const double theta = 0.5 * z.sigma;
        // chain rule through rho = r^2/2, sigma = 2 theta
        const double vr = f.v_rho(z.rho, z.sigma);
        const double vrr = f.v_rho2(z.rho, z.sigma);
        const double vs = f.v_sigma(z.rho, z.sigma);
        const double vss = f.v_sigma2(z.rho, z.sigma);
        const double u_r = vr * r;
        const double u_rr = vrr * r * r + vr;
        const double u_th = 2.0 * vs;
        const double u_thth = 4.0 * vss;
        const double lhs = polar_lap_2m(m, r, theta, u_r, u_rr, u_th, u_thth);
        const double rhs = 2.0 * z.rho * f.lap_reduced(z.rho, z.sigma, m);
        worst = std::max(worst, std::fabs(lhs - rhs));
    }
    return worst;
}

double correspondence_residual_fd(const AnalyticField& f, int m, double h,
                                  const std::vector<ReducedPoint>& samples) {
    auto u = [&f](double r, double theta) {
        return f.v(0.5 * r * r, 2.0 * theta);
    };
    double worst = 0.0;
    for (const auto& z : samples) {
        check_sample(z, h);
        const double r = std::sqrt(2.0 * z.rho);
        const double theta = 0.5 * z.sigma;

        const double u_r = (u(r + h, theta) - u(r - h, theta)) / (2.0 * h);
        const double u_rr =
            (u(r + h, theta) - 2.0 * u(r, theta) + u(r - h, theta)) / (h * h);
        const double u_th = (u(r, theta + h) - u(r, theta - h)) / (2.0 * h);
        const double u_thth =
            (u(r, theta + h) - 2.0 * u(r, theta) + u(r, theta - h)) / (h * h);
        const double lhs = polar_lap_2m(m, r, theta, u_r, u_rr, u_th, u_thth);

        const double v_r =
            (f.v(z.rho + h, z.sigma) - f.v(z.rho - h, z.sigma)) / (2.0 * h);
        const double v_rr = (f.v(z.rho + h, z.sigma) - 2.0 * f.v(z.rho, z.sigma) +
                             f.v(z.rho - h, z.sigma)) /
                            (h * h);
        const double v_s =
            (f.v(z.rho, z.sigma + h) - f.v(z.rho, z.sigma - h)) / (2.0 * h);
        const double v_ss = (f.v(z.rho, z.sigma + h) - 2.0 * f.v(z.rho, z.sigma) +
                             f.v(z.rho, z.sigma - h)) /
                            (h * h);
        const double rhs =
            2.0 * z.rho * polar_lap_m1(m, z.rho, z.sigma, v_r, v_rr, v_s, v_ss);

        const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1.0});
        worst = std::max(worst, std::fabs(lhs - rhs) / scale);
    }
    return worst;
}

double correspondence_fd_slope(const AnalyticField& f, int m,
                               const std::vector<double>& h_values,
                               const std::vector<ReducedPoint>& samples) {
    if (h_values.size() < 2)
        throw Error(ErrorKind::InsufficientData, "need at least two step sizes");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(h_values.size());
    for (double h : h_values) {
        const double res = correspondence_residual_fd(f, m, h, samples);
        if (res <= 0.0)
            throw Error(ErrorKind::InsufficientData,
                        "identically zero residual; slope undefined");
        const double x = std::log(h), y = std::log(res);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double half_to_unit_factor(double p) { return std::pow(0.25, 1.0 / (p - 2.0)); }
double unit_to_half_factor(double p) { return std::pow(4.0, 1.0 / (p - 2.0)); }

} // namespace henonlab::reduction
