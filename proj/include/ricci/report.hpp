#pragma once

#include <limits>
#include <string>
#include <utility>

namespace ricci {

/// Where the worst margin of a check was attained.
struct WorstLocation {
    double t = 0.0;
    double r = 0.0;
    double theta = 0.0;
};

/// Outcome of one inequality check. The margin is signed slack: positive
/// means the inequality held with room to spare. pass <=> margin >=
/// -tolerance, with the tolerance evaluated at the worst location.
struct VerifierReport {
    std::string check;
    bool pass = false;
    double margin = 0.0;
    WorstLocation where;
    double tolerance = 0.0;
    std::string domain;
};

/// Spatial domain of a check. By default the truncation ring and the
/// collar-contaminated annulus are excluded: nodes with
/// r <= radius_fraction * (grid truncation radius).
struct CheckDomain {
    double radius_fraction = 0.8;
    bool full = false; // include every interior node (still not the ring)

    double limit_radius(double truncation_radius) const {
        return full ? truncation_radius : radius_fraction * truncation_radius;
    }
};

/// Default inequality tolerance: fields carry O(h^2) discretization
/// error, scaled by the magnitude of the quantity being checked.
inline double default_tolerance(double h, double worst_value) {
    const double w = worst_value < 0 ? -worst_value : worst_value;
    return 10.0 * h * h * (1.0 + w);
}

/// Accumulates the worst pointwise slack of an inequality, ranked by
/// slack normalized against the local magnitude (so the pass criterion is
/// slack >= -10 h^2 (1 + |value|) pointwise).
class MarginAccum {
public:
    explicit MarginAccum(double ten_h2) : ten_h2_(ten_h2) {}

    void add(double slack, double scale_value, double t, double r, double theta) {
        const double mag = 1.0 + (scale_value < 0 ? -scale_value : scale_value);
        const double norm = slack / mag;
        if (norm < worst_norm_) {
            worst_norm_ = norm;
            margin_ = slack;
            tol_ = ten_h2_ * mag;
            where_ = {t, r, theta};
        }
    }

    bool empty() const { return tol_ < 0.0; }

    VerifierReport finish(std::string check, std::string domain) const {
        VerifierReport rep;
        rep.check = std::move(check);
        rep.domain = std::move(domain);
        rep.margin = margin_;
        rep.tolerance = tol_ < 0.0 ? ten_h2_ : tol_;
        rep.where = where_;
        rep.pass = rep.margin >= -rep.tolerance;
        return rep;
    }

private:
    double ten_h2_;
    double worst_norm_ = std::numeric_limits<double>::infinity();
    double margin_ = std::numeric_limits<double>::infinity();
    double tol_ = -1.0;
    WorstLocation where_;
};

} // namespace ricci
