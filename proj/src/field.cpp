#include "nanotrap/field.hpp"

#include <cmath>
#include <stdexcept>

#include "nanotrap/constants.hpp"

namespace nanotrap::fieldsolver {

void WireSpec::validate() const {
    if (path.size() < 2) throw std::invalid_argument("WireSpec: path needs >= 2 points");
    for (std::size_t i = 1; i < path.size(); ++i)
        if ((path[i] - path[i - 1]).norm2() == 0.0)
            throw std::invalid_argument("WireSpec: consecutive path points must be distinct");
    cross_section.validate();
    material.validate();
}

Vec3 segment_field(const Vec3& a, const Vec3& b, double current, const Vec3& r) {
    const Vec3 u = b - a;
    const double len = u.norm();
    const Vec3 uh = u / len;
    const Vec3 ra = r - a;
    const Vec3 rb = r - b;
    const Vec3 perp = uh.cross(ra);
    const double rho2 = perp.norm2();
    constexpr double kAxisTol = 1e-12;
    if (rho2 < kAxisTol * kAxisTol) {
        const double tproj = uh.dot(ra);
        if (tproj > -kAxisTol && tproj < len + kAxisTol)
            throw std::domain_error("field evaluation on a wire segment axis");
        return {0.0, 0.0, 0.0};  // on the extended axis the field vanishes
    }
    const double cos1 = uh.dot(ra) / ra.norm();
    const double cos2 = uh.dot(rb) / rb.norm();
    const double pref = constants::mu0 * current / (4.0 * constants::pi);
    return perp * (pref * (cos1 - cos2) / rho2);
}

Vec3 FieldConfiguration::field_at(const Vec3& r) const {
    Vec3 B = bias;
    for (const WireSpec& w : wires)
        for (std::size_t i = 1; i < w.path.size(); ++i)
            B += segment_field(w.path[i - 1], w.path[i], w.current, r);
    return B;
}

WireSpec make_z_wire(double bar, double lead, const CrossSection& cs, const Material& mat,
                     double current) {
    WireSpec w;
    w.cross_section = cs;
    w.material = mat;
    w.current = current;
    const double zc = 0.5 * cs.h;
    w.path = {{-0.5 * bar, -lead, zc},
              {-0.5 * bar, 0.0, zc},
              {0.5 * bar, 0.0, zc},
              {0.5 * bar, lead, zc}};
    return w;
}

WireSpec make_straight_wire(double length, const CrossSection& cs, const Material& mat,
                            double current) {
    WireSpec w;
    w.cross_section = cs;
    w.material = mat;
    w.current = current;
    const double zc = 0.5 * cs.h;
    w.path = {{-0.5 * length, 0.0, zc}, {0.5 * length, 0.0, zc}};
    return w;
}

} // namespace nanotrap::fieldsolver
