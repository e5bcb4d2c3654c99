#pragma once

#include <functional>
#include <vector>

#include "nanotrap/types.hpp"
#include "nanotrap/vec.hpp"

// Magnetostatics of polyline wires (thin-filament finite segments) plus
// uniform bias fields.
namespace nanotrap::fieldsolver {

struct WireSpec {
    std::vector<Vec3> path;     // >= 2 points, consecutive points distinct
    CrossSection cross_section;
    Material material;
    double current = 0.0;       // A, sign = direction along the path

    void validate() const;
};

struct FieldConfiguration {
    std::vector<WireSpec> wires;
    Vec3 bias;  // uniform field (T); Ioffe component included here

    /// Total field at r. Throws std::domain_error within 1e-12 m of a
    /// segment axis.
    Vec3 field_at(const Vec3& r) const;
};

/// Exact field of a finite straight filament from a to b carrying I.
Vec3 segment_field(const Vec3& a, const Vec3& b, double current, const Vec3& r);

/// Z-shaped wire: central bar of length `bar` along x̂ centered at the
/// origin at height z = cs.h/2, leads of length `lead` along +ŷ at both
/// ends (current flows -y lead -> bar -> +y lead).
WireSpec make_z_wire(double bar, double lead, const CrossSection& cs, const Material& mat,
                     double current);

/// Straight wire along x̂ of the given total length, centered at origin,
/// at height z = cs.h/2.
WireSpec make_straight_wire(double length, const CrossSection& cs, const Material& mat,
                            double current);

using FieldFn = std::function<Vec3(const Vec3&)>;

} // namespace nanotrap::fieldsolver
