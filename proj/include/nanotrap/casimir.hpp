#pragma once

#include <memory>

#include "nanotrap/interp.hpp"
#include "nanotrap/types.hpp"
#include "nanotrap/vec.hpp"

// Casimir-Polder potentials in the static-polarizability regime:
// planar layered wafer via TE/TM reflection-coefficient quadrature, and a
// perfectly conducting cylinder via modified-Bessel mode sums.
namespace nanotrap::casimir {

/// Dimensionless F(ε1, ε2, b/z) of the bilayer CP potential
///   U(z) = -(ħcα0/2π) F / z⁴,
/// from the double quadrature over imaginary-frequency reflection
/// coefficients. Relative accuracy ~1e-4 at default tolerance.
double planar_F(double eps1, double eps2, double b_over_z, double rel_tol = 1e-5);

/// Single-interface limit (layer and substrate share ε).
double planar_F_single(double eps, double rel_tol = 1e-5);

/// U_CP above the stack top at height z > 0 (J). Direct evaluation.
double planar_U(double z, const WaferStack& stack, double alpha0);

/// Dimensionless F(a/R) for a perfectly conducting cylinder of radius a,
///   U(R) = -(ħcα0/2π) F(a/R) / (R-a)⁴.
/// Mode sum truncated at 1e-4 relative with a geometric tail estimate;
/// the x-integrals are evaluated to 1e-5 relative.
double cylinder_F(double a_over_R, double rel_tol = 1e-4);

/// U_CP at distance R > a from the cylinder axis (J).
double cylinder_U(double R, double a, double alpha0);

/// Potential provider interface consumed by trap/GP code.
class CPProvider {
public:
    virtual ~CPProvider() = default;
    /// U_CP(r) in J; throws std::domain_error inside a body.
    virtual double potential(const Vec3& r) const = 0;
    /// True when r is inside (or on) a solid body of this provider.
    virtual bool inside_body(const Vec3& r) const = 0;
};

class ZeroCP final : public CPProvider {
public:
    double potential(const Vec3&) const override { return 0.0; }
    bool inside_body(const Vec3&) const override { return false; }
};

/// Wafer occupying z <= wafer_top; spline-cached F(b/z).
class PlanarCP final : public CPProvider {
public:
    PlanarCP(WaferStack stack, double alpha0, double wafer_top = 0.0);
    double potential(const Vec3& r) const override;
    bool inside_body(const Vec3& r) const override { return r.z <= wafer_top_; }
    double F_at(double z) const;

private:
    WaferStack stack_;
    double alpha0_;
    double wafer_top_;
    double eps1_, eps2_, b_;
    double f_shallow_, f_deep_;
    CubicSpline f_;  // F vs ln(b/z)
};

/// Perfectly conducting cylinder along `axis_dir` through `axis_point`;
/// radius a (the h/2 mapping for rectangular wires is the caller's choice).
class CylinderCP final : public CPProvider {
public:
    CylinderCP(double a, Vec3 axis_point, Vec3 axis_dir, double alpha0);
    double potential(const Vec3& r) const override;
    bool inside_body(const Vec3& r) const override;
    double radial_distance(const Vec3& r) const;

    /// Shared spline of F(a/R) on a/R in [1e-3, 0.98] (built once).
    static double F_cached(double a_over_R);

private:
    double a_;
    Vec3 p0_, dir_;
    double alpha0_;
};

/// Pairwise-additive sum of a wafer and a wire cylinder. Documented as an
/// order-of-magnitude estimator of the combined geometry.
class PaaCP final : public CPProvider {
public:
    PaaCP(std::shared_ptr<const CPProvider> first, std::shared_ptr<const CPProvider> second)
        : a_(std::move(first)), b_(std::move(second)) {}
    double potential(const Vec3& r) const override {
        return a_->potential(r) + b_->potential(r);
    }
    bool inside_body(const Vec3& r) const override {
        return a_->inside_body(r) || b_->inside_body(r);
    }

private:
    std::shared_ptr<const CPProvider> a_, b_;
};

} // namespace nanotrap::casimir
