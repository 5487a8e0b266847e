#pragma once

namespace naide {

struct AffineParams {
    double a = 0.0;  // slope
    double b = 0.0;  // intercept
};

/// Estimated loss of the affine reconstruction a*z + b from the noisy
/// value alone: (z - (a z + b))^2 + 2 a sigma^2. Its expectation over the
/// noise equals the true squared error plus sigma^2.
inline double estimated_loss(double z, double a, double b, double variance_norm) {
    const double residual = z - (a * z + b);
    return residual * residual + 2.0 * a * variance_norm;
}

struct LossGradient {
    double d_a = 0.0;
    double d_b = 0.0;
};

inline LossGradient estimated_loss_grad(double z, double a, double b, double variance_norm) {
    const double r = a * z + b - z;
    return {2.0 * r * z + 2.0 * variance_norm, 2.0 * r};
}

inline double unclamped_affine(double z, AffineParams p) { return p.a * z + p.b; }

/// Reconstruction a*z + b clamped to [0, 1].
inline double apply_affine(double z, AffineParams p) {
    const double v = unclamped_affine(z, p);
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

}  // namespace naide
