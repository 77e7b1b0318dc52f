#pragma once

#include "kinv/core.hpp"

namespace kinv {

enum class LinearVariant { OverDetermined, UnderDetermined };

/// 2-parameter linear-Gaussian benchmarks: noise N(0, 0.1^2 I), prior N(0, I).
/// Over-determined: G = [[1,2],[3,4],[5,6]], y = (3,7,10).
/// Under-determined: G = [1 2], y = (3).
InverseProblem linear_problem(LinearVariant variant);
Matrix linear_forward_matrix(LinearVariant variant);

enum class EllipticVariant { WellDetermined, UnderDetermined };

/// Closed-form solution of -(exp(t1) p')' = 1 on [0,1], p(0)=0, p(1)=t2:
///   p(x) = t2 x + exp(-t1) (-x^2/2 + x/2)
double elliptic_pressure(double x, double theta1, double theta2);

/// 2-parameter nonlinear benchmark. Well-determined observes p at 0.25 and
/// 0.75 with y = (27.5, 79.7); under-determined observes p(0.25) only.
/// Prior N((0,100), I), noise N(0, 0.1^2 I).
InverseProblem elliptic_problem(EllipticVariant variant);

/// Ill-conditioned linear benchmark: G_ij = 1/(i+j-1), y = G*1 (datum kept
/// noise free), assumed noise N(0, 0.1^2 I), prior N(0, I).
InverseProblem hilbert_problem(Index n);
Matrix hilbert_matrix(Index n);

} // namespace kinv
