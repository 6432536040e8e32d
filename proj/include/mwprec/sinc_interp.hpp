#pragma once

#include <cstddef>
#include <vector>

namespace mwprec {

// Band-limited signal reads via a 33-tap Kaiser-windowed sinc (beta = 8).
// Samples outside [0, n) read as zero.

double kaiser_i0(double x);

// Value of the band-limited reconstruction of x at continuous position pos.
double sinc_interp_at(const double* x, size_t n, double pos);

// y[i] = x(i - delay), delay in samples (any real value).
std::vector<double> fractional_delay(const std::vector<double>& x, double delay);

inline constexpr int kSincTaps = 33;
inline constexpr double kSincKaiserBeta = 8.0;

} // namespace mwprec
