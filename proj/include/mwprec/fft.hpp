#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mwprec {

// In-place iterative radix-2 FFT. Size must be a power of two.
void fft(std::vector<std::complex<double>>& a, bool inverse);

std::vector<std::complex<double>> fft_real(const std::vector<double>& x);

// Magnitude spectrum of a real signal, zero-padded to the next power of two
// when needed. Returns n/2+1 one-sided magnitudes of the padded length n.
std::vector<double> magnitude_spectrum(const std::vector<double>& x);

// Analytic signal via the frequency-domain Hilbert construction. Input is
// zero-padded to a power of two internally; the returned vector is trimmed
// back to the input length.
std::vector<std::complex<double>> analytic_signal(const std::vector<double>& x);

// Instantaneous frequency (Hz) by forward phase difference of the analytic
// signal; valid for content below fs/2. Output has the input length (the
// last sample repeats its predecessor).
std::vector<double> instantaneous_frequency(const std::vector<double>& x, double sample_rate);

size_t next_pow2(size_t n);

} // namespace mwprec
