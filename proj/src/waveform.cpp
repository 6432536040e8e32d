#include "mwprec/waveform.hpp"

#include <cmath>

#include "mwprec/errors.hpp"

namespace mwprec {

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

Waveform normalize(const Waveform& w, double peak) {
    if (w.samples.empty()) throw PreconditionError("normalize: empty waveform");
    double maxabs = 0.0;
    for (double x : w.samples) maxabs = std::max(maxabs, std::fabs(x));
    if (maxabs == 0.0) throw PreconditionError("normalize: all-zero waveform");
    Waveform out = w;
    // Divide by the peak first: x/maxabs == 1 exactly for the peak sample and
    // <= 1 for all others, so max |sample| lands on `peak` exactly.
    for (double& x : out.samples) x = (x / maxabs) * peak;
    return out;
}

} // namespace mwprec
