#pragma once

#include "specprobe/eigensolve.hpp"

namespace fixtures {

/// Spectra shared between test cases; solved once per process.
const specprobe::SpectrumTable& quartic(int n = 0);
const specprobe::SpectrumTable& oscillator(int n = 0);
const specprobe::SpectrumTable& sextic();

}  // namespace fixtures
