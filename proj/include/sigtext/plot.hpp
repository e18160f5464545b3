#pragma once

#include "sigtext/signal.hpp"

#include <string>

namespace sigtext {

struct PlotOptions {
    int width = 900;
    int panel_height = 300;
    std::string title;
    double max_freq_hz = 0.0;  // 0: Nyquist
};

// Two stacked panels: time waveform on top, single-sided amplitude spectrum below.
std::string plot_svg(const SampledSignal& signal, const PlotOptions& options = {});

} // namespace sigtext
