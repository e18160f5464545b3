#include "sigtext/plot.hpp"

#include "sigtext/error.hpp"
#include "sigtext/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace sigtext {

namespace {

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Panel {
    double x0, y0, w, h;
};

// Polyline through (xs, ys), decimated to min/max pairs per pixel column so
// long records stay small.
std::string polyline(const std::vector<double>& xs, const std::vector<double>& ys, double xmin, double xmax,
                     double ymin, double ymax, const Panel& p, const char* colour)
{
    const auto sx = [&](double x) { return p.x0 + (x - xmin) / (xmax - xmin) * p.w; };
    const auto sy = [&](double y) { return p.y0 + p.h - (y - ymin) / (ymax - ymin) * p.h; };
    std::string pts;
    const auto columns = static_cast<std::size_t>(std::max(1.0, p.w));
    std::size_t i = 0;
    for (std::size_t c = 0; c < columns && i < xs.size(); ++c) {
        const double edge = xmin + (xmax - xmin) * static_cast<double>(c + 1) / static_cast<double>(columns);
        double lo = ys[i];
        double hi = ys[i];
        std::size_t ilo = i;
        std::size_t ihi = i;
        std::size_t j = i;
        for (; j < xs.size() && (xs[j] <= edge || j == i); ++j) {
            if (ys[j] < lo) {
                lo = ys[j];
                ilo = j;
            }
            if (ys[j] > hi) {
                hi = ys[j];
                ihi = j;
            }
        }
        const std::size_t a = std::min(ilo, ihi);
        const std::size_t b = std::max(ilo, ihi);
        pts += num(sx(xs[a])) + "," + num(sy(ys[a])) + " ";
        if (b != a) {
            pts += num(sx(xs[b])) + "," + num(sy(ys[b])) + " ";
        }
        i = j;
    }
    return "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1\" points=\"" + pts +
           "\"/>\n";
}

std::string axes(const Panel& p, double xmin, double xmax, double ymin, double ymax, const std::string& xlabel,
                 const std::string& ylabel)
{
    std::string s;
    s += "<rect x=\"" + num(p.x0) + "\" y=\"" + num(p.y0) + "\" width=\"" + num(p.w) + "\" height=\"" + num(p.h) +
         "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = k / 4.0;
        const double x = p.x0 + fx * p.w;
        s += "<text x=\"" + num(x) + "\" y=\"" + num(p.y0 + p.h + 16) +
             "\" font-size=\"11\" text-anchor=\"middle\">" + label(xmin + fx * (xmax - xmin)) + "</text>\n";
        const double y = p.y0 + p.h - fx * p.h;
        s += "<text x=\"" + num(p.x0 - 6) + "\" y=\"" + num(y + 4) + "\" font-size=\"11\" text-anchor=\"end\">" +
             label(ymin + fx * (ymax - ymin)) + "</text>\n";
    }
    s += "<text x=\"" + num(p.x0 + p.w / 2) + "\" y=\"" + num(p.y0 + p.h + 32) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + escape(xlabel) + "</text>\n";
    s += "<text x=\"" + num(p.x0 - 52) + "\" y=\"" + num(p.y0 + p.h / 2) +
         "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 " + num(p.x0 - 52) + " " +
         num(p.y0 + p.h / 2) + ")\">" + escape(ylabel) + "</text>\n";
    return s;
}

} // namespace

std::string plot_svg(const SampledSignal& signal, const PlotOptions& options)
{
    signal.validate();
    if (signal.size() < 2) {
        throw InvalidArgument("plot needs at least two samples");
    }
    const double margin_left = 70.0;
    const double margin_top = options.title.empty() ? 20.0 : 40.0;
    const double gap = 60.0;
    const double w = options.width - margin_left - 20.0;
    const double h = options.panel_height;
    const double total_h = margin_top + 2 * h + gap + 50.0;

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) +
                      "\" height=\"" + num(total_h) + "\" font-family=\"sans-serif\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty()) {
        svg += "<text x=\"" + num(options.width / 2.0) + "\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">" +
               escape(options.title) + "</text>\n";
    }

    std::vector<double> t(signal.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = static_cast<double>(i) / signal.sample_rate_hz;
    }
    double lo = *std::min_element(signal.samples.begin(), signal.samples.end());
    double hi = *std::max_element(signal.samples.begin(), signal.samples.end());
    if (hi - lo < 1e-12) {
        lo -= 1.0;
        hi += 1.0;
    }
    const Panel top{margin_left, margin_top, w, h};
    svg += axes(top, t.front(), t.back(), lo, hi, "Time (s)", "Amplitude (" + signal.unit + ")");
    svg += polyline(t, signal.samples, t.front(), t.back(), lo, hi, top, "#1f5fa8");

    const Spectrum spec = spectrum(signal);
    double fmax = options.max_freq_hz > 0.0 ? std::min(options.max_freq_hz, spec.freqs_hz.back()) : spec.freqs_hz.back();
    if (!(fmax > 0.0)) {
        fmax = spec.freqs_hz.back();
    }
    std::vector<double> fx;
    std::vector<double> fy;
    for (std::size_t k = 0; k < spec.size() && spec.freqs_hz[k] <= fmax; ++k) {
        fx.push_back(spec.freqs_hz[k]);
        fy.push_back(spec.amplitudes[k]);
    }
    double amax = fy.empty() ? 1.0 : *std::max_element(fy.begin(), fy.end());
    if (amax < 1e-12) {
        amax = 1.0;
    }
    const Panel bottom{margin_left, margin_top + h + gap, w, h};
    svg += axes(bottom, 0.0, fmax, 0.0, amax * 1.05, "Frequency (Hz)", "Amplitude (" + signal.unit + ")");
    if (fx.size() >= 2) {
        svg += polyline(fx, fy, 0.0, fmax, 0.0, amax * 1.05, bottom, "#b03a2e");
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace sigtext
