#pragma once

// Reference implementations used as oracles. They follow the textbook
// definitions directly and share no code with the library.

#include "sigtext/tensor.hpp"

#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace oracle {

// Single-sided amplitude spectrum by direct summation: |X_k| * 2/N (DC and Nyquist 1/N).
inline std::vector<double> dft_amplitudes(const std::vector<double>& x)
{
    const std::size_t n = x.size();
    std::vector<double> amp(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>((k * i) % n) / static_cast<double>(n);
            acc += x[i] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
        amp[k] = std::abs(acc) * (edge ? 1.0 : 2.0) / static_cast<double>(n);
    }
    return amp;
}

// Amplitude of a single DFT bin at frequency f (must be a bin centre).
inline double dft_amplitude_at(const std::vector<double>& x, double fs, double f)
{
    const std::size_t n = x.size();
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ang = -2.0 * std::numbers::pi * f * static_cast<double>(i) / fs;
        acc += x[i] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return 2.0 * std::abs(acc) / static_cast<double>(n);
}

// Odometer over a box of extents; calls f(index) for every index, last digit fastest.
template <typename F>
void for_each_index(const std::vector<std::size_t>& extents, F&& f)
{
    std::vector<std::size_t> idx(extents.size(), 0);
    for (auto e : extents) {
        if (e == 0) {
            return;
        }
    }
    while (true) {
        f(idx);
        std::size_t d = idx.size();
        while (d > 0) {
            --d;
            if (++idx[d] < extents[d]) {
                break;
            }
            idx[d] = 0;
            if (d == 0) {
                return;
            }
        }
        if (idx.empty()) {
            return;
        }
    }
}

inline double get(const sigtext::Tensor& t, const std::vector<std::size_t>& idx)
{
    std::size_t off = 0;
    for (std::size_t m = 0; m < idx.size(); ++m) {
        off = off * t.dim(m) + idx[m];
    }
    return t.values()[off];
}

// Flexible product by the defining index sum (0-based translation).
//   alpha = 1: A(k1, s1..sq, k2..k_{m-q});        alpha = 2: A(k1, k2..k_{m-q}, sq..s1)
//   beta  = 1: B(s1..sq, k_{m-q+1}.., k_last);   beta  = 2: B(k_{m-q+1}.., sq..s1, k_last)
inline sigtext::Tensor flexible_product_naive(const sigtext::Tensor& a, const sigtext::Tensor& b, unsigned q,
                                              int alpha, int beta)
{
    const std::size_t m = a.order();
    const std::size_t n = b.order();
    // Contracted extents S_r, r = 1..q, taken from A.
    std::vector<std::size_t> s_ext(q);
    for (unsigned r = 1; r <= q; ++r) {
        s_ext[r - 1] = alpha == 1 ? a.dim(r) : a.dim(m - r);
    }
    // Free modes of A (in output order) and of B.
    std::vector<std::size_t> a_free;
    a_free.push_back(0);
    if (alpha == 1) {
        for (std::size_t d = q + 1; d < m; ++d) {
            a_free.push_back(d);
        }
    } else {
        for (std::size_t d = 1; d < m - q; ++d) {
            a_free.push_back(d);
        }
    }
    std::vector<std::size_t> b_free;
    if (beta == 1) {
        for (std::size_t d = q; d < n; ++d) {
            b_free.push_back(d);
        }
    } else {
        for (std::size_t d = 0; d + q + 1 < n; ++d) {
            b_free.push_back(d);
        }
        b_free.push_back(n - 1);
    }
    std::vector<std::size_t> out_dims;
    for (auto d : a_free) {
        out_dims.push_back(a.dim(d));
    }
    for (auto d : b_free) {
        out_dims.push_back(b.dim(d));
    }
    sigtext::Tensor out(out_dims);
    std::size_t flat = 0;
    for_each_index(out_dims, [&](const std::vector<std::size_t>& k) {
        double acc = 0.0;
        for_each_index(s_ext, [&](const std::vector<std::size_t>& s) {
            std::vector<std::size_t> ia(m);
            std::vector<std::size_t> ib(n);
            for (std::size_t t = 0; t < a_free.size(); ++t) {
                ia[a_free[t]] = k[t];
            }
            for (std::size_t t = 0; t < b_free.size(); ++t) {
                ib[b_free[t]] = k[a_free.size() + t];
            }
            for (unsigned r = 1; r <= q; ++r) {
                ia[alpha == 1 ? r : m - r] = s[r - 1];
                ib[beta == 1 ? r - 1 : n - 1 - r] = s[r - 1];
            }
            acc += get(a, ia) * get(b, ib);
        });
        out.values()[flat++] = acc;
    });
    return out;
}

inline sigtext::Tensor random_tensor(std::vector<std::size_t> dims, std::mt19937_64& gen)
{
    std::normal_distribution<double> nd(0.0, 1.0);
    sigtext::Tensor t(std::move(dims));
    for (auto& v : t.values()) {
        v = nd(gen);
    }
    return t;
}

// Envelope by full-wave rectification, 4th-order Butterworth lowpass (two
// cascaded biquads via the bilinear transform), then direct DFT.
inline std::vector<double> rectified_lowpassed(const std::vector<double>& x, double fs, double cutoff_hz)
{
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = std::abs(x[i]);
    }
    const double k = std::tan(std::numbers::pi * cutoff_hz / fs);
    for (double qf : {0.54119610, 1.3065630}) {
        const double norm = 1.0 / (1.0 + k / qf + k * k);
        const double b0 = k * k * norm;
        const double b1 = 2.0 * b0;
        const double b2 = b0;
        const double a1 = 2.0 * (k * k - 1.0) * norm;
        const double a2 = (1.0 - k / qf + k * k) * norm;
        double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
        for (auto& v : y) {
            const double in = v;
            const double outv = b0 * in + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
            x2 = x1;
            x1 = in;
            y2 = y1;
            y1 = outv;
            v = outv;
        }
    }
    return y;
}

} // namespace oracle

namespace testutil {

inline std::filesystem::path temp_dir(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("sigtext_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

// Validates `doc` against the subset of JSON Schema used by the published
// schemas: type, required, properties, additionalProperties (bool), items,
// enum, minimum, minItems, minLength. Returns the first violation, or "".
inline std::string schema_violation(const nlohmann::json& schema, const nlohmann::json& doc,
                                    const std::string& where = "$")
{
    using nlohmann::json;
    if (schema.contains("type")) {
        auto matches = [&](const std::string& t) {
            if (t == "object") return doc.is_object();
            if (t == "array") return doc.is_array();
            if (t == "string") return doc.is_string();
            if (t == "number") return doc.is_number();
            if (t == "integer") return doc.is_number_integer();
            if (t == "boolean") return doc.is_boolean();
            if (t == "null") return doc.is_null();
            return false;
        };
        bool ok = false;
        if (schema["type"].is_array()) {
            for (const auto& t : schema["type"]) {
                ok = ok || matches(t.get<std::string>());
            }
        } else {
            ok = matches(schema["type"].get<std::string>());
        }
        if (!ok) {
            return where + ": expected type " + schema["type"].dump() + ", got " + doc.type_name();
        }
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& e : schema["enum"]) {
            found = found || e == doc;
        }
        if (!found) {
            return where + ": value " + doc.dump() + " not in enum";
        }
    }
    if (schema.contains("minimum") && doc.is_number() && doc.get<double>() < schema["minimum"].get<double>()) {
        return where + ": below minimum";
    }
    if (schema.contains("minLength") && doc.is_string() &&
        doc.get<std::string>().size() < schema["minLength"].get<std::size_t>()) {
        return where + ": string too short";
    }
    if (doc.is_object()) {
        if (schema.contains("required")) {
            for (const auto& r : schema["required"]) {
                if (!doc.contains(r.get<std::string>())) {
                    return where + ": missing required '" + r.get<std::string>() + "'";
                }
            }
        }
        const json props = schema.value("properties", json::object());
        for (const auto& item : doc.items()) {
            if (props.contains(item.key())) {
                auto v = schema_violation(props[item.key()], item.value(), where + "." + item.key());
                if (!v.empty()) {
                    return v;
                }
            } else if (schema.contains("additionalProperties") && schema["additionalProperties"].is_boolean() &&
                       !schema["additionalProperties"].get<bool>()) {
                return where + ": unexpected property '" + item.key() + "'";
            }
        }
    }
    if (doc.is_array()) {
        if (schema.contains("minItems") && doc.size() < schema["minItems"].get<std::size_t>()) {
            return where + ": too few items";
        }
        if (schema.contains("items")) {
            for (std::size_t i = 0; i < doc.size(); ++i) {
                auto v = schema_violation(schema["items"], doc[i], where + "[" + std::to_string(i) + "]");
                if (!v.empty()) {
                    return v;
                }
            }
        }
    }
    return {};
}

} // namespace testutil
