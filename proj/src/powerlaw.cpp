// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#include "windtunnel/powerlaw.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <cmath>
#include <fstream>
#include <random>

#include "windtunnel/corpus_io.hpp"
#include "windtunnel/hashing.hpp"

namespace windtunnel {

DegreeSample::DegreeSample(std::map<std::uint64_t, std::uint64_t> histogram)
    : hist_(std::move(histogram)) {
    for (auto it = hist_.begin(); it != hist_.end();) {
        if (it->first == 0) {
            throw ValidationError("degree sample: degrees must be >= 1");
        }
        if (it->second == 0) {
            it = hist_.erase(it);
            continue;
        }
        n_ += it->second;
        ++it;
    }
}

DegreeSample DegreeSample::from_values(const std::vector<std::uint64_t>& degrees) {
    std::map<std::uint64_t, std::uint64_t> hist;
    for (auto k : degrees) {
        ++hist[k];
    }
    return DegreeSample(std::move(hist));
}

double yule_simon_log_pmf(std::uint64_t k, double rho) {
    if (k < 1) {
        throw ValidationError("yule_simon_pmf: k must be >= 1");
    }
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw ValidationError("yule_simon_pmf: rho must be positive");
    }
    auto kd = static_cast<double>(k);
    // log rho + log B(k, rho + 1)
    return std::log(rho) + std::lgamma(kd) + std::lgamma(rho + 1.0) - std::lgamma(kd + rho + 1.0);
}

double yule_simon_pmf(std::uint64_t k, double rho) {
    return std::exp(yule_simon_log_pmf(k, rho));
}

double yule_simon_log_likelihood(const DegreeSample& sample, double rho) {
    double ll = 0.0;
    for (const auto& [k, count] : sample.histogram()) {
        ll += static_cast<double>(count) * yule_simon_log_pmf(k, rho);
    }
    return ll;
}

namespace {

// E-step: sum over the sample of E[W | k] = psi(rho + 1 + k) - psi(rho + 1),
// where W is the latent exponential rate of the geometric mixture.
double expected_latent_sum(const DegreeSample& sample, double rho) {
    using boost::math::digamma;
    const double base = digamma(rho + 1.0);
    double sum = 0.0;
    for (const auto& [k, count] : sample.histogram()) {
        double term = 0.0;
        if (k <= 64) {
            for (std::uint64_t j = 0; j < k; ++j) {
                term += 1.0 / (rho + 1.0 + static_cast<double>(j));
            }
        } else {
            term = digamma(rho + 1.0 + static_cast<double>(k)) - base;
        }
        sum += static_cast<double>(count) * term;
    }
    return sum;
}

} // namespace

PowerLawFit fit_yule_simon(const DegreeSample& sample, double tol, std::uint32_t max_iter) {
    if (sample.empty()) {
        throw ValidationError("fit_yule_simon: empty degree sample");
    }
    if (!(tol > 0.0)) {
        throw ValidationError("fit_yule_simon: tol must be positive");
    }

    const auto n = static_cast<double>(sample.size());
    PowerLawFit fit;
    fit.n = sample.size();

    // Moment-style start: for rho > 1 the mean is rho / (rho - 1).
    double mean = 0.0;
    for (const auto& [k, count] : sample.histogram()) {
        mean += static_cast<double>(k) * static_cast<double>(count);
    }
    mean /= n;
    double rho = mean > 1.0 + 1e-9 ? mean / (mean - 1.0) : kRhoUpperBound;
    rho = std::clamp(rho, 0.5, kRhoUpperBound);

    bool converged = false;
    for (std::uint32_t it = 1; it <= max_iter; ++it) {
        auto next = n / expected_latent_sum(sample, rho);
        fit.iterations = it;
        if (next >= kRhoUpperBound || next <= kRhoLowerBound) {
            rho = std::clamp(next, kRhoLowerBound, kRhoUpperBound);
            fit.boundary_warning = true;
            fit.trace.push_back(yule_simon_log_likelihood(sample, rho));
            converged = true;
            break;
        }
        auto step = std::abs(next - rho);
        rho = next;
        fit.trace.push_back(yule_simon_log_likelihood(sample, rho));
        if (step <= tol * std::max(1.0, rho)) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw FitError("fit_yule_simon: no convergence after " + std::to_string(max_iter) +
                           " iterations (last rho " + format_double(rho) + ")",
                       rho);
    }

    fit.rho = rho;
    fit.gamma = rho + 1.0;
    fit.log_likelihood = yule_simon_log_likelihood(sample, rho);

    const double h = 1e-4 * rho;
    auto second = (yule_simon_log_likelihood(sample, rho + h) - 2.0 * fit.log_likelihood +
                   yule_simon_log_likelihood(sample, rho - h)) /
                  (h * h);
    fit.std_error = second < 0.0 ? 1.0 / std::sqrt(-second)
                                 : std::numeric_limits<double>::infinity();
    return fit;
}

std::vector<std::uint64_t> sample_yule_simon(double rho, std::uint64_t n, std::uint64_t seed) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw ValidationError("sample_yule_simon: rho must be positive");
    }
    constexpr double kMaxDegree = 0x1.0p62;
    std::mt19937_64 gen(splitmix64(seed));
    std::vector<std::uint64_t> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        auto w = -std::log1p(-unit_interval(gen())) / rho;
        // Geometric on {1, 2, ...} with success probability e^-w, by inversion.
        auto v = 1.0 - unit_interval(gen());
        auto log_fail = std::log(-std::expm1(-w));
        double k = 1.0;
        if (log_fail < 0.0) {
            k += std::floor(std::log(v) / log_fail);
        } else {
            k = kMaxDegree;
        }
        out.push_back(static_cast<std::uint64_t>(std::min(k, kMaxDegree)));
    }
    return out;
}

void export_histogram(const DegreeSample& sample, const std::optional<PowerLawFit>& fit,
                      const std::filesystem::path& path) {
    if (sample.empty()) {
        throw ValidationError("export_histogram: empty degree sample");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    const auto n = static_cast<double>(sample.size());
    for (const auto& [k, count] : sample.histogram()) {
        out << k << '\t' << count << '\t' << format_double(static_cast<double>(count) / n)
            << '\t' << (fit ? format_double(yule_simon_pmf(k, fit->rho)) : std::string("NA"))
            << '\n';
    }
}

} // namespace windtunnel
