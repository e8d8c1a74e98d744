// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

#include "windtunnel/error.hpp"

namespace windtunnel {

/// Node degrees k >= 1 as a histogram: degree -> count.
class DegreeSample {
public:
    DegreeSample() = default;
    explicit DegreeSample(std::map<std::uint64_t, std::uint64_t> histogram);
    static DegreeSample from_values(const std::vector<std::uint64_t>& degrees);

    const std::map<std::uint64_t, std::uint64_t>& histogram() const noexcept { return hist_; }
    std::uint64_t size() const noexcept { return n_; }
    bool empty() const noexcept { return n_ == 0; }

private:
    std::map<std::uint64_t, std::uint64_t> hist_;
    std::uint64_t n_ = 0;
};

struct PowerLawFit {
    double rho = 0.0;            ///< Yule-Simon shape
    double gamma = 0.0;          ///< tail exponent, rho + 1
    double std_error = 0.0;      ///< of rho (and gamma), from observed information
    double log_likelihood = 0.0;
    std::uint32_t iterations = 0;
    std::uint64_t n = 0;
    bool boundary_warning = false; ///< the maximum sits on the search bound
    std::vector<double> trace;     ///< log-likelihood after each EM iteration
};

/// Fit failure; carries the last EM iterate.
class FitError : public Error {
public:
    FitError(const std::string& what, double last_rho) : Error(what), last_rho_(last_rho) {}
    double last_rho() const noexcept { return last_rho_; }

private:
    double last_rho_;
};

inline constexpr double kRhoLowerBound = 1e-3;
inline constexpr double kRhoUpperBound = 20.0;

/// p(k; rho) = rho * B(k, rho + 1).
double yule_simon_pmf(std::uint64_t k, double rho);
double yule_simon_log_pmf(std::uint64_t k, double rho);

/// l(rho) = n log rho + sum_i log B(k_i, rho + 1).
double yule_simon_log_likelihood(const DegreeSample& sample, double rho);

/// Maximum-likelihood rho by EM on the exponential-mixture representation of
/// the Yule-Simon law, restricted to [kRhoLowerBound, kRhoUpperBound].
PowerLawFit fit_yule_simon(const DegreeSample& sample, double tol = 1e-8,
                           std::uint32_t max_iter = 500);

/// n i.i.d. draws: W ~ Exponential(rho), K | W ~ Geometric(e^-W) on {1, 2, ...}.
std::vector<std::uint64_t> sample_yule_simon(double rho, std::uint64_t n, std::uint64_t seed);

/// "degree<TAB>count<TAB>empirical_prob<TAB>theoretical_prob" rows sorted by
/// degree; the theoretical column is "NA" without a fit.
void export_histogram(const DegreeSample& sample, const std::optional<PowerLawFit>& fit,
                      const std::filesystem::path& path);

} // namespace windtunnel
