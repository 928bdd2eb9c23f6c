#pragma once

#include <optional>
#include <string>
#include <vector>

namespace reline::stats {

struct TestResult {
    double statistic = 0.0;  // U, d, or rho
    double p_value = 1.0;
    std::optional<double> adjusted_p;
    std::optional<std::string> magnitude;  // negligible/small/medium/large
};

// Two-sided Mann-Whitney U. Exact permutation distribution (rank-sum DP,
// midranks for ties) when |a|*|b| <= 400, else normal approximation with
// continuity and tie corrections.
TestResult mann_whitney(const std::vector<double>& a, const std::vector<double>& b);

// d = (#{a_i > b_j} - #{a_i < b_j}) / (|a|*|b|), labeled per the
// 0.10 / 0.33 / 0.474 magnitude thresholds.
TestResult cliffs_delta(const std::vector<double>& a, const std::vector<double>& b);

std::string cliffs_magnitude(double d);

// Holm step-down adjustment, returned in input order.
std::vector<double> holm_adjust(const std::vector<double>& p_values);

// Spearman rank correlation with average ranks for ties; p-value from the
// t-distribution approximation.
TestResult spearman(const std::vector<double>& x, const std::vector<double>& y);

struct Descriptive {
    double mean = 0.0;
    double median = 0.0;
    double stdev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

Descriptive descriptive(const std::vector<double>& sample);

std::vector<double> midranks(const std::vector<double>& pooled);

}  // namespace reline::stats
