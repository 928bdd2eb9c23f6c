#include "reline/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace reline::stats {

std::vector<double> midranks(const std::vector<double>& pooled) {
    size_t n = pooled.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) { return pooled[i] < pooled[j]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

static double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// regularized incomplete beta, Lentz continued fraction
static double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 200;
    constexpr double kEps = 3e-14, kFpMin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

static double ibeta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(1.0 - x);
    double front = std::exp(ln);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

static double student_t_two_sided(double t, double dof) {
    if (dof <= 0.0) return 1.0;
    double x = dof / (dof + t * t);
    return std::clamp(ibeta(dof / 2.0, 0.5, x), 0.0, 1.0);
}

TestResult mann_whitney(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("mann_whitney: empty sample");
    size_t n = a.size(), m = b.size(), N = n + m;
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<double> ranks = midranks(pooled);

    double ra = 0.0;
    for (size_t i = 0; i < n; ++i) ra += ranks[i];
    double u = ra - static_cast<double>(n) * (n + 1) / 2.0;
    double nm = static_cast<double>(n) * static_cast<double>(m);

    TestResult res;
    res.statistic = u;

    if (nm <= 400.0) {
        // exact permutation distribution of the rank sum of group a, computed
        // by DP over the pooled midranks (scaled x2 so ties stay integral)
        std::vector<long> r2(N);
        long max_sum = 0;
        for (size_t i = 0; i < N; ++i) {
            r2[i] = std::lround(ranks[i] * 2.0);
            max_sum += r2[i];
        }
        // dp[j][s]: number of size-j subsets with scaled rank sum s
        std::vector<std::vector<double>> dp(n + 1, std::vector<double>(static_cast<size_t>(max_sum) + 1, 0.0));
        dp[0][0] = 1.0;
        for (size_t i = 0; i < N; ++i) {
            size_t jmax = std::min(n, i + 1);
            for (size_t j = jmax; j >= 1; --j)
                for (long s = max_sum - r2[i]; s >= 0; --s)
                    if (dp[j - 1][static_cast<size_t>(s)] > 0.0)
                        dp[j][static_cast<size_t>(s + r2[i])] += dp[j - 1][static_cast<size_t>(s)];
        }
        double obs_dev = std::fabs(2.0 * u - nm);  // scaled x2 deviation of U from nm/2
        double total = 0.0, extreme = 0.0;
        double n_n1 = static_cast<double>(n) * (n + 1);  // scaled offset, x2 of n(n+1)/2
        for (long s = 0; s <= max_sum; ++s) {
            double cnt = dp[n][static_cast<size_t>(s)];
            if (cnt == 0.0) continue;
            total += cnt;
            double u2 = static_cast<double>(s) - n_n1;  // x2 of U for this arrangement
            if (std::fabs(u2 - nm) >= obs_dev - 1e-9) extreme += cnt;
        }
        res.p_value = std::clamp(extreme / total, 0.0, 1.0);
    } else {
        // normal approximation with tie-variance and continuity corrections
        std::map<double, int> tie_counts;
        for (double v : pooled) ++tie_counts[v];
        double tie_term = 0.0;
        for (const auto& [val, c] : tie_counts) {
            (void)val;
            tie_term += static_cast<double>(c) * (static_cast<double>(c) * c - 1.0);
        }
        double Nd = static_cast<double>(N);
        double var = nm / 12.0 * ((Nd + 1.0) - tie_term / (Nd * (Nd - 1.0)));
        if (var <= 0.0) {
            res.p_value = 1.0;
        } else {
            double z = (std::fabs(u - nm / 2.0) - 0.5) / std::sqrt(var);
            res.p_value = std::clamp(2.0 * normal_sf(std::max(z, 0.0)), 0.0, 1.0);
        }
    }
    return res;
}

std::string cliffs_magnitude(double d) {
    double a = std::fabs(d);
    if (a < 0.10) return "negligible";
    if (a < 0.33) return "small";
    if (a < 0.474) return "medium";
    return "large";
}

TestResult cliffs_delta(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("cliffs_delta: empty sample");
    long gt = 0, lt = 0;
    for (double x : a)
        for (double y : b) {
            if (x > y) ++gt;
            else if (x < y) ++lt;
        }
    TestResult res;
    res.statistic = static_cast<double>(gt - lt) / (static_cast<double>(a.size()) * b.size());
    res.magnitude = cliffs_magnitude(res.statistic);
    return res;
}

std::vector<double> holm_adjust(const std::vector<double>& p_values) {
    size_t m = p_values.size();
    for (double p : p_values)
        if (p < 0.0 || p > 1.0 || !std::isfinite(p))
            throw std::invalid_argument("holm_adjust: p-value out of [0,1]");
    std::vector<size_t> order(m);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t i, size_t j) { return p_values[i] < p_values[j]; });
    std::vector<double> adjusted(m);
    double running = 0.0;
    for (size_t k = 0; k < m; ++k) {
        double adj = static_cast<double>(m - k) * p_values[order[k]];
        running = std::max(running, std::min(adj, 1.0));
        adjusted[order[k]] = running;
    }
    return adjusted;
}

TestResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
    size_t n = x.size();
    if (n < 3) throw std::invalid_argument("spearman: need at least 3 pairs");
    std::vector<double> rx = midranks(x), ry = midranks(y);
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double dx = rx[i] - mx, dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    TestResult res;
    if (sxx == 0.0 || syy == 0.0) {
        res.statistic = 0.0;
        res.p_value = 1.0;
        return res;
    }
    double rho = sxy / std::sqrt(sxx * syy);
    rho = std::clamp(rho, -1.0, 1.0);
    res.statistic = rho;
    if (std::fabs(rho) >= 1.0) {
        res.p_value = 0.0;
    } else {
        double dof = static_cast<double>(n) - 2.0;
        double t = rho * std::sqrt(dof / (1.0 - rho * rho));
        res.p_value = student_t_two_sided(t, dof);
    }
    return res;
}

Descriptive descriptive(const std::vector<double>& sample) {
    if (sample.empty()) throw std::invalid_argument("descriptive: empty sample");
    Descriptive d;
    d.min = *std::min_element(sample.begin(), sample.end());
    d.max = *std::max_element(sample.begin(), sample.end());
    double sum = std::accumulate(sample.begin(), sample.end(), 0.0);
    size_t n = sample.size();
    d.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : sample) ss += (v - d.mean) * (v - d.mean);
    d.stdev = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    std::vector<double> sorted = sample;
    std::sort(sorted.begin(), sorted.end());
    d.median = n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    return d;
}

}  // namespace reline::stats
