#include "flexlex/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "flexlex/error.hpp"
#include "flexlex/random.hpp"

namespace flexlex::stats {
namespace {

// Lentz's method for the continued fraction of I_x(a, b); valid for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

double variance_sum(std::span<const double> v, double m) {
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s;
}

TestResult finish(double t, double df) {
    TestResult r;
    r.statistic = t;
    r.degrees_of_freedom = df;
    r.p_value = student_t_two_tailed(t, df);
    r.stars = stars_for(r.p_value);
    return r;
}

TestResult null_result(double df) {
    TestResult r;
    r.degrees_of_freedom = df;
    return r;
}

}  // namespace

Stars stars_for(double p) {
    if (p < 0.001) return Stars::Three;
    if (p < 0.01) return Stars::Two;
    if (p < 0.05) return Stars::One;
    return Stars::None;
}

std::string_view to_string(Stars s) {
    switch (s) {
        case Stars::Three: return "***";
        case Stars::Two: return "**";
        case Stars::One: return "*";
        case Stars::None: return "";
    }
    return "";
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DegenerateInputError("incomplete beta needs a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double df) {
    if (std::isinf(t)) return 0.0;
    if (t == 0.0) return 1.0;
    const double x = df / (df + t * t);
    return std::clamp(incomplete_beta(0.5 * df, 0.5, x), 0.0, 1.0);
}

double mean(std::span<const double> values) {
    double s = 0.0;
    for (double v : values) s += v;
    return values.empty() ? std::numeric_limits<double>::quiet_NaN() : s / static_cast<double>(values.size());
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

TestResult spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DegenerateInputError("spearman: inputs differ in length");
    if (a.size() < 3) throw DegenerateInputError("spearman: need at least 3 observations");
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const double ma = mean(ra);
    const double mb = mean(rb);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) throw DegenerateInputError("spearman: constant input has no rank variance");
    const double rho = std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
    const double df = static_cast<double>(a.size()) - 2.0;
    TestResult r;
    r.statistic = rho;
    r.degrees_of_freedom = df;
    if (std::fabs(rho) >= 1.0) {
        r.p_value = 0.0;
    } else {
        const double t = rho * std::sqrt(df / (1.0 - rho * rho));
        r.p_value = student_t_two_tailed(t, df);
    }
    r.stars = stars_for(r.p_value);
    return r;
}

TestResult unpaired_t(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw DegenerateInputError("unpaired t-test: each sample needs at least 2 values");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = mean(a);
    const double mb = mean(b);
    const double df = na + nb - 2.0;
    const double pooled = (variance_sum(a, ma) + variance_sum(b, mb)) / df;
    if (pooled == 0.0) {
        if (ma == mb) return null_result(df);
        throw DegenerateInputError("unpaired t-test: zero variance with unequal means");
    }
    const double t = (ma - mb) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    return finish(t, df);
}

TestResult paired_t(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DegenerateInputError("paired t-test: samples differ in length");
    if (x.size() < 2) throw DegenerateInputError("paired t-test: need at least 2 pairs");
    std::vector<double> diff(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - y[i];
    const double n = static_cast<double>(diff.size());
    const double m = mean(diff);
    const double ss = variance_sum(diff, m);
    const double df = n - 1.0;
    if (ss == 0.0) {
        if (m == 0.0) return null_result(df);
        throw DegenerateInputError("paired t-test: constant nonzero differences");
    }
    const double t = m / std::sqrt(ss / df / n);
    return finish(t, df);
}

TestResult paired_t(std::span<const std::pair<double, double>> pairs) {
    std::vector<double> x;
    std::vector<double> y;
    x.reserve(pairs.size());
    y.reserve(pairs.size());
    for (const auto& [a, b] : pairs) {
        x.push_back(a);
        y.push_back(b);
    }
    return paired_t(x, y);
}

// ---------------------------------------------------------------------------
// PCA

namespace {

using Column = std::vector<double>;

double dot(const Column& a, const Column& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Cyclic Jacobi on a small symmetric matrix. Returns eigenvalues descending, eigenvectors in columns.
void symmetric_eigen(std::vector<std::vector<double>> a, std::vector<double>& values,
                     std::vector<std::vector<double>>& vectors) {
    const std::size_t k = a.size();
    std::vector<std::vector<double>> v(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) v[i][i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                total += a[i][j] * a[i][j];
                if (i != j) off += a[i][j] * a[i][j];
            }
        if (off <= 1e-30 * total || off == 0.0) break;
        for (std::size_t p = 0; p < k; ++p) {
            for (std::size_t q = p + 1; q < k; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t r = 0; r < k; ++r) {
                    const double arp = a[r][p];
                    const double arq = a[r][q];
                    a[r][p] = c * arp - s * arq;
                    a[r][q] = s * arp + c * arq;
                }
                for (std::size_t r = 0; r < k; ++r) {
                    const double apr = a[p][r];
                    const double aqr = a[q][r];
                    a[p][r] = c * apr - s * aqr;
                    a[q][r] = s * apr + c * aqr;
                }
                for (std::size_t r = 0; r < k; ++r) {
                    const double vrp = v[r][p];
                    const double vrq = v[r][q];
                    v[r][p] = c * vrp - s * vrq;
                    v[r][q] = s * vrp + c * vrq;
                }
            }
        }
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i][i] > a[j][j]; });
    values.assign(k, 0.0);
    vectors.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t c = 0; c < k; ++c) {
        values[c] = a[order[c]][order[c]];
        for (std::size_t r = 0; r < k; ++r) vectors[r][c] = v[r][order[c]];
    }
}

class CenteredData {
public:
    explicit CenteredData(const std::vector<std::vector<double>>& rows)
        : n_(rows.size()), d_(rows.front().size()), mean_(d_, 0.0), x_(rows) {
        for (const auto& r : rows)
            for (std::size_t j = 0; j < d_; ++j) mean_[j] += r[j];
        for (double& m : mean_) m /= static_cast<double>(n_);
        for (auto& r : x_)
            for (std::size_t j = 0; j < d_; ++j) r[j] -= mean_[j];
    }

    std::size_t rows() const { return n_; }
    std::size_t dims() const { return d_; }
    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& row(std::size_t i) const { return x_[i]; }

    // Covariance (n - 1 denominator) applied to v, as X^T (X v) / (n - 1).
    Column apply(const Column& v) const {
        Column out(d_, 0.0);
        for (const auto& r : x_) {
            double s = 0.0;
            for (std::size_t j = 0; j < d_; ++j) s += r[j] * v[j];
            for (std::size_t j = 0; j < d_; ++j) out[j] += s * r[j];
        }
        const double scale = 1.0 / static_cast<double>(n_ - 1);
        for (double& o : out) o *= scale;
        return out;
    }

    double total_variance() const {
        double s = 0.0;
        for (const auto& r : x_)
            for (double v : r) s += v * v;
        return s / static_cast<double>(n_ - 1);
    }

private:
    std::size_t n_;
    std::size_t d_;
    std::vector<double> mean_;
    std::vector<std::vector<double>> x_;
};

// Modified Gram-Schmidt; a column that collapses is replaced by the next unused unit vector.
void orthonormalize(std::vector<Column>& q) {
    const std::size_t d = q.front().size();
    std::size_t next_unit = 0;
    for (std::size_t c = 0; c < q.size(); ++c) {
        for (int attempt = 0; attempt <= static_cast<int>(d); ++attempt) {
            const double before = std::sqrt(dot(q[c], q[c]));
            for (std::size_t p = 0; p < c; ++p) {
                const double proj = dot(q[p], q[c]);
                for (std::size_t j = 0; j < d; ++j) q[c][j] -= proj * q[p][j];
            }
            const double norm = std::sqrt(dot(q[c], q[c]));
            if (norm > 1e-10 * std::max(before, 1e-300) && norm > 1e-300) {
                for (double& x : q[c]) x /= norm;
                break;
            }
            q[c].assign(d, 0.0);
            q[c][next_unit++ % d] = 1.0;
        }
    }
}

void fix_sign(Column& axis) {
    for (double c : axis) {
        if (std::fabs(c) > 1e-12) {
            if (c < 0)
                for (double& x : axis) x = -x;
            return;
        }
    }
}

}  // namespace

Projection2D pca2(const std::vector<std::vector<double>>& rows, double tolerance) {
    if (rows.size() < 3) throw DegenerateInputError("pca2: need at least 3 vectors");
    const std::size_t d = rows.front().size();
    if (d < 2) throw DegenerateInputError("pca2: need dimension at least 2");
    for (const auto& r : rows)
        if (r.size() != d) throw DegenerateInputError("pca2: vectors differ in dimension");

    const CenteredData data(rows);
    const std::size_t n = data.rows();
    Projection2D out;
    out.mean = data.mean();
    out.points.assign(n, {0.0, 0.0});
    out.axes = {Column(d, 0.0), Column(d, 0.0)};

    const double total = data.total_variance();
    if (total == 0.0) {
        out.diagnostic = "all points identical; both axes are zero";
        return out;
    }

    const std::size_t block = std::min<std::size_t>(d, 8);
    rng::Engine eng(0x5EEDull);
    std::vector<Column> q(block, Column(d));
    for (auto& col : q)
        for (double& x : col) x = rng::uniform01(eng) - 0.5;
    orthonormalize(q);

    std::vector<double> values;
    std::vector<std::vector<double>> ritz;
    for (int iter = 0; iter < 20000; ++iter) {
        std::vector<Column> z(block);
        for (std::size_t c = 0; c < block; ++c) z[c] = data.apply(q[c]);
        orthonormalize(z);
        // Rayleigh-Ritz on span(z).
        std::vector<Column> cz(block);
        for (std::size_t c = 0; c < block; ++c) cz[c] = data.apply(z[c]);
        std::vector<std::vector<double>> t(block, std::vector<double>(block));
        for (std::size_t i = 0; i < block; ++i)
            for (std::size_t j = 0; j < block; ++j) t[i][j] = 0.5 * (dot(z[i], cz[j]) + dot(z[j], cz[i]));
        symmetric_eigen(t, values, ritz);
        for (std::size_t c = 0; c < block; ++c) {
            q[c].assign(d, 0.0);
            for (std::size_t k = 0; k < block; ++k)
                for (std::size_t j = 0; j < d; ++j) q[c][j] += ritz[k][c] * z[k][j];
        }
        if (block == d) break;  // the block spans the whole space
        bool converged = true;
        const double scale = std::max(values[0], 1e-300);
        for (std::size_t c = 0; c < 2; ++c) {
            const Column cq = data.apply(q[c]);
            double res = 0.0;
            for (std::size_t j = 0; j < d; ++j) res += (cq[j] - values[c] * q[c][j]) * (cq[j] - values[c] * q[c][j]);
            if (std::sqrt(res) > tolerance * scale) converged = false;
        }
        if (converged) break;
    }

    const std::size_t kept = values[1] > 1e-12 * values[0] ? 2 : 1;
    if (kept < 2) out.diagnostic = "rank-deficient data: second principal axis is zero";
    for (std::size_t c = 0; c < kept; ++c) {
        Column axis = q[c];
        const double norm = std::sqrt(dot(axis, axis));
        for (double& x : axis) x /= norm;
        fix_sign(axis);
        out.axes[c] = axis;
        out.explained_variance[c] = std::max(values[c], 0.0);
        for (std::size_t i = 0; i < n; ++i) out.points[i][c] = dot(data.row(i), axis);
    }
    return out;
}

}  // namespace flexlex::stats
