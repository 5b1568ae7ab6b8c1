#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace flexlex::stats {

enum class Stars { None, One, Two, Three };

// *** p < 0.001, ** p < 0.01, * p < 0.05. No multiple-comparison correction.
Stars stars_for(double p_value);
std::string_view to_string(Stars s);

struct TestResult {
    double statistic = 0.0;  // t, or rho for spearman
    double degrees_of_freedom = 0.0;
    double p_value = 1.0;
    Stars stars = Stars::None;
};

// Regularized incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);

// Two-tailed p-value of Student's t with `df` degrees of freedom.
double student_t_two_tailed(double t, double df);

// Tied values share their average 1-based rank.
std::vector<double> average_ranks(std::span<const double> values);

double mean(std::span<const double> values);

// Pearson correlation of average ranks. The p-value uses the t approximation with n - 2
// degrees of freedom; |rho| = 1 gives p = 0.
TestResult spearman(std::span<const double> a, std::span<const double> b);

// Student's pooled-variance t-test, two-tailed.
TestResult unpaired_t(std::span<const double> a, std::span<const double> b);

// One-sample t on the differences x - y, two-tailed.
TestResult paired_t(std::span<const double> x, std::span<const double> y);
TestResult paired_t(std::span<const std::pair<double, double>> pairs);

struct Projection2D {
    std::vector<std::array<double, 2>> points;
    std::vector<std::string> class_labels;  // parallel to points when filled in by the caller
    std::array<double, 2> explained_variance{0.0, 0.0};
    std::array<std::vector<double>, 2> axes;  // unit principal directions (zeros when absent)
    std::vector<double> mean;
    std::string diagnostic;  // non-empty when the second axis is rank-deficient
};

// Projects centred rows onto the two leading covariance eigenvectors. Uses block subspace
// iteration from a fixed start; each axis is signed so its first nonzero component is positive.
Projection2D pca2(const std::vector<std::vector<double>>& rows, double tolerance = 1e-10);

}  // namespace flexlex::stats
