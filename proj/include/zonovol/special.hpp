#pragma once

#include <span>
#include <vector>

namespace zonovol {

// Volume of the j-dimensional unit ball, pi^{j/2} / Gamma(j/2 + 1).
double kappa(int j);
double log_kappa(int j);

class KappaTable {
public:
    explicit KappaTable(int n_max);
    double operator[](int j) const { return values_.at(static_cast<std::size_t>(j)); }
    int n_max() const noexcept { return static_cast<int>(values_.size()) - 1; }

private:
    std::vector<double> values_;
};

double binomial(int n, int k);
double log_binomial(int n, int k);
// n! / (parts[0]! ... parts[m-1]!); the parts must sum to n.
double multinomial(int n, std::span<const int> parts);
double factorial(int n);

}  // namespace zonovol
