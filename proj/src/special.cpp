#include "zonovol/special.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "zonovol/errors.hpp"

namespace zonovol {

double kappa(int j) {
    if (j < 0) throw ContractViolation("kappa: negative dimension");
    if (j > 300) return std::exp(log_kappa(j));
    return std::pow(std::numbers::pi, 0.5 * j) / std::tgamma(0.5 * j + 1.0);
}

double log_kappa(int j) {
    if (j < 0) throw ContractViolation("kappa: negative dimension");
    return 0.5 * j * std::log(std::numbers::pi) - std::lgamma(0.5 * j + 1.0);
}

KappaTable::KappaTable(int n_max) {
    if (n_max < 0) throw ContractViolation("KappaTable: negative size");
    values_.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int j = 0; j <= n_max; ++j) values_.push_back(kappa(j));
}

double factorial(int n) {
    if (n < 0) throw ContractViolation("factorial: negative argument");
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (n <= 60) {
        double r = 1.0;
        k = std::min(k, n - k);
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return std::round(r);
    }
    return std::exp(log_binomial(n, k));
}

double log_binomial(int n, int k) {
    if (k < 0 || k > n) throw ContractViolation("log_binomial: k out of range");
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double multinomial(int n, std::span<const int> parts) {
    int sum = 0;
    for (int p : parts) {
        if (p < 0) throw ContractViolation("multinomial: negative part");
        sum += p;
    }
    if (sum != n)
        throw ContractViolation("multinomial: parts sum to " + std::to_string(sum) + ", expected " + std::to_string(n));
    double r = 1.0;
    int used = 0;
    for (int p : parts) {
        used += p;
        r *= binomial(used, p);
    }
    return r;
}

}  // namespace zonovol
