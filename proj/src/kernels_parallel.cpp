#include <algorithm>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>

#include "zonovol/errors.hpp"
#include "zonovol/kernels.hpp"
#include "zonovol/summation.hpp"

namespace zonovol {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > kSaturated / b) return kSaturated;
    return a * b;
}

// Collects the first exception thrown inside a parallel region.
class ErrorSlot {
public:
    template <class F>
    void run(F&& f) noexcept {
        try {
            f();
        } catch (...) {
            std::lock_guard<std::mutex> lock(mu_);
            if (!error_) error_ = std::current_exception();
        }
    }
    void rethrow() const {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::mutex mu_;
    std::exception_ptr error_;
};

// Lexicographic unranking of a k-subset of {0..n-1}.
void unrank_combination(std::uint64_t rank, int n, int k, int* out) {
    int c = 0;
    for (int p = 0; p < k; ++p) {
        while (true) {
            const std::uint64_t below = binomial_count(n - c - 1, k - p - 1);
            if (rank < below) break;
            rank -= below;
            ++c;
        }
        out[p] = c++;
    }
}

// Advance to the lexicographic successor; false on wrap-around (resets to the first subset).
bool next_combination(int n, int k, int* a) {
    int p = k - 1;
    while (p >= 0 && a[p] == n - k + p) --p;
    if (p < 0) {
        for (int i = 0; i < k; ++i) a[i] = i;
        return false;
    }
    ++a[p];
    for (int i = p + 1; i < k; ++i) a[i] = a[i - 1] + 1;
    return true;
}

void check_budget(std::uint64_t count, std::uint64_t budget, const char* what) {
    if (count > budget)
        throw BudgetExceeded(std::string(what) + ": " +
                             (count == kSaturated ? std::string("> 1.8e19") : std::to_string(count)) +
                             " tuples exceed the budget of " + std::to_string(budget));
}

double reduce_chunks(const std::vector<double>& partial) {
    CompensatedSum total;
    for (double p : partial) total += p;
    return total.value();
}

}  // namespace

std::uint64_t binomial_count(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // r * (n - k + i) / i stays exact because r * (n-k+i) is divisible by i.
        const std::uint64_t f = static_cast<std::uint64_t>(n - k + i);
        if (r > kSaturated / f) return kSaturated;
        r = r * f / static_cast<std::uint64_t>(i);
    }
    return r;
}

std::uint64_t saturating_product(std::span<const std::uint64_t> factors) {
    std::uint64_t r = 1;
    for (auto f : factors) r = sat_mul(r, f);
    return r;
}

std::uint64_t subset_tuple_count(std::span<const GeneratorBlock> blocks) {
    std::uint64_t r = 1;
    for (const auto& b : blocks) r = sat_mul(r, binomial_count(static_cast<int>(b.generators.cols()), b.take));
    return r;
}

double det_tuple_sum(std::span<const GeneratorBlock> blocks, Exec exec, std::uint64_t budget) {
    if (blocks.empty()) return 0.0;
    const int n = static_cast<int>(blocks.front().generators.rows());
    int total_take = 0;
    for (const auto& b : blocks) {
        if (b.generators.rows() != n) throw ContractViolation("det_tuple_sum: dimension mismatch");
        if (b.take < 1) throw ContractViolation("det_tuple_sum: take must be >= 1");
        total_take += b.take;
    }
    if (total_take != n) throw ContractViolation("det_tuple_sum: takes must sum to the dimension");
    const std::uint64_t count = subset_tuple_count(blocks);
    check_budget(count, budget, "mixed volume enumeration");
    if (count == 0) return 0.0;
    if (exec == Exec::serial) return serial::det_tuple_sum(blocks);

    const std::size_t m = blocks.size();
    std::vector<std::uint64_t> block_counts(m);
    for (std::size_t b = 0; b < m; ++b)
        block_counts[b] = binomial_count(static_cast<int>(blocks[b].generators.cols()), blocks[b].take);
    std::vector<int> offsets(m + 1, 0);
    for (std::size_t b = 0; b < m; ++b) offsets[b + 1] = offsets[b] + blocks[b].take;

    const std::uint64_t chunks = (count + kChunkSize - 1) / kChunkSize;
    std::vector<double> partial(chunks, 0.0);
    ErrorSlot errors;
#pragma omp parallel
    {
        std::vector<int> idx(n);
        std::vector<double> buf(static_cast<std::size_t>(n) * n);
#pragma omp for schedule(dynamic)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
            errors.run([&] {
                const std::uint64_t first = static_cast<std::uint64_t>(c) * kChunkSize;
                const std::uint64_t last = std::min(count, first + kChunkSize);
                // Last block varies fastest, matching the serial recursion order.
                std::uint64_t rank = first;
                for (std::size_t b = m; b-- > 0;) {
                    const int cols = static_cast<int>(blocks[b].generators.cols());
                    unrank_combination(rank % block_counts[b], cols, blocks[b].take, idx.data() + offsets[b]);
                    rank /= block_counts[b];
                }
                CompensatedSum s;
                for (std::uint64_t t = first; t < last; ++t) {
                    for (std::size_t b = 0; b < m; ++b) {
                        const Mat& g = blocks[b].generators;
                        for (int k = offsets[b]; k < offsets[b + 1]; ++k)
                            for (int r = 0; r < n; ++r) buf[r * n + k] = g(r, idx[k]);
                    }
                    s += abs_det_inplace(buf.data(), n);
                    for (std::size_t b = m; b-- > 0;) {
                        const int cols = static_cast<int>(blocks[b].generators.cols());
                        if (next_combination(cols, blocks[b].take, idx.data() + offsets[b])) break;
                    }
                }
                partial[static_cast<std::size_t>(c)] = s.value();
            });
        }
    }
    errors.rethrow();
    return reduce_chunks(partial);
}

std::vector<SubsetVolume> subset_volumes(const Mat& generators, int j, Exec exec, std::uint64_t budget) {
    const int cols = static_cast<int>(generators.cols());
    if (j < 1 || j > generators.rows()) throw ContractViolation("subset_volumes: need 1 <= j <= n");
    const std::uint64_t count = binomial_count(cols, j);
    check_budget(count, budget, "subset enumeration");
    if (exec == Exec::serial) return serial::subset_volumes(generators, j);
    std::vector<SubsetVolume> out(count);
    ErrorSlot errors;
#pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(count); ++t) {
        errors.run([&] {
            auto& sv = out[static_cast<std::size_t>(t)];
            sv.indices.resize(j);
            unrank_combination(static_cast<std::uint64_t>(t), cols, j, sv.indices.data());
            Mat m(generators.rows(), j);
            for (int i = 0; i < j; ++i) m.col(i) = generators.col(sv.indices[i]);
            sv.volume = parallelepiped_volume(m);
        });
    }
    errors.rethrow();
    return out;
}

double ordered_sum(std::uint64_t count, const std::function<double(std::uint64_t)>& term, Exec exec) {
    if (exec == Exec::serial) return serial::ordered_sum(count, term);
    const std::uint64_t chunks = (count + kChunkSize - 1) / kChunkSize;
    std::vector<double> partial(chunks, 0.0);
    ErrorSlot errors;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
        errors.run([&] {
            const std::uint64_t first = static_cast<std::uint64_t>(c) * kChunkSize;
            const std::uint64_t last = std::min(count, first + kChunkSize);
            CompensatedSum s;
            for (std::uint64_t i = first; i < last; ++i) s += term(i);
            partial[static_cast<std::size_t>(c)] = s.value();
        });
    }
    errors.rethrow();
    return reduce_chunks(partial);
}

double mixed_radix_sum(std::span<const std::uint64_t> radices,
                       const std::function<double(std::span<const std::uint64_t>)>& term, Exec exec,
                       std::uint64_t budget) {
    const std::uint64_t count = saturating_product(radices);
    check_budget(count, budget, "tuple enumeration");
    if (count == 0) return 0.0;
    if (exec == Exec::serial) return serial::mixed_radix_sum(radices, term);
    const std::vector<std::uint64_t> rad(radices.begin(), radices.end());
    return ordered_sum(
        count,
        [&](std::uint64_t index) {
            std::vector<std::uint64_t> digits(rad.size());
            for (std::size_t p = rad.size(); p-- > 0;) {
                digits[p] = index % rad[p];
                index /= rad[p];
            }
            return term(digits);
        },
        Exec::parallel);
}

std::vector<double> evaluate_indexed(std::uint64_t count, const std::function<double(std::uint64_t)>& f, Exec exec) {
    std::vector<double> values(count);
    if (exec == Exec::serial) {
        for (std::uint64_t i = 0; i < count; ++i) values[i] = f(i);
        return values;
    }
    ErrorSlot errors;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
        errors.run([&] { values[static_cast<std::size_t>(i)] = f(static_cast<std::uint64_t>(i)); });
    errors.rethrow();
    return values;
}

}  // namespace zonovol
