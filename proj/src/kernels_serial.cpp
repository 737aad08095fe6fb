#include <vector>

#include "zonovol/kernels.hpp"
#include "zonovol/summation.hpp"

namespace zonovol::serial {

namespace {

struct DetRecursion {
    std::span<const GeneratorBlock> blocks;
    int n;
    std::vector<int> chosen_block, chosen_col;
    std::vector<double> buf;
    CompensatedSum sum;

    void visit(std::size_t block, int start, int left) {
        if (block == blocks.size()) {
            for (int c = 0; c < n; ++c) {
                const Mat& g = blocks[chosen_block[c]].generators;
                for (int r = 0; r < n; ++r) buf[r * n + c] = g(r, chosen_col[c]);
            }
            sum += abs_det_inplace(buf.data(), n);
            return;
        }
        if (left == 0) {
            const std::size_t next = block + 1;
            visit(next, 0, next < blocks.size() ? blocks[next].take : 0);
            return;
        }
        const int cols = static_cast<int>(blocks[block].generators.cols());
        const int depth = static_cast<int>(chosen_col.size());
        for (int c = start; c <= cols - left; ++c) {
            chosen_block.push_back(static_cast<int>(block));
            chosen_col.push_back(c);
            visit(block, c + 1, left - 1);
            chosen_block.resize(depth);
            chosen_col.resize(depth);
        }
    }
};

void subsets_rec(const Mat& g, int j, int start, std::vector<int>& cur, std::vector<SubsetVolume>& out) {
    if (static_cast<int>(cur.size()) == j) {
        Mat cols(g.rows(), j);
        for (int i = 0; i < j; ++i) cols.col(i) = g.col(cur[i]);
        out.push_back({cur, parallelepiped_volume(cols)});
        return;
    }
    for (int c = start; c < g.cols(); ++c) {
        cur.push_back(c);
        subsets_rec(g, j, c + 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

double det_tuple_sum(std::span<const GeneratorBlock> blocks) {
    if (blocks.empty()) return 0.0;
    DetRecursion rec{blocks, static_cast<int>(blocks.front().generators.rows()), {}, {}, {}, {}};
    rec.buf.resize(static_cast<std::size_t>(rec.n) * rec.n);
    rec.visit(0, 0, blocks.front().take);
    return rec.sum.value();
}

std::vector<SubsetVolume> subset_volumes(const Mat& generators, int j) {
    std::vector<SubsetVolume> out;
    std::vector<int> cur;
    subsets_rec(generators, j, 0, cur, out);
    return out;
}

double ordered_sum(std::uint64_t count, const std::function<double(std::uint64_t)>& term) {
    CompensatedSum s;
    for (std::uint64_t i = 0; i < count; ++i) s += term(i);
    return s.value();
}

double mixed_radix_sum(std::span<const std::uint64_t> radices,
                       const std::function<double(std::span<const std::uint64_t>)>& term) {
    for (auto r : radices)
        if (r == 0) return 0.0;
    std::vector<std::uint64_t> digits(radices.size(), 0);
    CompensatedSum s;
    while (true) {
        s += term(digits);
        std::size_t pos = digits.size();
        while (pos > 0) {
            --pos;
            if (++digits[pos] < radices[pos]) break;
            digits[pos] = 0;
            if (pos == 0) return s.value();
        }
        if (digits.empty()) return s.value();
    }
}

}  // namespace zonovol::serial
