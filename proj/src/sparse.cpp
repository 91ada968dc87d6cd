#include "mortar/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mortar {

void SparseSymMatrix::add(int row, int col, double value) {
    if (compressed_)
        throw std::logic_error("SparseSymMatrix: add after compress");
    if (row < 0 || row >= dim_ || col < 0 || col >= dim_)
        throw std::out_of_range("SparseSymMatrix: index out of range");
    triplets_.push_back({row, col, value});
}

void SparseSymMatrix::add_block(const SparseSymMatrix& other, int offset) {
    if (!other.compressed_) {
        for (const Triplet& t : other.triplets_)
            add(t.row + offset, t.col + offset, t.value);
        return;
    }
    for (int r = 0; r < other.dim_; ++r)
        for (int p = other.row_ptr_[static_cast<std::size_t>(r)];
             p < other.row_ptr_[static_cast<std::size_t>(r) + 1]; ++p)
            add(r + offset, other.col_idx_[static_cast<std::size_t>(p)] + offset,
                other.values_[static_cast<std::size_t>(p)]);
}

void SparseSymMatrix::compress() {
    if (compressed_) return;
    std::stable_sort(triplets_.begin(), triplets_.end(), [](const Triplet& a, const Triplet& b) {
        return a.row < b.row || (a.row == b.row && a.col < b.col);
    });
    row_ptr_.assign(static_cast<std::size_t>(dim_) + 1, 0);
    for (std::size_t i = 0; i < triplets_.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < triplets_.size() && triplets_[j].row == triplets_[i].row &&
               triplets_[j].col == triplets_[i].col)
            sum += triplets_[j++].value;
        col_idx_.push_back(triplets_[i].col);
        values_.push_back(sum);
        row_ptr_[static_cast<std::size_t>(triplets_[i].row) + 1] += 1;
        i = j;
    }
    for (int r = 0; r < dim_; ++r)
        row_ptr_[static_cast<std::size_t>(r) + 1] += row_ptr_[static_cast<std::size_t>(r)];
    triplets_.clear();
    triplets_.shrink_to_fit();
    compressed_ = true;
}

double SparseSymMatrix::entry(int row, int col) const {
    if (!compressed_)
        throw std::logic_error("SparseSymMatrix: entry before compress");
    for (int p = row_ptr_[static_cast<std::size_t>(row)];
         p < row_ptr_[static_cast<std::size_t>(row) + 1]; ++p)
        if (col_idx_[static_cast<std::size_t>(p)] == col) return values_[static_cast<std::size_t>(p)];
    return 0.0;
}

std::vector<double> SparseSymMatrix::multiply(const std::vector<double>& x) const {
    if (!compressed_)
        throw std::logic_error("SparseSymMatrix: multiply before compress");
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("SparseSymMatrix: dimension mismatch");
    std::vector<double> y(static_cast<std::size_t>(dim_), 0.0);
    for (int r = 0; r < dim_; ++r) {
        double acc = 0.0;
        for (int p = row_ptr_[static_cast<std::size_t>(r)];
             p < row_ptr_[static_cast<std::size_t>(r) + 1]; ++p)
            acc += values_[static_cast<std::size_t>(p)] * x[static_cast<std::size_t>(col_idx_[static_cast<std::size_t>(p)])];
        y[static_cast<std::size_t>(r)] = acc;
    }
    return y;
}

double SparseSymMatrix::symmetry_defect() const {
    if (!compressed_)
        throw std::logic_error("SparseSymMatrix: symmetry_defect before compress");
    double defect = 0.0;
    for (int r = 0; r < dim_; ++r)
        for (int p = row_ptr_[static_cast<std::size_t>(r)];
             p < row_ptr_[static_cast<std::size_t>(r) + 1]; ++p) {
            const int c = col_idx_[static_cast<std::size_t>(p)];
            defect = std::max(defect, std::abs(values_[static_cast<std::size_t>(p)] - entry(c, r)));
        }
    return defect;
}

} // namespace mortar
