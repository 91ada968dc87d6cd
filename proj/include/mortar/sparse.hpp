#pragma once

#include <vector>

namespace mortar {

// Symmetric sparse matrix assembled from triplets and compressed to CSR.
// Both triangles are stored; assembly routines add symmetric local blocks.
// Compression is deterministic: stable sort by (row, col), duplicates summed
// in insertion order.
class SparseSymMatrix {
public:
    SparseSymMatrix() = default;
    explicit SparseSymMatrix(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    bool compressed() const { return compressed_; }

    void add(int row, int col, double value);
    void add_block(const SparseSymMatrix& other, int offset);
    void compress();

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }

    // Entry lookup (0 if absent) and y = A x; both require compress().
    double entry(int row, int col) const;
    std::vector<double> multiply(const std::vector<double>& x) const;

    // max |A - A^T| over the stored pattern; requires compress().
    double symmetry_defect() const;

private:
    struct Triplet {
        int row, col;
        double value;
    };

    int dim_ = 0;
    bool compressed_ = false;
    std::vector<Triplet> triplets_;
    std::vector<int> row_ptr_, col_idx_;
    std::vector<double> values_;
};

} // namespace mortar
