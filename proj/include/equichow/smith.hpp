#pragma once

#include <optional>
#include <vector>

#include "equichow/poly.hpp"

namespace equichow {

// Dense integer matrix, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);
    // Columns given as vectors of equal length `rows`.
    static IntMatrix from_columns(std::size_t rows, const std::vector<std::vector<Integer>>& cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<Integer> column(std::size_t c) const;
    IntMatrix transpose() const;
    bool is_zero() const;

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend std::vector<Integer> operator*(const IntMatrix& a, const std::vector<Integer>& x);
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Integer> data_;
};

Integer determinant(const IntMatrix& m);  // Bareiss, square only

struct SmithDecomposition {
    IntMatrix diagonal;            // D = left * input * right
    IntMatrix left;                // unimodular, rows x rows
    IntMatrix right;               // unimodular, cols x cols
    std::vector<Integer> factors;  // nonzero diagonal entries d1 | d2 | ...
    std::size_t rank() const { return factors.size(); }
};

SmithDecomposition smith_normal_form(const IntMatrix& m);

// Integer solution x of a*x = b, or nullopt.
std::optional<std::vector<Integer>> solve_integer(const IntMatrix& a, const std::vector<Integer>& b);

// Factors `a` once and then answers many solve queries against it.
class LatticeSolver {
public:
    explicit LatticeSolver(const IntMatrix& a);
    std::optional<std::vector<Integer>> solve(const std::vector<Integer>& b) const;
    bool contains(const std::vector<Integer>& b) const { return solve(b).has_value(); }

private:
    std::size_t rows_, cols_;
    SmithDecomposition snf_;
};

// Columns form a basis of {x : a*x = 0}.
IntMatrix kernel_basis(const IntMatrix& a);

// Columns form a basis of the lattice spanned by the columns of g.
IntMatrix column_lattice_basis(const IntMatrix& g);

// Abelian group Z^n / (column span of relations).
struct GroupInvariants {
    std::size_t free_rank = 0;
    std::vector<Integer> torsion;  // invariant factors > 1
    friend bool operator==(const GroupInvariants&, const GroupInvariants&) = default;
};

GroupInvariants quotient_invariants(std::size_t ambient, const IntMatrix& relations);

}  // namespace equichow
