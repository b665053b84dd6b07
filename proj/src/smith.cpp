#include "equichow/smith.hpp"

#include <algorithm>
#include <utility>

namespace equichow {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
    std::size_t r = rows.size(), c = rows.empty() ? 0 : rows.front().size();
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw InvalidInput("ragged matrix");
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::from_columns(std::size_t rows, const std::vector<std::vector<Integer>>& cols) {
    IntMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows) throw InvalidInput("column length mismatch");
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
}

std::vector<Integer> IntMatrix::column(std::size_t c) const {
    std::vector<Integer> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
    return v;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool IntMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw InvalidInput("matrix shape mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Integer& x = a(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
        }
    return c;
}

std::vector<Integer> operator*(const IntMatrix& a, const std::vector<Integer>& x) {
    if (a.cols_ != x.size()) throw InvalidInput("matrix/vector shape mismatch");
    std::vector<Integer> y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k)
            if (x[k] != 0) y[i] += a(i, k) * x[k];
    return y;
}

Integer determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw InvalidInput("determinant of non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                a(i, j) /= prev;  // exact by Sylvester's identity
            }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

namespace {

struct Reducer {
    IntMatrix d, u, uinv, v;
    std::size_t m, n;

    explicit Reducer(const IntMatrix& input)
        : d(input),
          u(IntMatrix::identity(input.rows())),
          uinv(IntMatrix::identity(input.rows())),
          v(IntMatrix::identity(input.cols())),
          m(input.rows()),
          n(input.cols()) {}

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < n; ++j) std::swap(d(a, j), d(b, j));
        for (std::size_t j = 0; j < m; ++j) std::swap(u(a, j), u(b, j));
        for (std::size_t i = 0; i < m; ++i) std::swap(uinv(i, a), uinv(i, b));
    }

    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < m; ++i) std::swap(d(i, a), d(i, b));
        for (std::size_t i = 0; i < n; ++i) std::swap(v(i, a), v(i, b));
    }

    // row[target] += q * row[source]
    void add_row(std::size_t target, std::size_t source, const Integer& q) {
        if (q == 0) return;
        for (std::size_t j = 0; j < n; ++j)
            if (d(source, j) != 0) d(target, j) += q * d(source, j);
        for (std::size_t j = 0; j < m; ++j)
            if (u(source, j) != 0) u(target, j) += q * u(source, j);
        for (std::size_t i = 0; i < m; ++i)
            if (uinv(i, target) != 0) uinv(i, source) -= q * uinv(i, target);
    }

    // col[target] += q * col[source]
    void add_col(std::size_t target, std::size_t source, const Integer& q) {
        if (q == 0) return;
        for (std::size_t i = 0; i < m; ++i)
            if (d(i, source) != 0) d(i, target) += q * d(i, source);
        for (std::size_t i = 0; i < n; ++i)
            if (v(i, source) != 0) v(i, target) += q * v(i, source);
    }

    void negate_row(std::size_t r) {
        for (std::size_t j = 0; j < n; ++j) d(r, j) = -d(r, j);
        for (std::size_t j = 0; j < m; ++j) u(r, j) = -u(r, j);
        for (std::size_t i = 0; i < m; ++i) uinv(i, r) = -uinv(i, r);
    }

    bool pivot_min(std::size_t t) {
        bool found = false;
        std::size_t bi = t, bj = t;
        Integer best;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j) {
                if (d(i, j) == 0) continue;
                if (!found || abs(d(i, j)) < best) {
                    best = abs(d(i, j));
                    bi = i;
                    bj = j;
                    found = true;
                }
            }
        if (!found) return false;
        swap_rows(t, bi);
        swap_cols(t, bj);
        return true;
    }

    void run() {
        const std::size_t lim = std::min(m, n);
        for (std::size_t t = 0; t < lim; ++t) {
            if (!pivot_min(t)) break;
            for (;;) {
                bool clean = true;
                for (std::size_t i = t + 1; i < m; ++i) {
                    if (d(i, t) == 0) continue;
                    Integer q;
                    mpz_fdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
                    add_row(i, t, -q);
                    if (d(i, t) != 0) clean = false;
                }
                for (std::size_t j = t + 1; j < n; ++j) {
                    if (d(t, j) == 0) continue;
                    Integer q;
                    mpz_fdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
                    add_col(j, t, -q);
                    if (d(t, j) != 0) clean = false;
                }
                if (!clean) {
                    // smallest remainder in row/column t becomes the new pivot
                    std::size_t bi = t, bj = t;
                    Integer best = abs(d(t, t));
                    for (std::size_t i = t + 1; i < m; ++i)
                        if (d(i, t) != 0 && abs(d(i, t)) < best) {
                            best = abs(d(i, t));
                            bi = i;
                            bj = t;
                        }
                    for (std::size_t j = t + 1; j < n; ++j)
                        if (d(t, j) != 0 && abs(d(t, j)) < best) {
                            best = abs(d(t, j));
                            bi = t;
                            bj = j;
                        }
                    swap_rows(t, bi);
                    swap_cols(t, bj);
                    continue;
                }
                // divisibility condition on the trailing block
                bool fixed = false;
                for (std::size_t i = t + 1; i < m && !fixed; ++i)
                    for (std::size_t j = t + 1; j < n; ++j)
                        if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
                            add_row(t, i, 1);
                            fixed = true;
                            break;
                        }
                if (!fixed) break;
            }
            if (d(t, t) < 0) negate_row(t);
        }
    }
};

SmithDecomposition decompose(const IntMatrix& input, IntMatrix* left_inverse) {
    Reducer r(input);
    r.run();
    SmithDecomposition s;
    for (std::size_t i = 0; i < std::min(r.m, r.n); ++i)
        if (r.d(i, i) != 0) s.factors.push_back(r.d(i, i));
    s.diagonal = std::move(r.d);
    s.left = std::move(r.u);
    s.right = std::move(r.v);
    if (left_inverse) *left_inverse = std::move(r.uinv);
    return s;
}

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& m) { return decompose(m, nullptr); }

LatticeSolver::LatticeSolver(const IntMatrix& a)
    : rows_(a.rows()), cols_(a.cols()), snf_(smith_normal_form(a)) {}

std::optional<std::vector<Integer>> LatticeSolver::solve(const std::vector<Integer>& b) const {
    if (b.size() != rows_) throw InvalidInput("solve: rhs length mismatch");
    if (cols_ == 0) {
        for (const auto& x : b)
            if (x != 0) return std::nullopt;
        return std::vector<Integer>{};
    }
    std::vector<Integer> ub = snf_.left * b;
    std::vector<Integer> y(cols_);
    const std::size_t r = snf_.rank();
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i < r) {
            if (!mpz_divisible_p(ub[i].get_mpz_t(), snf_.factors[i].get_mpz_t())) return std::nullopt;
            y[i] = ub[i] / snf_.factors[i];
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    return snf_.right * y;
}

std::optional<std::vector<Integer>> solve_integer(const IntMatrix& a, const std::vector<Integer>& b) {
    return LatticeSolver(a).solve(b);
}

IntMatrix kernel_basis(const IntMatrix& a) {
    SmithDecomposition s = smith_normal_form(a);
    const std::size_t r = s.rank();
    IntMatrix k(a.cols(), a.cols() - r);
    for (std::size_t j = r; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.cols(); ++i) k(i, j - r) = s.right(i, j);
    return k;
}

IntMatrix column_lattice_basis(const IntMatrix& g) {
    IntMatrix uinv;
    SmithDecomposition s = decompose(g, &uinv);
    const std::size_t r = s.rank();
    IntMatrix basis(g.rows(), r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < g.rows(); ++i) basis(i, j) = uinv(i, j) * s.factors[j];
    return basis;
}

GroupInvariants quotient_invariants(std::size_t ambient, const IntMatrix& relations) {
    GroupInvariants inv;
    if (relations.cols() == 0 || ambient == 0) {
        inv.free_rank = ambient;
        return inv;
    }
    if (relations.rows() != ambient) throw InvalidInput("relation matrix has wrong row count");
    SmithDecomposition s = smith_normal_form(relations);
    inv.free_rank = ambient - s.rank();
    for (const auto& f : s.factors)
        if (f != 1) inv.torsion.push_back(f);
    return inv;
}

}  // namespace equichow
