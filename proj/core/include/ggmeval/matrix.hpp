#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ggmeval {

// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static DenseMatrix from_rows(
      const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void set_zero();
  bool all_finite() const;

  DenseMatrix transpose() const;

  // Selects rows by index, in the given order.
  DenseMatrix gather_rows(std::span<const std::size_t> indices) const;

  DenseMatrix& operator+=(const DenseMatrix& other);

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// a * b.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// transpose(a) * b.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
// a * transpose(b).
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
double euclidean_distance(std::span<const double> a,
                          std::span<const double> b);

}  // namespace ggmeval
