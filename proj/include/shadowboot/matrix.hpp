#ifndef SHADOWBOOT_MATRIX_HPP_
#define SHADOWBOOT_MATRIX_HPP_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace shadowboot {

/// Row-major real matrix with one label per column.
class LabeledMatrix {
public:
  LabeledMatrix() = default;
  LabeledMatrix(std::size_t rows, std::vector<std::string> labels)
      : rows_(rows), labels_(std::move(labels)),
        values_(rows_ * labels_.size(), 0.0) {}
  LabeledMatrix(std::size_t rows, std::vector<std::string> labels,
                std::vector<double> values)
      : rows_(rows), labels_(std::move(labels)), values_(std::move(values)) {
    if (values_.size() != rows_ * labels_.size()) {
      throw std::invalid_argument("LabeledMatrix: value count mismatch");
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return labels_.size(); }
  const std::vector<std::string> &labels() const { return labels_; }

  double &operator()(std::size_t i, std::size_t j) {
    return values_[i * cols() + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * cols() + j];
  }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * cols(), cols());
  }
  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      out[i] = (*this)(i, j);
    }
    return out;
  }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const LabeledMatrix &,
                         const LabeledMatrix &) = default;

private:
  std::size_t rows_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> values_;
};

} // namespace shadowboot

#endif // SHADOWBOOT_MATRIX_HPP_
