#pragma once

#include <cassert>
#include <vector>

namespace rugose {

/// Cell-centered scalar field on an nx x nz grid with a ghost rim of depth 2.
/// Interior indices are i in [0,nx), k in [0,nz); ghost access uses negative
/// or past-the-end indices. Storage is row-major with k contiguous.
class Field {
 public:
  static constexpr int kGhost = 2;

  Field() = default;
  Field(int nx, int nz, double fill = 0.0)
      : nx_(nx), nz_(nz), stride_(nz + 2 * kGhost),
        data_((nx + 2 * kGhost) * (nz + 2 * kGhost), fill) {}

  int nx() const { return nx_; }
  int nz() const { return nz_; }

  double& operator()(int i, int k) {
    assert(i >= -kGhost && i < nx_ + kGhost && k >= -kGhost && k < nz_ + kGhost);
    return data_[(i + kGhost) * stride_ + (k + kGhost)];
  }
  double operator()(int i, int k) const {
    assert(i >= -kGhost && i < nx_ + kGhost && k >= -kGhost && k < nz_ + kGhost);
    return data_[(i + kGhost) * stride_ + (k + kGhost)];
  }

  void fill(double v) { data_.assign(data_.size(), v); }

  bool same_shape(const Field& o) const { return nx_ == o.nx_ && nz_ == o.nz_; }

 private:
  int nx_ = 0, nz_ = 0, stride_ = 0;
  std::vector<double> data_;
};

}  // namespace rugose
