#pragma once

#include "tau2loop/loop_algebra.hpp"

#include <cstdint>
#include <stdexcept>

namespace tau2 {

/// Raised when the checked int64 kernel overflows; callers rerun the same
/// computation instantiated over arbitrary-precision integers.
struct KernelOverflow : std::runtime_error {
  KernelOverflow() : std::runtime_error("sector kernel: int64 overflow") {}
};

namespace kernel {

inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw KernelOverflow{};
  return r;
}
inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw KernelOverflow{};
  return r;
}
inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw KernelOverflow{};
  return r;
}
inline BigInt add(const BigInt& a, const BigInt& b) { return a + b; }
inline BigInt sub(const BigInt& a, const BigInt& b) { return a - b; }
inline BigInt mul(const BigInt& a, const BigInt& b) { return a * b; }

} // namespace kernel

/// Reduction data for Z[omega] with int coefficients on the power basis:
/// rows for x^{phi+j} mod Phi_N, j = 0..phi-2 (integral, Phi_N is monic).
struct KernelContext {
  long n = 0;
  long phi = 0;
  std::vector<std::vector<std::int64_t>> red_rows;

  explicit KernelContext(const CycloContext& ctx);
};

/// Column-major sparse matrix over Z[omega] scaled by an integer denominator:
/// the stored matrix equals `scale` times the exact rational operator.
template <class I>
struct KernelMatrix {
  Rank dim = 0;
  long phi = 0;
  BigInt scale = 1;
  std::vector<std::int64_t> col_ptr; // dim + 1
  std::vector<std::int32_t> row_idx; // nnz
  std::vector<I> vals;               // nnz * phi, coefficient-major per entry

  std::size_t nnz() const { return row_idx.size(); }
};

template <class I>
class KernelSpace {
 public:
  KernelSpace(const KernelContext& kc, Rank dim) : kc_(kc), dim_(dim) {}

  Rank dim() const { return dim_; }
  long phi() const { return kc_.phi; }

  using Vec = std::vector<I>; // dim * phi, dense

  Vec zero_vec() const { return Vec(dim_ * kc_.phi, I(0)); }
  Vec basis_vec(Rank i) const;

  bool is_zero(const Vec& v) const;
  /// out += c * (A v), c a plain integer factor.
  void apply_acc(const KernelMatrix<I>& a, const Vec& v, Vec& out, const I& c) const;
  Vec apply(const KernelMatrix<I>& a, const Vec& v) const;
  /// out += c * v
  void axpy(const I& c, const Vec& v, Vec& out) const;

  /// Product of two Z[omega] scalars, reduced mod Phi_N; acc += a*b.
  void scalar_mul_acc(const I* a, const I* b, I* acc) const;

 private:
  const KernelContext& kc_;
  Rank dim_;
};

/// Exact conversion of a rational-coefficient sparse operator to the integer
/// kernel form; the returned scale clears every denominator.
template <class I>
KernelMatrix<I> to_kernel(const KernelContext& kc, const SparseOp& op);

/// Narrowing BigInt -> kernel coefficient; throws KernelOverflow for int64.
template <class I>
I to_coeff_checked(const BigInt& v);

/// Builds the sector restriction of the n-th divided power directly in
/// kernel form from the composition actions (no rational intermediate).
template <class I>
KernelMatrix<I> kernel_divided_power(const KernelContext& kc, const LatticeConfig& config,
                                     GenLabel g, long n, const std::vector<Rank>& sector);

extern template KernelMatrix<std::int64_t> to_kernel<std::int64_t>(const KernelContext&,
                                                                   const SparseOp&);
extern template KernelMatrix<BigInt> to_kernel<BigInt>(const KernelContext&, const SparseOp&);
extern template KernelMatrix<std::int64_t> kernel_divided_power<std::int64_t>(
    const KernelContext&, const LatticeConfig&, GenLabel, long, const std::vector<Rank>&);
extern template KernelMatrix<BigInt> kernel_divided_power<BigInt>(const KernelContext&,
                                                                  const LatticeConfig&, GenLabel,
                                                                  long, const std::vector<Rank>&);
extern template class KernelSpace<std::int64_t>;
extern template class KernelSpace<BigInt>;

} // namespace tau2
