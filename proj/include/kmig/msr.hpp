#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "kmig/forward.hpp"
#include "kmig/geometry.hpp"
#include "kmig/types.hpp"

namespace kmig {

/// Receivers (1-based, ascending) that record data while emitter m transmits.
/// Under the default array this is {2m + p (mod 72) : p = 11..59}, with a
/// zero remainder mapped to 72.
std::vector<int> index_set(int m, const ArrayConfig& config);

/// Multi-static response matrix: N x M complex entries (receiver n, emitter
/// m), zero wherever the receiver is outside the emitter's aperture. The
/// mask is kept alongside so a measured zero differs from an unmeasured cell.
class MsrMatrix {
 public:
  /// All-zero matrix with the configuration's mask.
  MsrMatrix(ArrayConfig config, Frequency frequency);

  /// Zero-fills unmeasured cells; throws IncompleteData listing every
  /// measured (m, n) pair missing from `fields`. Entries outside the
  /// aperture are ignored.
  static MsrMatrix assemble(const FieldMap& fields, const ArrayConfig& config,
                            Frequency frequency);

  int rows() const { return config_.receiver_count; }
  int cols() const { return config_.emitter_count; }

  /// 1-based (receiver n, emitter m).
  Complex at(int n, int m) const { return entries_[offset(n, m)]; }
  bool measured(int n, int m) const { return mask_[offset(n, m)] != 0; }

  /// Sets a measured cell; writing to an unmeasured cell throws GeometryMismatch.
  void set(int n, int m, Complex value);

  std::size_t measured_count() const;
  const ArrayConfig& config() const { return config_; }
  Frequency frequency() const { return frequency_; }

  /// Row-major (n outer, m inner) views.
  std::span<const Complex> entries() const { return entries_; }
  std::span<const std::uint8_t> mask() const { return mask_; }

  MsrMatrix scaled(Complex alpha) const;

  double max_abs() const;

 private:
  std::size_t offset(int n, int m) const;

  ArrayConfig config_;
  Frequency frequency_;
  std::vector<Complex> entries_;
  std::vector<std::uint8_t> mask_;
};

/// CSV dump: a `# f_hz=<value>` comment, header `n,m,re,im,measured`, then one
/// row per cell in (n, m) order. Values use 17 significant digits.
void write_msr_csv(std::ostream& out, const MsrMatrix& k);

/// Reads a dump written by write_msr_csv. The mask must agree with `config`.
/// A frequency recorded in the file wins over `fallback`.
MsrMatrix read_msr_csv(std::istream& in, const ArrayConfig& config,
                       Frequency fallback = Frequency{0.0});

/// Binary PGM (P5, 8 bit) of |entries| scaled to the maximum, rows = receivers.
void write_msr_pgm(std::ostream& out, const MsrMatrix& k);
/// Binary PGM of the mask: 255 measured, 0 not.
void write_mask_pgm(std::ostream& out, const MsrMatrix& k);

}  // namespace kmig
