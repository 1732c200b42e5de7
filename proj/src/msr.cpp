#include "kmig/msr.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "kmig/error.hpp"
#include "kmig/text_format.hpp"

namespace kmig {

std::vector<int> index_set(int m, const ArrayConfig& config) {
  std::vector<int> out;
  for (int n = 1; n <= config.receiver_count; ++n) {
    if (config.in_aperture(n, m)) out.push_back(n);
  }
  return out;
}

MsrMatrix::MsrMatrix(ArrayConfig config, Frequency frequency)
    : config_(config), frequency_(frequency) {
  config_.validate();
  const auto size = static_cast<std::size_t>(rows()) * static_cast<std::size_t>(cols());
  entries_.assign(size, Complex{0.0, 0.0});
  mask_.assign(size, 0);
  for (int n = 1; n <= rows(); ++n) {
    for (int m = 1; m <= cols(); ++m) {
      mask_[offset(n, m)] = config_.in_aperture(n, m) ? 1 : 0;
    }
  }
}

std::size_t MsrMatrix::offset(int n, int m) const {
  if (n < 1 || n > rows() || m < 1 || m > cols()) {
    throw IndexError("MSR cell (n=" + std::to_string(n) + ", m=" + std::to_string(m) +
                     ") outside " + std::to_string(rows()) + "x" + std::to_string(cols()));
  }
  return static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(cols()) +
         static_cast<std::size_t>(m - 1);
}

void MsrMatrix::set(int n, int m, Complex value) {
  const std::size_t i = offset(n, m);
  if (!mask_[i]) {
    throw GeometryMismatch("receiver " + std::to_string(n) + " is not measured for emitter " +
                           std::to_string(m));
  }
  entries_[i] = value;
}

MsrMatrix MsrMatrix::assemble(const FieldMap& fields, const ArrayConfig& config,
                              Frequency frequency) {
  MsrMatrix k(config, frequency);
  std::ostringstream missing;
  std::size_t missing_count = 0;
  for (int m = 1; m <= k.cols(); ++m) {
    for (int n = 1; n <= k.rows(); ++n) {
      if (!k.measured(n, m)) continue;
      const auto it = fields.find({m, n});
      if (it == fields.end()) {
        if (missing_count < 20) missing << " (m=" << m << ",n=" << n << ")";
        ++missing_count;
        continue;
      }
      k.entries_[k.offset(n, m)] = it->second;
    }
  }
  if (missing_count > 0) {
    throw IncompleteData(std::to_string(missing_count) + " measured entries missing:" +
                         missing.str() + (missing_count > 20 ? " ..." : ""));
  }
  return k;
}

std::size_t MsrMatrix::measured_count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

MsrMatrix MsrMatrix::scaled(Complex alpha) const {
  MsrMatrix out = *this;
  for (auto& v : out.entries_) v *= alpha;
  return out;
}

double MsrMatrix::max_abs() const {
  double best = 0.0;
  for (const auto& v : entries_) best = std::max(best, std::abs(v));
  return best;
}

void write_msr_csv(std::ostream& out, const MsrMatrix& k) {
  out << "# f_hz=" << format_number(k.frequency().hz) << "\n";
  out << "n,m,re,im,measured\n";
  for (int n = 1; n <= k.rows(); ++n) {
    for (int m = 1; m <= k.cols(); ++m) {
      const Complex v = k.at(n, m);
      out << n << ',' << m << ',' << format_number(v.real()) << ','
          << format_number(v.imag()) << ',' << (k.measured(n, m) ? 1 : 0) << '\n';
    }
  }
}

MsrMatrix read_msr_csv(std::istream& in, const ArrayConfig& config, Frequency fallback) {
  std::string line;
  std::size_t lineno = 0;
  Frequency f = fallback;
  bool header_seen = false;
  struct Cell {
    int n, m;
    Complex v;
    bool measured;
  };
  std::vector<Cell> cells;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const auto pos = t.find("f_hz=");
      if (pos != std::string_view::npos) {
        const auto v = parse_number(trim(t.substr(pos + 5)));
        if (!v) throw ParseError(lineno, "bad f_hz value");
        f = Frequency{*v};
      }
      continue;
    }
    if (!header_seen) {
      if (t != "n,m,re,im,measured") throw ParseError(lineno, "expected header n,m,re,im,measured");
      header_seen = true;
      continue;
    }
    const auto cols = split_char(t, ',');
    if (cols.size() != 5) throw ParseError(lineno, "expected 5 columns");
    double vals[5];
    for (int i = 0; i < 5; ++i) {
      const auto v = parse_number(cols[static_cast<std::size_t>(i)]);
      if (!v) throw ParseError(lineno, "non-numeric field \"" + std::string(cols[static_cast<std::size_t>(i)]) + "\"");
      vals[i] = *v;
    }
    cells.push_back({static_cast<int>(vals[0]), static_cast<int>(vals[1]), {vals[2], vals[3]},
                     vals[4] != 0.0});
  }
  if (!header_seen) throw ParseError(lineno, "missing MSR header");
  if (!(f.hz > 0.0)) throw ConfigError("MSR dump has no frequency and none was given");
  MsrMatrix k(config, f);
  for (const auto& c : cells) {
    if (c.measured != k.measured(c.n, c.m)) {
      throw GeometryMismatch("dump mask disagrees with the array config at (n=" +
                             std::to_string(c.n) + ", m=" + std::to_string(c.m) + ")");
    }
    if (c.measured) k.set(c.n, c.m, c.v);
  }
  return k;
}

namespace {

void write_pgm(std::ostream& out, int width, int height, const std::vector<std::uint8_t>& px) {
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
}

}  // namespace

void write_msr_pgm(std::ostream& out, const MsrMatrix& k) {
  const double peak = k.max_abs();
  std::vector<std::uint8_t> px;
  px.reserve(k.entries().size());
  for (const auto& v : k.entries()) {
    const double s = peak > 0.0 ? std::abs(v) / peak : 0.0;
    px.push_back(static_cast<std::uint8_t>(std::lround(s * 255.0)));
  }
  write_pgm(out, k.cols(), k.rows(), px);
}

void write_mask_pgm(std::ostream& out, const MsrMatrix& k) {
  std::vector<std::uint8_t> px;
  px.reserve(k.mask().size());
  for (auto b : k.mask()) px.push_back(b ? 255 : 0);
  write_pgm(out, k.cols(), k.rows(), px);
}

}  // namespace kmig
