#include "sigloc/matrix_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace sigloc {

namespace {

constexpr char kTextMagic[] = "SigLocMatrix v1 text";
constexpr char kBinaryMagic[4] = {'S', 'L', 'M', 'B'};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error("matrix container: truncated binary data");
  return v;
}

}  // namespace

MatrixContainer container_from(const OperatorMatrix& op) {
  MatrixContainer c;
  c.dim = op.dim();
  c.fiber = op.geom ? op.geom->fiber() : 1;
  c.hermitian = op.hermitian;
  if (op.geom) c.ordering = op.geom->describe();
  c.mat = op.mat;
  c.mat.makeCompressed();
  return c;
}

void write_matrix_text(std::ostream& os, const MatrixContainer& m) {
  os << kTextMagic << "\n";
  os << "dim " << m.dim << "\n";
  os << "fiber " << m.fiber << "\n";
  os << "hermitian " << (m.hermitian ? 1 : 0) << "\n";
  os << "ordering " << m.ordering << "\n";
  os << "nnz " << m.mat.nonZeros() << "\n";
  for (int k = 0; k < m.mat.outerSize(); ++k) {
    for (SparseCx::InnerIterator it(m.mat, k); it; ++it) {
      os << it.row() << " " << it.col() << " " << fmt(it.value().real()) << " "
         << fmt(it.value().imag()) << "\n";
    }
  }
}

void write_matrix_binary(std::ostream& os, const MatrixContainer& m) {
  os.write(kBinaryMagic, 4);
  put<std::uint32_t>(os, 1);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(m.dim));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(m.fiber));
  put<std::uint8_t>(os, m.hermitian ? 1 : 0);
  for (int i = 0; i < 3; ++i) put<std::uint8_t>(os, 0);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(m.ordering.size()));
  os.write(m.ordering.data(), static_cast<std::streamsize>(m.ordering.size()));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(m.mat.nonZeros()));
  for (int k = 0; k < m.mat.outerSize(); ++k) {
    for (SparseCx::InnerIterator it(m.mat, k); it; ++it) {
      put<std::uint64_t>(os, static_cast<std::uint64_t>(it.row()));
      put<std::uint64_t>(os, static_cast<std::uint64_t>(it.col()));
      put<double>(os, it.value().real());
      put<double>(os, it.value().imag());
    }
  }
}

namespace {

MatrixContainer read_text(std::istream& is) {
  MatrixContainer c;
  std::string key;
  long long dim = 0, nnz = 0;
  int herm = 0;
  if (!(is >> key) || key != "dim" || !(is >> dim))
    throw std::runtime_error("matrix container: bad text header (dim)");
  if (!(is >> key) || key != "fiber" || !(is >> c.fiber))
    throw std::runtime_error("matrix container: bad text header (fiber)");
  if (!(is >> key) || key != "hermitian" || !(is >> herm))
    throw std::runtime_error("matrix container: bad text header (hermitian)");
  if (!(is >> key) || key != "ordering" || !(is >> c.ordering))
    throw std::runtime_error("matrix container: bad text header (ordering)");
  if (!(is >> key) || key != "nnz" || !(is >> nnz))
    throw std::runtime_error("matrix container: bad text header (nnz)");
  c.dim = dim;
  c.hermitian = herm != 0;
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(nnz));
  for (long long e = 0; e < nnz; ++e) {
    long long r = 0, col = 0;
    double re = 0, im = 0;
    if (!(is >> r >> col >> re >> im))
      throw std::runtime_error("matrix container: truncated entry list");
    if (r < 0 || r >= dim || col < 0 || col >= dim)
      throw std::runtime_error("matrix container: entry out of range");
    trips.emplace_back(r, col, cplx(re, im));
  }
  c.mat = SparseCx(dim, dim);
  c.mat.setFromTriplets(trips.begin(), trips.end());
  return c;
}

MatrixContainer read_binary(std::istream& is) {
  MatrixContainer c;
  const auto version = get<std::uint32_t>(is);
  if (version != 1)
    throw std::runtime_error("matrix container: unsupported binary version");
  const auto dim = get<std::uint64_t>(is);
  c.fiber = static_cast<int>(get<std::uint32_t>(is));
  c.hermitian = get<std::uint8_t>(is) != 0;
  for (int i = 0; i < 3; ++i) get<std::uint8_t>(is);
  const auto dlen = get<std::uint32_t>(is);
  c.ordering.resize(dlen);
  is.read(c.ordering.data(), dlen);
  const auto nnz = get<std::uint64_t>(is);
  c.dim = static_cast<Eigen::Index>(dim);
  std::vector<Triplet> trips;
  trips.reserve(nnz);
  for (std::uint64_t e = 0; e < nnz; ++e) {
    const auto r = get<std::uint64_t>(is);
    const auto col = get<std::uint64_t>(is);
    const double re = get<double>(is);
    const double im = get<double>(is);
    if (r >= dim || col >= dim)
      throw std::runtime_error("matrix container: entry out of range");
    trips.emplace_back(static_cast<Eigen::Index>(r),
                       static_cast<Eigen::Index>(col), cplx(re, im));
  }
  c.mat = SparseCx(c.dim, c.dim);
  c.mat.setFromTriplets(trips.begin(), trips.end());
  return c;
}

}  // namespace

MatrixContainer read_matrix(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is) throw std::runtime_error("matrix container: empty stream");
  if (std::memcmp(magic, kBinaryMagic, 4) == 0) return read_binary(is);
  std::string rest;
  std::getline(is, rest);
  if (std::string(magic, 4) + rest != kTextMagic)
    throw std::runtime_error("matrix container: unrecognized header");
  return read_text(is);
}

void save_matrix(const std::string& path, const MatrixContainer& m,
                 bool binary) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  if (binary) {
    write_matrix_binary(os, m);
  } else {
    write_matrix_text(os, m);
  }
}

MatrixContainer load_matrix(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_matrix(is);
}

}  // namespace sigloc
