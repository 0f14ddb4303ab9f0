#include "zakharov/field_io.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>

#include "zakharov/errors.hpp"

namespace zakharov {

namespace {
constexpr std::array<char, 4> kMagic{'Z', 'K', 'F', '1'};
}

void write_field_binary(const SpectralField& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
  const auto& g = field.grid();
  const std::int32_t dim = g.dim(), points = g.points();
  const double box = g.box_length();
  out.write(kMagic.data(), kMagic.size());
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  out.write(reinterpret_cast<const char*>(&points), sizeof points);
  out.write(reinterpret_cast<const char*>(&box), sizeof box);
  const auto c = field.coefficients();
  out.write(reinterpret_cast<const char*>(c.data()),
            static_cast<std::streamsize>(c.size() * sizeof(cplx)));
  if (!out) throw InvalidArgument("failed writing " + path.string());
}

SpectralField read_field_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::array<char, 4> magic{};
  std::int32_t dim = 0, points = 0;
  double box = 0.0;
  in.read(magic.data(), magic.size());
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  in.read(reinterpret_cast<char*>(&points), sizeof points);
  in.read(reinterpret_cast<char*>(&box), sizeof box);
  if (!in || magic != kMagic) throw InvalidArgument(path.string() + " is not a field dump");
  auto grid = make_grid(dim, box, points);
  std::vector<cplx> coeffs(grid->size());
  in.read(reinterpret_cast<char*>(coeffs.data()),
          static_cast<std::streamsize>(coeffs.size() * sizeof(cplx)));
  if (!in) throw InvalidArgument(path.string() + " is truncated");
  return SpectralField(std::move(grid), std::move(coeffs));
}

void write_field_csv(const SpectralField& field, std::ostream& out) {
  const auto& g = field.grid();
  for (int a = 0; a < g.dim(); ++a) out << 'm' << (a + 1) << ',';
  out << "re,im\n";
  char buf[96];
  for (std::size_t i = 0; i < field.size(); ++i) {
    const Modes m = g.modes(i);
    for (int a = 0; a < g.dim(); ++a) out << m[a] << ',';
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", field[i].real(), field[i].imag());
    out << buf;
  }
}

}  // namespace zakharov
