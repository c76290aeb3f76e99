#include "marcink/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace marcink::fields {

namespace {

static_assert(std::endian::native == std::endian::little,
              "raw field I/O assumes a little-endian host");

void throw_io(const std::string& path, const char* what) {
  throw std::runtime_error(std::string(what) + ": " + path);
}

}  // namespace

void write_field(const std::string& path, const Field& f) {
  {
    std::ofstream raw(path, std::ios::binary | std::ios::trunc);
    if (!raw) throw_io(path, "cannot open field file for writing");
    raw.write(reinterpret_cast<const char*>(f.samples.data()),
              static_cast<std::streamsize>(f.samples.size() * sizeof(cplx)));
    if (!raw) throw_io(path, "short write on field file");
  }
  nlohmann::json sidecar{
      {"d", f.grid.d},
      {"n_per_axis", f.grid.n},
      {"L", f.grid.L},
      {"domain_side", f.side == Side::Space ? "space" : "frequency"}};
  std::ofstream meta(path + ".json", std::ios::trunc);
  if (!meta) throw_io(path + ".json", "cannot open sidecar for writing");
  meta << sidecar.dump(2) << "\n";
}

Field read_field(const std::string& path) {
  nlohmann::json sidecar;
  {
    std::ifstream meta(path + ".json");
    if (!meta) throw_io(path + ".json", "cannot open sidecar");
    meta >> sidecar;
  }
  Grid g = make_grid(sidecar.at("d").get<int>(),
                     sidecar.at("n_per_axis").get<int>(),
                     sidecar.at("L").get<double>());
  const std::string side_str = sidecar.at("domain_side").get<std::string>();
  Side side;
  if (side_str == "space") {
    side = Side::Space;
  } else if (side_str == "frequency") {
    side = Side::Frequency;
  } else {
    throw std::runtime_error("sidecar domain_side must be space|frequency: " +
                             path);
  }
  Field f = make_field(g, side);
  std::ifstream raw(path, std::ios::binary);
  if (!raw) throw_io(path, "cannot open field file");
  raw.read(reinterpret_cast<char*>(f.samples.data()),
           static_cast<std::streamsize>(f.samples.size() * sizeof(cplx)));
  if (raw.gcount() !=
      static_cast<std::streamsize>(f.samples.size() * sizeof(cplx)))
    throw_io(path, "field file too short for its sidecar");
  return f;
}

}  // namespace marcink::fields
